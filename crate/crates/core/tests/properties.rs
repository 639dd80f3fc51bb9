use num_traits::{One, Zero};
use proptest::prelude::*;

use crossint::arith::{binom_u, gen_binom, solve_binom_x, ExactRational, Natural};
use crossint::cascade::{
    cascade_decompose, kk_cross_bound, lovasz_bound, shadow_lower_bound, truncate_cascade, Truncation,
};
use crossint::constructions::{is_cross_intersecting, measure, measure_aj, measure_bj};
use crossint::family::{layer, shadow, GeneralFamily, UniformFamily};
use crossint::oracle::{colex_witness, max_product_cascade, measure_oracle, Witness};
use crossint::regions::{boundary_condition, e_j, in_delta, in_omega, in_omega_prime, RegionPoint, DEFAULT_J_CAP};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn solve_then_evaluate(m in 1u64..5_000_000, r in 1i64..9) {
        let m_nat = Natural::from(m);
        let top = (r as u64..).find(|&a| binom_u(a + 1, r) > m_nat).unwrap();
        let x = solve_binom_x(&m_nat, r, top as f64, (top + 1) as f64).unwrap();
        let back = gen_binom(x, r);
        prop_assert!((back - m as f64).abs() <= 1e-9 * (m as f64).max(1.0));
    }

    #[test]
    fn shadows_never_beat_the_bound(n in 3usize..=8, u_off in 0usize..6, v_off in 0usize..6, pick in any::<u64>()) {
        let u = 2 + u_off % (n - 2);
        let v = 1 + v_off % (u - 1);
        let all: Vec<u64> = layer(n, u).collect();
        let members: Vec<u64> = all.iter().enumerate().filter(|(i, _)| pick >> (i % 64) & 1 == 1).map(|(_, &m)| m).collect();
        prop_assume!(!members.is_empty());
        let f = UniformFamily::new(n, u, members).unwrap();
        let sh = shadow(&f, v).unwrap();
        let kk = shadow_lower_bound(&Natural::from(f.len()), u, v).unwrap();
        prop_assert!(Natural::from(sh.len()) >= kk);
    }

    #[test]
    fn lovasz_below_kk(m in 1u64..200_000, u in 2usize..9, v_off in 0usize..8) {
        let v = 1 + v_off % (u - 1);
        let m_nat = Natural::from(m);
        let c = cascade_decompose(&m_nat, u).unwrap();
        let kk = crossint::arith::natural_to_f64(&shadow_lower_bound(&m_nat, u, v).unwrap());
        let t = c.t();
        let mut forms = vec![Truncation::Degenerate];
        forms.extend((1..t).map(Truncation::Keep));
        for how in forms {
            let tc = truncate_cascade(&c, how).unwrap();
            let lb = lovasz_bound(&tc, v).unwrap();
            prop_assert!(lb <= kk * (1.0 + 1e-12) + 1e-9);
            let single_tail = match how {
                Truncation::Degenerate => c.pairs().len() == 1,
                Truncation::Keep(s) => s + 2 == c.pairs().len(),
            };
            if single_tail {
                prop_assert!((lb - kk).abs() <= 1e-9 * kk.max(1.0), "{how:?}: {lb} vs {kk}");
            }
        }
    }

    #[test]
    fn cross_bound_is_attained(n in 3usize..=10, k_off in 0usize..9, l_off in 0usize..9, m_frac in 0.0f64..1.0) {
        let k = 1 + k_off % (n - 1);
        let l = 1 + l_off % (n - 1);
        prop_assume!(k + l <= n);
        let total: u64 = binom_u(n as u64, k as i64).try_into().unwrap();
        let m = 1 + ((total - 1) as f64 * m_frac) as u64;
        let (a, b) = colex_witness(n, k, l, m).unwrap();
        prop_assert!(is_cross_intersecting(a.members(), b.members()));
        prop_assert_eq!(a.len() as u64, m);
        prop_assert_eq!(Natural::from(b.len()), kk_cross_bound(n, k, l, &Natural::from(m)).unwrap());
    }

    #[test]
    fn measures_are_probabilities(n in 1usize..=8, pick in any::<u64>(), p_num in 1u32..50) {
        let p = ExactRational::new(p_num.into(), 50.into());
        let members: Vec<u64> = (0..1u64 << n).filter(|s| (pick.rotate_left(*s as u32)) & 1 == 1).collect();
        let f = GeneralFamily::new(n, members).unwrap();
        let mu = measure(&f, &p).unwrap();
        prop_assert!(mu >= ExactRational::zero() && mu <= ExactRational::one());
    }

    #[test]
    fn three_way_equivalence(a in 0.001f64..0.999, b in 0.001f64..0.999, j in 0usize..20) {
        let e = e_j(a, j);
        prop_assume!((b - e).abs() > 1e-9);
        let p = RegionPoint::new(a, b).unwrap();
        prop_assert_eq!(boundary_condition(p, j), b < e);
        prop_assert_eq!(measure_aj(a, j) * measure_bj(b, j) < a * b, b < e);
    }

    #[test]
    fn delta_is_downward_closed(a in 0.001f64..0.499, t in 0.0f64..1.0, s in 0.0f64..1.0) {
        let b = 0.5 + 1e-6 + (0.5 - a - 2e-6) * t;
        prop_assume!(in_omega(a, b));
        if let Ok(true) = in_delta(RegionPoint::new(a, b).unwrap(), DEFAULT_J_CAP) {
            let lower = 0.5 + 1e-6 + (b - 0.5 - 1e-6) * s;
            prop_assert_eq!(in_delta(RegionPoint::new(a, lower).unwrap(), DEFAULT_J_CAP), Ok(true));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn measure_oracle_at_least_star(n in 1usize..=4, a in 1u32..20, b in 1u32..20) {
        let alpha = ExactRational::new(a.into(), 20.into());
        let beta = ExactRational::new(b.into(), 20.into());
        let v = measure_oracle(n, &alpha, &beta).unwrap();
        prop_assert!(v.rational().unwrap() >= &(alpha * beta));
    }
}

#[test]
fn witnesses_respect_the_second_family_bound() {
    for n in 3..=12usize {
        for k in 1..n {
            for l in 1..n {
                if !in_omega_prime(n, k, l) {
                    continue;
                }
                let cap = binom_u(n as u64 - 1, l as i64 - 1);
                for w in max_product_cascade(n, k, l).unwrap().witnesses {
                    let Witness::Size { b_size, .. } = w else {
                        unreachable!()
                    };
                    assert!(b_size <= cap, "n={n} k={k} l={l}");
                }
            }
        }
    }
}
