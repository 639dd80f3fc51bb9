//! Product polynomials `F(x)` of the three case claims and the limiting
//! inequalities that control them.

use crate::arith::{binom_u, gen_binom, natural_to_f64, Natural};
use crate::error::{Error, Result};
use crate::regions::{ln_one_minus_e, RegionPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClaimKind {
    /// One fractional level below the star (levels `n-k-2`, `l-2`).
    A,
    /// Two levels below (`n-k-3`, `l-3`).
    B,
    /// Directly on the star (`n-k-1`, `l-1`).
    C,
}

/// Parameters of one product polynomial together with its constants `X`, `Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimInstance {
    pub kind: ClaimKind,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub i: usize,
    pub eps: usize,
    pub x_const: Natural,
    pub y_const: Natural,
}

impl ClaimInstance {
    pub fn new(kind: ClaimKind, n: usize, k: usize, l: usize, i: usize, eps: usize) -> Result<Self> {
        if i < 2 {
            return Err(Error::InvalidArgument(format!("claim index i must be >= 2, got {i}")));
        }
        if kind == ClaimKind::B && eps < 1 {
            return Err(Error::InvalidArgument("kind B needs eps >= 1".into()));
        }
        if k + l >= n || k < 3 || l < 3 || i + eps + 1 > n {
            return Err(Error::InvalidArgument(format!(
                "claim parameters out of range (n={n}, k={k}, l={l}, i={i}, eps={eps})"
            )));
        }
        let b = |a: usize, c: i64| binom_u(a as u64, c);
        let (ni, nk, li) = (n as i64, k as i64, l as i64);
        let (x_const, y_const) = match kind {
            ClaimKind::A => (
                b(n - 1, ni - nk) + b(n - i, ni - nk - 1),
                b(n - 1, li - 1) - b(n - i, li - 1),
            ),
            ClaimKind::B => (
                b(n - 1, ni - nk) + b(n - i, ni - nk - 1) + b(n - i - 1, ni - nk - 2),
                b(n - 1, li - 1) - b(n - i, li - 1) - b(n - i - 1, li - 2),
            ),
            ClaimKind::C => (b(n - 1, ni - nk), b(n - 1, li - 1)),
        };
        Ok(ClaimInstance {
            kind,
            n,
            k,
            l,
            i,
            eps,
            x_const,
            y_const,
        })
    }

    /// Levels of the two fractional binomials in `F`.
    pub fn levels(&self) -> (i64, i64) {
        let (n, k, l) = (self.n as i64, self.k as i64, self.l as i64);
        match self.kind {
            ClaimKind::A => (n - k - 2, l - 2),
            ClaimKind::B => (n - k - 3, l - 3),
            ClaimKind::C => (n - k - 1, l - 1),
        }
    }

    /// Closed interval of admissible `x`.
    pub fn x_range(&self) -> (f64, f64) {
        let (n, k, i, eps) = (self.n as f64, self.k as f64, self.i as f64, self.eps as f64);
        match self.kind {
            ClaimKind::A => (n - k - 3.0, n - i - eps),
            ClaimKind::B => (n - k - 4.0, n - i - eps),
            ClaimKind::C => (n - k - 2.0, n - i),
        }
    }
}

/// `F(x) = (X + C(x, level_a)) (Y - C(x, level_b))`.
pub fn claim_f(ci: &ClaimInstance, x: f64) -> Result<f64> {
    let (lo, hi) = ci.x_range();
    if !(x >= lo && x <= hi) {
        return Err(Error::InvalidArgument(format!("x = {x} outside [{lo}, {hi}]")));
    }
    let (la, lb) = ci.levels();
    let left = natural_to_f64(&ci.x_const) + gen_binom(x, la);
    let right = natural_to_f64(&ci.y_const) - gen_binom(x, lb);
    Ok(left * right)
}

/// `ln ln (1/y)` for `0 < y < 1`.
fn ln_ln_inv(y: f64) -> f64 {
    (-y.ln()).ln()
}

/// Evaluates the limiting inequality that makes `F(x)` stay below its endpoint
/// maximum (kinds A and B) or below `XY` (kind C). Compared in log space.
pub fn claim_conditions(p: RegionPoint, i: usize, eps: usize, kind: ClaimKind) -> Result<bool> {
    if i < 2 {
        return Err(Error::InvalidArgument(format!("claim index i must be >= 2, got {i}")));
    }
    let (a, ab, b, bb) = (p.alpha(), p.alpha_bar(), p.beta(), p.beta_bar());
    let (la, lab, lb, lbb) = (a.ln(), ab.ln(), b.ln(), bb.ln());
    let (i, e) = (i as f64, eps as f64);
    let (lhs, rhs, strict) = match kind {
        ClaimKind::A => {
            let lhs = (1.0 - bb.powf(i - 1.0)).ln() - lb - (i - 2.0 + e) * lbb + ln_ln_inv(bb);
            let rhs = (a.powf(i - 2.0) * ab).ln_1p() - (i - 3.0 + e) * la - 2.0 * lab + ln_ln_inv(a);
            (lhs, rhs, false)
        }
        ClaimKind::B => {
            if eps < 1 {
                return Err(Error::InvalidArgument("kind B needs eps >= 1".into()));
            }
            let num = 1.0 - bb.powf(i - 1.0) - b * bb.powf(i - 1.0);
            let lhs = num.ln() - 2.0 * lb - (i - 3.0 + e) * lbb + ln_ln_inv(bb);
            let rhs = (ab * a.powf(i - 2.0) + ab * ab * a.powf(i - 2.0)).ln_1p() - 3.0 * lab - (i - 4.0 + e) * la
                + ln_ln_inv(a);
            (lhs, rhs, false)
        }
        ClaimKind::C => {
            let lhs = -(i - 1.0) * lbb + ln_ln_inv(bb);
            let rhs = -(i - 2.0) * la - lab + ln_ln_inv(a);
            (lhs, rhs, true)
        }
    };
    Ok(if strict { lhs < rhs } else { lhs <= rhs })
}

/// `(1 + a^(i-2)(1-a)) ln(1/(1 - e_{i-2})) < ln(1/a)`.
pub fn large_i_condition(alpha: f64, i: usize) -> bool {
    let j = i - 2;
    let factor = (alpha.powi(j as i32) * (1.0 - alpha)).ln_1p().exp();
    factor * -ln_one_minus_e(alpha, j) < -alpha.ln()
}

/// `gamma * b^(t-1) < 1` with `gamma = 1 + (1-a) + ... + (1-a)^t`.
pub fn tail_bound(t: usize, p: RegionPoint) -> Result<bool> {
    if t < 4 {
        return Err(Error::InvalidArgument(format!("tail_bound needs t >= 4, got {t}")));
    }
    let gamma: f64 = (0..=t).map(|m| p.alpha_bar().powi(m as i32)).sum();
    Ok(gamma * p.beta().powi(t as i32 - 1) < 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::kk_cross_bound;
    use crate::constructions::{measure_aj, measure_bj};
    use crate::regions::{boundary_condition, e_j, i0, in_delta, tilde_constants};

    fn pt(a: f64, b: f64) -> RegionPoint {
        RegionPoint::new(a, b).unwrap()
    }

    fn scaled(alpha: f64, beta: f64, n: usize) -> (usize, usize) {
        ((alpha * n as f64).floor() as usize, (beta * n as f64).floor() as usize)
    }

    #[test]
    fn kind_c_matches_cross_bound_at_integers() {
        for (n, k, l) in [(20, 5, 11), (30, 8, 16), (16, 4, 9)] {
            for i in 2..5 {
                let ci = ClaimInstance::new(ClaimKind::C, n, k, l, i, 0).unwrap();
                let (lo, hi) = ci.x_range();
                let mut x = lo.ceil() as u64;
                while x as f64 <= hi {
                    if x as usize >= n - k - 1 {
                        let m = &ci.x_const + binom_u(x, (n - k - 1) as i64);
                        let exact = &m * kk_cross_bound(n, k, l, &m).unwrap();
                        let f = claim_f(&ci, x as f64).unwrap();
                        let e = natural_to_f64(&exact);
                        assert!((f - e).abs() <= 1e-9 * e, "n={n} k={k} l={l} x={x}");
                    }
                    x += 1;
                }
            }
        }
    }

    #[test]
    fn kind_a_matches_cross_bound_at_integers() {
        let (n, k, l) = (24, 6, 13);
        for i in 3..6 {
            let ci = ClaimInstance::new(ClaimKind::A, n, k, l, i, 0).unwrap();
            for x in (n - k - 2) as u64..(n - i) as u64 {
                let m = &ci.x_const + binom_u(x, (n - k - 2) as i64);
                let exact = &m * kk_cross_bound(n, k, l, &m).unwrap();
                let f = claim_f(&ci, x as f64).unwrap();
                let e = natural_to_f64(&exact);
                assert!((f - e).abs() <= 1e-9 * e, "i={i} x={x}");
            }
        }
    }

    #[test]
    fn kind_a_endpoint_is_the_next_perturbed_pair() {
        // at x = n - i the A-side becomes |A_{i-3}| and the B-side |B_{i-3}|
        let (alpha, beta) = (0.25, 0.55);
        let n = 400;
        let (k, l) = scaled(alpha, beta, n);
        let ci = ClaimInstance::new(ClaimKind::A, n, k, l, 3, 0).unwrap();
        let f = claim_f(&ci, (n - 3) as f64).unwrap();
        let norm = natural_to_f64(&binom_u(n as u64, k as i64)) * natural_to_f64(&binom_u(n as u64, l as i64));
        let limit = measure_aj(alpha, 0) * measure_bj(beta, 0);
        assert!(
            ((f / norm) - limit).abs() / limit < 0.02,
            "ratio {} vs {}",
            f / norm,
            limit
        );
        // i = 2 collapses the B-side to nothing
        let ci = ClaimInstance::new(ClaimKind::A, n, k, l, 2, 0).unwrap();
        let xy = natural_to_f64(&ci.x_const) * natural_to_f64(&ci.y_const);
        assert!(claim_f(&ci, (n - 2) as f64).unwrap().abs() < 1e-9 * xy);
    }

    #[test]
    fn kind_c_endpoint_below_star_product() {
        let (alpha, beta) = (0.25, 0.55);
        let n = 400;
        let (k, l) = scaled(alpha, beta, n);
        for i in 2..6 {
            assert!(boundary_condition(pt(alpha, beta), i - 2));
            let ci = ClaimInstance::new(ClaimKind::C, n, k, l, i, 0).unwrap();
            let xy = natural_to_f64(&ci.x_const) * natural_to_f64(&ci.y_const);
            assert!(claim_f(&ci, (n - i) as f64).unwrap() < xy);
        }
    }

    #[test]
    fn f_rejects_out_of_range() {
        let ci = ClaimInstance::new(ClaimKind::A, 40, 10, 22, 2, 1).unwrap();
        assert!(claim_f(&ci, 100.0).is_err());
        assert!(claim_f(&ci, 10.0).is_err());
        assert!(ClaimInstance::new(ClaimKind::B, 40, 10, 22, 2, 0).is_err());
        assert!(ClaimInstance::new(ClaimKind::A, 40, 10, 22, 1, 0).is_err());
    }

    fn delta_sample() -> Vec<RegionPoint> {
        let mut out = Vec::new();
        for ai in 1..60 {
            let a = ai as f64 / 120.0;
            let top = (0..=64).map(|j| e_j(a, j)).fold(1.0 - a, f64::min);
            for frac in [0.2, 0.5, 0.8, 0.98] {
                let b = 0.5 + (top - 0.5) * frac;
                if b > 0.5 {
                    if let Ok(true) = in_delta(pt(a, b), 64) {
                        out.push(pt(a, b));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn conditions_hold_on_delta() {
        let sample = delta_sample();
        assert!(sample.len() > 50);
        for p in &sample {
            assert!(claim_conditions(*p, 2, 1, ClaimKind::A).unwrap());
            assert!(claim_conditions(*p, 3, 1, ClaimKind::A).unwrap());
            assert!(claim_conditions(*p, 2, 2, ClaimKind::B).unwrap());
            if p.alpha() > 0.23 {
                assert!(claim_conditions(*p, 3, 1, ClaimKind::B).unwrap());
            }
            let i = i0(p.alpha(), 1000).unwrap();
            assert!(claim_conditions(*p, i, 0, ClaimKind::C).unwrap());
            for t in 4..=50 {
                assert!(tail_bound(t, *p).unwrap());
            }
        }
    }

    #[test]
    fn large_i_approaches_log_from_below() {
        for a in [0.1f64, 0.25, 0.4] {
            let lhs = (1.0 + a.powi(498) * (1.0 - a)) * -ln_one_minus_e(a, 498);
            let target = -a.ln();
            assert!(lhs < target);
            assert!(target - lhs < 1e-2);
            assert!(large_i_condition(a, 500));
        }
    }

    #[test]
    fn tail_bound_examples() {
        let (at, bt) = tilde_constants();
        assert!(bt.powi(3) < 0.21);
        assert!((6.0 * bt.powi(4) - 0.7065).abs() < 1e-4);
        assert!(tail_bound(4, pt(at, bt)).unwrap());
        for a in [0.01, 0.2, 0.4, 0.49] {
            assert!(tail_bound(5, pt(a, bt)).unwrap());
        }
        assert!(tail_bound(3, pt(at, bt)).is_err());
    }
}
