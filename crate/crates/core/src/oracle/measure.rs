//! `m(n, alpha, beta)` over all up-closed `A` in `2^[n]`.
//!
//! Up-closed families are truth tables of monotone Boolean functions, built by
//! doubling: a monotone `f` on `n` variables is a pair `f0 <= f1` on `n - 1`.
//! The largest `B` cross-intersecting an up-closed `A` is `{B : [n] \ B not in A}`,
//! so the product only depends on the size profile of `A`.

use std::collections::HashSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{is_open_unit, ExactRational};
use crate::error::{Error, Result};
use crate::family::{full_mask, GeneralFamily, SetMask};
use crate::oracle::{Method, OracleResult, OracleValue, Params, Witness};

pub const MEASURE_MAX_N: usize = 6;

/// Truth tables of all monotone functions on `n <= 5` variables.
fn monotone_tables(n: usize) -> Vec<u64> {
    let mut fs = vec![0u64, 1];
    for v in 1..=n {
        let half = 1u64 << (v - 1);
        let mut next = Vec::new();
        for &f1 in &fs {
            for &f0 in &fs {
                if f0 & !f1 == 0 {
                    next.push(f0 | f1 << half);
                }
            }
        }
        fs = next;
    }
    fs
}

/// Every monotone truth table on `n >= 1` variables, given those on `n - 1`.
fn monotone_par(lower: &[u64], n: usize) -> impl ParallelIterator<Item = u64> + '_ {
    let half = 1u64 << (n - 1);
    lower.par_iter().flat_map_iter(move |&f1| {
        lower
            .iter()
            .filter(move |&&f0| f0 & !f1 == 0)
            .map(move |&f0| f0 | f1 << half)
    })
}

/// Points of `2^[n]` grouped by size, as bitmasks over the truth table.
fn layer_masks(n: usize) -> Vec<u64> {
    let mut out = vec![0u64; n + 1];
    for s in 0..1u64 << n {
        out[s.count_ones() as usize] |= 1 << s;
    }
    out
}

fn profile(table: u64, layers: &[u64]) -> u64 {
    layers.iter().enumerate().fold(0u64, |acc, (t, &lm)| {
        acc | ((table & lm).count_ones() as u64) << (5 * t)
    })
}

fn unpack(key: u64, n: usize) -> Vec<u64> {
    (0..=n).map(|t| key >> (5 * t) & 31).collect()
}

/// Numerator of `mu_a(A) (1 - mu_{1-b}(A))` over the common denominator `q^n s^n`.
struct Scorer {
    a_weights: Vec<BigInt>,
    b_weights: Vec<BigInt>,
    b_total: BigInt,
    denominator: BigInt,
}

impl Scorer {
    fn new(n: usize, alpha: &ExactRational, beta: &ExactRational) -> Self {
        let (p, q) = (alpha.numer().clone(), alpha.denom().clone());
        let (r, s) = (beta.numer().clone(), beta.denom().clone());
        let pow = |x: &BigInt, e: usize| num_traits::pow(x.clone(), e);
        // weight of a t-set under alpha, and under 1 - beta
        let a_weights = (0..=n).map(|t| pow(&p, t) * pow(&(&q - &p), n - t)).collect();
        let b_weights = (0..=n).map(|t| pow(&(&s - &r), t) * pow(&r, n - t)).collect();
        Scorer {
            a_weights,
            b_weights,
            b_total: pow(&s, n),
            denominator: pow(&q, n) * pow(&s, n),
        }
    }

    fn score(&self, prof: &[u64]) -> BigInt {
        let dot = |w: &[BigInt]| prof.iter().zip(w).fold(BigInt::zero(), |acc, (&c, x)| acc + x * c);
        dot(&self.a_weights) * (&self.b_total - dot(&self.b_weights))
    }
}

fn minimal_members(table: u64, n: usize) -> Vec<SetMask> {
    let members: Vec<u64> = (0..1u64 << n).filter(|s| table >> s & 1 == 1).collect();
    members
        .iter()
        .copied()
        .filter(|&s| !members.iter().any(|&t| t != s && t & !s == 0))
        .collect()
}

fn permute_table(table: u64, n: usize, perm: &[usize]) -> u64 {
    (0..1u64 << n).filter(|s| table >> s & 1 == 1).fold(0u64, |acc, s| {
        let img = perm
            .iter()
            .enumerate()
            .filter(|(i, _)| s >> i & 1 == 1)
            .fold(0u64, |m, (_, &p)| m | 1 << p);
        acc | 1 << img
    })
}

/// Exact `m(n, alpha, beta)` with its optimal up-closed families up to relabelling.
pub fn measure_oracle(n: usize, alpha: &ExactRational, beta: &ExactRational) -> Result<OracleResult> {
    if n == 0 {
        return Err(Error::InvalidArgument("ground set must be nonempty".into()));
    }
    if n > MEASURE_MAX_N {
        return Err(Error::Capacity(format!(
            "measure oracle supports n <= {MEASURE_MAX_N}, got {n}"
        )));
    }
    if !is_open_unit(alpha) || !is_open_unit(beta) {
        return Err(Error::InvalidArgument(format!(
            "alpha = {alpha}, beta = {beta} must lie in (0, 1)"
        )));
    }
    let layers = layer_masks(n);
    let lower = monotone_tables(n - 1);
    let profiles: HashSet<u64> = monotone_par(&lower, n).map(|t| profile(t, &layers)).collect();
    let scorer = Scorer::new(n, alpha, beta);
    let scored: Vec<(u64, BigInt)> = profiles
        .par_iter()
        .map(|&key| (key, scorer.score(&unpack(key, n))))
        .collect();
    let best = scored.iter().map(|(_, v)| v).max().cloned().expect("nonempty");
    let winners: HashSet<u64> = scored.iter().filter(|(_, v)| *v == best).map(|(k, _)| *k).collect();

    let mut tables: Vec<u64> = monotone_par(&lower, n)
        .filter(|&t| winners.contains(&profile(t, &layers)))
        .collect();
    tables.sort_unstable();

    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    for &t in &tables {
        if seen.contains(&t) {
            continue;
        }
        let orbit: HashSet<u64> = perms.iter().map(|p| permute_table(t, n, p)).collect();
        let rep = *orbit.iter().min().expect("nonempty orbit");
        reps.push((rep, orbit.len()));
        seen.extend(orbit);
    }
    reps.sort_unstable();
    let witnesses = reps
        .into_iter()
        .map(|(rep, orbit_size)| Witness::Antichain {
            generators: minimal_members(rep, n),
            orbit_size,
        })
        .collect();
    Ok(OracleResult {
        params: Params::Measure {
            n,
            alpha: alpha.clone(),
            beta: beta.clone(),
        },
        value: OracleValue::Rational(ExactRational::new(best, scorer.denominator)),
        witnesses,
        method: Method::Enumeration,
        elapsed_ms: None,
    })
}

/// The up-closure of `generators` inside `2^[n]`.
pub fn up_closure(n: usize, generators: &[SetMask]) -> Result<GeneralFamily> {
    let full = full_mask(n);
    let members = (0..=full)
        .filter(|&s| generators.iter().any(|&g| g & !s == 0))
        .collect();
    GeneralFamily::new(n, members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_rational;
    use crate::constructions::measure;

    fn q(s: &str) -> ExactRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn monotone_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| monotone_tables(n).len()).collect();
        assert_eq!(counts, vec![2, 3, 6, 20, 168, 7581]);
        let five = monotone_tables(5);
        assert_eq!(monotone_par(&five, 6).count(), 7_828_354);
    }

    #[test]
    fn examples() {
        for n in 1..=4 {
            let r = measure_oracle(n, &q("1/3"), &q("3/5")).unwrap();
            assert!(r.rational().unwrap() >= &(q("1/3") * q("3/5")));
        }
        assert_eq!(
            measure_oracle(1, &q("1/3"), &q("3/5")).unwrap().rational(),
            Some(&q("1/5"))
        );
        let r = measure_oracle(4, &q("1/4"), &q("11/20")).unwrap();
        assert_eq!(r.rational(), Some(&q("11/80")));
        assert_eq!(
            r.witnesses,
            vec![Witness::Antichain {
                generators: vec![1],
                orbit_size: 4
            }]
        );
        let r = measure_oracle(4, &q("1/5"), &q("3/5")).unwrap();
        assert!(r.rational().unwrap() >= &q("81/625"));
        assert!(r.rational().unwrap() > &q("3/25"));
        assert_eq!(
            measure_oracle(1, &q("1/2"), &q("1/2")).unwrap().rational(),
            Some(&q("1/4"))
        );
        assert!(matches!(
            measure_oracle(7, &q("1/4"), &q("1/2")),
            Err(Error::Capacity(_))
        ));
        assert!(measure_oracle(3, &q("1"), &q("1/2")).is_err());
    }

    #[test]
    fn witnesses_reevaluate() {
        let (a, b) = (q("1/5"), q("3/5"));
        for n in 2..=4 {
            let r = measure_oracle(n, &a, &b).unwrap();
            for w in &r.witnesses {
                let Witness::Antichain { generators, .. } = w else {
                    unreachable!()
                };
                let fam = up_closure(n, generators).unwrap();
                let full = full_mask(n);
                let cross = GeneralFamily::new(n, (0..=full).filter(|&s| !fam.contains(full & !s)).collect()).unwrap();
                assert!(crate::constructions::is_cross_intersecting(
                    fam.members(),
                    cross.members()
                ));
                let v = measure(&fam, &a).unwrap() * measure(&cross, &b).unwrap();
                assert_eq!(&v, r.rational().unwrap());
            }
        }
    }

    #[test]
    fn nondecreasing_in_n() {
        for (a, b) in [("1/5", "3/5"), ("1/4", "11/20"), ("2/5", "1/2")] {
            let mut prev = ExactRational::zero();
            for n in 1..=5 {
                let v = measure_oracle(n, &q(a), &q(b)).unwrap().rational().unwrap().clone();
                assert!(v >= prev);
                assert!(v >= q(a) * q(b));
                prev = v;
            }
        }
    }

    #[test]
    fn brute_force_agrees_at_three() {
        // every pair of families on [3], no monotonicity assumed
        let (a, b) = (q("1/5"), q("3/5"));
        let mut best = ExactRational::zero();
        for fa in 0u32..256 {
            let am: Vec<u64> = (0..8).filter(|s| fa >> s & 1 == 1).collect();
            let bm: Vec<u64> = (0..8).filter(|&s| am.iter().all(|&x| x & s != 0)).collect();
            let va = measure(&GeneralFamily::new(3, am).unwrap(), &a).unwrap();
            let vb = measure(&GeneralFamily::new(3, bm).unwrap(), &b).unwrap();
            best = best.max(va * vb);
        }
        assert_eq!(measure_oracle(3, &a, &b).unwrap().rational(), Some(&best));
    }
}
