//! Brute force over every `A` inside the `k`-th layer.
//!
//! For each `l`-set `B`, `D(B)` is the bitmask of `k`-sets disjoint from it.
//! `B` meets all of `A` exactly when `D(B) & A == 0`, so a subset-sum
//! transform of the multiplicities of `D(B)` gives `|B(A)|` for every `A` at once.

use std::collections::HashSet;

use itertools::Itertools;
use rayon::prelude::*;

use crate::arith::{binom_u, Natural};
use crate::error::{Error, Result};
use crate::family::{layer, SetMask};
use crate::oracle::{check_uniform, Method, OracleResult, OracleValue, Params, Witness};

/// Largest `C(n,k)` the enumeration accepts.
pub const ENUMERATION_CAP: u64 = 24;

pub fn max_product_enumeration(n: usize, k: usize, l: usize) -> Result<OracleResult> {
    check_uniform(n, k, l)?;
    let total = binom_u(n as u64, k as i64);
    if k + l > n {
        let b = binom_u(n as u64, l as i64);
        let all: Vec<SetMask> = layer(n, k).take(ENUMERATION_CAP as usize + 1).collect();
        let witnesses = if total <= Natural::from(ENUMERATION_CAP) {
            let b_size = usize::try_from(&b).expect("small");
            vec![Witness::Family {
                a: all,
                b_size,
                orbit_size: 1,
            }]
        } else {
            Vec::new()
        };
        return Ok(OracleResult {
            params: Params::Uniform { n, k, l },
            value: OracleValue::Natural(&total * b),
            witnesses,
            method: Method::Enumeration,
            elapsed_ms: None,
        });
    }
    if total > Natural::from(ENUMERATION_CAP) {
        return Err(Error::Capacity(format!(
            "C({n},{k}) = {total} exceeds the enumeration cap {ENUMERATION_CAP}"
        )));
    }
    let ksets: Vec<SetMask> = layer(n, k).collect();
    let width = ksets.len();
    let size = 1usize << width;

    let mut count = vec![0u32; size];
    for bm in layer(n, l) {
        let d = ksets
            .iter()
            .enumerate()
            .filter(|(_, &a)| a & bm == 0)
            .fold(0usize, |acc, (i, _)| acc | 1 << i);
        count[d] += 1;
    }
    for bit in 0..width {
        count.par_chunks_mut(2 << bit).for_each(|chunk| {
            let (lo, hi) = chunk.split_at_mut(1 << bit);
            for (h, &l) in hi.iter_mut().zip(lo.iter()) {
                *h += l;
            }
        });
    }
    let full = size - 1;
    let (best, optimal) = (1..size)
        .into_par_iter()
        .fold(
            || (0u64, Vec::new()),
            |(best, mut opt), a| {
                let v = a.count_ones() as u64 * count[full & !a] as u64;
                if v > best {
                    (v, vec![a])
                } else {
                    if v == best {
                        opt.push(a);
                    }
                    (best, opt)
                }
            },
        )
        .reduce(
            || (0u64, Vec::new()),
            |x, y| match x.0.cmp(&y.0) {
                std::cmp::Ordering::Greater => x,
                std::cmp::Ordering::Less => y,
                std::cmp::Ordering::Equal => (x.0, [x.1, y.1].concat()),
            },
        );
    let witnesses = orbit_representatives(n, k, &ksets, optimal)
        .into_iter()
        .map(|(rep, orbit_size)| Witness::Family {
            a: members(&ksets, rep),
            b_size: count[full & !rep] as usize,
            orbit_size,
        })
        .collect();
    Ok(OracleResult {
        params: Params::Uniform { n, k, l },
        value: OracleValue::Natural(Natural::from(best)),
        witnesses,
        method: Method::Enumeration,
        elapsed_ms: None,
    })
}

fn members(ksets: &[SetMask], a: usize) -> Vec<SetMask> {
    (0..ksets.len()).filter(|i| a >> i & 1 == 1).map(|i| ksets[i]).collect()
}

fn permute_set(m: SetMask, perm: &[usize]) -> SetMask {
    perm.iter()
        .enumerate()
        .filter(|(i, _)| m >> i & 1 == 1)
        .fold(0, |acc, (_, &p)| acc | 1 << p)
}

/// Orbits of the optimal `A` under the symmetric group, as (least member, orbit size).
fn orbit_representatives(n: usize, k: usize, ksets: &[SetMask], mut optimal: Vec<usize>) -> Vec<(usize, usize)> {
    optimal.sort_unstable();
    if k == 1 || k == n - 1 {
        // the group acts on the layer as the full symmetric group, so only |A| matters
        let width = ksets.len() as u64;
        return optimal
            .iter()
            .map(|a| a.count_ones())
            .sorted_unstable()
            .dedup()
            .map(|c| {
                let size: usize = binom_u(width, c as i64).try_into().expect("small");
                ((1usize << c) - 1, size)
            })
            .collect();
    }
    let index = |m: SetMask| ksets.binary_search(&m).expect("permuted k-set");
    let perms: Vec<Vec<usize>> = (0..n)
        .permutations(n)
        .map(|p| ksets.iter().map(|&m| index(permute_set(m, &p))).collect())
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &a in &optimal {
        if seen.contains(&a) {
            continue;
        }
        let orbit: HashSet<usize> = perms
            .iter()
            .map(|p| {
                (0..ksets.len())
                    .filter(|i| a >> i & 1 == 1)
                    .fold(0usize, |acc, i| acc | 1 << p[i])
            })
            .collect();
        let rep = *orbit.iter().min().expect("nonempty orbit");
        out.push((rep, orbit.len()));
        seen.extend(orbit);
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::is_cross_intersecting;
    use crate::oracle::{max_product_cascade, star_product};

    fn nat(x: u64) -> Natural {
        Natural::from(x)
    }

    #[test]
    fn examples() {
        let r = max_product_enumeration(5, 1, 3).unwrap();
        assert_eq!(r.natural(), Some(&nat(6)));
        let sizes: Vec<usize> = r
            .witnesses
            .iter()
            .map(|w| match w {
                Witness::Family { a, .. } => a.len(),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(sizes, vec![1, 2]);
        let r = max_product_enumeration(7, 2, 4).unwrap();
        assert_eq!(r.natural(), Some(&nat(120)));
        assert_eq!(r.witnesses.len(), 1);
        let Witness::Family { a, orbit_size, .. } = &r.witnesses[0] else {
            unreachable!()
        };
        assert_eq!(*orbit_size, 7);
        assert_eq!(a.iter().fold(u64::MAX, |x, &m| x & m), 1);
        assert_eq!(max_product_enumeration(6, 4, 3).unwrap().natural(), Some(&nat(15 * 20)));
        assert!(matches!(max_product_enumeration(8, 2, 3), Err(Error::Capacity(_))));
    }

    #[test]
    fn witnesses_reevaluate() {
        for (n, k, l) in [(5, 2, 2), (6, 2, 3), (7, 2, 4), (9, 1, 4)] {
            let r = max_product_enumeration(n, k, l).unwrap();
            for w in &r.witnesses {
                let Witness::Family { a, b_size, .. } = w else {
                    unreachable!()
                };
                let b: Vec<_> = layer(n, l).filter(|&bm| a.iter().all(|&am| am & bm != 0)).collect();
                assert!(is_cross_intersecting(a, &b));
                assert_eq!(b.len(), *b_size);
                assert_eq!(Natural::from(a.len() * b.len()), *r.natural().unwrap());
            }
        }
    }

    #[test]
    fn agrees_with_sweep_small() {
        for n in 2..=6usize {
            for k in 1..n {
                for l in 1..n {
                    let e = max_product_enumeration(n, k, l).unwrap();
                    let c = max_product_cascade(n, k, l).unwrap();
                    assert_eq!(e.value, c.value, "n={n} k={k} l={l}");
                }
            }
        }
        assert_eq!(
            max_product_enumeration(20, 1, 8).unwrap().natural().unwrap(),
            &star_product(20, 1, 8)
        );
    }
}
