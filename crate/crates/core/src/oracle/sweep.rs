//! `M(n,k,l) = max_m m * (C(n,l) - KK_l(m; n-k))` by sweeping every `m`.

use rayon::prelude::*;

use crate::arith::{binom_u, Natural};
use crate::cascade::{kk_cross_bound, BinomTable};
use crate::error::{Error, Result};
use crate::family::{colex_segment, complement_family, layer, UniformFamily};
use crate::oracle::{check_uniform, Method, OracleResult, OracleValue, Params, Witness};

pub const DEFAULT_SWEEP_BUDGET: u64 = 100_000_000;

pub fn max_product_cascade(n: usize, k: usize, l: usize) -> Result<OracleResult> {
    max_product_cascade_with(n, k, l, DEFAULT_SWEEP_BUDGET)
}

fn result(n: usize, k: usize, l: usize, value: Natural, witnesses: Vec<Witness>) -> OracleResult {
    OracleResult {
        params: Params::Uniform { n, k, l },
        value: OracleValue::Natural(value),
        witnesses,
        method: Method::Cascade,
        elapsed_ms: None,
    }
}

pub fn max_product_cascade_with(n: usize, k: usize, l: usize, budget: u64) -> Result<OracleResult> {
    check_uniform(n, k, l)?;
    let total = binom_u(n as u64, k as i64);
    if k + l > n {
        let b = binom_u(n as u64, l as i64);
        let value = &total * &b;
        return Ok(result(n, k, l, value, vec![Witness::Size { m: total, b_size: b }]));
    }
    if total > Natural::from(budget) {
        return Err(Error::Capacity(format!(
            "C({n},{k}) = {total} exceeds the sweep budget {budget}"
        )));
    }
    let count: u64 = total.try_into().expect("bounded by budget");
    match BinomTable::new(n + 1) {
        Some(table) => Ok(sweep_u64(n, k, l, count, &table)),
        None => Ok(sweep_big(n, k, l, count)),
    }
}

type Best<T> = (T, Vec<(u64, T)>);

fn merge<T: Ord + Clone>(a: Best<T>, b: Best<T>) -> Best<T> {
    match a.0.cmp(&b.0) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            let mut w = a.1;
            w.extend(b.1);
            (a.0, w)
        }
    }
}

fn push<T: Ord + Clone>(mut acc: Best<T>, m: u64, value: T, b: T) -> Best<T> {
    match value.cmp(&acc.0) {
        std::cmp::Ordering::Greater => (value, vec![(m, b)]),
        std::cmp::Ordering::Equal => {
            acc.1.push((m, b));
            acc
        }
        std::cmp::Ordering::Less => acc,
    }
}

fn finish(n: usize, k: usize, l: usize, value: Natural, mut ws: Vec<(u64, Natural)>) -> OracleResult {
    ws.sort_by_key(|w| w.0);
    let witnesses = ws
        .into_iter()
        .map(|(m, b)| Witness::Size { m: m.into(), b_size: b })
        .collect();
    result(n, k, l, value, witnesses)
}

fn sweep_u64(n: usize, k: usize, l: usize, count: u64, table: &BinomTable) -> OracleResult {
    let all_l = table.get(n, l as isize);
    let u = n - k;
    let (best, ws) = (1..=count)
        .into_par_iter()
        .fold(
            || (0u128, Vec::new()),
            |acc, m| {
                let b = (all_l - table.shadow_bound(m, u, l)) as u128;
                push(acc, m, m as u128 * b, b)
            },
        )
        .reduce(|| (0u128, Vec::new()), merge);
    let ws = ws.into_iter().map(|(m, b)| (m, Natural::from(b))).collect();
    finish(n, k, l, Natural::from(best), ws)
}

fn sweep_big(n: usize, k: usize, l: usize, count: u64) -> OracleResult {
    let (best, ws) = (1..=count)
        .into_par_iter()
        .fold(
            || (Natural::from(0u8), Vec::new()),
            |acc, m| {
                let mm = Natural::from(m);
                let b = kk_cross_bound(n, k, l, &mm).expect("validated parameters");
                let v = &mm * &b;
                push(acc, m, v, b)
            },
        )
        .reduce(|| (Natural::from(0u8), Vec::new()), merge);
    finish(n, k, l, best, ws)
}

/// The pair attaining the sweep value at `m`: `A` is the complement family of
/// the first `m` colex `(n-k)`-sets, `B` every `l`-set meeting all of `A`.
pub fn colex_witness(n: usize, k: usize, l: usize, m: u64) -> Result<(UniformFamily, UniformFamily)> {
    check_uniform(n, k, l)?;
    let seg = colex_segment(&Natural::from(m), n - k, n)?;
    let a = complement_family(&seg);
    let b: Vec<_> = layer(n, l)
        .filter(|&bm| a.members().iter().all(|&am| am & bm != 0))
        .collect();
    Ok((a, UniformFamily::new(n, l, b)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::is_cross_intersecting;
    use crate::oracle::star_product;

    fn nat(x: u64) -> Natural {
        Natural::from(x)
    }

    fn sizes(r: &OracleResult) -> Vec<Natural> {
        r.witnesses
            .iter()
            .map(|w| match w {
                Witness::Size { m, .. } => m.clone(),
                _ => unreachable!(),
            })
            .collect()
    }

    #[test]
    fn examples() {
        let r = max_product_cascade(5, 1, 3).unwrap();
        assert_eq!(r.natural(), Some(&nat(6)));
        assert_eq!(sizes(&r), vec![nat(1), nat(2)]);
        let r = max_product_cascade(20, 5, 11).unwrap();
        assert_eq!(r.natural(), Some(&nat(358_057_128)));
        assert_eq!(sizes(&r), vec![nat(3876)]);
        assert_eq!(max_product_cascade(4, 2, 2).unwrap().natural(), Some(&nat(9)));
        assert_eq!(max_product_cascade(5, 3, 4).unwrap().natural(), Some(&nat(50)));
        assert!(matches!(
            max_product_cascade_with(30, 15, 14, 1000),
            Err(Error::Capacity(_))
        ));
        assert!(max_product_cascade(5, 0, 3).is_err());
    }

    #[test]
    fn bignum_path_agrees() {
        for (n, k, l) in [(12, 3, 7), (10, 4, 5), (9, 2, 7)] {
            let fast = max_product_cascade(n, k, l).unwrap();
            let total: u64 = binom_u(n as u64, k as i64).try_into().unwrap();
            let slow = sweep_big(n, k, l, total);
            assert_eq!(fast, slow);
        }
        let r = max_product_cascade(90, 2, 40).unwrap();
        assert_eq!(r.natural().unwrap(), &star_product(90, 2, 40));
    }

    #[test]
    fn witnesses_reevaluate() {
        for (n, k, l) in [(5, 1, 3), (7, 2, 4), (8, 3, 4), (9, 2, 5)] {
            let r = max_product_cascade(n, k, l).unwrap();
            for w in &r.witnesses {
                let Witness::Size { m, b_size } = w else { unreachable!() };
                let (a, b) = colex_witness(n, k, l, m.try_into().unwrap()).unwrap();
                assert!(is_cross_intersecting(a.members(), b.members()));
                assert_eq!(Natural::from(b.len()), *b_size);
                assert_eq!(Natural::from(a.len() * b.len()), *r.natural().unwrap());
            }
        }
    }

    #[test]
    fn star_size_gives_star_product() {
        for n in 3..=14usize {
            for k in 1..n {
                for l in 1..n {
                    if k + l > n {
                        continue;
                    }
                    let m = binom_u(n as u64 - 1, k as i64 - 1);
                    let b = kk_cross_bound(n, k, l, &m).unwrap();
                    assert_eq!(m * b, star_product(n, k, l), "n={n} k={k} l={l}");
                }
            }
        }
    }
}
