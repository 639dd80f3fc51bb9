//! Exact maxima `M(n,k,l)` and `m(n,alpha,beta)`, each by two independent
//! routes, plus uniqueness reports and a conjecture evidence scan.

mod enumerate;
mod measure;
mod sweep;

pub use enumerate::{max_product_enumeration, ENUMERATION_CAP};
pub use measure::{measure_oracle, up_closure, MEASURE_MAX_N};
pub use sweep::{colex_witness, max_product_cascade, max_product_cascade_with, DEFAULT_SWEEP_BUDGET};

use serde_json::{json, Value};

use crate::arith::{binom_u, format_rational, ExactRational, Natural};
use crate::constructions::{a_uniform_size, b_uniform_size};
use crate::error::{Error, Result};
use crate::family::{complement_family, elements, is_shadow_tight, SetMask, UniformFamily};
use crate::regions::in_omega_prime;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Cascade,
    Enumeration,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Cascade => "cascade",
            Method::Enumeration => "enumeration",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Uniform {
        n: usize,
        k: usize,
        l: usize,
    },
    Measure {
        n: usize,
        alpha: ExactRational,
        beta: ExactRational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleValue {
    Natural(Natural),
    Rational(ExactRational),
}

impl std::fmt::Display for OracleValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OracleValue::Natural(v) => write!(f, "{v}"),
            OracleValue::Rational(q) => f.write_str(&format_rational(q)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `|A| = m` realised by complements of a colex segment; `|B| = b_size`.
    Size { m: Natural, b_size: Natural },
    /// Canonical orbit representative of an optimal `A`.
    Family {
        a: Vec<SetMask>,
        b_size: usize,
        orbit_size: usize,
    },
    /// Minimal members of an optimal up-closed `A`.
    Antichain {
        generators: Vec<SetMask>,
        orbit_size: usize,
    },
}

impl Witness {
    fn to_json(&self) -> Value {
        let sets = |ms: &[SetMask]| ms.iter().map(|&m| elements(m)).collect::<Vec<_>>();
        match self {
            Witness::Size { m, b_size } => json!({"m": m.to_string(), "b_size": b_size.to_string()}),
            Witness::Family { a, b_size, orbit_size } => {
                json!({"a": sets(a), "a_size": a.len(), "b_size": b_size, "orbit_size": orbit_size})
            }
            Witness::Antichain { generators, orbit_size } => {
                json!({"generators": sets(generators), "orbit_size": orbit_size})
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub params: Params,
    pub value: OracleValue,
    pub witnesses: Vec<Witness>,
    pub method: Method,
    pub elapsed_ms: Option<u128>,
}

impl OracleResult {
    pub fn natural(&self) -> Option<&Natural> {
        match &self.value {
            OracleValue::Natural(v) => Some(v),
            OracleValue::Rational(_) => None,
        }
    }

    pub fn rational(&self) -> Option<&ExactRational> {
        match &self.value {
            OracleValue::Rational(q) => Some(q),
            OracleValue::Natural(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut obj = match &self.params {
            Params::Uniform { n, k, l } => json!({"n": n, "k": k, "l": l}),
            Params::Measure { n, alpha, beta } => {
                json!({"n": n, "alpha": format_rational(alpha), "beta": format_rational(beta)})
            }
        };
        let map = obj.as_object_mut().expect("object literal");
        map.insert("value".into(), Value::String(self.value.to_string()));
        map.insert(
            "witnesses".into(),
            self.witnesses.iter().map(Witness::to_json).collect(),
        );
        map.insert("method".into(), self.method.as_str().into());
        map.insert("elapsed_ms".into(), self.elapsed_ms.map_or(Value::Null, |t| json!(t)));
        obj
    }
}

pub(crate) fn check_uniform(n: usize, k: usize, l: usize) -> Result<()> {
    if n < 2 || k == 0 || l == 0 || k >= n || l >= n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k, l <= n - 1 (n={n}, k={k}, l={l})"
        )));
    }
    Ok(())
}

pub fn star_product(n: usize, k: usize, l: usize) -> Natural {
    binom_u(n as u64 - 1, k as i64 - 1) * binom_u(n as u64 - 1, l as i64 - 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessReport {
    pub star_size: Natural,
    pub maximizing_sizes: Vec<Natural>,
    /// `C(n-1, k-1)` is the only maximizing `|A|`.
    pub unique_size: bool,
    /// Unique size plus Katona's equality case: every optimal `A` is a star.
    pub star_forced: bool,
    /// From enumeration, when feasible: each optimal `A` is a star.
    pub enumerated_all_stars: Option<bool>,
    /// From enumeration: each optimal `A^c` is shadow-tight at level `l`.
    pub enumerated_shadow_tight: Option<bool>,
}

impl UniquenessReport {
    pub fn to_json(&self) -> Value {
        json!({
            "star_size": self.star_size.to_string(),
            "maximizing_sizes": self.maximizing_sizes.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "unique_size": self.unique_size,
            "star_forced": self.star_forced,
            "enumerated_all_stars": self.enumerated_all_stars,
            "enumerated_shadow_tight": self.enumerated_shadow_tight,
        })
    }
}

fn is_star(members: &[SetMask], n: usize, k: usize) -> bool {
    let common = members.iter().fold(u64::MAX, |acc, &m| acc & m);
    common != 0 && Natural::from(members.len()) == binom_u(n as u64 - 1, k as i64 - 1)
}

/// Uniqueness of the star among optimal pairs, from the sweep and (for small
/// `C(n,k)`) from full enumeration.
pub fn uniqueness_check(n: usize, k: usize, l: usize) -> Result<UniquenessReport> {
    uniqueness_from(&max_product_cascade(n, k, l)?, n, k, l)
}

pub(crate) fn uniqueness_from(cascade: &OracleResult, n: usize, k: usize, l: usize) -> Result<UniquenessReport> {
    let star_size = binom_u(n as u64 - 1, k as i64 - 1);
    let maximizing_sizes: Vec<Natural> = cascade
        .witnesses
        .iter()
        .filter_map(|w| match w {
            Witness::Size { m, .. } => Some(m.clone()),
            _ => None,
        })
        .collect();
    let unique_size = maximizing_sizes == [star_size.clone()];
    let star_forced = unique_size && l < n - k;
    let (mut all_stars, mut tight) = (None, None);
    if k + l <= n && binom_u(n as u64, k as i64) <= Natural::from(ENUMERATION_CAP) {
        let en = max_product_enumeration(n, k, l)?;
        let reps: Vec<&Vec<SetMask>> = en
            .witnesses
            .iter()
            .filter_map(|w| match w {
                Witness::Family { a, .. } => Some(a),
                _ => None,
            })
            .collect();
        all_stars = Some(reps.iter().all(|a| is_star(a, n, k)));
        if l < n - k {
            let t = reps.iter().all(|a| {
                let fam = UniformFamily::new(n, k, a.to_vec()).expect("witness is k-uniform");
                is_shadow_tight(&complement_family(&fam), l).unwrap_or(false)
            });
            tight = Some(t);
        }
    }
    Ok(UniquenessReport {
        star_size,
        maximizing_sizes,
        unique_size,
        star_forced,
        enumerated_all_stars: all_stars,
        enumerated_shadow_tight: tight,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanLabel {
    Confirming,
    Refuting,
    HypothesisFails,
    OutOfReach,
}

impl ScanLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScanLabel::Confirming => "confirming",
            ScanLabel::Refuting => "refuting",
            ScanLabel::HypothesisFails => "hypothesis-fails",
            ScanLabel::OutOfReach => "out-of-reach",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub j_checked: usize,
    /// `None` when `j_max` stops short of the range where the pairs stabilise.
    pub hypothesis: Option<bool>,
    pub first_failure: Option<usize>,
    pub star_product: Natural,
    pub oracle_value: Option<Natural>,
    pub conclusion: Option<bool>,
    pub uniqueness: Option<UniquenessReport>,
    pub label: ScanLabel,
}

impl ScanReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n, "k": self.k, "l": self.l,
            "j_checked": self.j_checked,
            "hypothesis": self.hypothesis,
            "first_failure": self.first_failure,
            "star_product": self.star_product.to_string(),
            "oracle_value": self.oracle_value.as_ref().map(|v| v.to_string()),
            "conclusion": self.conclusion,
            "uniqueness": self.uniqueness.as_ref().map(UniquenessReport::to_json),
            "label": self.label.as_str(),
            "evidence_only": true,
        })
    }
}

/// Checks `|A_j^(k)| |B_j^(l)| < star product` for `j < k` (for `j >= k` the
/// pair is the star with a smaller second family) and, if the sweep fits in
/// `budget`, whether the star product is the maximum.
pub fn conjecture_scan(n: usize, k: usize, l: usize, j_max: usize, budget: u64) -> Result<ScanReport> {
    if !in_omega_prime(n, k, l) {
        return Err(Error::InvalidArgument(format!(
            "(k, l) = ({k}, {l}) is not in Omega' for n = {n}"
        )));
    }
    let star = star_product(n, k, l);
    let last = j_max.min(k - 1);
    let first_failure = (0..=last).find(|&j| a_uniform_size(n, k, j) * b_uniform_size(n, l, j) >= star);
    let hypothesis = match first_failure {
        Some(_) => Some(false),
        None if j_max >= k - 1 => Some(true),
        None => None,
    };
    let (oracle_value, conclusion, uniqueness) = match max_product_cascade_with(n, k, l, budget) {
        Ok(res) => {
            let u = uniqueness_from(&res, n, k, l)?;
            let v = res.natural().cloned().expect("uniform oracle");
            let c = v == star;
            (Some(v), Some(c), Some(u))
        }
        Err(Error::Capacity(_)) => (None, None, None),
        Err(e) => return Err(e),
    };
    let label = match (hypothesis, conclusion) {
        (Some(false), _) => ScanLabel::HypothesisFails,
        (Some(true), Some(true)) => ScanLabel::Confirming,
        (Some(true), Some(false)) => ScanLabel::Refuting,
        _ => ScanLabel::OutOfReach,
    };
    Ok(ScanReport {
        n,
        k,
        l,
        j_checked: last,
        hypothesis,
        first_failure,
        star_product: star,
        oracle_value,
        conclusion,
        uniqueness,
        label,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(x: u64) -> Natural {
        Natural::from(x)
    }

    #[test]
    fn uniqueness_examples() {
        let r = uniqueness_check(20, 5, 11).unwrap();
        assert!(r.unique_size && r.star_forced);
        assert_eq!(r.star_size, nat(3876));
        let r = uniqueness_check(5, 1, 3).unwrap();
        assert!(!r.unique_size);
        assert_eq!(r.maximizing_sizes, vec![nat(1), nat(2)]);
        assert_eq!(r.enumerated_all_stars, Some(false));
    }

    #[test]
    fn stars_forced_in_the_wide_regime() {
        for n in 3..=9usize {
            for k in 1..n {
                for l in 1..n {
                    if n < 2 * k.max(l) + 1 {
                        continue;
                    }
                    let r = uniqueness_check(n, k, l).unwrap();
                    assert!(r.star_forced, "n={n} k={k} l={l}");
                    if let Some(all) = r.enumerated_all_stars {
                        assert!(all, "n={n} k={k} l={l}");
                    }
                    if let Some(t) = r.enumerated_shadow_tight {
                        assert!(t, "n={n} k={k} l={l}");
                    }
                }
            }
        }
    }

    #[test]
    fn scan_examples() {
        let r = conjecture_scan(20, 5, 11, 64, DEFAULT_SWEEP_BUDGET).unwrap();
        assert_eq!(r.hypothesis, Some(true));
        assert_eq!(r.conclusion, Some(true));
        assert_eq!(r.label, ScanLabel::Confirming);
        let r = conjecture_scan(5, 1, 3, 64, DEFAULT_SWEEP_BUDGET).unwrap();
        assert_eq!(r.first_failure, Some(0));
        assert_eq!(r.label, ScanLabel::HypothesisFails);
        assert!(!r.uniqueness.unwrap().unique_size);
        let r = conjecture_scan(20, 5, 11, 2, DEFAULT_SWEEP_BUDGET).unwrap();
        assert_eq!(r.hypothesis, None);
        assert_eq!(r.label, ScanLabel::OutOfReach);
        let r = conjecture_scan(40, 15, 21, 64, 1000).unwrap();
        assert_eq!(r.label, ScanLabel::OutOfReach);
        assert!(conjecture_scan(20, 5, 10, 64, DEFAULT_SWEEP_BUDGET).is_err());
    }

    #[test]
    fn a_sizes_stabilise_past_k() {
        for (n, k) in [(12, 3), (15, 4), (20, 5)] {
            let base = a_uniform_size(n, k, k);
            assert_eq!(base, binom_u(n as u64 - 1, k as i64 - 1));
            for j in k..n - 2 {
                assert_eq!(a_uniform_size(n, k, j), base);
            }
        }
    }

    #[test]
    fn json_shape() {
        let r = max_product_cascade(5, 1, 3).unwrap();
        let v = r.to_json();
        assert_eq!(v["value"], "6");
        assert_eq!(v["method"], "cascade");
        assert_eq!(v["elapsed_ms"], Value::Null);
        assert_eq!(v["witnesses"].as_array().unwrap().len(), 2);
    }
}
