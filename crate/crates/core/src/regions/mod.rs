//! The `(alpha, beta)` side: boundary curves `e_j`, membership in the regions
//! Omega, Delta, Omega' and Delta', and the constants that organise them.
//!
//! Everything here is floating point. Decisions that land within
//! [`TOLERANCE`] of a boundary come back as [`Error::Undecidable`] instead of
//! a silent answer.

mod claims;
mod curves;

pub use claims::{claim_conditions, claim_f, large_i_condition, tail_bound, ClaimInstance, ClaimKind};
pub use curves::{curve_samples, write_csv, CurveKind, CurveRow, CurveSpec};

use num_traits::One;

use crate::arith::{harmonic_range, ExactRational, BISECTION_MAX_ITER, TOLERANCE};
use crate::error::{Error, Result};

/// Default number of `e_j` curves checked explicitly before the tail bound.
pub const DEFAULT_J_CAP: usize = 64;

/// Default scan limit for [`i0`].
pub const DEFAULT_I_MAX: usize = 1000;

/// A measure pair `(alpha, beta)` with both coordinates in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoint {
    alpha: f64,
    beta: f64,
}

impl RegionPoint {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0) {
            return Err(Error::InvalidArgument(format!("({alpha}, {beta}) is not in (0,1)^2")));
        }
        Ok(RegionPoint { alpha, beta })
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn alpha_bar(&self) -> f64 {
        1.0 - self.alpha
    }
    pub fn beta_bar(&self) -> f64 {
        1.0 - self.beta
    }
}

/// `ln(1 - e_j(alpha))`, stable for large `j`.
pub fn ln_one_minus_e(alpha: f64, j: usize) -> f64 {
    let jf = j as f64;
    let ln_core = jf * alpha.ln() + (-alpha).ln_1p();
    (ln_core - ln_core.exp().ln_1p()) / (jf + 1.0)
}

/// `e_j(alpha) = 1 - ((a^j - a^(j+1)) / (1 + a^j - a^(j+1)))^(1/(j+1))`.
pub fn e_j(alpha: f64, j: usize) -> f64 {
    -ln_one_minus_e(alpha, j).exp_m1()
}

/// Lower envelope `1 - (a^j (1-a))^(1/(j+1)) <= e_j`, increasing in `j` for `a < 1/2`.
pub fn e_j_lower_bound(alpha: f64, j: usize) -> f64 {
    let jf = j as f64;
    -((jf * alpha.ln() + (-alpha).ln_1p()) / (jf + 1.0)).exp_m1()
}

/// `(1 + (1-a) a^j)(1 - (1-b)^(j+1)) < 1`, strictly, with a tolerance margin.
///
/// Evaluated as `(1-a) a^j (1 - (1-b)^(j+1)) < (1-b)^(j+1)` in logs, which
/// keeps its meaning when both sides are far below `1e-12`.
pub fn boundary_condition(p: RegionPoint, j: usize) -> bool {
    let jf = j as f64;
    let ln_bb_pow = (jf + 1.0) * p.beta_bar().ln();
    let lhs = p.alpha_bar().ln() + jf * p.alpha.ln() + (-ln_bb_pow.exp()).ln_1p();
    lhs < ln_bb_pow - TOLERANCE
}

pub fn in_omega(alpha: f64, beta: f64) -> bool {
    alpha > 0.0 && beta > 0.5 && alpha + beta < 1.0
}

/// `k > 0`, `l > n/2`, `k + l < n`.
pub fn in_omega_prime(n: usize, k: usize, l: usize) -> bool {
    k > 0 && 2 * l > n && k + l < n
}

fn require_omega(p: RegionPoint) -> Result<()> {
    if !in_omega(p.alpha, p.beta) {
        return Err(Error::InvalidArgument(format!(
            "({}, {}) is not in Omega",
            p.alpha, p.beta
        )));
    }
    Ok(())
}

/// Decides `beta < e_j(alpha)` for all `j >= 0`.
///
/// Curves `j <= j_cap` are checked one by one; everything beyond is covered by
/// [`e_j_lower_bound`] at `j_cap + 1`.
pub fn in_delta(p: RegionPoint, j_cap: usize) -> Result<bool> {
    require_omega(p)?;
    for j in 0..=j_cap {
        let e = e_j(p.alpha, j);
        if (p.beta - e).abs() <= TOLERANCE {
            return Err(Error::Undecidable(format!(
                "beta = {} is within {TOLERANCE:e} of e_{j} = {e}",
                p.beta
            )));
        }
        if p.beta > e {
            return Ok(false);
        }
    }
    let tail = e_j_lower_bound(p.alpha, j_cap + 1);
    if tail > p.beta + TOLERANCE {
        Ok(true)
    } else {
        Err(Error::TailUncertified(format!(
            "all e_j with j <= {j_cap} exceed beta = {}, but the tail bound {tail} does not",
            p.beta
        )))
    }
}

/// Ensures `(k, l)` lies in Omega'.
fn require_omega_prime(n: usize, k: usize, l: usize) -> Result<()> {
    if !in_omega_prime(n, k, l) {
        return Err(Error::InvalidArgument(format!(
            "(k, l) = ({k}, {l}) is not in Omega' for n = {n}"
        )));
    }
    Ok(())
}

/// `(1 + (n-k)/(n-1)) (l-1)/(n-1)`; condition (C1) asks for this to be below 1.
pub fn c1_value(n: usize, k: usize, l: usize) -> Result<ExactRational> {
    require_omega_prime(n, k, l)?;
    let r = |a: usize, b: usize| ExactRational::new(a.into(), b.into());
    Ok((ExactRational::one() + r(n - k, n - 1)) * r(l - 1, n - 1))
}

/// `(n-k) sum_{i=n-l}^{n-2} 1/i - (n-l) sum_{i=k}^{n-2} 1/i`; (C2) asks for a negative value.
pub fn c2_value(n: usize, k: usize, l: usize) -> Result<ExactRational> {
    require_omega_prime(n, k, l)?;
    let (n, k, l) = (n as i64, k as i64, l as i64);
    let int = |x: i64| ExactRational::from_integer(x.into());
    Ok(int(n - k) * harmonic_range(n - l, n - 2) - int(n - l) * harmonic_range(k, n - 2))
}

pub fn c1(n: usize, k: usize, l: usize) -> Result<bool> {
    Ok(c1_value(n, k, l)? < ExactRational::one())
}

pub fn c2(n: usize, k: usize, l: usize) -> Result<bool> {
    Ok(c2_value(n, k, l)? < ExactRational::from_integer(0.into()))
}

/// `(2 - a) b` and `(1-a) ln(1/(1-b)) - (1-b) ln(1/a)`.
pub fn delta_prime_values(p: RegionPoint) -> (f64, f64) {
    let first = (2.0 - p.alpha) * p.beta;
    let second = p.alpha_bar() * (-(-p.beta).ln_1p()) - p.beta_bar() * (-p.alpha.ln());
    (first, second)
}

/// Both strengthened conditions: `(2-a) b < 1` and the logarithmic one `< 0`.
pub fn in_delta_prime(p: RegionPoint) -> Result<bool> {
    require_omega(p)?;
    let (first, second) = delta_prime_values(p);
    Ok(first < 1.0 && second < 0.0)
}

/// The cusp of Delta: `(1 - 1/sqrt 2, 2 - sqrt 2)`.
pub fn tilde_constants() -> (f64, f64) {
    let a = 1.0 - std::f64::consts::FRAC_1_SQRT_2;
    (a, 2.0 - std::f64::consts::SQRT_2)
}

/// Plain bisection on a sign change of `f` over `[lo, hi]`.
pub(crate) fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoRoot(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= TOLERANCE * 1e-3 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `(alpha_*(i), beta_*(i))` where `e_{i-2}` and `e_{i-3}` cross.
pub fn alpha_beta_star(i: usize) -> Result<(f64, f64)> {
    if i < 4 {
        return Err(Error::InvalidArgument(format!("alpha_beta_star needs i >= 4, got {i}")));
    }
    let d = |a: f64| e_j(a, i - 2) - e_j(a, i - 3);
    let steps = 1000;
    let grid: Vec<f64> = (1..steps).map(|s| s as f64 / steps as f64).collect();
    let bracket = grid
        .windows(2)
        .find(|w| d(w[0]).signum() != d(w[1]).signum())
        .ok_or_else(|| Error::NoRoot(format!("e_{} - e_{} has no sign change in (0,1)", i - 2, i - 3)))?;
    let a = bisect(bracket[0], bracket[1], d)?;
    Ok((a, e_j(a, i - 2)))
}

/// Smallest `i >= 2` such that the large-`i` inequality holds for every
/// `i' in [i, i_max]`.
pub fn i0(alpha: f64, i_max: usize) -> Result<usize> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::InvalidArgument(format!("i0 needs 0 < alpha < 1/2, got {alpha}")));
    }
    if i_max < 2 {
        return Err(Error::InvalidArgument("i_max must be at least 2".into()));
    }
    let last_failure = (2..=i_max).rev().find(|&i| !large_i_condition(alpha, i));
    match last_failure {
        None => Ok(2),
        Some(i) if i == i_max => Err(Error::NotFound(format!(
            "inequality fails at i_max = {i_max} for alpha = {alpha}"
        ))),
        Some(i) => Ok(i + 1),
    }
}
