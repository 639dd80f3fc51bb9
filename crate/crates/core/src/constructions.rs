//! Named families: stars, the perturbed pairs `A_j`, `B_j` (uniform and
//! non-uniform), cross-intersection testing and exact `p`-biased measures.

use num_traits::{One, Zero};

use crate::arith::{binom_u, rational_pow, ExactRational, Natural};
use crate::error::{Error, Result};
use crate::family::{full_mask, layer, GeneralFamily, SetMask, UniformFamily, MAX_GROUND};

fn check_params(n: usize, k: usize, what: &str) -> Result<()> {
    if n == 0 || n > MAX_GROUND {
        return Err(Error::InvalidArgument(format!(
            "{what}: n = {n} outside 1..={MAX_GROUND}"
        )));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("{what}: size {k} outside 1..={n}")));
    }
    Ok(())
}

/// All `k`-sets containing `i`.
pub fn star_uniform(n: usize, k: usize, i: usize) -> Result<UniformFamily> {
    check_params(n, k, "star")?;
    if i == 0 || i > n {
        return Err(Error::InvalidArgument(format!("star centre {i} outside [1, {n}]")));
    }
    let bit = 1u64 << (i - 1);
    UniformFamily::new(n, k, layer(n, k).filter(|m| m & bit != 0).collect())
}

/// `[j+2]` as a mask.
fn head(j: usize) -> SetMask {
    full_mask(j + 2)
}

fn check_j(n: usize, j: usize) -> Result<()> {
    if j + 2 > n {
        return Err(Error::InvalidArgument(format!("need j + 2 <= n (j = {j}, n = {n})")));
    }
    Ok(())
}

/// Membership in `A_j`: contains 1, or meets `[j+2]` exactly in `[j+2] \ {1}`.
fn in_a(m: SetMask, j: usize) -> bool {
    m & 1 != 0 || m & head(j) == head(j) & !1
}

/// Membership in `B_j`: contains 1 but does not meet `[j+2]` only in `{1}`.
fn in_b(m: SetMask, j: usize) -> bool {
    m & 1 != 0 && m & head(j) != 1
}

/// The uniform perturbed family `A_j^(k)`.
pub fn a_family_uniform(n: usize, k: usize, j: usize) -> Result<UniformFamily> {
    check_params(n, k, "A_j")?;
    check_j(n, j)?;
    if k < j + 1 {
        return Err(Error::InvalidArgument(format!(
            "A_j needs k >= j + 1 (k = {k}, j = {j})"
        )));
    }
    UniformFamily::new(n, k, layer(n, k).filter(|&m| in_a(m, j)).collect())
}

/// The uniform perturbed family `B_j^(l)`.
pub fn b_family_uniform(n: usize, l: usize, j: usize) -> Result<UniformFamily> {
    check_params(n, l, "B_j")?;
    check_j(n, j)?;
    UniformFamily::new(n, l, layer(n, l).filter(|&m| in_b(m, j)).collect())
}

/// Closed form for `|A_j^(k)|`.
pub fn a_uniform_size(n: usize, k: usize, j: usize) -> Natural {
    let (n, k, j) = (n as i64, k as i64, j as i64);
    binom_u(n as u64 - 1, k - 1) + binom_u((n - j - 2).max(0) as u64, k - j - 1)
}

/// Closed form for `|B_j^(l)|`.
pub fn b_uniform_size(n: usize, l: usize, j: usize) -> Natural {
    let (n, l, j) = (n as i64, l as i64, j as i64);
    binom_u(n as u64 - 1, l - 1) - binom_u((n - j - 2).max(0) as u64, l - 1)
}

fn power_set_filter(n: usize, keep: impl Fn(SetMask) -> bool) -> Result<GeneralFamily> {
    if n > 24 {
        return Err(Error::Capacity(format!(
            "non-uniform family on [{n}] is too large to list"
        )));
    }
    GeneralFamily::new(n, (0..1u64 << n).filter(|&m| keep(m)).collect())
}

/// The non-uniform `A_j` in `2^[n]`.
pub fn a_family_measure(n: usize, j: usize) -> Result<GeneralFamily> {
    check_j(n, j)?;
    power_set_filter(n, |m| in_a(m, j))
}

/// The non-uniform `B_j` in `2^[n]`.
pub fn b_family_measure(n: usize, j: usize) -> Result<GeneralFamily> {
    check_j(n, j)?;
    power_set_filter(n, |m| in_b(m, j))
}

/// The star `{F : i in F}` in `2^[n]`.
pub fn star_measure(n: usize, i: usize) -> Result<GeneralFamily> {
    if i == 0 || i > n {
        return Err(Error::InvalidArgument(format!("star centre {i} outside [1, {n}]")));
    }
    let bit = 1u64 << (i - 1);
    power_set_filter(n, |m| m & bit != 0)
}

/// Every member of `a` meets every member of `b`.
pub fn is_cross_intersecting(a: &[SetMask], b: &[SetMask]) -> bool {
    a.iter().all(|&x| b.iter().all(|&y| x & y != 0))
}

/// Exact `mu_p(F) = sum p^|F| (1-p)^(n-|F|)`.
pub fn measure(f: &GeneralFamily, p: &ExactRational) -> Result<ExactRational> {
    if !crate::arith::is_open_unit(p) {
        return Err(Error::InvalidArgument(format!("p = {p} not in (0, 1)")));
    }
    Ok(measure_of_profile(&f.size_profile(), p))
}

/// Measure from per-size member counts `profile[s]`.
pub fn measure_of_profile(profile: &[u64], p: &ExactRational) -> ExactRational {
    let n = profile.len() - 1;
    let q = ExactRational::one() - p;
    profile
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(s, &c)| {
            ExactRational::from_integer(c.into()) * rational_pow(p, s as u32) * rational_pow(&q, (n - s) as u32)
        })
        .fold(ExactRational::zero(), |a, b| a + b)
}

/// `mu_a(A_j) = a + (1-a) a^(j+1)`.
pub fn measure_aj(alpha: f64, j: usize) -> f64 {
    alpha + (1.0 - alpha) * alpha.powi(j as i32 + 1)
}

/// `mu_b(B_j) = b - b (1-b)^(j+1)`.
pub fn measure_bj(beta: f64, j: usize) -> f64 {
    beta - beta * (1.0 - beta).powi(j as i32 + 1)
}

pub fn measure_aj_exact(alpha: &ExactRational, j: usize) -> ExactRational {
    alpha + (ExactRational::one() - alpha) * rational_pow(alpha, j as u32 + 1)
}

pub fn measure_bj_exact(beta: &ExactRational, j: usize) -> ExactRational {
    beta - beta * rational_pow(&(ExactRational::one() - beta), j as u32 + 1)
}
