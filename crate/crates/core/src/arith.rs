//! Exact integers and rationals, real-argument binomials, and the bisection
//! solver used to place the fractional tail of a cascade.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;

/// Reduced rational with positive denominator.
pub type ExactRational = BigRational;

/// Default comparison tolerance for floating-point decisions.
pub const TOLERANCE: f64 = 1e-12;

/// Iteration cap for every bisection in the crate.
pub const BISECTION_MAX_ITER: usize = 200;

/// `C(n, k)` for a nonnegative `n`; zero outside `0 <= k <= n`.
pub fn binom(n: i64, k: i64) -> Result<Natural> {
    if n < 0 {
        return Err(Error::NegativeArgument(n));
    }
    Ok(binom_u(n as u64, k))
}

/// Binomial on an unsigned top argument. Never fails.
pub fn binom_u(n: u64, k: i64) -> Natural {
    if k < 0 || k as u64 > n {
        return Natural::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = Natural::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Falling-factorial binomial for real `x`: `x(x-1)...(x-t+1)/t!`.
///
/// Equals 1 for `t == 0` and 0 whenever `x < t`. Negative `t` yields 0 so
/// that cascade terms below level zero vanish.
pub fn gen_binom(x: f64, t: i64) -> f64 {
    if t < 0 {
        return 0.0;
    }
    if t == 0 {
        return 1.0;
    }
    let tf = t as f64;
    if x < tf {
        return 0.0;
    }
    // pair (x - j) with (t - j) so each factor is >= 1 and nothing overflows early
    let mut acc = 1.0;
    for j in 0..t {
        let j = j as f64;
        acc *= (x - j) / (tf - j);
    }
    acc
}

/// Finds `x` in `[lo, hi]` with `gen_binom(x, r) == m` by bisection.
///
/// `gen_binom(., r)` is strictly increasing on `x >= r - 1`, so the root is
/// unique once the bracket is valid.
pub fn solve_binom_x(m: &Natural, r: i64, lo: f64, hi: f64) -> Result<f64> {
    if r < 1 {
        return Err(Error::InvalidArgument(format!("solve_binom_x needs r >= 1, got {r}")));
    }
    let target = natural_to_f64(m);
    let f_lo = gen_binom(lo, r);
    let f_hi = gen_binom(hi, r);
    let slack = TOLERANCE * target.max(1.0);
    if !(f_lo <= target + slack && target <= f_hi + slack) || lo > hi {
        return Err(Error::NoRoot(format!(
            "gen_binom(x, {r}) = {target} not bracketed by [{lo}, {hi}]"
        )));
    }
    if (f_lo - target).abs() <= slack {
        return Ok(lo);
    }
    if (f_hi - target).abs() <= slack {
        return Ok(hi);
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (a + b);
        if gen_binom(mid, r) < target {
            a = mid;
        } else {
            b = mid;
        }
        if b - a <= TOLERANCE {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

/// Lossy conversion used only on the floating side of the calculus.
pub fn natural_to_f64(m: &Natural) -> f64 {
    m.to_f64().unwrap_or(f64::INFINITY)
}

pub fn rational_to_f64(q: &ExactRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Parses a `p/q` literal (or a bare integer) into an exact rational.
pub fn parse_rational(s: &str) -> Result<ExactRational> {
    let bad = || Error::InvalidArgument(format!("expected a rational literal p/q, got {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num: num_bigint::BigInt = num.parse().map_err(|_| bad())?;
    let den: num_bigint::BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(ExactRational::new(num, den))
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(q: &ExactRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact `p^e` for a rational base.
pub fn rational_pow(p: &ExactRational, e: u32) -> ExactRational {
    let mut acc = ExactRational::one();
    for _ in 0..e {
        acc *= p;
    }
    acc
}

/// Harmonic-type sum `sum_{i=a}^{b} 1/i` as an exact rational (empty when `a > b`).
pub fn harmonic_range(a: i64, b: i64) -> ExactRational {
    let mut acc = ExactRational::zero();
    for i in a..=b {
        debug_assert!(i != 0);
        acc += ExactRational::new(1.into(), i.into());
    }
    acc
}

/// `true` when `q` lies strictly between 0 and 1.
pub fn is_open_unit(q: &ExactRational) -> bool {
    q > &ExactRational::zero() && q < &ExactRational::one()
}
