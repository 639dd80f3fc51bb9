//! Cascade (binomial number system) representations and the Kruskal–Katona
//! shadow bounds built on them.

use num_traits::Zero;

use crate::arith::{binom_u, gen_binom, natural_to_f64, solve_binom_x, Natural};
use crate::error::{Error, Result};

/// The `u`-cascade form `m = C(a_u, u) + C(a_{u-1}, u-1) + ... + C(a_{u-t}, u-t)`
/// with `a_u > a_{u-1} > ... > a_{u-t} >= u-t >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CascadeForm {
    u: usize,
    /// `(a_i, i)` with `i` running from `u` down to `u - t`.
    pairs: Vec<(u64, usize)>,
}

impl CascadeForm {
    pub fn level(&self) -> usize {
        self.u
    }

    pub fn pairs(&self) -> &[(u64, usize)] {
        &self.pairs
    }

    /// Number of terms minus one.
    pub fn t(&self) -> usize {
        self.pairs.len() - 1
    }

    /// The integer the form represents.
    pub fn value(&self) -> Natural {
        self.pairs.iter().map(|&(a, i)| binom_u(a, i as i64)).sum()
    }

    /// Builds a form from explicit pairs, checking every structural invariant.
    pub fn from_pairs(u: usize, pairs: Vec<(u64, usize)>) -> Result<Self> {
        let form = CascadeForm { u, pairs };
        form.check()?;
        Ok(form)
    }

    /// Verifies the ordering and level invariants.
    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.pairs.is_empty() {
            return bad("empty cascade".into());
        }
        if self.pairs[0].1 != self.u {
            return bad(format!("leading level {} differs from u = {}", self.pairs[0].1, self.u));
        }
        for w in self.pairs.windows(2) {
            let ((a0, i0), (a1, i1)) = (w[0], w[1]);
            if i1 + 1 != i0 {
                return bad(format!("levels {i0} -> {i1} do not decrease by one"));
            }
            if a1 >= a0 {
                return bad(format!("a values {a0} -> {a1} not strictly decreasing"));
            }
        }
        let &(a_last, i_last) = self.pairs.last().unwrap();
        if i_last < 1 || (a_last as usize) < i_last {
            return bad(format!("last term ({a_last}, {i_last}) violates a >= level >= 1"));
        }
        Ok(())
    }
}

/// Largest `a >= level` with `C(a, level) <= m`. Requires `m >= 1`.
fn largest_top(m: &Natural, level: usize) -> u64 {
    let lvl = level as i64;
    let fits = |a: u64| binom_u(a, lvl) <= *m;
    let mut lo = level as u64;
    let mut hi = lo.max(1) * 2;
    while fits(hi) {
        lo = hi;
        hi *= 2;
    }
    // fits(lo) holds, fits(hi) fails
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Greedy `u`-cascade decomposition of `m`.
pub fn cascade_decompose(m: &Natural, u: usize) -> Result<CascadeForm> {
    if m.is_zero() || u == 0 {
        return Err(Error::InvalidArgument(format!(
            "cascade_decompose needs m >= 1 and u >= 1 (m = {m}, u = {u})"
        )));
    }
    let mut rest = m.clone();
    let mut pairs = Vec::new();
    let mut level = u;
    while !rest.is_zero() {
        let a = largest_top(&rest, level);
        rest -= binom_u(a, level as i64);
        pairs.push((a, level));
        level -= 1;
    }
    Ok(CascadeForm { u, pairs })
}

/// Which fractional form to build from a cascade.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// `m = gen_binom(x, u)` with no integer terms.
    Degenerate,
    /// Keep the terms at levels `u, ..., u - s` and fold the rest into `x`.
    Keep(usize),
}

/// A cascade whose tail below level `u - s` is replaced by one real binomial.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedCascade {
    pub u: usize,
    pub kept: Vec<(u64, usize)>,
    /// Tail position `x`; the tail equals `gen_binom(x, x_level)`.
    pub x: f64,
    pub x_level: usize,
}

impl TruncatedCascade {
    /// `s` in the `0 < s < t` numbering; `None` for the degenerate form.
    pub fn s(&self) -> Option<usize> {
        self.kept.len().checked_sub(1)
    }

    /// Real value represented by the form.
    pub fn value(&self) -> f64 {
        let ints: f64 = self
            .kept
            .iter()
            .map(|&(a, i)| natural_to_f64(&binom_u(a, i as i64)))
            .sum();
        ints + gen_binom(self.x, self.x_level as i64)
    }
}

/// Folds the tail of `c` into a single real binomial.
pub fn truncate_cascade(c: &CascadeForm, how: Truncation) -> Result<TruncatedCascade> {
    let t = c.t();
    match how {
        Truncation::Degenerate => {
            let (a_u, u) = c.pairs[0];
            let x = solve_binom_x(&c.value(), u as i64, a_u as f64, (a_u + 1) as f64)?;
            Ok(TruncatedCascade {
                u: c.u,
                kept: Vec::new(),
                x,
                x_level: u,
            })
        }
        Truncation::Keep(s) => {
            if s == 0 || s >= t {
                return Err(Error::InvalidTruncation { s, t });
            }
            let kept = c.pairs[..=s].to_vec();
            let dropped: Natural = c.pairs[s + 1..].iter().map(|&(a, i)| binom_u(a, i as i64)).sum();
            let level = c.u - s - 1;
            let lo = c.pairs[s + 1].0 as f64;
            let hi = c.pairs[s].0 as f64;
            let x = solve_binom_x(&dropped, level as i64, lo, hi)?;
            Ok(TruncatedCascade {
                u: c.u,
                kept,
                x,
                x_level: level,
            })
        }
    }
}

/// Exact Kruskal–Katona minimum `v`-shadow of `m` sets of size `u`.
///
/// At `v == u` the shadow is the family itself and the bound is `m`.
pub fn shadow_lower_bound(m: &Natural, u: usize, v: usize) -> Result<Natural> {
    if v == 0 || v > u {
        return Err(Error::InvalidArgument(format!("shadow level v = {v} outside 1..={u}")));
    }
    if v == u {
        return Ok(m.clone());
    }
    let shift = (u - v) as i64;
    let c = cascade_decompose(m, u)?;
    Ok(c.pairs.iter().map(|&(a, i)| binom_u(a, i as i64 - shift)).sum())
}

/// Lovász form of the shadow bound evaluated on a truncated cascade.
pub fn lovasz_bound(tc: &TruncatedCascade, v: usize) -> Result<f64> {
    if v == 0 || v >= tc.u {
        return Err(Error::InvalidArgument(format!(
            "lovasz_bound needs 1 <= v < u = {}",
            tc.u
        )));
    }
    let shift = (tc.u - v) as i64;
    let ints: f64 = tc
        .kept
        .iter()
        .map(|&(a, i)| natural_to_f64(&binom_u(a, i as i64 - shift)))
        .sum();
    Ok(ints + gen_binom(tc.x, tc.x_level as i64 - shift))
}

/// Best possible `|B|` for a cross-intersecting pair with `A` in `C([n], k)`,
/// `B` in `C([n], l)` and `|A| = m`.
pub fn kk_cross_bound(n: usize, k: usize, l: usize, m: &Natural) -> Result<Natural> {
    if k == 0 || l == 0 || k > n || l > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k, l <= n (n={n}, k={k}, l={l})"
        )));
    }
    if *m > binom_u(n as u64, k as i64) {
        return Err(Error::InvalidArgument(format!("m = {m} exceeds C({n}, {k})")));
    }
    let total = binom_u(n as u64, l as i64);
    if m.is_zero() || k + l > n {
        return Ok(total);
    }
    let shadow = shadow_lower_bound(m, n - k, l)?;
    Ok(total - shadow)
}

/// `Some(a)` when `m == C(a, u)` for an integer `a >= u`.
pub fn binomial_top(m: &Natural, u: usize) -> Option<u64> {
    if m.is_zero() {
        return None;
    }
    let a = largest_top(m, u);
    (binom_u(a, u as i64) == *m).then_some(a)
}

/// Fixed-width cascade arithmetic for the oracle sweep. Every binomial with
/// top argument below `rows` must fit in `u64`.
#[derive(Debug, Clone)]
pub struct BinomTable {
    rows: usize,
    table: Vec<u64>,
}

impl BinomTable {
    pub fn new(rows: usize) -> Option<Self> {
        let mut table = vec![0u64; rows * rows];
        for a in 0..rows {
            table[a * rows] = 1;
            for b in 1..=a {
                let above = table[(a - 1) * rows + b];
                let left = table[(a - 1) * rows + b - 1];
                table[a * rows + b] = above.checked_add(left)?;
            }
        }
        Some(BinomTable { rows, table })
    }

    #[inline]
    pub fn get(&self, a: usize, b: isize) -> u64 {
        if b < 0 || a >= self.rows || b as usize > a {
            0
        } else {
            self.table[a * self.rows + b as usize]
        }
    }

    /// Kruskal–Katona shadow bound in `u64`; mirrors [`shadow_lower_bound`].
    pub fn shadow_bound(&self, m: u64, u: usize, v: usize) -> u64 {
        if v == u || m == 0 {
            return m;
        }
        debug_assert!(m <= self.get(self.rows - 1, u as isize));
        let shift = (u - v) as isize;
        let mut rest = m;
        let mut level = u;
        let mut top = self.rows - 1;
        let mut out = 0u64;
        while rest > 0 {
            while self.get(top, level as isize) > rest {
                top -= 1;
            }
            rest -= self.get(top, level as isize);
            out += self.get(top, level as isize - shift);
            level -= 1;
            top = top.saturating_sub(1);
        }
        out
    }
}
