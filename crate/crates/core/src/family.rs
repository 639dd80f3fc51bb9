//! Explicit set families over `[n]`, one `u64` bitmask per member.
//!
//! Element `i` (1-based) is bit `i - 1`. For sets of a fixed size the numeric
//! order of the masks is exactly the colexicographic order, which is what
//! makes [`colex_segment`] a plain Gosper walk.

use std::collections::HashSet;
use std::fmt::Write as _;

use itertools::Itertools;
use num_traits::ToPrimitive;

use crate::arith::{binom_u, Natural};
use crate::cascade::binomial_top;
use crate::error::{Error, Result};

/// Largest ground set a family may live on.
pub const MAX_GROUND: usize = 64;

/// Subset of `[n]` as a bitmask.
pub type SetMask = u64;

pub fn full_mask(n: usize) -> SetMask {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// 1-based sorted elements of a mask.
pub fn elements(mask: SetMask) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

pub fn mask_of(elems: &[usize]) -> SetMask {
    elems.iter().fold(0, |m, &e| m | 1u64 << (e - 1))
}

/// Next mask with the same popcount (Gosper's hack). `None` on overflow.
#[inline]
pub fn next_same_weight(x: SetMask) -> Option<SetMask> {
    if x == 0 {
        return None;
    }
    let c = x & x.wrapping_neg();
    let r = x.checked_add(c)?;
    Some((((r ^ x) >> 2) / c) | r)
}

/// All `k`-subsets of `[n]` in colex order.
pub fn layer(n: usize, k: usize) -> impl Iterator<Item = SetMask> {
    let limit = full_mask(n);
    let first = if k == 0 {
        Some(0)
    } else if k <= n {
        Some(full_mask(k))
    } else {
        None
    };
    let mut cur = first;
    let mut done_empty = false;
    std::iter::from_fn(move || {
        let x = cur?;
        if k == 0 {
            if done_empty {
                return None;
            }
            done_empty = true;
            return Some(0);
        }
        if x & !limit != 0 {
            return None;
        }
        cur = next_same_weight(x);
        Some(x)
    })
}

fn check_ground(n: usize) -> Result<()> {
    if n > MAX_GROUND {
        return Err(Error::Capacity(format!("ground set of size {n} exceeds {MAX_GROUND}")));
    }
    Ok(())
}

/// A family of `k`-subsets of `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniformFamily {
    n: usize,
    k: usize,
    members: Vec<SetMask>,
}

impl UniformFamily {
    /// Validates sizes, range and distinctness. Member order is kept.
    pub fn new(n: usize, k: usize, members: Vec<SetMask>) -> Result<Self> {
        check_ground(n)?;
        if k > n {
            return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
        }
        let limit = full_mask(n);
        let mut seen = HashSet::with_capacity(members.len());
        for &m in &members {
            if m & !limit != 0 || m.count_ones() as usize != k {
                return Err(Error::InvalidArgument(format!(
                    "member {:?} is not a {k}-subset of [{n}]",
                    elements(m)
                )));
            }
            if !seen.insert(m) {
                return Err(Error::InvalidArgument(format!("duplicate member {:?}", elements(m))));
            }
        }
        Ok(UniformFamily { n, k, members })
    }

    pub(crate) fn from_sorted_unchecked(n: usize, k: usize, members: Vec<SetMask>) -> Self {
        UniformFamily { n, k, members }
    }

    /// The whole layer `C([n], k)`.
    pub fn full_layer(n: usize, k: usize) -> Result<Self> {
        check_ground(n)?;
        Ok(UniformFamily {
            n,
            k,
            members: layer(n, k).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn members(&self) -> &[SetMask] {
        &self.members
    }
    pub fn len(&self) -> usize {
        self.members.len()
    }
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in colex order.
    pub fn sorted(mut self) -> Self {
        self.members.sort_unstable();
        self
    }

    /// Union of all members.
    pub fn support(&self) -> SetMask {
        self.members.iter().fold(0, |a, &m| a | m)
    }

    pub fn to_general(&self) -> GeneralFamily {
        GeneralFamily::from_masks(self.n, self.members.iter().copied())
    }
}

/// An arbitrary family of subsets of `[n]`, kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneralFamily {
    n: usize,
    members: Vec<SetMask>,
}

impl GeneralFamily {
    pub fn new(n: usize, members: Vec<SetMask>) -> Result<Self> {
        check_ground(n)?;
        let limit = full_mask(n);
        if let Some(&m) = members.iter().find(|&&m| m & !limit != 0) {
            return Err(Error::InvalidArgument(format!(
                "member {:?} is not a subset of [{n}]",
                elements(m)
            )));
        }
        let before = members.len();
        let fam = Self::from_masks(n, members);
        if fam.members.len() != before {
            return Err(Error::InvalidArgument("duplicate members".into()));
        }
        Ok(fam)
    }

    pub(crate) fn from_masks(n: usize, members: impl IntoIterator<Item = SetMask>) -> Self {
        let mut members: Vec<_> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        GeneralFamily { n, members }
    }

    /// Every subset of `[n]`.
    pub fn power_set(n: usize) -> Result<Self> {
        if n > 24 {
            return Err(Error::Capacity(format!("power set of [{n}] is too large to list")));
        }
        Ok(GeneralFamily {
            n,
            members: (0..1u64 << n).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn members(&self) -> &[SetMask] {
        &self.members
    }
    pub fn len(&self) -> usize {
        self.members.len()
    }
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
    pub fn contains(&self, m: SetMask) -> bool {
        self.members.binary_search(&m).is_ok()
    }

    /// Member count at each size `0..=n`.
    pub fn size_profile(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.n + 1];
        for m in &self.members {
            out[m.count_ones() as usize] += 1;
        }
        out
    }

    /// Image in `2^[n+1]` under `F -> {F, F + {n+1}}`.
    pub fn lift(&self) -> Result<Self> {
        check_ground(self.n + 1)?;
        let top = 1u64 << self.n;
        Ok(Self::from_masks(
            self.n + 1,
            self.members.iter().flat_map(|&m| [m, m | top]),
        ))
    }

    /// Disjoint union; errors if the families overlap or live on different grounds.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::InvalidArgument("ground sets differ".into()));
        }
        if self.members.iter().any(|&m| other.contains(m)) {
            return Err(Error::InvalidArgument("families are not disjoint".into()));
        }
        Ok(Self::from_masks(
            self.n,
            self.members.iter().chain(&other.members).copied(),
        ))
    }
}

/// The first `m` `u`-subsets of `[n]` in colex order.
pub fn colex_segment(m: &Natural, u: usize, n: usize) -> Result<UniformFamily> {
    check_ground(n)?;
    let cap = binom_u(n as u64, u as i64);
    if *m > cap {
        return Err(Error::Capacity(format!("m = {m} exceeds C({n}, {u}) = {cap}")));
    }
    let m = m
        .to_usize()
        .ok_or_else(|| Error::Capacity(format!("m = {m} too large to list")))?;
    Ok(UniformFamily::from_sorted_unchecked(
        n,
        u,
        layer(n, u).take(m).collect(),
    ))
}

/// `v`-subsets of a single mask.
fn subsets_of_size(mask: SetMask, v: usize) -> impl Iterator<Item = SetMask> {
    let bits: Vec<SetMask> = (0..64).filter(|b| mask >> b & 1 == 1).map(|b| 1u64 << b).collect();
    bits.into_iter()
        .combinations(v)
        .map(|c| c.into_iter().fold(0, |a, b| a | b))
}

/// The `v`-shadow: every `v`-set contained in some member. `v == k` returns the family.
pub fn shadow(f: &UniformFamily, v: usize) -> Result<UniformFamily> {
    if v > f.k {
        return Err(Error::InvalidArgument(format!("shadow level {v} exceeds k = {}", f.k)));
    }
    if v == f.k {
        return Ok(f.clone().sorted());
    }
    let set: HashSet<SetMask> = f.members.iter().flat_map(|&m| subsets_of_size(m, v)).collect();
    let mut members: Vec<_> = set.into_iter().collect();
    members.sort_unstable();
    Ok(UniformFamily::from_sorted_unchecked(f.n, v, members))
}

/// `|shadow(first j members, v)|` for every prefix length `j = 1..=|F|`.
pub fn prefix_shadow_sizes(f: &UniformFamily, v: usize) -> Vec<usize> {
    let mut seen = HashSet::new();
    f.members
        .iter()
        .map(|&m| {
            seen.extend(subsets_of_size(m, v));
            seen.len()
        })
        .collect()
}

/// Member-wise complement in `[n]`.
pub fn complement_family(f: &UniformFamily) -> UniformFamily {
    let full = full_mask(f.n);
    let members = f.members.iter().map(|&m| full & !m).collect();
    UniformFamily::from_sorted_unchecked(f.n, f.n - f.k, members)
}

/// Katona's equality test: with `|F| = C(a, k)`, is `|shadow(F, v)| = C(a, v)`?
pub fn is_shadow_tight(f: &UniformFamily, v: usize) -> Result<bool> {
    let size = Natural::from(f.len());
    let a = binomial_top(&size, f.k).ok_or(Error::NonBinomialSize(f.len(), f.k))?;
    let sh = shadow(f, v)?;
    Ok(Natural::from(sh.len()) == binom_u(a, v as i64))
}

/// `true` when `F` is the full `k`-layer on its support.
pub fn is_full_layer_on_support(f: &UniformFamily) -> bool {
    let support = f.support().count_ones() as u64;
    Natural::from(f.len()) == binom_u(support, f.k as i64)
}

/// Writes a family in the line format: header `n k`, then one sorted member per line.
///
/// Non-uniform families use `*` in place of `k`; the empty set is written `{}`.
pub fn write_text(n: usize, k: Option<usize>, members: &[SetMask]) -> String {
    let mut out = String::new();
    match k {
        Some(k) => writeln!(out, "{n} {k}").unwrap(),
        None => writeln!(out, "{n} *").unwrap(),
    }
    for &m in members {
        if m == 0 {
            out.push_str("{}\n");
        } else {
            out.push_str(&elements(m).iter().join(" "));
            out.push('\n');
        }
    }
    out
}

/// A parsed family file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedFamily {
    Uniform(UniformFamily),
    General(GeneralFamily),
}

pub fn parse_text(text: &str) -> Result<ParsedFamily> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let head: Vec<&str> = header.split_whitespace().collect();
    let perr = |line: usize, msg: String| Error::Parse { line: line + 1, msg };
    if head.len() != 2 {
        return Err(perr(0, format!("header must be `n k`, got {header:?}")));
    }
    let n: usize = head[0].parse().map_err(|_| perr(0, format!("bad n {:?}", head[0])))?;
    let k: Option<usize> = match head[1] {
        "*" => None,
        s => Some(s.parse().map_err(|_| perr(0, format!("bad k {s:?}")))?),
    };
    check_ground(n)?;
    let mut members = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line == "{}" {
            members.push(0);
            continue;
        }
        let mut elems = Vec::new();
        for tok in line.split_whitespace() {
            let e: usize = tok.parse().map_err(|_| perr(idx, format!("bad element {tok:?}")))?;
            if e == 0 || e > n {
                return Err(perr(idx, format!("element {e} outside [1, {n}]")));
            }
            elems.push(e);
        }
        if !elems.windows(2).all(|w| w[0] < w[1]) {
            return Err(perr(idx, "elements must be strictly increasing".into()));
        }
        members.push(mask_of(&elems));
    }
    match k {
        Some(k) => Ok(ParsedFamily::Uniform(UniformFamily::new(n, k, members)?)),
        None => Ok(ParsedFamily::General(GeneralFamily::new(n, members)?)),
    }
}
