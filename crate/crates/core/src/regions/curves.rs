//! Sampled boundary curves over an `alpha` grid, written as CSV.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::regions::{bisect, e_j, e_j_lower_bound};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// `e_0, ..., e_{count-1}`, one labelled row per curve and grid point.
    EjCurves { count: usize },
    /// `inf_j e_j(alpha)`, the upper edge of Delta.
    DeltaBoundary,
    /// Upper edge of Delta'.
    DeltaPrimeBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSpec {
    pub kind: CurveKind,
    pub grid: usize,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub j_cap: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub alpha: f64,
    pub value: f64,
    pub label: Option<String>,
}

fn grid_points(spec: &CurveSpec) -> Result<Vec<f64>> {
    if spec.grid < 2 {
        return Err(Error::InvalidArgument("grid needs at least 2 points".into()));
    }
    if !(spec.alpha_lo > 0.0 && spec.alpha_lo < spec.alpha_hi && spec.alpha_hi < 0.5) {
        return Err(Error::InvalidArgument(format!(
            "alpha range [{}, {}] must lie inside (0, 1/2)",
            spec.alpha_lo, spec.alpha_hi
        )));
    }
    let step = (spec.alpha_hi - spec.alpha_lo) / (spec.grid - 1) as f64;
    Ok((0..spec.grid).map(|s| spec.alpha_lo + step * s as f64).collect())
}

/// Infimum of `e_j(alpha)` over all `j` with the minimising index, or a
/// fallback of `min(found, 1 - alpha)` flagged as uncertified.
fn delta_boundary(alpha: f64, j_cap: usize) -> (f64, String) {
    let mut best = f64::INFINITY;
    let mut arg = 0;
    let mut j = 0;
    let mut cap = j_cap;
    loop {
        while j <= cap {
            let e = e_j(alpha, j);
            if e < best {
                best = e;
                arg = j;
            }
            j += 1;
        }
        if e_j_lower_bound(alpha, cap + 1) >= best {
            return (best, format!("e{arg}"));
        }
        if cap >= 1 << 16 {
            return (best.min(1.0 - alpha), "uncertified".into());
        }
        cap = cap * 2 + 1;
    }
}

fn delta_prime_boundary(alpha: f64) -> Result<(f64, String)> {
    let first = 1.0 / (2.0 - alpha);
    let g = |b: f64| (1.0 - alpha) * -(-b).ln_1p() - (1.0 - b) * -alpha.ln();
    let second = bisect(1e-12, 1.0 - 1e-15, g)?;
    Ok(if first <= second {
        (first, "c1".into())
    } else {
        (second, "c2".into())
    })
}

pub fn curve_samples(spec: &CurveSpec) -> Result<Vec<CurveRow>> {
    let alphas = grid_points(spec)?;
    match spec.kind {
        CurveKind::EjCurves { count } => Ok(alphas
            .par_iter()
            .flat_map_iter(|&a| {
                (0..count).map(move |j| CurveRow {
                    alpha: a,
                    value: e_j(a, j),
                    label: Some(format!("e{j}")),
                })
            })
            .collect()),
        CurveKind::DeltaBoundary => Ok(alphas
            .par_iter()
            .map(|&a| {
                let (value, label) = delta_boundary(a, spec.j_cap);
                CurveRow {
                    alpha: a,
                    value,
                    label: Some(label),
                }
            })
            .collect()),
        CurveKind::DeltaPrimeBoundary => alphas
            .par_iter()
            .map(|&a| {
                let (value, label) = delta_prime_boundary(a)?;
                Ok(CurveRow {
                    alpha: a,
                    value,
                    label: Some(label),
                })
            })
            .collect(),
    }
}

/// `%.15g`-style formatting.
pub(crate) fn fmt_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.14e}", x);
    let exp: i32 = sci.split('e').nth(1).and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..15).contains(&exp) {
        let s = format!("{:.*}", (14 - exp) as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let (mant, e) = sci.split_once('e').unwrap();
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{mant}e{e}")
    }
}

pub fn write_csv(rows: &[CurveRow]) -> String {
    let labelled = rows.iter().any(|r| r.label.is_some());
    let mut out = String::from(if labelled {
        "alpha,value,label\n"
    } else {
        "alpha,value\n"
    });
    for r in rows {
        out.push_str(&fmt_sig(r.alpha));
        out.push(',');
        out.push_str(&fmt_sig(r.value));
        if labelled {
            out.push(',');
            out.push_str(r.label.as_deref().unwrap_or(""));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::{in_delta, RegionPoint, DEFAULT_J_CAP};

    fn spec(kind: CurveKind, grid: usize) -> CurveSpec {
        CurveSpec {
            kind,
            grid,
            alpha_lo: 0.01,
            alpha_hi: 0.49,
            j_cap: DEFAULT_J_CAP,
        }
    }

    #[test]
    fn formatting() {
        assert_eq!(fmt_sig(0.25), "0.25");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt_sig(1e-7), "1e-7");
        assert_eq!(fmt_sig(2.0), "2");
    }

    #[test]
    fn delta_boundary_examples() {
        let (v, label) = delta_boundary(0.25, DEFAULT_J_CAP);
        assert!((v - 1.0 / 1.75).abs() < 1e-14);
        assert_eq!(label, "e0");
        let (v, _) = delta_boundary(0.45, DEFAULT_J_CAP);
        assert!(v <= 0.55);
    }

    #[test]
    fn delta_boundary_separates_delta() {
        let rows = curve_samples(&spec(CurveKind::DeltaBoundary, 40)).unwrap();
        assert_eq!(rows.len(), 40);
        for r in rows
            .iter()
            .filter(|r| r.value > 0.5 + 1e-6 && r.label.as_deref() != Some("uncertified"))
        {
            let inside = 0.5 + (r.value - 0.5) * 0.9;
            let p = RegionPoint::new(r.alpha, inside).unwrap();
            assert_eq!(in_delta(p, 4096), Ok(true), "alpha={}", r.alpha);
        }
    }

    #[test]
    fn prime_boundary_below_delta_boundary() {
        let d = curve_samples(&spec(CurveKind::DeltaBoundary, 49)).unwrap();
        let dp = curve_samples(&spec(CurveKind::DeltaPrimeBoundary, 49)).unwrap();
        for (a, b) in d.iter().zip(&dp) {
            assert!(b.value <= a.value + 1e-12, "alpha={}", a.alpha);
        }
    }

    #[test]
    fn csv_is_deterministic() {
        let s = spec(CurveKind::EjCurves { count: 4 }, 11);
        let one = write_csv(&curve_samples(&s).unwrap());
        let two = write_csv(&curve_samples(&s).unwrap());
        assert_eq!(one, two);
        assert!(one.starts_with("alpha,value,label\n"));
        assert_eq!(one.lines().count(), 1 + 44);
        assert!(!one.contains('\r'));
    }

    #[test]
    fn bad_ranges() {
        assert!(curve_samples(&CurveSpec {
            alpha_hi: 0.6,
            ..spec(CurveKind::DeltaBoundary, 5)
        })
        .is_err());
        assert!(curve_samples(&spec(CurveKind::DeltaBoundary, 1)).is_err());
    }
}
