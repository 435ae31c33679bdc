use std::fmt::Write as _;

use super::eigen::Spectrum;
use super::SpectraError;

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    /// `|λ_k − μ_k|` for each compared index.
    pub diffs: Vec<f64>,
    pub max_abs_diff: f64,
    pub l2_diff: f64,
}

pub fn compare_values(a: &[f64], b: &[f64], m: usize) -> Result<ComparisonReport, SpectraError> {
    let available = a.len().min(b.len());
    if available < m {
        return Err(SpectraError::InsufficientEigenvalues { requested: m, available });
    }
    let diffs: Vec<f64> = a[..m].iter().zip(&b[..m]).map(|(x, y)| (x - y).abs()).collect();
    Ok(ComparisonReport {
        max_abs_diff: diffs.iter().copied().fold(0.0, f64::max),
        l2_diff: diffs.iter().map(|d| d * d).sum::<f64>().sqrt(),
        diffs,
    })
}

pub fn compare_spectra(s1: &Spectrum, s2: &Spectrum, m: usize) -> Result<ComparisonReport, SpectraError> {
    compare_values(&s1.eigenvalues, &s2.eigenvalues, m)
}

/// `x` rounded to `digits` significant digits, positional notation.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let decimals = |e: i32| (digits as i32 - 1 - e).max(0) as usize;
    let e = x.abs().log10().floor() as i32;
    let s = format!("{:.*}", decimals(e), x);
    // rounding may carry into a new leading digit
    let carried = s.trim_start_matches('-').parse::<f64>().is_ok_and(|v| v >= 10f64.powi(e + 1));
    if carried {
        format!("{:.*}", decimals(e + 1), x)
    } else {
        s
    }
}

/// CSV with header `k,lambda_A,lambda_B,abs_diff`, or `k,lambda` for a
/// single spectrum.
pub fn spectrum_csv(a: &[f64], b: Option<&[f64]>) -> String {
    let mut out = String::new();
    match b {
        None => {
            out.push_str("k,lambda\n");
            for (k, x) in a.iter().enumerate() {
                writeln!(out, "{},{}", k + 1, format_significant(*x, 10)).expect("write to string");
            }
        }
        Some(b) => {
            out.push_str("k,lambda_A,lambda_B,abs_diff\n");
            for (k, (x, y)) in a.iter().zip(b).enumerate() {
                writeln!(
                    out,
                    "{},{},{},{:.4e}",
                    k + 1,
                    format_significant(*x, 10),
                    format_significant(*y, 10),
                    (x - y).abs()
                )
                .expect("write to string");
            }
        }
    }
    out
}
