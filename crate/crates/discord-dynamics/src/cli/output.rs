//! CSV rows and JSON summaries emitted by the experiment runners.
//!
//! CSV schema: `t_ns,c1,c2,c3,mutual_bits,classical_bits,discord_bits,
//! geo_discord,regime`, optionally followed by `err_mutual,err_classical,
//! err_discord` and, for the free-decay runner, the Taylor and
//! closed-form comparison columns. Floats carry 9 significant digits.

use crate::correlations::{AnalyticBellColumns, ErrorBars, TaylorCorrelations};
use crate::states::BellDiagonalCoeffs;
use serde::Serialize;
use std::fmt::Write as _;

/// Decoherence/revival regime of one sample, from the |c₂| vs |c₃|
/// comparison and the |c₂| trend: I/II are the classical- and
/// quantum-decoherence regimes (|c₂| falling), III/IV the quantum- and
/// classical-revival regimes (|c₂| rising).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    I,
    II,
    III,
    IV,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::I => "I",
            Regime::II => "II",
            Regime::III => "III",
            Regime::IV => "IV",
        };
        f.write_str(s)
    }
}

/// Labels each (|c₂|, |c₃|) pair. The first sample counts as falling.
pub fn label_regimes(coeffs: &[BellDiagonalCoeffs]) -> Vec<Regime> {
    let mut out = Vec::with_capacity(coeffs.len());
    for (k, c) in coeffs.iter().enumerate() {
        let above = c.c2.abs() > c.c3.abs();
        let rising = k > 0 && c.c2.abs() > coeffs[k - 1].c2.abs();
        out.push(match (above, rising) {
            (true, false) => Regime::I,
            (false, false) => Regime::II,
            (false, true) => Regime::III,
            (true, true) => Regime::IV,
        });
    }
    out
}

/// One CSV row of an experiment sweep.
#[derive(Debug, Clone)]
pub struct CurveRow {
    pub t_ns: f64,
    pub coeffs: BellDiagonalCoeffs,
    pub mutual_bits: f64,
    pub classical_bits: f64,
    pub discord_bits: f64,
    pub geo_discord: f64,
    pub regime: Regime,
    pub err: Option<ErrorBars>,
    pub taylor: Option<TaylorCorrelations>,
    pub analytic: Option<AnalyticBellColumns>,
}

/// 9 significant digits, scientific.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

/// Renders rows to CSV text. Optional column groups appear when the first
/// row carries them; all rows of one sweep are built uniformly.
pub fn rows_to_csv(rows: &[CurveRow]) -> String {
    let mut out = String::new();
    let with_err = rows.first().is_some_and(|r| r.err.is_some());
    let with_taylor = rows.first().is_some_and(|r| r.taylor.is_some());
    let with_analytic = rows.first().is_some_and(|r| r.analytic.is_some());

    out.push_str("t_ns,c1,c2,c3,mutual_bits,classical_bits,discord_bits,geo_discord,regime");
    if with_err {
        out.push_str(",err_mutual,err_classical,err_discord");
    }
    if with_taylor {
        out.push_str(",taylor_mutual_bits,taylor_classical_bits,taylor_discord_bits");
    }
    if with_analytic {
        out.push_str(",analytic_mutual_bits,analytic_classical_bits,analytic_discord_bits");
    }
    out.push('\n');

    for r in rows {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_float(r.t_ns),
            fmt_float(r.coeffs.c1),
            fmt_float(r.coeffs.c2),
            fmt_float(r.coeffs.c3),
            fmt_float(r.mutual_bits),
            fmt_float(r.classical_bits),
            fmt_float(r.discord_bits),
            fmt_float(r.geo_discord),
            r.regime
        );
        if let Some(e) = &r.err {
            let _ = write!(
                out,
                ",{},{},{}",
                fmt_float(e.mutual_bits),
                fmt_float(e.classical_bits),
                fmt_float(e.discord_bits)
            );
        }
        if let Some(t) = &r.taylor {
            let _ = write!(
                out,
                ",{},{},{}",
                fmt_float(t.mutual_bits),
                fmt_float(t.classical_bits),
                fmt_float(t.discord_bits)
            );
        }
        if let Some(a) = &r.analytic {
            let _ = write!(
                out,
                ",{},{},{}",
                fmt_float(a.mutual_bits),
                fmt_float(a.classical_bits),
                fmt_float(a.discord_bits)
            );
        }
        out.push('\n');
    }
    out
}

/// Per-experiment summary; inapplicable fields are omitted.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_c_ns: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_decay_ns: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prolongation_factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub revival_ratios: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(c2: f64, c3: f64) -> BellDiagonalCoeffs {
        BellDiagonalCoeffs { c1: 0.0, c2, c3 }
    }

    #[test]
    fn regime_sequence_over_a_revival_cycle() {
        let coeffs = vec![
            c(0.5, 0.2),   // falling start, |c2| > |c3|
            c(0.01, 0.2),  // decayed below
            c(0.001, 0.2), // still falling
            c(0.05, 0.2),  // refocusing below |c3|
            c(0.45, 0.2),  // refocused above
        ];
        let labels = label_regimes(&coeffs);
        assert_eq!(
            labels,
            vec![Regime::I, Regime::II, Regime::II, Regime::III, Regime::IV]
        );
    }

    #[test]
    fn negative_coefficients_are_compared_by_magnitude() {
        let labels = label_regimes(&[c(-0.5, 0.2), c(-0.3, -0.2)]);
        assert_eq!(labels, vec![Regime::I, Regime::I]);
    }

    #[test]
    fn csv_has_nine_significant_digits_and_stable_header() {
        let rows = vec![CurveRow {
            t_ns: 166.0,
            coeffs: c(0.0148, 0.006),
            mutual_bits: 2.0e-4,
            classical_bits: 1.8e-4,
            discord_bits: 2.0e-5,
            geo_discord: 1.5e-5,
            regime: Regime::I,
            err: None,
            taylor: None,
            analytic: None,
        }];
        let text = rows_to_csv(&rows);
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t_ns,c1,c2,c3,mutual_bits,classical_bits,discord_bits,geo_discord,regime"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("1.66000000e2,0.00000000e0,1.48000000e-2,"));
        assert!(row.ends_with(",I"));
    }

    #[test]
    fn summary_omits_inapplicable_fields() {
        let s = Summary {
            t_c_ns: Some(165.9),
            t_decay_ns: Some(175.0),
            ..Summary::default()
        };
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"t_c_ns":165.9,"t_decay_ns":175.0}"#);
    }
}
