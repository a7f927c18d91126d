//! Numeric sweep checked column by column against the matching closed form.

use std::fmt;

use crate::error::Result;
use crate::num::Real;

use super::{run_sweep, SweepConfig, SweepMode, SweepResult, SweepRow};

/// Largest relative deviation of one column, over points where the numeric
/// value exceeds 1% of the column's largest magnitude.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnDeviation<T: Real> {
    pub numeric: &'static str,
    pub analytic: &'static str,
    pub max_rel_dev: T,
    pub at_delta: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareReport<T: Real> {
    pub label: String,
    pub analytic_mode: SweepMode,
    pub numeric: SweepResult<T>,
    pub analytic: SweepResult<T>,
    /// Same-name columns.
    pub columns: Vec<ColumnDeviation<T>>,
    /// `ρ11` against the closed-form `ρ22` and vice versa.
    pub swapped: Vec<ColumnDeviation<T>>,
}

type Getter<T> = fn(&SweepRow<T>) -> T;

fn column<T: Real>(name: &str) -> Getter<T> {
    match name {
        "rho11" => |r| r.rho11,
        "rho22" => |r| r.rho22,
        "re_rho12" => |r| r.re_rho12,
        "i_u" => |r| r.i_u,
        "i_v" => |r| r.i_v,
        _ => |r| r.i_p0,
    }
}

fn deviation<T: Real>(
    numeric: &SweepResult<T>,
    analytic: &SweepResult<T>,
    num_col: &'static str,
    ana_col: &'static str,
) -> ColumnDeviation<T> {
    let (fnum, fana) = (column::<T>(num_col), column::<T>(ana_col));
    let scale = numeric
        .rows
        .iter()
        .map(|r| fnum(r).abs())
        .fold(T::zero(), T::max);
    let floor = T::lit(0.01) * scale;
    let mut best = ColumnDeviation {
        numeric: num_col,
        analytic: ana_col,
        max_rel_dev: T::zero(),
        at_delta: T::nan(),
    };
    for (n, a) in numeric.rows.iter().zip(&analytic.rows) {
        let x = fnum(n);
        if x.abs() > floor {
            let rel = ((fana(a) - x) / x).abs();
            if rel > best.max_rel_dev || best.at_delta.is_nan() {
                best.max_rel_dev = rel;
                best.at_delta = n.delta;
            }
        }
    }
    best
}

/// Runs the sweep numerically and with the closed form matching the drive
/// (two-photon when `Q > 0`, cascade otherwise).
pub fn compare<T: Real>(config: &SweepConfig<T>) -> Result<CompareReport<T>> {
    let analytic_mode = if config.params.q > T::zero() {
        SweepMode::Analytic2ph
    } else {
        SweepMode::AnalyticCascade
    };
    let numeric = run_sweep(&SweepConfig { mode: SweepMode::Numeric, ..config.clone() })?;
    let analytic = run_sweep(&SweepConfig { mode: analytic_mode, ..config.clone() })?;
    let columns = ["rho11", "rho22", "re_rho12", "i_u", "i_v", "i_p0"]
        .into_iter()
        .map(|c| deviation(&numeric, &analytic, c, c))
        .collect();
    let swapped = vec![
        deviation(&numeric, &analytic, "rho11", "rho22"),
        deviation(&numeric, &analytic, "rho22", "rho11"),
    ];
    Ok(CompareReport {
        label: config.label.clone(),
        analytic_mode,
        numeric,
        analytic,
        columns,
        swapped,
    })
}

impl<T: Real> fmt::Display for CompareReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: numeric vs {}", self.label, self.analytic_mode)?;
        for d in self.columns.iter().chain(&self.swapped) {
            writeln!(
                f,
                "  {:>8} vs {:<8} max rel dev {:.3e} at delta {:+.3}",
                d.numeric, d.analytic, d.max_rel_dev, d.at_delta
            )?;
        }
        Ok(())
    }
}
