//! Detuning sweeps over a uniform grid.
//!
//! The sweep axis is the two-photon detuning in units of `γu + γv`; the
//! physical detuning handed to the model is `x · (γu + γv)`.

mod compare;
mod csv_io;
mod peaks;
mod preset;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::analytic::{cascade_solver, cascade_weak, two_photon_weak, CascadeForm, WeakFieldSolution};
use crate::error::{Error, Result};
use crate::model::{solve_point, IntensityTriple, ModelParams};
use crate::num::Real;
use crate::operator::Level;

pub use compare::{compare, ColumnDeviation, CompareReport};
pub use csv_io::{from_reader, read_csv, to_writer, write_csv, CSV_HEADER};
pub use peaks::{detect_peaks, find_peaks, label_peaks, Peak, PeakLabel, PeakReport, Trace,
    DEFAULT_PROMINENCE};
pub use preset::{preset, PRESET_NAMES};

/// How each grid point is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SweepMode {
    /// Full stationary state of the master equation.
    #[default]
    Numeric,
    /// Weak two-photon closed forms.
    Analytic2ph,
    /// Weak one-photon cascade closed forms.
    AnalyticCascade,
    /// Stage-by-stage perturbative hierarchy.
    CascadeSolver,
    /// Numeric rows, additionally checked against the matching closed form.
    Compare,
}

impl SweepMode {
    pub const ALL: [SweepMode; 5] = [
        SweepMode::Numeric,
        SweepMode::Analytic2ph,
        SweepMode::AnalyticCascade,
        SweepMode::CascadeSolver,
        SweepMode::Compare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepMode::Numeric => "numeric",
            SweepMode::Analytic2ph => "analytic_2ph",
            SweepMode::AnalyticCascade => "analytic_cascade",
            SweepMode::CascadeSolver => "cascade_solver",
            SweepMode::Compare => "compare",
        }
    }
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|m| m.name()).collect();
                Error::param("mode", format!("unknown mode `{s}`; expected one of {}", names.join(", ")))
            })
    }
}

/// One sweep: model parameters (detuning ignored), grid and mode.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig<T: Real> {
    pub label: String,
    pub params: ModelParams<T>,
    pub delta_min: T,
    pub delta_max: T,
    pub points: usize,
    pub mode: SweepMode,
    /// Closed forms used by [`SweepMode::AnalyticCascade`].
    pub cascade_form: CascadeForm,
    pub output_path: Option<PathBuf>,
}

impl<T: Real> SweepConfig<T> {
    /// `[-6, 6]` with 241 points in numeric mode.
    pub fn new(label: impl Into<String>, params: ModelParams<T>) -> Self {
        Self {
            label: label.into(),
            params,
            delta_min: T::lit(-6.0),
            delta_max: T::lit(6.0),
            points: 241,
            mode: SweepMode::Numeric,
            cascade_form: CascadeForm::Derived,
            output_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !self.delta_min.is_finite() || !self.delta_max.is_finite() {
            return Err(Error::param("delta range", "bounds must be finite"));
        }
        if !(self.delta_min < self.delta_max) {
            return Err(Error::param(
                "delta range",
                format!("delta_min {} must be below delta_max {}", self.delta_min, self.delta_max),
            ));
        }
        if self.points < 3 {
            return Err(Error::param("points", format!("{} is fewer than 3", self.points)));
        }
        Ok(())
    }

    /// Uniform grid including both endpoints, in axis units.
    pub fn grid(&self) -> Vec<T> {
        let n = self.points;
        let step = self.step();
        (0..n)
            .map(|k| {
                if k + 1 == n {
                    self.delta_max
                } else {
                    self.delta_min + step * T::lit(k as f64)
                }
            })
            .collect()
    }

    pub fn step(&self) -> T {
        (self.delta_max - self.delta_min) / T::lit((self.points - 1) as f64)
    }
}

/// One grid point. `delta` is in units of `γu + γv`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow<T: Real> {
    pub delta: T,
    pub rho11: T,
    pub rho22: T,
    pub re_rho12: T,
    pub rho_bb: T,
    pub rho_cc: T,
    pub rho_dd: T,
    pub i_u: T,
    pub i_v: T,
    pub i_p0: T,
}

impl<T: Real> SweepRow<T> {
    pub fn values(&self) -> [T; 10] {
        [
            self.delta,
            self.rho11,
            self.rho22,
            self.re_rho12,
            self.rho_bb,
            self.rho_cc,
            self.rho_dd,
            self.i_u,
            self.i_v,
            self.i_p0,
        ]
    }

    pub fn from_values(v: [T; 10]) -> Self {
        Self {
            delta: v[0],
            rho11: v[1],
            rho22: v[2],
            re_rho12: v[3],
            rho_bb: v[4],
            rho_cc: v[5],
            rho_dd: v[6],
            i_u: v[7],
            i_v: v[8],
            i_p0: v[9],
        }
    }

    pub fn intensity(&self, trace: Trace) -> T {
        match trace {
            Trace::IU => self.i_u,
            Trace::IV => self.i_v,
            Trace::IP0 => self.i_p0,
        }
    }
}

/// Rows ordered by strictly increasing `delta`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult<T: Real> {
    pub rows: Vec<SweepRow<T>>,
}

impl<T: Real> SweepResult<T> {
    pub fn deltas(&self) -> Vec<T> {
        self.rows.iter().map(|r| r.delta).collect()
    }

    pub fn trace(&self, trace: Trace) -> Vec<T> {
        self.rows.iter().map(|r| r.intensity(trace)).collect()
    }
}

/// Row from closed-form populations. The `d` population follows from the
/// stationary balance `γd ρdd = I_u`; `ρcc` closes the trace.
fn row_from_weak<T: Real>(
    delta: T,
    params: &ModelParams<T>,
    s: WeakFieldSolution<T>,
) -> Result<SweepRow<T>> {
    let i = IntensityTriple::from_elements(params, s.rho11, s.rho22, s.re_rho12)?;
    let rho_dd = i.i_u / params.gamma_d;
    Ok(SweepRow {
        delta,
        rho11: s.rho11,
        rho22: s.rho22,
        re_rho12: s.re_rho12,
        rho_bb: s.rho_bb,
        rho_cc: T::one() - s.rho11 - s.rho22 - s.rho_bb - rho_dd,
        rho_dd,
        i_u: i.i_u,
        i_v: i.i_v,
        i_p0: i.i_p0,
    })
}

/// Evaluates a single grid point. `delta` is in axis units.
pub fn evaluate_point<T: Real>(
    params: &ModelParams<T>,
    delta: T,
    mode: SweepMode,
    cascade_form: CascadeForm,
) -> Result<SweepRow<T>> {
    let p = params.with_delta(delta * params.detuning_unit());
    match mode {
        SweepMode::Numeric | SweepMode::Compare => {
            let (rho, i) = solve_point(&p)?;
            Ok(SweepRow {
                delta,
                rho11: rho.population(Level::A1),
                rho22: rho.population(Level::A2),
                re_rho12: rho.elem(Level::A1, Level::A2).re,
                rho_bb: rho.population(Level::B),
                rho_cc: rho.population(Level::C),
                rho_dd: rho.population(Level::D),
                i_u: i.i_u,
                i_v: i.i_v,
                i_p0: i.i_p0,
            })
        }
        SweepMode::Analytic2ph => row_from_weak(delta, &p, two_photon_weak(&p)?),
        SweepMode::AnalyticCascade => row_from_weak(delta, &p, cascade_weak(&p, cascade_form)?),
        SweepMode::CascadeSolver => row_from_weak(delta, &p, cascade_solver(&p)?),
    }
}

/// Evaluates every grid point in parallel. The first failing point in grid
/// order is reported.
pub fn run_sweep<T: Real>(config: &SweepConfig<T>) -> Result<SweepResult<T>> {
    config.validate()?;
    let results: Vec<Result<SweepRow<T>>> = config
        .grid()
        .into_par_iter()
        .map(|x| {
            evaluate_point(&config.params, x, config.mode, config.cascade_form).map_err(|e| {
                Error::PointFailed {
                    delta: x.to_f64_lossy(),
                    source: Box::new(e),
                }
            })
        })
        .collect();
    let rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows })
}
