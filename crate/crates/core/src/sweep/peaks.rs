//! Local-maximum detection with topographic prominence.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::num::Real;

use super::SweepResult;

/// Default minimum prominence as a fraction of the trace maximum.
pub const DEFAULT_PROMINENCE: f64 = 0.02;

/// Intensity column of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trace {
    IU,
    IV,
    IP0,
}

impl Trace {
    pub const ALL: [Trace; 3] = [Trace::IU, Trace::IV, Trace::IP0];

    pub fn name(self) -> &'static str {
        match self {
            Trace::IU => "i_u",
            Trace::IV => "i_v",
            Trace::IP0 => "i_p0",
        }
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Trace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::param("trace", format!("unknown trace `{s}`; expected i_u, i_v or i_p0")))
    }
}

/// Resonance a detected peak is attributed to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeakLabel {
    /// `Δ = -ω12/2`
    LowerDoublet,
    /// `Δ = -2δ`
    Intermediate,
    /// `Δ = +ω12/2`
    UpperDoublet,
}

impl fmt::Display for PeakLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PeakLabel::LowerDoublet => "-w12/2",
            PeakLabel::Intermediate => "-2*delta_1ph",
            PeakLabel::UpperDoublet => "+w12/2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Peak<T: Real> {
    pub delta: T,
    pub height: T,
    pub prominence: T,
    pub label: Option<PeakLabel>,
}

/// Peaks of one trace, sorted by location.
#[derive(Clone, Debug, PartialEq)]
pub struct PeakReport<T: Real> {
    pub trace: Trace,
    pub peaks: Vec<Peak<T>>,
}

impl<T: Real> PeakReport<T> {
    pub fn locations(&self) -> Vec<T> {
        self.peaks.iter().map(|p| p.delta).collect()
    }
}

/// Strict interior local maxima of `y` whose prominence is at least
/// `min_prominence_fraction` of `max(y)`.
///
/// Prominence: on each side walk outward until a strictly higher sample or
/// the end of the trace, take the lowest sample passed, and subtract the
/// higher of the two side minima from the peak height.
pub fn find_peaks<T: Real>(x: &[T], y: &[T], min_prominence_fraction: T) -> Result<Vec<Peak<T>>> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    if y.len() < 3 {
        return Err(Error::param("trace", format!("{} samples, need at least 3", y.len())));
    }
    if !(min_prominence_fraction > T::zero() && min_prominence_fraction < T::one()) {
        return Err(Error::param(
            "prominence",
            format!("{min_prominence_fraction} must lie strictly between 0 and 1"),
        ));
    }
    let max = y.iter().copied().fold(T::neg_infinity(), T::max);
    if !(max > T::zero()) {
        return Ok(Vec::new());
    }
    let threshold = min_prominence_fraction * max;
    let mut out = Vec::new();
    for i in 1..y.len() - 1 {
        let h = y[i];
        if !(h > y[i - 1] && h > y[i + 1]) {
            continue;
        }
        let side_min = |range: &mut dyn Iterator<Item = usize>| {
            let mut lo = h;
            for j in range {
                if y[j] > h {
                    break;
                }
                lo = lo.min(y[j]);
            }
            lo
        };
        let left = side_min(&mut (0..i).rev());
        let right = side_min(&mut (i + 1..y.len()));
        let prominence = h - left.max(right);
        if prominence >= threshold && prominence > T::zero() {
            out.push(Peak { delta: x[i], height: h, prominence, label: None });
        }
    }
    Ok(out)
}

pub fn detect_peaks<T: Real>(
    result: &SweepResult<T>,
    trace: Trace,
    min_prominence_fraction: T,
) -> Result<PeakReport<T>> {
    let peaks = find_peaks(&result.deltas(), &result.trace(trace), min_prominence_fraction)?;
    Ok(PeakReport { trace, peaks })
}

/// Attributes peaks to the resonances `±ω12/2` and `-2δ` (converted to axis
/// units) when within `tolerance` of one.
pub fn label_peaks<T: Real>(report: &mut PeakReport<T>, params: &ModelParams<T>, tolerance: T) {
    let unit = params.detuning_unit();
    let half = params.omega12 * T::lit(0.5) / unit;
    let centre = -T::lit(2.0) * params.delta_1ph / unit;
    let targets = [
        (PeakLabel::LowerDoublet, -half),
        (PeakLabel::Intermediate, centre),
        (PeakLabel::UpperDoublet, half),
    ];
    for p in &mut report.peaks {
        p.label = targets
            .iter()
            .map(|&(l, t)| (l, (p.delta - t).abs()))
            .filter(|&(_, d)| d <= tolerance)
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(l, _)| l);
    }
}
