//! Named parameter sets for the standard sweeps.

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::num::Real;

use super::SweepConfig;

pub const PRESET_NAMES: [&str; 6] = ["fig2", "fig4", "fig5", "fig_delta", "fig_alpha", "fig_uv"];

/// Base set: `ω12 = 6`, `γu = γv = 0.5`, `pu = -1`, `pv = 1`, `γd = γb`.
fn base<T: Real>(omega: f64, q: f64, gamma_b: f64) -> ModelParams<T> {
    ModelParams {
        omega_ab: T::lit(omega),
        omega_bc: T::lit(omega),
        q: T::lit(q),
        gamma_b: T::lit(gamma_b),
        gamma_d: T::lit(gamma_b),
        ..ModelParams::default()
    }
}

/// Sweep configurations for a named preset. Most presets expand to a single
/// sweep; `fig_alpha` expands to one sweep per `γb / γu ∈ {2, 0.3, 0.02}`.
pub fn preset<T: Real>(name: &str) -> Result<Vec<SweepConfig<T>>> {
    let one = |p: ModelParams<T>| Ok(vec![SweepConfig::new(name, p)]);
    match name {
        "fig2" => one(base(0.0, 1e-4, 1.0)),
        "fig4" => one(base(0.01, 0.0, 1.0)),
        "fig5" => one(base(1.0, 0.0, 0.15)),
        "fig_delta" => one(ModelParams { delta_1ph: T::lit(0.3), ..base(1.0, 0.0, 0.15) }),
        "fig_uv" => one(ModelParams {
            gamma_u: T::lit(0.7),
            gamma_v: T::lit(0.3),
            ..base(1.0, 0.0, 0.15)
        }),
        "fig_alpha" => Ok([("2", 1.0), ("0.3", 0.15), ("0.02", 0.01)]
            .into_iter()
            .map(|(alpha, gamma_b)| SweepConfig::new(format!("fig_alpha-{alpha}"), base(1.0, 0.0, gamma_b)))
            .collect()),
        _ => Err(Error::UnknownPreset {
            name: name.to_string(),
            available: PRESET_NAMES.join(", "),
        }),
    }
}
