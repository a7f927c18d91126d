//! Five-level molecule: two-photon-resonant upper doublet `a1`, `a2`,
//! intermediate levels `b` (visible decay) and `d` (ultraviolet decay), and
//! the ground level `c`.
//!
//! Frequencies and rates share one arbitrary unit. Rabi frequencies are real
//! and nonnegative.

use crate::error::{Error, Result};
use crate::lindblad::{build_liouvillian, steady_state, CollapseOperator, Liouvillian};
use crate::num::{re, Real};
use crate::operator::{DensityMatrix, Level, Operator, DIM};

/// Physical inputs of the model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams<T: Real> {
    /// One-photon Rabi frequency on `b ↔ a1, a2`.
    pub omega_ab: T,
    /// One-photon Rabi frequency on `c ↔ b`.
    pub omega_bc: T,
    /// Effective two-photon Rabi frequency on `c ↔ a1, a2`.
    pub q: T,
    /// Upper-doublet splitting.
    pub omega12: T,
    /// Two-photon detuning from the doublet centre.
    pub delta_2ph: T,
    /// Offset of `b` from the midpoint between `c` and the doublet centre.
    pub delta_1ph: T,
    /// Upper-doublet decay rate into `d`.
    pub gamma_u: T,
    /// Upper-doublet decay rate into `b`.
    pub gamma_v: T,
    pub gamma_b: T,
    pub gamma_d: T,
    /// Dipole alignment of the two `a_i → d` transitions, in `[-1, 1]`.
    pub p_u: T,
    /// Dipole alignment of the two `a_i → b` transitions, in `[-1, 1]`.
    pub p_v: T,
}

impl<T: Real> Default for ModelParams<T> {
    /// Weak two-photon driving: `Q = 1e-4`, `ω12 = 6`, `γu = γv = 0.5`,
    /// `γb = γd = 1`, antiparallel UV dipoles and parallel visible dipoles.
    fn default() -> Self {
        Self {
            omega_ab: T::zero(),
            omega_bc: T::zero(),
            q: T::lit(1e-4),
            omega12: T::lit(6.0),
            delta_2ph: T::zero(),
            delta_1ph: T::zero(),
            gamma_u: T::lit(0.5),
            gamma_v: T::lit(0.5),
            gamma_b: T::one(),
            gamma_d: T::one(),
            p_u: -T::one(),
            p_v: T::one(),
        }
    }
}

impl<T: Real> ModelParams<T> {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega_ab", self.omega_ab),
            ("omega_bc", self.omega_bc),
            ("q", self.q),
            ("omega12", self.omega12),
            ("delta_2ph", self.delta_2ph),
            ("delta_1ph", self.delta_1ph),
            ("gamma_u", self.gamma_u),
            ("gamma_v", self.gamma_v),
            ("gamma_b", self.gamma_b),
            ("gamma_d", self.gamma_d),
            ("p_u", self.p_u),
            ("p_v", self.p_v),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::param(name, format!("{v} is not finite")));
            }
        }
        for (name, v) in [
            ("omega_ab", self.omega_ab),
            ("omega_bc", self.omega_bc),
            ("q", self.q),
        ] {
            if v < T::zero() {
                return Err(Error::param(name, format!("{v} must be nonnegative")));
            }
        }
        for (name, v) in [
            ("omega12", self.omega12),
            ("gamma_u", self.gamma_u),
            ("gamma_v", self.gamma_v),
            ("gamma_b", self.gamma_b),
            ("gamma_d", self.gamma_d),
        ] {
            if v <= T::zero() {
                return Err(Error::param(name, format!("{v} must be positive")));
            }
        }
        for (name, v) in [("p_u", self.p_u), ("p_v", self.p_v)] {
            if v.abs() > T::one() {
                return Err(Error::param(name, format!("{v} lies outside [-1, 1]")));
            }
        }
        Ok(())
    }

    /// Copy with a different two-photon detuning.
    pub fn with_delta(mut self, delta_2ph: T) -> Self {
        self.delta_2ph = delta_2ph;
        self
    }

    /// Unit in which sweep axes are reported.
    pub fn detuning_unit(&self) -> T {
        self.gamma_u + self.gamma_v
    }

    /// Largest frequency or rate in the parameter set.
    pub fn max_frequency(&self) -> T {
        [
            self.omega_ab,
            self.omega_bc,
            self.q,
            self.omega12,
            self.delta_2ph,
            self.delta_1ph,
            self.gamma_u,
            self.gamma_v,
            self.gamma_b,
            self.gamma_d,
        ]
        .into_iter()
        .map(T::abs)
        .fold(T::zero(), T::max)
    }

    /// RK4 step small against every time scale: `0.01 / max_frequency`.
    pub fn default_time_step(&self) -> T {
        T::lit(0.01) / self.max_frequency()
    }

    /// Common upper-level rate when `γu = γv`.
    pub fn gamma_a(&self) -> Option<T> {
        (self.gamma_u == self.gamma_v).then_some(self.gamma_u)
    }
}

/// Interaction-picture Hamiltonian with the rotating-frame energy of `d`
/// set to zero.
pub fn build_hamiltonian<T: Real>(params: &ModelParams<T>) -> Result<Operator<T>> {
    build_hamiltonian_with_d_energy(params, T::zero())
}

/// As [`build_hamiltonian`] with an arbitrary diagonal entry for `d`.
/// `d` couples only dissipatively, so the stationary state does not depend
/// on `energy_d`.
pub fn build_hamiltonian_with_d_energy<T: Real>(
    params: &ModelParams<T>,
    energy_d: T,
) -> Result<Operator<T>> {
    params.validate()?;
    let half = T::lit(0.5);
    let p = params;
    let mut h = Operator::diagonal(&[
        p.omega12 * half - p.delta_2ph,
        -p.omega12 * half - p.delta_2ph,
        -p.delta_2ph * half - p.delta_1ph,
        T::zero(),
        energy_d,
    ]);
    let mut couple = |i: Level, j: Level, v: T| {
        h.set(i.index(), j.index(), re(v));
        h.set(j.index(), i.index(), re(v));
    };
    for a in [Level::A1, Level::A2] {
        couple(a, Level::B, p.omega_ab);
        couple(a, Level::C, p.q);
    }
    couple(Level::B, Level::C, p.omega_bc);
    Ok(h)
}

/// Decay channels, with the doublet emitting through its symmetric and
/// antisymmetric combinations at rates `γ(1 ± p)`. Channels of zero rate are
/// omitted.
pub fn build_collapse_ops<T: Real>(params: &ModelParams<T>) -> Result<Vec<CollapseOperator<T>>> {
    params.validate()?;
    let inv_sqrt2 = T::FRAC_1_SQRT_2();
    let combo = |target: Level, sign: T| {
        (&Operator::ket_bra(target, Level::A1)
            + &Operator::ket_bra(target, Level::A2).scale_re(sign))
            .scale_re(inv_sqrt2)
    };
    let one = T::one();
    let channels = [
        (params.gamma_v * (one + params.p_v), combo(Level::B, one)),
        (params.gamma_v * (one - params.p_v), combo(Level::B, -one)),
        (params.gamma_u * (one + params.p_u), combo(Level::D, one)),
        (params.gamma_u * (one - params.p_u), combo(Level::D, -one)),
        (params.gamma_b, Operator::ket_bra(Level::C, Level::B)),
        (params.gamma_d, Operator::ket_bra(Level::C, Level::D)),
    ];
    channels
        .into_iter()
        .filter(|(rate, _)| !rate.is_zero())
        .map(|(rate, op)| CollapseOperator::with_rate(rate, op))
        .collect()
}

pub fn build_model_liouvillian<T: Real>(params: &ModelParams<T>) -> Result<Liouvillian<T>> {
    build_liouvillian(&build_hamiltonian(params)?, &build_collapse_ops(params)?)
}

/// `γ(ρ11 + ρ22 + 2p Re ρ12)` from the individual elements. Values within
/// `1e-12` below zero are clipped to zero.
pub fn intensity_from_elements<T: Real>(
    rho11: T,
    rho22: T,
    re_rho12: T,
    gamma: T,
    p: T,
) -> Result<T> {
    if !(p.abs() <= T::one()) {
        return Err(Error::param("p", format!("{p} lies outside [-1, 1]")));
    }
    if !(gamma >= T::zero()) {
        return Err(Error::param("gamma", format!("{gamma} must be nonnegative")));
    }
    let two = T::lit(2.0);
    let i = gamma * (rho11 + rho22 + two * p * re_rho12);
    if i < T::zero() && i >= -T::lit(1e-12) {
        Ok(T::zero())
    } else {
        Ok(i)
    }
}

/// Emitted intensity on a doublet transition in units of the emission rate.
pub fn intensity<T: Real>(rho: &DensityMatrix<T>, gamma: T, p: T) -> Result<T> {
    intensity_from_elements(
        rho.population(Level::A1),
        rho.population(Level::A2),
        rho.elem(Level::A1, Level::A2).re,
        gamma,
        p,
    )
}

/// Intensities on the UV transition, the visible transition and a
/// hypothetical UV transition with orthogonal dipoles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntensityTriple<T: Real> {
    pub i_u: T,
    pub i_v: T,
    pub i_p0: T,
}

impl<T: Real> IntensityTriple<T> {
    pub fn from_elements(params: &ModelParams<T>, rho11: T, rho22: T, re_rho12: T) -> Result<Self> {
        let f = |g, p| intensity_from_elements(rho11, rho22, re_rho12, g, p);
        Ok(Self {
            i_u: f(params.gamma_u, params.p_u)?,
            i_v: f(params.gamma_v, params.p_v)?,
            i_p0: f(params.gamma_u, T::zero())?,
        })
    }

    pub fn from_state(params: &ModelParams<T>, rho: &DensityMatrix<T>) -> Result<Self> {
        Self::from_elements(
            params,
            rho.population(Level::A1),
            rho.population(Level::A2),
            rho.elem(Level::A1, Level::A2).re,
        )
    }
}

/// Stationary state and its intensities.
pub fn solve_point<T: Real>(
    params: &ModelParams<T>,
) -> Result<(DensityMatrix<T>, IntensityTriple<T>)> {
    let l = build_model_liouvillian(params)?;
    let ss = steady_state(&l)?;
    let triple = IntensityTriple::from_state(params, &ss.rho)?;
    Ok((ss.rho, triple))
}

/// `Σ_k C_k† C_k`: the total decay-rate operator.
pub fn total_decay_operator<T: Real>(collapses: &[CollapseOperator<T>]) -> Operator<T> {
    collapses.iter().fold(Operator::zeros(DIM), |acc, c| {
        let op = c.operator();
        &acc + &(&op.dagger() * op)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::C as Cx;
    use crate::operator::Level::{A1, A2, B, D};
    const LC: Level = Level::C;

    type P = ModelParams<f64>;

    fn undriven() -> P {
        P {
            q: 0.0,
            ..P::default()
        }
    }

    #[test]
    fn undriven_hamiltonian_is_diagonal_splitting() {
        let h = build_hamiltonian(&undriven()).unwrap();
        assert_eq!(h, Operator::diagonal(&[3.0, -3.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn hamiltonian_couplings_sit_where_expected() {
        let p = P {
            omega_ab: 0.2,
            omega_bc: 0.3,
            q: 0.4,
            delta_2ph: 1.0,
            delta_1ph: 0.25,
            ..P::default()
        };
        let h = build_hamiltonian(&p).unwrap();
        assert_eq!(h.elem(A1, LC), Cx::new(0.4, 0.0));
        assert_eq!(h.elem(A2, LC), Cx::new(0.4, 0.0));
        assert_eq!(h.elem(B, LC), Cx::new(0.3, 0.0));
        assert_eq!(h.elem(A1, B), Cx::new(0.2, 0.0));
        assert_eq!(h.elem(B, B), Cx::new(-0.75, 0.0));
        assert_eq!(h.elem(A1, A1), Cx::new(2.0, 0.0));
        assert_eq!(h.elem(A2, A2), Cx::new(-4.0, 0.0));
        assert_eq!(h.elem(D, D), Cx::new(0.0, 0.0));
        assert_eq!(h.hermitian_deviation(), 0.0);
    }

    #[test]
    fn validation_rejects_bad_inputs() {
        let bad = [
            P { p_u: 1.5, ..P::default() },
            P { gamma_b: 0.0, ..P::default() },
            P { omega12: -1.0, ..P::default() },
            P { q: -1e-3, ..P::default() },
            P { delta_2ph: f64::NAN, ..P::default() },
        ];
        for p in bad {
            assert!(matches!(
                p.validate(),
                Err(Error::InvalidParameter { .. })
            ));
        }
        assert!(P::default().validate().is_ok());
    }

    #[test]
    fn parallel_visible_dipoles_drop_the_antisymmetric_channel() {
        let ops = build_collapse_ops(&P::default()).unwrap();
        // p_v = 1 and p_u = -1 each remove one channel.
        assert_eq!(ops.len(), 4);
        let s = ops[0].operator();
        let r = (2.0 * 0.5f64).sqrt() / 2f64.sqrt();
        assert!((s.elem(B, A1).re - r).abs() < 1e-15);
        assert!((s.elem(B, A2).re - r).abs() < 1e-15);
    }

    #[test]
    fn total_upper_decay_rate_is_p_independent_on_the_diagonal() {
        for (pu, pv) in [(-1.0, 1.0), (0.0, 0.0), (0.3, -0.7), (1.0, 1.0)] {
            let p = P { p_u: pu, p_v: pv, ..P::default() };
            let g = total_decay_operator(&build_collapse_ops(&p).unwrap());
            for a in [A1, A2] {
                assert!((g.elem(a, a).re - 1.0).abs() < 1e-15);
            }
            let off = 0.5 * pu + 0.5 * pv;
            assert!((g.elem(A1, A2).re - off).abs() < 1e-15);
        }
    }

    #[test]
    fn orthogonal_dipoles_give_independent_decays() {
        let p = P { p_u: 0.0, p_v: 0.0, gamma_u: 0.7, gamma_v: 0.3, ..P::default() };
        let ops = build_collapse_ops(&p).unwrap();
        let uncorrelated = [
            CollapseOperator::with_rate(0.3, Operator::ket_bra(B, A1)).unwrap(),
            CollapseOperator::with_rate(0.3, Operator::ket_bra(B, A2)).unwrap(),
            CollapseOperator::with_rate(0.7, Operator::ket_bra(D, A1)).unwrap(),
            CollapseOperator::with_rate(0.7, Operator::ket_bra(D, A2)).unwrap(),
        ];
        let rho = DensityMatrix::<f64>::maximally_mixed();
        let mut off = Operator::from_fn(5, |i, j| Cx::new((i + 2 * j) as f64 * 0.01, (i as f64 - j as f64) * 0.02));
        off = off.hermitian_part();
        for state in [rho.operator().clone(), off] {
            let sum = |ops: &[CollapseOperator<f64>]| {
                ops.iter().fold(Operator::zeros(5), |acc, c| {
                    &acc + &crate::lindblad::dissipator_apply(c.operator(), &state).unwrap()
                })
            };
            let lhs = sum(&ops[..4]);
            let rhs = sum(&uncorrelated);
            assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-15);
        }
    }

    #[test]
    fn intensity_examples() {
        assert_eq!(intensity_from_elements(0.1, 0.1, 0.1, 1.0, -1.0).unwrap(), 0.0);
        assert!((intensity_from_elements(0.1f64, 0.2, 0.05, 2.0, 0.0).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(intensity_from_elements(0.1, 0.1, 0.1 + 1e-14, 1.0, -1.0).unwrap(), 0.0);
        assert!(matches!(
            intensity_from_elements(0.1, 0.1, 0.0, 1.0, 1.01),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn undriven_point_is_ground_state_and_dark() {
        let (rho, i) = solve_point(&undriven()).unwrap();
        assert!((rho.population(LC) - 1.0).abs() < 1e-14);
        assert_eq!(i, IntensityTriple { i_u: 0.0, i_v: 0.0, i_p0: 0.0 });
    }

    #[test]
    fn default_time_step_uses_largest_scale() {
        assert!((P::default().default_time_step() - 0.01 / 6.0).abs() < 1e-18);
    }
}
