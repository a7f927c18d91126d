//! Lindblad generator, stationary states and a time-propagation oracle.
//!
//! The generator acts as `ρ̇ = -i[H, ρ] + Σ_k D[C_k]ρ` with
//! `D[A]B = A B A† - ½(A†A B + B A†A)`. Rates are absorbed into the collapse
//! operators.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::num::{i_unit, Real, C};
use crate::operator::{
    unvectorize_dim, vec_index, vec_labels, vectorize, DensityMatrix, Level, Operator, DIM,
};

/// Collapse operator with its rate already folded in.
#[derive(Clone, Debug, PartialEq)]
pub struct CollapseOperator<T: Real> {
    op: Operator<T>,
}

impl<T: Real> CollapseOperator<T> {
    pub fn new(op: Operator<T>) -> Result<Self> {
        if !op.is_finite() {
            return Err(Error::param("collapse operator", "non-finite entries"));
        }
        Ok(Self { op })
    }

    /// `sqrt(rate) * op`.
    pub fn with_rate(rate: T, op: Operator<T>) -> Result<Self> {
        if !(rate >= T::zero()) {
            return Err(Error::param("collapse rate", format!("{rate} is negative")));
        }
        Self::new(op.scale_re(rate.sqrt()))
    }

    #[inline]
    pub fn operator(&self) -> &Operator<T> {
        &self.op
    }
}

/// `A B A† - ½(A†A B + B A†A)`.
pub fn dissipator_apply<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Result<Operator<T>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let ad = a.dagger();
    let ada = ad.try_mul(a)?;
    let sandwich = a.try_mul(b)?.try_mul(&ad)?;
    let anti = ada.anticommutator(b)?;
    sandwich.try_sub(&anti.scale_re(T::lit(0.5)))
}

/// Right-hand side evaluated directly from operator products, without the
/// superoperator matrix.
pub fn lindblad_rhs<T: Real>(
    h: &Operator<T>,
    collapses: &[CollapseOperator<T>],
    rho: &Operator<T>,
) -> Result<Operator<T>> {
    let mut out = h.commutator(rho)?.scale(-i_unit::<T>());
    for c in collapses {
        out = out.try_add(&dissipator_apply(c.operator(), rho)?)?;
    }
    Ok(out)
}

/// Superoperator matrix acting on column-stacked density matrices.
#[derive(Clone, Debug)]
pub struct Liouvillian<T: Real> {
    matrix: CMatrix<T>,
    hamiltonian: Operator<T>,
    collapses: Vec<CollapseOperator<T>>,
}

impl<T: Real> Liouvillian<T> {
    /// Assembles the generator from Kronecker products:
    /// `-i(I⊗H - Hᵀ⊗I) + Σ_k [C̄_k⊗C_k - ½ I⊗C_k†C_k - ½ (C_k†C_k)ᵀ⊗I]`.
    pub fn build(hamiltonian: Operator<T>, collapses: Vec<CollapseOperator<T>>) -> Result<Self> {
        let n = hamiltonian.dim();
        let dev = hamiltonian.hermitian_deviation();
        if dev > T::lit(T::HERMITIAN_TOL) {
            return Err(Error::NotHermitian {
                deviation: dev.to_f64_lossy(),
            });
        }
        for c in &collapses {
            if c.operator().dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.operator().dim(),
                });
            }
        }
        let id = CMatrix::identity(n);
        let h = hamiltonian.matrix();
        let minus_i = -i_unit::<T>();
        let mut l = (&id.kron(h) - &h.transpose().kron(&id)).scale(minus_i);
        let half = C::new(T::lit(0.5), T::zero());
        for c in &collapses {
            let cm = c.operator().matrix();
            let cdc = &cm.adjoint() * cm;
            let jump = cm.conj().kron(cm);
            let left = id.kron(&cdc).scale(half);
            let right = cdc.transpose().kron(&id).scale(half);
            l = &(&(&l + &jump) - &left) - &right;
        }
        Ok(Self {
            matrix: l,
            hamiltonian,
            collapses,
        })
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    #[inline]
    pub fn hamiltonian(&self) -> &Operator<T> {
        &self.hamiltonian
    }

    #[inline]
    pub fn collapses(&self) -> &[CollapseOperator<T>] {
        &self.collapses
    }

    /// Hilbert-space dimension.
    #[inline]
    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// `L ρ` through the matrix.
    pub fn apply(&self, rho: &Operator<T>) -> Result<Operator<T>> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        unvectorize_dim(&self.matrix.matvec(&vectorize(rho)), self.dim())
    }

    pub fn norm_inf(&self) -> T {
        self.matrix.norm_inf()
    }

    /// `‖L vec(ρ)‖∞`.
    pub fn residual(&self, rho: &Operator<T>) -> T {
        self.matrix
            .matvec(&vectorize(rho))
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), T::max)
    }
}

pub fn build_liouvillian<T: Real>(
    h: &Operator<T>,
    collapses: &[CollapseOperator<T>],
) -> Result<Liouvillian<T>> {
    Liouvillian::build(h.clone(), collapses.to_vec())
}

/// Stationary state with its residual `‖L vec(ρ)‖∞`.
#[derive(Clone, Debug)]
pub struct SteadyState<T: Real> {
    pub rho: DensityMatrix<T>,
    pub residual: T,
}

/// Relative pivot below which the trace-constrained system counts as singular.
const SINGULAR_PIVOT_RATIO: f64 = 1e-12;
const REFINEMENT_STEPS: usize = 3;

/// Solves `L vec(ρ) = 0` with `Tr ρ = 1`.
///
/// The scalar equation for the `(c, c)` element is replaced by the trace
/// constraint. A few rounds of iterative refinement keep tiny populations
/// (down to ~1e-15 of the ground population) accurate in relative terms.
pub fn steady_state<T: Real>(l: &Liouvillian<T>) -> Result<SteadyState<T>> {
    if l.dim() != DIM {
        return Err(Error::DimensionMismatch {
            expected: DIM,
            found: l.dim(),
        });
    }
    let n2 = DIM * DIM;
    let replaced = vec_index(Level::C, Level::C);
    let mut m = l.matrix().clone();
    for (k, z) in m.row_mut(replaced).iter_mut().enumerate() {
        *z = if k % (DIM + 1) == 0 { C::one() } else { C::zero() };
    }
    let mut rhs = vec![C::zero(); n2];
    rhs[replaced] = C::one();

    let lu = m.lu()?;
    let ratio = lu.pivot_ratio();
    if !(ratio > T::lit(SINGULAR_PIVOT_RATIO)) {
        return Err(Error::NonUniqueSteadyState {
            pivot_ratio: ratio.to_f64_lossy(),
        });
    }
    let mut x = lu.solve(&rhs);
    for _ in 0..REFINEMENT_STEPS {
        let mx = m.matvec(&x);
        let r: Vec<C<T>> = rhs.iter().zip(&mx).map(|(&b, &y)| b - y).collect();
        let dx = lu.solve(&r);
        for (xi, di) in x.iter_mut().zip(dx) {
            *xi = *xi + di;
        }
    }
    let rho = DensityMatrix::normalized(unvectorize_dim(&x, DIM)?)?;
    let residual = l.residual(rho.operator());
    let bound = T::lit(T::RESIDUAL_TOL) * T::one().max(l.norm_inf());
    if residual > bound {
        return Err(Error::ResidualTooLarge {
            residual: residual.to_f64_lossy(),
            bound: bound.to_f64_lossy(),
        });
    }
    Ok(SteadyState { rho, residual })
}

/// Fixed-step classical RK4 integration of `ρ̇ = L ρ` from `t = 0` to
/// `t_final`. The step is shrunk so an integer number of steps lands exactly
/// on `t_final`.
pub fn time_evolve<T: Real>(
    l: &Liouvillian<T>,
    rho0: &DensityMatrix<T>,
    t_final: T,
    dt: T,
) -> Result<DensityMatrix<T>> {
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(Error::param("dt", format!("{dt} must be positive")));
    }
    if !(t_final >= T::zero()) || !t_final.is_finite() {
        return Err(Error::param("t_final", format!("{t_final} must be non-negative")));
    }
    let steps = (t_final / dt).ceil().to_usize().unwrap_or(0);
    let mut v = vectorize(rho0.operator());
    if steps > 0 {
        let h = t_final / T::lit(steps as f64);
        let m = l.matrix();
        let half = C::new(h * T::lit(0.5), T::zero());
        let full = C::new(h, T::zero());
        let sixth = C::new(h / T::lit(6.0), T::zero());
        let two = C::new(T::lit(2.0), T::zero());
        let axpy = |x: &[C<T>], a: C<T>, y: &[C<T>]| -> Vec<C<T>> {
            x.iter().zip(y).map(|(&xi, &yi)| xi + a * yi).collect()
        };
        for step in 0..steps {
            let k1 = m.matvec(&v);
            let k2 = m.matvec(&axpy(&v, half, &k1));
            let k3 = m.matvec(&axpy(&v, half, &k2));
            let k4 = m.matvec(&axpy(&v, full, &k3));
            for i in 0..v.len() {
                v[i] = v[i] + sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
            }
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::IntegrationFailure {
                    time: (h * T::lit((step + 1) as f64)).to_f64_lossy(),
                    reason: "non-finite density-matrix entry".into(),
                });
            }
        }
    }
    let out = unvectorize_dim(&v, DIM)?;
    let drift = (out.trace() - rho0.operator().trace()).norm();
    if drift > T::lit(T::TRACE_DRIFT_TOL) {
        return Err(Error::IntegrationFailure {
            time: t_final.to_f64_lossy(),
            reason: format!("trace drifted by {drift:e}"),
        });
    }
    DensityMatrix::new(out)
}

/// Element label `(row, column)` of a density matrix.
pub type Element = (Level, Level);

/// Per-element equations of motion read off the Liouvillian: for each
/// `ρ̇_ij`, the nonzero coefficient of every `ρ_kl`.
#[derive(Clone, Debug, PartialEq)]
pub struct EomTable<T: Real> {
    rows: BTreeMap<Element, BTreeMap<Element, C<T>>>,
}

impl<T: Real> EomTable<T> {
    pub fn row(&self, el: Element) -> &BTreeMap<Element, C<T>> {
        &self.rows[&el]
    }

    /// Coefficient of `ρ_col` in `ρ̇_row` (zero when absent).
    pub fn coefficient(&self, row: Element, col: Element) -> C<T> {
        self.rows[&row].get(&col).copied().unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, &BTreeMap<Element, C<T>>)> {
        self.rows.iter()
    }
}

pub fn eom_rows<T: Real>(l: &Liouvillian<T>) -> EomTable<T> {
    let m = l.matrix();
    let mut rows = BTreeMap::new();
    for row in vec_labels() {
        let r = vec_index(row.0, row.1);
        let coeffs = vec_labels()
            .filter_map(|col| {
                let z = m[(r, vec_index(col.0, col.1))];
                (!z.is_zero()).then_some((col, z))
            })
            .collect();
        rows.insert(row, coeffs);
    }
    EomTable { rows }
}
