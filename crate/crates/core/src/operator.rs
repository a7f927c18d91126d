//! Operators on the five-level Hilbert space.
//!
//! Basis ordering is fixed crate-wide: `a1, a2, b, c, d` map to indices
//! `0..5` (see [`Level`]).
//!
//! Vectorization stacks columns: element `(i, j)` of an `n×n` operator lands
//! at position `i + n*j`. With this convention `vec(A X B) = (Bᵀ ⊗ A) vec(X)`,
//! which is what the Liouvillian builder relies on.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::num::{Real, C};

/// Hilbert-space dimension of the molecular model.
pub const DIM: usize = 5;

/// Molecular level, in fixed basis order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    A1,
    A2,
    B,
    C,
    D,
}

impl Level {
    pub const ALL: [Level; DIM] = [Level::A1, Level::A2, Level::B, Level::C, Level::D];

    #[inline]
    pub const fn index(self) -> usize {
        match self {
            Level::A1 => 0,
            Level::A2 => 1,
            Level::B => 2,
            Level::C => 3,
            Level::D => 4,
        }
    }

    pub const fn from_index(i: usize) -> Option<Level> {
        match i {
            0 => Some(Level::A1),
            1 => Some(Level::A2),
            2 => Some(Level::B),
            3 => Some(Level::C),
            4 => Some(Level::D),
            _ => None,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Level::A1 => "a1",
            Level::A2 => "a2",
            Level::B => "b",
            Level::C => "c",
            Level::D => "d",
        };
        f.write_str(s)
    }
}

/// Square complex operator.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<T: Real> {
    m: CMatrix<T>,
}

impl<T: Real> Operator<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            m: CMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: CMatrix::identity(dim),
        }
    }

    pub fn from_matrix(m: CMatrix<T>) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: m.rows(),
                found: m.cols(),
            });
        }
        Ok(Self { m })
    }

    /// Builds an operator from `dim²` row-major entries.
    pub fn from_row_major(dim: usize, entries: Vec<C<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        Ok(Self {
            m: CMatrix::from_row_major(dim, dim, entries)?,
        })
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C<T>) -> Self {
        Self {
            m: CMatrix::from_fn(dim, dim, f),
        }
    }

    /// Real diagonal operator.
    pub fn diagonal(diag: &[T]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                C::new(diag[i], T::zero())
            } else {
                C::zero()
            }
        })
    }

    /// `|i⟩⟨j|` on the molecular space.
    pub fn ket_bra(i: Level, j: Level) -> Self {
        let mut op = Self::zeros(DIM);
        op.m[(i.index(), j.index())] = C::one();
        op
    }

    /// `|i⟩⟨i|` on the molecular space.
    pub fn projector(i: Level) -> Self {
        Self::ket_bra(i, i)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.m[(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C<T>) {
        self.m[(i, j)] = v;
    }

    /// Entry `⟨i|A|j⟩`.
    #[inline]
    pub fn elem(&self, i: Level, j: Level) -> C<T> {
        self.m[(i.index(), j.index())]
    }

    pub fn dagger(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn trace(&self) -> C<T> {
        self.m.trace()
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self { m: self.m.scale(s) }
    }

    pub fn scale_re(&self, s: T) -> Self {
        self.scale(C::new(s, T::zero()))
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        Ok(Self {
            m: self.m.try_add(&rhs.m)?,
        })
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        Ok(Self {
            m: self.m.try_sub(&rhs.m)?,
        })
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        Ok(Self {
            m: self.m.try_mul(&rhs.m)?,
        })
    }

    /// `AB - BA`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.try_mul(rhs)?.try_sub(&rhs.try_mul(self)?)
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, rhs: &Self) -> Result<Self> {
        self.try_mul(rhs)?.try_add(&rhs.try_mul(self)?)
    }

    pub fn hermitian_deviation(&self) -> T {
        self.m.hermitian_deviation()
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let half = C::new(T::lit(0.5), T::zero());
        Self {
            m: (&self.m + &self.m.adjoint()).scale(half),
        }
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues_hermitian(&self) -> Vec<T> {
        self.hermitian_part()
            .m
            .hermitian_eigenvalues()
            .expect("operators are square")
    }

    pub fn max_abs(&self) -> T {
        self.m.max_abs()
    }

    /// Largest elementwise `|a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        Ok(self.try_sub(other)?.max_abs())
    }

    pub fn is_finite(&self) -> bool {
        self.m.is_finite()
    }
}

impl<T: Real> std::ops::Add for &Operator<T> {
    type Output = Operator<T>;
    fn add(self, rhs: Self) -> Operator<T> {
        Operator {
            m: &self.m + &rhs.m,
        }
    }
}

impl<T: Real> std::ops::Sub for &Operator<T> {
    type Output = Operator<T>;
    fn sub(self, rhs: Self) -> Operator<T> {
        Operator {
            m: &self.m - &rhs.m,
        }
    }
}

impl<T: Real> std::ops::Mul for &Operator<T> {
    type Output = Operator<T>;
    fn mul(self, rhs: Self) -> Operator<T> {
        Operator {
            m: &self.m * &rhs.m,
        }
    }
}

pub fn dagger<T: Real>(a: &Operator<T>) -> Operator<T> {
    a.dagger()
}

pub fn ket_bra<T: Real>(i: Level, j: Level) -> Operator<T> {
    Operator::ket_bra(i, j)
}

pub fn trace<T: Real>(a: &Operator<T>) -> C<T> {
    a.trace()
}

/// Hermiticity at the crate's state tolerance.
pub fn hermitian_check<T: Real>(a: &Operator<T>) -> bool {
    a.is_hermitian(T::lit(T::HERMITIAN_TOL))
}

/// True when `a` is Hermitian and its smallest eigenvalue is at least `-tol`.
pub fn positivity_check<T: Real>(a: &Operator<T>, tol: T) -> bool {
    hermitian_check(a) && a.eigenvalues_hermitian()[0] >= -tol
}

/// Column-stacking vectorization: `v[i + n*j] = a[i][j]`.
pub fn vectorize<T: Real>(a: &Operator<T>) -> Vec<C<T>> {
    let n = a.dim();
    let mut v = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            v.push(a.get(i, j));
        }
    }
    v
}

/// Inverse of [`vectorize`] for the five-level space.
pub fn unvectorize<T: Real>(v: &[C<T>]) -> Result<Operator<T>> {
    unvectorize_dim(v, DIM)
}

pub fn unvectorize_dim<T: Real>(v: &[C<T>], dim: usize) -> Result<Operator<T>> {
    if v.len() != dim * dim || dim == 0 {
        return Err(Error::DimensionMismatch {
            expected: dim * dim,
            found: v.len(),
        });
    }
    Ok(Operator::from_fn(dim, |i, j| v[i + dim * j]))
}

/// Position of element `(i, j)` in the column-stacked vector.
#[inline]
pub const fn vec_index(i: Level, j: Level) -> usize {
    i.index() + DIM * j.index()
}

/// Element labels in vectorized order.
pub fn vec_labels() -> impl Iterator<Item = (Level, Level)> {
    Level::ALL
        .into_iter()
        .flat_map(|j| Level::ALL.into_iter().map(move |i| (i, j)))
}

/// Hermitian, unit-trace, positive semidefinite state of the molecule.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real> {
    op: Operator<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates every state invariant.
    pub fn new(op: Operator<T>) -> Result<Self> {
        if op.dim() != DIM {
            return Err(Error::DimensionMismatch {
                expected: DIM,
                found: op.dim(),
            });
        }
        if !op.is_finite() {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        let dev = op.hermitian_deviation();
        if dev > T::lit(T::HERMITIAN_TOL) {
            return Err(Error::NotHermitian {
                deviation: dev.to_f64_lossy(),
            });
        }
        let tr = op.trace();
        if (tr - C::one()).norm() > T::lit(T::TRACE_TOL) {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min_ev = op.eigenvalues_hermitian()[0];
        if min_ev < -T::lit(T::POSITIVITY_TOL) {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min_ev:e} is negative"
            )));
        }
        Ok(Self { op })
    }

    /// Hermitizes and renormalizes before validating.
    pub fn normalized(op: Operator<T>) -> Result<Self> {
        let h = op.hermitian_part();
        let tr = h.trace().re;
        if !(tr.abs() > T::zero()) {
            return Err(Error::InvalidState("zero trace".into()));
        }
        Self::new(h.scale_re(T::one() / tr))
    }

    pub fn pure(level: Level) -> Self {
        Self {
            op: Operator::projector(level),
        }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            op: Operator::identity(DIM).scale_re(T::one() / T::lit(DIM as f64)),
        }
    }

    #[inline]
    pub fn operator(&self) -> &Operator<T> {
        &self.op
    }

    pub fn into_operator(self) -> Operator<T> {
        self.op
    }

    #[inline]
    pub fn elem(&self, i: Level, j: Level) -> C<T> {
        self.op.elem(i, j)
    }

    #[inline]
    pub fn population(&self, l: Level) -> T {
        self.op.elem(l, l).re
    }

    /// `½ Σ |λ_k(ρ - σ)|`.
    pub fn trace_distance(&self, other: &Self) -> T {
        let diff = &self.op - &other.op;
        diff.eigenvalues_hermitian()
            .into_iter()
            .map(|x| x.abs())
            .sum::<T>()
            * T::lit(0.5)
    }

    pub fn min_eigenvalue(&self) -> T {
        self.op.eigenvalues_hermitian()[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Op = Operator<f64>;

    #[test]
    fn level_indices_are_bijective() {
        for (k, l) in Level::ALL.into_iter().enumerate() {
            assert_eq!(l.index(), k);
            assert_eq!(Level::from_index(k), Some(l));
        }
        assert_eq!(Level::from_index(5), None);
    }

    #[test]
    fn dagger_examples() {
        assert_eq!(dagger(&Op::identity(5)), Op::identity(5));
        assert_eq!(
            dagger(&Op::ket_bra(Level::C, Level::B)),
            Op::ket_bra(Level::B, Level::C)
        );
    }

    #[test]
    fn ket_bra_examples() {
        let bc = Op::ket_bra(Level::B, Level::C);
        assert_eq!(bc.get(2, 3), C::new(1.0, 0.0));
        assert_eq!(bc.max_abs(), 1.0);
        for l in Level::ALL {
            assert_eq!(trace(&Op::ket_bra(l, l)), C::new(1.0, 0.0));
        }
        let prod = &Op::ket_bra(Level::A1, Level::B) * &Op::ket_bra(Level::B, Level::C);
        assert_eq!(prod, Op::ket_bra(Level::A1, Level::C));
    }

    #[test]
    fn ket_bra_composition_over_all_index_combinations() {
        for i in Level::ALL {
            for j in Level::ALL {
                for k in Level::ALL {
                    for l in Level::ALL {
                        let lhs = &Op::ket_bra(i, j) * &Op::ket_bra(k, l);
                        let rhs = if j == k {
                            Op::ket_bra(i, l)
                        } else {
                            Op::zeros(DIM)
                        };
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn vectorize_examples() {
        let v = vectorize(&Op::identity(5));
        for (k, z) in v.iter().enumerate() {
            let on_diag = k % 6 == 0;
            assert_eq!(z.re, if on_diag { 1.0 } else { 0.0 });
        }
        let v = vectorize(&Op::ket_bra(Level::A1, Level::A2));
        assert_eq!(v.iter().filter(|z| z.norm() != 0.0).count(), 1);
        assert_eq!(v[vec_index(Level::A1, Level::A2)], C::new(1.0, 0.0));
    }

    #[test]
    fn unvectorize_rejects_wrong_length() {
        let v = vec![C::new(0.0, 0.0); 24];
        assert!(matches!(
            unvectorize::<f64>(&v),
            Err(Error::DimensionMismatch { expected: 25, found: 24 })
        ));
    }

    #[test]
    fn check_examples() {
        assert!(hermitian_check(&Op::identity(5)));
        let d = Op::diagonal(&[1.0, -0.1, 0.0, 0.0, 0.0]);
        assert!(!positivity_check(&d, 1e-9));
        assert!(positivity_check(&Op::diagonal(&[0.5, 0.5, 0.0, 0.0, 0.0]), 1e-9));
        assert_eq!(trace(&Op::ket_bra(Level::B, Level::B)), C::new(1.0, 0.0));
        assert!(!hermitian_check(&Op::ket_bra(Level::B, Level::C)));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(Op::diagonal(&[0.5, 0.5, 0.0, 0.0, 0.0])).is_ok());
        assert!(matches!(
            DensityMatrix::new(Op::diagonal(&[0.5, 0.4, 0.0, 0.0, 0.0])),
            Err(Error::InvalidState(_))
        ));
        assert!(matches!(
            DensityMatrix::new(Op::diagonal(&[1.1, -0.1, 0.0, 0.0, 0.0])),
            Err(Error::InvalidState(_))
        ));
        assert!(matches!(
            DensityMatrix::new(&Op::projector(Level::C) + &Op::ket_bra(Level::B, Level::C)),
            Err(Error::NotHermitian { .. })
        ));
        assert!(DensityMatrix::new(Op::identity(4).scale_re(0.25)).is_err());
    }

    #[test]
    fn trace_distance_of_orthogonal_pure_states_is_one() {
        let a = DensityMatrix::<f64>::pure(Level::A1);
        let b = DensityMatrix::<f64>::pure(Level::C);
        assert!((a.trace_distance(&b) - 1.0).abs() < 1e-14);
        assert_eq!(a.trace_distance(&a), 0.0);
    }

    #[test]
    fn works_in_single_precision() {
        let rho = DensityMatrix::<f32>::maximally_mixed();
        assert!((rho.population(Level::D) - 0.2).abs() < 1e-6);
        let v = vectorize(rho.operator());
        assert_eq!(&unvectorize(&v).unwrap(), rho.operator());
    }
}
