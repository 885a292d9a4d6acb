//! Quantum states and system descriptors: density operators, thermal states,
//! correlation operators, and the bipartite / semiclassically driven systems
//! the dynamics module evolves.

use std::fmt;
use std::sync::Arc;

use crate::error::{DensityViolation, Error, Result};
use crate::linalg::{herm_eig, kron, partial_trace_a, partial_trace_b, re, ComplexMatrix};
use crate::scalar::Real;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator<T> {
    mat: ComplexMatrix<T>,
}

impl<T: Real> DensityOperator<T> {
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim).scale_real(T::one() / T::lit(dim as f64)),
        }
    }

    /// `|ψ><ψ|` for a normalised vector.
    pub fn pure(psi: &[num_complex::Complex<T>]) -> Result<Self> {
        validate_density(ComplexMatrix::outer(psi, psi))
    }

    pub fn purity(&self) -> T {
        self.mat.trace_product(&self.mat).re
    }

    /// `ρ_A ⊗ ρ_B`.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            mat: kron(&self.mat, &other.mat),
        }
    }

    pub fn reduce_to_a(&self, da: usize, db: usize) -> Result<Self> {
        Ok(Self {
            mat: partial_trace_b(&self.mat, da, db)?.hermitian_part(),
        })
    }

    pub fn reduce_to_b(&self, da: usize, db: usize) -> Result<Self> {
        Ok(Self {
            mat: partial_trace_a(&self.mat, da, db)?.hermitian_part(),
        })
    }

    /// Wraps a matrix the caller has already established to be a valid state
    /// (e.g. the unitary image of one), only re-symmetrising it.
    pub(crate) fn assume_valid(mat: ComplexMatrix<T>) -> Self {
        Self {
            mat: mat.hermitian_part(),
        }
    }
}

/// Checks the density-operator invariants and names the first one violated.
pub fn validate_density<T: Real>(m: ComplexMatrix<T>) -> Result<DensityOperator<T>> {
    let tol = T::lit(T::STRUCTURE_TOL);
    let residual = m.hermiticity_residual();
    if residual > tol * m.frobenius_norm().max(T::one()) {
        return Err(Error::InvalidDensity {
            violation: DensityViolation::NonHermitian,
            detail: format!("anti-Hermitian residual {:.3e}", residual.as_f64()),
        });
    }
    let tr = m.trace().re;
    if (tr - T::one()).abs() > tol {
        return Err(Error::InvalidDensity {
            violation: DensityViolation::Trace,
            detail: format!("trace {}", tr),
        });
    }
    let m = m.hermitian_part();
    let eig = herm_eig(&m)?;
    if let Some(&low) = eig.eigenvalues.first() {
        if low < -tol {
            return Err(Error::InvalidDensity {
                violation: DensityViolation::NegativeEigenvalue,
                detail: format!("smallest eigenvalue {:.3e}", low.as_f64()),
            });
        }
    }
    Ok(DensityOperator { mat: m })
}

/// Gibbs state `e^{−βh}/Z`.
///
/// `beta = +∞` gives the uniform mixture over the ground eigenspace.
pub fn thermal_state<T: Real>(h: &ComplexMatrix<T>, beta: T) -> Result<DensityOperator<T>> {
    if beta.is_nan() || beta < T::zero() {
        return Err(Error::InvalidInput(format!("inverse temperature must be >= 0, got {beta}")));
    }
    let eig = herm_eig(h)?;
    let ground = eig.eigenvalues[0];
    let weights: Vec<T> = if beta.is_infinite() {
        let scale = eig.eigenvalues.iter().fold(T::one(), |a, &x| a.max(x.abs()));
        let tie = T::lit(1e-12) * scale;
        eig.eigenvalues
            .iter()
            .map(|&x| if x - ground <= tie { T::one() } else { T::zero() })
            .collect()
    } else {
        // shift by the ground energy so the largest weight is exactly 1
        eig.eigenvalues.iter().map(|&x| (-beta * (x - ground)).exp()).collect()
    };
    let z: T = weights.iter().copied().sum();
    let probs: Vec<T> = weights.into_iter().map(|w| w / z).collect();
    let v = &eig.eigenvectors;
    let n = h.dim();
    let mat = ComplexMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|k| v[(i, k)] * re(probs[k]) * v[(j, k)].conj())
            .fold(re(T::zero()), |a, b| a + b)
    });
    Ok(DensityOperator {
        mat: mat.hermitian_part(),
    })
}

/// Trace distance `½‖ρ − σ‖₁`.
pub fn trace_distance<T: Real>(a: &DensityOperator<T>, b: &DensityOperator<T>) -> Result<T> {
    b.mat.ensure_dim(a.dim())?;
    let diff = (&a.mat - &b.mat).hermitian_part();
    let eig = herm_eig(&diff)?;
    Ok(eig.eigenvalues.iter().map(|x| x.abs()).sum::<T>() * T::lit(0.5))
}

/// `C_AB = ρ − ρ_A ⊗ ρ_B`: Hermitian, traceless, with vanishing partial traces.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationOperator<T> {
    mat: ComplexMatrix<T>,
}

impl<T: Real> CorrelationOperator<T> {
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }
}

pub fn correlation_operator<T: Real>(
    rho: &DensityOperator<T>,
    da: usize,
    db: usize,
) -> Result<CorrelationOperator<T>> {
    let ra = rho.reduce_to_a(da, db)?;
    let rb = rho.reduce_to_b(da, db)?;
    Ok(CorrelationOperator {
        mat: &rho.mat - &kron(&ra.mat, &rb.mat),
    })
}

type OperatorFn<T> = Arc<dyn Fn(T) -> ComplexMatrix<T> + Send + Sync>;

/// A Hermitian operator that may depend on time, with an optional analytic derivative.
#[derive(Clone)]
pub struct TimeOperator<T> {
    dim: usize,
    kind: OperatorKind<T>,
}

#[derive(Clone)]
enum OperatorKind<T> {
    Constant(ComplexMatrix<T>),
    Varying {
        value: OperatorFn<T>,
        derivative: Option<OperatorFn<T>>,
    },
}

impl<T: fmt::Debug> fmt::Debug for TimeOperator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            OperatorKind::Constant(m) => f.debug_tuple("TimeOperator::Constant").field(m).finish(),
            OperatorKind::Varying { derivative, .. } => f
                .debug_struct("TimeOperator::Varying")
                .field("dim", &self.dim)
                .field("analytic_derivative", &derivative.is_some())
                .finish(),
        }
    }
}

impl<T: Real> TimeOperator<T> {
    pub fn constant(m: ComplexMatrix<T>) -> Self {
        Self {
            dim: m.dim(),
            kind: OperatorKind::Constant(m),
        }
    }

    pub fn varying(dim: usize, f: impl Fn(T) -> ComplexMatrix<T> + Send + Sync + 'static) -> Self {
        Self {
            dim,
            kind: OperatorKind::Varying {
                value: Arc::new(f),
                derivative: None,
            },
        }
    }

    /// Registers an analytic time derivative; without one, derivatives are taken
    /// by centered finite differences.
    pub fn with_derivative(
        self,
        df: impl Fn(T) -> ComplexMatrix<T> + Send + Sync + 'static,
    ) -> Self {
        match self.kind {
            OperatorKind::Constant(_) => self,
            OperatorKind::Varying { value, .. } => Self {
                dim: self.dim,
                kind: OperatorKind::Varying {
                    value,
                    derivative: Some(Arc::new(df)),
                },
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, OperatorKind::Constant(_))
    }

    pub fn has_analytic_derivative(&self) -> bool {
        match &self.kind {
            OperatorKind::Constant(_) => true,
            OperatorKind::Varying { derivative, .. } => derivative.is_some(),
        }
    }

    pub fn at(&self, t: T) -> ComplexMatrix<T> {
        match &self.kind {
            OperatorKind::Constant(m) => m.clone(),
            OperatorKind::Varying { value, .. } => value(t),
        }
    }

    /// Analytic derivative when registered, otherwise a centered difference.
    pub fn derivative_at(&self, t: T) -> ComplexMatrix<T> {
        match &self.kind {
            OperatorKind::Constant(m) => ComplexMatrix::zeros(m.dim()),
            OperatorKind::Varying {
                derivative: Some(df),
                ..
            } => df(t),
            OperatorKind::Varying { .. } => self.finite_difference(t),
        }
    }

    /// Centered difference with step `ε^{1/3}·max(1, |t|)`.
    pub fn finite_difference(&self, t: T) -> ComplexMatrix<T> {
        let h = T::epsilon().cbrt() * t.abs().max(T::one());
        let plus = self.at(t + h);
        let minus = self.at(t - h);
        (plus - minus).scale_real(T::one() / (h + h))
    }
}

/// Diagonal rotating-frame generator: `U_rot(t) = exp(i K t)`, `K = diag(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameGenerator<T> {
    pub frequencies: Vec<T>,
}

impl<T: Real> FrameGenerator<T> {
    pub fn new(frequencies: Vec<T>) -> Self {
        Self { frequencies }
    }

    pub fn matrix(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_diagonal(&self.frequencies)
    }

    pub fn dim(&self) -> usize {
        self.frequencies.len()
    }

    /// `exp(i K t)`.
    pub fn unitary(&self, t: T) -> ComplexMatrix<T> {
        let n = self.dim();
        ComplexMatrix::from_fn(n, |i, j| {
            if i == j {
                let phase = self.frequencies[i] * t;
                num_complex::Complex::new(phase.cos(), phase.sin())
            } else {
                re(T::zero())
            }
        })
    }

    fn check_against(&self, h: &ComplexMatrix<T>, which: &str) -> Result<()> {
        h.ensure_dim(self.dim())?;
        let k = self.matrix();
        let comm = &k.matmul(h) - &h.matmul(&k);
        let scale = k.frobenius_norm() * h.frobenius_norm();
        if comm.frobenius_norm() > T::lit(T::STRUCTURE_TOL) * scale.max(T::one()) {
            return Err(Error::InvalidInput(format!(
                "frame generator does not commute with {which}"
            )));
        }
        Ok(())
    }
}

fn check_hermitian_operator<T: Real>(h: &ComplexMatrix<T>, expected: usize) -> Result<()> {
    h.ensure_dim(expected)?;
    h.ensure_hermitian()
}

/// `H = H_A ⊗ 1 + 1 ⊗ H_B + H_AB(t)` on `C^{dA} ⊗ C^{dB}`, optionally in a
/// rotating frame generated by `K_A ⊗ 1 + 1 ⊗ K_B`.
///
/// When a frame is set, `h_ab` is the interaction already expressed in that
/// frame and the evolution generator becomes `H − K`. `H_A` and `H_B` remain the
/// lab-frame local Hamiltonians used for energy bookkeeping.
#[derive(Debug, Clone)]
pub struct BipartiteSystem<T> {
    da: usize,
    db: usize,
    h_a: ComplexMatrix<T>,
    h_b: ComplexMatrix<T>,
    h_ab: TimeOperator<T>,
    frame: Option<(FrameGenerator<T>, FrameGenerator<T>)>,
}

impl<T: Real> BipartiteSystem<T> {
    pub fn new(h_a: ComplexMatrix<T>, h_b: ComplexMatrix<T>, h_ab: TimeOperator<T>) -> Result<Self> {
        let (da, db) = (h_a.dim(), h_b.dim());
        check_hermitian_operator(&h_a, da)?;
        check_hermitian_operator(&h_b, db)?;
        if h_ab.dim() != da * db {
            return Err(Error::DimensionMismatch {
                expected: da * db,
                actual: h_ab.dim(),
            });
        }
        check_hermitian_operator(&h_ab.at(T::zero()), da * db)?;
        Ok(Self {
            da,
            db,
            h_a,
            h_b,
            h_ab,
            frame: None,
        })
    }

    pub fn with_frame(mut self, k_a: FrameGenerator<T>, k_b: FrameGenerator<T>) -> Result<Self> {
        k_a.check_against(&self.h_a, "H_A")?;
        k_b.check_against(&self.h_b, "H_B")?;
        self.frame = Some((k_a, k_b));
        Ok(self)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.da, self.db)
    }

    pub fn h_a(&self) -> &ComplexMatrix<T> {
        &self.h_a
    }

    pub fn h_b(&self) -> &ComplexMatrix<T> {
        &self.h_b
    }

    pub fn h_ab(&self) -> &TimeOperator<T> {
        &self.h_ab
    }

    pub fn frame(&self) -> Option<&(FrameGenerator<T>, FrameGenerator<T>)> {
        self.frame.as_ref()
    }

    /// `K_A` (zero when no frame is set).
    pub fn frame_a(&self) -> ComplexMatrix<T> {
        self.frame
            .as_ref()
            .map(|(k, _)| k.matrix())
            .unwrap_or_else(|| ComplexMatrix::zeros(self.da))
    }

    /// Local part `(H_A − K_A) ⊗ 1 + 1 ⊗ (H_B − K_B)`.
    pub fn local_generator(&self) -> ComplexMatrix<T> {
        let (ka, kb) = match &self.frame {
            Some((ka, kb)) => (ka.matrix(), kb.matrix()),
            None => (ComplexMatrix::zeros(self.da), ComplexMatrix::zeros(self.db)),
        };
        kron(&(&self.h_a - &ka), &ComplexMatrix::identity(self.db))
            + kron(&ComplexMatrix::identity(self.da), &(&self.h_b - &kb))
    }

    /// Evolution generator at time `t` (in the frame, when one is set).
    pub fn generator(&self, t: T) -> ComplexMatrix<T> {
        self.local_generator() + self.h_ab.at(t)
    }

    pub fn is_time_independent(&self) -> bool {
        self.h_ab.is_constant()
    }
}

/// Subsystem `A` driven by a classical field: `H = H_A + H_drive(t)`.
///
/// The drive plays the role of the effective Hamiltonian directly. With a frame
/// set, `drive` is expressed in that frame and the generator is `H_A − K + H_drive`.
#[derive(Debug, Clone)]
pub struct SemiclassicalSystem<T> {
    h_a: ComplexMatrix<T>,
    drive: TimeOperator<T>,
    frame: Option<FrameGenerator<T>>,
}

impl<T: Real> SemiclassicalSystem<T> {
    pub fn new(h_a: ComplexMatrix<T>, drive: TimeOperator<T>) -> Result<Self> {
        let da = h_a.dim();
        check_hermitian_operator(&h_a, da)?;
        check_hermitian_operator(&drive.at(T::zero()), da)?;
        Ok(Self {
            h_a,
            drive,
            frame: None,
        })
    }

    pub fn with_frame(mut self, k: FrameGenerator<T>) -> Result<Self> {
        k.check_against(&self.h_a, "H_A")?;
        self.frame = Some(k);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.h_a.dim()
    }

    pub fn h_a(&self) -> &ComplexMatrix<T> {
        &self.h_a
    }

    pub fn drive(&self) -> &TimeOperator<T> {
        &self.drive
    }

    pub fn frame(&self) -> Option<&FrameGenerator<T>> {
        self.frame.as_ref()
    }

    pub fn frame_a(&self) -> ComplexMatrix<T> {
        self.frame
            .as_ref()
            .map(FrameGenerator::matrix)
            .unwrap_or_else(|| ComplexMatrix::zeros(self.dim()))
    }

    pub fn generator(&self, t: T) -> ComplexMatrix<T> {
        &(&self.h_a - &self.frame_a()) + &self.drive.at(t)
    }

    pub fn is_time_independent(&self) -> bool {
        self.drive.is_constant()
    }
}
