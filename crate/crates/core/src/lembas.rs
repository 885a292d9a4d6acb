//! Local work/heat decomposition relative to a fixed local measurement basis.
//!
//! Given the effective Hamiltonian that a partner subsystem induces on `A`,
//! the part commuting with the measurement basis (`h_eff1`) joins `H_A` to
//! form the measured Hamiltonian `H' = H_A + h_eff1`. The remainder `h_eff2`
//! drives coherent, entropy-preserving changes of `⟨H'⟩` (work); the
//! incoherent generator `L_inc` carries the rest (heat).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{c, commutator, herm_eig, log_with_kernel, re, ComplexMatrix};
use crate::scalar::Real;
use crate::states::{CorrelationOperator, DensityOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisMode {
    /// Eigenprojectors of `H_A`, one per distinct eigenvalue.
    EnergyEigenbasis,
    /// Rank-one projectors onto user-supplied orthonormal vectors.
    Explicit,
}

/// Complete set of orthogonal projectors defining where local energy is measured.
#[derive(Debug, Clone)]
pub struct MeasurementBasis<T> {
    mode: BasisMode,
    projectors: Vec<ComplexMatrix<T>>,
}

impl<T: Real> MeasurementBasis<T> {
    /// Eigenprojectors of `h_a`; eigenvalues closer than `1e-10·max(1, ‖h_a‖_F)`
    /// share a projector.
    pub fn energy(h_a: &ComplexMatrix<T>) -> Result<Self> {
        let eig = herm_eig(h_a)?;
        let n = h_a.dim();
        let tie = T::lit(T::STRUCTURE_TOL) * h_a.frobenius_norm().max(T::one());
        let mut projectors: Vec<ComplexMatrix<T>> = Vec::new();
        let mut last: Option<T> = None;
        for k in 0..n {
            let lambda = eig.eigenvalues[k];
            let v = eig.eigenvectors.column(k);
            let outer = ComplexMatrix::outer(&v, &v);
            match last {
                Some(prev) if lambda - prev <= tie => {
                    let p = projectors.last_mut().expect("cluster started");
                    *p += &outer;
                }
                _ => projectors.push(outer),
            }
            last = Some(lambda);
        }
        Ok(Self {
            mode: BasisMode::EnergyEigenbasis,
            projectors,
        })
    }

    /// Orthonormal basis vectors supplied by the caller.
    pub fn explicit(vectors: &[Vec<Complex<T>>]) -> Result<Self> {
        let n = vectors.len();
        if n == 0 {
            return Err(Error::InvalidInput("explicit basis is empty".into()));
        }
        for (j, v) in vectors.iter().enumerate() {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: v.len(),
                });
            }
            for (k, w) in vectors.iter().enumerate().take(j + 1) {
                let ip = v
                    .iter()
                    .zip(w)
                    .map(|(a, b)| b.conj() * a)
                    .fold(re(T::zero()), |x, y| x + y);
                let target = if j == k { T::one() } else { T::zero() };
                if (ip - re(target)).norm() > T::lit(T::STRUCTURE_TOL) {
                    return Err(Error::InvalidInput(format!(
                        "basis vectors {k} and {j} are not orthonormal (overlap {:.3e})",
                        ip.norm().as_f64()
                    )));
                }
            }
        }
        Ok(Self {
            mode: BasisMode::Explicit,
            projectors: vectors.iter().map(|v| ComplexMatrix::outer(v, v)).collect(),
        })
    }

    pub fn mode(&self) -> BasisMode {
        self.mode
    }

    pub fn projectors(&self) -> &[ComplexMatrix<T>] {
        &self.projectors
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    /// Block-diagonal part `Σ_P P m P`.
    pub fn project(&self, m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let mut out = ComplexMatrix::zeros(m.dim());
        for p in &self.projectors {
            out += &p.matmul(m).matmul(p);
        }
        out
    }
}

/// Effective Hamiltonian split into measured and unmeasured parts.
#[derive(Debug, Clone)]
pub struct LembasSplit<T> {
    pub h_eff: ComplexMatrix<T>,
    /// Block-diagonal part of `h_eff` in the measurement basis.
    pub h_eff1: ComplexMatrix<T>,
    /// `h_eff − h_eff1`.
    pub h_eff2: ComplexMatrix<T>,
    /// Measured local Hamiltonian `H'`.
    pub h_prime: ComplexMatrix<T>,
    /// `H_A + h_eff − H'`: the off-block part of the coherent generator.
    /// Equal to `h_eff2` for the energy eigenbasis.
    pub coherent_remainder: ComplexMatrix<T>,
}

/// `tr_B[h_ab (1 ⊗ m_b)]` for an arbitrary partner operator `m_b`.
pub fn partner_contraction<T: Real>(
    h_ab: &ComplexMatrix<T>,
    m_b: &ComplexMatrix<T>,
    da: usize,
    db: usize,
) -> Result<ComplexMatrix<T>> {
    h_ab.ensure_dim(da * db)?;
    m_b.ensure_dim(db)?;
    Ok(ComplexMatrix::from_fn(da, |i, j| {
        let mut acc = re(T::zero());
        for k in 0..db {
            for l in 0..db {
                acc += h_ab[(i * db + k, j * db + l)] * m_b[(l, k)];
            }
        }
        acc
    }))
}

/// Mean-field Hamiltonian `tr_B[h_ab (1 ⊗ ρ_B)]` induced on `A`.
pub fn effective_hamiltonian<T: Real>(
    h_ab: &ComplexMatrix<T>,
    rho_b: &DensityOperator<T>,
    da: usize,
    db: usize,
) -> Result<ComplexMatrix<T>> {
    Ok(partner_contraction(h_ab, rho_b.matrix(), da, db)?.hermitian_part())
}

pub fn lembas_split<T: Real>(
    h_eff: &ComplexMatrix<T>,
    h_a: &ComplexMatrix<T>,
    basis: &MeasurementBasis<T>,
) -> Result<LembasSplit<T>> {
    h_a.ensure_dim(h_eff.dim())?;
    if basis.dim() != h_eff.dim() {
        return Err(Error::DimensionMismatch {
            expected: h_eff.dim(),
            actual: basis.dim(),
        });
    }
    h_eff.ensure_hermitian()?;
    let h_eff1 = basis.project(h_eff);
    let h_eff2 = h_eff - &h_eff1;
    let (h_prime, coherent_remainder) = match basis.mode() {
        BasisMode::EnergyEigenbasis => (h_a + &h_eff1, h_eff2.clone()),
        BasisMode::Explicit => {
            let full = h_a + h_eff;
            let measured = basis.project(&full);
            let rest = &full - &measured;
            (measured, rest)
        }
    };
    Ok(LembasSplit {
        h_eff: h_eff.clone(),
        h_eff1,
        h_eff2,
        h_prime,
        coherent_remainder,
    })
}

/// `−i tr_B[h_ab, C_AB]`: the part of the reduced dynamics sourced by correlations.
pub fn incoherent_generator_from_correlations<T: Real>(
    h_ab: &ComplexMatrix<T>,
    c_ab: &CorrelationOperator<T>,
    da: usize,
    db: usize,
) -> Result<ComplexMatrix<T>> {
    h_ab.ensure_dim(da * db)?;
    let comm = commutator(h_ab, c_ab.matrix())?;
    Ok(crate::linalg::partial_trace_b(&comm, da, db)?.scale(c(T::zero(), -T::one())))
}

/// `ρ̇_A + i[X, ρ_A]` where `X` is the coherent local generator `H_A (− K) + h_eff`.
pub fn incoherent_generator_from_derivative<T: Real>(
    drho_a: &ComplexMatrix<T>,
    coherent_generator: &ComplexMatrix<T>,
    rho_a: &DensityOperator<T>,
) -> Result<ComplexMatrix<T>> {
    let comm = commutator(coherent_generator, rho_a.matrix())?;
    Ok(drho_a + &comm.scale(c(T::zero(), T::one())))
}

/// Real part of a trace that must be real, rejecting a large imaginary residue.
fn real_trace<T: Real>(z: Complex<T>, scale: T, context: &'static str) -> Result<T> {
    if z.im.abs() > T::lit(T::RESIDUE_TOL) * scale.max(T::one()) {
        return Err(Error::NumericalConsistency {
            context,
            residual: z.im.as_f64(),
        });
    }
    Ok(z.re)
}

/// `tr(ḣ_eff1 ρ_A) − i tr([H', h_eff2] ρ_A)`.
pub fn work_rate<T: Real>(
    dh_eff1_dt: &ComplexMatrix<T>,
    h_prime: &ComplexMatrix<T>,
    h_eff2: &ComplexMatrix<T>,
    rho_a: &DensityOperator<T>,
) -> Result<T> {
    let rho = rho_a.matrix();
    let comm = commutator(h_prime, h_eff2)?;
    let z = dh_eff1_dt.trace_product(rho) + comm.trace_product(rho) * c(T::zero(), -T::one());
    let scale = (dh_eff1_dt.frobenius_norm() + comm.frobenius_norm()) * rho.frobenius_norm();
    real_trace(z, scale, "work rate")
}

/// `tr(H' L_inc)`.
pub fn heat_rate<T: Real>(h_prime: &ComplexMatrix<T>, l_inc: &ComplexMatrix<T>) -> Result<T> {
    l_inc.ensure_dim(h_prime.dim())?;
    let scale = h_prime.frobenius_norm() * l_inc.frobenius_norm();
    real_trace(h_prime.trace_product(l_inc), scale, "heat rate")
}

/// `U_A = tr(H' ρ_A)`.
pub fn internal_energy<T: Real>(h_prime: &ComplexMatrix<T>, rho_a: &DensityOperator<T>) -> Result<T> {
    rho_a.matrix().ensure_dim(h_prime.dim())?;
    let scale = h_prime.frobenius_norm();
    real_trace(h_prime.trace_product(rho_a.matrix()), scale, "internal energy")
}

/// `dU_A/dt` as the sum of the coherent (work) and incoherent (heat) terms.
pub fn internal_energy_rate<T: Real>(
    dh_eff1_dt: &ComplexMatrix<T>,
    h_prime: &ComplexMatrix<T>,
    h_eff2: &ComplexMatrix<T>,
    l_inc: &ComplexMatrix<T>,
    rho_a: &DensityOperator<T>,
) -> Result<T> {
    Ok(work_rate(dh_eff1_dt, h_prime, h_eff2, rho_a)? + heat_rate(h_prime, l_inc)?)
}

/// `Ṡ_A = −tr(L_inc log ρ_A)` in nats per unit time.
///
/// Fails with [`Error::RateUndefined`] when `L_inc` has weight on the kernel
/// of `ρ_A`, where the entropy derivative diverges.
pub fn entropy_rate<T: Real>(l_inc: &ComplexMatrix<T>, rho_a: &DensityOperator<T>) -> Result<T> {
    l_inc.ensure_dim(rho_a.dim())?;
    let (log, kernel) = log_with_kernel(rho_a.matrix())?;
    let on_kernel = kernel.matmul(l_inc).matmul(&kernel).frobenius_norm();
    if on_kernel > T::lit(T::STRUCTURE_TOL) * l_inc.frobenius_norm().max(T::one()) {
        return Err(Error::RateUndefined);
    }
    let scale = l_inc.frobenius_norm() * log.frobenius_norm();
    Ok(-real_trace(l_inc.trace_product(&log), scale, "entropy rate")?)
}

/// `T* = đQ/dS`; `None` when the entropy rate vanishes or is undefined.
pub fn local_temperature<T: Real>(
    h_prime: &ComplexMatrix<T>,
    l_inc: &ComplexMatrix<T>,
    rho_a: &DensityOperator<T>,
) -> Result<Option<T>> {
    let ds = match entropy_rate(l_inc, rho_a) {
        Ok(ds) => ds,
        Err(Error::RateUndefined) => return Ok(None),
        Err(e) => return Err(e),
    };
    if ds.abs() <= T::lit(T::RATE_EPS) {
        return Ok(None);
    }
    Ok(Some(heat_rate(h_prime, l_inc)? / ds))
}

/// Conventional split of `d tr(Hρ)` into `tr(ρ Ḣ)` (work) and `tr(H ρ̇)` (heat).
pub fn old_definition_split<T: Real>(
    h_total: &ComplexMatrix<T>,
    dh_dt: &ComplexMatrix<T>,
    rho: &DensityOperator<T>,
    drho_dt: &ComplexMatrix<T>,
) -> Result<(T, T)> {
    let r = rho.matrix();
    dh_dt.ensure_dim(r.dim())?;
    h_total.ensure_dim(r.dim())?;
    drho_dt.ensure_dim(r.dim())?;
    let dw = real_trace(
        r.trace_product(dh_dt),
        r.frobenius_norm() * dh_dt.frobenius_norm(),
        "old-definition work",
    )?;
    let dq = real_trace(
        h_total.trace_product(drho_dt),
        h_total.frobenius_norm() * drho_dt.frobenius_norm(),
        "old-definition heat",
    )?;
    Ok((dw, dq))
}

/// Local energy bookkeeping at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyFlows<T> {
    pub du_dt: T,
    pub dw_dt: T,
    pub dq_dt: T,
    /// `None` when the incoherent generator populates the kernel of `ρ_A`.
    pub ds_dt: Option<T>,
    pub t_star: Option<T>,
}

/// Evaluates all rates and cross-checks the first law against the direct
/// route `dU/dt = tr(ḣ_eff1 ρ_A) + tr(H' ρ̇_A)`.
pub fn energy_flows<T: Real>(
    split: &LembasSplit<T>,
    dh_eff1_dt: &ComplexMatrix<T>,
    l_inc: &ComplexMatrix<T>,
    rho_a: &DensityOperator<T>,
    drho_a: &ComplexMatrix<T>,
) -> Result<EnergyFlows<T>> {
    let dw_dt = work_rate(dh_eff1_dt, &split.h_prime, &split.coherent_remainder, rho_a)?;
    let dq_dt = heat_rate(&split.h_prime, l_inc)?;
    let du_dt = dw_dt + dq_dt;

    let direct = dh_eff1_dt.trace_product(rho_a.matrix()).re + split.h_prime.trace_product(drho_a).re;
    let residual = (direct - du_dt).abs();
    if residual > T::lit(T::FIRST_LAW_TOL) * du_dt.abs().max(T::one()) {
        return Err(Error::NumericalConsistency {
            context: "first law dU = dW + dQ",
            residual: residual.as_f64(),
        });
    }

    let ds_dt = match entropy_rate(l_inc, rho_a) {
        Ok(v) => Some(v),
        Err(Error::RateUndefined) => None,
        Err(e) => return Err(e),
    };
    let t_star = match ds_dt {
        Some(ds) if ds.abs() > T::lit(T::RATE_EPS) => Some(dq_dt / ds),
        _ => None,
    };
    Ok(EnergyFlows {
        du_dt,
        dw_dt,
        dq_dt,
        ds_dt,
        t_star,
    })
}
