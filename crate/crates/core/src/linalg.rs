//! Dense complex linear algebra: products, Kronecker products, partial
//! traces, Hermitian eigendecomposition, propagators and matrix functions.
//!
//! Matrices are square and stored row-major. Everything here is a pure
//! function of its inputs.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::states::DensityOperator;

/// Dense square complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: fmt::Debug> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = &self.data[i * self.dim + j];
                    format!("{:?}{:+?}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { re(T::one()) } else { re(T::zero()) })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a perfect square.
    pub fn from_vec(entries: Vec<Complex<T>>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != entries.len() {
            return Err(Error::InvalidInput(format!(
                "{} entries do not form a non-empty square matrix",
                entries.len()
            )));
        }
        Ok(Self { dim, data: entries })
    }

    /// Builds a matrix from separate real and imaginary row-major arrays.
    pub fn from_parts(real: &[T], imag: &[T]) -> Result<Self> {
        if real.len() != imag.len() {
            return Err(Error::DimensionMismatch {
                expected: real.len(),
                actual: imag.len(),
            });
        }
        Self::from_vec(real.iter().zip(imag).map(|(&r, &i)| c(r, i)).collect())
    }

    /// Real-valued rows, e.g. `from_real_rows(&[&[0., 1.], &[1., 0.]])`.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| re(T::lit(x))));
        }
        Self::from_vec(entries)
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { re(diag[i]) } else { re(T::zero()) })
    }

    /// Transition operator `|j><k|`.
    pub fn transition(dim: usize, j: usize, k: usize) -> Self {
        let mut m = Self::zeros(dim);
        m[(j, k)] = re(T::one());
        m
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn sigma_x() -> Self {
        Self::from_fn(2, |i, j| if i != j { re(T::one()) } else { re(T::zero()) })
    }

    pub fn sigma_y() -> Self {
        let mut m = Self::zeros(2);
        m[(0, 1)] = c(T::zero(), -T::one());
        m[(1, 0)] = c(T::zero(), T::one());
        m
    }

    pub fn sigma_z() -> Self {
        Self::from_diagonal(&[T::one(), -T::one()])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn real_parts(&self) -> Vec<T> {
        self.data.iter().map(|z| z.re).collect()
    }

    pub fn imag_parts(&self) -> Vec<T> {
        self.data.iter().map(|z| z.im).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self[(i, i)]).fold(re(T::zero()), |a, b| a + b)
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(re(s))
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// `(m + m†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()).scale(half))
    }

    /// Frobenius norm of `m - m†`.
    pub fn hermiticity_residual(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_hermitian(&self, rel_tol: T) -> bool {
        self.hermiticity_residual() <= rel_tol * self.frobenius_norm()
    }

    /// Rejects non-Hermitian input at the crate-wide structural tolerance.
    pub fn ensure_hermitian(&self) -> Result<()> {
        let residual = self.hermiticity_residual();
        if residual <= T::lit(T::STRUCTURE_TOL) * self.frobenius_norm() {
            Ok(())
        } else {
            Err(Error::NonHermitian {
                residual: residual.as_f64(),
            })
        }
    }

    pub fn ensure_dim(&self, expected: usize) -> Result<()> {
        if self.dim == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                actual: self.dim,
            })
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = re(T::zero());
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        acc
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self[(i, j)] * v[j])
                    .fold(re(T::zero()), |a, b| a + b)
            })
            .collect()
    }

    /// `u · self · u†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.dagger())
    }

    pub fn map_entries(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Converts to another scalar precision.
    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
                .collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

macro_rules! elementwise {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<T: Real> $tr<&ComplexMatrix<T>> for &ComplexMatrix<T> {
            type Output = ComplexMatrix<T>;
            fn $method(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
                assert_eq!(self.dim, rhs.dim, "elementwise dimension mismatch");
                ComplexMatrix {
                    dim: self.dim,
                    data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a $op b).collect(),
                }
            }
        }
        impl<T: Real> $tr<ComplexMatrix<T>> for ComplexMatrix<T> {
            type Output = ComplexMatrix<T>;
            fn $method(self, rhs: ComplexMatrix<T>) -> ComplexMatrix<T> {
                (&self).$method(&rhs)
            }
        }
        impl<T: Real> $tr<&ComplexMatrix<T>> for ComplexMatrix<T> {
            type Output = ComplexMatrix<T>;
            fn $method(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
                (&self).$method(rhs)
            }
        }
    };
}

elementwise!(Add, add, +);
elementwise!(Sub, sub, -);

impl<T: Real> AddAssign<&ComplexMatrix<T>> for ComplexMatrix<T> {
    fn add_assign(&mut self, rhs: &ComplexMatrix<T>) {
        assert_eq!(self.dim, rhs.dim);
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl<T: Real> SubAssign<&ComplexMatrix<T>> for ComplexMatrix<T> {
    fn sub_assign(&mut self, rhs: &ComplexMatrix<T>) {
        assert_eq!(self.dim, rhs.dim);
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

impl<T: Real> Mul<&ComplexMatrix<T>> for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Real> Mul<ComplexMatrix<T>> for ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.matmul(&rhs)
    }
}

impl<T: Real> Mul<Complex<T>> for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Complex<T>) -> ComplexMatrix<T> {
        self.scale(rhs)
    }
}

impl<T: Real> Mul<Complex<T>> for ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Complex<T>) -> ComplexMatrix<T> {
        self.scale(rhs)
    }
}

impl<T: Real> Neg for ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        self.map_entries(|z| -z)
    }
}

/// Kronecker product; entry `(i·db + k, j·db + l)` is `a_ij · b_kl`.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (da, db) = (a.dim, b.dim);
    let mut out = ComplexMatrix::zeros(da * db);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

fn check_bipartite<T: Real>(m: &ComplexMatrix<T>, da: usize, db: usize) -> Result<()> {
    if da == 0 || db == 0 {
        return Err(Error::InvalidInput("subsystem dimensions must be positive".into()));
    }
    m.ensure_dim(da * db)
}

/// Traces out the right factor of an `(da·db)`-dimensional operator.
pub fn partial_trace_b<T: Real>(
    m: &ComplexMatrix<T>,
    da: usize,
    db: usize,
) -> Result<ComplexMatrix<T>> {
    check_bipartite(m, da, db)?;
    Ok(ComplexMatrix::from_fn(da, |i, j| {
        (0..db)
            .map(|k| m[(i * db + k, j * db + k)])
            .fold(re(T::zero()), |a, b| a + b)
    }))
}

/// Traces out the left factor of an `(da·db)`-dimensional operator.
pub fn partial_trace_a<T: Real>(
    m: &ComplexMatrix<T>,
    da: usize,
    db: usize,
) -> Result<ComplexMatrix<T>> {
    check_bipartite(m, da, db)?;
    Ok(ComplexMatrix::from_fn(db, |k, l| {
        (0..da)
            .map(|i| m[(i * db + k, i * db + l)])
            .fold(re(T::zero()), |a, b| a + b)
    }))
}

/// `[a, b] = ab − ba`.
pub fn commutator<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    b.ensure_dim(a.dim)?;
    Ok(a.matmul(b) - b.matmul(a))
}

/// Spectral decomposition `h = V diag(λ) V†` of a Hermitian matrix.
///
/// Eigenvalues ascend. Each eigenvector column has its first component of
/// modulus above `1e-8` rotated to the positive real axis.
#[derive(Debug, Clone)]
pub struct HermitianEig<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEig<T> {
    /// `V f(Λ) V†` for a real spectral function.
    pub fn map_real(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        self.map_complex(|x| re(f(x)))
    }

    /// `V f(Λ) V†` for a complex-valued spectral function.
    pub fn map_complex(&self, f: impl Fn(T) -> Complex<T>) -> ComplexMatrix<T> {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fl: Vec<Complex<T>> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * fl[k] * v[(j, k)].conj())
                .fold(re(T::zero()), |a, b| a + b)
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.map_real(|x| x)
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// The input is symmetrised as `(h + h†)/2` before rotating.
pub fn herm_eig<T: Real>(h: &ComplexMatrix<T>) -> Result<HermitianEig<T>> {
    h.ensure_hermitian()?;
    let n = h.dim();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::<T>::identity(n);
    let norm = a.frobenius_norm();
    let eps = T::epsilon();
    let zero = T::zero();
    let one = T::one();

    let off_norm = |a: &ComplexMatrix<T>| -> T {
        let mut s = zero;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    if norm > zero {
        // entries below this are at round-off level and are left alone
        let negligible = eps * norm / T::lit(n as f64);
        let mut previous = T::infinity();
        for _sweep in 0..100 {
            let off = off_norm(&a);
            if off <= eps * norm || off >= previous {
                break;
            }
            previous = off;
            for p in 0..n.saturating_sub(1) {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    let mag = apq.norm();
                    if mag <= negligible || mag <= T::min_positive_value() {
                        continue;
                    }
                    // Reduce the (p, q) block to a real symmetric one via the phase of a_pq,
                    // then apply the standard Jacobi rotation.
                    let phase = apq / re(mag);
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let theta = (aqq - app) / (T::lit(2.0) * mag);
                    let t = theta.signum() / (theta.abs() + (theta * theta + one).sqrt());
                    let cs = one / (t * t + one).sqrt();
                    let sn = t * cs;
                    // J = [[c, s], [-s·conj(phase), c·conj(phase)]] on the (p, q) plane.
                    let jpp = re(cs);
                    let jpq = re(sn);
                    let jqp = phase.conj() * re(-sn);
                    let jqq = phase.conj() * re(cs);

                    // A <- A J (columns p, q)
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp * jpp + akq * jqp;
                        a[(k, q)] = akp * jpq + akq * jqq;
                    }
                    // A <- J† A (rows p, q)
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                    }
                    a[(p, q)] = re(zero);
                    a[(q, p)] = re(zero);
                    a[(p, p)] = re(a[(p, p)].re);
                    a[(q, q)] = re(a[(q, q)].re);
                    // V <- V J
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * jpp + vkq * jqp;
                        v[(k, q)] = vkp * jpq + vkq * jqq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    let eigenvalues: Vec<T> = order.iter().map(|&i| a[(i, i)].re).collect();
    let phase_floor = T::lit(1e-8);
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        let col = v.column(old_col);
        let fix = col
            .iter()
            .find(|z| z.norm() > phase_floor)
            .map(|z| z.conj() / re(z.norm()))
            .unwrap_or(re(one));
        for (row, z) in col.into_iter().enumerate() {
            eigenvectors[(row, new_col)] = z * fix;
        }
    }
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// `exp(−i h dt)` through the eigenbasis of `h`.
pub fn propagator<T: Real>(h: &ComplexMatrix<T>, dt: T) -> Result<ComplexMatrix<T>> {
    let eig = herm_eig(h)?;
    Ok(eig.map_complex(|lambda| {
        let phase = -lambda * dt;
        c(phase.cos(), phase.sin())
    }))
}

/// Natural logarithm of a positive semidefinite matrix on its support.
///
/// Eigenvalues below `T::LOG_EPS` are treated as kernel and mapped to 0, so
/// that traces `tr(X log ρ)` implement the `0·log 0 = 0` convention.
pub fn matrix_log_psd<T: Real>(rho: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    Ok(log_with_kernel(rho)?.0)
}

/// Log on the support together with the orthogonal projector onto the kernel.
pub(crate) fn log_with_kernel<T: Real>(
    rho: &ComplexMatrix<T>,
) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    let eig = herm_eig(rho)?;
    let floor = T::lit(-T::STRUCTURE_TOL);
    if let Some(&bad) = eig.eigenvalues.iter().find(|&&x| x < floor) {
        return Err(Error::NegativeEigenvalue { value: bad.as_f64() });
    }
    let eps = T::lit(T::LOG_EPS);
    let log = eig.map_real(|x| if x < eps { T::zero() } else { x.ln() });
    let kernel = eig.map_real(|x| if x < eps { T::one() } else { T::zero() });
    Ok((log, kernel))
}

/// `−Σ λ ln λ` over a spectrum, with `0 ln 0 = 0` and tiny negative round-off clipped.
pub fn entropy_of_spectrum<T: Real>(eigenvalues: &[T]) -> T {
    eigenvalues
        .iter()
        .filter(|&&x| x > T::zero())
        .map(|&x| -x * x.ln())
        .sum()
}

/// Von Neumann entropy in nats.
pub fn von_neumann_entropy<T: Real>(rho: &DensityOperator<T>) -> T {
    let eig = herm_eig(rho.matrix()).expect("density operators are Hermitian");
    entropy_of_spectrum(&eig.eigenvalues)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::validate_density;

    type M = ComplexMatrix<f64>;

    fn close(a: &M, b: &M, tol: f64) -> bool {
        (a - b).frobenius_norm() <= tol
    }

    #[test]
    fn kron_identities_and_pauli() {
        assert_eq!(kron(&M::identity(2), &M::identity(2)), M::identity(4));
        let zz = kron(&M::sigma_z(), &M::sigma_z());
        assert_eq!(zz, M::from_diagonal(&[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn kron_matches_index_sum() {
        let a = M::from_fn(2, |i, j| c(i as f64 + 0.5, j as f64 - 1.0));
        let b = M::from_fn(3, |k, l| c((k * 3 + l) as f64, -(k as f64)));
        let m = kron(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..3 {
                    for l in 0..3 {
                        assert_eq!(m[(i * 3 + k, j * 3 + l)], a[(i, j)] * b[(k, l)]);
                    }
                }
            }
        }
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let s = 0.5f64.sqrt();
        let phi = vec![re(s), re(0.0), re(0.0), re(s)];
        let bell = M::outer(&phi, &phi);
        let ra = partial_trace_b(&bell, 2, 2).unwrap();
        let rb = partial_trace_a(&bell, 2, 2).unwrap();
        assert!(close(&ra, &M::identity(2).scale_real(0.5), 1e-15));
        assert!(close(&rb, &M::identity(2).scale_real(0.5), 1e-15));
    }

    #[test]
    fn partial_trace_of_product() {
        let ra = M::from_real_rows(&[&[0.7, 0.1], &[0.1, 0.3]]).unwrap();
        let rb = M::from_diagonal(&[0.2, 0.5, 0.3]);
        let r = partial_trace_b(&kron(&ra, &rb), 2, 3).unwrap();
        assert!(close(&r, &ra, 1e-15));
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let m = M::identity(4);
        assert!(matches!(
            partial_trace_b(&m, 2, 3),
            Err(Error::DimensionMismatch { expected: 6, actual: 4 })
        ));
        assert!(partial_trace_a(&m, 3, 2).is_err());
    }

    #[test]
    fn commutator_examples() {
        let (x, y, z) = (M::sigma_x(), M::sigma_y(), M::sigma_z());
        assert_eq!(commutator(&z, &z).unwrap(), M::zeros(2));
        let zx = commutator(&z, &x).unwrap();
        assert!(close(&zx, &y.scale(c(0.0, 2.0)), 1e-15));
        assert!(commutator(&z, &M::identity(3)).is_err());
    }

    #[test]
    fn transition_operator_commutator_gives_gap() {
        let energies = [0.3, -1.2, 2.5];
        let ha = M::from_diagonal(&energies);
        for j in 0..3 {
            for k in 0..3 {
                let t = M::transition(3, j, k);
                let lhs = commutator(&t, &ha).unwrap();
                let omega_kj = energies[k] - energies[j];
                assert!(close(&lhs, &t.scale_real(omega_kj), 1e-15));
            }
        }
    }

    #[test]
    fn eig_of_paulis() {
        let ez = herm_eig(&M::sigma_z()).unwrap();
        assert_eq!(ez.eigenvalues, vec![-1.0, 1.0]);
        let ex = herm_eig(&M::sigma_x()).unwrap();
        assert!((ex.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((ex.eigenvalues[1] - 1.0).abs() < 1e-15);
        let s = 0.5f64.sqrt();
        // phase convention: first component real positive
        let v0 = ex.eigenvectors.column(0);
        let v1 = ex.eigenvectors.column(1);
        assert!((v0[0] - re(s)).norm() < 1e-15 && (v0[1] - re(-s)).norm() < 1e-15);
        assert!((v1[0] - re(s)).norm() < 1e-15 && (v1[1] - re(s)).norm() < 1e-15);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = M::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(herm_eig(&m), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn eig_of_zero_and_degenerate() {
        let e = herm_eig(&M::zeros(3)).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0; 3]);
        let e = herm_eig(&M::identity(3).scale_real(2.0)).unwrap();
        assert!(close(&e.reconstruct(), &M::identity(3).scale_real(2.0), 1e-15));
    }

    #[test]
    fn propagator_examples() {
        assert!(close(&propagator(&M::zeros(2), 0.7).unwrap(), &M::identity(2), 1e-15));
        let de = 1.3;
        let h = M::sigma_z().scale_real(de / 2.0);
        let u = propagator(&h, 2.0 * std::f64::consts::PI / de).unwrap();
        assert!(close(&u, &M::identity(2).scale_real(-1.0), 1e-14));
    }

    #[test]
    fn log_psd_conventions() {
        let l = matrix_log_psd(&M::identity(4).scale_real(0.25)).unwrap();
        assert!(close(&l, &M::identity(4).scale_real(0.25f64.ln()), 1e-14));
        let l = matrix_log_psd(&M::from_diagonal(&[1.0, 0.0])).unwrap();
        assert!(close(&l, &M::zeros(2), 1e-15));
        let bad = M::from_diagonal(&[1.1, -0.1]);
        assert!(matches!(matrix_log_psd(&bad), Err(Error::NegativeEigenvalue { .. })));
    }

    #[test]
    fn log_of_thermal_state_is_affine_in_h() {
        let h = M::from_real_rows(&[&[0.4, 0.2, 0.0], &[0.2, -0.3, 0.1], &[0.0, 0.1, 0.9]]).unwrap();
        let beta = 1.7;
        let eig = herm_eig(&h).unwrap();
        let z: f64 = eig.eigenvalues.iter().map(|&e| (-beta * e).exp()).sum();
        let rho = eig.map_real(|e| (-beta * e).exp() / z);
        let expected = h.scale_real(-beta) - M::identity(3).scale_real(z.ln());
        assert!(close(&matrix_log_psd(&rho).unwrap(), &expected, 1e-13));
    }

    #[test]
    fn entropy_examples() {
        let pure = validate_density(M::from_diagonal(&[1.0, 0.0])).unwrap();
        assert_eq!(von_neumann_entropy(&pure), 0.0);
        let mixed = validate_density(M::identity(2).scale_real(0.5)).unwrap();
        assert!((von_neumann_entropy(&mixed) - 2f64.ln()).abs() < 1e-15);
        let d = validate_density(M::from_diagonal(&[0.25, 0.75])).unwrap();
        let expected = -0.25 * 0.25f64.ln() - 0.75 * 0.75f64.ln();
        assert!((von_neumann_entropy(&d) - expected).abs() < 1e-15);
    }

    #[test]
    fn parts_round_trip_exactly() {
        let m = M::from_fn(3, |i, j| c(i as f64 * 0.1 + 1e-17, -(j as f64) / 3.0));
        let back = M::from_parts(&m.real_parts(), &m.imag_parts()).unwrap();
        assert_eq!(back, m);
        assert!(M::from_parts(&[1.0, 2.0], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn generic_over_f32() {
        let h = ComplexMatrix::<f32>::sigma_x();
        let e = herm_eig(&h).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-6);
        let u = propagator(&h, 0.3f32).unwrap();
        let uu = u.dagger().matmul(&u);
        assert!((uu - ComplexMatrix::<f32>::identity(2)).frobenius_norm() < 1e-6);
    }
}
