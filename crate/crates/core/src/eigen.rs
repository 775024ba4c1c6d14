//! Hermitian eigendecomposition via cyclic Jacobi rotations.
//!
//! The solver is self-contained (no LAPACK binding) and tuned for the small
//! dimensions this crate works at. For a Hermitian `A` it produces
//! `A = U diag(lambda) U^*` with `lambda` ascending and `U` unitary.
//!
//! Each rotation annihilates one off-diagonal entry `z = A[p][q]`. Writing
//! `z = |z| e^{i phi}`, `a = A[p][p]`, `b = A[q][q]`, the Givens-like matrix
//!
//! ```text
//! G[p][p] = c,      G[p][q] = s,
//! G[q][p] = -conj(s), G[q][q] = c,      s = sigma e^{i phi},
//! ```
//!
//! zeroes `(G^* A G)[p][q]` when `tan = sigma/c` solves
//! `|z| tan^2 + (b - a) tan - |z| = 0`; the root of smaller modulus,
//! `tan = sign(theta) / (|theta| + sqrt(1 + theta^2))` with
//! `theta = (b - a) / (2 |z|)`, keeps the rotation angle at most pi/4 and the
//! iteration stable. The rotated diagonal is `a - tan |z|` and `b + tan |z|`.

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Cx};
use crate::scalar::{tol, Real};

/// Relative Hermitian-asymmetry budget: inputs within this of their adjoint
/// are symmetrized, anything worse is rejected.
const HERMITIAN_DEFECT_REL: f64 = 1e-12;

/// Convergence: off-diagonal Frobenius mass relative to the input's norm.
const OFF_DIAGONAL_REL: f64 = 1e-14;

/// Sweep budget; cyclic Jacobi on the dimensions used here converges in
/// well under ten sweeps.
const MAX_SWEEPS: usize = 100;

/// Result of [`eigh`]: eigenvalues ascending, eigenvectors as the columns
/// of a unitary matrix, `A = U diag(values) U^*`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<T: Real> {
    values: Vec<T>,
    vectors: ComplexMatrix<T>,
}

impl<T: Real> EigenDecomposition<T> {
    /// Assembles a decomposition from already-known spectral data. The
    /// caller guarantees `values` ascending and `vectors` unitary; used to
    /// propagate spectra through spectral maps without re-decomposing.
    pub(crate) fn from_parts(values: Vec<T>, vectors: ComplexMatrix<T>) -> Self {
        debug_assert_eq!(values.len(), vectors.dim());
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        Self { values, vectors }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Eigenvalues in ascending order.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Unitary matrix whose `j`-th column is the eigenvector for `values[j]`.
    pub fn vectors(&self) -> &ComplexMatrix<T> {
        &self.vectors
    }

    pub fn lambda_min(&self) -> T {
        self.values[0]
    }

    pub fn lambda_max(&self) -> T {
        self.values[self.values.len() - 1]
    }

    /// Applies `f` to the spectrum: `U diag(f(lambda)) U^*`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.dim();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let fj = f(self.values[j]);
            for i in 0..n {
                scaled[(i, j)] = scaled[(i, j)].scale(fj);
            }
        }
        &scaled * &self.vectors.adjoint()
    }

    /// `U diag(lambda) U^*`; equals the input up to rounding.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.map_spectrum(|x| x)
    }

    /// Frobenius norm of `U^* U - I`.
    pub fn unitarity_defect(&self) -> T {
        let n = self.dim();
        let gram = &self.vectors.adjoint() * &self.vectors;
        (&gram - &ComplexMatrix::identity(n)).frobenius_norm()
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Inputs within `1e-12 * max_abs(A)` of Hermitian are symmetrized first;
/// anything further from Hermitian is rejected. The returned eigenvalues are
/// ascending and each eigenvector's first non-negligible component is made
/// real positive, so the decomposition is deterministic for a fixed input.
pub fn eigh<T: Real>(a: &ComplexMatrix<T>) -> Result<EigenDecomposition<T>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigh requires a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let defect = a.hermitian_defect();
    let herm_tol = tol::<T>(HERMITIAN_DEFECT_REL) * a.max_abs();
    if defect > herm_tol {
        return Err(Error::NonHermitian {
            asymmetry: defect.to_f64().unwrap_or(f64::NAN),
            tolerance: herm_tol.to_f64().unwrap_or(f64::NAN),
        });
    }

    let mut work = a.symmetrized();
    let mut vectors = ComplexMatrix::identity(n);
    if n > 1 {
        let target = tol::<T>(OFF_DIAGONAL_REL) * a.frobenius_norm();
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let off = off_diagonal_norm(&work);
            if off <= target {
                converged = true;
                break;
            }
            // Entries this small cannot keep the off-diagonal mass above
            // `target` on their own; rotating them is wasted work.
            let skip = target / T::from_usize(10 * n).unwrap();
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut work, &mut vectors, p, q, skip);
                }
            }
        }
        if !converged {
            // One more measurement in case the last sweep finished the job.
            let off = off_diagonal_norm(&work);
            if off > target {
                return Err(Error::NoConvergence {
                    what: "jacobi eigensolver",
                    iterations: MAX_SWEEPS,
                    residual: off.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
    }

    // Sort ascending (stable, so equal eigenvalues keep their sweep order)
    // and fix each eigenvector's phase.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        work[(i, i)]
            .re
            .partial_cmp(&work[(j, j)].re)
            .expect("eigenvalues of a Hermitian matrix are finite")
    });
    let values: Vec<T> = order.iter().map(|&i| work[(i, i)].re).collect();
    let mut sorted = ComplexMatrix::zeros(n, n);
    for (jj, &j) in order.iter().enumerate() {
        for i in 0..n {
            sorted[(i, jj)] = vectors[(i, j)];
        }
    }
    fix_phases(&mut sorted);

    Ok(EigenDecomposition {
        values,
        vectors: sorted,
    })
}

fn off_diagonal_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.dim();
    let mut sum = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Applies one Jacobi rotation in the `(p, q)` plane to the Hermitian
/// working matrix and accumulates it into `vectors`. Hermitian symmetry is
/// maintained exactly by mirroring the updated rows onto the columns.
fn rotate<T: Real>(
    work: &mut ComplexMatrix<T>,
    vectors: &mut ComplexMatrix<T>,
    p: usize,
    q: usize,
    skip: T,
) {
    let n = work.dim();
    let z = work[(p, q)];
    let az = z.norm();
    if az <= skip {
        return;
    }
    let a = work[(p, p)].re;
    let b = work[(q, q)].re;
    let theta = (b - a) / (az * T::from_f64(2.0).unwrap());
    let tan = if theta >= T::zero() {
        T::one() / (theta + (T::one() + theta * theta).sqrt())
    } else {
        -T::one() / (-theta + (T::one() + theta * theta).sqrt())
    };
    let c = T::one() / (T::one() + tan * tan).sqrt();
    let sigma = tan * c;
    let phase = z.unscale(az);
    let s = phase.scale(sigma);
    let s_conj = s.conj();

    work[(p, p)] = Cx::new(a - tan * az, T::zero());
    work[(q, q)] = Cx::new(b + tan * az, T::zero());
    work[(p, q)] = Cx::new(T::zero(), T::zero());
    work[(q, p)] = Cx::new(T::zero(), T::zero());
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let apk = work[(p, k)];
        let aqk = work[(q, k)];
        let new_pk = apk.scale(c) - s * aqk;
        let new_qk = s_conj * apk + aqk.scale(c);
        work[(p, k)] = new_pk;
        work[(q, k)] = new_qk;
        work[(k, p)] = new_pk.conj();
        work[(k, q)] = new_qk.conj();
    }
    for k in 0..n {
        let up = vectors[(k, p)];
        let uq = vectors[(k, q)];
        vectors[(k, p)] = up.scale(c) - s_conj * uq;
        vectors[(k, q)] = s * up + uq.scale(c);
    }
}

/// Rotates each column so its first component of non-negligible modulus is
/// real positive, making eigenvectors unique even within eigenspaces picked
/// deterministically.
fn fix_phases<T: Real>(vectors: &mut ComplexMatrix<T>) {
    let n = vectors.dim();
    let threshold = tol::<T>(1e-8);
    for j in 0..n {
        let mut lead = None;
        for i in 0..n {
            if vectors[(i, j)].norm() > threshold {
                lead = Some(i);
                break;
            }
        }
        let Some(i) = lead else { continue };
        let z = vectors[(i, j)];
        let phase = z.unscale(z.norm()).conj();
        for k in 0..n {
            vectors[(k, j)] = vectors[(k, j)] * phase;
        }
    }
}
