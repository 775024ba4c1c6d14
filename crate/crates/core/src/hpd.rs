//! Hermitian positive definite matrices and the structures they carry:
//! spectral calculus, the Loewner order, and the Thompson metric.
//!
//! [`HpdMatrix`] validates positivity once at construction and keeps the
//! eigendecomposition alongside the entries, so spectral functions
//! (powers, roots, logarithms, inverses) cost two small products instead
//! of a fresh decomposition.

use crate::eigen::{eigh, EigenDecomposition};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::{tol, Real};

/// Default relative tolerance for Loewner-order verdicts: an inequality
/// `L <= R` is accepted when `lambda_min(R - L) >= -tol * scale` with
/// `scale = 1 + ||L|| + ||R||` in the spectral norm.
pub const DEFAULT_ORDER_TOL_REL: f64 = 1e-9;

/// Hermitian positive definite matrix with its eigendecomposition.
#[derive(Clone, Debug)]
pub struct HpdMatrix<T: Real> {
    mat: ComplexMatrix<T>,
    eig: EigenDecomposition<T>,
}

impl<T: Real> HpdMatrix<T> {
    /// Validates and wraps a matrix: it must be Hermitian within the
    /// symmetrization tolerance and have strictly positive spectrum.
    pub fn new(mat: ComplexMatrix<T>) -> Result<Self> {
        let eig = eigh(&mat)?;
        if eig.lambda_min() <= T::zero() {
            return Err(Error::Domain(format!(
                "matrix is not positive definite: lambda_min = {:e}",
                eig.lambda_min()
            )));
        }
        // Store the symmetrized entries so the wrapped matrix is exactly
        // what was decomposed.
        let mat = mat.symmetrized();
        Ok(Self { mat, eig })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(n),
            eig: eigh(&ComplexMatrix::identity(n)).expect("identity is Hermitian"),
        }
    }

    /// Diagonal positive definite matrix.
    pub fn diag(entries: &[T]) -> Result<Self> {
        if entries.iter().any(|&e| e <= T::zero()) {
            return Err(Error::Domain(
                "diagonal entries must be strictly positive".into(),
            ));
        }
        Self::new(ComplexMatrix::diag(entries))
    }

    /// Rebuilds a positive definite matrix from known spectral data,
    /// skipping the decomposition. `vectors` must be unitary; `values` may
    /// arrive unsorted (spectral maps can reverse the order) but must be
    /// strictly positive.
    pub(crate) fn from_spectrum(vectors: &ComplexMatrix<T>, values: Vec<T>) -> Self {
        debug_assert!(values.iter().all(|v| *v > T::zero() && v.is_finite()));
        let n = values.len();
        let sorted_already = values.windows(2).all(|w| w[0] <= w[1]);
        let (values, vectors) = if sorted_already {
            (values, vectors.clone())
        } else {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite"));
            let sorted_values: Vec<T> = order.iter().map(|&i| values[i]).collect();
            let mut sorted_vectors = ComplexMatrix::zeros(n, n);
            for (jj, &j) in order.iter().enumerate() {
                for i in 0..n {
                    sorted_vectors[(i, jj)] = vectors[(i, j)];
                }
            }
            (sorted_values, sorted_vectors)
        };
        let eig = EigenDecomposition::from_parts(values, vectors);
        let mat = eig.reconstruct().symmetrized();
        Self { mat, eig }
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.mat
    }

    pub fn eig(&self) -> &EigenDecomposition<T> {
        &self.eig
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[T] {
        self.eig.values()
    }

    pub fn lambda_min(&self) -> T {
        self.eig.lambda_min()
    }

    pub fn lambda_max(&self) -> T {
        self.eig.lambda_max()
    }

    /// `(lambda_min, lambda_max)`.
    pub fn bounds(&self) -> (T, T) {
        (self.lambda_min(), self.lambda_max())
    }

    /// `A^r` through the spectrum; `r` may be negative or fractional.
    pub fn power(&self, r: T) -> Self {
        let values = self.eig.values().iter().map(|&l| l.powf(r)).collect();
        Self::from_spectrum(self.eig.vectors(), values)
    }

    pub fn sqrt(&self) -> Self {
        let values = self.eig.values().iter().map(|&l| l.sqrt()).collect();
        Self::from_spectrum(self.eig.vectors(), values)
    }

    pub fn inv_sqrt(&self) -> Self {
        let values = self.eig.values().iter().map(|&l| l.sqrt().recip()).collect();
        Self::from_spectrum(self.eig.vectors(), values)
    }

    pub fn inverse(&self) -> Self {
        let values = self.eig.values().iter().map(|&l| l.recip()).collect();
        Self::from_spectrum(self.eig.vectors(), values)
    }

    /// `k * A` for `k > 0`.
    pub fn scale(&self, k: T) -> Self {
        assert!(k > T::zero(), "scale factor must be positive");
        let values = self.eig.values().iter().map(|&l| k * l).collect();
        Self::from_spectrum(self.eig.vectors(), values)
    }

    /// Matrix logarithm; Hermitian but in general indefinite.
    pub fn log_m(&self) -> ComplexMatrix<T> {
        self.eig.map_spectrum(|l| l.ln())
    }

    /// `exp(H)` of a Hermitian matrix; always positive definite.
    pub fn exp_hermitian(h: &ComplexMatrix<T>) -> Result<Self> {
        let e = eigh(h)?;
        let values = e.values().iter().map(|&l| l.exp()).collect();
        Ok(Self::from_spectrum(e.vectors(), values))
    }

    /// Congruence `C^* A C`; positive definite whenever `C` has full
    /// column rank, which is validated numerically.
    pub fn congruence_by(&self, c: &ComplexMatrix<T>) -> Result<Self> {
        if c.rows() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "congruence: matrix is {0}x{0} but C has {1} rows",
                self.dim(),
                c.rows()
            )));
        }
        Self::new(self.mat.congruence(c))
    }
}

/// Spectral functions applied through the eigendecomposition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MatrixFunction<T> {
    /// `A^r`.
    Power(T),
    Log,
    Exp,
    Sqrt,
    Inverse,
}

/// `U f(Lambda) U^*` for a positive definite `A`; the result is Hermitian
/// (and positive definite except for `Log`).
pub fn matrix_function<T: Real>(a: &HpdMatrix<T>, f: MatrixFunction<T>) -> ComplexMatrix<T> {
    match f {
        MatrixFunction::Power(r) => a.eig().map_spectrum(|l| l.powf(r)),
        MatrixFunction::Log => a.eig().map_spectrum(|l| l.ln()),
        MatrixFunction::Exp => a.eig().map_spectrum(|l| l.exp()),
        MatrixFunction::Sqrt => a.eig().map_spectrum(|l| l.sqrt()),
        MatrixFunction::Inverse => a.eig().map_spectrum(|l| l.recip()),
    }
}

/// `(lambda_min, lambda_max)` of a positive definite matrix.
pub fn spectral_bounds<T: Real>(a: &HpdMatrix<T>) -> (T, T) {
    a.bounds()
}

/// Outcome of a Loewner-order comparison `L <= R`.
#[derive(Clone, Copy, Debug)]
pub struct LoewnerCheck<T> {
    /// `lambda_min(R - L)`; nonnegative iff the order holds exactly.
    pub slack: T,
    /// `slack / scale` with `scale = 1 + ||L|| + ||R||` (spectral norms).
    pub relative_slack: T,
    /// `slack >= -tol_rel * scale`.
    pub holds: bool,
    pub scale: T,
}

impl<T: Real> LoewnerCheck<T> {
    /// Builds the verdict from a raw slack and the two operand norms.
    pub fn from_slack(slack: T, norm_l: T, norm_r: T, tol_rel: T) -> Self {
        let scale = T::one() + norm_l + norm_r;
        LoewnerCheck {
            slack,
            relative_slack: slack / scale,
            holds: slack >= -tol_rel * scale,
            scale,
        }
    }
}

/// Loewner-order comparison `L <= R` with the default tolerance.
///
/// Both operands must be Hermitian and of equal shape. The slack is the
/// smallest eigenvalue of `R - L`; a small negative slack within the
/// relative tolerance still counts as holding, so that true inequalities
/// are not rejected for rounding noise.
pub fn loewner_slack<T: Real>(
    l: &ComplexMatrix<T>,
    r: &ComplexMatrix<T>,
) -> Result<LoewnerCheck<T>> {
    loewner_slack_with_tol(l, r, tol::<T>(DEFAULT_ORDER_TOL_REL))
}

/// [`loewner_slack`] with an explicit relative tolerance.
pub fn loewner_slack_with_tol<T: Real>(
    l: &ComplexMatrix<T>,
    r: &ComplexMatrix<T>,
    tol_rel: T,
) -> Result<LoewnerCheck<T>> {
    if !l.is_square() || l.rows() != r.rows() || l.cols() != r.cols() {
        return Err(Error::DimensionMismatch(format!(
            "loewner_slack: operands are {}x{} and {}x{}",
            l.rows(),
            l.cols(),
            r.rows(),
            r.cols()
        )));
    }
    let spectral = |m: &ComplexMatrix<T>| -> Result<T> {
        let e = eigh(m)?;
        Ok(e.values()
            .iter()
            .map(|v| v.abs())
            .fold(T::zero(), T::max))
    };
    let norm_l = spectral(l)?;
    let norm_r = spectral(r)?;
    // Symmetrize the difference: when L and R nearly coincide the raw
    // subtraction is dominated by rounding skew relative to its own size.
    let diff = eigh(&(r - l).symmetrized())?;
    Ok(LoewnerCheck::from_slack(
        diff.lambda_min(),
        norm_l,
        norm_r,
        tol_rel,
    ))
}

/// Thompson metric `d(A, B) = || log(A^{-1/2} B A^{-1/2}) ||` (spectral
/// norm). Zero iff `A = B`; invariant under congruence and inversion.
pub fn thompson_distance<T: Real>(a: &HpdMatrix<T>, b: &HpdMatrix<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "thompson_distance: dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let s = a.inv_sqrt();
    let w = b.matrix().congruence(s.matrix()); // S B S with S = A^{-1/2} Hermitian
    let e = eigh(&w)?;
    if e.lambda_min() <= T::zero() {
        return Err(Error::Domain(
            "thompson_distance: congruence lost positivity".into(),
        ));
    }
    Ok(e.values()
        .iter()
        .map(|l| l.ln().abs())
        .fold(T::zero(), T::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Cx;

    type M = ComplexMatrix<f64>;

    fn two_one_one_two() -> M {
        let mut a = M::zeros(2, 2);
        a[(0, 0)] = Cx::new(2.0, 0.0);
        a[(1, 1)] = Cx::new(2.0, 0.0);
        a[(0, 1)] = Cx::new(1.0, 0.0);
        a[(1, 0)] = Cx::new(1.0, 0.0);
        a
    }

    #[test]
    fn rejects_indefinite_and_non_hermitian() {
        assert!(matches!(
            HpdMatrix::new(M::diag(&[1.0, -1.0])),
            Err(Error::Domain(_))
        ));
        let mut a = M::identity(2);
        a[(0, 1)] = Cx::new(1.0, 0.0);
        assert!(matches!(HpdMatrix::new(a), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn power_of_diagonal_is_entrywise() {
        let a = HpdMatrix::diag(&[4.0, 9.0]).unwrap();
        let h = a.power(0.5);
        assert!(h.matrix().max_abs_diff(&M::diag(&[2.0, 3.0])) < 1e-14);
        let inv = a.power(-1.0);
        assert!(inv.matrix().max_abs_diff(&M::diag(&[0.25, 1.0 / 9.0])) < 1e-16);
    }

    #[test]
    fn sqrt_oracle_two_one_one_two() {
        // Eigenvalues 1 and 3; sqrt has entries ((sqrt3+1)/2, (sqrt3-1)/2).
        let a = HpdMatrix::new(two_one_one_two()).unwrap();
        let s = a.sqrt();
        let d = 3.0_f64.sqrt();
        let on = (d + 1.0) / 2.0;
        let off = (d - 1.0) / 2.0;
        assert!((s.matrix()[(0, 0)].re - on).abs() < 1e-12);
        assert!((s.matrix()[(0, 1)].re - off).abs() < 1e-12);
        assert!((s.matrix()[(1, 0)].re - off).abs() < 1e-12);
        assert!((s.matrix()[(1, 1)].re - on).abs() < 1e-12);
        // sqrt * sqrt recovers the input.
        let sq = s.matrix() * s.matrix();
        assert!(sq.max_abs_diff(a.matrix()) < 1e-13);
    }

    #[test]
    fn power_homomorphism() {
        let a = HpdMatrix::new(two_one_one_two()).unwrap();
        let prod = a.power(0.3).matrix() * a.power(0.7).matrix();
        assert!(prod.max_abs_diff(a.matrix()) < 1e-13);
    }

    #[test]
    fn inverse_multiplies_to_identity() {
        let a = HpdMatrix::new(two_one_one_two()).unwrap();
        let prod = a.inverse().matrix() * a.matrix();
        assert!(prod.max_abs_diff(&M::identity(2)) < 1e-13);
    }

    #[test]
    fn log_and_exp_are_inverse() {
        let a = HpdMatrix::new(two_one_one_two()).unwrap();
        let b = HpdMatrix::exp_hermitian(&a.log_m()).unwrap();
        assert!(b.matrix().max_abs_diff(a.matrix()) < 1e-13);
        assert!(HpdMatrix::<f64>::identity(3).log_m().max_abs() < 1e-15);
    }

    #[test]
    fn matrix_function_enum_matches_methods() {
        let a = HpdMatrix::new(two_one_one_two()).unwrap();
        assert!(matrix_function(&a, MatrixFunction::Sqrt).max_abs_diff(a.sqrt().matrix()) < 1e-15);
        assert!(
            matrix_function(&a, MatrixFunction::Power(-1.0)).max_abs_diff(a.inverse().matrix())
                < 1e-15
        );
        let exp_log = HpdMatrix::exp_hermitian(&matrix_function(&a, MatrixFunction::Log)).unwrap();
        assert!(exp_log.matrix().max_abs_diff(a.matrix()) < 1e-13);
        assert!(matrix_function(&a, MatrixFunction::Exp).hermitian_defect() < 1e-12);
    }

    #[test]
    fn congruence_by_diagonal() {
        let a = HpdMatrix::identity(2);
        let c = M::diag(&[2.0, 3.0]);
        let r = a.congruence_by(&c).unwrap();
        assert!(r.matrix().max_abs_diff(&M::diag(&[4.0, 9.0])) < 1e-15);
    }

    #[test]
    fn loewner_comparable_cases() {
        let eq = loewner_slack(&M::diag(&[1.0, 2.0]), &M::diag(&[2.0, 2.0])).unwrap();
        assert!(eq.holds);
        assert!(eq.slack.abs() < 1e-15);

        let strict = loewner_slack(&M::identity(2), &M::identity(2).scale(2.0)).unwrap();
        assert!(strict.holds);
        assert!((strict.slack - 1.0).abs() < 1e-15);
        assert!((strict.relative_slack - 0.25).abs() < 1e-15); // scale = 1 + 1 + 2

        let fails = loewner_slack(&M::diag(&[3.0, 1.0]), &M::diag(&[1.0, 3.0])).unwrap();
        assert!(!fails.holds);
        assert!((fails.slack + 2.0).abs() < 1e-15);
    }

    #[test]
    fn loewner_incomparable_pair_fails_both_ways() {
        let a = M::diag(&[2.0, 0.5]);
        let b = M::identity(2);
        assert!(!loewner_slack(&a, &b).unwrap().holds);
        assert!(!loewner_slack(&b, &a).unwrap().holds);
    }

    #[test]
    fn loewner_tolerance_absorbs_rounding() {
        let a = M::identity(2);
        let mut b = M::identity(2);
        b[(0, 0)] = Cx::new(1.0 - 1e-12, 0.0);
        // slack = -1e-12, scale ~ 3: within the default 1e-9 relative band.
        let check = loewner_slack(&b.clone(), &a).unwrap();
        assert!(check.holds);
        let strict = loewner_slack_with_tol(&b, &a, 1e-14).unwrap();
        assert!(strict.holds); // b <= a actually holds: slack is +1e-12
    }

    #[test]
    fn thompson_metric_oracles() {
        let a = HpdMatrix::new(two_one_one_two()).unwrap();
        assert!(thompson_distance(&a, &a).unwrap() < 1e-14);

        let id = HpdMatrix::identity(2);
        let e_id = id.scale(std::f64::consts::E);
        assert!((thompson_distance(&id, &e_id).unwrap() - 1.0).abs() < 1e-12);

        let d = HpdMatrix::diag(&[2.0, 0.5]).unwrap();
        assert!((thompson_distance(&id, &d).unwrap() - 2.0_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn thompson_metric_symmetry_and_inversion_invariance() {
        let a = HpdMatrix::new(two_one_one_two()).unwrap();
        let b = HpdMatrix::diag(&[0.5, 4.0]).unwrap();
        let ab = thompson_distance(&a, &b).unwrap();
        let ba = thompson_distance(&b, &a).unwrap();
        assert!((ab - ba).abs() < 1e-12);
        let inv = thompson_distance(&a.inverse(), &b.inverse()).unwrap();
        assert!((ab - inv).abs() < 1e-12);
    }

    #[test]
    fn spectral_bounds_reads_the_spectrum() {
        let a = HpdMatrix::diag(&[1.0, 5.0]).unwrap();
        assert_eq!(spectral_bounds(&a), (1.0, 5.0));
    }

    #[test]
    fn from_spectrum_agrees_with_fresh_decomposition() {
        let a = HpdMatrix::new(two_one_one_two()).unwrap();
        // inverse reverses the eigenvalue order; from_spectrum must re-sort.
        let inv = a.inverse();
        let fresh = eigh(inv.matrix()).unwrap();
        assert!(inv.eig().vectors().max_abs_diff(fresh.vectors()) < 1e-10);
        for (x, y) in inv.eigenvalues().iter().zip(fresh.values()) {
            assert!((x - y).abs() < 1e-13);
        }
    }
}
