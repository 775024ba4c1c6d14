//! Weighted means of tuples of positive definite matrices.
//!
//! For a weight vector `w` and matrices `A_1..A_n` this module provides:
//!
//! * the arithmetic mean `sum_i w_i A_i` and the harmonic mean
//!   `(sum_i w_i A_i^{-1})^{-1}`;
//! * two-variable weighted means: arithmetic `A nabla_t B`, geometric
//!   `A #_t B = A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}`, harmonic `A !_t B`;
//! * the power mean `P_t(w; A)`, the unique positive definite solution of
//!   `X = sum_i w_i (X #_t A_i)` for `t` in `(0, 1]`, extended to negative
//!   `t` by `P_t = P_{-t}(w; A^{-1})^{-1}`;
//! * the Karcher mean `Lambda(w; A)`, the unique positive definite zero of
//!   the gradient field `X -> sum_i w_i log(X^{-1/2} A_i X^{-1/2})`.
//!
//! `P_t` is solved by the natural fixed-point (Picard) iteration, which
//! contracts in the Thompson metric with ratio at most `1 - t`; the Karcher
//! mean by the damped exponential-barycenter iteration
//! `X <- X^{1/2} exp(theta G(X)) X^{1/2}`. Both report an a-posteriori
//! certificate alongside the result.

use serde::Serialize;

use crate::eigen::eigh;
use crate::error::{Error, Result};
use crate::hpd::{thompson_distance, HpdMatrix};
use crate::matrix::ComplexMatrix;
use crate::scalar::{real, tol, Real};

/// Normalized nonnegative weights.
#[derive(Clone, Debug)]
pub struct WeightVector<T: Real> {
    weights: Vec<T>,
}

impl<T: Real> WeightVector<T> {
    /// Validates nonnegativity and that the sum is within `1e-12` of one,
    /// then normalizes exactly.
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::BadParameter("weight vector is empty".into()));
        }
        if weights.iter().any(|w| *w < T::zero() || !w.is_finite()) {
            return Err(Error::BadParameter(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let sum: T = weights.iter().copied().sum();
        if (sum - T::one()).abs() > tol::<T>(1e-12) {
            return Err(Error::BadParameter(format!(
                "weights must sum to 1 (got {sum})"
            )));
        }
        let weights = weights.into_iter().map(|w| w / sum).collect();
        Ok(Self { weights })
    }

    /// Uniform weights `1/n`.
    pub fn uniform(n: usize) -> Self {
        let w = T::one() / T::from_usize(n).expect("n fits the scalar");
        Self {
            weights: vec![w; n],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.weights
    }
}

/// A weighted tuple of positive definite matrices of a common dimension,
/// together with spectral bounds `0 < m <= M` valid for every member.
#[derive(Clone, Debug)]
pub struct MatrixTuple<T: Real> {
    matrices: Vec<HpdMatrix<T>>,
    weights: WeightVector<T>,
    bounds: (T, T),
}

impl<T: Real> MatrixTuple<T> {
    /// Builds a tuple with tight bounds read off the actual spectra.
    pub fn new(matrices: Vec<HpdMatrix<T>>, weights: WeightVector<T>) -> Result<Self> {
        Self::validate_shapes(&matrices, &weights)?;
        let m = matrices
            .iter()
            .map(HpdMatrix::lambda_min)
            .fold(T::infinity(), T::min);
        let big_m = matrices
            .iter()
            .map(HpdMatrix::lambda_max)
            .fold(T::zero(), T::max);
        Ok(Self {
            matrices,
            weights,
            bounds: (m, big_m),
        })
    }

    /// Builds a tuple with caller-declared bounds, validated against the
    /// spectra (with a small relative slop for generator rounding).
    pub fn with_bounds(
        matrices: Vec<HpdMatrix<T>>,
        weights: WeightVector<T>,
        m: T,
        big_m: T,
    ) -> Result<Self> {
        Self::validate_shapes(&matrices, &weights)?;
        if !(m > T::zero() && big_m >= m) {
            return Err(Error::BadBounds(format!(
                "need 0 < m <= M, got m = {m}, M = {big_m}"
            )));
        }
        let slop = tol::<T>(1e-9);
        for (i, a) in matrices.iter().enumerate() {
            if a.lambda_min() < m - slop * (T::one() + m)
                || a.lambda_max() > big_m + slop * (T::one() + big_m)
            {
                return Err(Error::BadBounds(format!(
                    "matrix {i} has spectrum [{:e}, {:e}] outside [{m:e}, {big_m:e}]",
                    a.lambda_min(),
                    a.lambda_max()
                )));
            }
        }
        Ok(Self {
            matrices,
            weights,
            bounds: (m, big_m),
        })
    }

    fn validate_shapes(matrices: &[HpdMatrix<T>], weights: &WeightVector<T>) -> Result<()> {
        if matrices.is_empty() {
            return Err(Error::BadParameter("matrix tuple is empty".into()));
        }
        if matrices.len() != weights.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices but {} weights",
                matrices.len(),
                weights.len()
            )));
        }
        let dim = matrices[0].dim();
        if matrices.iter().any(|a| a.dim() != dim) {
            return Err(Error::DimensionMismatch(
                "matrices in a tuple must share one dimension".into(),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].dim()
    }

    pub fn matrices(&self) -> &[HpdMatrix<T>] {
        &self.matrices
    }

    pub fn weights(&self) -> &WeightVector<T> {
        &self.weights
    }

    /// Declared spectral bounds `(m, M)`.
    pub fn bounds(&self) -> (T, T) {
        self.bounds
    }

    /// The tuple of inverses with the same weights; bounds `(1/M, 1/m)`.
    pub fn inverted(&self) -> Self {
        Self {
            matrices: self.matrices.iter().map(HpdMatrix::inverse).collect(),
            weights: self.weights.clone(),
            bounds: (self.bounds.1.recip(), self.bounds.0.recip()),
        }
    }
}

/// Iteration controls for the mean solvers.
#[derive(Clone, Copy, Debug)]
pub struct SolverOptions<T> {
    /// Power mean: stop once the Thompson length of an iteration step is
    /// at most this (further sharpened by the contraction ratio; see
    /// [`power_mean_with`]).
    pub step_tol: T,
    /// Karcher mean: stop once the gradient's Frobenius norm is at most
    /// `residual_tol * dim`.
    pub residual_tol: T,
    pub max_iterations: usize,
    /// Smallest admissible damping for the Karcher step.
    pub theta_floor: T,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            step_tol: tol(1e-12),
            residual_tol: tol(1e-10),
            max_iterations: 10_000,
            theta_floor: real(1.0 / 64.0),
        }
    }
}

/// A-posteriori account of a solver run.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SolveReport<T> {
    pub iterations: usize,
    /// Thompson length of the final accepted step.
    pub final_step: T,
    /// Certificate at the returned point: for the power mean the Thompson
    /// distance `d(X, sum_i w_i (X #_t A_i))`, for the Karcher mean the
    /// gradient's Frobenius norm.
    pub residual: T,
    pub converged: bool,
}

impl<T: Real> SolveReport<T> {
    fn exact() -> Self {
        Self {
            iterations: 0,
            final_step: T::zero(),
            residual: T::zero(),
            converged: true,
        }
    }
}

/// `sum_i w_i A_i`.
pub fn arithmetic_mean<T: Real>(tuple: &MatrixTuple<T>) -> Result<HpdMatrix<T>> {
    let mut sum = ComplexMatrix::zeros(tuple.dim(), tuple.dim());
    for (a, &w) in tuple.matrices().iter().zip(tuple.weights().as_slice()) {
        sum.add_scaled_assign(w, a.matrix());
    }
    HpdMatrix::new(sum)
}

/// `(sum_i w_i A_i^{-1})^{-1}`.
pub fn harmonic_mean<T: Real>(tuple: &MatrixTuple<T>) -> Result<HpdMatrix<T>> {
    let mut sum = ComplexMatrix::zeros(tuple.dim(), tuple.dim());
    for (a, &w) in tuple.matrices().iter().zip(tuple.weights().as_slice()) {
        sum.add_scaled_assign(w, a.inverse().matrix());
    }
    Ok(HpdMatrix::new(sum)?.inverse())
}

/// Which two-variable weighted mean to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeanKind {
    /// `(1-t) A + t B`.
    Arithmetic,
    /// `A #_t B`.
    Geometric,
    /// `((1-t) A^{-1} + t B^{-1})^{-1}`.
    Harmonic,
}

/// Two-variable weighted mean at parameter `t` in `[0, 1]`.
///
/// At the endpoints every kind returns the endpoint matrix exactly.
pub fn two_mean<T: Real>(
    a: &HpdMatrix<T>,
    b: &HpdMatrix<T>,
    t: T,
    kind: MeanKind,
) -> Result<HpdMatrix<T>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "two_mean: dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    if !(t >= T::zero() && t <= T::one()) {
        return Err(Error::BadT(format!("two_mean needs t in [0, 1], got {t}")));
    }
    if t == T::zero() {
        return Ok(a.clone());
    }
    if t == T::one() {
        return Ok(b.clone());
    }
    match kind {
        MeanKind::Arithmetic => {
            let mut sum = a.matrix().scale(T::one() - t);
            sum.add_scaled_assign(t, b.matrix());
            HpdMatrix::new(sum)
        }
        MeanKind::Geometric => {
            let inner = HpdMatrix::new(b.matrix().congruence(a.inv_sqrt().matrix()))?;
            HpdMatrix::new(inner.power(t).matrix().congruence(a.sqrt().matrix()))
        }
        MeanKind::Harmonic => {
            let mut sum = a.inverse().matrix().scale(T::one() - t);
            sum.add_scaled_assign(t, b.inverse().matrix());
            Ok(HpdMatrix::new(sum)?.inverse())
        }
    }
}

/// `sum_i w_i (X^{-1/2} A_i X^{-1/2})^t` — the Picard map conjugated to
/// `X`'s frame. `X # F(X) = X` exactly at the power mean.
fn picard_inner<T: Real>(x: &HpdMatrix<T>, tuple: &MatrixTuple<T>, t: T) -> Result<ComplexMatrix<T>> {
    let inv_sqrt = x.inv_sqrt();
    let mut sum = ComplexMatrix::zeros(x.dim(), x.dim());
    for (a, &w) in tuple.matrices().iter().zip(tuple.weights().as_slice()) {
        let conj = HpdMatrix::new(a.matrix().congruence(inv_sqrt.matrix()))?;
        sum.add_scaled_assign(w, conj.power(t).matrix());
    }
    Ok(sum)
}

/// Largest `|log lambda|` over the spectrum of a positive definite matrix
/// given as raw entries.
fn log_spectral_radius<T: Real>(m: &ComplexMatrix<T>) -> Result<T> {
    let e = eigh(m)?;
    if e.lambda_min() <= T::zero() {
        return Err(Error::Domain(
            "expected a positive definite iteration matrix".into(),
        ));
    }
    Ok(e.values()
        .iter()
        .map(|l| l.ln().abs())
        .fold(T::zero(), T::max))
}

/// Power mean `P_t(w; A)` for `t` in `[-1, 1] \ {0}` with default options.
pub fn power_mean<T: Real>(
    tuple: &MatrixTuple<T>,
    t: T,
) -> Result<(HpdMatrix<T>, SolveReport<T>)> {
    power_mean_with(tuple, t, &SolverOptions::default())
}

/// Power mean with explicit solver options.
///
/// `t = 1` and `t = -1` return the arithmetic and harmonic means exactly.
/// For `t` in `(0, 1)` the Picard iteration `X <- X^{1/2} S X^{1/2}`,
/// `S = sum_i w_i (X^{-1/2} A_i X^{-1/2})^t`, starts at the arithmetic
/// mean; its step length `d_T(X_k, X_{k+1}) = max |log lambda(S)|` is free
/// once `S` is diagonalized. Because the map contracts with ratio
/// `q <= 1 - t`, iteration stops at `step <= step_tol * min(1, t/(1-t))`,
/// which bounds the distance to the true fixed point by `step_tol`.
/// Negative `t` solves on the inverted tuple and inverts the result; the
/// report then describes the inverted problem.
pub fn power_mean_with<T: Real>(
    tuple: &MatrixTuple<T>,
    t: T,
    opts: &SolverOptions<T>,
) -> Result<(HpdMatrix<T>, SolveReport<T>)> {
    if t == T::zero() || t.abs() > T::one() || !t.is_finite() {
        return Err(Error::BadT(format!(
            "power mean needs t in [-1, 1] excluding 0, got {t}"
        )));
    }
    if t == T::one() {
        return Ok((arithmetic_mean(tuple)?, SolveReport::exact()));
    }
    if t == -T::one() {
        return Ok((harmonic_mean(tuple)?, SolveReport::exact()));
    }
    if t < T::zero() {
        let (inv_solution, report) = power_mean_with(&tuple.inverted(), -t, opts)?;
        return Ok((inv_solution.inverse(), report));
    }

    let stop = opts.step_tol * (t / (T::one() - t)).min(T::one());
    let mut x = arithmetic_mean(tuple)?;
    let mut iterations = 0usize;
    let mut final_step;
    loop {
        if iterations >= opts.max_iterations {
            return Err(Error::NoConvergence {
                what: "power mean fixed-point iteration",
                iterations,
                residual: f64::NAN,
            });
        }
        let s = picard_inner(&x, tuple, t)?;
        // Cheap proxy first: while far from the fixed point the step is
        // certainly above `stop`, so the diagonalization of S can wait.
        let rough = (&s - &ComplexMatrix::identity(x.dim())).frobenius_norm();
        let coarse = rough
            > stop * T::from_usize(100 * x.dim()).unwrap();
        let step = if coarse { rough } else { log_spectral_radius(&s)? };
        x = HpdMatrix::new(s.congruence(x.sqrt().matrix()))?;
        iterations += 1;
        final_step = step;
        if !coarse && step <= stop {
            break;
        }
    }
    let residual = log_spectral_radius(&picard_inner(&x, tuple, t)?)?;
    Ok((
        x,
        SolveReport {
            iterations,
            final_step,
            residual,
            converged: true,
        },
    ))
}

/// Karcher gradient `sum_i w_i log(X^{-1/2} A_i X^{-1/2})` and its
/// Frobenius norm.
fn karcher_gradient<T: Real>(
    x: &HpdMatrix<T>,
    tuple: &MatrixTuple<T>,
) -> Result<(ComplexMatrix<T>, T)> {
    let inv_sqrt = x.inv_sqrt();
    let mut sum = ComplexMatrix::zeros(x.dim(), x.dim());
    for (a, &w) in tuple.matrices().iter().zip(tuple.weights().as_slice()) {
        let conj = HpdMatrix::new(a.matrix().congruence(inv_sqrt.matrix()))?;
        sum.add_scaled_assign(w, &conj.log_m());
    }
    // The exact gradient is Hermitian; near the mean the sum cancels to
    // zero, where leftover rounding skew would otherwise dominate it.
    let sum = sum.symmetrized();
    let norm = sum.frobenius_norm();
    Ok((sum, norm))
}

/// Frobenius norm of the Karcher gradient at `x`; zero exactly at the
/// Karcher mean.
pub fn karcher_residual<T: Real>(x: &HpdMatrix<T>, tuple: &MatrixTuple<T>) -> Result<T> {
    if x.dim() != tuple.dim() {
        return Err(Error::DimensionMismatch(format!(
            "karcher_residual: point is {}x{0} but tuple is {1}x{1}",
            x.dim(),
            tuple.dim()
        )));
    }
    Ok(karcher_gradient(x, tuple)?.1)
}

/// Karcher mean with default options.
pub fn karcher_mean<T: Real>(tuple: &MatrixTuple<T>) -> Result<(HpdMatrix<T>, SolveReport<T>)> {
    karcher_mean_with(tuple, &SolverOptions::default())
}

/// Karcher mean by the damped exponential-barycenter iteration
/// `X <- X^{1/2} exp(theta G(X)) X^{1/2}` from the arithmetic mean.
///
/// The damping `theta` starts at one, halves whenever the gradient norm
/// increases (floor `theta_floor`), and doubles back toward one after an
/// accepted step. Stops when the gradient norm is at most
/// `residual_tol * dim`.
pub fn karcher_mean_with<T: Real>(
    tuple: &MatrixTuple<T>,
    opts: &SolverOptions<T>,
) -> Result<(HpdMatrix<T>, SolveReport<T>)> {
    let tol_res = opts.residual_tol * T::from_usize(tuple.dim()).unwrap();
    let mut x = arithmetic_mean(tuple)?;
    let (mut g, mut res) = karcher_gradient(&x, tuple)?;
    let mut theta = T::one();
    let mut iterations = 0usize;
    let mut final_step = T::zero();
    while res > tol_res {
        if iterations >= opts.max_iterations {
            return Err(Error::NoConvergence {
                what: "karcher mean gradient iteration",
                iterations,
                residual: res.to_f64().unwrap_or(f64::NAN),
            });
        }
        let ge = eigh(&g)?;
        let g_inf = ge
            .values()
            .iter()
            .map(|l| l.abs())
            .fold(T::zero(), T::max);
        let sqrt_x = x.sqrt();
        loop {
            let exp_values: Vec<T> = ge.values().iter().map(|&l| (theta * l).exp()).collect();
            let step_mat = HpdMatrix::from_spectrum(ge.vectors(), exp_values);
            let candidate = HpdMatrix::new(step_mat.matrix().congruence(sqrt_x.matrix()))?;
            let (g_cand, res_cand) = karcher_gradient(&candidate, tuple)?;
            iterations += 1;
            let can_retry = theta > opts.theta_floor && iterations < opts.max_iterations;
            if res_cand > res && can_retry {
                theta = (theta / real(2.0)).max(opts.theta_floor);
                continue;
            }
            final_step = theta * g_inf;
            x = candidate;
            g = g_cand;
            res = res_cand;
            theta = (theta * real(2.0)).min(T::one());
            break;
        }
    }
    Ok((
        x,
        SolveReport {
            iterations,
            final_step,
            residual: res,
            converged: true,
        },
    ))
}

/// Thompson distances `d(P_t(w; A), Lambda(w; A))` for each `t` in
/// `t_seq`; every `t` must lie in `(0, 1]`. As `t` decreases to zero the
/// distances decrease to zero — the power means converge to the Karcher
/// mean.
pub fn power_mean_limit_check<T: Real>(
    tuple: &MatrixTuple<T>,
    t_seq: &[T],
) -> Result<Vec<(T, T)>> {
    for &t in t_seq {
        if !(t > T::zero() && t <= T::one()) {
            return Err(Error::BadT(format!(
                "limit check needs t in (0, 1], got {t}"
            )));
        }
    }
    let (karcher, _) = karcher_mean(tuple)?;
    let mut out = Vec::with_capacity(t_seq.len());
    for &t in t_seq {
        let (p, _) = power_mean(tuple, t)?;
        out.push((t, thompson_distance(&p, &karcher)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hpd::loewner_slack;
    use crate::matrix::Cx;

    type M = ComplexMatrix<f64>;

    fn hpd_diag(entries: &[f64]) -> HpdMatrix<f64> {
        HpdMatrix::diag(entries).unwrap()
    }

    fn scalar_tuple(values: &[f64], weights: &[f64]) -> MatrixTuple<f64> {
        let matrices = values.iter().map(|&v| hpd_diag(&[v])).collect();
        MatrixTuple::new(matrices, WeightVector::new(weights.to_vec()).unwrap()).unwrap()
    }

    fn noncommuting_pair() -> (HpdMatrix<f64>, HpdMatrix<f64>) {
        let mut a = M::zeros(2, 2);
        a[(0, 0)] = Cx::new(2.0, 0.0);
        a[(1, 1)] = Cx::new(2.0, 0.0);
        a[(0, 1)] = Cx::new(1.0, 0.0);
        a[(1, 0)] = Cx::new(1.0, 0.0);
        let mut b = M::zeros(2, 2);
        b[(0, 0)] = Cx::new(3.0, 0.0);
        b[(1, 1)] = Cx::new(1.0, 0.0);
        b[(0, 1)] = Cx::new(0.0, 0.5);
        b[(1, 0)] = Cx::new(0.0, -0.5);
        (HpdMatrix::new(a).unwrap(), HpdMatrix::new(b).unwrap())
    }

    #[test]
    fn weight_validation() {
        assert!(WeightVector::new(vec![0.5, 0.5]).is_ok());
        assert!(WeightVector::new(vec![1.0 - 1e-13, 1e-13]).is_ok());
        assert!(WeightVector::<f64>::new(vec![]).is_err());
        assert!(WeightVector::new(vec![0.7, -0.1, 0.4]).is_err());
        assert!(WeightVector::new(vec![0.4, 0.4]).is_err());
        assert!(WeightVector::new(vec![0.0, 1.0]).is_ok()); // zero weights allowed
    }

    #[test]
    fn tuple_bounds_tight_and_declared() {
        let t = MatrixTuple::new(
            vec![hpd_diag(&[1.0, 2.0]), hpd_diag(&[0.5, 3.0])],
            WeightVector::uniform(2),
        )
        .unwrap();
        assert_eq!(t.bounds(), (0.5, 3.0));

        let ok = MatrixTuple::with_bounds(
            vec![hpd_diag(&[1.0, 2.0])],
            WeightVector::uniform(1),
            1.0,
            2.0,
        );
        assert!(ok.is_ok());
        let bad = MatrixTuple::with_bounds(
            vec![hpd_diag(&[1.0, 2.0])],
            WeightVector::uniform(1),
            1.5,
            2.0,
        );
        assert!(matches!(bad, Err(Error::BadBounds(_))));
    }

    #[test]
    fn arithmetic_mean_oracles() {
        // Equal matrices reproduce themselves.
        let c = hpd_diag(&[2.0, 5.0]);
        let t = MatrixTuple::new(vec![c.clone(), c.clone()], WeightVector::uniform(2)).unwrap();
        assert!(arithmetic_mean(&t).unwrap().matrix().max_abs_diff(c.matrix()) < 1e-15);

        // Weighted diagonal: (1/4, 3/4) of diag(4,8), diag(8,4) -> diag(7,5).
        let t = MatrixTuple::new(
            vec![hpd_diag(&[4.0, 8.0]), hpd_diag(&[8.0, 4.0])],
            WeightVector::new(vec![0.25, 0.75]).unwrap(),
        )
        .unwrap();
        let mean = arithmetic_mean(&t).unwrap();
        assert!(mean.matrix().max_abs_diff(&M::diag(&[7.0, 5.0])) < 1e-14);
    }

    #[test]
    fn harmonic_mean_oracles() {
        // Scalars (1, 3) with equal weights: (0.5 + 0.5/3)^{-1} = 1.5.
        let t = scalar_tuple(&[1.0, 3.0], &[0.5, 0.5]);
        let h = harmonic_mean(&t).unwrap();
        assert!((h.matrix()[(0, 0)].re - 1.5).abs() < 1e-14);

        // Single matrix: the mean is the matrix.
        let single = MatrixTuple::new(vec![hpd_diag(&[2.0, 7.0])], WeightVector::uniform(1)).unwrap();
        assert!(
            harmonic_mean(&single)
                .unwrap()
                .matrix()
                .max_abs_diff(&M::diag(&[2.0, 7.0]))
                < 1e-13
        );
    }

    #[test]
    fn two_mean_geometric_oracles() {
        // Commuting: I #_{1/2} diag(4,9) = diag(2,3).
        let id = HpdMatrix::identity(2);
        let b = hpd_diag(&[4.0, 9.0]);
        let g = two_mean(&id, &b, 0.5, MeanKind::Geometric).unwrap();
        assert!(g.matrix().max_abs_diff(&M::diag(&[2.0, 3.0])) < 1e-13);

        // A #_{1/2} I = A^{1/2}.
        let (a, _) = noncommuting_pair();
        let g = two_mean(&a, &HpdMatrix::identity(2), 0.5, MeanKind::Geometric).unwrap();
        assert!(g.matrix().max_abs_diff(a.sqrt().matrix()) < 1e-13);
    }

    #[test]
    fn two_mean_endpoints_are_exact() {
        let (a, b) = noncommuting_pair();
        for kind in [MeanKind::Arithmetic, MeanKind::Geometric, MeanKind::Harmonic] {
            assert_eq!(two_mean(&a, &b, 0.0, kind).unwrap().matrix(), a.matrix());
            assert_eq!(two_mean(&a, &b, 1.0, kind).unwrap().matrix(), b.matrix());
        }
    }

    #[test]
    fn two_mean_rejects_t_outside_unit_interval() {
        let (a, b) = noncommuting_pair();
        assert!(matches!(
            two_mean(&a, &b, -0.1, MeanKind::Geometric),
            Err(Error::BadT(_))
        ));
        assert!(matches!(
            two_mean(&a, &b, 1.5, MeanKind::Arithmetic),
            Err(Error::BadT(_))
        ));
    }

    #[test]
    fn two_mean_ordering_harmonic_geometric_arithmetic() {
        let (a, b) = noncommuting_pair();
        for t in [0.25, 0.5, 0.75] {
            let h = two_mean(&a, &b, t, MeanKind::Harmonic).unwrap();
            let g = two_mean(&a, &b, t, MeanKind::Geometric).unwrap();
            let ar = two_mean(&a, &b, t, MeanKind::Arithmetic).unwrap();
            assert!(loewner_slack(h.matrix(), g.matrix()).unwrap().holds);
            assert!(loewner_slack(g.matrix(), ar.matrix()).unwrap().holds);
        }
    }

    #[test]
    fn power_mean_scalar_closed_form() {
        let t = scalar_tuple(&[1.0, 9.0], &[0.5, 0.5]);
        for tt in [1.0, 0.5, 0.1, -0.5, -1.0] {
            let (p, report) = power_mean(&t, tt).unwrap();
            let expected = (0.5 * 1.0_f64.powf(tt) + 0.5 * 9.0_f64.powf(tt)).powf(1.0 / tt);
            let got = p.matrix()[(0, 0)].re;
            assert!(
                (got - expected).abs() <= 1e-12 * expected,
                "t = {tt}: got {got}, expected {expected}"
            );
            assert!(report.converged);
        }
        // The t = 1/2 case in closed form: ((1 + 3)/2)^2 = 4.
        let (p, _) = power_mean(&t, 0.5).unwrap();
        assert!((p.matrix()[(0, 0)].re - 4.0).abs() < 1e-12 * 4.0);
    }

    #[test]
    fn power_mean_endpoints_short_circuit() {
        let t = scalar_tuple(&[2.0, 8.0], &[0.25, 0.75]);
        let (p1, r1) = power_mean(&t, 1.0).unwrap();
        assert_eq!(
            p1.matrix().max_abs_diff(arithmetic_mean(&t).unwrap().matrix()),
            0.0
        );
        assert_eq!(r1.iterations, 0);
        let (pm1, _) = power_mean(&t, -1.0).unwrap();
        assert_eq!(
            pm1.matrix().max_abs_diff(harmonic_mean(&t).unwrap().matrix()),
            0.0
        );
    }

    #[test]
    fn power_mean_rejects_bad_t() {
        let t = scalar_tuple(&[1.0, 2.0], &[0.5, 0.5]);
        for bad in [0.0, 1.5, -1.01, f64::NAN] {
            assert!(matches!(power_mean(&t, bad), Err(Error::BadT(_))), "t = {bad}");
        }
    }

    #[test]
    fn power_mean_commuting_diagonal_oracle() {
        let t = MatrixTuple::new(
            vec![hpd_diag(&[1.0, 4.0]), hpd_diag(&[9.0, 1.0])],
            WeightVector::uniform(2),
        )
        .unwrap();
        let (p, _) = power_mean(&t, 0.5).unwrap();
        // Entrywise scalar power means: ((1+3)/2)^2 = 4, ((2+1)/2)^2 = 2.25.
        assert!(p.matrix().max_abs_diff(&M::diag(&[4.0, 2.25])) < 1e-12 * 4.0);
    }

    #[test]
    fn power_mean_single_matrix_is_fixed() {
        let single = MatrixTuple::new(vec![hpd_diag(&[3.0, 5.0])], WeightVector::uniform(1)).unwrap();
        for t in [0.5, 0.1, -0.5] {
            let (p, _) = power_mean(&single, t).unwrap();
            assert!(p.matrix().max_abs_diff(&M::diag(&[3.0, 5.0])) < 1e-12);
        }
    }

    #[test]
    fn power_mean_certificate_is_small() {
        let (a, b) = noncommuting_pair();
        let t = MatrixTuple::new(
            vec![a, b, hpd_diag(&[0.5, 4.0])],
            WeightVector::new(vec![0.2, 0.5, 0.3]).unwrap(),
        )
        .unwrap();
        for tt in [0.5, 0.1, -0.5] {
            let (_, report) = power_mean(&t, tt).unwrap();
            assert!(
                report.residual <= 1e-10,
                "t = {tt}: residual {}",
                report.residual
            );
        }
    }

    #[test]
    fn power_mean_sandwiched_between_harmonic_and_arithmetic() {
        let (a, b) = noncommuting_pair();
        let t = MatrixTuple::new(vec![a, b], WeightVector::new(vec![0.3, 0.7]).unwrap()).unwrap();
        let h = harmonic_mean(&t).unwrap();
        let ar = arithmetic_mean(&t).unwrap();
        for tt in [0.5, 0.1, -0.5, 1.0, -1.0] {
            let (p, _) = power_mean(&t, tt).unwrap();
            assert!(loewner_slack(h.matrix(), p.matrix()).unwrap().holds, "t = {tt}");
            assert!(loewner_slack(p.matrix(), ar.matrix()).unwrap().holds, "t = {tt}");
        }
    }

    #[test]
    fn karcher_mean_commuting_oracle() {
        let t = MatrixTuple::new(
            vec![hpd_diag(&[1.0, 4.0]), hpd_diag(&[9.0, 1.0])],
            WeightVector::uniform(2),
        )
        .unwrap();
        let (k, report) = karcher_mean(&t).unwrap();
        // Entrywise geometric means: sqrt(9) = 3, sqrt(4) = 2.
        assert!(k.matrix().max_abs_diff(&M::diag(&[3.0, 2.0])) < 1e-9);
        assert!(report.converged);
        assert!(report.residual <= 1e-10 * 2.0);
    }

    #[test]
    fn karcher_mean_of_pair_is_geometric_mean() {
        let (a, b) = noncommuting_pair();
        let t = MatrixTuple::new(vec![a.clone(), b.clone()], WeightVector::uniform(2)).unwrap();
        let (k, _) = karcher_mean(&t).unwrap();
        let g = two_mean(&a, &b, 0.5, MeanKind::Geometric).unwrap();
        assert!(thompson_distance(&k, &g).unwrap() < 1e-8);
    }

    #[test]
    fn karcher_mean_permutation_invariance() {
        let (a, b) = noncommuting_pair();
        let c = hpd_diag(&[0.5, 2.5]);
        let t1 = MatrixTuple::new(
            vec![a.clone(), b.clone(), c.clone()],
            WeightVector::new(vec![0.2, 0.3, 0.5]).unwrap(),
        )
        .unwrap();
        let t2 = MatrixTuple::new(
            vec![c, a, b],
            WeightVector::new(vec![0.5, 0.2, 0.3]).unwrap(),
        )
        .unwrap();
        let (k1, _) = karcher_mean(&t1).unwrap();
        let (k2, _) = karcher_mean(&t2).unwrap();
        assert!(thompson_distance(&k1, &k2).unwrap() < 1e-9);
    }

    #[test]
    fn karcher_mean_self_duality() {
        let (a, b) = noncommuting_pair();
        let t = MatrixTuple::new(vec![a, b], WeightVector::new(vec![0.4, 0.6]).unwrap()).unwrap();
        let (k, _) = karcher_mean(&t).unwrap();
        let (k_inv, _) = karcher_mean(&t.inverted()).unwrap();
        assert!(thompson_distance(&k, &k_inv.inverse()).unwrap() < 1e-8);
    }

    #[test]
    fn karcher_residual_oracles() {
        // Single 1x1 matrix e^2 at the point 1: gradient log(e^2) = 2.
        let t = scalar_tuple(&[(2.0_f64).exp().powi(1)], &[1.0]);
        let x = HpdMatrix::identity(1);
        let r = karcher_residual(&x, &t).unwrap();
        assert!((r - 2.0).abs() < 1e-12);

        // At the mean itself the residual meets the solver contract.
        let (a, b) = noncommuting_pair();
        let t = MatrixTuple::new(vec![a, b], WeightVector::uniform(2)).unwrap();
        let (k, _) = karcher_mean(&t).unwrap();
        assert!(karcher_residual(&k, &t).unwrap() <= 1e-9 * 2.0);
    }

    #[test]
    fn limit_check_distances_decrease_to_zero() {
        let (a, b) = noncommuting_pair();
        let t = MatrixTuple::new(vec![a, b], WeightVector::new(vec![0.5, 0.5]).unwrap()).unwrap();
        let seq = power_mean_limit_check(&t, &[0.5, 0.1, 0.02]).unwrap();
        assert_eq!(seq.len(), 3);
        assert!(seq[0].1 > seq[1].1 && seq[1].1 > seq[2].1, "{seq:?}");
        assert!(seq[2].1 < 0.05 * seq[0].1.max(1e-6));
        assert!(matches!(
            power_mean_limit_check(&t, &[0.5, 0.0]),
            Err(Error::BadT(_))
        ));
    }

    #[test]
    fn limit_check_on_equal_tuple_is_zero() {
        let c = hpd_diag(&[2.0, 3.0]);
        let t = MatrixTuple::new(vec![c.clone(), c], WeightVector::uniform(2)).unwrap();
        for (_, d) in power_mean_limit_check(&t, &[0.5, 0.1]).unwrap() {
            assert!(d < 1e-9);
        }
    }
}
