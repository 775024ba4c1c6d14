//! Positive unital linear maps in Kraus form.
//!
//! A map `Phi(A) = sum_k V_k^* A V_k` with `sum_k V_k^* V_k = I` is
//! completely positive and unital, hence order preserving on Hermitian
//! matrices and spectrum-bound preserving: `m I <= A <= M I` implies
//! `m I <= Phi(A) <= M I`. The Kraus operators `V_k` map the in-space to
//! the out-space (`in_dim x out_dim`), so compressions to a smaller space
//! are expressed directly.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::hpd::HpdMatrix;
use crate::matrix::{ComplexMatrix, Cx};
use crate::means::MatrixTuple;
use crate::scalar::{real, tol, Real};

/// Frobenius budget for `sum_k V_k^* V_k - I` at construction.
const UNITALITY_TOL: f64 = 1e-10;

/// Positive unital map, stored as a validated Kraus family.
#[derive(Clone, Debug)]
pub struct UcpMap<T: Real> {
    kraus: Vec<ComplexMatrix<T>>,
    in_dim: usize,
    out_dim: usize,
}

impl<T: Real> UcpMap<T> {
    /// Wraps a Kraus family, validating shape consistency and unitality.
    pub fn new(kraus: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let (defect, ok) = verify_unital(&kraus)?;
        if !ok {
            return Err(Error::BadParameter(format!(
                "kraus family is not unital: defect {defect:.3e}"
            )));
        }
        let in_dim = kraus[0].rows();
        let out_dim = kraus[0].cols();
        Ok(Self {
            kraus,
            in_dim,
            out_dim,
        })
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix<T>] {
        &self.kraus
    }

    /// Re-measures the unitality defect of the stored family.
    pub fn unitality_defect(&self) -> T {
        verify_unital(&self.kraus).expect("stored family is shape-consistent").0
    }

    /// Applies the map to an arbitrary square matrix (the raw linear
    /// action, no positivity involved).
    pub fn apply_matrix(&self, a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if !a.is_square() || a.rows() != self.in_dim {
            return Err(Error::DimensionMismatch(format!(
                "map expects {0}x{0} input, got {1}x{2}",
                self.in_dim,
                a.rows(),
                a.cols()
            )));
        }
        let mut sum = ComplexMatrix::zeros(self.out_dim, self.out_dim);
        for v in &self.kraus {
            sum.add_scaled_assign(T::one(), &a.congruence(v));
        }
        Ok(sum)
    }

    /// Applies the map to a positive definite matrix; the image of a
    /// positive definite matrix under a unital Kraus family is again
    /// positive definite.
    pub fn apply(&self, a: &HpdMatrix<T>) -> Result<HpdMatrix<T>> {
        let sum = self.apply_matrix(a.matrix())?;
        // Hermitian by construction; drop the rounding skew before
        // re-validating as positive definite.
        HpdMatrix::new(sum.symmetrized())
    }

    /// Applies the map to every member of a tuple. Spectral bounds carry
    /// over unchanged: unital positive maps preserve them.
    pub fn apply_tuple(&self, tuple: &MatrixTuple<T>) -> Result<MatrixTuple<T>> {
        let mapped: Result<Vec<_>> = tuple.matrices().iter().map(|a| self.apply(a)).collect();
        let (m, big_m) = tuple.bounds();
        MatrixTuple::with_bounds(mapped?, tuple.weights().clone(), m, big_m)
    }
}

/// Unitality defect `||sum_k V_k^* V_k - I||_F` of a Kraus family and
/// whether it is within tolerance. Validates shapes only, so families
/// that fail unitality can still be measured.
pub fn verify_unital<T: Real>(kraus: &[ComplexMatrix<T>]) -> Result<(T, bool)> {
    if kraus.is_empty() {
        return Err(Error::BadParameter("kraus family is empty".into()));
    }
    let rows = kraus[0].rows();
    let cols = kraus[0].cols();
    if kraus.iter().any(|v| v.rows() != rows || v.cols() != cols) {
        return Err(Error::DimensionMismatch(
            "kraus operators must share one shape".into(),
        ));
    }
    let mut gram = ComplexMatrix::zeros(cols, cols);
    for v in kraus {
        gram.add_scaled_assign(T::one(), &(&v.adjoint() * v));
    }
    let defect = (&gram - &ComplexMatrix::identity(cols)).frobenius_norm();
    Ok((defect, defect <= tol::<T>(UNITALITY_TOL)))
}

/// Recipes for the stock maps used by the verification harness.
#[derive(Clone, Debug)]
pub enum MapKind<T: Real> {
    /// `A -> A`.
    Identity(usize),
    /// `A -> U^* A U` for a unitary `U`.
    UnitaryConj(ComplexMatrix<T>),
    /// Block-diagonal pinching with the given block sizes.
    Pinching(Vec<usize>),
    /// `A -> tr(A)/n I`.
    Depolarizing(usize),
    /// `A -> V^* A V` for an isometry `V` (columns orthonormal).
    Compression(ComplexMatrix<T>),
    /// Convex combination of maps with a common shape.
    Convex(Vec<(T, UcpMap<T>)>),
    /// Whitened family of `kraus_count` Gaussian operators; unital by
    /// construction, reproducible from the seed.
    Random {
        dim: usize,
        out_dim: usize,
        kraus_count: usize,
        seed: u64,
    },
}

/// Builds the Kraus family for a [`MapKind`].
pub fn make_map<T: Real>(kind: MapKind<T>) -> Result<UcpMap<T>> {
    match kind {
        MapKind::Identity(n) => {
            if n == 0 {
                return Err(Error::BadParameter("identity map needs dimension >= 1".into()));
            }
            UcpMap::new(vec![ComplexMatrix::identity(n)])
        }
        MapKind::UnitaryConj(u) => {
            if !u.is_square() {
                return Err(Error::DimensionMismatch("unitary must be square".into()));
            }
            let gram = &u.adjoint() * &u;
            let defect = (&gram - &ComplexMatrix::identity(u.dim())).frobenius_norm();
            if defect > tol::<T>(UNITALITY_TOL) {
                return Err(Error::BadParameter(format!(
                    "matrix is not unitary: defect {defect:.3e}"
                )));
            }
            UcpMap::new(vec![u])
        }
        MapKind::Pinching(blocks) => {
            if blocks.is_empty() || blocks.iter().any(|&b| b == 0) {
                return Err(Error::BadParameter(
                    "pinching needs nonempty positive block sizes".into(),
                ));
            }
            let n: usize = blocks.iter().sum();
            let mut kraus = Vec::with_capacity(blocks.len());
            let mut offset = 0;
            for &b in &blocks {
                let mut p = ComplexMatrix::zeros(n, n);
                for i in offset..offset + b {
                    p[(i, i)] = Cx::new(T::one(), T::zero());
                }
                kraus.push(p);
                offset += b;
            }
            UcpMap::new(kraus)
        }
        MapKind::Depolarizing(n) => {
            if n == 0 {
                return Err(Error::BadParameter(
                    "depolarizing map needs dimension >= 1".into(),
                ));
            }
            let scale = T::from_usize(n).unwrap().sqrt().recip();
            let mut kraus = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    let mut e = ComplexMatrix::zeros(n, n);
                    e[(i, j)] = Cx::new(scale, T::zero());
                    kraus.push(e);
                }
            }
            UcpMap::new(kraus)
        }
        MapKind::Compression(v) => {
            let gram = &v.adjoint() * &v;
            let defect = (&gram - &ComplexMatrix::identity(v.cols())).frobenius_norm();
            if defect > tol::<T>(UNITALITY_TOL) {
                return Err(Error::BadParameter(format!(
                    "compression needs orthonormal columns: defect {defect:.3e}"
                )));
            }
            UcpMap::new(vec![v])
        }
        MapKind::Convex(parts) => {
            if parts.is_empty() {
                return Err(Error::BadParameter("convex combination is empty".into()));
            }
            let sum: T = parts.iter().map(|(w, _)| *w).sum();
            if parts.iter().any(|(w, _)| *w < T::zero()) || (sum - T::one()).abs() > tol::<T>(1e-12)
            {
                return Err(Error::BadParameter(
                    "convex weights must be nonnegative and sum to 1".into(),
                ));
            }
            let (in_dim, out_dim) = (parts[0].1.in_dim(), parts[0].1.out_dim());
            if parts
                .iter()
                .any(|(_, m)| m.in_dim() != in_dim || m.out_dim() != out_dim)
            {
                return Err(Error::DimensionMismatch(
                    "convex combination needs maps of one common shape".into(),
                ));
            }
            let mut kraus = Vec::new();
            for (w, map) in &parts {
                let root = w.sqrt();
                for v in map.kraus() {
                    kraus.push(v.scale(root));
                }
            }
            UcpMap::new(kraus)
        }
        MapKind::Random {
            dim,
            out_dim,
            kraus_count,
            seed,
        } => {
            if dim == 0 || out_dim == 0 || kraus_count == 0 {
                return Err(Error::BadParameter(
                    "random map needs positive dimensions and at least one operator".into(),
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let raw: Vec<ComplexMatrix<T>> = (0..kraus_count)
                .map(|_| complex_gaussian(dim, out_dim, &mut rng))
                .collect();
            // Whiten: with S = sum_k B_k^* B_k, the family B_k S^{-1/2}
            // satisfies unitality exactly.
            let mut gram = ComplexMatrix::zeros(out_dim, out_dim);
            for b in &raw {
                gram.add_scaled_assign(T::one(), &(&b.adjoint() * b));
            }
            let s = HpdMatrix::new(gram.symmetrized())?;
            let w = s.inv_sqrt();
            let kraus = raw.iter().map(|b| b * w.matrix()).collect();
            UcpMap::new(kraus)
        }
    }
}

/// Matrix with independent standard complex Gaussian entries.
fn complex_gaussian<T: Real>(
    rows: usize,
    cols: usize,
    rng: &mut ChaCha8Rng,
) -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            m[(i, j)] = Complex::new(real::<T>(re), real::<T>(im)).scale(real(0.5f64.sqrt()));
        }
    }
    m
}

/// Free-function form of [`UcpMap::apply`].
pub fn apply_map<T: Real>(map: &UcpMap<T>, a: &HpdMatrix<T>) -> Result<HpdMatrix<T>> {
    map.apply(a)
}

/// Free-function form of [`UcpMap::apply_tuple`].
pub fn map_tuple<T: Real>(map: &UcpMap<T>, tuple: &MatrixTuple<T>) -> Result<MatrixTuple<T>> {
    map.apply_tuple(tuple)
}
