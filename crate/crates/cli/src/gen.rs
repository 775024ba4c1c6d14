//! Deterministic random instances: Haar unitaries, bounded-spectrum HPD
//! matrices, simplex weights, and round-robin positive unital maps.
//!
//! Every trial derives its own ChaCha stream from `(seed, trial_index)` via a
//! splitmix-style hash, so trials are independent, reorderable, and bitwise
//! reproducible. Within one trial the draw order is fixed: weights, then the
//! matrices, then the map.

use anyhow::Context;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use meanforge::hpd::HpdMatrix;
use meanforge::maps::{make_map, MapKind, UcpMap};
use meanforge::matrix::ComplexMatrix;
use meanforge::means::{MatrixTuple, WeightVector};

use crate::config::TrialConfig;

/// Map kinds cycled through by trial index, in order.
pub const MAP_KIND_NAMES: [&str; 7] =
    ["identity", "unitary", "pinching", "depolarizing", "compression", "convex", "random"];

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The per-trial random stream for `(seed, index)`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut state = seed ^ index.wrapping_mul(0xA076_1D64_78BD_642F);
    let mut bytes = [0u8; 32];
    for chunk in bytes.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(bytes)
}

fn complex_gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix<f64> {
    let scale = 0.5f64.sqrt();
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(re * scale, im * scale)
    })
}

/// Approximately Haar-distributed unitary: modified Gram-Schmidt (with one
/// re-orthogonalization pass) applied to a complex Gaussian matrix. The
/// triangular factor's diagonal is real and positive by construction, which
/// is exactly the phase convention that makes the factorization Haar.
pub fn haar_unitary(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix<f64> {
    assert!(n >= 1, "unitary dimension must be positive");
    let g = complex_gaussian(n, n, rng);
    // Columns as vectors for in-place orthogonalization.
    let mut cols: Vec<Vec<Complex<f64>>> =
        (0..n).map(|j| (0..n).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: Complex<f64> =
                    (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..n {
                    let step = proj * cols[k][i];
                    cols[j][i] -= step;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 0.0, "Gaussian column collapsed during orthogonalization");
        for z in &mut cols[j] {
            *z /= norm;
        }
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Random HPD matrix with spectrum in `[m, M]`: uniform eigenvalues
/// conjugated by a Haar unitary. `tight` forces the endpoints into the
/// spectrum; equal bounds return `m I` exactly.
pub fn random_hpd(
    n: usize,
    m: f64,
    big_m: f64,
    tight: bool,
    rng: &mut ChaCha8Rng,
) -> anyhow::Result<HpdMatrix<f64>> {
    if m == big_m {
        return Ok(HpdMatrix::diag(&vec![m; n])?);
    }
    let mut values: Vec<f64> = (0..n).map(|_| m + (big_m - m) * rng.gen::<f64>()).collect();
    if tight {
        if n == 1 {
            values[0] = if rng.gen::<bool>() { m } else { big_m };
        } else {
            values[0] = m;
            values[n - 1] = big_m;
        }
    }
    let u = haar_unitary(n, rng);
    let lambda = ComplexMatrix::diag(&values);
    let a = lambda.congruence(&u.adjoint()).symmetrized();
    Ok(HpdMatrix::new(a)?)
}

/// Weights from normalized unit exponentials: uniform over the simplex, so
/// both near-uniform and skewed weight vectors occur.
pub fn random_weights(n: usize, rng: &mut ChaCha8Rng) -> anyhow::Result<WeightVector<f64>> {
    loop {
        let draws: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let sum: f64 = draws.iter().sum();
        if sum > 0.0 {
            return Ok(WeightVector::new(draws.iter().map(|d| d / sum).collect())?);
        }
    }
}

/// The `index`-th map kind of the round-robin cycle, instantiated at `dim`.
pub fn map_for_trial(
    dim: usize,
    kind_index: usize,
    rng: &mut ChaCha8Rng,
) -> anyhow::Result<(UcpMap<f64>, &'static str)> {
    let name = MAP_KIND_NAMES[kind_index % MAP_KIND_NAMES.len()];
    let map = map_by_name(name, dim, rng)?;
    Ok((map, name))
}

/// Builds the named map kind at dimension `dim`, drawing any randomness from
/// `rng`.
pub fn map_by_name(
    name: &str,
    dim: usize,
    rng: &mut ChaCha8Rng,
) -> anyhow::Result<UcpMap<f64>> {
    let kind = match name {
        "identity" => MapKind::Identity(dim),
        "unitary" => MapKind::UnitaryConj(haar_unitary(dim, rng)),
        "pinching" => {
            if dim == 1 {
                MapKind::Pinching(vec![1])
            } else {
                MapKind::Pinching(vec![dim / 2, dim - dim / 2])
            }
        }
        "depolarizing" => MapKind::Depolarizing(dim),
        "compression" => {
            let out = dim.div_ceil(2);
            let u = haar_unitary(dim, rng);
            let isometry = ComplexMatrix::from_fn(dim, out, |i, j| u[(i, j)]);
            MapKind::Compression(isometry)
        }
        "convex" => MapKind::Convex(vec![
            (0.5, make_map(MapKind::UnitaryConj(haar_unitary(dim, rng)))?),
            (0.3, make_map(MapKind::Depolarizing(dim))?),
            (0.2, make_map(MapKind::Identity(dim))?),
        ]),
        "random" => MapKind::Random { dim, out_dim: dim, kraus_count: 4, seed: rng.gen() },
        other => anyhow::bail!("unknown map kind {other:?} (expected one of {MAP_KIND_NAMES:?})"),
    };
    Ok(make_map(kind)?)
}

/// One generated trial: the tuple, the map, and the shape fingerprint.
pub struct TrialInstance {
    pub tuple: MatrixTuple<f64>,
    pub map: UcpMap<f64>,
    pub map_kind: &'static str,
    pub dim: usize,
    pub n: usize,
}

/// Deterministically generates trial `index` of `cfg`.
///
/// Dimension, tuple size and map kind cycle with the index so every
/// combination is exercised; matrix and weight content comes from the
/// per-trial stream.
pub fn gen_instance(cfg: &TrialConfig, index: usize) -> anyhow::Result<TrialInstance> {
    let dim = cfg.dims[index % cfg.dims.len()];
    let n = cfg.tuple_sizes[(index / cfg.dims.len()) % cfg.tuple_sizes.len()];
    let (m, big_m) = cfg.bounds;
    let mut rng = trial_rng(cfg.seed, index as u64);

    let weights = random_weights(n, &mut rng)?;
    let mut matrices = Vec::with_capacity(n);
    for k in 0..n {
        matrices.push(
            random_hpd(dim, m, big_m, cfg.tight, &mut rng)
                .with_context(|| format!("matrix {k} of trial {index}"))?,
        );
    }
    let tuple = MatrixTuple::with_bounds(matrices, weights, m, big_m)?;
    let (map, map_kind) = map_for_trial(dim, index, &mut rng)?;
    Ok(TrialInstance { tuple, map, map_kind, dim, n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = {
            let mut r = trial_rng(7, 3);
            (0..4).map(|_| r.gen()).collect()
        };
        let b: Vec<u64> = {
            let mut r = trial_rng(7, 3);
            (0..4).map(|_| r.gen()).collect()
        };
        let c: Vec<u64> = {
            let mut r = trial_rng(7, 4);
            (0..4).map(|_| r.gen()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn haar_unitary_is_unitary_and_deterministic() {
        for n in [1, 2, 5] {
            let mut rng = trial_rng(11, n as u64);
            let u = haar_unitary(n, &mut rng);
            let gram = &u.adjoint() * &u;
            let defect = gram.max_abs_diff(&ComplexMatrix::identity(n));
            assert!(defect < 1e-12, "n = {n}: defect {defect:e}");
        }
        let u1 = haar_unitary(3, &mut trial_rng(5, 0));
        let u2 = haar_unitary(3, &mut trial_rng(5, 0));
        assert_eq!(u1.max_abs_diff(&u2), 0.0);
    }

    #[test]
    fn random_hpd_respects_bounds() {
        let mut rng = trial_rng(1, 1);
        let a = random_hpd(5, 1.0, 10.0, false, &mut rng).unwrap();
        assert!(a.lambda_min() >= 1.0 - 1e-10);
        assert!(a.lambda_max() <= 10.0 + 1e-10);
    }

    #[test]
    fn tight_instances_hit_both_endpoints() {
        let mut rng = trial_rng(2, 9);
        let a = random_hpd(2, 1.0, 4.0, true, &mut rng).unwrap();
        assert!((a.lambda_min() - 1.0).abs() < 1e-10);
        assert!((a.lambda_max() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn degenerate_bounds_give_exact_scalar_matrix() {
        let mut rng = trial_rng(3, 3);
        let a = random_hpd(3, 2.0, 2.0, false, &mut rng).unwrap();
        assert_eq!(a.matrix().max_abs_diff(&ComplexMatrix::identity(3).scale(2.0)), 0.0);
    }

    #[test]
    fn weights_are_normalized() {
        let mut rng = trial_rng(4, 0);
        let w = random_weights(5, &mut rng).unwrap();
        let sum: f64 = w.as_slice().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-12);
        assert!(w.as_slice().iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn instances_are_bitwise_reproducible() {
        let cfg = TrialConfig::standard((1.0, 2.0));
        let a = gen_instance(&cfg, 12).unwrap();
        let b = gen_instance(&cfg, 12).unwrap();
        assert_eq!(a.dim, b.dim);
        assert_eq!(a.n, b.n);
        assert_eq!(a.map_kind, b.map_kind);
        for (x, y) in a.tuple.matrices().iter().zip(b.tuple.matrices()) {
            assert_eq!(x.matrix().max_abs_diff(y.matrix()), 0.0);
        }
        for (k_a, k_b) in a.map.kraus().iter().zip(b.map.kraus()) {
            assert_eq!(k_a.max_abs_diff(k_b), 0.0);
        }
    }

    #[test]
    fn map_kinds_cycle_with_the_index() {
        let cfg = TrialConfig::standard((1.0, 2.0));
        for (i, expected) in MAP_KIND_NAMES.iter().enumerate() {
            let inst = gen_instance(&cfg, i).unwrap();
            assert_eq!(inst.map_kind, *expected);
            assert_eq!(inst.map.in_dim(), inst.dim);
        }
    }

    #[test]
    fn every_map_kind_is_unital() {
        for (i, name) in MAP_KIND_NAMES.iter().enumerate() {
            let mut rng = trial_rng(21, i as u64);
            let map = map_by_name(name, 4, &mut rng).unwrap();
            assert!(map.unitality_defect() < 1e-10, "{name}");
        }
    }
}
