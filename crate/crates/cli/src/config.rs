//! Trial configuration for the randomized verification suite.

use anyhow::bail;
use serde::{Deserialize, Serialize};

use meanforge::checks::ParamGrid;
use meanforge::norm::NormKind;

/// Relative comparison tolerance when neither the flag nor the environment
/// variable overrides it.
pub const DEFAULT_TOL_REL: f64 = 1e-8;

/// Environment variable consulted for the tolerance when no flag is given.
pub const TOL_ENV_VAR: &str = "MEANFORGE_TOL";

/// Default bounds configurations swept when none are given explicitly.
pub const DEFAULT_BOUNDS_SET: [(f64, f64); 3] = [(1.0, 2.0), (1.0, 10.0), (0.1, 1.0)];

/// Trials per bounds configuration in the default sweep (3 x 171 = 513).
pub const DEFAULT_TRIALS: usize = 171;

/// Everything one batch of randomized trials depends on.
///
/// Two runs with equal configurations produce bitwise-identical instances
/// and verdicts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    /// Matrix dimensions cycled through by trial index.
    pub dims: Vec<usize>,
    /// Tuple sizes cycled through by trial index.
    pub tuple_sizes: Vec<usize>,
    /// Spectral bounds `(m, M)` every generated matrix respects.
    pub bounds: (f64, f64),
    /// Number of trials.
    pub trials: usize,
    /// Base seed; each trial derives its own stream from `(seed, index)`.
    pub seed: u64,
    /// Power-mean orders swept per trial.
    pub t_grid: Vec<f64>,
    /// Outer exponents swept per trial (also used as the auxiliary exponent).
    pub p_grid: Vec<f64>,
    /// Unitarily invariant norms swept per trial.
    pub norms: Vec<NormKind>,
    /// Relative comparison tolerance.
    pub tol_rel: f64,
    /// Force endpoint eigenvalues `m` and `M` in every generated matrix.
    pub tight: bool,
}

impl TrialConfig {
    /// The standard configuration at one bounds pair.
    pub fn standard(bounds: (f64, f64)) -> Self {
        TrialConfig {
            dims: vec![2, 3, 5],
            tuple_sizes: vec![2, 3, 5],
            bounds,
            trials: DEFAULT_TRIALS,
            seed: 2024,
            t_grid: vec![-1.0, -0.5, 0.1, 0.5, 1.0],
            p_grid: vec![0.5, 1.0, 2.0, 2.5, 3.0, 4.0],
            norms: vec![
                NormKind::Spectral,
                NormKind::Trace,
                NormKind::Frobenius,
                NormKind::KyFan(2),
            ],
            tol_rel: DEFAULT_TOL_REL,
            tight: false,
        }
    }

    /// The default sweep: the standard configuration at each default bounds
    /// pair.
    pub fn default_set() -> Vec<Self> {
        DEFAULT_BOUNDS_SET.iter().map(|&b| Self::standard(b)).collect()
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.dims.is_empty() || self.dims.contains(&0) {
            bail!("dims must be a nonempty list of positive integers");
        }
        if self.tuple_sizes.is_empty() || self.tuple_sizes.contains(&0) {
            bail!("tuple sizes must be a nonempty list of positive integers");
        }
        let (m, big_m) = self.bounds;
        if !(m.is_finite() && big_m.is_finite() && m > 0.0 && m <= big_m) {
            bail!("bounds must satisfy 0 < m <= M, got m = {m}, M = {big_m}");
        }
        if self.trials == 0 {
            bail!("at least one trial is required");
        }
        if self.t_grid.is_empty()
            || self.t_grid.iter().any(|&t| !t.is_finite() || t == 0.0 || t.abs() > 1.0)
        {
            bail!("t grid values must lie in [-1, 1] and be nonzero");
        }
        if self.p_grid.is_empty() || self.p_grid.iter().any(|&p| !p.is_finite() || p <= 0.0) {
            bail!("p grid values must be positive and finite");
        }
        if self.norms.is_empty() {
            bail!("at least one norm is required");
        }
        if !(self.tol_rel.is_finite() && self.tol_rel >= 0.0) {
            bail!("tolerance must be finite and nonnegative");
        }
        Ok(())
    }

    /// The parameter grid handed to the check catalog; the auxiliary exponent
    /// grid reuses the `p` grid.
    pub fn grid(&self) -> ParamGrid<f64> {
        ParamGrid {
            t_values: self.t_grid.clone(),
            p_values: self.p_grid.clone(),
            alpha_values: self.p_grid.clone(),
            norms: self.norms.clone(),
        }
    }
}

/// Resolves the comparison tolerance: explicit flag, then the
/// `MEANFORGE_TOL` environment variable, then the default.
pub fn resolve_tol(flag: Option<f64>) -> anyhow::Result<f64> {
    if let Some(t) = flag {
        if !(t.is_finite() && t >= 0.0) {
            bail!("--tol must be finite and nonnegative, got {t}");
        }
        return Ok(t);
    }
    if let Ok(text) = std::env::var(TOL_ENV_VAR) {
        let t: f64 = text
            .trim()
            .parse()
            .map_err(|_| anyhow::anyhow!("cannot parse {TOL_ENV_VAR} = {text:?} as a number"))?;
        if !(t.is_finite() && t >= 0.0) {
            bail!("{TOL_ENV_VAR} must be finite and nonnegative, got {t}");
        }
        return Ok(t);
    }
    Ok(DEFAULT_TOL_REL)
}
