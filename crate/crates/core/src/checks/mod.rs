//! Catalog of operator inequalities and the machinery that certifies them.
//!
//! Each catalog entry compares two expressions built from an HPD tuple, a
//! positive unital map, and a handful of parameters (mean order `t`, outer
//! exponent `p`, a unitarily invariant norm, an auxiliary exponent `alpha`).
//! Evaluation reduces every comparison to a worst slack: for an operator
//! inequality `L <= c R` the slack is the smallest eigenvalue of `c R - L`,
//! for a scalar inequality `l <= r` it is `r - l`. A comparison *holds* when
//! `slack >= -tol_rel * (1 + |L| + |R|)`, so roundoff at the equality
//! boundary is tolerated while genuine violations are flagged.
//!
//! [`evaluate_check`] runs one check at one parameter point; [`run_catalog`]
//! sweeps every check over a parameter grid, deduplicating points that differ
//! only in axes a check ignores and recording out-of-hypothesis points as
//! skips rather than failures.

mod constants;
mod eval;

pub use constants::{constant_of, Constants};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::UcpMap;
use crate::means::MatrixTuple;
use crate::norm::NormKind;
use crate::scalar::{real, Real};

use eval::Workspace;

/// Relative tolerance applied to each comparison unless overridden.
pub const DEFAULT_CHECK_TOL_REL: f64 = 1e-8;

/// Identifier of one inequality in the catalog.
///
/// The string forms (see [`CheckId::as_str`]) are the stable external names
/// used by reports and the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckId {
    /// Harmonic <= power mean <= arithmetic, on the raw tuple.
    InterpPower,
    /// Harmonic <= Karcher mean <= arithmetic.
    InterpKarcher,
    /// Geometric mean of a pair below its arithmetic mean.
    Amgm,
    /// Map of an inverse dominates the inverse of the map.
    Choi,
    /// Maps are subadditive over the geometric mean of a pair.
    AndoGeo,
    /// Reverse of the previous item, with factor `sqrt(K)^p`, for p in (0, 1].
    ReverseAndoP,
    /// Reverse of the Choi inequality with Kantorovich factor.
    MarshallOlkin,
    /// Map of a power mean below the power mean of the mapped tuple (t in (0, 1]).
    PhiPower15,
    /// Power-p reverse of the previous item with factor `K^p`, for p in (0, 2].
    DehghaniP,
    /// Same reverse with the sharper large-p factor, for p >= 2.
    ThmP4,
    /// Scalar two-sided bound `m M Phi(A^-1) + Phi(A) <= (m + M) I` per matrix.
    Haj2Scalar,
    /// Reverse map-subadditivity for weighted geometric means of a pair, p >= 2.
    GeoReverseP,
    /// Reverse map-subadditivity for the Karcher mean, p >= 2.
    KarcherReverseP,
    /// Arithmetic mean below `K` times the power mean.
    ArithBelowPower,
    /// Pair arithmetic mean below `K` times the geometric mean.
    AmgmCounterpart,
    /// Arithmetic mean below `K` times the Karcher mean.
    ArithBelowKarcher,
    /// Mapped arithmetic mean below `K` times the mapped / mapped-tuple power mean.
    Chain13,
    /// `Phi^p(arith) <= alpha^p Phi^p(power mean)` with the branch-wise alpha.
    Thm17,
    /// Karcher-mean analogue of the previous item, p >= 1.
    Thm17Karcher,
    /// Anticommutator bound pairing `P_t^p` of the mapped tuple with `Phi^p(P_t)`.
    AnticommPower,
    /// Karcher-mean analogue of the anticommutator bound.
    AnticommKarcher,
    /// Unitarily invariant norm of `P_t` below the weighted norm sum, t in (0, 1].
    NormUpper18,
    /// Harmonic-type norm lower bound for t in [-1, 0).
    NormLower18,
    /// Squared-exponent refinement of the mapped-arithmetic reverse, p >= 2.
    Refine23,
    /// Squared-exponent refinement of the mapped-power-mean reverse, p >= 2.
    Refine34,
    /// Norm/order toolbox facts for a PD pair at exponent alpha.
    Lemma6Suite,
    /// Equivalence of the three spectral-threshold criteria on a block matrix.
    Lemma19Suite,
    /// Probe: Thompson distance between `P_t` of a pair and its geometric mean.
    LedgerFactP30,
}

/// Every catalog identifier, in report order.
pub const ALL_CHECKS: [CheckId; 28] = [
    CheckId::InterpPower,
    CheckId::InterpKarcher,
    CheckId::Amgm,
    CheckId::Choi,
    CheckId::AndoGeo,
    CheckId::ReverseAndoP,
    CheckId::MarshallOlkin,
    CheckId::PhiPower15,
    CheckId::DehghaniP,
    CheckId::ThmP4,
    CheckId::Haj2Scalar,
    CheckId::GeoReverseP,
    CheckId::KarcherReverseP,
    CheckId::ArithBelowPower,
    CheckId::AmgmCounterpart,
    CheckId::ArithBelowKarcher,
    CheckId::Chain13,
    CheckId::Thm17,
    CheckId::Thm17Karcher,
    CheckId::AnticommPower,
    CheckId::AnticommKarcher,
    CheckId::NormUpper18,
    CheckId::NormLower18,
    CheckId::Refine23,
    CheckId::Refine34,
    CheckId::Lemma6Suite,
    CheckId::Lemma19Suite,
    CheckId::LedgerFactP30,
];

impl CheckId {
    /// Stable string name used in reports and on the command line.
    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::InterpPower => "interp_power",
            CheckId::InterpKarcher => "interp_karcher",
            CheckId::Amgm => "amgm",
            CheckId::Choi => "choi",
            CheckId::AndoGeo => "ando_geo",
            CheckId::ReverseAndoP => "reverse_ando_p",
            CheckId::MarshallOlkin => "marshall_olkin",
            CheckId::PhiPower15 => "phi_power_15",
            CheckId::DehghaniP => "dehghani_p",
            CheckId::ThmP4 => "thm_p4",
            CheckId::Haj2Scalar => "haj2_scalar",
            CheckId::GeoReverseP => "geo_reverse_p",
            CheckId::KarcherReverseP => "karcher_reverse_p",
            CheckId::ArithBelowPower => "arith_below_power",
            CheckId::AmgmCounterpart => "amgm_counterpart",
            CheckId::ArithBelowKarcher => "arith_below_karcher",
            CheckId::Chain13 => "chain_13",
            CheckId::Thm17 => "thm17",
            CheckId::Thm17Karcher => "thm17_karcher",
            CheckId::AnticommPower => "anticomm_power",
            CheckId::AnticommKarcher => "anticomm_karcher",
            CheckId::NormUpper18 => "norm_upper_18",
            CheckId::NormLower18 => "norm_lower_18",
            CheckId::Refine23 => "refine23",
            CheckId::Refine34 => "refine34",
            CheckId::Lemma6Suite => "lemma6_suite",
            CheckId::Lemma19Suite => "lemma19_suite",
            CheckId::LedgerFactP30 => "ledger_fact_p30",
        }
    }

    /// One-line description of what the check compares.
    pub fn summary(self) -> &'static str {
        catalog_entry(self).summary
    }

    /// Which parameter axes the check consumes.
    pub fn axes(self) -> Axes {
        catalog_entry(self).axes
    }

    /// Whether a negative verdict counts as a genuine failure.
    ///
    /// The single probe entry always reports `holds = true`; its payload is
    /// the measured distance, not a pass/fail claim.
    pub fn counts_failures(self) -> bool {
        !matches!(self, CheckId::LedgerFactP30)
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL_CHECKS
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }
}

impl Serialize for CheckId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for CheckId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The parameter axes a check actually reads.
///
/// Grid sweeps project the full parameter grid onto these axes, so a check
/// that ignores `t` is evaluated once rather than once per grid value of `t`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Axes {
    pub uses_t: bool,
    pub uses_p: bool,
    pub uses_norm: bool,
    pub uses_alpha: bool,
}

/// Static description of one catalog entry.
#[derive(Clone, Copy, Debug)]
pub struct CheckInfo {
    pub id: CheckId,
    pub summary: &'static str,
    pub axes: Axes,
}

const NO_AXES: Axes = Axes { uses_t: false, uses_p: false, uses_norm: false, uses_alpha: false };
const T_ONLY: Axes = Axes { uses_t: true, ..NO_AXES };
const P_ONLY: Axes = Axes { uses_p: true, ..NO_AXES };
const T_AND_P: Axes = Axes { uses_t: true, uses_p: true, ..NO_AXES };
const T_AND_NORM: Axes = Axes { uses_t: true, uses_norm: true, ..NO_AXES };
const ALPHA_ONLY: Axes = Axes { uses_alpha: true, ..NO_AXES };

/// The full catalog, in report order.
pub fn catalog() -> &'static [CheckInfo] {
    &CATALOG
}

fn catalog_entry(id: CheckId) -> &'static CheckInfo {
    // ALL_CHECKS and CATALOG share one ordering; keep them in sync.
    let info = &CATALOG[ALL_CHECKS.iter().position(|c| *c == id).expect("catalog covers all ids")];
    debug_assert_eq!(info.id, id);
    info
}

static CATALOG: [CheckInfo; 28] = [
    CheckInfo {
        id: CheckId::InterpPower,
        summary: "power mean sits between the harmonic and arithmetic means",
        axes: T_ONLY,
    },
    CheckInfo {
        id: CheckId::InterpKarcher,
        summary: "Karcher mean sits between the harmonic and arithmetic means",
        axes: NO_AXES,
    },
    CheckInfo {
        id: CheckId::Amgm,
        summary: "geometric mean of a pair is below its arithmetic mean",
        axes: NO_AXES,
    },
    CheckInfo {
        id: CheckId::Choi,
        summary: "inverse of a mapped matrix is below the map of its inverse",
        axes: NO_AXES,
    },
    CheckInfo {
        id: CheckId::AndoGeo,
        summary: "map of a geometric mean is below the geometric mean of the maps",
        axes: NO_AXES,
    },
    CheckInfo {
        id: CheckId::ReverseAndoP,
        summary: "p-th power reverse of the geometric-mean map inequality, p in (0, 1]",
        axes: P_ONLY,
    },
    CheckInfo {
        id: CheckId::MarshallOlkin,
        summary: "map of an inverse is below K times the inverse of the map",
        axes: NO_AXES,
    },
    CheckInfo {
        id: CheckId::PhiPower15,
        summary: "map of a power mean is below the power mean of the mapped tuple, t in (0, 1]",
        axes: T_ONLY,
    },
    CheckInfo {
        id: CheckId::DehghaniP,
        summary: "p-th power reverse of the mapped power-mean inequality with K^p, p in (0, 2]",
        axes: T_AND_P,
    },
    CheckInfo {
        id: CheckId::ThmP4,
        summary: "p-th power reverse of the mapped power-mean inequality, sharper factor, p >= 2",
        axes: T_AND_P,
    },
    CheckInfo {
        id: CheckId::Haj2Scalar,
        summary: "per-matrix bound m M Phi(A^-1) + Phi(A) <= (m + M) I",
        axes: NO_AXES,
    },
    CheckInfo {
        id: CheckId::GeoReverseP,
        summary: "reverse map inequality for weighted geometric means of a pair, p >= 2",
        axes: P_ONLY,
    },
    CheckInfo {
        id: CheckId::KarcherReverseP,
        summary: "reverse map inequality for the Karcher mean, p >= 2",
        axes: P_ONLY,
    },
    CheckInfo {
        id: CheckId::ArithBelowPower,
        summary: "arithmetic mean is below K times the power mean",
        axes: T_ONLY,
    },
    CheckInfo {
        id: CheckId::AmgmCounterpart,
        summary: "pair arithmetic mean is below K times the geometric mean",
        axes: NO_AXES,
    },
    CheckInfo {
        id: CheckId::ArithBelowKarcher,
        summary: "arithmetic mean is below K times the Karcher mean",
        axes: NO_AXES,
    },
    CheckInfo {
        id: CheckId::Chain13,
        summary: "mapped arithmetic mean chains below K times both mapped power means",
        axes: T_ONLY,
    },
    CheckInfo {
        id: CheckId::Thm17,
        summary: "mapped arithmetic mean power is below alpha^p times the mapped power-mean power",
        axes: T_AND_P,
    },
    CheckInfo {
        id: CheckId::Thm17Karcher,
        summary: "Karcher analogue of the alpha^p reverse bound, p >= 1",
        axes: P_ONLY,
    },
    CheckInfo {
        id: CheckId::AnticommPower,
        summary: "anticommutator of mean powers has top eigenvalue below 2 alpha^p",
        axes: T_AND_P,
    },
    CheckInfo {
        id: CheckId::AnticommKarcher,
        summary: "Karcher analogue of the anticommutator eigenvalue bound",
        axes: P_ONLY,
    },
    CheckInfo {
        id: CheckId::NormUpper18,
        summary: "unitarily invariant norm of P_t is below the weighted norm sum, t in (0, 1]",
        axes: T_AND_NORM,
    },
    CheckInfo {
        id: CheckId::NormLower18,
        summary: "inverse weighted inverse-norm sum is below the norm of P_t, t in [-1, 0)",
        axes: T_AND_NORM,
    },
    CheckInfo {
        id: CheckId::Refine23,
        summary: "squared-exponent refinement of the mapped-arithmetic reverse, p >= 2",
        axes: T_AND_P,
    },
    CheckInfo {
        id: CheckId::Refine34,
        summary: "squared-exponent refinement of the mapped power-mean reverse, p >= 2",
        axes: T_AND_P,
    },
    CheckInfo {
        id: CheckId::Lemma6Suite,
        summary: "norm and order toolbox facts for a PD pair at exponent alpha",
        axes: ALPHA_ONLY,
    },
    CheckInfo {
        id: CheckId::Lemma19Suite,
        summary: "three equivalent spectral-threshold criteria agree on both sides of the boundary",
        axes: NO_AXES,
    },
    CheckInfo {
        id: CheckId::LedgerFactP30,
        summary: "probe: Thompson distance between the pair power mean and the geometric mean",
        axes: T_ONLY,
    },
];

/// Parameter point at which a check is evaluated.
///
/// Axes a check ignores are simply not read; [`Verdict::to_json`] nulls them
/// out in reports.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckParams<T: Real> {
    /// Power-mean order, in `[-1, 1] \ {0}` where used.
    pub t: T,
    /// Outer exponent for power reverses.
    pub p: T,
    /// Auxiliary exponent for the toolbox suite.
    pub alpha: T,
    /// Unitarily invariant norm for the norm checks.
    pub norm: NormKind,
}

impl<T: Real> CheckParams<T> {
    /// A neutral default point: `t = 1/2`, `p = 2`, `alpha = 2`, spectral norm.
    pub fn new() -> Self {
        CheckParams { t: real(0.5), p: real(2.0), alpha: real(2.0), norm: NormKind::Spectral }
    }

    pub fn with_t(mut self, t: T) -> Self {
        self.t = t;
        self
    }

    pub fn with_p(mut self, p: T) -> Self {
        self.p = p;
        self
    }

    pub fn with_alpha(mut self, alpha: T) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_norm(mut self, norm: NormKind) -> Self {
        self.norm = norm;
        self
    }
}

impl<T: Real> Default for CheckParams<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Grid of parameter values a catalog sweep ranges over.
#[derive(Clone, Debug)]
pub struct ParamGrid<T: Real> {
    pub t_values: Vec<T>,
    pub p_values: Vec<T>,
    pub alpha_values: Vec<T>,
    pub norms: Vec<NormKind>,
}

impl<T: Real> ParamGrid<T> {
    /// Grid with the default sweep values: `t` in {-1, -1/2, 1/10, 1/2, 1},
    /// `p` in {1/2, 1, 2, 5/2, 3, 4} (also used for `alpha`), and the
    /// spectral, trace, Frobenius and Ky Fan 2-norms.
    pub fn standard() -> Self {
        let p_values: Vec<T> =
            [0.5, 1.0, 2.0, 2.5, 3.0, 4.0].iter().map(|&p| real(p)).collect();
        ParamGrid {
            t_values: [-1.0, -0.5, 0.1, 0.5, 1.0].iter().map(|&t| real(t)).collect(),
            alpha_values: p_values.clone(),
            p_values,
            norms: vec![NormKind::Spectral, NormKind::Trace, NormKind::Frobenius, NormKind::KyFan(2)],
        }
    }

    /// Single-point grid taken from one parameter set.
    pub fn single(params: &CheckParams<T>) -> Self {
        ParamGrid {
            t_values: vec![params.t],
            p_values: vec![params.p],
            alpha_values: vec![params.alpha],
            norms: vec![params.norm],
        }
    }

    /// Projects the grid onto the axes one check reads, deduplicating points.
    ///
    /// Unused axes are pinned to the first grid value (or a neutral default
    /// when the grid is empty) so every returned point is fully specified.
    pub fn project(&self, axes: Axes) -> Vec<CheckParams<T>> {
        let one = |v: &[T], fallback: f64| -> Vec<T> {
            if v.is_empty() {
                vec![real(fallback)]
            } else {
                v.to_vec()
            }
        };
        let ts = if axes.uses_t { one(&self.t_values, 0.5) } else { vec![*self.t_values.first().unwrap_or(&real(0.5))] };
        let ps = if axes.uses_p { one(&self.p_values, 2.0) } else { vec![*self.p_values.first().unwrap_or(&real(2.0))] };
        let alphas = if axes.uses_alpha {
            one(&self.alpha_values, 2.0)
        } else {
            vec![*self.alpha_values.first().unwrap_or(&real(2.0))]
        };
        let norms = if axes.uses_norm {
            if self.norms.is_empty() { vec![NormKind::Spectral] } else { self.norms.clone() }
        } else {
            vec![*self.norms.first().unwrap_or(&NormKind::Spectral)]
        };

        let mut seen: Vec<(u64, u64, u64, Option<NormKind>)> = Vec::new();
        let mut out = Vec::new();
        for &t in &ts {
            for &p in &ps {
                for &alpha in &alphas {
                    for &norm in &norms {
                        let key = (
                            if axes.uses_t { bits(t) } else { 0 },
                            if axes.uses_p { bits(p) } else { 0 },
                            if axes.uses_alpha { bits(alpha) } else { 0 },
                            if axes.uses_norm { Some(norm) } else { None },
                        );
                        if seen.contains(&key) {
                            continue;
                        }
                        seen.push(key);
                        out.push(CheckParams { t, p, alpha, norm });
                    }
                }
            }
        }
        out
    }
}

fn bits<T: Real>(x: T) -> u64 {
    x.to_f64().unwrap_or(f64::NAN).to_bits()
}

/// Outcome of one evaluated comparison.
#[derive(Clone, Debug)]
pub struct Verdict<T: Real> {
    /// Which check produced this verdict.
    pub id: CheckId,
    /// Whether every component comparison held within tolerance.
    pub holds: bool,
    /// Worst slack over the component comparisons (eigenvalue or scalar gap).
    pub slack: T,
    /// Worst slack divided by its comparison scale `1 + |L| + |R|`.
    pub relative_slack: T,
    /// Constant multiplying the right-hand side (1 for direct inequalities).
    pub constant: T,
    /// Parameter point the check was evaluated at.
    pub params: CheckParams<T>,
    /// `(min, max)` spectral extremes (or value twice, for scalars) of the
    /// binding comparison's left-hand side.
    pub lhs_extremes: (T, T),
    /// Same for the right-hand side.
    pub rhs_extremes: (T, T),
    /// Human-readable detail: binding component, branch choices, caveats.
    pub notes: String,
}

impl<T: Real> Verdict<T> {
    /// Report form with one field per axis; axes the check ignores are null.
    pub fn to_json(&self) -> serde_json::Value {
        let axes = self.id.axes();
        let num = |x: T| {
            serde_json::Number::from_f64(x.to_f64().unwrap_or(f64::NAN))
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null)
        };
        let opt_num = |used: bool, x: T| if used { num(x) } else { serde_json::Value::Null };
        serde_json::json!({
            "id": self.id.as_str(),
            "holds": self.holds,
            "slack": num(self.slack),
            "relative_slack": num(self.relative_slack),
            "constant": num(self.constant),
            "t": opt_num(axes.uses_t, self.params.t),
            "p": opt_num(axes.uses_p, self.params.p),
            "norm": if axes.uses_norm {
                serde_json::Value::String(self.params.norm.to_string())
            } else {
                serde_json::Value::Null
            },
            "notes": self.notes,
        })
    }
}

/// Result of attempting one check at one parameter point.
#[derive(Clone, Debug)]
pub enum CheckOutcome<T: Real> {
    /// The comparison was evaluated and produced a verdict.
    Evaluated(Verdict<T>),
    /// The point fell outside the check's hypotheses, or the evaluation hit a
    /// numerical dead end; `reason` says which.
    Skipped { id: CheckId, params: CheckParams<T>, reason: String },
}

impl<T: Real> CheckOutcome<T> {
    pub fn id(&self) -> CheckId {
        match self {
            CheckOutcome::Evaluated(v) => v.id,
            CheckOutcome::Skipped { id, .. } => *id,
        }
    }

    pub fn verdict(&self) -> Option<&Verdict<T>> {
        match self {
            CheckOutcome::Evaluated(v) => Some(v),
            CheckOutcome::Skipped { .. } => None,
        }
    }
}

/// Evaluates one check at one parameter point with the default tolerance.
pub fn evaluate_check<T: Real>(
    id: CheckId,
    tuple: &MatrixTuple<T>,
    map: &UcpMap<T>,
    params: &CheckParams<T>,
) -> Result<Verdict<T>> {
    evaluate_check_with_tol(id, tuple, map, params, real(DEFAULT_CHECK_TOL_REL))
}

/// Evaluates one check at one parameter point with an explicit relative
/// tolerance.
///
/// Returns `Err(Error::ParamOutOfDomain)` when the point violates the check's
/// hypotheses (wrong sign of `t`, exponent outside the proven range, tuple too
/// small for a pair check) and other errors for genuine numerical trouble.
pub fn evaluate_check_with_tol<T: Real>(
    id: CheckId,
    tuple: &MatrixTuple<T>,
    map: &UcpMap<T>,
    params: &CheckParams<T>,
    tol_rel: T,
) -> Result<Verdict<T>> {
    let ws = Workspace::new(tuple, map, tol_rel)?;
    ws.evaluate(id, params)
}

/// Sweeps every catalog check over `grid` with the default tolerance.
pub fn run_catalog<T: Real>(
    tuple: &MatrixTuple<T>,
    map: &UcpMap<T>,
    grid: &ParamGrid<T>,
) -> Result<Vec<CheckOutcome<T>>> {
    run_catalog_with_tol(tuple, map, grid, real(DEFAULT_CHECK_TOL_REL))
}

/// Sweeps every catalog check over `grid`.
///
/// Each check sees the grid projected onto its own axes. Out-of-hypothesis
/// points and numerical dead ends (non-convergence, loss of definiteness)
/// become [`CheckOutcome::Skipped`]; structural errors (dimension mismatches,
/// invalid inputs) abort the sweep.
pub fn run_catalog_with_tol<T: Real>(
    tuple: &MatrixTuple<T>,
    map: &UcpMap<T>,
    grid: &ParamGrid<T>,
    tol_rel: T,
) -> Result<Vec<CheckOutcome<T>>> {
    run_checks_with_tol(tuple, map, &ALL_CHECKS, grid, tol_rel)
}

/// Sweeps only the named checks over `grid`, in the given order; otherwise
/// behaves like [`run_catalog_with_tol`].
pub fn run_checks_with_tol<T: Real>(
    tuple: &MatrixTuple<T>,
    map: &UcpMap<T>,
    ids: &[CheckId],
    grid: &ParamGrid<T>,
    tol_rel: T,
) -> Result<Vec<CheckOutcome<T>>> {
    let ws = Workspace::new(tuple, map, tol_rel)?;
    let mut out = Vec::new();
    for &id in ids {
        let info = catalog_entry(id);
        for params in grid.project(info.axes) {
            match ws.evaluate(info.id, &params) {
                Ok(verdict) => out.push(CheckOutcome::Evaluated(verdict)),
                Err(Error::ParamOutOfDomain(reason)) => {
                    out.push(CheckOutcome::Skipped { id: info.id, params, reason })
                }
                Err(e @ (Error::NoConvergence { .. } | Error::Domain(_) | Error::BadK(_) | Error::BadT(_))) => {
                    out.push(CheckOutcome::Skipped {
                        id: info.id,
                        params,
                        reason: format!("numeric: {e}"),
                    })
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}
