//! Unitarily invariant norms: spectral, trace, Frobenius, and Ky Fan.
//!
//! All four are symmetric gauge functions of the singular values, so they
//! share one entry point. For Hermitian input the singular values are the
//! absolute eigenvalues; for general input they come from the spectrum of
//! `A^* A`.

use serde::{Deserialize, Serialize};

use crate::eigen::eigh;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::{tol, Real};

/// Selector for a unitarily invariant norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum NormKind {
    /// Largest singular value.
    Spectral,
    /// Sum of singular values.
    Trace,
    /// Euclidean norm of the entries.
    Frobenius,
    /// Sum of the `k` largest singular values.
    KyFan(usize),
}

impl std::fmt::Display for NormKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormKind::Spectral => write!(f, "spectral"),
            NormKind::Trace => write!(f, "trace"),
            NormKind::Frobenius => write!(f, "frobenius"),
            NormKind::KyFan(k) => write!(f, "kyfan({k})"),
        }
    }
}

impl std::str::FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(NormKind::Spectral),
            "trace" => Ok(NormKind::Trace),
            "frobenius" => Ok(NormKind::Frobenius),
            other => {
                let inner = other
                    .strip_prefix("kyfan(")
                    .and_then(|rest| rest.strip_suffix(')'))
                    .or_else(|| other.strip_prefix("kyfan:"));
                match inner.and_then(|k| k.parse::<usize>().ok()) {
                    Some(k) => Ok(NormKind::KyFan(k)),
                    None => Err(Error::BadParameter(format!(
                        "unknown norm kind {other:?} (expected spectral, trace, frobenius, or kyfan(k))"
                    ))),
                }
            }
        }
    }
}

impl Serialize for NormKind {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NormKind {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Singular values in descending order.
///
/// A square matrix within the Hermitian tolerance takes the cheaper
/// eigenvalue route; everything else goes through `A^* A`.
pub fn singular_values<T: Real>(a: &ComplexMatrix<T>) -> Result<Vec<T>> {
    let mut sv: Vec<T> = if a.is_square()
        && a.hermitian_defect() <= tol::<T>(1e-12) * a.max_abs()
    {
        eigh(a)?.values().iter().map(|l| l.abs()).collect()
    } else {
        let gram = &a.adjoint() * a;
        eigh(&gram)?
            .values()
            .iter()
            .map(|l| l.max(T::zero()).sqrt())
            .collect()
    };
    sv.sort_by(|x, y| y.partial_cmp(x).expect("singular values are finite"));
    Ok(sv)
}

/// Unitarily invariant norm of the requested kind.
///
/// Errors with [`Error::BadK`] if a Ky Fan index lies outside
/// `1..=min(rows, cols)`.
pub fn ui_norm<T: Real>(a: &ComplexMatrix<T>, kind: NormKind) -> Result<T> {
    if let NormKind::KyFan(k) = kind {
        let limit = a.rows().min(a.cols());
        if k == 0 || k > limit {
            return Err(Error::BadK(format!(
                "k = {k} outside 1..={limit} for a {}x{} matrix",
                a.rows(),
                a.cols()
            )));
        }
    }
    if kind == NormKind::Frobenius {
        // Entrywise formula; exact and cheaper than the singular values.
        return Ok(a.frobenius_norm());
    }
    let sv = singular_values(a)?;
    Ok(match kind {
        NormKind::Spectral => sv.first().copied().unwrap_or_else(T::zero),
        NormKind::Trace => sv.iter().copied().sum(),
        NormKind::KyFan(k) => sv.iter().take(k).copied().sum(),
        NormKind::Frobenius => unreachable!(),
    })
}
