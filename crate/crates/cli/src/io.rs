//! JSON file formats for matrices, weight vectors, and Kraus maps.
//!
//! A matrix is `{"dim": n, "re": [[...]], "im": [[...]]}` with row-major
//! entries; `"im"` may be omitted for real matrices, and `"dim"` may be
//! omitted for the rectangular Kraus blocks (the shape then comes from the
//! row lists). Weights are `{"w": [...]}`, and a map is
//! `{"in_dim": n, "out_dim": m, "kraus": [matrix, ...]}`.

use anyhow::{bail, Context};
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::path::Path;

use meanforge::maps::UcpMap;
use meanforge::matrix::ComplexMatrix;
use meanforge::means::WeightVector;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub re: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix<f64>) -> Self {
        let re = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m[(i, j)].re).collect())
            .collect();
        let any_im = (0..m.rows()).any(|i| (0..m.cols()).any(|j| m[(i, j)].im != 0.0));
        let im = any_im.then(|| {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| m[(i, j)].im).collect())
                .collect()
        });
        MatrixJson { dim: m.is_square().then(|| m.rows()), re, im }
    }

    pub fn to_matrix(&self) -> anyhow::Result<ComplexMatrix<f64>> {
        let rows = self.re.len();
        if rows == 0 {
            bail!("matrix has no rows");
        }
        let cols = self.re[0].len();
        if cols == 0 {
            bail!("matrix has no columns");
        }
        if self.re.iter().any(|row| row.len() != cols) {
            bail!("ragged \"re\" rows: expected {cols} entries per row");
        }
        if let Some(im) = &self.im {
            if im.len() != rows || im.iter().any(|row| row.len() != cols) {
                bail!("\"im\" shape does not match \"re\" ({rows} x {cols})");
            }
        }
        if let Some(dim) = self.dim {
            if dim != rows || dim != cols {
                bail!("\"dim\" = {dim} does not match the {rows} x {cols} entry grid");
            }
        }
        Ok(ComplexMatrix::from_fn(rows, cols, |i, j| {
            Complex::new(self.re[i][j], self.im.as_ref().map_or(0.0, |im| im[i][j]))
        }))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightsJson {
    pub w: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapJson {
    pub in_dim: usize,
    pub out_dim: usize,
    pub kraus: Vec<MatrixJson>,
}

impl MapJson {
    pub fn from_map(map: &UcpMap<f64>) -> Self {
        MapJson {
            in_dim: map.in_dim(),
            out_dim: map.out_dim(),
            kraus: map.kraus().iter().map(MatrixJson::from_matrix).collect(),
        }
    }

    pub fn to_map(&self) -> anyhow::Result<UcpMap<f64>> {
        let mut kraus = Vec::with_capacity(self.kraus.len());
        for (k, entry) in self.kraus.iter().enumerate() {
            let m = entry
                .to_matrix()
                .with_context(|| format!("Kraus operator {k}"))?;
            if m.rows() != self.in_dim || m.cols() != self.out_dim {
                bail!(
                    "Kraus operator {k} is {} x {}, expected in_dim x out_dim = {} x {}",
                    m.rows(),
                    m.cols(),
                    self.in_dim,
                    self.out_dim
                );
            }
            kraus.push(m);
        }
        Ok(UcpMap::new(kraus)?)
    }
}

/// Reads a JSON array of matrices.
pub fn read_matrices(path: &Path) -> anyhow::Result<Vec<ComplexMatrix<f64>>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let entries: Vec<MatrixJson> =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| e.to_matrix().with_context(|| format!("matrix {i}")))
        .collect()
}

/// Reads `{"w": [...]}` and validates it as a weight vector of length `n`.
pub fn read_weights(path: &Path, n: usize) -> anyhow::Result<WeightVector<f64>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let parsed: WeightsJson =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if parsed.w.len() != n {
        bail!("{} weights for {} matrices", parsed.w.len(), n);
    }
    Ok(WeightVector::new(parsed.w)?)
}

/// Reads a Kraus map description.
pub fn read_map(path: &Path) -> anyhow::Result<UcpMap<f64>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let parsed: MapJson =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    parsed.to_map()
}

#[cfg(test)]
mod tests {
    use super::*;
    use meanforge::maps::{make_map, MapKind};

    #[test]
    fn square_matrix_round_trips() {
        let m = ComplexMatrix::from_fn(2, 2, |i, j| {
            Complex::new((2 * i + j) as f64, if i == j { 0.0 } else { 0.5 })
        });
        let json = MatrixJson::from_matrix(&m);
        assert_eq!(json.dim, Some(2));
        let back = json.to_matrix().unwrap();
        assert_eq!(back.max_abs_diff(&m), 0.0);
    }

    #[test]
    fn real_matrix_omits_imaginary_block() {
        let m = ComplexMatrix::from_fn(2, 2, |i, j| Complex::new((i + j) as f64, 0.0));
        let json = MatrixJson::from_matrix(&m);
        assert!(json.im.is_none());
        let text = serde_json::to_string(&json).unwrap();
        assert!(!text.contains("\"im\""));
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap().max_abs_diff(&m), 0.0);
    }

    #[test]
    fn rectangular_matrix_round_trips_without_dim() {
        let m = ComplexMatrix::from_fn(3, 2, |i, j| Complex::new(i as f64, j as f64));
        let json = MatrixJson::from_matrix(&m);
        assert_eq!(json.dim, None);
        let back = json.to_matrix().unwrap();
        assert_eq!(back.rows(), 3);
        assert_eq!(back.cols(), 2);
        assert_eq!(back.max_abs_diff(&m), 0.0);
    }

    #[test]
    fn shape_errors_are_reported() {
        let ragged = MatrixJson { dim: None, re: vec![vec![1.0, 2.0], vec![3.0]], im: None };
        assert!(ragged.to_matrix().is_err());
        let bad_dim = MatrixJson { dim: Some(3), re: vec![vec![1.0]], im: None };
        assert!(bad_dim.to_matrix().is_err());
        let bad_im = MatrixJson {
            dim: None,
            re: vec![vec![1.0]],
            im: Some(vec![vec![1.0, 2.0]]),
        };
        assert!(bad_im.to_matrix().is_err());
    }

    #[test]
    fn map_round_trips() {
        let map = make_map(MapKind::<f64>::Depolarizing(2)).unwrap();
        let json = MapJson::from_map(&map);
        assert_eq!(json.in_dim, 2);
        assert_eq!(json.kraus.len(), 4);
        let back = json.to_map().unwrap();
        assert_eq!(back.in_dim(), 2);
        assert_eq!(back.out_dim(), 2);
        assert!(back.unitality_defect() < 1e-12);
    }

    #[test]
    fn map_rejects_wrong_kraus_shape() {
        let json = MapJson {
            in_dim: 2,
            out_dim: 2,
            kraus: vec![MatrixJson { dim: None, re: vec![vec![1.0, 0.0]], im: None }],
        };
        assert!(json.to_map().is_err());
    }
}
