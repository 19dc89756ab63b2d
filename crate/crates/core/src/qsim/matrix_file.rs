use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Matrix, UnitarySpec, C64};
use crate::error::{Error, Result};

/// Row-major dense matrix on disk: `{ "dim": d, "re": [[…]], "im": [[…]] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &Matrix) -> Self {
        let dim = m.nrows();
        MatrixFile {
            dim,
            re: (0..dim)
                .map(|i| (0..dim).map(|j| m[(i, j)].re).collect())
                .collect(),
            im: (0..dim)
                .map(|i| (0..dim).map(|j| m[(i, j)].im).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        let d = self.dim;
        if d == 0 {
            return Err(Error::InvalidArgument("dim must be positive".into()));
        }
        for rows in [&self.re, &self.im] {
            if rows.len() != d {
                return Err(Error::DimMismatch {
                    expected: d,
                    actual: rows.len(),
                });
            }
            if let Some(bad) = rows.iter().find(|r| r.len() != d) {
                return Err(Error::DimMismatch {
                    expected: d,
                    actual: bad.len(),
                });
            }
        }
        Ok(Matrix::from_fn(d, d, |i, j| {
            C64::new(self.re[i][j], self.im[i][j])
        }))
    }

    /// Parses JSON and validates unitarity.
    pub fn parse_unitary(json: &str) -> Result<UnitarySpec> {
        let file: MatrixFile = serde_json::from_str(json)
            .map_err(|e| Error::InvalidArgument(format!("bad matrix JSON: {e}")))?;
        UnitarySpec::dense(file.to_matrix()?)
    }

    pub fn load_unitary(path: &Path) -> Result<UnitarySpec> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
        MatrixFile::parse_unitary(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_hadamard() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let json = format!(
            r#"{{"dim": 2, "re": [[{h}, {h}], [{h}, {m}]], "im": [[0, 0], [0, 0]]}}"#,
            m = -h
        );
        let u = MatrixFile::parse_unitary(&json).unwrap();
        assert_eq!(u.dim(), 2);
        assert!(u.trace().norm() < 1e-15);
    }

    #[test]
    fn rejects_non_unitary_and_malformed() {
        let json = r#"{"dim": 2, "re": [[1, 1], [0, 1]], "im": [[0, 0], [0, 0]]}"#;
        assert!(matches!(
            MatrixFile::parse_unitary(json),
            Err(Error::NotUnitary { .. })
        ));
        let ragged = r#"{"dim": 2, "re": [[1, 0], [0]], "im": [[0, 0], [0, 0]]}"#;
        assert!(matches!(
            MatrixFile::parse_unitary(ragged),
            Err(Error::DimMismatch { .. })
        ));
        assert!(matches!(
            MatrixFile::parse_unitary("{"),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn round_trips() {
        let m = UnitarySpec::mod_mul(2, 5).unwrap().as_dense().unwrap();
        let file = MatrixFile::from_matrix(&m);
        let back = MatrixFile::parse_unitary(&serde_json::to_string(&file).unwrap()).unwrap();
        assert_eq!(back.as_dense().unwrap(), m);
    }
}
