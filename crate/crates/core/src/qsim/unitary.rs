use serde::{Deserialize, Serialize};

use super::{identity, unitarity_deviation, Matrix, C64, MAX_DENSE_DIM, UNITARY_TOL};
use crate::error::{Error, Result};
use crate::numtheory::{gcd, mul_mod};

/// A dense matrix checked for unitarity at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseUnitary(Matrix);

impl DenseUnitary {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::DimMismatch {
                expected: m.nrows(),
                actual: m.ncols(),
            });
        }
        let deviation = unitarity_deviation(&m);
        if deviation.is_nan() || deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(DenseUnitary(m))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }
}

/// `U_a |x⟩ = |a·x mod N⟩` on an `N`-level register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModMul {
    a: u64,
    n: u64,
}

impl ModMul {
    pub fn new(a: u64, n: u64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let g = gcd(a, n);
        if g != 1 {
            return Err(Error::NotCoprime {
                a,
                modulus: n,
                gcd: g,
            });
        }
        Ok(ModMul { a: a % n, n })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn apply(&self, x: u64) -> u64 {
        mul_mod(self.a, x, self.n)
    }

    pub fn fixed_points(&self) -> u64 {
        (0..self.n).filter(|&x| self.apply(x) == x).count() as u64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum UnitarySpec {
    Dense(DenseUnitary),
    ModMul(ModMul),
    /// `diag(e^{iφ_0}, …, e^{iφ_{d-1}})`.
    DiagonalPhases(Vec<f64>),
    /// `e^{iθ} · base`.
    ScalarPhase(f64, Box<UnitarySpec>),
}

impl UnitarySpec {
    pub fn identity(d: usize) -> Self {
        UnitarySpec::DiagonalPhases(vec![0.0; d])
    }

    pub fn dense(m: Matrix) -> Result<Self> {
        DenseUnitary::new(m).map(UnitarySpec::Dense)
    }

    pub fn mod_mul(a: u64, n: u64) -> Result<Self> {
        ModMul::new(a, n).map(UnitarySpec::ModMul)
    }

    pub fn diagonal(phases: Vec<f64>) -> Result<Self> {
        if phases.is_empty() || phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument(
                "diagonal phases must be finite and non-empty".into(),
            ));
        }
        Ok(UnitarySpec::DiagonalPhases(phases))
    }

    pub fn with_global_phase(self, theta: f64) -> Self {
        UnitarySpec::ScalarPhase(theta, Box::new(self))
    }

    pub fn dim(&self) -> usize {
        match self {
            UnitarySpec::Dense(u) => u.matrix().nrows(),
            UnitarySpec::ModMul(m) => m.n as usize,
            UnitarySpec::DiagonalPhases(p) => p.len(),
            UnitarySpec::ScalarPhase(_, base) => base.dim(),
        }
    }

    /// `⟨x|U|x⟩`.
    pub fn diagonal_element(&self, x: usize) -> C64 {
        match self {
            UnitarySpec::Dense(u) => u.matrix()[(x, x)],
            UnitarySpec::ModMul(m) => {
                if m.apply(x as u64) == x as u64 {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }
            UnitarySpec::DiagonalPhases(p) => C64::from_polar(1.0, p[x]),
            UnitarySpec::ScalarPhase(theta, base) => {
                C64::from_polar(1.0, *theta) * base.diagonal_element(x)
            }
        }
    }

    /// Total global phase and the innermost phase-free operator.
    pub fn strip_global_phase(&self) -> (f64, &UnitarySpec) {
        match self {
            UnitarySpec::ScalarPhase(theta, base) => {
                let (inner, core) = base.strip_global_phase();
                (theta + inner, core)
            }
            other => (0.0, other),
        }
    }

    /// Exact trace. For `ModMul` this is the number of fixed points.
    pub fn trace(&self) -> C64 {
        match self {
            UnitarySpec::ModMul(m) => C64::new(m.fixed_points() as f64, 0.0),
            UnitarySpec::ScalarPhase(theta, base) => C64::from_polar(1.0, *theta) * base.trace(),
            _ => (0..self.dim()).map(|x| self.diagonal_element(x)).sum(),
        }
    }

    pub fn as_dense(&self) -> Result<Matrix> {
        let d = self.dim();
        if d > MAX_DENSE_DIM {
            return Err(Error::DimTooLarge {
                dim: d,
                limit: MAX_DENSE_DIM,
            });
        }
        Ok(match self {
            UnitarySpec::Dense(u) => u.matrix().clone(),
            UnitarySpec::ModMul(m) => {
                let mut out = Matrix::zeros(d, d);
                for x in 0..m.n {
                    out[(m.apply(x) as usize, x as usize)] = C64::new(1.0, 0.0);
                }
                out
            }
            UnitarySpec::DiagonalPhases(p) => {
                let mut out = identity(d);
                for (i, &phi) in p.iter().enumerate() {
                    out[(i, i)] = C64::from_polar(1.0, phi);
                }
                out
            }
            UnitarySpec::ScalarPhase(theta, base) => {
                base.as_dense()? * C64::from_polar(1.0, *theta)
            }
        })
    }

    /// `U ⊗ U†` as a dense operator on `d²`.
    pub fn tensor_with_adjoint(&self) -> Result<UnitarySpec> {
        let u = self.as_dense()?;
        UnitarySpec::dense(super::kron(&u, &u.adjoint())?)
    }

    pub fn label(&self) -> String {
        match self {
            UnitarySpec::Dense(u) => format!("dense(d={})", u.matrix().nrows()),
            UnitarySpec::ModMul(m) => format!("modmul(a={}, N={})", m.a, m.n),
            UnitarySpec::DiagonalPhases(p) => format!("diag(d={})", p.len()),
            UnitarySpec::ScalarPhase(theta, base) => format!("e^(i·{theta})·{}", base.label()),
        }
    }
}

/// Free-function alias matching the classical oracle's role.
pub fn trace_of(u: &UnitarySpec) -> C64 {
    u.trace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn modmul_dense_is_permutation() {
        let m = UnitarySpec::mod_mul(2, 3).unwrap().as_dense().unwrap();
        let one = C64::new(1.0, 0.0);
        assert_eq!(m[(0, 0)], one);
        assert_eq!(m[(2, 1)], one);
        assert_eq!(m[(1, 2)], one);
        assert_eq!(m.iter().filter(|z| z.norm() > 0.0).count(), 3);
    }

    #[test]
    fn diagonal_and_scalar_phase() {
        let d = UnitarySpec::diagonal(vec![0.0, PI])
            .unwrap()
            .as_dense()
            .unwrap();
        assert!((d[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((d[(1, 1)] + C64::new(1.0, 0.0)).norm() < 1e-15);
        let neg = UnitarySpec::identity(2)
            .with_global_phase(PI)
            .as_dense()
            .unwrap();
        assert!(super::super::max_abs_diff(&neg, &(-identity(2))) < 1e-15);
    }

    #[test]
    fn trace_examples() {
        assert_eq!(trace_of(&UnitarySpec::identity(8)), C64::new(8.0, 0.0));
        assert_eq!(
            trace_of(&UnitarySpec::mod_mul(2, 15).unwrap()),
            C64::new(1.0, 0.0)
        );
        let z = trace_of(&UnitarySpec::diagonal(vec![0.0, PI]).unwrap());
        assert!(z.norm() < 1e-15);
    }

    #[test]
    fn rejects_invalid_inputs() {
        let bad = Matrix::from_element(2, 2, C64::new(1.0, 0.0));
        assert!(matches!(
            UnitarySpec::dense(bad),
            Err(Error::NotUnitary { .. })
        ));
        assert!(matches!(
            UnitarySpec::mod_mul(3, 15),
            Err(Error::NotCoprime { gcd: 3, .. })
        ));
        assert!(matches!(
            UnitarySpec::identity(65).as_dense(),
            Err(Error::DimTooLarge { .. })
        ));
    }

    #[test]
    fn strip_nested_phases() {
        let u = UnitarySpec::identity(2)
            .with_global_phase(0.5)
            .with_global_phase(0.25);
        let (theta, core) = u.strip_global_phase();
        assert!((theta - 0.75).abs() < 1e-15);
        assert_eq!(core, &UnitarySpec::identity(2));
    }
}
