use nalgebra::Cholesky;

use super::{
    controlled, controlled_swap, identity, kron, max_abs_diff, partial_trace, Matrix, Subsystem,
    UnitarySpec, C64, DENSITY_TOL, MAX_PRODUCT_DIM, PSD_TOL,
};
use crate::error::{Error, Result};

/// A Hermitian, trace-one, positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Matrix);

impl DensityMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidDensity("not square".into()));
        }
        let herm = max_abs_diff(&m, &m.adjoint());
        if herm > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (deviation {herm:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        // min eigenvalue >= -PSD_TOL  <=>  M + PSD_TOL·I is PSD. Complex
        // Cholesky never fails on a negative pivot, so factor the real
        // embedding [[A, -B], [B, A]] of M = A + iB, which has the same spectrum.
        let n = m.nrows();
        let embedded = nalgebra::DMatrix::<f64>::from_fn(2 * n, 2 * n, |i, j| {
            let z = 0.5 * (m[(i % n, j % n)] + m[(j % n, i % n)].conj());
            let v = match (i < n, j < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            };
            if i == j {
                v + PSD_TOL
            } else {
                v
            }
        });
        if Cholesky::new(embedded).is_none() {
            return Err(Error::InvalidDensity("not positive semidefinite".into()));
        }
        Ok(DensityMatrix(m))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix(identity(d) * C64::new(1.0 / d as f64, 0.0))
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) column vector.
    pub fn pure(psi: &Matrix) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm2 == 0.0 {
            return Err(Error::InvalidDensity("zero vector".into()));
        }
        DensityMatrix::new(psi * psi.adjoint() * C64::new(1.0 / norm2, 0.0))
    }

    /// `Σ_k w_k |e_k⟩⟨e_k|` where `e_k` are the columns of `basis`.
    pub fn diagonal_in_basis(basis: &Matrix, weights: &[f64]) -> Result<Self> {
        if weights.len() != basis.ncols() {
            return Err(Error::DimMismatch {
                expected: basis.ncols(),
                actual: weights.len(),
            });
        }
        let diag = Matrix::from_diagonal(&nalgebra::DVector::from_iterator(
            weights.len(),
            weights.iter().map(|&w| C64::new(w, 0.0)),
        ));
        DensityMatrix::new(basis * diag * basis.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(DensityMatrix(kron(&self.0, &other.0)?))
    }
}

fn plus_state() -> Matrix {
    Matrix::from_element(2, 2, C64::new(0.5, 0.0))
}

fn check_tau_dim(d: usize) -> Result<()> {
    let dim = 2 * d * d;
    if dim > MAX_PRODUCT_DIM {
        return Err(Error::DimTooLarge {
            dim,
            limit: MAX_PRODUCT_DIM,
        });
    }
    Ok(())
}

fn require_dim(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimMismatch { expected, actual });
    }
    Ok(())
}

/// State of control ⊗ register ⊗ register after cSWAP, `U ⊗ I`, cSWAP, with
/// the control prepared in `|+⟩` and the registers in `ρ ⊗ σ`.
///
/// Evolved gate by gate; [`tau_bb_block_formula`] is the closed form.
pub fn build_tau_bb(
    u: &UnitarySpec,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<DensityMatrix> {
    let d = u.dim();
    require_dim(d, rho.dim())?;
    require_dim(d, sigma.dim())?;
    check_tau_dim(d)?;
    let cswap = controlled_swap(d)?;
    let u_first = kron(&identity(2), &kron(&u.as_dense()?, &identity(d))?)?;
    let circuit = &cswap * u_first * &cswap;
    let initial = kron(&plus_state(), &kron(rho.matrix(), sigma.matrix())?)?;
    DensityMatrix::new(&circuit * initial * circuit.adjoint())
}

/// Closed form of the black-box state:
/// `½ [[UρU†⊗σ, Uρ⊗σU†], [ρU†⊗Uσ, ρ⊗UσU†]]`.
pub fn tau_bb_block_formula(
    u: &UnitarySpec,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<Matrix> {
    let d = u.dim();
    require_dim(d, rho.dim())?;
    require_dim(d, sigma.dim())?;
    check_tau_dim(d)?;
    let um = u.as_dense()?;
    let ud = um.adjoint();
    let (r, s) = (rho.matrix(), sigma.matrix());
    let blocks = [
        kron(&(&um * r * &ud), s)?,
        kron(&(&um * r), &(s * &ud))?,
        kron(&(r * &ud), &(&um * s))?,
        kron(r, &(&um * s * &ud))?,
    ];
    let m = d * d;
    let mut out = Matrix::zeros(2 * m, 2 * m);
    for (k, block) in blocks.iter().enumerate() {
        let (bi, bj) = (k / 2, k % 2);
        out.view_mut((bi * m, bj * m), (m, m))
            .copy_from(&(block * C64::new(0.5, 0.0)));
    }
    Ok(out)
}

/// `|+⟩⟨+| ⊗ ρσ` evolved under controlled-`V`.
pub fn build_tau_ctrl(v: &Matrix, rho_sigma: &DensityMatrix) -> Result<DensityMatrix> {
    require_dim(rho_sigma.dim(), v.nrows())?;
    require_dim(v.nrows(), v.ncols())?;
    let cv = controlled(v)?;
    let initial = kron(&plus_state(), rho_sigma.matrix())?;
    DensityMatrix::new(&cv * initial * cv.adjoint())
}

/// Reduced 2×2 state of the control qubit.
pub fn control_reduced_state(tau: &DensityMatrix) -> Result<Matrix> {
    let n = tau.dim();
    if !n.is_multiple_of(2) {
        return Err(Error::DimMismatch {
            expected: n + 1,
            actual: n,
        });
    }
    partial_trace(tau.matrix(), 2, n / 2, Subsystem::B)
}

/// `2·⟨0|Tr_registers(τ)|1⟩`.
pub fn control_coherence(tau: &DensityMatrix) -> Result<C64> {
    Ok(control_reduced_state(tau)?[(0, 1)] * 2.0)
}
