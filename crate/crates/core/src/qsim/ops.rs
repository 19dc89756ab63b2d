use super::{Matrix, C64, MAX_PRODUCT_DIM};
use crate::error::{Error, Result};

fn check_dim(dim: usize) -> Result<()> {
    if dim > MAX_PRODUCT_DIM {
        return Err(Error::DimTooLarge {
            dim,
            limit: MAX_PRODUCT_DIM,
        });
    }
    Ok(())
}

pub fn identity(d: usize) -> Matrix {
    Matrix::identity(d, d)
}

pub fn adjoint(m: &Matrix) -> Matrix {
    m.adjoint()
}

pub fn kron(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    check_dim(a.nrows() * b.nrows())?;
    check_dim(a.ncols() * b.ncols())?;
    Ok(a.kronecker(b))
}

/// Which factor of `A ⊗ B` to trace out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial trace of a square matrix on `C^{dim_a} ⊗ C^{dim_b}` over `traced`.
pub fn partial_trace(m: &Matrix, dim_a: usize, dim_b: usize, traced: Subsystem) -> Result<Matrix> {
    let n = dim_a * dim_b;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimMismatch {
            expected: n,
            actual: m.nrows(),
        });
    }
    Ok(match traced {
        Subsystem::B => Matrix::from_fn(dim_a, dim_a, |i, j| {
            (0..dim_b).map(|k| m[(i * dim_b + k, j * dim_b + k)]).sum()
        }),
        Subsystem::A => Matrix::from_fn(dim_b, dim_b, |i, j| {
            (0..dim_a).map(|k| m[(k * dim_b + i, k * dim_b + j)]).sum()
        }),
    })
}

/// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ U`.
pub fn controlled(u: &Matrix) -> Result<Matrix> {
    let d = u.nrows();
    check_dim(2 * d)?;
    let mut out = Matrix::zeros(2 * d, 2 * d);
    out.view_mut((0, 0), (d, d)).fill_with_identity();
    out.view_mut((d, d), (d, d)).copy_from(u);
    Ok(out)
}

/// `diag(1, e^{iθ})` on the control qubit.
pub fn phase_gate(theta: f64) -> Matrix {
    let mut m = Matrix::identity(2, 2);
    m[(1, 1)] = C64::from_polar(1.0, theta);
    m
}

/// SWAP on `C^d ⊗ C^d`: `S|i⟩|j⟩ = |j⟩|i⟩`.
pub fn swap_gate(d: usize) -> Result<Matrix> {
    check_dim(d * d)?;
    let mut m = Matrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            m[(j * d + i, i * d + j)] = C64::new(1.0, 0.0);
        }
    }
    Ok(m)
}

/// Controlled-SWAP of two `d`-level registers.
pub fn controlled_swap(d: usize) -> Result<Matrix> {
    check_dim(2 * d * d)?;
    controlled(&swap_gate(d)?)
}

pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `max |U†U - I|` entrywise.
pub fn unitarity_deviation(u: &Matrix) -> f64 {
    let prod = u.adjoint() * u;
    max_abs_diff(&prod, &identity(u.nrows()))
}
