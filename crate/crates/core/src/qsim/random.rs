//! Random test instances: Haar unitaries, random mixed states, and unitaries
//! with a known eigenbasis.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{DensityMatrix, Matrix, C64};

fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-random `d×d` unitary (QR of a Ginibre matrix with the phase fix on R).
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix {
    let qr = gaussian_matrix(d, d, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random full-rank mixed state `G G† / tr(G G†)`.
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    let g = gaussian_matrix(d, d, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let mut m = m * C64::new(1.0 / tr, 0.0);
    // exact Hermiticity after rounding
    m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::new(m).expect("G G† is a valid state")
}

/// A probability vector of length `d`.
pub fn random_weights<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..d).map(|_| rng.random::<f64>() + 1e-3).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// A unitary `U = W diag(e^{iλ}) W†` returned with its eigenbasis `W` and phases `λ`.
pub fn random_unitary_with_eigenbasis<R: Rng + ?Sized>(
    d: usize,
    rng: &mut R,
) -> (Matrix, Matrix, Vec<f64>) {
    let w = random_unitary(d, rng);
    let phases: Vec<f64> = (0..d)
        .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect();
    let diag = Matrix::from_diagonal(&nalgebra::DVector::from_iterator(
        d,
        phases.iter().map(|&p| C64::from_polar(1.0, p)),
    ));
    let u = &w * diag * w.adjoint();
    (u, w, phases)
}
