//! Semiclassical (iterative) phase estimation with one reusable control qubit.
//!
//! Round `m = 0..L` uses the power `2^p` with `p = L-1-m`. The control picks
//! up the kickback `e^{2πi·2^p·φ}` on its `|1⟩` branch, is rotated by
//! `R_m = diag(1, e^{-2πi·ω_m})` where `ω_m = Σ_{i<m} c_i 2^i / 2^{m+1}` is built
//! from the bits already measured, then goes through a Hadamard and is
//! measured. The bit of round `m` is bit `m` of `c` (least significant first).
//!
//! The outcome law is `P(c) = |G(φ - c/t)|² / t²`.

use std::f64::consts::PI;

use rand::Rng;

use crate::numtheory::{mod_pow, Fraction};

const SNAP: f64 = 1e-15;

/// `ω_m` for the bits `c_0 … c_{m-1}` stored in `bits`.
#[inline]
pub fn feedback_angle(bits: u64, m: u32) -> f64 {
    let low = bits & ((1u64 << m) - 1);
    low as f64 / (1u64 << (m + 1)) as f64
}

/// Probability that the control reads 0 given the residual phase `θ` (in turns).
#[inline]
pub fn zero_probability(theta: f64) -> f64 {
    let p = (PI * theta).cos().powi(2);
    if p < SNAP {
        0.0
    } else if p > 1.0 - SNAP {
        1.0
    } else {
        p
    }
}

/// `frac(2^p · φ)` for a real phase.
pub fn real_kick(phi: f64) -> impl Fn(u32) -> f64 {
    move |p| (phi * (1u64 << p) as f64).rem_euclid(1.0)
}

/// `frac(2^p · k/r)` computed exactly in integers.
pub fn fraction_kick(phi: Fraction) -> impl Fn(u32) -> f64 {
    let den = phi.den;
    let num = phi.num.rem_euclid(den as i64) as u64;
    move |p| {
        let shifted = (mod_pow(2, p as u64, den) as u128 * num as u128 % den as u128) as f64;
        shifted / den as f64
    }
}

/// Runs `rounds` IPE rounds with the given kickback function.
pub fn run_ipe<R, K>(rounds: u32, kick: K, rng: &mut R) -> u64
where
    R: Rng + ?Sized,
    K: Fn(u32) -> f64,
{
    let mut bits = 0u64;
    for m in 0..rounds {
        let p = rounds - 1 - m;
        let theta = kick(p) - feedback_angle(bits, m);
        if rng.random::<f64>() >= zero_probability(theta) {
            bits |= 1 << m;
        }
    }
    bits
}

pub fn semiclassical_ipe<R: Rng + ?Sized>(phi: f64, rounds: u32, rng: &mut R) -> u64 {
    assert!((1..63).contains(&rounds), "rounds out of range");
    run_ipe(rounds, real_kick(phi), rng)
}

/// Exact outcome distribution of [`run_ipe`] by enumerating all measurement
/// histories.
pub fn ipe_exact_distribution<K: Fn(u32) -> f64>(rounds: u32, kick: K) -> Vec<f64> {
    let t = 1usize << rounds;
    let mut out = vec![0.0; t];
    let mut stack = vec![(0u32, 0u64, 1.0f64)];
    while let Some((m, bits, prob)) = stack.pop() {
        if m == rounds {
            out[bits as usize] += prob;
            continue;
        }
        let p0 = zero_probability(kick(rounds - 1 - m) - feedback_angle(bits, m));
        if p0 > 0.0 {
            stack.push((m + 1, bits, prob * p0));
        }
        if p0 < 1.0 {
            stack.push((m + 1, bits | (1 << m), prob * (1.0 - p0)));
        }
    }
    out
}

/// `|G(Δ)|² = sin²(πtΔ)/sin²(πΔ)`, equal to `t²` at integer `Δ`.
pub fn fejer_kernel(delta: f64, t: u64) -> f64 {
    let s = (PI * delta).sin();
    if s.abs() < 1e-12 {
        // removable singularity; Δ is within 1e-12 of an integer
        return (t * t) as f64;
    }
    let n = (PI * t as f64 * delta).sin();
    n * n / (s * s)
}

/// Outcome law of `t`-point phase estimation at phase `φ`.
pub fn fejer_distribution(phi: f64, t: u64) -> Vec<f64> {
    let t2 = (t * t) as f64;
    (0..t)
        .map(|c| fejer_kernel(phi - c as f64 / t as f64, t) / t2)
        .collect()
}
