//! Literal simulation of the black-box factoring circuit on basis-state
//! registers.
//!
//! Round with power `2^p` and `A = a^{2^p} mod N`: cSWAP, `U_a^{2^p}` on the
//! first register, cSWAP. On the control's `|0⟩` branch that maps
//! `(u, v) → (A·u, v)`, on `|1⟩` it maps `(u, v) → (u, A·v)`. Then the
//! feedback rotation, a Hadamard, and a projective measurement that collapses
//! the joint register state.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;

use super::ipe::feedback_angle;
use super::table::PhaseEstimationConfig;
use crate::error::{Error, Result};
use crate::numtheory::{mod_pow, mul_mod, orbit_length};
use crate::qsim::C64;

const COLLAPSE_FLOOR: f64 = 1e-15;

/// Sparse joint state of the two registers, keyed by `(u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchState {
    n: u64,
    amps: BTreeMap<(u64, u64), C64>,
    bound: usize,
}

impl BranchState {
    pub fn basis(n: u64, a: u64, x: u64, y: u64) -> Result<Self> {
        let bound = (orbit_length(x, a, n)? * orbit_length(y, a, n)?) as usize;
        let mut amps = BTreeMap::new();
        amps.insert((x % n, y % n), C64::new(1.0, 0.0));
        Ok(BranchState { n, amps, bound })
    }

    pub fn support(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|z| z.norm_sqr()).sum()
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (&(u64, u64), &C64)> {
        self.amps.iter()
    }

    /// Unnormalized post-measurement states for outcomes 0 and 1.
    fn branch(&self, mult: u64, feedback: f64) -> [BTreeMap<(u64, u64), C64>; 2] {
        let rot = C64::from_polar(0.5, -2.0 * PI * feedback);
        let mut out = [BTreeMap::new(), BTreeMap::new()];
        for (&(u, v), &amp) in &self.amps {
            // control |0⟩: U on the first register
            let k0 = (mul_mod(mult, u, self.n), v);
            let z0 = amp * 0.5;
            *out[0].entry(k0).or_default() += z0;
            *out[1].entry(k0).or_default() += z0;
            // control |1⟩: U on the second register, then R and H
            let k1 = (u, mul_mod(mult, v, self.n));
            let z1 = amp * rot;
            *out[0].entry(k1).or_default() += z1;
            *out[1].entry(k1).or_default() -= z1;
        }
        out
    }

    fn collapse(&self, amps: BTreeMap<(u64, u64), C64>, prob: f64) -> Result<Self> {
        let scale = 1.0 / prob.sqrt();
        let amps: BTreeMap<_, _> = amps
            .into_iter()
            .filter(|(_, z)| z.norm_sqr() > COLLAPSE_FLOOR * prob)
            .map(|(k, z)| (k, z * scale))
            .collect();
        if amps.len() > self.bound {
            return Err(Error::StateBlowup {
                support: amps.len(),
                bound: self.bound,
            });
        }
        Ok(BranchState {
            n: self.n,
            amps,
            bound: self.bound,
        })
    }
}

fn norm_sqr(m: &BTreeMap<(u64, u64), C64>) -> f64 {
    m.values().map(|z| z.norm_sqr()).sum()
}

fn outcome_probs(branches: &[BTreeMap<(u64, u64), C64>; 2]) -> (f64, f64) {
    let (p0, p1) = (norm_sqr(&branches[0]), norm_sqr(&branches[1]));
    let s = p0 + p1;
    let snap = |p: f64| if p / s < COLLAPSE_FLOOR { 0.0 } else { p / s };
    (snap(p0), snap(p1))
}

/// One full attempt starting from `|x⟩|y⟩`; returns `c` and the largest
/// support seen.
pub fn run_faithful<R: Rng + ?Sized>(
    config: &PhaseEstimationConfig,
    x: u64,
    y: u64,
    rng: &mut R,
) -> Result<(u64, usize)> {
    let mut state = BranchState::basis(config.n, config.a, x, y)?;
    let mut bits = 0u64;
    let mut max_support = state.support();
    for m in 0..config.rounds {
        let p = config.rounds - 1 - m;
        let mult = mod_pow(config.a, 1u64 << p, config.n);
        let [b0, b1] = state.branch(mult, feedback_angle(bits, m));
        let (p0, p1) = outcome_probs(&[b0.clone(), b1.clone()]);
        let one = rng.random::<f64>() >= p0;
        state = if one {
            bits |= 1 << m;
            state.collapse(b1, p1)?
        } else {
            state.collapse(b0, p0)?
        };
        max_support = max_support.max(state.support());
    }
    Ok((bits, max_support))
}

/// Exact distribution of `c` for registers starting in `|x⟩|y⟩`, by
/// enumerating every measurement history.
pub fn faithful_exact_distribution(
    config: &PhaseEstimationConfig,
    x: u64,
    y: u64,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; config.t as usize];
    let start = BranchState::basis(config.n, config.a, x, y)?;
    let mut stack = vec![(0u32, 0u64, 1.0f64, start)];
    while let Some((m, bits, prob, state)) = stack.pop() {
        if m == config.rounds {
            out[bits as usize] += prob;
            continue;
        }
        let p = config.rounds - 1 - m;
        let mult = mod_pow(config.a, 1u64 << p, config.n);
        let [b0, b1] = state.branch(mult, feedback_angle(bits, m));
        let (p0, p1) = outcome_probs(&[b0.clone(), b1.clone()]);
        if p0 > 0.0 {
            stack.push((m + 1, bits, prob * p0, state.collapse(b0, p0)?));
        }
        if p1 > 0.0 {
            stack.push((m + 1, bits | (1 << m), prob * p1, state.collapse(b1, p1)?));
        }
    }
    Ok(out)
}
