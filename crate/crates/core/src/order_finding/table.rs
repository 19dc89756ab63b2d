use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{gcd, mul_mod, multiplicative_order, Fraction};

/// One cycle of `x ↦ a·x mod N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub representative: u64,
    pub length: u64,
    /// `g, g·a, g·a², …` in cycle order.
    pub members: Vec<u64>,
}

/// Orbit decomposition of `U_a`. Each orbit of length `r_d` contributes the
/// eigenphases `j/r_d`, `j = 0..r_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenphaseTable {
    pub n: u64,
    pub a: u64,
    pub order: u64,
    pub orbits: Vec<Orbit>,
    orbit_of: Vec<usize>,
}

impl EigenphaseTable {
    pub fn new(a: u64, n: u64) -> Result<Self> {
        let order = multiplicative_order(a, n)?;
        let a = a % n;
        let mut orbit_of = vec![usize::MAX; n as usize];
        let mut orbits = Vec::new();
        for g in 0..n {
            if orbit_of[g as usize] != usize::MAX {
                continue;
            }
            let mut members = vec![g];
            orbit_of[g as usize] = orbits.len();
            let mut x = mul_mod(g, a, n);
            while x != g {
                orbit_of[x as usize] = orbits.len();
                members.push(x);
                x = mul_mod(x, a, n);
            }
            orbits.push(Orbit {
                representative: g,
                length: members.len() as u64,
                members,
            });
        }
        Ok(EigenphaseTable {
            n,
            a,
            order,
            orbits,
            orbit_of,
        })
    }

    pub fn orbit_of(&self, x: u64) -> &Orbit {
        &self.orbits[self.orbit_of[x as usize]]
    }

    /// `m[k]` = number of eigenvectors with phase `k/r`, for `k = 0..r`.
    pub fn phase_multiplicities(&self) -> Vec<u64> {
        let r = self.order;
        let mut m = vec![0u64; r as usize];
        for orbit in &self.orbits {
            let step = r / orbit.length;
            for j in 0..orbit.length {
                m[(j * step) as usize] += 1;
            }
        }
        m
    }

    /// All `N` eigenphases as reduced fractions.
    pub fn eigenphases(&self) -> Vec<Fraction> {
        self.orbits
            .iter()
            .flat_map(|o| (0..o.length).map(move |j| Fraction::new(j as i64, o.length)))
            .collect()
    }

    /// `(phase, eigenvalue count)` over orbits whose representative is coprime to `N`.
    pub fn coprime_orbits(&self) -> impl Iterator<Item = &Orbit> {
        self.orbits
            .iter()
            .filter(move |o| gcd(o.representative, self.n) == 1)
    }

    /// Draws one eigenphase of `U_a` with every eigenvector equally likely:
    /// a uniform register state picks the orbit, then `j` is uniform on `[0, r_d)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Fraction {
        let x = rng.random_range(0..self.n);
        let rd = self.orbit_of(x).length;
        let j = rng.random_range(0..rd);
        Fraction::new(j as i64, rd)
    }
}

pub fn eigenphase_sample<R: Rng + ?Sized>(table: &EigenphaseTable, rng: &mut R) -> Fraction {
    table.sample(rng)
}

/// Phase-estimation parameters: `t = 2^L` with `N² <= t <= 2N²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseEstimationConfig {
    pub n: u64,
    pub a: u64,
    pub t: u64,
    pub rounds: u32,
    pub order: u64,
}

impl PhaseEstimationConfig {
    /// Uses the smallest admissible `t`.
    pub fn new(n: u64, a: u64) -> Result<Self> {
        let t = (n * n).next_power_of_two();
        Self::with_t(n, a, t)
    }

    pub fn with_t(n: u64, a: u64, t: u64) -> Result<Self> {
        if !t.is_power_of_two() || t < n * n || t > 2 * n * n {
            return Err(Error::BadT { t, modulus: n });
        }
        let order = multiplicative_order(a, n)?;
        Ok(PhaseEstimationConfig {
            n,
            a: a % n,
            t,
            rounds: t.trailing_zeros(),
            order,
        })
    }
}
