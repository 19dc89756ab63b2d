use rand::Rng;
use serde::{Deserialize, Serialize};

use super::faithful::run_faithful;
use super::ipe::{fraction_kick, run_ipe};
use super::table::{EigenphaseTable, PhaseEstimationConfig};
use crate::error::{Error, Result};
use crate::exec::{domain, map_batches, stream_rng, Exec};
use crate::numtheory::{
    convergents, factor_from_order, factorize, gcd, is_prime, mod_pow, prime_power, recover_order,
    Fraction,
};

/// Which simulation produced an attempt.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttemptPath {
    /// Phase estimation on a sampled eigenphase difference.
    #[default]
    Eigenpath,
    /// Branch-state simulation of the controlled-SWAP circuit.
    Faithful,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptRecord {
    pub index: u64,
    pub a: u64,
    pub path: AttemptPath,
    /// Eigenphases drawn for `U_a` and `U_a†` (eigenpath only).
    pub eigenphases: Option<(Fraction, Fraction)>,
    /// Initial basis states of the two registers (faithful path only).
    pub registers: Option<(u64, u64)>,
    pub c: u64,
    /// Smallest candidate `v` with `a^v ≡ 1`, if any.
    pub order_candidate: Option<u64>,
    /// The candidate is the true order.
    pub order_recovered: bool,
    /// A convergent denominator of `c/t` is the order itself, no rescue needed.
    pub direct_hit: bool,
    pub factors: Option<(u64, u64)>,
}

impl AttemptRecord {
    fn new(config: &PhaseEstimationConfig, index: u64, path: AttemptPath, c: u64) -> Self {
        let (n, a, r) = (config.n, config.a, config.order);
        let order_candidate = recover_order(c, config.t, a, n);
        let direct_hit = convergents(c, config.t, n).iter().any(|f| f.den == r);
        let factors = order_candidate.and_then(|v| factor_from_order(a, reduce_order(a, v, n), n));
        AttemptRecord {
            index,
            a,
            path,
            eigenphases: None,
            registers: None,
            c,
            order_candidate,
            order_recovered: order_candidate == Some(r),
            direct_hit,
            factors,
        }
    }
}

/// Strips prime factors from a known period `v` of `a` while it stays a
/// period, leaving the multiplicative order.
pub fn reduce_order(a: u64, mut v: u64, n: u64) -> u64 {
    for (p, _) in factorize(v) {
        while v.is_multiple_of(p) && mod_pow(a, v / p, n) == 1 {
            v /= p;
        }
    }
    v
}

/// One eigenpath attempt. `forced` pins the two eigenphases instead of
/// drawing them from `table`.
pub fn run_attempt_eigenpath<R: Rng + ?Sized>(
    config: &PhaseEstimationConfig,
    table: &EigenphaseTable,
    index: u64,
    forced: Option<(Fraction, Fraction)>,
    rng: &mut R,
) -> AttemptRecord {
    let (p1, p2) = forced.unwrap_or_else(|| (table.sample(rng), table.sample(rng)));
    let phi = p1.sub_mod1(p2);
    let c = run_ipe(config.rounds, fraction_kick(phi), rng);
    let mut rec = AttemptRecord::new(config, index, AttemptPath::Eigenpath, c);
    rec.eigenphases = Some((p1, p2));
    rec
}

/// One faithful attempt from `|x⟩|y⟩`; `None` draws both uniformly.
pub fn run_attempt_faithful<R: Rng + ?Sized>(
    config: &PhaseEstimationConfig,
    index: u64,
    registers: Option<(u64, u64)>,
    rng: &mut R,
) -> Result<AttemptRecord> {
    let (x, y) =
        registers.unwrap_or_else(|| (rng.random_range(0..config.n), rng.random_range(0..config.n)));
    let (c, _) = run_faithful(config, x, y, rng)?;
    let mut rec = AttemptRecord::new(config, index, AttemptPath::Faithful, c);
    rec.registers = Some((x, y));
    Ok(rec)
}

/// `count` independent attempts with fresh registers, reproducible for a
/// given seed whatever the execution mode.
pub fn sample_attempts(
    config: &PhaseEstimationConfig,
    count: u64,
    path: AttemptPath,
    seed: u64,
    exec: Exec,
) -> Result<Vec<AttemptRecord>> {
    let table = EigenphaseTable::new(config.a, config.n)?;
    let dom = match path {
        AttemptPath::Eigenpath => domain::ATTEMPTS,
        AttemptPath::Faithful => domain::FAITHFUL,
    };
    let batches = map_batches(exec, seed, dom, count, |rng, start, len| {
        (start..start + len)
            .map(|i| match path {
                AttemptPath::Eigenpath => Ok(run_attempt_eigenpath(config, &table, i, None, rng)),
                AttemptPath::Faithful => run_attempt_faithful(config, i, None, rng),
            })
            .collect::<Result<Vec<_>>>()
    });
    let mut out = Vec::with_capacity(count as usize);
    for batch in batches {
        out.extend(batch?);
    }
    Ok(out)
}

/// Histogram of `c` over `[0, t)`.
pub fn outcome_histogram(records: &[AttemptRecord], t: u64) -> Vec<u64> {
    let mut h = vec![0u64; t as usize];
    for r in records {
        h[r.c as usize] += 1;
    }
    h
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorConfig {
    pub seed: u64,
    pub max_attempts: usize,
    /// Fixed base; drawn at random when absent.
    pub a: Option<u64>,
    pub path: AttemptPath,
    /// Keep running every attempt after the first success.
    pub sample_all: bool,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            seed: 0,
            max_attempts: 500,
            a: None,
            path: AttemptPath::Eigenpath,
            sample_all: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorMethod {
    /// A drawn base shared a factor with `N`.
    GcdShortcut {
        a: u64,
    },
    OrderFinding {
        a: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactoringResult {
    pub n: u64,
    pub factors: (u64, u64),
    pub method: FactorMethod,
    /// Attempts run in total (including any after the first success).
    pub attempts: usize,
    /// Bases used, in order.
    pub bases: Vec<u64>,
    pub records: Vec<AttemptRecord>,
    pub order_recovery_rate: f64,
    pub direct_hit_rate: f64,
    pub factor_rate: f64,
}

fn check_input(n: u64) -> Result<()> {
    if n < 4 || is_prime(n) {
        return Err(Error::NotComposite(n));
    }
    if n.is_multiple_of(2) {
        return Err(Error::EvenInput(n));
    }
    if let Some((base, exp)) = prime_power(n) {
        return Err(Error::PrimePower { n, base, exp });
    }
    Ok(())
}

fn split(n: u64, f: u64) -> (u64, u64) {
    let g = n / f;
    (f.min(g), f.max(g))
}

enum Base {
    Coprime(u64),
    Shortcut(u64, (u64, u64)),
}

/// Factors an odd composite `N` that is not a prime power.
pub fn factor(n: u64, config: &FactorConfig) -> Result<FactoringResult> {
    check_input(n)?;
    let mut draws = 0u64;
    let mut next_base = || {
        let a = config.a.unwrap_or_else(|| {
            let mut rng = stream_rng(config.seed, domain::RANDOM_INSTANCES, draws);
            draws += 1;
            rng.random_range(2..n)
        });
        match gcd(a, n) {
            1 => Base::Coprime(a),
            g => Base::Shortcut(a, split(n, g)),
        }
    };

    let mut bases = Vec::new();
    let mut found: Option<((u64, u64), FactorMethod)> = None;
    let mut records: Vec<AttemptRecord> = Vec::new();
    let mut current: Option<(PhaseEstimationConfig, EigenphaseTable)> = None;
    let mut attempt = 0usize;

    while attempt < config.max_attempts {
        let (pe, table) = match &current {
            Some(c) => c,
            None => match next_base() {
                Base::Shortcut(a, f) => {
                    bases.push(a);
                    if found.is_none() {
                        found = Some((f, FactorMethod::GcdShortcut { a }));
                    }
                    // a fixed base cannot be redrawn, and nothing is left to sample
                    if !config.sample_all || config.a.is_some() {
                        break;
                    }
                    continue;
                }
                Base::Coprime(a) => {
                    bases.push(a);
                    let pe = PhaseEstimationConfig::new(n, a)?;
                    current = Some((pe, EigenphaseTable::new(a, n)?));
                    current.as_ref().unwrap()
                }
            },
        };
        let mut rng = stream_rng(config.seed, domain::DRIVER, attempt as u64);
        let rec = match config.path {
            AttemptPath::Eigenpath => {
                run_attempt_eigenpath(pe, table, attempt as u64, None, &mut rng)
            }
            AttemptPath::Faithful => run_attempt_faithful(pe, attempt as u64, None, &mut rng)?,
        };
        attempt += 1;
        let a = rec.a;
        let verified = rec.order_candidate.is_some();
        match rec.factors {
            Some(f) => {
                if found.is_none() {
                    found = Some((f, FactorMethod::OrderFinding { a }));
                }
            }
            // the order is known and this base cannot split N: try another
            None if verified && config.a.is_none() => current = None,
            None => {}
        }
        records.push(rec);
        if found.is_some() && !config.sample_all {
            break;
        }
    }

    let (factors, method) = found.ok_or(Error::AttemptCapExceeded(config.max_attempts))?;
    let rate = |f: fn(&AttemptRecord) -> bool| {
        if records.is_empty() {
            0.0
        } else {
            records.iter().filter(|r| f(r)).count() as f64 / records.len() as f64
        }
    };
    Ok(FactoringResult {
        n,
        factors,
        method,
        attempts: records.len(),
        bases,
        order_recovery_rate: rate(|r| r.order_recovered),
        direct_hit_rate: rate(|r| r.direct_hit),
        factor_rate: rate(|r| r.factors.is_some()),
        records,
    })
}
