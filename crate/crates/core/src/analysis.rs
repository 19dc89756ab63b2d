//! Exact predictions for black-box order finding: the outcome distribution
//! of `c`, eigenvalue and eigenvalue-pair counts, and success bounds.
//!
//! Every eigenphase of `U_a` is a multiple of `1/r`, so the `N²` phase pairs
//! of `U_a ⊗ U_a†` collapse onto `r` distinct differences `δ/r` with
//! multiplicities `M(δ) = Σ_k m(k)·m(k-δ)`, and
//! `P(c) = Σ_δ M(δ)·|G(δ/r - c/t)|² / (N²t²)`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{map_items, Exec};
use crate::numtheory::{euler_totient, gcd, is_prime, multiplicative_order, Semiprime};
use crate::order_finding::{fejer_kernel, EigenphaseTable, PhaseEstimationConfig};

/// Lower bound on `|G|²/t²` for any `c` within `1/(2t)` of a phase.
pub const WINDOW_KERNEL_FLOOR: f64 = 4.0 / (PI * PI);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub n: u64,
    pub a: u64,
    pub t: u64,
    pub probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// `c,probability` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("c,probability\n");
        for (c, p) in self.probabilities.iter().enumerate() {
            writeln!(out, "{c},{p:?}").unwrap();
        }
        out
    }
}

/// `M(δ)` for `δ = 0..r`: how many eigenphase pairs differ by `δ/r`.
pub fn pair_multiplicities(table: &EigenphaseTable) -> Vec<u64> {
    let m = table.phase_multiplicities();
    let r = m.len();
    (0..r)
        .map(|d| (0..r).map(|k| m[k] * m[(k + r - d) % r]).sum())
        .collect()
}

pub fn exact_distribution(n: u64, a: u64, t: u64, exec: Exec) -> Result<OutcomeDistribution> {
    let config = PhaseEstimationConfig::with_t(n, a, t)?;
    let table = EigenphaseTable::new(a, n)?;
    let mult = pair_multiplicities(&table);
    let r = table.order as f64;
    let norm = (n * n) as f64 * (t * t) as f64;
    let cs: Vec<u64> = (0..t).collect();
    let probabilities = map_items(exec, &cs, |&c| {
        let x = c as f64 / t as f64;
        mult.iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(d, &m)| m as f64 * fejer_kernel(d as f64 / r - x, t))
            .sum::<f64>()
            / norm
    });
    Ok(OutcomeDistribution {
        n,
        a: config.a,
        t,
        probabilities,
    })
}

/// Eigenphases `j/r` with `gcd(j, r) = 1` on orbits whose representative is
/// coprime to `N`, counted by enumeration.
pub fn count_good_eigenvalues(n: u64, a: u64) -> Result<u64> {
    let table = EigenphaseTable::new(a, n)?;
    let r = table.order;
    Ok(table
        .coprime_orbits()
        .filter(|o| o.length == r)
        .map(|o| (0..o.length).filter(|&j| gcd(j, r) == 1).count() as u64)
        .sum())
}

/// `χ = φ(r)(p-1)(q-1)/r` for `N = pq` with distinct primes.
pub fn good_eigenvalues_closed_form(p: u64, q: u64, r: u64) -> f64 {
    euler_totient(r) as f64 * ((p - 1) * (q - 1)) as f64 / r as f64
}

/// Pairs of eigenphases whose difference, in lowest terms, is `k/r` with
/// `gcd(k, r) = 1`. Enumerates all `N²` pairs.
pub fn count_usable_pairs(n: u64, a: u64) -> Result<u64> {
    let table = EigenphaseTable::new(a, n)?;
    let r = table.order;
    let phases = table.eigenphases();
    let mut count = 0;
    for x in &phases {
        for y in &phases {
            let d = x.sub_mod1(*y);
            if d.den == r && gcd(d.num as u64, r) == 1 {
                count += 1;
            }
        }
    }
    Ok(count)
}

fn distinct_factors(n: u64, p: u64, q: u64) -> Result<()> {
    Semiprime::with_factors(n, p, q)?;
    if p == q {
        return Err(Error::BadFactorization { modulus: n, p, q });
    }
    Ok(())
}

/// `4/(Nπ²)·(p-1)(q-1)·φ(r)/r`, a lower bound on the per-attempt probability
/// of reading off the order directly.
pub fn success_lower_bound(n: u64, p: u64, q: u64, a: u64) -> Result<f64> {
    distinct_factors(n, p, q)?;
    let r = multiplicative_order(a, n)?;
    Ok(WINDOW_KERNEL_FLOOR / n as f64 * good_eigenvalues_closed_form(p, q, r))
}

/// `P(2-P)`: the chance that at least one of two independent single-register
/// draws is good, when each is good with probability `P`.
pub fn parker_plenio_relation(p: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p));
    p * (2.0 - p)
}

/// `pq/((p-1)(q-1))·ln ln r`. A scale indicator only; the asymptotic
/// statement it comes from fixes no constants.
pub fn expected_runs_estimate(n: u64, p: u64, q: u64, r: u64) -> f64 {
    n as f64 / ((p - 1) * (q - 1)) as f64 * (r as f64).ln().ln()
}

/// True when `c/t` lies within `1/(2t)` of some `k/r` with `gcd(k, r) = 1`,
/// measured around the circle.
pub fn is_good_outcome(c: u64, t: u64, r: u64) -> bool {
    let rt = (r * t) as i128;
    (0..r).filter(|&k| gcd(k, r) == 1).any(|k| {
        let d = ((c * r) as i128 - (k * t) as i128).rem_euclid(rt);
        2 * d.min(rt - d) <= r as i128
    })
}

/// Probability mass on good outcomes.
pub fn good_outcome_mass(dist: &OutcomeDistribution, r: u64) -> f64 {
    dist.probabilities
        .iter()
        .enumerate()
        .filter(|(c, _)| is_good_outcome(*c as u64, dist.t, r))
        .map(|(_, p)| p)
        .sum()
}

/// `gcd(α + βr, r) = 1` exactly when `gcd(α, r) = 1`.
pub fn coprime_shift_holds(alpha: u64, beta: u64, r: u64) -> bool {
    (gcd(alpha + beta * r, r) == 1) == (gcd(alpha, r) == 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingReport {
    pub n: u64,
    pub a: u64,
    pub p: u64,
    pub q: u64,
    pub r: u64,
    /// `m[k]`: eigenvectors with phase `k/r`.
    pub phase_multiplicities: Vec<u64>,
    pub chi: u64,
    pub chi_closed_form: f64,
    /// `χ(2N-χ)`: pairs with at least one good member.
    pub num_c: u64,
    pub usable_pairs_bruteforce: u64,
    /// `usable_pairs >= χ(2N-χ)`.
    pub usable_pairs_at_least_num_c: bool,
    /// `usable_pairs >= N·χ`.
    pub usable_pairs_at_least_n_chi: bool,
    /// Register values whose orbit is shorter than `r`.
    pub short_orbit_points: u64,
    /// `p + q - 1`, the count of values not coprime to `N`.
    pub short_orbit_bound: u64,
    pub success_lower_bound: f64,
    pub t: u64,
    pub good_outcome_mass: f64,
    /// Fraction of good eigenvalues, the single-register success scale.
    pub single_register_p: f64,
    /// `P(2-P)` of the above; equals `num_c / N²`.
    pub parker_plenio: f64,
    pub num_c_fraction: f64,
    pub expected_runs_estimate: f64,
}

impl CountingReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Builds the counting report for `N = pq` (distinct primes) and base `a`.
pub fn counting_report(n: u64, a: u64, exec: Exec) -> Result<CountingReport> {
    let (p, q) = match Semiprime::factored(n)?.factors {
        Some((p, q)) if p != q => (p, q),
        _ => {
            return Err(Error::BadFactorization {
                modulus: n,
                p: 0,
                q: 0,
            })
        }
    };
    let table = EigenphaseTable::new(a, n)?;
    let r = table.order;
    let chi = count_good_eigenvalues(n, a)?;
    let num_c = chi * (2 * n - chi);
    let usable = count_usable_pairs(n, a)?;
    let short = (0..n).filter(|&x| table.orbit_of(x).length != r).count() as u64;
    let config = PhaseEstimationConfig::new(n, a)?;
    let dist = exact_distribution(n, a, config.t, exec)?;
    let single = chi as f64 / n as f64;
    Ok(CountingReport {
        n,
        a: table.a,
        p,
        q,
        r,
        phase_multiplicities: table.phase_multiplicities(),
        chi,
        chi_closed_form: good_eigenvalues_closed_form(p, q, r),
        num_c,
        usable_pairs_bruteforce: usable,
        usable_pairs_at_least_num_c: usable >= num_c,
        usable_pairs_at_least_n_chi: usable >= n * chi,
        short_orbit_points: short,
        short_orbit_bound: p + q - 1,
        success_lower_bound: success_lower_bound(n, p, q, a)?,
        t: config.t,
        good_outcome_mass: good_outcome_mass(&dist, r),
        single_register_p: single,
        parker_plenio: parker_plenio_relation(single),
        num_c_fraction: num_c as f64 / (n * n) as f64,
        expected_runs_estimate: expected_runs_estimate(n, p, q, r),
    })
}

/// Products of two distinct primes up to `max_n`.
pub fn semiprimes_up_to(max_n: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for n in 6..=max_n {
        if let Some(p) = (2..n).find(|p| n % p == 0) {
            let q = n / p;
            if q != p && is_prime(q) {
                out.push((n, p, q));
            }
        }
    }
    out
}

/// Counting reports for every distinct-prime semiprime `N <= max_n` and
/// every `a` in `(1, N)` coprime to `N`.
pub fn counting_sweep(max_n: u64, exec: Exec) -> Result<Vec<CountingReport>> {
    let pairs: Vec<(u64, u64)> = semiprimes_up_to(max_n)
        .into_iter()
        .flat_map(|(n, _, _)| (2..n).filter(move |&a| gcd(a, n) == 1).map(move |a| (n, a)))
        .collect();
    map_items(exec, &pairs, |&(n, a)| {
        counting_report(n, a, Exec::Sequential)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn distribution_15_2() {
        let d = exact_distribution(15, 2, 256, Exec::Sequential).unwrap();
        assert!((d.probabilities[0] - 59.0 / 225.0).abs() < 1e-12);
        assert!((d.probabilities[64] - 54.0 / 225.0).abs() < 1e-12);
        assert!((d.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distribution_sums_to_one_for_non_dyadic_orders() {
        for (n, a) in [(21, 2), (35, 2), (33, 5)] {
            let t = PhaseEstimationConfig::new(n, a).unwrap().t;
            let d = exact_distribution(n, a, t, Exec::Parallel).unwrap();
            assert!((d.total() - 1.0).abs() < 1e-9);
            assert!(d.probabilities.iter().all(|&p| p >= 0.0));
        }
    }

    #[test]
    fn pair_multiplicities_15_2() {
        let table = EigenphaseTable::new(2, 15).unwrap();
        assert_eq!(table.phase_multiplicities(), vec![5, 3, 4, 3]);
        assert_eq!(pair_multiplicities(&table), vec![59, 54, 58, 54]);
    }

    #[test]
    fn counting_examples() {
        assert_eq!(count_good_eigenvalues(15, 2).unwrap(), 4);
        assert_eq!(count_good_eigenvalues(21, 2).unwrap(), 4);
        assert_eq!(count_usable_pairs(15, 2).unwrap(), 108);
        assert_eq!(good_eigenvalues_closed_form(3, 5, 4), 4.0);
        assert_eq!(good_eigenvalues_closed_form(3, 7, 6), 4.0);
        // r = 2: usable differences are exactly 1/2
        let m = EigenphaseTable::new(4, 15).unwrap().phase_multiplicities();
        assert_eq!(count_usable_pairs(15, 4).unwrap(), 2 * m[0] * m[1]);
    }

    #[test]
    fn bounds() {
        let b15 = success_lower_bound(15, 3, 5, 2).unwrap();
        assert!((b15 - 16.0 / (15.0 * PI * PI)).abs() < 1e-15);
        assert!((b15 - 0.1081).abs() < 1e-4);
        let b21 = success_lower_bound(21, 3, 7, 2).unwrap();
        assert!((b21 - 0.0772).abs() < 1e-4);
        assert!(matches!(
            success_lower_bound(15, 3, 7, 2),
            Err(Error::BadFactorization { .. })
        ));
    }

    #[test]
    fn parker_plenio_examples() {
        assert_eq!(parker_plenio_relation(0.0), 0.0);
        assert_eq!(parker_plenio_relation(1.0), 1.0);
        assert!((parker_plenio_relation(0.1) - 0.19).abs() < 1e-15);
    }

    #[test]
    fn expected_runs_examples() {
        assert!((expected_runs_estimate(15, 3, 5, 4) - 0.6124).abs() < 1e-4);
        assert!((expected_runs_estimate(21, 3, 7, 6) - 1.0206).abs() < 1e-4);
        assert!(expected_runs_estimate(15, 3, 5, 8) > expected_runs_estimate(15, 3, 5, 4));
    }

    #[test]
    fn good_mass_15_2() {
        let d = exact_distribution(15, 2, 256, Exec::Sequential).unwrap();
        assert!((good_outcome_mass(&d, 4) - 108.0 / 225.0).abs() < 1e-12);
    }

    #[test]
    fn report_15_2() {
        let rep = counting_report(15, 2, Exec::Sequential).unwrap();
        assert_eq!(
            (rep.r, rep.chi, rep.num_c, rep.usable_pairs_bruteforce),
            (4, 4, 104, 108)
        );
        assert!(rep.usable_pairs_at_least_num_c);
        assert!((rep.parker_plenio - rep.num_c_fraction).abs() < 1e-15);
        assert!(rep.short_orbit_points <= rep.short_orbit_bound);
    }

    #[test]
    fn lemma_counterexample_21_2() {
        let rep = counting_report(21, 2, Exec::Sequential).unwrap();
        assert_eq!(rep.phase_multiplicities, vec![6, 2, 4, 3, 4, 2]);
        assert_eq!(rep.usable_pairs_bruteforce, 128);
        assert_eq!(rep.num_c, 152);
        assert!(!rep.usable_pairs_at_least_num_c);
        assert!(rep.usable_pairs_at_least_n_chi);
    }

    #[test]
    fn chi_matches_closed_form_on_sweep() {
        for rep in counting_sweep(50, Exec::Parallel).unwrap() {
            assert_eq!(
                rep.chi as f64, rep.chi_closed_form,
                "N={} a={}",
                rep.n, rep.a
            );
            assert!(rep.usable_pairs_at_least_n_chi, "N={} a={}", rep.n, rep.a);
            assert!(rep.good_outcome_mass >= rep.success_lower_bound);
        }
    }

    proptest! {
        #[test]
        fn coprime_shift(alpha in 0u64..10_000, beta in 0u64..10_000, r in 1u64..=10_000) {
            prop_assert!(coprime_shift_holds(alpha, beta, r));
        }

        #[test]
        fn multiplicities_sum_to_n_squared(idx in 0usize..1000) {
            let sp = semiprimes_up_to(50);
            let (n, _, _) = sp[idx % sp.len()];
            let bases: Vec<u64> = (2..n).filter(|&a| gcd(a, n) == 1).collect();
            let a = bases[idx % bases.len()];
            let table = EigenphaseTable::new(a, n).unwrap();
            prop_assert_eq!(pair_multiplicities(&table).iter().sum::<u64>(), n * n);
        }
    }
}
