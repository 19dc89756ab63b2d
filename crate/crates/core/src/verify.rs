//! The invariant suite run by `bbdqc1 verify`.
//!
//! Hard checks decide the exit status. Soft checks report claims that are
//! known not to hold in general (or are only quoted) without failing the run.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    coprime_shift_holds, counting_sweep, exact_distribution, success_lower_bound, CountingReport,
};
use crate::dqc1::{bb_dqc1_exact, bb_dqc1_sample, dqc1_exact, dqc1_sample};
use crate::error::Result;
use crate::exec::{domain, map_batches, stream_rng, Exec};
use crate::numtheory::{euler_totient, gcd, multiplicative_order, orbit_length, recover_order};
use crate::order_finding::{
    faithful_exact_distribution, fejer_distribution, ipe_exact_distribution, outcome_histogram,
    real_kick, sample_attempts, semiclassical_ipe, AttemptPath, PhaseEstimationConfig,
};
use crate::qsim::{
    build_tau_bb, build_tau_ctrl, control_coherence, controlled, identity, kron, max_abs_diff,
    phase_gate, random, tau_bb_block_formula, DensityMatrix, UnitarySpec, C64,
};
use crate::stats::{chi_square_test, empirical, tv_distance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Hard,
    Soft,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub severity: Severity,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub quick: bool,
    pub checks: Vec<CheckResult>,
    /// All hard checks passed.
    pub passed: bool,
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub quick: bool,
    /// Test hook: feed the phase-sensitive standard value into the black-box
    /// phase-invariance check so it must fail.
    pub break_phase_invariance: bool,
    pub exec: Exec,
}

type Outcome = Result<(bool, String)>;

struct Suite {
    opts: VerifyOptions,
    checks: Vec<CheckResult>,
}

impl Suite {
    fn run(&mut self, name: &str, severity: Severity, f: impl FnOnce(&VerifyOptions) -> Outcome) {
        let (passed, detail) = match f(&self.opts) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        self.checks.push(CheckResult {
            name: name.to_string(),
            severity,
            passed,
            detail,
        });
    }

    fn hard(&mut self, name: &str, f: impl FnOnce(&VerifyOptions) -> Outcome) {
        self.run(name, Severity::Hard, f)
    }

    fn soft(&mut self, name: &str, f: impl FnOnce(&VerifyOptions) -> Outcome) {
        self.run(name, Severity::Soft, f)
    }
}

fn sweep_limit(o: &VerifyOptions) -> u64 {
    if o.quick {
        35
    } else {
        50
    }
}

fn samples(o: &VerifyOptions, full: u64) -> u64 {
    if o.quick {
        full / 5
    } else {
        full
    }
}

pub fn run_suite(opts: VerifyOptions) -> VerifyReport {
    let mut s = Suite {
        opts,
        checks: Vec::new(),
    };

    // numtheory
    s.hard("numtheory.orbit_length_divides_order", check_orbits);
    s.hard("numtheory.coprime_count_is_totient", check_totient);
    s.hard("numtheory.recover_order_window", check_recover_window);

    // qsim-core and dqc1
    s.hard("dqc1.bb_trace_identity", check_bb_trace_identity);
    s.hard(
        "dqc1.bb_equals_standard_on_u_tensor_udag",
        check_bb_vs_standard,
    );
    s.hard("qsim.tau_bb_block_formula", check_tau_block);
    s.hard("qsim.tau_bb_equals_controlled_udag_u", check_tau_ctrl);
    s.hard("qsim.control_coherence_product", check_coherence);
    s.hard("dqc1.global_phase_invariance", check_phase_invariance);
    s.hard(
        "dqc1.controlled_phase_decomposition",
        check_phase_decomposition,
    );
    s.hard("dqc1.samplers_unbiased", check_unbiased);

    // order finding
    s.hard("order_finding.t_window", check_t_window);
    s.hard("order_finding.ipe_dyadic_exact", check_dyadic);
    s.hard("order_finding.ipe_fejer_chi_square", check_fejer_chi2);
    s.hard("order_finding.faithful_exact_average", check_faithful_exact);
    s.hard("order_finding.faithful_vs_eigenpath_tv", check_faithful_tv);

    // analysis
    s.hard("analysis.exact_distribution_15_2", check_exact_15_2);
    s.hard("analysis.exact_vs_eigenpath_tv", check_exact_tv);
    s.hard("analysis.chi_closed_form", check_chi);
    s.hard("analysis.usable_pairs_at_least_n_chi", check_usable_n_chi);
    s.soft("analysis.usable_pairs_at_least_num_c", check_usable_num_c);
    s.soft(
        "analysis.short_orbits_at_most_p_plus_q_minus_1",
        check_short_orbits,
    );
    s.hard("analysis.good_mass_exceeds_bound", check_good_mass);
    s.hard("analysis.coprime_shift_lemma", check_coprime_shift);
    s.hard(
        "analysis.empirical_rate_exceeds_bound",
        check_empirical_rate,
    );

    let failures: Vec<String> = s
        .checks
        .iter()
        .filter(|c| !c.passed && c.severity == Severity::Hard)
        .map(|c| c.name.clone())
        .collect();
    let warnings = s
        .checks
        .iter()
        .filter(|c| !c.passed && c.severity == Severity::Soft)
        .map(|c| c.name.clone())
        .collect();
    VerifyReport {
        quick: opts.quick,
        passed: failures.is_empty(),
        checks: s.checks,
        failures,
        warnings,
    }
}

fn semiprime_bases(max_n: u64) -> Vec<(u64, u64)> {
    crate::analysis::semiprimes_up_to(max_n)
        .into_iter()
        .flat_map(|(n, _, _)| (2..n).filter(move |&a| gcd(a, n) == 1).map(move |a| (n, a)))
        .collect()
}

fn check_orbits(o: &VerifyOptions) -> Outcome {
    let mut cases = 0;
    for (n, a) in semiprime_bases(sweep_limit(o)) {
        let r = multiplicative_order(a, n)?;
        for x in 0..n {
            let rd = orbit_length(x, a, n)?;
            if r % rd != 0 || (gcd(x, n) == 1 && rd != r) {
                return Ok((false, format!("N={n} a={a} x={x}: r_d={rd}, r={r}")));
            }
            cases += 1;
        }
    }
    Ok((true, format!("{cases} (N, a, x) cases")))
}

fn check_totient(o: &VerifyOptions) -> Outcome {
    for (n, p, q) in crate::analysis::semiprimes_up_to(sweep_limit(o)) {
        let count = (0..n).filter(|&x| gcd(x, n) == 1).count() as u64;
        if count != euler_totient(n) || count != (p - 1) * (q - 1) {
            return Ok((false, format!("N={n}: {count} coprime residues")));
        }
    }
    Ok((true, "φ(pq) = (p-1)(q-1) on the sweep".into()))
}

fn check_recover_window(o: &VerifyOptions) -> Outcome {
    let mut tested = 0;
    for (n, a) in semiprime_bases(sweep_limit(o)) {
        let cfg = PhaseEstimationConfig::new(n, a)?;
        let (t, r) = (cfg.t, cfg.order);
        for c in 0..t {
            let hit = (0..r).filter(|&k| gcd(k, r) == 1).any(|k| {
                let d = (c as i128 * r as i128 - k as i128 * t as i128).abs();
                2 * d <= r as i128
            });
            if hit {
                tested += 1;
                if recover_order(c, t, a, n) != Some(r) {
                    return Ok((false, format!("N={n} a={a} c={c}")));
                }
            }
        }
    }
    Ok((true, format!("{tested} in-window outcomes recover r")))
}

fn check_bb_trace_identity(o: &VerifyOptions) -> Outcome {
    let mut rng = stream_rng(o.seed, domain::RANDOM_INSTANCES, 1);
    let mut worst: f64 = 0.0;
    for d in [2usize, 3, 4, 8] {
        for _ in 0..20 {
            let u = UnitarySpec::dense(random::random_unitary(d, &mut rng))?;
            let lhs = bb_dqc1_exact(&u) * (d * d) as f64;
            worst = worst.max((lhs - u.trace().norm_sqr()).abs());
            worst = worst.max((bb_dqc1_exact(&u) - dqc1_exact(&u).norm_sqr()).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max deviation {worst:.3e}")))
}

fn check_bb_vs_standard(o: &VerifyOptions) -> Outcome {
    let mut rng = stream_rng(o.seed, domain::RANDOM_INSTANCES, 2);
    let mut worst: f64 = 0.0;
    for d in 1..=8usize {
        let u = UnitarySpec::dense(random::random_unitary(d, &mut rng))?;
        let v = u.tensor_with_adjoint()?;
        worst = worst.max((C64::new(bb_dqc1_exact(&u), 0.0) - dqc1_exact(&v)).norm());
    }
    Ok((worst <= 1e-12, format!("max deviation {worst:.3e}")))
}

fn check_tau_block(o: &VerifyOptions) -> Outcome {
    let mut rng = stream_rng(o.seed, domain::RANDOM_INSTANCES, 3);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let d = 1 + i % 4;
        let u = UnitarySpec::dense(random::random_unitary(d, &mut rng))?;
        let rho = random::random_density(d, &mut rng);
        let sigma = random::random_density(d, &mut rng);
        let tau = build_tau_bb(&u, &rho, &sigma)?;
        worst = worst.max(max_abs_diff(
            tau.matrix(),
            &tau_bb_block_formula(&u, &rho, &sigma)?,
        ));
    }
    Ok((
        worst <= 1e-12,
        format!("max deviation {worst:.3e} over 50 instances"),
    ))
}

fn check_tau_ctrl(o: &VerifyOptions) -> Outcome {
    let mut rng = stream_rng(o.seed, domain::RANDOM_INSTANCES, 4);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let d = 1 + i % 4;
        let (u, w, _) = random::random_unitary_with_eigenbasis(d, &mut rng);
        let rho = DensityMatrix::diagonal_in_basis(&w, &random::random_weights(d, &mut rng))?;
        let sigma = DensityMatrix::diagonal_in_basis(&w, &random::random_weights(d, &mut rng))?;
        let spec = UnitarySpec::dense(u.clone())?;
        let tau = build_tau_bb(&spec, &rho, &sigma)?;
        let v = kron(&u.adjoint(), &u)?;
        let ctrl = build_tau_ctrl(&v, &rho.tensor(&sigma)?)?;
        worst = worst.max(max_abs_diff(tau.matrix(), ctrl.matrix()));
    }
    Ok((worst <= 1e-12, format!("max deviation {worst:.3e}")))
}

fn check_coherence(o: &VerifyOptions) -> Outcome {
    let mut rng = stream_rng(o.seed, domain::RANDOM_INSTANCES, 5);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let d = 1 + i % 4;
        let um = random::random_unitary(d, &mut rng);
        let u = UnitarySpec::dense(um.clone())?;
        let rho = random::random_density(d, &mut rng);
        let sigma = random::random_density(d, &mut rng);
        let z = control_coherence(&build_tau_bb(&u, &rho, &sigma)?)?;
        let expected = (&um * rho.matrix()).trace() * (sigma.matrix() * um.adjoint()).trace();
        worst = worst.max((z - expected).norm());
    }
    Ok((worst <= 1e-12, format!("max deviation {worst:.3e}")))
}

fn check_phase_invariance(o: &VerifyOptions) -> Outcome {
    let mut rng = stream_rng(o.seed, domain::RANDOM_INSTANCES, 6);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let d = 2 + i % 3;
        let u = UnitarySpec::dense(random::random_unitary(d, &mut rng))?;
        let theta = rng.random_range(-PI..PI);
        let phased = u.clone().with_global_phase(theta);
        let rho = random::random_density(d, &mut rng);
        let sigma = random::random_density(d, &mut rng);
        let a = build_tau_bb(&u, &rho, &sigma)?;
        let b = build_tau_bb(&phased, &rho, &sigma)?;
        worst = worst.max(max_abs_diff(a.matrix(), b.matrix()));
        let (va, vb) = if o.break_phase_invariance {
            (dqc1_exact(&u), dqc1_exact(&phased))
        } else {
            (
                C64::new(bb_dqc1_exact(&u), 0.0),
                C64::new(bb_dqc1_exact(&phased), 0.0),
            )
        };
        worst = worst.max((va - vb).norm());
    }
    Ok((
        worst <= 1e-12,
        format!("max deviation {worst:.3e} over 20 (U, θ)"),
    ))
}

fn check_phase_decomposition(o: &VerifyOptions) -> Outcome {
    let mut rng = stream_rng(o.seed, domain::RANDOM_INSTANCES, 7);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let d = 2 + i % 3;
        let u = random::random_unitary(d, &mut rng);
        let theta = rng.random_range(-PI..PI);
        let lhs = controlled(&(&u * C64::from_polar(1.0, theta)))?;
        let rhs = kron(&phase_gate(theta), &identity(d))? * controlled(&u)?;
        worst = worst.max(max_abs_diff(&lhs, &rhs));
    }
    Ok((worst <= 1e-12, format!("max deviation {worst:.3e}")))
}

fn check_unbiased(o: &VerifyOptions) -> Outcome {
    let seeds = if o.quick { 40 } else { 200 };
    let shots = 10_000;
    let cases = [
        ("bb modmul(2,15)", UnitarySpec::mod_mul(2, 15)?, true),
        (
            "bb diag",
            UnitarySpec::diagonal(vec![0.0, 0.7, 2.1, -1.3])?,
            true,
        ),
        (
            "standard diag",
            UnitarySpec::diagonal(vec![0.0, 0.7, 2.1, -1.3])?,
            false,
        ),
    ];
    let mut details = Vec::new();
    let mut ok = true;
    for (label, u, bb) in cases {
        let (mut sum, mut sum_sq) = (C64::new(0.0, 0.0), 0.0);
        let exact = if bb {
            C64::new(bb_dqc1_exact(&u), 0.0)
        } else {
            dqc1_exact(&u)
        };
        for k in 0..seeds {
            let seed = o.seed.wrapping_add(1000 + k);
            let est = if bb {
                bb_dqc1_sample(&u, shots, seed, o.exec)?
            } else {
                dqc1_sample(&u, shots, seed, o.exec)?
            };
            sum += est.value;
            sum_sq += (est.value - exact).norm_sqr();
        }
        let mean = sum / seeds as f64;
        // standard error of the grand mean from the spread across seeds
        let se = (sum_sq / seeds as f64 / seeds as f64).sqrt();
        let dev = (mean - exact).norm();
        ok &= dev < 5.0 * se;
        details.push(format!(
            "{label}: |mean-exact|={dev:.2e}, 5σ={:.2e}",
            5.0 * se
        ));
    }
    Ok((ok, details.join("; ")))
}

fn check_t_window(_: &VerifyOptions) -> Outcome {
    let ok = PhaseEstimationConfig::with_t(15, 2, 128).is_err()
        && PhaseEstimationConfig::with_t(15, 2, 512).is_err()
        && PhaseEstimationConfig::with_t(15, 2, 300).is_err()
        && PhaseEstimationConfig::with_t(15, 2, 256).is_ok();
    Ok((ok, "t must be a power of two in [N², 2N²]".into()))
}

fn check_dyadic(_: &VerifyOptions) -> Outcome {
    for rounds in 1..=6u32 {
        let t = 1u64 << rounds;
        for k in 0..t {
            let dist = ipe_exact_distribution(rounds, real_kick(k as f64 / t as f64));
            if dist[k as usize] != 1.0 {
                return Ok((false, format!("L={rounds} k={k}: P={}", dist[k as usize])));
            }
        }
    }
    Ok((
        true,
        "every k/2^L, L <= 6, returns k with probability 1".into(),
    ))
}

fn check_fejer_chi2(o: &VerifyOptions) -> Outcome {
    let shots = samples(o, 100_000);
    let mut worst_p: f64 = 1.0;
    let mut ok = true;
    for (i, phi) in [1.0 / 3.0, 1.0 / 7.0, 0.137].into_iter().enumerate() {
        for rounds in [4u32, 8] {
            let t = 1u64 << rounds;
            let seed = o.seed ^ ((i as u64) << 8 | rounds as u64);
            let counts = map_batches(o.exec, seed, domain::IPE, shots, |rng, _, len| {
                let mut h = vec![0u64; t as usize];
                for _ in 0..len {
                    h[semiclassical_ipe(phi, rounds, rng) as usize] += 1;
                }
                h
            })
            .into_iter()
            .fold(vec![0u64; t as usize], |mut acc, h| {
                acc.iter_mut().zip(h).for_each(|(a, b)| *a += b);
                acc
            });
            let test = chi_square_test(&counts, &fejer_distribution(phi, t), 0.001)?;
            ok &= !test.rejected;
            worst_p = worst_p.min(test.p_value);
        }
    }
    Ok((
        ok,
        format!("{shots} shots per case, smallest p-value {worst_p:.4}"),
    ))
}

fn check_faithful_exact(_: &VerifyOptions) -> Outcome {
    let cfg = PhaseEstimationConfig::new(15, 2)?;
    let n = cfg.n;
    let mut avg = vec![0.0; cfg.t as usize];
    for x in 0..n {
        for y in 0..n {
            for (acc, p) in avg.iter_mut().zip(faithful_exact_distribution(&cfg, x, y)?) {
                *acc += p / (n * n) as f64;
            }
        }
    }
    let exact = exact_distribution(15, 2, cfg.t, Exec::Sequential)?;
    let tv = tv_distance(&avg, &exact.probabilities);
    Ok((
        tv <= 1e-12,
        format!("TV(faithful average, exact) = {tv:.3e}"),
    ))
}

fn attempt_distribution(
    o: &VerifyOptions,
    n: u64,
    a: u64,
    path: AttemptPath,
    count: u64,
) -> Result<Vec<f64>> {
    let cfg = PhaseEstimationConfig::new(n, a)?;
    let recs = sample_attempts(&cfg, count, path, o.seed, o.exec)?;
    Ok(empirical(&outcome_histogram(&recs, cfg.t)))
}

/// The 0.02 TV tolerance is pinned to this sample size, so quick mode keeps it.
const TV_SAMPLES: u64 = 100_000;

fn check_faithful_tv(o: &VerifyOptions) -> Outcome {
    let count = TV_SAMPLES;
    let cases: &[(u64, u64)] = if o.quick {
        &[(15, 2)]
    } else {
        &[(15, 2), (21, 2)]
    };
    let mut details = Vec::new();
    let mut ok = true;
    for &(n, a) in cases {
        let f = attempt_distribution(o, n, a, AttemptPath::Faithful, count)?;
        let e = attempt_distribution(o, n, a, AttemptPath::Eigenpath, count)?;
        let tv = tv_distance(&f, &e);
        ok &= tv <= 0.02;
        details.push(format!("({n},{a}): {tv:.4}"));
    }
    Ok((ok, format!("TV at {count} samples: {}", details.join(", "))))
}

fn check_exact_15_2(_: &VerifyOptions) -> Outcome {
    let d = exact_distribution(15, 2, 256, Exec::Sequential)?;
    let e0 = (d.probabilities[0] - 59.0 / 225.0).abs();
    let e64 = (d.probabilities[64] - 54.0 / 225.0).abs();
    let sum = (d.total() - 1.0).abs();
    Ok((
        e0 <= 1e-12 && e64 <= 1e-12 && sum <= 1e-9,
        format!("P(0)={}, P(64)={}", d.probabilities[0], d.probabilities[64]),
    ))
}

fn check_exact_tv(o: &VerifyOptions) -> Outcome {
    let count = TV_SAMPLES;
    let mut details = Vec::new();
    let mut ok = true;
    for (n, a) in [(15u64, 2u64), (21, 2)] {
        let cfg = PhaseEstimationConfig::new(n, a)?;
        let exact = exact_distribution(n, a, cfg.t, o.exec)?;
        let emp = attempt_distribution(o, n, a, AttemptPath::Eigenpath, count)?;
        let tv = tv_distance(&emp, &exact.probabilities);
        ok &= tv <= 0.02;
        details.push(format!("({n},{a}): {tv:.4}"));
    }
    Ok((ok, format!("TV at {count} samples: {}", details.join(", "))))
}

fn check_chi(o: &VerifyOptions) -> Outcome {
    let reps = counting_sweep(sweep_limit(o), o.exec)?;
    let bad: Vec<String> = reps
        .iter()
        .filter(|r| r.chi as f64 != r.chi_closed_form)
        .map(|r| format!("({},{})", r.n, r.a))
        .collect();
    Ok((
        bad.is_empty(),
        format!("{} cases, mismatches: {bad:?}", reps.len()),
    ))
}

fn check_usable_n_chi(o: &VerifyOptions) -> Outcome {
    let reps = counting_sweep(sweep_limit(o), o.exec)?;
    let bad = reps
        .iter()
        .filter(|r| !r.usable_pairs_at_least_n_chi)
        .count();
    Ok((bad == 0, format!("{} cases, {bad} violations", reps.len())))
}

fn check_usable_num_c(o: &VerifyOptions) -> Outcome {
    let reps = counting_sweep(sweep_limit(o), o.exec)?;
    let bad: Vec<&CountingReport> = reps
        .iter()
        .filter(|r| !r.usable_pairs_at_least_num_c)
        .collect();
    let example = bad
        .first()
        .map(|r| {
            format!(
                "; e.g. N={} a={}: usable {} < χ(2N-χ) = {}",
                r.n, r.a, r.usable_pairs_bruteforce, r.num_c
            )
        })
        .unwrap_or_default();
    Ok((
        bad.is_empty(),
        format!("{} of {} cases violate{example}", bad.len(), reps.len()),
    ))
}

fn check_short_orbits(o: &VerifyOptions) -> Outcome {
    let reps = counting_sweep(sweep_limit(o), o.exec)?;
    let bad = reps
        .iter()
        .filter(|r| r.short_orbit_points > r.short_orbit_bound)
        .count();
    Ok((bad == 0, format!("{} cases, {bad} violations", reps.len())))
}

fn check_good_mass(o: &VerifyOptions) -> Outcome {
    let reps = counting_sweep(sweep_limit(o), o.exec)?;
    let bad = reps
        .iter()
        .filter(|r| r.good_outcome_mass < r.success_lower_bound)
        .count();
    let r15 = reps.iter().find(|r| r.n == 15 && r.a == 2);
    let note = r15
        .map(|r| {
            format!(
                "; (15,2): mass {:.4} vs bound {:.4}",
                r.good_outcome_mass, r.success_lower_bound
            )
        })
        .unwrap_or_default();
    Ok((
        bad == 0,
        format!("{} cases, {bad} violations{note}", reps.len()),
    ))
}

fn check_coprime_shift(o: &VerifyOptions) -> Outcome {
    let mut rng = stream_rng(o.seed, domain::RANDOM_INSTANCES, 8);
    for _ in 0..100_000 {
        let (alpha, beta, r) = (
            rng.random_range(0..=10_000u64),
            rng.random_range(0..=10_000u64),
            rng.random_range(1..=10_000u64),
        );
        if !coprime_shift_holds(alpha, beta, r) {
            return Ok((false, format!("α={alpha} β={beta} r={r}")));
        }
    }
    Ok((true, "100000 random (α, β, r)".into()))
}

fn check_empirical_rate(o: &VerifyOptions) -> Outcome {
    let count = if o.quick { 5_000 } else { 20_000 };
    let mut ok = true;
    let mut details = Vec::new();
    for (n, p, q, a) in [(15u64, 3u64, 5u64, 2u64), (21, 3, 7, 2)] {
        let bound = success_lower_bound(n, p, q, a)?;
        let cfg = PhaseEstimationConfig::new(n, a)?;
        let recs = sample_attempts(&cfg, count, AttemptPath::Eigenpath, o.seed, o.exec)?;
        let rate = recs.iter().filter(|r| r.order_recovered).count() as f64 / count as f64;
        let strict = recs.iter().filter(|r| r.direct_hit).count() as f64 / count as f64;
        let se = (bound * (1.0 - bound) / count as f64).sqrt();
        ok &= rate >= bound - 3.0 * se && strict >= bound - 3.0 * se;
        details.push(format!(
            "({n},{a}): rate {rate:.4}, direct {strict:.4}, bound {bound:.4}"
        ));
    }
    Ok((ok, details.join("; ")))
}
