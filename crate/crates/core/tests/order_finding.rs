use bbdqc1::analysis::{exact_distribution, semiprimes_up_to};
use bbdqc1::exec::{domain, map_batches};
use bbdqc1::numtheory::{gcd, multiplicative_order, Fraction};
use bbdqc1::order_finding::{
    factor, faithful_exact_distribution, fejer_distribution, outcome_histogram, sample_attempts,
    semiclassical_ipe, AttemptPath, EigenphaseTable, FactorConfig, PhaseEstimationConfig,
};
use bbdqc1::stats::{chi_square_test, empirical, tv_distance};
use bbdqc1::Exec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn eigenphase_sampling_marginals_15_2() {
    let table = EigenphaseTable::new(2, 15).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let n = 150_000;
    let (mut by_den, mut zero) = ([0u64; 5], 0u64);
    for _ in 0..n {
        let f = table.sample(&mut rng);
        assert!(f.num >= 0 && (f.num as u64) < f.den);
        if f.num == 0 {
            zero += 1;
        }
        by_den[f.den as usize] += 1;
    }
    // orbit lengths 1, 2, 4 with 1, 2, 12 members; phase 0 once per orbit
    let p_len = |k: f64| k / 15.0;
    let frac = |c: u64| c as f64 / n as f64;
    assert!((frac(zero) - 5.0 / 15.0).abs() < 0.005);
    // den 1 comes from j = 0 on any orbit, den 2 from j = 1 on 2-orbits or j = 2 on 4-orbits
    assert!((frac(by_den[1]) - 5.0 / 15.0).abs() < 0.005);
    assert!((frac(by_den[2]) - (p_len(2.0) / 2.0 + p_len(12.0) / 4.0)).abs() < 0.005);
    assert!((frac(by_den[4]) - p_len(12.0) / 2.0).abs() < 0.005);
}

#[test]
fn ipe_matches_fejer_law() {
    for (i, phi) in [1.0 / 3.0, 1.0 / 7.0, 0.137].into_iter().enumerate() {
        for rounds in [4u32, 8] {
            let t = 1u64 << rounds;
            let counts = map_batches(
                Exec::Parallel,
                100 + i as u64,
                domain::IPE,
                100_000,
                |rng, _, len| {
                    let mut h = vec![0u64; t as usize];
                    for _ in 0..len {
                        h[semiclassical_ipe(phi, rounds, rng) as usize] += 1;
                    }
                    h
                },
            )
            .into_iter()
            .reduce(|mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            })
            .unwrap();
            let test = chi_square_test(&counts, &fejer_distribution(phi, t), 0.001).unwrap();
            assert!(!test.rejected, "φ={phi} L={rounds}: {test:?}");
        }
    }
}

#[test]
fn faithful_and_eigenpath_agree() {
    for (n, a) in [(15u64, 2u64), (15, 4), (15, 8), (21, 2), (21, 4), (21, 8)] {
        let cfg = PhaseEstimationConfig::new(n, a).unwrap();
        let hist = |path| {
            let recs = sample_attempts(&cfg, 100_000, path, 77, Exec::Parallel).unwrap();
            empirical(&outcome_histogram(&recs, cfg.t))
        };
        let tv = tv_distance(&hist(AttemptPath::Faithful), &hist(AttemptPath::Eigenpath));
        assert!(tv <= 0.02, "({n},{a}): TV {tv}");
    }
}

#[test]
fn faithful_average_is_the_exact_law_21_2() {
    let cfg = PhaseEstimationConfig::new(21, 2).unwrap();
    let n = cfg.n;
    let mut avg = vec![0.0; cfg.t as usize];
    for x in 0..n {
        for y in 0..n {
            for (acc, p) in avg
                .iter_mut()
                .zip(faithful_exact_distribution(&cfg, x, y).unwrap())
            {
                *acc += p / (n * n) as f64;
            }
        }
    }
    let exact = exact_distribution(21, 2, cfg.t, Exec::Sequential).unwrap();
    assert!(tv_distance(&avg, &exact.probabilities) < 1e-12);
}

#[test]
fn factoring_is_reproducible() {
    for path in [AttemptPath::Eigenpath, AttemptPath::Faithful] {
        let cfg = FactorConfig {
            seed: 42,
            path,
            sample_all: true,
            max_attempts: 100,
            ..FactorConfig::default()
        };
        let a = factor(33, &cfg).unwrap();
        let b = factor(33, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.factors, (3, 11));
    }
}

#[test]
fn eigenpath_attempts_have_valid_outcomes() {
    let cfg = PhaseEstimationConfig::new(35, 3).unwrap();
    for rec in sample_attempts(&cfg, 2000, AttemptPath::Eigenpath, 1, Exec::Parallel).unwrap() {
        assert!(rec.c < cfg.t);
        if let Some(v) = rec.order_candidate {
            assert_eq!(v % cfg.order, 0);
        }
        if let Some((p, q)) = rec.factors {
            assert_eq!(p * q, 35);
        }
    }
}

proptest! {
    #[test]
    fn table_invariants(idx in 0usize..10_000) {
        let sp = semiprimes_up_to(60);
        let (n, _, _) = sp[idx % sp.len()];
        let bases: Vec<u64> = (2..n).filter(|&a| gcd(a, n) == 1).collect();
        let a = bases[(idx / sp.len()) % bases.len()];
        let table = EigenphaseTable::new(a, n).unwrap();
        let r = multiplicative_order(a, n).unwrap();
        prop_assert_eq!(table.orbits.iter().map(|o| o.length).sum::<u64>(), n);
        for o in &table.orbits {
            prop_assert_eq!(r % o.length, 0);
            let mut x = o.representative;
            for &m in &o.members {
                prop_assert_eq!(m, x);
                x = x * a % n;
            }
        }
        prop_assert_eq!(table.phase_multiplicities().iter().sum::<u64>(), n);
        prop_assert!(table.eigenphases().iter().all(|f| *f == Fraction::new(f.num, f.den)));
    }
}
