//! Standard and black-box DQC1 trace estimation.
//!
//! The maximally mixed registers are sampled as uniform computational basis
//! states, so one shot costs O(1) memory: only `⟨x|V|x⟩` is needed to get the
//! control qubit's outcome probabilities.
//!
//! Sign conventions, checked against the density-matrix oracle in
//! [`crate::qsim`]: standard DQC1 applies `V` on the control's `|1⟩` branch,
//! so `⟨X⟩ = Re tr(V)/D` and `⟨Y⟩ = Im tr(V)/D`. The black-box circuit applies
//! `U` to the first register between two controlled-SWAPs and gives
//! `⟨X⟩ = |tr U|²/d²`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, domain, Exec};
use crate::qsim::{
    self, build_tau_bb, controlled, kron, max_abs_diff, phase_gate, random, DensityMatrix,
    UnitarySpec, C64,
};

/// Probabilities closer than this to 0 or 1 are snapped, so deterministic
/// outcomes stay deterministic.
const SNAP: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Standard,
    BlackBox,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

/// One control-qubit measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub index: u64,
    pub basis: Basis,
    pub outcome: i8,
    /// Basis state drawn for the (first) mixed register.
    pub x: usize,
    /// Basis state drawn for the second register (black-box only).
    pub y: Option<usize>,
}

/// `shots == 0` marks an exact value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEstimate {
    pub protocol: Protocol,
    pub value: C64,
    pub shots: u64,
    pub std_error: f64,
}

impl TraceEstimate {
    fn exact(protocol: Protocol, value: C64) -> Self {
        TraceEstimate {
            protocol,
            value,
            shots: 0,
            std_error: 0.0,
        }
    }
}

/// `tr(V)/D`.
pub fn dqc1_exact(v: &UnitarySpec) -> C64 {
    v.trace() / v.dim() as f64
}

/// `|tr U|²/d²`.
pub fn bb_dqc1_exact(u: &UnitarySpec) -> f64 {
    let d = u.dim() as f64;
    u.trace().norm_sqr() / (d * d)
}

pub fn dqc1_exact_estimate(v: &UnitarySpec) -> TraceEstimate {
    TraceEstimate::exact(Protocol::Standard, dqc1_exact(v))
}

pub fn bb_dqc1_exact_estimate(u: &UnitarySpec) -> TraceEstimate {
    TraceEstimate::exact(Protocol::BlackBox, C64::new(bb_dqc1_exact(u), 0.0))
}

/// Exact `⟨σ_basis⟩` of the standard-DQC1 control qubit.
pub fn control_expectation(v: &UnitarySpec, basis: Basis) -> f64 {
    let z = dqc1_exact(v);
    match basis {
        Basis::X => z.re,
        Basis::Y => z.im,
        Basis::Z => 0.0,
    }
}

fn snap(p: f64) -> f64 {
    if p < SNAP {
        0.0
    } else if p > 1.0 - SNAP {
        1.0
    } else {
        p
    }
}

fn draw_sign(rng: &mut ChaCha8Rng, p_plus: f64) -> i8 {
    if rng.random::<f64>() < snap(p_plus) {
        1
    } else {
        -1
    }
}

/// `P(+1)` for the standard protocol with the register in `|x⟩`.
fn standard_p_plus(diag: C64, basis: Basis) -> f64 {
    match basis {
        Basis::X => 0.5 * (1.0 + diag.re),
        Basis::Y => 0.5 * (1.0 + diag.im),
        Basis::Z => 0.5,
    }
}

/// `P(+1)` of the X measurement for the black-box protocol with registers `|x⟩|y⟩`.
fn bb_p_plus(ux: C64, uy: C64) -> f64 {
    0.5 + 0.5 * (ux.conj() * uy).re
}

fn standard_shot(v: &UnitarySpec, basis: Basis, index: u64, rng: &mut ChaCha8Rng) -> ShotRecord {
    let x = rng.random_range(0..v.dim());
    let outcome = draw_sign(rng, standard_p_plus(v.diagonal_element(x), basis));
    ShotRecord {
        index,
        basis,
        outcome,
        x,
        y: None,
    }
}

fn bb_shot(u: &UnitarySpec, index: u64, rng: &mut ChaCha8Rng) -> ShotRecord {
    let d = u.dim();
    let x = rng.random_range(0..d);
    let y = rng.random_range(0..d);
    let p = bb_p_plus(u.diagonal_element(x), u.diagonal_element(y));
    ShotRecord {
        index,
        basis: Basis::X,
        outcome: draw_sign(rng, p),
        x,
        y: Some(y),
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    n: u64,
    sum: i64,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            n: self.n + other.n,
            sum: self.sum + other.sum,
        }
    }

    fn mean(self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sum as f64 / self.n as f64
        }
    }

    /// Standard error of the mean of ±1 outcomes.
    fn std_error(self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let m = self.mean();
        let var = (1.0 - m * m).max(0.0) * n / (n - 1.0);
        (var / n).sqrt()
    }
}

fn tally<F>(exec: Exec, seed: u64, dom: u64, shots: u64, shot: F) -> Tally
where
    F: Fn(u64, &mut ChaCha8Rng) -> ShotRecord + Sync + Send,
{
    exec::map_batches(exec, seed, dom, shots, |rng, start, len| {
        (start..start + len).fold(Tally::default(), |t, i| Tally {
            n: t.n + 1,
            sum: t.sum + shot(i, rng).outcome as i64,
        })
    })
    .into_iter()
    .fold(Tally::default(), Tally::merge)
}

fn split_shots(shots: u64) -> (u64, u64) {
    (shots.div_ceil(2), shots / 2)
}

fn require_shots(shots: u64) -> Result<()> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be >= 1".into()));
    }
    Ok(())
}

/// Standard DQC1 with half the shots in X and half in Y (odd shot to X).
/// The estimate is `⟨X⟩ + i⟨Y⟩ ≈ tr(V)/D`.
pub fn dqc1_sample(v: &UnitarySpec, shots: u64, seed: u64, exec: Exec) -> Result<TraceEstimate> {
    require_shots(shots)?;
    let (nx, ny) = split_shots(shots);
    let tx = tally(exec, seed, domain::DQC1_X, nx, |i, rng| {
        standard_shot(v, Basis::X, i, rng)
    });
    let ty = tally(exec, seed, domain::DQC1_Y, ny, |i, rng| {
        standard_shot(v, Basis::Y, i, rng)
    });
    Ok(TraceEstimate {
        protocol: Protocol::Standard,
        value: C64::new(tx.mean(), ty.mean()),
        shots,
        std_error: tx.std_error().hypot(ty.std_error()),
    })
}

/// Black-box DQC1: a single X-basis measurement of the control per shot.
///
/// Any `ScalarPhase` wrapper is removed first; the black-box channel cannot
/// depend on it, and removing it makes equal seeds give identical outcomes.
pub fn bb_dqc1_sample(u: &UnitarySpec, shots: u64, seed: u64, exec: Exec) -> Result<TraceEstimate> {
    require_shots(shots)?;
    let (_, u) = u.strip_global_phase();
    let t = tally(exec, seed, domain::BB_DQC1, shots, |i, rng| {
        bb_shot(u, i, rng)
    });
    Ok(TraceEstimate {
        protocol: Protocol::BlackBox,
        value: C64::new(t.mean(), 0.0),
        shots,
        std_error: t.std_error(),
    })
}

/// Shot-level records on the same streams as [`dqc1_sample`].
pub fn dqc1_shots(v: &UnitarySpec, shots: u64, seed: u64, exec: Exec) -> Vec<ShotRecord> {
    let (nx, ny) = split_shots(shots);
    let mut out: Vec<ShotRecord> =
        exec::map_batches(exec, seed, domain::DQC1_X, nx, |rng, s, n| {
            (s..s + n)
                .map(|i| standard_shot(v, Basis::X, i, rng))
                .collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect();
    out.extend(
        exec::map_batches(exec, seed, domain::DQC1_Y, ny, |rng, s, n| {
            (s..s + n)
                .map(|i| standard_shot(v, Basis::Y, nx + i, rng))
                .collect::<Vec<_>>()
        })
        .into_iter()
        .flatten(),
    );
    out
}

/// Shot-level records on the same stream as [`bb_dqc1_sample`].
pub fn bb_dqc1_shots(u: &UnitarySpec, shots: u64, seed: u64, exec: Exec) -> Vec<ShotRecord> {
    let (_, u) = u.strip_global_phase();
    exec::map_batches(exec, seed, domain::BB_DQC1, shots, |rng, s, n| {
        (s..s + n).map(|i| bb_shot(u, i, rng)).collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

/// Result of comparing `U` with `e^{iθ}U` under both protocols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseNoGoReport {
    pub theta: f64,
    pub trials: usize,
    /// Largest entrywise difference between black-box output states; `None`
    /// when `d` is too large for the density-matrix path.
    pub bb_state_deviation: Option<f64>,
    pub bb_exact_deviation: f64,
    /// Equal-seed sampled estimates agree exactly.
    pub bb_samples_identical: bool,
    pub standard_plain: C64,
    pub standard_phased: C64,
    /// `|dqc1(e^{iθ}U) - e^{iθ}·dqc1(U)|`.
    pub standard_ratio_deviation: f64,
    /// `max |controlled(e^{iθ}U) - (diag(1, e^{iθ}) ⊗ I)·controlled(U)|`.
    pub controlled_decomposition_deviation: Option<f64>,
}

/// Largest register dimension used for density-matrix comparisons here.
const NOGO_MAX_STATE_DIM: usize = 16;

pub fn global_phase_nogo_check(
    u: &UnitarySpec,
    theta: f64,
    trials: usize,
    seed: u64,
) -> Result<PhaseNoGoReport> {
    let phased = u.clone().with_global_phase(theta);
    let d = u.dim();
    let mut rng = exec::stream_rng(seed, domain::RANDOM_INSTANCES, 0);

    let (bb_state_deviation, controlled_decomposition_deviation) = if d <= NOGO_MAX_STATE_DIM {
        let mut worst: f64 = 0.0;
        for _ in 0..trials.max(1) {
            let rho = random::random_density(d, &mut rng);
            let sigma = random::random_density(d, &mut rng);
            let a = build_tau_bb(u, &rho, &sigma)?;
            let b = build_tau_bb(&phased, &rho, &sigma)?;
            worst = worst.max(max_abs_diff(a.matrix(), b.matrix()));
        }
        let lhs = controlled(&phased.as_dense()?)?;
        let rhs = kron(&phase_gate(theta), &qsim::identity(d))? * controlled(&u.as_dense()?)?;
        (Some(worst), Some(max_abs_diff(&lhs, &rhs)))
    } else {
        (None, None)
    };

    let shots = 2_000;
    let s1 = bb_dqc1_sample(u, shots, seed, Exec::Sequential)?;
    let s2 = bb_dqc1_sample(&phased, shots, seed, Exec::Sequential)?;

    let standard_plain = dqc1_exact(u);
    let standard_phased = dqc1_exact(&phased);
    Ok(PhaseNoGoReport {
        theta,
        trials,
        bb_state_deviation,
        bb_exact_deviation: (bb_dqc1_exact(u) - bb_dqc1_exact(&phased)).abs(),
        bb_samples_identical: s1 == s2,
        standard_plain,
        standard_phased,
        standard_ratio_deviation: (standard_phased - C64::from_polar(1.0, theta) * standard_plain)
            .norm(),
        controlled_decomposition_deviation,
    })
}

/// Reduced control state of standard DQC1 on a maximally mixed register,
/// evolved explicitly (oracle for the sign conventions above).
pub fn standard_control_state(v: &UnitarySpec) -> Result<qsim::Matrix> {
    let d = v.dim();
    let tau = qsim::build_tau_ctrl(&v.as_dense()?, &DensityMatrix::maximally_mixed(d))?;
    qsim::control_reduced_state(&tau)
}
