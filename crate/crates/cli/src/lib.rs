//! Command-line front end for `bbdqc1`.
//!
//! Every command produces a single UTF-8 document (JSON report or CSV
//! distribution). Exit codes: 0 ok, 1 verification or factoring failure,
//! 2 malformed input, 3 failed precondition, 4 `analyze` found a common
//! factor of `N` and `a`.

pub mod args;
pub mod report;

use std::fs;
use std::path::Path;

use bbdqc1::analysis::{counting_report, exact_distribution, success_lower_bound, CountingReport};
use bbdqc1::dqc1::{bb_dqc1_exact, bb_dqc1_sample, dqc1_exact, dqc1_sample, TraceEstimate};
use bbdqc1::exec::{domain, stream_rng};
use bbdqc1::numtheory::gcd;
use bbdqc1::order_finding::{
    factor, AttemptPath, AttemptRecord, FactorConfig, FactorMethod, PhaseEstimationConfig,
};
use bbdqc1::qsim::{random::random_unitary, MatrixFile, UnitarySpec, C64};
use bbdqc1::verify::{run_suite, VerifyOptions, VerifyReport};
use bbdqc1::{Error, Exec};
use serde::Serialize;
use thiserror::Error as ThisError;

use args::{
    AnalyzeArgs, Builtin, Cli, Command, FactorArgs, Format, ProtocolChoice, TraceArgs, VerifyArgs,
};

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("verification failed: {}", .0.join(", "))]
    VerifyFailed(Vec<String>, String),
    #[error("{0}")]
    Failed(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("gcd({a}, {n}) = {factor}: {factor} is a factor of {n}")]
    GcdShortcut { n: u64, a: u64, factor: u64 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed(..) | CliError::Failed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::GcdShortcut { .. } => 4,
        }
    }

    /// Report to emit despite the failure, if any.
    pub fn output(&self) -> Option<&str> {
        match self {
            CliError::VerifyFailed(_, out) => Some(out),
            _ => None,
        }
    }
}

fn precondition(e: Error) -> CliError {
    CliError::Precondition(e.to_string())
}

fn exec_mode(cli: &Cli) -> Exec {
    if cli.global.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

/// Runs a parsed command and returns the document it produces.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let exec = exec_mode(cli);
    let seed = cli.global.seed;
    let format = cli.global.format;
    match &cli.command {
        Command::Trace(a) => {
            json_only(format, "trace")?;
            cmd_trace(a, seed, exec)
        }
        Command::Factor(a) => {
            json_only(format, "factor")?;
            cmd_factor(a, seed)
        }
        Command::Analyze(a) => cmd_analyze(a, seed, format.unwrap_or(Format::Csv), exec),
        Command::Verify(a) => {
            json_only(format, "verify")?;
            cmd_verify(a, seed, exec)
        }
    }
}

/// Writes `doc` to `path`, or stdout when absent.
pub fn emit(doc: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, doc).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{doc}");
            Ok(())
        }
    }
}

fn json_only(format: Option<Format>, command: &str) -> Result<(), CliError> {
    match format {
        Some(Format::Csv) => Err(CliError::Input(format!(
            "`{command}` emits JSON only; CSV is for distributions (`analyze`)"
        ))),
        _ => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
struct Cx {
    re: f64,
    im: f64,
}

impl From<C64> for Cx {
    fn from(z: C64) -> Self {
        Cx { re: z.re, im: z.im }
    }
}

#[derive(Debug, Serialize)]
struct ProtocolReport {
    protocol: &'static str,
    estimate: Cx,
    exact: Cx,
    std_error: f64,
    shots: u64,
    /// `|estimate - exact| / std_error`.
    deviation_sigmas: Option<f64>,
}

#[derive(Debug, Serialize)]
struct TraceReport {
    unitary: String,
    dim: usize,
    /// `tr U / d` for the standard protocol.
    protocols: Vec<ProtocolReport>,
}

fn need<T: Copy>(v: Option<T>, flag: &str, builtin: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Input(format!("--builtin {builtin} needs --{flag}")))
}

fn build_unitary(a: &TraceArgs, seed: u64) -> Result<UnitarySpec, CliError> {
    let base = match (a.builtin, &a.matrix) {
        (_, Some(path)) => {
            MatrixFile::load_unitary(path).map_err(|e| CliError::Input(e.to_string()))?
        }
        (Some(Builtin::Identity), None) => UnitarySpec::identity(need(a.dim, "dim", "identity")?),
        (Some(Builtin::Modmul), None) => {
            let (m, n) = (need(a.a, "a", "modmul")?, need(a.n, "N", "modmul")?);
            UnitarySpec::mod_mul(m, n).map_err(precondition)?
        }
        (Some(Builtin::Diag), None) => {
            let phases = a
                .phases
                .clone()
                .ok_or_else(|| CliError::Input("--builtin diag needs --phases".into()))?;
            UnitarySpec::diagonal(phases).map_err(|e| CliError::Input(e.to_string()))?
        }
        (Some(Builtin::Random), None) => {
            let d = need(a.dim, "dim", "random")?;
            let mut rng = stream_rng(seed, domain::RANDOM_INSTANCES, 0);
            UnitarySpec::dense(random_unitary(d, &mut rng))
                .map_err(|e| CliError::Input(e.to_string()))?
        }
        (None, None) => return Err(CliError::Input("no unitary source".into())),
    };
    if base.dim() == 0 {
        return Err(CliError::Input("dimension must be positive".into()));
    }
    Ok(match a.global_phase {
        Some(theta) => base.with_global_phase(theta),
        None => base,
    })
}

fn protocol_report(name: &'static str, est: TraceEstimate, exact: C64) -> ProtocolReport {
    let dev = (est.value - exact).norm();
    ProtocolReport {
        protocol: name,
        estimate: est.value.into(),
        exact: exact.into(),
        std_error: est.std_error,
        shots: est.shots,
        deviation_sigmas: (est.std_error > 0.0).then(|| dev / est.std_error),
    }
}

fn cmd_trace(a: &TraceArgs, seed: u64, exec: Exec) -> Result<String, CliError> {
    if a.shots == 0 {
        return Err(CliError::Input("--shots must be positive".into()));
    }
    let u = build_unitary(a, seed)?;
    let mut protocols = Vec::new();
    if matches!(a.protocol, ProtocolChoice::Standard | ProtocolChoice::Both) {
        let est = dqc1_sample(&u, a.shots, seed, exec).map_err(precondition)?;
        protocols.push(protocol_report("standard", est, dqc1_exact(&u)));
    }
    if matches!(a.protocol, ProtocolChoice::Bb | ProtocolChoice::Both) {
        let est = bb_dqc1_sample(&u, a.shots, seed, exec).map_err(precondition)?;
        protocols.push(protocol_report("bb", est, C64::new(bb_dqc1_exact(&u), 0.0)));
    }
    let result = TraceReport {
        unitary: u.label(),
        dim: u.dim(),
        protocols,
    };
    Ok(report::render("trace", seed, a, result))
}

#[derive(Debug, Serialize)]
struct FactorReport {
    n: u64,
    factors: (u64, u64),
    method: FactorMethod,
    attempts: usize,
    bases: Vec<u64>,
    c_values: Vec<u64>,
    order_recovery_rate: f64,
    direct_hit_rate: f64,
    factor_rate: f64,
    /// Per-attempt lower bound for the base that produced the attempts.
    success_lower_bound: Option<f64>,
    records: Vec<AttemptRecord>,
}

fn cmd_factor(a: &FactorArgs, seed: u64) -> Result<String, CliError> {
    if a.attempts == 0 {
        return Err(CliError::Input("--attempts must be positive".into()));
    }
    let config = FactorConfig {
        seed,
        max_attempts: a.attempts,
        a: a.a,
        path: if a.faithful {
            AttemptPath::Faithful
        } else {
            AttemptPath::Eigenpath
        },
        sample_all: a.sample_all,
    };
    if let Some(base) = a.a {
        if base < 2 || base >= a.n {
            return Err(CliError::Precondition(format!(
                "--a must lie in (1, {})",
                a.n
            )));
        }
    }
    let res = factor(a.n, &config).map_err(|e| match e {
        Error::AttemptCapExceeded(_) => CliError::Failed(e.to_string()),
        other => precondition(other),
    })?;
    let (p, q) = res.factors;
    let last_base = res.records.last().map(|r| r.a);
    let bound = last_base.and_then(|b| success_lower_bound(res.n, p, q, b).ok());
    let result = FactorReport {
        n: res.n,
        factors: res.factors,
        method: res.method,
        attempts: res.attempts,
        bases: res.bases,
        c_values: res.records.iter().map(|r| r.c).collect(),
        order_recovery_rate: res.order_recovery_rate,
        direct_hit_rate: res.direct_hit_rate,
        factor_rate: res.factor_rate,
        success_lower_bound: bound,
        records: res.records,
    };
    Ok(report::render("factor", seed, a, result))
}

#[derive(Debug, Serialize)]
struct AnalyzeReport {
    counting: CountingReport,
    t: u64,
    p0: f64,
    total_probability: f64,
}

fn cmd_analyze(a: &AnalyzeArgs, seed: u64, format: Format, exec: Exec) -> Result<String, CliError> {
    if a.n < 2 || a.a < 2 || a.a >= a.n {
        return Err(CliError::Precondition(format!(
            "need 1 < a < N, got N={} a={}",
            a.n, a.a
        )));
    }
    let g = gcd(a.a, a.n);
    if g > 1 {
        return Err(CliError::GcdShortcut {
            n: a.n,
            a: a.a,
            factor: g,
        });
    }
    let t = match a.t {
        Some(t) => t,
        None => {
            PhaseEstimationConfig::new(a.n, a.a)
                .map_err(precondition)?
                .t
        }
    };
    let dist = exact_distribution(a.n, a.a, t, exec).map_err(precondition)?;
    let counting = counting_report(a.n, a.a, exec).map_err(precondition)?;
    let json = report::render(
        "analyze",
        seed,
        a,
        AnalyzeReport {
            t,
            p0: dist.probabilities[0],
            total_probability: dist.total(),
            counting,
        },
    );
    if let Some(path) = &a.report {
        emit(&json, Some(path))?;
    }
    Ok(match format {
        Format::Csv => dist.to_csv(),
        Format::Json => json,
    })
}

fn cmd_verify(a: &VerifyArgs, seed: u64, exec: Exec) -> Result<String, CliError> {
    let rep: VerifyReport = run_suite(VerifyOptions {
        seed,
        quick: a.quick,
        break_phase_invariance: a.break_phase_invariance,
        exec,
    });
    let failures = rep.failures.clone();
    let doc = report::render("verify", seed, a, rep);
    if failures.is_empty() {
        Ok(doc)
    } else {
        Err(CliError::VerifyFailed(failures, doc))
    }
}
