//! Order finding with one clean qubit: eigenphase tables, semiclassical
//! phase estimation, the faithful circuit simulation and the factoring driver.

mod driver;
mod faithful;
mod ipe;
mod table;

pub use driver::{
    factor, outcome_histogram, reduce_order, run_attempt_eigenpath, run_attempt_faithful,
    sample_attempts, AttemptPath, AttemptRecord, FactorConfig, FactorMethod, FactoringResult,
};
pub use faithful::{faithful_exact_distribution, run_faithful, BranchState};
pub use ipe::{
    feedback_angle, fejer_distribution, fejer_kernel, fraction_kick, ipe_exact_distribution,
    real_kick, run_ipe, semiclassical_ipe, zero_probability,
};
pub use table::{eigenphase_sample, EigenphaseTable, Orbit, PhaseEstimationConfig};
