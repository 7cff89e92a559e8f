//! Executable checks of submodularity, monotonicity, and the structural
//! relations behind submodularity of the waterfilling rate.

mod checks;
mod lemma;
mod majorization;
mod oracle;
mod subset;

pub use checks::{
    check_monotone, check_setpair_submodular, check_submodular_pairwise,
    check_submodular_pairwise_capped, write_violations_csv, MonotonicityViolation,
    SetPairViolation, SubmodularityViolation, PAIRWISE_CAP, SETPAIR_CAP,
};
pub use lemma::{
    build_majorization_vectors, lemma_witness, majorization_checks, Decomposition, LemmaChecks,
    LemmaWitness, Quartet, WitnessCase,
};
pub use majorization::{interlaces, karamata_holds, majorizes, product_dominates};
pub use oracle::{FnOracle, LogUtilityOracle, SetFunctionOracle, WaterfillOracle};
pub use subset::{Subset, MAX_GROUND_SET};
