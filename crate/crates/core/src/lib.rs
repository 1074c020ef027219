//! Entropic uncertainty relations assisted by quantum memory.
//!
//! The crate computes von Neumann entropies, conditional entropies, mutual
//! information and Holevo quantities of small multipartite states, evaluates
//! the bipartite and tripartite uncertainty bounds built from them, and
//! provides the two-qubit correlation measures (discord, classical
//! correlation, entanglement of formation) used to check when strong
//! subadditivity and the Koashi–Winter relation hold with equality.
//!
//! ```
//! use eur_core::{evaluate, make_state, Family, ObservablePair, StateSpec};
//!
//! let ghz = make_state(&StateSpec::new(Family::Ghz)).unwrap();
//! let report = evaluate(&ghz, &ObservablePair::pauli_xz()).unwrap();
//! assert!((report.lhs_tripartite.unwrap() - 1.0).abs() < 1e-12);
//! assert!((report.bound_new.unwrap() - 1.0).abs() < 1e-12);
//! ```

pub mod bounds;
pub mod correlations;
pub mod entropy;
pub mod error;
pub mod io;
pub mod linalg;
pub mod measurement;
pub mod optim;
pub mod states;
pub mod sweep;

pub use bounds::{devetak_winter, evaluate, key_rate_berta, key_rate_new, BoundReport};
pub use correlations::{
    classical_correlation, concurrence, discord, entanglement_of_formation, saturation_check,
    ClassicalCorrelation, SaturationReport,
};
pub use entropy::{
    conditional_entropy, holevo, mutual_information, shannon, von_neumann, ProbabilityVector,
};
pub use error::{DensityViolation, Error, Result};
pub use linalg::{
    eig_hermitian, partial_trace, tensor, validate_density, ComplexMatrix, DensityMatrix,
    DimVector, HermitianEigen, C64,
};
pub use measurement::{
    measure_channel, outcome_statistics, pair_from_bases, pair_from_observables, robertson_bound,
    Basis, MeasurementOutcome, ObservablePair,
};
pub use states::{make_state, random_density, Family, StateSpec};
pub use sweep::{
    run_check, run_report, run_sweep, CheckOptions, CheckSummary, Column, FigurePreset, SweepSpec,
};
