//! Momentum polytopes of quasi-Hamiltonian SU(n)-spaces built from conjugacy
//! classes, numerical checks of the quasi-Hamiltonian axioms, and the real
//! convexity comparison between the momentum image of a space and that of the
//! fixed-point set of a form-reversing involution.

pub mod axioms;
pub mod config;
pub mod error;
pub mod involution;
pub mod lie;
pub mod polytope;
pub mod qspace;
pub mod weyl;

pub use config::{SolverConfig, Tolerances};
pub use error::{QhamError, Result};
pub use involution::{HypothesisReport, InvolutionPair, SolveOutcome};
pub use lie::{AlgebraElement, CMatrix, GroupElement, TangentVector};
pub use polytope::{Hull, SampleBatch, Source};
pub use qspace::{QSpacePoint, SpaceKind, SpaceSpec};
pub use weyl::{AlcovePoint, FaceId, RootSystem};
