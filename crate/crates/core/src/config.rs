//! Numerical tolerances and solver hyperparameters shared by the library,
//! the test suites and the CLI.

use serde::{Deserialize, Serialize};

/// Every threshold used by the checkers, in one record.
///
/// Partial TOML/JSON files deserialize onto the defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Max-entry deviation from unitarity / unit determinant.
    pub group: f64,
    /// Max-entry deviation from anti-Hermitian traceless.
    pub algebra: f64,
    /// Distance below which an alcove point sits on a wall.
    pub wall: f64,
    /// Class membership of a space point's factors.
    pub class_membership: f64,
    /// Relative singular-value cutoff for null spaces.
    pub null_space: f64,
    /// Contraction axiom residual.
    pub axiom_contraction: f64,
    /// Finite-difference exterior derivative residual.
    pub axiom_exterior: f64,
    /// Chart step used by the exterior derivative check.
    pub exterior_step: f64,
    /// Algebraic identities of the involution (exact up to rounding).
    pub algebraic: f64,
    /// Pullback reversal of the 2-form (finite-difference limited).
    pub form_reversal: f64,
    /// Central-difference step for differentiating the involution.
    pub fd_step: f64,
    /// A point counts as fixed by the involution within this distance.
    pub fixed_point: f64,
    /// Vertex and facet slack of convex hulls.
    pub hull: f64,
    /// Maximal Hausdorff distance between the full and fixed-point hulls.
    pub hausdorff: f64,
    /// Minimal convexity score of a sampled momentum image.
    pub convexity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            group: 1e-10,
            algebra: 1e-12,
            wall: 1e-7,
            class_membership: 1e-8,
            null_space: 1e-8,
            axiom_contraction: 1e-8,
            axiom_exterior: 1e-4,
            exterior_step: 1e-4,
            algebraic: 1e-10,
            form_reversal: 1e-5,
            fd_step: 1e-5,
            fixed_point: 1e-8,
            hull: 1e-9,
            hausdorff: 0.05,
            convexity: 0.99,
        }
    }
}

/// Hyperparameters of the fixed-point descent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub step_init: f64,
    pub armijo: f64,
    pub shrink: f64,
    pub max_iters: usize,
    /// Success threshold on the asymmetry objective.
    pub objective_tol: f64,
    /// Central-difference step of the gradient.
    pub gradient_step: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            step_init: 0.1,
            armijo: 1e-4,
            shrink: 0.5,
            max_iters: 500,
            objective_tol: 1e-16,
            gradient_step: 1e-6,
        }
    }
}
