//! Uhlmann fidelity, fidelity-based metrics and the uncertainty relations
//! they generate for pairs of non-degenerate observables.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense complex matrices, Hermitian eigendecomposition (cyclic
//!   Jacobi), PSD square roots and the nuclear norm.
//! * [`states`]: density matrices, pure states, projective observables,
//!   purification, partial trace and seeded Haar samplers.
//! * [`fidelity`]: the fidelity `F(ρ,σ) = (Tr √(√ρ σ √ρ))²` computed along two
//!   independent routes, plus the purification-overlap characterisation.
//! * [`metrics`]: the angle, Bures and root-infidelity metrics `d = f(F)`.
//! * [`uncertainty`]: outcome probabilities, the overlap `c`, uncertainty
//!   measures `U = f(P_max)` and the relation `U_A + U_B ≥ f(c²)`.
//! * [`domains`]: closed-form feasibility regions of `(P_A, P_B)` and the
//!   quadratic derivation of their boundaries.
//! * [`sweep`]: deterministic Monte Carlo verification of the relation family.

pub mod domains;
pub mod error;
pub mod fidelity;
pub mod linalg;
pub mod metrics;
pub mod states;
pub mod sweep;
pub mod tolerances;
pub mod uncertainty;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigenDecomposition};
pub use metrics::{DecreasingFn, MetricKind};
pub use states::{DensityMatrix, ProjectiveObservable, PureState};
pub use tolerances::Tolerances;
pub use uncertainty::URReport;
