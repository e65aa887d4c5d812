//! Computable theory of the F-space `L_log` of log-integrable functions.
//!
//! The crate works over finitely-presented measure algebras: a list of
//! weighted atoms plus a list of homogeneous non-atomic components. Components
//! of weight `aleph_0` may be *realized* as the unit interval carrying a
//! constant density, in which case step functions live on them; components of
//! higher weight only take part in passport arithmetic.
//!
//! On top of that the crate provides
//!
//! * the F-norm `‖f‖ = ∫ ln(1 + |f|) dμ` and its metric, in closed form
//!   ([`function`]);
//! * linear isometries in multiplier-times-homomorphism form
//!   `U(f) = U(1)·Φ(f)`, built from measure-preserving isomorphisms or
//!   recovered from a black-box matrix ([`isometry`]);
//! * a decision procedure for whether two algebras carry isometric `L_log`
//!   spaces, with a witness or a refutation certificate ([`classify`]).

pub mod classify;
pub mod error;
pub mod function;
pub mod interval;
pub mod isometry;
pub mod measure_algebra;
pub mod sample;
pub mod schema;
pub mod selftest;

pub use classify::{
    brute_force_decide, decide_isometric, separating_lambda, verify_separation, Candidate,
    Decision, Refutation, SeparationCertificate, SeparationThreshold,
};
pub use error::{Error, Result};
pub use function::{FNormValue, LogFunction};
pub use interval::{IntervalSet, StepFunction};
pub use isometry::{
    decompose, onto_range_check, BandMatch, InducedHomomorphism, IntervalSegment,
    LinearMapTable, LogIsometry, MeasurePreservingIso, OntoCertificate, VerificationReport,
};
pub use measure_algebra::{
    radon_nikodym, Atom, Density, Event, HomogeneousComponent, MeasureAlgebra, Passport,
    PassportRow, Relativized, WeightLabel,
};

/// Relative tolerance for structural equalities: weights, measures, norms.
pub const REL_TOL: f64 = 1e-9;

/// Absolute tolerance for pointwise function values.
pub const POINT_TOL: f64 = 1e-12;

/// Values with `|v|` at or below this count as zero when computing supports.
pub const SUPPORT_TOL: f64 = 1e-12;

/// Relative comparison with the shared structural tolerance.
pub fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    let scale = a.abs().max(b.abs());
    (a - b).abs() <= tol * scale
}
