//! Analytic laws, transforms and moments of the generalized counting process
//! (GCP) and its drifted and time-changed variants, each paired with an
//! independent Monte Carlo sampler.
//!
//! The GCP `M(t)` jumps by `j ∈ {1, …, k}` at rate `λ_j`. Every time-changed
//! variant in this crate is a composition `M(C(t))` with an independent random
//! clock `C`, and every closed-form pmf is a weighted sum over the lattice
//! `Ω(k, n) = {x : Σ j·x_j = n}`.
//!
//! Module map:
//!
//! * [`specfun`]: Mittag-Leffler, Kummer, half-integer Bessel K, incomplete
//!   gamma/beta, and truncated Taylor jets for `(−∂_Λ)^r` operators.
//! * [`gcp`]: parameters, composition lattice, base pmf/pgf/moments, path
//!   simulation.
//! * [`clocks`]: samplers and transforms for every random clock.
//! * [`brownian`]: GCP at Brownian first-passage, squared-Bessel, elastic and
//!   sojourn clocks.
//! * [`subordinated`]: stable, incomplete-gamma and tempered subordination.
//! * [`drift`]: deterministic and random drift, hitting times.
//! * [`fracint`]: Riemann–Liouville integrals of GCP/GFCP paths.
//! * [`family`]: a uniform view over all pmf families.
//! * [`mc`]: reproducible substreams and Monte Carlo estimates.
//! * [`verify`]: the oracle checks behind `gcplab verify`.

pub mod brownian;
pub mod clocks;
pub mod contour;
pub mod drift;
mod error;
pub mod family;
pub mod fracint;
pub mod gcp;
pub mod mc;
pub mod quad;
pub mod specfun;
pub mod subordinated;
pub mod verify;

pub use error::{Error, Result};
pub use gcp::{Composition, GcpParams, StepPath};
pub use mc::McEstimate;
