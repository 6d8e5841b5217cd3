//! Equivariant Lefschetz numbers of linear 𝔾ₘ-actions on projective space,
//! computed exactly by three independent routes:
//!
//! * [`cohomology`]: torus characters of sheaf cohomology from monomial bases,
//! * [`localization`]: contributions of the fixed components through the
//!   inverse of `Σ (−1)ⁱ ∧ⁱ N*` in `K₀`,
//! * [`adelictrace`]: resummation of the traces on the graded pieces of the
//!   incoming/outgoing bifiltration of the completed local rings.
//!
//! [`verify`] compares the routes on a single problem or on a whole grid.
//!
//! ```
//! use lefschetz::cohomology::{lefschetz_direct, VirtualBundle};
//! use lefschetz::localization::localize;
//! use lefschetz::torusaction::LinearAction;
//!
//! let line = LinearAction::new(1, vec![1, 0]).unwrap();
//! let o = VirtualBundle::line(0, 0);
//! assert!(lefschetz_direct(&line, &o).is_one());
//! assert!(localize(&line, &o).unwrap().total.is_one());
//! ```

pub mod adelictrace;
pub mod cohomology;
mod error;
pub mod exactnum;
pub mod k0ring;
pub mod localization;
pub mod torusaction;
pub mod verify;

pub use error::{Error, Result};
