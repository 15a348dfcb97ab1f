//! Exact dimension-zero genus-one local Gromov–Witten invariants of elliptic
//! fibers, computed three ways:
//!
//! * closed divisor-sum formulas ([`local`]);
//! * contribution sums over the moduli of elliptic covers, enumerated as
//!   sublattices of `ℤ+iℤ` ([`lattice`], [`local`]);
//! * infinite-product identities through the universal series `F(t)`
//!   ([`taubes`]), which also give the Gromov–Taubes / Seiberg–Witten series
//!   of a minimal elliptic surface.
//!
//! All arithmetic is exact over `ℚ`.

pub mod cache;
pub mod error;
pub mod exactnum;
pub mod lattice;
pub mod local;
pub mod series;
pub mod surface;
pub mod taubes;
pub mod verify;

pub use error::{Error, Result};
pub use exactnum::{Int, Rat};
