//! Common perpendiculars between divergent geodesics in arithmetic hyperbolic
//! orbifolds, the divisor-sum identities they satisfy, and the closed-form
//! constants of their counting asymptotics.

pub mod ambiguous;
pub mod cli;
pub mod constants;
pub mod divisor;
pub mod error;
pub mod figures;
pub mod heis;
pub mod hgeo;
pub mod numeric;
pub mod perp;
pub mod report;
pub mod ring;

pub use error::{Error, Result};
