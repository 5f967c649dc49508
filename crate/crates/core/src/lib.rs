//! Poisson kernel of the half-space `{x_n > a}` for Brownian motion on the
//! real hyperbolic space `H^n`.

pub mod analysis;
pub mod error;
pub mod hyperbolic_bm;
pub mod kernel;
pub mod params;
pub mod quad;
pub mod special_fn;
pub mod wfun;
pub mod zeros;

pub use error::{Error, Result};
pub use params::{zero_count, Geometry, Order, SpaceParams};
