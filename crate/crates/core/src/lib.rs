//! Counting rational points of bounded height on the quartic del Pezzo
//! surface `x₀x₁ − x₂² = x₀x₃ + x₁x₃ + x₃² − x₂x₄ = 0` (singularity type A₃,
//! four lines), directly and through its universal torsor, together with the
//! arithmetic and analytic ingredients of the leading constant.

pub mod arithfun;
pub mod cli;
pub mod density;
pub mod error;
pub mod factor;
pub mod polytope;
pub mod quad;
pub mod rational;
pub mod surface;
pub mod torsor;
pub mod verify;
pub mod window;

pub use error::{Error, Result};
pub use rational::ExactRational;
pub use surface::{CountResult, SurfacePoint, MAX_BOUND};
pub use torsor::{HeightBounds, TorsorPoint};
