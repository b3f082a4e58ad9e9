//! Exact arithmetic: integer polynomials, the trivariate c/s/lambda ring,
//! canonical trigonometric forms, and root isolation.

pub mod intpoly;
pub mod multipoly;
pub mod roots;
pub mod trig;

pub use intpoly::IntPoly;
pub use multipoly::MultiPoly;
pub use roots::{aberth_roots, real_roots_in, root_bound, RealRoot};
pub use trig::TrigForm;
