//! Numerical backends used to cross-check the symbolic results: an adaptive
//! embedded Runge-Kutta integrator, bracketing root finders, adaptive
//! Gauss-Kronrod quadrature, a method-of-lines grid solver, and the special
//! functions they need.

pub mod beam_axis;
pub mod characteristics;
pub mod grid;
pub mod ode;
pub mod quad;
pub mod root;
pub mod special;
