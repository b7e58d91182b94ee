//! Euler elasticae as extremals of an optimal control problem on the group of
//! rigid motions of the plane.
//!
//! The crate is organised bottom-up:
//!
//! * [`elliptic`]: Jacobi elliptic integrals and functions.
//! * [`phase`]: covectors of the generalized pendulum, their strata and
//!   rectifying (elliptic) coordinates.
//! * [`expmap`]: the closed-form exponential mapping and elastica classes.
//! * [`symmetry`]: reflections of trajectories, covectors and endpoints.
//! * [`maxwell`]: root functions, the constants `k0`, `k*`, `u*`, Maxwell
//!   strata and the cut-time bound.
//! * [`oracle`]: independent numerical ground truth (RK4, quadrature) and a
//!   shooting solver for the boundary value problem.

pub mod elliptic;
pub mod expmap;
pub mod maxwell;
pub mod oracle;
pub mod phase;
pub mod roots;
pub mod symmetry;

mod error;

pub use error::{Error, Result};

use std::f64::consts::{PI, TAU};

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    if a > -PI && a <= PI {
        return a;
    }
    let mut x = a.rem_euclid(TAU);
    if x > PI {
        x -= TAU;
    }
    if x <= -PI {
        x += TAU;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_is_half_open() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI + 0.25) - (-PI + 0.25)).abs() < 1e-12);
        assert_eq!(wrap_angle(0.0), 0.0);
    }
}
