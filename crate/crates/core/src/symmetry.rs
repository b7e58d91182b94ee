//! Reflections of the pendulum phase cylinder and their action on extremals.
//!
//! `ε¹` reverses time on the pendulum, `ε²` reflects `β` and reverses time,
//! `ε³` reflects `β` and `c`. Lifted to the plane they reflect an elastic
//! arc in the centre of its chord, in the perpendicular bisector of the
//! chord, and in the chord itself.

use serde::Serialize;

use crate::expmap::State;
use crate::phase::{flow_vertical, to_elliptic, Covector, Stratum};
use crate::{wrap_angle, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Reflection {
    Eps1,
    Eps2,
    Eps3,
}

impl Reflection {
    pub const ALL: [Reflection; 3] = [Reflection::Eps1, Reflection::Eps2, Reflection::Eps3];

    pub fn index(self) -> u8 {
        match self {
            Reflection::Eps1 => 1,
            Reflection::Eps2 => 2,
            Reflection::Eps3 => 3,
        }
    }

    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Reflection::Eps1),
            2 => Ok(Reflection::Eps2),
            3 => Ok(Reflection::Eps3),
            _ => Err(Error::Domain(format!("reflection index {i} not in 1..=3"))),
        }
    }

    /// Product in the Klein four-group; `None` is the identity.
    pub fn compose(self, other: Reflection) -> Option<Reflection> {
        if self == other {
            return None;
        }
        Reflection::ALL
            .into_iter()
            .find(|&r| r != self && r != other)
    }
}

/// Action on endpoints.
pub fn reflect_state(i: Reflection, q: &State) -> State {
    let (s, c) = q.theta.sin_cos();
    match i {
        Reflection::Eps1 => State::new(q.x * c + q.y * s, -q.x * s + q.y * c, -q.theta),
        Reflection::Eps2 => State::new(q.x * c + q.y * s, q.x * s - q.y * c, q.theta),
        Reflection::Eps3 => State::new(q.x, -q.y, -q.theta),
    }
}

/// Initial covector of the reflected extremal on `[0, t]`.
pub fn reflect_covector(i: Reflection, lam: &Covector, t: f64) -> Result<Covector> {
    match i {
        Reflection::Eps1 => {
            let end = flow_vertical(lam, t)?;
            Covector::new(end.beta, -end.c, lam.r)
        }
        Reflection::Eps2 => {
            let end = flow_vertical(lam, t)?;
            Covector::new(-end.beta, end.c, lam.r)
        }
        Reflection::Eps3 => Covector::new(-lam.beta, -lam.c, lam.r),
    }
}

/// Component of `(x, y)` normal to the direction `θ/2`, i.e.
/// `x sin(θ/2) − y cos(θ/2)` with `θ/2 ∈ (−π/2, π/2]`. Only its zero set and
/// absolute value are independent of the half-angle representative.
pub fn half_angle_normal(q: &State) -> f64 {
    let (s, c) = (0.5 * q.theta).sin_cos();
    q.x * s - q.y * c
}

/// Component of `(x, y)` along the direction `θ/2`.
pub fn half_angle_tangent(q: &State) -> f64 {
    let (s, c) = (0.5 * q.theta).sin_cos();
    q.x * c + q.y * s
}

/// Branch of the fixed set of `ε³`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum M3Branch {
    /// `y = 0, θ = 0`.
    Plus,
    /// `y = 0, θ = π`.
    Minus,
}

pub fn m3_branch(q: &State, tol: f64) -> Option<M3Branch> {
    if q.y.abs() >= tol {
        None
    } else if q.theta.abs() < tol {
        Some(M3Branch::Plus)
    } else if wrap_angle(q.theta - std::f64::consts::PI).abs() < tol {
        Some(M3Branch::Minus)
    } else {
        None
    }
}

pub fn is_fixed_state(i: Reflection, q: &State, tol: f64) -> bool {
    match i {
        Reflection::Eps1 => q.theta.abs() < tol,
        Reflection::Eps2 => half_angle_normal(q).abs() < tol * q.x.hypot(q.y).max(1.0),
        Reflection::Eps3 => m3_branch(q, tol).is_some(),
    }
}

/// Midpoint coordinate `tau` and half-length `p` of the arc on `[0, t]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxwellCoords {
    pub tau: f64,
    pub p: f64,
}

pub fn maxwell_coords(lam: &Covector, t: f64) -> Result<MaxwellCoords> {
    let s = lam.stratum();
    let ec = to_elliptic(lam)?;
    let sr = lam.r.sqrt();
    let p = if s.is_n2() {
        0.5 * sr * t / ec.k.k()
    } else {
        0.5 * sr * t
    };
    Ok(MaxwellCoords { tau: ec.arg() + p, p })
}

/// Whether the end covector `ν = (β_t, c_t, r)` is fixed by `εⁱ`.
pub fn is_fixed_covector(i: Reflection, lam: &Covector, t: f64, tol: f64) -> Result<bool> {
    let s = lam.stratum();
    match s {
        Stratum::N4 | Stratum::N5 | Stratum::N7 => Ok(true),
        Stratum::N6Plus | Stratum::N6Minus => Ok(i == Reflection::Eps2
            && wrap_angle(2.0 * lam.beta + lam.c * t).abs() < tol),
        _ => {
            let mc = maxwell_coords(lam, t)?;
            let ec = to_elliptic(lam)?;
            if s.is_n3() {
                return Ok(i == Reflection::Eps2 && mc.tau.abs() < tol);
            }
            let v = crate::elliptic::jacobi(mc.tau, ec.k);
            Ok(match (s, i) {
                (Stratum::N1, Reflection::Eps1) => v.cn.abs() < tol,
                (Stratum::N1, Reflection::Eps2) => v.sn.abs() < tol,
                (_, Reflection::Eps2) => (v.sn * v.cn).abs() < tol,
                _ => false,
            })
        }
    }
}
