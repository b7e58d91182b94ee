//! Closed-form exponential mapping `λ ↦ q_t = (x_t, y_t, θ_t)`.
//!
//! An extremal starts at the identity and follows `ẋ = cos θ, ẏ = sin θ,
//! θ̇ = c` where `(β, c)` moves on the pendulum of [`crate::phase`] and
//! `θ_t = β_t − β`. On the oscillating family the endpoint is an explicit
//! expression in Jacobi functions; the rotating family reuses it through the
//! modulus transformation `k ↦ 1/k`.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use crate::elliptic::{jacobi, jacobi_recip_modulus, JacobiValues};
use crate::maxwell;
use crate::phase::{to_elliptic, Covector, Stratum};
use crate::{wrap_angle, Error, Result};

/// Point `(x, y, θ)` of the group of rigid motions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct State {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl State {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: wrap_angle(theta),
        }
    }

    pub fn origin() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    /// Image under `(x, y, θ) ↦ (x, −y, −θ)`.
    pub fn inverted(&self) -> Self {
        Self::new(self.x, -self.y, -self.theta)
    }

    /// Largest componentwise difference, with `θ` compared modulo `2π`.
    pub fn gap(&self, other: &State) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max(wrap_angle(self.theta - other.theta).abs())
    }
}

/// The nine shapes of Euler elasticae.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ElasticaClass {
    Line,
    InflectionalSmallK,
    Rectangular,
    InflectionalMidK,
    FigureEight,
    InflectionalLargeK,
    Critical,
    NonInflectional,
    Circle,
}

impl ElasticaClass {
    pub const ALL: [ElasticaClass; 9] = [
        ElasticaClass::Line,
        ElasticaClass::InflectionalSmallK,
        ElasticaClass::Rectangular,
        ElasticaClass::InflectionalMidK,
        ElasticaClass::FigureEight,
        ElasticaClass::InflectionalLargeK,
        ElasticaClass::Critical,
        ElasticaClass::NonInflectional,
        ElasticaClass::Circle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ElasticaClass::Line => "Line",
            ElasticaClass::InflectionalSmallK => "InflectionalSmallK",
            ElasticaClass::Rectangular => "Rectangular",
            ElasticaClass::InflectionalMidK => "InflectionalMidK",
            ElasticaClass::FigureEight => "FigureEight",
            ElasticaClass::InflectionalLargeK => "InflectionalLargeK",
            ElasticaClass::Critical => "Critical",
            ElasticaClass::NonInflectional => "NonInflectional",
            ElasticaClass::Circle => "Circle",
        }
    }
}

/// Tolerance on `k` when comparing against `1/√2` and `k0`.
pub const CLASS_TOL: f64 = 1e-9;

/// Endpoint on the oscillating family, written for any positive modulus so
/// that the rotating family can feed in reciprocal-modulus values.
fn oscillating_arc(va: &JacobiValues, vb: &JacobiValues, k: f64, sr: f64, t: f64) -> State {
    let k2 = k * k;
    let de = vb.eps - va.eps;
    let sin_half = k * (va.dn * vb.sn - va.sn * vb.dn);
    let cos_half = va.dn * vb.dn + k2 * va.sn * vb.sn;
    let x = 2.0 / sr * va.dn * va.dn * de
        + 4.0 * k2 / sr * va.dn * va.sn * (va.cn - vb.cn)
        + 2.0 * k2 / sr * va.sn * va.sn * (sr * t - de)
        - t;
    let y = 2.0 * k / sr * (2.0 * va.dn * va.dn - 1.0) * (va.cn - vb.cn)
        - 2.0 * k / sr * va.sn * va.dn * (2.0 * de - sr * t);
    State::new(x, y, 2.0 * sin_half.atan2(cos_half))
}

/// Endpoint on the separatrix (plus branch).
fn critical_arc(a: f64, sr: f64, t: f64) -> State {
    let b = a + sr * t;
    let (ta, tb) = (a.tanh(), b.tanh());
    let (ha, hb) = (1.0 / a.cosh(), 1.0 / b.cosh());
    let sin_half = tb * ha - ta * hb;
    let cos_half = ha * hb + ta * tb;
    let chord = 2.0 * (tb - ta) - sr * t;
    let x = (1.0 - 2.0 * ta * ta) * chord / sr + 4.0 / sr * ta * ha * (ha - hb);
    let y = 2.0 / sr * (2.0 * ha * ha - 1.0) * (ha - hb) - 2.0 / sr * ta * ha * chord;
    State::new(x, y, 2.0 * sin_half.atan2(cos_half))
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("time {t} must be finite and non-negative")))
    }
}

/// Endpoint `q_t` of the extremal with initial covector `lam`.
pub fn exp_map(lam: &Covector, t: f64) -> Result<State> {
    check_time(t)?;
    let s = lam.stratum();
    match s {
        Stratum::N2Minus | Stratum::N3Minus => Ok(exp_map(&lam.inverted(), t)?.inverted()),
        Stratum::N1 => {
            let ec = to_elliptic(lam)?;
            let sr = lam.r.sqrt();
            let a = ec.arg();
            let va = jacobi(a, ec.k);
            let vb = jacobi(a + sr * t, ec.k);
            Ok(oscillating_arc(&va, &vb, ec.k.k(), sr, t))
        }
        Stratum::N2Plus => {
            let ec = to_elliptic(lam)?;
            let sr = lam.r.sqrt();
            let a = ec.arg() * ec.k.k();
            let va = jacobi_recip_modulus(a, ec.k)?;
            let vb = jacobi_recip_modulus(a + sr * t, ec.k)?;
            Ok(oscillating_arc(&va, &vb, 1.0 / ec.k.k(), sr, t))
        }
        Stratum::N3Plus => {
            let ec = to_elliptic(lam)?;
            Ok(critical_arc(ec.arg(), lam.r.sqrt(), t))
        }
        Stratum::N6Plus | Stratum::N6Minus => {
            let c = lam.c;
            let (sh, ch) = (0.5 * c * t).sin_cos();
            Ok(State::new(
                2.0 * sh * ch / c,
                2.0 * sh * sh / c,
                c * t,
            ))
        }
        Stratum::N4 | Stratum::N5 | Stratum::N7 => Ok(State::new(t, 0.0, 0.0)),
    }
}

/// `n` endpoints at equally spaced times `0, t1/(n−1), …, t1`.
pub fn sample_elastica(lam: &Covector, t1: f64, n: usize) -> Result<Vec<State>> {
    check_time(t1)?;
    if n < 2 {
        return Err(Error::Domain(format!("need at least 2 samples, got {n}")));
    }
    let h = t1 / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let t = if i + 1 == n { t1 } else { h * i as f64 };
            exp_map(lam, t)
        })
        .collect()
}

/// Shape of the elastica generated by `lam`.
pub fn classify(lam: &Covector) -> Result<ElasticaClass> {
    let s = lam.stratum();
    Ok(match s {
        Stratum::N4 | Stratum::N5 | Stratum::N7 => ElasticaClass::Line,
        Stratum::N3Plus | Stratum::N3Minus => ElasticaClass::Critical,
        Stratum::N2Plus | Stratum::N2Minus => ElasticaClass::NonInflectional,
        Stratum::N6Plus | Stratum::N6Minus => ElasticaClass::Circle,
        Stratum::N1 => {
            let k = to_elliptic(lam)?.k.k();
            let k0 = maxwell::k0();
            if (k - FRAC_1_SQRT_2).abs() <= CLASS_TOL {
                ElasticaClass::Rectangular
            } else if (k - k0).abs() <= CLASS_TOL {
                ElasticaClass::FigureEight
            } else if k < FRAC_1_SQRT_2 {
                ElasticaClass::InflectionalSmallK
            } else if k < k0 {
                ElasticaClass::InflectionalMidK
            } else {
                ElasticaClass::InflectionalLargeK
            }
        }
    })
}

/// Elastic energy `½∫₀ᵗ c_s² ds` in closed form.
pub fn elastic_energy_closed(lam: &Covector, t: f64) -> Result<f64> {
    check_time(t)?;
    let s = lam.stratum();
    let sr = lam.r.sqrt();
    match s {
        Stratum::N1 => {
            let ec = to_elliptic(lam)?;
            let (a, b) = (ec.arg(), ec.arg() + sr * t);
            let de = jacobi(b, ec.k).eps - jacobi(a, ec.k).eps;
            Ok(2.0 * sr * (de - ec.k.kprime2() * (b - a)))
        }
        Stratum::N2Plus | Stratum::N2Minus => {
            let ec = to_elliptic(lam)?;
            let k = ec.k.k();
            let (a, b) = (ec.arg(), ec.arg() + sr * t / k);
            Ok(2.0 * sr / k * (jacobi(b, ec.k).eps - jacobi(a, ec.k).eps))
        }
        Stratum::N3Plus | Stratum::N3Minus => {
            let a = to_elliptic(lam)?.arg();
            Ok(2.0 * sr * ((a + sr * t).tanh() - a.tanh()))
        }
        Stratum::N6Plus | Stratum::N6Minus => Ok(0.5 * lam.c * lam.c * t),
        Stratum::N4 | Stratum::N5 | Stratum::N7 => Ok(0.0),
    }
}
