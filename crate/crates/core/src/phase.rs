//! The generalized pendulum `β̇ = c, ċ = −r sin β, ṙ = 0`: covectors, their
//! stratification by energy and the rectifying elliptic coordinates in which
//! the pendulum flow becomes a translation.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::elliptic::{self, ellint_f_inc, jacobi, Modulus};
use crate::{wrap_angle, Error, Result};

/// Relative tolerance used by [`Covector::stratum`].
pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// Initial point `(β, c, r)` of the vertical subsystem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Covector {
    pub beta: f64,
    pub c: f64,
    pub r: f64,
}

impl Covector {
    pub fn new(beta: f64, c: f64, r: f64) -> Result<Self> {
        if !(beta.is_finite() && c.is_finite() && r.is_finite()) {
            return Err(Error::Domain(format!(
                "covector ({beta}, {c}, {r}) is not finite"
            )));
        }
        if r < 0.0 {
            return Err(Error::Domain(format!("r = {r} must be non-negative")));
        }
        Ok(Self {
            beta: wrap_angle(beta),
            c,
            r,
        })
    }

    /// Pendulum energy `c²/2 − r cos β`.
    pub fn energy(&self) -> f64 {
        energy(self)
    }

    /// Stratum under the default tolerance `1e-9 · max(r, c², 1)`.
    pub fn stratum(&self) -> Stratum {
        stratify(self, default_tol(self))
    }

    /// Image under the inversion `(β, c) ↦ (−β, −c)`.
    pub fn inverted(&self) -> Covector {
        Covector {
            beta: wrap_angle(-self.beta),
            c: -self.c,
            r: self.r,
        }
    }

    /// Dilation `(β, c, r) ↦ (β, c·e^{−s}, r·e^{−2s})`.
    pub fn dilated(&self, s: f64) -> Covector {
        Covector {
            beta: self.beta,
            c: self.c * (-s).exp(),
            r: self.r * (-2.0 * s).exp(),
        }
    }
}

/// Connected pieces of the covector space, indexed as `N1 … N7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Stratum {
    N1,
    #[serde(rename = "N2plus")]
    N2Plus,
    #[serde(rename = "N2minus")]
    N2Minus,
    #[serde(rename = "N3plus")]
    N3Plus,
    #[serde(rename = "N3minus")]
    N3Minus,
    N4,
    N5,
    #[serde(rename = "N6plus")]
    N6Plus,
    #[serde(rename = "N6minus")]
    N6Minus,
    N7,
}

impl Stratum {
    /// `+1` on the plus branches, `−1` on the minus branches, `+1` otherwise.
    pub fn sign(self) -> f64 {
        match self {
            Stratum::N2Minus | Stratum::N3Minus | Stratum::N6Minus => -1.0,
            _ => 1.0,
        }
    }

    pub fn is_n2(self) -> bool {
        matches!(self, Stratum::N2Plus | Stratum::N2Minus)
    }

    pub fn is_n3(self) -> bool {
        matches!(self, Stratum::N3Plus | Stratum::N3Minus)
    }

    pub fn is_n6(self) -> bool {
        matches!(self, Stratum::N6Plus | Stratum::N6Minus)
    }

    /// Strata whose extremals are straight lines.
    pub fn is_line(self) -> bool {
        matches!(self, Stratum::N4 | Stratum::N5 | Stratum::N7)
    }

    pub fn name(self) -> &'static str {
        match self {
            Stratum::N1 => "N1",
            Stratum::N2Plus => "N2plus",
            Stratum::N2Minus => "N2minus",
            Stratum::N3Plus => "N3plus",
            Stratum::N3Minus => "N3minus",
            Stratum::N4 => "N4",
            Stratum::N5 => "N5",
            Stratum::N6Plus => "N6plus",
            Stratum::N6Minus => "N6minus",
            Stratum::N7 => "N7",
        }
    }
}

pub fn energy(lam: &Covector) -> f64 {
    0.5 * lam.c * lam.c - lam.r * lam.beta.cos()
}

/// `1e-9 · max(r, c², 1)`.
pub fn default_tol(lam: &Covector) -> f64 {
    DEFAULT_REL_TOL * lam.r.max(lam.c * lam.c).max(1.0)
}

/// Classifies `lam`; points within `tol` of a boundary go to the thinner stratum.
pub fn stratify(lam: &Covector, tol: f64) -> Stratum {
    let e = energy(lam);
    let r = lam.r;
    if r <= tol {
        return if lam.c.abs() <= tol {
            Stratum::N7
        } else if lam.c > 0.0 {
            Stratum::N6Plus
        } else {
            Stratum::N6Minus
        };
    }
    if (e + r).abs() <= tol {
        return Stratum::N4;
    }
    if (e - r).abs() <= tol {
        return if wrap_angle(lam.beta - PI).abs() <= tol {
            Stratum::N5
        } else if lam.c >= 0.0 {
            Stratum::N3Plus
        } else {
            Stratum::N3Minus
        };
    }
    if e < r {
        Stratum::N1
    } else if lam.c > 0.0 {
        Stratum::N2Plus
    } else {
        Stratum::N2Minus
    }
}

/// Rectifying coordinates. `phi` is the flow time `φ` on `N1` and `N3`, and
/// `ψ = φ/k` on `N2`; it is stored reduced to one period of the Jacobi
/// functions (`√r·φ ∈ [0, 4K)` on `N1`, `√r·ψ ∈ [0, 2K)` on `N2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticCoords {
    pub stratum: Stratum,
    pub k: Modulus,
    pub phi: f64,
    pub r: f64,
}

impl EllipticCoords {
    /// Argument `√r·phi` of the Jacobi functions.
    pub fn arg(&self) -> f64 {
        self.r.sqrt() * self.phi
    }

    /// Coordinates after flowing for time `t`, not reduced.
    pub fn advanced(&self, t: f64) -> EllipticCoords {
        let dphi = if self.stratum.is_n2() { t / self.k.k() } else { t };
        EllipticCoords {
            phi: self.phi + dphi,
            ..*self
        }
    }
}

fn reduce(x: f64, period: f64) -> f64 {
    let y = x.rem_euclid(period);
    if y >= period {
        0.0
    } else {
        y
    }
}

pub fn to_elliptic(lam: &Covector) -> Result<EllipticCoords> {
    let stratum = lam.stratum();
    let sr = lam.r.sqrt();
    let (sh, ch) = (0.5 * lam.beta).sin_cos();
    let q = lam.c / (2.0 * sr);
    match stratum {
        Stratum::N1 => {
            let k = Modulus::new((sh * sh + q * q).sqrt().min(1.0))?;
            let kk = elliptic::ellint_k(k)?;
            let f = ellint_f_inc(sh.atan2(q), k)?;
            Ok(EllipticCoords {
                stratum,
                k,
                phi: reduce(f, 4.0 * kk) / sr,
                r: lam.r,
            })
        }
        Stratum::N2Plus | Stratum::N2Minus => {
            let sg = stratum.sign();
            let k = Modulus::new((1.0 / (sh * sh + q * q).sqrt()).min(1.0))?;
            let kk = elliptic::ellint_k(k)?;
            let f = ellint_f_inc((sg * sh).atan2(ch), k)?;
            Ok(EllipticCoords {
                stratum,
                k,
                phi: reduce(f, 2.0 * kk) / sr,
                r: lam.r,
            })
        }
        Stratum::N3Plus | Stratum::N3Minus => Ok(EllipticCoords {
            stratum,
            k: Modulus::new(1.0)?,
            phi: (stratum.sign() * sh / ch).asinh() / sr,
            r: lam.r,
        }),
        other => Err(Error::UnsupportedStratum(other)),
    }
}

/// `(β, c)` at Jacobi argument `arg` on the given family, without reduction.
fn pendulum_point(stratum: Stratum, k: Modulus, arg: f64, r: f64) -> Result<(f64, f64)> {
    let sr = r.sqrt();
    let sg = stratum.sign();
    match stratum {
        Stratum::N1 => {
            let v = jacobi(arg, k);
            Ok((
                2.0 * (k.k() * v.sn).atan2(v.dn),
                2.0 * k.k() * sr * v.cn,
            ))
        }
        Stratum::N2Plus | Stratum::N2Minus => {
            let v = jacobi(arg, k);
            Ok((
                wrap_angle(2.0 * (sg * v.sn).atan2(v.cn)),
                sg * 2.0 * sr / k.k() * v.dn,
            ))
        }
        Stratum::N3Plus | Stratum::N3Minus => {
            let sech = 1.0 / arg.cosh();
            Ok((
                2.0 * (sg * arg.tanh()).atan2(sech),
                sg * 2.0 * sr * sech,
            ))
        }
        other => Err(Error::UnsupportedStratum(other)),
    }
}

pub fn from_elliptic(ec: &EllipticCoords) -> Result<Covector> {
    let k = ec.k.k();
    let slack = 1.0 + 1e-12;
    let bad = |what: &str| Err(Error::Domain(format!("{what} in {ec:?}")));
    if !(ec.r > 0.0 && ec.phi.is_finite()) {
        return bad("r must be positive and phi finite");
    }
    match ec.stratum {
        Stratum::N1 | Stratum::N2Plus | Stratum::N2Minus => {
            if !(k > 0.0 && k < 1.0) {
                return bad("modulus outside (0, 1)");
            }
            let span = if ec.stratum == Stratum::N1 { 4.0 } else { 2.0 };
            let period = span * elliptic::ellint_k(ec.k)?;
            if ec.arg() < 0.0 || ec.arg() >= period * slack {
                return bad("phase outside its reduced range");
            }
        }
        Stratum::N3Plus | Stratum::N3Minus => {
            if k != 1.0 {
                return bad("modulus must be 1 on the separatrix");
            }
        }
        other => return Err(Error::UnsupportedStratum(other)),
    }
    let (beta, c) = pendulum_point(ec.stratum, ec.k, ec.arg(), ec.r)?;
    Covector::new(beta, c, ec.r)
}

/// Period in flow time of the vertical motion through `ec`.
pub fn period(ec: &EllipticCoords) -> Result<f64> {
    let sr = ec.r.sqrt();
    match ec.stratum {
        Stratum::N1 => Ok(4.0 * elliptic::ellint_k(ec.k)? / sr),
        Stratum::N2Plus | Stratum::N2Minus => {
            Ok(2.0 * elliptic::ellint_k(ec.k)? * ec.k.k() / sr)
        }
        Stratum::N3Plus | Stratum::N3Minus => Ok(f64::INFINITY),
        other => Err(Error::UnsupportedStratum(other)),
    }
}

/// Period of the vertical motion of `lam`, including the rotations of `N6`.
pub fn pendulum_period(lam: &Covector) -> Result<f64> {
    let s = lam.stratum();
    if s.is_n6() {
        return Ok(TAU / lam.c.abs());
    }
    period(&to_elliptic(lam)?)
}

/// Solution `(β_t, c_t, r)` of the pendulum at time `t` (any sign).
pub fn flow_vertical(lam: &Covector, t: f64) -> Result<Covector> {
    let s = lam.stratum();
    match s {
        Stratum::N1
        | Stratum::N2Plus
        | Stratum::N2Minus
        | Stratum::N3Plus
        | Stratum::N3Minus => {
            let ec = to_elliptic(lam)?.advanced(t);
            let (beta, c) = pendulum_point(s, ec.k, ec.arg(), ec.r)?;
            Covector::new(beta, c, lam.r)
        }
        Stratum::N6Plus | Stratum::N6Minus => Covector::new(lam.beta + lam.c * t, lam.c, lam.r),
        Stratum::N4 | Stratum::N5 | Stratum::N7 => Ok(*lam),
    }
}

/// Components `(h1, h2, h3) = (−r cos β, c, −r sin β)`; `h1 + h2²/2` is the energy.
pub fn to_h(lam: &Covector) -> (f64, f64, f64) {
    (-lam.r * lam.beta.cos(), lam.c, -lam.r * lam.beta.sin())
}
