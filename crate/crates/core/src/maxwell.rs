//! Maxwell strata of the elastic problem and the upper bound on the cut time.
//!
//! Along an extremal the Maxwell times are governed by a handful of scalar
//! functions of the half-length `p` and the modulus `k`:
//!
//! * [`f1`]: roots give the times where `ε²` produces a Maxwell point on the
//!   oscillating family;
//! * [`f2`]: its analogue on the rotating family, which has no positive roots;
//! * [`g1_n1`], [`g1_n2`]: conditions for the `ε³` Maxwell points with the
//!   endpoint direction reversed.
//!
//! The roots of these functions, located by bracketing and Brent's method,
//! define the constants `k0`, `k*`, `u*` and the cut-time bound.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, SQRT_2, TAU};
use std::sync::OnceLock;

use serde::Serialize;

use crate::elliptic::{self, ellint_e_inc, ellint_f_inc, jacobi, Modulus};
use crate::phase::{to_elliptic, Covector, Stratum};
use crate::roots::brent;
use crate::symmetry::maxwell_coords;
use crate::{Error, Result};

const XTOL: f64 = 1e-15;
const POLE_EPS: f64 = 1e-30;

/// Tolerance used by [`cut_time_bound`] for the lattice conditions on `τ`.
pub const REPORT_TOL: f64 = 1e-9;

/// How many roots `pₙ¹` are scanned when looking for the first Maxwell time.
pub const ROOT_SCAN: i64 = 16;

/// `sn p·dn p − (2E(p) − p)·cn p`.
pub fn f1(p: f64, m: Modulus) -> f64 {
    let v = jacobi(p, m);
    v.sn * v.dn - (2.0 * v.eps - p) * v.cn
}

/// `(k² sn p·cn p + dn p·((2 − k²)p − 2E(p))) / k`.
pub fn f2(p: f64, m: Modulus) -> f64 {
    let v = jacobi(p, m);
    let k2 = m.k2();
    (k2 * v.sn * v.cn + v.dn * ((2.0 - k2) * p - 2.0 * v.eps)) / m.k()
}

/// Oscillating-family condition for `ε³` Maxwell points with `θ_t = π`.
pub fn g1_n1(p: f64, m: Modulus) -> f64 {
    let v = jacobi(p, m);
    let k2 = m.k2();
    let cn2 = v.cn * v.cn;
    (m.kprime2() + k2 * cn2 * cn2) * (2.0 * v.eps - p)
        + v.cn * v.sn * v.dn * (2.0 * k2 * v.sn * v.sn - 1.0)
}

/// Rotating-family condition for `ε³` Maxwell points with `θ_t = π`.
pub fn g1_n2(p: f64, m: Modulus) -> f64 {
    let v = jacobi(p, m);
    let k2 = m.k2();
    let sn2 = v.sn * v.sn;
    (k2 * v.cn * v.sn * v.dn * (2.0 * sn2 - 1.0)
        + (1.0 - 2.0 * sn2 + k2 * sn2 * sn2) * (2.0 * v.eps - (2.0 - k2) * p))
        / m.k()
}

/// Quadratic in `cos 2u` whose sign is the sign of `∂h2/∂u`.
pub fn a1(u: f64, m: Modulus) -> f64 {
    let (c0, c1, c2) = a1_coeffs(m);
    let w = (2.0 * u).cos();
    c0 + c1 * w + c2 * w * w
}

fn a1_coeffs(m: Modulus) -> (f64, f64, f64) {
    let k2 = m.k2();
    (
        8.0 - 10.0 * k2 + 4.0 * k2 * k2,
        4.0 * k2 * (3.0 - 2.0 * k2),
        2.0 * k2 * (2.0 * k2 - 1.0),
    )
}

fn h_weight(u: f64, m: Modulus) -> f64 {
    let c2 = u.cos().powi(2);
    m.kprime2() + m.k2() * c2 * c2
}

/// `g1_n1` in the amplitude variable: `g1_n1(F(u, k), k) = h1(u, k)`.
pub fn h1(u: f64, m: Modulus) -> Result<f64> {
    let (s, c) = u.sin_cos();
    let k2 = m.k2();
    let tail = c * s * (1.0 - k2 * s * s).sqrt() * (2.0 * k2 * s * s - 1.0);
    Ok(h_weight(u, m) * (2.0 * ellint_e_inc(u, m)? - ellint_f_inc(u, m)?) + tail)
}

/// `h1 / (1 − k² + k² cos⁴ u)`.
pub fn h2(u: f64, m: Modulus) -> Result<f64> {
    let w = h_weight(u, m);
    if w <= POLE_EPS {
        return Err(Error::Pole(format!("h2 at u = {u}, k = {}", m.k())));
    }
    Ok(h1(u, m)? / w)
}

/// Closed form of `∂h2/∂u`.
pub fn dh2_du(u: f64, m: Modulus) -> Result<f64> {
    let w = h_weight(u, m);
    if w <= POLE_EPS {
        return Err(Error::Pole(format!("h2 at u = {u}, k = {}", m.k())));
    }
    let k2 = m.k2();
    let s = u.sin();
    let root = (2.0 - k2 + k2 * (2.0 * u).cos()).sqrt();
    Ok(s * s * root / (4.0 * SQRT_2 * w * w) * a1(u, m))
}

/// Compatibility value `2k² sin² u − 1`; its sign decides whether `sn² τ`
/// can match a root of `g1_n1`.
pub fn compat_n1(u: f64, m: Modulus) -> f64 {
    2.0 * m.k2() * u.sin().powi(2) - 1.0
}

fn two_e_minus_k(k: f64) -> f64 {
    let (kk, ee) = elliptic::complete(Modulus::new(k).expect("k in (0, 1)"))
        .expect("k below 1");
    2.0 * ee - kk
}

/// Unique root of `2E(k) − K(k)` in `(1/√2, 1)`: the modulus of the
/// figure-eight elastica.
pub fn find_k0() -> Result<Modulus> {
    Modulus::new(brent(two_e_minus_k, FRAC_1_SQRT_2, 0.99, XTOL)?)
}

/// Cached [`find_k0`].
pub fn k0() -> f64 {
    static K0: OnceLock<f64> = OnceLock::new();
    *K0.get_or_init(|| find_k0().expect("2E - K changes sign on (1/sqrt 2, 0.99)").k())
}

/// Root `t ∈ (−1, 0)` of the quadratic `a1 = 0` in `cos 2u`, as the angle
/// `½ arccos t ∈ (π/4, π/2]`. Defined for `k ∈ [1/√2, 1]`.
pub fn u_a1(m: Modulus) -> Result<f64> {
    let k = m.k();
    if k < FRAC_1_SQRT_2 - 1e-12 {
        return Err(Error::Domain(format!("u_a1 needs k >= 1/sqrt 2, got {k}")));
    }
    let (c0, c1, c2) = a1_coeffs(m);
    if c2.abs() < 1e-14 || k == 1.0 {
        return Ok(FRAC_PI_2);
    }
    let disc = (c1 * c1 - 4.0 * c2 * c0).max(0.0);
    let q = -0.5 * (c1 + disc.sqrt().copysign(c1));
    let t = [q / c2, c0 / q]
        .into_iter()
        .filter(|t| (-1.0 - 1e-12..0.0).contains(t))
        .fold(f64::NAN, |acc, t| if acc.is_nan() { t } else { acc.max(t) });
    if t.is_nan() {
        return Err(Error::NonConvergence(format!("no root of a1 in (-1, 0) at k = {k}")));
    }
    Ok(0.5 * t.max(-1.0).acos())
}

fn alpha(k: f64) -> f64 {
    let m = Modulus::new(k).expect("k in (0, 1)");
    let u = PI - u_a1(m).expect("k >= 1/sqrt 2");
    h1(u, m).expect("k below 1")
}

const KSTAR_STEP: f64 = 1e-3;

/// `k* = sup{k ∈ (1/√2, k0) : α(k) = 0}` with `α(k) = h1(π − u_a1(k), k)`,
/// and `u* = π − u_a1(k*)`.
pub fn find_kstar() -> Result<(Modulus, f64)> {
    let top = k0();
    let mut hi = top;
    let mut f_hi = alpha(hi);
    let mut bracket = None;
    while hi - KSTAR_STEP > FRAC_1_SQRT_2 {
        let lo = hi - KSTAR_STEP;
        let f_lo = alpha(lo);
        if f_lo.signum() != f_hi.signum() {
            bracket = Some((lo, hi));
            break;
        }
        hi = lo;
        f_hi = f_lo;
    }
    let (lo, hi) = bracket.ok_or_else(|| {
        Error::NonConvergence("alpha has no sign change below k0".into())
    })?;
    let ks = brent(alpha, lo, hi, XTOL)?;
    let mut k = top;
    while k > ks {
        if alpha(k) >= 0.0 {
            return Err(Error::NonConvergence(format!(
                "alpha is not negative at {k} above the computed k* = {ks}"
            )));
        }
        k -= KSTAR_STEP;
    }
    let m = Modulus::new(ks)?;
    Ok((m, PI - u_a1(m)?))
}

/// Cached [`find_kstar`] as `(k*, u*)`.
pub fn kstar() -> (f64, f64) {
    static KS: OnceLock<(f64, f64)> = OnceLock::new();
    *KS.get_or_init(|| {
        let (m, u) = find_kstar().expect("alpha changes sign below k0");
        (m.k(), u)
    })
}

fn open_unit(m: Modulus) -> Result<()> {
    let k = m.k();
    if k > 0.0 && k < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("modulus must lie in (0, 1), got {k}")))
    }
}

/// `pₙ¹(k)`: the root of `f1` in `(−K + 2Kn, K + 2Kn)`; odd in `n`.
pub fn p1_roots(m: Modulus, n: i64) -> Result<f64> {
    open_unit(m)?;
    if n == 0 {
        return Ok(0.0);
    }
    if n < 0 {
        return Ok(-p1_roots(m, -n)?);
    }
    let kk = elliptic::ellint_k(m)?;
    let centre = 2.0 * kk * n as f64;
    if m.k() == k0() {
        return Ok(centre);
    }
    brent(|p| f1(p, m), centre - kk, centre + kk, XTOL)
}

/// `p1(k)`: `2K` for `k ≤ k0`, `p₁¹(k)` for `k ≥ k0`.
pub fn p1(m: Modulus) -> Result<f64> {
    open_unit(m)?;
    if m.k() <= k0() {
        Ok(2.0 * elliptic::ellint_k(m)?)
    } else {
        p1_roots(m, 1)
    }
}

fn kstar_domain(m: Modulus) -> Result<()> {
    let k = m.k();
    if k < kstar().0 - 1e-12 || k >= 1.0 {
        return Err(Error::Domain(format!("need k in [k*, 1), got {k}")));
    }
    Ok(())
}

/// Root of `h1(·, k)` between `u_a1(k)` and `π − u_a1(k)`, for `k ∈ [k*, 1)`.
pub fn u_h1(m: Modulus) -> Result<f64> {
    kstar_domain(m)?;
    let ua = u_a1(m)?;
    let (lo, hi) = (ua, PI - ua);
    let f_hi = h1(hi, m)?;
    if f_hi.abs() < 1e-13 {
        return Ok(hi);
    }
    brent(|u| h1(u, m).unwrap_or(f64::NAN), lo, hi, XTOL)
}

/// First positive root of `g1_n1(·, k)`, equal to `F(u_h1(k), k)`.
pub fn p_g1(m: Modulus) -> Result<f64> {
    ellint_f_inc(u_h1(m)?, m)
}

/// Maxwell strata, labelled by the reflection that produces the partner
/// extremal; the `ε³` stratum splits by the endpoint direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MaxwellStratum {
    #[serde(rename = "MAX1")]
    Max1,
    #[serde(rename = "MAX2")]
    Max2,
    #[serde(rename = "MAX3plus")]
    Max3Plus,
    #[serde(rename = "MAX3minus")]
    Max3Minus,
}

impl MaxwellStratum {
    pub fn name(self) -> &'static str {
        match self {
            MaxwellStratum::Max1 => "MAX1",
            MaxwellStratum::Max2 => "MAX2",
            MaxwellStratum::Max3Plus => "MAX3plus",
            MaxwellStratum::Max3Minus => "MAX3minus",
        }
    }

    /// Reflection producing the partner extremal.
    pub fn reflection(self) -> crate::symmetry::Reflection {
        use crate::symmetry::Reflection;
        match self {
            MaxwellStratum::Max1 => Reflection::Eps1,
            MaxwellStratum::Max2 => Reflection::Eps2,
            MaxwellStratum::Max3Plus | MaxwellStratum::Max3Minus => Reflection::Eps3,
        }
    }
}

/// Distance from `x` to the nearest positive multiple of `step`, with that multiple.
fn lattice_gap(x: f64, step: f64) -> (f64, i64) {
    let n = (x / step).round().max(1.0);
    ((x - n * step).abs(), n as i64)
}

/// Maxwell strata containing `(lam, t)`, each equation checked to `tol`.
pub fn in_maxwell(lam: &Covector, t: f64, tol: f64) -> Result<BTreeSet<MaxwellStratum>> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time {t} must be positive")));
    }
    let mut out = BTreeSet::new();
    let s = lam.stratum();
    match s {
        Stratum::N1 => {
            let ec = to_elliptic(lam)?;
            let m = ec.k;
            let kk = elliptic::ellint_k(m)?;
            let mc = maxwell_coords(lam, t)?;
            let vt = jacobi(mc.tau, m);
            let cn_zero = vt.cn.abs() <= tol;
            let sn_zero = vt.sn.abs() <= tol;
            let (gap, _) = lattice_gap(mc.p, 2.0 * kk);
            let on_period = gap <= tol;
            let n = (mc.p / (2.0 * kk)).round() as i64;
            let on_root = n >= 1 && (mc.p - p1_roots(m, n)?).abs() <= tol;
            if on_period && !cn_zero {
                out.insert(MaxwellStratum::Max1);
            }
            if on_root && !sn_zero {
                out.insert(MaxwellStratum::Max2);
            }
            if (on_period && (m.k() - k0()).abs() <= tol)
                || (on_root && cn_zero)
                || (on_period && sn_zero)
            {
                out.insert(MaxwellStratum::Max3Plus);
            }
            let vp = jacobi(mc.p, m);
            let sn2p = vp.sn * vp.sn;
            if g1_n1(mc.p, m).abs() <= tol && sn2p > 0.0 {
                let target = (2.0 * m.k2() * sn2p - 1.0) / (m.k2() * sn2p);
                if (vt.sn * vt.sn - target).abs() <= tol {
                    out.insert(MaxwellStratum::Max3Minus);
                }
            }
        }
        Stratum::N2Plus | Stratum::N2Minus => {
            let ec = to_elliptic(lam)?;
            let m = ec.k;
            let kk = elliptic::ellint_k(m)?;
            let mc = maxwell_coords(lam, t)?;
            let vt = jacobi(mc.tau, m);
            let lattice = (vt.sn * vt.cn).abs() <= tol;
            let (gap, _) = lattice_gap(mc.p, kk);
            if gap <= tol {
                out.insert(if lattice {
                    MaxwellStratum::Max3Plus
                } else {
                    MaxwellStratum::Max1
                });
            }
            let vp = jacobi(mc.p, m);
            let sn2p = vp.sn * vp.sn;
            if g1_n2(mc.p, m).abs() <= tol && sn2p > 0.0 {
                let target = (2.0 * sn2p - 1.0) / (m.k2() * sn2p);
                if (vt.sn * vt.sn - target).abs() <= tol {
                    out.insert(MaxwellStratum::Max3Minus);
                }
            }
        }
        Stratum::N6Plus | Stratum::N6Minus => {
            let (gap, _) = lattice_gap((lam.c * t).abs(), TAU);
            if gap <= tol {
                out.insert(MaxwellStratum::Max1);
                out.insert(MaxwellStratum::Max3Plus);
            }
        }
        _ => {}
    }
    Ok(out)
}

/// First Maxwell times per stratum and the resulting bound on the cut time.
///
/// Infinite entries mean no Maxwell time was found in the searched range:
/// on the oscillating family `MAX2` and `MAX3⁺` scan `pₙ¹` for
/// `n ≤ ROOT_SCAN`, and `MAX3⁻` is only examined at `p = p_g1(k)`; on the
/// rotating family `MAX3⁻` is not searched.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxwellReport {
    pub t1_max1: f64,
    pub t1_max2: f64,
    pub t1_max3plus: f64,
    pub t1_max3minus: f64,
    pub bound: f64,
    /// Set on the oscillating family when `sn τ · cn τ = 0` at `t = bound`,
    /// where the bound rests on conjugate-point arguments rather than on a
    /// Maxwell point.
    pub caveat: bool,
}

impl MaxwellReport {
    fn unbounded() -> Self {
        MaxwellReport {
            t1_max1: f64::INFINITY,
            t1_max2: f64::INFINITY,
            t1_max3plus: f64::INFINITY,
            t1_max3minus: f64::INFINITY,
            bound: f64::INFINITY,
            caveat: false,
        }
    }
}

pub fn cut_time_bound(lam: &Covector) -> Result<MaxwellReport> {
    let s = lam.stratum();
    let tol = REPORT_TOL;
    let mut rep = MaxwellReport::unbounded();
    match s {
        Stratum::N1 => {
            let ec = to_elliptic(lam)?;
            let m = ec.k;
            let k = m.k();
            let kk = elliptic::ellint_k(m)?;
            let sr = lam.r.sqrt();
            let a = ec.arg();
            let time = |p: f64| 2.0 * p / sr;
            let va = jacobi(a, m);
            if va.cn.abs() > tol {
                rep.t1_max1 = time(2.0 * kk);
            }
            let mut max3 = f64::INFINITY;
            if (k - k0()).abs() <= tol || va.sn.abs() <= tol {
                max3 = time(2.0 * kk);
            }
            for n in 1..=ROOT_SCAN {
                let p = p1_roots(m, n)?;
                let v = jacobi(a + p, m);
                if v.cn.abs() <= tol {
                    max3 = max3.min(time(p));
                }
                if v.sn.abs() > tol && rep.t1_max2.is_infinite() {
                    rep.t1_max2 = time(p);
                }
            }
            rep.t1_max3plus = max3;
            if k >= kstar().0 {
                let p = p_g1(m)?;
                let sn2p = jacobi(p, m).sn.powi(2);
                let target = (2.0 * m.k2() * sn2p - 1.0) / (m.k2() * sn2p);
                if (jacobi(a + p, m).sn.powi(2) - target).abs() <= tol {
                    rep.t1_max3minus = time(p);
                }
            }
            let pb = p1(m)?;
            rep.bound = time(pb);
            let vb = jacobi(a + pb, m);
            rep.caveat = (vb.sn * vb.cn).abs() <= tol;
        }
        Stratum::N2Plus | Stratum::N2Minus => {
            let ec = to_elliptic(lam)?;
            let m = ec.k;
            let kk = elliptic::ellint_k(m)?;
            let t = 2.0 * m.k() * kk / lam.r.sqrt();
            let v = jacobi(ec.arg() + kk, m);
            if (v.sn * v.cn).abs() > tol {
                rep.t1_max1 = t;
            } else {
                rep.t1_max3plus = t;
            }
            rep.bound = t;
        }
        Stratum::N6Plus | Stratum::N6Minus => {
            let t = TAU / lam.c.abs();
            rep.t1_max1 = t;
            rep.t1_max3plus = t;
            rep.bound = t;
        }
        _ => {}
    }
    Ok(rep)
}
