//! Elliptic integrals and Jacobi elliptic functions for real modulus `k ∈ [0, 1]`.
//!
//! Complete integrals come from the arithmetic-geometric mean. The Jacobi
//! functions use the descending Landen transformation on the same ladder,
//! and the incomplete integrals run its phase recursion forwards.
//!
//! `eps(u)` denotes Jacobi's epsilon function `∫₀ᵘ dn² t dt`, which is the
//! incomplete integral of the second kind evaluated at `am u`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::{wrap_angle, Error, Result};

/// Maximum number of AGM / Landen steps.
pub const LANDEN_CAP: usize = 32;
/// Relative size of `c_n` at which the ladder is considered converged.
pub const LANDEN_EPS: f64 = 1e-15;

/// Elliptic modulus with its cached complement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Modulus {
    k: f64,
    kprime: f64,
}

impl Modulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::Domain(format!("modulus {k} outside [0, 1]")));
        }
        Ok(Self {
            k,
            kprime: ((1.0 - k) * (1.0 + k)).sqrt(),
        })
    }

    #[inline]
    pub fn k(self) -> f64 {
        self.k
    }

    #[inline]
    pub fn kprime(self) -> f64 {
        self.kprime
    }

    #[inline]
    pub fn k2(self) -> f64 {
        self.k * self.k
    }

    /// `1 − k²`, computed without cancellation near `k = 1`.
    #[inline]
    pub fn kprime2(self) -> f64 {
        (1.0 - self.k) * (1.0 + self.k)
    }
}

impl TryFrom<f64> for Modulus {
    type Error = Error;

    fn try_from(k: f64) -> Result<Self> {
        Self::new(k)
    }
}

/// Values of the Jacobi functions at one argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobiValues {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
    pub am: f64,
    pub eps: f64,
}

impl JacobiValues {
    /// Modulus transformation `k ↦ 1/k`.
    ///
    /// `self` must hold the functions of modulus `k` at `u / k`; the result
    /// holds the functions of modulus `1/k` at `u`. Any `k > 0` is accepted,
    /// so applying the map with `k` and then with `1/k` is the identity.
    /// The amplitude of the result is the principal value of `atan2(sn, cn)`.
    pub fn to_reciprocal_modulus(&self, u: f64, k: f64) -> JacobiValues {
        let sn = k * self.sn;
        let cn = self.dn;
        JacobiValues {
            sn,
            cn,
            dn: self.cn,
            am: sn.atan2(cn),
            eps: self.eps / k - (1.0 - k * k) / (k * k) * u,
        }
    }
}

struct Ladder {
    a: [f64; LANDEN_CAP + 1],
    b: [f64; LANDEN_CAP + 1],
    c: [f64; LANDEN_CAP + 1],
    n: usize,
}

impl Ladder {
    fn new(m: Modulus) -> Self {
        let mut l = Ladder {
            a: [0.0; LANDEN_CAP + 1],
            b: [0.0; LANDEN_CAP + 1],
            c: [0.0; LANDEN_CAP + 1],
            n: 0,
        };
        l.a[0] = 1.0;
        l.b[0] = m.kprime;
        l.c[0] = m.k;
        while l.n < LANDEN_CAP && l.c[l.n] > LANDEN_EPS * l.a[l.n] {
            let i = l.n;
            l.a[i + 1] = 0.5 * (l.a[i] + l.b[i]);
            l.b[i + 1] = (l.a[i] * l.b[i]).sqrt();
            l.c[i + 1] = l.c[i] * l.c[i] / (4.0 * l.a[i + 1]);
            l.n += 1;
        }
        l
    }

    fn agm(&self) -> f64 {
        self.a[self.n]
    }

    fn complete_k(&self) -> f64 {
        FRAC_PI_2 / self.agm()
    }

    /// `E(k) / K(k)`.
    fn e_over_k(&self) -> f64 {
        let mut s = 0.0;
        let mut w = 0.5;
        for i in 0..=self.n {
            s += w * self.c[i] * self.c[i];
            w *= 2.0;
        }
        1.0 - s
    }

    /// Forward phase recursion for `phi ∈ [0, π/2]`: returns
    /// `(F(phi), Σ c_i sin φ_i)`.
    fn forward(&self, phi: f64) -> (f64, f64) {
        let mut ph = phi;
        let mut sum = 0.0;
        for i in 0..self.n {
            let target = (self.b[i] * ph.sin()).atan2(self.a[i] * ph.cos());
            ph = 2.0 * ph + wrap_angle(target - ph);
            sum += self.c[i + 1] * ph.sin();
        }
        let scale = 2f64.powi(self.n as i32) * self.agm();
        (ph / scale, sum)
    }
}

/// Complete integral of the first kind `K(k)`.
pub fn ellint_k(m: Modulus) -> Result<f64> {
    if m.k == 1.0 {
        return Err(Error::Divergence("K(1) is infinite".into()));
    }
    Ok(Ladder::new(m).complete_k())
}

/// Complete integral of the second kind `E(k)`.
pub fn ellint_e(m: Modulus) -> f64 {
    if m.k == 1.0 {
        return 1.0;
    }
    let l = Ladder::new(m);
    l.complete_k() * l.e_over_k()
}

/// `(K(k), E(k))` from a single AGM ladder.
pub fn complete(m: Modulus) -> Result<(f64, f64)> {
    if m.k == 1.0 {
        return Err(Error::Divergence("K(1) is infinite".into()));
    }
    let l = Ladder::new(m);
    let kk = l.complete_k();
    Ok((kk, kk * l.e_over_k()))
}

/// `phi = nπ + rem` with `rem ∈ [−π/2, π/2]`.
fn split_half_turns(phi: f64) -> (f64, f64) {
    let n = (phi / PI).round();
    (n, phi - n * PI)
}

fn check_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be finite, got {x}")))
    }
}

/// Incomplete integral of the first kind `F(phi, k) = ∫₀^phi dt/√(1 − k² sin² t)`.
pub fn ellint_f_inc(phi: f64, m: Modulus) -> Result<f64> {
    check_finite(phi, "amplitude")?;
    if m.k == 0.0 {
        return Ok(phi);
    }
    if m.k == 1.0 {
        if phi.abs() >= FRAC_PI_2 {
            return Err(Error::Divergence(format!("F({phi}, 1) is infinite")));
        }
        return Ok(phi.sin().atanh());
    }
    let (n, rem) = split_half_turns(phi);
    let l = Ladder::new(m);
    let (f0, _) = l.forward(rem.abs());
    Ok(2.0 * n * l.complete_k() + f0.copysign(rem))
}

/// Incomplete integral of the second kind `E(phi, k) = ∫₀^phi √(1 − k² sin² t) dt`.
pub fn ellint_e_inc(phi: f64, m: Modulus) -> Result<f64> {
    check_finite(phi, "amplitude")?;
    if m.k == 0.0 {
        return Ok(phi);
    }
    let (n, rem) = split_half_turns(phi);
    if m.k == 1.0 {
        return Ok(2.0 * n + rem.sin());
    }
    let l = Ladder::new(m);
    let kk = l.complete_k();
    let ratio = l.e_over_k();
    let (f0, sum) = l.forward(rem.abs());
    Ok(2.0 * n * kk * ratio + (ratio * f0 + sum).copysign(rem))
}

/// Jacobi functions `sn, cn, dn, am` and `eps` at `u`.
pub fn jacobi(u: f64, m: Modulus) -> JacobiValues {
    if m.k == 0.0 {
        return JacobiValues {
            sn: u.sin(),
            cn: u.cos(),
            dn: 1.0,
            am: u,
            eps: u,
        };
    }
    if m.k == 1.0 {
        let sech = 1.0 / u.cosh();
        return JacobiValues {
            sn: u.tanh(),
            cn: sech,
            dn: sech,
            am: 2.0 * (0.5 * u).tanh().atan(),
            eps: u.tanh(),
        };
    }
    let l = Ladder::new(m);
    let mut phase = [0.0; LANDEN_CAP + 1];
    phase[l.n] = 2f64.powi(l.n as i32) * l.agm() * u;
    for i in (1..=l.n).rev() {
        let s = (l.c[i] / l.a[i] * phase[i].sin()).asin();
        phase[i - 1] = 0.5 * (phase[i] + s);
    }
    let am = phase[0];
    let (sn, cn) = am.sin_cos();
    let dn = (m.kprime2() + m.k2() * cn * cn).sqrt();
    let tail: f64 = (1..=l.n).map(|i| l.c[i] * phase[i].sin()).sum();
    JacobiValues {
        sn,
        cn,
        dn,
        am,
        eps: l.e_over_k() * u + tail,
    }
}

/// Jacobi functions of modulus `1/k` at `u`, obtained from modulus `k` at `u/k`.
pub fn jacobi_recip_modulus(u: f64, m: Modulus) -> Result<JacobiValues> {
    if m.k == 0.0 {
        return Err(Error::Domain("reciprocal of modulus 0".into()));
    }
    Ok(jacobi(u / m.k, m).to_reciprocal_modulus(u, m.k))
}

/// Jacobi functions at `u + v` through the addition theorems.
pub fn jacobi_add(u: f64, v: f64, m: Modulus) -> JacobiValues {
    let a = jacobi(u, m);
    let b = jacobi(v, m);
    let k2 = m.k2();
    let delta = 1.0 - k2 * a.sn * a.sn * b.sn * b.sn;
    let sn = (a.sn * b.cn * b.dn + a.cn * a.dn * b.sn) / delta;
    let cn = (a.cn * b.cn - a.sn * a.dn * b.sn * b.dn) / delta;
    let dn = (a.dn * b.dn - k2 * a.sn * a.cn * b.sn * b.cn) / delta;
    let eps = a.eps + b.eps - k2 * a.sn * b.sn * sn;
    let principal = sn.atan2(cn);
    let am = if m.k == 1.0 {
        principal
    } else {
        let guide = FRAC_PI_2 * (u + v) / Ladder::new(m).complete_k();
        principal + 2.0 * PI * ((guide - principal) / (2.0 * PI)).round()
    };
    JacobiValues {
        sn,
        cn,
        dn,
        am,
        eps,
    }
}

/// Partial derivatives of `(sn, cn, dn, eps)` with respect to the modulus at
/// fixed argument. Conditioning degrades like `1/(k(1 − k²))` near the ends.
pub fn jacobi_derivs_k(u: f64, m: Modulus) -> Result<(f64, f64, f64, f64)> {
    let k = m.k;
    if k == 0.0 || k == 1.0 {
        return Err(Error::Domain(format!(
            "modulus derivatives undefined at k = {k}"
        )));
    }
    let v = jacobi(u, m);
    let kp2 = m.kprime2();
    let (sn, cn, dn, e) = (v.sn, v.cn, v.dn, v.eps);
    let dsn = u * cn * dn / k + k / kp2 * sn * cn * cn - e * cn * dn / (k * kp2);
    let dcn = -u * sn * dn / k - k / kp2 * sn * sn * cn + e * sn * dn / (k * kp2);
    let ddn = -k / kp2 * sn * sn * dn - k * u * sn * cn + k / kp2 * e * sn * cn;
    let deps = k / kp2 * sn * cn * dn - k * u * sn * sn - k / kp2 * e * cn * cn;
    Ok((dsn, dcn, ddn, deps))
}

/// `(dK/dk, dE/dk)` for `k ∈ (0, 1)`.
pub fn complete_derivs_k(m: Modulus) -> Result<(f64, f64)> {
    let k = m.k;
    if k == 0.0 || k == 1.0 {
        return Err(Error::Domain(format!(
            "modulus derivatives undefined at k = {k}"
        )));
    }
    let (kk, ee) = complete(m)?;
    let kp2 = m.kprime2();
    Ok(((ee - kp2 * kk) / (k * kp2), (ee - kk) / k))
}
