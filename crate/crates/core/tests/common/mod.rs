//! Reference computations shared by the integration tests. Nothing here
//! touches elliptic functions: they are plain RK4, Simpson and finite
//! differences.
#![allow(dead_code)]

use elastica::expmap::State;
use elastica::phase::Covector;

/// Classical RK4 with `n` equal steps on `[0, t]`.
pub fn rk4<F>(f: F, y0: &[f64], t: f64, n: usize) -> Vec<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let h = t / n as f64;
    let mut y = y0.to_vec();
    let shift = |y: &[f64], k: &[f64], s: f64| -> Vec<f64> {
        y.iter().zip(k).map(|(a, b)| a + s * b).collect()
    };
    for _ in 0..n {
        let k1 = f(&y);
        let k2 = f(&shift(&y, &k1, 0.5 * h));
        let k3 = f(&shift(&y, &k2, 0.5 * h));
        let k4 = f(&shift(&y, &k3, h));
        for i in 0..y.len() {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson_n<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Endpoint, final vertical state and cost of the full system by RK4.
pub fn shoot(lam: &Covector, t: f64, n: usize) -> (State, f64, f64, f64) {
    let r = lam.r;
    let y = rk4(
        |y| {
            vec![
                y[1],
                -r * y[0].sin(),
                y[4].cos(),
                y[4].sin(),
                y[1],
                0.5 * y[1] * y[1],
            ]
        },
        &[lam.beta, lam.c, 0.0, 0.0, 0.0, 0.0],
        t,
        n,
    );
    (State::new(y[2], y[3], y[4]), y[0], y[1], y[5])
}

pub fn cov(beta: f64, c: f64, r: f64) -> Covector {
    Covector::new(beta, c, r).unwrap()
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

/// Oscillating covector with Maxwell coordinates `(τ, p)` and `r`, with the
/// matching time `t = 2p/√r`.
pub fn n1_at(k: f64, tau: f64, p: f64, r: f64) -> (Covector, f64) {
    use elastica::elliptic::{ellint_k, Modulus};
    use elastica::phase::{from_elliptic, EllipticCoords, Stratum};
    let m = Modulus::new(k).unwrap();
    let per = 4.0 * ellint_k(m).unwrap();
    let phi = (tau - p).rem_euclid(per) / r.sqrt();
    let lam = from_elliptic(&EllipticCoords { stratum: Stratum::N1, k: m, phi, r }).unwrap();
    (lam, 2.0 * p / r.sqrt())
}

/// Rotating covector with Maxwell coordinates `(τ, p)`, time `t = 2pk/√r`.
pub fn n2_at(k: f64, tau: f64, p: f64, r: f64, plus: bool) -> (Covector, f64) {
    use elastica::elliptic::{ellint_k, Modulus};
    use elastica::phase::{from_elliptic, EllipticCoords, Stratum};
    let m = Modulus::new(k).unwrap();
    let per = 2.0 * ellint_k(m).unwrap();
    let phi = (tau - p).rem_euclid(per) / r.sqrt();
    let stratum = if plus { Stratum::N2Plus } else { Stratum::N2Minus };
    let lam = from_elliptic(&EllipticCoords { stratum, k: m, phi, r }).unwrap();
    (lam, 2.0 * p * k / r.sqrt())
}

/// Endpoint gap and half-time gap between the extremal of `lam` and its
/// partner under reflection `i`, plus the energy difference.
pub fn partner_gaps(
    lam: &Covector,
    t: f64,
    i: elastica::symmetry::Reflection,
) -> (f64, f64, f64) {
    use elastica::expmap::{elastic_energy_closed, exp_map};
    let other = elastica::symmetry::reflect_covector(i, lam, t).unwrap();
    let end = exp_map(lam, t).unwrap().gap(&exp_map(&other, t).unwrap());
    let a = exp_map(lam, 0.5 * t).unwrap();
    let b = exp_map(&other, 0.5 * t).unwrap();
    let mid = a.gap(&b);
    let dj = (elastic_energy_closed(lam, t).unwrap() - elastic_energy_closed(&other, t).unwrap()).abs();
    (end, mid, dj)
}

/// Constructed members of one cell of the Maxwell classification.
pub struct MaxwellCell {
    pub name: &'static str,
    pub stratum: elastica::maxwell::MaxwellStratum,
    pub members: Vec<(Covector, f64)>,
}

/// `count` members of each nonempty cell, spread over moduli, phases and `r`.
pub fn maxwell_cells(count: usize) -> Vec<MaxwellCell> {
    use elastica::elliptic::{ellint_f_inc, ellint_k, jacobi, Modulus};
    use elastica::maxwell::{kstar, p1_roots, p_g1, MaxwellStratum as M};

    let kk = |k: f64| ellint_k(Modulus::new(k).unwrap()).unwrap();
    let moduli = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * (i as f64 + 0.5) / count as f64;
    let radius = |i: usize| [0.5, 1.0, 2.0, 3.5][i % 4];
    // Fractions of K that stay clear of the zeros of sn and cn.
    let generic = |i: usize| [0.2, 0.35, 0.5, 0.6, 0.8, 1.3, 1.45, 1.7, 2.4, 3.3][i % 10];

    let mut cells = Vec::new();

    let members = (0..count)
        .map(|i| {
            let k = moduli(0.1, 0.98, i);
            let n = 1.0 + 2.0 * (i % 2) as f64;
            n1_at(k, generic(i) * kk(k), 2.0 * n * kk(k), radius(i))
        })
        .collect();
    cells.push(MaxwellCell { name: "N1 MAX1", stratum: M::Max1, members });

    let members = (0..count)
        .map(|i| {
            let k = moduli(0.1, 0.98, i);
            let p = p1_roots(Modulus::new(k).unwrap(), 1 + (i % 2) as i64).unwrap();
            n1_at(k, generic(i + 3) * kk(k), p, radius(i + 1))
        })
        .collect();
    cells.push(MaxwellCell { name: "N1 MAX2", stratum: M::Max2, members });

    let members = (0..count)
        .map(|i| {
            let k = moduli(0.1, 0.98, i);
            let m = Modulus::new(k).unwrap();
            if i % 2 == 0 {
                // p = 2K with sn τ = 0.
                n1_at(k, 2.0 * kk(k) * (i % 4 / 2) as f64, 2.0 * kk(k), radius(i))
            } else {
                // p = p₁¹ with cn τ = 0.
                n1_at(k, kk(k) * [1.0, 3.0][i % 4 / 2], p1_roots(m, 1).unwrap(), radius(i))
            }
        })
        .collect();
    cells.push(MaxwellCell { name: "N1 MAX3plus", stratum: M::Max3Plus, members });

    let (ks, _) = kstar();
    let members = (0..count)
        .map(|i| {
            let k = moduli(ks + 1e-3, 0.995, i);
            let m = Modulus::new(k).unwrap();
            let p = p_g1(m).unwrap();
            let sn2p = jacobi(p, m).sn.powi(2);
            let target = (2.0 * k * k * sn2p - 1.0) / (k * k * sn2p);
            let tau0 = ellint_f_inc(target.sqrt().min(1.0).asin(), m).unwrap();
            let tau = [tau0, 2.0 * kk(k) - tau0, 2.0 * kk(k) + tau0, -tau0][i % 4];
            n1_at(k, tau, p, radius(i + 2))
        })
        .collect();
    cells.push(MaxwellCell { name: "N1 MAX3minus", stratum: M::Max3Minus, members });

    let members = (0..count)
        .map(|i| {
            let k = moduli(0.1, 0.98, i);
            let n = 1.0 + 2.0 * (i % 2) as f64;
            let tau = [0.3, 0.55, 0.8, 1.2, 1.6][i % 5] * kk(k);
            n2_at(k, tau, n * kk(k), radius(i), i % 2 == 0)
        })
        .collect();
    cells.push(MaxwellCell { name: "N2 MAX1", stratum: M::Max1, members });

    let members = (0..count)
        .map(|i| {
            let k = moduli(0.1, 0.98, i);
            let n = 1.0 + 2.0 * (i % 2) as f64;
            let tau = (i % 2) as f64 * kk(k);
            n2_at(k, tau, n * kk(k), radius(i + 1), i % 4 < 2)
        })
        .collect();
    cells.push(MaxwellCell { name: "N2 MAX3plus", stratum: M::Max3Plus, members });

    let members = (0..count)
        .map(|i| {
            let c = [0.6, -1.3, 2.2, -3.0, 0.9][i % 5];
            let n = 1.0 + 2.0 * (i % 2) as f64;
            let beta = -2.5 + 0.5 * i as f64;
            (cov(beta, c, 0.0), std::f64::consts::TAU * n / c.abs())
        })
        .collect();
    cells.push(MaxwellCell { name: "N6 MAX1", stratum: M::Max1, members });

    cells
}
