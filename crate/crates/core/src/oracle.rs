//! Numerical ground truth that does not go through elliptic functions:
//! fixed-step RK4 on the full Hamiltonian system, adaptive Simpson
//! quadrature, the attainable set, and a multi-start shooting solver for
//! the two-point boundary value problem.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::elliptic::Modulus;
use crate::expmap::{elastic_energy_closed, exp_map, State};
use crate::maxwell::{cut_time_bound, MaxwellReport};
use crate::phase::{to_h, Covector, Stratum};
use crate::{wrap_angle, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorConfig {
    pub step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            step: 1e-4,
            max_steps: 100_000_000,
        }
    }
}

type Phase = [f64; 6];

fn rhs(y: &Phase, r: f64) -> Phase {
    let (beta, c, theta) = (y[0], y[1], y[4]);
    [c, -r * beta.sin(), theta.cos(), theta.sin(), c, 0.5 * c * c]
}

fn axpy(y: &Phase, h: f64, k: &Phase) -> Phase {
    std::array::from_fn(|i| y[i] + h * k[i])
}

/// Integrates `β̇ = c, ċ = −r sin β, ẋ = cos θ, ẏ = sin θ, θ̇ = c` together
/// with the running cost `½∫c²`, returning `(q_t, (β_t, c_t, r), J)`.
pub fn integrate_extremal(
    lam: &Covector,
    t: f64,
    cfg: IntegratorConfig,
) -> Result<(State, Covector, f64)> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("time {t} must be non-negative")));
    }
    if !(cfg.step > 0.0) {
        return Err(Error::Domain(format!("step {} must be positive", cfg.step)));
    }
    let n = (t / cfg.step).ceil() as usize;
    if n > cfg.max_steps {
        return Err(Error::MaxSteps(cfg.max_steps));
    }
    let r = lam.r;
    let mut y: Phase = [lam.beta, lam.c, 0.0, 0.0, 0.0, 0.0];
    if n > 0 {
        let h = t / n as f64;
        for _ in 0..n {
            let k1 = rhs(&y, r);
            let k2 = rhs(&axpy(&y, 0.5 * h, &k1), r);
            let k3 = rhs(&axpy(&y, 0.5 * h, &k2), r);
            let k4 = rhs(&axpy(&y, h, &k3), r);
            for i in 0..6 {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
    }
    Ok((
        State::new(y[2], y[3], y[4]),
        Covector::new(y[0], y[1], r)?,
        y[5],
    ))
}

/// Absolute tolerance of [`quad_f`] and [`quad_e`].
pub const QUAD_TOL: f64 = 1e-13;
const QUAD_DEPTH: u32 = 60;

fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::NonConvergence(format!(
            "adaptive Simpson on [{a}, {b}] hit depth {QUAD_DEPTH}"
        )));
    }
    Ok(
        simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)?
            + simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)?,
    )
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute `tol`.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (fa, fb, fm) = (f(a), f(b), f(m));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, fa, b, fb, m, fm, whole, tol, QUAD_DEPTH)
}

fn quad_domain(phi: f64, m: Modulus) -> Result<()> {
    if m.k() >= 1.0 {
        return Err(Error::Domain("quadrature needs k < 1".into()));
    }
    if !(0.0..=FRAC_PI_2).contains(&phi) {
        return Err(Error::Domain(format!("amplitude {phi} outside [0, pi/2]")));
    }
    Ok(())
}

/// `∫₀^phi dt / √(1 − k² sin² t)` by quadrature.
pub fn quad_f(phi: f64, m: Modulus) -> Result<f64> {
    quad_domain(phi, m)?;
    let k2 = m.k2();
    simpson(|t| 1.0 / (1.0 - k2 * t.sin().powi(2)).sqrt(), 0.0, phi, QUAD_TOL)
}

/// `∫₀^phi √(1 − k² sin² t) dt` by quadrature.
pub fn quad_e(phi: f64, m: Modulus) -> Result<f64> {
    quad_domain(phi, m)?;
    let k2 = m.k2();
    simpson(|t| (1.0 - k2 * t.sin().powi(2)).sqrt(), 0.0, phi, QUAD_TOL)
}

/// Whether `q1` can be reached from the identity in time `t1`: either the
/// chord is shorter than `t1`, or `q1` is the end of the straight segment.
pub fn attainable(q1: &State, t1: f64) -> bool {
    q1.x * q1.x + q1.y * q1.y < t1 * t1 || (q1.x == t1 && q1.y == 0.0 && q1.theta == 0.0)
}

fn is_segment_end(q1: &State, t1: f64) -> bool {
    let eps = 1e-12 * t1.max(1.0);
    (q1.x - t1).abs() <= eps && q1.y.abs() <= eps && q1.theta.abs() <= eps
}

/// One converged shooting solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BvpSolution {
    pub covector: Covector,
    pub stratum: Stratum,
    pub energy: f64,
    pub residual: f64,
    pub report: MaxwellReport,
    /// `t1 ≤ bound`: the extremal is not excluded by a Maxwell point.
    pub optimal_candidate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BvpOutcome {
    /// Distinct solutions sorted by elastic energy.
    pub solutions: Vec<BvpSolution>,
    pub starts: usize,
    pub converged: usize,
}

/// Residual below which a Newton run counts as converged.
pub const BVP_RESIDUAL: f64 = 1e-9;
/// Distance in `(β, c, r)` under which two solutions are merged.
pub const BVP_MERGE: f64 = 1e-6;
const NEWTON_ITERS: usize = 60;
const DAMPING: f64 = 0.5;
const LINE_SEARCH: usize = 40;

const GRID_BETA: [f64; 4] = [0.0, FRAC_PI_2, -FRAC_PI_2, PI];
const GRID_C: [f64; 5] = [0.5, 1.0, 2.0, 4.0, 8.0];
const GRID_R: [f64; 5] = [0.0, 0.5, 1.0, 4.0, 16.0];

/// Deterministic start points: the fixed grid, spread out by a stride so
/// that a prefix covers all of it coarsely, followed by seeded random points.
pub fn start_points(count: usize) -> Vec<[f64; 3]> {
    let mut grid = Vec::with_capacity(200);
    for &b in &GRID_BETA {
        for &c in &GRID_C {
            for sg in [1.0, -1.0] {
                for &r in &GRID_R {
                    grid.push([b, sg * c, r]);
                }
            }
        }
    }
    let n = grid.len();
    let mut out: Vec<[f64; 3]> = (0..count.min(n)).map(|i| grid[(i * 77) % n]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_e1a5);
    while out.len() < count {
        out.push([
            rng.gen_range(-PI..PI),
            rng.gen_range(-10.0..10.0),
            rng.gen_range(0.0..20.0),
        ]);
    }
    out
}

/// Covector for an unconstrained `(β, c, r)`; negative `r` is folded by
/// `(β, c, r) ↦ (β + π, c, −r)`, which leaves the extremal unchanged.
fn fold(z: &Vector3<f64>) -> Option<Covector> {
    let (b, c, r) = if z[2] < 0.0 {
        (z[0] + PI, z[1], -z[2])
    } else {
        (z[0], z[1], z[2])
    };
    Covector::new(b, c, r).ok()
}

fn shooting_residual(z: &Vector3<f64>, q1: &State, t1: f64) -> Option<Vector3<f64>> {
    let q = exp_map(&fold(z)?, t1).ok()?;
    let f = Vector3::new(q.x - q1.x, q.y - q1.y, wrap_angle(q.theta - q1.theta));
    f.iter().all(|v| v.is_finite()).then_some(f)
}

fn newton(start: [f64; 3], q1: &State, t1: f64) -> Option<(Covector, f64)> {
    let mut z = Vector3::from(start);
    let mut f = shooting_residual(&z, q1, t1)?;
    let mut nf = f.norm();
    for _ in 0..NEWTON_ITERS {
        if nf < 1e-14 {
            break;
        }
        let mut jac = Matrix3::zeros();
        for j in 0..3 {
            let h = 1e-6 * z[j].abs().max(1.0);
            let mut zp = z;
            let mut zm = z;
            zp[j] += h;
            zm[j] -= h;
            let col = (shooting_residual(&zp, q1, t1)? - shooting_residual(&zm, q1, t1)?) / (2.0 * h);
            jac.set_column(j, &col);
        }
        let jt = jac.transpose();
        let normal = jt * jac;
        let mu = 1e-12 * normal.trace().max(1e-300);
        let step = (normal + Matrix3::identity() * mu)
            .lu()
            .solve(&(-(jt * f)))?;
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..LINE_SEARCH {
            let trial = z + step * alpha;
            if let Some(ft) = shooting_residual(&trial, q1, t1) {
                if ft.norm() < nf {
                    z = trial;
                    f = ft;
                    nf = ft.norm();
                    accepted = true;
                    break;
                }
            }
            alpha *= DAMPING;
        }
        if !accepted {
            break;
        }
    }
    (nf < BVP_RESIDUAL).then(|| (fold(&z).expect("finite iterate"), nf))
}

/// Distance in the Hamiltonian components, where `β` stops mattering as
/// `r → 0`.
fn covector_distance(a: &Covector, b: &Covector) -> f64 {
    let (ha, hb) = (to_h(a), to_h(b));
    (ha.0 - hb.0).abs().max((ha.1 - hb.1).abs()).max((ha.2 - hb.2).abs())
}

fn annotate(lam: Covector, residual: f64, t1: f64) -> Result<BvpSolution> {
    let report = cut_time_bound(&lam)?;
    Ok(BvpSolution {
        covector: lam,
        stratum: lam.stratum(),
        energy: elastic_energy_closed(&lam, t1)?,
        residual,
        optimal_candidate: t1 <= report.bound,
        report,
    })
}

/// Solves `exp_map(λ, t1) = q1` from `starts` initial guesses by damped
/// Gauss-Newton and returns the distinct solutions.
pub fn bvp_shoot(q1: &State, t1: f64, starts: usize) -> Result<BvpOutcome> {
    if !(t1 > 0.0 && t1.is_finite()) {
        return Err(Error::Domain(format!("time {t1} must be positive")));
    }
    if !attainable(q1, t1) && !is_segment_end(q1, t1) {
        return Err(Error::Domain(format!(
            "target ({}, {}, {}) is not attainable in time {t1}",
            q1.x, q1.y, q1.theta
        )));
    }
    if is_segment_end(q1, t1) {
        let line = Covector::new(0.0, 0.0, 0.0)?;
        return Ok(BvpOutcome {
            solutions: vec![annotate(line, 0.0, t1)?],
            starts: 0,
            converged: 0,
        });
    }
    let found: Vec<(Covector, f64)> = start_points(starts)
        .into_par_iter()
        .filter_map(|s| newton(s, q1, t1))
        .collect();
    let converged = found.len();
    let mut distinct: Vec<(Covector, f64)> = Vec::new();
    for (lam, res) in found {
        match distinct
            .iter_mut()
            .find(|(other, _)| covector_distance(other, &lam) < BVP_MERGE)
        {
            Some(slot) => {
                if res < slot.1 {
                    *slot = (lam, res);
                }
            }
            None => distinct.push((lam, res)),
        }
    }
    let mut solutions = distinct
        .into_iter()
        .map(|(lam, res)| annotate(lam, res, t1))
        .collect::<Result<Vec<_>>>()?;
    solutions.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(BvpOutcome {
        solutions,
        starts,
        converged,
    })
}
