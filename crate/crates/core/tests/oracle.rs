mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_abs_diff_eq;
use elastica::elliptic::{ellint_e, ellint_k, Modulus};
use elastica::expmap::{elastic_energy_closed, exp_map, State};
use elastica::maxwell::cut_time_bound;
use elastica::oracle::*;
use elastica::phase::flow_vertical;
use elastica::{wrap_angle, Error};

use common::{cov, n1_at};

fn cfg(step: f64) -> IntegratorConfig {
    IntegratorConfig { step, ..IntegratorConfig::default() }
}

#[test]
fn integrator_examples() {
    let lam = cov(0.4, 0.0, 0.0);
    let (q, end, j) = integrate_extremal(&lam, 2.5, cfg(1e-3)).unwrap();
    assert!(q.gap(&State::new(2.5, 0.0, 0.0)) < 1e-12);
    assert_eq!((end, j), (lam, 0.0));

    let (q, _, j) = integrate_extremal(&cov(0.0, 1.0, 0.0), PI, cfg(1e-4)).unwrap();
    assert!(q.gap(&State::new(0.0, 2.0, PI)) < 1e-9);
    assert_abs_diff_eq!(j, 0.5 * PI, epsilon = 1e-12);

    let lam = cov(0.3, 1.1, 1.0);
    let (q, end, j) = integrate_extremal(&lam, 2.0, cfg(1e-4)).unwrap();
    assert!(q.gap(&exp_map(&lam, 2.0).unwrap()) < 1e-7);
    let flow = flow_vertical(&lam, 2.0).unwrap();
    assert_abs_diff_eq!(wrap_angle(end.beta - flow.beta), 0.0, epsilon = 1e-7);
    assert_abs_diff_eq!(end.c, flow.c, epsilon = 1e-7);
    assert_abs_diff_eq!(j, 0.387_253_886_725_465_655, epsilon = 1e-10);
    assert!(matches!(integrate_extremal(&lam, -1.0, cfg(1e-4)), Err(Error::Domain(_))));
}

#[test]
fn rk4_is_fourth_order() {
    let lam = cov(0.3, 1.1, 1.0);
    let t = 4.0;
    let exact = exp_map(&lam, t).unwrap();
    let err = |h: f64| integrate_extremal(&lam, t, cfg(h)).unwrap().0.gap(&exact);
    for h in [0.04, 0.02] {
        let ratio = err(h) / err(0.5 * h);
        assert!((12.0..=20.0).contains(&ratio), "h = {h}: ratio {ratio}");
    }
}

#[test]
fn first_integrals_are_conserved() {
    let lam = cov(0.8, 1.7, 1.5);
    let (_, end, _) = integrate_extremal(&lam, 10.0, cfg(1e-4)).unwrap();
    assert!((end.energy() - lam.energy()).abs() < 1e-9);
    assert_eq!(end.r, lam.r);
}

#[test]
fn quadrature_examples() {
    let m = Modulus::new(0.8).unwrap();
    assert_eq!(quad_f(0.0, m).unwrap(), 0.0);
    assert_abs_diff_eq!(quad_f(FRAC_PI_2, Modulus::new(0.0).unwrap()).unwrap(), FRAC_PI_2, epsilon = 1e-14);
    assert!((quad_f(FRAC_PI_2, m).unwrap() - ellint_k(m).unwrap()).abs() < 1e-12);
    assert!((quad_e(FRAC_PI_2, m).unwrap() - ellint_e(m)).abs() < 1e-12);
    assert_abs_diff_eq!(simpson(|x| x.powi(5), 0.0, 2.0, 1e-13).unwrap(), 32.0 / 3.0, epsilon = 1e-12);
    assert!(quad_f(-0.1, m).is_err());
}

#[test]
fn attainable_set() {
    let t1 = 1.5;
    assert!(attainable(&State::new(t1, 0.0, 0.0), t1));
    assert!(!attainable(&State::new(0.0, t1, 0.0), t1));
    assert!(!attainable(&State::new(t1, 0.0, 0.3), t1));
    assert!(attainable(&State::new(0.5 * t1, 0.0, 2.0), t1));
    assert!(!attainable(&State::new(1.2, 1.2, 0.0), t1));
    assert!(attainable(&State::new(-1.0, 1.0, -3.0), t1));
    let s = std::f64::consts::FRAC_1_SQRT_2 * t1;
    assert!(!attainable(&State::new(s, s * (1.0 + 1e-15), 1.0), t1));
}

#[test]
fn bvp_segment_end() {
    let out = bvp_shoot(&State::new(1.0, 0.0, 0.0), 1.0, 50).unwrap();
    assert_eq!(out.solutions.len(), 1);
    assert_eq!(out.solutions[0].energy, 0.0);
    assert!(out.solutions[0].covector.stratum().is_line());
}

#[test]
fn bvp_rejects_unattainable() {
    assert!(matches!(bvp_shoot(&State::new(0.0, 1.5, 0.0), 1.0, 10), Err(Error::Domain(_))));
}

#[test]
fn bvp_finds_the_circle() {
    let q1 = State::new(0.0, 2.0 / PI, PI);
    let out = bvp_shoot(&q1, 1.0, 200).unwrap();
    assert!(out.solutions.iter().any(|s| s.covector.r.abs() < 1e-6 && (s.covector.c - PI).abs() < 1e-6));
    for s in &out.solutions {
        assert!(exp_map(&s.covector, 1.0).unwrap().gap(&q1) < 1e-8);
    }
}

#[test]
fn bvp_generic_targets() {
    for (lam, t1) in [(cov(0.3, 1.1, 1.0), 2.0), (cov(-0.6, 0.8, 0.5), 3.0)] {
        let q1 = exp_map(&lam, t1).unwrap();
        let j = elastic_energy_closed(&lam, t1).unwrap();
        let out = bvp_shoot(&q1, t1, 200).unwrap();
        assert!(!out.solutions.is_empty());
        for s in &out.solutions {
            assert!(exp_map(&s.covector, t1).unwrap().gap(&q1) < 1e-8);
            assert!(s.residual < BVP_RESIDUAL);
        }
        assert!(out.solutions.windows(2).all(|w| w[0].energy <= w[1].energy));
        assert!(out.solutions.iter().any(|s| (s.energy - j).abs() < 1e-8));
    }
}

/// Past a Maxwell point the extremal loses to a cheaper one.
#[test]
fn maxwell_consequence() {
    let k = 0.5;
    let big = ellint_k(Modulus::new(k).unwrap()).unwrap();
    let (lam, _) = n1_at(k, 0.6 * big, 0.0, 1.0);
    let bound = cut_time_bound(&lam).unwrap().bound;
    let t1 = 1.15 * bound;
    let q1 = exp_map(&lam, t1).unwrap();
    let out = bvp_shoot(&q1, t1, 400).unwrap();
    let past: Vec<_> = out.solutions.iter().filter(|s| !s.optimal_candidate).collect();
    assert!(!past.is_empty());
    for s in past {
        assert!(out.solutions.iter().any(|o| o.energy < s.energy));
    }
}
