use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fs;
use std::io::Write;
use std::path::Path;

use elastica::elliptic::{complete, ellint_k, Modulus};
use elastica::expmap::{classify, elastic_energy_closed, exp_map, sample_elastica, ElasticaClass, State};
use elastica::maxwell::{self, cut_time_bound, in_maxwell, MaxwellReport, REPORT_TOL};
use elastica::oracle::{attainable, bvp_shoot, integrate_extremal, IntegratorConfig};
use elastica::phase::{default_tol, from_elliptic, stratify, Covector, EllipticCoords, Stratum};
use rayon::prelude::*;
use rayon::ThreadPool;
use serde_json::{json, Value};

use crate::render::{cell, num, svg, write_json, Table};
use crate::{Cli, CliError, Command, CovectorArgs, Curve, Family, OutputFormat, Result};

pub fn dispatch(cli: &Cli, pool: &ThreadPool, out: &mut dyn Write) -> Result<()> {
    let angle = |a: f64| if cli.deg { a.to_radians() } else { a };
    let covector = |l: &CovectorArgs| Covector::new(angle(l.beta), l.c, l.r).map_err(CliError::from);
    let format = cli.format.unwrap_or(OutputFormat::Json);
    if format == OutputFormat::Svg && !matches!(cli.command, Command::Elastica { .. }) {
        return Err(CliError::Usage("svg output is only available for `elastica`".into()));
    }
    match &cli.command {
        Command::Exp { lam, t } => {
            let lam = covector(lam)?;
            let q = exp_map(&lam, *t)?;
            let j = elastic_energy_closed(&lam, *t)?;
            endpoint(out, format, &lam, q, j, stratum_of(cli, &lam))
        }
        Command::OracleExp { lam, t, step } => {
            let lam = covector(lam)?;
            let cfg = IntegratorConfig { step: *step, ..IntegratorConfig::default() };
            let (q, _, j) = integrate_extremal(&lam, *t, cfg)?;
            endpoint(out, format, &lam, q, j, stratum_of(cli, &lam))
        }
        Command::Constants => constants(out, format),
        Command::Sweep { curve, kmin, kmax, n, family } => {
            let table = pool.install(|| sweep(*curve, *family, *kmin, *kmax, *n))?;
            emit_table(out, format, &table)
        }
        Command::Elastica { lam, t1, n, out: path } => {
            let lam = covector(lam)?;
            let fmt = cli.format.unwrap_or(OutputFormat::Svg);
            elastica(out, fmt, &lam, *t1, *n, path.as_deref())
        }
        Command::Gallery { out_dir, n } => gallery(out, format, out_dir, *n),
        Command::Maxwell { lam, t } => {
            let lam = covector(lam)?;
            maxwell_report(out, format, &lam, *t, cli.tol.unwrap_or(REPORT_TOL))
        }
        Command::Bvp { x, y, theta, t1, starts } => {
            let q1 = State::new(*x, *y, angle(*theta));
            bvp(out, format, pool, &q1, *t1, *starts)
        }
    }
}

fn stratum_of(cli: &Cli, lam: &Covector) -> Stratum {
    stratify(lam, cli.tol.unwrap_or_else(|| default_tol(lam)))
}

fn emit_table(out: &mut dyn Write, format: OutputFormat, table: &Table) -> Result<()> {
    match format {
        OutputFormat::Csv => table.write_csv(out),
        _ => write_json(out, &table.to_json()),
    }
}

fn endpoint(out: &mut dyn Write, format: OutputFormat, lam: &Covector, q: State, j: f64, s: Stratum) -> Result<()> {
    let class = classify(lam)?.name();
    match format {
        OutputFormat::Csv => {
            let mut table = Table::new(&["x", "y", "theta", "stratum", "class", "energy"]);
            table.push(vec![cell(q.x), cell(q.y), cell(q.theta), s.name().into(), class.into(), cell(j)]);
            table.write_csv(out)
        }
        _ => write_json(
            out,
            &json!({
                "x": num(q.x),
                "y": num(q.y),
                "theta": num(q.theta),
                "stratum": s.name(),
                "class": class,
                "energy": num(j),
            }),
        ),
    }
}

fn constants(out: &mut dyn Write, format: OutputFormat) -> Result<()> {
    let k0 = maxwell::find_k0()?;
    let (ks, us) = maxwell::find_kstar()?;
    let (big, e) = complete(k0)?;
    let res_k0 = (2.0 * e - big).abs();
    let res_kstar = maxwell::h1(us, ks)?.abs();
    let mut table = Table::new(&["k0", "kstar", "ustar", "residual_k0", "residual_kstar"]);
    table.push([k0.k(), ks.k(), us, res_k0, res_kstar].map(cell).to_vec());
    match format {
        OutputFormat::Csv => table.write_csv(out),
        _ => write_json(out, &table.to_json()[0]),
    }
}

fn curve_value(curve: Curve, family: Family, m: Modulus) -> Result<f64> {
    Ok(match curve {
        Curve::P11 => maxwell::p1_roots(m, 1)?,
        Curve::Pg1 => maxwell::p_g1(m)?,
        Curve::Ua1 => maxwell::u_a1(m)?,
        Curve::Uh1 => maxwell::u_h1(m)?,
        Curve::Cutbound => {
            let stratum = match family {
                Family::N1 => Stratum::N1,
                Family::N2 => Stratum::N2Plus,
            };
            let lam = from_elliptic(&EllipticCoords { stratum, k: m, phi: 0.3, r: 1.0 })?;
            cut_time_bound(&lam)?.bound
        }
    })
}

pub fn sweep(curve: Curve, family: Family, kmin: f64, kmax: f64, n: usize) -> Result<Table> {
    if !(kmin > 0.0 && kmin <= kmax && kmax < 1.0) || n == 0 {
        return Err(CliError::Domain(format!(
            "need 0 < kmin <= kmax < 1 and n >= 1, got kmin = {kmin}, kmax = {kmax}, n = {n}"
        )));
    }
    let ks: Vec<f64> = (0..n)
        .map(|i| if n == 1 { kmin } else { kmin + (kmax - kmin) * i as f64 / (n - 1) as f64 })
        .collect();
    let rows = ks
        .par_iter()
        .map(|&k| {
            let m = Modulus::new(k)?;
            let v = curve_value(curve, family, m)?;
            let big = ellint_k(m)?;
            Ok(vec![cell(k), cell(v), cell(v / big)])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["k", "value", "value_over_k"]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

fn title(class: ElasticaClass) -> String {
    format!("{} elastica", class.name())
}

fn elastica(out: &mut dyn Write, format: OutputFormat, lam: &Covector, t1: f64, n: usize, path: Option<&Path>) -> Result<()> {
    if n < 2 {
        return Err(CliError::Domain(format!("need at least 2 samples, got {n}")));
    }
    let pts = sample_elastica(lam, t1, n)?;
    let doc = match format {
        OutputFormat::Svg => svg(&pts, &title(classify(lam)?)).into_bytes(),
        OutputFormat::Csv => {
            let mut table = Table::new(&["s", "x", "y", "theta"]);
            for (i, p) in pts.iter().enumerate() {
                let s = t1 * i as f64 / (n - 1) as f64;
                table.push(vec![cell(s), cell(p.x), cell(p.y), cell(p.theta)]);
            }
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            buf
        }
        OutputFormat::Json => return Err(CliError::Usage("`elastica` writes svg or csv".into())),
    };
    match path {
        Some(p) => fs::write(p, doc)?,
        None => out.write_all(&doc)?,
    }
    Ok(())
}

/// A representative covector and arc length for each class, long enough
/// to show the shape.
pub fn gallery_member(class: ElasticaClass) -> Result<(Covector, f64)> {
    let n1 = |k: f64| -> Result<(Covector, f64)> {
        let m = Modulus::new(k)?;
        let lam = from_elliptic(&EllipticCoords { stratum: Stratum::N1, k: m, phi: 0.0, r: 1.0 })?;
        Ok((lam, 8.0 * ellint_k(m)?))
    };
    Ok(match class {
        ElasticaClass::Line => (Covector::new(0.0, 0.0, 0.0)?, 1.0),
        ElasticaClass::InflectionalSmallK => n1(0.4)?,
        ElasticaClass::Rectangular => n1(FRAC_1_SQRT_2)?,
        ElasticaClass::InflectionalMidK => n1(0.8)?,
        ElasticaClass::FigureEight => n1(maxwell::k0())?,
        ElasticaClass::InflectionalLargeK => n1(0.97)?,
        ElasticaClass::Critical => (Covector::new(0.0, 2.0, 1.0)?, 12.0),
        ElasticaClass::NonInflectional => (Covector::new(0.0, 2.5, 1.0)?, 12.0),
        ElasticaClass::Circle => (Covector::new(0.0, 1.0, 0.0)?, TAU),
    })
}

fn gallery(out: &mut dyn Write, format: OutputFormat, dir: &Path, n: usize) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut table = Table::new(&["class", "file"]);
    for class in ElasticaClass::ALL {
        let (lam, t1) = gallery_member(class)?;
        let file = dir.join(format!("{}.svg", class.name()));
        elastica(out, OutputFormat::Svg, &lam, t1, n, Some(&file))?;
        table.push(vec![class.name().into(), file.display().to_string()]);
    }
    emit_table(out, format, &table)
}

fn report_json(rep: &MaxwellReport) -> Value {
    json!({
        "t1_max1": num(rep.t1_max1),
        "t1_max2": num(rep.t1_max2),
        "t1_max3plus": num(rep.t1_max3plus),
        "t1_max3minus": num(rep.t1_max3minus),
        "bound": num(rep.bound),
        "caveat": rep.caveat,
    })
}

fn maxwell_report(out: &mut dyn Write, format: OutputFormat, lam: &Covector, t: f64, tol: f64) -> Result<()> {
    if !(t > 0.0) {
        return Err(CliError::Domain(format!("time {t} must be positive")));
    }
    let set = in_maxwell(lam, t, tol)?;
    let rep = cut_time_bound(lam)?;
    let names: Vec<&str> = set.iter().map(|s| s.name()).collect();
    match format {
        OutputFormat::Csv => {
            let mut table = Table::new(&[
                "stratum", "membership", "t1_max1", "t1_max2", "t1_max3plus", "t1_max3minus", "bound", "caveat",
            ]);
            table.push(vec![
                lam.stratum().name().into(),
                names.join(";"),
                cell(rep.t1_max1),
                cell(rep.t1_max2),
                cell(rep.t1_max3plus),
                cell(rep.t1_max3minus),
                cell(rep.bound),
                rep.caveat.to_string(),
            ]);
            table.write_csv(out)
        }
        _ => {
            let mut doc = report_json(&rep);
            doc["stratum"] = json!(lam.stratum().name());
            doc["membership"] = json!(names);
            doc["t"] = num(t);
            write_json(out, &doc)
        }
    }
}

fn bvp(out: &mut dyn Write, format: OutputFormat, pool: &ThreadPool, q1: &State, t1: f64, starts: usize) -> Result<()> {
    if !(t1 > 0.0 && t1.is_finite()) {
        return Err(CliError::Domain(format!("time {t1} must be positive")));
    }
    let eps = 1e-12 * t1.max(1.0);
    let segment_end = (q1.x - t1).abs() <= eps && q1.y.abs() <= eps && q1.theta.abs() <= eps;
    if !attainable(q1, t1) && !segment_end {
        return Err(CliError::Unattainable(format!(
            "target ({}, {}, {}) is not attainable in time {t1}: need x^2 + y^2 < t1^2, or (x, y, theta) = (t1, 0, 0)",
            q1.x, q1.y, q1.theta
        )));
    }
    let outcome = pool.install(|| bvp_shoot(q1, t1, starts))?;
    let mut table = Table::new(&[
        "beta", "c", "r", "stratum", "energy", "residual", "bound", "optimal_candidate",
    ]);
    for s in &outcome.solutions {
        table.push(vec![
            cell(s.covector.beta),
            cell(s.covector.c),
            cell(s.covector.r),
            s.stratum.name().into(),
            cell(s.energy),
            cell(s.residual),
            cell(s.report.bound),
            s.optimal_candidate.to_string(),
        ]);
    }
    match format {
        OutputFormat::Csv => table.write_csv(out),
        _ => write_json(
            out,
            &json!({
                "starts": outcome.starts,
                "converged": outcome.converged,
                "solutions": table.to_json(),
            }),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gallery_members_have_their_class() {
        for class in ElasticaClass::ALL {
            let (lam, _) = gallery_member(class).unwrap();
            assert_eq!(classify(&lam).unwrap(), class);
        }
    }

    #[test]
    fn sweep_rejects_bad_ranges() {
        assert!(matches!(sweep(Curve::P11, Family::N1, 0.5, 0.4, 3), Err(CliError::Domain(_))));
        assert!(matches!(sweep(Curve::P11, Family::N1, 0.0, 0.4, 3), Err(CliError::Domain(_))));
        assert!(matches!(sweep(Curve::Uh1, Family::N1, 0.5, 0.6, 3), Err(CliError::Domain(_))));
        assert_eq!(sweep(Curve::P11, Family::N1, 0.3, 0.3, 1).unwrap().rows.len(), 1);
    }

    #[test]
    fn circle_gallery_member_closes() {
        let (lam, t1) = gallery_member(ElasticaClass::Circle).unwrap();
        assert!(exp_map(&lam, t1).unwrap().gap(&State::origin()) < 1e-12);
        assert!((t1 - 2.0 * PI).abs() < 1e-15);
    }
}
