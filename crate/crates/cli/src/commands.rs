//! One thin binding per subcommand.

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use liouville_core::arith::algebraic::Precision;
use liouville_core::arith::height::{weil_height_with, HeightOptions, ProjectivePoint};
use liouville_core::arith::rational::{format_rational, parse_rational, Rational};
use liouville_core::counting::experiment::counting_experiment_with;
use liouville_core::counting::{
    counting_summary_csv, enumerate_disk_rational_points, AnalyticMap, CountingOptions, Membership, Policy,
};
use liouville_core::lattice::{dirichlet_small_value, siegel_vanishing_polynomial, TargetCoord};
use liouville_core::liouville::{liouville_verify_with, reference_points};
use liouville_core::measure::replay::recheck_replay;
use liouville_core::measure::{
    area_bound_cor43, grid_quadrature_area, padic_small_value_measure, replay_interpolation_argument,
    small_value_area, ReplayOptions,
};
use liouville_core::poly::{BallPolynomial, DiskSpec, IntPolynomial, TruncatedSeries};
use liouville_core::satype::{
    borel_cantelli_tail, fullness_survey, sa_deficiency_scan, sa_point_test, SaScanResult, Verdict as SeriesVerdict,
};

use crate::config::*;
use crate::{CliError, Outcome, Verdict};

type Res = Result<Outcome, CliError>;

fn bad(what: &str) -> impl Fn(liouville_core::Error) -> CliError + '_ {
    move |e| CliError::Config(format!("{what}: {e}"))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn csv_table(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf8")
}

fn rational(s: &str, what: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(bad(what))
}

fn poly(s: &str) -> Result<IntPolynomial, CliError> {
    IntPolynomial::parse(s).map_err(bad("--poly"))
}

/// A height cutoff: a number or `log(n)`.
pub fn parse_t(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let inner = s
        .strip_prefix("log(")
        .or_else(|| s.strip_prefix("ln("))
        .and_then(|x| x.strip_suffix(')'))
        .or_else(|| s.strip_prefix("log"));
    let v = match inner {
        Some(x) => x.trim().parse::<f64>().ok().filter(|n| *n >= 1.0).map(f64::ln),
        None => s.parse::<f64>().ok(),
    };
    v.filter(|t| t.is_finite() && *t >= 0.0).ok_or_else(|| CliError::Config(format!("bad height cutoff {s:?}")))
}

fn coords(cs: &[String]) -> Result<Vec<TargetCoord>, CliError> {
    cs.iter().map(|c| TargetCoord::parse(c).map_err(bad("--coord"))).collect()
}

fn height_options(cfg: &ExperimentConfig) -> HeightOptions {
    HeightOptions { precision: Precision { ceiling: cfg.precision_ceiling, ..Precision::default() }, ..HeightOptions::default() }
}

fn opt_f64(x: Option<f64>) -> String {
    x.map_or(String::new(), |v| v.to_string())
}

/// Subcommand path and its fully defaulted parameters.
pub fn describe(cmd: &Command) -> (String, Value) {
    let (name, params) = match cmd {
        Command::Height(a) => ("height", to_value(a)),
        Command::Liouville(LiouvilleCommand::Verify(a)) => ("liouville verify", to_value(a)),
        Command::Measure(MeasureCommand::Area(a)) => ("measure area", to_value(a)),
        Command::Measure(MeasureCommand::Padic(a)) => ("measure padic", to_value(a)),
        Command::Measure(MeasureCommand::Replay(a)) => ("measure replay", to_value(a)),
        Command::Satype(SatypeCommand::Scan(a)) => ("satype scan", to_value(a)),
        Command::Satype(SatypeCommand::Test(a)) => ("satype test", to_value(a)),
        Command::Satype(SatypeCommand::Series(a)) => ("satype series", to_value(a)),
        Command::Satype(SatypeCommand::Survey(a)) => ("satype survey", to_value(a)),
        Command::Lattice(LatticeCommand::Dirichlet(a)) => ("lattice dirichlet", to_value(a)),
        Command::Lattice(LatticeCommand::Siegel(a)) => ("lattice siegel", to_value(a)),
        Command::Count(CountCommand::Points(a)) => ("count points", to_value(a)),
        Command::Count(CountCommand::Experiment(a)) => ("count experiment", to_value(a)),
    };
    (name.to_string(), params)
}

pub fn dispatch(cmd: &Command, cfg: &ExperimentConfig) -> Res {
    match cmd {
        Command::Height(a) => height(a, cfg),
        Command::Liouville(LiouvilleCommand::Verify(a)) => verify(a, cfg),
        Command::Measure(MeasureCommand::Area(a)) => area(a, cfg),
        Command::Measure(MeasureCommand::Padic(a)) => padic(a),
        Command::Measure(MeasureCommand::Replay(a)) => replay(a, cfg),
        Command::Satype(SatypeCommand::Scan(a)) => scan(a).map(|(o, _)| o),
        Command::Satype(SatypeCommand::Test(a)) => point_test(a),
        Command::Satype(SatypeCommand::Series(a)) => series(a),
        Command::Satype(SatypeCommand::Survey(a)) => survey(a, cfg),
        Command::Lattice(LatticeCommand::Dirichlet(a)) => dirichlet(a),
        Command::Lattice(LatticeCommand::Siegel(a)) => siegel(a),
        Command::Count(CountCommand::Points(a)) => points(a),
        Command::Count(CountCommand::Experiment(a)) => experiment(a),
    }
}

fn height(a: &HeightArgs, cfg: &ExperimentConfig) -> Res {
    let p = ProjectivePoint::parse(&a.point).map_err(bad("--point"))?;
    let opts = height_options(cfg);
    let h = weil_height_with(&p, &opts)?;
    let deg = p.field_degree(&opts)?;
    Ok(Outcome {
        results: json!({ "point": a.point, "height": h, "field_degree": deg }),
        csv: csv_table(
            &["point", "height_lo", "height_hi", "field_degree"],
            vec![vec![a.point.clone(), h.lo.to_string(), h.hi.to_string(), deg.to_string()]],
        ),
        ..Outcome::default()
    })
}

fn verify(a: &VerifyArgs, cfg: &ExperimentConfig) -> Res {
    let targets: Vec<(String, ProjectivePoint)> = if a.point == "reference" {
        reference_points().into_iter().map(|(n, p)| (n.to_string(), p)).collect()
    } else {
        vec![(a.point.clone(), ProjectivePoint::parse(&a.point).map_err(bad("--point"))?)]
    };
    let opts = height_options(cfg);
    let mut out = Outcome::default();
    let mut reports = vec![];
    let mut rows = vec![];
    for (name, p) in &targets {
        let rep = liouville_verify_with(p, a.dmax, a.hmax, &opts)?;
        out.verdicts.push(Verdict::new(
            format!("liouville {name}"),
            rep.pass,
            format!("{} violations among {} polynomials", rep.violation_count, rep.checked),
        ));
        if rep.boundary_count > 0 {
            out.warnings.push(format!("{name}: {} polynomials meet the bound with equality", rep.boundary_count));
        }
        if rep.resultant_violation_count > 0 {
            out.warnings.push(format!("{name}: {} resultant-bound violations", rep.resultant_violation_count));
        }
        rows.push(vec![
            name.clone(),
            rep.field_degree.to_string(),
            rep.height.mid().to_string(),
            rep.constant.mid().to_string(),
            rep.checked.to_string(),
            rep.vanishing_count.to_string(),
            rep.violation_count.to_string(),
            rep.boundary_count.to_string(),
            opt_f64(rep.worst_margin),
        ]);
        reports.push(json!({ "name": name, "report": rep }));
    }
    out.results = Value::Array(reports);
    out.csv = csv_table(
        &["point", "field_degree", "height", "constant", "checked", "vanishing", "violations", "boundary", "worst_margin"],
        rows,
    );
    Ok(out)
}

/// `π r² ε^{2/d}` when `P = c·z^d`.
fn monomial_area(p: &IntPolynomial, r: f64, eps: f64) -> Option<f64> {
    if p.arity() != 1 || p.terms().len() != 1 {
        return None;
    }
    let d = p.degree()?;
    (d > 0).then(|| std::f64::consts::PI * r * r * eps.powf(2.0 / d as f64))
}

fn area(a: &AreaArgs, cfg: &ExperimentConfig) -> Res {
    let p = poly(&a.poly)?;
    let r = rational(&a.r, "--r")?;
    let rf = r.to_f64().unwrap_or(f64::NAN);
    let d = p.degree().unwrap_or(0).max(1);
    let mut out = Outcome::default();
    let mut cells = vec![];
    let mut rows = vec![];
    for (i, &eps) in a.eps.iter().enumerate() {
        // one seed per cell, derived from the master seed
        let seed = cfg.seed.wrapping_add(i as u64);
        let est = match a.method {
            AreaMethodArg::MonteCarlo => small_value_area(&p, &r, eps, a.samples, seed)?,
            AreaMethodArg::Grid => grid_quadrature_area(&p, &r, eps, a.grid)?,
        };
        if est.ambiguous > 0 {
            out.warnings.push(format!("eps = {eps:e}: {} ambiguous samples excluded", est.ambiguous));
        }
        let bound = a.c.map(|c| area_bound_cor43(d, eps, c));
        if let Some(b) = bound {
            out.verdicts.push(Verdict::new(
                format!("area bound eps={eps:e}"),
                est.estimate <= b + est.confidence_radius,
                format!("{:e} ≤ {:e} + {:e}", est.estimate, b, est.confidence_radius),
            ));
        }
        let exact = monomial_area(&p, rf, eps);
        if let Some(x) = exact {
            out.verdicts.push(Verdict::new(
                format!("monomial area eps={eps:e}"),
                (est.estimate - x).abs() <= est.confidence_radius,
                format!("|{:e} − {:e}| ≤ {:e}", est.estimate, x, est.confidence_radius),
            ));
        }
        rows.push(vec![
            d.to_string(),
            format!("{eps:e}"),
            format!("{:e}", est.estimate),
            format!("{:e}", est.confidence_radius),
            bound.map_or(String::new(), |b| format!("{b:e}")),
            exact.map_or(String::new(), |b| format!("{b:e}")),
            est.ambiguous.to_string(),
        ]);
        cells.push(json!({ "eps": eps, "seed": seed, "estimate": est, "bound": bound, "exact": exact }));
    }
    out.results = json!({ "polynomial": p.to_string(), "d": d, "cells": cells });
    out.csv = csv_table(&["d", "eps", "estimate", "confidence_radius", "bound", "exact", "ambiguous"], rows);
    Ok(out)
}

fn padic(a: &PadicArgs) -> Res {
    let p = poly(&a.poly)?;
    let m = padic_small_value_measure(&p, a.p, a.m, a.k)?;
    let m2 = padic_small_value_measure(&p, a.p, a.m, m.k + 2)?;
    let mut out = Outcome::default();
    let value = format_rational(&m.value);
    out.verdicts.push(Verdict::new(
        "corrected bound",
        m.corrected_bound_holds,
        format!("{value} ≤ (d+1)·ε^(1/d) = {}", m.corrected_bound),
    ));
    out.verdicts.push(Verdict::new(
        "resolution stability",
        m2.value == m.value,
        format!("k = {} and k = {} give {value} and {}", m.k, m2.k, format_rational(&m2.value)),
    ));
    if m.paper_bound_exceeded {
        out.warnings.push(format!(
            "bound discrepancy: measure {value} exceeds ε^(1/d) = {}; the corrected bound (d+1)·ε^(1/d) = {} is the one asserted",
            m.paper_bound, m.corrected_bound
        ));
    }
    out.csv = csv_table(
        &["p", "m", "k", "d", "measure", "paper_bound", "corrected_bound", "paper_bound_exceeded", "corrected_bound_holds"],
        vec![vec![
            m.p.to_string(),
            m.m.to_string(),
            m.k.to_string(),
            m.degree.to_string(),
            value.clone(),
            m.paper_bound.to_string(),
            m.corrected_bound.to_string(),
            m.paper_bound_exceeded.to_string(),
            m.corrected_bound_holds.to_string(),
        ]],
    );
    out.results = json!({ "polynomial": p.to_string(), "measure": m, "measure_k_plus_2": m2 });
    Ok(out)
}

fn replay(a: &ReplayArgs, cfg: &ExperimentConfig) -> Res {
    let r0 = rational(&a.r0, "--r0")?;
    let r1 = rational(&a.r1, "--r1")?;
    let disk = DiskSpec::with_reference(r0, r1.clone()).map_err(bad("--r0/--r1"))?;
    let opts = ReplayOptions { samples: a.samples, seed: cfg.seed, ..ReplayOptions::default() };
    let f = if a.series.trim() == "exp" {
        let radius = r1.to_f64().unwrap_or(1.0).max(1.0);
        TruncatedSeries::exp(a.terms, radius, opts.prec).map_err(bad("--terms"))?
    } else {
        TruncatedSeries::polynomial(BallPolynomial::from_int(&poly(&a.series)?, opts.prec))
    };
    let rec = replay_interpolation_argument(&f, &disk, a.eps, a.beta, a.d, &opts)?;
    let (rem, two) = recheck_replay(&f, &disk, &rec, 2 * opts.prec)?;
    let mut out = Outcome::default();
    out.verdicts.push(Verdict::new(
        "remainder",
        rec.remainder_certified,
        format!("‖f − P‖ ≤ {:e}, bound {:e}", rec.residual, rec.residual_bound),
    ));
    out.verdicts.push(Verdict::new(
        "recheck",
        rem == rec.remainder_certified && two == rec.factor_two_certified,
        format!("doubled precision gives remainder {rem}, factor two {two}"),
    ));
    if !rec.factor_two_certified {
        out.warnings.push(format!("‖f‖ ≤ 2‖P‖ not certified (contraction {:e})", rec.contraction));
    }
    if rec.area.ambiguous > 0 {
        out.warnings.push(format!("{} ambiguous samples excluded", rec.area.ambiguous));
    }
    out.csv = csv_table(
        &["d", "beta", "eps", "area", "residual", "residual_bound", "contraction", "remainder_certified", "factor_two_certified"],
        vec![vec![
            rec.d.to_string(),
            rec.beta.to_string(),
            rec.eps.to_string(),
            format!("{:e}", rec.area.estimate),
            format!("{:e}", rec.residual),
            format!("{:e}", rec.residual_bound),
            format!("{:e}", rec.contraction),
            rec.remainder_certified.to_string(),
            rec.factor_two_certified.to_string(),
        ]],
    );
    out.results = to_value(&rec);
    Ok(out)
}

fn scan_warnings(scan: &SaScanResult, out: &mut Outcome) {
    if !scan.arithmetically_generic {
        let w = scan.vanishing_witness.as_ref().map_or(String::new(), |p| format!(" ({p})"));
        out.warnings.push(format!("point is not arithmetically generic{w}"));
    }
    for c in &scan.cells {
        if c.excluded > 0 {
            out.warnings.push(format!("cell d={}, H={}: {} possibly-zero values excluded", c.d, c.h, c.excluded));
        }
        if !c.complete {
            out.warnings.push(format!("cell d={}, H={}: lattice search incomplete", c.d, c.h));
        }
    }
}

fn scan(a: &ScanArgs) -> Result<(Outcome, SaScanResult), CliError> {
    let zeta = coords(&a.coords)?;
    let s = sa_deficiency_scan(&zeta, a.a, a.dmax, a.hmax)?;
    let mut out = Outcome { results: to_value(&s), csv: s.to_csv(), ..Outcome::default() };
    scan_warnings(&s, &mut out);
    Ok((out, s))
}

fn point_test(a: &TestArgs) -> Res {
    let (mut out, s) = scan(&a.scan)?;
    let t = sa_point_test(&s, a.scan.a, a.constant)?;
    out.verdicts.push(Verdict::new(
        "S_a inequality",
        t.pass,
        format!("empirical height {:e} against A = {}", t.empirical_height, a.constant),
    ));
    out.results = json!({ "scan": out.results, "test": t });
    Ok(out)
}

fn series(a: &SeriesArgs) -> Res {
    let r = borel_cantelli_tail(a.b0, a.b1, a.b2, a.b3, a.b4, a.n, a.dcut, a.hcut);
    let doubled = borel_cantelli_tail(a.b0, a.b1, a.b2, a.b3, a.b4, a.n, 2 * a.dcut, 2 * a.hcut);
    let mut out = Outcome::default();
    if let (SeriesVerdict::Converges, Some(t)) = (r.verdict, r.tail_bound) {
        let inc = doubled.partial_sum - r.partial_sum;
        out.verdicts.push(Verdict::new(
            "tail bound",
            inc <= t * (1.0 + 1e-9) + 1e-300,
            format!("increment {inc:e} under doubled cutoffs, tail bound {t:e}"),
        ));
    }
    if r.verdict == SeriesVerdict::Undecided {
        out.warnings.push("comparison tests inconclusive".into());
    }
    out.csv = csv_table(
        &["d", "partial_sum"],
        r.partial_sums.iter().enumerate().map(|(i, s)| vec![(i + 1).to_string(), format!("{s:e}")]).collect(),
    );
    out.results = json!({ "series": r, "doubled": doubled });
    Ok(out)
}

fn survey(a: &SurveyArgs, cfg: &ExperimentConfig) -> Res {
    let s = fullness_survey(a.n, a.a, &a.a_grid, a.samples, a.dmax, a.hmax, cfg.seed)?;
    let mut out = Outcome::default();
    let special = s.samples.iter().filter(|x| !x.arithmetically_generic).count();
    if special > 0 {
        out.warnings.push(format!("{special} samples not arithmetically generic at the scanned degrees"));
    }
    out.csv = csv_table(
        &["A", "fraction_exceeding"],
        s.fractions.iter().map(|(a, f)| vec![a.to_string(), f.to_string()]).collect(),
    );
    out.results = to_value(&s);
    Ok(out)
}

fn dirichlet(a: &DirichletArgs) -> Res {
    let zeta = coords(&a.coords)?;
    let mut out = Outcome::default();
    let mut cells = vec![];
    let mut rows = vec![];
    for &d in &a.d {
        for &t in &a.t {
            let w = dirichlet_small_value(&zeta, d, t)?;
            if w.vanishing_skipped > 0 {
                // the box difference may be a polynomial vanishing at ζ
                out.warnings.push(format!(
                    "d={d}, T={t}: {} box polynomials vanish at ζ, box bound not asserted",
                    w.vanishing_skipped
                ));
            } else if w.search_complete {
                out.verdicts.push(Verdict::new(
                    format!("box principle d={d}, T={t}"),
                    w.within_pigeonhole,
                    format!("|P(ζ)| ≤ {:e}, box bound {:e}", w.value.hi, w.pigeonhole_bound),
                ));
            } else {
                out.warnings.push(format!("d={d}, T={t}: search incomplete, witness is the best vector found"));
            }
            rows.push(vec![
                d.to_string(),
                t.to_string(),
                w.polynomial.to_string(),
                w.log_norm.to_string(),
                w.log_value.hi.to_string(),
                w.exponent.to_string(),
                format!("{:e}", w.pigeonhole_bound),
                w.search_complete.to_string(),
            ]);
            cells.push(w);
        }
    }
    out.csv = csv_table(
        &["d", "T", "polynomial", "log_norm", "log_value", "exponent", "pigeonhole_bound", "search_complete"],
        rows,
    );
    out.results = to_value(&cells);
    Ok(out)
}

fn siegel(a: &SiegelArgs) -> Res {
    let pts: Vec<Vec<Rational>> = a
        .points
        .iter()
        .map(|p| p.split(',').map(|x| rational(x, "--point")).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let rep = siegel_vanishing_polynomial(&pts, a.n, a.d)?;
    let mut vanishes = true;
    for p in &pts {
        vanishes &= rep.polynomial.eval_rational(p)?.is_zero();
    }
    let mut out = Outcome::default();
    out.verdicts.push(Verdict::new("vanishing", vanishes, format!("{} at {} points", rep.polynomial, pts.len())));
    out.verdicts.push(Verdict::new(
        "norm bound",
        rep.within_bound,
        format!("log‖P‖ = {} against {} + (n−1)/2·log 2", rep.log_norm, rep.siegel_bound),
    ));
    out.csv = csv_table(
        &["polynomial", "m", "n", "log_norm", "siegel_bound", "within_bound"],
        vec![vec![
            rep.polynomial.to_string(),
            rep.m.to_string(),
            rep.n.to_string(),
            rep.log_norm.to_string(),
            rep.siegel_bound.to_string(),
            rep.within_bound.to_string(),
        ]],
    );
    out.results = to_value(&rep);
    Ok(out)
}

fn analytic_map(s: &str) -> Result<AnalyticMap, CliError> {
    AnalyticMap::parse(s).map_err(bad("--map"))
}

fn points(a: &PointsArgs) -> Res {
    let f = analytic_map(&a.map)?;
    let r = rational(&a.r, "--r")?;
    let t = parse_t(&a.t)?;
    let policy: Policy = a.policy.parse().map_err(bad("--policy"))?;
    let recs = enumerate_disk_rational_points(&f, &r, t, policy)?;
    let mut out = Outcome::default();
    let inconclusive = recs.iter().filter(|p| p.membership == Membership::Inconclusive).count();
    if inconclusive > 0 {
        out.warnings.push(format!("{inconclusive} parameters inconclusive at the precision ceiling"));
    }
    let rows = recs
        .iter()
        .map(|p| {
            vec![
                format_rational(&p.z),
                to_value(&p.membership).as_str().unwrap_or_default().to_string(),
                p.height.map_or(String::new(), |h| h.lo.to_string()),
                p.height.map_or(String::new(), |h| h.hi.to_string()),
            ]
        })
        .collect();
    let members = recs.iter().filter(|p| p.is_member()).count();
    out.csv = csv_table(&["z", "membership", "height_lo", "height_hi"], rows);
    out.results = json!({ "t": t, "members": members, "points": recs });
    Ok(out)
}

fn experiment(a: &ExperimentArgs) -> Res {
    let f = analytic_map(&a.map)?;
    let r = rational(&a.r, "--r")?;
    let r1 = a.r1.as_deref().map(|s| rational(s, "--r1")).transpose()?;
    let grid: Vec<f64> = a.t.iter().map(|s| parse_t(s)).collect::<Result<_, _>>()?;
    let opts = CountingOptions { r1, max_monomials: a.max_monomials };
    let reps = counting_experiment_with(&f, &r, &grid, a.gamma, a.a, a.eps0, &opts)?;
    let mut out = Outcome::default();
    let n = f.n() as f64;
    if n >= 2.0 && a.gamma > 1.0 / n && a.gamma <= n / (n - 1.0) {
        out.warnings.push(format!(
            "γ = {} exceeds 1/N = {} but not N/(N−1) = {}; the auxiliary section requires the latter",
            a.gamma,
            1.0 / n,
            n / (n - 1.0)
        ));
    }
    for (label, rep) in a.t.iter().zip(&reps) {
        out.verdicts.push(Verdict::new(
            format!("vanishing T={label}"),
            rep.auxiliary.is_none() || rep.vanishes_on_all,
            format!("auxiliary section at {} points", rep.count),
        ));
        if rep.compliant {
            let c = rep.ceiling.expect("compliant cells have a ceiling");
            out.verdicts.push(Verdict::new(
                format!("ceiling T={label}"),
                rep.count as u64 <= c,
                format!("{} ≤ {c}", rep.count),
            ));
        } else {
            let why = rep.error.clone().unwrap_or_else(|| "hypotheses not met".into());
            out.warnings.push(format!("T={label}: no ceiling claimed: {why}"));
        }
        if rep.inconclusive > 0 {
            out.warnings.push(format!("T={label}: {} inconclusive parameters not counted", rep.inconclusive));
        }
    }
    out.csv = counting_summary_csv(&reps);
    out.results = to_value(&reps);
    Ok(out)
}
