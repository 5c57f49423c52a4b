//! Acceptance criteria 1–10. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; the process fails if any criterion does.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use liouville_core::arith::algebraic::AlgebraicNumber;
use liouville_core::arith::rational::{format_rational, int, rat, Rational};
use liouville_core::counting::jensen::default_r1;
use liouville_core::counting::{counting_experiment, jensen_zero_bound, AnalyticFunction, AnalyticMap};
use liouville_core::lattice::{dirichlet_small_value, siegel_vanishing_polynomial, TargetCoord};
use liouville_core::liouville::{liouville_verify, reference_points};
use liouville_core::measure::{
    calibrate_constant, check_calibration, measure_for_calibration, padic_small_value_measure, small_value_area,
};
use liouville_core::poly::enumerate::monomials;
use liouville_core::poly::IntPolynomial;
use liouville_core::satype::{borel_cantelli_tail, fullness_survey, Verdict};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: impl Into<String>) -> Outcome {
    Outcome { pass, summary: summary.into() }
}

fn random_poly(rng: &mut ChaCha8Rng, d: usize, h: i64) -> IntPolynomial {
    let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-h..=h)).collect();
    while c[d] == 0 {
        c[d] = rng.gen_range(-h..=h);
    }
    IntPolynomial::from_i64(&c)
}

// 1. log|P(p)| ≥ −[K(p):Q]·h(p)·(log‖P‖ + d) for d ≤ 5, ‖P‖ ≤ 20.
fn liouville_exhaustive() -> Outcome {
    let mut failing = vec![];
    let mut total = 0u64;
    let mut resultant = 0u64;
    for (name, p) in reference_points() {
        let rep = liouville_verify(&p, 5, 20).expect("reference points are supported");
        total += rep.violation_count;
        resultant += rep.resultant_violation_count;
        if rep.violation_count > 0 {
            let worst = rep.worst.as_ref().map_or(String::new(), |w| format!(", worst {}", w.polynomial));
            failing.push(format!("{name}: {}{worst}", rep.violation_count));
        }
    }
    let detail = if failing.is_empty() { "none".to_string() } else { failing.join("; ") };
    outcome(
        total == 0,
        format!("{total} violations ({detail}); resultant-form violations {resultant}"),
    )
}

// 2. μ{|z^d| ≤ ε} = π ε^{2/d} on the unit disk.
fn monomial_area() -> Outcome {
    let mut worst = 0.0f64;
    let mut misses = vec![];
    let mut cells = 0;
    for d in 1..=10usize {
        let mut c = vec![0i64; d + 1];
        c[d] = 1;
        let p = IntPolynomial::from_i64(&c);
        for k in 1..=6 {
            let eps = 10f64.powi(-k);
            let est = small_value_area(&p, &int(1), eps, 100_000, 2024 + 100 * d as u64 + k as u64).unwrap();
            let exact = PI * eps.powf(2.0 / d as f64);
            let dev = (est.estimate - exact).abs();
            worst = worst.max(dev / est.confidence_radius);
            if dev > est.confidence_radius {
                misses.push(format!("d={d} eps=1e-{k}"));
            }
            cells += 1;
        }
    }
    outcome(
        misses.is_empty(),
        format!("{cells} cells, largest |est − exact|/radius = {worst:.3}, outside: {misses:?}"),
    )
}

// 3. Calibrate C on one sweep and test C·d·ε^{2/d} on a disjoint one.
fn calibrated_area_bound() -> Outcome {
    let sweep = |seed: u64, avoid: &std::collections::BTreeSet<String>| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = vec![];
        while out.len() < 1000 {
            let d = rng.gen_range(1..=12);
            let p = random_poly(&mut rng, d, 10);
            let eps = [1e-1, 1e-2, 1e-3][rng.gen_range(0..3)];
            let s = rng.gen::<u64>();
            if avoid.contains(&p.to_string()) {
                continue;
            }
            out.push(measure_for_calibration(&p, &int(1), eps, 10_000, s).unwrap());
        }
        out
    };
    let train = sweep(31, &Default::default());
    let seen = train.iter().map(|s| s.polynomial.clone()).collect();
    let c = calibrate_constant(&train);
    let test = sweep(32, &seen);
    let rows = check_calibration(&test, c);
    let bad = rows.iter().filter(|r| !r.verdict).count();
    // independent restatement of the row verdicts
    let recheck = test
        .iter()
        .filter(|s| s.area.estimate > c * s.d as f64 * s.eps.powf(2.0 / s.d as f64) + s.area.confidence_radius)
        .count();
    outcome(bad == 0 && recheck == 0, format!("C = {c:.4}; {bad} of {} test cells exceed", rows.len()))
}

// 4. Exact p-adic measures.
fn padic_measures() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut unstable, mut corrected_fail, mut uncorrected) = (0, 0, 0);
    for _ in 0..1000 {
        let d = rng.gen_range(1..=6);
        let p = random_poly(&mut rng, d, 20);
        let prime = [2u64, 3, 5][rng.gen_range(0..3)];
        let m = rng.gen_range(1..=4);
        let a = padic_small_value_measure(&p, prime, m, 1).unwrap();
        let b = padic_small_value_measure(&p, prime, m, a.k + 2).unwrap();
        if a.value != b.value || b.k != a.k + 2 {
            unstable += 1;
        }
        let v = a.value.to_f64().unwrap();
        let eps_root = (prime as f64).powf(-(m as f64) / d as f64);
        if v > (d as f64 + 1.0) * eps_root * (1.0 + 1e-12) {
            corrected_fail += 1;
        }
        if v > eps_root * (1.0 + 1e-12) {
            uncorrected += 1;
        }
    }
    let ex = padic_small_value_measure(&IntPolynomial::parse("z^2 - 1").unwrap(), 3, 1, 1).unwrap();
    let reproduced = ex.value == rat(2, 3) && ex.paper_bound_exceeded && ex.corrected_bound_holds;
    println!(
        "    logged: z^2 - 1, p = 3, m = 1: measure {} > r·ε^(1/d) = {:.6}; (d+1)·ε^(1/d) = {:.6}; {uncorrected} of 1000 random cases also exceed r·ε^(1/d)",
        format_rational(&ex.value),
        ex.paper_bound,
        ex.corrected_bound
    );
    outcome(
        unstable == 0 && corrected_fail == 0 && reproduced,
        format!("unstable {unstable}, corrected-bound failures {corrected_fail}, example reproduced {reproduced}"),
    )
}

/// Smallest nonzero `|Σ c_i ζ^i|` over `‖c‖∞ ≤ t`, degree ≤ d. Exact zeros at
/// `√2` are recognised from `a + b√2 + 2c = 0`.
fn exhaustive_min(zeta: f64, sqrt2: bool, d: usize, t: i64) -> f64 {
    let side = (2 * t + 1) as u64;
    let mut best = f64::INFINITY;
    for mut k in 0..side.pow(d as u32 + 1) {
        let mut c = [0i64; 3];
        for x in c.iter_mut().take(d + 1) {
            *x = (k % side) as i64 - t;
            k /= side;
        }
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        if sqrt2 && c[1] == 0 && c[0] + 2 * c[2] == 0 {
            continue;
        }
        let v = (c[0] as f64 + c[1] as f64 * zeta + c[2] as f64 * zeta * zeta).abs();
        best = best.min(v);
    }
    best
}

// 5. Dirichlet witnesses against exhaustion and the pigeonhole trend.
fn dirichlet_witness() -> Outcome {
    let sqrt2 = TargetCoord::Algebraic(AlgebraicNumber::real_root(&int(2), 2).unwrap());
    let targets = [("sqrt2", sqrt2, 2f64.sqrt()), ("pi", TargetCoord::Pi, PI), ("e", TargetCoord::E, std::f64::consts::E)];
    let mut lost = vec![];
    let (mut sxy, mut sxx) = (0.0, 0.0);
    let mut fitted = 0;
    for (name, z, zf) in &targets {
        for d in 1..=6u32 {
            for t in [10u64, 100, 1000] {
                let w = dirichlet_small_value(std::slice::from_ref(z), d, t).unwrap();
                if d <= 2 && t <= 100 {
                    let best = exhaustive_min(*zf, *name == "sqrt2", d as usize, t as i64);
                    if w.value.lo > best * (1.0 + 1e-9) {
                        lost.push(format!("{name} d={d} T={t}: {} > {best}", w.value.lo));
                    }
                }
                // generic cells only: √2 is a root of a quadratic
                if *name != "sqrt2" || d == 1 {
                    let x = d as f64 * ((t as f64).ln() + d as f64);
                    let y = -w.log_value.mid();
                    sxy += x * y;
                    sxx += x * x;
                    fitted += 1;
                }
            }
        }
    }
    let slope = sxy / sxx;
    outcome(
        lost.is_empty() && slope >= 0.8,
        format!("fitted exponent {slope:.3} over {fitted} cells; lattice worse than exhaustion: {lost:?}"),
    )
}

// 6. Siegel polynomials on random rational point sets.
fn siegel_random_sets() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut nonvanishing, mut over) = (0, 0);
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(0..=10);
        let pts: Vec<Vec<Rational>> =
            (0..k).map(|_| (0..n).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=7))).collect()).collect();
        let mut d = 0;
        while monomials(n, d).len() <= pts.len() {
            d += 1;
        }
        let r = siegel_vanishing_polynomial(&pts, n, d).unwrap();
        if r.polynomial.is_zero() || pts.iter().any(|p| !r.polynomial.eval_rational(p).unwrap().is_zero()) {
            nonvanishing += 1;
        }
        let log_norm = r.polynomial.norm().to_f64().unwrap().ln();
        if log_norm > r.siegel_bound + (r.n as f64 - 1.0) / 2.0 * 2f64.ln() + 1e-9 {
            over += 1;
        }
    }
    outcome(nonvanishing == 0 && over == 0, format!("non-vanishing {nonvanishing}, over the bound {over}, of 100 sets"))
}

// 7. Borel–Cantelli verdicts and tail bounds.
fn borel_cantelli_grid() -> Outcome {
    let (mut wrong, mut undominated, mut convergent) = (vec![], 0, 0);
    for b1 in [1.0, 3.0, 5.0] {
        for b3 in [0.5, 1.0, 2.0] {
            for b4 in [1.0, 3.0, 5.0] {
                let r = borel_cantelli_tail(1.0, b1, 1.0, b3, b4, 1, 10, 100);
                let expected = b1 > b4 && b3 > 1.0;
                if (r.verdict == Verdict::Converges) != expected {
                    wrong.push(format!("({b1},{b3},{b4}) → {:?}", r.verdict));
                }
                if r.verdict == Verdict::Converges {
                    convergent += 1;
                    let big = borel_cantelli_tail(1.0, b1, 1.0, b3, b4, 1, 20, 200);
                    if big.partial_sum - r.partial_sum > r.tail_bound.unwrap() * (1.0 + 1e-12) {
                        undominated += 1;
                    }
                }
            }
        }
    }
    outcome(
        wrong.is_empty() && undominated == 0,
        format!("27 cells, {convergent} convergent; wrong verdicts {wrong:?}; tail not dominating {undominated}"),
    )
}

// 8. Jensen bounds on polynomials with known rational roots.
fn jensen_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut under = 0;
    let mut slack = 0u64;
    for _ in 0..1000 {
        let deg = rng.gen_range(1..=8);
        let roots: Vec<Rational> = (0..deg).map(|_| rat(rng.gen_range(-15..=15), rng.gen_range(1..=10))).collect();
        let mut coeffs = vec![int(rng.gen_range(1..=5))];
        for q in &roots {
            let mut next = vec![Rational::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * q;
            }
            coeffs = next;
        }
        let r = rat(rng.gen_range(1..=9), 10);
        let inside = roots.iter().filter(|q| q.abs() < r).count() as u64;
        let j = jensen_zero_bound(&AnalyticFunction::polynomial(coeffs), &r, &default_r1(&r)).unwrap();
        if j.bound < inside {
            under += 1;
        }
        slack += j.bound - inside.min(j.bound);
    }
    outcome(under == 0, format!("{under} undercounts in 1000; mean slack {:.2}", slack as f64 / 1000.0))
}

/// Parameters `a/b`, `|a/b| < 9/10`, with `H([b² : ab : a²]) ≤ e^T`.
fn parabola_oracle(t: f64) -> Vec<Rational> {
    let n = t.exp().sqrt() as i64 + 2;
    let mut out = vec![];
    for b in 1..=n {
        for a in -n..=n {
            if a.gcd(&b) != 1 || 10 * a.abs() >= 9 * b {
                continue;
            }
            let c = [BigInt::from(b * b), BigInt::from(a * b), BigInt::from(a * a)];
            let g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            let h = c.iter().map(|x| (x / &g).abs()).max().unwrap();
            if h.to_f64().unwrap().ln() <= t {
                out.push(rat(a, b));
            }
        }
    }
    out.sort();
    out
}

fn counting_reports() -> Vec<liouville_core::counting::CountReport> {
    let f = AnalyticMap::parse("z, z^2").unwrap();
    let grid = [5f64.ln(), 20f64.ln(), 100f64.ln()];
    counting_experiment(&f, &rat(9, 10), &grid, 4.0, 1.0, 0.9).unwrap()
}

// 9. Counting pipeline for (z, z²).
fn counting_pipeline() -> Outcome {
    let reps = counting_reports();
    let mut problems = vec![];
    let mut cells = vec![];
    for rep in &reps {
        let mut got: Vec<Rational> = rep.points.iter().filter(|p| p.is_member()).map(|p| p.z.clone()).collect();
        got.sort();
        if got != parabola_oracle(rep.t) {
            problems.push(format!("T={:.3}: enumeration differs from oracle", rep.t));
        }
        if let Some(aux) = &rep.auxiliary {
            for z in &got {
                let img = [z.clone(), z * z];
                if !aux.polynomial.eval_rational(&img).unwrap().is_zero() {
                    problems.push(format!("T={:.3}: section nonzero at {z}", rep.t));
                }
            }
        }
        if rep.compliant && rep.count as u64 > rep.ceiling.unwrap() {
            problems.push(format!("T={:.3}: {} > ceiling {}", rep.t, rep.count, rep.ceiling.unwrap()));
        }
        let ceiling = rep.ceiling.map_or("none".into(), |c| c.to_string());
        cells.push(format!("{}/{}", rep.count, ceiling));
    }
    if reps[0].count != 3 {
        problems.push(format!("log 5 count {}", reps[0].count));
    }
    let compliant = reps.iter().filter(|r| r.compliant).count();
    outcome(
        problems.is_empty(),
        format!("count/ceiling {}; {compliant} compliant cells; {problems:?}", cells.join(", ")),
    )
}

// 10. Seeded experiments repeat byte for byte.
fn determinism() -> Outcome {
    let json = |v: serde_json::Value| serde_json::to_string(&v).unwrap();
    let run = || {
        let p = IntPolynomial::parse("z^3 - 2*z + 1").unwrap();
        let mut out = vec![];
        out.push(json(serde_json::to_value(small_value_area(&p, &rat(1, 1), 1e-2, 20_000, 99).unwrap()).unwrap()));
        out.push(json(serde_json::to_value(fullness_survey(1, 2.0, &[0.5, 1.0, 2.0], 5, 3, 16, 5).unwrap()).unwrap()));
        out.push(json(serde_json::to_value(counting_reports()).unwrap()));
        out.push(json(serde_json::to_value(padic_small_value_measure(&p, 3, 2, 1).unwrap()).unwrap()));
        out.push(json(serde_json::to_value(dirichlet_small_value(&[TargetCoord::Pi], 3, 100).unwrap()).unwrap()));
        let pts = vec![vec![rat(1, 2), rat(1, 3)], vec![rat(2, 1), rat(5, 1)]];
        out.push(json(serde_json::to_value(siegel_vanishing_polynomial(&pts, 2, 1).unwrap()).unwrap()));
        out
    };
    let a = run();
    let b = run();
    let same = a.iter().zip(&b).filter(|(x, y)| x == y).count();
    outcome(same == a.len(), format!("{same} of {} reports identical", a.len()))
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 10] = [
        (1, "Liouville exhaustive check", Duration::from_secs(300), liouville_exhaustive),
        (2, "monomial area", Duration::from_secs(300), monomial_area),
        (3, "calibrated area bound", Duration::from_secs(600), calibrated_area_bound),
        (4, "p-adic measures", Duration::from_secs(300), padic_measures),
        (5, "Dirichlet witness", Duration::from_secs(600), dirichlet_witness),
        (6, "Siegel construction", Duration::from_secs(120), siegel_random_sets),
        (7, "Borel–Cantelli series", Duration::from_secs(60), borel_cantelli_grid),
        (8, "Jensen soundness", Duration::from_secs(120), jensen_soundness),
        (9, "counting pipeline", Duration::from_secs(300), counting_pipeline),
        (10, "determinism", Duration::from_secs(300), determinism),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = vec![];
    for (id, name, limit, check) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let o = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let pass = o.pass && in_time;
        println!(
            "criterion {id:>2} {}: {name}: {} [{:.1}s of {}s]",
            if pass { "PASS" } else { "FAIL" },
            o.summary,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        if !pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
