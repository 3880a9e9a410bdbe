//! Acceptance criteria. Each check prints one PASS/FAIL line; the test fails
//! if any check fails. Run with `--nocapture` to see the table.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use sphwell::classical::{self, ImpactParameter, McConfig, McMode};
use sphwell::numerics::{self, EndpointSingularity, GaussLegendre, RadialGrid};
use sphwell::quantum::{self, TotalDensity};
use sphwell::specfun::{self, AngularPoint};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn level_one_structure() -> Outcome {
    let spec = quantum::level_spec(1).unwrap();
    let pass = spec.l_max == 2 && spec.degeneracy == 10 && spec.weights == [0.2, 0.3, 0.5] && spec.energy == PI * PI / 2.0;
    outcome(pass, format!("l_max {} D {} w {:?} E {}", spec.l_max, spec.degeneracy, spec.weights, spec.energy))
}

fn normalization_constants() -> Outcome {
    let pi2 = PI * PI;
    let expected = [(1, 0, 2.0 * pi2), (1, 1, 2.0 * pi2), (1, 2, 2.0 * pi2 * pi2 / (pi2 - 6.0))];
    let mut worst_paper = 0.0f64;
    let mut worst_quad = 0.0f64;
    for (n, l, paper) in expected {
        let closed = quantum::normalization_constant_sq(n, l).unwrap();
        let quad = quantum::normalization_constant_sq_by_quadrature(n, l).unwrap();
        worst_paper = worst_paper.max(rel(closed, paper));
        worst_quad = worst_quad.max(rel(closed, quad));
    }
    outcome(
        worst_paper < 1e-12 && worst_quad < 1e-9,
        format!("vs paper {worst_paper:.1e} (tol 1e-12), vs quadrature {worst_quad:.1e} (tol 1e-9)"),
    )
}

fn l0_identity() -> Outcome {
    let grid = RadialGrid::uniform(1000, 1.0).unwrap();
    let mut worst = 0.0f64;
    for n in [1, 5, 10] {
        let curve = quantum::mean_radial_density(n, 0, &grid).unwrap();
        worst = curve.values().iter().fold(worst, |w, v| w.max((v - 1.0).abs()));
    }
    outcome(worst < 1e-12, format!("max |P - 1| = {worst:.1e} (tol 1e-12)"))
}

fn classical_normalization() -> Outcome {
    let density = |r: f64| classical::classical_total_density(r).unwrap();
    let mass = numerics::integrate_singular(density, 0.0, 1.0, 1e-12, EndpointSingularity::LogRight).unwrap();
    let mut worst = 0.0f64;
    for i in 1..=99 {
        let r = i as f64 / 100.0;
        let quad = classical::classical_total_density_by_quadrature(r, 1e-13).unwrap();
        worst = worst.max((quad - density(r)).abs());
    }
    let mass_err = (mass - 1.0).abs();
    outcome(
        mass_err < 1e-9 && worst < 1e-8,
        format!("|mass - 1| = {mass_err:.1e} (tol 1e-9), sup |integral - closed| = {worst:.1e} (tol 1e-8)"),
    )
}

fn monte_carlo_oracle() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for (mode, oracle) in [
        (McMode::Paper, (|r: f64| r * ((1.0 + r) / (1.0 - r)).ln()) as fn(f64) -> f64),
        (McMode::Liouville, |r: f64| 3.0 * r * r),
    ] {
        let config = McConfig::new(mode, 10_000_000, 100, 42, 0.99).unwrap();
        let estimate = classical::mc_radial_density(&config).unwrap();
        let peak = estimate.curve.grid().points().iter().map(|&r| oracle(r)).fold(0.0, f64::max);
        let dev = estimate.curve.iter().map(|(r, v)| (v - oracle(r)).abs()).fold(0.0, f64::max);
        let ratio = dev / peak;
        pass &= ratio < 0.01;
        details.push(format!("{mode:?} sup dev {:.3}% of max", 100.0 * ratio));
    }
    outcome(pass, format!("{} (tol 1%)", details.join(", ")))
}

fn per_sigma_normalization() -> Outcome {
    let mut worst = 0.0f64;
    for s in [0.0, 0.25, 0.5, 0.9] {
        let sigma = ImpactParameter::new(s).unwrap();
        let mass = numerics::integrate_singular(
            |r| classical::p_sigma(r, sigma).unwrap(),
            s,
            1.0,
            1e-12,
            EndpointSingularity::InvSqrtLeft,
        )
        .unwrap();
        worst = worst.max((mass - 1.0).abs());
    }
    outcome(worst < 1e-9, format!("max |mass - 1| = {worst:.1e} (tol 1e-9)"))
}

fn centrifugal_sandwich() -> Outcome {
    const TOL: f64 = 1e-8;
    let mut violations = Vec::new();
    let mut checked = 0;
    for n in [1u32, 2, 3, 10] {
        let upper = (f64::from(n) * PI).powi(2) / 2.0;
        for l in 1..=quantum::allowed_l_max(n) {
            let lf = f64::from(l);
            let lower = lf * (lf + 1.0) / 2.0;
            let value = quantum::centrifugal_expectation(n, l).unwrap();
            checked += 1;
            if value < lower - TOL || value > upper + TOL {
                violations.push(format!("(n={n}, l={l}): {value:.6} not in [{lower}, {upper:.6}]"));
            }
        }
    }
    let detail = if violations.is_empty() {
        format!("{checked} (n, l) pairs inside bounds")
    } else {
        format!("{} of {checked} pairs outside bounds, e.g. {}", violations.len(), violations.join("; "))
    };
    outcome(violations.is_empty(), detail)
}

fn classical_limit() -> Outcome {
    let grid = RadialGrid::uniform(1000, 0.99).unwrap();
    let distances: Vec<f64> = [1, 10, 100, 1000]
        .iter()
        .map(|&n| quantum::compare_with_classical(n, &grid).unwrap().report.l1_distance)
        .collect();
    let pass = distances.windows(2).all(|w| w[1] < w[0]);
    outcome(pass, format!("L1 distances {distances:.3?}"))
}

fn boundary_contrast() -> Outcome {
    let grid = RadialGrid::new(vec![0.5, 0.999]).unwrap();
    let conventional = quantum::conventional_radial_density(1, 0, &grid).unwrap().values()[1];
    let total = TotalDensity::new(1).unwrap().at(0.999).unwrap();
    outcome(
        conventional < 1e-4 && total > 1.0,
        format!("conventional {conventional:.2e} (< 1e-4), total {total:.4} (> 1)"),
    )
}

/// `j_l(x)` from the first 60 terms of its power series.
fn j_series(l: u32, x: f64) -> f64 {
    let mut term = x.powi(l as i32) / (1..=l).map(|i| f64::from(2 * i + 1)).product::<f64>();
    let mut sum = term;
    for k in 0..59 {
        let k = f64::from(k);
        term *= -0.5 * x * x / ((k + 1.0) * (2.0 * f64::from(l) + 2.0 * k + 3.0));
        sum += term;
    }
    sum
}

fn special_functions() -> Outcome {
    let mut series = 0.0f64;
    for l in 0..=10 {
        for i in 1..=40 {
            let x = f64::from(i) * 0.05;
            let oracle = j_series(l, x);
            series = series.max(rel(specfun::sph_bessel_j(l, x).unwrap(), oracle));
        }
    }

    // x² (j_l n_{l-1} - j_{l-1} n_l) = 1
    let mut wronskian = 0.0f64;
    for x in [0.5, 1.0, 2.0, 5.0, 10.0, 50.0] {
        let j = specfun::sph_bessel_j_all(specfun::BesselOrderRange::new(50, x).unwrap());
        let n = specfun::sph_bessel_n_all(50, x).unwrap();
        for l in 1..=50 {
            let w = x * x * (j[l] * n[l - 1] - j[l - 1] * n[l]);
            wronskian = wronskian.max((w - 1.0).abs());
        }
    }

    let zeros = (1..=50)
        .map(|k| (specfun::sph_bessel_zero(0, k).unwrap() - f64::from(k) * PI).abs())
        .fold(0.0, f64::max);

    // Gram matrix by Gauss-Legendre in cos θ and the trapezoid rule in φ,
    // both exact for the degrees involved
    let rule = GaussLegendre::new(20);
    let phis: Vec<f64> = (0..24).map(|i| 2.0 * PI * f64::from(i) / 24.0).collect();
    let labels: Vec<(u32, i32)> = (0..=4u32).flat_map(|l| (-(l as i32)..=l as i32).map(move |m| (l, m))).collect();
    let mut samples: Vec<Vec<Complex64>> = vec![Vec::new(); labels.len()];
    let mut weights = Vec::new();
    for (&u, &wu) in rule.nodes().iter().zip(rule.weights()) {
        for &phi in &phis {
            let point = AngularPoint::new(u.acos(), phi).unwrap();
            weights.push(wu * 2.0 * PI / phis.len() as f64);
            for (s, &(l, m)) in samples.iter_mut().zip(&labels) {
                s.push(specfun::sph_harmonic(l, m, point).unwrap());
            }
        }
    }
    let mut gram = 0.0f64;
    for (a, ya) in samples.iter().enumerate() {
        for (b, yb) in samples.iter().enumerate() {
            let inner: Complex64 = ya.iter().zip(yb).zip(&weights).map(|((p, q), w)| p.conj() * q * w).sum();
            let target = if a == b { 1.0 } else { 0.0 };
            gram = gram.max((inner - target).norm());
        }
    }

    outcome(
        series < 1e-12 && wronskian < 1e-10 && zeros < 1e-12 && gram < 1e-10,
        format!("series {series:.1e}, Wronskian {wronskian:.1e}, zeros {zeros:.1e}, Gram {gram:.1e}"),
    )
}

fn reproducibility() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str| {
        let out = dir.path().join(format!("mc_{threads}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_sphwell"))
            .args(["--threads", threads, "classical", "mc", "--mode", "paper", "--samples", "3000000", "--bins", "100"])
            .args(["--seed", "7", "--r-max", "0.99", "--out"])
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out).unwrap()
    };
    let one = run("1");
    let four = run("4");
    outcome(one == four, format!("{} bytes, threads 1 vs 4 identical: {}", one.len(), one == four))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("level-1 structure", level_one_structure),
        ("normalization constants", normalization_constants),
        ("l = 0 mean density is 1", l0_identity),
        ("classical normalization", classical_normalization),
        ("Monte Carlo oracle", monte_carlo_oracle),
        ("per-sigma normalization", per_sigma_normalization),
        ("centrifugal sandwich", centrifugal_sandwich),
        ("convergence to classical limit", classical_limit),
        ("boundary contrast", boundary_contrast),
        ("special functions", special_functions),
        ("reproducibility across thread counts", reproducibility),
    ];
    let mut failed = Vec::new();
    println!();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!("{status} {:>2} {name}: {} [{:.2?}]", i + 1, result.detail, start.elapsed());
        if !result.pass {
            failed.push(format!("{} {name}", i + 1));
        }
    }
    assert!(failed.is_empty(), "failed criteria: {}", failed.join(", "));
}
