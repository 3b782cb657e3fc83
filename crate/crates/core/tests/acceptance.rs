//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
//! a non-zero status if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use lumpfem::assembly::{assemble_quadrature_mass, build_dof_map};
use lumpfem::fem_local::{check_quadrature_exactness, LumpingQuadrature, ReferenceShape};
use lumpfem::io::{run_config, RunConfig, DEMO_PRESET_H};
use lumpfem::mesh::build_scattering_demo_mesh;
use lumpfem::verification::{
    convergence_study, energy_drift, instability_growth, interface_reflection_test, interpolation_study, observed_rate,
    quadrature_error_study, random_element_diagonality, standing_mode_solution, yee_equivalence_check, MeshFamily,
    StudyConfig,
};
use lumpfem::{Point, Vec2};

const DIAGONAL_TOL: f64 = 1e-12;
const EXACTNESS_TOL: f64 = 1e-13;
const MIN_RATE: f64 = 0.9;
const YEE_TOL: f64 = 1e-12;
const DRIFT_TOL: f64 = 1e-10;
const MIN_GROWTH: f64 = 1e3;
const ENERGY_STEPS: usize = 5000;

struct Outcome {
    passed: bool,
    detail: String,
}

type Check = fn() -> lumpfem::Result<Outcome>;

fn outcome(passed: bool, detail: String) -> lumpfem::Result<Outcome> {
    Ok(Outcome { passed, detail })
}

fn diagonal_mass() -> lumpfem::Result<Outcome> {
    let (off, min_diag) = random_element_diagonality(1000, 2024)?;
    let mesh = build_scattering_demo_mesh(DEMO_PRESET_H, 38)?;
    let dofmap = build_dof_map(&mesh, &[]);
    let full = assemble_quadrature_mass(&mesh, &dofmap)?;
    let diag = full.diagonal();
    let max = diag.iter().fold(0.0f64, |a, &b| a.max(b));
    let demo_off = full.max_abs_off_diagonal() / max;
    let demo_min = diag.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    outcome(
        off <= DIAGONAL_TOL && min_diag > 0.0 && demo_off <= DIAGONAL_TOL && demo_min > 0.0,
        format!(
            "random elements off/diag {off:.2e}; demo mesh ({} dofs) off/diag {demo_off:.2e}, min diag {demo_min:.2e}",
            dofmap.n_dofs()
        ),
    )
}

fn quadrature_exactness() -> lumpfem::Result<Outcome> {
    let tri = (0..=2)
        .map(|d| check_quadrature_exactness(ReferenceShape::UnitTriangle, d))
        .fold(0.0, f64::max);
    let square = (0..=1)
        .map(|d| check_quadrature_exactness(ReferenceShape::UnitSquare, d))
        .fold(0.0, f64::max);
    // (y^2 e_x, e_x) on the unit square: the rule gives 1/2, the integral is 1/3
    let rule = LumpingQuadrature::for_rectangle(0.0, 1.0, 0.0, 1.0);
    let approx = rule.inner(|p: Point| Vec2::new(p.y * p.y, 0.0), |_| Vec2::new(1.0, 0.0));
    let counter = approx - 1.0 / 3.0;
    outcome(
        tri <= EXACTNESS_TOL && square <= EXACTNESS_TOL && (counter - 1.0 / 6.0).abs() <= EXACTNESS_TOL,
        format!("triangle degree<=2 error {tri:.1e}, square degree<=1 error {square:.1e}, y^2 error {counter:.15}"),
    )
}

fn convergence_rates() -> lumpfem::Result<Outcome> {
    let exact = standing_mode_solution();
    let mut passed = true;
    let mut parts = Vec::new();
    for family in MeshFamily::ALL {
        let report = convergence_study(&exact, &StudyConfig::standard(family))?;
        let (rd, rc) = report.finest_rates().expect("four levels");
        passed &= rd >= MIN_RATE && rc >= MIN_RATE;
        parts.push(format!("{family} dtE {rd:.3} curl {rc:.3}"));
    }
    outcome(passed, format!("finest-pair rates: {}", parts.join(", ")))
}

fn yee_equivalence() -> lumpfem::Result<Outcome> {
    let r = yee_equivalence_check(8, 8, 1.0 / 8.0, 50)?;
    outcome(
        r.max_relative_deviation <= YEE_TOL && !r.is_vacuous(),
        format!(
            "{} interior edges, {} vectors, max relative deviation {:.2e}",
            r.interior_edges, r.samples, r.max_relative_deviation
        ),
    )
}

fn energy_conservation() -> lumpfem::Result<Outcome> {
    let drift = energy_drift(MeshFamily::Hybrid, 16, ENERGY_STEPS, 0.9)?;
    let growth = instability_growth(MeshFamily::Hybrid, 16, ENERGY_STEPS, 1.2, 1e6)?;
    outcome(
        drift <= DRIFT_TOL && growth > MIN_GROWTH,
        format!("drift {drift:.2e} over {ENERGY_STEPS} steps at safety 0.9; growth {growth:.2e} at safety 1.2"),
    )
}

fn min_rate(errors: &[(f64, f64)]) -> f64 {
    errors
        .windows(2)
        .map(|w| observed_rate(w[0].1, w[1].1, w[0].0, w[1].0))
        .fold(f64::INFINITY, f64::min)
}

fn interpolation_rates() -> lumpfem::Result<Outcome> {
    let exact = standing_mode_solution();
    let mut passed = true;
    let mut parts = Vec::new();
    for family in MeshFamily::ALL {
        let levels = interpolation_study(&exact, family, 8, 4, 0.0)?;
        let col = |f: fn(&lumpfem::verification::InterpolationLevel) -> f64| {
            min_rate(&levels.iter().map(|l| (l.h, f(l))).collect::<Vec<_>>())
        };
        let (r, rc, r0) = (col(|l| l.err_pi_h), col(|l| l.err_curl_pi_h), col(|l| l.err_pi0));
        passed &= r >= MIN_RATE && rc >= MIN_RATE && r0 >= MIN_RATE;
        parts.push(format!("{family} {r:.3}/{rc:.3}/{r0:.3}"));
    }
    outcome(passed, format!("min rates L2/curl/mean-value: {}", parts.join(", ")))
}

fn quadrature_error_rate() -> lumpfem::Result<Outcome> {
    let exact = standing_mode_solution();
    let mut passed = true;
    let mut parts = Vec::new();
    for family in MeshFamily::ALL {
        let levels = quadrature_error_study(&exact, family, 8, 4, 8, 99)?;
        let r = min_rate(&levels.iter().map(|l| (l.h, l.sigma)).collect::<Vec<_>>());
        passed &= r >= MIN_RATE;
        parts.push(format!("{family} {r:.3}"));
    }
    outcome(passed, format!("min rate of mean |sigma_h|: {}", parts.join(", ")))
}

fn scattering_demo() -> lumpfem::Result<Outcome> {
    let dir = std::env::temp_dir().join(format!("lumpfem-acceptance-{}", std::process::id()));
    let mut cfg = RunConfig::scattering_preset(DEMO_PRESET_H, 5.0);
    cfg.output.directory = dir.clone();
    let out = run_config(&cfg);
    let _ = std::fs::remove_dir_all(&dir);
    let out = out?;
    let coarse = interface_reflection_test(0.125)?;
    let fine = interface_reflection_test(0.0625)?;
    let finite = out.summary.max_abs_coeff.is_finite();
    outcome(
        finite && out.snapshots.len() == 2 && (out.summary.t_final - 5.0).abs() < 1e-9 && fine.ratio < coarse.ratio,
        format!(
            "{} steps to t = {:.3}, {} snapshots, max |coeff| {:.3e}; reflection ratio {:.3e} (h=1/8) -> {:.3e} (h=1/16)",
            out.summary.steps,
            out.summary.t_final,
            out.snapshots.len(),
            out.summary.max_abs_coeff,
            coarse.ratio,
            fine.ratio
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, f64, Check); 8] = [
        ("1 diagonal mass matrix", 10.0, diagonal_mass),
        ("2 quadrature exactness", 1.0, quadrature_exactness),
        ("3 convergence rates", 300.0, convergence_rates),
        ("4 Yee equivalence", 5.0, yee_equivalence),
        ("5 energy conservation", 30.0, energy_conservation),
        ("6 interpolation rates", 30.0, interpolation_rates),
        ("7 quadrature-error rate", 30.0, quadrature_error_rate),
        ("8 scattering demo", 300.0, scattering_demo),
    ];
    let mut failures = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let seconds = start.elapsed().as_secs_f64();
        let (passed, detail) = match result {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_budget = seconds <= budget;
        let ok = passed && in_budget;
        failures += usize::from(!ok);
        println!(
            "{} criterion {name}: {detail} [{seconds:.2} s, budget {budget} s{}]",
            if ok { "PASS" } else { "FAIL" },
            if in_budget { "" } else { ", over budget" }
        );
    }
    if failures == 0 {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} of 8 criteria failed");
        ExitCode::FAILURE
    }
}
