//! `lumpfem` command-line tool.
//!
//! Exit codes: 0 on success, 1 when a run fails or a verification check does
//! not pass, 2 on usage or configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use lumpfem::io::{parse_config, run_config, write_csv_report, RunConfig, DEMO_PRESET_H};
use lumpfem::verification::{convergence_study, run_property_suite, standing_mode_solution, MeshFamily, StudyConfig};
use lumpfem::Error;

#[derive(Parser)]
#[command(
    name = "lumpfem",
    version,
    about = "Mass-lumped edge elements for the 2D curl-curl wave equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a run described by a configuration file.
    Run {
        config: PathBuf,
        /// Overrides `[output] directory`.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Standing-mode convergence study on unit-square mesh families.
    Convergence {
        /// Reads the `[study]` section of a configuration file.
        #[arg(long, conflicts_with_all = ["family", "levels", "n_coarse", "t_end", "cfl_safety"])]
        config: Option<PathBuf>,
        /// Mesh family; all three when omitted.
        #[arg(long, value_enum)]
        family: Option<Family>,
        #[arg(long)]
        levels: Option<usize>,
        /// Cells per side on the coarsest level.
        #[arg(long)]
        n_coarse: Option<usize>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        cfl_safety: Option<f64>,
        /// CSV report path; `{family}` is replaced by the family name.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Smallest acceptable rate on the finest pair of levels.
        #[arg(long, default_value_t = 0.9)]
        min_rate: f64,
    },
    /// Quick property checks: diagonality, quadrature exactness, Yee equivalence, energy.
    Verify,
    /// Scattering experiment with snapshots at t = 2.3 and t = 5.
    Demo {
        #[arg(long, value_enum, default_value_t = Preset::Scattering)]
        preset: Preset,
        #[arg(long, default_value_t = 5.0)]
        t_end: f64,
        /// Target edge length.
        #[arg(long, default_value_t = DEMO_PRESET_H)]
        h: f64,
        #[arg(long, default_value = "output")]
        output_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Rect,
    Tri,
    Hybrid,
}

impl From<Family> for MeshFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Rect => MeshFamily::Rect,
            Family::Tri => MeshFamily::Tri,
            Family::Hybrid => MeshFamily::Hybrid,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Scattering,
}

enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::TimeStep(_) => Failure::Usage(e.to_string()),
            other => Failure::Failed(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, output_dir } => parse_config(&config).map_err(Failure::from).and_then(|mut c| {
            if let Some(dir) = output_dir {
                c.output.directory = dir;
            }
            simulate(&c)
        }),
        Command::Convergence {
            config,
            family,
            levels,
            n_coarse,
            t_end,
            cfl_safety,
            csv,
            min_rate,
        } => convergence(config, family, levels, n_coarse, t_end, cfl_safety, csv, min_rate),
        Command::Verify => verify(),
        Command::Demo {
            preset: Preset::Scattering,
            t_end,
            h,
            output_dir,
        } => {
            let mut c = RunConfig::scattering_preset(h, t_end);
            c.output.directory = output_dir;
            simulate(&c)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn simulate(config: &RunConfig) -> Result<(), Failure> {
    let start = Instant::now();
    let out = run_config(config)?;
    let s = &out.summary;
    println!(
        "mesh: {} triangles, {} rectangles, h_max = {:.4e}, h_max/h_min = {:.3}",
        out.mesh.n_triangles,
        out.mesh.n_rectangles,
        out.mesh.h_max,
        out.mesh.quasi_uniformity()
    );
    if let Some(ev) = s.eigenvalue {
        println!("lambda_max ~ {:.6e} ({} power iterations)", ev.value, ev.iterations);
    }
    println!(
        "{} dofs, {} steps of dt = {:.6e} to t = {:.6}, max |coeff| = {:.4e}",
        s.n_dofs, s.steps, s.dt, s.t_final, s.max_abs_coeff
    );
    for path in &out.snapshots {
        println!("wrote {}", path.display());
    }
    println!("done in {:.2} s", start.elapsed().as_secs_f64());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn convergence(
    config: Option<PathBuf>,
    family: Option<Family>,
    levels: Option<usize>,
    n_coarse: Option<usize>,
    t_end: Option<f64>,
    cfl_safety: Option<f64>,
    csv: Option<PathBuf>,
    min_rate: f64,
) -> Result<(), Failure> {
    let (studies, csv) = match config {
        Some(path) => {
            let c = parse_config(&path)?;
            let s = c
                .study
                .ok_or_else(|| Failure::Usage(format!("{}: no [study] section", path.display())))?;
            (vec![s.study], csv.or(s.csv))
        }
        None => {
            let families: Vec<MeshFamily> = match family {
                Some(f) => vec![f.into()],
                None => MeshFamily::ALL.to_vec(),
            };
            let studies = families
                .into_iter()
                .map(|f| {
                    let mut s = StudyConfig::standard(f);
                    s.levels = levels.unwrap_or(s.levels);
                    s.n_coarse = n_coarse.unwrap_or(s.n_coarse);
                    s.t_end = t_end.unwrap_or(s.t_end);
                    s.cfl_safety = cfl_safety.unwrap_or(s.cfl_safety);
                    s
                })
                .collect();
            (studies, csv)
        }
    };
    let exact = standing_mode_solution();
    let mut all_passed = true;
    for study in studies {
        let report = convergence_study(&exact, &study).map_err(|e| match e {
            Error::Verification(m) => Failure::Usage(m),
            other => other.into(),
        })?;
        println!("family {} ({}, T = {})", report.family, report.solution, report.t_end);
        println!(
            "{:>5} {:>12} {:>12} {:>12} {:>8} {:>8}",
            "level", "h", "err_dtE", "err_curl", "rate", "rate"
        );
        let rates = report.rates();
        for (i, l) in report.levels.iter().enumerate() {
            let (a, b) = match i.checked_sub(1) {
                Some(j) => (format!("{:.3}", rates[j].0), format!("{:.3}", rates[j].1)),
                None => (String::new(), String::new()),
            };
            println!(
                "{:>5} {:>12.4e} {:>12.4e} {:>12.4e} {a:>8} {b:>8}",
                l.level, l.h, l.err_dt_e, l.err_curl
            );
        }
        let (rd, rc) = report.finest_rates().expect("at least three levels");
        let passed = rd >= min_rate && rc >= min_rate && !report.non_monotone;
        println!(
            "{} finest rates {rd:.3} / {rc:.3} (minimum {min_rate})",
            if passed { "PASS" } else { "FAIL" }
        );
        all_passed &= passed;
        if let Some(path) = &csv {
            let path = PathBuf::from(path.to_string_lossy().replace("{family}", report.family.name()));
            write_csv_report(&report, &path)?;
            println!("wrote {}", path.display());
        }
    }
    if all_passed {
        Ok(())
    } else {
        Err(Failure::Failed("convergence rates below the minimum".into()))
    }
}

fn verify() -> Result<(), Failure> {
    let outcomes = run_property_suite();
    for o in &outcomes {
        println!(
            "{} {:<28} {:>7.2} s  {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.seconds,
            o.detail
        );
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed == 0 {
        println!("all {} checks passed", outcomes.len());
        Ok(())
    } else {
        Err(Failure::Failed(format!("{failed} of {} checks failed", outcomes.len())))
    }
}
