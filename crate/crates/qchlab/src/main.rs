//! qchlab command line: verify a configuration, solve a profile equation,
//! or dump the deterministic sample points.
//!
//! Exit codes: 0 all selected suites pass; 1 at least one failure;
//! 2 inconclusive-only deviations; 3 configuration or solver error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qchlab::error::Error;
use qchlab::families::FamilyTag;
use qchlab::harness::config::Config;
use qchlab::harness::{run, sample, spec_from_config};
use qchlab::parse::parse_field;
use qchlab::point::Point4;
use qchlab::solver::{solve, ProfileBvp, SolveOptions};

#[derive(Parser)]
#[command(name = "qchlab", version, about = "coframe geometry verification lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites for a configuration.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Write the JSON report here (overrides the config's report_path).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Comma-separated list of suites to run.
        #[arg(long, value_delimiter = ',')]
        suites: Option<Vec<String>>,
        /// Override the config's sampling seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Solve a family's profile equation for u = ln H and write the grid.
    SolveH {
        #[arg(long, value_parser = parse_family)]
        family: FamilyTag,
        /// Expression for h(x, y).
        #[arg(long, default_value = "1")]
        h: String,
        /// Nodes per axis.
        #[arg(long, default_value_t = 129)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
        /// Dirichlet data for u = ln H, an expression in x and y.
        #[arg(long, default_value = "0")]
        boundary: String,
        /// Rectangle as x0,x1,y0,y1.
        #[arg(long, value_delimiter = ',', num_args = 4, default_values_t = [-1.0, 1.0, -1.0, 1.0])]
        rect: Vec<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 50)]
        max_iter: usize,
    },
    /// Print the deterministic sample points of a configuration.
    Sample {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_family(s: &str) -> Result<FamilyTag, String> {
    match s {
        "thm1" => Ok(FamilyTag::Thm1),
        "thm2" => Ok(FamilyTag::Thm2),
        "thm3" => Ok(FamilyTag::Thm3),
        _ => Err(format!("unknown family `{s}` (thm1 | thm2 | thm3)")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(cli: Cli) -> qchlab::Result<ExitCode> {
    match cli.command {
        Command::Verify {
            config,
            report,
            suites,
            seed,
        } => {
            let mut cfg = Config::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(s) = suites {
                cfg.suites = Some(s);
            }
            let rep = run(&cfg)?;
            print!("{}", rep.render_table());
            let path = report.or_else(|| cfg.report_path.as_ref().map(PathBuf::from));
            if let Some(path) = path {
                std::fs::write(&path, rep.to_json())?;
                eprintln!("report written to {}", path.display());
            }
            Ok(ExitCode::from(rep.exit_code() as u8))
        }
        Command::SolveH {
            family,
            h,
            grid,
            out,
            boundary,
            rect,
            tol,
            max_iter,
        } => {
            let (c1, c2) = family.pde_coefficients();
            let h_field = parse_field(&h)?;
            let boundary_field = parse_field(&boundary)?;
            let bfn = move |x: f64, y: f64| {
                boundary_field
                    .value(Point4::new(x, y, 0.0, 0.0))
                    .unwrap_or(f64::NAN)
            };
            let bvp = ProfileBvp {
                c1,
                c2,
                h: &h_field,
                boundary: &bfn,
                initial: None,
            };
            let opts = SolveOptions {
                tol,
                max_iter,
                ..SolveOptions::default()
            };
            let (g, rep) = solve(&bvp, rect[0], rect[1], rect[2], rect[3], grid, grid, opts)?;
            g.save(&out)?;
            eprintln!(
                "solved {} in {} iterations, final residual {:.3e}; grid written to {}",
                family.name(),
                rep.iterations,
                rep.final_residual,
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Sample { config } => {
            let cfg = Config::load(&config)?;
            let tag = cfg
                .family
                .tag()
                .ok_or_else(|| Error::Config("sample needs a family configuration".to_string()))?;
            let (spec, _) = spec_from_config(&cfg, tag)?;
            let geo = qchlab::families::build(
                &spec,
                cfg.tolerances.grid.max(cfg.tolerances.closed_form),
            )?;
            let pts = sample::sample_points(spec.box4, cfg.seed, cfg.samples, &geo.coframe.locus)?;
            use std::io::Write;
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            for p in pts {
                // stop quietly when the reader goes away (e.g. piped to head)
                if writeln!(out, "{} {} {} {}", p.x, p.y, p.z, p.t).is_err() {
                    break;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
