//! Suite orchestration: build the configured geometry (solving the profile
//! equation when asked), sample the chart deterministically, run the
//! selected verification suites, and assemble the structured report.

pub mod config;
pub mod report;
pub mod sample;
pub mod suites;

use std::collections::BTreeMap;
use std::rc::Rc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::families::{build, default_spec, FamilySpec, FamilyTag};
use crate::field::Field;
use crate::forms::KForm;
use crate::frame::{Coframe, Locus};
use crate::parse::parse_field;
use crate::point::Point4;
use crate::solver::{solve, ProfileBvp, SolveOptions};

use config::{Config, FamilyKind, HSpec};
use report::{Report, SuiteReport, Verdict};
use suites::{
    custom_suites, default_suite_names, point_data, random_coframe, run_custom_suite,
    run_family_suite, CustomCtx, FamilyCtx, PointData,
};

/// Whether the geometry's H came from a grid (loose tolerance tier).
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    GridBacked,
}

/// Build the family spec from the config, solving or loading H as needed.
pub fn spec_from_config(cfg: &Config, tag: FamilyTag) -> Result<(FamilySpec, Provenance)> {
    let (mut spec, prov) = match (&cfg.h, &cfg.big_h) {
        (None, None) => (default_spec(tag), Provenance::ClosedForm),
        (Some(h_expr), Some(hspec)) => {
            let h = parse_field(h_expr)?;
            let (big_h, ln_big_h, prov) = resolve_h(cfg, tag, &h, hspec)?;
            (FamilySpec::new(tag, h, big_h, ln_big_h), prov)
        }
        _ => {
            return Err(Error::Config(
                "h and H must be supplied together (or both omitted)".to_string(),
            ))
        }
    };
    if let Some(b) = cfg.box4 {
        spec.box4 = b;
    }
    Ok((spec, prov))
}

fn resolve_h(
    cfg: &Config,
    tag: FamilyTag,
    h: &Field,
    hspec: &HSpec,
) -> Result<(Field, Field, Provenance)> {
    match hspec {
        HSpec::Expr(src) => {
            let big_h = parse_field(src)?;
            let ln_big_h = big_h.ln();
            Ok((big_h, ln_big_h, Provenance::ClosedForm))
        }
        HSpec::GridPath(path) => {
            let grid = crate::solver::Grid2D::load(std::path::Path::new(path))?;
            let spl = Rc::new(grid.spline()?);
            let u = Field::from_spline(spl);
            Ok((u.exp(), u, Provenance::GridBacked))
        }
        HSpec::Solve(sc) => {
            let (c1, c2) = tag.pde_coefficients();
            let boundary_field = parse_field(&sc.boundary)?;
            let boundary = move |x: f64, y: f64| {
                boundary_field
                    .value(Point4::new(x, y, 0.0, 0.0))
                    .unwrap_or(f64::NAN)
            };
            let b = cfg.box4.unwrap_or_else(|| tag.default_box());
            // solve on a rectangle inflated past the sampling box so every
            // sampled point sits several cells away from the Dirichlet rim,
            // where the interpolated solution obeys the equation cleanly
            let infl = |r: [f64; 2]| {
                let pad = 0.1 * (r[1] - r[0]);
                [r[0] - pad, r[1] + pad]
            };
            let (rx, ry) = (infl(b.x), infl(b.y));
            let bvp = ProfileBvp {
                c1,
                c2,
                h,
                boundary: &boundary,
                initial: None,
            };
            let opts = SolveOptions {
                tol: sc.tol,
                max_iter: sc.max_iter,
                ..SolveOptions::default()
            };
            let (grid, _rep) = solve(&bvp, rx[0], rx[1], ry[0], ry[1], sc.nx, sc.ny, opts)?;
            let spl = Rc::new(grid.spline()?);
            let u = Field::from_spline(spl);
            Ok((u.exp(), u, Provenance::GridBacked))
        }
    }
}

fn error_suite(name: &str, err: &Error) -> SuiteReport {
    SuiteReport {
        name: name.to_string(),
        statement: String::new(),
        verdict: Verdict::Fail,
        max_residual: f64::NAN,
        samples: 0,
        checks: vec![],
        certificate: None,
        error: Some(format!("{err}")),
    }
}

fn run_family(cfg: &Config, tag: FamilyTag) -> Result<Report> {
    let (spec, provenance) = spec_from_config(cfg, tag)?;
    let tier = match provenance {
        Provenance::ClosedForm => cfg.tolerances.closed_form,
        Provenance::GridBacked => cfg.tolerances.grid,
    };
    let geo = build(&spec, tier)?;
    let points = sample::sample_points(spec.box4, cfg.seed, cfg.samples, &geo.coframe.locus)?;

    let mut data: Vec<PointData> = Vec::with_capacity(points.len());
    let mut pipeline_errors: Vec<String> = Vec::new();
    for p in &points {
        match point_data(&geo.coframe, *p) {
            Ok(d) => data.push(d),
            Err(e) => pipeline_errors.push(format!("{e}")),
        }
    }

    let qch_tol = match provenance {
        Provenance::ClosedForm => 1e-6,
        Provenance::GridBacked => cfg.tolerances.grid,
    };
    let ctx = FamilyCtx {
        geo: &geo,
        data: &data,
        tier,
        qch_tol,
        seed: cfg.seed,
    };

    let selected: Vec<String> = match &cfg.suites {
        Some(list) => list.clone(),
        None => default_suite_names(tag)
            .iter()
            .map(|s| s.to_string())
            .collect(),
    };

    let mut suites = Vec::new();
    let mut timing = BTreeMap::new();
    if !pipeline_errors.is_empty() {
        let mut s = error_suite(
            "pipeline",
            &Error::Config(format!(
                "{} of {} sample points failed evaluation; first: {}",
                pipeline_errors.len(),
                points.len(),
                pipeline_errors[0]
            )),
        );
        s.statement = "every sampled point admits the full frame pipeline".to_string();
        suites.push(s);
    }
    for name in &selected {
        let start = Instant::now();
        let rep = match run_family_suite(name, &ctx) {
            None => {
                return Err(Error::Config(format!(
                    "unknown suite `{name}`; family suites: {:?}",
                    default_suite_names(tag)
                )))
            }
            Some(Ok(rep)) => rep,
            Some(Err(e)) => error_suite(name, &e),
        };
        timing.insert(name.clone(), start.elapsed().as_millis() as u64);
        suites.push(rep);
    }

    let mut report = Report {
        family: tag.name().to_string(),
        seed: cfg.seed,
        samples: cfg.samples,
        closed_form_tolerance: cfg.tolerances.closed_form,
        grid_tolerance: cfg.tolerances.grid,
        suites,
        global_verdict: Verdict::Pass,
        timing_ms: timing,
    };
    report.compute_global();
    Ok(report)
}

fn run_custom(cfg: &Config) -> Result<Report> {
    let box4 = cfg.box4.unwrap_or(crate::point::Box4 {
        x: [-1.0, 1.0],
        y: [-1.0, 1.0],
        z: [-1.0, 1.0],
        t: [-1.0, 1.0],
    });
    let coframes: Vec<Coframe> = match &cfg.coframe {
        Some(rows) => {
            if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
                return Err(Error::Config(
                    "coframe must be a 4x4 expression matrix".to_string(),
                ));
            }
            let mut thetas = Vec::new();
            for row in rows {
                let c: Vec<Field> = row.iter().map(|s| parse_field(s)).collect::<Result<_>>()?;
                thetas.push(KForm::one_form([
                    c[0].clone(),
                    c[1].clone(),
                    c[2].clone(),
                    c[3].clone(),
                ]));
            }
            vec![Coframe::new(
                [
                    thetas[0].clone(),
                    thetas[1].clone(),
                    thetas[2].clone(),
                    thetas[3].clone(),
                ],
                1.0,
                Locus::default(),
            )?]
        }
        None => {
            let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed ^ 0xc0f2_a3e1_9d47_0b6c);
            (0..cfg.random_coframes.max(1))
                .map(|_| random_coframe(&mut rng))
                .collect()
        }
    };
    let per = (cfg.samples / coframes.len()).max(1);
    let points: Vec<Vec<Point4>> = coframes
        .iter()
        .enumerate()
        .map(|(i, _)| {
            sample::sample_points(
                box4,
                cfg.seed.wrapping_add(i as u64),
                per,
                &Locus::default(),
            )
        })
        .collect::<Result<_>>()?;

    let ctx = CustomCtx {
        coframes,
        points,
        closed_tol: cfg.tolerances.closed_form,
        seed: cfg.seed,
    };
    let selected: Vec<String> = match &cfg.suites {
        Some(list) => list.clone(),
        None => custom_suites().iter().map(|s| s.to_string()).collect(),
    };
    let mut suites = Vec::new();
    let mut timing = BTreeMap::new();
    for name in &selected {
        let start = Instant::now();
        let rep = match run_custom_suite(name, &ctx) {
            None => {
                return Err(Error::Config(format!(
                    "unknown suite `{name}`; custom suites: {:?}",
                    custom_suites()
                )))
            }
            Some(Ok(rep)) => rep,
            Some(Err(e)) => error_suite(name, &e),
        };
        timing.insert(name.clone(), start.elapsed().as_millis() as u64);
        suites.push(rep);
    }
    let mut report = Report {
        family: "custom".to_string(),
        seed: cfg.seed,
        samples: cfg.samples,
        closed_form_tolerance: cfg.tolerances.closed_form,
        grid_tolerance: cfg.tolerances.grid,
        suites,
        global_verdict: Verdict::Pass,
        timing_ms: timing,
    };
    report.compute_global();
    Ok(report)
}

/// Execute a configuration and return the report.
pub fn run(cfg: &Config) -> Result<Report> {
    cfg.validate()?;
    match cfg.family {
        FamilyKind::Custom => run_custom(cfg),
        kind => run_family(cfg, kind.tag().expect("family kind")),
    }
}
