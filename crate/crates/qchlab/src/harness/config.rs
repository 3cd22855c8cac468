//! Run configuration: JSON with the family, profile fields, sampling box,
//! seed, tolerance tiers, and suite selection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Box4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Thm1,
    Thm2,
    Thm3,
    Custom,
}

impl FamilyKind {
    pub fn tag(self) -> Option<crate::families::FamilyTag> {
        match self {
            FamilyKind::Thm1 => Some(crate::families::FamilyTag::Thm1),
            FamilyKind::Thm2 => Some(crate::families::FamilyTag::Thm2),
            FamilyKind::Thm3 => Some(crate::families::FamilyTag::Thm3),
            FamilyKind::Custom => None,
        }
    }
}

/// How the profile H is supplied: a closed-form expression, a saved grid of
/// ln H node values, or a request to solve the family's profile equation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum HSpec {
    #[serde(rename = "expr")]
    Expr(String),
    #[serde(rename = "grid_path")]
    GridPath(String),
    #[serde(rename = "solve")]
    Solve(SolveConfig),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveConfig {
    #[serde(default = "default_grid_n")]
    pub nx: usize,
    #[serde(default = "default_grid_n")]
    pub ny: usize,
    /// Dirichlet data for u = ln H as an expression in x, y.
    #[serde(default = "default_boundary")]
    pub boundary: String,
    #[serde(default = "default_solver_tol")]
    pub tol: f64,
    #[serde(default = "default_solver_iters")]
    pub max_iter: usize,
}

fn default_grid_n() -> usize {
    129
}
fn default_boundary() -> String {
    "0".to_string()
}
fn default_solver_tol() -> f64 {
    1e-10
}
fn default_solver_iters() -> usize {
    50
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            nx: default_grid_n(),
            ny: default_grid_n(),
            boundary: default_boundary(),
            tol: default_solver_tol(),
            max_iter: default_solver_iters(),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Tolerances {
    #[serde(default = "default_closed_tol")]
    pub closed_form: f64,
    #[serde(default = "default_grid_tol")]
    pub grid: f64,
}

fn default_closed_tol() -> f64 {
    1e-8
}
fn default_grid_tol() -> f64 {
    1e-4
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            closed_form: default_closed_tol(),
            grid: default_grid_tol(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Config {
    pub family: FamilyKind,
    /// Closed-form expression for h (both profiles default to the family's
    /// built-in pair when h and H are omitted together).
    #[serde(default)]
    pub h: Option<String>,
    #[serde(rename = "H", default)]
    pub big_h: Option<HSpec>,
    #[serde(rename = "box", default)]
    pub box4: Option<Box4>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Subset of suite names to run; defaults to the family's full set.
    #[serde(default)]
    pub suites: Option<Vec<String>>,
    #[serde(default)]
    pub report_path: Option<String>,
    /// Custom family: 4x4 matrix of coefficient expressions, row i giving
    /// theta_i on (dx, dy, dz, dt).
    #[serde(default)]
    pub coframe: Option<Vec<Vec<String>>>,
    /// Custom family: number of seeded random coframes when none is given.
    #[serde(default = "default_random_coframes")]
    pub random_coframes: usize,
}

fn default_samples() -> usize {
    100
}
fn default_seed() -> u64 {
    42
}
fn default_random_coframes() -> usize {
    30
}

impl Config {
    pub fn family_defaults(family: FamilyKind) -> Config {
        Config {
            family,
            h: None,
            big_h: None,
            box4: None,
            samples: default_samples(),
            seed: default_seed(),
            tolerances: Tolerances::default(),
            suites: None,
            report_path: None,
            coframe: None,
            random_coframes: default_random_coframes(),
        }
    }

    pub fn from_json(src: &str) -> Result<Config> {
        serde_json::from_str(src).map_err(|e| Error::Config(format!("bad config JSON: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<Config> {
        let src = std::fs::read_to_string(path)?;
        Config::from_json(&src)
    }

    pub fn validate(&self) -> Result<()> {
        if self.family == FamilyKind::Custom {
            if self.big_h.is_some() || self.h.is_some() {
                return Err(Error::Config(
                    "custom family takes a coframe, not profile fields".to_string(),
                ));
            }
        } else if self.h.is_some() != self.big_h.is_some() {
            return Err(Error::Config(
                "h and H must be supplied together (or both omitted for the family default)"
                    .to_string(),
            ));
        }
        if let Some(b) = &self.box4 {
            for r in b.ranges() {
                if !(r[0].is_finite() && r[1].is_finite() && r[0] < r[1]) {
                    return Err(Error::Config(format!("bad box range [{}, {}]", r[0], r[1])));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let src = r#"{
            "family": "thm3",
            "h": "1",
            "H": { "solve": { "nx": 65, "boundary": "-2.5" } },
            "box": { "x": [-0.9, 0.9], "y": [-0.9, 0.9], "z": [-3, -0.5], "t": [0, 6.28] },
            "samples": 50,
            "seed": 9,
            "tolerances": { "closed_form": 1e-9, "grid": 2e-4 },
            "suites": ["kaehler-opposite"],
            "report_path": "out.json"
        }"#;
        let cfg = Config::from_json(src).unwrap();
        assert_eq!(cfg.family, FamilyKind::Thm3);
        assert_eq!(cfg.samples, 50);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.tolerances.grid, 2e-4);
        match &cfg.big_h {
            Some(HSpec::Solve(sc)) => {
                assert_eq!(sc.nx, 65);
                assert_eq!(sc.ny, 129); // per-field default
                assert_eq!(sc.boundary, "-2.5");
            }
            other => panic!("unexpected H spec {other:?}"),
        }
        cfg.validate().unwrap();
    }

    #[test]
    fn defaults_fill_in() {
        let cfg = Config::from_json(r#"{ "family": "thm1" }"#).unwrap();
        assert_eq!(cfg.samples, 100);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.tolerances.closed_form, 1e-8);
        assert_eq!(cfg.tolerances.grid, 1e-4);
        assert!(cfg.h.is_none() && cfg.big_h.is_none());
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_half_specified_profiles() {
        let cfg = Config::from_json(r#"{ "family": "thm1", "h": "1" }"#).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn rejects_bad_box() {
        let cfg = Config::from_json(
            r#"{ "family": "thm1", "box": { "x": [1, -1], "y": [0, 1], "z": [-2, -1], "t": [0, 1] } }"#,
        )
        .unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn rejects_profiles_on_custom() {
        let cfg =
            Config::from_json(r#"{ "family": "custom", "h": "1", "H": { "expr": "1" } }"#).unwrap();
        assert!(cfg.validate().is_err());
    }
}
