//! Crate-wide error type.

use crate::point::Point4;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("evaluation error at {point}: {what} in `{expr}`")]
    Eval {
        point: Point4,
        what: String,
        expr: String,
    },

    #[error("derivative order {0} exceeds the supported maximum of 2")]
    OrderTooHigh(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("degree overflow: wedge of degrees {0} and {1} exceeds the chart dimension")]
    DegreeOverflow(usize, usize),

    #[error("form of degree {have} where degree {want} is required")]
    BadDegree { have: usize, want: usize },

    #[error("singular coframe at {point}: {what}")]
    Singular { point: Point4, what: String },

    #[error("degenerate structure at {point}: |nabla J| = {norm:e} is below threshold (point lies in the nullity set)")]
    Degenerate { point: Point4, norm: f64 },

    #[error("constraint violation: {what}; worst point {point} with residual {residual:e}")]
    Constraint {
        what: String,
        point: Point4,
        residual: f64,
    },

    #[error(
        "solver failed to converge after {iterations} iterations (last residual {last:e}): {what}"
    )]
    NonConvergence {
        what: String,
        iterations: usize,
        last: f64,
        history: Vec<f64>,
    },

    #[error("solution blow-up detected: |u| reached {value:e}, cap {cap:e}")]
    BlowUp { value: f64, cap: f64 },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("sampling rejection rate exceeded 99% ({rejected} of {tried} rejected)")]
    SamplingExhausted { rejected: usize, tried: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("grid file error: {0}")]
    GridFile(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
