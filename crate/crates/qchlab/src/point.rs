//! Chart points and coordinate axes.

use serde::{Deserialize, Serialize};

/// Coordinate axes of the 4-dimensional chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X = 0,
    Y = 1,
    Z = 2,
    T = 3,
}

pub const AXES: [Axis; 4] = [Axis::X, Axis::Y, Axis::Z, Axis::T];

impl Axis {
    #[inline]
    pub fn idx(self) -> usize {
        self as usize
    }

    pub fn from_idx(i: usize) -> Axis {
        AXES[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
            Axis::T => "t",
        }
    }
}

/// A point of the chart with coordinates (x, y, z, t).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point4 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub t: f64,
}

impl Point4 {
    pub fn new(x: f64, y: f64, z: f64, t: f64) -> Self {
        Point4 { x, y, z, t }
    }

    #[inline]
    pub fn coords(&self) -> [f64; 4] {
        [self.x, self.y, self.z, self.t]
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|c| c.is_finite())
    }
}

impl std::fmt::Display for Point4 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {}, {})", self.x, self.y, self.z, self.t)
    }
}

/// An axis-aligned box in the chart, the sampling domain of a family.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Box4 {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub z: [f64; 2],
    pub t: [f64; 2],
}

impl Box4 {
    pub fn ranges(&self) -> [[f64; 2]; 4] {
        [self.x, self.y, self.z, self.t]
    }

    pub fn contains(&self, p: Point4) -> bool {
        let r = self.ranges();
        p.coords()
            .iter()
            .zip(r.iter())
            .all(|(c, [lo, hi])| *c >= *lo && *c <= *hi)
    }

    pub fn center(&self) -> Point4 {
        let m = |r: [f64; 2]| 0.5 * (r[0] + r[1]);
        Point4::new(m(self.x), m(self.y), m(self.z), m(self.t))
    }
}
