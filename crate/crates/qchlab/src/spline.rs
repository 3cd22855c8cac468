//! Tensor-product quintic B-spline interpolation on a uniform rectangle.
//!
//! Grid-backed fields are exposed through this interpolant: it reproduces the
//! node values exactly, is C^4 across cells, and carries derivative error
//! O(spacing^4) for the second-order partials the geometry consumes. End
//! closure is not-a-knot: the fifth-derivative jumps at the first and last
//! two interior knots are forced to zero, so polynomial data up to degree 5
//! is reproduced identically.

use nalgebra::DMatrix;

use crate::jet::Jet2;

/// Uniform cardinal B-spline of degree `k` with support [0, k+1).
fn bspl(k: usize, t: f64) -> f64 {
    if t <= 0.0 || t >= (k + 1) as f64 {
        // B_0 is the half-open indicator; for k >= 1 the basis is continuous
        // and vanishes at both support ends, so the closed test is safe.
        if k == 0 && (0.0..1.0).contains(&t) {
            return 1.0;
        }
        return 0.0;
    }
    if k == 0 {
        return 1.0;
    }
    let kf = k as f64;
    (t * bspl(k - 1, t) + (kf + 1.0 - t) * bspl(k - 1, t - 1.0)) / kf
}

/// `d`-th derivative of the centered quintic B-spline at offset `u`
/// (support (-3, 3)), for d <= 4.
fn beta5(u: f64, d: usize) -> f64 {
    let t = u + 3.0;
    match d {
        0 => bspl(5, t),
        _ => {
            // d-th derivative of a uniform B-spline: alternating binomial
            // combination of degree 5-d splines.
            let mut acc = 0.0;
            let mut binom = 1.0_f64;
            for m in 0..=d {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * binom * bspl(5 - d, t - m as f64);
                binom = binom * (d - m) as f64 / (m + 1) as f64;
            }
            acc
        }
    }
}

/// Quintic spline surface fitted to an nx-by-ny node grid.
pub struct Spline2 {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
    hx: f64,
    hy: f64,
    /// Coefficients, (nx+4) by (ny+4), indexed jy*(nx+4)+jx.
    coef: Vec<f64>,
}

/// Collocation matrix for one axis with n data points: n interpolation rows
/// followed by the four not-a-knot rows.
fn axis_matrix(n: usize) -> DMatrix<f64> {
    let m = n + 4;
    let mut a = DMatrix::zeros(m, m);
    let w = [
        1.0 / 120.0,
        26.0 / 120.0,
        66.0 / 120.0,
        26.0 / 120.0,
        1.0 / 120.0,
    ];
    for i in 0..n {
        for (o, wv) in w.iter().enumerate() {
            a[(i, i + o)] = *wv;
        }
    }
    // fifth-derivative jump rows at the two interior knots nearest each end
    let sixth = [1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0];
    for (r, k) in [1isize, 2, (n as isize) - 3, (n as isize) - 2]
        .into_iter()
        .enumerate()
    {
        for (u, c) in sixth.iter().enumerate() {
            let col = (k + 5 - u as isize) as usize;
            a[(n + r, col)] = *c;
        }
    }
    a
}

impl Spline2 {
    /// Fit the interpolant to row-major node values (`values[iy*nx + ix]`).
    pub fn fit(
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        nx: usize,
        ny: usize,
        values: &[f64],
    ) -> Result<Spline2, String> {
        if nx < 9 || ny < 9 {
            return Err(format!(
                "grid {nx}x{ny} too coarse; need at least 9 nodes per axis"
            ));
        }
        if values.len() != nx * ny {
            return Err(format!(
                "value count {} does not match grid {nx}x{ny}",
                values.len()
            ));
        }
        if !(x1 > x0 && y1 > y0) {
            return Err("degenerate rectangle".to_string());
        }

        // x-direction: one factorization, ny right-hand sides
        let ax = axis_matrix(nx).lu();
        let mut rhs = DMatrix::zeros(nx + 4, ny);
        for iy in 0..ny {
            for ix in 0..nx {
                rhs[(ix, iy)] = values[iy * nx + ix];
            }
        }
        let dx = ax
            .solve(&rhs)
            .ok_or_else(|| "singular spline collocation matrix (x)".to_string())?;

        // y-direction: one factorization, nx+4 right-hand sides
        let ay = axis_matrix(ny).lu();
        let mut rhs2 = DMatrix::zeros(ny + 4, nx + 4);
        for jx in 0..nx + 4 {
            for iy in 0..ny {
                rhs2[(iy, jx)] = dx[(jx, iy)];
            }
        }
        let c = ay
            .solve(&rhs2)
            .ok_or_else(|| "singular spline collocation matrix (y)".to_string())?;

        let mut coef = vec![0.0; (nx + 4) * (ny + 4)];
        for jy in 0..ny + 4 {
            for jx in 0..nx + 4 {
                coef[jy * (nx + 4) + jx] = c[(jy, jx)];
            }
        }
        Ok(Spline2 {
            x0,
            x1,
            y0,
            y1,
            nx,
            ny,
            hx: (x1 - x0) / (nx - 1) as f64,
            hy: (y1 - y0) / (ny - 1) as f64,
            coef,
        })
    }

    fn grid_coord(&self, x: f64, y: f64) -> Result<(f64, f64), String> {
        let tolx = 1e-9 * (self.x1 - self.x0);
        let toly = 1e-9 * (self.y1 - self.y0);
        if x < self.x0 - tolx || x > self.x1 + tolx || y < self.y0 - toly || y > self.y1 + toly {
            return Err(format!(
                "point ({x}, {y}) outside grid rectangle [{}, {}] x [{}, {}]",
                self.x0, self.x1, self.y0, self.y1
            ));
        }
        let sx = ((x - self.x0) / self.hx).clamp(0.0, (self.nx - 1) as f64);
        let sy = ((y - self.y0) / self.hy).clamp(0.0, (self.ny - 1) as f64);
        Ok((sx, sy))
    }

    /// Basis weights of order-`d` derivative at grid coordinate `s`,
    /// for the 8 coefficients starting at index `first`.
    fn basis_row(s: f64, d: usize, scale: f64) -> (isize, [f64; 8]) {
        let first = s.floor() as isize - 1;
        let mut w = [0.0; 8];
        for (o, wo) in w.iter_mut().enumerate() {
            let j = first + o as isize;
            *wo = beta5(s - j as f64 + 2.0, d) * scale;
        }
        (first, w)
    }

    fn sum(&self, fx: isize, wx: &[f64; 8], fy: isize, wy: &[f64; 8]) -> f64 {
        let mx = (self.nx + 4) as isize;
        let my = (self.ny + 4) as isize;
        let mut acc = 0.0;
        for (oy, wyv) in wy.iter().enumerate() {
            if *wyv == 0.0 {
                continue;
            }
            let jy = fy + oy as isize;
            if jy < 0 || jy >= my {
                continue;
            }
            let row = (jy as usize) * (self.nx + 4);
            let mut rowacc = 0.0;
            for (ox, wxv) in wx.iter().enumerate() {
                if *wxv == 0.0 {
                    continue;
                }
                let jx = fx + ox as isize;
                if jx < 0 || jx >= mx {
                    continue;
                }
                rowacc += wxv * self.coef[row + jx as usize];
            }
            acc += wyv * rowacc;
        }
        acc
    }

    /// Value of the (dx, dy)-derivative patch at (x, y).
    pub fn eval(&self, x: f64, y: f64, dx: usize, dy: usize) -> Result<f64, String> {
        if dx > 4 || dy > 4 {
            return Err(format!(
                "spline derivative order ({dx}, {dy}) beyond supported 4"
            ));
        }
        let (sx, sy) = self.grid_coord(x, y)?;
        let (fx, wx) = Self::basis_row(sx, dx, self.hx.powi(-(dx as i32)));
        let (fy, wy) = Self::basis_row(sy, dy, self.hy.powi(-(dy as i32)));
        Ok(self.sum(fx, &wx, fy, &wy))
    }

    /// Second-order jet (in all four chart coordinates; z and t slots are
    /// zero) of the (dx, dy)-derivative patch.
    pub fn eval_jet2(&self, x: f64, y: f64, dx: usize, dy: usize) -> Result<Jet2, String> {
        if dx + 2 > 4 || dy + 2 > 4 {
            return Err(format!(
                "spline jet of derivative patch ({dx}, {dy}) needs basis order beyond 4"
            ));
        }
        let (sx, sy) = self.grid_coord(x, y)?;
        let mut bx = Vec::with_capacity(3);
        let mut by = Vec::with_capacity(3);
        for o in 0..3 {
            bx.push(Self::basis_row(
                sx,
                dx + o,
                self.hx.powi(-((dx + o) as i32)),
            ));
            by.push(Self::basis_row(
                sy,
                dy + o,
                self.hy.powi(-((dy + o) as i32)),
            ));
        }
        let s = |ox: usize, oy: usize| self.sum(bx[ox].0, &bx[ox].1, by[oy].0, &by[oy].1);
        let mut j = Jet2::constant(s(0, 0));
        j.g[0] = s(1, 0);
        j.g[1] = s(0, 1);
        j.h[crate::jet::hidx(0, 0)] = s(2, 0);
        j.h[crate::jet::hidx(0, 1)] = s(1, 1);
        j.h[crate::jet::hidx(1, 1)] = s(0, 2);
        Ok(j)
    }
}
