//! Dirichlet solver for the profile equations Delta u = c1 h^2 + c2 e^{2u}
//! on a rectangle, with u = ln H as the unknown. The linear case (c2 = 0)
//! and both Liouville signs share one damped-Newton path: a 5-point
//! Laplacian, conjugate-gradient linear solves on the negated (positive
//! definite) Jacobian, and Armijo backtracking on the residual sup-norm.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::point::Point4;
use crate::spline::Spline2;

/// A rectangle of node values, row-major with the x index fastest.
#[derive(Clone, Debug)]
pub struct Grid2D {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
    pub u: Vec<f64>,
}

impl Grid2D {
    pub fn node_x(&self, ix: usize) -> f64 {
        self.x0 + (self.x1 - self.x0) * ix as f64 / (self.nx - 1) as f64
    }

    pub fn node_y(&self, iy: usize) -> f64 {
        self.y0 + (self.y1 - self.y0) * iy as f64 / (self.ny - 1) as f64
    }

    pub fn spline(&self) -> Result<Spline2> {
        Spline2::fit(
            self.x0, self.x1, self.y0, self.y1, self.nx, self.ny, &self.u,
        )
        .map_err(Error::GridFile)
    }

    /// Serialize: a header line `x0 x1 y0 y1 nx ny`, then the node values
    /// row-major in full double precision.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "{:.17e} {:.17e} {:.17e} {:.17e} {} {}",
            self.x0, self.x1, self.y0, self.y1, self.nx, self.ny
        )?;
        for v in &self.u {
            writeln!(w, "{v:.17e}")?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Grid2D> {
        let mut toks = Vec::new();
        for line in r.lines() {
            let line = line?;
            toks.extend(
                line.split_whitespace()
                    .map(str::to_string)
                    .collect::<Vec<_>>(),
            );
        }
        if toks.len() < 6 {
            return Err(Error::GridFile("missing header".to_string()));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::GridFile(format!("bad number `{s}`")))
        };
        let (x0, x1, y0, y1) = (
            num(&toks[0])?,
            num(&toks[1])?,
            num(&toks[2])?,
            num(&toks[3])?,
        );
        let nx: usize = toks[4]
            .parse()
            .map_err(|_| Error::GridFile(format!("bad nx `{}`", toks[4])))?;
        let ny: usize = toks[5]
            .parse()
            .map_err(|_| Error::GridFile(format!("bad ny `{}`", toks[5])))?;
        if toks.len() != 6 + nx * ny {
            return Err(Error::GridFile(format!(
                "expected {} values, found {}",
                nx * ny,
                toks.len() - 6
            )));
        }
        let mut u = Vec::with_capacity(nx * ny);
        for tkn in &toks[6..] {
            u.push(num(tkn)?);
        }
        Ok(Grid2D {
            x0,
            x1,
            y0,
            y1,
            nx,
            ny,
            u,
        })
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(f))
    }

    pub fn load(path: &std::path::Path) -> Result<Grid2D> {
        let f = std::fs::File::open(path)?;
        Grid2D::read_from(std::io::BufReader::new(f))
    }
}

/// The boundary-value problem Delta u = c1 h^2 + c2 e^{2u}, u = g on the
/// boundary of the rectangle.
pub struct ProfileBvp<'a> {
    pub c1: f64,
    pub c2: f64,
    pub h: &'a Field,
    pub boundary: &'a dyn Fn(f64, f64) -> f64,
    pub initial: Option<&'a Grid2D>,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Blow-up cap on |u|.
    pub cap: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-10,
            max_iter: 50,
            cap: 50.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub iterations: usize,
    pub history: Vec<f64>,
    pub final_residual: f64,
    pub cg_iterations: usize,
}

struct Discretization {
    nx: usize,
    ny: usize,
    ihx2: f64,
    ihy2: f64,
}

impl Discretization {
    fn interior(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let nx = self.nx;
        let ny = self.ny;
        (1..ny - 1).flat_map(move |iy| (1..nx - 1).map(move |ix| (ix, iy)))
    }

    #[inline]
    fn idx(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    /// 5-point Laplacian at an interior node.
    #[inline]
    fn lap(&self, u: &[f64], ix: usize, iy: usize) -> f64 {
        let c = u[self.idx(ix, iy)];
        (u[self.idx(ix - 1, iy)] - 2.0 * c + u[self.idx(ix + 1, iy)]) * self.ihx2
            + (u[self.idx(ix, iy - 1)] - 2.0 * c + u[self.idx(ix, iy + 1)]) * self.ihy2
    }
}

/// Residual F(u) = Delta_h u - c1 h^2 - c2 e^{2u} on interior nodes
/// (zero slots on boundary nodes) and its sup-norm.
fn residual(d: &Discretization, bvp: &ProfileBvp, h2: &[f64], u: &[f64], out: &mut [f64]) -> f64 {
    out.iter_mut().for_each(|v| *v = 0.0);
    let mut norm = 0.0_f64;
    for (ix, iy) in d.interior() {
        let i = d.idx(ix, iy);
        let f = d.lap(u, ix, iy) - bvp.c1 * h2[i] - bvp.c2 * (2.0 * u[i]).exp();
        out[i] = f;
        norm = norm.max(f.abs());
    }
    norm
}

/// Apply A = -J = -Delta_h + diag(2 c2 e^{2u}) to an interior-supported
/// vector.
fn apply_neg_jacobian(d: &Discretization, c2: f64, u: &[f64], v: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|o| *o = 0.0);
    for (ix, iy) in d.interior() {
        let i = d.idx(ix, iy);
        out[i] = -d.lap(v, ix, iy) + 2.0 * c2 * (2.0 * u[i]).exp() * v[i];
    }
}

/// Jacobi-preconditioned conjugate gradients for A d = f.
fn cg_solve(d: &Discretization, c2: f64, u: &[f64], f: &[f64], dvec: &mut [f64]) -> Result<usize> {
    let n = f.len();
    let mut r = f.to_vec();
    dvec.iter_mut().for_each(|v| *v = 0.0);
    let diag: Vec<f64> = {
        let mut diag = vec![1.0; n];
        for (ix, iy) in d.interior() {
            let i = d.idx(ix, iy);
            diag[i] = 2.0 * (d.ihx2 + d.ihy2) + 2.0 * c2 * (2.0 * u[i]).exp();
        }
        diag
    };
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };

    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(ri, di)| ri / di).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let fnorm = dot(f, f).sqrt();
    if fnorm == 0.0 {
        return Ok(0);
    }
    let target = 1e-13 * fnorm;
    let mut ap = vec![0.0; n];
    let maxit = 20 * (d.nx + d.ny).max(100);
    for it in 0..maxit {
        apply_neg_jacobian(d, c2, u, &p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return Err(Error::NonConvergence {
                what: "linearized operator lost positive definiteness in CG".to_string(),
                iterations: it,
                last: dot(&r, &r).sqrt(),
                history: vec![],
            });
        }
        let alpha = rz / pap;
        for i in 0..n {
            dvec[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rnorm = dot(&r, &r).sqrt();
        if rnorm <= target {
            return Ok(it + 1);
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NonConvergence {
        what: "conjugate gradients exhausted its iteration budget".to_string(),
        iterations: maxit,
        last: dot(&r, &r).sqrt(),
        history: vec![],
    })
}

/// Solve the profile problem on an nx-by-ny grid over the rectangle.
#[allow(clippy::too_many_arguments)]
pub fn solve(
    bvp: &ProfileBvp,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    nx: usize,
    ny: usize,
    opts: SolveOptions,
) -> Result<(Grid2D, SolveReport)> {
    if nx < 9 || ny < 9 {
        return Err(Error::Config(format!(
            "grid {nx}x{ny} too coarse; need at least 9 nodes per axis"
        )));
    }
    if opts.tol <= 0.0 {
        return Err(Error::Config(
            "solver tolerance must be positive".to_string(),
        ));
    }
    let hx = (x1 - x0) / (nx - 1) as f64;
    let hy = (y1 - y0) / (ny - 1) as f64;
    let d = Discretization {
        nx,
        ny,
        ihx2: 1.0 / (hx * hx),
        ihy2: 1.0 / (hy * hy),
    };
    let n = nx * ny;

    // h^2 on the nodes; h must be positive on the closed rectangle
    let mut h2 = vec![0.0; n];
    for iy in 0..ny {
        for ix in 0..nx {
            let x = x0 + hx * ix as f64;
            let y = y0 + hy * iy as f64;
            let hv = bvp.h.value(Point4::new(x, y, 0.0, 0.0))?;
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(hv > 0.0) {
                return Err(Error::Constraint {
                    what: format!("h must be positive on the rectangle, found {hv}"),
                    point: Point4::new(x, y, 0.0, 0.0),
                    residual: hv,
                });
            }
            h2[iy * nx + ix] = hv * hv;
        }
    }

    // initial iterate: supplied grid, or boundary data with the boundary
    // mean filling the interior
    let mut u = vec![0.0; n];
    let mut bsum = 0.0;
    let mut bcount = 0usize;
    for iy in 0..ny {
        for ix in 0..nx {
            if ix == 0 || iy == 0 || ix == nx - 1 || iy == ny - 1 {
                let x = x0 + hx * ix as f64;
                let y = y0 + hy * iy as f64;
                let g = (bvp.boundary)(x, y);
                if !g.is_finite() {
                    return Err(Error::Config(format!(
                        "boundary data not finite at ({x}, {y})"
                    )));
                }
                u[iy * nx + ix] = g;
                bsum += g;
                bcount += 1;
            }
        }
    }
    let bmean = bsum / bcount as f64;
    match bvp.initial {
        Some(g0) => {
            if g0.nx != nx || g0.ny != ny {
                return Err(Error::Config(
                    "initial iterate grid shape mismatch".to_string(),
                ));
            }
            for (ix, iy) in d.interior() {
                u[d.idx(ix, iy)] = g0.u[d.idx(ix, iy)];
            }
        }
        None => {
            for (ix, iy) in d.interior() {
                u[d.idx(ix, iy)] = bmean;
            }
        }
    }

    let mut f = vec![0.0; n];
    let mut dvec = vec![0.0; n];
    let mut history = Vec::new();
    let mut cg_total = 0usize;
    let mut norm = residual(&d, bvp, &h2, &u, &mut f);
    history.push(norm);

    for it in 0..opts.max_iter {
        if norm <= opts.tol {
            return Ok((
                Grid2D {
                    x0,
                    x1,
                    y0,
                    y1,
                    nx,
                    ny,
                    u,
                },
                SolveReport {
                    iterations: it,
                    history,
                    final_residual: norm,
                    cg_iterations: cg_total,
                },
            ));
        }
        // Newton step: J step = -F, via A = -J
        cg_total += cg_solve(&d, bvp.c2, &u, &f, &mut dvec)?;

        // Armijo backtracking on the sup-norm
        let mut s = 1.0_f64;
        let mut unew = u.clone();
        loop {
            for (ix, iy) in d.interior() {
                let i = d.idx(ix, iy);
                unew[i] = u[i] + s * dvec[i];
            }
            let newnorm = residual(&d, bvp, &h2, &unew, &mut f);
            if newnorm <= (1.0 - 1e-4 * s) * norm {
                norm = newnorm;
                std::mem::swap(&mut u, &mut unew);
                break;
            }
            s *= 0.5;
            if s < 2.0_f64.powi(-20) {
                return Err(Error::NonConvergence {
                    what: "line search stalled".to_string(),
                    iterations: it,
                    last: norm,
                    history,
                });
            }
        }
        history.push(norm);

        let umax = u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if umax > opts.cap {
            return Err(Error::BlowUp {
                value: umax,
                cap: opts.cap,
            });
        }
        // stagnation: less than 1% reduction over the last 10 iterations
        if history.len() > 10 {
            let old = history[history.len() - 11];
            if norm > 0.99 * old && norm > opts.tol {
                return Err(Error::NonConvergence {
                    what: "residual reduction below 1% over 10 iterations".to_string(),
                    iterations: it + 1,
                    last: norm,
                    history,
                });
            }
        }
    }
    if norm <= opts.tol {
        return Ok((
            Grid2D {
                x0,
                x1,
                y0,
                y1,
                nx,
                ny,
                u,
            },
            SolveReport {
                iterations: opts.max_iter,
                history,
                final_residual: norm,
                cg_iterations: cg_total,
            },
        ));
    }
    Err(Error::NonConvergence {
        what: "iteration budget exhausted".to_string(),
        iterations: opts.max_iter,
        last: norm,
        history,
    })
}
