//! Frame geometry of an orthonormal coframe: dual frame fields, Lie
//! brackets, Levi-Civita connection coefficients, the curvature tensor with
//! its Ricci/scalar traces, the curvature operator on 2-forms, and the Weyl
//! decomposition.
//!
//! Conventions, pinned once for the whole crate:
//!   R(X,Y)Z = ([nabla_X, nabla_Y] - nabla_[X,Y]) Z
//!   R(X,Y,Z,W) = g(R(X,Y)Z, W)
//!   curvature operator on 2-forms: Op(X^Y, Z^W) = -R(X,Y,Z,W)
//!   Lambda^2 basis order: (12, 13, 14, 23, 24, 34)
//!   Gamma^i_{kj} = omega^i_j(E_k), i.e. nabla_{E_k} E_j = sum_i Gamma^i_{kj} E_i

// tensor index loops are clearer with explicit indices
#![allow(clippy::needless_range_loop)]

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{EvalCache, Field};
use crate::forms::{apply_values, KForm};
use crate::jet::{Jet1, Jet2};
use crate::point::Point4;

/// Field-level frame data: coframe coefficients a[i][mu] = theta_i(d/dmu),
/// the inverse b[mu][j] (so E_j = sum_mu b[mu][j] d/dmu, via the adjugate),
/// and the coefficient determinant.
pub struct FrameData {
    pub a: [[Field; 4]; 4],
    pub b: [[Field; 4]; 4],
    pub det: Field,
}

/// Declared singular locus: points within `margin` of a critical z or y
/// value are excluded from sampling.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Locus {
    pub crit_z: Vec<f64>,
    pub crit_y: Vec<f64>,
    pub margin: f64,
}

impl Locus {
    pub fn z_values(values: &[f64], margin: f64) -> Locus {
        Locus {
            crit_z: values.to_vec(),
            crit_y: Vec::new(),
            margin,
        }
    }

    pub fn is_excluded(&self, p: Point4) -> bool {
        self.crit_z.iter().any(|c| (p.z - c).abs() < self.margin)
            || self.crit_y.iter().any(|c| (p.y - c).abs() < self.margin)
    }
}

/// Four orthonormal one-forms, an orientation, and a singular locus.
pub struct Coframe {
    pub thetas: [KForm; 4],
    /// +1 selects the volume form theta1^theta2^theta3^theta4.
    pub orientation: f64,
    pub locus: Locus,
    pub fd: FrameData,
    pub d_thetas: [KForm; 4],
}

fn field_minor(a: &[[Field; 4]; 4], skip_row: usize, skip_col: usize) -> Field {
    let rows: Vec<usize> = (0..4).filter(|r| *r != skip_row).collect();
    let cols: Vec<usize> = (0..4).filter(|c| *c != skip_col).collect();
    // 3x3 determinant by cofactor expansion
    let g = |r: usize, c: usize| a[rows[r]][cols[c]].clone();
    let m = |r0: usize, c0: usize, r1: usize, c1: usize| {
        (g(r0, c0) * g(r1, c1)) - (g(r0, c1) * g(r1, c0))
    };
    (g(0, 0) * m(1, 1, 2, 2)) - (g(0, 1) * m(1, 0, 2, 2)) + (g(0, 2) * m(1, 0, 2, 1))
}

impl Coframe {
    pub fn new(thetas: [KForm; 4], orientation: f64, locus: Locus) -> Result<Coframe> {
        for th in &thetas {
            if th.degree() != 1 {
                return Err(Error::BadDegree {
                    have: th.degree(),
                    want: 1,
                });
            }
        }
        let a: [[Field; 4]; 4] =
            std::array::from_fn(|i| std::array::from_fn(|mu| thetas[i].coeffs()[mu].clone()));

        // determinant via cofactor expansion along the first row
        let mut det = Field::constant(0.0);
        for mu in 0..4 {
            let sign = if mu % 2 == 0 { 1.0 } else { -1.0 };
            let term = a[0][mu].clone() * field_minor(&a, 0, mu);
            det = det.add(&term.mul(&Field::constant(sign)));
        }

        // inverse by adjugate: b[mu][i] = (-1)^(i+mu) minor(i, mu) / det
        let b: [[Field; 4]; 4] = std::array::from_fn(|mu| {
            std::array::from_fn(|i| {
                let sign = if (i + mu) % 2 == 0 { 1.0 } else { -1.0 };
                (field_minor(&a, i, mu) * sign) / det.clone()
            })
        });

        let d_thetas = [
            thetas[0].d()?,
            thetas[1].d()?,
            thetas[2].d()?,
            thetas[3].d()?,
        ];

        Ok(Coframe {
            thetas,
            orientation,
            locus,
            fd: FrameData { a, b, det },
            d_thetas,
        })
    }

    /// The Euclidean coframe (dx, dy, dz, dt).
    pub fn euclidean() -> Coframe {
        let one = Field::constant(1.0);
        let zero = || Field::constant(0.0);
        let mk = |slot: usize| {
            let mut c = [zero(), zero(), zero(), zero()];
            c[slot] = one.clone();
            KForm::one_form(c)
        };
        Coframe::new([mk(0), mk(1), mk(2), mk(3)], 1.0, Locus::default()).unwrap()
    }
}

/// Pointwise frame pipeline: coefficients as second-order jets, bracket
/// coefficients and connection coefficients as first-order jets. Everything
/// downstream of curvature reads values off this.
pub struct FramePoint {
    pub p: Point4,
    /// a[i][mu] = theta_i(d/dmu)
    pub a: [[Jet2; 4]; 4],
    /// b[mu][j]: E_j = sum_mu b[mu][j] d/dmu
    pub b: [[Jet2; 4]; 4],
    /// brackets[i][j][k]: [E_i, E_j] = sum_k brackets[i][j][k] E_k
    pub brackets: [[[Jet1; 4]; 4]; 4],
    /// gam[i][k][j] = Gamma^i_{kj}
    pub gam: [[[Jet1; 4]; 4]; 4],
}

fn invert_jet2(a: &[[Jet2; 4]; 4], p: Point4) -> Result<[[Jet2; 4]; 4]> {
    let mut m = *a;
    let mut inv: [[Jet2; 4]; 4] = std::array::from_fn(|r| {
        std::array::from_fn(|c| Jet2::constant(if r == c { 1.0 } else { 0.0 }))
    });
    for col in 0..4 {
        let piv_row = (col..4)
            .max_by(|&r1, &r2| m[r1][col].v.abs().partial_cmp(&m[r2][col].v.abs()).unwrap())
            .unwrap();
        if m[piv_row][col].v.abs() < 1e-250 {
            return Err(Error::Singular {
                point: p,
                what: format!("coframe coefficient matrix has no pivot in column {col}"),
            });
        }
        m.swap(col, piv_row);
        inv.swap(col, piv_row);
        let piv = m[col][col].recip();
        for c in 0..4 {
            m[col][c] = m[col][c] * piv;
            inv[col][c] = inv[col][c] * piv;
        }
        for r in 0..4 {
            if r == col {
                continue;
            }
            let f = m[r][col];
            for c in 0..4 {
                m[r][c] = m[r][c] - f * m[col][c];
                inv[r][c] = inv[r][c] - f * inv[col][c];
            }
        }
    }
    Ok(inv)
}

/// Evaluate the full frame pipeline at a point.
pub fn frame_point(cf: &Coframe, p: Point4) -> Result<FramePoint> {
    let mut cache = EvalCache::new(p);
    let mut a = [[Jet2::ZERO; 4]; 4];
    for i in 0..4 {
        for mu in 0..4 {
            a[i][mu] = cache.jet2(&cf.fd.a[i][mu])?;
        }
    }
    // invert a (rows theta index, cols coordinate) to get coefficients of
    // the dual frame: with A[i][mu] = theta_i(d_mu), the inverse as a matrix
    // gives b with theta_i(E_j) = sum_mu A[i][mu] b[mu][j] = delta_ij.
    let b = invert_jet2(&a, p)?;

    // bracket coefficients, first in coordinates then in the frame
    let mut brackets = [[[Jet1::ZERO; 4]; 4]; 4];
    for i in 0..4 {
        for j in (i + 1)..4 {
            let mut w = [Jet1::ZERO; 4]; // coordinate components of [E_i, E_j]
            for nu in 0..4 {
                let mut acc = Jet1::ZERO;
                for mu in 0..4 {
                    acc = acc + b[mu][i].lower() * b[nu][j].partial(mu)
                        - b[mu][j].lower() * b[nu][i].partial(mu);
                }
                w[nu] = acc;
            }
            for k in 0..4 {
                let mut acc = Jet1::ZERO;
                for nu in 0..4 {
                    acc = acc + a[k][nu].lower() * w[nu];
                }
                brackets[i][j][k] = acc;
                brackets[j][i][k] = -acc;
            }
        }
    }

    // Koszul in an orthonormal frame:
    // Gamma^i_{kj} = (c^i_{kj} - c^k_{ji} + c^j_{ik}) / 2
    let mut gam = [[[Jet1::ZERO; 4]; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            for j in 0..4 {
                let s = brackets[k][j][i] - brackets[j][i][k] + brackets[i][k][j];
                gam[i][k][j] = s.scale(0.5);
            }
        }
    }

    Ok(FramePoint {
        p,
        a,
        b,
        brackets,
        gam,
    })
}

impl FramePoint {
    /// Coordinate components of the frame vectors.
    pub fn frame_vectors(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|j| std::array::from_fn(|mu| self.b[mu][j].v))
    }

    /// Gamma^i_{kj} value.
    #[inline]
    pub fn gamma(&self, i: usize, k: usize, j: usize) -> f64 {
        self.gam[i][k][j].v
    }

    /// Directional derivative E_i(f) of a first-order jet.
    #[inline]
    pub fn dir(&self, i: usize, f: Jet1) -> f64 {
        (0..4).map(|mu| self.b[mu][i].v * f.g[mu]).sum()
    }

    /// max |theta_i(E_j) - delta_ij| over all pairs.
    pub fn duality_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                let mut s = 0.0;
                for mu in 0..4 {
                    s += self.a[i][mu].v * self.b[mu][j].v;
                }
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - want).abs());
            }
        }
        worst
    }

    /// max over (i,j,k) of |(Gamma^k_{ij} - Gamma^k_{ji}) - c^k_{ij}|:
    /// torsion-freeness of the Koszul coefficients.
    pub fn torsion_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let lhs = self.gamma(k, i, j) - self.gamma(k, j, i);
                    worst = worst.max((lhs - self.brackets[i][j][k].v).abs());
                }
            }
        }
        worst
    }

    /// max |Gamma^i_{kj} + Gamma^j_{ki}|: metric antisymmetry.
    pub fn antisymmetry_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for k in 0..4 {
                for j in 0..4 {
                    worst = worst.max((self.gamma(i, k, j) + self.gamma(j, k, i)).abs());
                }
            }
        }
        worst
    }
}

pub const LAMBDA2: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Orthonormal change of basis on Lambda^2 from (12, 13, 14, 23, 24, 34)
/// to the structure-aligned combinations
/// (Omega, Phi, Psi, OmegaBar, PhiBar, PsiBar) / sqrt 2:
/// rows give the new basis vectors in the old coordinates.
pub fn lambda2_recombination() -> [[f64; 6]; 6] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [
        [s, 0.0, 0.0, 0.0, 0.0, s],  // theta12 + theta34
        [0.0, s, 0.0, 0.0, -s, 0.0], // theta13 - theta24
        [0.0, 0.0, s, s, 0.0, 0.0],  // theta14 + theta23
        [s, 0.0, 0.0, 0.0, 0.0, -s], // theta12 - theta34
        [0.0, s, 0.0, 0.0, s, 0.0],  // theta13 + theta24
        [0.0, 0.0, s, -s, 0.0, 0.0], // theta14 - theta23
    ]
}

/// Star on Lambda^2 in the orthonormal frame basis, as a 6x6 matrix.
pub fn star2_matrix(or: f64) -> [[f64; 6]; 6] {
    let mut s = [[0.0; 6]; 6];
    s[0][5] = or;
    s[5][0] = or;
    s[1][4] = -or;
    s[4][1] = -or;
    s[2][3] = or;
    s[3][2] = or;
    s
}

fn matmul6(a: &[[f64; 6]; 6], b: &[[f64; 6]; 6]) -> [[f64; 6]; 6] {
    let mut out = [[0.0; 6]; 6];
    for r in 0..6 {
        for c in 0..6 {
            out[r][c] = (0..6).map(|m| a[r][m] * b[m][c]).sum();
        }
    }
    out
}

/// Frame-indexed curvature with its traces, the operator on 2-forms, and
/// the irreducible parts (scalar, traceless Ricci, self-dual and
/// anti-self-dual Weyl in the +1 orientation).
pub struct Curvature {
    pub r: [[[[f64; 4]; 4]; 4]; 4],
    pub ricci: [[f64; 4]; 4],
    pub tau: f64,
    pub op: [[f64; 6]; 6],
    pub b_part: [[f64; 6]; 6],
    pub w_plus: [[f64; 6]; 6],
    pub w_minus: [[f64; 6]; 6],
}

pub fn curvature(fp: &FramePoint) -> Curvature {
    let mut r = [[[[0.0; 4]; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let mut v = fp.dir(i, fp.gam[l][j][k]) - fp.dir(j, fp.gam[l][i][k]);
                    for m in 0..4 {
                        v += fp.gamma(m, j, k) * fp.gamma(l, i, m)
                            - fp.gamma(m, i, k) * fp.gamma(l, j, m)
                            - fp.brackets[i][j][m].v * fp.gamma(l, m, k);
                    }
                    r[i][j][k][l] = v;
                }
            }
        }
    }

    let mut ricci = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            ricci[i][j] = (0..4).map(|k| r[k][i][j][k]).sum();
        }
    }
    let tau = (0..4).map(|i| ricci[i][i]).sum();

    let mut op = [[0.0; 6]; 6];
    for (bi, &(i, j)) in LAMBDA2.iter().enumerate() {
        for (bj, &(k, l)) in LAMBDA2.iter().enumerate() {
            op[bi][bj] = -r[i][j][k][l];
        }
    }

    let s = star2_matrix(1.0);
    let sos = matmul6(&s, &matmul6(&op, &s));
    let mut b_part = [[0.0; 6]; 6];
    let mut w = [[0.0; 6]; 6];
    for r6 in 0..6 {
        for c6 in 0..6 {
            b_part[r6][c6] = 0.5 * (op[r6][c6] - sos[r6][c6]);
            w[r6][c6] = 0.5 * (op[r6][c6] + sos[r6][c6]);
        }
        w[r6][r6] -= tau / 12.0;
    }
    let sw = matmul6(&s, &w);
    let mut w_plus = [[0.0; 6]; 6];
    let mut w_minus = [[0.0; 6]; 6];
    for r6 in 0..6 {
        for c6 in 0..6 {
            w_plus[r6][c6] = 0.5 * (w[r6][c6] + sw[r6][c6]);
            w_minus[r6][c6] = 0.5 * (w[r6][c6] - sw[r6][c6]);
        }
    }

    Curvature {
        r,
        ricci,
        tau,
        op,
        b_part,
        w_plus,
        w_minus,
    }
}

impl Curvature {
    /// max residual of the pair symmetries R_{ijkl} = -R_{jikl} = -R_{ijlk} = R_{klij}.
    pub fn symmetry_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let v = self.r[i][j][k][l];
                        worst = worst.max((v + self.r[j][i][k][l]).abs());
                        worst = worst.max((v + self.r[i][j][l][k]).abs());
                        worst = worst.max((v - self.r[k][l][i][j]).abs());
                    }
                }
            }
        }
        worst
    }

    /// max residual of the first Bianchi identity.
    pub fn bianchi_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let s = self.r[i][j][k][l] + self.r[j][k][i][l] + self.r[k][i][j][l];
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// max residual of Op = tau/12 Id + B + W+ + W-.
    pub fn reassembly_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for r6 in 0..6 {
            for c6 in 0..6 {
                let mut v = self.b_part[r6][c6] + self.w_plus[r6][c6] + self.w_minus[r6][c6];
                if r6 == c6 {
                    v += self.tau / 12.0;
                }
                worst = worst.max((v - self.op[r6][c6]).abs());
            }
        }
        worst
    }

    /// Traces of W+ and W-, and the star-commutation defects
    /// |S W+ - W+| and |S W- + W-| (star in the +1 orientation).
    pub fn weyl_structure_residual(&self) -> f64 {
        let s = star2_matrix(1.0);
        let swp = matmul6(&s, &self.w_plus);
        let swm = matmul6(&s, &self.w_minus);
        let mut worst = (0..6).map(|i| self.w_plus[i][i]).sum::<f64>().abs();
        worst = worst.max((0..6).map(|i| self.w_minus[i][i]).sum::<f64>().abs());
        for r6 in 0..6 {
            for c6 in 0..6 {
                worst = worst.max((swp[r6][c6] - self.w_plus[r6][c6]).abs());
                worst = worst.max((swm[r6][c6] + self.w_minus[r6][c6]).abs());
            }
        }
        worst
    }
}

/// Ricci eigenvalues (ascending) and the off-diagonal frame-alignment
/// residual max_{i != j} |ricci(E_i, E_j)|.
pub fn ricci_eigenstructure(c: &Curvature) -> ([f64; 4], f64) {
    let m = nalgebra::Matrix4::from_fn(|r, cidx| 0.5 * (c.ricci[r][cidx] + c.ricci[cidx][r]));
    let eig = nalgebra::SymmetricEigen::new(m);
    let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut off = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                off = off.max(c.ricci[i][j].abs());
            }
        }
    }
    ([ev[0], ev[1], ev[2], ev[3]], off)
}

/// Second, independent route to the connection: read the structure
/// coefficients off the exterior derivatives of the coframe
/// (first structure equation), then apply the same Koszul algebra.
/// Returns gamma[i][k][j] = Gamma^i_{kj}.
pub fn connection_via_cartan(cf: &Coframe, fp: &FramePoint) -> Result<[[[f64; 4]; 4]; 4]> {
    let mut cache = EvalCache::new(fp.p);
    let ev = fp.frame_vectors();
    // ctil[i][j][k]: k-component of [E_i, E_j] = -dtheta_k(E_i, E_j)
    let mut ctil = [[[0.0; 4]; 4]; 4];
    for k in 0..4 {
        let vals = cf.d_thetas[k].eval_with(&mut cache)?;
        for i in 0..4 {
            for j in 0..4 {
                ctil[i][j][k] = -apply_values(2, &vals, &[ev[i], ev[j]]);
            }
        }
    }
    let mut gam = [[[0.0; 4]; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            for j in 0..4 {
                gam[i][k][j] = 0.5 * (ctil[k][j][i] - ctil[j][i][k] + ctil[i][k][j]);
            }
        }
    }
    Ok(gam)
}
