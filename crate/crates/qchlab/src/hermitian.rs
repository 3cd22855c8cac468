//! Almost Hermitian structures on a framed 4-manifold: the frame structure
//! J (E1 -> E2, E3 -> E4) and its natural opposite (E1 -> E2, E3 -> -E4),
//! Kahler forms, nabla Omega with the extracted invariant alpha, Lee form,
//! Nijenhuis tensor, *-Ricci, conformal scalar curvature, Gray-condition
//! residuals, the quartic holomorphic-curvature fit, and the pointwise
//! ingredients of the semi-symmetry / non-l.c.K. / conformal-foliation
//! certificates.

// tensor index loops are clearer with explicit indices
#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};
use crate::frame::{Curvature, FramePoint, LAMBDA2};
use crate::jet::Jet1;

/// Orthogonal almost complex structure expressed on the special frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Acs {
    /// J: E1 -> E2, E2 -> -E1, E3 -> E4, E4 -> -E3.
    J,
    /// The natural opposite: E1 -> E2, E2 -> -E1, E3 -> -E4, E4 -> E3.
    JBar,
}

impl Acs {
    /// Matrix m with J E_j = sum_i m[i][j] E_i.
    pub fn mat(self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        m[1][0] = 1.0;
        m[0][1] = -1.0;
        match self {
            Acs::J => {
                m[3][2] = 1.0;
                m[2][3] = -1.0;
            }
            Acs::JBar => {
                m[3][2] = -1.0;
                m[2][3] = 1.0;
            }
        }
        m
    }

    /// Kahler form in frame components: omega[i][j] = g(J E_i, E_j).
    pub fn omega(self) -> [[f64; 4]; 4] {
        let m = self.mat();
        let mut w = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                w[i][j] = m[j][i];
            }
        }
        w
    }

    /// Orientation in which this structure's Kahler form is self-dual
    /// (+1 means the volume form theta1^theta2^theta3^theta4).
    pub fn orientation(self) -> f64 {
        match self {
            Acs::J => 1.0,
            Acs::JBar => -1.0,
        }
    }
}

fn antisym(pairs: &[(usize, usize, f64)]) -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for &(i, j, v) in pairs {
        m[i][j] = v;
        m[j][i] = -v;
    }
    m
}

/// Phi = theta1^theta3 - theta2^theta4 in frame components.
pub fn phi_mat() -> [[f64; 4]; 4] {
    antisym(&[(0, 2, 1.0), (1, 3, -1.0)])
}

/// Psi = theta1^theta4 + theta2^theta3.
pub fn psi_mat() -> [[f64; 4]; 4] {
    antisym(&[(0, 3, 1.0), (1, 2, 1.0)])
}

/// Phi-bar = theta1^theta3 + theta2^theta4.
pub fn phi_bar_mat() -> [[f64; 4]; 4] {
    antisym(&[(0, 2, 1.0), (1, 3, 1.0)])
}

/// Psi-bar = theta1^theta4 - theta2^theta3.
pub fn psi_bar_mat() -> [[f64; 4]; 4] {
    antisym(&[(0, 3, 1.0), (1, 2, -1.0)])
}

/// Pointwise Hermitian data for one structure over a frame point.
pub struct HermitianPoint {
    pub kind: Acs,
    /// nab[k][i][j] = (nabla_{E_k} Omega)(E_i, E_j).
    pub nab: [[[Jet1; 4]; 4]; 4],
    /// Full-index squared norm of nabla Omega.
    pub nab_norm2: Jet1,
    /// Frame components of delta Omega.
    pub delta_omega: [Jet1; 4],
    /// Frame components of the Lee form theta (from 2 theta = -delta Omega o J).
    pub lee: [Jet1; 4],
    pub lee_norm2: f64,
    pub delta_theta: f64,
    /// d theta (E_i, E_j).
    pub d_theta: [[f64; 4]; 4],
    /// p(E_k) = omega^2_1(E_k) + omega^4_3(E_k).
    pub p: [f64; 4],
}

/// Assemble the Hermitian data at a point. Everything here is algebraic in
/// the connection jets, so it works for degenerate (Kahler) structures too;
/// only `alpha` refuses those.
pub fn hermitian_point(fp: &FramePoint, kind: Acs) -> HermitianPoint {
    let w = kind.omega();
    let mut nab = [[[Jet1::ZERO; 4]; 4]; 4];
    let mut norm2 = Jet1::ZERO;
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = Jet1::ZERO;
                for m in 0..4 {
                    acc = acc - fp.gam[m][k][i].scale(w[m][j]) - fp.gam[m][k][j].scale(w[i][m]);
                }
                nab[k][i][j] = acc;
                norm2 = norm2 + acc * acc;
            }
        }
    }

    let mut delta_omega = [Jet1::ZERO; 4];
    for j in 0..4 {
        let mut acc = Jet1::ZERO;
        for k in 0..4 {
            acc = acc - nab[k][k][j];
        }
        delta_omega[j] = acc;
    }

    let m = kind.mat();
    let mut lee = [Jet1::ZERO; 4];
    for j in 0..4 {
        let mut acc = Jet1::ZERO;
        for a in 0..4 {
            acc = acc - delta_omega[a].scale(0.5 * m[a][j]);
        }
        lee[j] = acc;
    }

    let lee_norm2 = lee.iter().map(|l| l.v * l.v).sum();

    // delta theta = -sum_k [ E_k(theta_k) - Gamma^m_{kk} theta_m ]
    let mut delta_theta = 0.0;
    for k in 0..4 {
        let mut v = fp.dir(k, lee[k]);
        for mm in 0..4 {
            v -= fp.gamma(mm, k, k) * lee[mm].v;
        }
        delta_theta -= v;
    }

    // d theta (E_i, E_j) = E_i(theta_j) - E_j(theta_i) - theta([E_i, E_j])
    let mut d_theta = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut v = fp.dir(i, lee[j]) - fp.dir(j, lee[i]);
            for k in 0..4 {
                v -= fp.brackets[i][j][k].v * lee[k].v;
            }
            d_theta[i][j] = v;
        }
    }

    let p = std::array::from_fn(|k| fp.gamma(1, k, 0) + fp.gamma(3, k, 2));

    HermitianPoint {
        kind,
        nab,
        nab_norm2: norm2,
        delta_omega,
        lee,
        lee_norm2,
        delta_theta,
        d_theta,
        p,
    }
}

impl HermitianPoint {
    /// The invariant alpha = |nabla J| / (2 sqrt 2), as a first-order jet.
    /// Errors when the structure is parallel at the point.
    pub fn alpha(&self, fp: &FramePoint) -> Result<Jet1> {
        if self.nab_norm2.v < 1e-20 {
            return Err(Error::Degenerate {
                point: fp.p,
                norm: self.nab_norm2.v.max(0.0).sqrt(),
            });
        }
        Ok(self.nab_norm2.sqrt().scale(1.0 / (2.0 * 2.0_f64.sqrt())))
    }

    /// max |nabla Omega - alpha (theta1 x Phi + theta2 x Psi)| over all
    /// index triples, for a given alpha value.
    pub fn structure_residual(&self, alpha: f64) -> f64 {
        let phi = phi_mat();
        let psi = psi_mat();
        let mut worst = 0.0_f64;
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    let want = match k {
                        0 => alpha * phi[i][j],
                        1 => alpha * psi[i][j],
                        _ => 0.0,
                    };
                    worst = worst.max((self.nab[k][i][j].v - want).abs());
                }
            }
        }
        worst
    }
}

/// Nijenhuis tensor over frame pairs: max component norm.
pub fn nijenhuis_residual(fp: &FramePoint, kind: Acs) -> f64 {
    let m = kind.mat();
    let jv =
        |v: [f64; 4]| -> [f64; 4] { std::array::from_fn(|k| (0..4).map(|a| m[k][a] * v[a]).sum()) };
    let bracket =
        |i: usize, j: usize| -> [f64; 4] { std::array::from_fn(|k| fp.brackets[i][j][k].v) };
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in (i + 1)..4 {
            // [JX, JY]
            let mut t1 = [0.0; 4];
            for a in 0..4 {
                for b in 0..4 {
                    let f = m[a][i] * m[b][j];
                    if f != 0.0 {
                        for k in 0..4 {
                            t1[k] += f * fp.brackets[a][b][k].v;
                        }
                    }
                }
            }
            // J[JX, Y] and J[X, JY]
            let mut t2in = [0.0; 4];
            let mut t3in = [0.0; 4];
            for a in 0..4 {
                if m[a][i] != 0.0 {
                    let br = bracket(a, j);
                    for k in 0..4 {
                        t2in[k] += m[a][i] * br[k];
                    }
                }
                if m[a][j] != 0.0 {
                    let br = bracket(i, a);
                    for k in 0..4 {
                        t3in[k] += m[a][j] * br[k];
                    }
                }
            }
            let t2 = jv(t2in);
            let t3 = jv(t3in);
            let t4 = bracket(i, j);
            for k in 0..4 {
                let n = t1[k] - t2[k] - t3[k] - t4[k];
                worst = worst.max(n.abs());
            }
        }
    }
    worst
}

/// *-Ricci tensor rho*(X, Y) = (1/2) tr { Z -> R(X, JY) J Z } and its trace.
pub fn ricci_star(c: &Curvature, kind: Acs) -> ([[f64; 4]; 4], f64) {
    let m = kind.mat();
    let mut rs = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = 0.0;
            for k in 0..4 {
                for a in 0..4 {
                    if m[a][j] == 0.0 {
                        continue;
                    }
                    for b in 0..4 {
                        if m[b][k] == 0.0 {
                            continue;
                        }
                        acc += m[a][j] * m[b][k] * c.r[i][a][b][k];
                    }
                }
            }
            rs[i][j] = 0.5 * acc;
        }
    }
    let tau_star = (0..4).map(|i| rs[i][i]).sum();
    (rs, tau_star)
}

/// Defect of the universal almost-Hermitian trace identity
/// (1/2)(rho(X,Y) + rho(JX,JY)) - (1/2)(rho*(X,Y) + rho*(Y,X))
///   = (1/4)(tau - tau*) g(X,Y).
pub fn gray_hervella_residual(c: &Curvature, kind: Acs) -> f64 {
    let m = kind.mat();
    let (rs, tau_star) = ricci_star(c, kind);
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            let mut rho_jj = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    rho_jj += m[a][i] * m[b][j] * c.ricci[a][b];
                }
            }
            let lhs = 0.5 * (c.ricci[i][j] + rho_jj) - 0.5 * (rs[i][j] + rs[j][i]);
            let rhs = 0.25 * (c.tau - tau_star) * if i == j { 1.0 } else { 0.0 };
            worst = worst.max((lhs - rhs).abs());
        }
    }
    worst
}

/// Residuals of the three Gray curvature conditions (max over index tuples).
pub fn gray_residuals(c: &Curvature, kind: Acs) -> (f64, f64, f64) {
    let m = kind.mat();
    let jr2 = |i: usize, j: usize, k: usize, l: usize| -> f64 {
        // R(JX, JY, Z, W)
        let mut acc = 0.0;
        for a in 0..4 {
            if m[a][i] == 0.0 {
                continue;
            }
            for b in 0..4 {
                if m[b][j] == 0.0 {
                    continue;
                }
                acc += m[a][i] * m[b][j] * c.r[a][b][k][l];
            }
        }
        acc
    };
    let mut g1 = 0.0_f64;
    let mut g2 = 0.0_f64;
    let mut g3 = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let r = c.r[i][j][k][l];
                    g1 = g1.max((jr2(i, j, k, l) - r).abs());

                    // G2: R(X,Y,Z,W) - R(JX,JY,Z,W) = R(JX,Y,JZ,W) + R(JX,Y,Z,JW)
                    let mut t3 = 0.0;
                    let mut t4 = 0.0;
                    for a in 0..4 {
                        if m[a][i] == 0.0 {
                            continue;
                        }
                        for b in 0..4 {
                            if m[b][k] != 0.0 {
                                t3 += m[a][i] * m[b][k] * c.r[a][j][b][l];
                            }
                            if m[b][l] != 0.0 {
                                t4 += m[a][i] * m[b][l] * c.r[a][j][k][b];
                            }
                        }
                    }
                    g2 = g2.max((r - jr2(i, j, k, l) - t3 - t4).abs());

                    // G3: R(JX,JY,JZ,JW) = R(X,Y,Z,W)
                    let mut t = 0.0;
                    for a in 0..4 {
                        if m[a][i] == 0.0 {
                            continue;
                        }
                        for b in 0..4 {
                            if m[b][j] == 0.0 {
                                continue;
                            }
                            for cc in 0..4 {
                                if m[cc][k] == 0.0 {
                                    continue;
                                }
                                for d in 0..4 {
                                    if m[d][l] == 0.0 {
                                        continue;
                                    }
                                    t += m[a][i] * m[b][j] * m[cc][k] * m[d][l] * c.r[a][b][cc][d];
                                }
                            }
                        }
                    }
                    g3 = g3.max((t - r).abs());
                }
            }
        }
    }
    (g1, g2, g3)
}

/// Conformal scalar curvature kappa = tau - 6(|theta|^2 + delta theta).
pub fn kappa(c: &Curvature, hp: &HermitianPoint) -> f64 {
    c.tau - 6.0 * (hp.lee_norm2 + hp.delta_theta)
}

/// max |rho(X,Y) - rho(JX,JY)| over the frame.
pub fn j_invariance_residual(c: &Curvature, kind: Acs) -> f64 {
    let m = kind.mat();
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            let mut rho_jj = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    rho_jj += m[a][i] * m[b][j] * c.ricci[a][b];
                }
            }
            worst = worst.max((c.ricci[i][j] - rho_jj).abs());
        }
    }
    worst
}

/// max |rho - rho* - (tau - kappa)/6 g|: the scalar criterion for Ricci
/// J-invariance of a Hermitian structure.
pub fn j_invariance_criterion_defect(c: &Curvature, kind: Acs, kappa_val: f64) -> f64 {
    let (rs, _) = ricci_star(c, kind);
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            let g = if i == j { 1.0 } else { 0.0 };
            let v = c.ricci[i][j] - rs[i][j] - (c.tau - kappa_val) / 6.0 * g;
            worst = worst.max(v.abs());
        }
    }
    worst
}

/// Frame 2-form (as an antisymmetric matrix) to the 6-component basis
/// vector in the order (12, 13, 14, 23, 24, 34).
pub fn mat_to_lambda2(w: &[[f64; 4]; 4]) -> [f64; 6] {
    std::array::from_fn(|s| {
        let (i, j) = LAMBDA2[s];
        w[i][j]
    })
}

/// Norm and self-dual / anti-self-dual parts of a frame 2-form in a given
/// orientation; returns (|w|, |sd part|, |asd part|).
pub fn sd_asd_norms(w: &[[f64; 4]; 4], or: f64) -> (f64, f64, f64) {
    let v = mat_to_lambda2(w);
    let sv = crate::forms::star2_frame(&v, or);
    let mut n = 0.0;
    let mut nsd = 0.0;
    let mut nasd = 0.0;
    for s in 0..6 {
        let sd = 0.5 * (v[s] + sv[s]);
        let asd = 0.5 * (v[s] - sv[s]);
        n += v[s] * v[s];
        nsd += sd * sd;
        nasd += asd * asd;
    }
    (n.sqrt(), nsd.sqrt(), nasd.sqrt())
}

/// Least-squares fit of the holomorphic sectional curvature against
/// (1, t^2, t^4) with t = |X_Delta|.
#[derive(Clone, Copy, Debug)]
pub struct QchFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub residual: f64,
    pub n: usize,
}

/// K(X) = R(X, JX, JX, X) for a frame-component vector.
pub fn holomorphic_sectional(c: &Curvature, kind: Acs, x: [f64; 4]) -> f64 {
    let m = kind.mat();
    let jx: [f64; 4] = std::array::from_fn(|k| (0..4).map(|a| m[k][a] * x[a]).sum());
    let mut acc = 0.0;
    for i in 0..4 {
        if x[i] == 0.0 {
            continue;
        }
        for j in 0..4 {
            if jx[j] == 0.0 {
                continue;
            }
            for k in 0..4 {
                if jx[k] == 0.0 {
                    continue;
                }
                for l in 0..4 {
                    acc += x[i] * jx[j] * jx[k] * x[l] * c.r[i][j][k][l];
                }
            }
        }
    }
    acc
}

/// Deterministic unit sample vectors stratified in t = |X_Delta|.
pub fn qch_sample_vectors(n: usize) -> Vec<(f64, [f64; 4])> {
    const GOLD: f64 = 0.618_033_988_749_894_9;
    const SILVER: f64 = 0.414_213_562_373_095_1;
    (0..n)
        .map(|s| {
            let t = s as f64 / (n - 1) as f64;
            let p1 = 2.0 * std::f64::consts::PI * ((s as f64 * GOLD) % 1.0);
            let p2 = 2.0 * std::f64::consts::PI * ((s as f64 * SILVER + 0.17) % 1.0);
            let r = (1.0 - t * t).max(0.0).sqrt();
            (t, [r * p1.cos(), r * p1.sin(), t * p2.cos(), t * p2.sin()])
        })
        .collect()
}

pub fn qch_fit(c: &Curvature, kind: Acs, n: usize) -> Result<QchFit> {
    if n < 12 {
        return Err(Error::DegenerateSample(format!(
            "need at least 12 sample vectors, got {n}"
        )));
    }
    let samples = qch_sample_vectors(n);
    let ts: Vec<f64> = samples.iter().map(|(t, _)| *t).collect();
    if ts.iter().all(|t| (*t - ts[0]).abs() < 1e-12) {
        return Err(Error::DegenerateSample(
            "all sample vectors have the same |X_Delta|".to_string(),
        ));
    }
    let mut m = nalgebra::Matrix3::<f64>::zeros();
    let mut rhs = nalgebra::Vector3::<f64>::zeros();
    let mut ks = Vec::with_capacity(n);
    for (t, x) in &samples {
        let k = holomorphic_sectional(c, kind, *x);
        ks.push(k);
        let v = nalgebra::Vector3::new(1.0, t * t, t * t * t * t);
        m += v * v.transpose();
        rhs += v * k;
    }
    let sol = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::DegenerateSample("singular quartic normal matrix".to_string()))?;
    let mut residual = 0.0_f64;
    for ((t, _), k) in samples.iter().zip(&ks) {
        let fit = sol[0] + sol[1] * t * t + sol[2] * t * t * t * t;
        residual = residual.max((k - fit).abs());
    }
    Ok(QchFit {
        a: sol[0],
        b: sol[1],
        c: sol[2],
        residual,
        n,
    })
}

/// Pointwise maxima for the semi-symmetry certificate:
/// (max |R(.,.)E3|, max |R(.,.)E4|).
pub fn nullity_curvature_residual(c: &Curvature) -> (f64, f64) {
    let mut r3 = 0.0_f64;
    let mut r4 = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            for l in 0..4 {
                r3 = r3.max(c.r[i][j][2][l].abs());
                r4 = r4.max(c.r[i][j][3][l].abs());
            }
        }
    }
    (r3, r4)
}

/// Conformality defect of the foliation spanned by (E3, E4): for each
/// generator V in {d/dz, d/dt}, the deviation of (L_V g)|_{span(E1,E2)}
/// from a multiple of the restricted metric. Returns the worse of the two.
pub fn conformal_foliation_defect(fp: &FramePoint) -> f64 {
    let mut worst = 0.0_f64;
    for gen_axis in [2usize, 3] {
        let mut mm = [[0.0; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                let mut acc = 0.0;
                for mu in 0..4 {
                    for nu in 0..4 {
                        // d/d(gen) of g_{mu nu} = sum_i a[i][mu] a[i][nu]
                        let mut dg = 0.0;
                        for i in 0..4 {
                            dg += fp.a[i][mu].g[gen_axis] * fp.a[i][nu].v
                                + fp.a[i][mu].v * fp.a[i][nu].g[gen_axis];
                        }
                        acc += fp.b[mu][a].v * fp.b[nu][b].v * dg;
                    }
                }
                mm[a][b] = acc;
            }
        }
        let lam = 0.5 * (mm[0][0] + mm[1][1]);
        let defect = (mm[0][0] - lam)
            .abs()
            .max((mm[1][1] - lam).abs())
            .max(mm[0][1].abs())
            .max(mm[1][0].abs());
        worst = worst.max(defect);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{curvature, frame_point, Coframe};
    use crate::point::Point4;

    #[test]
    fn euclidean_structures_are_flat_and_parallel() {
        let cf = Coframe::euclidean();
        let fp = frame_point(&cf, Point4::new(0.1, 0.2, 0.3, 0.4)).unwrap();
        let c = curvature(&fp);
        for kind in [Acs::J, Acs::JBar] {
            let hp = hermitian_point(&fp, kind);
            assert!(hp.alpha(&fp).is_err(), "flat structure must be degenerate");
            assert_eq!(nijenhuis_residual(&fp, kind), 0.0);
            let (rs, ts) = ricci_star(&c, kind);
            assert!(rs.iter().flatten().all(|&v| v == 0.0));
            assert_eq!(ts, 0.0);
            assert_eq!(gray_residuals(&c, kind), (0.0, 0.0, 0.0));
            assert_eq!(gray_hervella_residual(&c, kind), 0.0);
            assert_eq!(j_invariance_residual(&c, kind), 0.0);
            assert_eq!(kappa(&c, &hp), 0.0);
            let (r3, r4) = nullity_curvature_residual(&c);
            assert_eq!((r3, r4), (0.0, 0.0));
        }
        // a product metric foliates conformally (trivially)
        assert_eq!(conformal_foliation_defect(&fp), 0.0);
    }

    #[test]
    fn kaehler_forms_match_structure() {
        let w = Acs::J.omega();
        assert_eq!(w[0][1], 1.0);
        assert_eq!(w[2][3], 1.0);
        let wb = Acs::JBar.omega();
        assert_eq!(wb[0][1], 1.0);
        assert_eq!(wb[2][3], -1.0);
        // J^2 = -Id and orthogonality on the frame
        for kind in [Acs::J, Acs::JBar] {
            let m = kind.mat();
            for i in 0..4 {
                for j in 0..4 {
                    let jj: f64 = (0..4).map(|a| m[i][a] * m[a][j]).sum();
                    assert_eq!(jj, if i == j { -1.0 } else { 0.0 });
                    let orth: f64 = (0..4).map(|a| m[a][i] * m[a][j]).sum();
                    assert_eq!(orth, if i == j { 1.0 } else { 0.0 });
                }
            }
        }
    }

    #[test]
    fn qch_fit_recovers_synthetic_quartic() {
        // feed the fitter a curvature whose holomorphic sectional curvature
        // is exactly quartic in t: a flat tensor plus explicit perturbation
        // is harder to fabricate, so instead check the sampler and solver on
        // a synthetic function by fitting values directly.
        let samples = qch_sample_vectors(24);
        let (a, b, c) = (0.7, -1.3, 0.45);
        let mut m = nalgebra::Matrix3::<f64>::zeros();
        let mut rhs = nalgebra::Vector3::<f64>::zeros();
        for (t, _) in &samples {
            let v = nalgebra::Vector3::new(1.0, t * t, t.powi(4));
            m += v * v.transpose();
            rhs += v * (a + b * t * t + c * t.powi(4));
        }
        let sol = m.lu().solve(&rhs).unwrap();
        assert!((sol[0] - a).abs() < 1e-10);
        assert!((sol[1] - b).abs() < 1e-9);
        assert!((sol[2] - c).abs() < 1e-9);
        // unit vectors with the advertised Delta-projection
        for (t, x) in samples {
            let norm: f64 = x.iter().map(|v| v * v).sum::<f64>();
            assert!((norm - 1.0).abs() < 1e-12);
            let tproj = (x[2] * x[2] + x[3] * x[3]).sqrt();
            assert!((tproj - t).abs() < 1e-12);
        }
    }

    #[test]
    fn qch_fit_rejects_small_samples() {
        let cf = Coframe::euclidean();
        let fp = frame_point(&cf, Point4::new(0.0, 0.0, 0.0, 0.0)).unwrap();
        let c = curvature(&fp);
        assert!(qch_fit(&c, Acs::JBar, 5).is_err());
        assert!(qch_fit(&c, Acs::JBar, 20).is_ok());
    }
}
