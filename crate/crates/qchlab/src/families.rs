//! The three explicit coframe families over a planar profile pair (h, H).
//!
//! Each family lives on U x N with N a z-strip, carries theta1 = f dx,
//! theta2 = f dy with a family-specific scale f, and closes into a geometry
//! exactly when ln H satisfies its Liouville-type profile equation:
//!
//!   family 1:  Delta ln H = 2 h^2            (z < 0,      f = z h,          alpha = -2/z)
//!   family 2:  Delta ln H = h^2/2 - H^2      (0 < z < pi, f = cos(z/2) h,   alpha = tan(z/2))
//!   family 3:  Delta ln H = h^2/2 + H^2      (z < 0,      f = sinh(z/2) h,  alpha = -coth(z/2))
//!
//! The constructors assemble the one-forms of each construction verbatim,
//! check the profile equation on a planar sample, and hand back the coframe
//! together with the closed-form invariants the verification suites compare
//! against.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::forms::{codifferential, KForm};
use crate::frame::{Coframe, Locus};
use crate::point::{Axis, Box4, Point4};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyTag {
    Thm1,
    Thm2,
    Thm3,
}

impl FamilyTag {
    /// Coefficients (c1, c2) of the profile equation
    /// Delta u = c1 h^2 + c2 e^{2u}.
    pub fn pde_coefficients(self) -> (f64, f64) {
        match self {
            FamilyTag::Thm1 => (2.0, 0.0),
            FamilyTag::Thm2 => (0.5, -1.0),
            FamilyTag::Thm3 => (0.5, 1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::Thm1 => "thm1",
            FamilyTag::Thm2 => "thm2",
            FamilyTag::Thm3 => "thm3",
        }
    }

    /// Default sampling box for the family chart.
    pub fn default_box(self) -> Box4 {
        let two_pi = 2.0 * std::f64::consts::PI;
        match self {
            FamilyTag::Thm1 => Box4 {
                x: [-1.0, 1.0],
                y: [-1.0, 1.0],
                z: [-3.0, -0.5],
                // the coframe depends on t through half-angles: period 4 pi
                t: [0.0, 2.0 * two_pi],
            },
            FamilyTag::Thm2 => Box4 {
                x: [-1.0, 1.0],
                y: [-1.0, 1.0],
                z: [0.3, std::f64::consts::PI - 0.3],
                t: [0.0, two_pi],
            },
            FamilyTag::Thm3 => Box4 {
                x: [-1.0, 1.0],
                y: [-1.0, 1.0],
                z: [-3.0, -0.5],
                t: [0.0, two_pi],
            },
        }
    }

    fn chart_ok(self, zr: [f64; 2]) -> bool {
        match self {
            FamilyTag::Thm1 | FamilyTag::Thm3 => zr[1] < 0.0,
            FamilyTag::Thm2 => zr[0] > 0.0 && zr[1] < std::f64::consts::PI,
        }
    }

    fn locus(self, margin: f64) -> Locus {
        match self {
            FamilyTag::Thm1 | FamilyTag::Thm3 => Locus::z_values(&[0.0], margin),
            FamilyTag::Thm2 => Locus::z_values(&[0.0, std::f64::consts::PI], margin),
        }
    }
}

/// Input data of a family: the planar profiles and the sampling box.
pub struct FamilySpec {
    pub tag: FamilyTag,
    pub h: Field,
    pub big_h: Field,
    pub ln_big_h: Field,
    pub box4: Box4,
    pub singular_margin: f64,
}

impl FamilySpec {
    pub fn new(tag: FamilyTag, h: Field, big_h: Field, ln_big_h: Field) -> FamilySpec {
        FamilySpec {
            tag,
            h,
            big_h,
            ln_big_h,
            box4: tag.default_box(),
            singular_margin: 0.05,
        }
    }
}

/// A named residual that should vanish identically on the family.
pub struct NamedResidual {
    pub name: &'static str,
    pub field: Field,
}

/// A constructed family geometry: the coframe plus every closed-form
/// quantity the suites compare the generic pipeline against.
pub struct Geometry {
    pub tag: FamilyTag,
    pub coframe: Coframe,
    pub box4: Box4,
    /// Closed-form alpha of the family (positive on the chart).
    pub alpha: Field,
    /// theta3 = beta dt - ... for families 2 and 3; family 1 has -z/2.
    pub beta: Option<Field>,
    pub f: Field,
    pub h: Field,
    pub big_h: Field,
    pub ln_big_h: Field,
    pub l2: Field,
    pub n2: Field,
    /// Frame coefficient profiles: E1 = (1/f) dx + k dz + l dt,
    /// E2 = (1/f) dy + m dz + n dt.
    pub prof_k: Field,
    pub prof_l: Field,
    pub prof_m: Field,
    pub prof_n: Field,
    /// Kahler form of J and of the opposite structure, with differentials.
    pub omega: KForm,
    pub omega_bar: KForm,
    pub d_omega: KForm,
    pub d_omega_bar: KForm,
    /// delta Omega computed through the forms route (-*d*).
    pub delta_omega_form: KForm,
    /// Conformal scale of the planar part: Sum theta_i x theta_i must equal
    /// conf^2 (dx^2 + dy^2) + theta3 x theta3 + theta4 x theta4.
    pub conf: Field,
}

/// Residual field of the family's profile equation, Delta ln H - rhs.
pub fn pde_residual_field(tag: FamilyTag, h: &Field, big_h: &Field, ln_big_h: &Field) -> Field {
    let (c1, c2) = tag.pde_coefficients();
    let lap = ln_big_h.differentiate(Axis::X).differentiate(Axis::X)
        + ln_big_h.differentiate(Axis::Y).differentiate(Axis::Y);
    let rhs = Field::constant(c1) * h * h + Field::constant(c2) * big_h * big_h;
    lap - rhs
}

fn check_pde(spec: &FamilySpec, tol: f64) -> Result<()> {
    let res = pde_residual_field(spec.tag, &spec.h, &spec.big_h, &spec.ln_big_h);
    let mut worst = (0.0_f64, Point4::new(0.0, 0.0, 0.0, 0.0));
    let n = 7;
    for i in 0..n {
        for j in 0..n {
            let x = spec.box4.x[0] + (spec.box4.x[1] - spec.box4.x[0]) * i as f64 / (n - 1) as f64;
            let y = spec.box4.y[0] + (spec.box4.y[1] - spec.box4.y[0]) * j as f64 / (n - 1) as f64;
            let p = Point4::new(x, y, 0.0, 0.0);
            let v = res.value(p)?.abs();
            // h and H must be positive wherever the family is built
            for (what, fld) in [("h", &spec.h), ("H", &spec.big_h)] {
                let fv = fld.value(p)?;
                #[allow(clippy::neg_cmp_op_on_partial_ord)]
                if !(fv > 0.0) {
                    return Err(Error::Constraint {
                        what: format!("{what} must be positive on the sampled box, found {fv}"),
                        point: p,
                        residual: fv,
                    });
                }
            }
            if v > worst.0 {
                worst = (v, p);
            }
        }
    }
    if worst.0 > tol {
        return Err(Error::Constraint {
            what: format!(
                "profile equation violated for {}: |Delta ln H - rhs| = {:e} > {tol:e}",
                spec.tag.name(),
                worst.0
            ),
            point: worst.1,
            residual: worst.0,
        });
    }
    Ok(())
}

/// Build the family geometry; `pde_tol` is the tier tolerance for the
/// profile-equation pre-check.
pub fn build(spec: &FamilySpec, pde_tol: f64) -> Result<Geometry> {
    if !spec.tag.chart_ok(spec.box4.z) {
        return Err(Error::Config(format!(
            "z-range [{}, {}] is outside the chart of {}",
            spec.box4.z[0],
            spec.box4.z[1],
            spec.tag.name()
        )));
    }
    check_pde(spec, pde_tol)?;

    let x = Field::x;
    let _ = x;
    let z = Field::z();
    let t = Field::t();
    let zero = || Field::constant(0.0);
    let h = spec.h.clone();
    let big_h = spec.big_h.clone();
    let u = spec.ln_big_h.clone();

    let (l2, n2) = match spec.tag {
        FamilyTag::Thm1 | FamilyTag::Thm2 => (-u.differentiate(Axis::Y), u.differentiate(Axis::X)),
        FamilyTag::Thm3 => (u.differentiate(Axis::Y), -u.differentiate(Axis::X)),
    };

    let (f, alpha, beta, th3, th4, prof_k, prof_l, prof_m, prof_n) = match spec.tag {
        FamilyTag::Thm1 => {
            let f = &z * &h;
            let alpha = Field::constant(-2.0) / &z;
            let ct = (&t / 2.0).cos();
            let st = (&t / 2.0).sin();
            let th3 = KForm::one_form([
                &ct * &big_h + &z * &l2,
                -(&st * &big_h) + &z * &n2,
                zero(),
                -(&z / 2.0),
            ]);
            let th4 = KForm::one_form([
                -(&st * &big_h),
                -(&ct * &big_h),
                Field::constant(1.0),
                zero(),
            ]);
            let k = &st * &big_h / &f;
            let m = &ct * &big_h / &f;
            let l = ((2.0 * &ct * &big_h) / &z + 2.0 * &l2) / &f;
            let n = (-(2.0 * &st * &big_h) / &z + 2.0 * &n2) / &f;
            (f, alpha, None, th3, th4, k, l, m, n)
        }
        FamilyTag::Thm2 => {
            let f = (&z / 2.0).cos() * &h;
            let alpha = (&z / 2.0).tan();
            let beta = z.sin();
            let (ct, st) = (t.cos(), t.sin());
            let cz = z.cos();
            let th3 = KForm::one_form([
                -(&ct * &cz * &big_h + &beta * &l2),
                -(-(&st * &cz * &big_h) + &beta * &n2),
                zero(),
                beta.clone(),
            ]);
            let th4 = KForm::one_form([
                -(&st * &big_h),
                -(&ct * &big_h),
                Field::constant(1.0),
                zero(),
            ]);
            let cot = &cz / &beta;
            let k = &st * &big_h / &f;
            let m = &ct * &big_h / &f;
            let l = (&cot * &ct * &big_h + &l2) / &f;
            let n = (-(&cot * &st * &big_h) + &n2) / &f;
            (f, alpha, Some(beta), th3, th4, k, l, m, n)
        }
        FamilyTag::Thm3 => {
            let f = (&z / 2.0).sinh() * &h;
            let alpha = -((&z / 2.0).cosh() / (&z / 2.0).sinh());
            let beta = z.sinh();
            let (ct, st) = (t.cos(), t.sin());
            let chz = z.cosh();
            let th3 = KForm::one_form([
                -(-(&st * &chz * &big_h) + &beta * &l2),
                -(&ct * &chz * &big_h + &beta * &n2),
                zero(),
                beta.clone(),
            ]);
            let th4 = KForm::one_form([
                -(&ct * &big_h),
                -(&st * &big_h),
                Field::constant(1.0),
                zero(),
            ]);
            let k = &ct * &big_h / &f;
            let m = &st * &big_h / &f;
            let l = (-(&st * &chz * &big_h) + &beta * &l2) / (&f * &beta);
            let n = (&ct * &chz * &big_h + &beta * &n2) / (&f * &beta);
            (f, alpha, Some(beta), th3, th4, k, l, m, n)
        }
    };

    let th1 = KForm::one_form([f.clone(), zero(), zero(), zero()]);
    let th2 = KForm::one_form([zero(), f.clone(), zero(), zero()]);
    let locus = spec.tag.locus(spec.singular_margin);
    let coframe = Coframe::new([th1, th2, th3, th4], 1.0, locus)?;

    let t12 = coframe.thetas[0].wedge(&coframe.thetas[1])?;
    let t34 = coframe.thetas[2].wedge(&coframe.thetas[3])?;
    let omega = t12.add(&t34);
    let omega_bar = t12.sub(&t34);
    let d_omega = omega.d()?;
    let d_omega_bar = omega_bar.d()?;
    let delta_omega_form = codifferential(&omega, &coframe.fd, 1.0)?;

    Ok(Geometry {
        tag: spec.tag,
        box4: spec.box4,
        alpha,
        beta,
        conf: f.clone(),
        f,
        h,
        big_h,
        ln_big_h: u,
        l2,
        n2,
        prof_k,
        prof_l,
        prof_m,
        prof_n,
        omega,
        omega_bar,
        d_omega,
        d_omega_bar,
        delta_omega_form,
        coframe,
    })
}

/// The ODE relations among the frame coefficient profiles
/// (k, l, m, n, f), one residual field per relation.
pub fn side_conditions(g: &Geometry) -> Vec<NamedResidual> {
    let dz = |f: &Field| f.differentiate(Axis::Z);
    let dt = |f: &Field| f.differentiate(Axis::T);
    let z = Field::z();
    let (k, l, m, n, f) = (&g.prof_k, &g.prof_l, &g.prof_m, &g.prof_n, &g.f);
    match g.tag {
        FamilyTag::Thm1 => vec![
            NamedResidual {
                name: "k_z = -k/z",
                field: dz(k) + k / &z,
            },
            NamedResidual {
                name: "l_z = -l/z - 2m/z^2",
                field: dz(l) + l / &z + 2.0 * m / (&z * &z),
            },
            NamedResidual {
                name: "f_z = f/z",
                field: dz(f) - f / &z,
            },
            NamedResidual {
                name: "l_t = -k/z",
                field: dt(l) + k / &z,
            },
            NamedResidual {
                name: "2k_t = m",
                field: 2.0 * dt(k) - m,
            },
            NamedResidual {
                name: "2m_t = -k",
                field: 2.0 * dt(m) + k,
            },
            NamedResidual {
                name: "n_t = -m/z",
                field: dt(n) + m / &z,
            },
            NamedResidual {
                name: "m_z = -m/z",
                field: dz(m) + m / &z,
            },
        ],
        FamilyTag::Thm2 => {
            let half_tan = (&z / 2.0).tan() / 2.0;
            let cot = z.cos() / z.sin();
            let inv_sin2 = Field::constant(1.0) / (z.sin() * z.sin());
            vec![
                NamedResidual {
                    name: "k_z = tan(z/2) k / 2",
                    field: dz(k) - &half_tan * k,
                },
                NamedResidual {
                    name: "l_z = tan(z/2) l / 2 - m/sin^2 z",
                    field: dz(l) - &half_tan * l + m * &inv_sin2,
                },
                NamedResidual {
                    name: "f_z = -tan(z/2) f / 2",
                    field: dz(f) + &half_tan * f,
                },
                NamedResidual {
                    name: "l_t = -k cot z",
                    field: dt(l) + k * &cot,
                },
                NamedResidual {
                    name: "k_t = m",
                    field: dt(k) - m,
                },
                NamedResidual {
                    name: "m_t = -k",
                    field: dt(m) + k,
                },
                NamedResidual {
                    name: "n_t = -m cot z",
                    field: dt(n) + m * &cot,
                },
                NamedResidual {
                    name: "m_z = tan(z/2) m / 2",
                    field: dz(m) - &half_tan * m,
                },
            ]
        }
        FamilyTag::Thm3 => {
            let half_coth = ((&z / 2.0).cosh() / (&z / 2.0).sinh()) / 2.0;
            let coth = z.cosh() / z.sinh();
            let inv_sinh2 = Field::constant(1.0) / (z.sinh() * z.sinh());
            vec![
                NamedResidual {
                    name: "k_z = -coth(z/2) k / 2",
                    field: dz(k) + &half_coth * k,
                },
                NamedResidual {
                    name: "l_z = -coth(z/2) l / 2 + m/sinh^2 z",
                    field: dz(l) + &half_coth * l - m * &inv_sinh2,
                },
                NamedResidual {
                    name: "f_z = coth(z/2) f / 2",
                    field: dz(f) - &half_coth * f,
                },
                NamedResidual {
                    name: "l_t = -k coth z",
                    field: dt(l) + k * &coth,
                },
                NamedResidual {
                    name: "k_t = -m",
                    field: dt(k) + m,
                },
                NamedResidual {
                    name: "m_t = k",
                    field: dt(m) - k,
                },
                NamedResidual {
                    name: "n_t = -m coth z",
                    field: dt(n) + m * &coth,
                },
                NamedResidual {
                    name: "m_z = -coth(z/2) m / 2",
                    field: dz(m) + &half_coth * m,
                },
            ]
        }
    }
}

/// Default closed-form profile data per family (used by tests and as the
/// harness defaults): family 1 takes h = 1, ln H = (x^2+y^2)/2; family 2
/// the constant equilibrium h = 1, H = 1/sqrt 2; family 3 a closed form
/// with h chosen to balance the profile equation on a small box.
pub fn default_spec(tag: FamilyTag) -> FamilySpec {
    let r2 = Field::x() * Field::x() + Field::y() * Field::y();
    match tag {
        FamilyTag::Thm1 => {
            let u = &r2 / 2.0;
            FamilySpec::new(tag, Field::constant(1.0), u.exp(), u)
        }
        FamilyTag::Thm2 => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            FamilySpec::new(
                tag,
                Field::constant(1.0),
                Field::constant(h),
                Field::constant(h.ln()),
            )
        }
        FamilyTag::Thm3 => {
            // Delta u = 2 must equal h^2/2 + H^2 with H = e^{r^2/2}:
            // h = sqrt(4 - 2 e^{r^2}), positive for r^2 < ln 2
            let u = &r2 / 2.0;
            let h = (Field::constant(4.0) - 2.0 * r2.exp()).sqrt();
            let mut spec = FamilySpec::new(tag, h, u.exp(), u);
            spec.box4.x = [-0.55, 0.55];
            spec.box4.y = [-0.55, 0.55];
            spec
        }
    }
}

/// A family-2 instance with non-constant H (h adjusted to keep the profile
/// equation exact): useful where constant-H degeneracies must be avoided.
pub fn thm2_nonconstant_spec() -> FamilySpec {
    let r2 = Field::x() * Field::x() + Field::y() * Field::y();
    let u = &r2 / 2.0;
    // Delta u = 2 = h^2/2 - H^2 with H = e^{r^2/2}: h = sqrt(4 + 2 e^{r^2})
    let h = (Field::constant(4.0) + 2.0 * r2.exp()).sqrt();
    FamilySpec::new(FamilyTag::Thm2, h, u.exp(), u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::frame_point;
    use approx::assert_relative_eq;

    #[test]
    fn thm1_closed_form_invariants() {
        let spec = default_spec(FamilyTag::Thm1);
        let g = build(&spec, 1e-8).unwrap();

        // l2 = -y, n2 = x for ln H = (x^2+y^2)/2
        let p = Point4::new(0.7, -0.4, -2.0, 1.3);
        assert_relative_eq!(g.l2.value(p).unwrap(), 0.4, epsilon = 1e-14);
        assert_relative_eq!(g.n2.value(p).unwrap(), 0.7, epsilon = 1e-14);

        // alpha = -2/z is 1 at z = -2
        assert_relative_eq!(g.alpha.value(p).unwrap(), 1.0, epsilon = 1e-14);

        // theta4 at the origin with H(0,0) = 1: dz - 0 dx - 1 dy
        let p0 = Point4::new(0.0, 0.0, -1.0, 0.0);
        let th4 = g.coframe.thetas[3].eval(p0).unwrap();
        assert_relative_eq!(th4[0], 0.0);
        assert_relative_eq!(th4[1], -1.0);
        assert_relative_eq!(th4[2], 1.0);
        assert_relative_eq!(th4[3], 0.0);

        // theta1 ^ theta2 = z^2 h^2 dx ^ dy
        let w = g.coframe.thetas[0].wedge(&g.coframe.thetas[1]).unwrap();
        let vals = w.eval(p).unwrap();
        assert_relative_eq!(vals[0], p.z * p.z, epsilon = 1e-12); // h = 1
        for v in &vals[1..] {
            assert_eq!(*v, 0.0);
        }

        // frame: E4 = d/dz, E3 = alpha d/dt
        let fp = frame_point(&g.coframe, p).unwrap();
        let ev = fp.frame_vectors();
        assert_relative_eq!(ev[3][2], 1.0, epsilon = 1e-13);
        for mu in [0, 1, 3] {
            assert!(ev[3][mu].abs() < 1e-13);
        }
        assert_relative_eq!(ev[2][3], 1.0, epsilon = 1e-13); // alpha = 1 at z=-2
        assert!(fp.duality_residual() < 1e-12);
    }

    #[test]
    fn thm1_metric_reproduction() {
        let spec = default_spec(FamilyTag::Thm1);
        let g = build(&spec, 1e-8).unwrap();
        let p = Point4::new(0.3, 0.6, -1.4, 2.0);
        let mut cache = crate::field::EvalCache::new(p);
        // g_{mu nu} = sum_i a_i_mu a_i_nu
        let mut gm = [[0.0; 4]; 4];
        for i in 0..4 {
            let row: Vec<f64> = (0..4)
                .map(|mu| cache.value(&g.coframe.fd.a[i][mu]).unwrap())
                .collect();
            for mu in 0..4 {
                for nu in 0..4 {
                    gm[mu][nu] += row[mu] * row[nu];
                }
            }
        }
        // stated metric form: f^2 (dx^2 + dy^2) + theta3 x theta3 + theta4 x theta4
        let f2 = cache.value(&g.conf).unwrap().powi(2);
        let th3: Vec<f64> = g.coframe.thetas[2].eval(p).unwrap();
        let th4: Vec<f64> = g.coframe.thetas[3].eval(p).unwrap();
        for mu in 0..4 {
            for nu in 0..4 {
                let mut want = th3[mu] * th3[nu] + th4[mu] * th4[nu];
                if mu == nu && mu < 2 {
                    want += f2;
                }
                assert_relative_eq!(gm[mu][nu], want, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn thm2_statement_values() {
        let spec = default_spec(FamilyTag::Thm2);
        let g = build(&spec, 1e-12).unwrap();
        let zp = std::f64::consts::FRAC_PI_2;
        let p = Point4::new(0.0, 0.0, zp, 0.0);
        // alpha = tan(z/2) = 1 at z = pi/2
        assert_relative_eq!(g.alpha.value(p).unwrap(), 1.0, epsilon = 1e-14);
        // l2 = n2 = 0 for constant H, so theta3 = dt there (sin z = 1, cos z = 0)
        let th3 = g.coframe.thetas[2].eval(p).unwrap();
        assert_relative_eq!(th3[3], 1.0, epsilon = 1e-15);
        assert!(th3[0].abs() < 1e-15 && th3[1].abs() < 1e-15);
    }

    #[test]
    fn thm3_statement_values() {
        let spec = default_spec(FamilyTag::Thm3);
        let mut spec = spec;
        spec.box4.z = [-3.0, -0.5];
        let g = build(&spec, 1e-10).unwrap();
        let p = Point4::new(0.1, -0.2, -2.0, 0.4);
        // alpha = -coth(z/2) at z = -2 is coth(1)
        let coth1 = 1.0_f64.cosh() / 1.0_f64.sinh();
        assert_relative_eq!(g.alpha.value(p).unwrap(), coth1, epsilon = 1e-13);
        // f = sinh(z/2) h: negative scale, metric positive through f^2
        let pf = Point4::new(0.0, 0.0, -2.0, 0.0);
        let fv = g.f.value(pf).unwrap();
        let h0 = g.h.value(pf).unwrap();
        assert_relative_eq!(fv, -(1.0_f64.sinh()) * h0, epsilon = 1e-13);
        let fp = frame_point(&g.coframe, p).unwrap();
        assert!(fp.duality_residual() < 1e-12);
    }

    #[test]
    fn side_conditions_vanish() {
        for tag in [FamilyTag::Thm1, FamilyTag::Thm2, FamilyTag::Thm3] {
            let spec = default_spec(tag);
            let g = build(&spec, 1e-8).unwrap();
            let b = g.box4;
            for s in 0..6 {
                let fr = s as f64 / 5.0;
                let p = Point4::new(
                    b.x[0] + (b.x[1] - b.x[0]) * fr,
                    b.y[0] + (b.y[1] - b.y[0]) * (1.0 - fr),
                    b.z[0] + (b.z[1] - b.z[0]) * (0.2 + 0.6 * fr),
                    b.t[0] + (b.t[1] - b.t[0]) * fr * 0.9,
                );
                for nr in side_conditions(&g) {
                    let v = nr.field.value(p).unwrap().abs();
                    assert!(
                        v < 1e-10,
                        "{} residual {v:e} for {} at {p}",
                        nr.name,
                        tag.name()
                    );
                }
            }
        }
    }

    #[test]
    fn pde_precondition_is_enforced() {
        // Delta(2 x^2) = 4 never equals 2 h^2 with h = 1
        let u = 2.0 * Field::x() * Field::x();
        let spec = FamilySpec::new(FamilyTag::Thm1, Field::constant(1.0), u.exp(), u);
        let err = build(&spec, 1e-8);
        assert!(matches!(err, Err(Error::Constraint { .. })));
    }

    #[test]
    fn chart_violation_is_rejected() {
        let mut spec = default_spec(FamilyTag::Thm1);
        spec.box4.z = [0.5, 1.0]; // family 1 needs z < 0
        assert!(matches!(build(&spec, 1e-8), Err(Error::Config(_))));
    }

    #[test]
    fn thm1_d_theta4_expansion() {
        // d theta4 = -cos(t/2)H/2 dt^dx - sin(t/2)H_y dy^dx
        //            + sin(t/2)H/2 dt^dy - cos(t/2)H_x dx^dy
        let spec = default_spec(FamilyTag::Thm1);
        let g = build(&spec, 1e-8).unwrap();
        let dth4 = g.coframe.thetas[3].d().unwrap();
        let p = Point4::new(0.4, -0.8, -1.5, 2.1);
        let vals = dth4.eval(p).unwrap();
        let hv = g.big_h.value(p).unwrap();
        let (hx, hy) = (
            g.big_h.eval(p, [1, 0, 0, 0]).unwrap(),
            g.big_h.eval(p, [0, 1, 0, 0]).unwrap(),
        );
        let (st, ct) = ((p.t / 2.0).sin(), (p.t / 2.0).cos());
        // basis order: (xy, xz, xt, yz, yt, zt)
        assert_relative_eq!(vals[0], st * hy - ct * hx, epsilon = 1e-12);
        assert_relative_eq!(vals[1], 0.0);
        assert_relative_eq!(vals[2], 0.5 * ct * hv, epsilon = 1e-12);
        assert_relative_eq!(vals[3], 0.0);
        assert_relative_eq!(vals[4], -0.5 * st * hv, epsilon = 1e-12);
        assert_relative_eq!(vals[5], 0.0);
    }
}
