//! End-to-end geometric identities on the three families: the generic
//! coframe pipeline against every closed form the constructions promise.

use qchlab::families::{build, default_spec, FamilyTag};
use qchlab::field::EvalCache;
use qchlab::forms::{codifferential, hodge_star, sd_asd_split};
use qchlab::frame::{connection_via_cartan, curvature, frame_point, ricci_eigenstructure};
use qchlab::hermitian::{
    conformal_foliation_defect, gray_hervella_residual, gray_residuals, hermitian_point,
    holomorphic_sectional, j_invariance_criterion_defect, j_invariance_residual, kappa,
    nijenhuis_residual, nullity_curvature_residual, phi_bar_mat, psi_bar_mat, qch_fit, ricci_star,
    sd_asd_norms, Acs,
};
use qchlab::point::Point4;

fn sample_box(b: qchlab::Box4, n: usize) -> Vec<Point4> {
    // deterministic scattered samples inside the box
    (0..n)
        .map(|s| {
            let fr = |k: f64| ((s as f64 * k + 0.37) % 1.0).abs();
            let lerp = |r: [f64; 2], u: f64| r[0] + (r[1] - r[0]) * (0.05 + 0.9 * u);
            Point4::new(
                lerp(b.x, fr(0.381966)),
                lerp(b.y, fr(0.618033)),
                lerp(b.z, fr(0.5545497)),
                lerp(b.t, fr(0.30902)),
            )
        })
        .collect()
}

#[test]
fn thm1_nabla_omega_and_lee_structure() {
    let g = build(&default_spec(FamilyTag::Thm1), 1e-8).unwrap();
    for p in sample_box(g.box4, 12) {
        let fp = frame_point(&g.coframe, p).unwrap();
        let hp = hermitian_point(&fp, Acs::J);
        let alpha = hp.alpha(&fp).unwrap();
        let alpha_closed = g.alpha.value(p).unwrap();
        assert!(
            (alpha.v - alpha_closed).abs() < 1e-10,
            "alpha {} vs closed {} at {p}",
            alpha.v,
            alpha_closed
        );
        // two-term structure of nabla Omega
        assert!(hp.structure_residual(alpha.v) < 1e-10);
        // delta Omega = -2 alpha theta3
        for j in 0..4 {
            let want = if j == 2 { -2.0 * alpha_closed } else { 0.0 };
            assert!(
                (hp.delta_omega[j].v - want).abs() < 1e-10,
                "delta Omega component {j} = {} want {want}",
                hp.delta_omega[j].v
            );
        }
        // theta = -alpha theta4
        for j in 0..4 {
            let want = if j == 3 { -alpha_closed } else { 0.0 };
            assert!((hp.lee[j].v - want).abs() < 1e-10);
        }
        // delta theta = -alpha^2 and kappa = tau
        assert!(
            (hp.delta_theta + alpha_closed * alpha_closed).abs() < 1e-9,
            "delta theta {} vs {}",
            hp.delta_theta,
            -alpha_closed * alpha_closed
        );
        // opposite structure is parallel: alpha extraction must refuse
        let hpb = hermitian_point(&fp, Acs::JBar);
        assert!(hpb.alpha(&fp).is_err());
        // and its Lee form vanishes
        for j in 0..4 {
            assert!(hpb.lee[j].v.abs() < 1e-10);
        }
    }
}

#[test]
fn thm1_codifferential_forms_route() {
    let g = build(&default_spec(FamilyTag::Thm1), 1e-8).unwrap();
    for p in sample_box(g.box4, 6) {
        let mut cache = EvalCache::new(p);
        let vals = g.delta_omega_form.eval_with(&mut cache).unwrap();
        // compare against -2 alpha theta3 in coordinates
        let a = g.alpha.value(p).unwrap();
        let th3 = g.coframe.thetas[2].eval(p).unwrap();
        for mu in 0..4 {
            let want = -2.0 * a * th3[mu];
            assert!(
                (vals[mu] - want).abs() < 1e-9,
                "delta Omega (forms) coord {mu}: {} want {want} at {p}",
                vals[mu]
            );
        }
        // delta theta via forms: theta = -alpha theta4, delta theta = -alpha^2
        let theta_form = g.coframe.thetas[3].scale(&g.alpha.neg());
        let dtheta = codifferential(&theta_form, &g.coframe.fd, 1.0).unwrap();
        let v = dtheta.eval(p).unwrap()[0];
        assert!(
            (v + a * a).abs() < 1e-9,
            "delta theta (forms) {v} want {} at {p}",
            -a * a
        );
    }
}

#[test]
fn thm1_curvature_conclusions() {
    let g = build(&default_spec(FamilyTag::Thm1), 1e-8).unwrap();
    for p in sample_box(g.box4, 10) {
        let fp = frame_point(&g.coframe, p).unwrap();
        let c = curvature(&fp);
        // tau = -8/z^2 for h = 1
        let want_tau = -8.0 / (p.z * p.z);
        assert!(
            (c.tau - want_tau).abs() < 1e-9,
            "tau {} want {want_tau} at {p}",
            c.tau
        );
        // Ricci eigenstructure: frame-diagonal, E3/E4 null, E1/E2 at tau/2
        let (_evs, off) = ricci_eigenstructure(&c);
        assert!(off < 1e-9, "off-diagonal Ricci {off}");
        assert!((c.ricci[0][0] - want_tau / 2.0).abs() < 1e-9);
        assert!((c.ricci[1][1] - want_tau / 2.0).abs() < 1e-9);
        assert!(c.ricci[2][2].abs() < 1e-9);
        assert!(c.ricci[3][3].abs() < 1e-9);

        // J-invariant Ricci, rho* = rho, universal trace identity
        assert!(j_invariance_residual(&c, Acs::J) < 1e-9);
        let (rs, _) = ricci_star(&c, Acs::J);
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((rs[i][j] - c.ricci[i][j]).abs());
            }
        }
        assert!(worst < 1e-9, "rho* deviates from rho by {worst}");
        assert!(gray_hervella_residual(&c, Acs::J) < 1e-9);
        assert!(gray_hervella_residual(&c, Acs::JBar) < 1e-9);

        // kappa = tau (zero defect) via the Lee form of J
        let hp = hermitian_point(&fp, Acs::J);
        let kap = kappa(&c, &hp);
        assert!((kap - c.tau).abs() < 1e-9, "kappa {kap} vs tau {}", c.tau);
        assert!(j_invariance_criterion_defect(&c, Acs::J, kap) < 1e-9);

        // first Gray condition and semi-symmetry
        let (g1, g2, g3) = gray_residuals(&c, Acs::J);
        assert!(g1 < 1e-9, "G1 {g1}");
        assert!(g2 < 1e-9, "G2 {g2}");
        assert!(g3 < 1e-9, "G3 {g3}");
        let (r3, r4) = nullity_curvature_residual(&c);
        assert!(r3 < 1e-9 && r4 < 1e-9, "R(.,.)E3 {r3}, R(.,.)E4 {r4}");

        // integrability of both structures
        assert!(nijenhuis_residual(&fp, Acs::J) < 1e-9);
        assert!(nijenhuis_residual(&fp, Acs::JBar) < 1e-9);

        // quartic law for the opposite Kahler structure
        let fit = qch_fit(&c, Acs::JBar, 24).unwrap();
        assert!(fit.residual < 1e-8, "QCH residual {}", fit.residual);
        // spot values: K(E1) = a, K(E3) = a + b + c
        let ke1 = holomorphic_sectional(&c, Acs::JBar, [1.0, 0.0, 0.0, 0.0]);
        let ke3 = holomorphic_sectional(&c, Acs::JBar, [0.0, 0.0, 1.0, 0.0]);
        assert!((ke1 - fit.a).abs() < 1e-8);
        assert!((ke3 - (fit.a + fit.b + fit.c)).abs() < 1e-8);
    }
}

#[test]
fn thm1_connection_identities_and_brackets() {
    let g = build(&default_spec(FamilyTag::Thm1), 1e-8).unwrap();
    for p in sample_box(g.box4, 10) {
        let fp = frame_point(&g.coframe, p).unwrap();
        let hp = hermitian_point(&fp, Acs::J);
        let alpha = hp.alpha(&fp).unwrap();
        let a = alpha.v;
        let e_ln = |i: usize| fp.dir(i, alpha) / a;
        let gamma = |i: usize, k: usize, j: usize| fp.gamma(i - 1, k - 1, j - 1);

        // connection identities, with one-based frame indices
        // (a) G^3_11 = G^3_22 = E3 ln a
        let e3ln = e_ln(2);
        assert!((gamma(3, 1, 1) - e3ln).abs() < 1e-10);
        assert!((gamma(3, 2, 2) - e3ln).abs() < 1e-10);
        // (b) G^3_44 = G^4_21 = -G^4_12 = -E3 ln a
        assert!((gamma(3, 4, 4) + e3ln).abs() < 1e-10);
        assert!((gamma(4, 2, 1) + e3ln).abs() < 1e-10);
        assert!((gamma(4, 1, 2) - e3ln).abs() < 1e-10);
        // (c) G^3_21 = -G^3_12, G^4_11 = G^4_22
        assert!((gamma(3, 2, 1) + gamma(3, 1, 2)).abs() < 1e-10);
        assert!((gamma(4, 1, 1) - gamma(4, 2, 2)).abs() < 1e-10);
        // (d) -G^3_21 + G^4_22 = a
        assert!((-gamma(3, 2, 1) + gamma(4, 2, 2) - a).abs() < 1e-10);
        // (e) G^4_33 = -E4 ln a + a
        assert!((gamma(4, 3, 3) + e_ln(3) - a).abs() < 1e-10);
        // the two mixed coefficients tied to the planar log-derivatives
        assert!((gamma(4, 1, 3) + e_ln(1)).abs() < 1e-10);
        assert!((gamma(4, 2, 3) - e_ln(0)).abs() < 1e-10);
        // nullity foliation: E3 alpha = 0, vanishing set, half-alpha set
        assert!(fp.dir(2, alpha).abs() < 1e-10);
        for (i, k, j) in [(3, 1, 1), (3, 2, 2), (3, 4, 4), (4, 2, 1), (4, 1, 2)] {
            assert!(gamma(i, k, j).abs() < 1e-10);
        }
        assert!((-gamma(3, 2, 1) - a / 2.0).abs() < 1e-10);
        assert!((gamma(3, 1, 2) - a / 2.0).abs() < 1e-10);
        assert!((gamma(4, 1, 1) - a / 2.0).abs() < 1e-10);
        assert!((gamma(4, 2, 2) - a / 2.0).abs() < 1e-10);
        assert!((gamma(4, 3, 3) - a / 2.0).abs() < 1e-10);
        // totally geodesic: nabla over the foliation stays in it
        for up in 0..2 {
            for kk in 2..4 {
                for jj in 2..4 {
                    assert!(fp.gamma(up, kk, jj).abs() < 1e-10);
                }
            }
        }
        // E4 ln a = a/2 (family 1 only), near-exact
        assert!((e_ln(3) - a / 2.0).abs() < 1e-11, "E4 ln a defect");

        // E1 ln a = -k/z, E2 ln a = -m/z (two derivative routes)
        let kv = g.prof_k.value(p).unwrap();
        let mv = g.prof_m.value(p).unwrap();
        assert!((e_ln(0) + kv / p.z).abs() < 1e-10);
        assert!((e_ln(1) + mv / p.z).abs() < 1e-10);

        // bracket relations
        let br = |i: usize, j: usize, k: usize| fp.brackets[i - 1][j - 1][k - 1].v;
        // [E1,E4] = -a/2 E1 + E2 ln a E3
        assert!((br(1, 4, 1) + a / 2.0).abs() < 1e-10);
        assert!(br(1, 4, 2).abs() < 1e-10);
        assert!((br(1, 4, 3) - e_ln(1)).abs() < 1e-10);
        assert!(br(1, 4, 4).abs() < 1e-10);
        // [E2,E4] = -a/2 E2 - E1 ln a E3
        assert!((br(2, 4, 2) + a / 2.0).abs() < 1e-10);
        assert!((br(2, 4, 3) + e_ln(0)).abs() < 1e-10);
        // [E1,E3] = -E2 ln a E4
        assert!((br(1, 3, 4) + e_ln(1)).abs() < 1e-10);
        assert!(br(1, 3, 1).abs() < 1e-10 && br(1, 3, 2).abs() < 1e-10);
        // [E2,E3] = E1 ln a E4
        assert!((br(2, 3, 4) - e_ln(0)).abs() < 1e-10);
        // [E3,E4] = -(-E4 ln a + a) E3
        assert!((br(3, 4, 3) + (-e_ln(3) + a)).abs() < 1e-10);
        // [E1,E2]: E3-component is a, E4-component 0
        assert!((br(1, 2, 3) - a).abs() < 1e-10);
        assert!(br(1, 2, 4).abs() < 1e-10);

        // independent connection route agrees
        let gam2 = connection_via_cartan(&g.coframe, &fp).unwrap();
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for k in 0..4 {
                for j in 0..4 {
                    worst = worst.max((gam2[i][k][j] - fp.gamma(i, k, j)).abs());
                }
            }
        }
        assert!(worst < 1e-9, "Cartan-Koszul disagreement {worst}");
    }
}

#[test]
fn thm1_coframe_differentials() {
    // the structure expansions of d theta_i, coefficient-wise on the frame
    let g = build(&default_spec(FamilyTag::Thm1), 1e-8).unwrap();
    for p in sample_box(g.box4, 8) {
        let fp = frame_point(&g.coframe, p).unwrap();
        let hp = hermitian_point(&fp, Acs::J);
        let alpha = hp.alpha(&fp).unwrap();
        let a = alpha.v;
        let e_ln = |i: usize| fp.dir(i, alpha) / a;
        let ev = fp.frame_vectors();
        let mut cache = EvalCache::new(p);
        let pair = |form: &qchlab::forms::KForm, cache: &mut EvalCache, i: usize, j: usize| {
            let vals = form.eval_with(cache).unwrap();
            qchlab::forms::apply_values(2, &vals, &[ev[i], ev[j]])
        };
        let gamma = |i: usize, k: usize, j: usize| fp.gamma(i - 1, k - 1, j - 1);

        // d theta1 = G^2_11 th12 + (a/2) th14
        let d1 = &g.coframe.d_thetas[0];
        assert!((pair(d1, &mut cache, 0, 1) - gamma(2, 1, 1)).abs() < 1e-10);
        assert!((pair(d1, &mut cache, 0, 3) - a / 2.0).abs() < 1e-10);
        assert!(pair(d1, &mut cache, 0, 2).abs() < 1e-10);
        assert!(pair(d1, &mut cache, 1, 2).abs() < 1e-10);
        assert!(pair(d1, &mut cache, 1, 3).abs() < 1e-10);
        assert!(pair(d1, &mut cache, 2, 3).abs() < 1e-10);
        // d theta2 = -G^1_22 th12 + (a/2) th24
        let d2 = &g.coframe.d_thetas[1];
        assert!((pair(d2, &mut cache, 0, 1) + gamma(1, 2, 2)).abs() < 1e-10);
        assert!((pair(d2, &mut cache, 1, 3) - a / 2.0).abs() < 1e-10);
        // d theta3 = -a th12 - E2lna th14 + E1lna th24 + (-E4lna + a) th34
        let d3 = &g.coframe.d_thetas[2];
        assert!((pair(d3, &mut cache, 0, 1) + a).abs() < 1e-10);
        assert!((pair(d3, &mut cache, 0, 3) + e_ln(1)).abs() < 1e-10);
        assert!((pair(d3, &mut cache, 1, 3) - e_ln(0)).abs() < 1e-10);
        assert!((pair(d3, &mut cache, 2, 3) - (-e_ln(3) + a)).abs() < 1e-10);
        assert!(pair(d3, &mut cache, 0, 2).abs() < 1e-10);
        assert!(pair(d3, &mut cache, 1, 2).abs() < 1e-10);
        // d theta4 = E2lna th13 - E1lna th23
        let d4 = &g.coframe.d_thetas[3];
        assert!((pair(d4, &mut cache, 0, 2) - e_ln(1)).abs() < 1e-10);
        assert!((pair(d4, &mut cache, 1, 2) + e_ln(0)).abs() < 1e-10);
        for (i, j) in [(0, 1), (0, 3), (1, 3), (2, 3)] {
            assert!(pair(d4, &mut cache, i, j).abs() < 1e-10);
        }
    }
}

#[test]
fn thm1_lee_curl_and_lck_certificate() {
    let g = build(&default_spec(FamilyTag::Thm1), 1e-8).unwrap();
    let mut max_dtheta = 0.0_f64;
    for p in sample_box(g.box4, 16) {
        let fp = frame_point(&g.coframe, p).unwrap();
        let hp = hermitian_point(&fp, Acs::J);
        let alpha = hp.alpha(&fp).unwrap();
        // d theta is anti-self-dual in the J orientation
        let (n, nsd, _nasd) = sd_asd_norms(&hp.d_theta, Acs::J.orientation());
        assert!(nsd < 1e-10, "self-dual residual {nsd}");
        max_dtheta = max_dtheta.max(n);
        // structure: d theta = -(E2 a) PhiBar - (E1 a) PsiBar
        let e1a = fp.dir(0, alpha);
        let e2a = fp.dir(1, alpha);
        let phb = phi_bar_mat();
        let psb = psi_bar_mat();
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                let want = -(e2a * phb[i][j] + e1a * psb[i][j]);
                worst = worst.max((hp.d_theta[i][j] - want).abs());
            }
        }
        assert!(worst < 1e-10, "d theta structure residual {worst}");
        // d Omega = 2 theta ^ Omega (evaluated on frame triples)
        let ev = fp.frame_vectors();
        let mut cache = EvalCache::new(p);
        let dom = g.d_omega.eval_with(&mut cache).unwrap();
        let w = Acs::J.omega();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let lhs = qchlab::forms::apply_values(3, &dom, &[ev[i], ev[j], ev[k]]);
                    let rhs = 2.0
                        * (hp.lee[i].v * w[j][k] - hp.lee[j].v * w[i][k] + hp.lee[k].v * w[i][j]);
                    assert!(
                        (lhs - rhs).abs() < 1e-9,
                        "d Omega vs 2 theta^Omega at ({i},{j},{k}): {lhs} vs {rhs}"
                    );
                }
            }
        }
    }
    // with non-constant H the Lee form has genuine curl
    assert!(max_dtheta > 1e-3, "max |d theta| = {max_dtheta}");
}

#[test]
fn thm1_kaehler_form_of_opposite_structure_is_closed() {
    let g = build(&default_spec(FamilyTag::Thm1), 1e-8).unwrap();
    for p in sample_box(g.box4, 12) {
        let vals = g.d_omega_bar.eval(p).unwrap();
        for v in vals {
            assert!(v.abs() < 1e-10, "d OmegaBar component {v} at {p}");
        }
    }
}

#[test]
fn thm2_conclusions() {
    let g = build(&default_spec(FamilyTag::Thm2), 1e-12).unwrap();
    let mut max_defect = 0.0_f64;
    let mut max_g1 = 0.0_f64;
    let mut max_e4 = 0.0_f64;
    for p in sample_box(g.box4, 12) {
        let fp = frame_point(&g.coframe, p).unwrap();
        let c = curvature(&fp);
        let hp = hermitian_point(&fp, Acs::J);
        let alpha = hp.alpha(&fp).unwrap();
        let ac = g.alpha.value(p).unwrap();
        assert!((alpha.v - ac).abs() < 1e-10);
        // Kahler opposite
        for v in g.d_omega_bar.eval(p).unwrap() {
            assert!(v.abs() < 1e-10);
        }
        // Lee form theta = -tan(z/2) theta4
        for j in 0..4 {
            let want = if j == 3 { -ac } else { 0.0 };
            assert!((hp.lee[j].v - want).abs() < 1e-10);
        }
        assert!(nijenhuis_residual(&fp, Acs::J) < 1e-10);
        assert!(nijenhuis_residual(&fp, Acs::JBar) < 1e-10);
        assert!(j_invariance_residual(&c, Acs::J) < 1e-9);
        let kap = kappa(&c, &hp);
        assert!(j_invariance_criterion_defect(&c, Acs::J, kap) < 1e-9);
        max_defect = max_defect.max((c.tau - kap).abs());
        let (g1, g2, g3) = gray_residuals(&c, Acs::J);
        assert!(g2 < 1e-9, "G2 {g2}");
        assert!(g3 < 1e-9, "G3 {g3}");
        max_g1 = max_g1.max(g1);
        // conformal foliation
        let cd = conformal_foliation_defect(&fp);
        assert!(cd < 1e-9, "conformal foliation defect {cd}");
        // QCH quartic law
        let fit = qch_fit(&c, Acs::JBar, 24).unwrap();
        assert!(fit.residual < 1e-8, "QCH residual {}", fit.residual);
        // E4 ln a - a/2 does not vanish here
        let e4 = fp.dir(3, alpha) / alpha.v - alpha.v / 2.0;
        max_e4 = max_e4.max(e4.abs());
        // Gray-Hervella universal identity
        assert!(gray_hervella_residual(&c, Acs::J) < 1e-9);
        // rho* is symmetric (Hermitian with J-invariant Ricci)
        let (rs, _) = ricci_star(&c, Acs::J);
        for i in 0..4 {
            for j in 0..4 {
                assert!((rs[i][j] - rs[j][i]).abs() < 1e-9);
            }
        }
    }
    assert!(
        max_defect > 0.01,
        "zero defect unexpectedly small: {max_defect}"
    );
    assert!(max_g1 > 0.01, "G1 unexpectedly small: {max_g1}");
    assert!(max_e4 > 0.01, "E4 ln a - a/2 unexpectedly small: {max_e4}");
}

#[test]
fn thm3_conclusions() {
    let g = build(&default_spec(FamilyTag::Thm3), 1e-9).unwrap();
    for p in sample_box(g.box4, 10) {
        let fp = frame_point(&g.coframe, p).unwrap();
        let c = curvature(&fp);
        let hp = hermitian_point(&fp, Acs::J);
        let alpha = hp.alpha(&fp).unwrap();
        let ac = g.alpha.value(p).unwrap();
        assert!((alpha.v - ac).abs() < 1e-9, "alpha {} vs {}", alpha.v, ac);
        for v in g.d_omega_bar.eval(p).unwrap() {
            assert!(v.abs() < 1e-9);
        }
        // theta = coth(z/2) theta4 pointwise (alpha = -coth(z/2))
        let coth_half = (p.z / 2.0).cosh() / (p.z / 2.0).sinh();
        for j in 0..4 {
            let want = if j == 3 { coth_half } else { 0.0 };
            assert!(
                (hp.lee[j].v - want).abs() < 1e-9,
                "lee[{j}] = {} want {want}",
                hp.lee[j].v
            );
        }
        assert!(nijenhuis_residual(&fp, Acs::J) < 1e-9);
        assert!(nijenhuis_residual(&fp, Acs::JBar) < 1e-9);
        assert!(j_invariance_residual(&c, Acs::J) < 1e-8);
        let (_, g2, g3) = gray_residuals(&c, Acs::J);
        assert!(g2 < 1e-8, "G2 {g2}");
        assert!(g3 < 1e-8, "G3 {g3}");
        let fit = qch_fit(&c, Acs::JBar, 24).unwrap();
        assert!(fit.residual < 1e-7, "QCH residual {}", fit.residual);
        assert!(gray_hervella_residual(&c, Acs::J) < 1e-8);
    }
}

#[test]
fn hodge_star_and_split_on_family_forms() {
    let g = build(&default_spec(FamilyTag::Thm1), 1e-8).unwrap();
    let fd = &g.coframe.fd;
    // ** = id on 2-forms
    let ss = hodge_star(&hodge_star(&g.omega_bar, fd, 1.0), fd, 1.0);
    for p in sample_box(g.box4, 6) {
        let orig = g.omega_bar.eval(p).unwrap();
        let round = ss.eval(p).unwrap();
        for (a, b) in orig.iter().zip(&round) {
            assert!((a - b).abs() < 1e-12, "**: {a} vs {b}");
        }
        // Omega self-dual, OmegaBar anti-self-dual in the J orientation
        let so = hodge_star(&g.omega, fd, 1.0).eval(p).unwrap();
        let oo = g.omega.eval(p).unwrap();
        for (a, b) in so.iter().zip(&oo) {
            assert!((a - b).abs() < 1e-11);
        }
        let sb = hodge_star(&g.omega_bar, fd, 1.0).eval(p).unwrap();
        let ob = g.omega_bar.eval(p).unwrap();
        for (a, b) in sb.iter().zip(&ob) {
            assert!((a + b).abs() < 1e-11);
        }
    }
    // split returns (Omega, 0) for Omega
    let split = sd_asd_split(&g.omega, fd, 1.0).unwrap();
    let p = g.box4.center();
    for v in split.asd.eval(p).unwrap() {
        assert!(v.abs() < 1e-11);
    }
    for (a, b) in split
        .sd
        .eval(p)
        .unwrap()
        .iter()
        .zip(&g.omega.eval(p).unwrap())
    {
        assert!((a - b).abs() < 1e-11);
    }
}

#[test]
fn thm2_nonconstant_profile_conclusions() {
    // non-constant H activates the planar derivative couplings l2, n2
    let g = build(&qchlab::families::thm2_nonconstant_spec(), 1e-9).unwrap();
    let mut max_dtheta = 0.0_f64;
    for p in sample_box(g.box4, 10) {
        let fp = frame_point(&g.coframe, p).unwrap();
        let c = curvature(&fp);
        let hp = hermitian_point(&fp, Acs::J);
        let alpha = hp.alpha(&fp).unwrap();
        assert!((alpha.v - g.alpha.value(p).unwrap()).abs() < 1e-9);
        for v in g.d_omega_bar.eval(p).unwrap() {
            assert!(v.abs() < 1e-9, "d OmegaBar {v}");
        }
        assert!(nijenhuis_residual(&fp, Acs::J) < 1e-9);
        assert!(nijenhuis_residual(&fp, Acs::JBar) < 1e-9);
        assert!(j_invariance_residual(&c, Acs::J) < 1e-8);
        let (_, g2, _) = gray_residuals(&c, Acs::J);
        assert!(g2 < 1e-8, "G2 {g2}");
        let fit = qch_fit(&c, Acs::JBar, 24).unwrap();
        assert!(fit.residual < 1e-7, "QCH residual {}", fit.residual);
        assert!(conformal_foliation_defect(&fp) < 1e-8);
        // Lee curl: anti-self-dual, now with genuine planar contributions
        let (n, nsd, _) = sd_asd_norms(&hp.d_theta, Acs::J.orientation());
        assert!(nsd < 1e-9, "self-dual residual {nsd}");
        max_dtheta = max_dtheta.max(n);
        // E1 alpha and E2 alpha through both derivative routes
        let ac = g.alpha.eval_jet2(p).unwrap().lower();
        for i in 0..2 {
            assert!((fp.dir(i, ac) - fp.dir(i, alpha)).abs() < 1e-9);
        }
    }
    assert!(max_dtheta > 1e-3, "max |d theta| = {max_dtheta}");
}

#[test]
fn thm1_nonconstant_h_scalar_curvature() {
    // h = sqrt(1 + 0.3 cos x cos y) with ln H = (x^2+y^2)/2 - 0.3 cos x cos y:
    // Delta ln H = 2 + 0.6 cos x cos y = 2 h^2, so the family closes with a
    // genuinely varying planar metric and a non-trivial curvature profile.
    use qchlab::families::FamilySpec;
    use qchlab::field::Field;
    use qchlab::point::Axis;

    let cxy = Field::x().cos() * Field::y().cos();
    let h = (1.0 + 0.3 * &cxy).sqrt();
    let u = (Field::x() * Field::x() + Field::y() * Field::y()) / 2.0 - 0.3 * &cxy;
    let spec = FamilySpec::new(FamilyTag::Thm1, h.clone(), u.exp(), u);
    let g = build(&spec, 1e-10).unwrap();

    let ln_h = h.ln();
    let lap_ln_h = ln_h.differentiate(Axis::X).differentiate(Axis::X)
        + ln_h.differentiate(Axis::Y).differentiate(Axis::Y);

    for p in sample_box(g.box4, 10) {
        let fp = frame_point(&g.coframe, p).unwrap();
        let c = curvature(&fp);
        let lap = lap_ln_h.value(p).unwrap();
        let hv = h.value(p).unwrap();
        assert!(
            lap.abs() > 1e-3,
            "test must exercise a non-flat planar factor"
        );
        let want_tau = -2.0 * lap / (p.z * p.z * hv * hv) - 8.0 / (p.z * p.z);
        assert!(
            (c.tau - want_tau).abs() < 1e-9,
            "tau {} want {want_tau} at {p}",
            c.tau
        );
        // the planar legs still share the eigenvalue tau/2; the nullity
        // legs stay null
        assert!((c.ricci[0][0] - c.tau / 2.0).abs() < 1e-9);
        assert!((c.ricci[1][1] - c.tau / 2.0).abs() < 1e-9);
        assert!(c.ricci[2][2].abs() < 1e-9);
        assert!(c.ricci[3][3].abs() < 1e-9);
        let (_evs, off) = ricci_eigenstructure(&c);
        assert!(off < 1e-9);

        // the full conclusion set survives a varying h
        let hp = hermitian_point(&fp, Acs::J);
        let alpha = hp.alpha(&fp).unwrap();
        assert!((alpha.v - g.alpha.value(p).unwrap()).abs() < 1e-10);
        assert!(hp.structure_residual(alpha.v) < 1e-9);
        let kap = kappa(&c, &hp);
        assert!((kap - c.tau).abs() < 1e-9);
        let (g1, _, _) = gray_residuals(&c, Acs::J);
        assert!(g1 < 1e-9);
        let (r3, r4) = nullity_curvature_residual(&c);
        assert!(r3 < 1e-9 && r4 < 1e-9);
        assert!(nijenhuis_residual(&fp, Acs::J) < 1e-9);
        assert!(nijenhuis_residual(&fp, Acs::JBar) < 1e-9);
        for v in g.d_omega_bar.eval(p).unwrap() {
            assert!(v.abs() < 1e-9);
        }
        let fit = qch_fit(&c, Acs::JBar, 24).unwrap();
        assert!(fit.residual < 1e-8);
    }
}
