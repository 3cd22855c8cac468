//! Exterior calculus on the chart: k-forms with scalar-field coefficients,
//! wedge product, exterior derivative, Hodge star, self-dual/anti-self-dual
//! splitting, and the codifferential (fixed here as delta = -*d* on every
//! degree, the even-dimensional convention).
//!
//! Coefficients are stored on strictly increasing coordinate index tuples in
//! lexicographic order; evaluation on other orderings carries the sign of
//! the permutation.

use crate::error::{Error, Result};
use crate::field::{EvalCache, Field};
use crate::frame::FrameData;
use crate::point::Point4;

pub const DIMS: [usize; 5] = [1, 4, 6, 4, 1];

const T0: [&[usize]; 1] = [&[]];
const T1: [&[usize]; 4] = [&[0], &[1], &[2], &[3]];
const T2: [&[usize]; 6] = [&[0, 1], &[0, 2], &[0, 3], &[1, 2], &[1, 3], &[2, 3]];
const T3: [&[usize]; 4] = [&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]];
const T4: [&[usize]; 1] = [&[0, 1, 2, 3]];

/// Strictly increasing index tuples indexing the degree-k coefficient slots.
pub fn tuples(k: usize) -> &'static [&'static [usize]] {
    match k {
        0 => &T0,
        1 => &T1,
        2 => &T2,
        3 => &T3,
        4 => &T4,
        _ => unreachable!("degree beyond chart dimension"),
    }
}

fn tuple_pos(k: usize, t: &[usize]) -> usize {
    tuples(k)
        .iter()
        .position(|cand| *cand == t)
        .expect("increasing tuple")
}

/// Sort an index list, returning the permutation sign, or None on repeats.
fn sort_sign(idx: &mut [usize]) -> Option<f64> {
    let mut sign = 1.0;
    for i in 0..idx.len() {
        for j in (i + 1..idx.len()).rev() {
            if idx[j - 1] == idx[j] {
                return None;
            }
            if idx[j - 1] > idx[j] {
                idx.swap(j - 1, j);
                sign = -sign;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

/// A differential form of degree k with field coefficients.
#[derive(Clone)]
pub struct KForm {
    k: usize,
    c: Vec<Field>,
}

impl KForm {
    pub fn zero(k: usize) -> KForm {
        KForm {
            k,
            c: vec![Field::constant(0.0); DIMS[k]],
        }
    }

    pub fn function(f: Field) -> KForm {
        KForm { k: 0, c: vec![f] }
    }

    pub fn one_form(cs: [Field; 4]) -> KForm {
        KForm { k: 1, c: cs.into() }
    }

    pub fn from_coeffs(k: usize, c: Vec<Field>) -> KForm {
        assert_eq!(c.len(), DIMS[k]);
        KForm { k, c }
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn coeffs(&self) -> &[Field] {
        &self.c
    }

    /// Coefficient on an arbitrary (not necessarily increasing) index tuple.
    pub fn coeff_signed(&self, idx: &[usize]) -> Field {
        let mut t = idx.to_vec();
        match sort_sign(&mut t) {
            None => Field::constant(0.0),
            Some(s) => {
                let f = &self.c[tuple_pos(self.k, &t)];
                if s > 0.0 {
                    f.clone()
                } else {
                    f.neg()
                }
            }
        }
    }

    pub fn scale(&self, f: &Field) -> KForm {
        KForm {
            k: self.k,
            c: self.c.iter().map(|ci| ci * f).collect(),
        }
    }

    pub fn add(&self, o: &KForm) -> KForm {
        assert_eq!(self.k, o.k);
        KForm {
            k: self.k,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &KForm) -> KForm {
        assert_eq!(self.k, o.k);
        KForm {
            k: self.k,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> KForm {
        KForm {
            k: self.k,
            c: self.c.iter().map(|a| -a).collect(),
        }
    }

    /// Graded-antisymmetric wedge product.
    pub fn wedge(&self, o: &KForm) -> Result<KForm> {
        if self.k + o.k > 4 {
            return Err(Error::DegreeOverflow(self.k, o.k));
        }
        let k = self.k + o.k;
        let mut out = vec![Field::constant(0.0); DIMS[k]];
        for (ia, ta) in tuples(self.k).iter().enumerate() {
            if self.c[ia].is_zero() {
                continue;
            }
            for (ib, tb) in tuples(o.k).iter().enumerate() {
                if o.c[ib].is_zero() {
                    continue;
                }
                let mut merged: Vec<usize> = ta.iter().chain(tb.iter()).copied().collect();
                if let Some(sign) = sort_sign(&mut merged) {
                    let pos = tuple_pos(k, &merged);
                    let prod = (&self.c[ia] * &o.c[ib]).mul(&Field::constant(sign));
                    out[pos] = out[pos].add(&prod);
                }
            }
        }
        Ok(KForm { k, c: out })
    }

    /// Exterior derivative; raises degree by one.
    pub fn d(&self) -> Result<KForm> {
        if self.k > 3 {
            return Err(Error::BadDegree {
                have: self.k,
                want: 3,
            });
        }
        let k = self.k + 1;
        let mut out = vec![Field::constant(0.0); DIMS[k]];
        for (slot, tk) in tuples(k).iter().enumerate() {
            let mut acc = Field::constant(0.0);
            for (m, &axis) in tk.iter().enumerate() {
                let rest: Vec<usize> = tk
                    .iter()
                    .enumerate()
                    .filter(|(r, _)| *r != m)
                    .map(|(_, &i)| i)
                    .collect();
                let ci = &self.c[tuple_pos(self.k, &rest)];
                let term = ci.differentiate(crate::point::Axis::from_idx(axis));
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                acc = acc.add(&term.mul(&Field::constant(sign)));
            }
            out[slot] = acc;
        }
        Ok(KForm { k, c: out })
    }

    /// Coefficient values at a point, in basis-tuple order.
    pub fn eval(&self, p: Point4) -> Result<Vec<f64>> {
        let mut cache = EvalCache::new(p);
        self.eval_with(&mut cache)
    }

    pub fn eval_with(&self, cache: &mut EvalCache) -> Result<Vec<f64>> {
        self.c.iter().map(|f| cache.value(f)).collect()
    }

    /// Evaluate the form on `k` coordinate-component vectors at a point.
    pub fn apply(&self, p: Point4, vectors: &[[f64; 4]]) -> Result<f64> {
        assert_eq!(vectors.len(), self.k);
        let vals = self.eval(p)?;
        Ok(apply_values(self.k, &vals, vectors))
    }
}

/// Evaluate coefficient values (basis order) on component vectors.
pub fn apply_values(k: usize, vals: &[f64], vectors: &[[f64; 4]]) -> f64 {
    let mut acc = 0.0;
    for (slot, t) in tuples(k).iter().enumerate() {
        if vals[slot] == 0.0 {
            continue;
        }
        // determinant of the k x k minor with rows = tuple axes, cols = vectors
        acc += vals[slot] * minor_det(t, vectors);
    }
    acc
}

/// Determinant of the minor with rows = axis indices, columns = vectors.
fn minor_det(axes: &[usize], vectors: &[[f64; 4]]) -> f64 {
    match axes.len() {
        0 => 1.0,
        1 => vectors[0][axes[0]],
        2 => vectors[0][axes[0]] * vectors[1][axes[1]] - vectors[1][axes[0]] * vectors[0][axes[1]],
        n => {
            // expand along the first axis row
            let mut acc = 0.0;
            let rest = &axes[1..];
            for c in 0..n {
                let sub: Vec<[f64; 4]> = vectors
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != c)
                    .map(|(_, v)| *v)
                    .collect();
                let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * vectors[c][axes[0]] * minor_det(rest, &sub);
            }
            acc
        }
    }
}

/// Determinant of a square matrix of fields given by row and column index
/// lists into the frame data tables.
fn field_det(get: &dyn Fn(usize, usize) -> Field, n: usize) -> Field {
    match n {
        0 => Field::constant(1.0),
        1 => get(0, 0),
        2 => (get(0, 0) * get(1, 1)) - (get(0, 1) * get(1, 0)),
        _ => {
            let mut acc = Field::constant(0.0);
            for c in 0..n {
                let minor = field_det(
                    &|r2: usize, c2: usize| {
                        let cc = if c2 < c { c2 } else { c2 + 1 };
                        get(r2 + 1, cc)
                    },
                    n - 1,
                );
                let term = get(0, c) * minor;
                acc = if c % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            acc
        }
    }
}

/// Frame components of a form: b_I = a(E_{i1}, ..., E_{ik}) as fields.
pub fn frame_components(a: &KForm, fd: &FrameData) -> Vec<Field> {
    let k = a.degree();
    tuples(k)
        .iter()
        .map(|frame_t| {
            let mut acc = Field::constant(0.0);
            for (slot, coord_t) in tuples(k).iter().enumerate() {
                if a.coeffs()[slot].is_zero() {
                    continue;
                }
                // det over rows = coordinate axes, cols = frame legs
                let det = field_det(&|r, c| fd.b[coord_t[r]][frame_t[c]].clone(), k);
                acc = acc.add(&(a.coeffs()[slot].clone() * det));
            }
            acc
        })
        .collect()
}

/// Rebuild coordinate coefficients from frame components.
pub fn from_frame_components(k: usize, b: &[Field], fd: &FrameData) -> KForm {
    let c = tuples(k)
        .iter()
        .map(|coord_t| {
            let mut acc = Field::constant(0.0);
            for (slot, frame_t) in tuples(k).iter().enumerate() {
                if b[slot].is_zero() {
                    continue;
                }
                let det = field_det(&|r, c2| fd.a[frame_t[r]][coord_t[c2]].clone(), k);
                acc = acc.add(&(b[slot].clone() * det));
            }
            acc
        })
        .collect();
    KForm::from_coeffs(k, c)
}

/// Sign of the permutation (tuple, complement) relative to (0,1,2,3).
pub fn complement_sign(t: &[usize]) -> (Vec<usize>, f64) {
    let comp: Vec<usize> = (0..4).filter(|i| !t.contains(i)).collect();
    let seq: Vec<usize> = t.iter().chain(comp.iter()).copied().collect();
    let mut inv = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    (comp, if inv % 2 == 0 { 1.0 } else { -1.0 })
}

/// Hodge star of a form with respect to the metric and orientation of an
/// orthonormal coframe (`or` = +1 selects the volume form
/// theta1^theta2^theta3^theta4).
pub fn hodge_star(a: &KForm, fd: &FrameData, or: f64) -> KForm {
    let k = a.degree();
    let b = frame_components(a, fd);
    let mut out = vec![Field::constant(0.0); DIMS[4 - k]];
    for (slot, t) in tuples(k).iter().enumerate() {
        let (comp, sign) = complement_sign(t);
        let pos = tuple_pos(4 - k, &comp);
        out[pos] = out[pos].add(&b[slot].mul(&Field::constant(sign * or)));
    }
    from_frame_components(4 - k, &out, fd)
}

/// delta = -*d* on all degrees.
pub fn codifferential(a: &KForm, fd: &FrameData, or: f64) -> Result<KForm> {
    if a.degree() == 0 {
        return Err(Error::BadDegree { have: 0, want: 1 });
    }
    let star = hodge_star(a, fd, or);
    let dstar = star.d()?;
    Ok(hodge_star(&dstar, fd, or).neg())
}

/// Self-dual and anti-self-dual parts of a 2-form.
pub struct TwoFormSplit {
    pub sd: KForm,
    pub asd: KForm,
}

pub fn sd_asd_split(a: &KForm, fd: &FrameData, or: f64) -> Result<TwoFormSplit> {
    if a.degree() != 2 {
        return Err(Error::BadDegree {
            have: a.degree(),
            want: 2,
        });
    }
    let star = hodge_star(a, fd, or);
    let half = Field::constant(0.5);
    Ok(TwoFormSplit {
        sd: a.add(&star).scale(&half),
        asd: a.sub(&star).scale(&half),
    })
}

/// Star acting on frame-component vectors of 2-forms (basis order
/// 12, 13, 14, 23, 24, 34): a cheap pointwise helper for split residuals.
pub fn star2_frame(v: &[f64; 6], or: f64) -> [f64; 6] {
    [
        or * v[5],
        -or * v[4],
        or * v[3],
        or * v[2],
        -or * v[1],
        or * v[0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Coframe;
    use crate::point::{Axis, Point4};
    use approx::assert_relative_eq;

    fn pt(x: f64, y: f64, z: f64, t: f64) -> Point4 {
        Point4::new(x, y, z, t)
    }

    fn euclidean() -> Coframe {
        Coframe::euclidean()
    }

    #[test]
    fn wedge_of_coordinate_forms() {
        let dx = KForm::one_form([
            Field::constant(1.0),
            Field::constant(0.0),
            Field::constant(0.0),
            Field::constant(0.0),
        ]);
        let dy = KForm::one_form([
            Field::constant(0.0),
            Field::constant(1.0),
            Field::constant(0.0),
            Field::constant(0.0),
        ]);
        let w = dx.wedge(&dy).unwrap();
        // evaluated on (d/dx, d/dy)
        let v = w
            .apply(
                pt(0.0, 0.0, 0.0, 0.0),
                &[[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]],
            )
            .unwrap();
        assert_relative_eq!(v, 1.0);
        // antisymmetry of the arguments
        let v2 = w
            .apply(
                pt(0.0, 0.0, 0.0, 0.0),
                &[[0.0, 1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]],
            )
            .unwrap();
        assert_relative_eq!(v2, -1.0);
    }

    #[test]
    fn one_form_wedge_itself_vanishes() {
        let a = KForm::one_form([
            (Field::x() * Field::t()).sin(),
            Field::y().cosh(),
            Field::z() + 1.0,
            Field::x() * Field::y(),
        ]);
        let aa = a.wedge(&a).unwrap();
        for s in 0..20 {
            let u = s as f64 / 19.0;
            let p = pt(u, 1.0 - u, -u, 2.0 * u);
            for v in aa.eval(p).unwrap() {
                assert!(v.abs() < 1e-14, "a^a component {v}");
            }
        }
    }

    #[test]
    fn exterior_derivative_of_x_dy() {
        let form = KForm::one_form([
            Field::constant(0.0),
            Field::x(),
            Field::constant(0.0),
            Field::constant(0.0),
        ]);
        let d = form.d().unwrap();
        let vals = d.eval(pt(0.7, -0.3, 0.1, 0.9)).unwrap();
        // d(x dy) = dx ^ dy: slot (x, y) is 1, everything else 0
        assert_relative_eq!(vals[0], 1.0);
        for v in &vals[1..] {
            assert_eq!(*v, 0.0);
        }
    }

    #[test]
    fn dd_vanishes_on_a_product_form() {
        let h = ((Field::x().powc(2.0) + Field::y().powc(2.0)) / 2.0).exp();
        let a = KForm::one_form([
            Field::t().sin() * &h,
            Field::constant(0.0),
            Field::constant(0.0),
            Field::constant(0.0),
        ]);
        let dd = a.d().unwrap().d().unwrap();
        for s in 0..20 {
            let u = s as f64 / 19.0;
            let p = pt(u - 0.5, 0.3 * u, u, 3.0 * u);
            for v in dd.eval(p).unwrap() {
                assert!(v.abs() < 1e-12, "dd component {v} at {p}");
            }
        }
    }

    #[test]
    fn euclidean_star_examples() {
        let cf = euclidean();
        let p = pt(0.2, 0.4, 0.6, 0.8);
        // *(dx^dy) = dz^dt
        let mut c = vec![Field::constant(0.0); 6];
        c[0] = Field::constant(1.0); // slot (x,y)
        let dxdy = KForm::from_coeffs(2, c);
        let star = hodge_star(&dxdy, &cf.fd, 1.0);
        let vals = star.eval(p).unwrap();
        assert_relative_eq!(vals[5], 1.0); // slot (z,t)
        for s in 0..5 {
            assert_eq!(vals[s], 0.0);
        }
        // *1 = volume form, *(volume) = 1
        let one = KForm::function(Field::constant(1.0));
        let vol = hodge_star(&one, &cf.fd, 1.0);
        assert_relative_eq!(vol.eval(p).unwrap()[0], 1.0);
        let back = hodge_star(&vol, &cf.fd, 1.0);
        assert_relative_eq!(back.eval(p).unwrap()[0], 1.0);
        // ** = -id on 1-forms in dimension 4
        let a = KForm::one_form([
            Field::constant(2.0),
            Field::constant(-1.0),
            Field::constant(0.5),
            Field::constant(3.0),
        ]);
        let ss = hodge_star(&hodge_star(&a, &cf.fd, 1.0), &cf.fd, 1.0);
        let vals = ss.eval(p).unwrap();
        for (got, want) in vals.iter().zip([2.0, -1.0, 0.5, 3.0]) {
            assert_relative_eq!(*got, -want);
        }
    }

    #[test]
    fn euclidean_self_dual_forms() {
        let cf = euclidean();
        let p = pt(0.0, 0.0, 0.0, 0.0);
        let mk2 = |xy: f64, zt: f64| {
            let mut c = vec![Field::constant(0.0); 6];
            c[0] = Field::constant(xy);
            c[5] = Field::constant(zt);
            KForm::from_coeffs(2, c)
        };
        let omega = mk2(1.0, 1.0); // dx^dy + dz^dt
        let omega_bar = mk2(1.0, -1.0);
        let so = hodge_star(&omega, &cf.fd, 1.0).eval(p).unwrap();
        assert_relative_eq!(so[0], 1.0);
        assert_relative_eq!(so[5], 1.0);
        let sb = hodge_star(&omega_bar, &cf.fd, 1.0).eval(p).unwrap();
        assert_relative_eq!(sb[0], -1.0);
        assert_relative_eq!(sb[5], 1.0); // = -(-1)
                                         // split of dx^dy: (dx^dy + dz^dt)/2 and (dx^dy - dz^dt)/2
        let split = sd_asd_split(&mk2(1.0, 0.0), &cf.fd, 1.0).unwrap();
        let sd = split.sd.eval(p).unwrap();
        let asd = split.asd.eval(p).unwrap();
        assert_relative_eq!(sd[0], 0.5);
        assert_relative_eq!(sd[5], 0.5);
        assert_relative_eq!(asd[0], 0.5);
        assert_relative_eq!(asd[5], -0.5);
    }

    #[test]
    fn euclidean_codifferential_of_dx_vanishes() {
        let cf = euclidean();
        let dx = KForm::one_form([
            Field::constant(1.0),
            Field::constant(0.0),
            Field::constant(0.0),
            Field::constant(0.0),
        ]);
        let delta = codifferential(&dx, &cf.fd, 1.0).unwrap();
        assert_eq!(delta.degree(), 0);
        assert_eq!(delta.eval(pt(1.0, 2.0, 3.0, 4.0)).unwrap()[0], 0.0);
        // delta on 0-forms is rejected
        assert!(codifferential(&KForm::function(Field::x()), &cf.fd, 1.0).is_err());
    }

    #[test]
    fn wedge_degree_overflow() {
        let three = KForm::from_coeffs(3, vec![Field::constant(1.0); 4]);
        let two = KForm::from_coeffs(2, vec![Field::constant(1.0); 6]);
        assert!(three.wedge(&two).is_err());
        assert!(two.wedge(&two).is_ok());
    }

    #[test]
    fn graded_commutativity() {
        let a = KForm::one_form([
            Field::x(),
            Field::y().sin(),
            Field::constant(0.3),
            Field::t(),
        ]);
        let b = KForm::one_form([
            Field::z(),
            Field::constant(1.0),
            Field::x() * Field::y(),
            Field::constant(0.0),
        ]);
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        let p = pt(0.5, -0.7, 1.1, 0.2);
        for (x, y) in ab.eval(p).unwrap().iter().zip(&ba.eval(p).unwrap()) {
            assert_relative_eq!(*x, -y, epsilon = 1e-14); // (-1)^{1*1}
        }
        let two = KForm::from_coeffs(
            2,
            vec![
                Field::x(),
                Field::constant(0.0),
                Field::y(),
                Field::constant(1.0),
                Field::z(),
                Field::t(),
            ],
        );
        let a2 = a.wedge(&two).unwrap();
        let two_a = two.wedge(&a).unwrap();
        for (x, y) in a2.eval(p).unwrap().iter().zip(&two_a.eval(p).unwrap()) {
            assert_relative_eq!(*x, *y, epsilon = 1e-14); // (-1)^{1*2} = +1
        }
    }

    #[test]
    fn coefficient_sign_on_descending_tuples() {
        let mut c = vec![Field::constant(0.0); 6];
        c[1] = Field::constant(2.5); // slot (x, z)
        let w = KForm::from_coeffs(2, c);
        let p = pt(0.0, 0.0, 0.0, 0.0);
        assert_relative_eq!(
            w.coeff_signed(&[Axis::Z.idx(), Axis::X.idx()])
                .value(p)
                .unwrap(),
            -2.5
        );
        assert_eq!(w.coeff_signed(&[0, 0]).value(p).unwrap(), 0.0);
    }
}
