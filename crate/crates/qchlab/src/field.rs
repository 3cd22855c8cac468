//! Scalar fields on the 4-dimensional chart.
//!
//! A `Field` is an immutable expression tree over the coordinates, constants,
//! arithmetic, elementary functions, and grid-backed spline patches. All
//! derivatives up to total order 2 are evaluated by second-order jet
//! arithmetic pushed through the tree, so closed-form fields are exact to
//! rounding. `differentiate` produces a new field for one partial derivative;
//! it is the construction tool for derived coefficients whose own second
//! derivatives are needed downstream.

use std::collections::HashMap;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::jet::{hidx, Jet2};
use crate::point::{Axis, Point4};
use crate::spline::Spline2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnOp {
    Exp,
    Ln,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Sqrt,
}

impl UnOp {
    pub fn name(self) -> &'static str {
        match self {
            UnOp::Exp => "exp",
            UnOp::Ln => "ln",
            UnOp::Sin => "sin",
            UnOp::Cos => "cos",
            UnOp::Tan => "tan",
            UnOp::Sinh => "sinh",
            UnOp::Cosh => "cosh",
            UnOp::Tanh => "tanh",
            UnOp::Sqrt => "sqrt",
        }
    }
}

/// A spline-backed field: a fixed grid patch differentiated (dx, dy) times.
#[derive(Clone)]
pub struct GridPatch {
    pub spline: Rc<Spline2>,
    pub dx: u8,
    pub dy: u8,
}

enum Node {
    Const(f64),
    Coord(Axis),
    Add(Field, Field),
    Sub(Field, Field),
    Mul(Field, Field),
    Div(Field, Field),
    Neg(Field),
    /// Constant real exponent.
    Pow(Field, f64),
    Un(UnOp, Field),
    Grid(GridPatch),
}

/// An immutable, shareable scalar field.
#[derive(Clone)]
pub struct Field(Rc<Node>);

impl From<f64> for Field {
    fn from(v: f64) -> Field {
        Field::constant(v)
    }
}

fn node(n: Node) -> Field {
    Field(Rc::new(n))
}

impl Field {
    pub fn constant(v: f64) -> Field {
        node(Node::Const(v))
    }

    pub fn coord(a: Axis) -> Field {
        node(Node::Coord(a))
    }

    pub fn x() -> Field {
        Field::coord(Axis::X)
    }
    pub fn y() -> Field {
        Field::coord(Axis::Y)
    }
    pub fn z() -> Field {
        Field::coord(Axis::Z)
    }
    pub fn t() -> Field {
        Field::coord(Axis::T)
    }

    pub fn from_spline(spline: Rc<Spline2>) -> Field {
        node(Node::Grid(GridPatch {
            spline,
            dx: 0,
            dy: 0,
        }))
    }

    pub fn as_const(&self) -> Option<f64> {
        match &*self.0 {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.as_const(), Some(c) if c == 0.0)
    }

    pub fn add(&self, o: &Field) -> Field {
        match (self.as_const(), o.as_const()) {
            (Some(a), Some(b)) => Field::constant(a + b),
            (Some(0.0), _) => o.clone(),
            (_, Some(0.0)) => self.clone(),
            _ => node(Node::Add(self.clone(), o.clone())),
        }
    }

    pub fn sub(&self, o: &Field) -> Field {
        match (self.as_const(), o.as_const()) {
            (Some(a), Some(b)) => Field::constant(a - b),
            (_, Some(0.0)) => self.clone(),
            (Some(0.0), _) => o.neg(),
            _ => node(Node::Sub(self.clone(), o.clone())),
        }
    }

    pub fn mul(&self, o: &Field) -> Field {
        match (self.as_const(), o.as_const()) {
            (Some(a), Some(b)) => Field::constant(a * b),
            (Some(0.0), _) | (_, Some(0.0)) => Field::constant(0.0),
            (Some(1.0), _) => o.clone(),
            (_, Some(1.0)) => self.clone(),
            _ => node(Node::Mul(self.clone(), o.clone())),
        }
    }

    pub fn div(&self, o: &Field) -> Field {
        match (self.as_const(), o.as_const()) {
            (Some(a), Some(b)) if b != 0.0 => Field::constant(a / b),
            (_, Some(1.0)) => self.clone(),
            _ => node(Node::Div(self.clone(), o.clone())),
        }
    }

    pub fn neg(&self) -> Field {
        match self.as_const() {
            Some(c) => Field::constant(-c),
            None => node(Node::Neg(self.clone())),
        }
    }

    pub fn powc(&self, k: f64) -> Field {
        if k == 0.0 {
            return Field::constant(1.0);
        }
        if k == 1.0 {
            return self.clone();
        }
        if let Some(c) = self.as_const() {
            let v = c.powf(k);
            if v.is_finite() {
                return Field::constant(v);
            }
        }
        node(Node::Pow(self.clone(), k))
    }

    pub fn un(&self, op: UnOp) -> Field {
        if let Some(c) = self.as_const() {
            let v = apply_un_value(op, c);
            if v.is_finite() {
                return Field::constant(v);
            }
        }
        node(Node::Un(op, self.clone()))
    }

    pub fn exp(&self) -> Field {
        self.un(UnOp::Exp)
    }
    pub fn ln(&self) -> Field {
        self.un(UnOp::Ln)
    }
    pub fn sin(&self) -> Field {
        self.un(UnOp::Sin)
    }
    pub fn cos(&self) -> Field {
        self.un(UnOp::Cos)
    }
    pub fn tan(&self) -> Field {
        self.un(UnOp::Tan)
    }
    pub fn sinh(&self) -> Field {
        self.un(UnOp::Sinh)
    }
    pub fn cosh(&self) -> Field {
        self.un(UnOp::Cosh)
    }
    pub fn tanh(&self) -> Field {
        self.un(UnOp::Tanh)
    }
    pub fn sqrt(&self) -> Field {
        self.un(UnOp::Sqrt)
    }

    /// The partial derivative along `axis` as a new field, built by the exact
    /// chain and product rules on the tree (spline patches shift their basis
    /// derivative order instead).
    pub fn differentiate(&self, axis: Axis) -> Field {
        match &*self.0 {
            Node::Const(_) => Field::constant(0.0),
            Node::Coord(a) => Field::constant(if *a == axis { 1.0 } else { 0.0 }),
            Node::Add(a, b) => a.differentiate(axis).add(&b.differentiate(axis)),
            Node::Sub(a, b) => a.differentiate(axis).sub(&b.differentiate(axis)),
            Node::Mul(a, b) => {
                let da = a.differentiate(axis);
                let db = b.differentiate(axis);
                da.mul(b).add(&a.mul(&db))
            }
            Node::Div(a, b) => {
                let da = a.differentiate(axis);
                let db = b.differentiate(axis);
                da.mul(b).sub(&a.mul(&db)).div(&b.mul(b))
            }
            Node::Neg(a) => a.differentiate(axis).neg(),
            Node::Pow(a, k) => {
                let da = a.differentiate(axis);
                Field::constant(*k).mul(&a.powc(k - 1.0)).mul(&da)
            }
            Node::Un(op, a) => {
                let da = a.differentiate(axis);
                let outer = match op {
                    UnOp::Exp => a.exp(),
                    UnOp::Ln => Field::constant(1.0).div(a),
                    UnOp::Sin => a.cos(),
                    UnOp::Cos => a.sin().neg(),
                    UnOp::Tan => Field::constant(1.0).add(&a.tan().mul(&a.tan())),
                    UnOp::Sinh => a.cosh(),
                    UnOp::Cosh => a.sinh(),
                    UnOp::Tanh => Field::constant(1.0).sub(&a.tanh().mul(&a.tanh())),
                    UnOp::Sqrt => Field::constant(0.5).div(&a.sqrt()),
                };
                outer.mul(&da)
            }
            Node::Grid(gp) => match axis {
                Axis::X => node(Node::Grid(GridPatch {
                    spline: gp.spline.clone(),
                    dx: gp.dx + 1,
                    dy: gp.dy,
                })),
                Axis::Y => node(Node::Grid(GridPatch {
                    spline: gp.spline.clone(),
                    dx: gp.dx,
                    dy: gp.dy + 1,
                })),
                Axis::Z | Axis::T => Field::constant(0.0),
            },
        }
    }

    /// Full second-order jet of the field at a point.
    pub fn eval_jet2(&self, p: Point4) -> Result<Jet2> {
        let mut memo: HashMap<usize, Jet2> = HashMap::new();
        self.j2(p, &mut memo)
    }

    /// Plain value at a point.
    pub fn value(&self, p: Point4) -> Result<f64> {
        let mut memo: HashMap<usize, f64> = HashMap::new();
        self.v0(p, &mut memo)
    }

    /// Partial derivative for a multi-index of total order <= 2;
    /// the order-0 index returns the value.
    pub fn eval(&self, p: Point4, order: [usize; 4]) -> Result<f64> {
        let total: usize = order.iter().sum();
        if total > 2 {
            return Err(Error::OrderTooHigh(total));
        }
        if total == 0 {
            return self.value(p);
        }
        let j = self.eval_jet2(p)?;
        if total == 1 {
            let a = order.iter().position(|&o| o == 1).unwrap();
            return Ok(j.g[a]);
        }
        // total == 2: either one axis twice or two distinct axes once
        let mut axes = Vec::new();
        for (a, &o) in order.iter().enumerate() {
            for _ in 0..o {
                axes.push(a);
            }
        }
        Ok(j.h[hidx(axes[0], axes[1])])
    }

    fn err(&self, p: Point4, what: impl Into<String>) -> Error {
        Error::Eval {
            point: p,
            what: what.into(),
            expr: format!("{self}"),
        }
    }

    fn j2(&self, p: Point4, memo: &mut HashMap<usize, Jet2>) -> Result<Jet2> {
        let key = Rc::as_ptr(&self.0) as usize;
        if let Some(j) = memo.get(&key) {
            return Ok(*j);
        }
        let out = match &*self.0 {
            Node::Const(c) => Jet2::constant(*c),
            Node::Coord(a) => Jet2::coord(p.coords()[a.idx()], a.idx()),
            Node::Add(a, b) => a.j2(p, memo)? + b.j2(p, memo)?,
            Node::Sub(a, b) => a.j2(p, memo)? - b.j2(p, memo)?,
            Node::Mul(a, b) => a.j2(p, memo)? * b.j2(p, memo)?,
            Node::Div(a, b) => {
                let jb = b.j2(p, memo)?;
                if jb.v == 0.0 {
                    return Err(self.err(p, "division by zero"));
                }
                a.j2(p, memo)? / jb
            }
            Node::Neg(a) => -a.j2(p, memo)?,
            Node::Pow(a, k) => {
                let ja = a.j2(p, memo)?;
                if ja.v < 0.0 && k.fract() != 0.0 {
                    return Err(self.err(p, format!("negative base {} with exponent {k}", ja.v)));
                }
                if ja.v == 0.0 && *k < 2.0 {
                    return Err(self.err(p, format!("zero base with exponent {k}")));
                }
                ja.powf(*k)
            }
            Node::Un(op, a) => {
                let ja = a.j2(p, memo)?;
                match op {
                    UnOp::Ln if ja.v <= 0.0 => {
                        return Err(self.err(p, format!("ln of non-positive value {}", ja.v)))
                    }
                    UnOp::Sqrt if ja.v <= 0.0 => {
                        return Err(self.err(p, format!("sqrt of non-positive value {}", ja.v)))
                    }
                    _ => {}
                }
                match op {
                    UnOp::Exp => ja.exp(),
                    UnOp::Ln => ja.ln(),
                    UnOp::Sin => ja.sin(),
                    UnOp::Cos => ja.cos(),
                    UnOp::Tan => ja.tan(),
                    UnOp::Sinh => ja.sinh(),
                    UnOp::Cosh => ja.cosh(),
                    UnOp::Tanh => ja.tanh(),
                    UnOp::Sqrt => ja.sqrt(),
                }
            }
            Node::Grid(gp) => gp
                .spline
                .eval_jet2(p.x, p.y, gp.dx as usize, gp.dy as usize)
                .map_err(|e| self.err(p, e))?,
        };
        memo.insert(key, out);
        Ok(out)
    }

    fn v0(&self, p: Point4, memo: &mut HashMap<usize, f64>) -> Result<f64> {
        let key = Rc::as_ptr(&self.0) as usize;
        if let Some(v) = memo.get(&key) {
            return Ok(*v);
        }
        let out = match &*self.0 {
            Node::Const(c) => *c,
            Node::Coord(a) => p.coords()[a.idx()],
            Node::Add(a, b) => a.v0(p, memo)? + b.v0(p, memo)?,
            Node::Sub(a, b) => a.v0(p, memo)? - b.v0(p, memo)?,
            Node::Mul(a, b) => a.v0(p, memo)? * b.v0(p, memo)?,
            Node::Div(a, b) => {
                let vb = b.v0(p, memo)?;
                if vb == 0.0 {
                    return Err(self.err(p, "division by zero"));
                }
                a.v0(p, memo)? / vb
            }
            Node::Neg(a) => -a.v0(p, memo)?,
            Node::Pow(a, k) => {
                let va = a.v0(p, memo)?;
                let v = va.powf(*k);
                if !v.is_finite() {
                    return Err(self.err(p, format!("{va}^{k} is not finite")));
                }
                v
            }
            Node::Un(op, a) => {
                let va = a.v0(p, memo)?;
                match op {
                    UnOp::Ln if va <= 0.0 => {
                        return Err(self.err(p, format!("ln of non-positive value {va}")))
                    }
                    UnOp::Sqrt if va < 0.0 => {
                        return Err(self.err(p, format!("sqrt of negative value {va}")))
                    }
                    _ => {}
                }
                apply_un_value(*op, va)
            }
            Node::Grid(gp) => gp
                .spline
                .eval(p.x, p.y, gp.dx as usize, gp.dy as usize)
                .map_err(|e| self.err(p, e))?,
        };
        memo.insert(key, out);
        Ok(out)
    }
}

/// Shared memo for evaluating several fields at one point; fields built from
/// a common coframe share large subtrees, which this evaluates once.
pub struct EvalCache {
    p: Point4,
    memo0: HashMap<usize, f64>,
    memo2: HashMap<usize, Jet2>,
}

impl EvalCache {
    pub fn new(p: Point4) -> EvalCache {
        EvalCache {
            p,
            memo0: HashMap::new(),
            memo2: HashMap::new(),
        }
    }

    pub fn value(&mut self, f: &Field) -> Result<f64> {
        f.v0(self.p, &mut self.memo0)
    }

    pub fn jet2(&mut self, f: &Field) -> Result<Jet2> {
        f.j2(self.p, &mut self.memo2)
    }
}

fn apply_un_value(op: UnOp, v: f64) -> f64 {
    match op {
        UnOp::Exp => v.exp(),
        UnOp::Ln => v.ln(),
        UnOp::Sin => v.sin(),
        UnOp::Cos => v.cos(),
        UnOp::Tan => v.tan(),
        UnOp::Sinh => v.sinh(),
        UnOp::Cosh => v.cosh(),
        UnOp::Tanh => v.tanh(),
        UnOp::Sqrt => v.sqrt(),
    }
}

macro_rules! impl_binop {
    ($trait:ident, $fn:ident, $method:ident) => {
        impl std::ops::$trait for Field {
            type Output = Field;
            fn $fn(self, o: Field) -> Field {
                Field::$method(&self, &o)
            }
        }
        impl std::ops::$trait for &Field {
            type Output = Field;
            fn $fn(self, o: &Field) -> Field {
                Field::$method(self, o)
            }
        }
        impl std::ops::$trait<&Field> for Field {
            type Output = Field;
            fn $fn(self, o: &Field) -> Field {
                Field::$method(&self, o)
            }
        }
        impl std::ops::$trait<Field> for &Field {
            type Output = Field;
            fn $fn(self, o: Field) -> Field {
                Field::$method(self, &o)
            }
        }
        impl std::ops::$trait<f64> for Field {
            type Output = Field;
            fn $fn(self, o: f64) -> Field {
                Field::$method(&self, &Field::constant(o))
            }
        }
        impl std::ops::$trait<f64> for &Field {
            type Output = Field;
            fn $fn(self, o: f64) -> Field {
                Field::$method(self, &Field::constant(o))
            }
        }
        impl std::ops::$trait<Field> for f64 {
            type Output = Field;
            fn $fn(self, o: Field) -> Field {
                Field::$method(&Field::constant(self), &o)
            }
        }
        impl std::ops::$trait<&Field> for f64 {
            type Output = Field;
            fn $fn(self, o: &Field) -> Field {
                Field::$method(&Field::constant(self), o)
            }
        }
    };
}

impl_binop!(Add, add, add);
impl_binop!(Sub, sub, sub);
impl_binop!(Mul, mul, mul);
impl_binop!(Div, div, div);

impl std::ops::Neg for Field {
    type Output = Field;
    fn neg(self) -> Field {
        Field::neg(&self)
    }
}

impl std::ops::Neg for &Field {
    type Output = Field;
    fn neg(self) -> Field {
        Field::neg(self)
    }
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt_prec(self, 0, f)
    }
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Field(`{self}`)")
    }
}

fn fmt_prec(field: &Field, parent: u8, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
    let prec = match &*field.0 {
        Node::Add(..) | Node::Sub(..) => 1,
        Node::Mul(..) | Node::Div(..) => 2,
        Node::Neg(..) => 3,
        Node::Pow(..) => 4,
        _ => 5,
    };
    let paren = prec < parent;
    if paren {
        write!(f, "(")?;
    }
    match &*field.0 {
        Node::Const(c) => write!(f, "{c}")?,
        Node::Coord(a) => write!(f, "{}", a.name())?,
        Node::Add(a, b) => {
            fmt_prec(a, 1, f)?;
            write!(f, " + ")?;
            fmt_prec(b, 1, f)?;
        }
        Node::Sub(a, b) => {
            fmt_prec(a, 1, f)?;
            write!(f, " - ")?;
            fmt_prec(b, 2, f)?;
        }
        Node::Mul(a, b) => {
            fmt_prec(a, 2, f)?;
            write!(f, "*")?;
            fmt_prec(b, 2, f)?;
        }
        Node::Div(a, b) => {
            fmt_prec(a, 2, f)?;
            write!(f, "/")?;
            fmt_prec(b, 3, f)?;
        }
        Node::Neg(a) => {
            write!(f, "-")?;
            fmt_prec(a, 3, f)?;
        }
        Node::Pow(a, k) => {
            fmt_prec(a, 5, f)?;
            write!(f, "^{k}")?;
        }
        Node::Un(op, a) => {
            write!(f, "{}(", op.name())?;
            fmt_prec(a, 0, f)?;
            write!(f, ")")?;
        }
        Node::Grid(gp) => write!(f, "grid[d{}x d{}y]", gp.dx, gp.dy)?,
    }
    if paren {
        write!(f, ")")?;
    }
    Ok(())
}
