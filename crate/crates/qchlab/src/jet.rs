//! Truncated second-order Taylor arithmetic in the four chart coordinates.
//!
//! `Jet2` carries a value, the four first partials and the ten distinct
//! second partials of a quantity; arithmetic on jets propagates derivatives
//! through the chain and product rules with no truncation error beyond
//! rounding. `Jet1` is the first-order analogue used where only one more
//! derivative is needed (connection coefficients, extracted invariants).

// index loops over fixed-size jet slots are clearest as written
#![allow(clippy::needless_range_loop)]
// division delegates to the reciprocal chain rule on purpose
#![allow(clippy::suspicious_arithmetic_impl)]

/// Packed index of the symmetric pair (i, j), i <= j, in a 10-slot Hessian.
#[inline]
pub fn hidx(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * (9 - i) / 2 + (j - i)
}

/// Value plus first partials in (x, y, z, t).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet1 {
    pub v: f64,
    pub g: [f64; 4],
}

/// Value, first partials, and packed second partials in (x, y, z, t).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub g: [f64; 4],
    pub h: [f64; 10],
}

impl Jet1 {
    pub const ZERO: Jet1 = Jet1 {
        v: 0.0,
        g: [0.0; 4],
    };

    #[inline]
    pub fn constant(v: f64) -> Self {
        Jet1 { v, g: [0.0; 4] }
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        Jet1 {
            v: self.v * s,
            g: [self.g[0] * s, self.g[1] * s, self.g[2] * s, self.g[3] * s],
        }
    }

    /// f(u) with f0 = f(u.v), f1 = f'(u.v).
    #[inline]
    pub fn chain(self, f0: f64, f1: f64) -> Self {
        let mut g = [0.0; 4];
        for m in 0..4 {
            g[m] = f1 * self.g[m];
        }
        Jet1 { v: f0, g }
    }

    #[inline]
    pub fn recip(self) -> Self {
        let iv = 1.0 / self.v;
        self.chain(iv, -iv * iv)
    }

    #[inline]
    pub fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        self.chain(r, 0.5 / r)
    }
}

impl std::ops::Add for Jet1 {
    type Output = Jet1;
    #[inline]
    fn add(self, o: Jet1) -> Jet1 {
        let mut g = [0.0; 4];
        for m in 0..4 {
            g[m] = self.g[m] + o.g[m];
        }
        Jet1 { v: self.v + o.v, g }
    }
}

impl std::ops::Sub for Jet1 {
    type Output = Jet1;
    #[inline]
    fn sub(self, o: Jet1) -> Jet1 {
        let mut g = [0.0; 4];
        for m in 0..4 {
            g[m] = self.g[m] - o.g[m];
        }
        Jet1 { v: self.v - o.v, g }
    }
}

impl std::ops::Neg for Jet1 {
    type Output = Jet1;
    #[inline]
    fn neg(self) -> Jet1 {
        self.scale(-1.0)
    }
}

impl std::ops::Mul for Jet1 {
    type Output = Jet1;
    #[inline]
    fn mul(self, o: Jet1) -> Jet1 {
        let mut g = [0.0; 4];
        for m in 0..4 {
            g[m] = self.g[m] * o.v + self.v * o.g[m];
        }
        Jet1 { v: self.v * o.v, g }
    }
}

impl std::ops::Div for Jet1 {
    type Output = Jet1;
    #[inline]
    fn div(self, o: Jet1) -> Jet1 {
        self * o.recip()
    }
}

impl Jet2 {
    pub const ZERO: Jet2 = Jet2 {
        v: 0.0,
        g: [0.0; 4],
        h: [0.0; 10],
    };

    #[inline]
    pub fn constant(v: f64) -> Self {
        Jet2 {
            v,
            g: [0.0; 4],
            h: [0.0; 10],
        }
    }

    /// Seed for the coordinate with the given axis index.
    #[inline]
    pub fn coord(v: f64, axis: usize) -> Self {
        let mut g = [0.0; 4];
        g[axis] = 1.0;
        Jet2 { v, g, h: [0.0; 10] }
    }

    #[inline]
    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.h[hidx(i, j)]
    }

    /// Value and gradient only.
    #[inline]
    pub fn lower(self) -> Jet1 {
        Jet1 {
            v: self.v,
            g: self.g,
        }
    }

    /// The partial derivative along `axis` as a first-order jet.
    #[inline]
    pub fn partial(self, axis: usize) -> Jet1 {
        Jet1 {
            v: self.g[axis],
            g: [
                self.hess(axis, 0),
                self.hess(axis, 1),
                self.hess(axis, 2),
                self.hess(axis, 3),
            ],
        }
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        let mut out = self;
        out.v *= s;
        for m in 0..4 {
            out.g[m] *= s;
        }
        for m in 0..10 {
            out.h[m] *= s;
        }
        out
    }

    /// f(u) with f0 = f(u.v), f1 = f'(u.v), f2 = f''(u.v).
    #[inline]
    pub fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        let mut g = [0.0; 4];
        for m in 0..4 {
            g[m] = f1 * self.g[m];
        }
        let mut h = [0.0; 10];
        let mut idx = 0;
        for i in 0..4 {
            for j in i..4 {
                h[idx] = f1 * self.h[idx] + f2 * self.g[i] * self.g[j];
                idx += 1;
            }
        }
        Jet2 { v: f0, g, h }
    }

    #[inline]
    pub fn recip(self) -> Self {
        let iv = 1.0 / self.v;
        let iv2 = iv * iv;
        self.chain(iv, -iv2, 2.0 * iv2 * iv)
    }

    #[inline]
    pub fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        self.chain(r, 0.5 / r, -0.25 / (r * self.v))
    }

    #[inline]
    pub fn powf(self, k: f64) -> Self {
        let f0 = self.v.powf(k);
        let f1 = k * self.v.powf(k - 1.0);
        let f2 = k * (k - 1.0) * self.v.powf(k - 2.0);
        self.chain(f0, f1, f2)
    }

    #[inline]
    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    #[inline]
    pub fn ln(self) -> Self {
        let iv = 1.0 / self.v;
        self.chain(self.v.ln(), iv, -iv * iv)
    }

    #[inline]
    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }

    #[inline]
    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }

    #[inline]
    pub fn tan(self) -> Self {
        let t = self.v.tan();
        let s = 1.0 + t * t;
        self.chain(t, s, 2.0 * t * s)
    }

    #[inline]
    pub fn sinh(self) -> Self {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.chain(s, c, s)
    }

    #[inline]
    pub fn cosh(self) -> Self {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.chain(c, s, c)
    }

    #[inline]
    pub fn tanh(self) -> Self {
        let t = self.v.tanh();
        let s = 1.0 - t * t;
        self.chain(t, s, -2.0 * t * s)
    }
}

impl std::ops::Add for Jet2 {
    type Output = Jet2;
    #[inline]
    fn add(self, o: Jet2) -> Jet2 {
        let mut out = self;
        out.v += o.v;
        for m in 0..4 {
            out.g[m] += o.g[m];
        }
        for m in 0..10 {
            out.h[m] += o.h[m];
        }
        out
    }
}

impl std::ops::Sub for Jet2 {
    type Output = Jet2;
    #[inline]
    fn sub(self, o: Jet2) -> Jet2 {
        let mut out = self;
        out.v -= o.v;
        for m in 0..4 {
            out.g[m] -= o.g[m];
        }
        for m in 0..10 {
            out.h[m] -= o.h[m];
        }
        out
    }
}

impl std::ops::Neg for Jet2 {
    type Output = Jet2;
    #[inline]
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl std::ops::Mul for Jet2 {
    type Output = Jet2;
    #[inline]
    fn mul(self, o: Jet2) -> Jet2 {
        let mut g = [0.0; 4];
        for m in 0..4 {
            g[m] = self.g[m] * o.v + self.v * o.g[m];
        }
        let mut h = [0.0; 10];
        let mut idx = 0;
        for i in 0..4 {
            for j in i..4 {
                h[idx] =
                    self.h[idx] * o.v + self.g[i] * o.g[j] + self.g[j] * o.g[i] + self.v * o.h[idx];
                idx += 1;
            }
        }
        Jet2 {
            v: self.v * o.v,
            g,
            h,
        }
    }
}

impl std::ops::Div for Jet2 {
    type Output = Jet2;
    #[inline]
    fn div(self, o: Jet2) -> Jet2 {
        self * o.recip()
    }
}
