//! Truncated Taylor jets of order 4.
//!
//! A [`Jet4`] stores a value together with its first four derivatives with
//! respect to a single real parameter. Arithmetic follows the Leibniz rule and
//! composition with elementary functions follows Faà di Bruno, so evaluating
//! an expression on the identity jet yields exact derivatives up to rounding.
//!
//! Entries are derivatives, not Taylor coefficients: `d[k]` is the k-th
//! derivative, without the `1/k!` factor.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// Highest derivative order carried by a [`Jet4`].
pub const JET_ORDER: usize = 4;

const BINOM: [[f64; 5]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 1.0, 0.0],
    [1.0, 4.0, 6.0, 4.0, 1.0],
];

/// Value and derivatives of order 1..=4 of a scalar function at a point.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Jet4 {
    pub d: [f64; 5],
}

impl fmt::Debug for Jet4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Jet4({}, {}, {}, {}, {})",
            self.d[0], self.d[1], self.d[2], self.d[3], self.d[4]
        )
    }
}

impl Jet4 {
    pub const ZERO: Jet4 = Jet4 { d: [0.0; 5] };

    pub const fn new(d: [f64; 5]) -> Self {
        Jet4 { d }
    }

    /// A constant: all derivatives vanish.
    pub const fn constant(v: f64) -> Self {
        Jet4 {
            d: [v, 0.0, 0.0, 0.0, 0.0],
        }
    }

    /// The identity function seeded at `x`.
    pub const fn variable(x: f64) -> Self {
        Jet4 {
            d: [x, 1.0, 0.0, 0.0, 0.0],
        }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.d[0]
    }

    pub fn is_finite(&self) -> bool {
        self.d.iter().all(|v| v.is_finite())
    }

    /// The jet of the derivative. The top entry is unknown and set to zero,
    /// so the result is only valid to order 3.
    pub fn derivative(&self) -> Jet4 {
        Jet4::new([self.d[1], self.d[2], self.d[3], self.d[4], 0.0])
    }

    /// Zeroes every entry above `order`.
    pub fn truncate(&self, order: usize) -> Jet4 {
        let mut out = *self;
        for v in out.d.iter_mut().skip(order + 1) {
            *v = 0.0;
        }
        out
    }

    pub fn scale(&self, k: f64) -> Jet4 {
        Jet4::new(self.d.map(|v| v * k))
    }

    /// Composition `φ ∘ u` where `outer` holds `φ(u0), φ'(u0), .., φ''''(u0)`
    /// at `u0 = inner.value()`.
    pub fn compose(outer: &Jet4, inner: &Jet4) -> Jet4 {
        let [p0, p1, p2, p3, p4] = outer.d;
        let [_, u1, u2, u3, u4] = inner.d;
        let u1s = u1 * u1;
        Jet4::new([
            p0,
            p1 * u1,
            p2 * u1s + p1 * u2,
            p3 * u1s * u1 + 3.0 * p2 * u1 * u2 + p1 * u3,
            p4 * u1s * u1s + 6.0 * p3 * u1s * u2 + p2 * (3.0 * u2 * u2 + 4.0 * u1 * u3) + p1 * u4,
        ])
    }

    fn apply(&self, outer: [f64; 5]) -> Jet4 {
        Jet4::compose(&Jet4::new(outer), self)
    }

    pub fn recip(&self) -> Jet4 {
        let r = 1.0 / self.d[0];
        let r2 = r * r;
        self.apply([r, -r2, 2.0 * r2 * r, -6.0 * r2 * r2, 24.0 * r2 * r2 * r])
    }

    pub fn sqrt(&self) -> Jet4 {
        let u = self.d[0];
        let r = u.sqrt();
        let ir = 1.0 / r;
        let iu = 1.0 / u;
        self.apply([
            r,
            0.5 * ir,
            -0.25 * ir * iu,
            0.375 * ir * iu * iu,
            -0.9375 * ir * iu * iu * iu,
        ])
    }

    /// `self^p` for a constant real exponent.
    pub fn powf(&self, p: f64) -> Jet4 {
        let u = self.d[0];
        let mut outer = [0.0; 5];
        let mut falling = 1.0;
        for (k, slot) in outer.iter_mut().enumerate() {
            if k > 0 {
                falling *= p - (k as f64 - 1.0);
            }
            *slot = if falling == 0.0 {
                0.0
            } else {
                falling * u.powf(p - k as f64)
            };
        }
        self.apply(outer)
    }

    pub fn powi(&self, n: i32) -> Jet4 {
        self.powf(n as f64)
    }

    pub fn sin(&self) -> Jet4 {
        let (s, c) = self.d[0].sin_cos();
        self.apply([s, c, -s, -c, s])
    }

    pub fn cos(&self) -> Jet4 {
        let (s, c) = self.d[0].sin_cos();
        self.apply([c, -s, -c, s, c])
    }

    pub fn tan(&self) -> Jet4 {
        let y = self.d[0].tan();
        let y2 = y * y;
        let q = 1.0 + y2;
        self.apply([
            y,
            q,
            2.0 * y * q,
            q * (2.0 + 6.0 * y2),
            q * (16.0 * y + 24.0 * y2 * y),
        ])
    }

    pub fn exp(&self) -> Jet4 {
        let e = self.d[0].exp();
        self.apply([e; 5])
    }

    pub fn ln(&self) -> Jet4 {
        let u = self.d[0];
        let r = 1.0 / u;
        let r2 = r * r;
        self.apply([u.ln(), r, -r2, 2.0 * r2 * r, -6.0 * r2 * r2])
    }

    pub fn sinh(&self) -> Jet4 {
        let (s, c) = (self.d[0].sinh(), self.d[0].cosh());
        self.apply([s, c, s, c, s])
    }

    pub fn cosh(&self) -> Jet4 {
        let (s, c) = (self.d[0].sinh(), self.d[0].cosh());
        self.apply([c, s, c, s, c])
    }

    pub fn tanh(&self) -> Jet4 {
        let y = self.d[0].tanh();
        let y2 = y * y;
        let q = 1.0 - y2;
        self.apply([
            y,
            q,
            -2.0 * y * q,
            q * (6.0 * y2 - 2.0),
            q * (16.0 * y - 24.0 * y2 * y),
        ])
    }

    pub fn asin(&self) -> Jet4 {
        let u = self.d[0];
        let (d1, d2, d3, d4) = asin_derivatives(u);
        self.apply([u.asin(), d1, d2, d3, d4])
    }

    pub fn acos(&self) -> Jet4 {
        let u = self.d[0];
        let (d1, d2, d3, d4) = asin_derivatives(u);
        self.apply([u.acos(), -d1, -d2, -d3, -d4])
    }

    pub fn atan(&self) -> Jet4 {
        let u = self.d[0];
        let p = 1.0 / (1.0 + u * u);
        let p2 = p * p;
        self.apply([
            u.atan(),
            p,
            -2.0 * u * p2,
            (6.0 * u * u - 2.0) * p2 * p,
            24.0 * u * (1.0 - u * u) * p2 * p2,
        ])
    }
}

fn asin_derivatives(u: f64) -> (f64, f64, f64, f64) {
    let q = 1.0 - u * u;
    let r = q.sqrt();
    let q32 = q * r;
    let q52 = q32 * q;
    let q72 = q52 * q;
    (
        1.0 / r,
        u / q32,
        (1.0 + 2.0 * u * u) / q52,
        (9.0 * u + 6.0 * u * u * u) / q72,
    )
}

impl From<f64> for Jet4 {
    fn from(v: f64) -> Self {
        Jet4::constant(v)
    }
}

impl Add for Jet4 {
    type Output = Jet4;
    fn add(self, rhs: Jet4) -> Jet4 {
        let mut d = self.d;
        for (a, b) in d.iter_mut().zip(rhs.d) {
            *a += b;
        }
        Jet4 { d }
    }
}

impl Sub for Jet4 {
    type Output = Jet4;
    fn sub(self, rhs: Jet4) -> Jet4 {
        let mut d = self.d;
        for (a, b) in d.iter_mut().zip(rhs.d) {
            *a -= b;
        }
        Jet4 { d }
    }
}

impl AddAssign for Jet4 {
    fn add_assign(&mut self, rhs: Jet4) {
        *self = *self + rhs;
    }
}

impl SubAssign for Jet4 {
    fn sub_assign(&mut self, rhs: Jet4) {
        *self = *self - rhs;
    }
}

impl Neg for Jet4 {
    type Output = Jet4;
    fn neg(self) -> Jet4 {
        Jet4::new(self.d.map(|v| -v))
    }
}

impl Mul for Jet4 {
    type Output = Jet4;
    fn mul(self, rhs: Jet4) -> Jet4 {
        let mut d = [0.0; 5];
        for (n, slot) in d.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in 0..=n {
                acc += BINOM[n][k] * self.d[k] * rhs.d[n - k];
            }
            *slot = acc;
        }
        Jet4 { d }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Jet4 {
    type Output = Jet4;
    fn div(self, rhs: Jet4) -> Jet4 {
        self * rhs.recip()
    }
}

impl Add<f64> for Jet4 {
    type Output = Jet4;
    fn add(mut self, rhs: f64) -> Jet4 {
        self.d[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet4 {
    type Output = Jet4;
    fn sub(mut self, rhs: f64) -> Jet4 {
        self.d[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet4 {
    type Output = Jet4;
    fn mul(self, rhs: f64) -> Jet4 {
        self.scale(rhs)
    }
}

impl Div<f64> for Jet4 {
    type Output = Jet4;
    fn div(self, rhs: f64) -> Jet4 {
        self.scale(1.0 / rhs)
    }
}

impl Mul<Jet4> for f64 {
    type Output = Jet4;
    fn mul(self, rhs: Jet4) -> Jet4 {
        rhs.scale(self)
    }
}

impl std::iter::Sum for Jet4 {
    fn sum<I: Iterator<Item = Jet4>>(iter: I) -> Jet4 {
        iter.fold(Jet4::ZERO, |a, b| a + b)
    }
}
