//! Integer matrices, the automorphy factor `j_g(z;k) = e^{ik Arg(cz+d)}` and
//! the multiplier system `v = v_eta^{2k}`.
//!
//! For integer `k` the multiplier is a character of `SL(2,Z)` with values in
//! the 12th roots of unity. Values are kept exact as exponents of a primitive
//! 24th root, so products of multiplier values never accumulate rounding.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Mul, MulAssign};

use num_complex::Complex64;

use crate::arith::{chi_k, gcd0};
use crate::{Error, Result};

/// `e(n/24)` for an exponent `n` reduced mod 24.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RootOfUnity(u8);

impl RootOfUnity {
    pub const ONE: Self = RootOfUnity(0);
    pub const I: Self = RootOfUnity(6);
    pub const MINUS_ONE: Self = RootOfUnity(12);
    pub const MINUS_I: Self = RootOfUnity(18);

    pub fn from_24ths(n: i64) -> Self {
        RootOfUnity(n.rem_euclid(24) as u8)
    }

    /// Exponent `n` in `e(n/24)`, in `0..24`.
    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn inv(self) -> Self {
        Self::from_24ths(-i64::from(self.0))
    }

    pub fn conj(self) -> Self {
        self.inv()
    }

    pub fn pow(self, e: i64) -> Self {
        Self::from_24ths(i64::from(self.0) * e.rem_euclid(24))
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(12)
    }

    /// Reduced fraction `p/q` with `self = e(p/q)`, `0 <= p < q`.
    pub fn as_fraction(self) -> (u8, u8) {
        let g = gcd0(i64::from(self.0), 24) as u8;
        if self.0 == 0 {
            (0, 1)
        } else {
            (self.0 / g, 24 / g)
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            6 => Complex64::new(0.0, 1.0),
            12 => Complex64::new(-1.0, 0.0),
            18 => Complex64::new(0.0, -1.0),
            n => Complex64::cis(2.0 * PI * f64::from(n) / 24.0),
        }
    }
}

impl Mul for RootOfUnity {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        RootOfUnity((self.0 + rhs.0) % 24)
    }
}

impl MulAssign for RootOfUnity {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl Mul<Complex64> for RootOfUnity {
    type Output = Complex64;
    fn mul(self, rhs: Complex64) -> Complex64 {
        match self.0 {
            0 => rhs,
            6 => Complex64::new(-rhs.im, rhs.re),
            12 => -rhs,
            18 => Complex64::new(rhs.im, -rhs.re),
            _ => self.to_complex() * rhs,
        }
    }
}

impl fmt::Debug for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = self.as_fraction();
        write!(f, "e({p}/{q})")
    }
}

/// Integer 2x2 matrix `(a b; c d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GL2Int {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl GL2Int {
    pub const IDENTITY: Self = GL2Int { a: 1, b: 0, c: 0, d: 1 };
    pub const S: Self = GL2Int { a: 0, b: -1, c: 1, d: 0 };
    pub const T: Self = GL2Int { a: 1, b: 1, c: 0, d: 1 };
    pub const MINUS_I: Self = GL2Int { a: -1, b: 0, c: 0, d: -1 };

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        GL2Int { a, b, c, d }
    }

    /// Upper-triangular Hecke representative `beta_{a,b,d} = (a b; 0 d)`.
    pub const fn beta(a: i64, b: i64, d: i64) -> Self {
        GL2Int { a, b, c: 0, d }
    }

    pub fn t_pow(n: i64) -> Self {
        GL2Int { a: 1, b: n, c: 0, d: 1 }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_sl2(&self) -> bool {
        self.det() == 1
    }

    /// Inverse of an `SL(2,Z)` element.
    pub fn inverse_sl2(&self) -> Self {
        GL2Int { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    fn require_sl2(&self) -> Result<()> {
        if self.is_sl2() {
            Ok(())
        } else {
            Err(Error::NotUnimodular { a: self.a, b: self.b, c: self.c, d: self.d, det: self.det() })
        }
    }

    /// Moebius action `(az + b) / (cz + d)`.
    pub fn act(&self, z: Complex64) -> Complex64 {
        let num = z * self.a as f64 + self.b as f64;
        let den = z * self.c as f64 + self.d as f64;
        num / den
    }
}

impl Mul for GL2Int {
    type Output = GL2Int;
    fn mul(self, r: GL2Int) -> GL2Int {
        GL2Int {
            a: self.a * r.a + self.b * r.c,
            b: self.a * r.b + self.b * r.d,
            c: self.c * r.a + self.d * r.c,
            d: self.c * r.b + self.d * r.d,
        }
    }
}

impl fmt::Display for GL2Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// `j_g(z;k) = e^{ik Arg(cz+d)}` with the principal branch `Arg in (-pi, pi]`.
pub fn j_factor(g: &GL2Int, z: Complex64, k: i32) -> Result<Complex64> {
    if z.im.is_nan() || z.im <= 0.0 {
        return Err(Error::NotInUpperHalfPlane(z.im));
    }
    let w = z * g.c as f64 + g.d as f64;
    if w.re == 0.0 && w.im == 0.0 {
        return Err(Error::NotInUpperHalfPlane(z.im));
    }
    // atan2 on a signed zero imaginary part can give -pi; the principal branch wants +pi.
    let mut arg = w.im.atan2(w.re);
    if arg <= -PI {
        arg = PI;
    }
    Ok(Complex64::cis(f64::from(k) * arg))
}

/// The weight-`k` multiplier system `v = v_eta^{2k}` on `SL(2,Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EtaMultiplier {
    pub k: u32,
    /// `v(T) = e(k/12)`
    pub xi: RootOfUnity,
}

impl EtaMultiplier {
    pub fn new(k: u32) -> Self {
        EtaMultiplier { k, xi: RootOfUnity::from_24ths(2 * i64::from(k)) }
    }

    /// `v(S) = e(-k/4)`
    pub fn at_s(&self) -> RootOfUnity {
        RootOfUnity::from_24ths(-6 * i64::from(self.k))
    }

    /// `v(-I) = e^{-pi i k}`
    pub fn at_minus_identity(&self) -> RootOfUnity {
        RootOfUnity::from_24ths(-12 * i64::from(self.k))
    }

    /// Evaluate `v(A)` by writing `A` as a word in `S` and `T`.
    ///
    /// Each step left-multiplies by `T^{-q}` and then `S`, which replaces the
    /// bottom row `(c, d)` by `(a - qc, b - qd)` with `0 <= a - qc < |c|`.
    pub fn eval(&self, m: &GL2Int) -> Result<RootOfUnity> {
        m.require_sl2()?;
        let xi = self.xi;
        let s_inv = self.at_s().inv();
        let mut acc = RootOfUnity::ONE;
        let mut cur = *m;
        while cur.c != 0 {
            let q = cur.a.div_euclid(cur.c);
            // v(cur) = xi^q v(T^{-q} cur)
            acc *= xi.pow(q);
            cur = GL2Int::t_pow(-q) * cur;
            // v(cur) = v(S)^{-1} v(S cur)
            acc *= s_inv;
            cur = GL2Int::S * cur;
        }
        if cur.a == 1 {
            acc *= xi.pow(cur.b);
        } else {
            // (-1 b; 0 -1) = -I * T^{-b}
            acc *= self.at_minus_identity() * xi.pow(-cur.b);
        }
        Ok(acc)
    }
}

/// `v_eta^{2k}(A)`.
pub fn eta_multiplier(k: u32, m: &GL2Int) -> Result<RootOfUnity> {
    EtaMultiplier::new(k).eval(m)
}

/// Closed form `e(k/12 [(a+d)c - bd(c^2-1) - 3c])`, valid only for odd `c > 0`.
///
/// Returns `None` outside its range of validity.
pub fn eta_multiplier_closed_form(k: u32, m: &GL2Int) -> Option<RootOfUnity> {
    if m.c <= 0 || m.c % 2 == 0 || !m.is_sl2() {
        return None;
    }
    let (a, b, c, d) = (i128::from(m.a), i128::from(m.b), i128::from(m.c), i128::from(m.d));
    let bracket = ((a + d) * c - b * d * (c * c - 1) - 3 * c).rem_euclid(12) as i64;
    Some(RootOfUnity::from_24ths(2 * i64::from(k) * bracket))
}

/// `v_Q(beta_{a,b,d}) = xi^{bd} chi_k(d)` for an upper-triangular representative.
pub fn v_q_factor(k: u32, beta: &GL2Int) -> Result<RootOfUnity> {
    if beta.c != 0 || beta.d <= 0 || beta.a <= 0 {
        return Err(Error::NotTriangular { a: beta.a, b: beta.b, c: beta.c, d: beta.d });
    }
    let xi = EtaMultiplier::new(k).xi;
    Ok(xi.pow(beta.b * beta.d) * chi_k(k, beta.d))
}
