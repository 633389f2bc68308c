//! Arbitrary-precision real and complex numbers.
//!
//! Thin value types over `astro_float::BigFloat`. Every value carries its
//! working precision in bits; binary operations run at the larger of the two.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;

const RM: RoundingMode = RoundingMode::ToEven;
/// astro-float rejects mantissas shorter than one word.
const MIN_PREC: usize = 64;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Bits needed to carry `digits` significant decimal digits.
pub fn bits_for_digits(digits: u32) -> usize {
    // log2(10) < 3.3220
    (digits as usize * 33220).div_ceil(10000) + 8
}

#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    prec: usize,
}

impl Real {
    fn wrap(v: BigFloat, prec: usize) -> Self {
        Real { v, prec: prec.max(MIN_PREC) }
    }

    pub fn zero(prec: usize) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(i: i64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_i64(i, prec.max(MIN_PREC)), prec)
    }

    /// Exact conversion of the binary value of `f`.
    pub fn from_f64(f: f64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_f64(f, prec.max(64)), prec)
    }

    pub fn parse(s: &str, prec: usize) -> Self {
        Self::wrap(with_consts(|cc| BigFloat::parse(s, Radix::Dec, prec.max(MIN_PREC), RM, cc)), prec)
    }

    pub fn from_bigint(i: &BigInt, prec: usize) -> Self {
        Self::parse(&i.to_string(), prec)
    }

    pub fn from_ratio(r: &BigRational, prec: usize) -> Self {
        Self::from_bigint(r.numer(), prec) / Self::from_bigint(r.denom(), prec)
    }

    pub fn pi(prec: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(prec.max(MIN_PREC), RM)), prec)
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn with_prec(&self, prec: usize) -> Self {
        let mut v = self.v.clone();
        if prec < self.prec {
            let _ = v.set_precision(prec.max(MIN_PREC), RM);
        }
        Self::wrap(v, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative()
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.prec)
    }

    pub fn recip(&self) -> Self {
        Self::wrap(self.v.reciprocal(self.prec, RM), self.prec)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.v.sqrt(self.prec, RM), self.prec)
    }

    pub fn exp(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.exp(self.prec, RM, cc)), self.prec)
    }

    pub fn ln(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.ln(self.prec, RM, cc)), self.prec)
    }

    pub fn cos(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.cos(self.prec, RM, cc)), self.prec)
    }

    pub fn sin(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.sin(self.prec, RM, cc)), self.prec)
    }

    pub fn cosh(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.cosh(self.prec, RM, cc)), self.prec)
    }

    pub fn atan(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.atan(self.prec, RM, cc)), self.prec)
    }

    pub fn powi(&self, n: usize) -> Self {
        Self::wrap(self.v.powi(n, self.prec, RM), self.prec)
    }

    pub fn pow(&self, e: &Real) -> Self {
        let p = self.prec.max(e.prec);
        Self::wrap(with_consts(|cc| self.v.pow(&e.v, p, RM, cc)), p)
    }

    /// Two-argument arctangent, the principal argument of `x + i y`.
    pub fn atan2(y: &Real, x: &Real) -> Real {
        let p = y.prec.max(x.prec);
        if x.is_zero() {
            let half_pi = Real::pi(p) / Real::from_i64(2, p);
            return if y.is_negative() {
                -half_pi
            } else if y.is_zero() {
                Real::zero(p)
            } else {
                half_pi
            };
        }
        let base = (y / x).atan();
        if !x.is_negative() {
            base
        } else if y.is_negative() {
            base - Real::pi(p)
        } else {
            base + Real::pi(p)
        }
    }

    pub fn max(self, other: Real) -> Real {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        self.raw_decimal().parse().unwrap_or(f64::NAN)
    }

    fn raw_decimal(&self) -> String {
        with_consts(|cc| self.v.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into())
    }

    /// Decimal rendering with `digits` significant digits, `d.ddd…e±x`.
    pub fn to_sci(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        if !self.is_finite() {
            return self.raw_decimal();
        }
        let raw = self.raw_decimal();
        let (neg, body) = match raw.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, raw.as_str()),
        };
        let (mant, exp) = body.split_once('e').unwrap_or((body, "0"));
        let mut exp: i64 = exp.parse().unwrap_or(0);
        let mut ds: Vec<u8> = mant.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
        // normalize leading zeros, e.g. "0.0"
        while ds.len() > 1 && ds[0] == 0 {
            ds.remove(0);
            exp -= 1;
        }
        let digits = digits.max(1);
        if ds.len() > digits {
            let round_up = ds[digits] >= 5;
            ds.truncate(digits);
            if round_up {
                let mut i = digits;
                loop {
                    if i == 0 {
                        ds.insert(0, 1);
                        ds.truncate(digits);
                        exp += 1;
                        break;
                    }
                    i -= 1;
                    if ds[i] == 9 {
                        ds[i] = 0;
                    } else {
                        ds[i] += 1;
                        break;
                    }
                }
            }
        }
        ds.resize(digits, 0);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push((b'0' + ds[0]) as char);
        if ds.len() > 1 {
            out.push('.');
            out.extend(ds[1..].iter().map(|d| (b'0' + d) as char));
        }
        out.push_str(&format!("e{exp}"));
        out
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci(30))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(30);
        write!(f, "{}", self.to_sci(digits))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                let p = self.prec.max(rhs.prec);
                Real::wrap(self.v.$m(&rhs.v, p, RM), p)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
    };
}

real_binop!(Add, add);
real_binop!(Sub, sub);
real_binop!(Mul, mul);
real_binop!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        let mut v = self.v.clone();
        v.inv_sign();
        Real::wrap(v, self.prec)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        let mut v = self.v.clone();
        v.inv_sign();
        Real::wrap(v, self.prec)
    }
}

/// Arbitrary-precision complex number in Cartesian form.
#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn from_real(re: Real) -> Self {
        let p = re.prec();
        Complex { re, im: Real::zero(p) }
    }

    pub fn zero(prec: usize) -> Self {
        Complex::from_real(Real::zero(prec))
    }

    pub fn one(prec: usize) -> Self {
        Complex::from_real(Real::one(prec))
    }

    pub fn i(prec: usize) -> Self {
        Complex::new(Real::zero(prec), Real::one(prec))
    }

    pub fn prec(&self) -> usize {
        self.re.prec().max(self.im.prec())
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, r: &Real) -> Self {
        Complex::new(&self.re * r, &self.im * r)
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        Complex::new(&m * self.im.cos(), &m * self.im.sin())
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Complex::new(self.abs().ln(), Real::atan2(&self.im, &self.re))
    }

    pub fn powi(&self, n: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Complex::one(self.prec());
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Complex::new(&self.re / &d, -(&self.im / &d))
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        Complex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div<&Complex> for &Complex {
    type Output = Complex;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Complex) -> Complex {
        self * &rhs.recip()
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

macro_rules! complex_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Complex> for Complex {
            type Output = Complex;
            fn $m(self, rhs: Complex) -> Complex {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Complex> for Complex {
            type Output = Complex;
            fn $m(self, rhs: &Complex) -> Complex {
                (&self).$m(rhs)
            }
        }
    };
}

complex_owned!(Add, add);
complex_owned!(Sub, sub);
complex_owned!(Mul, mul);
complex_owned!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 256;

    #[test]
    fn sci_rendering_rounds() {
        let x = Real::parse("2.2360679774997896964091736687", P);
        assert_eq!(x.to_sci(5), "2.2361e0");
        let y = Real::parse("0.0999996", P);
        assert_eq!(y.to_sci(3), "1.00e-1");
        assert_eq!(Real::from_i64(-40, P).to_sci(2), "-4.0e1");
        assert_eq!(Real::zero(P).to_sci(4), "0");
    }

    #[test]
    fn to_f64_roundtrip() {
        for f in [0.1, -3.25, 1e-30, 6.02e23] {
            assert_eq!(Real::from_f64(f, P).to_f64(), f);
        }
    }

    #[test]
    fn atan2_quadrants() {
        let pi = Real::pi(P).to_f64();
        let c = |x: f64, y: f64| Real::atan2(&Real::from_f64(y, P), &Real::from_f64(x, P)).to_f64();
        assert!((c(-1.0, 1.0) - 3.0 * pi / 4.0).abs() < 1e-15);
        assert!((c(-1.0, -1.0) + 3.0 * pi / 4.0).abs() < 1e-15);
        assert!((c(0.0, -2.0) + pi / 2.0).abs() < 1e-15);
    }

    #[test]
    fn complex_exp_ln() {
        let z = Complex::new(Real::from_f64(0.3, P), Real::from_f64(-2.5, P));
        let back = z.exp().ln();
        assert!((&back.re - &z.re).abs().to_f64() < 1e-70);
        assert!((&back.im - &z.im).abs().to_f64() < 1e-70);
    }
}
