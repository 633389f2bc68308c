//! Exact arithmetic in the degree-8 field Q(i, d) with d = 5^(1/4).
//!
//! Elements are dense coordinate vectors over the basis `d^a i^b`
//! (`0 <= a <= 3`, `b` in `{0, 1}`), stored at index `a + 4b`. The relations
//! `d^4 = 5` and `i^2 = -1` are applied during multiplication and never stored.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::real::{bits_for_digits, Complex, Real};

pub type Rational = BigRational;

pub const DIM: usize = 8;

/// Basis labels in coordinate order.
pub const BASIS: [&str; DIM] = ["1", "d", "d2", "d3", "i", "id", "id2", "id3"];

const ONE: usize = 0;
const D2: usize = 2;

/// `(target index, integer factor)` for the product of basis elements `j * k`.
const fn basis_product(j: usize, k: usize) -> (usize, i64) {
    let (a1, b1) = (j % 4, j / 4);
    let (a2, b2) = (k % 4, k / 4);
    let (mut a, mut factor) = (a1 + a2, 1i64);
    if a >= 4 {
        a -= 4;
        factor *= 5;
    }
    let mut b = b1 + b2;
    if b == 2 {
        b = 0;
        factor = -factor;
    }
    (a + 4 * b, factor)
}

const fn product_table() -> [[(usize, i64); DIM]; DIM] {
    let mut t = [[(0usize, 0i64); DIM]; DIM];
    let mut j = 0;
    while j < DIM {
        let mut k = 0;
        while k < DIM {
            t[j][k] = basis_product(j, k);
            k += 1;
        }
        j += 1;
    }
    t
}

static PRODUCT: [[(usize, i64); DIM]; DIM] = product_table();

/// Smallest subfield containing an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SubfieldTag {
    Rational,
    Sqrt5,
    Full,
}

impl fmt::Display for SubfieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubfieldTag::Rational => "RATIONAL",
            SubfieldTag::Sqrt5 => "SQRT5",
            SubfieldTag::Full => "FULL",
        })
    }
}

/// Exact element of Q(i, 5^(1/4)).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    coords: [Rational; DIM],
}

impl FieldElem {
    pub fn zero() -> Self {
        FieldElem { coords: std::array::from_fn(|_| Rational::zero()) }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_coords(coords: [Rational; DIM]) -> Self {
        FieldElem { coords }
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut e = Self::zero();
        e.coords[ONE] = r;
        e
    }

    pub fn from_int(i: i64) -> Self {
        Self::from_rational(Rational::from_integer(i.into()))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(Rational::new(n.into(), d.into()))
    }

    /// `p + q·√5`.
    pub fn from_sqrt5_parts(p: Rational, q: Rational) -> Self {
        let mut e = Self::zero();
        e.coords[ONE] = p;
        e.coords[D2] = q;
        e
    }

    /// Basis element `d^a i^b`.
    pub fn basis(a: usize, b: usize) -> Self {
        assert!(a < 4 && b < 2, "basis index out of range");
        let mut e = Self::zero();
        e.coords[a + 4 * b] = Rational::one();
        e
    }

    /// The positive real fourth root of 5.
    pub fn d() -> Self {
        Self::basis(1, 0)
    }

    pub fn i() -> Self {
        Self::basis(0, 1)
    }

    pub fn sqrt5() -> Self {
        Self::basis(2, 0)
    }

    /// Golden ratio `(1 + √5)/2`.
    pub fn phi() -> Self {
        let half = Rational::new(1.into(), 2.into());
        Self::from_sqrt5_parts(half.clone(), half)
    }

    /// `φ⁻¹ = (√5 − 1)/2`.
    pub fn phi_inv() -> Self {
        let half = Rational::new(1.into(), 2.into());
        Self::from_sqrt5_parts(-half.clone(), half)
    }

    pub fn coords(&self) -> &[Rational; DIM] {
        &self.coords
    }

    pub fn coord(&self, idx: usize) -> &Rational {
        &self.coords[idx]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[ONE].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// True when every coordinate carrying a factor of `i` vanishes.
    pub fn is_real(&self) -> bool {
        self.coords[4..].iter().all(Zero::is_zero)
    }

    pub fn subfield(&self) -> SubfieldTag {
        let nonzero = |k: usize| !self.coords[k].is_zero();
        if (0..DIM).filter(|&k| k != ONE).all(|k| !nonzero(k)) {
            SubfieldTag::Rational
        } else if (0..DIM).filter(|&k| k != ONE && k != D2).all(|k| !nonzero(k)) {
            SubfieldTag::Sqrt5
        } else {
            SubfieldTag::Full
        }
    }

    /// `(p, q)` with `self = p + q·√5`, when the element lies in Q(√5).
    pub fn sqrt5_parts(&self) -> Option<(Rational, Rational)> {
        (self.subfield() <= SubfieldTag::Sqrt5)
            .then(|| (self.coords[ONE].clone(), self.coords[D2].clone()))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        FieldElem { coords: std::array::from_fn(|k| &self.coords[k] * r) }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&Rational::from_integer(n.into()))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
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

    /// Multiplicative inverse via an exact 8×8 solve of `self · x = 1`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // column k of the multiplication matrix is self * basis_k
        let mut m: Vec<Vec<Rational>> = vec![vec![Rational::zero(); DIM + 1]; DIM];
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, &(target, factor)) in PRODUCT[j].iter().enumerate() {
                m[target][k] += c * Rational::from_integer(factor.into());
            }
        }
        m[ONE][DIM] = Rational::one();
        for col in 0..DIM {
            let pivot = (col..DIM)
                .find(|&r| !m[r][col].is_zero())
                .ok_or(Error::DivisionByZero)?;
            m.swap(col, pivot);
            let p = m[col][col].clone();
            for x in m[col].iter_mut() {
                *x /= &p;
            }
            for r in 0..DIM {
                if r == col || m[r][col].is_zero() {
                    continue;
                }
                let f = m[r][col].clone();
                let pivot = m[col].clone();
                for (x, p) in m[r][col..].iter_mut().zip(&pivot[col..]) {
                    *x -= &f * p;
                }
            }
        }
        Ok(FieldElem { coords: std::array::from_fn(|k| m[k][DIM].clone()) })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Numeric value with `d` the positive real 5^(1/4), at `digits` decimal digits.
    pub fn embed(&self, digits: u32) -> Complex {
        self.embed_bits(bits_for_digits(digits.max(1)) + 32)
    }

    pub fn embed_bits(&self, prec: usize) -> Complex {
        let mut re = Real::zero(prec);
        let mut im = Real::zero(prec);
        if self.is_zero() {
            return Complex::new(re, im);
        }
        let sqrt5 = Real::from_i64(5, prec).sqrt();
        let d = sqrt5.sqrt();
        let powers = [Real::one(prec), d.clone(), sqrt5.clone(), &sqrt5 * &d];
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = Real::from_ratio(c, prec) * &powers[k % 4];
            if k < 4 {
                re = re + term;
            } else {
                im = im + term;
            }
        }
        Complex::new(re, im)
    }

    /// Real part of the embedding.
    pub fn to_real(&self, digits: u32) -> Real {
        self.embed(digits).re
    }

    pub fn to_f64(&self) -> f64 {
        self.to_real(20).to_f64()
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for FieldElem {
    /// `p + q·√5` inside Q(√5), the full coordinate form otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sqrt5_parts() {
            Some((p, q)) if q.is_zero() => write!(f, "{}", fmt_rational(&p)),
            Some((p, q)) if p.is_zero() => write!(f, "{}·√5", fmt_rational(&q)),
            Some((p, q)) => {
                let sign = if q.is_negative() { "−" } else { "+" };
                write!(f, "{} {} {}·√5", fmt_rational(&p), sign, fmt_rational(&q.abs()))
            }
            None => {
                let parts: Vec<String> = self
                    .coords
                    .iter()
                    .zip(BASIS)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, b)| format!("({})·{}", fmt_rational(c), b))
                    .collect();
                write!(f, "{}", parts.join(" + "))
            }
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem[{self}]")
    }
}

impl Add<&FieldElem> for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        FieldElem { coords: std::array::from_fn(|k| &self.coords[k] + &rhs.coords[k]) }
    }
}

impl Sub<&FieldElem> for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        FieldElem { coords: std::array::from_fn(|k| &self.coords[k] - &rhs.coords[k]) }
    }
}

impl Mul<&FieldElem> for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        let mut out = FieldElem::zero();
        for (j, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in rhs.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (target, factor) = PRODUCT[j][k];
                let prod = a * b;
                if factor == 1 {
                    out.coords[target] += prod;
                } else {
                    out.coords[target] += prod * Rational::from_integer(factor.into());
                }
            }
        }
        out
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { coords: std::array::from_fn(|k| -&self.coords[k]) }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

impl AddAssign<&FieldElem> for FieldElem {
    fn add_assign(&mut self, rhs: &FieldElem) {
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                (&self).$m(rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

/// JSON shape: `{"basis": [...], "coords": [["num", "den"], ...]}`.
#[derive(Serialize, Deserialize)]
struct FieldElemJson {
    basis: Vec<String>,
    coords: Vec<[String; 2]>,
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldElemJson {
            basis: BASIS.iter().map(|b| b.to_string()).collect(),
            coords: self
                .coords
                .iter()
                .map(|c| [c.numer().to_string(), c.denom().to_string()])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FieldElemJson::deserialize(d)?;
        FieldElem::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<FieldElemJson> for FieldElem {
    type Error = Error;

    fn try_from(raw: FieldElemJson) -> Result<Self> {
        if raw.basis.len() != DIM || raw.basis.iter().zip(BASIS).any(|(a, b)| a != b) {
            return Err(Error::Parse(format!("unexpected basis {:?}", raw.basis)));
        }
        if raw.coords.len() != DIM {
            return Err(Error::Parse(format!("expected {DIM} coordinates")));
        }
        let mut coords: [Rational; DIM] = std::array::from_fn(|_| Rational::zero());
        for (slot, [n, d]) in coords.iter_mut().zip(raw.coords) {
            let n: BigInt = n.parse().map_err(|_| Error::Parse(format!("bad numerator {n:?}")))?;
            let d: BigInt = d.parse().map_err(|_| Error::Parse(format!("bad denominator {d:?}")))?;
            if d.is_zero() || d.is_negative() {
                return Err(Error::Parse("denominator must be positive".into()));
            }
            *slot = Rational::new(n, d);
        }
        Ok(FieldElem { coords })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn add_examples() {
        let s = FieldElem::one() + FieldElem::sqrt5();
        assert_eq!(s.coord(0), &q(1, 1));
        assert_eq!(s.coord(2), &q(1, 1));
        assert_eq!(FieldElem::phi() + FieldElem::phi_inv(), FieldElem::sqrt5());
    }

    #[test]
    fn mul_relations() {
        let d = FieldElem::d();
        assert_eq!(&d * &d.pow(3), FieldElem::from_int(5));
        assert_eq!(FieldElem::i() * FieldElem::i(), FieldElem::from_int(-1));
        let phi = FieldElem::phi();
        assert_eq!(&phi * &phi, &phi + &FieldElem::one());
        // (−d)^4 = 5 and (i d)^4 = 5 as well
        assert_eq!((FieldElem::i() * d).pow(4), FieldElem::from_int(5));
    }

    #[test]
    fn inverse_examples() {
        let d = FieldElem::d();
        assert_eq!(d.inv().unwrap(), d.pow(3).scale(&q(1, 5)));
        let x = FieldElem::from_int(2) + FieldElem::sqrt5();
        assert_eq!(x.inv().unwrap(), FieldElem::sqrt5() - FieldElem::from_int(2));
        assert_eq!(FieldElem::i().inv().unwrap(), -FieldElem::i());
        assert_eq!(FieldElem::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn golden_ratio_arguments() {
        let a = FieldElem::phi_inv();
        let b = -FieldElem::phi();
        assert_eq!(&a + &b, FieldElem::from_int(-1));
        assert_eq!(&a * &b, FieldElem::from_int(-1));
        let phi = FieldElem::phi();
        assert!((&phi * &phi - &phi - FieldElem::one()).is_zero());
        assert_eq!(phi.inv().unwrap(), a);
    }

    #[test]
    fn embed_examples() {
        let s5 = FieldElem::sqrt5().embed(30);
        assert_eq!(s5.re.to_sci(30), "2.23606797749978969640917366873e0");
        assert!(s5.im.is_zero());
        let x = FieldElem::sqrt5().scale(&q(1, 40));
        assert_eq!(x.embed(10).re.to_sci(10), "5.590169944e-2");
        assert!(FieldElem::zero().embed(5).re.is_zero());
        let di = FieldElem::basis(3, 1).embed(25);
        assert!(di.re.is_zero());
        assert!((di.im.to_f64() - 5f64.powf(0.75)).abs() < 1e-14);
    }

    #[test]
    fn subfield_examples() {
        assert_eq!(FieldElem::sqrt5().scale_int(8).subfield(), SubfieldTag::Sqrt5);
        assert_eq!(FieldElem::d().subfield(), SubfieldTag::Full);
        assert_eq!(FieldElem::from_int(4).subfield(), SubfieldTag::Rational);
        assert_eq!(FieldElem::i().subfield(), SubfieldTag::Full);
    }

    #[test]
    fn display_forms() {
        assert_eq!(FieldElem::sqrt5().scale(&q(1, 40)).to_string(), "1/40·√5");
        assert_eq!(FieldElem::phi_inv().to_string(), "-1/2 + 1/2·√5");
        assert_eq!(FieldElem::from_int(4).to_string(), "4");
        assert_eq!(FieldElem::d().to_string(), "(1)·d");
    }

    #[test]
    fn json_shape_and_rejects() {
        let x = FieldElem::phi();
        let j = serde_json::to_value(&x).unwrap();
        assert_eq!(j["basis"][2], "d2");
        assert_eq!(j["coords"][2], serde_json::json!(["1", "2"]));
        let back: FieldElem = serde_json::from_value(j).unwrap();
        assert_eq!(back, x);
        let bad = serde_json::json!({"basis": BASIS, "coords": [["1","0"],["0","1"],["0","1"],["0","1"],["0","1"],["0","1"],["0","1"],["0","1"]]});
        assert!(serde_json::from_value::<FieldElem>(bad).is_err());
    }

    fn small_elem() -> impl Strategy<Value = FieldElem> {
        prop::array::uniform8((-20i64..20, 1i64..6))
            .prop_map(|cs| FieldElem::from_coords(cs.map(|(n, d)| q(n, d))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(a in small_elem(), b in small_elem(), c in small_elem()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        }

        #[test]
        fn inverse_is_exact(a in small_elem()) {
            prop_assume!(!a.is_zero());
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }

        #[test]
        fn embedding_is_homomorphic(a in small_elem(), b in small_elem()) {
            let digits = 40;
            let lhs = (&a * &b).embed(digits);
            let rhs = a.embed(digits) * b.embed(digits);
            let diff = (&lhs - &rhs).abs().to_f64();
            let scale = 1.0 + rhs.abs().to_f64();
            prop_assert!(diff < 10f64.powi(1 - digits as i32) * scale);
        }
    }
}
