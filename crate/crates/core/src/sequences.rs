//! Eulerian numbers, Bernoulli numbers and polynomials, negative-order
//! polylogarithms and the `E_n` sequence, all exact.
//!
//! `E_n = Li_{-n}(φ⁻¹) − (−1)^n Li_{-n}(−φ)` for `n ≥ 0`. The two transcendental
//! members `E_{−2} = π²/5` and `E_{−1} = 0` are handled numerically in
//! [`crate::numeric`].

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldElem, Rational};
use crate::real::Real;
use crate::series::VPoly;

/// Orders precomputed by [`tables`].
pub const DEFAULT_MAX_ORDER: usize = 64;

/// Eulerian numbers `A(n, k)`, `0 <= k <= n - 1`, with row 0 equal to `[1]`.
#[derive(Debug, Clone)]
pub struct EulerianTriangle {
    rows: Vec<Vec<BigInt>>,
}

impl EulerianTriangle {
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
        for n in 1..=max_n {
            let row = if n == 1 {
                vec![BigInt::one()]
            } else {
                let prev = &rows[n - 1];
                (0..n)
                    .map(|k| {
                        let mut a = BigInt::zero();
                        if k < prev.len() {
                            a += &prev[k] * BigInt::from(k + 1);
                        }
                        if k >= 1 && k - 1 < prev.len() {
                            a += &prev[k - 1] * BigInt::from(n - k);
                        }
                        a
                    })
                    .collect()
            };
            rows.push(row);
        }
        EulerianTriangle { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> Option<&[BigInt]> {
        self.rows.get(n).map(Vec::as_slice)
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }
}

/// Row `n` of the Eulerian triangle.
pub fn eulerian_row(n: usize) -> Vec<BigInt> {
    match tables().eulerian.row(n) {
        Some(r) => r.to_vec(),
        None => EulerianTriangle::new(n).rows.pop().unwrap_or_default(),
    }
}

/// Bernoulli numbers `B_0 … B_N` with `B_1 = −1/2`.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    values: Vec<Rational>,
}

impl BernoulliTable {
    /// Built from `Σ_{j=0}^{n} C(n+1, j) B_j = 0`.
    pub fn new(max_n: usize) -> Self {
        let mut values: Vec<Rational> = Vec::with_capacity(max_n + 1);
        values.push(Rational::one());
        for n in 1..=max_n {
            if n > 1 && n % 2 == 1 {
                values.push(Rational::zero());
                continue;
            }
            let acc = (0..n).fold(Rational::zero(), |acc, j| {
                acc + &values[j] * Rational::from_integer(binomial(BigInt::from(n + 1), BigInt::from(j)))
            });
            values.push(-acc / Rational::from_integer(BigInt::from(n + 1)));
        }
        BernoulliTable { values }
    }

    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&Rational> {
        self.values.get(n)
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

pub fn bernoulli_numbers(max_n: usize) -> BernoulliTable {
    let cached = &tables().bernoulli;
    if max_n <= cached.max_n() {
        BernoulliTable { values: cached.values[..=max_n].to_vec() }
    } else {
        BernoulliTable::new(max_n)
    }
}

fn bernoulli(n: usize) -> Rational {
    match tables().bernoulli.get(n) {
        Some(b) => b.clone(),
        None => BernoulliTable::new(n).values.pop().unwrap_or_default(),
    }
}

/// `i^r` as a field element.
pub(crate) fn i_pow(r: usize) -> FieldElem {
    match r % 4 {
        0 => FieldElem::one(),
        1 => FieldElem::i(),
        2 => FieldElem::from_int(-1),
        _ => -FieldElem::i(),
    }
}

/// `B_n(1/2 + i v)` as a polynomial in `v`.
pub fn bernoulli_poly_shifted(n: usize) -> VPoly {
    let half = Rational::new(1.into(), 2.into());
    let mut coeffs = vec![Rational::zero(); n + 1];
    // real rational coefficient of (i v)^r
    for j in 0..=n {
        let outer = Rational::from_integer(binomial(BigInt::from(n), BigInt::from(j))) * bernoulli(n - j);
        if outer.is_zero() {
            continue;
        }
        for (r, c) in coeffs.iter_mut().enumerate().take(j + 1) {
            let inner = Rational::from_integer(binomial(BigInt::from(j), BigInt::from(r)))
                * num_traits::pow(half.clone(), j - r);
            *c += &outer * inner;
        }
    }
    VPoly::from_coeffs(
        coeffs
            .into_iter()
            .enumerate()
            .map(|(r, c)| i_pow(r).scale(&c))
            .collect(),
    )
}

/// `Li_{-n}(w)` as an exact field element; `Li_0(w) = w/(1 − w)`.
pub fn polylog_neg(n: usize, w: &FieldElem) -> Result<FieldElem> {
    match tables().eulerian.row(n) {
        Some(row) => polylog_from_row(n, row, w),
        None => polylog_from_row(n, &eulerian_row(n), w),
    }
}

fn polylog_from_row(n: usize, row: &[BigInt], w: &FieldElem) -> Result<FieldElem> {
    let one_minus = &FieldElem::one() - w;
    if one_minus.is_zero() {
        return Err(Error::PolylogPole);
    }
    let denom_inv = one_minus.inv()?;
    if n == 0 {
        return Ok(w * &denom_inv);
    }
    let mut numer = FieldElem::zero();
    let mut w_pow = w.clone();
    for a in row {
        numer += &w_pow.scale(&Rational::from_integer(a.clone()));
        w_pow = &w_pow * w;
    }
    Ok(numer * denom_inv.pow(n as u32 + 1))
}

fn en_compute(n: usize, eulerian: &EulerianTriangle) -> FieldElem {
    let owned;
    let row = match eulerian.row(n) {
        Some(r) => r,
        None => {
            owned = EulerianTriangle::new(n);
            owned.row(n).expect("row just built")
        }
    };
    let a = polylog_from_row(n, row, &FieldElem::phi_inv()).expect("φ⁻¹ is not a pole");
    let b = polylog_from_row(n, row, &-FieldElem::phi()).expect("−φ is not a pole");
    if n.is_multiple_of(2) {
        a - b
    } else {
        a + b
    }
}

/// Exact `E_n` for `n ≥ 0`.
pub fn en_value(n: usize) -> FieldElem {
    match tables().en.get(n) {
        Some(e) => e.clone(),
        None => en_compute(n, &tables().eulerian),
    }
}

/// `E_0 … E_N` together with the transcendental `E_{−2}`.
#[derive(Debug, Clone)]
pub struct ENTable {
    values: Vec<FieldElem>,
}

impl ENTable {
    pub fn new(max_n: usize) -> Self {
        let eulerian = EulerianTriangle::new(max_n);
        Self::with_triangle(max_n, &eulerian)
    }

    fn with_triangle(max_n: usize, eulerian: &EulerianTriangle) -> Self {
        ENTable { values: (0..=max_n).map(|n| en_compute(n, eulerian)).collect() }
    }

    pub fn get(&self, n: usize) -> Option<&FieldElem> {
        self.values.get(n)
    }

    pub fn values(&self) -> &[FieldElem] {
        &self.values
    }

    /// `E_{−2} = π²/5` at `prec` bits.
    pub fn e_minus_two(&self, prec: usize) -> Real {
        let pi = Real::pi(prec);
        &pi * &pi / Real::from_i64(5, prec)
    }
}

/// Eagerly built, read-only tables shared across threads.
#[derive(Debug)]
pub struct SpecialTables {
    pub eulerian: EulerianTriangle,
    pub bernoulli: BernoulliTable,
    pub en: ENTable,
}

impl SpecialTables {
    pub fn new(max_order: usize) -> Self {
        let eulerian = EulerianTriangle::new(max_order);
        let bernoulli = BernoulliTable::new(max_order + 2);
        let en = ENTable::with_triangle(max_order, &eulerian);
        SpecialTables { eulerian, bernoulli, en }
    }
}

/// Tables through [`DEFAULT_MAX_ORDER`], built on first use.
pub fn tables() -> &'static SpecialTables {
    static TABLES: OnceLock<SpecialTables> = OnceLock::new();
    TABLES.get_or_init(|| SpecialTables::new(DEFAULT_MAX_ORDER))
}
