//! Truncated series in `t = s^(1/2)` whose coefficients are polynomials in the
//! Gaussian integration variable `v`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldElem, Rational};
use crate::real::{Complex, Real};
use crate::sequences::{bernoulli_poly_shifted, en_value};

/// Polynomial in `v` with exact field coefficients, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VPoly {
    coeffs: Vec<FieldElem>,
}

impl VPoly {
    pub fn zero() -> Self {
        VPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(FieldElem::one())
    }

    pub fn monomial(c: FieldElem, degree: usize) -> Self {
        let mut coeffs = vec![FieldElem::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(FieldElem::is_zero) {
            coeffs.pop();
        }
        VPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Coefficient of `v^j` (zero beyond the degree).
    pub fn coeff(&self, j: usize) -> FieldElem {
        self.coeffs.get(j).cloned().unwrap_or_else(FieldElem::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x.scale(r)).collect())
    }

    fn add_assign_scaled(&mut self, other: &VPoly) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), FieldElem::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        while self.coeffs.last().is_some_and(FieldElem::is_zero) {
            self.coeffs.pop();
        }
    }

    /// Evaluates at a complex point with every coefficient embedded at `prec` bits.
    pub fn eval(&self, v: &Complex, prec: usize) -> Complex {
        let mut acc = Complex::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * v) + &c.embed_bits(prec);
        }
        acc
    }
}

impl Add<&VPoly> for &VPoly {
    type Output = VPoly;
    fn add(self, rhs: &VPoly) -> VPoly {
        let mut out = self.clone();
        out.add_assign_scaled(rhs);
        out
    }
}

impl Sub<&VPoly> for &VPoly {
    type Output = VPoly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: &VPoly) -> VPoly {
        let neg = VPoly { coeffs: rhs.coeffs.iter().map(|c| -c).collect() };
        self + &neg
    }
}

impl Mul<&VPoly> for &VPoly {
    type Output = VPoly;
    fn mul(self, rhs: &VPoly) -> VPoly {
        if self.is_zero() || rhs.is_zero() {
            return VPoly::zero();
        }
        let mut out = vec![FieldElem::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] += &(a * b);
            }
        }
        VPoly::from_coeffs(out)
    }
}

/// Normalized Gaussian moments: entry `m` is `E[v^{2m}] = (2m − 1)!!`.
#[derive(Clone, Debug)]
pub struct GaussianMoments {
    moments: Vec<Rational>,
}

impl GaussianMoments {
    pub fn new(max_m: usize) -> Self {
        let mut moments = vec![Rational::one()];
        for m in 1..=max_m {
            let next = &moments[m - 1] * Rational::from_integer(BigInt::from(2 * m - 1));
            moments.push(next);
        }
        GaussianMoments { moments }
    }

    pub fn get(&self, m: usize) -> Option<&Rational> {
        self.moments.get(m)
    }

    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    /// `(1/√(2π)) ∫ e^{−v²/2} p(v) dv`, exact.
    pub fn integrate(&self, p: &VPoly) -> FieldElem {
        let mut acc = FieldElem::zero();
        for (deg, c) in p.coeffs().iter().enumerate().step_by(2) {
            if c.is_zero() {
                continue;
            }
            let m = deg / 2;
            let owned;
            let moment = match self.moments.get(m) {
                Some(x) => x,
                None => {
                    owned = GaussianMoments::new(m).moments.pop().expect("nonempty");
                    &owned
                }
            };
            acc += &c.scale(moment);
        }
        acc
    }
}

/// Replaces `v^{2m}` by `(2m − 1)!!` and odd powers by zero.
pub fn gaussian_integrate(p: &VPoly) -> FieldElem {
    GaussianMoments::new(p.degree().unwrap_or(0) / 2).integrate(p)
}

/// Series `Σ_{m=0}^{trunc_order} c_m(v) t^m`, stored densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxSeries {
    terms: Vec<VPoly>,
    trunc_order: usize,
}

impl PuiseuxSeries {
    pub fn zero(trunc_order: usize) -> Self {
        PuiseuxSeries { terms: vec![VPoly::zero(); trunc_order + 1], trunc_order }
    }

    pub fn one(trunc_order: usize) -> Self {
        let mut s = Self::zero(trunc_order);
        s.terms[0] = VPoly::one();
        s
    }

    /// Builds from `(power, coefficient)` pairs; powers beyond the order are dropped.
    pub fn from_terms<I: IntoIterator<Item = (usize, VPoly)>>(trunc_order: usize, terms: I) -> Self {
        let mut s = Self::zero(trunc_order);
        for (m, p) in terms {
            s.add_term(m, &p);
        }
        s
    }

    /// Scalar series `Σ c_m t^m` with constant coefficients.
    pub fn from_scalars(trunc_order: usize, coeffs: &[FieldElem]) -> Self {
        Self::from_terms(
            trunc_order,
            coeffs.iter().enumerate().map(|(m, c)| (m, VPoly::constant(c.clone()))),
        )
    }

    pub fn trunc_order(&self) -> usize {
        self.trunc_order
    }

    pub fn term(&self, m: usize) -> &VPoly {
        static ZERO: VPoly = VPoly { coeffs: Vec::new() };
        self.terms.get(m).unwrap_or(&ZERO)
    }

    pub fn terms(&self) -> &[VPoly] {
        &self.terms
    }

    /// Nonzero powers, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..=self.trunc_order).filter(|&m| !self.terms[m].is_zero()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(VPoly::is_zero)
    }

    pub fn add_term(&mut self, m: usize, p: &VPoly) {
        if m <= self.trunc_order {
            self.terms[m].add_assign_scaled(p);
        }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.trunc_order != other.trunc_order {
            return Err(Error::OrderMismatch { left: self.trunc_order, right: other.trunc_order });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(PuiseuxSeries {
            terms: self.terms.iter().zip(&other.terms).map(|(a, b)| a + b).collect(),
            trunc_order: self.trunc_order,
        })
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.trunc_order;
        let terms = (0..=n)
            .into_par_iter()
            .map(|m| {
                let mut acc = VPoly::zero();
                for k in 0..=m {
                    let (a, b) = (&self.terms[k], &other.terms[m - k]);
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_assign_scaled(&(a * b));
                    }
                }
                acc
            })
            .collect();
        Ok(PuiseuxSeries { terms, trunc_order: n })
    }

    /// `exp(self)` for a series without constant term.
    ///
    /// Uses `m f_m = Σ_{k=1}^{m} k a_k f_{m−k}`, which equals the truncated
    /// `Σ a^j / j!` exactly.
    pub fn exp(&self) -> Result<Self> {
        if !self.terms[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.trunc_order;
        let mut f: Vec<VPoly> = Vec::with_capacity(n + 1);
        f.push(VPoly::one());
        for m in 1..=n {
            let parts: Vec<VPoly> = (1..=m)
                .into_par_iter()
                .filter(|&k| !self.terms[k].is_zero() && !f[m - k].is_zero())
                .map(|k| (&self.terms[k] * &f[m - k]).scale_rational(&Rational::from_integer(k.into())))
                .collect();
            let mut acc = VPoly::zero();
            for p in &parts {
                acc.add_assign_scaled(p);
            }
            f.push(acc.scale_rational(&Rational::new(BigInt::one(), m.into())));
        }
        Ok(PuiseuxSeries { terms: f, trunc_order: n })
    }

    /// Formal logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.terms[0].is_one() {
            return Err(Error::ConstantTermNotOne);
        }
        let n = self.trunc_order;
        let mut g: Vec<VPoly> = Vec::with_capacity(n + 1);
        g.push(VPoly::zero());
        for m in 1..=n {
            // m g_m = m a_m − Σ_{k=1}^{m−1} k g_k a_{m−k}
            let parts: Vec<VPoly> = (1..m)
                .into_par_iter()
                .filter(|&k| !g[k].is_zero() && !self.terms[m - k].is_zero())
                .map(|k| (&g[k] * &self.terms[m - k]).scale_rational(&Rational::from_integer(k.into())))
                .collect();
            let mut acc = VPoly::zero();
            for p in &parts {
                acc.add_assign_scaled(p);
            }
            let gm = &self.terms[m] - &acc.scale_rational(&Rational::new(BigInt::one(), m.into()));
            g.push(gm);
        }
        Ok(PuiseuxSeries { terms: g, trunc_order: n })
    }

    /// Numeric value at real `t` and complex `v`.
    pub fn eval(&self, t: &Real, v: &Complex, prec: usize) -> Complex {
        let mut acc = Complex::zero(prec);
        let tc = Complex::from_real(t.with_prec(prec));
        for p in self.terms.iter().rev() {
            acc = &(&acc * &tc) + &p.eval(v, prec);
        }
        acc
    }

    /// Debug dump `{"t^m": [[coords of v^0], [coords of v^1], ...]}`.
    pub fn to_debug_json(&self) -> serde_json::Value {
        let mut map = BTreeMap::new();
        for m in self.support() {
            let polys: Vec<serde_json::Value> = self.terms[m]
                .coeffs()
                .iter()
                .map(|c| serde_json::to_value(c).expect("field element serializes")["coords"].clone())
                .collect();
            map.insert(format!("t^{m}"), serde_json::Value::Array(polys));
        }
        serde_json::to_value(map).expect("map serializes")
    }
}

pub fn series_add(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Result<PuiseuxSeries> {
    a.add(b)
}

pub fn series_mul(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Result<PuiseuxSeries> {
    a.mul(b)
}

pub fn series_exp(a: &PuiseuxSeries) -> Result<PuiseuxSeries> {
    a.exp()
}

pub fn series_log(a: &PuiseuxSeries) -> Result<PuiseuxSeries> {
    a.log()
}

/// `J_N` after substituting the real Gaussian scale `v ↦ v·5^{−1/4}/t`:
///
/// `Σ_{k=2}^{N} E_{k−1} t^{2k} B_{k+1}(1/2 + i v 5^{−1/4} t^{−1}) / (k+1)!`
///
/// The `v^j` monomial of `B_{k+1}(1/2 + i v)` lands on `t^{2k−j}` with an extra
/// factor `5^{−j/4}`, so the lowest power contributed by `k` is `t^{k−1}`.
pub fn build_j_substituted(n: usize, trunc_order: usize) -> Result<PuiseuxSeries> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("J_N needs N >= 2, got {n}")));
    }
    let d_inv = FieldElem::d().inv()?;
    let max_deg = n + 1;
    let mut d_inv_pow = Vec::with_capacity(max_deg + 1);
    d_inv_pow.push(FieldElem::one());
    for j in 1..=max_deg {
        let next = &d_inv_pow[j - 1] * &d_inv;
        d_inv_pow.push(next);
    }
    let mut series = PuiseuxSeries::zero(trunc_order);
    let mut fact = BigInt::from(2); // (k + 1)! at k = 1
    for k in 2..=n {
        fact *= BigInt::from(k + 1);
        // lowest power from this k is k − 1
        if k - 1 > trunc_order {
            continue;
        }
        let weight = en_value(k - 1).scale(&Rational::new(BigInt::one(), fact.clone()));
        let bern = bernoulli_poly_shifted(k + 1);
        for (j, c) in bern.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = 2 * k as i64 - j as i64;
            if power < 0 {
                return Err(Error::NegativePower { k, degree: j, power });
            }
            let power = power as usize;
            if power > trunc_order {
                continue;
            }
            let coeff = &(&weight * c) * &d_inv_pow[j];
            series.add_term(power, &VPoly::monomial(coeff, j));
        }
    }
    Ok(series)
}
