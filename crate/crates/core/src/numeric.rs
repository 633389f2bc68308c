//! Direct high-precision evaluation of `F(e^{−s})`, `R(s)` and the identities
//! the expansion rests on.
//!
//! Everything here is a numeric witness for the exact pipeline: `F` is summed
//! term by term, the normalized remainder `R(s)` is compared with
//! `1 + Σ b_j s^j`, and the log-Pochhammer, constant-term and minor-arc
//! statements are checked independently.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::ExpansionResult;
use crate::field::FieldElem;
use crate::real::{bits_for_digits, Complex, Real};
use crate::sequences::{bernoulli_poly_shifted, polylog_neg};

pub const MIN_DIGITS: u32 = 30;
pub const DEFAULT_GUARD: u32 = 20;
/// Working precision beyond which evaluation is refused.
pub const MAX_WORKING_DIGITS: u32 = 1200;

/// Decimal working precision plus guard digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub digits: u32,
    pub guard: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { digits: MIN_DIGITS, guard: DEFAULT_GUARD }
    }
}

impl PrecisionContext {
    pub fn new(digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::InvalidArgument(format!(
                "working precision {digits} is below the minimum of {MIN_DIGITS} digits"
            )));
        }
        Ok(PrecisionContext { digits, guard: DEFAULT_GUARD })
    }

    /// Digits that `F_direct` needs at `s` before any output digits:
    /// `ceil(π²/(5s)/ln 10) + 40`.
    pub fn required_digits(s: f64) -> u32 {
        let size = std::f64::consts::PI.powi(2) / (5.0 * s) / std::f64::consts::LN_10;
        size.ceil() as u32 + 40
    }

    /// Smallest context satisfying the policy at `s` with `out_digits` to spare.
    pub fn for_s(s: f64, out_digits: u32) -> Self {
        let digits = (Self::required_digits(s) + out_digits).max(MIN_DIGITS);
        PrecisionContext { digits, guard: DEFAULT_GUARD }
    }

    /// Binary precision covering `digits + guard`.
    pub fn bits(&self) -> usize {
        bits_for_digits(self.digits + self.guard)
    }

    fn eps(&self) -> Real {
        Real::parse(&format!("1e-{}", self.digits), self.bits())
    }
}

/// Parses a decimal string exactly (no detour through `f64`).
pub fn parse_s(text: &str, prec: usize) -> Result<Real> {
    let t = text.trim();
    if t.parse::<f64>().map(|f| !f.is_finite()).unwrap_or(true) {
        return Err(Error::Parse(format!("not a number: {text:?}")));
    }
    Ok(Real::parse(t, prec))
}

/// `(z; q)_m = ∏_{n<m} (1 − z q^n)`; `m = None` multiplies until `|z q^n|` drops
/// below `10^{−(digits+guard)}`.
pub fn pochhammer_q(z: &Complex, q: &Real, m: Option<usize>, ctx: &PrecisionContext) -> Complex {
    let prec = ctx.bits();
    let tiny = Real::parse(&format!("1e-{}", ctx.digits + ctx.guard), prec);
    let mut acc = Complex::one(prec);
    let mut zq = z.clone();
    let mut n = 0usize;
    loop {
        match m {
            Some(m) if n >= m => break,
            None if zq.abs() < tiny => break,
            _ => {}
        }
        acc = &acc * &(&Complex::one(prec) - &zq);
        zq = zq.scale(q);
        n += 1;
    }
    acc
}

/// Value of `F(e^{−s})` and the number of series terms summed.
#[derive(Debug, Clone)]
pub struct FSum {
    pub value: Real,
    pub terms_used: usize,
}

fn check_policy(s: &Real, ctx: &PrecisionContext) -> Result<f64> {
    let sf = s.to_f64();
    if sf.is_nan() || sf <= 0.0 || !sf.is_finite() {
        return Err(Error::InvalidArgument(format!("s must be positive, got {sf}")));
    }
    let required = PrecisionContext::required_digits(sf);
    if ctx.digits < required {
        return Err(Error::PrecisionPolicy { required, available: ctx.digits });
    }
    if ctx.digits > MAX_WORKING_DIGITS {
        return Err(Error::PrecisionPolicy { required: ctx.digits, available: MAX_WORKING_DIGITS });
    }
    Ok(sf)
}

/// Sums `F(e^{−s}) = Σ q^{m(m+1)/2}/(q)_m²`.
///
/// The terms first grow and then decay, so summation only stops once the
/// term ratio is below one and the term is under `10^{−digits}` of the sum for
/// five consecutive indices.
pub fn f_direct(s: &Real, ctx: &PrecisionContext) -> Result<FSum> {
    check_policy(s, ctx)?;
    let prec = ctx.bits();
    let s = s.with_prec(prec);
    let q = (-&s).exp();
    let eps = ctx.eps();
    let one = Real::one(prec);

    let mut sum = Real::one(prec);
    let mut term = Real::one(prec);
    let mut qm = Real::one(prec);
    let mut quiet = 0;
    let mut m = 0usize;
    while quiet < 5 {
        m += 1;
        qm = &qm * &q;
        let den = &one - &qm;
        let next = &term * &qm / (&den * &den);
        let decaying = next < term;
        term = next;
        sum = &sum + &term;
        if decaying && term < &eps * &sum {
            quiet += 1;
        } else {
            quiet = 0;
        }
    }
    Ok(FSum { value: sum, terms_used: m + 1 })
}

/// `√(2π√5/s) · e^{−π²/(5s)}`, the reciprocal of the leading behaviour.
fn normalizer(s: &Real) -> Real {
    let prec = s.prec();
    let pi = Real::pi(prec);
    let five = Real::from_i64(5, prec);
    let scale = (Real::from_i64(2, prec) * &pi * five.sqrt() / s).sqrt();
    scale * (-(&pi * &pi) / (five * s)).exp()
}

/// `R(s) = F(e^{−s})·√(2π√5/s)·e^{−π²/(5s)}`.
pub fn r_numeric(s: &Real, ctx: &PrecisionContext) -> Result<Real> {
    let f = f_direct(s, ctx)?;
    Ok(f.value * normalizer(&s.with_prec(ctx.bits())))
}

/// Comparison of `R(s)` with the truncated expansion at one `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub s: f64,
    pub f_value: String,
    pub r_numeric: String,
    pub order: usize,
    pub asymptotic_value: String,
    pub abs_err: f64,
    pub rel_err: f64,
    pub terms_used: usize,
    pub working_digits: u32,
}

/// Evaluates `F` and `R` at `s` and compares with `1 + Σ_{j≤order} b_j s^j`.
pub fn evaluate(s: &Real, order: usize, exp: &ExpansionResult, out_digits: u32) -> Result<EvalReport> {
    if order > exp.max_order {
        return Err(Error::InvalidArgument(format!(
            "order {order} exceeds the computed expansion order {}",
            exp.max_order
        )));
    }
    let sf = s.to_f64();
    let ctx = PrecisionContext::for_s(sf, out_digits);
    let f = f_direct(s, &ctx)?;
    let sp = s.with_prec(ctx.bits());
    let r = &f.value * normalizer(&sp);
    let asym = exp.evaluate(&sp, order);
    let abs = (&r - &asym).abs();
    let rel = &abs / &r.abs();
    let shown = out_digits.max(1) as usize;
    Ok(EvalReport {
        s: sf,
        f_value: f.value.to_sci(shown),
        r_numeric: r.to_sci(shown),
        order,
        asymptotic_value: asym.to_sci(shown),
        abs_err: abs.to_f64(),
        rel_err: rel.to_f64(),
        terms_used: f.terms_used,
        working_digits: ctx.digits,
    })
}

/// Evaluates several `s` in parallel, sorted by `s`.
pub fn evaluate_many(
    s_values: &[Real],
    order: usize,
    exp: &ExpansionResult,
    out_digits: u32,
) -> Result<Vec<EvalReport>> {
    let mut rows = s_values
        .par_iter()
        .map(|s| evaluate(s, order, exp, out_digits))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.s.total_cmp(&b.s));
    Ok(rows)
}

pub const EVAL_CSV_HEADER: &str = "schema_version,s,order,r_numeric,asymptotic,abs_err,rel_err,terms_used";

/// Residual `(R(s) − 1 − Σ_{i≤j} b_i s^i) / s^{j+1}` for each `s`.
pub fn scaled_residuals(
    s_grid: &[Real],
    lower: &[Real],
    out_digits: u32,
) -> Result<Vec<(Real, Real)>> {
    let j = lower.len();
    s_grid
        .par_iter()
        .map(|s| {
            let ctx = PrecisionContext::for_s(s.to_f64(), out_digits);
            let sp = s.with_prec(ctx.bits());
            let r = r_numeric(&sp, &ctx)?;
            let mut partial = Real::one(ctx.bits());
            for (i, b) in lower.iter().enumerate() {
                partial = partial + b * sp.powi(i + 1);
            }
            let y = (r - partial) / sp.powi(j + 1);
            Ok((sp, y))
        })
        .collect()
}

/// Numeric estimate of one `b_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientEstimate {
    pub j: usize,
    pub estimate: f64,
    pub error_estimate: f64,
    /// `(s, (R − 1 − Σ_{i<j} b_i s^i)/s^j)` per grid point.
    pub raw: Vec<(f64, f64)>,
    pub warning: Option<String>,
}

/// Polynomial extrapolation to `x = 0` through `(x_i, y_i)` (Neville).
pub fn neville_at_zero(xs: &[Real], ys: &[Real]) -> Real {
    let n = xs.len();
    let mut p: Vec<Real> = ys.to_vec();
    for k in 1..n {
        for i in 0..n - k {
            // p_i = (x_{i+k} p_i − x_i p_{i+1}) / (x_{i+k} − x_i)
            let num = &xs[i + k] * &p[i] - &xs[i] * &p[i + 1];
            p[i] = num / (&xs[i + k] - &xs[i]);
        }
    }
    p.swap_remove(0)
}

/// Estimates `b_j` from `R` on a grid of `s` values, given exact `b_1 … b_{j−1}`.
///
/// Each point yields `y(s) = (R(s) − Σ_{i<j} b_i s^i)/s^j = b_j + O(s)`; the
/// values are extrapolated to `s = 0`. The error estimate is the change when
/// the largest `s` is dropped.
pub fn extract_coefficient(
    j: usize,
    s_grid: &[Real],
    lower: &[Real],
    out_digits: u32,
) -> Result<CoefficientEstimate> {
    if j == 0 || lower.len() + 1 != j {
        return Err(Error::InvalidArgument(format!(
            "need exactly {} lower coefficients for j = {j}",
            j.saturating_sub(1)
        )));
    }
    if s_grid.len() < 2 {
        return Err(Error::InvalidArgument("extraction needs at least two grid points".into()));
    }
    let mut rows = scaled_residuals(s_grid, lower, out_digits)?;
    rows.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    let (xs, ys): (Vec<Real>, Vec<Real>) = rows.into_iter().unzip();
    let estimate = neville_at_zero(&xs, &ys);
    let reduced = neville_at_zero(&xs[1..], &ys[1..]);
    let error_estimate = (&estimate - &reduced).abs().to_f64();
    let estimate = estimate.to_f64();
    let raw: Vec<(f64, f64)> = xs.iter().zip(&ys).map(|(x, y)| (x.to_f64(), y.to_f64())).collect();
    let lo = raw.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let hi = raw.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let spread = (hi - lo) / estimate.abs();
    let warning = (spread > 0.1).then(|| {
        format!("grid estimates for b_{j} disagree by {:.1}%", 100.0 * spread)
    });
    Ok(CoefficientEstimate { j, estimate, error_estimate, raw, warning })
}

/// Truncated power series in `x` with integer coefficients.
type XPoly = Vec<BigInt>;

fn xpoly_mul(a: &XPoly, b: &XPoly, deg: usize) -> XPoly {
    let mut out = vec![BigInt::zero(); deg + 1];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().take(deg + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Coefficients of `q^0 … q^m` of `F(q)`, from its defining series.
pub fn f_series(m: usize) -> Vec<BigInt> {
    let mut total = vec![BigInt::zero(); m + 1];
    // 1/(q)_k as a truncated series, updated by one factor per k
    let mut inv_poch = vec![BigInt::zero(); m + 1];
    inv_poch[0] = BigInt::one();
    let mut k = 0usize;
    while k * (k + 1) / 2 <= m {
        if k > 0 {
            // multiply by 1/(1 − q^k)
            for n in k..=m {
                let prev = inv_poch[n - k].clone();
                inv_poch[n] += prev;
            }
        }
        let sq = xpoly_mul(&inv_poch, &inv_poch, m);
        let shift = k * (k + 1) / 2;
        for n in shift..=m {
            total[n] += &sq[n - shift];
        }
        k += 1;
    }
    total
}

/// Outcome of comparing `[z⁰] S(z,q) R(z⁻¹,q)` with the series of `F`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantTermReport {
    pub m: usize,
    pub direct: Vec<String>,
    pub constant_term: Vec<String>,
    /// Half-integer powers of `q` cancel in the constant term.
    pub half_powers_vanish: bool,
    pub first_mismatch: Option<usize>,
    pub pass: bool,
}

pub const MAX_CONSTANT_TERM_ORDER: usize = 30;

/// Expands `S(z,q) = 1/(z q^{1/2}; q)_∞` and `R(z⁻¹,q) = (−z⁻¹q^{1/2}; q)_∞`
/// in `x = q^{1/2}` with Laurent bookkeeping in `z`, extracts the `z⁰`
/// coefficient and compares it with `F(q)` through `q^m`.
pub fn constant_term_check(m: usize) -> Result<ConstantTermReport> {
    if m > MAX_CONSTANT_TERM_ORDER {
        return Err(Error::InvalidArgument(format!(
            "constant-term order {m} exceeds {MAX_CONSTANT_TERM_ORDER}"
        )));
    }
    let deg = 2 * m;
    // a z^k term always carries at least x^{|k|}
    let lift = |k: i64| -> usize { k.unsigned_abs() as usize };
    let unit = || -> BTreeMap<i64, XPoly> {
        let mut x = vec![BigInt::zero(); deg + 1];
        x[0] = BigInt::one();
        BTreeMap::from([(0i64, x)])
    };

    let mut s_side = unit();
    let mut r_side = unit();
    for odd in (1..=deg).step_by(2) {
        // S: multiply by Σ_j z^j x^{j·odd}
        let mut next: BTreeMap<i64, XPoly> = BTreeMap::new();
        for (&k, poly) in &s_side {
            for j in 0.. {
                let shift = j * odd;
                if shift + lift(k) > deg {
                    break;
                }
                let entry = next.entry(k + j as i64).or_insert_with(|| vec![BigInt::zero(); deg + 1]);
                for (n, c) in poly.iter().enumerate().take(deg + 1 - shift) {
                    entry[n + shift] += c;
                }
            }
        }
        s_side = next;
        // R: multiply by (1 + z⁻¹ x^{odd})
        let mut next = r_side.clone();
        for (&k, poly) in &r_side {
            let entry = next.entry(k - 1).or_insert_with(|| vec![BigInt::zero(); deg + 1]);
            for (n, c) in poly.iter().enumerate().take(deg + 1 - odd) {
                entry[n + odd] += c;
            }
        }
        r_side = next;
    }

    let mut ct = vec![BigInt::zero(); deg + 1];
    for (k, sp) in &s_side {
        if let Some(rp) = r_side.get(&-k) {
            for (n, c) in xpoly_mul(sp, rp, deg).into_iter().enumerate() {
                ct[n] += c;
            }
        }
    }
    let half_powers_vanish = ct.iter().skip(1).step_by(2).all(Zero::is_zero);
    let constant_term: Vec<BigInt> = ct.into_iter().step_by(2).collect();
    let direct = f_series(m);
    let first_mismatch = (0..=m).find(|&n| direct[n] != constant_term[n]);
    Ok(ConstantTermReport {
        m,
        direct: direct.iter().map(BigInt::to_string).collect(),
        constant_term: constant_term.iter().map(BigInt::to_string).collect(),
        half_powers_vanish,
        first_mismatch,
        pass: half_powers_vanish && first_mismatch.is_none(),
    })
}

/// The two polylogarithm arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolylogArg {
    /// `φ⁻¹`
    PhiInv,
    /// `−φ`
    NegPhi,
}

impl PolylogArg {
    pub fn exact(self) -> FieldElem {
        match self {
            PolylogArg::PhiInv => FieldElem::phi_inv(),
            PolylogArg::NegPhi => -FieldElem::phi(),
        }
    }
}

fn ln_phi(prec: usize) -> Real {
    let five = Real::from_i64(5, prec);
    ((Real::one(prec) + five.sqrt()) / Real::from_i64(2, prec)).ln()
}

/// `Li₂(x) = Σ x^r/r²` for `|x| < 1`.
fn li2_series(x: &Real) -> Real {
    let prec = x.prec();
    let tiny = Real::parse(&format!("1e-{}", prec * 3 / 10 + 5), prec);
    let mut acc = Real::zero(prec);
    let mut pw = x.clone();
    let mut r = 1i64;
    loop {
        let rr = Real::from_i64(r * r, prec);
        let term = &pw / &rr;
        acc = &acc + &term;
        if term.abs() < tiny {
            break;
        }
        pw = &pw * x;
        r += 1;
    }
    acc
}

/// `Li₂` at `φ⁻¹` by its series, and at `−φ` by the inversion
/// `Li₂(−φ) = −π²/6 − ln²φ/2 − Li₂(−φ⁻¹)`.
pub fn li2(w: PolylogArg, prec: usize) -> Real {
    let lp = ln_phi(prec);
    let phi_inv = (-&lp).exp();
    match w {
        PolylogArg::PhiInv => li2_series(&phi_inv),
        PolylogArg::NegPhi => {
            let pi = Real::pi(prec);
            let six = Real::from_i64(6, prec);
            let two = Real::from_i64(2, prec);
            -(&pi * &pi) / six - &lp * &lp / two - li2_series(&(-phi_inv))
        }
    }
}

/// `Li₁(w) = −ln(1 − w)`.
pub fn li1(w: PolylogArg, prec: usize) -> Real {
    let one = Real::one(prec);
    let wv = w.exact().to_real(prec as u32 * 3 / 10 + 10).with_prec(prec);
    -(one - wv).ln()
}

/// Numeric values of the transcendental low-order `E` constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowOrderE {
    pub li2_phi_inv: f64,
    pub li2_neg_phi: f64,
    /// `|Li₂(φ⁻¹) − (π²/10 − ln²φ)|`
    pub li2_phi_inv_err: f64,
    /// `|Li₂(−φ) − (−π²/10 − ln²φ)|`
    pub li2_neg_phi_err: f64,
    /// `E_{−2} = Li₂(φ⁻¹) − Li₂(−φ)`, expected `π²/5`.
    pub e_minus_two: f64,
    pub e_minus_two_err: f64,
    /// `E_{−1} = Li₁(φ⁻¹) + Li₁(−φ)`, expected `0`.
    pub e_minus_one: f64,
}

pub fn low_order_e(digits: u32) -> LowOrderE {
    let prec = bits_for_digits(digits);
    let pi = Real::pi(prec);
    let lp = ln_phi(prec);
    let ten = Real::from_i64(10, prec);
    let a = li2(PolylogArg::PhiInv, prec);
    let b = li2(PolylogArg::NegPhi, prec);
    let closed_a = &pi * &pi / &ten - &lp * &lp;
    let closed_b = -(&pi * &pi) / &ten - &lp * &lp;
    let e2 = &a - &b;
    let e2_closed = &pi * &pi / Real::from_i64(5, prec);
    let e1 = li1(PolylogArg::PhiInv, prec) + li1(PolylogArg::NegPhi, prec);
    LowOrderE {
        li2_phi_inv: a.to_f64(),
        li2_neg_phi: b.to_f64(),
        li2_phi_inv_err: (&a - &closed_a).abs().to_f64(),
        li2_neg_phi_err: (&b - &closed_b).abs().to_f64(),
        e_minus_two: e2.to_f64(),
        e_minus_two_err: (e2 - e2_closed).abs().to_f64(),
        e_minus_one: e1.to_f64(),
    }
}

/// One `s` of a log-Pochhammer comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogPochRow {
    pub s: f64,
    pub direct_re: f64,
    pub direct_im: f64,
    pub truncated_re: f64,
    pub truncated_im: f64,
    pub abs_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogPochReport {
    pub w: PolylogArg,
    /// `+1` for `1/2 + iv`, `−1` for `1/2 − iv`.
    pub sign: i8,
    pub v: f64,
    pub order: usize,
    pub rows: Vec<LogPochRow>,
    /// `err(s_i)/err(s_{i+1})` for consecutive grid points, expected `≈ 2^{N+1}`
    /// when `s` halves.
    pub error_ratios: Vec<f64>,
}

/// `Σ_n Log(1 − w e^{−s(n + 1/2 ± iv)})`, principal branch term by term.
fn log_poch_direct(w: &Real, s: &Real, v: &Real, sign: i8, digits: u32) -> Complex {
    let prec = s.prec();
    let tiny = Real::parse(&format!("1e-{}", digits + 10), prec);
    let half = Real::parse("0.5", prec);
    let phase = if sign >= 0 { -(s * v) } else { s * v };
    let start = Complex::new(-(s * &half), phase).exp().scale(w);
    let q = (-s).exp();
    let one = Complex::one(prec);
    let mut acc = Complex::zero(prec);
    let mut z = start;
    while z.abs() >= tiny {
        acc = &acc + &(&one - &z).ln();
        z = z.scale(&q);
    }
    acc
}

/// Truncated `Σ_{k=−1}^{N} Li_{1−k}(w)(−s)^k B_{k+1}(1/2 ± iv)/(k+1)!`.
fn log_poch_truncated(w: PolylogArg, s: &Real, v: &Real, sign: i8, order: usize) -> Result<Complex> {
    let prec = s.prec();
    let digits = prec as u32 * 3 / 10 + 10;
    let iv = if sign >= 0 { Complex::from_real(v.clone()) } else { Complex::from_real(-v) };
    // k = −1 and k = 0
    let mut acc = Complex::from_real(-(li2(w, prec) / s));
    let b1 = bernoulli_poly_shifted(1).eval(&iv, prec);
    acc = &acc + &b1.scale(&li1(w, prec));
    let wexact = w.exact();
    let mut fact = Real::one(prec);
    let neg_s = -s;
    for k in 1..=order {
        fact = &fact * Real::from_i64((k + 1) as i64, prec);
        let li = polylog_neg(k - 1, &wexact)?.to_real(digits).with_prec(prec);
        let bk = bernoulli_poly_shifted(k + 1).eval(&iv, prec);
        let coef = li * neg_s.powi(k) / &fact;
        acc = &acc + &bk.scale(&coef);
    }
    Ok(acc)
}

/// Compares the log of `(w e^{−s(1/2 ± iv)}; e^{−s})_∞` with its truncated
/// polylogarithm expansion on a grid of `s`.
pub fn log_poch_check(
    w: PolylogArg,
    sign: i8,
    v: f64,
    order: usize,
    s_grid: &[Real],
    digits: u32,
) -> Result<LogPochReport> {
    let digits = digits.max(MIN_DIGITS);
    let prec = bits_for_digits(digits + DEFAULT_GUARD);
    for s in s_grid {
        let sf = s.to_f64();
        if !(sf > 0.0 && sf <= 0.2) {
            return Err(Error::InvalidArgument(format!("log-Pochhammer grid point {sf} outside (0, 0.2]")));
        }
    }
    let wv = w.exact().to_real(digits + DEFAULT_GUARD + 10).with_prec(prec);
    let vr = Real::from_f64(v, prec);
    let mut rows = s_grid
        .par_iter()
        .map(|s| {
            let sp = s.with_prec(prec);
            let direct = log_poch_direct(&wv, &sp, &vr, sign, digits);
            let trunc = log_poch_truncated(w, &sp, &vr, sign, order)?;
            let err = (&direct - &trunc).abs();
            Ok(LogPochRow {
                s: sp.to_f64(),
                direct_re: direct.re.to_f64(),
                direct_im: direct.im.to_f64(),
                truncated_re: trunc.re.to_f64(),
                truncated_im: trunc.im.to_f64(),
                abs_err: err.to_f64(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| b.s.total_cmp(&a.s));
    let error_ratios = rows.windows(2).map(|p| p[0].abs_err / p[1].abs_err).collect();
    Ok(LogPochReport { w, sign, v, order, rows, error_ratios })
}

/// One sample of the minor-arc bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinorArcRow {
    pub s: f64,
    pub v: f64,
    /// `ln |(−φe^{−s(iv+1/2)}; e^{−s})_∞ / (φ⁻¹e^{−s(−iv+1/2)}; e^{−s})_∞|`
    pub log_ratio: f64,
    /// `π²/(5s) − √5/(2 s^{1/3})`
    pub log_bound: f64,
    /// `ratio / bound`
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinorArcReport {
    /// Samples with `s^{−2/3} ≤ v ≤ π/s`.
    pub rows: Vec<MinorArcRow>,
    /// Largest `ratio/bound` over `rows`.
    pub fitted_c: f64,
    /// Samples at `v = s^{2/3}`, the threshold read literally.
    pub literal_rows: Vec<MinorArcRow>,
    pub literal_c: f64,
}

fn minor_arc_sample(s: &Real, v: &Real, digits: u32) -> MinorArcRow {
    let prec = s.prec();
    let lp = ln_phi(prec);
    let phi = lp.exp();
    let phi_inv = (-&lp).exp();
    let num = log_poch_direct(&(-&phi), s, v, 1, digits);
    let den = log_poch_direct(&phi_inv, s, v, -1, digits);
    let log_ratio = &num.re - &den.re;
    let pi = Real::pi(prec);
    let five = Real::from_i64(5, prec);
    let third = Real::one(prec) / Real::from_i64(3, prec);
    let log_bound = &pi * &pi / (&five * s) - five.sqrt() / (Real::from_i64(2, prec) * s.pow(&third));
    MinorArcRow {
        s: s.to_f64(),
        v: v.to_f64(),
        log_ratio: log_ratio.to_f64(),
        log_bound: log_bound.to_f64(),
        c: (log_ratio - log_bound).exp().to_f64(),
    }
}

/// Evaluates the Pochhammer ratio on the minor arcs.
///
/// `positions` are fractions `θ ∈ [0, 1]` placing `v = s^{−2/3} + θ(π/s − s^{−2/3})`.
pub fn minor_arc_check(s_grid: &[Real], positions: &[f64], digits: u32) -> Result<MinorArcReport> {
    let digits = digits.max(MIN_DIGITS);
    let prec = bits_for_digits(digits + DEFAULT_GUARD);
    if positions.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(Error::InvalidArgument("arc positions must lie in [0, 1]".into()));
    }
    let mut jobs = Vec::new();
    for s in s_grid {
        let sp = s.with_prec(prec);
        let sf = sp.to_f64();
        if !(sf > 0.0 && sf < 1.0) {
            return Err(Error::InvalidArgument(format!("minor-arc s = {sf} outside (0, 1)")));
        }
        let two_thirds = Real::from_i64(2, prec) / Real::from_i64(3, prec);
        let lo = Real::one(prec) / sp.pow(&two_thirds);
        let hi = Real::pi(prec) / &sp;
        for &t in positions {
            let v = &lo + (&hi - &lo) * Real::from_f64(t, prec);
            jobs.push((sp.clone(), v, false));
        }
        jobs.push((sp.clone(), sp.pow(&two_thirds), true));
    }
    let mut samples: Vec<(bool, MinorArcRow)> = jobs
        .par_iter()
        .map(|(s, v, literal)| (*literal, minor_arc_sample(s, v, digits)))
        .collect();
    samples.sort_by(|a, b| b.1.s.total_cmp(&a.1.s).then(a.1.v.total_cmp(&b.1.v)));
    let (literal, arc): (Vec<_>, Vec<_>) = samples.into_iter().partition(|(l, _)| *l);
    let rows: Vec<MinorArcRow> = arc.into_iter().map(|x| x.1).collect();
    let literal_rows: Vec<MinorArcRow> = literal.into_iter().map(|x| x.1).collect();
    let max_c = |r: &[MinorArcRow]| r.iter().map(|x| x.c).fold(0.0, f64::max);
    Ok(MinorArcReport {
        fitted_c: max_c(&rows),
        literal_c: max_c(&literal_rows),
        rows,
        literal_rows,
    })
}
