//! Exact `b_j` and `c_j` of `R(s) ~ 1 + Σ b_j s^j = exp(Σ c_j s^j)`.
//!
//! `b_j` is the Gaussian average of the `t^{2j}` coefficient of
//! `exp(J_{2J+1}(substituted) − (√5/24) t²)`; `c_j` comes from the formal
//! logarithm of the resulting `b` series.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElem, Rational, SubfieldTag};
use crate::real::Real;
use crate::series::{build_j_substituted, GaussianMoments, PuiseuxSeries, VPoly};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_MAX_ORDER: usize = 12;
pub const MAX_SUPPORTED_ORDER: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionResult {
    pub max_order: usize,
    pub precision: u32,
    /// `b_0 = 1, b_1, …, b_J`.
    pub b: Vec<FieldElem>,
    /// `c_1, …, c_J`.
    pub c: Vec<FieldElem>,
    /// Gaussian averages of the odd `t^{2j+1}` coefficients, `j = 0 … J−1`.
    pub odd_integrals: Vec<FieldElem>,
    pub b_float: Vec<String>,
    pub c_float: Vec<String>,
    /// `|b_j|^{1/j}` for `j = 1 … J`.
    pub growth: Vec<f64>,
}

impl ExpansionResult {
    pub fn b(&self, j: usize) -> Option<&FieldElem> {
        self.b.get(j)
    }

    /// `c_j` for `j ≥ 1`.
    pub fn c(&self, j: usize) -> Option<&FieldElem> {
        j.checked_sub(1).and_then(|k| self.c.get(k))
    }

    /// `b_j` embedded at `digits` decimal digits.
    pub fn b_real(&self, j: usize, digits: u32) -> Option<Real> {
        self.b(j).map(|x| x.to_real(digits))
    }

    /// `1 + Σ_{j≤order} b_j s^j`.
    pub fn evaluate(&self, s: &Real, order: usize) -> Real {
        let digits = (s.prec() as u32 / 3).max(30);
        let mut acc = Real::zero(s.prec());
        for j in (0..=order.min(self.max_order)).rev() {
            acc = &acc * s + self.b[j].to_real(digits);
        }
        acc
    }
}

fn root_stat(x: &Real, j: usize) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let ln = x.abs().ln() / Real::from_i64(j as i64, x.prec());
    ln.exp().to_f64()
}

/// Computes `b_0 … b_J` and `c_1 … c_J` exactly.
pub fn compute_expansion(max_order: usize, precision: u32) -> Result<ExpansionResult> {
    if max_order < 1 {
        return Err(Error::InvalidArgument("max order must be at least 1".into()));
    }
    let order_t = 2 * max_order;
    let mut exponent = build_j_substituted(order_t + 1, order_t)?;
    let gaussian_shift = FieldElem::sqrt5().scale(&Rational::new((-1).into(), 24.into()));
    exponent.add_term(2, &VPoly::constant(gaussian_shift));
    let integrand = exponent.exp()?;

    let max_deg = integrand.terms().iter().filter_map(VPoly::degree).max().unwrap_or(0);
    let moments = GaussianMoments::new(max_deg / 2 + 1);
    let mut b = Vec::with_capacity(max_order + 1);
    let mut odd_integrals = Vec::with_capacity(max_order);
    for m in 0..=order_t {
        let avg = moments.integrate(integrand.term(m));
        if m % 2 == 0 {
            b.push(avg);
        } else {
            odd_integrals.push(avg);
        }
    }

    let logs = PuiseuxSeries::from_scalars(max_order, &b).log()?;
    let c: Vec<FieldElem> = (1..=max_order).map(|j| logs.term(j).coeff(0)).collect();

    let digits = precision.max(1);
    let render = |x: &FieldElem| x.to_real(digits + 5).to_sci(digits as usize);
    let b_float = b.iter().map(render).collect();
    let c_float = c.iter().map(render).collect();
    let growth = (1..=max_order)
        .map(|j| root_stat(&b[j].to_real(digits.max(20)), j))
        .collect();

    Ok(ExpansionResult { max_order, precision, b, c, odd_integrals, b_float, c_float, growth })
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub kind: String,
    pub j: usize,
    pub subfield: SubfieldTag,
    /// Rational part `p` of `p + q·√5` (empty outside Q(√5)).
    pub p: String,
    /// `√5` part `q` of `p + q·√5` (empty outside Q(√5)).
    pub q: String,
    pub exact: String,
    pub float: String,
    pub value: FieldElem,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionDocument {
    pub schema_version: u32,
    pub max_order: usize,
    pub precision: u32,
    pub b: Vec<CoefficientRow>,
    pub c: Vec<CoefficientRow>,
    pub growth: Vec<f64>,
}

fn row(kind: &str, j: usize, x: &FieldElem, float: &str) -> CoefficientRow {
    let (p, q) = match x.sqrt5_parts() {
        Some((p, q)) => (fmt_rational(&p), fmt_rational(&q)),
        None => (String::new(), String::new()),
    };
    CoefficientRow {
        kind: kind.into(),
        j,
        subfield: x.subfield(),
        p,
        q,
        exact: x.to_string(),
        float: float.into(),
        value: x.clone(),
    }
}

impl ExpansionDocument {
    pub fn from_result(r: &ExpansionResult) -> Self {
        ExpansionDocument {
            schema_version: SCHEMA_VERSION,
            max_order: r.max_order,
            precision: r.precision,
            b: r.b.iter().zip(&r.b_float).enumerate().map(|(j, (x, f))| row("b", j, x, f)).collect(),
            c: r.c.iter().zip(&r.c_float).enumerate().map(|(k, (x, f))| row("c", k + 1, x, f)).collect(),
            growth: r.growth.clone(),
        }
    }
}

pub const CSV_HEADER: &str = "schema_version,kind,j,subfield,p,q,float";

/// Deterministic JSON or CSV rendering of an expansion.
pub fn render_expansion(r: &ExpansionResult, format: Format) -> String {
    let doc = ExpansionDocument::from_result(r);
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = String::new();
            out.push_str(CSV_HEADER);
            out.push('\n');
            for row in doc.b.iter().chain(&doc.c) {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    SCHEMA_VERSION, row.kind, row.j, row.subfield, row.p, row.q, row.float
                );
            }
            out
        }
    }
}
