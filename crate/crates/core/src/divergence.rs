//! Growth diagnostics explaining why `Σ b_j s^j` diverges.
//!
//! `E_n` grows like `n!/(log φ)^{n+1}`; the normalized `Ē_n` tends to one
//! geometrically. Combined with the Bernoulli polynomials this makes the
//! dominant term of `J_{4ℓ+1}` behave like a multiple of `(4ℓ)!`, which the
//! cosh table below measures directly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{ExpansionResult, SCHEMA_VERSION};
use crate::real::{bits_for_digits, Complex, Real};
use crate::sequences::{bernoulli_poly_shifted, en_value, tables};

fn ln_phi(prec: usize) -> Real {
    let five = Real::from_i64(5, prec);
    ((Real::one(prec) + five.sqrt()) / Real::from_i64(2, prec)).ln()
}

fn factorial(n: usize, prec: usize) -> Real {
    (2..=n).fold(Real::one(prec), |acc, k| acc * Real::from_i64(k as i64, prec))
}

/// `Ē_n = E_n (log φ)^{n+1} / n!`.
pub fn ebar(n: usize, digits: u32) -> Real {
    let prec = bits_for_digits(digits + 10);
    let e = en_value(n).to_real(digits + 20).with_prec(prec);
    e * ln_phi(prec).powi(n + 1) / factorial(n, prec)
}

/// `E_n` through `Li_{−d}(e^{−μ}) = d! Σ_{k∈Z} (2πik + μ)^{−d−1}`, with
/// `μ = log φ` for `φ⁻¹` and `μ = iπ − log φ` for `−φ`, summed over `|k| ≤ terms`.
///
/// Independent of the Eulerian route; needs `n ≥ 1` for convergence.
pub fn en_lattice(n: usize, terms: usize, digits: u32) -> Result<Real> {
    if n == 0 {
        return Err(Error::InvalidArgument("the lattice sum needs n ≥ 1".into()));
    }
    let prec = bits_for_digits(digits + 10);
    let lp = ln_phi(prec);
    let two_pi = Real::pi(prec) * Real::from_i64(2, prec);
    let li = |mu: &Complex| -> Complex {
        let mut acc = mu.powi(n + 1).recip();
        for k in 1..=terms {
            let shift = &two_pi * Real::from_i64(k as i64, prec);
            let up = Complex::new(mu.re.clone(), &mu.im + &shift);
            let down = Complex::new(mu.re.clone(), &mu.im - &shift);
            acc = acc + up.powi(n + 1).recip() + down.powi(n + 1).recip();
        }
        acc.scale(&factorial(n, prec))
    };
    let a = li(&Complex::from_real(lp.clone()));
    let b = li(&Complex::new(-&lp, Real::pi(prec)));
    let e = if n.is_multiple_of(2) { a - b } else { a + b };
    Ok(e.re)
}

/// Least-squares fit of `ln y = ln C + n ln K`, returning `(C, K)`.
pub fn fit_geometric_rate(points: &[(usize, f64)]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|p| p.1 > 0.0).map(|&(n, y)| (n as f64, y.ln())).collect();
    let m = pts.len() as f64;
    if m < 2.0 {
        return (f64::NAN, f64::NAN);
    }
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    let icept = (sy - slope * sx) / m;
    (icept.exp(), slope.exp())
}

/// How `B̄_m` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BbarSource {
    /// Dirichlet eta `η(m)` for every `m`. Required for `e_{k+1,B} → e^z`.
    Eta,
    /// Even `m` from exact Bernoulli numbers, odd `m` set to zero. Enough for
    /// `T_{k,B}` with odd `k`, where the odd weights cancel.
    BernoulliEven,
}

/// Dirichlet eta `η(x) = Σ_{n≥1} (−1)^{n−1} n^{−x}` for integer `x ≥ 0`, via the
/// Cohen–Villegas–Zagier acceleration.
pub fn dirichlet_eta(x: u32, prec: usize) -> Real {
    let n = prec * 100 / 254 + 4; // error ~ 5.83^{−n}
    let mut d = (Real::from_i64(3, prec) + Real::from_i64(8, prec).sqrt()).powi(n);
    d = (&d + d.recip()) / Real::from_i64(2, prec);
    let mut b = Real::from_i64(-1, prec);
    let mut c = -&d;
    let mut sum = Real::zero(prec);
    let half = Real::parse("0.5", prec);
    for k in 0..n {
        c = &b - &c;
        let a_k = Real::from_i64(k as i64 + 1, prec).powi(x as usize).recip();
        sum = sum + &c * a_k;
        let kn = Real::from_i64(k as i64, prec);
        let nn = Real::from_i64(n as i64, prec);
        b = b * (&kn + &nn) * (&kn - &nn)
            / ((&kn + &half) * (&kn + Real::one(prec)));
    }
    sum / d
}

/// `B̄_m`, defined through `B_m(1/2) = 2(2π)^{−m} m! cos(πm/2) B̄_m`; this is
/// `η(m)` for even `m`, extended by `η` to odd `m`.
pub fn bbar(m: usize, source: BbarSource, prec: usize) -> Real {
    match source {
        BbarSource::Eta => dirichlet_eta(m as u32, prec),
        BbarSource::BernoulliEven if m % 2 == 1 => Real::zero(prec),
        BbarSource::BernoulliEven => {
            let bm = tables()
                .bernoulli
                .get(m)
                .cloned()
                .unwrap_or_else(|| crate::sequences::bernoulli_numbers(m).get(m).cloned().expect("built"));
            // B_m(1/2) = (2^{1−m} − 1) B_m
            let half_val = Real::from_ratio(&bm, prec)
                * (Real::from_i64(2, prec).powi(m).recip() * Real::from_i64(2, prec) - Real::one(prec));
            let sign = if m.is_multiple_of(4) { 1 } else { -1 };
            let two_pi = Real::pi(prec) * Real::from_i64(2, prec);
            let norm = Real::from_i64(2 * sign, prec) * factorial(m, prec) / two_pi.powi(m);
            half_val / norm
        }
    }
}

fn bbar_row(k: usize, source: BbarSource, prec: usize) -> Vec<Real> {
    (0..=k + 1).map(|m| bbar(m, source, prec)).collect()
}

fn partial_exp_with(weights: &[Real], z: &Real) -> Real {
    // Σ_j B̄_{k+1−j} z^j / j!
    let prec = z.prec();
    let top = weights.len() - 1;
    let mut acc = Real::zero(prec);
    let mut pw = Real::one(prec);
    for j in 0..=top {
        if j > 0 {
            pw = pw * z / Real::from_i64(j as i64, prec);
        }
        acc = acc + &weights[top - j] * &pw;
    }
    acc
}

/// `e_{k+1,B}(z) = Σ_{j=0}^{k+1} B̄_{k+1−j} z^j / j!`.
pub fn partial_exp(k: usize, z: &Real, source: BbarSource) -> Real {
    partial_exp_with(&bbar_row(k, source, z.prec()), z)
}

/// `T_{k,B}(v) = (e_{k+1,B}(2πv) − (−1)^k e_{k+1,B}(−2πv)) / 2`.
pub fn t_kb(k: usize, v: &Real, source: BbarSource) -> Real {
    let prec = v.prec();
    let w = bbar_row(k, source, prec);
    let x = Real::pi(prec) * Real::from_i64(2, prec) * v;
    let plus = partial_exp_with(&w, &x);
    let minus = partial_exp_with(&w, &-&x);
    let combo = if k.is_multiple_of(2) { plus - minus } else { plus + minus };
    combo / Real::from_i64(2, prec)
}

/// `max_{z ∈ grid} |e_{k+1,B}(z) − e^z|` on `samples` equispaced points of `[lo, hi]`.
pub fn partial_exp_max_error(k: usize, lo: f64, hi: f64, samples: usize, digits: u32) -> f64 {
    let prec = bits_for_digits(digits);
    let w = bbar_row(k, BbarSource::Eta, prec);
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let t = if samples > 1 { i as f64 / (samples - 1) as f64 } else { 0.0 };
            let z = Real::from_f64(lo + t * (hi - lo), prec);
            (partial_exp_with(&w, &z) - z.exp()).abs().to_f64()
        })
        .reduce(|| 0.0, f64::max)
}

/// One entry of the cosh-limit table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoshRow {
    pub l: usize,
    pub v: f64,
    pub alpha: f64,
    /// `E_{4ℓ} s^k B_{k+1}(1/2+iv)/(k+1)!` over `(4ℓ)! α^k`, `k = 4ℓ+1`,
    /// `s = 2π log(φ) α`.
    pub ratio: f64,
    /// Same normalization applied to the whole truncated sum `J_{4ℓ+1}`.
    pub ratio_full_sum: f64,
    /// `−Ē_{4ℓ} T_{k,B}(v)/π`, equal to `ratio` for any choice of odd `B̄`.
    pub ratio_via_t: f64,
    /// Limit of `ratio` as `ℓ → ∞`: `−cosh(2πv)/π`.
    pub target: f64,
    /// `−cosh(v)/(2π)`, the form printed alongside the limit statement.
    pub displayed_target: f64,
}

/// Dominant-term and full-sum ratios of `J_{4ℓ+1}` for each `(ℓ, v, α)`.
pub fn cosh_limit_check(ls: &[usize], vs: &[f64], alphas: &[f64], digits: u32) -> Result<Vec<CoshRow>> {
    if ls.iter().any(|&l| l == 0 || l > 6) {
        return Err(Error::InvalidArgument("ℓ must lie in 1..=6".into()));
    }
    let prec = bits_for_digits(digits.max(30) + 20);
    let mut jobs = Vec::new();
    for &l in ls {
        for &v in vs {
            for &a in alphas {
                jobs.push((l, v, a));
            }
        }
    }
    let mut rows: Vec<CoshRow> = jobs
        .par_iter()
        .map(|&(l, v, a)| {
            let k = 4 * l + 1;
            let lp = ln_phi(prec);
            let pi = Real::pi(prec);
            let alpha = Real::from_f64(a, prec);
            let s = Real::from_i64(2, prec) * &pi * &lp * &alpha;
            let vr = Real::from_f64(v, prec);
            let iv = Complex::from_real(vr.clone());
            let norm = factorial(4 * l, prec) * alpha.powi(k);
            let term = |kk: usize| -> Real {
                let e = en_value(kk - 1).to_real(digits + 30).with_prec(prec);
                let b = bernoulli_poly_shifted(kk + 1).eval(&iv, prec).re;
                e * s.powi(kk) * b / factorial(kk + 1, prec)
            };
            let dominant = term(k);
            let full = (2..=k).fold(Real::zero(prec), |acc, kk| acc + term(kk));
            let eb = ebar(4 * l, digits.max(30) + 10).with_prec(prec);
            let via_t = -(eb * t_kb(k, &vr, BbarSource::Eta)) / &pi;
            let two_pi_v = Real::from_i64(2, prec) * &pi * &vr;
            CoshRow {
                l,
                v,
                alpha: a,
                ratio: (&dominant / &norm).to_f64(),
                ratio_full_sum: (full / &norm).to_f64(),
                ratio_via_t: via_t.to_f64(),
                target: (-(two_pi_v.cosh()) / &pi).to_f64(),
                displayed_target: (-(vr.cosh()) / (Real::from_i64(2, prec) * &pi)).to_f64(),
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        a.l.cmp(&b.l).then(a.v.total_cmp(&b.v)).then(a.alpha.total_cmp(&b.alpha))
    });
    Ok(rows)
}

/// Growth of the computed `b_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BGrowth {
    /// `|b_j|^{1/j}` for `j = 1 … J`.
    pub roots: Vec<f64>,
    /// Strictly increasing over the last four indices.
    pub roots_increasing_tail: bool,
    /// `|b_{j+1}/b_j|` for `j = 1 … J−1`.
    pub ratios: Vec<f64>,
    /// Smallest `j` from which every `|b_{j+1}/b_j|` exceeds one.
    pub ratio_exceeds_one_from: Option<usize>,
    /// Every `c_j` with `2 ≤ j ≤ J` is nonzero.
    pub c_nonzero: bool,
}

pub fn b_growth(r: &ExpansionResult) -> Result<BGrowth> {
    if r.max_order < 6 {
        return Err(Error::InvalidArgument("growth statistics need max order ≥ 6".into()));
    }
    let roots = r.growth.clone();
    let tail = &roots[roots.len() - 4..];
    let roots_increasing_tail = tail.windows(2).all(|w| w[1] > w[0]);
    let vals: Vec<f64> = (1..=r.max_order)
        .map(|j| r.b_float[j].parse::<f64>().unwrap_or(f64::NAN).abs())
        .collect();
    let ratios: Vec<f64> = vals.windows(2).map(|w| w[1] / w[0]).collect();
    let ratio_exceeds_one_from = (0..ratios.len())
        .find(|&i| ratios[i..].iter().all(|&x| x > 1.0))
        .map(|i| i + 1);
    let c_nonzero = r.c.iter().skip(1).all(|c| !c.is_zero());
    Ok(BGrowth { roots, roots_increasing_tail, ratios, ratio_exceeds_one_from, c_nonzero })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialExpRow {
    pub k: usize,
    pub max_err: f64,
}

/// Everything `diverge` reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub schema_version: u32,
    pub n_range: (usize, usize),
    pub ebar: Vec<f64>,
    pub ebar_err: Vec<f64>,
    /// Smallest `n` beyond which `|Ē_n − 1|` is nonincreasing, if any.
    pub ebar_err_monotone_from: Option<usize>,
    /// Running maximum of `|Ē_m − 1|` over `m ≥ n`, a nonincreasing envelope.
    pub ebar_err_envelope: Vec<f64>,
    pub fit_range: (usize, usize),
    pub fitted_c: f64,
    pub fitted_k: f64,
    /// Relative gap between the Eulerian and lattice-sum `E_5`.
    pub lattice_check_rel_err: f64,
    pub b_growth: BGrowth,
    pub partial_exp: Vec<PartialExpRow>,
    pub cosh_check: Vec<CoshRow>,
}

pub const DEFAULT_EBAR_MAX: usize = 30;

/// Builds the full report for `Ē_0 … Ē_{ebar_max}` and the given expansion.
pub fn growth_report(r: &ExpansionResult, ebar_max: usize) -> Result<GrowthReport> {
    if !(5..=tables().en.values().len() - 1).contains(&ebar_max) {
        return Err(Error::InvalidArgument(format!(
            "Ē range must end between 5 and {}",
            tables().en.values().len() - 1
        )));
    }
    let digits = 40;
    let values: Vec<Real> = (0..=ebar_max).into_par_iter().map(|n| ebar(n, digits)).collect();
    let one = Real::one(bits_for_digits(digits));
    let ebar_err: Vec<f64> = values.iter().map(|e| (e - &one).abs().to_f64()).collect();
    let ebar: Vec<f64> = values.iter().map(Real::to_f64).collect();
    let ebar_err_monotone_from = (0..ebar_err.len())
        .find(|&i| ebar_err[i..].windows(2).all(|w| w[1] <= w[0]));
    let mut ebar_err_envelope = ebar_err.clone();
    for i in (0..ebar_err_envelope.len().saturating_sub(1)).rev() {
        ebar_err_envelope[i] = ebar_err_envelope[i].max(ebar_err_envelope[i + 1]);
    }
    let fit_range = (5, ebar_max);
    let pts: Vec<(usize, f64)> = (fit_range.0..=fit_range.1).map(|n| (n, ebar_err[n])).collect();
    let (fitted_c, fitted_k) = fit_geometric_rate(&pts);

    let exact5 = en_value(5).to_real(40);
    let lattice5 = en_lattice(5, 4000, 30)?;
    let lattice_check_rel_err = ((&lattice5 - &exact5) / &exact5).abs().to_f64();

    let partial_exp = [10, 20, 40]
        .into_iter()
        .map(|k| PartialExpRow { k, max_err: partial_exp_max_error(k, -2.0, 2.0, 81, 40) })
        .collect();
    let cosh_check = cosh_limit_check(&[1, 2, 3, 4, 5, 6], &[0.0, 0.5, 1.0], &[0.01, 0.005], 40)?;

    Ok(GrowthReport {
        schema_version: SCHEMA_VERSION,
        n_range: (0, ebar_max),
        ebar,
        ebar_err,
        ebar_err_monotone_from,
        ebar_err_envelope,
        fit_range,
        fitted_c,
        fitted_k,
        lattice_check_rel_err,
        b_growth: b_growth(r)?,
        partial_exp,
        cosh_check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::compute_expansion;

    #[test]
    fn ebar_examples() {
        let e1 = ebar(1, 30).to_f64();
        let lp = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((e1 - 4.0 * lp * lp).abs() < 1e-14);
        assert!((e1 - 0.926).abs() < 5e-4);
        assert!((ebar(2, 30).to_f64() - 0.997).abs() < 5e-4);
        assert!((ebar(20, 30).to_f64() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn lattice_sum_matches_eulerian_route() {
        let exact = en_value(5).to_real(40);
        let lattice = en_lattice(5, 4000, 30).unwrap();
        let rel = ((&lattice - &exact) / &exact).abs().to_f64();
        assert!(rel < 1e-20, "rel {rel:e}");
        assert!(en_lattice(0, 10, 30).is_err());
    }

    #[test]
    fn geometric_fit_recovers_rate() {
        let pts: Vec<(usize, f64)> = (0..10).map(|n| (n, 3.0 * 0.2f64.powi(n as i32))).collect();
        let (c, k) = fit_geometric_rate(&pts);
        assert!((c - 3.0).abs() < 1e-9 && (k - 0.2).abs() < 1e-12);
    }

    #[test]
    fn eta_values() {
        let prec = bits_for_digits(40);
        assert_eq!(dirichlet_eta(0, prec).to_sci(30), Real::parse("0.5", prec).to_sci(30));
        let ln2 = Real::from_i64(2, prec).ln();
        assert!((dirichlet_eta(1, prec) - ln2).abs().to_f64() < 1e-38);
        let pi = Real::pi(prec);
        let eta2 = &pi * &pi / Real::from_i64(12, prec);
        assert!((dirichlet_eta(2, prec) - eta2).abs().to_f64() < 1e-38);
        // even orders agree between the two sources
        for m in [2, 4, 10] {
            let a = bbar(m, BbarSource::Eta, prec);
            let b = bbar(m, BbarSource::BernoulliEven, prec);
            assert!((a - b).abs().to_f64() < 1e-36, "m = {m}");
        }
    }

    #[test]
    fn partial_exp_examples() {
        let prec = bits_for_digits(40);
        let zero = Real::zero(prec);
        for k in [0, 3, 8] {
            let v = partial_exp(k, &zero, BbarSource::Eta);
            assert!((v - bbar(k + 1, BbarSource::Eta, prec)).abs().to_f64() < 1e-38);
        }
        let one = Real::one(prec);
        assert!((partial_exp(40, &one, BbarSource::Eta) - one.exp()).abs().to_f64() < 1e-6);
        let m2 = Real::from_i64(-2, prec);
        assert!((partial_exp(40, &m2, BbarSource::Eta) - m2.exp()).abs().to_f64() < 1e-5);
        let errs: Vec<f64> = [10, 20, 40].iter().map(|&k| partial_exp_max_error(k, -2.0, 2.0, 41, 40)).collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    }

    #[test]
    fn odd_weights_cancel_in_t() {
        let prec = bits_for_digits(40);
        let v = Real::parse("0.3", prec);
        for k in [5, 9] {
            let a = t_kb(k, &v, BbarSource::Eta);
            let b = t_kb(k, &v, BbarSource::BernoulliEven);
            assert!(((&a - &b) / &a).abs().to_f64() < 1e-35);
        }
    }

    #[test]
    fn cosh_limit_trend() {
        let rows = cosh_limit_check(&[2, 3, 4, 5], &[0.0, 1.0], &[0.01], 30).unwrap();
        let at = |l: usize, v: f64| rows.iter().find(|r| r.l == l && r.v == v).unwrap();
        for v in [0.0, 1.0] {
            let gaps: Vec<f64> = (2..=5).map(|l| (at(l, v).ratio - at(l, v).target).abs()).collect();
            assert!(gaps.windows(2).all(|g| g[1] < g[0]), "v = {v}: {gaps:?}");
            let r4 = at(4, v);
            assert!(((r4.ratio - r4.target) / r4.target).abs() < 0.25);
        }
        for r in &rows {
            assert!(((r.ratio - r.ratio_via_t) / r.ratio).abs() < 1e-20);
        }
        assert!((at(2, 0.0).target + 1.0 / std::f64::consts::PI).abs() < 1e-15);
        assert!((at(2, 1.0).displayed_target + 1f64.cosh() / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
        // the dominant ratio does not depend on α
        let other = cosh_limit_check(&[3], &[1.0], &[0.005], 30).unwrap();
        assert!(((other[0].ratio - at(3, 1.0).ratio) / other[0].ratio).abs() < 1e-20);
    }

    #[test]
    fn growth_of_b() {
        let r = compute_expansion(12, 20).unwrap();
        let g = b_growth(&r).unwrap();
        assert!((g.roots[0] - 0.0559017).abs() < 1e-6);
        assert!(g.roots_increasing_tail && g.c_nonzero);
        assert!(g.ratio_exceeds_one_from.is_some_and(|j| j <= 12));
        assert!(b_growth(&compute_expansion(5, 20).unwrap()).is_err());
    }
}
