//! Boundedness criteria for 𝒞_{μ,α} from Bloch-type spaces into B_p.
//!
//! A series criterion cannot be decided from finitely many terms. Partial
//! sums are taken at dyadic checkpoints and the increments between them are
//! fitted in log-log scale; the fitted slope drives a three-way verdict.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{least_squares, moments, Measure, MomentSequence};
use crate::norms::{mean_lipschitz_norm, target_norm};
use crate::operator::OperatorSpec;
use crate::quad::GaussLegendre;
use crate::series::{log_series, PowerSeries};

/// Slope threshold of the increment classifier.
pub const EPS_C: f64 = 0.05;

/// Partial-sum checkpoints N = 2^8, ..., 2^14.
pub const CHECKPOINTS: [usize; 7] = [1 << 8, 1 << 9, 1 << 10, 1 << 11, 1 << 12, 1 << 13, 1 << 14];

/// Default moment degree for verdicts.
pub const DEFAULT_DEGREE: usize = 1 << 14;

/// Cutoffs 1 − 2^{−m} of the integral criterion.
pub const INTEGRAL_CUTOFFS: std::ops::RangeInclusive<u32> = 8..=20;

const TAIL_INCREMENTS: usize = 4;
const NEGLIGIBLE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Converges,
    Diverges,
    Borderline,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Converges => "Converges",
            Verdict::Diverges => "Diverges",
            Verdict::Borderline => "Borderline",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialSum {
    pub n: usize,
    pub value: f64,
}

/// The value of the integral criterion up to the cutoff t = 1 − 2^{−m}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffValue {
    pub m: u32,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralReport {
    pub cutoffs: Vec<CutoffValue>,
    pub tail_slope: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub partial_sums: Vec<PartialSum>,
    /// Log-log slope of the last dyadic increments; None when they vanish.
    pub tail_slope: Option<f64>,
    pub verdict: Verdict,
    pub analytic_verdict: Option<Verdict>,
    /// Whether p ≥ max(1, 1/α).
    pub hypothesis_satisfied: bool,
    /// The integral criterion, evaluated when p = 1 and α ≥ 1.
    pub integral: Option<IntegralReport>,
}

fn hypothesis_holds(alpha: f64, p: f64) -> bool {
    p >= 1.0f64.max(1.0 / alpha) * (1.0 - 1e-12)
}

fn check_params(func: &'static str, alpha: f64, p: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain(func, format!("alpha = {alpha} must be positive")));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::domain(func, format!("p = {p} must be >= 1")));
    }
    Ok(())
}

/// Classifies a sequence of partial sums taken at geometrically spaced
/// scales by the log-log slope of its last increments.
///
/// Converges when the slope is below −ε_c or the increments vanish;
/// Diverges when the slope is nonnegative or the increments never decrease;
/// Borderline in between.
pub fn classify_increments(scales: &[f64], sums: &[f64]) -> (Option<f64>, Verdict) {
    assert_eq!(scales.len(), sums.len());
    let blocks: Vec<f64> = (1..sums.len()).map(|j| sums[j] - sums[j - 1]).collect();
    let total = sums.last().copied().unwrap_or(0.0).abs();
    classify_blocks(scales.get(1..).unwrap_or(&[]), &blocks, total)
}

/// Same verdict as [`classify_increments`], from the increments themselves.
/// `blocks[j]` is the sum of the terms up to `scales[j]` not counted before.
fn classify_blocks(scales: &[f64], blocks: &[f64], total: f64) -> (Option<f64>, Verdict) {
    let start = blocks.len().saturating_sub(TAIL_INCREMENTS);
    let incs: Vec<(f64, f64)> = (start..blocks.len()).map(|j| (scales[j], blocks[j])).collect();
    if incs.is_empty() {
        return (None, Verdict::Borderline);
    }
    let negligible = |d: f64| d <= NEGLIGIBLE * total;
    let positive: Vec<(f64, f64)> = incs.iter().copied().filter(|d| !negligible(d.1)).collect();
    let slope = (positive.len() >= 2).then(|| {
        let xs: Vec<f64> = positive.iter().map(|d| d.0.ln()).collect();
        let ys: Vec<f64> = positive.iter().map(|d| d.1.ln()).collect();
        least_squares(&xs, &ys).0
    });
    if total == 0.0 || negligible(incs.last().unwrap().1) {
        return (slope, Verdict::Converges);
    }
    let Some(slope) = slope else {
        return (None, Verdict::Borderline);
    };
    let non_decreasing = incs.windows(2).all(|w| w[1].1 >= w[0].1);
    let verdict = if slope >= 0.0 || non_decreasing {
        Verdict::Diverges
    } else if slope < -EPS_C {
        Verdict::Converges
    } else {
        Verdict::Borderline
    };
    (Some(slope), verdict)
}

/// Terms (n+1)^{pα−1} μ_n^p log^p(n+2), n = 0..=N.
pub fn criterion_terms(m: &MomentSequence, alpha: f64, p: f64) -> Vec<f64> {
    m.values()
        .iter()
        .enumerate()
        .map(|(n, &mu)| {
            let x = (n + 1) as f64;
            x.powf(p * alpha - 1.0) * (mu * ((n + 2) as f64).ln()).powf(p)
        })
        .collect()
}

/// Partial sums of Σ (n+1)^{pα−1} μ_n^p log^p(n+2) at the checkpoints not
/// exceeding the moment degree, with a convergence verdict.
pub fn criterion_sum(m: &MomentSequence, alpha: f64, p: f64) -> Result<CriterionReport> {
    check_params("criterion_sum", alpha, p)?;
    let hypothesis_satisfied = hypothesis_holds(alpha, p);
    if !hypothesis_satisfied {
        log::warn!("p = {p} is below max(1, 1/alpha) for alpha = {alpha}");
    }
    let checkpoints: Vec<usize> = CHECKPOINTS.iter().copied().filter(|&n| n <= m.degree()).collect();
    if checkpoints.len() < 3 {
        return Err(Error::Precondition(format!(
            "criterion_sum needs moments up to degree >= {}, got {}",
            CHECKPOINTS[2],
            m.degree()
        )));
    }
    let terms = criterion_terms(m, alpha, p);
    let mut partial_sums = Vec::with_capacity(checkpoints.len());
    let mut blocks = Vec::with_capacity(checkpoints.len());
    let mut acc = 0.0;
    let mut next = 0;
    for &n in &checkpoints {
        let block = terms[next..=n].iter().sum::<f64>();
        acc += block;
        next = n + 1;
        blocks.push(block);
        partial_sums.push(PartialSum { n, value: acc });
    }
    let scales: Vec<f64> = partial_sums.iter().map(|s| s.n as f64).collect();
    let (tail_slope, verdict) = classify_blocks(&scales[1..], &blocks[1..], acc.abs());
    Ok(CriterionReport {
        partial_sums,
        tail_slope,
        verdict,
        analytic_verdict: analytic_verdict(m.measure(), alpha),
        hypothesis_satisfied,
        integral: None,
    })
}

/// log(e/(1 − t)) / (1 − t)^α written in u = 1 − t.
fn corollary_integrand(u: f64, alpha: f64) -> f64 {
    (1.0 - u.ln()) * u.powf(-alpha)
}

/// ∫_0^{1−2^{−m}} log(e/(1−t)) / (1−t)^α dμ(t) for m = 8..=20.
pub fn criterion_integral_p1(mu: &Measure, alpha: f64) -> Result<IntegralReport> {
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::domain(
            "criterion_integral_p1",
            format!("alpha = {alpha} must be >= 1"),
        ));
    }
    if let Measure::GenericDensity(g) = mu {
        if !g.integrable_near_one() {
            return Err(Error::Integrability(format!(
                "density `{}` is flagged as non-integrable near t = 1",
                g.label()
            )));
        }
    }
    let m_max = *INTEGRAL_CUTOFFS.end();
    let cutoffs: Vec<CutoffValue> = match mu {
        Measure::Atoms(atoms) => INTEGRAL_CUTOFFS
            .map(|m| {
                let cut = (-(m as f64)).exp2();
                let value = atoms
                    .iter()
                    .filter(|a| 1.0 - a.t >= cut)
                    .map(|a| a.w * corollary_integrand(1.0 - a.t, alpha))
                    .sum();
                CutoffValue { m, value }
            })
            .collect(),
        _ => {
            let gl = GaussLegendre::cached(32);
            let mut panel = Vec::with_capacity(m_max as usize);
            for k in 0..m_max {
                let hi = (-(k as f64)).exp2();
                let mut s = 0.0;
                for (u, w) in gl.mapped(0.5 * hi, hi) {
                    let rho = mu.density_in_u(u).unwrap_or(0.0);
                    if !(rho >= 0.0) || !rho.is_finite() {
                        return Err(Error::Integrability(format!(
                            "density is negative or not finite at t = {}",
                            1.0 - u
                        )));
                    }
                    s += w * rho * corollary_integrand(u, alpha);
                }
                panel.push(s);
            }
            let mut acc = 0.0;
            let mut out = Vec::new();
            for (k, s) in panel.iter().enumerate() {
                acc += s;
                let m = k as u32 + 1;
                if INTEGRAL_CUTOFFS.contains(&m) {
                    out.push(CutoffValue { m, value: acc });
                }
            }
            out
        }
    };
    let scales: Vec<f64> = cutoffs.iter().map(|c| (c.m as f64).exp2()).collect();
    let sums: Vec<f64> = cutoffs.iter().map(|c| c.value).collect();
    let (tail_slope, verdict) = classify_increments(&scales, &sums);
    Ok(IntegralReport {
        cutoffs,
        tail_slope,
        verdict,
    })
}

/// Σ_{n≤N} (n+1)^{α−1/p} μ_n log(n+1) r^n.
pub fn radial_majorant(m: &MomentSequence, alpha: f64, p: f64, r: f64) -> Result<f64> {
    check_params("radial_majorant", alpha, p)?;
    if !hypothesis_holds(alpha, p) {
        return Err(Error::Precondition(format!(
            "p = {p} is below max(1, 1/alpha) for alpha = {alpha}"
        )));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain("radial_majorant", format!("r = {r} must lie in [0, 1)")));
    }
    let expo = alpha - 1.0 / p;
    let mut rn = 1.0;
    let mut sum = 0.0;
    for (n, &mu) in m.values().iter().enumerate() {
        let x = (n + 1) as f64;
        sum += x.powf(expo) * mu * x.ln() * rn;
        rn *= r;
        if rn == 0.0 {
            break;
        }
    }
    Ok(sum)
}

/// The known verdict for calibrated families: atoms always converge and
/// c(1 − t)^{s−1} dt converges iff s > α.
pub fn analytic_verdict(mu: &Measure, alpha: f64) -> Option<Verdict> {
    match mu {
        Measure::Atoms(_) => Some(Verdict::Converges),
        Measure::BetaDensity { s, .. } => Some(if *s > alpha {
            Verdict::Converges
        } else {
            Verdict::Diverges
        }),
        _ => None,
    }
}

/// Series criterion with moments up to `degree`, cross-checked against the
/// integral criterion when p = 1 and α ≥ 1.
///
/// A Converges/Diverges disagreement between the two is an error; a
/// Borderline on either side makes the combined verdict Borderline.
pub fn boundedness_verdict(mu: &Measure, alpha: f64, p: f64, degree: usize) -> Result<CriterionReport> {
    check_params("boundedness_verdict", alpha, p)?;
    let m = moments(mu, degree)?;
    let mut report = criterion_sum(&m, alpha, p)?;
    if p == 1.0 && alpha >= 1.0 {
        let integral = criterion_integral_p1(mu, alpha)?;
        report.verdict = match (report.verdict, integral.verdict) {
            (a, b) if a == b => a,
            (Verdict::Borderline, _) | (_, Verdict::Borderline) => Verdict::Borderline,
            (a, b) => {
                return Err(Error::VerdictConflict {
                    sum: a.to_string(),
                    integral: b.to_string(),
                })
            }
        };
        report.integral = Some(integral);
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub n: usize,
    /// ‖𝒞_{μ,α}(g_N)‖ in B_p (B_1 when p = 1).
    pub image_norm: f64,
    /// ‖g_N‖ in Λ^2_{1/2}.
    pub source_norm: f64,
    pub ratio: f64,
}

/// Ratios ‖𝒞_{μ,α}(g_N)‖_{B_p} / ‖g_N‖_{Λ^2_{1/2}} for g_N the truncation of
/// log(1/(1 − z)) at each degree N.
pub fn growth_probe(mu: &Measure, alpha: f64, p: f64, degrees: &[usize]) -> Result<Vec<GrowthPoint>> {
    check_params("growth_probe", alpha, p)?;
    if degrees.is_empty() || degrees.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition("degrees must be nonempty and increasing".into()));
    }
    let op = OperatorSpec::new(alpha, mu, *degrees.last().unwrap())?;
    degrees
        .iter()
        .map(|&n| {
            let g = log_series(n)?;
            let image = op.apply_coefficient_form(&g)?;
            let image_norm = target_norm(&image, p)?.value;
            let source_norm = mean_lipschitz_norm(&g, 2.0)?.value;
            Ok(GrowthPoint {
                n,
                image_norm,
                source_norm,
                ratio: image_norm / source_norm,
            })
        })
        .collect()
}

/// Monomial exponents k = 2^4, ..., 2^10 of the compactness probe.
pub const COMPACTNESS_EXPONENTS: [usize; 7] = [1 << 4, 1 << 5, 1 << 6, 1 << 7, 1 << 8, 1 << 9, 1 << 10];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompactnessPoint {
    pub k: usize,
    pub norm: f64,
}

/// ‖𝒞_{μ,α}(f_k)‖_{B_p} for f_k = z^k / ‖z^k‖_{Λ^2_{1/2}}, with images
/// truncated at degree 4·2^10. Requires a Converges verdict.
pub fn compactness_probe(mu: &Measure, alpha: f64, p: f64) -> Result<Vec<CompactnessPoint>> {
    let verdict = boundedness_verdict(mu, alpha, p, DEFAULT_DEGREE)?.verdict;
    if verdict != Verdict::Converges {
        return Err(Error::Precondition(format!(
            "compactness probe needs a Converges verdict, got {verdict}"
        )));
    }
    let k_max = *COMPACTNESS_EXPONENTS.last().unwrap();
    let degree = 4 * k_max;
    let op = OperatorSpec::new(alpha, mu, degree)?;
    COMPACTNESS_EXPONENTS
        .iter()
        .map(|&k| {
            let zk = PowerSeries::monomial(k);
            let scale = mean_lipschitz_norm(&zk, 2.0)?.value;
            let f = zk.scale(crate::Complex64::new(1.0 / scale, 0.0)).with_degree(degree);
            let image = op.apply_coefficient_form(&f)?;
            let norm = if image.coeffs().iter().all(|c| *c == crate::Complex64::new(0.0, 0.0)) {
                0.0
            } else {
                target_norm(&image, p)?.value
            };
            Ok(CompactnessPoint { k, norm })
        })
        .collect()
}

/// A criterion report flattened for serialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionRecord {
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub alpha: f64,
    pub p: f64,
    pub partial_sums: Vec<PartialSum>,
    pub tail_slope: Option<f64>,
    pub verdict: Verdict,
    pub analytic_verdict: Option<Verdict>,
}

impl CriterionRecord {
    pub fn new(mu: &Measure, alpha: f64, p: f64, report: &CriterionReport) -> Self {
        Self {
            family: mu.family().to_string(),
            params: mu.params(),
            alpha,
            p,
            partial_sums: report.partial_sums.clone(),
            tail_slope: report.tail_slope,
            verdict: report.verdict,
            analytic_verdict: report.analytic_verdict,
        }
    }
}

/// Verdict, growth probe and (when bounded) compactness probe for one
/// (μ, α, p).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub measure: String,
    pub hypothesis_satisfied: bool,
    pub criterion: CriterionRecord,
    pub integral: Option<IntegralReport>,
    pub growth: Vec<GrowthPoint>,
    pub compactness: Option<Vec<CompactnessPoint>>,
}

/// Growth-probe degrees N = 2^8, ..., 2^12.
pub const PROBE_DEGREES: [usize; 5] = [1 << 8, 1 << 9, 1 << 10, 1 << 11, 1 << 12];

pub fn theorem_report(mu: &Measure, alpha: f64, p: f64, degrees: &[usize]) -> Result<TheoremReport> {
    let report = boundedness_verdict(mu, alpha, p, DEFAULT_DEGREE)?;
    let growth = growth_probe(mu, alpha, p, degrees)?;
    let compactness = match report.verdict {
        Verdict::Converges => Some(compactness_probe(mu, alpha, p)?),
        _ => None,
    };
    Ok(TheoremReport {
        measure: mu.to_string(),
        hypothesis_satisfied: report.hypothesis_satisfied,
        criterion: CriterionRecord::new(mu, alpha, p, &report),
        integral: report.integral,
        growth,
        compactness,
    })
}
