use std::fs::File;
use std::path::Path;

use cesaro_core::config::{ExperimentConfig, OutputFormat};
use cesaro_core::criteria::{
    boundedness_verdict, growth_probe, theorem_report, CriterionRecord, Verdict, DEFAULT_DEGREE,
};
use cesaro_core::measures::{validate_moments, MomentValidation};
use cesaro_core::norms::{besov1_norm, besov_norm, bloch_norm, mean_lipschitz_norm, NormReport};
use cesaro_core::operator::OperatorSpec;
use cesaro_core::series::{binomial_series, log_power_series, log_series};
use cesaro_core::verify::{self, Suite, SuiteReport};
use cesaro_core::{moments as moment_seq, parse_measure, Measure, PowerSeries};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::output::{emit, json_document, render};
use crate::{
    ApplyArgs, CriterionArgs, Failure, MomentsArgs, NormArgs, NormKind, SeriesArgs, SweepArgs,
    TheoremArgs, VerifyArgs,
};

fn measure(spec: &str) -> Result<Measure, Failure> {
    parse_measure(spec).map_err(|e| Failure::Input(format!("--measure: {e}")))
}

fn check_degree(n: usize, cap: usize) -> Result<(), Failure> {
    if n > cap {
        return Err(Failure::Input(format!(
            "degree {n} exceeds the cap {cap} (set {} to raise it)",
            crate::MAX_DEGREE_VAR
        )));
    }
    Ok(())
}

fn check_finite(name: &str, v: f64) -> Result<(), Failure> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Failure::Input(format!("{name} must be finite")))
    }
}

fn parse_series_spec(spec: &str, degree: usize) -> Result<PowerSeries, Failure> {
    let bad = || Failure::Input(format!("unknown series `{spec}`"));
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = spec.split(':').collect();
    let series = match parts.as_slice() {
        ["log"] => log_series(degree)?,
        ["binomial", b] => binomial_series(num(b)?, degree)?,
        ["logpower", b, g] => log_power_series(num(b)?, g.parse().map_err(|_| bad())?, degree)?,
        ["monomial", k] => {
            let k: usize = k.parse().map_err(|_| bad())?;
            if k > degree {
                return Err(Failure::Input(format!("monomial degree {k} exceeds --degree {degree}")));
            }
            PowerSeries::monomial(k).with_degree(degree)
        }
        _ => return Err(bad()),
    };
    Ok(series)
}

fn load_series(src: &SeriesArgs, cap: usize) -> Result<PowerSeries, Failure> {
    match (&src.input, &src.series) {
        (Some(path), _) => {
            let file = File::open(path)
                .map_err(|e| Failure::Input(format!("cannot open {}: {e}", path.display())))?;
            PowerSeries::read_csv(file, cap)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        (None, Some(spec)) => {
            check_degree(src.degree, cap)?;
            parse_series_spec(spec, src.degree)
        }
        (None, None) => Err(Failure::Input("one of --input or --series is required".into())),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MomentRow {
    pub n: usize,
    pub mu: f64,
    pub valid: bool,
}

pub fn moments(a: MomentsArgs, cap: usize) -> Result<(), Failure> {
    check_degree(a.n, cap)?;
    let mu = measure(&a.measure)?;
    let m = moment_seq(&mu, a.n)?;
    let first_bad = match validate_moments(&m, 4)? {
        MomentValidation::Valid => usize::MAX,
        MomentValidation::Invalid { n, .. } => n,
    };
    let rows: Vec<MomentRow> = m
        .values()
        .iter()
        .enumerate()
        .map(|(n, &mu)| MomentRow { n, mu, valid: n < first_bad })
        .collect();
    let bytes = render(a.out.format.into(), &rows, &rows)?;
    emit(&bytes, a.out.output.as_deref())
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CoefficientRow {
    pub index: usize,
    pub real: f64,
    pub imag: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ApplyDocument {
    pub measure: String,
    pub alpha: f64,
    pub coefficients: Vec<CoefficientRow>,
}

pub fn apply(a: ApplyArgs, cap: usize) -> Result<(), Failure> {
    check_finite("--alpha", a.alpha)?;
    let mu = measure(&a.measure)?;
    let f = load_series(&a.source, cap)?;
    let op = OperatorSpec::new(a.alpha, &mu, f.degree())?;
    let image = op.apply_coefficient_form(&f)?;
    let rows: Vec<CoefficientRow> = image
        .coeffs()
        .iter()
        .enumerate()
        .map(|(index, c)| CoefficientRow { index, real: c.re, imag: c.im })
        .collect();
    let doc = ApplyDocument {
        measure: mu.to_string(),
        alpha: a.alpha,
        coefficients: rows.clone(),
    };
    let bytes = render(a.out.format.into(), &rows, &doc)?;
    emit(&bytes, a.out.output.as_deref())
}

#[derive(Serialize)]
struct NormRow {
    kind: NormKind,
    p: Option<f64>,
    degree: usize,
    value: f64,
    radial_points: usize,
    angular_points: usize,
    richardson_delta: f64,
}

pub fn norm(a: NormArgs, cap: usize) -> Result<(), Failure> {
    let f = load_series(&a.source, cap)?;
    let need_p = || a.p.ok_or_else(|| Failure::Input("--p is required for this norm".into()));
    let report: NormReport = match a.kind {
        NormKind::Bloch => bloch_norm(&f)?,
        NormKind::Besov => besov_norm(&f, need_p()?)?,
        NormKind::Besov1 => besov1_norm(&f)?,
        NormKind::Lipschitz => mean_lipschitz_norm(&f, need_p()?)?,
    };
    let row = NormRow {
        kind: a.kind,
        p: match a.kind {
            NormKind::Besov | NormKind::Lipschitz => a.p,
            _ => None,
        },
        degree: f.degree(),
        value: report.value,
        radial_points: report.radial_points,
        angular_points: report.angular_points,
        richardson_delta: report.richardson_delta,
    };
    let bytes = render(a.out.format.into(), std::slice::from_ref(&row), &row)?;
    emit(&bytes, a.out.output.as_deref())
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PartialSumRow {
    pub family: String,
    pub alpha: f64,
    pub p: f64,
    pub n: usize,
    pub partial_sum: f64,
    pub verdict: Verdict,
    pub analytic_verdict: Option<Verdict>,
    pub tail_slope: Option<f64>,
}

fn warn_hypothesis(alpha: f64, p: f64, satisfied: bool) {
    if !satisfied {
        eprintln!("warning: p = {p} is below max(1, 1/alpha) = {}; the criterion is outside its hypothesis", 1f64.max(1.0 / alpha));
    }
}

pub fn criterion(a: CriterionArgs, cap: usize) -> Result<(), Failure> {
    check_degree(a.n, cap)?;
    check_finite("--alpha", a.alpha)?;
    check_finite("--p", a.p)?;
    let mu = measure(&a.measure)?;
    let report = boundedness_verdict(&mu, a.alpha, a.p, a.n)?;
    warn_hypothesis(a.alpha, a.p, report.hypothesis_satisfied);
    let record = CriterionRecord::new(&mu, a.alpha, a.p, &report);
    let rows: Vec<PartialSumRow> = record
        .partial_sums
        .iter()
        .map(|s| PartialSumRow {
            family: record.family.clone(),
            alpha: a.alpha,
            p: a.p,
            n: s.n,
            partial_sum: s.value,
            verdict: record.verdict,
            analytic_verdict: record.analytic_verdict,
            tail_slope: record.tail_slope,
        })
        .collect();
    let bytes = render(a.out.format.into(), &rows, &record)?;
    emit(&bytes, a.out.output.as_deref())
}

pub fn theorem(a: TheoremArgs, cap: usize) -> Result<(), Failure> {
    check_finite("--alpha", a.alpha)?;
    check_finite("--p", a.p)?;
    if let Some(&top) = a.degrees.iter().max() {
        check_degree(top, cap)?;
    }
    let mu = measure(&a.measure)?;
    let report = theorem_report(&mu, a.alpha, a.p, &a.degrees)?;
    warn_hypothesis(a.alpha, a.p, report.hypothesis_satisfied);
    emit(&json_document(&report)?, a.output.as_deref())
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CaseRow {
    pub suite: String,
    pub label: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

pub fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let suites: Vec<Suite> = if a.lemma == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.lemma.parse::<Suite>()?]
    };
    let reports: Vec<SuiteReport> = suites
        .into_iter()
        .map(verify::run)
        .collect::<Result<_, _>>()?;
    let rows: Vec<CaseRow> = reports
        .iter()
        .flat_map(|r| {
            r.cases.iter().map(|c| CaseRow {
                suite: r.suite.to_string(),
                label: c.label.clone(),
                value: c.value,
                bound: c.bound,
                pass: c.pass,
            })
        })
        .collect();
    let bytes = render(a.out.format.into(), &rows, &reports)?;
    emit(&bytes, a.out.output.as_deref())?;
    match reports.iter().find_map(|r| r.first_failure().map(|c| (r.suite, c))) {
        Some((suite, case)) => Err(Failure::Verify(format!(
            "suite {suite}: {} (value {:e}, bound {:e})",
            case.label, case.value, case.bound
        ))),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepRow {
    pub measure: String,
    pub alpha: f64,
    pub p: f64,
    pub verdict: Verdict,
    pub analytic_verdict: Option<Verdict>,
    pub tail_slope: Option<f64>,
    pub n: usize,
    pub ratio: f64,
}

pub fn sweep(a: SweepArgs, cap: usize) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&a.config)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", a.config.display())))?;
    let cfg = ExperimentConfig::parse(&text, cap)
        .map_err(|e| Failure::Input(format!("{}: {e}", a.config.display())))?;
    let measures = cfg.parsed_measures()?;
    let mut grid: Vec<(&Measure, f64, f64)> = Vec::new();
    for m in &measures {
        for &alpha in &cfg.alphas {
            for &p in &cfg.ps {
                grid.push((m, alpha, p));
            }
        }
    }
    let verdict_degree = DEFAULT_DEGREE.min(cap);
    let blocks: Vec<Vec<SweepRow>> = grid
        .par_iter()
        .map(|&(mu, alpha, p)| -> Result<Vec<SweepRow>, Failure> {
            let report = boundedness_verdict(mu, alpha, p, verdict_degree)?;
            let probe = growth_probe(mu, alpha, p, &cfg.degrees)?;
            Ok(probe
                .iter()
                .map(|g| SweepRow {
                    measure: mu.to_string(),
                    alpha,
                    p,
                    verdict: report.verdict,
                    analytic_verdict: report.analytic_verdict,
                    tail_slope: report.tail_slope,
                    n: g.n,
                    ratio: g.ratio,
                })
                .collect())
        })
        .collect::<Result<_, _>>()?;
    let rows: Vec<SweepRow> = blocks.into_iter().flatten().collect();
    let path = a.output.or_else(|| cfg.output.as_ref().map(Into::into));
    let format: OutputFormat = cfg.format;
    let bytes = render(format, &rows, &rows)?;
    emit(&bytes, path.as_deref().map(Path::new))
}
