//! Built-in verification grids for the lemmas and the operator forms.
//!
//! Each suite evaluates a fixed grid of cases and reports, per case, the
//! measured statistic (a max/min ratio window or a relative error) against
//! its bound.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{moments, Atom, Measure};
use crate::norms::{besov_norm, circle_kernel_integral, coefficient_besov_sum, dyadic_block_equivalence};
use crate::operator::{inner_sum, OperatorSpec};
use crate::series::{binomial_series, log_power_series, log_series, PowerSeries};
use crate::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    #[serde(rename = "2.1")]
    CoefficientSum,
    #[serde(rename = "2.2")]
    DyadicBlocks,
    #[serde(rename = "2.3")]
    Asymptotics,
    #[serde(rename = "2.4")]
    CircleKernel,
    #[serde(rename = "inner-sum")]
    InnerSum,
    #[serde(rename = "forms")]
    Forms,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::CoefficientSum,
        Suite::DyadicBlocks,
        Suite::Asymptotics,
        Suite::CircleKernel,
        Suite::InnerSum,
        Suite::Forms,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::CoefficientSum => "2.1",
            Suite::DyadicBlocks => "2.2",
            Suite::Asymptotics => "2.3",
            Suite::CircleKernel => "2.4",
            Suite::InnerSum => "inner-sum",
            Suite::Forms => "forms",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown suite `{s}` (expected 2.1, 2.2, 2.3, 2.4, inner-sum or forms)")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub label: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Case {
    fn at_most(label: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            label: label.into(),
            value,
            bound,
            pass: value <= bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: Vec<Case>,
    pub pass: bool,
}

impl SuiteReport {
    fn new(suite: Suite, cases: Vec<Case>) -> Self {
        let pass = cases.iter().all(|c| c.pass);
        Self { suite, cases, pass }
    }

    pub fn first_failure(&self) -> Option<&Case> {
        self.cases.iter().find(|c| !c.pass)
    }
}

fn ratio_window(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    max / min
}

pub fn run(suite: Suite) -> Result<SuiteReport> {
    let cases = match suite {
        Suite::CoefficientSum => coefficient_sum_cases()?,
        Suite::DyadicBlocks => dyadic_cases()?,
        Suite::Asymptotics => asymptotic_cases()?,
        Suite::CircleKernel => circle_cases()?,
        Suite::InnerSum => inner_sum_cases()?,
        Suite::Forms => form_cases()?,
    };
    Ok(SuiteReport::new(suite, cases))
}

/// Growth of the Besov norm and of the coefficient sum under N → 2N must
/// fall on the same side of 5%.
fn coefficient_sum_cases() -> Result<Vec<Case>> {
    let (n, threshold) = (32, 0.05);
    let functions: Vec<(&str, Box<dyn Fn(usize) -> Result<PowerSeries>>)> = vec![
        ("log(1/(1-z))", Box::new(log_series)),
        ("(1-z)^-1/2", Box::new(|d| binomial_series(0.5, d))),
        (
            "n^-1 log^-2(n+1)",
            Box::new(|d| {
                let a: Vec<f64> = (0..=d)
                    .map(|k| if k == 0 { 0.0 } else { 1.0 / (k as f64 * ((k + 1) as f64).ln().powi(2)) })
                    .collect();
                PowerSeries::from_real(&a)
            }),
        ),
        ("2^-n", Box::new(|d| PowerSeries::from_real(&(0..=d).map(|k| 0.5f64.powi(k as i32)).collect::<Vec<_>>()))),
    ];
    let mut cases = Vec::new();
    for (name, make) in &functions {
        for &p in &[1.5, 2.0] {
            let (f, g) = (make(n)?, make(2 * n)?);
            let besov = besov_norm(&g, p)?.value / besov_norm(&f, p)?.value - 1.0;
            let coef = (coefficient_besov_sum(&g, p)? / coefficient_besov_sum(&f, p)?).powf(1.0 / p) - 1.0;
            let agree = (besov > threshold) == (coef > threshold);
            cases.push(Case {
                label: format!("{name}, p={p}: growth besov {besov:.4}, coefficient {coef:.4}"),
                value: if agree { 0.0 } else { 1.0 },
                bound: 0.0,
                pass: agree,
            });
        }
    }
    Ok(cases)
}

fn dyadic_cases() -> Result<Vec<Case>> {
    let n = 1 << 12;
    let mu = moments(&Measure::beta(1.0, 2.0)?, n)?;
    let profiles: Vec<Vec<f64>> = vec![
        vec![1.0; n + 1],
        (0..=n).map(|k| ((k + 1) as f64).powf(-0.5)).collect(),
        (0..=n).map(|k| 1.0 / (k + 1) as f64).collect(),
        (0..=n).map(|k| ((k + 2) as f64).ln() / (k + 1) as f64).collect(),
        (0..=n).map(|k| ((k + 1) as f64).powi(-2)).collect(),
        (0..=n).map(|k| mu.get(k) * ((k + 2) as f64).ln()).collect(),
    ];
    let mut cases = Vec::new();
    for &beta in &[0.5, 1.0] {
        for &p in &[1.0, 2.0] {
            let ratios = profiles
                .iter()
                .map(|l| dyadic_block_equivalence(l, beta, p).map(|d| d.ratio()))
                .collect::<Result<Vec<_>>>()?;
            cases.push(Case::at_most(
                format!("beta={beta}, p={p}: lhs/rhs over 6 sequences"),
                ratio_window(&ratios),
                10.0,
            ));
        }
    }
    Ok(cases)
}

fn asymptotic_cases() -> Result<Vec<Case>> {
    let n_max = 1 << 14;
    let mut cases = Vec::new();
    for &beta in &[0.5, 1.0, 2.0] {
        for gamma in 0..=2u32 {
            let f = log_power_series(beta, gamma, n_max)?;
            let ratios: Vec<f64> = (1 << 6..=n_max)
                .map(|n| {
                    let x = n as f64;
                    f.coeff(n).re / (x.powf(beta - 1.0) * (x + 1.0).ln().powi(gamma as i32))
                })
                .collect();
            cases.push(Case::at_most(
                format!("beta={beta}, gamma={gamma}: a_n / (n^(beta-1) log^gamma(n+1))"),
                ratio_window(&ratios),
                10.0,
            ));
        }
    }
    Ok(cases)
}

fn circle_cases() -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for &r in &[0.3, 0.5, 0.9] {
        let got = circle_kernel_integral(Complex64::from_polar(r, 1.1), 2.0)?;
        let exact = 2.0 * PI / (1.0 - r * r);
        cases.push(Case::at_most(
            format!("alpha=2, |z|={r}: relative error"),
            (got - exact).abs() / exact,
            1e-9,
        ));
    }
    let radii: Vec<f64> = (0..=49).map(|j| 0.5 + 0.49 * j as f64 / 49.0).collect();
    for &alpha in &[1.0, 0.5] {
        let ratios = radii
            .iter()
            .map(|&r| {
                let v = circle_kernel_integral(Complex64::new(r, 0.0), alpha)?;
                Ok(if alpha == 1.0 { v / (2.0 / (1.0 - r * r)).ln() } else { v })
            })
            .collect::<Result<Vec<_>>>()?;
        cases.push(Case::at_most(
            format!("alpha={alpha}, |z| in [0.5, 0.99]: ratio window"),
            ratio_window(&ratios),
            5.0,
        ));
    }
    Ok(cases)
}

fn inner_sum_cases() -> Result<Vec<Case>> {
    let mut ns: Vec<usize> = (32..=120).map(|j| (j as f64 / 8.0).exp2().round() as usize).collect();
    ns.dedup();
    let mut cases = Vec::new();
    for &alpha in &[0.5, 1.0, 2.0, 3.0] {
        let ratios = ns
            .iter()
            .map(|&n| {
                inner_sum(n, alpha).map(|s| s / (((n + 1) as f64).powf(alpha - 1.0) * ((n + 2) as f64).ln()))
            })
            .collect::<Result<Vec<_>>>()?;
        cases.push(Case::at_most(
            format!("alpha={alpha}: S(n,alpha) / ((n+1)^(alpha-1) log(n+2)), n in [16, 32768]"),
            ratio_window(&ratios),
            5.0,
        ));
    }
    let mut h = 0.0;
    let mut worst = 0.0f64;
    for n in 1usize..=1 << 12 {
        h += 1.0 / n as f64;
        worst = worst.max((inner_sum(n, 1.0)? - h).abs() / h);
    }
    cases.push(Case::at_most("S(n,1) = H_n for n <= 4096: relative error", worst, 1e-12));
    Ok(cases)
}

fn form_cases() -> Result<Vec<Case>> {
    let measures = [
        Measure::atoms(vec![Atom { t: 0.3, w: 0.5 }, Atom { t: 0.8, w: 1.0 }])?,
        Measure::beta(1.0, 1.5)?,
        Measure::log_beta(1.0, 2.0, 1)?,
    ];
    let padded = 1024;
    let series: Vec<PowerSeries> = (0..3)
        .map(|j| {
            PowerSeries::new(
                (0..=64)
                    .map(|n| {
                        let x = (n * 7 + j * 13) as f64;
                        Complex64::new(x.sin(), (0.37 * x).cos())
                    })
                    .collect(),
            )
        })
        .collect::<Result<_>>()?;
    let mut cases = Vec::new();
    for mu in &measures {
        for &alpha in &[0.5, 1.0, 1.5, 2.0] {
            let op = OperatorSpec::new(alpha, mu, padded)?;
            let mut worst = 0.0f64;
            for f in &series {
                let image = op.apply_coefficient_form(&f.with_degree(padded))?;
                for &r in &[0.1, 0.3, 0.5, 0.7, 0.9] {
                    for j in 0..8 {
                        let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / 8.0);
                        let a = image.eval(z)?;
                        let b = op.apply_integral_form(f, z)?;
                        worst = worst.max((a - b).norm() / b.norm());
                    }
                }
            }
            cases.push(Case::at_most(
                format!("{mu}, alpha={alpha}: coefficient vs integral form"),
                worst,
                1e-7,
            ));
        }
    }
    Ok(cases)
}
