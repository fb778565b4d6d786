//! Finite positive Borel measures on [0, 1) and their power moments.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::GradedRule;
use crate::specfun::beta_fn;

/// A point mass `w` at `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub t: f64,
    pub w: f64,
}

type DensityFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A user-supplied density ρ(t) on [0, 1).
#[derive(Clone)]
pub struct GenericDensity {
    label: String,
    density: Arc<DensityFn>,
    integrable_near_one: bool,
}

impl GenericDensity {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn integrable_near_one(&self) -> bool {
        self.integrable_near_one
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.density)(t)
    }
}

impl fmt::Debug for GenericDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GenericDensity")
            .field("label", &self.label)
            .field("integrable_near_one", &self.integrable_near_one)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum Measure {
    /// Σ w_j δ_{t_j} with 0 ≤ t_j < 1.
    Atoms(Vec<Atom>),
    /// c (1 − t)^{s−1} dt.
    BetaDensity { c: f64, s: f64 },
    /// c (1 − t)^{s−1} log^γ(e/(1 − t)) dt.
    LogBetaDensity { c: f64, s: f64, gamma: u32 },
    GenericDensity(GenericDensity),
}

/// One node of a discretized measure. `u = 1 − t` is kept separately so that
/// nodes crowding toward t = 1 do not lose precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub t: f64,
    pub u: f64,
    pub weight: f64,
}

/// Positive weighted nodes approximating a measure, plus the mass of the
/// uncovered interval (1 − delta, 1) lumped at `tail_u`.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub nodes: Vec<Node>,
    pub tail_mass: f64,
    pub tail_u: f64,
}

impl Discretization {
    /// Σ weight · g(t, u), including the tail node.
    pub fn integrate<T, F>(&self, mut g: F) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: FnMut(f64, f64) -> T,
    {
        let mut acc = self
            .nodes
            .iter()
            .fold(T::default(), |acc, nd| acc + g(nd.t, nd.u) * nd.weight);
        if self.tail_mass > 0.0 {
            acc = acc + g(1.0 - self.tail_u, self.tail_u) * self.tail_mass;
        }
        acc
    }

    /// All nodes including the tail as a plain list.
    pub fn all_nodes(&self) -> Vec<Node> {
        let mut v = self.nodes.clone();
        if self.tail_mass > 0.0 {
            v.push(Node {
                t: 1.0 - self.tail_u,
                u: self.tail_u,
                weight: self.tail_mass,
            });
        }
        v
    }
}

const GENERIC_MAX_LEVELS: u32 = 50;
const DEFAULT_POINTS: usize = 32;

impl Measure {
    pub fn atoms(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Input("an atomic measure needs at least one atom".into()));
        }
        for a in &atoms {
            if !(0.0..1.0).contains(&a.t) {
                return Err(Error::Input(format!("atom position {} is outside [0, 1)", a.t)));
            }
            if !(a.w > 0.0) || !a.w.is_finite() {
                return Err(Error::Input(format!("atom weight {} must be positive", a.w)));
            }
        }
        Ok(Measure::Atoms(atoms))
    }

    pub fn atom(t: f64, w: f64) -> Result<Self> {
        Self::atoms(vec![Atom { t, w }])
    }

    pub fn beta(c: f64, s: f64) -> Result<Self> {
        check_positive("c", c)?;
        check_positive("s", s)?;
        Ok(Measure::BetaDensity { c, s })
    }

    /// Lebesgue measure on [0, 1).
    pub fn lebesgue() -> Self {
        Measure::BetaDensity { c: 1.0, s: 1.0 }
    }

    pub fn log_beta(c: f64, s: f64, gamma: u32) -> Result<Self> {
        check_positive("c", c)?;
        check_positive("s", s)?;
        if gamma > 32 {
            return Err(Error::Input(format!("log exponent {gamma} is too large (max 32)")));
        }
        Ok(Measure::LogBetaDensity { c, s, gamma })
    }

    pub fn generic<F>(label: impl Into<String>, density: F, integrable_near_one: bool) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Measure::GenericDensity(GenericDensity {
            label: label.into(),
            density: Arc::new(density),
            integrable_near_one,
        })
    }

    pub fn family(&self) -> &'static str {
        match self {
            Measure::Atoms(_) => "atoms",
            Measure::BetaDensity { .. } => "beta",
            Measure::LogBetaDensity { .. } => "logbeta",
            Measure::GenericDensity(_) => "generic",
        }
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        match self {
            Measure::Atoms(atoms) => {
                for (j, a) in atoms.iter().enumerate() {
                    m.insert(format!("t{j}"), a.t);
                    m.insert(format!("w{j}"), a.w);
                }
            }
            Measure::BetaDensity { c, s } => {
                m.insert("c".into(), *c);
                m.insert("s".into(), *s);
            }
            Measure::LogBetaDensity { c, s, gamma } => {
                m.insert("c".into(), *c);
                m.insert("s".into(), *s);
                m.insert("g".into(), *gamma as f64);
            }
            Measure::GenericDensity(_) => {}
        }
        m
    }

    /// Multiplies the measure by `k > 0`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        check_positive("scale", k)?;
        Ok(match self {
            Measure::Atoms(atoms) => Measure::Atoms(
                atoms.iter().map(|a| Atom { t: a.t, w: a.w * k }).collect(),
            ),
            Measure::BetaDensity { c, s } => Measure::BetaDensity { c: c * k, s: *s },
            Measure::LogBetaDensity { c, s, gamma } => Measure::LogBetaDensity {
                c: c * k,
                s: *s,
                gamma: *gamma,
            },
            Measure::GenericDensity(g) => {
                let inner = g.density.clone();
                Measure::GenericDensity(GenericDensity {
                    label: format!("{}*{k}", g.label),
                    density: Arc::new(move |t| k * inner(t)),
                    integrable_near_one: g.integrable_near_one,
                })
            }
        })
    }

    /// Density expressed in u = 1 − t. None for atomic measures.
    pub fn density_in_u(&self, u: f64) -> Option<f64> {
        match self {
            Measure::Atoms(_) => None,
            Measure::BetaDensity { c, s } => Some(c * u.powf(s - 1.0)),
            Measure::LogBetaDensity { c, s, gamma } => {
                Some(c * u.powf(s - 1.0) * (1.0 - u.ln()).powi(*gamma as i32))
            }
            Measure::GenericDensity(g) => Some(g.eval(1.0 - u)),
        }
    }

    /// Closed-form ∫_{1−δ}^1 dμ for the beta-type families.
    fn analytic_tail(&self, delta: f64) -> Option<(f64, f64)> {
        match self {
            Measure::BetaDensity { c, s } => Some((c * delta.powf(*s) / s, delta * s / (s + 1.0))),
            Measure::LogBetaDensity { c, s, gamma } => {
                // ∫_0^δ u^{s−1}(1 + ln(1/u))^γ du
                //   = δ^s Σ_j C(γ, j) (1 + W)^{γ−j} j! / s^{j+1},  W = ln(1/δ)
                let w = -delta.ln();
                let g = *gamma;
                let mut sum = 0.0;
                let mut binom = 1.0;
                let mut fact = 1.0;
                for j in 0..=g {
                    if j > 0 {
                        binom *= (g - j + 1) as f64 / j as f64;
                        fact *= j as f64;
                    }
                    sum += binom * (1.0 + w).powi((g - j) as i32) * fact / s.powi(j as i32 + 1);
                }
                Some((c * delta.powf(*s) * sum, delta * s / (s + 1.0)))
            }
            _ => None,
        }
    }

    /// Approximates the measure by positive weighted nodes.
    ///
    /// Densities use Gauss-Legendre panels in u = 1 − t that halve in width
    /// toward u = 0 (`levels` panels, `points` nodes each). The remaining mass
    /// on (1 − 2^{−levels}, 1) is taken in closed form for the beta families
    /// and by geometric extrapolation of the panel masses for generic densities.
    pub fn discretize(&self, levels: u32, points: usize) -> Result<Discretization> {
        match self {
            Measure::Atoms(atoms) => Ok(Discretization {
                nodes: atoms
                    .iter()
                    .map(|a| Node {
                        t: a.t,
                        u: 1.0 - a.t,
                        weight: a.w,
                    })
                    .collect(),
                tail_mass: 0.0,
                tail_u: 0.0,
            }),
            Measure::GenericDensity(g) => {
                if !g.integrable_near_one {
                    return Err(Error::Integrability(format!(
                        "density `{}` is flagged as non-integrable near t = 1",
                        g.label
                    )));
                }
                let levels = levels.clamp(4, GENERIC_MAX_LEVELS);
                self.discretize_density(levels, points)
            }
            _ => self.discretize_density(levels, points),
        }
    }

    fn discretize_density(&self, levels: u32, points: usize) -> Result<Discretization> {
        let rule = GradedRule::new(levels, points);
        let mut nodes = Vec::with_capacity(rule.points.len());
        let mut panel_mass = vec![0.0; levels as usize];
        for (i, &(u, w)) in rule.points.iter().enumerate() {
            let rho = self.density_in_u(u).unwrap_or(0.0);
            if !(rho >= 0.0) || !rho.is_finite() {
                return Err(Error::Integrability(format!(
                    "density is negative or not finite at t = {}",
                    1.0 - u
                )));
            }
            panel_mass[i / points] += w * rho;
            nodes.push(Node {
                t: 1.0 - u,
                u,
                weight: w * rho,
            });
        }
        let delta = rule.delta();
        let (tail_mass, tail_u) = match self.analytic_tail(delta) {
            Some(t) => t,
            None => {
                let n = panel_mass.len();
                let last = panel_mass[n - 1];
                let prev = panel_mass[n - 2];
                if last == 0.0 {
                    (0.0, 0.0)
                } else {
                    let q = last / prev;
                    if !(q < 0.999) {
                        return Err(Error::Integrability(
                            "density mass does not decay toward t = 1".into(),
                        ));
                    }
                    (last * q / (1.0 - q), 0.5 * delta)
                }
            }
        };
        let total: f64 = panel_mass.iter().sum::<f64>() + tail_mass;
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::Integrability("measure has no finite positive mass".into()));
        }
        Ok(Discretization {
            nodes,
            tail_mass,
            tail_u,
        })
    }

    /// A discretization fine enough for moments up to `degree`.
    pub fn discretize_for_degree(&self, degree: usize) -> Result<Discretization> {
        self.discretize(levels_for_degree(degree), DEFAULT_POINTS)
    }
}

/// Enough dyadic panels that degree · 2^{-levels} is below 1e-14.
pub(crate) fn levels_for_degree(degree: usize) -> u32 {
    let lg = usize::BITS - degree.max(1).leading_zeros();
    lg + 48
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Input(format!("{name} = {v} must be positive and finite")))
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Atoms(atoms) => {
                write!(f, "atoms:")?;
                for a in atoms {
                    write!(f, " ({},{})", a.t, a.w)?;
                }
                Ok(())
            }
            Measure::BetaDensity { c, s } => write!(f, "beta: c={c} s={s}"),
            Measure::LogBetaDensity { c, s, gamma } => write!(f, "logbeta: c={c} s={s} g={gamma}"),
            Measure::GenericDensity(g) => write!(f, "generic: {}", g.label),
        }
    }
}

/// μ_0..μ_N of a measure.
#[derive(Debug, Clone)]
pub struct MomentSequence {
    values: Vec<f64>,
    source: Measure,
}

impl MomentSequence {
    /// Wraps raw values without checking the moment property; see
    /// `validate_moments`.
    pub fn from_raw(values: Vec<f64>, source: Measure) -> Self {
        assert!(!values.is_empty(), "moment sequence cannot be empty");
        Self { values, source }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn degree(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> f64 {
        self.values[n]
    }

    pub fn measure(&self) -> &Measure {
        &self.source
    }
}

/// μ_n = ∫ t^n dμ(t) for n = 0..=degree.
///
/// Closed forms for atoms and beta densities; other densities go through
/// `quadrature_moments`.
pub fn moments(mu: &Measure, degree: usize) -> Result<MomentSequence> {
    let values = match mu {
        Measure::Atoms(atoms) => atom_moments(atoms, degree),
        Measure::BetaDensity { c, s } => (0..=degree)
            .map(|n| beta_fn(n as f64 + 1.0, *s).map(|b| c * b))
            .collect::<Result<Vec<_>>>()?,
        _ => return quadrature_moments(mu, degree),
    };
    Ok(MomentSequence {
        values,
        source: mu.clone(),
    })
}

fn atom_moments(atoms: &[Atom], degree: usize) -> Vec<f64> {
    let mut out = vec![0.0; degree + 1];
    for a in atoms {
        let mut p = a.w;
        for slot in out.iter_mut() {
            *slot += p;
            p *= a.t;
        }
    }
    out
}

fn moments_from_nodes(disc: &Discretization, degree: usize) -> Vec<f64> {
    let mut out = vec![0.0; degree + 1];
    for nd in disc.all_nodes() {
        let mut p = nd.weight;
        for slot in out.iter_mut() {
            *slot += p;
            p *= nd.t;
            if p < 1e-300 {
                break;
            }
        }
    }
    out
}

const QUAD_POINT_LADDER: [usize; 5] = [16, 24, 32, 48, 64];
const QUAD_MOMENT_RTOL: f64 = 1e-11;

/// Moments by graded Gauss-Legendre quadrature, refining the number of nodes
/// per panel until two successive rules agree to 1e-11 relative at sampled
/// orders.
pub fn quadrature_moments(mu: &Measure, degree: usize) -> Result<MomentSequence> {
    if let Measure::Atoms(atoms) = mu {
        return Ok(MomentSequence {
            values: atom_moments(atoms, degree),
            source: mu.clone(),
        });
    }
    let levels = levels_for_degree(degree);
    let probes = [0, degree / 8, degree / 2, degree];
    let mut prev: Option<Vec<f64>> = None;
    for &points in &QUAD_POINT_LADDER {
        let disc = mu.discretize(levels, points)?;
        let vals = moments_from_nodes(&disc, degree);
        if let Some(p) = &prev {
            let ok = probes.iter().all(|&n| {
                let scale = vals[n].abs().max(1e-300);
                (vals[n] - p[n]).abs() <= QUAD_MOMENT_RTOL * scale
            });
            if ok {
                return Ok(MomentSequence {
                    values: vals,
                    source: mu.clone(),
                });
            }
        }
        prev = Some(vals);
    }
    log::warn!("quadrature moments for `{mu}` did not reach the target accuracy");
    Ok(MomentSequence {
        values: prev.expect("ladder is non-empty"),
        source: mu.clone(),
    })
}

/// Outcome of the completely-monotone check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MomentValidation {
    Valid,
    /// (−1)^k Δ^k μ_n fell below the slack.
    Invalid { n: usize, k: usize },
}

impl MomentValidation {
    pub fn is_valid(&self) -> bool {
        matches!(self, MomentValidation::Valid)
    }
}

pub const MOMENT_SLACK: f64 = 1e-12;

/// Checks (−1)^k Δ^k μ_n ≥ −1e-12 for every k ≤ depth and n ≤ N − k.
pub fn validate_moments(m: &MomentSequence, depth: usize) -> Result<MomentValidation> {
    if depth > 8 {
        return Err(Error::Precondition(format!("depth {depth} exceeds 8")));
    }
    let mut diff = m.values.clone();
    for k in 0..=depth {
        if k > 0 {
            if diff.len() < 2 {
                break;
            }
            // Store (−1)^k Δ^k directly: (−1)^k Δ^k μ_n = d_n − d_{n+1} for the
            // previous level d = (−1)^{k−1} Δ^{k−1} μ.
            diff = diff.windows(2).map(|w| w[0] - w[1]).collect();
        }
        if let Some(n) = diff.iter().position(|&d| !(d >= -MOMENT_SLACK)) {
            return Ok(MomentValidation::Invalid { n, k });
        }
    }
    Ok(MomentValidation::Valid)
}

/// Result of regressing log μ_n against log n over n ∈ [N/4, N].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    /// Estimated decay exponent, μ_n ≈ C n^{−s_hat}.
    pub s_hat: f64,
    /// Coefficient of determination of the log-log fit.
    pub r2: f64,
    /// Same statistic for log μ_n against n; exceeding `r2` signals
    /// geometric rather than polynomial decay.
    pub r2_geometric: f64,
}

impl TailFit {
    pub fn is_geometric(&self) -> bool {
        self.r2_geometric > self.r2
    }
}

pub fn tail_exponent_fit(m: &MomentSequence) -> Result<TailFit> {
    let n_max = m.degree();
    if n_max < 1 << 10 {
        return Err(Error::Precondition(format!(
            "tail fit needs N >= 1024, got {n_max}"
        )));
    }
    let lo = n_max / 4;
    let window = &m.values[lo..=n_max];
    if let Some(i) = window.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::Precondition(format!(
            "degenerate tail fit: moment {} is zero",
            lo + i
        )));
    }
    let ys: Vec<f64> = window.iter().map(|v| v.ln()).collect();
    let log_xs: Vec<f64> = (lo..=n_max).map(|n| (n as f64).ln()).collect();
    let lin_xs: Vec<f64> = (lo..=n_max).map(|n| n as f64).collect();
    let (slope, r2) = least_squares(&log_xs, &ys);
    let (_, r2_geometric) = least_squares(&lin_xs, &ys);
    Ok(TailFit {
        s_hat: -slope,
        r2,
        r2_geometric,
    })
}

/// Slope and R² of the ordinary least-squares line.
pub(crate) fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_adaptive;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn lebesgue_and_atom_examples() {
        let leb = moments(&Measure::lebesgue(), 64).unwrap();
        for (n, &m) in leb.values().iter().enumerate() {
            assert!(rel(m, 1.0 / (n as f64 + 1.0)) < 1e-14);
        }
        let atom = moments(&Measure::atom(0.5, 1.0).unwrap(), 40).unwrap();
        for (n, &m) in atom.values().iter().enumerate() {
            assert_eq!(m, 0.5f64.powi(n as i32));
        }
    }

    #[test]
    fn atom_at_zero_only_has_mass_at_order_zero() {
        let m = moments(&Measure::atom(0.0, 2.0).unwrap(), 5).unwrap();
        assert_eq!(m.values(), &[2.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn beta_two_against_quadrature_oracle() {
        let m = moments(&Measure::beta(1.0, 2.0).unwrap(), 300).unwrap();
        for n in [0usize, 1, 7, 50, 300] {
            let exact = 1.0 / ((n as f64 + 1.0) * (n as f64 + 2.0));
            assert!(rel(m.get(n), exact) < 1e-13);
            let oracle =
                integrate_adaptive(|t| t.powi(n as i32) * (1.0 - t), 0.0, 1.0, 1e-13, 0.0).unwrap();
            assert!(rel(m.get(n), oracle) < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn closed_form_and_quadrature_agree_for_beta() {
        for &s in &[0.5, 1.0, 2.0, 3.0] {
            let mu = Measure::beta(1.0, s).unwrap();
            let exact = moments(&mu, 1 << 12).unwrap();
            let quad = quadrature_moments(&mu, 1 << 12).unwrap();
            for n in 0..=(1 << 12) {
                assert!(rel(quad.get(n), exact.get(n)) < 1e-9, "s = {s}, n = {n}");
            }
        }
    }

    #[test]
    fn log_beta_against_adaptive_oracle() {
        let mu = Measure::log_beta(1.0, 2.0, 1).unwrap();
        let m = moments(&mu, 256).unwrap();
        for n in [0usize, 3, 64, 256] {
            let oracle = integrate_adaptive(
                |t| {
                    let u = 1.0 - t;
                    if u <= 0.0 {
                        return 0.0;
                    }
                    t.powi(n as i32) * u * (1.0 - u.ln())
                },
                0.0,
                1.0,
                1e-13,
                0.0,
            )
            .unwrap();
            assert!(rel(m.get(n), oracle) < 1e-8, "n = {n}: {} vs {oracle}", m.get(n));
        }
    }

    #[test]
    fn log_beta_with_gamma_zero_is_beta() {
        let a = moments(&Measure::log_beta(2.0, 0.5, 0).unwrap(), 2048).unwrap();
        let b = moments(&Measure::beta(2.0, 0.5).unwrap(), 2048).unwrap();
        for n in 0..=2048 {
            assert!(rel(a.get(n), b.get(n)) < 1e-9);
        }
    }

    #[test]
    fn generic_density_matches_closed_form() {
        let g = Measure::generic("(1-t)^2", |t| (1.0 - t) * (1.0 - t), true);
        let q = moments(&g, 1000).unwrap();
        let b = moments(&Measure::beta(1.0, 3.0).unwrap(), 1000).unwrap();
        for n in 0..=1000 {
            assert!(rel(q.get(n), b.get(n)) < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn generic_density_integrability_failures() {
        let flagged = Measure::generic("bad", |t| 1.0 / (1.0 - t), false);
        assert!(matches!(moments(&flagged, 10), Err(Error::Integrability(_))));
        let lying = Measure::generic("1/(1-t)", |t| 1.0 / (1.0 - t), true);
        assert!(matches!(moments(&lying, 10), Err(Error::Integrability(_))));
        let negative = Measure::generic("neg", |t| t - 0.5, true);
        assert!(matches!(moments(&negative, 10), Err(Error::Integrability(_))));
    }

    #[test]
    fn constructor_validation() {
        assert!(Measure::atom(1.0, 1.0).is_err());
        assert!(Measure::atom(-0.1, 1.0).is_err());
        assert!(Measure::atom(0.5, 0.0).is_err());
        assert!(Measure::atoms(vec![]).is_err());
        assert!(Measure::beta(0.0, 1.0).is_err());
        assert!(Measure::beta(1.0, -1.0).is_err());
        assert!(Measure::log_beta(1.0, 1.0, 99).is_err());
    }

    #[test]
    fn validation_examples() {
        let leb = moments(&Measure::lebesgue(), 200).unwrap();
        assert!(validate_moments(&leb, 4).unwrap().is_valid());
        let atom = moments(&Measure::atom(0.9, 1.0).unwrap(), 200).unwrap();
        assert!(validate_moments(&atom, 4).unwrap().is_valid());

        let mut vals = leb.values().to_vec();
        vals[5] += 0.1 * vals[0];
        let bad = MomentSequence::from_raw(vals, Measure::lebesgue());
        // Brute-force difference table for the expected first violation.
        let expected = brute_force_first_violation(bad.values(), 4);
        let got = validate_moments(&bad, 4).unwrap();
        assert_eq!(got, expected);
        assert!(!got.is_valid());
        assert!(validate_moments(&leb, 9).is_err());
    }

    fn brute_force_first_violation(v: &[f64], depth: usize) -> MomentValidation {
        let binom = |k: usize, j: usize| -> f64 {
            (0..j).fold(1.0, |acc, i| acc * (k - i) as f64 / (i + 1) as f64)
        };
        for k in 0..=depth {
            for n in 0..v.len().saturating_sub(k) {
                // (−1)^k Δ^k μ_n = Σ_j (−1)^j C(k, j) μ_{n+j}
                let d: f64 = (0..=k)
                    .map(|j| if j % 2 == 0 { 1.0 } else { -1.0 } * binom(k, j) * v[n + j])
                    .sum();
                if d < -MOMENT_SLACK {
                    return MomentValidation::Invalid { n, k };
                }
            }
        }
        MomentValidation::Valid
    }

    #[test]
    fn tail_fit_examples() {
        let b2 = moments(&Measure::beta(1.0, 2.0).unwrap(), 1 << 12).unwrap();
        let fit = tail_exponent_fit(&b2).unwrap();
        assert!((fit.s_hat - 2.0).abs() < 0.05, "{fit:?}");
        let leb = moments(&Measure::lebesgue(), 1 << 12).unwrap();
        let fit = tail_exponent_fit(&leb).unwrap();
        assert!((fit.s_hat - 1.0).abs() < 0.02);
        assert!(!fit.is_geometric());

        let geo = moments(&Measure::atom(0.5, 1.0).unwrap(), 1 << 10).unwrap();
        let fit = tail_exponent_fit(&geo).unwrap();
        assert!(fit.s_hat > 50.0 && fit.is_geometric(), "{fit:?}");

        let deep = moments(&Measure::atom(0.5, 1.0).unwrap(), 1 << 12).unwrap();
        assert!(tail_exponent_fit(&deep).is_err());
        assert!(tail_exponent_fit(&moments(&Measure::lebesgue(), 100).unwrap()).is_err());
    }

    #[test]
    fn atom_moments_are_additive() {
        let a = vec![Atom { t: 0.3, w: 1.0 }, Atom { t: 0.8, w: 0.5 }];
        let b = vec![Atom { t: 0.95, w: 2.0 }];
        let joint: Vec<Atom> = a.iter().chain(&b).copied().collect();
        let ma = moments(&Measure::atoms(a).unwrap(), 100).unwrap();
        let mb = moments(&Measure::atoms(b).unwrap(), 100).unwrap();
        let mj = moments(&Measure::atoms(joint).unwrap(), 100).unwrap();
        for n in 0..=100 {
            assert!(rel(mj.get(n), ma.get(n) + mb.get(n)) < 1e-14);
        }
    }
}
