//! Norm estimators for analytic function spaces on the unit disk.
//!
//! Area integrals use the normalized measure dA = dx dy / π, so in polar
//! coordinates ∫_𝔻 g dA = ∫_0^1 2r · (1/2π ∫ g(re^{iθ}) dθ) dr. Circle means
//! come from an FFT of the scaled coefficients (exact trapezoid sampling);
//! radial integrals use Gauss panels graded geometrically toward r = 1.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::GradedRule;
use crate::series::PowerSeries;

/// A norm estimate with the discretization that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub value: f64,
    pub radial_points: usize,
    pub angular_points: usize,
    /// |value(finest grid) − value(next-finest grid)|.
    pub richardson_delta: f64,
}

/// Radii in [0, r_max] with positive quadrature weights, r_max < 1.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    radii: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialGrid {
    /// Gauss-Legendre nodes on the u = 1 − r panels [2^{-k-1}, 2^{-k}],
    /// k < levels, sorted by increasing radius.
    pub fn graded(levels: u32, points_per_panel: usize) -> Self {
        let rule = GradedRule::new(levels, points_per_panel);
        let mut pts: Vec<(f64, f64)> = rule.points.iter().map(|&(u, w)| (1.0 - u, w)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self {
            radii: pts.iter().map(|p| p.0).collect(),
            weights: pts.iter().map(|p| p.1).collect(),
        }
    }

    /// r_j = 1 − 2^{−j/per_octave}, j = 0..=per_octave·octaves, with trapezoid
    /// weights. Used for sup norms, where only the points matter.
    pub fn geometric(per_octave: usize, octaves: usize) -> Self {
        let n = per_octave * octaves;
        let radii: Vec<f64> = (0..=n)
            .map(|j| 1.0 - (-(j as f64) / per_octave as f64).exp2())
            .collect();
        let weights = (0..=n)
            .map(|j| {
                let lo = if j == 0 { radii[0] } else { radii[j - 1] };
                let hi = if j == n { radii[n] } else { radii[j + 1] };
                (0.5 * (hi - lo)).max(f64::MIN_POSITIVE)
            })
            .collect();
        Self { radii, weights }
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn r_max(&self) -> f64 {
        *self.radii.last().unwrap_or(&0.0)
    }
}

/// Evaluates a series at the M-th roots of unity scaled by r.
struct CircleSampler {
    planner: FftPlanner<f64>,
}

impl CircleSampler {
    fn new() -> Self {
        Self {
            planner: FftPlanner::new(),
        }
    }

    /// f(r e^{2πij/m}) for j = 0..m.
    fn sample(&mut self, coeffs: &[Complex64], r: f64, m: usize) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        let mut rn = 1.0;
        for (n, &a) in coeffs.iter().enumerate() {
            buf[n % m] += a * rn;
            rn *= r;
            if rn < 1e-300 {
                break;
            }
        }
        let fft = self.planner.plan_fft_inverse(m);
        fft.process(&mut buf);
        buf
    }

    /// (1/M Σ |f|^p)^{1/p}, the trapezoid estimate of M_p(r, f).
    fn mean(&mut self, coeffs: &[Complex64], r: f64, m: usize, p: f64) -> f64 {
        if r == 0.0 {
            return coeffs[0].norm();
        }
        let vals = self.sample(coeffs, r, m);
        power_mean(&vals, p)
    }
}

fn power_mean(vals: &[Complex64], p: f64) -> f64 {
    let m = vals.len() as f64;
    if p == 2.0 {
        (vals.iter().map(|v| v.norm_sqr()).sum::<f64>() / m).sqrt()
    } else if p == 1.0 {
        vals.iter().map(|v| v.norm()).sum::<f64>() / m
    } else {
        (vals.iter().map(|v| v.norm().powf(p)).sum::<f64>() / m).powf(1.0 / p)
    }
}

/// Number of angles for a degree-N series on the circle of radius r.
pub fn angles_for(degree: usize, r: f64) -> usize {
    let want = (8.0 * degree as f64 * r).ceil() as usize;
    want.max(256).next_power_of_two()
}

/// M_p(r, f) = (1/2π ∫ |f(re^{iθ})|^p dθ)^{1/p}.
pub fn integral_mean(f: &PowerSeries, r: f64, p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain("integral_mean", format!("r = {r} must lie in [0, 1)")));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::domain("integral_mean", format!("p = {p} must be >= 1")));
    }
    let m = angles_for(f.degree(), r);
    Ok(CircleSampler::new().mean(f.coeffs(), r, m, p))
}

/// Panels toward r = 1 needed to resolve a degree-N polynomial.
fn radial_levels(degree: usize) -> u32 {
    let lg = usize::BITS - degree.max(1).leading_zeros();
    lg + 20
}

/// ∫_0^1 (1 − r)^{expo} · 2r · M_p(r, g)^p dr for a polynomial g, with the
/// piece (1 − δ, 1) taken as M_p(1, g)^p · 2δ^{expo+1}/(expo+1).
fn weighted_area_integral(
    g: &PowerSeries,
    p: f64,
    expo: f64,
    points: usize,
    angle_factor: usize,
) -> (f64, usize, usize) {
    let degree = g.degree();
    let levels = radial_levels(degree);
    let rule = GradedRule::new(levels, points);
    let mut sampler = CircleSampler::new();
    let coeffs = g.coeffs();
    let mut sum = 0.0;
    let mut max_angles = 0;
    for &(u, w) in &rule.points {
        let r = 1.0 - u;
        let m = angles_for(degree, r) * angle_factor;
        max_angles = max_angles.max(m);
        let mp = sampler.mean(coeffs, r, m, p);
        sum += w * u.powf(expo) * 2.0 * r * mp.powf(p);
    }
    let m1 = angles_for(degree, 1.0) * angle_factor;
    let edge = sampler.mean(coeffs, 1.0, m1, p).powf(p);
    let delta = rule.delta();
    sum += edge * 2.0 * delta.powf(expo + 1.0) / (expo + 1.0);
    (sum, rule.points.len(), max_angles)
}

fn area_report(value_at: impl Fn(usize, usize) -> (f64, usize, usize)) -> NormReport {
    let (coarse, _, _) = value_at(12, 1);
    let (fine, radial_points, angular_points) = value_at(24, 2);
    NormReport {
        value: fine,
        radial_points,
        angular_points,
        richardson_delta: (fine - coarse).abs(),
    }
}

/// ‖f‖_{B_p} = |f(0)| + (∫_𝔻 |f′|^p (1 − |z|)^{p−2} dA)^{1/p}, p > 1.
pub fn besov_norm(f: &PowerSeries, p: f64) -> Result<NormReport> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::domain("besov_norm", format!("p = {p} must exceed 1")));
    }
    let df = f.derivative(1)?;
    let a0 = f.coeff(0).norm();
    Ok(area_report(|points, af| {
        let (integral, rp, ap) = weighted_area_integral(&df, p, p - 2.0, points, af);
        (a0 + integral.max(0.0).powf(1.0 / p), rp, ap)
    }))
}

/// |f(0)| + |f′(0)| + ∫_𝔻 |f″| dA.
pub fn besov1_norm(f: &PowerSeries) -> Result<NormReport> {
    if f.degree() < 2 {
        return Err(Error::Precondition(
            "besov1_norm needs a series of degree >= 2".into(),
        ));
    }
    let ddf = f.derivative(2)?;
    let head = f.coeff(0).norm() + f.coeff(1).norm();
    Ok(area_report(|points, af| {
        let (integral, rp, ap) = weighted_area_integral(&ddf, 1.0, 0.0, points, af);
        (head + integral, rp, ap)
    }))
}

/// Which norm of the target space B_p to use: B_1 for p = 1, B_p otherwise.
pub fn target_norm(f: &PowerSeries, p: f64) -> Result<NormReport> {
    if p == 1.0 {
        besov1_norm(f)
    } else {
        besov_norm(f, p)
    }
}

const SUP_REFINEMENTS: usize = 5;
const SUP_REL_TOL: f64 = 1e-3;

/// Octaves of (1 − r) scanned by the sup norms.
fn sup_octaves(degree: usize) -> usize {
    (usize::BITS - degree.max(1).leading_zeros()) as usize + 6
}

/// ‖f‖_ℬ = |f(0)| + sup (1 − |z|²)|f′(z)|.
///
/// The sup is taken over a grid geometric in 1 − r with FFT angles, then
/// polished by a pattern search around the best grid point; the grid is
/// doubled until two passes agree to 1e-3 relative.
pub fn bloch_norm(f: &PowerSeries) -> Result<NormReport> {
    let df = f.derivative(1)?;
    let a0 = f.coeff(0).norm();
    let degree = df.degree();
    let mut sampler = CircleSampler::new();
    let eval = |r: f64, theta: f64| (1.0 - r * r) * df.horner(Complex64::from_polar(r, theta)).norm();

    let mut prev: Option<f64> = None;
    let mut report = None;
    for level in 0..SUP_REFINEMENTS {
        let per_octave = 4 << level;
        let grid = RadialGrid::geometric(per_octave, sup_octaves(degree));
        let mut best = (eval(0.0, 0.0), 0.0, 0.0);
        let mut max_angles = 0;
        for &r in grid.radii() {
            let m = angles_for(degree, r) << level;
            max_angles = max_angles.max(m);
            let vals = sampler.sample(df.coeffs(), r, m);
            for (j, v) in vals.iter().enumerate() {
                let g = (1.0 - r * r) * v.norm();
                if g > best.0 {
                    best = (g, r, 2.0 * std::f64::consts::PI * j as f64 / m as f64);
                }
            }
        }
        let step_u = (1.0 - best.1).max(1e-300) * (1.0 - (-1.0 / per_octave as f64).exp2());
        let step_t = 2.0 * std::f64::consts::PI / max_angles as f64;
        let sup = polish_max(&eval, best, step_u, step_t);
        let value = a0 + sup;
        let delta = prev.map_or(f64::INFINITY, |p| (value - p).abs());
        report = Some(NormReport {
            value,
            radial_points: grid.len(),
            angular_points: max_angles,
            richardson_delta: delta,
        });
        if delta <= SUP_REL_TOL * value.max(f64::MIN_POSITIVE) {
            break;
        }
        prev = Some(value);
    }
    Ok(report.expect("at least one refinement pass"))
}

/// Coordinate pattern search for a local maximum of g(r, θ), 0 ≤ r < 1.
fn polish_max(
    g: &impl Fn(f64, f64) -> f64,
    start: (f64, f64, f64),
    step_u: f64,
    step_t: f64,
) -> f64 {
    let (mut best, mut r, mut t) = start;
    let (mut du, mut dt) = (step_u, step_t);
    for _ in 0..200 {
        let mut moved = false;
        for (cr, ct) in [(r + du, t), (r - du, t), (r, t + dt), (r, t - dt)] {
            if !(0.0..1.0).contains(&cr) {
                continue;
            }
            let v = g(cr, ct);
            if v > best {
                best = v;
                r = cr;
                t = ct;
                moved = true;
            }
        }
        if !moved {
            du *= 0.5;
            dt *= 0.5;
            if du < 1e-15 * (1.0 - r).max(1e-300) && dt < 1e-13 {
                break;
            }
        }
    }
    best
}

/// Golden-section refinement of a unimodal maximum of h on [lo, hi].
fn golden_max(h: &mut impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = h(x1);
    let mut f2 = h(x2);
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = h(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = h(x1);
        }
    }
    f1.max(f2)
}

/// ‖f‖_{Λ^s_{1/s}} = |f(0)| + sup_r (1 − r)^{1−1/s} M_s(r, f′), s > 1.
pub fn mean_lipschitz_norm(f: &PowerSeries, s: f64) -> Result<NormReport> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::domain("mean_lipschitz_norm", format!("s = {s} must exceed 1")));
    }
    let df = f.derivative(1)?;
    let a0 = f.coeff(0).norm();
    let degree = df.degree();
    let expo = 1.0 - 1.0 / s;
    let mut sampler = CircleSampler::new();

    let mut prev: Option<f64> = None;
    let mut report = None;
    for level in 0..SUP_REFINEMENTS {
        let per_octave = 4 << level;
        let grid = RadialGrid::geometric(per_octave, sup_octaves(degree));
        let mut h = |r: f64| {
            let m = angles_for(degree, r) << level;
            (1.0 - r).powf(expo) * sampler.mean(df.coeffs(), r, m, s)
        };
        let vals: Vec<f64> = grid.radii().iter().map(|&r| h(r)).collect();
        let (jbest, _) = vals
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |acc, (j, &v)| if v > acc.1 { (j, v) } else { acc });
        let lo = grid.radii()[jbest.saturating_sub(1)];
        let hi = grid.radii()[(jbest + 1).min(grid.len() - 1)];
        let sup = golden_max(&mut h, lo, hi, 40).max(vals[jbest]);
        let value = a0 + sup;
        let delta = prev.map_or(f64::INFINITY, |p| (value - p).abs());
        report = Some(NormReport {
            value,
            radial_points: grid.len(),
            angular_points: angles_for(degree, grid.r_max()) << level,
            richardson_delta: delta,
        });
        if delta <= SUP_REL_TOL * value.max(f64::MIN_POSITIVE) {
            break;
        }
        prev = Some(value);
    }
    Ok(report.expect("at least one refinement pass"))
}

/// Σ_{n=1}^N n^{p−1} a_n^p for nonnegative coefficients non-increasing from
/// n = 1 on.
pub fn coefficient_besov_sum(f: &PowerSeries, p: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::domain("coefficient_besov_sum", format!("p = {p} must exceed 1")));
    }
    let a = f.real_coeffs()?;
    for (n, w) in a.windows(2).enumerate().skip(1) {
        if w[1] > w[0] * (1.0 + 1e-12) + 1e-300 {
            return Err(Error::Precondition(format!(
                "coefficients increase at n = {}",
                n + 1
            )));
        }
    }
    if let Some(n) = a.iter().position(|&x| x < 0.0) {
        return Err(Error::Precondition(format!("coefficient {n} is negative")));
    }
    Ok(a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, &x)| (n as f64).powf(p - 1.0) * x.powf(p))
        .sum())
}

/// ⟨F, G⟩ = ∫_𝔻 F′ conj(G′) dA = Σ_{n≥1} n a_n conj(b_n).
pub fn besov_pairing(f: &PowerSeries, g: &PowerSeries) -> Result<Complex64> {
    if f.degree() < 1 || g.degree() < 1 {
        return Err(Error::Precondition("besov_pairing needs degree >= 1".into()));
    }
    let n = f.degree().min(g.degree());
    Ok((1..=n)
        .map(|k| f.coeff(k) * g.coeff(k).conj() * k as f64)
        .fold(Complex64::new(0.0, 0.0), |s, t| s + t))
}

/// The two sides of the dyadic-block equivalence for a nonnegative sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DyadicComparison {
    /// ∫_0^1 (1 − r)^{pβ−1} (Σ λ_n r^n)^p dr.
    pub lhs: f64,
    /// Σ_n 2^{−npβ} (Σ_{k∈I_n} λ_k)^p, I_0 = {0}, I_n = [2^{n−1}, 2^n).
    pub rhs: f64,
}

impl DyadicComparison {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

pub fn dyadic_block_equivalence(lambda: &[f64], beta: f64, p: f64) -> Result<DyadicComparison> {
    if lambda.is_empty() {
        return Err(Error::Input("empty sequence".into()));
    }
    if let Some(n) = lambda.iter().position(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::Precondition(format!("lambda[{n}] must be nonnegative")));
    }
    if !(beta > 0.0 && p > 0.0) {
        return Err(Error::domain("dyadic_block_equivalence", "beta and p must be positive"));
    }
    let e = p * beta;
    let series = |r: f64| lambda.iter().rev().fold(0.0, |acc, &l| acc * r + l);
    let rule = GradedRule::new(radial_levels(lambda.len()) + 10, 32);
    let mut lhs = rule.integrate(|u| u.powf(e - 1.0) * series(1.0 - u).powf(p));
    let delta = rule.delta();
    lhs += series(1.0).powf(p) * delta.powf(e) / e;

    let mut rhs = lambda[0].powf(p);
    let mut n = 1u32;
    loop {
        let lo = 1usize << (n - 1);
        if lo >= lambda.len() {
            break;
        }
        let hi = (1usize << n).min(lambda.len());
        let block: f64 = lambda[lo..hi].iter().sum();
        rhs += (-(n as f64) * e).exp2() * block.powf(p);
        n += 1;
    }
    Ok(DyadicComparison { lhs, rhs })
}

/// ∫_0^{2π} dθ / |1 − z e^{−iθ}|^α by the periodic trapezoid rule, doubling
/// the node count until successive estimates agree to 1e-14.
pub fn circle_kernel_integral(z: Complex64, alpha: f64) -> Result<f64> {
    if !(z.norm() <= 0.99) {
        return Err(Error::domain(
            "circle_kernel_integral",
            format!("|z| = {} exceeds 0.99", z.norm()),
        ));
    }
    if !alpha.is_finite() {
        return Err(Error::domain("circle_kernel_integral", "alpha must be finite"));
    }
    let trap = |m: usize| {
        let h = 2.0 * std::f64::consts::PI / m as f64;
        h * (0..m)
            .map(|j| {
                let e = Complex64::from_polar(1.0, -(j as f64) * h);
                (Complex64::new(1.0, 0.0) - z * e).norm().powf(-alpha)
            })
            .sum::<f64>()
    };
    let mut m = 64;
    let mut prev = trap(m);
    while m < 1 << 22 {
        m *= 2;
        let next = trap(m);
        if (next - prev).abs() <= 1e-14 * next.abs() {
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{binomial_series, log_series};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn integral_mean_examples() {
        let f = PowerSeries::monomial(7);
        for &p in &[1.0, 2.0, 3.5] {
            assert!((integral_mean(&f, 0.8, p).unwrap() - 0.8f64.powi(7)).abs() < 1e-14);
        }
        let n = 200;
        let geo = binomial_series(1.0, n).unwrap();
        let r: f64 = 0.9;
        let exact = ((1.0 - r.powi(2 * n as i32 + 2)) / (1.0 - r * r)).sqrt();
        assert!((integral_mean(&geo, r, 2.0).unwrap() - exact).abs() < 1e-12 * exact);
        assert!(integral_mean(&geo, 1.0, 2.0).is_err());
        assert!(integral_mean(&geo, 0.5, 0.5).is_err());
    }

    #[test]
    fn integral_mean_p1_against_kernel() {
        // M_1(r, 1/(1 − z)) = (1/2π) ∫ dθ / |1 − r e^{iθ}|.
        let r = 0.9;
        let f = binomial_series(1.0, 1 << 10).unwrap();
        let m1 = integral_mean(&f, r, 1.0).unwrap();
        let k = circle_kernel_integral(c(r), 1.0).unwrap() / (2.0 * std::f64::consts::PI);
        assert!((m1 - k).abs() < 1e-10 * k);
    }

    #[test]
    fn bloch_examples() {
        let z = PowerSeries::monomial(1);
        assert!((bloch_norm(&z).unwrap().value - 1.0).abs() < 1e-12);
        let g = log_series(1 << 12).unwrap();
        let b = bloch_norm(&g).unwrap();
        assert!((b.value - 2.0).abs() < 1e-2, "{b:?}");
        let scaled = bloch_norm(&g.scale(Complex64::new(0.0, -3.0))).unwrap();
        assert!((scaled.value - 3.0 * b.value).abs() < 1e-9 * scaled.value);
    }

    #[test]
    fn besov_examples() {
        let z = PowerSeries::monomial(1);
        assert!((besov_norm(&z, 2.0).unwrap().value - 1.0).abs() < 1e-12);
        let z2 = PowerSeries::monomial(2);
        assert!((besov_norm(&z2, 2.0).unwrap().value - 2f64.sqrt()).abs() < 1e-12);
        assert!(besov_norm(&z2, 1.0).is_err());
    }

    #[test]
    fn besov_two_matches_dirichlet_sum() {
        let f = PowerSeries::new(
            (0..=40)
                .map(|n| Complex64::new((n as f64 * 0.7).sin(), (n as f64).cos() / (n as f64 + 1.0)))
                .collect(),
        )
        .unwrap();
        let dirichlet: f64 = (1..=40).map(|n| n as f64 * f.coeff(n).norm_sqr()).sum();
        let rep = besov_norm(&f, 2.0).unwrap();
        let got = (rep.value - f.coeff(0).norm()).powi(2);
        assert!(((got - dirichlet) / dirichlet).abs() < 1e-10);
    }

    #[test]
    fn besov_log_series_grows_like_sqrt_log() {
        let mut prev = 0.0;
        for k in [6u32, 8, 10] {
            let n = 1usize << k;
            let v = besov_norm(&log_series(n).unwrap(), 2.0).unwrap().value;
            let h: f64 = (1..=n).map(|j| 1.0 / j as f64).sum();
            assert!((v * v - h).abs() < 1e-8 * h);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn besov1_examples() {
        let z2 = PowerSeries::monomial(2);
        assert!((besov1_norm(&z2).unwrap().value - 2.0).abs() < 1e-12);
        for n in [3usize, 10, 50] {
            let v = besov1_norm(&PowerSeries::monomial(n)).unwrap().value;
            assert!((v - 2.0 * (n as f64 - 1.0)).abs() < 1e-9 * v, "n = {n}: {v}");
        }
        assert!(besov1_norm(&PowerSeries::monomial(1)).is_err());
    }

    #[test]
    fn besov1_truncation_behaviour() {
        // (1 − z)^{1/2} lies in B_1; (1 − z)^{−1/2} does not and grows like √N.
        let root = |n: usize| {
            let mut c = 1.0;
            let coeffs: Vec<f64> = (0..=n)
                .map(|k| {
                    if k > 0 {
                        c *= (k as f64 - 1.5) / k as f64;
                    }
                    c
                })
                .collect();
            besov1_norm(&PowerSeries::from_real(&coeffs).unwrap()).unwrap().value
        };
        let (a, b) = (root(1 << 10), root(1 << 11));
        assert!(((b - a) / a).abs() < 0.01, "{a} {b}");
        let inv = |n| besov1_norm(&binomial_series(0.5, n).unwrap()).unwrap().value;
        let (a, b) = (inv(1 << 10), inv(1 << 11));
        assert!(b / a > 1.3, "{a} {b}");
    }

    #[test]
    fn mean_lipschitz_examples() {
        let z = PowerSeries::monomial(1);
        assert!((mean_lipschitz_norm(&z, 2.0).unwrap().value - 1.0).abs() < 1e-9);
        let g = log_series(1 << 10).unwrap();
        let v = mean_lipschitz_norm(&g, 2.0).unwrap().value;
        assert!(v > 0.5 && v <= 1.0 + 1e-9, "{v}");
        let w = mean_lipschitz_norm(&g.scale(c(-2.5)), 2.0).unwrap().value;
        assert!((w - 2.5 * v).abs() < 1e-9 * w);
        assert!(mean_lipschitz_norm(&g, 1.0).is_err());
    }

    #[test]
    fn coefficient_sum_examples() {
        let n = 1 << 10;
        let g = log_series(n).unwrap();
        let h: f64 = (1..=n).map(|j| 1.0 / j as f64).sum();
        assert!((coefficient_besov_sum(&g, 2.0).unwrap() - h).abs() < 1e-12 * h);

        let geo: Vec<f64> = (0..60).map(|k| 0.5f64.powi(k)).collect();
        let f = PowerSeries::from_real(&geo).unwrap();
        let brute: f64 = (1..60).map(|k| (k as f64).powf(1.5) * geo[k].powf(2.5)).sum();
        assert!((coefficient_besov_sum(&f, 2.5).unwrap() - brute).abs() < 1e-14);

        let up = PowerSeries::from_real(&[1.0, 0.5, 0.7]).unwrap();
        assert!(coefficient_besov_sum(&up, 2.0).is_err());
        let neg = PowerSeries::from_real(&[1.0, -0.5, -0.7]).unwrap();
        assert!(coefficient_besov_sum(&neg, 2.0).is_err());
    }

    #[test]
    fn pairing_examples() {
        let z = PowerSeries::monomial(1);
        assert_eq!(besov_pairing(&z, &z).unwrap(), c(1.0));
        let z2 = PowerSeries::monomial(2);
        let z3 = PowerSeries::monomial(3);
        assert_eq!(besov_pairing(&z2, &z3).unwrap(), c(0.0));
        let g = log_series(100).unwrap();
        let h: f64 = (1..=100).map(|j| 1.0 / j as f64).sum();
        assert!((besov_pairing(&g, &g).unwrap().re - h).abs() < 1e-12);
    }

    #[test]
    fn pairing_matches_area_quadrature() {
        let f = PowerSeries::new(
            (0..12).map(|n| Complex64::new(1.0 / (n as f64 + 1.0), 0.3 * n as f64)).collect(),
        )
        .unwrap();
        let g = PowerSeries::new((0..9).map(|n| Complex64::new((n as f64).sin(), 1.0)).collect())
            .unwrap();
        let (df, dg) = (f.derivative(1).unwrap(), g.derivative(1).unwrap());
        // ∫_𝔻 F′ conj(G′) dA by Gauss in r and trapezoid in θ.
        let gl = crate::quad::GaussLegendre::new(24);
        let m = 64;
        let quad: Complex64 = gl
            .mapped(0.0, 1.0)
            .map(|(r, w)| {
                let mean = (0..m)
                    .map(|j| {
                        let z = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / m as f64);
                        df.horner(z) * dg.horner(z).conj()
                    })
                    .fold(c(0.0), |a, b| a + b)
                    / m as f64;
                mean * (2.0 * r * w)
            })
            .fold(c(0.0), |a, b| a + b);
        let exact = besov_pairing(&f, &g).unwrap();
        assert!((quad - exact).norm() < 1e-12 * exact.norm());
    }

    #[test]
    fn dyadic_examples() {
        let mut delta = vec![0.0; 64];
        delta[0] = 1.0;
        for &(beta, p) in &[(0.5, 1.0), (1.0, 2.0), (2.0, 0.5)] {
            let d = dyadic_block_equivalence(&delta, beta, p).unwrap();
            assert!((d.lhs - 1.0 / (p * beta)).abs() < 1e-12);
            assert!((d.rhs - 1.0).abs() < 1e-15);
        }
        // λ ≡ 1, β = p = 1: lhs = H_{N+1}, rhs = 1 + number of blocks/2.
        let n = 1usize << 10;
        let ones = vec![1.0; n];
        let d = dyadic_block_equivalence(&ones, 1.0, 1.0).unwrap();
        let h: f64 = (1..=n).map(|j| 1.0 / j as f64).sum();
        assert!((d.lhs - h).abs() < 1e-10 * h, "{} vs {h}", d.lhs);
        assert!((d.rhs - (1.0 + 10.0 / 2.0)).abs() < 1e-12);
        assert!(dyadic_block_equivalence(&[1.0, -1.0], 1.0, 1.0).is_err());
    }

    #[test]
    fn circle_kernel_poisson_identity() {
        for &r in &[0.3, 0.5, 0.9, 0.99] {
            let z = Complex64::from_polar(r, 0.7);
            let got = circle_kernel_integral(z, 2.0).unwrap();
            let exact = 2.0 * std::f64::consts::PI / (1.0 - r * r);
            assert!((got - exact).abs() < 1e-9 * exact);
        }
        assert!(circle_kernel_integral(c(0.995), 2.0).is_err());
    }
}
