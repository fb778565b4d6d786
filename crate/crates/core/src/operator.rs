//! The generalized Cesàro-like operator 𝒞_{μ,α}.
//!
//! The coefficient form (a discrete convolution with the Taylor weights of
//! (1 − z)^{−α}, scaled by the moments) is the computational definition on
//! truncated series. The integral form ∫ f(tz)(1 − tz)^{−α} dμ(t) and its
//! first two z-derivatives are evaluated by quadrature over the measure and
//! serve as an independent route to the same values.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::{moments, Discretization, Measure, MomentSequence};
use crate::series::PowerSeries;
use crate::specfun::gamma_ratios;

/// Largest |z| accepted by the integral forms.
pub const MAX_INTEGRAL_RADIUS: f64 = 0.95;

#[derive(Debug, Clone)]
pub struct OperatorSpec {
    alpha: f64,
    moments: MomentSequence,
    weights: Vec<f64>,
    nodes: Discretization,
}

impl OperatorSpec {
    /// Caches μ_0..μ_degree and the weights Γ(j+α)/(Γ(α) j!) for j ≤ degree.
    pub fn new(alpha: f64, measure: &Measure, degree: usize) -> Result<Self> {
        let m = moments(measure, degree)?;
        Self::from_moments(alpha, m)
    }

    pub fn from_moments(alpha: f64, moments: MomentSequence) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::domain("OperatorSpec", format!("alpha = {alpha} must be positive")));
        }
        let degree = moments.degree();
        let weights = gamma_ratios(degree, alpha)?;
        let nodes = moments.measure().discretize_for_degree(degree)?;
        Ok(Self {
            alpha,
            moments,
            weights,
            nodes,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn measure(&self) -> &Measure {
        self.moments.measure()
    }

    pub fn moments(&self) -> &MomentSequence {
        &self.moments
    }

    /// Largest input degree the cached moments support.
    pub fn degree(&self) -> usize {
        self.moments.degree()
    }

    /// b_n = μ_n Σ_{k≤n} w_{n−k} a_k for n ≤ deg f.
    pub fn apply_coefficient_form(&self, f: &PowerSeries) -> Result<PowerSeries> {
        let n_out = f.degree();
        if n_out > self.degree() {
            return Err(Error::Precondition(format!(
                "series degree {n_out} exceeds cached moment degree {}",
                self.degree()
            )));
        }
        let a = f.coeffs();
        let w = &self.weights;
        let mu = self.moments.values();
        let coeffs: Vec<Complex64> = (0..=n_out)
            .into_par_iter()
            .map(|n| {
                if mu[n] == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let inner = (0..=n).fold(Complex64::new(0.0, 0.0), |s, k| s + a[k] * w[n - k]);
                inner * mu[n]
            })
            .collect();
        PowerSeries::new(coeffs)
    }

    fn check_radius(&self, z: Complex64, func: &'static str) -> Result<()> {
        if z.norm() <= MAX_INTEGRAL_RADIUS {
            Ok(())
        } else {
            Err(Error::domain(
                func,
                format!("|z| = {} exceeds {MAX_INTEGRAL_RADIUS}", z.norm()),
            ))
        }
    }

    /// 1 − tz written through u = 1 − t to keep precision near t = 1.
    fn one_minus_tz(z: Complex64, u: f64) -> Complex64 {
        Complex64::new(1.0, 0.0) - z + z * u
    }

    /// ∫_0^1 f(tz) (1 − tz)^{−α} dμ(t).
    pub fn apply_integral_form(&self, f: &PowerSeries, z: Complex64) -> Result<Complex64> {
        self.check_radius(z, "apply_integral_form")?;
        let alpha = self.alpha;
        Ok(self.nodes.integrate(|t, u| {
            let q = Self::one_minus_tz(z, u);
            f.horner(z * t) * (q.ln() * -alpha).exp()
        }))
    }

    /// ∫ t f′(tz)(1 − tz)^{−α} dμ + ∫ α t f(tz)(1 − tz)^{−α−1} dμ.
    pub fn derivative_integral_form(&self, f: &PowerSeries, z: Complex64) -> Result<Complex64> {
        self.check_radius(z, "derivative_integral_form")?;
        let alpha = self.alpha;
        let df = f.derivative(1)?;
        Ok(self.nodes.integrate(|t, u| {
            let w = z * t;
            let lq = Self::one_minus_tz(z, u).ln();
            let p0 = (lq * -alpha).exp();
            let p1 = (lq * -(alpha + 1.0)).exp();
            (df.horner(w) * p0 + f.horner(w) * p1 * alpha) * t
        }))
    }

    /// ∫ t² (f″(tz)/(1−tz)^α + 2α f′(tz)/(1−tz)^{α+1}
    ///        + α(α+1) f(tz)/(1−tz)^{α+2}) dμ(t).
    pub fn second_derivative_integral_form(
        &self,
        f: &PowerSeries,
        z: Complex64,
    ) -> Result<Complex64> {
        self.check_radius(z, "second_derivative_integral_form")?;
        let alpha = self.alpha;
        let df = f.derivative(1)?;
        let ddf = f.derivative(2)?;
        Ok(self.nodes.integrate(|t, u| {
            let w = z * t;
            let lq = Self::one_minus_tz(z, u).ln();
            let p0 = (lq * -alpha).exp();
            let p1 = (lq * -(alpha + 1.0)).exp();
            let p2 = (lq * -(alpha + 2.0)).exp();
            (ddf.horner(w) * p0
                + df.horner(w) * p1 * (2.0 * alpha)
                + f.horner(w) * p2 * (alpha * (alpha + 1.0)))
                * (t * t)
        }))
    }
}

/// S(n, α) = Σ_{k=1}^{n} Γ(n−k+α)/(Γ(α)(n−k)! k).
pub fn inner_sum(n: usize, alpha: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Precondition("inner_sum needs n >= 1".into()));
    }
    let w = gamma_ratios(n - 1, alpha)?;
    Ok((1..=n).map(|k| w[n - k] / k as f64).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::log_series;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn constant_under_lebesgue_alpha_one() {
        let op = OperatorSpec::new(1.0, &Measure::lebesgue(), 100).unwrap();
        let one = PowerSeries::constant(c(1.0)).with_degree(100);
        let img = op.apply_coefficient_form(&one).unwrap();
        for n in 0..=100 {
            assert!((img.coeff(n).re - 1.0 / (n as f64 + 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn atom_at_zero_keeps_constant_term() {
        let op = OperatorSpec::new(1.7, &Measure::atom(0.0, 1.0).unwrap(), 10).unwrap();
        let f = PowerSeries::from_real(&[3.0, 1.0, -2.0, 5.0]).unwrap();
        let img = op.apply_coefficient_form(&f).unwrap();
        assert_eq!(img.coeffs(), &[c(3.0), c(0.0), c(0.0), c(0.0)]);
    }

    #[test]
    fn lebesgue_alpha_two() {
        let op = OperatorSpec::new(2.0, &Measure::lebesgue(), 200).unwrap();
        // f = 1: b_n = μ_n w_n = (n + 1)/(n + 1).
        let img = op
            .apply_coefficient_form(&PowerSeries::constant(c(1.0)).with_degree(200))
            .unwrap();
        assert!(img.coeffs().iter().all(|b| (b.re - 1.0).abs() < 1e-13));
        // f = 1/(1 − z): b_n = μ_n Σ_{j≤n} (j + 1) = (n + 2)/2, brute-force summed.
        let ones = PowerSeries::from_real(&[1.0; 201]).unwrap();
        let img = op.apply_coefficient_form(&ones).unwrap();
        for n in 0..=200usize {
            let brute: f64 = (0..=n).map(|j| j as f64 + 1.0).sum::<f64>() / (n as f64 + 1.0);
            assert!((img.coeff(n).re - brute).abs() < 1e-12 * brute);
            assert!((brute - (n as f64 + 2.0) / 2.0).abs() < 1e-12 * brute);
        }
    }

    #[test]
    fn degree_precondition() {
        let op = OperatorSpec::new(1.0, &Measure::lebesgue(), 8).unwrap();
        assert!(op.apply_coefficient_form(&PowerSeries::monomial(9)).is_err());
        assert!(OperatorSpec::new(0.0, &Measure::lebesgue(), 8).is_err());
    }

    #[test]
    fn integral_form_examples() {
        let t0 = 0.6;
        let op = OperatorSpec::new(1.5, &Measure::atom(t0, 1.0).unwrap(), 10).unwrap();
        let one = PowerSeries::constant(c(1.0));
        let z = Complex64::from_polar(0.8, 1.1);
        let got = op.apply_integral_form(&one, z).unwrap();
        let expect = (c(1.0) - z * t0).powf(-1.5);
        assert!((got - expect).norm() < 1e-14);

        let op = OperatorSpec::new(0.5, &Measure::beta(2.0, 3.0).unwrap(), 10).unwrap();
        let f = PowerSeries::from_real(&[0.7, 1.0, 2.0]).unwrap();
        let at0 = op.apply_integral_form(&f, c(0.0)).unwrap();
        let mu0 = op.moments().get(0);
        assert!((at0 - c(mu0 * 0.7)).norm() < 1e-13);
        assert!(op.apply_integral_form(&f, c(0.96)).is_err());
    }

    #[test]
    fn derivative_form_at_origin() {
        let alpha = 1.3;
        let op = OperatorSpec::new(alpha, &Measure::beta(1.0, 1.5).unwrap(), 20).unwrap();
        let f = PowerSeries::from_real(&[0.4, -1.2, 0.9, 2.0]).unwrap();
        let d = op.derivative_integral_form(&f, c(0.0)).unwrap();
        let mu = op.moments().values();
        let expect = mu[1] * (-1.2 + alpha * 0.4);
        assert!((d - c(expect)).norm() < 1e-12);

        let dd = op.second_derivative_integral_form(&f, c(0.0)).unwrap();
        let expect2 = 2.0 * mu[2] * (0.9 + alpha * -1.2 + alpha * (alpha + 1.0) * 0.4 / 2.0);
        assert!((dd - c(expect2)).norm() < 1e-12);
    }

    #[test]
    fn derivative_form_matches_central_difference() {
        let op = OperatorSpec::new(1.0, &Measure::atom(0.5, 1.0).unwrap(), 64).unwrap();
        let g = log_series(64).unwrap();
        let z = c(0.3);
        let h = 1e-4;
        let fd = (op.apply_integral_form(&g, z + h).unwrap()
            - op.apply_integral_form(&g, z - h).unwrap())
            / (2.0 * h);
        let d = op.derivative_integral_form(&g, z).unwrap();
        assert!((d - fd).norm() < 1e-5);
    }

    #[test]
    fn constant_function_derivative_reduces() {
        let t0 = 0.7;
        let alpha = 2.5;
        let op = OperatorSpec::new(alpha, &Measure::atom(t0, 1.0).unwrap(), 5).unwrap();
        let f = PowerSeries::constant(c(2.0));
        let z = Complex64::from_polar(0.9, -0.4);
        let q = c(1.0) - z * t0;
        let d = op.derivative_integral_form(&f, z).unwrap();
        assert!((d - q.powf(-alpha - 1.0) * (alpha * t0 * 2.0)).norm() < 1e-13);
        let dd = op.second_derivative_integral_form(&f, z).unwrap();
        let expect = q.powf(-alpha - 2.0) * (alpha * (alpha + 1.0) * t0 * t0 * 2.0);
        assert!((dd - expect).norm() < 1e-12 * expect.norm());
    }

    #[test]
    fn inner_sum_examples() {
        for &a in &[0.5, 1.0, 2.0] {
            assert!((inner_sum(1, a).unwrap() - 1.0).abs() < 1e-15);
        }
        let mut h = 0.0;
        for n in 1..=500 {
            h += 1.0 / n as f64;
            assert!((inner_sum(n, 1.0).unwrap() - h).abs() < 1e-12);
        }
        assert!(inner_sum(0, 1.0).is_err());
    }
}
