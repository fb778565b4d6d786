//! Gauss-Legendre rules, an adaptive bisection integrator, and geometrically
//! graded panels for integrands that are singular at one endpoint.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// n-point rule on [-1, 1], nodes by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Shared rule of a given size.
    pub fn cached(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("quadrature cache poisoned");
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(GaussLegendre::new(n)))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const ADAPTIVE_POINTS: usize = 15;
const ADAPTIVE_MAX_DEPTH: u32 = 48;

/// Adaptive Gauss-Legendre quadrature by interval bisection.
///
/// Stops when the 15-point estimate on an interval agrees with the sum over
/// its halves to within the interval's share of `max(abs_tol, rel_tol·|I|)`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integrate_adaptive", "infinite interval"));
    }
    if a == b {
        return Ok(0.0);
    }
    let rule = GaussLegendre::cached(ADAPTIVE_POINTS);
    let rough = rule.integrate(a, b, &f);
    let tol = abs_tol.max(rel_tol * rough.abs()).max(f64::MIN_POSITIVE);
    let mut stack = vec![(a, b, rough, tol, 0u32)];
    let mut total = 0.0;
    while let Some((lo, hi, whole, tol, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(lo, mid, &f);
        let right = rule.integrate(mid, hi, &f);
        let split = left + right;
        if (split - whole).abs() <= tol || (hi - lo).abs() < 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            total += split;
        } else if depth >= ADAPTIVE_MAX_DEPTH {
            return Err(Error::Precondition(format!(
                "adaptive quadrature failed to converge near [{lo}, {hi}]"
            )));
        } else {
            stack.push((lo, mid, left, 0.5 * tol, depth + 1));
            stack.push((mid, hi, right, 0.5 * tol, depth + 1));
        }
    }
    if !total.is_finite() {
        return Err(Error::Precondition("integrand produced a non-finite value".into()));
    }
    Ok(total)
}

/// Composite rule on (0, 1] with panels [2^{-k-1}, 2^{-k}], k = 0..levels.
///
/// The panels shrink geometrically toward u = 0, so an integrand behaving like
/// u^{s-1}·smooth is resolved to near machine precision on every panel. The
/// interval [0, 2^{-levels}] is left to the caller.
#[derive(Debug, Clone)]
pub struct GradedRule {
    pub points: Vec<(f64, f64)>,
    pub levels: u32,
}

impl GradedRule {
    pub fn new(levels: u32, points_per_panel: usize) -> Self {
        let rule = GaussLegendre::cached(points_per_panel);
        let mut points = Vec::with_capacity(levels as usize * points_per_panel);
        for k in 0..levels {
            let hi = (-(k as f64)).exp2();
            points.extend(rule.mapped(0.5 * hi, hi));
        }
        Self { points, levels }
    }

    /// Width of the uncovered interval [0, delta].
    pub fn delta(&self) -> f64 {
        (-(self.levels as f64)).exp2()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.points.iter().map(|&(u, w)| w * f(u)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_nodes_symmetric() {
        for n in [1, 2, 5, 15, 32, 64] {
            let gl = GaussLegendre::new(n);
            let s: f64 = gl.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n = {n}");
            for i in 0..n {
                assert!((gl.nodes[i] + gl.nodes[n - 1 - i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let gl = GaussLegendre::new(8);
        for d in 0..16 {
            let got = gl.integrate(0.0, 1.0, |x| x.powi(d));
            assert!((got - 1.0 / (d as f64 + 1.0)).abs() < 1e-14, "degree {d}");
        }
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let got = integrate_adaptive(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 0.0).unwrap();
        let exact = 2.0 / 1e-2 * (1.0f64 / 1e-2).atan();
        assert!(((got - exact) / exact).abs() < 1e-11);
    }

    #[test]
    fn graded_rule_resolves_endpoint_singularity() {
        // ∫_0^1 u^{-1/2} du = 2; the uncovered piece is 2·sqrt(delta).
        let rule = GradedRule::new(60, 24);
        let got = rule.integrate(|u| u.powf(-0.5)) + 2.0 * rule.delta().sqrt();
        assert!((got - 2.0).abs() < 1e-13);
    }
}
