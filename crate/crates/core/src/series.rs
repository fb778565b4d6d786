//! Truncated Taylor series on the unit disk and the standard coefficient
//! families used throughout the crate.

use std::io::{Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::gamma_ratio_unchecked;

/// Default truncation degree.
pub const DEFAULT_DEGREE: usize = 1 << 12;

/// Largest radius at which `eval` accepts a point.
pub const MAX_EVAL_RADIUS: f64 = 0.999;

/// Coefficients a_0..a_N of f(z) = Σ a_n z^n, truncated at degree N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Input("a power series needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Input("power series coefficients must be finite".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// z^k.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    /// The constant function `c`.
    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// Zero-pads or truncates to the requested degree.
    pub fn with_degree(&self, degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(degree + 1, Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| a * c).collect(),
        }
    }

    /// Coefficient-wise sum; the result has the larger of the two degrees.
    pub fn add(&self, other: &PowerSeries) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self {
            coeffs: (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect(),
        }
    }

    /// Horner evaluation; |z| must not exceed `MAX_EVAL_RADIUS`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() <= MAX_EVAL_RADIUS) {
            return Err(Error::domain(
                "eval",
                format!("|z| = {} exceeds {MAX_EVAL_RADIUS}", z.norm()),
            ));
        }
        Ok(self.horner(z))
    }

    /// Horner evaluation without the disk check. Used on closed disks where the
    /// truncated polynomial is still meaningful (quadrature nodes, r → 1 tails).
    pub(crate) fn horner(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// First or second derivative. Differentiating a constant yields the zero
    /// series of degree 0.
    pub fn derivative(&self, order: usize) -> Result<Self> {
        if !(1..=2).contains(&order) {
            return Err(Error::Precondition(format!(
                "derivative order must be 1 or 2, got {order}"
            )));
        }
        let mut out = self.clone();
        for _ in 0..order {
            out = out.derive_once();
        }
        Ok(out)
    }

    fn derive_once(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(Complex64::new(0.0, 0.0));
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, &c)| c * n as f64)
                .collect(),
        }
    }

    /// Term-by-term antiderivative with zero constant term; inverse of
    /// `derivative(1)` on coefficients 1..N.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, &c)| c / (n as f64 + 1.0)),
        );
        Self { coeffs }
    }

    /// Truncated product, c_n = Σ_{k≤n} a_k b_{n−k} for n ≤ min(N_f, N_g).
    pub fn cauchy_product(&self, other: &PowerSeries) -> Self {
        let n = self.degree().min(other.degree());
        let a = &self.coeffs;
        let b = &other.coeffs;
        let coeffs = (0..=n)
            .into_par_iter()
            .map(|m| {
                (0..=m)
                    .map(|k| a[k] * b[m - k])
                    .fold(Complex64::new(0.0, 0.0), |s, t| s + t)
            })
            .collect();
        Self { coeffs }
    }

    /// Real parts of the coefficients, or an error if any imaginary part is
    /// not negligible.
    pub fn real_coeffs(&self) -> Result<Vec<f64>> {
        self.coeffs
            .iter()
            .map(|c| {
                if c.im.abs() <= 1e-14 * c.re.abs().max(1.0) {
                    Ok(c.re)
                } else {
                    Err(Error::Precondition("coefficients are not real".into()))
                }
            })
            .collect()
    }

    /// Writes `index,real,imag` rows with a header line.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| Error::Input(e.to_string());
        w.write_record(["index", "real", "imag"]).map_err(io)?;
        for (n, c) in self.coeffs.iter().enumerate() {
            w.write_record([n.to_string(), format!("{:e}", c.re), format!("{:e}", c.im)])
                .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Input(e.to_string()))?;
        Ok(())
    }

    /// Reads `index,real,imag` rows (header required). Indices may come in any
    /// order; missing indices are zero and duplicates are rejected. Indices
    /// above `max_degree` are an error.
    pub fn read_csv<R: Read>(reader: R, max_degree: usize) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| csv_parse_error(&e))?
            .iter()
            .map(str::to_ascii_lowercase)
            .collect::<Vec<_>>();
        if headers != ["index", "real", "imag"] {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "expected header `index,real,imag`".into(),
            });
        }
        let mut entries: Vec<Option<Complex64>> = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| csv_parse_error(&e))?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let field = |i: usize| record.get(i).unwrap_or("");
            let bad = |column: usize, message: String| Error::Parse {
                line,
                column,
                message,
            };
            let index: usize = field(0)
                .parse()
                .map_err(|_| bad(1, format!("invalid index `{}`", field(0))))?;
            if index > max_degree {
                return Err(bad(1, format!("index {index} exceeds maximum degree {max_degree}")));
            }
            let re: f64 = field(1)
                .parse()
                .map_err(|_| bad(2, format!("invalid real part `{}`", field(1))))?;
            let im: f64 = field(2)
                .parse()
                .map_err(|_| bad(3, format!("invalid imaginary part `{}`", field(2))))?;
            if !re.is_finite() || !im.is_finite() {
                return Err(bad(2, "coefficients must be finite".into()));
            }
            if entries.len() <= index {
                entries.resize(index + 1, None);
            }
            if entries[index].replace(Complex64::new(re, im)).is_some() {
                return Err(bad(1, format!("duplicate index {index}")));
            }
        }
        if entries.is_empty() {
            return Err(Error::Input("no coefficient rows".into()));
        }
        Self::new(entries.into_iter().map(Option::unwrap_or_default).collect())
    }
}

fn csv_parse_error(e: &csv::Error) -> Error {
    let (line, column) = match e.position() {
        Some(p) => (p.line() as usize, 1),
        None => (0, 0),
    };
    Error::Parse {
        line,
        column,
        message: e.to_string(),
    }
}

/// (1 − z)^{−β}: c_0 = 1, c_n = c_{n−1}(n − 1 + β)/n.
pub fn binomial_series(beta: f64, degree: usize) -> Result<PowerSeries> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain("binomial_series", format!("beta = {beta} must be positive")));
    }
    let mut coeffs = Vec::with_capacity(degree + 1);
    let mut c = 1.0;
    coeffs.push(Complex64::new(1.0, 0.0));
    for n in 1..=degree {
        c *= (n as f64 - 1.0 + beta) / n as f64;
        coeffs.push(Complex64::new(c, 0.0));
    }
    Ok(PowerSeries { coeffs })
}

/// Same family as `binomial_series` but with each coefficient taken from
/// `gamma_ratio`, avoiding the accumulated rounding of the recurrence.
pub fn binomial_series_direct(beta: f64, degree: usize) -> Result<PowerSeries> {
    binomial_series(beta, 0)?;
    Ok(PowerSeries {
        coeffs: (0..=degree)
            .map(|n| Complex64::new(gamma_ratio_unchecked(n, beta), 0.0))
            .collect(),
    })
}

/// log(1/(1 − z)) = Σ_{k≥1} z^k / k.
pub fn log_series(degree: usize) -> Result<PowerSeries> {
    if degree < 1 {
        return Err(Error::Precondition("log_series needs degree >= 1".into()));
    }
    let coeffs = (0..=degree)
        .map(|k| {
            if k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(1.0 / k as f64, 0.0)
            }
        })
        .collect();
    Ok(PowerSeries { coeffs })
}

/// (1 − z)^{−β} · log^γ(2/(1 − z)). With β = 0 only the logarithmic factor is
/// kept, which requires γ ≥ 1.
pub fn log_power_series(beta: f64, gamma: u32, degree: usize) -> Result<PowerSeries> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::domain("log_power_series", format!("beta = {beta} must be >= 0")));
    }
    if beta == 0.0 && gamma == 0 {
        return Err(Error::Precondition(
            "log_power_series with beta = 0 needs gamma >= 1".into(),
        ));
    }
    let mut log_factor = log_series(degree.max(1))?.with_degree(degree);
    log_factor.coeffs[0] = Complex64::new(std::f64::consts::LN_2, 0.0);
    let mut acc = if beta > 0.0 {
        binomial_series(beta, degree)?
    } else {
        log_factor.clone()
    };
    let extra = if beta > 0.0 { gamma } else { gamma - 1 };
    for _ in 0..extra {
        acc = acc.cauchy_product(&log_factor);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn eval_examples() {
        let geo = PowerSeries::from_real(&[1.0; 65]).unwrap();
        assert!((geo.eval(c(0.5)).unwrap() - c(2.0)).norm() < 2f64.powi(-64) * 4.0);
        let f = PowerSeries::new(vec![Complex64::new(3.0, -1.0), c(2.0), c(5.0)]).unwrap();
        assert_eq!(f.eval(c(0.0)).unwrap(), Complex64::new(3.0, -1.0));
        let g = log_series(64).unwrap();
        assert!((g.eval(c(0.5)).unwrap().re - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn eval_rejects_boundary() {
        let f = PowerSeries::monomial(3);
        assert!(f.eval(c(1.0)).is_err());
        assert!(f.eval(Complex64::new(0.0, 0.9995)).is_err());
        assert!(f.eval(Complex64::new(0.0, 0.999)).is_ok());
    }

    #[test]
    fn log_series_at_point_nine() {
        let g = log_series(1 << 12).unwrap();
        assert_eq!(g.coeff(1), c(1.0));
        assert_eq!(g.coeff(100), c(0.01));
        assert!((g.eval(c(0.9)).unwrap().re - 10f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn derivative_examples() {
        let f = PowerSeries::from_real(&[4.0, 3.0, 7.0]).unwrap();
        assert_eq!(f.derivative(1).unwrap().coeffs(), &[c(3.0), c(14.0)]);
        assert_eq!(f.derivative(2).unwrap().coeffs(), &[c(14.0)]);
        assert!(f.derivative(3).is_err());

        let d = log_series(100).unwrap().derivative(1).unwrap();
        assert!(d.coeffs().iter().all(|&x| (x - c(1.0)).norm() < 1e-15));
        assert_eq!(d.degree(), 99);
    }

    #[test]
    fn derivative_of_binomial_family() {
        // d/dz (1 − z)^{−β} = β (1 − z)^{−β−1}
        for &beta in &[0.5, 1.0, 2.5] {
            let lhs = binomial_series(beta, 300).unwrap().derivative(1).unwrap();
            let rhs = binomial_series(beta + 1.0, 299).unwrap().scale(c(beta));
            for (a, b) in lhs.coeffs().iter().zip(rhs.coeffs()) {
                assert!((a - b).norm() <= 1e-12 * b.norm());
            }
        }
    }

    #[test]
    fn cauchy_product_examples() {
        let f = PowerSeries::from_real(&[1.0, -2.0, 0.5, 4.0]).unwrap();
        let one = PowerSeries::from_real(&[1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(f.cauchy_product(&one), f);

        let b1 = binomial_series(1.0, 200).unwrap();
        let sq = b1.cauchy_product(&b1);
        for (n, x) in sq.coeffs().iter().enumerate() {
            assert_eq!(*x, c(n as f64 + 1.0));
        }

        let half = binomial_series(0.5, 2000).unwrap();
        let prod = half.cauchy_product(&half);
        assert!(prod.coeffs().iter().all(|&x| (x - c(1.0)).norm() < 1e-12));
    }

    #[test]
    fn binomial_examples() {
        let ones = binomial_series(1.0, 50).unwrap();
        assert!(ones.coeffs().iter().all(|&x| x == c(1.0)));
        let lin = binomial_series(2.0, 50).unwrap();
        for (n, x) in lin.coeffs().iter().enumerate() {
            assert!((x.re - (n as f64 + 1.0)).abs() < 1e-12);
        }
        let f = binomial_series(1.5, 1 << 12).unwrap();
        let g15 = crate::specfun::log_gamma(1.5).unwrap().exp();
        for n in (1 << 10)..=(1 << 12) {
            let r = f.coeff(n).re * g15 / (n as f64).sqrt();
            assert!((0.95..=1.05).contains(&r), "n = {n}: {r}");
        }
        assert!(binomial_series(0.0, 3).is_err());
    }

    #[test]
    fn binomial_recurrence_matches_gamma_ratio() {
        let a = binomial_series(0.75, 1 << 13).unwrap();
        let b = binomial_series_direct(0.75, 1 << 13).unwrap();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() <= 1e-11 * y.norm());
        }
    }

    #[test]
    fn log_power_examples() {
        let a = log_power_series(1.7, 0, 40).unwrap();
        assert_eq!(a, binomial_series(1.7, 40).unwrap());

        let l = log_power_series(0.0, 1, 40).unwrap();
        assert!((l.coeff(0).re - std::f64::consts::LN_2).abs() < 1e-16);
        for n in 1..=40 {
            assert!((l.coeff(n).re - 1.0 / n as f64).abs() < 1e-16);
        }
        assert!(log_power_series(0.0, 0, 10).is_err());

        let f = log_power_series(1.0, 1, 1 << 12).unwrap();
        let ratios: Vec<f64> = ((1 << 8)..=(1 << 12))
            .map(|n| f.coeff(n).re / ((n + 1) as f64).ln())
            .collect();
        let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
        assert!(hi / lo <= 3.0, "{lo}..{hi}");
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let f = PowerSeries::new(vec![Complex64::new(0.25, -1.5), c(1e-300), c(3.0)]).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let back = PowerSeries::read_csv(buf.as_slice(), 10).unwrap();
        assert_eq!(back, f);

        let sparse = "index,real,imag\n3,1,0\n0,2,0\n";
        let s = PowerSeries::read_csv(sparse.as_bytes(), 10).unwrap();
        assert_eq!(s.coeffs(), &[c(2.0), c(0.0), c(0.0), c(1.0)]);

        let dup = "index,real,imag\n0,1,0\n0,2,0\n";
        assert!(matches!(
            PowerSeries::read_csv(dup.as_bytes(), 10),
            Err(Error::Parse { line: 3, .. })
        ));
        let bad = "index,real,imag\n0,x,0\n";
        assert!(matches!(
            PowerSeries::read_csv(bad.as_bytes(), 10),
            Err(Error::Parse { line: 2, column: 2, .. })
        ));
        assert!(PowerSeries::read_csv("index,real,imag\n99,1,0\n".as_bytes(), 10).is_err());
        assert!(PowerSeries::read_csv("a,b,c\n".as_bytes(), 10).is_err());
    }

    fn arb_series(max_len: usize) -> impl Strategy<Value = PowerSeries> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..max_len).prop_map(|v| {
            PowerSeries::new(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap()
        })
    }

    fn close(a: &PowerSeries, b: &PowerSeries) -> bool {
        a.coeffs().len() == b.coeffs().len()
            && a.coeffs()
                .iter()
                .zip(b.coeffs())
                .all(|(x, y)| (x - y).norm() <= 1e-12 * (1.0 + x.norm().max(y.norm())))
    }

    proptest! {
        #[test]
        fn product_commutes(f in arb_series(40), g in arb_series(40)) {
            prop_assert!(close(&f.cauchy_product(&g), &g.cauchy_product(&f)));
        }

        #[test]
        fn product_associates(f in arb_series(30), g in arb_series(30), h in arb_series(30)) {
            let left = f.cauchy_product(&g).cauchy_product(&h);
            let right = f.cauchy_product(&g.cauchy_product(&h));
            prop_assert!(close(&left, &right));
        }

        #[test]
        fn derivative_inverts_antiderivative(f in arb_series(50)) {
            let back = f.antiderivative().derivative(1).unwrap();
            prop_assert!(close(&back, &f));
        }
    }
}
