//! Fresnel integrals and the sine integral.
//!
//! Small arguments use the Maclaurin series; beyond the crossover the
//! alternating terms cancel too badly in double precision and a continued
//! fraction for the complementary function takes over (modified Lentz).

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{FrftError, Result};

/// Largest `|x|` evaluated by the Fresnel Maclaurin series.
pub const FRESNEL_SERIES_LIMIT: f64 = 2.5;

/// Largest `|x|` evaluated by the sine-integral Maclaurin series.
pub const SI_SERIES_LIMIT: f64 = 4.0;

/// Stopping rule for series and continued-fraction evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSpec {
    max_terms: usize,
    target_accuracy: f64,
}

impl SeriesSpec {
    pub fn new(max_terms: usize, target_accuracy: f64) -> Result<Self> {
        if max_terms == 0 {
            return Err(FrftError::InvalidParameter("max_terms must be >= 1".into()));
        }
        if !(target_accuracy > 0.0) {
            return Err(FrftError::InvalidParameter(format!("target accuracy must be > 0, got {target_accuracy}")));
        }
        Ok(Self { max_terms, target_accuracy })
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn target_accuracy(&self) -> f64 {
        self.target_accuracy
    }
}

impl Default for SeriesSpec {
    fn default() -> Self {
        Self { max_terms: 500, target_accuracy: 1e-17 }
    }
}

fn not_converged(spec: &SeriesSpec) -> FrftError {
    FrftError::SeriesNotConverged { terms: spec.max_terms, target: spec.target_accuracy }
}

/// `sum_n (-1)^n x^(4n+3) / ((2n+1)! (4n+3))`.
pub fn fresnel_sin_series(x: f64, spec: &SeriesSpec) -> Result<f64> {
    let x2 = x * x;
    let x4 = x2 * x2;
    // p_n = (-1)^n x^(4n+3) / (2n+1)!
    let mut p = x * x2;
    let mut sum = 0.0;
    for n in 0..spec.max_terms {
        let term = p / (4 * n + 3) as f64;
        sum += term;
        if term.abs() < spec.target_accuracy {
            return Ok(sum);
        }
        let k = (2 * n + 2) as f64;
        p *= -x4 / (k * (k + 1.0));
    }
    Err(not_converged(spec))
}

/// `sum_n (-1)^n x^(4n+1) / ((2n)! (4n+1))`, the series of `int_0^x cos t^2 dt`.
pub fn fresnel_cos_series(x: f64, spec: &SeriesSpec) -> Result<f64> {
    let x4 = x.powi(4);
    let mut p = x;
    let mut sum = 0.0;
    for n in 0..spec.max_terms {
        let term = p / (4 * n + 1) as f64;
        sum += term;
        if term.abs() < spec.target_accuracy {
            return Ok(sum);
        }
        let k = (2 * n + 1) as f64;
        p *= -x4 / (k * (k + 1.0));
    }
    Err(not_converged(spec))
}

/// `sum_n (-1)^n x^(2n+1) / ((2n+1)! (2n+1))`.
pub fn sine_integral_series(x: f64, spec: &SeriesSpec) -> Result<f64> {
    let x2 = x * x;
    let mut p = x;
    let mut sum = 0.0;
    for n in 0..spec.max_terms {
        let term = p / (2 * n + 1) as f64;
        sum += term;
        if term.abs() < spec.target_accuracy {
            return Ok(sum);
        }
        let k = (2 * n + 2) as f64;
        p *= -x2 / (k * (k + 1.0));
    }
    Err(not_converged(spec))
}

/// Normalised Fresnel pair `(int_0^z cos(pi s^2 / 2), int_0^z sin(pi s^2 / 2))`
/// for `z >= 0` from the continued fraction of the complementary error function.
fn fresnel_normalised_cf(z: f64, spec: &SeriesSpec) -> Result<(f64, f64)> {
    let tiny = 1e-300;
    let eps = spec.target_accuracy.max(f64::EPSILON);
    let pix2 = PI * z * z;
    let mut b = Complex64::new(1.0, -pix2);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    let mut n = -1.0;
    let mut converged = false;
    for _ in 1..spec.max_terms {
        n += 2.0;
        let a = -n * (n + 1.0);
        b += 4.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < eps {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(not_converged(spec));
    }
    h *= Complex64::new(z, -z);
    let cs = Complex64::new(0.5, 0.5) * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, 0.5 * pix2) * h);
    Ok((cs.re, cs.im))
}

fn fresnel_pair_large(x: f64, spec: &SeriesSpec) -> Result<(f64, f64)> {
    let scale = FRAC_PI_2.sqrt();
    let (c, s) = fresnel_normalised_cf(x.abs() / scale, spec)?;
    let sign = x.signum();
    Ok((sign * scale * c, sign * scale * s))
}

/// `C(x) = int_0^x sin(t^2) dt`.
pub fn fresnel_c(x: f64, spec: &SeriesSpec) -> Result<f64> {
    if x.abs() <= FRESNEL_SERIES_LIMIT {
        fresnel_sin_series(x, spec)
    } else {
        Ok(fresnel_pair_large(x, spec)?.1)
    }
}

/// `int_0^x cos(t^2) dt`.
pub fn fresnel_cos(x: f64, spec: &SeriesSpec) -> Result<f64> {
    if x.abs() <= FRESNEL_SERIES_LIMIT {
        fresnel_cos_series(x, spec)
    } else {
        Ok(fresnel_pair_large(x, spec)?.0)
    }
}

/// `Si(x) = int_0^x sin(t) / t dt`.
pub fn sine_integral(x: f64, spec: &SeriesSpec) -> Result<f64> {
    if x.abs() <= SI_SERIES_LIMIT {
        return sine_integral_series(x, spec);
    }
    // E1(i x) by continued fraction; Si(x) = pi/2 + Im(exp(-i x) * cf)
    let z = x.abs();
    let tiny = 1e-300;
    let eps = spec.target_accuracy.max(f64::EPSILON);
    let mut b = Complex64::new(1.0, z);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    let mut converged = false;
    for i in 2..=spec.max_terms {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < eps {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(not_converged(spec));
    }
    h *= Complex64::new(z.cos(), -z.sin());
    Ok(x.signum() * (FRAC_PI_2 + h.im))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn zeros_and_oddness() {
        let spec = SeriesSpec::default();
        assert_eq!(fresnel_c(0.0, &spec).unwrap(), 0.0);
        assert_eq!(sine_integral(0.0, &spec).unwrap(), 0.0);
        for &x in &[0.3, 1.0, 2.2, 2.7, 4.5, 9.0] {
            assert_eq!(fresnel_c(-x, &spec).unwrap(), -fresnel_c(x, &spec).unwrap());
            assert_eq!(fresnel_cos(-x, &spec).unwrap(), -fresnel_cos(x, &spec).unwrap());
            assert_eq!(sine_integral(-x, &spec).unwrap(), -sine_integral(x, &spec).unwrap());
        }
    }

    #[test]
    fn against_simpson() {
        let spec = SeriesSpec::default();
        for &x in &[0.5, 1.0, 2.0, 2.5, 3.0, 4.0] {
            let c = simpson(|t| (t * t).sin(), 0.0, x, 20000);
            let k = simpson(|t| (t * t).cos(), 0.0, x, 20000);
            assert!((fresnel_c(x, &spec).unwrap() - c).abs() < 1e-11, "C({x})");
            assert!((fresnel_cos(x, &spec).unwrap() - k).abs() < 1e-11, "Ccos({x})");
        }
        let sinc = |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t };
        for &x in &[1.0, 3.9, 4.1, 5.0, 10.0] {
            let s = simpson(sinc, 0.0, x, 20000);
            assert!((sine_integral(x, &spec).unwrap() - s).abs() < 1e-11, "Si({x})");
        }
    }

    #[test]
    fn limits() {
        let spec = SeriesSpec::default();
        assert!((sine_integral(100.0, &spec).unwrap() - FRAC_PI_2).abs() < 0.02);
        let lim = 0.5 * FRAC_PI_2.sqrt();
        assert!((fresnel_c(60.0, &spec).unwrap() - lim).abs() < 0.02);
        assert!((fresnel_cos(60.0, &spec).unwrap() - lim).abs() < 0.02);
    }

    #[test]
    fn printed_series_is_the_cosine_integral() {
        let spec = SeriesSpec::default();
        let x = 1.3;
        let k = simpson(|t| (t * t).cos(), 0.0, x, 20000);
        assert!((fresnel_cos_series(x, &spec).unwrap() - k).abs() < 1e-12);
        assert!((fresnel_cos_series(x, &spec).unwrap() - fresnel_c(x, &spec).unwrap()).abs() > 0.1);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let spec = SeriesSpec::new(3, 1e-15).unwrap();
        assert!(matches!(fresnel_c(2.0, &spec), Err(FrftError::SeriesNotConverged { terms: 3, .. })));
        assert!(matches!(sine_integral(20.0, &spec), Err(FrftError::SeriesNotConverged { .. })));
        assert!(SeriesSpec::new(0, 1e-3).is_err());
    }
}
