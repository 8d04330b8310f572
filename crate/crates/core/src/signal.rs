//! Uniform grids, sampled complex signals, norms and trapezoid quadrature.
//!
//! Every integral in the crate goes through the composite trapezoid rule on a
//! closed [`UniformGrid`]. Signals are taken to vanish outside their grid.

use num_complex::Complex64;

use crate::error::{FrftError, Result};

/// Uniform sample locations `start + i * step`, `0 <= i < count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    start: f64,
    step: f64,
    count: usize,
}

impl UniformGrid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !start.is_finite() || !step.is_finite() {
            return Err(FrftError::InvalidGrid("start and step must be finite".into()));
        }
        if step <= 0.0 {
            return Err(FrftError::InvalidGrid(format!("step must be > 0, got {step}")));
        }
        if count == 0 {
            return Err(FrftError::InvalidGrid("count must be >= 1".into()));
        }
        Ok(Self { start, step, count })
    }

    /// Symmetric grid `[-half_width, half_width]` with the given step.
    ///
    /// The half width is rounded up to a whole number of steps so that 0 is a node.
    pub fn symmetric(half_width: f64, step: f64) -> Result<Self> {
        if !(half_width >= 0.0) {
            return Err(FrftError::InvalidGrid(format!("half width must be >= 0, got {half_width}")));
        }
        if !(step > 0.0) {
            return Err(FrftError::InvalidGrid(format!("step must be > 0, got {step}")));
        }
        let half = (half_width / step - 1e-9).ceil().max(0.0) as usize;
        Self::new(-(half as f64) * step, step, 2 * half + 1)
    }

    /// Parses the `start:step:count` form used on the command line.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(FrftError::Parse(format!("grid spec '{spec}' is not start:step:count")));
        }
        let start: f64 =
            parts[0].trim().parse().map_err(|_| FrftError::Parse(format!("bad grid start '{}'", parts[0])))?;
        let step: f64 =
            parts[1].trim().parse().map_err(|_| FrftError::Parse(format!("bad grid step '{}'", parts[1])))?;
        let count: usize =
            parts[2].trim().parse().map_err(|_| FrftError::Parse(format!("bad grid count '{}'", parts[2])))?;
        Self::new(start, step, count)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn end(&self) -> f64 {
        self.point(self.count - 1)
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.point(i))
    }

    /// Largest `|t|` over the grid.
    pub fn half_width(&self) -> f64 {
        self.start.abs().max(self.end().abs())
    }

    /// Composite trapezoid weight of node `i`.
    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        if self.count == 1 {
            0.0
        } else if i == 0 || i == self.count - 1 {
            0.5 * self.step
        } else {
            self.step
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.weight(i)).collect()
    }

    /// Grid of the reflected points `-t`, in increasing order.
    pub fn negated(&self) -> Self {
        Self { start: -self.end(), step: self.step, count: self.count }
    }

    /// True when both grids place their nodes at the same abscissae.
    pub fn coincides(&self, other: &UniformGrid) -> bool {
        self.count == other.count
            && (self.step - other.step).abs() <= 1e-12 * self.step
            && (self.start - other.start).abs() <= 1e-9 * self.step
    }

    /// Fractional index of abscissa `t`.
    #[inline]
    pub fn index_of(&self, t: f64) -> f64 {
        (t - self.start) / self.step
    }
}

/// Exponent `p` of an L^p norm, `1 <= p <= inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpExponent(f64);

impl LpExponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(FrftError::InvalidExponent(p));
        }
        Ok(Self(p))
    }

    pub const ONE: LpExponent = LpExponent(1.0);
    pub const TWO: LpExponent = LpExponent(2.0);
    pub const INFINITY: LpExponent = LpExponent(f64::INFINITY);

    pub fn value(&self) -> f64 {
        self.0
    }

    /// Conjugate exponent `p' = p / (p - 1)`.
    pub fn dual(&self) -> LpExponent {
        let p = self.0;
        if p == 1.0 {
            LpExponent(f64::INFINITY)
        } else if p.is_infinite() {
            LpExponent(1.0)
        } else {
            LpExponent(p / (p - 1.0))
        }
    }
}

/// Complex samples over a [`UniformGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    grid: UniformGrid,
    samples: Vec<Complex64>,
}

impl Signal {
    pub fn new(grid: UniformGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.count() {
            return Err(FrftError::GridMismatch(format!(
                "{} samples for a grid of {} points",
                samples.len(),
                grid.count()
            )));
        }
        if let Some(index) = samples.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(FrftError::NonFiniteSample { index });
        }
        Ok(Self { grid, samples })
    }

    pub fn zeros(grid: UniformGrid) -> Self {
        Self { grid, samples: vec![Complex64::new(0.0, 0.0); grid.count()] }
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Samplewise map keeping the grid. `f` receives `(t, sample)`.
    pub fn map<F>(&self, f: F) -> Result<Signal>
    where
        F: Fn(f64, Complex64) -> Complex64,
    {
        let samples = self.samples.iter().enumerate().map(|(i, &z)| f(self.grid.point(i), z)).collect();
        Signal::new(self.grid, samples)
    }

    pub fn scale(&self, c: Complex64) -> Signal {
        Signal { grid: self.grid, samples: self.samples.iter().map(|z| z * c).collect() }
    }

    pub fn add(&self, other: &Signal) -> Result<Signal> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Signal) -> Result<Signal> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with<F>(&self, other: &Signal, f: F) -> Result<Signal>
    where
        F: Fn(Complex64, Complex64) -> Complex64,
    {
        require_same_grid(self, other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(&a, &b)| f(a, b)).collect();
        Ok(Signal { grid: self.grid, samples })
    }

    /// Largest modulus among the first and last sample, a truncation diagnostic.
    pub fn boundary_magnitude(&self) -> f64 {
        let first = self.samples.first().map(|z| z.norm()).unwrap_or(0.0);
        let last = self.samples.last().map(|z| z.norm()).unwrap_or(0.0);
        first.max(last)
    }

    /// Linear interpolation at `t`; zero outside the grid.
    pub fn interpolate(&self, t: f64) -> Complex64 {
        let u = self.grid.index_of(t);
        let n = self.grid.count();
        let snap = u.round();
        if (u - snap).abs() <= 1e-9 && snap >= 0.0 && (snap as usize) < n {
            return self.samples[snap as usize];
        }
        if u < 0.0 || u > (n - 1) as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let i = u.floor() as usize;
        if i + 1 >= n {
            return self.samples[n - 1];
        }
        let frac = u - i as f64;
        self.samples[i] * (1.0 - frac) + self.samples[i + 1] * frac
    }

    /// Resamples onto `out` by linear interpolation; exact copy when the grids coincide.
    pub fn resample(&self, out: &UniformGrid) -> Signal {
        if self.grid.coincides(out) {
            return Signal { grid: *out, samples: self.samples.clone() };
        }
        Signal { grid: *out, samples: out.points().map(|t| self.interpolate(t)).collect() }
    }

    /// The reflected signal `t -> f(-t)` on the negated grid.
    pub fn reflected(&self) -> Signal {
        let mut samples = self.samples.clone();
        samples.reverse();
        Signal { grid: self.grid.negated(), samples }
    }
}

/// Samples `f` at every grid point.
pub fn make_signal<F>(grid: UniformGrid, f: F) -> Result<Signal>
where
    F: Fn(f64) -> Complex64,
{
    let samples = grid.points().map(f).collect();
    Signal::new(grid, samples)
}

/// Trapezoid L^p norm; `p = inf` is the maximum modulus.
pub fn lp_norm(f: &Signal, p: LpExponent) -> f64 {
    let p = p.value();
    if p.is_infinite() {
        return f.samples().iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    let grid = f.grid();
    if p == 1.0 {
        return f.samples().iter().enumerate().map(|(i, z)| grid.weight(i) * z.norm()).sum();
    }
    if p == 2.0 {
        let s: f64 = f.samples().iter().enumerate().map(|(i, z)| grid.weight(i) * z.norm_sqr()).sum();
        return s.sqrt();
    }
    let s: f64 = f.samples().iter().enumerate().map(|(i, z)| grid.weight(i) * z.norm().powf(p)).sum();
    s.powf(1.0 / p)
}

/// Trapezoid quadrature of `f * g` (no conjugation).
pub fn inner_product(f: &Signal, g: &Signal) -> Result<Complex64> {
    require_same_grid(f, g)?;
    let grid = f.grid();
    Ok(f.samples().iter().zip(g.samples()).enumerate().map(|(i, (a, b))| a * b * grid.weight(i)).sum())
}

/// Trapezoid integral of the samples.
pub fn integral(f: &Signal) -> Complex64 {
    let grid = f.grid();
    f.samples().iter().enumerate().map(|(i, z)| z * grid.weight(i)).sum()
}

/// `||f - g||_p / ||g||_p`; returns the absolute error when `g` vanishes.
pub fn relative_error(f: &Signal, g: &Signal, p: LpExponent) -> Result<f64> {
    let diff = f.sub(g)?;
    let num = lp_norm(&diff, p);
    let den = lp_norm(g, p);
    Ok(if den > 0.0 { num / den } else { num })
}

pub(crate) fn require_same_grid(f: &Signal, g: &Signal) -> Result<()> {
    if f.grid().coincides(g.grid()) {
        Ok(())
    } else {
        Err(FrftError::GridMismatch(format!("{:?} vs {:?}", f.grid(), g.grid())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_sampling() {
        let grid = UniformGrid::new(-1.0, 0.5, 5).unwrap();
        let s = make_signal(grid, c).unwrap();
        let re: Vec<f64> = s.samples().iter().map(|z| z.re).collect();
        assert_eq!(re, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn zero_function_gives_zero_signal() {
        let grid = UniformGrid::new(-1.0, 0.25, 9).unwrap();
        let s = make_signal(grid, |_| c(0.0)).unwrap();
        assert!(s.samples().iter().all(|z| *z == c(0.0)));
        for p in [1.0, 1.5, 2.0, f64::INFINITY] {
            assert_eq!(lp_norm(&s, LpExponent::new(p).unwrap()), 0.0);
        }
    }

    #[test]
    fn gaussian_peak_is_one() {
        let grid = UniformGrid::new(-8.0, 1.0 / 64.0, 1025).unwrap();
        let s = make_signal(grid, |t| c((-std::f64::consts::PI * t * t).exp())).unwrap();
        assert_eq!(s.samples()[512], c(1.0));
    }

    #[test]
    fn non_finite_sample_is_rejected_with_index() {
        let grid = UniformGrid::new(0.0, 1.0, 4).unwrap();
        let err = make_signal(grid, |t| if t == 2.0 { c(f64::NAN) } else { c(t) }).unwrap_err();
        assert_eq!(err, FrftError::NonFiniteSample { index: 2 });
    }

    #[test]
    fn invalid_grids() {
        assert!(UniformGrid::new(0.0, 0.0, 3).is_err());
        assert!(UniformGrid::new(0.0, -1.0, 3).is_err());
        assert!(UniformGrid::new(0.0, 1.0, 0).is_err());
        assert!(UniformGrid::parse_spec("1:2").is_err());
        let g = UniformGrid::parse_spec("-8:0.015625:1025").unwrap();
        assert_eq!(g.end(), 8.0);
    }

    #[test]
    fn unit_interval_l1() {
        let grid = UniformGrid::new(0.0, 0.01, 101).unwrap();
        let s = make_signal(grid, |_| c(1.0)).unwrap();
        assert!((lp_norm(&s, LpExponent::ONE) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exponent_validation_and_dual() {
        assert!(LpExponent::new(0.5).is_err());
        assert_eq!(LpExponent::new(2.0).unwrap().dual().value(), 2.0);
        assert_eq!(LpExponent::ONE.dual().value(), f64::INFINITY);
        let p = LpExponent::new(4.0 / 3.0).unwrap();
        assert!((p.dual().value() - 4.0).abs() < 1e-12);
        assert!((p.dual().dual().value() - p.value()).abs() < 1e-12);
    }

    #[test]
    fn inner_product_constant_and_parity() {
        let grid = UniformGrid::new(0.0, 1.0 / 128.0, 129).unwrap();
        let one = make_signal(grid, |_| c(1.0)).unwrap();
        assert!((inner_product(&one, &one).unwrap() - c(1.0)).norm() < 1e-12);

        let sym = UniformGrid::symmetric(3.0, 1.0 / 32.0).unwrap();
        let odd = make_signal(sym, |t| c(t * (-t * t).exp())).unwrap();
        let even = make_signal(sym, |t| c((1.0 + t * t).recip())).unwrap();
        assert!(inner_product(&odd, &even).unwrap().norm() < 1e-12);
    }

    #[test]
    fn inner_product_has_no_conjugate() {
        let grid = UniformGrid::new(0.0, 0.5, 3).unwrap();
        let f = Signal::new(grid, vec![Complex64::i(); 3]).unwrap();
        // i * i = -1 integrated over [0, 1]
        assert!((inner_product(&f, &f).unwrap() - c(-1.0)).norm() < 1e-15);
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let a = Signal::zeros(UniformGrid::new(0.0, 1.0, 4).unwrap());
        let b = Signal::zeros(UniformGrid::new(0.0, 0.5, 4).unwrap());
        assert!(matches!(inner_product(&a, &b), Err(FrftError::GridMismatch(_))));
    }

    #[test]
    fn trapezoid_exact_on_linear() {
        let grid = UniformGrid::new(-1.3, 0.07, 61).unwrap();
        let s = make_signal(grid, |t| Complex64::new(2.0 * t - 0.4, -t)).unwrap();
        let (a, b) = (grid.start(), grid.end());
        let exact = Complex64::new((b * b - a * a) - 0.4 * (b - a), -(b * b - a * a) / 2.0);
        assert!((integral(&s) - exact).norm() < 1e-13);
    }

    #[test]
    fn symmetric_grid_contains_zero() {
        let g = UniformGrid::symmetric(8.0, 1.0 / 64.0).unwrap();
        assert_eq!(g.count(), 1025);
        assert_eq!(g.point(512), 0.0);
    }

    #[test]
    fn reflection_and_resampling() {
        let grid = UniformGrid::new(-1.0, 0.5, 6).unwrap();
        let s = make_signal(grid, |t| Complex64::new(t, t * t)).unwrap();
        let r = s.reflected();
        assert!((r.grid().start() + 1.5).abs() < 1e-15);
        for (i, t) in r.grid().points().enumerate() {
            assert!((r.samples()[i] - Complex64::new(-t, t * t)).norm() < 1e-14);
        }
        let same = s.resample(&grid);
        assert_eq!(same, s);
        assert_eq!(s.interpolate(5.0), c(0.0));
        assert!((s.interpolate(-0.75) - Complex64::new(-0.75, 0.625)).norm() < 1e-14);
    }
}
