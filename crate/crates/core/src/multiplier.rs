//! Fractional Fourier multipliers `T_m f = F_{-a}[m F_a f]`, the fractional
//! Hilbert transform, multiplier-condition checkers and the fractional
//! Littlewood-Paley decomposition.
//!
//! All operators here treat `f` as resolved by its own grid after chirp
//! demodulation, i.e. `exp(i pi t^2 cot a) f(t)` is band limited below the
//! grid's Nyquist frequency.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::czt::{cis_turns, linear_convolve};
use crate::error::{FrftError, Result};
use crate::frft::{frft_fast, AngleContext, Bandwidth, DEFAULT_DELTA_SING};
use crate::signal::{lp_norm, LpExponent, Signal, UniformGrid};

/// Pointwise complex function of one real variable.
pub type PointFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Relative slack allowed on a declared sup bound.
pub const SUP_SLACK: f64 = 1e-9;

/// A bounded symbol with an optional derivative.
#[derive(Clone)]
pub struct MultiplierFn {
    evaluator: PointFn,
    sup_bound: f64,
    derivative: Option<PointFn>,
}

impl fmt::Debug for MultiplierFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierFn")
            .field("sup_bound", &self.sup_bound)
            .field("has_derivative", &self.derivative.is_some())
            .finish()
    }
}

impl MultiplierFn {
    pub fn new(evaluator: PointFn, sup_bound: f64) -> Self {
        Self { evaluator, sup_bound, derivative: None }
    }

    pub fn with_derivative(mut self, derivative: PointFn) -> Self {
        self.derivative = Some(derivative);
        self
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(Arc::new(move |_| c), c.norm()).with_derivative(Arc::new(|_| Complex64::new(0.0, 0.0)))
    }

    /// `-i sgn((pi - a) x)`, zero at `x = 0`.
    pub fn hilbert(alpha: f64) -> Self {
        let orientation = (PI - alpha.rem_euclid(2.0 * PI)).signum();
        Self::new(Arc::new(move |x: f64| Complex64::new(0.0, -sign(orientation * x))), 1.0)
            .with_derivative(Arc::new(|_| Complex64::new(0.0, 0.0)))
    }

    /// Indicator of `[lo, hi]` with value 1/2 at the endpoints.
    ///
    /// Points within `1e-12 (1 + |lo| + |hi|)` of an endpoint count as the endpoint,
    /// so grid nodes that land on it up to rounding get the half weight.
    pub fn indicator(lo: f64, hi: f64) -> Self {
        let tol = 1e-12 * (1.0 + lo.abs() + hi.abs());
        let snap = move |d: f64| if d.abs() <= tol { 0.0 } else { sign(d) };
        Self::new(Arc::new(move |x: f64| Complex64::new(0.5 * (snap(x - lo) - snap(x - hi)), 0.0)), 1.0)
            .with_derivative(Arc::new(|_| Complex64::new(0.0, 0.0)))
    }

    /// `exp(-2 pi eps |csc a| |x|)`, the symbol of the Abel mean.
    pub fn abel(eps: f64, alpha: f64) -> Self {
        let c = 2.0 * PI * eps * alpha.sin().recip().abs();
        Self::new(Arc::new(move |x: f64| Complex64::new((-c * x.abs()).exp(), 0.0)), 1.0)
            .with_derivative(Arc::new(move |x: f64| Complex64::new(-c * sign(x) * (-c * x.abs()).exp(), 0.0)))
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        (self.evaluator)(x)
    }

    /// `m'(x)`, by central differences with `h = 1e-4 max(1, |x|)` when no derivative was given.
    pub fn derivative_at(&self, x: f64) -> Complex64 {
        match &self.derivative {
            Some(d) => d(x),
            None => {
                let h = 1e-4 * x.abs().max(1.0);
                (self.eval(x + h) - self.eval(x - h)) / (2.0 * h)
            }
        }
    }
}

/// Sign with `sign(0) = 0`.
fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `I_j = [2^j sin a, 2^{j+1} sin a]` (sign `+1`) or its mirror (sign `-1`),
/// endpoints in increasing order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicIntervalAlpha {
    pub j: i32,
    pub sign: i8,
    pub alpha: f64,
}

impl DyadicIntervalAlpha {
    pub fn new(j: i32, sign: i8, alpha: f64) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(FrftError::InvalidParameter(format!("dyadic sign must be +-1, got {sign}")));
        }
        if alpha.sin() == 0.0 {
            return Err(FrftError::InvalidParameter("dyadic intervals degenerate when sin a = 0".into()));
        }
        Ok(Self { j, sign, alpha })
    }

    pub fn endpoints(&self) -> (f64, f64) {
        let s = self.sign as f64 * self.alpha.sin();
        let a = s * 2f64.powi(self.j);
        let b = s * 2f64.powi(self.j + 1);
        (a.min(b), a.max(b))
    }

    pub fn band(&self) -> Band {
        let (lo, hi) = self.endpoints();
        Band { lo, hi }
    }
}

/// A frequency interval `[lo, hi]` in the transform variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl From<DyadicIntervalAlpha> for Band {
    fn from(d: DyadicIntervalAlpha) -> Self {
        d.band()
    }
}

/// Frequency grid used by the operators that do not take one explicitly.
///
/// In the Fourier variable `y = x csc a` of the demodulated signal the step is
/// `1 / (4 T2)` with `T2` the power of two at or above the input half width,
/// so integer and dyadic frequencies fall on nodes; the extent stops at
/// `0.45 / step_t`, inside the input grid's Nyquist band.
pub fn multiplier_frequency_grid(input: &UniformGrid, alpha: f64) -> Result<UniformGrid> {
    let ctx = AngleContext::new(alpha, DEFAULT_DELTA_SING)?;
    ctx.require_generic()?;
    let t2 = 2f64.powf(input.half_width().max(input.step()).log2().ceil());
    let dy = 1.0 / (4.0 * t2);
    let half = (0.45 / (input.step() * dy)).floor();
    let step_x = dy / ctx.csc().abs();
    UniformGrid::new(-half * step_x, step_x, 2 * half as usize + 1)
}

/// Forward transform of `f` held for several symbols.
struct Spectrum {
    inverse: AngleContext,
    out: UniformGrid,
    values: Signal,
}

impl Spectrum {
    fn new(f: &Signal, alpha: f64, freq: &UniformGrid) -> Result<Self> {
        let ctx = AngleContext::new(alpha, DEFAULT_DELTA_SING)?;
        ctx.require_generic()?;
        let inverse = AngleContext::new(-alpha, DEFAULT_DELTA_SING)?;
        let values = frft_fast(f, &ctx, freq, Bandwidth::Demodulated(0.0))?;
        Ok(Self { inverse, out: *f.grid(), values })
    }

    fn apply(&self, m: &MultiplierFn) -> Result<Signal> {
        let bound = m.sup_bound() * (1.0 + SUP_SLACK);
        let mut samples = Vec::with_capacity(self.values.len());
        for (x, z) in self.values.grid().points().zip(self.values.samples()) {
            let v = m.eval(x);
            if !(v.norm() <= bound) {
                return Err(FrftError::SupBoundViolated { x, value: v.norm(), bound: m.sup_bound() });
            }
            samples.push(v * z);
        }
        let weighted = Signal::new(*self.values.grid(), samples)?;
        frft_fast(&weighted, &self.inverse, &self.out, Bandwidth::Demodulated(0.0))
    }
}

/// `F_{-a}[m F_a f]` back on `f`'s grid, with `F_a f` sampled on `freq_grid`.
pub fn apply_multiplier(m: &MultiplierFn, alpha: f64, f: &Signal, freq_grid: &UniformGrid) -> Result<Signal> {
    Spectrum::new(f, alpha, freq_grid)?.apply(m)
}

/// Fractional Hilbert transform through its symbol on [`multiplier_frequency_grid`].
pub fn frac_hilbert_mult(f: &Signal, alpha: f64) -> Result<Signal> {
    let freq = multiplier_frequency_grid(f.grid(), alpha)?;
    apply_multiplier(&MultiplierFn::hilbert(alpha), alpha, f, &freq)
}

/// Principal-value result with the truncation diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct PvHilbert {
    pub signal: Signal,
    pub warning: Option<String>,
}

/// Boundary modulus, relative to the peak, above which the p.v. integral is flagged.
pub const BOUNDARY_DECAY_TOLERANCE: f64 = 1e-6;

/// Classical discrete Hilbert transform on a uniform grid by the odd-pairing rule
/// `H g(t_k) = (2/pi) sum_{k - i odd} g_i / (k - i)`.
pub fn discrete_hilbert(g: &[Complex64]) -> Vec<Complex64> {
    let n = g.len();
    if n == 0 {
        return Vec::new();
    }
    let kernel: Vec<Complex64> = (0..2 * n - 1)
        .map(|idx| {
            let d = idx as i64 - (n as i64 - 1);
            if d % 2 != 0 {
                Complex64::new(2.0 / (PI * d as f64), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let full = linear_convolve(g, &kernel);
    full[n - 1..2 * n - 1].to_vec()
}

/// Fractional Hilbert transform as the principal-value integral
/// `exp(-i pi x^2 cot a) (1/pi) p.v. int exp(i pi t^2 cot a) f(t) / (x - t) dt`
/// evaluated at the nodes of `f`'s grid.
pub fn frac_hilbert_pv(f: &Signal, alpha: f64) -> Result<PvHilbert> {
    let ctx = AngleContext::new(alpha, DEFAULT_DELTA_SING)?;
    ctx.require_generic()?;
    let grid = *f.grid();
    let half_cot = 0.5 * ctx.cot();
    let g: Vec<Complex64> = f
        .samples()
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let t = grid.point(i);
            z * cis_turns(half_cot * t * t)
        })
        .collect();
    let h = discrete_hilbert(&g);
    let samples = h
        .into_iter()
        .enumerate()
        .map(|(k, z)| {
            let x = grid.point(k);
            z * cis_turns(-half_cot * x * x)
        })
        .collect();
    let peak = lp_norm(f, LpExponent::INFINITY);
    let edge = f.boundary_magnitude();
    let warning = if peak > 0.0 && edge > BOUNDARY_DECAY_TOLERANCE * peak {
        Some(format!("signal has not decayed at the grid boundary (|f| = {edge:.3e})"))
    } else {
        None
    };
    Ok(PvHilbert { signal: Signal::new(grid, samples)?, warning })
}

/// One checker outcome; serialises as `checker,param,value,pass`.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub checker: String,
    pub param: String,
    pub value: f64,
    pub pass: bool,
}

impl CheckReport {
    pub fn csv_row(&self) -> String {
        format!("{},{},{:.12e},{}", self.checker, self.param, self.value, self.pass)
    }
}

/// Header plus one row per report.
pub fn reports_to_csv(reports: &[CheckReport]) -> String {
    let mut s = String::from("checker,param,value,pass\n");
    for r in reports {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

/// Relative slack of the Mikhlin comparison.
pub const MIKHLIN_SLACK: f64 = 1e-6;

/// `max |x m'(x)|` over the probe grid against `B`.
pub fn check_mikhlin(m: &MultiplierFn, b: f64, probe_grid: &UniformGrid) -> CheckReport {
    let value = probe_grid.points().map(|x| (x * m.derivative_at(x)).norm()).fold(0.0, f64::max);
    CheckReport { checker: "mikhlin".into(), param: format!("B={b}"), value, pass: value <= b * (1.0 + MIKHLIN_SLACK) }
}

const CHECK_PANELS: usize = 512;

/// `int_a^b g` by composite Gauss-Legendre.
fn panel_quadrature<F: Fn(f64) -> f64>(g: F, a: f64, b: f64) -> f64 {
    let rule = GaussLegendre::new(16).expect("degree >= 2");
    let width = (b - a) / CHECK_PANELS as f64;
    (0..CHECK_PANELS)
        .map(|k| {
            let lo = a + k as f64 * width;
            rule.integrate(lo, lo + width, &g)
        })
        .sum()
}

/// `sqrt(max_R R int_{R < |x| < 2R} |m'|^2 dx)`, compared with `bound` when one is given.
pub fn check_hormander(m: &MultiplierFn, r_set: &[f64], bound: Option<f64>) -> CheckReport {
    let d2 = |x: f64| m.derivative_at(x).norm_sqr();
    let worst = r_set
        .iter()
        .filter(|r| **r > 0.0)
        .map(|&r| r * (panel_quadrature(d2, r, 2.0 * r) + panel_quadrature(d2, -2.0 * r, -r)))
        .fold(0.0, f64::max);
    let value = worst.sqrt();
    CheckReport {
        checker: "hormander".into(),
        param: format!("R={}", join(r_set)),
        value,
        pass: value.is_finite() && bound.is_none_or(|b| value <= b * (1.0 + MIKHLIN_SLACK)),
    }
}

/// Largest `int_I |m'|` over `I = +-[2^j, 2^{j+1}]`, `j_min <= j <= j_max`.
pub fn check_marcinkiewicz(m: &MultiplierFn, j_min: i32, j_max: i32, bound: Option<f64>) -> Result<CheckReport> {
    if j_min > j_max {
        return Err(FrftError::InvalidParameter(format!("j_min {j_min} > j_max {j_max}")));
    }
    let d = |x: f64| m.derivative_at(x).norm();
    let value = (j_min..=j_max)
        .flat_map(|j| {
            let a = 2f64.powi(j);
            [panel_quadrature(d, a, 2.0 * a), panel_quadrature(d, -2.0 * a, -a)]
        })
        .fold(0.0, f64::max);
    Ok(CheckReport {
        checker: "marcinkiewicz".into(),
        param: format!("j={j_min}..{j_max}"),
        value,
        pass: value.is_finite() && bound.is_none_or(|b| value <= b * (1.0 + MIKHLIN_SLACK)),
    })
}

/// Raw Bernstein quantities: `||m||_2`, `||m'||_2` and their product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernsteinNorms {
    pub l2_m: f64,
    pub l2_mprime: f64,
    pub bound: f64,
}

/// Trapezoid L2 norms of `m` and `m'` on `grid`.
pub fn bernstein_norms(m: &MultiplierFn, grid: &UniformGrid) -> BernsteinNorms {
    let mut sm = 0.0;
    let mut sd = 0.0;
    for (i, x) in grid.points().enumerate() {
        let w = grid.weight(i);
        sm += w * m.eval(x).norm_sqr();
        sd += w * m.derivative_at(x).norm_sqr();
    }
    let (l2_m, l2_mprime) = (sm.sqrt(), sd.sqrt());
    BernsteinNorms { l2_m, l2_mprime, bound: l2_m * l2_mprime }
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}

/// `S f` with `F_a(S f) = chi_band F_a f`, endpoints weighted 1/2.
pub fn partial_sum_mult(f: &Signal, band: Band, alpha: f64) -> Result<Signal> {
    if !(band.lo < band.hi) {
        return Err(FrftError::InvalidParameter(format!("empty interval [{}, {}]", band.lo, band.hi)));
    }
    let freq = multiplier_frequency_grid(f.grid(), alpha)?;
    apply_multiplier(&MultiplierFn::indicator(band.lo, band.hi), alpha, f, &freq)
}

/// `(i/2) [e_a H_a(e_{-a} f) - e_b H_a(e_{-b} f)]` with `e_c(t) = exp(2 pi i c t)`.
///
/// The result is the partial sum over `[a sin a, b sin a]` in the transform
/// variable. It matches [`partial_sum_mult`] to rounding when `a` and `b` are
/// multiples of the step of [`multiplier_frequency_grid`] in `y = x csc a`.
pub fn partial_sum_hilbert(f: &Signal, a: f64, b: f64, alpha: f64) -> Result<Signal> {
    let freq = multiplier_frequency_grid(f.grid(), alpha)?;
    let h = MultiplierFn::hilbert(alpha);
    let shifted = |c: f64| -> Result<Signal> {
        let down = f.map(|t, z| z * cis_turns(-c * t))?;
        let filtered = apply_multiplier(&h, alpha, &down, &freq)?;
        filtered.map(|t, z| z * cis_turns(c * t))
    };
    let (ha, hb) = rayon::join(|| shifted(a), || shifted(b));
    let diff = ha?.sub(&hb?)?;
    Ok(diff.scale(Complex64::new(0.0, 0.5)))
}

/// Dyadic blocks of both signs for `j_min <= j <= j_max`, ordered by sign then `j`.
pub fn dyadic_family(alpha: f64, j_min: i32, j_max: i32) -> Result<Vec<DyadicIntervalAlpha>> {
    if j_min > j_max {
        return Err(FrftError::InvalidParameter(format!("j_min {j_min} > j_max {j_max}")));
    }
    let mut out = Vec::new();
    for sign in [-1i8, 1] {
        for j in j_min..=j_max {
            out.push(DyadicIntervalAlpha::new(j, sign, alpha)?);
        }
    }
    Ok(out)
}

/// The blocks `S_I f` for every band, sharing one forward transform.
pub fn partial_sums(f: &Signal, bands: &[Band], alpha: f64) -> Result<Vec<Signal>> {
    if let Some(b) = bands.iter().find(|b| !(b.lo < b.hi)) {
        return Err(FrftError::InvalidParameter(format!("empty interval [{}, {}]", b.lo, b.hi)));
    }
    let freq = multiplier_frequency_grid(f.grid(), alpha)?;
    let spectrum = Spectrum::new(f, alpha, &freq)?;
    bands.par_iter().map(|b| spectrum.apply(&MultiplierFn::indicator(b.lo, b.hi))).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SquareFunction {
    pub square_fn: Signal,
    pub norm: f64,
    pub ratio: f64,
}

/// `(sum_I |S_I f|^2)^{1/2}` over the dyadic family, its L^p norm and `||.||_p / ||f||_p`.
pub fn lp_square_function(f: &Signal, alpha: f64, j_min: i32, j_max: i32, p: LpExponent) -> Result<SquareFunction> {
    if !(p.value() > 1.0 && p.value().is_finite()) {
        return Err(FrftError::InvalidExponent(p.value()));
    }
    let bands: Vec<Band> = dyadic_family(alpha, j_min, j_max)?.into_iter().map(Band::from).collect();
    let blocks = partial_sums(f, &bands, alpha)?;
    let mut acc = vec![0.0; f.len()];
    for block in &blocks {
        for (a, z) in acc.iter_mut().zip(block.samples()) {
            *a += z.norm_sqr();
        }
    }
    let square_fn = Signal::new(*f.grid(), acc.into_iter().map(|s| Complex64::new(s.sqrt(), 0.0)).collect())?;
    let norm = lp_norm(&square_fn, p);
    let base = lp_norm(f, p);
    let ratio = if base > 0.0 { norm / base } else { 0.0 };
    Ok(SquareFunction { square_fn, norm, ratio })
}
