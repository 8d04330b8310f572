//! Closed-form test signals and their transforms.
//!
//! * the staircase `sum_n n 1_[n, n + 1/n^3)`: integrable, not square integrable;
//! * the one-sided exponential chirp `exp(-pi (2t + i t^2 cot a)) 1_{t >= 0}`,
//!   integrable with a non-integrable transform;
//! * the chirp `u(t) = exp(-i pi t^2) r(|t|)` with `r(s) = s^{-1/2}` on `(0, 1)`
//!   and `s^{-2}` beyond, whose order `pi/4` transform has a closed form in
//!   Fresnel and sine integrals.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use crate::czt::cis_turns;
use crate::error::{FrftError, Result};
use crate::frft::{frft_direct_nodes, AngleContext, DEFAULT_DELTA_SING};
use crate::means::{poisson_kernel, weierstrass_kernel};
use crate::signal::{make_signal, Signal, UniformGrid};
use crate::special::{fresnel_c, fresnel_cos, sine_integral, SeriesSpec};

/// Points per panel of the Gauss-Legendre rules used by the oracles here.
const GL_POINTS: usize = 16;

fn gauss_legendre() -> GaussLegendre {
    GaussLegendre::new(GL_POINTS).expect("degree >= 2")
}

/// Appends the nodes and weights of `rule` mapped onto `[a, b]`.
fn push_panel(rule: &GaussLegendre, a: f64, b: f64, nodes: &mut Vec<f64>, weights: &mut Vec<f64>) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for (x, w) in rule.iter() {
        nodes.push(mid + half * x);
        weights.push(half * w);
    }
}

/// The sampled staircase and its reference masses.
#[derive(Debug, Clone, PartialEq)]
pub struct Staircase {
    pub signal: Signal,
    pub n_max: usize,
    /// `sum_{n <= n_max} 1/n^2`, the exact L1 norm of the truncation.
    pub l1_mass: f64,
    /// `sum_{n <= n_max} 1/n`, the exact squared L2 norm of the truncation.
    pub l2_mass_squared: f64,
    /// Largest `n` whose block is at least one grid step wide.
    pub n_resolve: usize,
}

/// `sum_{n <= n_max} n^{-power}`, smallest terms first.
pub fn harmonic_partial_sum(n_max: usize, power: i32) -> f64 {
    (1..=n_max).rev().map(|n| (n as f64).powi(-power)).sum()
}

/// `int_a^b` of the hat function centred at `c` with half width `h`.
fn hat_integral(a: f64, b: f64, c: f64, h: f64) -> f64 {
    let rise = |lo: f64, hi: f64| {
        // hat = 1 - (c - t)/h on [c - h, c]
        let lo = lo.max(c - h);
        let hi = hi.min(c);
        if hi <= lo {
            0.0
        } else {
            (hi - lo) * (1.0 - (c - 0.5 * (lo + hi)) / h)
        }
    };
    let fall = |lo: f64, hi: f64| {
        let lo = lo.max(c);
        let hi = hi.min(c + h);
        if hi <= lo {
            0.0
        } else {
            (hi - lo) * (1.0 - (0.5 * (lo + hi) - c) / h)
        }
    };
    rise(a, b) + fall(a, b)
}

/// Staircase truncated at `n_max`, projected onto the hat basis of `grid`.
///
/// Each block contributes its exact mass: node `i` receives
/// `n * int_block hat_i / w_i`, so the trapezoid integral of the samples equals
/// the integral of the truncated staircase whenever the grid covers `[1, n_max + 1]`.
/// Blocks narrower than a step are carried as mass on their neighbouring nodes.
pub fn staircase_signal(n_max: usize, grid: UniformGrid) -> Result<Staircase> {
    if n_max < 1 {
        return Err(FrftError::InvalidParameter("staircase needs n_max >= 1".into()));
    }
    if grid.count() < 2 {
        return Err(FrftError::InvalidGrid("staircase grid needs at least two nodes".into()));
    }
    let h = grid.step();
    let last = grid.count() - 1;
    let mut mass = vec![0.0; grid.count()];
    for n in 1..=n_max {
        let nf = n as f64;
        let a = nf;
        let b = nf + nf.powi(-3);
        let i0 = grid.index_of(a).floor().max(0.0) as usize;
        let i1 = (grid.index_of(b).ceil().max(0.0) as usize).min(last);
        for (i, m) in mass.iter_mut().enumerate().take(i1 + 1).skip(i0) {
            *m += nf * hat_integral(a, b, grid.point(i), h);
        }
    }
    let samples = mass.iter().enumerate().map(|(i, &m)| Complex64::new(m / grid.weight(i), 0.0)).collect();
    let n_resolve = (1..=n_max).take_while(|&n| (n as f64).powi(-3) >= h).last().unwrap_or(0);
    Ok(Staircase {
        signal: Signal::new(grid, samples)?,
        n_max,
        l1_mass: harmonic_partial_sum(n_max, 2),
        l2_mass_squared: harmonic_partial_sum(n_max, 1),
        n_resolve,
    })
}

/// `A e^{i pi x^2 cot a} / (2 pi i x) sum_{n <= n_terms} n e^{-2 n pi i x} (1 - e^{-2 pi i x / n^3})`.
///
/// This drops the input chirp and the `csc a` scaling of the frequency, so it
/// is the transform of the staircase only at `a = pi/2`.
pub fn staircase_frft_closed_form(x: f64, alpha: f64, n_terms: usize) -> Result<Complex64> {
    if x == 0.0 {
        return Err(FrftError::SingularPoint("staircase closed form at x = 0; use the limit".into()));
    }
    if n_terms < 1 {
        return Err(FrftError::InvalidParameter("n_terms must be >= 1".into()));
    }
    let ctx = AngleContext::new(alpha, DEFAULT_DELTA_SING)?;
    ctx.require_generic()?;
    let sum: Complex64 = (1..=n_terms)
        .map(|n| {
            let nf = n as f64;
            nf * cis_turns(-nf * x) * (Complex64::new(1.0, 0.0) - cis_turns(-x / nf.powi(3)))
        })
        .sum();
    Ok(ctx.a_alpha() * cis_turns(0.5 * x * x * ctx.cot()) * sum / Complex64::new(0.0, 2.0 * PI * x))
}

/// Transform of the staircase truncated at `n_terms`, by Gauss-Legendre
/// quadrature on every block (the direct-quadrature oracle).
pub fn staircase_frft_quadrature(out: &UniformGrid, alpha: f64, n_terms: usize) -> Result<Signal> {
    let ctx = AngleContext::new(alpha, DEFAULT_DELTA_SING)?;
    let rule = gauss_legendre();
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut heights = Vec::new();
    for n in 1..=n_terms {
        let nf = n as f64;
        let before = nodes.len();
        push_panel(&rule, nf, nf + nf.powi(-3), &mut nodes, &mut weights);
        heights.resize(heights.len() + nodes.len() - before, nf);
    }
    let masses: Vec<Complex64> = weights.iter().zip(&heights).map(|(w, h)| Complex64::new(w * h, 0.0)).collect();
    frft_direct_nodes(&nodes, &masses, &ctx, out)
}

/// One-sided exponential chirp of order `alpha` and its transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpChirp {
    ctx: AngleContext,
}

/// The exponential chirp pair for a generic order.
pub fn exp_chirp_pair(alpha: f64) -> Result<ExpChirp> {
    let ctx = AngleContext::new(alpha, DEFAULT_DELTA_SING)?;
    ctx.require_generic()?;
    Ok(ExpChirp { ctx })
}

impl ExpChirp {
    pub fn context(&self) -> &AngleContext {
        &self.ctx
    }

    /// `exp(-pi (2t + i t^2 cot a))` for `t >= 0`, zero before.
    pub fn signal(&self, t: f64) -> Complex64 {
        if t < 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            (-2.0 * PI * t).exp() * cis_turns(-0.5 * t * t * self.ctx.cot())
        }
    }

    pub fn sampled(&self, grid: UniformGrid) -> Result<Signal> {
        make_signal(grid, |t| self.signal(t))
    }

    /// `A e^{i pi x^2 cot a} / (2 pi (1 + i x csc a))`.
    pub fn transform(&self, x: f64) -> Complex64 {
        let den = Complex64::new(2.0 * PI, 2.0 * PI * x * self.ctx.csc());
        self.ctx.a_alpha() * cis_turns(0.5 * x * x * self.ctx.cot()) / den
    }

    /// `A e^{i pi x^2 cot a} / (2 pi (1 + i x))`; agrees with [`Self::transform`] only when `csc a = 1`.
    pub fn transform_without_csc(&self, x: f64) -> Complex64 {
        let den = Complex64::new(2.0 * PI, 2.0 * PI * x);
        self.ctx.a_alpha() * cis_turns(0.5 * x * x * self.ctx.cot()) / den
    }
}

/// The chirp `u`; singular at 0.
pub fn chirp_u(t: f64) -> Result<Complex64> {
    if t == 0.0 {
        return Err(FrftError::SingularPoint("chirp u is singular at t = 0".into()));
    }
    let s = t.abs();
    let r = if s < 1.0 { s.sqrt().recip() } else { s.powi(-2) };
    Ok(r * cis_turns(-0.5 * t * t))
}

/// Samples `u` on a grid that avoids the origin.
pub fn chirp_u_signal(grid: UniformGrid) -> Result<Signal> {
    let samples = grid.points().map(chirp_u).collect::<Result<Vec<_>>>()?;
    Signal::new(grid, samples)
}

/// Weighted node set for `int_{-t_max}^{t_max} u(t) phi(t) dt`.
///
/// On `|t| < 1` the substitution `t = v^2` removes the `t^{-1/2}` singularity;
/// everything is Gauss-Legendre on panels of width `panel`.
pub fn chirp_u_rule(t_max: f64, panel: f64) -> Result<(Vec<f64>, Vec<Complex64>)> {
    if !(t_max >= 1.0) || !(panel > 0.0) {
        return Err(FrftError::InvalidParameter("chirp u rule needs t_max >= 1 and panel > 0".into()));
    }
    let rule = gauss_legendre();
    let mut v = Vec::new();
    let mut wv = Vec::new();
    let inner = (1.0 / panel).ceil() as usize;
    for k in 0..inner {
        push_panel(&rule, k as f64 / inner as f64, (k + 1) as f64 / inner as f64, &mut v, &mut wv);
    }
    let mut t = Vec::new();
    let mut wt = Vec::new();
    let outer = ((t_max - 1.0) / panel).ceil() as usize;
    let width = (t_max - 1.0) / outer.max(1) as f64;
    for k in 0..outer {
        push_panel(&rule, 1.0 + k as f64 * width, 1.0 + (k + 1) as f64 * width, &mut t, &mut wt);
    }
    let mut nodes = Vec::with_capacity(2 * (v.len() + t.len()));
    let mut masses = Vec::with_capacity(nodes.capacity());
    for sign in [-1.0, 1.0] {
        for (&vi, &wi) in v.iter().zip(&wv) {
            let ti = vi * vi;
            nodes.push(sign * ti);
            masses.push(2.0 * wi * cis_turns(-0.5 * ti * ti));
        }
        for (&ti, &wi) in t.iter().zip(&wt) {
            nodes.push(sign * ti);
            masses.push(wi * chirp_u(ti)?);
        }
    }
    Ok((nodes, masses))
}

/// Order `pi/4` transform of `u` truncated to `|t| <= t_max`, by direct quadrature
/// on [`chirp_u_rule`].
pub fn chirp_u_frft_oracle(out: &UniformGrid, t_max: f64) -> Result<Signal> {
    let ctx = AngleContext::new(FRAC_PI_4, DEFAULT_DELTA_SING)?;
    let panel = (0.125 / (1.0 + out.half_width())).min(0.25);
    let (nodes, masses) = chirp_u_rule(t_max, panel)?;
    frft_direct_nodes(&nodes, &masses, &ctx, out)
}

/// Which Fresnel function fills the first term of [`chirp_u_frft`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FresnelVariant {
    /// `int_0^x sin t^2 dt`.
    Sine,
    /// `int_0^x cos t^2 dt`, the function whose Maclaurin series is
    /// `sum (-1)^n x^(4n+1) / ((2n)! (4n+1))`.
    Cosine,
}

fn fresnel(variant: FresnelVariant, x: f64, spec: &SeriesSpec) -> Result<f64> {
    match variant {
        FresnelVariant::Sine => fresnel_c(x, spec),
        FresnelVariant::Cosine => fresnel_cos(x, spec),
    }
}

/// The published closed form
/// `2 e^{i pi w^2} (C(2^{5/4} sqrt|w|) / (2^{1/4} sqrt|w|) - sqrt2 pi^2 |w| + 2 sqrt2 pi w Si(2 sqrt2 pi w) + cos(2 sqrt2 pi w))`.
///
/// It does not match the transform of `u`; see [`chirp_u_frft_derived`].
pub fn chirp_u_frft(w: f64, spec: &SeriesSpec, variant: FresnelVariant) -> Result<Complex64> {
    if w == 0.0 {
        return Err(FrftError::SingularPoint("closed form has sqrt|w| in a denominator".into()));
    }
    let a = w.abs();
    let k = 2.0 * SQRT_2 * PI * w;
    let c = fresnel(variant, 2f64.powf(1.25) * a.sqrt(), spec)?;
    let bracket = c / (2f64.powf(0.25) * a.sqrt()) - SQRT_2 * PI * PI * a + k * sine_integral(k, spec)? + k.cos();
    Ok(2.0 * bracket * cis_turns(0.5 * w * w))
}

/// Order `pi/4` transform of `u`:
/// `A e^{i pi w^2} 2 (2 Cc(sqrt k) / sqrt k + cos k - k pi / 2 + k Si(k))`
/// with `k = 2 sqrt2 pi |w|` and `Cc(x) = int_0^x cos t^2 dt`. Continuous at `w = 0` with value `6 A`.
pub fn chirp_u_frft_derived(w: f64, spec: &SeriesSpec) -> Result<Complex64> {
    let a_alpha = AngleContext::new(FRAC_PI_4, DEFAULT_DELTA_SING)?.a_alpha();
    let k = 2.0 * SQRT_2 * PI * w.abs();
    let bracket = if k == 0.0 {
        3.0
    } else {
        let rk = k.sqrt();
        2.0 * fresnel_cos(rk, spec)? / rk + k.cos() - k * FRAC_PI_2 + k * sine_integral(k, spec)?
    };
    Ok(a_alpha * cis_turns(0.5 * w * w) * (2.0 * bracket))
}

/// Agreement of one closed form with the quadrature oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormReport {
    pub label: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
    pub agrees: bool,
}

/// Compares the published form (both Fresnel readings) and the derived form
/// against [`chirp_u_frft_oracle`] on the nodes of `w_grid`, skipping `w = 0`.
pub fn chirp_u_discrepancy_report(w_grid: &UniformGrid, t_max: f64, tolerance: f64) -> Result<Vec<ClosedFormReport>> {
    let spec = SeriesSpec::default();
    let oracle = chirp_u_frft_oracle(w_grid, t_max)?;
    let points: Vec<(f64, Complex64)> =
        w_grid.points().zip(oracle.samples().iter().copied()).filter(|(w, _)| *w != 0.0).collect();
    let mut reports = Vec::new();
    let mut push = |label: &'static str, f: &dyn Fn(f64) -> Result<Complex64>| -> Result<()> {
        let mut max_error: f64 = 0.0;
        for &(w, o) in &points {
            max_error = max_error.max((f(w)? - o).norm());
        }
        reports.push(ClosedFormReport { label, max_error, tolerance, agrees: max_error < tolerance });
        Ok(())
    };
    push("published, sine Fresnel", &|w| chirp_u_frft(w, &spec, FresnelVariant::Sine))?;
    push("published, cosine Fresnel", &|w| chirp_u_frft(w, &spec, FresnelVariant::Cosine))?;
    push("derived", &|w| chirp_u_frft_derived(w, &spec))?;
    Ok(reports)
}

pub fn gaussian(grid: UniformGrid) -> Result<Signal> {
    make_signal(grid, |t| Complex64::new((-PI * t * t).exp(), 0.0))
}

/// Signals addressable by name from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Asset {
    Staircase,
    ExpChirp,
    ChirpU,
    Gaussian,
    Poisson,
    Weierstrass,
}

impl Asset {
    pub const ALL: [Asset; 6] =
        [Asset::Staircase, Asset::ExpChirp, Asset::ChirpU, Asset::Gaussian, Asset::Poisson, Asset::Weierstrass];

    pub fn name(&self) -> &'static str {
        match self {
            Asset::Staircase => "staircase",
            Asset::ExpChirp => "expchirp",
            Asset::ChirpU => "chirp-u",
            Asset::Gaussian => "gaussian",
            Asset::Poisson => "poisson",
            Asset::Weierstrass => "weierstrass",
        }
    }

    /// Samples the asset. `alpha` is the chirp order of `expchirp`, `eps` the
    /// kernel parameter of `poisson` and `weierstrass`; `staircase` is truncated
    /// at the last block that fits on the grid.
    pub fn sample(&self, grid: UniformGrid, alpha: f64, eps: f64) -> Result<Signal> {
        match self {
            Asset::Staircase => {
                let n_max = (grid.end() - 1.0).floor();
                if n_max < 1.0 {
                    return Err(FrftError::InvalidGrid("staircase grid must reach past t = 2".into()));
                }
                Ok(staircase_signal(n_max as usize, grid)?.signal)
            }
            Asset::ExpChirp => exp_chirp_pair(alpha)?.sampled(grid),
            Asset::ChirpU => chirp_u_signal(grid),
            Asset::Gaussian => gaussian(grid),
            Asset::Poisson => Ok(poisson_kernel(eps, grid)?.signal),
            Asset::Weierstrass => Ok(weierstrass_kernel(eps, grid)?.signal),
        }
    }
}

impl fmt::Display for Asset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Asset {
    type Err = FrftError;

    fn from_str(s: &str) -> Result<Self> {
        Asset::ALL
            .iter()
            .copied()
            .find(|a| a.name() == s)
            .ok_or_else(|| FrftError::Parse(format!("unknown asset '{s}'")))
    }
}
