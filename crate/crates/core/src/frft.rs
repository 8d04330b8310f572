//! The fractional Fourier transform of order `alpha`.
//!
//! For `alpha` away from multiples of pi the transform is the integral
//! `F_a f(x) = int K_a(x, t) f(t) dt` with
//! `K_a(x, t) = A_a exp(2 pi i ((x^2 + t^2)/2 cot a - x t csc a))` and
//! `A_a = sqrt(1 - i cot a)` (principal root). Two evaluation routes exist:
//! a direct O(N M) trapezoid quadrature, used as the oracle, and a fast route
//! that multiplies by a chirp, evaluates the Fourier sum at `x csc a` with a
//! chirp-z transform, then multiplies by the output chirp and `A_a`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::czt::{chirp_z, cis_turns};
use crate::error::{FrftError, Result};
use crate::signal::{lp_norm, LpExponent, Signal, UniformGrid};

/// Default half width (radians) of the refusal zone around multiples of pi.
pub const DEFAULT_DELTA_SING: f64 = 1e-3;

/// Distance from a multiple of pi below which the order counts as exactly special.
pub const EXACT_ANGLE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleClass {
    Generic,
    Identity,
    Reflection,
    NearSingular,
}

/// The order reduced into `[0, 2 pi)` with its trigonometric coefficients.
///
/// For the exact classes the coefficients are NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleContext {
    alpha: f64,
    class: AngleClass,
    delta_sing: f64,
    cot_a: f64,
    csc_a: f64,
    a_alpha: Complex64,
}

impl AngleContext {
    pub fn new(alpha: f64, delta_sing: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(FrftError::InvalidParameter(format!("order must be finite, got {alpha}")));
        }
        if !(delta_sing > 0.0) {
            return Err(FrftError::InvalidParameter(format!("delta_sing must be > 0, got {delta_sing}")));
        }
        let mut reduced = alpha.rem_euclid(TAU);
        if reduced >= TAU {
            reduced = 0.0;
        }
        let to_zero = reduced.min(TAU - reduced);
        let to_pi = (reduced - PI).abs();
        let class = if to_zero <= EXACT_ANGLE_TOLERANCE {
            AngleClass::Identity
        } else if to_pi <= EXACT_ANGLE_TOLERANCE {
            AngleClass::Reflection
        } else if to_zero < delta_sing || to_pi < delta_sing {
            AngleClass::NearSingular
        } else {
            AngleClass::Generic
        };
        let (cot_a, csc_a, a_alpha) = match class {
            AngleClass::Identity | AngleClass::Reflection => (f64::NAN, f64::NAN, Complex64::new(f64::NAN, f64::NAN)),
            _ => {
                let (s, c) = reduced.sin_cos();
                let cot = c / s;
                (cot, 1.0 / s, Complex64::new(1.0, -cot).sqrt())
            }
        };
        Ok(Self { alpha: reduced, class, delta_sing, cot_a, csc_a, a_alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn class(&self) -> AngleClass {
        self.class
    }

    pub fn delta_sing(&self) -> f64 {
        self.delta_sing
    }

    pub fn cot(&self) -> f64 {
        self.cot_a
    }

    pub fn csc(&self) -> f64 {
        self.csc_a
    }

    pub fn a_alpha(&self) -> Complex64 {
        self.a_alpha
    }

    pub fn is_generic(&self) -> bool {
        self.class == AngleClass::Generic
    }

    pub(crate) fn require_generic(&self) -> Result<()> {
        match self.class {
            AngleClass::Generic => Ok(()),
            AngleClass::NearSingular => Err(FrftError::NearSingular { alpha: self.alpha, delta_sing: self.delta_sing }),
            c => Err(FrftError::KernelUndefined(c)),
        }
    }
}

/// Classifies `alpha` and caches `cot`, `csc` and `A_alpha`.
pub fn angle_context(alpha: f64, delta_sing: f64) -> Result<AngleContext> {
    AngleContext::new(alpha, delta_sing)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrftMethod {
    DirectQuadrature,
    FastChirp,
}

/// Caller-declared bandwidth used by the oscillation precondition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    /// Bandwidth of the input itself; the kernel chirp `T |cot a|` is added on top.
    Signal(f64),
    /// Bandwidth of the chirp-multiplied input `exp(i pi t^2 cot a) f(t)`.
    /// Use this when the input carries a chirp that the kernel cancels.
    Demodulated(f64),
}

impl Default for Bandwidth {
    fn default() -> Self {
        Bandwidth::Signal(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrftOptions {
    pub delta_sing: f64,
    pub bandwidth: Bandwidth,
}

impl Default for FrftOptions {
    fn default() -> Self {
        Self { delta_sing: DEFAULT_DELTA_SING, bandwidth: Bandwidth::default() }
    }
}

impl FrftOptions {
    pub fn with_bandwidth(bandwidth: Bandwidth) -> Self {
        Self { bandwidth, ..Self::default() }
    }
}

/// `step * (B + X_max |csc a|)` with `B` the effective bandwidth of the integrand.
pub fn resolution_bound(input: &UniformGrid, ctx: &AngleContext, out: &UniformGrid, bandwidth: Bandwidth) -> f64 {
    let effective = match bandwidth {
        Bandwidth::Signal(b) => b.abs() + input.half_width() * ctx.cot().abs(),
        Bandwidth::Demodulated(b) => b.abs(),
    };
    input.step() * (effective + out.half_width() * ctx.csc().abs())
}

fn check_resolution(input: &UniformGrid, ctx: &AngleContext, out: &UniformGrid, bandwidth: Bandwidth) -> Result<()> {
    let bound = resolution_bound(input, ctx, out, bandwidth);
    if bound < 0.5 {
        Ok(())
    } else {
        Err(FrftError::AliasingRisk { bound })
    }
}

/// Kernel phase in turns; symmetric in `(x, t)` bit for bit.
#[inline]
fn kernel_turns(ctx: &AngleContext, x: f64, t: f64) -> f64 {
    0.5 * (x * x + t * t) * ctx.cot_a - x * t * ctx.csc_a
}

/// `K_a(x, t)`; only defined for generic orders.
pub fn kernel_value(ctx: &AngleContext, x: f64, t: f64) -> Result<Complex64> {
    ctx.require_generic()?;
    Ok(ctx.a_alpha * cis_turns(kernel_turns(ctx, x, t)))
}

/// Multiplies by `exp(sign * i pi t^2 cot a)`.
pub fn chirp_multiply(f: &Signal, ctx: &AngleContext, sign: i8) -> Result<Signal> {
    match ctx.class {
        AngleClass::Generic | AngleClass::NearSingular => {}
        c => return Err(FrftError::KernelUndefined(c)),
    }
    let rate = 0.5 * sign.signum() as f64 * ctx.cot_a;
    f.map(|t, z| z * cis_turns(rate * t * t))
}

/// Direct trapezoid quadrature of the transform integral at every output point.
pub fn frft_direct(f: &Signal, ctx: &AngleContext, out: &UniformGrid, bandwidth: Bandwidth) -> Result<Signal> {
    ctx.require_generic()?;
    check_resolution(f.grid(), ctx, out, bandwidth)?;
    let grid = *f.grid();
    let masses: Vec<Complex64> = f.samples().iter().enumerate().map(|(i, z)| z * grid.weight(i)).collect();
    let nodes: Vec<f64> = grid.points().collect();
    frft_direct_nodes(&nodes, &masses, ctx, out)
}

/// Direct transform of a weighted node set: `F(x) = sum_j K(x, t_j) m_j`.
///
/// `masses` are quadrature weight times sample value, so any rule (graded,
/// substituted, Gauss) can feed it. No resolution check is made.
pub fn frft_direct_nodes(nodes: &[f64], masses: &[Complex64], ctx: &AngleContext, out: &UniformGrid) -> Result<Signal> {
    ctx.require_generic()?;
    if nodes.len() != masses.len() {
        return Err(FrftError::InvalidParameter("nodes and masses differ in length".into()));
    }
    let samples: Vec<Complex64> = (0..out.count())
        .into_par_iter()
        .map(|k| {
            let x = out.point(k);
            let s: Complex64 = nodes.iter().zip(masses).map(|(&t, m)| m * cis_turns(kernel_turns(ctx, x, t))).sum();
            ctx.a_alpha * s
        })
        .collect();
    Signal::new(*out, samples)
}

/// Chirp multiply, chirp-z Fourier evaluation at `x csc a`, chirp multiply, scale.
pub fn frft_fast(f: &Signal, ctx: &AngleContext, out: &UniformGrid, bandwidth: Bandwidth) -> Result<Signal> {
    ctx.require_generic()?;
    check_resolution(f.grid(), ctx, out, bandwidth)?;
    let grid = *f.grid();
    let half_cot = 0.5 * ctx.cot_a;
    let g: Vec<Complex64> = f
        .samples()
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let t = grid.point(i);
            z * grid.weight(i) * cis_turns(half_cot * t * t)
        })
        .collect();
    let spectrum = chirp_z(&g, grid.start(), grid.step(), out.start() * ctx.csc_a, out.step() * ctx.csc_a, out.count());
    let samples = spectrum
        .into_iter()
        .enumerate()
        .map(|(k, v)| {
            let x = out.point(k);
            ctx.a_alpha * cis_turns(half_cot * x * x) * v
        })
        .collect();
    Signal::new(*out, samples)
}

/// Symmetric grid with the input's step and extent, the usual output grid.
pub fn default_output_grid(input: &UniformGrid) -> UniformGrid {
    UniformGrid::symmetric(input.half_width(), input.step()).expect("input grid is valid")
}

pub fn frft(f: &Signal, alpha: f64, out: &UniformGrid, method: FrftMethod) -> Result<Signal> {
    frft_with(f, alpha, out, method, &FrftOptions::default())
}

/// Transform with the full case split: identity, reflection, refusal near the
/// singular orders, otherwise the chosen quadrature route.
pub fn frft_with(f: &Signal, alpha: f64, out: &UniformGrid, method: FrftMethod, opts: &FrftOptions) -> Result<Signal> {
    let ctx = AngleContext::new(alpha, opts.delta_sing)?;
    match ctx.class {
        AngleClass::Identity => Ok(f.resample(out)),
        AngleClass::Reflection => Ok(f.reflected().resample(out)),
        AngleClass::NearSingular => Err(FrftError::NearSingular { alpha: ctx.alpha, delta_sing: ctx.delta_sing }),
        AngleClass::Generic => match method {
            FrftMethod::DirectQuadrature => frft_direct(f, &ctx, out, opts.bandwidth),
            FrftMethod::FastChirp => frft_fast(f, &ctx, out, opts.bandwidth),
        },
    }
}

/// Inversion by order negation.
pub fn inverse_frft(f: &Signal, alpha: f64, out: &UniformGrid, method: FrftMethod) -> Result<Signal> {
    frft_with(f, -alpha, out, method, &FrftOptions::default())
}

pub fn inverse_frft_with(
    f: &Signal,
    alpha: f64,
    out: &UniformGrid,
    method: FrftMethod,
    opts: &FrftOptions,
) -> Result<Signal> {
    frft_with(f, -alpha, out, method, opts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HausdorffYoung {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

/// Relative slack allowed on the Hausdorff-Young comparison.
pub const HAUSDORFF_YOUNG_SLACK: f64 = 1e-3;

/// `||F_a f||_{p'}` against `|A_a|^{2/p - 1} ||f||_p` for `1 <= p <= 2`,
/// transform on the default output grid.
pub fn hausdorff_young_check(f: &Signal, alpha: f64, p: LpExponent) -> Result<HausdorffYoung> {
    let out = default_output_grid(f.grid());
    hausdorff_young_check_with(f, alpha, p, &out, &FrftOptions::default())
}

pub fn hausdorff_young_check_with(
    f: &Signal,
    alpha: f64,
    p: LpExponent,
    out: &UniformGrid,
    opts: &FrftOptions,
) -> Result<HausdorffYoung> {
    if p.value() > 2.0 {
        return Err(FrftError::InvalidExponent(p.value()));
    }
    let ctx = AngleContext::new(alpha, opts.delta_sing)?;
    ctx.require_generic()?;
    let transformed = frft_fast(f, &ctx, out, opts.bandwidth)?;
    let lhs = lp_norm(&transformed, p.dual());
    let exponent = 2.0 / p.value() - 1.0;
    let rhs = ctx.a_alpha.norm().powf(exponent) * lp_norm(f, p);
    Ok(HausdorffYoung { lhs, rhs, satisfied: lhs <= rhs * (1.0 + HAUSDORFF_YOUNG_SLACK) })
}
