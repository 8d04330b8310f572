//! Fractional convolution, summability kernels and the damped inversion means.
//!
//! With `M_a` the chirp `exp(i pi t^2 cot a)`, the fractional convolution is
//! `f *_a g = M_{-a}(M_a f * g)`. The mean of the inverse integral
//! `int F_a f(x) K_{-a}(x, t) Phi(eps x csc a) dx` equals `f *_a phi_eps`
//! where `phi` is the inverse Fourier transform of `Phi`: the Poisson kernel
//! for Abel means and the Weierstrass kernel at heat parameter `eps^2` for
//! Gauss means. Both sides are computable here, which gives a two-path check.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::czt::{cis_turns, linear_convolve};
use crate::error::{FrftError, Result};
use crate::frft::{frft_fast, AngleClass, AngleContext, Bandwidth, DEFAULT_DELTA_SING};
use crate::io::write_signal_file;
use crate::signal::{integral, lp_norm, make_signal, LpExponent, Signal, UniformGrid};

/// Pointwise damping profile `Phi` with `Phi(0) = 1`.
pub type PhiFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Damping below which the frequency integral of a mean is truncated.
pub const DAMPING_FLOOR: f64 = 1e-8;

/// Tolerated deviation of a kernel's mass from 1 before a warning is attached.
pub const MASS_TOLERANCE: f64 = 1e-3;

#[derive(Clone)]
pub enum MeanKind {
    /// `Phi(y) = exp(-2 pi |y|)`, kernel `P_eps`.
    Abel,
    /// `Phi(y) = exp(-4 pi^2 y^2)`, kernel `W_{eps^2}`.
    Gauss,
    CustomPhi(PhiFn),
}

impl fmt::Debug for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeanKind::Abel => write!(f, "Abel"),
            MeanKind::Gauss => write!(f, "Gauss"),
            MeanKind::CustomPhi(_) => write!(f, "CustomPhi"),
        }
    }
}

impl MeanKind {
    pub fn phi(&self, y: f64) -> Complex64 {
        match self {
            MeanKind::Abel => Complex64::new((-2.0 * PI * y.abs()).exp(), 0.0),
            MeanKind::Gauss => Complex64::new((-4.0 * PI * PI * y * y).exp(), 0.0),
            MeanKind::CustomPhi(phi) => phi(y),
        }
    }

    /// `|y|` beyond which `|Phi(y)| < DAMPING_FLOOR`, when known.
    fn decay_extent(&self) -> Option<f64> {
        let l = (1.0 / DAMPING_FLOOR).ln();
        match self {
            MeanKind::Abel => Some(l / (2.0 * PI)),
            MeanKind::Gauss => Some(l.sqrt() / (2.0 * PI)),
            MeanKind::CustomPhi(_) => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MeanSpec {
    kind: MeanKind,
    epsilon: f64,
}

impl MeanSpec {
    pub fn new(kind: MeanKind, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(FrftError::InvalidParameter(format!("epsilon must be > 0, got {epsilon}")));
        }
        if let MeanKind::CustomPhi(phi) = &kind {
            let at_zero = phi(0.0);
            if (at_zero - Complex64::new(1.0, 0.0)).norm() >= 1e-12 {
                return Err(FrftError::InvalidParameter(format!("Phi(0) must be 1, got {at_zero}")));
            }
        }
        Ok(Self { kind, epsilon })
    }

    pub fn abel(epsilon: f64) -> Result<Self> {
        Self::new(MeanKind::Abel, epsilon)
    }

    pub fn gauss(epsilon: f64) -> Result<Self> {
        Self::new(MeanKind::Gauss, epsilon)
    }

    pub fn kind(&self) -> &MeanKind {
        &self.kind
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Parameter of the matching heat or Poisson semigroup: `eps^2` for Gauss, `eps` otherwise.
    pub fn kernel_parameter(&self) -> f64 {
        match self.kind {
            MeanKind::Gauss => self.epsilon * self.epsilon,
            _ => self.epsilon,
        }
    }

    /// `Phi(eps x csc a)`.
    pub fn damping(&self, ctx: &AngleContext, x: f64) -> Complex64 {
        self.kind.phi(self.epsilon * x * ctx.csc())
    }
}

/// Strictly decreasing positive smoothing parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSchedule(Vec<f64>);

impl EpsilonSchedule {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(FrftError::EmptySchedule);
        }
        if values.iter().any(|&e| !(e > 0.0) || !e.is_finite()) {
            return Err(FrftError::InvalidParameter("epsilon values must be finite and > 0".into()));
        }
        if values.windows(2).any(|w| w[1] >= w[0]) {
            return Err(FrftError::InvalidParameter("epsilon schedule must be strictly decreasing".into()));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

impl Default for EpsilonSchedule {
    fn default() -> Self {
        Self(vec![1.0, 0.1, 0.01])
    }
}

/// `phi_eps(t) = phi(t / eps) / eps` on `phi`'s grid, by linear interpolation.
pub fn dilate(phi: &Signal, eps: f64) -> Result<Signal> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(FrftError::InvalidParameter(format!("dilation eps must be > 0, got {eps}")));
    }
    if eps == 1.0 {
        return Ok(phi.clone());
    }
    make_signal(*phi.grid(), |t| phi.interpolate(t / eps) / eps)
}

/// Offset of `g`'s first node from the origin in whole steps of `f`'s grid.
fn aligned_offset(f: &UniformGrid, g: &UniformGrid) -> Result<i64> {
    let h = f.step();
    if (g.step() - h).abs() > 1e-9 * h {
        return Err(FrftError::GridMismatch(format!("steps differ: {} vs {}", h, g.step())));
    }
    let s = g.start() / h;
    let r = s.round();
    if (s - r).abs() > 1e-6 {
        return Err(FrftError::GridMismatch(format!(
            "kernel grid start {} is not a multiple of the step {h}",
            g.start()
        )));
    }
    Ok(r as i64)
}

/// `(f *_a g)(x_k) = exp(-i pi x_k^2 cot a) sum_i w_i exp(i pi t_i^2 cot a) f(t_i) g(x_k - t_i)`
/// on `f`'s grid. `g` must share the step and have its nodes on multiples of it.
///
/// For the exact orders `0` and `pi` the chirp is dropped and this is an
/// ordinary convolution.
pub fn frac_convolve(f: &Signal, g: &Signal, alpha: f64) -> Result<Signal> {
    let ctx = AngleContext::new(alpha, DEFAULT_DELTA_SING)?;
    let cot = match ctx.class() {
        AngleClass::Generic => ctx.cot(),
        AngleClass::Identity | AngleClass::Reflection => 0.0,
        AngleClass::NearSingular => {
            return Err(FrftError::NearSingular { alpha: ctx.alpha(), delta_sing: ctx.delta_sing() })
        }
    };
    let grid = *f.grid();
    let s = aligned_offset(&grid, g.grid())?;
    let half_cot = 0.5 * cot;
    let a: Vec<Complex64> = f
        .samples()
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let t = grid.point(i);
            z * grid.weight(i) * cis_turns(half_cot * t * t)
        })
        .collect();
    let c = linear_convolve(&a, g.samples());
    let samples = (0..grid.count())
        .map(|k| {
            let idx = k as i64 - s;
            let v = if idx >= 0 && (idx as usize) < c.len() { c[idx as usize] } else { Complex64::new(0.0, 0.0) };
            let x = grid.point(k);
            v * cis_turns(-half_cot * x * x)
        })
        .collect();
    Signal::new(grid, samples)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxIdentityError {
    pub error: f64,
    /// Quadrature mass of the undilated kernel.
    pub mass: f64,
    pub warning: Option<String>,
}

/// `||f *_a phi_eps - f||_p`.
pub fn approx_identity_error(
    f: &Signal,
    phi: &Signal,
    alpha: f64,
    eps: f64,
    p: LpExponent,
) -> Result<ApproxIdentityError> {
    let mass_c = integral(phi);
    let mass = mass_c.re;
    let warning = if (mass_c - Complex64::new(1.0, 0.0)).norm() > MASS_TOLERANCE {
        Some(format!("kernel mass {mass:.6} differs from 1 by more than {MASS_TOLERANCE}"))
    } else {
        None
    };
    let phi_eps = dilate(phi, eps)?;
    let conv = frac_convolve(f, &phi_eps, alpha)?;
    let error = lp_norm(&conv.sub(f)?, p);
    Ok(ApproxIdentityError { error, mass, warning })
}

/// A sampled summability kernel with its quadrature mass and the mass lying outside the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    pub signal: Signal,
    pub mass: f64,
    pub tail_mass: f64,
}

fn require_positive(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(FrftError::InvalidParameter(format!("kernel parameter must be > 0, got {eps}")))
    }
}

/// `P_eps(x) = eps / (pi (eps^2 + x^2))`.
pub fn poisson_kernel(eps: f64, grid: UniformGrid) -> Result<Kernel> {
    require_positive(eps)?;
    let signal = make_signal(grid, |x| Complex64::new(eps / (PI * (eps * eps + x * x)), 0.0))?;
    let inside = ((grid.end() / eps).atan() - (grid.start() / eps).atan()) / PI;
    let mass = integral(&signal).re;
    Ok(Kernel { signal, mass, tail_mass: 1.0 - inside })
}

/// `W_eps(x) = (4 pi eps)^{-1/2} exp(-x^2 / (4 eps))`.
pub fn weierstrass_kernel(eps: f64, grid: UniformGrid) -> Result<Kernel> {
    require_positive(eps)?;
    let c = (4.0 * PI * eps).sqrt().recip();
    let signal = make_signal(grid, |x| Complex64::new(c * (-x * x / (4.0 * eps)).exp(), 0.0))?;
    let s = 2.0 * eps.sqrt();
    let inside = 0.5 * (libm::erf(grid.end() / s) - libm::erf(grid.start() / s));
    let mass = integral(&signal).re;
    Ok(Kernel { signal, mass, tail_mass: 1.0 - inside })
}

/// Frequency grid for a mean: wide enough that the damping has fallen below
/// [`DAMPING_FLOOR`], capped where the input grid stops resolving the forward
/// transform, and fine enough for the inverse to reach every output point.
fn mean_frequency_grid(
    input: &UniformGrid,
    out: &UniformGrid,
    ctx: &AngleContext,
    spec: &MeanSpec,
) -> Result<UniformGrid> {
    let csc = ctx.csc().abs();
    let resolved = 0.45 / (input.step() * csc);
    let decay = spec.kind.decay_extent().map(|y| y / (spec.epsilon * csc)).unwrap_or(f64::INFINITY);
    let span = input.half_width() + out.half_width();
    let extent = resolved.min(decay);
    let step = (0.25 / (span.max(input.step()) * csc)).min(extent / 256.0);
    UniformGrid::symmetric(extent, step)
}

/// Damped inverse of the forward transform of `f`, evaluated on `out`.
pub fn phi_mean(f: &Signal, spec: &MeanSpec, alpha: f64, out: &UniformGrid) -> Result<Signal> {
    let ctx = AngleContext::new(alpha, DEFAULT_DELTA_SING)?;
    ctx.require_generic()?;
    let freq = mean_frequency_grid(f.grid(), out, &ctx, spec)?;
    let forward = frft_fast(f, &ctx, &freq, Bandwidth::Demodulated(0.0))?;
    damped_inverse(&forward, spec, &ctx, out, Bandwidth::Demodulated(f.grid().half_width() * ctx.csc().abs()))
}

fn damped_inverse(
    transformed: &Signal,
    spec: &MeanSpec,
    ctx: &AngleContext,
    out: &UniformGrid,
    bandwidth: Bandwidth,
) -> Result<Signal> {
    let damped = transformed.map(|x, z| z * spec.damping(ctx, x))?;
    let inverse = AngleContext::new(-ctx.alpha(), ctx.delta_sing())?;
    frft_fast(&damped, &inverse, out, bandwidth)
}

/// The same mean as [`phi_mean`], computed as `f *_a phi_eps` on `f`'s grid.
pub fn mean_via_convolution(f: &Signal, spec: &MeanSpec, alpha: f64) -> Result<Signal> {
    let grid = f.grid();
    let reach = (grid.count() - 1) as f64 * grid.step();
    let kernel_grid = UniformGrid::symmetric(reach, grid.step())?;
    let kernel = match spec.kind {
        MeanKind::Abel => poisson_kernel(spec.epsilon, kernel_grid)?,
        MeanKind::Gauss => weierstrass_kernel(spec.kernel_parameter(), kernel_grid)?,
        MeanKind::CustomPhi(_) => {
            return Err(FrftError::InvalidParameter("custom Phi has no built-in kernel; use frac_convolve".into()))
        }
    };
    frac_convolve(f, &kernel.signal, alpha)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryStep {
    pub eps: f64,
    pub signal: Signal,
    pub l1_error: Option<f64>,
}

/// Approximate inversion of `f_transformed = F_a f` by the chosen mean for
/// each `eps` of the schedule, on `out`.
///
/// The frequency grid must resolve the output extent:
/// `step * X_out * |csc a| < 1/2`. With a reference the L1 error is reported.
pub fn recover(
    f_transformed: &Signal,
    alpha: f64,
    kind: &MeanKind,
    schedule: &EpsilonSchedule,
    out: &UniformGrid,
    reference: Option<&Signal>,
) -> Result<Vec<RecoveryStep>> {
    let ctx = AngleContext::new(alpha, DEFAULT_DELTA_SING)?;
    ctx.require_generic()?;
    if let Some(r) = reference {
        if !r.grid().coincides(out) {
            return Err(FrftError::GridMismatch("reference must live on the output grid".into()));
        }
    }
    schedule
        .values()
        .par_iter()
        .map(|&eps| {
            let spec = MeanSpec::new(kind.clone(), eps)?;
            let signal = damped_inverse(f_transformed, &spec, &ctx, out, Bandwidth::Demodulated(0.0))?;
            let l1_error = match reference {
                Some(r) => Some(lp_norm(&signal.sub(r)?, LpExponent::ONE)),
                None => None,
            };
            Ok(RecoveryStep { eps, signal, l1_error })
        })
        .collect()
}

/// File name of the recovered signal for one `eps`.
pub fn recovery_file_name(eps: f64) -> String {
    format!("recover_eps{eps}.csv")
}

/// The `eps,l1_error` table; the error field is empty without a reference.
pub fn recovery_table(steps: &[RecoveryStep]) -> String {
    let mut s = String::from("eps,l1_error\n");
    for step in steps {
        match step.l1_error {
            Some(e) => s.push_str(&format!("{},{:.12e}\n", step.eps, e)),
            None => s.push_str(&format!("{},\n", step.eps)),
        }
    }
    s
}

/// Writes `recover_errors.csv` and one signal file per step into `dir`.
pub fn write_recovery(dir: &Path, steps: &[RecoveryStep]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| FrftError::Io(format!("{}: {e}", dir.display())))?;
    let table = dir.join("recover_errors.csv");
    std::fs::write(&table, recovery_table(steps)).map_err(|e| FrftError::Io(format!("{}: {e}", table.display())))?;
    for step in steps {
        write_signal_file(dir.join(recovery_file_name(step.eps)), &step.signal)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::relative_error;
    use std::f64::consts::FRAC_PI_2;

    fn gaussian(grid: UniformGrid) -> Signal {
        make_signal(grid, |t| Complex64::new((-PI * t * t).exp(), 0.0)).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(MeanSpec::abel(0.0).is_err());
        assert!(MeanSpec::gauss(-1.0).is_err());
        let bad: PhiFn = Arc::new(|_| Complex64::new(0.5, 0.0));
        assert!(MeanSpec::new(MeanKind::CustomPhi(bad), 1.0).is_err());
        assert_eq!(MeanSpec::gauss(0.1).unwrap().kernel_parameter(), 0.1 * 0.1);
        assert!(matches!(EpsilonSchedule::new(vec![]), Err(FrftError::EmptySchedule)));
        assert!(EpsilonSchedule::new(vec![0.1, 1.0]).is_err());
        assert_eq!(EpsilonSchedule::default().values(), &[1.0, 0.1, 0.01]);
    }

    #[test]
    fn dilation() {
        let grid = UniformGrid::symmetric(12.0, 1.0 / 64.0).unwrap();
        let w1 = weierstrass_kernel(1.0, grid).unwrap().signal;
        assert_eq!(dilate(&w1, 1.0).unwrap(), w1);
        let half = dilate(&w1, 0.5).unwrap();
        assert!((integral(&half).re - 1.0).abs() < 1e-3);
        assert!(dilate(&w1, 0.0).is_err());
        for &(eps, x) in &[(0.3, 1.7), (2.0, -0.4), (0.05, 0.01)] {
            let lhs = eps / (PI * (eps * eps + x * x));
            let y: f64 = x / eps;
            let rhs = (1.0 / (PI * (1.0 + y * y))) / eps;
            assert!((lhs - rhs).abs() <= 1e-12 * lhs);
        }
    }

    #[test]
    fn kernel_values_and_masses() {
        let grid = UniformGrid::symmetric(50.0, 1.0 / 64.0).unwrap();
        let p = poisson_kernel(0.5, grid).unwrap();
        let mid = grid.count() / 2;
        assert!((p.signal.samples()[mid].re - 1.0 / (PI * 0.5)).abs() < 1e-15);
        assert!((p.mass - 1.0).abs() < 1e-2);
        assert!((p.mass + p.tail_mass - 1.0).abs() < 1e-6);
        let s = p.signal.samples();
        for i in 0..grid.count() {
            assert_eq!(s[i], s[grid.count() - 1 - i]);
        }
        let grid = UniformGrid::symmetric(12.0, 1.0 / 64.0).unwrap();
        let w = weierstrass_kernel(1.0, grid).unwrap();
        assert!((w.signal.samples()[grid.count() / 2].re - (4.0 * PI).sqrt().recip()).abs() < 1e-15);
        assert!((w.mass - 1.0).abs() < 1e-9);
        let eps = 0.7;
        let w = weierstrass_kernel(eps, grid).unwrap();
        let var: f64 =
            grid.points().zip(w.signal.samples()).enumerate().map(|(i, (t, z))| grid.weight(i) * t * t * z.re).sum();
        assert!((var - 2.0 * eps).abs() < 1e-6);
        assert!(poisson_kernel(0.0, grid).is_err());
    }

    #[test]
    fn convolution_at_quarter_turn_is_classical() {
        let grid = UniformGrid::new(-2.0, 0.125, 33).unwrap();
        let f = make_signal(grid, |t| Complex64::new((-t * t).exp(), t.sin())).unwrap();
        let kgrid = UniformGrid::new(-1.0, 0.125, 17).unwrap();
        let g = make_signal(kgrid, |t| Complex64::new(1.0 - t.abs(), 0.0)).unwrap();
        let c = frac_convolve(&f, &g, FRAC_PI_2).unwrap();
        for (k, x) in grid.points().enumerate() {
            let mut s = Complex64::new(0.0, 0.0);
            for (i, t) in grid.points().enumerate() {
                s += grid.weight(i) * f.samples()[i] * g.interpolate(x - t);
            }
            assert!((c.samples()[k] - s).norm() < 1e-12);
        }
    }

    #[test]
    fn delta_is_the_identity() {
        let grid = UniformGrid::symmetric(6.0, 1.0 / 32.0).unwrap();
        let f = gaussian(grid).map(|t, z| z * Complex64::new(1.0, t)).unwrap();
        let delta =
            Signal::new(UniformGrid::new(0.0, grid.step(), 1).unwrap(), vec![Complex64::new(32.0, 0.0)]).unwrap();
        let c = frac_convolve(&f, &delta, 0.9).unwrap();
        assert!(relative_error(&c, &f, LpExponent::INFINITY).unwrap() < 1e-10);
    }

    #[test]
    fn misaligned_kernel_is_rejected() {
        let grid = UniformGrid::symmetric(1.0, 0.1).unwrap();
        let f = gaussian(grid);
        let g = Signal::zeros(UniformGrid::new(0.05, 0.1, 3).unwrap());
        assert!(matches!(frac_convolve(&f, &g, 1.0), Err(FrftError::GridMismatch(_))));
        let g = Signal::zeros(UniformGrid::new(0.0, 0.2, 3).unwrap());
        assert!(matches!(frac_convolve(&f, &g, 1.0), Err(FrftError::GridMismatch(_))));
    }

    #[test]
    fn approximate_identity_converges() {
        let grid = UniformGrid::symmetric(6.0, 1.0 / 256.0).unwrap();
        let f = gaussian(grid);
        let w1 = weierstrass_kernel(1.0, grid).unwrap().signal;
        let errs: Vec<f64> = [1.0, 0.1, 0.01]
            .iter()
            .map(|&e| approx_identity_error(&f, &w1, 0.7, e, LpExponent::ONE).unwrap().error)
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
        let zero = Signal::zeros(grid);
        assert_eq!(approx_identity_error(&zero, &w1, 0.7, 0.1, LpExponent::TWO).unwrap().error, 0.0);
        let heavy = w1.scale(Complex64::new(2.0, 0.0));
        assert!(approx_identity_error(&f, &heavy, 0.7, 0.1, LpExponent::ONE).unwrap().warning.is_some());
    }

    #[test]
    fn two_paths_agree_for_gauss_and_abel() {
        let grid = UniformGrid::symmetric(8.0, 1.0 / 32.0).unwrap();
        let f = gaussian(grid).map(|t, z| z * cis_turns(0.5 * t)).unwrap();
        for spec in [MeanSpec::abel(0.3).unwrap(), MeanSpec::gauss(0.3).unwrap()] {
            let a = phi_mean(&f, &spec, 1.0, &grid).unwrap();
            let b = mean_via_convolution(&f, &spec, 1.0).unwrap();
            let err = relative_error(&a, &b, LpExponent::TWO).unwrap();
            assert!(err < 1e-3, "{spec:?}: {err}");
        }
    }

    #[test]
    fn heavy_damping_kills_the_signal() {
        let grid = UniformGrid::symmetric(6.0, 1.0 / 32.0).unwrap();
        let f = gaussian(grid);
        let m = phi_mean(&f, &MeanSpec::abel(1e3).unwrap(), 0.8, &grid).unwrap();
        assert!(lp_norm(&m, LpExponent::TWO) < 1e-2 * lp_norm(&f, LpExponent::TWO));
    }

    #[test]
    fn recovery_of_zero_and_table() {
        let grid = UniformGrid::symmetric(4.0, 1.0 / 16.0).unwrap();
        let zero = Signal::zeros(grid);
        let steps = recover(&zero, 1.0, &MeanKind::Abel, &EpsilonSchedule::default(), &grid, Some(&zero)).unwrap();
        assert_eq!(steps.len(), 3);
        for s in &steps {
            assert_eq!(s.l1_error, Some(0.0));
        }
        let table = recovery_table(&steps);
        assert!(table.starts_with("eps,l1_error\n1,"));
        assert_eq!(recovery_file_name(0.01), "recover_eps0.01.csv");
    }
}
