//! FFT building blocks: chirp-z (Bluestein) evaluation of a Riemann-type
//! Fourier sum on an arbitrary uniform frequency grid, and linear convolution.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// `exp(2 pi i x)` with the argument reduced to `[-1/2, 1/2]` turns first.
#[inline]
pub fn cis_turns(x: f64) -> Complex64 {
    let r = x - x.round();
    let (s, c) = (2.0 * std::f64::consts::PI * r).sin_cos();
    Complex64::new(c, s)
}

/// Evaluates `G_k = sum_i g_i exp(-2 pi i nu_k t_i)` for
/// `t_i = t0 + i dt` (`i < g.len()`) and `nu_k = nu0 + k dnu` (`k < m`).
///
/// Cost is one FFT convolution of length `>= g.len() + m - 1`.
pub fn chirp_z(g: &[Complex64], t0: f64, dt: f64, nu0: f64, dnu: f64, m: usize) -> Vec<Complex64> {
    let n = g.len();
    if n == 0 || m == 0 {
        return vec![Complex64::new(0.0, 0.0); m];
    }
    let beta = dnu * dt;
    let len = (n + m - 1).next_power_of_two();

    // a_i = g_i exp(-2 pi i nu0 i dt) exp(-i pi beta i^2)
    let mut a = vec![Complex64::new(0.0, 0.0); len];
    for (i, (slot, &gi)) in a.iter_mut().zip(g).enumerate() {
        let fi = i as f64;
        *slot = gi * cis_turns(-nu0 * dt * fi) * cis_turns(-0.5 * beta * fi * fi);
    }

    // c_j = exp(i pi beta j^2) for j in [-(n-1), m-1], negative lags wrapped
    let mut c = vec![Complex64::new(0.0, 0.0); len];
    for (j, slot) in c.iter_mut().take(m).enumerate() {
        let fj = j as f64;
        *slot = cis_turns(0.5 * beta * fj * fj);
    }
    for j in 1..n {
        let fj = j as f64;
        c[len - j] = cis_turns(0.5 * beta * fj * fj);
    }

    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    fwd.process(&mut a);
    fwd.process(&mut c);
    for (x, y) in a.iter_mut().zip(&c) {
        *x *= y;
    }
    inv.process(&mut a);

    let scale = 1.0 / len as f64;
    (0..m)
        .map(|k| {
            let fk = k as f64;
            let nu = nu0 + fk * dnu;
            a[k] * scale * cis_turns(-nu * t0) * cis_turns(-0.5 * beta * fk * fk)
        })
        .collect()
}

/// Full linear convolution `c_n = sum_i a_i b_{n-i}`, length `a.len() + b.len() - 1`.
pub fn linear_convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len() + b.len() - 1;
    let len = n.next_power_of_two();
    let mut x = vec![Complex64::new(0.0, 0.0); len];
    let mut y = vec![Complex64::new(0.0, 0.0); len];
    x[..a.len()].copy_from_slice(a);
    y[..b.len()].copy_from_slice(b);
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    fwd.process(&mut x);
    fwd.process(&mut y);
    for (u, v) in x.iter_mut().zip(&y) {
        *u *= v;
    }
    inv.process(&mut x);
    let scale = 1.0 / len as f64;
    x.truncate(n);
    x.iter_mut().for_each(|z| *z *= scale);
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(g: &[Complex64], t0: f64, dt: f64, nu0: f64, dnu: f64, m: usize) -> Vec<Complex64> {
        (0..m)
            .map(|k| {
                let nu = nu0 + k as f64 * dnu;
                g.iter()
                    .enumerate()
                    .map(|(i, gi)| {
                        gi * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * nu * (t0 + i as f64 * dt))
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_naive_sum() {
        let g: Vec<Complex64> =
            (0..37).map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 0.3).cos())).collect();
        for &(t0, dt, nu0, dnu, m) in
            &[(-2.0, 0.11, -3.0, 0.07, 53usize), (0.5, 0.05, 1.2, -0.13, 20), (-1.0, 1.0 / 16.0, -8.0, 0.5, 33)]
        {
            let fast = chirp_z(&g, t0, dt, nu0, dnu, m);
            let slow = naive(&g, t0, dt, nu0, dnu, m);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).norm() < 1e-11, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn convolution_matches_double_loop() {
        let a: Vec<Complex64> = (0..13).map(|i| Complex64::new(i as f64 - 6.0, (i as f64).sqrt())).collect();
        let b: Vec<Complex64> = (0..6).map(|i| Complex64::new(1.0 / (1.0 + i as f64), -(i as f64))).collect();
        let c = linear_convolve(&a, &b);
        assert_eq!(c.len(), 18);
        for (k, ck) in c.iter().enumerate() {
            let mut s = Complex64::new(0.0, 0.0);
            for (i, ai) in a.iter().enumerate() {
                if k >= i && k - i < b.len() {
                    s += ai * b[k - i];
                }
            }
            assert!((ck - s).norm() < 1e-12);
        }
    }

    #[test]
    fn reduced_phase_is_periodic() {
        assert!((cis_turns(1e6 + 0.25) - Complex64::i()).norm() < 1e-9);
        assert!((cis_turns(-0.5) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }
}
