//! Seeded random test signals.
//!
//! The band-limited corpus is a sum of three time-frequency shifted Gaussians
//! `c exp(-pi ((t - t0) / s)^2) exp(2 pi i v0 t)` with `t0, v0` in `[-2, 2]`,
//! `s` in `[0.7, 1.5]` and complex amplitudes in the unit square.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::czt::cis_turns;
use crate::signal::{make_signal, Signal, UniformGrid};

pub const DEFAULT_SEED: u64 = 42;

/// Frequency beyond which every corpus spectrum is below 1e-15 of its peak.
pub const CORPUS_BANDWIDTH: f64 = 7.0;

/// `[-8, 8]` at step `1/128`.
pub fn corpus_grid() -> UniformGrid {
    UniformGrid::symmetric(8.0, 1.0 / 128.0).expect("valid grid")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub amplitude: Complex64,
    pub center: f64,
    pub frequency: f64,
    pub width: f64,
}

impl Atom {
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        Self {
            amplitude: Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            center: rng.gen_range(-2.0..2.0),
            frequency: rng.gen_range(-2.0..2.0),
            width: rng.gen_range(0.7..1.5),
        }
    }

    pub fn value(&self, t: f64) -> Complex64 {
        let u = (t - self.center) / self.width;
        self.amplitude * (-PI * u * u).exp() * cis_turns(self.frequency * t)
    }
}

pub fn random_band_limited<R: Rng>(rng: &mut R, grid: UniformGrid) -> Signal {
    let atoms: Vec<Atom> = (0..3).map(|_| Atom::random(rng)).collect();
    make_signal(grid, |t| atoms.iter().map(|a| a.value(t)).sum()).expect("finite samples")
}

pub fn band_limited_corpus(seed: u64, count: usize, grid: UniformGrid) -> Vec<Signal> {
    let mut r = rng(seed);
    (0..count).map(|_| random_band_limited(&mut r, grid)).collect()
}

/// `exp(-i pi t^2 cot a) exp(-pi t^2) (c1 e^{2 pi i v t} + c2 e^{-2 pi i v t})`.
///
/// After chirp demodulation its spectrum sits at `+-v` with no energy near
/// zero frequency when `v >= 3`, so sign-type multipliers act on it without
/// producing slowly decaying tails.
pub fn two_tone(alpha: f64, c1: Complex64, c2: Complex64, v: f64, grid: UniformGrid) -> Signal {
    let cot = alpha.cos() / alpha.sin();
    make_signal(grid, |t| {
        (-PI * t * t).exp() * cis_turns(-0.5 * cot * t * t) * (c1 * cis_turns(v * t) + c2 * cis_turns(-v * t))
    })
    .expect("finite samples")
}

/// Random [`two_tone`] signals with `v` in `[3, 4]`.
pub fn two_tone_corpus(seed: u64, count: usize, alpha: f64, grid: UniformGrid) -> Vec<Signal> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let c1 = Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            let c2 = Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            let v = r.gen_range(3.0..4.0);
            two_tone(alpha, c1, c2, v, grid)
        })
        .collect()
}

/// An order at least `margin` away from every multiple of pi, in `(0, 2 pi)`.
pub fn random_generic_order<R: Rng>(rng: &mut R, margin: f64) -> f64 {
    loop {
        let a: f64 = rng.gen_range(0.0..2.0 * PI);
        let r = a.rem_euclid(PI);
        if r > margin && PI - r > margin {
            return a;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible() {
        let g = UniformGrid::symmetric(4.0, 0.125).unwrap();
        assert_eq!(band_limited_corpus(7, 3, g), band_limited_corpus(7, 3, g));
        assert_ne!(band_limited_corpus(7, 1, g), band_limited_corpus(8, 1, g));
    }

    #[test]
    fn corpus_decays_at_the_boundary() {
        for f in band_limited_corpus(DEFAULT_SEED, 20, corpus_grid()) {
            assert!(f.boundary_magnitude() < 1e-8);
        }
    }

    #[test]
    fn generic_orders_keep_their_margin() {
        let mut r = rng(1);
        for _ in 0..200 {
            let a = random_generic_order(&mut r, 0.2);
            assert!(a.sin().abs() > 0.2f64.sin() - 1e-12);
        }
    }
}
