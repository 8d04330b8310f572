use std::f64::consts::PI;

use frft_lab::corpus::{two_tone, Atom, CORPUS_BANDWIDTH};
use frft_lab::frft::{angle_context, frft_fast, frft_with, inverse_frft_with, Bandwidth, FrftMethod, FrftOptions};
use frft_lab::io::{read_signal, write_signal};
use frft_lab::multiplier::{
    check_hormander, check_mikhlin, frac_hilbert_mult, multiplier_frequency_grid, partial_sum_mult, Band, MultiplierFn,
};
use frft_lab::signal::{lp_norm, make_signal, relative_error, LpExponent, Signal, UniformGrid};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid() -> UniformGrid {
    UniformGrid::symmetric(8.0, 1.0 / 128.0).unwrap()
}

fn generic_order() -> impl Strategy<Value = f64> {
    (0.3..PI - 0.3, prop::bool::ANY).prop_map(|(a, shift)| if shift { a + PI } else { a })
}

fn atom() -> impl Strategy<Value = Atom> {
    (-1.0..1.0, -1.0..1.0, -2.0..2.0, -2.0..2.0, 0.7..1.5).prop_map(|(re, im, center, frequency, width)| Atom {
        amplitude: Complex64::new(re, im),
        center,
        frequency,
        width,
    })
}

fn atom_signal(a: &Atom) -> Signal {
    make_signal(grid(), |t| a.value(t)).unwrap()
}

fn options() -> FrftOptions {
    FrftOptions::with_bandwidth(Bandwidth::Signal(CORPUS_BANDWIDTH))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn grid_spec_round_trips(start in -100.0..100.0f64, step in 1e-3..10.0f64, count in 1usize..5000) {
        let g = UniformGrid::new(start, step, count).unwrap();
        let parsed = UniformGrid::parse_spec(&format!("{start:e}:{step:e}:{count}")).unwrap();
        prop_assert_eq!(g, parsed);
    }

    #[test]
    fn csv_round_trip_is_exact(a in atom(), b in atom()) {
        let g = UniformGrid::new(-3.0, 0.125, 49).unwrap();
        let f = make_signal(g, |t| a.value(t) + b.value(t)).unwrap();
        let mut buf = Vec::new();
        write_signal(&mut buf, &f).unwrap();
        let back = read_signal(buf.as_slice()).unwrap();
        prop_assert_eq!(back.samples(), f.samples());
        prop_assert!(back.grid().coincides(f.grid()));
    }

    #[test]
    fn transform_is_linear(alpha in generic_order(), a in atom(), b in atom(), c in -2.0..2.0f64) {
        let f = atom_signal(&a);
        let g = atom_signal(&b);
        let ctx = angle_context(alpha, 1e-3).unwrap();
        let bw = Bandwidth::Signal(CORPUS_BANDWIDTH);
        let mix = f.scale(Complex64::new(c, 0.0)).add(&g).unwrap();
        let lhs = frft_fast(&mix, &ctx, &grid(), bw).unwrap();
        let rhs = frft_fast(&f, &ctx, &grid(), bw).unwrap().scale(Complex64::new(c, 0.0))
            .add(&frft_fast(&g, &ctx, &grid(), bw).unwrap()).unwrap();
        prop_assert!(relative_error(&lhs, &rhs, LpExponent::TWO).unwrap() < 1e-12);
    }

    #[test]
    fn energy_is_preserved(alpha in generic_order(), a in atom()) {
        let f = atom_signal(&a);
        let g = frft_with(&f, alpha, &grid(), FrftMethod::FastChirp, &options()).unwrap();
        let ratio = lp_norm(&g, LpExponent::TWO) / lp_norm(&f, LpExponent::TWO);
        prop_assert!((ratio - 1.0).abs() < 1e-6, "ratio {}", ratio);
    }

    #[test]
    fn inverse_undoes_forward(alpha in generic_order(), a in atom()) {
        let f = atom_signal(&a);
        let g = frft_with(&f, alpha, &grid(), FrftMethod::FastChirp, &options()).unwrap();
        let back = inverse_frft_with(&g, alpha, &grid(), FrftMethod::FastChirp, &options()).unwrap();
        prop_assert!(relative_error(&back, &f, LpExponent::TWO).unwrap() < 1e-6);
    }

    #[test]
    fn partial_sums_are_idempotent(alpha in 0.4..PI - 0.4, lo_y in -0.5..0.5f64, hi_y in 7.5..9.0f64, upper in prop::bool::ANY) {
        // band edges sit where the spectrum (tones at +-4) is below 1e-12
        let g = UniformGrid::symmetric(8.0, 1.0 / 32.0).unwrap();
        let f = two_tone(alpha, Complex64::new(1.0, 0.5), Complex64::new(-0.3, 1.0), 4.0, g);
        let s = alpha.sin();
        let band = if upper { Band { lo: lo_y * s, hi: hi_y * s } } else { Band { lo: -hi_y * s, hi: lo_y * s } };
        let once = partial_sum_mult(&f, band, alpha).unwrap();
        let twice = partial_sum_mult(&once, band, alpha).unwrap();
        prop_assert!(relative_error(&twice, &once, LpExponent::TWO).unwrap() < 1e-10);
    }

    #[test]
    fn hilbert_shifts_phase(alpha in 0.4..PI - 0.4, v in 3.0..4.0f64) {
        let g = UniformGrid::symmetric(8.0, 1.0 / 32.0).unwrap();
        let f = two_tone(alpha, Complex64::new(0.7, -0.2), Complex64::new(0.1, 0.9), v, g);
        let h = frac_hilbert_mult(&f, alpha).unwrap();
        let freq = multiplier_frequency_grid(&g, alpha).unwrap();
        let ctx = angle_context(alpha, 1e-3).unwrap();
        let ff = frft_fast(&f, &ctx, &freq, Bandwidth::Demodulated(0.0)).unwrap();
        let fh = frft_fast(&h, &ctx, &freq, Bandwidth::Demodulated(0.0)).unwrap();
        let peak = ff.samples().iter().map(|z| z.norm()).fold(0.0, f64::max);
        for ((x, a), b) in freq.points().zip(ff.samples()).zip(fh.samples()) {
            let expected = Complex64::new(0.0, -x.signum()) * a;
            let expected = if x == 0.0 { Complex64::new(0.0, 0.0) } else { expected };
            prop_assert!((b - expected).norm() < 1e-6 * peak, "x = {}", x);
        }
    }

    #[test]
    fn mikhlin_bound_implies_hormander(eps in 0.01..2.0f64, alpha in 0.3..PI - 0.3) {
        let m = MultiplierFn::abel(eps, alpha);
        let probe = UniformGrid::new(-20.0, 1.0 / 64.0, 2561).unwrap();
        let mik = check_mikhlin(&m, 1.0 / std::f64::consts::E, &probe);
        prop_assert!(mik.pass);
        let r_set: Vec<f64> = (-6..6).map(|j| 2f64.powi(j)).collect();
        let hor = check_hormander(&m, &r_set, None);
        prop_assert!(hor.value <= mik.value.max(1.0 / std::f64::consts::E) * (2.0 * 2f64.ln()).sqrt() * 1.01);
    }
}
