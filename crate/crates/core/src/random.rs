//! Seeded generators for the randomized verification suites.
//!
//! All randomness flows through ChaCha8 (`rand_chacha`), seeded from a `u64`
//! and a stream id, so every suite is reproducible across platforms.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coframe::TaylorChart;
use crate::diffeo::{DiffeoLift, HillPotential};
use crate::hill::BoundaryConnection;
use crate::spectral::PeriodicFn;
use crate::trumpet::{TrumpetPoint, TrumpetTangent};

pub type SuiteRng = ChaCha8Rng;

/// Independent generator for `(seed, stream)`.
pub fn rng(seed: u64, stream: u64) -> SuiteRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Trigonometric polynomial `c_0 + Σ_{m=1..modes} (a_m sin 2πmx + b_m cos 2πmx)`
/// with coefficients uniform in `±amplitude / m²`.
pub fn smooth(rng: &mut SuiteRng, n: usize, modes: usize, amplitude: f64) -> PeriodicFn {
    let c0 = amplitude * rng.random_range(-1.0..1.0);
    let coeffs: Vec<(f64, f64)> = (1..=modes)
        .map(|m| {
            let s = amplitude / (m * m) as f64;
            (s * rng.random_range(-1.0..1.0), s * rng.random_range(-1.0..1.0))
        })
        .collect();
    PeriodicFn::from_fn(n, 0, |x| {
        c0 + coeffs
            .iter()
            .enumerate()
            .map(|(i, (a, b))| {
                let t = 2.0 * PI * (i + 1) as f64 * x;
                a * t.sin() + b * t.cos()
            })
            .sum::<f64>()
    })
    .expect("valid grid")
}

/// Same as [`smooth`] with the mean removed.
pub fn smooth_meanzero(rng: &mut SuiteRng, n: usize, modes: usize, amplitude: f64) -> PeriodicFn {
    let f = smooth(rng, n, modes, amplitude);
    let mean = f.integral();
    f.map(|v| v - mean)
}

/// Random diffeomorphism lift with winding 0: `φ` is a degree-4 trigonometric
/// polynomial plus a rotation, scaled so that `‖φ'‖∞ ≤ max_slope`.
pub fn diffeo(rng: &mut SuiteRng, n: usize, max_slope: f64) -> DiffeoLift {
    let shift = rng.random_range(0.0..1.0);
    let coeffs: Vec<(f64, f64)> =
        (1..=4).map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let bound: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(i, (a, b))| 2.0 * PI * (i + 1) as f64 * (a.abs() + b.abs()))
        .sum();
    let scale = max_slope * rng.random_range(0.2..1.0) / bound;
    let phi = PeriodicFn::from_fn(n, 0, |x| {
        shift
            + scale
                * coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, (a, b))| {
                        let t = 2.0 * PI * (i + 1) as f64 * x;
                        a * t.sin() + b * t.cos()
                    })
                    .sum::<f64>()
    })
    .expect("valid grid");
    DiffeoLift::new(phi, 0).expect("slope bound keeps the lift monotone")
}

pub fn potential(rng: &mut SuiteRng, n: usize, amplitude: f64) -> HillPotential {
    HillPotential::new(smooth(rng, n, 4, amplitude))
}

/// Random positive connection: `a = exp(smooth)`, `s`, `u` smooth.
pub fn positive_connection(rng: &mut SuiteRng, n: usize) -> BoundaryConnection {
    let a = smooth(rng, n, 4, 0.4).map(f64::exp);
    let s = smooth(rng, n, 4, 0.5);
    let u = smooth(rng, n, 4, 0.5);
    BoundaryConnection::new(a, s, u).expect("matching grids")
}

/// Random trumpet point with `ℓ ∈ [0.3, 3)` and `‖φ'‖∞ ≤ 0.5`.
pub fn trumpet_point(rng: &mut SuiteRng, n: usize) -> TrumpetPoint {
    let ell = rng.random_range(0.3..3.0);
    TrumpetPoint::new(ell, diffeo(rng, n, 0.5)).expect("positive length")
}

pub fn trumpet_tangent(rng: &mut SuiteRng, n: usize) -> TrumpetTangent {
    TrumpetTangent::new(rng.random_range(-1.0..1.0), smooth(rng, n, 4, 0.2))
}

/// Chart `f = x + f0 + y f1 + y² f2`, `g = y g1 + y² g2` with small random
/// Taylor coefficients and `g1 > 0`.
pub fn taylor_chart(rng: &mut SuiteRng, n: usize) -> TaylorChart {
    let f0 = smooth(rng, n, 3, 0.02);
    let f1 = smooth(rng, n, 3, 0.1);
    let f2 = smooth(rng, n, 3, 0.1);
    let g1 = smooth(rng, n, 3, 0.2).map(f64::exp);
    let g2 = smooth(rng, n, 3, 0.1);
    TaylorChart { f: [f0, f1, f2], g: [g1, g2] }
}
