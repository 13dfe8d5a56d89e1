//! Periodic grid functions on the unit circle.
//!
//! A [`PeriodicFn`] stores `n` samples at `x_k = k/n`. Everything that needs
//! derivatives, primitives or off-grid values goes through the discrete
//! Fourier transform, so band-limited inputs are handled exactly up to
//! roundoff.
//!
//! The density weight is bookkeeping only: an `r`-density `f |dx|^r` is stored
//! by its coefficient `f` in the fixed coordinate `x`.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 16;

/// Tolerance used when deciding whether a function has zero mean.
pub const MEAN_ZERO_TOL: f64 = 1e-10;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_forward(values: &[f64]) -> Vec<Complex64> {
    let n = values.len();
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n));
    fft.process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

fn fft_inverse(mut coeffs: Vec<Complex64>) -> Vec<f64> {
    let n = coeffs.len();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n));
    fft.process(&mut coeffs);
    coeffs.into_iter().map(|c| c.re).collect()
}

/// Signed wavenumber of FFT bin `j` on an `n`-point grid.
#[inline]
fn wavenumber(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

pub fn check_sample_count(n: usize) -> Result<()> {
    if n < MIN_SAMPLES || !n.is_power_of_two() {
        return Err(Error::InvalidSampleCount { n, min: MIN_SAMPLES });
    }
    Ok(())
}

/// Uniform grid `x_k = k/n`.
pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 / n as f64).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PeriodicFnRepr", into = "PeriodicFnRepr")]
pub struct PeriodicFn {
    values: Vec<f64>,
    weight: i32,
}

#[derive(Serialize, Deserialize)]
struct PeriodicFnRepr {
    n: usize,
    weight: i32,
    values: Vec<f64>,
}

impl TryFrom<PeriodicFnRepr> for PeriodicFn {
    type Error = Error;

    fn try_from(r: PeriodicFnRepr) -> Result<Self> {
        if r.values.len() != r.n {
            return Err(Error::GridMismatch { expected: r.n, found: r.values.len() });
        }
        PeriodicFn::new(r.values, r.weight)
    }
}

impl From<PeriodicFn> for PeriodicFnRepr {
    fn from(f: PeriodicFn) -> Self {
        PeriodicFnRepr { n: f.values.len(), weight: f.weight, values: f.values }
    }
}

impl PeriodicFn {
    pub fn new(values: Vec<f64>, weight: i32) -> Result<Self> {
        check_sample_count(values.len())?;
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(PeriodicFn { values, weight })
    }

    /// Samples `f` on the `n`-point grid.
    pub fn from_fn(n: usize, weight: i32, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid(n).into_iter().map(f).collect(), weight)
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n], 0)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::constant(n, 0.0)
    }

    /// Internal constructor for values already known to be a valid grid.
    pub(crate) fn from_raw(values: Vec<f64>, weight: i32) -> Self {
        debug_assert!(check_sample_count(values.len()).is_ok());
        PeriodicFn { values, weight }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn with_weight(mut self, weight: i32) -> Self {
        self.weight = weight;
        self
    }

    pub fn grid(&self) -> Vec<f64> {
        grid(self.n())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        PeriodicFn::from_raw(self.values.iter().map(|&v| f(v)).collect(), self.weight)
    }

    /// Pointwise combination; the result keeps `self`'s weight.
    pub fn zip_with(&self, other: &PeriodicFn, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.n(), other.n(), "grid size mismatch");
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        PeriodicFn::from_raw(values, self.weight)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Sup-norm distance between two functions on the same grid.
    pub fn dist(&self, other: &PeriodicFn) -> f64 {
        assert_eq!(self.n(), other.n(), "grid size mismatch");
        self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `∫₀¹ f dx`, i.e. the sample mean (spectrally accurate on a periodic grid).
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.n() as f64
    }

    /// Spectral derivative of the given order. The Nyquist mode is dropped
    /// for odd orders.
    pub fn derivative(&self, order: u32) -> Self {
        if order == 0 {
            return self.clone();
        }
        let n = self.n();
        let mut c = fft_forward(&self.values);
        for (j, cj) in c.iter_mut().enumerate() {
            let m = wavenumber(j, n);
            if j == n / 2 && order % 2 == 1 {
                *cj = Complex64::new(0.0, 0.0);
                continue;
            }
            let ik = Complex64::new(0.0, 2.0 * PI * m as f64);
            *cj *= ik.powu(order);
        }
        PeriodicFn::from_raw(fft_inverse(c), self.weight + order as i32)
    }

    /// Trigonometric interpolant evaluated at arbitrary points (reduced mod 1).
    pub fn interpolate(&self, points: &[f64]) -> Vec<f64> {
        let coeffs = fft_forward(&self.values);
        points.iter().map(|&x| eval_trig(&coeffs, x)).collect()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.interpolate(&[x])[0]
    }

    /// Samples of `f ∘ g` where `g` is given by its values on this grid.
    pub fn compose_samples(&self, points: &PeriodicFn) -> Self {
        PeriodicFn::from_raw(self.interpolate(points.values()), self.weight)
    }

    /// Fourier coefficients `u_m`, `0 ≤ m ≤ cutoff`; negative modes follow by
    /// conjugation.
    pub fn fourier(&self, cutoff: usize) -> Result<FourierCoeffs> {
        let half = self.n() / 2;
        if cutoff >= half {
            return Err(Error::CutoffTooLarge { cutoff, half });
        }
        let c = fft_forward(&self.values);
        let mut modes: Vec<Complex64> = c[..=cutoff].to_vec();
        modes[0].im = 0.0;
        Ok(FourierCoeffs { modes })
    }

    /// The unique mean-zero periodic primitive.
    pub fn antiderivative_meanzero(&self) -> Result<Self> {
        let mean = self.integral();
        if mean.abs() > MEAN_ZERO_TOL {
            return Err(Error::NonZeroMean { mean });
        }
        let n = self.n();
        let mut c = fft_forward(&self.values);
        for (j, cj) in c.iter_mut().enumerate() {
            let m = wavenumber(j, n);
            if m == 0 || j == n / 2 {
                *cj = Complex64::new(0.0, 0.0);
            } else {
                *cj /= Complex64::new(0.0, 2.0 * PI * m as f64);
            }
        }
        Ok(PeriodicFn::from_raw(fft_inverse(c), self.weight - 1))
    }

    /// Band-limited resampling onto a grid `factor` times finer.
    pub fn upsample(&self, factor: usize) -> Self {
        assert!(factor.is_power_of_two() && factor >= 1);
        if factor == 1 {
            return self.clone();
        }
        let n = self.n();
        let big = n * factor;
        let c = fft_forward(&self.values);
        let mut padded = vec![Complex64::new(0.0, 0.0); big];
        padded[..n / 2].copy_from_slice(&c[..n / 2]);
        padded[big - n / 2 + 1..].copy_from_slice(&c[n / 2 + 1..]);
        // split the Nyquist coefficient symmetrically so the result stays real
        let nyq = c[n / 2].re / 2.0;
        padded[n / 2] = Complex64::new(nyq, 0.0);
        padded[big - n / 2] = Complex64::new(nyq, 0.0);
        PeriodicFn::from_raw(fft_inverse(padded), self.weight)
    }
}

/// Precomputed trigonometric interpolant for repeated off-grid evaluation.
#[derive(Clone, Debug)]
pub struct TrigInterpolant {
    coeffs: Vec<Complex64>,
}

impl TrigInterpolant {
    pub fn new(f: &PeriodicFn) -> Self {
        TrigInterpolant { coeffs: fft_forward(f.values()) }
    }

    pub fn eval(&self, x: f64) -> f64 {
        eval_trig(&self.coeffs, x)
    }

    /// Value and first derivative at `x`.
    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let n = self.coeffs.len();
        let theta = 2.0 * PI * x.rem_euclid(1.0);
        let step = Complex64::from_polar(1.0, theta);
        let mut z = Complex64::new(1.0, 0.0);
        let mut val = self.coeffs[0].re;
        let mut der = 0.0;
        for (m, cm) in self.coeffs.iter().enumerate().take(n / 2).skip(1) {
            z *= step;
            let t = cm * z;
            val += 2.0 * t.re;
            der += -2.0 * 2.0 * PI * m as f64 * t.im;
        }
        let half = (n / 2) as f64;
        let nyq = self.coeffs[n / 2].re;
        val += nyq * (theta * half).cos();
        der -= nyq * 2.0 * PI * half * (theta * half).sin();
        (val, der)
    }
}

fn eval_trig(coeffs: &[Complex64], x: f64) -> f64 {
    let n = coeffs.len();
    let theta = 2.0 * PI * x.rem_euclid(1.0);
    let step = Complex64::from_polar(1.0, theta);
    let mut z = Complex64::new(1.0, 0.0);
    let mut acc = coeffs[0].re;
    for cm in coeffs.iter().take(n / 2).skip(1) {
        z *= step;
        acc += 2.0 * (cm * z).re;
    }
    acc + coeffs[n / 2].re * (theta * (n / 2) as f64).cos()
}

impl Add for &PeriodicFn {
    type Output = PeriodicFn;
    fn add(self, rhs: &PeriodicFn) -> PeriodicFn {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &PeriodicFn {
    type Output = PeriodicFn;
    fn sub(self, rhs: &PeriodicFn) -> PeriodicFn {
        self.zip_with(rhs, |a, b| a - b)
    }
}

/// Pointwise product; density weights add.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for &PeriodicFn {
    type Output = PeriodicFn;
    fn mul(self, rhs: &PeriodicFn) -> PeriodicFn {
        self.zip_with(rhs, |a, b| a * b).with_weight(self.weight + rhs.weight)
    }
}

/// Pointwise quotient; density weights subtract.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for &PeriodicFn {
    type Output = PeriodicFn;
    fn div(self, rhs: &PeriodicFn) -> PeriodicFn {
        self.zip_with(rhs, |a, b| a / b).with_weight(self.weight - rhs.weight)
    }
}

impl Mul<&PeriodicFn> for f64 {
    type Output = PeriodicFn;
    fn mul(self, rhs: &PeriodicFn) -> PeriodicFn {
        rhs.scale(self)
    }
}

impl Neg for &PeriodicFn {
    type Output = PeriodicFn;
    fn neg(self) -> PeriodicFn {
        self.scale(-1.0)
    }
}

/// Fourier coefficients of a real periodic function, stored for `m ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCoeffs {
    modes: Vec<Complex64>,
}

impl FourierCoeffs {
    pub fn cutoff(&self) -> usize {
        self.modes.len() - 1
    }

    /// `u_m` for any `|m| ≤ cutoff`; `u_{-m} = conj(u_m)`.
    pub fn get(&self, m: i64) -> Complex64 {
        let c = self.modes[m.unsigned_abs() as usize];
        if m < 0 {
            c.conj()
        } else {
            c
        }
    }

    pub fn nonnegative(&self) -> &[Complex64] {
        &self.modes
    }

    /// Reconstructs samples on an `n`-point grid.
    pub fn inverse(&self, n: usize, weight: i32) -> Result<PeriodicFn> {
        check_sample_count(n)?;
        if self.cutoff() >= n / 2 {
            return Err(Error::CutoffTooLarge { cutoff: self.cutoff(), half: n / 2 });
        }
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        c[0] = Complex64::new(self.modes[0].re, 0.0);
        for m in 1..self.modes.len() {
            c[m] = self.modes[m];
            c[n - m] = self.modes[m].conj();
        }
        PeriodicFn::new(fft_inverse(c), weight)
    }
}
