//! Lifts of orientation-preserving circle diffeomorphisms and the affine
//! action of the diffeomorphism group on Hill potentials.
//!
//! A lift `F̃ : ℝ → ℝ` with `F̃(x+1) = F̃(x) + 1` is stored as
//! `F̃(x) = x + φ(x) + k` where `φ` is periodic with `0 ≤ φ(0) < 1` and `k` is
//! the integer winding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{PeriodicFn, TrigInterpolant};

/// Lower bound on `F'` at every gridpoint.
pub const EPS_MONO: f64 = 1e-6;

const NEWTON_TOL: f64 = 1e-13;
const NEWTON_MAX_ITER: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiffeoRepr")]
pub struct DiffeoLift {
    phi: PeriodicFn,
    winding: i64,
}

#[derive(Deserialize)]
struct DiffeoRepr {
    phi: PeriodicFn,
    #[serde(default)]
    winding: i64,
}

impl TryFrom<DiffeoRepr> for DiffeoLift {
    type Error = Error;
    fn try_from(r: DiffeoRepr) -> Result<Self> {
        DiffeoLift::new(r.phi, r.winding)
    }
}

impl DiffeoLift {
    /// Builds `x ↦ x + φ(x) + winding`, moving the integer part of `φ(0)` into
    /// the winding and rejecting lifts with `F' ≤ EPS_MONO` somewhere.
    pub fn new(phi: PeriodicFn, winding: i64) -> Result<Self> {
        let shift = phi.values()[0].floor();
        let phi = if shift != 0.0 { phi.map(|v| v - shift) } else { phi }.with_weight(0);
        let lift = DiffeoLift { phi, winding: winding + shift as i64 };
        lift.check_monotone()?;
        Ok(lift)
    }

    fn check_monotone(&self) -> Result<()> {
        let d = self.derivative();
        match d.values().iter().position(|&v| v <= EPS_MONO) {
            Some(index) => Err(Error::NotMonotone { index, derivative: d.values()[index] }),
            None => Ok(()),
        }
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(PeriodicFn::zeros(n)?, 0)
    }

    /// Rotation `x ↦ x + t`.
    pub fn rotation(n: usize, t: f64) -> Result<Self> {
        Self::new(PeriodicFn::constant(n, t)?, 0)
    }

    pub fn n(&self) -> usize {
        self.phi.n()
    }

    /// Periodic part `φ` (normalized so `0 ≤ φ(0) < 1`).
    pub fn phi(&self) -> &PeriodicFn {
        &self.phi
    }

    pub fn winding(&self) -> i64 {
        self.winding
    }

    /// `F̃ − id` on the grid, i.e. `φ + winding`.
    pub fn displacement(&self) -> PeriodicFn {
        let k = self.winding as f64;
        self.phi.map(|v| v + k)
    }

    /// Samples `F̃(x_k)`.
    pub fn lift_values(&self) -> Vec<f64> {
        let k = self.winding as f64;
        self.phi.grid().iter().zip(self.phi.values()).map(|(x, p)| x + p + k).collect()
    }

    pub fn eval(&self, x: f64) -> f64 {
        x + self.phi.eval(x) + self.winding as f64
    }

    /// `F'` (weight 1).
    pub fn derivative(&self) -> PeriodicFn {
        self.phi.derivative(1).map(|v| 1.0 + v)
    }

    /// `F^{(order)}` for `order ≥ 2` (equals `φ^{(order)}`).
    pub fn higher_derivative(&self, order: u32) -> PeriodicFn {
        assert!(order >= 2);
        self.phi.derivative(order)
    }

    /// Same diffeomorphism with `δ` added to its periodic part.
    pub fn perturbed(&self, delta: &PeriodicFn, step: f64) -> Result<Self> {
        let phi = self.phi.zip_with(delta, |p, d| p + step * d);
        DiffeoLift::new(phi, self.winding)
    }

    /// Largest deviation between the full lifts `F̃` and `G̃` on the grid.
    pub fn dist(&self, other: &DiffeoLift) -> f64 {
        self.lift_values()
            .iter()
            .zip(other.lift_values())
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// `F ∘ G`, sampled as `F̃(G̃(x_k))`; windings add.
pub fn compose(f: &DiffeoLift, g: &DiffeoLift) -> Result<DiffeoLift> {
    assert_eq!(f.n(), g.n(), "grid size mismatch");
    let inner = g.lift_values();
    let outer = f.phi.interpolate(&inner);
    let phi: Vec<f64> = g.phi.values().iter().zip(&outer).map(|(pg, pf)| pg + pf).collect();
    DiffeoLift::new(PeriodicFn::new(phi, 0)?, f.winding + g.winding)
}

/// Inverse lift, solved gridpoint by gridpoint with Newton's method on the
/// strictly increasing `F̃`, falling back to bisection when a step leaves the
/// bracket.
pub fn invert(f: &DiffeoLift) -> Result<DiffeoLift> {
    let interp = TrigInterpolant::new(&f.phi);
    let k = f.winding as f64;
    let (lo_phi, hi_phi) = f
        .phi
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    // trig interpolant can overshoot the samples slightly
    let pad = 1e-3 + 0.1 * (hi_phi - lo_phi);
    let grid = f.phi.grid();
    let mut disp = Vec::with_capacity(grid.len());
    for (index, &x) in grid.iter().enumerate() {
        let mut lo = x - k - hi_phi - pad;
        let mut hi = x - k - lo_phi + pad;
        let mut y = x - k - f.phi.values()[index];
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = interp.eval_with_derivative(y);
            let g = y + p + k - x;
            if g.abs() < NEWTON_TOL {
                converged = true;
                break;
            }
            if g > 0.0 {
                hi = hi.min(y);
            } else {
                lo = lo.max(y);
            }
            let next = y - g / (1.0 + dp);
            y = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        }
        if !converged {
            return Err(Error::InverseDiverged { index, iterations: NEWTON_MAX_ITER });
        }
        disp.push(y - x);
    }
    DiffeoLift::new(PeriodicFn::new(disp, 0)?, 0)
}

/// `𝒮(F) = F'''/F' − (3/2)(F''/F')²` (weight 2).
pub fn schwarzian(f: &DiffeoLift) -> PeriodicFn {
    let d1 = f.derivative();
    let d2 = f.higher_derivative(2);
    let d3 = f.higher_derivative(3);
    let vals = d1
        .values()
        .iter()
        .zip(d2.values())
        .zip(d3.values())
        .map(|((a, b), c)| c / a - 1.5 * (b / a).powi(2))
        .collect();
    PeriodicFn::new(vals, 2).expect("finite for a monotone lift")
}

/// A Hill potential `T`, the coefficient of the quadratic differential
/// `T |dx|²` of the operator `d²/dx² + T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HillPotential(PeriodicFn);

impl HillPotential {
    pub fn new(t: PeriodicFn) -> Self {
        HillPotential(t.with_weight(2))
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Ok(Self::new(PeriodicFn::constant(n, value)?))
    }

    /// Potential `−ℓ²/4` of the trumpet with neck length `ℓ`.
    pub fn trumpet(n: usize, ell: f64) -> Result<Self> {
        Self::constant(n, -0.25 * ell * ell)
    }

    pub fn as_fn(&self) -> &PeriodicFn {
        &self.0
    }

    pub fn into_fn(self) -> PeriodicFn {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn values(&self) -> &[f64] {
        self.0.values()
    }

    pub fn dist(&self, other: &HillPotential) -> f64 {
        self.0.dist(&other.0)
    }
}

/// `(F⁻¹·T)(x) = F'(x)² T(F(x)) + ½ 𝒮(F)(x)`.
///
/// The result is the potential written on the right-hand side, evaluated
/// with the stored `F`; consequently
/// `act_on_hill(G, act_on_hill(F, T)) = act_on_hill(F ∘ G, T)`.
pub fn act_on_hill(f: &DiffeoLift, t: &HillPotential) -> HillPotential {
    assert_eq!(f.n(), t.n(), "grid size mismatch");
    let d1 = f.derivative();
    let t_of_f = t.0.interpolate(&f.lift_values());
    let s = schwarzian(f);
    let vals = d1
        .values()
        .iter()
        .zip(&t_of_f)
        .zip(s.values())
        .map(|((d, tf), s)| d * d * tf + 0.5 * s)
        .collect();
    HillPotential::new(PeriodicFn::from_raw(vals, 2))
}

/// Variation `δF = −F'·f` of `F` along the left-invariant field generated by
/// `f ∂_x`.
pub fn left_invariant_vector(f_lift: &DiffeoLift, f: &PeriodicFn) -> PeriodicFn {
    (&f_lift.derivative() * f).scale(-1.0).with_weight(0)
}

/// Time-`t` flow of `ẋ = f(x)` by RK4 with the given number of steps.
pub fn flow(f: &PeriodicFn, t: f64, steps: usize) -> Result<DiffeoLift> {
    let interp = TrigInterpolant::new(f);
    let h = t / steps as f64;
    let disp = f
        .grid()
        .into_iter()
        .map(|x0| {
            let mut x = x0;
            for _ in 0..steps {
                let k1 = interp.eval(x);
                let k2 = interp.eval(x + 0.5 * h * k1);
                let k3 = interp.eval(x + 0.5 * h * k2);
                let k4 = interp.eval(x + h * k3);
                x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            x - x0
        })
        .collect();
    DiffeoLift::new(PeriodicFn::new(disp, 0)?, 0)
}
