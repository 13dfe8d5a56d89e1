//! The 2-form of the action groupoid `Hill(S¹) × Diff̃(S¹)` in the left and
//! right trivializations, and its restriction to the trumpet slice.
//!
//! A [`GroupoidPoint`] `(T, F)` is read in the left trivialization as the
//! source potential `T` and in the right trivialization as `T₀` with
//! `T = F⁻¹·T₀ = act_on_hill(F, T₀)`.

use serde::{Deserialize, Serialize};

use crate::diffeo::{act_on_hill, DiffeoLift, HillPotential};
use crate::error::{Error, Result};
use crate::spectral::PeriodicFn;
use crate::trumpet::{fd_step, TrumpetPoint, TrumpetTangent};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupoidPoint {
    #[serde(rename = "T")]
    pub t: HillPotential,
    #[serde(rename = "F")]
    pub f: DiffeoLift,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupoidTangent {
    #[serde(rename = "dT")]
    pub d_t: PeriodicFn,
    #[serde(rename = "dF")]
    pub d_f: PeriodicFn,
}

impl GroupoidPoint {
    pub fn new(t: HillPotential, f: DiffeoLift) -> Result<Self> {
        if t.n() != f.n() {
            return Err(Error::GridMismatch { expected: f.n(), found: t.n() });
        }
        Ok(GroupoidPoint { t, f })
    }

    pub fn n(&self) -> usize {
        self.f.n()
    }

    /// `p + h·v`.
    pub fn moved(&self, v: &GroupoidTangent, h: f64) -> Result<Self> {
        let t = HillPotential::new(self.t.as_fn().zip_with(&v.d_t, |a, b| a + h * b));
        GroupoidPoint::new(t, self.f.perturbed(&v.d_f, h)?)
    }
}

impl GroupoidTangent {
    pub fn new(d_t: PeriodicFn, d_f: PeriodicFn) -> Self {
        GroupoidTangent { d_t, d_f }
    }

    pub fn sup_norm(&self) -> f64 {
        self.d_t.max_abs().max(self.d_f.max_abs())
    }
}

fn check_grid(p: &GroupoidPoint, v: &GroupoidTangent) {
    assert!(v.d_t.n() == p.n() && v.d_f.n() == p.n(), "tangent sampled on a different grid");
}

/// `∫(dT∧β + T β∧β′ − ¼ β‴∧β)` with `β = dF/F′`.
pub fn omega_g_left(p: &GroupoidPoint, v: &GroupoidTangent, w: &GroupoidTangent) -> f64 {
    check_grid(p, v);
    check_grid(p, w);
    let d1 = p.f.derivative();
    let bv = &v.d_f / &d1;
    let bw = &w.d_f / &d1;
    let (bv1, bw1) = (bv.derivative(1), bw.derivative(1));
    let (bv3, bw3) = (bv.derivative(3), bw.derivative(3));
    let t = p.t.values();
    let n = p.n();
    let mut acc = 0.0;
    for i in 0..n {
        let (a, b) = (bv.values()[i], bw.values()[i]);
        acc += v.d_t.values()[i] * b - w.d_t.values()[i] * a + t[i] * (a * bw1.values()[i] - b * bv1.values()[i])
            - 0.25 * (bv3.values()[i] * b - bw3.values()[i] * a);
    }
    acc / n as f64
}

/// `d∫((T₀∘F) F′ dF − ¼ dF″/F′)` at `(T₀, F)`, with tangents `(dT₀, dF)`.
pub fn omega_g_right(p: &GroupoidPoint, v: &GroupoidTangent, w: &GroupoidTangent) -> f64 {
    check_grid(p, v);
    check_grid(p, w);
    let points = PeriodicFn::new(p.f.lift_values(), 0).expect("finite lift");
    let t0 = p.t.as_fn().compose_samples(&points);
    let vt0 = v.d_t.compose_samples(&points);
    let wt0 = w.d_t.compose_samples(&points);
    let d1 = p.f.derivative();
    let (vf1, wf1) = (v.d_f.derivative(1), w.d_f.derivative(1));
    let (vf2, wf2) = (v.d_f.derivative(2), w.d_f.derivative(2));
    let n = p.n();
    let mut acc = 0.0;
    for i in 0..n {
        let fp = d1.values()[i];
        let (a, b) = (v.d_f.values()[i], w.d_f.values()[i]);
        let (a1, b1) = (vf1.values()[i], wf1.values()[i]);
        let t = t0.values()[i];
        acc += (vt0.values()[i] * fp + t * a1) * b - (wt0.values()[i] * fp + t * b1) * a
            + 0.25 * (a1 * wf2.values()[i] - b1 * vf2.values()[i]) / (fp * fp);
    }
    acc / n as f64
}

/// Left-trivialized point `(F⁻¹·T₀, F)` of a right-trivialized `(T₀, F)`.
pub fn to_left(p: &GroupoidPoint) -> GroupoidPoint {
    GroupoidPoint { t: act_on_hill(&p.f, &p.t), f: p.f.clone() }
}

/// Pushforward of a right-trivialized tangent to the left trivialization by
/// central differences of [`to_left`].
pub fn transport_fd(p: &GroupoidPoint, v: &GroupoidTangent) -> Result<GroupoidTangent> {
    let h = fd_step(v.sup_norm());
    let plus = to_left(&p.moved(v, h)?);
    let minus = to_left(&p.moved(v, -h)?);
    let d_t = (plus.t.as_fn() - minus.t.as_fn()).scale(0.5 / h).with_weight(2);
    Ok(GroupoidTangent { d_t, d_f: v.d_f.clone() })
}

/// `|ω_right(v, w) − ω_left(v_L, w_L)|` with finite-difference transport.
pub fn left_right_residual(p: &GroupoidPoint, v: &GroupoidTangent, w: &GroupoidTangent) -> Result<f64> {
    let left = to_left(p);
    let lhs = omega_g_left(&left, &transport_fd(p, v)?, &transport_fd(p, w)?);
    Ok((omega_g_right(p, v, w) - lhs).abs())
}

/// [`omega_g_right`] on the slice `T₀ = −ℓ²/4`, where `dT₀ = −½ ℓ dℓ`.
pub fn slice_restrict(p: &TrumpetPoint, v: &TrumpetTangent, w: &TrumpetTangent) -> Result<f64> {
    let n = p.n();
    let q = GroupoidPoint::new(HillPotential::trumpet(n, p.ell())?, p.lift().clone())?;
    let lift = |t: &TrumpetTangent| -> Result<GroupoidTangent> {
        Ok(GroupoidTangent::new(PeriodicFn::constant(n, -0.5 * p.ell() * t.d_ell)?.with_weight(2), t.d_f.clone()))
    };
    Ok(omega_g_right(&q, &lift(v)?, &lift(w)?))
}
