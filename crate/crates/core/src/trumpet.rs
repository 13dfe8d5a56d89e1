//! The trumpet space `Ñ = ℝ₊ × Diff̃(S¹)`: its symplectic form, primitive,
//! moment maps and Darboux coordinates.
//!
//! Tangent vectors vary `ℓ` and the periodic part of the lift directly, so the
//! space is an open subset of a vector space and finite differences along a
//! tangent are plain straight-line perturbations.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diffeo::{act_on_hill, compose, left_invariant_vector, DiffeoLift, HillPotential};
use crate::error::{Error, Result};
use crate::hill::monodromy;
use crate::random::{self, SuiteRng};
use crate::spectral::PeriodicFn;

/// Largest displacement used by the finite-difference checks.
pub const FD_STEP: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TrumpetRepr")]
pub struct TrumpetPoint {
    ell: f64,
    #[serde(rename = "F")]
    f: DiffeoLift,
}

#[derive(Deserialize)]
struct TrumpetRepr {
    ell: f64,
    #[serde(rename = "F")]
    f: DiffeoLift,
}

impl TryFrom<TrumpetRepr> for TrumpetPoint {
    type Error = Error;
    fn try_from(r: TrumpetRepr) -> Result<Self> {
        TrumpetPoint::new(r.ell, r.f)
    }
}

impl TrumpetPoint {
    pub fn new(ell: f64, f: DiffeoLift) -> Result<Self> {
        if ell <= 0.0 || !ell.is_finite() {
            return Err(Error::Domain(format!("neck length must be positive, got {ell}")));
        }
        Ok(TrumpetPoint { ell, f })
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn lift(&self) -> &DiffeoLift {
        &self.f
    }

    pub fn n(&self) -> usize {
        self.f.n()
    }

    /// `p + h·v`.
    pub fn moved(&self, v: &TrumpetTangent, h: f64) -> Result<Self> {
        TrumpetPoint::new(self.ell + h * v.d_ell, self.f.perturbed(&v.d_f, h)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrumpetTangent {
    pub d_ell: f64,
    #[serde(rename = "dF")]
    pub d_f: PeriodicFn,
}

impl TrumpetTangent {
    pub fn new(d_ell: f64, d_f: PeriodicFn) -> Self {
        TrumpetTangent { d_ell, d_f }
    }

    pub fn zero(n: usize) -> Result<Self> {
        Ok(TrumpetTangent { d_ell: 0.0, d_f: PeriodicFn::zeros(n)? })
    }

    /// `∂/∂ℓ`.
    pub fn ell_direction(n: usize) -> Result<Self> {
        Ok(TrumpetTangent { d_ell: 1.0, d_f: PeriodicFn::zeros(n)? })
    }

    /// Generator `Z` of the circle action, a constant shift of the lift.
    pub fn rotation_direction(n: usize) -> Result<Self> {
        Ok(TrumpetTangent { d_ell: 0.0, d_f: PeriodicFn::constant(n, 1.0)? })
    }

    pub fn sup_norm(&self) -> f64 {
        self.d_ell.abs().max(self.d_f.max_abs())
    }

    pub fn scale(&self, c: f64) -> Self {
        TrumpetTangent { d_ell: c * self.d_ell, d_f: self.d_f.scale(c) }
    }
}

fn check_grid(p: &TrumpetPoint, v: &TrumpetTangent) {
    assert_eq!(p.n(), v.d_f.n(), "tangent sampled on a different grid");
}

/// Step for a central difference along `v`.
pub fn fd_step(v_norm: f64) -> f64 {
    FD_STEP / v_norm.max(1.0)
}

/// `ω_N(v, w) = ¼∫(−F′ dℓ²∧dF − ℓ² dF′∧dF + dF′∧dF″/F′²)` with
/// `dℓ² = 2ℓ dℓ`.
pub fn omega_n(p: &TrumpetPoint, v: &TrumpetTangent, w: &TrumpetTangent) -> f64 {
    check_grid(p, v);
    check_grid(p, w);
    let l = p.ell;
    let d1 = p.f.derivative();
    let (vf, wf) = (&v.d_f, &w.d_f);
    let (vf1, wf1) = (vf.derivative(1), wf.derivative(1));
    let (vf2, wf2) = (vf.derivative(2), wf.derivative(2));
    let n = p.n();
    let mut acc = 0.0;
    for i in 0..n {
        let fp = d1.values()[i];
        let (a, b) = (vf.values()[i], wf.values()[i]);
        let (a1, b1) = (vf1.values()[i], wf1.values()[i]);
        let (a2, b2) = (vf2.values()[i], wf2.values()[i]);
        acc += -fp * 2.0 * l * (v.d_ell * b - w.d_ell * a) - l * l * (a1 * b - b1 * a) + (a1 * b2 - b1 * a2) / (fp * fp);
    }
    0.25 * acc / n as f64
}

/// Primitive `λ(w) = −¼∫(ℓ² F′ dF + dF″/F′)` with `ω_N = dλ`.
pub fn primitive(p: &TrumpetPoint, w: &TrumpetTangent) -> f64 {
    check_grid(p, w);
    let l2 = p.ell * p.ell;
    let d1 = p.f.derivative();
    let w2 = w.d_f.derivative(2);
    let n = p.n();
    let acc: f64 = (0..n)
        .map(|i| {
            let fp = d1.values()[i];
            l2 * fp * w.d_f.values()[i] + w2.values()[i] / fp
        })
        .sum();
    -0.25 * acc / n as f64
}

/// Fourth-order central difference of `q` along `v` at `p`.
fn directional<T>(p: &TrumpetPoint, v: &TrumpetTangent, q: impl Fn(&TrumpetPoint) -> T) -> Result<f64>
where
    T: Into<f64>,
{
    let h = fd_step(v.sup_norm());
    let at = |t: f64| -> Result<f64> { Ok(q(&p.moved(v, t)?).into()) };
    Ok((8.0 * (at(h)? - at(-h)?) - (at(2.0 * h)? - at(-2.0 * h)?)) / (12.0 * h))
}

/// `dλ(v, w) = D_v λ(w) − D_w λ(v)` by central differences.
pub fn d_primitive_fd(p: &TrumpetPoint, v: &TrumpetTangent, w: &TrumpetTangent) -> Result<f64> {
    Ok(directional(p, v, |q| primitive(q, w))? - directional(p, w, |q| primitive(q, v))?)
}

/// `|ω_N(v, w) − dλ(v, w)|`.
pub fn exactness_residual(p: &TrumpetPoint, v: &TrumpetTangent, w: &TrumpetTangent) -> Result<f64> {
    Ok((omega_n(p, v, w) - d_primitive_fd(p, v, w)?).abs())
}

/// Moment map for the diffeomorphism action: `−F⁻¹·T(ℓ)` with
/// `T(ℓ) = −ℓ²/4`.
pub fn moment_diff(p: &TrumpetPoint) -> HillPotential {
    let t = HillPotential::trumpet(p.n(), p.ell).expect("grid of a valid point");
    HillPotential::new(-act_on_hill(&p.f, &t).as_fn())
}

/// `|ω_N(f^L, w) − D_w ∫(F⁻¹·T(ℓ)) f|` for the left-invariant field of
/// `f ∂_x`.
pub fn verify_moment_diff(p: &TrumpetPoint, f: &PeriodicFn, w: &TrumpetTangent) -> Result<f64> {
    check_grid(p, w);
    let v = TrumpetTangent::new(0.0, left_invariant_vector(&p.f, f));
    let lhs = omega_n(p, &v, w);
    let rhs = directional(p, w, |q| -(moment_diff(q).as_fn() * f).integral())?;
    Ok((lhs - rhs).abs())
}

/// `|ω_N(Z, w) − ¼ dℓ²(w)|`.
pub fn verify_moment_circle(p: &TrumpetPoint, w: &TrumpetTangent) -> Result<f64> {
    let z = TrumpetTangent::rotation_direction(p.n())?;
    Ok((omega_n(p, &z, w) - 0.5 * p.ell * w.d_ell).abs())
}

/// `u = log F̃′ + ℓ(F̃ − x)`.
pub fn darboux_u(p: &TrumpetPoint) -> PeriodicFn {
    let d1 = p.f.derivative();
    let disp = p.f.displacement();
    d1.zip_with(&disp, |fp, d| fp.ln() + p.ell * d).with_weight(0)
}

/// `δu = δF′/F′ + δℓ (F̃ − x) + ℓ δF`.
pub fn darboux_pushforward(p: &TrumpetPoint, v: &TrumpetTangent) -> PeriodicFn {
    check_grid(p, v);
    let d1 = p.f.derivative();
    let vf1 = v.d_f.derivative(1);
    let disp = p.f.displacement();
    let vals = (0..p.n())
        .map(|i| vf1.values()[i] / d1.values()[i] + v.d_ell * disp.values()[i] + p.ell * v.d_f.values()[i])
        .collect();
    PeriodicFn::new(vals, 0).expect("finite")
}

/// `−½ dℓ∧du₀ + ¼∫ du∧du′` with `u₀` the mean of `u`.
pub fn omega_n_darboux(p: &TrumpetPoint, v: &TrumpetTangent, w: &TrumpetTangent) -> f64 {
    let a = darboux_pushforward(p, v);
    let b = darboux_pushforward(p, w);
    let (a1, b1) = (a.derivative(1), b.derivative(1));
    let pairing = (&(&a * &b1) - &(&b * &a1)).integral();
    -0.5 * (v.d_ell * b.integral() - w.d_ell * a.integral()) + 0.25 * pairing
}

/// `−½ dℓ∧du₀ + πi Σ_{m>0} m (du_{−m}∧du_m)` from the Fourier coefficients of
/// `δu` up to `cutoff`.
pub fn omega_n_fourier(p: &TrumpetPoint, v: &TrumpetTangent, w: &TrumpetTangent, cutoff: usize) -> Result<f64> {
    let a = darboux_pushforward(p, v).fourier(cutoff)?;
    let b = darboux_pushforward(p, w).fourier(cutoff)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 1..=cutoff as i64 {
        sum += m as f64 * (a.get(-m) * b.get(m) - b.get(-m) * a.get(m));
    }
    let series = Complex64::new(0.0, std::f64::consts::PI) * sum;
    Ok(-0.5 * (v.d_ell * b.get(0).re - w.d_ell * a.get(0).re) + series.re)
}

/// Singular values of `ω_N` at `(ℓ, id)` on the span of `∂_ℓ`, the constant
/// variation and `m^{−3/2}(cos 2πmx, sin 2πmx)` for `m ≤ modes`.
#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    pub dimension: usize,
    pub smallest_singular_value: f64,
    pub largest_singular_value: f64,
    /// Largest deviation of the Gram entries from their closed forms.
    pub closed_form_residual: f64,
}

pub fn gram_check(ell: f64, n: usize, modes: usize) -> Result<GramReport> {
    if 2 * modes >= n {
        return Err(Error::CutoffTooLarge { cutoff: modes, half: n / 2 });
    }
    let p = TrumpetPoint::new(ell, DiffeoLift::identity(n)?)?;
    let tau = 2.0 * std::f64::consts::PI;
    let mut basis = vec![TrumpetTangent::ell_direction(n)?, TrumpetTangent::rotation_direction(n)?];
    for m in 1..=modes {
        let s = (m as f64).powf(-1.5);
        let k = tau * m as f64;
        basis.push(TrumpetTangent::new(0.0, PeriodicFn::from_fn(n, 0, |x| s * (k * x).cos())?));
        basis.push(TrumpetTangent::new(0.0, PeriodicFn::from_fn(n, 0, |x| s * (k * x).sin())?));
    }
    let dim = basis.len();
    let gram = DMatrix::from_fn(dim, dim, |i, j| omega_n(&p, &basis[i], &basis[j]));
    let mut expected = DMatrix::zeros(dim, dim);
    expected[(0, 1)] = -ell / 2.0;
    expected[(1, 0)] = ell / 2.0;
    for m in 1..=modes {
        let k = tau * m as f64;
        let val = 0.25 * (ell * ell * k + k * k * k) / (m * m * m) as f64;
        let (c, s) = (2 * m, 2 * m + 1);
        expected[(c, s)] = val;
        expected[(s, c)] = -val;
    }
    let closed_form_residual = (&gram - &expected).amax();
    let sv = gram.singular_values();
    Ok(GramReport {
        dimension: dim,
        smallest_singular_value: sv.min(),
        largest_singular_value: sv.max(),
        closed_form_residual,
    })
}

/// Numerical shadow of the orbit statement: the monodromy of the moment value
/// stays on the hyperbolic orbit of length `ℓ` along the circle action, and
/// the generator `Z` is `ω_N`-orthogonal to `{dℓ = 0}`.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub samples: usize,
    /// `|tr M(−Φ(ℓ, rot_t∘F)) − tr M(−Φ(ℓ, F))|`, maximized.
    pub rotation_trace_residual: f64,
    /// `|tr M(−Φ(ℓ, F)) − 2 cosh(ℓ/2)|`, maximized.
    pub orbit_trace_residual: f64,
    /// `max |ω_N(Z, Z)|`.
    pub zz: f64,
    /// `max |ω_N(Z, w)|` over tangents with `w.d_ell = 0`.
    pub level_set: f64,
}

pub fn virasoro_orbit_check(ell: f64, samples: usize, n: usize, rng: &mut SuiteRng) -> Result<OrbitReport> {
    let expected = 2.0 * (ell / 2.0).cosh();
    let z = TrumpetTangent::rotation_direction(n)?;
    let mut report =
        OrbitReport { samples, rotation_trace_residual: 0.0, orbit_trace_residual: 0.0, zz: 0.0, level_set: 0.0 };
    for _ in 0..samples {
        let p = TrumpetPoint::new(ell, random::diffeo(rng, n, 0.5))?;
        let t = rand::Rng::random_range(rng, 0.0..1.0);
        let rotated = TrumpetPoint::new(ell, compose(&DiffeoLift::rotation(n, t)?, &p.f)?)?;
        let trace = |q: &TrumpetPoint| -> Result<f64> {
            Ok(monodromy(&HillPotential::new(-moment_diff(q).as_fn()))?.trace)
        };
        let (t0, t1) = (trace(&p)?, trace(&rotated)?);
        report.rotation_trace_residual = report.rotation_trace_residual.max((t1 - t0).abs());
        report.orbit_trace_residual = report.orbit_trace_residual.max((t0 - expected).abs());
        report.zz = report.zz.max(omega_n(&p, &z, &z).abs());
        let w = TrumpetTangent::new(0.0, random::smooth(rng, n, 4, 0.2));
        report.level_set = report.level_set.max(omega_n(&p, &z, &w).abs());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::random::{trumpet_point as random_point, trumpet_tangent as random_tangent};

    #[test]
    fn rejects_non_positive_length() {
        let id = DiffeoLift::identity(16).unwrap();
        assert!(TrumpetPoint::new(0.0, id.clone()).is_err());
        assert!(TrumpetPoint::new(f64::NAN, id).is_err());
    }

    #[test]
    fn hand_values_at_identity() {
        for ell in [0.5, 1.0, 2.0] {
            let p = TrumpetPoint::new(ell, DiffeoLift::identity(64).unwrap()).unwrap();
            let dl = TrumpetTangent::ell_direction(64).unwrap();
            let one = TrumpetTangent::rotation_direction(64).unwrap();
            assert!((omega_n(&p, &dl, &one) + ell / 2.0).abs() < 1e-14);
            assert!(verify_moment_circle(&p, &dl).unwrap() < 1e-14);
            let m = moment_diff(&p);
            assert!(m.values().iter().all(|v| (v - ell * ell / 4.0).abs() < 1e-14));
        }
    }

    #[test]
    fn moment_diff_at_identity_by_hand() {
        // f = 1 at (1, id): ω_N((0, −1), ∂_ℓ) = −½ = ∂_ℓ(−ℓ²/4)
        let p = TrumpetPoint::new(1.0, DiffeoLift::identity(64).unwrap()).unwrap();
        let one = PeriodicFn::constant(64, 1.0).unwrap();
        let dl = TrumpetTangent::ell_direction(64).unwrap();
        let v = TrumpetTangent::new(0.0, left_invariant_vector(&p.f, &one));
        assert!((omega_n(&p, &v, &dl) + 0.5).abs() < 1e-14);
        assert!(verify_moment_diff(&p, &one, &dl).unwrap() < 1e-8);
        let zero = PeriodicFn::zeros(64).unwrap();
        assert!(verify_moment_diff(&p, &zero, &dl).unwrap() == 0.0);
    }

    #[test]
    fn random_identities() {
        let n = 256;
        let mut rng = random::rng(5, 0);
        for _ in 0..10 {
            let p = random_point(&mut rng, n);
            let v = random_tangent(&mut rng, n);
            let w = random_tangent(&mut rng, n);
            let f = random::smooth(&mut rng, n, 4, 1.0);
            assert!(omega_n(&p, &v, &v).abs() < 1e-12);
            assert!((omega_n(&p, &v, &w) + omega_n(&p, &w, &v)).abs() < 1e-10);
            assert!(exactness_residual(&p, &v, &w).unwrap() < 1e-6);
            assert!(verify_moment_diff(&p, &f, &w).unwrap() < 1e-6);
            assert!(verify_moment_circle(&p, &w).unwrap() < 1e-8);
            let om = omega_n(&p, &v, &w);
            assert!((om - omega_n_darboux(&p, &v, &w)).abs() < 1e-6);
            assert!((om - omega_n_fourier(&p, &v, &w, n / 2 - 1).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn darboux_u_examples() {
        let ell = 1.7;
        let id = TrumpetPoint::new(ell, DiffeoLift::identity(32).unwrap()).unwrap();
        assert!(darboux_u(&id).max_abs() < 1e-15);
        let rot = TrumpetPoint::new(ell, DiffeoLift::rotation(32, 0.3).unwrap()).unwrap();
        assert!(darboux_u(&rot).values().iter().all(|v| (v - ell * 0.3).abs() < 1e-14));
    }

    #[test]
    fn darboux_pushforward_matches_fd() {
        let n = 128;
        let mut rng = random::rng(6, 0);
        let p = random_point(&mut rng, n);
        let v = random_tangent(&mut rng, n);
        let h = fd_step(v.sup_norm());
        let fd = (&darboux_u(&p.moved(&v, h).unwrap()) - &darboux_u(&p.moved(&v, -h).unwrap())).scale(0.5 / h);
        assert!(fd.dist(&darboux_pushforward(&p, &v)) < 1e-7);
    }

    #[test]
    fn gram_is_nondegenerate() {
        let r = gram_check(1.3, 128, 8).unwrap();
        assert_eq!(r.dimension, 18);
        assert!(r.closed_form_residual < 1e-9 * r.largest_singular_value);
        assert!(r.smallest_singular_value > 1e-8);
        assert!((r.smallest_singular_value - 0.65).abs() < 1e-12);
    }

    #[test]
    fn orbit_check() {
        let mut rng = random::rng(8, 0);
        let r = virasoro_orbit_check(1.2, 5, 128, &mut rng).unwrap();
        assert!(r.rotation_trace_residual < 1e-6 && r.orbit_trace_residual < 1e-6);
        assert!(r.zz < 1e-14 && r.level_set < 1e-12);
    }

    #[test]
    fn json_shape() {
        let p = TrumpetPoint::new(1.5, DiffeoLift::identity(16).unwrap()).unwrap();
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v["ell"], 1.5);
        assert!(v["F"]["phi"]["values"].is_array());
        let mut bad = v.clone();
        bad["ell"] = serde_json::json!(-1.0);
        assert!(serde_json::from_value::<TrumpetPoint>(bad).is_err());
        let t = TrumpetTangent::ell_direction(16).unwrap();
        assert!(serde_json::to_value(&t).unwrap().get("dF").is_some());
    }
}
