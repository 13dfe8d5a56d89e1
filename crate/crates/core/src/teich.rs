//! Fenchel–Nielsen model of Teichmüller space with ideal boundary: interior
//! length/twist pairs and one trumpet per boundary circle.

use serde::{Deserialize, Serialize};

use crate::diffeo::{act_on_hill, compose, invert, DiffeoLift, HillPotential};
use crate::error::{Error, Result};
use crate::trumpet::{moment_diff, omega_n, TrumpetPoint, TrumpetTangent};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FNRepr")]
pub struct FNPoint {
    g: u32,
    r: usize,
    interior: Vec<(f64, f64)>,
    boundary: Vec<TrumpetPoint>,
}

#[derive(Deserialize)]
struct FNRepr {
    g: u32,
    r: usize,
    interior: Vec<(f64, f64)>,
    boundary: Vec<TrumpetPoint>,
}

impl TryFrom<FNRepr> for FNPoint {
    type Error = Error;
    fn try_from(p: FNRepr) -> Result<Self> {
        FNPoint::new(p.g, p.r, p.interior, p.boundary)
    }
}

/// Number of interior curves `3g − 3 + r` of a pants decomposition, or an
/// error unless `2 − 2g − r < 0`.
pub fn interior_count(g: u32, r: usize) -> Result<usize> {
    let euler = 2 - 2 * g as i64 - r as i64;
    if euler >= 0 {
        return Err(Error::Domain(format!("surface of genus {g} with {r} boundary circles has Euler characteristic {euler} ≥ 0")));
    }
    Ok((3 * g as i64 - 3 + r as i64) as usize)
}

impl FNPoint {
    pub fn new(g: u32, r: usize, interior: Vec<(f64, f64)>, boundary: Vec<TrumpetPoint>) -> Result<Self> {
        let m = interior_count(g, r)?;
        if interior.len() != m {
            return Err(Error::Dimension(format!("expected {m} interior (ℓ, τ) pairs, got {}", interior.len())));
        }
        if boundary.len() != r {
            return Err(Error::Dimension(format!("expected {r} trumpets, got {}", boundary.len())));
        }
        if let Some((i, &(l, t))) = interior.iter().enumerate().find(|(_, &(l, t))| l <= 0.0 || !l.is_finite() || !t.is_finite()) {
            return Err(Error::Domain(format!("interior pair {i} = ({l}, {t}) needs ℓ > 0 and finite τ")));
        }
        if let Some(j) = boundary.iter().position(|b| b.n() != boundary[0].n()) {
            return Err(Error::GridMismatch { expected: boundary[0].n(), found: boundary[j].n() });
        }
        Ok(FNPoint { g, r, interior, boundary })
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn boundary_count(&self) -> usize {
        self.r
    }

    pub fn interior(&self) -> &[(f64, f64)] {
        &self.interior
    }

    pub fn boundary(&self) -> &[TrumpetPoint] {
        &self.boundary
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FNTangent {
    pub interior: Vec<(f64, f64)>,
    pub boundary: Vec<TrumpetTangent>,
}

impl FNTangent {
    /// Zero tangent shaped like `p`.
    pub fn zero(p: &FNPoint) -> Result<Self> {
        let n = p.boundary.first().map_or(16, TrumpetPoint::n);
        Ok(FNTangent {
            interior: vec![(0.0, 0.0); p.interior.len()],
            boundary: (0..p.r).map(|_| TrumpetTangent::zero(n)).collect::<Result<_>>()?,
        })
    }

    fn check(&self, p: &FNPoint) -> Result<()> {
        if self.interior.len() != p.interior.len() || self.boundary.len() != p.boundary.len() {
            return Err(Error::Dimension(format!(
                "tangent has {} interior and {} boundary components, point has {} and {}",
                self.interior.len(),
                self.boundary.len(),
                p.interior.len(),
                p.boundary.len()
            )));
        }
        for (b, q) in self.boundary.iter().zip(&p.boundary) {
            if b.d_f.n() != q.n() {
                return Err(Error::GridMismatch { expected: q.n(), found: b.d_f.n() });
            }
        }
        Ok(())
    }
}

/// `½ Σ dℓ_i∧dτ_i + Σ_j ω_N` on the trumpets.
pub fn omega_teich(p: &FNPoint, v: &FNTangent, w: &FNTangent) -> Result<f64> {
    v.check(p)?;
    w.check(p)?;
    let interior: f64 = v.interior.iter().zip(&w.interior).map(|(a, b)| 0.5 * (a.0 * b.1 - b.0 * a.1)).sum();
    let boundary: f64 = p.boundary.iter().zip(v.boundary.iter().zip(&w.boundary)).map(|(q, (a, b))| omega_n(q, a, b)).sum();
    Ok(interior + boundary)
}

/// Moment map for the boundary action: `−F_j⁻¹·L(ℓ_j)` for each trumpet.
pub fn boundary_moment(p: &FNPoint) -> Vec<HillPotential> {
    p.boundary.iter().map(moment_diff).collect()
}

/// `F_j ↦ F_j∘F⁻¹`, all other parameters unchanged.
pub fn boundary_action(p: &FNPoint, j: usize, f: &DiffeoLift) -> Result<FNPoint> {
    let b = p.boundary.get(j).ok_or(Error::IndexOutOfRange { index: j, len: p.r })?;
    if f.n() != b.n() {
        return Err(Error::GridMismatch { expected: b.n(), found: f.n() });
    }
    let mut out = p.clone();
    out.boundary[j] = TrumpetPoint::new(b.ell(), compose(b.lift(), &invert(f)?)?)?;
    Ok(out)
}

/// Pushforward of a tangent under [`boundary_action`]: `δF_j ↦ δF_j∘F⁻¹`.
pub fn transport_tangent(v: &FNTangent, j: usize, f: &DiffeoLift) -> Result<FNTangent> {
    let b = v.boundary.get(j).ok_or(Error::IndexOutOfRange { index: j, len: v.boundary.len() })?;
    let finv = invert(f)?;
    let points = crate::spectral::PeriodicFn::new(finv.lift_values(), 0)?;
    let mut out = v.clone();
    out.boundary[j] = TrumpetTangent::new(b.d_ell, b.d_f.compose_samples(&points));
    Ok(out)
}

/// Image of a moment value under the action of `F`: `Φ ↦ −F·(−Φ)`, where
/// `F·T = act_on_hill(F⁻¹, T)`.
pub fn transport_moment(phi: &HillPotential, f: &DiffeoLift) -> Result<HillPotential> {
    let minus = HillPotential::new(-phi.as_fn());
    Ok(HillPotential::new(-act_on_hill(&invert(f)?, &minus).as_fn()))
}
