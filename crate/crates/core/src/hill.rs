//! `sl(2,ℝ)` connections on the circle, gauge transformations and the
//! Drinfeld–Sokolov normal form.
//!
//! A boundary connection is `A = [[s/2, a], [u, −s/2]] dx`. Gauge maps act by
//! `g•A = Ad_g(A) − (dg) g⁻¹`. Positive connections (`a > 0`) are taken by a
//! unique lower-triangular gauge to `[[0, 1], [−T, 0]] dx`, which defines the
//! Hill potential `T`.

use serde::{Deserialize, Serialize};

use crate::diffeo::{DiffeoLift, HillPotential};
use crate::error::{Error, Result};
use crate::spectral::PeriodicFn;

/// Pointwise tolerance for `det h = 1`.
pub const DET_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConnectionRepr")]
pub struct BoundaryConnection {
    a: PeriodicFn,
    s: PeriodicFn,
    u: PeriodicFn,
}

#[derive(Deserialize)]
struct ConnectionRepr {
    a: PeriodicFn,
    s: PeriodicFn,
    u: PeriodicFn,
}

impl TryFrom<ConnectionRepr> for BoundaryConnection {
    type Error = Error;
    fn try_from(r: ConnectionRepr) -> Result<Self> {
        BoundaryConnection::new(r.a, r.s, r.u)
    }
}

impl BoundaryConnection {
    pub fn new(a: PeriodicFn, s: PeriodicFn, u: PeriodicFn) -> Result<Self> {
        for f in [&s, &u] {
            if f.n() != a.n() {
                return Err(Error::GridMismatch { expected: a.n(), found: f.n() });
            }
        }
        Ok(BoundaryConnection { a, s, u })
    }

    /// Constant connection `(a, s, u)`.
    pub fn constant(n: usize, a: f64, s: f64, u: f64) -> Result<Self> {
        Self::new(PeriodicFn::constant(n, a)?, PeriodicFn::constant(n, s)?, PeriodicFn::constant(n, u)?)
    }

    /// The Drinfeld–Sokolov form `[[0, 1], [−T, 0]] dx` of a potential.
    pub fn ds_form(t: &HillPotential) -> Self {
        let n = t.n();
        BoundaryConnection {
            a: PeriodicFn::from_raw(vec![1.0; n], 0),
            s: PeriodicFn::from_raw(vec![0.0; n], 0),
            u: t.as_fn().scale(-1.0).with_weight(0),
        }
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn a(&self) -> &PeriodicFn {
        &self.a
    }

    pub fn s(&self) -> &PeriodicFn {
        &self.s
    }

    pub fn u(&self) -> &PeriodicFn {
        &self.u
    }

    pub fn is_positive(&self) -> bool {
        self.first_nonpositive().is_none()
    }

    fn first_nonpositive(&self) -> Option<(usize, f64)> {
        self.a.values().iter().enumerate().find(|(_, &v)| v <= 0.0).map(|(i, &v)| (i, v))
    }

    fn require_positive(&self) -> Result<()> {
        match self.first_nonpositive() {
            Some((index, value)) => Err(Error::NotPositive { quantity: "a", index, value }),
            None => Ok(()),
        }
    }

    /// Largest entrywise difference to another connection.
    pub fn dist(&self, other: &BoundaryConnection) -> f64 {
        self.a.dist(&other.a).max(self.s.dist(&other.s)).max(self.u.dist(&other.u))
    }

    /// `F*A`: each coefficient sampled at `F(x)` and multiplied by `F'(x)`.
    pub fn pullback(&self, f: &DiffeoLift) -> Self {
        let pts = f.lift_values();
        let d1 = f.derivative();
        let pull = |c: &PeriodicFn| {
            let vals = c.interpolate(&pts).iter().zip(d1.values()).map(|(v, d)| v * d).collect();
            PeriodicFn::from_raw(vals, c.weight())
        };
        BoundaryConnection { a: pull(&self.a), s: pull(&self.s), u: pull(&self.u) }
    }
}

/// A smooth map `S¹ → SL(2,ℝ)` stored entrywise.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaugeMap {
    g11: PeriodicFn,
    g12: PeriodicFn,
    g21: PeriodicFn,
    g22: PeriodicFn,
}

impl GaugeMap {
    pub fn new(g11: PeriodicFn, g12: PeriodicFn, g21: PeriodicFn, g22: PeriodicFn) -> Result<Self> {
        let n = g11.n();
        for g in [&g12, &g21, &g22] {
            if g.n() != n {
                return Err(Error::GridMismatch { expected: n, found: g.n() });
            }
        }
        let h = GaugeMap { g11, g12, g21, g22 };
        for i in 0..n {
            let det = h.at(i).det();
            if (det - 1.0).abs() > DET_TOL {
                return Err(Error::NotUnimodular { index: i, det });
            }
        }
        Ok(h)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let one = PeriodicFn::constant(n, 1.0)?;
        let zero = PeriodicFn::zeros(n)?;
        Self::new(one.clone(), zero.clone(), zero, one)
    }

    /// Constant diagonal gauge `diag(λ, 1/λ)`.
    pub fn diagonal(n: usize, lambda: f64) -> Result<Self> {
        let zero = PeriodicFn::zeros(n)?;
        Self::new(PeriodicFn::constant(n, lambda)?, zero.clone(), zero, PeriodicFn::constant(n, 1.0 / lambda)?)
    }

    /// `[[1, 0], [q, 1]] · diag(d^{-1/2}, d^{1/2})` for `d > 0`.
    fn lower_unipotent_times_diagonal(q: &PeriodicFn, d: &PeriodicFn) -> Self {
        let n = q.n();
        let inv_sqrt = d.map(|v| v.powf(-0.5));
        let sqrt = d.map(f64::sqrt);
        GaugeMap {
            g11: inv_sqrt.clone(),
            g12: PeriodicFn::from_raw(vec![0.0; n], 0),
            g21: q * &inv_sqrt,
            g22: sqrt,
        }
    }

    pub fn n(&self) -> usize {
        self.g11.n()
    }

    pub fn entries(&self) -> [&PeriodicFn; 4] {
        [&self.g11, &self.g12, &self.g21, &self.g22]
    }

    pub(crate) fn at(&self, i: usize) -> Mat2 {
        Mat2([
            [self.g11.values()[i], self.g12.values()[i]],
            [self.g21.values()[i], self.g22.values()[i]],
        ])
    }

    /// Pointwise product `self · other`.
    pub fn mul(&self, other: &GaugeMap) -> GaugeMap {
        let n = self.n();
        let mut e = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        for i in 0..n {
            let m = self.at(i).mul(&other.at(i)).0;
            e[0][i] = m[0][0];
            e[1][i] = m[0][1];
            e[2][i] = m[1][0];
            e[3][i] = m[1][1];
        }
        let [a, b, c, d] = e;
        GaugeMap {
            g11: PeriodicFn::from_raw(a, 0),
            g12: PeriodicFn::from_raw(b, 0),
            g21: PeriodicFn::from_raw(c, 0),
            g22: PeriodicFn::from_raw(d, 0),
        }
    }

    pub fn dist(&self, other: &GaugeMap) -> f64 {
        self.entries().iter().zip(other.entries()).fold(0.0, |m, (a, b)| m.max(a.dist(b)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &o.0;
        Mat2([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }

    /// Inverse of a unimodular matrix.
    pub fn inv_sl2(&self) -> Mat2 {
        let a = &self.0;
        Mat2([[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }
}

/// `h•A = Ad_h(A) − (dh) h⁻¹`, with `dh` computed spectrally.
pub fn gauge_transform(h: &GaugeMap, conn: &BoundaryConnection) -> Result<BoundaryConnection> {
    let n = conn.n();
    if h.n() != n {
        return Err(Error::GridMismatch { expected: n, found: h.n() });
    }
    let dh = GaugeMap {
        g11: h.g11.derivative(1),
        g12: h.g12.derivative(1),
        g21: h.g21.derivative(1),
        g22: h.g22.derivative(1),
    };
    let (mut a, mut s, mut u) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for i in 0..n {
        let hi = h.at(i);
        let hinv = hi.inv_sl2();
        let half_s = 0.5 * conn.s.values()[i];
        let m = Mat2([[half_s, conn.a.values()[i]], [conn.u.values()[i], -half_s]]);
        let ad = hi.mul(&m).mul(&hinv);
        let inhom = dh.at(i).mul(&hinv);
        let r = [
            [ad.0[0][0] - inhom.0[0][0], ad.0[0][1] - inhom.0[0][1]],
            [ad.0[1][0] - inhom.0[1][0], ad.0[1][1] - inhom.0[1][1]],
        ];
        let tr = r[0][0] + r[1][1];
        let scale = 1.0 + r.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if tr.abs() > 1e-10 * scale {
            return Err(Error::Numerical(format!("gauge-transformed connection has trace {tr:e} at gridpoint {i}")));
        }
        a[i] = r[0][1];
        s[i] = r[0][0] - r[1][1];
        u[i] = r[1][0];
    }
    BoundaryConnection::new(PeriodicFn::new(a, 0)?, PeriodicFn::new(s, 0)?, PeriodicFn::new(u, 0)?)
}

/// Gauge `h` taking a positive connection to Drinfeld–Sokolov form, together
/// with the resulting potential `T = −(h•A)₂₁`.
///
/// `h = [[1, 0], [s/2 + a'/(2a), 1]] · diag(a^{-1/2}, a^{1/2})`.
pub fn ds_normalize(conn: &BoundaryConnection) -> Result<(GaugeMap, HillPotential)> {
    conn.require_positive()?;
    let a = &conn.a;
    let da = a.derivative(1);
    let ratio = &da / a;
    let q = conn.s.zip_with(&ratio, |s, r| 0.5 * s + 0.5 * r);
    let h = GaugeMap::lower_unipotent_times_diagonal(&q, a);
    let normal = gauge_transform(&h, conn)?;
    let off = normal.a.map(|v| v - 1.0).max_abs().max(normal.s.max_abs());
    let scale = 1.0 + conn.a.max_abs() + conn.s.max_abs() + da.max_abs();
    if off > 1e-9 * scale {
        return Err(Error::Numerical(format!("normalized connection misses the slice by {off:e}")));
    }
    Ok((h, HillPotential::new(normal.u.scale(-1.0))))
}

/// `T = ½(a''/a − (3/2)(a'/a)²) − a u − ¼ s² − ½ (a'/a) s + ½ s'`.
pub fn hill_from_asu(conn: &BoundaryConnection) -> Result<HillPotential> {
    conn.require_positive()?;
    let (a, s, u) = (conn.a.values(), conn.s.values(), conn.u.values());
    let d1 = conn.a.derivative(1);
    let d2 = conn.a.derivative(2);
    let ds = conn.s.derivative(1);
    let vals = (0..conn.n())
        .map(|i| {
            let r1 = d1.values()[i] / a[i];
            let r2 = d2.values()[i] / a[i];
            0.5 * (r2 - 1.5 * r1 * r1) - a[i] * u[i] - 0.25 * s[i] * s[i] - 0.5 * r1 * s[i]
                + 0.5 * ds.values()[i]
        })
        .collect();
    Ok(HillPotential::new(PeriodicFn::new(vals, 2)?))
}

/// Coordinate form of the boundary moment map:
/// `−½ s' + ¼ s² + a u − ½ a''` (weight 2).
pub fn hat_moment(conn: &BoundaryConnection) -> PeriodicFn {
    let ds = conn.s.derivative(1);
    let d2a = conn.a.derivative(2);
    let vals = (0..conn.n())
        .map(|i| {
            let s = conn.s.values()[i];
            -0.5 * ds.values()[i] + 0.25 * s * s + conn.a.values()[i] * conn.u.values()[i]
                - 0.5 * d2a.values()[i]
        })
        .collect();
    PeriodicFn::from_raw(vals, 2)
}

/// `h = [[1, 0], [½F''/F', 1]] · diag(F'^{-1/2}, F'^{1/2})`, the gauge
/// returning `F*A_T` to the slice with potential `F⁻¹·T`.
pub fn ds_splitting_gauge(f: &DiffeoLift) -> GaugeMap {
    let d1 = f.derivative();
    let d2 = f.higher_derivative(2);
    let q = d2.zip_with(&d1, |b, a| 0.5 * b / a);
    GaugeMap::lower_unipotent_times_diagonal(&q, &d1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitClass {
    Hyperbolic,
    Parabolic,
    Elliptic,
}

/// Fundamental solution of `u'' + T u = 0` over one period.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monodromy {
    pub matrix: [[f64; 2]; 2],
    pub trace: f64,
    pub class: OrbitClass,
}

const CLASS_TOL: f64 = 1e-9;

impl Monodromy {
    /// `2·arccosh(|tr|/2)` for hyperbolic monodromy.
    pub fn hyperbolic_length(&self) -> Option<f64> {
        match self.class {
            OrbitClass::Hyperbolic => Some(2.0 * (0.5 * self.trace.abs()).acosh()),
            _ => None,
        }
    }

    pub fn det(&self) -> f64 {
        Mat2(self.matrix).det()
    }
}

/// Monodromy of the Hill equation, integrated with classical RK4 using
/// `8n` steps per period. `T` is resampled spectrally at the half steps.
pub fn monodromy(t: &HillPotential) -> Result<Monodromy> {
    let n = t.n();
    let steps = 8 * n;
    let h = 1.0 / steps as f64;
    let fine = t.as_fn().upsample(16);
    let tv = fine.values();
    // y = (u, u'), columns of the fundamental matrix integrated together
    let rhs = |ti: f64, y: [f64; 4]| -> [f64; 4] { [y[1], -ti * y[0], y[3], -ti * y[2]] };
    let mut y = [1.0, 0.0, 0.0, 1.0];
    for k in 0..steps {
        let t0 = tv[2 * k];
        let th = tv[2 * k + 1];
        let t1 = tv[(2 * k + 2) % tv.len()];
        let k1 = rhs(t0, y);
        let y2: [f64; 4] = std::array::from_fn(|i| y[i] + 0.5 * h * k1[i]);
        let k2 = rhs(th, y2);
        let y3: [f64; 4] = std::array::from_fn(|i| y[i] + 0.5 * h * k2[i]);
        let k3 = rhs(th, y3);
        let y4: [f64; 4] = std::array::from_fn(|i| y[i] + h * k3[i]);
        let k4 = rhs(t1, y4);
        for i in 0..4 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("Hill equation integration blew up at step {k}")));
        }
    }
    // columns: (u1, u1'), (u2, u2')
    let matrix = [[y[0], y[2]], [y[1], y[3]]];
    let m = Mat2(matrix);
    let det = m.det();
    if (det - 1.0).abs() > 1e-8 {
        return Err(Error::Numerical(format!("monodromy determinant {det} differs from 1")));
    }
    let trace = m.trace();
    let class = if trace.abs() > 2.0 + CLASS_TOL {
        OrbitClass::Hyperbolic
    } else if trace.abs() < 2.0 - CLASS_TOL {
        OrbitClass::Elliptic
    } else {
        OrbitClass::Parabolic
    };
    Ok(Monodromy { matrix, trace, class })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffeo::act_on_hill;
    use crate::random;

    #[test]
    fn identity_gauge_is_trivial() {
        let mut rng = random::rng(1, 0);
        let a = random::positive_connection(&mut rng, 64);
        let b = gauge_transform(&GaugeMap::identity(64).unwrap(), &a).unwrap();
        assert!(a.dist(&b) < 1e-13);
    }

    #[test]
    fn constant_diagonal_gauge() {
        // Ad_diag(λ,1/λ): a ↦ λ² a, u ↦ u / λ², s fixed
        let mut rng = random::rng(2, 0);
        let a = random::positive_connection(&mut rng, 64);
        let lam = 1.7;
        let b = gauge_transform(&GaugeMap::diagonal(64, lam).unwrap(), &a).unwrap();
        assert!(b.a().dist(&a.a().scale(lam * lam)) < 1e-12);
        assert!(b.u().dist(&a.u().scale(1.0 / (lam * lam))) < 1e-12);
        assert!(b.s().dist(a.s()) < 1e-12);
    }

    #[test]
    fn gauge_maps_validate_det() {
        let n = 16;
        let two = PeriodicFn::constant(n, 2.0).unwrap();
        let z = PeriodicFn::zeros(n).unwrap();
        assert!(matches!(GaugeMap::new(two.clone(), z.clone(), z, two), Err(Error::NotUnimodular { index: 0, .. })));
    }

    #[test]
    fn ds_normalize_slice_input() {
        let mut rng = random::rng(5, 0);
        let t0 = random::potential(&mut rng, 64, 1.0);
        let conn = BoundaryConnection::ds_form(&t0);
        let (h, t) = ds_normalize(&conn).unwrap();
        assert!(h.dist(&GaugeMap::identity(64).unwrap()) < 1e-12);
        assert!(t.dist(&t0) < 1e-12);
    }

    #[test]
    fn model_potentials() {
        for ell in [0.5, 1.0, 2.0] {
            let c = BoundaryConnection::constant(32, 1.0, 0.0, ell * ell / 4.0).unwrap();
            let expect = -ell * ell / 4.0;
            assert!(ds_normalize(&c).unwrap().1.values().iter().all(|v| (v - expect).abs() < 1e-10));
            assert!(hill_from_asu(&c).unwrap().values().iter().all(|v| (v - expect).abs() < 1e-10));
        }
        let disk = BoundaryConnection::constant(32, 1.0, 0.0, -0.25).unwrap();
        assert!(hill_from_asu(&disk).unwrap().values().iter().all(|v| (v - 0.25).abs() < 1e-12));
    }

    #[test]
    fn ds_normalize_lands_in_slice() {
        let mut rng = random::rng(6, 0);
        let conn = random::positive_connection(&mut rng, 128);
        let (h, _) = ds_normalize(&conn).unwrap();
        let b = gauge_transform(&h, &conn).unwrap();
        assert!(b.a().map(|v| v - 1.0).max_abs() < 1e-9);
        assert!(b.s().max_abs() < 1e-9);
    }

    #[test]
    fn rejects_non_positive() {
        let mut conn = BoundaryConnection::constant(16, 1.0, 0.0, 0.0).unwrap();
        let mut a = vec![1.0; 16];
        a[5] = -0.1;
        conn.a = PeriodicFn::new(a, 0).unwrap();
        assert!(matches!(ds_normalize(&conn), Err(Error::NotPositive { index: 5, .. })));
        assert!(matches!(hill_from_asu(&conn), Err(Error::NotPositive { index: 5, .. })));
    }

    #[test]
    fn hat_moment_on_slice() {
        let mut rng = random::rng(7, 0);
        let t = random::potential(&mut rng, 64, 1.0);
        let m = hat_moment(&BoundaryConnection::ds_form(&t));
        assert!(m.dist(&t.as_fn().scale(-1.0)) < 1e-13);
        assert!(hat_moment(&BoundaryConnection::constant(16, 1.0, 0.0, 0.0).unwrap()).max_abs() == 0.0);
    }

    #[test]
    fn hat_moment_weak_pairing() {
        // ∫(½ s f' − ½ a f'' + ¼ s² f + a u f) before integration by parts
        let mut rng = random::rng(8, 0);
        let conn = random::positive_connection(&mut rng, 128);
        for _ in 0..5 {
            let f = random::smooth(&mut rng, 128, 4, 1.0);
            let (a, s, u) = (conn.a(), conn.s(), conn.u());
            let weak = (0..128)
                .map(|i| {
                    let (a, s, u) = (a.values()[i], s.values()[i], u.values()[i]);
                    0.5 * s * f.derivative(1).values()[i] - 0.5 * a * f.derivative(2).values()[i]
                        + 0.25 * s * s * f.values()[i]
                        + a * u * f.values()[i]
                })
                .sum::<f64>()
                / 128.0;
            let strong = (&hat_moment(&conn) * &f).integral();
            assert!((weak - strong).abs() < 1e-10, "{weak} vs {strong}");
        }
    }

    #[test]
    fn monodromy_closed_forms() {
        let m0 = monodromy(&HillPotential::constant(64, 0.0).unwrap()).unwrap();
        assert_eq!(m0.class, OrbitClass::Parabolic);
        assert!((m0.trace - 2.0).abs() < 1e-12);
        assert!((m0.matrix[0][1] - 1.0).abs() < 1e-12);
        for ell in [0.5, 1.0, 2.0] {
            let m = monodromy(&HillPotential::trumpet(64, ell).unwrap()).unwrap();
            assert_eq!(m.class, OrbitClass::Hyperbolic);
            assert!((m.trace - 2.0 * (ell / 2.0).cosh()).abs() < 1e-10);
            assert!((m.hyperbolic_length().unwrap() - ell).abs() < 1e-9);
        }
        // T = π² gives u = cos(πx): monodromy −I
        let m = monodromy(&HillPotential::constant(64, std::f64::consts::PI.powi(2)).unwrap()).unwrap();
        assert!((m.trace + 2.0).abs() < 1e-9);
        let e = monodromy(&HillPotential::constant(64, 1.0).unwrap()).unwrap();
        assert_eq!(e.class, OrbitClass::Elliptic);
        assert!((e.trace - 2.0 * 1f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn monodromy_trace_is_action_invariant() {
        let mut rng = random::rng(9, 0);
        let t = random::potential(&mut rng, 256, 1.0);
        let tr = monodromy(&t).unwrap().trace;
        for _ in 0..3 {
            let f = random::diffeo(&mut rng, 256, 0.5);
            let tr2 = monodromy(&act_on_hill(&f, &t)).unwrap().trace;
            assert!((tr - tr2).abs() < 1e-6, "{tr} vs {tr2}");
        }
    }

    #[test]
    fn splitting_gauge_trivial_cases() {
        let id = DiffeoLift::identity(32).unwrap();
        assert!(ds_splitting_gauge(&id).dist(&GaugeMap::identity(32).unwrap()) < 1e-14);
        let r = DiffeoLift::rotation(32, 0.4).unwrap();
        assert!(ds_splitting_gauge(&r).dist(&GaugeMap::identity(32).unwrap()) < 1e-12);
    }

    #[test]
    fn splitting_gauge_equivariance() {
        let mut rng = random::rng(10, 0);
        let n = 256;
        let t = random::potential(&mut rng, n, 1.0);
        let f = random::diffeo(&mut rng, n, 0.5);
        let pulled = BoundaryConnection::ds_form(&t).pullback(&f);
        let moved = gauge_transform(&ds_splitting_gauge(&f), &pulled).unwrap();
        let expect = BoundaryConnection::ds_form(&act_on_hill(&f, &t));
        assert!(moved.dist(&expect) < 1e-7, "{}", moved.dist(&expect));
    }
}
