//! Exterior calculus on `(x, y)` grids for coframes of hyperbolic 0-metrics.
//!
//! `x` is periodic with `nx` samples and is differentiated spectrally; `y`
//! ranges over a strictly increasing list of interior heights and is
//! differentiated with five-point finite-difference stencils (central in the
//! interior, one-sided at the two ends). A 1-form is a pair of grids
//! `(α_x, α_y)`; 2-forms are stored by their `dx∧dy` coefficient.

use serde::{Deserialize, Serialize};

use crate::diffeo::HillPotential;
use crate::error::{Error, Result};
use crate::spectral::{self, PeriodicFn};

/// Geometric grading of the default height grids.
pub const DEFAULT_GRADING: f64 = 1.002;

/// Rows at each end of the `y` range that use one-sided stencils.
pub const EDGE_ROWS: usize = 2;

/// Largest off-pattern component of `F_A` (relative to the volume form)
/// accepted by [`connection_curvature`].
pub const CURVATURE_PATTERN_TOL: f64 = 1e-8;

/// Relative gate for successive boundary extrapolations.
pub const EXTRAPOLATION_GATE: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Grid2DRepr")]
pub struct Grid2D {
    nx: usize,
    y: Vec<f64>,
    data: Vec<f64>,
}

#[derive(Deserialize)]
struct Grid2DRepr {
    nx: usize,
    y: Vec<f64>,
    data: Vec<f64>,
}

impl TryFrom<Grid2DRepr> for Grid2D {
    type Error = Error;
    fn try_from(r: Grid2DRepr) -> Result<Self> {
        Grid2D::new(r.nx, r.y, r.data)
    }
}

fn check_heights(y: &[f64]) -> Result<()> {
    if y.is_empty() {
        return Err(Error::Domain("empty list of heights".into()));
    }
    if let Some(j) = y.iter().position(|&v| v <= 0.0 || !v.is_finite()) {
        return Err(Error::Domain(format!("height y[{j}] = {} is not a positive finite number", y[j])));
    }
    if let Some(j) = y.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::Domain(format!("heights not strictly increasing at index {}", j + 1)));
    }
    Ok(())
}

/// Geometric heights `y_min, y_min·ratio, …` up to `y_max`.
pub fn graded_heights(y_min: f64, y_max: f64, ratio: f64) -> Vec<f64> {
    assert!(y_min > 0.0 && ratio > 1.0 && y_max > y_min);
    let mut out = vec![y_min];
    while let Some(&last) = out.last() {
        let next = last * ratio;
        if next > y_max * (1.0 + 1e-12) {
            break;
        }
        out.push(next);
    }
    out
}

impl Grid2D {
    pub fn new(nx: usize, y: Vec<f64>, data: Vec<f64>) -> Result<Self> {
        spectral::check_sample_count(nx)?;
        check_heights(&y)?;
        if data.len() != nx * y.len() {
            return Err(Error::GridMismatch { expected: nx * y.len(), found: data.len() });
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Grid2D { nx, y, data })
    }

    pub fn from_fn(nx: usize, y: &[f64], f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let xs = spectral::grid(nx);
        let data = y.iter().flat_map(|&yy| xs.iter().map(move |&xx| (xx, yy))).map(|(x, y)| f(x, y)).collect();
        Self::new(nx, y.to_vec(), data)
    }

    fn like(&self, data: Vec<f64>) -> Grid2D {
        Grid2D { nx: self.nx, y: self.y.clone(), data }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.y.len()
    }

    pub fn heights(&self) -> &[f64] {
        &self.y
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.nx + col]
    }

    pub fn row(&self, j: usize) -> PeriodicFn {
        PeriodicFn::from_raw(self.data[j * self.nx..(j + 1) * self.nx].to_vec(), 0)
    }

    fn same_shape(&self, other: &Grid2D) {
        assert!(self.nx == other.nx && self.y == other.y, "grid shape mismatch");
    }

    pub fn zip_with(&self, other: &Grid2D, f: impl Fn(f64, f64) -> f64) -> Grid2D {
        self.same_shape(other);
        self.like(self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect())
    }

    /// Pointwise map with access to `(x, y)`.
    pub fn map_xy(&self, f: impl Fn(f64, f64, f64) -> f64) -> Grid2D {
        let xs = spectral::grid(self.nx);
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(i, &v)| f(xs[i % self.nx], self.y[i / self.nx], v))
            .collect();
        self.like(data)
    }

    /// Spectral `∂/∂x`, row by row.
    pub fn dx(&self) -> Grid2D {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.ny() {
            data.extend_from_slice(self.row(j).derivative(1).values());
        }
        self.like(data)
    }

    /// Five-point finite-difference `∂/∂y` on the (possibly non-uniform)
    /// heights. Needs at least five rows.
    pub fn dy(&self) -> Result<Grid2D> {
        let ny = self.ny();
        if ny < 5 {
            return Err(Error::Domain(format!("need at least 5 heights for y-derivatives, have {ny}")));
        }
        let mut data = vec![0.0; self.data.len()];
        for j in 0..ny {
            let start = j.saturating_sub(2).min(ny - 5);
            let nodes = &self.y[start..start + 5];
            let w = fd_weights(self.y[j], nodes);
            for k in 0..self.nx {
                data[j * self.nx + k] = (0..5).map(|i| w[i] * self.get(start + i, k)).sum();
            }
        }
        Ok(self.like(data))
    }

    /// Largest `|value|` over rows `skip..ny−skip`.
    pub fn max_abs_interior(&self, skip: usize) -> f64 {
        let rows = skip..self.ny().saturating_sub(skip);
        rows.flat_map(|j| self.data[j * self.nx..(j + 1) * self.nx].iter())
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// First-derivative weights at `z` for the given nodes (Fornberg's recursion).
fn fd_weights(z: f64, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    // c[i][k]: weight of node i for derivative order k (k = 0, 1)
    let mut c = vec![[0.0f64; 2]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(1);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|w| w[1]).collect()
}

/// A 1-form `α_x dx + α_y dy` on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct OneForm {
    pub x: Grid2D,
    pub y: Grid2D,
}

impl OneForm {
    /// `dx∧dy` coefficient of `dα`.
    pub fn exterior_derivative(&self) -> Result<Grid2D> {
        let dxy = self.y.dx();
        let dyx = self.x.dy()?;
        Ok(dxy.zip_with(&dyx, |a, b| a - b))
    }

    /// `dx∧dy` coefficient of `self ∧ other`.
    pub fn wedge(&self, other: &OneForm) -> Grid2D {
        let a = self.x.zip_with(&other.y, |p, q| p * q);
        let b = self.y.zip_with(&other.x, |p, q| p * q);
        a.zip_with(&b, |p, q| p - q)
    }
}

/// Sampled oriented coframe `(α₁, α₂)` with its spin connection `κ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoframeRepr", into = "CoframeRepr")]
pub struct CoframeGrid {
    alpha1: OneForm,
    alpha2: OneForm,
    kappa: OneForm,
}

#[derive(Serialize, Deserialize)]
struct CoframeComponents {
    alpha1_x: Vec<f64>,
    alpha1_y: Vec<f64>,
    alpha2_x: Vec<f64>,
    alpha2_y: Vec<f64>,
    kappa_x: Vec<f64>,
    kappa_y: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct CoframeRepr {
    nx: usize,
    y: Vec<f64>,
    data: CoframeComponents,
}

impl TryFrom<CoframeRepr> for CoframeGrid {
    type Error = Error;
    fn try_from(r: CoframeRepr) -> Result<Self> {
        let g = |v: Vec<f64>| Grid2D::new(r.nx, r.y.clone(), v);
        let d = r.data;
        CoframeGrid::new(
            OneForm { x: g(d.alpha1_x)?, y: g(d.alpha1_y)? },
            OneForm { x: g(d.alpha2_x)?, y: g(d.alpha2_y)? },
            OneForm { x: g(d.kappa_x)?, y: g(d.kappa_y)? },
        )
    }
}

impl From<CoframeGrid> for CoframeRepr {
    fn from(c: CoframeGrid) -> Self {
        CoframeRepr {
            nx: c.alpha1.x.nx,
            y: c.alpha1.x.y.clone(),
            data: CoframeComponents {
                alpha1_x: c.alpha1.x.data,
                alpha1_y: c.alpha1.y.data,
                alpha2_x: c.alpha2.x.data,
                alpha2_y: c.alpha2.y.data,
                kappa_x: c.kappa.x.data,
                kappa_y: c.kappa.y.data,
            },
        }
    }
}

impl CoframeGrid {
    pub fn new(alpha1: OneForm, alpha2: OneForm, kappa: OneForm) -> Result<Self> {
        for g in [&alpha1.y, &alpha2.x, &alpha2.y, &kappa.x, &kappa.y] {
            if g.nx != alpha1.x.nx || g.y != alpha1.x.y {
                return Err(Error::Dimension("coframe components live on different grids".into()));
            }
        }
        let vol = alpha1.wedge(&alpha2);
        if let Some(i) = vol.data.iter().position(|&v| v <= 0.0) {
            return Err(Error::Orientation { row: i / vol.nx, col: i % vol.nx, value: vol.data[i] });
        }
        Ok(CoframeGrid { alpha1, alpha2, kappa })
    }

    pub fn alpha1(&self) -> &OneForm {
        &self.alpha1
    }

    pub fn alpha2(&self) -> &OneForm {
        &self.alpha2
    }

    pub fn kappa(&self) -> &OneForm {
        &self.kappa
    }

    pub fn nx(&self) -> usize {
        self.alpha1.x.nx
    }

    pub fn heights(&self) -> &[f64] {
        &self.alpha1.x.y
    }

    /// `dx∧dy` coefficient of `α₁∧α₂`.
    pub fn volume(&self) -> Grid2D {
        self.alpha1.wedge(&self.alpha2)
    }
}

/// Residuals of `dα₁ = −κ∧α₂`, `dα₂ = κ∧α₁` and the curvature solved from
/// `dκ = K α₁∧α₂`.
#[derive(Clone, Debug)]
pub struct StructureResiduals {
    pub r1: Grid2D,
    pub r2: Grid2D,
    pub curvature: Grid2D,
    pub volume: Grid2D,
}

impl StructureResiduals {
    /// Largest residual divided by the volume coefficient, away from the
    /// one-sided rows.
    pub fn max_normalized_residual(&self) -> f64 {
        let n1 = self.r1.zip_with(&self.volume, |r, v| r / v);
        let n2 = self.r2.zip_with(&self.volume, |r, v| r / v);
        n1.max_abs_interior(EDGE_ROWS).max(n2.max_abs_interior(EDGE_ROWS))
    }

    /// Largest `|K − target|` away from the one-sided rows.
    pub fn max_curvature_deviation(&self, target: f64) -> f64 {
        self.curvature.map_xy(|_, _, k| k - target).max_abs_interior(EDGE_ROWS)
    }
}

pub fn structure_residuals(c: &CoframeGrid) -> Result<StructureResiduals> {
    let vol = c.volume();
    let r1 = c.alpha1.exterior_derivative()?.zip_with(&c.kappa.wedge(&c.alpha2), |d, w| d + w);
    let r2 = c.alpha2.exterior_derivative()?.zip_with(&c.kappa.wedge(&c.alpha1), |d, w| d - w);
    let curvature = c.kappa.exterior_derivative()?.zip_with(&vol, |d, v| d / v);
    Ok(StructureResiduals { r1, r2, curvature, volume: vol })
}

/// Curvature of `A = ½[[α₂, α₁−κ], [α₁+κ, −α₂]]`.
///
/// For a coframe satisfying the first two structure equations
/// `F_A = ½(K + 1) · [[0, −1], [1, 0]] · α₁∧α₂`.
pub fn connection_curvature(c: &CoframeGrid) -> Result<ConnectionCurvature> {
    // matrix entries of A_x and A_y
    let entries = |pick: fn(&OneForm) -> &Grid2D| -> [Grid2D; 4] {
        let (a1, a2, k) = (pick(&c.alpha1), pick(&c.alpha2), pick(&c.kappa));
        [
            a2.map_xy(|_, _, v| 0.5 * v),
            a1.zip_with(k, |p, q| 0.5 * (p - q)),
            a1.zip_with(k, |p, q| 0.5 * (p + q)),
            a2.map_xy(|_, _, v| -0.5 * v),
        ]
    };
    let ax = entries(|o| &o.x);
    let ay = entries(|o| &o.y);
    let mut d = Vec::with_capacity(4);
    for (gy, gx) in ay.iter().zip(&ax) {
        d.push(gy.dx().zip_with(&gx.dy()?, |p, q| p - q));
    }
    let vol = c.volume();
    let (nx, ny) = (vol.nx, vol.ny());
    let mut mult = vec![0.0; vol.data.len()];
    let mut off = 0.0f64;
    for i in 0..mult.len() {
        let mx = Mat([[ax[0].data[i], ax[1].data[i]], [ax[2].data[i], ax[3].data[i]]]);
        let my = Mat([[ay[0].data[i], ay[1].data[i]], [ay[2].data[i], ay[3].data[i]]]);
        let br = mx.commutator(&my).0;
        let f11 = d[0].data[i] + br[0][0];
        let f12 = d[1].data[i] + br[0][1];
        let f21 = d[2].data[i] + br[1][0];
        let f22 = d[3].data[i] + br[1][1];
        mult[i] = 0.5 * (f21 - f12) / vol.data[i];
        let row = i / nx;
        if row >= EDGE_ROWS && row + EDGE_ROWS < ny {
            let pattern = [f11, f22, 0.5 * (f12 + f21)].iter().fold(0.0f64, |m, v| m.max(v.abs()));
            off = off.max(pattern / vol.data[i]);
        }
    }
    if off > CURVATURE_PATTERN_TOL {
        return Err(Error::Numerical(format!(
            "connection curvature has off-pattern components of relative size {off:e}"
        )));
    }
    Ok(ConnectionCurvature { multiplier: vol.like(mult), off_pattern: off })
}

#[derive(Clone, Debug)]
pub struct ConnectionCurvature {
    /// `m` in `F_A = m · [[0, −1], [1, 0]] · α₁∧α₂`.
    pub multiplier: Grid2D,
    /// Largest remaining component of `F_A` relative to the volume form,
    /// away from the one-sided rows.
    pub off_pattern: f64,
}

#[derive(Clone, Copy)]
struct Mat([[f64; 2]; 2]);

impl Mat {
    fn commutator(&self, o: &Mat) -> Mat {
        let (a, b) = (&self.0, &o.0);
        let mut r = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = (0..2).map(|k| a[i][k] * b[k][j] - b[i][k] * a[k][j]).sum();
            }
        }
        Mat(r)
    }
}

/// Boundary data `α₁ = (a dx + …)/y`, `α₂ = dy/y + s dx + …`,
/// `½(α₁ + κ) = y(u dx + …)`, and the curvature coefficient
/// `c = lim (k − 1)/y²` of the horizontal curves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryAsymptotics {
    pub a: PeriodicFn,
    pub s: PeriodicFn,
    pub u: PeriodicFn,
    pub c: PeriodicFn,
}

/// Value at `y = 0` of the quadratic through three samples.
fn extrapolate_to_zero(y: [f64; 3], v: [f64; 3]) -> f64 {
    (0..3)
        .map(|i| {
            let w: f64 = (0..3).filter(|&j| j != i).map(|j| -y[j] / (y[i] - y[j])).product();
            w * v[i]
        })
        .sum()
}

/// Richardson extrapolation of a row-wise quantity to `y = 0` using the three
/// smallest heights, gated against the estimate from the next three.
pub fn extrapolate_rows(g: &Grid2D, quantity: &'static str) -> Result<PeriodicFn> {
    if g.ny() < 4 {
        return Err(Error::Domain(format!("need at least 4 heights to extrapolate {quantity}")));
    }
    let y = &g.y;
    let mut out = Vec::with_capacity(g.nx);
    let mut gap = 0.0f64;
    let mut size = 0.0f64;
    for k in 0..g.nx {
        let e0 = extrapolate_to_zero([y[0], y[1], y[2]], [g.get(0, k), g.get(1, k), g.get(2, k)]);
        let e1 = extrapolate_to_zero([y[1], y[2], y[3]], [g.get(1, k), g.get(2, k), g.get(3, k)]);
        gap = gap.max((e0 - e1).abs());
        size = size.max(e0.abs());
        out.push(e0);
    }
    if gap > EXTRAPOLATION_GATE * (1.0 + size) {
        return Err(Error::Resolution { quantity, gap });
    }
    PeriodicFn::new(out, 0)
}

/// `c = (1/a²)(s' − (a'/a)s − ½s²) − 2u/a`; in the gauge `u = 0` this is the
/// relation between the boundary data of a chart and the curvature limit.
pub fn curvature_coefficient(a: &PeriodicFn, s: &PeriodicFn, u: &PeriodicFn) -> PeriodicFn {
    let da = a.derivative(1);
    let ds = s.derivative(1);
    let vals = (0..a.n())
        .map(|i| {
            let (a, s, u) = (a.values()[i], s.values()[i], u.values()[i]);
            (ds.values()[i] - da.values()[i] / a * s - 0.5 * s * s) / (a * a) - 2.0 * u / a
        })
        .collect();
    PeriodicFn::from_raw(vals, 2)
}

pub fn boundary_asymptotics(c: &CoframeGrid) -> Result<BoundaryAsymptotics> {
    let y = c.heights();
    if y.iter().filter(|&&v| v < 0.1).count() < 4 {
        return Err(Error::Domain("boundary extrapolation needs at least 4 heights below 0.1".into()));
    }
    let adapted = c.alpha2.y.map_xy(|_, yy, v| yy * v - 1.0);
    let worst = (0..c.nx()).fold(0.0f64, |m, k| m.max(adapted.get(0, k).abs()));
    if worst > 0.05 {
        return Err(Error::Domain(format!("coframe is not adapted: |y·α₂_y − 1| = {worst:.3} at the lowest height")));
    }
    let a = extrapolate_rows(&c.alpha1.x.map_xy(|_, yy, v| yy * v), "a")?;
    let s = extrapolate_rows(&c.alpha2.x, "s")?;
    let u = extrapolate_rows(&c.alpha1.x.zip_with(&c.kappa.x, |p, q| p + q).map_xy(|_, yy, v| v / (2.0 * yy)), "u")?;
    if let Some(index) = a.values().iter().position(|&v| v <= 0.0) {
        return Err(Error::NotPositive { quantity: "a", index, value: a.values()[index] });
    }
    let cc = curvature_coefficient(&a, &s, &u);
    Ok(BoundaryAsymptotics { a, s, u, c: cc })
}

/// Geodesic curvature in the upper half-plane of the curve `t ↦ (f, g)(x+t, y)`
/// given the `x`-derivatives at a point.
pub fn curvature_kernel(g: f64, df: f64, dg: f64, d2f: f64, d2g: f64) -> f64 {
    let speed2 = df * df + dg * dg;
    df / speed2.sqrt() + g * (df * d2g - d2f * dg) / speed2.powf(1.5)
}

/// Geodesic curvature `k(x, y)` of the horizontal curves of a chart
/// `(f, g)` into the upper half-plane.
///
/// `f_periodic` holds `f(x, y) − x`; the chart intertwines `x ↦ x + 1` with
/// the translation by one, so this part is periodic in `x`.
pub fn geodesic_curvature(f_periodic: &Grid2D, g: &Grid2D) -> Result<Grid2D> {
    f_periodic.same_shape(g);
    if let Some(i) = g.data.iter().position(|&v| v <= 0.0) {
        return Err(Error::Domain(format!(
            "chart height g = {} ≤ 0 at row {}, column {}",
            g.data[i],
            i / g.nx,
            i % g.nx
        )));
    }
    let df = f_periodic.dx();
    let d2f = df.dx();
    let dg = g.dx();
    let d2g = dg.dx();
    let data = (0..g.data.len())
        .map(|i| curvature_kernel(g.data[i], 1.0 + df.data[i], dg.data[i], d2f.data[i], d2g.data[i]))
        .collect();
    Ok(g.like(data))
}

/// `c(x) = lim_{y→0} (k(x, y) − 1)/y²` by Richardson extrapolation.
pub fn curvature_limit(k: &Grid2D) -> Result<PeriodicFn> {
    let q = k.map_xy(|_, y, v| (v - 1.0) / (y * y));
    Ok(extrapolate_rows(&q, "c")?.with_weight(2))
}

/// `T = ½(a''/a − (3/2)(a'/a)²) + (a²/2) c`.
pub fn hill_from_curvature(a: &PeriodicFn, c: &PeriodicFn) -> Result<HillPotential> {
    if let Some(index) = a.values().iter().position(|&v| v <= 0.0) {
        return Err(Error::NotPositive { quantity: "a", index, value: a.values()[index] });
    }
    let d1 = a.derivative(1);
    let d2 = a.derivative(2);
    let vals = (0..a.n())
        .map(|i| {
            let av = a.values()[i];
            let r1 = d1.values()[i] / av;
            let r2 = d2.values()[i] / av;
            0.5 * (r2 - 1.5 * r1 * r1) + 0.5 * av * av * c.values()[i]
        })
        .collect();
    Ok(HillPotential::new(PeriodicFn::new(vals, 2)?))
}

/// Chart `f = x + f0 + y f1 + y² f2`, `g = y g1 + y² g2` into the upper
/// half-plane, sampled on a grid of heights. Any such chart with `f_x > 0`,
/// `g > 0` is a local isometry for the pulled-back hyperbolic metric.
#[derive(Clone, Debug)]
pub struct TaylorChart {
    pub f: [PeriodicFn; 3],
    pub g: [PeriodicFn; 2],
}

impl TaylorChart {
    fn eval(&self, y: &[f64], pick: impl Fn(usize, f64) -> f64) -> Result<Grid2D> {
        let nx = self.f[0].n();
        let data = y.iter().flat_map(|&yy| (0..nx).map(move |k| (k, yy))).map(|(k, yy)| pick(k, yy)).collect();
        Grid2D::new(nx, y.to_vec(), data)
    }

    /// Samples of `f − x`.
    pub fn f_periodic(&self, y: &[f64]) -> Result<Grid2D> {
        let [f0, f1, f2] = &self.f;
        self.eval(y, |k, yy| f0.values()[k] + yy * f1.values()[k] + yy * yy * f2.values()[k])
    }

    pub fn g(&self, y: &[f64]) -> Result<Grid2D> {
        let [g1, g2] = &self.g;
        self.eval(y, |k, yy| yy * g1.values()[k] + yy * yy * g2.values()[k])
    }

    /// Coframe `α₁ = df/g`, `α₂ = dg/g`, `κ = −df/g` pulled back from the
    /// standard half-plane coframe. Its boundary data has `u = 0`,
    /// `a = f0'/g1` (with `f0' = 1 + φ0'`) and `s = g1'/g1`.
    pub fn coframe(&self, y: &[f64]) -> Result<CoframeGrid> {
        let fp = self.f_periodic(y)?;
        let g = self.g(y)?;
        let [_, f1, f2] = &self.f;
        let [g1, g2] = &self.g;
        let fx = fp.dx().map_xy(|_, _, v| 1.0 + v);
        let gx = g.dx();
        let fy = self.eval(y, |k, yy| f1.values()[k] + 2.0 * yy * f2.values()[k])?;
        let gy = self.eval(y, |k, yy| g1.values()[k] + 2.0 * yy * g2.values()[k])?;
        let over_g = |h: &Grid2D| h.zip_with(&g, |a, b| a / b);
        let neg = |h: &Grid2D| h.map_xy(|_, _, v| -v);
        CoframeGrid::new(
            OneForm { x: over_g(&fx), y: over_g(&fy) },
            OneForm { x: over_g(&gx), y: over_g(&gy) },
            OneForm { x: neg(&over_g(&fx)), y: neg(&over_g(&fy)) },
        )
    }
}

/// Standard coframes of hyperbolic 0-metrics in adapted coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExampleCoframe {
    /// `α₁ = dx/y`, `α₂ = dy/y`, `κ = −dx/y`.
    HalfPlane,
    /// Poincaré disk with `y = (1−r)/(1+r)` and `x` the angle:
    /// `α₁ = (1−y²)/2 · dx/y`, `α₂ = dy/y`, `κ = −(1+y²)/2 · dx/y`.
    Disk,
    /// Hyperbolic cylinder with `y = e^{−u}`:
    /// `α₁ = ℓ(1+y²)/2 · dx/y`, `α₂ = dy/y`, `κ = −ℓ(1−y²)/2 · dx/y`.
    Cylinder { ell: f64 },
    /// `α₁ = (1 − y²T) dx/y`, `α₂ = dy/y`, `κ = −(1 + y²T) dx/y`.
    FeffermanGraham { potential: PeriodicFn },
}

pub fn make_example_coframe(kind: &ExampleCoframe, nx: usize, y: &[f64]) -> Result<CoframeGrid> {
    check_heights(y)?;
    let zero = Grid2D::from_fn(nx, y, |_, _| 0.0)?;
    let dy_over_y = Grid2D::from_fn(nx, y, |_, yy| 1.0 / yy)?;
    let (a1x, kx) = match kind {
        ExampleCoframe::HalfPlane => {
            (Grid2D::from_fn(nx, y, |_, yy| 1.0 / yy)?, Grid2D::from_fn(nx, y, |_, yy| -1.0 / yy)?)
        }
        ExampleCoframe::Disk => {
            if let Some(&bad) = y.iter().find(|&&v| v >= 1.0) {
                return Err(Error::Domain(format!("disk coframe is singular at the center; height {bad} ≥ 1")));
            }
            (
                Grid2D::from_fn(nx, y, |_, yy| (1.0 - yy * yy) / (2.0 * yy))?,
                Grid2D::from_fn(nx, y, |_, yy| -(1.0 + yy * yy) / (2.0 * yy))?,
            )
        }
        ExampleCoframe::Cylinder { ell } => {
            if *ell <= 0.0 || ell.is_nan() {
                return Err(Error::Domain(format!("cylinder needs ℓ > 0, got {ell}")));
            }
            let l = *ell;
            (
                Grid2D::from_fn(nx, y, |_, yy| l * (1.0 + yy * yy) / (2.0 * yy))?,
                Grid2D::from_fn(nx, y, |_, yy| -l * (1.0 - yy * yy) / (2.0 * yy))?,
            )
        }
        ExampleCoframe::FeffermanGraham { potential } => {
            if potential.n() != nx {
                return Err(Error::GridMismatch { expected: nx, found: potential.n() });
            }
            let t = potential.values();
            let ymax = *y.last().unwrap();
            if let Some(k) = t.iter().position(|&tv| ymax * ymax * tv >= 1.0) {
                return Err(Error::Domain(format!("y²T ≥ 1 at x = {}, y = {ymax}", k as f64 / nx as f64)));
            }
            let xs_index = |x: f64| ((x * nx as f64).round() as usize) % nx;
            (
                Grid2D::from_fn(nx, y, |x, yy| (1.0 - yy * yy * t[xs_index(x)]) / yy)?,
                Grid2D::from_fn(nx, y, |x, yy| -(1.0 + yy * yy * t[xs_index(x)]) / yy)?,
            )
        }
    };
    CoframeGrid::new(
        OneForm { x: a1x, y: zero.clone() },
        OneForm { x: zero.clone(), y: dy_over_y },
        OneForm { x: kx, y: zero },
    )
}
