//! Seeded verification suites behind `virateich verify`.
//!
//! Every check draws from its own ChaCha8 stream `(seed, stream)`, so a check
//! produces the same numbers whether it runs alone or as part of `all`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::coframe::{
    boundary_asymptotics, connection_curvature, curvature_limit, geodesic_curvature, graded_heights,
    hill_from_curvature, make_example_coframe, structure_residuals, CoframeGrid, ExampleCoframe, Grid2D, OneForm,
    DEFAULT_GRADING, EDGE_ROWS,
};
use crate::diffeo::{act_on_hill, compose, flow, invert, left_invariant_vector, schwarzian, DiffeoLift, HillPotential};
use crate::error::{Error, Result};
use crate::groupoid::{left_right_residual, omega_g_left, omega_g_right, slice_restrict, GroupoidPoint, GroupoidTangent};
use crate::hill::{
    ds_normalize, ds_splitting_gauge, gauge_transform, hat_moment, hill_from_asu, monodromy, BoundaryConnection,
    GaugeMap,
};
use crate::random::{self, SuiteRng};
use crate::spectral::{self, PeriodicFn};
use crate::teich::{
    boundary_action, boundary_moment, omega_teich, transport_moment, transport_tangent, FNPoint, FNTangent,
};
use crate::trumpet::{
    exactness_residual, gram_check, moment_diff, omega_n, omega_n_darboux, omega_n_fourier, verify_moment_circle,
    verify_moment_diff, virasoro_orbit_check, TrumpetPoint, TrumpetTangent,
};

/// Smallest grid accepted by the suites.
pub const MIN_SUITE_SAMPLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[derive(clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Diffeo,
    Hill,
    Coframe,
    Trumpet,
    Wolpert,
    Groupoid,
}

impl Suite {
    pub const MODULES: [Suite; 6] =
        [Suite::Diffeo, Suite::Hill, Suite::Coframe, Suite::Trumpet, Suite::Wolpert, Suite::Groupoid];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Diffeo => "diffeo",
            Suite::Hill => "hill",
            Suite::Coframe => "coframe",
            Suite::Trumpet => "trumpet",
            Suite::Wolpert => "wolpert",
            Suite::Groupoid => "groupoid",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Multiplies every gate.
    pub tol_scale: f64,
    /// Record wall time per check. Off by default so reports are
    /// byte-identical across runs.
    pub timings: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { n: 256, trials: 50, seed: 7, tol_scale: 1.0, timings: false }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        spectral::check_sample_count(self.n)?;
        if self.n < MIN_SUITE_SAMPLES {
            return Err(Error::InvalidSampleCount { n: self.n, min: MIN_SUITE_SAMPLES });
        }
        if self.trials == 0 {
            return Err(Error::Domain("need at least one trial".into()));
        }
        if self.tol_scale <= 0.0 || !self.tol_scale.is_finite() {
            return Err(Error::Domain(format!("tolerance scale must be positive, got {}", self.tol_scale)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// `None` when the check raised `error` instead of producing a residual.
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub n: usize,
    pub trials: usize,
    pub tol_scale: f64,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
}

impl SuiteReport {
    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

struct Recorder<'a> {
    cfg: &'a VerifyConfig,
    prefix: &'static str,
    stream: u64,
    records: Vec<CheckRecord>,
}

impl Recorder<'_> {
    /// Runs one check with a fresh generator; `f` returns the largest
    /// residual over its samples.
    fn check(
        &mut self,
        name: &str,
        tolerance: f64,
        trials: usize,
        f: impl FnOnce(&mut SuiteRng) -> Result<f64>,
    ) -> Result<()> {
        self.stream += 1;
        let mut rng = random::rng(self.cfg.seed, self.stream);
        let start = Instant::now();
        let outcome = f(&mut rng);
        let tolerance = tolerance * self.cfg.tol_scale;
        let (max_residual, error) = match outcome {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        };
        self.records.push(CheckRecord {
            name: format!("{}/{}", self.prefix, name),
            max_residual,
            tolerance,
            pass: max_residual.is_some_and(|r| r <= tolerance),
            error,
            trials,
            wall_time_s: self.cfg.timings.then(|| start.elapsed().as_secs_f64()),
        });
        Ok(())
    }
}

/// `‖a − b‖∞ / max(1, ‖b‖∞)`.
fn rel_dist(a: &PeriodicFn, b: &PeriodicFn) -> f64 {
    a.dist(b) / b.max_abs().max(1.0)
}

/// Largest value of `f` over `trials` draws.
fn max_over(rng: &mut SuiteRng, trials: usize, mut f: impl FnMut(&mut SuiteRng) -> Result<f64>) -> Result<f64> {
    let mut m = 0.0f64;
    for _ in 0..trials {
        let r = f(rng)?;
        if r.is_nan() {
            return Err(Error::Numerical("residual is NaN".into()));
        }
        m = m.max(r);
    }
    Ok(m)
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let mut checks = Vec::new();
    let modules: Vec<Suite> = if suite == Suite::All { Suite::MODULES.to_vec() } else { vec![suite] };
    for m in modules {
        // stream blocks keep each module's draws independent of the others
        let base = 1000 * Suite::MODULES.iter().position(|&s| s == m).expect("module suite") as u64;
        let mut rec = Recorder { cfg, prefix: m.name(), stream: base, records: Vec::new() };
        match m {
            Suite::Diffeo => diffeo_suite(&mut rec)?,
            Suite::Hill => hill_suite(&mut rec)?,
            Suite::Coframe => coframe_suite(&mut rec)?,
            Suite::Trumpet => trumpet_suite(&mut rec)?,
            Suite::Wolpert => wolpert_suite(&mut rec)?,
            Suite::Groupoid => groupoid_suite(&mut rec)?,
            Suite::All => unreachable!(),
        }
        checks.extend(rec.records);
    }
    Ok(SuiteReport {
        suite,
        seed: cfg.seed,
        n: cfg.n,
        trials: cfg.trials,
        tol_scale: cfg.tol_scale,
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

fn diffeo_suite(rec: &mut Recorder) -> Result<()> {
    let n = rec.cfg.n;
    let pairs = 2 * rec.cfg.trials;
    rec.check("compose_associative", 1e-8, pairs, |rng| {
        max_over(rng, pairs, |rng| {
            let (f, g, h) = (random::diffeo(rng, n, 0.5), random::diffeo(rng, n, 0.5), random::diffeo(rng, n, 0.5));
            Ok(compose(&compose(&f, &g)?, &h)?.dist(&compose(&f, &compose(&g, &h)?)?))
        })
    })?;
    rec.check("invert_two_sided", 1e-8, pairs, |rng| {
        max_over(rng, pairs, |rng| {
            let f = random::diffeo(rng, n, 0.5);
            let g = invert(&f)?;
            let id = DiffeoLift::identity(n)?;
            Ok(compose(&f, &g)?.dist(&id).max(compose(&g, &f)?.dist(&id)).max(invert(&g)?.dist(&f)))
        })
    })?;
    rec.check("schwarzian_cocycle", 1e-7, pairs, |rng| {
        max_over(rng, pairs, |rng| {
            let (f, g) = (random::diffeo(rng, n, 0.5), random::diffeo(rng, n, 0.5));
            let g1 = g.derivative();
            let points = PeriodicFn::new(g.lift_values(), 0)?;
            let rhs = &(&(&g1 * &g1) * &schwarzian(&f).compose_samples(&points)) + &schwarzian(&g);
            Ok(rel_dist(&schwarzian(&compose(&f, &g)?), &rhs))
        })
    })?;
    rec.check("schwarzian_of_rotation", 1e-8, pairs, |rng| {
        max_over(rng, pairs, |rng| {
            let t = rand::Rng::random_range(rng, -2.0..2.0);
            Ok(schwarzian(&DiffeoLift::rotation(n, t)?).max_abs())
        })
    })?;
    rec.check("hill_action_law", 1e-7, pairs, |rng| {
        max_over(rng, pairs, |rng| {
            let (f, g) = (random::diffeo(rng, n, 0.5), random::diffeo(rng, n, 0.5));
            let t = random::potential(rng, n, 1.0);
            let rhs = act_on_hill(&compose(&f, &g)?, &t);
            Ok(rel_dist(act_on_hill(&g, &act_on_hill(&f, &t)).as_fn(), rhs.as_fn()))
        })
    })?;
    rec.check("hill_action_affine", 1e-10, pairs, |rng| {
        max_over(rng, pairs, |rng| {
            let f = random::diffeo(rng, n, 0.5);
            let (t1, t2) = (random::potential(rng, n, 1.0), random::potential(rng, n, 1.0));
            let base = act_on_hill(&f, &HillPotential::constant(n, 0.0)?);
            let lin = |t: &HillPotential| act_on_hill(&f, t).as_fn() - base.as_fn();
            let sum = HillPotential::new(t1.as_fn() + t2.as_fn());
            Ok(lin(&sum).dist(&(&lin(&t1) + &lin(&t2))))
        })
    })?;
    let trials = rec.cfg.trials;
    rec.check("left_invariant_flow", 1e-7, trials, |rng| {
        max_over(rng, trials, |rng| {
            let f_lift = random::diffeo(rng, n, 0.5);
            let f = random::smooth(rng, n, 4, 1.0);
            let h = 2e-4;
            let at = |t: f64| -> Result<PeriodicFn> { Ok(compose(&f_lift, &flow(&f.scale(-1.0), t, 4)?)?.displacement()) };
            let fd = (&(&at(-2.0 * h)? - &at(2.0 * h)?) + &(&at(h)? - &at(-h)?).scale(8.0)).scale(1.0 / (12.0 * h));
            Ok(fd.dist(&left_invariant_vector(&f_lift, &f)))
        })
    })?;
    Ok(())
}

fn model_connections(n: usize) -> Result<Vec<(BoundaryConnection, f64)>> {
    let mut out = vec![(BoundaryConnection::constant(n, 1.0, 0.0, -0.25)?, 0.25)];
    for ell in [0.5, 1.0, 2.0] {
        out.push((BoundaryConnection::constant(n, 1.0, 0.0, ell * ell / 4.0)?, -ell * ell / 4.0));
    }
    Ok(out)
}

fn random_gauge(rng: &mut SuiteRng, n: usize) -> Result<GaugeMap> {
    let (h, _) = ds_normalize(&random::positive_connection(rng, n))?;
    Ok(h.mul(&ds_splitting_gauge(&random::diffeo(rng, n, 0.5))))
}

fn hill_suite(rec: &mut Recorder) -> Result<()> {
    let n = rec.cfg.n;
    let trials = rec.cfg.trials;
    let many = 2 * trials;
    rec.check("model_potentials", 1e-10, 4, |_| {
        let mut worst = 0.0f64;
        for (conn, t) in model_connections(n)? {
            let exact = HillPotential::constant(n, t)?;
            worst = worst.max(hill_from_asu(&conn)?.dist(&exact)).max(ds_normalize(&conn)?.1.dist(&exact));
        }
        Ok(worst)
    })?;
    rec.check("ds_vs_formula", 1e-8, many, |rng| {
        max_over(rng, many, |rng| {
            let conn = random::positive_connection(rng, n);
            Ok(ds_normalize(&conn)?.1.dist(&hill_from_asu(&conn)?))
        })
    })?;
    rec.check("ds_lands_in_slice", 1e-9, many, |rng| {
        max_over(rng, many, |rng| {
            let conn = random::positive_connection(rng, n);
            let (h, t) = ds_normalize(&conn)?;
            Ok(gauge_transform(&h, &conn)?.dist(&BoundaryConnection::ds_form(&t)))
        })
    })?;
    rec.check("ds_idempotent", 1e-9, many, |rng| {
        max_over(rng, many, |rng| {
            let conn = random::positive_connection(rng, n);
            let (_, t) = ds_normalize(&conn)?;
            let (h2, t2) = ds_normalize(&BoundaryConnection::ds_form(&t))?;
            Ok(h2.dist(&GaugeMap::identity(n)?).max(t2.dist(&t)))
        })
    })?;
    rec.check("gauge_left_action", 1e-8, trials, |rng| {
        max_over(rng, trials, |rng| {
            let (h1, h2) = (random_gauge(rng, n)?, random_gauge(rng, n)?);
            let conn = random::positive_connection(rng, n);
            let lhs = gauge_transform(&h1.mul(&h2), &conn)?;
            let rhs = gauge_transform(&h1, &gauge_transform(&h2, &conn)?)?;
            let scale = rhs.a().max_abs().max(rhs.s().max_abs()).max(rhs.u().max_abs()).max(1.0);
            Ok(lhs.dist(&rhs) / scale)
        })
    })?;
    rec.check("splitting_equivariance", 1e-7, many, |rng| {
        max_over(rng, many, |rng| {
            let f = random::diffeo(rng, n, 0.5);
            let t = random::potential(rng, n, 1.0);
            let moved = gauge_transform(&ds_splitting_gauge(&f), &BoundaryConnection::ds_form(&t).pullback(&f))?;
            Ok(moved.dist(&BoundaryConnection::ds_form(&act_on_hill(&f, &t))))
        })
    })?;
    rec.check("hat_moment_on_slice", 1e-12, trials, |rng| {
        max_over(rng, trials, |rng| {
            let t = random::potential(rng, n, 1.0);
            Ok(hat_moment(&BoundaryConnection::ds_form(&t)).dist(&-t.as_fn()))
        })
    })?;
    rec.check("monodromy_trace_invariance", 1e-6, many, |rng| {
        max_over(rng, many, |rng| {
            let f = random::diffeo(rng, n, 0.5);
            let t = random::potential(rng, n, 1.0);
            Ok((monodromy(&act_on_hill(&f, &t))?.trace - monodromy(&t)?.trace).abs())
        })
    })?;
    rec.check("trumpet_length_recovery", 1e-5, many, |rng| {
        max_over(rng, many, |rng| {
            let ell = rand::Rng::random_range(rng, 0.3..3.0);
            let f = random::diffeo(rng, n, 0.5);
            let m = monodromy(&act_on_hill(&f, &HillPotential::trumpet(n, ell)?))?;
            let rec_ell = m.hyperbolic_length().ok_or_else(|| Error::Numerical("trumpet monodromy not hyperbolic".into()))?;
            Ok((rec_ell - ell).abs())
        })
    })?;
    Ok(())
}

fn example_grid(kind: &ExampleCoframe) -> Vec<f64> {
    match kind {
        ExampleCoframe::Disk | ExampleCoframe::Cylinder { .. } => graded_heights(0.05, 0.9, DEFAULT_GRADING),
        _ => graded_heights(0.05, 0.5, DEFAULT_GRADING),
    }
}

/// Heights for boundary extrapolation of the example coframes.
fn boundary_grid() -> Vec<f64> {
    graded_heights(0.01, 0.5, 1.3)
}

/// Heights for the random charts: the curvature limit needs `y ≪ 1`.
pub const CHART_HEIGHTS: [f64; 5] = [5e-4, 1e-3, 1.5e-3, 2e-3, 2.5e-3];

fn coframe_suite(rec: &mut Recorder) -> Result<()> {
    let n = rec.cfg.n;
    let trials = rec.cfg.trials;
    let tau = 2.0 * std::f64::consts::PI;
    let fg = PeriodicFn::from_fn(n, 2, |x| 0.1 * (tau * x).sin())?;
    let examples = [
        ("half_plane", ExampleCoframe::HalfPlane),
        ("disk", ExampleCoframe::Disk),
        ("cylinder", ExampleCoframe::Cylinder { ell: 1.0 }),
        ("fefferman_graham", ExampleCoframe::FeffermanGraham { potential: fg }),
    ];
    for (name, kind) in &examples {
        let c = make_example_coframe(kind, n, &example_grid(kind))?;
        let res = structure_residuals(&c)?;
        rec.check(&format!("{name}/structure_residual"), 1e-7, 1, |_| Ok(res.max_normalized_residual()))?;
        rec.check(&format!("{name}/gauss_curvature"), 1e-6, 1, |_| Ok(res.max_curvature_deviation(-1.0)))?;
        rec.check(&format!("{name}/connection_curvature"), 1e-7, 1, |_| {
            Ok(connection_curvature(&c)?.multiplier.max_abs_interior(EDGE_ROWS))
        })?;
    }
    rec.check("pipeline_model_potentials", 1e-5, 4, |_| {
        let y = boundary_grid();
        let mut worst = 0.0f64;
        let mut cases = vec![(ExampleCoframe::Disk, 0.25)];
        for ell in [0.5, 1.0, 2.0] {
            cases.push((ExampleCoframe::Cylinder { ell }, -ell * ell / 4.0));
        }
        for (kind, t) in cases {
            let b = boundary_asymptotics(&make_example_coframe(&kind, n, &y)?)?;
            let conn = BoundaryConnection::new(b.a, b.s, b.u)?;
            worst = worst.max(hill_from_asu(&conn)?.dist(&HillPotential::constant(n, t)?));
        }
        Ok(worst)
    })?;
    rec.check("fefferman_graham_boundary", 1e-6, trials, |rng| {
        max_over(rng, trials, |rng| {
            let t = random::smooth(rng, n, 4, 0.5).with_weight(2);
            let b = boundary_asymptotics(&make_example_coframe(
                &ExampleCoframe::FeffermanGraham { potential: t.clone() },
                n,
                &boundary_grid(),
            )?)?;
            let conn = BoundaryConnection::new(b.a.clone(), b.s.clone(), b.u.clone())?;
            let one = PeriodicFn::constant(n, 1.0)?;
            Ok(b.a.dist(&one).max(b.s.max_abs()).max((&b.u + &t).max_abs()).max(hill_from_asu(&conn)?.as_fn().dist(&t)))
        })
    })?;
    rec.check("two_route_hill", 1e-6, trials, |rng| {
        max_over(rng, trials, |rng| {
            let chart = random::taylor_chart(rng, n);
            let b = boundary_asymptotics(&chart.coframe(&CHART_HEIGHTS)?)?;
            let k = geodesic_curvature(&chart.f_periodic(&CHART_HEIGHTS)?, &chart.g(&CHART_HEIGHTS)?)?;
            let via_curvature = hill_from_curvature(&b.a, &curvature_limit(&k)?)?;
            let via_asu = hill_from_asu(&BoundaryConnection::new(b.a, b.s, b.u)?)?;
            Ok(via_curvature.dist(&via_asu))
        })
    })?;
    rec.check("curvature_multiplier", 1e-7, 1, |_| {
        // α₁ = e^ψ dx, α₂ = e^ψ dy, κ = ψ_y dx − ψ_x dy, K = −e^{−2ψ}Δψ
        let psi = |x: f64, y: f64| 0.3 * (tau * x).sin() * y + 0.2 * y * y;
        let y = graded_heights(0.5, 1.5, DEFAULT_GRADING);
        let g = |f: &dyn Fn(f64, f64) -> f64| Grid2D::from_fn(n, &y, f);
        let zero = g(&|_, _| 0.0)?;
        let c = CoframeGrid::new(
            OneForm { x: g(&|x, y| psi(x, y).exp())?, y: zero.clone() },
            OneForm { x: zero, y: g(&|x, y| psi(x, y).exp())? },
            OneForm { x: g(&|x, y| 0.3 * (tau * x).sin() + 0.4 * y)?, y: g(&|x, y| -0.3 * tau * (tau * x).cos() * y)? },
        )?;
        let cc = connection_curvature(&c)?;
        let res = structure_residuals(&c)?;
        Ok(cc.multiplier.zip_with(&res.curvature, |m, k| m - 0.5 * (k + 1.0)).max_abs_interior(EDGE_ROWS))
    })?;
    rec.check("identity_chart_curvature", 1e-12, 1, |_| {
        let y = graded_heights(0.01, 1.0, 1.2);
        let k = geodesic_curvature(&Grid2D::from_fn(n, &y, |_, _| 0.0)?, &Grid2D::from_fn(n, &y, |_, y| y)?)?;
        Ok(k.map_xy(|_, _, v| v - 1.0).max_abs_interior(0))
    })?;
    Ok(())
}

fn trumpet_suite(rec: &mut Recorder) -> Result<()> {
    let n = rec.cfg.n;
    let trials = rec.cfg.trials;
    rec.check("antisymmetry", 1e-10, trials, |rng| {
        max_over(rng, trials, |rng| {
            let p = random::trumpet_point(rng, n);
            let (v, w) = (random::trumpet_tangent(rng, n), random::trumpet_tangent(rng, n));
            Ok((omega_n(&p, &v, &w) + omega_n(&p, &w, &v)).abs().max(omega_n(&p, &v, &v).abs()))
        })
    })?;
    rec.check("bilinearity", 1e-10, trials, |rng| {
        max_over(rng, trials, |rng| {
            let p = random::trumpet_point(rng, n);
            let (u, v, w) = (random::trumpet_tangent(rng, n), random::trumpet_tangent(rng, n), random::trumpet_tangent(rng, n));
            let c = rand::Rng::random_range(rng, -2.0..2.0);
            let sum = TrumpetTangent::new(u.d_ell + c * v.d_ell, &u.d_f + &v.d_f.scale(c));
            Ok((omega_n(&p, &sum, &w) - omega_n(&p, &u, &w) - c * omega_n(&p, &v, &w)).abs())
        })
    })?;
    rec.check("exactness", 1e-6, trials, |rng| {
        max_over(rng, trials, |rng| {
            let p = random::trumpet_point(rng, n);
            exactness_residual(&p, &random::trumpet_tangent(rng, n), &random::trumpet_tangent(rng, n))
        })
    })?;
    rec.check("moment_diff", 1e-6, trials, |rng| {
        max_over(rng, trials, |rng| {
            let p = random::trumpet_point(rng, n);
            let f = random::smooth(rng, n, 4, 1.0);
            verify_moment_diff(&p, &f, &random::trumpet_tangent(rng, n))
        })
    })?;
    rec.check("moment_circle", 1e-8, trials, |rng| {
        max_over(rng, trials, |rng| verify_moment_circle(&random::trumpet_point(rng, n), &random::trumpet_tangent(rng, n)))
    })?;
    rec.check("moment_monodromy", 1e-6, trials, |rng| {
        max_over(rng, trials, |rng| {
            let p = random::trumpet_point(rng, n);
            let tr = monodromy(&HillPotential::new(-moment_diff(&p).as_fn()))?.trace;
            Ok((tr - 2.0 * (p.ell() / 2.0).cosh()).abs())
        })
    })?;
    rec.check("darboux_form", 1e-6, trials, |rng| {
        max_over(rng, trials, |rng| {
            let p = random::trumpet_point(rng, n);
            let (v, w) = (random::trumpet_tangent(rng, n), random::trumpet_tangent(rng, n));
            Ok((omega_n(&p, &v, &w) - omega_n_darboux(&p, &v, &w)).abs())
        })
    })?;
    rec.check("fourier_form", 1e-6, trials, |rng| {
        max_over(rng, trials, |rng| {
            let p = random::trumpet_point(rng, n);
            let (v, w) = (random::trumpet_tangent(rng, n), random::trumpet_tangent(rng, n));
            let f = omega_n_fourier(&p, &v, &w, n / 2 - 1)?;
            Ok((omega_n(&p, &v, &w) - f).abs().max((omega_n_darboux(&p, &v, &w) - f).abs()))
        })
    })?;
    rec.check("gram_inverse_smallest_singular_value", 1e8, 3, |_| {
        let mut worst = 0.0f64;
        for ell in [0.5, 1.0, 2.0] {
            let g = gram_check(ell, n, 8)?;
            worst = worst.max(1.0 / g.smallest_singular_value);
        }
        Ok(worst)
    })?;
    rec.check("gram_closed_form", 1e-9, 3, |_| {
        let mut worst = 0.0f64;
        for ell in [0.5, 1.0, 2.0] {
            let g = gram_check(ell, n, 8)?;
            worst = worst.max(g.closed_form_residual / g.largest_singular_value);
        }
        Ok(worst)
    })?;
    rec.check("orbit_rotation_trace", 1e-6, trials, |rng| {
        let ell = rand::Rng::random_range(rng, 0.3..3.0);
        let r = virasoro_orbit_check(ell, trials, n, rng)?;
        Ok(r.rotation_trace_residual.max(r.orbit_trace_residual))
    })?;
    rec.check("orbit_circle_direction", 1e-12, trials, |rng| {
        let ell = rand::Rng::random_range(rng, 0.3..3.0);
        let r = virasoro_orbit_check(ell, trials, n, rng)?;
        Ok(r.zz.max(r.level_set))
    })?;
    Ok(())
}

fn random_fn_point(rng: &mut SuiteRng, n: usize) -> Result<FNPoint> {
    // genus 1 with two ideal boundary circles
    let interior = (0..2).map(|_| (rand::Rng::random_range(rng, 0.5..3.0), rand::Rng::random_range(rng, -1.0..1.0))).collect();
    let boundary = (0..2).map(|_| random::trumpet_point(rng, n)).collect();
    FNPoint::new(1, 2, interior, boundary)
}

fn random_fn_tangent(rng: &mut SuiteRng, n: usize) -> FNTangent {
    FNTangent {
        interior: (0..2).map(|_| (rand::Rng::random_range(rng, -1.0..1.0), rand::Rng::random_range(rng, -1.0..1.0))).collect(),
        boundary: (0..2).map(|_| random::trumpet_tangent(rng, n)).collect(),
    }
}

fn wolpert_suite(rec: &mut Recorder) -> Result<()> {
    let n = rec.cfg.n;
    let trials = rec.cfg.trials;
    rec.check("length_twist_pairing", 0.0, 1, |_| {
        let p = FNPoint::new(1, 1, vec![(1.0, 0.0)], vec![TrumpetPoint::new(1.0, DiffeoLift::identity(n)?)?])?;
        let mut v = FNTangent::zero(&p)?;
        let mut w = v.clone();
        v.interior[0] = (1.0, 0.0);
        w.interior[0] = (0.0, 1.0);
        Ok((omega_teich(&p, &v, &w)? - 0.5).abs())
    })?;
    rec.check("disjoint_curves", 0.0, trials, |rng| {
        max_over(rng, trials, |rng| {
            let p = random_fn_point(rng, n)?;
            let mut v = FNTangent::zero(&p)?;
            let mut w = v.clone();
            v.interior[0] = (rand::Rng::random_range(rng, -1.0..1.0), rand::Rng::random_range(rng, -1.0..1.0));
            w.interior[1] = (rand::Rng::random_range(rng, -1.0..1.0), rand::Rng::random_range(rng, -1.0..1.0));
            Ok(omega_teich(&p, &v, &w)?.abs())
        })
    })?;
    rec.check("block_diagonal", 0.0, trials, |rng| {
        max_over(rng, trials, |rng| {
            let p = random_fn_point(rng, n)?;
            let mut v = random_fn_tangent(rng, n);
            let mut w = random_fn_tangent(rng, n);
            v.interior = vec![(0.0, 0.0); 2];
            w.boundary = FNTangent::zero(&p)?.boundary;
            Ok(omega_teich(&p, &v, &w)?.abs())
        })
    })?;
    rec.check("diff_invariance", 1e-6, trials, |rng| {
        max_over(rng, trials, |rng| {
            let p = random_fn_point(rng, n)?;
            let (v, w) = (random_fn_tangent(rng, n), random_fn_tangent(rng, n));
            let j = rand::Rng::random_range(rng, 0..2usize);
            let f = random::diffeo(rng, n, 0.4);
            let q = boundary_action(&p, j, &f)?;
            let moved = omega_teich(&q, &transport_tangent(&v, j, &f)?, &transport_tangent(&w, j, &f)?)?;
            Ok((moved - omega_teich(&p, &v, &w)?).abs())
        })
    })?;
    rec.check("action_law", 1e-8, trials, |rng| {
        max_over(rng, trials, |rng| {
            let p = random_fn_point(rng, n)?;
            let (f, g) = (random::diffeo(rng, n, 0.4), random::diffeo(rng, n, 0.4));
            let two = boundary_action(&boundary_action(&p, 0, &f)?, 0, &g)?;
            let once = boundary_action(&p, 0, &compose(&g, &f)?)?;
            Ok(two.boundary()[0].lift().dist(once.boundary()[0].lift()))
        })
    })?;
    rec.check("moment_equivariance", 1e-7, trials, |rng| {
        max_over(rng, trials, |rng| {
            let p = random_fn_point(rng, n)?;
            let f = random::diffeo(rng, n, 0.4);
            let before = boundary_moment(&p);
            let after = boundary_moment(&boundary_action(&p, 1, &f)?);
            Ok(rel_dist(after[1].as_fn(), transport_moment(&before[1], &f)?.as_fn()).max(after[0].dist(&before[0])))
        })
    })?;
    rec.check("moment_trace_preserved", 1e-6, trials, |rng| {
        max_over(rng, trials, |rng| {
            let p = random_fn_point(rng, n)?;
            let f = random::diffeo(rng, n, 0.4);
            let tr = |t: &HillPotential| -> Result<f64> { Ok(monodromy(&HillPotential::new(-t.as_fn()))?.trace) };
            let before = boundary_moment(&p);
            let after = boundary_moment(&boundary_action(&p, 0, &f)?);
            Ok((tr(&after[0])? - tr(&before[0])?).abs())
        })
    })?;
    Ok(())
}

fn random_groupoid_tangent(rng: &mut SuiteRng, n: usize) -> GroupoidTangent {
    GroupoidTangent::new(random::smooth(rng, n, 4, 0.3).with_weight(2), random::smooth(rng, n, 4, 0.1))
}

fn groupoid_suite(rec: &mut Recorder) -> Result<()> {
    let n = rec.cfg.n;
    let trials = rec.cfg.trials;
    let point = |rng: &mut SuiteRng| GroupoidPoint::new(random::potential(rng, n, 1.0), random::diffeo(rng, n, 0.5));
    rec.check("left_antisymmetry", 1e-10, trials, |rng| {
        max_over(rng, trials, |rng| {
            let p = point(rng)?;
            let (v, w) = (random_groupoid_tangent(rng, n), random_groupoid_tangent(rng, n));
            Ok((omega_g_left(&p, &v, &w) + omega_g_left(&p, &w, &v)).abs().max(omega_g_left(&p, &v, &v).abs()))
        })
    })?;
    rec.check("right_antisymmetry", 1e-10, trials, |rng| {
        max_over(rng, trials, |rng| {
            let p = point(rng)?;
            let (v, w) = (random_groupoid_tangent(rng, n), random_groupoid_tangent(rng, n));
            Ok((omega_g_right(&p, &v, &w) + omega_g_right(&p, &w, &v)).abs().max(omega_g_right(&p, &v, &v).abs()))
        })
    })?;
    rec.check("pure_potential_pairs", 0.0, trials, |rng| {
        max_over(rng, trials, |rng| {
            let p = point(rng)?;
            let zero = PeriodicFn::zeros(n)?;
            let v = GroupoidTangent::new(random::smooth(rng, n, 4, 1.0), zero.clone());
            let w = GroupoidTangent::new(random::smooth(rng, n, 4, 1.0), zero);
            Ok(omega_g_left(&p, &v, &w).abs())
        })
    })?;
    rec.check("left_right_agreement", 1e-5, trials, |rng| {
        max_over(rng, trials, |rng| {
            let p = point(rng)?;
            left_right_residual(&p, &random_groupoid_tangent(rng, n), &random_groupoid_tangent(rng, n))
        })
    })?;
    rec.check("slice_restriction", 1e-8, trials, |rng| {
        max_over(rng, trials, |rng| {
            let p = random::trumpet_point(rng, n);
            let (v, w) = (random::trumpet_tangent(rng, n), random::trumpet_tangent(rng, n));
            Ok((slice_restrict(&p, &v, &w)? - omega_n(&p, &v, &w)).abs())
        })
    })?;
    Ok(())
}
