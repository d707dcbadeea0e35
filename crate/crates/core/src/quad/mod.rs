//! Deterministic means over polydiscs, tori, segments and convex polytopes.
//!
//! All means are normalized: `(1/|S|) ∫_S f`. Polydisc and torus rules are
//! tensor products of per-coordinate rules; each coordinate uses plain
//! Gauss–Legendre × midpoint rules when the integrand is smooth there, and
//! geometrically graded rules around the singular points advertised by the
//! integrand. Refinement runs through levels k = 0, 1, …: plain node counts
//! double per level, graded rules add two grading levels and two Gauss points
//! per panel. The error estimate is the last change between levels.

pub mod adaptive;
pub mod gauss;
pub mod rules;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{Kind, PshFunction};
use crate::error::{Error, Result};
use crate::grammar::{parse_kv, parse_real};
use crate::types::{ConvexPolytope, Polydisc, Segment};
use rules::{circle_rule, disc_rule, tensor_sum, CoordHints, CoordRule, LevelParams};

/// Refinement stops before a level that would need more tensor nodes than this.
pub const MAX_TENSOR_NODES: usize = 40_000_000;

/// Acceptance rate below which a polytope is reported as degenerate.
pub const MIN_ACCEPTANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    pub target_rel_error: f64,
    pub max_refinements: usize,
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { radial_nodes: 12, angular_nodes: 16, target_rel_error: 1e-10, max_refinements: 6, mc_samples: 200_000, seed: 0 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.radial_nodes < 4 {
            return Err(Error::InvalidParameter("radial_nodes must be ≥ 4".into()));
        }
        if self.angular_nodes < 8 || !self.angular_nodes.is_power_of_two() {
            return Err(Error::InvalidParameter("angular_nodes must be a power of two ≥ 8".into()));
        }
        if !(self.target_rel_error >= 1e-13) {
            return Err(Error::InvalidParameter("target_rel_error must be ≥ 1e-13".into()));
        }
        if self.mc_samples == 0 {
            return Err(Error::InvalidParameter("mc_samples must be positive".into()));
        }
        Ok(())
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.target_rel_error = tol;
        self
    }

    pub fn with_refinements(mut self, k: usize) -> Self {
        self.max_refinements = k;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_nodes(mut self, radial: usize, angular: usize) -> Self {
        self.radial_nodes = radial;
        self.angular_nodes = angular;
        self
    }

    pub fn with_mc_samples(mut self, n: usize) -> Self {
        self.mc_samples = n;
        self
    }

    /// Applies `radial=..,angular=..,tol=..,refine=..,mc=..,seed=..` overrides.
    pub fn with_overrides(mut self, s: &str) -> Result<Self> {
        for (k, v) in parse_kv(s)? {
            let int = |v: &str| -> Result<usize> {
                v.trim().parse::<usize>().map_err(|_| Error::InvalidParameter(format!("`{k}` needs a non-negative integer, got `{v}`")))
            };
            match k.as_str() {
                "radial" => self.radial_nodes = int(&v)?,
                "angular" => self.angular_nodes = int(&v)?,
                "tol" => self.target_rel_error = parse_real(&v)?,
                "refine" => self.max_refinements = int(&v)?,
                "mc" => self.mc_samples = int(&v)?,
                "seed" => self.seed = v.trim().parse().map_err(|_| Error::InvalidParameter(format!("bad seed `{v}`")))?,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown quadrature key `{other}` (radial, angular, tol, refine, mc, seed)"
                    )))
                }
            }
        }
        self.validate()?;
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub nodes_used: usize,
    pub refinements: usize,
    pub converged: bool,
}

impl IntegralResult {
    pub fn exact(value: f64) -> Self {
        Self { value, abs_error_estimate: 0.0, nodes_used: 1, refinements: 0, converged: true }
    }

    /// Turns an unconverged result into an error.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence { value: self.value, change: self.abs_error_estimate, refinements: self.refinements })
        }
    }
}

/// Integrand description per coordinate for a catalog function on a polydisc.
pub fn hints_for(f: &PshFunction, center: &[C64]) -> Vec<CoordHints> {
    (0..f.dim)
        .map(|j| CoordHints { singular: f.singular_hints(j), radial: f.radial_in(j, center[j]), inactive: !f.depends_on(j) })
        .collect()
}

fn check_dims(f: &PshFunction, n: usize) -> Result<()> {
    if f.dim == n {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: f.dim, found: n })
    }
}

fn check_domain(f: &PshFunction, p: &Polydisc) -> Result<()> {
    if f.polydisc_in_domain(p.center.as_slice(), &p.radii) {
        Ok(())
    } else {
        Err(Error::OutOfDomain(f.name.clone()))
    }
}

/// Runs the level schedule; `eval_level` returns (value, nodes) or `None`
/// when the level would exceed the node budget.
fn refine(spec: &QuadratureSpec, eval_level: impl FnMut(LevelParams) -> Option<(f64, usize)>) -> Result<IntegralResult> {
    refine_with(spec, true, eval_level)
}

fn refine_with(
    spec: &QuadratureSpec,
    detect_divergence: bool,
    mut eval_level: impl FnMut(LevelParams) -> Option<(f64, usize)>,
) -> Result<IntegralResult> {
    spec.validate()?;
    let mut values: Vec<f64> = Vec::new();
    let mut diffs: Vec<f64> = Vec::new();
    let mut nodes_total = 0usize;
    for level in 0..=spec.max_refinements {
        let lp = LevelParams::at(level, spec.radial_nodes, spec.angular_nodes);
        let Some((v, nodes)) = eval_level(lp) else { break };
        nodes_total += nodes;
        if !v.is_finite() {
            return Err(Error::Divergent);
        }
        if let Some(prev) = values.last() {
            let d = (v - prev).abs();
            diffs.push(d);
            let scale = v.abs().max(1.0);
            if d <= spec.target_rel_error * scale {
                return Ok(IntegralResult {
                    value: v,
                    abs_error_estimate: d,
                    nodes_used: nodes_total,
                    refinements: level,
                    converged: true,
                });
            }
            // large increments that stop shrinking while the value grows signal divergence
            let k = diffs.len();
            if detect_divergence
                && k >= 3
                && diffs[k - 1] >= 0.95 * diffs[k - 2]
                && diffs[k - 2] >= 0.95 * diffs[k - 3]
                && diffs[k - 1] >= 1e-3 * scale
                && v.abs() > values[0].abs()
            {
                return Err(Error::Divergent);
            }
        }
        values.push(v);
    }
    let value = *values.last().ok_or(Error::NonConvergence { value: f64::NAN, change: f64::INFINITY, refinements: 0 })?;
    Ok(IntegralResult {
        value,
        abs_error_estimate: diffs.last().copied().unwrap_or(f64::INFINITY),
        nodes_used: nodes_total,
        refinements: values.len() - 1,
        converged: false,
    })
}

fn tensor_level(rules: Vec<CoordRule>, g: &(dyn Fn(&[C64]) -> f64 + Sync)) -> Option<(f64, usize)> {
    let nodes = rules.iter().try_fold(1usize, |acc, r| acc.checked_mul(r.len()))?;
    if nodes > MAX_TENSOR_NODES {
        return None;
    }
    let total_w: f64 = rules.iter().map(|r| r.weights.iter().sum::<f64>()).product();
    Some((tensor_sum(&rules, g) / total_w, nodes))
}

/// Mean of `g` over the polydisc, with integrand hints per coordinate.
pub fn polydisc_mean_with(
    g: &(dyn Fn(&[C64]) -> f64 + Sync),
    hints: &[CoordHints],
    p: &Polydisc,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    if hints.len() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: hints.len() });
    }
    let c = p.center.as_slice();
    refine(spec, |lp| {
        let rules = (0..p.dim()).map(|j| disc_rule(c[j], p.radii[j], &hints[j], lp)).collect();
        tensor_level(rules, g)
    })
}

/// As [`polydisc_mean_with`] for integrands known to be integrable, such as
/// |φ − c| with φ integrable; slow convergence is then never read as divergence.
pub fn polydisc_mean_integrable(
    g: &(dyn Fn(&[C64]) -> f64 + Sync),
    hints: &[CoordHints],
    p: &Polydisc,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    if hints.len() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: hints.len() });
    }
    let c = p.center.as_slice();
    refine_with(spec, false, |lp| {
        let rules = (0..p.dim()).map(|j| disc_rule(c[j], p.radii[j], &hints[j], lp)).collect();
        tensor_level(rules, g)
    })
}

/// Mean over the disc |z − c| < radius by iterated adaptive Gauss–Kronrod in
/// (ρ, θ), with breakpoints at the radii and angles of the singular points.
/// Suited to integrands with kinks, where tensor rules converge slowly.
pub fn disc_mean_adaptive(g: &dyn Fn(C64) -> f64, c: C64, radius: f64, singular: &[C64], tol: f64) -> Result<IntegralResult> {
    let tau = 2.0 * std::f64::consts::PI;
    let rel: Vec<(f64, f64)> = singular.iter().map(|h| ((h - c).norm() / radius, (h - c).arg())).collect();
    let rho_bp: Vec<f64> = rel.iter().map(|p| p.0).filter(|r| *r > 0.0 && *r < 1.0).collect();
    let mut theta_bp: Vec<f64> = rel.iter().filter(|p| p.0 > 0.0).map(|p| p.1.rem_euclid(tau)).collect();
    theta_bp.sort_by(f64::total_cmp);
    let mut evaluations = 0usize;
    let mut inner_ok = true;
    let mut inner_err = 0.0f64;
    let outer = adaptive::integrate(
        |rho| {
            let r = adaptive::integrate(|t| g(c + C64::from_polar(radius * rho, t)), 0.0, tau, &theta_bp, 0.1 * tol, 0.1 * tol);
            evaluations += r.evaluations;
            inner_ok &= r.converged;
            inner_err = inner_err.max(r.error);
            // 2ρ dρ · dθ/2π
            2.0 * rho * r.value / tau
        },
        0.0,
        1.0,
        &rho_bp,
        tol,
        tol,
    );
    if !outer.value.is_finite() {
        return Err(Error::Divergent);
    }
    Ok(IntegralResult {
        value: outer.value,
        abs_error_estimate: outer.error + inner_err / tau,
        nodes_used: evaluations,
        refinements: outer.subdivisions,
        converged: outer.converged && inner_ok,
    })
}

/// Mean of `g` over the distinguished boundary torus {|z_j − ẑ_j| = r_j}.
pub fn torus_mean_with(
    g: &(dyn Fn(&[C64]) -> f64 + Sync),
    hints: &[CoordHints],
    p: &Polydisc,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    if hints.len() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: hints.len() });
    }
    let c = p.center.as_slice();
    refine(spec, |lp| {
        let rules = (0..p.dim()).map(|j| circle_rule(c[j], p.radii[j], &hints[j], lp)).collect();
        tensor_level(rules, g)
    })
}

/// φ_P = (1/|P|) ∫_P φ.
pub fn mean_over_polydisc(f: &PshFunction, p: &Polydisc, spec: &QuadratureSpec) -> Result<IntegralResult> {
    check_dims(f, p.dim())?;
    check_domain(f, p)?;
    if let Kind::Constant { value } = f.kind {
        return Ok(IntegralResult::exact(value));
    }
    let hints = hints_for(f, p.center.as_slice());
    // several logarithmic poles in one disc defeat the tensor rule's graded meshes
    if p.dim() == 1 && hints[0].singular.len() > 1 && !hints[0].radial {
        spec.validate()?;
        return disc_mean_adaptive(&|z: C64| f.eval(&[z]), p.center[0], p.radii[0], &hints[0].singular, spec.target_rel_error);
    }
    polydisc_mean_with(&|z: &[C64]| f.eval(z), &hints, p, spec)
}

/// Mean over the Shilov boundary of P.
pub fn mean_over_shilov(f: &PshFunction, p: &Polydisc, spec: &QuadratureSpec) -> Result<IntegralResult> {
    check_dims(f, p.dim())?;
    check_domain(f, p)?;
    if let Kind::Constant { value } = f.kind {
        return Ok(IntegralResult::exact(value));
    }
    let hints = hints_for(f, p.center.as_slice());
    torus_mean_with(&|z: &[C64]| f.eval(z), &hints, p, spec)
}

/// Average over t ∈ [0, 1] of g(t), with singular breakpoints.
pub fn unit_interval_mean_with(g: impl FnMut(f64) -> f64, breakpoints: &[f64], spec: &QuadratureSpec) -> Result<IntegralResult> {
    spec.validate()?;
    let out = adaptive::integrate(g, 0.0, 1.0, breakpoints, spec.target_rel_error, spec.target_rel_error);
    if !out.value.is_finite() {
        return Err(Error::Divergent);
    }
    Ok(IntegralResult {
        value: out.value,
        abs_error_estimate: out.error,
        nodes_used: out.evaluations,
        refinements: out.subdivisions,
        converged: out.converged,
    })
}

/// Parameters t ∈ [0, 1] where f restricted to the segment may be singular.
pub fn segment_breakpoints(f: &PshFunction, seg: &Segment) -> Vec<f64> {
    let a = seg.a.as_slice();
    let b = seg.b.as_slice();
    let mut out = Vec::new();
    let mut push_root = |t: C64| {
        if t.re > 0.0 && t.re < 1.0 && t.im.abs() < 0.1 {
            out.push(t.re);
        }
    };
    match &f.kind {
        Kind::LogPoly(p) => {
            for fac in &p.restrict_to_line(a, b).factors {
                push_root(fac.shift);
            }
        }
        Kind::LogNorm { z0 } => {
            // closest point of the line to z₀
            let d: Vec<C64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
            let dd: f64 = d.iter().map(|x| x.norm_sqr()).sum();
            let t: f64 = z0.iter().zip(a).zip(&d).map(|((z, x), dj)| ((z - x) * dj.conj()).re).sum::<f64>() / dd;
            push_root(C64::new(t, 0.0));
        }
        _ => {
            if f.dim == 1 {
                for h in f.singular_hints(0) {
                    push_root((h - a[0]) / (b[0] - a[0]));
                }
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// (log|z|)_{[a,b]}-type mean: ∫₀¹ f(a(1 − t) + bt) dt.
pub fn mean_over_segment(f: &PshFunction, seg: &Segment, spec: &QuadratureSpec) -> Result<IntegralResult> {
    check_dims(f, seg.dim())?;
    if let Kind::Constant { value } = f.kind {
        return Ok(IntegralResult::exact(value));
    }
    let bps = segment_breakpoints(f, seg);
    unit_interval_mean_with(|t| f.eval(&seg.point(t)), &bps, spec)
}

/// Stratified Monte Carlo mean over a full-dimensional polytope of ℝ^{2n}.
///
/// The bounding box is cut into s^d congruent cells; each cell receives the
/// same number of uniform samples, and samples outside the hull are rejected.
/// The reported error is three standard errors.
pub fn polytope_mean_with(g: &dyn Fn(&[f64]) -> f64, a: &ConvexPolytope, spec: &QuadratureSpec) -> Result<IntegralResult> {
    spec.validate()?;
    if !a.is_full_dimensional() {
        return Err(Error::DegeneratePolytope(format!(
            "hull has dimension {} in ℝ^{}; pass lower-dimensional sets as segments",
            a.hull_dim(),
            a.real_dim()
        )));
    }
    let d = a.real_dim();
    let (lo, hi) = a.bounding_box();
    let n = spec.mc_samples;
    let mut s = (n as f64).powf(1.0 / d as f64).floor().max(1.0) as usize;
    while s.pow(d as u32) > n {
        s -= 1;
    }
    let cells = s.pow(d as u32);
    let per_cell = (n / cells).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut idx = vec![0usize; d];
    let mut x = vec![0.0; d];
    let (mut count, mut mean, mut m2) = (0usize, 0.0f64, 0.0f64);
    let mut drawn = 0usize;
    for _ in 0..cells {
        for _ in 0..per_cell {
            for k in 0..d {
                let u: f64 = rng.random();
                x[k] = lo[k] + (hi[k] - lo[k]) * (idx[k] as f64 + u) / s as f64;
            }
            drawn += 1;
            if !a.contains_real(&x, 0.0) {
                continue;
            }
            let v = g(&x);
            count += 1;
            let delta = v - mean;
            mean += delta / count as f64;
            m2 += delta * (v - mean);
        }
        for k in 0..d {
            idx[k] += 1;
            if idx[k] < s {
                break;
            }
            idx[k] = 0;
        }
    }
    let rate = count as f64 / drawn as f64;
    if count < 2 || rate < MIN_ACCEPTANCE {
        return Err(Error::DegeneratePolytope(format!(
            "hull acceptance rate {rate:.2e} is below {MIN_ACCEPTANCE:e}; thin sets should be passed as segments"
        )));
    }
    if !mean.is_finite() {
        return Err(Error::Divergent);
    }
    let var = m2 / (count - 1) as f64;
    Ok(IntegralResult {
        value: mean,
        abs_error_estimate: 3.0 * (var / count as f64).sqrt(),
        nodes_used: drawn,
        refinements: 0,
        converged: true,
    })
}

/// Mean of φ over a convex polytope.
pub fn mean_over_polytope(f: &PshFunction, a: &ConvexPolytope, spec: &QuadratureSpec) -> Result<IntegralResult> {
    check_dims(f, a.dim())?;
    let g = |x: &[f64]| {
        let z: Vec<C64> = x.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
        f.eval(&z)
    };
    polytope_mean_with(&g, a, spec)
}

/// Windows in y = −log s used for coordinates singular at the origin.
///
/// The last window stops at s = e^{−320} so that integrands up to s^{−2}
/// stay finite in double precision.
const Y_WINDOWS: [f64; 6] = [0.0, 20.0, 40.0, 80.0, 160.0, 320.0];

struct Radial<'a> {
    g: &'a dyn Fn(&[f64]) -> f64,
    singular: &'a [bool],
    tol: f64,
    evaluations: usize,
    converged: bool,
    divergent: bool,
    inner_error: f64,
}

impl Radial<'_> {
    /// ∫ over coordinates k.. of g with weights 2s ds, the earlier moduli fixed in `s`.
    fn level(&mut self, k: usize, s: &mut Vec<f64>) -> f64 {
        if k == s.len() {
            self.evaluations += 1;
            return (self.g)(s);
        }
        if self.divergent {
            return f64::INFINITY;
        }
        let tol = if k == 0 { self.tol } else { 0.1 * self.tol };
        if !self.singular[k] {
            let out = adaptive::integrate(
                |x| {
                    s[k] = x;
                    2.0 * x * self.level(k + 1, s)
                },
                0.0,
                1.0,
                &[],
                tol,
                0.0,
            );
            self.note(k, out.converged, out.error);
            return out.value;
        }
        // s = e^{−y}: 2s ds = 2e^{−2y} dy, and algebraic singularities become exponentials
        let mut total = 0.0;
        let mut increments: Vec<f64> = Vec::new();
        let mut done = false;
        for w in Y_WINDOWS.windows(2) {
            let out = adaptive::integrate(
                |y| {
                    s[k] = (-y).exp();
                    2.0 * (-2.0 * y).exp() * self.level(k + 1, s)
                },
                w[0],
                w[1],
                &[],
                tol,
                0.0,
            );
            if !out.value.is_finite() {
                self.divergent = true;
                return f64::INFINITY;
            }
            self.note(k, out.converged, out.error);
            total += out.value;
            let a = out.value.abs();
            increments.push(a);
            let m = increments.len();
            if m >= 2 && a <= tol * total.abs() {
                done = true;
                break;
            }
            if m >= 4 && a >= increments[m - 2] && increments[m - 2] >= increments[m - 3] {
                self.divergent = true;
                return f64::INFINITY;
            }
        }
        if !done {
            // exponential tail C·e^{−κy}: with x = e^{−80κ} the last two
            // increments have ratio q = x(1 + x), and the rest is a·x²/(1 − x²)
            let m = increments.len();
            let q = increments[m - 1] / increments[m - 2];
            let x = 0.5 * ((1.0 + 4.0 * q).sqrt() - 1.0);
            let tail = if x < 1.0 { increments[m - 1] * x * x / (1.0 - x * x) } else { f64::INFINITY };
            total += tail.copysign(total);
            if !(tail <= tol * total.abs()) {
                self.converged = false;
                self.inner_error = self.inner_error.max(tail.min(increments[m - 1]));
            }
        }
        total
    }

    fn note(&mut self, k: usize, converged: bool, error: f64) {
        self.converged &= converged;
        if k > 0 {
            self.inner_error = self.inner_error.max(error);
        }
    }
}

/// Mean over the unit polydisc of a multicircular integrand given through
/// the moduli, ∫_{[0,1]ⁿ} g(s) ∏ 2s_j ds_j, by nested adaptive quadrature.
///
/// Coordinates flagged `singular` are integrated in y = −log s over growing
/// windows; increments that stop shrinking flag divergence.
pub fn radial_mean(g: &dyn Fn(&[f64]) -> f64, singular: &[bool], tol: f64) -> Result<IntegralResult> {
    if singular.is_empty() {
        return Err(Error::InvalidParameter("radial_mean needs n ≥ 1".into()));
    }
    if !(tol >= 1e-14) {
        return Err(Error::InvalidParameter("tolerance must be ≥ 1e-14".into()));
    }
    let mut r = Radial { g, singular, tol, evaluations: 0, converged: true, divergent: false, inner_error: 0.0 };
    let mut s = vec![1.0; singular.len()];
    let value = r.level(0, &mut s);
    if r.divergent || !value.is_finite() {
        return Err(Error::Divergent);
    }
    Ok(IntegralResult {
        value,
        abs_error_estimate: tol * value.abs() + r.inner_error,
        nodes_used: r.evaluations,
        refinements: 0,
        converged: r.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::ComplexVector;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn radial_mean_algebraic_singularities() {
        // ∫₀¹ s^{−ε} 2s ds = 2/(2 − ε)
        for e in [0.5, 1.0, 1.5, 1.9] {
            let r = radial_mean(&|s: &[f64]| s[0].powf(-e), &[true], 1e-11).unwrap();
            assert!(r.converged, "{e}");
            assert_relative_eq!(r.value, 2.0 / (2.0 - e), max_relative = 1e-9);
        }
        assert_eq!(radial_mean(&|s: &[f64]| s[0].powf(-2.5), &[true], 1e-10), Err(Error::Divergent));
        assert_eq!(radial_mean(&|s: &[f64]| s[0].powf(-2.0), &[true], 1e-10), Err(Error::Divergent));
        // e^{−|z|²} on the unit disc: 1 − e^{−1}
        let r = radial_mean(&|s: &[f64]| (-s[0] * s[0]).exp(), &[false], 1e-12).unwrap();
        assert_relative_eq!(r.value, 1.0 - (-1f64).exp(), max_relative = 1e-12);
    }

    #[test]
    fn radial_mean_two_dimensional() {
        // 1/max(s₁, s₂): by symmetry 2∫₀¹ 2s₁ ∫₀^{s₁} 2s₂/s₁ ds₂ ds₁ = 2∫₀¹ 2s₁² ds₁ = 4/3
        let r = radial_mean(&|s: &[f64]| 1.0 / s[0].max(s[1]), &[true, true], 1e-9).unwrap();
        assert_relative_eq!(r.value, 4.0 / 3.0, max_relative = 1e-7);
        let r = radial_mean(&|s: &[f64]| (-(s[0] * s[0] + s[1] * s[1])).exp(), &[false, false], 1e-11).unwrap();
        assert_relative_eq!(r.value, (1.0 - (-1f64).exp()).powi(2), max_relative = 1e-10);
    }

    fn log_abs() -> PshFunction {
        PshFunction::log_abs(vec![c(0.0, 0.0)]).unwrap()
    }

    #[test]
    fn log_mean_on_unit_disc() {
        let r = mean_over_polydisc(&log_abs(), &Polydisc::unit(1), &QuadratureSpec::default()).unwrap();
        assert!(r.converged);
        assert_relative_eq!(r.value, -0.5, epsilon = 1e-10);
    }

    #[test]
    fn log_mean_on_disc_away_from_root() {
        let p = Polydisc::disc(c(3.0, 0.0), 1.0).unwrap();
        let r = mean_over_polydisc(&log_abs(), &p, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(r.value, 3f64.ln(), epsilon = 1e-10);
    }

    #[test]
    fn constant_mean_is_exact() {
        let f = PshFunction::constant(1.0, 2).unwrap();
        let p = Polydisc::new(ComplexVector::new(vec![c(0.3, 1.0), c(-2.0, 0.0)]).unwrap(), vec![0.2, 5.0]).unwrap();
        assert_eq!(mean_over_polydisc(&f, &p, &QuadratureSpec::default()).unwrap().value, 1.0);
    }

    #[test]
    fn circle_means() {
        let spec = QuadratureSpec::default();
        let unit = mean_over_shilov(&log_abs(), &Polydisc::unit(1), &spec).unwrap();
        assert!(unit.value.abs() < 1e-12);
        let far = mean_over_shilov(&log_abs(), &Polydisc::disc(c(3.0, 0.0), 1.0).unwrap(), &spec).unwrap();
        assert_relative_eq!(far.value, 3f64.ln(), epsilon = 1e-10);
        let big = mean_over_shilov(&log_abs(), &Polydisc::disc(c(1.0, 0.0), 2.0).unwrap(), &spec).unwrap();
        assert_relative_eq!(big.value, 2f64.ln(), epsilon = 1e-10);
    }

    #[test]
    fn segment_means() {
        let spec = QuadratureSpec::default();
        let f = log_abs();
        let r = mean_over_segment(&f, &Segment::planar(c(0.0, 0.0), c(1.0, 0.0)).unwrap(), &spec).unwrap();
        assert_relative_eq!(r.value, -1.0, epsilon = 1e-9);
        let r = mean_over_segment(&f, &Segment::planar(c(-1.0, 0.0), c(1.0, 0.0)).unwrap(), &spec).unwrap();
        assert_relative_eq!(r.value, -1.0, epsilon = 1e-9);
        // −mean over [a, 1] = a log a/(1 − a) + 1
        let a: f64 = 0.5;
        let r = mean_over_segment(&f, &Segment::planar(c(a, 0.0), c(1.0, 0.0)).unwrap(), &spec).unwrap();
        assert_relative_eq!(-r.value, a * a.ln() / (1.0 - a) + 1.0, epsilon = 1e-10);
    }

    #[test]
    fn polytope_means() {
        let spec = QuadratureSpec::default().with_seed(3);
        let unit = ConvexPolytope::cuboid(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let one = PshFunction::constant(1.0, 1).unwrap();
        assert_eq!(mean_over_polytope(&one, &unit, &spec).unwrap().value, 1.0);
        let re = |x: &[f64]| x[0];
        let r = polytope_mean_with(&re, &unit, &spec).unwrap();
        assert!((r.value - 0.5).abs() <= r.abs_error_estimate);
    }

    #[test]
    fn thin_polytope_is_rejected() {
        let thin = ConvexPolytope::planar(&[c(0.0, 0.0), c(1.0, 1.0), c(1.0, 1.0 + 1e-7)]).unwrap();
        let f = PshFunction::constant(0.0, 1).unwrap();
        assert!(matches!(mean_over_polytope(&f, &thin, &QuadratureSpec::default()), Err(Error::DegeneratePolytope(_))));
    }

    #[test]
    fn overrides_are_parsed_and_validated() {
        let s = QuadratureSpec::default().with_overrides("radial=8,angular=32,tol=1e-8,seed=9").unwrap();
        assert_eq!((s.radial_nodes, s.angular_nodes, s.seed), (8, 32, 9));
        assert!(QuadratureSpec::default().with_overrides("angular=12").is_err());
        assert!(QuadratureSpec::default().with_overrides("colour=red").is_err());
    }

    #[test]
    fn divergent_power_is_flagged() {
        let hints = vec![CoordHints { singular: vec![c(0.0, 0.0)], radial: true, inactive: false }];
        let g = |z: &[C64]| z[0].norm().powf(-2.5);
        let r = polydisc_mean_with(&g, &hints, &Polydisc::unit(1), &QuadratureSpec::default().with_refinements(10));
        assert!(matches!(r, Err(Error::Divergent)));
    }
}
