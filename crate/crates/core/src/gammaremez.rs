//! The segment constant γ, closed forms for log|z| on segments, and the
//! Remez-type bound UO_A(log|p|) ≤ γ·deg p with its ray decomposition.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{AffineFactor, Polynomial, PshFunction};
use crate::error::{Error, Result};
use crate::osc::{interval_sup_with, mean_on_region, oscillation, polytope_sup_with, sup_on_region};
use crate::quad::{self, QuadratureSpec};
use crate::types::{ComplexVector, ConvexPolytope, Region, Segment};

/// Slack allowed above γ before a Remez check fails.
pub const REMEZ_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaResult {
    pub gamma: f64,
    /// 1 − γ, the left endpoint of the extremal segment [a₀, 1].
    pub a0: f64,
    pub iterations: usize,
    /// |γ + log(γ − 1)|.
    pub residual: f64,
}

fn gamma_equation(g: f64) -> f64 {
    g + (g - 1.0).ln()
}

/// Root of γ + log(γ − 1) = 0 in (1, 2): bisection to 1e−6, then Newton.
pub fn gamma_constant(tol: f64) -> Result<GammaResult> {
    if !(tol >= 1e-14) {
        return Err(Error::InvalidParameter("tolerance must be ≥ 1e-14".into()));
    }
    let (mut lo, mut hi) = (1.0 + 1e-9, 2.0);
    let mut iterations = 0;
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if gamma_equation(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let mut g = 0.5 * (lo + hi);
    for _ in 0..50 {
        let step = gamma_equation(g) / (1.0 + 1.0 / (g - 1.0));
        g -= step;
        iterations += 1;
        if step.abs() <= tol * g {
            break;
        }
    }
    Ok(GammaResult { gamma: g, a0: 1.0 - g, iterations, residual: gamma_equation(g).abs() })
}

/// γ computed once per process.
pub fn gamma() -> &'static GammaResult {
    static CELL: OnceLock<GammaResult> = OnceLock::new();
    CELL.get_or_init(|| gamma_constant(1e-14).expect("valid tolerance"))
}

/// UO of log|z| on [a', 1] for real a' ∈ [−1, 1).
pub fn uo_segment_log_real(a: f64) -> f64 {
    if a == 0.0 {
        1.0
    } else if a > 0.0 {
        1.0 + a * a.ln() / (1.0 - a)
    } else {
        1.0 + a * (-a).ln() / (1.0 - a)
    }
}

/// UO_{[a,b]}(log|z|).
///
/// After swapping so that |b| ≥ |a| and dividing by b (which shifts sup and
/// mean alike), the segment is [a', 1] with |a'| ≤ 1. Real a' uses the closed
/// form; otherwise the sup is log max(|a|, |b|) by convexity of |z| along the
/// segment and the mean is integrated numerically.
pub fn uo_segment_log(a: C64, b: C64, spec: &QuadratureSpec) -> Result<f64> {
    if a == b {
        return Err(Error::InvalidParameter("segment endpoints must differ".into()));
    }
    let (a, b) = if a.norm() > b.norm() { (b, a) } else { (a, b) };
    let ar = a / b;
    // rotations by b leave rounding noise in the imaginary part
    if ar.im.abs() <= 1e-14 * ar.norm().max(1e-300) {
        return Ok(uo_segment_log_real(ar.re.max(-1.0)));
    }
    let seg = Segment::planar(ar, C64::new(1.0, 0.0))?;
    let f = PshFunction::log_abs(vec![C64::new(0.0, 0.0)])?;
    let mean = quad::mean_over_segment(&f, &seg, spec)?.require_converged()?;
    Ok(-mean.value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemezReport {
    pub polynomial_id: String,
    pub region_id: String,
    pub n: usize,
    pub degree: u32,
    pub uo: f64,
    pub mo: f64,
    /// UO / deg p.
    pub ratio: f64,
    /// Error estimate of UO.
    pub error: f64,
    pub pass: bool,
}

fn fmt_c(z: C64) -> String {
    if z.im == 0.0 {
        format!("{:.4}", z.re)
    } else {
        format!("{:.4}{:+.4}i", z.re, z.im)
    }
}

pub fn describe_polynomial(p: &Polynomial) -> String {
    match p.roots() {
        Some(r) => {
            let parts: Vec<String> = r.iter().map(|(z, m)| format!("{}^{m}", fmt_c(*z))).collect();
            format!("roots[{}]", parts.join(";"))
        }
        None => format!("affine{}x{}", p.factors.len(), p.dim),
    }
}

pub fn describe_region(r: &Region) -> String {
    match r {
        Region::Disc { center, radius } => format!("disc(c={},r={:.4})", fmt_c(*center), radius),
        Region::Polydisc(p) => format!("polydisc(n={})", p.dim()),
        Region::AnisotropicBox(b) => format!("box(n={},r={:.4})", b.dim(), b.scale),
        Region::Segment(s) if s.dim() == 1 => format!("segment({},{})", fmt_c(s.a[0]), fmt_c(s.b[0])),
        Region::Segment(s) => format!("segment(n={})", s.dim()),
        Region::ConvexPolytope(a) => format!("polytope(n={},v={})", a.dim(), a.vertices().len()),
    }
}

/// UO_A(log|p|) against γ·deg p for A a segment, disc or convex polytope.
pub fn remez_check(p: &Polynomial, a: &Region, spec: &QuadratureSpec) -> Result<RemezReport> {
    let degree = p.degree();
    if degree == 0 {
        return Err(Error::InvalidParameter("Remez check needs deg p ≥ 1".into()));
    }
    match a {
        Region::Segment(_) | Region::ConvexPolytope(_) | Region::Disc { .. } => {}
        _ => return Err(Error::InvalidParameter("Remez regions are segments, discs and polytopes".into())),
    }
    let f = PshFunction::log_poly(p.clone())?;
    let rep = oscillation(&f, a, spec)?;
    let ratio = rep.uo / degree as f64;
    let error = rep.sup_error + rep.mean_error;
    Ok(RemezReport {
        polynomial_id: describe_polynomial(p),
        region_id: describe_region(a),
        n: p.dim,
        degree,
        uo: rep.uo,
        mo: rep.mo,
        ratio,
        error,
        pass: ratio - error / degree as f64 <= gamma().gamma + REMEZ_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayRow {
    pub direction: Vec<f64>,
    pub length: f64,
    pub uo: f64,
    pub ratio: f64,
    /// sup of log|p| along the ray, found numerically.
    pub sup_on_ray: f64,
    /// The ray maximum is attained at z₀.
    pub sup_at_origin: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayAuditReport {
    pub z0: Vec<C64>,
    pub sup: f64,
    pub degree: u32,
    pub rays: Vec<RayRow>,
    pub max_ratio: f64,
    pub pass: bool,
}

/// Casts seeded rays from z₀ = argmax_A |p| and checks, on each chord A ∩ L,
/// that log|p| peaks at z₀ and that UO ≤ γ·deg p.
pub fn ray_decomposition_audit(p: &Polynomial, a: &ConvexPolytope, rays: usize, spec: &QuadratureSpec) -> Result<RayAuditReport> {
    if p.dim != a.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim, found: a.dim() });
    }
    if !a.is_full_dimensional() {
        return Err(Error::DegeneratePolytope("ray audit needs a full-dimensional polytope".into()));
    }
    let degree = p.degree();
    if degree == 0 {
        return Err(Error::InvalidParameter("ray audit needs deg p ≥ 1".into()));
    }
    let to_c = |x: &[f64]| -> Vec<C64> { x.chunks(2).map(|q| C64::new(q[0], q[1])).collect() };
    let g = |x: &[f64]| p.log_abs(&to_c(x));
    let (x0, sup) = polytope_sup_with(&g, a, spec.seed);
    let d = a.real_dim();
    let (lo, hi) = a.bounding_box();
    let diam = lo.iter().zip(&hi).map(|(l, h)| (h - l).powi(2)).sum::<f64>().sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x7a75);
    let mut dirs = Vec::with_capacity(rays);
    let mut attempts = 0;
    while dirs.len() < rays && attempts < 100 * rays.max(1) {
        attempts += 1;
        let u: Vec<f64> = (0..d).map(|_| rng.random::<f64>() - 0.5).collect();
        let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nu == 0.0 {
            continue;
        }
        let mut u: Vec<f64> = u.iter().map(|x| x / nu).collect();
        let mut s = a.ray_exit(&x0, &u);
        if s < 1e-9 * diam {
            u.iter_mut().for_each(|x| *x = -*x);
            s = a.ray_exit(&x0, &u);
        }
        if s >= 1e-9 * diam && s.is_finite() {
            dirs.push((u, s));
        }
    }
    let gam = gamma().gamma;
    let f = PshFunction::log_poly(p.clone())?;
    let rows: Vec<RayRow> = dirs
        .into_par_iter()
        .map(|(u, s)| {
            let end: Vec<f64> = x0.iter().zip(&u).map(|(x, ui)| x + s * ui).collect();
            let seg = Segment::new(ComplexVector::new(to_c(&x0))?, ComplexVector::new(to_c(&end))?)?;
            let mean = quad::mean_over_segment(&f, &seg, spec)?;
            let (_, ray_sup) = interval_sup_with(&|t: f64| f.eval(&seg.point(t)));
            let uo = sup - mean.value;
            Ok(RayRow {
                direction: u,
                length: s,
                uo,
                ratio: uo / degree as f64,
                sup_on_ray: ray_sup,
                sup_at_origin: ray_sup <= sup + 1e-9 * sup.abs().max(1.0),
            })
        })
        .collect::<Result<_>>()?;
    let max_ratio = rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    let pass = rows.iter().all(|r| r.sup_at_origin && r.ratio <= gam + REMEZ_TOL);
    Ok(RayAuditReport { z0: to_c(&x0), sup, degree, rays: rows, max_ratio, pass })
}

/// A seeded random (polynomial, region) pair.
///
/// Regions cycle through segments in ℂⁿ, discs and planar or 4-dimensional
/// polytopes; affine factors vanish at points drawn from the ball of radius 2
/// around the region's centroid, with multiplicities 1 to 3.
pub fn random_case(rng: &mut ChaCha8Rng, n_max: usize, deg_max: u32) -> Result<(Polynomial, Region)> {
    let kind = rng.random_range(0..3);
    let n = match kind {
        0 => rng.random_range(1..=n_max),
        1 => 1,
        _ => rng.random_range(1..=n_max.min(2)),
    };
    let rc = |rng: &mut ChaCha8Rng, s: f64| C64::new(rng.random_range(-s..s), rng.random_range(-s..s));
    let (region, centroid): (Region, Vec<C64>) = match kind {
        0 => {
            let a: Vec<C64> = (0..n).map(|_| rc(rng, 2.0)).collect();
            let b: Vec<C64> = (0..n).map(|_| rc(rng, 2.0)).collect();
            let mid = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
            (Region::Segment(Segment::new(ComplexVector::new(a)?, ComplexVector::new(b)?)?), mid)
        }
        1 => {
            let c = rc(rng, 2.0);
            let r = 10f64.powf(rng.random_range(-1.0..0.5));
            (Region::Disc { center: c, radius: r }, vec![c])
        }
        _ => loop {
            let k = rng.random_range(2 * n + 1..=2 * n + 4);
            let verts: Vec<Vec<f64>> = (0..k).map(|_| (0..2 * n).map(|_| rng.random_range(-1.5..1.5)).collect()).collect();
            let poly = ConvexPolytope::new(verts)?;
            if !poly.is_full_dimensional() {
                continue;
            }
            let (lo, hi) = poly.bounding_box();
            // keep the rejection sampler efficient: hull volume vs bounding box
            let mut probe = ChaCha8Rng::seed_from_u64(rng.random());
            let hits = (0..4000)
                .filter(|_| {
                    let x: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| probe.random_range(*l..*h)).collect();
                    poly.contains_real(&x, 0.0)
                })
                .count();
            if hits < 40 {
                continue;
            }
            let cen = poly.centroid().chunks(2).map(|q| C64::new(q[0], q[1])).collect();
            break (Region::ConvexPolytope(poly), cen);
        },
    };
    let target = rng.random_range(1..=deg_max.max(1));
    let mut factors = Vec::new();
    let mut deg = 0;
    while deg < target {
        let m = rng.random_range(1..=3u32.min(target - deg));
        // uniform in the ball of radius 2 in ℝ^{2n}
        let dir: Vec<C64> = (0..n).map(|_| rc(rng, 1.0)).collect();
        let norm = dir.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1e-12);
        let rad = 2.0 * rng.random::<f64>().powf(1.0 / (2 * n) as f64);
        let w: Vec<C64> = centroid.iter().zip(&dir).map(|(c, d)| c + d * (rad / norm)).collect();
        let coeffs: Vec<C64> = if n == 1 { vec![C64::new(1.0, 0.0)] } else { (0..n).map(|_| rc(rng, 1.0)).collect() };
        let shift: C64 = coeffs.iter().zip(&w).map(|(c, x)| c * x).sum();
        factors.push(AffineFactor { coeffs, shift, mult: m });
        deg += m;
    }
    let lead = C64::from_polar(10f64.powf(rng.random_range(-1.0..1.0)), rng.random_range(0.0..2.0 * PI));
    Ok((Polynomial::factored(n, lead, factors)?, region))
}

/// `count` seeded random Remez checks; item k uses the stream (seed, k).
pub fn remez_sweep(count: usize, seed: u64, deg_max: u32, n_max: usize, spec: &QuadratureSpec) -> Result<Vec<RemezReport>> {
    if n_max == 0 || deg_max == 0 {
        return Err(Error::InvalidParameter("need n_max ≥ 1 and deg_max ≥ 1".into()));
    }
    (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64 + 1);
            let (p, region) = random_case(&mut rng, n_max, deg_max)?;
            let item_spec = spec.with_seed(seed.wrapping_add(k as u64));
            let mut rep = remez_check(&p, &region, &item_spec)?;
            rep.polynomial_id = format!("p{k}:{}", rep.polynomial_id);
            Ok(rep)
        })
        .collect()
}

/// p(z) = z^k on [a₀ + δ, 1]; the ratio tends to γ as δ → 0.
pub fn sharpness_family(deltas: &[f64], degrees: &[u32], spec: &QuadratureSpec) -> Result<Vec<RemezReport>> {
    let a0 = gamma().a0;
    let mut out = Vec::new();
    for &k in degrees {
        for &d in deltas {
            let a = a0 + d;
            if !(a > -1.0 && a < 1.0) {
                return Err(Error::InvalidParameter(format!("a₀ + δ = {a} leaves (−1, 1)")));
            }
            let p = Polynomial::from_roots(C64::new(1.0, 0.0), &[(C64::new(0.0, 0.0), k)])?;
            let seg = Region::Segment(Segment::planar(C64::new(a, 0.0), C64::new(1.0, 0.0))?);
            out.push(remez_check(&p, &seg, spec)?);
        }
    }
    Ok(out)
}

/// Mean of log|p| over a region; shared by the additivity checks.
pub fn log_poly_mean(p: &Polynomial, a: &Region, spec: &QuadratureSpec) -> Result<f64> {
    Ok(mean_on_region(&PshFunction::log_poly(p.clone())?, a, spec)?.value)
}

/// sup of log|p| over a region.
pub fn log_poly_sup(p: &Polynomial, a: &Region, spec: &QuadratureSpec) -> Result<f64> {
    Ok(sup_on_region(&PshFunction::log_poly(p.clone())?, a, spec)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn gamma_value() {
        let g = gamma_constant(1e-12).unwrap();
        assert!(g.gamma > 1.278 && g.gamma < 1.279);
        assert!((g.gamma - 1.27846).abs() < 1e-5);
        assert!(g.residual <= 1e-12);
        assert!((g.gamma - 1.0 - (-g.gamma).exp()).abs() <= 1e-12);
        assert!((1.0 - g.a0 + (-g.a0).ln()).abs() <= 1e-12);
        assert!(gamma_constant(1e-16).is_err());
    }

    #[test]
    fn gamma_is_the_maximum_of_the_real_family() {
        let g = gamma();
        let mut best = (0.0, f64::NEG_INFINITY);
        for k in 0..=20000 {
            let a = -1.0 + k as f64 * 1e-4;
            let v = uo_segment_log_real(a);
            if v > best.1 {
                best = (a, v);
            }
        }
        assert!((best.0 - g.a0).abs() < 2e-4);
        assert!(best.1 <= g.gamma + 1e-15 && best.1 > g.gamma - 1e-7);
        assert_relative_eq!(uo_segment_log_real(g.a0), g.gamma, epsilon = 1e-13);
    }

    #[test]
    fn segment_examples() {
        let q = spec();
        assert_relative_eq!(uo_segment_log(c(0.5, 0.0), c(1.0, 0.0), &q).unwrap(), 1.0 - 2f64.ln(), epsilon = 1e-14);
        let g = gamma();
        assert!((uo_segment_log(c(g.a0, 0.0), c(1.0, 0.0), &q).unwrap() - g.gamma).abs() < 1e-6);
        // |z|² = t² + (1 − t)² along [i, 1]; the mean of log|z| is π/4 − 1
        let ui = uo_segment_log(c(0.0, 1.0), c(1.0, 0.0), &q).unwrap();
        assert!((ui - (1.0 - PI / 4.0)).abs() < 1e-9, "{ui}");
        // rotation and scaling invariance
        let w = C64::from_polar(3.0, 1.1);
        let base = uo_segment_log(c(-0.4, 0.0), c(1.0, 0.0), &q).unwrap();
        assert_relative_eq!(uo_segment_log(w * -0.4, w, &q).unwrap(), base, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_matches_numerical_route() {
        let q = spec();
        let f = PshFunction::log_abs(vec![c(0.0, 0.0)]).unwrap();
        for a in [-0.9, -0.5, -0.27, 0.1, 0.7] {
            let seg = Region::Segment(Segment::planar(c(a, 0.0), c(1.0, 0.0)).unwrap());
            let rep = oscillation(&f, &seg, &q).unwrap();
            assert!((rep.uo - uo_segment_log_real(a)).abs() < 1e-9, "{a}");
        }
    }

    #[test]
    fn remez_examples() {
        let q = spec();
        let z2 = Polynomial::from_roots(c(1.0, 0.0), &[(c(0.0, 0.0), 2)]).unwrap();
        let r = remez_check(&z2, &Region::Segment(Segment::planar(c(-1.0, 0.0), c(1.0, 0.0)).unwrap()), &q).unwrap();
        assert!((r.uo - 2.0).abs() < 1e-9 && (r.ratio - 1.0).abs() < 1e-9 && r.pass);

        let far = Polynomial::from_roots(c(1.0, 0.0), &[(c(5.0, 0.0), 1)]).unwrap();
        let r = remez_check(&far, &Region::Segment(Segment::planar(c(0.0, 0.0), c(1.0, 0.0)).unwrap()), &q).unwrap();
        // sup log 5, mean (1/1)∫₄⁵ log x dx
        let mean = (5.0 * 5f64.ln() - 5.0) - (4.0 * 4f64.ln() - 4.0);
        assert!((r.uo - (5f64.ln() - mean)).abs() < 1e-10);

        let fam = sharpness_family(&[0.0, 1e-2], &[1, 3], &q).unwrap();
        assert!((fam[0].ratio - gamma().gamma).abs() < 1e-6);
        assert!((fam[2].ratio - gamma().gamma).abs() < 1e-6);
        assert!(fam[1].ratio < fam[0].ratio);
    }

    #[test]
    fn ray_audit_on_square() {
        let q = spec();
        let sq = ConvexPolytope::cuboid(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        let z = Polynomial::from_roots(c(1.0, 0.0), &[(c(0.0, 0.0), 1)]).unwrap();
        let r = ray_decomposition_audit(&z, &sq, 64, &q).unwrap();
        assert_eq!(r.rays.len(), 64);
        assert!(r.pass, "{}", r.max_ratio);
        let outside = Polynomial::from_roots(c(1.0, 0.0), &[(c(3.0, 0.5), 1)]).unwrap();
        let r = ray_decomposition_audit(&outside, &sq, 16, &q).unwrap();
        assert!(r.pass && r.max_ratio < 1.0);
    }

    #[test]
    fn thin_triangle_exceeds_gamma() {
        // triangle 1, ±ih: as h → 0 the mean of log|z| tends to ∫₀¹ 2(1 − x) log x dx = −3/2,
        // while every chord from the apex stays within the segment bound
        let q = spec();
        let z = Polynomial::from_roots(c(1.0, 0.0), &[(c(0.0, 0.0), 1)]).unwrap();
        let t = ConvexPolytope::planar(&[c(1.0, 0.0), c(0.0, 1e-3), c(0.0, -1e-3)]).unwrap();
        let r = remez_check(&z, &Region::ConvexPolytope(t.clone()), &q).unwrap();
        assert!((r.uo - 1.5).abs() < r.error + 0.01, "{r:?}");
        assert!(!r.pass);
        let audit = ray_decomposition_audit(&z, &t, 32, &q).unwrap();
        assert!(audit.pass && audit.max_ratio <= 1.0 + 1e-9);
    }

    #[test]
    fn ray_through_the_root() {
        // the diagonal chord of the square through the root is [−1, 1]·(1 + i), so a' = −1
        let q = spec();
        let z = Polynomial::from_roots(c(1.0, 0.0), &[(c(0.0, 0.0), 1)]).unwrap();
        let f = PshFunction::log_poly(z).unwrap();
        let seg = Segment::planar(c(1.0, 1.0), c(-1.0, -1.0)).unwrap();
        let rep = oscillation(&f, &Region::Segment(seg), &q).unwrap();
        assert!((rep.uo - 1.0).abs() < 1e-9);
        assert_relative_eq!(uo_segment_log_real(-1.0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn sweep_is_deterministic_and_passes() {
        let q = spec().with_mc_samples(20_000);
        let a = remez_sweep(12, 3, 6, 3, &q).unwrap();
        let b = remez_sweep(12, 3, 6, 3, &q).unwrap();
        assert_eq!(a, b);
        for r in &a {
            assert!(r.pass, "{r:?}");
            assert!(r.mo <= 2.0 * gamma().gamma * r.degree as f64 + 1e-3);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn factorization_additivity(r1 in -2.0f64..2.0, i1 in -1.0f64..1.0, r2 in -2.0f64..2.0, i2 in -1.0f64..1.0, m in 1u32..3) {
            let q = spec();
            let seg = Region::Segment(Segment::planar(c(-1.0, 0.2), c(1.5, -0.3)).unwrap());
            let p = Polynomial::from_roots(c(2.0, 0.0), &[(c(r1, i1), m), (c(r2, i2), 1)]).unwrap();
            let whole = log_poly_mean(&p, &seg, &q).unwrap();
            let a = log_poly_mean(&Polynomial::from_roots(c(1.0, 0.0), &[(c(r1, i1), 1)]).unwrap(), &seg, &q).unwrap();
            let b = log_poly_mean(&Polynomial::from_roots(c(1.0, 0.0), &[(c(r2, i2), 1)]).unwrap(), &seg, &q).unwrap();
            prop_assert!((whole - (2f64.ln() + m as f64 * a + b)).abs() < 1e-8);
        }

        #[test]
        fn translation_invariance(ar in -2.0f64..2.0, ai in -2.0f64..2.0, br in -2.0f64..2.0, bi in -2.0f64..2.0, cr in -3.0f64..3.0, ci in -3.0f64..3.0) {
            prop_assume!((ar - br).abs() + (ai - bi).abs() > 1e-2);
            let q = spec();
            let (a, b, t) = (c(ar, ai), c(br, bi), c(cr, ci));
            let base = uo_segment_log(a, b, &q).unwrap();
            let p = Polynomial::from_roots(c(1.0, 0.0), &[(t, 1)]).unwrap();
            let shifted = remez_check(&p, &Region::Segment(Segment::planar(a + t, b + t).unwrap()), &q).unwrap();
            prop_assert!((shifted.uo - base).abs() < 1e-8);
            prop_assert!(base <= gamma().gamma + 1e-9);
        }

        #[test]
        fn uo_subadditive_under_products(r1 in -2.0f64..2.0, i1 in -1.0f64..1.0, r2 in -2.0f64..2.0, i2 in -1.0f64..1.0) {
            let q = spec();
            let seg = Region::Segment(Segment::planar(c(-1.0, 0.0), c(1.0, 0.5)).unwrap());
            let p = Polynomial::from_roots(c(1.0, 0.0), &[(c(r1, i1), 1)]).unwrap();
            let r = Polynomial::from_roots(c(1.0, 0.0), &[(c(r2, i2), 2)]).unwrap();
            let pr = Polynomial::from_roots(c(1.0, 0.0), &[(c(r1, i1), 1), (c(r2, i2), 2)]).unwrap();
            let u = |x: &Polynomial| remez_check(x, &seg, &q).unwrap().uo;
            prop_assert!(u(&pr) <= u(&p) + u(&r) + 1e-8);
        }
    }
}
