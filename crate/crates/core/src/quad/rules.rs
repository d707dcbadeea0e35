//! Composite 1-D rules and per-coordinate disc / circle rules.
//!
//! Log-type singularities are handled by geometric grading: the interval next
//! to a singular point is split into panels of widths h·σ^L, h·σ^{L−1}(1−σ), …
//! and each panel carries an m-point Gauss–Legendre rule. Increasing (L, m)
//! together gives root-exponential convergence for integrable point
//! singularities.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::gauss::gauss_legendre;

/// Geometric grading ratio.
pub const SIGMA: f64 = 0.15;

/// Singular points at relative distance below this from an interval or
/// circle are treated as touching it.
pub const NEAR: f64 = 0.25;

/// Weighted points of a 1-D rule.
#[derive(Debug, Clone, Default)]
pub struct Rule1d {
    pub x: Vec<f64>,
    pub w: Vec<f64>,
}

impl Rule1d {
    fn push_gauss(&mut self, a: f64, b: f64, m: usize) {
        let g = gauss_legendre(m);
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        for (x, w) in g.nodes.iter().zip(&g.weights) {
            self.x.push(c + h * x);
            self.w.push(h * w);
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.x.iter().zip(&self.w).map(|(x, w)| w * f(*x)).sum()
    }
}

/// Plain n-point Gauss–Legendre rule on [a, b].
pub fn gauss_on(a: f64, b: f64, n: usize) -> Rule1d {
    let mut r = Rule1d::default();
    r.push_gauss(a, b, n);
    r
}

/// Rule on [a, b] graded toward the ends flagged singular.
pub fn graded(a: f64, b: f64, sing_a: bool, sing_b: bool, levels: usize, m: usize) -> Rule1d {
    let mut r = Rule1d::default();
    graded_into(&mut r, a, b, sing_a, sing_b, levels, m);
    r
}

fn graded_into(r: &mut Rule1d, a: f64, b: f64, sing_a: bool, sing_b: bool, levels: usize, m: usize) {
    match (sing_a, sing_b) {
        (false, false) => r.push_gauss(a, b, m),
        (true, true) => {
            let c = 0.5 * (a + b);
            graded_into(r, a, c, true, false, levels, m);
            graded_into(r, c, b, false, true, levels, m);
        }
        (true, false) | (false, true) => {
            let h = b - a;
            // breakpoints measured from the singular end: 0, σ^L, σ^{L−1}, …, σ, 1
            let mut cuts = vec![0.0];
            for k in (0..=levels).rev() {
                cuts.push(SIGMA.powi(k as i32));
            }
            for pair in cuts.windows(2) {
                let (u0, u1) = (pair[0], pair[1]);
                if sing_a {
                    r.push_gauss(a + h * u0, a + h * u1, m);
                } else {
                    r.push_gauss(b - h * u1, b - h * u0, m);
                }
            }
        }
    }
}

/// Rule on [a, b] with log-type singularities at `sing` (anywhere on the
/// real line). Interior points become breakpoints; points just outside mark
/// the nearby end as singular.
pub fn graded_with_points(a: f64, b: f64, sing: &[f64], levels: usize, m: usize, plain: usize) -> Rule1d {
    let len = b - a;
    let tol = 1e-14 * len;
    let mut cuts: Vec<(f64, bool)> = vec![(a, false), (b, false)];
    for &s in sing {
        if s <= a + tol && s >= a - NEAR * len {
            cuts[0].1 = true;
        } else if s >= b - tol && s <= b + NEAR * len {
            cuts[1].1 = true;
        } else if s > a && s < b {
            cuts.push((s, true));
        }
    }
    cuts.sort_by(|p, q| p.0.total_cmp(&q.0));
    cuts.dedup_by(|p, q| {
        if (p.0 - q.0).abs() <= tol {
            q.1 |= p.1;
            true
        } else {
            false
        }
    });
    if cuts.iter().all(|c| !c.1) {
        return gauss_on(a, b, plain);
    }
    let mut r = Rule1d::default();
    for pair in cuts.windows(2) {
        graded_into(&mut r, pair[0].0, pair[1].0, pair[0].1, pair[1].1, levels, m);
    }
    r
}

/// Rule on a full period [θ₀, θ₀ + 2π) with singular angles `sing`; equispaced
/// midpoint rule when there are none.
pub fn periodic(sing: &[f64], levels: usize, m: usize, plain: usize) -> Rule1d {
    if sing.is_empty() {
        let h = 2.0 * PI / plain as f64;
        return Rule1d { x: (0..plain).map(|k| (k as f64 + 0.5) * h).collect(), w: vec![h; plain] };
    }
    let mut angles: Vec<f64> = sing.iter().map(|t| t.rem_euclid(2.0 * PI)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|p, q| (*p - *q).abs() < 1e-14);
    let mut r = Rule1d::default();
    let k = angles.len();
    for i in 0..k {
        let a = angles[i];
        let b = if i + 1 < k { angles[i + 1] } else { angles[0] + 2.0 * PI };
        if b - a < 1e-14 {
            continue;
        }
        graded_into(&mut r, a, b, true, true, levels, m);
    }
    r
}

/// Per-coordinate description of the integrand.
#[derive(Debug, Clone, Default)]
pub struct CoordHints {
    /// Points of the coordinate plane where the integrand may be singular.
    pub singular: Vec<C64>,
    /// Depends on this coordinate only through |z_j − centre_j|.
    pub radial: bool,
    /// Does not depend on this coordinate at all.
    pub inactive: bool,
}

/// Refinement level → node parameters.
#[derive(Debug, Clone, Copy)]
pub struct LevelParams {
    pub levels: usize,
    pub m: usize,
    pub radial: usize,
    pub angular: usize,
}

impl LevelParams {
    pub fn at(level: usize, radial_nodes: usize, angular_nodes: usize) -> Self {
        Self { levels: 4 + 2 * level, m: 4 + 2 * level, radial: radial_nodes << level, angular: angular_nodes << level }
    }
}

/// Points and normalized weights (summing to 1) in one coordinate.
#[derive(Debug, Clone)]
pub struct CoordRule {
    pub points: Vec<C64>,
    pub weights: Vec<f64>,
}

impl CoordRule {
    pub fn single(z: C64) -> Self {
        Self { points: vec![z], weights: vec![1.0] }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Normalized area measure on the disc |z − c| < radius.
pub fn disc_rule(c: C64, radius: f64, hints: &CoordHints, lp: LevelParams) -> CoordRule {
    if hints.inactive {
        return CoordRule::single(c);
    }
    // relative polar position of each singular point
    let rel: Vec<(f64, f64)> = hints
        .singular
        .iter()
        .map(|h| {
            let d = h - c;
            (d.norm() / radius, d.arg())
        })
        .collect();
    let rho_sing: Vec<f64> = rel.iter().map(|p| p.0).collect();
    let radial = graded_with_points(0.0, 1.0, &rho_sing, lp.levels, lp.m, lp.radial);
    if hints.radial {
        // 2ρ dρ; any angle will do
        let points = radial.x.iter().map(|&r| c + radius * r).collect();
        let weights = radial.x.iter().zip(&radial.w).map(|(r, w)| 2.0 * r * w).collect();
        return CoordRule { points, weights };
    }
    let theta_sing: Vec<f64> = rel.iter().filter(|(rho, _)| *rho > 1e-14 && *rho < 1.0 + NEAR).map(|p| p.1).collect();
    let ang = periodic(&theta_sing, lp.levels, lp.m, lp.angular);
    let mut points = Vec::with_capacity(radial.len() * ang.len());
    let mut weights = Vec::with_capacity(radial.len() * ang.len());
    for (r, wr) in radial.x.iter().zip(&radial.w) {
        for (t, wt) in ang.x.iter().zip(&ang.w) {
            points.push(c + C64::from_polar(radius * r, *t));
            weights.push(2.0 * r * wr * wt / (2.0 * PI));
        }
    }
    CoordRule { points, weights }
}

/// Normalized arc-length measure on the circle |z − c| = radius.
pub fn circle_rule(c: C64, radius: f64, hints: &CoordHints, lp: LevelParams) -> CoordRule {
    if hints.inactive || hints.radial {
        return CoordRule::single(c + radius);
    }
    let theta_sing: Vec<f64> = hints
        .singular
        .iter()
        .filter_map(|h| {
            let d = h - c;
            let rho = d.norm() / radius;
            ((rho - 1.0).abs() < NEAR).then(|| d.arg())
        })
        .collect();
    let ang = periodic(&theta_sing, lp.levels, lp.m, lp.angular);
    CoordRule {
        points: ang.x.iter().map(|t| c + C64::from_polar(radius, *t)).collect(),
        weights: ang.w.iter().map(|w| w / (2.0 * PI)).collect(),
    }
}

/// Σ over the tensor grid of ∏ w_j · g(z), in a fixed order.
///
/// The outermost coordinate is split across rayon workers; partial sums are
/// combined in index order, so the result does not depend on the worker count.
pub fn tensor_sum(rules: &[CoordRule], g: &(dyn Fn(&[C64]) -> f64 + Sync)) -> f64 {
    use rayon::prelude::*;
    let n = rules.len();
    let first = &rules[0];
    let partial: Vec<f64> = (0..first.len())
        .into_par_iter()
        .map(|i0| {
            let mut z = vec![C64::new(0.0, 0.0); n];
            z[0] = first.points[i0];
            let w0 = first.weights[i0];
            if n == 1 {
                return w0 * g(&z);
            }
            let mut idx = vec![0usize; n];
            let mut acc = Neumaier::default();
            loop {
                let mut w = w0;
                for j in 1..n {
                    z[j] = rules[j].points[idx[j]];
                    w *= rules[j].weights[idx[j]];
                }
                acc.add(w * g(&z));
                // odometer over coordinates 1..n
                let mut j = n - 1;
                loop {
                    idx[j] += 1;
                    if idx[j] < rules[j].len() {
                        break;
                    }
                    idx[j] = 0;
                    if j == 1 {
                        return acc.sum();
                    }
                    j -= 1;
                }
            }
        })
        .collect();
    let mut acc = Neumaier::default();
    for p in partial {
        acc.add(p);
    }
    acc.sum()
}

/// Compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn sum(&self) -> f64 {
        if self.sum.is_finite() {
            self.sum + self.comp
        } else {
            self.sum
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn graded_rule_integrates_log_endpoint_singularity() {
        let r = graded(0.0, 1.0, true, false, 16, 20);
        assert_relative_eq!(r.integrate(f64::ln), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn interior_singularity_becomes_breakpoint() {
        // ∫_{-1}^{1} log|x| dx = −2
        let r = graded_with_points(-1.0, 1.0, &[0.0], 16, 20, 16);
        assert_relative_eq!(r.integrate(|x| x.abs().ln()), -2.0, epsilon = 1e-12);
    }

    #[test]
    fn periodic_rule_weights_sum_to_period() {
        for sing in [vec![], vec![1.0], vec![0.3, 4.0]] {
            let r = periodic(&sing, 6, 6, 16);
            assert_relative_eq!(r.w.iter().sum::<f64>(), 2.0 * PI, epsilon = 1e-12);
        }
    }

    #[test]
    fn disc_rule_is_normalized() {
        let hints = CoordHints { singular: vec![C64::new(0.2, 0.1)], ..Default::default() };
        let r = disc_rule(C64::new(0.0, 0.0), 1.0, &hints, LevelParams::at(1, 8, 16));
        assert_relative_eq!(r.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn tensor_sum_of_product_rule() {
        let lp = LevelParams::at(0, 8, 16);
        let h = CoordHints::default();
        let rules = vec![disc_rule(C64::new(0.0, 0.0), 1.0, &h, lp), disc_rule(C64::new(0.0, 0.0), 2.0, &h, lp)];
        // mean of |z₁|²|z₂|² = (1/2)(4/2)
        let v = tensor_sum(&rules, &|z: &[C64]| z[0].norm_sqr() * z[1].norm_sqr());
        assert_relative_eq!(v, 1.0, epsilon = 1e-13);
    }
}
