//! Empirical John–Nirenberg machinery on anisotropic boxes: the
//! quasi-distance ρ, distribution decay of |φ − φ_B|, and the search for an
//! ε with uniformly bounded exponential means.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::PshFunction;
use crate::error::{Error, Result};
use crate::fit::{least_squares, theil_sen};
use crate::osc::sup_on_region;
use crate::quad::{self, QuadratureSpec};
use crate::types::{AnisotropicBox, ComplexVector, Region};

/// Points per complex dimension in [`distribution_estimate`].
pub const SAMPLES_PER_DIM: usize = 1 << 20;

/// Default t-grid for the decay table.
pub fn default_t_grid() -> Vec<f64> {
    (5..=30).map(|k| k as f64 / 10.0).collect()
}

/// Family supremum above which an exponential mean counts as unbounded.
pub const DEFAULT_THRESHOLD: f64 = 1e6;

/// Largest admissible max/min ratio of the means across a family.
pub const MAX_FLUCTUATION: f64 = 10.0;

/// Largest admissible |Theil–Sen slope| of log-mean against log r.
pub const MAX_TREND: f64 = 0.1;

fn check_exponents(a: &[f64]) -> Result<()> {
    if a.is_empty() || a.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::InvalidParameter("exponents must be positive".into()));
    }
    Ok(())
}

/// ρ(z, w) = max_k |z_k − w_k|^{1/a_k}.
pub fn quasi_distance(z: &[C64], w: &[C64], a: &[f64]) -> Result<f64> {
    check_exponents(a)?;
    if z.len() != a.len() || w.len() != a.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: z.len().max(w.len()) });
    }
    Ok(z.iter().zip(w).zip(a).map(|((x, y), ak)| (x - y).norm().powf(1.0 / ak)).fold(0.0, f64::max))
}

/// A constant c with ρ(x, y) ≤ c(ρ(x, z) + ρ(z, y)).
///
/// Each coordinate term is a power s ↦ s^{1/a} of a metric; for 1/a ≤ 1 it is
/// subadditive and for 1/a > 1 convexity gives (u + v)^p ≤ 2^{p−1}(u^p + v^p).
pub fn quasi_constant(a: &[f64]) -> Result<f64> {
    check_exponents(a)?;
    let p = a.iter().map(|x| 1.0 / x).fold(0.0, f64::max);
    Ok(2f64.powf(p - 1.0).max(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiDistanceReport {
    pub triples: usize,
    pub constant: f64,
    /// max ρ(x, y)/(ρ(x, z) + ρ(z, y)) over the sample.
    pub max_ratio: f64,
    pub symmetric: bool,
    pub pass: bool,
}

/// Samples triples in the box [−1, 1]^{2n} and checks the quasi-distance axioms.
pub fn quasi_distance_check(a: &[f64], triples: usize, seed: u64) -> Result<QuasiDistanceReport> {
    let constant = quasi_constant(a)?;
    let n = a.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw =
        |rng: &mut ChaCha8Rng| -> Vec<C64> { (0..n).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect() };
    let mut max_ratio = 0.0f64;
    let mut symmetric = true;
    for k in 0..triples {
        let x = draw(&mut rng);
        // every fourth triple puts z near the segment midpoint, where the constant is approached
        let y = draw(&mut rng);
        let z = if k % 4 == 0 {
            x.iter().zip(&y).map(|(p, q)| 0.5 * (p + q) + C64::new(rng.random_range(-1e-3..1e-3), 0.0)).collect()
        } else {
            draw(&mut rng)
        };
        let dxy = quasi_distance(&x, &y, a)?;
        symmetric &= dxy == quasi_distance(&y, &x, a)?;
        symmetric &= quasi_distance(&x, &x, a)? == 0.0;
        let denom = quasi_distance(&x, &z, a)? + quasi_distance(&z, &y, a)?;
        if denom > 0.0 {
            max_ratio = max_ratio.max(dxy / denom);
        }
    }
    Ok(QuasiDistanceReport { triples, constant, max_ratio, symmetric, pass: symmetric && max_ratio <= constant * (1.0 + 1e-12) })
}

/// B(ẑ, r) = P_{r^a}(ẑ).
pub fn ball(center: &[C64], r: f64, a: &[f64]) -> Result<AnisotropicBox> {
    AnisotropicBox::new(ComplexVector::new(center.to_vec())?, r, a.to_vec())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayTable {
    pub t_values: Vec<f64>,
    /// log(|{z ∈ B₀ : |φ − φ_{B₀}| > t}| / |B₀|); −∞ when no sample exceeds t.
    pub log_measures: Vec<f64>,
    /// −∞ when the tail is empty.
    pub fitted_slope: f64,
    pub fitted_intercept: f64,
    /// RMS residual of the fit relative to |slope|.
    pub relative_residual: f64,
    /// Median of |φ − φ_{B₀}|; the fit uses t beyond it.
    pub tail_start: f64,
    pub mean: f64,
    pub samples: usize,
}

/// Sobol points (Owen-scrambled with `seed`) mapped to the polydisc by
/// ρ = r√u, θ = 2πv per coordinate. The generator holds 2¹⁶ points per
/// scramble, so longer runs chain independently scrambled blocks.
fn sobol_point(i: usize, radii: &[f64], center: &[C64], seed: u32) -> Vec<C64> {
    let block = (i >> 16) as u32;
    let seed = seed ^ block.wrapping_mul(0x9E37_79B9);
    let i = i & 0xFFFF;
    radii
        .iter()
        .zip(center)
        .enumerate()
        .map(|(j, (r, c))| {
            // offset by half a cell so that no sample sits exactly on the centre
            let u = (sobol_burley::sample(i as u32, 2 * j as u32, seed) as f64 + 0.5f64.powi(25)).min(1.0);
            let v = sobol_burley::sample(i as u32, 2 * j as u32 + 1, seed) as f64;
            c + C64::from_polar(r * u.sqrt(), 2.0 * PI * v)
        })
        .collect()
}

/// Distribution function of |φ − φ_{B₀}| by quasi-random sampling, with a
/// least-squares line through the log-measures on the tail.
pub fn distribution_estimate(f: &PshFunction, b0: &AnisotropicBox, t_grid: &[f64], spec: &QuadratureSpec, seed: u64) -> Result<DecayTable> {
    if f.dim != b0.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim, found: b0.dim() });
    }
    if t_grid.len() < 2 || t_grid.windows(2).any(|w| !(w[1] > w[0])) || t_grid[0] < 0.0 {
        return Err(Error::InvalidParameter("t-grid must be increasing, non-negative, with ≥ 2 values".into()));
    }
    let p = b0.as_polydisc();
    let mean = quad::mean_over_polydisc(f, &p, spec)?.value;
    let samples = SAMPLES_PER_DIM * f.dim;
    let radii = p.radii.clone();
    let center = p.center.as_slice().to_vec();
    let seed32 = (seed ^ (seed >> 32)) as u32;
    let mut dev: Vec<f64> = (0..samples).into_par_iter().map(|i| (f.eval(&sobol_point(i, &radii, &center, seed32)) - mean).abs()).collect();
    dev.sort_by(f64::total_cmp);
    let tail_start = dev[dev.len() / 2];
    let log_measures: Vec<f64> = t_grid
        .iter()
        .map(|t| {
            let above = dev.len() - dev.partition_point(|d| d <= t);
            (above as f64 / samples as f64).ln()
        })
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        t_grid.iter().zip(&log_measures).filter(|(t, m)| **t >= tail_start && m.is_finite()).map(|(t, m)| (*t, *m)).unzip();
    let (fitted_slope, fitted_intercept, relative_residual) = if xs.len() >= 2 {
        let (s, c, rms) = least_squares(&xs, &ys)?;
        (s, c, rms / s.abs().max(f64::MIN_POSITIVE))
    } else {
        (f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0)
    };
    Ok(DecayTable { t_values: t_grid.to_vec(), log_measures, fitted_slope, fitted_intercept, relative_residual, tail_start, mean, samples })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonRow {
    pub epsilon: f64,
    /// Per family member; None where the integral diverges.
    pub means: Vec<Option<f64>>,
    pub divergent: bool,
    pub sup_mean: Option<f64>,
    /// max/min of the means across the family.
    pub fluctuation: Option<f64>,
    /// Theil–Sen slope of log-mean against log r.
    pub trend: Option<f64>,
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonReport {
    pub family_size: usize,
    pub eps_values: Vec<f64>,
    pub rows: Vec<EpsilonRow>,
    /// Per ε; None where divergent.
    pub sup_means: Vec<Option<f64>>,
    /// Largest tested ε whose family supremum stays bounded; a lower-bound
    /// witness for ε₀, not ε₀ itself.
    pub eps0_estimate: Option<f64>,
    pub threshold: f64,
}

/// (1/|P|)∫_P e^{−ε(φ − sup_P φ)}.
pub fn exponential_mean(f: &PshFunction, b: &AnisotropicBox, eps: f64, spec: &QuadratureSpec) -> Result<f64> {
    let p = b.as_polydisc();
    let sup = sup_on_region(f, &Region::Polydisc(p.clone()), spec)?.value;
    if !sup.is_finite() {
        return Err(Error::InvalidParameter("φ must be bounded above on the box".into()));
    }
    if f.is_multicircular() && p.is_centered_at_origin() {
        let singular: Vec<bool> = (0..f.dim).map(|j| f.depends_on(j) && f.singular_hints(j).iter().any(|h| h.norm() == 0.0)).collect();
        let g = |s: &[f64]| {
            let z: Vec<C64> = s.iter().zip(&p.radii).map(|(x, r)| C64::new(x * r, 0.0)).collect();
            (-eps * (f.eval(&z) - sup)).exp()
        };
        return Ok(quad::radial_mean(&g, &singular, spec.target_rel_error.max(1e-10))?.value);
    }
    let hints = quad::hints_for(f, p.center.as_slice());
    let out = quad::polydisc_mean_with(&|z: &[C64]| (-eps * (f.eval(z) - sup)).exp(), &hints, &p, spec)?;
    Ok(out.value)
}

/// Exponential means over a family of boxes for each ε in `eps_grid`.
///
/// An ε counts as bounded when no member diverges, the supremum stays below
/// `threshold`, the means fluctuate by less than [`MAX_FLUCTUATION`] and show
/// no trend in log r beyond [`MAX_TREND`].
pub fn epsilon0_search(
    f: &PshFunction,
    family: &[AnisotropicBox],
    eps_grid: &[f64],
    threshold: f64,
    spec: &QuadratureSpec,
) -> Result<EpsilonReport> {
    if family.is_empty() {
        return Err(Error::InvalidParameter("empty family".into()));
    }
    if eps_grid.is_empty() || eps_grid.windows(2).any(|w| !(w[1] > w[0])) || eps_grid[0] <= 0.0 {
        return Err(Error::InvalidParameter("ε-grid must be positive and increasing".into()));
    }
    let rows: Vec<EpsilonRow> = eps_grid
        .iter()
        .map(|&eps| {
            let means: Vec<Option<f64>> = family
                .par_iter()
                .map(|b| match exponential_mean(f, b, eps, spec) {
                    Ok(v) => Ok(Some(v)),
                    Err(Error::Divergent) => Ok(None),
                    Err(e) => Err(e),
                })
                .collect::<Result<_>>()?;
            let divergent = means.iter().any(Option::is_none);
            if divergent {
                return Ok(EpsilonRow { epsilon: eps, means, divergent, sup_mean: None, fluctuation: None, trend: None, bounded: false });
            }
            let vals: Vec<f64> = means.iter().flatten().copied().collect();
            let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let fluctuation = max / min;
            let logs_r: Vec<f64> = family.iter().map(|b| b.scale.ln()).collect();
            let logs_m: Vec<f64> = vals.iter().map(|v| v.ln()).collect();
            let trend = theil_sen(&logs_r, &logs_m).unwrap_or(0.0);
            let bounded = max < threshold && fluctuation < MAX_FLUCTUATION && trend.abs() <= MAX_TREND;
            Ok(EpsilonRow {
                epsilon: eps,
                means,
                divergent,
                sup_mean: Some(max),
                fluctuation: Some(fluctuation),
                trend: Some(trend),
                bounded,
            })
        })
        .collect::<Result<_>>()?;
    let eps0_estimate = rows.iter().filter(|r| r.bounded).map(|r| r.epsilon).last();
    Ok(EpsilonReport {
        family_size: family.len(),
        eps_values: eps_grid.to_vec(),
        sup_means: rows.iter().map(|r| r.sup_mean).collect(),
        rows,
        eps0_estimate,
        threshold,
    })
}

/// Boxes P_{r^a}(ẑ) with r = 2^{−k}, k = 0..count.
pub fn shrinking_family(center: &[C64], a: &[f64], count: usize) -> Result<Vec<AnisotropicBox>> {
    (0..count).map(|k| ball(center, 0.5f64.powi(k as i32), a)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn quasi_distance_examples() {
        let a = [1.0, 2.0];
        let z = [c(0.3, 0.1), c(-0.2, 0.0)];
        assert_eq!(quasi_distance(&z, &z, &a).unwrap(), 0.0);
        let o = [c(0.0, 0.0); 2];
        assert_relative_eq!(quasi_distance(&[c(0.01, 0.0), c(0.0, 0.0)], &o, &a).unwrap(), 0.01);
        assert_relative_eq!(quasi_distance(&[c(0.0, 0.0), c(0.01, 0.0)], &o, &a).unwrap(), 0.1, epsilon = 1e-15);
        assert!(quasi_distance(&z, &o, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn quasi_axioms_on_sampled_triples() {
        for a in [vec![1.0], vec![1.0, 2.0], vec![0.5, 3.0], vec![0.25, 1.0, 4.0]] {
            let r = quasi_distance_check(&a, 10_000, 11).unwrap();
            assert!(r.pass, "{a:?} {r:?}");
        }
        // for a = ½ the constant 2 is nearly attained at midpoints
        let r = quasi_distance_check(&[0.5], 10_000, 3).unwrap();
        assert!(r.max_ratio > 1.9);
    }

    #[test]
    fn doubling_is_exact() {
        let a = [1.0, 2.5];
        let b = ball(&[c(0.1, 0.0), c(0.0, 0.2)], 0.1, &a).unwrap();
        for c1 in [2.0, 3.7] {
            let big = ball(&[c(0.1, 0.0), c(0.0, 0.2)], 0.1 * c1, &a).unwrap();
            let want = c1.powf(2.0 * a.iter().sum::<f64>());
            assert_relative_eq!(big.volume() / b.volume(), want, max_relative = 1e-12);
        }
    }

    #[test]
    fn decay_of_log_on_the_disc() {
        let f = PshFunction::log_abs(vec![c(0.0, 0.0)]).unwrap();
        let b = ball(&[c(0.0, 0.0)], 1.0, &[1.0]).unwrap();
        let d = distribution_estimate(&f, &b, &default_t_grid(), &spec(), 5).unwrap();
        assert_relative_eq!(d.mean, -0.5, epsilon = 1e-9);
        assert!((d.fitted_slope + 2.0).abs() < 0.05, "{}", d.fitted_slope);
        // measure e^{−1−2t} for t > ½
        for (t, m) in d.t_values.iter().zip(&d.log_measures) {
            assert!((m - (-1.0 - 2.0 * t)).abs() < 0.05, "{t} {m}");
        }
        assert!(d.log_measures.windows(2).all(|w| w[1] <= w[0]));
        assert!(d.relative_residual < 0.1);
    }

    #[test]
    fn decay_of_constant_is_empty() {
        let f = PshFunction::constant(3.0, 1).unwrap();
        let b = ball(&[c(0.0, 0.0)], 1.0, &[1.0]).unwrap();
        let d = distribution_estimate(&f, &b, &default_t_grid(), &spec(), 5).unwrap();
        assert_eq!(d.fitted_slope, f64::NEG_INFINITY);
    }

    #[test]
    fn decay_on_the_bidisc() {
        let f = PshFunction::m_log(1.0, 0, 2).unwrap();
        let b = ball(&[c(0.0, 0.0); 2], 1.0, &[1.0, 1.0]).unwrap();
        let d = distribution_estimate(&f, &b, &default_t_grid(), &spec(), 9).unwrap();
        assert!((d.fitted_slope + 2.0).abs() < 0.1, "{}", d.fitted_slope);
    }

    #[test]
    fn epsilon_search_on_shrinking_discs() {
        let f = PshFunction::log_abs(vec![c(0.0, 0.0)]).unwrap();
        let fam = shrinking_family(&[c(0.0, 0.0)], &[1.0], 20).unwrap();
        let eps = [0.5, 1.0, 1.5, 1.9, 2.5];
        let r = epsilon0_search(&f, &fam, &eps, DEFAULT_THRESHOLD, &spec()).unwrap();
        for (e, row) in eps.iter().zip(&r.rows).take(4) {
            for m in &row.means {
                assert_relative_eq!(m.unwrap(), 2.0 / (2.0 - e), max_relative = 1e-8);
            }
            assert!(row.bounded);
        }
        assert!(r.rows[4].divergent);
        assert_eq!(r.eps0_estimate, Some(1.9));
        assert!(r.sup_means.windows(2).all(|w| match (w[0], w[1]) {
            (Some(a), Some(b)) => b >= a,
            _ => true,
        }));
    }

    #[test]
    fn critical_exponent_diverges() {
        let f = PshFunction::log_abs(vec![c(0.0, 0.0)]).unwrap();
        let fam = shrinking_family(&[c(0.0, 0.0)], &[1.0], 6).unwrap();
        let r = epsilon0_search(&f, &fam, &[2.0], DEFAULT_THRESHOLD, &spec()).unwrap();
        assert!(r.rows[0].divergent && r.eps0_estimate.is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        #[test]
        fn members_stay_below_the_reported_supremum(seed in 0u64..1000) {
            let f = PshFunction::log_abs(vec![c(0.0, 0.0)]).unwrap();
            let fam = shrinking_family(&[c(0.0, 0.0)], &[1.0], 12).unwrap();
            let rep = epsilon0_search(&f, &fam, &[0.5, 1.0, 1.5], DEFAULT_THRESHOLD, &spec()).unwrap();
            let eps0 = rep.eps0_estimate.unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..100 {
                let eps = rng.random_range(0.05..=eps0 / 2.0);
                let r = 2f64.powf(-rng.random_range(0.0..11.0));
                let b = ball(&[c(0.0, 0.0)], r, &[1.0]).unwrap();
                let m = exponential_mean(&f, &b, eps, &spec()).unwrap();
                let k = rep.eps_values.iter().position(|e| *e >= eps).unwrap();
                prop_assert!(m <= rep.sup_means[k].unwrap() * (1.0 + 1e-9));
            }
        }
    }
}
