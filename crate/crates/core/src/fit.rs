//! Straight-line fits used for Lelong slopes and decay rates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordinary least squares y ≈ slope·x + intercept, with the RMS residual.
pub fn least_squares(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    if x.len() < 2 {
        return Err(Error::InvalidParameter("a line fit needs at least two points".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("abscissae must not all coincide".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum::<f64>() / n).sqrt();
    Ok((slope, intercept, rms))
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Median of pairwise slopes.
pub fn theil_sen(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidParameter("Theil–Sen needs two or more paired points".into()));
    }
    let mut slopes = Vec::new();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            if x[j] != x[i] {
                slopes.push((y[j] - y[i]) / (x[j] - x[i]));
            }
        }
    }
    if slopes.is_empty() {
        return Err(Error::InvalidParameter("abscissae must not all coincide".into()));
    }
    Ok(median(&mut slopes))
}

/// Least-squares slope of a quantity against log r.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub r_values: Vec<f64>,
    pub values: Vec<f64>,
    /// False when the residual exceeds 5% of |slope|.
    pub asymptotic: bool,
}

impl SlopeFit {
    pub fn new(r_values: &[f64], values: &[f64]) -> Result<Self> {
        if r_values.len() < 4 {
            return Err(Error::InvalidParameter("need at least 4 r-values".into()));
        }
        if r_values.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
            return Err(Error::InvalidParameter("r-values must lie in (0, 1)".into()));
        }
        let x: Vec<f64> = r_values.iter().map(|r| r.ln()).collect();
        let (slope, intercept, residual_rms) = least_squares(&x, values)?;
        Ok(Self {
            slope,
            intercept,
            residual_rms,
            r_values: r_values.to_vec(),
            values: values.to_vec(),
            asymptotic: residual_rms <= 0.05 * slope.abs(),
        })
    }
}

/// `count` log-spaced points from `hi` down to `lo`.
pub fn log_grid(hi: f64, lo: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![hi];
    }
    let (a, b) = (hi.ln(), lo.ln());
    (0..count).map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let (s, c, r) = least_squares(&x, &y).unwrap();
        assert_relative_eq!(s, 2.0, epsilon = 1e-14);
        assert_relative_eq!(c, 1.0, epsilon = 1e-14);
        assert!(r < 1e-14);
        assert_relative_eq!(theil_sen(&x, &y).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn theil_sen_ignores_one_outlier() {
        let x = [0.0, 1.0, 2.0, 3.0, 4.0];
        let y = [0.0, 1.0, 2.0, 30.0, 4.0];
        assert_relative_eq!(theil_sen(&x, &y).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn slope_fit_validates_grid() {
        assert!(SlopeFit::new(&[0.5, 0.25, 0.125], &[1.0, 2.0, 3.0]).is_err());
        assert!(SlopeFit::new(&[0.5, 0.25, 0.125, 1.5], &[1.0; 4]).is_err());
        let r = log_grid(0.5, 1e-3, 6);
        let v: Vec<f64> = r.iter().map(|x| 2.0 * x.ln()).collect();
        let f = SlopeFit::new(&r, &v).unwrap();
        assert_relative_eq!(f.slope, 2.0, epsilon = 1e-12);
        assert!(f.asymptotic);
    }

    proptest! {
        #[test]
        fn least_squares_recovers_noise_free_lines(s in -5.0f64..5.0, c in -5.0f64..5.0) {
            let x: Vec<f64> = (0..6).map(|k| k as f64 * 0.7 - 1.0).collect();
            let y: Vec<f64> = x.iter().map(|a| s * a + c).collect();
            let (s2, c2, _) = least_squares(&x, &y).unwrap();
            prop_assert!((s - s2).abs() < 1e-10 && (c - c2).abs() < 1e-10);
        }
    }
}
