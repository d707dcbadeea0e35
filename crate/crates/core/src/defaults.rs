//! The single table of tunable defaults, echoed into every CLI report.

use serde::{Deserialize, Serialize};

use crate::bergman::{CONDITION_LIMIT, DEFAULT_H, GRAM_DEGREES, H_FLOOR, INEQUALITY_TOL, SLOPE_AGREEMENT};
use crate::gammaremez::REMEZ_TOL;
use crate::jn::{DEFAULT_THRESHOLD, MAX_FLUCTUATION, MAX_TREND, SAMPLES_PER_DIM};
use crate::osc::SUP_CROSS_CHECK;
use crate::quad::QuadratureSpec;

/// Bumped whenever any entry below changes.
pub const DEFAULTS_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Defaults {
    pub version: String,
    pub quadrature: QuadratureSpec,
    pub sup_cross_check: f64,
    pub remez_tol: f64,
    pub gram_degrees: Vec<usize>,
    pub condition_limit: f64,
    pub hessian_h: Vec<f64>,
    pub hessian_h_floor: f64,
    pub inequality_tol: f64,
    pub slope_agreement: f64,
    pub jn_samples_per_dim: usize,
    pub jn_threshold: f64,
    pub jn_max_fluctuation: f64,
    pub jn_max_trend: f64,
}

impl Default for Defaults {
    fn default() -> Self {
        Self {
            version: DEFAULTS_VERSION.into(),
            quadrature: QuadratureSpec::default(),
            sup_cross_check: SUP_CROSS_CHECK,
            remez_tol: REMEZ_TOL,
            gram_degrees: GRAM_DEGREES.to_vec(),
            condition_limit: CONDITION_LIMIT,
            hessian_h: DEFAULT_H.to_vec(),
            hessian_h_floor: H_FLOOR,
            inequality_tol: INEQUALITY_TOL,
            slope_agreement: SLOPE_AGREEMENT,
            jn_samples_per_dim: SAMPLES_PER_DIM,
            jn_threshold: DEFAULT_THRESHOLD,
            jn_max_fluctuation: MAX_FLUCTUATION,
            jn_max_trend: MAX_TREND,
        }
    }
}
