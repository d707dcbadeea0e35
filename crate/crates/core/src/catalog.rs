//! Catalog of named plurisubharmonic test functions.
//!
//! Every entry carries whatever closed-form metadata is available (supremum on
//! polydiscs, Hessian, polynomial degree, Lelong-class constant); the numerical
//! layers use it both as a shortcut and as an oracle.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grammar::{parse_complex, parse_complex_list, parse_real, parse_real_list};

/// Moduli at or beyond this bound are outside the domain of the counterexample.
pub const COUNTEREXAMPLE_DOMAIN: f64 = 1.0 - 1e-9;

/// One factor (⟨c, z⟩ − b)^m of a polynomial in factored form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineFactor {
    pub coeffs: Vec<C64>,
    pub shift: C64,
    pub mult: u32,
}

impl AffineFactor {
    fn value(&self, z: &[C64]) -> C64 {
        self.coeffs.iter().zip(z).map(|(c, zj)| c * zj).sum::<C64>() - self.shift
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }
}

/// Polynomial `lead · ∏ (⟨c_k, z⟩ − b_k)^{m_k}`; in one variable this is the
/// roots-with-multiplicities form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub dim: usize,
    pub lead: C64,
    pub factors: Vec<AffineFactor>,
}

impl Polynomial {
    pub fn from_roots(lead: C64, roots: &[(C64, u32)]) -> Result<Self> {
        Self::factored(1, lead, roots.iter().map(|&(r, m)| AffineFactor { coeffs: vec![C64::new(1.0, 0.0)], shift: r, mult: m }).collect())
    }

    pub fn factored(dim: usize, lead: C64, factors: Vec<AffineFactor>) -> Result<Self> {
        if lead.norm() == 0.0 || !lead.re.is_finite() || !lead.im.is_finite() {
            return Err(Error::InvalidParameter("polynomial is identically zero".into()));
        }
        for f in &factors {
            if f.coeffs.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: f.coeffs.len() });
            }
            if f.mult == 0 {
                return Err(Error::InvalidParameter("multiplicities must be ≥ 1".into()));
            }
            if f.is_constant() && f.shift.norm() == 0.0 {
                return Err(Error::InvalidParameter("polynomial is identically zero".into()));
            }
        }
        Ok(Self { dim, lead, factors })
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().filter(|f| !f.is_constant()).map(|f| f.mult).sum()
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        self.factors.iter().fold(self.lead, |acc, f| acc * f.value(z).powu(f.mult))
    }

    pub fn log_abs(&self, z: &[C64]) -> f64 {
        let mut s = self.lead.norm().ln();
        for f in &self.factors {
            let v = f.value(z).norm();
            if v == 0.0 {
                return f64::NEG_INFINITY;
            }
            s += f.mult as f64 * v.ln();
        }
        s
    }

    /// Roots with multiplicities (one variable only).
    pub fn roots(&self) -> Option<Vec<(C64, u32)>> {
        if self.dim != 1 {
            return None;
        }
        Some(self.factors.iter().filter(|f| !f.is_constant()).map(|f| (f.shift / f.coeffs[0], f.mult)).collect())
    }

    /// Coefficients in ascending order of powers (one variable only).
    pub fn coefficients(&self) -> Option<Vec<C64>> {
        if self.dim != 1 {
            return None;
        }
        let mut c = vec![self.lead];
        for f in &self.factors {
            for _ in 0..f.mult {
                // multiply by (a z − b)
                let (a, b) = (f.coeffs[0], f.shift);
                let mut next = vec![C64::new(0.0, 0.0); c.len() + 1];
                for (k, ck) in c.iter().enumerate() {
                    next[k] -= ck * b;
                    next[k + 1] += ck * a;
                }
                c = next;
            }
        }
        while c.len() > 1 && c.last().is_some_and(|x| x.norm() == 0.0) {
            c.pop();
        }
        Some(c)
    }

    /// The univariate polynomial s ↦ p(a + s(b − a)).
    pub fn restrict_to_line(&self, a: &[C64], b: &[C64]) -> Polynomial {
        let mut lead = self.lead;
        let mut factors = Vec::new();
        for f in &self.factors {
            let at_a = f.value(a);
            let slope: C64 = f.coeffs.iter().zip(a.iter().zip(b)).map(|(c, (x, y))| c * (y - x)).sum();
            if slope.norm() <= 1e-300 {
                lead *= at_a.powu(f.mult);
            } else {
                // slope·s + at_a = slope·(s − (−at_a/slope))
                lead *= slope.powu(f.mult);
                factors.push(AffineFactor { coeffs: vec![C64::new(1.0, 0.0)], shift: -at_a / slope, mult: f.mult });
            }
        }
        Polynomial { dim: 1, lead, factors }
    }
}

/// The analytic form of a catalog function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kind {
    /// log ‖z − z₀‖ (Euclidean norm).
    LogNorm {
        z0: Vec<C64>,
    },
    /// log |p(z)|.
    LogPoly(Polynomial),
    /// max_j log(1 + |z_j|).
    LelongMax,
    /// −√((log|z| + log|w|)·log|w|) on the bidisc.
    Counterexample,
    /// Σ c_{jk} z_j z̄_k with c Hermitian positive semidefinite.
    Quadratic {
        c: Vec<Vec<C64>>,
    },
    /// m·log|z_coord|.
    MLog {
        m: f64,
        coord: usize,
    },
    /// max over coordinates with w_j > 0 of w_j·log|z_j|.
    MaxLog {
        weights: Vec<f64>,
    },
    Constant {
        value: f64,
    },
    /// Σ_j Σ_k c_{jk} |z_j|^{2(k+1)} with c_{jk} ≥ 0.
    RadialPoly {
        coeffs: Vec<Vec<f64>>,
    },
    /// Σ w_i φ_i with w_i ≥ 0.
    Sum {
        terms: Vec<(f64, PshFunction)>,
    },
    /// z ↦ φ(t₁z₁, …, tₙzₙ).
    Dilated {
        t: Vec<C64>,
        inner: Box<PshFunction>,
    },
    /// Restriction of φ to the coordinates marked `None`; the others are fixed.
    Slice {
        fixed: Vec<Option<C64>>,
        inner: Box<PshFunction>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PshFunction {
    pub name: String,
    pub dim: usize,
    pub kind: Kind,
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

impl PshFunction {
    fn build(name: &str, dim: usize, kind: Kind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be ≥ 1".into()));
        }
        Ok(Self { name: name.to_string(), dim, kind })
    }

    pub fn log_abs(z0: Vec<C64>) -> Result<Self> {
        let dim = z0.len();
        Self::build("log_abs", dim, Kind::LogNorm { z0 })
    }

    pub fn log_poly(p: Polynomial) -> Result<Self> {
        let dim = p.dim;
        Self::build("log_poly", dim, Kind::LogPoly(p))
    }

    pub fn lelong_max(dim: usize) -> Result<Self> {
        Self::build("lelong_max", dim, Kind::LelongMax)
    }

    pub fn counterexample() -> Self {
        Self { name: "counterexample".into(), dim: 2, kind: Kind::Counterexample }
    }

    pub fn quadratic(c: Vec<Vec<C64>>) -> Result<Self> {
        let n = c.len();
        if c.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidParameter("quadratic matrix must be square".into()));
        }
        let m = DMatrix::from_fn(n, n, |i, j| c[i][j]);
        let herm_err = (&m - m.adjoint()).iter().map(|x| x.norm()).fold(0.0, f64::max);
        let scale = m.iter().map(|x| x.norm()).fold(1.0, f64::max);
        if herm_err > 1e-12 * scale {
            return Err(Error::InvalidParameter("quadratic matrix must be Hermitian".into()));
        }
        // Hermitian n×n ↦ real symmetric 2n×2n [[A, −B], [B, A]] has the same spectrum (doubled).
        let real = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            let x = m[(i % n, j % n)];
            match (i < n, j < n) {
                (true, true) | (false, false) => x.re,
                (true, false) => -x.im,
                (false, true) => x.im,
            }
        });
        let min_eig = SymmetricEigen::new(real).eigenvalues.min();
        if min_eig < -1e-12 * scale {
            return Err(Error::InvalidParameter(format!("quadratic matrix is not positive semidefinite (min eigenvalue {min_eig:e})")));
        }
        Self::build("quadratic", n, Kind::Quadratic { c })
    }

    pub fn diagonal_quadratic(d: &[f64]) -> Result<Self> {
        let n = d.len();
        Self::quadratic((0..n).map(|i| (0..n).map(|j| if i == j { C64::new(d[i], 0.0) } else { zero() }).collect()).collect())
    }

    pub fn m_log(m: f64, coord: usize, dim: usize) -> Result<Self> {
        if coord >= dim {
            return Err(Error::InvalidParameter(format!("coordinate {coord} out of range for dim {dim}")));
        }
        if !(m.is_finite() && m >= 0.0) {
            return Err(Error::InvalidParameter("m must be a non-negative real".into()));
        }
        Self::build("m_log", dim, Kind::MLog { m, coord })
    }

    pub fn max_log(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) || weights.iter().all(|w| *w == 0.0) {
            return Err(Error::InvalidParameter("max_log weights must be ≥ 0, not all zero".into()));
        }
        let dim = weights.len();
        Self::build("max_log", dim, Kind::MaxLog { weights })
    }

    pub fn constant(value: f64, dim: usize) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter("constant must be finite".into()));
        }
        Self::build("constant", dim, Kind::Constant { value })
    }

    pub fn radial_poly(coeffs: Vec<Vec<f64>>) -> Result<Self> {
        if coeffs.iter().flatten().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::InvalidParameter("radial_poly coefficients must be ≥ 0".into()));
        }
        let dim = coeffs.len();
        Self::build("radial_poly", dim, Kind::RadialPoly { coeffs })
    }

    pub fn sum(terms: Vec<(f64, PshFunction)>) -> Result<Self> {
        let dim = terms.first().map(|t| t.1.dim).unwrap_or(0);
        if terms.iter().any(|(w, f)| f.dim != dim || !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidParameter("sum terms need equal dims and weights ≥ 0".into()));
        }
        Self::build("sum", dim, Kind::Sum { terms })
    }

    /// z ↦ φ(t ∘ z).
    pub fn pullback(&self, t: &[C64]) -> Result<Self> {
        if t.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: t.len() });
        }
        Self::build(&self.name, self.dim, Kind::Dilated { t: t.to_vec(), inner: Box::new(self.clone()) })
    }

    /// Restriction to the coordinates whose entry in `fixed` is `None`.
    pub fn slice(&self, fixed: &[Option<C64>]) -> Result<Self> {
        if fixed.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: fixed.len() });
        }
        let free = fixed.iter().filter(|x| x.is_none()).count();
        Self::build(&self.name, free, Kind::Slice { fixed: fixed.to_vec(), inner: Box::new(self.clone()) })
    }

    pub fn eval(&self, z: &[C64]) -> f64 {
        debug_assert_eq!(z.len(), self.dim);
        match &self.kind {
            Kind::LogNorm { z0 } => {
                let d2: f64 = z.iter().zip(z0).map(|(a, b)| (a - b).norm_sqr()).sum();
                if d2 == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    0.5 * d2.ln()
                }
            }
            Kind::LogPoly(p) => p.log_abs(z),
            Kind::LelongMax => z.iter().map(|c| c.norm().ln_1p()).fold(f64::NEG_INFINITY, f64::max),
            Kind::Counterexample => {
                let (a, b) = (z[0].norm(), z[1].norm());
                if a == 0.0 || b == 0.0 {
                    return f64::NEG_INFINITY;
                }
                counterexample_profile(a.ln(), b.ln())
            }
            Kind::Quadratic { c } => {
                let mut s = zero();
                for (j, row) in c.iter().enumerate() {
                    for (k, cjk) in row.iter().enumerate() {
                        s += cjk * z[j] * z[k].conj();
                    }
                }
                s.re
            }
            Kind::MLog { m, coord } => {
                if *m == 0.0 {
                    0.0
                } else {
                    let r = z[*coord].norm();
                    if r == 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        m * r.ln()
                    }
                }
            }
            Kind::MaxLog { weights } => weights
                .iter()
                .zip(z)
                .filter(|(w, _)| **w > 0.0)
                .map(|(w, c)| {
                    let r = c.norm();
                    if r == 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        w * r.ln()
                    }
                })
                .fold(f64::NEG_INFINITY, f64::max),
            Kind::Constant { value } => *value,
            Kind::RadialPoly { coeffs } => coeffs
                .iter()
                .zip(z)
                .map(|(cs, zj)| {
                    let s = zj.norm_sqr();
                    cs.iter().rev().fold(0.0, |acc, c| (acc + c) * s)
                })
                .sum(),
            Kind::Sum { terms } => {
                let mut s = 0.0;
                for (w, f) in terms {
                    if *w == 0.0 {
                        continue;
                    }
                    let v = f.eval(z);
                    if v == f64::NEG_INFINITY {
                        return v;
                    }
                    s += w * v;
                }
                s
            }
            Kind::Dilated { t, inner } => {
                let w: Vec<C64> = z.iter().zip(t).map(|(a, b)| a * b).collect();
                inner.eval(&w)
            }
            Kind::Slice { fixed, inner } => {
                let mut it = z.iter();
                let w: Vec<C64> = fixed.iter().map(|f| f.unwrap_or_else(|| *it.next().unwrap())).collect();
                inner.eval(&w)
            }
        }
    }

    /// Whether the value depends on coordinate j at all.
    pub fn depends_on(&self, j: usize) -> bool {
        match &self.kind {
            Kind::Constant { .. } => false,
            Kind::MLog { m, coord } => *m != 0.0 && *coord == j,
            Kind::MaxLog { weights } => weights[j] > 0.0,
            Kind::LogPoly(p) => p.factors.iter().any(|f| f.coeffs[j].norm() > 0.0),
            Kind::Quadratic { c } => c[j].iter().any(|x| x.norm() > 0.0) || c.iter().any(|row| row[j].norm() > 0.0),
            Kind::RadialPoly { coeffs } => coeffs[j].iter().any(|c| *c > 0.0),
            Kind::Sum { terms } => terms.iter().any(|(w, f)| *w > 0.0 && f.depends_on(j)),
            Kind::Dilated { t, inner } => t[j].norm() > 0.0 && inner.depends_on(j),
            Kind::Slice { fixed, inner } => inner.depends_on(free_index(fixed, j)),
            _ => true,
        }
    }

    /// Whether the value depends on z_j only through |z_j − c|.
    pub fn radial_in(&self, j: usize, c: C64) -> bool {
        if !self.depends_on(j) {
            return true;
        }
        match &self.kind {
            Kind::LogNorm { z0 } => z0[j] == c,
            Kind::LogPoly(p) => {
                // every factor involving z_j must be a pure function of z_j vanishing at c
                p.factors
                    .iter()
                    .filter(|f| f.coeffs[j].norm() > 0.0)
                    .all(|f| f.coeffs.iter().enumerate().all(|(k, ck)| k == j || ck.norm() == 0.0) && f.shift / f.coeffs[j] == c)
            }
            Kind::Quadratic { c: m } => c == zero() && (0..self.dim).all(|k| k == j || (m[j][k].norm() == 0.0 && m[k][j].norm() == 0.0)),
            Kind::Sum { terms } => terms.iter().all(|(w, f)| *w == 0.0 || f.radial_in(j, c)),
            Kind::Dilated { t, inner } => inner.radial_in(j, c * t[j]),
            Kind::Slice { fixed, inner } => inner.radial_in(free_index(fixed, j), c),
            _ => c == zero(),
        }
    }

    /// φ(z) depends only on (|z₁|, …, |zₙ|).
    pub fn is_multicircular(&self) -> bool {
        (0..self.dim).all(|j| self.radial_in(j, zero()))
    }

    /// Points in the z_j-plane where φ may be singular, used to grade
    /// quadrature nodes. Singular sets not aligned with coordinates yield none.
    pub fn singular_hints(&self, j: usize) -> Vec<C64> {
        if !self.depends_on(j) {
            return Vec::new();
        }
        match &self.kind {
            Kind::LogNorm { z0 } => vec![z0[j]],
            Kind::LogPoly(p) => p
                .factors
                .iter()
                .filter(|f| f.coeffs[j].norm() > 0.0 && f.coeffs.iter().enumerate().all(|(k, c)| k == j || c.norm() == 0.0))
                .map(|f| f.shift / f.coeffs[j])
                .collect(),
            Kind::Counterexample | Kind::MLog { .. } | Kind::MaxLog { .. } => vec![zero()],
            Kind::Sum { terms } => {
                let mut out: Vec<C64> = Vec::new();
                for (_, f) in terms {
                    for h in f.singular_hints(j) {
                        if !out.contains(&h) {
                            out.push(h);
                        }
                    }
                }
                out
            }
            Kind::Dilated { t, inner } => inner.singular_hints(j).into_iter().map(|h| h / t[j]).collect(),
            Kind::Slice { fixed, inner } => inner.singular_hints(free_index(fixed, j)),
            _ => Vec::new(),
        }
    }

    /// Largest admissible modulus per coordinate, if the domain is bounded.
    pub fn domain_bound(&self) -> Option<f64> {
        match &self.kind {
            Kind::Counterexample => Some(COUNTEREXAMPLE_DOMAIN),
            Kind::Sum { terms } => terms.iter().filter_map(|(_, f)| f.domain_bound()).reduce(f64::min),
            Kind::Dilated { t, inner } => inner.domain_bound().map(|b| {
                let m = t.iter().map(|x| x.norm()).fold(0.0, f64::max);
                if m == 0.0 {
                    f64::INFINITY
                } else {
                    b / m
                }
            }),
            Kind::Slice { inner, .. } => inner.domain_bound(),
            _ => None,
        }
    }

    /// Whether the closed polydisc with this centre and polyradius lies in the domain.
    pub fn polydisc_in_domain(&self, center: &[C64], radii: &[f64]) -> bool {
        match self.domain_bound() {
            None => true,
            Some(b) => center.iter().zip(radii).all(|(c, r)| c.norm() + r < b),
        }
    }

    /// Exact supremum over the closed polydisc, when the entry has one.
    pub fn closed_sup(&self, center: &[C64], radii: &[f64]) -> Option<f64> {
        match &self.kind {
            Kind::LogNorm { z0 } => {
                let s: f64 = center.iter().zip(z0).zip(radii).map(|((c, z), r)| ((c - z).norm() + r).powi(2)).sum();
                Some(0.5 * s.ln())
            }
            Kind::LogPoly(p) if p.dim == 1 && p.factors.iter().filter(|f| !f.is_constant()).count() <= 1 => {
                let mut s = p.lead.norm().ln();
                for f in &p.factors {
                    if f.is_constant() {
                        s += f.mult as f64 * f.shift.norm().ln();
                    } else {
                        let root = f.shift / f.coeffs[0];
                        s += f.mult as f64 * (f.coeffs[0].norm() * ((center[0] - root).norm() + radii[0])).ln();
                    }
                }
                Some(s)
            }
            _ if self.is_modulus_monotone() => {
                let corner: Vec<C64> = center.iter().zip(radii).map(|(c, r)| C64::new(c.norm() + r, 0.0)).collect();
                Some(self.eval(&corner))
            }
            _ => None,
        }
    }

    /// Multicircular and non-decreasing in every modulus.
    fn is_modulus_monotone(&self) -> bool {
        match &self.kind {
            Kind::LelongMax
            | Kind::Counterexample
            | Kind::MLog { .. }
            | Kind::MaxLog { .. }
            | Kind::Constant { .. }
            | Kind::RadialPoly { .. } => true,
            Kind::LogNorm { z0 } => z0.iter().all(|c| c.norm() == 0.0),
            Kind::LogPoly(_) => self.is_multicircular(),
            Kind::Quadratic { .. } => self.is_multicircular(),
            Kind::Sum { terms } => terms.iter().all(|(w, f)| *w == 0.0 || f.is_modulus_monotone()),
            Kind::Dilated { inner, .. } => inner.is_modulus_monotone(),
            Kind::Slice { fixed, inner } => fixed.iter().all(|f| f.is_none_or(|c| c.norm() == 0.0)) && inner.is_modulus_monotone(),
        }
    }

    /// Complex Hessian (∂²φ/∂z_j∂z̄_k) at z, for the smooth entries.
    pub fn hessian_at(&self, z: &[C64]) -> Option<DMatrix<C64>> {
        let n = self.dim;
        match &self.kind {
            Kind::Quadratic { c } => Some(DMatrix::from_fn(n, n, |j, k| c[j][k])),
            Kind::Constant { .. } => Some(DMatrix::zeros(n, n)),
            Kind::RadialPoly { coeffs } => Some(DMatrix::from_fn(n, n, |j, k| {
                if j != k {
                    return zero();
                }
                // ∂∂̄ |z|^{2m} = m² |z|^{2m−2}
                let s = z[j].norm_sqr();
                let v: f64 = coeffs[j]
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let m = (i + 1) as f64;
                        c * m * m * s.powi(i as i32)
                    })
                    .sum();
                C64::new(v, 0.0)
            })),
            Kind::Sum { terms } => {
                let mut h = DMatrix::zeros(n, n);
                for (w, f) in terms {
                    h += f.hessian_at(z)? * C64::new(*w, 0.0);
                }
                Some(h)
            }
            Kind::Dilated { t, inner } => {
                let w: Vec<C64> = z.iter().zip(t).map(|(a, b)| a * b).collect();
                let h = inner.hessian_at(&w)?;
                Some(DMatrix::from_fn(n, n, |j, k| h[(j, k)] * t[j] * t[k].conj()))
            }
            Kind::Slice { fixed, inner } => {
                let mut it = z.iter();
                let w: Vec<C64> = fixed.iter().map(|f| f.unwrap_or_else(|| *it.next().unwrap())).collect();
                let h = inner.hessian_at(&w)?;
                let free: Vec<usize> = (0..fixed.len()).filter(|&i| fixed[i].is_none()).collect();
                Some(DMatrix::from_fn(n, n, |j, k| h[(free[j], free[k])]))
            }
            _ => None,
        }
    }

    /// c with φ(z) ≤ c + max_j log(1 + |z_j|), when φ is in the Lelong class.
    pub fn lelong_class_constant(&self) -> Option<f64> {
        match &self.kind {
            Kind::LelongMax => Some(0.0),
            Kind::Constant { value } => Some(*value),
            // ‖z − z₀‖ ≤ √n·max|z_j| + ‖z₀‖ ≤ √n (1 + ‖z₀‖)(1 + max|z_j|)
            Kind::LogNorm { z0 } => {
                let norm = z0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                Some(0.5 * (self.dim as f64).ln() + norm.ln_1p())
            }
            Kind::LogPoly(p) if p.degree() == 1 => {
                let f = p.factors.iter().find(|f| !f.is_constant())?;
                let mut c = p.lead.norm().ln();
                for g in p.factors.iter().filter(|g| g.is_constant()) {
                    c += g.mult as f64 * g.shift.norm().ln();
                }
                let l1: f64 = f.coeffs.iter().map(|x| x.norm()).sum();
                Some(c + l1.ln() + (f.shift.norm() / l1).ln_1p())
            }
            Kind::MLog { m, .. } if *m <= 1.0 => Some(0.0),
            Kind::Slice { fixed, inner } => {
                // the fixed coordinates only enter through the bound on their moduli
                let c = inner.lelong_class_constant()?;
                let extra = fixed.iter().flatten().map(|x| x.norm().ln_1p()).fold(0.0, f64::max);
                Some(c + extra)
            }
            _ => None,
        }
    }

    pub fn degree(&self) -> Option<u32> {
        match &self.kind {
            Kind::LogPoly(p) => Some(p.degree()),
            _ => None,
        }
    }

    pub fn is_smooth(&self) -> bool {
        self.hessian_at(&vec![zero(); self.dim]).is_some()
    }
}

/// f(x, y) = −√((x + y)·y) for x, y ≤ 0.
pub fn counterexample_profile(x: f64, y: f64) -> f64 {
    -((x + y) * y).max(0.0).sqrt()
}

fn free_index(fixed: &[Option<C64>], j: usize) -> usize {
    fixed.iter().enumerate().filter(|(_, f)| f.is_none()).nth(j).map(|(i, _)| i).expect("free coordinate index in range")
}

pub const CATALOG_NAMES: &[&str] =
    &["log_abs", "log_poly", "lelong_max", "counterexample", "quadratic", "m_log", "max_log", "constant", "radial_poly"];

fn param<'a>(params: &'a BTreeMap<String, String>, key: &str) -> Option<&'a str> {
    params.get(key).map(String::as_str)
}

fn dim_param(params: &BTreeMap<String, String>, default: usize) -> Result<usize> {
    match param(params, "dim") {
        None => Ok(default),
        Some(s) => s.trim().parse::<usize>().ok().filter(|d| *d >= 1).ok_or_else(|| Error::InvalidParameter(format!("bad dim `{s}`"))),
    }
}

fn check_keys(params: &BTreeMap<String, String>, allowed: &[&str]) -> Result<()> {
    for k in params.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::InvalidParameter(format!("unknown parameter `{k}` (allowed: {})", allowed.join(", "))));
        }
    }
    Ok(())
}

/// Look up a catalog entry by name.
///
/// | name | parameters |
/// |---|---|
/// | `log_abs` | `dim` (1), `z0` (origin) |
/// | `log_poly` | `roots`, `mult` (all 1), `lead` (1) |
/// | `lelong_max` | `dim` (1) |
/// | `counterexample` | none |
/// | `quadratic` | `c` (rows separated by `\|`, entries by `;`) or `diag` |
/// | `m_log` | `m` (1), `coord` (1-based, 1), `dim` (1) |
/// | `max_log` | `w` (weights) |
/// | `constant` | `value` (0), `dim` (1) |
/// | `radial_poly` | `c` (rows per coordinate, coefficients of \|z\|², \|z\|⁴, …) |
pub fn catalog_lookup(name: &str, params: &BTreeMap<String, String>) -> Result<PshFunction> {
    match name {
        "log_abs" => {
            check_keys(params, &["dim", "z0"])?;
            let dim = dim_param(params, 1)?;
            let z0 = match param(params, "z0") {
                Some(s) => parse_complex_list(s)?,
                None => vec![zero(); dim],
            };
            if z0.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: z0.len() });
            }
            PshFunction::log_abs(z0)
        }
        "log_poly" => {
            check_keys(params, &["roots", "mult", "lead"])?;
            let roots = parse_complex_list(param(params, "roots").ok_or_else(|| Error::InvalidParameter("log_poly needs roots=".into()))?)?;
            let mult: Vec<u32> = match param(params, "mult") {
                None => vec![1; roots.len()],
                Some(s) => parse_real_list(s)?
                    .into_iter()
                    .map(|m| {
                        if m >= 1.0 && m.fract() == 0.0 {
                            Ok(m as u32)
                        } else {
                            Err(Error::InvalidParameter(format!("bad multiplicity {m}")))
                        }
                    })
                    .collect::<Result<_>>()?,
            };
            if mult.len() != roots.len() {
                return Err(Error::InvalidParameter("mult and roots lengths differ".into()));
            }
            let lead = param(params, "lead").map(parse_complex).transpose()?.unwrap_or(C64::new(1.0, 0.0));
            let pairs: Vec<(C64, u32)> = roots.into_iter().zip(mult).collect();
            PshFunction::log_poly(Polynomial::from_roots(lead, &pairs)?)
        }
        "lelong_max" => {
            check_keys(params, &["dim"])?;
            PshFunction::lelong_max(dim_param(params, 1)?)
        }
        "counterexample" => {
            check_keys(params, &[])?;
            Ok(PshFunction::counterexample())
        }
        "quadratic" => {
            check_keys(params, &["c", "diag"])?;
            match (param(params, "c"), param(params, "diag")) {
                (Some(c), None) => {
                    let rows = c.split('|').map(parse_complex_list).collect::<Result<Vec<_>>>()?;
                    PshFunction::quadratic(rows)
                }
                (None, Some(d)) => PshFunction::diagonal_quadratic(&parse_real_list(d)?),
                _ => Err(Error::InvalidParameter("quadratic needs exactly one of c= or diag=".into())),
            }
        }
        "m_log" => {
            check_keys(params, &["m", "coord", "dim"])?;
            let dim = dim_param(params, 1)?;
            let m = param(params, "m").map(parse_real).transpose()?.unwrap_or(1.0);
            let coord = param(params, "coord").map(parse_real).transpose()?.unwrap_or(1.0);
            if coord < 1.0 || coord.fract() != 0.0 {
                return Err(Error::InvalidParameter("coord is a 1-based integer".into()));
            }
            PshFunction::m_log(m, coord as usize - 1, dim)
        }
        "max_log" => {
            check_keys(params, &["w"])?;
            let w = parse_real_list(param(params, "w").ok_or_else(|| Error::InvalidParameter("max_log needs w=".into()))?)?;
            PshFunction::max_log(w)
        }
        "constant" => {
            check_keys(params, &["value", "dim"])?;
            let v = param(params, "value").map(parse_real).transpose()?.unwrap_or(0.0);
            PshFunction::constant(v, dim_param(params, 1)?)
        }
        "radial_poly" => {
            check_keys(params, &["c"])?;
            let c = param(params, "c").ok_or_else(|| Error::InvalidParameter("radial_poly needs c=".into()))?;
            let rows = c.split('|').map(parse_real_list).collect::<Result<Vec<_>>>()?;
            PshFunction::radial_poly(rows)
        }
        other => Err(Error::UnknownFunction(other.to_string())),
    }
}
