//! Points and regions in ℂⁿ.
//!
//! Regions are treated as closed sets when computing suprema and as open sets
//! for membership in measure computations; the boundary is Lebesgue-null, so
//! integrals do not see the difference.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance tolerance for segment membership.
pub const SEGMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<C64>", into = "Vec<C64>")]
pub struct ComplexVector(Vec<C64>);

impl ComplexVector {
    pub fn new(components: Vec<C64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("vector must have dimension ≥ 1".into()));
        }
        if components.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidParameter("vector components must be finite".into()));
        }
        Ok(Self(components))
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        Self(vec![C64::new(0.0, 0.0); n])
    }

    pub fn from_reals(re: &[f64]) -> Result<Self> {
        Self::new(re.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Real coordinates (Re z₁, Im z₁, …, Re zₙ, Im zₙ).
    pub fn to_real(&self) -> Vec<f64> {
        self.0.iter().flat_map(|c| [c.re, c.im]).collect()
    }

    pub fn from_real(x: &[f64]) -> Result<Self> {
        if x.len() % 2 != 0 {
            return Err(Error::InvalidParameter("real coordinate list must have even length".into()));
        }
        Self::new(x.chunks(2).map(|p| C64::new(p[0], p[1])).collect())
    }
}

impl TryFrom<Vec<C64>> for ComplexVector {
    type Error = Error;
    fn try_from(v: Vec<C64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ComplexVector> for Vec<C64> {
    fn from(v: ComplexVector) -> Self {
        v.0
    }
}

impl std::ops::Index<usize> for ComplexVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// P = {|z_j − ẑ_j| < r_j}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polydisc {
    pub center: ComplexVector,
    pub radii: Vec<f64>,
}

impl Polydisc {
    pub fn new(center: ComplexVector, radii: Vec<f64>) -> Result<Self> {
        check_dim(center.dim(), radii.len())?;
        if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::InvalidParameter("polyradius entries must be positive and finite".into()));
        }
        Ok(Self { center, radii })
    }

    pub fn disc(center: C64, radius: f64) -> Result<Self> {
        Self::new(ComplexVector::new(vec![center])?, vec![radius])
    }

    /// Polydisc centred at the origin.
    pub fn centered(radii: Vec<f64>) -> Result<Self> {
        Self::new(ComplexVector::zeros(radii.len().max(1)), radii)
    }

    pub fn unit(n: usize) -> Self {
        Self::centered(vec![1.0; n]).expect("unit polydisc is valid")
    }

    pub fn dim(&self) -> usize {
        self.radii.len()
    }

    pub fn volume(&self) -> f64 {
        self.radii.iter().map(|r| std::f64::consts::PI * r * r).product()
    }

    /// Same centre, polyradius multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.center.clone(), self.radii.iter().map(|r| r * s).collect())
    }

    /// Same centre, radii e^{t_j} r_j.
    pub fn log_shifted(&self, t: &[f64]) -> Result<Self> {
        check_dim(self.dim(), t.len())?;
        Self::new(self.center.clone(), self.radii.iter().zip(t).map(|(r, tj)| r * tj.exp()).collect())
    }

    pub fn is_centered_at_origin(&self) -> bool {
        self.center.as_slice().iter().all(|c| c.norm() == 0.0)
    }

    pub fn contains(&self, z: &ComplexVector) -> Result<bool> {
        check_dim(self.dim(), z.dim())?;
        Ok(self.center.as_slice().iter().zip(&self.radii).zip(z.as_slice()).all(|((c, r), zj)| (zj - c).norm() < *r))
    }
}

/// P_{r^a}(ẑ) = {|z_j − ẑ_j| ≤ r^{a_j}}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnisotropicBox {
    pub center: ComplexVector,
    pub scale: f64,
    pub exponents: Vec<f64>,
}

impl AnisotropicBox {
    pub fn new(center: ComplexVector, scale: f64, exponents: Vec<f64>) -> Result<Self> {
        check_dim(center.dim(), exponents.len())?;
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter("box scale r must be positive".into()));
        }
        if exponents.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::InvalidParameter("box exponents must be positive".into()));
        }
        Ok(Self { center, scale, exponents })
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.exponents.iter().map(|a| self.scale.powf(*a)).collect()
    }

    pub fn as_polydisc(&self) -> Polydisc {
        Polydisc::new(self.center.clone(), self.radii()).expect("box radii are positive")
    }

    pub fn volume(&self) -> f64 {
        self.as_polydisc().volume()
    }

    pub fn contains(&self, z: &ComplexVector) -> Result<bool> {
        check_dim(self.dim(), z.dim())?;
        Ok(self.center.as_slice().iter().zip(self.radii()).zip(z.as_slice()).all(|((c, r), zj)| (zj - c).norm() <= r))
    }
}

/// Closed segment [a, b] in ℂⁿ; for n = 1 this is a segment in the plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: ComplexVector,
    pub b: ComplexVector,
}

impl Segment {
    pub fn new(a: ComplexVector, b: ComplexVector) -> Result<Self> {
        check_dim(a.dim(), b.dim())?;
        if a == b {
            return Err(Error::InvalidParameter("segment endpoints must differ".into()));
        }
        Ok(Self { a, b })
    }

    pub fn planar(a: C64, b: C64) -> Result<Self> {
        Self::new(ComplexVector::new(vec![a])?, ComplexVector::new(vec![b])?)
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// a(1 − t) + bt.
    pub fn point(&self, t: f64) -> Vec<C64> {
        self.a.as_slice().iter().zip(self.b.as_slice()).map(|(a, b)| a * (1.0 - t) + b * t).collect()
    }

    pub fn length(&self) -> f64 {
        self.a.as_slice().iter().zip(self.b.as_slice()).map(|(a, b)| (b - a).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn contains(&self, z: &ComplexVector) -> Result<bool> {
        check_dim(self.dim(), z.dim())?;
        let a = self.a.to_real();
        let d: Vec<f64> = self.b.to_real().iter().zip(&a).map(|(b, a)| b - a).collect();
        let w: Vec<f64> = z.to_real().iter().zip(&a).map(|(z, a)| z - a).collect();
        let dd: f64 = d.iter().map(|x| x * x).sum();
        let t = (d.iter().zip(&w).map(|(d, w)| d * w).sum::<f64>() / dd).clamp(0.0, 1.0);
        let dist = d.iter().zip(&w).map(|(d, w)| (w - t * d).powi(2)).sum::<f64>().sqrt();
        Ok(dist <= SEGMENT_TOL)
    }
}

/// Half-space {x : ⟨normal, x⟩ ≤ offset} in affine-hull coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// Convex hull of finitely many points of ℝ^{2n} ≅ ℂⁿ.
///
/// The hull is described inside its own affine hull: `origin + basis·y` with
/// an orthonormal `basis`, and the facets are inequalities in `y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolytope {
    vertices: Vec<Vec<f64>>,
    origin: Vec<f64>,
    basis: Vec<Vec<f64>>,
    facets: Vec<Facet>,
    scale: f64,
}

impl ConvexPolytope {
    /// `vertices` are real points of even dimension 2n.
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidParameter("polytope needs at least 2 vertices".into()));
        }
        let d = vertices[0].len();
        if d == 0 || d % 2 != 0 {
            return Err(Error::InvalidParameter("vertex dimension must be 2n with n ≥ 1".into()));
        }
        for v in &vertices {
            check_dim(d, v.len())?;
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidParameter("vertices must be finite".into()));
            }
        }
        let origin = vertices[0].clone();
        let scale = vertices.iter().map(|v| dist(v, &origin)).fold(0.0_f64, f64::max);
        if scale == 0.0 {
            return Err(Error::DegeneratePolytope("all vertices coincide".into()));
        }
        let basis = affine_basis(&vertices, &origin, scale);
        let local: Vec<Vec<f64>> = vertices.iter().map(|v| project(v, &origin, &basis)).collect();
        let facets = hull_facets(&local, scale);
        Ok(Self { vertices, origin, basis, facets, scale })
    }

    /// Convenience constructor for n = 1 from complex vertices.
    pub fn planar(vertices: &[C64]) -> Result<Self> {
        Self::new(vertices.iter().map(|c| vec![c.re, c.im]).collect())
    }

    /// Axis-aligned box [lo_1, hi_1] × … in ℝ^{2n}.
    pub fn cuboid(lo: &[f64], hi: &[f64]) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        let d = lo.len();
        let vertices = (0..1usize << d).map(|mask| (0..d).map(|k| if mask >> k & 1 == 1 { hi[k] } else { lo[k] }).collect()).collect();
        Self::new(vertices)
    }

    pub fn dim(&self) -> usize {
        self.origin.len() / 2
    }

    pub fn real_dim(&self) -> usize {
        self.origin.len()
    }

    /// Dimension of the affine hull.
    pub fn hull_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.hull_dim() == self.real_dim()
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn centroid(&self) -> Vec<f64> {
        let k = self.vertices.len() as f64;
        (0..self.real_dim()).map(|i| self.vertices.iter().map(|v| v[i]).sum::<f64>() / k).collect()
    }

    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let d = self.real_dim();
        let lo = (0..d).map(|i| self.vertices.iter().map(|v| v[i]).fold(f64::INFINITY, f64::min)).collect();
        let hi = (0..d).map(|i| self.vertices.iter().map(|v| v[i]).fold(f64::NEG_INFINITY, f64::max)).collect();
        (lo, hi)
    }

    /// Membership of a real point, with a relative slack `tol`.
    pub fn contains_real(&self, x: &[f64], tol: f64) -> bool {
        let y = project(x, &self.origin, &self.basis);
        if !self.is_full_dimensional() {
            let back: Vec<f64> =
                (0..x.len()).map(|i| self.origin[i] + self.basis.iter().zip(&y).map(|(b, yk)| b[i] * yk).sum::<f64>()).collect();
            if dist(&back, x) > tol.max(1e-12) * self.scale.max(1.0) {
                return false;
            }
        }
        self.facets.iter().all(|f| dot(&f.normal, &y) <= f.offset + tol * self.scale.max(1.0))
    }

    pub fn contains(&self, z: &ComplexVector) -> Result<bool> {
        check_dim(self.real_dim(), 2 * z.dim())?;
        Ok(self.contains_real(&z.to_real(), 1e-12))
    }

    /// Largest s ≥ 0 with x + s·u inside the hull (x assumed inside).
    pub fn ray_exit(&self, x: &[f64], u: &[f64]) -> f64 {
        let y = project(x, &self.origin, &self.basis);
        let du: Vec<f64> = self.basis.iter().map(|b| dot(b, u)).collect();
        let mut s = f64::INFINITY;
        for f in &self.facets {
            let rate = dot(&f.normal, &du);
            if rate > 1e-300 {
                let slack = (f.offset - dot(&f.normal, &y)).max(0.0);
                s = s.min(slack / rate);
            }
        }
        s
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn project(x: &[f64], origin: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let w: Vec<f64> = x.iter().zip(origin).map(|(a, b)| a - b).collect();
    basis.iter().map(|b| dot(b, &w)).collect()
}

/// Orthonormal basis of span{v − origin} by modified Gram–Schmidt with pivoting.
fn affine_basis(vertices: &[Vec<f64>], origin: &[f64], scale: f64) -> Vec<Vec<f64>> {
    let mut rest: Vec<Vec<f64>> = vertices.iter().map(|v| v.iter().zip(origin).map(|(a, b)| a - b).collect()).collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    loop {
        let (idx, norm) =
            rest.iter().enumerate().map(|(i, v)| (i, dot(v, v).sqrt())).fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if norm <= 1e-10 * scale {
            break;
        }
        let q: Vec<f64> = rest[idx].iter().map(|x| x / norm).collect();
        for v in rest.iter_mut() {
            let c = dot(v, &q);
            for (vi, qi) in v.iter_mut().zip(&q) {
                *vi -= c * qi;
            }
        }
        basis.push(q);
        if basis.len() == origin.len() {
            break;
        }
    }
    basis
}

/// Facets of the hull of full-dimensional points in ℝ^k, by enumerating
/// k-subsets. Intended for the small vertex counts used here.
fn hull_facets(points: &[Vec<f64>], scale: f64) -> Vec<Facet> {
    let k = points.first().map_or(0, |p| p.len());
    if k == 1 {
        let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        return vec![Facet { normal: vec![1.0], offset: hi }, Facet { normal: vec![-1.0], offset: -lo }];
    }
    let tol = 1e-10 * scale;
    let mut facets: Vec<Facet> = Vec::new();
    let mut combo: Vec<usize> = (0..k).collect();
    let m = points.len();
    if m < k {
        return facets;
    }
    loop {
        if let Some(normal) = hyperplane_normal(points, &combo, scale) {
            let offset = dot(&normal, &points[combo[0]]);
            let side: Vec<f64> = points.iter().map(|p| dot(&normal, p) - offset).collect();
            let max = side.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let min = side.iter().cloned().fold(f64::INFINITY, f64::min);
            let candidate = if max <= tol {
                Some(Facet { normal, offset })
            } else if min >= -tol {
                Some(Facet { normal: normal.iter().map(|x| -x).collect(), offset: -offset })
            } else {
                None
            };
            if let Some(f) = candidate {
                let dup = facets.iter().any(|g| dist(&g.normal, &f.normal) < 1e-9 && (g.offset - f.offset).abs() < tol);
                if !dup {
                    facets.push(f);
                }
            }
        }
        // next k-combination of 0..m
        let mut i = k;
        loop {
            if i == 0 {
                return facets;
            }
            i -= 1;
            if combo[i] < m - k + i {
                combo[i] += 1;
                for j in i + 1..k {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn hyperplane_normal(points: &[Vec<f64>], combo: &[usize], scale: f64) -> Option<Vec<f64>> {
    let k = combo.len();
    let p0 = &points[combo[0]];
    let m = DMatrix::from_fn(k - 1, k, |r, c| points[combo[r + 1]][c] - p0[c]);
    let gram = m.transpose() * &m;
    let eig = SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    // rank k − 1 required: second-smallest eigenvalue bounded away from 0
    if k >= 2 && eig.eigenvalues[order[1]] <= 1e-18 * scale * scale {
        return None;
    }
    let v: DVector<f64> = eig.eigenvectors.column(order[0]).into_owned();
    let n = v.norm();
    Some(v.iter().map(|x| x / n).collect())
}

/// Tagged union of the regions the library integrates over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Disc { center: C64, radius: f64 },
    Polydisc(Polydisc),
    AnisotropicBox(AnisotropicBox),
    Segment(Segment),
    ConvexPolytope(ConvexPolytope),
}

impl Region {
    pub fn dim(&self) -> usize {
        match self {
            Region::Disc { .. } => 1,
            Region::Polydisc(p) => p.dim(),
            Region::AnisotropicBox(b) => b.dim(),
            Region::Segment(s) => s.dim(),
            Region::ConvexPolytope(a) => a.dim(),
        }
    }

    /// Disc and box regions viewed as polydiscs.
    pub fn as_polydisc(&self) -> Option<Polydisc> {
        match self {
            Region::Disc { center, radius } => Polydisc::disc(*center, *radius).ok(),
            Region::Polydisc(p) => Some(p.clone()),
            Region::AnisotropicBox(b) => Some(b.as_polydisc()),
            _ => None,
        }
    }
}

pub fn region_membership(s: &Region, z: &ComplexVector) -> Result<bool> {
    match s {
        Region::Disc { center, radius } => {
            check_dim(1, z.dim())?;
            Ok((z[0] - center).norm() < *radius)
        }
        Region::Polydisc(p) => p.contains(z),
        Region::AnisotropicBox(b) => b.contains(z),
        Region::Segment(seg) => seg.contains(z),
        Region::ConvexPolytope(a) => a.contains(z),
    }
}

/// max r_j ≤ min r_j^{1/N}.
pub fn finite_type_check(p: &Polydisc, n_type: f64) -> bool {
    let max = p.radii.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = p.radii.iter().map(|r| r.powf(1.0 / n_type)).fold(f64::INFINITY, f64::min);
    max <= min
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn vector_rejects_empty_and_nan() {
        assert!(ComplexVector::new(vec![]).is_err());
        assert!(ComplexVector::new(vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn polydisc_membership() {
        let p = Polydisc::unit(2);
        let z = ComplexVector::from_reals(&[0.5, 0.5]).unwrap();
        assert!(region_membership(&Region::Polydisc(p), &z).unwrap());
    }

    #[test]
    fn box_membership_uses_each_exponent() {
        let b = AnisotropicBox::new(ComplexVector::zeros(2), 0.01, vec![1.0, 2.0]).unwrap();
        let inside = ComplexVector::from_reals(&[0.005, 0.00005]).unwrap();
        let outside = ComplexVector::from_reals(&[0.005, 0.0002]).unwrap();
        assert!(b.contains(&inside).unwrap());
        assert!(!b.contains(&outside).unwrap());
    }

    #[test]
    fn segment_membership() {
        let s = Segment::planar(c(-1.0, 0.0), c(1.0, 0.0)).unwrap();
        let zero = ComplexVector::zeros(1);
        assert!(region_membership(&Region::Segment(s.clone()), &zero).unwrap());
        let off = ComplexVector::new(vec![c(0.0, 1e-9)]).unwrap();
        assert!(!s.contains(&off).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let p = Polydisc::unit(2);
        let z = ComplexVector::zeros(1);
        assert!(matches!(p.contains(&z), Err(Error::DimensionMismatch { expected: 2, found: 1 })));
    }

    #[test]
    fn finite_type_examples() {
        let p = Polydisc::centered(vec![0.1, 0.1]).unwrap();
        assert!(finite_type_check(&p, 1.0));
        let p = Polydisc::centered(vec![0.5, 0.25]).unwrap();
        assert!(finite_type_check(&p, 2.0));
        let p = Polydisc::centered(vec![0.9, 0.01]).unwrap();
        assert!(!finite_type_check(&p, 2.0));
    }

    #[test]
    fn square_has_four_facets() {
        let sq = ConvexPolytope::cuboid(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(sq.facets().len(), 4);
        assert!(sq.contains_real(&[0.99, -0.99], 0.0));
        assert!(!sq.contains_real(&[1.01, 0.0], 1e-12));
        assert!((sq.ray_exit(&[0.0, 0.0], &[1.0, 0.0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn four_cube_facets() {
        let cube = ConvexPolytope::cuboid(&[0.0; 4], &[1.0; 4]).unwrap();
        assert!(cube.is_full_dimensional());
        assert_eq!(cube.facets().len(), 8);
    }

    #[test]
    fn degenerate_polytope_lives_in_its_hull() {
        let seg = ConvexPolytope::planar(&[c(-1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(seg.hull_dim(), 1);
        assert!(!seg.is_full_dimensional());
        assert!(seg.contains_real(&[0.3, 0.0], 1e-12));
        assert!(!seg.contains_real(&[0.3, 0.1], 1e-12));
    }

    #[test]
    fn triangle_membership_matches_barycentric_test() {
        let tri = ConvexPolytope::planar(&[c(0.0, 0.0), c(2.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(tri.facets().len(), 3);
        for &(x, y) in &[(0.5, 0.2), (1.0, 0.49), (1.9, 0.0)] {
            assert!(tri.contains_real(&[x, y], 0.0));
        }
        assert!(!tri.contains_real(&[1.0, 0.51], 0.0));
    }
}
