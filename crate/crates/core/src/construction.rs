//! Synthetic construction of four mutually unbiased bases of C³.
//!
//! Starting from a point `A`, its polar line `m` and an equator `S¹ ⊂ m`
//! through a point `E`:
//!
//! 1. the poles `A′, A″` of `S¹` complete `A` to the first basis;
//! 2. an equilateral triple `E, E′, E″` is placed on `S¹`;
//! 3. `A` is completed to a regular tetrahedron `A, B, C, D` on the line
//!    `ℓ = AE`, with `B, C, D` at longitudes `λ, λ + 2π/3, λ + 4π/3`;
//! 4. each of `B, C, D` is completed by moving the same distance from `A`
//!    toward `E′` and `E″`, inside the real plane spanned by its geodesic
//!    from `A` and `S¹`.
//!
//! Every free choice is an explicit field of [`GaugeConfig`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cvec::{inner, CVec3, I};
use crate::error::{Error, Result};
use crate::projective::{
    fs_distance, gram_deviation, line_through, polar_line, real_plane, GreatCircle, ProjLine,
    ProjPoint, RealPlane,
};
use crate::GEOM_TOL;

/// Side length `arccos(−1/3)` of a regular tetrahedron inscribed in a
/// complex projective line; also the distance between any two points of
/// unbiased bases.
pub const TETRA_SIDE: f64 = 1.910_633_236_249_018_6;

const THIRD_TURN: f64 = 2.0 * PI / 3.0;

/// Placement of `E′` and `E″` on the equator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TripleOrder {
    /// `E′` at parameter `2π/3`, `E″` at `4π/3`.
    #[default]
    Ascending,
    /// `E′` at `4π/3`, `E″` at `2π/3`.
    Descending,
}

/// The free choices of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugeConfig {
    pub a: ProjPoint,
    pub e_dir: CVec3,
    pub f_dir: CVec3,
    #[serde(default)]
    pub azimuth: f64,
    #[serde(default)]
    pub labels: TripleOrder,
}

impl Default for GaugeConfig {
    fn default() -> Self {
        GaugeConfig {
            a: ProjPoint::basis(0),
            e_dir: CVec3::basis(1),
            f_dir: CVec3::basis(2),
            azimuth: 0.0,
            labels: TripleOrder::Ascending,
        }
    }
}

impl GaugeConfig {
    /// Validates orthonormality of `(a, e_dir, f_dir)` within [`GEOM_TOL`]
    /// and re-orthonormalizes `e_dir`, `f_dir` against `a`.
    pub fn new(a: ProjPoint, e_dir: CVec3, f_dir: CVec3, azimuth: f64) -> Result<Self> {
        GaugeConfig { a, e_dir, f_dir, azimuth, labels: TripleOrder::Ascending }.validated()
    }

    pub fn with_labels(mut self, labels: TripleOrder) -> Self {
        self.labels = labels;
        self
    }

    pub fn validated(self) -> Result<Self> {
        let dev = gram_deviation(&[*self.a.rep(), self.e_dir, self.f_dir]);
        if !(dev <= GEOM_TOL) || !self.azimuth.is_finite() {
            return Err(Error::NotOrthonormal(dev));
        }
        let a = *self.a.rep();
        let e_dir = self.e_dir.reject(&a).normalized()?;
        let f_dir = self.f_dir.reject(&a).reject(&e_dir).normalized()?;
        Ok(GaugeConfig { e_dir, f_dir, ..self })
    }

    /// An equivalent gauge whose `e_dir` is the canonical representative of
    /// `[e_dir]`. Rotating `e_dir` and `f_dir` by a common phase leaves the
    /// equator unchanged and is absorbed into the azimuth.
    pub fn canonical(&self) -> Self {
        let e = ProjPoint::new(self.e_dir).expect("validated gauge");
        let phase = inner(&self.e_dir, e.rep());
        let phase = phase / phase.norm();
        GaugeConfig {
            e_dir: *e.rep(),
            f_dir: self.f_dir.scale(phase),
            azimuth: self.azimuth - phase.arg(),
            ..*self
        }
    }
}

/// An orthonormal triple, kept as the given representatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Basis {
    pub label: String,
    pub vectors: [CVec3; 3],
}

impl Basis {
    pub fn new(label: impl Into<String>, vectors: [CVec3; 3]) -> Self {
        Basis { label: label.into(), vectors }
    }

    pub fn from_points(label: impl Into<String>, points: [ProjPoint; 3]) -> Self {
        Basis::new(label, points.map(|p| *p.rep()))
    }

    pub fn points(&self) -> Result<[ProjPoint; 3]> {
        let [a, b, c] = self.vectors;
        Ok([ProjPoint::new(a)?, ProjPoint::new(b)?, ProjPoint::new(c)?])
    }
}

/// Three points evenly spaced on an equator, with their lifts along the
/// circle's parametrization. The lifts have pairwise inner products `−1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilateralTriple {
    pub params: [f64; 3],
    pub lifts: [CVec3; 3],
    pub points: [ProjPoint; 3],
}

/// Intermediate objects of a construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Landmarks {
    /// Line through `A` and `E`.
    pub ell: ProjLine,
    /// Polar line of `A`.
    pub m: ProjLine,
    pub equator: GreatCircle,
    pub triple: EquilateralTriple,
    /// `A, B, C, D`.
    pub tetrahedron: [ProjPoint; 4],
    /// Real planes holding the `B`, `C` and `D` bases.
    pub planes: [RealPlane; 3],
    /// Longitudes of `B`, `C`, `D` relative to the canonical `E`.
    pub longitudes: [f64; 3],
}

/// A complete system: bases labelled `A`, `B`, `C`, `D` in that order.
#[derive(Debug, Clone, PartialEq)]
pub struct MubSystem {
    pub bases: [Basis; 4],
    pub gauge: GaugeConfig,
    pub landmarks: Landmarks,
}

/// Equator of `m` through `e` in direction `f_dir`, with its two poles.
pub fn equator_and_poles(
    m: &ProjLine,
    e: &ProjPoint,
    f_dir: &CVec3,
) -> Result<(GreatCircle, ProjPoint, ProjPoint)> {
    let circle = GreatCircle::new(*m, *e.rep(), *f_dir)?;
    let (north, south) = circle.poles();
    Ok((circle, north, south))
}

pub fn equilateral_triple(circle: &GreatCircle) -> EquilateralTriple {
    equilateral_triple_ordered(circle, TripleOrder::Ascending)
}

pub fn equilateral_triple_ordered(circle: &GreatCircle, order: TripleOrder) -> EquilateralTriple {
    let params = match order {
        TripleOrder::Ascending => [0.0, THIRD_TURN, 2.0 * THIRD_TURN],
        TripleOrder::Descending => [0.0, 2.0 * THIRD_TURN, THIRD_TURN],
    };
    let lifts = params.map(|s| circle.lift(s));
    let points = params.map(|s| circle.point(s));
    EquilateralTriple { params, lifts, points }
}

fn lift_toward(a: &CVec3, target: &CVec3, lambda: f64) -> CVec3 {
    let (s, c) = (TETRA_SIDE / 2.0).sin_cos();
    *a * c + target.scale(Complex64::from_polar(s, lambda))
}

/// `B, C, D` completing `A` to a regular tetrahedron on `ell`, at longitudes
/// `azimuth + k·2π/3` measured from the canonical representative of `e`.
pub fn tetrahedron_on_line(
    ell: &ProjLine,
    a: &ProjPoint,
    e: &ProjPoint,
    azimuth: f64,
) -> Result<[ProjPoint; 3]> {
    for p in [a, e] {
        let off = ell.offset(p.rep());
        if off > GEOM_TOL {
            return Err(Error::NotOnLine(off));
        }
    }
    let d = fs_distance(a, e);
    if PI - d > GEOM_TOL {
        return Err(Error::NotPolarPair(d));
    }
    let e_rep = e.rep().reject(a.rep()).normalized()?;
    let mut out = [*a; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = ProjPoint::new(lift_toward(a.rep(), &e_rep, azimuth + k as f64 * THIRD_TURN))?;
    }
    Ok(out)
}

/// Completes the point at longitude `lambda` over `E` to a basis by moving
/// the same distance from `A` toward each lift of the triple with the same
/// phase `e^{iλ}`. Tangents at `A` toward the three points then have
/// pairwise inner products `−1/2`.
pub fn lift_basis(
    label: impl Into<String>,
    a: &ProjPoint,
    triple: &EquilateralTriple,
    lambda: f64,
) -> Result<Basis> {
    for lift in &triple.lifts {
        let h = inner(a.rep(), lift).norm();
        if h > GEOM_TOL {
            return Err(Error::NotOrthogonal(h));
        }
    }
    let points = triple.lifts.map(|l| ProjPoint::new(lift_toward(a.rep(), &l, lambda)));
    let [p0, p1, p2] = points;
    Ok(Basis::from_points(label, [p0?, p1?, p2?]))
}

/// Real plane with frame `(A, e^{iλ}E, i·e^{iλ}F)`: it contains the geodesic
/// from `A` toward `e^{iλ}E` and the whole equator.
pub fn real_plane_for(lambda: f64, gauge: &GaugeConfig) -> Result<RealPlane> {
    let w = Complex64::from_polar(1.0, lambda);
    real_plane(*gauge.a.rep(), gauge.e_dir.scale(w), gauge.f_dir.scale(I * w))
}

pub const LABELS: [&str; 4] = ["A", "B", "C", "D"];

pub fn build_system(gauge: &GaugeConfig) -> Result<MubSystem> {
    let gauge = gauge.validated()?;
    let g = gauge.canonical();
    let a = g.a;
    let e = ProjPoint::new(g.e_dir)?;

    let m = polar_line(&a);
    let ell = line_through(&a, &e)?;
    let (equator, north, south) = equator_and_poles(&m, &e, &g.f_dir)?;
    let triple = equilateral_triple_ordered(&equator, g.labels);
    let [b, c, d] = tetrahedron_on_line(&ell, &a, &e, g.azimuth)?;

    let longitudes = [0, 1, 2].map(|k| g.azimuth + k as f64 * THIRD_TURN);
    let mut bases = vec![Basis::from_points(LABELS[0], [a, north, south])];
    for (k, &lambda) in longitudes.iter().enumerate() {
        bases.push(lift_basis(LABELS[k + 1], &a, &triple, lambda)?);
    }
    let planes = [
        real_plane_for(longitudes[0], &g)?,
        real_plane_for(longitudes[1], &g)?,
        real_plane_for(longitudes[2], &g)?,
    ];
    let bases: [Basis; 4] = bases.try_into().expect("four bases");

    Ok(MubSystem {
        bases,
        gauge,
        landmarks: Landmarks {
            ell,
            m,
            equator,
            triple,
            tetrahedron: [a, b, c, d],
            planes,
            longitudes,
        },
    })
}

impl MubSystem {
    pub fn basis(&self, label: &str) -> Option<&Basis> {
        self.bases.iter().find(|b| b.label == label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::{membership, GeodesicArc, TangentVector};
    use approx::assert_abs_diff_eq;

    const R3: f64 = 0.5773502691896258;
    const R6: f64 = 0.408248290463863;
    const R2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tetra_side_constant() {
        assert_abs_diff_eq!(TETRA_SIDE.cos(), -1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(TETRA_SIDE, 2.0 * (1.0 / 3f64.sqrt()).acos(), epsilon = 1e-15);
        assert_eq!(TETRA_SIDE, (-1.0f64 / 3.0).acos());
    }

    fn default_landmarks() -> (ProjLine, GreatCircle, ProjPoint, ProjPoint) {
        let m = polar_line(&ProjPoint::basis(0));
        let (circle, n, s) = equator_and_poles(&m, &ProjPoint::basis(1), &CVec3::basis(2)).unwrap();
        (m, circle, n, s)
    }

    #[test]
    fn equator_poles_default() {
        let (_, circle, n, s) = default_landmarks();
        assert!(n.rep().max_abs_diff(&CVec3::real(0.0, R2, R2)) < 1e-15);
        assert!(s.rep().max_abs_diff(&CVec3::real(0.0, R2, -R2)) < 1e-15);
        assert_abs_diff_eq!(fs_distance(&n, &s), PI, epsilon = 1e-15);
        for k in 0..16 {
            let p = circle.point(PI * k as f64 / 16.0);
            assert_abs_diff_eq!(fs_distance(&p, &n), PI / 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(fs_distance(&p, &s), PI / 2.0, epsilon = 1e-12);
        }
        assert_eq!(circle.point(0.0), ProjPoint::basis(1));
    }

    #[test]
    fn equator_rejects_bad_inputs() {
        let m = polar_line(&ProjPoint::basis(0));
        let off = equator_and_poles(&m, &ProjPoint::basis(0), &CVec3::basis(2));
        assert!(matches!(off, Err(Error::NotOnLine(_))));
        let skew = equator_and_poles(&m, &ProjPoint::basis(1), &CVec3::real(0.0, 1.0, 1.0));
        assert!(matches!(skew, Err(Error::NotOrthogonal(_))));
    }

    #[test]
    fn equilateral_triple_default() {
        let (_, circle, _, _) = default_landmarks();
        let t = equilateral_triple(&circle);
        let h = 3f64.sqrt() / 2.0;
        let e1 = CVec3::new(c(0.0, 0.0), c(-0.5, 0.0), c(0.0, h));
        let e2 = CVec3::new(c(0.0, 0.0), c(-0.5, 0.0), c(0.0, -h));
        assert!(t.lifts[1].max_abs_diff(&e1) < 1e-15);
        assert!(t.lifts[2].max_abs_diff(&e2) < 1e-15);
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            assert_abs_diff_eq!(fs_distance(&t.points[i], &t.points[j]), 2.0 * PI / 3.0, epsilon = 1e-12);
            let z = inner(&t.lifts[i], &t.lifts[j]);
            assert!((z - c(-0.5, 0.0)).norm() < 1e-12);
        }
        assert!(t.points[0] != t.points[1] && t.points[1] != t.points[2]);
    }

    #[test]
    fn tetrahedron_default_and_rotated() {
        let a = ProjPoint::basis(0);
        let e = ProjPoint::basis(1);
        let ell = line_through(&a, &e).unwrap();
        let [b, cc, d] = tetrahedron_on_line(&ell, &a, &e, 0.0).unwrap();
        let s = (2.0f64 / 3.0).sqrt();
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!(b.rep().max_abs_diff(&CVec3::real(R3, s, 0.0)) < 1e-15);
        assert!(cc.rep().max_abs_diff(&CVec3::new(c(R3, 0.0), w * s, c(0.0, 0.0))) < 1e-15);
        assert!(d.rep().max_abs_diff(&CVec3::new(c(R3, 0.0), w * w * s, c(0.0, 0.0))) < 1e-15);
        for azimuth in [0.0, PI, 1.234] {
            let [b, cc, d] = tetrahedron_on_line(&ell, &a, &e, azimuth).unwrap();
            let pts = [a, b, cc, d];
            for i in 0..4 {
                for j in i + 1..4 {
                    assert_abs_diff_eq!(fs_distance(&pts[i], &pts[j]), TETRA_SIDE, epsilon = 1e-12);
                }
            }
        }
        let not_polar = ProjPoint::from_real(0.6, 0.8, 0.0).unwrap();
        assert!(matches!(
            tetrahedron_on_line(&ell, &a, &not_polar, 0.0),
            Err(Error::NotPolarPair(_))
        ));
        assert!(matches!(
            tetrahedron_on_line(&ell, &a, &ProjPoint::basis(2), 0.0),
            Err(Error::NotOnLine(_))
        ));
    }

    #[test]
    fn lift_basis_default() {
        let (_, circle, _, _) = default_landmarks();
        let t = equilateral_triple(&circle);
        let b = lift_basis("B", &ProjPoint::basis(0), &t, 0.0).unwrap();
        assert!(gram_deviation(&b.vectors) < 1e-12);
        let b1 = CVec3::new(c(R3, 0.0), c(-R6, 0.0), c(0.0, R2));
        let b2 = CVec3::new(c(R3, 0.0), c(-R6, 0.0), c(0.0, -R2));
        assert!(b.vectors[1].max_abs_diff(&b1) < 1e-15);
        assert!(b.vectors[2].max_abs_diff(&b2) < 1e-15);
        assert!(inner(&b.vectors[0], &b.vectors[1]).norm() < 1e-12);
    }

    #[test]
    fn lift_basis_c_and_psi_bookkeeping() {
        let (_, circle, _, _) = default_landmarks();
        let t = equilateral_triple(&circle);
        let a = ProjPoint::basis(0);
        let lambda = 2.0 * PI / 3.0;
        let cb = lift_basis("C", &a, &t, lambda).unwrap();
        let w = Complex64::from_polar(1.0, lambda);
        let expected = CVec3::new(c(R3, 0.0), -w * R6, c(0.0, R2) * w);
        assert!(cb.vectors[1].max_abs_diff(&expected) < 1e-15);

        // tangents at A: toward C is ωE, toward C′ is ωE′, toward B′ is E′
        let toward_c = TangentVector::new(a, t.lifts[0].scale(w)).unwrap();
        let toward_c1 = TangentVector::new(a, t.lifts[1].scale(w)).unwrap();
        let toward_b1 = TangentVector::new(a, t.lifts[1]).unwrap();
        let same = crate::angles_between(&toward_c, &toward_c1).unwrap();
        assert_abs_diff_eq!(same.psi, PI, epsilon = 1e-12);
        let cross = crate::angles_between(&toward_b1, &toward_c).unwrap();
        assert_abs_diff_eq!(cross.psi, PI / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cross.theta, PI / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn real_planes_hold_their_curves_and_bases() {
        let gauge = GaugeConfig::default();
        let sys = build_system(&gauge).unwrap();
        let circle = sys.landmarks.equator;
        for (k, plane) in sys.landmarks.planes.iter().enumerate() {
            let lambda = sys.landmarks.longitudes[k];
            let dir = gauge.e_dir.scale(Complex64::from_polar(1.0, lambda));
            let arc = GeodesicArc::new(TangentVector::new(gauge.a, dir).unwrap(), PI).unwrap();
            for i in 0..16 {
                let s = PI * i as f64 / 16.0;
                assert!(membership(plane, &arc.point(s).unwrap()));
                assert!(membership(plane, &circle.point(s)));
            }
            for p in sys.bases[k + 1].points().unwrap() {
                assert!(membership(plane, &p));
            }
        }
    }

    #[test]
    fn default_system_closed_forms() {
        let sys = build_system(&GaugeConfig::default()).unwrap();
        let [a, b, _, _] = &sys.bases;
        assert!(a.vectors[0].max_abs_diff(&CVec3::basis(0)) < 1e-15);
        assert!(a.vectors[1].max_abs_diff(&CVec3::real(0.0, R2, R2)) < 1e-15);
        assert!(b.vectors[0].max_abs_diff(&CVec3::real(R3, (2.0f64 / 3.0).sqrt(), 0.0)) < 1e-15);
        assert_eq!(sys.landmarks.tetrahedron[1], b.points().unwrap()[0]);
    }

    #[test]
    fn descending_order_permutes_within_bases() {
        let asc = build_system(&GaugeConfig::default()).unwrap();
        let desc = build_system(&GaugeConfig::default().with_labels(TripleOrder::Descending)).unwrap();
        assert_eq!(asc.bases[0], desc.bases[0]);
        for (x, y) in asc.bases.iter().zip(desc.bases.iter()).skip(1) {
            assert_eq!(x.vectors[0], y.vectors[0]);
            assert!(x.vectors[1].max_abs_diff(&y.vectors[2]) < 1e-15);
        }
    }

    #[test]
    fn canonical_gauge_builds_the_same_system() {
        let w = Complex64::from_polar(1.0, 0.83);
        let gauge = GaugeConfig::new(
            ProjPoint::basis(0),
            CVec3::basis(1).scale(w),
            CVec3::basis(2).scale(w),
            0.3,
        )
        .unwrap();
        let g = gauge.canonical();
        assert!(g.e_dir.max_abs_diff(&CVec3::basis(1)) < 1e-15);
        let sys = build_system(&gauge).unwrap();
        let shifted = build_system(&GaugeConfig { azimuth: 0.3 + 0.83, ..GaugeConfig::default() }).unwrap();
        for (x, y) in sys.bases.iter().zip(shifted.bases.iter()) {
            for (u, v) in x.points().unwrap().iter().zip(y.points().unwrap().iter()) {
                assert!(u.approx_eq(v, 1e-14));
            }
        }
    }

    #[test]
    fn gauge_rejects_non_orthonormal() {
        let r = GaugeConfig::new(ProjPoint::basis(0), CVec3::real(0.1, 1.0, 0.0), CVec3::basis(2), 0.0);
        assert!(matches!(r, Err(Error::NotOrthonormal(_))));
    }
}
