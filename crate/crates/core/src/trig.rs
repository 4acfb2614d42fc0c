//! Trigonometric laws of CP² as residual computations.
//!
//! Residuals are measured on cosines rather than on angles, which keeps them
//! well conditioned near 0 and π.

use std::f64::consts::{FRAC_PI_4, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::TETRA_SIDE;
use crate::cvec::I;
use crate::error::{check_range, Error, Result};
use crate::projective::{
    angles_between, fs_distance, membership, tangent_toward, AngleTriple, GreatCircle, ProjPoint,
    RealPlane, TangentVector,
};
use crate::sampling;
use crate::GEOM_TOL;

/// Side-length band for random triangles; the cut locus sits at π.
pub const SIDE_GUARD: f64 = 0.1;

/// A geodesic triangle with the angles measured at `vertex`.
///
/// `a` joins `vertex` to `p`, `b` joins `vertex` to `q` and `c` is the side
/// opposite the vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicTriangle {
    pub vertex: ProjPoint,
    pub p: ProjPoint,
    pub q: ProjPoint,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub angles: AngleTriple,
}

impl GeodesicTriangle {
    /// Measures sides along minimizing geodesics and the angles between
    /// their tangents at `vertex`. Fails if `p` or `q` coincides with the
    /// vertex.
    pub fn new(vertex: ProjPoint, p: ProjPoint, q: ProjPoint) -> Result<Self> {
        let (tp, a) = tangent_toward(&vertex, &p, 0.0)?;
        let (tq, b) = tangent_toward(&vertex, &q, 0.0)?;
        let angles = angles_between(&tp, &tq)?;
        let c = fs_distance(&p, &q);
        Ok(GeodesicTriangle { vertex, p, q, a, b, c, angles })
    }
}

/// Statistics of one law over a randomized run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub law: String,
    pub trials: usize,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub failures: usize,
    pub tolerance: f64,
}

impl LawReport {
    pub fn from_residuals(law: &str, residuals: &[f64], tolerance: f64) -> Self {
        let max_residual = residuals.iter().copied().fold(0.0, f64::max);
        let mean_residual = if residuals.is_empty() {
            0.0
        } else {
            residuals.iter().sum::<f64>() / residuals.len() as f64
        };
        let failures = residuals.iter().filter(|r| !(**r < tolerance)).count();
        LawReport {
            law: law.to_string(),
            trials: residuals.len(),
            max_residual,
            mean_residual,
            failures,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// `|cos α − cos θ·cos ψ|` for a pair of tangents at one point.
pub fn e21_residual(v: &TangentVector, w: &TangentVector) -> Result<f64> {
    Ok(angles_between(v, w)?.e21_residual())
}

/// Right-hand side of Shirokov's law of cosines:
/// `cos a cos b + sin a sin b cos α − 2 sin²(a/2) sin²(b/2) sin²θ`.
pub fn shirokov_cos_c(a: f64, b: f64, alpha: f64, theta: f64) -> f64 {
    shirokov_terms(a, b, alpha, theta).iter().sum()
}

fn shirokov_terms(a: f64, b: f64, alpha: f64, theta: f64) -> [f64; 3] {
    let (sa, ca) = a.sin_cos();
    let (sb, cb) = b.sin_cos();
    let ha = (a / 2.0).sin();
    let hb = (b / 2.0).sin();
    let st = theta.sin();
    [ca * cb, sa * sb * alpha.cos(), -2.0 * ha * ha * hb * hb * st * st]
}

/// Third side predicted by Shirokov's law from two sides and the angles
/// between them.
pub fn shirokov_predict_c(a: f64, b: f64, alpha: f64, theta: f64) -> Result<f64> {
    check_range("a", a, 0.0, PI)?;
    check_range("b", b, 0.0, PI)?;
    check_range("alpha", alpha, 0.0, PI)?;
    check_range("theta", theta, 0.0, PI / 2.0)?;
    let terms = shirokov_terms(a, b, alpha, theta);
    let cos_c: f64 = terms.iter().sum();
    // arccos has a square-root singularity at ±1: a value within the
    // evaluation's own rounding bound of ±1 is indistinguishable from it
    let bound = 8.0 * f64::EPSILON * terms.iter().map(|t| t.abs()).sum::<f64>();
    let cos_c = if (1.0 - cos_c.abs()) <= bound { cos_c.signum() } else { cos_c };
    Ok(cos_c.clamp(-1.0, 1.0).acos())
}

pub fn shirokov_residual(tri: &GeodesicTriangle) -> f64 {
    let predicted = shirokov_cos_c(tri.a, tri.b, tri.angles.alpha, tri.angles.theta);
    (tri.c.cos() - predicted).abs()
}

/// Signed defect `cos(d/2) − cos((π−d)/2)·cos(π/4)` of the right triangle
/// with legs `π−d`, `π/2` and hypotenuse `d` in a real form. Vanishes exactly
/// at the tetrahedral side `arccos(−1/3)`.
pub fn tetra_identity_defect(d: f64) -> f64 {
    (d / 2.0).cos() - ((PI - d) / 2.0).cos() * FRAC_PI_4.cos()
}

pub fn tetra_identity_residual() -> f64 {
    tetra_identity_defect(TETRA_SIDE).abs()
}

/// Which vector is carried around the equator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transported {
    /// Unit normal to the circle inside the real plane.
    Normal,
    /// The circle's own unit tangent.
    Tangent,
}

/// Sign picked up by a vector carried once around a closed geodesic of a
/// real projective plane.
///
/// The loop lifts to a half great circle `s ↦ cos s·x + sin s·y`, `s ∈ [0, π]`,
/// of the double-cover sphere, running from `x` to `−x`. Transport along a
/// great circle of the sphere is rotation about its axis `n = x × y`; the
/// deck transformation `v ↦ −v` then returns the vector to the start. The
/// normal comes back as `−n`, the tangent as itself.
pub fn holonomy_sign(plane: &RealPlane, circle: &GreatCircle, which: Transported) -> Result<i8> {
    const SAMPLES: usize = 16;
    for k in 0..SAMPLES {
        let s = PI * k as f64 / SAMPLES as f64;
        if !membership(plane, &circle.point(s)) {
            return Err(Error::NotInPlane);
        }
    }

    // the lift must sit in a single phase-rotated copy of the real span
    let (phase, x) = plane.real_coords(circle.center(), GEOM_TOL).ok_or(Error::NotInPlane)?;
    let unphase = num_complex::Complex64::from_polar(1.0, -phase);
    let yc = plane.coords(&circle.codirection().scale(I));
    let mut y = [0.0; 3];
    for (k, z) in yc.iter().enumerate() {
        let z = z * unphase;
        if z.im.abs() > GEOM_TOL {
            return Err(Error::NotGeodesic);
        }
        y[k] = z.re;
    }
    if dot(&x, &y).abs() > GEOM_TOL || (dot(&y, &y) - 1.0).abs() > GEOM_TOL {
        return Err(Error::NotGeodesic);
    }

    let axis = cross(&x, &y);
    let start = match which {
        Transported::Normal => axis,
        Transported::Tangent => y,
    };
    let carried = rotate(&start, &axis, PI);
    let returned = carried.map(|c| -c);
    Ok(if dot(&returned, &start) >= 0.0 { 1 } else { -1 })
}

fn dot(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

fn cross(u: &[f64; 3], v: &[f64; 3]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

/// Rodrigues rotation of `v` by `angle` about the unit `axis`.
fn rotate(v: &[f64; 3], axis: &[f64; 3], angle: f64) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    let kxv = cross(axis, v);
    let kdv = dot(axis, v);
    [0, 1, 2].map(|i| v[i] * c + kxv[i] * s + axis[i] * kdv * (1.0 - c))
}

/// Reports for the randomized law checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawSuiteReport {
    pub e21: LawReport,
    pub e22: LawReport,
}

/// Random tangent pair at a random point.
pub fn sample_tangent_pair(seed: u64, index: u64) -> (TangentVector, TangentVector) {
    let mut rng = sampling::trial_rng(seed, index);
    let base = sampling::point(&mut rng);
    let v = sampling::tangent(&mut rng, &base);
    let w = sampling::tangent(&mut rng, &base);
    (v, w)
}

/// Random triangle with every side in `[SIDE_GUARD, π − SIDE_GUARD]`.
pub fn sample_triangle(seed: u64, index: u64) -> GeodesicTriangle {
    let mut rng = sampling::trial_rng(seed, index);
    let ok = |d: f64| (SIDE_GUARD..=PI - SIDE_GUARD).contains(&d);
    loop {
        let v = sampling::point(&mut rng);
        let p = sampling::point(&mut rng);
        let q = sampling::point(&mut rng);
        if ok(fs_distance(&v, &p)) && ok(fs_distance(&v, &q)) && ok(fs_distance(&p, &q)) {
            return GeodesicTriangle::new(v, p, q).expect("sides bounded away from 0");
        }
    }
}

/// Runs the angle identity over `trials` random tangent pairs and Shirokov's
/// law over `trials` random triangles. Deterministic for a given seed.
pub fn run_law_suite(trials: usize, seed: u64, tol: f64) -> LawSuiteReport {
    let e21: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let (v, w) = sample_tangent_pair(seed, i);
            e21_residual(&v, &w).expect("shared base")
        })
        .collect();
    let e22: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|i| shirokov_residual(&sample_triangle(seed, i)))
        .collect();
    LawSuiteReport {
        e21: LawReport::from_residuals("e21", &e21, tol),
        e22: LawReport::from_residuals("e22", &e22, tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvec::{CVec3, ZERO};
    use crate::projective::{line_through, polar_line, real_plane};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    const D: f64 = 1.910_633_236_249_018_6;

    #[test]
    fn e21_examples() {
        let a = ProjPoint::basis(0);
        let v = TangentVector::new(a, CVec3::basis(1)).unwrap();
        assert_eq!(e21_residual(&v, &v).unwrap(), 0.0);
        let w = TangentVector::new(a, CVec3::basis(2)).unwrap();
        assert!(e21_residual(&v, &w).unwrap() < 1e-15);
        assert!(angles_between(&v, &w).unwrap().degenerate);
    }

    #[test]
    fn shirokov_closes_b_b_prime() {
        let c = shirokov_predict_c(D, D, 2.0 * PI / 3.0, PI / 3.0).unwrap();
        assert_abs_diff_eq!(c, PI, epsilon = 1e-12);
        assert_abs_diff_eq!(shirokov_cos_c(D, D, 2.0 * PI / 3.0, PI / 3.0), -1.0, epsilon = 1e-15);
    }

    #[test]
    fn shirokov_gives_tetra_side_for_b_c_prime() {
        let alpha = ((PI / 3.0).cos() * (PI / 3.0).cos()).acos();
        let c = shirokov_predict_c(D, D, alpha, PI / 3.0).unwrap();
        assert_abs_diff_eq!(c, (-1.0f64 / 3.0).acos(), epsilon = 1e-12);
    }

    #[test]
    fn shirokov_reduces_to_spherical_law() {
        let c = shirokov_predict_c(PI / 2.0, PI / 2.0, PI / 2.0, 0.0).unwrap();
        assert_abs_diff_eq!(c, PI / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn shirokov_rejects_out_of_domain() {
        assert!(shirokov_predict_c(-0.1, 1.0, 1.0, 0.5).is_err());
        assert!(shirokov_predict_c(1.0, 1.0, 1.0, 1.7).is_err());
        assert!(shirokov_predict_c(1.0, 1.0, 3.5, 0.5).is_err());
        assert!(shirokov_predict_c(1.0, f64::NAN, 1.0, 0.5).is_err());
    }

    #[test]
    fn triangle_in_a_complex_line_obeys_unit_sphere_law() {
        let line = line_through(&ProjPoint::basis(0), &ProjPoint::basis(1)).unwrap();
        let v = line.point(Complex64::new(0.9, 0.0), Complex64::new(0.2, 0.3)).unwrap();
        let p = line.point(Complex64::new(0.1, 0.4), Complex64::new(0.8, 0.0)).unwrap();
        let q = line.point(Complex64::new(0.5, -0.5), Complex64::new(0.3, 0.6)).unwrap();
        let tri = GeodesicTriangle::new(v, p, q).unwrap();
        assert!(tri.angles.theta < 1e-7);
        // unit-sphere law with the real angle at the vertex
        let spherical = tri.a.cos() * tri.b.cos() + tri.a.sin() * tri.b.sin() * tri.angles.alpha.cos();
        assert_abs_diff_eq!(tri.c.cos(), spherical, epsilon = 1e-12);
        assert!(shirokov_residual(&tri) < 1e-12);
    }

    #[test]
    fn triangle_in_a_real_form_obeys_radius_two_sphere_law() {
        let plane = real_plane(CVec3::basis(0), CVec3::basis(1), CVec3::basis(2)).unwrap();
        let v = plane.point([0.8, 0.5, -0.3]).unwrap();
        let p = plane.point([0.1, -0.7, 0.6]).unwrap();
        let q = plane.point([-0.4, 0.2, 0.9]).unwrap();
        let tri = GeodesicTriangle::new(v, p, q).unwrap();
        let half = (tri.a / 2.0).cos() * (tri.b / 2.0).cos()
            + (tri.a / 2.0).sin() * (tri.b / 2.0).sin() * tri.angles.alpha.cos();
        assert_abs_diff_eq!((tri.c / 2.0).cos(), half.abs(), epsilon = 1e-12);
        assert!(shirokov_residual(&tri) < 1e-12);
    }

    #[test]
    fn degenerate_triangle_has_zero_third_side() {
        let v = ProjPoint::basis(0);
        let p = ProjPoint::from_real(0.6, 0.8, 0.0).unwrap();
        let tri = GeodesicTriangle::new(v, p, p).unwrap();
        assert_eq!(tri.c, 0.0);
        assert!(shirokov_residual(&tri) < 1e-12);
    }

    #[test]
    fn tetra_identity_values() {
        assert!(tetra_identity_residual() < 1e-15);
        assert_abs_diff_eq!((D / 2.0).cos(), 0.5773502691896258, epsilon = 1e-15);
        assert_abs_diff_eq!((D / 2.0).sin(), 0.816496580927726, epsilon = 1e-15);
        assert!(tetra_identity_defect(D - 1e-3) * tetra_identity_defect(D + 1e-3) < 0.0);
    }

    fn equator_setup(lambda: f64) -> (RealPlane, GreatCircle) {
        let m = polar_line(&ProjPoint::basis(0));
        let circle = GreatCircle::new(m, CVec3::basis(1), CVec3::basis(2)).unwrap();
        let w = Complex64::from_polar(1.0, lambda);
        let plane = real_plane(CVec3::basis(0), CVec3::basis(1).scale(w), CVec3::basis(2).scale(I * w)).unwrap();
        (plane, circle)
    }

    #[test]
    fn holonomy_flips_the_normal_only() {
        for lambda in [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0] {
            let (plane, circle) = equator_setup(lambda);
            assert_eq!(holonomy_sign(&plane, &circle, Transported::Normal).unwrap(), -1);
            assert_eq!(holonomy_sign(&plane, &circle, Transported::Tangent).unwrap(), 1);
        }
    }

    #[test]
    fn holonomy_rejects_foreign_circle() {
        let (plane, _) = equator_setup(0.0);
        let m = polar_line(&ProjPoint::basis(0));
        // the circle [cos s e2 + sin s e3] lies in the standard real form, not in this one
        let other = GreatCircle::new(m, CVec3::basis(1), CVec3::basis(2).scale(-I)).unwrap();
        let standard = real_plane(CVec3::basis(0), CVec3::basis(1), CVec3::basis(2)).unwrap();
        assert_eq!(holonomy_sign(&standard, &other, Transported::Normal).unwrap(), -1);
        let tilted = GreatCircle::new(
            m,
            CVec3::basis(1),
            CVec3::new(ZERO, ZERO, Complex64::from_polar(1.0, 0.4)),
        )
        .unwrap();
        assert_eq!(holonomy_sign(&plane, &tilted, Transported::Normal), Err(Error::NotInPlane));
    }

    #[test]
    fn law_suite_is_deterministic() {
        let a = run_law_suite(1, 42, 1e-9);
        let b = run_law_suite(1, 42, 1e-9);
        assert_eq!(a, b);
        let c = run_law_suite(200, 42, 1e-9);
        assert!(c.e21.passed() && c.e22.passed());
        assert!(c.e21.max_residual >= c.e21.mean_residual);
    }
}
