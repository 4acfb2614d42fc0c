//! The complex projective plane CP² with its Fubini–Study metric.
//!
//! The metric is normalized so that sectional curvature lies in [¼, 1]:
//! every complex projective line is a unit 2-sphere, every totally geodesic
//! real form RP² has curvature ¼, and the diameter is π. Under this
//! normalization the distance between `[p]` and `[q]` is `2·arccos|<p, q>|`.
//!
//! Points are stored as unit representatives with a canonical phase (the
//! first coordinate of modulus above [`PHASE_CUTOFF`] is real and positive).
//! Tangent vectors at a point are unit vectors Hermitian-orthogonal to its
//! canonical representative; the geodesic they generate is
//! `t ↦ [cos(t/2)·p + sin(t/2)·u]`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cvec::{inner, CVec3, I};
use crate::error::{check_range, Error, Result};
use crate::{EXACT_TOL, GEOM_TOL};

/// Coordinates below this modulus are skipped when fixing the phase.
pub const PHASE_CUTOFF: f64 = 1e-9;

/// `arccos` with its argument clamped into [-1, 1].
pub fn acos_clamped(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).acos()
}

/// A point of CP², held as its canonical unit representative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CVec3", into = "CVec3")]
pub struct ProjPoint {
    rep: CVec3,
}

impl ProjPoint {
    /// Projectivizes a nonzero vector.
    pub fn new(v: CVec3) -> Result<Self> {
        let mut rep = v.normalized()?;
        if let Some(k) = rep.0.iter().position(|z| z.norm() > PHASE_CUTOFF) {
            let z = rep.0[k];
            rep = rep.scale(z.conj() / z.norm());
            rep.0[k] = Complex64::new(rep.0[k].re, 0.0);
        }
        Ok(ProjPoint { rep })
    }

    pub fn from_real(x0: f64, x1: f64, x2: f64) -> Result<Self> {
        Self::new(CVec3::real(x0, x1, x2))
    }

    /// Standard coordinate point `[e_k]`.
    pub fn basis(k: usize) -> Self {
        ProjPoint { rep: CVec3::basis(k) }
    }

    pub fn rep(&self) -> &CVec3 {
        &self.rep
    }

    /// `sin(d/2)` computed as `|p × q|`, accurate near both 0 and π.
    pub fn half_chord(&self, other: &ProjPoint) -> f64 {
        self.rep.cross(&other.rep).norm()
    }

    /// Projective equality up to `tol` on `sin(d/2)`.
    pub fn approx_eq(&self, other: &ProjPoint, tol: f64) -> bool {
        self.half_chord(other) <= tol
    }
}

impl TryFrom<CVec3> for ProjPoint {
    type Error = Error;
    fn try_from(v: CVec3) -> Result<Self> {
        ProjPoint::new(v)
    }
}

impl From<ProjPoint> for CVec3 {
    fn from(p: ProjPoint) -> CVec3 {
        p.rep
    }
}

/// Fubini–Study distance in [0, π].
///
/// Evaluated as `2·atan2(|p × q|, |<p, q>|)`, which equals
/// `2·arccos|<p, q>|` for unit representatives but keeps full relative
/// accuracy for nearby points. Symmetric bit for bit.
pub fn fs_distance(p: &ProjPoint, q: &ProjPoint) -> f64 {
    let cos_half = inner(&p.rep, &q.rep).norm();
    let sin_half = p.half_chord(q);
    2.0 * sin_half.atan2(cos_half)
}

/// A complex projective line: the projectivization of a complex 2-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjLine {
    span: [CVec3; 2],
    pole: ProjPoint,
}

impl ProjLine {
    /// Hermitian-orthonormal spanning pair.
    pub fn span(&self) -> &[CVec3; 2] {
        &self.span
    }

    /// The point at distance π from every point of the line.
    pub fn pole(&self) -> &ProjPoint {
        &self.pole
    }

    /// `|<pole, v>|` for a unit vector `v`; zero on the line.
    pub fn offset(&self, v: &CVec3) -> f64 {
        inner(self.pole.rep(), v).norm()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.contains_with_tol(p, GEOM_TOL)
    }

    pub fn contains_with_tol(&self, p: &ProjPoint, tol: f64) -> bool {
        self.offset(p.rep()) <= tol
    }

    /// The point `[z0·span₀ + z1·span₁]`.
    pub fn point(&self, z0: Complex64, z1: Complex64) -> Result<ProjPoint> {
        ProjPoint::new(self.span[0].scale(z0) + self.span[1].scale(z1))
    }

    fn from_orthonormal(s0: CVec3, s1: CVec3) -> Result<Self> {
        let pole = ProjPoint::new(s0.cross(&s1).conj())?;
        Ok(ProjLine { span: [s0, s1], pole })
    }
}

/// The complex projective line through two distinct points.
pub fn line_through(p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
    let d = fs_distance(p, q);
    if d < GEOM_TOL {
        return Err(Error::CoincidentPoints(d));
    }
    let s0 = *p.rep();
    let s1 = q.rep().reject(&s0).normalized()?;
    // re-orthogonalize once so |<s0, s1>| stays at rounding level
    let s1 = s1.reject(&s0).normalized()?;
    ProjLine::from_orthonormal(s0, s1)
}

/// The line of all points at maximal distance π from `p`.
pub fn polar_line(p: &ProjPoint) -> ProjLine {
    let v = p.rep();
    // coordinate axis least aligned with p
    let k = (0..3)
        .min_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm()))
        .unwrap_or(0);
    let s0 = CVec3::basis(k)
        .reject(v)
        .normalized()
        .expect("a coordinate axis with |p_k|² ≤ 1/3 is never parallel to p");
    let s1 = v.cross(&s0).conj();
    ProjLine { span: [s0, s1], pole: *p }
}

/// The unique point of `line` Hermitian-orthogonal to `p`.
pub fn antipode_in(line: &ProjLine, p: &ProjPoint) -> Result<ProjPoint> {
    let off = line.offset(p.rep());
    if off > GEOM_TOL {
        return Err(Error::NotOnLine(off));
    }
    ProjPoint::new(line.pole().rep().cross(p.rep()).conj())
}

/// A unit tangent vector at a point of CP².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    base: ProjPoint,
    dir: CVec3,
}

impl TangentVector {
    /// `dir` must be orthogonal to `base.rep()` within [`GEOM_TOL`] relative
    /// to its length; it is then projected and normalized.
    pub fn new(base: ProjPoint, dir: CVec3) -> Result<Self> {
        let n = dir.norm();
        if !(n > 0.0) {
            return Err(Error::ZeroVector);
        }
        let dev = inner(base.rep(), &dir).norm() / n;
        if dev > GEOM_TOL {
            return Err(Error::NotTangent(dev));
        }
        let dir = dir.reject(base.rep()).normalized()?;
        Ok(TangentVector { base, dir })
    }

    pub fn base(&self) -> &ProjPoint {
        &self.base
    }

    pub fn dir(&self) -> &CVec3 {
        &self.dir
    }
}

/// Angle invariants of a pair of unit tangent vectors.
///
/// `alpha` is the real angle, `theta` the Kähler angle and `psi` the angle
/// between the first vector and the projection of the second onto its
/// complex line, so `cos alpha = cos theta · cos psi`. When the vectors are
/// Hermitian-orthogonal that projection vanishes; `psi` is then set to π/2
/// and `degenerate` is raised.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleTriple {
    pub alpha: f64,
    pub theta: f64,
    pub psi: f64,
    pub degenerate: bool,
}

impl AngleTriple {
    /// Angles of a pair whose inner product is `h`.
    pub fn from_inner(h: Complex64) -> Self {
        let modulus = h.norm();
        let alpha = acos_clamped(h.re);
        let theta = acos_clamped(modulus);
        // psi is ill-conditioned below PHASE_CUTOFF; it is only replaced by
        // π/2 once cos theta is small enough that e21 holds either way
        let degenerate = modulus <= PHASE_CUTOFF;
        let psi = if modulus < EXACT_TOL { PI / 2.0 } else { h.arg().abs() };
        AngleTriple { alpha, theta, psi, degenerate }
    }

    /// `|cos α − cos θ cos ψ|`.
    pub fn e21_residual(&self) -> f64 {
        (self.alpha.cos() - self.theta.cos() * self.psi.cos()).abs()
    }
}

pub fn angles_between(v: &TangentVector, w: &TangentVector) -> Result<AngleTriple> {
    let gap = v.base.half_chord(&w.base);
    if gap > GEOM_TOL {
        return Err(Error::BaseMismatch(2.0 * gap.asin()));
    }
    Ok(AngleTriple::from_inner(inner(&v.dir, &w.dir)))
}

/// A geodesic segment issuing from `tangent.base()`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicArc {
    tangent: TangentVector,
    length: f64,
}

impl GeodesicArc {
    pub fn new(tangent: TangentVector, length: f64) -> Result<Self> {
        check_range("length", length, 0.0, PI)?;
        Ok(GeodesicArc { tangent, length })
    }

    pub fn base(&self) -> &ProjPoint {
        self.tangent.base()
    }

    pub fn tangent(&self) -> &TangentVector {
        &self.tangent
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn end(&self) -> ProjPoint {
        self.lift(self.length)
            .try_into()
            .expect("unit combination of orthonormal vectors")
    }

    /// Representative `cos(t/2)·p + sin(t/2)·u` without range checks.
    pub fn lift(&self, t: f64) -> CVec3 {
        let (s, c) = (t / 2.0).sin_cos();
        *self.tangent.base.rep() * c + self.tangent.dir * s
    }

    pub fn point(&self, t: f64) -> Result<ProjPoint> {
        geodesic_point(self, t)
    }
}

/// The point at arc length `t` ∈ [0, π] along `arc`.
pub fn geodesic_point(arc: &GeodesicArc, t: f64) -> Result<ProjPoint> {
    check_range("t", t, 0.0, PI)?;
    ProjPoint::new(arc.lift(t))
}

/// Unit tangent at `p` of a minimizing geodesic toward `q`, with its length.
///
/// Below distance π the geodesic is unique and `phase` is ignored. At the cut
/// locus (distance π within [`GEOM_TOL`]) the geodesics from `p` to `q` form
/// a circle, and `phase` picks the one with tangent `e^{i·phase}·q̂`.
pub fn tangent_toward(p: &ProjPoint, q: &ProjPoint, phase: f64) -> Result<(TangentVector, f64)> {
    let d = fs_distance(p, q);
    if d < GEOM_TOL {
        return Err(Error::CoincidentPoints(d));
    }
    if PI - d <= GEOM_TOL {
        let dir = q.rep().reject(p.rep()).normalized()?;
        let dir = dir.scale(Complex64::from_polar(1.0, phase));
        return Ok((TangentVector::new(*p, dir)?, PI));
    }
    let h = inner(p.rep(), q.rep());
    let aligned = q.rep().scale(h.conj() / h.norm());
    let dir = aligned.reject(p.rep()).normalized()?;
    Ok((TangentVector::new(*p, dir)?, d))
}

/// A totally geodesic real projective plane: the projectivized real span of a
/// Hermitian-orthonormal frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealPlane {
    frame: [CVec3; 3],
}

impl RealPlane {
    pub fn frame(&self) -> &[CVec3; 3] {
        &self.frame
    }

    /// Frame coordinates `<f_k, v>`.
    pub fn coords(&self, v: &CVec3) -> [Complex64; 3] {
        self.frame.map(|f| inner(&f, v))
    }

    /// The point `[x₀f₁ + x₁f₂ + x₂f₃]` for real `x`.
    pub fn point(&self, x: [f64; 3]) -> Result<ProjPoint> {
        ProjPoint::new(self.frame[0] * x[0] + self.frame[1] * x[1] + self.frame[2] * x[2])
    }

    /// Real coordinates of `v` after removing a common phase, if the frame
    /// coordinates of `v` share one within `tol`. Returns `(phase, x)` with
    /// `v ≈ e^{i·phase}·Σ x_k f_k`.
    pub fn real_coords(&self, v: &CVec3, tol: f64) -> Option<(f64, [f64; 3])> {
        let z = self.coords(v);
        let lead = z.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm()))?;
        if lead.norm() == 0.0 {
            return None;
        }
        let unphase = lead.conj() / lead.norm();
        let rotated = z.map(|c| c * unphase);
        let scale = v.norm().max(f64::MIN_POSITIVE);
        if rotated.iter().any(|c| c.im.abs() > tol * scale) {
            return None;
        }
        Some((lead.arg(), rotated.map(|c| c.re)))
    }
}

pub fn real_plane(f1: CVec3, f2: CVec3, f3: CVec3) -> Result<RealPlane> {
    let frame = [f1, f2, f3];
    let mut dev = 0.0f64;
    for i in 0..3 {
        for j in i..3 {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((inner(&frame[i], &frame[j]) - target).norm());
        }
    }
    if dev > GEOM_TOL {
        return Err(Error::NotOrthonormal(dev));
    }
    let g1 = f1.normalized()?;
    let g2 = f2.reject(&g1).normalized()?;
    let g3 = f3.reject(&g1).reject(&g2).normalized()?;
    Ok(RealPlane { frame: [g1, g2, g3] })
}

pub fn membership(plane: &RealPlane, p: &ProjPoint) -> bool {
    membership_with_tol(plane, p, GEOM_TOL)
}

pub fn membership_with_tol(plane: &RealPlane, p: &ProjPoint, tol: f64) -> bool {
    plane.real_coords(p.rep(), tol).is_some()
}

/// A great circle of a complex projective line, parametrized by
/// `s ↦ [cos s·center + i·sin s·codirection]` for `s ∈ [0, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreatCircle {
    host: ProjLine,
    center: CVec3,
    codirection: CVec3,
}

impl GreatCircle {
    pub fn new(host: ProjLine, center: CVec3, codirection: CVec3) -> Result<Self> {
        let center = center.normalized()?;
        let codirection = codirection.normalized()?;
        for v in [&center, &codirection] {
            let off = host.offset(v);
            if off > GEOM_TOL {
                return Err(Error::NotOnLine(off));
            }
        }
        let h = inner(&center, &codirection).norm();
        if h > GEOM_TOL {
            return Err(Error::NotOrthogonal(h));
        }
        Ok(GreatCircle { host, center, codirection })
    }

    pub fn host(&self) -> &ProjLine {
        &self.host
    }

    pub fn center(&self) -> &CVec3 {
        &self.center
    }

    pub fn codirection(&self) -> &CVec3 {
        &self.codirection
    }

    /// Representative at parameter `s`; `lift(s + π) = −lift(s)`.
    pub fn lift(&self, s: f64) -> CVec3 {
        let (sn, cs) = s.sin_cos();
        self.center * cs + self.codirection.scale(I * sn)
    }

    /// Derivative of [`GreatCircle::lift`] in `s`.
    pub fn lift_velocity(&self, s: f64) -> CVec3 {
        let (sn, cs) = s.sin_cos();
        self.center * (-sn) + self.codirection.scale(I * cs)
    }

    pub fn point(&self, s: f64) -> ProjPoint {
        ProjPoint::new(self.lift(s)).expect("unit combination of orthonormal vectors")
    }

    /// The two points of the host line at distance π/2 from every point of
    /// the circle: `[(center ± codirection)/√2]`.
    pub fn poles(&self) -> (ProjPoint, ProjPoint) {
        let north = (self.center + self.codirection) * std::f64::consts::FRAC_1_SQRT_2;
        let south = (self.center - self.codirection) * std::f64::consts::FRAC_1_SQRT_2;
        (
            ProjPoint::new(north).expect("orthonormal sum"),
            ProjPoint::new(south).expect("orthonormal difference"),
        )
    }
}

/// Hermitian Gram deviation `max |<v_i, v_j> − δ_ij|`.
pub fn gram_deviation(vs: &[CVec3]) -> f64 {
    let mut dev = 0.0f64;
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((inner(a, b) - target).norm());
        }
    }
    dev
}
