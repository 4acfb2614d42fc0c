//! Checks for claimed systems of mutually unbiased bases in C³.
//!
//! Only [`inner`] and [`fs_distance`] are used here, never construction
//! internals, so any system (built here or read from a file) can be checked.
//! Checks return worst-case deviations; pass/fail is the caller's tolerance.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::construction::Basis;
use crate::cvec::{inner, ONE, ZERO};
use crate::error::{Error, Result};
use crate::projective::{fs_distance, gram_deviation};
use crate::{GEOM_TOL, UNBIASED_MODULUS};

pub type Matrix3 = [[Complex64; 3]; 3];

/// `max |<e_i, e_j> − δ_ij|`.
pub fn check_orthonormal(b: &Basis) -> f64 {
    gram_deviation(&b.vectors)
}

/// `max ||<e_i, f_j>| − 1/√3|`.
pub fn check_unbiased(b1: &Basis, b2: &Basis) -> f64 {
    let mut dev = 0.0f64;
    for e in &b1.vectors {
        for f in &b2.vectors {
            dev = dev.max((inner(e, f).norm() - UNBIASED_MODULUS).abs());
        }
    }
    dev
}

/// Fubini–Study distances between the points of two bases.
pub fn cross_distance_matrix(b1: &Basis, b2: &Basis) -> Result<[[f64; 3]; 3]> {
    let p = b1.points()?;
    let q = b2.points()?;
    Ok([0, 1, 2].map(|i| [0, 1, 2].map(|j| fs_distance(&p[i], &q[j]))))
}

/// Transition matrix `M[i][j] = <e_i, f_j>` between two bases, with its
/// dephased form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionMatrix {
    pub matrix: Matrix3,
    /// `M` with rows, then columns, rephased so the first column and first
    /// row are real and nonnegative. Entries of modulus below [`GEOM_TOL`]
    /// leave their row or column unrephased.
    pub dephased: Matrix3,
}

pub fn transition_matrix(b1: &Basis, b2: &Basis) -> Result<TransitionMatrix> {
    let dev = check_orthonormal(b1).max(check_orthonormal(b2));
    if dev > GEOM_TOL {
        return Err(Error::NotOrthonormal(dev));
    }
    let matrix = [0, 1, 2].map(|i| [0, 1, 2].map(|j| inner(&b1.vectors[i], &b2.vectors[j])));
    Ok(TransitionMatrix { matrix, dephased: dephase(&matrix) })
}

fn unit_phase(z: Complex64) -> Complex64 {
    if z.norm() < GEOM_TOL {
        ONE
    } else {
        z.conj() / z.norm()
    }
}

pub fn dephase(m: &Matrix3) -> Matrix3 {
    let mut out = *m;
    for row in out.iter_mut() {
        let u = unit_phase(row[0]);
        for z in row.iter_mut() {
            *z *= u;
        }
    }
    for j in 0..3 {
        let u = unit_phase(out[0][j]);
        for row in out.iter_mut() {
            row[j] *= u;
        }
    }
    for i in 0..3 {
        out[i][0] = Complex64::new(out[i][0].re, 0.0);
        out[0][i] = Complex64::new(out[0][i].re, 0.0);
    }
    out
}

impl TransitionMatrix {
    /// `max |(M M†)_ij − δ_ij|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let m = &self.matrix;
        let mut dev = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let z: Complex64 = (0..3).map(|k| m[i][k] * m[j][k].conj()).sum();
                let target = if i == j { ONE } else { ZERO };
                dev = dev.max((z - target).norm());
            }
        }
        dev
    }

    /// `max ||√3·M_ij| − 1|`; small exactly when `√3·M` is complex Hadamard.
    pub fn hadamard_deviation(&self) -> f64 {
        let s = 3f64.sqrt();
        self.matrix
            .iter()
            .flatten()
            .map(|z| (s * z.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Whether `√3·M` equals the order-3 Fourier matrix up to row and column
    /// permutations and phases. Informational: every 3×3 complex Hadamard
    /// matrix has this property.
    pub fn fourier_equivalent(&self, tol: f64) -> bool {
        if self.hadamard_deviation() > tol {
            return false;
        }
        let s = 3f64.sqrt();
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let fourier: Matrix3 = [0, 1, 2].map(|i| [0, 1, 2].map(|j| w.powu((i * j) as u32)));
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for rp in &perms {
            for cp in &perms {
                let permuted: Matrix3 = [0, 1, 2].map(|i| [0, 1, 2].map(|j| self.matrix[rp[i]][cp[j]] * s));
                let d = dephase(&permuted);
                let close = d
                    .iter()
                    .flatten()
                    .zip(fourier.iter().flatten())
                    .all(|(x, y)| (x - y).norm() <= tol);
                if close {
                    return true;
                }
            }
        }
        false
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisDeviation {
    pub label: String,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDeviation {
    pub first: String,
    pub second: String,
    pub deviation: f64,
}

/// Worst-case deviations of a claimed complete system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tolerance: f64,
    pub orthonormality: Vec<BasisDeviation>,
    pub unbiasedness: Vec<PairDeviation>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> usize {
        let bad = |d: f64| !(d < self.tolerance);
        self.orthonormality.iter().filter(|b| bad(b.deviation)).count()
            + self.unbiasedness.iter().filter(|p| bad(p.deviation)).count()
    }

    pub fn max_deviation(&self) -> f64 {
        self.orthonormality
            .iter()
            .map(|b| b.deviation)
            .chain(self.unbiasedness.iter().map(|p| p.deviation))
            .fold(0.0, f64::max)
    }
}

/// Four orthonormality checks and six pairwise unbiasedness checks.
pub fn check_system(bases: &[Basis], tol: f64) -> Result<VerificationReport> {
    if bases.len() != 4 {
        return Err(Error::MalformedSystem(format!("expected 4 bases, found {}", bases.len())));
    }
    let orthonormality: Vec<BasisDeviation> = bases
        .iter()
        .map(|b| BasisDeviation { label: b.label.clone(), deviation: check_orthonormal(b) })
        .collect();
    let mut unbiasedness = Vec::with_capacity(6);
    for i in 0..bases.len() {
        for j in i + 1..bases.len() {
            unbiasedness.push(PairDeviation {
                first: bases[i].label.clone(),
                second: bases[j].label.clone(),
                deviation: check_unbiased(&bases[i], &bases[j]),
            });
        }
    }
    let mut report = VerificationReport { tolerance: tol, orthonormality, unbiasedness, pass: false };
    report.pass = report.failures() == 0;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_system, GaugeConfig};
    use crate::cvec::CVec3;
    use approx::assert_abs_diff_eq;

    fn standard() -> Basis {
        Basis::new("S", [CVec3::basis(0), CVec3::basis(1), CVec3::basis(2)])
    }

    fn default_bases() -> [Basis; 4] {
        build_system(&GaugeConfig::default()).unwrap().bases
    }

    #[test]
    fn orthonormality_examples() {
        assert_eq!(check_orthonormal(&standard()), 0.0);
        let [_, b, _, _] = default_bases();
        assert!(check_orthonormal(&b) < 1e-12);
        let repeated = Basis::new("R", [CVec3::basis(0), CVec3::basis(0), CVec3::basis(1)]);
        assert_eq!(check_orthonormal(&repeated), 1.0);
    }

    #[test]
    fn unbiasedness_examples() {
        let [a, b, c, _] = default_bases();
        assert!(check_unbiased(&a, &b) < 1e-15);
        assert!(check_unbiased(&a, &c) < 1e-15);
        // the vanishing off-diagonal moduli dominate
        assert_abs_diff_eq!(check_unbiased(&a, &a), UNBIASED_MODULUS, epsilon = 1e-15);
        assert_eq!(check_unbiased(&b, &c), check_unbiased(&c, &b));
    }

    #[test]
    fn distance_matrix_examples() {
        let [a, b, _, _] = default_bases();
        for row in cross_distance_matrix(&a, &b).unwrap() {
            for d in row {
                assert_abs_diff_eq!(d, 1.9106332362490186, epsilon = 1e-12);
                assert_abs_diff_eq!(d.cos(), -1.0 / 3.0, epsilon = 1e-12);
            }
        }
        let same = cross_distance_matrix(&a, &a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 0.0 } else { std::f64::consts::PI };
                assert_abs_diff_eq!(same[i][j], want, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn transition_matrix_examples() {
        let [a, b, _, _] = default_bases();
        let id = transition_matrix(&a, &a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { ONE } else { ZERO };
                assert!((id.matrix[i][j] - want).norm() < 1e-15);
                assert!((id.dephased[i][j] - want).norm() < 1e-15);
            }
        }
        let t = transition_matrix(&a, &b).unwrap();
        assert!(t.unitarity_deviation() < 1e-12);
        assert!(t.hadamard_deviation() < 1e-12);
        assert_abs_diff_eq!(t.dephased[0][0].re, UNBIASED_MODULUS, epsilon = 1e-15);
        assert_eq!(t.dephased[0][0].im, 0.0);
        for k in 0..3 {
            assert!(t.dephased[0][k].re >= 0.0 && t.dephased[k][0].re >= 0.0);
        }
        assert!(t.fourier_equivalent(1e-9));
        assert!(!id.fourier_equivalent(1e-9));
    }

    #[test]
    fn transition_requires_orthonormal_bases() {
        let bad = Basis::new("R", [CVec3::basis(0), CVec3::basis(0), CVec3::basis(1)]);
        assert!(matches!(transition_matrix(&bad, &standard()), Err(Error::NotOrthonormal(_))));
    }

    #[test]
    fn system_report_structure() {
        let bases = default_bases();
        let r = check_system(&bases, 1e-12).unwrap();
        assert!(r.pass);
        assert_eq!(r.failures(), 0);
        assert_eq!(r.orthonormality.len(), 4);
        assert_eq!(r.unbiasedness.len(), 6);
    }

    #[test]
    fn perturbed_system_fails_locally() {
        let mut bases = default_bases();
        bases[2].vectors[1].0[0] += Complex64::new(1e-3, 0.0);
        let r = check_system(&bases, 1e-12).unwrap();
        assert!(!r.pass);
        assert!(r.orthonormality[2].deviation > 1e-4);
        assert!(r.orthonormality[0].deviation < 1e-12);
        for p in &r.unbiasedness {
            let touches_c = p.first == "C" || p.second == "C";
            assert_eq!(p.deviation > 1e-12, touches_c, "{p:?}");
        }
    }

    #[test]
    fn wrong_basis_count_is_malformed() {
        let bases = default_bases();
        assert!(matches!(check_system(&bases[..3], 1e-12), Err(Error::MalformedSystem(_))));
    }
}
