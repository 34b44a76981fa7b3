//! Re-derives the invariant stiffness family by brute force: the commutation
//! condition `T_sigma(phi) C = C T_eps(phi)` is linear in the 36 entries of
//! `C`, so stacking it for a handful of angles and computing the nullspace
//! recovers the family without trusting any hand derivation. Generic angle
//! samplings give an eight-dimensional nullspace; samplings made only of
//! special angles (multiples of pi/2, pi) leave extra freedom and are
//! detected rather than forbidden.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::voigt::{stress_rotation_matrix, strain_rotation_matrix, Matrix6, RotationAngle};

#[derive(Debug, Error)]
pub enum InvarianceError {
    #[error("angle sampling is degenerate: nullspace dimension {sampled_dim} exceeds the stable dimension {stable_dim}")]
    DegenerateSampling {
        sampled_dim: usize,
        stable_dim: usize,
    },
    #[error("at least one sampling angle is required")]
    EmptyAngleSet,
    #[error("nullspace tolerance {tol} outside (0, 1e-6]")]
    InvalidTolerance { tol: f64 },
}

/// Default relative cutoff on singular values. The constraint entries are
/// exact polynomials in cos(phi), sin(phi); double precision leaves a wide
/// gap between the true-zero and nonzero singular values.
pub const NULLSPACE_TOL_DEFAULT: f64 = 1e-10;

/// Default angle sampling (radians). Generic, none near a multiple of pi/2.
pub const DEFAULT_ANGLES: [f64; 4] = [0.3, 0.7, 1.1, 2.0];

/// Fixed generic probe angle used to detect degenerate samplings: appending
/// it must not shrink the nullspace.
const PROBE_ANGLE: f64 = 0.861_432_158_9;

/// Stacked linear system over the 36 stiffness entries: 36 rows per sampled
/// angle, each row one entry of `T_sigma C - C T_eps = 0`.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    rows: DMatrix<f64>,
    angles: Vec<RotationAngle>,
}

impl ConstraintSystem {
    pub fn rows(&self) -> &DMatrix<f64> {
        &self.rows
    }

    pub fn angles(&self) -> &[RotationAngle] {
        &self.angles
    }

    pub fn row_count(&self) -> usize {
        self.rows.nrows()
    }
}

/// Orthonormal nullspace basis, each element reshaped to a 6x6 matrix.
/// Orthonormality is with respect to the Frobenius inner product.
#[derive(Debug, Clone)]
pub struct FamilyBasis {
    elements: Vec<Matrix6>,
}

impl FamilyBasis {
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Matrix6] {
        &self.elements
    }

    /// Projects a matrix onto the family span.
    pub fn project(&self, c: &Matrix6) -> Matrix6 {
        let mut out = Matrix6::zeros();
        for b in &self.elements {
            let coef = frobenius_dot(b, c);
            out += b * coef;
        }
        out
    }
}

fn frobenius_dot(a: &Matrix6, b: &Matrix6) -> f64 {
    let mut acc = 0.0;
    for i in 0..6 {
        for j in 0..6 {
            acc += a[(i, j)] * b[(i, j)];
        }
    }
    acc
}

fn frobenius_norm(a: &Matrix6) -> f64 {
    frobenius_dot(a, a).sqrt()
}

/// Raw constraint rows for a set of angles, without degeneracy screening.
/// Unknown ordering: entry `(m, n)` of `C` maps to column `6*m + n`.
pub fn constraint_rows(angles: &[RotationAngle]) -> DMatrix<f64> {
    let mut rows = DMatrix::zeros(36 * angles.len(), 36);
    for (a, &phi) in angles.iter().enumerate() {
        let ts = stress_rotation_matrix(phi);
        let te = strain_rotation_matrix(phi);
        for m in 0..6 {
            for n in 0..6 {
                let r = 36 * a + 6 * m + n;
                for k in 0..6 {
                    rows[(r, 6 * k + n)] += ts[(m, k)];
                    rows[(r, 6 * m + k)] -= te[(k, n)];
                }
            }
        }
    }
    rows
}

fn nullspace_of(rows: &DMatrix<f64>, tol: f64) -> Vec<Matrix6> {
    let svd = rows.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested right singular vectors");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = tol * sigma_max.max(1.0);
    let mut basis = Vec::new();
    for (i, &sv) in svd.singular_values.iter().enumerate() {
        if sv <= cutoff {
            let mut b = Matrix6::zeros();
            for m in 0..6 {
                for n in 0..6 {
                    b[(m, n)] = v_t[(i, 6 * m + n)];
                }
            }
            basis.push(b);
        }
    }
    // Columns of V beyond the number of singular values (none here: the
    // system always has >= 36 rows) would also belong to the kernel.
    basis
}

fn nullspace_dim(rows: &DMatrix<f64>, tol: f64) -> usize {
    nullspace_of(rows, tol).len()
}

fn stable_dim(angles: &[RotationAngle], tol: f64) -> usize {
    let mut probed: Vec<RotationAngle> = angles.to_vec();
    probed.push(RotationAngle(PROBE_ANGLE));
    nullspace_dim(&constraint_rows(&probed), tol)
}

/// Builds the constraint system, rejecting angle sets whose nullspace is
/// larger than the asymptotic one (detected by appending a generic probe
/// angle and watching the dimension drop).
pub fn build_constraint_system(
    angles: &[RotationAngle],
) -> Result<ConstraintSystem, InvarianceError> {
    if angles.is_empty() {
        return Err(InvarianceError::EmptyAngleSet);
    }
    let rows = constraint_rows(angles);
    let sampled = nullspace_dim(&rows, NULLSPACE_TOL_DEFAULT);
    let stable = stable_dim(angles, NULLSPACE_TOL_DEFAULT);
    if sampled != stable {
        return Err(InvarianceError::DegenerateSampling {
            sampled_dim: sampled,
            stable_dim: stable,
        });
    }
    Ok(ConstraintSystem {
        rows,
        angles: angles.to_vec(),
    })
}

/// Orthonormal nullspace basis of the constraint system at the given
/// tolerance. Re-checks sampling stability at that tolerance.
pub fn nullspace_basis(
    sys: &ConstraintSystem,
    tol: f64,
) -> Result<FamilyBasis, InvarianceError> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(InvarianceError::InvalidTolerance { tol });
    }
    let elements = nullspace_of(&sys.rows, tol);
    let stable = stable_dim(&sys.angles, tol);
    if elements.len() != stable {
        return Err(InvarianceError::DegenerateSampling {
            sampled_dim: elements.len(),
            stable_dim: stable,
        });
    }
    Ok(FamilyBasis { elements })
}

/// Distance from `c` to the family span, relative to the Frobenius norm of
/// `c`. Zero exactly when `c` lies in the invariant family.
pub fn membership_residual(c: &Matrix6, basis: &FamilyBasis) -> f64 {
    assert!(basis.dimension() > 0, "membership requires a nonempty basis");
    let norm = frobenius_norm(c);
    if norm == 0.0 {
        return 0.0;
    }
    frobenius_norm(&(c - basis.project(c))) / norm
}

/// Human-readable reconstruction of the family structure: which slots are
/// identically zero, which pairs of slots are equal up to sign, and any
/// remaining small-integer linear relation among the slot classes.
#[derive(Debug, Clone)]
pub struct FamilyDescription {
    pub dimension: usize,
    /// 1-based `(row, col)` of slots that vanish across the family.
    pub zero_slots: Vec<(usize, usize)>,
    /// `(a_row, a_col, b_row, b_col, sign)` meaning `C_a = sign * C_b`.
    pub pair_equalities: Vec<(usize, usize, usize, usize, f64)>,
    /// Rendered relations such as `C12 = C11 - 2 C33`.
    pub linear_relations: Vec<String>,
}

/// Recovers the equality list from a computed basis. `tol` bounds the
/// residual below which a linear functional is treated as vanishing on the
/// family.
pub fn describe_family(basis: &FamilyBasis, tol: f64) -> FamilyDescription {
    let project = |v: &[f64; 36]| -> f64 {
        // norm of the projection of v onto the span
        let mut acc = 0.0;
        for b in basis.elements() {
            let mut dot = 0.0;
            for m in 0..6 {
                for n in 0..6 {
                    dot += b[(m, n)] * v[6 * m + n];
                }
            }
            acc += dot * dot;
        }
        acc.sqrt()
    };
    let vanishes = |v: &[f64; 36]| -> bool {
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        project(v) <= tol * norm
    };
    let unit = |m: usize, n: usize| -> [f64; 36] {
        let mut v = [0.0; 36];
        v[6 * m + n] = 1.0;
        v
    };

    let mut zero_slots = Vec::new();
    let mut nonzero = Vec::new();
    for m in 0..6 {
        for n in 0..6 {
            if vanishes(&unit(m, n)) {
                zero_slots.push((m + 1, n + 1));
            } else {
                nonzero.push((m, n));
            }
        }
    }

    // Pair equalities C_a = s C_b, grouping slots into classes as we go.
    let mut class_of: Vec<usize> = (0..nonzero.len()).collect();
    let mut pair_equalities = Vec::new();
    for i in 0..nonzero.len() {
        for j in (i + 1)..nonzero.len() {
            if class_of[i] == class_of[j] {
                continue; // equality already implied; keep the list spanning
            }
            for sign in [1.0, -1.0] {
                let (am, an) = nonzero[i];
                let (bm, bn) = nonzero[j];
                let mut v = unit(am, an);
                v[6 * bm + bn] -= sign;
                if vanishes(&v) {
                    pair_equalities.push((am + 1, an + 1, bm + 1, bn + 1, sign));
                    let (lo, hi) = (class_of[i].min(class_of[j]), class_of[i].max(class_of[j]));
                    for c in class_of.iter_mut() {
                        if *c == hi {
                            *c = lo;
                        }
                    }
                    break;
                }
            }
        }
    }

    // Representatives of the remaining classes, then a search for one-step
    // relations C_a = s1 C_b + 2 s2 C_c among them.
    let mut reps: Vec<(usize, usize)> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (idx, &(m, n)) in nonzero.iter().enumerate() {
        if seen.insert(class_of[idx]) {
            reps.push((m, n));
        }
    }
    let mut linear_relations = Vec::new();
    let mut used_supports = std::collections::BTreeSet::new();
    for (ai, &(am, an)) in reps.iter().enumerate() {
        for (bi, &(bm, bn)) in reps.iter().enumerate() {
            if bi == ai {
                continue;
            }
            for (ci, &(cm, cn)) in reps.iter().enumerate() {
                if ci == ai || ci == bi {
                    continue;
                }
                for s1 in [1.0f64, -1.0] {
                    for s2 in [1.0f64, -1.0] {
                        let mut v = unit(am, an);
                        v[6 * bm + bn] -= s1;
                        v[6 * cm + cn] -= 2.0 * s2;
                        if vanishes(&v) {
                            let mut support = [ai, bi, ci];
                            support.sort_unstable();
                            if used_supports.insert(support) {
                                linear_relations.push(format!(
                                    "C{}{} = {}C{}{} {} 2 C{}{}",
                                    am + 1,
                                    an + 1,
                                    if s1 > 0.0 { "" } else { "-" },
                                    bm + 1,
                                    bn + 1,
                                    if s2 > 0.0 { "+" } else { "-" },
                                    cm + 1,
                                    cn + 1
                                ));
                            }
                        }
                    }
                }
            }
        }
    }

    FamilyDescription {
        dimension: basis.dimension(),
        zero_slots,
        pair_equalities,
        linear_relations,
    }
}
