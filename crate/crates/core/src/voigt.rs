//! Six-component (Voigt) packing of symmetric tensors and the 6x6
//! representations of a rotation about the x3 axis.
//!
//! The component ordering used across this crate is **not** the conventional
//! Voigt ordering. Slots are
//!
//! ```text
//! 1 -> 11,  2 -> 22,  3 -> 12,  4 -> 31,  5 -> 32,  6 -> 33
//! ```
//!
//! and the strain vector carries the engineering factor 2 on the three shear
//! slots (e3 = 2*eps12, e4 = 2*eps31, e5 = 2*eps32). Every matrix relation in
//! this crate indexes this ordering; a conversion to conventional ordering
//! exists only at the CSV export boundary (see the `verify` module) and is
//! off by default.

use nalgebra::{Matrix3, SMatrix};

/// 6x6 real matrix in the crate-wide slot ordering.
pub type Matrix6 = SMatrix<f64, 6, 6>;
/// 6-component real vector in the crate-wide slot ordering.
pub type Vector6 = nalgebra::SVector<f64, 6>;

/// Rotation angle about the x3 axis, in radians. Any real value is accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationAngle(pub f64);

impl RotationAngle {
    pub fn radians(self) -> f64 {
        self.0
    }
}

impl From<f64> for RotationAngle {
    fn from(radians: f64) -> Self {
        RotationAngle(radians)
    }
}

/// Symmetric second-rank tensor stored as its six independent components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymTensor3 {
    pub t11: f64,
    pub t22: f64,
    pub t33: f64,
    pub t12: f64,
    pub t31: f64,
    pub t32: f64,
}

impl SymTensor3 {
    pub fn new(t11: f64, t22: f64, t33: f64, t12: f64, t31: f64, t32: f64) -> Self {
        Self {
            t11,
            t22,
            t33,
            t12,
            t31,
            t32,
        }
    }

    /// Full 3x3 matrix form.
    pub fn to_matrix(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.t11, self.t12, self.t31, //
            self.t12, self.t22, self.t32, //
            self.t31, self.t32, self.t33,
        )
    }

    /// Reads the six independent components of a symmetric 3x3 matrix.
    /// The strict lower triangle is ignored.
    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        Self {
            t11: m[(0, 0)],
            t22: m[(1, 1)],
            t33: m[(2, 2)],
            t12: m[(0, 1)],
            t31: m[(0, 2)],
            t32: m[(1, 2)],
        }
    }
}

/// Stress 6-vector: `[s11, s22, s12, s31, s32, s33]`. No shear factors.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StressVec6(pub [f64; 6]);

/// Strain 6-vector: `[e11, e22, 2*e12, 2*e31, 2*e32, e33]`. Shear slots carry
/// the engineering factor 2.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StrainVec6(pub [f64; 6]);

/// Packs a symmetric stress tensor into the 6-vector ordering.
pub fn to_voigt_stress(t: &SymTensor3) -> StressVec6 {
    StressVec6([t.t11, t.t22, t.t12, t.t31, t.t32, t.t33])
}

/// Unpacks a stress 6-vector; exact inverse of [`to_voigt_stress`].
pub fn from_voigt_stress(s: &StressVec6) -> SymTensor3 {
    let v = s.0;
    SymTensor3::new(v[0], v[1], v[5], v[2], v[3], v[4])
}

/// Packs a symmetric strain tensor into the 6-vector ordering, doubling the
/// shear components.
pub fn to_voigt_strain(t: &SymTensor3) -> StrainVec6 {
    StrainVec6([
        t.t11,
        t.t22,
        2.0 * t.t12,
        2.0 * t.t31,
        2.0 * t.t32,
        t.t33,
    ])
}

/// Unpacks a strain 6-vector, halving the shear slots; exact inverse of
/// [`to_voigt_strain`] (multiplication and division by 2 are exact).
pub fn from_voigt_strain(e: &StrainVec6) -> SymTensor3 {
    let v = e.0;
    SymTensor3::new(v[0], v[1], v[5], v[2] / 2.0, v[3] / 2.0, v[4] / 2.0)
}

impl StressVec6 {
    pub fn as_vector(&self) -> Vector6 {
        Vector6::from_row_slice(&self.0)
    }
}

impl StrainVec6 {
    pub fn as_vector(&self) -> Vector6 {
        Vector6::from_row_slice(&self.0)
    }
}

/// 3x3 matrix of the right-hand rotation of axes about x3:
/// `x1' = x1 cos + x2 sin`, `x2' = -x1 sin + x2 cos`, `x3' = x3`.
pub fn axis_rotation_3x3(phi: RotationAngle) -> Matrix3<f64> {
    let (s, c) = phi.radians().sin_cos();
    Matrix3::new(
        c, s, 0.0, //
        -s, c, 0.0, //
        0.0, 0.0, 1.0,
    )
}

/// 6x6 rotation representation acting on engineering-shear strain vectors:
/// `e' = T_eps(phi) * e` reproduces the tensor transformation component-wise.
pub fn strain_rotation_matrix(phi: RotationAngle) -> Matrix6 {
    let (s, c) = phi.radians().sin_cos();
    let (c2, s2, cs) = (c * c, s * s, c * s);
    let mut t = Matrix6::zeros();
    t[(0, 0)] = c2;
    t[(0, 1)] = s2;
    t[(0, 2)] = cs;
    t[(1, 0)] = s2;
    t[(1, 1)] = c2;
    t[(1, 2)] = -cs;
    t[(2, 0)] = -2.0 * cs;
    t[(2, 1)] = 2.0 * cs;
    t[(2, 2)] = c2 - s2;
    t[(3, 3)] = c;
    t[(3, 4)] = s;
    t[(4, 3)] = -s;
    t[(4, 4)] = c;
    t[(5, 5)] = 1.0;
    t
}

/// 6x6 rotation representation acting on stress vectors (no shear factor).
/// Differs from [`strain_rotation_matrix`] exactly by conjugation with
/// `diag(1,1,2,2,2,1)`, the engineering-shear convention change.
pub fn stress_rotation_matrix(phi: RotationAngle) -> Matrix6 {
    let (s, c) = phi.radians().sin_cos();
    let (c2, s2, cs) = (c * c, s * s, c * s);
    let mut t = Matrix6::zeros();
    t[(0, 0)] = c2;
    t[(0, 1)] = s2;
    t[(0, 2)] = 2.0 * cs;
    t[(1, 0)] = s2;
    t[(1, 1)] = c2;
    t[(1, 2)] = -2.0 * cs;
    t[(2, 0)] = -cs;
    t[(2, 1)] = cs;
    t[(2, 2)] = c2 - s2;
    t[(3, 3)] = c;
    t[(3, 4)] = s;
    t[(4, 3)] = -s;
    t[(4, 4)] = c;
    t[(5, 5)] = 1.0;
    t
}

/// Induced infinity norm (maximum absolute row sum).
pub fn inf_norm(m: &Matrix6) -> f64 {
    (0..6)
        .map(|i| (0..6).map(|j| m[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}
