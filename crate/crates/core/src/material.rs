//! Asymmetric stiffness matrices, their structured inverses, and the plane
//! constitutive relations.
//!
//! The stiffness family has eight independent constants
//! `C11, C13, C16, C33, C44, C45, C61, C66` with `C12 = C11 - 2*C33` and the
//! fixed sign/zero pattern
//!
//! ```text
//!  C11   C12   C13   0     0     C16
//!  C12   C11  -C13   0     0     C16
//! -C13   C13   C33   0     0     0
//!  0     0     0     C44   C45   0
//!  0     0     0    -C45   C44   0
//!  C61   C61   0     0     0     C66
//! ```
//!
//! which commutes with the rotation representations of the `voigt` module
//! for every angle. `C45 = C13 = 0` together with `C61 = C16` recovers the
//! classical transversely isotropic (hexagonal) matrix.

use thiserror::Error;

use crate::voigt::{
    inf_norm, stress_rotation_matrix, strain_rotation_matrix, Matrix6, RotationAngle, StrainVec6,
    StressVec6,
};

#[derive(Debug, Error)]
pub enum MaterialError {
    #[error("material parameter {name} = {value} violates {requirement}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("stiffness block is numerically singular (condition estimate {cond:.3e} > 1e12)")]
    SingularMaterial { cond: f64 },
    #[error("plane reduction produced invalid parameters (lambda0 = {lambda0}, mu = {mu}; both must be > 0)")]
    InvalidPlaneMaterial { lambda0: f64, mu: f64 },
}

/// Condition-number cutoff beyond which a stiffness block is treated as
/// singular; double precision retains about four digits there.
pub const SINGULARITY_COND_LIMIT: f64 = 1e12;

/// The eight independent constants of the stiffness family.
///
/// `C11, C33, C44, C66` must be positive; `C13` and `C45` may take either
/// sign; `C16` and `C61` are unrestricted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams3D {
    pub c11: f64,
    pub c13: f64,
    pub c16: f64,
    pub c33: f64,
    pub c44: f64,
    pub c45: f64,
    pub c61: f64,
    pub c66: f64,
}

impl MaterialParams3D {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        c11: f64,
        c13: f64,
        c16: f64,
        c33: f64,
        c44: f64,
        c45: f64,
        c61: f64,
        c66: f64,
    ) -> Result<Self, MaterialError> {
        for (name, value) in [("C11", c11), ("C33", c33), ("C44", c44), ("C66", c66)] {
            if value <= 0.0 || value.is_nan() {
                return Err(MaterialError::InvalidParameter {
                    name,
                    value,
                    requirement: "> 0",
                });
            }
        }
        for (name, value) in [("C13", c13), ("C16", c16), ("C45", c45), ("C61", c61)] {
            if !value.is_finite() {
                return Err(MaterialError::InvalidParameter {
                    name,
                    value,
                    requirement: "finite",
                });
            }
        }
        Ok(Self {
            c11,
            c13,
            c16,
            c33,
            c44,
            c45,
            c61,
            c66,
        })
    }

    /// Classical isotropic instance with Lame parameters `lambda`, `mu`.
    pub fn isotropic(lambda: f64, mu: f64) -> Result<Self, MaterialError> {
        Self::new(lambda + 2.0 * mu, 0.0, lambda, mu, mu, 0.0, lambda, lambda + 2.0 * mu)
    }

    pub fn as_array(&self) -> [f64; 8] {
        [
            self.c11, self.c13, self.c16, self.c33, self.c44, self.c45, self.c61, self.c66,
        ]
    }
}

/// Stiffness matrix with the family pattern; produced by [`build_c`].
#[derive(Debug, Clone, PartialEq)]
pub struct ElasticityMatrix6(Matrix6);

/// Compliance matrix `D = C^-1`; produced by [`invert_to_d`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplianceMatrix6(Matrix6);

impl ElasticityMatrix6 {
    pub fn matrix(&self) -> &Matrix6 {
        &self.0
    }

    /// Entry with 1-based indices matching the `C_MN` notation.
    pub fn at(&self, m: usize, n: usize) -> f64 {
        self.0[(m - 1, n - 1)]
    }
}

impl ComplianceMatrix6 {
    pub fn matrix(&self) -> &Matrix6 {
        &self.0
    }

    /// Entry with 1-based indices matching the `D_MN` notation.
    pub fn at(&self, m: usize, n: usize) -> f64 {
        self.0[(m - 1, n - 1)]
    }
}

/// Assembles the family pattern from raw constants, without validation.
/// Order: `[C11, C13, C16, C33, C44, C45, C61, C66]`.
pub fn family_matrix(c: &[f64; 8]) -> Matrix6 {
    let [c11, c13, c16, c33, c44, c45, c61, c66] = *c;
    let c12 = c11 - 2.0 * c33;
    let mut m = Matrix6::zeros();
    m[(0, 0)] = c11;
    m[(0, 1)] = c12;
    m[(0, 2)] = c13;
    m[(0, 5)] = c16;
    m[(1, 0)] = c12;
    m[(1, 1)] = c11;
    m[(1, 2)] = -c13;
    m[(1, 5)] = c16;
    m[(2, 0)] = -c13;
    m[(2, 1)] = c13;
    m[(2, 2)] = c33;
    m[(3, 3)] = c44;
    m[(3, 4)] = c45;
    m[(4, 3)] = -c45;
    m[(4, 4)] = c44;
    m[(5, 0)] = c61;
    m[(5, 1)] = c61;
    m[(5, 5)] = c66;
    m
}

/// Reads the eight family constants back out of a matrix (pattern slots
/// only; no check that the matrix actually lies in the family).
pub fn family_components(m: &Matrix6) -> [f64; 8] {
    [
        m[(0, 0)],
        m[(0, 2)],
        m[(0, 5)],
        m[(2, 2)],
        m[(3, 3)],
        m[(3, 4)],
        m[(5, 0)],
        m[(5, 5)],
    ]
}

/// Builds the stiffness matrix from validated parameters. The result has
/// exactly eight degrees of freedom and satisfies every structural equality
/// of the family.
pub fn build_c(p: &MaterialParams3D) -> ElasticityMatrix6 {
    ElasticityMatrix6(family_matrix(&p.as_array()))
}

/// Maximum over the given angles of `|T_sigma(phi) C - C T_eps(phi)|_inf`
/// relative to `|C|_inf`. Zero (to rounding) exactly when the constitutive
/// relation commutes with every sampled rotation.
pub fn check_rotational_invariance(c: &Matrix6, angles: &[RotationAngle]) -> f64 {
    let scale = inf_norm(c);
    if scale == 0.0 {
        return 0.0;
    }
    angles
        .iter()
        .map(|&phi| {
            let dev = stress_rotation_matrix(phi) * c - c * strain_rotation_matrix(phi);
            inf_norm(&dev) / scale
        })
        .fold(0.0, f64::max)
}

fn inf_norm_2x2(m: [[f64; 2]; 2]) -> f64 {
    let r0 = m[0][0].abs() + m[0][1].abs();
    let r1 = m[1][0].abs() + m[1][1].abs();
    r0.max(r1)
}

fn inf_norm_4x4(rows: &[[f64; 4]; 4]) -> f64 {
    rows.iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Inverts the stiffness matrix blockwise: the `{4,5}` skew block in closed
/// form and the `{1,2,3,6}` block through its symmetric/antisymmetric
/// 2x2 decomposition. The eighteen zero slots of the compliance pattern are
/// zero exactly, not merely to rounding, and the family equalities
/// (`D22 = D11`, `D23 = -D13`, `D55 = D44`, ...) hold bit for bit.
pub fn invert_to_d(c: &ElasticityMatrix6) -> Result<ComplianceMatrix6, MaterialError> {
    let [c11, c13, c16, c33, c44, c45, c61, c66] = family_components(&c.0);
    let c12 = c.at(1, 2);

    // Under the swap 1<->2 (with sign flip on slot 3) the {1,2,3,6} block
    // decouples into a symmetric pair (x1+x2, x6) and an antisymmetric pair
    // (x1-x2, x3).
    let det_sym = (c11 + c12) * c66 - 2.0 * c16 * c61;
    let det_skw = (c11 - c12) * c33 + 2.0 * c13 * c13;
    let det_45 = c44 * c44 + c45 * c45;
    if det_sym == 0.0 || det_skw == 0.0 || det_45 == 0.0 {
        return Err(MaterialError::SingularMaterial { cond: f64::INFINITY });
    }

    let half_sym_11 = c66 / det_sym; // coefficient of (y1+y2) in a
    let d16 = -c16 / det_sym;
    let d61 = -c61 / det_sym;
    let d66 = (c11 + c12) / det_sym;

    let half_skw_11 = c33 / det_skw; // coefficient of (y1-y2) in b
    let d13 = -c13 / det_skw;
    let d33 = (c11 - c12) / det_skw;

    let d11 = 0.5 * (half_sym_11 + half_skw_11);
    let d12 = 0.5 * (half_sym_11 - half_skw_11);

    let d44 = c44 / det_45;
    let d45 = -c45 / det_45;

    let mut d = Matrix6::zeros();
    d[(0, 0)] = d11;
    d[(0, 1)] = d12;
    d[(0, 2)] = d13;
    d[(0, 5)] = d16;
    d[(1, 0)] = d12;
    d[(1, 1)] = d11;
    d[(1, 2)] = -d13;
    d[(1, 5)] = d16;
    d[(2, 0)] = -d13;
    d[(2, 1)] = d13;
    d[(2, 2)] = d33;
    d[(3, 3)] = d44;
    d[(3, 4)] = d45;
    d[(4, 3)] = -d45;
    d[(4, 4)] = d44;
    d[(5, 0)] = d61;
    d[(5, 1)] = d61;
    d[(5, 5)] = d66;

    if !d.iter().all(|x| x.is_finite()) {
        return Err(MaterialError::SingularMaterial { cond: f64::INFINITY });
    }

    let block4 = |m: &Matrix6| {
        let idx = [0usize, 1, 2, 5];
        let mut out = [[0.0; 4]; 4];
        for (i, &r) in idx.iter().enumerate() {
            for (j, &cc) in idx.iter().enumerate() {
                out[i][j] = m[(r, cc)];
            }
        }
        out
    };
    let cond4 = inf_norm_4x4(&block4(&c.0)) * inf_norm_4x4(&block4(&d));
    let cond2 = inf_norm_2x2([[c44, c45], [-c45, c44]]) * inf_norm_2x2([[d44, d45], [-d45, d44]]);
    let cond = cond4.max(cond2);
    if cond > SINGULARITY_COND_LIMIT || cond.is_nan() {
        return Err(MaterialError::SingularMaterial { cond });
    }

    Ok(ComplianceMatrix6(d))
}

/// `e = D s`. Through the compliance pattern, `e3` depends only on
/// `s1, s2, s3`, and `e4, e5` only on `s4, s5`.
pub fn strain_from_stress_3d(d: &ComplianceMatrix6, s: &StressVec6) -> StrainVec6 {
    let v = d.0 * s.as_vector();
    StrainVec6([v[0], v[1], v[2], v[3], v[4], v[5]])
}

/// Result of Sylvester's criterion applied to the symmetric part of a
/// stiffness matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SylvesterReport {
    /// Leading principal minors of `(C + C^T)/2`, orders 1 through 6.
    pub minors: [f64; 6],
    /// True when every minor is strictly positive (the quadratic dissipative
    /// form is positive definite).
    pub positive_definite: bool,
}

/// Computes the six leading principal minors of the symmetric part
/// `(C + C^T)/2` and reports whether all are positive. The claim is checked,
/// never assumed: the admissible parameter region is whatever this returns.
pub fn sylvester_check(c: &Matrix6) -> SylvesterReport {
    let s = (c + c.transpose()) * 0.5;
    let mut minors = [0.0; 6];
    for k in 1..=6 {
        let sub = s.view((0, 0), (k, k)).clone_owned();
        minors[k - 1] = sub.determinant();
    }
    SylvesterReport {
        minors,
        positive_definite: minors.iter().all(|&m| m > 0.0),
    }
}

/// Plane-deformation kinetic parameters. `kappa0^2 = mu^2 + mu0^2` and the
/// complex modulus `kappa = mu + i*mu0` are derived on read; `lambda0, mu0,
/// mu` are the single source of truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneMaterial {
    pub lambda0: f64,
    pub mu0: f64,
    pub mu: f64,
}

impl PlaneMaterial {
    pub fn new(lambda0: f64, mu0: f64, mu: f64) -> Result<Self, MaterialError> {
        if lambda0 <= 0.0 || mu <= 0.0 || lambda0.is_nan() || mu.is_nan() {
            return Err(MaterialError::InvalidPlaneMaterial { lambda0, mu });
        }
        if !mu0.is_finite() {
            return Err(MaterialError::InvalidParameter {
                name: "mu0",
                value: mu0,
                requirement: "finite",
            });
        }
        Ok(Self { lambda0, mu0, mu })
    }

    /// Squared magnitude of the complex shear modulus.
    pub fn kappa0_sq(&self) -> f64 {
        self.mu * self.mu + self.mu0 * self.mu0
    }

    /// Complex shear modulus `mu + i*mu0`.
    pub fn kappa(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.mu, self.mu0)
    }

    /// Noncoaxiality measure `mu0/mu` of the stress and strain deviators.
    pub fn noncoaxiality(&self) -> f64 {
        self.mu0 / self.mu
    }
}

/// 3x3 plane-deformation stiffness, rows/columns `{1, 2, 3}` of the 6x6.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneStiffness3(pub nalgebra::Matrix3<f64>);

/// Extracts the plane problem from a 3D stiffness: the 3x3 block `A` plus
/// the kinetic parameters `lambda0 = C11 - C33`, `mu = C33`, `mu0 = C13`.
pub fn plane_reduce(
    c: &ElasticityMatrix6,
) -> Result<(PlaneStiffness3, PlaneMaterial), MaterialError> {
    let a = nalgebra::Matrix3::new(
        c.at(1, 1),
        c.at(1, 2),
        c.at(1, 3),
        c.at(2, 1),
        c.at(2, 2),
        c.at(2, 3),
        c.at(3, 1),
        c.at(3, 2),
        c.at(3, 3),
    );
    let lambda0 = c.at(1, 1) - c.at(3, 3);
    let mu = c.at(3, 3);
    let mu0 = c.at(1, 3);
    let m = PlaneMaterial::new(lambda0, mu0, mu)?;
    Ok((PlaneStiffness3(a), m))
}

/// 2x2 displacement gradient: `du_dx = u,x`, `du_dy = u,y`, `dv_dx = v,x`,
/// `dv_dy = v,y`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlaneGradient {
    pub du_dx: f64,
    pub du_dy: f64,
    pub dv_dx: f64,
    pub dv_dy: f64,
}

/// Plane constitutive law `T = I lambda0 div w + 2 M gamma` with
/// `M = [[mu, mu0], [-mu0, mu]]` acting on the strain deviator. Returns
/// `[sigma11, sigma22, sigma12]`; the tensor is symmetric by construction.
pub fn stress_from_strain_2d(m: &PlaneMaterial, grad: &PlaneGradient) -> [f64; 3] {
    let div = grad.du_dx + grad.dv_dy;
    let dev = grad.du_dx - grad.dv_dy; // 2*gamma11 = -2*gamma22
    let gam = grad.du_dy + grad.dv_dx; // 2*gamma12
    let s11 = m.lambda0 * div + m.mu * dev + m.mu0 * gam;
    let s22 = m.lambda0 * div - m.mu * dev - m.mu0 * gam;
    let s12 = m.mu * gam - m.mu0 * dev;
    [s11, s22, s12]
}

/// Inverse plane relations: returns `(u,x ; v,y ; u,y + v,x)` with
/// `kappa0^2 = mu^2 + mu0^2`. Composes with [`stress_from_strain_2d`] to the
/// identity on `(div, deviator)` data.
pub fn strain_from_stress_2d(m: &PlaneMaterial, s11: f64, s22: f64, s12: f64) -> [f64; 3] {
    let k0sq = m.kappa0_sq();
    let sum = s11 + s22;
    let dif = s11 - s22;
    let u_x = 0.25 * (sum / m.lambda0 + m.mu / k0sq * dif - 2.0 * m.mu0 / k0sq * s12);
    let v_y = 0.25 * (sum / m.lambda0 - m.mu / k0sq * dif + 2.0 * m.mu0 / k0sq * s12);
    let shear = 0.5 / k0sq * (m.mu0 * dif + 2.0 * m.mu * s12);
    [u_x, v_y, shear]
}
