//! Exact polynomial solutions of the 3D equations: stress fields linear in
//! the coordinates automatically satisfy equilibrium once three coefficient
//! equalities hold, strains follow through the compliance matrix, and
//! displacements are quadratic polynomials fixed by a coefficient table plus
//! rigid-body elimination at the origin. Two boundary value problems from
//! this class are provided: pure torsion of a circular shaft and biaxial
//! plate bending.

use crate::material::ComplianceMatrix6;
use crate::voigt::{StrainVec6, StressVec6};

/// Constant volume force components (inertial forces included).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BodyForce {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
}

impl BodyForce {
    pub const ZERO: BodyForce = BodyForce {
        f1: 0.0,
        f2: 0.0,
        f3: 0.0,
    };
}

/// Coefficients of the linear stress field
/// `sigma_j = a_j x + b_j y + c_j z + p_j` (slot `j` = index + 1).
///
/// Equilibrium under the body force requires `c4 = -a1 - b3 - F1`,
/// `c5 = -a3 - b2 - F2`, `c6 = -a4 - b5 - F3`; use
/// [`complete_stress_coeffs`] to enforce them.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StressPolyCoeffs {
    pub a: [f64; 6],
    pub b: [f64; 6],
    pub c: [f64; 6],
    pub p: [f64; 6],
}

impl StressPolyCoeffs {
    pub fn stress_at(&self, x: f64, y: f64, z: f64) -> StressVec6 {
        let mut s = [0.0; 6];
        for (j, out) in s.iter_mut().enumerate() {
            *out = self.a[j] * x + self.b[j] * y + self.c[j] * z + self.p[j];
        }
        StressVec6(s)
    }

    /// The three constant equilibrium sums `div sigma + F`; all zero for a
    /// field produced by [`complete_stress_coeffs`].
    pub fn equilibrium_residual(&self, f: &BodyForce) -> [f64; 3] {
        [
            self.a[0] + self.b[2] + self.c[3] + f.f1,
            self.a[2] + self.b[1] + self.c[4] + f.f2,
            self.a[3] + self.b[4] + self.c[5] + f.f3,
        ]
    }
}

/// Coefficients of the linear strain field
/// `eps_k = f_k x + g_k y + h_k z + e_k`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StrainPolyCoeffs {
    pub f: [f64; 6],
    pub g: [f64; 6],
    pub h: [f64; 6],
    pub e: [f64; 6],
}

impl StrainPolyCoeffs {
    pub fn strain_at(&self, x: f64, y: f64, z: f64) -> StrainVec6 {
        let mut v = [0.0; 6];
        for (k, out) in v.iter_mut().enumerate() {
            *out = self.f[k] * x + self.g[k] * y + self.h[k] * z + self.e[k];
        }
        StrainVec6(v)
    }
}

/// Quadratic displacement polynomial
///
/// ```text
/// w_i = (quad[i][0] x^2 + quad[i][1] y^2 + quad[i][2] z^2) / 2
///     + quad[i][3] xy + quad[i][4] xz + quad[i][5] yz
///     + lin[i][0] x + lin[i][1] y + lin[i][2] z
/// ```
///
/// Rigid-body motion is eliminated at the origin: the constant terms are
/// zero (not stored), `lin[0][2] = lin[1][2] = 0` and `lin[1][0] = lin[0][1]`
/// after construction by [`displacement_coeffs`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DisplacementPoly {
    pub quad: [[f64; 6]; 3],
    pub lin: [[f64; 3]; 3],
}

impl DisplacementPoly {
    pub fn displacement_at(&self, x: f64, y: f64, z: f64) -> [f64; 3] {
        let mut w = [0.0; 3];
        for (i, out) in w.iter_mut().enumerate() {
            let q = &self.quad[i];
            let l = &self.lin[i];
            *out = 0.5 * (q[0] * x * x + q[1] * y * y + q[2] * z * z)
                + q[3] * x * y
                + q[4] * x * z
                + q[5] * y * z
                + l[0] * x
                + l[1] * y
                + l[2] * z;
        }
        w
    }
}

/// Fills in `c4, c5, c6` from the three equilibrium equalities. The inputs
/// are all `a_j`, `b_j`, `p_j` plus `c_j` for slots 1..3; the resulting
/// field satisfies the equilibrium equations identically.
pub fn complete_stress_coeffs(
    a: [f64; 6],
    b: [f64; 6],
    c_first3: [f64; 3],
    p: [f64; 6],
    f: &BodyForce,
) -> StressPolyCoeffs {
    let c = [
        c_first3[0],
        c_first3[1],
        c_first3[2],
        -a[0] - b[2] - f.f1,
        -a[2] - b[1] - f.f2,
        -a[3] - b[4] - f.f3,
    ];
    StressPolyCoeffs { a, b, c, p }
}

/// Strain coefficients from stress coefficients: `f = D a`, `g = D b`,
/// `h = D c`, `e = D p`, componentwise over the coefficient 6-vectors.
pub fn strain_coeffs(d: &ComplianceMatrix6, s: &StressPolyCoeffs) -> StrainPolyCoeffs {
    let apply = |v: &[f64; 6]| -> [f64; 6] {
        let mut out = [0.0; 6];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, &vj) in v.iter().enumerate() {
                acc += d.at(k + 1, j + 1) * vj;
            }
            *slot = acc;
        }
        out
    };
    StrainPolyCoeffs {
        f: apply(&s.a),
        g: apply(&s.b),
        h: apply(&s.c),
        e: apply(&s.p),
    }
}

/// Assigns all 30 polynomial constants from the strain coefficients and
/// eliminates rigid-body displacement and rotation at the origin
/// (`w_i(0) = 0`, `w1,3 = w2,3 = 0`, `w2,1 - w1,2 = 0`). Linear strain
/// fields satisfy compatibility identically, so any [`StrainPolyCoeffs`]
/// is admissible.
pub fn displacement_coeffs(sc: &StrainPolyCoeffs) -> DisplacementPoly {
    let (f, g, h, e) = (&sc.f, &sc.g, &sc.h, &sc.e);
    let quad = [
        [
            f[0],                              // a11
            g[2] - f[1],                       // a12
            h[3] - f[5],                       // a13
            g[0],                              // a14
            h[0],                              // a15
            0.5 * (h[2] + g[3] - f[4]),        // a16
        ],
        [
            f[2] - g[0],                       // a21
            g[1],                              // a22
            h[4] - g[5],                       // a23
            f[1],                              // a24
            0.5 * (f[4] + h[2] - g[3]),        // a25
            h[1],                              // a26
        ],
        [
            f[3] - h[0],                       // a31
            g[4] - h[1],                       // a32
            h[5],                              // a33
            0.5 * (f[4] - h[2] + g[3]),        // a34
            f[5],                              // a35
            g[5],                              // a36
        ],
    ];
    let lin = [
        [e[0], 0.5 * e[2], 0.0],
        [0.5 * e[2], e[1], 0.0],
        [e[3], e[4], e[5]],
    ];
    DisplacementPoly { quad, lin }
}

/// Analytic differentiation of the displacement polynomial back to strain
/// coefficients (the kinematic relations, coefficient by coefficient).
pub fn strain_coeffs_of_displacement(dp: &DisplacementPoly) -> StrainPolyCoeffs {
    let q = &dp.quad;
    let l = &dp.lin;
    StrainPolyCoeffs {
        f: [
            q[0][0],
            q[1][3],
            q[0][3] + q[1][0],
            q[0][4] + q[2][0],
            q[1][4] + q[2][3],
            q[2][4],
        ],
        g: [
            q[0][3],
            q[1][1],
            q[0][1] + q[1][3],
            q[0][5] + q[2][3],
            q[1][5] + q[2][1],
            q[2][5],
        ],
        h: [
            q[0][4],
            q[1][5],
            q[0][5] + q[1][4],
            q[0][2] + q[2][4],
            q[1][2] + q[2][5],
            q[2][2],
        ],
        e: [
            l[0][0],
            l[1][1],
            l[0][1] + l[1][0],
            l[0][2] + l[2][0],
            l[1][2] + l[2][1],
            l[2][2],
        ],
    }
}

/// Pure torsion of a circular shaft of radius `R` and length `L`, twisted
/// by boundary tangential stress `tau` at the contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorsionProblem {
    pub tau: f64,
    pub radius: f64,
    pub length: f64,
}

impl TorsionProblem {
    pub fn new(tau: f64, radius: f64, length: f64) -> Self {
        assert!(radius > 0.0, "shaft radius must be positive, got {radius}");
        assert!(length > 0.0, "shaft length must be positive, got {length}");
        Self {
            tau,
            radius,
            length,
        }
    }
}

/// Full torsion field bundle.
#[derive(Debug, Clone)]
pub struct TorsionSolution {
    pub problem: TorsionProblem,
    pub stress: StressPolyCoeffs,
    pub strain: StrainPolyCoeffs,
    pub displacement: DisplacementPoly,
    d44: f64,
    d45: f64,
}

impl TorsionSolution {
    /// The stress-gradient constant `a5 = tau / R`.
    pub fn shear_coefficient(&self) -> f64 {
        self.problem.tau / self.problem.radius
    }

    /// Torsion angle per unit shaft length, `omega = D44 a5`.
    pub fn twist_rate(&self) -> f64 {
        self.d44 * self.shear_coefficient()
    }

    /// Cylindrical displacement `(w_r, w_phi, w_3)` at radius `r`, height
    /// `z`: `w_r = 0`, `w_phi = D44 a5 r z`, `2 w_3 = D45 a5 r^2`. The axial
    /// term is the deplanation, absent classically (`D45 = 0`).
    pub fn displacement_cylindrical(&self, r: f64, z: f64) -> [f64; 3] {
        let a5 = self.shear_coefficient();
        [0.0, self.d44 * a5 * r * z, 0.5 * self.d45 * a5 * r * r]
    }

    /// Cross-section tangential stress `sigma_zphi = a5 r`; equals `tau` at
    /// the contour `r = R`.
    pub fn cross_section_shear(&self, r: f64) -> f64 {
        self.shear_coefficient() * r
    }

    pub fn stress_at(&self, x: f64, y: f64, z: f64) -> StressVec6 {
        self.stress.stress_at(x, y, z)
    }

    pub fn strain_at(&self, x: f64, y: f64, z: f64) -> StrainVec6 {
        self.strain.strain_at(x, y, z)
    }

    pub fn displacement_at(&self, x: f64, y: f64, z: f64) -> [f64; 3] {
        self.displacement.displacement_at(x, y, z)
    }
}

/// Solves the torsion problem: `sigma4 = -a5 y`, `sigma5 = a5 x`, all other
/// stresses zero. The lateral surface is traction free and the ends carry
/// the tangential stress `tau r / R`.
pub fn solve_torsion(tp: &TorsionProblem, d: &ComplianceMatrix6) -> TorsionSolution {
    let a5 = tp.tau / tp.radius;
    let mut a = [0.0; 6];
    let mut b = [0.0; 6];
    b[3] = -a5; // sigma4 = -a5 y
    a[4] = a5; // sigma5 = a5 x
    let stress = complete_stress_coeffs(a, b, [0.0; 3], [0.0; 6], &BodyForce::ZERO);
    let strain = strain_coeffs(d, &stress);
    let displacement = displacement_coeffs(&strain);
    TorsionSolution {
        problem: *tp,
        stress,
        strain,
        displacement,
        d44: d.at(4, 4),
        d45: d.at(4, 5),
    }
}

/// Rectangular plate of half thickness `h` bent by `sigma1 = c1 z`,
/// `sigma2 = c2 z`. The in-plane half extents `a`, `b` do not enter the
/// field formulas (the solution is exact for every rectangle); they are
/// kept for grid and export bounds only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateBendProblem {
    pub c1: f64,
    pub c2: f64,
    pub h: f64,
    pub a: f64,
    pub b: f64,
}

impl PlateBendProblem {
    pub fn new(c1: f64, c2: f64, h: f64, a: f64, b: f64) -> Self {
        assert!(h > 0.0, "plate half thickness must be positive, got {h}");
        assert!(a > 0.0 && b > 0.0, "plate half extents must be positive");
        Self { c1, c2, h, a, b }
    }
}

/// Quadratic-term constants of the plate solution, named after the
/// displacement table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateAlphas {
    pub a15: f64,
    pub a16: f64,
    pub a25: f64,
    pub a26: f64,
    pub a31: f64,
    pub a32: f64,
    pub a33: f64,
    pub a34: f64,
}

/// Plate bending field bundle.
#[derive(Debug, Clone)]
pub struct PlateBendSolution {
    pub problem: PlateBendProblem,
    pub stress: StressPolyCoeffs,
    pub strain: StrainPolyCoeffs,
    pub displacement: DisplacementPoly,
}

impl PlateBendSolution {
    pub fn alphas(&self) -> PlateAlphas {
        let q = &self.displacement.quad;
        PlateAlphas {
            a15: q[0][4],
            a16: q[0][5],
            a25: q[1][4],
            a26: q[1][5],
            a31: q[2][0],
            a32: q[2][1],
            a33: q[2][2],
            a34: q[2][3],
        }
    }

    /// Deflection of the middle plane:
    /// `2 w3 = a31 x^2 + a32 y^2 + 2 a34 xy` at `z = 0`. A nonzero `a34`
    /// rotates the asymptotes of the hyperbolic level lines.
    pub fn mid_surface_deflection(&self, x: f64, y: f64) -> f64 {
        let al = self.alphas();
        0.5 * (al.a31 * x * x + al.a32 * y * y) + al.a34 * x * y
    }

    pub fn stress_at(&self, x: f64, y: f64, z: f64) -> StressVec6 {
        self.stress.stress_at(x, y, z)
    }

    pub fn strain_at(&self, x: f64, y: f64, z: f64) -> StrainVec6 {
        self.strain.strain_at(x, y, z)
    }

    pub fn displacement_at(&self, x: f64, y: f64, z: f64) -> [f64; 3] {
        self.displacement.displacement_at(x, y, z)
    }
}

/// Solves the biaxial plate bending problem through the polynomial
/// pipeline. In-plane displacements are `w1 = z (a15 x + a16 y)`,
/// `w2 = z (a25 x + a26 y)`; the deflection additionally carries the
/// through-thickness quadratic `a33 z^2 / 2` with `a33 = D61 c1 + D62 c2`,
/// required for the kinematic chain to close exactly.
pub fn solve_plate_bending(pp: &PlateBendProblem, d: &ComplianceMatrix6) -> PlateBendSolution {
    let stress = complete_stress_coeffs(
        [0.0; 6],
        [0.0; 6],
        [pp.c1, pp.c2, 0.0],
        [0.0; 6],
        &BodyForce::ZERO,
    );
    let strain = strain_coeffs(d, &stress);
    let displacement = displacement_coeffs(&strain);
    PlateBendSolution {
        problem: *pp,
        stress,
        strain,
        displacement,
    }
}
