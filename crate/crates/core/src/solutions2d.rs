//! Plane deformation through complex potentials.
//!
//! Displacements come from the Kolosov/Muskhelishvili-type representation
//! with complex shear modulus `kappa = mu + i*mu0`:
//!
//! ```text
//! 2 kappa0^2 (u + iv) = (2 kappa0^2 / lambda0 + conj(kappa)) phi(z)
//!                       - kappa z conj(phi'(z)) - kappa conj(psi(z))
//! ```
//!
//! which reduces to the classical plane-strain formula when `mu0 = 0`,
//! `lambda0 = lambda + mu`. Stresses use the standard combinations
//! `s11 + s22 = 4 Re phi'` and `s22 - s11 + 2i s12 = 2 [conj(z) phi'' + psi']`.
//!
//! Potentials are finite Laurent series, which cover every benchmark here
//! exactly and differentiate without quadrature. Rigid-motion integration
//! constants are dropped throughout.

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::material::{strain_from_stress_2d, PlaneMaterial};

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("field evaluated outside its domain of analyticity at ({x}, {y})")]
    DomainViolation { x: f64, y: f64 },
    #[error("classical comparison requires mu0 = 0, got mu0 = {mu0}")]
    RequiresClassical { mu0: f64 },
}

/// Finite Laurent series `f(z) = sum c_n z^n` with integer exponents of
/// either sign. Zero coefficients are not stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPotential {
    terms: BTreeMap<i32, Complex64>,
}

impl LaurentPotential {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: &[(i32, Complex64)]) -> Self {
        let mut map: BTreeMap<i32, Complex64> = BTreeMap::new();
        for &(n, c) in terms {
            *map.entry(n).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| c.re != 0.0 || c.im != 0.0);
        Self { terms: map }
    }

    pub fn from_real_terms(terms: &[(i32, f64)]) -> Self {
        Self::from_terms(
            &terms
                .iter()
                .map(|&(n, c)| (n, Complex64::new(c, 0.0)))
                .collect::<Vec<_>>(),
        )
    }

    pub fn coeff(&self, n: i32) -> Complex64 {
        self.terms
            .get(&n)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.keys().next().is_some_and(|&n| n < 0)
    }

    /// Term-wise derivative; constants vanish.
    pub fn derivative(&self) -> Self {
        let mut map = BTreeMap::new();
        for (&n, &c) in &self.terms {
            if n != 0 {
                map.insert(n - 1, c * n as f64);
            }
        }
        Self { terms: map }
    }

    /// Evaluates the series. The origin is excluded once any negative
    /// exponent is present.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, FieldError> {
        if z.re == 0.0 && z.im == 0.0 && self.has_negative_exponents() {
            return Err(FieldError::DomainViolation { x: z.re, y: z.im });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (&n, &c) in &self.terms {
            acc += c * z.powi(n);
        }
        Ok(acc)
    }
}

/// The pair `(phi, psi)` generating one plane field.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PotentialPair {
    pub phi: LaurentPotential,
    pub psi: LaurentPotential,
}

impl PotentialPair {
    pub fn has_negative_exponents(&self) -> bool {
        self.phi.has_negative_exponents() || self.psi.has_negative_exponents()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CartesianDisplacement {
    pub u: f64,
    pub v: f64,
}

impl CartesianDisplacement {
    /// `u_r + i u_theta = e^{-i theta} (u + i v)`.
    pub fn to_polar(&self, theta: f64) -> PolarDisplacement {
        let rot = Complex64::from_polar(1.0, -theta) * Complex64::new(self.u, self.v);
        PolarDisplacement {
            u_r: rot.re,
            u_theta: rot.im,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PolarDisplacement {
    pub u_r: f64,
    pub u_theta: f64,
}

/// Cartesian plane stress components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlaneStressState {
    pub s11: f64,
    pub s22: f64,
    pub s12: f64,
}

impl PlaneStressState {
    /// Standard tensor rotation to polar components at angle `theta`.
    pub fn to_polar(&self, theta: f64) -> PolarStressState {
        let (s, c) = theta.sin_cos();
        let (c2, s2, cs) = (c * c, s * s, c * s);
        PolarStressState {
            srr: self.s11 * c2 + self.s22 * s2 + 2.0 * self.s12 * cs,
            stt: self.s11 * s2 + self.s22 * c2 - 2.0 * self.s12 * cs,
            srt: (self.s22 - self.s11) * cs + self.s12 * (c2 - s2),
        }
    }
}

/// Polar plane stress components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PolarStressState {
    pub srr: f64,
    pub stt: f64,
    pub srt: f64,
}

fn check_point(pp: &PotentialPair, z: Complex64) -> Result<(), FieldError> {
    if z.re == 0.0 && z.im == 0.0 && pp.has_negative_exponents() {
        return Err(FieldError::DomainViolation { x: z.re, y: z.im });
    }
    Ok(())
}

/// Displacement representation evaluated at a Cartesian point.
pub fn displacement_cartesian(
    pp: &PotentialPair,
    m: &PlaneMaterial,
    z: Complex64,
) -> Result<CartesianDisplacement, FieldError> {
    check_point(pp, z)?;
    let k0sq = m.kappa0_sq();
    let kappa = m.kappa();
    let coeff = Complex64::new(2.0 * k0sq / m.lambda0, 0.0) + kappa.conj();
    let phi = pp.phi.eval(z)?;
    let dphi = pp.phi.derivative().eval(z)?;
    let psi = pp.psi.eval(z)?;
    let g = coeff * phi - kappa * z * dphi.conj() - kappa * psi.conj();
    let uv = g / (2.0 * k0sq);
    Ok(CartesianDisplacement { u: uv.re, v: uv.im })
}

/// Polar form of the displacement representation at `(r, theta)`.
pub fn displacement_polar(
    pp: &PotentialPair,
    m: &PlaneMaterial,
    r: f64,
    theta: f64,
) -> Result<PolarDisplacement, FieldError> {
    if r < 0.0 || (r == 0.0 && pp.has_negative_exponents()) {
        return Err(FieldError::DomainViolation {
            x: r * theta.cos(),
            y: r * theta.sin(),
        });
    }
    let z = Complex64::from_polar(r, theta);
    let cart = displacement_cartesian(pp, m, z)?;
    Ok(cart.to_polar(theta))
}

/// Cartesian stresses from the potentials (material independent).
pub fn stress_cartesian(pp: &PotentialPair, z: Complex64) -> Result<PlaneStressState, FieldError> {
    check_point(pp, z)?;
    let dphi = pp.phi.derivative().eval(z)?;
    let ddphi = pp.phi.derivative().derivative().eval(z)?;
    let dpsi = pp.psi.derivative().eval(z)?;
    let trace = 4.0 * dphi.re; // s11 + s22
    let t = z.conj() * ddphi + dpsi; // (s22 - s11 + 2i s12) / 2
    Ok(PlaneStressState {
        s11: 0.5 * (trace - 2.0 * t.re),
        s22: 0.5 * (trace + 2.0 * t.re),
        s12: t.im,
    })
}

/// Polar stresses straight from the potential combinations (avoids the
/// intermediate Cartesian rotation).
pub fn stress_polar(pp: &PotentialPair, r: f64, theta: f64) -> Result<PolarStressState, FieldError> {
    if r < 0.0 || (r == 0.0 && pp.has_negative_exponents()) {
        return Err(FieldError::DomainViolation {
            x: r * theta.cos(),
            y: r * theta.sin(),
        });
    }
    let z = Complex64::from_polar(r, theta);
    let dphi = pp.phi.derivative().eval(z)?;
    let ddphi = pp.phi.derivative().derivative().eval(z)?;
    let dpsi = pp.psi.derivative().eval(z)?;
    let trace = 4.0 * dphi.re;
    let t = Complex64::from_polar(1.0, 2.0 * theta) * (z.conj() * ddphi + dpsi);
    Ok(PolarStressState {
        srr: 0.5 * (trace - 2.0 * t.re),
        stt: 0.5 * (trace + 2.0 * t.re),
        srt: t.im,
    })
}

/// Which benchmark a [`PlaneSolution`] solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlaneBenchmark {
    /// Solid circular washer under uniform pressure `p` (compression for
    /// `p > 0`): `sigma_rr = sigma_tt = -p` everywhere.
    Washer { pressure: f64 },
    /// Infinite plate with a traction-free circular hole of radius `R`
    /// under biaxial tension `p` at infinity.
    BiaxialHole { pressure: f64, radius: f64 },
    /// Infinite plate with a traction-free circular hole of radius `R`
    /// under uniaxial tension `p` along x at infinity.
    UniaxialHole { tension: f64, radius: f64 },
}

impl PlaneBenchmark {
    pub fn load(&self) -> f64 {
        match *self {
            PlaneBenchmark::Washer { pressure } => pressure,
            PlaneBenchmark::BiaxialHole { pressure, .. } => pressure,
            PlaneBenchmark::UniaxialHole { tension, .. } => tension,
        }
    }

    pub fn hole_radius(&self) -> Option<f64> {
        match *self {
            PlaneBenchmark::Washer { .. } => None,
            PlaneBenchmark::BiaxialHole { radius, .. }
            | PlaneBenchmark::UniaxialHole { radius, .. } => Some(radius),
        }
    }
}

/// A solved plane problem: potentials plus material, with closed-form
/// boundary values, classical closed forms, and small-mu limit forms
/// where the benchmark has them.
#[derive(Debug, Clone)]
pub struct PlaneSolution {
    benchmark: PlaneBenchmark,
    material: PlaneMaterial,
    potentials: PotentialPair,
}

impl PlaneSolution {
    pub fn benchmark(&self) -> &PlaneBenchmark {
        &self.benchmark
    }

    pub fn material(&self) -> &PlaneMaterial {
        &self.material
    }

    pub fn potentials(&self) -> &PotentialPair {
        &self.potentials
    }

    /// Load magnitude used to scale residual tolerances.
    pub fn magnitude(&self) -> f64 {
        self.benchmark.load().abs()
    }

    /// Radius below which samples are excluded (the hole), zero otherwise.
    pub fn min_radius(&self) -> f64 {
        self.benchmark.hole_radius().unwrap_or(0.0)
    }

    pub fn displacement_cartesian(
        &self,
        z: Complex64,
    ) -> Result<CartesianDisplacement, FieldError> {
        displacement_cartesian(&self.potentials, &self.material, z)
    }

    pub fn displacement_polar(&self, r: f64, theta: f64) -> Result<PolarDisplacement, FieldError> {
        displacement_polar(&self.potentials, &self.material, r, theta)
    }

    pub fn stress_cartesian(&self, z: Complex64) -> Result<PlaneStressState, FieldError> {
        stress_cartesian(&self.potentials, z)
    }

    pub fn stress_polar(&self, r: f64, theta: f64) -> Result<PolarStressState, FieldError> {
        stress_polar(&self.potentials, r, theta)
    }

    /// Strain triple `(u,x ; v,y ; u,y + v,x)` at a Cartesian point, via the
    /// inverse constitutive relations.
    pub fn strain_cartesian(&self, z: Complex64) -> Result<[f64; 3], FieldError> {
        let s = self.stress_cartesian(z)?;
        Ok(strain_from_stress_2d(&self.material, s.s11, s.s22, s.s12))
    }

    /// Closed-form displacement on the hole contour `r = R`; `None` for the
    /// washer. The biaxial tangential component is identically zero.
    pub fn boundary_displacement(&self, theta: f64) -> Option<PolarDisplacement> {
        let m = &self.material;
        let k0sq = m.kappa0_sq();
        match self.benchmark {
            PlaneBenchmark::Washer { .. } => None,
            PlaneBenchmark::BiaxialHole { pressure: p, radius: rr } => Some(PolarDisplacement {
                u_r: 0.5 * p * rr * (1.0 / m.lambda0 + m.mu / k0sq),
                u_theta: 0.0,
            }),
            PlaneBenchmark::UniaxialHole { tension: p, radius: rr } => {
                let lambda = m.lambda0 - m.mu;
                let coef = p * rr * (m.mu0 * m.mu0 + 2.0 * m.mu * m.mu + lambda * m.mu)
                    / (4.0 * m.lambda0 * k0sq);
                Some(PolarDisplacement {
                    u_r: coef * (1.0 + 2.0 * (2.0 * theta).cos()),
                    u_theta: -2.0 * coef * (2.0 * theta).sin(),
                })
            }
        }
    }

    /// The classical (`mu0 = 0`) closed-form displacement formulas evaluated
    /// with this material's `lambda0` and `mu`.
    pub fn classical_displacement_polar(&self, r: f64, theta: f64) -> PolarDisplacement {
        let m = &self.material;
        match self.benchmark {
            PlaneBenchmark::Washer { pressure: p } => PolarDisplacement {
                u_r: -0.5 * p * r / m.lambda0,
                u_theta: 0.0,
            },
            PlaneBenchmark::BiaxialHole { pressure: p, radius: rr } => PolarDisplacement {
                u_r: 0.5 * p * rr * (r / rr / m.lambda0 + rr / r / m.mu),
                u_theta: 0.0,
            },
            PlaneBenchmark::UniaxialHole { tension: p, radius: rr } => {
                let (l0, mu) = (m.lambda0, m.mu);
                let c2 = (2.0 * theta).cos();
                let s2 = (2.0 * theta).sin();
                let u_r = 0.25 * p * rr * (r / rr / l0 + rr / r / mu)
                    + 0.25
                        * p
                        * rr
                        * (2.0 / l0 * rr / r
                            + (r / rr + 2.0 * rr / r - rr.powi(3) / r.powi(3)) / mu)
                        * c2;
                let u_theta = -0.25
                    * p
                    * rr
                    * (2.0 / l0 * rr / r + (r / rr + rr.powi(3) / r.powi(3)) / mu)
                    * s2;
                PolarDisplacement { u_r, u_theta }
            }
        }
    }

    /// The closed-form `mu -> 0` limit of the full displacement field, available
    /// for the biaxial hole problem (with `lambda = lambda0 - mu`).
    pub fn limit_displacement_polar(&self, r: f64, _theta: f64) -> Option<PolarDisplacement> {
        let m = &self.material;
        match self.benchmark {
            PlaneBenchmark::BiaxialHole { pressure: p, radius: rr } => {
                let lambda = m.lambda0 - m.mu;
                Some(PolarDisplacement {
                    u_r: 0.5 * p * r / lambda,
                    u_theta: 0.5 * p * rr / m.mu0 * (rr / r - r / rr),
                })
            }
            _ => None,
        }
    }

    /// The closed-form `mu -> 0` limit of the boundary displacements, available
    /// for both hole problems.
    pub fn limit_boundary_displacement(&self, theta: f64) -> Option<PolarDisplacement> {
        let m = &self.material;
        let lambda = m.lambda0 - m.mu;
        match self.benchmark {
            PlaneBenchmark::Washer { .. } => None,
            PlaneBenchmark::BiaxialHole { pressure: p, radius: rr } => Some(PolarDisplacement {
                u_r: 0.5 * p * rr / lambda,
                u_theta: 0.0,
            }),
            PlaneBenchmark::UniaxialHole { tension: p, radius: rr } => Some(PolarDisplacement {
                u_r: 0.25 * p * rr / lambda * (1.0 + 2.0 * (2.0 * theta).cos()),
                u_theta: -0.5 * p * rr / lambda * (2.0 * theta).sin(),
            }),
        }
    }
}

/// Circular washer under uniform pressure: `phi = -p z / 2`, `psi = 0`.
/// The displacement gains a tangential component `mu0 p r / (2 kappa0^2)`,
/// absent classically.
pub fn solve_washer(pressure: f64, m: &PlaneMaterial) -> PlaneSolution {
    PlaneSolution {
        benchmark: PlaneBenchmark::Washer { pressure },
        material: *m,
        potentials: PotentialPair {
            phi: LaurentPotential::from_real_terms(&[(1, -0.5 * pressure)]),
            psi: LaurentPotential::zero(),
        },
    }
}

/// Biaxial tension of a plate with a circular hole:
/// `phi = p z / 2`, `psi = -p R^2 / z`.
pub fn solve_hole_biaxial(pressure: f64, radius: f64, m: &PlaneMaterial) -> PlaneSolution {
    assert!(radius > 0.0, "hole radius must be positive, got {radius}");
    PlaneSolution {
        benchmark: PlaneBenchmark::BiaxialHole {
            pressure,
            radius,
        },
        material: *m,
        potentials: PotentialPair {
            phi: LaurentPotential::from_real_terms(&[(1, 0.5 * pressure)]),
            psi: LaurentPotential::from_real_terms(&[(-1, -pressure * radius * radius)]),
        },
    }
}

/// Uniaxial tension along x of a plate with a circular hole:
/// `phi = (pR/4)(z/R + 2R/z)`, `psi = -(pR/2)(z/R + R/z - R^3/z^3)`.
pub fn solve_hole_uniaxial(tension: f64, radius: f64, m: &PlaneMaterial) -> PlaneSolution {
    assert!(radius > 0.0, "hole radius must be positive, got {radius}");
    let r2 = radius * radius;
    let r4 = r2 * r2;
    PlaneSolution {
        benchmark: PlaneBenchmark::UniaxialHole {
            tension,
            radius,
        },
        material: *m,
        potentials: PotentialPair {
            phi: LaurentPotential::from_real_terms(&[(1, 0.25 * tension), (-1, 0.5 * tension * r2)]),
            psi: LaurentPotential::from_real_terms(&[
                (1, -0.5 * tension),
                (-1, -0.5 * tension * r2),
                (-3, 0.5 * tension * r4),
            ]),
        },
    }
}

/// Evaluates both the potential-based displacements and the classical
/// closed-form formulas over a sample grid and returns the maximum deviation
/// relative to the largest classical displacement magnitude. Requires
/// `mu0 = 0`.
pub fn classical_limit_compare(sol: &PlaneSolution, samples: usize) -> Result<f64, FieldError> {
    let m = sol.material();
    if m.mu0 != 0.0 {
        return Err(FieldError::RequiresClassical { mu0: m.mu0 });
    }
    let n = samples.max(2);
    let radii: Vec<f64> = match sol.benchmark().hole_radius() {
        Some(rr) => (0..n).map(|k| rr * (1.0 + 4.0 * k as f64 / (n - 1) as f64)).collect(),
        None => (1..=n).map(|k| k as f64 / n as f64).collect(),
    };
    let thetas: Vec<f64> = (0..n)
        .map(|k| k as f64 * std::f64::consts::TAU / n as f64)
        .collect();

    let mut max_diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &r in &radii {
        for &t in &thetas {
            let engine = sol.displacement_polar(r, t)?;
            let classical = sol.classical_displacement_polar(r, t);
            max_diff = max_diff
                .max((engine.u_r - classical.u_r).abs())
                .max((engine.u_theta - classical.u_theta).abs());
            scale = scale.max(classical.u_r.abs()).max(classical.u_theta.abs());
        }
    }
    Ok(if scale == 0.0 { max_diff } else { max_diff / scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn test_material() -> PlaneMaterial {
        PlaneMaterial::new(2.0, 0.5, 1.0).unwrap()
    }

    #[test]
    fn laurent_eval_and_derivative() {
        // f(z) = 3 z^2 - 2/z
        let f = LaurentPotential::from_real_terms(&[(2, 3.0), (-1, -2.0)]);
        let z = Complex64::new(0.5, -1.0);
        let expected = 3.0 * z * z - 2.0 / z;
        let got = f.eval(z).unwrap();
        assert_relative_eq!(got.re, expected.re, epsilon = 1e-14);
        assert_relative_eq!(got.im, expected.im, epsilon = 1e-14);

        // f'(z) = 6 z + 2/z^2
        let df = f.derivative();
        let expected = 6.0 * z + 2.0 / (z * z);
        let got = df.eval(z).unwrap();
        assert_relative_eq!(got.re, expected.re, epsilon = 1e-13);
        assert_relative_eq!(got.im, expected.im, epsilon = 1e-13);

        // derivative of a constant is the zero series
        let c = LaurentPotential::from_real_terms(&[(0, 5.0)]);
        assert!(c.derivative().is_zero());
    }

    #[test]
    fn laurent_origin_exclusion() {
        let f = LaurentPotential::from_real_terms(&[(-1, 1.0)]);
        assert!(matches!(
            f.eval(Complex64::new(0.0, 0.0)),
            Err(FieldError::DomainViolation { .. })
        ));
        let poly = LaurentPotential::from_real_terms(&[(0, 2.0), (3, 1.0)]);
        let v = poly.eval(Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(v, Complex64::new(2.0, 0.0));
    }

    #[test]
    fn zero_potentials_give_zero_displacement() {
        let m = test_material();
        let d = displacement_cartesian(
            &PotentialPair::default(),
            &m,
            Complex64::new(0.4, 0.7),
        )
        .unwrap();
        assert_eq!(d, CartesianDisplacement::default());
    }

    #[test]
    fn classical_reduction_matches_love_formula() {
        // mu0 = 0, lambda0 = lambda + mu: the representation collapses to
        // 2 mu (u + iv) = kappa_M phi - z conj(phi') - conj(psi) with
        // kappa_M = (lambda + 3 mu) / (lambda + mu). Hand-coded oracle.
        let (lambda, mu) = (1.4, 0.9);
        let m = PlaneMaterial::new(lambda + mu, 0.0, mu).unwrap();
        let pp = PotentialPair {
            phi: LaurentPotential::from_terms(&[
                (1, Complex64::new(0.3, -0.2)),
                (-1, Complex64::new(1.1, 0.4)),
            ]),
            psi: LaurentPotential::from_terms(&[
                (2, Complex64::new(-0.5, 0.1)),
                (-2, Complex64::new(0.2, 0.7)),
            ]),
        };
        let kappa_m = (lambda + 3.0 * mu) / (lambda + mu);
        for &(x, y) in &[(1.2, 0.4), (-0.8, 1.5), (0.3, -2.0)] {
            let z = Complex64::new(x, y);
            let got = displacement_cartesian(&pp, &m, z).unwrap();
            let phi = pp.phi.eval(z).unwrap();
            let dphi = pp.phi.derivative().eval(z).unwrap();
            let psi = pp.psi.eval(z).unwrap();
            let uv = (kappa_m * phi - z * dphi.conj() - psi.conj()) / (2.0 * mu);
            assert_relative_eq!(got.u, uv.re, epsilon = 1e-13);
            assert_relative_eq!(got.v, uv.im, epsilon = 1e-13);
        }
    }

    #[test]
    fn washer_displacements() {
        let m = test_material();
        let sol = solve_washer(1.0, &m);
        // (u_r, u_theta) = (-0.25, 0.2) at r = 1 for lambda0 = 2, mu = 1,
        // mu0 = 0.5, p = 1.
        for &theta in &[0.0, 0.9, 2.4, -1.3] {
            let d = sol.displacement_polar(1.0, theta).unwrap();
            assert_relative_eq!(d.u_r, -0.25, epsilon = 1e-14);
            assert_relative_eq!(d.u_theta, 0.2, epsilon = 1e-14);
        }
        // Linear in r.
        let d = sol.displacement_polar(2.0, 0.7).unwrap();
        assert_relative_eq!(d.u_r, -0.5, epsilon = 1e-14);
        assert_relative_eq!(d.u_theta, 0.4, epsilon = 1e-14);
    }

    #[test]
    fn washer_classical_and_sign_flip() {
        let p = 1.0;
        let classical = PlaneMaterial::new(2.0, 0.0, 1.0).unwrap();
        let sol = solve_washer(p, &classical);
        let d = sol.displacement_polar(0.8, 1.1).unwrap();
        assert!(d.u_theta.abs() <= 1e-15);

        // Positive pressure with mu0 > 0 rotates positively; flipping the
        // sign of mu0 flips u_theta and leaves u_r unchanged.
        let plus = solve_washer(p, &PlaneMaterial::new(2.0, 0.5, 1.0).unwrap());
        let minus = solve_washer(p, &PlaneMaterial::new(2.0, -0.5, 1.0).unwrap());
        let dp = plus.displacement_polar(1.4, 0.3).unwrap();
        let dm = minus.displacement_polar(1.4, 0.3).unwrap();
        assert!(dp.u_theta > 0.0);
        assert_relative_eq!(dp.u_theta, -dm.u_theta, epsilon = 1e-15);
        assert_relative_eq!(dp.u_r, dm.u_r, epsilon = 1e-15);
    }

    #[test]
    fn washer_stress_is_uniform_pressure() {
        let sol = solve_washer(1.0, &test_material());
        for &(x, y) in &[(0.2, 0.1), (-0.5, 0.9), (1.0, 0.0)] {
            let s = sol.stress_cartesian(Complex64::new(x, y)).unwrap();
            assert_relative_eq!(s.s11, -1.0, epsilon = 1e-15);
            assert_relative_eq!(s.s22, -1.0, epsilon = 1e-15);
            assert_eq!(s.s12, 0.0);
        }
        let sp = sol.stress_polar(0.7, 1.9).unwrap();
        assert_relative_eq!(sp.srr, -1.0, epsilon = 1e-15);
        assert_relative_eq!(sp.stt, -1.0, epsilon = 1e-15);
        assert!(sp.srt.abs() <= 1e-15);
    }

    #[test]
    fn biaxial_hole_fields() {
        let m = test_material();
        let (p, rr) = (1.0, 1.0);
        let sol = solve_hole_biaxial(p, rr, &m);

        // Closed-form stresses.
        for &(r, theta) in &[(1.0, 0.3), (1.7, 2.0), (4.0, -0.9)] {
            let s = sol.stress_polar(r, theta).unwrap();
            assert_relative_eq!(s.srr, p * (1.0 - rr * rr / (r * r)), epsilon = 1e-13);
            assert_relative_eq!(s.stt, p * (1.0 + rr * rr / (r * r)), epsilon = 1e-13);
            assert!(s.srt.abs() <= 1e-13 * p);
        }

        // Closed-form displacements.
        let k0sq = m.kappa0_sq();
        for &(r, theta) in &[(1.0, 0.0), (2.0, 1.1), (3.5, -2.2)] {
            let d = sol.displacement_polar(r, theta).unwrap();
            let ur = 0.5 * p * rr * (r / rr / m.lambda0 + m.mu / k0sq * rr / r);
            let ut = 0.5 * p * rr * m.mu0 / k0sq * (rr / r - r / rr);
            assert_relative_eq!(d.u_r, ur, epsilon = 1e-14);
            assert_relative_eq!(d.u_theta, ut, epsilon = 1e-14);
        }

        // Boundary values: u_theta exactly zero, u_r = 0.65 for this
        // material.
        let b = sol.boundary_displacement(0.8).unwrap();
        assert_eq!(b.u_theta, 0.0);
        assert_relative_eq!(b.u_r, 0.65, epsilon = 1e-15);
        let d = sol.displacement_polar(rr, 0.8).unwrap();
        assert_relative_eq!(d.u_r, b.u_r, epsilon = 1e-14);
        assert!(d.u_theta.abs() <= 1e-15);
    }

    #[test]
    fn biaxial_hole_traction_free_contour() {
        let sol = solve_hole_biaxial(1.0, 1.0, &test_material());
        for k in 0..16 {
            let theta = k as f64 * std::f64::consts::TAU / 16.0;
            let s = sol.stress_polar(1.0, theta).unwrap();
            assert!(s.srr.abs() <= 1e-12);
            assert!(s.srt.abs() <= 1e-12);
            assert_relative_eq!(s.stt, 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn uniaxial_hole_reference_stresses() {
        let (p, rr) = (1.0, 1.0);
        let sol = solve_hole_uniaxial(p, rr, &test_material());
        for &(r, theta) in &[(1.0, 0.4), (1.5, 1.2), (2.5, -0.6), (4.0, 3.0)] {
            let s = sol.stress_polar(r, theta).unwrap();
            let q = rr * rr / (r * r);
            let q2 = q * q;
            let c2 = (2.0 * theta).cos();
            let s2 = (2.0 * theta).sin();
            let srr = 0.5 * p * (1.0 - q + (1.0 - 4.0 * q + 3.0 * q2) * c2);
            let stt = 0.5 * p * (1.0 + q - (1.0 + 3.0 * q2) * c2);
            let srt = -0.5 * p * (1.0 + 2.0 * q - 3.0 * q2) * s2;
            assert_relative_eq!(s.srr, srr, epsilon = 1e-13);
            assert_relative_eq!(s.stt, stt, epsilon = 1e-13);
            assert_relative_eq!(s.srt, srt, epsilon = 1e-13);
        }
    }

    #[test]
    fn uniaxial_stress_concentration_factor_three() {
        for m in [
            test_material(),
            PlaneMaterial::new(5.0, -1.5, 0.4).unwrap(),
            PlaneMaterial::new(1.0, 0.0, 2.0).unwrap(),
        ] {
            let sol = solve_hole_uniaxial(1.0, 1.0, &m);
            for &theta in &[std::f64::consts::FRAC_PI_2, -std::f64::consts::FRAC_PI_2] {
                let s = sol.stress_polar(1.0, theta).unwrap();
                assert_relative_eq!(s.stt, 3.0, epsilon = 1e-13);
                assert!(s.srr.abs() <= 1e-13);
                assert!(s.srt.abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn uniaxial_displacements_match_closed_forms() {
        let m = test_material();
        let (p, rr) = (1.0, 1.0);
        let sol = solve_hole_uniaxial(p, rr, &m);
        let k0sq = m.kappa0_sq();
        let (l0, mu, mu0) = (m.lambda0, m.mu, m.mu0);
        for &(r, theta) in &[(1.0, 0.5), (1.5, 2.1), (2.0, -1.0), (3.0, 0.0)] {
            let d = sol.displacement_polar(r, theta).unwrap();
            let c2 = (2.0 * theta).cos();
            let s2 = (2.0 * theta).sin();
            let ur = 0.25 * p * rr * (r / rr / l0 + mu / k0sq * rr / r)
                + 0.25 * mu0 / k0sq * p * rr * (r / rr - 2.0 * rr / r + rr.powi(3) / r.powi(3))
                    * s2
                + 0.25
                    * p
                    * rr
                    * (2.0 / l0 * rr / r
                        + mu / k0sq * (r / rr + 2.0 * rr / r - rr.powi(3) / r.powi(3)))
                    * c2;
            let ut = 0.25 * mu0 / k0sq * p * rr * (rr / r - r / rr)
                + 0.25 * mu0 / k0sq * p * rr * (r / rr - rr.powi(3) / r.powi(3)) * c2
                - 0.25
                    * p
                    * rr
                    * (2.0 / l0 * rr / r + mu / k0sq * (r / rr + rr.powi(3) / r.powi(3)))
                    * s2;
            assert_relative_eq!(d.u_r, ur, epsilon = 1e-13);
            assert_relative_eq!(d.u_theta, ut, epsilon = 1e-13);
        }
    }

    #[test]
    fn uniaxial_boundary_forms() {
        let m = test_material();
        let sol = solve_hole_uniaxial(1.0, 1.0, &m);
        // theta = 0: sin(2 theta) = 0, so u_theta vanishes.
        let b = sol.boundary_displacement(0.0).unwrap();
        assert_eq!(b.u_theta, 0.0);

        // Coefficient form agrees with direct evaluation at r = R.
        for &theta in &[0.3, 1.0, 2.2, -0.7] {
            let b = sol.boundary_displacement(theta).unwrap();
            let d = sol.displacement_polar(1.0, theta).unwrap();
            assert_relative_eq!(b.u_r, d.u_r, epsilon = 1e-13);
            assert_relative_eq!(b.u_theta, d.u_theta, epsilon = 1e-13);
        }
    }

    #[test]
    fn polar_and_cartesian_displacements_are_consistent() {
        let m = test_material();
        let sol = solve_hole_uniaxial(1.0, 1.0, &m);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let r = rng.gen_range(1.0..4.0);
            let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            let polar = sol.displacement_polar(r, theta).unwrap();
            let z = Complex64::from_polar(r, theta);
            let via_cart = sol.displacement_cartesian(z).unwrap().to_polar(theta);
            assert_relative_eq!(polar.u_r, via_cart.u_r, epsilon = 1e-13);
            assert_relative_eq!(polar.u_theta, via_cart.u_theta, epsilon = 1e-13);
        }
    }

    #[test]
    fn polar_stress_agrees_with_rotated_cartesian() {
        let sol = solve_hole_uniaxial(1.0, 1.0, &test_material());
        for &(r, theta) in &[(1.2, 0.5), (2.0, -1.7), (3.0, 2.9)] {
            let direct = sol.stress_polar(r, theta).unwrap();
            let z = Complex64::from_polar(r, theta);
            let rotated = sol.stress_cartesian(z).unwrap().to_polar(theta);
            assert_relative_eq!(direct.srr, rotated.srr, epsilon = 1e-13);
            assert_relative_eq!(direct.stt, rotated.stt, epsilon = 1e-13);
            assert_relative_eq!(direct.srt, rotated.srt, epsilon = 1e-13);
        }
    }

    #[test]
    fn far_field_approaches_prescribed_load() {
        let p = 1.0;
        let uni = solve_hole_uniaxial(p, 1.0, &test_material());
        let biax = solve_hole_biaxial(p, 1.0, &test_material());
        let r = 1.0e3;
        for &theta in &[0.0, 0.7, 1.9] {
            let z = Complex64::from_polar(r, theta);
            let s = uni.stress_cartesian(z).unwrap();
            assert!((s.s11 - p).abs() <= 1e-5 * p);
            assert!(s.s22.abs() <= 1e-5 * p);
            assert!(s.s12.abs() <= 1e-5 * p);

            let s = biax.stress_cartesian(z).unwrap();
            assert!((s.s11 - p).abs() <= 1e-5 * p);
            assert!((s.s22 - p).abs() <= 1e-5 * p);
            assert!(s.s12.abs() <= 1e-5 * p);
        }
    }

    #[test]
    fn trace_of_stress_is_harmonic() {
        // Q = s11 + s22 = 4 Re phi'; check the FD Laplacian vanishes.
        let sol = solve_hole_uniaxial(1.0, 1.0, &test_material());
        let q = |x: f64, y: f64| {
            let s = sol.stress_cartesian(Complex64::new(x, y)).unwrap();
            s.s11 + s.s22
        };
        let lap = |x: f64, y: f64, h: f64| {
            (q(x + h, y) + q(x - h, y) + q(x, y + h) + q(x, y - h) - 4.0 * q(x, y)) / (h * h)
        };
        for &(x, y) in &[(1.5, 0.3), (-2.0, 1.1), (0.5, -2.5)] {
            let l = lap(x, y, 1e-3);
            assert!(l.abs() <= 1e-5, "Laplacian {l} at ({x}, {y})");
        }
        // The residual is pure truncation: halving h divides it by ~4.
        let ratio = lap(1.5, 0.3, 2e-3) / lap(1.5, 0.3, 1e-3);
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn classical_limit_comparison() {
        let classical = PlaneMaterial::new(2.0, 0.0, 1.0).unwrap();
        assert!(classical_limit_compare(&solve_washer(1.0, &classical), 10).unwrap() <= 1e-14);
        assert!(
            classical_limit_compare(&solve_hole_biaxial(1.0, 1.0, &classical), 10).unwrap()
                <= 1e-13
        );
        assert!(
            classical_limit_compare(&solve_hole_uniaxial(1.0, 1.0, &classical), 10).unwrap()
                <= 1e-13
        );

        let asym = solve_washer(1.0, &test_material());
        assert!(matches!(
            classical_limit_compare(&asym, 10),
            Err(FieldError::RequiresClassical { .. })
        ));
    }

    #[test]
    fn small_mu_limits() {
        let (lambda, mu0, p, rr) = (2.0, 0.5, 1.0, 1.0);
        let mu = 1e-8;
        let m = PlaneMaterial::new(lambda + mu, mu0, mu).unwrap();

        let biax = solve_hole_biaxial(p, rr, &m);
        for &(r, theta) in &[(1.5, 0.3), (2.5, 1.9)] {
            let d = biax.displacement_polar(r, theta).unwrap();
            let lim = biax.limit_displacement_polar(r, theta).unwrap();
            assert_relative_eq!(d.u_r, lim.u_r, max_relative = 1e-6);
            assert_relative_eq!(d.u_theta, lim.u_theta, max_relative = 1e-6);
        }
        let b = biax.boundary_displacement(0.4).unwrap();
        let lim = biax.limit_boundary_displacement(0.4).unwrap();
        assert_relative_eq!(b.u_r, lim.u_r, max_relative = 1e-6);

        let uni = solve_hole_uniaxial(p, rr, &m);
        for &theta in &[0.3, 1.0, 2.2] {
            let b = uni.boundary_displacement(theta).unwrap();
            let lim = uni.limit_boundary_displacement(theta).unwrap();
            assert_relative_eq!(b.u_r, lim.u_r, max_relative = 1e-6);
            assert_relative_eq!(b.u_theta, lim.u_theta, max_relative = 1e-6);
        }
    }

    #[test]
    fn displacement_polar_rejects_bad_radii() {
        let sol = solve_hole_biaxial(1.0, 1.0, &test_material());
        assert!(matches!(
            sol.displacement_polar(0.0, 0.3),
            Err(FieldError::DomainViolation { .. })
        ));
        assert!(matches!(
            sol.displacement_polar(-1.0, 0.3),
            Err(FieldError::DomainViolation { .. })
        ));
        // The washer is regular at the origin.
        let washer = solve_washer(1.0, &test_material());
        assert!(washer.displacement_polar(0.0, 0.0).is_ok());
    }
}
