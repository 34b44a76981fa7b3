//! Asymmetric pseudoelasticity: a linear relation between symmetric stress
//! and strain through an asymmetric material matrix, invariant under
//! rotations about one axis.
//!
//! The crate provides
//!
//! - the six-component tensor packing and the 6x6 rotation representations
//!   ([`voigt`]),
//! - the eight-parameter stiffness family, its structured inverse, and the
//!   plane constitutive relations ([`material`]),
//! - an independent re-derivation of the family as the nullspace of the
//!   rotational-invariance condition ([`invariance`]),
//! - exact polynomial solutions: shaft torsion with cross-section warping
//!   and biaxial plate bending ([`solutions3d`]),
//! - plane benchmark solutions through complex potentials: washer under
//!   pressure, biaxial and uniaxial tension of a plate with a circular
//!   hole ([`solutions2d`]),
//! - a finite-difference verification pipeline, grid sampling with CSV
//!   export, and material definition files ([`verify`]).
//!
//! All 6-component quantities use the slot ordering
//! `1->11, 2->22, 3->12, 4->31, 5->32, 6->33` with engineering shear
//! factors on strain; see the [`voigt`] module notes.

pub mod invariance;
pub mod material;
pub mod solutions2d;
pub mod solutions3d;
pub mod verify;
pub mod voigt;

pub use material::{
    build_c, check_rotational_invariance, invert_to_d, plane_reduce, strain_from_stress_2d,
    strain_from_stress_3d, stress_from_strain_2d, sylvester_check, ComplianceMatrix6,
    ElasticityMatrix6, MaterialError, MaterialParams3D, PlaneMaterial,
};
pub use solutions2d::{
    classical_limit_compare, solve_hole_biaxial, solve_hole_uniaxial, solve_washer, FieldError,
    LaurentPotential, PlaneSolution, PotentialPair,
};
pub use solutions3d::{
    complete_stress_coeffs, displacement_coeffs, solve_plate_bending, solve_torsion, strain_coeffs,
    BodyForce, DisplacementPoly, PlateBendProblem, StrainPolyCoeffs, StressPolyCoeffs,
    TorsionProblem,
};
pub use verify::{parse_grid_spec, parse_material_file, GridSpec, MaterialDefinition};
pub use voigt::{Matrix6, RotationAngle, StrainVec6, StressVec6, SymTensor3, Vector6};
