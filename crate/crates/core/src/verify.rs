//! Finite-difference verification of closed-form fields, grid sampling and
//! CSV export, and material definition files.
//!
//! All derivative checks use second-order central differences, so they are
//! exact to rounding on the polynomial fields (torsion, plate, washer) and
//! O(h^2) on the hole fields. Residual tolerances are relative to a problem
//! magnitude declared by each solution bundle.

use std::io::Write;
use std::path::Path;

use thiserror::Error;

use crate::material::{
    stress_from_strain_2d, ElasticityMatrix6, MaterialError, MaterialParams3D, PlaneGradient,
    PlaneMaterial,
};
use crate::solutions3d::BodyForce;
use crate::voigt::Vector6;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("finite-difference stencil leaves the domain at ({x}, {y}); exclusion radius {exclusion}")]
    DomainViolation { x: f64, y: f64, exclusion: f64 },
    #[error("sampled field value at ({x}, {y}) is not finite")]
    NonFiniteSample { x: f64, y: f64 },
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum GridParseError {
    #[error("axis entry `{0}` is not of the form name=LO:HI:N")]
    BadAxis(String),
    #[error("malformed number `{0}` in grid spec")]
    BadNumber(String),
    #[error("axis `{name}` has invalid range {lo}:{hi} for {count} points")]
    BadRange { name: String, lo: f64, hi: f64, count: usize },
    #[error("unknown or duplicate axis `{0}` (expected x,y[,z] or r,theta)")]
    UnknownAxis(String),
    #[error("grid spec must name axes x,y[,z] or r,theta")]
    IncompleteAxes,
}

#[derive(Debug, Error)]
pub enum MaterialFileError {
    #[error("missing material key `{0}`")]
    MissingKey(&'static str),
    #[error("unknown material key `{key}` on line {line}")]
    UnknownKey { key: String, line: usize },
    #[error("duplicate material key `{key}` on line {line}")]
    DuplicateKey { key: String, line: usize },
    #[error("malformed number on line {line}: `{text}`")]
    MalformedNumber { line: usize, text: String },
    #[error("line {line} is not a `name = value` pair")]
    MalformedLine { line: usize },
    #[error("material file mixes 3D (C..) and plane (lambda0, mu0, mu) keys")]
    AmbiguousKind,
    #[error(transparent)]
    Invalid(#[from] MaterialError),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

/// One sampling axis: `count` evenly spaced values on `[lo, hi]`
/// (`count == 1` samples `lo` alone, for single-plane sections).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self, GridParseError> {
        let ok = count >= 1
            && lo.is_finite()
            && hi.is_finite()
            && (count == 1 && hi >= lo || count >= 2 && hi > lo);
        if !ok {
            return Err(GridParseError::BadRange {
                name: String::new(),
                lo,
                hi,
                count,
            });
        }
        Ok(Self { lo, hi, count })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.lo + step * i as f64).collect()
    }

    pub fn span(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Sampling grid. `exclusion_radius` carves a disk (cylinder in 3D) around
/// the origin out of the sampled domain; exports skip excluded points while
/// derivative checks refuse stencils that would cross into it.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    Cart2 {
        x: Axis,
        y: Axis,
        exclusion_radius: f64,
    },
    Cart3 {
        x: Axis,
        y: Axis,
        z: Axis,
        exclusion_radius: f64,
    },
    Polar {
        r: Axis,
        theta: Axis,
        exclusion_radius: f64,
    },
}

/// A 2D sample position: the grid coordinates as specified plus the
/// Cartesian point they map to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub grid: [f64; 2],
    pub x: f64,
    pub y: f64,
}

impl GridSpec {
    pub fn is_3d(&self) -> bool {
        matches!(self, GridSpec::Cart3 { .. })
    }

    pub fn exclusion_radius(&self) -> f64 {
        match *self {
            GridSpec::Cart2 {
                exclusion_radius, ..
            }
            | GridSpec::Cart3 {
                exclusion_radius, ..
            }
            | GridSpec::Polar {
                exclusion_radius, ..
            } => exclusion_radius,
        }
    }

    pub fn set_exclusion_radius(&mut self, radius: f64) {
        match self {
            GridSpec::Cart2 {
                exclusion_radius, ..
            }
            | GridSpec::Cart3 {
                exclusion_radius, ..
            }
            | GridSpec::Polar {
                exclusion_radius, ..
            } => *exclusion_radius = radius,
        }
    }

    /// Row-major 2D sample points (first axis outer). Panics on 3D grids.
    pub fn points_2d(&self) -> Vec<Point2> {
        match self {
            GridSpec::Cart2 { x, y, .. } => {
                let mut out = Vec::with_capacity(x.count * y.count);
                for &xv in &x.values() {
                    for &yv in &y.values() {
                        out.push(Point2 {
                            grid: [xv, yv],
                            x: xv,
                            y: yv,
                        });
                    }
                }
                out
            }
            GridSpec::Polar { r, theta, .. } => {
                let mut out = Vec::with_capacity(r.count * theta.count);
                for &rv in &r.values() {
                    for &tv in &theta.values() {
                        out.push(Point2 {
                            grid: [rv, tv],
                            x: rv * tv.cos(),
                            y: rv * tv.sin(),
                        });
                    }
                }
                out
            }
            GridSpec::Cart3 { .. } => panic!("points_2d called on a 3D grid"),
        }
    }

    /// Row-major 3D sample points. Panics on 2D grids.
    pub fn points_3d(&self) -> Vec<[f64; 3]> {
        match self {
            GridSpec::Cart3 { x, y, z, .. } => {
                let mut out = Vec::with_capacity(x.count * y.count * z.count);
                for &xv in &x.values() {
                    for &yv in &y.values() {
                        for &zv in &z.values() {
                            out.push([xv, yv, zv]);
                        }
                    }
                }
                out
            }
            _ => panic!("points_3d called on a 2D grid"),
        }
    }

    /// Largest axis span; the default FD step is 1e-4 times this.
    pub fn diameter(&self) -> f64 {
        let spans: Vec<f64> = match self {
            GridSpec::Cart2 { x, y, .. } => vec![x.span(), y.span()],
            GridSpec::Cart3 { x, y, z, .. } => vec![x.span(), y.span(), z.span()],
            GridSpec::Polar { r, .. } => vec![2.0 * r.hi],
        };
        spans.into_iter().fold(0.0, f64::max).max(f64::MIN_POSITIVE)
    }
}

/// Default central-difference step for a grid: `1e-4 * diameter`.
pub fn default_step(grid: &GridSpec) -> f64 {
    1e-4 * grid.diameter()
}

/// Parses `x=LO:HI:N,y=LO:HI:N[,z=LO:HI:N]` or `r=LO:HI:N,theta=LO:HI:N`.
pub fn parse_grid_spec(text: &str) -> Result<GridSpec, GridParseError> {
    let mut axes: Vec<(String, Axis)> = Vec::new();
    for entry in text.split(',') {
        let entry = entry.trim();
        let (name, spec) = entry
            .split_once('=')
            .ok_or_else(|| GridParseError::BadAxis(entry.to_string()))?;
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(GridParseError::BadAxis(entry.to_string()));
        }
        let lo: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| GridParseError::BadNumber(parts[0].to_string()))?;
        let hi: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| GridParseError::BadNumber(parts[1].to_string()))?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| GridParseError::BadNumber(parts[2].to_string()))?;
        let axis = Axis::new(lo, hi, count).map_err(|e| match e {
            GridParseError::BadRange { lo, hi, count, .. } => GridParseError::BadRange {
                name: name.trim().to_string(),
                lo,
                hi,
                count,
            },
            other => other,
        })?;
        let name = name.trim().to_string();
        if axes.iter().any(|(n, _)| *n == name) {
            return Err(GridParseError::UnknownAxis(name));
        }
        axes.push((name, axis));
    }
    let find = |n: &str| axes.iter().find(|(name, _)| name == n).map(|(_, a)| *a);
    let names: Vec<&str> = axes.iter().map(|(n, _)| n.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort_unstable();
    match sorted.as_slice() {
        ["x", "y"] => Ok(GridSpec::Cart2 {
            x: find("x").unwrap(),
            y: find("y").unwrap(),
            exclusion_radius: 0.0,
        }),
        ["x", "y", "z"] => Ok(GridSpec::Cart3 {
            x: find("x").unwrap(),
            y: find("y").unwrap(),
            z: find("z").unwrap(),
            exclusion_radius: 0.0,
        }),
        ["r", "theta"] => Ok(GridSpec::Polar {
            r: find("r").unwrap(),
            theta: find("theta").unwrap(),
            exclusion_radius: 0.0,
        }),
        _ => {
            for n in &names {
                if !matches!(*n, "x" | "y" | "z" | "r" | "theta") {
                    return Err(GridParseError::UnknownAxis(n.to_string()));
                }
            }
            Err(GridParseError::IncompleteAxes)
        }
    }
}

/// Max and mean absolute residual over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResidualStat {
    pub max_abs: f64,
    pub mean_abs: f64,
    pub samples: usize,
}

impl ResidualStat {
    fn collect(values: impl IntoIterator<Item = f64>) -> Self {
        let mut max_abs: f64 = 0.0;
        let mut sum = 0.0;
        let mut n = 0usize;
        for v in values {
            let a = v.abs();
            max_abs = max_abs.max(a);
            sum += a;
            n += 1;
        }
        ResidualStat {
            max_abs,
            mean_abs: if n == 0 { 0.0 } else { sum / n as f64 },
            samples: n,
        }
    }
}

/// Residual report for one verification run.
#[derive(Debug, Clone, Default)]
pub struct ResidualReport {
    pub equilibrium: Option<ResidualStat>,
    pub constitutive: Option<ResidualStat>,
    pub compatibility: Option<ResidualStat>,
    pub boundary_traction: Option<f64>,
    pub step: f64,
    pub magnitude: f64,
}

fn require_outside(x: f64, y: f64, exclusion: f64) -> Result<(), VerifyError> {
    if exclusion > 0.0 && x.hypot(y) < exclusion {
        return Err(VerifyError::DomainViolation { x, y, exclusion });
    }
    Ok(())
}

fn check_stencil_2d(x: f64, y: f64, h: f64, exclusion: f64, diagonal: bool) -> Result<(), VerifyError> {
    require_outside(x, y, exclusion)?;
    for (dx, dy) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
        require_outside(x + dx, y + dy, exclusion)?;
    }
    if diagonal {
        for (dx, dy) in [(h, h), (h, -h), (-h, h), (-h, -h)] {
            require_outside(x + dx, y + dy, exclusion)?;
        }
    }
    Ok(())
}

/// Central-difference divergence of a 3D stress field plus the body force,
/// sampled over the grid. Exact to rounding for polynomial fields.
pub fn fd_equilibrium_residual_3d<S>(
    stress: S,
    body_force: &BodyForce,
    grid: &GridSpec,
    h: f64,
) -> Result<ResidualStat, VerifyError>
where
    S: Fn(f64, f64, f64) -> [f64; 6],
{
    assert!(h > 0.0, "step must be positive");
    let excl = grid.exclusion_radius();
    let mut residuals = Vec::new();
    for [x, y, z] in grid.points_3d() {
        check_stencil_2d(x, y, h, excl, false)?;
        let ddx = |j: usize| (stress(x + h, y, z)[j] - stress(x - h, y, z)[j]) / (2.0 * h);
        let ddy = |j: usize| (stress(x, y + h, z)[j] - stress(x, y - h, z)[j]) / (2.0 * h);
        let ddz = |j: usize| (stress(x, y, z + h)[j] - stress(x, y, z - h)[j]) / (2.0 * h);
        residuals.push(ddx(0) + ddy(2) + ddz(3) + body_force.f1);
        residuals.push(ddx(2) + ddy(1) + ddz(4) + body_force.f2);
        residuals.push(ddx(3) + ddy(4) + ddz(5) + body_force.f3);
    }
    Ok(ResidualStat::collect(residuals))
}

/// Central-difference plane equilibrium `div T = 0` (no plane body force in
/// the benchmarks).
pub fn fd_equilibrium_residual_2d<S>(
    stress: S,
    grid: &GridSpec,
    h: f64,
) -> Result<ResidualStat, VerifyError>
where
    S: Fn(f64, f64) -> [f64; 3],
{
    assert!(h > 0.0, "step must be positive");
    let excl = grid.exclusion_radius();
    let mut residuals = Vec::new();
    for p in grid.points_2d() {
        let (x, y) = (p.x, p.y);
        check_stencil_2d(x, y, h, excl, false)?;
        let ddx = |j: usize| (stress(x + h, y)[j] - stress(x - h, y)[j]) / (2.0 * h);
        let ddy = |j: usize| (stress(x, y + h)[j] - stress(x, y - h)[j]) / (2.0 * h);
        residuals.push(ddx(0) + ddy(2));
        residuals.push(ddx(2) + ddy(1));
    }
    Ok(ResidualStat::collect(residuals))
}

/// Chains FD strains from 3D displacements through the stiffness matrix and
/// compares against the analytic stresses.
pub fn fd_constitutive_closure_3d<W, S>(
    displacement: W,
    stiffness: &ElasticityMatrix6,
    stress: S,
    grid: &GridSpec,
    h: f64,
) -> Result<ResidualStat, VerifyError>
where
    W: Fn(f64, f64, f64) -> [f64; 3],
    S: Fn(f64, f64, f64) -> [f64; 6],
{
    assert!(h > 0.0, "step must be positive");
    let excl = grid.exclusion_radius();
    let mut residuals = Vec::new();
    for [x, y, z] in grid.points_3d() {
        check_stencil_2d(x, y, h, excl, false)?;
        let dx = |i: usize| (displacement(x + h, y, z)[i] - displacement(x - h, y, z)[i]) / (2.0 * h);
        let dy = |i: usize| (displacement(x, y + h, z)[i] - displacement(x, y - h, z)[i]) / (2.0 * h);
        let dz = |i: usize| (displacement(x, y, z + h)[i] - displacement(x, y, z - h)[i]) / (2.0 * h);
        let eps = Vector6::from_row_slice(&[
            dx(0),
            dy(1),
            dy(0) + dx(1),
            dz(0) + dx(2),
            dz(1) + dy(2),
            dz(2),
        ]);
        let sigma_fd = stiffness.matrix() * eps;
        let sigma = stress(x, y, z);
        for j in 0..6 {
            residuals.push(sigma_fd[j] - sigma[j]);
        }
    }
    Ok(ResidualStat::collect(residuals))
}

/// Chains FD strains from plane displacements through the plane law and
/// compares against the analytic stresses. This is the strongest end-to-end
/// check tying the displacement representation to the constitutive
/// relations.
pub fn fd_constitutive_closure_2d<W, S>(
    displacement: W,
    material: &PlaneMaterial,
    stress: S,
    grid: &GridSpec,
    h: f64,
) -> Result<ResidualStat, VerifyError>
where
    W: Fn(f64, f64) -> [f64; 2],
    S: Fn(f64, f64) -> [f64; 3],
{
    assert!(h > 0.0, "step must be positive");
    let excl = grid.exclusion_radius();
    let mut residuals = Vec::new();
    for p in grid.points_2d() {
        let (x, y) = (p.x, p.y);
        check_stencil_2d(x, y, h, excl, false)?;
        let grad = PlaneGradient {
            du_dx: (displacement(x + h, y)[0] - displacement(x - h, y)[0]) / (2.0 * h),
            du_dy: (displacement(x, y + h)[0] - displacement(x, y - h)[0]) / (2.0 * h),
            dv_dx: (displacement(x + h, y)[1] - displacement(x - h, y)[1]) / (2.0 * h),
            dv_dy: (displacement(x, y + h)[1] - displacement(x, y - h)[1]) / (2.0 * h),
        };
        let sigma_fd = stress_from_strain_2d(material, &grad);
        let sigma = stress(x, y);
        for j in 0..3 {
            residuals.push(sigma_fd[j] - sigma[j]);
        }
    }
    Ok(ResidualStat::collect(residuals))
}

/// Plane strain compatibility `eps11,yy + eps22,xx - 2 eps12,xy` by central
/// differences. The strain closure returns `(eps11, eps22, 2*eps12)`.
pub fn fd_compatibility_residual<E>(
    strain: E,
    grid: &GridSpec,
    h: f64,
) -> Result<ResidualStat, VerifyError>
where
    E: Fn(f64, f64) -> [f64; 3],
{
    assert!(h > 0.0, "step must be positive");
    let excl = grid.exclusion_radius();
    let mut residuals = Vec::new();
    for p in grid.points_2d() {
        let (x, y) = (p.x, p.y);
        check_stencil_2d(x, y, h, excl, true)?;
        let e11_yy =
            (strain(x, y + h)[0] - 2.0 * strain(x, y)[0] + strain(x, y - h)[0]) / (h * h);
        let e22_xx =
            (strain(x + h, y)[1] - 2.0 * strain(x, y)[1] + strain(x - h, y)[1]) / (h * h);
        // gamma12 = 2 eps12, so the compatibility combination needs its
        // plain mixed derivative.
        let gam_xy = (strain(x + h, y + h)[2] - strain(x + h, y - h)[2]
            - strain(x - h, y + h)[2]
            + strain(x - h, y - h)[2])
            / (4.0 * h * h);
        residuals.push(e11_yy + e22_xx - gam_xy);
    }
    Ok(ResidualStat::collect(residuals))
}

/// Maximum traction magnitude `|sigma . n|` over samples of the circle
/// `r = radius` (2D).
pub fn boundary_traction_check_2d<S>(stress: S, radius: f64, samples: usize) -> f64
where
    S: Fn(f64, f64) -> [f64; 3],
{
    assert!(radius > 0.0, "contour radius must be positive");
    assert!(samples >= 8, "need at least 8 contour samples");
    let mut max_t: f64 = 0.0;
    for k in 0..samples {
        let theta = k as f64 * std::f64::consts::TAU / samples as f64;
        let (n1, n2) = (theta.cos(), theta.sin());
        let s = stress(radius * n1, radius * n2);
        let t1 = s[0] * n1 + s[2] * n2;
        let t2 = s[2] * n1 + s[1] * n2;
        max_t = max_t.max(t1.hypot(t2));
    }
    max_t
}

/// Maximum traction magnitude over the lateral surface of the cylinder
/// `r = radius`, `|z| <= half_length` (3D; five axial stations).
pub fn boundary_traction_check_3d<S>(
    stress: S,
    radius: f64,
    half_length: f64,
    samples: usize,
) -> f64
where
    S: Fn(f64, f64, f64) -> [f64; 6],
{
    assert!(radius > 0.0, "contour radius must be positive");
    assert!(samples >= 8, "need at least 8 contour samples");
    let mut max_t: f64 = 0.0;
    for iz in 0..5 {
        let z = -half_length + half_length * 0.5 * iz as f64;
        for k in 0..samples {
            let theta = k as f64 * std::f64::consts::TAU / samples as f64;
            let (n1, n2) = (theta.cos(), theta.sin());
            let s = stress(radius * n1, radius * n2, z);
            // slots: 1->11, 2->22, 3->12, 4->31, 5->32, 6->33
            let t1 = s[0] * n1 + s[2] * n2;
            let t2 = s[2] * n1 + s[1] * n2;
            let t3 = s[3] * n1 + s[4] * n2;
            max_t = max_t.max((t1 * t1 + t2 * t2 + t3 * t3).sqrt());
        }
    }
    max_t
}

/// One exported row.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub position: Vec<f64>,
    pub displacement: Vec<f64>,
    pub strain: Vec<f64>,
    pub stress: Vec<f64>,
}

fn fmt_num(v: f64) -> String {
    // 17 significant digits: enough to reproduce the double exactly.
    format!("{v:.16e}")
}

fn write_row(out: &mut impl Write, values: &[f64]) -> std::io::Result<()> {
    let row: Vec<String> = values.iter().map(|&v| fmt_num(v)).collect();
    out.write_all(row.join(",").as_bytes())?;
    out.write_all(b"\n")
}

/// Reorders a native-ordered 6-vector (11, 22, 12, 31, 32, 33) into
/// conventional Voigt order (11, 22, 33, 32, 31, 12).
pub fn to_standard_voigt(v: &[f64; 6]) -> [f64; 6] {
    [v[0], v[1], v[5], v[4], v[3], v[2]]
}

/// Exports a 3D field over a Cartesian grid: one row per point, row-major,
/// 17-significant-digit numbers, LF endings. Points inside the exclusion
/// radius are skipped. Returns the number of data rows written.
pub fn sample_and_export_3d<W, F>(
    field: F,
    grid: &GridSpec,
    out: &mut W,
    standard_voigt: bool,
) -> Result<usize, VerifyError>
where
    W: Write,
    F: Fn(f64, f64, f64) -> ([f64; 3], [f64; 6], [f64; 6]),
{
    let header = if standard_voigt {
        "x,y,z,w1,w2,w3,eps11,eps22,eps33,eps32,eps31,eps12,sig11,sig22,sig33,sig32,sig31,sig12"
    } else {
        "x,y,z,w1,w2,w3,eps1,eps2,eps3,eps4,eps5,eps6,sig1,sig2,sig3,sig4,sig5,sig6"
    };
    out.write_all(header.as_bytes())?;
    out.write_all(b"\n")?;
    let excl = grid.exclusion_radius();
    let mut rows = 0usize;
    for [x, y, z] in grid.points_3d() {
        if excl > 0.0 && x.hypot(y) < excl {
            continue;
        }
        let (w, mut eps, mut sig) = field(x, y, z);
        if standard_voigt {
            eps = to_standard_voigt(&eps);
            sig = to_standard_voigt(&sig);
        }
        let sample = FieldSample {
            position: vec![x, y, z],
            displacement: w.to_vec(),
            strain: eps.to_vec(),
            stress: sig.to_vec(),
        };
        let mut values = sample.position.clone();
        values.extend_from_slice(&sample.displacement);
        values.extend_from_slice(&sample.strain);
        values.extend_from_slice(&sample.stress);
        if values.iter().any(|v| !v.is_finite()) {
            return Err(VerifyError::NonFiniteSample { x, y });
        }
        write_row(out, &values)?;
        rows += 1;
    }
    Ok(rows)
}

/// Exports a plane field. Cartesian grids produce
/// `x,y,u,v,eps11,eps22,gam12,sig11,sig22,sig12`; polar grids prepend the
/// polar coordinates and polar-resolved displacement
/// (`r,theta,x,y,u,v,ur,utheta,...`). The closure returns Cartesian
/// components. Points inside the exclusion radius are skipped.
pub fn sample_and_export_2d<W, F>(
    field: F,
    grid: &GridSpec,
    out: &mut W,
) -> Result<usize, VerifyError>
where
    W: Write,
    F: Fn(f64, f64) -> ([f64; 2], [f64; 3], [f64; 3]),
{
    let polar = matches!(grid, GridSpec::Polar { .. });
    let header = if polar {
        "r,theta,x,y,u,v,ur,utheta,eps11,eps22,gam12,sig11,sig22,sig12"
    } else {
        "x,y,u,v,eps11,eps22,gam12,sig11,sig22,sig12"
    };
    out.write_all(header.as_bytes())?;
    out.write_all(b"\n")?;
    let excl = grid.exclusion_radius();
    let mut rows = 0usize;
    for p in grid.points_2d() {
        if excl > 0.0 && p.x.hypot(p.y) < excl {
            continue;
        }
        let (uv, eps, sig) = field(p.x, p.y);
        let mut values: Vec<f64> = Vec::new();
        if polar {
            let theta = p.grid[1];
            let (st, ct) = theta.sin_cos();
            let ur = uv[0] * ct + uv[1] * st;
            let ut = -uv[0] * st + uv[1] * ct;
            values.extend_from_slice(&[p.grid[0], p.grid[1], p.x, p.y, uv[0], uv[1], ur, ut]);
        } else {
            values.extend_from_slice(&[p.x, p.y, uv[0], uv[1]]);
        }
        values.extend_from_slice(&eps);
        values.extend_from_slice(&sig);
        if values.iter().any(|v| !v.is_finite()) {
            return Err(VerifyError::NonFiniteSample { x: p.x, y: p.y });
        }
        write_row(out, &values)?;
        rows += 1;
    }
    Ok(rows)
}

/// A parsed material definition: either the eight 3D constants or the three
/// plane parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaterialDefinition {
    ThreeD(MaterialParams3D),
    Plane(PlaneMaterial),
}

const KEYS_3D: [&str; 8] = ["C11", "C13", "C16", "C33", "C44", "C45", "C61", "C66"];
const KEYS_2D: [&str; 3] = ["lambda0", "mu0", "mu"];

/// Parses a material definition: UTF-8 text, one `name = value` per line,
/// `#` comments. The key set decides the kind; mixing 3D and plane keys is
/// an error, as are unknown, duplicate, or missing keys.
pub fn parse_material_str(text: &str) -> Result<MaterialDefinition, MaterialFileError> {
    let mut values: Vec<(&'static str, f64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or(MaterialFileError::MalformedLine { line: line_no })?;
        let key = key.trim();
        let canonical = KEYS_3D
            .iter()
            .chain(KEYS_2D.iter())
            .find(|k| **k == key)
            .copied()
            .ok_or_else(|| MaterialFileError::UnknownKey {
                key: key.to_string(),
                line: line_no,
            })?;
        if values.iter().any(|(k, _)| *k == canonical) {
            return Err(MaterialFileError::DuplicateKey {
                key: key.to_string(),
                line: line_no,
            });
        }
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| MaterialFileError::MalformedNumber {
                line: line_no,
                text: value.trim().to_string(),
            })?;
        values.push((canonical, value));
    }

    let has_3d = values.iter().any(|(k, _)| KEYS_3D.contains(k));
    let has_2d = values.iter().any(|(k, _)| KEYS_2D.contains(k));
    if has_3d && has_2d {
        return Err(MaterialFileError::AmbiguousKind);
    }
    let get = |key: &'static str| -> Result<f64, MaterialFileError> {
        values
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or(MaterialFileError::MissingKey(key))
    };
    if has_2d {
        let lambda0 = get("lambda0")?;
        let mu0 = get("mu0")?;
        let mu = get("mu")?;
        Ok(MaterialDefinition::Plane(PlaneMaterial::new(
            lambda0, mu0, mu,
        )?))
    } else {
        // Missing keys are reported in canonical order; an empty file asks
        // for C11 first.
        let mut c = [0.0; 8];
        for (i, key) in KEYS_3D.iter().enumerate() {
            c[i] = get(key)?;
        }
        Ok(MaterialDefinition::ThreeD(MaterialParams3D::new(
            c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7],
        )?))
    }
}

/// File-reading wrapper around [`parse_material_str`].
pub fn parse_material_file(path: &Path) -> Result<MaterialDefinition, MaterialFileError> {
    let text = std::fs::read_to_string(path)?;
    parse_material_str(&text)
}
