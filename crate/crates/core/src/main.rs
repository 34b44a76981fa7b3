//! Command-line surface: material checks, invariance derivation, benchmark
//! solving with CSV export, and finite-difference verification.
//!
//! Exit codes: 0 all checks pass, 1 a check failed (residual above its
//! tolerance), 2 usage or parse error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use pseudoelastic::invariance::{
    build_constraint_system, describe_family, nullspace_basis, DEFAULT_ANGLES,
    NULLSPACE_TOL_DEFAULT,
};
use pseudoelastic::material::{
    build_c, check_rotational_invariance, family_components, invert_to_d, plane_reduce,
    sylvester_check, ComplianceMatrix6, ElasticityMatrix6, MaterialParams3D, PlaneMaterial,
};
use pseudoelastic::solutions2d::{
    solve_hole_biaxial, solve_hole_uniaxial, solve_washer, PlaneSolution,
};
use pseudoelastic::solutions3d::{
    solve_plate_bending, solve_torsion, BodyForce, PlateBendProblem, TorsionProblem,
};
use pseudoelastic::verify::{
    boundary_traction_check_2d, boundary_traction_check_3d, default_step,
    fd_compatibility_residual, fd_constitutive_closure_2d, fd_constitutive_closure_3d,
    fd_equilibrium_residual_2d, fd_equilibrium_residual_3d, parse_grid_spec, parse_material_file,
    sample_and_export_2d, sample_and_export_3d, Axis, GridSpec, MaterialDefinition,
    ResidualReport, ResidualStat,
};
use pseudoelastic::voigt::{inf_norm, Matrix6, RotationAngle};

#[derive(Parser)]
#[command(
    name = "pseudoelastic",
    version,
    about = "Asymmetric pseudoelasticity: material checks, exact solutions, FD verification"
)]
struct Cli {
    /// Material definition file (name = value lines; 3D C-keys or plane
    /// lambda0/mu0/mu keys).
    #[arg(short = 'm', long = "material", global = true)]
    material: Option<PathBuf>,

    /// Sampling grid, `x=LO:HI:N,y=LO:HI:N[,z=LO:HI:N]` or
    /// `r=LO:HI:N,theta=LO:HI:N`.
    #[arg(long, global = true)]
    grid: Option<String>,

    /// CSV output path for `solve`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Export 6-vectors in conventional Voigt order (33 in slot 3) instead
    /// of the native ordering.
    #[arg(long = "voigt-standard", global = true)]
    voigt_standard: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariance, Sylvester, and inversion report for a material file.
    CheckMaterial,
    /// Derive the invariant family from scratch: nullspace dimension,
    /// basis patterns, and the recovered equality list.
    DeriveInvariance {
        /// Comma-separated sampling angles in radians.
        #[arg(long)]
        angles: Option<String>,
        /// Relative singular-value cutoff.
        #[arg(long, default_value_t = NULLSPACE_TOL_DEFAULT)]
        tol: f64,
    },
    /// Solve a benchmark problem and optionally export the field as CSV.
    Solve {
        #[command(subcommand)]
        problem: Problem,
    },
    /// Run the finite-difference residual checks on a benchmark problem.
    Verify {
        /// Central-difference step (default: 1e-4 x grid diameter).
        #[arg(long = "h")]
        step: Option<f64>,
        /// Relative tolerance for all checks (default: 1e-8 for the
        /// polynomial problems, 1e-4 for the hole problems).
        #[arg(long)]
        tol: Option<f64>,
        #[command(subcommand)]
        problem: Problem,
    },
}

#[derive(Subcommand, Clone)]
enum Problem {
    /// Circular shaft torsion (3D material required).
    Torsion {
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        length: f64,
    },
    /// Biaxial plate bending by sigma1 = c1 z, sigma2 = c2 z (3D material).
    PlateBend {
        #[arg(long)]
        c1: f64,
        #[arg(long)]
        c2: f64,
        /// Plate half thickness.
        #[arg(long = "h")]
        half_thickness: f64,
        /// In-plane half extents (grid bounds only).
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
    },
    /// Circular washer under uniform pressure.
    Washer {
        #[arg(long)]
        p: f64,
        /// Washer radius (grid bounds and boundary check only).
        #[arg(long = "outer-radius", default_value_t = 1.0)]
        outer_radius: f64,
    },
    /// Biaxial tension of a plate with a circular hole.
    HoleBiaxial {
        #[arg(long)]
        p: f64,
        #[arg(long = "hole-radius", default_value_t = 1.0)]
        hole_radius: f64,
    },
    /// Uniaxial tension (along x) of a plate with a circular hole.
    HoleUniaxial {
        #[arg(long)]
        p: f64,
        #[arg(long = "hole-radius", default_value_t = 1.0)]
        hole_radius: f64,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

/// Anything that should terminate with exit code 2.
fn usage_error(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    2
}

fn run(cli: Cli) -> i32 {
    match &cli.command {
        Command::CheckMaterial => check_material(&cli),
        Command::DeriveInvariance { angles, tol } => derive_invariance(angles.as_deref(), *tol),
        Command::Solve { problem } => solve(&cli, &problem.clone()),
        Command::Verify { step, tol, problem } => verify(&cli, &problem.clone(), *step, *tol),
    }
}

fn load_material(cli: &Cli) -> Result<MaterialDefinition, String> {
    let path = cli
        .material
        .as_ref()
        .ok_or("a material file is required (-m FILE)")?;
    parse_material_file(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn require_3d(def: &MaterialDefinition) -> Result<MaterialParams3D, String> {
    match def {
        MaterialDefinition::ThreeD(p) => Ok(*p),
        MaterialDefinition::Plane(_) => {
            Err("this problem needs a 3D material (C11..C66 keys)".to_string())
        }
    }
}

/// Plane problems accept a plane file directly or reduce a 3D one.
fn require_plane(def: &MaterialDefinition) -> Result<PlaneMaterial, String> {
    match def {
        MaterialDefinition::Plane(m) => Ok(*m),
        MaterialDefinition::ThreeD(p) => {
            let (_, m) = plane_reduce(&build_c(p)).map_err(|e| e.to_string())?;
            Ok(m)
        }
    }
}

fn parse_grid_arg(cli: &Cli) -> Result<Option<GridSpec>, String> {
    match &cli.grid {
        None => Ok(None),
        Some(text) => parse_grid_spec(text).map(Some).map_err(|e| e.to_string()),
    }
}

fn check_material(cli: &Cli) -> i32 {
    let def = match load_material(cli) {
        Ok(d) => d,
        Err(e) => return usage_error(e),
    };
    match def {
        MaterialDefinition::Plane(m) => {
            println!(
                "plane material: lambda0={} mu0={} mu={}",
                m.lambda0, m.mu0, m.mu
            );
            println!(
                "derived: kappa0^2={:.6e} noncoaxiality mu0/mu={:.6e}",
                m.kappa0_sq(),
                m.noncoaxiality()
            );
            println!("RESULT: PASS");
            0
        }
        MaterialDefinition::ThreeD(p) => check_material_3d(&p),
    }
}

fn check_material_3d(p: &MaterialParams3D) -> i32 {
    let mut ok = true;
    let c = build_c(p);
    println!(
        "material: C11={} C13={} C16={} C33={} C44={} C45={} C61={} C66={} (C12={})",
        p.c11,
        p.c13,
        p.c16,
        p.c33,
        p.c44,
        p.c45,
        p.c61,
        p.c66,
        c.at(1, 2)
    );

    let angles: Vec<RotationAngle> = (0..32)
        .map(|k| RotationAngle(0.05 + k as f64 * std::f64::consts::TAU / 32.0))
        .collect();
    let dev = check_rotational_invariance(c.matrix(), &angles);
    let inv_pass = dev <= 1e-12;
    ok &= inv_pass;
    println!(
        "rotational invariance (32 angles): deviation {:.3e}  limit 1.000e-12  {}",
        dev,
        pass(inv_pass)
    );

    match invert_to_d(&c) {
        Err(e) => {
            println!("compliance: FAIL ({e})");
            ok = false;
        }
        Ok(d) => {
            let residual = inf_norm(&(d.matrix() * c.matrix() - Matrix6::identity()));
            let inv_ok = residual <= 1e-12 * inf_norm(c.matrix()) * inf_norm(d.matrix()).max(1.0);
            ok &= inv_ok;
            println!(
                "compliance: |D*C - I| = {:.3e}  {}",
                residual,
                pass(inv_ok)
            );
            println!(
                "  D44={:.9e} D45={:.9e} D11={:.9e} D12={:.9e} D13={:.9e} D16={:.9e} D33={:.9e} D61={:.9e} D66={:.9e}",
                d.at(4, 4),
                d.at(4, 5),
                d.at(1, 1),
                d.at(1, 2),
                d.at(1, 3),
                d.at(1, 6),
                d.at(3, 3),
                d.at(6, 1),
                d.at(6, 6)
            );
        }
    }

    let syl = sylvester_check(c.matrix());
    let minors: Vec<String> = syl.minors.iter().map(|m| format!("{m:.6e}")).collect();
    println!(
        "sylvester minors of (C + C^T)/2: [{}] -> positive definite: {}",
        minors.join(", "),
        if syl.positive_definite { "YES" } else { "NO" }
    );

    match plane_reduce(&c) {
        Ok((_, m)) => println!(
            "plane reduction: lambda0={} mu={} mu0={} kappa0^2={}",
            m.lambda0,
            m.mu,
            m.mu0,
            m.kappa0_sq()
        ),
        Err(e) => println!("plane reduction: not available ({e})"),
    }

    println!("RESULT: {}", pass(ok));
    i32::from(!ok)
}

fn derive_invariance(angles: Option<&str>, tol: f64) -> i32 {
    let angles: Vec<RotationAngle> = match angles {
        None => DEFAULT_ANGLES.iter().map(|&a| RotationAngle(a)).collect(),
        Some(text) => {
            let mut parsed = Vec::new();
            for part in text.split(',') {
                match part.trim().parse::<f64>() {
                    Ok(a) => parsed.push(RotationAngle(a)),
                    Err(_) => return usage_error(format!("bad angle `{part}`")),
                }
            }
            parsed
        }
    };

    let sys = match build_constraint_system(&angles) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("derivation failed: {e}");
            return 1;
        }
    };
    let basis = match nullspace_basis(&sys, tol) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("derivation failed: {e}");
            return 1;
        }
    };
    println!(
        "constraint system: {} rows over 36 unknowns ({} angles)",
        sys.row_count(),
        sys.angles().len()
    );
    println!("nullspace dimension: {}", basis.dimension());

    println!("basis patterns (family components C11 C13 C16 C33 C44 C45 C61 C66):");
    for (i, b) in basis.elements().iter().enumerate() {
        let comps = family_components(b);
        let row: Vec<String> = comps.iter().map(|v| format!("{v:+.4e}")).collect();
        println!("  b{}: {}", i + 1, row.join(" "));
    }

    let desc = describe_family(&basis, (tol * 100.0).min(1e-6));
    let zeros: Vec<String> = desc
        .zero_slots
        .iter()
        .map(|(i, j)| format!("C{i}{j}"))
        .collect();
    println!("zero slots ({}): {}", zeros.len(), zeros.join(" "));
    println!("equalities:");
    for (am, an, bm, bn, s) in &desc.pair_equalities {
        let sign = if *s > 0.0 { "" } else { "-" };
        println!("  C{am}{an} = {sign}C{bm}{bn}");
    }
    for rel in &desc.linear_relations {
        println!("  {rel}");
    }

    let ok = basis.dimension() == 8;
    println!("RESULT: {}", pass(ok));
    i32::from(!ok)
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn open_out(path: &PathBuf) -> Result<BufWriter<File>, String> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| format!("{}: {e}", path.display()))
}

/// 3D stiffness/compliance pair for the polynomial problems.
fn matrices_3d(def: &MaterialDefinition) -> Result<(ElasticityMatrix6, ComplianceMatrix6), String> {
    let p = require_3d(def)?;
    let c = build_c(&p);
    let d = invert_to_d(&c).map_err(|e| e.to_string())?;
    Ok((c, d))
}

fn default_grid(problem: &Problem) -> GridSpec {
    match *problem {
        Problem::Torsion { radius, length, .. } => GridSpec::Cart3 {
            x: Axis::new(-0.6 * radius, 0.6 * radius, 7).unwrap(),
            y: Axis::new(-0.6 * radius, 0.6 * radius, 7).unwrap(),
            z: Axis::new(-0.45 * length, 0.45 * length, 5).unwrap(),
            exclusion_radius: 0.0,
        },
        Problem::PlateBend {
            half_thickness,
            a,
            b,
            ..
        } => GridSpec::Cart3 {
            x: Axis::new(-0.8 * a, 0.8 * a, 7).unwrap(),
            y: Axis::new(-0.8 * b, 0.8 * b, 7).unwrap(),
            z: Axis::new(-0.8 * half_thickness, 0.8 * half_thickness, 5).unwrap(),
            exclusion_radius: 0.0,
        },
        Problem::Washer { outer_radius, .. } => GridSpec::Cart2 {
            x: Axis::new(-0.7 * outer_radius, 0.7 * outer_radius, 7).unwrap(),
            y: Axis::new(-0.7 * outer_radius, 0.7 * outer_radius, 7).unwrap(),
            exclusion_radius: 0.0,
        },
        Problem::HoleBiaxial { hole_radius, .. } | Problem::HoleUniaxial { hole_radius, .. } => {
            GridSpec::Polar {
                r: Axis::new(1.5 * hole_radius, 4.0 * hole_radius, 7).unwrap(),
                theta: Axis::new(0.0, std::f64::consts::TAU, 13).unwrap(),
                exclusion_radius: hole_radius,
            }
        }
    }
}

fn plane_solution(problem: &Problem, m: &PlaneMaterial) -> Option<PlaneSolution> {
    match *problem {
        Problem::Washer { p, .. } => Some(solve_washer(p, m)),
        Problem::HoleBiaxial { p, hole_radius } => Some(solve_hole_biaxial(p, hole_radius, m)),
        Problem::HoleUniaxial { p, hole_radius } => Some(solve_hole_uniaxial(p, hole_radius, m)),
        _ => None,
    }
}

fn solve(cli: &Cli, problem: &Problem) -> i32 {
    let def = match load_material(cli) {
        Ok(d) => d,
        Err(e) => return usage_error(e),
    };
    let grid_arg = match parse_grid_arg(cli) {
        Ok(g) => g,
        Err(e) => return usage_error(e),
    };

    match problem {
        Problem::Torsion {
            tau,
            radius,
            length,
        } => {
            let (_, d) = match matrices_3d(&def) {
                Ok(v) => v,
                Err(e) => return usage_error(e),
            };
            let tp = TorsionProblem::new(*tau, *radius, *length);
            let sol = solve_torsion(&tp, &d);
            println!(
                "torsion: tau={} R={} L={}  a5={:.9e}",
                tau,
                radius,
                length,
                sol.shear_coefficient()
            );
            println!("twist rate omega = D44 a5 = {:.9e}", sol.twist_rate());
            println!(
                "deplanation w3 = {:.9e} * r^2 (zero classically)",
                0.5 * d.at(4, 5) * sol.shear_coefficient()
            );
            if let Some(path) = &cli.out {
                let grid = grid_arg.unwrap_or_else(|| default_grid(problem));
                if !grid.is_3d() {
                    return usage_error("torsion export needs a 3D grid (x,y,z)");
                }
                let mut out = match open_out(path) {
                    Ok(o) => o,
                    Err(e) => return usage_error(e),
                };
                let rows = sample_and_export_3d(
                    |x, y, z| {
                        (
                            sol.displacement_at(x, y, z),
                            sol.strain_at(x, y, z).0,
                            sol.stress_at(x, y, z).0,
                        )
                    },
                    &grid,
                    &mut out,
                    cli.voigt_standard,
                );
                match rows.and_then(|r| out.flush().map(|_| r).map_err(Into::into)) {
                    Ok(r) => println!("wrote {r} rows to {}", path.display()),
                    Err(e) => return usage_error(e),
                }
            }
            0
        }
        Problem::PlateBend {
            c1,
            c2,
            half_thickness,
            a,
            b,
        } => {
            let (_, d) = match matrices_3d(&def) {
                Ok(v) => v,
                Err(e) => return usage_error(e),
            };
            let pp = PlateBendProblem::new(*c1, *c2, *half_thickness, *a, *b);
            let sol = solve_plate_bending(&pp, &d);
            let al = sol.alphas();
            println!(
                "plate-bend: c1={} c2={} h={}  alpha15={:.9e} alpha16={:.9e} alpha26={:.9e}",
                c1, c2, half_thickness, al.a15, al.a16, al.a26
            );
            println!(
                "deflection 2 w3 = {:.9e} x^2 + {:.9e} y^2 + 2 ({:.9e}) xy",
                al.a31, al.a32, al.a34
            );
            if al.a34 != 0.0 {
                println!("cross term present: level-line asymptotes rotate");
            }
            if let Some(path) = &cli.out {
                let grid = grid_arg.unwrap_or_else(|| default_grid(problem));
                if !grid.is_3d() {
                    return usage_error("plate export needs a 3D grid (x,y,z)");
                }
                let mut out = match open_out(path) {
                    Ok(o) => o,
                    Err(e) => return usage_error(e),
                };
                let rows = sample_and_export_3d(
                    |x, y, z| {
                        (
                            sol.displacement_at(x, y, z),
                            sol.strain_at(x, y, z).0,
                            sol.stress_at(x, y, z).0,
                        )
                    },
                    &grid,
                    &mut out,
                    cli.voigt_standard,
                );
                match rows.and_then(|r| out.flush().map(|_| r).map_err(Into::into)) {
                    Ok(r) => println!("wrote {r} rows to {}", path.display()),
                    Err(e) => return usage_error(e),
                }
            }
            0
        }
        _ => {
            let m = match require_plane(&def) {
                Ok(m) => m,
                Err(e) => return usage_error(e),
            };
            let sol = plane_solution(problem, &m).expect("plane benchmark");
            println!(
                "plane material: lambda0={} mu0={} mu={} kappa0^2={}",
                m.lambda0,
                m.mu0,
                m.mu,
                m.kappa0_sq()
            );
            match problem {
                Problem::Washer { p, .. } => {
                    let d1 = sol.displacement_polar(1.0, 0.0).expect("regular point");
                    println!(
                        "washer p={}: u_r = {:.9e} r, u_theta = {:.9e} r",
                        p, d1.u_r, d1.u_theta
                    );
                }
                Problem::HoleBiaxial { p, hole_radius } => {
                    let b = sol.boundary_displacement(0.0).expect("hole boundary");
                    println!(
                        "hole-biaxial p={} R={}: u_r|R = {:.9e}, u_theta|R = {:.9e}",
                        p, hole_radius, b.u_r, b.u_theta
                    );
                }
                Problem::HoleUniaxial { p, hole_radius } => {
                    let b0 = sol.boundary_displacement(0.0).expect("hole boundary");
                    let b90 = sol
                        .boundary_displacement(std::f64::consts::FRAC_PI_2)
                        .expect("hole boundary");
                    let s90 = sol
                        .stress_polar(*hole_radius, std::f64::consts::FRAC_PI_2)
                        .expect("contour point");
                    println!(
                        "hole-uniaxial p={} R={}: u_r|R(0) = {:.9e}, u_r|R(pi/2) = {:.9e}",
                        p, hole_radius, b0.u_r, b90.u_r
                    );
                    println!("stress concentration sigma_tt(R, pi/2) = {:.9e}", s90.stt);
                }
                _ => unreachable!(),
            }
            if let Some(path) = &cli.out {
                let mut grid = grid_arg.unwrap_or_else(|| default_grid(problem));
                if grid.is_3d() {
                    return usage_error("plane export needs a 2D grid (x,y or r,theta)");
                }
                grid.set_exclusion_radius(grid.exclusion_radius().max(sol.min_radius()));
                let mut out = match open_out(path) {
                    Ok(o) => o,
                    Err(e) => return usage_error(e),
                };
                let rows = sample_and_export_2d(
                    |x, y| {
                        let z = Complex64::new(x, y);
                        let dsp = sol.displacement_cartesian(z).expect("inside domain");
                        let s = sol.stress_cartesian(z).expect("inside domain");
                        (
                            [dsp.u, dsp.v],
                            sol.strain_cartesian(z).expect("inside domain"),
                            [s.s11, s.s22, s.s12],
                        )
                    },
                    &grid,
                    &mut out,
                );
                match rows.and_then(|r| out.flush().map(|_| r).map_err(Into::into)) {
                    Ok(r) => println!("wrote {r} rows to {}", path.display()),
                    Err(e) => return usage_error(e),
                }
            }
            0
        }
    }
}

struct CheckLine {
    name: &'static str,
    value: f64,
    mean: Option<f64>,
    limit: f64,
}

impl CheckLine {
    fn stat(name: &'static str, s: &ResidualStat, limit: f64) -> Self {
        CheckLine {
            name,
            value: s.max_abs,
            mean: Some(s.mean_abs),
            limit,
        }
    }

    fn max(name: &'static str, value: f64, limit: f64) -> Self {
        CheckLine {
            name,
            value,
            mean: None,
            limit,
        }
    }
}

fn print_checks(lines: &[CheckLine]) -> bool {
    let mut ok = true;
    for l in lines {
        let line_ok = l.value <= l.limit;
        ok &= line_ok;
        let mean = match l.mean {
            Some(m) => format!("  mean {m:.3e}"),
            None => String::new(),
        };
        println!(
            "  {:<14} max {:.3e}{mean}  limit {:.3e}  {}",
            l.name,
            l.value,
            l.limit,
            pass(line_ok)
        );
    }
    ok
}

fn verify(cli: &Cli, problem: &Problem, step: Option<f64>, tol: Option<f64>) -> i32 {
    let def = match load_material(cli) {
        Ok(d) => d,
        Err(e) => return usage_error(e),
    };
    let grid_arg = match parse_grid_arg(cli) {
        Ok(g) => g,
        Err(e) => return usage_error(e),
    };

    let result = match problem {
        Problem::Torsion {
            tau,
            radius,
            length,
        } => {
            let (c, d) = match matrices_3d(&def) {
                Ok(v) => v,
                Err(e) => return usage_error(e),
            };
            let tp = TorsionProblem::new(*tau, *radius, *length);
            let sol = solve_torsion(&tp, &d);
            let grid = grid_arg.unwrap_or_else(|| default_grid(problem));
            if !grid.is_3d() {
                return usage_error("torsion verification needs a 3D grid (x,y,z)");
            }
            let h = step.unwrap_or_else(|| default_step(&grid));
            let tol = tol.unwrap_or(1e-8);
            let mag = tau.abs().max(f64::MIN_POSITIVE);
            println!("verify torsion: tau={tau} R={radius} L={length}  h={h:.3e} tol={tol:.3e}");

            let eq = fd_equilibrium_residual_3d(
                |x, y, z| sol.stress_at(x, y, z).0,
                &BodyForce::ZERO,
                &grid,
                h,
            );
            let cc = fd_constitutive_closure_3d(
                |x, y, z| sol.displacement_at(x, y, z),
                &c,
                |x, y, z| sol.stress_at(x, y, z).0,
                &grid,
                h,
            );
            let (eq, cc) = match (eq, cc) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return usage_error(e),
            };
            let traction = boundary_traction_check_3d(
                |x, y, z| sol.stress_at(x, y, z).0,
                tp.radius,
                0.5 * tp.length,
                64,
            );
            let report = ResidualReport {
                equilibrium: Some(eq),
                constitutive: Some(cc),
                compatibility: None,
                boundary_traction: Some(traction),
                step: h,
                magnitude: mag,
            };
            // Contour shear must reproduce tau at r = R.
            let contour_dev = (0..64)
                .map(|k| {
                    let th = k as f64 * std::f64::consts::TAU / 64.0;
                    let s = sol.stress_at(tp.radius * th.cos(), tp.radius * th.sin(), 0.0).0;
                    let szphi = s[4] * th.cos() - s[3] * th.sin();
                    (szphi - tp.tau).abs()
                })
                .fold(0.0, f64::max);
            print_checks(&[
                CheckLine::stat(
                    "equilibrium",
                    report.equilibrium.as_ref().unwrap(),
                    tol * mag / radius,
                ),
                CheckLine::stat("constitutive", report.constitutive.as_ref().unwrap(), tol * mag),
                CheckLine::max("traction", report.boundary_traction.unwrap(), tol * mag),
                CheckLine::max("contour shear", contour_dev, tol * mag),
            ])
        }
        Problem::PlateBend {
            c1,
            c2,
            half_thickness,
            a,
            b,
        } => {
            let (c, d) = match matrices_3d(&def) {
                Ok(v) => v,
                Err(e) => return usage_error(e),
            };
            let pp = PlateBendProblem::new(*c1, *c2, *half_thickness, *a, *b);
            let sol = solve_plate_bending(&pp, &d);
            let grid = grid_arg.unwrap_or_else(|| default_grid(problem));
            if !grid.is_3d() {
                return usage_error("plate verification needs a 3D grid (x,y,z)");
            }
            let h = step.unwrap_or_else(|| default_step(&grid));
            let tol = tol.unwrap_or(1e-8);
            let mag = (c1.abs().max(c2.abs()) * half_thickness).max(f64::MIN_POSITIVE);
            println!(
                "verify plate-bend: c1={c1} c2={c2} half-thickness={half_thickness}  h={h:.3e} tol={tol:.3e}"
            );

            let eq = fd_equilibrium_residual_3d(
                |x, y, z| sol.stress_at(x, y, z).0,
                &BodyForce::ZERO,
                &grid,
                h,
            );
            let cc = fd_constitutive_closure_3d(
                |x, y, z| sol.displacement_at(x, y, z),
                &c,
                |x, y, z| sol.stress_at(x, y, z).0,
                &grid,
                h,
            );
            let (eq, cc) = match (eq, cc) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return usage_error(e),
            };
            // Faces z = +-h carry no load: slots 4, 5, 6 vanish there.
            let mut face = 0.0f64;
            for &z in &[-pp.h, pp.h] {
                for ix in 0..8 {
                    for iy in 0..8 {
                        let x = -pp.a + 2.0 * pp.a * ix as f64 / 7.0;
                        let y = -pp.b + 2.0 * pp.b * iy as f64 / 7.0;
                        let s = sol.stress_at(x, y, z).0;
                        face = face.max((s[3] * s[3] + s[4] * s[4] + s[5] * s[5]).sqrt());
                    }
                }
            }
            let report = ResidualReport {
                equilibrium: Some(eq),
                constitutive: Some(cc),
                compatibility: None,
                boundary_traction: Some(face),
                step: h,
                magnitude: mag,
            };
            print_checks(&[
                CheckLine::stat(
                    "equilibrium",
                    report.equilibrium.as_ref().unwrap(),
                    tol * mag / half_thickness,
                ),
                CheckLine::stat("constitutive", report.constitutive.as_ref().unwrap(), tol * mag),
                CheckLine::max("face traction", report.boundary_traction.unwrap(), tol * mag),
            ])
        }
        _ => {
            let m = match require_plane(&def) {
                Ok(m) => m,
                Err(e) => return usage_error(e),
            };
            let sol = plane_solution(problem, &m).expect("plane benchmark");
            let mut grid = grid_arg.unwrap_or_else(|| default_grid(problem));
            if grid.is_3d() {
                return usage_error("plane verification needs a 2D grid (x,y or r,theta)");
            }
            grid.set_exclusion_radius(grid.exclusion_radius().max(sol.min_radius()));
            let h = step.unwrap_or_else(|| default_step(&grid));
            let default_tol = if sol.min_radius() > 0.0 { 1e-4 } else { 1e-8 };
            let tol = tol.unwrap_or(default_tol);
            let mag = sol.magnitude().max(f64::MIN_POSITIVE);
            let label = match problem {
                Problem::Washer { .. } => "washer",
                Problem::HoleBiaxial { .. } => "hole-biaxial",
                _ => "hole-uniaxial",
            };
            println!("verify {label}: p={}  h={h:.3e} tol={tol:.3e}", sol.magnitude());

            let stress = |x: f64, y: f64| {
                let s = sol.stress_cartesian(Complex64::new(x, y)).expect("domain");
                [s.s11, s.s22, s.s12]
            };
            let disp = |x: f64, y: f64| {
                let dsp = sol
                    .displacement_cartesian(Complex64::new(x, y))
                    .expect("domain");
                [dsp.u, dsp.v]
            };
            let strain =
                |x: f64, y: f64| sol.strain_cartesian(Complex64::new(x, y)).expect("domain");

            let eq = fd_equilibrium_residual_2d(stress, &grid, h);
            let cc = fd_constitutive_closure_2d(disp, &m, stress, &grid, h);
            let comp = fd_compatibility_residual(strain, &grid, h);
            let (eq, cc, comp): (ResidualStat, ResidualStat, ResidualStat) =
                match (eq, cc, comp) {
                    (Ok(a), Ok(b), Ok(c)) => (a, b, c),
                    (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return usage_error(e),
                };

            // The contour deviation: traction-free hole, or the prescribed
            // pressure on the washer rim.
            let boundary = match problem {
                Problem::Washer { p, outer_radius } => (0..64)
                    .map(|k| {
                        let th = k as f64 * std::f64::consts::TAU / 64.0;
                        let s = sol.stress_polar(*outer_radius, th).expect("domain");
                        (s.srr + p).abs().max(s.srt.abs())
                    })
                    .fold(0.0f64, f64::max),
                _ => boundary_traction_check_2d(stress, sol.min_radius(), 64),
            };
            let report = ResidualReport {
                equilibrium: Some(eq),
                constitutive: Some(cc),
                compatibility: Some(comp),
                boundary_traction: Some(boundary),
                step: h,
                magnitude: mag,
            };
            let length_scale = sol.min_radius().max(1.0);
            let boundary_name = match problem {
                Problem::Washer { .. } => "boundary load",
                _ => "traction(r=R)",
            };
            print_checks(&[
                CheckLine::stat(
                    "equilibrium",
                    report.equilibrium.as_ref().unwrap(),
                    tol * mag / length_scale,
                ),
                CheckLine::stat("constitutive", report.constitutive.as_ref().unwrap(), tol * mag),
                CheckLine::stat(
                    "compatibility",
                    report.compatibility.as_ref().unwrap(),
                    tol * mag / (length_scale * length_scale),
                ),
                CheckLine::max(boundary_name, report.boundary_traction.unwrap(), tol * mag),
            ])
        }
    };

    println!("RESULT: {}", pass(result));
    i32::from(!result)
}
