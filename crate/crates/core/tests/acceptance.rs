//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS line with the quantity it pinned. Tolerances are hard-coded here;
//! loosening them is an API break, not a calibration knob.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pseudoelastic::invariance::{
    build_constraint_system, membership_residual, nullspace_basis, DEFAULT_ANGLES,
    NULLSPACE_TOL_DEFAULT,
};
use pseudoelastic::material::{
    build_c, check_rotational_invariance, family_matrix, invert_to_d, MaterialParams3D,
    PlaneMaterial,
};
use pseudoelastic::solutions2d::{
    classical_limit_compare, solve_hole_biaxial, solve_hole_uniaxial, solve_washer,
};
use pseudoelastic::solutions3d::{
    solve_plate_bending, solve_torsion, BodyForce, PlateBendProblem, TorsionProblem,
};
use pseudoelastic::verify::{
    boundary_traction_check_3d, fd_constitutive_closure_2d, fd_constitutive_closure_3d,
    fd_equilibrium_residual_3d, Axis, GridSpec,
};
use pseudoelastic::voigt::{Matrix6, RotationAngle};

fn m1() -> MaterialParams3D {
    MaterialParams3D::new(10.0, 2.0, 1.0, 3.0, 2.0, 0.5, 1.5, 8.0).unwrap()
}

fn random_params(rng: &mut ChaCha8Rng) -> MaterialParams3D {
    MaterialParams3D::new(
        rng.gen_range(2.0..10.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(0.2..1.0),
        rng.gen_range(0.2..4.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(2.0..10.0),
    )
    .unwrap()
}

fn thirty_two_angles() -> Vec<RotationAngle> {
    (0..32)
        .map(|k| RotationAngle(0.05 + k as f64 * std::f64::consts::TAU / 32.0))
        .collect()
}

#[test]
fn criterion_01_rotational_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let angles = thirty_two_angles();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let c = build_c(&random_params(&mut rng));
        worst = worst.max(check_rotational_invariance(c.matrix(), &angles));
    }
    assert!(worst <= 1e-12, "worst deviation {worst}");
    println!("criterion 1 PASS: invariance deviation {worst:.3e} <= 1e-12 over 100 materials x 32 angles");
}

#[test]
fn criterion_02_invariance_family_derivation() {
    let angles: Vec<RotationAngle> = DEFAULT_ANGLES.iter().map(|&a| RotationAngle(a)).collect();
    let sys = build_constraint_system(&angles).unwrap();
    let basis = nullspace_basis(&sys, NULLSPACE_TOL_DEFAULT).unwrap();
    assert_eq!(basis.dimension(), 8, "nullspace dimension");

    // Classical transversely isotropic symmetric matrix lies inside.
    let ti = build_c(&MaterialParams3D::new(9.0, 0.0, 2.5, 2.0, 1.5, 0.0, 2.5, 7.0).unwrap());
    let inside = membership_residual(ti.matrix(), &basis);
    assert!(inside <= 1e-12, "TI membership residual {inside}");

    let outside = membership_residual(&Matrix6::identity(), &basis);
    assert!(outside > 0.05, "identity membership residual {outside}");
    println!(
        "criterion 2 PASS: dimension 8; TI inside ({inside:.3e}); identity outside ({outside:.3e} > 0.05)"
    );
}

#[test]
fn criterion_03_compliance_structure() {
    let zeros = [
        (1, 4),
        (1, 5),
        (2, 4),
        (2, 5),
        (3, 4),
        (3, 5),
        (3, 6),
        (4, 1),
        (4, 2),
        (4, 3),
        (4, 6),
        (5, 1),
        (5, 2),
        (5, 3),
        (5, 6),
        (6, 3),
        (6, 4),
        (6, 5),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for trial in 0..25 {
        let p = if trial == 0 { m1() } else { random_params(&mut rng) };
        let d = invert_to_d(&build_c(&p)).unwrap();
        for (i, j) in zeros {
            assert_eq!(d.at(i, j), 0.0, "D{i}{j} nonzero for {p:?}");
        }
        let det = p.c44 * p.c44 + p.c45 * p.c45;
        assert!((d.at(4, 4) - p.c44 / det).abs() <= 1e-14);
        assert!((d.at(4, 5) - (-p.c45 / det)).abs() <= 1e-14);
    }
    let d = invert_to_d(&build_c(&m1())).unwrap();
    assert!((d.at(4, 4) - 8.0 / 17.0).abs() <= 1e-16);
    assert!((d.at(4, 5) - (-2.0 / 17.0)).abs() <= 1e-16);
    println!(
        "criterion 3 PASS: 18 compliance zeros exact over 25 materials; D44 = 8/17, D45 = -2/17 for the reference set"
    );
}

#[test]
fn criterion_04_torsion() {
    let (tau, radius, length) = (1.0, 1.0, 2.0);
    let d = invert_to_d(&build_c(&m1())).unwrap();
    let tp = TorsionProblem::new(tau, radius, length);
    let sol = solve_torsion(&tp, &d);
    let a5 = sol.shear_coefficient();

    let grid = GridSpec::Cart3 {
        x: Axis::new(-0.6, 0.6, 6).unwrap(),
        y: Axis::new(-0.6, 0.6, 6).unwrap(),
        z: Axis::new(-0.8, 0.8, 4).unwrap(),
        exclusion_radius: 0.0,
    };
    let eq = fd_equilibrium_residual_3d(
        |x, y, z| sol.stress_at(x, y, z).0,
        &BodyForce::ZERO,
        &grid,
        1e-3,
    )
    .unwrap();
    assert!(eq.max_abs <= 1e-9 * tau / radius, "equilibrium {}", eq.max_abs);

    let traction = boundary_traction_check_3d(
        |x, y, z| sol.stress_at(x, y, z).0,
        radius,
        0.5 * length,
        64,
    );
    assert!(traction <= 1e-12 * tau, "lateral traction {traction}");

    let mut contour_dev: f64 = 0.0;
    for k in 0..64 {
        let th = k as f64 * std::f64::consts::TAU / 64.0;
        let s = sol.stress_at(radius * th.cos(), radius * th.sin(), 0.3).0;
        let szphi = s[4] * th.cos() - s[3] * th.sin();
        contour_dev = contour_dev.max((szphi - tau).abs());
    }
    assert!(contour_dev <= 1e-14, "sigma_zphi(R) deviation {contour_dev}");

    // Deplanation formula w3 = D45 a5 r^2 / 2.
    let mut w3_dev: f64 = 0.0;
    for &(x, y, z) in &[(0.3, 0.4, 0.9), (0.7, -0.2, -0.5), (0.0, 0.9, 0.1)] {
        let w3 = sol.displacement_at(x, y, z)[2];
        w3_dev = w3_dev.max((w3 - 0.5 * d.at(4, 5) * a5 * (x * x + y * y)).abs());
    }
    assert!(w3_dev <= 1e-14, "w3 deviation {w3_dev}");

    // D45 = 0 recovers the classical field: w3 identically zero.
    let classical = invert_to_d(&build_c(&MaterialParams3D::isotropic(1.3, 0.8).unwrap())).unwrap();
    let csol = solve_torsion(&tp, &classical);
    for &(x, y, z) in &[(0.3, 0.4, 0.9), (0.5, 0.5, -1.0)] {
        assert_eq!(csol.displacement_at(x, y, z)[2], 0.0);
    }
    println!(
        "criterion 4 PASS: torsion equilibrium {:.3e}, lateral traction {traction:.3e}, contour shear dev {contour_dev:.3e}, w3 dev {w3_dev:.3e}, classical w3 == 0",
        eq.max_abs
    );
}

#[test]
fn criterion_05_plate_bending() {
    let c = build_c(&m1());
    let d = invert_to_d(&c).unwrap();
    let (c1, c2, h) = (0.4, 1.0, 0.1);
    let sol = solve_plate_bending(&PlateBendProblem::new(c1, c2, h, 1.0, 1.0), &d);
    let al = sol.alphas();

    // Coefficient table against compliance entries.
    let a15 = d.at(1, 1) * c1 + d.at(1, 2) * c2;
    let a16 = 0.5 * (d.at(3, 1) * c1 + d.at(3, 2) * c2);
    let a26 = d.at(2, 1) * c1 + d.at(2, 2) * c2;
    assert!((al.a15 - a15).abs() <= 1e-14);
    assert!((al.a16 - a16).abs() <= 1e-14);
    assert!((al.a26 - a26).abs() <= 1e-14);
    assert!((al.a25 - a16).abs() <= 1e-14);
    assert!((al.a31 + a15).abs() <= 1e-14);
    assert!((al.a32 + a26).abs() <= 1e-14);
    assert!((al.a34 + a16).abs() <= 1e-14);

    // a34 vanishes whenever D31 c1 + D32 c2 does: classically (D31 = D32 =
    // 0), and for c1 = c2 with the family's exact D32 = -D31.
    let iso = invert_to_d(&build_c(&MaterialParams3D::isotropic(1.3, 0.8).unwrap())).unwrap();
    let csol = solve_plate_bending(&PlateBendProblem::new(0.7, -0.2, h, 1.0, 1.0), &iso);
    assert_eq!(csol.alphas().a34, 0.0);
    assert_eq!(d.at(3, 2), -d.at(3, 1));
    let balanced = solve_plate_bending(&PlateBendProblem::new(0.9, 0.9, h, 1.0, 1.0), &d);
    assert_eq!(balanced.alphas().a34, 0.0);

    // FD strain-from-displacement closure.
    let grid = GridSpec::Cart3 {
        x: Axis::new(-0.8, 0.8, 5).unwrap(),
        y: Axis::new(-0.8, 0.8, 5).unwrap(),
        z: Axis::new(-0.08, 0.08, 4).unwrap(),
        exclusion_radius: 0.0,
    };
    let closure = fd_constitutive_closure_3d(
        |x, y, z| sol.displacement_at(x, y, z),
        &c,
        |x, y, z| sol.stress_at(x, y, z).0,
        &grid,
        1e-3,
    )
    .unwrap();
    let scale = c1.abs().max(c2.abs()) * h;
    assert!(closure.max_abs <= 1e-9 * scale, "closure {}", closure.max_abs);
    println!(
        "criterion 5 PASS: alpha table to 1e-14; a34 == 0 in both null cases; FD closure {:.3e} <= {:.3e}",
        closure.max_abs,
        1e-9 * scale
    );
}

#[test]
fn criterion_06_washer() {
    let m = PlaneMaterial::new(2.0, 0.5, 1.0).unwrap();
    let sol = solve_washer(1.0, &m);
    let d = sol.displacement_polar(1.0, 0.7).unwrap();
    assert!((d.u_r - (-0.25)).abs() <= 1e-14, "u_r {}", d.u_r);
    assert!((d.u_theta - 0.2).abs() <= 1e-14, "u_theta {}", d.u_theta);

    let classical = solve_washer(1.0, &PlaneMaterial::new(2.0, 0.0, 1.0).unwrap());
    for &(r, t) in &[(0.3, 0.0), (1.0, 1.2), (2.5, -2.0)] {
        assert!(classical.displacement_polar(r, t).unwrap().u_theta.abs() <= 1e-15);
    }

    let plus = solve_washer(1.0, &PlaneMaterial::new(2.0, 0.5, 1.0).unwrap());
    let minus = solve_washer(1.0, &PlaneMaterial::new(2.0, -0.5, 1.0).unwrap());
    for &(r, t) in &[(0.5, 0.4), (1.5, 2.9)] {
        let dp = plus.displacement_polar(r, t).unwrap();
        let dm = minus.displacement_polar(r, t).unwrap();
        assert!((dp.u_theta + dm.u_theta).abs() <= 1e-15);
        assert!((dp.u_r - dm.u_r).abs() <= 1e-15);
    }
    println!(
        "criterion 6 PASS: washer (u_r, u_theta) = (-0.25, 0.2) to 1e-14; u_theta == 0 classically; mu0 sign flip mirrors u_theta"
    );
}

/// Textbook hole-problem stress fields (Lame pressurized hole and the
/// Kirsch solution), rotated to Cartesian axes; coded independently of the
/// potential engine.
fn reference_stress_cartesian(biaxial: bool, p: f64, rr: f64, x: f64, y: f64) -> [f64; 3] {
    let r = x.hypot(y);
    let theta = y.atan2(x);
    let q = rr * rr / (r * r);
    let (srr, stt, srt) = if biaxial {
        (p * (1.0 - q), p * (1.0 + q), 0.0)
    } else {
        let q2 = q * q;
        let c2 = (2.0 * theta).cos();
        let s2 = (2.0 * theta).sin();
        (
            0.5 * p * (1.0 - q + (1.0 - 4.0 * q + 3.0 * q2) * c2),
            0.5 * p * (1.0 + q - (1.0 + 3.0 * q2) * c2),
            -0.5 * p * (1.0 + 2.0 * q - 3.0 * q2) * s2,
        )
    };
    let (s, c) = theta.sin_cos();
    let (c2t, s2t, cst) = (c * c, s * s, c * s);
    [
        srr * c2t + stt * s2t - 2.0 * srt * cst,
        srr * s2t + stt * c2t + 2.0 * srt * cst,
        (srr - stt) * cst + srt * (c2t - s2t),
    ]
}

#[test]
fn criterion_07_hole_closure_end_to_end() {
    let m = PlaneMaterial::new(2.0, 0.5, 1.0).unwrap();
    let (p, rr) = (1.0, 1.0);
    let grid = GridSpec::Polar {
        r: Axis::new(1.5 * rr, 4.0 * rr, 6).unwrap(),
        theta: Axis::new(0.1, 6.2, 9).unwrap(),
        exclusion_radius: rr,
    };
    for (biaxial, sol) in [
        (true, solve_hole_biaxial(p, rr, &m)),
        (false, solve_hole_uniaxial(p, rr, &m)),
    ] {
        let disp = |x: f64, y: f64| {
            let d = sol.displacement_cartesian(Complex64::new(x, y)).unwrap();
            [d.u, d.v]
        };
        // Compared against the textbook fields above, not the engine's own
        // stress evaluation.
        let reference = |x: f64, y: f64| reference_stress_cartesian(biaxial, p, rr, x, y);
        let coarse = fd_constitutive_closure_2d(disp, &m, reference, &grid, 1e-4).unwrap();
        let fine = fd_constitutive_closure_2d(disp, &m, reference, &grid, 5e-5).unwrap();
        assert!(
            coarse.max_abs <= 1e-5 * p,
            "closure {} ({})",
            coarse.max_abs,
            if biaxial { "biaxial" } else { "uniaxial" }
        );
        let ratio = coarse.max_abs / fine.max_abs;
        assert!(
            (3.5..=4.5).contains(&ratio),
            "O(h^2) decay ratio {ratio} ({})",
            if biaxial { "biaxial" } else { "uniaxial" }
        );
        println!(
            "criterion 7 PASS ({}): FD->constitutive vs reference stresses {:.3e} <= 1e-5 p, halving ratio {ratio:.2}",
            if biaxial { "biaxial" } else { "uniaxial" },
            coarse.max_abs
        );
    }
}

#[test]
fn criterion_08_boundary_values() {
    let m = PlaneMaterial::new(2.0, 0.5, 1.0).unwrap();
    let (p, rr) = (1.0, 1.0);

    let biax = solve_hole_biaxial(p, rr, &m);
    for &theta in &[0.0, 0.9, 2.3, -1.6] {
        assert_eq!(biax.boundary_displacement(theta).unwrap().u_theta, 0.0);
    }

    // Uniaxial coefficient forms against direct evaluation of the closed
    // displacement formulas at r = R (hand-coded oracle).
    let uni = solve_hole_uniaxial(p, rr, &m);
    let k0sq = m.kappa0_sq();
    let (l0, mu, mu0) = (m.lambda0, m.mu, m.mu0);
    let mut worst: f64 = 0.0;
    for &theta in &[0.0, 0.3, 1.0, 1.8, 2.6, -0.8] {
        let b = uni.boundary_displacement(theta).unwrap();
        let c2 = (2.0 * theta).cos();
        let s2 = (2.0 * theta).sin();
        // The closed displacement formulas specialized to r = R.
        let ur = 0.25 * p * rr * (1.0 / l0 + mu / k0sq)
            + 0.25 * mu0 / k0sq * p * rr * (1.0 - 2.0 + 1.0) * s2
            + 0.25 * p * rr * (2.0 / l0 + mu / k0sq * (1.0 + 2.0 - 1.0)) * c2;
        let ut = 0.25 * mu0 / k0sq * p * rr * (1.0 - 1.0)
            + 0.25 * mu0 / k0sq * p * rr * (1.0 - 1.0) * c2
            - 0.25 * p * rr * (2.0 / l0 + mu / k0sq * (1.0 + 1.0)) * s2;
        worst = worst.max((b.u_r - ur).abs()).max((b.u_theta - ut).abs());
        // And against the engine evaluation at the contour.
        let d = uni.displacement_polar(rr, theta).unwrap();
        worst = worst.max((b.u_r - d.u_r).abs()).max((b.u_theta - d.u_theta).abs());
    }
    assert!(worst <= 1e-13, "boundary deviation {worst}");
    println!(
        "criterion 8 PASS: biaxial u_theta|R == 0 exactly; uniaxial boundary forms to {worst:.3e} <= 1e-13"
    );
}

#[test]
fn criterion_09_classical_limits() {
    let classical = PlaneMaterial::new(2.0, 0.0, 1.0).unwrap();
    let washer = classical_limit_compare(&solve_washer(1.0, &classical), 12).unwrap();
    let biax = classical_limit_compare(&solve_hole_biaxial(1.0, 1.0, &classical), 12).unwrap();
    let uni = classical_limit_compare(&solve_hole_uniaxial(1.0, 1.0, &classical), 12).unwrap();
    assert!(washer <= 1e-13, "washer {washer}");
    assert!(biax <= 1e-13, "biaxial {biax}");
    assert!(uni <= 1e-13, "uniaxial {uni}");
    println!(
        "criterion 9 PASS: classical-formula deviations washer {washer:.3e}, biaxial {biax:.3e}, uniaxial {uni:.3e} <= 1e-13"
    );
}

#[test]
fn criterion_10_small_mu_limits() {
    let (lambda, mu0, p, rr) = (2.0, 0.5, 1.0, 1.0);
    let mu = 1e-8;
    let m = PlaneMaterial::new(lambda + mu, mu0, mu).unwrap();
    let mut worst: f64 = 0.0;
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);

    let biax = solve_hole_biaxial(p, rr, &m);
    for &(r, theta) in &[(1.5, 0.3), (2.0, 1.1), (3.0, -0.7)] {
        let d = biax.displacement_polar(r, theta).unwrap();
        let lim = biax.limit_displacement_polar(r, theta).unwrap();
        worst = worst.max(rel(d.u_r, lim.u_r)).max(rel(d.u_theta, lim.u_theta));
    }
    let b = biax.boundary_displacement(0.0).unwrap();
    let blim = biax.limit_boundary_displacement(0.0).unwrap();
    worst = worst.max(rel(b.u_r, blim.u_r)); // pR/(2 lambda)

    let uni = solve_hole_uniaxial(p, rr, &m);
    for &theta in &[0.3, 1.0, 2.2] {
        let b = uni.boundary_displacement(theta).unwrap();
        let lim = uni.limit_boundary_displacement(theta).unwrap();
        worst = worst.max(rel(b.u_r, lim.u_r)).max(rel(b.u_theta, lim.u_theta));
    }
    assert!(worst <= 1e-6, "limit deviation {worst}");
    println!("criterion 10 PASS: mu = 1e-8 matches closed-form limits to {worst:.3e} <= 1e-6 relative");
}

#[test]
fn criterion_11_stress_concentration() {
    let materials = [
        PlaneMaterial::new(2.0, 0.5, 1.0).unwrap(),
        PlaneMaterial::new(7.0, -3.0, 0.2).unwrap(),
        PlaneMaterial::new(1.0, 0.0, 4.0).unwrap(),
    ];
    let mut worst: f64 = 0.0;
    for m in materials {
        for &(p, rr) in &[(1.0, 1.0), (2.5, 0.4)] {
            let sol = solve_hole_uniaxial(p, rr, &m);
            for &sgn in &[1.0, -1.0] {
                let s = sol.stress_polar(rr, sgn * std::f64::consts::FRAC_PI_2).unwrap();
                worst = worst.max((s.stt - 3.0 * p).abs() / p);
            }
        }
    }
    assert!(worst <= 1e-13, "concentration deviation {worst}");
    println!("criterion 11 PASS: sigma_tt(R, +-pi/2) = 3p to {worst:.3e} <= 1e-13, material independent");
}

#[test]
fn criterion_12_cli_determinism() {
    use std::process::Command;
    let bin = env!("CARGO_BIN_EXE_pseudoelastic");
    let dir = tempfile::tempdir().unwrap();
    let mat3 = dir.path().join("m3.txt");
    std::fs::write(
        &mat3,
        "C11 = 10\nC13 = 2\nC16 = 1\nC33 = 3\nC44 = 2\nC45 = 0.5\nC61 = 1.5\nC66 = 8\n",
    )
    .unwrap();
    let mat2 = dir.path().join("m2.txt");
    std::fs::write(&mat2, "lambda0 = 2\nmu0 = 0.5\nmu = 1\n").unwrap();

    let runs: Vec<(Vec<String>, Option<&str>)> = vec![
        (
            vec![
                "solve".into(),
                "hole-uniaxial".into(),
                "--p".into(),
                "1".into(),
                "-m".into(),
                mat2.display().to_string(),
            ],
            Some("uni.csv"),
        ),
        (
            vec![
                "solve".into(),
                "torsion".into(),
                "--tau".into(),
                "1".into(),
                "--radius".into(),
                "1".into(),
                "--length".into(),
                "2".into(),
                "-m".into(),
                mat3.display().to_string(),
            ],
            Some("torsion.csv"),
        ),
        (
            vec![
                "verify".into(),
                "hole-biaxial".into(),
                "--p".into(),
                "1".into(),
                "-m".into(),
                mat2.display().to_string(),
            ],
            None,
        ),
        (vec!["derive-invariance".into()], None),
        (
            vec!["check-material".into(), "-m".into(), mat3.display().to_string()],
            None,
        ),
    ];

    for (args, csv) in runs {
        let mut outputs = Vec::new();
        let mut csv_bytes = Vec::new();
        for run in 0..2 {
            let mut full = args.clone();
            let csv_path = csv.map(|name| dir.path().join(format!("{run}_{name}")));
            if let Some(path) = &csv_path {
                full.push("--out".into());
                full.push(path.display().to_string());
            }
            let out = Command::new(bin).args(&full).output().unwrap();
            assert!(
                out.status.success(),
                "run failed: {:?}\n{}",
                args,
                String::from_utf8_lossy(&out.stderr)
            );
            // CSV paths differ between runs; strip the trailing "wrote ..."
            // line before comparing reports.
            let stdout = String::from_utf8(out.stdout).unwrap();
            let report: String = stdout
                .lines()
                .filter(|l| !l.starts_with("wrote "))
                .collect::<Vec<_>>()
                .join("\n");
            outputs.push(report);
            if let Some(path) = &csv_path {
                csv_bytes.push(std::fs::read(path).unwrap());
            }
        }
        assert_eq!(outputs[0], outputs[1], "stdout differs for {args:?}");
        if csv_bytes.len() == 2 {
            assert_eq!(csv_bytes[0], csv_bytes[1], "CSV differs for {args:?}");
        }
    }
    println!("criterion 12 PASS: repeated CLI runs are byte-identical (reports and CSV)");
}

#[test]
fn family_matrix_and_components_are_inverse_views() {
    // Supporting invariant used by criteria 2 and 3: the eight pattern
    // slots reproduce every family member.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let p = random_params(&mut rng);
        let c = build_c(&p);
        let rebuilt = family_matrix(&p.as_array());
        assert_eq!(c.matrix(), &rebuilt);
    }
}
