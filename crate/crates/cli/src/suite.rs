use crate::CliResult;
use hexmin::design::{lambda_min_grid, periodic_two_design_check, w_inequality_check, Hexagon};
use hexmin::energy::{
    gaussian_energy, perturbed_energy_diff, perturbed_energy_diff_dual, riesz_energy, riesz_energy_direct, Side,
};
use hexmin::lattice::{hexagon_grid, voronoi_reduce, LatticeKind};
use hexmin::minimality::*;
use hexmin::perturbation::MAX_SUP_NORM;
use hexmin::{LatticeIndex, PeriodicPerturbation, PlaneLattice, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SuiteName {
    All,
    Design,
    Minimality,
    Inequalities,
    Energy,
}

impl SuiteName {
    pub fn label(self) -> &'static str {
        match self {
            SuiteName::All => "all",
            SuiteName::Design => "design",
            SuiteName::Minimality => "minimality",
            SuiteName::Inequalities => "inequalities",
            SuiteName::Energy => "energy",
        }
    }
}

pub fn run_suite(name: SuiteName) -> CliResult<VerificationCertificate> {
    let checks = match name {
        SuiteName::All => {
            let mut all = design_checks()?;
            all.extend(minimality_checks()?);
            all.extend(numeric_inequality_suite());
            all.extend(energy_checks()?);
            all
        }
        SuiteName::Design => design_checks()?,
        SuiteName::Minimality => minimality_checks()?,
        SuiteName::Inequalities => numeric_inequality_suite(),
        SuiteName::Energy => energy_checks()?,
    };
    Ok(VerificationCertificate::new(name.label(), checks))
}

fn random_perturbation(rng: &mut ChaCha8Rng, n: usize) -> hexmin::Result<PeriodicPerturbation> {
    let r = rng.random_range(0.0..=MAX_SUP_NORM);
    PeriodicPerturbation::sample_uniform(n, r, rng)
}

pub fn design_checks() -> CliResult<Vec<CheckResult>> {
    let mut out = Vec::new();
    for (label, shell) in [("first_shell", Hexagon::first_shell()), ("second_shell", Hexagon::second_shell())] {
        let (min, k) = lambda_min_grid(100, &shell);
        out.push(CheckResult::new(
            &format!("lambda_min_grid_{label}"),
            min - (0.25 - 1e-12),
            json!({"grid": 100, "observed_min": min, "argmin": [k.x, k.y]}),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = f64::INFINITY;
    for _ in 0..10_000 {
        let k = Vec2::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let w = w_inequality_check(k, &Hexagon::first_shell());
        worst = worst.min(w.lhs - w.rhs);
    }
    out.push(CheckResult::new("w_inequality_random", worst + 1e-12, json!({"samples": 10_000, "min_lhs_minus_rhs": worst})));

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut slack, mut mismatch) = (f64::INFINITY, 0.0f64);
    for i in 0..100 {
        let p = random_perturbation(&mut rng, 2 + i % 7)?;
        for shell in [Hexagon::first_shell(), Hexagon::second_shell()] {
            let c = periodic_two_design_check(&p, &shell)?;
            slack = slack.min((c.lhs - c.rhs) / (1.0 + c.rhs));
            mismatch = mismatch.max(c.spectral_mismatch() / (1.0 + c.lhs));
        }
    }
    out.push(CheckResult::new("periodic_two_design", slack + 1e-12, json!({"perturbations": 100, "min_relative_slack": slack})));
    out.push(CheckResult::new("periodic_two_design_plancherel", 1e-10 - mismatch, json!({"max_relative_mismatch": mismatch})));
    Ok(out)
}

pub fn minimality_checks() -> CliResult<Vec<CheckResult>> {
    let mut out = Vec::new();
    let scan = default_scan(false)?;
    out.push(CheckResult::new(
        "psi_gap_scan",
        scan.min_gap - scan.error_bound,
        json!({"min_gap": scan.min_gap, "alpha": scan.alpha, "v_angle": scan.v_angle, "u": [scan.u.x, scan.u.y], "evaluations": scan.evaluations}),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let alpha = rng.random_range(0.5..2.0);
        let v = Vec2::polar(1.0, rng.random_range(0.0..std::f64::consts::PI));
        let u = voronoi_reduce(Vec2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)), LatticeKind::Direct);
        let d = psi_eval(alpha, v, u, PsiSide::Direct)?;
        let q = psi_eval(alpha, v, u, PsiSide::Dual)?;
        worst = worst.max((d.value - q.value).abs());
    }
    out.push(CheckResult::new("psi_direct_dual_agreement", 1e-10 - worst, json!({"samples": 200, "max_difference": worst})));

    let alphas = log_grid(0.02, ALPHA_BAR, 12);
    let angles = angle_grid(12);
    let us = hexagon_grid(20);
    let mut min_gap = f64::INFINITY;
    let mut counts = [0usize; 3];
    for &alpha in &alphas {
        for &t in &angles {
            let v = Vec2::polar(1.0, t);
            for &u in &us {
                let a = first_shell_case_audit(u, alpha, v)?;
                min_gap = min_gap.min(a.normalized_gap);
                match a.case {
                    FirstShellCase::LargeProjection => counts[0] += 1,
                    FirstShellCase::SmallDisplacement => counts[1] += 1,
                    FirstShellCase::GoodVertex => counts[2] += 1,
                    FirstShellCase::Origin => {}
                }
            }
        }
    }
    out.push(CheckResult::new(
        "first_shell_case_audit",
        min_gap - FIRST_SHELL_FLOOR,
        json!({"min_normalized_gap": min_gap, "floor": FIRST_SHELL_FLOOR, "large_projection": counts[0], "small_displacement": counts[1], "good_vertex": counts[2]}),
    ));

    let shells = [
        ("higher_shell_sqrt3", LatticeIndex::new(1, 1)),
        ("higher_shell_2", LatticeIndex::new(2, 0)),
        ("higher_shell_sqrt7_a", LatticeIndex::new(2, 1)),
        ("higher_shell_sqrt7_b", LatticeIndex::new(1, 2)),
    ];
    for (name, idx) in shells {
        let shell = Hexagon::lattice(idx);
        let mut ratio = f64::INFINITY;
        for &alpha in &alphas {
            for &t in &angles {
                let v = Vec2::polar(1.0, t);
                for &u in &us {
                    let c = higher_shell_check(&shell, alpha, u, v)?;
                    ratio = ratio.min(c.lhs / c.rhs);
                }
            }
        }
        out.push(CheckResult::new(name, ratio - 1.0, json!({"radius": shell.radius(), "min_lhs_over_rhs": ratio})));
    }
    Ok(out)
}

pub fn energy_checks() -> CliResult<Vec<CheckResult>> {
    let mut out = Vec::new();
    let hex = PlaneLattice::hexagonal();
    for alpha in [0.2, 0.5, 1.0, 2.0, 5.0] {
        let d = gaussian_energy(&hex, alpha, 1e-15, Side::Direct)?;
        let q = gaussian_energy(&hex, alpha, 1e-15, Side::Dual)?;
        out.push(CheckResult::new(
            &format!("gaussian_direct_dual_alpha_{alpha}"),
            d.error_bound + q.error_bound - (d.value - q.value).abs(),
            json!({"alpha": alpha, "direct": d.value, "dual": q.value}),
        ));
    }
    for s in [3.0, 4.0, 6.0, 8.0] {
        let d = riesz_energy_direct(s, 40.0)?;
        let t = riesz_energy(s, 1e-13)?;
        out.push(CheckResult::new(
            &format!("riesz_direct_theta_s_{s}"),
            d.error_bound + t.error_bound - (d.value - t.value).abs(),
            json!({"s": s, "direct": d.value, "theta": t.value}),
        ));
    }
    let square = PlaneLattice::square();
    for alpha in [0.5, 1.0, 2.0] {
        let a = gaussian_energy(&hex, alpha, 1e-15, Side::Auto)?;
        let z = gaussian_energy(&square, alpha, 1e-15, Side::Auto)?;
        out.push(CheckResult::new(
            &format!("hexagonal_below_square_alpha_{alpha}"),
            z.value - a.value - z.error_bound - a.error_bound,
            json!({"alpha": alpha, "hexagonal": a.value, "square": z.value}),
        ));
    }
    let mut t = vec![Vec2::ZERO; 4];
    t[0] = Vec2::new(1e-3, 0.0);
    let p = PeriodicPerturbation::new(2, t)?;
    let reference = 8.330_161_846_563_528_9e-8;
    let d = perturbed_energy_diff(&p, 2.0, 1e-20)?;
    let q = perturbed_energy_diff_dual(&p, 2.0, 1e-20)?;
    out.push(CheckResult::new(
        "perturbed_diff_two_lattice_oracle",
        1e-12 * reference - (d.value - reference).abs(),
        json!({"alpha": 2.0, "direct": d.value, "dual": q.value, "reference": reference}),
    ));
    out.push(CheckResult::new(
        "perturbed_diff_direct_dual",
        d.error_bound + q.error_bound + 1e-12 * reference - (d.value - q.value).abs(),
        json!({"direct_bound": d.error_bound, "dual_bound": q.error_bound}),
    ));
    Ok(out)
}
