use hexmin::design::{geom_matrix, periodic_two_design_check, Hexagon};
use hexmin::energy::{cmsd_energy_diff, gaussian_direct_sum, CmsdPotential};
use hexmin::lattice::{enumerate_ball, voronoi_reduce, LatticeKind};
use hexmin::minimality::{constrained_direction_min, psi_eval, PsiSide};
use hexmin::perturbation::{
    correlation, displacement_law, displacement_second_moment, fs_size, sm_size, spectral_measure, MAX_SUP_NORM,
};
use hexmin::{LatticeIndex, PeriodicPerturbation, PlaneLattice, TorusIndex, Vec2, R_STAR};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn perturbation() -> impl Strategy<Value = PeriodicPerturbation> {
    (1usize..=6, any::<u64>(), 0.0..=1.0f64).prop_map(|(n, seed, t)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PeriodicPerturbation::sample_uniform(n, t * MAX_SUP_NORM, &mut rng).unwrap()
    })
}

fn point() -> impl Strategy<Value = Vec2> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y)| Vec2::new(x, y))
}

fn in_cell() -> impl Strategy<Value = Vec2> {
    point().prop_map(|u| voronoi_reduce(u, LatticeKind::Direct))
}

fn unit() -> impl Strategy<Value = Vec2> {
    (0.0..2.0 * PI).prop_map(|t| Vec2::polar(1.0, t))
}

fn torus_offset() -> impl Strategy<Value = LatticeIndex> {
    (-4i64..=4, -4i64..=4).prop_map(|(m, n)| LatticeIndex::new(m, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_is_idempotent_and_shortens(u in point()) {
        for kind in [LatticeKind::Direct, LatticeKind::Reciprocal] {
            let r = voronoi_reduce(u, kind);
            prop_assert!(r.norm() <= u.norm() + 1e-12);
            prop_assert!((voronoi_reduce(r, kind) - r).norm() < 1e-12);
        }
    }

    #[test]
    fn cell_against_first_shells(u in in_cell()) {
        let direct = PlaneLattice::hexagonal().shells(1.5);
        let dual = PlaneLattice::hexagonal_reciprocal().shells(1.5);
        for shells in [&direct, &dual] {
            let first = shells.iter().find(|s| s.radius_sq > 0.0).unwrap();
            prop_assert_eq!(first.points.len(), 6);
        }
        for s in direct.iter().find(|s| s.radius_sq > 0.0).unwrap().vectors() {
            prop_assert!(u.dot(s) <= s.norm_sq() / 2.0 + 1e-12);
        }
        // The projections on the first dual shell reach 2/3 at the vertices
        // of H, not 1/2.
        for k in dual.iter().find(|s| s.radius_sq > 0.0).unwrap().vectors() {
            prop_assert!(u.dot(k).abs() <= 2.0 / 3.0 + 1e-12);
        }
    }

    #[test]
    fn laws_are_centered(p in perturbation(), x in torus_offset()) {
        let law = displacement_law(&p, x);
        prop_assert!((law.total_weight() - 1.0).abs() < 1e-12);
        prop_assert!(law.mean().norm() < 1e-15);
    }

    #[test]
    fn second_moment_matches_autocorrelation(p in perturbation(), x in torus_offset()) {
        let c = correlation(&p);
        let expected = 2.0 * (c.r_at(LatticeIndex::new(0, 0)).trace() - c.r_at(x).trace());
        prop_assert!((displacement_second_moment(&p, x) - expected).abs() < 1e-12);
        prop_assert!((displacement_law(&p, x).second_moment() - expected).abs() < 1e-12);
    }

    #[test]
    fn spectral_and_path_bounds(p in perturbation()) {
        let (sm, fs) = (sm_size(&p), fs_size(&p));
        for t in TorusIndex::all(p.period()) {
            for x in [t.index(), t.index().add(LatticeIndex::new(-(p.period() as i64), 0))] {
                let m = displacement_second_moment(&p, x);
                let r2 = hexmin::lattice::embed(x).norm_sq();
                prop_assert!(m <= 8.0 * PI * PI * r2 * sm * (1.0 + 1e-12) + 1e-18);
                prop_assert!(m <= r2 / (R_STAR * R_STAR) * fs * (1.0 + 1e-12) + 1e-18);
            }
        }
    }

    #[test]
    fn spectral_measure_reconstructs_autocorrelation(p in perturbation()) {
        let (m, _) = spectral_measure(&p);
        prop_assert_eq!(m.atoms.len(), p.period() * p.period());
        for a in &m.atoms {
            prop_assert!(a.matrix.min_eigenvalue() >= -1e-18);
        }
        let c = correlation(&p);
        for t in TorusIndex::all(p.period()) {
            prop_assert!(m.reconstruct(t.index()).max_abs_diff(c.r_at(t.index())) < 1e-10);
        }
    }

    #[test]
    fn two_design_inequality_and_plancherel(p in perturbation()) {
        for shell in [Hexagon::first_shell(), Hexagon::second_shell()] {
            let c = periodic_two_design_check(&p, &shell).unwrap();
            prop_assert!(c.holds());
            prop_assert!(c.spectral_mismatch() <= 1e-10 * (1.0 + c.lhs.abs()));
        }
    }

    #[test]
    fn design_matrix_eigenvalue_at_least_a_quarter(kx in -3.0..3.0f64, ky in -3.0..3.0f64) {
        let k = Vec2::new(kx, ky);
        for shell in [Hexagon::first_shell(), Hexagon::second_shell()] {
            if let Ok(d) = geom_matrix(k, &shell) {
                prop_assert!(d.lambda_min >= 0.25 - 1e-12);
                prop_assert!((d.lambda_min - d.lambda_min_closed).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn shells_are_two_designs(u in point()) {
        for shell in enumerate_ball(4.0 * R_STAR, true).iter().filter(|s| s.radius_sq > 0.0) {
            let lhs: f64 = shell.vectors().iter().map(|s| s.dot(u).powi(2)).sum();
            let expected = shell.points.len() as f64 / 2.0 * shell.radius_sq * u.norm_sq();
            prop_assert!((lhs - expected).abs() < 1e-12 * (1.0 + expected));
        }
    }

    #[test]
    fn mixture_difference_is_linear(p in perturbation(), w1 in 0.0..2.0f64, w2 in 0.0..2.0f64) {
        let (a1, a2) = (1.3, 2.7);
        let single = |a: f64| cmsd_energy_diff(&p, &CmsdPotential::Gaussian { alpha: a }, 1e-16).unwrap().value;
        let mix = cmsd_energy_diff(&p, &CmsdPotential::AtomicMixture(vec![(a1, w1), (a2, w2)]), 1e-16).unwrap().value;
        let combined = w1 * single(a1) + w2 * single(a2);
        prop_assert!((mix - combined).abs() <= 1e-12 * (1.0 + combined.abs()));
    }

    #[test]
    fn psi_is_even(alpha in 0.1..5.0f64, v in unit(), u in in_cell()) {
        let a = psi_eval(alpha, v, u, PsiSide::Auto).unwrap();
        let b = psi_eval(alpha, v, -u, PsiSide::Auto).unwrap();
        prop_assert!((a.value - b.value).abs() <= a.error_bound + b.error_bound + 1e-15);
    }

    #[test]
    fn psi_sides_agree(alpha in 0.5..2.0f64, v in unit(), u in in_cell()) {
        let d = psi_eval(alpha, v, u, PsiSide::Direct).unwrap();
        let q = psi_eval(alpha, v, u, PsiSide::Dual).unwrap();
        prop_assert!(d.error_bound < 1e-12 && q.error_bound < 1e-12);
        prop_assert!((d.value - q.value).abs() < 1e-10);
    }
}

#[test]
fn shells_are_rotation_and_reflection_invariant() {
    for shell in enumerate_ball(6.0 * R_STAR, true).iter().filter(|s| s.radius_sq > 0.0) {
        let idx = shell.indices();
        for i in &idx {
            assert!(idx.contains(&i.rotate60()));
            assert!(idx.contains(&i.neg()));
        }
    }
    assert!((PlaneLattice::hexagonal().covolume() - 1.0).abs() < 1e-14);
}

#[test]
fn dual_projection_bound_is_attained_at_a_vertex() {
    let vertex = Vec2::polar(R_STAR / 3f64.sqrt(), -PI / 6.0);
    assert!((vertex.norm() - PlaneLattice::hexagonal().covering_radius()).abs() < 1e-14);
    let k = hexmin::lattice::sigma_hat();
    assert!((vertex.dot(k) - 2.0 / 3.0).abs() < 1e-14);
}

#[test]
fn doubling_the_radius_stays_within_the_bound() {
    let lattice = PlaneLattice::hexagonal();
    for &alpha in &[0.2, 0.5, 1.0, 2.0] {
        for &r in &[2.0, 3.0, 4.0] {
            let a = gaussian_direct_sum(&lattice, alpha, r);
            let b = gaussian_direct_sum(&lattice, alpha, 2.0 * r);
            assert!((b.value - a.value).abs() <= a.error_bound, "α = {alpha}, r = {r}");
        }
    }
}

#[test]
fn constrained_minimum_matches_brute_force() {
    const ANGLES: usize = 1_000_000;
    let dirs: Vec<(f64, f64)> = (0..ANGLES)
        .map(|i| {
            let t = PI * i as f64 / ANGLES as f64;
            (t.cos(), t.sin())
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    use rand::Rng;
    for _ in 0..1000 {
        let u = Vec2::polar(rng.random_range(0.05..1.0), rng.random_range(0.0..2.0 * PI));
        let a = Vec2::polar(rng.random_range(0.0..0.3), rng.random_range(0.0..2.0 * PI));
        let kappa = rng.random_range(0.0..=1.0);
        let bound = kappa * u.norm();
        let brute = dirs
            .iter()
            .filter(|(c, s)| (u.x * c + u.y * s).abs() <= bound)
            .map(|(c, s)| (a.x * c + a.y * s).abs())
            .fold(f64::INFINITY, f64::min);
        let closed = constrained_direction_min(u, a, kappa).unwrap();
        assert!((brute - closed).abs() < 1e-6, "u = {u:?}, a = {a:?}, κ = {kappa}: {brute} vs {closed}");
    }
}
