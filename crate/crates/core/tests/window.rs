use hexmin::energy::{finite_window_energy, gaussian_lattice_energy, CmsdPotential};
use hexmin::{PeriodicPerturbation, Vec2};

// Points near the rim of the disk miss part of their neighbours, so the
// window average falls short of the periodic value by about 0.68/r at α = 1.
#[test]
fn window_average_approaches_the_periodic_energy() {
    let f = CmsdPotential::Gaussian { alpha: 1.0 };
    let zero = PeriodicPerturbation::zero(2).unwrap();
    let e = gaussian_lattice_energy(1.0, 1e-15).unwrap().value;
    let mut last = 0.0;
    for r in [10.0, 20.0, 40.0] {
        let w = finite_window_energy(&zero, &f, r).unwrap();
        assert!(w > last && w < e);
        let gap = (e - w) / e;
        assert!((0.6..0.75).contains(&(gap * r)), "r = {r}: relative gap {gap}");
        last = w;
    }
}

#[test]
fn constant_shift_does_not_change_the_window_average() {
    let f = CmsdPotential::Gaussian { alpha: 1.0 };
    let zero = PeriodicPerturbation::zero(3).unwrap();
    let c = PeriodicPerturbation::constant(3, Vec2::new(0.01, 0.02)).unwrap();
    let (a, b) = (finite_window_energy(&zero, &f, 12.0).unwrap(), finite_window_energy(&c, &f, 12.0).unwrap());
    assert!((a - b).abs() < 1e-14);
}
