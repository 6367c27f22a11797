//! Design properties of hexagonal shells, the weighted shell matrix and the
//! periodic 2-design inequality.

use crate::error::{Error, Result};
use crate::lattice::{embed, LatticeIndex, TorusIndex, FIRST_SHELL};
use crate::perturbation::{frequency, root_table, torus_fourier, PeriodicPerturbation};
use crate::sum::{csum, NeumaierSum};
use crate::vec2::{Sym2, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

/// A regular hexagon centred at the origin, listed counterclockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Hexagon {
    vertices: [Vec2; 6],
    indices: Option<[LatticeIndex; 6]>,
}

impl Hexagon {
    pub fn from_vertex(v: Vec2) -> Self {
        let vertices = std::array::from_fn(|j| v.rotate(j as f64 * PI / 3.0));
        Hexagon { vertices, indices: None }
    }

    /// The orbit of a lattice point under rotation by π/3.
    pub fn lattice(start: LatticeIndex) -> Self {
        let mut idx = [start; 6];
        for j in 1..6 {
            idx[j] = idx[j - 1].rotate60();
        }
        Hexagon { vertices: idx.map(embed), indices: Some(idx) }
    }

    pub fn first_shell() -> Self {
        Hexagon::lattice(FIRST_SHELL[0])
    }

    /// The shell at distance √3 r⋆, spanned by σ + τ.
    pub fn second_shell() -> Self {
        Hexagon::lattice(LatticeIndex::new(1, 1))
    }

    pub fn vertices(&self) -> &[Vec2; 6] {
        &self.vertices
    }

    pub fn indices(&self) -> Option<&[LatticeIndex; 6]> {
        self.indices.as_ref()
    }

    pub fn radius(&self) -> f64 {
        self.vertices[0].norm()
    }

    /// `s₁, s₂, s₃ = s₂ − s₁`; the other three vertices are their opposites.
    pub fn independent(&self) -> [Vec2; 3] {
        [self.vertices[0], self.vertices[1], self.vertices[2]]
    }
}

/// Largest deviation between shell averages and circle averages of random
/// polynomials of total degree at most `degree`.
pub fn design_moment_check(points: &[Vec2], degree: usize, trials: usize, seed: u64) -> f64 {
    let r = points[0].norm();
    let monomials: Vec<(i32, i32)> = (0..=degree as i32).flat_map(|d| (0..=d).map(move |i| (i, d - i))).collect();
    // Trapezoid rule on 64 nodes is exact for trigonometric degree < 64.
    let circle: Vec<Vec2> = (0..64).map(|j| Vec2::polar(r, 2.0 * PI * j as f64 / 64.0)).collect();
    let average = |pts: &[Vec2], c: &[f64]| {
        csum(pts.iter().map(|p| {
            monomials.iter().zip(c).map(|(&(i, j), a)| a * p.x.powi(i) * p.y.powi(j)).sum::<f64>()
        })) / pts.len() as f64
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let c: Vec<f64> = monomials.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
            (average(points, &c) - average(&circle, &c)).abs()
        })
        .fold(0.0, f64::max)
}

/// `w_s(k) = 2(1 − cos 2πk·s)` on the three independent vertices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShellWeights {
    pub k: Vec2,
    pub weights: [f64; 3],
}

impl ShellWeights {
    pub fn new(k: Vec2, shell: &Hexagon) -> Self {
        let weights = shell.independent().map(|s| {
            let h = (PI * k.dot(s)).sin();
            4.0 * h * h
        });
        ShellWeights { k, weights }
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn pair_sum(&self) -> f64 {
        let [a, b, c] = self.weights;
        a * b + b * c + a * c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DesignMatrix {
    pub m: Sym2,
    pub lambda_min: f64,
    /// `λ_min` from the closed-form determinant.
    pub lambda_min_closed: f64,
}

/// `M = Σ_s w_s(k) s sᵀ / (r² Σ_s w_s(k))` over the full hexagon.
pub fn geom_matrix(k: Vec2, shell: &Hexagon) -> Result<DesignMatrix> {
    let w = ShellWeights::new(k, shell);
    let total = w.total();
    if total <= 1e-15 {
        return Err(Error::DegenerateWeights);
    }
    let r2 = shell.radius().powi(2);
    let mut m = Sym2::ZERO;
    for (s, wi) in shell.independent().iter().zip(w.weights) {
        m += s.outer().scale(wi);
    }
    let m = m.scale(1.0 / (r2 * total));
    let det = 0.75 * w.pair_sum() / (total * total);
    Ok(DesignMatrix {
        m,
        lambda_min: m.min_eigenvalue(),
        lambda_min_closed: 0.5 * (1.0 - (1.0 - 4.0 * det).max(0.0).sqrt()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WInequality {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs` recomputed as `rhs + 16 sin²(θ₁/2) sin²(θ₂/2) sin²((θ₂ − θ₁)/2)`.
    pub lhs_trig: f64,
}

/// `w₁w₂ + w₂w₃ + w₁w₃` against `¼(w₁ + w₂ + w₃)²`.
pub fn w_inequality_check(k: Vec2, shell: &Hexagon) -> WInequality {
    let w = ShellWeights::new(k, shell);
    let rhs = 0.25 * w.total().powi(2);
    let [s1, s2, _] = shell.independent();
    let (t1, t2) = (2.0 * PI * k.dot(s1), 2.0 * PI * k.dot(s2));
    let sq = |t: f64| (0.5 * t).sin().powi(2);
    WInequality { lhs: w.pair_sum(), rhs, lhs_trig: rhs + 16.0 * sq(t1) * sq(t2) * sq(t2 - t1) }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TwoDesignCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_spectral: f64,
    pub rhs_spectral: f64,
}

impl TwoDesignCheck {
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs - 1e-12 * (1.0 + self.rhs)
    }

    pub fn spectral_mismatch(&self) -> f64 {
        (self.lhs - self.lhs_spectral).abs().max((self.rhs - self.rhs_spectral).abs())
    }
}

/// Both sides of `Σ_s Σ_{x'} |s·(p_{s+x'} − p_{x'})|² ≥ ¼ r² Σ_s Σ_{x'} |p_{s+x'} − p_{x'}|²`,
/// in space and again through the torus Fourier transform.
pub fn periodic_two_design_check(p: &PeriodicPerturbation, shell: &Hexagon) -> Result<TwoDesignCheck> {
    let idx = shell
        .indices()
        .ok_or_else(|| Error::InvalidArgument("the periodic 2-design check needs a lattice shell".into()))?;
    let r2 = shell.radius().powi(2);
    let mut lhs = NeumaierSum::new();
    let mut rhs = NeumaierSum::new();
    for (&i, &s) in idx.iter().zip(shell.vertices()) {
        for d in p.differences(i) {
            lhs.add(s.dot(d).powi(2));
            rhs.add(0.25 * r2 * d.norm_sq());
        }
    }

    let n = p.period();
    let coeffs = torus_fourier(p);
    let (cos, _) = root_table(n);
    let mut lhs_f = NeumaierSum::new();
    let mut rhs_f = NeumaierSum::new();
    for k in TorusIndex::all(n) {
        let (re, im) = coeffs[k.flat()];
        for (&i, &s) in idx.iter().zip(shell.vertices()) {
            let phase = (k.a as i64 * i.m + k.b as i64 * i.n).rem_euclid(n as i64) as usize;
            let w = 2.0 * (1.0 - cos[phase]);
            lhs_f.add(w * (s.dot(re).powi(2) + s.dot(im).powi(2)));
            rhs_f.add(0.25 * r2 * w * (re.norm_sq() + im.norm_sq()));
        }
    }
    let n2 = (n * n) as f64;
    Ok(TwoDesignCheck {
        lhs: lhs.value(),
        rhs: rhs.value(),
        lhs_spectral: n2 * lhs_f.value(),
        rhs_spectral: n2 * rhs_f.value(),
    })
}

/// Smallest `λ_min(M(k))` over a `side × side` grid of the reciprocal cell,
/// skipping the origin. Returns the minimum and where it was attained.
pub fn lambda_min_grid(side: usize, shell: &Hexagon) -> (f64, Vec2) {
    let mut best = (f64::INFINITY, Vec2::ZERO);
    for t in TorusIndex::all(side) {
        if t.a == 0 && t.b == 0 {
            continue;
        }
        let k = crate::lattice::voronoi_reduce(frequency(t), crate::lattice::LatticeKind::Reciprocal);
        if let Ok(m) = geom_matrix(k, shell) {
            if m.lambda_min < best.0 {
                best = (m.lambda_min, k);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::R_STAR;

    #[test]
    fn first_shell_second_moment() {
        let u = Vec2::new(1.0, 0.0);
        let s: f64 = Hexagon::first_shell().vertices().iter().map(|v| v.dot(u).powi(2)).sum();
        assert!((s - 3.0 * R_STAR * R_STAR).abs() < 1e-14);
        assert!((s - 3.464).abs() < 1e-3);
    }

    #[test]
    fn hexagons_are_five_designs_but_not_six() {
        let h = Hexagon::first_shell();
        assert!(design_moment_check(h.vertices(), 5, 200, 1) < 1e-10);
        let sixth = |pts: &[Vec2]| pts.iter().map(|p| p.x.powi(6)).sum::<f64>() / pts.len() as f64;
        let circle: Vec<Vec2> = (0..64).map(|j| Vec2::polar(R_STAR, 2.0 * PI * j as f64 / 64.0)).collect();
        assert!((sixth(h.vertices()) - sixth(&circle)).abs() > 1e-3);
    }

    #[test]
    fn equal_weights_give_half_identity() {
        // k at a vertex of the reciprocal cell gives w₁ = w₂ = w₃ = 3.
        let k = Vec2::polar(R_STAR / 3f64.sqrt(), PI / 2.0 + PI / 6.0);
        let w = ShellWeights::new(k, &Hexagon::first_shell());
        assert!((w.weights[0] - w.weights[1]).abs() < 1e-12 && (w.weights[1] - w.weights[2]).abs() < 1e-12);
        let m = geom_matrix(k, &Hexagon::first_shell()).unwrap();
        assert!(m.m.max_abs_diff(Sym2::identity().scale(0.5)) < 1e-12);
        assert!((m.lambda_min - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_frequency_is_degenerate() {
        assert!(matches!(geom_matrix(Vec2::ZERO, &Hexagon::first_shell()), Err(Error::DegenerateWeights)));
        let w = w_inequality_check(Vec2::ZERO, &Hexagon::first_shell());
        assert_eq!((w.lhs, w.rhs), (0.0, 0.0));
    }

    #[test]
    fn constant_and_single_class_perturbations() {
        let c = PeriodicPerturbation::constant(3, Vec2::new(0.01, 0.0)).unwrap();
        let t = periodic_two_design_check(&c, &Hexagon::first_shell()).unwrap();
        assert_eq!((t.lhs, t.rhs), (0.0, 0.0));
        let one = PeriodicPerturbation::constant(1, Vec2::new(0.02, 0.01)).unwrap();
        let t = periodic_two_design_check(&one, &Hexagon::second_shell()).unwrap();
        assert_eq!((t.lhs, t.rhs), (0.0, 0.0));
    }
}
