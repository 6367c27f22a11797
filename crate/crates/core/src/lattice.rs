//! The hexagonal lattice A₂ of covolume one, its reciprocal lattice,
//! Voronoi reduction, shells and discrete tori.
//!
//! A₂ is spanned by σ = r⋆(1, 0) and τ = r⋆(1/2, √3/2) with
//! r⋆ = √(2/√3), the nearest-neighbour distance. Points are addressed by
//! integer coordinates `(m, n)` standing for mσ + nτ.

use crate::vec2::Vec2;
use serde::{Deserialize, Serialize};

/// √(2/√3).
pub const R_STAR: f64 = 1.074_569_931_823_541_9;
pub const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Squared radii closer than this belong to the same shell.
const SHELL_TOL: f64 = 1e-9;

/// Integer coordinates of the first shell, counterclockwise from σ.
pub const FIRST_SHELL: [LatticeIndex; 6] = [
    LatticeIndex::new(1, 0),
    LatticeIndex::new(0, 1),
    LatticeIndex::new(-1, 1),
    LatticeIndex::new(-1, 0),
    LatticeIndex::new(0, -1),
    LatticeIndex::new(1, -1),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeIndex {
    pub m: i64,
    pub n: i64,
}

impl LatticeIndex {
    pub const fn new(m: i64, n: i64) -> Self {
        LatticeIndex { m, n }
    }

    pub fn neg(self) -> Self {
        LatticeIndex::new(-self.m, -self.n)
    }

    pub fn add(self, o: LatticeIndex) -> Self {
        LatticeIndex::new(self.m + o.m, self.n + o.n)
    }

    /// Rotation by π/3 of the A₂ point (σ ↦ τ, τ ↦ τ − σ).
    pub fn rotate60(self) -> Self {
        LatticeIndex::new(-self.n, self.m + self.n)
    }

    pub fn is_zero(self) -> bool {
        self.m == 0 && self.n == 0
    }
}

/// A class of A₂ / N·A₂, stored with `0 ≤ a, b < N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusIndex {
    pub period: usize,
    pub a: usize,
    pub b: usize,
}

impl TorusIndex {
    pub fn new(period: usize, a: usize, b: usize) -> Self {
        assert!(period >= 1 && a < period && b < period);
        TorusIndex { period, a, b }
    }

    pub fn of(idx: LatticeIndex, period: usize) -> Self {
        let n = period as i64;
        TorusIndex {
            period,
            a: idx.m.rem_euclid(n) as usize,
            b: idx.n.rem_euclid(n) as usize,
        }
    }

    /// Position in row-major tables of length N².
    pub fn flat(self) -> usize {
        self.a + self.period * self.b
    }

    pub fn from_flat(period: usize, i: usize) -> Self {
        TorusIndex::new(period, i % period, i / period)
    }

    pub fn all(period: usize) -> impl Iterator<Item = TorusIndex> {
        (0..period * period).map(move |i| TorusIndex::from_flat(period, i))
    }

    /// Representative `(a, b)` as a lattice index.
    pub fn index(self) -> LatticeIndex {
        LatticeIndex::new(self.a as i64, self.b as i64)
    }
}

/// A two-dimensional lattice given by a basis, with the data needed for
/// reduction and tail bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneLattice {
    basis: [Vec2; 2],
    dual: [Vec2; 2],
    covolume: f64,
    covering_radius: f64,
}

impl PlaneLattice {
    pub fn from_basis(a: Vec2, b: Vec2) -> Self {
        let det = a.x * b.y - a.y * b.x;
        assert!(det.abs() > 0.0, "degenerate basis");
        // Rows of the inverse of the matrix with columns a, b.
        let dual = [Vec2::new(b.y / det, -b.x / det), Vec2::new(-a.y / det, a.x / det)];
        let covering_radius = covering_radius(a, b);
        PlaneLattice { basis: [a, b], dual, covolume: det.abs(), covering_radius }
    }

    /// A₂, spanned by σ and τ.
    pub fn hexagonal() -> Self {
        PlaneLattice::from_basis(sigma(), tau())
    }

    /// Â₂, spanned by σ̂ and τ̂.
    pub fn hexagonal_reciprocal() -> Self {
        PlaneLattice::hexagonal().dual_lattice()
    }

    /// ℤ², the square lattice of covolume one.
    pub fn square() -> Self {
        PlaneLattice::from_basis(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0))
    }

    /// The lattice of `k` with `k·x ∈ ℤ` for all lattice points `x`.
    pub fn dual_lattice(&self) -> Self {
        PlaneLattice::from_basis(self.dual[0], self.dual[1])
    }

    pub fn scaled(&self, t: f64) -> Self {
        PlaneLattice::from_basis(self.basis[0] * t, self.basis[1] * t)
    }

    pub fn basis(&self) -> [Vec2; 2] {
        self.basis
    }

    /// Dual basis: `dual[i]·basis[j] = δᵢⱼ`.
    pub fn dual_basis(&self) -> [Vec2; 2] {
        self.dual
    }

    pub fn covolume(&self) -> f64 {
        self.covolume
    }

    /// Circumradius of the Voronoi cell.
    pub fn covering_radius(&self) -> f64 {
        self.covering_radius
    }

    pub fn point(&self, idx: LatticeIndex) -> Vec2 {
        self.basis[0] * idx.m as f64 + self.basis[1] * idx.n as f64
    }

    /// Lattice points with `|x| ≤ r`, sorted by squared radius then index.
    pub fn points_in_ball(&self, r: f64) -> Vec<(LatticeIndex, Vec2)> {
        let reach = r + 1e-12;
        let mb = (reach * self.dual[0].norm()).ceil() as i64 + 1;
        let nb = (reach * self.dual[1].norm()).ceil() as i64 + 1;
        let mut pts = Vec::new();
        for m in -mb..=mb {
            for n in -nb..=nb {
                let idx = LatticeIndex::new(m, n);
                let x = self.point(idx);
                if x.norm() <= reach {
                    pts.push((idx, x));
                }
            }
        }
        pts.sort_by(|p, q| p.1.norm_sq().total_cmp(&q.1.norm_sq()).then(p.0.cmp(&q.0)));
        pts
    }

    /// Points of `points_in_ball` grouped into shells of equal radius.
    pub fn shells(&self, r: f64) -> Vec<Shell> {
        let mut out: Vec<Shell> = Vec::new();
        for (idx, x) in self.points_in_ball(r) {
            let r2 = x.norm_sq();
            match out.last_mut() {
                Some(s) if (s.radius_sq - r2).abs() <= SHELL_TOL => s.points.push((idx, x)),
                _ => out.push(Shell { radius_sq: r2, points: vec![(idx, x)] }),
            }
        }
        for s in &mut out {
            s.points.sort_by_key(|p| p.0);
        }
        out
    }

    /// `u − x` for the lattice point `x` nearest to `u`. Ties are broken
    /// toward the lexicographically smallest result.
    pub fn reduce(&self, u: Vec2) -> Vec2 {
        let m0 = self.dual[0].dot(u).round() as i64;
        let n0 = self.dual[1].dot(u).round() as i64;
        let mut cands = [Vec2::ZERO; 25];
        let mut k = 0;
        for dm in -2..=2 {
            for dn in -2..=2 {
                cands[k] = u - self.point(LatticeIndex::new(m0 + dm, n0 + dn));
                k += 1;
            }
        }
        let dmin = cands.iter().map(|w| w.norm_sq()).fold(f64::INFINITY, f64::min);
        let tie = 1e-12 * dmin.max(1.0);
        cands
            .iter()
            .filter(|w| w.norm_sq() <= dmin + tie)
            .copied()
            .min_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)))
            .expect("candidate set is nonempty")
    }
}

fn covering_radius(a: Vec2, b: Vec2) -> f64 {
    // Lagrange–Gauss reduction, then the circumradius of a non-obtuse
    // triangle spanned by the reduced basis.
    let (mut a, mut b) = if a.norm_sq() <= b.norm_sq() { (a, b) } else { (b, a) };
    loop {
        let mu = (a.dot(b) / a.norm_sq()).round();
        b = b - a * mu;
        if b.norm_sq() >= a.norm_sq() {
            break;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if a.dot(b) < 0.0 {
        b = -b;
    }
    let c = b - a;
    let area2 = (a.x * b.y - a.y * b.x).abs();
    a.norm() * b.norm() * c.norm() / (2.0 * area2)
}

/// Lattice points of a common radius.
#[derive(Clone, Debug, PartialEq)]
pub struct Shell {
    pub radius_sq: f64,
    pub points: Vec<(LatticeIndex, Vec2)>,
}

impl Shell {
    pub fn radius(&self) -> f64 {
        self.radius_sq.sqrt()
    }

    pub fn vectors(&self) -> Vec<Vec2> {
        self.points.iter().map(|p| p.1).collect()
    }

    pub fn indices(&self) -> Vec<LatticeIndex> {
        self.points.iter().map(|p| p.0).collect()
    }

    /// Splits the shell into orbits under rotation by π/3.
    pub fn hexagons(&self) -> Vec<Vec<LatticeIndex>> {
        let mut left = self.indices();
        let mut out = Vec::new();
        while let Some(&start) = left.first() {
            let mut orbit = vec![start];
            let mut cur = start.rotate60();
            while cur != start {
                orbit.push(cur);
                cur = cur.rotate60();
            }
            left.retain(|i| !orbit.contains(i));
            out.push(orbit);
        }
        out
    }
}

pub fn sigma() -> Vec2 {
    Vec2::new(R_STAR, 0.0)
}

pub fn tau() -> Vec2 {
    Vec2::new(0.5 * R_STAR, 0.5 * SQRT_3 * R_STAR)
}

/// σ̂ with σ̂·σ = 1 and σ̂·τ = 0.
pub fn sigma_hat() -> Vec2 {
    Vec2::new(1.0 / R_STAR, -1.0 / (SQRT_3 * R_STAR))
}

/// τ̂ with τ̂·σ = 0 and τ̂·τ = 1.
pub fn tau_hat() -> Vec2 {
    Vec2::new(0.0, 2.0 / (SQRT_3 * R_STAR))
}

/// The point mσ + nτ.
pub fn embed(idx: LatticeIndex) -> Vec2 {
    sigma() * idx.m as f64 + tau() * idx.n as f64
}

/// The reciprocal point mσ̂ + nτ̂.
pub fn reciprocal_point(idx: LatticeIndex) -> Vec2 {
    sigma_hat() * idx.m as f64 + tau_hat() * idx.n as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LatticeKind {
    /// A₂, whose Voronoi cell is the hexagon H.
    Direct,
    /// Â₂, whose Voronoi cell is Ω.
    Reciprocal,
}

impl LatticeKind {
    pub fn lattice(self) -> PlaneLattice {
        match self {
            LatticeKind::Direct => PlaneLattice::hexagonal(),
            LatticeKind::Reciprocal => PlaneLattice::hexagonal_reciprocal(),
        }
    }
}

pub fn voronoi_reduce(u: Vec2, kind: LatticeKind) -> Vec2 {
    kind.lattice().reduce(u)
}

/// Lattice points of A₂ with `|x| ≤ r`. With `group_by_radius` the result
/// has one entry per shell, otherwise one entry per point.
pub fn enumerate_ball(r: f64, group_by_radius: bool) -> Vec<Shell> {
    let lat = PlaneLattice::hexagonal();
    if group_by_radius {
        lat.shells(r)
    } else {
        lat.points_in_ball(r)
            .into_iter()
            .map(|p| Shell { radius_sq: p.1.norm_sq(), points: vec![p] })
            .collect()
    }
}

/// The `n × n` grid `{(iσ + jτ)/n}` of the torus ℝ²/A₂ reduced into H,
/// without the origin. Even `n` contains the grid for `n/2`.
pub fn hexagon_grid(n: usize) -> Vec<Vec2> {
    let lat = PlaneLattice::hexagonal();
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            if i == 0 && j == 0 {
                continue;
            }
            let u = sigma() * (i as f64 / n as f64) + tau() * (j as f64 / n as f64);
            out.push(lat.reduce(u));
        }
    }
    out
}
