//! Periodic perturbations of A₂: displacement laws, autocorrelation,
//! the spectral measure and the first-shell / spectral sizes.

use crate::error::{Error, Result};
use crate::lattice::{voronoi_reduce, LatticeIndex, LatticeKind, TorusIndex, FIRST_SHELL, R_STAR};
use crate::lattice::{sigma_hat, tau_hat};
use crate::sum::NeumaierSum;
use crate::vec2::{Eigen2, Sym2, Vec2};
use rand::Rng;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Largest admissible sup norm, which keeps every perturbed point inside
/// its own Voronoi cell.
pub const MAX_SUP_NORM: f64 = R_STAR / 20.0;

/// An N·A₂-periodic displacement field `x ↦ p_x`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicPerturbation {
    period: usize,
    table: Vec<Vec2>,
    sup_norm: f64,
}

impl PeriodicPerturbation {
    /// `table[a + N·b]` is the displacement of the class of aσ + bτ.
    pub fn new(period: usize, table: Vec<Vec2>) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidPeriod);
        }
        if table.len() != period * period {
            return Err(Error::TableSize { expected: period * period, got: table.len() });
        }
        if table.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let sup_norm = table.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if sup_norm > MAX_SUP_NORM {
            return Err(Error::PerturbationTooLarge { sup_norm, bound: MAX_SUP_NORM });
        }
        Ok(PeriodicPerturbation { period, table, sup_norm })
    }

    pub fn zero(period: usize) -> Result<Self> {
        Self::new(period, vec![Vec2::ZERO; period * period])
    }

    pub fn constant(period: usize, c: Vec2) -> Result<Self> {
        Self::new(period, vec![c; period * period])
    }

    pub fn from_fn(period: usize, mut f: impl FnMut(TorusIndex) -> Vec2) -> Result<Self> {
        Self::new(period, TorusIndex::all(period).map(&mut f).collect())
    }

    /// Every class displaced independently and uniformly in the closed disk of
    /// radius `radius`.
    pub fn sample_uniform<R: Rng + ?Sized>(period: usize, radius: f64, rng: &mut R) -> Result<Self> {
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::NonPositive { name: "radius", value: radius });
        }
        Self::from_fn(period, |_| {
            let r = radius * rng.random::<f64>().sqrt();
            Vec2::polar(r, 2.0 * PI * rng.random::<f64>())
        })
    }

    /// Parses `{"N": int, "displacements": [[a, b, dx, dy], ...]}`.
    /// Classes that are not listed get a zero displacement.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct File {
            #[serde(rename = "N")]
            n: usize,
            displacements: Vec<(i64, i64, f64, f64)>,
        }
        let file: File = serde_json::from_str(text)?;
        if file.n == 0 {
            return Err(Error::InvalidPeriod);
        }
        let n = file.n;
        let mut table = vec![Vec2::ZERO; n * n];
        let mut seen = vec![false; n * n];
        for (a, b, dx, dy) in file.displacements {
            if a < 0 || b < 0 || a >= n as i64 || b >= n as i64 {
                return Err(Error::ClassOutOfRange { a, b, n });
            }
            let i = a as usize + n * b as usize;
            if seen[i] {
                return Err(Error::DuplicateClass { a, b });
            }
            seen[i] = true;
            table[i] = Vec2::new(dx, dy);
        }
        Self::new(n, table)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<_> = TorusIndex::all(self.period)
            .map(|t| {
                let v = self.table[t.flat()];
                serde_json::json!([t.a, t.b, v.x, v.y])
            })
            .collect();
        serde_json::json!({ "N": self.period, "displacements": rows })
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn table(&self) -> &[Vec2] {
        &self.table
    }

    pub fn at(&self, idx: LatticeIndex) -> Vec2 {
        self.table[TorusIndex::of(idx, self.period).flat()]
    }

    pub fn at_class(&self, t: TorusIndex) -> Vec2 {
        self.table[t.flat()]
    }

    pub fn is_constant(&self) -> bool {
        self.table.iter().all(|v| *v == self.table[0])
    }

    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::new(self.period, self.table.iter().map(|v| *v * t).collect())
    }

    pub fn translated(&self, c: Vec2) -> Result<Self> {
        Self::new(self.period, self.table.iter().map(|v| *v + c).collect())
    }

    /// The same field seen from the origin moved to `shift`.
    pub fn relabeled(&self, shift: LatticeIndex) -> Self {
        let table = TorusIndex::all(self.period).map(|t| self.at(t.index().add(shift))).collect();
        PeriodicPerturbation { period: self.period, table, sup_norm: self.sup_norm }
    }

    /// `p_{x' + x} − p_{x'}` for every class `x'`, in table order.
    pub fn differences(&self, x: LatticeIndex) -> Vec<Vec2> {
        let n = self.period;
        let (dm, dn) = (x.m.rem_euclid(n as i64) as usize, x.n.rem_euclid(n as i64) as usize);
        let mut out = Vec::with_capacity(n * n);
        for b in 0..n {
            for a in 0..n {
                let shifted = self.table[(a + dm) % n + n * ((b + dn) % n)];
                out.push(shifted - self.table[a + n * b]);
            }
        }
        out
    }
}

/// Tiles one period of a finitely supported table. The period is the window
/// of N consecutive indices starting at −⌊N/2⌋ in each coordinate; entries
/// outside it are ignored and missing entries are zero.
pub fn periodize(finite_table: &BTreeMap<LatticeIndex, Vec2>, period: usize) -> Result<PeriodicPerturbation> {
    if period == 0 {
        return Err(Error::InvalidPeriod);
    }
    let start = -((period / 2) as i64);
    let end = start + period as i64;
    let mut table = vec![Vec2::ZERO; period * period];
    for (idx, v) in finite_table {
        if (start..end).contains(&idx.m) && (start..end).contains(&idx.n) {
            table[TorusIndex::of(*idx, period).flat()] = *v;
        }
    }
    PeriodicPerturbation::new(period, table)
}

/// The empirical law `Q_x` of relative displacements in direction `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct DisplacementLaw {
    pub atoms: Vec<(Vec2, f64)>,
}

impl DisplacementLaw {
    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    pub fn mean(&self) -> Vec2 {
        let x: NeumaierSum = self.atoms.iter().map(|(v, w)| v.x * w).collect();
        let y: NeumaierSum = self.atoms.iter().map(|(v, w)| v.y * w).collect();
        Vec2::new(x.value(), y.value())
    }

    /// `∫ |u|² dQ_x`.
    pub fn second_moment(&self) -> f64 {
        self.atoms.iter().map(|(v, w)| v.norm_sq() * w).collect::<NeumaierSum>().value()
    }
}

pub fn displacement_law(p: &PeriodicPerturbation, x: LatticeIndex) -> DisplacementLaw {
    let n2 = (p.period * p.period) as f64;
    // Adding 0.0 maps −0.0 to +0.0 so that equal atoms compare equal bitwise.
    let mut diffs: Vec<Vec2> = p.differences(x).into_iter().map(|d| Vec2::new(d.x + 0.0, d.y + 0.0)).collect();
    diffs.sort_by(|u, v| u.x.total_cmp(&v.x).then(u.y.total_cmp(&v.y)));
    let mut atoms: Vec<(Vec2, f64)> = Vec::new();
    for d in diffs {
        match atoms.last_mut() {
            Some((v, w)) if *v == d => *w += 1.0 / n2,
            _ => atoms.push((d, 1.0 / n2)),
        }
    }
    DisplacementLaw { atoms }
}

/// `∫ |u|² dQ_x` without building the law.
pub fn displacement_second_moment(p: &PeriodicPerturbation, x: LatticeIndex) -> f64 {
    let n2 = (p.period * p.period) as f64;
    p.differences(x).iter().map(|d| d.norm_sq()).collect::<NeumaierSum>().value() / n2
}

/// First-shell size: sum over the six nearest-neighbour directions of the
/// second moment of `Q_x`.
pub fn fs_size(p: &PeriodicPerturbation) -> f64 {
    FIRST_SHELL.iter().map(|&x| displacement_second_moment(p, x)).collect::<NeumaierSum>().value()
}

/// Autocorrelation `R_x` and covariance `C_x` of relative displacements,
/// indexed by torus class.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrices {
    pub period: usize,
    pub r: Vec<Sym2>,
    pub c: Vec<Sym2>,
}

impl CorrelationMatrices {
    pub fn r_at(&self, x: LatticeIndex) -> Sym2 {
        self.r[TorusIndex::of(x, self.period).flat()]
    }

    pub fn c_at(&self, x: LatticeIndex) -> Sym2 {
        self.c[TorusIndex::of(x, self.period).flat()]
    }
}

fn mean_sym(terms: impl Iterator<Item = Sym2>, count: f64) -> Sym2 {
    let mut xx = NeumaierSum::new();
    let mut xy = NeumaierSum::new();
    let mut yy = NeumaierSum::new();
    for s in terms {
        xx.add(s.xx);
        xy.add(s.xy);
        yy.add(s.yy);
    }
    Sym2::new(xx.value() / count, xy.value() / count, yy.value() / count)
}

pub fn correlation(p: &PeriodicPerturbation) -> CorrelationMatrices {
    let n = p.period;
    let n2 = (n * n) as f64;
    let mut r = Vec::with_capacity(n * n);
    let mut c = Vec::with_capacity(n * n);
    for x in TorusIndex::all(n) {
        let shift = x.index();
        r.push(mean_sym(
            TorusIndex::all(n).map(|y| {
                let a = p.at(y.index().add(shift));
                let b = p.at_class(y);
                Sym2::new(a.x * b.x, 0.5 * (a.x * b.y + a.y * b.x), a.y * b.y)
            }),
            n2,
        ));
        c.push(mean_sym(p.differences(shift).into_iter().map(Vec2::outer), n2));
    }
    CorrelationMatrices { period: n, r, c }
}

/// Discrete Fourier coefficients `p̂(k) = N⁻² Σ p(x') e^{−2πi k·x'}` for
/// `k = (jσ̂ + lτ̂)/N`, stored at `j + N·l` as (real part, imaginary part).
pub fn torus_fourier(p: &PeriodicPerturbation) -> Vec<(Vec2, Vec2)> {
    let n = p.period;
    let n2 = (n * n) as f64;
    let (cos, sin) = root_table(n);
    TorusIndex::all(n)
        .map(|k| {
            let mut re = [NeumaierSum::new(), NeumaierSum::new()];
            let mut im = [NeumaierSum::new(), NeumaierSum::new()];
            for y in TorusIndex::all(n) {
                // k·x' = (j a + l b)/N exactly.
                let phase = (k.a * y.a + k.b * y.b) % n;
                let v = p.at_class(y);
                re[0].add(v.x * cos[phase]);
                re[1].add(v.y * cos[phase]);
                im[0].add(-v.x * sin[phase]);
                im[1].add(-v.y * sin[phase]);
            }
            (
                Vec2::new(re[0].value() / n2, re[1].value() / n2),
                Vec2::new(im[0].value() / n2, im[1].value() / n2),
            )
        })
        .collect()
}

/// `cos(2πj/N)` and `sin(2πj/N)` for `j < N`.
pub(crate) fn root_table(n: usize) -> (Vec<f64>, Vec<f64>) {
    (0..n)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / n as f64;
            (t.cos(), t.sin())
        })
        .unzip()
}

/// The frequency `(jσ̂ + lτ̂)/N` of torus class `(j, l)`.
pub fn frequency(k: TorusIndex) -> Vec2 {
    let n = k.period as f64;
    (sigma_hat() * k.a as f64 + tau_hat() * k.b as f64) * (1.0 / n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralAtom {
    pub class: TorusIndex,
    /// Frequency reduced into Ω.
    pub omega: Vec2,
    pub matrix: Sym2,
}

/// Atomic spectral measure of a periodic perturbation.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralMeasure {
    pub period: usize,
    pub atoms: Vec<SpectralAtom>,
}

impl SpectralMeasure {
    pub fn total(&self) -> Sym2 {
        mean_sym(self.atoms.iter().map(|a| a.matrix), 1.0)
    }

    /// `Σ_k cos(2π k·x) R̂(k)`.
    pub fn reconstruct(&self, x: LatticeIndex) -> Sym2 {
        let n = self.period as i64;
        let (cos, _) = root_table(self.period);
        mean_sym(
            self.atoms.iter().map(|a| {
                let phase = (a.class.a as i64 * x.m + a.class.b as i64 * x.n).rem_euclid(n) as usize;
                a.matrix.scale(cos[phase])
            }),
            1.0,
        )
    }
}

/// Trace measure weight and normalized trace derivative of one atom.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceAtom {
    pub atom: usize,
    pub tau_mass: f64,
    pub eigenvalues: [f64; 2],
    pub eigenvectors: [Vec2; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceDecomposition {
    pub atoms: Vec<TraceAtom>,
}

pub fn spectral_measure(p: &PeriodicPerturbation) -> (SpectralMeasure, TraceDecomposition) {
    let n = p.period;
    let coeffs = torus_fourier(p);
    let atoms: Vec<SpectralAtom> = TorusIndex::all(n)
        .map(|k| {
            let (re, im) = coeffs[k.flat()];
            SpectralAtom {
                class: k,
                omega: voronoi_reduce(frequency(k), LatticeKind::Reciprocal),
                matrix: re.outer() + im.outer(),
            }
        })
        .collect();
    let total_trace: f64 = atoms.iter().map(|a| a.matrix.trace()).sum();
    let trace = atoms
        .iter()
        .enumerate()
        .filter(|(_, a)| total_trace > 0.0 && a.matrix.trace() > 1e-15 * total_trace)
        .map(|(i, a)| {
            let tau_mass = a.matrix.trace();
            let Eigen2 { values, vectors } = a.matrix.scale(1.0 / tau_mass).eigen();
            TraceAtom { atom: i, tau_mass, eigenvalues: values, eigenvectors: vectors }
        })
        .collect();
    (SpectralMeasure { period: n, atoms }, TraceDecomposition { atoms: trace })
}

/// Spectral size `tr Σ |ω|² R̂(ω)`.
pub fn sm_size(p: &PeriodicPerturbation) -> f64 {
    let (m, _) = spectral_measure(p);
    m.atoms.iter().map(|a| a.omega.norm_sq() * a.matrix.trace()).collect::<NeumaierSum>().value()
}
