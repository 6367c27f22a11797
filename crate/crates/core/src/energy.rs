//! Gaussian, Riesz and c.m.s.d. energies of A₂ and of its periodic
//! perturbations, each with a truncation error bound.

use crate::error::{check_positive, check_tol, Error, Result};
use crate::lattice::{LatticeIndex, PlaneLattice, TorusIndex, R_STAR};
use crate::perturbation::{root_table, PeriodicPerturbation};
use crate::quad::{integrate, integrate_to_infinity};
use crate::special::{exp_power_tail, gamma, RadialTail};
use crate::sum::{csum, NeumaierSum};
use crate::vec2::Vec2;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

const EPS: f64 = f64::EPSILON;

/// A lattice sum with a bound on its truncation and rounding error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyValue {
    pub value: f64,
    pub error_bound: f64,
    pub terms_used: usize,
}

impl EnergyValue {
    fn zero() -> Self {
        EnergyValue { value: 0.0, error_bound: 0.0, terms_used: 0 }
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.value - self.error_bound, self.value + self.error_bound)
    }
}

/// Which side of the Poisson summation formula to sum on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Direct,
    Dual,
    Auto,
}

/// A completely monotone function of squared distance, given through its
/// Bernstein measure over Gaussian widths.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum CmsdPotential {
    Gaussian { alpha: f64 },
    Riesz { s: f64 },
    AtomicMixture(Vec<(f64, f64)>),
}

impl CmsdPotential {
    pub fn validate(&self) -> Result<()> {
        match self {
            CmsdPotential::Gaussian { alpha } => check_positive("alpha", *alpha).map(|_| ()),
            CmsdPotential::Riesz { s } => {
                if s.is_finite() && *s > 2.0 {
                    Ok(())
                } else {
                    Err(Error::RieszExponent(*s))
                }
            }
            CmsdPotential::AtomicMixture(atoms) => {
                if atoms.is_empty() {
                    return Err(Error::InvalidArgument("empty Gaussian mixture".into()));
                }
                for &(alpha, w) in atoms {
                    check_positive("alpha", alpha)?;
                    check_positive("mixture weight", w)?;
                }
                Ok(())
            }
        }
    }

    /// `f(r)` itself.
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            CmsdPotential::Gaussian { alpha } => (-PI * alpha * r * r).exp(),
            CmsdPotential::Riesz { s } => r.powf(-s),
            CmsdPotential::AtomicMixture(atoms) => atoms.iter().map(|(a, w)| w * (-PI * a * r * r).exp()).sum(),
        }
    }
}

/// Density of the Bernstein measure of `r ↦ r^{−s}` at `α`.
pub fn riesz_bernstein_density(s: f64, alpha: f64) -> f64 {
    PI.powf(s / 2.0) * alpha.powf(s / 2.0 - 1.0) / gamma(s / 2.0)
}

fn lattice_tail(tail: &RadialTail, lattice: &PlaneLattice, r: f64) -> f64 {
    tail.bound(lattice.covolume(), lattice.covering_radius(), r)
}

/// `Σ_{x ≠ 0, |x| ≤ r} e^{−πα|x|²}` plus the certified tail beyond `r`.
pub fn gaussian_direct_sum(lattice: &PlaneLattice, alpha: f64, r: f64) -> EnergyValue {
    let pts = lattice.points_in_ball(r);
    let terms: Vec<f64> = pts.iter().filter(|p| !p.0.is_zero()).map(|p| (-PI * alpha * p.1.norm_sq()).exp()).collect();
    let value = csum(terms.iter().copied());
    let tail = lattice_tail(&RadialTail::gaussian(PI * alpha, 0.0), lattice, r);
    EnergyValue { value, error_bound: tail + 4.0 * EPS * value.abs(), terms_used: terms.len() }
}

/// `E_α(L) = Σ_{x ≠ 0} e^{−πα|x|²}` for a lattice of any covolume. The dual
/// side uses `Σ_L e^{−πα|x|²} = (Vα)⁻¹ Σ_{L*} e^{−π|k|²/α}`. `Auto` sums
/// directly for `α ≥ 1` and on the dual side otherwise.
pub fn gaussian_energy(lattice: &PlaneLattice, alpha: f64, tol: f64, side: Side) -> Result<EnergyValue> {
    check_positive("alpha", alpha)?;
    check_tol(tol)?;
    let direct = match side {
        Side::Direct => true,
        Side::Dual => false,
        Side::Auto => alpha >= 1.0,
    };
    if direct {
        let tail = RadialTail::gaussian(PI * alpha, 0.0);
        let r = tail.radius_for(lattice.covolume(), lattice.covering_radius(), tol / 2.0);
        return Ok(gaussian_direct_sum(lattice, alpha, r));
    }
    let dual = lattice.dual_lattice();
    let scale = 1.0 / (lattice.covolume() * alpha);
    let tail = RadialTail::gaussian(PI / alpha, 0.0);
    let r = tail.radius_for(dual.covolume(), dual.covering_radius(), tol / (2.0 * scale));
    let pts = dual.points_in_ball(r);
    let sum = csum(pts.iter().map(|p| (-PI * p.1.norm_sq() / alpha).exp()));
    let value = scale * sum - 1.0;
    let tail_bound = scale * lattice_tail(&tail, &dual, r);
    Ok(EnergyValue {
        value,
        error_bound: tail_bound + 4.0 * EPS * (scale * sum + 1.0),
        terms_used: pts.len(),
    })
}

/// `E_α(A₂)`.
pub fn gaussian_lattice_energy(alpha: f64, tol: f64) -> Result<EnergyValue> {
    gaussian_energy(&PlaneLattice::hexagonal(), alpha, tol, Side::Auto)
}

fn check_riesz(s: f64) -> Result<()> {
    CmsdPotential::Riesz { s }.validate()
}

/// `Σ_{x ≠ 0} |x|^{−s}` over A₂ by direct summation to radius `r`. The tail
/// is replaced by the midpoint of its lower and upper integral bounds.
pub fn riesz_energy_direct(s: f64, r: f64) -> Result<EnergyValue> {
    check_riesz(s)?;
    let lattice = PlaneLattice::hexagonal();
    let rho = lattice.covering_radius();
    if r <= 2.0 * rho {
        return Err(Error::InvalidArgument(format!("summation radius {r} is too small")));
    }
    let pts = lattice.points_in_ball(r);
    let partial = csum(pts.iter().filter(|p| !p.0.is_zero()).map(|p| p.1.norm_sq().powf(-s / 2.0)));
    let c = 2.0 * PI / lattice.covolume();
    let a = r - 2.0 * rho;
    let b = r + 2.0 * rho;
    let upper = c * (a.powf(2.0 - s) / (s - 2.0) + rho * a.powf(1.0 - s) / (s - 1.0));
    let lower = c * (b.powf(2.0 - s) / (s - 2.0) - rho * b.powf(1.0 - s) / (s - 1.0));
    let value = partial + 0.5 * (upper + lower);
    Ok(EnergyValue {
        value,
        error_bound: 0.5 * (upper - lower) + 4.0 * EPS * value,
        terms_used: pts.len() - 1,
    })
}

/// `Σ_{x ≠ 0} |x|^{−s}` over A₂ through the theta-function split at `t = 1`,
/// using that A₂ has covolume 1 and is congruent to its dual:
///
/// `Γ(s/2) π^{−s/2} E = Σ_{x ≠ 0} [E(s/2 − 1, π|x|²) + E(−s/2, π|x|²)] + 2/(s − 2) − 2/s`
///
/// with `E(b, z) = ∫₁^∞ t^b e^{−zt} dt`.
pub fn riesz_energy(s: f64, tol: f64) -> Result<EnergyValue> {
    check_riesz(s)?;
    check_tol(tol)?;
    let lattice = PlaneLattice::hexagonal();
    let prefactor = PI.powf(s / 2.0) / gamma(s / 2.0);
    let b_max = (s / 2.0 - 1.0).max(0.0);
    let gauss = RadialTail::gaussian(PI, 0.0);
    // Each term is at most 2 e^{−z}/(z − b_max) once z = π|x|² > b_max.
    let tail_at = |r: f64| {
        let z = PI * r * r;
        if z <= b_max + 1.0 {
            f64::INFINITY
        } else {
            prefactor * 2.0 / (z - b_max) * lattice_tail(&gauss, &lattice, r)
        }
    };
    let mut r = 2.0 * lattice.covering_radius() + 1.0;
    while tail_at(r) > tol / 2.0 {
        r += 0.25;
    }
    let pts = lattice.points_in_ball(r);
    let mut acc = NeumaierSum::new();
    for p in pts.iter().filter(|p| !p.0.is_zero()) {
        let z = PI * p.1.norm_sq();
        acc.add(exp_power_tail(s / 2.0 - 1.0, z));
        acc.add(exp_power_tail(-s / 2.0, z));
    }
    acc.add(2.0 / (s - 2.0));
    acc.add(-2.0 / s);
    let value = prefactor * acc.value();
    Ok(EnergyValue {
        value,
        error_bound: tail_at(r) + 64.0 * EPS * value.abs(),
        terms_used: pts.len() - 1,
    })
}

fn relative_displacements(p: &PeriodicPerturbation, x: LatticeIndex) -> Vec<Vec2> {
    p.differences(x)
}

/// `E_α(A₂ + p) − E_α(A₂)` by direct summation,
/// `N⁻² Σ_{x ≠ 0} Σ_{x'} G_α(x) expm1(−πα(2x·Δ + |Δ|²))`, `Δ = p_{x'+x} − p_{x'}`.
pub fn perturbed_energy_diff(p: &PeriodicPerturbation, alpha: f64, tol: f64) -> Result<EnergyValue> {
    check_positive("alpha", alpha)?;
    check_tol(tol)?;
    if p.is_constant() {
        return Ok(EnergyValue::zero());
    }
    let lattice = PlaneLattice::hexagonal();
    let d = 2.0 * p.sup_norm();
    let tail = RadialTail::gaussian(PI * alpha, d);
    let r = tail.radius_for(lattice.covolume(), lattice.covering_radius(), tol / 2.0);
    let pts: Vec<(LatticeIndex, Vec2)> = lattice.points_in_ball(r).into_iter().filter(|q| !q.0.is_zero()).collect();
    let n2 = (p.period() * p.period()) as f64;
    let partials: Vec<(f64, f64)> = pts
        .par_iter()
        .map(|&(idx, x)| {
            let g = (-PI * alpha * x.norm_sq()).exp();
            let mut acc = NeumaierSum::new();
            let mut abs = 0.0;
            for delta in relative_displacements(p, idx) {
                let t = g * (-PI * alpha * (2.0 * x.dot(delta) + delta.norm_sq())).exp_m1();
                acc.add(t);
                // Rounding in the exponent argument, then in the product.
                abs += t.abs() + g * PI * alpha * 8.0 * (2.0 * x.norm() * d + d * d);
            }
            (acc.value(), abs)
        })
        .collect();
    let value = csum(partials.iter().map(|t| t.0)) / n2;
    let rounding = 4.0 * EPS * csum(partials.iter().map(|t| t.1)) / n2;
    Ok(EnergyValue {
        value,
        error_bound: lattice_tail(&tail, &lattice, r) + rounding,
        terms_used: pts.len() * p.period() * p.period(),
    })
}

/// `(e^{iθ} − 1)` as (real, imaginary), accurate for small `θ`.
fn expi_m1(theta: f64) -> (f64, f64) {
    let h = (0.5 * theta).sin();
    (-2.0 * h * h, theta.sin())
}

/// `E_α(A₂ + p) − E_α(A₂)` on the Fourier side,
/// `(N⁴α)⁻¹ Σ_{k ∈ Â₂/N, k ≠ 0} e^{−π|k|²/α} (|S_p(k)|² − |S_0(k)|²)` with
/// `S_p(k) = Σ_{x'} e^{2πi k·(x' + p_{x'})}` over one period.
pub fn perturbed_energy_diff_dual(p: &PeriodicPerturbation, alpha: f64, tol: f64) -> Result<EnergyValue> {
    check_positive("alpha", alpha)?;
    check_tol(tol)?;
    if p.is_constant() {
        return Ok(EnergyValue::zero());
    }
    let n = p.period();
    let n2 = (n * n) as f64;
    let freq = PlaneLattice::hexagonal_reciprocal().scaled(1.0 / n as f64);
    let tail = RadialTail::gaussian(PI / alpha, 0.0);
    let r = tail.radius_for(freq.covolume(), freq.covering_radius(), alpha * tol / 2.0);
    let pts: Vec<(LatticeIndex, Vec2)> = freq.points_in_ball(r).into_iter().filter(|q| !q.0.is_zero()).collect();
    let (cos, sin) = root_table(n);
    let classes: Vec<TorusIndex> = TorusIndex::all(n).collect();
    let partials: Vec<(f64, f64)> = pts
        .par_iter()
        .map(|&(idx, k)| {
            let weight = (-PI * k.norm_sq() / alpha).exp();
            let (j, l) = (idx.m.rem_euclid(n as i64) as usize, idx.n.rem_euclid(n as i64) as usize);
            let mut re = NeumaierSum::new();
            let mut im = NeumaierSum::new();
            for t in &classes {
                let (c, s) = expi_m1(2.0 * PI * k.dot(p.at_class(*t)));
                let phase = (j * t.a + l * t.b) % n;
                re.add(cos[phase] * c - sin[phase] * s);
                im.add(cos[phase] * s + sin[phase] * c);
            }
            let (a_re, a_im) = (re.value(), im.value());
            let diff = if j == 0 && l == 0 {
                a_re * a_re + a_im * a_im + 2.0 * n2 * a_re
            } else {
                a_re * a_re + a_im * a_im
            };
            let scale = (a_re.abs() + a_im.abs() + 4.0 * n2).powi(2);
            (weight * diff, weight * scale)
        })
        .collect();
    let norm = 1.0 / (n2 * n2 * alpha);
    let value = norm * csum(partials.iter().map(|t| t.0));
    let rounding = norm * 8.0 * n2 * EPS * csum(partials.iter().map(|t| t.1));
    Ok(EnergyValue {
        value,
        error_bound: lattice_tail(&tail, &freq, r) / alpha + rounding,
        terms_used: pts.len() * n * n,
    })
}

/// Direct summation for `α ≥ 1`, Fourier side below.
pub fn perturbed_energy_diff_auto(p: &PeriodicPerturbation, alpha: f64, tol: f64) -> Result<EnergyValue> {
    if alpha >= 1.0 {
        perturbed_energy_diff(p, alpha, tol)
    } else {
        perturbed_energy_diff_dual(p, alpha, tol)
    }
}

/// `E_f(A₂ + p) − E_f(A₂)` for a c.m.s.d. potential.
pub fn cmsd_energy_diff(p: &PeriodicPerturbation, f: &CmsdPotential, tol: f64) -> Result<EnergyValue> {
    f.validate()?;
    check_tol(tol)?;
    match f {
        CmsdPotential::Gaussian { alpha } => perturbed_energy_diff(p, *alpha, tol),
        CmsdPotential::AtomicMixture(atoms) => {
            let total_w: f64 = atoms.iter().map(|a| a.1).sum();
            let mut value = NeumaierSum::new();
            let mut err = 0.0;
            let mut terms = 0;
            for &(alpha, w) in atoms {
                let e = perturbed_energy_diff_auto(p, alpha, tol / total_w)?;
                value.add(w * e.value);
                err += w * e.error_bound;
                terms += e.terms_used;
            }
            Ok(EnergyValue { value: value.value(), error_bound: err, terms_used: terms })
        }
        CmsdPotential::Riesz { s } => riesz_diff(p, *s, tol),
    }
}

/// Integrates the Gaussian differences against the Riesz density over
/// `y = ln α`, with both ends of the α-range cut off under explicit bounds.
fn riesz_diff(p: &PeriodicPerturbation, s: f64, tol: f64) -> Result<EnergyValue> {
    if p.is_constant() {
        return Ok(EnergyValue::zero());
    }
    let lattice = PlaneLattice::hexagonal();
    let n = p.period() as f64;
    let prefactor = PI.powf(s / 2.0) / gamma(s / 2.0);
    let d = 2.0 * p.sup_norm();

    // α large: |D(α)| ≤ Σ_{x≠0} e^{−πα(|x|−d)²} ≤ B e^{−παm²} with
    // B = Σ_{x≠0} e^{−πα((|x|−d)² − m²)} decreasing in α, so evaluated at α = 4.
    let m = R_STAR - d;
    let b_hi = {
        let beta = PI * 4.0;
        let tail = RadialTail::gaussian(beta, d);
        let r = tail.radius_for(1.0, lattice.covering_radius(), 1e-6);
        lattice
            .points_in_ball(r)
            .iter()
            .filter(|q| !q.0.is_zero())
            .map(|q| (-beta * ((q.1.norm() - d).powi(2) - m * m)).exp())
            .sum::<f64>()
            + lattice_tail(&tail, &lattice, r) * (beta * m * m).exp()
    };
    let hi_bound = |alpha_hi: f64| -> f64 {
        let z = PI * m * m * alpha_hi;
        b_hi * prefactor * alpha_hi.powf(s / 2.0) * exp_power_tail(s / 2.0 - 1.0, z)
    };
    // α small: |D(α)| ≤ α⁻¹ Σ_{k≠0} e^{−π|k|²/α} over Â₂/N, whose shortest
    // vector has length r⋆/N; the same monotonicity applies with α = 1/4.
    let freq = PlaneLattice::hexagonal_reciprocal().scaled(1.0 / n);
    let k_min2 = (R_STAR / n).powi(2);
    let c = PI * k_min2;
    let b_lo = {
        let beta = PI / 0.25;
        let tail = RadialTail::gaussian(beta, 0.0);
        let r = tail.radius_for(freq.covolume(), freq.covering_radius(), 1e-6);
        freq.points_in_ball(r)
            .iter()
            .filter(|q| !q.0.is_zero())
            .map(|q| (-beta * (q.1.norm_sq() - k_min2)).exp())
            .sum::<f64>()
            + lattice_tail(&tail, &freq, r) * (beta * k_min2).exp()
    };
    let lo_bound = |alpha_lo: f64| -> f64 {
        let a = s / 2.0 - 2.0;
        b_lo * prefactor * alpha_lo.powf(a + 1.0) * exp_power_tail(-a - 2.0, c / alpha_lo)
    };
    let mut alpha_hi = 4.0;
    while hi_bound(alpha_hi) > tol / 4.0 {
        alpha_hi *= 1.5;
    }
    let mut alpha_lo = 0.25;
    while lo_bound(alpha_lo) > tol / 4.0 {
        alpha_lo /= 1.5;
    }
    let (y0, y1) = (alpha_lo.ln(), alpha_hi.ln());
    let eval_tol = |alpha: f64| tol / (4.0 * (y1 - y0) * prefactor * alpha.powf(s / 2.0));
    let mut worst_err: f64 = 0.0;
    let mut failure = None;
    let q = integrate(
        |y| {
            let alpha = y.exp();
            match perturbed_energy_diff_auto(p, alpha, eval_tol(alpha)) {
                Ok(e) => {
                    let w = prefactor * alpha.powf(s / 2.0);
                    worst_err = worst_err.max(e.error_bound * w);
                    e.value * w
                }
                Err(err) => {
                    failure.get_or_insert(err);
                    0.0
                }
            }
        },
        y0,
        y1,
        tol / 4.0,
        0.0,
        400,
    );
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(EnergyValue {
        value: q.value,
        error_bound: q.error + worst_err * (y1 - y0) + hi_bound(alpha_hi) + lo_bound(alpha_lo),
        terms_used: q.evaluations,
    })
}

/// The normalized pair sum over the perturbed points inside the disk of
/// radius `r`.
pub fn finite_window_energy(p: &PeriodicPerturbation, f: &CmsdPotential, r: f64) -> Result<f64> {
    f.validate()?;
    check_positive("window radius", r)?;
    let lattice = PlaneLattice::hexagonal();
    let pts: Vec<Vec2> = lattice
        .points_in_ball(r + 1.0)
        .into_iter()
        .map(|(idx, x)| x + p.at(idx))
        .filter(|y| y.norm() <= r)
        .collect();
    if pts.len() < 2 {
        return Ok(0.0);
    }
    let rows: Vec<f64> = pts
        .par_iter()
        .enumerate()
        .map(|(i, &a)| csum(pts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &b)| f.eval((a - b).norm()))))
        .collect();
    Ok(csum(rows) / pts.len() as f64)
}

fn incomplete_upper(a: f64, b: f64, from: f64) -> f64 {
    // ∫_{from}^∞ e^{−bα} α^{a−1} dα
    from.powf(a) * exp_power_tail(a - 1.0, b * from)
}

fn check_window(alpha0: f64, alpha1: f64) -> Result<()> {
    if !(alpha0 > 0.0 && alpha0 <= 1.0 && alpha1 >= 1.0 && alpha1.is_finite()) {
        return Err(Error::InvalidArgument(format!("need 0 < α₀ ≤ 1 ≤ α₁, got ({alpha0}, {alpha1})")));
    }
    Ok(())
}

/// The ratio of the uniform local optimality condition,
///
/// `[∫_{α₁}^∞ e^{−παr⋆²/2} dW + ∫₀^{α₀} α⁻¹ dW] / [∫₁^∞ e^{−παr⋆²} dW + ∫₀¹ e^{−πr⋆²/α} dW]`,
///
/// in closed form.
pub fn uniformity_ratio(f: &CmsdPotential, alpha0: f64, alpha1: f64) -> Result<f64> {
    f.validate()?;
    check_window(alpha0, alpha1)?;
    let r2 = R_STAR * R_STAR;
    match f {
        CmsdPotential::Riesz { s } => {
            let a = s / 2.0;
            let num = incomplete_upper(a, PI * r2 / 2.0, alpha1) + alpha0.powf(a - 1.0) / (a - 1.0);
            let den = incomplete_upper(a, PI * r2, 1.0) + exp_power_tail(-a - 1.0, PI * r2);
            Ok(num / den)
        }
        CmsdPotential::Gaussian { alpha } => uniformity_ratio(&CmsdPotential::AtomicMixture(vec![(*alpha, 1.0)]), alpha0, alpha1),
        CmsdPotential::AtomicMixture(atoms) => {
            let mut num = 0.0;
            let mut den = 0.0;
            for &(a, w) in atoms {
                if a >= alpha1 {
                    num += w * (-PI * a * r2 / 2.0).exp();
                }
                if a <= alpha0 {
                    num += w / a;
                }
                den += w * if a >= 1.0 { (-PI * a * r2).exp() } else { (-PI * r2 / a).exp() };
            }
            Ok(num / den)
        }
    }
}

/// The same ratio as `uniformity_ratio` for Riesz potentials, by adaptive
/// quadrature of the Bernstein density.
pub fn uniformity_ratio_quadrature(s: f64, alpha0: f64, alpha1: f64) -> Result<f64> {
    check_riesz(s)?;
    check_window(alpha0, alpha1)?;
    let r2 = R_STAR * R_STAR;
    let a = s / 2.0;
    let density = |alpha: f64| alpha.powf(a - 1.0);
    let (atol, rtol, max) = (0.0, 1e-13, 2000);
    let far = integrate_to_infinity(|x| (-PI * x * r2 / 2.0).exp() * density(x), alpha1, atol, rtol, max).value;
    // α = α₀ e^{−y} removes the singularity of α^{a−2} at 0.
    let near = integrate_to_infinity(|y| alpha0.powf(a - 1.0) * (-(a - 1.0) * y).exp(), 0.0, atol, rtol, max).value;
    let big = integrate_to_infinity(|x| (-PI * x * r2).exp() * density(x), 1.0, atol, rtol, max).value;
    let small = integrate(
        |x| if x <= 0.0 { 0.0 } else { (-PI * r2 / x).exp() * density(x) },
        0.0,
        1.0,
        atol,
        rtol,
        max,
    )
    .value;
    Ok((far + near) / (big + small))
}
