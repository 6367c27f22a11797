//! Special functions and certified tail bounds for radial lattice sums.

use std::f64::consts::PI;

pub use libm::erfc;
pub use statrs::function::gamma::gamma;
use statrs::function::gamma::gamma_ur;

/// `∫₁^∞ t^b e^{−z t} dt` for `z > 0`, i.e. `z^{−a} Γ(a, z)` with `a = b + 1`.
///
/// Works for negative `a`, which the regularized incomplete gamma of statrs
/// does not accept.
pub fn exp_power_tail(b: f64, z: f64) -> f64 {
    debug_assert!(z > 0.0);
    let a = b + 1.0;
    if a > 0.0 && z < a + 1.0 {
        return gamma_ur(a, z) * gamma(a) * z.powf(-a);
    }
    // Legendre continued fraction, modified Lentz.
    const TINY: f64 = 1e-300;
    let mut bb = z + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / bb;
    let mut h = d;
    for i in 1..100_000 {
        let an = -(i as f64) * (i as f64 - a);
        bb += 2.0;
        d = an * d + bb;
        if d.abs() < TINY {
            d = TINY;
        }
        c = bb + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-z).exp() * h
}

/// `∫_b^∞ s^n e^{−β s²} ds` for every `n` up to `n_max`, any real `b`.
fn gaussian_moment_tails(n_max: usize, beta: f64, b: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let g = (-beta * b * b).exp();
    out.push(0.5 * (PI / beta).sqrt() * erfc(b * beta.sqrt()));
    if n_max >= 1 {
        out.push(g / (2.0 * beta));
    }
    for n in 2..=n_max {
        let v = b.powi(n as i32 - 1) * g / (2.0 * beta) + (n as f64 - 1.0) / (2.0 * beta) * out[n - 2];
        out.push(v);
    }
    out
}

fn binomial_shift(poly: &[f64], d: f64) -> Vec<f64> {
    // Coefficients of P(s + d) in powers of s.
    let mut out = vec![0.0; poly.len()];
    for (j, &c) in poly.iter().enumerate() {
        let mut binom = 1.0;
        for k in 0..=j {
            out[k] += c * binom * d.powi((j - k) as i32);
            binom = binom * (j - k) as f64 / (k + 1) as f64;
        }
    }
    out
}

/// Majorant `P(t) e^{−β (t − d)²}` of the terms of a radial lattice sum,
/// with `P` a polynomial with nonnegative coefficients.
///
/// The tail `Σ_{|y| > R} g(|y|)` over a lattice (or a translate of one) is
/// bounded by comparing each point with its Voronoi cell: a cell of area `V`
/// sits inside the disk of radius `ρ` around its point, so the tail is at most
/// `(2π/V) ∫_{R−2ρ}^∞ (t + ρ) g(t) dt` once `g` is nonincreasing on `[R − 2ρ, ∞)`.
#[derive(Clone, Debug)]
pub struct RadialTail {
    pub beta: f64,
    pub shift: f64,
    pub poly: Vec<f64>,
}

impl RadialTail {
    pub fn gaussian(beta: f64, shift: f64) -> Self {
        RadialTail { beta, shift, poly: vec![1.0] }
    }

    pub fn new(beta: f64, shift: f64, poly: Vec<f64>) -> Self {
        debug_assert!(poly.iter().all(|&c| c >= 0.0));
        RadialTail { beta, shift, poly }
    }

    /// Radius beyond which the majorant is nonincreasing.
    pub fn monotone_from(&self) -> f64 {
        let deg = self.poly.len().saturating_sub(1) as f64;
        self.shift + (deg / (2.0 * self.beta)).sqrt()
    }

    pub fn bound(&self, covolume: f64, cell_radius: f64, r: f64) -> f64 {
        let a = r - 2.0 * cell_radius;
        if a < self.monotone_from() {
            return f64::INFINITY;
        }
        let d = self.shift;
        let shifted = binomial_shift(&self.poly, d);
        // Multiply by (s + d + ρ).
        let mut q = vec![0.0; shifted.len() + 1];
        for (k, &c) in shifted.iter().enumerate() {
            q[k] += c * (d + cell_radius);
            q[k + 1] += c;
        }
        let moments = gaussian_moment_tails(q.len() - 1, self.beta, a - d);
        let integral: f64 = q.iter().zip(&moments).map(|(c, m)| c * m).sum();
        2.0 * PI / covolume * integral.max(0.0)
    }

    /// Smallest radius on a fine ladder whose tail bound is below `tol`.
    pub fn radius_for(&self, covolume: f64, cell_radius: f64, tol: f64) -> f64 {
        let step = 0.25 / self.beta.sqrt();
        let mut r = self.monotone_from() + 2.0 * cell_radius;
        while self.bound(covolume, cell_radius, r) > tol {
            r += step;
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn exp_power_tail_matches_quadrature_for_negative_exponents() {
        for &(b, z) in &[(-2.0, 3.6), (-4.5, 3.6), (-1.5, 10.0), (0.5, 3.6), (3.0, 3.6), (1.0, 0.5)] {
            let reference = simpson(|t: f64| t.powf(b) * (-z * t).exp(), 1.0, 1.0 + 80.0 / z, 200_000);
            let got = exp_power_tail(b, z);
            assert!((got - reference).abs() < 1e-12 * reference, "b={b} z={z}: {got} vs {reference}");
        }
    }

    #[test]
    fn moment_tails_match_quadrature() {
        let beta = 1.7;
        for &b in &[-0.4, 0.0, 0.8, 2.5] {
            let m = gaussian_moment_tails(5, beta, b);
            for (n, &got) in m.iter().enumerate() {
                let reference = simpson(|s: f64| s.powi(n as i32) * (-beta * s * s).exp(), b, b + 12.0, 200_000);
                assert!((got - reference).abs() < 1e-12, "n={n} b={b}: {got} vs {reference}");
            }
        }
    }

    #[test]
    fn shifted_polynomial() {
        // (s + 2)^2 = s^2 + 4s + 4
        let p = binomial_shift(&[0.0, 0.0, 1.0], 2.0);
        assert_eq!(p, vec![4.0, 4.0, 1.0]);
    }
}
