//! The direction-weighted lattice sum `Ψ_{α,v}` and the checks that it is
//! smallest at the origin.

use crate::design::Hexagon;
use crate::error::{check_positive, Error, Result};
use crate::lattice::{hexagon_grid, PlaneLattice, R_STAR, SQRT_3};
use crate::special::RadialTail;
use crate::sum::NeumaierSum;
use crate::vec2::Vec2;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

pub const ALPHA_BAR: f64 = 0.552;
pub const MU_STAR: f64 = 2.73;
pub const MU_HAT: f64 = 1.5;
/// Slack factor in the threshold `b(α)`.
pub const B_SLACK: f64 = 3.01;
/// Upper end of the α-range scanned for minimality.
pub const ALPHA_DAGGER: f64 = 5.0;
/// Floor for the normalized first-shell gap in the case audit.
pub const FIRST_SHELL_FLOOR: f64 = 0.005;

const EPS: f64 = f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SmallAlphaConstants {
    pub alpha_bar: f64,
    pub mu_star: f64,
    pub mu_hat: f64,
    pub k0: f64,
    pub rho0: f64,
    pub r_star_star: f64,
}

impl SmallAlphaConstants {
    pub fn standard() -> Self {
        SmallAlphaConstants {
            alpha_bar: ALPHA_BAR,
            mu_star: MU_STAR,
            mu_hat: MU_HAT,
            k0: PI / ALPHA_BAR,
            rho0: MU_STAR * ALPHA_BAR / PI,
            r_star_star: SQRT_3 * R_STAR,
        }
    }
}

fn check_unit(v: Vec2) -> Result<()> {
    if (v.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitDirection(v.norm()));
    }
    Ok(())
}

/// `c e^{x}` with `0 · ∞` read as 0.
fn scaled_exp(c: f64, x: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * x.exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PsiSide {
    Direct,
    Dual,
    Auto,
}

impl PsiSide {
    fn resolve(self, alpha: f64) -> PsiSide {
        match self {
            PsiSide::Auto if alpha <= 1.0 => PsiSide::Direct,
            PsiSide::Auto => PsiSide::Dual,
            s => s,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PsiEvaluation {
    pub value: f64,
    pub side: PsiSide,
    pub error_bound: f64,
}

const PSI_TOL: f64 = 1e-15;

/// `Ψ_{α,v}(u) = Σ_{x ∈ A₂} |(x + u)·v|² e^{−(π/α)|x + u|²}`, or on the dual side
/// `(α²/2π)(1 + Σ_{k ≠ 0} (1 − 2πα(k·v)²) e^{−πα|k|²} cos 2πu·k)`.
pub fn psi_eval(alpha: f64, v: Vec2, u: Vec2, side: PsiSide) -> Result<PsiEvaluation> {
    check_positive("alpha", alpha)?;
    check_unit(v)?;
    let side = side.resolve(alpha);
    let lattice = PlaneLattice::hexagonal();
    let rho = lattice.covering_radius();
    match side {
        PsiSide::Direct => {
            let beta = PI / alpha;
            // Summed over the translate A₂ + u.
            let tail = RadialTail::new(beta, 0.0, vec![0.0, 0.0, 1.0]);
            let r = tail.radius_for(1.0, rho, PSI_TOL);
            let mut acc = NeumaierSum::new();
            let mut abs = 0.0;
            for (_, x) in lattice.points_in_ball(r + u.norm()) {
                let y = x + u;
                if y.norm() <= r {
                    let t = y.dot(v).powi(2) * (-beta * y.norm_sq()).exp();
                    acc.add(t);
                    abs += t;
                }
            }
            Ok(PsiEvaluation { value: acc.value(), side, error_bound: tail.bound(1.0, rho, r) + 8.0 * EPS * abs })
        }
        _ => {
            let dual = PlaneLattice::hexagonal_reciprocal();
            let beta = PI * alpha;
            let tail = RadialTail::new(beta, 0.0, vec![1.0, 0.0, 2.0 * PI * alpha]);
            let pre = alpha * alpha / (2.0 * PI);
            let r = tail.radius_for(1.0, rho, PSI_TOL / pre);
            let mut acc = NeumaierSum::new();
            let mut abs = 1.0;
            acc.add(1.0);
            for (idx, k) in dual.points_in_ball(r) {
                if idx.is_zero() {
                    continue;
                }
                let t = (1.0 - 2.0 * PI * alpha * k.dot(v).powi(2)) * (-beta * k.norm_sq()).exp() * (2.0 * PI * u.dot(k)).cos();
                acc.add(t);
                abs += t.abs();
            }
            Ok(PsiEvaluation {
                value: pre * acc.value(),
                side,
                error_bound: pre * (tail.bound(1.0, rho, r) + 8.0 * EPS * abs),
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PsiGap {
    /// `(Ψ(u) − Ψ(0)) / (|u|² e^{−πr⋆²/α})`.
    pub normalized: f64,
    pub error_bound: f64,
    pub side: PsiSide,
}

/// Truncated point set and weights for the normalized gap at one α, valid
/// for every `u` with `u_min ≤ |u| ≤ u_max`.
#[derive(Clone, Debug)]
pub struct GapKernel {
    alpha: f64,
    side: PsiSide,
    /// `(x, y, |x|, w)` with `w = e^{(π/α)(r⋆² − |x|²)}` on the direct side
    /// and `w = e^{−πα|k|²}` on the dual side.
    points: Vec<(f64, f64, f64, f64)>,
    tail_bound: f64,
    u_min: f64,
    u_max: f64,
}

impl GapKernel {
    pub fn new(alpha: f64, side: PsiSide, u_min: f64, u_max: f64) -> Result<Self> {
        check_positive("alpha", alpha)?;
        check_positive("u_min", u_min)?;
        if !(u_max >= u_min && u_max.is_finite()) {
            return Err(Error::InvalidArgument(format!("need u_min ≤ u_max, got {u_min} and {u_max}")));
        }
        let side = side.resolve(alpha);
        let rho = PlaneLattice::hexagonal().covering_radius();
        let r2 = R_STAR * R_STAR;
        let d = u_max;
        let (lattice, beta, tail, scale) = match side {
            PsiSide::Direct => {
                let beta = PI / alpha;
                // |g(x+u) − g(x)| ≤ |u| sup |∇g| on the segment, with
                // |∇g(y)| ≤ (2|y| + 2β|y|³) e^{−β|y|²} and |y| ≤ |x| + |u|.
                let poly = vec![2.0 * d + 2.0 * beta * d.powi(3), 2.0 + 6.0 * beta * d * d, 6.0 * beta * d, 2.0 * beta];
                (PlaneLattice::hexagonal(), beta, RadialTail::new(beta, d, poly), (beta * r2).exp() / u_min)
            }
            _ => {
                let beta = PI * alpha;
                // 2 sin²(πu·k) ≤ 2π²|u|²|k|².
                let poly = vec![0.0, 0.0, 1.0, 0.0, 2.0 * PI * alpha];
                let scale = alpha * alpha * PI * (PI * r2 / alpha).exp();
                (PlaneLattice::hexagonal_reciprocal(), beta, RadialTail::new(beta, 0.0, poly), scale)
            }
        };
        let r = tail.radius_for(1.0, rho, PSI_TOL / scale);
        let points = lattice
            .points_in_ball(r)
            .into_iter()
            .filter(|(idx, _)| side == PsiSide::Direct || !idx.is_zero())
            .map(|(_, x)| {
                let w = match side {
                    PsiSide::Direct => (beta * (r2 - x.norm_sq())).exp(),
                    _ => (-beta * x.norm_sq()).exp(),
                };
                (x.x, x.y, x.norm(), w)
            })
            .collect();
        Ok(GapKernel { alpha, side, points, tail_bound: scale * tail.bound(1.0, rho, r), u_min, u_max })
    }

    pub fn side(&self) -> PsiSide {
        self.side
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn gap(&self, v: Vec2, u: Vec2) -> Result<PsiGap> {
        check_unit(v)?;
        let u2 = u.norm_sq();
        let d = u2.sqrt();
        if !(d >= self.u_min * (1.0 - 1e-12) && d <= self.u_max * (1.0 + 1e-12)) {
            return Err(Error::InvalidArgument(format!("|u| = {d} is outside [{}, {}]", self.u_min, self.u_max)));
        }
        let (vx, vy, ux, uy) = (v.x, v.y, u.x, u.y);
        let uv = ux * vx + uy * vy;
        let alpha = self.alpha;
        let mut acc = NeumaierSum::new();
        let mut abs = 0.0;
        match self.side {
            PsiSide::Direct => {
                let beta = PI / alpha;
                for &(x, y, n, w) in &self.points {
                    let xv = x * vx + y * vy;
                    let a = (xv + uv) * (xv + uv);
                    let t = w * (a * (-beta * (2.0 * (x * ux + y * uy) + u2)).exp_m1() + uv * (2.0 * xv + uv));
                    acc.add(t);
                    abs += t.abs() + w * a * beta * (2.0 * n * d + u2);
                }
                Ok(PsiGap { normalized: acc.value() / u2, error_bound: self.tail_bound + 8.0 * EPS * abs / u2, side: self.side })
            }
            _ => {
                let pre = alpha * alpha / PI * (PI * R_STAR * R_STAR / alpha).exp() / u2;
                for &(kx, ky, _, w) in &self.points {
                    let kv = kx * vx + ky * vy;
                    let s = (PI * (kx * ux + ky * uy)).sin();
                    let t = (2.0 * PI * alpha * kv * kv - 1.0) * w * s * s;
                    acc.add(t);
                    abs += t.abs();
                }
                Ok(PsiGap { normalized: pre * acc.value(), error_bound: self.tail_bound + 8.0 * EPS * pre * abs, side: self.side })
            }
        }
    }
}

/// Normalized gap `(Ψ_{α,v}(u) − Ψ_{α,v}(0)) / (|u|² e^{−πr⋆²/α})`, summed
/// term by term without forming the two values.
pub fn psi_gap(alpha: f64, v: Vec2, u: Vec2, side: PsiSide) -> Result<PsiGap> {
    check_unit(v)?;
    let d = u.norm();
    if d == 0.0 {
        return Err(Error::InvalidArgument("the gap is normalized by |u|², so u must be nonzero".into()));
    }
    GapKernel::new(alpha, side, d, d)?.gap(v, u)
}

/// `n` log-spaced values on `[lo, hi]`, endpoints included.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// `n` angles `jπ/n`, `j < n`.
pub fn angle_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| PI * j as f64 / n as f64).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanMinimum {
    pub min_gap: f64,
    pub error_bound: f64,
    pub alpha: f64,
    pub v_angle: f64,
    pub u: Vec2,
    pub evaluations: usize,
}

/// Smallest normalized gap over a product grid, `u = 0` excluded. Ties keep
/// the first grid point in (α, angle, u) order.
pub fn psi_gap_scan(alphas: &[f64], angles: &[f64], us: &[Vec2]) -> Result<ScanMinimum> {
    let us: Vec<Vec2> = us.iter().copied().filter(|u| u.norm_sq() > 0.0).collect();
    if alphas.is_empty() || angles.is_empty() || us.is_empty() {
        return Err(Error::InvalidArgument("scan grids must be nonempty and contain a nonzero u".into()));
    }
    let norms = us.iter().map(|u| u.norm());
    let u_min = norms.clone().fold(f64::INFINITY, f64::min);
    let u_max = norms.fold(0.0, f64::max);
    let dirs: Vec<(f64, Vec2)> = angles.iter().map(|&t| (t, Vec2::polar(1.0, t))).collect();
    let per_alpha: Vec<Result<ScanMinimum>> = alphas
        .par_iter()
        .map(|&alpha| {
            let kernel = GapKernel::new(alpha, PsiSide::Auto, u_min, u_max)?;
            let mut best: Option<ScanMinimum> = None;
            for &(angle, v) in &dirs {
                for &u in &us {
                    let g = kernel.gap(v, u)?;
                    if best.is_none_or(|b| g.normalized < b.min_gap) {
                        best = Some(ScanMinimum { min_gap: g.normalized, error_bound: g.error_bound, alpha, v_angle: angle, u, evaluations: 0 });
                    }
                }
            }
            let mut b = best.expect("grids are nonempty");
            b.evaluations = dirs.len() * us.len();
            Ok(b)
        })
        .collect();
    let mut total = 0;
    let mut best: Option<ScanMinimum> = None;
    for cell in per_alpha {
        let c = cell?;
        total += c.evaluations;
        if best.is_none_or(|b| c.min_gap < b.min_gap) {
            best = Some(c);
        }
    }
    let mut best = best.expect("grids are nonempty");
    best.evaluations = total;
    Ok(best)
}

/// The default scan: 60 log-spaced α on `[0.02, α†]`, 24 directions and
/// the `60 × 60` grid of the Voronoi cell, or the same with every grid halved.
pub fn default_scan(halved: bool) -> Result<ScanMinimum> {
    let f = if halved { 2 } else { 1 };
    psi_gap_scan(&log_grid(0.02, ALPHA_DAGGER, 60 / f), &angle_grid(24 / f), &hexagon_grid(60 / f))
}

/// `min |a·v|` over unit `v` with `|u·v| ≤ κ|u|`, in closed form.
pub fn constrained_direction_min(u: Vec2, a: Vec2, kappa: f64) -> Result<f64> {
    if u.norm_sq() == 0.0 {
        return Err(Error::InvalidArgument("u must be nonzero".into()));
    }
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::InvalidArgument(format!("κ must lie in [0, 1], got {kappa}")));
    }
    let z1 = u * (1.0 / u.norm());
    let (a1, a2) = (a.dot(z1), a.dot(z1.perp()));
    Ok((a2.abs() * (1.0 - kappa * kappa).sqrt() - a1.abs() * kappa).max(0.0))
}

/// `b(α) = √3.01 r⋆ e^{(π/2α)(|u|² − r⋆²)}`, the threshold on `|u·v|`.
pub fn b_threshold(alpha: f64, rho: f64) -> f64 {
    B_SLACK.sqrt() * R_STAR * (PI / (2.0 * alpha) * (rho * rho - R_STAR * R_STAR)).exp()
}

/// `α_m(ρ) = min(ᾱ, πρ/μ⋆)`.
pub fn alpha_m(rho: f64) -> f64 {
    ALPHA_BAR.min(PI * rho / MU_STAR)
}

/// `κ(α, ρ) = b(α)/ρ`.
pub fn kappa_at(alpha: f64, rho: f64) -> f64 {
    b_threshold(alpha, rho) / rho
}

/// `κ(ρ) = κ(α_m(ρ), ρ)`.
pub fn kappa(rho: f64) -> f64 {
    kappa_at(alpha_m(rho), rho)
}

pub fn delta(rho: f64) -> f64 {
    kappa(rho).asin()
}

/// The good vertex `s₅ = r⋆(−½, −√3/2)`.
pub fn s5() -> Vec2 {
    Vec2::polar(R_STAR, 4.0 * PI / 3.0)
}

/// `F(u, α, v) = |(s₅ + u)·v|² e^{−(2π/α)s₅·u − (π/α)|u|²}`.
pub fn f_good_vertex(u: Vec2, alpha: f64, v: Vec2) -> f64 {
    let s = s5();
    scaled_exp((s + u).dot(v).powi(2), -PI / alpha * (2.0 * s.dot(u) + u.norm_sq()))
}

/// `M(u, α)` for `u = ρ(cos θ, sin θ)`, `θ ∈ [0, π/6]`.
pub fn m_prefactor(rho: f64, theta: f64, alpha: f64) -> f64 {
    let k = kappa_at(alpha, rho).min(1.0);
    let phi = PI / 3.0 - theta;
    (R_STAR * phi.sin() * (1.0 - k * k).sqrt() - (rho - R_STAR * phi.cos()).abs() * k).max(0.0)
}

/// `G(u, α) = M(u, α)² e^{(π/α)(2r⋆ρ cos(π/3 − θ) − ρ²)}`.
pub fn g_value(rho: f64, theta: f64, alpha: f64) -> f64 {
    let phi = PI / 3.0 - theta;
    scaled_exp(m_prefactor(rho, theta, alpha).powi(2), PI / alpha * (2.0 * R_STAR * rho * phi.cos() - rho * rho))
}

/// `N(ρ, φ)` through its explicit branches.
pub fn n_value(rho: f64, phi: f64) -> f64 {
    let (k, d) = (kappa(rho), delta(rho));
    if rho <= R_STAR / 2.0 || phi <= (rho / R_STAR).acos() {
        R_STAR * (phi - d).sin() + rho * k
    } else {
        R_STAR * (phi + d).sin() - rho * k
    }
}

/// `N(ρ, φ)` from the absolute value, without branches.
pub fn n_value_abs(rho: f64, phi: f64) -> f64 {
    let k = kappa(rho);
    R_STAR * phi.sin() * (1.0 - k * k).sqrt() - (rho - R_STAR * phi.cos()).abs() * k
}

pub fn h_value(rho: f64, phi: f64) -> f64 {
    n_value(rho, phi).powi(2) * (PI / alpha_m(rho) * (2.0 * R_STAR * rho * phi.cos() - rho * rho)).exp()
}

/// `I(ρ) = H(ρ, π/3)`.
pub fn i_value(rho: f64) -> f64 {
    let k = kappa(rho);
    let n = SQRT_3 / 2.0 * R_STAR * (1.0 - k * k).sqrt() - (rho - R_STAR / 2.0).abs() * k;
    n * n * (PI / alpha_m(rho) * (R_STAR * rho - rho * rho)).exp()
}

/// `(½ − ρ²/r⋆²) e^{(π/α)(√3 r⋆ρ − ρ²)}`, the bound for the two good vertices
/// of a higher shell.
pub fn f_higher(alpha: f64, rho: f64) -> f64 {
    (0.5 - rho * rho / (R_STAR * R_STAR)) * (PI / alpha * (SQRT_3 * R_STAR * rho - rho * rho)).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChainRecord {
    pub rho: f64,
    pub phi: f64,
    pub kappa: f64,
    pub alpha_m: f64,
    pub delta: f64,
    pub n: f64,
    pub h: f64,
    pub i: f64,
}

pub fn worstcase_chain_eval(rho: f64, phi: f64) -> Result<ChainRecord> {
    check_positive("rho", rho)?;
    Ok(ChainRecord {
        rho,
        phi,
        kappa: kappa(rho),
        alpha_m: alpha_m(rho),
        delta: delta(rho),
        n: n_value(rho, phi),
        h: h_value(rho, phi),
        i: i_value(rho),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FirstShellCase {
    /// `u = 0`.
    Origin,
    /// `|u·v| ≥ b(α)`: the origin alone wins.
    LargeProjection,
    /// `(π/α)|u| ≤ μ⋆`: third-order Taylor expansion.
    SmallDisplacement,
    /// `(π/α)|u| > μ⋆`: the good vertex wins.
    GoodVertex,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CaseAudit {
    pub case: FirstShellCase,
    /// `(Ψ*(u) − Ψ*(0)) / (|u|² e^{−πr⋆²/α})`.
    pub normalized_gap: f64,
    pub certified: bool,
}

/// Normalized gap of the contribution of the origin and the first shell.
pub fn first_shell_gap(alpha: f64, v: Vec2, u: Vec2) -> f64 {
    let beta = PI / alpha;
    let r2 = R_STAR * R_STAR;
    let u2 = u.norm_sq();
    let uv = u.dot(v);
    let mut acc = NeumaierSum::new();
    acc.add(scaled_exp(uv * uv, beta * (r2 - u2)));
    for s in Hexagon::first_shell().vertices() {
        let sv = s.dot(v);
        acc.add((sv + uv).powi(2) * (-beta * (2.0 * s.dot(u) + u2)).exp_m1());
        acc.add(uv * (2.0 * sv + uv));
    }
    acc.value() / u2
}

pub fn first_shell_case_audit(u: Vec2, alpha: f64, v: Vec2) -> Result<CaseAudit> {
    check_positive("alpha", alpha)?;
    if alpha > ALPHA_BAR {
        return Err(Error::InvalidArgument(format!("the case analysis needs α ≤ {ALPHA_BAR}, got {alpha}")));
    }
    check_unit(v)?;
    if u.norm_sq() == 0.0 {
        return Ok(CaseAudit { case: FirstShellCase::Origin, normalized_gap: 0.0, certified: true });
    }
    let rho = u.norm();
    let case = if u.dot(v).abs() >= b_threshold(alpha, rho) {
        FirstShellCase::LargeProjection
    } else if PI / alpha * rho <= MU_STAR {
        FirstShellCase::SmallDisplacement
    } else {
        FirstShellCase::GoodVertex
    };
    let gap = first_shell_gap(alpha, v, u);
    Ok(CaseAudit { case, normalized_gap: gap, certified: gap >= FIRST_SHELL_FLOOR })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShellInequality {
    /// `e^{(π/α)r²} Σ_{s∈S} |(s + u)·v|² e^{−(π/α)|s + u|²}`.
    pub lhs: f64,
    /// `e^{(π/α)r²} · 3r² e^{−(π/α)r²} = 3r²`.
    pub rhs: f64,
}

impl ShellInequality {
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs * (1.0 - 1e-12)
    }
}

/// Both sides of the shell inequality for one hexagon of radius `r ≥ √3 r⋆`,
/// multiplied by `e^{(π/α)r²}`.
pub fn higher_shell_check(shell: &Hexagon, alpha: f64, u: Vec2, v: Vec2) -> Result<ShellInequality> {
    check_positive("alpha", alpha)?;
    check_unit(v)?;
    let r = shell.radius();
    if r < SQRT_3 * R_STAR * (1.0 - 1e-12) {
        return Err(Error::InvalidArgument(format!("shell radius {r} is below √3 r⋆")));
    }
    let beta = PI / alpha;
    let lhs: NeumaierSum = shell
        .vertices()
        .iter()
        .map(|s| scaled_exp((*s + u).dot(v).powi(2), -beta * (2.0 * s.dot(u) + u.norm_sq())))
        .collect();
    Ok(ShellInequality { lhs: lhs.value(), rhs: 3.0 * r * r })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One named check with its margin (positive when it passes).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub check_name: String,
    pub status: Status,
    pub margin: f64,
    pub inputs: serde_json::Value,
}

impl CheckResult {
    pub fn new(name: &str, margin: f64, inputs: serde_json::Value) -> Self {
        let status = if margin > 0.0 && margin.is_finite() { Status::Pass } else { Status::Fail };
        CheckResult { check_name: name.to_string(), status, margin, inputs }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationCertificate {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerificationCertificate {
    pub fn new(suite: &str, checks: Vec<CheckResult>) -> Self {
        let passed = checks.iter().all(CheckResult::passed);
        VerificationCertificate { suite: suite.to_string(), passed, checks }
    }
}

/// The purely numerical inequalities of the small-α analysis, (a) to (j),
/// plus (k): the first-interval inequality of the ρ-study at the largest κ.
pub fn numeric_inequality_suite() -> Vec<CheckResult> {
    use serde_json::json;
    let c = SmallAlphaConstants::standard();
    let rs = R_STAR;
    let (ab, mus, muh, k0, rho0, rss) = (c.alpha_bar, c.mu_star, c.mu_hat, c.k0, c.rho0, c.r_star_star);
    let rho_max = rs / SQRT_3;
    let eight56 = (mus * rs * (SQRT_3 - 1.0)).exp();
    let mut out = Vec::new();

    out.push(CheckResult::new("a_alpha_bar_exceeds_sqrt3_over_pi", ab - SQRT_3 / PI, json!({"alpha_bar": ab})));

    let grid: Vec<f64> = (1..=10_000).map(|i| rho_max * i as f64 / 10_000.0).collect();
    let kv: Vec<f64> = grid.iter().map(|&r| kappa(r)).collect();
    // κ underflows to 0 near ρ = 0, so only nondecreasing is checkable there.
    let min_step = kv.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let k_max = kappa(rho_max);
    out.push(CheckResult::new(
        "b_kappa_increasing_and_bounded",
        if min_step >= 0.0 { 0.337 - k_max } else { min_step },
        json!({"grid_points": 10_000, "kappa_max": k_max, "min_increment": min_step}),
    ));

    out.push(CheckResult::new("c_rho0_below_half_r_star", rs / 2.0 - rho0, json!({"rho0": rho0, "half_r_star": rs / 2.0})));

    out.push(CheckResult::new(
        "d_mu_star_discriminant_conditions",
        (mus - 1.0 / rs).min(mus - (PI / ab).sqrt()),
        json!({"mu_star": mus, "inv_r_star": 1.0 / rs, "sqrt_pi_over_alpha_bar": (PI / ab).sqrt()}),
    ));

    let e_val = 3.0 * rs * rs + 1.5 * rs.powi(4) * mus * mus
        - B_SLACK * rs * rs * (mus * mus / k0 - k0 * rs * rs).exp() * 3.0 * (2.0 + 2.0 * rs * rs * mus * mus + rs.powi(4) * mus.powi(4))
        - 3.0 * rs * rs * (mus * mus / k0).exp()
        - 0.01 * mus * mus / (k0 * k0) * (mus * mus / k0).exp();
    out.push(CheckResult::new("e_taylor_endpoint_at_k0", e_val, json!({"k0": k0, "value": e_val})));

    let k1 = kappa(9.0 * rs / 20.0);
    let f1 = (((1.0 - k1 * k1).sqrt() - SQRT_3 * k1) / (SQRT_3 * (1.0 - k1 * k1).sqrt() - k1)).powi(2) * eight56;
    let k2 = kappa(rho_max);
    let f2 = (((1.0 - k2 * k2).sqrt() - (SQRT_3 - 0.9) * k2) / (SQRT_3 * (1.0 - k2 * k2).sqrt())).powi(2) * eight56;
    out.push(CheckResult::new(
        "f_phi_endpoint_comparisons",
        (f1 - 1.0).min(f2 - 1.0),
        json!({"inner_interval": f1, "outer_interval": f2, "exp_factor": eight56}),
    ));

    let kh = kappa(rs / 2.0);
    let g_val = 1.0 - 1.0 / rho0 * (PI / ab * (rs / 2.0).powi(2) - 1.0) * (rs / 2.0 - rho0 + SQRT_3 * rs / 2.0 * kh / (1.0 - kh * kh).sqrt());
    out.push(CheckResult::new("g_middle_interval_monotonicity", g_val, json!({"rho0": rho0, "value": g_val})));

    let (i0, i1) = (i_value(rho0), i_value(rho_max));
    out.push(CheckResult::new(
        "h_worst_case_exceeds_first_shell",
        (i0 - i1).min(i1 - 3.0 * rs * rs),
        json!({"I_rho0": i0, "I_max": i1, "three_r_star_sq": 3.0 * rs * rs}),
    ));

    let i_a = 6.0 + 3.0 * k0 * k0 * rss.powi(4) - 6.0 * k0 * rss.powi(4) * muh * muh + 6.0 * muh * muh * rss * rss - 12.0 * k0 * rss * rss;
    let i_b = 1.0 + 0.5 * muh * muh * rss * rss - (muh * muh / k0).exp();
    out.push(CheckResult::new("i_higher_shell_small_u", i_a.min(i_b), json!({"quadratic": i_a, "exponential": i_b})));

    let j1 = f_higher(ab, rho_max);
    let j2 = f_higher(ab, muh * ab / PI);
    out.push(CheckResult::new(
        "j_higher_shell_large_u",
        (j1 - 3.0).min(j2 - 3.0),
        json!({"F_at_vertex": j1, "F_at_threshold": j2, "closed_form_vertex": (PI / ab * 4.0 / (3.0 * SQRT_3)).exp() / 6.0}),
    ));

    let k_val = 2.0 * k2 - mus * (SQRT_3 / 2.0 * rs * (1.0 - k2 * k2).sqrt() - rs * k2 / 2.0);
    out.push(CheckResult::new("k_first_interval_decreasing", -k_val, json!({"kappa": k2, "value": k_val})));
    out
}
