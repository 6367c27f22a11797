use crate::{CliError, CliResult};
use hexmin::energy::perturbed_energy_diff_auto;
use hexmin::perturbation::{fs_size, sm_size, MAX_SUP_NORM};
use hexmin::{PeriodicPerturbation, R_STAR};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

pub const PROBE_ALPHA_RANGE: (f64, f64) = (0.6, 5.0);
const PROBE_TOL: f64 = 1e-18;

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeConfig {
    pub alphas: Vec<f64>,
    pub periods: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Overrides the default `min(1/α, r⋆/20)`.
    pub sup_norm: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbeTrial {
    pub alpha: f64,
    pub period: usize,
    pub trial: usize,
    pub sup_norm: f64,
    pub energy_diff: f64,
    pub error_bound: f64,
    pub fs: f64,
    pub sm: f64,
    /// `energy_diff / (e^{−παr⋆²} FS(p))`, absent for constant `p`.
    pub ratio: Option<f64>,
}

impl ProbeTrial {
    pub fn certified(&self) -> bool {
        self.energy_diff - self.error_bound >= 0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    pub min_ratio: f64,
    pub records: Vec<ProbeTrial>,
}

fn check_config(cfg: &ProbeConfig) -> CliResult<()> {
    if cfg.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if cfg.alphas.is_empty() || cfg.periods.is_empty() {
        return Err(CliError::Usage("need at least one --alpha and one --n-period".into()));
    }
    let (lo, hi) = PROBE_ALPHA_RANGE;
    if let Some(&a) = cfg.alphas.iter().find(|&&a| !(lo..=hi).contains(&a)) {
        return Err(CliError::Usage(format!(
            "α = {a} is outside [{lo}, {hi}]; below {lo} the energy gap is under double precision \
             resolution, and the small-α regime is covered by `hexmin suite --suite minimality`"
        )));
    }
    if let Some(&n) = cfg.periods.iter().find(|&&n| n == 0) {
        return Err(CliError::Usage(format!("--n-period must be positive, got {n}")));
    }
    if let Some(s) = cfg.sup_norm {
        if !(s > 0.0 && s <= MAX_SUP_NORM) {
            return Err(CliError::Usage(format!("--sup-norm must lie in (0, {MAX_SUP_NORM}], got {s}")));
        }
    }
    Ok(())
}

/// Random periodic perturbations, every class uniform on the disk of the
/// sup-norm radius. Trial `i` draws from stream `i` of the seeded generator.
pub fn probe(cfg: &ProbeConfig) -> CliResult<ProbeReport> {
    check_config(cfg)?;
    let jobs: Vec<(f64, usize, usize)> = cfg
        .alphas
        .iter()
        .flat_map(|&a| cfg.periods.iter().flat_map(move |&n| (0..cfg.trials).map(move |t| (a, n, t))))
        .collect();
    let records: Vec<ProbeTrial> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, &(alpha, period, trial))| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let radius = cfg.sup_norm.unwrap_or((1.0 / alpha).min(MAX_SUP_NORM));
            let p = PeriodicPerturbation::sample_uniform(period, radius, &mut rng)?;
            let e = perturbed_energy_diff_auto(&p, alpha, PROBE_TOL)?;
            let fs = fs_size(&p);
            let ratio = (!p.is_constant() && fs > 0.0).then(|| e.value / ((-PI * alpha * R_STAR * R_STAR).exp() * fs));
            Ok(ProbeTrial {
                alpha,
                period,
                trial,
                sup_norm: p.sup_norm(),
                energy_diff: e.value,
                error_bound: e.error_bound,
                fs,
                sm: sm_size(&p),
                ratio,
            })
        })
        .collect::<hexmin::Result<_>>()?;
    let passed = records.iter().all(ProbeTrial::certified);
    let min_ratio = records.iter().filter_map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    Ok(ProbeReport { seed: cfg.seed, trials: cfg.trials, passed, min_ratio, records })
}
