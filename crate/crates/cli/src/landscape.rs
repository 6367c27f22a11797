use crate::{CliError, CliResult};
use hexmin::lattice::hexagon_grid;
use hexmin::minimality::{psi_eval, psi_gap, PsiSide};
use hexmin::{Vec2, R_STAR};
use serde::Serialize;
use std::f64::consts::PI;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LandscapeRow {
    pub ux: f64,
    pub uy: f64,
    pub psi: f64,
    /// `Ψ(u) − Ψ(0)`.
    pub gap: f64,
}

/// `Ψ_{α,v}` on the `n × n` torus grid reduced into the Voronoi cell, origin first.
pub fn landscape(alpha: f64, v_angle: f64, grid_n: usize) -> CliResult<Vec<LandscapeRow>> {
    if grid_n < 8 {
        return Err(CliError::Usage(format!("--grid must be at least 8, got {grid_n}")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(CliError::Usage(format!("--alpha must be positive, got {alpha}")));
    }
    let v = Vec2::polar(1.0, v_angle);
    let psi0 = psi_eval(alpha, v, Vec2::ZERO, PsiSide::Auto)?.value;
    let mut rows = vec![LandscapeRow { ux: 0.0, uy: 0.0, psi: psi0, gap: 0.0 }];
    let scale = (-PI * R_STAR * R_STAR / alpha).exp();
    for u in hexagon_grid(grid_n) {
        let psi = psi_eval(alpha, v, u, PsiSide::Auto)?.value;
        let gap = psi_gap(alpha, v, u, PsiSide::Auto)?.normalized * u.norm_sq() * scale;
        rows.push(LandscapeRow { ux: u.x, uy: u.y, psi, gap });
    }
    Ok(rows)
}

pub fn write_csv(rows: &[LandscapeRow], path: &Path) -> CliResult<()> {
    let wrap = |source| CliError::Csv { path: path.to_path_buf(), source };
    let mut w = csv::Writer::from_path(path).map_err(wrap)?;
    for r in rows {
        w.serialize(r).map_err(wrap)?;
    }
    w.flush().map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}
