use serde::{Deserialize, Serialize};

use super::{
    capped_rows, eigvector_block, supercritical_scale, verify_feasible, witness_supercritical_r_from_spectrum,
    FeasibilityReport, WitnessMode, WitnessParts,
};
use crate::matrix::{dot, eig_sym, Spectrum, SymDense};
use crate::par::{self, Parallelism};
use crate::{Error, Result};

/// Which supercritical construction to search over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Supercritical,
    /// `r`-community variant with `r − 1` spike directions.
    SupercriticalR { r: usize },
}

impl WitnessKind {
    fn spikes(self) -> usize {
        match self {
            WitnessKind::Supercritical => 1,
            WitnessKind::SupercriticalR { r } => r.saturating_sub(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessGrid {
    pub eps: Vec<f64>,
    pub delta: Vec<f64>,
    /// Feasibility tolerance a winning witness must pass.
    pub tol: f64,
}

impl Default for WitnessGrid {
    fn default() -> Self {
        WitnessGrid {
            eps: (1..=10).map(|i| 0.05 * i as f64).collect(),
            delta: vec![0.01, 0.02, 0.05, 0.1, 0.15, 0.2],
            tol: 1e-8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub eps: f64,
    pub delta: f64,
    /// `<B, X>/n`; `None` when the construction is degenerate for this cell.
    pub value: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct GridResult {
    pub eps: f64,
    pub delta: f64,
    pub value: f64,
    pub witness: WitnessParts,
    pub report: FeasibilityReport,
    /// Every cell, `delta`-major in grid order.
    pub cells: Vec<GridCell>,
}

/// Maximize the witness value over an `(ε, δ)` grid.
///
/// Values are computed from one eigendecomposition: with `P = UUᵀ` grown
/// incrementally along increasing `δ` and `C = B ∘ P`, a cell costs
/// `sᵀCs + Σ_c ψ_cᵀBψ_c`. Cells are tried in decreasing value; the first
/// witness passing [`verify_feasible`] at `grid.tol` is returned.
pub fn grid_search(b: &SymDense, kind: WitnessKind, grid: &WitnessGrid, mode: Parallelism) -> Result<GridResult> {
    let spec = eig_sym(b)?;
    grid_search_from_spectrum(b, &spec, kind, grid, mode)
}

pub fn grid_search_from_spectrum(
    b: &SymDense,
    spec: &Spectrum,
    kind: WitnessKind,
    grid: &WitnessGrid,
    mode: Parallelism,
) -> Result<GridResult> {
    let n = b.n();
    let p = kind.spikes();
    if p == 0 {
        return Err(Error::invalid("the r-community witness needs r >= 2"));
    }
    if grid.eps.is_empty() || grid.delta.is_empty() {
        return Err(Error::invalid("witness grid is empty"));
    }
    if spec.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: spec.n() });
    }
    let v = eigvector_block(spec, 0, p)?;

    // Spike term and row norms of Ψ for every ε.
    let spikes: Vec<(Vec<f64>, f64)> = par::map_indexed(grid.eps.len(), mode, |e| {
        let psi = capped_rows(&v, n, p, grid.eps[e] * (n as f64).sqrt());
        let mut y = vec![0.0; n];
        let mut quad = 0.0;
        for c in 0..p {
            let col = &psi[c * n..(c + 1) * n];
            b.apply(col, &mut y);
            quad += dot(col, &y);
        }
        let norms = (0..n).map(|i| (0..p).map(|c| psi[c * n + i].powi(2)).sum()).collect();
        (norms, quad)
    });

    let mut by_delta: Vec<usize> = (0..grid.delta.len()).collect();
    by_delta.sort_by(|&a, &b| grid.delta[a].total_cmp(&grid.delta[b]));
    let mut cells = vec![
        GridCell {
            eps: 0.0,
            delta: 0.0,
            value: None
        };
        grid.eps.len() * grid.delta.len()
    ];
    let mut proj = vec![0.0; n * n];
    let mut filled = 0;
    let mut hadamard = vec![0.0; n * n];
    for &d in &by_delta {
        let delta = grid.delta[d];
        let m = (n as f64 * delta).floor() as usize;
        let valid = delta > 0.0 && delta < 1.0 && m >= 1 && p + m <= n;
        if valid {
            while filled < m {
                let u = spec.vector(p + filled);
                for (i, row) in proj.chunks_exact_mut(n).enumerate() {
                    let ui = u[i];
                    for (pj, &uj) in row.iter_mut().zip(u) {
                        *pj += ui * uj;
                    }
                }
                filled += 1;
            }
            for ((h, &pij), &bij) in hadamard.iter_mut().zip(&proj).zip(b.as_slice()) {
                *h = pij * bij;
            }
        }
        let hadamard = &hadamard;
        let proj = &proj;
        let values = par::map_indexed(grid.eps.len(), mode, |e| {
            let eps = grid.eps[e];
            if !valid || !(eps > 0.0 && eps < 1.0) {
                return None;
            }
            let (norms, quad) = &spikes[e];
            let mut s = vec![0.0; n];
            for i in 0..n {
                s[i] = supercritical_scale(norms[i], proj[i * n + i], i).ok()?;
            }
            let bulk: f64 = hadamard
                .chunks_exact(n)
                .zip(&s)
                .map(|(row, si)| si * dot(row, &s))
                .sum();
            Some((quad + bulk) / n as f64)
        });
        for (e, value) in values.into_iter().enumerate() {
            cells[d * grid.eps.len() + e] = GridCell {
                eps: grid.eps[e],
                delta,
                value,
            };
        }
    }

    let mut ranked: Vec<&GridCell> = cells.iter().filter(|c| c.value.is_some()).collect();
    ranked.sort_by(|a, b| b.value.unwrap().total_cmp(&a.value.unwrap()));
    let r = p + 1;
    for cell in ranked {
        let mut witness = witness_supercritical_r_from_spectrum(spec, r, cell.eps, cell.delta)?;
        if let WitnessKind::Supercritical = kind {
            witness.mode = WitnessMode::Supercritical;
        }
        let report = verify_feasible(&witness, grid.tol);
        if report.passed() {
            let value = super::witness_value(b, &witness)?;
            return Ok(GridResult {
                eps: cell.eps,
                delta: cell.delta,
                value,
                witness,
                report,
                cells,
            });
        }
    }
    Err(Error::NumericalFailure("no grid cell produced a feasible witness".into()))
}
