//! Explicit feasible points of the elliptope for deformed GOE matrices.
//!
//! Every construction has the form
//!
//! ```text
//! X = Φ Φᵀ + S U Uᵀ S
//! ```
//!
//! with `Φ` an `n × p` matrix whose rows lie in the unit ball (`p = 0` when
//! absent), `U` an `n × m` block of orthonormal eigenvectors of `B` and `S`
//! a positive diagonal chosen so that `X_ii = 1` holds exactly. `<B, X>/n`
//! is then a certified lower bound on `SDP(B)/n`.

mod search;

pub use search::{grid_search, grid_search_from_spectrum, GridCell, GridResult, WitnessGrid, WitnessKind};

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::matrix::{dot, eig_sym, eigvals_sym, Spectrum, SymDense, MAX_DENSE_DIM};
use crate::solver::SphereFactor;
use crate::{Error, Result};

/// Rows with `‖Uᵀe_i‖` below this are rejected as degenerate.
pub const DEGENERATE_ROW_TOL: f64 = 1e-12;

/// Clamp to `[-1, 1]`.
pub fn cap_scalar(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// `x` if `‖x‖ ≤ 1`, else `x / ‖x‖`.
pub fn cap_vector(x: &[f64]) -> Vec<f64> {
    let norm = dot(x, x).sqrt();
    if norm <= 1.0 {
        x.to_vec()
    } else {
        x.iter().map(|v| v / norm).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessMode {
    Subcritical,
    Supercritical,
    SupercriticalR,
}

/// Factored witness `X = ΦΦᵀ + S U Uᵀ S`.
///
/// `phi` and `u` are stored column by column (each column has length `n`).
/// For the subcritical construction `scale = D^{-1/2}` with
/// `D_ii = ‖Uᵀe_i‖²`; for the supercritical ones
/// `scale_i = √(1 − ‖Φᵀe_i‖²) / ‖Uᵀe_i‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessParts {
    pub mode: WitnessMode,
    n: usize,
    p: usize,
    m: usize,
    phi: Vec<f64>,
    scale: Vec<f64>,
    u: Vec<f64>,
}

impl WitnessParts {
    /// Assemble parts, checking shapes only.
    pub fn from_parts(mode: WitnessMode, n: usize, phi: Vec<f64>, scale: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        if n == 0 || !phi.len().is_multiple_of(n) || !u.len().is_multiple_of(n) || scale.len() != n {
            return Err(Error::Format(format!(
                "witness blocks of lengths ({}, {}, {}) do not fit n = {n}",
                phi.len(),
                scale.len(),
                u.len()
            )));
        }
        Ok(WitnessParts {
            mode,
            n,
            p: phi.len() / n,
            m: u.len() / n,
            phi,
            scale,
            u,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of columns of `Φ`.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of columns of `U`.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn phi_column(&self, c: usize) -> &[f64] {
        &self.phi[c * self.n..(c + 1) * self.n]
    }

    pub fn u_column(&self, c: usize) -> &[f64] {
        &self.u[c * self.n..(c + 1) * self.n]
    }

    pub fn scale(&self) -> &[f64] {
        &self.scale
    }

    fn phi_row_norm2(&self, i: usize) -> f64 {
        (0..self.p).map(|c| self.phi[c * self.n + i].powi(2)).sum()
    }

    fn u_row_norm2(&self, i: usize) -> f64 {
        (0..self.m).map(|c| self.u[c * self.n + i].powi(2)).sum()
    }

    /// `X_ii`, from the parts.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.phi_row_norm2(i) + self.scale[i].powi(2) * self.u_row_norm2(i))
            .collect()
    }

    /// The `n × (p + m)` factor `[Φ, SU]`; a valid warm start for the solver.
    pub fn to_factor(&self) -> Result<SphereFactor> {
        let k = self.p + self.m;
        let mut data = Vec::with_capacity(self.n * k);
        for i in 0..self.n {
            data.extend((0..self.p).map(|c| self.phi[c * self.n + i]));
            data.extend((0..self.m).map(|c| self.scale[i] * self.u[c * self.n + i]));
        }
        SphereFactor::from_rows_normalized(self.n, k, data)
    }

    /// Dense `X`.
    pub fn materialize(&self) -> Result<SymDense> {
        let n = self.n;
        let cols: Vec<Vec<f64>> = (0..self.m)
            .map(|c| self.u_column(c).iter().zip(&self.scale).map(|(u, s)| u * s).collect())
            .collect();
        SymDense::from_fn(n, |i, j| {
            let a: f64 = (0..self.p).map(|c| self.phi[c * n + i] * self.phi[c * n + j]).sum();
            let b: f64 = cols.iter().map(|col| col[i] * col[j]).sum();
            a + b
        })
    }

    /// Binary layout: one JSON line `{mode, n, p, m}` then `Φ`, `S`, `U` as
    /// little-endian `f64` blocks.
    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer(
            &mut w,
            &WitnessHeader {
                mode: self.mode,
                n: self.n,
                p: self.p,
                m: self.m,
            },
        )?;
        w.write_all(b"\n")?;
        for block in [&self.phi, &self.scale, &self.u] {
            let bytes: Vec<u8> = block.iter().flat_map(|v| v.to_le_bytes()).collect();
            w.write_all(&bytes)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read<R: BufRead>(mut r: R) -> Result<Self> {
        let mut line = Vec::new();
        r.read_until(b'\n', &mut line)?;
        let h: WitnessHeader = serde_json::from_slice(&line)?;
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        let expected = h.n * (h.p + 1 + h.m) * 8;
        if bytes.len() != expected {
            return Err(Error::Format(format!(
                "witness body has {} bytes, expected {expected}",
                bytes.len()
            )));
        }
        let mut values = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")));
        let phi = values.by_ref().take(h.n * h.p).collect();
        let scale = values.by_ref().take(h.n).collect();
        let u = values.collect();
        WitnessParts::from_parts(h.mode, h.n, phi, scale, u)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.write(std::io::BufWriter::new(std::fs::File::create(path)?))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::read(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

#[derive(Serialize, Deserialize)]
struct WitnessHeader {
    mode: WitnessMode,
    n: usize,
    p: usize,
    m: usize,
}

fn block_size(n: usize, delta: f64) -> Result<usize> {
    let m = (n as f64 * delta).floor() as usize;
    if m == 0 {
        return Err(Error::invalid(format!("n·δ = {} gives an empty eigenvector block", n as f64 * delta)));
    }
    Ok(m)
}

fn check_open_unit(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::invalid(format!("{name} must lie in (0, 1), got {x}")));
    }
    Ok(())
}

fn eigvector_block(spec: &Spectrum, start: usize, count: usize) -> Result<Vec<f64>> {
    let n = spec.n();
    if start + count > n {
        return Err(Error::invalid(format!(
            "eigenvectors {}..{} requested from a {n}-dimensional spectrum",
            start + 1,
            start + count
        )));
    }
    let mut u = Vec::with_capacity(n * count);
    for c in start..start + count {
        u.extend_from_slice(spec.vector(c));
    }
    Ok(u)
}

/// `X = D^{-1/2} U Uᵀ D^{-1/2}` with `U` the top `⌊nδ⌋` eigenvectors of `B`.
pub fn witness_subcritical(b: &SymDense, delta: f64) -> Result<WitnessParts> {
    witness_subcritical_from_spectrum(&eig_sym(b)?, delta)
}

pub fn witness_subcritical_from_spectrum(spec: &Spectrum, delta: f64) -> Result<WitnessParts> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid(format!("delta must lie in (0, 1], got {delta}")));
    }
    let n = spec.n();
    let m = block_size(n, delta)?;
    let u = eigvector_block(spec, 0, m)?;
    let mut w = WitnessParts::from_parts(WitnessMode::Subcritical, n, Vec::new(), vec![0.0; n], u)?;
    for i in 0..n {
        let d = w.u_row_norm2(i);
        if d < DEGENERATE_ROW_TOL {
            return Err(Error::DegenerateProjection { row: i, norm: d });
        }
        w.scale[i] = 1.0 / d.sqrt();
    }
    Ok(w)
}

/// `X = φφᵀ + D U Uᵀ D` with `φ_i = cap(ε√n u_{1,i})` and `U` the
/// eigenvectors `2..⌊nδ⌋+1` of `B`.
pub fn witness_supercritical(b: &SymDense, eps: f64, delta: f64) -> Result<WitnessParts> {
    witness_supercritical_r_from_spectrum(&eig_sym(b)?, 2, eps, delta).map(|mut w| {
        w.mode = WitnessMode::Supercritical;
        w
    })
}

pub fn witness_supercritical_from_spectrum(spec: &Spectrum, eps: f64, delta: f64) -> Result<WitnessParts> {
    witness_supercritical_r_from_spectrum(spec, 2, eps, delta).map(|mut w| {
        w.mode = WitnessMode::Supercritical;
        w
    })
}

/// `X = ΨΨᵀ + D U Uᵀ D` with `Ψ` the row-capped `ε√n V`, `V` the top
/// `r − 1` eigenvectors and `U` the eigenvectors `r..r+⌊nδ⌋−1` of `B`.
pub fn witness_supercritical_r(b: &SymDense, r: usize, eps: f64, delta: f64) -> Result<WitnessParts> {
    witness_supercritical_r_from_spectrum(&eig_sym(b)?, r, eps, delta)
}

pub fn witness_supercritical_r_from_spectrum(spec: &Spectrum, r: usize, eps: f64, delta: f64) -> Result<WitnessParts> {
    if r < 2 {
        return Err(Error::invalid(format!("r must be >= 2, got {r}")));
    }
    check_open_unit("eps", eps)?;
    check_open_unit("delta", delta)?;
    let n = spec.n();
    let p = r - 1;
    let m = block_size(n, delta)?;
    let v = eigvector_block(spec, 0, p)?;
    let u = eigvector_block(spec, p, m)?;
    let phi = capped_rows(&v, n, p, eps * (n as f64).sqrt());
    let mut w = WitnessParts::from_parts(WitnessMode::SupercriticalR, n, phi, vec![0.0; n], u)?;
    for i in 0..n {
        w.scale[i] = supercritical_scale(w.phi_row_norm2(i), w.u_row_norm2(i), i)?;
    }
    Ok(w)
}

/// Column-major `n × p` block, each row scaled by `factor` and capped.
pub(crate) fn capped_rows(v: &[f64], n: usize, p: usize, factor: f64) -> Vec<f64> {
    let mut out = vec![0.0; n * p];
    let mut row = vec![0.0; p];
    for i in 0..n {
        for c in 0..p {
            row[c] = factor * v[c * n + i];
        }
        for (c, x) in cap_vector(&row).into_iter().enumerate() {
            out[c * n + i] = x;
        }
    }
    out
}

/// `√(1 − ‖ψ_i‖²) / ‖Uᵀe_i‖`.
pub(crate) fn supercritical_scale(phi_norm2: f64, u_norm2: f64, row: usize) -> Result<f64> {
    let u_norm = u_norm2.sqrt();
    if u_norm < DEGENERATE_ROW_TOL {
        return Err(Error::DegenerateProjection { row, norm: u_norm });
    }
    Ok((1.0 - phi_norm2).max(0.0).sqrt() / u_norm)
}

/// `<B, X> / n` from the parts, `O(n²(p + m))`.
pub fn witness_value(b: &SymDense, w: &WitnessParts) -> Result<f64> {
    let n = w.n;
    if b.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.n() });
    }
    let mut y = vec![0.0; n];
    let mut total = 0.0;
    for c in 0..w.p {
        let x = w.phi_column(c);
        b.apply(x, &mut y);
        total += dot(x, &y);
    }
    let mut x = vec![0.0; n];
    for c in 0..w.m {
        for ((xi, ui), si) in x.iter_mut().zip(w.u_column(c)).zip(&w.scale) {
            *xi = ui * si;
        }
        b.apply(&x, &mut y);
        total += dot(&x, &y);
    }
    Ok(total / n as f64)
}

/// Outcome of [`verify_feasible`]; failures are reported, not raised.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub tol: f64,
    /// `max_i |X_ii − 1|`.
    pub max_diag_error: f64,
    /// `max |UᵀU − I|`.
    pub orthonormality_error: f64,
    /// Smallest eigenvalue of the dense `X`, when `n` fits in memory.
    pub min_eigenvalue: Option<f64>,
    pub failures: Vec<String>,
}

impl FeasibilityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check `diag(X) = 1`, `X ⪰ 0` and `UᵀU = I`, each within `tol`.
pub fn verify_feasible(w: &WitnessParts, tol: f64) -> FeasibilityReport {
    let mut failures = Vec::new();
    let max_diag_error = w.diagonal().iter().map(|d| (d - 1.0).abs()).fold(0.0, f64::max);
    if !(max_diag_error <= tol) {
        failures.push(format!("diagonal deviates from 1 by {max_diag_error:e}"));
    }
    let mut orthonormality_error: f64 = 0.0;
    for a in 0..w.m {
        for b in a..w.m {
            let g = dot(w.u_column(a), w.u_column(b));
            let target = if a == b { 1.0 } else { 0.0 };
            orthonormality_error = orthonormality_error.max((g - target).abs());
        }
    }
    if !(orthonormality_error <= tol) {
        failures.push(format!("U columns deviate from orthonormal by {orthonormality_error:e}"));
    }
    let min_eigenvalue = if w.n <= MAX_DENSE_DIM {
        match w.materialize().and_then(|x| eigvals_sym(&x)) {
            Ok(values) => values.last().copied(),
            Err(e) => {
                failures.push(format!("eigenvalue check failed: {e}"));
                None
            }
        }
    } else {
        None
    };
    if let Some(min) = min_eigenvalue {
        if !(min >= -tol) {
            failures.push(format!("minimum eigenvalue {min:e} below -{tol:e}"));
        }
    }
    FeasibilityReport {
        tol,
        max_diag_error,
        orthonormality_error,
        min_eigenvalue,
        failures,
    }
}
