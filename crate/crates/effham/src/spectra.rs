//! Exact diagonalization, excitation-block decomposition and spectral
//! comparison of full versus effective Hamiltonians.
//!
//! The rotating-wave interaction conserves the excitation number
//! `N = a†a + S_z + S`, so any N-conserving operator splits into finite
//! blocks labeled by the eigenvalue `q = n + k`. Blocks with `q <= n_max`
//! are unaffected by the Fock truncation, which makes them the honest
//! ground for eigenvalue comparisons.

use std::time::Instant;

use nalgebra::DMatrix;

use crate::elimination::split_dicke;
use crate::error::{Error, Result};
use crate::hilbert::{DickeParams, Operator, SpaceSpec};
use crate::variants::{effective_closed_form, VariantId};

/// Default relative tolerance for the excitation-conservation check in
/// [`block_decompose`].
pub const DEFAULT_BLOCK_TOL: f64 = 1e-10;

/// One excitation block: the basis indices with `n + k = q` and the
/// submatrix of the operator restricted to them.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub q: u32,
    pub indices: Vec<usize>,
    pub submatrix: DMatrix<f64>,
}

/// Excitation-block decomposition of an N-conserving operator.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
}

impl BlockDecomposition {
    pub fn block(&self, q: u32) -> Option<&Block> {
        self.blocks.iter().find(|b| b.q == q)
    }
}

/// Per-block eigenvalue comparison of two operators.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockComparison {
    pub q: u32,
    pub eigs_a: Vec<f64>,
    pub eigs_b: Vec<f64>,
    pub max_abs_err: f64,
}

/// Eigenvalue comparison over all blocks `q <= q_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub per_block: Vec<BlockComparison>,
    pub global_max_abs_err: f64,
    pub global_rmse: f64,
}

/// One point of a detuning sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub delta: f64,
    pub global_max_abs_err: f64,
    pub global_rmse: f64,
    pub runtime_seconds: f64,
}

/// All eigenvalues of a symmetric operator, ascending.
pub fn eigenvalues_sym(h: &Operator) -> Result<Vec<f64>> {
    let asym = h.asymmetry();
    if asym > 1e-12 * h.max_abs().max(1.0) {
        return Err(Error::NotSymmetric { max_asym: asym });
    }
    Ok(symmetric_eigenvalues(h.data()))
}

/// Ascending eigenvalues of a raw symmetric matrix.
pub fn symmetric_eigenvalues(h: &DMatrix<f64>) -> Vec<f64> {
    let sym = (h + h.transpose()) * 0.5;
    let mut eigs: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(|a, b| a.total_cmp(b));
    eigs
}

/// Decompose an N-conserving operator into excitation blocks.
///
/// Fails with [`Error::NotBlockDiagonal`] when `||[H, N]||_max` exceeds
/// `tol * ||H||_max`, i.e. when the operator couples different blocks.
pub fn block_decompose(
    h: &Operator,
    space: SpaceSpec,
    tol: f64,
) -> Result<BlockDecomposition> {
    if h.space() != space {
        return Err(Error::DimensionMismatch { lhs: h.dim(), rhs: space.dim() });
    }
    let scale = h.max_abs();
    // [H, N]_mn = H_mn (q_n - q_m) for diagonal N, so cross-block entries
    // are exactly the commutator entries up to the integer gap factor.
    let mut max_coupling = 0.0f64;
    let dim = space.dim();
    for m in 0..dim {
        let qm = space.excitation(m);
        for n in 0..dim {
            let qn = space.excitation(n);
            if qm != qn {
                let c = h.data()[(m, n)].abs() * (qn as f64 - qm as f64).abs();
                max_coupling = max_coupling.max(c);
            }
        }
    }
    if max_coupling > tol * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotBlockDiagonal { max_coupling });
    }

    let mut blocks = Vec::new();
    for q in 0..=space.max_excitation() {
        let indices: Vec<usize> =
            (0..dim).filter(|&i| space.excitation(i) == q).collect();
        let size = indices.len();
        let mut submatrix = DMatrix::zeros(size, size);
        for (bi, &i) in indices.iter().enumerate() {
            for (bj, &j) in indices.iter().enumerate() {
                submatrix[(bi, bj)] = h.data()[(i, j)];
            }
        }
        blocks.push(Block { q, indices, submatrix });
    }
    Ok(BlockDecomposition { blocks })
}

/// Compare the spectra of two N-conserving operators block by block for
/// `q = 0..=q_max`.
pub fn compare_spectra(
    a: &Operator,
    b: &Operator,
    space: SpaceSpec,
    q_max: u32,
) -> Result<SpectrumReport> {
    if q_max > space.n_max() {
        return Err(Error::DomainError(format!(
            "q_max = {} exceeds the truncation-exact range n_max = {}",
            q_max,
            space.n_max()
        )));
    }
    let dec_a = block_decompose(a, space, DEFAULT_BLOCK_TOL)?;
    let dec_b = block_decompose(b, space, DEFAULT_BLOCK_TOL)?;

    let mut per_block = Vec::new();
    let mut global_max = 0.0f64;
    let mut sq_sum = 0.0f64;
    let mut count = 0usize;
    for q in 0..=q_max {
        let block_a = dec_a.block(q).expect("q <= n_max <= max excitation");
        let block_b = dec_b.block(q).expect("q <= n_max <= max excitation");
        let eigs_a = symmetric_eigenvalues(&block_a.submatrix);
        let eigs_b = symmetric_eigenvalues(&block_b.submatrix);
        debug_assert_eq!(eigs_a.len(), eigs_b.len());
        let mut max_err = 0.0f64;
        for (x, y) in eigs_a.iter().zip(&eigs_b) {
            let err = (x - y).abs();
            max_err = max_err.max(err);
            sq_sum += err * err;
            count += 1;
        }
        global_max = global_max.max(max_err);
        per_block.push(BlockComparison { q, eigs_a, eigs_b, max_abs_err: max_err });
    }
    Ok(SpectrumReport {
        per_block,
        global_max_abs_err: global_max,
        global_rmse: (sq_sum / count.max(1) as f64).sqrt(),
    })
}

/// Sweep the detuning at fixed `omega0` and `g`: for each `delta` set
/// `omega1 = omega0 + delta`, compare the full Dicke spectrum against the
/// closed-form effective Hamiltonian, and fit the log-log error slope.
///
/// The slope is absent when any recorded error vanishes (e.g. `g = 0`).
pub fn detuning_sweep(
    base: DickeParams,
    deltas: &[f64],
    space: SpaceSpec,
    q_max: u32,
) -> Result<(Vec<SweepRecord>, Option<f64>)> {
    if deltas.windows(2).any(|w| w[0] >= w[1]) || deltas.iter().any(|&d| d <= 0.0) {
        return Err(Error::DomainError(
            "sweep deltas must be positive and strictly increasing".into(),
        ));
    }
    let mut records = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let start = Instant::now();
        let params = DickeParams::new(base.omega0, base.omega0 + delta, base.g);
        let (h0, hi) = split_dicke(params, space);
        let full = h0.add(&hi)?;
        let effective = effective_closed_form(params, space, VariantId::Froehlich17)?;
        let report = compare_spectra(&full, &effective, space, q_max)?;
        records.push(SweepRecord {
            delta,
            global_max_abs_err: report.global_max_abs_err,
            global_rmse: report.global_rmse,
            runtime_seconds: start.elapsed().as_secs_f64(),
        });
    }
    let slope = fit_loglog_slope(&records).ok();
    Ok((records, slope))
}

/// Ordinary least-squares slope of `log(err)` against `log(delta)`.
pub fn fit_loglog_slope(records: &[SweepRecord]) -> Result<f64> {
    if records.len() < 2 {
        return Err(Error::DegenerateFit("need at least 2 sweep points".into()));
    }
    if records.iter().any(|r| r.global_max_abs_err <= 0.0) {
        return Err(Error::DegenerateFit("zero error in sweep point".into()));
    }
    let points: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (r.delta.ln(), r.global_max_abs_err.ln()))
        .collect();
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all deltas equal".into()));
    }
    Ok(sxy / sxx)
}
