//! Wegner flow: a continuous sequence of infinitesimal orthogonal
//! transformations that drives a symmetric matrix towards diagonal form.
//!
//! The flow solves `dH/dl = [eta(H), H]` with the canonical generator
//! `eta = [diag(H), H]`, under which the off-diagonal Frobenius norm is
//! non-increasing. It serves as an independent diagonalization oracle:
//! the converged diagonal is the spectrum of the input, obtained without
//! any eigensolver.
//!
//! The integrator is classical fixed-order RK4 with step halving whenever
//! the off-diagonal norm increases or a conserved trace drifts; the flow
//! parameter `l` carries dimension 1/energy², so the natural initial step
//! is `~ 0.1 / ||H||_F²` (see [`default_dl0`]).

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hilbert::Operator;

/// Default stopping tolerance on the relative off-diagonal norm.
pub const DEFAULT_TOL_OFFDIAG: f64 = 1e-10;

/// Per-step relative budget for the conserved-trace drift; doubles as the
/// local-error control of the integrator.
const STEP_DRIFT_TOL: f64 = 1e-14;

/// Hard cap on accepted steps; together with [`STEP_DRIFT_TOL`] it bounds
/// the accumulated conservation drift to 5e-10 relative.
const MAX_STEPS: usize = 50_000;

/// Snapshot of the flowed matrix at flow parameter `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub l: f64,
    pub h: DMatrix<f64>,
    pub offdiag_norm: f64,
}

/// Outcome of [`integrate_flow`].
#[derive(Debug, Clone, PartialEq)]
pub struct FlowResult {
    pub final_state: FlowState,
    pub converged: bool,
    pub steps: usize,
    /// `(l, offdiag_norm)` at every accepted step, starting from `l = 0`.
    pub history: Vec<(f64, f64)>,
}

impl FlowResult {
    /// Diagonal of the final flowed matrix (unsorted).
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.final_state.h.nrows())
            .map(|i| self.final_state.h[(i, i)])
            .collect()
    }
}

/// Frobenius norm of the off-diagonal part.
pub fn off_diag_norm(h: &DMatrix<f64>) -> f64 {
    let n = h.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += h[(i, j)] * h[(i, j)];
            }
        }
    }
    acc.sqrt()
}

/// Canonical Wegner generator `[diag(H), H]`; entrywise
/// `eta_ij = (H_ii - H_jj) H_ij`.
pub fn wegner_generator(h: &DMatrix<f64>) -> DMatrix<f64> {
    let n = h.nrows();
    let mut eta = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                eta[(i, j)] = (h[(i, i)] - h[(j, j)]) * h[(i, j)];
            }
        }
    }
    eta
}

/// Operator front end for [`wegner_generator`].
pub fn wegner_generator_op(h: &Operator) -> Result<Operator> {
    check_symmetric(h.data())?;
    Operator::new(
        h.space(),
        wegner_generator(h.data()),
        crate::hilbert::Symmetry::Antisymmetric,
    )
}

/// Initial step size matched to the 1/energy² dimension of `l`.
pub fn default_dl0(h: &DMatrix<f64>) -> f64 {
    let norm = h.norm();
    if norm > 0.0 {
        0.1 / (norm * norm)
    } else {
        0.1
    }
}

fn check_symmetric(h: &DMatrix<f64>) -> Result<()> {
    let scale = h.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let n = h.nrows();
    let mut asym = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            asym = asym.max((h[(i, j)] - h[(j, i)]).abs());
        }
    }
    if asym > 1e-12 * scale.max(1.0) {
        return Err(Error::NotSymmetric { max_asym: asym });
    }
    Ok(())
}

fn flow_rhs(h: &DMatrix<f64>) -> DMatrix<f64> {
    let eta = wegner_generator(h);
    &eta * h - h * &eta
}

fn rk4_step(h: &DMatrix<f64>, dl: f64) -> DMatrix<f64> {
    let k1 = flow_rhs(h);
    let k2 = flow_rhs(&(h + &k1 * (dl / 2.0)));
    let k3 = flow_rhs(&(h + &k2 * (dl / 2.0)));
    let k4 = flow_rhs(&(h + &k3 * dl));
    let next = h + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dl / 6.0);
    // The exact flow preserves symmetry; remove the rounding drift.
    (&next + next.transpose()) * 0.5
}

/// Integrate the Wegner flow of a symmetric matrix.
///
/// Stops when the off-diagonal norm falls below `tol_offdiag * ||H||_F`
/// (converged) or the flow parameter reaches `l_max` (not converged).
/// A vanishing generator with off-diagonal weight left over means the flow
/// is stalled on a degeneracy and is reported as [`Error::StepUnderflow`].
pub fn integrate_flow(
    h: &DMatrix<f64>,
    dl0: f64,
    tol_offdiag: f64,
    l_max: f64,
) -> Result<FlowResult> {
    check_symmetric(h)?;
    if !(dl0 > 0.0 && tol_offdiag > 0.0 && l_max > 0.0) {
        return Err(Error::DomainError(
            "flow parameters dl0, tol_offdiag, l_max must be positive".into(),
        ));
    }

    let norm0 = h.norm();
    let trace0 = h.trace();
    let trace_sq0 = norm0 * norm0; // tr(H²) = ||H||_F² for symmetric H
    let trace_scale = trace0.abs().max(norm0).max(f64::MIN_POSITIVE);
    let target = tol_offdiag * norm0;

    let mut cur = h.clone();
    let mut offdiag = off_diag_norm(&cur);
    let mut l = 0.0f64;
    let mut dl = dl0;
    let mut steps = 0usize;
    let mut accepts_in_a_row = 0u32;
    let mut history = vec![(l, offdiag)];

    loop {
        if offdiag <= target {
            return Ok(FlowResult {
                final_state: FlowState { l, h: cur, offdiag_norm: offdiag },
                converged: true,
                steps,
                history,
            });
        }
        if l >= l_max || steps >= MAX_STEPS {
            return Ok(FlowResult {
                final_state: FlowState { l, h: cur, offdiag_norm: offdiag },
                converged: false,
                steps,
                history,
            });
        }

        let eta_norm = wegner_generator(&cur).norm();
        if eta_norm <= 1e-14 * norm0.max(1.0) {
            // Off-diagonal weight on degenerate diagonal entries: the flow
            // genuinely stalls here.
            return Err(Error::StepUnderflow { l });
        }

        let step = dl.min(l_max - l);
        let candidate = rk4_step(&cur, step);
        let new_offdiag = off_diag_norm(&candidate);
        // The exact flow conserves tr(H) and tr(H²), so their per-step
        // change is pure integrator error; the per-step budget keeps the
        // accumulated drift below ~1e-9 relative over up to MAX_STEPS
        // steps while letting the step size recover after rejections.
        let trace_ok =
            (candidate.trace() - cur.trace()).abs() <= STEP_DRIFT_TOL * trace_scale;
        let trace_sq_ok = (candidate.norm().powi(2) - cur.norm().powi(2)).abs()
            <= STEP_DRIFT_TOL * trace_sq0.max(f64::MIN_POSITIVE);

        if new_offdiag <= offdiag * (1.0 + 1e-12) && trace_ok && trace_sq_ok {
            cur = candidate;
            offdiag = new_offdiag;
            l += step;
            steps += 1;
            history.push((l, offdiag));
            accepts_in_a_row += 1;
            if accepts_in_a_row >= 10 && dl < 1000.0 * dl0 {
                dl *= 2.0;
                accepts_in_a_row = 0;
            }
        } else {
            dl *= 0.5;
            accepts_in_a_row = 0;
            if dl < 1e-15 * dl0 {
                return Err(Error::StepUnderflow { l });
            }
        }
    }
}

/// Convenience front end with the module defaults:
/// `dl0 = 0.1/||H||_F²`, `tol_offdiag = 1e-10`, `l_max = 1e6 * dl0`.
pub fn integrate_flow_default(h: &DMatrix<f64>) -> Result<FlowResult> {
    let dl0 = default_dl0(h);
    integrate_flow(h, dl0, DEFAULT_TOL_OFFDIAG, 1e6 * dl0)
}
