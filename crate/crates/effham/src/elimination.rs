//! One-step adiabatic elimination of the rotating-wave interaction.
//!
//! The pipeline works with the real antisymmetric matrix `K` instead of a
//! Hermitian exponent `Omega`: writing the unitary as `U = e^{K}` with
//! `K = -i Omega`, the first-order cancellation condition
//! `H_I + i[H_0, Omega] = 0` becomes the real linear equation
//!
//! ```text
//! [H_0, K] = H_I
//! ```
//!
//! which, for diagonal `H_0` with energies `E_m`, is solved entrywise by
//! `K_mn = HI_mn / (E_m - E_n)`. All Dicke matrix elements are real, so the
//! whole transformation runs in real arithmetic and `e^{K}` is orthogonal.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hilbert::{
    annihilation_op, commutator, spin_ops, DickeParams, Operator, SpaceSpec, Symmetry,
};

/// Default relative gap tolerance separating genuine resonance from
/// rounding-level interaction elements.
pub const DEFAULT_TOL_GAP: f64 = 1e-9;

/// Default truncation tolerance of the matrix-exponential Taylor series.
pub const DEFAULT_TOL_EXP: f64 = 1e-15;

/// Real antisymmetric generator `K = -i Omega` of the elimination unitary
/// `e^{K}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    op: Operator,
}

impl Generator {
    /// Wrap an antisymmetric operator as a generator.
    pub fn new(op: Operator) -> Result<Self> {
        let scale = op.max_abs();
        let defect = op.antisymmetry_defect();
        if defect > 1e-13 * scale.max(1.0) {
            return Err(Error::NotSymmetric { max_asym: defect });
        }
        Ok(Self { op: op.symmetrized(Symmetry::Antisymmetric) })
    }

    pub fn zero(space: SpaceSpec) -> Self {
        Self {
            op: Operator::zeros(space).symmetrized(Symmetry::Antisymmetric),
        }
    }

    pub fn space(&self) -> SpaceSpec {
        self.op.space()
    }

    pub fn operator(&self) -> &Operator {
        &self.op
    }

    pub fn data(&self) -> &DMatrix<f64> {
        self.op.data()
    }
}

/// Diagnostics from [`solve_generator`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EliminationReport {
    /// Max-abs residual of `[H_0, K] - H_I` over resolved entries.
    pub residual_max: f64,
    /// Entry pairs zeroed under the gauge (both the gap and the
    /// interaction element below tolerance).
    pub zeroed_entries: usize,
    /// Smallest |E_m - E_n| that entered a division; infinite if no entry
    /// was resolved.
    pub min_gap_used: f64,
}

/// Split the Dicke Hamiltonian into its diagonal free part and the
/// rotating-wave interaction `g (a S_+ + a† S_-)`.
pub fn split_dicke(params: DickeParams, space: SpaceSpec) -> (Operator, Operator) {
    let s = space.spin();
    let h0 = Operator::from_diagonal(space, |n, k| {
        params.omega0 * n as f64 + params.omega1 * (k as f64 - s)
    });

    // Entries written pairwise so HI is symmetric bit-exactly.
    let dim = space.dim();
    let mut hi = DMatrix::zeros(dim, dim);
    for n in 1..=space.n_max() {
        for k in 0..space.two_s() {
            let amp = params.g * (n as f64).sqrt() * space.raise_element(k);
            let row = space.index(n - 1, k + 1);
            let col = space.index(n, k);
            hi[(row, col)] = amp;
            hi[(col, row)] = amp;
        }
    }
    let hi = Operator::new(space, hi, Symmetry::Symmetric).expect("square by construction");
    (h0, hi)
}

/// Solve `[H_0, K] = H_I` entrywise for diagonal `H_0`.
///
/// Entries with `|HI_mn|` below `tol_gap * max|H_0|` are set to zero (the
/// gauge choice that discards the undetermined kernel part of the
/// generator); a nonzero interaction element on a vanishing gap is a
/// genuine resonance and is reported as an error.
pub fn solve_generator(
    h0: &Operator,
    hi: &Operator,
    tol_gap: f64,
) -> Result<(Generator, EliminationReport)> {
    if h0.space() != hi.space() {
        return Err(Error::DimensionMismatch { lhs: h0.dim(), rhs: hi.dim() });
    }
    let dim = h0.dim();
    let scale = h0.max_abs();

    let mut max_offdiag = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                max_offdiag = max_offdiag.max(h0.data()[(i, j)].abs());
            }
        }
    }
    if max_offdiag > 1e-13 * scale {
        return Err(Error::NotDiagonal { max_offdiag });
    }
    let asym = hi.asymmetry();
    if asym > 1e-13 * hi.max_abs().max(1.0) {
        return Err(Error::NotSymmetric { max_asym: asym });
    }

    let tol = tol_gap * scale;
    let mut k = DMatrix::zeros(dim, dim);
    let mut zeroed = 0usize;
    let mut min_gap = f64::INFINITY;
    let mut residual_max = 0.0f64;
    for m in 0..dim {
        for n in (m + 1)..dim {
            let h = hi.data()[(m, n)];
            let gap = h0.data()[(m, m)] - h0.data()[(n, n)];
            if h.abs() <= tol {
                if gap.abs() <= tol {
                    zeroed += 1;
                }
                continue;
            }
            if gap.abs() <= tol {
                return Err(Error::Resonance { row: m, col: n });
            }
            let val = h / gap;
            k[(m, n)] = val;
            k[(n, m)] = -val;
            min_gap = min_gap.min(gap.abs());
            residual_max = residual_max.max((gap * val - h).abs());
        }
    }

    let op = Operator::new(h0.space(), k, Symmetry::Antisymmetric)?;
    Ok((
        Generator { op },
        EliminationReport { residual_max, zeroed_entries: zeroed, min_gap_used: min_gap },
    ))
}

/// Closed-form generator `K = (g/Delta) (a S_+ - a† S_-)` of the Dicke
/// elimination.
pub fn closed_form_generator(params: DickeParams, space: SpaceSpec) -> Result<Generator> {
    let delta = params.delta();
    if delta == 0.0 {
        return Err(Error::Resonance { row: 0, col: 0 });
    }
    let dim = space.dim();
    let mut k = DMatrix::zeros(dim, dim);
    for n in 1..=space.n_max() {
        for kk in 0..space.two_s() {
            let amp = params.g / delta * (n as f64).sqrt() * space.raise_element(kk);
            let row = space.index(n - 1, kk + 1);
            let col = space.index(n, kk);
            // (a S_+) moves (n, k) -> (n-1, k+1); its transpose is a† S_-.
            k[(row, col)] = amp;
            k[(col, row)] = -amp;
        }
    }
    Ok(Generator {
        op: Operator::new(space, k, Symmetry::Antisymmetric)?,
    })
}

/// Second-order effective interaction `H^(2) = (1/2) [K, H_I]`
/// (the real form of `(i/2)[H_I, Omega]`).
pub fn second_order(hi: &Operator, k: &Generator) -> Result<Operator> {
    let comm = commutator(k.operator(), hi)?;
    Ok(comm.scale(0.5))
}

/// Effective Hamiltonian `H_0 + (1/2)[K, H_I]` with `K` from
/// [`solve_generator`].
pub fn effective_hamiltonian(
    params: DickeParams,
    space: SpaceSpec,
    tol_gap: f64,
) -> Result<(Operator, EliminationReport)> {
    let (h0, hi) = split_dicke(params, space);
    let (k, report) = solve_generator(&h0, &hi, tol_gap)?;
    let h2 = second_order(&hi, &k)?;
    Ok((h0.add(&h2)?, report))
}

/// Orthogonal matrix `e^{K}` by scaling-and-squaring with a truncated
/// Taylor series; `tol` bounds the series remainder.
pub fn matrix_exponential(k: &Generator, tol: f64) -> Operator {
    let space = k.space();
    let dim = space.dim();
    let a = k.data();

    // 1-norm controls the Taylor remainder.
    let norm1 = (0..dim)
        .map(|j| (0..dim).map(|i| a[(i, j)].abs()).sum::<f64>())
        .fold(0.0f64, f64::max);

    let squarings = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / 2f64.powi(squarings as i32);

    let mut result = DMatrix::identity(dim, dim);
    let mut term = DMatrix::identity(dim, dim);
    let tol = tol.max(f64::EPSILON * norm1.max(1.0));
    for j in 1..=40u64 {
        term = &term * &scaled / j as f64;
        result += &term;
        let term_norm = term.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
        // ||A_scaled|| <= 1/2, so the tail is bounded by the current term.
        if term_norm <= 0.5 * tol {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    Operator::new(space, result, Symmetry::General).expect("square by construction")
}

/// Exact similarity transform `e^{K} H e^{-K}` (an orthogonal conjugation,
/// so the spectrum of `H` is preserved).
pub fn similarity_transform(h: &Operator, k: &Generator, tol: f64) -> Result<Operator> {
    if h.space() != k.space() {
        return Err(Error::DimensionMismatch { lhs: h.dim(), rhs: k.space().dim() });
    }
    let q = matrix_exponential(k, tol);
    let transformed = q.data() * h.data() * q.data().transpose();
    let op = Operator::new(h.space(), transformed, Symmetry::General)?;
    Ok(op.symmetrized(Symmetry::Symmetric))
}

/// Full Dicke Hamiltonian assembled from operator products,
/// `omega0 a†a + omega1 S_z + g (a S_+ + a† S_-)`.
pub fn dicke_hamiltonian(params: DickeParams, space: SpaceSpec) -> Operator {
    let a = annihilation_op(space);
    let ad = a.transpose();
    let (sp, sm, sz) = spin_ops(space);
    let number = ad.mul(&a).expect("same space");
    let interaction = a
        .mul(&sp)
        .expect("same space")
        .add(&ad.mul(&sm).expect("same space"))
        .expect("same space");
    let h = number
        .scale(params.omega0)
        .add(&sz.scale(params.omega1))
        .expect("same space")
        .add(&interaction.scale(params.g))
        .expect("same space");
    h.symmetrized(Symmetry::Symmetric)
}
