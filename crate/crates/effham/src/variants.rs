//! Closed-form effective Hamiltonians for the large-detuning Dicke model.
//!
//! Three printed results are built term-by-term from the elementary
//! operators, independently of the numerical elimination pipeline:
//!
//! * [`VariantId::Froehlich17`] — the one-step elimination result,
//!   `omega0 a†a + omega1 S_z + 2 (g²/Δ) a†a S_z + (g²/Δ)(S² - S_z² + S_z)`.
//! * [`VariantId::Guess18`] — the same plus an extra
//!   `(g²/2Δ)(S_+² + S_-²)` term, which breaks excitation-number
//!   conservation and is why that guess needs a further approximation.
//! * [`VariantId::Discrete19`] — the result of a sequence of discrete
//!   transformations: the `{2 S_z a†a + S_+S_-}` coefficient is the first
//!   three terms of the geometric series for `g²/Δ`, and a residual
//!   rotating term `(g ω₀²/ω₁²)(a S_+ + a† S_-)` remains.
//!
//! `S²` is the Casimir on the fixed-S space, i.e. the constant
//! `S(S+1)` times the identity.

use crate::error::{Error, Result};
use crate::hilbert::{
    annihilation_op, spin_ops, DickeParams, Operator, SpaceSpec, Symmetry,
};

/// The three printed closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantId {
    Froehlich17,
    Guess18,
    Discrete19,
}

impl VariantId {
    pub const ALL: [VariantId; 3] =
        [VariantId::Froehlich17, VariantId::Guess18, VariantId::Discrete19];

    pub fn name(&self) -> &'static str {
        match self {
            VariantId::Froehlich17 => "froehlich17",
            VariantId::Guess18 => "guess18",
            VariantId::Discrete19 => "discrete19",
        }
    }
}

impl std::str::FromStr for VariantId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "froehlich17" => Ok(VariantId::Froehlich17),
            "guess18" => Ok(VariantId::Guess18),
            "discrete19" => Ok(VariantId::Discrete19),
            other => Err(format!("unknown variant '{other}'")),
        }
    }
}

/// First three terms of the geometric series for `g²/Δ` in powers of
/// `ω₀/ω₁`: `c = g²/ω₁ + g²ω₀/ω₁² + g²ω₀²/ω₁³`.
pub fn discrete_coefficient(params: DickeParams) -> Result<f64> {
    if params.omega1 == 0.0 {
        return Err(Error::DomainError("omega1 = 0 in discrete coefficient".into()));
    }
    let g2 = params.g * params.g;
    let w1 = params.omega1;
    let r = params.omega0 / w1;
    Ok(g2 / w1 * (1.0 + r + r * r))
}

/// Shared diagonal part `omega0 a†a + omega1 S_z + c {2 S_z a†a + S_+ S_-}`.
fn diagonal_part(params: DickeParams, space: SpaceSpec, c: f64) -> Operator {
    let s = space.spin();
    Operator::from_diagonal(space, |n, k| {
        let m = k as f64 - s;
        // S_+ S_- is diagonal with value S(S+1) - m² + m.
        let spsm = s * (s + 1.0) - m * m + m;
        params.omega0 * n as f64 + params.omega1 * m + c * (2.0 * m * n as f64 + spsm)
    })
}

/// Build the requested closed-form effective Hamiltonian. For
/// `Discrete19` the residual rotating term is included, reproducing the
/// printed expression; see [`discrete19`] to drop it.
pub fn effective_closed_form(
    params: DickeParams,
    space: SpaceSpec,
    variant: VariantId,
) -> Result<Operator> {
    match variant {
        VariantId::Froehlich17 => froehlich17(params, space),
        VariantId::Guess18 => guess18(params, space),
        VariantId::Discrete19 => discrete19(params, space, true),
    }
}

fn froehlich17(params: DickeParams, space: SpaceSpec) -> Result<Operator> {
    let delta = params.delta();
    if delta == 0.0 {
        return Err(Error::Resonance { row: 0, col: 0 });
    }
    Ok(diagonal_part(params, space, params.g * params.g / delta))
}

fn guess18(params: DickeParams, space: SpaceSpec) -> Result<Operator> {
    let delta = params.delta();
    if delta == 0.0 {
        return Err(Error::Resonance { row: 0, col: 0 });
    }
    let (sp, sm, _) = spin_ops(space);
    let counter = sp
        .mul(&sp)?
        .add(&sm.mul(&sm)?)?
        .scale(params.g * params.g / (2.0 * delta));
    let h = froehlich17(params, space)?.add(&counter)?;
    Ok(h.symmetrized(Symmetry::Symmetric))
}

/// The discrete-transformation result; `include_residual = false` keeps
/// only its excitation-conserving diagonal part.
pub fn discrete19(
    params: DickeParams,
    space: SpaceSpec,
    include_residual: bool,
) -> Result<Operator> {
    let c = discrete_coefficient(params)?;
    let diag = diagonal_part(params, space, c);
    if !include_residual {
        return Ok(diag);
    }
    let a = annihilation_op(space);
    let ad = a.transpose();
    let (sp, sm, _) = spin_ops(space);
    let rotating = a
        .mul(&sp)?
        .add(&ad.mul(&sm)?)?
        .scale(params.g * params.omega0 * params.omega0 / (params.omega1 * params.omega1));
    let h = diag.add(&rotating)?;
    Ok(h.symmetrized(Symmetry::Symmetric))
}
