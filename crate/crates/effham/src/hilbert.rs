//! Truncated boson ⊗ collective-spin product space and the elementary
//! operators on it.
//!
//! Basis states are labeled `(n, k)` with `n` the photon number
//! (`0..=n_max`) and `k` the magnetic label (`0..=two_s`, so that
//! `m = k - S` runs from `-S` to `+S`). The flat index is
//! `idx(n, k) = n * (two_s + 1) + k`, i.e. spin blocks are contiguous.
//!
//! Every matrix element of the rotating-wave Dicke model is real in this
//! basis, so all operators are stored as dense real matrices with a
//! declared symmetry class.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Default cap on the Hilbert space dimension.
pub const DEFAULT_MAX_DIM: usize = 10_000;

/// Truncated product space: photon numbers `0..=n_max` times a spin-S
/// multiplet with `2S = two_s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceSpec {
    two_s: u32,
    n_max: u32,
}

impl SpaceSpec {
    /// Build a space spec, rejecting dimensions beyond `DEFAULT_MAX_DIM`.
    pub fn new(two_s: u32, n_max: u32) -> Result<Self> {
        Self::with_max_dim(two_s, n_max, DEFAULT_MAX_DIM)
    }

    /// Build a space spec with an explicit dimension cap.
    pub fn with_max_dim(two_s: u32, n_max: u32, max_dim: usize) -> Result<Self> {
        let dim = (n_max as usize + 1) * (two_s as usize + 1);
        if dim > max_dim {
            return Err(Error::DimensionOverflow { dim, max: max_dim });
        }
        Ok(Self { two_s, n_max })
    }

    pub fn two_s(&self) -> u32 {
        self.two_s
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// Spin magnitude S (may be half-integer).
    pub fn spin(&self) -> f64 {
        self.two_s as f64 / 2.0
    }

    /// Total dimension `(n_max + 1) * (two_s + 1)`.
    pub fn dim(&self) -> usize {
        (self.n_max as usize + 1) * (self.two_s as usize + 1)
    }

    /// Flat basis index of the state `(n, k)`.
    pub fn index(&self, n: u32, k: u32) -> usize {
        debug_assert!(n <= self.n_max && k <= self.two_s);
        n as usize * (self.two_s as usize + 1) + k as usize
    }

    /// Inverse of [`SpaceSpec::index`].
    pub fn state(&self, idx: usize) -> (u32, u32) {
        debug_assert!(idx < self.dim());
        let width = self.two_s as usize + 1;
        ((idx / width) as u32, (idx % width) as u32)
    }

    /// Excitation number `q = n + k` of the basis state at `idx`.
    pub fn excitation(&self, idx: usize) -> u32 {
        let (n, k) = self.state(idx);
        n + k
    }

    /// Largest excitation number present in the truncated space.
    pub fn max_excitation(&self) -> u32 {
        self.n_max + self.two_s
    }

    /// Iterate over all basis states `(n, k)` in flat-index order.
    pub fn states(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let spec = *self;
        (0..spec.dim()).map(move |i| spec.state(i))
    }

    /// Matrix element `<k+1| S_+ |k>` = sqrt(S(S+1) - m(m+1)) at `m = k - S`.
    pub fn raise_element(&self, k: u32) -> f64 {
        debug_assert!(k < self.two_s);
        let s = self.spin();
        let m = k as f64 - s;
        (s * (s + 1.0) - m * (m + 1.0)).sqrt()
    }
}

/// Symmetry class declared on an [`Operator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
    General,
}

/// Dense real operator on a [`SpaceSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: SpaceSpec,
    data: DMatrix<f64>,
    symmetry: Symmetry,
}

impl Operator {
    /// Wrap a matrix, trusting the declared symmetry class.
    pub fn new(space: SpaceSpec, data: DMatrix<f64>, symmetry: Symmetry) -> Result<Self> {
        if data.nrows() != space.dim() || data.ncols() != space.dim() {
            return Err(Error::DimensionMismatch {
                lhs: data.nrows().max(data.ncols()),
                rhs: space.dim(),
            });
        }
        Ok(Self { space, data, symmetry })
    }

    pub fn zeros(space: SpaceSpec) -> Self {
        Self {
            space,
            data: DMatrix::zeros(space.dim(), space.dim()),
            symmetry: Symmetry::Symmetric,
        }
    }

    pub fn identity(space: SpaceSpec) -> Self {
        Self {
            space,
            data: DMatrix::identity(space.dim(), space.dim()),
            symmetry: Symmetry::Symmetric,
        }
    }

    /// Diagonal operator from per-state values.
    pub fn from_diagonal(space: SpaceSpec, diag: impl Fn(u32, u32) -> f64) -> Self {
        let mut data = DMatrix::zeros(space.dim(), space.dim());
        for (i, (n, k)) in space.states().enumerate() {
            data[(i, i)] = diag(n, k);
        }
        Self { space, data, symmetry: Symmetry::Symmetric }
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_data(self) -> DMatrix<f64> {
        self.data
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }

    /// Largest absolute deviation from symmetry, `max |M - M^T|`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.data.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.data[(i, j)] - self.data[(j, i)]).abs());
            }
        }
        worst
    }

    /// Largest absolute deviation from antisymmetry, `max |M + M^T|`
    /// (includes the diagonal, which must vanish).
    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.data.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[(i, j)] + self.data[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn transpose(&self) -> Operator {
        let symmetry = self.symmetry;
        Operator {
            space: self.space,
            data: self.data.transpose(),
            symmetry,
        }
    }

    pub fn scale(&self, factor: f64) -> Operator {
        Operator {
            space: self.space,
            data: &self.data * factor,
            symmetry: self.symmetry,
        }
    }

    fn check_space(&self, other: &Operator) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch { lhs: self.dim(), rhs: other.dim() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.check_space(other)?;
        let symmetry = if self.symmetry == other.symmetry {
            self.symmetry
        } else {
            Symmetry::General
        };
        Ok(Operator { space: self.space, data: &self.data + &other.data, symmetry })
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.check_space(other)?;
        let symmetry = if self.symmetry == other.symmetry {
            self.symmetry
        } else {
            Symmetry::General
        };
        Ok(Operator { space: self.space, data: &self.data - &other.data, symmetry })
    }

    /// Matrix product; the result carries no symmetry guarantee.
    pub fn mul(&self, other: &Operator) -> Result<Operator> {
        self.check_space(other)?;
        Ok(Operator {
            space: self.space,
            data: &self.data * &other.data,
            symmetry: Symmetry::General,
        })
    }

    /// Force the declared symmetry class onto the stored data by averaging
    /// with (minus) the transpose. Used after floating-point arithmetic
    /// that preserves the class only up to rounding.
    pub fn symmetrized(&self, symmetry: Symmetry) -> Operator {
        let data = match symmetry {
            Symmetry::Symmetric => (&self.data + self.data.transpose()) * 0.5,
            Symmetry::Antisymmetric => (&self.data - self.data.transpose()) * 0.5,
            Symmetry::General => self.data.clone(),
        };
        Operator { space: self.space, data, symmetry }
    }
}

/// Commutator `[A, B] = AB - BA`.
///
/// The symmetry class of the result follows from the operands:
/// a symmetric/antisymmetric pair commutes into a symmetric matrix and a
/// symmetric pair into an antisymmetric one; anything else is `General`.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    if a.space != b.space {
        return Err(Error::DimensionMismatch { lhs: a.dim(), rhs: b.dim() });
    }
    use Symmetry::*;
    let symmetry = match (a.symmetry, b.symmetry) {
        (Symmetric, Antisymmetric) | (Antisymmetric, Symmetric) => Symmetric,
        (Symmetric, Symmetric) => Antisymmetric,
        _ => General,
    };
    let data = &a.data * &b.data - &b.data * &a.data;
    Ok(Operator { space: a.space, data, symmetry })
}

/// Photon annihilation operator: `<n-1, k| a |n, k> = sqrt(n)`.
pub fn annihilation_op(space: SpaceSpec) -> Operator {
    let mut data = DMatrix::zeros(space.dim(), space.dim());
    for n in 1..=space.n_max() {
        for k in 0..=space.two_s() {
            data[(space.index(n - 1, k), space.index(n, k))] = (n as f64).sqrt();
        }
    }
    Operator { space, data, symmetry: Symmetry::General }
}

/// Photon creation operator, the transpose of [`annihilation_op`].
pub fn creation_op(space: SpaceSpec) -> Operator {
    annihilation_op(space).transpose()
}

/// Collective spin ladder and projection operators `(S_+, S_-, S_z)`.
pub fn spin_ops(space: SpaceSpec) -> (Operator, Operator, Operator) {
    let dim = space.dim();
    let mut sp = DMatrix::zeros(dim, dim);
    for n in 0..=space.n_max() {
        for k in 0..space.two_s() {
            sp[(space.index(n, k + 1), space.index(n, k))] = space.raise_element(k);
        }
    }
    let sm = sp.transpose();
    let s = space.spin();
    let sz = Operator::from_diagonal(space, |_, k| k as f64 - s);
    (
        Operator { space, data: sp, symmetry: Symmetry::General },
        Operator { space, data: sm, symmetry: Symmetry::General },
        sz,
    )
}

/// Conserved excitation number `N = a†a + S_z + S·I`, diagonal with
/// eigenvalue `q = n + k` on the state `(n, k)`.
pub fn excitation_number_op(space: SpaceSpec) -> Operator {
    Operator::from_diagonal(space, |n, k| (n + k) as f64)
}

/// Dicke model parameters. The detuning `delta = omega1 - omega0` is the
/// small-denominator scale of the elimination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DickeParams {
    pub omega0: f64,
    pub omega1: f64,
    pub g: f64,
}

impl DickeParams {
    pub fn new(omega0: f64, omega1: f64, g: f64) -> Self {
        Self { omega0, omega1, g }
    }

    pub fn delta(&self) -> f64 {
        self.omega1 - self.omega0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn space(two_s: u32, n_max: u32) -> SpaceSpec {
        SpaceSpec::new(two_s, n_max).unwrap()
    }

    #[test]
    fn space_dimensions() {
        assert_eq!(space(1, 0).dim(), 2);
        assert_eq!(space(1, 19).dim(), 40);
        assert_eq!(space(2, 10).dim(), 33);
    }

    #[test]
    fn space_dimension_cap() {
        let err = SpaceSpec::new(99, 999).unwrap_err();
        assert_eq!(err, Error::DimensionOverflow { dim: 100_000, max: DEFAULT_MAX_DIM });
        assert!(SpaceSpec::with_max_dim(99, 999, 200_000).is_ok());
    }

    #[test]
    fn index_is_a_bijection() {
        let sp = space(3, 7);
        let mut seen = vec![false; sp.dim()];
        for (n, k) in sp.states() {
            let i = sp.index(n, k);
            assert!(!seen[i]);
            seen[i] = true;
            assert_eq!(sp.state(i), (n, k));
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn annihilation_ladder_entries() {
        let sp = space(1, 3);
        let a = annihilation_op(sp);
        // Vacuum column is zero.
        for k in 0..=1 {
            let col = sp.index(0, k);
            assert!((0..sp.dim()).all(|r| a.data()[(r, col)] == 0.0));
        }
        assert_eq!(a.data()[(sp.index(0, 0), sp.index(1, 0))], 1.0);
        assert_abs_diff_eq!(
            a.data()[(sp.index(1, 1), sp.index(2, 1))],
            2f64.sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn annihilation_columns_have_single_ladder_entry() {
        let sp = space(2, 5);
        let a = annihilation_op(sp);
        for (n, k) in sp.states() {
            let col = sp.index(n, k);
            for r in 0..sp.dim() {
                let expected = if n >= 1 && r == sp.index(n - 1, k) {
                    (n as f64).sqrt()
                } else {
                    0.0
                };
                assert_eq!(a.data()[(r, col)], expected);
            }
        }
    }

    #[test]
    fn spin_half_sz() {
        let sp = space(1, 2);
        let (_, _, sz) = spin_ops(sp);
        for n in 0..=2 {
            assert_eq!(sz.data()[(sp.index(n, 0), sp.index(n, 0))], -0.5);
            assert_eq!(sz.data()[(sp.index(n, 1), sp.index(n, 1))], 0.5);
        }
    }

    #[test]
    fn spin_one_raising_element() {
        let sp = space(2, 0);
        let (spl, _, _) = spin_ops(sp);
        // m = 0 -> m = +1 is k = 1 -> k = 2.
        assert_abs_diff_eq!(
            spl.data()[(sp.index(0, 2), sp.index(0, 1))],
            2f64.sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn spin_commutators() {
        let sp = space(3, 2);
        let (spl, sm, sz) = spin_ops(sp);
        let c = commutator(&spl, &sm).unwrap();
        let diff = c.sub(&sz.scale(2.0)).unwrap();
        assert!(diff.max_abs() <= 1e-13);

        let c = commutator(&sz, &spl).unwrap();
        assert!(c.sub(&spl).unwrap().max_abs() <= 1e-13);
    }

    #[test]
    fn spin_casimir() {
        let sp = space(4, 2);
        let s = sp.spin();
        let (spl, sm, sz) = spin_ops(sp);
        let casimir = spl
            .mul(&sm)
            .unwrap()
            .add(&sz.mul(&sz).unwrap())
            .unwrap()
            .sub(&sz)
            .unwrap();
        let expected = Operator::identity(sp).scale(s * (s + 1.0));
        assert!(casimir.sub(&expected).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn boson_commutator_and_truncation_defect() {
        let sp = space(2, 4);
        let a = annihilation_op(sp);
        let ad = creation_op(sp);
        let c = commutator(&a, &ad).unwrap();
        for (n, k) in sp.states() {
            let i = sp.index(n, k);
            for j in 0..sp.dim() {
                let expected = if i != j {
                    0.0
                } else if n < sp.n_max() {
                    1.0
                } else {
                    // Defect: -n_max on the top photon sector.
                    1.0 - (sp.n_max() as f64 + 1.0)
                };
                assert_abs_diff_eq!(c.data()[(i, j)], expected, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn excitation_number_eigenvalues() {
        let sp = space(1, 4);
        let n_op = excitation_number_op(sp);
        assert_eq!(n_op.data()[(sp.index(0, 0), sp.index(0, 0))], 0.0);
        assert_eq!(n_op.data()[(sp.index(3, 1), sp.index(3, 1))], 4.0);
    }

    #[test]
    fn dicke_conserves_excitation_number() {
        // Oracle: explicit matrix commutator at two_s = 1, n_max = 6.
        let sp = space(1, 6);
        let params = DickeParams::new(1.0, 11.0, 0.3);
        let h = crate::elimination::dicke_hamiltonian(params, sp);
        let n_op = excitation_number_op(sp);
        let c = commutator(&h, &n_op).unwrap();
        for i in 0..sp.dim() {
            for j in 0..sp.dim() {
                if sp.excitation(i) <= sp.n_max() && sp.excitation(j) <= sp.n_max() {
                    assert!(c.data()[(i, j)].abs() <= 1e-13);
                }
            }
        }
    }

    #[test]
    fn commutator_of_operator_with_itself_vanishes() {
        let sp = space(2, 3);
        let a = annihilation_op(sp);
        assert_eq!(commutator(&a, &a).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn commutator_symmetry_classes() {
        let sp = space(1, 2);
        let sym = Operator::from_diagonal(sp, |n, k| (n + 2 * k) as f64);
        let (spl, sm, _) = spin_ops(sp);
        let sym2 = spl.add(&sm).unwrap().symmetrized(Symmetry::Symmetric);
        let anti = spl.sub(&sm).unwrap().symmetrized(Symmetry::Antisymmetric);

        assert_eq!(commutator(&sym, &anti).unwrap().symmetry(), Symmetry::Symmetric);
        assert_eq!(commutator(&anti, &sym).unwrap().symmetry(), Symmetry::Symmetric);
        assert_eq!(commutator(&sym, &sym2).unwrap().symmetry(), Symmetry::Antisymmetric);
        assert_eq!(commutator(&anti, &anti).unwrap().symmetry(), Symmetry::General);
    }

    #[test]
    fn commutator_dimension_mismatch() {
        let a = annihilation_op(space(1, 2));
        let b = annihilation_op(space(1, 3));
        assert!(matches!(
            commutator(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn constructed_symmetry_is_bit_exact() {
        let sp = space(3, 5);
        let (spl, sm, sz) = spin_ops(sp);
        assert_eq!(sz.asymmetry(), 0.0);
        assert_eq!(excitation_number_op(sp).asymmetry(), 0.0);
        let symmetric_sum = spl.add(&sm).unwrap();
        assert_eq!(symmetric_sum.asymmetry(), 0.0);
    }
}
