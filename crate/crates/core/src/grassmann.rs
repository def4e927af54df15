//! Subspaces, ordered configurations of subspaces, and affine charts on
//! Gr(k, n).
//!
//! A chart is fixed by a complement `V0` of dimension `n - k` together with
//! an ordered basis `B = (w_1..w_k, v_1..v_{n-k})` of the ambient space whose
//! last `n - k` vectors span `V0`. Every `H` with `H ⊕ V0 = ambient` is the
//! column span, in the basis `B`, of a unique block matrix `(I; A)` with `A`
//! of shape `(n - k) x k`.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::census::{enumerate_grassmannian, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;

/// A linear subspace of the ambient `n`-space, stored by its canonical
/// column-echelon basis. Equality of values is equality of subspaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// Subspace spanned by the columns of `raw`, which must be independent.
    pub fn from_basis(raw: &Matrix) -> Result<Self> {
        let basis = raw.column_echelon_basis();
        if basis.cols() != raw.cols() {
            return Err(Error::RankDeficient { rank: basis.cols(), cols: raw.cols() });
        }
        Ok(Subspace { basis })
    }

    /// Column span of an arbitrary matrix.
    pub fn span(raw: &Matrix) -> Self {
        Subspace { basis: raw.column_echelon_basis() }
    }

    /// Span of the given standard basis vectors `e_j` (0-based).
    pub fn coordinate(field: FieldSpec, n: usize, axes: &[usize]) -> Self {
        let mut m = Matrix::zeros(field, n, axes.len());
        for (c, &a) in axes.iter().enumerate() {
            m.set(a, c, &field.one());
        }
        Subspace::span(&m)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    /// Canonical `n x k` basis matrix.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        Matrix::hconcat(&[&self.basis, &other.basis]).map(|m| m.rank() == self.dim()).unwrap_or(false)
    }

    /// True when `self ⊕ other` is the whole ambient space.
    pub fn is_complement_of(&self, other: &Subspace) -> bool {
        self.dim() + other.dim() == self.ambient_dim()
            && Matrix::hconcat(&[&self.basis, &other.basis]).map(|m| m.rank() == self.ambient_dim()).unwrap_or(false)
    }
}

/// Alias for [`Subspace::from_basis`].
pub fn canonicalize(raw_basis: &Matrix) -> Result<Subspace> {
    Subspace::from_basis(raw_basis)
}

/// An ordered tuple `(H_1, ..., H_h)` of pairwise distinct subspaces of the
/// same dimension in the same ambient space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    subspaces: Vec<Subspace>,
}

impl Configuration {
    pub fn new(subspaces: Vec<Subspace>) -> Result<Self> {
        let first = subspaces
            .first()
            .ok_or_else(|| Error::InvalidConfiguration("a configuration needs at least one subspace".into()))?;
        for (j, s) in subspaces.iter().enumerate() {
            if s.field() != first.field() {
                return Err(Error::InvalidConfiguration(format!(
                    "subspace {j} is over {}, expected {}",
                    s.field(),
                    first.field()
                )));
            }
            if s.ambient_dim() != first.ambient_dim() {
                return Err(Error::InvalidConfiguration(format!(
                    "subspace {j} lives in dimension {}, expected {}",
                    s.ambient_dim(),
                    first.ambient_dim()
                )));
            }
            if s.dim() != first.dim() {
                return Err(Error::InvalidConfiguration(format!(
                    "subspace {j} has dimension {}, expected {}",
                    s.dim(),
                    first.dim()
                )));
            }
        }
        let mut seen = HashSet::new();
        for (j, s) in subspaces.iter().enumerate() {
            if !seen.insert(s) {
                return Err(Error::InvalidConfiguration(format!("subspace {j} is a duplicate")));
            }
        }
        Ok(Configuration { subspaces })
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn h(&self) -> usize {
        self.subspaces.len()
    }

    pub fn k(&self) -> usize {
        self.subspaces[0].dim()
    }

    pub fn n(&self) -> usize {
        self.subspaces[0].ambient_dim()
    }

    pub fn field(&self) -> FieldSpec {
        self.subspaces[0].field()
    }

    pub fn bases(&self) -> Vec<Matrix> {
        self.subspaces.iter().map(|s| s.basis().clone()).collect()
    }
}

/// Affine chart `U_{V0}` on Gr(k, n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    complement: Subspace,
    basis: Matrix,
    basis_inv: Matrix,
}

impl Chart {
    /// Chart with the default completion: `w_1..w_k` are the standard vectors
    /// `e_r` for the rows `r` that are not pivot rows of the canonical basis
    /// of `V0`, followed by that canonical basis.
    pub fn from_complement(complement: Subspace) -> Result<Self> {
        let n = complement.ambient_dim();
        let field = complement.field();
        let pivots = complement.basis().column_pivots();
        let free: Vec<usize> = (0..n).filter(|r| !pivots.contains(r)).collect();
        let w = Subspace::coordinate(field, n, &free);
        let basis = Matrix::hconcat(&[w.basis(), complement.basis()])?;
        Chart::with_basis(basis, free.len())
    }

    /// Chart from an explicit ordered basis; the last `n - k` columns span `V0`.
    pub fn with_basis(basis: Matrix, k: usize) -> Result<Self> {
        let n = basis.rows();
        if basis.cols() != n || k > n {
            return Err(Error::ShapeMismatch(format!(
                "chart basis must be {n}x{n} with k <= n, got {}x{} and k = {k}",
                basis.rows(),
                basis.cols()
            )));
        }
        let basis_inv = basis.inverse()?;
        let complement = Subspace::from_basis(&basis.columns(k..n))?;
        Ok(Chart { complement, basis, basis_inv })
    }

    /// The chart with `B` the standard basis: `V0 = span(e_{k+1}, ..., e_n)`.
    pub fn standard(field: FieldSpec, n: usize, k: usize) -> Result<Self> {
        Chart::with_basis(Matrix::identity(field, n), k)
    }

    pub fn complement(&self) -> &Subspace {
        &self.complement
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn k(&self) -> usize {
        self.ambient_dim() - self.complement.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn contains(&self, h: &Subspace) -> bool {
        h.is_complement_of(&self.complement)
    }
}

/// Coordinates `A` of `H` in the chart, so that `H` is spanned by `B (I; A)`.
pub fn chart_coordinates(h: &Subspace, chart: &Chart) -> Result<Matrix> {
    let (n, k) = (chart.ambient_dim(), chart.k());
    if h.field() != chart.field() {
        return Err(Error::MixedField);
    }
    if h.ambient_dim() != n || h.dim() != k {
        return Err(Error::ShapeMismatch(format!(
            "chart on Gr({k},{n}) cannot hold a {}-subspace of dimension {}",
            h.dim(),
            h.ambient_dim()
        )));
    }
    let local = chart.basis_inv.mul(h.basis())?;
    let top = local.row_range(0..k);
    let top_inv = match top.inverse() {
        Ok(m) => m,
        Err(Error::Singular) => return Err(Error::NotInChart),
        Err(e) => return Err(e),
    };
    local.row_range(k..n).mul(&top_inv)
}

/// The subspace with chart coordinates `a`.
pub fn from_chart(a: &Matrix, chart: &Chart) -> Result<Subspace> {
    let (n, k) = (chart.ambient_dim(), chart.k());
    if a.rows() != n - k || a.cols() != k {
        return Err(Error::ShapeMismatch(format!(
            "chart coordinates must be {}x{k}, got {}x{}",
            n - k,
            a.rows(),
            a.cols()
        )));
    }
    if a.field() != chart.field() {
        return Err(Error::MixedField);
    }
    let block = Matrix::vconcat(&[&Matrix::identity(chart.field(), k), a])?;
    Subspace::from_basis(&chart.basis.mul(&block)?)
}

const RANDOM_TRIES_PRIME: usize = 64;
const RANDOM_TRIES_RATIONAL: usize = 4096;

/// Finds `V0` of dimension `n - k` complementary to every member of the
/// configuration and returns the default chart on it.
///
/// Randomized with the given seed; over F_p the random phase is followed by
/// an exhaustive scan of Gr(n - k, n)(F_p), which can legitimately come up
/// empty when p is small.
pub fn find_common_complement(config: &Configuration, seed: u64) -> Result<Chart> {
    let (n, k, field) = (config.n(), config.k(), config.field());
    let d = n - k;
    let fits = |v0: &Subspace| config.subspaces().iter().all(|h| h.is_complement_of(v0));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let tries = match field {
        FieldSpec::Rational => RANDOM_TRIES_RATIONAL,
        FieldSpec::Prime(_) => RANDOM_TRIES_PRIME,
    };
    let mut bound = 1i64;
    for attempt in 0..tries {
        let vals: Vec<i64> = (0..n * d)
            .map(|_| match field {
                FieldSpec::Rational => rng.gen_range(-bound..=bound),
                FieldSpec::Prime(p) => rng.gen_range(0..p as i64),
            })
            .collect();
        let raw = Matrix::from_i64(field, n, d, &vals);
        if let Ok(v0) = Subspace::from_basis(&raw) {
            if fits(&v0) {
                return Chart::from_complement(v0);
            }
        }
        if attempt % 16 == 15 {
            bound = bound.saturating_mul(2);
        }
    }

    match field {
        FieldSpec::Prime(p) => {
            for v0 in enumerate_grassmannian(d, n, p, DEFAULT_BUDGET)? {
                if fits(&v0) {
                    return Chart::from_complement(v0);
                }
            }
            Err(Error::NoCommonComplement(p))
        }
        // a generic integer matrix is a common complement; not reaching one
        // in thousands of draws with growing entries does not happen
        FieldSpec::Rational => Err(Error::MaxAttemptsExceeded { attempts: tries }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::grassmannian_count;
    use num_traits::ToPrimitive;

    const Q: FieldSpec = FieldSpec::Rational;

    fn line(field: FieldSpec, v: &[i64]) -> Subspace {
        Subspace::from_basis(&Matrix::from_i64(field, v.len(), 1, v)).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let e12 = Matrix::from_i64(Q, 3, 2, &[1, 0, 0, 1, 0, 0]);
        assert_eq!(canonicalize(&e12).unwrap().basis(), &e12);
        assert_eq!(line(Q, &[2, 0, 0]).basis(), &Matrix::from_i64(Q, 3, 1, &[1, 0, 0]));
        assert_eq!(line(Q, &[1, 1, 0]), line(Q, &[2, 2, 0]));
        let dep = Matrix::from_i64(Q, 3, 2, &[1, 2, 1, 2, 0, 0]);
        assert_eq!(canonicalize(&dep), Err(Error::RankDeficient { rank: 1, cols: 2 }));
    }

    #[test]
    fn configuration_invariants() {
        let a = line(Q, &[1, 0, 0]);
        let b = line(Q, &[0, 1, 0]);
        let c = Configuration::new(vec![a.clone(), b.clone()]).unwrap();
        let swapped = Configuration::new(vec![b.clone(), a.clone()]).unwrap();
        assert_ne!(c, swapped);
        assert_eq!((c.h(), c.k(), c.n()), (2, 1, 3));
        assert!(Configuration::new(vec![a.clone(), line(Q, &[3, 0, 0])]).is_err());
        assert!(Configuration::new(vec![a.clone(), line(FieldSpec::Prime(5), &[0, 1, 0])]).is_err());
        assert!(Configuration::new(vec![a, line(Q, &[0, 1])]).is_err());
        assert!(Configuration::new(vec![]).is_err());
    }

    #[test]
    fn complement_of_single_line() {
        let c = Configuration::new(vec![line(Q, &[1, 0])]).unwrap();
        let chart = find_common_complement(&c, 0).unwrap();
        assert!(chart.complement().is_complement_of(&c.subspaces()[0]));
    }

    #[test]
    fn complement_of_coordinate_axes() {
        let c = Configuration::new(vec![line(Q, &[1, 0]), line(Q, &[0, 1])]).unwrap();
        for seed in 0..5 {
            let chart = find_common_complement(&c, seed).unwrap();
            for h in c.subspaces() {
                let m = Matrix::hconcat(&[chart.complement().basis(), h.basis()]).unwrap();
                assert_eq!(m.rank(), 2);
            }
        }
        let diag = Chart::from_complement(line(Q, &[1, 1])).unwrap();
        assert!(c.subspaces().iter().all(|h| diag.contains(h)));
    }

    #[test]
    fn no_common_complement_for_all_lines_of_f2_plane() {
        let f = FieldSpec::Prime(2);
        let c = Configuration::new(vec![line(f, &[1, 0]), line(f, &[0, 1]), line(f, &[1, 1])]).unwrap();
        assert_eq!(find_common_complement(&c, 9), Err(Error::NoCommonComplement(2)));
    }

    #[test]
    fn same_seed_same_chart() {
        let f = FieldSpec::Prime(5);
        let c = Configuration::new(vec![line(f, &[1, 0, 2]), line(f, &[0, 1, 1])]).unwrap();
        assert_eq!(find_common_complement(&c, 42).unwrap(), find_common_complement(&c, 42).unwrap());
    }

    #[test]
    fn chart_coordinate_examples() {
        let chart = Chart::standard(Q, 4, 2).unwrap();
        let w = Subspace::coordinate(Q, 4, &[0, 1]);
        assert!(chart_coordinates(&w, &chart).unwrap().is_zero());
        assert_eq!(from_chart(&Matrix::zeros(Q, 2, 2), &chart).unwrap(), w);

        let chart = Chart::standard(Q, 2, 1).unwrap();
        let h = line(Q, &[1, 3]);
        assert_eq!(chart_coordinates(&h, &chart).unwrap(), Matrix::from_i64(Q, 1, 1, &[3]));
        assert_eq!(chart_coordinates(&line(Q, &[0, 1]), &chart), Err(Error::NotInChart));
        assert!(from_chart(&Matrix::zeros(Q, 2, 1), &chart).is_err());
    }

    #[test]
    fn nonstandard_basis_roundtrip() {
        let f = FieldSpec::Prime(5);
        let b = Matrix::from_i64(f, 4, 4, &[1, 2, 0, 1, 0, 1, 3, 0, 4, 0, 1, 1, 0, 0, 2, 1]);
        assert_eq!(b.rank(), 4);
        let chart = Chart::with_basis(b, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut hits = 0;
        for _ in 0..50 {
            let vals: Vec<i64> = (0..8).map(|_| rng.gen_range(0..5)).collect();
            let Ok(h) = Subspace::from_basis(&Matrix::from_i64(f, 4, 2, &vals)) else { continue };
            match chart_coordinates(&h, &chart) {
                Ok(a) => {
                    hits += 1;
                    assert_eq!(from_chart(&a, &chart).unwrap(), h);
                }
                Err(Error::NotInChart) => assert!(!chart.contains(&h)),
                Err(e) => panic!("{e}"),
            }
        }
        assert!(hits > 20);
    }

    /// Chart maps are inverse bijections between U_{V0} and all
    /// (n-k) x k matrices, and the chart misses exactly
    /// |Gr(k,n)| - q^{k(n-k)} subspaces.
    #[test]
    fn chart_bijection_exhaustive() {
        for q in [2u32, 3] {
            for n in 2..=4 {
                for k in 1..n {
                    let f = FieldSpec::Prime(q);
                    let chart =
                        Chart::from_complement(Subspace::coordinate(f, n, &(0..n - k).collect::<Vec<_>>())).unwrap();
                    let mut image = HashSet::new();
                    let cells = (n - k) * k;
                    for code in 0..(q as u64).pow(cells as u32) {
                        let mut c = code;
                        let vals: Vec<i64> = (0..cells)
                            .map(|_| {
                                let v = (c % q as u64) as i64;
                                c /= q as u64;
                                v
                            })
                            .collect();
                        let a = Matrix::from_i64(f, n - k, k, &vals);
                        let h = from_chart(&a, &chart).unwrap();
                        assert_eq!(chart_coordinates(&h, &chart).unwrap(), a);
                        assert!(image.insert(h));
                    }
                    let mut inside = 0u64;
                    let mut total = 0u64;
                    for h in enumerate_grassmannian(k, n, q, DEFAULT_BUDGET).unwrap() {
                        total += 1;
                        if chart.contains(&h) {
                            inside += 1;
                            assert!(image.contains(&h));
                        }
                    }
                    assert_eq!(total, grassmannian_count(k, n, q).to_u64().unwrap());
                    assert_eq!(inside, (q as u64).pow(cells as u32));
                }
            }
        }
    }
}
