//! Stratification of the ordered configuration space of `h` distinct points
//! of Gr(k, n) by the dimension `i` of the sum `H_1 + ... + H_h`.
//!
//! All formulas are exact integer arithmetic. Emptiness is a predicate on
//! descriptors, so callers can enumerate every candidate `i` in `0..=n`.

use std::fmt;

use crate::error::{Error, Result};
use crate::grassmann::Configuration;
use crate::matrix::{column_span_intersection, column_span_sum, Matrix};

/// Names the stratum F_h^i(k, n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StratumDescriptor {
    pub h: usize,
    pub k: usize,
    pub n: usize,
    pub i: usize,
}

impl StratumDescriptor {
    /// Requires `h >= 1`, `0 < k < n` and `i <= n`.
    pub fn new(h: usize, k: usize, n: usize, i: usize) -> Result<Self> {
        if h == 0 {
            return Err(Error::InvalidDescriptor("h must be at least 1".into()));
        }
        if k == 0 || k >= n {
            return Err(Error::InvalidDescriptor(format!("need 0 < k < n, got k={k}, n={n}")));
        }
        if i > n {
            return Err(Error::InvalidDescriptor(format!("i={i} exceeds n={n}")));
        }
        Ok(StratumDescriptor { h, k, n, i })
    }

    /// Same `(h, k, n)` with another sum dimension.
    pub fn with_i(&self, i: usize) -> Result<Self> {
        StratumDescriptor::new(self.h, self.k, self.n, i)
    }

    pub fn is_nonempty(&self) -> bool {
        let StratumDescriptor { h, k, n, i } = *self;
        if h == 1 {
            i == k
        } else {
            k < i && i <= (h * k).min(n)
        }
    }

    fn require_nonempty(&self) -> Result<()> {
        if self.is_nonempty() {
            Ok(())
        } else {
            Err(self.empty_error())
        }
    }

    fn empty_error(&self) -> Error {
        Error::EmptyStratum { h: self.h, k: self.k, n: self.n, i: self.i }
    }

    /// Complex dimension `i(n - i) + hk(i - k)`.
    pub fn dimension(&self) -> Result<u64> {
        self.require_nonempty()?;
        Ok(dimension_formula(self.h, self.k, self.n, self.i) as u64)
    }

    /// Factors of the local model `C^{k(n-k)} x D_{i-k}(n-k, hk-k)^*`.
    pub fn local_model(&self) -> Result<LocalModel> {
        self.require_nonempty()?;
        if self.h < 2 {
            return Err(Error::InvalidDescriptor("the determinantal local model needs h >= 2".into()));
        }
        let StratumDescriptor { h, k, n, i } = *self;
        Ok(LocalModel { affine_dim: k * (n - k), det_rank_r: i - k, det_rows_m: n - k, det_cols_mprime: h * k - k })
    }

    /// `d(i) - d(i - 1)`, evaluated from the dimension formula.
    ///
    /// Only stratum `i` has to be nonempty; the formula is used at `i - 1`
    /// even where that stratum is empty.
    pub fn codimension_step(&self) -> Result<i64> {
        self.require_nonempty()?;
        if self.i == 0 {
            return Err(self.empty_error());
        }
        let StratumDescriptor { h, k, n, i } = *self;
        Ok(dimension_formula(h, k, n, i) - dimension_formula(h, k, n, i - 1))
    }

    /// Nonempty strata in the closure of this one, from `i` down to `2`.
    /// For `h = 1` the closure is the stratum itself.
    pub fn adjacency_closure(&self) -> Vec<StratumDescriptor> {
        if self.h == 1 {
            return if self.is_nonempty() { vec![*self] } else { vec![] };
        }
        (2..=self.i).rev().map(|j| StratumDescriptor { i: j, ..*self }).filter(|d| d.is_nonempty()).collect()
    }

    /// Fundamental group lookup. Only cases with a known answer are decided:
    ///
    /// - `n = 2` (so `k = 1`), `h >= 2`: the stratum is all of F_h(CP^1), the
    ///   pure braid group of the sphere on `h` strands;
    /// - the top stratum `i = min(n, hk)` with `n != hk` and `(k, n) != (1, 2)`
    ///   is simply connected;
    /// - hyperplane arrangements (`k = n - 1`, `h >= 2`, forcing `i = n`) are
    ///   simply connected for `n > 2`.
    ///
    /// Everything else is `Unknown`.
    pub fn fundamental_group(&self) -> Result<Pi1Result> {
        self.require_nonempty()?;
        let StratumDescriptor { h, k, n, i } = *self;
        let top = (h * k).min(n);
        if (k, n) == (1, 2) {
            return Ok(if h >= 2 { Pi1Result::PureSphereBraid(h) } else { Pi1Result::Unknown });
        }
        if n != h * k && i == top {
            return Ok(Pi1Result::Trivial);
        }
        if k + 1 == n && h >= 2 && i == n {
            return Ok(Pi1Result::Trivial);
        }
        Ok(Pi1Result::Unknown)
    }
}

impl fmt::Display for StratumDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}({},{})", self.h, self.i, self.k, self.n)
    }
}

/// `i(n - i) + hk(i - k)` as a signed integer, for any `i`.
pub fn dimension_formula(h: usize, k: usize, n: usize, i: usize) -> i64 {
    let (h, k, n, i) = (h as i64, k as i64, n as i64, i as i64);
    i * (n - i) + h * k * (i - k)
}

/// `C^{affine_dim} x D_r(m, m')^*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalModel {
    pub affine_dim: usize,
    pub det_rank_r: usize,
    pub det_rows_m: usize,
    pub det_cols_mprime: usize,
}

impl LocalModel {
    pub fn total_dimension(&self) -> u64 {
        self.affine_dim as u64
            + determinantal_dimension(self.det_rank_r, self.det_rows_m, self.det_cols_mprime)
                .expect("rank within bounds by construction")
    }
}

impl fmt::Display for LocalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C^{} x D_{}({},{})*", self.affine_dim, self.det_rank_r, self.det_rows_m, self.det_cols_mprime)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pi1Result {
    Trivial,
    /// Pure braid group of the 2-sphere on the given number of strands.
    PureSphereBraid(usize),
    Unknown,
}

impl fmt::Display for Pi1Result {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pi1Result::Trivial => write!(f, "Trivial"),
            Pi1Result::PureSphereBraid(h) => write!(f, "PureSphereBraid({h})"),
            Pi1Result::Unknown => write!(f, "Unknown"),
        }
    }
}

/// Dimension `r(m + m' - r)` of the variety of `m x m'` matrices of rank at most `r`.
pub fn determinantal_dimension(r: usize, m: usize, mprime: usize) -> Result<u64> {
    if r > m.min(mprime) {
        return Err(Error::RankTooLarge { r, m, mprime });
    }
    Ok((r * (m + mprime - r)) as u64)
}

/// Dimension of `H_1 + ... + H_h`.
pub fn stratum_of(config: &Configuration) -> usize {
    column_span_sum(&config.bases()).expect("configuration shares ambient and field").cols()
}

/// Dimension of `H_1 ∩ ... ∩ H_h`.
pub fn dual_stratum_of(config: &Configuration) -> usize {
    column_span_intersection(&config.bases()).expect("configuration shares ambient and field").cols()
}

/// The block matrix `(I I ... I; A_1 A_2 ... A_h)`.
pub fn chart_block_matrix(a_list: &[Matrix]) -> Result<Matrix> {
    check_chart_shapes(a_list)?;
    let k = a_list[0].cols();
    let id = Matrix::identity(a_list[0].field(), k);
    let ids: Vec<&Matrix> = a_list.iter().map(|_| &id).collect();
    let top = Matrix::hconcat(&ids)?;
    let refs: Vec<&Matrix> = a_list.iter().collect();
    let bottom = Matrix::hconcat(&refs)?;
    Matrix::vconcat(&[&top, &bottom])
}

fn check_chart_shapes(a_list: &[Matrix]) -> Result<()> {
    let first = a_list.first().ok_or(Error::EmptyInput("no chart matrices"))?;
    for a in a_list {
        if a.field() != first.field() {
            return Err(Error::MixedField);
        }
        if (a.rows(), a.cols()) != (first.rows(), first.cols()) {
            return Err(Error::ShapeMismatch(format!(
                "chart matrices of shapes {}x{} and {}x{}",
                first.rows(),
                first.cols(),
                a.rows(),
                a.cols()
            )));
        }
    }
    Ok(())
}

/// Output of [`rank_reduction`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReduction {
    /// `k + rank(B_2 ... B_h)`.
    pub rank_claim: usize,
    /// `B_j = A_j - A_1` for `j = 2..h`.
    pub differences: Vec<Matrix>,
}

/// Subtracts the first chart matrix from the others. The rank of the block
/// matrix drops to `k` plus the rank of the differences, because subtracting
/// the first block column clears the identity blocks.
pub fn rank_reduction(a_list: &[Matrix]) -> Result<RankReduction> {
    check_chart_shapes(a_list)?;
    if a_list.len() < 2 {
        return Err(Error::ShapeMismatch("rank reduction needs at least two chart matrices".into()));
    }
    let k = a_list[0].cols();
    let differences: Vec<Matrix> = a_list[1..].iter().map(|a| a.sub(&a_list[0])).collect::<Result<_>>()?;
    let refs: Vec<&Matrix> = differences.iter().collect();
    let rank_claim = k + Matrix::hconcat(&refs)?.rank();
    Ok(RankReduction { rank_claim, differences })
}
