//! Point counts over finite fields.
//!
//! Strata are counted by exhaustive enumeration of ordered tuples of
//! distinct subspaces of F_q^n. The work is split by the index of the first
//! subspace and merged by addition, so results do not depend on the
//! thread count.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{mod_inverse, next_prime, FieldSpec};
use crate::grassmann::Subspace;
use crate::matrix::Matrix;
use crate::poly::{interpolate, CountPolynomial};
use crate::strata::StratumDescriptor;

/// Default cap on enumerated tuples.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Primes tried first when fitting count polynomials.
pub const DEFAULT_Q_LIST: [u32; 6] = [2, 3, 5, 7, 11, 13];

fn check_prime(q: u32) -> Result<()> {
    FieldSpec::prime(q as u64).map(|_| ())
}

/// Gaussian binomial `[n choose k]_q`, the number of k-subspaces of F_q^n.
pub fn grassmannian_count(k: usize, n: usize, q: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 0..k {
        num *= q.pow((n - j) as u32) - 1u32;
        den *= q.pow((j + 1) as u32) - 1u32;
    }
    num / den
}

/// Number of `m x m'` matrices over F_q of rank exactly `r`.
pub fn rank_locus_count(r: usize, m: usize, mprime: usize, q: u32) -> Result<BigUint> {
    if r > m.min(mprime) {
        return Err(Error::RankTooLarge { r, m, mprime });
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 0..r {
        let qj = q.pow(j as u32);
        num *= (q.pow(m as u32) - &qj) * (q.pow(mprime as u32) - &qj);
        den *= q.pow(r as u32) - &qj;
    }
    Ok(num / den)
}

/// `N (N - 1) ... (N - h + 1)`.
pub fn falling_factorial(n: &BigUint, h: usize) -> BigUint {
    let mut acc = BigUint::one();
    for j in 0..h {
        if *n < BigUint::from(j) {
            return BigUint::zero();
        }
        acc *= n - BigUint::from(j);
    }
    acc
}

fn require_budget(needed: &BigUint, budget: u64) -> Result<()> {
    if *needed > BigUint::from(budget) {
        Err(Error::BudgetExceeded { needed: needed.to_u128().unwrap_or(u128::MAX), budget })
    } else {
        Ok(())
    }
}

/// Iterator over Gr(k, n)(F_q) in canonical order: pivot sets in
/// lexicographic order, then the free entries of the reduced echelon form as
/// a little odometer (first free position slowest).
#[derive(Clone, Debug)]
pub struct GrassmannianIter {
    k: usize,
    n: usize,
    q: u32,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    values: Vec<u32>,
    done: bool,
}

impl GrassmannianIter {
    fn new(k: usize, n: usize, q: u32) -> Self {
        let pivots: Vec<usize> = (0..k).collect();
        let mut it = GrassmannianIter { k, n, q, pivots, free: vec![], values: vec![], done: k > n };
        if !it.done {
            it.reset_free();
        }
        it
    }

    fn reset_free(&mut self) {
        self.free.clear();
        for (row, &p) in self.pivots.iter().enumerate() {
            for c in p + 1..self.n {
                if !self.pivots.contains(&c) {
                    self.free.push((row, c));
                }
            }
        }
        self.values = vec![0; self.free.len()];
    }

    /// Rows of the current reduced echelon form, `k x n`.
    fn current_rows(&self) -> Vec<u32> {
        let mut rows = vec![0u32; self.k * self.n];
        for (row, &p) in self.pivots.iter().enumerate() {
            rows[row * self.n + p] = 1;
        }
        for (&(row, c), &v) in self.free.iter().zip(&self.values) {
            rows[row * self.n + c] = v;
        }
        rows
    }

    fn advance(&mut self) {
        for v in self.values.iter_mut().rev() {
            *v += 1;
            if *v < self.q {
                return;
            }
            *v = 0;
        }
        // odometer wrapped: next pivot set
        let (k, n) = (self.k, self.n);
        let mut j = k;
        while j > 0 {
            j -= 1;
            if self.pivots[j] < n - k + j {
                self.pivots[j] += 1;
                for t in j + 1..k {
                    self.pivots[t] = self.pivots[t - 1] + 1;
                }
                self.reset_free();
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for GrassmannianIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let rows = self.current_rows();
        let m = Matrix::from_residues(self.q, self.k, self.n, rows).expect("residues in range");
        self.advance();
        Some(Subspace::from_basis(&m.transpose()).expect("echelon rows are independent"))
    }
}

/// Every k-subspace of F_q^n exactly once.
pub fn enumerate_grassmannian(k: usize, n: usize, q: u32, budget: u64) -> Result<GrassmannianIter> {
    check_prime(q)?;
    require_budget(&grassmannian_count(k, n, q), budget)?;
    Ok(GrassmannianIter::new(k, n, q))
}

/// One stratum count `|F_h^i(k,n)(F_q)|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub h: usize,
    pub k: usize,
    pub n: usize,
    pub i: usize,
    pub q: u32,
    pub count: BigUint,
}

/// Row-vector bases of all k-subspaces, flattened `k * n` residues each.
fn subspace_rows(k: usize, n: usize, q: u32, budget: u64) -> Result<Vec<Vec<u32>>> {
    Ok(enumerate_grassmannian(k, n, q, budget)?
        .map(|s| s.basis().transpose().residues().expect("prime field").to_vec())
        .collect())
}

/// Running echelon basis of the sum of a prefix of the tuple. Rows are
/// normalised at their pivot and reduced against all earlier rows, so a
/// single pass in insertion order reduces a new vector.
struct Echelon {
    n: usize,
    p: u64,
    rows: Vec<u32>,
    pivots: Vec<usize>,
    scratch: Vec<u32>,
}

impl Echelon {
    fn new(n: usize, p: u32) -> Self {
        Echelon { n, p: p as u64, rows: vec![], pivots: vec![], scratch: vec![0; n] }
    }

    fn dim(&self) -> usize {
        self.pivots.len()
    }

    fn truncate(&mut self, dim: usize) {
        self.pivots.truncate(dim);
        self.rows.truncate(dim * self.n);
    }

    fn insert(&mut self, v: &[u32]) {
        let (n, p) = (self.n, self.p);
        self.scratch.copy_from_slice(v);
        for (idx, &pc) in self.pivots.iter().enumerate() {
            let c = self.scratch[pc] as u64;
            if c == 0 {
                continue;
            }
            let row = &self.rows[idx * n..(idx + 1) * n];
            for (x, &r) in self.scratch.iter_mut().zip(row) {
                *x = ((*x as u64 + (p - c) * r as u64) % p) as u32;
            }
        }
        if let Some(pc) = self.scratch.iter().position(|&x| x != 0) {
            let inv = mod_inverse(self.scratch[pc] as u64, p);
            for x in self.scratch.iter_mut() {
                *x = (*x as u64 * inv % p) as u32;
            }
            self.rows.extend_from_slice(&self.scratch);
            self.pivots.push(pc);
        }
    }

    fn add_subspace(&mut self, rows: &[u32]) {
        for v in rows.chunks(self.n) {
            self.insert(v);
        }
    }
}

/// What the depth-first tuple walk should record.
#[derive(Clone, Copy)]
enum Target {
    /// Every sum dimension.
    All,
    /// Only tuples whose sum has this dimension; prunes hopeless prefixes.
    Exactly(usize),
}

struct Walk<'a> {
    subs: &'a [Vec<u32>],
    h: usize,
    k: usize,
    target: Target,
    chosen: Vec<usize>,
    echelon: Echelon,
    hist: Vec<u64>,
}

impl Walk<'_> {
    fn run(&mut self, depth: usize) {
        let dim = self.echelon.dim();
        if depth == self.h {
            self.hist[dim] += 1;
            return;
        }
        if let Target::Exactly(i) = self.target {
            // sum dimension only grows, and by at most k per subspace
            if dim > i || dim + (self.h - depth) * self.k < i {
                return;
            }
        }
        for idx in 0..self.subs.len() {
            if self.chosen.contains(&idx) {
                continue;
            }
            self.chosen.push(idx);
            self.echelon.add_subspace(&self.subs[idx]);
            self.run(depth + 1);
            self.echelon.truncate(dim);
            self.chosen.pop();
        }
    }
}

/// Histogram over sum dimension of ordered h-tuples of distinct
/// k-subspaces of F_q^n. Index `i` holds the count for stratum `i`.
fn tuple_histogram(h: usize, k: usize, n: usize, q: u32, target: Target, budget: u64) -> Result<Vec<u64>> {
    check_prime(q)?;
    let total = grassmannian_count(k, n, q);
    require_budget(&total.pow(h as u32), budget)?;
    let subs = subspace_rows(k, n, q, budget)?;
    let partial: Vec<Vec<u64>> = (0..subs.len())
        .into_par_iter()
        .map(|first| {
            let mut walk = Walk {
                subs: &subs,
                h,
                k,
                target,
                chosen: vec![first],
                echelon: Echelon::new(n, q),
                hist: vec![0; n + 1],
            };
            walk.echelon.add_subspace(&subs[first]);
            walk.run(1);
            walk.hist
        })
        .collect();
    let mut hist = vec![0u64; n + 1];
    for p in partial {
        for (acc, v) in hist.iter_mut().zip(p) {
            *acc += v;
        }
    }
    Ok(hist)
}

/// Counts `|F_h^i(k,n)(F_q)|` by enumeration.
pub fn stratum_count(desc: &StratumDescriptor, q: u32, budget: u64) -> Result<CensusRow> {
    let StratumDescriptor { h, k, n, i } = *desc;
    let hist = tuple_histogram(h, k, n, q, Target::Exactly(i), budget)?;
    Ok(CensusRow { h, k, n, i, q, count: BigUint::from(hist[i]) })
}

/// All stratum counts for `(h, k, n, q)`, one row per `i` in `0..=n`.
pub fn census_rows(h: usize, k: usize, n: usize, q: u32, budget: u64) -> Result<Vec<CensusRow>> {
    StratumDescriptor::new(h, k, n, 0)?;
    let hist = tuple_histogram(h, k, n, q, Target::All, budget)?;
    Ok(hist.into_iter().enumerate().map(|(i, c)| CensusRow { h, k, n, i, q, count: BigUint::from(c) }).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionReport {
    pub rows: Vec<CensusRow>,
    pub total: BigUint,
    /// `N (N - 1) ... (N - h + 1)` with `N = [n choose k]_q`.
    pub expected: BigUint,
    /// Strata with a nonzero count that the emptiness predicate calls empty.
    pub unexpected_strata: Vec<usize>,
    pub pass: bool,
}

/// Checks that the strata partition the ordered configuration space.
pub fn partition_check(h: usize, k: usize, n: usize, q: u32, budget: u64) -> Result<PartitionReport> {
    let rows = census_rows(h, k, n, q, budget)?;
    let total: BigUint = rows.iter().map(|r| &r.count).sum();
    let expected = falling_factorial(&grassmannian_count(k, n, q), h);
    let mut unexpected_strata = Vec::new();
    for r in &rows {
        let desc = StratumDescriptor::new(h, k, n, r.i)?;
        if !r.count.is_zero() && !desc.is_nonempty() {
            unexpected_strata.push(r.i);
        }
    }
    let pass = total == expected && unexpected_strata.is_empty();
    Ok(PartitionReport { rows, total, expected, unexpected_strata, pass })
}

/// Interpolated point-count polynomial of one stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountFit {
    pub desc: StratumDescriptor,
    pub polynomial: CountPolynomial,
    pub degree: Option<usize>,
    /// Complex dimension of the stratum.
    pub dimension: u64,
    pub matches_dimension: bool,
    pub samples: Vec<(u32, BigUint)>,
    pub held_out: (u32, BigUint),
}

/// The first `points` primes, starting from [`DEFAULT_Q_LIST`].
pub fn default_q_list(points: usize) -> Vec<u32> {
    let mut out: Vec<u32> = DEFAULT_Q_LIST.iter().copied().take(points).collect();
    while out.len() < points {
        let last = *out.last().unwrap_or(&1);
        out.push(next_prime(last as u64) as u32);
    }
    out
}

/// Interpolates stratum counts over the given primes and validates the
/// interpolant at the next prime after the largest one.
pub fn fit_count_polynomial(desc: &StratumDescriptor, q_list: &[u32], budget: u64) -> Result<CountFit> {
    let dimension = desc.dimension()?;
    let mut qs = q_list.to_vec();
    qs.sort_unstable();
    qs.dedup();
    for &q in &qs {
        check_prime(q)?;
    }
    let needed = dimension as usize + 1;
    if qs.len() < needed {
        return Err(Error::InsufficientPoints { needed, got: qs.len() });
    }
    let samples: Vec<(u32, BigUint)> =
        qs.iter().map(|&q| stratum_count(desc, q, budget).map(|row| (q, row.count))).collect::<Result<_>>()?;
    let points: Vec<(BigRational, BigRational)> = samples
        .iter()
        .map(|(q, c)| (BigRational::from_integer((*q).into()), BigRational::from_integer(c.clone().into())))
        .collect();
    let polynomial = interpolate(&points);

    let hold = next_prime(*qs.last().expect("nonempty") as u64) as u32;
    let observed = stratum_count(desc, hold, budget)?.count;
    let predicted = polynomial.eval(&BigRational::from_integer(hold.into()));
    if predicted != BigRational::from_integer(observed.clone().into()) {
        return Err(Error::NonPolynomialFit {
            q: hold,
            observed: observed.to_string(),
            predicted: predicted.to_string(),
        });
    }
    let degree = polynomial.degree();
    Ok(CountFit {
        desc: *desc,
        matches_dimension: degree == Some(dimension as usize),
        polynomial,
        degree,
        dimension,
        samples,
        held_out: (hold, observed),
    })
}
