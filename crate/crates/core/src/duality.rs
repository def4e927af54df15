//! Annihilators. The dual space is identified with row vectors under the
//! standard pairing, so `Ann(H)` is the kernel of `basis(H)^T`, again stored
//! as a column subspace of the same ambient space.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::census::{enumerate_grassmannian, grassmannian_count};
use crate::error::{Error, Result};
use crate::grassmann::{Configuration, Subspace};
use crate::strata::{dual_stratum_of, stratum_of, Pi1Result, StratumDescriptor};

pub fn annihilator(h: &Subspace) -> Subspace {
    Subspace::span(&h.basis().transpose().kernel())
}

/// Applies [`annihilator`] to every member; the result lives in Gr(n - k, n).
pub fn dualize_configuration(config: &Configuration) -> Configuration {
    Configuration::new(config.subspaces().iter().map(annihilator).collect()).expect("annihilator is injective")
}

/// Fundamental group of the space of `h` distinct k-subspaces whose
/// intersection has dimension `i`, through its identification with the sum
/// stratum F_h^{n-i}(n-k, n).
pub fn dual_fundamental_group(h: usize, k: usize, n: usize, i: usize) -> Result<Pi1Result> {
    if i > n || k > n {
        return Err(Error::InvalidDescriptor(format!("need i, k <= n, got i={i}, k={k}, n={n}")));
    }
    StratumDescriptor::new(h, n - k, n, n - i)?.fundamental_group()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    /// `|F_h^i(k,n)(F_q)|`, tuples in Gr(k, n) with sum of dimension `i`.
    pub sum_side: BigUint,
    /// Tuples in Gr(n-k, n) whose intersection has dimension `n - i`.
    pub intersection_side: BigUint,
    /// Whether `Ann` maps Gr(k,n)(F_q) bijectively onto Gr(n-k,n)(F_q).
    pub annihilator_bijective: bool,
    pub pass: bool,
}

/// Counts both sides of the annihilator correspondence independently over
/// F_q: sums are measured in Gr(k, n), intersections in Gr(n - k, n).
pub fn verify_duality_counts(k: usize, n: usize, h: usize, i: usize, q: u32, budget: u64) -> Result<DualityReport> {
    StratumDescriptor::new(h, k, n, i)?;
    let primal: Vec<Subspace> = enumerate_grassmannian(k, n, q, budget)?.collect();
    let dual: Vec<Subspace> = enumerate_grassmannian(n - k, n, q, budget)?.collect();
    let visits = grassmannian_count(k, n, q).pow(h as u32);
    if visits > BigUint::from(budget) {
        return Err(Error::BudgetExceeded { needed: u128::try_from(visits).unwrap_or(u128::MAX), budget });
    }

    let sum_side = count_tuples(&primal, h, |c| stratum_of(c) == i);
    let intersection_side = count_tuples(&dual, h, |c| dual_stratum_of(c) == n - i);

    let dual_set: HashSet<&Subspace> = dual.iter().collect();
    let image: HashSet<Subspace> = primal.iter().map(annihilator).collect();
    let annihilator_bijective =
        image.len() == primal.len() && image.len() == dual_set.len() && image.iter().all(|s| dual_set.contains(s));

    let pass = annihilator_bijective && sum_side == intersection_side;
    Ok(DualityReport { sum_side, intersection_side, annihilator_bijective, pass })
}

fn count_tuples(subs: &[Subspace], h: usize, pred: impl Fn(&Configuration) -> bool) -> BigUint {
    let mut count = BigUint::zero();
    let mut chosen: Vec<usize> = Vec::with_capacity(h);
    fn walk(
        subs: &[Subspace],
        h: usize,
        chosen: &mut Vec<usize>,
        pred: &dyn Fn(&Configuration) -> bool,
        count: &mut BigUint,
    ) {
        if chosen.len() == h {
            let config = Configuration::new(chosen.iter().map(|&j| subs[j].clone()).collect())
                .expect("distinct indices give distinct subspaces");
            if pred(&config) {
                *count += 1u32;
            }
            return;
        }
        for j in 0..subs.len() {
            if !chosen.contains(&j) {
                chosen.push(j);
                walk(subs, h, chosen, pred, count);
                chosen.pop();
            }
        }
    }
    walk(subs, h, &mut chosen, &pred, &mut count);
    count
}
