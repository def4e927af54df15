//! The presentation of the pure braid group of the 2-sphere,
//!
//! ```text
//! < α_ij, 1 <= i < j <= m | (YB3)_m, (YB4)_m, D_m^2 = 1 >,   m = h - 1,
//! ```
//!
//! with `D_m = α_12 (α_13 α_23) (α_14 α_24 α_34) ... (α_1m ... α_{m-1,m})`,
//! plus the tools used to probe it: abelianization and coset enumeration.

mod todd_coxeter;
mod word;

use std::fmt;

use num_bigint::BigInt;

pub use todd_coxeter::{coset_enumeration, CosetEnumeration};
pub use word::{free_reduce, Generator, Letter, Word};

use crate::error::{Error, Result};
use crate::snf::{smith_normal_form, IntMatrix, SmithForm};

/// Default coset budget for [`todd_coxeter`].
pub const DEFAULT_MAX_COSETS: usize = 100_000;

fn a(i: usize, j: usize) -> Word {
    Word::gen(i, j)
}

/// `D_m`; the empty word for `m <= 1`.
pub fn d_element(m: usize) -> Word {
    let mut letters = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for j in 2..=m {
        for i in 1..j {
            letters.extend(a(i, j).0);
        }
    }
    Word(letters)
}

/// Two relators `w1 w2^-1`, `w2 w3^-1` per triple `i < j < k <= m`, where
/// `w1 = α_ij α_ik α_jk`, `w2 = α_ik α_jk α_ij`, `w3 = α_jk α_ij α_ik`.
pub fn yb3_relators(m: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            for k in j + 1..=m {
                let (x, y, z) = (a(i, j), a(i, k), a(j, k));
                let w1 = x.concat(&y).concat(&z);
                let w2 = y.concat(&z).concat(&x);
                let w3 = z.concat(&x).concat(&y);
                out.push(free_reduce(&w1.concat(&w2.inverse())));
                out.push(free_reduce(&w2.concat(&w3.inverse())));
            }
        }
    }
    out
}

/// Four commutators per quadruple `i < j < k < l <= m`:
/// `[α_kl, α_ij]`, `[α_il, α_jk]`, `[α_jl, α_jk^-1 α_ik α_jk]`,
/// `[α_jl, α_kl α_ik α_kl^-1]`.
pub fn yb4_relators(m: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            for k in j + 1..=m {
                for l in k + 1..=m {
                    let conj_jk = a(j, k).inverse().concat(&a(i, k)).concat(&a(j, k));
                    let conj_kl = a(k, l).concat(&a(i, k)).concat(&a(k, l).inverse());
                    for r in [
                        Word::commutator(&a(k, l), &a(i, j)),
                        Word::commutator(&a(i, l), &a(j, k)),
                        Word::commutator(&a(j, l), &conj_jk),
                        Word::commutator(&a(j, l), &conj_kl),
                    ] {
                        out.push(free_reduce(&r));
                    }
                }
            }
        }
    }
    out
}

/// Where a relator comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelatorKind {
    YangBaxter3,
    YangBaxter4,
    DSquared,
}

/// Finitely presented group on the generators `α_ij`, `1 <= i < j <= m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    m: usize,
    generators: Vec<Generator>,
    relators: Vec<(RelatorKind, Word)>,
}

impl Presentation {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Generators in lexicographic order of `(i, j)`.
    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relators(&self) -> impl Iterator<Item = &Word> {
        self.relators.iter().map(|(_, w)| w)
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn count_of(&self, kind: RelatorKind) -> usize {
        self.relators.iter().filter(|(k, _)| *k == kind).count()
    }

    fn index_of(&self, g: Generator) -> usize {
        self.generators.binary_search(&g).expect("generator declared")
    }

    /// Relator exponent sums: one row per relator, one column per generator.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let cols = self.generators.len();
        let mut vals = vec![BigInt::from(0); self.relators.len() * cols];
        for (r, (_, w)) in self.relators.iter().enumerate() {
            for l in w.letters() {
                vals[r * cols + self.index_of(l.generator)] += l.exponent();
            }
        }
        IntMatrix::new(self.relators.len(), cols, vals).expect("shape matches")
    }

    /// Same presentation with relators permuted.
    pub fn with_relator_order(&self, order: &[usize]) -> Result<Presentation> {
        let mut seen = vec![false; self.relators.len()];
        if order.len() != seen.len() || order.iter().any(|&t| t >= seen.len() || std::mem::replace(&mut seen[t], true))
        {
            return Err(Error::ShapeMismatch("relator order must be a permutation".into()));
        }
        Ok(Presentation { relators: order.iter().map(|&t| self.relators[t].clone()).collect(), ..self.clone() })
    }

    /// Plain text: `g i j` per generator, then one relator per line as
    /// space-separated tokens (`a12`, `a13^-1`); the empty word is `1`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for g in &self.generators {
            s.push_str(&format!("g {} {}\n", g.i(), g.j()));
        }
        for (_, w) in &self.relators {
            s.push_str(&format!("{w}\n"));
        }
        s
    }

    /// Reads back the text produced by [`Presentation::to_text`]. Relator
    /// kinds are not recorded in the text, so every relator is tagged by
    /// shape: length 6 as YB3, commutator-shaped as YB4, the rest as D^2.
    pub fn parse_text(text: &str) -> Result<(Vec<Generator>, Vec<Word>)> {
        let mut gens = Vec::new();
        let mut rels = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(rest) = line.strip_prefix("g ") {
                let nums: Vec<usize> = rest
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| Error::Malformed(format!("bad generator line `{line}`"))))
                    .collect::<Result<_>>()?;
                if nums.len() != 2 {
                    return Err(Error::Malformed(format!("bad generator line `{line}`")));
                }
                gens.push(Generator::new(nums[0], nums[1])?);
            } else if line == "1" {
                rels.push(Word::empty());
            } else {
                let letters = line.split_whitespace().map(str::parse).collect::<Result<Vec<Letter>>>()?;
                if let Some(l) = letters.iter().find(|l| !gens.contains(&l.generator)) {
                    return Err(Error::Malformed(format!("undeclared generator {}", l.generator)));
                }
                rels.push(Word(letters));
            }
        }
        Ok((gens, rels))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Presentation of the fundamental group of F_h(CP^1): generators `α_ij`
/// with `j <= h - 1`, relators YB3, YB4 and `D_{h-1}^2`.
pub fn sphere_pure_braid_presentation(h: usize) -> Result<Presentation> {
    if h < 2 {
        return Err(Error::InvalidDescriptor(format!("need at least 2 strands, got {h}")));
    }
    let m = h - 1;
    let mut generators = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            generators.push(Generator::new(i, j)?);
        }
    }
    let d = d_element(m);
    let mut relators: Vec<(RelatorKind, Word)> = Vec::new();
    relators.extend(yb3_relators(m).into_iter().map(|w| (RelatorKind::YangBaxter3, w)));
    relators.extend(yb4_relators(m).into_iter().map(|w| (RelatorKind::YangBaxter4, w)));
    relators.push((RelatorKind::DSquared, free_reduce(&d.concat(&d))));
    Ok(Presentation { m, generators, relators })
}

/// Abelianization `Z^gens / rowspace(exponent matrix)` via Smith normal form.
pub fn abelianization(p: &Presentation) -> SmithForm {
    smith_normal_form(&p.exponent_matrix())
}

/// Order of the presented group, by enumerating cosets of the trivial subgroup.
pub fn todd_coxeter(p: &Presentation, max_cosets: usize) -> CosetEnumeration {
    let rels: Vec<Vec<(usize, bool)>> =
        p.relators().map(|w| w.letters().iter().map(|l| (p.index_of(l.generator), l.inverse)).collect()).collect();
    coset_enumeration(p.generators.len(), &rels, max_cosets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
    }

    #[test]
    fn d_element_examples() {
        assert!(d_element(1).is_empty());
        assert_eq!(d_element(2), a(1, 2));
        assert_eq!(d_element(3).to_string(), "a12 a13 a23");
        let d4 = d_element(4);
        assert_eq!(d4.len(), 6);
        assert_eq!(d4.letters().last().unwrap().generator, Generator::new(3, 4).unwrap());
        for m in 2..8 {
            assert_eq!(d_element(m).len(), m * (m - 1) / 2);
        }
    }

    #[test]
    fn relator_counts() {
        assert_eq!(yb3_relators(3).len(), 2);
        assert_eq!(yb3_relators(4).len(), 8);
        assert!(yb3_relators(3).iter().all(|w| w.len() == 6));
        assert!(yb4_relators(3).is_empty());
        assert_eq!(yb4_relators(4).len(), 4);
        assert_eq!(yb4_relators(5).len(), 20);
        for m in 1..8 {
            let p = sphere_pure_braid_presentation(m + 1).unwrap();
            assert_eq!(p.count_of(RelatorKind::YangBaxter3), 2 * binom(m, 3));
            assert_eq!(p.count_of(RelatorKind::YangBaxter4), 4 * binom(m, 4));
            assert_eq!(p.count_of(RelatorKind::DSquared), 1);
            assert_eq!(p.generators().len(), binom(m, 2));
        }
        assert!(sphere_pure_braid_presentation(1).is_err());
    }

    #[test]
    fn yb3_words_for_single_triple() {
        let r = yb3_relators(3);
        assert_eq!(r[0].to_string(), "a12 a13 a23 a12^-1 a23^-1 a13^-1");
        assert_eq!(r[1].to_string(), "a13 a23 a12 a13^-1 a12^-1 a23^-1");
    }

    #[test]
    fn small_presentations() {
        let p2 = sphere_pure_braid_presentation(2).unwrap();
        assert!(p2.generators().is_empty());
        assert!(p2.relators().all(Word::is_empty));
        let p3 = sphere_pure_braid_presentation(3).unwrap();
        assert_eq!(p3.relators().map(ToString::to_string).collect::<Vec<_>>(), vec!["a12 a12"]);
        let p4 = sphere_pure_braid_presentation(4).unwrap();
        assert_eq!(p4.generators().len(), 3);
        assert_eq!(p4.relator_count(), 3);
        assert_eq!(p4.relators().last().unwrap().to_string(), "a12 a13 a23 a12 a13 a23");
    }

    #[test]
    fn abelianization_examples() {
        let two = BigUint::from(2u32);
        let ab = |h| abelianization(&sphere_pure_braid_presentation(h).unwrap());
        assert_eq!(ab(2), SmithForm { divisors: vec![], free_rank: 0 });
        assert_eq!(ab(3), SmithForm { divisors: vec![two.clone()], free_rank: 0 });
        assert_eq!(ab(4), SmithForm { divisors: vec![two.clone()], free_rank: 2 });
        // Z^{C(m,2)-1} + Z/2 in general
        for h in 4..8 {
            assert_eq!(ab(h), SmithForm { divisors: vec![two.clone()], free_rank: binom(h - 1, 2) - 1 });
        }
    }

    #[test]
    fn yang_baxter_relators_have_zero_exponent_sums() {
        for h in 2..8 {
            let p = sphere_pure_braid_presentation(h).unwrap();
            let e = p.exponent_matrix();
            for (r, (kind, _)) in p.relators.iter().enumerate() {
                for c in 0..e.cols() {
                    let v = e.get(r, c);
                    match kind {
                        RelatorKind::DSquared => assert_eq!(*v, BigInt::from(2)),
                        _ => assert_eq!(*v, BigInt::from(0)),
                    }
                }
            }
        }
    }

    #[test]
    fn coset_enumeration_small_h() {
        let tc = |h, max| todd_coxeter(&sphere_pure_braid_presentation(h).unwrap(), max);
        assert_eq!(tc(2, 10), CosetEnumeration::FiniteOrder(1));
        assert_eq!(tc(3, 100), CosetEnumeration::FiniteOrder(2));
        assert_eq!(tc(4, 5_000), CosetEnumeration::Exceeded);
    }

    #[test]
    fn h5_does_not_close_within_default_budget() {
        let p = sphere_pure_braid_presentation(5).unwrap();
        assert_eq!(todd_coxeter(&p, DEFAULT_MAX_COSETS), CosetEnumeration::Exceeded);
    }

    #[test]
    fn todd_coxeter_ignores_relator_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for h in [2usize, 3] {
            let p = sphere_pure_braid_presentation(h).unwrap();
            let base = todd_coxeter(&p, 1000);
            let mut order: Vec<usize> = (0..p.relator_count()).collect();
            for _ in 0..5 {
                order.shuffle(&mut rng);
                assert_eq!(todd_coxeter(&p.with_relator_order(&order).unwrap(), 1000), base);
            }
        }
        let p = sphere_pure_braid_presentation(5).unwrap();
        let mut order: Vec<usize> = (0..p.relator_count()).collect();
        order.shuffle(&mut rng);
        assert_eq!(todd_coxeter(&p.with_relator_order(&order).unwrap(), 2_000), CosetEnumeration::Exceeded);
    }

    #[test]
    fn text_roundtrip() {
        let p = sphere_pure_braid_presentation(5).unwrap();
        let text = p.to_text();
        assert!(text.starts_with("g 1 2\ng 1 3\n"));
        let (gens, rels) = Presentation::parse_text(&text).unwrap();
        assert_eq!(gens, p.generators());
        assert_eq!(rels, p.relators().cloned().collect::<Vec<_>>());
        let (g2, r2) = Presentation::parse_text(&sphere_pure_braid_presentation(2).unwrap().to_text()).unwrap();
        assert!(g2.is_empty());
        assert_eq!(r2, vec![Word::empty()]);
        assert!(Presentation::parse_text("g 1 2\na13\n").is_err());
    }
}
