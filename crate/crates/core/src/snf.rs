//! Smith normal form of integer matrices, used to read off the structure of
//! finitely generated abelian groups `Z^cols / rowspace(M)`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn from_i64(rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols, "wrong number of entries");
        IntMatrix { rows, cols, entries: values.iter().map(|&v| BigInt::from(v)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    fn at(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.entries[r * self.cols + c]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.entries.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.entries.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// row[target] -= factor * row[src]
    fn row_axpy(&mut self, target: usize, src: usize, factor: &BigInt) {
        for c in 0..self.cols {
            let delta = factor * self.get(src, c);
            *self.at(target, c) -= delta;
        }
    }

    fn col_axpy(&mut self, target: usize, src: usize, factor: &BigInt) {
        for r in 0..self.rows {
            let delta = factor * self.get(r, src);
            *self.at(r, target) -= delta;
        }
    }
}

/// Invariant factors of the cokernel `Z^cols / rowspace`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Elementary divisors greater than one, each dividing the next.
    pub divisors: Vec<BigUint>,
    pub free_rank: usize,
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // pivot: nonzero entry of least absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                let v = a.get(r, c);
                if !v.is_zero() && best.is_none_or(|(br, bc)| v.abs() < a.get(br, bc).abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        a.swap_rows(t, pr);
        a.swap_cols(t, pc);

        loop {
            let mut dirty = false;
            for r in t + 1..rows {
                if a.get(r, t).is_zero() {
                    continue;
                }
                let q = a.get(r, t).div_floor(a.get(t, t));
                a.row_axpy(r, t, &q);
                if !a.get(r, t).is_zero() {
                    // remainder smaller than the pivot: promote it
                    a.swap_rows(t, r);
                    dirty = true;
                }
            }
            for c in t + 1..cols {
                if a.get(t, c).is_zero() {
                    continue;
                }
                let q = a.get(t, c).div_floor(a.get(t, t));
                a.col_axpy(c, t, &q);
                if !a.get(t, c).is_zero() {
                    a.swap_cols(t, c);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide the whole trailing block
            let pivot = a.get(t, t).clone();
            let offender = (t + 1..rows)
                .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                .find(|&(r, c)| !a.get(r, c).is_multiple_of(&pivot));
            match offender {
                Some((r, _)) => {
                    let minus_one = BigInt::from(-1);
                    a.row_axpy(t, r, &minus_one);
                }
                None => break,
            }
        }
        diag.push(a.get(t, t).abs());
    }
    let rank = diag.len();
    let divisors =
        diag.into_iter().filter(|d| *d > BigInt::from(1)).map(|d| d.to_biguint().expect("nonnegative")).collect();
    SmithForm { divisors, free_rank: cols - rank }
}
