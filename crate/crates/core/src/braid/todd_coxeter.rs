//! Coset enumeration over the trivial subgroup (HLT strategy with
//! coincidence processing).

/// Outcome of a coset enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosetEnumeration {
    /// The table closed with this many cosets: the group order.
    FiniteOrder(usize),
    /// More than the allowed number of live cosets were needed.
    Exceeded,
}

const NONE: usize = usize::MAX;

/// Columns are `2g` for generator `g` and `2g + 1` for its inverse.
struct Table {
    cols: usize,
    rows: Vec<usize>,
    parent: Vec<usize>,
    live: usize,
    max_live: usize,
    queue: Vec<usize>,
}

struct Overflow;

impl Table {
    fn new(ngens: usize, max_live: usize) -> Self {
        let cols = 2 * ngens;
        Table { cols, rows: vec![NONE; cols], parent: vec![0], live: 1, max_live, queue: vec![] }
    }

    fn get(&self, c: usize, x: usize) -> usize {
        self.rows[c * self.cols + x]
    }

    fn put(&mut self, c: usize, x: usize, d: usize) {
        self.rows[c * self.cols + x] = d;
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<usize, Overflow> {
        if self.live >= self.max_live {
            return Err(Overflow);
        }
        let d = self.parent.len();
        self.parent.push(d);
        self.rows.extend(std::iter::repeat_n(NONE, self.cols));
        self.live += 1;
        self.put(c, x, d);
        self.put(d, x ^ 1, c);
        Ok(d)
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = c;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, kill) = (a.min(b), a.max(b));
        self.parent[kill] = keep;
        self.live -= 1;
        self.queue.push(kill);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        let mut head = 0;
        while head < self.queue.len() {
            let dead = self.queue[head];
            head += 1;
            for x in 0..self.cols {
                let d = self.get(dead, x);
                if d == NONE {
                    continue;
                }
                self.put(d, x ^ 1, NONE);
                let mu = self.rep(dead);
                let nu = self.rep(d);
                if self.get(mu, x) != NONE {
                    let t = self.get(mu, x);
                    self.merge(nu, t);
                } else if self.get(nu, x ^ 1) != NONE {
                    let t = self.get(nu, x ^ 1);
                    self.merge(mu, t);
                } else {
                    self.put(mu, x, nu);
                    self.put(nu, x ^ 1, mu);
                }
            }
        }
        self.queue.clear();
    }

    /// Traces `word` from `start` in both directions, defining new cosets as
    /// needed, and records the resulting deduction or coincidence.
    fn scan_and_fill(&mut self, start: usize, word: &[usize]) -> Result<(), Overflow> {
        let mut f = start;
        let mut b = start;
        let mut i: isize = 0;
        let mut j: isize = word.len() as isize - 1;
        loop {
            while i <= j && self.get(f, word[i as usize]) != NONE {
                f = self.get(f, word[i as usize]);
                i += 1;
            }
            if i > j {
                if f != start {
                    self.coincidence(f, start);
                }
                return Ok(());
            }
            while j >= i && self.get(b, word[j as usize] ^ 1) != NONE {
                b = self.get(b, word[j as usize] ^ 1);
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                let x = word[i as usize];
                self.put(f, x, b);
                self.put(b, x ^ 1, f);
                return Ok(());
            }
            self.define(f, word[i as usize])?;
        }
    }
}

/// Enumerates cosets of the trivial subgroup of `<gens | relators>`.
///
/// Letters are `(generator index, inverted)`. Stops with
/// [`CosetEnumeration::Exceeded`] once `max_cosets` live cosets would be
/// exceeded.
pub fn coset_enumeration(ngens: usize, relators: &[Vec<(usize, bool)>], max_cosets: usize) -> CosetEnumeration {
    assert!(max_cosets >= 1, "need room for at least the identity coset");
    let words: Vec<Vec<usize>> = relators
        .iter()
        .map(|r| r.iter().map(|&(g, inv)| 2 * g + inv as usize).collect::<Vec<_>>())
        .map(cyclically_reduce)
        .filter(|w| !w.is_empty())
        .collect();
    let mut table = Table::new(ngens, max_cosets);
    let mut c = 0;
    while c < table.parent.len() {
        if table.is_live(c) {
            for w in &words {
                if !table.is_live(c) {
                    break;
                }
                if table.scan_and_fill(c, w).is_err() {
                    return CosetEnumeration::Exceeded;
                }
            }
            if table.is_live(c) {
                for x in 0..table.cols {
                    if table.get(c, x) == NONE && table.define(c, x).is_err() {
                        return CosetEnumeration::Exceeded;
                    }
                }
            }
        }
        c += 1;
    }
    CosetEnumeration::FiniteOrder(table.live)
}

fn cyclically_reduce(word: Vec<usize>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(word.len());
    for x in word {
        if out.last() == Some(&(x ^ 1)) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    let mut start = 0;
    let mut end = out.len();
    while end - start >= 2 && out[start] == out[end - 1] ^ 1 {
        start += 1;
        end -= 1;
    }
    out[start..end].to_vec()
}
