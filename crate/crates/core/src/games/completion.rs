//! Partial Latin squares and completion by backtracking.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, LineKind, Result};
use crate::quasigroup::{LatinSquare, MAX_ORDER};

/// Symbol set over `0..256`.
#[derive(Clone, Copy, Default, PartialEq, Eq)]
struct SymSet([u64; 4]);

impl SymSet {
    fn full(n: usize) -> Self {
        let mut s = SymSet::default();
        for x in 0..n {
            s.insert(x);
        }
        s
    }

    fn contains(&self, x: usize) -> bool {
        self.0[x >> 6] >> (x & 63) & 1 == 1
    }

    fn insert(&mut self, x: usize) {
        self.0[x >> 6] |= 1 << (x & 63);
    }

    fn remove(&mut self, x: usize) {
        self.0[x >> 6] &= !(1 << (x & 63));
    }

    fn minus(self, other: SymSet) -> SymSet {
        SymSet(std::array::from_fn(|i| self.0[i] & !other.0[i]))
    }

    fn union(self, other: SymSet) -> SymSet {
        SymSet(std::array::from_fn(|i| self.0[i] | other.0[i]))
    }

    fn len(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn iter(self) -> impl Iterator<Item = usize> {
        (0..4).flat_map(move |w| {
            let mut word = self.0[w];
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            })
        })
    }
}

/// An order-`n` square with some cells unknown. Known cells never repeat a
/// symbol within a row or column.
#[derive(Clone, PartialEq, Eq)]
pub struct PartialLatinSquare {
    n: usize,
    cells: Vec<Option<u8>>,
    rows: Vec<SymSet>,
    cols: Vec<SymSet>,
}

impl PartialLatinSquare {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_ORDER {
            return Err(Error::InvalidOrder(n));
        }
        Ok(Self {
            n,
            cells: vec![None; n * n],
            rows: vec![SymSet::default(); n],
            cols: vec![SymSet::default(); n],
        })
    }

    pub fn from_square(sq: &LatinSquare) -> Self {
        let n = sq.order();
        let mut p = Self::new(n).expect("valid order");
        for r in 0..n {
            for c in 0..n {
                p.set(r, c, sq.get(r, c)).expect("Latin square is consistent");
            }
        }
        p
    }

    /// Builds from rows of optional symbols, rejecting any repetition.
    pub fn from_rows(rows: &[Vec<Option<u8>>]) -> Result<Self> {
        let mut p = Self::new(rows.len())?;
        for (r, row) in rows.iter().enumerate() {
            if row.len() != p.n {
                return Err(Error::NotSquare {
                    row: r,
                    len: row.len(),
                    expected: p.n,
                });
            }
            for (c, s) in row.iter().enumerate() {
                if let Some(s) = *s {
                    p.set(r, c, s)?;
                }
            }
        }
        Ok(p)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> Option<u8> {
        self.cells[r * self.n + c]
    }

    /// Fills an unknown cell. Errors if the cell is already known with another
    /// symbol or the symbol already occurs in the row or column.
    pub fn set(&mut self, r: usize, c: usize, s: u8) -> Result<()> {
        let n = self.n;
        if r >= n || c >= n || s as usize >= n {
            return Err(Error::SymbolOutOfRange {
                row: r,
                col: c,
                symbol: s as usize,
                order: n,
            });
        }
        match self.cells[r * n + c] {
            Some(old) if old == s => return Ok(()),
            Some(_) => {
                return Err(Error::NotLatin {
                    line: LineKind::Row,
                    index: r,
                    symbol: s as usize,
                })
            }
            None => {}
        }
        if self.rows[r].contains(s as usize) {
            return Err(Error::NotLatin {
                line: LineKind::Row,
                index: r,
                symbol: s as usize,
            });
        }
        if self.cols[c].contains(s as usize) {
            return Err(Error::NotLatin {
                line: LineKind::Column,
                index: c,
                symbol: s as usize,
            });
        }
        self.cells[r * n + c] = Some(s);
        self.rows[r].insert(s as usize);
        self.cols[c].insert(s as usize);
        Ok(())
    }

    /// [`set`](Self::set) that reports a conflict as `false` instead of an
    /// error.
    pub fn try_set(&mut self, r: usize, c: usize, s: u8) -> bool {
        self.set(r, c, s).is_ok()
    }

    fn clear(&mut self, r: usize, c: usize) {
        if let Some(s) = self.cells[r * self.n + c].take() {
            self.rows[r].remove(s as usize);
            self.cols[c].remove(s as usize);
        }
    }

    pub fn known_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.known_count() == self.n * self.n
    }

    /// Number of known cells that agree with `truth`.
    pub fn matching_cells(&self, truth: &LatinSquare) -> usize {
        let n = self.n;
        (0..n * n)
            .filter(|&i| self.cells[i] == Some(truth.get(i / n, i % n)))
            .count()
    }

    fn to_square(&self) -> LatinSquare {
        let cells = self.cells.iter().map(|c| c.expect("complete")).collect();
        LatinSquare::from_cells_unchecked(self.n, cells)
    }
}

impl fmt::Debug for PartialLatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.n {
            for c in 0..self.n {
                match self.get(r, c) {
                    Some(s) => write!(f, "{s:>4}")?,
                    None => f.write_str("   .")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Outcome of a completion search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completion {
    /// Exactly one completion exists.
    Unique(LatinSquare),
    /// At least two completions exist; one of them is returned.
    Multiple(LatinSquare),
    /// No completion exists.
    Unsat,
    /// The node budget ran out before the search was decided.
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompletionKind {
    Unique,
    Multiple,
    Unsat,
    Undecided,
}

impl Completion {
    pub fn square(&self) -> Option<&LatinSquare> {
        match self {
            Completion::Unique(s) | Completion::Multiple(s) => Some(s),
            _ => None,
        }
    }

    pub fn kind(&self) -> CompletionKind {
        match self {
            Completion::Unique(_) => CompletionKind::Unique,
            Completion::Multiple(_) => CompletionKind::Multiple,
            Completion::Unsat => CompletionKind::Unsat,
            Completion::Undecided => CompletionKind::Undecided,
        }
    }
}

pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

/// [`complete_latin_square_with_budget`] with [`DEFAULT_NODE_BUDGET`].
pub fn complete_latin_square(p: &PartialLatinSquare) -> Completion {
    complete_latin_square_with_budget(p, DEFAULT_NODE_BUDGET)
}

/// Backtracking search, always branching on the empty cell with the fewest
/// candidates. Stops after two completions or `budget` nodes.
pub fn complete_latin_square_with_budget(p: &PartialLatinSquare, budget: u64) -> Completion {
    let mut s = Search {
        p: p.clone(),
        full: SymSet::full(p.n),
        nodes: 0,
        budget,
        found: Vec::new(),
    };
    let exhausted = !s.dfs();
    match (s.found.len(), exhausted) {
        (0, true) => Completion::Undecided,
        (0, false) => Completion::Unsat,
        (1, true) => Completion::Undecided,
        (1, false) => Completion::Unique(s.found.pop().expect("one")),
        _ => Completion::Multiple(s.found.swap_remove(0)),
    }
}

struct Search {
    p: PartialLatinSquare,
    full: SymSet,
    nodes: u64,
    budget: u64,
    found: Vec<LatinSquare>,
}

impl Search {
    /// Returns false when the budget ran out; stops early after two finds.
    fn dfs(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        let n = self.p.n;
        let mut best: Option<(usize, usize, SymSet)> = None;
        for r in 0..n {
            for c in 0..n {
                if self.p.cells[r * n + c].is_some() {
                    continue;
                }
                let cand = self.full.minus(self.p.rows[r].union(self.p.cols[c]));
                let len = cand.len();
                if len == 0 {
                    return true;
                }
                if best.as_ref().is_none_or(|b| len < b.2.len()) {
                    best = Some((r, c, cand));
                    if len == 1 {
                        break;
                    }
                }
            }
            if best.as_ref().is_some_and(|b| b.2.len() == 1) {
                break;
            }
        }
        let Some((r, c, cand)) = best else {
            self.found.push(self.p.to_square());
            return true;
        };
        for s in cand.iter() {
            self.p.set(r, c, s as u8).expect("candidate is free");
            let ok = self.dfs();
            self.p.clear(r, c);
            if !ok {
                return false;
            }
            if self.found.len() >= 2 {
                return true;
            }
        }
        true
    }
}
