//! Random Latin squares via the Jacobson–Matthews Markov chain.
//!
//! The square is held as its incidence cube `M[r][c][s] ∈ {-1, 0, 1}`. Each
//! line of the cube (fix two coordinates, vary the third) is stored sparsely;
//! a line never carries more than three non-zero entries, so every move is
//! O(1). A square is *proper* when the cube is 0/1 and *improper* when exactly
//! one entry is -1. The chain's stationary distribution restricted to proper
//! squares is uniform.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{LatinSquare, MAX_ORDER};
use crate::error::{Error, Result};

/// Number of chain steps used by [`random_latin_square`] for order `n`.
///
/// `n^3` for small orders, capped at `2^18` steps. The start state is already a
/// random isotope of the cyclic group, and the cap keeps order-256 key
/// generation in the millisecond range.
pub fn default_mixing_steps(n: usize) -> usize {
    const CAP: usize = 1 << 18;
    n.saturating_mul(n).saturating_mul(n).min(CAP)
}

/// Draws a random Latin square of order `n` using [`default_mixing_steps`].
pub fn random_latin_square<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<LatinSquare> {
    random_latin_square_with_steps(n, default_mixing_steps(n), rng)
}

/// Draws a random Latin square of order `n` after `steps` chain moves (and
/// however many extra moves it takes to return to a proper square).
pub fn random_latin_square_with_steps<R: Rng + ?Sized>(
    n: usize,
    steps: usize,
    rng: &mut R,
) -> Result<LatinSquare> {
    let mut chain = JacobsonMatthews::random_isotope(n, rng)?;
    chain.run(steps, rng);
    Ok(chain.into_square())
}

#[derive(Debug, Clone, Copy, Default)]
struct Line {
    len: u8,
    idx: [u8; 4],
    val: [i8; 4],
}

impl Line {
    fn add(&mut self, i: u8, d: i8) {
        let len = self.len as usize;
        for j in 0..len {
            if self.idx[j] == i {
                self.val[j] += d;
                if self.val[j] == 0 {
                    self.idx[j] = self.idx[len - 1];
                    self.val[j] = self.val[len - 1];
                    self.len -= 1;
                }
                return;
            }
        }
        debug_assert!(len < 4, "incidence line overflow");
        self.idx[len] = i;
        self.val[len] = d;
        self.len += 1;
    }

    fn value(&self, i: u8) -> i8 {
        (0..self.len as usize)
            .find(|&j| self.idx[j] == i)
            .map_or(0, |j| self.val[j])
    }

    /// First and (if present) second index carrying +1.
    fn ones(&self) -> (u8, Option<u8>) {
        let mut it = (0..self.len as usize)
            .filter(|&j| self.val[j] == 1)
            .map(|j| self.idx[j]);
        let first = it.next().expect("line without a +1 entry");
        (first, it.next())
    }
}

/// State of the Jacobson–Matthews chain.
#[derive(Debug, Clone)]
pub struct JacobsonMatthews {
    n: usize,
    /// Lines over symbols, indexed by (row, col).
    cell: Vec<Line>,
    /// Lines over columns, indexed by (row, symbol).
    row_sym: Vec<Line>,
    /// Lines over rows, indexed by (col, symbol).
    col_sym: Vec<Line>,
    improper: Option<(usize, usize, usize)>,
}

impl JacobsonMatthews {
    /// Starts the chain at `square`.
    pub fn new(square: &LatinSquare) -> Self {
        let n = square.order();
        let mut chain = Self {
            n,
            cell: vec![Line::default(); n * n],
            row_sym: vec![Line::default(); n * n],
            col_sym: vec![Line::default(); n * n],
            improper: None,
        };
        for r in 0..n {
            for c in 0..n {
                chain.add(r, c, square.get(r, c) as usize, 1);
            }
        }
        chain
    }

    /// Starts the chain at a uniformly random isotope of the cyclic square.
    pub fn random_isotope<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 || n > MAX_ORDER {
            return Err(Error::InvalidOrder(n));
        }
        let perm = |rng: &mut R| {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(rng);
            p
        };
        let (pr, pc, ps) = (perm(rng), perm(rng), perm(rng));
        let cells = (0..n)
            .flat_map(|r| {
                let (pr, pc, ps) = (&pr, &pc, &ps);
                (0..n).map(move |c| ps[(pr[r] + pc[c]) % n] as u8)
            })
            .collect();
        Ok(Self::new(&LatinSquare::from_cells_unchecked(n, cells)))
    }

    pub fn is_proper(&self) -> bool {
        self.improper.is_none()
    }

    fn add(&mut self, r: usize, c: usize, s: usize, d: i8) {
        let n = self.n;
        self.cell[r * n + c].add(s as u8, d);
        self.row_sym[r * n + s].add(c as u8, d);
        self.col_sym[c * n + s].add(r as u8, d);
    }

    fn pick<R: Rng + ?Sized>(ones: (u8, Option<u8>), rng: &mut R) -> usize {
        match ones {
            (a, Some(b)) => {
                if rng.random_bool(0.5) {
                    a as usize
                } else {
                    b as usize
                }
            }
            (a, None) => a as usize,
        }
    }

    /// One chain move.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let n = self.n;
        if n < 2 {
            return;
        }
        let (r, c, s) = match self.improper {
            Some(cell) => cell,
            None => {
                let r = rng.random_range(0..n);
                let c = rng.random_range(0..n);
                let current = self.cell[r * n + c].ones().0 as usize;
                let mut s = rng.random_range(0..n - 1);
                if s >= current {
                    s += 1;
                }
                (r, c, s)
            }
        };
        let s2 = Self::pick(self.cell[r * n + c].ones(), rng);
        let r2 = Self::pick(self.col_sym[c * n + s].ones(), rng);
        let c2 = Self::pick(self.row_sym[r * n + s].ones(), rng);

        self.add(r, c, s, 1);
        self.add(r, c, s2, -1);
        self.add(r, c2, s, -1);
        self.add(r, c2, s2, 1);
        self.add(r2, c, s, -1);
        self.add(r2, c, s2, 1);
        self.add(r2, c2, s, 1);
        self.add(r2, c2, s2, -1);

        self.improper = (self.cell[r2 * n + c2].value(s2 as u8) == -1).then_some((r2, c2, s2));
    }

    /// Performs `steps` moves, then keeps moving until the square is proper.
    pub fn run<R: Rng + ?Sized>(&mut self, steps: usize, rng: &mut R) {
        for _ in 0..steps {
            self.step(rng);
        }
        while !self.is_proper() {
            self.step(rng);
        }
    }

    /// The current square. Panics if the chain is in an improper state.
    pub fn square(&self) -> LatinSquare {
        assert!(self.is_proper(), "chain is in an improper state");
        let cells = self.cell.iter().map(|l| l.ones().0).collect();
        LatinSquare::from_cells_unchecked(self.n, cells)
    }

    pub fn into_square(self) -> LatinSquare {
        self.square()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasigroup::validate_latin_square;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn order_one_is_trivial() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let sq = random_latin_square(1, &mut rng).unwrap();
        assert_eq!(sq.cells(), &[0]);
    }

    #[test]
    fn order_zero_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            random_latin_square(0, &mut rng),
            Err(Error::InvalidOrder(0))
        ));
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let a = random_latin_square(4, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        let b = random_latin_square(4, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        assert_eq!(a, b);
        let c = random_latin_square(16, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        let d = random_latin_square(16, &mut ChaCha8Rng::seed_from_u64(43)).unwrap();
        assert_ne!(c, d);
    }

    #[test]
    fn every_intermediate_proper_state_is_latin() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [2, 3, 5, 7, 16] {
            let mut chain = JacobsonMatthews::random_isotope(n, &mut rng).unwrap();
            for _ in 0..2000 {
                chain.step(&mut rng);
                if chain.is_proper() {
                    assert!(validate_latin_square(&chain.square().rows()).is_ok());
                }
            }
        }
    }

    #[test]
    fn large_orders_produce_valid_squares() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [64, 256] {
            let sq = random_latin_square(n, &mut rng).unwrap();
            assert!(validate_latin_square(&sq.rows()).is_ok());
        }
    }
}
