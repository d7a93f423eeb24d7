//! Latin squares and the quasigroups they define.
//!
//! Symbols are `0..n`. A [`Quasigroup`] pairs the multiplication table `*`
//! with its parastrophe `\` (left division), so that `x \ (x * y) = y` and
//! `x * (x \ y) = y` for every pair of symbols.

mod counting;
mod generate;
mod keyfile;

pub use counting::{
    count_latin_squares_backtrack, count_latin_squares_formula, known_latin_square_count,
    latin_square_log2_bounds, log2_factorial, permanent, permanent_by_expansion, BinaryMatrix,
    Log2Bounds, KNOWN_LATIN_SQUARE_COUNTS,
};
pub use generate::{
    default_mixing_steps, random_latin_square, random_latin_square_with_steps, JacobsonMatthews,
};
pub use keyfile::{parse_key_file, write_key_file, KEY_FILE_HEADER};

use crate::error::{Error, LineKind, Result};

/// Largest order a [`LatinSquare`] can hold (symbols are stored as bytes).
pub const MAX_ORDER: usize = 256;

/// An order-`n` Latin square stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u8>,
}

impl LatinSquare {
    /// Builds a square from rows of arbitrary integers, validating it.
    pub fn from_rows<R: AsRef<[usize]>>(rows: &[R]) -> Result<Self> {
        validate_latin_square(rows)?;
        let n = rows.len();
        let cells = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().map(|&s| s as u8))
            .collect();
        Ok(Self { n, cells })
    }

    /// Builds a square from a row-major cell vector, validating it.
    pub fn from_cells(n: usize, cells: Vec<u8>) -> Result<Self> {
        if n == 0 || n > MAX_ORDER {
            return Err(Error::InvalidOrder(n));
        }
        if cells.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                actual: cells.len(),
            });
        }
        let rows: Vec<Vec<usize>> = cells
            .chunks(n)
            .map(|r| r.iter().map(|&s| s as usize).collect())
            .collect();
        validate_latin_square(&rows)?;
        Ok(Self { n, cells })
    }

    pub(crate) fn from_cells_unchecked(n: usize, cells: Vec<u8>) -> Self {
        debug_assert_eq!(cells.len(), n * n);
        Self { n, cells }
    }

    /// The cyclic square `L[r][c] = (r + c) mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_ORDER {
            return Err(Error::InvalidOrder(n));
        }
        let cells = (0..n)
            .flat_map(|r| (0..n).map(move |c| ((r + c) % n) as u8))
            .collect();
        Ok(Self { n, cells })
    }

    /// The table `L[r][c] = r XOR c`; a Latin square whenever `n` is a power of two.
    pub fn xor_table(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_ORDER || !n.is_power_of_two() {
            return Err(Error::InvalidOrder(n));
        }
        let cells = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r ^ c) as u8))
            .collect();
        Ok(Self { n, cells })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.cells[r * self.n + c]
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u8] {
        &self.cells[r * self.n..(r + 1) * self.n]
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.cells
            .chunks(self.n)
            .map(|r| r.iter().map(|&s| s as usize).collect())
            .collect()
    }

    /// Column `c` read top to bottom.
    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.n).map(|r| self.get(r, c)).collect()
    }

    /// Swaps the symbols of the intercalate on rows `r1, r2` and columns
    /// `c1, c2`. Returns `false` (leaving the square untouched) when the four
    /// cells do not form a 2x2 Latin subsquare.
    pub fn swap_intercalate(&mut self, r1: usize, r2: usize, c1: usize, c2: usize) -> bool {
        let a = self.get(r1, c1);
        let b = self.get(r1, c2);
        if r1 == r2 || c1 == c2 || self.get(r2, c1) != b || self.get(r2, c2) != a {
            return false;
        }
        let n = self.n;
        self.cells[r1 * n + c1] = b;
        self.cells[r1 * n + c2] = a;
        self.cells[r2 * n + c1] = a;
        self.cells[r2 * n + c2] = b;
        true
    }

    /// All intercalates `(r1, r2, c1, c2)` with `r1 < r2` and `c1 < c2`.
    pub fn intercalates(&self) -> Vec<(usize, usize, usize, usize)> {
        let n = self.n;
        let mut col_of = vec![0usize; n * n];
        for r in 0..n {
            for c in 0..n {
                col_of[r * n + self.get(r, c) as usize] = c;
            }
        }
        let mut found = Vec::new();
        for r1 in 0..n {
            for r2 in r1 + 1..n {
                for c1 in 0..n {
                    let b = self.get(r2, c1) as usize;
                    let c2 = col_of[r1 * n + b];
                    if c2 > c1 && self.get(r2, c2) == self.get(r1, c1) {
                        found.push((r1, r2, c1, c2));
                    }
                }
            }
        }
        found
    }
}

/// Checks the Latin property of a square table of integers.
///
/// Structural problems (ragged or non-square input, symbols outside `0..n`)
/// are reported as [`Error::NotSquare`] / [`Error::SymbolOutOfRange`]; a
/// duplicated symbol is reported as [`Error::NotLatin`] naming the first
/// offending row (all rows are scanned before any column).
pub fn validate_latin_square<R: AsRef<[usize]>>(table: &[R]) -> Result<()> {
    let n = table.len();
    if n == 0 || n > MAX_ORDER {
        return Err(Error::InvalidOrder(n));
    }
    for (r, row) in table.iter().enumerate() {
        let row = row.as_ref();
        if row.len() != n {
            return Err(Error::NotSquare {
                row: r,
                len: row.len(),
                expected: n,
            });
        }
        if let Some((c, &s)) = row.iter().enumerate().find(|(_, &s)| s >= n) {
            return Err(Error::SymbolOutOfRange {
                row: r,
                col: c,
                symbol: s,
                order: n,
            });
        }
    }
    let mut seen = vec![false; n];
    for (r, row) in table.iter().enumerate() {
        seen.fill(false);
        for &s in row.as_ref() {
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::NotLatin {
                    line: LineKind::Row,
                    index: r,
                    symbol: s,
                });
            }
        }
    }
    for c in 0..n {
        seen.fill(false);
        for row in table {
            let s = row.as_ref()[c];
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::NotLatin {
                    line: LineKind::Column,
                    index: c,
                    symbol: s,
                });
            }
        }
    }
    Ok(())
}

/// Left-division table of `mul`: `D[x][z]` is the unique `y` with `mul[x][y] = z`.
pub fn parastrophe(mul: &LatinSquare) -> LatinSquare {
    let n = mul.order();
    let mut cells = vec![0u8; n * n];
    for x in 0..n {
        for (y, &z) in mul.row(x).iter().enumerate() {
            cells[x * n + z as usize] = y as u8;
        }
    }
    LatinSquare::from_cells_unchecked(n, cells)
}

/// A finite quasigroup `(Q, *)` together with its parastrophe `(Q, \)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quasigroup {
    mul: LatinSquare,
    ldiv: LatinSquare,
}

impl Quasigroup {
    pub fn new(mul: LatinSquare) -> Self {
        let ldiv = parastrophe(&mul);
        Self { mul, ldiv }
    }

    /// The group `(F_2^k, XOR)`; linear, so only useful as a test fixture.
    pub fn xor(order: usize) -> Result<Self> {
        Ok(Self::new(LatinSquare::xor_table(order)?))
    }

    pub fn order(&self) -> usize {
        self.mul.order()
    }

    /// `x * y`
    #[inline]
    pub fn mul(&self, x: u8, y: u8) -> u8 {
        self.mul.get(x as usize, y as usize)
    }

    /// `x \ y`
    #[inline]
    pub fn ldiv(&self, x: u8, y: u8) -> u8 {
        self.ldiv.get(x as usize, y as usize)
    }

    pub fn mul_table(&self) -> &LatinSquare {
        &self.mul
    }

    pub fn ldiv_table(&self) -> &LatinSquare {
        &self.ldiv
    }

    pub(crate) fn check_symbol(&self, s: u8) -> Result<()> {
        if (s as usize) < self.order() {
            Ok(())
        } else {
            Err(Error::InvalidSymbol {
                symbol: s as usize,
                order: self.order(),
            })
        }
    }

    pub(crate) fn check_symbols(&self, symbols: &[u8]) -> Result<()> {
        symbols.iter().try_for_each(|&s| self.check_symbol(s))
    }
}

impl From<LatinSquare> for Quasigroup {
    fn from(mul: LatinSquare) -> Self {
        Self::new(mul)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    /// The 5x5 example quasigroup, relabeled to symbols 0..4: `*` table.
    pub const EXAMPLE_MUL: [[usize; 5]; 5] = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ];

    /// Its `\` table, relabeled the same way.
    pub const EXAMPLE_LDIV: [[usize; 5]; 5] = [
        [0, 1, 2, 3, 4],
        [1, 0, 4, 2, 3],
        [2, 3, 0, 4, 1],
        [3, 4, 1, 0, 2],
        [4, 2, 3, 1, 0],
    ];
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn xor_table_is_latin() {
        let sq = LatinSquare::xor_table(4).unwrap();
        assert!(validate_latin_square(&sq.rows()).is_ok());
    }

    #[test]
    fn example_table_is_latin() {
        assert!(validate_latin_square(&EXAMPLE_MUL).is_ok());
        assert!(validate_latin_square(&EXAMPLE_LDIV).is_ok());
    }

    #[test]
    fn duplicate_in_row_is_reported() {
        let err = validate_latin_square(&[vec![0, 0], vec![1, 1]]).unwrap_err();
        match err {
            Error::NotLatin { line, index, symbol } => {
                assert_eq!((line, index, symbol), (LineKind::Row, 0, 0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_in_column_is_reported() {
        let err = validate_latin_square(&[vec![0, 1], vec![0, 1]]).unwrap_err();
        assert!(matches!(
            err,
            Error::NotLatin {
                line: LineKind::Column,
                index: 0,
                symbol: 0
            }
        ));
    }

    #[test]
    fn structural_errors_are_distinct() {
        assert!(matches!(
            validate_latin_square(&[vec![0, 1], vec![1]]),
            Err(Error::NotSquare { row: 1, .. })
        ));
        assert!(matches!(
            validate_latin_square(&[vec![0, 2], vec![1, 0]]),
            Err(Error::SymbolOutOfRange { symbol: 2, .. })
        ));
        let empty: [Vec<usize>; 0] = [];
        assert!(matches!(
            validate_latin_square(&empty),
            Err(Error::InvalidOrder(0))
        ));
    }

    #[test]
    fn parastrophe_of_example_matches_ldiv_table() {
        let mul = LatinSquare::from_rows(&EXAMPLE_MUL).unwrap();
        let ldiv = parastrophe(&mul);
        assert_eq!(ldiv, LatinSquare::from_rows(&EXAMPLE_LDIV).unwrap());
        // 2*3=4 in 1-based labels, so 2\4=3.
        assert_eq!(mul.get(1, 2), 3);
        assert_eq!(ldiv.get(1, 3), 2);
    }

    #[test]
    fn xor_is_self_parastrophic() {
        let sq = LatinSquare::xor_table(8).unwrap();
        assert_eq!(parastrophe(&sq), sq);
    }

    #[test]
    fn division_identities_hold_for_random_squares() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let q = Quasigroup::new(random_latin_square(8, &mut rng).unwrap());
            assert!(validate_latin_square(&q.ldiv_table().rows()).is_ok());
            for x in 0..8u8 {
                for y in 0..8u8 {
                    assert_eq!(q.ldiv(x, q.mul(x, y)), y);
                    assert_eq!(q.mul(x, q.ldiv(x, y)), y);
                }
            }
            // Applying the construction twice returns the original table.
            assert_eq!(&parastrophe(q.ldiv_table()), q.mul_table());
        }
    }

    #[test]
    fn intercalate_swap_preserves_latin_property() {
        let mut sq = LatinSquare::xor_table(4).unwrap();
        let all = sq.intercalates();
        assert!(!all.is_empty());
        let (r1, r2, c1, c2) = all[0];
        let before = sq.clone();
        assert!(sq.swap_intercalate(r1, r2, c1, c2));
        assert_ne!(sq, before);
        assert!(validate_latin_square(&sq.rows()).is_ok());
        assert!(!sq.swap_intercalate(0, 0, 0, 1));
    }
}
