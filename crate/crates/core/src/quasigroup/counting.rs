//! Exact and asymptotic Latin-square counting.

use crate::error::{Error, Result};

/// Exact numbers of Latin squares of order 1..=10 (index 0 is order 1).
pub const KNOWN_LATIN_SQUARE_COUNTS: [u128; 10] = [
    1,
    2,
    12,
    576,
    161_280,
    812_851_200,
    61_479_419_904_000,
    108_776_032_459_082_956_800,
    5_524_751_496_156_892_842_531_225_600,
    9_982_437_658_213_039_871_725_064_756_920_320_000,
];

pub fn known_latin_square_count(n: usize) -> Option<u128> {
    n.checked_sub(1)
        .and_then(|i| KNOWN_LATIN_SQUARE_COUNTS.get(i))
        .copied()
}

/// A dense 0/1 matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl BinaryMatrix {
    pub fn new(rows: usize, cols: usize, bits: Vec<bool>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty("matrix"));
        }
        if bits.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                actual: bits.len(),
            });
        }
        Ok(Self { rows, cols, bits })
    }

    /// Builds a matrix from rows of 0/1 integers; any non-zero entry is rejected.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut bits = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::NotSquare {
                    row: i,
                    len: row.len(),
                    expected: cols,
                });
            }
            for (j, &b) in row.iter().enumerate() {
                if b > 1 {
                    return Err(Error::SymbolOutOfRange {
                        row: i,
                        col: j,
                        symbol: b as usize,
                        order: 2,
                    });
                }
                bits.push(b == 1);
            }
        }
        Self::new(rows.len(), cols, bits)
    }

    /// The `n x n` matrix whose bits are the low `n^2` bits of `mask`, row-major.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let bits = (0..n * n).map(|i| mask >> i & 1 == 1).collect();
        Self {
            rows: n,
            cols: n,
            bits,
        }
    }

    pub fn identity(n: usize) -> Self {
        let bits = (0..n * n).map(|i| i / n == i % n).collect();
        Self {
            rows: n,
            cols: n,
            bits,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.cols + c]
    }

    pub fn zeros(&self) -> usize {
        self.bits.iter().filter(|&&b| !b).count()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.bits.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.bits.swap(r * self.cols + a, r * self.cols + b);
        }
    }
}

/// Largest order accepted by [`permanent`].
pub const MAX_PERMANENT_ORDER: usize = 20;

/// Permanent of a square 0/1 matrix by Ryser's inclusion–exclusion formula
/// with Gray-code column updates, `O(2^n n)`.
///
/// The result is at most `20! < 2^62`; intermediate row-sum products are at most
/// `20^20 < 2^87`, so `i128` arithmetic is exact.
pub fn permanent(m: &BinaryMatrix) -> Result<u128> {
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            row: 0,
            len: m.cols,
            expected: m.rows,
        });
    }
    let n = m.rows;
    if n > MAX_PERMANENT_ORDER {
        return Err(Error::OutOfGuard {
            what: "permanent order",
            value: n,
            range: "1..=20",
        });
    }
    let mut row_sums = vec![0i64; n];
    let mut total: i128 = 0;
    let mut gray: u64 = 0;
    for i in 1u64..(1 << n) {
        let next = i ^ (i >> 1);
        let flipped = (gray ^ next).trailing_zeros() as usize;
        let delta = if next >> flipped & 1 == 1 { 1 } else { -1 };
        for (r, s) in row_sums.iter_mut().enumerate() {
            if m.get(r, flipped) {
                *s += delta;
            }
        }
        gray = next;
        let prod: i128 = row_sums.iter().map(|&s| s as i128).product();
        if gray.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    if n % 2 == 1 {
        total = -total;
    }
    debug_assert!(total >= 0);
    Ok(total as u128)
}

/// Permanent by direct expansion over all `n!` permutations. Only for small
/// matrices; kept as an independent cross-check of [`permanent`].
pub fn permanent_by_expansion(m: &BinaryMatrix) -> Result<u128> {
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            row: 0,
            len: m.cols,
            expected: m.rows,
        });
    }
    if m.rows > 10 {
        return Err(Error::OutOfGuard {
            what: "expansion order",
            value: m.rows,
            range: "1..=10",
        });
    }
    fn go(m: &BinaryMatrix, row: usize, used: u32) -> u128 {
        if row == m.rows {
            return 1;
        }
        (0..m.cols)
            .filter(|&c| used >> c & 1 == 0 && m.get(row, c))
            .map(|c| go(m, row + 1, used | 1 << c))
            .sum()
    }
    Ok(go(m, 0, 0))
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Latin-square count from the signed sum over all `n x n` 0/1 matrices:
/// `L(n) = n! * Σ_A (-1)^{zeros(A)} * C(perm(A), n)`.
///
/// The sum has `2^(n^2)` terms, so `n` is limited to `1..=4`.
pub fn count_latin_squares_formula(n: usize) -> Result<u128> {
    if !(1..=4).contains(&n) {
        return Err(Error::OutOfGuard {
            what: "formula order",
            value: n,
            range: "1..=4",
        });
    }
    let mut sum: i128 = 0;
    for mask in 0..(1u64 << (n * n)) {
        let a = BinaryMatrix::from_mask(n, mask);
        let term = binomial(permanent(&a)?, n as u128) as i128;
        if a.zeros() % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
    }
    let fact: i128 = (1..=n as i128).product();
    let total = fact * sum;
    debug_assert!(total >= 0);
    Ok(total as u128)
}

/// Latin-square count by exhaustive cell-by-cell enumeration (`n` in `1..=5`).
pub fn count_latin_squares_backtrack(n: usize) -> Result<u128> {
    if !(1..=5).contains(&n) {
        return Err(Error::OutOfGuard {
            what: "enumeration order",
            value: n,
            range: "1..=5",
        });
    }
    fn fill(n: usize, pos: usize, rows: &mut [u32], cols: &mut [u32]) -> u128 {
        if pos == n * n {
            return 1;
        }
        let (r, c) = (pos / n, pos % n);
        let mut free = !(rows[r] | cols[c]) & ((1u32 << n) - 1);
        let mut count = 0;
        while free != 0 {
            let bit = free & free.wrapping_neg();
            free ^= bit;
            rows[r] |= bit;
            cols[c] |= bit;
            count += fill(n, pos + 1, rows, cols);
            rows[r] ^= bit;
            cols[c] ^= bit;
        }
        count
    }
    Ok(fill(n, 0, &mut vec![0; n], &mut vec![0; n]))
}

pub fn log2_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).log2()).sum()
}

/// Base-2 logarithms of the classical lower and upper bounds on `L(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Log2Bounds {
    pub lower: f64,
    pub upper: f64,
}

/// `lower = log2((n!)^(2n) / n^(n^2))`, `upper = log2(Π_{j=1..n} (j!)^(n/j))`.
pub fn latin_square_log2_bounds(n: usize) -> Result<Log2Bounds> {
    if n == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let nf = n as f64;
    let lower = 2.0 * nf * log2_factorial(n) - nf * nf * nf.log2();
    let upper = (1..=n).map(|j| nf / j as f64 * log2_factorial(j)).sum();
    Ok(Log2Bounds { lower, upper })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_permanents() {
        assert_eq!(permanent(&BinaryMatrix::identity(2)).unwrap(), 1);
        let ones = BinaryMatrix::from_rows(&[[1, 1, 1], [1, 1, 1], [1, 1, 1]]).unwrap();
        assert_eq!(permanent(&ones).unwrap(), 6);
        // Expansion over S_2: id contributes 1*0, the swap contributes 1*1.
        let m = BinaryMatrix::from_rows(&[[1, 1], [1, 0]]).unwrap();
        assert_eq!(permanent(&m).unwrap(), 1);
    }

    #[test]
    fn ryser_agrees_with_expansion_on_all_3x3() {
        for mask in 0..(1u64 << 9) {
            let m = BinaryMatrix::from_mask(3, mask);
            assert_eq!(permanent(&m).unwrap(), permanent_by_expansion(&m).unwrap());
        }
    }

    #[test]
    fn permanent_guards() {
        let rect = BinaryMatrix::new(2, 3, vec![true; 6]).unwrap();
        assert!(matches!(permanent(&rect), Err(Error::NotSquare { .. })));
        let big = BinaryMatrix::identity(21);
        assert!(matches!(permanent(&big), Err(Error::OutOfGuard { .. })));
        assert!(BinaryMatrix::from_rows(&[[0, 2]]).is_err());
    }

    #[test]
    fn full_ones_20_fits() {
        let m = BinaryMatrix::new(20, 20, vec![true; 400]).unwrap();
        let fact20: u128 = (1..=20u128).product();
        assert_eq!(permanent(&m).unwrap(), fact20);
    }

    #[test]
    fn formula_small_orders() {
        assert_eq!(count_latin_squares_formula(1).unwrap(), 1);
        assert_eq!(count_latin_squares_formula(2).unwrap(), 2);
        assert_eq!(count_latin_squares_formula(3).unwrap(), 12);
        assert!(count_latin_squares_formula(5).is_err());
        assert!(count_latin_squares_formula(0).is_err());
    }

    #[test]
    fn backtrack_small_orders() {
        assert_eq!(count_latin_squares_backtrack(1).unwrap(), 1);
        assert_eq!(count_latin_squares_backtrack(3).unwrap(), 12);
        assert_eq!(count_latin_squares_backtrack(4).unwrap(), 576);
        assert!(count_latin_squares_backtrack(6).is_err());
    }

    #[test]
    fn bounds_order_one() {
        let b = latin_square_log2_bounds(1).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
        assert!(latin_square_log2_bounds(0).is_err());
    }

    #[test]
    fn bounds_sandwich_known_counts() {
        for n in 1..=10 {
            let b = latin_square_log2_bounds(n).unwrap();
            let exact = (known_latin_square_count(n).unwrap() as f64).log2();
            assert!(b.lower <= exact + 1e-9, "n={n}");
            assert!(exact <= b.upper + 1e-9, "n={n}");
        }
    }
}
