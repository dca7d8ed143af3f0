//! Dense replication bit matrix: one bit per (vertex, partition).
//!
//! This is the only O(|V|·k) structure in the partitioner; everything else
//! is O(|V|) words or O(k) counters.

/// Row-major bit matrix with `rows` vertices and `cols` partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        debug_assert!(row < self.rows && col < self.cols);
        let word = self.bits[row * self.words_per_row + col / 64];
        word >> (col % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize) {
        debug_assert!(row < self.rows && col < self.cols);
        self.bits[row * self.words_per_row + col / 64] |= 1 << (col % 64);
    }

    /// Total set bits; for a replication matrix this is Σ_i |V(p_i)|.
    pub fn count_ones(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Set bits in one row (number of partitions covering that vertex).
    pub fn row_count_ones(&self, row: usize) -> u32 {
        debug_assert!(row < self.rows);
        let start = row * self.words_per_row;
        self.bits[start..start + self.words_per_row]
            .iter()
            .map(|w| w.count_ones())
            .sum()
    }
}
