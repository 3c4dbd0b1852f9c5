//! Packed fixed-length bitstrings used for facet incidence.

use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_positions(len: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut b = Self::zeros(len);
        for p in positions {
            b.set(p);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Zero-based.
    #[inline]
    pub fn get(&self, pos: usize) -> bool {
        debug_assert!(pos < self.len);
        self.words[pos / 64] >> (pos % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, pos: usize) {
        assert!(pos < self.len, "bit {pos} out of range {}", self.len);
        self.words[pos / 64] |= 1 << (pos % 64);
    }

    #[inline]
    pub fn clear(&mut self, pos: usize) {
        assert!(pos < self.len, "bit {pos} out of range {}", self.len);
        self.words[pos / 64] &= !(1 << (pos % 64));
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Zero-based positions of set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&p| self.get(p))
    }

    /// Parses `1` as set and `0` or `.` as clear.
    pub fn parse(text: &str) -> Option<Self> {
        let chars: Vec<char> = text.trim().chars().collect();
        let mut b = Self::zeros(chars.len());
        for (p, c) in chars.into_iter().enumerate() {
            match c {
                '1' => b.set(p),
                '0' | '.' => {}
                _ => return None,
            }
        }
        Some(b)
    }

    /// `0`/`1` rendering (the `Display` impl uses `.` for zero).
    pub fn to_binary_string(&self) -> String {
        (0..self.len).map(|p| if self.get(p) { '1' } else { '0' }).collect()
    }
}

impl Ord for BitString {
    /// Lexicographic on the rendered string, `0 < 1`, shorter strings first on a shared prefix.
    fn cmp(&self, other: &Self) -> Ordering {
        for p in 0..self.len.min(other.len) {
            match self.get(p).cmp(&other.get(p)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 0..self.len {
            f.write_str(if self.get(p) { "1" } else { "." })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({})", self.to_binary_string())
    }
}
