//! Packed bit tables indexed by input number.

use serde::{Deserialize, Serialize};

/// A fixed-length packed bit vector, little-endian within each `u64` word.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitTable {
    len: usize,
    words: Vec<u64>,
}

impl BitTable {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut t = Self {
            len,
            words: vec![!0; len.div_ceil(64)],
        };
        t.clear_tail();
        t
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut t = Self::zeros(len);
        for i in 0..len {
            if f(i) {
                t.set(i, true);
            }
        }
        t
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i & 63);
        if bit {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn all(&self) -> bool {
        self.count_ones() == self.len
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn and(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len);
        Self {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn not(&self) -> Self {
        let mut t = Self {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        t.clear_tail();
        t
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    fn clear_tail(&mut self) {
        let rem = self.len & 63;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Lower-case hex, little-endian by bit index: the first character
    /// holds bits 0..4 with bit 0 as its least significant bit.
    pub fn to_hex(&self) -> String {
        let nibbles = self.len.div_ceil(4).max(1);
        (0..nibbles)
            .map(|k| {
                let mut v = 0u32;
                for b in 0..4 {
                    let i = 4 * k + b;
                    if i < self.len && self.get(i) {
                        v |= 1 << b;
                    }
                }
                char::from_digit(v, 16).unwrap()
            })
            .collect()
    }

    /// Inverse of [`BitTable::to_hex`]; rejects set bits beyond `len`.
    pub fn from_hex(len: usize, hex: &str) -> Result<Self, String> {
        let expected = len.div_ceil(4).max(1);
        if hex.len() != expected {
            return Err(format!(
                "hex string has {} digits, expected {expected} for {len} bits",
                hex.len()
            ));
        }
        let mut t = Self::zeros(len);
        for (k, c) in hex.chars().enumerate() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| format!("invalid hex digit {c:?}"))?;
            for b in 0..4 {
                if v >> b & 1 == 1 {
                    let i = 4 * k + b;
                    if i >= len {
                        return Err(format!("bit {i} set beyond table length {len}"));
                    }
                    t.set(i, true);
                }
            }
        }
        Ok(t)
    }
}

impl std::fmt::Debug for BitTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitTable({}; {})", self.len, self.to_hex())
    }
}
