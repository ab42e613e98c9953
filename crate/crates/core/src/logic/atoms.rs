use std::fmt;

/// Membership mask over the `2^r` atoms of a signature.
///
/// Bit `i` is set when the atom whose truth assignment is the binary
/// expansion of `i` (bit `j` gives primitive `j`) belongs to the set.
/// Bits past `len` in the last word are always clear.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AtomSet {
    words: Vec<u64>,
    len: usize,
}

const WORD: usize = 64;

// Within-word patterns of primitive j < 6: bit i is set iff bit j of i is set.
const LOW_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl AtomSet {
    pub fn empty(len: usize) -> Self {
        AtomSet {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = AtomSet {
            words: vec![u64::MAX; len.div_ceil(WORD)],
            len,
        };
        s.trim();
        s
    }

    /// Atoms where primitive `var` is true, over `primitives` primitives.
    pub fn primitive(var: usize, primitives: usize) -> Self {
        let len = 1usize << primitives;
        let n_words = len.div_ceil(WORD);
        let words = if var < 6 {
            vec![LOW_PATTERNS[var]; n_words]
        } else {
            (0..n_words)
                .map(|w| if (w >> (var - 6)) & 1 == 1 { u64::MAX } else { 0 })
                .collect()
        };
        let mut s = AtomSet { words, len };
        s.trim();
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut s = Self::empty(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    fn trim(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Number of atoms in the universe (`2^r`).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "atom index {i} out of range {}", self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn complement(&self) -> AtomSet {
        let mut s = AtomSet {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        s.trim();
        s
    }

    pub fn intersection(&self, other: &AtomSet) -> AtomSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &AtomSet) -> AtomSet {
        self.zip_with(other, |a, b| a & !b)
    }

    fn zip_with(&self, other: &AtomSet, f: impl Fn(u64, u64) -> u64) -> AtomSet {
        debug_assert_eq!(self.len, other.len);
        AtomSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            len: self.len,
        }
    }

    /// Atom indices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * WORD + tz)
            })
        })
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
