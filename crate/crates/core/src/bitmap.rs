//! Fixed-length bitmap over an integer window `[0, len)`.
//!
//! Semigroup windows at enumeration scale fit in four words, so storage is
//! inline for those and spills to the heap only for large hand-built inputs.

use smallvec::SmallVec;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Bitmap {
    words: SmallVec<[u64; 4]>,
    len: usize,
}

impl std::fmt::Debug for Bitmap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter_ones()).finish()
    }
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

impl Bitmap {
    pub fn zeros(len: usize) -> Self {
        Bitmap {
            words: SmallVec::from_elem(0, words_for(len)),
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Bitmap {
            words: SmallVec::from_elem(!0, words_for(len)),
            len,
        };
        b.trim();
        b
    }

    /// Bitmap with exactly the positions in `[lo, hi)` set (clamped to `len`).
    pub fn range(len: usize, lo: usize, hi: usize) -> Self {
        let mut b = Bitmap::zeros(len);
        b.set_range(lo, hi);
        b
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
        i < self.len && (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn clear(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    pub fn set_range(&mut self, lo: usize, hi: usize) {
        let hi = hi.min(self.len);
        if lo >= hi {
            return;
        }
        let (lw, hw) = (lo / WORD, (hi - 1) / WORD);
        for w in lw..=hw {
            let mut mask = !0u64;
            if w == lw {
                mask &= !0u64 << (lo % WORD);
            }
            if w == hw {
                let top = hi - hw * WORD;
                if top < WORD {
                    mask &= (1u64 << top) - 1;
                }
            }
            self.words[w] |= mask;
        }
    }

    /// Changes the window length; new positions are filled with `fill`.
    pub fn resize(&mut self, len: usize, fill: bool) {
        let old = self.len;
        self.words.resize(words_for(len), 0);
        self.len = len;
        if len > old {
            if fill {
                self.set_range(old, len);
            }
        } else {
            self.trim();
        }
    }

    #[inline]
    fn word(&self, i: usize) -> u64 {
        self.words.get(i).copied().unwrap_or(0)
    }

    fn trim(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of set positions in `[lo, hi)`.
    pub fn count_range(&self, lo: usize, hi: usize) -> usize {
        let hi = hi.min(self.len);
        if lo >= hi {
            return 0;
        }
        let (lw, hw) = (lo / WORD, (hi - 1) / WORD);
        let mut total = 0;
        for w in lw..=hw {
            let mut bits = self.words[w];
            if w == lw {
                bits &= !0u64 << (lo % WORD);
            }
            if w == hw {
                let top = hi - hw * WORD;
                if top < WORD {
                    bits &= (1u64 << top) - 1;
                }
            }
            total += bits.count_ones() as usize;
        }
        total
    }

    pub fn any(&self) -> bool {
        self.words.iter().any(|&w| w != 0)
    }

    /// Smallest set position at or after `from`.
    pub fn next_one(&self, from: usize) -> Option<usize> {
        if from >= self.len {
            return None;
        }
        let mut w = from / WORD;
        let mut bits = self.words[w] & (!0u64 << (from % WORD));
        loop {
            if bits != 0 {
                return Some(w * WORD + bits.trailing_zeros() as usize);
            }
            w += 1;
            if w >= self.words.len() {
                return None;
            }
            bits = self.words[w];
        }
    }

    pub fn iter_ones(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// `self |= (src << shift)`, truncated to `self.len()`.
    pub fn or_shifted(&mut self, src: &Bitmap, shift: usize) {
        let ws = shift / WORD;
        let bs = shift % WORD;
        let n = self.words.len();
        for k in ws..n {
            let i = k - ws;
            let mut v = src.word(i) << bs;
            if bs != 0 && i > 0 {
                v |= src.word(i - 1) >> (WORD - bs);
            }
            self.words[k] |= v;
        }
        self.trim();
    }

    /// `(src << shift)` as a bitmap of length `len`.
    pub fn shifted(src: &Bitmap, shift: usize, len: usize) -> Bitmap {
        let mut b = Bitmap::zeros(len);
        b.or_shifted(src, shift);
        b
    }

    pub fn and_assign(&mut self, other: &Bitmap) {
        for (k, w) in self.words.iter_mut().enumerate() {
            *w &= other.word(k);
        }
    }

    pub fn and_not_assign(&mut self, other: &Bitmap) {
        for (k, w) in self.words.iter_mut().enumerate() {
            *w &= !other.word(k);
        }
    }

    pub fn or_assign(&mut self, other: &Bitmap) {
        for (k, w) in self.words.iter_mut().enumerate() {
            *w |= other.word(k);
        }
        self.trim();
    }

    /// True when `self & other` is nonempty.
    pub fn intersects(&self, other: &Bitmap) -> bool {
        self.words
            .iter()
            .enumerate()
            .any(|(k, &w)| w & other.word(k) != 0)
    }

    /// True when every set position of `self` is set in `other`.
    pub fn is_subset(&self, other: &Bitmap) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(k, &w)| w & !other.word(k) == 0)
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.index * WORD + bit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(len: usize, ones: &[usize]) -> Vec<bool> {
        let mut v = vec![false; len];
        for &i in ones {
            if i < len {
                v[i] = true;
            }
        }
        v
    }

    fn from_bools(v: &[bool]) -> Bitmap {
        let mut b = Bitmap::zeros(v.len());
        for (i, &x) in v.iter().enumerate() {
            if x {
                b.set(i);
            }
        }
        b
    }

    #[test]
    fn range_and_counts() {
        let b = Bitmap::range(130, 60, 129);
        assert_eq!(b.count_ones(), 69);
        assert_eq!(b.count_range(0, 64), 4);
        assert_eq!(b.count_range(64, 200), 65);
        assert!(!b.get(129));
        assert_eq!(b.next_one(0), Some(60));
        assert_eq!(b.next_one(129), None);
    }

    #[test]
    fn resize_fills_with_ones() {
        let mut b = Bitmap::zeros(3);
        b.resize(70, true);
        assert_eq!(
            b.iter_ones().collect::<Vec<_>>(),
            (3..70).collect::<Vec<_>>()
        );
        b.resize(5, false);
        assert_eq!(b.count_ones(), 2);
        b.resize(66, false);
        assert_eq!(b.count_ones(), 2);
    }

    proptest! {
        #[test]
        fn shift_matches_naive(
            len in 1usize..300,
            ones in proptest::collection::vec(0usize..300, 0..40),
            shift in 0usize..300,
        ) {
            let v = naive(len, &ones);
            let b = from_bools(&v);
            let s = Bitmap::shifted(&b, shift, len);
            for i in 0..len {
                let expect = i >= shift && v[i - shift];
                prop_assert_eq!(s.get(i), expect);
            }
            prop_assert_eq!(
                b.iter_ones().collect::<Vec<_>>(),
                (0..len).filter(|&i| v[i]).collect::<Vec<_>>()
            );
        }

        #[test]
        fn count_range_matches_naive(
            len in 1usize..300,
            ones in proptest::collection::vec(0usize..300, 0..60),
            lo in 0usize..300,
            hi in 0usize..300,
        ) {
            let v = naive(len, &ones);
            let b = from_bools(&v);
            let expect = (lo..hi.min(len)).filter(|&i| v[i]).count();
            prop_assert_eq!(b.count_range(lo, hi), expect);
        }
    }
}
