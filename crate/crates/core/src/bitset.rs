//! A fixed-capacity bitset tuned for the search kernels: candidate sets are
//! copied, intersected and scanned in ascending order at every search node.

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { words: vec![0; len.div_ceil(64)], len }
    }

    /// All bits in `range` set.
    pub fn with_range(len: usize, range: std::ops::Range<usize>) -> Self {
        let mut s = BitSet::new(len);
        s.insert_range(range);
        s
    }

    pub fn full(len: usize) -> Self {
        BitSet::with_range(len, 0..len)
    }

    pub fn capacity(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i >> 6] &= !(1 << (i & 63));
        }
    }

    pub fn insert_range(&mut self, range: std::ops::Range<usize>) {
        let end = range.end.min(self.len);
        let mut i = range.start;
        while i < end {
            if i & 63 == 0 && i + 64 <= end {
                self.words[i >> 6] = u64::MAX;
                i += 64;
            } else {
                self.insert(i);
                i += 1;
            }
        }
    }

    /// Clears every bit with index `<= i`.
    pub fn clear_through(&mut self, i: usize) {
        let w = i >> 6;
        let full = w.min(self.words.len());
        for word in &mut self.words[..full] {
            *word = 0;
        }
        if w < self.words.len() {
            let keep = if (i & 63) == 63 { 0 } else { u64::MAX << ((i & 63) + 1) };
            self.words[w] &= keep;
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection_count(&self, other: &BitSet) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn copy_from(&mut self, other: &BitSet) {
        self.words.copy_from_slice(&other.words);
    }

    /// Smallest set index `>= from`.
    #[inline]
    pub fn next_from(&self, from: usize) -> Option<usize> {
        if from >= self.len {
            return None;
        }
        let mut w = from >> 6;
        let mut word = self.words[w] & (u64::MAX << (from & 63));
        loop {
            if word != 0 {
                return Some((w << 6) + word.trailing_zeros() as usize);
            }
            w += 1;
            if w == self.words.len() {
                return None;
            }
            word = self.words[w];
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut next = self.next_from(0);
        std::iter::from_fn(move || {
            let cur = next?;
            next = self.next_from(cur + 1);
            Some(cur)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_and_iteration() {
        let s = BitSet::with_range(200, 3..131);
        assert_eq!(s.count(), 128);
        assert_eq!(s.next_from(0), Some(3));
        assert_eq!(s.next_from(131), None);
        assert_eq!(s.iter().last(), Some(130));
    }

    #[test]
    fn clear_through_word_edges() {
        for cut in [0usize, 62, 63, 64, 65, 127, 199] {
            let mut s = BitSet::full(200);
            s.clear_through(cut);
            assert_eq!(s.next_from(0), if cut + 1 < 200 { Some(cut + 1) } else { None });
            assert_eq!(s.count(), 199 - cut);
        }
    }

    #[test]
    fn set_algebra() {
        let mut a = BitSet::with_range(70, 0..40);
        let b = BitSet::with_range(70, 30..70);
        assert_eq!(a.intersection_count(&b), 10);
        a.difference_with(&b);
        assert_eq!(a.count(), 30);
        a.intersect_with(&BitSet::with_range(70, 10..20));
        assert_eq!(a.iter().collect::<Vec<_>>(), (10..20).collect::<Vec<_>>());
        a.remove(10);
        assert!(!a.contains(10) && a.contains(11));
    }
}
