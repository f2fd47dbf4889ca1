use std::fmt;

use smallvec::{smallvec, SmallVec};

use super::alphabet::{Alphabet, World};
use crate::error::Result;

/// A set of worlds over an alphabet of `letters` letters, stored as a bitset
/// indexed by world.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldSet {
    letters: usize,
    bits: SmallVec<[u64; 1]>,
}

fn word_count(letters: usize) -> usize {
    ((1usize << letters) + 63) / 64
}

// Bit pattern of letter `i` inside one 64-world word, for i < 6.
const LETTER_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl WorldSet {
    pub fn empty(letters: usize) -> Self {
        WorldSet { letters, bits: smallvec![0; word_count(letters)] }
    }

    pub fn full(letters: usize) -> Self {
        let mut set = WorldSet { letters, bits: smallvec![u64::MAX; word_count(letters)] };
        set.trim();
        set
    }

    /// All worlds in which letter `index` is true.
    pub fn letter(letters: usize, index: usize) -> Self {
        let bits = (0..word_count(letters))
            .map(|word| {
                if index < 6 {
                    LETTER_PATTERNS[index]
                } else if (word >> (index - 6)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                }
            })
            .collect();
        let mut set = WorldSet { letters, bits };
        set.trim();
        set
    }

    pub fn from_worlds(letters: usize, worlds: impl IntoIterator<Item = World>) -> Self {
        let mut set = Self::empty(letters);
        for w in worlds {
            set.insert(w);
        }
        set
    }

    /// Builds a set from a bitmask over world indices; only for alphabets of at most 6 letters.
    pub fn from_mask(letters: usize, mask: u64) -> Self {
        assert!(letters <= 6, "from_mask supports at most 6 letters");
        let mut set = WorldSet { letters, bits: smallvec![mask] };
        set.trim();
        set
    }

    /// Inverse of [`WorldSet::from_mask`].
    pub fn mask(&self) -> u64 {
        assert!(self.letters <= 6, "mask supports at most 6 letters");
        self.bits[0]
    }

    /// Parses world bitstrings (e.g. `["110", "011"]`) over `alphabet`.
    pub fn parse(alphabet: &Alphabet, worlds: &[&str]) -> Result<Self> {
        let mut set = Self::empty(alphabet.len());
        for w in worlds {
            set.insert(alphabet.parse_world(w)?);
        }
        Ok(set)
    }

    fn trim(&mut self) {
        let capacity = 1usize << self.letters;
        if capacity < 64 {
            self.bits[0] &= (1u64 << capacity) - 1;
        }
    }

    /// Number of letters of the underlying alphabet.
    pub fn letters(&self) -> usize {
        self.letters
    }

    /// Total number of worlds over the alphabet.
    pub fn capacity(&self) -> usize {
        1 << self.letters
    }

    pub fn contains(&self, w: World) -> bool {
        let i = w.index() as usize;
        (self.bits[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn insert(&mut self, w: World) {
        let i = w.index() as usize;
        assert!(i < self.capacity(), "world {i} out of range");
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, w: World) {
        let i = w.index() as usize;
        self.bits[i / 64] &= !(1 << (i % 64));
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.capacity()
    }

    fn zip(&self, other: &WorldSet, op: impl Fn(u64, u64) -> u64) -> WorldSet {
        assert_eq!(self.letters, other.letters, "world sets over different alphabets");
        WorldSet {
            letters: self.letters,
            bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| op(a, b)).collect(),
        }
    }

    pub fn union(&self, other: &WorldSet) -> WorldSet {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &WorldSet) -> WorldSet {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &WorldSet) -> WorldSet {
        self.zip(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &WorldSet) -> WorldSet {
        self.zip(other, |a, b| a ^ b)
    }

    pub fn complement(&self) -> WorldSet {
        let mut set = WorldSet { letters: self.letters, bits: self.bits.iter().map(|b| !b).collect() };
        set.trim();
        set
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        assert_eq!(self.letters, other.letters, "world sets over different alphabets");
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &WorldSet) -> bool {
        assert_eq!(self.letters, other.letters, "world sets over different alphabets");
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| a & b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = World> + '_ {
        self.bits.iter().enumerate().flat_map(|(word, &bits)| {
            let mut rest = bits;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros();
                rest &= rest - 1;
                Some(World::from_index(word as u32 * 64 + tz))
            })
        })
    }

    /// Renders members as bitstrings over `alphabet`, e.g. `{110, 011}`.
    pub fn render_bits(&self, alphabet: &Alphabet) -> String {
        let members: Vec<String> = self.iter().map(|w| alphabet.world_bits(w)).collect();
        format!("{{{}}}", members.join(", "))
    }

    /// Renders members with the literal convention, e.g. `{a b -c, a -b c}`.
    pub fn render_literals(&self, alphabet: &Alphabet) -> String {
        let members: Vec<String> = self.iter().map(|w| alphabet.render_world(w)).collect();
        format!("{{{}}}", members.join(", "))
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|w| w.index())).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letter_sets_match_bit_definition() {
        for n in [1usize, 3, 6, 7, 9] {
            for i in 0..n {
                let set = WorldSet::letter(n, i);
                for w in 0..(1u32 << n) {
                    let w = World::from_index(w);
                    assert_eq!(set.contains(w), w.bit(i), "n={n} i={i} w={w:?}");
                }
                assert_eq!(set.len(), 1 << (n - 1));
            }
        }
    }

    #[test]
    fn full_and_complement_are_trimmed() {
        let full = WorldSet::full(2);
        assert_eq!(full.len(), 4);
        assert!(WorldSet::empty(2).complement() == full);
        assert_eq!(WorldSet::full(8).len(), 256);
    }

    #[test]
    fn iterates_in_index_order() {
        let set = WorldSet::from_worlds(7, [100, 3, 64, 0].map(World::from_index));
        let got: Vec<u32> = set.iter().map(World::index).collect();
        assert_eq!(got, vec![0, 3, 64, 100]);
    }
}
