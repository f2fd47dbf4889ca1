use std::fmt;

use crate::error::{Error, Result};

/// Largest alphabet supported by the exhaustive world-set machinery.
pub const MAX_LETTERS: usize = 16;

/// An interpretation over an alphabet. Bit `i` is the truth value of letter `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World(u32);

impl World {
    pub const fn from_index(index: u32) -> Self {
        World(index)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    pub const fn bit(self, letter: usize) -> bool {
        (self.0 >> letter) & 1 == 1
    }

    pub fn with_bit(self, letter: usize, value: bool) -> Self {
        if value {
            World(self.0 | (1 << letter))
        } else {
            World(self.0 & !(1 << letter))
        }
    }
}

/// Ordered, duplicate-free list of propositional letters. The order fixes the
/// bit position of each letter inside a [`World`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<String>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && s != "true" && s != "false"
}

impl Alphabet {
    pub fn new<I, S>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if letters.len() > MAX_LETTERS {
            return Err(Error::TooManyLetters { count: letters.len(), max: MAX_LETTERS });
        }
        for (i, letter) in letters.iter().enumerate() {
            if !is_identifier(letter) {
                return Err(Error::InvalidLetter(letter.clone()));
            }
            if letters[..i].contains(letter) {
                return Err(Error::DuplicateLetter(letter.clone()));
            }
        }
        Ok(Alphabet { letters })
    }

    /// Parses letters separated by whitespace and/or commas, e.g. `"b p o f w"` or `"a,b"`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(text.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn letter(&self, index: usize) -> &str {
        &self.letters[index]
    }

    pub fn index_of(&self, letter: &str) -> Option<usize> {
        self.letters.iter().position(|l| l == letter)
    }

    pub fn contains(&self, letter: &str) -> bool {
        self.index_of(letter).is_some()
    }

    pub fn world_count(&self) -> usize {
        1 << self.letters.len()
    }

    pub fn worlds(&self) -> impl Iterator<Item = World> + Clone {
        (0..self.world_count() as u32).map(World::from_index)
    }

    pub fn is_subset_of(&self, other: &Alphabet) -> bool {
        self.letters.iter().all(|l| other.contains(l))
    }

    /// Positions in `sup` of each of our letters.
    pub(crate) fn embedding_into(&self, sup: &Alphabet) -> Result<Vec<usize>> {
        self.letters
            .iter()
            .map(|l| sup.index_of(l))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::NotSubAlphabet { sub: self.to_string(), sup: sup.to_string() })
    }

    /// Literal rendering, e.g. `b -p o f -w`.
    pub fn render_world(&self, world: World) -> String {
        self.letters
            .iter()
            .enumerate()
            .map(|(i, l)| if world.bit(i) { l.clone() } else { format!("-{l}") })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Fixed-width bitstring aligned with the alphabet, e.g. `10110`.
    pub fn world_bits(&self, world: World) -> String {
        (0..self.len()).map(|i| if world.bit(i) { '1' } else { '0' }).collect()
    }

    pub fn parse_world(&self, bits: &str) -> Result<World> {
        let bits = bits.trim();
        if bits.len() != self.len() {
            return Err(Error::InvalidWorld(format!(
                "{bits} (expected {} bits for alphabet {self})",
                self.len()
            )));
        }
        let mut index = 0u32;
        for (i, c) in bits.chars().enumerate() {
            match c {
                '1' => index |= 1 << i,
                '0' => {}
                _ => return Err(Error::InvalidWorld(bits.to_string())),
            }
        }
        Ok(World(index))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.letters.join(" "))
    }
}
