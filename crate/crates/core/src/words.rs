//! Ultimately periodic ω-words and the exact prefix metric on them.
//!
//! An ultimately periodic word `u·v^ω` is stored as a prefix/period pair and
//! printed as `u(v)^w`, e.g. `ab(ab)^w` or `(b)^w`. Two pairs can denote the
//! same ω-word; [`UpWord::canonicalize`] computes the unique representative
//! with a primitive period and a shortest prefix, and [`up_equal`] decides
//! equality of the denoted words directly.

use std::fmt;
use std::ops::Deref;

use crate::Error;

/// A finite, ordered alphabet of single-character symbols.
///
/// The declaration order is significant: it fixes symbol indices in automata
/// and the lexicographic order used by deterministic outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self, Error> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        for (i, &s) in symbols.iter().enumerate() {
            if symbols[..i].contains(&s) {
                return Err(Error::DuplicateSymbol(s));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Number of symbols.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty alphabets
    }

    /// Symbols in declaration order.
    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn contains(&self, symbol: char) -> bool {
        self.symbols.contains(&symbol)
    }

    /// Position of `symbol` in declaration order.
    pub fn index_of(&self, symbol: char) -> Result<usize, Error> {
        self.symbols
            .iter()
            .position(|&s| s == symbol)
            .ok_or(Error::SymbolNotInAlphabet(symbol))
    }

    /// Does `self` contain every symbol of `other`?
    pub fn extends(&self, other: &Alphabet) -> bool {
        other.symbols.iter().all(|&s| self.contains(s))
    }

    /// Symbols of `self` that are not in `other`, in declaration order.
    pub fn difference(&self, other: &Alphabet) -> Vec<char> {
        self.symbols
            .iter()
            .copied()
            .filter(|&s| !other.contains(s))
            .collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A finite word over single-character symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWord(Vec<char>);

impl FiniteWord {
    pub fn new(letters: impl IntoIterator<Item = char>) -> Self {
        FiniteWord(letters.into_iter().collect())
    }

    pub fn letters(&self) -> &[char] {
        &self.0
    }
}

impl Deref for FiniteWord {
    type Target = [char];

    fn deref(&self) -> &[char] {
        &self.0
    }
}

impl From<&str> for FiniteWord {
    fn from(s: &str) -> Self {
        FiniteWord(s.chars().collect())
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// An ultimately periodic ω-word `prefix · period^ω`.
///
/// Structural equality (`==`) compares the stored pair; two distinct pairs
/// may still denote the same ω-word. Use [`up_equal`] for equality of the
/// denoted words, or compare [`UpWord::canonicalize`] outputs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UpWord {
    prefix: FiniteWord,
    period: FiniteWord,
}

impl UpWord {
    pub fn new(prefix: FiniteWord, period: FiniteWord) -> Result<Self, Error> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        Ok(UpWord { prefix, period })
    }

    /// Convenience constructor from string slices.
    pub fn from_parts(prefix: &str, period: &str) -> Result<Self, Error> {
        UpWord::new(prefix.into(), period.into())
    }

    pub fn prefix(&self) -> &FiniteWord {
        &self.prefix
    }

    pub fn period(&self) -> &FiniteWord {
        &self.period
    }

    /// The letter at position `i` of the denoted ω-word.
    pub fn letter(&self, i: usize) -> char {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// Every symbol that occurs in the prefix or the period.
    pub fn uses_only(&self, alphabet: &Alphabet) -> bool {
        self.prefix.iter().chain(self.period.iter()).all(|&c| alphabet.contains(c))
    }

    /// The unique equivalent pair whose period is primitive (not a proper
    /// power) and whose prefix is as short as possible.
    ///
    /// The prefix is shortened by absorbing letters into a rotation of the
    /// period: whenever the prefix ends with the same letter the period ends
    /// with, that letter can be moved across the `(...)^ω` boundary.
    pub fn canonicalize(&self) -> UpWord {
        let mut period = primitive_root(&self.period.0);
        let mut prefix = self.prefix.0.clone();
        while let Some(&last) = prefix.last() {
            if last != *period.last().expect("period is non-empty") {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        UpWord {
            prefix: FiniteWord(prefix),
            period: FiniteWord(period),
        }
    }

    /// Parse the literal syntax `u(v)^w`, e.g. `ab(ab)^w` or `(b)^w`.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let err = |m: &str| Error::Invalid(format!("bad ω-word literal '{s}': {m}"));
        let open = s.find('(').ok_or_else(|| err("expected 'u(v)^w'"))?;
        let rest = &s[open + 1..];
        let close = rest.find(')').ok_or_else(|| err("missing ')'"))?;
        if &rest[close + 1..] != "^w" {
            return Err(err("expected trailing '^w'"));
        }
        let period = &rest[..close];
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        UpWord::from_parts(&s[..open], period)
    }
}

impl fmt::Display for UpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})^w", self.prefix, self.period)
    }
}

/// Shortest `d` such that `word` is `word[..d]` repeated.
fn primitive_root(word: &[char]) -> Vec<char> {
    let n = word.len();
    for d in 1..=n {
        if n % d == 0 && word.chunks(d).all(|chunk| chunk == &word[..d]) {
            return word[..d].to_vec();
        }
    }
    unreachable!("d = n always divides");
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Index of the first position where the denoted words differ, if any.
///
/// Positions up to `|u₁| + |u₂| + lcm(|v₁|, |v₂|)` decide equality: past both
/// prefixes, both words are periodic with the least common multiple as a
/// shared period, so agreement over one full shared period from the latest
/// prefix end forces agreement everywhere.
pub fn first_difference(w1: &UpWord, w2: &UpWord) -> Option<usize> {
    let bound = w1.prefix.len() + w2.prefix.len() + lcm(w1.period.len(), w2.period.len());
    (0..bound).find(|&i| w1.letter(i) != w2.letter(i))
}

/// Do `w1` and `w2` denote the same ω-word?
pub fn up_equal(w1: &UpWord, w2: &UpWord) -> bool {
    first_difference(w1, w2).is_none()
}

/// An exact dyadic rational: zero, or `1/2^n`.
///
/// The numerator/denominator decomposition is exposed through
/// [`Dyadic::numerator`] and [`Dyadic::log2_denominator`]; no floating point
/// is involved anywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dyadic {
    Zero,
    HalfPower(u32),
}

impl Dyadic {
    pub fn numerator(&self) -> u32 {
        match self {
            Dyadic::Zero => 0,
            Dyadic::HalfPower(_) => 1,
        }
    }

    pub fn log2_denominator(&self) -> u32 {
        match self {
            Dyadic::Zero => 0,
            Dyadic::HalfPower(n) => *n,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Dyadic::Zero)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Dyadic::*;
        match (self, other) {
            (Zero, Zero) => std::cmp::Ordering::Equal,
            (Zero, HalfPower(_)) => std::cmp::Ordering::Less,
            (HalfPower(_), Zero) => std::cmp::Ordering::Greater,
            // 1/2^a ≤ 1/2^b iff a ≥ b
            (HalfPower(a), HalfPower(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dyadic::Zero => f.write_str("0"),
            Dyadic::HalfPower(0) => f.write_str("1"),
            Dyadic::HalfPower(n) if *n <= 30 => write!(f, "1/{}", 1u64 << n),
            Dyadic::HalfPower(n) => write!(f, "1/2^{n}"),
        }
    }
}

/// Result of measuring two ultimately periodic words against each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordDistance {
    /// First position where the words differ; `None` when they are equal.
    pub first_diff_index: Option<usize>,
    /// `1/2^n` for first difference at position `n`, zero for equal words.
    pub distance: Dyadic,
}

/// The prefix metric: `d(w1, w2) = 1/2^n` where `n` is the first position at
/// which the words differ, and `0` when they are equal.
pub fn word_distance(w1: &UpWord, w2: &UpWord) -> WordDistance {
    match first_difference(w1, w2) {
        None => WordDistance {
            first_diff_index: None,
            distance: Dyadic::Zero,
        },
        Some(n) => WordDistance {
            first_diff_index: Some(n),
            distance: Dyadic::HalfPower(n as u32),
        },
    }
}
