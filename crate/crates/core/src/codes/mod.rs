//! Alphabets, words and code families, with brute-force code oracles.
//!
//! The alphabet is `Q = {0,1}^m`. A [`Symbol`] stores its bits as an
//! unsigned integer whose most significant bit is bit index 0, so the
//! integer order of symbols is the lexicographic order of their bits.

pub mod gf2m;

use std::collections::HashSet;
use std::fmt;

use num::BigInt;

use crate::bits::BitString;
use crate::error::{ensure_budget, sat_pow, Error, Result};
use crate::rational::Rational;

use self::gf2m::Gf2m;

/// Widest supported symbol. Keeps `2^m` representable.
pub const MAX_WIDTH: u32 = 63;

fn check_width(width: u32) -> Result<()> {
    if width == 0 || width > MAX_WIDTH {
        return Err(Error::param(format!(
            "symbol width must be in 1..={MAX_WIDTH}, got {width}"
        )));
    }
    Ok(())
}

fn mask(width: u32) -> u64 {
    (1u64 << width) - 1
}

/// One `m`-bit input symbol.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Symbol {
    value: u64,
    width: u32,
}

impl Symbol {
    pub fn new(value: u64, width: u32) -> Result<Self> {
        check_width(width)?;
        if value & !mask(width) != 0 {
            return Err(Error::param(format!(
                "symbol value {value} does not fit in {width} bits"
            )));
        }
        Ok(Symbol { value, width })
    }

    pub fn zero(width: u32) -> Result<Self> {
        Symbol::new(0, width)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn to_bits(&self) -> BitString {
        BitString::from_uint(self.value, self.width as usize)
    }

    pub fn from_bits(bits: &BitString) -> Result<Self> {
        let width = u32::try_from(bits.len()).unwrap_or(u32::MAX);
        check_width(width)?;
        Symbol::new(bits.to_uint().unwrap_or(0), width)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_bits())
    }
}

/// The distributed input: symbol `i` (0-based here) is held by vertex
/// `v_{i+1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Word {
    width: u32,
    symbols: Vec<u64>,
}

impl Word {
    pub fn new(width: u32, symbols: Vec<u64>) -> Result<Self> {
        check_width(width)?;
        if symbols.len() < 2 {
            return Err(Error::param(format!(
                "a word needs at least 2 symbols, got {}",
                symbols.len()
            )));
        }
        if let Some(bad) = symbols.iter().find(|&&s| s & !mask(width) != 0) {
            return Err(Error::param(format!(
                "symbol value {bad} does not fit in {width} bits"
            )));
        }
        Ok(Word { width, symbols })
    }

    pub fn from_symbols(symbols: &[Symbol]) -> Result<Self> {
        let width = symbols.first().map(|s| s.width).unwrap_or(1);
        if symbols.iter().any(|s| s.width != width) {
            return Err(Error::param("symbols of a word must share one width"));
        }
        Word::new(width, symbols.iter().map(|s| s.value).collect())
    }

    /// The constant word `(a, a, ..., a)`.
    pub fn constant(n: usize, width: u32, value: u64) -> Result<Self> {
        Word::new(width, vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn values(&self) -> &[u64] {
        &self.symbols
    }

    /// Symbol held by vertex `v` (1-based).
    pub fn at(&self, vertex: usize) -> Symbol {
        Symbol {
            value: self.symbols[vertex - 1],
            width: self.width,
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols.iter().map(move |&value| Symbol {
            value,
            width: self.width,
        })
    }

    /// Copy with the symbol at vertex `v` (1-based) replaced.
    pub fn with_symbol(&self, vertex: usize, value: u64) -> Word {
        let mut out = self.clone();
        out.symbols[vertex - 1] = value & mask(self.width);
        out
    }

    /// Concatenated bits `x_1 x_2 ... x_n`.
    pub fn to_bits(&self) -> BitString {
        let mut bits = BitString::new();
        for s in self.symbols() {
            bits.append(&s.to_bits());
        }
        bits
    }

    /// Lower-case hex of the concatenated bits, `ceil(n m / 4)` digits.
    pub fn to_hex(&self) -> String {
        let bits = self.to_bits();
        let digits = bits.len().div_ceil(4);
        let pad = digits * 4 - bits.len();
        let padded: Vec<bool> = std::iter::repeat_n(false, pad)
            .chain(bits.bits().iter().copied())
            .collect();
        padded
            .chunks(4)
            .map(|c| {
                let v = c.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
                char::from_digit(v, 16).unwrap_or('0')
            })
            .collect()
    }

    /// Inverse of [`Word::to_hex`]; padding bits must be zero.
    pub fn from_hex(text: &str, n: usize, width: u32) -> Result<Self> {
        check_width(width)?;
        let total = n * width as usize;
        let digits = total.div_ceil(4);
        let text = text.trim();
        if text.len() != digits {
            return Err(Error::param(format!(
                "expected {digits} hex digits for n={n}, m={width}, got {}",
                text.len()
            )));
        }
        let mut bits = Vec::with_capacity(digits * 4);
        for c in text.chars() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| Error::param(format!("invalid hex digit {c:?}")))?;
            bits.extend((0..4).rev().map(|i| (v >> i) & 1 == 1));
        }
        let pad = digits * 4 - total;
        if bits[..pad].iter().any(|&b| b) {
            return Err(Error::param("nonzero padding bits in hex codeword"));
        }
        let symbols = bits[pad..]
            .chunks(width as usize)
            .map(|c| c.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
            .collect();
        Word::new(width, symbols)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.symbols().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

/// The full input space `Q^n` in lexicographic order of concatenated bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InputSpace {
    pub n: usize,
    pub width: u32,
}

impl InputSpace {
    pub fn new(n: usize, width: u32) -> Result<Self> {
        check_width(width)?;
        if n < 2 {
            return Err(Error::param("input space needs n >= 2"));
        }
        Ok(InputSpace { n, width })
    }

    /// `2^{mn}`, saturating.
    pub fn size(&self) -> u128 {
        sat_pow(2, (self.n as u32).saturating_mul(self.width))
    }

    /// Fails unless the space fits `budget` and is indexable by `u64`.
    pub fn ensure_enumerable(&self, budget: u64) -> Result<u64> {
        ensure_budget("input space 2^(mn)", self.size(), budget as u128)?;
        Ok(self.size() as u64)
    }

    pub fn word(&self, index: u64) -> Word {
        let m = self.width as usize;
        let symbols = (0..self.n)
            .map(|i| (index >> (m * (self.n - 1 - i))) & mask(self.width))
            .collect();
        Word {
            width: self.width,
            symbols,
        }
    }

    pub fn index_of(&self, word: &Word) -> u64 {
        word.symbols
            .iter()
            .fold(0u64, |acc, &s| (acc << self.width) | s)
    }
}

pub fn hamming_distance(x: &Word, y: &Word) -> Result<usize> {
    if x.len() != y.len() || x.width != y.width {
        return Err(Error::param(format!(
            "shape mismatch: ({}, m={}) vs ({}, m={})",
            x.len(),
            x.width,
            y.len(),
            y.width
        )));
    }
    Ok(x.symbols
        .iter()
        .zip(&y.symbols)
        .filter(|(a, b)| a != b)
        .count())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeFamily {
    Repetition,
    ParityCheck,
    Explicit,
    Mds,
}

/// Reed-Solomon evaluation data behind the MDS variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdsData {
    pub k: usize,
    /// Distinct field elements, one per coordinate.
    pub points: Vec<u64>,
}

#[derive(Debug, Clone)]
enum CodeKind {
    Repetition,
    ParityCheck,
    Listed {
        mds: Option<MdsData>,
        words: Vec<Word>,
        members: HashSet<Word>,
    },
}

/// An `(n, k, d)` code over `{0,1}^m`.
#[derive(Debug, Clone)]
pub struct CodeSpec {
    n: usize,
    m: u32,
    d: usize,
    /// `log2 |C|` when `|C|` is a power of two, otherwise `ceil(log2 |C|)`.
    size_bits: u64,
    size_exact_power: bool,
    kind: CodeKind,
}

impl CodeSpec {
    /// The `(n, 1, n)` code of constant words.
    pub fn repetition(n: usize, m: u32) -> Result<Self> {
        InputSpace::new(n, m)?;
        Ok(CodeSpec {
            n,
            m,
            d: n,
            size_bits: m as u64,
            size_exact_power: true,
            kind: CodeKind::Repetition,
        })
    }

    /// The `(n, n-1, 2)` code of words whose symbols XOR to zero.
    pub fn parity_check(n: usize, m: u32) -> Result<Self> {
        InputSpace::new(n, m)?;
        Ok(CodeSpec {
            n,
            m,
            d: 2,
            size_bits: m as u64 * (n as u64 - 1),
            size_exact_power: true,
            kind: CodeKind::ParityCheck,
        })
    }

    /// A code given by its codeword list. Duplicates are merged; the minimum
    /// distance is computed by brute force and must be at least 2.
    pub fn explicit(n: usize, m: u32, words: Vec<Word>, budget: u64) -> Result<Self> {
        InputSpace::new(n, m)?;
        for w in &words {
            if w.len() != n || w.width != m {
                return Err(Error::param(format!(
                    "codeword {w} does not have length {n} and width {m}"
                )));
            }
        }
        let mut words = words;
        words.sort();
        words.dedup();
        Self::listed(n, m, words, None, budget)
    }

    /// Reed-Solomon code of dimension `k` evaluated at the first `n` field
    /// elements `0, 1, ..., n-1` of GF(2^m). The full codeword set must fit
    /// `budget`; `d = n - k + 1` is re-derived by brute force.
    pub fn mds(n: usize, k: usize, m: u32, budget: u64) -> Result<Self> {
        InputSpace::new(n, m)?;
        let field = Gf2m::new(m)?;
        if k == 0 || k >= n {
            return Err(Error::param(format!("MDS code needs 1 <= k < n, got k={k}, n={n}")));
        }
        if n as u64 > field.order() {
            return Err(Error::param(format!(
                "Reed-Solomon length {n} exceeds field size 2^{m}"
            )));
        }
        let count = sat_pow(2, m.saturating_mul(k as u32));
        ensure_budget("MDS codeword set", count, budget as u128)?;
        let points: Vec<u64> = (0..n as u64).collect();
        let mut words = Vec::with_capacity(count as usize);
        for message in 0..count as u64 {
            let coeffs: Vec<u64> = (0..k)
                .map(|j| (message >> (m as usize * j)) & mask(m))
                .collect();
            let symbols = points.iter().map(|&p| field.eval(&coeffs, p)).collect();
            words.push(Word { width: m, symbols });
        }
        words.sort();
        let code = Self::listed(n, m, words, Some(MdsData { k, points }), budget)?;
        if code.d != n - k + 1 {
            return Err(Error::Construction(format!(
                "Reed-Solomon code has distance {} instead of {}",
                code.d,
                n - k + 1
            )));
        }
        Ok(code)
    }

    fn listed(
        n: usize,
        m: u32,
        words: Vec<Word>,
        mds: Option<MdsData>,
        budget: u64,
    ) -> Result<Self> {
        if words.len() < 2 {
            return Err(Error::param("a code needs at least two codewords"));
        }
        ensure_budget("codeword list", words.len() as u128, budget as u128)?;
        let d = brute_force_min_distance(&words);
        if d < 2 {
            return Err(Error::param(format!(
                "minimum distance {d} < 2 is not a valid code here"
            )));
        }
        let size = words.len() as u64;
        let (size_bits, exact) = if size.is_power_of_two() {
            (size.trailing_zeros() as u64, true)
        } else {
            (64 - (size - 1).leading_zeros() as u64, false)
        };
        let members = words.iter().cloned().collect();
        Ok(CodeSpec {
            n,
            m,
            d,
            size_bits,
            size_exact_power: exact,
            kind: CodeKind::Listed {
                mds,
                words,
                members,
            },
        })
    }

    pub fn family(&self) -> CodeFamily {
        match &self.kind {
            CodeKind::Repetition => CodeFamily::Repetition,
            CodeKind::ParityCheck => CodeFamily::ParityCheck,
            CodeKind::Listed { mds: Some(_), .. } => CodeFamily::Mds,
            CodeKind::Listed { mds: None, .. } => CodeFamily::Explicit,
        }
    }

    pub fn mds_data(&self) -> Option<&MdsData> {
        match &self.kind {
            CodeKind::Listed { mds, .. } => mds.as_ref(),
            _ => None,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Minimum distance, cached at construction.
    pub fn d(&self) -> usize {
        self.d
    }

    /// `|C|`, if it fits in a `u128`.
    pub fn size(&self) -> Option<u128> {
        match &self.kind {
            CodeKind::Listed { words, .. } => Some(words.len() as u128),
            _ => 1u128.checked_shl(self.size_bits as u32),
        }
    }

    /// Dimension `k = log_{2^m} |C|`. Exact when `|C|` is a power of two;
    /// otherwise `ceil(log2 |C|) / m`, which is what any transcript-counting
    /// argument can use since transcripts have integral length.
    pub fn dimension(&self) -> Rational {
        Rational::new(BigInt::from(self.size_bits), BigInt::from(self.m))
    }

    pub fn dimension_is_exact(&self) -> bool {
        self.size_exact_power
    }

    /// Bits needed to name a codeword: `ceil(log2 |C|)`.
    pub fn size_bits(&self) -> u64 {
        self.size_bits
    }

    fn check_shape(&self, w: &Word) -> Result<()> {
        if w.len() != self.n || w.width != self.m {
            return Err(Error::param(format!(
                "word has length {} and width {}, code expects {} and {}",
                w.len(),
                w.width,
                self.n,
                self.m
            )));
        }
        Ok(())
    }

    pub fn contains(&self, w: &Word) -> Result<bool> {
        self.check_shape(w)?;
        Ok(self.contains_unchecked(w))
    }

    pub(crate) fn contains_unchecked(&self, w: &Word) -> bool {
        match &self.kind {
            CodeKind::Repetition => w.symbols.iter().all(|&s| s == w.symbols[0]),
            CodeKind::ParityCheck => w.symbols.iter().fold(0, |acc, &s| acc ^ s) == 0,
            CodeKind::Listed { members, .. } => members.contains(w),
        }
    }

    /// Every codeword once, in lexicographic order of concatenated bits.
    pub fn enumerate(&self, budget: u64) -> Result<Box<dyn Iterator<Item = Word> + '_>> {
        let size = self.size().unwrap_or(u128::MAX);
        ensure_budget("codeword enumeration", size, budget as u128)?;
        let (n, m) = (self.n, self.m);
        Ok(match &self.kind {
            CodeKind::Repetition => Box::new((0..size as u64).map(move |a| Word {
                width: m,
                symbols: vec![a; n],
            })),
            CodeKind::ParityCheck => {
                let prefix = InputSpace { n: n - 1, width: m };
                Box::new((0..size as u64).map(move |i| {
                    let mut symbols = if n - 1 >= 2 {
                        prefix.word(i).symbols
                    } else {
                        vec![i]
                    };
                    let parity = symbols.iter().fold(0, |acc, &s| acc ^ s);
                    symbols.push(parity);
                    Word { width: m, symbols }
                }))
            }
            CodeKind::Listed { words, .. } => Box::new(words.iter().cloned()),
        })
    }

    /// Minimum distance: closed form for repetition and parity codes, all
    /// pairs otherwise (pairs counted against `budget`).
    pub fn min_distance(&self, budget: u64) -> Result<usize> {
        match &self.kind {
            CodeKind::Repetition => Ok(self.n),
            CodeKind::ParityCheck => Ok(2),
            CodeKind::Listed { words, .. } => {
                let count = words.len() as u128;
                ensure_budget("codeword pairs", count * (count - 1) / 2, budget as u128)?;
                Ok(brute_force_min_distance(words))
            }
        }
    }

    /// A closest codeword and its distance; ties go to the earliest codeword
    /// in enumeration order.
    pub fn nearest_codeword(&self, w: &Word, budget: u64) -> Result<(Word, usize)> {
        self.check_shape(w)?;
        let mut best: Option<(Word, usize)> = None;
        for c in self.enumerate(budget)? {
            let dist = hamming_distance(&c, w)?;
            if best.as_ref().is_none_or(|(_, d)| dist < *d) {
                let done = dist == 0;
                best = Some((c, dist));
                if done {
                    break;
                }
            }
        }
        best.ok_or_else(|| Error::param("empty code"))
    }

    /// Largest number of symbol errors the code can always correct.
    pub fn correction_radius(&self) -> usize {
        (self.d - 1) / 2
    }

    /// Text format: `"n m"`, then one codeword per line in hex.
    pub fn to_explicit_text(&self, budget: u64) -> Result<String> {
        let mut out = format!("{} {}\n", self.n, self.m);
        for w in self.enumerate(budget)? {
            out.push_str(&w.to_hex());
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_explicit_text(text: &str, budget: u64) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::parse(line, "header must be \"n m\""));
        }
        let n: usize = fields[0]
            .parse()
            .map_err(|_| Error::parse(line, "n is not an integer"))?;
        let m: u32 = fields[1]
            .parse()
            .map_err(|_| Error::parse(line, "m is not an integer"))?;
        let mut words = Vec::new();
        for (line, text) in lines {
            words.push(Word::from_hex(text, n, m).map_err(|e| Error::parse(line, e.to_string()))?);
        }
        CodeSpec::explicit(n, m, words, budget)
    }
}

fn brute_force_min_distance(words: &[Word]) -> usize {
    let mut best = usize::MAX;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            let d = a
                .symbols
                .iter()
                .zip(&b.symbols)
                .filter(|(x, y)| x != y)
                .count();
            best = best.min(d);
        }
    }
    best
}

/// `ceil(log2(count))` for `count >= 1`: bits needed to name one of `count`
/// items.
pub fn bits_for(count: u64) -> usize {
    if count <= 1 {
        0
    } else {
        (64 - (count - 1).leading_zeros()) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const BUDGET: u64 = 1 << 20;

    fn w(m: u32, s: &[u64]) -> Word {
        Word::new(m, s.to_vec()).unwrap()
    }

    #[test]
    fn repetition_membership() {
        let rep = CodeSpec::repetition(3, 2).unwrap();
        assert!(rep.contains(&w(2, &[3, 3, 3])).unwrap());
        assert!(!rep.contains(&w(2, &[3, 3, 1])).unwrap());
        assert!(rep.contains(&w(2, &[3, 3])).is_err());
        assert!(rep.contains(&w(3, &[3, 3, 3])).is_err());
    }

    #[test]
    fn parity_membership() {
        let par = CodeSpec::parity_check(4, 3).unwrap();
        let prefix = [5u64, 2, 7];
        let last = prefix.iter().fold(0, |a, b| a ^ b);
        assert!(par.contains(&w(3, &[5, 2, 7, last])).unwrap());
        assert!(!par.contains(&w(3, &[5, 2, 7, last ^ 1])).unwrap());
    }

    #[test]
    fn distances() {
        let x = w(2, &[1, 1, 1]);
        assert_eq!(hamming_distance(&x, &x).unwrap(), 0);
        assert_eq!(hamming_distance(&x, &w(2, &[1, 2, 1])).unwrap(), 1);
        assert!(hamming_distance(&x, &w(2, &[1, 1])).is_err());
    }

    #[test]
    fn closed_form_distances() {
        for n in 2..6 {
            assert_eq!(CodeSpec::repetition(n, 2).unwrap().min_distance(BUDGET).unwrap(), n);
            assert_eq!(CodeSpec::parity_check(n, 2).unwrap().min_distance(BUDGET).unwrap(), 2);
        }
    }

    #[test]
    fn explicit_min_distance_matches_pairs() {
        let words = vec![w(2, &[0, 0, 0]), w(2, &[1, 1, 0]), w(2, &[2, 3, 1]), w(2, &[3, 2, 3])];
        let code = CodeSpec::explicit(3, 2, words.clone(), BUDGET).unwrap();
        let mut oracle = usize::MAX;
        for a in &words {
            for b in &words {
                if a != b {
                    let count = (0..3).filter(|&i| a.values()[i] != b.values()[i]).count();
                    oracle = oracle.min(count);
                }
            }
        }
        assert_eq!(code.min_distance(BUDGET).unwrap(), oracle);
        assert_eq!(code.d(), 2);
        assert_eq!(code.dimension(), Rational::new(2.into(), 2.into()));
    }

    #[test]
    fn explicit_rejects_distance_one() {
        let words = vec![w(1, &[0, 0]), w(1, &[0, 1])];
        assert!(CodeSpec::explicit(2, 1, words, BUDGET).is_err());
    }

    #[test]
    fn enumeration_small_cases() {
        let rep: Vec<_> = CodeSpec::repetition(2, 1).unwrap().enumerate(BUDGET).unwrap().collect();
        assert_eq!(rep, vec![w(1, &[0, 0]), w(1, &[1, 1])]);
        let par: Vec<_> = CodeSpec::parity_check(2, 1).unwrap().enumerate(BUDGET).unwrap().collect();
        assert_eq!(par, vec![w(1, &[0, 0]), w(1, &[1, 1])]);
    }

    #[test]
    fn parity_enumeration_matches_membership_filter() {
        for (n, m) in [(3usize, 2u32), (4, 2), (3, 1), (4, 1)] {
            let code = CodeSpec::parity_check(n, m).unwrap();
            let listed: Vec<_> = code.enumerate(BUDGET).unwrap().collect();
            let space = InputSpace::new(n, m).unwrap();
            let filtered: Vec<_> = (0..space.size() as u64)
                .map(|i| space.word(i))
                .filter(|x| x.values().iter().fold(0, |a, b| a ^ b) == 0)
                .collect();
            assert_eq!(listed, filtered);
            assert_eq!(listed.len() as u128, 1u128 << (m as usize * (n - 1)));
            assert_eq!(code.dimension(), Rational::from_integer(((n - 1) as i64).into()));
        }
        assert_eq!(CodeSpec::parity_check(3, 2).unwrap().enumerate(BUDGET).unwrap().count(), 16);
    }

    #[test]
    fn enumeration_budget_is_enforced() {
        let code = CodeSpec::parity_check(4, 8).unwrap();
        assert!(matches!(code.enumerate(1 << 20), Err(Error::Capacity { .. })));
    }

    #[test]
    fn nearest_codeword_majority() {
        let rep = CodeSpec::repetition(3, 2).unwrap();
        assert_eq!(
            rep.nearest_codeword(&w(2, &[1, 1, 2]), BUDGET).unwrap(),
            (w(2, &[1, 1, 1]), 1)
        );
        assert_eq!(
            rep.nearest_codeword(&w(2, &[2, 2, 2]), BUDGET).unwrap(),
            (w(2, &[2, 2, 2]), 0)
        );
    }

    #[test]
    fn nearest_codeword_matches_full_scan() {
        let rep = CodeSpec::repetition(3, 2).unwrap();
        let space = InputSpace::new(3, 2).unwrap();
        for i in 0..space.size() as u64 {
            let x = space.word(i);
            let mut best: Option<(Word, usize)> = None;
            for a in 0..4u64 {
                let c = w(2, &[a, a, a]);
                let d = (0..3).filter(|&j| c.values()[j] != x.values()[j]).count();
                if best.as_ref().is_none_or(|b| d < b.1) {
                    best = Some((c, d));
                }
            }
            assert_eq!(rep.nearest_codeword(&x, BUDGET).unwrap(), best.unwrap());
        }
    }

    #[test]
    fn reed_solomon_is_mds() {
        for (n, k, m) in [(3usize, 2usize, 2u32), (4, 2, 2), (4, 2, 3), (5, 3, 3), (6, 2, 3)] {
            let code = CodeSpec::mds(n, k, m, BUDGET).unwrap();
            assert_eq!(code.d(), n - k + 1);
            assert_eq!(code.family(), CodeFamily::Mds);
            assert_eq!(code.dimension(), Rational::from_integer((k as i64).into()));
            assert_eq!(code.size(), Some(1u128 << (m as usize * k)));
        }
        assert!(CodeSpec::mds(5, 2, 2, BUDGET).is_err());
    }

    #[test]
    fn hex_file_roundtrip() {
        let words = vec![w(3, &[0, 0, 0]), w(3, &[5, 5, 1]), w(3, &[7, 2, 6])];
        let code = CodeSpec::explicit(3, 3, words, BUDGET).unwrap();
        let text = code.to_explicit_text(BUDGET).unwrap();
        assert_eq!(text.lines().nth(2).unwrap(), "169");
        let back = CodeSpec::from_explicit_text(&text, BUDGET).unwrap();
        let a: Vec<_> = code.enumerate(BUDGET).unwrap().collect();
        let b: Vec<_> = back.enumerate(BUDGET).unwrap().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn hex_rejects_bad_input() {
        assert!(Word::from_hex("1ff", 2, 4).is_err());
        assert!(Word::from_hex("4", 1 + 1, 1).is_err());
        assert!(CodeSpec::from_explicit_text("3\n", BUDGET).is_err());
    }

    #[test]
    fn non_power_of_two_dimension_rounds_up() {
        let words = vec![w(2, &[0, 0]), w(2, &[1, 1]), w(2, &[2, 2])];
        let code = CodeSpec::explicit(2, 2, words, BUDGET).unwrap();
        assert!(!code.dimension_is_exact());
        assert_eq!(code.size_bits(), 2);
    }

    proptest! {
        #[test]
        fn hamming_matches_recount(a in proptest::collection::vec(0u64..4, 4), b in proptest::collection::vec(0u64..4, 4)) {
            let x = w(2, &a);
            let y = w(2, &b);
            let mut count = 0;
            for i in 0..4 {
                if a[i] != b[i] {
                    count += 1;
                }
            }
            prop_assert_eq!(hamming_distance(&x, &y).unwrap(), count);
        }

        #[test]
        fn membership_iff_nearest_distance_zero(s in proptest::collection::vec(0u64..4, 3)) {
            let x = w(2, &s);
            let words = vec![w(2, &[0, 0, 0]), w(2, &[1, 1, 0]), w(2, &[2, 3, 1]), w(2, &[3, 2, 3])];
            for code in [
                CodeSpec::repetition(3, 2).unwrap(),
                CodeSpec::parity_check(3, 2).unwrap(),
                CodeSpec::explicit(3, 2, words, BUDGET).unwrap(),
            ] {
                let (_, d) = code.nearest_codeword(&x, BUDGET).unwrap();
                prop_assert_eq!(code.contains(&x).unwrap(), d == 0);
            }
        }

        #[test]
        fn input_space_index_roundtrip(n in 2usize..5, m in 1u32..5, seed in any::<u64>()) {
            let space = InputSpace::new(n, m).unwrap();
            let index = seed % space.size() as u64;
            prop_assert_eq!(space.index_of(&space.word(index)), index);
        }
    }
}
