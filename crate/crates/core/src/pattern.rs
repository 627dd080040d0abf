//! Ending strings over a finite alphabet.
//!
//! Symbols are stored as small integers. For a coin (`c = 2`) symbol 0 is
//! rendered as `H` and symbol 1 as `T`; for larger alphabets a pattern is
//! written as a comma separated list of face indices in `0..c`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Alphabet size of a fair coin.
pub const COIN: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("pattern is empty")]
    Empty,
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(u32),
    #[error("unknown character {ch:?} at position {pos} (expected H or T)")]
    UnknownChar { ch: char, pos: usize },
    #[error("invalid face token {0:?}")]
    BadFace(String),
    #[error("face index {face} out of range for an alphabet of size {alphabet}")]
    FaceOutOfRange { face: u32, alphabet: u32 },
    #[error("complement is only defined for a coin (alphabet size 2), got {0}")]
    NotACoin(u32),
    #[error("pattern length must be at least 1")]
    ZeroLength,
}

/// A finite nonempty word over `0..alphabet_size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    symbols: Vec<u32>,
    alphabet_size: u32,
}

/// One maximal block of identical symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Run {
    pub symbol: u32,
    pub len: usize,
}

/// Maximal-run factorization of a pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RunDecomposition {
    pub runs: Vec<Run>,
}

impl RunDecomposition {
    pub fn len(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.runs.iter().map(|r| r.len).collect()
    }
}

impl Pattern {
    pub fn new(symbols: Vec<u32>, alphabet_size: u32) -> Result<Self, PatternError> {
        if alphabet_size < 2 {
            return Err(PatternError::AlphabetTooSmall(alphabet_size));
        }
        if symbols.is_empty() {
            return Err(PatternError::Empty);
        }
        if let Some(&face) = symbols.iter().find(|&&s| s >= alphabet_size) {
            return Err(PatternError::FaceOutOfRange {
                face,
                alphabet: alphabet_size,
            });
        }
        Ok(Pattern {
            symbols,
            alphabet_size,
        })
    }

    /// Coin pattern with alternating runs of the given lengths, starting with
    /// `first` (0 = H, 1 = T). `coin_runs(0, &[2, 1])` is `HHT`.
    pub fn coin_runs(first: u32, lengths: &[usize]) -> Result<Self, PatternError> {
        if first >= COIN {
            return Err(PatternError::FaceOutOfRange {
                face: first,
                alphabet: COIN,
            });
        }
        let mut symbols = Vec::with_capacity(lengths.iter().sum());
        let mut sym = first;
        for &len in lengths {
            if len == 0 {
                return Err(PatternError::ZeroLength);
            }
            symbols.extend(std::iter::repeat_n(sym, len));
            sym = 1 - sym;
        }
        Pattern::new(symbols, COIN)
    }

    /// `len` copies of `symbol`.
    pub fn constant(symbol: u32, len: usize, alphabet_size: u32) -> Result<Self, PatternError> {
        if len == 0 {
            return Err(PatternError::ZeroLength);
        }
        Pattern::new(vec![symbol; len], alphabet_size)
    }

    /// Alternating coin pattern of length `len` starting with heads.
    pub fn alternating(len: usize) -> Result<Self, PatternError> {
        if len == 0 {
            return Err(PatternError::ZeroLength);
        }
        Pattern::new((0..len).map(|i| (i % 2) as u32).collect(), COIN)
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// Always false; patterns are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn is_coin(&self) -> bool {
        self.alphabet_size == COIN
    }

    pub fn is_constant(&self) -> bool {
        self.symbols.windows(2).all(|w| w[0] == w[1])
    }

    /// True iff every adjacent pair of symbols differs.
    pub fn is_alternating(&self) -> bool {
        self.symbols.windows(2).all(|w| w[0] != w[1])
    }

    pub fn runs(&self) -> RunDecomposition {
        let mut runs: Vec<Run> = Vec::new();
        for &sym in &self.symbols {
            match runs.last_mut() {
                Some(run) if run.symbol == sym => run.len += 1,
                _ => runs.push(Run {
                    symbol: sym,
                    len: 1,
                }),
            }
        }
        RunDecomposition { runs }
    }

    pub fn reverse(&self) -> Pattern {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        Pattern {
            symbols,
            alphabet_size: self.alphabet_size,
        }
    }

    /// Swap heads and tails.
    pub fn complement(&self) -> Result<Pattern, PatternError> {
        if !self.is_coin() {
            return Err(PatternError::NotACoin(self.alphabet_size));
        }
        Ok(Pattern {
            symbols: self.symbols.iter().map(|&s| 1 - s).collect(),
            alphabet_size: COIN,
        })
    }

    /// The length-`k` prefix, or `None` when `k` is 0 or exceeds the length.
    pub fn prefix(&self, k: usize) -> Option<Pattern> {
        if k == 0 || k > self.len() {
            return None;
        }
        Some(Pattern {
            symbols: self.symbols[..k].to_vec(),
            alphabet_size: self.alphabet_size,
        })
    }

    pub fn starts_with(&self, stream: &[u32]) -> bool {
        self.symbols.starts_with(stream)
    }

    /// Canonical text form: `HHT` for a coin, `1,1,1` otherwise.
    pub fn render(&self) -> String {
        render_symbols(&self.symbols, self.alphabet_size)
    }
}

/// Render an arbitrary symbol stream in the same notation as [`Pattern::render`].
pub fn render_symbols(symbols: &[u32], alphabet_size: u32) -> String {
    if alphabet_size == COIN {
        symbols
            .iter()
            .map(|&s| if s == 0 { 'H' } else { 'T' })
            .collect()
    } else {
        symbols
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Parse a coin pattern (`alphabet_size == 2`, letters H/T in any case) or a
/// die pattern (comma and/or whitespace separated face indices).
pub fn parse(text: &str, alphabet_size: u32) -> Result<Pattern, PatternError> {
    if alphabet_size < 2 {
        return Err(PatternError::AlphabetTooSmall(alphabet_size));
    }
    let text = text.trim();
    if text.is_empty() {
        return Err(PatternError::Empty);
    }
    let symbols = if alphabet_size == COIN {
        text.chars()
            .enumerate()
            .map(|(pos, ch)| match ch.to_ascii_uppercase() {
                'H' => Ok(0),
                'T' => Ok(1),
                _ => Err(PatternError::UnknownChar { ch, pos }),
            })
            .collect::<Result<Vec<_>, _>>()?
    } else {
        text.split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|tok| !tok.is_empty())
            .map(|tok| {
                let face: u32 = tok
                    .parse()
                    .map_err(|_| PatternError::BadFace(tok.to_string()))?;
                if face >= alphabet_size {
                    Err(PatternError::FaceOutOfRange {
                        face,
                        alphabet: alphabet_size,
                    })
                } else {
                    Ok(face)
                }
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    Pattern::new(symbols, alphabet_size)
}

impl FromStr for Pattern {
    type Err = PatternError;

    /// Parses a coin pattern.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s, COIN)
    }
}

/// Iterator over all `c^len` patterns of a given length in lexicographic order.
#[derive(Debug, Clone)]
pub struct Enumerate {
    current: Option<Vec<u32>>,
    alphabet_size: u32,
}

impl Iterator for Enumerate {
    type Item = Pattern;

    fn next(&mut self) -> Option<Pattern> {
        let out = self.current.clone()?;
        // odometer increment, last symbol fastest
        let cur = self.current.as_mut().unwrap();
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < self.alphabet_size {
                break;
            }
            cur[i] = 0;
        }
        Some(Pattern {
            symbols: out,
            alphabet_size: self.alphabet_size,
        })
    }
}

pub fn enumerate(len: usize, alphabet_size: u32) -> Result<Enumerate, PatternError> {
    if len == 0 {
        return Err(PatternError::ZeroLength);
    }
    if alphabet_size < 2 {
        return Err(PatternError::AlphabetTooSmall(alphabet_size));
    }
    Ok(Enumerate {
        current: Some(vec![0; len]),
        alphabet_size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn p(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    fn run_pairs(s: &str) -> Vec<(char, usize)> {
        p(s).runs()
            .runs
            .iter()
            .map(|r| (if r.symbol == 0 { 'H' } else { 'T' }, r.len))
            .collect()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(run_pairs("HHT"), vec![('H', 2), ('T', 1)]);
        assert_eq!(p("hth"), p("HTH"));
        let die = parse("1,1,1", 6).unwrap();
        assert_eq!(die.symbols(), &[1, 1, 1]);
        assert_eq!(die.alphabet_size(), 6);
        assert_eq!(die.render(), "1,1,1");
        assert_eq!(parse("0 5, 2", 6).unwrap().symbols(), &[0, 5, 2]);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse("", 2), Err(PatternError::Empty));
        assert_eq!(parse("   ", 2), Err(PatternError::Empty));
        assert_eq!(
            parse("HXT", 2),
            Err(PatternError::UnknownChar { ch: 'X', pos: 1 })
        );
        assert_eq!(
            parse("1,6", 6),
            Err(PatternError::FaceOutOfRange {
                face: 6,
                alphabet: 6
            })
        );
        assert!(matches!(parse("1,a", 6), Err(PatternError::BadFace(_))));
        assert_eq!(parse(" , ", 3), Err(PatternError::Empty));
        assert_eq!(parse("H", 1), Err(PatternError::AlphabetTooSmall(1)));
    }

    #[test]
    fn runs_examples() {
        assert_eq!(run_pairs("HHTTTH"), vec![('H', 2), ('T', 3), ('H', 1)]);
        assert_eq!(run_pairs("HHHH"), vec![('H', 4)]);
        assert_eq!(
            run_pairs("HTHT"),
            vec![('H', 1), ('T', 1), ('H', 1), ('T', 1)]
        );
    }

    #[test]
    fn reverse_and_complement() {
        assert_eq!(p("HHT").reverse(), p("THH"));
        assert_eq!(p("HTH").reverse(), p("HTH"));
        assert_eq!(p("HHTHTT").reverse(), p("TTHTHH"));
        assert_eq!(p("HHT").complement().unwrap(), p("TTH"));
        assert_eq!(p("HT").complement().unwrap(), p("TH"));
        assert_eq!(p("H").complement().unwrap(), p("T"));
        assert_eq!(
            parse("1,2", 3).unwrap().complement(),
            Err(PatternError::NotACoin(3))
        );
    }

    #[test]
    fn alternating_detection() {
        assert!(p("HTHT").is_alternating());
        assert!(!p("HHT").is_alternating());
        assert!(p("H").is_alternating());
        assert_eq!(Pattern::alternating(5).unwrap(), p("HTHTH"));
    }

    #[test]
    fn coin_runs_builder() {
        assert_eq!(Pattern::coin_runs(0, &[2, 1]).unwrap(), p("HHT"));
        assert_eq!(Pattern::coin_runs(1, &[1, 3]).unwrap(), p("THHH"));
        assert_eq!(
            Pattern::coin_runs(0, &[1, 0]),
            Err(PatternError::ZeroLength)
        );
    }

    #[test]
    fn enumerate_small() {
        let one: Vec<String> = enumerate(1, 2).unwrap().map(|p| p.render()).collect();
        assert_eq!(one, ["H", "T"]);
        let two: Vec<String> = enumerate(2, 2).unwrap().map(|p| p.render()).collect();
        assert_eq!(two, ["HH", "HT", "TH", "TT"]);
        assert_eq!(enumerate(3, 2).unwrap().count(), 8);
        assert_eq!(enumerate(0, 2).unwrap_err(), PatternError::ZeroLength);
    }

    #[test]
    fn enumerate_is_exhaustive_and_sorted() {
        for (len, c) in [(6usize, 2u32), (3, 4), (2, 6)] {
            let all: Vec<Pattern> = enumerate(len, c).unwrap().collect();
            assert_eq!(all.len(), (c as usize).pow(len as u32));
            let distinct: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(distinct.len(), all.len());
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn involutions_exhaustive_to_length_ten() {
        for len in 1..=10 {
            for pat in enumerate(len, 2).unwrap() {
                assert_eq!(pat.reverse().reverse(), pat);
                assert_eq!(pat.complement().unwrap().complement().unwrap(), pat);
                let runs = pat.runs();
                assert_eq!(runs.lengths().iter().sum::<usize>(), len);
                let changes = pat.symbols().windows(2).filter(|w| w[0] != w[1]).count();
                assert_eq!(runs.len(), changes + 1);
            }
        }
    }
}
