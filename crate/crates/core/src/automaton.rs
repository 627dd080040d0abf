//! Prefix automaton of a single pattern.
//!
//! State `q` means the longest suffix of the stream read so far that is a
//! prefix of the pattern has length `q`. State `s` (the pattern length) is
//! the absorbing accept state: the game stops at the first occurrence.

use std::fmt::Write as _;

use thiserror::Error;

use crate::pattern::{render_symbols, Pattern};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("state {state} out of range (automaton has states 0..={accept})")]
    StateOutOfRange { state: usize, accept: usize },
    #[error("symbol {symbol} out of range for an alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: u32, alphabet: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixAutomaton {
    pattern: Pattern,
    table: Vec<usize>,
}

/// Where a stream leaves the automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feed {
    /// The pattern first occurred after this many symbols.
    Accepted(usize),
    /// The whole stream was consumed without an occurrence.
    Alive(usize),
}

impl PrefixAutomaton {
    /// Failure-function construction in `O(s * c)`.
    pub fn build(pattern: &Pattern) -> Self {
        let s = pattern.len();
        let c = pattern.alphabet_size() as usize;
        let sym = pattern.symbols();
        let mut table = vec![0usize; (s + 1) * c];
        table[sym[0] as usize] = 1;
        // `border` tracks the state reached by reading sym[1..q]
        let mut border = 0usize;
        for q in 1..s {
            for a in 0..c {
                table[q * c + a] = table[border * c + a];
            }
            table[q * c + sym[q] as usize] = q + 1;
            border = table[border * c + sym[q] as usize];
        }
        for a in 0..c {
            table[s * c + a] = s;
        }
        PrefixAutomaton {
            pattern: pattern.clone(),
            table,
        }
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn pattern_len(&self) -> usize {
        self.pattern.len()
    }

    pub fn alphabet_size(&self) -> u32 {
        self.pattern.alphabet_size()
    }

    pub fn accept_state(&self) -> usize {
        self.pattern.len()
    }

    pub fn num_states(&self) -> usize {
        self.pattern.len() + 1
    }

    pub fn step(&self, state: usize, symbol: u32) -> Result<usize, AutomatonError> {
        if state > self.accept_state() {
            return Err(AutomatonError::StateOutOfRange {
                state,
                accept: self.accept_state(),
            });
        }
        if symbol >= self.alphabet_size() {
            return Err(AutomatonError::SymbolOutOfRange {
                symbol,
                alphabet: self.alphabet_size(),
            });
        }
        Ok(self.next(state, symbol))
    }

    /// Unchecked transition for hot loops.
    #[inline]
    pub fn next(&self, state: usize, symbol: u32) -> usize {
        self.table[state * self.alphabet_size() as usize + symbol as usize]
    }

    /// Row of successors of `state`, indexed by symbol.
    pub fn row(&self, state: usize) -> &[usize] {
        let c = self.alphabet_size() as usize;
        &self.table[state * c..(state + 1) * c]
    }

    /// Run a stream from state 0, stopping at the first occurrence.
    pub fn feed(&self, stream: &[u32]) -> Result<Feed, AutomatonError> {
        let mut state = 0;
        for (i, &a) in stream.iter().enumerate() {
            state = self.step(state, a)?;
            if state == self.accept_state() {
                return Ok(Feed::Accepted(i + 1));
            }
        }
        Ok(Feed::Alive(state))
    }

    /// Aligned text dump of the transition table.
    pub fn render_table(&self) -> String {
        let c = self.alphabet_size();
        let s = self.accept_state();
        let labels: Vec<String> = (0..c).map(|a| render_symbols(&[a], c)).collect();
        let width = labels
            .iter()
            .map(|l| l.len())
            .chain(std::iter::once(s.to_string().len()))
            .max()
            .unwrap_or(1)
            .max(1);
        let prefix_width = s.max(6);
        let mut out = String::new();
        let _ = write!(out, "{:>5}  {:<prefix_width$}", "state", "prefix");
        for l in &labels {
            let _ = write!(out, "  {:>width$}", l);
        }
        out.push('\n');
        for q in 0..=s {
            let prefix = if q == 0 {
                "-".to_string()
            } else {
                render_symbols(&self.pattern.symbols()[..q], c)
            };
            let mark = if q == s { "*" } else { " " };
            let _ = write!(out, "{:>4}{}  {:<prefix_width$}", q, mark, prefix);
            for &next in self.row(q) {
                let _ = write!(out, "  {:>width$}", next);
            }
            out.push('\n');
        }
        out
    }
}
