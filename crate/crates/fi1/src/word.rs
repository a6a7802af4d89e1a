//! Words over a signed alphabet and their surface syntax.
//!
//! Surface syntax: letters are identifiers `[a-z][a-z0-9]*`, a trailing
//! apostrophe marks the formal inverse, tokens are separated by whitespace.
//! A token built from a single repeated letter character (e.g. `xx'x`) is
//! accepted as a compact single-letter-alphabet word.

use crate::error::{Fi1Error, Result};
use std::fmt;

/// Sign of a letter occurrence: `Plus` is the generator itself, `Minus` its
/// formal inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A non-empty word over a named alphabet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    alphabet: Vec<String>,
    letters: Vec<(String, Sign)>,
}

pub fn valid_letter_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
}

impl Word {
    /// Builds a word, checking non-emptiness, letter-name validity and
    /// alphabet membership.
    pub fn new(alphabet: Vec<String>, letters: Vec<(String, Sign)>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Fi1Error::EmptyWord);
        }
        for name in &alphabet {
            if !valid_letter_name(name) {
                return Err(Fi1Error::BadLetterName(name.clone()));
            }
        }
        for (name, _) in &letters {
            if !alphabet.iter().any(|a| a == name) {
                return Err(Fi1Error::LetterNotInAlphabet(name.clone()));
            }
        }
        Ok(Word { alphabet, letters })
    }

    /// Parses the surface syntax, inferring the alphabet in order of first
    /// appearance.
    pub fn parse(input: &str) -> Result<Self> {
        let mut letters: Vec<(String, Sign)> = Vec::new();
        for token in input.split_whitespace() {
            parse_token(token, &mut letters)?;
        }
        let mut alphabet: Vec<String> = Vec::new();
        for (name, _) in &letters {
            if !alphabet.iter().any(|a| a == name) {
                alphabet.push(name.clone());
            }
        }
        Word::new(alphabet, letters)
    }

    /// Parses against a fixed alphabet; letters outside it are rejected.
    pub fn parse_with_alphabet(input: &str, alphabet: &[String]) -> Result<Self> {
        let w = Self::parse(input)?;
        Word::new(alphabet.to_vec(), w.letters)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn letters(&self) -> &[(String, Sign)] {
        &self.letters
    }

    /// Length in letters; words are never empty.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Formal inverse: reversed letters with flipped signs.
    pub fn inverse(&self) -> Word {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|(n, s)| (n.clone(), s.flip()))
            .collect();
        Word {
            alphabet: self.alphabet.clone(),
            letters,
        }
    }

    /// Concatenation; the alphabet is the union in left-to-right order.
    pub fn concat(&self, rhs: &Word) -> Word {
        let mut alphabet = self.alphabet.clone();
        for name in &rhs.alphabet {
            if !alphabet.iter().any(|a| a == name) {
                alphabet.push(name.clone());
            }
        }
        let mut letters = self.letters.clone();
        letters.extend(rhs.letters.iter().cloned());
        Word { alphabet, letters }
    }

    pub fn from_letter(name: &str, sign: Sign) -> Result<Word> {
        Word::new(vec![name.to_string()], vec![(name.to_string(), sign)])
    }
}

/// A token is either one identifier with an optional trailing apostrophe, or
/// a compact run over one repeated letter character. The compact reading
/// wins when every alphabetic character in the token is the same letter and
/// the run has at least two letters; `xx` therefore means `x x`, while `ab`
/// stays a two-character identifier.
fn parse_token(token: &str, out: &mut Vec<(String, Sign)>) -> Result<()> {
    if let Some(run) = parse_compact_run(token) {
        if run.len() >= 2 {
            out.extend(run);
            return Ok(());
        }
    }
    let (name, sign) = match token.strip_suffix('\'') {
        Some(base) => (base, Sign::Minus),
        None => (token, Sign::Plus),
    };
    if valid_letter_name(name) {
        out.push((name.to_string(), sign));
        Ok(())
    } else {
        Err(Fi1Error::Parse(token.to_string(), "word token"))
    }
}

fn parse_compact_run(token: &str) -> Option<Vec<(String, Sign)>> {
    let mut run: Vec<(String, Sign)> = Vec::new();
    let mut the_letter: Option<char> = None;
    let mut chars = token.chars().peekable();
    while let Some(c) = chars.next() {
        if !c.is_ascii_lowercase() {
            return None;
        }
        match the_letter {
            None => the_letter = Some(c),
            Some(l) if l == c => {}
            Some(_) => return None,
        }
        let sign = if chars.peek() == Some(&'\'') {
            chars.next();
            Sign::Minus
        } else {
            Sign::Plus
        };
        run.push((c.to_string(), sign));
    }
    if run.is_empty() {
        None
    } else {
        Some(run)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, sign)) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match sign {
                Sign::Plus => write!(f, "{name}")?,
                Sign::Minus => write!(f, "{name}'")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_spaced() {
        let w = Word::parse("x x' y1").unwrap();
        assert_eq!(w.alphabet(), &["x".to_string(), "y1".to_string()]);
        assert_eq!(
            w.letters(),
            &[
                ("x".to_string(), Sign::Plus),
                ("x".to_string(), Sign::Minus),
                ("y1".to_string(), Sign::Plus)
            ]
        );
    }

    #[test]
    fn parse_compact_single_letter() {
        let w = Word::parse("xx'x").unwrap();
        assert_eq!(w.alphabet(), &["x".to_string()]);
        assert_eq!(w.len(), 3);
        assert_eq!(w.letters()[1], ("x".to_string(), Sign::Minus));

        // A doubled letter with no apostrophe is still a compact run.
        let w = Word::parse("xx").unwrap();
        assert_eq!(w.len(), 2);
    }

    #[test]
    fn parse_multichar_identifiers() {
        let w = Word::parse("ab ab'").unwrap();
        assert_eq!(w.alphabet(), &["ab".to_string()]);
        assert_eq!(w.len(), 2);
        // Mixed-letter compact runs are rejected rather than guessed at.
        assert!(Word::parse("xy'x").is_err());
    }

    #[test]
    fn empty_and_invalid() {
        assert!(Word::parse("").is_err());
        assert!(Word::parse("X").is_err());
        assert!(Word::parse("1x").is_err());
        assert!(Word::new(vec!["x".to_string()], vec![("y".to_string(), Sign::Plus)]).is_err());
    }

    #[test]
    fn inverse_reverses_and_flips() {
        let w = Word::parse("x x y'").unwrap();
        assert_eq!(w.inverse().to_string(), "y x' x'");
        assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn display_roundtrip() {
        let w = Word::parse("x' x x x x x' x' x' x x").unwrap();
        assert_eq!(Word::parse(&w.to_string()).unwrap(), w);
    }
}
