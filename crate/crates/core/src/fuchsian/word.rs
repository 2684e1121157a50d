use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::FuchsianError;

/// A syllable `Tⁿ` (`n ≠ 0`) or `Rᵉ` (`e ∈ {1, 2}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    T(i64),
    R(u8),
}

impl Letter {
    /// Contribution to word length: `|n|` for `Tⁿ`, one for `R` or `R²`.
    pub fn length(self) -> u64 {
        match self {
            Letter::T(n) => n.unsigned_abs(),
            Letter::R(_) => 1,
        }
    }

    pub fn inverse(self) -> Letter {
        match self {
            Letter::T(n) => Letter::T(-n),
            Letter::R(e) => Letter::R(3 - e),
        }
    }

    fn same_factor(self, other: Letter) -> bool {
        matches!(
            (self, other),
            (Letter::T(_), Letter::T(_)) | (Letter::R(_), Letter::R(_))
        )
    }

    /// Product of two syllables from the same factor; `None` is the
    /// identity.
    fn merge(self, other: Letter) -> Option<Letter> {
        match (self, other) {
            (Letter::T(a), Letter::T(b)) => {
                let n = a.checked_add(b).expect("exponent overflow");
                (n != 0).then_some(Letter::T(n))
            }
            (Letter::R(a), Letter::R(b)) => {
                let e = (a + b) % 3;
                (e != 0).then_some(Letter::R(e))
            }
            _ => unreachable!("merge across factors"),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::T(1) => write!(f, "T"),
            Letter::T(n) => write!(f, "T^{n}"),
            Letter::R(1) => write!(f, "R"),
            Letter::R(e) => write!(f, "R^{e}"),
        }
    }
}

/// An element of `⟨R | R³⟩ * ⟨T⟩` in normal form: syllables alternate
/// between the two factors.
///
/// Words read as products, so `T R` is the map `z ↦ T(R(z))`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    /// Multiplies the letters out into normal form.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = GroupWord::identity();
        for l in letters {
            w.push_right(l);
        }
        w
    }

    pub fn t(n: i64) -> Self {
        GroupWord::from_letters([Letter::T(n)])
    }

    pub fn r(e: i64) -> Self {
        GroupWord::from_letters([Letter::R(e.rem_euclid(3) as u8)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn length(&self) -> u64 {
        self.letters.iter().map(|l| l.length()).sum()
    }

    fn push_right(&mut self, l: Letter) {
        if matches!(l, Letter::T(0) | Letter::R(0)) {
            return;
        }
        match self.letters.last() {
            Some(&last) if last.same_factor(l) => {
                self.letters.pop();
                if let Some(m) = last.merge(l) {
                    self.letters.push(m);
                }
            }
            _ => self.letters.push(l),
        }
    }

    /// `letter · self`.
    pub fn prepend(&self, l: Letter) -> GroupWord {
        GroupWord::from_letters(std::iter::once(l).chain(self.letters.iter().copied()))
    }

    /// The product `self · rhs`. Cancellation can cascade across several
    /// syllables.
    pub fn mul(&self, rhs: &GroupWord) -> GroupWord {
        let mut out = self.clone();
        for &l in &rhs.letters {
            out.push_right(l);
        }
        out
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Every normal form of length at most `max_len`, shortest first within
    /// each branch of a depth-first walk. The identity is included.
    pub fn enumerate(max_len: u64) -> Vec<GroupWord> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        walk(&mut stack, max_len, &mut |letters| {
            out.push(GroupWord {
                letters: letters.to_vec(),
            })
        });
        out
    }
}

/// Depth-first walk over normal forms of length at most `budget`,
/// extending on the right.
pub(super) fn walk(stack: &mut Vec<Letter>, budget: u64, visit: &mut dyn FnMut(&[Letter])) {
    visit(stack);
    let last = stack.last().copied();
    if !matches!(last, Some(Letter::R(_))) && budget >= 1 {
        for e in [1, 2] {
            stack.push(Letter::R(e));
            walk(stack, budget - 1, visit);
            stack.pop();
        }
    }
    if !matches!(last, Some(Letter::T(_))) {
        for n in 1..=budget as i64 {
            for l in [Letter::T(n), Letter::T(-n)] {
                stack.push(l);
                walk(stack, budget - n as u64, visit);
                stack.pop();
            }
        }
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("id");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Parses whitespace-separated `T`, `R`, `T^n`, `R^n` (any integer
/// exponent) and normalizes. `id` and the empty string are the identity.
impl FromStr for GroupWord {
    type Err = FuchsianError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if trimmed.is_empty() || trimmed == "id" {
            return Ok(GroupWord::identity());
        }
        let mut word = GroupWord::identity();
        let mut pos = s.len() - s.trim_start().len();
        for token in trimmed.split_whitespace() {
            let offset = pos + s[pos..].find(token).expect("token comes from s");
            let bad = || FuchsianError::WordSyntax {
                input: s.to_string(),
                pos: offset,
            };
            let (base, exp) = match token.split_once('^') {
                Some((b, e)) => (b, e.parse::<i64>().map_err(|_| bad())?),
                None => (token, 1),
            };
            let letter = match base {
                "T" => Letter::T(exp),
                "R" => Letter::R(exp.rem_euclid(3) as u8),
                _ => return Err(bad()),
            };
            word.push_right(letter);
            pos = offset + token.len();
        }
        Ok(word)
    }
}

impl Serialize for GroupWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn syntax_round_trip() {
        for src in ["T^3 R T^-1 R^2", "R T^2 R^2", "T", "R^2", "id"] {
            let w: GroupWord = src.parse().unwrap();
            assert_eq!(w.to_string(), src);
        }
        assert_eq!("T T R R R T^-2".parse::<GroupWord>().unwrap().to_string(), "id");
        assert_eq!("R^-1".parse::<GroupWord>().unwrap(), GroupWord::r(2));
        assert_eq!("  ".parse::<GroupWord>().unwrap(), GroupWord::identity());
        let err = "T R Q".parse::<GroupWord>().unwrap_err();
        assert_eq!(
            err,
            FuchsianError::WordSyntax {
                input: "T R Q".into(),
                pos: 4
            }
        );
        assert!("T^x".parse::<GroupWord>().is_err());
    }

    #[test]
    fn products_cancel() {
        let w: GroupWord = "T^3 R T^-1 R^2".parse().unwrap();
        assert!(w.mul(&w.inverse()).is_identity());
        assert!(w.inverse().mul(&w).is_identity());
        assert_eq!(w.length(), 6);
        assert_eq!(w.prepend(Letter::T(-3)).to_string(), "R T^-1 R^2");
        assert_eq!(GroupWord::r(1).mul(&GroupWord::r(1)), GroupWord::r(2));
        assert!(GroupWord::r(3).is_identity());
    }

    /// Oracle: normalize every sequence over {T, T⁻¹, R, R²} of length at
    /// most `n`; normalization never increases length, so the distinct
    /// results are exactly the normal forms of length at most `n`.
    fn brute_force(n: usize) -> HashSet<GroupWord> {
        let gens = [Letter::T(1), Letter::T(-1), Letter::R(1), Letter::R(2)];
        let mut out = HashSet::new();
        let mut frontier = vec![Vec::<Letter>::new()];
        for _ in 0..=n {
            let mut next = Vec::new();
            for seq in &frontier {
                out.insert(GroupWord::from_letters(seq.iter().copied()));
                for g in gens {
                    let mut s = seq.clone();
                    s.push(g);
                    next.push(s);
                }
            }
            frontier = next;
        }
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 0..=6 {
            let words = GroupWord::enumerate(n);
            let set: HashSet<_> = words.iter().cloned().collect();
            assert_eq!(set.len(), words.len(), "duplicates at {n}");
            assert_eq!(set, brute_force(n as usize), "length {n}");
            assert!(words.iter().all(|w| w.length() <= n));
        }
        assert_eq!(GroupWord::enumerate(8).len(), 4675);
    }
}
