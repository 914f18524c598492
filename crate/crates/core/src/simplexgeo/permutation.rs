use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A permutation of `{1..n}`, stored zero-based: `images[i] = σ(i+1) - 1`.
///
/// Ordering is lexicographic on one-line notation, which is the order in
/// which the search engine visits children.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// From zero-based images.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection on 0..{n}"
                )));
            }
        }
        if n == 0 {
            return Err(Error::InvalidPermutation("empty permutation".into()));
        }
        Ok(Permutation { images })
    }

    /// From one-line notation with 1-based images.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation(format!(
                "{images:?}: images are 1-based"
            )));
        }
        Permutation::new(images.iter().map(|&i| i - 1).collect())
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Zero-based image of zero-based `i`.
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// All `n!` permutations in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation {
                images: current.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1])
            else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).expect("exists");
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    /// One-line notation: `132` for `n <= 9`, dot-separated (`1.10.2...`)
    /// otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n() <= 9 { "" } else { "." };
        for (k, i) in self.images.iter().enumerate() {
            if k > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{}", i + 1)?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPermutation(format!("cannot parse {s:?}"));
        let images: Vec<usize> = if s.contains('.') {
            s.split('.')
                .map(|p| p.parse().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        Permutation::from_one_line(&images)
    }
}

/// A word `σ_1 ... σ_m` of permutations naming the sub-simplex
/// `Con(G_{σ_1} ··· G_{σ_m})`. The empty word names `Δ_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PermutationWord(Vec<Permutation>);

impl PermutationWord {
    pub fn empty() -> Self {
        PermutationWord(Vec::new())
    }

    pub fn new(word: Vec<Permutation>) -> Result<Self> {
        if let Some(first) = word.first() {
            if let Some(bad) = word.iter().find(|p| p.n() != first.n()) {
                return Err(Error::InvalidPermutation(format!(
                    "word mixes permutations of {} and {} points",
                    first.n(),
                    bad.n()
                )));
            }
        }
        Ok(PermutationWord(word))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Permutation] {
        &self.0
    }

    pub fn child(&self, sigma: Permutation) -> PermutationWord {
        let mut w = self.0.clone();
        w.push(sigma);
        PermutationWord(w)
    }

    pub fn parent(&self) -> Option<PermutationWord> {
        if self.0.is_empty() {
            None
        } else {
            Some(PermutationWord(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    /// All words of length `m` over `S_n`, in lexicographic order.
    pub fn all_of_length(n: usize, m: usize) -> Vec<PermutationWord> {
        let perms = Permutation::all(n);
        let mut words = vec![PermutationWord::empty()];
        for _ in 0..m {
            words = words
                .iter()
                .flat_map(|w| perms.iter().map(move |p| w.child(p.clone())))
                .collect();
        }
        words
    }
}

impl fmt::Display for PermutationWord {
    /// Comma-separated one-line notations; the empty word prints as `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for PermutationWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" || s.is_empty() {
            return Ok(PermutationWord::empty());
        }
        let perms = s
            .split(',')
            .map(|p| p.trim().parse())
            .collect::<Result<Vec<Permutation>>>()?;
        PermutationWord::new(perms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_in_lexicographic_order() {
        let all: Vec<String> = Permutation::all(3).iter().map(|p| p.to_string()).collect();
        assert_eq!(all, ["123", "132", "213", "231", "312", "321"]);
        assert_eq!(Permutation::all(4).len(), 24);
        assert_eq!(Permutation::all(1).len(), 1);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_one_line(&[1, 1]).is_err());
        assert!(Permutation::from_one_line(&[1, 3]).is_err());
        assert!(Permutation::from_one_line(&[0, 1]).is_err());
        assert!("12a".parse::<Permutation>().is_err());
        assert!("1,2".parse::<Permutation>().is_err());
    }

    #[test]
    fn word_text_round_trip() {
        let w: PermutationWord = "132,213".parse().unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(w.to_string(), "132,213");
        assert_eq!("-".parse::<PermutationWord>().unwrap(), PermutationWord::empty());
        assert!("12,123".parse::<PermutationWord>().is_err());

        let big = Permutation::from_one_line(&[10, 1, 2, 3, 4, 5, 6, 7, 8, 9]).unwrap();
        assert_eq!(big.to_string(), "10.1.2.3.4.5.6.7.8.9");
        assert_eq!(big.to_string().parse::<Permutation>().unwrap(), big);
    }

    #[test]
    fn words_of_length() {
        assert_eq!(PermutationWord::all_of_length(3, 2).len(), 36);
        assert_eq!(PermutationWord::all_of_length(2, 0), vec![PermutationWord::empty()]);
        let w = PermutationWord::all_of_length(2, 2);
        assert!(w.windows(2).all(|p| p[0] < p[1]));
    }
}
