//! Truncated noncommutative power series and the Magnus embedding of free
//! groups.
//!
//! A free group on `r` generators embeds into the units of
//! `Z/ℓ^k⟨⟨z_1, …, z_r⟩⟩` by `γ_j ↦ 1 + z_j`. Truncating at degree `N`
//! identifies the image of `π/[π]_{N+1}` with constant-term-one series whose
//! homogeneous pieces are built from Lie elements (see [`malcev`]).

pub mod hall;
pub mod malcev;
pub mod series;
pub mod word;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use hall::{hall_basis, lie_decompose, witt_number, BracketTree, LieBasis};
pub use malcev::MalcevBasis;
pub use series::{GroupElement, SeriesShape, TruncatedSeries};
pub use word::{magnus_embed, Exponent, FreeWord, Letter};

/// A noncommutative monomial `z_{J(1)} ⋯ z_{J(n)}`, stored as the 1-based
/// generator indices `J(1), …, J(n)`. The empty word is the constant monomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct MonomialIndex(Vec<usize>);

impl MonomialIndex {
    pub fn new(letters: Vec<usize>) -> Self {
        MonomialIndex(letters)
    }

    pub fn constant() -> Self {
        MonomialIndex(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn check_rank(&self, r: usize) -> Result<()> {
        match self.0.iter().find(|&&g| g == 0 || g > r) {
            Some(&index) => Err(Error::BadGenerator { index, rank: r }),
            None => Ok(()),
        }
    }

    /// Big-endian rank among the `r^degree` monomials of this degree.
    pub fn rank(&self, r: usize) -> usize {
        self.0.iter().fold(0, |acc, &g| acc * r + (g - 1))
    }

    pub fn from_rank(r: usize, degree: usize, mut rank: usize) -> Self {
        let mut letters = vec![0; degree];
        for slot in letters.iter_mut().rev() {
            *slot = rank % r + 1;
            rank /= r;
        }
        MonomialIndex(letters)
    }

    /// All `r^n` functions `{1..n} → {1..r}` in rank order.
    pub fn all(r: usize, n: usize) -> impl Iterator<Item = MonomialIndex> {
        (0..r.pow(n as u32)).map(move |i| MonomialIndex::from_rank(r, n, i))
    }

    /// Number of positions taking the value `g`.
    pub fn count(&self, g: usize) -> usize {
        self.0.iter().filter(|&&x| x == g).count()
    }
}

impl fmt::Display for MonomialIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.0 {
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MonomialIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J({self})")
    }
}

impl FromStr for MonomialIndex {
    type Err = Error;

    /// Digit strings: `"12"` is `z_1 z_2`, `""` the constant.
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c.to_digit(10) {
                Some(d) if d > 0 => Ok(d as usize),
                _ => Err(Error::Parse(format!("bad monomial {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(MonomialIndex)
    }
}

impl TryFrom<String> for MonomialIndex {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<MonomialIndex> for String {
    fn from(m: MonomialIndex) -> String {
        m.to_string()
    }
}

impl From<&[usize]> for MonomialIndex {
    fn from(letters: &[usize]) -> Self {
        MonomialIndex(letters.to_vec())
    }
}
