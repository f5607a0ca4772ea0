use std::fmt;
use std::str::FromStr;

use crate::coeff::{ModulusContext, Residue};
use crate::error::{Error, Result};
use crate::magnus::GroupElement;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Exponent {
    Int(i64),
    /// A `Z/ℓ^k` exponent, interpreted through the binomial series.
    Residue(Residue),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Letter {
    /// 1-based generator index.
    pub generator: usize,
    pub exponent: Exponent,
}

/// A word in the free group on `γ_1..γ_r`. Adjacent letters are not merged.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord::default()
    }

    pub fn generator(g: usize) -> Self {
        FreeWord::power(g, 1)
    }

    pub fn power(g: usize, e: i64) -> Self {
        let mut w = FreeWord::empty();
        w.push(g, Exponent::Int(e));
        w
    }

    pub fn residue_power(g: usize, e: Residue) -> Self {
        let mut w = FreeWord::empty();
        w.push(g, Exponent::Residue(e));
        w
    }

    /// Appends a letter; zero exponents are skipped.
    pub fn push(&mut self, generator: usize, exponent: Exponent) {
        let trivial = match exponent {
            Exponent::Int(0) => true,
            Exponent::Residue(r) => r.is_zero(),
            _ => false,
        };
        if !trivial {
            self.letters.push(Letter { generator, exponent });
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        FreeWord { letters }
    }

    pub fn inverse(&self) -> FreeWord {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| Letter {
                generator: l.generator,
                exponent: match l.exponent {
                    Exponent::Int(e) => Exponent::Int(-e),
                    Exponent::Residue(r) => Exponent::Residue(-r),
                },
            })
            .collect();
        FreeWord { letters }
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &FreeWord, b: &FreeWord) -> FreeWord {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    /// Replaces each generator `γ_i` by `images[i-1]` (integer exponents only).
    pub fn substitute(&self, images: &[FreeWord]) -> Result<FreeWord> {
        let mut out = FreeWord::empty();
        for l in &self.letters {
            let img = images
                .get(l.generator.wrapping_sub(1))
                .ok_or(Error::BadGenerator { index: l.generator, rank: images.len() })?;
            let Exponent::Int(e) = l.exponent else {
                return Err(Error::Parse("word substitution needs integer exponents".into()));
            };
            let piece = if e < 0 { img.inverse() } else { img.clone() };
            for _ in 0..e.unsigned_abs() {
                out = out.concat(&piece);
            }
        }
        Ok(out)
    }

    /// Largest generator index used.
    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|l| l.generator).max().unwrap_or(0)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            match l.exponent {
                Exponent::Int(1) => write!(f, "{}", l.generator)?,
                Exponent::Int(-1) => write!(f, "-{}", l.generator)?,
                Exponent::Int(e) => write!(f, "{}^{e}", l.generator)?,
                Exponent::Residue(r) => write!(f, "{}^{}r", l.generator, r.value())?,
            }
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = Error;

    /// Whitespace-separated signed generators, e.g. `"1 2 -1 -2"`; a token
    /// may carry an integer exponent, `"2^3"` or `"-1^2"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |t: &str| Error::Parse(format!("bad word token {t:?}"));
        let mut w = FreeWord::empty();
        for token in s.split_whitespace() {
            let (sign, body) = match token.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, token),
            };
            let (gen, exp) = match body.split_once('^') {
                Some((g, e)) => (g, e.parse::<i64>().map_err(|_| bad(token))?),
                None => (body, 1),
            };
            let g: usize = gen.parse().map_err(|_| bad(token))?;
            if g == 0 {
                return Err(bad(token));
            }
            w.push(g, Exponent::Int(sign * exp));
        }
        Ok(w)
    }
}

/// The Magnus image `∏ (1 + z_j)^{e}` of a word, truncated at `degree_bound`.
///
/// Integer exponents are exact for every `ℓ`; residue exponents need
/// `degree_bound < ℓ`.
pub fn magnus_embed(
    word: &FreeWord,
    r: usize,
    degree_bound: usize,
    ctx: ModulusContext,
) -> Result<GroupElement> {
    let mut result = GroupElement::identity(r, degree_bound, ctx);
    let gens = (1..=r)
        .map(|i| GroupElement::generator(r, degree_bound, ctx, i))
        .collect::<Result<Vec<_>>>()?;
    for l in word.letters() {
        let g = gens
            .get(l.generator.wrapping_sub(1))
            .ok_or(Error::BadGenerator { index: l.generator, rank: r })?;
        let factor = match l.exponent {
            Exponent::Int(e) => g.pow_int(e),
            Exponent::Residue(c) => g.power(c)?,
        };
        result = result.mul_unchecked(&factor);
    }
    Ok(result)
}
