//! Upper unitriangular matrices `U_{n+1}` over `Z/ℓ^k`, the character-twisted
//! action on them, and the representations `φ_J` of the free group.
//!
//! Indices are 1-based throughout: `a(i, j)` is the `(i, j)` entry with
//! `1 ≤ i, j ≤ n + 1`.

use std::fmt;
use std::sync::Arc;

use crate::coeff::{ModulusContext, Residue};
use crate::cohomology::{ActedGroup, FiniteGroup};
use crate::error::{Error, Result};
use crate::magnus::{Exponent, FreeWord, GroupElement, MonomialIndex};

/// A character `χ: G → (Z/ℓ^k)^*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    group: Arc<FiniteGroup>,
    ctx: ModulusContext,
    values: Vec<u64>,
}

impl Character {
    pub fn new(group: Arc<FiniteGroup>, ctx: ModulusContext, values: Vec<u64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::InvalidCharacter(format!(
                "{} values for a group of order {}",
                values.len(),
                group.order()
            )));
        }
        let values: Vec<u64> = values.into_iter().map(|v| v % ctx.modulus()).collect();
        if let Some(g) = values.iter().position(|&v| !ctx.is_unit(v)) {
            return Err(Error::InvalidCharacter(format!("χ({g}) = {} is not a unit", values[g])));
        }
        for a in group.elements() {
            for b in group.elements() {
                if values[group.mul(a, b)] != ctx.mul(values[a], values[b]) {
                    return Err(Error::InvalidCharacter(format!("χ({a}·{b}) ≠ χ({a})χ({b})")));
                }
            }
        }
        Ok(Character { group, ctx, values })
    }

    pub fn trivial(group: Arc<FiniteGroup>, ctx: ModulusContext) -> Self {
        let values = vec![1 % ctx.modulus(); group.order()];
        Character { group, ctx, values }
    }

    /// On a cyclic group, `χ(g^i) = u^i` for the presentation generator `g`.
    pub fn from_generator_value(group: Arc<FiniteGroup>, ctx: ModulusContext, u: u64) -> Result<Self> {
        let (gen, order) = group
            .cyclic_presentation()
            .ok_or_else(|| Error::InvalidCharacter("group has no cyclic presentation".into()))?;
        let mut values = vec![0; order];
        let mut x = group.identity();
        let mut v = 1 % ctx.modulus();
        for _ in 0..order {
            values[x] = v;
            x = group.mul(x, gen);
            v = ctx.mul(v, u % ctx.modulus());
        }
        Character::new(group, ctx, values)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn context(&self) -> ModulusContext {
        self.ctx
    }

    pub fn value(&self, g: usize) -> u64 {
        self.values[g]
    }

    pub fn residue(&self, g: usize) -> Residue {
        self.ctx.wrap(self.values[g])
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// `χ(g)^d`.
    pub fn power_value(&self, g: usize, d: usize) -> u64 {
        self.ctx.pow(self.values[g], d as u64)
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 1 % self.ctx.modulus())
    }
}

/// An element of `U_{n+1}`, stored densely.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnipotentMatrix {
    n: usize,
    ctx: ModulusContext,
    data: Vec<u64>,
}

impl UnipotentMatrix {
    pub fn identity(n: usize, ctx: ModulusContext) -> Self {
        let size = n + 1;
        let mut data = vec![0; size * size];
        for i in 0..size {
            data[i * size + i] = 1 % ctx.modulus();
        }
        UnipotentMatrix { n, ctx, data }
    }

    /// Builds a matrix from its strictly upper entries `((i, j), a_ij)`.
    pub fn from_entries(
        n: usize,
        ctx: ModulusContext,
        entries: impl IntoIterator<Item = ((usize, usize), i64)>,
    ) -> Result<Self> {
        let mut m = UnipotentMatrix::identity(n, ctx);
        for ((i, j), v) in entries {
            m.set(i, j, ctx.residue(v))?;
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.n + 1
    }

    pub fn context(&self) -> ModulusContext {
        self.ctx
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.size() + (j - 1)
    }

    pub(crate) fn raw(&self, i: usize, j: usize) -> u64 {
        self.data[self.idx(i, j)]
    }

    /// The entry `a_ij`.
    pub fn a(&self, i: usize, j: usize) -> Residue {
        self.ctx.wrap(self.raw(i, j))
    }

    /// Sets a strictly upper entry.
    pub fn set(&mut self, i: usize, j: usize, v: Residue) -> Result<()> {
        if !(1 <= i && i < j && j <= self.size()) {
            return Err(Error::DimensionMismatch(format!("({i}, {j}) is not strictly upper in U_{}", self.size())));
        }
        if v.context() != self.ctx {
            return Err(Error::ContextMismatch("entry context".into()));
        }
        let k = self.idx(i, j);
        self.data[k] = v.value();
        Ok(())
    }

    pub(crate) fn set_raw(&mut self, i: usize, j: usize, v: u64) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    pub fn is_identity(&self) -> bool {
        *self == UnipotentMatrix::identity(self.n, self.ctx)
    }

    /// Strictly upper entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), Residue)> + '_ {
        let s = self.size();
        (1..=s).flat_map(move |i| (i + 1..=s).map(move |j| ((i, j), self.a(i, j))))
    }

    fn check(&self, other: &UnipotentMatrix) -> Result<()> {
        if self.n != other.n || self.ctx != other.ctx {
            return Err(Error::ContextMismatch(format!(
                "U_{} over {:?} vs U_{} over {:?}",
                self.size(),
                self.ctx,
                other.size(),
                other.ctx
            )));
        }
        Ok(())
    }

    pub fn multiply(&self, other: &UnipotentMatrix) -> Result<UnipotentMatrix> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &UnipotentMatrix) -> UnipotentMatrix {
        let s = self.size();
        let ctx = self.ctx;
        let mut data = vec![0; s * s];
        for i in 0..s {
            for k in i..s {
                let a = self.data[i * s + k];
                if a == 0 {
                    continue;
                }
                for j in k..s {
                    let d = &mut data[i * s + j];
                    *d = ctx.mul_add(*d, a, other.data[k * s + j]);
                }
            }
        }
        UnipotentMatrix { n: self.n, ctx, data }
    }

    /// `M - 1`, nilpotent of order `n + 1`.
    fn nilpotent_part(&self) -> UnipotentMatrix {
        let mut m = self.clone();
        for i in 0..self.size() {
            m.data[i * self.size() + i] = 0;
        }
        m
    }

    fn add_assign_scaled(&mut self, other: &UnipotentMatrix, c: u64) {
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = self.ctx.mul_add(*a, c, b);
        }
    }

    /// `Σ (-1)^m (M - 1)^m`.
    pub fn invert(&self) -> UnipotentMatrix {
        let x = self.nilpotent_part();
        let mut result = UnipotentMatrix::identity(self.n, self.ctx);
        let mut term = result.clone();
        let minus_one = self.ctx.neg(1 % self.ctx.modulus());
        for _ in 0..self.n {
            term = term.mul_unchecked(&x);
            for v in term.data.iter_mut() {
                *v = self.ctx.mul(*v, minus_one);
            }
            result.add_assign_scaled(&term, 1);
        }
        result
    }

    pub fn pow_int(&self, exp: i64) -> UnipotentMatrix {
        let base = if exp < 0 { self.invert() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut result = UnipotentMatrix::identity(self.n, self.ctx);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul_unchecked(&sq);
            }
        }
        result
    }

    /// `Σ_m C(c, m) (M - 1)^m`; needs `n < ℓ`.
    pub fn power(&self, c: Residue) -> Result<UnipotentMatrix> {
        if c.context() != self.ctx {
            return Err(Error::ContextMismatch("exponent context".into()));
        }
        let x = self.nilpotent_part();
        let mut result = UnipotentMatrix::identity(self.n, self.ctx);
        let mut term = result.clone();
        for m in 1..=self.n {
            term = term.mul_unchecked(&x);
            if term.data.iter().all(|&v| v == 0) {
                break;
            }
            result.add_assign_scaled(&term, self.ctx.binomial(c.value(), m)?);
        }
        Ok(result)
    }

    /// `a b a⁻¹ b⁻¹`.
    pub fn commutator(&self, other: &UnipotentMatrix) -> Result<UnipotentMatrix> {
        self.check(other)?;
        Ok(self.mul_unchecked(other).mul_unchecked(&self.invert()).mul_unchecked(&other.invert()))
    }

    /// Scales `a_ij` by `s^{j-i}`.
    pub fn scale_by(&self, s: u64) -> UnipotentMatrix {
        let mut m = self.clone();
        let size = self.size();
        for i in 1..=size {
            let mut f = 1 % self.ctx.modulus();
            for j in i + 1..=size {
                f = self.ctx.mul(f, s);
                let k = m.idx(i, j);
                m.data[k] = self.ctx.mul(m.data[k], f);
            }
        }
        m
    }

    /// `a_ij(g·M) = χ(g)^{j-i} a_ij(M)`.
    pub fn act(&self, g: usize, chi: &Character) -> Result<UnipotentMatrix> {
        if chi.context() != self.ctx {
            return Err(Error::ContextMismatch("character and matrix contexts differ".into()));
        }
        if g >= chi.group().order() {
            return Err(Error::InvalidGroup(format!("element {g} outside the group")));
        }
        Ok(self.scale_by(chi.value(g)))
    }

    /// Zeroes the corner `a_{1,n+1}`: the image in `U_{n+1}` modulo its center.
    pub fn without_corner(&self) -> UnipotentMatrix {
        let mut m = self.clone();
        m.set_raw(1, self.size(), 0);
        m
    }

    pub fn corner(&self) -> Residue {
        self.a(1, self.size())
    }

    /// Membership in `U_{i0,j0}`: off-diagonal entries vanish unless `i ≤ i0` and `j ≥ j0`.
    pub fn in_u_i0j0(&self, i0: usize, j0: usize) -> bool {
        self.entries().all(|((i, j), v)| v.is_zero() || (i <= i0 && j >= j0))
    }
}

impl fmt::Debug for UnipotentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U_{}{:?}[", self.size(), self.ctx)?;
        for (n, ((i, j), v)) in self.entries().filter(|(_, v)| !v.is_zero()).enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "a{i}{j}={}", v.value())?;
        }
        write!(f, "]")
    }
}

/// `A_l ∈ U_{l+1}` with `a_{i,i+j} = 1/j!`.
pub fn build_a(l: usize, ctx: ModulusContext) -> Result<UnipotentMatrix> {
    ctx.check_factorial_unit(l)?;
    let mut m = UnipotentMatrix::identity(l, ctx);
    for i in 1..=l {
        for j in 1..=l + 1 - i {
            m.set_raw(i, i + j, ctx.inv_factorial(j)?);
        }
    }
    Ok(m)
}

/// The representation `φ_J: π → U_{n+1}` attached to `J: {1..n} → {1..r}`.
///
/// `φ_J(γ_k)` has `a_{i,i+l} = 1/l!` whenever `J(v) = k` for `i ≤ v < i + l`,
/// i.e. it is `exp` of the sum of the elementary steps `E_{v,v+1}` with
/// `J(v) = k`.
#[derive(Clone, Debug)]
pub struct PhiJ {
    j: MonomialIndex,
    r: usize,
    ctx: ModulusContext,
    generators: Vec<UnipotentMatrix>,
    nilpotents: Vec<UnipotentMatrix>,
}

impl PhiJ {
    pub fn new(j: MonomialIndex, r: usize, ctx: ModulusContext) -> Result<Self> {
        let n = j.degree();
        if n == 0 {
            return Err(Error::DimensionMismatch("J must have positive degree".into()));
        }
        j.check_rank(r)?;
        ctx.check_factorial_unit(n)?;
        let mut generators = Vec::with_capacity(r);
        for k in 1..=r {
            let mut m = UnipotentMatrix::identity(n, ctx);
            for i in 1..=n {
                let run = j.letters()[i - 1..].iter().take_while(|&&v| v == k).count();
                for l in 1..=run {
                    m.set_raw(i, i + l, ctx.inv_factorial(l)?);
                }
            }
            generators.push(m);
        }
        let nilpotents = generators.iter().map(|m| m.nilpotent_part()).collect();
        Ok(PhiJ { j, r, ctx, generators, nilpotents })
    }

    pub fn index(&self) -> &MonomialIndex {
        &self.j
    }

    pub fn n(&self) -> usize {
        self.j.degree()
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    /// `φ_J(γ_k)`.
    pub fn generator(&self, k: usize) -> Result<&UnipotentMatrix> {
        self.generators.get(k.wrapping_sub(1)).ok_or(Error::BadGenerator { index: k, rank: self.r })
    }

    pub fn word(&self, w: &FreeWord) -> Result<UnipotentMatrix> {
        let mut result = UnipotentMatrix::identity(self.n(), self.ctx);
        for l in w.letters() {
            let g = self.generator(l.generator)?;
            let f = match l.exponent {
                Exponent::Int(e) => g.pow_int(e),
                Exponent::Residue(c) => g.power(c)?,
            };
            result = result.mul_unchecked(&f);
        }
        Ok(result)
    }

    /// The algebra map `z_k ↦ φ_J(γ_k) - 1` applied to a series with degree
    /// bound `≥ n`. On Magnus images of words this agrees with [`word`](Self::word).
    pub fn series(&self, s: &GroupElement) -> Result<UnipotentMatrix> {
        if s.degree_bound() < self.n() {
            return Err(Error::PrecisionViolation(format!(
                "φ_J with n = {} needs degree bound ≥ {}, got {}",
                self.n(),
                self.n(),
                s.degree_bound()
            )));
        }
        self.apply(s)
    }

    /// `φ_J` modulo the center of `U_{n+1}`; well defined on `π/[π]_n`, so a
    /// degree bound of `n - 1` suffices. The corner entry is zero.
    pub fn series_bar(&self, s: &GroupElement) -> Result<UnipotentMatrix> {
        if s.degree_bound() + 1 < self.n() {
            return Err(Error::PrecisionViolation(format!(
                "reduced φ_J with n = {} needs degree bound ≥ {}, got {}",
                self.n(),
                self.n() - 1,
                s.degree_bound()
            )));
        }
        Ok(self.apply(s)?.without_corner())
    }

    fn apply(&self, s: &GroupElement) -> Result<UnipotentMatrix> {
        if s.rank() != self.r || s.context() != self.ctx {
            return Err(Error::ContextMismatch("series does not match φ_J".into()));
        }
        let n = self.n();
        let bound = s.degree_bound().min(n);
        let mut result = UnipotentMatrix::identity(n, self.ctx);
        // depth-first over monomials, carrying the product of nilpotents so far
        let mut stack: Vec<(MonomialIndex, UnipotentMatrix)> = vec![(MonomialIndex::constant(), result.clone())];
        while let Some((m, prod)) = stack.pop() {
            if m.degree() > 0 {
                let c = s.magnus_coefficient(&m).value();
                if c != 0 {
                    result.add_assign_scaled(&prod, c);
                }
            }
            if m.degree() == bound {
                continue;
            }
            for k in 1..=self.r {
                let next = prod.mul_unchecked(&self.nilpotents[k - 1]);
                if next.data.iter().any(|&v| v != 0) {
                    let mut letters = m.letters().to_vec();
                    letters.push(k);
                    stack.push((MonomialIndex::new(letters), next));
                }
            }
        }
        Ok(result)
    }
}

/// `φ_J(w)` for a word.
pub fn phi_j_word(w: &FreeWord, j: &MonomialIndex, r: usize, ctx: ModulusContext) -> Result<UnipotentMatrix> {
    PhiJ::new(j.clone(), r, ctx)?.word(w)
}

/// `φ_J` on a truncated group element of degree bound `≥ n`.
pub fn phi_j_series(s: &GroupElement, j: &MonomialIndex) -> Result<UnipotentMatrix> {
    PhiJ::new(j.clone(), s.rank(), s.context())?.series(s)
}

/// `U_{n+1}` with `G` acting through `χ`, as a group with `G`-action.
#[derive(Clone, Debug)]
pub struct UnipotentAction {
    n: usize,
    chi: Character,
}

impl UnipotentAction {
    pub fn new(n: usize, chi: Character) -> Self {
        UnipotentAction { n, chi }
    }

    pub fn character(&self) -> &Character {
        &self.chi
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

impl ActedGroup for UnipotentAction {
    type Elem = UnipotentMatrix;

    fn group(&self) -> &FiniteGroup {
        self.chi.group()
    }

    fn identity(&self) -> UnipotentMatrix {
        UnipotentMatrix::identity(self.n, self.chi.context())
    }

    fn mul(&self, a: &UnipotentMatrix, b: &UnipotentMatrix) -> Result<UnipotentMatrix> {
        a.multiply(b)
    }

    fn inverse(&self, a: &UnipotentMatrix) -> UnipotentMatrix {
        a.invert()
    }

    fn act(&self, g: usize, a: &UnipotentMatrix) -> Result<UnipotentMatrix> {
        a.act(g, &self.chi)
    }
}

#[cfg(test)]
mod tests;
