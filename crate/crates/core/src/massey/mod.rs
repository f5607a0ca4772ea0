//! Defining systems and Massey products of characters-twisted 1-classes.
//!
//! Everything is relative to an explicit defining system; the value of a
//! Massey product is never considered apart from the system producing it.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::cohomology::{ActionShape, Cochain, CoboundaryCheck, FreeGroupAction, GModule, TwistedCocycle};
use crate::error::{Error, Result};
use crate::magnus::MonomialIndex;
use crate::unipotent::{Character, PhiJ, UnipotentMatrix};

/// The identity of a defining system that fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailedIdentity {
    pub i: usize,
    pub j: usize,
}

impl fmt::Display for FailedIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.j == self.i + 1 {
            write!(f, "T_{{{},{}}} is not a cocycle", self.i, self.j)
        } else {
            write!(f, "D T_{{{},{}}} differs from the sum of cup products", self.i, self.j)
        }
    }
}

/// 1-cochains `T_ij ∈ C^1(G, A(χ^{j-i}))` for `1 ≤ i < j ≤ n+1`, the corner
/// `(1, n+1)` excluded.
#[derive(Clone, Debug)]
pub struct DefiningSystem {
    n: usize,
    chi: Character,
    entries: BTreeMap<(usize, usize), Cochain>,
}

/// Index pairs of a defining system of order `n`, row by row.
pub fn index_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| (i + 1..=n + 1).map(move |j| (i, j))).filter(move |&p| p != (1, n + 1))
}

impl DefiningSystem {
    /// Checks shape only: every pair present, each in the right module.
    pub fn new(n: usize, chi: Character, entries: BTreeMap<(usize, usize), Cochain>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDefiningSystem("order must be at least 2".into()));
        }
        let expected: Vec<_> = index_pairs(n).collect();
        if entries.len() != expected.len() || expected.iter().any(|p| !entries.contains_key(p)) {
            return Err(Error::InvalidDefiningSystem(format!("need exactly the pairs {expected:?}")));
        }
        for (&(i, j), c) in &entries {
            if c.degree() != 1 || **c.module() != GModule::character_power(&chi, j - i) {
                return Err(Error::InvalidDefiningSystem(format!("T_{{{i},{j}}} must be a 1-cochain in A(χ^{})", j - i)));
            }
        }
        Ok(DefiningSystem { n, chi, entries })
    }

    /// The system with every entry zero.
    pub fn zero(n: usize, chi: Character) -> Result<Self> {
        let entries = index_pairs(n)
            .map(|(i, j)| ((i, j), Cochain::zero(Arc::new(GModule::character_power(&chi, j - i)), 1)))
            .collect();
        DefiningSystem::new(n, chi, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn character(&self) -> &Character {
        &self.chi
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&Cochain> {
        self.entries.get(&(i, j))
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Cochain> {
        &self.entries
    }

    /// Replaces one entry, keeping the shape checks.
    pub fn with_entry(mut self, i: usize, j: usize, c: Cochain) -> Result<Self> {
        if !self.entries.contains_key(&(i, j)) {
            return Err(Error::InvalidDefiningSystem(format!("({i}, {j}) is not an index pair")));
        }
        self.entries.insert((i, j), c);
        DefiningSystem::new(self.n, self.chi, self.entries)
    }

    /// The cochain `Σ_{i<p<j} T_ip ∪ T_pj` in `A(χ^{j-i})`.
    fn cup_sum(&self, i: usize, j: usize) -> Result<Cochain> {
        let module = Arc::new(GModule::character_power(&self.chi, j - i));
        let mut acc = Cochain::zero(module.clone(), 2);
        for p in i + 1..j {
            let term = self.entries[&(i, p)].cup(&self.entries[&(p, j)])?;
            acc = acc.add(&Cochain::from_values(module.clone(), 2, term.raw().to_vec())?)?;
        }
        Ok(acc)
    }

    /// Checks `D T_ij = Σ T_ip ∪ T_pj` for every pair, by increasing `j - i`;
    /// the first failure is returned.
    pub fn validate(&self) -> std::result::Result<(), FailedIdentity> {
        let mut pairs: Vec<_> = index_pairs(self.n).collect();
        pairs.sort_by_key(|&(i, j)| (j - i, i));
        for (i, j) in pairs {
            let ok = self.cup_sum(i, j).map(|s| self.entries[&(i, j)].coboundary() == s).unwrap_or(false);
            if !ok {
                return Err(FailedIdentity { i, j });
            }
        }
        Ok(())
    }

    /// Whether `T_{i,i+1}` and `t` are cohomologous.
    pub fn represents(&self, i: usize, t: &Cochain) -> Result<bool> {
        let own = self
            .entry(i, i + 1)
            .ok_or_else(|| Error::InvalidDefiningSystem(format!("no entry ({i}, {})", i + 1)))?;
        if !t.is_cocycle() {
            return Err(Error::NotACocycle);
        }
        let diff = own.sub(&Cochain::from_values(own.module().clone(), 1, t.raw().to_vec())?)?;
        if diff.is_zero() {
            return Ok(true);
        }
        Ok(diff.is_coboundary()?.is_coboundary())
    }

    /// `⟨t_1, …, t_n⟩_T = Σ_{p=2}^{n} T_{1p} ∪ T_{p,n+1}`.
    pub fn massey_value(&self) -> Result<Cochain> {
        self.validate().map_err(|f| Error::InvalidDefiningSystem(f.to_string()))?;
        self.cup_sum(1, self.n + 1)
    }

    /// Whether the Massey product relative to this system is a coboundary.
    pub fn vanishes(&self) -> Result<bool> {
        Ok(self.vanishing_check()?.is_coboundary())
    }

    /// [`vanishes`](Self::vanishes) with the witness or certificate.
    pub fn vanishing_check(&self) -> Result<CoboundaryCheck> {
        self.massey_value()?.is_coboundary()
    }
}

/// Whether `J` takes the value 2 exactly once and is otherwise 1.
pub fn is_single_two(j: &MonomialIndex) -> bool {
    j.letters().iter().all(|&v| v == 1 || v == 2) && j.count(2) == 1
}

/// `g ↦ φ_J(x(g))` modulo the center of `U_{n+1}`, corner entry zero.
pub fn reduced_matrix_cocycle(x: &TwistedCocycle<FreeGroupAction>, j: &MonomialIndex) -> Result<Vec<UnipotentMatrix>> {
    let action = x.action();
    let n = j.degree();
    if n < 2 {
        return Err(Error::DimensionMismatch("J must have degree at least 2".into()));
    }
    if action.shape() == ActionShape::Monodromy && !is_single_two(j) {
        return Err(Error::UnsupportedJ(j.to_string()));
    }
    if action.degree_bound() + 1 < n {
        return Err(Error::PrecisionViolation(format!(
            "J of degree {n} needs the cocycle modulo [π]_{n}, got degree bound {}",
            action.degree_bound()
        )));
    }
    let phi = PhiJ::new(j.clone(), action.rank(), action.context())?;
    x.values().iter().map(|v| phi.series_bar(v)).collect()
}

/// The defining system `T_ij(g) = -a_ij(φ_J(x(g)))` for the sequence
/// `(-x_{J(1)}, …, -x_{J(n)})`, where `x` takes values in `π/[π]_n`.
pub fn canonical_system(x: &TwistedCocycle<FreeGroupAction>, j: &MonomialIndex) -> Result<DefiningSystem> {
    let matrices = reduced_matrix_cocycle(x, j)?;
    let n = j.degree();
    let chi = x.action().character_of().clone();
    let ctx = chi.context();
    let mut entries = BTreeMap::new();
    for (i, jj) in index_pairs(n) {
        let module = Arc::new(GModule::character_power(&chi, jj - i));
        let values = matrices.iter().map(|m| ctx.neg(m.a(i, jj).value())).collect();
        entries.insert((i, jj), Cochain::from_values(module, 1, values)?);
    }
    DefiningSystem::new(n, chi, entries)
}

/// The abelianized coordinate cocycles `x_k(g)`: exponent sum of `γ_k` in `x(g)`.
pub fn abelian_components(x: &TwistedCocycle<FreeGroupAction>) -> Result<Vec<Cochain>> {
    let action = x.action();
    let module = Arc::new(GModule::character_power(action.character_of(), 1));
    (1..=action.rank())
        .map(|k| {
            let values = x.values().iter().map(|v| v.series().homogeneous(1)[k - 1]).collect();
            Cochain::from_values(module.clone(), 1, values)
        })
        .collect()
}

#[cfg(test)]
mod tests;
