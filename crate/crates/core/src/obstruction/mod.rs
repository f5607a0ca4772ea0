//! Actions of the shape arising from `P¹ − {0, 1, ∞}`, the per-`J` section
//! obstruction pipeline, and the formal Kummer layer in [`symbol`].

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::{Cochain, FiniteGroup, FreeGroupAction, GModule, TwistedCocycle};
use crate::error::{Error, Result};
use crate::magnus::{GroupElement, MonomialIndex};
use crate::massey::{abelian_components, canonical_system, DefiningSystem, FailedIdentity};
use crate::unipotent::Character;

pub mod symbol;

pub use symbol::{
    f_ab_coefficients, kappa_ab, vanishing_corollary_targets, Atom, BasePoint, CorollaryTarget, Expr, SymbolPair,
    TargetKind,
};

/// The `n` functions `{1..n} → {1, 2}` taking the value 2 exactly once,
/// ordered by the position of the 2.
pub fn single_two_indices(n: usize) -> Vec<MonomialIndex> {
    (0..n)
        .map(|pos| MonomialIndex::new((0..n).map(|i| if i == pos { 2 } else { 1 }).collect()))
        .collect()
}

/// `g(γ_1) = γ_1^{χ(g)}`, `g(γ_2) = 𝔣(g)^{-1} γ_2^{χ(g)} 𝔣(g)` on
/// `π/[π]_{n+1}` for two generators.
#[derive(Clone, Debug)]
pub struct MonodromyAction {
    action: Arc<FreeGroupAction>,
}

impl MonodromyAction {
    /// `f` must vanish in degree 1 and be a cocycle modulo `[π]_n`.
    pub fn new(chi: Character, f: Vec<GroupElement>, n: usize) -> Result<Self> {
        Ok(MonodromyAction { action: Arc::new(FreeGroupAction::monodromy(chi, f, n)?) })
    }

    /// `𝔣 = 1`: the character action in monodromy form.
    pub fn untwisted(chi: Character, n: usize) -> Result<Self> {
        let f = vec![GroupElement::identity(2, n, chi.context()); chi.group().order()];
        MonodromyAction::new(chi, f, n)
    }

    /// The action `s ∘ C_g ∘ s^{-1}`, where `C_g` is the character action
    /// and `s` fixes `γ_1` and sends `γ_2 ↦ u^{-1} γ_2 u`. It has the
    /// monodromy shape with `𝔣(g) = u · g(u)^{-1}`, which is then multiplied
    /// by the central `noise[g]` (degree-`n` terms only, `noise[1] = 1`).
    pub fn conjugated(chi: Character, u: &GroupElement, noise: &[GroupElement], n: usize) -> Result<Self> {
        let ctx = chi.context();
        let group = chi.group().clone();
        if u.rank() != 2 || u.degree_bound() != n || u.context() != ctx {
            return Err(Error::ContextMismatch(format!("u must lie in π/[π]_{} on two generators", n + 1)));
        }
        if u.series().homogeneous(1).iter().any(|&c| c != 0) {
            return Err(Error::NotTwistedCocycle("u must lie in [π]_2".into()));
        }
        if noise.len() != group.order() {
            return Err(Error::DimensionMismatch(format!("{} noise values for |G| = {}", noise.len(), group.order())));
        }
        for (g, c) in noise.iter().enumerate() {
            let central = c.rank() == 2
                && c.degree_bound() == n
                && (1..n).all(|d| c.series().homogeneous(d).iter().all(|&v| v == 0));
            if !central {
                return Err(Error::NotTwistedCocycle(format!("noise at {g} is not central")));
            }
        }
        if !noise[group.identity()].is_identity() {
            return Err(Error::NotTwistedCocycle("noise at 1 must be trivial".into()));
        }

        let gens: Vec<GroupElement> =
            (1..=2).map(|i| GroupElement::generator(2, n, ctx, i)).collect::<Result<_>>()?;
        let s = vec![gens[0].clone(), u.invert().mul_unchecked(&gens[1]).mul_unchecked(u)];
        // s ≡ id modulo [π]_2, so ψ ← ψ · s(ψ)^{-1} · γ converges to s^{-1}
        let mut s_inv = gens.clone();
        for _ in 0..n {
            s_inv = s_inv
                .iter()
                .zip(&gens)
                .map(|(p, g)| Ok(p.mul_unchecked(&p.substitute(&s)?.invert()).mul_unchecked(g)))
                .collect::<Result<_>>()?;
        }
        for (p, g) in s_inv.iter().zip(&gens) {
            debug_assert_eq!(&p.substitute(&s)?, g);
        }
        let f = group
            .elements()
            .map(|g| {
                let c = chi.residue(g);
                let conj: Vec<GroupElement> = gens.iter().map(|x| x.power(c)).collect::<Result<_>>()?;
                let images: Vec<GroupElement> =
                    s_inv.iter().map(|p| p.substitute(&conj)?.substitute(&s)).collect::<Result<_>>()?;
                Ok(u.mul_unchecked(&u.substitute(&images)?.invert()).mul_unchecked(&noise[g]))
            })
            .collect::<Result<Vec<_>>>()?;
        MonodromyAction::new(chi, f, n)
    }

    pub fn action(&self) -> &Arc<FreeGroupAction> {
        &self.action
    }

    pub fn n(&self) -> usize {
        self.action.degree_bound()
    }

    pub fn character(&self) -> &Character {
        self.action.character_of()
    }

    pub fn f(&self) -> &[GroupElement] {
        self.action.f().expect("monodromy actions carry f")
    }

    /// The action on `π/[π]_n`, where the cocycles being tested live.
    pub fn lower(&self) -> Arc<FreeGroupAction> {
        Arc::new(self.action.truncate(self.n() - 1))
    }
}

/// The two abelianized coordinates of a class in `H^1(G, π^{ab})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianizedClassPair {
    pub x1: Cochain,
    pub x2: Cochain,
}

impl AbelianizedClassPair {
    pub fn new(chi: &Character, x1: Cochain, x2: Cochain) -> Result<Self> {
        let module = GModule::character_power(chi, 1);
        for x in [&x1, &x2] {
            if x.degree() != 1 || **x.module() != module {
                return Err(Error::InvalidModule("abelianized classes are 1-cochains in A(χ)".into()));
            }
            if !x.is_cocycle() {
                return Err(Error::NotACocycle);
            }
        }
        Ok(AbelianizedClassPair { x1, x2 })
    }

    pub fn of(x: &TwistedCocycle<FreeGroupAction>) -> Result<Self> {
        let comps = abelian_components(x)?;
        if comps.len() != 2 {
            return Err(Error::DimensionMismatch("expected two generators".into()));
        }
        let mut it = comps.into_iter();
        let (x1, x2) = (it.next().unwrap(), it.next().unwrap());
        AbelianizedClassPair::new(x.action().character_of(), x1, x2)
    }

    /// `g ↦ γ_1^{x1(g)} γ_2^{x2(g)}` in `π^{ab}`, a cocycle for `action`
    /// (degree bound 1).
    pub fn to_cocycle(&self, action: Arc<FreeGroupAction>) -> Result<TwistedCocycle<FreeGroupAction>> {
        if action.degree_bound() != 1 || action.rank() != 2 {
            return Err(Error::ContextMismatch("abelianized classes live in π/[π]_2 on two generators".into()));
        }
        let ctx = action.context();
        let g1 = GroupElement::generator(2, 1, ctx, 1)?;
        let g2 = GroupElement::generator(2, 1, ctx, 2)?;
        let values = action
            .group_arc()
            .elements()
            .map(|g| Ok(g1.power(ctx.wrap(self.x1.scalar(&[g])))?.mul_unchecked(&g2.power(ctx.wrap(self.x2.scalar(&[g])))?)))
            .collect::<Result<Vec<_>>>()?;
        TwistedCocycle::new(action, values)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Unobstructed,
    Obstructed,
    /// Some defining system failed to validate; no conclusion is drawn.
    Inconclusive,
}

/// The outcome for one index function.
#[derive(Clone, Debug)]
pub struct JObstruction {
    pub j: MonomialIndex,
    pub system: DefiningSystem,
    pub validation: std::result::Result<(), FailedIdentity>,
    /// Present when the system validates.
    pub massey: Option<Cochain>,
    pub vanishes: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct ObstructionReport {
    pub entries: Vec<JObstruction>,
    pub verdict: Verdict,
}

/// Massey obstructions of `x` relative to the canonical systems for each
/// `J`, computed in parallel and reported in the order given.
pub fn massey_obstructions(x: &TwistedCocycle<FreeGroupAction>, js: &[MonomialIndex]) -> Result<ObstructionReport> {
    let entries = js
        .par_iter()
        .map(|j| {
            let system = canonical_system(x, j)?;
            let validation = system.validate();
            let (massey, vanishes) = if validation.is_ok() {
                let value = system.massey_value()?;
                let v = value.is_coboundary()?.is_coboundary();
                (Some(value), Some(v))
            } else {
                (None, None)
            };
            Ok(JObstruction { j: j.clone(), system, validation, massey, vanishes })
        })
        .collect::<Result<Vec<_>>>()?;
    // one nonvanishing product already obstructs the lift
    let verdict = if entries.iter().any(|e| e.vanishes == Some(false)) {
        Verdict::Obstructed
    } else if entries.iter().any(|e| e.vanishes.is_none()) {
        Verdict::Inconclusive
    } else {
        Verdict::Unobstructed
    };
    Ok(ObstructionReport { entries, verdict })
}

/// The single-2 Massey tests for a cocycle `x` into `π/[π]_n`.
pub fn section_obstructions(x: &TwistedCocycle<FreeGroupAction>, action: &MonodromyAction) -> Result<ObstructionReport> {
    if !x.action().same_action(&action.lower()) {
        return Err(Error::ContextMismatch(format!(
            "cocycle must be for the given action on π/[π]_{}",
            action.n()
        )));
    }
    massey_obstructions(x, &single_two_indices(action.n()))
}

/// `x(g0^i) = Σ_{t<i} χ(g0)^t · a` on a cyclic group with generator `g0`.
pub fn kummer_cocycle(chi: &Character, a: u64) -> Result<Cochain> {
    let group: &Arc<FiniteGroup> = chi.group();
    let (g0, m) = group
        .cyclic_presentation()
        .ok_or_else(|| Error::InvalidGroup("Kummer cocycles need a cyclic group".into()))?;
    let ctx = chi.context();
    let u = chi.value(g0);
    let mut values = vec![0; m];
    let mut acc = 0;
    let mut power = 1 % ctx.modulus();
    let mut g = group.identity();
    for _ in 0..m {
        values[g] = acc;
        acc = ctx.add(acc, ctx.mul(power, a));
        power = ctx.mul(power, u);
        g = group.mul(g, g0);
    }
    if acc != 0 {
        return Err(Error::NotTwistedCocycle(format!("a = {a} does not define a cocycle: x(g0^{m}) ≠ 0")));
    }
    let c = Cochain::from_values(Arc::new(GModule::character_power(chi, 1)), 1, values)?;
    debug_assert!(c.is_cocycle());
    Ok(c)
}

/// Evaluates a symbol as a cocycle value on the generator: `Σ e_s · a_s` over
/// the factors of [`Expr::factor_exponents`], with `a_s` read from `residues`.
pub fn concretize(expr: &Expr, residues: &std::collections::BTreeMap<String, u64>, chi: &Character) -> Result<Cochain> {
    let ctx = chi.context();
    let mut a = 0;
    for (name, e) in expr.factor_exponents() {
        let r = residues.get(&name).ok_or_else(|| Error::BadPoint(format!("no residue assigned to {name}")))?;
        a = ctx.add(a, ctx.mul(ctx.reduce(e), *r % ctx.modulus()));
    }
    kummer_cocycle(chi, a)
}

#[cfg(test)]
mod tests;
