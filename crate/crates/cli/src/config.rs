//! The JSON run configuration and its translation into core objects.

use std::collections::BTreeMap;
use std::sync::Arc;

use nilmassey_core::cohomology::GroupSpec;
use nilmassey_core::obstruction::{
    concretize, vanishing_corollary_targets, AbelianizedClassPair, Expr, MonodromyAction, TargetKind,
};
use nilmassey_core::{
    Character, Error, FiniteGroup, FreeGroupAction, FreeWord, GroupElement, ModulusContext, Result, TruncatedSeries,
    TwistedCocycle,
};
use serde::{Deserialize, Serialize};

/// A series given as monomial digit strings mapped to integer coefficients.
pub type SeriesTable = BTreeMap<String, i64>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CharacterSpec {
    #[default]
    Trivial,
    /// Value on the generator of a cyclic group.
    GeneratorValue { value: u64 },
    /// Values on the standard generators of `Z/m_1 × … × Z/m_s`.
    FactorValues { values: Vec<u64> },
    /// One value per group element.
    Values { values: Vec<u64> },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FSpec {
    #[default]
    Trivial,
    /// `f(g)` for every group element.
    Values { values: Vec<SeriesTable> },
    /// `f(g) = u · g(u)^{-1} · noise(g)` for a word `u` in the commutator subgroup.
    Conjugate {
        u: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        noise: Option<Vec<SeriesTable>>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CocycleSpec {
    #[default]
    Trivial,
    /// Values on the group's generators, extended by the cocycle law.
    GeneratorValues { values: Vec<SeriesTable> },
    /// One value per group element.
    Values { values: Vec<SeriesTable> },
    /// The abelianized pair `(X, Y)` of a corollary target, made concrete by
    /// assigning residues to the symbols; only for `n = 2`.
    Kummer { target: TargetKind, x: Expr, residues: BTreeMap<String, u64> },
}

fn default_k() -> u32 {
    1
}

fn default_r() -> usize {
    2
}

/// Everything needed to reproduce an `obstruct` run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub ell: u64,
    #[serde(default = "default_k")]
    pub k: u32,
    pub n: usize,
    #[serde(default = "default_r")]
    pub r: usize,
    pub group: GroupSpec,
    #[serde(default)]
    pub character: CharacterSpec,
    #[serde(default)]
    pub f: FSpec,
    #[serde(default)]
    pub x: CocycleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Parses `cyclic:m` or `abelian:m1x m2x…`.
pub fn parse_group(s: &str) -> Result<GroupSpec> {
    let (kind, rest) = s.split_once(':').ok_or_else(|| Error::Parse(format!("group {s:?}: expected kind:orders")))?;
    let orders = rest
        .split(['x', ','])
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad order {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    match (kind, orders.as_slice()) {
        ("cyclic", [m]) => Ok(GroupSpec::Cyclic { order: *m }),
        ("abelian", _) => Ok(GroupSpec::Abelian { orders }),
        _ => Err(Error::Parse(format!("unknown group {s:?}"))),
    }
}

pub fn build_character(spec: &CharacterSpec, group: &GroupSpec, g: Arc<FiniteGroup>, ctx: ModulusContext) -> Result<Character> {
    match spec {
        CharacterSpec::Trivial => Ok(Character::trivial(g, ctx)),
        CharacterSpec::GeneratorValue { value } => Character::from_generator_value(g, ctx, *value),
        CharacterSpec::Values { values } => Character::new(g, ctx, values.clone()),
        CharacterSpec::FactorValues { values } => {
            let orders = match group {
                GroupSpec::Abelian { orders } => orders.clone(),
                GroupSpec::Cyclic { order } => vec![*order],
                GroupSpec::Table { .. } => {
                    return Err(Error::InvalidCharacter("factor values need a cyclic or abelian group".into()))
                }
            };
            if values.len() != orders.len() {
                return Err(Error::InvalidCharacter(format!("{} values for {} factors", values.len(), orders.len())));
            }
            let all = g
                .elements()
                .map(|mut e| {
                    let mut v = 1 % ctx.modulus();
                    for (i, &m) in orders.iter().enumerate().rev() {
                        v = ctx.mul(v, ctx.pow(values[i] % ctx.modulus(), (e % m) as u64));
                        e /= m;
                    }
                    v
                })
                .collect();
            Character::new(g, ctx, all)
        }
    }
}

fn element(table: &SeriesTable, bound: usize, ctx: ModulusContext) -> Result<GroupElement> {
    GroupElement::new(TruncatedSeries::from_table(2, bound, ctx, table)?)
}

/// The parsed objects of a [`RunConfig`].
pub struct Instance {
    pub action: MonodromyAction,
    pub x: TwistedCocycle<FreeGroupAction>,
}

impl RunConfig {
    pub fn check(&self) -> Result<ModulusContext> {
        let ctx = ModulusContext::new(self.ell, self.k)?;
        if self.r != 2 {
            return Err(Error::DimensionMismatch("the obstruction pipeline uses r = 2".into()));
        }
        if self.n < 2 {
            return Err(Error::DimensionMismatch("n must be at least 2".into()));
        }
        if self.ell as usize <= self.n {
            return Err(Error::InvalidModulus(format!("need ℓ > n, got ℓ = {} and n = {}", self.ell, self.n)));
        }
        Ok(ctx)
    }

    pub fn instance(&self) -> Result<Instance> {
        let ctx = self.check()?;
        let n = self.n;
        let group = Arc::new(self.group.build()?);
        let chi = build_character(&self.character, &self.group, group.clone(), ctx)?;
        let order = group.order();
        let action = match &self.f {
            FSpec::Trivial => MonodromyAction::untwisted(chi.clone(), n)?,
            FSpec::Values { values } => {
                if values.len() != order {
                    return Err(Error::NotTwistedCocycle(format!("{} values of f for |G| = {order}", values.len())));
                }
                let f = values.iter().map(|t| element(t, n, ctx)).collect::<Result<Vec<_>>>()?;
                MonodromyAction::new(chi.clone(), f, n)?
            }
            FSpec::Conjugate { u, noise } => {
                let word: FreeWord = u.parse()?;
                let u = nilmassey_core::magnus::magnus_embed(&word, 2, n, ctx)?;
                let noise = match noise {
                    None => vec![GroupElement::identity(2, n, ctx); order],
                    Some(v) => v.iter().map(|t| element(t, n, ctx)).collect::<Result<Vec<_>>>()?,
                };
                MonodromyAction::conjugated(chi.clone(), &u, &noise, n)?
            }
        };
        let lower = action.lower();
        let x = match &self.x {
            CocycleSpec::Trivial => TwistedCocycle::trivial(lower),
            CocycleSpec::Values { values } => {
                let v = values.iter().map(|t| element(t, n - 1, ctx)).collect::<Result<Vec<_>>>()?;
                TwistedCocycle::new(lower, v)?
            }
            CocycleSpec::GeneratorValues { values } => {
                let v = values.iter().map(|t| element(t, n - 1, ctx)).collect::<Result<Vec<_>>>()?;
                TwistedCocycle::from_generators(lower, &v)?
                    .ok_or_else(|| Error::NotTwistedCocycle("generator values do not extend to a cocycle".into()))?
            }
            CocycleSpec::Kummer { target, x, residues } => {
                if n != 2 {
                    return Err(Error::DimensionMismatch("Kummer cocycles are abelianized; use n = 2".into()));
                }
                let t = vanishing_corollary_targets(*target, x)?;
                let x1 = concretize(&t.pair.first, residues, &chi)?;
                let x2 = concretize(&t.pair.second, residues, &chi)?;
                AbelianizedClassPair::new(&chi, x1, x2)?.to_cocycle(lower)?
            }
        };
        Ok(Instance { action, x })
    }
}
