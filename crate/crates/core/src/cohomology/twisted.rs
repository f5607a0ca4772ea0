use std::fmt::Debug;
use std::sync::Arc;

use rayon::prelude::*;

use crate::cohomology::FiniteGroup;
use crate::error::{Error, Result};

/// A group together with an action of a finite group `G` by automorphisms.
pub trait ActedGroup {
    type Elem: Clone + PartialEq + Debug;

    fn group(&self) -> &FiniteGroup;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;
    /// `g · a`.
    fn act(&self, g: usize, a: &Self::Elem) -> Result<Self::Elem>;
}

/// A map `s: G → P` with `s(gh) = s(g) · g(s(h))`.
pub struct TwistedCocycle<A: ActedGroup> {
    action: Arc<A>,
    values: Vec<A::Elem>,
}

impl<A: ActedGroup> Clone for TwistedCocycle<A> {
    fn clone(&self) -> Self {
        TwistedCocycle { action: self.action.clone(), values: self.values.clone() }
    }
}

impl<A: ActedGroup> Debug for TwistedCocycle<A> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TwistedCocycle").field("values", &self.values).finish()
    }
}

impl<A: ActedGroup> TwistedCocycle<A> {
    /// Checks the cocycle law on every pair.
    pub fn new(action: Arc<A>, values: Vec<A::Elem>) -> Result<Self> {
        let g = action.group();
        if values.len() != g.order() {
            return Err(Error::NotTwistedCocycle(format!(
                "{} values for a group of order {}",
                values.len(),
                g.order()
            )));
        }
        for a in g.elements() {
            for b in g.elements() {
                let rhs = action.mul(&values[a], &action.act(a, &values[b])?)?;
                if values[g.mul(a, b)] != rhs {
                    return Err(Error::NotTwistedCocycle(format!("law fails at ({a}, {b})")));
                }
            }
        }
        Ok(TwistedCocycle { action, values })
    }

    pub fn trivial(action: Arc<A>) -> Self {
        let values = vec![action.identity(); action.group().order()];
        TwistedCocycle { action, values }
    }

    /// Extends prescribed values on [`FiniteGroup::generators`] along the
    /// cocycle law; `None` when the extension is inconsistent.
    pub fn from_generators(action: Arc<A>, on_generators: &[A::Elem]) -> Result<Option<Self>> {
        let g = action.group();
        if on_generators.len() != g.generators().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} generator values for {} generators",
                on_generators.len(),
                g.generators().len()
            )));
        }
        let mut values: Vec<Option<A::Elem>> = vec![None; g.order()];
        values[g.identity()] = Some(action.identity());
        for (parent, s, child) in g.spanning_tree() {
            let k = g.generators().iter().position(|&x| x == s).expect("tree edges use generators");
            let v = action.mul(values[parent].as_ref().expect("BFS order"), &action.act(parent, &on_generators[k])?)?;
            values[child] = Some(v);
        }
        let values: Vec<A::Elem> = values.into_iter().map(|v| v.expect("generators span the group")).collect();
        // s(h·t) = s(h)·h(s(t)) on all edges is equivalent to the full law
        for h in g.elements() {
            for (k, &t) in g.generators().iter().enumerate() {
                let rhs = action.mul(&values[h], &action.act(h, &on_generators[k])?)?;
                if values[g.mul(h, t)] != rhs {
                    return Ok(None);
                }
            }
        }
        Ok(Some(TwistedCocycle { action, values }))
    }

    pub fn action(&self) -> &Arc<A> {
        &self.action
    }

    pub fn value(&self, g: usize) -> &A::Elem {
        &self.values[g]
    }

    pub fn values(&self) -> &[A::Elem] {
        &self.values
    }

    /// Values on [`FiniteGroup::generators`].
    pub fn generator_values(&self) -> Vec<A::Elem> {
        self.action.group().generators().iter().map(|&s| self.values[s].clone()).collect()
    }

    /// `s'(g) = γ · s(g) · g(γ)^{-1}`, the cocycle conjugate by `γ`.
    pub fn conjugate(&self, gamma: &A::Elem) -> Result<Self> {
        let a = &self.action;
        let values = a
            .group()
            .elements()
            .map(|g| a.mul(&a.mul(gamma, &self.values[g])?, &a.inverse(&a.act(g, gamma)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(TwistedCocycle { action: self.action.clone(), values })
    }

    /// Whether `other` is the conjugate of `self` by `gamma`.
    pub fn is_conjugate_via(&self, other: &Self, gamma: &A::Elem) -> Result<bool> {
        Ok(self.conjugate(gamma)?.values == other.values)
    }

    /// Applies a `G`-equivariant homomorphism and checks the law in the target.
    pub fn map<B: ActedGroup>(
        &self,
        target: Arc<B>,
        f: impl Fn(&A::Elem) -> Result<B::Elem>,
    ) -> Result<TwistedCocycle<B>> {
        let values = self.values.iter().map(f).collect::<Result<Vec<_>>>()?;
        TwistedCocycle::new(target, values)
    }
}

impl<A> TwistedCocycle<A>
where
    A: ActedGroup + Sync + Send,
    A::Elem: Send + Sync,
{
    /// Every cocycle whose generator values are drawn from `candidates`,
    /// in lexicographic order of the generator assignment.
    pub fn enumerate(action: Arc<A>, candidates: &[A::Elem]) -> Result<Vec<Self>> {
        let gens = action.group().generators().len();
        let total = candidates.len().checked_pow(gens as u32).ok_or_else(|| {
            Error::DimensionMismatch("too many generator assignments to enumerate".into())
        })?;
        let found: Vec<Option<Self>> = (0..total)
            .into_par_iter()
            .map(|mut idx| {
                let mut picks = vec![0; gens];
                for slot in picks.iter_mut().rev() {
                    *slot = idx % candidates.len();
                    idx /= candidates.len();
                }
                let assignment: Vec<A::Elem> = picks.iter().map(|&i| candidates[i].clone()).collect();
                TwistedCocycle::from_generators(action.clone(), &assignment)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(found.into_iter().flatten().collect())
    }
}
