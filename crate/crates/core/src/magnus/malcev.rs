//! Mal'cev coordinates on the truncated Magnus group.
//!
//! Every element of the image of `π/[π]_{N+1}` in the degree-`N` truncation
//! is uniquely `∏_b b^{c_b}` over basic commutators of weight `≤ N`, ordered
//! by weight, with `c_b ∈ Z/ℓ^k`. Residue exponents go through the binomial
//! series, so `N < ℓ` is required.

use crate::coeff::ModulusContext;
use crate::error::{Error, Result};
use crate::magnus::hall::{BracketTree, LieBasis};
use crate::magnus::GroupElement;

#[derive(Clone, Debug)]
pub struct MalcevBasis {
    r: usize,
    degree_bound: usize,
    ctx: ModulusContext,
    /// `levels[w - 1]` is the weight-`w` Lie basis.
    levels: Vec<LieBasis>,
    /// Commutators evaluated at the full degree bound, by weight.
    elements: Vec<Vec<GroupElement>>,
}

impl MalcevBasis {
    pub fn new(r: usize, degree_bound: usize, ctx: ModulusContext) -> Result<Self> {
        ctx.check_factorial_unit(degree_bound)?;
        let levels: Vec<LieBasis> = (1..=degree_bound).map(|w| LieBasis::new(r, w, ctx)).collect();
        let elements = levels
            .iter()
            .map(|l| {
                l.elements()
                    .iter()
                    .map(|t| t.to_group_element(r, degree_bound, ctx))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MalcevBasis { r, degree_bound, ctx, levels, elements })
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn context(&self) -> ModulusContext {
        self.ctx
    }

    pub fn level(&self, weight: usize) -> &LieBasis {
        &self.levels[weight - 1]
    }

    /// Number of coordinates up to the given weight.
    pub fn dimension_to(&self, weight: usize) -> usize {
        self.levels[..weight].iter().map(|l| l.len()).sum()
    }

    pub fn dimension(&self) -> usize {
        self.dimension_to(self.degree_bound)
    }

    /// Basic commutators in coordinate order.
    pub fn commutators(&self) -> impl Iterator<Item = &BracketTree> {
        self.levels.iter().flat_map(|l| l.elements())
    }

    /// `∏_b b^{c_b}` truncated at `bound ≤ N`; `coords` covers weights
    /// `1..=bound` in coordinate order.
    pub fn element_at(&self, coords: &[u64], bound: usize) -> Result<GroupElement> {
        if bound > self.degree_bound || coords.len() != self.dimension_to(bound) {
            return Err(Error::DimensionMismatch(format!(
                "{} Mal'cev coordinates for degree bound {bound}",
                coords.len()
            )));
        }
        let mut result = GroupElement::identity(self.r, bound, self.ctx);
        let mut i = 0;
        for level in &self.elements[..bound] {
            for b in level {
                let c = coords[i] % self.ctx.modulus();
                i += 1;
                if c != 0 {
                    let factor = b.truncate(bound).power(self.ctx.wrap(c))?;
                    result = result.mul_unchecked(&factor);
                }
            }
        }
        Ok(result)
    }

    pub fn element(&self, coords: &[u64]) -> Result<GroupElement> {
        self.element_at(coords, self.degree_bound)
    }

    /// Inverse of [`element_at`](Self::element_at) at the degree bound of `g`.
    /// Fails with `NotGroupLike` when `g` is not in the image of the free group.
    pub fn coordinates(&self, g: &GroupElement) -> Result<Vec<u64>> {
        let bound = g.degree_bound();
        if g.rank() != self.r || g.context() != self.ctx || bound > self.degree_bound {
            return Err(Error::ContextMismatch("element does not fit this Mal'cev basis".into()));
        }
        let mut coords = Vec::with_capacity(self.dimension_to(bound));
        let mut rest = g.clone();
        for w in 1..=bound {
            let level = &self.levels[w - 1];
            let slice = rest.series().homogeneous(w);
            let c = level.decompose(slice).map_err(|e| match e {
                Error::NotLie => Error::NotGroupLike(format!("degree-{w} part is not a Lie element")),
                other => other,
            })?;
            let mut factor = GroupElement::identity(self.r, bound, self.ctx);
            for (b, &cb) in self.elements[w - 1].iter().zip(&c) {
                if cb != 0 {
                    factor = factor.mul_unchecked(&b.truncate(bound).power(self.ctx.wrap(cb))?);
                }
            }
            rest = factor.invert().mul_unchecked(&rest);
            coords.extend(c);
        }
        debug_assert!(rest.is_identity());
        Ok(coords)
    }

    /// Lifts an element of a lower truncation to the full degree bound by
    /// keeping its Mal'cev coordinates and setting the new ones to zero.
    pub fn lift(&self, g: &GroupElement) -> Result<GroupElement> {
        let mut coords = self.coordinates(g)?;
        coords.resize(self.dimension(), 0);
        self.element(&coords)
    }

    /// `1 + Σ c_b · lie(b)` over top-weight commutators: the central
    /// subgroup `[π]_N / [π]_{N+1}`.
    pub fn central_element(&self, top_coords: &[u64]) -> Result<GroupElement> {
        let top = self.level(self.degree_bound);
        if top_coords.len() != top.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} central coordinates, expected {}",
                top_coords.len(),
                top.len()
            )));
        }
        let mut s = GroupElement::identity(self.r, self.degree_bound, self.ctx).into_series();
        s.set_homogeneous(self.degree_bound, &top.combine(top_coords));
        GroupElement::new(s)
    }

    /// Every element of the truncated group, `ℓ^{k·dim}` of them.
    pub fn enumerate(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let m = self.ctx.modulus();
        let dim = self.dimension();
        let total = m.checked_pow(dim as u32).expect("group too large to enumerate");
        (0..total).map(move |mut idx| {
            let mut coords = vec![0; dim];
            for c in coords.iter_mut() {
                *c = idx % m;
                idx /= m;
            }
            self.element(&coords).expect("coordinates are in range")
        })
    }

    /// Every element of the central subgroup of [`central_element`](Self::central_element).
    pub fn enumerate_central(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let m = self.ctx.modulus();
        let dim = self.level(self.degree_bound).len();
        let total = m.checked_pow(dim as u32).expect("center too large to enumerate");
        (0..total).map(move |mut idx| {
            let mut coords = vec![0; dim];
            for c in coords.iter_mut() {
                *c = idx % m;
                idx /= m;
            }
            self.central_element(&coords).expect("coordinates are in range")
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magnus::{magnus_embed, FreeWord};
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn ctx() -> ModulusContext {
        ModulusContext::new(5, 1).unwrap()
    }

    #[test]
    fn enumeration_has_expected_size_and_is_closed() {
        let c = ModulusContext::new(3, 1).unwrap();
        let b = MalcevBasis::new(2, 2, c).unwrap();
        assert_eq!(b.dimension(), 3);
        let all: HashSet<_> = b.enumerate().collect();
        assert_eq!(all.len(), 27);
        for x in all.iter().take(5) {
            for y in all.iter().take(7) {
                assert!(all.contains(&x.multiply(y).unwrap()));
            }
            assert!(all.contains(&x.invert()));
        }
    }

    #[test]
    fn rejects_non_group_like() {
        let b = MalcevBasis::new(2, 2, ctx()).unwrap();
        let mut s = GroupElement::identity(2, 2, ctx()).into_series();
        s.set_coefficient(&"12".parse().unwrap(), ctx().one()).unwrap();
        let g = GroupElement::new(s).unwrap();
        assert!(matches!(b.coordinates(&g), Err(Error::NotGroupLike(_))));
    }

    #[test]
    fn lift_is_a_preimage_and_group_like() {
        let c = ctx();
        let b = MalcevBasis::new(2, 4, c).unwrap();
        let w: FreeWord = "1 2 2 -1 2".parse().unwrap();
        let low = magnus_embed(&w, 2, 3, c).unwrap();
        let lifted = b.lift(&low).unwrap();
        assert_eq!(lifted.truncate(3), low);
        assert!(b.coordinates(&lifted).is_ok());
    }

    #[test]
    fn needs_small_degree() {
        let c = ModulusContext::new(3, 1).unwrap();
        assert!(MalcevBasis::new(2, 3, c).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn coordinates_round_trip(raw in prop::collection::vec(0u64..25, 8)) {
            let c = ModulusContext::new(5, 2).unwrap();
            let b = MalcevBasis::new(2, 4, c).unwrap();
            let coords: Vec<u64> = raw.into_iter().take(b.dimension()).collect();
            let g = b.element(&coords).unwrap();
            prop_assert_eq!(b.coordinates(&g).unwrap(), coords);
        }

        #[test]
        fn words_have_coordinates(letters in prop::collection::vec((1usize..=3, -2i64..=2), 0..10)) {
            let c = ctx();
            let b = MalcevBasis::new(3, 3, c).unwrap();
            let mut w = FreeWord::empty();
            for (g, e) in letters {
                w.push(g, crate::magnus::Exponent::Int(e));
            }
            let g = magnus_embed(&w, 3, 3, c).unwrap();
            let coords = b.coordinates(&g).unwrap();
            prop_assert_eq!(b.element(&coords).unwrap(), g);
        }
    }
}
