use std::sync::Arc;

use crate::coeff::linalg::Matrix;
use crate::coeff::ModulusContext;
use crate::cohomology::{ActedGroup, FiniteGroup, GModule};
use crate::error::{Error, Result};
use crate::magnus::{GroupElement, LieBasis, TruncatedSeries};
use crate::unipotent::Character;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionShape {
    /// `g(γ_i) = γ_i^{χ(g)}`.
    Character,
    /// `g(γ_1) = γ_1^{χ(g)}`, `g(γ_2) = 𝔣(g)^{-1} γ_2^{χ(g)} 𝔣(g)` with `𝔣` valued in `[π]_2`.
    Monodromy,
}

/// An action of a finite group on `π/[π]_{N+1}`, given by the images of the
/// generators under every group element.
#[derive(Clone, Debug)]
pub struct FreeGroupAction {
    chi: Character,
    r: usize,
    degree_bound: usize,
    images: Vec<Vec<GroupElement>>,
    shape: ActionShape,
    f: Option<Vec<GroupElement>>,
}

impl FreeGroupAction {
    pub fn character(chi: Character, r: usize, degree_bound: usize) -> Result<Self> {
        let ctx = chi.context();
        ctx.check_factorial_unit(degree_bound)?;
        let gens = (1..=r)
            .map(|i| GroupElement::generator(r, degree_bound, ctx, i))
            .collect::<Result<Vec<_>>>()?;
        let images = chi
            .group()
            .elements()
            .map(|g| gens.iter().map(|x| x.power(chi.residue(g))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let action = FreeGroupAction { chi, r, degree_bound, images, shape: ActionShape::Character, f: None };
        action.verify_axiom()?;
        Ok(action)
    }

    /// The two-generator action twisted by `f`. The action axiom is checked
    /// exactly; the cocycle law of `f` is checked modulo `[π]_N`, since the
    /// degree-`N` part of `f` does not influence the action at this truncation.
    pub fn monodromy(chi: Character, f: Vec<GroupElement>, degree_bound: usize) -> Result<Self> {
        let ctx = chi.context();
        ctx.check_factorial_unit(degree_bound)?;
        let group = chi.group().clone();
        if f.len() != group.order() {
            return Err(Error::NotTwistedCocycle(format!("{} values of f for |G| = {}", f.len(), group.order())));
        }
        for (g, v) in f.iter().enumerate() {
            if v.rank() != 2 || v.degree_bound() != degree_bound || v.context() != ctx {
                return Err(Error::ContextMismatch(format!("f({g}) is not in π/[π]_{} on two generators", degree_bound + 1)));
            }
            if v.series().homogeneous(1).iter().any(|&c| c != 0) {
                return Err(Error::NotTwistedCocycle(format!("f({g}) has a nonzero linear part")));
            }
        }
        if !f[group.identity()].is_identity() {
            return Err(Error::NotTwistedCocycle("f(1) ≠ 1".into()));
        }
        let g1 = GroupElement::generator(2, degree_bound, ctx, 1)?;
        let g2 = GroupElement::generator(2, degree_bound, ctx, 2)?;
        let images = group
            .elements()
            .map(|g| {
                let c = chi.residue(g);
                let a = g1.power(c)?;
                let b = f[g].invert().mul_unchecked(&g2.power(c)?).mul_unchecked(&f[g]);
                Ok(vec![a, b])
            })
            .collect::<Result<Vec<_>>>()?;
        let action = FreeGroupAction { chi, r: 2, degree_bound, images, shape: ActionShape::Monodromy, f: Some(f) };
        action.verify_axiom()?;
        action.verify_f_law()?;
        Ok(action)
    }

    fn verify_axiom(&self) -> Result<()> {
        let g = self.chi.group();
        let id = g.identity();
        for i in 0..self.r {
            if self.images[id][i] != GroupElement::generator(self.r, self.degree_bound, self.context(), i + 1)? {
                return Err(Error::NotAnAction("identity acts nontrivially".into()));
            }
        }
        for a in g.elements() {
            for b in g.elements() {
                let ab = g.mul(a, b);
                for i in 0..self.r {
                    if self.images[ab][i] != self.images[b][i].substitute(&self.images[a])? {
                        return Err(Error::NotAnAction(format!("({a}·{b})(γ{}) ≠ {a}({b}(γ{}))", i + 1, i + 1)));
                    }
                }
            }
        }
        Ok(())
    }

    fn verify_f_law(&self) -> Result<()> {
        let Some(f) = &self.f else { return Ok(()) };
        let g = self.chi.group();
        let low = self.degree_bound.saturating_sub(1);
        for a in g.elements() {
            for b in g.elements() {
                let rhs = f[a].mul_unchecked(&self.act(a, &f[b])?);
                if f[g.mul(a, b)].truncate(low) != rhs.truncate(low) {
                    return Err(Error::NotTwistedCocycle(format!("f fails the cocycle law at ({a}, {b})")));
                }
            }
        }
        Ok(())
    }

    pub fn character_of(&self) -> &Character {
        &self.chi
    }

    pub fn context(&self) -> ModulusContext {
        self.chi.context()
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn shape(&self) -> ActionShape {
        self.shape
    }

    pub fn f(&self) -> Option<&[GroupElement]> {
        self.f.as_deref()
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        self.chi.group()
    }

    /// `g(γ_1), …, g(γ_r)`.
    pub fn images(&self, g: usize) -> &[GroupElement] {
        &self.images[g]
    }

    /// The same action on a lower truncation.
    pub fn truncate(&self, bound: usize) -> FreeGroupAction {
        let bound = bound.min(self.degree_bound);
        FreeGroupAction {
            chi: self.chi.clone(),
            r: self.r,
            degree_bound: bound,
            images: self.images.iter().map(|im| im.iter().map(|x| x.truncate(bound)).collect()).collect(),
            shape: self.shape,
            f: self.f.as_ref().map(|f| f.iter().map(|x| x.truncate(bound)).collect()),
        }
    }

    /// Same group, character, shape and generator images.
    pub fn same_action(&self, other: &FreeGroupAction) -> bool {
        self.chi == other.chi && self.r == other.r && self.degree_bound == other.degree_bound && self.images == other.images
    }

    /// The induced action on `[π]_n/[π]_{n+1}` in Hall coordinates; only the
    /// linear part of each image matters.
    pub fn graded_module(&self, basis: &LieBasis) -> Result<GModule> {
        let n = basis.degree();
        let ctx = self.context();
        if basis.rank() != self.r || basis.context() != ctx {
            return Err(Error::ContextMismatch("Lie basis does not match the action".into()));
        }
        let group = self.chi.group().clone();
        let mut matrices = Vec::with_capacity(group.order());
        for g in group.elements() {
            let linear = self.images[g]
                .iter()
                .map(|im| {
                    let mut s = TruncatedSeries::one(self.r, n, ctx);
                    s.set_homogeneous(1, im.series().homogeneous(1));
                    GroupElement::new(s)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut m = Matrix::zeros(ctx, basis.len(), basis.len());
            for (col, e) in basis.expansions().iter().enumerate() {
                let mut s = TruncatedSeries::one(self.r, n, ctx);
                s.set_homogeneous(n, e);
                let image = s.substitute(&linear)?;
                let coords = basis.decompose(image.homogeneous(n))?;
                for (row, v) in coords.into_iter().enumerate() {
                    m.set(row, col, v);
                }
            }
            matrices.push(m);
        }
        GModule::from_matrices(group, ctx, basis.len(), matrices)?
            .with_labels(basis.elements().iter().map(|t| t.to_string()).collect())
    }
}

impl ActedGroup for FreeGroupAction {
    type Elem = GroupElement;

    fn group(&self) -> &FiniteGroup {
        self.chi.group()
    }

    fn identity(&self) -> GroupElement {
        GroupElement::identity(self.r, self.degree_bound, self.context())
    }

    fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        a.multiply(b)
    }

    fn inverse(&self, a: &GroupElement) -> GroupElement {
        a.invert()
    }

    fn act(&self, g: usize, a: &GroupElement) -> Result<GroupElement> {
        if a.degree_bound() != self.degree_bound || a.rank() != self.r {
            return Err(Error::ContextMismatch(format!(
                "element of degree bound {} acted on by an action of degree bound {}",
                a.degree_bound(),
                self.degree_bound
            )));
        }
        a.substitute(&self.images[g])
    }
}
