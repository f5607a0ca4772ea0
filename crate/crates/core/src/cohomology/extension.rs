use std::fmt::Debug;
use std::sync::Arc;

use crate::cohomology::{Cochain, GModule};
use crate::error::{Error, Result};
use crate::unipotent::{Character, UnipotentMatrix};

/// An extension `1 → A → E → Q → 1` with `A` abelian, written additively
/// through [`kernel_coordinates`](AbelianExtension::kernel_coordinates).
pub trait AbelianExtension {
    type Elem: Clone + PartialEq + Debug;
    type Quot: Clone + PartialEq + Debug;

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;
    fn project(&self, e: &Self::Elem) -> Self::Quot;
    fn quotient_mul(&self, a: &Self::Quot, b: &Self::Quot) -> Self::Quot;
    /// Coordinates of `e` when it lies in `A`.
    fn kernel_coordinates(&self, e: &Self::Elem) -> Option<Vec<u64>>;
    fn kernel_element(&self, coords: &[u64]) -> Self::Elem;
}

/// The classifying 2-cocycle `c(g, h) = s(ρg) s(ρh) s(ρ(gh))^{-1}` of the
/// extension pulled back along a homomorphism `ρ: G → Q`, listed as
/// `rho[g]`. `module` is `A` with `G` acting by conjugation through `ρ`,
/// which is verified.
pub fn extension_two_cocycle_pullback<E: AbelianExtension>(
    ext: &E,
    rho: &[E::Quot],
    section: impl Fn(&E::Quot) -> E::Elem,
    module: Arc<GModule>,
) -> Result<Cochain> {
    let group = module.group().clone();
    if rho.len() != group.order() {
        return Err(Error::DimensionMismatch(format!("ρ has {} values for |G| = {}", rho.len(), group.order())));
    }
    for a in group.elements() {
        for b in group.elements() {
            if ext.quotient_mul(&rho[a], &rho[b]) != rho[group.mul(a, b)] {
                return Err(Error::SectionInvalid(format!("ρ is not multiplicative at ({a}, {b})")));
            }
        }
    }
    let s: Vec<E::Elem> = rho.iter().map(&section).collect();
    for (g, (e, q)) in s.iter().zip(rho).enumerate() {
        if ext.project(e) != *q {
            return Err(Error::SectionInvalid(format!("s(ρ({g})) does not project to ρ({g})")));
        }
    }
    let one = &s[group.identity()];
    if ext.kernel_coordinates(one).map_or(true, |c| c.iter().any(|&v| v != 0)) {
        return Err(Error::SectionInvalid("s(1) ≠ 1".into()));
    }
    let rank = module.rank();
    let ctx = module.context();
    for g in group.elements() {
        let conj_inv = ext.inverse(&s[g]);
        for i in 0..rank {
            let mut basis = vec![0; rank];
            basis[i] = 1 % ctx.modulus();
            let conj = ext.mul(&ext.mul(&s[g], &ext.kernel_element(&basis)), &conj_inv);
            if ext.kernel_coordinates(&conj) != Some(module.act(g, &basis)) {
                return Err(Error::InvalidModule(format!("conjugation by s(ρ({g})) disagrees with the module action")));
            }
        }
    }
    Cochain::from_fn(module, 2, |t| {
        let (g, h) = (t[0], t[1]);
        let e = ext.mul(&ext.mul(&s[g], &s[h]), &ext.inverse(&s[group.mul(g, h)]));
        ext.kernel_coordinates(&e).expect("s(g)s(h)s(gh)^-1 projects to 1")
    })
}

/// The classifying 2-cocycle of an extension of a finite group `Q`, whose
/// elements are `0..|Q|`; `section[q]` lies over `q`.
pub fn extension_two_cocycle<E: AbelianExtension<Quot = usize>>(
    ext: &E,
    section: &[E::Elem],
    module: Arc<GModule>,
) -> Result<Cochain> {
    let order = module.group().order();
    if section.len() != order {
        return Err(Error::SectionInvalid(format!("{} section values for |Q| = {order}", section.len())));
    }
    let rho: Vec<usize> = (0..order).collect();
    extension_two_cocycle_pullback(ext, &rho, |q| section[*q].clone(), module)
}

/// `E = A × Q` with `(a, q)(b, q') = (a + q·b + f(q, q'), q q')` for a
/// normalized 2-cocycle `f`.
#[derive(Clone, Debug)]
pub struct TableExtension {
    module: Arc<GModule>,
    f: Cochain,
}

impl TableExtension {
    pub fn twisted_product(f: Cochain) -> Result<Self> {
        if f.degree() != 2 {
            return Err(Error::DimensionMismatch("extension data must be a 2-cochain".into()));
        }
        if !f.is_cocycle() {
            return Err(Error::NotACocycle);
        }
        let g = f.group();
        let e = g.identity();
        if g.elements().any(|q| f.value(&[e, q]).iter().chain(f.value(&[q, e])).any(|&v| v != 0)) {
            return Err(Error::SectionInvalid("extension cocycle must be normalized".into()));
        }
        Ok(TableExtension { module: f.module().clone(), f })
    }

    pub fn module(&self) -> &Arc<GModule> {
        &self.module
    }

    /// Every element, `a` in lexicographic order within each `q`.
    pub fn elements(&self) -> Vec<(Vec<u64>, usize)> {
        let m = self.module.context().modulus();
        let rank = self.module.rank();
        let count = m.pow(rank as u32);
        let mut out = Vec::new();
        for q in self.module.group().elements() {
            for mut idx in 0..count {
                let mut a = vec![0; rank];
                for slot in a.iter_mut().rev() {
                    *slot = idx % m;
                    idx /= m;
                }
                out.push((a, q));
            }
        }
        out
    }
}

impl AbelianExtension for TableExtension {
    type Elem = (Vec<u64>, usize);
    type Quot = usize;

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ctx = self.module.context();
        let g = self.module.group();
        let qb = self.module.act(a.1, &b.0);
        let f = self.f.value(&[a.1, b.1]);
        let v = a.0.iter().zip(&qb).zip(f).map(|((&x, &y), &z)| ctx.add(ctx.add(x, y), z)).collect();
        (v, g.mul(a.1, b.1))
    }

    fn inverse(&self, a: &Self::Elem) -> Self::Elem {
        let ctx = self.module.context();
        let g = self.module.group();
        let qi = g.inv(a.1);
        let f = self.f.value(&[a.1, qi]);
        let sum: Vec<u64> = a.0.iter().zip(f).map(|(&x, &y)| ctx.neg(ctx.add(x, y))).collect();
        (self.module.act(qi, &sum), qi)
    }

    fn project(&self, e: &Self::Elem) -> usize {
        e.1
    }

    fn quotient_mul(&self, a: &usize, b: &usize) -> usize {
        self.module.group().mul(*a, *b)
    }

    fn kernel_coordinates(&self, e: &Self::Elem) -> Option<Vec<u64>> {
        (e.1 == self.module.group().identity()).then(|| e.0.clone())
    }

    fn kernel_element(&self, coords: &[u64]) -> Self::Elem {
        (coords.to_vec(), self.module.group().identity())
    }
}

/// `U_{n+1} ⋊ G` over `Ū_{n+1} ⋊ G`, where `Ū` is `U` modulo its center
/// (the corner entry). Quotient elements are stored with corner zero.
#[derive(Clone, Debug)]
pub struct UnipotentExtension {
    n: usize,
    chi: Character,
}

impl UnipotentExtension {
    pub fn new(n: usize, chi: Character) -> Self {
        UnipotentExtension { n, chi }
    }

    /// The center `A(χ^n)`.
    pub fn kernel_module(&self) -> GModule {
        GModule::character_power(&self.chi, self.n)
    }

    /// The section that keeps every off-corner entry and sets the corner to 0.
    pub fn corner_free_section(q: &(UnipotentMatrix, usize)) -> (UnipotentMatrix, usize) {
        (q.0.without_corner(), q.1)
    }
}

impl AbelianExtension for UnipotentExtension {
    type Elem = (UnipotentMatrix, usize);
    type Quot = (UnipotentMatrix, usize);

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let g = self.chi.group();
        let acted = b.0.scale_by(self.chi.value(a.1));
        (a.0.mul_unchecked(&acted), g.mul(a.1, b.1))
    }

    fn inverse(&self, a: &Self::Elem) -> Self::Elem {
        let g = self.chi.group();
        let gi = g.inv(a.1);
        (a.0.invert().scale_by(self.chi.value(gi)), gi)
    }

    fn project(&self, e: &Self::Elem) -> Self::Quot {
        (e.0.without_corner(), e.1)
    }

    fn quotient_mul(&self, a: &Self::Quot, b: &Self::Quot) -> Self::Quot {
        let p = self.mul(a, b);
        (p.0.without_corner(), p.1)
    }

    fn kernel_coordinates(&self, e: &Self::Elem) -> Option<Vec<u64>> {
        if e.1 != self.chi.group().identity() || !e.0.without_corner().is_identity() {
            return None;
        }
        Some(vec![e.0.corner().value()])
    }

    fn kernel_element(&self, coords: &[u64]) -> Self::Elem {
        let mut m = UnipotentMatrix::identity(self.n, self.chi.context());
        m.set_raw(1, self.n + 1, coords[0] % self.chi.context().modulus());
        (m, self.chi.group().identity())
    }
}
