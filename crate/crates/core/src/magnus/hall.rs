//! Basic commutators and the degree-`n` Lie elements they span.
//!
//! Generators are ordered `γ_1 ≻ γ_2 ≻ … ≻ γ_r`, higher weight is larger, and
//! within a weight the generation order is used. `[u, v]` is basic when
//! `u ≻ v` and, if `u = [s, t]`, also `v ⪰ t`. With this order the degree-2
//! and degree-3 bases for two generators are `[γ1,γ2]` and
//! `[[γ1,γ2],γ1], [[γ1,γ2],γ2]`.

use std::fmt;

use crate::coeff::linalg::{Matrix, PreparedSystem, Solution};
use crate::coeff::{ModulusContext, Residue};
use crate::error::{Error, Result};
use crate::magnus::{FreeWord, GroupElement};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum BracketTree {
    Generator(usize),
    Bracket(Box<BracketTree>, Box<BracketTree>),
}

impl BracketTree {
    pub fn bracket(a: BracketTree, b: BracketTree) -> BracketTree {
        BracketTree::Bracket(Box::new(a), Box::new(b))
    }

    pub fn weight(&self) -> usize {
        match self {
            BracketTree::Generator(_) => 1,
            BracketTree::Bracket(a, b) => a.weight() + b.weight(),
        }
    }

    /// The iterated group commutator as a free-group word.
    pub fn to_word(&self) -> FreeWord {
        match self {
            BracketTree::Generator(g) => FreeWord::generator(*g),
            BracketTree::Bracket(a, b) => FreeWord::commutator(&a.to_word(), &b.to_word()),
        }
    }

    /// The iterated group commutator evaluated in the truncated Magnus group.
    pub fn to_group_element(&self, r: usize, degree_bound: usize, ctx: ModulusContext) -> Result<GroupElement> {
        match self {
            BracketTree::Generator(g) => GroupElement::generator(r, degree_bound, ctx, *g),
            BracketTree::Bracket(a, b) => a
                .to_group_element(r, degree_bound, ctx)?
                .commutator(&b.to_group_element(r, degree_bound, ctx)?),
        }
    }

    /// Homogeneous expansion under `[a, b] = ab - ba`, as a dense block of
    /// length `r^weight`.
    pub fn lie_expansion(&self, r: usize, ctx: ModulusContext) -> Vec<u64> {
        match self {
            BracketTree::Generator(g) => {
                let mut v = vec![0; r];
                v[g - 1] = 1 % ctx.modulus();
                v
            }
            BracketTree::Bracket(a, b) => {
                let x = a.lie_expansion(r, ctx);
                let y = b.lie_expansion(r, ctx);
                let mut out = homogeneous_product(&x, &y, ctx);
                for (o, v) in out.iter_mut().zip(homogeneous_product(&y, &x, ctx)) {
                    *o = ctx.sub(*o, v);
                }
                out
            }
        }
    }
}

/// Product of homogeneous blocks: the word `uv` has rank `rank(u)·|y| + rank(v)`.
fn homogeneous_product(x: &[u64], y: &[u64], ctx: ModulusContext) -> Vec<u64> {
    let mut out = vec![0; x.len() * y.len()];
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate() {
            out[i * y.len() + j] = ctx.mul(a, b);
        }
    }
    out
}

impl fmt::Display for BracketTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketTree::Generator(g) => write!(f, "{g}"),
            BracketTree::Bracket(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

impl fmt::Debug for BracketTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Basic {
    tree: BracketTree,
    weight: usize,
    /// Position of the right factor when this is a bracket.
    right: Option<usize>,
}

/// All basic commutators of weight `≤ n`, in the total order of the module docs.
pub fn basic_commutators(r: usize, n: usize) -> Vec<(BracketTree, usize)> {
    let mut basics: Vec<Basic> = (1..=r)
        .rev()
        .map(|g| Basic { tree: BracketTree::Generator(g), weight: 1, right: None })
        .collect();
    for w in 2..=n {
        let mut fresh = Vec::new();
        for i in (0..basics.len()).rev() {
            let u = &basics[i];
            if u.weight >= w {
                continue;
            }
            for j in (0..i).rev() {
                let v = &basics[j];
                if u.weight + v.weight != w {
                    continue;
                }
                if let Some(t) = u.right {
                    if j < t {
                        continue;
                    }
                }
                fresh.push(Basic {
                    tree: BracketTree::bracket(u.tree.clone(), v.tree.clone()),
                    weight: w,
                    right: Some(j),
                });
            }
        }
        basics.extend(fresh);
    }
    let mut out: Vec<(BracketTree, usize)> = basics.into_iter().map(|b| (b.tree, b.weight)).collect();
    // weight 1 listed as γ_1, γ_2, … for readability
    out[..r].reverse();
    out
}

/// Witt's necklace count `(1/n) Σ_{d|n} μ(d) r^{n/d}`.
pub fn witt_number(r: usize, n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let mobius = |mut d: usize| -> i64 {
        let mut result = 1;
        let mut p = 2;
        while p * p <= d {
            if d % p == 0 {
                d /= p;
                if d % p == 0 {
                    return 0;
                }
                result = -result;
            }
            p += 1;
        }
        if d > 1 {
            result = -result;
        }
        result
    };
    let total: i64 = (1..=n)
        .filter(|d| n % d == 0)
        .map(|d| mobius(d) * (r as i64).pow((n / d) as u32))
        .sum();
    (total / n as i64) as usize
}

/// The basic commutators of one weight with their Lie expansions.
#[derive(Clone, Debug)]
pub struct LieBasis {
    r: usize,
    degree: usize,
    ctx: ModulusContext,
    elements: Vec<BracketTree>,
    expansions: Vec<Vec<u64>>,
    system: PreparedSystem,
}

impl LieBasis {
    pub fn new(r: usize, degree: usize, ctx: ModulusContext) -> Self {
        let elements: Vec<BracketTree> = basic_commutators(r, degree)
            .into_iter()
            .filter(|(_, w)| *w == degree)
            .map(|(t, _)| t)
            .collect();
        let expansions: Vec<Vec<u64>> = elements.iter().map(|t| t.lie_expansion(r, ctx)).collect();
        let rows = r.pow(degree as u32);
        let mut m = Matrix::zeros(ctx, rows, expansions.len());
        for (j, e) in expansions.iter().enumerate() {
            for (i, &v) in e.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        let system = PreparedSystem::new(&m);
        LieBasis { r, degree, ctx, elements, expansions, system }
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn context(&self) -> ModulusContext {
        self.ctx
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[BracketTree] {
        &self.elements
    }

    pub fn expansions(&self) -> &[Vec<u64>] {
        &self.expansions
    }

    /// Whether the expansion matrix has a left inverse over `Z/ℓ^k`.
    pub fn is_direct_summand(&self) -> bool {
        self.system.has_left_inverse()
    }

    /// Coordinates of a homogeneous degree-`n` block in this basis.
    pub fn decompose(&self, slice: &[u64]) -> Result<Vec<u64>> {
        if slice.len() != self.r.pow(self.degree as u32) {
            return Err(Error::DimensionMismatch(format!(
                "slice of length {} for degree {} in {} variables",
                slice.len(),
                self.degree,
                self.r
            )));
        }
        if slice.iter().all(|&v| v == 0) {
            return Ok(vec![0; self.len()]);
        }
        match self.system.solve(slice)? {
            Solution::Solved(x) => Ok(x),
            Solution::Inconsistent(_) => Err(Error::NotLie),
        }
    }

    /// `Σ coords_i · expansion_i`.
    pub fn combine(&self, coords: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.r.pow(self.degree as u32)];
        for (c, e) in coords.iter().zip(&self.expansions) {
            if *c == 0 {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(e) {
                *o = self.ctx.mul_add(*o, *c, v);
            }
        }
        out
    }
}

pub fn hall_basis(r: usize, n: usize, ctx: ModulusContext) -> LieBasis {
    LieBasis::new(r, n, ctx)
}

/// Coordinates of a homogeneous slice in [`hall_basis`]; `NotLie` when the
/// slice is outside the Lie span.
pub fn lie_decompose(slice: &[u64], r: usize, n: usize, ctx: ModulusContext) -> Result<Vec<Residue>> {
    let basis = LieBasis::new(r, n, ctx);
    Ok(basis.decompose(slice)?.into_iter().map(|v| ctx.wrap(v)).collect())
}
