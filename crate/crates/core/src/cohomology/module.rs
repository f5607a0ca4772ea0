use std::fmt;
use std::sync::Arc;

use crate::coeff::linalg::Matrix;
use crate::coeff::ModulusContext;
use crate::cohomology::FiniteGroup;
use crate::error::{Error, Result};
use crate::unipotent::Character;

/// A free `Z/ℓ^k`-module of finite rank with a linear `G`-action.
#[derive(Clone)]
pub struct GModule {
    group: Arc<FiniteGroup>,
    ctx: ModulusContext,
    rank: usize,
    labels: Vec<String>,
    action: Vec<Matrix>,
}

impl GModule {
    /// Validates that `g ↦ matrices[g]` is a homomorphism into `GL_rank`.
    pub fn from_matrices(
        group: Arc<FiniteGroup>,
        ctx: ModulusContext,
        rank: usize,
        matrices: Vec<Matrix>,
    ) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::InvalidModule(format!(
                "{} action matrices for a group of order {}",
                matrices.len(),
                group.order()
            )));
        }
        if matrices.iter().any(|m| m.rows() != rank || m.cols() != rank || m.context() != ctx) {
            return Err(Error::InvalidModule(format!("action matrices must be {rank}×{rank} over {ctx:?}")));
        }
        if matrices[group.identity()] != Matrix::identity(ctx, rank) {
            return Err(Error::InvalidModule("identity acts nontrivially".into()));
        }
        for a in group.elements() {
            for b in group.elements() {
                if matrices[group.mul(a, b)] != matrices[a].mul(&matrices[b]) {
                    return Err(Error::InvalidModule(format!("ρ({a}·{b}) ≠ ρ({a})ρ({b})")));
                }
            }
        }
        let labels = (1..=rank).map(|i| format!("e{i}")).collect();
        Ok(GModule { group, ctx, rank, labels, action: matrices })
    }

    pub fn trivial(group: Arc<FiniteGroup>, ctx: ModulusContext, rank: usize) -> Self {
        let action = vec![Matrix::identity(ctx, rank); group.order()];
        let labels = (1..=rank).map(|i| format!("e{i}")).collect();
        GModule { group, ctx, rank, labels, action }
    }

    /// The rank-one module `A(χ^d)`.
    pub fn character_power(chi: &Character, d: usize) -> Self {
        let ctx = chi.context();
        let action = chi
            .group()
            .elements()
            .map(|g| {
                let mut m = Matrix::zeros(ctx, 1, 1);
                m.set(0, 0, chi.power_value(g, d));
                m
            })
            .collect();
        GModule { group: chi.group().clone(), ctx, rank: 1, labels: vec![format!("chi^{d}")], action }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rank {
            return Err(Error::InvalidModule(format!("{} labels for rank {}", labels.len(), self.rank)));
        }
        self.labels = labels;
        Ok(self)
    }

    /// `A ⊗ B` with the diagonal action; basis `a_i ⊗ b_j` at index `i·rank(B) + j`.
    pub fn tensor(a: &GModule, b: &GModule) -> Result<GModule> {
        a.check_same_base(b)?;
        let action = a.action.iter().zip(&b.action).map(|(x, y)| kronecker(x, y)).collect();
        let labels = a
            .labels
            .iter()
            .flat_map(|x| b.labels.iter().map(move |y| if a.rank == 1 && b.rank == 1 { combine_rank_one(x, y) } else { format!("{x}⊗{y}") }))
            .collect();
        Ok(GModule { group: a.group.clone(), ctx: a.ctx, rank: a.rank * b.rank, labels, action })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn context(&self) -> ModulusContext {
        self.ctx
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.action[g]
    }

    /// `g · v`.
    pub fn act(&self, g: usize, v: &[u64]) -> Vec<u64> {
        self.action[g].mul_vec(v)
    }

    pub(crate) fn check_same_base(&self, other: &GModule) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(format!("{:?} vs {:?}", self.ctx, other.ctx)));
        }
        if self.group != other.group {
            return Err(Error::ContextMismatch("modules over different groups".into()));
        }
        Ok(())
    }

    /// Same group, coefficients and action; labels are ignored.
    pub fn same_module(&self, other: &GModule) -> bool {
        self.ctx == other.ctx && self.rank == other.rank && self.group == other.group && self.action == other.action
    }

    /// Checks that `f` (rows = rank of `target`) commutes with the actions.
    pub fn check_morphism(&self, target: &GModule, f: &Matrix) -> Result<()> {
        self.check_same_base(target)?;
        if f.rows() != target.rank || f.cols() != self.rank {
            return Err(Error::DimensionMismatch(format!(
                "map is {}×{}, modules have ranks {} → {}",
                f.rows(),
                f.cols(),
                self.rank,
                target.rank
            )));
        }
        for g in self.group.elements() {
            if f.mul(&self.action[g]) != target.action[g].mul(f) {
                return Err(Error::InvalidModule(format!("map is not equivariant at {g}")));
            }
        }
        Ok(())
    }
}

impl PartialEq for GModule {
    fn eq(&self, other: &Self) -> bool {
        self.same_module(other)
    }
}

impl Eq for GModule {}

impl fmt::Debug for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GModule(rank {} over {:?}, |G| = {}, {:?})", self.rank, self.ctx, self.group.order(), self.labels)
    }
}

fn combine_rank_one(x: &str, y: &str) -> String {
    match (x.strip_prefix("chi^"), y.strip_prefix("chi^")) {
        (Some(a), Some(b)) => match (a.parse::<usize>(), b.parse::<usize>()) {
            (Ok(a), Ok(b)) => format!("chi^{}", a + b),
            _ => format!("{x}⊗{y}"),
        },
        _ => format!("{x}⊗{y}"),
    }
}

fn kronecker(a: &Matrix, b: &Matrix) -> Matrix {
    let ctx = a.context();
    let mut m = Matrix::zeros(ctx, a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = a.get(i, j);
            if x == 0 {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    m.set(i * b.rows() + k, j * b.cols() + l, ctx.mul(x, b.get(k, l)));
                }
            }
        }
    }
    m
}
