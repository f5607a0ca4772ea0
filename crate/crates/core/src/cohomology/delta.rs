use std::sync::Arc;

use rayon::prelude::*;

use crate::coeff::linalg::Matrix;
use crate::cohomology::{ActedGroup, Cochain, FreeGroupAction, GModule, TwistedCocycle};
use crate::error::{Error, Result};
use crate::magnus::{GroupElement, LieBasis, MalcevBasis, MonomialIndex};
use crate::unipotent::Character;

/// The obstruction cochain `δ_n(x)` together with the data used to build it.
#[derive(Clone, Debug)]
pub struct DeltaN {
    pub n: usize,
    /// Hall coordinates of `[π]_n/[π]_{n+1}`.
    pub basis: LieBasis,
    /// The 2-cochain `c(g, h) = x̃(g) · g(x̃(h)) · x̃(gh)^{-1}`.
    pub cochain: Cochain,
    /// The set-theoretic lift `x̃` to `π/[π]_{n+1}`.
    pub lift: Vec<GroupElement>,
}

impl DeltaN {
    pub fn module(&self) -> &Arc<GModule> {
        self.cochain.module()
    }

    /// The row vector of `μ_J` on the Hall basis.
    pub fn mu_j_row(&self, j: &MonomialIndex) -> Result<Vec<u64>> {
        if j.degree() != self.n {
            return Err(Error::DimensionMismatch(format!("J of degree {} for δ_{}", j.degree(), self.n)));
        }
        j.check_rank(self.basis.rank())?;
        let idx = j.rank(self.basis.rank());
        Ok(self.basis.expansions().iter().map(|e| e[idx]).collect())
    }

    /// `(μ_J)_* δ_n(x)`, valued in `A(χ^n)`.
    pub fn push_forward(&self, j: &MonomialIndex, chi: &Character) -> Result<Cochain> {
        let row = self.mu_j_row(j)?;
        let target = Arc::new(GModule::character_power(chi, self.n));
        let f = Matrix::from_rows(chi.context(), &[row])?;
        self.cochain.map(target, &f)
    }
}

/// `δ_n(x)` for a cocycle `x` into `π/[π]_n` (degree bound `n - 1`), using the
/// lift that keeps the Mal'cev coordinates of `x(g)` and sets the new ones
/// to zero. `action` is the action on `π/[π]_{n+1}` (degree bound `n`).
pub fn delta_n(x: &TwistedCocycle<FreeGroupAction>, action: &FreeGroupAction) -> Result<DeltaN> {
    let malcev = MalcevBasis::new(action.rank(), action.degree_bound(), action.context())?;
    let lift = x.values().iter().map(|v| malcev.lift(v)).collect::<Result<Vec<_>>>()?;
    delta_n_with_lift(x, action, lift)
}

/// `δ_n(x)` for an explicit lift `x̃` with `x̃(1) = 1`.
pub fn delta_n_with_lift(
    x: &TwistedCocycle<FreeGroupAction>,
    action: &FreeGroupAction,
    lift: Vec<GroupElement>,
) -> Result<DeltaN> {
    let n = action.degree_bound();
    if n < 2 {
        return Err(Error::DimensionMismatch("δ_n needs n ≥ 2".into()));
    }
    let low = x.action();
    if low.degree_bound() != n - 1 || !low.same_action(&action.truncate(n - 1)) {
        return Err(Error::ContextMismatch(format!(
            "cocycle action must be the degree-{} truncation of the given action",
            n - 1
        )));
    }
    let group = action.group_arc().clone();
    if lift.len() != group.order() {
        return Err(Error::DimensionMismatch(format!("{} lifted values for |G| = {}", lift.len(), group.order())));
    }
    for (g, (l, v)) in lift.iter().zip(x.values()).enumerate() {
        if l.degree_bound() != n || l.truncate(n - 1) != *v {
            return Err(Error::SectionInvalid(format!("lift at {g} does not reduce to x({g})")));
        }
    }
    if !lift[group.identity()].is_identity() {
        return Err(Error::SectionInvalid("lift must send 1 to 1".into()));
    }

    let basis = LieBasis::new(action.rank(), n, action.context());
    let module = Arc::new(action.graded_module(&basis)?);
    let rank = basis.len();
    let mut values = Vec::with_capacity(group.order() * group.order() * rank);
    for g in group.elements() {
        for h in group.elements() {
            let c = lift[g]
                .mul_unchecked(&action.act(g, &lift[h])?)
                .mul_unchecked(&lift[group.mul(g, h)].invert());
            for d in 1..n {
                if c.series().homogeneous(d).iter().any(|&v| v != 0) {
                    return Err(Error::LieSliceViolation { degree: d });
                }
            }
            let coords = basis.decompose(c.series().homogeneous(n)).map_err(|e| match e {
                Error::NotLie => Error::LieSliceViolation { degree: n },
                other => other,
            })?;
            values.extend(coords);
        }
    }
    let cochain = Cochain::from_values(module, 2, values)?;
    Ok(DeltaN { n, basis, cochain, lift })
}

/// Exhaustive search for a cocycle into `π/[π]_{n+1}` reducing to `x`: on
/// each generator of `G` the value ranges over the fiber of `x(s)`, i.e. the
/// zero-padded lift times every central element.
pub fn search_lift(
    x: &TwistedCocycle<FreeGroupAction>,
    action: &Arc<FreeGroupAction>,
) -> Result<Option<TwistedCocycle<FreeGroupAction>>> {
    let n = action.degree_bound();
    let malcev = MalcevBasis::new(action.rank(), n, action.context())?;
    let central: Vec<GroupElement> = malcev.enumerate_central().collect();
    let base = x
        .generator_values()
        .iter()
        .map(|v| malcev.lift(v))
        .collect::<Result<Vec<_>>>()?;
    let gens = base.len();
    let total = central.len().checked_pow(gens as u32).ok_or_else(|| {
        Error::DimensionMismatch("lift search space too large".into())
    })?;
    let found = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut assignment = Vec::with_capacity(gens);
            for b in base.iter().rev() {
                assignment.push(b.mul_unchecked(&central[idx % central.len()]));
                idx /= central.len();
            }
            assignment.reverse();
            TwistedCocycle::from_generators(action.clone(), &assignment)
        })
        .find_map_first(|r| match r {
            Ok(Some(c)) => Some(Ok(c)),
            Ok(None) => None,
            Err(e) => Some(Err(e)),
        });
    found.transpose()
}
