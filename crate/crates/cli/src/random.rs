//! Seeded generators for the randomized suites.

use std::sync::Arc;

use nilmassey_core::coeff::linalg::Matrix;
use nilmassey_core::magnus::MalcevBasis;
use nilmassey_core::obstruction::MonodromyAction;
use nilmassey_core::{Character, Cochain, FiniteGroup, FreeWord, GModule, GroupElement, ModulusContext, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn word(rng: &mut ChaCha8Rng, r: usize, max_len: usize) -> FreeWord {
    let len = rng.gen_range(0..=max_len);
    (0..len).fold(FreeWord::empty(), |w, _| {
        let e = rng.gen_range(1..=2) * if rng.gen_bool(0.5) { 1 } else { -1 };
        w.concat(&FreeWord::power(rng.gen_range(1..=r), e))
    })
}

/// `[w_1, [w_2, …, [w_{m-1}, w_m]]]` for random nonempty words.
pub fn commutator_word(rng: &mut ChaCha8Rng, r: usize, depth: usize) -> FreeWord {
    let mut acc = FreeWord::generator(rng.gen_range(1..=r));
    for _ in 1..depth {
        let mut w = word(rng, r, 3);
        if w.is_empty() {
            w = FreeWord::generator(rng.gen_range(1..=r));
        }
        acc = FreeWord::commutator(&w, &acc);
    }
    acc
}

/// A rank-`rank` module for `Z/m`: a sum of characters conjugated by a random
/// unit upper triangular matrix.
pub fn module(rng: &mut ChaCha8Rng, m: usize, ctx: ModulusContext, rank: usize) -> Result<Arc<GModule>> {
    let group = Arc::new(FiniteGroup::cyclic(m)?);
    let units: Vec<u64> = (1..ctx.modulus()).filter(|&u| ctx.is_unit(u) && ctx.pow(u, m as u64) == 1).collect();
    let diag: Vec<u64> = (0..rank).map(|_| units[rng.gen_range(0..units.len())]).collect();
    let mut p = Matrix::identity(ctx, rank);
    for i in 0..rank {
        for j in i + 1..rank {
            p.set(i, j, rng.gen_range(0..ctx.modulus()));
        }
    }
    // back substitution for the inverse of p
    let mut p_inv = Matrix::identity(ctx, rank);
    for col in 0..rank {
        for i in (0..rank).rev() {
            let mut v = u64::from(i == col);
            for k in i + 1..rank {
                v = ctx.sub(v, ctx.mul(p.get(i, k), p_inv.get(k, col)));
            }
            p_inv.set(i, col, v);
        }
    }
    let matrices = (0..m)
        .map(|g| {
            let mut d = Matrix::zeros(ctx, rank, rank);
            for (i, &u) in diag.iter().enumerate() {
                d.set(i, i, ctx.pow(u, g as u64));
            }
            p.mul(&d).mul(&p_inv)
        })
        .collect();
    Ok(Arc::new(GModule::from_matrices(group, ctx, rank, matrices)?))
}

pub fn cochain(rng: &mut ChaCha8Rng, m: &Arc<GModule>, p: usize) -> Result<Cochain> {
    let modulus = m.context().modulus();
    Cochain::from_fn(m.clone(), p, |_| (0..m.rank()).map(|_| rng.gen_range(0..modulus)).collect())
}

/// A product of commutators of random words, in `[π]_2`.
pub fn commutator_element(rng: &mut ChaCha8Rng, n: usize, ctx: ModulusContext) -> Result<GroupElement> {
    let mut u = GroupElement::identity(2, n, ctx);
    for _ in 0..3 {
        let a = nilmassey_core::magnus::magnus_embed(&word(rng, 2, 3), 2, n, ctx)?;
        let b = nilmassey_core::magnus::magnus_embed(&word(rng, 2, 3), 2, n, ctx)?;
        u = u.multiply(&a.commutator(&b)?)?;
    }
    Ok(u)
}

/// Random central elements of degree `n`, trivial at the identity.
pub fn noise(rng: &mut ChaCha8Rng, chi: &Character, n: usize) -> Result<Vec<GroupElement>> {
    let ctx = chi.context();
    let malcev = MalcevBasis::new(2, n, ctx)?;
    let top = malcev.level(n).len();
    chi.group()
        .elements()
        .map(|g| {
            if g == chi.group().identity() {
                Ok(GroupElement::identity(2, n, ctx))
            } else {
                let coords: Vec<u64> = (0..top).map(|_| rng.gen_range(0..ctx.modulus())).collect();
                malcev.central_element(&coords)
            }
        })
        .collect()
}

/// A monodromy action whose `f` is not identically 1.
pub fn monodromy(rng: &mut ChaCha8Rng, chi: &Character, n: usize) -> Result<MonodromyAction> {
    loop {
        let u = commutator_element(rng, n, chi.context())?;
        let noise = noise(rng, chi, n)?;
        let action = MonodromyAction::conjugated(chi.clone(), &u, &noise, n)?;
        if action.f().iter().any(|f| !f.is_identity()) || chi.group().order() == 1 {
            return Ok(action);
        }
    }
}
