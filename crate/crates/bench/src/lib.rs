//! Inputs for the criterion benchmarks.

use nilmassey_core::{GroupElement, ModulusContext, Result, TruncatedSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A group-like series with uniformly random coefficients in positive degree.
pub fn random_element(rng: &mut ChaCha8Rng, r: usize, n: usize, ctx: ModulusContext) -> Result<GroupElement> {
    let mut s = TruncatedSeries::one(r, n, ctx);
    for d in 1..=n {
        let block: Vec<u64> = (0..r.pow(d as u32)).map(|_| rng.gen_range(0..ctx.modulus())).collect();
        s.set_homogeneous(d, &block);
    }
    GroupElement::new(s)
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
