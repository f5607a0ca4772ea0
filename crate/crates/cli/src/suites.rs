//! The `verify` suites. Each returns a report with one entry per identity.

use std::sync::Arc;

use nilmassey_core::cohomology::{delta_n, search_lift, ActedGroup, GroupSpec};
use nilmassey_core::magnus::{magnus_embed, witt_number, MalcevBasis};
use nilmassey_core::massey::canonical_system;
use nilmassey_core::obstruction::{section_obstructions, single_two_indices, Verdict};
use nilmassey_core::unipotent::{build_a, PhiJ};
use nilmassey_core::{
    Character, FiniteGroup, FreeGroupAction, GroupElement, LieBasis, ModulusContext, MonomialIndex, Result,
    TwistedCocycle, UnipotentMatrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{build_character, parse_group, CharacterSpec};
use crate::random;
use crate::report::{Check, SuiteReport};

fn config_json<T: Serialize>(params: &T) -> Value {
    serde_json::to_value(params).expect("suite parameters serialize")
}

#[derive(Clone, Debug, Serialize)]
pub struct AldefParams {
    pub lmax: usize,
    pub nmax: i64,
    pub ells: Vec<u64>,
    pub kmax: u32,
}

/// `a_{i,i+j}(A_l^N) = N^j a_{i,i+j}(A_l)`. Pairs with `l ≥ ℓ` are skipped,
/// since `A_l` needs `1/l!`.
pub fn aldef(p: &AldefParams) -> Result<SuiteReport> {
    let mut check = Check::new("a_l_power_entries");
    for &ell in &p.ells {
        for k in 1..=p.kmax {
            let ctx = ModulusContext::new(ell, k)?;
            for l in 1..=p.lmax {
                if l as u64 >= ell {
                    check.skipped += 1;
                    continue;
                }
                let a = build_a(l, ctx)?;
                for n in 0..=p.nmax {
                    let power = a.pow_int(n);
                    for i in 1..=l {
                        for j in 1..=l + 1 - i {
                            let lhs = power.a(i, i + j);
                            let rhs = ctx.residue(n).pow(j as u64) * a.a(i, i + j);
                            check.record(lhs == rhs, || {
                                json!({"ell": ell, "k": k, "l": l, "N": n, "i": i, "j": j, "lhs": lhs.value(), "rhs": rhs.value()})
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(SuiteReport::new("aldef", config_json(p), vec![check]))
}

#[derive(Clone, Debug, Serialize)]
pub struct MagnusParams {
    pub seed: u64,
    pub pairs: usize,
    pub ells: Vec<u64>,
    pub depth_max: usize,
    pub samples_per_depth: usize,
    pub nmax: usize,
}

pub fn magnus(p: &MagnusParams) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let bound = p.depth_max;

    let mut vanishing = Check::new("mu_j_vanishes_below_commutator_depth");
    for &ell in &p.ells {
        let ctx = ModulusContext::new(ell, 1)?;
        for depth in 2..=p.depth_max {
            for _ in 0..p.samples_per_depth {
                let w = random::commutator_word(&mut rng, 2, depth);
                let e = magnus_embed(&w, 2, bound, ctx)?;
                for d in 1..depth {
                    for j in MonomialIndex::all(2, d) {
                        let c = e.magnus_coefficient(&j).value();
                        vanishing.record(c == 0, || json!({"ell": ell, "word": w.to_string(), "depth": depth, "J": j.to_string(), "coefficient": c}));
                    }
                }
            }
        }
    }

    let mut injective = Check::new("mu_j_injective_on_hall_span");
    for &ell in &p.ells {
        let ctx = ModulusContext::new(ell, 1)?;
        for n in 1..=p.nmax {
            let basis = LieBasis::new(2, n, ctx);
            let ok = basis.len() == witt_number(2, n) && basis.is_direct_summand();
            injective.record(ok, || json!({"ell": ell, "n": n, "basis_size": basis.len()}));
        }
    }

    let mut multiplicative = Check::new("magnus_embedding_multiplicative");
    for i in 0..p.pairs {
        let ell = p.ells[i % p.ells.len()];
        let ctx = ModulusContext::new(ell, 1)?;
        let r = rng.gen_range(1..=3);
        let (a, b) = (random::word(&mut rng, r, 8), random::word(&mut rng, r, 8));
        let lhs = magnus_embed(&a.concat(&b), r, 4, ctx)?;
        let rhs = magnus_embed(&a, r, 4, ctx)?.multiply(&magnus_embed(&b, r, 4, ctx)?)?;
        multiplicative.record(lhs == rhs, || json!({"ell": ell, "r": r, "a": a.to_string(), "b": b.to_string()}));
    }

    Ok(SuiteReport::new("magnus", config_json(p), vec![vanishing, injective, multiplicative]))
}

#[derive(Clone, Debug, Serialize)]
pub struct CochainParams {
    pub seed: u64,
    pub cases: usize,
    pub max_order: usize,
    pub max_rank: usize,
    pub ell: u64,
    pub k: u32,
}

pub fn cochain(p: &CochainParams) -> Result<SuiteReport> {
    let ctx = ModulusContext::new(p.ell, p.k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    // draw every case up front so the check order is independent of threads
    let mut cases = Vec::with_capacity(p.cases);
    for _ in 0..p.cases {
        let m = rng.gen_range(1..=p.max_order);
        let (ra, rb) = (rng.gen_range(1..=p.max_rank), rng.gen_range(1..=p.max_rank));
        let a = random::module(&mut rng, m, ctx, ra)?;
        let b = random::module(&mut rng, m, ctx, rb)?;
        let deg_p = rng.gen_range(0..=2);
        let deg_q = rng.gen_range(0..=2 - deg_p);
        let x = random::cochain(&mut rng, &a, deg_p)?;
        let y = random::cochain(&mut rng, &b, deg_q)?;
        cases.push((m, ra, rb, x, y));
    }
    let results = cases
        .par_iter()
        .map(|(_, _, _, x, y)| {
            let dd = x.coboundary().coboundary().is_zero();
            let lhs = x.cup(y)?.coboundary();
            let first = x.coboundary().cup(y)?;
            let second = x.cup(&y.coboundary())?;
            let rhs = if x.degree() % 2 == 0 { first.add(&second)? } else { first.sub(&second)? };
            Ok((dd, lhs == rhs))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut d_squared = Check::new("d_squared_zero");
    let mut leibniz = Check::new("leibniz");
    for ((m, ra, rb, x, y), (dd, lb)) in cases.iter().zip(results) {
        let info = || json!({"order": m, "ranks": [ra, rb], "degrees": [x.degree(), y.degree()]});
        d_squared.record(dd, info);
        leibniz.record(lb, info);
    }
    Ok(SuiteReport::new("cochain", config_json(p), vec![d_squared, leibniz]))
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivarianceParams {
    pub seed: u64,
    pub samples: usize,
    pub ell: u64,
    pub n: usize,
}

fn unit_of_order_dividing(rng: &mut ChaCha8Rng, ctx: ModulusContext, m: usize) -> u64 {
    let units: Vec<u64> = (1..ctx.modulus()).filter(|&u| ctx.is_unit(u) && ctx.pow(u, m as u64) == 1).collect();
    units[rng.gen_range(0..units.len())]
}

pub fn equivariance(p: &EquivarianceParams) -> Result<SuiteReport> {
    let ctx = ModulusContext::new(p.ell, 1)?;
    let n = p.n;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut character = Check::new("phi_j_character_equivariance");
    let mut monodromy = Check::new("phi_j_monodromy_equivariance");
    let mut axiom = Check::new("monodromy_action_axiom");
    let mut normal = Check::new("u_i0j0_normal_commutative");
    let mut commutes = Check::new("phi_j_gamma2_commutes_with_commutators");

    for _ in 0..p.samples {
        let m = rng.gen_range(2..=6);
        let group = Arc::new(FiniteGroup::cyclic(m)?);
        let u = unit_of_order_dividing(&mut rng, ctx, m);
        let chi = Character::from_generator_value(group, ctx, u)?;
        let g = rng.gen_range(0..m);
        let w = random::word(&mut rng, 2, 6);
        let we = magnus_embed(&w, 2, n, ctx)?;

        let action = FreeGroupAction::character(chi.clone(), 2, n)?;
        let j = MonomialIndex::new((0..n).map(|_| rng.gen_range(1..=2)).collect());
        let phi = PhiJ::new(j.clone(), 2, ctx)?;
        let lhs = phi.series(&action.act(g, &we)?)?;
        let rhs = phi.word(&w)?.act(g, &chi)?;
        character.record(lhs == rhs, || json!({"order": m, "chi": u, "g": g, "word": w.to_string(), "J": j.to_string()}));

        let mono = random::monodromy(&mut rng, &chi, n)?;
        let j2 = single_two_indices(n)[rng.gen_range(0..n)].clone();
        let phi2 = PhiJ::new(j2.clone(), 2, ctx)?;
        let lhs = phi2.series(&mono.action().act(g, &we)?)?;
        let rhs = phi2.series(&we)?.act(g, &chi)?;
        monodromy.record(lhs == rhs, || json!({"order": m, "chi": u, "g": g, "word": w.to_string(), "J": j2.to_string()}));

        let h = rng.gen_range(0..m);
        let gh = chi.group().mul(g, h);
        let lhs = mono.action().act(gh, &we)?;
        let rhs = mono.action().act(g, &mono.action().act(h, &we)?)?;
        axiom.record(lhs == rhs, || json!({"order": m, "chi": u, "g": g, "h": h, "word": w.to_string()}));

        let c = random::commutator_element(&mut rng, n, ctx)?;
        let a = phi2.generator(2)?;
        let b = phi2.series(&c)?;
        commutes.record(a.multiply(&b)? == b.multiply(a)?, || json!({"J": j2.to_string()}));

        let size = n + 1;
        let i0 = rng.gen_range(1..size);
        let j0 = rng.gen_range(i0 + 1..=size);
        let sample_in = |rng: &mut ChaCha8Rng| {
            let entries: Vec<((usize, usize), i64)> = (1..=i0)
                .flat_map(|i| (j0.max(i + 1)..=size).map(move |j| (i, j)))
                .map(|ij| (ij, rng.gen_range(0..p.ell as i64)))
                .collect();
            UnipotentMatrix::from_entries(n, ctx, entries)
        };
        let x = sample_in(&mut rng)?;
        let y = sample_in(&mut rng)?;
        let all: Vec<((usize, usize), i64)> =
            (1..=size).flat_map(|i| (i + 1..=size).map(move |j| (i, j))).map(|ij| (ij, rng.gen_range(0..p.ell as i64))).collect();
        let general = UnipotentMatrix::from_entries(n, ctx, all)?;
        let conj = general.multiply(&x)?.multiply(&general.invert())?;
        let ok = x.multiply(&y)? == y.multiply(&x)? && conj.in_u_i0j0(i0, j0);
        normal.record(ok, || json!({"i0": i0, "j0": j0}));
    }
    Ok(SuiteReport::new("equivariance", config_json(p), vec![character, monodromy, axiom, normal, commutes]))
}

#[derive(Clone, Debug, Serialize)]
pub struct PropParams {
    pub group: String,
    pub n: usize,
    pub ell: u64,
    pub k: u32,
    /// Generator value of χ on a cyclic group; every admissible χ when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<u64>,
    pub samples: usize,
    pub seed: u64,
}

/// Every character of `Z/m_1 × … × Z/m_s`, or the requested one.
fn characters(spec: &GroupSpec, group: &Arc<FiniteGroup>, ctx: ModulusContext, chi: Option<u64>) -> Result<Vec<Character>> {
    if let Some(u) = chi {
        return Ok(vec![build_character(&CharacterSpec::GeneratorValue { value: u }, spec, group.clone(), ctx)?]);
    }
    let orders = match spec {
        GroupSpec::Cyclic { order } => vec![*order],
        GroupSpec::Abelian { orders } => orders.clone(),
        GroupSpec::Table { .. } => return Ok(vec![Character::trivial(group.clone(), ctx)]),
    };
    let roots: Vec<Vec<u64>> = orders
        .iter()
        .map(|&m| (1..ctx.modulus()).filter(|&u| ctx.is_unit(u) && ctx.pow(u, m as u64) == 1).collect())
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0; orders.len()];
    loop {
        let values = idx.iter().zip(&roots).map(|(&i, r)| r[i]).collect();
        out.push(build_character(&CharacterSpec::FactorValues { values }, spec, group.clone(), ctx)?);
        let mut pos = orders.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < roots[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn all_cocycles(action: &Arc<FreeGroupAction>) -> Result<Vec<TwistedCocycle<FreeGroupAction>>> {
    let malcev = MalcevBasis::new(action.rank(), action.degree_bound(), action.context())?;
    let candidates: Vec<GroupElement> = malcev.enumerate().collect();
    TwistedCocycle::enumerate(action.clone(), &candidates)
}

fn setup(p: &PropParams) -> Result<(GroupSpec, Arc<FiniteGroup>, ModulusContext)> {
    let spec = parse_group(&p.group)?;
    let group = Arc::new(spec.build()?);
    let ctx = ModulusContext::new(p.ell, p.k)?;
    if p.n < 2 {
        return Err(nilmassey_core::Error::DimensionMismatch("n must be at least 2".into()));
    }
    Ok((spec, group, ctx))
}

/// For every cocycle `x` into `π/[π]_n`: `δ_n(x)` is a coboundary iff all
/// canonical Massey products vanish iff `x` lifts to `π/[π]_{n+1}`.
pub fn prop24(p: &PropParams) -> Result<SuiteReport> {
    let (spec, group, ctx) = setup(p)?;
    let mut massey_check = Check::new("delta_vanishes_iff_all_massey_vanish");
    let mut lift_check = Check::new("delta_vanishes_iff_lift_exists");
    let mut detail = Vec::new();
    for chi in characters(&spec, &group, ctx, p.chi)? {
        let up = Arc::new(FreeGroupAction::character(chi.clone(), 2, p.n)?);
        let low = Arc::new(up.truncate(p.n - 1));
        let cocycles = all_cocycles(&low)?;
        let js: Vec<MonomialIndex> = MonomialIndex::all(2, p.n).collect();
        let verdicts = cocycles
            .par_iter()
            .map(|x| {
                let d = delta_n(x, &up)?.cochain.is_coboundary()?.is_coboundary();
                let mut all_j = true;
                for j in &js {
                    all_j &= canonical_system(x, j)?.vanishes()?;
                }
                let lifts = search_lift(x, &up)?.is_some();
                Ok((d, all_j, lifts))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut obstructed = 0;
        for (x, &(d, all_j, lifts)) in cocycles.iter().zip(&verdicts) {
            let ce = || json!({"chi": chi.values(), "x": x.values().iter().map(|v| v.series().to_table()).collect::<Vec<_>>(), "delta_vanishes": d, "all_massey_vanish": all_j, "lifts": lifts});
            massey_check.record(d == all_j, ce);
            lift_check.record(d == lifts, ce);
            obstructed += usize::from(!d);
        }
        detail.push(json!({"chi": chi.values(), "cocycles": cocycles.len(), "obstructed": obstructed}));
    }
    massey_check.detail = Some(Value::Array(detail));
    Ok(SuiteReport::new("prop24", config_json(p), vec![massey_check, lift_check]))
}

/// For random monodromy actions: `δ_n(x)` a coboundary implies every
/// single-2 Massey product vanishes.
pub fn prop25(p: &PropParams) -> Result<SuiteReport> {
    let (spec, group, ctx) = setup(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut implication = Check::new("delta_vanishes_implies_single_two_massey_vanish");
    let mut lift_check = Check::new("delta_vanishes_iff_lift_exists");
    let mut detail = Vec::new();
    for chi in characters(&spec, &group, ctx, p.chi)? {
        let mut vanishing = 0;
        let mut total = 0;
        for sample in 0..p.samples {
            let action = random::monodromy(&mut rng, &chi, p.n)?;
            let cocycles = all_cocycles(&action.lower())?;
            let verdicts = cocycles
                .par_iter()
                .map(|x| {
                    let d = delta_n(x, action.action())?.cochain.is_coboundary()?.is_coboundary();
                    let lifts = search_lift(x, action.action())?.is_some();
                    let massey = if d { Some(section_obstructions(x, &action)?.verdict) } else { None };
                    Ok((d, lifts, massey))
                })
                .collect::<Result<Vec<_>>>()?;
            for (x, (d, lifts, massey)) in cocycles.iter().zip(verdicts) {
                let ce = || json!({"chi": chi.values(), "sample": sample, "f": action.f().iter().map(|v| v.series().to_table()).collect::<Vec<_>>(), "x": x.values().iter().map(|v| v.series().to_table()).collect::<Vec<_>>()});
                lift_check.record(d == lifts, ce);
                if d {
                    implication.record(massey == Some(Verdict::Unobstructed), ce);
                    vanishing += 1;
                }
                total += 1;
            }
        }
        detail.push(json!({"chi": chi.values(), "samples": p.samples, "cocycles": total, "delta_vanishing": vanishing}));
    }
    implication.detail = Some(Value::Array(detail));
    Ok(SuiteReport::new("prop25", config_json(p), vec![implication, lift_check]))
}
