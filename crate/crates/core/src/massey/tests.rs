use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::coeff::ModulusContext;
use crate::cohomology::{
    delta_n, extension_two_cocycle_pullback, search_lift, FiniteGroup, UnipotentExtension,
};
use crate::magnus::{GroupElement, MalcevBasis};

fn ctx(ell: u64) -> ModulusContext {
    ModulusContext::new(ell, 1).unwrap()
}

fn all_cocycles(action: &Arc<FreeGroupAction>) -> Vec<TwistedCocycle<FreeGroupAction>> {
    let malcev = MalcevBasis::new(action.rank(), action.degree_bound(), action.context()).unwrap();
    let candidates: Vec<GroupElement> = malcev.enumerate().collect();
    TwistedCocycle::enumerate(action.clone(), &candidates).unwrap()
}

fn elementary(ell: usize) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::abelian(&[ell, ell]).unwrap())
}

fn projection(chi: &Character, which: usize) -> Cochain {
    let m = Arc::new(GModule::character_power(chi, 1));
    Cochain::from_scalar_fn(m, 1, |t| if which == 0 { (t[0] / 3) as i64 } else { (t[0] % 3) as i64 }).unwrap()
}

fn system_from(chi: &Character, t12: Cochain, t23: Cochain) -> DefiningSystem {
    let entries = [((1, 2), t12), ((2, 3), t23)].into_iter().collect();
    DefiningSystem::new(2, chi.clone(), entries).unwrap()
}

#[test]
fn index_pairs_skip_the_corner() {
    assert_eq!(index_pairs(2).collect::<Vec<_>>(), vec![(1, 2), (2, 3)]);
    assert_eq!(index_pairs(3).collect::<Vec<_>>(), vec![(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]);
}

#[test]
fn zero_system() {
    let chi = Character::from_generator_value(Arc::new(FiniteGroup::cyclic(3).unwrap()), ctx(7), 2).unwrap();
    for n in 2..5 {
        let t = DefiningSystem::zero(n, chi.clone()).unwrap();
        assert_eq!(t.validate(), Ok(()));
        assert!(t.massey_value().unwrap().is_zero());
        assert!(t.vanishes().unwrap());
    }
}

#[test]
fn shape_is_checked() {
    let chi = Character::trivial(Arc::new(FiniteGroup::cyclic(3).unwrap()), ctx(7));
    let t = DefiningSystem::zero(3, chi.clone()).unwrap();
    let mut entries = t.entries().clone();
    entries.remove(&(1, 3));
    assert!(DefiningSystem::new(3, chi.clone(), entries).is_err());
    let wrong = Cochain::zero(Arc::new(GModule::character_power(&chi, 1)), 2);
    assert!(t.with_entry(1, 2, wrong).is_err());
}

#[test]
fn order_two_value_is_the_cup_product() {
    let chi = Character::trivial(elementary(3), ctx(3));
    let (a, b) = (projection(&chi, 0), projection(&chi, 1));
    let t = system_from(&chi, a.clone(), b.clone());
    let value = t.massey_value().unwrap();
    assert_eq!(value.raw(), a.cup(&b).unwrap().raw());
    assert!(!t.vanishes().unwrap());
    // x ∪ x vanishes for odd ℓ
    let square = system_from(&chi, a.clone(), a);
    assert!(square.vanishes().unwrap());
}

#[test]
fn self_cup_on_cyclic_group_vanishes() {
    for ell in [3u64, 5, 7] {
        let g = Arc::new(FiniteGroup::cyclic(ell as usize).unwrap());
        let chi = Character::trivial(g, ctx(ell));
        let id = Cochain::from_scalar_fn(Arc::new(GModule::character_power(&chi, 1)), 1, |t| t[0] as i64).unwrap();
        let t = system_from(&chi, id.clone(), id);
        assert!(t.vanishes().unwrap());
        let check = t.vanishing_check().unwrap();
        assert_eq!(check.witness().unwrap().coboundary(), t.massey_value().unwrap());
    }
}

#[test]
fn perturbation_reports_the_identity() {
    let c = ctx(5);
    let g = Arc::new(FiniteGroup::cyclic(5).unwrap());
    let chi = Character::trivial(g, c);
    let t = DefiningSystem::zero(3, chi.clone()).unwrap();
    let bump = Cochain::from_scalar_fn(Arc::new(GModule::character_power(&chi, 1)), 1, |t| (t[0] * t[0]) as i64).unwrap();
    let bad = t.clone().with_entry(2, 3, bump).unwrap();
    assert_eq!(bad.validate(), Err(FailedIdentity { i: 2, j: 3 }));
    assert!(matches!(bad.massey_value(), Err(Error::InvalidDefiningSystem(_))));

    let bump2 = Cochain::from_scalar_fn(Arc::new(GModule::character_power(&chi, 2)), 1, |t| (t[0] * t[0]) as i64).unwrap();
    let bad = t.with_entry(1, 3, bump2).unwrap();
    assert_eq!(bad.validate(), Err(FailedIdentity { i: 1, j: 3 }));
}

#[test]
fn canonical_system_of_trivial_cocycle_is_zero() {
    let chi = Character::from_generator_value(Arc::new(FiniteGroup::cyclic(3).unwrap()), ctx(7), 2).unwrap();
    let action = Arc::new(FreeGroupAction::character(chi, 2, 2).unwrap());
    let x = TwistedCocycle::trivial(action);
    for j in MonomialIndex::all(2, 3) {
        let t = canonical_system(&x, &j).unwrap();
        assert!(t.entries().values().all(Cochain::is_zero));
    }
}

#[test]
fn canonical_systems_validate_and_represent_components() {
    let chi = Character::trivial(elementary(3), ctx(3));
    let action = Arc::new(FreeGroupAction::character(chi.clone(), 2, 1).unwrap());
    for x in all_cocycles(&action) {
        let comps = abelian_components(&x).unwrap();
        for j in MonomialIndex::all(2, 2) {
            let t = canonical_system(&x, &j).unwrap();
            assert_eq!(t.validate(), Ok(()));
            for i in 1..=2 {
                let neg = comps[j.letters()[i - 1] - 1].neg();
                assert_eq!(t.entry(i, i + 1).unwrap(), &neg);
                assert!(t.represents(i, &neg).unwrap());
            }
            // (-x_1) ∪ (-x_2) = x_1 ∪ x_2
            let a = &comps[j.letters()[0] - 1];
            let b = &comps[j.letters()[1] - 1];
            assert_eq!(t.massey_value().unwrap().raw(), a.cup(b).unwrap().raw());
        }
    }
}

#[test]
fn canonical_cup_on_cyclic_group_matches_cup_oracle() {
    let g = Arc::new(FiniteGroup::cyclic(3).unwrap());
    let chi = Character::trivial(g, ctx(7));
    let action = Arc::new(FreeGroupAction::character(chi, 2, 1).unwrap());
    let x = all_cocycles(&action);
    assert_eq!(x.len(), 1);
    let comps = abelian_components(&x[0]).unwrap();
    let t = canonical_system(&x[0], &MonomialIndex::new(vec![1, 2])).unwrap();
    assert_eq!(t.massey_value().unwrap().raw(), comps[0].cup(&comps[1]).unwrap().raw());
}

#[test]
fn massey_values_are_cocycles() {
    let c = ctx(5);
    let g = Arc::new(FiniteGroup::cyclic(5).unwrap());
    let chi = Character::trivial(g, c);
    let action = Arc::new(FreeGroupAction::character(chi, 2, 2).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cocycles = all_cocycles(&action);
    for _ in 0..30 {
        let x = &cocycles[rng.gen_range(0..cocycles.len())];
        let letters: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=2)).collect();
        let t = canonical_system(x, &MonomialIndex::new(letters)).unwrap();
        assert!(t.massey_value().unwrap().is_cocycle());
    }
}

fn check_iff(action_up: Arc<FreeGroupAction>) -> (usize, usize) {
    let n = action_up.degree_bound();
    let low = Arc::new(action_up.truncate(n - 1));
    let js: Vec<MonomialIndex> = MonomialIndex::all(action_up.rank(), n).collect();
    let mut obstructed = 0;
    let cocycles = all_cocycles(&low);
    for x in &cocycles {
        let d = delta_n(x, &action_up).unwrap();
        let delta_vanishes = d.cochain.is_coboundary().unwrap().is_coboundary();
        let all_j = js.iter().all(|j| canonical_system(x, j).unwrap().vanishes().unwrap());
        let lifts = search_lift(x, &action_up).unwrap().is_some();
        assert_eq!(delta_vanishes, all_j, "{x:?}");
        assert_eq!(delta_vanishes, lifts, "{x:?}");
        obstructed += usize::from(!delta_vanishes);
    }
    (cocycles.len(), obstructed)
}

#[test]
fn obstruction_iff_massey_products_vanish() {
    let chi = Character::trivial(elementary(3), ctx(3));
    let (total, obstructed) = check_iff(Arc::new(FreeGroupAction::character(chi, 2, 2).unwrap()));
    assert_eq!(total, 81);
    assert!(obstructed > 0);

    for (m, n, u) in [(3usize, 2usize, 1u64), (3, 2, 2), (3, 3, 4), (5, 2, 1)] {
        let chi = Character::from_generator_value(Arc::new(FiniteGroup::cyclic(m).unwrap()), ctx(7), u).unwrap();
        let (_, obstructed) = check_iff(Arc::new(FreeGroupAction::character(chi, 2, n).unwrap()));
        // H^2 vanishes when |G| is prime to ℓ
        assert_eq!(obstructed, 0);
    }
}

#[test]
fn push_forward_differs_from_massey_value_by_corner_coboundary() {
    let chi = Character::trivial(elementary(3), ctx(3));
    let up = Arc::new(FreeGroupAction::character(chi.clone(), 2, 2).unwrap());
    let low = Arc::new(up.truncate(1));
    for x in all_cocycles(&low).iter().step_by(5) {
        let d = delta_n(x, &up).unwrap();
        for j in MonomialIndex::all(2, 2) {
            let phi = PhiJ::new(j.clone(), 2, chi.context()).unwrap();
            let module = Arc::new(GModule::character_power(&chi, 2));
            let e = Cochain::from_values(module, 1, d.lift.iter().map(|l| phi.series(l).unwrap().corner().value()).collect()).unwrap();
            let massey = canonical_system(x, &j).unwrap().massey_value().unwrap();
            let pushed = d.push_forward(&j, &chi).unwrap();
            assert_eq!(pushed, massey.add(&e.coboundary()).unwrap(), "J = {j}");
        }
    }
}

#[test]
fn extension_cocycle_of_unipotent_group_is_massey_value() {
    let c = ctx(5);
    let chi = Character::from_generator_value(Arc::new(FiniteGroup::cyclic(4).unwrap()), c, 2).unwrap();
    let action = Arc::new(FreeGroupAction::character(chi.clone(), 2, 2).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let gens: Vec<GroupElement> = (1..=2).map(|i| GroupElement::generator(2, 2, c, i).unwrap()).collect();
    for _ in 0..10 {
        let mut gamma = GroupElement::identity(2, 2, c);
        for _ in 0..4 {
            gamma = gamma.mul_unchecked(&gens[rng.gen_range(0..2)].pow_int(rng.gen_range(-3..4)));
        }
        let x = TwistedCocycle::trivial(action.clone()).conjugate(&gamma).unwrap();
        for n in 2..=3 {
            for j in MonomialIndex::all(2, n) {
                let ext = UnipotentExtension::new(n, chi.clone());
                let rho: Vec<_> = reduced_matrix_cocycle(&x, &j).unwrap().into_iter().enumerate().map(|(g, m)| (m, g)).collect();
                let module = Arc::new(ext.kernel_module());
                let z = extension_two_cocycle_pullback(&ext, &rho, UnipotentExtension::corner_free_section, module).unwrap();
                let massey = canonical_system(&x, &j).unwrap().massey_value().unwrap();
                assert_eq!(z, massey);
            }
        }
    }
}

#[test]
fn mu_j_row_is_the_magnus_coefficient_on_basic_commutators() {
    let c = ctx(7);
    let chi = Character::trivial(Arc::new(FiniteGroup::cyclic(2).unwrap()), c);
    for n in 2..=4 {
        let up = FreeGroupAction::character(chi.clone(), 2, n).unwrap();
        let x = TwistedCocycle::trivial(Arc::new(up.truncate(n - 1)));
        let d = delta_n(&x, &up).unwrap();
        for j in MonomialIndex::all(2, n) {
            let row = d.mu_j_row(&j).unwrap();
            for (b, &expected) in d.basis.elements().iter().zip(&row) {
                let e = b.to_group_element(2, n, c).unwrap();
                assert_eq!(e.magnus_coefficient(&j).value(), expected, "{b} at J = {j}");
                assert_eq!(phi_corner(&e, &j), expected);
            }
        }
    }
}

fn phi_corner(e: &GroupElement, j: &MonomialIndex) -> u64 {
    crate::unipotent::phi_j_series(e, j).unwrap().corner().value()
}

#[test]
fn single_two_detection() {
    assert!(is_single_two(&"121".parse().unwrap()));
    assert!(!is_single_two(&"111".parse().unwrap()));
    assert!(!is_single_two(&"122".parse().unwrap()));
    assert!(!is_single_two(&"13".parse().unwrap()));
}
