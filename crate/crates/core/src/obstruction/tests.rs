use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::coeff::ModulusContext;
use crate::cohomology::{delta_n, search_lift, ActedGroup};
use crate::magnus::MalcevBasis;
use crate::massey::is_single_two;

fn ctx(ell: u64) -> ModulusContext {
    ModulusContext::new(ell, 1).unwrap()
}

fn e(s: &str) -> Expr {
    s.parse().unwrap()
}

fn all_cocycles(action: &Arc<FreeGroupAction>) -> Vec<TwistedCocycle<FreeGroupAction>> {
    let malcev = MalcevBasis::new(action.rank(), action.degree_bound(), action.context()).unwrap();
    let candidates: Vec<GroupElement> = malcev.enumerate().collect();
    TwistedCocycle::enumerate(action.clone(), &candidates).unwrap()
}

fn random_commutator_element(rng: &mut ChaCha8Rng, n: usize, c: ModulusContext) -> GroupElement {
    let g1 = GroupElement::generator(2, n, c, 1).unwrap();
    let g2 = GroupElement::generator(2, n, c, 2).unwrap();
    let mut u = GroupElement::identity(2, n, c);
    for _ in 0..3 {
        let a = g1.pow_int(rng.gen_range(-3..4)).mul_unchecked(&g2.pow_int(rng.gen_range(-3..4)));
        let b = g2.pow_int(rng.gen_range(-3..4)).mul_unchecked(&g1.pow_int(rng.gen_range(-3..4)));
        u = u.mul_unchecked(&a.commutator(&b).unwrap());
    }
    u
}

fn random_noise(rng: &mut ChaCha8Rng, chi: &Character, n: usize) -> Vec<GroupElement> {
    let malcev = MalcevBasis::new(2, n, chi.context()).unwrap();
    let top = malcev.level(n).len();
    let m = chi.context().modulus();
    chi.group()
        .elements()
        .map(|g| {
            if g == chi.group().identity() {
                GroupElement::identity(2, n, chi.context())
            } else {
                let coords: Vec<u64> = (0..top).map(|_| rng.gen_range(0..m)).collect();
                malcev.central_element(&coords).unwrap()
            }
        })
        .collect()
}

fn random_monodromy(rng: &mut ChaCha8Rng, chi: &Character, n: usize) -> MonodromyAction {
    let u = random_commutator_element(rng, n, chi.context());
    let noise = random_noise(rng, chi, n);
    MonodromyAction::conjugated(chi.clone(), &u, &noise, n).unwrap()
}

#[test]
fn single_two_enumeration() {
    let two: Vec<String> = single_two_indices(2).iter().map(|j| j.to_string()).collect();
    assert_eq!(two, ["21", "12"]);
    let three: Vec<String> = single_two_indices(3).iter().map(|j| j.to_string()).collect();
    assert_eq!(three, ["211", "121", "112"]);
    for n in 2..7 {
        let js = single_two_indices(n);
        assert_eq!(js.len(), n);
        assert!(js.iter().all(is_single_two));
    }
}

#[test]
fn untwisted_action_is_the_character_action() {
    let chi = Character::from_generator_value(Arc::new(FiniteGroup::cyclic(3).unwrap()), ctx(7), 2).unwrap();
    let a = MonodromyAction::untwisted(chi.clone(), 3).unwrap();
    let b = FreeGroupAction::character(chi, 2, 3).unwrap();
    for g in 0..3 {
        assert_eq!(a.action().images(g), b.images(g));
    }
}

#[test]
fn conjugated_actions_have_monodromy_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let chi = Character::from_generator_value(Arc::new(FiniteGroup::cyclic(4).unwrap()), ctx(5), 2).unwrap();
    for _ in 0..5 {
        let a = random_monodromy(&mut rng, &chi, 3);
        let f = a.f();
        assert!(f.iter().skip(1).any(|x| !x.is_identity()));
        for (g, fg) in f.iter().enumerate() {
            assert!(fg.series().homogeneous(1).iter().all(|&c| c == 0));
            let g2 = GroupElement::generator(2, 3, chi.context(), 2).unwrap();
            let expected = fg.invert().mul_unchecked(&g2.power(chi.residue(g)).unwrap()).mul_unchecked(fg);
            assert_eq!(a.action().act(g, &g2).unwrap(), expected);
        }
    }
}

#[test]
fn bad_monodromy_data_is_rejected() {
    let c = ctx(5);
    let chi = Character::trivial(Arc::new(FiniteGroup::cyclic(2).unwrap()), c);
    let g1 = GroupElement::generator(2, 2, c, 1).unwrap();
    let id = GroupElement::identity(2, 2, c);
    assert!(MonodromyAction::new(chi.clone(), vec![id.clone(), g1.clone()], 2).is_err());
    assert!(MonodromyAction::new(chi.clone(), vec![g1.commutator(&id).unwrap(), id.clone()], 2).is_ok());
    assert!(MonodromyAction::conjugated(chi, &g1, &[id.clone(), id], 2).is_err());
}

#[test]
fn canonical_systems_validate_under_monodromy() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let c = ctx(5);
    let chi = Character::from_generator_value(Arc::new(FiniteGroup::cyclic(4).unwrap()), c, 2).unwrap();
    let j: MonomialIndex = "121".parse().unwrap();
    for _ in 0..5 {
        let a = random_monodromy(&mut rng, &chi, 3);
        let lower = a.lower();
        for x in all_cocycles(&lower).iter().take(40) {
            let t = crate::massey::canonical_system(x, &j).unwrap();
            assert_eq!(t.validate(), Ok(()));
        }
        let x = TwistedCocycle::trivial(lower);
        assert!(matches!(
            crate::massey::canonical_system(&x, &"122".parse().unwrap()),
            Err(Error::UnsupportedJ(_))
        ));
    }
}

fn check_implication(a: &MonodromyAction) -> usize {
    let lower = a.lower();
    let mut vanishing = 0;
    for x in all_cocycles(&lower) {
        let d = delta_n(&x, a.action()).unwrap();
        let delta_vanishes = d.cochain.is_coboundary().unwrap().is_coboundary();
        assert_eq!(delta_vanishes, search_lift(&x, a.action()).unwrap().is_some());
        if delta_vanishes {
            vanishing += 1;
            let report = section_obstructions(&x, a).unwrap();
            assert_eq!(report.verdict, Verdict::Unobstructed, "{x:?}");
        }
    }
    vanishing
}

#[test]
fn vanishing_obstruction_implies_vanishing_single_two_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let chi = Character::trivial(Arc::new(FiniteGroup::abelian(&[3, 3]).unwrap()), ctx(3));
    for _ in 0..3 {
        assert!(check_implication(&random_monodromy(&mut rng, &chi, 2)) > 0);
    }
    for (m, u, n) in [(3usize, 2u64, 2usize), (3, 4, 3), (5, 1, 2)] {
        let chi = Character::from_generator_value(Arc::new(FiniteGroup::cyclic(m).unwrap()), ctx(7), u).unwrap();
        for _ in 0..2 {
            assert!(check_implication(&random_monodromy(&mut rng, &chi, n)) > 0);
        }
    }
}

#[test]
fn pipeline_examples() {
    let c = ctx(3);
    let chi = Character::trivial(Arc::new(FiniteGroup::abelian(&[3, 3]).unwrap()), c);
    let a = MonodromyAction::untwisted(chi.clone(), 2).unwrap();
    let trivial = TwistedCocycle::trivial(a.lower());
    let report = section_obstructions(&trivial, &a).unwrap();
    assert_eq!(report.verdict, Verdict::Unobstructed);
    assert_eq!(report.entries.len(), 2);

    // x1, x2 the two projections: x1 ∪ x2 is not a coboundary
    let module = Arc::new(GModule::character_power(&chi, 1));
    let x1 = Cochain::from_scalar_fn(module.clone(), 1, |t| (t[0] / 3) as i64).unwrap();
    let x2 = Cochain::from_scalar_fn(module, 1, |t| (t[0] % 3) as i64).unwrap();
    let pair = AbelianizedClassPair::new(&chi, x1, x2).unwrap();
    let x = pair.to_cocycle(a.lower()).unwrap();
    assert_eq!(AbelianizedClassPair::of(&x).unwrap(), pair);
    let report = section_obstructions(&x, &a).unwrap();
    assert_eq!(report.verdict, Verdict::Obstructed);
    assert!(report.entries.iter().all(|e| e.vanishes == Some(false)));

    let wrong = TwistedCocycle::trivial(Arc::new(a.action().truncate(2)));
    assert!(section_obstructions(&wrong, &a).is_err());
}

#[test]
fn restricted_cocycles_pass() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let chi = Character::from_generator_value(Arc::new(FiniteGroup::cyclic(3).unwrap()), ctx(7), 2).unwrap();
    let up_action = random_monodromy(&mut rng, &chi, 3);
    let a = MonodromyAction::new(chi.clone(), up_action.f().iter().map(|f| f.truncate(2)).collect(), 2).unwrap();
    for x in all_cocycles(up_action.action()).iter().take(50) {
        let down = TwistedCocycle::new(a.lower(), x.values().iter().map(|v| v.truncate(1)).collect()).unwrap();
        assert_eq!(section_obstructions(&down, &a).unwrap().verdict, Verdict::Unobstructed);
    }
}

#[test]
fn expression_syntax() {
    for s in ["x", "-1", "2", "1/2", "v2/(a1-a2)", "-(a1-a2)/v1", "(1-x)", "1-x", "-2*(a1-a2)/(a2-a3)", "x^2/(y*z)", "-1/v"] {
        let parsed = e(s);
        assert_eq!(e(&parsed.to_string()), parsed, "{s}");
    }
    assert_eq!(e("(a2-a1)"), e("-(a1-a2)"));
    assert_eq!(e("(a2-a1)").to_string(), "a2-a1");
    assert_eq!(e("a2-a1"), e("(a2-a1)"));
    assert_eq!(e("-(a1-a2)/v1").to_string(), "(a2-a1)/v1");
    assert_eq!(e("-2*(a1-a2)*(a1-a3)").to_string(), "2*(a2-a1)*(a1-a3)");
    assert_eq!(e("-(a1-a2)^2").to_string(), "-(a1-a2)^2");
    assert_eq!(e("(x-0)"), e("x"));
    assert_eq!(e("(3-5)"), e("-2"));
    assert_eq!(e("(1-x)^-1"), e("1/(1-x)"));
    assert_eq!(e("x/x"), Expr::one());
    assert!("0".parse::<Expr>().is_err());
    assert!("(x-x)".parse::<Expr>().is_err());
    assert!("x+y".parse::<Expr>().is_err());
}

#[test]
fn kappa_cases() {
    let k = |p: BasePoint| kappa_ab(&p).unwrap();
    assert_eq!(k(BasePoint::Rational { x: e("2") }), SymbolPair::new(e("2"), e("-1")));
    assert_eq!(k(BasePoint::Rational { x: e("x") }), SymbolPair::new(e("x"), e("(1-x)")));
    assert_eq!(k(BasePoint::TangentialAtOne { v: e("v") }), SymbolPair::new(Expr::one(), e("-v")));
    assert_eq!(k(BasePoint::TangentialAtZero { v: e("v") }), SymbolPair::new(e("v"), Expr::one()));
    assert_eq!(k(BasePoint::IotaTangentialAtZero { v: e("v") }), SymbolPair::new(e("1/v"), e("-1/v")));
    assert_eq!(k(BasePoint::Rational { x: e("x") }).to_string(), "(x, 1-x)");
    assert!(matches!(kappa_ab(&BasePoint::Rational { x: e("1") }), Err(Error::BadPoint(_))));
}

#[test]
fn f_ab_cases() {
    let a: Vec<String> = ["a1", "a2", "a3"].iter().map(|s| s.to_string()).collect();
    let v = vec![e("v1"), e("v2"), e("v3")];
    assert_eq!(f_ab_coefficients(&a, &v, 2, 2).unwrap(), e("v2/(a1-a2)"));
    assert_eq!(f_ab_coefficients(&a, &v, 2, 1).unwrap(), e("(a2-a1)/v1"));
    assert_eq!(f_ab_coefficients(&a, &v, 2, 3).unwrap(), e("(a2-a3)/(a1-a3)"));
    assert_eq!(f_ab_coefficients(&a, &v, 3, 2).unwrap(), e("(a3-a2)/(a1-a2)"));
    assert!(matches!(f_ab_coefficients(&a, &v, 1, 2), Err(Error::DegenerateConfiguration(_))));
    let dup: Vec<String> = ["a1", "a2", "a1"].iter().map(|s| s.to_string()).collect();
    assert!(matches!(f_ab_coefficients(&dup, &v, 2, 2), Err(Error::DegenerateConfiguration(_))));

    // v_1 = a_i - a_1 = -v_i
    let v = vec![e("(a2-a1)"), e("(a1-a2)"), e("v3")];
    assert!(f_ab_coefficients(&a, &v, 2, 2).unwrap().is_one());
    assert!(f_ab_coefficients(&a, &v, 2, 1).unwrap().is_one());
}

#[test]
fn corollary_targets_negate_to_kummer_pairs() {
    let x = e("x");
    let r = vanishing_corollary_targets(TargetKind::Rational, &x).unwrap();
    assert_eq!(r.pair, SymbolPair::new(e("x^-1"), e("(1-x)^-1")));
    assert_eq!(r.pair.negate(), kappa_ab(&r.source).unwrap());
    assert_eq!(r.pair.negate(), SymbolPair::new(e("x"), e("(1-x)")));
    let t = vanishing_corollary_targets(TargetKind::TangentialIota, &x).unwrap();
    assert_eq!(t.pair, SymbolPair::new(e("x"), e("-x")));
    assert_eq!(t.pair.negate(), kappa_ab(&t.source).unwrap());
    assert_eq!(t.pair.negate(), SymbolPair::new(e("x^-1"), e("(-x)^-1")));
    assert!(vanishing_corollary_targets(TargetKind::Rational, &e("1")).is_err());
}

#[test]
fn concretization() {
    let c = ctx(7);
    let chi = Character::from_generator_value(Arc::new(FiniteGroup::cyclic(3).unwrap()), c, 2).unwrap();
    let residues: BTreeMap<String, u64> =
        [("x".to_string(), 3), ("(1-x)".to_string(), 5), ("-1".to_string(), 0), ("2".to_string(), 1)].into_iter().collect();
    let pair = kappa_ab(&BasePoint::Rational { x: e("x") }).unwrap();
    let x1 = concretize(&pair.first, &residues, &chi).unwrap();
    let x2 = concretize(&pair.second, &residues, &chi).unwrap();
    assert_eq!(x1.scalar(&[1]), 3);
    assert_eq!(x1.scalar(&[2]), (3 + 2 * 3) % 7);
    assert!(x1.is_cocycle() && x2.is_cocycle());
    // inverse symbols give negated classes
    let inv = concretize(&pair.first.inv(), &residues, &chi).unwrap();
    assert!(inv.add(&x1).unwrap().is_zero());
    assert_eq!(concretize(&e("4*x"), &residues, &chi).unwrap().scalar(&[1]), 5);
    assert!(concretize(&e("y"), &residues, &chi).is_err());
    AbelianizedClassPair::new(&chi, x1, x2).unwrap();

    let trivial = Character::trivial(Arc::new(FiniteGroup::cyclic(5).unwrap()), c);
    assert!(kummer_cocycle(&trivial, 0).unwrap().is_zero());
    assert!(matches!(kummer_cocycle(&trivial, 1), Err(Error::NotTwistedCocycle(_))));
}
