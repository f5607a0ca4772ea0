use super::*;
use crate::magnus::{hall_basis, magnus_embed};
use proptest::prelude::*;

fn ctx(ell: u64, k: u32) -> ModulusContext {
    ModulusContext::new(ell, k).unwrap()
}

fn mono(s: &str) -> MonomialIndex {
    s.parse().unwrap()
}

/// Plain matrix product of dense square arrays, independent of `UnipotentMatrix`.
fn naive_mul(a: &[Vec<i64>], b: &[Vec<i64>], m: i64) -> Vec<Vec<i64>> {
    let s = a.len();
    (0..s)
        .map(|i| (0..s).map(|j| (0..s).map(|k| a[i][k] * b[k][j]).sum::<i64>().rem_euclid(m)).collect())
        .collect()
}

fn dense(m: &UnipotentMatrix) -> Vec<Vec<i64>> {
    let s = m.size();
    (1..=s).map(|i| (1..=s).map(|j| m.raw(i, j) as i64).collect()).collect()
}

#[test]
fn act_examples() {
    let c = ctx(5, 1);
    let z2 = Arc::new(FiniteGroup::cyclic(4).unwrap());
    let chi = Character::from_generator_value(z2.clone(), c, 2).unwrap();
    let m = UnipotentMatrix::from_entries(2, c, [((1, 2), 1), ((2, 3), 1), ((1, 3), 3)]).unwrap();
    let g = m.act(1, &chi).unwrap();
    assert_eq!((g.a(1, 2).value(), g.a(2, 3).value(), g.a(1, 3).value()), (2, 2, 2));
    assert_eq!(m.act(0, &chi).unwrap(), m);
    let trivial = Character::trivial(z2, c);
    assert_eq!(m.act(3, &trivial).unwrap(), m);
}

#[test]
fn character_validation() {
    let c = ctx(7, 1);
    let z3 = Arc::new(FiniteGroup::cyclic(3).unwrap());
    assert!(Character::from_generator_value(z3.clone(), c, 2).is_ok());
    assert!(Character::from_generator_value(z3.clone(), c, 3).is_err());
    assert!(Character::new(z3, c, vec![1, 0, 1]).is_err());
}

#[test]
fn build_a_examples() {
    let c = ctx(5, 1);
    let a2 = build_a(2, c).unwrap();
    assert_eq!((a2.a(1, 2).value(), a2.a(2, 3).value(), a2.a(1, 3).value()), (1, 1, 3));
    let a1 = build_a(1, c).unwrap();
    assert_eq!(a1.entries().count(), 1);
    assert_eq!(a1.a(1, 2).value(), 1);
    let sq = a2.pow_int(2);
    assert_eq!((sq.a(1, 2).value(), sq.a(2, 3).value(), sq.a(1, 3).value()), (2, 2, 2));
    assert_eq!(dense(&sq), naive_mul(&dense(&a2), &dense(&a2), 5));
    assert!(matches!(build_a(5, c), Err(Error::PrecisionViolation(_))));
}

#[test]
fn a_l_lemma_small_range() {
    for (ell, k) in [(5, 1), (7, 2), (11, 1)] {
        let c = ctx(ell, k);
        for l in 1..(ell as usize).min(7) {
            let a = build_a(l, c).unwrap();
            let mut power = UnipotentMatrix::identity(l, c);
            for n in 1..=12u64 {
                power = power.mul_unchecked(&a);
                for i in 1..=l {
                    for j in 1..=l + 1 - i {
                        let expected = c.mul(c.pow(n % c.modulus(), j as u64), a.raw(i, i + j));
                        assert_eq!(power.raw(i, i + j), expected, "l={l} N={n} ({i},{})", i + j);
                    }
                }
            }
        }
    }
}

#[test]
fn phi_j_examples() {
    let c = ctx(5, 1);
    let phi = PhiJ::new(mono("12"), 2, c).unwrap();
    let x = phi.generator(1).unwrap();
    assert_eq!((x.a(1, 2).value(), x.a(2, 3).value(), x.a(1, 3).value()), (1, 0, 0));
    let y = phi.generator(2).unwrap();
    assert_eq!((y.a(1, 2).value(), y.a(2, 3).value(), y.a(1, 3).value()), (0, 1, 0));

    let phi = PhiJ::new(mono("11"), 2, c).unwrap();
    assert_eq!(phi.generator(1).unwrap(), &build_a(2, c).unwrap());

    let w: FreeWord = "1 -1".parse().unwrap();
    assert!(phi.word(&w).unwrap().is_identity());
    assert!(matches!(PhiJ::new(mono("13"), 2, c), Err(Error::BadGenerator { .. })));
}

#[test]
fn in_u_examples() {
    let c = ctx(5, 1);
    let id = UnipotentMatrix::identity(2, c);
    assert!(id.in_u_i0j0(1, 3) && id.in_u_i0j0(1, 2) && id.in_u_i0j0(2, 3));
    let corner = UnipotentMatrix::from_entries(2, c, [((1, 3), 4)]).unwrap();
    assert!(corner.in_u_i0j0(1, 3));
    let step = UnipotentMatrix::from_entries(2, c, [((1, 2), 1)]).unwrap();
    assert!(!step.in_u_i0j0(1, 3));
}

#[test]
fn class_n_nilpotent() {
    let c = ctx(7, 1);
    let x = UnipotentMatrix::from_entries(3, c, [((1, 2), 1), ((2, 3), 2), ((3, 4), 3), ((1, 3), 5)]).unwrap();
    let y = UnipotentMatrix::from_entries(3, c, [((1, 2), 4), ((2, 3), 1), ((3, 4), 6), ((2, 4), 1)]).unwrap();
    let c2 = x.commutator(&y).unwrap();
    let c3 = c2.commutator(&x).unwrap();
    assert!(!c3.is_identity());
    assert!(c3.commutator(&y).unwrap().is_identity());
}

#[test]
fn dwyer_top_entry_on_commutators() {
    let c = ctx(7, 1);
    for n in 2..=4 {
        for t in hall_basis(2, n, c).elements() {
            let w = t.to_word();
            let e = magnus_embed(&w, 2, n, c).unwrap();
            for j in MonomialIndex::all(2, n) {
                let m = phi_j_word(&w, &j, 2, c).unwrap();
                assert_eq!(m.corner(), e.magnus_coefficient(&j), "{t} J={j}");
            }
        }
    }
}

fn arb_matrix(n: usize, c: ModulusContext) -> impl Strategy<Value = UnipotentMatrix> {
    let len = n * (n + 1) / 2;
    prop::collection::vec(0..c.modulus() as i64, len).prop_map(move |vals| {
        let s = n + 1;
        let pairs = (1..=s).flat_map(|i| (i + 1..=s).map(move |j| (i, j)));
        UnipotentMatrix::from_entries(n, c, pairs.zip(vals)).unwrap()
    })
}

fn project(m: &UnipotentMatrix, i0: usize, j0: usize) -> UnipotentMatrix {
    let mut p = m.clone();
    for ((i, j), _) in m.entries() {
        if !(i <= i0 && j >= j0) {
            p.set_raw(i, j, 0);
        }
    }
    p
}

fn arb_word(r: usize) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((1..=r, -3i64..=3), 0..8).prop_map(|letters| {
        let mut w = FreeWord::empty();
        for (g, e) in letters {
            w.push(g, Exponent::Int(e));
        }
        w
    })
}

proptest! {
    #[test]
    fn group_laws(a in arb_matrix(3, ctx(5, 2)), b in arb_matrix(3, ctx(5, 2))) {
        prop_assert_eq!(dense(&a.multiply(&b).unwrap()), naive_mul(&dense(&a), &dense(&b), 25));
        prop_assert!(a.multiply(&a.invert()).unwrap().is_identity());
        prop_assert!(a.invert().multiply(&a).unwrap().is_identity());
    }

    #[test]
    fn residue_power_matches_integer(a in arb_matrix(3, ctx(7, 1)), e in -30i64..30) {
        let c = ctx(7, 1);
        prop_assert_eq!(a.power(c.residue(e)).unwrap(), a.pow_int(e));
    }

    #[test]
    fn action_axiom(m in arb_matrix(3, ctx(7, 1)), g in 0usize..3, h in 0usize..3) {
        let c = ctx(7, 1);
        let z3 = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let chi = Character::from_generator_value(z3.clone(), c, 2).unwrap();
        let lhs = m.act(h, &chi).unwrap().act(g, &chi).unwrap();
        prop_assert_eq!(lhs, m.act(z3.mul(g, h), &chi).unwrap());
    }

    #[test]
    fn u_i0j0_normal_and_commutative(
        z in arb_matrix(4, ctx(5, 1)),
        a in arb_matrix(4, ctx(5, 1)),
        b in arb_matrix(4, ctx(5, 1)),
        i0 in 1usize..5,
        d in 0usize..4,
    ) {
        let j0 = (i0 + d).min(5);
        let m1 = project(&a, i0, j0);
        let m2 = project(&b, i0, j0);
        prop_assert!(m1.in_u_i0j0(i0, j0));
        let conj = z.multiply(&m1).unwrap().multiply(&z.invert()).unwrap();
        prop_assert!(conj.in_u_i0j0(i0, j0));
        prop_assert!(m1.multiply(&m2).unwrap().in_u_i0j0(i0, j0));
        if i0 < j0 {
            prop_assert!(m1.commutator(&m2).unwrap().is_identity());
        }
    }

    #[test]
    fn phi_j_is_multiplicative(a in arb_word(2), b in arb_word(2), raw in prop::collection::vec(1usize..=2, 1..5)) {
        let c = ctx(7, 1);
        let phi = PhiJ::new(MonomialIndex::new(raw), 2, c).unwrap();
        let lhs = phi.word(&a.concat(&b)).unwrap();
        prop_assert_eq!(lhs, phi.word(&a).unwrap().multiply(&phi.word(&b).unwrap()).unwrap());
    }

    #[test]
    fn series_path_agrees_with_words(w in arb_word(2), raw in prop::collection::vec(1usize..=2, 1..5)) {
        let c = ctx(7, 1);
        let j = MonomialIndex::new(raw);
        let phi = PhiJ::new(j.clone(), 2, c).unwrap();
        let n = j.degree();
        let e = magnus_embed(&w, 2, n, c).unwrap();
        prop_assert_eq!(phi.series(&e).unwrap(), phi.word(&w).unwrap());
        if n >= 2 {
            let low = magnus_embed(&w, 2, n - 1, c).unwrap();
            prop_assert_eq!(phi.series_bar(&low).unwrap(), phi.word(&w).unwrap().without_corner());
        }
        // the diagonal steps read off exponent sums
        for i in 1..=n {
            let k = j.letters()[i - 1];
            prop_assert_eq!(phi.word(&w).unwrap().a(i, i + 1), e.magnus_coefficient(&MonomialIndex::new(vec![k])));
        }
    }

    #[test]
    fn character_equivariance(
        raw in prop::collection::vec(1usize..=2, 1..5),
        gen in 1usize..=2,
        g in 0usize..3,
    ) {
        let c = ctx(7, 1);
        let z3 = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let chi = Character::from_generator_value(z3, c, 2).unwrap();
        let phi = PhiJ::new(MonomialIndex::new(raw), 2, c).unwrap();
        let lhs = phi.word(&FreeWord::residue_power(gen, chi.residue(g))).unwrap();
        prop_assert_eq!(lhs, phi.generator(gen).unwrap().act(g, &chi).unwrap());
    }

    #[test]
    fn phi_gamma2_commutes_with_commutators(
        a in arb_word(2),
        b in arb_word(2),
        extra in arb_word(2),
        i0 in 0usize..4,
    ) {
        let c = ctx(7, 1);
        let mut letters = vec![1; 4];
        letters[i0] = 2;
        let phi = PhiJ::new(MonomialIndex::new(letters), 2, c).unwrap();
        let comm = FreeWord::commutator(&FreeWord::commutator(&a, &b), &extra);
        let y = phi.generator(2).unwrap();
        for w in [FreeWord::commutator(&a, &b), comm] {
            let m = phi.word(&w).unwrap();
            prop_assert_eq!(y.multiply(&m).unwrap(), m.multiply(y).unwrap());
        }
    }
}
