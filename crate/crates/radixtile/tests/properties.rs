//! Property tests for the core invariants.

mod common;

use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;

use radixtile::cycle_codec::{cycle_from_word, decode_d_c, encode_e_c};
use radixtile::exact_linalg::{
    int_vec, lattice_dual, lattice_join, rat, residue_canon, to_rat, Lattice, RatVector,
};
use radixtile::radix_system::{primitive_root, EventuallyPeriodicWord, RadixSystem};
use radixtile::solenoid::{embed_i_hat, shift_sigma};
use radixtile::wavelet_group::{GroupContext, GroupElement};

fn systems() -> Vec<RadixSystem> {
    vec![
        one_d(2, &[0, 3]),
        one_d(2, &[0, 1]),
        one_d(3, &[0, 1, 5]),
        twin(),
        cloud(nine_digits()),
        cloud(three_digits()),
        cloud(five_digits()),
    ]
}

fn vec2(r: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-r..=r, 2)
}

fn rat_vec() -> impl Strategy<Value = RatVector> {
    prop::collection::vec((-12i64..=12, 1i64..=8), 2)
        .prop_map(|v| v.into_iter().map(|(n, d)| rat(n, d)).collect())
}

fn fit(s: &RadixSystem, k: &[i64]) -> Vec<BigInt> {
    int_vec(&k[..s.dim()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn integer_codec_roundtrip(si in 0usize..7, k in vec2(500)) {
        let s = &systems()[si];
        let k = fit(s, &k);
        let w = s.encode_integer(&k);
        let mut q = k.clone();
        for _ in 0..w.prefix().len() {
            q = s.divide_step(&q).1;
        }
        prop_assert_eq!(s.horner(w.prefix(), &q), k);
        prop_assert_eq!(s.horner(w.period(), &q), q);
        prop_assert_eq!(s.parse_word(&s.render_word(&w)).unwrap(), w);
    }

    #[test]
    fn cycle_codec_roundtrip(si in 0usize..7, word in prop::collection::vec(0usize..9, 1..4), k in vec2(60), j in 0usize..6) {
        let s = &systems()[si];
        let word: Vec<usize> = word.into_iter().map(|d| d % s.digits().len()).collect();
        let c = cycle_from_word(s, &word).unwrap();
        prop_assume!(c.is_simple());
        let k = fit(s, &k);
        let j = j % c.period();
        let w = encode_e_c(s, &c, &k, j).unwrap();
        prop_assert_eq!(decode_d_c(s, &c, &w).unwrap(), (k, j));
    }

    #[test]
    fn cycle_from_word_closes(si in 0usize..7, word in prop::collection::vec(0usize..9, 1..6)) {
        let s = &systems()[si];
        let word: Vec<usize> = word.into_iter().map(|d| d % s.digits().len()).collect();
        let c = cycle_from_word(s, &word).unwrap();
        let p = c.period();
        prop_assert_eq!(p, primitive_root(&word).len());
        for j in 0..p {
            prop_assert_eq!(&s.tau(c.labels()[j], c.point(j)), c.point((j + 1) % p));
        }
    }

    #[test]
    fn residue_canon_is_idempotent_and_congruent(si in 0usize..7, v in vec2(10_000)) {
        let s = &systems()[si];
        let v = fit(s, &v);
        let r = residue_canon(s.base(), &v);
        prop_assert_eq!(residue_canon(s.base(), &r), r.clone());
        let diff: Vec<BigInt> = v.iter().zip(&r).map(|(a, b)| a - b).collect();
        let q = s.base().solve_rat(&to_rat(&diff)).unwrap();
        prop_assert!(q.iter().all(|x| x.is_integer()));
    }

    #[test]
    fn double_dual(a in rat_vec(), b in rat_vec()) {
        if let Ok(l) = Lattice::from_generators(&[a, b], 2) {
            prop_assert_eq!(lattice_dual(&lattice_dual(&l)), l);
        }
    }

    #[test]
    fn join_contains_both(a in rat_vec(), b in rat_vec(), c in rat_vec(), d in rat_vec()) {
        let (Ok(l), Ok(m)) = (Lattice::from_generators(&[a, b], 2), Lattice::from_generators(&[c, d], 2)) else {
            return Ok(());
        };
        let j = lattice_join(&l, &m);
        for g in l.generators().iter().chain(m.generators().iter()) {
            prop_assert!(j.contains(g));
        }
    }

    #[test]
    fn group_laws(
        twin_side in any::<bool>(),
        elems in prop::collection::vec((-3i64..=3, 0u64..4, vec2(20)), 3),
    ) {
        let g = GroupContext::new(if twin_side { twin_a() } else { cloud_a() }).unwrap();
        let e: Vec<GroupElement> = elems
            .into_iter()
            .map(|(j, n, k)| GroupElement { j, b: g.element(n, int_vec(&k)) })
            .collect();
        prop_assert_eq!(g.mul(&g.mul(&e[0], &e[1]), &e[2]), g.mul(&e[0], &g.mul(&e[1], &e[2])));
        prop_assert_eq!(g.mul(&e[0], &g.inv(&e[0])), g.identity());
        prop_assert_eq!(g.mul(&g.inv(&e[1]), &e[1]), g.identity());
    }

    #[test]
    fn embedding_intertwines_shift(si in 0usize..7, x in rat_vec(), depth in 1usize..10) {
        let s = &systems()[si];
        let x: RatVector = x[..s.dim()].to_vec();
        let bx = s.base().mul_rat_vec(&x);
        prop_assert_eq!(embed_i_hat(s, &bx, depth), shift_sigma(s.base(), &embed_i_hat(s, &x, depth)));
    }

    #[test]
    fn word_rotation_is_canonical(prefix in prop::collection::vec(0usize..2, 0..6), period in prop::collection::vec(0usize..2, 1..5), k in 0usize..5) {
        let w = EventuallyPeriodicWord::new(prefix.clone(), period.clone()).unwrap();
        let k = k % period.len();
        let mut longer = prefix;
        longer.extend_from_slice(&period[..k]);
        let mut rotated = period;
        rotated.rotate_left(k);
        prop_assert_eq!(EventuallyPeriodicWord::new(longer, rotated).unwrap(), w.clone());
        for i in 0..20 {
            prop_assert_eq!(w.tail().letter(i), w.letter(i + 1));
            prop_assert_eq!(w.cons(7).letter(i + 1), w.letter(i));
        }
    }
}
