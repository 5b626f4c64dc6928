use khbeta::braid::{markov_rewrite, self_linking, BraidWord, MoveKind};
use khbeta::coeff::{FieldElem, Monomial, Poly};
use khbeta::cube::build_complex;
use khbeta::frobenius::{FrobeniusAlgebra, Theory, TheoryTag};
use khbeta::homalg::{mono_matmul, snf_graded, GradedMatrix};
use khbeta::moves::{far_commute, phi1_minus, phi1_plus, phi2, psi1_plus, psi2, rotation};
use proptest::prelude::*;

const P: u32 = 5;

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((0i64..P as i64, 0u32..3, 0u32..3), 0..4).prop_map(|ts| {
        ts.into_iter().fold(Poly::zero(P), |acc, (c, eu, ev)| &acc + &Poly::term(FieldElem::new(c, P).unwrap(), eu, ev))
    })
}

fn braid(max_strands: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    (2..=max_strands).prop_flat_map(move |n| {
        let g = n as i32 - 1;
        prop::collection::vec((1..=g, any::<bool>()), 0..=max_len).prop_map(move |ls| {
            BraidWord::new(n, ls.into_iter().map(|(a, pos)| if pos { a } else { -a }).collect()).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn poly_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert_eq!(&a * &Poly::one(P), a);
    }

    #[test]
    fn field_inverses(v in 1i64..P as i64) {
        let x = FieldElem::new(v, P).unwrap();
        prop_assert!((x * x.inv().unwrap()).is_one());
    }

    #[test]
    fn monomial_sums_need_equal_degree(c1 in 1i64..5, c2 in 1i64..5, e1 in 0u32..4, e2 in 0u32..4) {
        let a = Monomial::new(FieldElem::new(c1, P).unwrap(), e1);
        let b = Monomial::new(FieldElem::new(c2, P).unwrap(), e2);
        prop_assert_eq!(a.try_add(&b).is_ok(), e1 == e2);
        prop_assert_eq!((a * b).upow(), e1 + e2);
    }

    #[test]
    fn mirror_and_writhe(b in braid(4, 8)) {
        prop_assert_eq!(b.mirror().mirror(), b.clone());
        prop_assert_eq!(b.mirror().writhe(), -b.writhe());
        prop_assert_eq!(b.mirror().components(), b.components());
        prop_assert_eq!(self_linking(&b), b.writhe() - b.strands() as i32);
    }

    #[test]
    fn rewrites_respect_sl_and_components(b in braid(4, 8), pos in 0usize..9, letter in 1i32..3) {
        let moves = [
            MoveKind::Rotate,
            MoveKind::R2Insert { letter },
            MoveKind::R2Insert { letter: -letter },
            MoveKind::Stabilize { positive: true },
            MoveKind::Stabilize { positive: false },
            MoveKind::FarCommute,
            MoveKind::BraidRelation,
            MoveKind::R2Remove,
            MoveKind::Destabilize,
        ];
        for m in moves {
            let Ok(rw) = markov_rewrite(&b, m, pos.min(b.len())) else { continue };
            prop_assert_eq!(rw.word.components(), b.components());
            let drop = self_linking(&b) - self_linking(&rw.word);
            if rw.transverse {
                prop_assert_eq!(drop, 0, "{:?}", m);
            } else {
                prop_assert_eq!(drop.abs(), 2, "{:?}", m);
            }
        }
    }

    #[test]
    fn d_squared_vanishes(b in braid(4, 7)) {
        for tag in [TheoryTag::Kh, TheoryTag::Bn, TheoryTag::Vt, TheoryTag::Big] {
            let cx = build_complex(&b, Theory::new(tag, 3).unwrap()).unwrap();
            prop_assert!(cx.d_squared_is_zero(), "{} {}", b, tag);
            prop_assert!(cx.is_homogeneous(), "{} {}", b, tag);
        }
    }

    #[test]
    fn snf_transforms(b in braid(3, 5)) {
        let cx = build_complex(&b, Theory::bn(3).unwrap()).unwrap();
        let (lo, hi) = cx.range();
        for i in lo..hi {
            let m = GradedMatrix::from_complex(&cx, i).unwrap().to_dense();
            if m.is_empty() || m[0].is_empty() {
                continue;
            }
            let snf = snf_graded(&m, 3).unwrap();
            let lmr = mono_matmul(&mono_matmul(&snf.left, &m, 3).unwrap(), &snf.right, 3).unwrap();
            prop_assert_eq!(&lmr, &snf.diag);
            for (r, row) in snf.diag.iter().enumerate() {
                for (c, e) in row.iter().enumerate() {
                    prop_assert!(r == c || e.is_zero());
                }
            }
            prop_assert!(snf.orders.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn maps_commute_with_d(b in braid(3, 4), site in 0usize..5, letter in prop::sample::select(vec![1, -1, 2, -2])) {
        for tag in [TheoryTag::Bn, TheoryTag::Big] {
            let t = Theory::new(tag, 3).unwrap();
            let alg = FrobeniusAlgebra::new(t);
            let mut maps = vec![phi1_plus(&b, &alg).unwrap(), phi1_minus(&b, &alg).unwrap()];
            if !b.is_empty() {
                maps.push(rotation(&b, &alg).unwrap());
            }
            if let Ok(m) = psi1_plus(&b, &alg) {
                maps.push(m);
            }
            if let Ok(m) = psi2(&b, site.min(b.len()), letter, &alg) {
                maps.push(m);
            }
            if let Ok(m) = phi2(&b, site, &alg) {
                maps.push(m);
            }
            let wide = BraidWord::new(4, b.letters().iter().map(|&l| if l.abs() == 2 { l.signum() * 3 } else { l }).collect()).unwrap();
            for s in 0..wide.len() {
                if let Ok(m) = far_commute(&wide, s, &alg) {
                    maps.push(m);
                }
            }
            for m in maps {
                prop_assert!(m.commutes_in(t).unwrap(), "{:?} on {} in {}", m.kind(), m.source(), tag);
            }
        }
    }
}
