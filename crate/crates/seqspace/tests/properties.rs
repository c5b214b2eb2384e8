//! Property tests for the core exact identities.

use proptest::collection::vec;
use proptest::prelude::*;

use seqspace::op::{gamma_transform, sigma_transform, TriangleOp};
use seqspace::seq::Decoration;
use seqspace::spaces::{ak_defect, norm};
use seqspace::{Scalar, Seq, SpaceId};

fn scalars() -> impl Strategy<Value = Scalar> {
    (-50i64..=50, 1i64..=50).prop_map(|(p, q)| Scalar::ratio(p, q))
}

fn finite_seqs() -> impl Strategy<Value = Seq> {
    vec(scalars(), 1..10).prop_map(Seq::finite)
}

proptest! {
    #[test]
    fn scalar_display_round_trips(s in scalars()) {
        let back: Scalar = s.to_string().parse().unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn seq_literal_round_trips(x in finite_seqs()) {
        let back: Seq = x.to_string().parse().unwrap();
        for k in 1..=12u64 {
            prop_assert_eq!(back.term(k), x.term(k));
        }
    }

    #[test]
    fn transforms_are_isometries(x in finite_seqs()) {
        let m = x.support().unwrap().max(1);
        let int_norm = norm(SpaceId::int_bv(), &x).unwrap();
        let d_norm = norm(SpaceId::d_bv(), &x).unwrap();
        let l1 = SpaceId::l1();
        prop_assert_eq!(int_norm, norm(l1, &gamma_transform(&x, m + 1)).unwrap());
        prop_assert_eq!(d_norm, norm(l1, &sigma_transform(&x, m + 1)).unwrap());
    }

    #[test]
    fn inverses_undo_the_transforms(x in finite_seqs()) {
        let n_max = 16u64;
        let gy = TriangleOp::gamma().apply_prefix(&x, n_max);
        let sy = TriangleOp::sigma().apply_prefix(&x, n_max);
        let ginv = TriangleOp::gamma_inv();
        let sinv = TriangleOp::sigma_inv();
        for n in 1..=n_max {
            prop_assert_eq!(ginv.apply(&gy, n), x.term(n));
            prop_assert_eq!(sinv.apply(&sy, n), x.term(n));
        }
    }

    #[test]
    fn transforms_factor_through_decorations(x in finite_seqs()) {
        let delta = TriangleOp::delta();
        let xi = x.decorate(Decoration::Integrated);
        let xd = x.decorate(Decoration::Differentiated);
        let gy = gamma_transform(&x, 12);
        let sy = sigma_transform(&x, 12);
        for n in 1..=12u64 {
            prop_assert_eq!(gy.term(n), delta.apply(&xi, n));
            prop_assert_eq!(sy.term(n), delta.apply(&xd, n));
        }
    }

    #[test]
    fn defects_shrink_and_vanish(x in finite_seqs()) {
        let m = x.support().unwrap().max(1);
        for space in [SpaceId::int_bv(), SpaceId::d_bv()] {
            let mut prev: Option<Scalar> = None;
            for n in 1..=m + 2 {
                let d = ak_defect(space, &x, n).unwrap();
                if let Some(p) = &prev {
                    prop_assert!(&d <= p);
                }
                prev = Some(d);
            }
            prop_assert!(ak_defect(space, &x, m + 1).unwrap().is_zero());
        }
    }

    #[test]
    fn truncation_norms_are_monotone(x in finite_seqs()) {
        let m = x.support().unwrap().max(1);
        for space in [SpaceId::int_bv(), SpaceId::d_bv()] {
            let full = norm(space, &x).unwrap();
            let mut prev = Scalar::zero();
            for n in 1..=m {
                let cur = norm(space, &x.truncate(n)).unwrap();
                prop_assert!(prev <= cur && cur <= full);
                prev = cur;
            }
            prop_assert_eq!(prev, full);
        }
    }
}
