//! Category laws of labels under randomly generated arrows.

use std::sync::Arc;

use msos_core::labels::{
    assemble, compose, identity_label, is_unobservable, project_mentioned, project_unmentioned,
    EntityArrow, LabelError,
};
use msos_core::*;
use proptest::prelude::*;

fn sig() -> Arc<LabelSignature> {
    LabelSignature::standard(&["ρ", "σ", "out"])
}

fn small_map() -> impl Strategy<Value = Value> {
    proptest::collection::btree_map(prop_oneof![Just("x"), Just("y")], 0i64..3, 0..=2)
        .prop_map(|m| Value::map(m.into_iter().map(|(k, v)| (k, Value::Int(v)))))
}

fn emissions() -> impl Strategy<Value = Vec<Value>> {
    proptest::collection::vec((0i64..3).prop_map(Value::Int), 0..3)
}

/// Three consecutive labels: environment fixed, store threaded.
fn chain() -> impl Strategy<Value = (Label, Label, Label)> {
    (small_map(), proptest::collection::vec(small_map(), 4), proptest::collection::vec(emissions(), 3)).prop_map(
        |(env, stores, outs)| {
            let mk = |i: usize| {
                Label::new(
                    sig(),
                    vec![
                        EntityArrow::Ro(env.clone()),
                        EntityArrow::Rw {
                            pre: stores[i].clone(),
                            post: stores[i + 1].clone(),
                        },
                        EntityArrow::Wo(outs[i].clone()),
                    ],
                )
                .unwrap()
            };
            (mk(0), mk(1), mk(2))
        },
    )
}

fn mention() -> impl Strategy<Value = Vec<&'static str>> {
    proptest::sample::subsequence(vec!["ρ", "σ", "out"], 0..=3)
}

proptest! {
    #[test]
    fn associativity((a, b, c) in chain()) {
        let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identities((a, _, _) in chain()) {
        let s = sig();
        let before = identity_label(&s, &a.source()).unwrap();
        let after = identity_label(&s, &a.target()).unwrap();
        prop_assert!(is_unobservable(&before));
        prop_assert_eq!(compose(&before, &a).unwrap(), a.clone());
        prop_assert_eq!(compose(&a, &after).unwrap(), a);
    }

    #[test]
    fn output_concatenates((a, b, _) in chain()) {
        let ab = compose(&a, &b).unwrap();
        let (Some(EntityArrow::Wo(x)), Some(EntityArrow::Wo(y)), Some(EntityArrow::Wo(xy))) =
            (a.arrow("out"), b.arrow("out"), ab.arrow("out")) else { unreachable!() };
        prop_assert_eq!(xy.clone(), [x.clone(), y.clone()].concat());
    }

    #[test]
    fn mismatched_store_does_not_compose((a, b, _) in chain(), other in small_map()) {
        prop_assume!(Some(&other) != b.source().get(1));
        let b2 = Label::new(sig(), vec![
            b.arrows()[0].clone(),
            EntityArrow::Rw { pre: other, post: Value::empty_map() },
            b.arrows()[2].clone(),
        ]).unwrap();
        let composed = compose(&a, &b2);
        prop_assert!(matches!(composed, Err(LabelError::NotComposable { .. })), "{:?}", composed);
    }

    #[test]
    fn projections_are_an_isomorphism((a, b, _) in chain(), m in mention()) {
        let s = sig();
        let pm = project_mentioned(&a, &m).unwrap();
        let pu = project_unmentioned(&a, &m).unwrap();
        prop_assert_eq!(assemble(&pm, &pu, &s).unwrap(), a.clone());
        let ab = compose(&a, &b).unwrap();
        let pm_b = project_mentioned(&b, &m).unwrap();
        prop_assert_eq!(project_mentioned(&ab, &m).unwrap(), pm.compose(&pm_b).unwrap());
    }
}
