use std::collections::BTreeSet;

use proptest::prelude::*;
use qualimeter_core::ck::{lcom, wmc, CkOptions};
use qualimeter_core::complexity::cyclomatic;
use qualimeter_core::detect::tcc;
use qualimeter_core::model::MemberRef;
use qualimeter_core::{FieldDecl, MethodDecl, TypeDecl, Visibility};

/// Per method: (static, constructor, own field indices, foreign field indices).
type RawClass = (Vec<bool>, Vec<(bool, bool, Vec<usize>, Vec<usize>)>);

fn raw_class() -> impl Strategy<Value = RawClass> {
    (
        prop::collection::vec(prop::bool::weighted(0.2), 0..=8),
        prop::collection::vec(
            (
                prop::bool::weighted(0.15),
                prop::bool::weighted(0.15),
                prop::collection::vec(0..8usize, 0..5),
                prop::collection::vec(0..3usize, 0..2),
            ),
            0..=12,
        ),
    )
}

fn build((statics, methods): &RawClass) -> TypeDecl {
    let mut t = TypeDecl::class("k.C");
    for (i, st) in statics.iter().enumerate() {
        let mut f = FieldDecl::new(format!("f{i}"), "int", Visibility::Private);
        f.is_static = *st;
        t = t.with_field(f);
    }
    for (i, (st, ctor, own, foreign)) in methods.iter().enumerate() {
        let mut m = MethodDecl::new(format!("m{i}"), Visibility::Public);
        m.is_static = *st;
        m.is_constructor = *ctor;
        m.decision_count = (i % 4) as u64;
        if !statics.is_empty() {
            m.accessed_fields.extend(own.iter().map(|f| MemberRef::new("k.C", format!("f{}", f % statics.len()))));
        }
        // same field names on another type must not count as shared
        m.accessed_fields.extend(foreign.iter().map(|f| MemberRef::new("k.Other", format!("f{f}"))));
        t = t.with_method(m);
    }
    t
}

/// Straightforward pairwise count over the raw description.
fn brute_lcom((statics, methods): &RawClass) -> (u64, Option<f64>) {
    let uses: Vec<BTreeSet<usize>> = methods
        .iter()
        .filter(|(st, ctor, _, _)| !st && !ctor)
        .map(|(_, _, own, _)| {
            own.iter()
                .filter(|_| !statics.is_empty())
                .map(|f| f % statics.len())
                .filter(|f| !statics[*f])
                .collect()
        })
        .collect();
    let (mut p, mut q) = (0i64, 0i64);
    for i in 0..uses.len() {
        for j in 0..uses.len() {
            if i < j {
                if uses[i].is_disjoint(&uses[j]) {
                    p += 1;
                } else {
                    q += 1;
                }
            }
        }
    }
    let tcc = (p + q > 0).then(|| q as f64 / (p + q) as f64);
    ((p - q).max(0) as u64, tcc)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn lcom_matches_pairwise_count(raw in raw_class()) {
        let t = build(&raw);
        let (expected, expected_tcc) = brute_lcom(&raw);
        prop_assert_eq!(lcom(&t).0, expected);
        prop_assert_eq!(tcc(&t), expected_tcc);
    }

    #[test]
    fn wmc_sums_cyclomatic_numbers(raw in raw_class()) {
        let t = build(&raw);
        let with_ctors = CkOptions { include_constructors: true, ..Default::default() };
        let all: u64 = t.methods.iter().map(cyclomatic).sum();
        prop_assert_eq!(wmc(&t, &with_ctors), all);
        let plain: u64 = t.methods.iter().filter(|m| !m.is_constructor).map(cyclomatic).sum();
        prop_assert_eq!(wmc(&t, &CkOptions::default()), plain);
    }
}

#[test]
fn disjoint_pair_gives_lcom_one() {
    let raw: RawClass = (vec![false, false], vec![(false, false, vec![0], vec![]), (false, false, vec![1], vec![])]);
    assert_eq!(lcom(&build(&raw)).0, 1);
    assert_eq!(tcc(&build(&raw)), Some(0.0));
}
