use proptest::prelude::*;
use qualimeter_core::model::MemberRef;
use qualimeter_core::mood::{ahf, cf, mood_report, pf};
use qualimeter_core::{ClassModel, FieldDecl, MethodDecl, TypeDecl, Visibility};

const VIS: [Visibility; 4] = [Visibility::Public, Visibility::Protected, Visibility::Package, Visibility::Private];

/// Visibility index, static flag and (type, field) accesses.
type RawMethod = (usize, bool, Vec<(usize, usize)>);

#[derive(Debug, Clone)]
struct RawType {
    interface: bool,
    parent: Option<usize>,
    package: usize,
    fields: Vec<(usize, bool)>,
    methods: Vec<RawMethod>,
}

fn raw_type(n: usize) -> impl Strategy<Value = RawType> {
    (
        prop::bool::weighted(0.15),
        prop::option::of(0..n),
        0..3usize,
        prop::collection::vec((0..4usize, any::<bool>()), 0..5),
        prop::collection::vec((0..4usize, prop::bool::weighted(0.2), prop::collection::vec((0..n, 0..5usize), 0..4)), 0..5),
    )
        .prop_map(|(interface, parent, package, fields, methods)| RawType { interface, parent, package, fields, methods })
}

fn build(raw: &[RawType]) -> ClassModel {
    let name = |i: usize| format!("p{}.T{i}", raw[i].package);
    let types = raw
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut t = if r.interface { TypeDecl::interface(name(i)) } else { TypeDecl::class(name(i)) };
            // parents only point backwards, so the hierarchy is acyclic
            if let Some(p) = r.parent.filter(|p| *p < i && raw[*p].interface == r.interface) {
                t = t.extends(name(p));
            }
            for (k, (v, st)) in r.fields.iter().enumerate() {
                let mut f = FieldDecl::new(format!("f{k}"), "int", VIS[*v]);
                f.is_static = *st;
                t = t.with_field(f);
            }
            for (k, (v, st, refs)) in r.methods.iter().enumerate() {
                let mut m = MethodDecl::new(format!("m{k}"), VIS[*v]);
                m.is_static = *st;
                m.is_abstract = r.interface;
                for (j, f) in refs {
                    if !raw[*j].fields.is_empty() {
                        m.accessed_fields.push(MemberRef::new(name(*j), format!("f{}", f % raw[*j].fields.len())));
                    }
                }
                t = t.with_method(m);
            }
            t
        })
        .collect();
    ClassModel::from_types(types)
}

fn arb_model() -> impl Strategy<Value = ClassModel> {
    (1..=30usize)
        .prop_flat_map(|n| prop::collection::vec(raw_type(n), n))
        .prop_map(|raw| build(&raw))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn every_defined_factor_is_a_ratio(model in arb_model()) {
        for v in mood_report(&model).values().into_iter().flatten() {
            prop_assert!((0.0..=1.0).contains(&v), "{v}");
        }
    }

    #[test]
    fn private_fields_are_fully_hidden(model in arb_model()) {
        let types = model
            .types()
            .iter()
            .cloned()
            .map(|mut t| {
                t.fields.iter_mut().for_each(|f| f.visibility = Visibility::Private);
                t
            })
            .collect();
        let private = ClassModel::from_types(types);
        let any_field = private.types().iter().any(|t| !t.fields.is_empty());
        prop_assert_eq!(ahf(&private), any_field.then_some(1.0));
    }
}

#[test]
fn complete_reference_graph_has_unit_coupling() {
    for n in 2..=12 {
        let names: Vec<String> = (0..n).map(|i| format!("C{i}")).collect();
        let types = names
            .iter()
            .map(|me| {
                names
                    .iter()
                    .filter(|o| *o != me)
                    .fold(TypeDecl::class(me.clone()), |t, o| t.with_field(FieldDecl::new(format!("r{o}"), o.clone(), Visibility::Private)))
            })
            .collect();
        assert_eq!(cf(&ClassModel::from_types(types)), Some(1.0), "n = {n}");
    }
}

#[test]
fn flat_model_leaves_polymorphism_undefined() {
    let types = (0..5)
        .map(|i| TypeDecl::class(format!("F{i}")).with_method(MethodDecl::new("run", Visibility::Public)))
        .collect();
    let model = ClassModel::from_types(types);
    assert_eq!(pf(&model), None);
    assert!(mood_report(&model).mhf.is_some());
}

#[test]
fn single_class_has_no_coupling_denominator() {
    let model = ClassModel::from_types(vec![TypeDecl::class("Only")]);
    assert_eq!(cf(&model), None);
    assert_eq!(ahf(&model), None);
}
