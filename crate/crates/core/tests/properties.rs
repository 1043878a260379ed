use proptest::prelude::*;

use itl::countermodel::{
    check_frame_conditions, countermodel, countermodel_failure, eval_formula, model_from_json, model_to_json,
    persistence_failure,
};
use itl::morphism::{
    compose_morphisms, find_strong_morphism, find_weak_morphism, morphically_equivalent, verify_morphism, Morphism,
    MorphismKind,
};
use itl::oracle::{brute_force_validity, BoundedSearchResult};
use itl::proof::{check_proof, extract_proof, proof_from_json, proof_to_json};
use itl::prover::{prove_with, ProverConfig};
use itl::sequent::{ClosureRelation, GentzenSequent};
use itl::{prove, Direction, Formula, Logic, SeqTree, Side};

fn formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::atom("p")),
        Just(Formula::atom("q")),
        Just(Formula::bottom()),
    ];
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            inner.clone().prop_map(Formula::dia),
            inner.clone().prop_map(Formula::bdia),
            inner.clone().prop_map(Formula::boxed),
            inner.prop_map(Formula::bbox),
        ]
    })
}

fn small_formula() -> impl Strategy<Value = Formula> {
    formula(3).prop_filter("small enough to decide quickly", |a| a.length() <= 9 && a.modal_depth() <= 2)
}

fn logic() -> impl Strategy<Value = Logic> {
    (any::<bool>(), any::<bool>(), any::<bool>()).prop_map(|(t, b, d)| Logic { t, b, d })
}

fn label() -> impl Strategy<Value = GentzenSequent> {
    prop_oneof![
        3 => Just(GentzenSequent::new([], [])),
        1 => Just(GentzenSequent::new([Formula::atom("p")], [])),
        1 => Just(GentzenSequent::new([], [Formula::atom("p")])),
        1 => Just(GentzenSequent::new([Formula::atom("q")], [Formula::boxed(Formula::atom("p"))])),
    ]
}

// Each entry picks a parent among the vertices already built.
fn seq_tree(max: usize) -> impl Strategy<Value = SeqTree> {
    (label(), prop::collection::vec((any::<prop::sample::Index>(), any::<bool>(), label()), 0..max)).prop_map(
        |(root, rest)| {
            let mut t = SeqTree::new(root);
            let mut names = vec![t.root()];
            for (parent, forward, l) in rest {
                let d = if forward { Direction::Forward } else { Direction::Backward };
                names.push(t.add_child(*parent.get(&names), d, l).unwrap());
            }
            t
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn formula_text_round_trips(a in formula(4)) {
        let back = Formula::parse(a.text()).unwrap();
        prop_assert_eq!(back.text(), a.text());
        prop_assert_eq!(back, a);
    }

    #[test]
    fn formula_metrics(a in formula(4)) {
        prop_assert!(a.modal_depth() < a.length());
        let subs = a.subformulas();
        prop_assert!(subs.len() <= a.length());
        prop_assert!(subs.contains(&a));
        prop_assert!(subs.iter().all(|s| s.length() <= a.length() && s.modal_depth() <= a.modal_depth()));
    }

    #[test]
    fn sequent_text_round_trips(t in seq_tree(6)) {
        let back = SeqTree::parse(&t.to_string()).unwrap();
        prop_assert_eq!(back.to_string(), t.to_string());
        prop_assert!(back.isomorphic(&t));
    }

    #[test]
    fn closure_sizes(t in seq_tree(6), l in logic()) {
        let e = t.edge_count();
        let n = t.len();
        let expected = if l.b { 4 * e } else { 2 * e } + if l.t { 2 * n } else { 0 };
        let c = ClosureRelation::new(&t, l);
        prop_assert_eq!(c.len(), expected);
        for &(w, u, d) in c.pairs() {
            prop_assert!(c.contains(u, d.converse(), w));
        }
    }

    #[test]
    fn stripping_consequents(t in seq_tree(6)) {
        let s = t.strip_consequents();
        prop_assert_eq!(s.strip_consequents().to_string(), s.to_string());
        prop_assert!(s.formulas(Side::Consequent).is_empty());
        prop_assert_eq!(s.formulas(Side::Antecedent), t.formulas(Side::Antecedent));
        prop_assert_eq!(s.names().collect::<Vec<_>>(), t.names().collect::<Vec<_>>());
        prop_assert_eq!(s.edges().collect::<Vec<_>>(), t.edges().collect::<Vec<_>>());
    }

    #[test]
    fn identity_is_found(t in seq_tree(6)) {
        let m = find_strong_morphism(&t, &t).unwrap();
        prop_assert_eq!(m, Morphism::identity(&t, MorphismKind::Strong));
    }

    #[test]
    fn morphisms_compose(a in seq_tree(5), b in seq_tree(5), c in seq_tree(5)) {
        if let (Some(f), Some(g)) = (find_strong_morphism(&a, &b), find_strong_morphism(&b, &c)) {
            let h = compose_morphisms(&f, &g).unwrap();
            prop_assert!(verify_morphism(&h, &a, &c));
            prop_assert!(find_strong_morphism(&a, &c).is_some());
        }
    }

    #[test]
    fn strong_implies_weak(a in seq_tree(6), b in seq_tree(6)) {
        let strong = find_strong_morphism(&a, &b);
        let weak = find_weak_morphism(&a, &b);
        if let Some(m) = &strong {
            prop_assert!(verify_morphism(m, &a, &b));
            prop_assert!(weak.is_some());
        }
        if let Some(m) = &weak {
            prop_assert!(verify_morphism(m, &a, &b));
        }
        prop_assert_eq!(morphically_equivalent(&a, &b), morphically_equivalent(&b, &a));
    }

    #[test]
    fn grafted_copies_fold_back(t in seq_tree(5)) {
        // Plugging a copy of the tree's root nestings at the root yields a
        // tree that maps back onto the original.
        let mut only_children = t.clone();
        for side in [Side::Antecedent, Side::Consequent] {
            for f in t.project(t.root(), side).unwrap().iter() {
                only_children.remove(t.root(), side, f).unwrap();
            }
        }
        let doubled = t.compose(&only_children);
        prop_assert!(morphically_equivalent(&doubled, &t));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn certificates_check(a in small_formula(), l in logic()) {
        let v = prove(&SeqTree::from_formula(a.clone()), l).unwrap();
        if v.provable {
            let p = extract_proof(&v).unwrap();
            prop_assert!(check_proof(&p, l).is_ok());
            let back = proof_from_json(&proof_to_json(&p)).unwrap();
            prop_assert!(check_proof(&back, l).is_ok());
            prop_assert_eq!(back.to_text(), p.to_text());
        } else {
            let (bp, m) = countermodel(&v).unwrap();
            prop_assert!(check_frame_conditions(&m, l));
            prop_assert_eq!(countermodel_failure(&m, &bp, v.input()), None);
            prop_assert_eq!(persistence_failure(&m, a.subformulas().iter()), None);
            prop_assert_eq!(model_from_json(&model_to_json(&m)).unwrap(), m);
        }
    }

    #[test]
    fn search_is_deterministic(a in small_formula(), l in logic()) {
        let input = SeqTree::from_formula(a);
        let first = prove(&input, l).unwrap();
        let again = prove(&input, l).unwrap();
        let parallel = prove_with(&input, l, &ProverConfig { workers: 3, ..ProverConfig::default() }).unwrap();
        prop_assert_eq!(first.tree.trace_lines(), again.tree.trace_lines());
        prop_assert_eq!(first.tree.trace_lines(), parallel.tree.trace_lines());
    }

    #[test]
    fn oracle_refutations_are_sound(a in small_formula(), l in logic()) {
        if let BoundedSearchResult::Invalid { model, witness } = brute_force_validity(&a, l, 2).unwrap() {
            prop_assert!(check_frame_conditions(&model, l));
            prop_assert!(!eval_formula(&model, witness, &a).unwrap());
            prop_assert!(!prove(&SeqTree::from_formula(a), l).unwrap().provable);
        }
    }

    #[test]
    fn stronger_logics_prove_more(a in small_formula()) {
        let provable = |l: Logic| prove(&SeqTree::from_formula(a.clone()), l).unwrap().provable;
        let k = provable(Logic::K);
        for l in Logic::distinct() {
            prop_assert!(!k || provable(l), "provable in the base logic but not in {}", l);
        }
    }
}
