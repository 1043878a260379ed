//! Inputs shared by the benchmarks.

use itl::{Logic, SeqTree};

/// Named benchmark inputs in nested-sequent notation with their logic.
pub const CORPUS: &[(&str, &str, &str)] = &[
    ("box_or_imp", "|- box (p -> q) | (r -> s)", ""),
    ("nested_boxes", "|- (q -> r) | box (box (false -> false) | bbox false)", ""),
    ("neg_boxes", "~box p, ~bbox q |-", ""),
    ("converse_b", "|- (bdia p -> dia p) & (p -> box dia p)", "B"),
    ("excluded_middle_tb", "|- p | ~p", "TB"),
    ("seriality_d", "|- box p -> dia p", "D"),
];

pub fn load(entry: &(&str, &str, &str)) -> (SeqTree, Logic) {
    let tree = SeqTree::parse(entry.1).expect("corpus entries parse");
    let logic = entry.2.parse().expect("corpus logics parse");
    (tree, logic)
}
