use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::sequent::{Name, SeqTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MorphismKind {
    /// Preserves the root, edges and edge labels.
    Weak,
    /// A weak morphism that also preserves vertex labels.
    Strong,
    /// The identity on names between two trees of one branch.
    Natural,
}

/// A name-to-name map between two seq-trees together with its claimed kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub kind: MorphismKind,
    map: BTreeMap<Name, Name>,
}

/// The first clause a claimed morphism fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotTotal(Name),
    OutsideTarget(Name),
    RootNotPreserved,
    EdgeNotPreserved(Name, Name),
    EdgeLabelChanged(Name, Name),
    VertexLabelChanged(Name),
    NotIdentity(Name),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotTotal(n) => write!(f, "source vertex {n} is not mapped"),
            Violation::OutsideTarget(n) => write!(f, "vertex {n} is mapped outside the target"),
            Violation::RootNotPreserved => write!(f, "root is not mapped to the target root"),
            Violation::EdgeNotPreserved(a, b) => write!(f, "edge {a}->{b} is not preserved"),
            Violation::EdgeLabelChanged(a, b) => write!(f, "edge {a}->{b} changes direction"),
            Violation::VertexLabelChanged(n) => write!(f, "label of vertex {n} is not preserved"),
            Violation::NotIdentity(n) => write!(f, "vertex {n} is not mapped to itself"),
        }
    }
}

impl Morphism {
    pub fn new(kind: MorphismKind, map: impl IntoIterator<Item = (Name, Name)>) -> Self {
        Morphism {
            kind,
            map: map.into_iter().collect(),
        }
    }

    pub fn identity(t: &SeqTree, kind: MorphismKind) -> Self {
        Morphism::new(kind, t.names().map(|n| (n, n)))
    }

    pub fn get(&self, n: Name) -> Option<Name> {
        self.map.get(&n).copied()
    }

    /// Pairs in ascending source-name order.
    pub fn iter(&self) -> impl Iterator<Item = (Name, Name)> + '_ {
        self.map.iter().map(|(&a, &b)| (a, b))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Checks every clause of the claimed kind and reports the first violation.
pub fn check_morphism(m: &Morphism, source: &SeqTree, target: &SeqTree) -> std::result::Result<(), Violation> {
    let image = |n: Name| -> std::result::Result<Name, Violation> {
        let v = m.get(n).ok_or(Violation::NotTotal(n))?;
        if target.contains(v) {
            Ok(v)
        } else {
            Err(Violation::OutsideTarget(n))
        }
    };
    for n in source.names() {
        image(n)?;
    }
    if image(source.root())? != target.root() {
        return Err(Violation::RootNotPreserved);
    }
    for (a, b, d) in source.edges() {
        let (ia, ib) = (image(a)?, image(b)?);
        match target.parent(ib).expect("image is a target vertex") {
            Some((p, e)) if p == ia => {
                if e != d {
                    return Err(Violation::EdgeLabelChanged(a, b));
                }
            }
            _ => return Err(Violation::EdgeNotPreserved(a, b)),
        }
    }
    match m.kind {
        MorphismKind::Weak => {}
        MorphismKind::Strong => {
            for n in source.names() {
                if source.label(n).ok() != target.label(image(n)?).ok() {
                    return Err(Violation::VertexLabelChanged(n));
                }
            }
        }
        MorphismKind::Natural => {
            for n in source.names() {
                if image(n)? != n {
                    return Err(Violation::NotIdentity(n));
                }
            }
        }
    }
    Ok(())
}

pub fn verify_morphism(m: &Morphism, source: &SeqTree, target: &SeqTree) -> bool {
    check_morphism(m, source, target).is_ok()
}

struct Matcher<'a> {
    source: &'a SeqTree,
    target: &'a SeqTree,
    strong: bool,
    memo: HashMap<(usize, usize), bool>,
}

impl Matcher<'_> {
    // Whether the source subtree at i maps into the target with i ↦ j. Sibling
    // choices are independent because the map need not be injective.
    fn matches(&mut self, i: usize, j: usize) -> bool {
        if let Some(&r) = self.memo.get(&(i, j)) {
            return r;
        }
        let ok = (!self.strong || self.source.label_at(i) == self.target.label_at(j)) && {
            let source_children: Vec<_> = self.source.children_at(i).collect();
            let target_children: Vec<_> = self.target.children_at(j).collect();
            source_children.iter().all(|&(c, d)| {
                target_children
                    .iter()
                    .any(|&(c2, d2)| d2 == d && self.matches(c, c2))
            })
        };
        self.memo.insert((i, j), ok);
        ok
    }

    fn build(&mut self, i: usize, j: usize, order: &[Vec<usize>], out: &mut BTreeMap<Name, Name>) {
        out.insert(self.source.name_at(i), self.target.name_at(j));
        let source_children: Vec<_> = self.source.children_at(i).collect();
        for (c, d) in source_children {
            let same_name = self
                .target
                .index(self.source.name_at(c))
                .filter(|&c2| order[j].contains(&c2));
            let chosen = same_name
                .into_iter()
                .chain(order[j].iter().copied())
                .find(|&c2| self.target.children_at(j).any(|(x, e)| x == c2 && e == d) && self.matches(c, c2))
                .expect("matchability was established");
            self.build(c, chosen, order, out);
        }
    }
}

fn find_morphism(source: &SeqTree, target: &SeqTree, strong: bool) -> Option<Morphism> {
    let mut m = Matcher {
        source,
        target,
        strong,
        memo: HashMap::new(),
    };
    if !m.matches(0, 0) {
        return None;
    }
    let canon = target.canonical_subtrees();
    let order: Vec<Vec<usize>> = (0..target.len())
        .map(|j| {
            let mut cs: Vec<(usize, crate::formula::Direction)> = target.children_at(j).collect();
            cs.sort_by(|a, b| (a.1, &canon[a.0]).cmp(&(b.1, &canon[b.0])).then(a.0.cmp(&b.0)));
            cs.into_iter().map(|(c, _)| c).collect()
        })
        .collect();
    let mut map = BTreeMap::new();
    m.build(0, 0, &order, &mut map);
    let kind = if strong { MorphismKind::Strong } else { MorphismKind::Weak };
    Some(Morphism { kind, map })
}

/// A strong morphism from `source` to `target` if one exists. For each source
/// child the target child with the same name is tried first, then the others
/// in canonical order, so the result is deterministic and the identity is
/// found whenever it is a morphism.
pub fn find_strong_morphism(source: &SeqTree, target: &SeqTree) -> Option<Morphism> {
    find_morphism(source, target, true)
}

pub fn find_weak_morphism(source: &SeqTree, target: &SeqTree) -> Option<Morphism> {
    find_morphism(source, target, false)
}

/// `second ∘ first`. The result is strong only if both parts are strong.
pub fn compose_morphisms(first: &Morphism, second: &Morphism) -> Result<Morphism> {
    let map = first
        .iter()
        .map(|(a, b)| second.get(b).map(|c| (a, c)).ok_or(Error::MismatchedEndpoints))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let kind = if first.kind == MorphismKind::Strong && second.kind == MorphismKind::Strong {
        MorphismKind::Strong
    } else {
        MorphismKind::Weak
    };
    Ok(Morphism { kind, map })
}

pub fn morphically_equivalent(a: &SeqTree, b: &SeqTree) -> bool {
    find_strong_morphism(a, b).is_some() && find_strong_morphism(b, a).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> SeqTree {
        SeqTree::parse(s).unwrap()
    }

    // Children in creation order: u=1, v=2, u'=3, v'=4, u''=5.
    fn fig3_repeat() -> SeqTree {
        st("~box p, ~bbox q |- box p, bbox q, (f)[|-], (b)[|-], (f)[|-], (b)[|-], (f)[|- p]")
    }

    // u=1, v=2, u'=3.
    fn fig3_companion() -> SeqTree {
        st("~box p, ~bbox q |- box p, bbox q, (f)[|-], (b)[|-], (f)[|- p]")
    }

    #[test]
    fn identity_is_strong() {
        let t = fig3_repeat();
        assert!(verify_morphism(&Morphism::identity(&t, MorphismKind::Strong), &t, &t));
        assert_eq!(find_strong_morphism(&t, &t).unwrap(), Morphism::identity(&t, MorphismKind::Strong));
    }

    #[test]
    fn direction_flip_is_rejected() {
        let (s, t) = (st("|- (f)[|-]"), st("|- (b)[|-]"));
        let m = Morphism::new(MorphismKind::Weak, [(Name(0), Name(0)), (Name(1), Name(1))]);
        assert_eq!(check_morphism(&m, &s, &t), Err(Violation::EdgeLabelChanged(Name(0), Name(1))));
    }

    #[test]
    fn label_mismatch_blocks_strong_morphisms() {
        assert!(find_strong_morphism(&st("|- (f)[p |-]"), &st("|- (f)[q |-]")).is_none());
        assert!(find_weak_morphism(&st("|- (f)[p |-]"), &st("|- (f)[q |-]")).is_some());
    }

    #[test]
    fn repeat_maps_onto_companion() {
        let (g, h) = (fig3_repeat(), fig3_companion());
        let m = find_strong_morphism(&g, &h).unwrap();
        let expected: Vec<(u32, u32)> = vec![(0, 0), (1, 1), (2, 2), (3, 1), (4, 2), (5, 3)];
        let got: Vec<(u32, u32)> = m.iter().map(|(a, b)| (a.0, b.0)).collect();
        assert_eq!(got, expected);
        assert!(verify_morphism(&m, &g, &h));
        assert!(morphically_equivalent(&g, &h));
        assert!(!morphically_equivalent(&st("|- p"), &st("|- q")));
    }

    #[test]
    fn composition_kinds() {
        let (g, h) = (fig3_repeat(), fig3_companion());
        let delta = find_strong_morphism(&g, &h).unwrap();
        let id = Morphism::identity(&h, MorphismKind::Strong);
        assert_eq!(compose_morphisms(&delta, &id).unwrap(), delta);
        let weak = Morphism::identity(&g, MorphismKind::Weak);
        assert_eq!(compose_morphisms(&weak, &delta).unwrap().kind, MorphismKind::Weak);
        let short = Morphism::identity(&st("|-"), MorphismKind::Strong);
        assert_eq!(compose_morphisms(&delta, &short), Err(Error::MismatchedEndpoints));
    }
}
