use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Direction, Formula};
use crate::logic::Logic;

/// Opaque vertex identifier, unique within one seq-tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Name(pub u32);

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Antecedent,
    Consequent,
}

/// A duplicate-free set of formulas kept in canonical order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormulaSet(Vec<Formula>);

impl FormulaSet {
    pub fn new() -> Self {
        FormulaSet(Vec::new())
    }

    /// Returns true if the formula was not already present.
    pub fn insert(&mut self, f: Formula) -> bool {
        match self.0.binary_search(&f) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, f);
                true
            }
        }
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.0.binary_search(f).is_ok()
    }

    /// Returns true if the formula was present.
    pub fn remove(&mut self, f: &Formula) -> bool {
        match self.0.binary_search(f) {
            Ok(i) => {
                self.0.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn clear(&mut self) {
        self.0.clear()
    }

    pub fn union_with(&mut self, other: &FormulaSet) {
        for f in other.iter() {
            self.insert(f.clone());
        }
    }
}

impl FromIterator<Formula> for FormulaSet {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        let mut v: Vec<Formula> = iter.into_iter().collect();
        v.sort();
        v.dedup();
        FormulaSet(v)
    }
}

impl<'a> IntoIterator for &'a FormulaSet {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// A Gentzen sequent Γ ⊢ Δ.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GentzenSequent {
    pub antecedent: FormulaSet,
    pub consequent: FormulaSet,
}

impl GentzenSequent {
    pub fn new(antecedent: impl IntoIterator<Item = Formula>, consequent: impl IntoIterator<Item = Formula>) -> Self {
        GentzenSequent {
            antecedent: antecedent.into_iter().collect(),
            consequent: consequent.into_iter().collect(),
        }
    }

    pub fn side(&self, side: Side) -> &FormulaSet {
        match side {
            Side::Antecedent => &self.antecedent,
            Side::Consequent => &self.consequent,
        }
    }

    pub fn side_mut(&mut self, side: Side) -> &mut FormulaSet {
        match side {
            Side::Antecedent => &mut self.antecedent,
            Side::Consequent => &mut self.consequent,
        }
    }

    pub fn modal_depth(&self) -> usize {
        self.antecedent
            .iter()
            .chain(self.consequent.iter())
            .map(Formula::modal_depth)
            .max()
            .unwrap_or(0)
    }

    fn merge(&mut self, other: &GentzenSequent) {
        self.antecedent.union_with(&other.antecedent);
        self.consequent.union_with(&other.consequent);
    }
}

fn join(fs: &FormulaSet) -> String {
    fs.iter().map(Formula::text).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for GentzenSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.antecedent.is_empty() {
            write!(f, "{} ", join(&self.antecedent))?;
        }
        f.write_str("|-")?;
        if !self.consequent.is_empty() {
            write!(f, " {}", join(&self.consequent))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Vertex {
    name: Name,
    parent: Option<usize>,
    dir: Direction,
    children: Vec<usize>,
    // Shared between trees cloned from one another until written.
    label: Arc<GentzenSequent>,
}

/// A nested sequent as a named tree of Gentzen sequents with f/b edges.
///
/// Vertices are stored in ascending name order and every parent precedes its
/// children. New vertices always receive a name above every existing one.
/// Equality is label-preserving isomorphism that ignores sibling order and
/// names.
#[derive(Debug, Clone)]
pub struct SeqTree {
    vertices: Vec<Vertex>,
}

impl SeqTree {
    /// A one-vertex tree whose root is named 0.
    pub fn new(label: GentzenSequent) -> Self {
        SeqTree {
            vertices: vec![Vertex {
                name: Name(0),
                parent: None,
                dir: Direction::Forward,
                children: Vec::new(),
                label: Arc::new(label),
            }],
        }
    }

    /// The sequent ⊢ A.
    pub fn from_formula(a: Formula) -> Self {
        SeqTree::new(GentzenSequent::new([], [a]))
    }

    pub fn parse(text: &str) -> Result<Self> {
        crate::syntax::parse_sequent(text)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root(&self) -> Name {
        self.vertices[0].name
    }

    /// Names in ascending order.
    pub fn names(&self) -> impl Iterator<Item = Name> + '_ {
        self.vertices.iter().map(|v| v.name)
    }

    pub fn contains(&self, w: Name) -> bool {
        self.index(w).is_some()
    }

    pub(crate) fn index(&self, w: Name) -> Option<usize> {
        self.vertices.binary_search_by_key(&w, |v| v.name).ok()
    }

    fn idx(&self, w: Name) -> Result<usize> {
        self.index(w).ok_or(Error::UnknownName(w))
    }

    pub(crate) fn name_at(&self, i: usize) -> Name {
        self.vertices[i].name
    }

    pub fn label(&self, w: Name) -> Result<&GentzenSequent> {
        Ok(&self.vertices[self.idx(w)?].label)
    }

    pub(crate) fn label_at(&self, i: usize) -> &GentzenSequent {
        &self.vertices[i].label
    }

    /// Parent name and the direction of the edge from the parent.
    pub fn parent(&self, w: Name) -> Result<Option<(Name, Direction)>> {
        let v = &self.vertices[self.idx(w)?];
        Ok(v.parent.map(|p| (self.vertices[p].name, v.dir)))
    }

    /// Children with their edge directions, in insertion order.
    pub fn children(&self, w: Name) -> Result<Vec<(Name, Direction)>> {
        let v = &self.vertices[self.idx(w)?];
        Ok(v.children.iter().map(|&c| (self.vertices[c].name, self.vertices[c].dir)).collect())
    }

    pub(crate) fn children_at(&self, i: usize) -> impl Iterator<Item = (usize, Direction)> + '_ {
        self.vertices[i].children.iter().map(move |&c| (c, self.vertices[c].dir))
    }

    /// All edges as (parent, child, direction).
    pub fn edges(&self) -> impl Iterator<Item = (Name, Name, Direction)> + '_ {
        self.vertices
            .iter()
            .filter_map(move |v| v.parent.map(|p| (self.vertices[p].name, v.name, v.dir)))
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    fn next_name(&self) -> Name {
        Name(self.vertices.last().map_or(0, |v| v.name.0 + 1))
    }

    fn push(&mut self, parent: usize, dir: Direction, label: Arc<GentzenSequent>) -> usize {
        let name = self.next_name();
        let i = self.vertices.len();
        self.vertices.push(Vertex {
            name,
            parent: Some(parent),
            dir,
            children: Vec::new(),
            label,
        });
        self.vertices[parent].children.push(i);
        i
    }

    /// Adds a child below `parent` under a fresh name and returns that name.
    pub fn add_child(&mut self, parent: Name, dir: Direction, label: GentzenSequent) -> Result<Name> {
        let p = self.idx(parent)?;
        let i = self.push(p, dir, Arc::new(label));
        Ok(self.vertices[i].name)
    }

    /// Adds a formula to one side of a vertex; returns true if it was new.
    pub fn insert(&mut self, w: Name, side: Side, f: Formula) -> Result<bool> {
        let i = self.idx(w)?;
        if self.vertices[i].label.side(side).contains(&f) {
            return Ok(false);
        }
        Ok(Arc::make_mut(&mut self.vertices[i].label).side_mut(side).insert(f))
    }

    /// Removes a formula from one side of a vertex; returns true if present.
    pub fn remove(&mut self, w: Name, side: Side, f: &Formula) -> Result<bool> {
        let i = self.idx(w)?;
        if !self.vertices[i].label.side(side).contains(f) {
            return Ok(false);
        }
        Ok(Arc::make_mut(&mut self.vertices[i].label).side_mut(side).remove(f))
    }

    /// Depths of all vertices, indexed like the internal vertex order.
    pub(crate) fn depths(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for i in 1..self.vertices.len() {
            d[i] = d[self.vertices[i].parent.expect("non-root")] + 1;
        }
        d
    }

    pub fn depth_of(&self, w: Name) -> Result<usize> {
        let mut i = self.idx(w)?;
        let mut depth = 0;
        while let Some(p) = self.vertices[i].parent {
            i = p;
            depth += 1;
        }
        Ok(depth)
    }

    pub fn height(&self) -> usize {
        self.depths().into_iter().max().unwrap_or(0)
    }

    /// max over vertices of the modal depth of its formulas plus its depth.
    pub fn modal_depth(&self) -> usize {
        self.depths()
            .into_iter()
            .zip(&self.vertices)
            .map(|(d, v)| d + v.label.modal_depth())
            .max()
            .unwrap_or(0)
    }

    pub fn project(&self, w: Name, side: Side) -> Result<&FormulaSet> {
        Ok(self.label(w)?.side(side))
    }

    /// Union of one side over all vertices: in(T) or out(T).
    pub fn formulas(&self, side: Side) -> BTreeSet<Formula> {
        self.vertices
            .iter()
            .flat_map(|v| v.label.side(side).iter().cloned())
            .collect()
    }

    fn graft(&mut self, at: usize, k: &SeqTree, from: usize) {
        for (c, dir) in k.children_at(from) {
            let new = self.push(at, dir, k.vertices[c].label.clone());
            self.graft(new, k, c);
        }
    }

    /// G ⊙ K: merges the roots and concatenates their nestings; the vertices
    /// of K other than its root receive fresh names.
    pub fn compose(&self, k: &SeqTree) -> SeqTree {
        let mut out = self.clone();
        Arc::make_mut(&mut out.vertices[0].label).merge(&k.vertices[0].label);
        out.graft(0, k, 0);
        out
    }

    /// G ◁_w K: composes the component at w with K.
    pub fn plug_at(&self, w: Name, k: &SeqTree) -> Result<SeqTree> {
        let i = self.idx(w)?;
        let mut out = self.clone();
        Arc::make_mut(&mut out.vertices[i].label).merge(&k.vertices[0].label);
        out.graft(i, k, 0);
        Ok(out)
    }

    /// G↓: every consequent emptied; shape, names and antecedents unchanged.
    pub fn strip_consequents(&self) -> SeqTree {
        let mut out = self.clone();
        for v in &mut out.vertices {
            if !v.label.consequent.is_empty() {
                Arc::make_mut(&mut v.label).consequent.clear();
            }
        }
        out
    }

    fn canonical_at(&self, i: usize) -> String {
        let v = &self.vertices[i];
        let mut nested: Vec<String> = v
            .children
            .iter()
            .map(|&c| format!("({})[{}]", self.vertices[c].dir, self.canonical_at(c)))
            .collect();
        nested.sort();
        render_component(&v.label, nested)
    }

    /// Text notation with nestings sorted; equal exactly for isomorphic trees.
    pub fn canonical(&self) -> String {
        self.canonical_at(0)
    }

    pub(crate) fn canonical_subtrees(&self) -> Vec<String> {
        (0..self.vertices.len()).map(|i| self.canonical_at(i)).collect()
    }

    pub fn isomorphic(&self, other: &SeqTree) -> bool {
        self.canonical() == other.canonical()
    }

    fn render_at(&self, i: usize) -> String {
        let v = &self.vertices[i];
        let nested = v
            .children
            .iter()
            .map(|&c| format!("({})[{}]", self.vertices[c].dir, self.render_at(c)))
            .collect();
        render_component(&v.label, nested)
    }

    /// Position of a vertex in the pre-order traversal used by the text
    /// notation, which is also the name the parser would assign it.
    pub fn preorder_position(&self, w: Name) -> Result<usize> {
        let target = self.idx(w)?;
        Ok(self.preorder().iter().position(|&i| i == target).expect("vertex is reachable"))
    }

    /// The vertex at a given pre-order position.
    pub fn at_preorder_position(&self, pos: usize) -> Option<Name> {
        self.preorder().get(pos).map(|&i| self.vertices[i].name)
    }

    fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.vertices.len());
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            out.push(i);
            stack.extend(self.vertices[i].children.iter().rev());
        }
        out
    }

    /// Graphviz rendering with vertex labels `name: Γ ⊢ Δ` and f/b edges.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph seqtree {\n  node [shape=box];\n");
        for v in &self.vertices {
            let label = v.label.to_string().replacen("|-", "⊢", 1);
            s.push_str(&format!("  n{} [label=\"{}: {}\"];\n", v.name, v.name, label));
        }
        for (p, c, d) in self.edges() {
            s.push_str(&format!("  n{p} -> n{c} [label=\"{d}\"];\n"));
        }
        s.push_str("}\n");
        s
    }
}

fn render_component(label: &GentzenSequent, nested: Vec<String>) -> String {
    let mut s = String::new();
    if !label.antecedent.is_empty() {
        s.push_str(&join(&label.antecedent));
        s.push(' ');
    }
    s.push_str("|-");
    let items: Vec<String> = label
        .consequent
        .iter()
        .map(|f| f.text().to_string())
        .chain(nested)
        .collect();
    if !items.is_empty() {
        s.push(' ');
        s.push_str(&items.join(", "));
    }
    s
}

impl PartialEq for SeqTree {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.isomorphic(other)
    }
}

impl Eq for SeqTree {}

impl fmt::Display for SeqTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_at(0))
    }
}

impl std::str::FromStr for SeqTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SeqTree::parse(s)
    }
}

/// The C-closure of a seq-tree: triples (from, to, direction) in sorted order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureRelation {
    pairs: Vec<(Name, Name, Direction)>,
}

impl ClosureRelation {
    pub fn new(t: &SeqTree, logic: Logic) -> Self {
        let mut pairs = Vec::new();
        for (w, u, d) in t.edges() {
            pairs.push((w, u, d));
            pairs.push((u, w, d.converse()));
            if logic.b {
                pairs.push((w, u, d.converse()));
                pairs.push((u, w, d));
            }
        }
        if logic.t {
            for w in t.names() {
                pairs.push((w, w, Direction::Forward));
                pairs.push((w, w, Direction::Backward));
            }
        }
        pairs.sort();
        pairs.dedup();
        ClosureRelation { pairs }
    }

    pub fn contains(&self, w: Name, d: Direction, u: Name) -> bool {
        self.pairs.binary_search(&(w, u, d)).is_ok()
    }

    pub fn pairs(&self) -> &[(Name, Name, Direction)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// All u with w ↠_d u, in ascending name order.
    pub fn targets(&self, w: Name, d: Direction) -> impl Iterator<Item = Name> + '_ {
        let start = self.pairs.partition_point(|&(a, _, _)| a < w);
        self.pairs[start..]
            .iter()
            .take_while(move |&&(a, _, _)| a == w)
            .filter(move |&&(_, _, e)| e == d)
            .map(|&(_, u, _)| u)
    }
}

pub fn depth_of(t: &SeqTree, w: Name) -> Result<usize> {
    t.depth_of(w)
}

pub fn sequent_modal_depth(t: &SeqTree) -> usize {
    t.modal_depth()
}

pub fn project(t: &SeqTree, w: Name, side: Side) -> Result<&FormulaSet> {
    t.project(w, side)
}

pub fn compose(g: &SeqTree, k: &SeqTree) -> SeqTree {
    g.compose(k)
}

pub fn plug_at(g: &SeqTree, w: Name, k: &SeqTree) -> Result<SeqTree> {
    g.plug_at(w, k)
}

pub fn strip_consequents(g: &SeqTree) -> SeqTree {
    g.strip_consequents()
}

pub fn c_closure(t: &SeqTree, logic: Logic) -> ClosureRelation {
    ClosureRelation::new(t, logic)
}

pub fn propagates(t: &SeqTree, logic: Logic, w: Name, d: Direction, u: Name) -> Result<bool> {
    t.idx(w)?;
    t.idx(u)?;
    Ok(ClosureRelation::new(t, logic).contains(w, d, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn st(s: &str) -> SeqTree {
        SeqTree::parse(s).unwrap()
    }

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn depths() {
        let t = st("|- (f)[p |- q]");
        assert_eq!(depth_of(&t, Name(0)).unwrap(), 0);
        assert_eq!(depth_of(&t, Name(1)).unwrap(), 1);
        assert_eq!(depth_of(&st("|- (f)[|- (f)[|-]]"), Name(2)).unwrap(), 2);
        assert_eq!(depth_of(&t, Name(7)), Err(Error::UnknownName(Name(7))));
    }

    #[test]
    fn modal_depths() {
        assert_eq!(sequent_modal_depth(&st("|- box (p -> q) | (r -> s)")), 1);
        assert_eq!(sequent_modal_depth(&st("|- (f)[p |- q]")), 1);
        assert_eq!(sequent_modal_depth(&st("|- (q -> r) | box (box (false -> false) | bbox false)")), 2);
        assert_eq!(sequent_modal_depth(&st("|-")), 0);
    }

    #[test]
    fn projections() {
        let t = st("|- (f)[p |- q]");
        let ant: Vec<_> = project(&t, Name(1), Side::Antecedent).unwrap().iter().cloned().collect();
        assert_eq!(ant, vec![f("p")]);
        assert!(project(&t, Name(0), Side::Consequent).unwrap().is_empty());
        let g4 = st("r |- s");
        assert!(project(&g4, Name(0), Side::Consequent).unwrap().contains(&f("s")));
    }

    #[test]
    fn composition() {
        assert_eq!(compose(&st("p |- q"), &st("r |- s")).to_string(), "p, r |- q, s");
        let two = compose(&st("|- (f)[|-]"), &st("|- (f)[|-]"));
        assert_eq!(two.to_string(), "|- (f)[|-], (f)[|-]");
        assert_eq!(two.len(), 3);
        assert_eq!(compose(&st("p |-"), &st("|- a")).to_string(), "p |- a");
    }

    #[test]
    fn plugging() {
        let g = st("|- a -> b");
        let k = st("a |- b");
        assert_eq!(plug_at(&g, Name(0), &k).unwrap().to_string(), "a |- a -> b, b");
        let h = plug_at(&st("|-"), Name(0), &st("|- (f)[a |-]")).unwrap();
        assert_eq!(h.to_string(), "|- (f)[a |-]");
        assert_eq!(h.names().collect::<Vec<_>>(), vec![Name(0), Name(1)]);
        let fig2 = st("|- (f)[|- box (false -> false), bbox false]");
        let left = plug_at(&fig2.strip_consequents(), Name(1), &st("|- (f)[|- false -> false]")).unwrap();
        assert_eq!(left, st("|- (f)[|- (f)[|- false -> false]]"));
        assert!(plug_at(&g, Name(3), &k).is_err());
    }

    #[test]
    fn stripping() {
        assert_eq!(strip_consequents(&st("p |- q, (f)[r |- s]")).to_string(), "p |- (f)[r |-]");
        assert_eq!(strip_consequents(&st("|- a")).to_string(), "|-");
        let companion = st("~box p, ~bbox q |- box p, bbox q, (f)[|- p], (b)[|-], (f)[|-]");
        assert_eq!(
            strip_consequents(&companion).to_string(),
            "bbox q -> false, box p -> false |- (f)[|-], (b)[|-], (f)[|-]"
        );
    }

    #[test]
    fn closure_clauses() {
        let t = st("|- (f)[|-]");
        let (w, u) = (Name(0), Name(1));
        let c = c_closure(&t, Logic::K);
        assert_eq!(c.pairs(), &[(w, u, Direction::Forward), (u, w, Direction::Backward)]);
        let tb = c_closure(&t, "TB".parse().unwrap());
        assert_eq!(tb.len(), 8);
        for (a, b) in [(w, w), (u, u), (w, u), (u, w)] {
            for d in Direction::BOTH {
                assert!(tb.contains(a, d, b));
            }
        }
        assert!(c_closure(&st("|-"), "B".parse().unwrap()).is_empty());
    }

    #[test]
    fn propagation_examples() {
        let t = st("|- (f)[|-]");
        let tb: Logic = "TB".parse().unwrap();
        let (w, u) = (Name(0), Name(1));
        assert!(propagates(&t, tb, w, Direction::Backward, w).unwrap());
        assert!(propagates(&t, tb, w, Direction::Backward, u).unwrap());
        assert!(!propagates(&t, Logic::K, w, Direction::Backward, u).unwrap());
        assert!(propagates(&t, Logic::K, u, Direction::Backward, w).unwrap());
    }

    #[test]
    fn text_round_trip_and_isomorphism() {
        let s = "p, q |- r, (f)[s |-], (b)[|- t]";
        assert_eq!(st(s).to_string(), s);
        assert_eq!(st("|- (f)[a |-], (b)[|-]"), st("|- (b)[|-], (f)[a |-]"));
        assert_ne!(st("|- (f)[a |-]"), st("|- (b)[a |-]"));
    }

    #[test]
    fn preorder_positions() {
        let t = compose(&st("|- (f)[|- (f)[|-]]"), &st("|- (b)[|-]"));
        let positions: Vec<usize> = t.names().map(|n| t.preorder_position(n).unwrap()).collect();
        assert_eq!(positions, vec![0, 1, 2, 3]);
        let g = plug_at(&t, Name(1), &st("|- (b)[a |-]")).unwrap();
        assert_eq!(g.at_preorder_position(3), Some(Name(4)));
    }

    #[test]
    fn dot_lists_vertices_and_edges() {
        let dot = st("p |- (f)[|- q]").to_dot();
        assert!(dot.contains("n0 [label=\"0: p ⊢\"]"));
        assert!(dot.contains("n0 -> n1 [label=\"f\"]"));
    }
}
