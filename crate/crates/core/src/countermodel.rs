use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Formula, Node};
use crate::logic::Logic;
use crate::morphism::Morphism;
use crate::prover::Verdict;
use crate::sequent::{ClosureRelation, Name, SeqTree, Side};

/// A failed node of the computation tree kept in the blueprint.
#[derive(Debug, Clone)]
pub struct BlueprintNode {
    /// Index in the computation tree.
    pub ct_index: usize,
    pub sequent: SeqTree,
    pub saturated: bool,
    /// Blueprint position of the parent.
    pub parent: Option<usize>,
}

/// The F-labelled part of a failed run reachable from the root, enumerated in
/// pre-order; a node's position in `nodes` is its renaming index.
#[derive(Debug, Clone)]
pub struct Blueprint {
    pub nodes: Vec<BlueprintNode>,
    /// Repeats inside the blueprint: (repeat position, companion position,
    /// strong morphism).
    pub repeats: Vec<(usize, usize, Morphism)>,
    pub logic: Logic,
    pub input_md: usize,
}

impl Blueprint {
    /// Parent-child pairs of positions.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| n.parent.map(|p| (p, i)))
            .collect()
    }

    pub fn saturated_positions(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].saturated).collect()
    }

    /// The first saturated node in pre-order: no db step precedes it, so it
    /// still carries the input's formulas.
    pub fn first_saturated(&self) -> Option<usize> {
        self.nodes.iter().position(|n| n.saturated)
    }

    fn nearest_saturated_ancestor(&self, i: usize) -> Option<usize> {
        let mut cur = self.nodes[i].parent;
        while let Some(p) = cur {
            if self.nodes[p].saturated {
                return Some(p);
            }
            cur = self.nodes[p].parent;
        }
        None
    }
}

pub fn build_blueprint(v: &Verdict) -> Result<Blueprint> {
    if v.provable {
        return Err(Error::Precondition("a provable input has no blueprint".into()));
    }
    let ct = &v.tree;
    let mut nodes = Vec::new();
    let mut position = HashMap::new();
    let mut stack = vec![(0usize, None)];
    while let Some((i, parent)) = stack.pop() {
        position.insert(i, nodes.len());
        let here = nodes.len();
        nodes.push(BlueprintNode {
            ct_index: i,
            sequent: ct.nodes[i].sequent.clone(),
            saturated: ct.nodes[i].saturated,
            parent,
        });
        for &c in ct.nodes[i].children.iter().rev() {
            if !ct.nodes[c].label {
                stack.push((c, Some(here)));
            }
        }
    }
    let repeats = v
        .repeats
        .iter()
        .filter_map(|r| {
            let (&a, &b) = (position.get(&r.repeat)?, position.get(&r.companion)?);
            Some((a, b, r.morphism.clone()))
        })
        .collect();
    Ok(Blueprint {
        nodes,
        repeats,
        logic: v.logic,
        input_md: v.input_md,
    })
}

/// A world: a vertex name paired with the position of its blueprint node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct World {
    pub name: Name,
    pub index: usize,
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.name, self.index)
    }
}

/// A finite bi-relational model. Relations are stored as sorted pairs of
/// positions into `worlds`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    pub worlds: Vec<World>,
    pub leq: BTreeSet<(usize, usize)>,
    pub r: BTreeSet<(usize, usize)>,
    pub valuation: Vec<BTreeSet<String>>,
    pub logic: Logic,
}

impl KripkeModel {
    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn position(&self, w: World) -> Option<usize> {
        self.worlds.iter().position(|&x| x == w)
    }

    fn rows(&self, pairs: &BTreeSet<(usize, usize)>, converse: bool) -> Vec<FixedBitSet> {
        let n = self.worlds.len();
        let mut rows = vec![FixedBitSet::with_capacity(n); n];
        for &(a, b) in pairs {
            let (a, b) = if converse { (b, a) } else { (a, b) };
            rows[a].insert(b);
        }
        rows
    }
}

/// Pairs ((x,i),(y,j)) generated by natural and repeat morphisms, closed
/// reflexively and transitively, over the given worlds.
pub fn morphic_reachability(bp: &Blueprint, worlds: &[World]) -> BTreeSet<(usize, usize)> {
    let pos: HashMap<World, usize> = worlds.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); worlds.len()];
    let mut link = |a: World, b: World| {
        if let (Some(&x), Some(&y)) = (pos.get(&a), pos.get(&b)) {
            succ[x].push(y);
        }
    };
    // Natural edges: names persist along a branch, so linking each saturated
    // node to its nearest saturated ancestor generates all of them.
    for j in bp.saturated_positions() {
        if let Some(i) = bp.nearest_saturated_ancestor(j) {
            for x in bp.nodes[i].sequent.names() {
                link(World { name: x, index: i }, World { name: x, index: j });
            }
        }
    }
    for (r, c, m) in &bp.repeats {
        for (x, y) in m.iter() {
            link(World { name: x, index: *r }, World { name: y, index: *c });
        }
    }
    let mut out = BTreeSet::new();
    for start in 0..worlds.len() {
        let mut seen = FixedBitSet::with_capacity(worlds.len());
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(a) = stack.pop() {
            out.insert((start, a));
            for &b in &succ[a] {
                if !seen.put(b) {
                    stack.push(b);
                }
            }
        }
    }
    out
}

/// Builds the counter-model of a failed run from its blueprint.
pub fn extract_model(bp: &Blueprint) -> KripkeModel {
    let mut worlds = Vec::new();
    for i in bp.saturated_positions() {
        for x in bp.nodes[i].sequent.names() {
            worlds.push(World { name: x, index: i });
        }
    }
    let pos: HashMap<World, usize> = worlds.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let leq = morphic_reachability(bp, &worlds);
    let mut r = BTreeSet::new();
    let mut valuation = vec![BTreeSet::new(); worlds.len()];
    for i in bp.saturated_positions() {
        let t = &bp.nodes[i].sequent;
        let at = |x: Name| pos[&World { name: x, index: i }];
        for &(x, y, d) in ClosureRelation::new(t, bp.logic).pairs() {
            if d == crate::formula::Direction::Forward {
                r.insert((at(x), at(y)));
            }
        }
        if bp.logic.d {
            for x in t.names() {
                if t.depth_of(x).expect("own name") == bp.input_md + 1 {
                    r.insert((at(x), at(x)));
                }
            }
        }
        for x in t.names() {
            for f in t.project(x, Side::Antecedent).expect("own name") {
                if let Node::Atom(p) = f.node() {
                    valuation[at(x)].insert(p.clone());
                }
            }
        }
    }
    KripkeModel {
        worlds,
        leq,
        r,
        valuation,
        logic: bp.logic,
    }
}

/// Blueprint and model of a failed run.
pub fn countermodel(v: &Verdict) -> Result<(Blueprint, KripkeModel)> {
    let bp = build_blueprint(v)?;
    let m = extract_model(&bp);
    Ok((bp, m))
}

/// The first frame or model condition a structure violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrameViolation {
    NotReflexive(usize),
    NotTransitive(usize, usize, usize),
    F1 { w: usize, w2: usize, v: usize },
    F2 { w: usize, v: usize, v2: usize },
    NotMonotone { w: usize, u: usize, atom: String },
    T(usize),
    B(usize, usize),
    D(usize),
    OutOfRange,
}

impl fmt::Display for FrameViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameViolation::NotReflexive(w) => write!(f, "world {w} is not ≤-reflexive"),
            FrameViolation::NotTransitive(a, b, c) => write!(f, "≤ is not transitive at {a} ≤ {b} ≤ {c}"),
            FrameViolation::F1 { w, w2, v } => write!(f, "(F1) fails for {w} ≤ {w2} and {w} R {v}"),
            FrameViolation::F2 { w, v, v2 } => write!(f, "(F2) fails for {w} R {v} and {v} ≤ {v2}"),
            FrameViolation::NotMonotone { w, u, atom } => {
                write!(f, "valuation of {atom} is not monotone from {w} to {u}")
            }
            FrameViolation::T(w) => write!(f, "(T) fails at {w}"),
            FrameViolation::B(w, u) => write!(f, "(B) fails for {w} R {u}"),
            FrameViolation::D(w) => write!(f, "(D) fails at {w}"),
            FrameViolation::OutOfRange => write!(f, "a relation mentions an unknown world"),
        }
    }
}

pub fn frame_violation(m: &KripkeModel, logic: Logic) -> Option<FrameViolation> {
    let n = m.worlds.len();
    if m.valuation.len() != n || m.leq.iter().chain(m.r.iter()).any(|&(a, b)| a >= n || b >= n) {
        return Some(FrameViolation::OutOfRange);
    }
    let up = m.rows(&m.leq, false);
    let down = m.rows(&m.leq, true);
    let succ = m.rows(&m.r, false);
    let pred = m.rows(&m.r, true);
    for w in 0..n {
        if !up[w].contains(w) {
            return Some(FrameViolation::NotReflexive(w));
        }
    }
    for a in 0..n {
        for b in up[a].ones() {
            if let Some(c) = up[b].difference(&up[a]).next() {
                return Some(FrameViolation::NotTransitive(a, b, c));
            }
        }
    }
    for &(w, w2) in &m.leq {
        for v in succ[w].ones() {
            if succ[w2].is_disjoint(&up[v]) {
                return Some(FrameViolation::F1 { w, w2, v });
            }
        }
    }
    for &(v, v2) in &m.leq {
        for w in pred[v].ones() {
            // need w' ≥ w with w' R v2
            if pred[v2].is_disjoint(&up[w]) {
                return Some(FrameViolation::F2 { w, v, v2 });
            }
        }
    }
    let _ = down;
    for &(w, u) in &m.leq {
        if let Some(atom) = m.valuation[w].difference(&m.valuation[u]).next() {
            return Some(FrameViolation::NotMonotone {
                w,
                u,
                atom: atom.clone(),
            });
        }
    }
    for w in 0..n {
        if logic.t && !succ[w].contains(w) {
            return Some(FrameViolation::T(w));
        }
        if logic.d && succ[w].is_clear() {
            return Some(FrameViolation::D(w));
        }
        if logic.b {
            if let Some(u) = succ[w].ones().find(|&u| !succ[u].contains(w)) {
                return Some(FrameViolation::B(w, u));
            }
        }
    }
    None
}

pub fn check_frame_conditions(m: &KripkeModel, logic: Logic) -> bool {
    frame_violation(m, logic).is_none()
}

/// Evaluates formulas on a model, caching the extension of every formula seen.
pub struct Evaluator<'a> {
    model: &'a KripkeModel,
    up: Vec<FixedBitSet>,
    succ: Vec<FixedBitSet>,
    pred: Vec<FixedBitSet>,
    cache: HashMap<Formula, FixedBitSet>,
}

impl<'a> Evaluator<'a> {
    pub fn new(model: &'a KripkeModel) -> Self {
        Evaluator {
            model,
            up: model.rows(&model.leq, false),
            succ: model.rows(&model.r, false),
            pred: model.rows(&model.r, true),
            cache: HashMap::new(),
        }
    }

    /// The set of worlds satisfying `a`.
    pub fn extension(&mut self, a: &Formula) -> FixedBitSet {
        if let Some(s) = self.cache.get(a) {
            return s.clone();
        }
        let n = self.model.worlds.len();
        let mut out = FixedBitSet::with_capacity(n);
        // Worlds all of whose ≤-successors lie in `good`.
        let all_up_in = |up: &[FixedBitSet], good: &FixedBitSet, out: &mut FixedBitSet| {
            for w in 0..n {
                out.set(w, up[w].is_subset(good));
            }
        };
        match a.node() {
            Node::Atom(p) => {
                for w in 0..n {
                    out.set(w, self.model.valuation[w].contains(p));
                }
            }
            Node::Bottom => {}
            Node::And(x, y) => {
                out = self.extension(x);
                out.intersect_with(&self.extension(y));
            }
            Node::Or(x, y) => {
                out = self.extension(x);
                out.union_with(&self.extension(y));
            }
            Node::Imp(x, y) => {
                let mut good = self.extension(x);
                good.toggle_range(..);
                good.union_with(&self.extension(y));
                all_up_in(&self.up, &good, &mut out);
            }
            Node::Dia(x) => {
                let ex = self.extension(x);
                for w in 0..n {
                    out.set(w, !self.succ[w].is_disjoint(&ex));
                }
            }
            Node::BDia(x) => {
                let ex = self.extension(x);
                for w in 0..n {
                    out.set(w, !self.pred[w].is_disjoint(&ex));
                }
            }
            Node::Box(x) | Node::BBox(x) => {
                let ex = self.extension(x);
                let rel = if matches!(a.node(), Node::Box(_)) { &self.succ } else { &self.pred };
                let mut good = FixedBitSet::with_capacity(n);
                for u in 0..n {
                    good.set(u, rel[u].is_subset(&ex));
                }
                all_up_in(&self.up, &good, &mut out);
            }
        }
        self.cache.insert(a.clone(), out.clone());
        out
    }

    pub fn holds(&mut self, w: usize, a: &Formula) -> bool {
        self.extension(a).contains(w)
    }
}

pub fn eval_formula(m: &KripkeModel, w: World, a: &Formula) -> Result<bool> {
    let i = m
        .position(w)
        .ok_or_else(|| Error::MalformedModel(format!("unknown world {w}")))?;
    Ok(Evaluator::new(m).holds(i, a))
}

/// Checks the frame conditions and that the worlds of blueprint node `i`
/// force every antecedent formula and refute every consequent formula of
/// `t`, whose vertex names are read at index `i`.
fn falsifies_at(ev: &mut Evaluator<'_>, t: &SeqTree, i: usize) -> std::result::Result<(), String> {
    for x in t.names() {
        let w = World { name: x, index: i };
        let p = ev
            .model
            .position(w)
            .ok_or_else(|| format!("world {w} is missing"))?;
        for a in t.project(x, Side::Antecedent).expect("own name") {
            if !ev.holds(p, a) {
                return Err(format!("antecedent formula {a} fails at {w}"));
            }
        }
        for a in t.project(x, Side::Consequent).expect("own name") {
            if ev.holds(p, a) {
                return Err(format!("consequent formula {a} holds at {w}"));
            }
        }
    }
    Ok(())
}

/// Explains why a model is not a counter-model to `input`, if it is not.
pub fn countermodel_failure(m: &KripkeModel, bp: &Blueprint, input: &SeqTree) -> Option<String> {
    if let Some(v) = frame_violation(m, bp.logic) {
        return Some(v.to_string());
    }
    let Some(s0) = bp.first_saturated() else {
        return Some("the blueprint has no saturated node".into());
    };
    let mut ev = Evaluator::new(m);
    falsifies_at(&mut ev, &bp.nodes[s0].sequent, s0)
        .and_then(|_| falsifies_at(&mut ev, input, s0))
        .err()
}

/// Frame conditions hold and the first saturated node, and with it the
/// input, is falsified at its worlds.
pub fn verify_countermodel(m: &KripkeModel, bp: &Blueprint, input: &SeqTree) -> bool {
    countermodel_failure(m, bp, input).is_none()
}

/// The truth lemma over every saturated blueprint node.
pub fn truth_lemma_failure(m: &KripkeModel, bp: &Blueprint) -> Option<String> {
    let mut ev = Evaluator::new(m);
    bp.saturated_positions()
        .into_iter()
        .find_map(|i| falsifies_at(&mut ev, &bp.nodes[i].sequent, i).err().map(|e| format!("node {i}: {e}")))
}

/// Persistence: every formula true at a world stays true at its ≤-successors.
pub fn persistence_failure<'f>(m: &KripkeModel, formulas: impl IntoIterator<Item = &'f Formula>) -> Option<Formula> {
    let mut ev = Evaluator::new(m);
    formulas.into_iter().find(|a| {
        let ext = ev.extension(a);
        m.leq.iter().any(|&(w, u)| ext.contains(w) && !ext.contains(u))
    }).cloned()
}

#[derive(Serialize, Deserialize)]
struct ValuationJson {
    world: usize,
    atoms: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    logic: String,
    worlds: Vec<World>,
    leq: Vec<(usize, usize)>,
    #[serde(rename = "R")]
    r: Vec<(usize, usize)>,
    valuation: Vec<ValuationJson>,
}

pub fn model_to_json(m: &KripkeModel) -> String {
    let j = ModelJson {
        logic: m.logic.to_string(),
        worlds: m.worlds.clone(),
        leq: m.leq.iter().copied().collect(),
        r: m.r.iter().copied().collect(),
        valuation: m
            .valuation
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_empty())
            .map(|(w, v)| ValuationJson {
                world: w,
                atoms: v.iter().cloned().collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&j).expect("model JSON serializes")
}

pub fn model_from_json(text: &str) -> Result<KripkeModel> {
    let j: ModelJson = serde_json::from_str(text).map_err(|e| Error::MalformedModel(e.to_string()))?;
    let mut valuation = vec![BTreeSet::new(); j.worlds.len()];
    for v in j.valuation {
        let slot = valuation
            .get_mut(v.world)
            .ok_or_else(|| Error::MalformedModel(format!("unknown world {}", v.world)))?;
        slot.extend(v.atoms);
    }
    Ok(KripkeModel {
        worlds: j.worlds,
        leq: j.leq.into_iter().collect(),
        r: j.r.into_iter().collect(),
        valuation,
        logic: j.logic.parse()?,
    })
}

/// Graphviz rendering: solid R edges and dotted ≤ edges without reflexive or
/// transitively implied pairs.
pub fn model_to_dot(m: &KripkeModel) -> String {
    let mut s = String::from("digraph model {\n");
    for (i, w) in m.worlds.iter().enumerate() {
        let atoms: Vec<&str> = m.valuation[i].iter().map(String::as_str).collect();
        let label = if atoms.is_empty() {
            w.to_string()
        } else {
            format!("{w}\\n{}", atoms.join(", "))
        };
        s.push_str(&format!("  w{i} [label=\"{label}\"];\n"));
    }
    for &(a, b) in &m.r {
        s.push_str(&format!("  w{a} -> w{b};\n"));
    }
    let mut between: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for &(a, b) in &m.leq {
        between.entry(a).or_default().insert(b);
    }
    for &(a, b) in &m.leq {
        let implied = between[&a]
            .iter()
            .any(|&c| c != a && c != b && between.get(&c).is_some_and(|s| s.contains(&b)));
        if a != b && !implied {
            s.push_str(&format!("  w{a} -> w{b} [style=dotted];\n"));
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::{is_saturated, prove};

    fn st(s: &str) -> SeqTree {
        SeqTree::parse(s).unwrap()
    }

    fn chain(p_at_top: bool) -> KripkeModel {
        KripkeModel {
            worlds: vec![World { name: Name(0), index: 0 }, World { name: Name(1), index: 0 }],
            leq: [(0, 0), (0, 1), (1, 1)].into_iter().collect(),
            r: BTreeSet::new(),
            valuation: vec![BTreeSet::new(), if p_at_top { ["p".to_string()].into() } else { BTreeSet::new() }],
            logic: Logic::K,
        }
    }

    #[test]
    fn single_stable_root() {
        let v = prove(&st("|- p"), Logic::K).unwrap();
        let (bp, m) = countermodel(&v).unwrap();
        assert_eq!(bp.nodes.len(), 1);
        assert_eq!(bp.saturated_positions(), vec![0]);
        assert_eq!(m.len(), 1);
        assert!(verify_countermodel(&m, &bp, v.input()));
    }

    #[test]
    fn empty_sequent_gives_one_world() {
        let v = prove(&st("|-"), Logic::K).unwrap();
        let (_, m) = countermodel(&v).unwrap();
        assert_eq!(m.len(), 1);
        assert!(m.r.is_empty());
        assert!(m.valuation[0].is_empty());
    }

    #[test]
    fn blueprint_saturation_matches_definition() {
        let v = prove(&st("~box p, ~bbox q |-"), Logic::K).unwrap();
        let bp = build_blueprint(&v).unwrap();
        for n in &bp.nodes {
            assert_eq!(n.saturated, is_saturated(&n.sequent, Logic::K, v.input_md));
        }
        assert!(build_blueprint(&prove(&st("p |- p"), Logic::K).unwrap()).is_err());
    }

    #[test]
    fn excluded_middle_chain() {
        let v = prove(&st("|- p | (p -> false)"), Logic::K).unwrap();
        let (bp, m) = countermodel(&v).unwrap();
        assert!(verify_countermodel(&m, &bp, v.input()));
        assert_eq!(m.len(), 2);
        let (low, high) = (0, 1);
        assert!(m.leq.contains(&(low, high)));
        assert!(m.valuation[low].is_empty());
        assert_eq!(m.valuation[high], ["p".to_string()].into());
    }

    #[test]
    fn frame_condition_failures() {
        let mut m = chain(true);
        assert!(check_frame_conditions(&m, Logic::K));
        assert!(!check_frame_conditions(&m, "T".parse().unwrap()));
        assert!(!check_frame_conditions(&m, "D".parse().unwrap()));
        m.leq.remove(&(1, 1));
        assert_eq!(frame_violation(&m, Logic::K), Some(FrameViolation::NotReflexive(1)));
        let mut bad = chain(true);
        bad.valuation.swap(0, 1);
        assert!(matches!(frame_violation(&bad, Logic::K), Some(FrameViolation::NotMonotone { .. })));
        let mut f1 = chain(false);
        f1.r.insert((0, 0));
        assert!(matches!(frame_violation(&f1, Logic::K), Some(FrameViolation::F1 { .. })));
    }

    #[test]
    fn evaluation_clauses() {
        let m = chain(true);
        let ev = |w: u32, s: &str| eval_formula(&m, World { name: Name(w), index: 0 }, &Formula::parse(s).unwrap()).unwrap();
        assert!(!ev(0, "p"));
        assert!(ev(1, "p"));
        assert!(!ev(0, "p | (p -> false)"));
        assert!(ev(0, "(p -> false) -> false"));
        assert!(!ev(0, "false"));
        assert!(ev(0, "box false"));
        assert!(!ev(0, "dia (p -> p)"));
        assert!(eval_formula(&m, World { name: Name(5), index: 0 }, &Formula::bottom()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let v = prove(&st("|- box (p -> q) | (r -> s)"), Logic::K).unwrap();
        let (_, m) = countermodel(&v).unwrap();
        let json = model_to_json(&m);
        assert_eq!(model_from_json(&json).unwrap(), m);
        assert!(json.contains("\"R\""));
    }

    #[test]
    fn dot_marks_order_edges_dotted() {
        let dot = model_to_dot(&chain(true));
        assert!(dot.contains("w0 -> w1 [style=dotted]"));
        assert!(!dot.contains("w0 -> w0"));
    }
}
