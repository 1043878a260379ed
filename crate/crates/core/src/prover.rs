use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formula::{Direction, Formula, Node};
use crate::logic::Logic;
use crate::morphism::{find_strong_morphism, Morphism};
use crate::sequent::{ClosureRelation, GentzenSequent, Name, SeqTree, Side};

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Rule names of the calculus plus the disjunctive branching rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleTag {
    Id,
    BotL,
    OrL,
    OrR,
    AndL,
    AndR,
    ImpL,
    ImpR,
    DiaL,
    BDiaL,
    DiaR,
    BDiaR,
    BoxL,
    BBoxL,
    BoxR,
    BBoxR,
    D,
    Db,
}

impl RuleTag {
    pub const ALL: [RuleTag; 18] = [
        RuleTag::Id,
        RuleTag::BotL,
        RuleTag::OrL,
        RuleTag::OrR,
        RuleTag::AndL,
        RuleTag::AndR,
        RuleTag::ImpL,
        RuleTag::ImpR,
        RuleTag::DiaL,
        RuleTag::BDiaL,
        RuleTag::DiaR,
        RuleTag::BDiaR,
        RuleTag::BoxL,
        RuleTag::BBoxL,
        RuleTag::BoxR,
        RuleTag::BBoxR,
        RuleTag::D,
        RuleTag::Db,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleTag::Id => "id",
            RuleTag::BotL => "botL",
            RuleTag::OrL => "orL",
            RuleTag::OrR => "orR",
            RuleTag::AndL => "andL",
            RuleTag::AndR => "andR",
            RuleTag::ImpL => "impL",
            RuleTag::ImpR => "impR",
            RuleTag::DiaL => "diaL",
            RuleTag::BDiaL => "bdiaL",
            RuleTag::DiaR => "diaR",
            RuleTag::BDiaR => "bdiaR",
            RuleTag::BoxL => "boxL",
            RuleTag::BBoxL => "bboxL",
            RuleTag::BoxR => "boxR",
            RuleTag::BBoxR => "bboxR",
            RuleTag::D => "d",
            RuleTag::Db => "db",
        }
    }

    pub fn diamond_left(d: Direction) -> RuleTag {
        match d {
            Direction::Forward => RuleTag::DiaL,
            Direction::Backward => RuleTag::BDiaL,
        }
    }

    pub fn diamond_right(d: Direction) -> RuleTag {
        match d {
            Direction::Forward => RuleTag::DiaR,
            Direction::Backward => RuleTag::BDiaR,
        }
    }

    pub fn box_left(d: Direction) -> RuleTag {
        match d {
            Direction::Forward => RuleTag::BoxL,
            Direction::Backward => RuleTag::BBoxL,
        }
    }

    pub fn box_right(d: Direction) -> RuleTag {
        match d {
            Direction::Forward => RuleTag::BoxR,
            Direction::Backward => RuleTag::BBoxR,
        }
    }

    /// Whether every premise must succeed (all rules but db).
    pub fn is_conjunctive(self) -> bool {
        self != RuleTag::Db
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RuleTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::MalformedProof(format!("unknown rule {s:?}")))
    }
}

/// One bottom-up rule application: the rule, the vertex holding the principal
/// formula, the formula itself, and the vertex the rule acts on when that
/// differs (propagation target or freshly created child).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleApp {
    pub tag: RuleTag,
    pub vertex: Name,
    pub formula: Option<Formula>,
    pub target: Option<Name>,
}

impl RuleApp {
    fn new(tag: RuleTag, vertex: Name, formula: Option<Formula>) -> Self {
        RuleApp {
            tag,
            vertex,
            formula,
            target: None,
        }
    }

    fn with_target(mut self, u: Name) -> Self {
        self.target = Some(u);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// Closed by id or ⊥L.
    Initial,
    /// Saturated with no output implication or box.
    Stable,
    /// Saturated leaf with a strong morphism into an ancestor.
    Repeat,
    /// A rule (possibly db) was applied.
    Inner,
}

#[derive(Debug, Clone)]
pub struct CtNode {
    pub sequent: SeqTree,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// The rule applied bottom-up at this node; the closing rule for initial
    /// leaves and `None` for stable leaves and repeats.
    pub rule: Option<RuleApp>,
    /// For db nodes, the ⊃R or [◦]R instance behind each premise.
    pub premise_rules: Vec<RuleApp>,
    pub kind: NodeKind,
    pub saturated: bool,
    /// True for T, false for F.
    pub label: bool,
}

/// The full search structure; nodes are stored in pre-order with the input at
/// index 0.
#[derive(Debug, Clone)]
pub struct ComputationTree {
    pub nodes: Vec<CtNode>,
}

impl ComputationTree {
    pub fn root(&self) -> &CtNode {
        &self.nodes[0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// (parent, child, rule tag) triples.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, RuleTag)> + '_ {
        self.nodes.iter().enumerate().flat_map(|(i, n)| {
            let tag = n.rule.as_ref().map(|r| r.tag);
            n.children.iter().map(move |&c| (i, c, tag.expect("inner nodes carry a rule")))
        })
    }

    pub fn count_tag(&self, tag: RuleTag) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Inner && n.rule.as_ref().map(|r| r.tag) == Some(tag))
            .count()
    }

    /// Pre-order indices from `i` back to the root.
    pub fn ancestors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        std::iter::successors(self.nodes[i].parent, move |&p| self.nodes[p].parent)
    }

    /// One line per node: `index rule_tag parent_index sequent_text`.
    pub fn trace_lines(&self) -> Vec<String> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let tag = match (n.kind, &n.rule) {
                    (NodeKind::Stable, _) => "stable".to_string(),
                    (NodeKind::Repeat, _) => "repeat".to_string(),
                    (_, Some(r)) => r.tag.to_string(),
                    (_, None) => "-".to_string(),
                };
                let parent = n.parent.map_or("-".to_string(), |p| p.to_string());
                format!("{i} {tag} {parent} {}", n.sequent)
            })
            .collect()
    }
}

/// A repeat leaf, its companion and the strong morphism between them.
#[derive(Debug, Clone)]
pub struct RepeatRecord {
    pub repeat: usize,
    pub companion: usize,
    pub morphism: Morphism,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub provable: bool,
    pub tree: ComputationTree,
    pub repeats: Vec<RepeatRecord>,
    pub logic: Logic,
    pub input_md: usize,
}

impl Verdict {
    pub fn input(&self) -> &SeqTree {
        &self.tree.root().sequent
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ProverConfig {
    /// Maximum number of computation-tree nodes.
    pub budget: usize,
    /// Worker threads for exploring db premises; 1 means sequential.
    pub workers: usize,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig {
            budget: DEFAULT_BUDGET,
            workers: 1,
        }
    }
}

fn with_formula(g: &SeqTree, w: Name, side: Side, f: &Formula) -> SeqTree {
    let mut out = g.clone();
    out.insert(w, side, f.clone()).expect("vertex exists");
    out
}

fn with_child(g: &SeqTree, w: Name, d: Direction, label: GentzenSequent) -> (SeqTree, Name) {
    let mut out = g.clone();
    let u = out.add_child(w, d, label).expect("vertex exists");
    (out, u)
}

/// The id or ⊥L instance closing `g`, if any. Both act within one vertex; ⊥L
/// is preferred at a vertex where both apply.
pub fn initial_rule(g: &SeqTree) -> Option<RuleApp> {
    let bottom = Formula::bottom();
    for w in g.names() {
        let label = g.label(w).expect("own name");
        if label.antecedent.contains(&bottom) {
            return Some(RuleApp::new(RuleTag::BotL, w, Some(bottom)));
        }
        if let Some(a) = label.antecedent.iter().find(|a| label.consequent.contains(a)) {
            return Some(RuleApp::new(RuleTag::Id, w, Some(a.clone())));
        }
    }
    None
}

pub fn is_initial(g: &SeqTree) -> bool {
    initial_rule(g).is_some()
}

/// The first applicable non-branching-on-choice rule in algorithm order
/// (∨L, ∨R, ∧L, ∧R, ⊃L, ⟨◦⟩L, ⟨◦⟩R, [◦]L, d) with its premises.
pub fn expansion_step(g: &SeqTree, logic: Logic, input_md: usize) -> Option<(RuleApp, Vec<SeqTree>)> {
    use Side::{Antecedent as In, Consequent as Out};
    let labels: Vec<(Name, &GentzenSequent)> = g.names().map(|w| (w, g.label(w).unwrap())).collect();

    for &(w, l) in &labels {
        for f in &l.antecedent {
            if let Node::Or(a, b) = f.node() {
                if !l.antecedent.contains(a) && !l.antecedent.contains(b) {
                    let app = RuleApp::new(RuleTag::OrL, w, Some(f.clone()));
                    return Some((app, vec![with_formula(g, w, In, a), with_formula(g, w, In, b)]));
                }
            }
        }
    }
    for &(w, l) in &labels {
        for f in &l.consequent {
            if let Node::Or(a, b) = f.node() {
                if !l.consequent.contains(a) || !l.consequent.contains(b) {
                    let app = RuleApp::new(RuleTag::OrR, w, Some(f.clone()));
                    let premise = with_formula(&with_formula(g, w, Out, a), w, Out, b);
                    return Some((app, vec![premise]));
                }
            }
        }
    }
    for &(w, l) in &labels {
        for f in &l.antecedent {
            if let Node::And(a, b) = f.node() {
                if !l.antecedent.contains(a) || !l.antecedent.contains(b) {
                    let app = RuleApp::new(RuleTag::AndL, w, Some(f.clone()));
                    let premise = with_formula(&with_formula(g, w, In, a), w, In, b);
                    return Some((app, vec![premise]));
                }
            }
        }
    }
    for &(w, l) in &labels {
        for f in &l.consequent {
            if let Node::And(a, b) = f.node() {
                if !l.consequent.contains(a) && !l.consequent.contains(b) {
                    let app = RuleApp::new(RuleTag::AndR, w, Some(f.clone()));
                    return Some((app, vec![with_formula(g, w, Out, a), with_formula(g, w, Out, b)]));
                }
            }
        }
    }
    for &(w, l) in &labels {
        for f in &l.antecedent {
            if let Node::Imp(a, b) = f.node() {
                if !l.consequent.contains(a) && !l.antecedent.contains(b) {
                    let app = RuleApp::new(RuleTag::ImpL, w, Some(f.clone()));
                    return Some((app, vec![with_formula(g, w, Out, a), with_formula(g, w, In, b)]));
                }
            }
        }
    }
    for &(w, l) in &labels {
        for f in &l.antecedent {
            if let Some((d, a)) = f.as_diamond() {
                let witnessed = g
                    .children(w)
                    .unwrap()
                    .into_iter()
                    .any(|(u, e)| e == d && g.label(u).unwrap().antecedent.contains(a));
                if !witnessed {
                    let (premise, u) = with_child(g, w, d, GentzenSequent::new([a.clone()], []));
                    let app = RuleApp::new(RuleTag::diamond_left(d), w, Some(f.clone())).with_target(u);
                    return Some((app, vec![premise]));
                }
            }
        }
    }
    let closure = ClosureRelation::new(g, logic);
    for &(w, l) in &labels {
        for f in &l.consequent {
            if let Some((d, a)) = f.as_diamond() {
                for u in closure.targets(w, d) {
                    if !g.label(u).unwrap().consequent.contains(a) {
                        let app = RuleApp::new(RuleTag::diamond_right(d), w, Some(f.clone())).with_target(u);
                        return Some((app, vec![with_formula(g, u, Out, a)]));
                    }
                }
            }
        }
    }
    for &(w, l) in &labels {
        for f in &l.antecedent {
            if let Some((d, a)) = f.as_box() {
                for u in closure.targets(w, d) {
                    if !g.label(u).unwrap().antecedent.contains(a) {
                        let app = RuleApp::new(RuleTag::box_left(d), w, Some(f.clone())).with_target(u);
                        return Some((app, vec![with_formula(g, u, In, a)]));
                    }
                }
            }
        }
    }
    if logic.d {
        let depths: Vec<usize> = g.names().map(|w| g.depth_of(w).unwrap()).collect();
        for (k, &(w, _)) in labels.iter().enumerate() {
            let has_forward_child = g
                .children(w)
                .unwrap()
                .iter()
                .any(|&(_, e)| e == Direction::Forward);
            if depths[k] <= input_md && !has_forward_child {
                let (premise, u) = with_child(g, w, Direction::Forward, GentzenSequent::default());
                return Some((RuleApp::new(RuleTag::D, w, None).with_target(u), vec![premise]));
            }
        }
    }
    None
}

pub fn is_saturated(g: &SeqTree, logic: Logic, input_md: usize) -> bool {
    !is_initial(g) && expansion_step(g, logic, input_md).is_none()
}

fn has_invertible_outputs(g: &SeqTree) -> bool {
    g.formulas(Side::Consequent)
        .iter()
        .any(|f| f.as_imp().is_some() || f.as_box().is_some())
}

pub fn is_stable(g: &SeqTree, logic: Logic, input_md: usize) -> bool {
    !has_invertible_outputs(g) && is_saturated(g, logic, input_md)
}

/// The nearest ancestor (list given nearest-first) admitting a strong
/// morphism from `g`, with its position in the list and the morphism.
pub fn is_repeat(g: &SeqTree, branch_ancestors: &[&SeqTree]) -> Option<(usize, Morphism)> {
    branch_ancestors
        .iter()
        .enumerate()
        .find_map(|(i, a)| find_strong_morphism(g, a).map(|m| (i, m)))
}

/// One premise of a db instance.
#[derive(Debug, Clone)]
pub struct DbPremise {
    pub sequent: SeqTree,
    pub principal: Formula,
    pub host: Name,
    pub rule: RuleApp,
}

fn db_premises_unchecked(g: &SeqTree) -> Vec<DbPremise> {
    let stripped = g.strip_consequents();
    let mut out = Vec::new();
    for w in g.names() {
        for f in &g.label(w).unwrap().consequent {
            if let Some((a, b)) = f.as_imp() {
                let mut t = stripped.clone();
                t.insert(w, Side::Antecedent, a.clone()).unwrap();
                t.insert(w, Side::Consequent, b.clone()).unwrap();
                out.push(DbPremise {
                    sequent: t,
                    principal: f.clone(),
                    host: w,
                    rule: RuleApp::new(RuleTag::ImpR, w, Some(f.clone())),
                });
            } else if let Some((d, a)) = f.as_box() {
                let (t, u) = with_child(&stripped, w, d, GentzenSequent::new([], [a.clone()]));
                out.push(DbPremise {
                    sequent: t,
                    principal: f.clone(),
                    host: w,
                    rule: RuleApp::new(RuleTag::box_right(d), w, Some(f.clone())).with_target(u),
                });
            }
        }
    }
    out
}

/// Premises of the db rule in canonical order (vertex, then formula).
pub fn db_premises(g: &SeqTree, logic: Logic, input_md: usize) -> Result<Vec<DbPremise>> {
    if !is_saturated(g, logic, input_md) {
        return Err(Error::Precondition("db applies only to saturated sequents".into()));
    }
    if !has_invertible_outputs(g) {
        return Err(Error::Precondition("db does not apply to stable sequents".into()));
    }
    Ok(db_premises_unchecked(g))
}

struct Built {
    sequent: SeqTree,
    rule: Option<RuleApp>,
    premise_rules: Vec<RuleApp>,
    kind: NodeKind,
    saturated: bool,
    label: bool,
    companion: Option<(usize, Morphism)>,
    children: Vec<Built>,
}

// Saturated ancestors of the current node, nearest first via `up`.
struct Branch<'a> {
    sequent: &'a SeqTree,
    depth: usize,
    up: Option<&'a Branch<'a>>,
}

struct Search {
    logic: Logic,
    input_md: usize,
    budget: usize,
    parallel: bool,
    created: AtomicUsize,
}

impl Search {
    fn explore(&self, g: SeqTree, saturated_above: Option<&Branch<'_>>, depth: usize) -> Result<Built> {
        if self.created.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        let leaf = |g: SeqTree, rule, kind, saturated, label| Built {
            sequent: g,
            rule,
            premise_rules: Vec::new(),
            kind,
            saturated,
            label,
            companion: None,
            children: Vec::new(),
        };
        if let Some(app) = initial_rule(&g) {
            return Ok(leaf(g, Some(app), NodeKind::Initial, false, true));
        }
        if let Some((app, premises)) = expansion_step(&g, self.logic, self.input_md) {
            let children = premises
                .into_iter()
                .map(|p| self.explore(p, saturated_above, depth + 1))
                .collect::<Result<Vec<_>>>()?;
            let label = children.iter().all(|c| c.label);
            return Ok(Built {
                sequent: g,
                rule: Some(app),
                premise_rules: Vec::new(),
                kind: NodeKind::Inner,
                saturated: false,
                label,
                companion: None,
                children,
            });
        }
        if !has_invertible_outputs(&g) {
            return Ok(leaf(g, None, NodeKind::Stable, true, false));
        }
        let mut cursor = saturated_above;
        while let Some(b) = cursor {
            if let Some(m) = find_strong_morphism(&g, b.sequent) {
                let mut node = leaf(g, None, NodeKind::Repeat, true, false);
                node.companion = Some((b.depth, m));
                return Ok(node);
            }
            cursor = b.up;
        }
        let premises = db_premises_unchecked(&g);
        let here = Branch {
            sequent: &g,
            depth,
            up: saturated_above,
        };
        let (trees, rules): (Vec<SeqTree>, Vec<RuleApp>) =
            premises.into_iter().map(|p| (p.sequent, p.rule)).unzip();
        let children = if self.parallel && trees.len() > 1 {
            trees
                .into_par_iter()
                .map(|p| self.explore(p, Some(&here), depth + 1))
                .collect::<Result<Vec<_>>>()?
        } else {
            trees
                .into_iter()
                .map(|p| self.explore(p, Some(&here), depth + 1))
                .collect::<Result<Vec<_>>>()?
        };
        let label = children.iter().any(|c| c.label);
        let root = g.root();
        Ok(Built {
            sequent: g,
            rule: Some(RuleApp::new(RuleTag::Db, root, None)),
            premise_rules: rules,
            kind: NodeKind::Inner,
            saturated: true,
            label,
            companion: None,
            children,
        })
    }
}

fn flatten(
    built: Built,
    parent: Option<usize>,
    path: &mut Vec<usize>,
    nodes: &mut Vec<CtNode>,
    repeats: &mut Vec<RepeatRecord>,
) {
    let index = nodes.len();
    nodes.push(CtNode {
        sequent: built.sequent,
        parent,
        children: Vec::new(),
        rule: built.rule,
        premise_rules: built.premise_rules,
        kind: built.kind,
        saturated: built.saturated,
        label: built.label,
    });
    if let Some(p) = parent {
        nodes[p].children.push(index);
    }
    if let Some((depth, morphism)) = built.companion {
        repeats.push(RepeatRecord {
            repeat: index,
            companion: path[depth],
            morphism,
        });
    }
    path.push(index);
    for child in built.children {
        flatten(child, Some(index), path, nodes, repeats);
    }
    path.pop();
}

/// Runs the decision procedure with the default configuration.
pub fn prove(input: &SeqTree, logic: Logic) -> Result<Verdict> {
    prove_with(input, logic, &ProverConfig::default())
}

pub fn prove_with(input: &SeqTree, logic: Logic, config: &ProverConfig) -> Result<Verdict> {
    let input_md = input.modal_depth();
    let search = Search {
        logic,
        input_md,
        budget: config.budget,
        parallel: config.workers > 1,
        created: AtomicUsize::new(0),
    };
    let built = if search.parallel {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .stack_size(64 << 20)
            .build()
            .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
        pool.install(|| search.explore(input.clone(), None, 0))?
    } else {
        search.explore(input.clone(), None, 0)?
    };
    let mut nodes = Vec::new();
    let mut repeats = Vec::new();
    flatten(built, None, &mut Vec::new(), &mut nodes, &mut repeats);
    Ok(Verdict {
        provable: nodes[0].label,
        tree: ComputationTree { nodes },
        repeats,
        logic,
        input_md,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> SeqTree {
        SeqTree::parse(s).unwrap()
    }

    #[test]
    fn initial_sequents() {
        assert!(is_initial(&st("p |- p")));
        assert!(is_initial(&st("false |-")));
        assert!(!is_initial(&st("p |- (f)[|- p]")));
    }

    #[test]
    fn saturation() {
        assert!(is_saturated(&st("|- p -> q"), Logic::K, 1));
        assert!(!is_saturated(&st("p |- p"), Logic::K, 0));
        assert!(is_saturated(&st("|- (f)[p |- q]"), Logic::K, 1));
        assert!(!is_saturated(&st("|- (f)[p |- q]"), "D".parse().unwrap(), 1));
    }

    #[test]
    fn stability() {
        assert!(is_stable(&st("q |- r"), Logic::K, 0));
        assert!(!is_stable(&st("|- p -> q"), Logic::K, 1));
        assert!(is_stable(&st("|- (f)[|- (b)[|- false]]"), Logic::K, 2));
    }

    #[test]
    fn repeat_search() {
        let g = st("a |- (f)[|-], (f)[|-]");
        assert!(is_repeat(&g, &[]).is_none());
        let far = st("a |- (f)[|-]");
        let near = st("b |-");
        let (i, m) = is_repeat(&g, &[&near, &far]).unwrap();
        assert_eq!(i, 1);
        assert_eq!(m.get(Name(2)), Some(Name(1)));
        assert!(is_repeat(&g, &[&near]).is_none());
    }

    fn premise_texts(g: &SeqTree) -> Vec<String> {
        db_premises(g, Logic::K, g.modal_depth())
            .unwrap()
            .into_iter()
            .map(|p| p.sequent.to_string())
            .collect()
    }

    #[test]
    fn db_premise_order() {
        assert_eq!(
            premise_texts(&st("|- box (p -> q), r -> s")),
            vec!["|- (f)[|- p -> q]", "r |- s"]
        );
        assert_eq!(
            premise_texts(&st("a |- b -> c, (f)[d, e |- box f, bbox g]")),
            vec![
                "a, b |- c, (f)[d, e |-]",
                "a |- (f)[d, e |- (b)[|- g]]",
                "a |- (f)[d, e |- (f)[|- f]]",
            ]
        );
        let fig2 = st("|- (f)[|- box (false -> false), bbox false]");
        let got = premise_texts(&fig2);
        assert_eq!(got.len(), 2);
        assert!(got.contains(&"|- (f)[|- (f)[|- false -> false]]".to_string()));
        assert!(got.contains(&"|- (f)[|- (b)[|- false]]".to_string()));
    }

    #[test]
    fn db_preconditions() {
        assert!(db_premises(&st("p |- p -> q"), Logic::K, 0).is_ok());
        assert!(db_premises(&st("p |- p"), Logic::K, 0).is_err());
        assert!(db_premises(&st("q |- r"), Logic::K, 0).is_err());
    }

    #[test]
    fn small_verdicts() {
        let v = prove(&st("|- p -> p"), Logic::K).unwrap();
        assert!(v.provable);
        let v = prove(&st("|- false"), Logic::K).unwrap();
        assert!(!v.provable);
        assert_eq!(v.tree.len(), 1);
        assert_eq!(v.tree.root().kind, NodeKind::Stable);
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = ProverConfig { budget: 2, workers: 1 };
        let err = prove_with(&st("|- box (p -> q) | (r -> s)"), Logic::K, &cfg).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded(2));
    }

    #[test]
    fn parallel_matches_sequential() {
        let input = st("~box p, ~bbox q |-");
        let seq = prove(&input, Logic::K).unwrap();
        let par = prove_with(&input, Logic::K, &ProverConfig { budget: DEFAULT_BUDGET, workers: 4 }).unwrap();
        assert_eq!(seq.tree.trace_lines(), par.tree.trace_lines());
        assert_eq!(seq.repeats.len(), par.repeats.len());
    }

    #[test]
    fn rule_names_round_trip() {
        for t in RuleTag::ALL {
            assert_eq!(t.name().parse::<RuleTag>().unwrap(), t);
        }
    }
}
