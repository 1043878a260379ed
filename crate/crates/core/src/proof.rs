use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Direction, Formula, Node};
use crate::logic::Logic;
use crate::prover::{NodeKind, RuleApp, RuleTag, Verdict};
use crate::sequent::{ClosureRelation, GentzenSequent, Name, SeqTree, Side};

/// One inference: the conclusion, its rule, the premises (indices into the
/// proof), and the principal vertex and formula.
#[derive(Debug, Clone)]
pub struct ProofNode {
    pub sequent: SeqTree,
    pub rule: RuleTag,
    pub children: Vec<usize>,
    pub principal_vertex: Name,
    pub principal_formula: Option<Formula>,
}

/// A finite derivation stored in pre-order with the end sequent at index 0.
#[derive(Debug, Clone)]
pub struct Proof {
    pub nodes: Vec<ProofNode>,
}

/// The first node of a proof that is not a correct rule instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure {
    pub node: usize,
    pub reason: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {}: {}", self.node, self.reason)
    }
}

impl std::error::Error for CheckFailure {}

impl Proof {
    pub fn root(&self) -> &ProofNode {
        &self.nodes[0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Rule tags in pre-order.
    pub fn rules(&self) -> Vec<RuleTag> {
        self.nodes.iter().map(|n| n.rule).collect()
    }

    /// An indented rendering, conclusion first.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(0, 0, &mut out);
        out
    }

    fn write_text(&self, i: usize, indent: usize, out: &mut String) {
        let n = &self.nodes[i];
        out.push_str(&format!("{:indent$}{} {}\n", "", n.rule, n.sequent, indent = indent * 2));
        for &c in &n.children {
            self.write_text(c, indent + 1, out);
        }
    }
}

/// Keeps the T-labelled part of a successful computation tree, retaining the
/// lowest-index successful premise of each db node as a ⊃R or [◦]R instance.
pub fn extract_proof(v: &Verdict) -> Result<Proof> {
    if !v.provable {
        return Err(Error::Precondition("no proof exists for an unprovable input".into()));
    }
    let mut nodes = Vec::new();
    extract_from(v, 0, &mut nodes);
    Ok(Proof { nodes })
}

fn extract_from(v: &Verdict, i: usize, out: &mut Vec<ProofNode>) -> usize {
    let ct = &v.tree.nodes[i];
    debug_assert!(ct.label, "only successful nodes are extracted");
    let index = out.len();
    let rule = ct.rule.as_ref().expect("successful nodes carry a rule");
    let (app, kept): (&RuleApp, Vec<usize>) = if rule.tag == RuleTag::Db {
        let k = ct
            .children
            .iter()
            .position(|&c| v.tree.nodes[c].label)
            .expect("a successful db node has a successful premise");
        (&ct.premise_rules[k], vec![ct.children[k]])
    } else {
        (rule, ct.children.clone())
    };
    out.push(ProofNode {
        sequent: ct.sequent.clone(),
        rule: app.tag,
        children: Vec::new(),
        principal_vertex: app.vertex,
        principal_formula: app.formula.clone(),
    });
    debug_assert!(ct.kind != NodeKind::Stable && ct.kind != NodeKind::Repeat);
    for c in kept {
        let ci = extract_from(v, c, out);
        out[index].children.push(ci);
    }
    index
}

fn plus(g: &SeqTree, w: Name, side: Side, fs: &[&Formula]) -> SeqTree {
    let mut t = g.clone();
    for f in fs {
        t.insert(w, side, (*f).clone()).expect("vertex exists");
    }
    t
}

fn minus(g: &SeqTree, w: Name, side: Side, f: &Formula) -> SeqTree {
    let mut t = g.clone();
    t.remove(w, side, f).expect("vertex exists");
    t
}

fn child(g: &SeqTree, w: Name, d: Direction, label: GentzenSequent) -> SeqTree {
    let mut t = g.clone();
    t.add_child(w, d, label).expect("vertex exists");
    t
}

/// Candidate premise lists for a rule instance; the instance is correct if
/// the actual premises match one candidate up to isomorphism.
fn expected_premises(
    g: &SeqTree,
    rule: RuleTag,
    w: Name,
    f: Option<&Formula>,
    logic: Logic,
) -> std::result::Result<Vec<Vec<SeqTree>>, String> {
    use Side::{Antecedent as In, Consequent as Out};
    let label = g.label(w).map_err(|e| e.to_string())?;
    let need = |side: Side| -> std::result::Result<&Formula, String> {
        let f = f.ok_or_else(|| format!("{rule} needs a principal formula"))?;
        if label.side(side).contains(f) {
            Ok(f)
        } else {
            Err(format!("principal formula {f} is not in the {side:?} of vertex {w}"))
        }
    };
    // The conclusion with and without the principal formula, for rules whose
    // schema leaves it to the surrounding context.
    let contexts = |side: Side, f: &Formula| vec![g.clone(), minus(g, w, side, f)];
    let shape = || format!("principal formula does not match rule {rule}");
    let candidates = match rule {
        RuleTag::Id => {
            need(In)?;
            need(Out)?;
            vec![vec![]]
        }
        RuleTag::BotL => {
            if !label.antecedent.contains(&Formula::bottom()) {
                return Err("false is not in the antecedent".into());
            }
            vec![vec![]]
        }
        RuleTag::OrL => {
            let p = need(In)?;
            let Node::Or(a, b) = p.node() else { return Err(shape()) };
            contexts(In, p)
                .iter()
                .map(|c| vec![plus(c, w, In, &[a]), plus(c, w, In, &[b])])
                .collect()
        }
        RuleTag::OrR => {
            let p = need(Out)?;
            let Node::Or(a, b) = p.node() else { return Err(shape()) };
            contexts(Out, p).iter().map(|c| vec![plus(c, w, Out, &[a, b])]).collect()
        }
        RuleTag::AndL => {
            let p = need(In)?;
            let Node::And(a, b) = p.node() else { return Err(shape()) };
            contexts(In, p).iter().map(|c| vec![plus(c, w, In, &[a, b])]).collect()
        }
        RuleTag::AndR => {
            let p = need(Out)?;
            let Node::And(a, b) = p.node() else { return Err(shape()) };
            contexts(Out, p)
                .iter()
                .map(|c| vec![plus(c, w, Out, &[a]), plus(c, w, Out, &[b])])
                .collect()
        }
        RuleTag::ImpL => {
            let p = need(In)?;
            let (a, b) = p.as_imp().ok_or_else(shape)?;
            let left = plus(g, w, Out, &[a]);
            contexts(In, p)
                .iter()
                .map(|c| vec![left.clone(), plus(c, w, In, &[b])])
                .collect()
        }
        RuleTag::ImpR => {
            let p = need(Out)?;
            let (a, b) = p.as_imp().ok_or_else(shape)?;
            let stripped = g.strip_consequents();
            vec![vec![plus(&plus(&stripped, w, In, &[a]), w, Out, &[b])]]
        }
        RuleTag::DiaL | RuleTag::BDiaL => {
            let p = need(In)?;
            let (d, a) = p.as_diamond().ok_or_else(shape)?;
            if RuleTag::diamond_left(d) != rule {
                return Err(shape());
            }
            contexts(In, p)
                .iter()
                .map(|c| vec![child(c, w, d, GentzenSequent::new([a.clone()], []))])
                .collect()
        }
        RuleTag::BoxR | RuleTag::BBoxR => {
            let p = need(Out)?;
            let (d, a) = p.as_box().ok_or_else(shape)?;
            if RuleTag::box_right(d) != rule {
                return Err(shape());
            }
            let stripped = g.strip_consequents();
            vec![vec![child(&stripped, w, d, GentzenSequent::new([], [a.clone()]))]]
        }
        RuleTag::DiaR | RuleTag::BDiaR => {
            let p = need(Out)?;
            let (d, a) = p.as_diamond().ok_or_else(shape)?;
            if RuleTag::diamond_right(d) != rule {
                return Err(shape());
            }
            ClosureRelation::new(g, logic)
                .targets(w, d)
                .map(|u| vec![plus(g, u, Out, &[a])])
                .collect()
        }
        RuleTag::BoxL | RuleTag::BBoxL => {
            let p = need(In)?;
            let (d, a) = p.as_box().ok_or_else(shape)?;
            if RuleTag::box_left(d) != rule {
                return Err(shape());
            }
            ClosureRelation::new(g, logic)
                .targets(w, d)
                .map(|u| vec![plus(g, u, In, &[a])])
                .collect()
        }
        RuleTag::D => {
            if !logic.d {
                return Err(format!("rule d is not available in logic {logic:?}"));
            }
            vec![vec![child(g, w, Direction::Forward, GentzenSequent::default())]]
        }
        RuleTag::Db => return Err("db is a search device, not a rule of the calculus".into()),
    };
    Ok(candidates)
}

/// Checks that every node is an instance of its rule, with side conditions
/// evaluated in `logic`, and that every leaf is an initial sequent.
pub fn check_proof(p: &Proof, logic: Logic) -> std::result::Result<(), CheckFailure> {
    if p.nodes.is_empty() {
        return Err(CheckFailure {
            node: 0,
            reason: "empty proof".into(),
        });
    }
    let mut seen = vec![false; p.nodes.len()];
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        let fail = |reason: String| CheckFailure { node: i, reason };
        if std::mem::replace(&mut seen[i], true) {
            return Err(fail("node is reached twice".into()));
        }
        let n = &p.nodes[i];
        if let Some(&c) = n.children.iter().find(|&&c| c >= p.nodes.len()) {
            return Err(fail(format!("premise index {c} out of range")));
        }
        let candidates =
            expected_premises(&n.sequent, n.rule, n.principal_vertex, n.principal_formula.as_ref(), logic)
                .map_err(fail)?;
        let premises: Vec<&SeqTree> = n.children.iter().map(|&c| &p.nodes[c].sequent).collect();
        let matched = candidates.iter().any(|cand| {
            cand.len() == premises.len() && cand.iter().zip(&premises).all(|(e, a)| e.isomorphic(a))
        });
        if !matched {
            return Err(fail(format!("premises are not those of a {} instance", n.rule)));
        }
        stack.extend(n.children.iter().copied());
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(CheckFailure {
            node: i,
            reason: "node is not part of the derivation".into(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct NodeJson {
    sequent: String,
    rule: String,
    children: Vec<usize>,
    principal_vertex: usize,
    principal_formula: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ProofJson {
    nodes: Vec<NodeJson>,
}

/// JSON with the sequent in text notation and the principal vertex given as
/// its pre-order position in that text.
pub fn proof_to_json(p: &Proof) -> String {
    let nodes = p
        .nodes
        .iter()
        .map(|n| NodeJson {
            sequent: n.sequent.to_string(),
            rule: n.rule.to_string(),
            children: n.children.clone(),
            principal_vertex: n.sequent.preorder_position(n.principal_vertex).expect("principal vertex exists"),
            principal_formula: n.principal_formula.as_ref().map(|f| f.to_string()),
        })
        .collect();
    serde_json::to_string_pretty(&ProofJson { nodes }).expect("proof JSON serializes")
}

pub fn proof_from_json(text: &str) -> Result<Proof> {
    let parsed: ProofJson = serde_json::from_str(text).map_err(|e| Error::MalformedProof(e.to_string()))?;
    let nodes = parsed
        .nodes
        .into_iter()
        .map(|n| {
            let sequent = SeqTree::parse(&n.sequent)?;
            let principal_vertex = sequent
                .at_preorder_position(n.principal_vertex)
                .ok_or_else(|| Error::MalformedProof(format!("no vertex at position {}", n.principal_vertex)))?;
            Ok(ProofNode {
                sequent,
                rule: n.rule.parse()?,
                children: n.children,
                principal_vertex,
                principal_formula: n.principal_formula.map(|f| Formula::parse(&f)).transpose()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if nodes.is_empty() {
        return Err(Error::MalformedProof("no nodes".into()));
    }
    Ok(Proof { nodes })
}
