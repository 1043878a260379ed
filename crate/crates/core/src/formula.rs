use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::Result;

/// Edge direction of a nesting: forward (f) or backward (b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Forward, Direction::Backward];

    pub fn converse(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Direction::Forward => 'f',
            Direction::Backward => 'b',
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Syntax tree of a tense formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Atom(String),
    Bottom,
    And(Formula, Formula),
    Or(Formula, Formula),
    Imp(Formula, Formula),
    Dia(Formula),
    BDia(Formula),
    Box(Formula),
    BBox(Formula),
}

struct Inner {
    node: Node,
    text: String,
    depth: usize,
    length: usize,
}

/// An immutable, cheaply clonable formula.
///
/// Equality, hashing and ordering go through the rendered text, which is a
/// faithful encoding of the syntax tree, so the order is the canonical
/// order on rendered strings.
#[derive(Clone)]
pub struct Formula(Arc<Inner>);

const KEYWORDS: [&str; 5] = ["dia", "bdia", "box", "bbox", "false"];

pub(crate) fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
        && !KEYWORDS.contains(&name)
}

// Binding strength used by the printer: higher binds tighter.
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

impl Formula {
    fn build(node: Node) -> Formula {
        let (depth, length) = match &node {
            Node::Atom(_) | Node::Bottom => (0, 1),
            Node::And(a, b) | Node::Or(a, b) | Node::Imp(a, b) => {
                (a.modal_depth().max(b.modal_depth()), a.length() + b.length() + 1)
            }
            Node::Dia(a) | Node::BDia(a) | Node::Box(a) | Node::BBox(a) => {
                (a.modal_depth() + 1, a.length() + 1)
            }
        };
        let text = render_node(&node);
        Formula(Arc::new(Inner {
            node,
            text,
            depth,
            length,
        }))
    }

    /// Builds an atom. The name must match `[a-z][a-z0-9_]*` and must not
    /// be a keyword.
    pub fn atom(name: &str) -> Formula {
        assert!(is_atom_name(name), "invalid atom name {name:?}");
        Formula::build(Node::Atom(name.to_string()))
    }

    pub fn bottom() -> Formula {
        Formula::build(Node::Bottom)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::build(Node::And(a, b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::build(Node::Or(a, b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::build(Node::Imp(a, b))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::bottom())
    }

    pub fn dia(a: Formula) -> Formula {
        Formula::build(Node::Dia(a))
    }

    pub fn bdia(a: Formula) -> Formula {
        Formula::build(Node::BDia(a))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::build(Node::Box(a))
    }

    pub fn bbox(a: Formula) -> Formula {
        Formula::build(Node::BBox(a))
    }

    /// ⟨d⟩A: ◇A for forward, ◆̄A for backward.
    pub fn diamond(d: Direction, a: Formula) -> Formula {
        match d {
            Direction::Forward => Formula::dia(a),
            Direction::Backward => Formula::bdia(a),
        }
    }

    /// [d]A: □A for forward, ■A for backward.
    pub fn boxed_in(d: Direction, a: Formula) -> Formula {
        match d {
            Direction::Forward => Formula::boxed(a),
            Direction::Backward => Formula::bbox(a),
        }
    }

    pub fn parse(text: &str) -> Result<Formula> {
        crate::syntax::parse_formula(text)
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    /// The minimal-parenthesis rendering.
    pub fn text(&self) -> &str {
        &self.0.text
    }

    pub fn modal_depth(&self) -> usize {
        self.0.depth
    }

    /// Number of symbols; parentheses are not counted.
    pub fn length(&self) -> usize {
        self.0.length
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self.node(), Node::Bottom)
    }

    pub fn as_diamond(&self) -> Option<(Direction, &Formula)> {
        match self.node() {
            Node::Dia(a) => Some((Direction::Forward, a)),
            Node::BDia(a) => Some((Direction::Backward, a)),
            _ => None,
        }
    }

    pub fn as_box(&self) -> Option<(Direction, &Formula)> {
        match self.node() {
            Node::Box(a) => Some((Direction::Forward, a)),
            Node::BBox(a) => Some((Direction::Backward, a)),
            _ => None,
        }
    }

    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self.node() {
            Node::Imp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// The reflexive-transitive set of subformulas.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if !out.insert(self.clone()) {
            return;
        }
        match self.node() {
            Node::Atom(_) | Node::Bottom => {}
            Node::And(a, b) | Node::Or(a, b) | Node::Imp(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
            Node::Dia(a) | Node::BDia(a) | Node::Box(a) | Node::BBox(a) => {
                a.collect_subformulas(out)
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f.node() {
                Node::Atom(p) => Some(p.clone()),
                _ => None,
            })
            .collect()
    }

    fn strength(&self) -> u8 {
        match self.node() {
            Node::Imp(..) => IMP,
            Node::Or(..) => OR,
            Node::And(..) => AND,
            _ => UNARY,
        }
    }

    fn render_at(&self, min: u8) -> String {
        if self.strength() < min {
            format!("({})", self.text())
        } else {
            self.text().to_string()
        }
    }
}

fn render_node(node: &Node) -> String {
    match node {
        Node::Atom(p) => p.clone(),
        Node::Bottom => "false".to_string(),
        Node::Imp(a, b) => format!("{} -> {}", a.render_at(OR), b.render_at(IMP)),
        Node::Or(a, b) => format!("{} | {}", a.render_at(OR), b.render_at(AND)),
        Node::And(a, b) => format!("{} & {}", a.render_at(AND), b.render_at(UNARY)),
        Node::Dia(a) => format!("dia {}", a.render_at(UNARY)),
        Node::BDia(a) => format!("bdia {}", a.render_at(UNARY)),
        Node::Box(a) => format!("box {}", a.render_at(UNARY)),
        Node::BBox(a) => format!("bbox {}", a.render_at(UNARY)),
    }
}

pub fn parse(text: &str) -> Result<Formula> {
    Formula::parse(text)
}

pub fn render(a: &Formula) -> String {
    a.text().to_string()
}

pub fn subformulas(a: &Formula) -> BTreeSet<Formula> {
    a.subformulas()
}

pub fn modal_depth(a: &Formula) -> usize {
    a.modal_depth()
}

pub fn formula_length(a: &Formula) -> usize {
    a.length()
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.text == other.0.text
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.text.hash(state)
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0.text.cmp(&other.0.text)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.text())
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({})", self.text())
    }
}

impl std::str::FromStr for Formula {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        Formula::parse(s)
    }
}
