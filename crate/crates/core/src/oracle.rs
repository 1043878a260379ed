use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::countermodel::{KripkeModel, World};
use crate::error::{Error, Result};
use crate::formula::{Formula, Node};
use crate::logic::Logic;
use crate::sequent::Name;

pub const MAX_WORLDS: usize = 4;
pub const MAX_ATOMS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundedSearchResult {
    Invalid { model: KripkeModel, witness: World },
    NoCounterModelUpTo(usize),
}

impl BoundedSearchResult {
    pub fn is_invalid(&self) -> bool {
        matches!(self, BoundedSearchResult::Invalid { .. })
    }
}

/// A frame on worlds 0..n with relations as row bitmasks: bit j of `up[i]`
/// means i ≤ j, bit j of `succ[i]` means i R j.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Frame {
    n: usize,
    up: Vec<u8>,
    succ: Vec<u8>,
    pred: Vec<u8>,
    /// Up-closed world sets, ascending.
    upsets: Vec<u8>,
}

// Bit i*n+j of a relation code means i is related to j.
fn rows(code: u32, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((code >> (i * n)) & ((1 << n) - 1)) as u8).collect()
}

fn is_preorder(up: &[u8]) -> bool {
    up.iter().enumerate().all(|(i, &r)| {
        r & (1 << i) != 0 && ones(r).all(|j| up[j] & !r == 0)
    })
}

fn ones(mask: u8) -> impl Iterator<Item = usize> {
    (0..8).filter(move |i| mask & (1 << i) != 0)
}

fn converse(rel: &[u8]) -> Vec<u8> {
    let n = rel.len();
    (0..n)
        .map(|j| (0..n).filter(|&i| rel[i] & (1 << j) != 0).fold(0, |m, i| m | (1 << i)))
        .collect()
}

fn frame_ok(up: &[u8], succ: &[u8], logic: Logic) -> bool {
    let n = up.len();
    let pred = converse(succ);
    for w in 0..n {
        if logic.t && succ[w] & (1 << w) == 0 {
            return false;
        }
        if logic.d && succ[w] == 0 {
            return false;
        }
        if logic.b && succ[w] != pred[w] {
            return false;
        }
    }
    // (F1) w ≤ w', w R v ⇒ ∃v'. w' R v', v ≤ v'.
    // (F2) w R v, v ≤ v' ⇒ ∃w'. w ≤ w', w' R v'.
    for w in 0..n {
        for v in ones(succ[w]) {
            if ones(up[w]).any(|w2| succ[w2] & up[v] == 0) {
                return false;
            }
            if ones(up[v]).any(|v2| pred[v2] & up[w] == 0) {
                return false;
            }
        }
    }
    true
}

fn permute(code: u32, n: usize, perm: &[usize]) -> u32 {
    let mut out = 0;
    for i in 0..n {
        for j in 0..n {
            if code & (1 << (i * n + j)) != 0 {
                out |= 1 << (perm[i] * n + perm[j]);
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !prefix.contains(&i) {
                prefix.push(i);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

/// The (≤, R) pair is the least of its relabelings, comparing ≤ first.
fn is_canonical(leq: u32, r: u32, n: usize, perms: &[Vec<usize>]) -> bool {
    perms
        .iter()
        .all(|p| (permute(leq, n, p), permute(r, n, p)) >= (leq, r))
}

fn upsets(up: &[u8]) -> Vec<u8> {
    let n = up.len();
    (0..1u32 << n)
        .map(|s| s as u8)
        .filter(|&s| ones(s).all(|w| up[w] & !s == 0))
        .collect()
}

/// Canonical frames with exactly `n` worlds in enumeration order.
fn enumerate_frames(n: usize, logic: Logic) -> Vec<Frame> {
    let perms = permutations(n);
    let cells = n * n;
    let mut out = Vec::new();
    for leq in 0..1u32 << cells {
        let up = rows(leq, n);
        if !is_preorder(&up) {
            continue;
        }
        let ups = upsets(&up);
        for r in 0..1u32 << cells {
            let succ = rows(r, n);
            if frame_ok(&up, &succ, logic) && is_canonical(leq, r, n, &perms) {
                out.push(Frame {
                    n,
                    pred: converse(&succ),
                    up: up.clone(),
                    succ,
                    upsets: ups.clone(),
                });
            }
        }
    }
    out
}

type FrameCache = Mutex<HashMap<(usize, Logic), Arc<Vec<Frame>>>>;

fn frames(n: usize, logic: Logic) -> Arc<Vec<Frame>> {
    static CACHE: OnceLock<FrameCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.lock().expect("frame cache").get(&(n, logic)) {
        return f.clone();
    }
    let built = Arc::new(enumerate_frames(n, logic));
    cache
        .lock()
        .expect("frame cache")
        .entry((n, logic))
        .or_insert(built)
        .clone()
}

fn extension(frame: &Frame, val: &HashMap<&str, u8>, a: &Formula) -> u8 {
    let n = frame.n;
    let all: u8 = ((1u16 << n) - 1) as u8;
    let boxed = |good: u8| (0..n).filter(|&w| frame.up[w] & !good == 0).fold(0u8, |m, w| m | (1 << w));
    match a.node() {
        Node::Atom(p) => val[p.as_str()],
        Node::Bottom => 0,
        Node::And(x, y) => extension(frame, val, x) & extension(frame, val, y),
        Node::Or(x, y) => extension(frame, val, x) | extension(frame, val, y),
        Node::Imp(x, y) => boxed((all & !extension(frame, val, x)) | extension(frame, val, y)),
        Node::Dia(x) | Node::BDia(x) => {
            let ex = extension(frame, val, x);
            let rel = if matches!(a.node(), Node::Dia(_)) { &frame.succ } else { &frame.pred };
            (0..n).filter(|&w| rel[w] & ex != 0).fold(0, |m, w| m | (1 << w))
        }
        Node::Box(x) | Node::BBox(x) => {
            let ex = extension(frame, val, x);
            let rel = if matches!(a.node(), Node::Box(_)) { &frame.succ } else { &frame.pred };
            boxed((0..n).filter(|&u| rel[u] & !ex == 0).fold(0, |m, u| m | (1 << u)))
        }
    }
}

fn to_model(frame: &Frame, atoms: &[String], choice: &[u8], logic: Logic) -> KripkeModel {
    let n = frame.n;
    let pairs = |rel: &[u8]| -> BTreeSet<(usize, usize)> {
        (0..n).flat_map(|i| ones(rel[i]).map(move |j| (i, j))).collect()
    };
    KripkeModel {
        worlds: (0..n)
            .map(|i| World {
                name: Name(i as u32),
                index: 0,
            })
            .collect(),
        leq: pairs(&frame.up),
        r: pairs(&frame.succ),
        valuation: (0..n)
            .map(|w| {
                atoms
                    .iter()
                    .zip(choice)
                    .filter(|(_, &s)| s & (1 << w) != 0)
                    .map(|(p, _)| p.clone())
                    .collect()
            })
            .collect(),
        logic,
    }
}

// First falsifying (valuation, world) on one frame, valuations ordered by
// their up-set indices with the first atom most significant.
fn refute_on(frame: &Frame, atoms: &[String], a: &Formula) -> Option<(Vec<u8>, usize)> {
    let k = atoms.len();
    let m = frame.upsets.len();
    let total = m.pow(k as u32);
    for code in 0..total {
        let mut rest = code;
        let mut choice = vec![0u8; k];
        for slot in choice.iter_mut().rev() {
            *slot = frame.upsets[rest % m];
            rest /= m;
        }
        let val: HashMap<&str, u8> = atoms.iter().map(String::as_str).zip(choice.iter().copied()).collect();
        let all: u8 = ((1u16 << frame.n) - 1) as u8;
        let ext = extension(frame, &val, a);
        if ext != all {
            return Some((choice, (!ext & all).trailing_zeros() as usize));
        }
    }
    None
}

/// Searches every model of the logic with 1..=bound worlds, up to relabeling,
/// for one falsifying `a`. The first hit in enumeration order is returned
/// regardless of how the work is split across threads.
pub fn brute_force_validity(a: &Formula, logic: Logic, bound: usize) -> Result<BoundedSearchResult> {
    if bound > MAX_WORLDS {
        return Err(Error::BoundExceeded(format!("world bound {bound} exceeds {MAX_WORLDS}")));
    }
    let atoms: Vec<String> = a.atoms().into_iter().collect();
    if atoms.len() > MAX_ATOMS {
        return Err(Error::BoundExceeded(format!(
            "{} atoms exceed the limit of {MAX_ATOMS}",
            atoms.len()
        )));
    }
    for n in 1..=bound {
        let fs = frames(n, logic);
        let hit = fs
            .par_iter()
            .find_map_first(|f| refute_on(f, &atoms, a).map(|(choice, w)| (f, choice, w)));
        if let Some((f, choice, w)) = hit {
            return Ok(BoundedSearchResult::Invalid {
                model: to_model(f, &atoms, &choice, logic),
                witness: World {
                    name: Name(w as u32),
                    index: 0,
                },
            });
        }
    }
    Ok(BoundedSearchResult::NoCounterModelUpTo(bound))
}

/// Counts from one exhaustive pass over all (≤, R, V) candidates on `n`
/// worlds with `k` atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Census {
    /// Candidates visited, counting a rejected block as all its members.
    pub visited: u128,
    /// 2^(2n² + nk), the number of candidate triples.
    pub closed_form: u128,
    pub frames: u64,
    pub models: u64,
}

pub fn census(n: usize, k: usize, logic: Logic) -> Result<Census> {
    if n == 0 || n > MAX_WORLDS || k > MAX_ATOMS {
        return Err(Error::BoundExceeded(format!("census on {n} worlds and {k} atoms")));
    }
    let cells = n * n;
    let perms = permutations(n);
    let valuations: u128 = 1 << (n * k);
    let mut c = Census {
        visited: 0,
        closed_form: 1 << (2 * cells + n * k),
        frames: 0,
        models: 0,
    };
    for leq in 0..1u32 << cells {
        let up = rows(leq, n);
        if !is_preorder(&up) {
            c.visited += valuations << cells;
            continue;
        }
        for r in 0..1u32 << cells {
            let succ = rows(r, n);
            if !(frame_ok(&up, &succ, logic) && is_canonical(leq, r, n, &perms)) {
                c.visited += valuations;
                continue;
            }
            c.frames += 1;
            for v in 0..valuations {
                c.visited += 1;
                let monotone = (0..k).all(|p| {
                    let s = ((v >> (p * n)) & ((1 << n) - 1)) as u8;
                    ones(s).all(|w| up[w] & !s == 0)
                });
                if monotone {
                    c.models += 1;
                }
            }
        }
    }
    Ok(c)
}
