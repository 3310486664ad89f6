//! Complement, synchronized product, emptiness, and language equivalence.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::loops::to_muller_normal_form;
use super::{Acceptance, DetAutomaton, StateId, StateSet};
use crate::words::{FiniteWord, UpWord};
use crate::{Error, Limits};

/// Complement of the recognized language over the same alphabet.
///
/// Parity automata are complemented in place by shifting every priority up
/// by one, which swaps the parity of each minimum. Every other variant goes
/// through the Muller normal form, where the accepting family is replaced by
/// its complement within the loop table. In particular a deterministic
/// `buchi F` automaton is *not* complemented by reinterpreting `F` under
/// `cobuchi`; only the loop table is trustworthy here.
pub fn complement(automaton: &DetAutomaton, limits: &Limits) -> Result<DetAutomaton, Error> {
    match automaton.acceptance() {
        Acceptance::Parity(priorities) => {
            let shifted = priorities.iter().map(|p| p + 1).collect();
            automaton.with_acceptance(Acceptance::Parity(shifted))
        }
        _ => Ok(to_muller_normal_form(automaton, limits)?
            .complement_family()
            .automaton()
            .clone()),
    }
}

/// How the two acceptance verdicts combine in a product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductMode {
    And,
    Or,
    Xor,
}

impl ProductMode {
    fn combine(self, a: bool, b: bool) -> bool {
        match self {
            ProductMode::And => a && b,
            ProductMode::Or => a || b,
            ProductMode::Xor => a != b,
        }
    }
}

/// Synchronized product over the reachable pair space.
///
/// Both operands are brought to Muller normal form first; the product loop
/// `C` is accepting when `mode` combines the component verdicts on the
/// projections of `C`, which are themselves loops of the components.
pub fn product(
    a1: &DetAutomaton,
    a2: &DetAutomaton,
    mode: ProductMode,
    limits: &Limits,
) -> Result<DetAutomaton, Error> {
    if a1.alphabet() != a2.alphabet() {
        return Err(Error::Invalid(format!(
            "product requires matching alphabets, got {{{}}} and {{{}}}",
            a1.alphabet(),
            a2.alphabet()
        )));
    }
    let m1 = to_muller_normal_form(a1, limits)?;
    let m2 = to_muller_normal_form(a2, limits)?;
    let (b1, b2) = (m1.automaton(), m2.automaton());

    // Explore reachable pairs breadth-first; discovery order numbers states.
    let mut ids: BTreeMap<(StateId, StateId), StateId> = BTreeMap::new();
    let mut order: Vec<(StateId, StateId)> = Vec::new();
    let mut queue = VecDeque::new();
    let start = (b1.initial(), b2.initial());
    ids.insert(start, 0);
    order.push(start);
    queue.push_back(start);
    let mut delta: Vec<Vec<StateId>> = Vec::new();
    while let Some((q1, q2)) = queue.pop_front() {
        let mut row = Vec::with_capacity(b1.alphabet().len());
        for s in 0..b1.alphabet().len() {
            let to = (b1.step_index(q1, s), b2.step_index(q2, s));
            let next_id = *ids.entry(to).or_insert_with(|| {
                order.push(to);
                queue.push_back(to);
                order.len() - 1
            });
            row.push(next_id);
        }
        delta.push(row);
        if order.len() > limits.max_states {
            return Err(Error::StateLimitExceeded(order.len(), limits.max_states));
        }
    }

    let structure = DetAutomaton::new(
        a1.alphabet().clone(),
        delta,
        0,
        Acceptance::Muller(BTreeSet::new()),
    )?;
    let loops = super::loops::enumerate_loops(&structure, limits)?;
    let mut family: BTreeSet<StateSet> = BTreeSet::new();
    for l in &loops {
        let proj1: StateSet = l.iter().map(|&p| order[p].0).collect();
        let proj2: StateSet = l.iter().map(|&p| order[p].1).collect();
        if mode.combine(m1.family().contains(&proj1), m2.family().contains(&proj2)) {
            family.insert(l.states().clone());
        }
    }
    structure.with_acceptance(Acceptance::Muller(family))
}

/// Is the recognized language empty?
pub fn is_empty(automaton: &DetAutomaton, limits: &Limits) -> Result<bool, Error> {
    Ok(accepted_witness(automaton, limits)?.is_none())
}

/// A canonical accepted word, or `None` when the language is empty.
///
/// The witness is assembled from a shortest access path to the first
/// accepting loop (in loop-table order) and a cycle that visits exactly that
/// loop, then canonicalized.
pub fn accepted_witness(
    automaton: &DetAutomaton,
    limits: &Limits,
) -> Result<Option<UpWord>, Error> {
    let nf = to_muller_normal_form(automaton, limits)?;
    let target = nf
        .loops()
        .iter()
        .find(|l| nf.is_accepting_loop(l))
        .cloned();
    let Some(target) = target else {
        return Ok(None);
    };
    let b = nf.automaton();

    let access = shortest_path(b, b.initial(), |q| target.contains(&q), None)
        .expect("loops are reachable from the initial state");
    let mut at = run_to(b, b.initial(), &access);

    // Tour every loop state and return to the entry point, staying inside
    // the loop, so the cycle's visited set is exactly the loop.
    let entry = at;
    let mut cycle = Vec::new();
    for &stop in target.iter().filter(|&&q| q != entry) {
        let leg = shortest_path(b, at, |q| q == stop, Some(target.states()))
            .expect("loop members are mutually reachable inside the loop");
        at = run_to(b, at, &leg);
        cycle.extend(leg);
    }
    cycle.extend(shortest_nonempty_path(b, at, entry, target.states()));

    let to_chars = |indices: &[usize]| -> FiniteWord {
        FiniteWord::new(indices.iter().map(|&s| b.alphabet().symbols()[s]))
    };
    let word = UpWord::new(to_chars(&access), to_chars(&cycle))?.canonicalize();
    debug_assert_eq!(automaton.accepts(&word), Ok(true));
    Ok(Some(word))
}

/// Do the automata recognize the same language? (Alphabets must match.)
pub fn equivalent(
    a1: &DetAutomaton,
    a2: &DetAutomaton,
    limits: &Limits,
) -> Result<bool, Error> {
    Ok(distinguishing_word(a1, a2, limits)?.is_none())
}

/// A word accepted by exactly one of the automata, or `None` when they are
/// language-equivalent.
pub fn distinguishing_word(
    a1: &DetAutomaton,
    a2: &DetAutomaton,
    limits: &Limits,
) -> Result<Option<UpWord>, Error> {
    let difference = product(a1, a2, ProductMode::Xor, limits)?;
    let witness = accepted_witness(&difference, limits)?;
    if let Some(w) = &witness {
        debug_assert_ne!(a1.accepts(w), a2.accepts(w));
    }
    Ok(witness)
}

/// Symbol indices of a shortest path from `from` to a state satisfying
/// `is_goal`, restricted to `within` when given. Possibly empty.
fn shortest_path(
    automaton: &DetAutomaton,
    from: StateId,
    is_goal: impl Fn(StateId) -> bool,
    within: Option<&StateSet>,
) -> Option<Vec<usize>> {
    let allowed = |q: StateId| within.is_none_or(|set| set.contains(&q));
    if !allowed(from) {
        return None;
    }
    if is_goal(from) {
        return Some(Vec::new());
    }
    let mut back: BTreeMap<StateId, (StateId, usize)> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    while let Some(q) = queue.pop_front() {
        for s in 0..automaton.alphabet().len() {
            let to = automaton.step_index(q, s);
            if !allowed(to) || to == from || back.contains_key(&to) {
                continue;
            }
            back.insert(to, (q, s));
            if is_goal(to) {
                let mut path = Vec::new();
                let mut cur = to;
                while cur != from {
                    let (prev, sym) = back[&cur];
                    path.push(sym);
                    cur = prev;
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(to);
        }
    }
    None
}

/// Shortest path from `from` to `to` of length ≥ 1 inside `within`.
fn shortest_nonempty_path(
    automaton: &DetAutomaton,
    from: StateId,
    to: StateId,
    within: &StateSet,
) -> Vec<usize> {
    // Take one induced edge, then (possibly empty) shortest paths onward.
    let mut best: Option<Vec<usize>> = None;
    for s in 0..automaton.alphabet().len() {
        let mid = automaton.step_index(from, s);
        if !within.contains(&mid) {
            continue;
        }
        if let Some(rest) = shortest_path(automaton, mid, |q| q == to, Some(within)) {
            let mut path = vec![s];
            path.extend(rest);
            if best.as_ref().is_none_or(|b| path.len() < b.len()) {
                best = Some(path);
            }
        }
    }
    best.expect("loop members are mutually reachable inside the loop")
}

fn run_to(automaton: &DetAutomaton, from: StateId, symbols: &[usize]) -> StateId {
    symbols
        .iter()
        .fold(from, |q, &s| automaton.step_index(q, s))
}
