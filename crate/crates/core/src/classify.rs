//! Exact low-Borel classification of recognized languages.
//!
//! Everything here works over the Muller normal form: openness reduces to
//! language equivalence with "reach a universal state", and the Σ₂/Π₂
//! memberships are the classical closure conditions on the accepting-loop
//! family. Labels are the seven classes realizable by deterministic
//! ω-automata, which top out at proper Boolean combinations of Σ₂.

use std::fmt;

use crate::automata::{
    distinguishing_word, to_muller_normal_form, Acceptance, DetAutomaton, MullerNormalForm,
    StateId, StateSet,
};
use crate::words::{FiniteWord, UpWord};
use crate::{Error, Limits};

/// The exact position of a language in the low Borel hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassLabel {
    Clopen,
    OpenProper,
    ClosedProper,
    Delta2Proper,
    Sigma2Proper,
    Pi2Proper,
    Delta3Proper,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 7] = [
        ClassLabel::Clopen,
        ClassLabel::OpenProper,
        ClassLabel::ClosedProper,
        ClassLabel::Delta2Proper,
        ClassLabel::Sigma2Proper,
        ClassLabel::Pi2Proper,
        ClassLabel::Delta3Proper,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::Clopen => "CLOPEN",
            ClassLabel::OpenProper => "OPEN_PROPER",
            ClassLabel::ClosedProper => "CLOSED_PROPER",
            ClassLabel::Delta2Proper => "DELTA2_PROPER",
            ClassLabel::Sigma2Proper => "SIGMA2_PROPER",
            ClassLabel::Pi2Proper => "PI2_PROPER",
            ClassLabel::Delta3Proper => "DELTA3_PROPER",
        }
    }

    /// The label is a total function of the four memberships.
    pub fn from_memberships(m: &Memberships) -> ClassLabel {
        match (m.open, m.closed, m.sigma2, m.pi2) {
            (true, true, _, _) => ClassLabel::Clopen,
            (true, false, _, _) => ClassLabel::OpenProper,
            (false, true, _, _) => ClassLabel::ClosedProper,
            (false, false, true, true) => ClassLabel::Delta2Proper,
            (false, false, true, false) => ClassLabel::Sigma2Proper,
            (false, false, false, true) => ClassLabel::Pi2Proper,
            (false, false, false, false) => ClassLabel::Delta3Proper,
        }
    }

    /// The label of the complement language.
    pub fn dual(self) -> ClassLabel {
        match self {
            ClassLabel::Clopen => ClassLabel::Clopen,
            ClassLabel::OpenProper => ClassLabel::ClosedProper,
            ClassLabel::ClosedProper => ClassLabel::OpenProper,
            ClassLabel::Delta2Proper => ClassLabel::Delta2Proper,
            ClassLabel::Sigma2Proper => ClassLabel::Pi2Proper,
            ClassLabel::Pi2Proper => ClassLabel::Sigma2Proper,
            ClassLabel::Delta3Proper => ClassLabel::Delta3Proper,
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The four decidable memberships behind a [`ClassLabel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Memberships {
    pub open: bool,
    pub closed: bool,
    pub sigma2: bool,
    pub pi2: bool,
}

/// A pair of nested loops violating one of the closure conditions.
///
/// `subloop ⊆ superloop`, both are loops of the normal form, and their
/// accepting flags are on the wrong sides for the condition that failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopPair {
    pub subloop: StateSet,
    pub superloop: StateSet,
}

/// Concrete certificates for every membership that failed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Evidence {
    /// An accepted word none of whose prefixes guarantees acceptance.
    pub not_open: Option<UpWord>,
    /// A rejected word every prefix of which extends to an accepted word.
    pub not_closed: Option<UpWord>,
    /// Accepting superloop with a rejecting subloop.
    pub not_sigma2: Option<LoopPair>,
    /// Accepting subloop inside a rejecting superloop.
    pub not_pi2: Option<LoopPair>,
}

/// Classification result: label, the memberships behind it, and evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub label: ClassLabel,
    pub memberships: Memberships,
    pub evidence: Evidence,
}

/// Hardness of a language within its class, read off the label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompletenessLabel {
    NotApplicable,
    SigmaComplete(u32),
    PiComplete(u32),
}

impl fmt::Display for CompletenessLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompletenessLabel::NotApplicable => f.write_str("NOT_APPLICABLE"),
            CompletenessLabel::SigmaComplete(n) => write!(f, "SIGMA_COMPLETE({n})"),
            CompletenessLabel::PiComplete(n) => write!(f, "PI_COMPLETE({n})"),
        }
    }
}

/// States from which every run is accepting.
///
/// A reachable state is universal exactly when no rejecting loop can be
/// reached from it. Unreachable states are never reported: the loop table
/// only covers the reachable part, and nothing downstream consults them.
pub fn universal_states(nf: &MullerNormalForm) -> StateSet {
    states_avoiding(nf, false)
}

/// Reachable states from which every run is rejecting.
pub fn empty_states(nf: &MullerNormalForm) -> StateSet {
    states_avoiding(nf, true)
}

/// Reachable states from which no loop with the given accepting flag is
/// reachable.
fn states_avoiding(nf: &MullerNormalForm, accepting: bool) -> StateSet {
    let b = nf.automaton();
    let mut tainted: StateSet = nf
        .loops()
        .iter()
        .filter(|l| nf.is_accepting_loop(l) == accepting)
        .flat_map(|l| l.iter().copied())
        .collect();

    // Backward closure of the tainted set.
    let mut grew = true;
    while grew {
        grew = false;
        for q in 0..b.states() {
            if tainted.contains(&q) {
                continue;
            }
            if (0..b.alphabet().len()).any(|s| tainted.contains(&b.step_index(q, s))) {
                tainted.insert(q);
                grew = true;
            }
        }
    }

    b.reachable()
        .into_iter()
        .filter(|q| !tainted.contains(q))
        .collect()
}

/// Headroom for equivalence checks between an automaton and a variant built
/// on its own structure: the product stays diagonal, but latch bits and the
/// pairing can multiply the raw state count a few times over.
fn derived(limits: &Limits, states: usize) -> Limits {
    Limits {
        max_states: limits.max_states.max(8 * states.max(1)),
        ..*limits
    }
}

/// Is the language open? Decided by language equivalence with "some prefix
/// reaches a universal state" over the same structure.
pub fn is_open(nf: &MullerNormalForm, limits: &Limits) -> Result<bool, Error> {
    Ok(open_counterexample(nf, limits)?.is_none())
}

/// Is the language closed? Openness of the complement.
pub fn is_closed(nf: &MullerNormalForm, limits: &Limits) -> Result<bool, Error> {
    Ok(open_counterexample(&nf.complement_family(), limits)?.is_none())
}

/// A word showing the language is not open: it is accepted, yet never
/// reaches a universal state, so each of its prefixes extends to a rejected
/// word. `None` when the language is open.
fn open_counterexample(nf: &MullerNormalForm, limits: &Limits) -> Result<Option<UpWord>, Error> {
    let b = nf.automaton();
    let reach_universal = b.with_acceptance(Acceptance::Reach(universal_states(nf)))?;
    // Reaching a universal state is sufficient for acceptance, so the
    // languages can only differ by words in L that stay non-universal.
    let witness = distinguishing_word(b, &reach_universal, &derived(limits, b.states()))?;
    if let Some(w) = &witness {
        debug_assert_eq!(b.accepts(w), Ok(true));
        debug_assert_eq!(reach_universal.accepts(w), Ok(false));
    }
    Ok(witness)
}

/// Is the accepting family closed under superloops (every loop containing an
/// accepting loop is accepting)? This is the Π₂ membership criterion for
/// deterministic automata.
pub fn is_pi2(nf: &MullerNormalForm) -> bool {
    pi2_violation(nf).is_none()
}

/// Is the accepting family closed under subloops (every loop inside an
/// accepting loop is accepting)? Dual criterion: Σ₂ membership.
pub fn is_sigma2(nf: &MullerNormalForm) -> bool {
    sigma2_violation(nf).is_none()
}

fn pi2_violation(nf: &MullerNormalForm) -> Option<LoopPair> {
    nested_loop_pair(nf, true)
}

fn sigma2_violation(nf: &MullerNormalForm) -> Option<LoopPair> {
    nested_loop_pair(nf, false)
}

/// First nested pair `sub ⊆ super` whose accepting flags are
/// `(sub_accepting, !sub_accepting)`, in loop-table order.
fn nested_loop_pair(nf: &MullerNormalForm, sub_accepting: bool) -> Option<LoopPair> {
    for sub in nf.loops() {
        if nf.is_accepting_loop(sub) != sub_accepting {
            continue;
        }
        for sup in nf.loops() {
            if nf.is_accepting_loop(sup) != sub_accepting
                && sub.states() != sup.states()
                && sub.is_subset(sup)
            {
                return Some(LoopPair {
                    subloop: sub.states().clone(),
                    superloop: sup.states().clone(),
                });
            }
        }
    }
    None
}

/// Classify the recognized language, with certificates for every membership
/// that fails.
pub fn classify(automaton: &DetAutomaton, limits: &Limits) -> Result<Classification, Error> {
    let nf = to_muller_normal_form(automaton, limits)?;
    classify_normal_form(&nf, limits)
}

/// [`classify`] for a prebuilt normal form.
pub fn classify_normal_form(
    nf: &MullerNormalForm,
    limits: &Limits,
) -> Result<Classification, Error> {
    let not_open = open_counterexample(nf, limits)?;
    let not_closed = open_counterexample(&nf.complement_family(), limits)?;
    let not_sigma2 = sigma2_violation(nf);
    let not_pi2 = pi2_violation(nf);

    let memberships = Memberships {
        open: not_open.is_none(),
        closed: not_closed.is_none(),
        sigma2: not_sigma2.is_none(),
        pi2: not_pi2.is_none(),
    };
    debug_assert!(!memberships.open || memberships.sigma2);
    debug_assert!(!memberships.closed || memberships.pi2);

    Ok(Classification {
        label: ClassLabel::from_memberships(&memberships),
        memberships,
        evidence: Evidence {
            not_open,
            not_closed,
            not_sigma2,
            not_pi2,
        },
    })
}

/// The completeness reading of a label: languages properly at a Σ or Π level
/// are hard for that level; clopen and the Δ-proper labels get no tag.
pub fn completeness_label(label: ClassLabel) -> CompletenessLabel {
    match label {
        ClassLabel::OpenProper => CompletenessLabel::SigmaComplete(1),
        ClassLabel::ClosedProper => CompletenessLabel::PiComplete(1),
        ClassLabel::Sigma2Proper => CompletenessLabel::SigmaComplete(2),
        ClassLabel::Pi2Proper => CompletenessLabel::PiComplete(2),
        ClassLabel::Clopen | ClassLabel::Delta2Proper | ClassLabel::Delta3Proper => {
            CompletenessLabel::NotApplicable
        }
    }
}

/// The finite basis of a clopen language: the unique antichain `X` with
/// `L = X·A^ω`, as words ordered by length then alphabet order.
///
/// Search walks the undecided region (states where both outcomes are still
/// reachable) breadth-first; a word is emitted when it first enters a
/// universal state and dropped when it enters an all-rejecting state. A
/// cycle inside the undecided region means the language is not clopen.
pub fn clopen_basis(
    automaton: &DetAutomaton,
    limits: &Limits,
) -> Result<Vec<FiniteWord>, Error> {
    let nf = to_muller_normal_form(automaton, limits)?;
    let b = nf.automaton();
    let universal = universal_states(&nf);
    let empty = empty_states(&nf);

    if universal.contains(&b.initial()) {
        let basis = vec![FiniteWord::default()];
        verify_basis(automaton, &basis, limits)?;
        return Ok(basis);
    }
    if empty.contains(&b.initial()) {
        verify_basis(automaton, &[], limits)?;
        return Ok(Vec::new());
    }

    let undecided: StateSet = b
        .reachable()
        .into_iter()
        .filter(|q| !universal.contains(q) && !empty.contains(q))
        .collect();
    if let Some(q) = cycle_within(b, &undecided) {
        return Err(Error::NotClopen(format!(
            "state {q} lies on a cycle from which both outcomes stay reachable"
        )));
    }

    // The undecided region is a DAG, so the path walk terminates; the number
    // of paths can still be exponential in pathological inputs, hence the cap.
    const NODE_CAP: usize = 1 << 14;
    let mut basis = Vec::new();
    let mut queue = std::collections::VecDeque::from([(b.initial(), Vec::<char>::new())]);
    let mut processed = 0usize;
    while let Some((q, word)) = queue.pop_front() {
        processed += 1;
        if processed > NODE_CAP {
            return Err(Error::Invalid(format!(
                "clopen basis search exceeded {NODE_CAP} prefixes"
            )));
        }
        for (s, &symbol) in b.alphabet().symbols().iter().enumerate() {
            let to = b.step_index(q, s);
            let mut extended = word.clone();
            extended.push(symbol);
            if universal.contains(&to) {
                basis.push(FiniteWord::new(extended));
            } else if !empty.contains(&to) {
                queue.push_back((to, extended));
            }
        }
    }
    verify_basis(automaton, &basis, limits)?;
    Ok(basis)
}

/// Some state of `within` lying on a cycle that stays inside `within`.
fn cycle_within(automaton: &DetAutomaton, within: &StateSet) -> Option<StateId> {
    // Colors: 0 unvisited, 1 on the current path, 2 done.
    let mut color = vec![0u8; automaton.states()];
    for &root in within {
        if color[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        color[root] = 1;
        while let Some(&mut (q, ref mut next)) = stack.last_mut() {
            if *next < automaton.alphabet().len() {
                let s = *next;
                *next += 1;
                let to = automaton.step_index(q, s);
                if !within.contains(&to) {
                    continue;
                }
                match color[to] {
                    0 => {
                        color[to] = 1;
                        stack.push((to, 0));
                    }
                    1 => return Some(to),
                    _ => {}
                }
            } else {
                color[q] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// Check `L(automaton) = basis·A^ω` by equivalence with the basis trie.
fn verify_basis(
    automaton: &DetAutomaton,
    basis: &[FiniteWord],
    limits: &Limits,
) -> Result<(), Error> {
    let trie = basis_reach_automaton(automaton.alphabet().symbols(), basis)?;
    let allowance = Limits {
        max_states: limits
            .max_states
            .max(8 * trie.states().max(1) * automaton.states().max(1)),
        ..*limits
    };
    match distinguishing_word(automaton, &trie, &allowance)? {
        None => Ok(()),
        Some(w) => Err(Error::Invalid(format!(
            "computed clopen basis misses the language at {w}"
        ))),
    }
}

/// The automaton of `basis·A^ω`: a prefix trie feeding an accepting sink,
/// with divergence going to a rejecting sink.
pub fn basis_reach_automaton(
    symbols: &[char],
    basis: &[FiniteWord],
) -> Result<DetAutomaton, Error> {
    let alphabet = crate::words::Alphabet::new(symbols.iter().copied())?;
    // Trie nodes are the proper prefixes of basis words.
    let mut nodes: Vec<Vec<char>> = vec![Vec::new()];
    let mut index = std::collections::BTreeMap::new();
    index.insert(Vec::new(), 0usize);
    for word in basis {
        for cut in 1..word.len() {
            let prefix = word[..cut].to_vec();
            if !index.contains_key(&prefix) {
                index.insert(prefix.clone(), nodes.len());
                nodes.push(prefix);
            }
        }
    }
    let accept = nodes.len();
    let reject = nodes.len() + 1;
    let is_basis = |w: &[char]| basis.iter().any(|b| b.letters() == w);

    let mut delta = Vec::with_capacity(nodes.len() + 2);
    for node in &nodes {
        let mut row = Vec::with_capacity(symbols.len());
        for &symbol in symbols {
            let mut extended = node.clone();
            extended.push(symbol);
            row.push(if is_basis(&extended) {
                accept
            } else if let Some(&id) = index.get(&extended) {
                id
            } else {
                reject
            });
        }
        delta.push(row);
    }
    delta.push(vec![accept; symbols.len()]);
    delta.push(vec![reject; symbols.len()]);

    let initial = if is_basis(&[]) { accept } else { 0 };
    DetAutomaton::new(
        alphabet,
        delta,
        initial,
        Acceptance::Reach([accept].into()),
    )
}
