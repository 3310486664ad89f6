//! Loop (infinity-set) enumeration and the common Muller normal form.
//!
//! A *loop* is a non-empty set of states, reachable from the initial state,
//! that is strongly connected in its induced subgraph and gives every member
//! an induced outgoing edge. The loops of a deterministic complete automaton
//! are exactly the sets of states a run can visit infinitely often, so every
//! acceptance variant reduces to a Muller condition over them.

use std::collections::BTreeSet;
use std::ops::Deref;

use super::{Acceptance, DetAutomaton, StateId, StateSet};
use crate::{Error, Limits};

/// A verified loop of a specific automaton.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Loop(StateSet);

impl Loop {
    /// Validate the loop invariant for `states` in `automaton`.
    pub fn try_new(automaton: &DetAutomaton, states: StateSet) -> Result<Loop, Error> {
        if states.is_empty() {
            return Err(Error::Invalid("a loop must be non-empty".into()));
        }
        if let Some(&q) = states.iter().find(|&&q| q >= automaton.states()) {
            return Err(Error::StateOutOfRange(q, automaton.states()));
        }
        if !is_loop_body(automaton, &states) {
            return Err(Error::Invalid(format!(
                "{{{}}} is not strongly connected with an outgoing edge per state",
                join(&states)
            )));
        }
        let reachable = automaton.reachable();
        if !states.iter().all(|q| reachable.contains(q)) {
            return Err(Error::Invalid(format!(
                "loop {{{}}} is not reachable from the initial state",
                join(&states)
            )));
        }
        Ok(Loop(states))
    }

    pub fn states(&self) -> &StateSet {
        &self.0
    }

    pub fn into_states(self) -> StateSet {
        self.0
    }
}

impl Deref for Loop {
    type Target = StateSet;

    fn deref(&self) -> &StateSet {
        &self.0
    }
}

fn join(set: &StateSet) -> String {
    let parts: Vec<String> = set.iter().map(|q| q.to_string()).collect();
    parts.join(" ")
}

/// Does `states` induce a strongly connected subgraph in which every state
/// has at least one outgoing edge? (Reachability is checked separately.)
fn is_loop_body(automaton: &DetAutomaton, states: &StateSet) -> bool {
    let members: Vec<StateId> = states.iter().copied().collect();
    let inside = |q: StateId| states.contains(&q);

    // Every member keeps at least one edge inside the set.
    for &q in &members {
        if !(0..automaton.alphabet().len()).any(|s| inside(automaton.step_index(q, s))) {
            return false;
        }
    }
    // Strong connectivity: everything is forward-reachable from the least
    // member inside the set, and the least member is backward-reachable from
    // everything (checked by a forward search on the reversed edges).
    let start = members[0];
    let forward = induced_reach(automaton, states, start, false);
    if forward.len() != members.len() {
        return false;
    }
    let backward = induced_reach(automaton, states, start, true);
    backward.len() == members.len()
}

fn induced_reach(
    automaton: &DetAutomaton,
    states: &StateSet,
    start: StateId,
    reversed: bool,
) -> StateSet {
    let mut edges: Vec<(StateId, StateId)> = Vec::new();
    for &q in states {
        for s in 0..automaton.alphabet().len() {
            let to = automaton.step_index(q, s);
            if states.contains(&to) {
                edges.push(if reversed { (to, q) } else { (q, to) });
            }
        }
    }
    let mut seen: StateSet = [start].into();
    let mut frontier = vec![start];
    while let Some(q) = frontier.pop() {
        for &(from, to) in &edges {
            if from == q && seen.insert(to) {
                frontier.push(to);
            }
        }
    }
    seen
}

/// All loops of the automaton, sorted by (size, state order).
///
/// Enumeration is exponential in the size of the largest strongly connected
/// component, so automata whose reachable part exceeds `limits.max_states`
/// are rejected up front.
pub fn enumerate_loops(automaton: &DetAutomaton, limits: &Limits) -> Result<Vec<Loop>, Error> {
    let reachable = automaton.reachable();
    if reachable.len() > limits.max_states {
        return Err(Error::StateLimitExceeded(reachable.len(), limits.max_states));
    }

    let mut loops = Vec::new();
    for component in strongly_connected_components(automaton, &reachable) {
        // Subsets of one component are the only candidates: a loop is
        // strongly connected, hence contained in a single component.
        let members: Vec<StateId> = component.iter().copied().collect();
        if members.len() > 60 {
            // 2^61 subsets would never finish; refuse instead of wrapping the
            // mask arithmetic below.
            return Err(Error::StateLimitExceeded(members.len(), 60));
        }
        for mask in 1u64..(1 << members.len()) {
            let subset: StateSet = members
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &q)| q)
                .collect();
            if is_loop_body(automaton, &subset) {
                loops.push(Loop(subset));
            }
        }
    }
    loops.sort_by(|a, b| (a.len(), &a.0).cmp(&(b.len(), &b.0)));
    Ok(loops)
}

/// Strongly connected components of the reachable part, as sorted state sets.
fn strongly_connected_components(
    automaton: &DetAutomaton,
    reachable: &[StateId],
) -> Vec<StateSet> {
    // Kosaraju: order by finish time on the forward graph, then collect
    // components on the reversed graph.
    let in_scope: BTreeSet<StateId> = reachable.iter().copied().collect();
    let mut finish_order = Vec::new();
    let mut visited = StateSet::new();
    for &root in reachable {
        if visited.contains(&root) {
            continue;
        }
        // Iterative post-order DFS.
        let mut stack = vec![(root, 0usize)];
        visited.insert(root);
        while let Some(&mut (q, ref mut next)) = stack.last_mut() {
            if *next < automaton.alphabet().len() {
                let s = *next;
                *next += 1;
                let to = automaton.step_index(q, s);
                if in_scope.contains(&to) && visited.insert(to) {
                    stack.push((to, 0));
                }
            } else {
                finish_order.push(q);
                stack.pop();
            }
        }
    }

    let mut reversed: Vec<Vec<StateId>> = vec![Vec::new(); automaton.states()];
    for &q in reachable {
        for s in 0..automaton.alphabet().len() {
            let to = automaton.step_index(q, s);
            if in_scope.contains(&to) {
                reversed[to].push(q);
            }
        }
    }

    let mut component_of: Vec<Option<usize>> = vec![None; automaton.states()];
    let mut components: Vec<StateSet> = Vec::new();
    for &root in finish_order.iter().rev() {
        if component_of[root].is_some() {
            continue;
        }
        let id = components.len();
        let mut set = StateSet::new();
        let mut frontier = vec![root];
        component_of[root] = Some(id);
        while let Some(q) = frontier.pop() {
            set.insert(q);
            for &from in &reversed[q] {
                if component_of[from].is_none() {
                    component_of[from] = Some(id);
                    frontier.push(from);
                }
            }
        }
        components.push(set);
    }
    components.sort();
    components
}

/// An automaton brought to Muller acceptance, together with its loop table.
///
/// For `buchi`, `cobuchi`, `parity`, and `muller` inputs the structure is
/// unchanged and only the acceptance is rewritten over the loop table. For
/// `reach` and `safety` the occurrence condition is first made into an
/// infinity condition by a one-bit latch product (`latched` is then true):
/// the bit records whether the target set has been visited (`reach`) or left
/// (`safety`), and accepting loops are those with the appropriate bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MullerNormalForm {
    automaton: DetAutomaton,
    loops: Vec<Loop>,
    latched: bool,
}

impl MullerNormalForm {
    /// The equivalent automaton with `Acceptance::Muller`.
    pub fn automaton(&self) -> &DetAutomaton {
        &self.automaton
    }

    /// Every loop of [`Self::automaton`].
    pub fn loops(&self) -> &[Loop] {
        &self.loops
    }

    /// Whether a visitation latch was added (doubling the state space).
    pub fn latched(&self) -> bool {
        self.latched
    }

    /// The accepting family; always a subset of the loop table.
    pub fn family(&self) -> &BTreeSet<StateSet> {
        match self.automaton.acceptance() {
            Acceptance::Muller(family) => family,
            _ => unreachable!("normal form always carries Muller acceptance"),
        }
    }

    pub fn is_accepting_loop(&self, l: &Loop) -> bool {
        self.family().contains(l.states())
    }

    /// Swap accepting and rejecting loops; the structure is unchanged.
    pub fn complement_family(&self) -> MullerNormalForm {
        let complemented: BTreeSet<StateSet> = self
            .loops
            .iter()
            .filter(|l| !self.family().contains(l.states()))
            .map(|l| l.states().clone())
            .collect();
        MullerNormalForm {
            automaton: self
                .automaton
                .with_acceptance(Acceptance::Muller(complemented))
                .expect("structure unchanged"),
            loops: self.loops.clone(),
            latched: self.latched,
        }
    }
}

/// Reduce any acceptance variant to Muller acceptance over the loop table.
pub fn to_muller_normal_form(
    automaton: &DetAutomaton,
    limits: &Limits,
) -> Result<MullerNormalForm, Error> {
    let (structure, latched) = match automaton.acceptance() {
        Acceptance::Reach(f) => (latch(automaton, f, false), true),
        Acceptance::Safety(f) => (latch(automaton, f, true), true),
        _ => (automaton.clone(), false),
    };
    let loops = enumerate_loops(&structure, limits)?;
    let family: BTreeSet<StateSet> = loops
        .iter()
        .filter(|l| loop_accepts(automaton.acceptance(), l))
        .map(|l| l.states().clone())
        .collect();
    let automaton = structure.with_acceptance(Acceptance::Muller(family))?;
    Ok(MullerNormalForm {
        automaton,
        loops,
        latched,
    })
}

/// Is a run whose infinity set is `l` accepting under `original`?
///
/// For occurrence conditions, `l` ranges over the latched structure, whose
/// state `2q + bit` wraps original state `q`.
fn loop_accepts(original: &Acceptance, l: &Loop) -> bool {
    match original {
        // The latch bit is constant on a loop: it never decreases along
        // edges, and a loop cycles through all of its states.
        Acceptance::Reach(_) => l.iter().all(|&q| q % 2 == 1),
        Acceptance::Safety(_) => l.iter().all(|&q| q % 2 == 0),
        Acceptance::Buchi(_) | Acceptance::CoBuchi(_) | Acceptance::Parity(_) => {
            original.evaluate(&StateSet::new(), l.states())
        }
        Acceptance::Muller(family) => family.contains(l.states()),
    }
}

/// Product with one latch bit: state `2q + bit`, where the bit is set once a
/// state inside `f` (for reach) or outside `f` (for safety) is visited.
fn latch(automaton: &DetAutomaton, f: &StateSet, trip_outside: bool) -> DetAutomaton {
    let trips = |q: StateId| f.contains(&q) != trip_outside;
    let n = automaton.states();
    let mut delta = Vec::with_capacity(2 * n);
    for q in 0..n {
        for bit in 0..2 {
            // Rows are pushed in state order: index 2q + bit.
            delta.push(
                (0..automaton.alphabet().len())
                    .map(|s| {
                        let to = automaton.step_index(q, s);
                        let new_bit = if bit == 1 || trips(to) { 1 } else { bit };
                        2 * to + new_bit
                    })
                    .collect(),
            );
        }
    }
    let initial = 2 * automaton.initial() + usize::from(trips(automaton.initial()));
    DetAutomaton::new(
        automaton.alphabet().clone(),
        delta,
        initial,
        // Placeholder; the caller rewrites the acceptance over the loops.
        Acceptance::Muller(BTreeSet::new()),
    )
    .expect("latched structure is well-formed")
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use crate::Limits;

    fn loops_of(a: &DetAutomaton) -> Vec<StateSet> {
        enumerate_loops(a, &Limits::default())
            .unwrap()
            .into_iter()
            .map(Loop::into_states)
            .collect()
    }

    #[test]
    fn loops_of_the_last_letter_tracker() {
        let a = inf_many_a();
        assert_eq!(loops_of(&a), vec![set(&[0]), set(&[1]), set(&[0, 1])]);
    }

    #[test]
    fn singleton_loops_need_a_self_loop() {
        // 0 and 1 swap on every letter: {0} and {1} are not loops, {0,1} is.
        let a = DetAutomaton::new(
            alphabet("ab"),
            vec![vec![1, 1], vec![0, 0]],
            0,
            Acceptance::Buchi(set(&[0])),
        )
        .unwrap();
        assert_eq!(loops_of(&a), vec![set(&[0, 1])]);
    }

    #[test]
    fn loops_must_be_reachable() {
        // State 2 has a self-loop but is unreachable from 0.
        let a = DetAutomaton::new(
            alphabet("ab"),
            vec![vec![0, 1], vec![0, 1], vec![2, 2]],
            0,
            Acceptance::Buchi(set(&[0])),
        )
        .unwrap();
        assert_eq!(loops_of(&a), vec![set(&[0]), set(&[1]), set(&[0, 1])]);
        assert!(Loop::try_new(&a, set(&[2])).is_err());
        assert!(Loop::try_new(&a, set(&[0])).is_ok());
        assert!(Loop::try_new(&a, set(&[0, 1])).is_ok());
    }

    #[test]
    fn loop_enumeration_respects_the_state_limit() {
        let a = inf_many_a();
        assert!(matches!(
            enumerate_loops(&a, &Limits::with_max_states(1)),
            Err(Error::StateLimitExceeded(2, 1))
        ));
    }

    #[test]
    fn strongly_connected_but_partial_subsets_are_rejected() {
        // Cycle 0 → 1 → 2 → 0 on `a`; self-loops on `b`.
        let a = DetAutomaton::new(
            alphabet("ab"),
            vec![vec![1, 0], vec![2, 1], vec![0, 2]],
            0,
            Acceptance::Buchi(set(&[0])),
        )
        .unwrap();
        let loops = loops_of(&a);
        assert!(loops.contains(&set(&[0])));
        assert!(loops.contains(&set(&[1])));
        assert!(loops.contains(&set(&[2])));
        assert!(loops.contains(&set(&[0, 1, 2])));
        // {0, 1} has edges 0→1 and 1→1 inside, but 1 cannot return to 0.
        assert!(!loops.contains(&set(&[0, 1])));
        assert_eq!(loops.len(), 4);
    }

    #[test]
    fn buchi_normal_form_keeps_the_structure() {
        let nf = to_muller_normal_form(&inf_many_a(), &Limits::default()).unwrap();
        assert!(!nf.latched());
        assert_eq!(nf.automaton().states(), 2);
        assert_eq!(nf.family(), &family(&[&[0], &[0, 1]]));
    }

    #[test]
    fn reach_normal_form_latches_the_visit() {
        let nf = to_muller_normal_form(&ab_prefix(), &Limits::default()).unwrap();
        assert!(nf.latched());
        // Latched accept sink 2 ↦ 5, reject sink 3 ↦ 6 (both with bit set
        // for the accept sink: 2·2+1 = 5, and bit clear for reject: 2·3+0 = 6).
        let fam = nf.family();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam.iter().next().unwrap(), &set(&[5]));
        for w in ["ab(ab)^w", "(ab)^w", "aba(b)^w"] {
            assert!(nf.automaton().accepts(&word(w)).unwrap());
        }
        for w in ["(b)^w", "a(a)^w"] {
            assert!(!nf.automaton().accepts(&word(w)).unwrap());
        }
    }

    #[test]
    fn safety_normal_form_latches_the_escape() {
        let a = DetAutomaton::new(
            alphabet("ab"),
            vec![vec![0, 1], vec![0, 2], vec![2, 2]],
            0,
            Acceptance::Safety(set(&[0, 1])),
        )
        .unwrap();
        let nf = to_muller_normal_form(&a, &Limits::default()).unwrap();
        assert!(nf.latched());
        for w in ["(a)^w", "(ba)^w"] {
            assert!(nf.automaton().accepts(&word(w)).unwrap());
        }
        for w in ["(bb)^w", "bba(a)^w"] {
            assert!(!nf.automaton().accepts(&word(w)).unwrap());
        }
    }

    #[test]
    fn complemented_family_flips_every_loop() {
        let nf = to_muller_normal_form(&inf_many_a(), &Limits::default()).unwrap();
        let co = nf.complement_family();
        assert_eq!(co.family(), &family(&[&[1]]));
        assert_eq!(co.loops(), nf.loops());
    }

    #[test]
    fn muller_families_are_trimmed_to_loops() {
        // {0} is not a loop here (0 and 1 swap); the family entry is dropped.
        let a = DetAutomaton::new(
            alphabet("ab"),
            vec![vec![1, 1], vec![0, 0]],
            0,
            Acceptance::Muller(family(&[&[0], &[0, 1]])),
        )
        .unwrap();
        let nf = to_muller_normal_form(&a, &Limits::default()).unwrap();
        assert_eq!(nf.family(), &family(&[&[0, 1]]));
    }
}
