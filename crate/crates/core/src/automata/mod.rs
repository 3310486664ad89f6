//! Deterministic complete automata over ω-words.
//!
//! States are `0..n`; the transition function is total over the declared
//! alphabet. Six acceptance variants share one state-set vocabulary:
//!
//! * `reach F` — some visited state lies in `F`;
//! * `safety F` — every visited state lies in `F`;
//! * `buchi F` — some state of `F` is visited infinitely often;
//! * `cobuchi F` — only states of `F` are visited infinitely often;
//! * `parity` — the least priority seen infinitely often is even;
//! * `muller 𝓕` — the set of states seen infinitely often is a member of `𝓕`.
//!
//! [`loops`] enumerates the possible infinity sets and reduces every variant
//! to a common Muller form; [`ops`] builds complement, synchronized products,
//! emptiness with ultimately periodic witnesses, and language equivalence on
//! top of it; [`format`] reads and writes a line-oriented text format.

mod format;
mod loops;
mod ops;

pub use format::{parse_automaton, serialize_automaton};
pub use loops::{enumerate_loops, to_muller_normal_form, Loop, MullerNormalForm};
pub use ops::{
    accepted_witness, complement, distinguishing_word, equivalent, is_empty, product, ProductMode,
};

use std::collections::BTreeSet;

use crate::words::{Alphabet, UpWord};
use crate::Error;

pub type StateId = usize;
pub type StateSet = BTreeSet<StateId>;

/// Acceptance condition of a [`DetAutomaton`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Acceptance {
    /// Some visited state is in the set.
    Reach(StateSet),
    /// Every visited state is in the set.
    Safety(StateSet),
    /// Some state of the set is visited infinitely often.
    Buchi(StateSet),
    /// Only states of the set are visited infinitely often.
    CoBuchi(StateSet),
    /// `priorities[q]` for each state; least priority seen infinitely often
    /// must be even.
    Parity(Vec<u32>),
    /// The infinity set must be a member of the family.
    Muller(BTreeSet<StateSet>),
}

impl Acceptance {
    pub fn kind(&self) -> &'static str {
        match self {
            Acceptance::Reach(_) => "reach",
            Acceptance::Safety(_) => "safety",
            Acceptance::Buchi(_) => "buchi",
            Acceptance::CoBuchi(_) => "cobuchi",
            Acceptance::Parity(_) => "parity",
            Acceptance::Muller(_) => "muller",
        }
    }

    /// Evaluate the condition on a run described by its set of visited
    /// states and its infinity set.
    fn evaluate(&self, visited: &StateSet, inf: &StateSet) -> bool {
        match self {
            Acceptance::Reach(f) => !visited.is_disjoint(f),
            Acceptance::Safety(f) => visited.is_subset(f),
            Acceptance::Buchi(f) => !inf.is_disjoint(f),
            Acceptance::CoBuchi(f) => inf.is_subset(f),
            Acceptance::Parity(priorities) => {
                let min = inf.iter().map(|&q| priorities[q]).min();
                matches!(min, Some(p) if p % 2 == 0)
            }
            Acceptance::Muller(family) => family.contains(inf),
        }
    }

    fn validate(&self, states: usize) -> Result<(), Error> {
        let check_set = |set: &StateSet| {
            if let Some(&q) = set.iter().find(|&&q| q >= states) {
                Err(Error::StateOutOfRange(q, states))
            } else {
                Ok(())
            }
        };
        match self {
            Acceptance::Reach(f)
            | Acceptance::Safety(f)
            | Acceptance::Buchi(f)
            | Acceptance::CoBuchi(f) => check_set(f),
            Acceptance::Parity(priorities) => {
                if priorities.len() != states {
                    Err(Error::MissingPriority(priorities.len().min(states)))
                } else {
                    Ok(())
                }
            }
            Acceptance::Muller(family) => family.iter().try_for_each(check_set),
        }
    }
}

/// A deterministic, complete automaton over ω-words.
///
/// Immutable after construction; all operations produce new automata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetAutomaton {
    alphabet: Alphabet,
    /// `delta[state][symbol index]`, total by construction.
    delta: Vec<Vec<StateId>>,
    initial: StateId,
    acceptance: Acceptance,
}

impl DetAutomaton {
    pub fn new(
        alphabet: Alphabet,
        delta: Vec<Vec<StateId>>,
        initial: StateId,
        acceptance: Acceptance,
    ) -> Result<Self, Error> {
        let states = delta.len();
        if states == 0 {
            return Err(Error::Invalid("automaton needs at least one state".into()));
        }
        if initial >= states {
            return Err(Error::StateOutOfRange(initial, states));
        }
        for row in &delta {
            if row.len() != alphabet.len() {
                return Err(Error::Invalid(format!(
                    "transition table row has {} entries for {} symbols",
                    row.len(),
                    alphabet.len()
                )));
            }
            if let Some(&q) = row.iter().find(|&&q| q >= states) {
                return Err(Error::StateOutOfRange(q, states));
            }
        }
        acceptance.validate(states)?;
        Ok(DetAutomaton {
            alphabet,
            delta,
            initial,
            acceptance,
        })
    }

    pub fn states(&self) -> usize {
        self.delta.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn acceptance(&self) -> &Acceptance {
        &self.acceptance
    }

    /// Successor under a symbol index (symbol in declaration order).
    pub fn step_index(&self, state: StateId, symbol_index: usize) -> StateId {
        self.delta[state][symbol_index]
    }

    /// Successor under a symbol.
    pub fn step(&self, state: StateId, symbol: char) -> Result<StateId, Error> {
        Ok(self.delta[state][self.alphabet.index_of(symbol)?])
    }

    /// Replace the acceptance condition, keeping the structure.
    pub fn with_acceptance(&self, acceptance: Acceptance) -> Result<DetAutomaton, Error> {
        DetAutomaton::new(
            self.alphabet.clone(),
            self.delta.clone(),
            self.initial,
            acceptance,
        )
    }

    /// States reachable from `from`, including `from` itself, in BFS order.
    pub fn reachable_from(&self, from: StateId) -> Vec<StateId> {
        let mut seen = vec![false; self.states()];
        let mut order = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        seen[from] = true;
        queue.push_back(from);
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for &next in &self.delta[q] {
                if !seen[next] {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
        order
    }

    /// States reachable from the initial state, in BFS order.
    pub fn reachable(&self) -> Vec<StateId> {
        self.reachable_from(self.initial)
    }

    /// Run the automaton on the ultimately periodic word and decide
    /// acceptance.
    ///
    /// The run is simulated through the prefix and then through copies of the
    /// period until the state at a period boundary repeats; the states
    /// traversed between the two occurrences of that boundary state form the
    /// infinity set of the run.
    pub fn accepts(&self, word: &UpWord) -> Result<bool, Error> {
        let (visited, inf) = self.run_sets(word)?;
        Ok(self.acceptance.evaluate(&visited, &inf))
    }

    /// Visited-state set and infinity set of the unique run on `word`.
    pub(crate) fn run_sets(&self, word: &UpWord) -> Result<(StateSet, StateSet), Error> {
        let prefix_indices: Vec<usize> = word
            .prefix()
            .iter()
            .map(|&c| self.alphabet.index_of(c))
            .collect::<Result<_, _>>()?;
        let period_indices: Vec<usize> = word
            .period()
            .iter()
            .map(|&c| self.alphabet.index_of(c))
            .collect::<Result<_, _>>()?;

        let mut visited = StateSet::new();
        let mut state = self.initial;
        visited.insert(state);
        for &s in &prefix_indices {
            state = self.delta[state][s];
            visited.insert(state);
        }

        // Iterate the period; boundary states must repeat within n+1 rounds.
        let mut boundary_round = vec![None; self.states()];
        let mut trace_per_round: Vec<Vec<StateId>> = Vec::new();
        let (first, again) = loop {
            match boundary_round[state] {
                Some(round) => break (round, trace_per_round.len()),
                None => boundary_round[state] = Some(trace_per_round.len()),
            }
            let mut trace = Vec::with_capacity(period_indices.len());
            for &s in &period_indices {
                state = self.delta[state][s];
                visited.insert(state);
                trace.push(state);
            }
            trace_per_round.push(trace);
        };

        let inf: StateSet = trace_per_round[first..again]
            .iter()
            .flatten()
            .copied()
            .collect();
        Ok((visited, inf))
    }
}
