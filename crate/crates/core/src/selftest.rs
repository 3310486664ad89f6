//! Built-in cross-check suites behind the `selftest` command.
//!
//! Each suite pits a production algorithm against the corresponding
//! brute-force reference from [`crate::oracle`] on a small corpus and stops
//! at the first disagreement, reporting the offending instance in full.

use std::collections::BTreeSet;

use rand::Rng;

use crate::automata::{
    equivalent, serialize_automaton, Acceptance, DetAutomaton, StateSet,
};
use crate::classify::classify;
use crate::expansion::embed;
use crate::games::{serialize_game, solve, verify_strategy, GameFile, GameGraph, Objective};
use crate::generate::{
    random_automaton, random_parity_game, random_sparse_muller_game, random_up_word, rng,
};
use crate::oracle;
use crate::words::{Alphabet, FiniteWord, UpWord};
use crate::{Error, Limits};

pub struct SuiteOutcome {
    pub name: &'static str,
    pub result: Result<usize, Error>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }

    pub fn line(&self) -> String {
        match &self.result {
            Ok(n) => format!("ok   {} ({n} instances)", self.name),
            Err(e) => format!("FAIL {}: {e}", self.name),
        }
    }
}

/// All suites with their default corpus sizes.
pub fn run(seed: u64, limits: &Limits) -> Vec<SuiteOutcome> {
    vec![
        SuiteOutcome {
            name: "classifier vs loop-table reference, exhaustive 2-state",
            result: classifier_exhaustive(2, limits),
        },
        SuiteOutcome {
            name: "classifier vs loop-table reference, random 4-state",
            result: classifier_random(seed, 120, 4, limits),
        },
        SuiteOutcome {
            name: "parity solver vs strategy enumeration",
            result: solver_parity_random(seed.wrapping_add(1), 120, limits),
        },
        SuiteOutcome {
            name: "muller solver vs expansion enumeration",
            result: solver_muller_random(seed.wrapping_add(2), 30, limits),
        },
        SuiteOutcome {
            name: "alphabet embedding membership and composition",
            result: embedding_random(seed.wrapping_add(3), 120, limits),
        },
    ]
}

fn letters(s: &str) -> Alphabet {
    Alphabet::new(s.chars()).expect("fixed alphabet")
}

fn automaton_disagreement(what: &str, a: &DetAutomaton) -> Error {
    Error::Invalid(format!("{what} on:\n{}", serialize_automaton(a)))
}

fn game_disagreement(what: &str, g: &GameGraph, objective: &Objective) -> Error {
    let file = GameFile {
        graph: g.clone(),
        objective: Some(objective.clone()),
    };
    Error::Invalid(format!("{what} on:\n{}", serialize_game(&file)))
}

fn check_classifier(a: &DetAutomaton, limits: &Limits) -> Result<(), Error> {
    let direct = classify(a, limits)?;
    if direct.memberships != oracle::memberships(a) {
        return Err(automaton_disagreement(
            "classifier memberships disagree with the loop-table reference",
            a,
        ));
    }
    if direct.label != oracle::label(a) {
        return Err(automaton_disagreement(
            "classifier label disagrees with the loop-table reference",
            a,
        ));
    }
    Ok(())
}

/// Every deterministic complete Muller automaton over two letters with up to
/// `max_states` states, the family ranging over all subsets of the loop
/// table.
pub fn classifier_exhaustive(max_states: usize, limits: &Limits) -> Result<usize, Error> {
    let ab = letters("ab");
    let mut checked = 0;
    for n in 1..=max_states {
        let combos = (n as u64).pow(2 * n as u32);
        for code in 0..combos {
            let mut rest = code;
            let delta: Vec<Vec<usize>> = (0..n)
                .map(|_| {
                    (0..2)
                        .map(|_| {
                            let t = (rest % n as u64) as usize;
                            rest /= n as u64;
                            t
                        })
                        .collect()
                })
                .collect();
            let base = DetAutomaton::new(
                ab.clone(),
                delta,
                0,
                Acceptance::Buchi(StateSet::new()),
            )?;
            let table: Vec<StateSet> = oracle::loops(&base).into_iter().collect();
            for mask in 0..1u64 << table.len() {
                let family: BTreeSet<StateSet> = table
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask >> i & 1 == 1)
                    .map(|(_, s)| s.clone())
                    .collect();
                let a = base.with_acceptance(Acceptance::Muller(family))?;
                check_classifier(&a, limits)?;
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Seeded random automata of every acceptance kind against the reference.
pub fn classifier_random(
    seed: u64,
    count: usize,
    states: usize,
    limits: &Limits,
) -> Result<usize, Error> {
    let ab = letters("ab");
    let mut r = rng(seed);
    for _ in 0..count {
        let a = random_automaton(&mut r, &ab, states, limits)?;
        check_classifier(&a, limits)?;
    }
    Ok(count)
}

/// Seeded random parity games (up to 4 vertices, priorities 0..=2) against
/// positional strategy enumeration; every solver output is also re-verified.
pub fn solver_parity_random(seed: u64, count: usize, limits: &Limits) -> Result<usize, Error> {
    let mut r = rng(seed);
    for round in 0..count {
        let vertices = 2 + round % 3;
        let (g, priorities) = random_parity_game(&mut r, vertices, 2);
        let objective = Objective::Parity(priorities.clone());
        let direct = solve(&g, &objective, limits)?;
        let (win0, win1) = oracle::solve_parity(&g, &priorities);
        if direct.win0 != win0 || direct.win1 != win1 {
            return Err(game_disagreement(
                "parity regions disagree with strategy enumeration",
                &g,
                &objective,
            ));
        }
        if !verify_strategy(&g, &objective, &direct)? {
            return Err(game_disagreement(
                "parity strategies fail verification",
                &g,
                &objective,
            ));
        }
    }
    Ok(count)
}

/// Seeded sparse Muller games against strategy enumeration over the record
/// expansion. Games whose enumeration would be too large are skipped, so the
/// returned count is the number actually compared.
pub fn solver_muller_random(seed: u64, target: usize, limits: &Limits) -> Result<usize, Error> {
    let mut r = rng(seed);
    let mut checked = 0;
    for round in 0..target * 8 {
        if checked >= target {
            break;
        }
        let vertices = 2 + round % 3;
        let (g, family) = random_sparse_muller_game(&mut r, vertices);
        let Some((win0, win1)) = oracle::solve_muller(&g, &family, 2048) else {
            continue;
        };
        let objective = Objective::Muller(family);
        let direct = solve(&g, &objective, limits)?;
        if direct.win0 != win0 || direct.win1 != win1 {
            return Err(game_disagreement(
                "muller regions disagree with expansion enumeration",
                &g,
                &objective,
            ));
        }
        if !verify_strategy(&g, &objective, &direct)? {
            return Err(game_disagreement(
                "muller strategies fail verification",
                &g,
                &objective,
            ));
        }
        checked += 1;
    }
    if checked == 0 {
        return Err(Error::Invalid(
            "no generated muller game was small enough to enumerate".to_string(),
        ));
    }
    Ok(checked)
}

/// Embedding keeps membership for old-alphabet words, rejects words that
/// touch a fresh letter, and composes: A→C equals A→B→C up to language
/// equivalence.
pub fn embedding_random(seed: u64, count: usize, limits: &Limits) -> Result<usize, Error> {
    let ab = letters("ab");
    let abc = letters("abc");
    let abcd = letters("abcd");
    let mut r = rng(seed);
    for round in 0..count {
        let a = random_automaton(&mut r, &ab, 3, limits)?;
        let big = embed(&a, &abc, limits)?;

        let w = random_up_word(&mut r, &ab, 3, 3);
        if a.accepts(&w)? != big.accepts(&w)? {
            return Err(automaton_disagreement("embedding changed membership", &a));
        }

        let mut period: Vec<char> = (0..r.gen_range(0..=2))
            .map(|_| abc.symbols()[r.gen_range(0..3)])
            .collect();
        period.push('c');
        let fresh = UpWord::new(
            random_up_word(&mut r, &abc, 2, 1).prefix().clone(),
            FiniteWord::new(period),
        )?;
        if big.accepts(&fresh)? {
            return Err(automaton_disagreement(
                "embedding accepted a word through the fresh letter",
                &a,
            ));
        }

        if round % 8 == 0 {
            let two_step = embed(&big, &abcd, limits)?;
            let direct = embed(&a, &abcd, limits)?;
            if !equivalent(&two_step, &direct, limits)? {
                return Err(automaton_disagreement(
                    "two-step embedding differs from the direct embedding",
                    &a,
                ));
            }
        }
    }
    Ok(count)
}
