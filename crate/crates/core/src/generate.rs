//! Seeded construction of random test instances, plus a fixed gallery of
//! two-letter languages covering every classification label.
//!
//! Everything is driven by an explicit [`ChaCha8Rng`] so a seed pins the
//! whole instance stream; the same seed always yields the same sequence of
//! automata, games, and words.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automata::{enumerate_loops, Acceptance, DetAutomaton, StateSet};
use crate::classify::ClassLabel;
use crate::games::{GameGraph, Player, VertexSet};
use crate::words::{Alphabet, FiniteWord, UpWord};
use crate::{Error, Limits};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_delta(rng: &mut ChaCha8Rng, symbols: usize, states: usize) -> Vec<Vec<usize>> {
    (0..states)
        .map(|_| (0..symbols).map(|_| rng.gen_range(0..states)).collect())
        .collect()
}

fn random_state_set(rng: &mut ChaCha8Rng, states: usize) -> StateSet {
    (0..states).filter(|_| rng.gen_bool(0.5)).collect()
}

/// A complete automaton with uniform transitions and a random acceptance
/// condition of any of the six kinds.
pub fn random_automaton(
    rng: &mut ChaCha8Rng,
    alphabet: &Alphabet,
    states: usize,
    limits: &Limits,
) -> Result<DetAutomaton, Error> {
    let delta = random_delta(rng, alphabet.len(), states);
    let acceptance = match rng.gen_range(0..6) {
        0 => Acceptance::Reach(random_state_set(rng, states)),
        1 => Acceptance::Safety(random_state_set(rng, states)),
        2 => Acceptance::Buchi(random_state_set(rng, states)),
        3 => Acceptance::CoBuchi(random_state_set(rng, states)),
        4 => Acceptance::Parity((0..states).map(|_| rng.gen_range(0..4)).collect()),
        _ => {
            let base = DetAutomaton::new(
                alphabet.clone(),
                delta.clone(),
                0,
                Acceptance::Buchi(StateSet::new()),
            )?;
            Acceptance::Muller(random_loop_family(rng, &base, limits)?)
        }
    };
    DetAutomaton::new(alphabet.clone(), delta, 0, acceptance)
}

/// A complete automaton with uniform transitions and a random sub-family of
/// its own loop table as the acceptance condition.
pub fn random_muller_automaton(
    rng: &mut ChaCha8Rng,
    alphabet: &Alphabet,
    states: usize,
    limits: &Limits,
) -> Result<DetAutomaton, Error> {
    let delta = random_delta(rng, alphabet.len(), states);
    let base = DetAutomaton::new(
        alphabet.clone(),
        delta.clone(),
        0,
        Acceptance::Buchi(StateSet::new()),
    )?;
    let family = random_loop_family(rng, &base, limits)?;
    DetAutomaton::new(alphabet.clone(), delta, 0, Acceptance::Muller(family))
}

fn random_loop_family(
    rng: &mut ChaCha8Rng,
    automaton: &DetAutomaton,
    limits: &Limits,
) -> Result<BTreeSet<StateSet>, Error> {
    let loops = enumerate_loops(automaton, limits)?;
    Ok(loops
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .map(|l| l.states().clone())
        .collect())
}

/// An ultimately periodic word over `alphabet` with bounded prefix and
/// period lengths (the period is never empty).
pub fn random_up_word(
    rng: &mut ChaCha8Rng,
    alphabet: &Alphabet,
    max_prefix: usize,
    max_period: usize,
) -> UpWord {
    let symbols = alphabet.symbols();
    let prefix_len = rng.gen_range(0..=max_prefix);
    let period_len = rng.gen_range(1..=max_period.max(1));
    let prefix: Vec<char> = (0..prefix_len)
        .map(|_| symbols[rng.gen_range(0..symbols.len())])
        .collect();
    let period: Vec<char> = (0..period_len)
        .map(|_| symbols[rng.gen_range(0..symbols.len())])
        .collect();
    UpWord::new(FiniteWord::new(prefix), FiniteWord::new(period))
        .expect("generated periods are non-empty")
}

fn random_owners(rng: &mut ChaCha8Rng, vertices: usize) -> Vec<Player> {
    (0..vertices)
        .map(|_| {
            if rng.gen_bool(0.5) {
                Player::Zero
            } else {
                Player::One
            }
        })
        .collect()
}

/// A random arena where every vertex has between 1 and `max_degree` distinct
/// successors.
pub fn random_game(rng: &mut ChaCha8Rng, vertices: usize, max_degree: usize) -> GameGraph {
    let owner = random_owners(rng, vertices);
    let succ = (0..vertices)
        .map(|_| {
            let degree = rng.gen_range(1..=max_degree.max(1));
            let mut row: Vec<usize> = (0..degree).map(|_| rng.gen_range(0..vertices)).collect();
            row.sort_unstable();
            row.dedup();
            row
        })
        .collect();
    GameGraph::new(owner, succ).expect("generated arenas are well-formed")
}

/// A random min-parity instance with out-degree at most 2 and priorities in
/// `0..=max_priority`.
pub fn random_parity_game(
    rng: &mut ChaCha8Rng,
    vertices: usize,
    max_priority: u32,
) -> (GameGraph, Vec<u32>) {
    let game = random_game(rng, vertices, 2);
    let priorities = (0..vertices).map(|_| rng.gen_range(0..=max_priority)).collect();
    (game, priorities)
}

/// A mostly-deterministic arena (out-degree 1 except for at most two branch
/// vertices) with a random family of vertex sets, sized so brute-force
/// strategy enumeration on its record expansion stays cheap.
pub fn random_sparse_muller_game(
    rng: &mut ChaCha8Rng,
    vertices: usize,
) -> (GameGraph, BTreeSet<VertexSet>) {
    let owner = random_owners(rng, vertices);
    let mut branches = 0;
    let succ = (0..vertices)
        .map(|_| {
            let degree = if branches < 2 && rng.gen_bool(0.4) {
                branches += 1;
                2
            } else {
                1
            };
            let mut row: Vec<usize> = (0..degree).map(|_| rng.gen_range(0..vertices)).collect();
            row.sort_unstable();
            row.dedup();
            row
        })
        .collect();
    let game = GameGraph::new(owner, succ).expect("generated arenas are well-formed");
    let family = (1u64..1 << vertices)
        .filter(|_| rng.gen_bool(0.5))
        .map(|mask| (0..vertices).filter(|v| mask >> v & 1 == 1).collect())
        .collect();
    (game, family)
}

fn two_letter(delta: Vec<Vec<usize>>, acceptance: Acceptance) -> DetAutomaton {
    DetAutomaton::new(
        Alphabet::new("ab".chars()).expect("fixed alphabet"),
        delta,
        0,
        acceptance,
    )
    .expect("fixed automaton")
}

/// Words starting with `ab`: open with a finite complement basis.
pub fn zoo_clopen() -> DetAutomaton {
    two_letter(
        vec![vec![1, 3], vec![3, 2], vec![2, 2], vec![3, 3]],
        Acceptance::Reach([2].into()),
    )
}

/// Words containing at least one `b`: open but not closed.
pub fn zoo_open() -> DetAutomaton {
    two_letter(
        vec![vec![0, 1], vec![1, 1]],
        Acceptance::Reach([1].into()),
    )
}

/// The single word `aaa…`: closed but not open.
pub fn zoo_closed() -> DetAutomaton {
    two_letter(
        vec![vec![0, 1], vec![1, 1]],
        Acceptance::Safety([0].into()),
    )
}

/// Words with exactly one `b`.
pub fn zoo_delta2() -> DetAutomaton {
    two_letter(
        vec![vec![0, 1], vec![1, 2], vec![2, 2]],
        Acceptance::Muller([[1].into()].into()),
    )
}

/// Words with finitely many `a`.
pub fn zoo_sigma2() -> DetAutomaton {
    two_letter(
        vec![vec![0, 1], vec![0, 1]],
        Acceptance::CoBuchi([1].into()),
    )
}

/// Words with infinitely many `a`.
pub fn zoo_pi2() -> DetAutomaton {
    two_letter(
        vec![vec![0, 1], vec![0, 1]],
        Acceptance::Buchi([0].into()),
    )
}

/// A family failing both closure conditions at once.
pub fn zoo_delta3() -> DetAutomaton {
    two_letter(
        vec![vec![1, 0], vec![0, 2], vec![2, 0]],
        Acceptance::Muller([[0, 1].into(), [2].into()].into()),
    )
}

/// One fixed two-letter automaton per classification label, in the order of
/// [`ClassLabel::ALL`].
pub fn label_zoo() -> Vec<(ClassLabel, DetAutomaton)> {
    vec![
        (ClassLabel::Clopen, zoo_clopen()),
        (ClassLabel::OpenProper, zoo_open()),
        (ClassLabel::ClosedProper, zoo_closed()),
        (ClassLabel::Delta2Proper, zoo_delta2()),
        (ClassLabel::Sigma2Proper, zoo_sigma2()),
        (ClassLabel::Pi2Proper, zoo_pi2()),
        (ClassLabel::Delta3Proper, zoo_delta3()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;

    const L: Limits = Limits::DEFAULT;

    fn ab() -> Alphabet {
        Alphabet::new("ab".chars()).unwrap()
    }

    #[test]
    fn seeds_pin_the_stream() {
        let mut first = rng(7);
        let mut second = rng(7);
        for _ in 0..20 {
            let a = random_automaton(&mut first, &ab(), 4, &L).unwrap();
            let b = random_automaton(&mut second, &ab(), 4, &L).unwrap();
            assert_eq!(a, b);
            let (ga, fa) = random_sparse_muller_game(&mut first, 4);
            let (gb, fb) = random_sparse_muller_game(&mut second, 4);
            assert_eq!((ga, fa), (gb, fb));
            assert_eq!(
                random_up_word(&mut first, &ab(), 3, 3),
                random_up_word(&mut second, &ab(), 3, 3)
            );
        }
        let mut other = rng(8);
        let differs = (0..20).any(|_| {
            random_automaton(&mut first, &ab(), 4, &L).unwrap()
                != random_automaton(&mut other, &ab(), 4, &L).unwrap()
        });
        assert!(differs);
    }

    #[test]
    fn every_acceptance_kind_shows_up() {
        let mut r = rng(0);
        let mut kinds = BTreeSet::new();
        for _ in 0..200 {
            let a = random_automaton(&mut r, &ab(), 3, &L).unwrap();
            kinds.insert(a.acceptance().kind());
        }
        assert_eq!(kinds.len(), 6);
    }

    #[test]
    fn muller_families_use_the_loop_table() {
        let mut r = rng(3);
        for _ in 0..50 {
            let a = random_muller_automaton(&mut r, &ab(), 4, &L).unwrap();
            let loops: BTreeSet<StateSet> = enumerate_loops(&a, &L)
                .unwrap()
                .iter()
                .map(|l| l.states().clone())
                .collect();
            match a.acceptance() {
                Acceptance::Muller(family) => assert!(family.is_subset(&loops)),
                other => panic!("expected muller, got {}", other.kind()),
            }
        }
    }

    #[test]
    fn generated_games_are_well_formed_and_sparse() {
        let mut r = rng(11);
        for _ in 0..50 {
            let (g, priorities) = random_parity_game(&mut r, 4, 2);
            assert_eq!(priorities.len(), 4);
            assert!(priorities.iter().all(|&p| p <= 2));
            for v in 0..g.vertices() {
                assert!((1..=2).contains(&g.successors(v).len()));
            }

            let (g, family) = random_sparse_muller_game(&mut r, 4);
            let branches = (0..g.vertices())
                .filter(|&v| g.successors(v).len() > 1)
                .count();
            assert!(branches <= 2);
            assert!(family.iter().all(|s| s.iter().all(|&v| v < 4)));
        }
    }

    #[test]
    fn words_stay_inside_the_alphabet() {
        let mut r = rng(5);
        for _ in 0..100 {
            let w = random_up_word(&mut r, &ab(), 4, 3);
            assert!(!w.period().is_empty());
            assert!(w
                .prefix()
                .iter()
                .chain(w.period().iter())
                .all(|&c| c == 'a' || c == 'b'));
        }
    }

    #[test]
    fn the_zoo_hits_every_label() {
        for (expected, automaton) in label_zoo() {
            let got = classify(&automaton, &L).unwrap().label;
            assert_eq!(got, expected, "zoo automaton for {expected}");
        }
    }
}
