//! Brute-force reference implementations used to cross-check the main
//! algorithms on small inputs.
//!
//! Everything here trades efficiency for directness: subset enumeration
//! instead of incremental search, strategy enumeration instead of attractor
//! fixpoints, and acceptance evaluated straight from its definition. Inputs
//! are expected to stay small (a handful of states or vertices).

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::automata::{Acceptance, DetAutomaton, StateSet};
use crate::classify::{ClassLabel, Memberships};
use crate::games::{GameGraph, Player, VertexId, VertexSet};
use crate::words::UpWord;
use crate::Error;

fn plain_delta(a: &DetAutomaton) -> Vec<Vec<usize>> {
    (0..a.states())
        .map(|q| (0..a.alphabet().len()).map(|s| a.step_index(q, s)).collect())
        .collect()
}

fn bfs(succ: &[Vec<usize>], from: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([from]);
    let mut queue = vec![from];
    while let Some(q) = queue.pop() {
        for &t in &succ[q] {
            if seen.insert(t) {
                queue.push(t);
            }
        }
    }
    seen
}

fn is_loop(succ: &[Vec<usize>], set: &BTreeSet<usize>) -> bool {
    if !set.iter().any(|&q| succ[q].iter().any(|t| set.contains(t))) {
        return false;
    }
    set.iter().all(|&s| {
        let mut seen = BTreeSet::from([s]);
        let mut queue = vec![s];
        while let Some(q) = queue.pop() {
            for &t in &succ[q] {
                if set.contains(&t) && seen.insert(t) {
                    queue.push(t);
                }
            }
        }
        seen.len() == set.len()
    })
}

fn raw_loops(succ: &[Vec<usize>], initial: usize) -> BTreeSet<BTreeSet<usize>> {
    let reach: Vec<usize> = bfs(succ, initial).into_iter().collect();
    assert!(
        reach.len() <= 20,
        "subset enumeration over {} states is not sensible",
        reach.len()
    );
    let mut out = BTreeSet::new();
    for mask in 1u32..1 << reach.len() {
        let set: BTreeSet<usize> = reach
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &q)| q)
            .collect();
        if is_loop(succ, &set) {
            out.insert(set);
        }
    }
    out
}

/// Reachable loop sets of `a` by subset enumeration: a state set qualifies
/// when it can be entered from the initial state, its induced subgraph is
/// strongly connected, and it carries at least one internal edge.
pub fn loops(a: &DetAutomaton) -> BTreeSet<StateSet> {
    raw_loops(&plain_delta(a), a.initial())
}

enum LoopTest {
    InfMeets(StateSet),
    InfInside(StateSet),
    MinEven(Vec<u32>),
    InFamily(BTreeSet<StateSet>),
    OddIds,
    EvenIds,
}

impl LoopTest {
    fn accepted(&self, s: &BTreeSet<usize>) -> bool {
        match self {
            LoopTest::InfMeets(f) => s.iter().any(|x| f.contains(x)),
            LoopTest::InfInside(f) => s.is_subset(f),
            LoopTest::MinEven(p) => s.iter().map(|&x| p[x]).min().unwrap_or(0) % 2 == 0,
            LoopTest::InFamily(fam) => fam.contains(s),
            LoopTest::OddIds => s.iter().next().unwrap() % 2 == 1,
            LoopTest::EvenIds => s.iter().next().unwrap() % 2 == 0,
        }
    }
}

struct LoopView {
    delta: Vec<Vec<usize>>,
    initial: usize,
    test: LoopTest,
}

/// Doubles the state space with a sticky bit recording whether a tripping
/// state was ever visited, so prefix-sensitive acceptance becomes a condition
/// on infinity sets alone. State `2q + b` is "at `q` with bit `b`".
fn latched(
    plain: &[Vec<usize>],
    initial: usize,
    trip: impl Fn(usize) -> bool,
    test: LoopTest,
) -> LoopView {
    let mut delta = vec![Vec::new(); 2 * plain.len()];
    for (q, row) in plain.iter().enumerate() {
        for b in 0..2 {
            delta[2 * q + b] = row.iter().map(|&t| 2 * t + (b | trip(t) as usize)).collect();
        }
    }
    LoopView {
        delta,
        initial: 2 * initial + trip(initial) as usize,
        test,
    }
}

fn loop_view(a: &DetAutomaton) -> LoopView {
    let plain = plain_delta(a);
    let initial = a.initial();
    match a.acceptance() {
        Acceptance::Reach(t) => latched(&plain, initial, |q| t.contains(&q), LoopTest::OddIds),
        Acceptance::Safety(t) => latched(&plain, initial, |q| !t.contains(&q), LoopTest::EvenIds),
        Acceptance::Buchi(f) => LoopView {
            delta: plain,
            initial,
            test: LoopTest::InfMeets(f.clone()),
        },
        Acceptance::CoBuchi(f) => LoopView {
            delta: plain,
            initial,
            test: LoopTest::InfInside(f.clone()),
        },
        Acceptance::Parity(p) => LoopView {
            delta: plain,
            initial,
            test: LoopTest::MinEven(p.clone()),
        },
        Acceptance::Muller(fam) => LoopView {
            delta: plain,
            initial,
            test: LoopTest::InFamily(fam.clone()),
        },
    }
}

/// Topological memberships of the recognized language, computed from the
/// loop table alone: a state is non-empty when it can reach an accepted loop
/// and universal when it cannot reach a rejected one, the language is closed
/// when no rejected loop sits inside the non-empty part, open when every
/// accepted loop touches a universal state, and the level-two memberships
/// are downward and upward closure of acceptance over nested loops.
pub fn memberships(a: &DetAutomaton) -> Memberships {
    let view = loop_view(a);
    let loops = raw_loops(&view.delta, view.initial);
    let mut nonempty = vec![false; view.delta.len()];
    let mut universal = vec![false; view.delta.len()];
    for &q in &bfs(&view.delta, view.initial) {
        let reach_q = bfs(&view.delta, q);
        let touches = |s: &BTreeSet<usize>| s.iter().any(|x| reach_q.contains(x));
        nonempty[q] = loops.iter().any(|s| view.test.accepted(s) && touches(s));
        universal[q] = loops.iter().all(|s| view.test.accepted(s) || !touches(s));
    }
    let closed = loops
        .iter()
        .all(|s| view.test.accepted(s) || !s.iter().all(|&q| nonempty[q]));
    let open = loops
        .iter()
        .all(|s| !view.test.accepted(s) || s.iter().any(|&q| universal[q]));
    let sigma2 = loops.iter().all(|s| {
        !view.test.accepted(s)
            || loops
                .iter()
                .filter(|t| t.is_subset(s))
                .all(|t| view.test.accepted(t))
    });
    let pi2 = loops.iter().all(|s| {
        !view.test.accepted(s)
            || loops
                .iter()
                .filter(|t| s.is_subset(t))
                .all(|t| view.test.accepted(t))
    });
    Memberships {
        open,
        closed,
        sigma2,
        pi2,
    }
}

/// Hierarchy label implied by [`memberships`].
pub fn label(a: &DetAutomaton) -> ClassLabel {
    let m = memberships(a);
    if m.open && m.closed {
        ClassLabel::Clopen
    } else if m.open {
        ClassLabel::OpenProper
    } else if m.closed {
        ClassLabel::ClosedProper
    } else if m.sigma2 && m.pi2 {
        ClassLabel::Delta2Proper
    } else if m.sigma2 {
        ClassLabel::Sigma2Proper
    } else if m.pi2 {
        ClassLabel::Pi2Proper
    } else {
        ClassLabel::Delta3Proper
    }
}

/// Word membership by stepping through the run one symbol at a time until a
/// (state, period position) pair repeats.
pub fn accepts(a: &DetAutomaton, word: &UpWord) -> Result<bool, Error> {
    let prefix: Vec<usize> = word
        .prefix()
        .iter()
        .map(|&c| a.alphabet().index_of(c))
        .collect::<Result<_, _>>()?;
    let period: Vec<usize> = word
        .period()
        .iter()
        .map(|&c| a.alphabet().index_of(c))
        .collect::<Result<_, _>>()?;

    let mut state = a.initial();
    let mut everything = BTreeSet::from([state]);
    for &s in &prefix {
        state = a.step_index(state, s);
        everything.insert(state);
    }

    let mut seen_at: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut timeline: Vec<usize> = Vec::new();
    let mut pos = 0;
    let inf: BTreeSet<usize> = loop {
        if let Some(&start) = seen_at.get(&(state, pos)) {
            break timeline[start..].iter().copied().collect();
        }
        seen_at.insert((state, pos), timeline.len());
        timeline.push(state);
        state = a.step_index(state, period[pos]);
        everything.insert(state);
        pos = (pos + 1) % period.len();
    };

    Ok(match a.acceptance() {
        Acceptance::Reach(t) => !everything.is_disjoint(t),
        Acceptance::Safety(t) => everything.is_subset(t),
        Acceptance::Buchi(f) => !inf.is_disjoint(f),
        Acceptance::CoBuchi(f) => inf.is_subset(f),
        Acceptance::Parity(p) => inf.iter().map(|&q| p[q]).min().unwrap() % 2 == 0,
        Acceptance::Muller(fam) => fam.contains(&inf),
    })
}

/// All ways of fixing one successor for each vertex in `owned`.
fn choice_maps(succ: &[Vec<usize>], owned: &[usize]) -> Vec<BTreeMap<usize, usize>> {
    let mut out = vec![BTreeMap::new()];
    for &v in owned {
        let mut grown = Vec::with_capacity(out.len() * succ[v].len());
        for map in &out {
            for &w in &succ[v] {
                let mut next = map.clone();
                next.insert(v, w);
                grown.push(next);
            }
        }
        out = grown;
    }
    out
}

fn cycle_min_priority(
    step: &BTreeMap<usize, usize>,
    start: usize,
    priorities: &[u32],
) -> u32 {
    let mut order = vec![start];
    let mut at = BTreeMap::from([(start, 0)]);
    loop {
        let next = step[order.last().unwrap()];
        if let Some(&i) = at.get(&next) {
            return order[i..].iter().map(|&v| priorities[v]).min().unwrap();
        }
        at.insert(next, order.len());
        order.push(next);
    }
}

/// Winning regions of a parity game by enumerating every pair of positional
/// strategies and evaluating the single play each pair pins down.
pub fn solve_parity(g: &GameGraph, priorities: &[u32]) -> (VertexSet, VertexSet) {
    assert_eq!(priorities.len(), g.vertices());
    let succ: Vec<Vec<usize>> = (0..g.vertices()).map(|v| g.successors(v).to_vec()).collect();
    let owned = |p: Player| -> Vec<usize> {
        (0..g.vertices()).filter(|&v| g.owner(v) == p).collect()
    };
    let sigmas = choice_maps(&succ, &owned(Player::Zero));
    let taus = choice_maps(&succ, &owned(Player::One));
    let combined = |sig: &BTreeMap<usize, usize>, tau: &BTreeMap<usize, usize>| {
        let mut step = sig.clone();
        step.extend(tau.iter().map(|(&k, &v)| (k, v)));
        step
    };
    let mut win0 = VertexSet::new();
    let mut win1 = VertexSet::new();
    for v in 0..g.vertices() {
        let zero_can = sigmas.iter().any(|sig| {
            taus.iter()
                .all(|tau| cycle_min_priority(&combined(sig, tau), v, priorities) % 2 == 0)
        });
        let one_can = taus.iter().any(|tau| {
            sigmas
                .iter()
                .all(|sig| cycle_min_priority(&combined(sig, tau), v, priorities) % 2 == 1)
        });
        assert!(
            zero_can != one_can,
            "positional determinacy must hand vertex {v} to exactly one player"
        );
        if zero_can {
            win0.insert(v);
        } else {
            win1.insert(v);
        }
    }
    (win0, win1)
}

struct Expansion {
    origin: Vec<VertexId>,
    owner: Vec<Player>,
    succ: Vec<Vec<usize>>,
    start: Vec<usize>,
}

/// Memory expansion tracking the order of latest appearances. The memory
/// component is the bare order vector; starts are not yet folded.
fn expand(g: &GameGraph) -> Expansion {
    fn intern(
        nodes: &mut Vec<(VertexId, Vec<VertexId>)>,
        index: &mut BTreeMap<(VertexId, Vec<VertexId>), usize>,
        key: (VertexId, Vec<VertexId>),
    ) -> usize {
        if let Some(&i) = index.get(&key) {
            return i;
        }
        let i = nodes.len();
        nodes.push(key.clone());
        index.insert(key, i);
        i
    }

    let n = g.vertices();
    let identity: Vec<VertexId> = (0..n).collect();
    let mut nodes = Vec::new();
    let mut index = BTreeMap::new();
    let start: Vec<usize> = (0..n)
        .map(|v| intern(&mut nodes, &mut index, (v, identity.clone())))
        .collect();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    while succ.len() < nodes.len() {
        let (v, order) = nodes[succ.len()].clone();
        let row = g
            .successors(v)
            .iter()
            .map(|&w| {
                let mut moved = order.clone();
                moved.retain(|&x| x != w);
                moved.insert(0, w);
                intern(&mut nodes, &mut index, (w, moved))
            })
            .collect();
        succ.push(row);
    }
    Expansion {
        origin: nodes.iter().map(|&(v, _)| v).collect(),
        owner: nodes.iter().map(|&(v, _)| g.owner(v)).collect(),
        succ,
        start,
    }
}

/// Strongly connected components of the subgraph induced on `members`,
/// keeping only components that carry a cycle.
fn cycle_components(succ: &[Vec<usize>], members: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
    fn within(succ: &[Vec<usize>], members: &BTreeSet<usize>, from: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([from]);
        let mut queue = vec![from];
        while let Some(q) = queue.pop() {
            for &t in &succ[q] {
                if members.contains(&t) && seen.insert(t) {
                    queue.push(t);
                }
            }
        }
        seen
    }

    let mut left = members.clone();
    let mut out = Vec::new();
    while let Some(&seed) = left.iter().next() {
        let forward = within(succ, members, seed);
        let component: BTreeSet<usize> = forward
            .iter()
            .copied()
            .filter(|&x| within(succ, members, x).contains(&seed))
            .collect();
        for x in &component {
            left.remove(x);
        }
        let cyclic = component.len() > 1
            || component
                .iter()
                .any(|&x| succ[x].contains(&x));
        if cyclic {
            out.push(component);
        }
    }
    out
}

/// Winning regions of a Muller game by enumerating one player's positional
/// strategies over the latest-appearance expansion and hunting for a
/// refuting reachable cycle against each, then swapping roles. Returns
/// `None` when either side's strategy space exceeds `budget`.
pub fn solve_muller(
    g: &GameGraph,
    family: &BTreeSet<VertexSet>,
    budget: u64,
) -> Option<(VertexSet, VertexSet)> {
    let n = g.vertices();
    let ex = expand(g);
    let owned = |p: Player| -> Vec<usize> {
        (0..ex.succ.len()).filter(|&x| ex.owner[x] == p).collect()
    };
    let space = |list: &[usize]| {
        list.iter()
            .try_fold(1u64, |acc, &x| acc.checked_mul(ex.succ[x].len() as u64))
            .unwrap_or(u64::MAX)
    };
    if space(&owned(Player::Zero)) > budget || space(&owned(Player::One)) > budget {
        return None;
    }

    let subsets: Vec<VertexSet> = (1u64..1 << n)
        .map(|mask| (0..n).filter(|v| mask >> v & 1 == 1).collect())
        .collect();

    let solve_side = |keeper: Player| -> VertexSet {
        let refuting: Vec<&VertexSet> = subsets
            .iter()
            .filter(|s| family.contains(*s) != (keeper == Player::Zero))
            .collect();
        let mut won = VertexSet::new();
        for choice in choice_maps(&ex.succ, &owned(keeper)) {
            let succ: Vec<Vec<usize>> = ex
                .succ
                .iter()
                .enumerate()
                .map(|(x, row)| {
                    if ex.owner[x] == keeper {
                        vec![choice[&x]]
                    } else {
                        row.clone()
                    }
                })
                .collect();
            let mut traps: Vec<BTreeSet<usize>> = Vec::new();
            for s in &refuting {
                let members: BTreeSet<usize> =
                    (0..succ.len()).filter(|&x| s.contains(&ex.origin[x])).collect();
                for component in cycle_components(&succ, &members) {
                    let projected: VertexSet =
                        component.iter().map(|&x| ex.origin[x]).collect();
                    if projected == **s {
                        traps.push(component);
                    }
                }
            }
            for v in 0..n {
                if won.contains(&v) {
                    continue;
                }
                let reach = bfs(&succ, ex.start[v]);
                if traps.iter().all(|c| c.iter().all(|x| !reach.contains(x))) {
                    won.insert(v);
                }
            }
            if won.len() == n {
                break;
            }
        }
        won
    };

    let win0 = solve_side(Player::Zero);
    let win1 = solve_side(Player::One);
    assert!(
        win0.is_disjoint(&win1) && win0.len() + win1.len() == n,
        "strategy enumeration over the expansion must split the vertices"
    );
    Some((win0, win1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::testutil::{ab_prefix, fin_many_a, inf_many_a, word};
    use crate::automata::enumerate_loops;
    use crate::classify::classify;
    use crate::games::testutil::{example_muller_game, example_reach_game};
    use crate::games::{solve, Objective};
    use crate::generate::{
        label_zoo, random_automaton, random_parity_game, random_sparse_muller_game,
        random_up_word, rng,
    };
    use crate::words::Alphabet;
    use crate::Limits;

    fn ab() -> Alphabet {
        Alphabet::new("ab".chars()).unwrap()
    }

    #[test]
    fn loop_subsets_match_the_incremental_enumeration() {
        let limits = Limits::DEFAULT;
        let mut corpus = vec![ab_prefix(), inf_many_a(), fin_many_a()];
        let mut r = rng(11);
        for _ in 0..100 {
            corpus.push(random_automaton(&mut r, &ab(), 4, &limits).unwrap());
        }
        for a in &corpus {
            let incremental: BTreeSet<StateSet> = enumerate_loops(a, &limits)
                .unwrap()
                .iter()
                .map(|l| l.states().clone())
                .collect();
            assert_eq!(loops(a), incremental);
        }
    }

    #[test]
    fn membership_flags_match_the_classifier() {
        let limits = Limits::DEFAULT;
        let mut corpus: Vec<DetAutomaton> =
            label_zoo().into_iter().map(|(_, a)| a).collect();
        let mut r = rng(12);
        for _ in 0..150 {
            corpus.push(random_automaton(&mut r, &ab(), 4, &limits).unwrap());
        }
        for a in &corpus {
            let direct = classify(a, &limits).unwrap();
            assert_eq!(memberships(a), direct.memberships);
            assert_eq!(label(a), direct.label);
        }
    }

    #[test]
    fn the_zoo_lands_on_its_labels() {
        for (expected, a) in label_zoo() {
            assert_eq!(label(&a), expected);
        }
    }

    #[test]
    fn word_membership_matches_the_run_evaluation() {
        let fixtures = [
            (ab_prefix(), word("ab(a)^w"), true),
            (ab_prefix(), word("(b)^w"), false),
            (inf_many_a(), word("(ab)^w"), true),
            (inf_many_a(), word("a(b)^w"), false),
            (fin_many_a(), word("aaab(b)^w"), true),
        ];
        for (a, w, expected) in &fixtures {
            assert_eq!(accepts(a, w).unwrap(), *expected);
            assert_eq!(a.accepts(w).unwrap(), *expected);
        }

        let limits = Limits::DEFAULT;
        let mut r = rng(13);
        for _ in 0..300 {
            let a = random_automaton(&mut r, &ab(), 4, &limits).unwrap();
            let w = random_up_word(&mut r, &ab(), 3, 3);
            assert_eq!(accepts(&a, &w).unwrap(), a.accepts(&w).unwrap());
        }

        let stray = word("a(z)^w");
        let a = ab_prefix();
        assert_eq!(accepts(&a, &stray), a.accepts(&stray));
        assert!(accepts(&a, &stray).is_err());
    }

    #[test]
    fn parity_regions_match_the_attractor_solver() {
        let limits = Limits::DEFAULT;
        let mut r = rng(14);
        for round in 0..120 {
            let vertices = 2 + round % 4;
            let (g, priorities) = random_parity_game(&mut r, vertices, 3);
            let (win0, win1) = solve_parity(&g, &priorities);
            let direct = solve(&g, &Objective::Parity(priorities), &limits).unwrap();
            assert_eq!(win0, direct.win0);
            assert_eq!(win1, direct.win1);
        }
    }

    #[test]
    fn single_vertex_games_are_decided_by_their_self_loop() {
        let g = GameGraph::new(vec![Player::Zero], vec![vec![0]]).unwrap();
        assert_eq!(solve_parity(&g, &[1]).1, VertexSet::from([0]));
        assert_eq!(solve_parity(&g, &[2]).0, VertexSet::from([0]));
        let all: BTreeSet<VertexSet> = [VertexSet::from([0])].into();
        assert_eq!(solve_muller(&g, &all, 64).unwrap().0, VertexSet::from([0]));
        assert_eq!(
            solve_muller(&g, &BTreeSet::new(), 64).unwrap().1,
            VertexSet::from([0])
        );
    }

    #[test]
    fn muller_regions_match_the_reduction_solver() {
        let limits = Limits::DEFAULT;

        let (g, _) = example_muller_game();
        let family: BTreeSet<VertexSet> = [(0..4).collect()].into();
        let (win0, win1) = solve_muller(&g, &family, 4096).unwrap();
        assert!(win0.is_empty());
        assert_eq!(win1.len(), g.vertices());

        // visiting v3 infinitely often forces visiting v0 too, so the
        // singleton family {{3}} is unwinnable for Player Zero
        let (reach, _) = example_reach_game();
        let singleton: BTreeSet<VertexSet> = [VertexSet::from([3])].into();
        let (w0, w1) = solve_muller(&reach, &singleton, 4096).unwrap();
        assert!(w0.is_empty());
        assert_eq!(w1.len(), reach.vertices());

        let mut r = rng(15);
        let mut checked = 0;
        for round in 0..60 {
            let vertices = 2 + round % 3;
            let (g, family) = random_sparse_muller_game(&mut r, vertices);
            let Some((win0, win1)) = solve_muller(&g, &family, 2048) else {
                continue;
            };
            let direct = solve(&g, &Objective::Muller(family), &limits).unwrap();
            assert_eq!(win0, direct.win0);
            assert_eq!(win1, direct.win1);
            checked += 1;
        }
        assert!(checked >= 20, "only {checked} generated games were solvable");
    }
}
