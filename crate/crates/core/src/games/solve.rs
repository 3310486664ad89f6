//! Exact solvers: attractor-based for reachability and safety, repeated
//! attractors for the recurrence objectives, a recursive solver for parity,
//! and the record expansion for Muller.

use std::collections::BTreeMap;

use super::attractor::attractor_in;
use super::lar::{lar_reduction, LarGame};
use super::{
    GameGraph, MemoryStrategy, Objective, Player, SolveResult, Strategy, VertexId, VertexSet,
};
use crate::{Error, Limits};

type Positional = BTreeMap<VertexId, VertexId>;

pub fn solve(g: &GameGraph, objective: &Objective, limits: &Limits) -> Result<SolveResult, Error> {
    objective.validate(g)?;
    match objective {
        Objective::Reach(target) => {
            let (w0, s0, w1, s1) = reach_regions(g, Player::Zero, target);
            Ok(positional_result(w0, s0, w1, s1, Player::Zero))
        }
        Objective::Safety(safe) => {
            let bad: VertexSet = (0..g.vertices()).filter(|v| !safe.contains(v)).collect();
            let (w1, s1, w0, s0) = reach_regions(g, Player::One, &bad);
            Ok(positional_result(w1, s1, w0, s0, Player::One))
        }
        Objective::Buchi(target) => {
            let (w0, s0, w1, s1) = buchi_regions(g, Player::Zero, target);
            Ok(positional_result(w0, s0, w1, s1, Player::Zero))
        }
        Objective::CoBuchi(target) => {
            let outside: VertexSet = (0..g.vertices()).filter(|v| !target.contains(v)).collect();
            let (w1, s1, w0, s0) = buchi_regions(g, Player::One, &outside);
            Ok(positional_result(w1, s1, w0, s0, Player::One))
        }
        Objective::Parity(priorities) => {
            let (w0, s0, w1, s1) = zielonka(g, priorities, vec![true; g.vertices()]);
            Ok(SolveResult {
                win0: w0,
                win1: w1,
                strategy0: Strategy::Positional(s0),
                strategy1: Strategy::Positional(s1),
            })
        }
        Objective::Muller(family) => {
            let lar = lar_reduction(g, family, limits)?;
            let (w0, s0, w1, s1) =
                zielonka(&lar.game, &lar.priorities, vec![true; lar.game.vertices()]);
            let win0: VertexSet = (0..g.vertices())
                .filter(|&v| w0.contains(&lar.start[v]))
                .collect();
            let win1: VertexSet = (0..g.vertices())
                .filter(|&v| w1.contains(&lar.start[v]))
                .collect();
            let strategy0 = memory_strategy(&lar, g, Player::Zero, &s0);
            let strategy1 = memory_strategy(&lar, g, Player::One, &s1);
            Ok(SolveResult {
                win0,
                win1,
                strategy0: Strategy::FiniteMemory(strategy0),
                strategy1: Strategy::FiniteMemory(strategy1),
            })
        }
    }
}

fn positional_result(
    win_p: VertexSet,
    strat_p: Positional,
    win_o: VertexSet,
    strat_o: Positional,
    player: Player,
) -> SolveResult {
    match player {
        Player::Zero => SolveResult {
            win0: win_p,
            win1: win_o,
            strategy0: Strategy::Positional(strat_p),
            strategy1: Strategy::Positional(strat_o),
        },
        Player::One => SolveResult {
            win0: win_o,
            win1: win_p,
            strategy0: Strategy::Positional(strat_o),
            strategy1: Strategy::Positional(strat_p),
        },
    }
}

/// Regions and strategies when `player` tries to visit `target` once.
///
/// Inside the attractor the player follows attraction ranks (any successor
/// works once the target is hit); outside, the opponent owns a trap and
/// stays in it by always picking a successor that is again outside.
fn reach_regions(
    g: &GameGraph,
    player: Player,
    target: &VertexSet,
) -> (VertexSet, Positional, VertexSet, Positional) {
    let all = vec![true; g.vertices()];
    let (attr, mut strat) = attractor_in(g, player, target, &all);
    for &v in &attr {
        if g.owner(v) == player && !strat.contains_key(&v) {
            strat.insert(v, g.successors(v)[0]);
        }
    }
    let rest: VertexSet = (0..g.vertices()).filter(|v| !attr.contains(v)).collect();
    let opponent = player.opponent();
    let mut strat_o = Positional::new();
    for &v in &rest {
        if g.owner(v) == opponent {
            let w = g
                .successors(v)
                .iter()
                .copied()
                .find(|w| rest.contains(w))
                .expect("the complement of an attractor is a trap");
            strat_o.insert(v, w);
        }
    }
    (attr, strat, rest, strat_o)
}

/// Regions and strategies when `player` wants to visit `target` infinitely
/// often.
///
/// Repeatedly: attract to the target; whatever cannot even reach it is won
/// by the opponent together with its attractor, and gets carved out of the
/// arena. When nothing is carved the remaining arena is a trap where the
/// player can recurrently re-attract.
fn buchi_regions(
    g: &GameGraph,
    player: Player,
    target: &VertexSet,
) -> (VertexSet, Positional, VertexSet, Positional) {
    let n = g.vertices();
    let opponent = player.opponent();
    let mut alive = vec![true; n];
    let mut win_o = VertexSet::new();
    let mut strat_o = Positional::new();
    loop {
        let target_alive: VertexSet = target.iter().copied().filter(|&v| alive[v]).collect();
        let (reach, reach_strat) = attractor_in(g, player, &target_alive, &alive);
        let trap: VertexSet = (0..n)
            .filter(|&v| alive[v] && !reach.contains(&v))
            .collect();
        if trap.is_empty() {
            let win_p: VertexSet = (0..n).filter(|&v| alive[v]).collect();
            let mut strat_p = reach_strat;
            for &v in &win_p {
                if g.owner(v) == player && !strat_p.contains_key(&v) {
                    let w = g
                        .successors(v)
                        .iter()
                        .copied()
                        .find(|&w| alive[w])
                        .expect("subgames keep at least one live successor");
                    strat_p.insert(v, w);
                }
            }
            return (win_p, strat_p, win_o, strat_o);
        }
        let (carved, carve_strat) = attractor_in(g, opponent, &trap, &alive);
        strat_o.extend(carve_strat);
        for &v in &trap {
            if g.owner(v) == opponent {
                let w = g
                    .successors(v)
                    .iter()
                    .copied()
                    .find(|w| trap.contains(w))
                    .expect("vertices that cannot reach the target can stay that way");
                strat_o.insert(v, w);
            }
        }
        for &v in &carved {
            alive[v] = false;
            win_o.insert(v);
        }
    }
}

/// Recursive parity solver under the min-even convention.
///
/// The player favored by the least priority attracts to its vertices; if the
/// rest of the arena gives the opponent nothing, the favored player owns
/// everything, otherwise the opponent's sub-region is grown by attraction
/// and the remainder re-solved.
fn zielonka(
    g: &GameGraph,
    priorities: &[u32],
    alive: Vec<bool>,
) -> (VertexSet, Positional, VertexSet, Positional) {
    let live: Vec<VertexId> = (0..g.vertices()).filter(|&v| alive[v]).collect();
    if live.is_empty() {
        return (
            VertexSet::new(),
            Positional::new(),
            VertexSet::new(),
            Positional::new(),
        );
    }
    let least = live.iter().map(|&v| priorities[v]).min().unwrap();
    let player = if least % 2 == 0 {
        Player::Zero
    } else {
        Player::One
    };
    let favored: VertexSet = live
        .iter()
        .copied()
        .filter(|&v| priorities[v] == least)
        .collect();
    let (head, head_strat) = attractor_in(g, player, &favored, &alive);

    let mut sub_alive = alive.clone();
    for &v in &head {
        sub_alive[v] = false;
    }
    let (sw0, ss0, sw1, ss1) = zielonka(g, priorities, sub_alive);
    let (_, sub_sp, sub_wo, sub_so) = orient(player, sw0, ss0, sw1, ss1);

    if sub_wo.is_empty() {
        let win_p: VertexSet = live.iter().copied().collect();
        let mut strat_p = sub_sp;
        strat_p.extend(head_strat);
        for &v in &favored {
            if g.owner(v) == player && !strat_p.contains_key(&v) {
                let w = g
                    .successors(v)
                    .iter()
                    .copied()
                    .find(|&w| alive[w])
                    .expect("subgames keep at least one live successor");
                strat_p.insert(v, w);
            }
        }
        return orient(player, win_p, strat_p, VertexSet::new(), Positional::new());
    }

    let opponent = player.opponent();
    let (grown, grow_strat) = attractor_in(g, opponent, &sub_wo, &alive);
    let mut rest_alive = alive;
    for &v in &grown {
        rest_alive[v] = false;
    }
    let (rw0, rs0, rw1, rs1) = zielonka(g, priorities, rest_alive);
    let (rest_wp, rest_sp, rest_wo, rest_so) = orient(player, rw0, rs0, rw1, rs1);

    let win_o: VertexSet = rest_wo.union(&grown).copied().collect();
    let mut strat_o = rest_so;
    strat_o.extend(grow_strat);
    strat_o.extend(sub_so);
    orient(player, rest_wp, rest_sp, win_o, strat_o)
}

fn orient(
    player: Player,
    w0: VertexSet,
    s0: Positional,
    w1: VertexSet,
    s1: Positional,
) -> (VertexSet, Positional, VertexSet, Positional) {
    match player {
        Player::Zero => (w0, s0, w1, s1),
        Player::One => (w1, s1, w0, s0),
    }
}

/// Project a positional strategy on the record expansion down to a
/// finite-memory strategy on the original arena.
fn memory_strategy(
    lar: &LarGame,
    g: &GameGraph,
    player: Player,
    expanded: &Positional,
) -> MemoryStrategy {
    let mut update = BTreeMap::new();
    for s in 0..lar.game.vertices() {
        for &t in lar.game.successors(s) {
            update.insert((lar.record_of[s], lar.projection[t]), lar.record_of[t]);
        }
    }
    let mut moves = BTreeMap::new();
    for (&s, &t) in expanded {
        debug_assert_eq!(g.owner(lar.projection[s]), player);
        moves.insert((lar.projection[s], lar.record_of[s]), lar.projection[t]);
    }
    MemoryStrategy {
        records: lar.records.clone(),
        initial: lar.record_of[lar.start[0]],
        update,
        moves,
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::super::verify_strategy;
    use super::*;

    const L: Limits = Limits::DEFAULT;

    fn check(g: &GameGraph, o: &Objective) -> SolveResult {
        let result = solve(g, o, &L).unwrap();
        assert_eq!(result.win0.len() + result.win1.len(), g.vertices());
        assert!(verify_strategy(g, o, &result).unwrap());
        result
    }

    #[test]
    fn corridor_game_is_won_by_the_chooser() {
        let (g, o) = example_reach_game();
        let result = check(&g, &o);
        assert_eq!(result.win0, g.vertex_set());
        assert_eq!(result.winner(0), Player::Zero);
        match &result.strategy0 {
            Strategy::Positional(map) => assert!([1, 2].contains(&map[&0])),
            _ => panic!("expected a positional strategy"),
        }
    }

    #[test]
    fn detour_game_is_lost_under_the_exact_set_condition() {
        let (g, o) = example_muller_game();
        let result = check(&g, &o);
        assert_eq!(result.winner(0), Player::One);
        assert_eq!(result.win1, g.vertex_set());
    }

    #[test]
    fn safety_over_everything_is_free() {
        for (g, _) in [example_reach_game(), example_muller_game()] {
            let result = check(&g, &Objective::Safety(g.vertex_set()));
            assert_eq!(result.win0, g.vertex_set());
        }
    }

    #[test]
    fn safety_duality_with_owner_swap() {
        let games = [
            example_reach_game().0,
            example_muller_game().0,
            GameGraph::new(
                vec![Player::Zero, Player::One, Player::Zero],
                vec![vec![1, 2], vec![0, 2], vec![2]],
            )
            .unwrap(),
        ];
        for g in games {
            let swapped = GameGraph::new(
                (0..g.vertices()).map(|v| g.owner(v).opponent()).collect(),
                (0..g.vertices()).map(|v| g.successors(v).to_vec()).collect(),
            )
            .unwrap();
            for mask in 0u32..1 << g.vertices() {
                let safe: VertexSet = (0..g.vertices()).filter(|v| mask >> v & 1 == 1).collect();
                let bad: VertexSet = (0..g.vertices()).filter(|v| !safe.contains(v)).collect();
                let direct = solve(&g, &Objective::Safety(safe), &L).unwrap();
                let dual = solve(&swapped, &Objective::Reach(bad), &L).unwrap();
                assert_eq!(direct.win0, dual.win1);
                assert_eq!(direct.win1, dual.win0);
            }
        }
    }

    #[test]
    fn recurrence_needs_control_of_the_escape() {
        // v0 may loop at itself or pass through v1.
        let g = GameGraph::new(
            vec![Player::One, Player::One],
            vec![vec![0, 1], vec![0]],
        )
        .unwrap();
        let result = check(&g, &Objective::Buchi(vset(&[1])));
        assert_eq!(result.win1, g.vertex_set());

        let forced = GameGraph::new(
            vec![Player::One, Player::One],
            vec![vec![1], vec![0]],
        )
        .unwrap();
        let result = check(&forced, &Objective::Buchi(vset(&[1])));
        assert_eq!(result.win0, forced.vertex_set());

        // Nobody can force the play to settle at v0 while Player 1 may
        // keep detouring, but handing v0 to Player 0 changes that.
        let result = check(&g, &Objective::CoBuchi(vset(&[0])));
        assert_eq!(result.win1, g.vertex_set());
        let result = check(&forced, &Objective::CoBuchi(vset(&[0])));
        assert_eq!(result.win1, forced.vertex_set());

        let chooser = GameGraph::new(
            vec![Player::Zero, Player::One],
            vec![vec![0, 1], vec![0]],
        )
        .unwrap();
        let result = check(&chooser, &Objective::CoBuchi(vset(&[0])));
        assert_eq!(result.win0, chooser.vertex_set());
    }

    #[test]
    fn parity_follows_the_least_recurring_priority() {
        let cycle = GameGraph::new(
            vec![Player::Zero, Player::One],
            vec![vec![1], vec![0]],
        )
        .unwrap();
        let result = check(&cycle, &Objective::Parity(vec![0, 1]));
        assert_eq!(result.win0, cycle.vertex_set());
        let result = check(&cycle, &Objective::Parity(vec![1, 2]));
        assert_eq!(result.win1, cycle.vertex_set());

        // Player 0 picks which loop to live in.
        let choice = GameGraph::new(
            vec![Player::Zero, Player::One, Player::One],
            vec![vec![1, 2], vec![1], vec![2]],
        )
        .unwrap();
        let result = check(&choice, &Objective::Parity(vec![5, 3, 2]));
        assert_eq!(result.win0, vset(&[0, 2]));
        assert_eq!(result.win1, vset(&[1]));
        let result = check(&choice, &Objective::Parity(vec![5, 3, 7]));
        assert_eq!(result.win1, choice.vertex_set());
    }

    #[test]
    fn forced_alternation_meets_the_exact_set() {
        let g = GameGraph::new(
            vec![Player::Zero, Player::One],
            vec![vec![1], vec![0]],
        )
        .unwrap();
        let result = check(&g, &Objective::Muller(vfamily(&[&[0, 1]])));
        assert_eq!(result.win0, g.vertex_set());
        match &result.strategy0 {
            Strategy::FiniteMemory(ms) => {
                assert!(!ms.records.is_empty());
                assert!(ms.moves.values().all(|&w| w == 1));
            }
            _ => panic!("expected a finite-memory strategy"),
        }

        let result = check(&g, &Objective::Muller(vfamily(&[&[0]])));
        assert_eq!(result.win1, g.vertex_set());
    }

    #[test]
    fn lifted_detour_game_under_the_meeting_convention() {
        let (base, _) = example_reach_game();
        let (g, _) = example_muller_game();
        let lifted = super::super::lift_objective(
            &base,
            &g,
            &vset(&[3]),
            super::super::LiftConvention::MeetsR,
            &L,
        )
        .unwrap();
        let result = check(&g, &lifted);
        assert_eq!(result.winner(0), Player::Zero);

        let empty = super::super::lift_objective(
            &base,
            &g,
            &VertexSet::new(),
            super::super::LiftConvention::MeetsR,
            &L,
        )
        .unwrap();
        let result = check(&g, &empty);
        assert_eq!(result.win1, g.vertex_set());
    }

    #[test]
    fn muller_guard_respects_the_vertex_limit() {
        let g = GameGraph::new(vec![Player::Zero; 9], vec![vec![0]; 9]).unwrap();
        assert_eq!(
            solve(&g, &Objective::Muller(vfamily(&[])), &L),
            Err(Error::MemoryLimitExceeded(9, 8))
        );
    }
}
