//! Controlled-predecessor fixpoint: the set of vertices from which a player
//! can force the token into a target set, together with a strategy achieving
//! it.

use std::collections::BTreeMap;

use super::{GameGraph, Player, VertexId, VertexSet};
use crate::Error;

/// Attractor within the subgame induced by `alive`.
///
/// The returned strategy covers exactly the player's vertices added outside
/// the target, and every choice points at a vertex that entered the
/// attractor strictly earlier, so following it shrinks the distance to the
/// target with each own move.
pub(crate) fn attractor_in(
    g: &GameGraph,
    player: Player,
    target: &VertexSet,
    alive: &[bool],
) -> (VertexSet, BTreeMap<VertexId, VertexId>) {
    let n = g.vertices();
    let mut inside = vec![false; n];
    let mut attr = VertexSet::new();
    let mut strategy = BTreeMap::new();
    for &v in target {
        if alive[v] {
            inside[v] = true;
            attr.insert(v);
        }
    }
    loop {
        let mut grew = false;
        for v in 0..n {
            if !alive[v] || inside[v] {
                continue;
            }
            if g.owner(v) == player {
                let choice = g
                    .successors(v)
                    .iter()
                    .copied()
                    .find(|&w| alive[w] && inside[w]);
                if let Some(w) = choice {
                    inside[v] = true;
                    attr.insert(v);
                    strategy.insert(v, w);
                    grew = true;
                }
            } else {
                let mut any_alive = false;
                let mut all_inside = true;
                for &w in g.successors(v) {
                    if alive[w] {
                        any_alive = true;
                        all_inside &= inside[w];
                    }
                }
                if any_alive && all_inside {
                    inside[v] = true;
                    attr.insert(v);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    (attr, strategy)
}

/// Attractor in the full arena.
pub fn attractor(
    g: &GameGraph,
    player: Player,
    target: &VertexSet,
) -> Result<(VertexSet, BTreeMap<VertexId, VertexId>), Error> {
    for &v in target {
        g.check_vertex(v)?;
    }
    Ok(attractor_in(g, player, target, &vec![true; g.vertices()]))
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;

    #[test]
    fn whole_arena_is_attracted_in_the_two_corridor_game() {
        let (g, _) = example_reach_game();
        let (attr, strategy) = attractor(&g, Player::Zero, &vset(&[3])).unwrap();
        assert_eq!(attr, vset(&[0, 1, 2, 3]));
        assert_eq!(strategy.get(&0), Some(&1));
        assert_eq!(strategy.len(), 1);
    }

    #[test]
    fn empty_and_full_targets() {
        let (g, _) = example_reach_game();
        let (attr, strategy) = attractor(&g, Player::One, &VertexSet::new()).unwrap();
        assert!(attr.is_empty());
        assert!(strategy.is_empty());

        let (attr, strategy) = attractor(&g, Player::Zero, &g.vertex_set()).unwrap();
        assert_eq!(attr, g.vertex_set());
        assert!(strategy.is_empty());

        assert!(attractor(&g, Player::Zero, &vset(&[11])).is_err());
    }

    #[test]
    fn opponent_escape_blocks_attraction() {
        // Player 1 at v0 may duck into a safe self-loop at v1.
        let g = GameGraph::new(
            vec![Player::One, Player::One, Player::One],
            vec![vec![1, 2], vec![1], vec![2]],
        )
        .unwrap();
        let (attr, _) = attractor(&g, Player::Zero, &vset(&[2])).unwrap();
        assert_eq!(attr, vset(&[2]));

        // Owning v0 turns the escape into a choice.
        let g = GameGraph::new(
            vec![Player::Zero, Player::One, Player::One],
            vec![vec![1, 2], vec![1], vec![2]],
        )
        .unwrap();
        let (attr, strategy) = attractor(&g, Player::Zero, &vset(&[2])).unwrap();
        assert_eq!(attr, vset(&[0, 2]));
        assert_eq!(strategy.get(&0), Some(&2));
    }

    #[test]
    fn attraction_is_monotone_and_contains_the_target() {
        let (g, _) = example_muller_game();
        let all = g.vertex_set();
        let subsets: Vec<VertexSet> = (0u32..32)
            .map(|mask| (0..5).filter(|v| mask >> v & 1 == 1).collect())
            .collect();
        for target in &subsets {
            for player in [Player::Zero, Player::One] {
                let (attr, _) = attractor(&g, player, target).unwrap();
                assert!(attr.is_superset(target));
                assert!(attr.is_subset(&all));
                let (bigger, _) = attractor(&g, player, &all).unwrap();
                assert!(attr.is_subset(&bigger));
            }
        }
        for pair in subsets.windows(2) {
            let union: VertexSet = pair[0].union(&pair[1]).copied().collect();
            let (a, _) = attractor(&g, Player::Zero, &pair[0]).unwrap();
            let (u, _) = attractor(&g, Player::Zero, &union).unwrap();
            assert!(a.is_subset(&u));
        }
    }

    #[test]
    fn strategy_moves_strictly_toward_the_target() {
        // A chain of Player-0 vertices with backward edges thrown in.
        let g = GameGraph::new(
            vec![Player::Zero; 5],
            vec![vec![1, 0], vec![2, 0], vec![3, 1], vec![4, 0], vec![4]],
        )
        .unwrap();
        let (attr, strategy) = attractor(&g, Player::Zero, &vset(&[4])).unwrap();
        assert_eq!(attr, vset(&[0, 1, 2, 3, 4]));
        for start in 0..4 {
            let mut v = start;
            let mut steps = 0;
            while v != 4 {
                v = strategy[&v];
                steps += 1;
                assert!(steps <= g.vertices(), "strategy loops from {start}");
            }
        }
    }
}
