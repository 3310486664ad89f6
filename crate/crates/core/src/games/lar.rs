//! Latest-appearance-record expansion: turns a Muller objective into a
//! parity objective on a product arena, realizing the classical fact that a
//! bounded memory of visit order is all a winning player needs.

use std::collections::BTreeMap;

use super::{GameGraph, LarRecord, Objective, Player, VertexId, VertexSet};
use crate::{Error, Limits};

/// The expanded arena together with everything needed to move results back
/// and forth: priorities per expanded vertex, the projection to original
/// vertices, the record table, and the start state of every original vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LarGame {
    pub game: GameGraph,
    pub priorities: Vec<u32>,
    pub projection: Vec<VertexId>,
    pub records: Vec<LarRecord>,
    pub record_of: Vec<usize>,
    pub start: Vec<VertexId>,
}

/// Build the record expansion of `g` under the Muller family `family`.
///
/// States are (vertex, record) pairs reachable from any original vertex
/// paired with the identity record; the start vertex itself is not folded
/// into its record. A state whose record was just hit at position `h` gets
/// priority `2(n−h)` when the hit set belongs to the family and `2(n−h)+1`
/// otherwise, so the least priority recurring along a play is even exactly
/// when the infinitely visited original vertices form an accepted set.
pub fn lar_reduction(
    g: &GameGraph,
    family: &std::collections::BTreeSet<VertexSet>,
    limits: &Limits,
) -> Result<LarGame, Error> {
    Objective::Muller(family.clone()).validate(g)?;
    let n = g.vertices();
    if n > limits.max_vertices {
        return Err(Error::MemoryLimitExceeded(n, limits.max_vertices));
    }

    let mut records: Vec<LarRecord> = Vec::new();
    let mut record_ids: BTreeMap<LarRecord, usize> = BTreeMap::new();
    let mut intern = |rec: LarRecord, records: &mut Vec<LarRecord>| -> usize {
        if let Some(&id) = record_ids.get(&rec) {
            return id;
        }
        let id = records.len();
        record_ids.insert(rec.clone(), id);
        records.push(rec);
        id
    };

    let identity = intern(LarRecord::identity(n), &mut records);

    let mut state_ids: BTreeMap<(VertexId, usize), usize> = BTreeMap::new();
    let mut states: Vec<(VertexId, usize)> = Vec::new();
    let mut queue: Vec<usize> = Vec::new();
    let mut start = Vec::with_capacity(n);
    for v in 0..n {
        let id = states.len();
        state_ids.insert((v, identity), id);
        states.push((v, identity));
        queue.push(id);
        start.push(id);
    }

    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut head = 0;
    while head < queue.len() {
        let state = queue[head];
        head += 1;
        let (v, rec) = states[state];
        let mut row = Vec::new();
        for &w in g.successors(v) {
            let folded = records[rec].fold(w);
            let rec_id = intern(folded, &mut records);
            let key = (w, rec_id);
            let target = *state_ids.entry(key).or_insert_with(|| {
                let id = states.len();
                states.push(key);
                queue.push(id);
                id
            });
            row.push(target);
        }
        succ.push(row);
    }

    let owner: Vec<Player> = states.iter().map(|&(v, _)| g.owner(v)).collect();
    let names: Vec<String> = states
        .iter()
        .map(|&(v, rec)| format!("{}#m{}", g.name(v), rec))
        .collect();
    let priorities: Vec<u32> = states
        .iter()
        .map(|&(_, rec)| {
            let record = &records[rec];
            let base = 2 * (n as u32 - record.hit as u32);
            if family.contains(&record.hit_set()) {
                base
            } else {
                base + 1
            }
        })
        .collect();
    let projection: Vec<VertexId> = states.iter().map(|&(v, _)| v).collect();
    let record_of: Vec<usize> = states.iter().map(|&(_, rec)| rec).collect();

    let mut game = GameGraph::new(owner, succ)?.with_names(names)?;
    if let Some(v0) = g.initial() {
        game = game.with_initial(start[v0])?;
    }

    Ok(LarGame {
        game,
        priorities,
        projection,
        records,
        record_of,
        start,
    })
}

/// Which Muller family an expansion lift installs over the bigger arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftConvention {
    /// The single set consisting of every original vertex.
    PaperExact,
    /// All sets of original vertices that meet the given reach set.
    MeetsR,
}

impl LiftConvention {
    pub fn parse(text: &str) -> Result<LiftConvention, Error> {
        match text.trim().to_ascii_lowercase().as_str() {
            "paper" | "paper-exact" | "paper_exact" => Ok(LiftConvention::PaperExact),
            "meets-r" | "meets_r" | "meetsr" => Ok(LiftConvention::MeetsR),
            other => Err(Error::Invalid(format!(
                "unknown lift convention '{other}' (expected paper or meets-r)"
            ))),
        }
    }
}

impl std::fmt::Display for LiftConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LiftConvention::PaperExact => "PAPER_EXACT",
            LiftConvention::MeetsR => "MEETS_R",
        })
    }
}

/// Lift a reachability objective on `g` to a Muller objective on an expanded
/// arena that contains `g`'s vertices as a prefix.
pub fn lift_objective(
    g: &GameGraph,
    expanded: &GameGraph,
    reach: &VertexSet,
    convention: LiftConvention,
    limits: &Limits,
) -> Result<Objective, Error> {
    if g.vertices() > expanded.vertices() {
        return Err(Error::Invalid(format!(
            "base game has {} vertices, expansion only {}",
            g.vertices(),
            expanded.vertices()
        )));
    }
    for &v in reach {
        g.check_vertex(v)?;
    }
    let n = g.vertices();
    let family = match convention {
        LiftConvention::PaperExact => [(0..n).collect::<VertexSet>()].into(),
        LiftConvention::MeetsR => {
            if n > limits.max_vertices {
                return Err(Error::MemoryLimitExceeded(n, limits.max_vertices));
            }
            (1u64..1 << n)
                .map(|mask| (0..n).filter(|v| mask >> v & 1 == 1).collect::<VertexSet>())
                .filter(|s| s.intersection(reach).next().is_some())
                .collect()
        }
    };
    Ok(Objective::Muller(family))
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;

    const L: Limits = Limits::DEFAULT;

    #[test]
    fn single_self_loop_with_its_own_set_accepted_gets_even_priority() {
        let g = GameGraph::new(vec![Player::One], vec![vec![0]]).unwrap();
        let lar = lar_reduction(&g, &vfamily(&[&[0]]), &L).unwrap();
        assert_eq!(lar.game.vertices(), 1);
        assert_eq!(lar.priorities, vec![0]);
        assert_eq!(lar.projection, vec![0]);

        let lar = lar_reduction(&g, &vfamily(&[]), &L).unwrap();
        assert_eq!(lar.priorities, vec![1]);
    }

    #[test]
    fn two_vertex_expansion_stays_within_the_factorial_bound() {
        let g = GameGraph::new(
            vec![Player::Zero, Player::One],
            vec![vec![0, 1], vec![0, 1]],
        )
        .unwrap();
        let lar = lar_reduction(&g, &vfamily(&[&[0, 1]]), &L).unwrap();
        assert!(lar.game.vertices() <= 2 * 2 * 2);
        for v in 0..lar.game.vertices() {
            assert_eq!(lar.game.owner(v), g.owner(lar.projection[v]));
            for &w in lar.game.successors(v) {
                assert!(g
                    .successors(lar.projection[v])
                    .contains(&lar.projection[w]));
            }
        }
    }

    #[test]
    fn expansion_projects_plays_of_the_detour_game() {
        let (g, o) = example_muller_game();
        let family = match &o {
            Objective::Muller(f) => f.clone(),
            _ => unreachable!(),
        };
        let lar = lar_reduction(&g, &family, &L).unwrap();
        assert_eq!(lar.start.len(), g.vertices());
        assert_eq!(lar.game.initial(), Some(lar.start[0]));
        for v in 0..lar.game.vertices() {
            assert!(lar.priorities[v] <= 2 * g.vertices() as u32 - 1);
            assert_eq!(lar.record_of.len(), lar.game.vertices());
            for &w in lar.game.successors(v) {
                assert!(g
                    .successors(lar.projection[v])
                    .contains(&lar.projection[w]));
                let folded = lar.records[lar.record_of[v]].fold(lar.projection[w]);
                assert_eq!(lar.records[lar.record_of[w]], folded);
            }
        }
    }

    #[test]
    fn vertex_guard_blocks_oversized_expansions() {
        let g = GameGraph::new(vec![Player::Zero; 9], vec![vec![0]; 9]).unwrap();
        assert_eq!(
            lar_reduction(&g, &vfamily(&[]), &L),
            Err(Error::MemoryLimitExceeded(9, 8))
        );
    }

    #[test]
    fn lift_families() {
        let (g, _) = example_reach_game();
        let (bigger, _) = example_muller_game();

        let lifted =
            lift_objective(&g, &bigger, &vset(&[3]), LiftConvention::PaperExact, &L).unwrap();
        assert_eq!(lifted, Objective::Muller(vfamily(&[&[0, 1, 2, 3]])));

        let lifted =
            lift_objective(&g, &bigger, &vset(&[3]), LiftConvention::MeetsR, &L).unwrap();
        match &lifted {
            Objective::Muller(family) => {
                assert_eq!(family.len(), 8);
                assert!(family.contains(&vset(&[0, 2, 3])));
                assert!(family.contains(&vset(&[3])));
                assert!(!family.contains(&vset(&[0, 1, 2])));
                assert!(family.iter().all(|s| s.contains(&3)));
            }
            _ => panic!("expected a Muller objective"),
        }

        let lifted =
            lift_objective(&g, &bigger, &VertexSet::new(), LiftConvention::MeetsR, &L).unwrap();
        assert_eq!(lifted, Objective::Muller(vfamily(&[])));

        assert!(lift_objective(&bigger, &g, &vset(&[3]), LiftConvention::PaperExact, &L).is_err());
        assert!(lift_objective(&g, &bigger, &vset(&[7]), LiftConvention::MeetsR, &L).is_err());
    }

    #[test]
    fn convention_names() {
        assert_eq!(LiftConvention::parse("paper").unwrap().to_string(), "PAPER_EXACT");
        assert_eq!(LiftConvention::parse("meets-r").unwrap().to_string(), "MEETS_R");
        assert!(LiftConvention::parse("?").is_err());
    }
}
