//! Two-player turn-based games on finite directed graphs.
//!
//! A token moves along edges forever; the owner of the current vertex picks
//! the next edge. Player 0 tries to make the resulting infinite play satisfy
//! the objective, Player 1 tries to spoil it. Everything here is about
//! computing the two winning regions exactly and handing back strategies a
//! third party can check without trusting the solver — see
//! [`verify_strategy`].

mod attractor;
mod format;
mod lar;
mod solve;
mod verify;

pub use attractor::attractor;
pub use format::{parse_any_game, parse_game, parse_pgsolver, serialize_game, GameFile};
pub use lar::{lar_reduction, lift_objective, LarGame, LiftConvention};
pub use solve::solve;
pub use verify::verify_strategy;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::Error;

pub type VertexId = usize;
pub type VertexSet = BTreeSet<VertexId>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    Zero,
    One,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Zero => Player::One,
            Player::One => Player::Zero,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::Zero => 0,
            Player::One => 1,
        }
    }

    pub fn from_index(index: usize) -> Result<Player, Error> {
        match index {
            0 => Ok(Player::Zero),
            1 => Ok(Player::One),
            other => Err(Error::Invalid(format!(
                "player must be 0 or 1, got {other}"
            ))),
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// A finite arena: vertices `0..n`, an owner and a non-empty successor list
/// per vertex, and an optional designated start vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameGraph {
    names: Vec<String>,
    owner: Vec<Player>,
    succ: Vec<Vec<VertexId>>,
    initial: Option<VertexId>,
}

impl GameGraph {
    pub fn new(owner: Vec<Player>, succ: Vec<Vec<VertexId>>) -> Result<GameGraph, Error> {
        let n = owner.len();
        if succ.len() != n {
            return Err(Error::Invalid(format!(
                "{} owners but {} successor lists",
                n,
                succ.len()
            )));
        }
        for (v, row) in succ.iter().enumerate() {
            if row.is_empty() {
                return Err(Error::NoSuccessor(v));
            }
            for &w in row {
                if w >= n {
                    return Err(Error::VertexOutOfRange(w, n));
                }
            }
        }
        let names = (0..n).map(|v| format!("v{v}")).collect();
        Ok(GameGraph {
            names,
            owner,
            succ,
            initial: None,
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<GameGraph, Error> {
        if names.len() != self.vertices() {
            return Err(Error::Invalid(format!(
                "{} names for {} vertices",
                names.len(),
                self.vertices()
            )));
        }
        self.names = names;
        Ok(self)
    }

    pub fn with_initial(mut self, v: VertexId) -> Result<GameGraph, Error> {
        self.check_vertex(v)?;
        self.initial = Some(v);
        Ok(self)
    }

    pub fn vertices(&self) -> usize {
        self.owner.len()
    }

    pub fn owner(&self, v: VertexId) -> Player {
        self.owner[v]
    }

    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.succ[v]
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn initial(&self) -> Option<VertexId> {
        self.initial
    }

    pub fn vertex_set(&self) -> VertexSet {
        (0..self.vertices()).collect()
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<(), Error> {
        if v >= self.vertices() {
            return Err(Error::VertexOutOfRange(v, self.vertices()));
        }
        Ok(())
    }
}

/// What Player 0 wants from the infinite play.
///
/// `Parity` carries one priority per vertex under the min-even convention:
/// Player 0 wins iff the least priority seen infinitely often is even.
/// `Muller` lists the exact sets of infinitely visited vertices that count
/// as a win.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Objective {
    Reach(VertexSet),
    Safety(VertexSet),
    Buchi(VertexSet),
    CoBuchi(VertexSet),
    Parity(Vec<u32>),
    Muller(BTreeSet<VertexSet>),
}

impl Objective {
    pub fn kind(&self) -> &'static str {
        match self {
            Objective::Reach(_) => "reach",
            Objective::Safety(_) => "safety",
            Objective::Buchi(_) => "buchi",
            Objective::CoBuchi(_) => "cobuchi",
            Objective::Parity(_) => "parity",
            Objective::Muller(_) => "muller",
        }
    }

    pub fn validate(&self, g: &GameGraph) -> Result<(), Error> {
        match self {
            Objective::Reach(set)
            | Objective::Safety(set)
            | Objective::Buchi(set)
            | Objective::CoBuchi(set) => {
                for &v in set {
                    g.check_vertex(v)?;
                }
            }
            Objective::Parity(priorities) => {
                if priorities.len() < g.vertices() {
                    return Err(Error::MissingPriority(priorities.len()));
                }
                if priorities.len() > g.vertices() {
                    return Err(Error::Invalid(format!(
                        "{} priorities for {} vertices",
                        priorities.len(),
                        g.vertices()
                    )));
                }
            }
            Objective::Muller(family) => {
                for set in family {
                    for &v in set {
                        g.check_vertex(v)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// A latest-appearance record: the vertices ordered by how recently they
/// were visited (most recent first) plus the 1-based position the latest
/// vertex held before moving to the front.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LarRecord {
    pub order: Vec<VertexId>,
    pub hit: usize,
}

impl LarRecord {
    pub fn identity(vertices: usize) -> LarRecord {
        LarRecord {
            order: (0..vertices).collect(),
            hit: 1,
        }
    }

    /// The record after the play arrives at `v`.
    pub fn fold(&self, v: VertexId) -> LarRecord {
        let position = self
            .order
            .iter()
            .position(|&w| w == v)
            .expect("records permute all vertices");
        let mut order = Vec::with_capacity(self.order.len());
        order.push(v);
        order.extend(self.order.iter().copied().filter(|&w| w != v));
        LarRecord {
            order,
            hit: position + 1,
        }
    }

    /// The vertices in front of (and including) the hit position.
    pub fn hit_set(&self) -> VertexSet {
        self.order[..self.hit].iter().copied().collect()
    }
}

impl fmt::Display for LarRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.order.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]@{}", self.hit)
    }
}

/// A strategy whose choices may depend on a bounded history summary.
///
/// `records` is the memory-state set (index = memory id), `initial` the
/// memory before any move, `update` advances the memory when the play
/// arrives at a vertex, and `moves` picks the successor at an owned vertex
/// under the current memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryStrategy {
    pub records: Vec<LarRecord>,
    pub initial: usize,
    pub update: BTreeMap<(usize, VertexId), usize>,
    pub moves: BTreeMap<(VertexId, usize), VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    Positional(BTreeMap<VertexId, VertexId>),
    FiniteMemory(MemoryStrategy),
}

impl Strategy {
    pub fn empty() -> Strategy {
        Strategy::Positional(BTreeMap::new())
    }
}

/// Exact winning regions plus one strategy per player, each defined on every
/// vertex the player owns inside their own region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub win0: VertexSet,
    pub win1: VertexSet,
    pub strategy0: Strategy,
    pub strategy1: Strategy,
}

impl SolveResult {
    pub fn winner(&self, v: VertexId) -> Player {
        if self.win0.contains(&v) {
            Player::Zero
        } else {
            Player::One
        }
    }

    pub fn region(&self, player: Player) -> &VertexSet {
        match player {
            Player::Zero => &self.win0,
            Player::One => &self.win1,
        }
    }

    pub fn strategy(&self, player: Player) -> &Strategy {
        match player {
            Player::Zero => &self.strategy0,
            Player::One => &self.strategy1,
        }
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;

    pub fn vset(vs: &[VertexId]) -> VertexSet {
        vs.iter().copied().collect()
    }

    pub fn vfamily(sets: &[&[VertexId]]) -> BTreeSet<VertexSet> {
        sets.iter().map(|s| vset(s)).collect()
    }

    /// Player 0 chooses between two one-way corridors that rejoin at the
    /// bottom and loop back to the top.
    pub fn example_reach_game() -> (GameGraph, Objective) {
        let g = GameGraph::new(
            vec![Player::Zero, Player::One, Player::One, Player::One],
            vec![vec![1, 2], vec![3], vec![3], vec![0]],
        )
        .unwrap()
        .with_initial(0)
        .unwrap();
        (g, Objective::Reach(vset(&[3])))
    }

    /// The same arena with an extra Player-1 detour from the left corridor,
    /// and the win condition tightened to one exact infinity set.
    pub fn example_muller_game() -> (GameGraph, Objective) {
        let g = GameGraph::new(
            vec![
                Player::Zero,
                Player::One,
                Player::One,
                Player::One,
                Player::One,
            ],
            vec![vec![1, 2], vec![3, 4], vec![3], vec![0], vec![0]],
        )
        .unwrap()
        .with_initial(0)
        .unwrap();
        (g, Objective::Muller(vfamily(&[&[0, 1, 2, 3]])))
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;

    #[test]
    fn construction_rejects_malformed_graphs() {
        assert_eq!(
            GameGraph::new(vec![Player::Zero], vec![vec![]]),
            Err(Error::NoSuccessor(0))
        );
        assert_eq!(
            GameGraph::new(vec![Player::Zero], vec![vec![1]]),
            Err(Error::VertexOutOfRange(1, 1))
        );
        assert!(GameGraph::new(vec![Player::Zero], vec![vec![0], vec![0]]).is_err());
        let g = GameGraph::new(vec![Player::Zero], vec![vec![0]]).unwrap();
        assert!(g.clone().with_initial(3).is_err());
        assert!(g.clone().with_names(vec![]).is_err());
        let g = g.with_names(vec!["hub".into()]).unwrap();
        assert_eq!(g.name(0), "hub");
    }

    #[test]
    fn objective_validation() {
        let (g, _) = example_reach_game();
        assert!(Objective::Reach(vset(&[3])).validate(&g).is_ok());
        assert_eq!(
            Objective::Reach(vset(&[9])).validate(&g),
            Err(Error::VertexOutOfRange(9, 4))
        );
        assert_eq!(
            Objective::Parity(vec![0, 1]).validate(&g),
            Err(Error::MissingPriority(2))
        );
        assert!(Objective::Parity(vec![0, 1, 2, 3]).validate(&g).is_ok());
        assert!(Objective::Muller(vfamily(&[&[0, 7]])).validate(&g).is_err());
    }

    #[test]
    fn record_folding() {
        let rec = LarRecord::identity(3);
        assert_eq!(rec.order, vec![0, 1, 2]);
        assert_eq!(rec.hit, 1);

        let rec = rec.fold(2);
        assert_eq!(rec.order, vec![2, 0, 1]);
        assert_eq!(rec.hit, 3);
        assert_eq!(rec.hit_set(), vset(&[0, 1, 2]));

        let rec = rec.fold(0);
        assert_eq!(rec.order, vec![0, 2, 1]);
        assert_eq!(rec.hit, 2);
        assert_eq!(rec.hit_set(), vset(&[0, 2]));
        assert_eq!(rec.to_string(), "[0 2 1]@2");

        let rec = rec.fold(0);
        assert_eq!(rec.order, vec![0, 2, 1]);
        assert_eq!(rec.hit, 1);
        assert_eq!(rec.hit_set(), vset(&[0]));
    }
}
