//! Independent checking of solver output: given claimed regions and
//! strategies, build the graph of everything the opponent can still do and
//! look for a spoiling lasso.

use std::collections::{BTreeMap, BTreeSet};

use super::{GameGraph, Objective, Player, SolveResult, Strategy, VertexId, VertexSet};
use crate::Error;

/// Check a full solver result against the objective.
///
/// Returns false when the regions fail to partition the arena or when some
/// play consistent with a claimed strategy violates (for Player 0) or
/// satisfies (for Player 1) the objective. A strategy with no move at a
/// reachable owned vertex is an error, not a refutation.
pub fn verify_strategy(
    g: &GameGraph,
    objective: &Objective,
    result: &SolveResult,
) -> Result<bool, Error> {
    objective.validate(g)?;
    let n = g.vertices();
    if result.win0.iter().chain(result.win1.iter()).any(|&v| v >= n) {
        return Ok(false);
    }
    if result.win0.len() + result.win1.len() != n
        || result.win0.intersection(&result.win1).next().is_some()
    {
        return Ok(false);
    }
    Ok(
        wins(g, objective, Player::Zero, &result.win0, &result.strategy0)?
            && wins(g, objective, Player::One, &result.win1, &result.strategy1)?,
    )
}

/// Every state the opponent can steer to while the player follows the
/// strategy, as a finite graph over (vertex, memory) pairs.
struct Closure {
    states: Vec<(VertexId, usize)>,
    edges: Vec<Vec<usize>>,
}

impl Closure {
    fn vertex(&self, state: usize) -> VertexId {
        self.states[state].0
    }
}

fn build_closure(
    g: &GameGraph,
    player: Player,
    strategy: &Strategy,
    region: &VertexSet,
    stop: Option<&VertexSet>,
) -> Result<Closure, Error> {
    let initial_memory = match strategy {
        Strategy::Positional(_) => 0,
        Strategy::FiniteMemory(ms) => ms.initial,
    };
    let mut ids: BTreeMap<(VertexId, usize), usize> = BTreeMap::new();
    let mut states: Vec<(VertexId, usize)> = Vec::new();
    for &v in region {
        ids.insert((v, initial_memory), states.len());
        states.push((v, initial_memory));
    }
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut head = 0;
    while head < states.len() {
        let (v, memory) = states[head];
        head += 1;
        if stop.is_some_and(|s| s.contains(&v)) {
            edges.push(Vec::new());
            continue;
        }
        let moves: Vec<VertexId> = if g.owner(v) == player {
            let chosen = match strategy {
                Strategy::Positional(map) => map.get(&v).copied(),
                Strategy::FiniteMemory(ms) => ms.moves.get(&(v, memory)).copied(),
            };
            match chosen {
                Some(w) if g.successors(v).contains(&w) => vec![w],
                Some(w) => {
                    return Err(Error::Invalid(format!(
                        "strategy move {v} -> {w} is not an edge"
                    )))
                }
                None => return Err(Error::StrategyUndefined(v)),
            }
        } else {
            g.successors(v).to_vec()
        };
        let mut row = Vec::with_capacity(moves.len());
        for w in moves {
            let next_memory = match strategy {
                Strategy::Positional(_) => 0,
                Strategy::FiniteMemory(ms) => match ms.update.get(&(memory, w)) {
                    Some(&m) => m,
                    None => return Err(Error::StrategyUndefined(v)),
                },
            };
            let key = (w, next_memory);
            let target = *ids.entry(key).or_insert_with(|| {
                states.push(key);
                states.len() - 1
            });
            row.push(target);
        }
        edges.push(row);
    }
    Ok(Closure { states, edges })
}

fn wins(
    g: &GameGraph,
    objective: &Objective,
    player: Player,
    region: &VertexSet,
    strategy: &Strategy,
) -> Result<bool, Error> {
    if region.is_empty() {
        return Ok(true);
    }
    match objective {
        Objective::Reach(target) => match player {
            Player::Zero => {
                let c = build_closure(g, player, strategy, region, Some(target))?;
                Ok(!has_cycle(&induced(&c, |_| true)))
            }
            Player::One => {
                let c = build_closure(g, player, strategy, region, None)?;
                Ok(c.states.iter().all(|&(v, _)| !target.contains(&v)))
            }
        },
        Objective::Safety(safe) => match player {
            Player::Zero => {
                let c = build_closure(g, player, strategy, region, None)?;
                Ok(c.states.iter().all(|&(v, _)| safe.contains(&v)))
            }
            Player::One => {
                let bad: VertexSet = (0..g.vertices()).filter(|v| !safe.contains(v)).collect();
                let c = build_closure(g, player, strategy, region, Some(&bad))?;
                Ok(!has_cycle(&induced(&c, |_| true)))
            }
        },
        Objective::Buchi(target) => {
            let c = build_closure(g, player, strategy, region, None)?;
            match player {
                Player::Zero => Ok(!has_cycle(&induced(&c, |s| !target.contains(&c.vertex(s))))),
                Player::One => Ok(!recurs(&c, |v| target.contains(&v))),
            }
        }
        Objective::CoBuchi(target) => {
            let c = build_closure(g, player, strategy, region, None)?;
            match player {
                Player::Zero => Ok(!recurs(&c, |v| !target.contains(&v))),
                Player::One => Ok(!has_cycle(&induced(&c, |s| target.contains(&c.vertex(s))))),
            }
        }
        Objective::Parity(priorities) => {
            let c = build_closure(g, player, strategy, region, None)?;
            let wrong = |d: u32| (d % 2 == 0) == (player == Player::One);
            let bad_priorities: BTreeSet<u32> = c
                .states
                .iter()
                .map(|&(v, _)| priorities[v])
                .filter(|&d| wrong(d))
                .collect();
            for d in bad_priorities {
                let adj = induced(&c, |s| priorities[c.vertex(s)] >= d);
                let hits = |nodes: &[usize]| {
                    nodes
                        .iter()
                        .any(|&s| priorities[c.vertex(s)] == d)
                };
                if cycle_components(&adj).iter().any(|comp| hits(comp)) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Objective::Muller(family) => {
            let c = build_closure(g, player, strategy, region, None)?;
            let verts: Vec<VertexId> = c
                .states
                .iter()
                .map(|&(v, _)| v)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            if verts.len() > 20 {
                return Err(Error::MemoryLimitExceeded(verts.len(), 20));
            }
            for mask in 1u64..1 << verts.len() {
                let set: VertexSet = verts
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                let losing = match player {
                    Player::Zero => !family.contains(&set),
                    Player::One => family.contains(&set),
                };
                if !losing {
                    continue;
                }
                let adj = induced(&c, |s| set.contains(&c.vertex(s)));
                let exact = |comp: &[usize]| {
                    let seen: VertexSet = comp.iter().map(|&s| c.vertex(s)).collect();
                    seen == set
                };
                if cycle_components(&adj).iter().any(|comp| exact(comp)) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Adjacency over the closure states kept by the predicate, renumbered so
/// node `i` corresponds to the i-th kept state. Kept-node ids map back via
/// the same predicate order, which callers reconstruct through `induced`'s
/// companion bookkeeping below.
struct Induced {
    adj: Vec<Vec<usize>>,
    original: Vec<usize>,
}

fn induced(c: &Closure, keep: impl Fn(usize) -> bool) -> Induced {
    let mut map = vec![usize::MAX; c.states.len()];
    let mut original = Vec::new();
    for s in 0..c.states.len() {
        if keep(s) {
            map[s] = original.len();
            original.push(s);
        }
    }
    let adj = original
        .iter()
        .map(|&s| {
            c.edges[s]
                .iter()
                .copied()
                .filter(|&t| map[t] != usize::MAX)
                .map(|t| map[t])
                .collect()
        })
        .collect();
    Induced { adj, original }
}

fn has_cycle(graph: &Induced) -> bool {
    let n = graph.adj.len();
    let mut color = vec![0u8; n];
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        color[root] = 1;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < graph.adj[node].len() {
                let t = graph.adj[node][*next];
                *next += 1;
                match color[t] {
                    0 => {
                        color[t] = 1;
                        stack.push((t, 0));
                    }
                    1 => return true,
                    _ => {}
                }
            } else {
                color[node] = 2;
                stack.pop();
            }
        }
    }
    false
}

/// Strongly connected components that contain at least one edge, i.e. the
/// places an infinite play can settle. Components are lists of closure-state
/// ids (mapped back through `original`).
fn cycle_components(graph: &Induced) -> Vec<Vec<usize>> {
    let n = graph.adj.len();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        seen[root] = true;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < graph.adj[node].len() {
                let t = graph.adj[node][*next];
                *next += 1;
                if !seen[t] {
                    seen[t] = true;
                    stack.push((t, 0));
                }
            } else {
                order.push(node);
                stack.pop();
            }
        }
    }
    let mut reverse = vec![Vec::new(); n];
    for (s, row) in graph.adj.iter().enumerate() {
        for &t in row {
            reverse[t].push(s);
        }
    }
    let mut component = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for &root in order.iter().rev() {
        if component[root] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![root];
        component[root] = id;
        let mut stack = vec![root];
        while let Some(node) = stack.pop() {
            for &s in &reverse[node] {
                if component[s] == usize::MAX {
                    component[s] = id;
                    members.push(s);
                    stack.push(s);
                }
            }
        }
        components.push(members);
    }
    components
        .into_iter()
        .filter(|members| {
            members.len() > 1
                || graph.adj[members[0]].contains(&members[0])
        })
        .map(|members| members.iter().map(|&m| graph.original[m]).collect())
        .collect()
}

/// Is there a reachable cycle through a state whose vertex satisfies the
/// predicate?
fn recurs(c: &Closure, pred: impl Fn(VertexId) -> bool) -> bool {
    let graph = induced(c, |_| true);
    cycle_components(&graph)
        .iter()
        .any(|comp| comp.iter().any(|&s| pred(c.vertex(s))))
}
