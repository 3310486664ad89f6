//! Line-oriented text format for games, plus a reader for the widespread
//! min-parity benchmark format.
//!
//! ```text
//! # comments start with '#'
//! vertex 0 name start owner 0 succ 1,2
//! vertex 1 owner 1 succ 3
//! vertex 2 owner 1 succ 3
//! vertex 3 owner 1 succ 0
//! initial 0
//! objective reach 3
//! ```
//!
//! Objective lines: `reach 3`, `safety 0 1`, `buchi 2`, `cobuchi 2`,
//! `parity 0:1 1:2 2:0 3:1`, `muller {0 1 2 3} {0 2 3}` (sets in braces,
//! bare `muller` for the empty family). The benchmark format consists of
//! lines `<id> <priority> <owner> <succ,succ,...> ["name"];` after an
//! optional `parity <max-id>;` header.

use std::collections::BTreeMap;

use super::{GameGraph, Objective, Player, VertexId, VertexSet};
use crate::Error;

/// A parsed game file: the arena and, when the file carries one, the
/// objective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameFile {
    pub graph: GameGraph,
    pub objective: Option<Objective>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_id(line: usize, token: &str) -> Result<VertexId, Error> {
    token
        .parse::<VertexId>()
        .map_err(|_| parse_err(line, format!("bad vertex id '{token}'")))
}

fn parse_id_list(line: usize, text: &str) -> Result<Vec<VertexId>, Error> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_id(line, t))
        .collect()
}

/// Parse the native game format. Errors carry 1-based line numbers.
pub fn parse_game(text: &str) -> Result<GameFile, Error> {
    struct VertexLine {
        line: usize,
        name: Option<String>,
        owner: Player,
        succ: Vec<VertexId>,
    }
    let mut vertex_lines: BTreeMap<VertexId, VertexLine> = BTreeMap::new();
    let mut initial: Option<(usize, VertexId)> = None;
    let mut objective: Option<(usize, String)> = None;
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next().unwrap() {
            "vertex" => {
                let id_token = tokens
                    .next()
                    .ok_or_else(|| parse_err(line_no, "vertex line without an id"))?;
                let id = parse_id(line_no, id_token)?;
                if vertex_lines.contains_key(&id) {
                    return Err(parse_err(line_no, format!("duplicate vertex {id}")));
                }
                let mut name = None;
                let mut owner = None;
                let mut succ = None;
                while let Some(key) = tokens.next() {
                    let value = tokens.next().ok_or_else(|| {
                        parse_err(line_no, format!("'{key}' without a value"))
                    })?;
                    match key {
                        "name" => name = Some(value.to_string()),
                        "owner" => {
                            let index = value.parse::<usize>().ok();
                            owner = Some(
                                index
                                    .map(Player::from_index)
                                    .transpose()
                                    .ok()
                                    .flatten()
                                    .ok_or_else(|| {
                                        parse_err(line_no, format!("bad owner '{value}'"))
                                    })?,
                            );
                        }
                        "succ" => succ = Some(parse_id_list(line_no, value)?),
                        other => {
                            return Err(parse_err(
                                line_no,
                                format!("unknown vertex attribute '{other}'"),
                            ))
                        }
                    }
                }
                let owner = owner
                    .ok_or_else(|| parse_err(line_no, format!("vertex {id} without an owner")))?;
                let succ = succ.ok_or_else(|| {
                    parse_err(line_no, format!("vertex {id} without successors"))
                })?;
                vertex_lines.insert(
                    id,
                    VertexLine {
                        line: line_no,
                        name,
                        owner,
                        succ,
                    },
                );
            }
            "initial" => {
                if initial.is_some() {
                    return Err(parse_err(line_no, "duplicate 'initial' line"));
                }
                let token = tokens
                    .next()
                    .ok_or_else(|| parse_err(line_no, "'initial' without a vertex"))?;
                initial = Some((line_no, parse_id(line_no, token)?));
                if tokens.next().is_some() {
                    return Err(parse_err(line_no, "trailing tokens after 'initial'"));
                }
            }
            "objective" => {
                if objective.is_some() {
                    return Err(parse_err(line_no, "duplicate 'objective' line"));
                }
                let rest = line["objective".len()..].trim().to_string();
                if rest.is_empty() {
                    return Err(parse_err(line_no, "'objective' without a kind"));
                }
                objective = Some((line_no, rest));
            }
            other => {
                return Err(parse_err(
                    line_no,
                    format!("unknown directive '{other}' (expected vertex/initial/objective)"),
                ))
            }
        }
    }

    if vertex_lines.is_empty() {
        return Err(parse_err(last_line.max(1), "no vertices declared"));
    }
    let n = vertex_lines.len();
    for (expected, &id) in vertex_lines.keys().enumerate() {
        if id != expected {
            let line = vertex_lines[&id].line;
            return Err(parse_err(
                line,
                format!("vertex ids must cover 0..{} without gaps, got {id}", n - 1),
            ));
        }
    }

    let owners: Vec<Player> = vertex_lines.values().map(|v| v.owner).collect();
    let succ: Vec<Vec<VertexId>> = vertex_lines.values().map(|v| v.succ.clone()).collect();
    let names: Vec<String> = vertex_lines
        .iter()
        .map(|(&id, v)| v.name.clone().unwrap_or_else(|| format!("v{id}")))
        .collect();
    let mut graph = GameGraph::new(owners, succ)?.with_names(names)?;
    if let Some((line, v)) = initial {
        graph = graph
            .with_initial(v)
            .map_err(|_| parse_err(line, format!("initial vertex {v} does not exist")))?;
    }
    let objective = match objective {
        Some((line, spec)) => Some(parse_objective(line, &spec, n)?),
        None => None,
    };
    Ok(GameFile { graph, objective })
}

fn parse_objective(line: usize, spec: &str, vertices: usize) -> Result<Objective, Error> {
    let (kind, rest) = match spec.split_once(char::is_whitespace) {
        Some((kind, rest)) => (kind, rest.trim()),
        None => (spec, ""),
    };
    match kind {
        "reach" | "safety" | "buchi" | "cobuchi" => {
            let set: VertexSet = parse_id_list(line, rest)?.into_iter().collect();
            Ok(match kind {
                "reach" => Objective::Reach(set),
                "safety" => Objective::Safety(set),
                "buchi" => Objective::Buchi(set),
                _ => Objective::CoBuchi(set),
            })
        }
        "parity" => {
            let mut priorities = vec![None; vertices];
            for token in rest.split_whitespace() {
                let (v, p) = token.split_once(':').ok_or_else(|| {
                    parse_err(line, format!("expected vertex:priority, got '{token}'"))
                })?;
                let v = parse_id(line, v)?;
                if v >= vertices {
                    return Err(parse_err(line, format!("vertex {v} does not exist")));
                }
                let p = p
                    .parse::<u32>()
                    .map_err(|_| parse_err(line, format!("bad priority '{p}'")))?;
                if priorities[v].replace(p).is_some() {
                    return Err(parse_err(line, format!("two priorities for vertex {v}")));
                }
            }
            let priorities: Vec<u32> = priorities
                .into_iter()
                .enumerate()
                .map(|(v, p)| p.ok_or_else(|| parse_err(line, format!("vertex {v} has no priority"))))
                .collect::<Result<_, _>>()?;
            Ok(Objective::Parity(priorities))
        }
        "muller" => {
            let mut family = std::collections::BTreeSet::new();
            let mut current: Option<VertexSet> = None;
            let mut token = String::new();
            for c in rest.chars() {
                match c {
                    '{' => {
                        if current.is_some() {
                            return Err(parse_err(line, "nested '{' in muller family"));
                        }
                        current = Some(VertexSet::new());
                    }
                    '}' | ' ' | '\t' => {
                        if !token.is_empty() {
                            let set = current.as_mut().ok_or_else(|| {
                                parse_err(line, "vertex outside braces in muller family")
                            })?;
                            set.insert(parse_id(line, &token)?);
                            token.clear();
                        }
                        if c == '}' {
                            let set = current.take().ok_or_else(|| {
                                parse_err(line, "unmatched '}' in muller family")
                            })?;
                            family.insert(set);
                        }
                    }
                    other => token.push(other),
                }
            }
            if current.is_some() || !token.is_empty() {
                return Err(parse_err(line, "unterminated set in muller family"));
            }
            Ok(Objective::Muller(family))
        }
        other => Err(parse_err(line, format!("unknown objective kind '{other}'"))),
    }
}

fn write_set(out: &mut String, set: &VertexSet) {
    for &v in set {
        out.push(' ');
        out.push_str(&v.to_string());
    }
}

/// Render a game (and objective, if any) in the native format.
pub fn serialize_game(file: &GameFile) -> String {
    let g = &file.graph;
    let mut out = String::new();
    for v in 0..g.vertices() {
        out.push_str(&format!("vertex {v} name {} owner {} succ ", g.name(v), g.owner(v)));
        let succ: Vec<String> = g.successors(v).iter().map(|w| w.to_string()).collect();
        out.push_str(&succ.join(","));
        out.push('\n');
    }
    if let Some(v) = g.initial() {
        out.push_str(&format!("initial {v}\n"));
    }
    if let Some(objective) = &file.objective {
        let mut line = format!("objective {}", objective.kind());
        match objective {
            Objective::Reach(set)
            | Objective::Safety(set)
            | Objective::Buchi(set)
            | Objective::CoBuchi(set) => write_set(&mut line, set),
            Objective::Parity(priorities) => {
                for (v, p) in priorities.iter().enumerate() {
                    line.push_str(&format!(" {v}:{p}"));
                }
            }
            Objective::Muller(family) => {
                for set in family {
                    line.push_str(" {");
                    let inner: Vec<String> = set.iter().map(|v| v.to_string()).collect();
                    line.push_str(&inner.join(" "));
                    line.push('}');
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Parse the min-parity benchmark format: graph plus per-vertex priorities.
pub fn parse_pgsolver(text: &str) -> Result<(GameGraph, Vec<u32>), Error> {
    struct Row {
        line: usize,
        priority: u32,
        owner: Player,
        succ: Vec<VertexId>,
        name: Option<String>,
    }
    let mut rows: BTreeMap<VertexId, Row> = BTreeMap::new();
    let mut saw_header = false;
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        let line = line.strip_suffix(';').unwrap_or(line).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("parity") {
            if saw_header || !rows.is_empty() {
                return Err(parse_err(line_no, "misplaced 'parity' header"));
            }
            rest.trim()
                .parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("bad header '{line}'")))?;
            saw_header = true;
            continue;
        }
        let (line_body, name) = match line.split_once('"') {
            Some((body, quoted)) => {
                let name = quoted
                    .strip_suffix('"')
                    .ok_or_else(|| parse_err(line_no, "unterminated name quote"))?;
                (body.trim(), Some(name.to_string()))
            }
            None => (line, None),
        };
        let mut tokens = line_body.split_whitespace();
        let id = parse_id(
            line_no,
            tokens
                .next()
                .ok_or_else(|| parse_err(line_no, "empty vertex line"))?,
        )?;
        let priority = tokens
            .next()
            .and_then(|t| t.parse::<u32>().ok())
            .ok_or_else(|| parse_err(line_no, "missing or bad priority"))?;
        let owner = tokens
            .next()
            .and_then(|t| t.parse::<usize>().ok())
            .map(Player::from_index)
            .transpose()
            .ok()
            .flatten()
            .ok_or_else(|| parse_err(line_no, "missing or bad owner"))?;
        let succ = parse_id_list(
            line_no,
            tokens
                .next()
                .ok_or_else(|| parse_err(line_no, "missing successor list"))?,
        )?;
        if tokens.next().is_some() {
            return Err(parse_err(line_no, "trailing tokens on vertex line"));
        }
        if rows.contains_key(&id) {
            return Err(parse_err(line_no, format!("duplicate vertex {id}")));
        }
        rows.insert(
            id,
            Row {
                line: line_no,
                priority,
                owner,
                succ,
                name,
            },
        );
    }

    if rows.is_empty() {
        return Err(parse_err(last_line.max(1), "no vertices declared"));
    }
    let n = rows.len();
    for (expected, &id) in rows.keys().enumerate() {
        if id != expected {
            return Err(parse_err(
                rows[&id].line,
                format!("vertex ids must cover 0..{} without gaps, got {id}", n - 1),
            ));
        }
    }
    let owners = rows.values().map(|r| r.owner).collect();
    let succ = rows.values().map(|r| r.succ.clone()).collect();
    let names = rows
        .iter()
        .map(|(&id, r)| r.name.clone().unwrap_or_else(|| format!("v{id}")))
        .collect();
    let priorities = rows.values().map(|r| r.priority).collect();
    let graph = GameGraph::new(owners, succ)?.with_names(names)?;
    Ok((graph, priorities))
}

/// Parse either format, picking by the first meaningful line.
pub fn parse_any_game(text: &str) -> Result<GameFile, Error> {
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let native = ["vertex", "initial", "objective"]
            .iter()
            .any(|kw| line.starts_with(kw));
        if native {
            return parse_game(text);
        }
        let (graph, priorities) = parse_pgsolver(text)?;
        return Ok(GameFile {
            graph,
            objective: Some(Objective::Parity(priorities)),
        });
    }
    Err(parse_err(1, "empty game file"))
}
