//! Line-oriented text format for automata.
//!
//! ```text
//! # comments start with '#'
//! alphabet: a b
//! states: 2
//! initial: 0
//! acceptance: buchi 0
//! trans: 0 a 0
//! trans: 0 b 1
//! trans: 1 a 0
//! trans: 1 b 1
//! ```
//!
//! Acceptance lines: `reach 2`, `safety 0 1`, `buchi 1 3`, `cobuchi 0`,
//! `parity 0:1 1:2`, `muller {2} {1 2}` (sets in braces, `muller` alone for
//! the empty family). Every (state, symbol) pair must appear exactly once.

use std::collections::BTreeSet;

use super::{Acceptance, DetAutomaton, StateSet};
use crate::words::Alphabet;
use crate::Error;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parse the text format. Errors carry 1-based line numbers.
pub fn parse_automaton(text: &str) -> Result<DetAutomaton, Error> {
    let mut alphabet: Option<(usize, Alphabet)> = None;
    let mut states: Option<(usize, usize)> = None;
    let mut initial: Option<(usize, usize)> = None;
    let mut acceptance: Option<(usize, String)> = None;
    let mut transitions: Vec<(usize, String)> = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| parse_err(line_no, format!("expected 'key: value', got '{line}'")))?;
        let rest = rest.trim().to_string();
        match key.trim() {
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(parse_err(line_no, "duplicate 'alphabet' line"));
                }
                let mut symbols = Vec::new();
                for token in rest.split_whitespace() {
                    let mut chars = token.chars();
                    match (chars.next(), chars.next()) {
                        (Some(c), None) => symbols.push(c),
                        _ => {
                            return Err(parse_err(
                                line_no,
                                format!("symbols are single characters, got '{token}'"),
                            ))
                        }
                    }
                }
                let a = Alphabet::new(symbols).map_err(|e| parse_err(line_no, e.to_string()))?;
                alphabet = Some((line_no, a));
            }
            "states" => {
                if states.is_some() {
                    return Err(parse_err(line_no, "duplicate 'states' line"));
                }
                let n = rest
                    .parse::<usize>()
                    .map_err(|_| parse_err(line_no, format!("bad state count '{rest}'")))?;
                states = Some((line_no, n));
            }
            "initial" => {
                if initial.is_some() {
                    return Err(parse_err(line_no, "duplicate 'initial' line"));
                }
                let q = rest
                    .parse::<usize>()
                    .map_err(|_| parse_err(line_no, format!("bad initial state '{rest}'")))?;
                initial = Some((line_no, q));
            }
            "acceptance" => {
                if acceptance.is_some() {
                    return Err(parse_err(line_no, "duplicate 'acceptance' line"));
                }
                acceptance = Some((line_no, rest));
            }
            "trans" => transitions.push((line_no, rest)),
            other => {
                return Err(parse_err(line_no, format!("unknown key '{other}'")));
            }
        }
    }

    let (_, alphabet) =
        alphabet.ok_or_else(|| parse_err(last_line, "missing 'alphabet' line"))?;
    let (states_line, n) = states.ok_or_else(|| parse_err(last_line, "missing 'states' line"))?;
    if n == 0 {
        return Err(parse_err(states_line, "automaton needs at least one state"));
    }
    let (initial_line, initial) =
        initial.ok_or_else(|| parse_err(last_line, "missing 'initial' line"))?;
    if initial >= n {
        return Err(parse_err(
            initial_line,
            format!("initial state {initial} out of range (states: {n})"),
        ));
    }
    let (acc_line, acc_text) =
        acceptance.ok_or_else(|| parse_err(last_line, "missing 'acceptance' line"))?;
    let acceptance = parse_acceptance(&acc_text, n, acc_line)?;

    let mut delta: Vec<Vec<Option<usize>>> = vec![vec![None; alphabet.len()]; n];
    for (line_no, t) in &transitions {
        let parts: Vec<&str> = t.split_whitespace().collect();
        let [from, symbol, to] = parts.as_slice() else {
            return Err(parse_err(
                *line_no,
                format!("expected 'trans: <from> <symbol> <to>', got '{t}'"),
            ));
        };
        let from: usize = from
            .parse()
            .map_err(|_| parse_err(*line_no, format!("bad state '{from}'")))?;
        let to: usize = to
            .parse()
            .map_err(|_| parse_err(*line_no, format!("bad state '{to}'")))?;
        let mut chars = symbol.chars();
        let symbol = match (chars.next(), chars.next()) {
            (Some(c), None) => c,
            _ => return Err(parse_err(*line_no, format!("bad symbol '{symbol}'"))),
        };
        let s = alphabet
            .index_of(symbol)
            .map_err(|e| parse_err(*line_no, e.to_string()))?;
        if from >= n || to >= n {
            return Err(parse_err(
                *line_no,
                format!("state out of range in '{t}' (states: {n})"),
            ));
        }
        if delta[from][s].is_some() {
            return Err(parse_err(
                *line_no,
                format!("duplicate transition for state {from} on '{symbol}'"),
            ));
        }
        delta[from][s] = Some(to);
    }

    let mut table = Vec::with_capacity(n);
    for (q, row) in delta.into_iter().enumerate() {
        let mut complete = Vec::with_capacity(alphabet.len());
        for (s, entry) in row.into_iter().enumerate() {
            complete.push(entry.ok_or_else(|| {
                parse_err(
                    last_line,
                    format!(
                        "missing transition for state {q} on '{}'",
                        alphabet.symbols()[s]
                    ),
                )
            })?);
        }
        table.push(complete);
    }

    DetAutomaton::new(alphabet, table, initial, acceptance)
        .map_err(|e| parse_err(last_line, e.to_string()))
}

fn parse_state_list(text: &str, states: usize, line: usize) -> Result<StateSet, Error> {
    let mut set = StateSet::new();
    for token in text.split_whitespace() {
        let q: usize = token
            .parse()
            .map_err(|_| parse_err(line, format!("bad state '{token}'")))?;
        if q >= states {
            return Err(parse_err(
                line,
                format!("state {q} out of range (states: {states})"),
            ));
        }
        set.insert(q);
    }
    Ok(set)
}

fn parse_acceptance(text: &str, states: usize, line: usize) -> Result<Acceptance, Error> {
    let (kind, rest) = match text.split_once(char::is_whitespace) {
        Some((k, r)) => (k, r.trim()),
        None => (text, ""),
    };
    match kind {
        "reach" => Ok(Acceptance::Reach(parse_state_list(rest, states, line)?)),
        "safety" => Ok(Acceptance::Safety(parse_state_list(rest, states, line)?)),
        "buchi" => Ok(Acceptance::Buchi(parse_state_list(rest, states, line)?)),
        "cobuchi" => Ok(Acceptance::CoBuchi(parse_state_list(rest, states, line)?)),
        "parity" => {
            let mut priorities: Vec<Option<u32>> = vec![None; states];
            for token in rest.split_whitespace() {
                let (q, p) = token.split_once(':').ok_or_else(|| {
                    parse_err(line, format!("expected '<state>:<priority>', got '{token}'"))
                })?;
                let q: usize = q
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad state '{q}'")))?;
                let p: u32 = p
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad priority '{p}'")))?;
                if q >= states {
                    return Err(parse_err(
                        line,
                        format!("state {q} out of range (states: {states})"),
                    ));
                }
                if priorities[q].is_some() {
                    return Err(parse_err(line, format!("duplicate priority for state {q}")));
                }
                priorities[q] = Some(p);
            }
            let priorities = priorities
                .into_iter()
                .enumerate()
                .map(|(q, p)| p.ok_or_else(|| parse_err(line, format!("state {q} has no priority"))))
                .collect::<Result<Vec<u32>, Error>>()?;
            Ok(Acceptance::Parity(priorities))
        }
        "muller" => {
            let mut family: BTreeSet<StateSet> = BTreeSet::new();
            let mut remaining = rest;
            while !remaining.is_empty() {
                let open = remaining.find('{').ok_or_else(|| {
                    parse_err(line, format!("expected '{{…}}' sets, got '{remaining}'"))
                })?;
                if !remaining[..open].trim().is_empty() {
                    return Err(parse_err(
                        line,
                        format!("unexpected '{}'", remaining[..open].trim()),
                    ));
                }
                let close = remaining[open..]
                    .find('}')
                    .ok_or_else(|| parse_err(line, "unbalanced '{'"))?
                    + open;
                family.insert(parse_state_list(&remaining[open + 1..close], states, line)?);
                remaining = remaining[close + 1..].trim_start();
            }
            Ok(Acceptance::Muller(family))
        }
        other => Err(parse_err(
            line,
            format!("unknown acceptance variant '{other}'"),
        )),
    }
}

fn render_set(set: &StateSet) -> String {
    let parts: Vec<String> = set.iter().map(|q| q.to_string()).collect();
    parts.join(" ")
}

/// Serialize into the same text format `parse_automaton` reads.
pub fn serialize_automaton(automaton: &DetAutomaton) -> String {
    let mut out = String::new();
    out.push_str(&format!("alphabet: {}\n", automaton.alphabet()));
    out.push_str(&format!("states: {}\n", automaton.states()));
    out.push_str(&format!("initial: {}\n", automaton.initial()));
    let acc = match automaton.acceptance() {
        Acceptance::Reach(f) => format!("reach {}", render_set(f)),
        Acceptance::Safety(f) => format!("safety {}", render_set(f)),
        Acceptance::Buchi(f) => format!("buchi {}", render_set(f)),
        Acceptance::CoBuchi(f) => format!("cobuchi {}", render_set(f)),
        Acceptance::Parity(priorities) => {
            let parts: Vec<String> = priorities
                .iter()
                .enumerate()
                .map(|(q, p)| format!("{q}:{p}"))
                .collect();
            format!("parity {}", parts.join(" "))
        }
        Acceptance::Muller(family) => {
            let mut s = "muller".to_string();
            for set in family {
                s.push_str(&format!(" {{{}}}", render_set(set)));
            }
            s
        }
    };
    out.push_str(&format!("acceptance: {}\n", acc.trim_end()));
    for q in 0..automaton.states() {
        for (s, &symbol) in automaton.alphabet().symbols().iter().enumerate() {
            out.push_str(&format!(
                "trans: {q} {symbol} {}\n",
                automaton.step_index(q, s)
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;

    const EXAMPLE: &str = "\
# infinitely many a
alphabet: a b
states: 2
initial: 0
acceptance: buchi 0
trans: 0 a 0
trans: 0 b 1
trans: 1 a 0
trans: 1 b 1
";

    #[test]
    fn parses_the_documented_example() {
        let a = parse_automaton(EXAMPLE).unwrap();
        assert_eq!(a, inf_many_a());
    }

    #[test]
    fn round_trips_every_acceptance_variant() {
        let variants = vec![
            Acceptance::Reach(set(&[1])),
            Acceptance::Safety(set(&[0])),
            Acceptance::Buchi(set(&[0, 1])),
            Acceptance::CoBuchi(set(&[1])),
            Acceptance::Parity(vec![2, 1]),
            Acceptance::Muller(family(&[&[0], &[0, 1]])),
            Acceptance::Muller(family(&[])),
            Acceptance::Muller(family(&[&[]])),
        ];
        for acc in variants {
            let a = last_letter_automaton(acc);
            let text = serialize_automaton(&a);
            assert_eq!(parse_automaton(&text).unwrap(), a, "{text}");
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let missing = EXAMPLE.replace("trans: 1 b 1\n", "");
        match parse_automaton(&missing) {
            Err(Error::Parse { message, .. }) => {
                assert!(message.contains("state 1 on 'b'"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }

        let dup = format!("{EXAMPLE}trans: 1 b 0\n");
        match parse_automaton(&dup) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 10);
                assert!(message.contains("duplicate transition"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }

        match parse_automaton(&EXAMPLE.replace("buchi 0", "buchi 7")) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 5);
                assert!(message.contains("out of range"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }

        match parse_automaton(&EXAMPLE.replace("alphabet: a b", "alphabet: ab cd")) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let noisy = format!("\n# header\n\n{EXAMPLE}\n# trailer\n");
        assert_eq!(parse_automaton(&noisy).unwrap(), inf_many_a());
    }

    #[test]
    fn muller_set_syntax() {
        let text = EXAMPLE.replace("buchi 0", "muller {0} {0 1}");
        let a = parse_automaton(&text).unwrap();
        assert_eq!(
            a.acceptance(),
            &Acceptance::Muller(family(&[&[0], &[0, 1]]))
        );
        assert!(parse_automaton(&EXAMPLE.replace("buchi 0", "muller {0")).is_err());
        assert!(parse_automaton(&EXAMPLE.replace("buchi 0", "muller 0 1")).is_err());
    }
}
