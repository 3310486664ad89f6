//! Text and JSON renderings of the documents the command line emits.
//!
//! The JSON key names are part of the output contract and stay as written;
//! the text forms are for people and make no stability promise.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::automata::StateSet;
use crate::classify::{completeness_label, Classification, Evidence, LoopPair};
use crate::expansion::{ClassRef, HierarchyTable, JumpReport};
use crate::games::{LiftConvention, SolveResult, Strategy};
use crate::words::UpWord;

fn state_array(s: &StateSet) -> Value {
    Value::Array(s.iter().map(|&q| json!(q)).collect())
}

fn states_text(s: &StateSet) -> String {
    let inner: Vec<String> = s.iter().map(|q| q.to_string()).collect();
    format!("{{{}}}", inner.join(" "))
}

fn loop_pair_json(p: &LoopPair) -> Value {
    json!({"subloop": state_array(&p.subloop), "superloop": state_array(&p.superloop)})
}

pub fn classification_json(c: &Classification) -> Value {
    let word = |w: &Option<UpWord>| match w {
        Some(w) => json!(w.to_string()),
        None => Value::Null,
    };
    let pair = |p: &Option<LoopPair>| match p {
        Some(p) => loop_pair_json(p),
        None => Value::Null,
    };
    json!({
        "label": c.label.as_str(),
        "memberships": {
            "open": c.memberships.open,
            "closed": c.memberships.closed,
            "sigma2": c.memberships.sigma2,
            "pi2": c.memberships.pi2,
        },
        "completeness": completeness_label(c.label).to_string(),
        "evidence": {
            "not_open": word(&c.evidence.not_open),
            "not_closed": word(&c.evidence.not_closed),
            "not_sigma2": pair(&c.evidence.not_sigma2),
            "not_pi2": pair(&c.evidence.not_pi2),
        },
    })
}

pub fn classification_text(c: &Classification) -> String {
    let yn = |b: bool| if b { "yes" } else { "no" };
    let mut out = String::new();
    let _ = writeln!(out, "label: {}", c.label);
    let _ = writeln!(
        out,
        "memberships: open={} closed={} sigma2={} pi2={}",
        yn(c.memberships.open),
        yn(c.memberships.closed),
        yn(c.memberships.sigma2),
        yn(c.memberships.pi2)
    );
    let _ = writeln!(out, "completeness: {}", completeness_label(c.label));
    out.push_str(&evidence_text(&c.evidence));
    out
}

fn evidence_text(e: &Evidence) -> String {
    let mut lines = Vec::new();
    if let Some(w) = &e.not_open {
        lines.push(format!("  not open: {w}"));
    }
    if let Some(w) = &e.not_closed {
        lines.push(format!("  not closed: {w}"));
    }
    if let Some(p) = &e.not_sigma2 {
        lines.push(format!(
            "  not sigma2: accepting {} has rejecting subloop {}",
            states_text(&p.superloop),
            states_text(&p.subloop)
        ));
    }
    if let Some(p) = &e.not_pi2 {
        lines.push(format!(
            "  not pi2: accepting {} has rejecting superloop {}",
            states_text(&p.subloop),
            states_text(&p.superloop)
        ));
    }
    if lines.is_empty() {
        "evidence: none\n".to_string()
    } else {
        format!("evidence:\n{}\n", lines.join("\n"))
    }
}

pub fn jump_json(r: &JumpReport) -> Value {
    json!({
        "before": r.before.label.as_str(),
        "after": r.after.label.as_str(),
        "predicted": r.predicted.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "consistent": r.consistent,
        "paper_claim_note": r.paper_claim_note.as_deref().map_or(Value::Null, |n| json!(n)),
    })
}

pub fn jump_text(r: &JumpReport) -> String {
    let refs: Vec<String> = r.predicted.iter().map(|c| c.to_string()).collect();
    let mut out = String::new();
    let _ = writeln!(out, "before: {}", r.before.label);
    let _ = writeln!(out, "after: {}", r.after.label);
    let _ = writeln!(out, "predicted bounds: {}", refs.join(" "));
    let _ = writeln!(out, "consistent: {}", if r.consistent { "yes" } else { "no" });
    if let Some(note) = &r.paper_claim_note {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

fn strategy_json(s: &Strategy) -> Value {
    match s {
        Strategy::Positional(moves) => {
            let mut map = Map::new();
            for (&v, &w) in moves {
                map.insert(v.to_string(), json!(w));
            }
            json!({"kind": "positional", "moves": Value::Object(map)})
        }
        Strategy::FiniteMemory(ms) => json!({
            "kind": "finite-memory",
            "initial": ms.initial,
            "records": ms.records.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "update": ms
                .update
                .iter()
                .map(|(&(m, v), &m2)| json!({"memory": m, "vertex": v, "next": m2}))
                .collect::<Vec<_>>(),
            "moves": ms
                .moves
                .iter()
                .map(|(&(v, m), &w)| json!({"vertex": v, "memory": m, "to": w}))
                .collect::<Vec<_>>(),
        }),
    }
}

pub fn solve_json(r: &SolveResult, convention: Option<LiftConvention>) -> Value {
    json!({
        "win0": r.win0.iter().copied().collect::<Vec<_>>(),
        "win1": r.win1.iter().copied().collect::<Vec<_>>(),
        "strategy0": strategy_json(&r.strategy0),
        "convention": convention.map_or(Value::Null, |c| json!(c.to_string())),
    })
}

fn strategy_text(s: &Strategy, player: &str) -> String {
    match s {
        Strategy::Positional(moves) if moves.is_empty() => {
            format!("strategy{player}: (no owned winning vertices)\n")
        }
        Strategy::Positional(moves) => {
            let parts: Vec<String> =
                moves.iter().map(|(v, w)| format!("v{v}->v{w}")).collect();
            format!("strategy{player}: {}\n", parts.join(" "))
        }
        Strategy::FiniteMemory(ms) => {
            let mut out = format!(
                "strategy{player}: finite memory, {} records, start in record {}\n",
                ms.records.len(),
                ms.records[ms.initial]
            );
            for (&(v, m), &w) in &ms.moves {
                let _ = writeln!(out, "  at v{v} with {} -> v{w}", ms.records[m]);
            }
            out
        }
    }
}

pub fn solve_text(r: &SolveResult, convention: Option<LiftConvention>) -> String {
    let vertices = |s: &BTreeSet<usize>| {
        let inner: Vec<String> = s.iter().map(|v| format!("v{v}")).collect();
        format!("{{{}}}", inner.join(" "))
    };
    let mut out = String::new();
    let _ = writeln!(out, "win0: {}", vertices(&r.win0));
    let _ = writeln!(out, "win1: {}", vertices(&r.win1));
    out.push_str(&strategy_text(&r.strategy0, "0"));
    out.push_str(&strategy_text(&r.strategy1, "1"));
    if let Some(c) = convention {
        let _ = writeln!(out, "convention: {c}");
    }
    out
}

pub fn member_json(word: &UpWord, accepted: bool) -> Value {
    json!({"word": word.to_string(), "accepted": accepted})
}

pub fn member_text(word: &UpWord, accepted: bool) -> String {
    format!(
        "{word}: {}\n",
        if accepted { "accepted" } else { "rejected" }
    )
}

pub fn predict_json(from: &ClassRef, to: &BTreeSet<ClassRef>) -> Value {
    json!({
        "class": from.to_string(),
        "predicted": to.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    })
}

pub fn predict_text(from: &ClassRef, to: &BTreeSet<ClassRef>) -> String {
    let refs: Vec<String> = to.iter().map(|c| c.to_string()).collect();
    format!("{from} -> {}\n", refs.join(" "))
}

pub fn table_json(t: &HierarchyTable) -> Value {
    json!({
        "cells": t
            .cells
            .iter()
            .map(|cell| json!({"class": cell.class.to_string(), "target": cell.target.to_string()}))
            .collect::<Vec<_>>(),
    })
}

pub fn table_text(t: &HierarchyTable) -> String {
    let mut out = String::new();
    for cell in &t.cells {
        if cell.class == cell.target {
            let _ = writeln!(out, "{} stays {}", cell.class, cell.target);
        } else {
            let _ = writeln!(out, "{} -> {}", cell.class, cell.target);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::testutil::{ab_prefix, inf_many_a};
    use crate::classify::classify;
    use crate::expansion::{hierarchy_table, jump_report, predict_jump, registered_fixture};
    use crate::games::testutil::{example_muller_game, example_reach_game};
    use crate::games::solve;
    use crate::words::Alphabet;
    use crate::Limits;

    #[test]
    fn classification_document_has_the_fixed_keys() {
        let c = classify(&inf_many_a(), &Limits::DEFAULT).unwrap();
        let doc = classification_json(&c);
        assert_eq!(doc["label"], "PI2_PROPER");
        assert_eq!(doc["memberships"]["pi2"], true);
        assert_eq!(doc["memberships"]["open"], false);
        assert_eq!(doc["completeness"], "PI_COMPLETE(2)");
        assert!(doc["evidence"]["not_open"].is_string());
        assert!(doc["evidence"]["not_sigma2"].is_object());
        assert!(doc["evidence"]["not_pi2"].is_null());

        let text = classification_text(&c);
        assert!(text.contains("label: PI2_PROPER"));
        assert!(text.contains("sigma2=no"));
    }

    #[test]
    fn jump_document_quotes_the_recorded_claim_on_the_fixture() {
        let bigger = Alphabet::new("abc".chars()).unwrap();
        let r = jump_report(&registered_fixture(), &bigger, &Limits::DEFAULT).unwrap();
        let doc = jump_json(&r);
        assert_eq!(doc["before"], "CLOPEN");
        assert_eq!(doc["consistent"], true);
        let note = doc["paper_claim_note"].as_str().unwrap();
        assert!(note.contains("complete for $\\Sigma_2^0$ in $B^\\omega$"));

        let text = jump_text(&r);
        assert!(text.contains("consistent: yes"));
        assert!(text.contains("note: "));
    }

    #[test]
    fn jump_document_without_note_serializes_null() {
        let bigger = Alphabet::new("abc".chars()).unwrap();
        let r = jump_report(&inf_many_a(), &bigger, &Limits::DEFAULT).unwrap();
        assert!(jump_json(&r)["paper_claim_note"].is_null());
        assert!(!jump_text(&r).contains("note:"));
    }

    #[test]
    fn solve_document_lists_regions_and_the_positional_strategy() {
        let (g, objective) = example_reach_game();
        let r = solve(&g, &objective, &Limits::DEFAULT).unwrap();
        let doc = solve_json(&r, None);
        assert_eq!(doc["win0"].as_array().unwrap().len(), 4);
        assert_eq!(doc["strategy0"]["kind"], "positional");
        assert_eq!(doc["strategy0"]["moves"]["0"], 1);
        assert!(doc["convention"].is_null());

        let text = solve_text(&r, None);
        assert!(text.contains("win0: {v0 v1 v2 v3}"));
        assert!(text.contains("v0->v1"));
    }

    #[test]
    fn solve_document_renders_finite_memory_strategies() {
        let (g, objective) = example_muller_game();
        let r = solve(&g, &objective, &Limits::DEFAULT).unwrap();
        let doc = solve_json(&r, Some(LiftConvention::PaperExact));
        assert_eq!(doc["convention"], "PAPER_EXACT");
        assert_eq!(doc["win1"].as_array().unwrap().len(), 5);
        let text = solve_text(&r, Some(LiftConvention::PaperExact));
        assert!(text.contains("convention: PAPER_EXACT"));
    }

    #[test]
    fn predict_and_table_renderings_name_the_classes() {
        let from = ClassRef::pi(2);
        let to = predict_jump(from);
        assert_eq!(predict_text(&from, &to), "Pi2 -> Pi3\n");
        assert_eq!(predict_json(&from, &to)["predicted"][0], "Pi3");

        let table = hierarchy_table(2).unwrap();
        let text = table_text(&table);
        assert!(text.contains("Sigma1 -> Sigma2"));
        assert!(text.contains("Pi1 stays Pi1"));
        assert!(text.contains("SigmaOmega stays SigmaOmega"));
        let doc = table_json(&table);
        assert_eq!(doc["cells"].as_array().unwrap().len(), 10);
    }

    #[test]
    fn classification_text_reports_missing_evidence() {
        let c = classify(&ab_prefix(), &Limits::DEFAULT).unwrap();
        assert!(classification_text(&c).contains("evidence: none"));
    }
}
