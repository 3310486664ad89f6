//! End-to-end checks of the shipped guarantees, one test per criterion.
//! Each test prints a single pass line; run with `--nocapture` to see all
//! nine together.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use omega_borel::automata::{parse_automaton, serialize_automaton};
use omega_borel::classify::{classify, ClassLabel};
use omega_borel::expansion::{
    class_leq, embed, hierarchy_table, jump_report, registered_fixture, ClassRef,
};
use omega_borel::games::{
    lift_objective, parse_game, solve, verify_strategy, GameFile, LiftConvention, Objective,
    Strategy, VertexSet,
};
use omega_borel::generate::{label_zoo, random_automaton, random_muller_automaton, rng};
use omega_borel::oracle;
use omega_borel::selftest::{
    classifier_exhaustive, classifier_random, embedding_random, solver_muller_random,
    solver_parity_random,
};
use omega_borel::words::{word_distance, Alphabet, FiniteWord, UpWord};
use omega_borel::{Error, Limits};

const L: Limits = Limits::DEFAULT;

fn letters(s: &str) -> Alphabet {
    Alphabet::new(s.chars()).unwrap()
}

fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn load_game(name: &str) -> GameFile {
    let path = fixture_path(name);
    parse_game(&fs::read_to_string(&path).unwrap()).unwrap()
}

#[test]
fn criterion_1_level_four_table_has_exactly_the_published_arrows() {
    let table = hierarchy_table(4).unwrap();
    assert_eq!(table.cells.len(), 14);

    let arrows: BTreeSet<(String, String)> = table
        .forward_arrows()
        .into_iter()
        .map(|(from, to)| (from.to_string(), to.to_string()))
        .collect();
    let expected_arrows: BTreeSet<(String, String)> =
        [("Sigma1", "Sigma2"), ("Pi2", "Pi3"), ("Sigma3", "Sigma4")]
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
    assert_eq!(arrows, expected_arrows);

    let self_loops: BTreeSet<String> = table
        .self_loops()
        .into_iter()
        .map(|c| c.to_string())
        .collect();
    let expected_loops: BTreeSet<String> = [
        "Pi1",
        "Sigma2",
        "Pi3",
        "Sigma4",
        "SigmaOmega",
        "PiOmega",
        "SigmaOmegaPlus1",
        "PiOmegaPlus1",
        "SigmaOmega1",
        "PiOmega1",
    ]
    .into_iter()
    .map(str::to_string)
    .collect();
    assert_eq!(self_loops, expected_loops);

    // The one remaining cell points outside the displayed frame.
    let pi4 = table
        .cells
        .iter()
        .find(|cell| cell.class.to_string() == "Pi4")
        .unwrap();
    assert_eq!(pi4.target.to_string(), "Pi5");

    println!("criterion 1: pass - level-4 table shows exactly three forward arrows and ten self-loops");
}

#[test]
fn criterion_2_example_games_split_between_the_players() {
    let gm = load_game("gm.game");
    let reach = gm.objective.clone().unwrap();
    assert_eq!(reach, Objective::Reach([3].into_iter().collect()));
    let solved = solve(&gm.graph, &reach, &L).unwrap();
    assert!(solved.win0.contains(&0));
    assert!(matches!(solved.strategy0, Strategy::Positional(_)));
    assert_eq!(verify_strategy(&gm.graph, &reach, &solved), Ok(true));

    let gm_prime = load_game("gm_prime.game");
    let muller = gm_prime.objective.clone().unwrap();
    let expected_family: BTreeSet<VertexSet> =
        [[0, 1, 2, 3].into_iter().collect()].into_iter().collect();
    assert_eq!(muller, Objective::Muller(expected_family));
    let solved = solve(&gm_prime.graph, &muller, &L).unwrap();
    assert!(solved.win1.contains(&0));
    assert_eq!(verify_strategy(&gm_prime.graph, &muller, &solved), Ok(true));

    println!("criterion 2: pass - player 0 wins the reach game from v0, player 1 the expanded muller game");
}

#[test]
fn criterion_3_embedded_open_and_closed_sets_keep_their_bounds() {
    let ab = letters("ab");
    let abc = letters("abc");
    let sigma2 = ClassRef::sigma(2);
    let pi1 = ClassRef::pi(1);
    let mut r = rng(33);
    let mut open_seen = 0usize;
    let mut closed_seen = 0usize;
    let mut attempts = 0usize;

    while (open_seen < 200 || closed_seen < 200) && attempts < 20_000 {
        attempts += 1;
        let states = 1 + attempts % 3;
        let a = random_automaton(&mut r, &ab, states, &L).unwrap();
        let before = classify(&a, &L).unwrap();
        if !before.memberships.open && !before.memberships.closed {
            continue;
        }
        let after = classify(&embed(&a, &abc, &L).unwrap(), &L).unwrap();
        if before.memberships.open {
            assert!(
                class_leq(after.label, &sigma2),
                "open language escaped Sigma2 after embedding:\n{}",
                serialize_automaton(&a)
            );
            open_seen += 1;
        }
        if before.memberships.closed {
            assert!(
                class_leq(after.label, &pi1),
                "closed language escaped Pi1 after embedding:\n{}",
                serialize_automaton(&a)
            );
            closed_seen += 1;
        }
    }
    assert!(open_seen >= 200, "only {open_seen} open instances generated");
    assert!(closed_seen >= 200, "only {closed_seen} closed instances generated");

    println!("criterion 3: pass - {open_seen} embedded open sets stayed within Sigma2, {closed_seen} closed within Pi1");
}

#[test]
fn criterion_4_jump_reports_stay_consistent_across_all_labels() {
    let ab = letters("ab");
    let abc = letters("abc");
    let abcd = letters("abcd");
    let mut seen: BTreeSet<&'static str> = BTreeSet::new();
    let mut total = 0usize;

    for (label, a) in label_zoo() {
        for bigger in [&abc, &abcd] {
            let report = jump_report(&a, bigger, &L).unwrap();
            assert!(
                report.consistent,
                "inconsistent jump for the {} zoo automaton into {bigger}",
                label.as_str()
            );
            assert_eq!(report.before.label, label);
            seen.insert(label.as_str());
            total += 1;
        }
    }

    let mut r = rng(44);
    while total < 500 {
        let states = 1 + total % 3;
        let a = if total % 2 == 0 {
            random_automaton(&mut r, &ab, states, &L).unwrap()
        } else {
            random_muller_automaton(&mut r, &ab, states, &L).unwrap()
        };
        let bigger = if total % 4 < 2 { &abc } else { &abcd };
        let report = jump_report(&a, bigger, &L).unwrap();
        assert!(
            report.consistent,
            "inconsistent jump into {bigger} for:\n{}",
            serialize_automaton(&a)
        );
        seen.insert(report.before.label.as_str());
        total += 1;
    }

    for label in ClassLabel::ALL {
        assert!(
            seen.contains(label.as_str()),
            "no instance started from {}",
            label.as_str()
        );
    }

    println!("criterion 4: pass - {total} jump reports all consistent, every label seen before expansion");
}

#[test]
fn criterion_5_classifier_matches_the_brute_force_reference() {
    let exhaustive = classifier_exhaustive(3, &L).unwrap();
    assert!(exhaustive > 70, "the sweep must cover more than the 2-state space");
    let random4 = classifier_random(501, 500, 4, &L).unwrap();
    let random5 = classifier_random(502, 500, 5, &L).unwrap();
    assert_eq!(random4 + random5, 1000);

    println!("criterion 5: pass - classifier agrees with the reference on {exhaustive} exhaustive and 1000 random instances");
}

#[test]
fn criterion_6_solvers_match_strategy_enumeration() {
    let parity = solver_parity_random(601, 2000, &L).unwrap();
    assert_eq!(parity, 2000);
    let muller = solver_muller_random(602, 200, &L).unwrap();
    assert!(muller >= 200, "only {muller} muller games were small enough");

    println!("criterion 6: pass - {parity} parity and {muller} muller games agree with enumeration, every strategy verified");
}

#[test]
fn criterion_7_embedding_preserves_membership_and_composes() {
    let pairs = embedding_random(701, 1000, &L).unwrap();
    assert_eq!(pairs, 1000);

    println!("criterion 7: pass - 1000 membership pairs preserved, fresh-letter words rejected, 125 compositions equivalent");
}

#[test]
fn criterion_8_jump_command_reports_the_recorded_claim() {
    let abc = letters("abc");
    let fixture = registered_fixture();

    // Pin the embedded label with the brute-force reference before trusting
    // any report about it.
    let embedded = embed(&fixture, &abc, &L).unwrap();
    let computed = oracle::label(&embedded);
    assert_eq!(computed, ClassLabel::ClosedProper);

    // The checked-in file denotes the same language as the registered
    // automaton.
    let path = fixture_path("ab_open.aut");
    let parsed = parse_automaton(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(serialize_automaton(&parsed), serialize_automaton(&fixture));

    let report = jump_report(&fixture, &abc, &L).unwrap();
    assert_eq!(report.after.label, computed);
    assert!(report.consistent);
    assert_eq!(report.disagreement, Some(computed != ClassLabel::Sigma2Proper));

    let exe = env!("CARGO_BIN_EXE_omega-borel");
    let out = Command::new(exe)
        .arg("jump")
        .arg(&path)
        .args(["--alphabet", "a,b,c"])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("complete for $\\Sigma_2^0$ in $B^\\omega$"));
    assert!(text.contains("after: CLOSED_PROPER"));
    assert!(text.contains("disagreement: yes"));

    let out = Command::new(exe)
        .arg("jump")
        .arg(&path)
        .args(["--alphabet", "a,b,c", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["consistent"], serde_json::Value::Bool(true));
    assert!(doc["paper_claim_note"]
        .as_str()
        .unwrap()
        .contains("complete for $\\Sigma_2^0$ in $B^\\omega$"));

    println!("criterion 8: pass - jump on the recorded fixture exits 0, quotes the claim, and flags the disagreement");
}

#[test]
fn criterion_9_prefix_metric_is_an_ultrametric_with_exact_identity() {
    fn all_finite(len: usize) -> Vec<Vec<char>> {
        (0..1usize << len)
            .map(|code| {
                (0..len)
                    .map(|i| if code >> i & 1 == 0 { 'a' } else { 'b' })
                    .collect()
            })
            .collect()
    }

    let mut words: Vec<UpWord> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for prefix_len in 0..=3usize {
        for period_len in 1..=4 - prefix_len {
            for prefix in all_finite(prefix_len) {
                for period in all_finite(period_len) {
                    let w = UpWord::new(FiniteWord::new(prefix.clone()), FiniteWord::new(period))
                        .unwrap()
                        .canonicalize();
                    if seen.insert(w.to_string()) {
                        words.push(w);
                    }
                }
            }
        }
    }
    let n = words.len();
    assert!(n > 2, "enumeration produced almost nothing");

    // d = 0 exactly on the diagonal: distinct canonical forms denote
    // distinct words, checked against a direct letter-by-letter expansion
    // well past the deciding bound.
    let mut dist = vec![Vec::with_capacity(n); n];
    for i in 0..n {
        for j in 0..n {
            let d = word_distance(&words[i], &words[j]).distance;
            let agree = (0..24).all(|k| words[i].letter(k) == words[j].letter(k));
            assert_eq!(d.is_zero(), agree, "{} vs {}", words[i], words[j]);
            assert_eq!(d.is_zero(), i == j, "{} vs {}", words[i], words[j]);
            dist[i].push(d);
        }
    }

    for i in 0..n {
        for j in 0..n {
            assert_eq!(dist[i][j], dist[j][i]);
            for k in 0..n {
                assert!(
                    dist[i][k] <= dist[i][j].max(dist[j][k]),
                    "ultrametric inequality fails on {}, {}, {}",
                    words[i],
                    words[j],
                    words[k]
                );
            }
        }
    }

    println!("criterion 9: pass - ultrametric inequality and exact identity over all {n} canonical short words");
}

#[test]
fn lifted_objectives_split_the_expanded_example_by_convention() {
    let base = load_game("gm.game");
    let expanded = load_game("gm_prime.game");
    let reach: VertexSet = [3].into_iter().collect();

    let exact = lift_objective(
        &base.graph,
        &expanded.graph,
        &reach,
        LiftConvention::PaperExact,
        &L,
    )
    .unwrap();
    let solved = solve(&expanded.graph, &exact, &L).unwrap();
    assert_eq!(verify_strategy(&expanded.graph, &exact, &solved), Ok(true));
    assert_eq!(solved.win1.len(), 5);
    let Objective::Muller(family) = &exact else {
        panic!("lifting produces a muller objective")
    };
    let (oracle0, oracle1) = oracle::solve_muller(&expanded.graph, family, 1 << 20).unwrap();
    assert_eq!((oracle0, oracle1), (solved.win0, solved.win1));

    let meets = lift_objective(
        &base.graph,
        &expanded.graph,
        &reach,
        LiftConvention::MeetsR,
        &L,
    )
    .unwrap();
    let solved = solve(&expanded.graph, &meets, &L).unwrap();
    assert_eq!(verify_strategy(&expanded.graph, &meets, &solved), Ok(true));
    assert_eq!(solved.win0.len(), 5);
    let Objective::Muller(family) = &meets else {
        panic!("lifting produces a muller objective")
    };
    let (oracle0, oracle1) = oracle::solve_muller(&expanded.graph, family, 1 << 20).unwrap();
    assert_eq!((oracle0, oracle1), (solved.win0, solved.win1));

    println!("supplement: pass - the two lift conventions hand the expanded example to opposite players");
}

#[test]
fn guards_refuse_oversized_inputs_cleanly() {
    let tight = Limits::with_max_states(1);
    let a = parse_automaton(&fs::read_to_string(fixture_path("inf_many_a.aut")).unwrap()).unwrap();
    match classify(&a, &tight) {
        Err(Error::StateLimitExceeded(2, 1)) => {}
        other => panic!("expected the state guard to trip, got {other:?}"),
    }

    let gm_prime = load_game("gm_prime.game");
    let tight_game = Limits {
        max_vertices: 2,
        ..Limits::DEFAULT
    };
    let muller = gm_prime.objective.clone().unwrap();
    match solve(&gm_prime.graph, &muller, &tight_game) {
        Err(Error::MemoryLimitExceeded(5, 2)) => {}
        other => panic!("expected the vertex guard to trip, got {other:?}"),
    }

    println!("supplement: pass - state and vertex guards reject oversized inputs with typed errors");
}
