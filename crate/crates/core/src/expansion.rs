//! Alphabet expansion: embedding a language into a bigger symbol space, the
//! symbolic jump predictor over hierarchy levels, and the before/after
//! consistency report.
//!
//! Expanding the alphabet moves a language's position in the hierarchy in a
//! parity-dependent way: Σ classes jump one level up at odd finite levels
//! and stay put at even ones, Π classes the other way around, and everything
//! from ω upward is stable. The predictor states these as upper bounds; the
//! report checks the exactly classified embedded language against them.

use std::collections::BTreeSet;
use std::fmt;

use crate::automata::{equivalent, to_muller_normal_form, Acceptance, DetAutomaton};
use crate::classify::{classify, ClassLabel, Classification};
use crate::words::Alphabet;
use crate::{Error, Limits};

/// A hierarchy level: finite, ω + k, or the symbolic top ω₁.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Finite(u32),
    OmegaPlus(u32),
    Omega1,
}

impl Level {
    pub const OMEGA: Level = Level::OmegaPlus(0);

    /// Parse `3`, `omega`, `omega+2`, or `omega1` (case-insensitive).
    pub fn parse(text: &str) -> Result<Level, Error> {
        let lower = text.trim().to_ascii_lowercase();
        if let Ok(n) = lower.parse::<u32>() {
            if n == 0 {
                return Err(Error::Invalid("levels start at 1".into()));
            }
            return Ok(Level::Finite(n));
        }
        if lower == "omega" {
            return Ok(Level::OMEGA);
        }
        if lower == "omega1" {
            return Ok(Level::Omega1);
        }
        if let Some(rest) = lower.strip_prefix("omega+") {
            if let Ok(k) = rest.parse::<u32>() {
                return Ok(Level::OmegaPlus(k));
            }
        }
        Err(Error::Invalid(format!(
            "cannot read level '{text}' (try 3, omega, omega+2, or omega1)"
        )))
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(n) => write!(f, "{n}"),
            Level::OmegaPlus(0) => f.write_str("Omega"),
            Level::OmegaPlus(k) => write!(f, "OmegaPlus{k}"),
            Level::Omega1 => f.write_str("Omega1"),
        }
    }
}

/// Which pillar of the hierarchy a class sits in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Sigma,
    Pi,
    Delta,
}

impl Side {
    pub fn parse(text: &str) -> Result<Side, Error> {
        match text.trim().to_ascii_lowercase().as_str() {
            "sigma" => Ok(Side::Sigma),
            "pi" => Ok(Side::Pi),
            "delta" => Ok(Side::Delta),
            other => Err(Error::Invalid(format!(
                "cannot read side '{other}' (expected Sigma, Pi, or Delta)"
            ))),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Sigma => "Sigma",
            Side::Pi => "Pi",
            Side::Delta => "Delta",
        })
    }
}

/// A named class of the hierarchy, e.g. Σ₂ or Π_{ω+1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassRef {
    pub side: Side,
    pub level: Level,
}

impl ClassRef {
    pub fn new(side: Side, level: Level) -> ClassRef {
        ClassRef { side, level }
    }

    pub fn sigma(n: u32) -> ClassRef {
        ClassRef::new(Side::Sigma, Level::Finite(n))
    }

    pub fn pi(n: u32) -> ClassRef {
        ClassRef::new(Side::Pi, Level::Finite(n))
    }

    pub fn delta(n: u32) -> ClassRef {
        ClassRef::new(Side::Delta, Level::Finite(n))
    }
}

impl Ord for ClassRef {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.level, self.side).cmp(&(other.level, other.side))
    }
}

impl PartialOrd for ClassRef {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ClassRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.side, self.level)
    }
}

/// Embed the language into the space over `bigger`: the result accepts
/// exactly the words of `a`'s language, and rejects every word that uses a
/// new letter.
///
/// The automaton is the Muller normal form of `a` plus one absorbing sink;
/// all new letters lead there, and the accepting family is unchanged, so the
/// sink is rejecting. The sink is added even when no letter is new, which
/// merely leaves it unreachable.
pub fn embed(
    a: &DetAutomaton,
    bigger: &Alphabet,
    limits: &Limits,
) -> Result<DetAutomaton, Error> {
    if !bigger.extends(a.alphabet()) {
        return Err(Error::NotAnExtension(
            bigger.to_string(),
            a.alphabet().to_string(),
        ));
    }
    let nf = to_muller_normal_form(a, limits)?;
    let b = nf.automaton();
    let sink = b.states();

    let mut delta = Vec::with_capacity(sink + 1);
    for q in 0..sink {
        let row = bigger
            .symbols()
            .iter()
            .map(|&symbol| match a.alphabet().index_of(symbol) {
                Ok(s) => b.step_index(q, s),
                Err(_) => sink,
            })
            .collect();
        delta.push(row);
    }
    delta.push(vec![sink; bigger.len()]);

    DetAutomaton::new(
        bigger.clone(),
        delta,
        b.initial(),
        Acceptance::Muller(nf.family().clone()),
    )
}

/// The upper bounds the expansion places on a language of the given class.
///
/// Δ classes satisfy both of their sides' rules, so they collect both
/// bounds; Σ/Π produce exactly one.
pub fn predict_jump(class: ClassRef) -> BTreeSet<ClassRef> {
    match class.side {
        Side::Delta => {
            let mut set = predict_jump(ClassRef::new(Side::Sigma, class.level));
            set.extend(predict_jump(ClassRef::new(Side::Pi, class.level)));
            set
        }
        side => [ClassRef::new(side, jump_level(side, class.level))].into(),
    }
}

fn jump_level(side: Side, level: Level) -> Level {
    match (side, level) {
        (Side::Sigma, Level::Finite(n)) if n % 2 == 1 => Level::Finite(n + 1),
        (Side::Pi, Level::Finite(n)) if n % 2 == 0 => Level::Finite(n + 1),
        _ => level,
    }
}

/// Minimal finite levels (σ, π) such that a language with this exact label
/// is in Σ_σ and Π_π.
fn minimal_levels(label: ClassLabel) -> (u32, u32) {
    match label {
        ClassLabel::Clopen => (1, 1),
        ClassLabel::OpenProper => (1, 2),
        ClassLabel::ClosedProper => (2, 1),
        ClassLabel::Delta2Proper => (2, 2),
        ClassLabel::Sigma2Proper => (2, 3),
        ClassLabel::Pi2Proper => (3, 2),
        ClassLabel::Delta3Proper => (3, 3),
    }
}

/// Does every language with exact label `label` belong to `class`?
pub fn class_leq(label: ClassLabel, class: &ClassRef) -> bool {
    let (sigma_min, pi_min) = minimal_levels(label);
    match class.level {
        Level::Finite(n) => match class.side {
            Side::Sigma => n >= sigma_min,
            Side::Pi => n >= pi_min,
            Side::Delta => n >= sigma_min.max(pi_min),
        },
        // Everything ω-regular sits far below the ω levels.
        Level::OmegaPlus(_) | Level::Omega1 => true,
    }
}

/// The exact class named by a label.
pub fn label_class(label: ClassLabel) -> ClassRef {
    match label {
        ClassLabel::Clopen => ClassRef::delta(1),
        ClassLabel::OpenProper => ClassRef::sigma(1),
        ClassLabel::ClosedProper => ClassRef::pi(1),
        ClassLabel::Delta2Proper => ClassRef::delta(2),
        ClassLabel::Sigma2Proper => ClassRef::sigma(2),
        ClassLabel::Pi2Proper => ClassRef::pi(2),
        ClassLabel::Delta3Proper => ClassRef::delta(3),
    }
}

/// Full before/after record for one expansion.
#[derive(Debug, Clone)]
pub struct JumpReport {
    pub before: Classification,
    pub after: Classification,
    pub predicted: BTreeSet<ClassRef>,
    /// Whether `after` satisfies every predicted bound.
    pub consistent: bool,
    /// Note comparing the computed label with the completeness claim
    /// recorded for the registered fixture; `None` for other inputs.
    pub paper_claim_note: Option<String>,
    /// Set precisely when the note is present: does the computed label
    /// differ from the recorded claim's SIGMA2_PROPER?
    pub disagreement: Option<bool>,
}

/// The claim recorded for the registered fixture's expansion.
pub const RECORDED_CLAIM: &str = "complete for $\\Sigma_2^0$ in $B^\\omega$";

/// The two-letter fixture whose expansion behavior is recorded against a
/// published completeness claim: the open set of words starting `ab`.
pub fn registered_fixture() -> DetAutomaton {
    DetAutomaton::new(
        Alphabet::new("ab".chars()).expect("fixed alphabet"),
        vec![vec![1, 3], vec![3, 2], vec![2, 2], vec![3, 3]],
        0,
        Acceptance::Reach([2].into()),
    )
    .expect("fixed fixture")
}

/// Is `a` language-equal to the registered fixture (over its alphabet)?
fn is_registered_fixture(a: &DetAutomaton, limits: &Limits) -> Result<bool, Error> {
    let fixture = registered_fixture();
    if a.alphabet() != fixture.alphabet() {
        return Ok(false);
    }
    let allowance = Limits {
        max_states: limits.max_states.max(16 * a.states().max(1)),
        ..*limits
    };
    equivalent(a, &fixture, &allowance)
}

/// Classify `a`, embed it into `bigger`, classify the embedding, and check
/// the result against the predicted upper bounds.
pub fn jump_report(
    a: &DetAutomaton,
    bigger: &Alphabet,
    limits: &Limits,
) -> Result<JumpReport, Error> {
    let before = classify(a, limits)?;
    let embedded = embed(a, bigger, limits)?;
    let allowance = Limits {
        max_states: limits.max_states.max(embedded.states()),
        ..*limits
    };
    let after = classify(&embedded, &allowance)?;

    let predicted = predict_jump(label_class(before.label));
    let consistent = predicted.iter().all(|c| class_leq(after.label, c));

    let (paper_claim_note, disagreement) = if is_registered_fixture(a, limits)? {
        let disagrees = after.label != ClassLabel::Sigma2Proper;
        let note = format!(
            "recorded claim for this fixture's expansion: \"{RECORDED_CLAIM}\"; \
             computed label: {}; disagreement: {}",
            after.label,
            if disagrees { "yes" } else { "no" },
        );
        (Some(note), Some(disagrees))
    } else {
        (None, None)
    };

    Ok(JumpReport {
        before,
        after,
        predicted,
        consistent,
        paper_claim_note,
        disagreement,
    })
}

/// One class of the rendered hierarchy table with its jump annotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchyCell {
    pub class: ClassRef,
    pub target: ClassRef,
}

/// The jump table over Σ/Π rows: finite levels up to a chosen maximum, then
/// the ω, ω+1, and ω₁ columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchyTable {
    pub cells: Vec<HierarchyCell>,
}

impl HierarchyTable {
    fn contains(&self, class: &ClassRef) -> bool {
        self.cells.iter().any(|cell| cell.class == *class)
    }

    /// Arrows between two displayed classes (the annotation of a cell whose
    /// target is a different, displayed class).
    pub fn forward_arrows(&self) -> Vec<(ClassRef, ClassRef)> {
        self.cells
            .iter()
            .filter(|cell| cell.target != cell.class && self.contains(&cell.target))
            .map(|cell| (cell.class, cell.target))
            .collect()
    }

    /// Classes whose jump annotation points back at themselves.
    pub fn self_loops(&self) -> Vec<ClassRef> {
        self.cells
            .iter()
            .filter(|cell| cell.target == cell.class)
            .map(|cell| cell.class)
            .collect()
    }
}

/// Build the jump table up to `max_finite_level` (≥ 1).
pub fn hierarchy_table(max_finite_level: u32) -> Result<HierarchyTable, Error> {
    if max_finite_level == 0 {
        return Err(Error::Invalid("the table needs at least level 1".into()));
    }
    let mut levels: Vec<Level> = (1..=max_finite_level).map(Level::Finite).collect();
    levels.extend([Level::OmegaPlus(0), Level::OmegaPlus(1), Level::Omega1]);

    let mut cells = Vec::new();
    for level in levels {
        for side in [Side::Sigma, Side::Pi] {
            let class = ClassRef::new(side, level);
            let target = *predict_jump(class)
                .iter()
                .next()
                .expect("Sigma/Pi predictions are singletons");
            cells.push(HierarchyCell { class, target });
        }
    }
    Ok(HierarchyTable { cells })
}
