//! C ABI over the classification and game-solving library.
//!
//! Conventions, mirrored in the generated `include/omega_borel.h`:
//!
//! * Handles (`ObAutomaton`, `ObGame`) are opaque; create them with the
//!   `_parse` functions and release them with the matching `_free`.
//! * Every fallible call returns an [`ObStatus`]; on anything other than
//!   `OK` the thread-local error message is set and can be copied out with
//!   [`ob_last_error_message`].
//! * Strings returned through `char **` out-parameters (and the error
//!   message) are owned by the caller and must be released with
//!   [`ob_string_free`].
//! * A `0` for the `max_states` / `max_vertices` guard arguments selects
//!   the default limits (20 states, 8 game vertices).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use omega_borel::automata::{parse_automaton, DetAutomaton};
use omega_borel::classify::classify;
use omega_borel::expansion::{hierarchy_table, jump_report, predict_jump, ClassRef, Level, Side};
use omega_borel::games::{parse_game, solve, verify_strategy, GameFile};
use omega_borel::report;
use omega_borel::words::{Alphabet, UpWord};
use omega_borel::{Error, Limits};

/// Result of every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    LimitExceeded = 4,
    InvalidInput = 5,
    VerificationFailed = 6,
    InternalError = 7,
}

/// A parsed deterministic ω-automaton.
pub struct ObAutomaton(DetAutomaton);

/// A parsed game arena, with its objective if the text declared one.
pub struct ObGame(GameFile);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn remember(message: String) {
    let sanitized = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(sanitized));
}

fn fail(e: Error) -> ObStatus {
    let status = match e {
        Error::Parse { .. } => ObStatus::ParseError,
        Error::StateLimitExceeded(..) | Error::MemoryLimitExceeded(..) => ObStatus::LimitExceeded,
        _ => ObStatus::InvalidInput,
    };
    remember(e.to_string());
    status
}

fn null_argument(name: &str) -> ObStatus {
    remember(format!("{name} must not be null"));
    ObStatus::NullPointer
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, ObStatus> {
    if p.is_null() {
        return Err(null_argument(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        remember(format!("{name} is not valid UTF-8"));
        ObStatus::InvalidUtf8
    })
}

unsafe fn give_string(out: *mut *mut c_char, s: String) -> ObStatus {
    if out.is_null() {
        return null_argument("out");
    }
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            ObStatus::Ok
        }
        Err(_) => {
            remember("produced text contained a NUL byte".to_string());
            ObStatus::InternalError
        }
    }
}

fn entry(body: impl FnOnce() -> ObStatus) -> ObStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            remember("internal panic".to_string());
            ObStatus::InternalError
        }
    }
}

fn state_limits(max_states: usize) -> Limits {
    if max_states == 0 {
        Limits::DEFAULT
    } else {
        Limits::with_max_states(max_states)
    }
}

fn vertex_limits(max_vertices: usize) -> Limits {
    if max_vertices == 0 {
        Limits::DEFAULT
    } else {
        Limits {
            max_vertices,
            ..Limits::DEFAULT
        }
    }
}

/// Copy of the last error message on this thread, or null if none is set.
#[no_mangle]
pub extern "C" fn ob_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null_mut(), |m| m.clone().into_raw())
    })
}

/// Release a string returned by any function of this library.
#[no_mangle]
pub unsafe extern "C" fn ob_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse automaton text (`alphabet:` / `states:` / `initial:` /
/// `acceptance:` / `trans:` lines) into a fresh handle.
#[no_mangle]
pub unsafe extern "C" fn ob_automaton_parse(
    text: *const c_char,
    out: *mut *mut ObAutomaton,
) -> ObStatus {
    entry(|| {
        if out.is_null() {
            return null_argument("out");
        }
        let text = match read_str(text, "text") {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_automaton(text) {
            Ok(a) => {
                *out = Box::into_raw(Box::new(ObAutomaton(a)));
                ObStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn ob_automaton_free(a: *mut ObAutomaton) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Number of states, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ob_automaton_states(a: *const ObAutomaton) -> usize {
    a.as_ref().map_or(0, |a| a.0.states())
}

/// Classify the language: label, the four memberships, completeness, and
/// evidence, as a JSON document.
#[no_mangle]
pub unsafe extern "C" fn ob_classify_json(
    a: *const ObAutomaton,
    max_states: usize,
    out: *mut *mut c_char,
) -> ObStatus {
    entry(|| {
        let Some(a) = a.as_ref() else {
            return null_argument("automaton");
        };
        match classify(&a.0, &state_limits(max_states)) {
            Ok(c) => give_string(out, report::classification_json(&c).to_string()),
            Err(e) => fail(e),
        }
    })
}

/// Classify, embed into the bigger alphabet (its letters given as one
/// contiguous string, e.g. `"abc"`), classify again, and report both ends
/// with the predicted bounds, as a JSON document.
#[no_mangle]
pub unsafe extern "C" fn ob_jump_json(
    a: *const ObAutomaton,
    alphabet: *const c_char,
    max_states: usize,
    out: *mut *mut c_char,
) -> ObStatus {
    entry(|| {
        let Some(a) = a.as_ref() else {
            return null_argument("automaton");
        };
        let letters = match read_str(alphabet, "alphabet") {
            Ok(t) => t,
            Err(status) => return status,
        };
        let bigger = match Alphabet::new(letters.chars()) {
            Ok(b) => b,
            Err(e) => return fail(e),
        };
        match jump_report(&a.0, &bigger, &state_limits(max_states)) {
            Ok(r) => give_string(out, report::jump_json(&r).to_string()),
            Err(e) => fail(e),
        }
    })
}

/// Does the automaton accept the ultimately periodic word, written in
/// `u(v)^w` notation?
#[no_mangle]
pub unsafe extern "C" fn ob_member(
    a: *const ObAutomaton,
    word: *const c_char,
    out_accepted: *mut bool,
) -> ObStatus {
    entry(|| {
        let Some(a) = a.as_ref() else {
            return null_argument("automaton");
        };
        if out_accepted.is_null() {
            return null_argument("out_accepted");
        }
        let literal = match read_str(word, "word") {
            Ok(t) => t,
            Err(status) => return status,
        };
        let parsed = match UpWord::parse(literal) {
            Ok(w) => w,
            Err(e) => return fail(e),
        };
        match a.0.accepts(&parsed) {
            Ok(accepted) => {
                *out_accepted = accepted;
                ObStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Parse game text (`vertex` / `initial` / `objective` lines, or PGSolver
/// parity format) into a fresh handle.
#[no_mangle]
pub unsafe extern "C" fn ob_game_parse(text: *const c_char, out: *mut *mut ObGame) -> ObStatus {
    entry(|| {
        if out.is_null() {
            return null_argument("out");
        }
        let text = match read_str(text, "text") {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_game(text) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(ObGame(g)));
                ObStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn ob_game_free(g: *mut ObGame) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ob_game_vertices(g: *const ObGame) -> usize {
    g.as_ref().map_or(0, |g| g.0.graph.vertices())
}

/// Solve the game for the objective declared in its text and return the
/// winning regions plus Player 0's strategy as a JSON document. Both
/// players' strategies are re-verified before anything is reported.
#[no_mangle]
pub unsafe extern "C" fn ob_solve_json(
    g: *const ObGame,
    max_vertices: usize,
    out: *mut *mut c_char,
) -> ObStatus {
    entry(|| {
        let Some(g) = g.as_ref() else {
            return null_argument("game");
        };
        let Some(objective) = g.0.objective.clone() else {
            return fail(Error::Invalid("the game text has no objective line".into()));
        };
        let limits = vertex_limits(max_vertices);
        let result = match solve(&g.0.graph, &objective, &limits) {
            Ok(r) => r,
            Err(e) => return fail(e),
        };
        match verify_strategy(&g.0.graph, &objective, &result) {
            Ok(true) => give_string(out, report::solve_json(&result, None).to_string()),
            Ok(false) => {
                remember("solver returned strategies that fail verification".to_string());
                ObStatus::VerificationFailed
            }
            Err(e) => fail(e),
        }
    })
}

/// Predicted upper bounds after a one-letter expansion for the class named
/// by `side` (`sigma` / `pi` / `delta`) and `level` (`1`, `2`, …, `omega`,
/// `omega+1`, `omega1`), as a JSON document.
#[no_mangle]
pub unsafe extern "C" fn ob_predict_json(
    side: *const c_char,
    level: *const c_char,
    out: *mut *mut c_char,
) -> ObStatus {
    entry(|| {
        let side = match read_str(side, "side") {
            Ok(t) => t,
            Err(status) => return status,
        };
        let level = match read_str(level, "level") {
            Ok(t) => t,
            Err(status) => return status,
        };
        let side = match Side::parse(side) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        let level = match Level::parse(level) {
            Ok(l) => l,
            Err(e) => return fail(e),
        };
        let class = ClassRef::new(side, level);
        let predicted = predict_jump(class);
        give_string(out, report::predict_json(&class, &predicted).to_string())
    })
}

/// The jump table up to the given finite level (≥ 1), plus the ω, ω+1 and
/// ω₁ columns, as a JSON document.
#[no_mangle]
pub unsafe extern "C" fn ob_table_json(max_finite_level: u32, out: *mut *mut c_char) -> ObStatus {
    entry(|| match hierarchy_table(max_finite_level) {
        Ok(t) => give_string(out, report::table_json(&t).to_string()),
        Err(e) => fail(e),
    })
}
