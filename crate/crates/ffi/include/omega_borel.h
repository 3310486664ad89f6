#ifndef OMEGA_BOREL_H
#define OMEGA_BOREL_H

/* Generated by cbindgen from the Rust sources; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible entry point.
 */
typedef enum ObStatus {
  OB_STATUS_OK = 0,
  OB_STATUS_NULL_POINTER = 1,
  OB_STATUS_INVALID_UTF8 = 2,
  OB_STATUS_PARSE_ERROR = 3,
  OB_STATUS_LIMIT_EXCEEDED = 4,
  OB_STATUS_INVALID_INPUT = 5,
  OB_STATUS_VERIFICATION_FAILED = 6,
  OB_STATUS_INTERNAL_ERROR = 7,
} ObStatus;

/**
 * A parsed deterministic ω-automaton.
 */
typedef struct ObAutomaton ObAutomaton;

/**
 * A parsed game arena, with its objective if the text declared one.
 */
typedef struct ObGame ObGame;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy of the last error message on this thread, or null if none is set.
 */
char *ob_last_error_message(void);

/**
 * Release a string returned by any function of this library.
 */
void ob_string_free(char *s);

/**
 * Parse automaton text (`alphabet:` / `states:` / `initial:` /
 * `acceptance:` / `trans:` lines) into a fresh handle.
 */
enum ObStatus ob_automaton_parse(const char *text, struct ObAutomaton **out);

void ob_automaton_free(struct ObAutomaton *a);

/**
 * Number of states, or 0 for a null handle.
 */
size_t ob_automaton_states(const struct ObAutomaton *a);

/**
 * Classify the language: label, the four memberships, completeness, and
 * evidence, as a JSON document.
 */
enum ObStatus ob_classify_json(const struct ObAutomaton *a, size_t max_states, char **out);

/**
 * Classify, embed into the bigger alphabet (its letters given as one
 * contiguous string, e.g. `"abc"`), classify again, and report both ends
 * with the predicted bounds, as a JSON document.
 */
enum ObStatus ob_jump_json(const struct ObAutomaton *a,
                           const char *alphabet,
                           size_t max_states,
                           char **out);

/**
 * Does the automaton accept the ultimately periodic word, written in
 * `u(v)^w` notation?
 */
enum ObStatus ob_member(const struct ObAutomaton *a, const char *word, bool *out_accepted);

/**
 * Parse game text (`vertex` / `initial` / `objective` lines, or PGSolver
 * parity format) into a fresh handle.
 */
enum ObStatus ob_game_parse(const char *text, struct ObGame **out);

void ob_game_free(struct ObGame *g);

/**
 * Number of vertices, or 0 for a null handle.
 */
size_t ob_game_vertices(const struct ObGame *g);

/**
 * Solve the game for the objective declared in its text and return the
 * winning regions plus Player 0's strategy as a JSON document. Both
 * players' strategies are re-verified before anything is reported.
 */
enum ObStatus ob_solve_json(const struct ObGame *g, size_t max_vertices, char **out);

/**
 * Predicted upper bounds after a one-letter expansion for the class named
 * by `side` (`sigma` / `pi` / `delta`) and `level` (`1`, `2`, …, `omega`,
 * `omega+1`, `omega1`), as a JSON document.
 */
enum ObStatus ob_predict_json(const char *side, const char *level, char **out);

/**
 * The jump table up to the given finite level (≥ 1), plus the ω, ω+1 and
 * ω₁ columns, as a JSON document.
 */
enum ObStatus ob_table_json(uint32_t max_finite_level, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OMEGA_BOREL_H */
