#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "betalab/beta_dynamics.hpp"
#include "betalab/field_element.hpp"

namespace betalab {

/**
 * A weakly canonical sequence: finitely many integer digits, possibly
 * negative or exceeding the alphabet, read at decreasing powers of beta.
 * Digit t (1-based) has weight beta^(offset - t); offset 0 puts every digit
 * right of the radix point.
 */
struct WeakWord {
    PisotPtr parent;
    long offset = 0;
    std::vector<long> digits;
};

FieldElement value(const WeakWord& w);

/** Digits within {0,...,floor(beta)} and every tail below the Parry bound. */
bool is_canonical(const WeakWord& w);

/** Digitwise sum of v into u starting at u's position j (1-based). */
WeakWord positional_sum(const WeakWord& u, long j, const WeakWord& v);

/**
 * The two zero-valued words: z1 read off the minimal polynomial and z2 from
 * the expansion of 1 (finite d(1) required).  Adding integer multiples of
 * either at any position preserves a word's value.
 */
struct ZeroWords {
    WeakWord z1, z2;
};
ZeroWords zero_words(const PisotPtr& parent);

/** One positional summation applied during a rewrite. */
struct TraceStep {
    std::string rule;           // "z1" or "z2"
    long position = 0;          // 1-based within the working word
    long multiplier = 0;
    std::vector<long> result;   // digits after the step
};

/** Extract n from a cubic family parent x^3-(n+1)x^2+nx-n. */
long cubic_family_n(const PisotPtr& parent);

// Parametric word families over the cubic parents.
WeakWord word_u(const PisotPtr& parent, long k, long j);    // (n-k) j (-kn) (jn)
WeakWord word_w(const PisotPtr& parent, long k, long j);    // 0 [n(k-j+1)-j] 0 (-jn)
WeakWord word_ww(const PisotPtr& parent, long k, long j);   // k j (kn-n^2) (jn)
WeakWord word_nu(const PisotPtr& parent, long k, long j);   // (n-k) j (-kn-n^2) (jn)
WeakWord omega_word(const PisotPtr& parent, long l, long k, long j);
/** Exact value l - k*alpha + j*alpha/beta + alpha^2 - alpha. */
FieldElement omega_value(const PisotPtr& parent, long l, long k, long j);

/**
 * One unfolding step: prefix . suffix has the same value as the input word
 * and strictly greater length.  The trace replays the proof's positional
 * summations of zero words.
 */
struct Unfolding {
    WeakWord prefix;
    WeakWord suffix;
    std::vector<TraceStep> trace;
};

Unfolding unfold_u(const PisotPtr& parent, long k, long j);
Unfolding unfold_w(const PisotPtr& parent, long k, long j);
Unfolding unfold_ww(const PisotPtr& parent, long k, long j);
/** k = 0 member of the nu family advances j by 4. */
Unfolding unfold_nu0(const PisotPtr& parent, long j);

/** Odd-k chain end: u_n(k,k) collapses to the 5-letter (n-k)0k0(kn). */
std::pair<WeakWord, std::vector<TraceStep>> terminal_u(const PisotPtr& parent, long k);
/**
 * Even-k chain end: w_n(k,k) expands into the fixed 10-letter word
 * (n-k-1)(n-k)1(k+1)(k-1)(n-2) . u_n(k,2), carried at offset -1 (one slot
 * deeper than the input, i.e. with an elided leading zero) so the value is
 * exactly preserved; this is checked on every call.
 */
WeakWord terminal_w(const PisotPtr& parent, long k);

/**
 * Word-level greedy normalization: rewrite w into its canonical expansion by
 * summing multiples of z2 (digit fixing) and z1 (zero-tail cleanup), with
 * exact cycle detection on the remaining value.  The digits produced agree
 * with beta_dynamics::expand of value(w).
 */
struct NormalizeOutcome {
    OrbitKind kind;
    DigitWord word;
    std::vector<TraceStep> trace;
    long steps = 0;
};
NormalizeOutcome normalize(const WeakWord& w, long cap = 100000);

/** Period of the canonical expansion of value(w), if there is one. */
std::optional<std::vector<long>> detect_periodic_suffix(const WeakWord& w, long cap = 100000);

/**
 * Fractional-part step N -> N+1 when adding 1 digitwise to the integer part
 * creates a forbidden word.  `int_part` is the canonical integer word of N,
 * `w` a representation of its fractional part.  Returns the case label
 * "a".."e" plus the rewritten fractional word; throws NoForbiddenWordError
 * when the digitwise increment is already admissible.
 */
struct SuccessorStep {
    std::string case_label;
    WeakWord fractional;
};
SuccessorStep successor_fractional(const PisotPtr& parent, const std::vector<long>& int_part,
                                   const WeakWord& w);

/**
 * The cycle word w_n(k,j) whose infinite repetition equals the value
 * 1 - k*alpha + (k+j-1)*alpha/beta; defined for odd k, j > 0 with k < n-1 and
 * k+j-1 < n.  Length is always 5 mod 6.
 */
WeakWord periodic_word_wkj(const PisotPtr& parent, long k, long j);

}  // namespace betalab
