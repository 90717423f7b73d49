#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "betalab/field_element.hpp"

namespace betalab {

/**
 * A digit word over the alphabet of a beta-expansion.
 *
 * int_part holds the digits left of the radix point, most significant first.
 * frac_preperiod and frac_period hold the fractional digits; an empty period
 * means the word is finite.  Words produced by expand() for x <= 1 have an
 * empty int_part (the digits all sit right of the point), except x = 0 whose
 * word is the single digit 0.
 */
struct DigitWord {
    std::vector<long> int_part;
    std::vector<long> frac_preperiod;
    std::vector<long> frac_period;
    std::optional<long> alphabet_bound;

    bool operator==(const DigitWord& o) const {
        return int_part == o.int_part && frac_preperiod == o.frac_preperiod &&
               frac_period == o.frac_period;
    }
    bool operator!=(const DigitWord& o) const { return !(*this == o); }
};

/**
 * Render a word as text.  Digits are concatenated without separators unless
 * some digit is negative or exceeds 9, in which case they are comma
 * separated.  A periodic tail is written (d1d2...)^w.  Examples: "2102",
 * "10.0(10)^w", "21,0,2".
 */
std::string render(const DigitWord& w);

enum class OrbitKind { Finite, EventuallyPeriodic, Truncated };

const char* orbit_kind_name(OrbitKind k);

struct OrbitClassification {
    OrbitKind kind;
    DigitWord word;
    long steps = 0;  // number of map applications performed
};

/** One application of T(x) = beta*x - floor(beta*x); requires 0 <= x < 1. */
std::pair<long, FieldElement> t_beta_step(const FieldElement& x);

/**
 * Greedy beta-expansion of x >= 0.  The input is scaled by beta^-L for the
 * least L >= 0 with x <= beta^L, so the first digit is nonzero; if the scaled
 * value lands exactly on 1 the first digit is floor(beta) and the orbit
 * continues from beta - floor(beta).  Orbit states are hashed exactly, so the
 * reported preperiod is minimal and the period primitive.  After `cap` steps
 * the expansion is reported Truncated.
 */
OrbitClassification expand(const FieldElement& x, long cap = 1000000);

/** Digits of the expansion of 1 (finite exactly when beta is simple Parry). */
DigitWord expansion_of_one(const PisotPtr& parent, long cap = 1000000);

/**
 * Parry admissibility: every suffix of the digit stream, cyclically through
 * the period, must be lexicographically smaller than the quasi-greedy
 * expansion of 1.
 */
bool is_admissible(const DigitWord& w, const PisotPtr& parent);

/**
 * Which of the classical sufficient conditions the (finite) expansion of 1
 * satisfies: subset of {"Perron", "Brauer", "Hollander", "CE"} where CE marks
 * the counterexample shape (non-monotonic digits with an interior zero).
 * Throws InfiniteExpansionOfOneError when the expansion of 1 is not finite.
 */
std::set<std::string> classify_one_expansion(const PisotPtr& parent);

/** Does x >= 0 have a finite expansion?  Returns the full classification too. */
std::pair<bool, OrbitClassification> is_fin(const FieldElement& x, long cap = 1000000);

/**
 * Exact value of a word: sum of d_i beta^(position).  Periodic tails are
 * summed as a geometric series, so the parent polynomial must be irreducible
 * (field inversion).  Truncated words reconstruct their emitted prefix only.
 */
FieldElement word_value(const PisotPtr& parent, const DigitWord& w);

}  // namespace betalab
