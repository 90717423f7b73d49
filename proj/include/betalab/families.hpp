#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "betalab/beta_dynamics.hpp"
#include "betalab/field_element.hpp"
#include "betalab/pisot.hpp"

namespace betalab {

enum class FamilyKind { CubicP, QuarticQ, QuinticR };

/**
 * Parameter set for one member of the three polynomial families
 *
 *   P{n}     x^3 - (n+1)x^2 + nx - n          n >= 2
 *   Q{n,b,c} x^4 - nx^3 - bx - c              0 < b <= c, b + c = n, n >= 2
 *   R{n,c}   x^5 - nx^4 + x^3 - nx^2 + cx - c n >= 2, 1 <= |c| < n
 *
 * The factories validate the constraints and throw ConstraintViolationError.
 */
class FamilySpec {
public:
    static FamilySpec p(long n);
    static FamilySpec q(long n, long b, long c);
    static FamilySpec r(long n, long c);

    FamilyKind kind() const { return kind_; }
    long n() const { return n_; }
    /** Second parameter; only QuarticQ has one. */
    long b() const;
    /** Trailing parameter of QuarticQ and QuinticR. */
    long c() const;

    /** Monic coefficients of the defining polynomial, leading term first. */
    std::vector<mpz_class> coefficients() const;

    /** Short label such as "P{5}", "Q{2,1,1}" or "R{3,-1}". */
    std::string name() const;

    bool operator==(const FamilySpec& o) const = default;

private:
    FamilySpec(FamilyKind kind, long n, long b, long c)
        : kind_(kind), n_(n), b_(b), c_(c) {}

    FamilyKind kind_;
    long n_;
    long b_;
    long c_;
};

/**
 * Construct the root object for a family member.  P and Q members are fully
 * Pisot-certified; R members are built at the dominant root even when some
 * conjugate has modulus 1 or more (a large part of the R parameter range is
 * not Pisot; is_pisot() on the result tells which case occurred).
 */
PisotPtr build(const FamilySpec& spec);

/** Integers sharing one exact fractional value, with the common verdict. */
struct FractionalClass {
    std::string value;               // exact rendering of the shared value
    std::vector<mpz_class> members;  // ascending
    bool finite = false;
};

/** One natural number with a non-finite expansion, plus its tail data. */
struct NonFiniteEntry {
    mpz_class value;
    std::vector<long> preperiod;  // fractional digits before the cycle
    std::vector<long> period;     // repeating digit block
};

/** Outcome of scanning N = 1..scanned_to for membership in Fin(beta). */
struct F1Report {
    FamilySpec spec;
    long scanned_to = 0;
    long cap = 0;
    std::vector<NonFiniteEntry> non_finite;  // ascending by value
    bool gaps = false;  // some k not in Fin with k+1 in Fin, k < scanned_to
    std::vector<FractionalClass> classes;  // ordered by smallest member
    std::map<std::string, bool> residue_facts;  // named claim -> holds
};

/**
 * Classify every natural number up to n_max.  Orbit verdicts are shared
 * through a fractional-state memo, so the cost is the size of the union of
 * the orbits rather than their sum.  A scan can only ever report "no
 * counterexample below n_max"; it cannot prove the finiteness condition.
 * Results are cached as content-addressed JSON files under $BETALAB_CACHE_DIR
 * when that variable is set.
 */
F1Report scan_f1(const FamilySpec& spec, long n_max = 10000, long cap = 1000000,
                 int threads = 1);

/** Membership pattern of the numbers around n^2 for one cubic parameter. */
struct ResidueRow {
    long n = 0;
    bool n2_finite = false;
    bool n2_plus_1_finite = false;
    bool n2_plus_2_finite = false;
    bool n2_plus_3_finite = false;
    /** Only evaluated when n = 2 mod 3 and n = 3 mod 4. */
    std::optional<bool> n2_plus_2n_plus_3_finite;
    std::map<std::string, bool> claims;  // named claim -> holds
    bool all_claims_pass = true;
};

/**
 * Residue-class table for the cubic family, n_lo..n_hi.  Each row records
 * the actual memberships of n^2..n^2+3 (and n^2+2n+3 where relevant) and
 * checks them against the predicted pattern: n^2 finite iff n != 0 mod 3;
 * n^2+1 in the same fractional class as n^2; for n = 2 mod 3 both n^2+2 and
 * n^2+3 are finite iff n = 3 mod 4; for n = 0 mod 3 with n = 1,2 mod 4,
 * n^2+2 is finite; and for n = 2 mod 3, n = 3 mod 4 the first non-finite
 * natural is n^2+2n+3.  Claims are only emitted for parameter classes with
 * a predicted verdict.
 */
std::vector<ResidueRow> residue_table(long n_lo, long n_hi, long cap = 1000000);

/** One element of the Akiyama test set with its finiteness verdict. */
struct AkiyamaEntry {
    FieldElement x;
    bool finite = false;
};

/** The set C = { x in Z[beta] : 0 < x < 1, |x'| <= floor(beta)/(1-|beta'|) }. */
struct AkiyamaReport {
    mpq_class radius_lo;  // certified enclosure of the conjugate radius bound
    mpq_class radius_hi;
    std::vector<AkiyamaEntry> elements;  // deterministic enumeration order
    std::size_t finite_count = 0;
    std::size_t nonfinite_count = 0;
    bool f_holds = false;  // every element finite
};

/**
 * Enumerate C for a cubic Pisot parent with a complex conjugate pair and
 * classify every element.  The enumeration box comes from certified rational
 * enclosures of the embeddings, padded by 1e-6; membership itself is decided
 * exactly (sign tests in the field, with the conjugate modulus comparison
 * reduced to a field-norm inequality).  Throws WrongDegreeError for degrees
 * other than 3 and ComplexEmbeddingUncertifiedError when the conjugates are
 * real or the parent is not certified Pisot.
 */
AkiyamaReport akiyama_set(const PisotPtr& parent, long cap = 1000000);

enum class SuffVerdict { SufficientF1Holds, Inconclusive };

const char* suff_verdict_name(SuffVerdict v);

/** Outcome of the alpha-power sufficient condition. */
struct SuffReport {
    SuffVerdict verdict = SuffVerdict::Inconclusive;
    /** Expansions of alpha^i for i = 2..degree-1, in that order. */
    std::vector<OrbitClassification> alpha_powers;
    long scanned_to = 0;
    /** First natural with a non-finite expansion found by the scan, if any. */
    std::optional<mpz_class> scan_counterexample;
};

/**
 * Sufficient-condition check: with the expansion of 1 finite, finiteness of
 * alpha^2, ..., alpha^(d-1) implies every natural number expands finitely.
 * The verdict is cross-validated against a scan of 1..scan_to; a scan can
 * refute but never establish the condition, so the negative verdict is
 * merely Inconclusive.  Throws InfiniteExpansionOfOneError when the
 * expansion of 1 is not finite.
 */
SuffReport check_suff(const PisotPtr& parent, long scan_to = 10000, long cap = 1000000);

/** Verdicts for the quartic-family word identities. */
struct QFamilyReport {
    FamilySpec spec;
    DigitWord one_word;       // expansion of 1
    bool one_matches = false;  // equals n 0 b c
    OrbitClassification one_minus_alpha;
    bool n_plus_1_nonfinite = false;
    bool r_words_match = false;  // [r1] = c, [r2] = bc, [r3] = 0bc
    /** A closed-form tail for 1 - alpha is available for these parameters. */
    bool display_applies = false;
    bool one_minus_alpha_matches = false;
    /** n >= 2b+1 and 0 <= 2b+1-c: the asserted range of the 1-2alpha word. */
    bool finite_claim_applies = false;
    /** The 10-letter word for 1-2alpha has the claimed value (an identity). */
    bool display_value_identity = false;
    /** The word is admissible, i.e. is the actual expansion (needs c = b+1). */
    bool one_minus_two_alpha_matches = false;
    bool two_n_plus_1_finite = false;
    std::optional<OrbitClassification> one_minus_two_alpha;
    bool ok = false;  // every applicable claim verified
};

QFamilyReport q_family_checks(long n, long b, long c, long cap = 1000000);

/** Verdicts for the quintic-family expansion of n. */
struct RFamilyReport {
    FamilySpec spec;
    bool is_pisot = false;
    bool word_checks_skipped = false;  // negative c: displays assume c >= 1
    std::optional<OrbitClassification> n_expansion;
    bool n_nonfinite = false;
    std::vector<long> expected_period;  // (n-1)(n-c)(c-1)
    bool period_matches = false;        // up to cyclic rotation
    bool prefix_matches = false;        // 1 0 . 0 0 (c-1)(n-c-1)(n-c)(c-1) ...
    bool ok = false;
};

RFamilyReport r_family_checks(long n, long c, long cap = 1000000);

// --- report serialization ---------------------------------------------------

std::string to_json_string(const F1Report& r, int indent = 2);
std::string to_csv(const F1Report& r);
std::string to_json_string(const std::vector<ResidueRow>& rows, int indent = 2);
std::string to_csv(const std::vector<ResidueRow>& rows);
std::string to_json_string(const AkiyamaReport& r, int indent = 2);
std::string to_json_string(const SuffReport& r, int indent = 2);
std::string to_json_string(const QFamilyReport& r, int indent = 2);
std::string to_json_string(const RFamilyReport& r, int indent = 2);

}  // namespace betalab
