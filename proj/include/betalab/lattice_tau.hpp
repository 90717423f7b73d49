#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "betalab/beta_dynamics.hpp"
#include "betalab/field_element.hpp"
#include "betalab/pisot.hpp"

namespace betalab {

/** Point of the integer lattice Z^3 acted on by the conjugate map. */
struct LatticePoint {
    long l = 0;
    long k = 0;
    long j = 0;
    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
    friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

enum class InjectivityClass { OneToOne, TwoToOneLow, TwoToOneHigh };

struct InjectivityReport {
    InjectivityClass cls;
    /** Second preimage of the image point, present in the 2-to-1 cases. */
    std::optional<LatticePoint> sibling;
};

/** Orbit of a point under the lattice map, with the digits it emits. */
struct TauOrbit {
    std::vector<LatticePoint> points;  // visited states; last is the origin when Finite
    std::vector<long> digits;          // one emitted letter per transition
    OrbitKind kind = OrbitKind::Truncated;
    long preperiod = 0;  // meaningful for EventuallyPeriodic
    long period = 0;     // meaningful for EventuallyPeriodic
};

struct BoundsReport {
    bool lemma_holds = false;      // rational two-sided bound on l
    bool corollary_holds = false;  // m >= 2 implies m > |l|
    bool table_holds = false;      // small-m classification rows that apply
    bool ok() const { return lemma_holds && corollary_holds && table_holds; }
};

struct FiveStepReport {
    bool pass = false;
    std::array<long, 6> k_values{};    // k_0 .. k_5
    std::vector<LatticePoint> trail;   // p_0 .. p_5
};

struct TauCycle {
    std::vector<LatticePoint> points;  // rotated so the smallest point comes first
    std::vector<long> digits;          // letters along the cycle, same rotation
};

struct CensusRow {
    LatticePoint start;
    OrbitKind kind = OrbitKind::Truncated;
    long preperiod = 0;
    long period = 0;
    long cycle_id = -1;    // index into BallCensus::cycles, -1 for finite orbits
    long max_norm = 0;     // max over the orbit of max(|k|,|j|)
    long first_hit_bn = 0; // steps until the orbit enters B_n
};

struct BallCensus {
    long n = 0;
    long radius = 0;
    std::vector<CensusRow> rows;
    std::vector<TauCycle> cycles;
    bool cycles_within_bn = false;  // every cycle point has max(|k|,|j|) <= n
    long max_excursion = 0;         // largest max_norm among starts inside B_n
};

/**
 * Exact calculator for the lattice conjugate of the beta-map on the cubic
 * family.  Wraps the functional f(l,k,j) = l - k*alpha + j*alpha/beta, the
 * integer matrix G (companion of the minimal polynomial) and its adjoint H,
 * and the piecewise map tau(l,k,j) = (l',k',j') with k' = k-j-l, j' = k and
 * l' chosen so the image stays in U = { p : f(p) in [0,1) }.
 */
class TauContext {
  public:
    explicit TauContext(PisotPtr parent);

    const PisotPtr& parent() const { return parent_; }
    long n() const { return n_; }

    FieldElement f(const LatticePoint& p) const;
    bool in_u(const LatticePoint& p) const;
    bool in_u_star(const LatticePoint& p) const;

    /** The unique point of U above the column (k,j). */
    LatticePoint canonical_point(long k, long j) const;

    LatticePoint apply_g(const LatticePoint& p) const;
    LatticePoint apply_h(const LatticePoint& p) const;
    /** Characteristic polynomial of G, monic, highest degree first. */
    std::array<long, 4> g_char_poly() const;
    /** Checks f G = beta f and f H = (n/beta) f on the basis vectors. */
    bool eigen_identities() const;

    /** Letter emitted when stepping from p: floor(f(G p)) = floor(beta f(p)). */
    long digit_at(const LatticePoint& p) const;
    /** One step of the lattice map; throws NotInUError off U. */
    LatticePoint tau(const LatticePoint& p) const;

    /** Parametrization of fractional classes: pi(l,k,j) = f(l+1, k+n, j-1). */
    FieldElement pi(const LatticePoint& p) const;

    /**
     * The unique predecessor of p in U together with the letter it emits.
     * Throws NotInUStarError at the origin or off U.
     */
    std::pair<LatticePoint, long> preimage(const LatticePoint& p) const;

    /**
     * Classifies the fiber of tau over tau(p0) given a known preimage p0;
     * throws NotRelatedError unless tau(p0) == p1.
     */
    InjectivityReport injectivity_class(const LatticePoint& p0, const LatticePoint& p1) const;

    TauOrbit orbit(const LatticePoint& p, long cap = 1000000) const;

    /** Two-sided l bound, the m > |l| corollary, and the small-m table. */
    BoundsReport check_bounds(const LatticePoint& p) const;

    /**
     * Five-step sign pattern: from p0 in U* with k0 > 0, j0 > 0 and k1 < 0,
     * checks k2 < 0, k4 > 0, k5 > 0.  Throws PreconditionUnmetError when the
     * hypotheses fail.
     */
    FiveStepReport five_step_signs(const LatticePoint& p0) const;

    /**
     * All p in U* with max(|k|,|j|) <= n+1 whose f-value sits within alpha/beta
     * of a nonzero distance to the nearest integer.
     */
    std::vector<LatticePoint> schmidt_solutions() const;

    BallCensus census(long radius, long cap = 100000) const;

    /**
     * Whether a tau-cycle is realized by the fractional part of some natural
     * number: false outright for cycles through a first-quadrant point
     * (1,k,j) with j >= k > 0, otherwise decided by scanning the expansions
     * of 1..scan_to (default n^2+2n+4) for a matching periodic tail.
     */
    bool cycle_is_integer_class(const std::vector<LatticePoint>& cycle, long scan_to = -1,
                                long cap = 100000) const;

  private:
    PisotPtr parent_;
    long n_;
    FieldElement alpha_;
    FieldElement alpha_over_beta_;
};

}  // namespace betalab
