#pragma once

#include <gmpxx.h>

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "betalab/errors.hpp"

namespace betalab {

/** Closed interval with rational endpoints. */
struct RationalInterval {
    mpq_class lo;
    mpq_class hi;

    mpq_class width() const { return hi - lo; }
    mpq_class mid() const { return (lo + hi) / 2; }
    bool contains(const mpq_class& x) const { return lo <= x && x <= hi; }
};

class PisotNumber;
using PisotPtr = std::shared_ptr<const PisotNumber>;

/**
 * A Pisot number beta given by a monic integer polynomial with exactly one
 * real root greater than 1 and all other complex roots certified to have
 * modulus below 1. The root itself is only ever handled through shrinking
 * rational enclosures; no floating point enters any decision.
 */
class PisotNumber : public std::enable_shared_from_this<PisotNumber> {
public:
    /**
     * Certify and wrap the dominant root of the given monic polynomial.
     * Coefficients are listed from the leading term down to the constant,
     * e.g. x^3 - 4x^2 + 3x - 3 is {1, -4, 3, -3}.
     *
     * Throws WrongDegreeError, NoDominantRealRootError or NotPisotError.
     * Irreducibility is not checked; a reducible input that happens to pass
     * certification yields a working but non-canonical parent.
     */
    static PisotPtr make(std::vector<mpz_class> coeffs);

    /**
     * Like make but tolerates conjugates of modulus 1 or more, for working
     * with the dominant root of almost-Pisot polynomials. is_pisot() reports
     * whether certification actually succeeded.
     */
    static PisotPtr make_dominant(std::vector<mpz_class> coeffs);

    bool is_pisot() const { return is_pisot_; }

    int degree() const { return degree_; }

    /** Monic defining polynomial, leading coefficient first. */
    const std::vector<mpz_class>& coeffs() const { return coeffs_; }

    /** Coefficient of x^i, i <= degree. */
    const mpz_class& coeff_low(int i) const { return low_[static_cast<size_t>(i)]; }

    long floor_beta() const { return floor_beta_; }

    /**
     * Certified upper bound on the modulus of every conjugate root, slightly
     * above the true maximum; below 1 exactly when is_pisot().
     */
    const mpq_class& conjugate_bound() const { return conjugate_bound_; }

    /** Rational enclosure of beta no wider than max_width. Thread safe. */
    RationalInterval enclosure(const mpq_class& max_width) const;

    /**
     * Sign of num(beta) where num lists integer coefficients of powers
     * 1, beta, beta^2, ... Refines the enclosure until the sign separates;
     * a zero value is detected exactly via polynomial remaindering.
     */
    int sign_of_value(const std::vector<mpz_class>& num) const;

    /** floor(num(beta) / den) for den > 0, by enclosure refinement. */
    mpz_class floor_of_quotient(const std::vector<mpz_class>& num, const mpz_class& den) const;

    /** Short human-readable label such as "x^3-4x^2+3x-3". */
    std::string label() const;

private:
    PisotNumber() = default;

    int degree_ = 0;
    std::vector<mpz_class> coeffs_;  // monic, highest power first
    std::vector<mpz_class> low_;     // same data, constant term first
    long floor_beta_ = 0;
    bool is_pisot_ = false;
    mpq_class conjugate_bound_;

    mutable std::mutex mutex_;
    mutable RationalInterval enclosure_;  // guarded by mutex_, only ever shrinks

    void refine_enclosure_locked() const;
};

/** Convenience wrapper around PisotNumber::make. */
PisotPtr make_pisot(const std::vector<mpz_class>& coeffs);

}  // namespace betalab
