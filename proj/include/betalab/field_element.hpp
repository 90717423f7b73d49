#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "betalab/pisot.hpp"

namespace betalab {

/**
 * Element of Q(beta) stored as integer coordinates over the power basis
 * 1, beta, ..., beta^(d-1) with a shared positive denominator. The
 * representation is canonical: gcd of all numerators and the denominator
 * is 1 and the denominator is positive, so equality is coordinate equality.
 */
class FieldElement {
public:
    FieldElement() = delete;

    static FieldElement integer(PisotPtr parent, const mpz_class& n);
    static FieldElement from_rational(PisotPtr parent, const mpq_class& r);
    static FieldElement beta(PisotPtr parent);
    static FieldElement beta_power(PisotPtr parent, long k);  // any sign of k
    /** Fractional part of beta, i.e. beta - floor(beta). */
    static FieldElement alpha(PisotPtr parent);
    static FieldElement inv_beta(PisotPtr parent);
    static FieldElement from_coords(PisotPtr parent, std::vector<mpz_class> num, mpz_class den);

    const PisotPtr& parent() const { return parent_; }
    const std::vector<mpz_class>& num() const { return num_; }
    const mpz_class& den() const { return den_; }

    FieldElement operator-() const;
    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
    FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
    FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

    FieldElement scaled(const mpz_class& k) const;
    FieldElement divided(const mpz_class& k) const;
    FieldElement mul_beta() const;
    FieldElement div_beta() const;
    FieldElement pow(unsigned long e) const;
    /** Multiplicative inverse via the extended Euclidean algorithm. */
    FieldElement inverse() const;
    FieldElement operator/(const FieldElement& o) const { return *this * o.inverse(); }

    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }
    bool operator<(const FieldElement& o) const { return (*this - o).sign() < 0; }
    bool operator<=(const FieldElement& o) const { return (*this - o).sign() <= 0; }
    bool operator>(const FieldElement& o) const { return (*this - o).sign() > 0; }
    bool operator>=(const FieldElement& o) const { return (*this - o).sign() >= 0; }

    bool is_zero() const;
    bool is_rational() const;
    bool is_integral() const { return is_rational() && den_ == 1; }
    /** Exact sign, decided by enclosure refinement. */
    int sign() const;
    mpz_class floor() const;
    /** this - floor(this), always in [0, 1). */
    FieldElement fractional_part() const;
    mpq_class as_rational() const;  // throws NotIntegralError when irrational

    /**
     * Coordinates over the basis 1, alpha, ..., alpha^(d-1) where
     * alpha = beta - floor(beta); returns numerators plus denominator.
     */
    std::pair<std::vector<mpz_class>, mpz_class> alpha_coords() const;
    static FieldElement from_alpha_coords(PisotPtr parent, const std::vector<mpz_class>& coords,
                                          const mpz_class& den);

    size_t hash() const;
    std::string to_string() const;

private:
    FieldElement(PisotPtr parent, std::vector<mpz_class> num, mpz_class den);
    void canonicalize();
    void check_same_parent(const FieldElement& o, const char* where) const;

    PisotPtr parent_;
    std::vector<mpz_class> num_;
    mpz_class den_;
};

struct FieldElementHash {
    size_t operator()(const FieldElement& x) const { return x.hash(); }
};

}  // namespace betalab
