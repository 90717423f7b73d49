#include "betalab/field_element.hpp"

#include <sstream>

namespace betalab {

FieldElement::FieldElement(PisotPtr parent, std::vector<mpz_class> num, mpz_class den)
    : parent_(std::move(parent)), num_(std::move(num)), den_(std::move(den)) {
    canonicalize();
}

void FieldElement::canonicalize() {
    if (den_ == 0) throw Error("FieldElement: zero denominator");
    if (den_ < 0) {
        den_ = -den_;
        for (auto& c : num_) c = -c;
    }
    mpz_class g = den_;
    for (const auto& c : num_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    if (g > 1) {
        den_ /= g;
        for (auto& c : num_) c /= g;
    }
}

void FieldElement::check_same_parent(const FieldElement& o, const char* where) const {
    if (parent_.get() != o.parent_.get())
        throw MixedParentsError(std::string("FieldElement::") + where +
                                ": operands belong to different parents");
}

FieldElement FieldElement::integer(PisotPtr parent, const mpz_class& n) {
    std::vector<mpz_class> num(static_cast<size_t>(parent->degree()));
    num[0] = n;
    return FieldElement(std::move(parent), std::move(num), 1);
}

FieldElement FieldElement::from_rational(PisotPtr parent, const mpq_class& r) {
    std::vector<mpz_class> num(static_cast<size_t>(parent->degree()));
    num[0] = r.get_num();
    return FieldElement(std::move(parent), std::move(num), r.get_den());
}

FieldElement FieldElement::beta(PisotPtr parent) {
    if (parent->degree() < 2) throw DegreeTooLowError("FieldElement::beta: degree below 2");
    std::vector<mpz_class> num(static_cast<size_t>(parent->degree()));
    num[1] = 1;
    return FieldElement(std::move(parent), std::move(num), 1);
}

FieldElement FieldElement::alpha(PisotPtr parent) {
    std::vector<mpz_class> num(static_cast<size_t>(parent->degree()));
    num[0] = -parent->floor_beta();
    num[1] = 1;
    return FieldElement(std::move(parent), std::move(num), 1);
}

FieldElement FieldElement::inv_beta(PisotPtr parent) {
    // From p(beta) = 0: 1/beta = -(beta^(d-1) + a_(d-1) beta^(d-2) + ... + a_1)/a_0.
    int d = parent->degree();
    const mpz_class& a0 = parent->coeff_low(0);
    if (a0 == 0) throw Error("FieldElement::inv_beta: zero constant term");
    std::vector<mpz_class> num(static_cast<size_t>(d));
    for (int t = 0; t + 1 < d; ++t) num[static_cast<size_t>(t)] = parent->coeff_low(t + 1);
    num[static_cast<size_t>(d - 1)] = 1;
    return FieldElement(std::move(parent), std::move(num), -a0);
}

FieldElement FieldElement::beta_power(PisotPtr parent, long k) {
    FieldElement acc = integer(parent, 1);
    if (k >= 0) {
        for (long i = 0; i < k; ++i) acc = acc.mul_beta();
    } else {
        for (long i = 0; i < -k; ++i) acc = acc.div_beta();
    }
    return acc;
}

FieldElement FieldElement::from_coords(PisotPtr parent, std::vector<mpz_class> num,
                                       mpz_class den) {
    if (num.size() != static_cast<size_t>(parent->degree()))
        throw WrongDegreeError("FieldElement::from_coords: coordinate count mismatch");
    return FieldElement(std::move(parent), std::move(num), std::move(den));
}

FieldElement FieldElement::operator-() const {
    std::vector<mpz_class> num = num_;
    for (auto& c : num) c = -c;
    return FieldElement(parent_, std::move(num), den_);
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_same_parent(o, "operator+");
    std::vector<mpz_class> num(num_.size());
    for (size_t i = 0; i < num_.size(); ++i) num[i] = num_[i] * o.den_ + o.num_[i] * den_;
    return FieldElement(parent_, std::move(num), den_ * o.den_);
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    check_same_parent(o, "operator-");
    std::vector<mpz_class> num(num_.size());
    for (size_t i = 0; i < num_.size(); ++i) num[i] = num_[i] * o.den_ - o.num_[i] * den_;
    return FieldElement(parent_, std::move(num), den_ * o.den_);
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_same_parent(o, "operator*");
    int d = parent_->degree();
    std::vector<mpz_class> wide(static_cast<size_t>(2 * d - 1));
    for (int i = 0; i < d; ++i) {
        if (num_[static_cast<size_t>(i)] == 0) continue;
        for (int j = 0; j < d; ++j)
            wide[static_cast<size_t>(i + j)] +=
                num_[static_cast<size_t>(i)] * o.num_[static_cast<size_t>(j)];
    }
    // Fold beta^i for i >= d using beta^d = -(a_(d-1) beta^(d-1) + ... + a_0).
    for (int i = 2 * d - 2; i >= d; --i) {
        mpz_class c = wide[static_cast<size_t>(i)];
        if (c == 0) continue;
        wide[static_cast<size_t>(i)] = 0;
        for (int t = 0; t < d; ++t)
            wide[static_cast<size_t>(i - d + t)] -= c * parent_->coeff_low(t);
    }
    wide.resize(static_cast<size_t>(d));
    return FieldElement(parent_, std::move(wide), den_ * o.den_);
}

FieldElement FieldElement::scaled(const mpz_class& k) const {
    std::vector<mpz_class> num(num_.size());
    for (size_t i = 0; i < num_.size(); ++i) num[i] = num_[i] * k;
    return FieldElement(parent_, std::move(num), den_);
}

FieldElement FieldElement::divided(const mpz_class& k) const {
    if (k == 0) throw Error("FieldElement::divided: division by zero");
    return FieldElement(parent_, num_, den_ * k);
}

FieldElement FieldElement::mul_beta() const {
    int d = parent_->degree();
    std::vector<mpz_class> num(static_cast<size_t>(d));
    const mpz_class& top = num_[static_cast<size_t>(d - 1)];
    for (int t = 0; t < d; ++t) {
        num[static_cast<size_t>(t)] = -top * parent_->coeff_low(t);
        if (t >= 1) num[static_cast<size_t>(t)] += num_[static_cast<size_t>(t - 1)];
    }
    return FieldElement(parent_, std::move(num), den_);
}

FieldElement FieldElement::div_beta() const {
    return *this * inv_beta(parent_);
}

FieldElement FieldElement::pow(unsigned long e) const {
    FieldElement acc = integer(parent_, 1);
    FieldElement base = *this;
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

namespace {

using QP = std::vector<mpq_class>;

int qp_degree(const QP& a) {
    for (size_t i = a.size(); i-- > 0;)
        if (a[i] != 0) return static_cast<int>(i);
    return -1;
}

// a -= q * x^shift * b, used by the division loop below.
void qp_submul(QP& a, const mpq_class& q, size_t shift, const QP& b) {
    for (size_t i = 0; i < b.size(); ++i) {
        if (b[i] == 0) continue;
        a[i + shift] -= q * b[i];
    }
}

}  // namespace

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw Error("FieldElement::inverse: division by zero");
    const size_t d = parent_->degree();

    // Extended Euclid on (minimal polynomial, numerator polynomial) tracking
    // only the cofactor of the numerator.  r0/r1 shrink, s0/s1 grow.
    QP r0(d + 1), r1(d, 0);
    for (size_t i = 0; i <= d; ++i) r0[i] = mpq_class(parent_->coeff_low(i));
    for (size_t i = 0; i < d; ++i) r1[i] = mpq_class(num_[i]);
    QP s0(d, 0), s1(d, 0);
    s1[0] = 1;

    while (true) {
        int d1 = qp_degree(r1);
        if (d1 <= 0) break;
        int d0 = qp_degree(r0);
        while (d0 >= d1) {
            mpq_class q = r0[static_cast<size_t>(d0)] / r1[static_cast<size_t>(d1)];
            qp_submul(r0, q, static_cast<size_t>(d0 - d1), r1);
            QP qs(static_cast<size_t>(d0 - d1) + s1.size(), 0);
            for (size_t i = 0; i < s1.size(); ++i)
                if (s1[i] != 0) qs[i + static_cast<size_t>(d0 - d1)] = q * s1[i];
            if (s0.size() < qs.size()) s0.resize(qs.size(), 0);
            for (size_t i = 0; i < qs.size(); ++i) s0[i] -= qs[i];
            d0 = qp_degree(r0);
        }
        std::swap(r0, r1);
        std::swap(s0, s1);
    }

    int dr = qp_degree(r1);
    if (dr != 0) throw Error("FieldElement::inverse: zero divisor (reducible parent polynomial)");
    const mpq_class& unit = r1[0];

    // Inverse of num(beta)/den is den * s1(beta)/unit; s1 has degree < d once
    // reduced mod the minimal polynomial, which the loop guarantees.
    std::vector<mpz_class> num(d, 0);
    mpz_class den = 1;
    std::vector<mpq_class> coeffs(d, 0);
    for (size_t i = 0; i < s1.size() && i < d; ++i) coeffs[i] = s1[i] / unit;
    for (const auto& c : coeffs) den = lcm(den, c.get_den());
    for (size_t i = 0; i < d; ++i) {
        mpq_class scaled_q = coeffs[i] * den;
        num[i] = scaled_q.get_num() * den_;
    }
    FieldElement out(parent_, std::move(num), den);
    return out;
}

bool FieldElement::operator==(const FieldElement& o) const {
    check_same_parent(o, "operator==");
    return den_ == o.den_ && num_ == o.num_;
}

bool FieldElement::is_zero() const {
    for (const auto& c : num_)
        if (c != 0) return false;
    return true;
}

bool FieldElement::is_rational() const {
    for (size_t i = 1; i < num_.size(); ++i)
        if (num_[i] != 0) return false;
    return true;
}

int FieldElement::sign() const { return parent_->sign_of_value(num_); }

mpz_class FieldElement::floor() const {
    if (is_rational()) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), num_[0].get_mpz_t(), den_.get_mpz_t());
        return q;
    }
    return parent_->floor_of_quotient(num_, den_);
}

FieldElement FieldElement::fractional_part() const {
    mpz_class f = floor();
    std::vector<mpz_class> num = num_;
    num[0] -= f * den_;
    return FieldElement(parent_, std::move(num), den_);
}

mpq_class FieldElement::as_rational() const {
    if (!is_rational())
        throw NotIntegralError("FieldElement::as_rational: element is irrational");
    mpq_class r(num_[0], den_);
    r.canonicalize();
    return r;
}

std::pair<std::vector<mpz_class>, mpz_class> FieldElement::alpha_coords() const {
    // With beta = alpha + m this is the Taylor shift x -> x + m applied to the
    // coordinate polynomial, done in place Horner style.
    int d = parent_->degree();
    mpz_class m(parent_->floor_beta());
    std::vector<mpz_class> coeffs = num_;
    for (int step = 0; step < d - 1; ++step)
        for (int k = d - 2; k >= step; --k)
            coeffs[static_cast<size_t>(k)] += m * coeffs[static_cast<size_t>(k + 1)];
    return {coeffs, den_};
}

FieldElement FieldElement::from_alpha_coords(PisotPtr parent,
                                             const std::vector<mpz_class>& coords,
                                             const mpz_class& den) {
    int d = parent->degree();
    if (coords.size() != static_cast<size_t>(d))
        throw WrongDegreeError("FieldElement::from_alpha_coords: coordinate count mismatch");
    mpz_class m(parent->floor_beta());
    std::vector<mpz_class> out = coords;
    // Translate back: substitute x -> x - m (coefficients of beta powers).
    for (int step = 0; step < d - 1; ++step)
        for (int k = d - 2; k >= step; --k)
            out[static_cast<size_t>(k)] -= m * out[static_cast<size_t>(k + 1)];
    return FieldElement(std::move(parent), std::move(out), den);
}

size_t FieldElement::hash() const {
    const unsigned long kPrime = 2305843009213693951UL;  // 2^61 - 1
    size_t h = 1469598103934665603ULL;
    auto mix = [&h](unsigned long v) {
        h ^= v;
        h *= 1099511628211ULL;
    };
    mix(mpz_fdiv_ui(den_.get_mpz_t(), kPrime));
    for (const auto& c : num_) {
        mix(mpz_fdiv_ui(c.get_mpz_t(), kPrime));
        mix(static_cast<unsigned long>(sgn(c) + 2));
    }
    return h;
}

std::string FieldElement::to_string() const {
    std::ostringstream out;
    bool first = true;
    for (size_t i = 0; i < num_.size(); ++i) {
        if (num_[i] == 0) continue;
        if (!first) out << (num_[i] > 0 ? " + " : " - ");
        else if (num_[i] < 0) out << "-";
        first = false;
        mpz_class a = abs(num_[i]);
        if (a != 1 || i == 0) out << a.get_str();
        if (i >= 1) {
            if (a != 1) out << "*";
            out << "b";
            if (i >= 2) out << "^" << i;
        }
    }
    if (first) out << "0";
    std::string s = out.str();
    if (den_ != 1) s = "(" + s + ")/" + den_.get_str();
    return s;
}

}  // namespace betalab
