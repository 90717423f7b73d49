#include <doctest.h>

#include <array>
#include <vector>

#include "betalab/field_element.hpp"

using namespace betalab;

static std::vector<mpz_class> zv(std::initializer_list<long> v) {
    return std::vector<mpz_class>(v.begin(), v.end());
}

static PisotPtr cubic(long n) { return make_pisot(zv({1, -(n + 1), n, -n})); }

TEST_CASE("construction and canonical form") {
    auto p = cubic(2);
    auto x = FieldElement::from_coords(p, zv({2, 4, 6}), 4);
    CHECK(x.num() == zv({1, 2, 3}));
    CHECK(x.den() == 2);
    auto y = FieldElement::from_coords(p, zv({-1, 0, 0}), -2);
    CHECK(y.num() == zv({1, 0, 0}));
    CHECK(y.den() == 2);
    CHECK_THROWS_AS(FieldElement::from_coords(p, zv({1, 2}), 1), WrongDegreeError);
}

TEST_CASE("ring identities") {
    auto p = cubic(3);
    auto b = FieldElement::beta(p);
    auto one = FieldElement::integer(p, 1);
    CHECK((b - one) * (b + one) == b * b - one);
    // beta^3 = (n+1) beta^2 - n beta + n with n = 3
    CHECK(b.pow(3) == FieldElement::from_coords(p, zv({3, -3, 4}), 1));
    CHECK(b.pow(3) == b * b * b);
    CHECK(FieldElement::beta_power(p, 3) == b.pow(3));
    CHECK(b.mul_beta() == b * b);
}

TEST_CASE("inverse of beta") {
    for (long n : {2L, 3L, 7L}) {
        auto p = cubic(n);
        auto b = FieldElement::beta(p);
        auto ib = FieldElement::inv_beta(p);
        CHECK(b * ib == FieldElement::integer(p, 1));
        CHECK(ib == FieldElement::from_coords(p, zv({n, -(n + 1), 1}), n));
        CHECK(b.div_beta() == FieldElement::integer(p, 1));
        CHECK(FieldElement::beta_power(p, -2) == ib * ib);
    }
}

TEST_CASE("signs, floors and fractional parts") {
    auto p = cubic(2);  // beta ~ 2.5468
    auto b = FieldElement::beta(p);
    CHECK(b.sign() == 1);
    CHECK((-b).sign() == -1);
    CHECK((b - FieldElement::integer(p, 3)).sign() == -1);
    CHECK(b.floor() == 2);
    CHECK((b * b).floor() == 6);
    CHECK(FieldElement::integer(p, -7).floor() == -7);
    CHECK(FieldElement::from_rational(p, mpq_class(-7, 2)).floor() == -4);
    auto f = (b * b).fractional_part();
    CHECK(f.sign() >= 0);
    CHECK((f - FieldElement::integer(p, 1)).sign() < 0);
    CHECK(f + FieldElement::integer(p, 6) == b * b);
    CHECK(b > FieldElement::integer(p, 2));
    CHECK(b < FieldElement::integer(p, 3));
}

TEST_CASE("alpha and the alpha basis") {
    auto p = cubic(4);
    auto a = FieldElement::alpha(p);
    CHECK(a == FieldElement::beta(p) - FieldElement::integer(p, 4));
    CHECK(a.sign() == 1);
    CHECK((a - FieldElement::integer(p, 1)).sign() < 0);
    auto [ac, aden] = (a * a).alpha_coords();
    CHECK(ac == zv({0, 0, 1}));
    CHECK(aden == 1);
    auto x = FieldElement::from_coords(p, zv({3, -5, 11}), 7);
    auto [xc, xden] = x.alpha_coords();
    CHECK(FieldElement::from_alpha_coords(p, xc, xden) == x);
    CHECK(FieldElement::from_alpha_coords(p, zv({1, 2, 0}), 1) ==
          FieldElement::integer(p, 1) + a + a);
}

TEST_CASE("rationality") {
    auto p = cubic(2);
    CHECK(FieldElement::from_rational(p, mpq_class(3, 4)).as_rational() == mpq_class(3, 4));
    CHECK(FieldElement::integer(p, 5).is_integral());
    CHECK(!FieldElement::beta(p).is_rational());
    CHECK_THROWS_AS(FieldElement::beta(p).as_rational(), NotIntegralError);
}

TEST_CASE("mixed parents are rejected") {
    auto p2 = cubic(2);
    auto p3 = cubic(3);
    CHECK_THROWS_AS(FieldElement::beta(p2) + FieldElement::beta(p3), MixedParentsError);
    CHECK_THROWS_AS(FieldElement::beta(p2) == FieldElement::beta(p3), MixedParentsError);
}

TEST_CASE("scaling") {
    auto p = cubic(2);
    auto b = FieldElement::beta(p);
    CHECK(b.scaled(6).divided(3) == b + b);
    CHECK(b.divided(2).scaled(2) == b);
    CHECK_THROWS_AS(b.divided(0), Error);
}

TEST_CASE("multiplicative inverse") {
    auto p = cubic(2);
    auto one = FieldElement::integer(p, 1);
    auto b = FieldElement::beta(p);
    CHECK(b.inverse() == FieldElement::inv_beta(p));
    CHECK((b - one).inverse() * (b - one) == one);
    auto x = FieldElement::from_coords(p, {3, -5, 2}, 7);
    CHECK(x * x.inverse() == one);
    CHECK(x / x == one);
    CHECK(FieldElement::from_rational(p, mpq_class(3, 4)).inverse() ==
          FieldElement::from_rational(p, mpq_class(4, 3)));
    CHECK_THROWS_AS(FieldElement::integer(p, 0).inverse(), Error);
}

TEST_CASE("hash agrees with equality on a small orbit") {
    auto p = cubic(3);
    auto x = FieldElement::alpha(p);
    auto y = FieldElement::beta(p) - FieldElement::integer(p, 3);
    CHECK(x == y);
    CHECK(x.hash() == y.hash());
}

TEST_CASE("printing") {
    auto p = cubic(2);
    auto x = FieldElement::from_coords(p, zv({-1, 2, 0}), 3);
    CHECK(x.to_string() == "(-1 + 2*b)/3");
    CHECK(FieldElement::integer(p, 0).to_string() == "0");
    CHECK(FieldElement::beta(p).to_string() == "b");
}
