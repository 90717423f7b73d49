#include "betalab/families.hpp"

#include <cstdlib>
#include <filesystem>
#include <set>

#include <nlohmann/json.hpp>

#include "betalab/beta_dynamics.hpp"
#include "betalab/errors.hpp"
#include "doctest.h"

using namespace betalab;

namespace {

std::vector<long> longs(std::initializer_list<long> v) { return v; }

bool is_rotation(const std::vector<long>& a, const std::vector<long>& b) {
    if (a.size() != b.size()) return false;
    std::vector<long> aa = a;
    aa.insert(aa.end(), a.begin(), a.end());
    for (size_t i = 0; i < a.size(); ++i)
        if (std::equal(b.begin(), b.end(), aa.begin() + i)) return true;
    return false;
}

std::vector<mpz_class> nf_values(const F1Report& r) {
    std::vector<mpz_class> out;
    for (const NonFiniteEntry& e : r.non_finite) out.push_back(e.value);
    return out;
}

}  // namespace

TEST_CASE("family constructors validate their parameter ranges") {
    CHECK(FamilySpec::p(2).name() == "P{2}");
    CHECK(FamilySpec::q(2, 1, 1).name() == "Q{2,1,1}");
    CHECK(FamilySpec::r(3, -1).name() == "R{3,-1}");
    CHECK_THROWS_AS(FamilySpec::p(1), ConstraintViolationError);
    CHECK_THROWS_AS(FamilySpec::q(5, 2, 2), ConstraintViolationError);  // b+c != n
    CHECK_THROWS_AS(FamilySpec::q(3, 2, 1), ConstraintViolationError);  // b > c
    CHECK_THROWS_AS(FamilySpec::q(2, 0, 2), ConstraintViolationError);  // b = 0
    CHECK_THROWS_AS(FamilySpec::r(3, 0), ConstraintViolationError);
    CHECK_THROWS_AS(FamilySpec::r(3, 3), ConstraintViolationError);
    CHECK_THROWS_AS(FamilySpec::r(3, -3), ConstraintViolationError);

    CHECK(FamilySpec::p(5).coefficients() == std::vector<mpz_class>{1, -6, 5, -5});
    CHECK(FamilySpec::q(7, 2, 5).coefficients() == std::vector<mpz_class>{1, -7, 0, -2, -5});
    CHECK(FamilySpec::r(3, 1).coefficients() == std::vector<mpz_class>{1, -3, 1, -3, 1, -1});

    CHECK_THROWS_AS(FamilySpec::p(4).b(), OutOfDomainError);
    CHECK_THROWS_AS(FamilySpec::p(4).c(), OutOfDomainError);
    CHECK_THROWS_AS(FamilySpec::r(3, 1).b(), OutOfDomainError);
    CHECK(FamilySpec::q(7, 2, 5).b() == 2);
    CHECK(FamilySpec::r(3, -1).c() == -1);
}

TEST_CASE("build certifies P and Q members and reports the R landscape") {
    for (long n = 2; n <= 12; ++n) CHECK(build(FamilySpec::p(n))->is_pisot());
    CHECK(build(FamilySpec::q(2, 1, 1))->is_pisot());
    CHECK(build(FamilySpec::q(12, 5, 7))->is_pisot());

    CHECK(build(FamilySpec::r(3, 1))->is_pisot());
    CHECK(build(FamilySpec::r(4, 2))->is_pisot());
    CHECK_FALSE(build(FamilySpec::r(3, 2))->is_pisot());
    CHECK_FALSE(build(FamilySpec::r(10, 9))->is_pisot());

    CHECK(build(FamilySpec::r(3, 1))->floor_beta() == 2);   // beta in (n-1, n)
    CHECK(build(FamilySpec::r(3, -1))->floor_beta() == 3);  // beta in (n, n+1)
    CHECK(build(FamilySpec::p(2))->floor_beta() == 2);
    CHECK(build(FamilySpec::q(2, 1, 1))->floor_beta() == 2);
}

TEST_CASE("expansion of 1 across the families") {
    for (long n = 2; n <= 12; ++n) {
        DigitWord w = expansion_of_one(build(FamilySpec::p(n)));
        CHECK(w.frac_period.empty());
        CHECK(w.frac_preperiod == longs({n, 1, 0, n}));
    }
    DigitWord q = expansion_of_one(build(FamilySpec::q(2, 1, 1)));
    CHECK(q.frac_preperiod == longs({2, 0, 1, 1}));
    DigitWord q2 = expansion_of_one(build(FamilySpec::q(7, 2, 5)));
    CHECK(q2.frac_preperiod == longs({7, 0, 2, 5}));
}

TEST_CASE("scan_f1 pins: first failures, gaps and class structure") {
    F1Report p3 = scan_f1(FamilySpec::p(3), 20, 100000);
    for (const mpz_class& v : nf_values(p3)) CHECK(v > 6);  // 1..n(n-1) finite
    CHECK(nf_values(p3).front() == 7);
    CHECK(nf_values(p3).size() == 14);  // everything from 7 to 20 fails
    CHECK_FALSE(p3.gaps);

    F1Report p6 = scan_f1(FamilySpec::p(6), 40, 100000);
    CHECK(nf_values(p6) ==
          std::vector<mpz_class>{31, 32, 33, 34, 35, 36, 37});
    CHECK(p6.gaps);  // 37 fails, 38 recovers

    F1Report q211 = scan_f1(FamilySpec::q(2, 1, 1), 5, 100000);
    CHECK(nf_values(q211) == std::vector<mpz_class>{3, 4, 5});

    F1Report p2 = scan_f1(FamilySpec::p(2), 10, 100000);
    CHECK(nf_values(p2).front() == 6);

    SUBCASE("classes partition the scanned range and share verdicts") {
        std::set<mpz_class> seen;
        std::vector<mpz_class> nf_list = nf_values(p6);
        for (const FractionalClass& cls : p6.classes) {
            CHECK_FALSE(cls.members.empty());
            CHECK(std::is_sorted(cls.members.begin(), cls.members.end()));
            for (const mpz_class& m : cls.members) {
                CHECK(seen.insert(m).second);
                bool nf = std::find(nf_list.begin(), nf_list.end(), m) != nf_list.end();
                CHECK(nf == !cls.finite);
            }
        }
        CHECK(seen.size() == 40);
        CHECK(*seen.begin() == 1);
        CHECK(*seen.rbegin() == 40);
        // ordered by smallest member
        mpz_class last(0);
        for (const FractionalClass& cls : p6.classes) {
            CHECK(cls.members.front() > last);
            last = cls.members.front();
        }
    }

    SUBCASE("residue facts recorded by the scan hold") {
        F1Report wide = scan_f1(FamilySpec::p(6), 60, 100000);
        REQUIRE(wide.residue_facts.count("n2_finite_iff_n_not_0_mod_3") == 1);
        CHECK(wide.residue_facts.at("n2_finite_iff_n_not_0_mod_3"));
        CHECK(wide.residue_facts.at("n2_plus_1_shares_class_of_n2"));
        CHECK(wide.residue_facts.at("n2_plus_2_membership"));
    }
}

TEST_CASE("scan_f1 results are independent of the thread count") {
    F1Report serial = scan_f1(FamilySpec::p(5), 2000, 1000000, 1);
    F1Report parallel = scan_f1(FamilySpec::p(5), 2000, 1000000, 4);
    CHECK(to_json_string(serial) == to_json_string(parallel));
}

TEST_CASE("scan_f1 caches reports under BETALAB_CACHE_DIR") {
    std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "betalab_cache_test";
    std::filesystem::remove_all(dir);
    setenv("BETALAB_CACHE_DIR", dir.c_str(), 1);
    F1Report fresh = scan_f1(FamilySpec::p(6), 40, 100000);
    bool wrote = !std::filesystem::is_empty(dir);
    F1Report cached = scan_f1(FamilySpec::p(6), 40, 100000);
    unsetenv("BETALAB_CACHE_DIR");
    CHECK(wrote);
    CHECK(to_json_string(fresh) == to_json_string(cached));
    // a different key must not collide
    setenv("BETALAB_CACHE_DIR", dir.c_str(), 1);
    F1Report other = scan_f1(FamilySpec::p(6), 41, 100000);
    unsetenv("BETALAB_CACHE_DIR");
    CHECK(other.scanned_to == 41);
    std::filesystem::remove_all(dir);
}

TEST_CASE("residue_table: membership pattern around n^2") {
    std::vector<ResidueRow> rows = residue_table(2, 12, 1000000);
    REQUIRE(rows.size() == 11);
    for (const ResidueRow& row : rows) {
        CAPTURE(row.n);
        CHECK(row.all_claims_pass);
        CHECK(row.n2_finite == (row.n % 3 != 0));
        CHECK(row.n2_finite == row.n2_plus_1_finite);
    }
    auto row = [&](long n) -> const ResidueRow& { return rows[static_cast<size_t>(n - 2)]; };
    CHECK_FALSE(row(5).n2_plus_2_finite);   // 27
    CHECK_FALSE(row(8).n2_plus_2_finite);   // 66
    CHECK(row(11).n2_plus_2_finite);        // 123
    REQUIRE(row(11).n2_plus_2n_plus_3_finite.has_value());
    CHECK_FALSE(*row(11).n2_plus_2n_plus_3_finite);  // 146
    CHECK(row(11).claims.at("first_nonfinite_is_n2_plus_2n_plus_3"));
    CHECK_FALSE(row(6).n2_finite);          // 36
    CHECK(row(6).n2_plus_2_finite);         // 38
    CHECK_FALSE(row(9).n2_finite);          // 81
    CHECK(row(9).n2_plus_2_finite);         // 83
    CHECK(row(4).n2_finite);                // 16
    CHECK(row(4).n2_plus_2_finite);         // 18
    // for n = 2 mod 3 the +2/+3 neighbours recover only at n = 3 mod 4
    CHECK_FALSE(row(2).n2_plus_3_finite);
    CHECK_FALSE(row(5).n2_plus_3_finite);
    CHECK(row(11).n2_plus_3_finite);
}

TEST_CASE("akiyama_set enumerates the conjugate-bounded unit-interval lattice") {
    PisotPtr p2 = build(FamilySpec::p(2));
    AkiyamaReport ak = akiyama_set(p2);
    CHECK(ak.elements.size() == 207);
    CHECK(ak.finite_count + ak.nonfinite_count == ak.elements.size());
    CHECK_FALSE(ak.f_holds);
    CHECK(ak.radius_hi - ak.radius_lo < mpq_class(1, 1000000));
    CHECK(ak.radius_lo > 18);
    CHECK(ak.radius_hi < 19);

    SUBCASE("alpha is a finite element of the set") {
        FieldElement alpha = FieldElement::alpha(p2);
        bool found = false;
        for (const AkiyamaEntry& e : ak.elements)
            if (e.x == alpha) {
                found = true;
                CHECK(e.finite);
            }
        CHECK(found);
    }

    SUBCASE("the fractional part of n*beta + 2 breaks property F") {
        // value of the digit string (n-1) 1 1 n n, inadmissible as an expansion
        FieldElement v = FieldElement::integer(p2, 0);
        std::vector<long> w = {1, 1, 1, 2, 2};
        for (size_t i = 0; i < w.size(); ++i)
            v += FieldElement::beta_power(p2, -static_cast<long>(i) - 1)
                     .scaled(mpz_class(w[i]));
        bool found = false;
        for (const AkiyamaEntry& e : ak.elements)
            if (e.x == v) {
                found = true;
                CHECK_FALSE(e.finite);
            }
        CHECK(found);
        // and it really is the value left after the integer digits of n*beta+2
        FieldElement nb2 = FieldElement::beta(p2).scaled(2) + FieldElement::integer(p2, 2);
        OrbitClassification orbit = expand(nb2);
        FieldElement head = FieldElement::integer(p2, 0);
        long top = static_cast<long>(orbit.word.int_part.size()) - 1;
        for (size_t i = 0; i < orbit.word.int_part.size(); ++i)
            head += FieldElement::beta_power(p2, top - static_cast<long>(i))
                        .scaled(mpz_class(orbit.word.int_part[i]));
        CHECK(nb2 - head == v);
    }

    SUBCASE("element count grows with n") {
        CHECK(akiyama_set(build(FamilySpec::p(3))).elements.size() == 959);
    }

    SUBCASE("non-cubic and non-complex parents are rejected") {
        CHECK_THROWS_AS(akiyama_set(build(FamilySpec::q(2, 1, 1))), WrongDegreeError);
        CHECK_THROWS_AS(akiyama_set(build(FamilySpec::r(3, 1))), WrongDegreeError);
        // totally real cubic Pisot: x^3 - 2x^2 - x + 1
        PisotPtr real3 = make_pisot({1, -2, -1, 1});
        CHECK_THROWS_AS(akiyama_set(real3), ComplexEmbeddingUncertifiedError);
    }
}

TEST_CASE("check_suff: alpha-power criterion versus direct scanning") {
    SuffReport p7 = check_suff(build(FamilySpec::p(7)), 500);
    CHECK(p7.verdict == SuffVerdict::SufficientF1Holds);
    CHECK(p7.alpha_powers.size() == 1);  // degree 3: only alpha^2
    CHECK_FALSE(p7.scan_counterexample.has_value());

    SuffReport p4 = check_suff(build(FamilySpec::p(4)), 500);
    CHECK(p4.verdict == SuffVerdict::SufficientF1Holds);

    SuffReport p6 = check_suff(build(FamilySpec::p(6)), 500);
    CHECK(p6.verdict == SuffVerdict::Inconclusive);
    REQUIRE(p6.scan_counterexample.has_value());
    CHECK(*p6.scan_counterexample == 31);

    SuffReport q211 = check_suff(build(FamilySpec::q(2, 1, 1)), 50);
    CHECK(q211.verdict == SuffVerdict::Inconclusive);
    CHECK(q211.alpha_powers.size() == 2);  // alpha^2 and alpha^3
    bool some_nonfinite = false;
    for (const OrbitClassification& o : q211.alpha_powers)
        some_nonfinite = some_nonfinite || o.kind == OrbitKind::EventuallyPeriodic;
    CHECK(some_nonfinite);
    REQUIRE(q211.scan_counterexample.has_value());
    CHECK(*q211.scan_counterexample == 3);

    SUBCASE("verdict matches the parameter residue for the cubic family") {
        for (long n = 2; n <= 13; ++n) {
            SuffReport rep = check_suff(build(FamilySpec::p(n)), 1);
            CAPTURE(n);
            CHECK((rep.verdict == SuffVerdict::SufficientF1Holds) == (n % 3 == 1));
        }
    }

    SUBCASE("an infinite expansion of 1 is rejected") {
        // beta = (3+sqrt(5))/2 has d(1) = 2 1 1 1 ...
        CHECK_THROWS_AS(check_suff(make_pisot({1, -3, 1}), 10),
                        InfiniteExpansionOfOneError);
    }
}

TEST_CASE("q_family_checks: word identities of the quartic family") {
    SUBCASE("smallest member") {
        QFamilyReport r = q_family_checks(2, 1, 1);
        CHECK(r.ok);
        CHECK(r.one_matches);
        CHECK(r.n_plus_1_nonfinite);
        CHECK(r.r_words_match);
        CHECK(r.display_applies);
        CHECK(r.one_minus_alpha_matches);
        CHECK(r.one_minus_alpha.word.frac_preperiod == longs({1, 1, 1}));
        CHECK(r.one_minus_alpha.word.frac_period == longs({0, 0, 0, 1, 2}));
        CHECK_FALSE(r.finite_claim_applies);  // 2b+1 > n here
    }

    SUBCASE("n=3: tail of 1-alpha and finite 1-2alpha") {
        QFamilyReport r = q_family_checks(3, 1, 2);
        CHECK(r.ok);
        CHECK(r.one_minus_alpha.word.frac_preperiod == longs({2, 2, 0}));
        CHECK(r.one_minus_alpha.word.frac_period == longs({0, 1, 1, 1, 2}));
        CHECK(r.finite_claim_applies);
        CHECK(r.display_value_identity);
        CHECK(r.one_minus_two_alpha_matches);
        CHECK(r.two_n_plus_1_finite);
        REQUIRE(r.one_minus_two_alpha.has_value());
        CHECK(r.one_minus_two_alpha->kind == OrbitKind::Finite);
        CHECK(r.one_minus_two_alpha->word.frac_preperiod ==
              longs({2, 0, 1, 0, 3, 0, 1, 0, 1, 2}));
    }

    SUBCASE("c = b+1: the asserted finite expansion of 1-2alpha is real") {
        for (auto [n, b, c] : std::vector<std::array<long, 3>>{
                 {5, 2, 3}, {7, 3, 4}, {9, 4, 5}, {11, 5, 6}}) {
            CAPTURE(n);
            QFamilyReport r = q_family_checks(n, b, c);
            CHECK(r.ok);
            CHECK(r.finite_claim_applies);
            CHECK(r.display_value_identity);
            CHECK(r.one_minus_two_alpha_matches);
            CHECK(r.two_n_plus_1_finite);
        }
    }

    SUBCASE("c >= b+2: the word still has the right value but is inadmissible") {
        for (auto [n, b, c] : std::vector<std::array<long, 3>>{
                 {4, 1, 3}, {6, 2, 4}, {7, 2, 5}, {12, 5, 7}}) {
            CAPTURE(n);
            QFamilyReport r = q_family_checks(n, b, c);
            CHECK(r.finite_claim_applies);
            CHECK(r.display_value_identity);     // the value identity is exact
            CHECK_FALSE(r.one_minus_two_alpha_matches);  // but not the expansion
            CHECK_FALSE(r.two_n_plus_1_finite);
            CHECK_FALSE(r.ok);
            REQUIRE(r.one_minus_two_alpha.has_value());
            CHECK(r.one_minus_two_alpha->kind == OrbitKind::EventuallyPeriodic);
        }
        QFamilyReport r = q_family_checks(7, 2, 5);
        CHECK(r.one_minus_two_alpha->word.frac_preperiod ==
              longs({6, 2, 0, 1, 0, 1, 6, 2, 5, 5}));
        CHECK(is_rotation(r.one_minus_two_alpha->word.frac_period,
                          longs({4, 4, 2, 3, 0})));
        // the tail agrees with the period of 1 - alpha
        CHECK(is_rotation(r.one_minus_two_alpha->word.frac_period,
                          r.one_minus_alpha.word.frac_period));
    }

    SUBCASE("generic display of 1-alpha") {
        QFamilyReport r = q_family_checks(6, 2, 4);
        CHECK(r.display_applies);
        CHECK(r.one_minus_alpha_matches);
        QFamilyReport tight = q_family_checks(7, 3, 4);  // 2b+1 = n: no closed form
        CHECK_FALSE(tight.display_applies);
        CHECK(tight.ok);
    }
}

TEST_CASE("r_family_checks: the expansion of n in the quintic family") {
    for (auto [n, c] : std::vector<std::array<long, 2>>{{2, 1}, {3, 1}, {4, 2}, {10, 9}}) {
        CAPTURE(n);
        CAPTURE(c);
        RFamilyReport r = r_family_checks(n, c);
        CHECK(r.ok);
        CHECK_FALSE(r.word_checks_skipped);
        CHECK(r.n_nonfinite);
        CHECK(r.period_matches);
        CHECK(r.prefix_matches);
        CHECK(r.expected_period == longs({n - 1, n - c, c - 1}));
        REQUIRE(r.n_expansion.has_value());
        CHECK(r.n_expansion->word.int_part == longs({1, 0}));
    }
    CHECK(render(r_family_checks(4, 2).n_expansion->word) == "10.0011(213)^w");

    RFamilyReport neg = r_family_checks(3, -1);
    CHECK(neg.word_checks_skipped);
    CHECK(neg.ok);
    CHECK_FALSE(neg.is_pisot);
    CHECK_FALSE(neg.n_expansion.has_value());
}

TEST_CASE("report serialization stays parseable and consistent") {
    F1Report scan = scan_f1(FamilySpec::p(6), 40, 100000);
    nlohmann::json j = nlohmann::json::parse(to_json_string(scan));
    CHECK(j.at("spec").at("name") == "P{6}");
    CHECK(j.at("gaps") == true);
    CHECK(j.at("non_finite").size() == 7);
    std::string csv = to_csv(scan);
    CHECK(csv.find("family,scanned_to,cap,gaps") == 0);
    CHECK(csv.find("36") != std::string::npos);

    std::vector<ResidueRow> rows = residue_table(5, 6, 1000000);
    nlohmann::json rj = nlohmann::json::parse(to_json_string(rows));
    CHECK(rj.size() == 2);
    CHECK(rj[0].at("n") == 5);
    CHECK(rj[0].at("n2_plus_2_finite") == false);
    CHECK(to_csv(rows).find("\n5,") != std::string::npos);

    nlohmann::json aj = nlohmann::json::parse(to_json_string(akiyama_set(build(FamilySpec::p(2)))));
    CHECK(aj.at("elements").size() == 207);
    CHECK(aj.at("f_holds") == false);

    nlohmann::json sj =
        nlohmann::json::parse(to_json_string(check_suff(build(FamilySpec::p(7)), 100)));
    CHECK(sj.at("verdict") == "SufficientF1Holds");

    nlohmann::json qj = nlohmann::json::parse(to_json_string(q_family_checks(3, 1, 2)));
    CHECK(qj.at("ok") == true);
    nlohmann::json rrj = nlohmann::json::parse(to_json_string(r_family_checks(3, 1)));
    CHECK(rrj.at("ok") == true);
}
