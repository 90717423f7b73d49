#include "betalab/families.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "betalab/errors.hpp"

namespace betalab {

namespace {

using nlohmann::json;

std::string kind_tag(FamilyKind k) {
    switch (k) {
        case FamilyKind::CubicP: return "P";
        case FamilyKind::QuarticQ: return "Q";
        case FamilyKind::QuinticR: return "R";
    }
    return "?";
}

// ---- orbit classification shared by every scanner --------------------------

using VerdictMemo = std::unordered_map<FieldElement, bool, FieldElementHash>;

/**
 * Finiteness of the greedy orbit of a fractional value, with verdicts shared
 * across calls through `memo`.  Walks T until it reaches zero, a memoized
 * state, or a repeat within the current walk (a fresh cycle, hence
 * non-finite).  Returns nullopt only when more than `cap` new states appear.
 */
std::optional<bool> finite_orbit_verdict(const FieldElement& start, long cap,
                                         VerdictMemo& memo) {
    std::vector<FieldElement> trail;
    std::unordered_map<FieldElement, size_t, FieldElementHash> seen;
    FieldElement x = start;
    std::optional<bool> verdict;
    for (long step = 0;; ++step) {
        if (x.is_zero()) {
            verdict = true;
            break;
        }
        if (auto hit = memo.find(x); hit != memo.end()) {
            verdict = hit->second;
            break;
        }
        if (seen.contains(x)) {
            verdict = false;  // entered a cycle that never reaches zero
            break;
        }
        if (step >= cap) break;
        seen.emplace(x, trail.size());
        trail.push_back(x);
        x = t_beta_step(x).second;
    }
    if (verdict.has_value())
        for (const FieldElement& s : trail) memo.emplace(s, *verdict);
    return verdict;
}

/** Integer digits (most significant first) and exact fractional value of N. */
std::pair<std::vector<long>, FieldElement> integer_split(const PisotPtr& parent,
                                                         const mpz_class& N) {
    FieldElement x = FieldElement::integer(parent, N);
    if (N == 1) return {{1}, FieldElement::integer(parent, 0)};
    long scale = 0;
    FieldElement pw = FieldElement::integer(parent, 1);
    while ((pw - x).sign() < 0) {
        pw = pw.mul_beta();
        ++scale;
    }
    FieldElement y = x;
    for (long i = 0; i < scale; ++i) y = y.div_beta();
    std::vector<long> digits;
    digits.reserve(static_cast<size_t>(scale));
    for (long i = 0; i < scale; ++i) {
        auto [d, next] = t_beta_step(y);
        digits.push_back(d);
        y = next;
    }
    return {digits, y};
}

long stream_digit(const std::vector<long>& pre, const std::vector<long>& per, size_t i) {
    if (i < pre.size()) return pre[i];
    if (per.empty()) return 0;
    return per[(i - pre.size()) % per.size()];
}

/** Equality of two eventually periodic fractional digit streams. */
bool streams_equal(const std::vector<long>& pre_a, const std::vector<long>& per_a,
                   const std::vector<long>& pre_b, const std::vector<long>& per_b) {
    if (per_a.empty() != per_b.empty()) return false;
    size_t tail = per_a.empty() ? 1 : 2 * std::lcm(per_a.size(), per_b.size());
    size_t limit = std::max(pre_a.size(), pre_b.size()) + tail;
    for (size_t i = 0; i < limit; ++i)
        if (stream_digit(pre_a, per_a, i) != stream_digit(pre_b, per_b, i)) return false;
    return true;
}

bool is_rotation(const std::vector<long>& a, const std::vector<long>& b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    std::vector<long> doubled = a;
    doubled.insert(doubled.end(), a.begin(), a.end());
    return std::search(doubled.begin(), doubled.end(), b.begin(), b.end()) != doubled.end();
}

FieldElement word_value_finite(const PisotPtr& parent, const std::vector<long>& digits) {
    FieldElement acc = FieldElement::integer(parent, 0);
    for (size_t i = 0; i < digits.size(); ++i)
        acc += FieldElement::beta_power(parent, -static_cast<long>(i) - 1)
                   .scaled(mpz_class(digits[i]));
    return acc;
}

// ---- residue-class claims for the cubic family ------------------------------

/** The paper's predicted membership of n^2+2, when it makes one. */
std::optional<bool> predicted_n2_plus_2(long n) {
    if (n % 3 == 1) return true;
    if (n % 3 == 2) return n % 4 == 3;
    if (n % 4 == 1 || n % 4 == 2) return true;  // n = 0 mod 3
    return std::nullopt;  // n = 0 mod 3 with n = 0,3 mod 4: no stated claim
}

std::optional<bool> predicted_n2_plus_3(long n) {
    if (n % 3 == 1) return true;
    if (n % 3 == 2) return n % 4 == 3;
    return std::nullopt;
}

// ---- scan cache -------------------------------------------------------------

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

json spec_to_json(const FamilySpec& spec) {
    json j;
    j["family"] = kind_tag(spec.kind());
    j["n"] = spec.n();
    if (spec.kind() == FamilyKind::QuarticQ) j["b"] = spec.b();
    if (spec.kind() != FamilyKind::CubicP) j["c"] = spec.c();
    j["name"] = spec.name();
    return j;
}

FamilySpec spec_from_json(const json& j) {
    std::string tag = j.at("family").get<std::string>();
    long n = j.at("n").get<long>();
    if (tag == "P") return FamilySpec::p(n);
    if (tag == "Q") return FamilySpec::q(n, j.at("b").get<long>(), j.at("c").get<long>());
    if (tag == "R") return FamilySpec::r(n, j.at("c").get<long>());
    throw RangeError("unknown family tag in cached report: " + tag);
}

json f1_to_json(const F1Report& r) {
    json j;
    j["spec"] = spec_to_json(r.spec);
    j["scanned_to"] = r.scanned_to;
    j["cap"] = r.cap;
    j["gaps"] = r.gaps;
    json nf = json::array();
    for (const NonFiniteEntry& e : r.non_finite)
        nf.push_back({{"value", e.value.get_str()},
                      {"preperiod", e.preperiod},
                      {"period", e.period}});
    j["non_finite"] = nf;
    json cls = json::array();
    for (const FractionalClass& c : r.classes) {
        json members = json::array();
        for (const mpz_class& m : c.members) members.push_back(m.get_str());
        cls.push_back({{"value", c.value}, {"members", members}, {"finite", c.finite}});
    }
    j["classes"] = cls;
    j["residue_facts"] = r.residue_facts;
    return j;
}

F1Report f1_from_json(const json& j) {
    F1Report r{spec_from_json(j.at("spec"))};
    r.scanned_to = j.at("scanned_to").get<long>();
    r.cap = j.at("cap").get<long>();
    r.gaps = j.at("gaps").get<bool>();
    for (const json& e : j.at("non_finite")) {
        NonFiniteEntry entry;
        entry.value = mpz_class(e.at("value").get<std::string>());
        entry.preperiod = e.at("preperiod").get<std::vector<long>>();
        entry.period = e.at("period").get<std::vector<long>>();
        r.non_finite.push_back(std::move(entry));
    }
    for (const json& c : j.at("classes")) {
        FractionalClass cls;
        cls.value = c.at("value").get<std::string>();
        for (const json& m : c.at("members")) cls.members.emplace_back(m.get<std::string>());
        cls.finite = c.at("finite").get<bool>();
        r.classes.push_back(std::move(cls));
    }
    r.residue_facts = j.at("residue_facts").get<std::map<std::string, bool>>();
    return r;
}

std::optional<std::filesystem::path> cache_path(const FamilySpec& spec, long n_max, long cap) {
    const char* dir = std::getenv("BETALAB_CACHE_DIR");
    if (dir == nullptr || *dir == '\0') return std::nullopt;
    std::string key = "f1|" + spec.name() + "|" + std::to_string(n_max) + "|" + std::to_string(cap);
    char name[32];
    std::snprintf(name, sizeof name, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(key)));
    return std::filesystem::path(dir) / (std::string(name) + ".json");
}

// ---- rational interval arithmetic for the Akiyama box -----------------------

struct QInterval {
    mpq_class lo, hi;
};

QInterval qi(const mpq_class& v) { return {v, v}; }

QInterval operator+(const QInterval& a, const QInterval& b) {
    return {a.lo + b.lo, a.hi + b.hi};
}
QInterval operator-(const QInterval& a, const QInterval& b) {
    return {a.lo - b.hi, a.hi - b.lo};
}
QInterval operator*(const QInterval& a, const QInterval& b) {
    mpq_class p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4))};
}

QInterval qi_inverse(const QInterval& a) {
    if (sgn(a.lo) <= 0 && sgn(a.hi) >= 0)
        throw ComplexEmbeddingUncertifiedError("interval straddles zero during inversion");
    return {1 / a.hi, 1 / a.lo};
}

/** Certified enclosure of sqrt(a) for a.lo >= 0, to roughly 2^-64 accuracy. */
QInterval qi_sqrt(const QInterval& a) {
    auto root = [](const mpq_class& q, bool round_up) {
        mpz_class num = q.get_num(), den = q.get_den();
        mpz_class scaled = num * den;
        scaled <<= 128;
        mpz_class s = sqrt(scaled);  // floor square root
        if (round_up) s += 1;
        mpz_class d = den;
        d <<= 64;
        return mpq_class(s, d);
    };
    mpq_class lo = a.lo < 0 ? mpq_class(0) : root(a.lo, false);
    return {lo, root(a.hi, true)};
}

double to_double_lo(const mpq_class& q) {
    double d = q.get_d();
    for (int i = 0; i < 4; ++i) d = std::nextafter(d, -1e308);
    return d;
}
double to_double_hi(const mpq_class& q) {
    double d = q.get_d();
    for (int i = 0; i < 4; ++i) d = std::nextafter(d, 1e308);
    return d;
}

/** Norm of an integral element: determinant of its multiplication matrix. */
mpz_class cubic_norm(const FieldElement& x) {
    if (x.den() != 1)
        throw NotIntegralError("norm requested for a non-integral element");
    FieldElement xb = x.mul_beta();
    FieldElement xb2 = xb.mul_beta();
    const auto& c0 = x.num();
    const auto& c1 = xb.num();
    const auto& c2 = xb2.num();
    return c0[0] * (c1[1] * c2[2] - c1[2] * c2[1]) -
           c1[0] * (c0[1] * c2[2] - c0[2] * c2[1]) +
           c2[0] * (c0[1] * c1[2] - c0[2] * c1[1]);
}

}  // namespace

// ---- FamilySpec -------------------------------------------------------------

FamilySpec FamilySpec::p(long n) {
    if (n < 2) throw ConstraintViolationError("P family requires n >= 2");
    return FamilySpec(FamilyKind::CubicP, n, 0, 0);
}

FamilySpec FamilySpec::q(long n, long b, long c) {
    if (n < 2) throw ConstraintViolationError("Q family requires n >= 2");
    if (!(0 < b && b <= c))
        throw ConstraintViolationError("Q family requires 0 < b <= c");
    if (b + c != n) throw ConstraintViolationError("Q family requires b + c = n");
    return FamilySpec(FamilyKind::QuarticQ, n, b, c);
}

FamilySpec FamilySpec::r(long n, long c) {
    if (n < 2) throw ConstraintViolationError("R family requires n >= 2");
    if (!(1 <= std::labs(c) && std::labs(c) < n))
        throw ConstraintViolationError("R family requires 1 <= |c| < n");
    return FamilySpec(FamilyKind::QuinticR, n, 0, c);
}

long FamilySpec::b() const {
    if (kind_ != FamilyKind::QuarticQ)
        throw OutOfDomainError("only the quartic family has a parameter b");
    return b_;
}

long FamilySpec::c() const {
    if (kind_ == FamilyKind::CubicP)
        throw OutOfDomainError("the cubic family has no parameter c");
    return c_;
}

std::vector<mpz_class> FamilySpec::coefficients() const {
    switch (kind_) {
        case FamilyKind::CubicP:
            return {1, -(n_ + 1), n_, -n_};
        case FamilyKind::QuarticQ:
            return {1, -n_, 0, -b_, -c_};
        case FamilyKind::QuinticR:
            return {1, -n_, 1, -n_, c_, -c_};
    }
    throw RangeError("corrupt FamilySpec");
}

std::string FamilySpec::name() const {
    std::ostringstream out;
    out << kind_tag(kind_) << '{' << n_;
    if (kind_ == FamilyKind::QuarticQ) out << ',' << b_;
    if (kind_ != FamilyKind::CubicP) out << ',' << c_;
    out << '}';
    return out.str();
}

PisotPtr build(const FamilySpec& spec) {
    // Much of the quintic parameter range fails Pisot certification (a
    // conjugate pair crosses the unit circle); expansions there still run at
    // the dominant root.
    if (spec.kind() == FamilyKind::QuinticR)
        return PisotNumber::make_dominant(spec.coefficients());
    return make_pisot(spec.coefficients());
}

// ---- scan_f1 ----------------------------------------------------------------

F1Report scan_f1(const FamilySpec& spec, long n_max, long cap, int threads) {
    if (n_max < 1) throw RangeError("scan_f1 requires n_max >= 1");
    if (auto path = cache_path(spec, n_max, cap)) {
        std::ifstream in(*path);
        if (in) {
            try {
                return f1_from_json(json::parse(in));
            } catch (const std::exception&) {
                // unreadable cache entry: fall through and recompute
            }
        }
    }

    PisotPtr parent = build(spec);
    F1Report report{spec};
    report.scanned_to = n_max;
    report.cap = cap;

    // Group the integers by exact fractional value; each class is classified
    // once.
    struct ClassData {
        FieldElement value;
        std::vector<mpz_class> members;
        bool finite = false;
    };
    std::vector<ClassData> classes;
    std::unordered_map<FieldElement, size_t, FieldElementHash> class_of;
    std::vector<size_t> class_index(static_cast<size_t>(n_max) + 1, 0);
    for (long N = 1; N <= n_max; ++N) {
        auto [digits, frac] = integer_split(parent, mpz_class(N));
        auto [it, fresh] = class_of.try_emplace(frac, classes.size());
        if (fresh) classes.push_back(ClassData{frac, {}, false});
        classes[it->second].members.emplace_back(N);
        class_index[static_cast<size_t>(N)] = it->second;
    }

    auto classify_range = [&](size_t begin, size_t end) {
        VerdictMemo memo;
        for (size_t i = begin; i < end; ++i) {
            auto verdict = finite_orbit_verdict(classes[i].value, cap, memo);
            if (!verdict.has_value())
                throw RangeError("scan_f1: orbit exceeded cap; raise cap");
            classes[i].finite = *verdict;
        }
    };
    if (threads > 1 && classes.size() > 8) {
        size_t used = std::min<size_t>(static_cast<size_t>(threads), classes.size());
        std::vector<std::thread> pool;
        size_t chunk = (classes.size() + used - 1) / used;
        for (size_t t = 0; t < used; ++t) {
            size_t begin = t * chunk, end = std::min(classes.size(), begin + chunk);
            if (begin < end) pool.emplace_back(classify_range, begin, end);
        }
        for (std::thread& th : pool) th.join();
    } else {
        classify_range(0, classes.size());
    }

    std::vector<bool> finite_at(static_cast<size_t>(n_max) + 1, true);
    for (long N = 1; N <= n_max; ++N)
        finite_at[static_cast<size_t>(N)] = classes[class_index[static_cast<size_t>(N)]].finite;

    for (long N = 1; N <= n_max; ++N) {
        if (finite_at[static_cast<size_t>(N)]) continue;
        OrbitClassification orbit = expand(classes[class_index[static_cast<size_t>(N)]].value, cap);
        NonFiniteEntry entry;
        entry.value = N;
        entry.preperiod = orbit.word.frac_preperiod;
        entry.period = orbit.word.frac_period;
        report.non_finite.push_back(std::move(entry));
        if (N < n_max && finite_at[static_cast<size_t>(N) + 1]) report.gaps = true;
    }

    for (const ClassData& c : classes)
        report.classes.push_back(FractionalClass{c.value.to_string(), c.members, c.finite});

    auto fin = [&](long N) { return finite_at[static_cast<size_t>(N)]; };
    const long n = spec.n();
    if (spec.kind() == FamilyKind::CubicP) {
        if (n_max >= n * n)
            report.residue_facts["n2_finite_iff_n_not_0_mod_3"] =
                fin(n * n) == (n % 3 != 0);
        if (n_max >= n * n + 1) {
            auto [dig_a, frac_a] = integer_split(parent, mpz_class(n * n));
            auto [dig_b, frac_b] = integer_split(parent, mpz_class(n * n + 1));
            report.residue_facts["n2_plus_1_shares_class_of_n2"] = frac_a == frac_b;
        }
        if (n_max >= n * n + 2)
            if (auto want = predicted_n2_plus_2(n))
                report.residue_facts["n2_plus_2_membership"] = fin(n * n + 2) == *want;
        if (n_max >= n * n + 3)
            if (auto want = predicted_n2_plus_3(n))
                report.residue_facts["n2_plus_3_membership"] = fin(n * n + 3) == *want;
        if (n % 3 == 2 && n % 4 == 3 && n_max >= n * n + 2 * n + 3) {
            bool first = !fin(n * n + 2 * n + 3);
            for (long N = 1; first && N < n * n + 2 * n + 3; ++N)
                if (!fin(N)) first = false;
            report.residue_facts["first_nonfinite_is_n2_plus_2n_plus_3"] = first;
        }
        if (n % 3 == 1)
            report.residue_facts["no_nonfinite_below_n_max"] = report.non_finite.empty();
    } else if (spec.kind() == FamilyKind::QuarticQ) {
        if (n_max >= n + 1)
            report.residue_facts["n_plus_1_nonfinite"] = !fin(n + 1);
        long b = spec.b(), c = spec.c();
        if (n >= 2 * b + 1 && 2 * b + 1 - c >= 0 && n_max >= 2 * n + 1)
            report.residue_facts["two_n_plus_1_finite"] = fin(2 * n + 1);
    } else if (spec.c() >= 1 && n_max >= n) {
        report.residue_facts["n_nonfinite"] = !fin(n);
    }

    if (auto path = cache_path(spec, n_max, cap)) {
        std::error_code ec;
        std::filesystem::create_directories(path->parent_path(), ec);
        if (!ec) {
            std::ofstream out(*path);
            if (out) out << f1_to_json(report).dump(2) << '\n';
        }
    }
    return report;
}

// ---- residue_table ----------------------------------------------------------

std::vector<ResidueRow> residue_table(long n_lo, long n_hi, long cap) {
    if (n_lo < 2) throw RangeError("residue_table requires n_lo >= 2");
    std::vector<ResidueRow> rows;
    for (long n = n_lo; n <= n_hi; ++n) {
        PisotPtr parent = build(FamilySpec::p(n));
        VerdictMemo memo;
        auto fin = [&](long N) {
            auto [digits, frac] = integer_split(parent, mpz_class(N));
            auto verdict = finite_orbit_verdict(frac, cap, memo);
            if (!verdict.has_value())
                throw RangeError("residue_table: orbit exceeded cap; raise cap");
            return *verdict;
        };
        ResidueRow row;
        row.n = n;
        row.n2_finite = fin(n * n);
        row.n2_plus_1_finite = fin(n * n + 1);
        row.n2_plus_2_finite = fin(n * n + 2);
        row.n2_plus_3_finite = fin(n * n + 3);

        row.claims["n2_finite_iff_n_not_0_mod_3"] = row.n2_finite == (n % 3 != 0);
        auto [dig_a, frac_a] = integer_split(parent, mpz_class(n * n));
        auto [dig_b, frac_b] = integer_split(parent, mpz_class(n * n + 1));
        row.claims["n2_plus_1_shares_class_of_n2"] = frac_a == frac_b;
        if (auto want = predicted_n2_plus_2(n))
            row.claims["n2_plus_2_membership"] = row.n2_plus_2_finite == *want;
        if (auto want = predicted_n2_plus_3(n))
            row.claims["n2_plus_3_membership"] = row.n2_plus_3_finite == *want;
        if (n % 3 == 2 && n % 4 == 3) {
            row.n2_plus_2n_plus_3_finite = fin(n * n + 2 * n + 3);
            bool first = !*row.n2_plus_2n_plus_3_finite;
            for (long N = 1; first && N < n * n + 2 * n + 3; ++N)
                if (!fin(N)) first = false;
            row.claims["first_nonfinite_is_n2_plus_2n_plus_3"] = first;
        }
        row.all_claims_pass = std::all_of(row.claims.begin(), row.claims.end(),
                                          [](const auto& kv) { return kv.second; });
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---- akiyama_set ------------------------------------------------------------

AkiyamaReport akiyama_set(const PisotPtr& parent, long cap) {
    if (parent->degree() != 3)
        throw WrongDegreeError("the Akiyama set enumeration handles cubic parents only");
    if (!parent->is_pisot())
        throw ComplexEmbeddingUncertifiedError(
            "conjugate bound exceeds 1: the set C is unbounded");

    // One real root and a complex pair is certified by a negative
    // discriminant; two real conjugates would need different bounds.
    const auto& cf = parent->coeffs();  // x^3 + a x^2 + b x + c
    const mpz_class &a_c = cf[1], &b_c = cf[2], &c_c = cf[3];
    mpz_class disc = 18 * a_c * b_c * c_c - 4 * a_c * a_c * a_c * c_c +
                     a_c * a_c * b_c * b_c - 4 * b_c * b_c * b_c - 27 * c_c * c_c;
    if (disc >= 0)
        throw ComplexEmbeddingUncertifiedError(
            "real conjugate pair: complex-embedding bounds do not apply");

    mpq_class width(1, 1);
    for (int i = 0; i < 48; ++i) width /= 10;  // 1e-48
    RationalInterval enc = parent->enclosure(width);
    QInterval beta{enc.lo, enc.hi};
    QInterval beta2 = beta * beta;
    // trace = -a_c = beta + 2 Re(beta'); product of roots = -c_c = beta |beta'|^2
    QInterval re = (qi(mpq_class(-a_c)) - beta) * qi(mpq_class(1, 2));
    QInterval mod2 = qi(mpq_class(-c_c)) * qi_inverse(beta);
    QInterval im2 = mod2 - re * re;
    if (sgn(im2.lo) <= 0)
        throw ComplexEmbeddingUncertifiedError("imaginary part of the conjugate not separated");
    QInterval im = qi_sqrt(im2);
    QInterval mod = qi_sqrt(mod2);
    if (mod.hi >= 1)
        throw ComplexEmbeddingUncertifiedError("conjugate modulus not certified below 1");
    QInterval radius =
        qi(mpq_class(parent->floor_beta())) * qi_inverse(qi(mpq_class(1)) - mod);

    AkiyamaReport report;
    report.radius_lo = radius.lo;
    report.radius_hi = radius.hi;

    // The map (u,v,w) -> (x, Re x', Im x') is linear; a padded box in image
    // space pulled back through the interval inverse bounds the enumeration.
    QInterval m[3][3] = {
        {qi(mpq_class(1)), beta, beta2},
        {qi(mpq_class(1)), re, re * re - im2},
        {qi(mpq_class(0)), im, qi(mpq_class(2)) * re * im},
    };
    QInterval det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                    m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                    m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    QInterval inv_det = qi_inverse(det);
    auto cofactor = [&](int r, int c) {
        int r0 = (r + 1) % 3, r1 = (r + 2) % 3, c0 = (c + 1) % 3, c1 = (c + 2) % 3;
        if (r0 > r1) std::swap(r0, r1);
        if (c0 > c1) std::swap(c0, c1);
        QInterval minor = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        return ((r + c) % 2 == 0) ? minor : qi(mpq_class(0)) - minor;
    };
    mpq_class pad(1, 1000000);
    QInterval target[3] = {
        {mpq_class(0) - pad, mpq_class(1) + pad},
        {mpq_class(0) - (radius.hi + pad), radius.hi + pad},
        {mpq_class(0) - (radius.hi + pad), radius.hi + pad},
    };
    auto coord_range = [&](int i) {
        QInterval acc = qi(mpq_class(0));
        for (int j = 0; j < 3; ++j) acc = acc + cofactor(j, i) * inv_det * target[j];
        return acc;
    };
    QInterval u_range = coord_range(0), v_range = coord_range(1), w_range = coord_range(2);

    auto floor_q = [](const mpq_class& q) {
        mpz_class z;
        mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
        return z.get_si();
    };
    long w_lo = floor_q(w_range.lo), w_hi = floor_q(w_range.hi) + 1;
    long v_lo = floor_q(v_range.lo), v_hi = floor_q(v_range.hi) + 1;
    long u_lo = floor_q(u_range.lo), u_hi = floor_q(u_range.hi) + 1;

    // Double-precision prefilter with generous slop; every acceptance below
    // is decided exactly, so the slop only costs a few spurious candidates.
    const double slop = 1e-3;
    double beta_d = to_double_lo(beta.lo), beta2_d = to_double_lo(beta2.lo);
    double re_d = to_double_lo(re.lo), im_d = to_double_lo(im.lo);
    double re2im2_d = to_double_lo((re * re - im2).lo);
    double radius_d = to_double_hi(radius.hi) + 1e-6;
    double disc_bound = (radius_d + slop) * (radius_d + slop) + slop;

    const mpz_class floor_b(parent->floor_beta());
    FieldElement one = FieldElement::integer(parent, 1);
    FieldElement mod2_exact =
        FieldElement::integer(parent, -c_c) * FieldElement::inv_beta(parent);
    VerdictMemo memo;

    for (long w = w_lo; w <= w_hi; ++w) {
        for (long v = v_lo; v <= v_hi; ++v) {
            double y2 = (static_cast<double>(v) + 2.0 * w * re_d) * im_d;
            if (y2 * y2 > disc_bound) continue;
            double t = v * beta_d + w * beta2_d;
            long first = static_cast<long>(std::floor(-t - slop));
            long last = static_cast<long>(std::ceil(1.0 - t + slop));
            for (long u = std::max(first, u_lo); u <= std::min(last, u_hi); ++u) {
                double y1 = u + v * re_d + w * re2im2_d;
                if (y1 * y1 + y2 * y2 > disc_bound) continue;
                FieldElement x = FieldElement::from_coords(
                    parent, {mpz_class(u), mpz_class(v), mpz_class(w)}, 1);
                if (x.sign() <= 0 || (x - one).sign() >= 0) continue;
                // |x'|^2 = Norm(x)/x;  |x'| <= f/(1-|beta'|) reduces to
                // A <= 2 N |beta'| with A = N (1 + |beta'|^2) - f^2 x,
                // settled by one sign test and one squaring in the field.
                mpz_class norm = cubic_norm(x);
                FieldElement A = (one + mod2_exact).scaled(norm) - x.scaled(floor_b * floor_b);
                bool inside = A.sign() <= 0;
                if (!inside) {
                    FieldElement rhs = mod2_exact.scaled(4 * norm * norm);
                    inside = (A * A - rhs).sign() <= 0;
                }
                if (!inside) continue;
                auto verdict = finite_orbit_verdict(x, cap, memo);
                if (!verdict.has_value())
                    throw RangeError("akiyama_set: orbit exceeded cap; raise cap");
                report.elements.push_back(AkiyamaEntry{x, *verdict});
            }
        }
    }
    for (const AkiyamaEntry& e : report.elements)
        ++(e.finite ? report.finite_count : report.nonfinite_count);
    report.f_holds = report.nonfinite_count == 0;
    return report;
}

// ---- check_suff -------------------------------------------------------------

const char* suff_verdict_name(SuffVerdict v) {
    return v == SuffVerdict::SufficientF1Holds ? "SufficientF1Holds" : "Inconclusive";
}

SuffReport check_suff(const PisotPtr& parent, long scan_to, long cap) {
    DigitWord one = expansion_of_one(parent, cap);
    if (!one.frac_period.empty())
        throw InfiniteExpansionOfOneError(
            "the sufficient condition requires a finite expansion of 1");

    SuffReport report;
    FieldElement alpha = FieldElement::alpha(parent);
    bool all_finite = true;
    FieldElement power = alpha;
    for (int i = 2; i <= parent->degree() - 1; ++i) {
        power *= alpha;
        OrbitClassification orbit = expand(power, cap);
        all_finite = all_finite && orbit.kind == OrbitKind::Finite;
        report.alpha_powers.push_back(std::move(orbit));
    }
    report.verdict = all_finite ? SuffVerdict::SufficientF1Holds : SuffVerdict::Inconclusive;

    report.scanned_to = scan_to;
    VerdictMemo memo;
    for (long N = 1; N <= scan_to; ++N) {
        auto [digits, frac] = integer_split(parent, mpz_class(N));
        auto verdict = finite_orbit_verdict(frac, cap, memo);
        if (!verdict.has_value())
            throw RangeError("check_suff: orbit exceeded cap; raise cap");
        if (!*verdict) {
            report.scan_counterexample = mpz_class(N);
            break;
        }
    }
    return report;
}

// ---- q_family_checks --------------------------------------------------------

QFamilyReport q_family_checks(long n, long b, long c, long cap) {
    FamilySpec spec = FamilySpec::q(n, b, c);
    PisotPtr parent = build(spec);
    QFamilyReport report{spec,
                         expansion_of_one(parent, cap),
                         false,
                         expand(FieldElement::integer(parent, n + 1) -
                                    FieldElement::beta(parent),
                                cap)};

    report.one_matches =
        report.one_word.frac_period.empty() &&
        report.one_word.frac_preperiod == std::vector<long>{n, 0, b, c};

    report.n_plus_1_nonfinite = report.one_minus_alpha.kind == OrbitKind::EventuallyPeriodic;

    FieldElement inv_b = FieldElement::inv_beta(parent);
    FieldElement r1 = inv_b.scaled(c);
    FieldElement r2 = inv_b.scaled(b) + (inv_b * inv_b).scaled(c);
    FieldElement r3 = FieldElement::alpha(parent);
    auto word_is = [&](const FieldElement& x, std::vector<long> want) {
        OrbitClassification orbit = expand(x, cap);
        return orbit.kind == OrbitKind::Finite && orbit.word.frac_preperiod == want;
    };
    report.r_words_match = word_is(r1, {c}) && word_is(r2, {b, c}) && word_is(r3, {0, b, c});

    // Closed-form tail of 1 - alpha: two small cases plus the generic shape.
    std::vector<long> pre, per;
    if (n == 2 && b == 1 && c == 1) {
        pre = {1, 1, 1};
        per = {0, 0, 0, 1, 2};
    } else if (n == 3 && b == 1 && c == 2) {
        pre = {2, 2, 0};
        per = {0, 1, 1, 1, 2};
    } else if (n >= 4 && 2 * b + 1 < n && c >= b + 2) {
        pre = {n - 1, c - 1, 2 * b + 1, 1, 0, c - (b + 2), n - 1, n - c, 2 * b + 1, c};
        per = {c - 1, c - 1, b, b + 1, 0};
    }
    report.display_applies = !pre.empty();
    if (report.display_applies)
        report.one_minus_alpha_matches =
            streams_equal(report.one_minus_alpha.word.frac_preperiod,
                          report.one_minus_alpha.word.frac_period, pre, per);

    std::vector<long> two_alpha_word = {n - 1,     n - (2 * b + 1), 2 * b + 1 - c, 0, n,
                                        c - b - 1, n - c,           0,             b, c};
    report.finite_claim_applies = n >= 2 * b + 1 && 2 * b + 1 - c >= 0;
    FieldElement one_minus_2a = FieldElement::integer(parent, 1 + 2 * n) -
                                FieldElement::beta(parent).scaled(2);
    if (report.finite_claim_applies) {
        report.display_value_identity =
            word_value_finite(parent, two_alpha_word) == one_minus_2a;
        OrbitClassification orbit = expand(one_minus_2a, cap);
        report.one_minus_two_alpha_matches = orbit.kind == OrbitKind::Finite &&
                                             orbit.word.frac_preperiod == two_alpha_word;
        report.two_n_plus_1_finite =
            is_fin(FieldElement::integer(parent, 2 * n + 1), cap).first;
        report.one_minus_two_alpha = std::move(orbit);
    }

    report.ok = report.one_matches && report.n_plus_1_nonfinite && report.r_words_match &&
                (!report.display_applies || report.one_minus_alpha_matches) &&
                (!report.finite_claim_applies ||
                 (report.display_value_identity && report.one_minus_two_alpha_matches &&
                  report.two_n_plus_1_finite));
    return report;
}

// ---- r_family_checks --------------------------------------------------------

RFamilyReport r_family_checks(long n, long c, long cap) {
    FamilySpec spec = FamilySpec::r(n, c);
    PisotPtr parent = build(spec);
    RFamilyReport report{spec, parent->is_pisot()};
    if (c < 0) {
        // The closed-form words assume positive c; nothing further to check.
        report.word_checks_skipped = true;
        report.ok = true;
        return report;
    }

    OrbitClassification orbit = expand(FieldElement::integer(parent, n), cap);
    report.n_nonfinite = orbit.kind == OrbitKind::EventuallyPeriodic;
    report.expected_period = {n - 1, n - c, c - 1};
    report.period_matches = is_rotation(orbit.word.frac_period, report.expected_period);

    std::vector<long> pre = {0, 0, c - 1, n - c - 1, n - c, c - 1};
    report.prefix_matches =
        orbit.word.int_part == std::vector<long>{1, 0} &&
        streams_equal(orbit.word.frac_preperiod, orbit.word.frac_period, pre,
                      report.expected_period);
    report.n_expansion = std::move(orbit);
    report.ok = report.n_nonfinite && report.period_matches && report.prefix_matches;
    return report;
}

// ---- serialization ----------------------------------------------------------

namespace {

json word_to_json(const DigitWord& w) {
    return json{{"int_part", w.int_part},
                {"frac_preperiod", w.frac_preperiod},
                {"frac_period", w.frac_period},
                {"rendered", render(w)}};
}

json orbit_to_json(const OrbitClassification& o) {
    return json{{"kind", orbit_kind_name(o.kind)},
                {"word", word_to_json(o.word)},
                {"steps", o.steps}};
}

json residue_rows_to_json(const std::vector<ResidueRow>& rows) {
    json arr = json::array();
    for (const ResidueRow& r : rows) {
        json j{{"n", r.n},
               {"n2_finite", r.n2_finite},
               {"n2_plus_1_finite", r.n2_plus_1_finite},
               {"n2_plus_2_finite", r.n2_plus_2_finite},
               {"n2_plus_3_finite", r.n2_plus_3_finite},
               {"claims", r.claims},
               {"all_claims_pass", r.all_claims_pass}};
        if (r.n2_plus_2n_plus_3_finite.has_value())
            j["n2_plus_2n_plus_3_finite"] = *r.n2_plus_2n_plus_3_finite;
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace

std::string to_json_string(const F1Report& r, int indent) {
    return f1_to_json(r).dump(indent);
}

std::string to_csv(const F1Report& r) {
    std::ostringstream out;
    out << "family,scanned_to,cap,gaps\n"
        << r.spec.name() << ',' << r.scanned_to << ',' << r.cap << ','
        << (r.gaps ? "true" : "false") << "\n\n";
    out << "non_finite_value,preperiod,period\n";
    auto join = [](const std::vector<long>& v) {
        std::ostringstream s;
        for (size_t i = 0; i < v.size(); ++i) s << (i ? " " : "") << v[i];
        return s.str();
    };
    for (const NonFiniteEntry& e : r.non_finite)
        out << e.value.get_str() << ",\"" << join(e.preperiod) << "\",\"" << join(e.period)
            << "\"\n";
    return out.str();
}

std::string to_json_string(const std::vector<ResidueRow>& rows, int indent) {
    return residue_rows_to_json(rows).dump(indent);
}

std::string to_csv(const std::vector<ResidueRow>& rows) {
    std::ostringstream out;
    out << "n,n2_finite,n2_plus_1_finite,n2_plus_2_finite,n2_plus_3_finite,"
           "n2_plus_2n_plus_3_finite,all_claims_pass\n";
    for (const ResidueRow& r : rows) {
        out << r.n << ',' << r.n2_finite << ',' << r.n2_plus_1_finite << ','
            << r.n2_plus_2_finite << ',' << r.n2_plus_3_finite << ',';
        if (r.n2_plus_2n_plus_3_finite.has_value())
            out << *r.n2_plus_2n_plus_3_finite;
        out << ',' << r.all_claims_pass << '\n';
    }
    return out.str();
}

std::string to_json_string(const AkiyamaReport& r, int indent) {
    json j{{"radius_lo", r.radius_lo.get_str()},
           {"radius_hi", r.radius_hi.get_str()},
           {"finite_count", r.finite_count},
           {"nonfinite_count", r.nonfinite_count},
           {"f_holds", r.f_holds}};
    json els = json::array();
    for (const AkiyamaEntry& e : r.elements)
        els.push_back({{"x", e.x.to_string()}, {"finite", e.finite}});
    j["elements"] = std::move(els);
    return j.dump(indent);
}

std::string to_json_string(const SuffReport& r, int indent) {
    json j{{"verdict", suff_verdict_name(r.verdict)}, {"scanned_to", r.scanned_to}};
    json powers = json::array();
    for (const OrbitClassification& o : r.alpha_powers) powers.push_back(orbit_to_json(o));
    j["alpha_powers"] = std::move(powers);
    if (r.scan_counterexample.has_value())
        j["scan_counterexample"] = r.scan_counterexample->get_str();
    return j.dump(indent);
}

std::string to_json_string(const QFamilyReport& r, int indent) {
    json j{{"spec", spec_to_json(r.spec)},
           {"one_word", word_to_json(r.one_word)},
           {"one_matches", r.one_matches},
           {"one_minus_alpha", orbit_to_json(r.one_minus_alpha)},
           {"n_plus_1_nonfinite", r.n_plus_1_nonfinite},
           {"r_words_match", r.r_words_match},
           {"display_applies", r.display_applies},
           {"one_minus_alpha_matches", r.one_minus_alpha_matches},
           {"finite_claim_applies", r.finite_claim_applies},
           {"display_value_identity", r.display_value_identity},
           {"one_minus_two_alpha_matches", r.one_minus_two_alpha_matches},
           {"two_n_plus_1_finite", r.two_n_plus_1_finite},
           {"ok", r.ok}};
    if (r.one_minus_two_alpha.has_value())
        j["one_minus_two_alpha"] = orbit_to_json(*r.one_minus_two_alpha);
    return j.dump(indent);
}

std::string to_json_string(const RFamilyReport& r, int indent) {
    json j{{"spec", spec_to_json(r.spec)},
           {"is_pisot", r.is_pisot},
           {"word_checks_skipped", r.word_checks_skipped},
           {"n_nonfinite", r.n_nonfinite},
           {"expected_period", r.expected_period},
           {"period_matches", r.period_matches},
           {"prefix_matches", r.prefix_matches},
           {"ok", r.ok}};
    if (r.n_expansion.has_value()) j["n_expansion"] = orbit_to_json(*r.n_expansion);
    return j.dump(indent);
}

}  // namespace betalab
