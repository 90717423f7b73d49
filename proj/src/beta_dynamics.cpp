#include "betalab/beta_dynamics.hpp"

#include <numeric>
#include <sstream>
#include <unordered_map>

#include "betalab/errors.hpp"

namespace betalab {

namespace {

void append_digits(std::ostringstream& out, const std::vector<long>& digits, bool commas,
                   bool& first_of_word) {
    for (long d : digits) {
        if (commas && !first_of_word) out << ',';
        out << d;
        first_of_word = false;
    }
}

bool needs_commas(const DigitWord& w) {
    auto wide = [](const std::vector<long>& v) {
        for (long d : v)
            if (d < 0 || d > 9) return true;
        return false;
    };
    return wide(w.int_part) || wide(w.frac_preperiod) || wide(w.frac_period);
}

// Digit d = floor(beta*x) and remainder beta*x - d, no domain check.
std::pair<long, FieldElement> step_unchecked(const FieldElement& x) {
    FieldElement bx = x.mul_beta();
    mpz_class d = bx.floor();
    if (!d.fits_slong_p()) throw Error("beta_dynamics: digit overflows long");
    FieldElement next = bx - FieldElement::integer(x.parent(), d);
    return {d.get_si(), std::move(next)};
}

struct OrbitResult {
    OrbitKind kind;
    std::vector<long> digits;
    long preperiod_len = 0;  // digits before the period (valid for periodic orbits)
    long steps = 0;
};

// Iterate T from state s, appending digits.  States are only recorded (for
// cycle detection) once digits.size() >= frac_from, so a period never
// straddles the radix point.  `digits` may be preseeded by the caller.
OrbitResult run_orbit(FieldElement s, std::vector<long> digits, long frac_from, long steps,
                      long cap) {
    OrbitResult res;
    res.digits = std::move(digits);
    std::unordered_map<FieldElement, long, FieldElementHash> seen;
    while (true) {
        if (s.is_zero()) {
            res.kind = OrbitKind::Finite;
            break;
        }
        if (static_cast<long>(res.digits.size()) >= frac_from) {
            auto it = seen.find(s);
            if (it != seen.end()) {
                res.kind = OrbitKind::EventuallyPeriodic;
                res.preperiod_len = it->second;
                break;
            }
            seen.emplace(s, static_cast<long>(res.digits.size()));
        }
        if (steps >= cap) {
            res.kind = OrbitKind::Truncated;
            break;
        }
        auto [d, next] = step_unchecked(s);
        res.digits.push_back(d);
        s = std::move(next);
        ++steps;
    }
    res.steps = steps;
    return res;
}

DigitWord split_word(const OrbitResult& orbit, long int_len, long floor_beta) {
    DigitWord w;
    w.alphabet_bound = floor_beta;
    std::vector<long> digits = orbit.digits;
    if (orbit.kind == OrbitKind::Finite) {
        // An orbit hitting zero before the radix point owes trailing zero
        // integer digits (the value was divisible by a power of beta).
        while (static_cast<long>(digits.size()) < int_len) digits.push_back(0);
    }
    long n = static_cast<long>(digits.size());
    long split = std::min(int_len, n);
    w.int_part.assign(digits.begin(), digits.begin() + split);
    if (orbit.kind == OrbitKind::EventuallyPeriodic) {
        w.frac_preperiod.assign(digits.begin() + split, digits.begin() + orbit.preperiod_len);
        w.frac_period.assign(digits.begin() + orbit.preperiod_len, digits.end());
    } else {
        w.frac_preperiod.assign(digits.begin() + split, digits.end());
    }
    return w;
}

// Digit stream of a word ignoring the radix point, extended through the
// period (or by zeros when finite).  Used for admissibility comparisons.
struct Stream {
    std::vector<long> pre;
    std::vector<long> period;  // empty means zeros forever

    long at(long i) const {
        long p = static_cast<long>(pre.size());
        if (i < p) return pre[static_cast<size_t>(i)];
        if (period.empty()) return 0;
        return period[static_cast<size_t>((i - p) % static_cast<long>(period.size()))];
    }
};

Stream word_stream(const DigitWord& w) {
    Stream s;
    s.pre = w.int_part;
    s.pre.insert(s.pre.end(), w.frac_preperiod.begin(), w.frac_preperiod.end());
    s.period = w.frac_period;
    return s;
}

// Strict lexicographic comparison of two eventually periodic streams; they
// agree forever iff they agree on a window covering both preperiods plus a
// common period.
bool stream_less(const Stream& a, long a_from, const Stream& b) {
    long pa = static_cast<long>(a.pre.size());
    long ta = a.period.empty() ? 1 : static_cast<long>(a.period.size());
    long pb = static_cast<long>(b.pre.size());
    long tb = b.period.empty() ? 1 : static_cast<long>(b.period.size());
    long window = std::max(pa - a_from, pb) + ta * tb / std::gcd(ta, tb) + std::max(ta, tb);
    for (long i = 0; i < window; ++i) {
        long da = a.at(a_from + i);
        long db = b.at(i);
        if (da != db) return da < db;
    }
    return false;  // equal streams
}

}  // namespace

const char* orbit_kind_name(OrbitKind k) {
    switch (k) {
        case OrbitKind::Finite: return "Finite";
        case OrbitKind::EventuallyPeriodic: return "EventuallyPeriodic";
        case OrbitKind::Truncated: return "Truncated";
    }
    return "?";
}

std::string render(const DigitWord& w) {
    bool commas = needs_commas(w);
    std::ostringstream out;
    bool first = true;
    append_digits(out, w.int_part, commas, first);
    if (!w.frac_preperiod.empty() || !w.frac_period.empty()) {
        if (!w.int_part.empty()) {
            out << '.';
            first = true;
        }
        append_digits(out, w.frac_preperiod, commas, first);
        if (!w.frac_period.empty()) {
            out << '(';
            first = true;
            append_digits(out, w.frac_period, commas, first);
            out << ")^w";
        }
    }
    return out.str();
}

std::pair<long, FieldElement> t_beta_step(const FieldElement& x) {
    if (x.sign() < 0) throw OutOfDomainError("t_beta_step: x < 0");
    FieldElement one = FieldElement::integer(x.parent(), 1);
    if (!(x < one)) throw OutOfDomainError("t_beta_step: x >= 1");
    return step_unchecked(x);
}

OrbitClassification expand(const FieldElement& x, long cap) {
    if (x.sign() < 0) throw NegativeInputError("expand: x must be nonnegative");
    const PisotPtr& parent = x.parent();
    long fb = parent->floor_beta();
    if (x.is_zero()) {
        DigitWord w;
        w.int_part = {0};
        w.alphabet_bound = fb;
        return {OrbitKind::Finite, std::move(w), 0};
    }

    long scale = 0;
    FieldElement pw = FieldElement::integer(parent, 1);
    while ((pw - x).sign() < 0) {
        pw = pw.mul_beta();
        ++scale;
    }
    FieldElement s = x;
    for (long i = 0; i < scale; ++i) s = s.div_beta();

    std::vector<long> digits;
    long steps = 0;
    if (s == FieldElement::integer(parent, 1)) {
        // Scaled value on the boundary: first digit floor(beta), continue
        // from the fractional part of beta.
        digits.push_back(fb);
        s = FieldElement::alpha(parent);
        ++steps;
    }
    OrbitResult orbit = run_orbit(std::move(s), std::move(digits), scale, steps, cap);
    DigitWord w = split_word(orbit, scale, fb);
    return {orbit.kind, std::move(w), orbit.steps};
}

DigitWord expansion_of_one(const PisotPtr& parent, long cap) {
    std::vector<long> digits = {parent->floor_beta()};
    OrbitResult orbit = run_orbit(FieldElement::alpha(parent), std::move(digits), 0, 1, cap);
    if (orbit.kind == OrbitKind::Truncated)
        throw Error("expansion_of_one: cap exceeded before the orbit resolved");
    return split_word(orbit, 0, parent->floor_beta());
}

bool is_admissible(const DigitWord& w, const PisotPtr& parent) {
    DigitWord one = expansion_of_one(parent);
    Stream bound;
    if (one.frac_period.empty()) {
        // Quasi-greedy expansion of 1: decrement the last digit and repeat.
        bound.period = one.frac_preperiod;
        bound.period.back() -= 1;
    } else {
        bound.pre = one.frac_preperiod;
        bound.period = one.frac_period;
    }

    Stream s = word_stream(w);
    long fixed = static_cast<long>(s.pre.size());
    for (long i = 0; i < fixed; ++i)
        if (!stream_less(s, i, bound)) return false;
    if (!s.period.empty()) {
        // Suffixes inside the period: one start per period position.
        for (long i = 0; i < static_cast<long>(s.period.size()); ++i)
            if (!stream_less(s, fixed + i, bound)) return false;
    }
    return true;
}

std::set<std::string> classify_one_expansion(const PisotPtr& parent) {
    DigitWord one = expansion_of_one(parent);
    if (!one.frac_period.empty())
        throw InfiniteExpansionOfOneError("classify_one_expansion: expansion of 1 is infinite");
    const std::vector<long>& a = one.frac_preperiod;

    long tail = 0;
    for (size_t i = 1; i < a.size(); ++i) tail += a[i];
    bool nonincreasing = true, nondecreasing = true;
    for (size_t i = 1; i < a.size(); ++i) {
        if (a[i] > a[i - 1]) nonincreasing = false;
        if (a[i] < a[i - 1]) nondecreasing = false;
    }
    bool all_positive = true;
    for (long d : a)
        if (d <= 0) all_positive = false;
    bool interior_zero = false;
    for (size_t i = 1; i + 1 < a.size(); ++i)
        if (a[i] == 0) interior_zero = true;

    std::set<std::string> out;
    if (a[0] > 1 + tail) out.insert("Perron");
    if (nonincreasing && all_positive) out.insert("Brauer");
    if (a[0] > tail) out.insert("Hollander");
    if (!nonincreasing && !nondecreasing && interior_zero) out.insert("CE");
    return out;
}

std::pair<bool, OrbitClassification> is_fin(const FieldElement& x, long cap) {
    OrbitClassification c = expand(x, cap);
    return {c.kind == OrbitKind::Finite, std::move(c)};
}

FieldElement word_value(const PisotPtr& parent, const DigitWord& w) {
    FieldElement value = FieldElement::integer(parent, 0);
    for (long d : w.int_part) value = value.mul_beta() + FieldElement::integer(parent, d);
    FieldElement frac = FieldElement::integer(parent, 0);
    for (long d : w.frac_preperiod) frac = frac.mul_beta() + FieldElement::integer(parent, d);
    long p = static_cast<long>(w.frac_preperiod.size());
    for (long i = 0; i < p; ++i) frac = frac.div_beta();
    value += frac;
    if (!w.frac_period.empty()) {
        // Periodic tail as a geometric series: if the block has value B read
        // as an integer word, the tail contributes B / (beta^t - 1) shifted
        // below the preperiod.
        FieldElement block = FieldElement::integer(parent, 0);
        for (long d : w.frac_period) block = block.mul_beta() + FieldElement::integer(parent, d);
        FieldElement denom =
            FieldElement::beta(parent).pow(w.frac_period.size()) - FieldElement::integer(parent, 1);
        FieldElement tail = block / denom;
        for (long i = 0; i < p; ++i) tail = tail.div_beta();
        value += tail;
    }
    return value;
}

}  // namespace betalab
