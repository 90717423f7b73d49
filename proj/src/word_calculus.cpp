#include "betalab/word_calculus.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <utility>

#include "betalab/errors.hpp"

namespace betalab {
namespace {

void require_parent(const PisotPtr& parent, const char* where) {
    if (!parent) throw Error(std::string(where) + ": word has no parent");
}

// Digitwise addition of m*z into work at 1-based position p, growing work to
// cover the span of z.
void add_scaled_at(std::vector<long>& work, long p, long m, const std::vector<long>& z) {
    if (p < 1) throw PositionOutOfRangeError("positional sum requires position >= 1");
    size_t need = static_cast<size_t>(p - 1) + z.size();
    if (work.size() < need) work.resize(need, 0);
    for (size_t i = 0; i < z.size(); ++i) work[static_cast<size_t>(p - 1) + i] += m * z[i];
}

struct ScriptStep {
    bool use_z1;
    long pos;
    long mult;
};

// Apply a fixed list of zero-word summations, recording each one.
std::vector<TraceStep> run_script(const ZeroWords& zw, std::vector<long>& work,
                                  const std::vector<ScriptStep>& script) {
    std::vector<TraceStep> trace;
    for (const ScriptStep& s : script) {
        if (s.mult == 0) continue;
        const std::vector<long>& z = s.use_z1 ? zw.z1.digits : zw.z2.digits;
        add_scaled_at(work, s.pos, s.mult, z);
        trace.push_back({s.use_z1 ? "z1" : "z2", s.pos, s.mult, work});
    }
    return trace;
}

std::vector<long> concat(std::vector<long> a, const std::vector<long>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// Run `script` on `input` padded to the target length and check the result is
// exactly prefix ++ suffix; package as an Unfolding.
Unfolding make_unfolding(const PisotPtr& parent, const std::vector<long>& input,
                         const std::vector<ScriptStep>& script, std::vector<long> prefix,
                         std::vector<long> suffix, const char* who) {
    ZeroWords zw = zero_words(parent);
    std::vector<long> work = input;
    work.resize(prefix.size() + suffix.size(), 0);
    std::vector<TraceStep> trace = run_script(zw, work, script);
    if (work != concat(prefix, suffix))
        throw Error(std::string(who) + ": rewrite script does not reach the target word");
    Unfolding r;
    long split = static_cast<long>(prefix.size());
    r.prefix = WeakWord{parent, 0, std::move(prefix)};
    r.suffix = WeakWord{parent, -split, std::move(suffix)};
    r.trace = std::move(trace);
    return r;
}

// Clear a zero-valued tail (positions > settled, 1-based) by synthetic
// division with z1; the minimal polynomial divides the residual, so the
// division terminates with no remainder.
void clear_residual(const PisotPtr& parent, const ZeroWords& zw, std::vector<long>& work,
                    long settled, std::vector<TraceStep>& trace) {
    long guard = static_cast<long>(work.size()) + 8L * (parent->degree() + 1) + 64;
    for (size_t i = static_cast<size_t>(settled); i < work.size(); ++i) {
        if (work[i] == 0) continue;
        if (--guard < 0) throw Error("normalize: zero-valued tail failed to clear");
        long m = work[i];
        add_scaled_at(work, static_cast<long>(i) + 1, m, zw.z1.digits);
        trace.push_back({"z1", static_cast<long>(i) + 1, m, work});
    }
    for (size_t i = static_cast<size_t>(settled); i < work.size(); ++i)
        if (work[i] != 0) throw Error("normalize: zero-valued tail failed to clear");
}

}  // namespace

FieldElement value(const WeakWord& w) {
    require_parent(w.parent, "value");
    FieldElement acc = FieldElement::integer(w.parent, 0);
    for (long d : w.digits) acc = acc.mul_beta() + FieldElement::integer(w.parent, d);
    if (w.digits.empty()) return acc;
    return acc * FieldElement::beta_power(w.parent, w.offset - static_cast<long>(w.digits.size()));
}

bool is_canonical(const WeakWord& w) {
    require_parent(w.parent, "is_canonical");
    long bound = w.parent->floor_beta();
    for (long d : w.digits)
        if (d < 0 || d > bound) return false;
    DigitWord dw;
    dw.frac_preperiod = w.digits;
    dw.alphabet_bound = bound;
    return is_admissible(dw, w.parent);
}

WeakWord positional_sum(const WeakWord& u, long j, const WeakWord& v) {
    require_parent(u.parent, "positional_sum");
    require_parent(v.parent, "positional_sum");
    if (u.parent != v.parent)
        throw MixedParentsError("positional_sum: operands belong to different fields");
    if (j < 1) throw PositionOutOfRangeError("positional_sum: position must be >= 1");
    WeakWord r{u.parent, u.offset, u.digits};
    add_scaled_at(r.digits, j, 1, v.digits);
    return r;
}

ZeroWords zero_words(const PisotPtr& parent) {
    require_parent(parent, "zero_words");
    ZeroWords zw;
    zw.z1.parent = parent;
    zw.z1.digits.push_back(-1);
    const std::vector<mpz_class>& c = parent->coeffs();
    for (size_t i = 1; i < c.size(); ++i) {
        mpz_class d = -c[i];
        if (!d.fits_slong_p()) throw Error("zero_words: coefficient overflows long");
        zw.z1.digits.push_back(d.get_si());
    }
    DigitWord one = expansion_of_one(parent);
    if (!one.frac_period.empty())
        throw InfiniteExpansionOfOneError("zero_words: the expansion of 1 is not finite");
    zw.z2.parent = parent;
    zw.z2.digits.push_back(-1);
    zw.z2.digits = concat(std::move(zw.z2.digits), concat(one.int_part, one.frac_preperiod));
    return zw;
}

long cubic_family_n(const PisotPtr& parent) {
    require_parent(parent, "cubic_family_n");
    if (parent->degree() != 3)
        throw WrongDegreeError("cubic_family_n: parent polynomial is not cubic");
    mpz_class nz = parent->coeff_low(1);
    if (!nz.fits_slong_p()) throw PreconditionUnmetError("cubic_family_n: n overflows long");
    long n = nz.get_si();
    if (n < 2 || parent->coeff_low(0) != -n || parent->coeff_low(2) != -(n + 1))
        throw PreconditionUnmetError(
            "cubic_family_n: polynomial is not x^3-(n+1)x^2+nx-n with n >= 2");
    return n;
}

WeakWord word_u(const PisotPtr& parent, long k, long j) {
    long n = cubic_family_n(parent);
    return {parent, 0, {n - k, j, -k * n, j * n}};
}

WeakWord word_w(const PisotPtr& parent, long k, long j) {
    long n = cubic_family_n(parent);
    return {parent, 0, {0, n * (k - j + 1) - j, 0, -j * n}};
}

WeakWord word_ww(const PisotPtr& parent, long k, long j) {
    long n = cubic_family_n(parent);
    return {parent, 0, {k, j, k * n - n * n, j * n}};
}

WeakWord word_nu(const PisotPtr& parent, long k, long j) {
    long n = cubic_family_n(parent);
    return {parent, 0, {n - k, j, -k * n - n * n, j * n}};
}

WeakWord omega_word(const PisotPtr& parent, long l, long k, long j) {
    long n = cubic_family_n(parent);
    return {parent, 0, {l * n - k, j + l, -k * n - n * n, (j + l) * n}};
}

FieldElement omega_value(const PisotPtr& parent, long l, long k, long j) {
    require_parent(parent, "omega_value");
    FieldElement a = FieldElement::alpha(parent);
    return FieldElement::integer(parent, l) - a.scaled(k) + a.div_beta().scaled(j) + a * a - a;
}

Unfolding unfold_u(const PisotPtr& parent, long k, long j) {
    long n = cubic_family_n(parent);
    std::vector<ScriptStep> script = {{false, 1, 1},  {false, 2, k},     {false, 3, -j},
                                      {true, 4, -1},  {false, 5, -k},    {false, 6, j + 2}};
    std::vector<long> prefix = {n - k - 1, n - k + j, j + 1, k + 1, k - j - 1, n - j - 2};
    return make_unfolding(parent, word_u(parent, k, j).digits, script, std::move(prefix),
                          word_u(parent, k, j + 2).digits, "unfold_u");
}

Unfolding unfold_w(const PisotPtr& parent, long k, long j) {
    long n = cubic_family_n(parent);
    std::vector<ScriptStep> script = {{false, 1, j - k},
                                      {true, 2, 1},
                                      {false, 3, j + 2},
                                      {false, 4, k - j - 1},
                                      {false, 6, -(j + 2)}};
    std::vector<long> prefix = {k - j, n - j - 1, n - k - 1, n - k + j + 1, j + 2, k + 1};
    return make_unfolding(parent, word_w(parent, k, j).digits, script, std::move(prefix),
                          word_w(parent, k, j + 2).digits, "unfold_w");
}

Unfolding unfold_ww(const PisotPtr& parent, long k, long j) {
    long n = cubic_family_n(parent);
    std::vector<ScriptStep> script = {{true, 1, 1},   {false, 2, n - 1},    {false, 2, 2 - k},
                                      {false, 3, -(j + 1)}, {false, 5, -(n - k)}, {false, 6, j + 2}};
    std::vector<long> prefix;
    long next_j;
    if (k == 1) {
        // The generic prefix would end in the forbidden factor n(n-j-2); two
        // further summations push the suffix one notch deeper instead.
        script.push_back({false, 3, -1});
        script.push_back({false, 6, 1});
        prefix = {0, j + 1, j + 2, 0, n - j - 3, n - j - 3};
        next_j = j + 3;
    } else {
        prefix = {k - 1, j + k, j + 1, n - k + 1, n - j - k - 1, n - j - 2};
        next_j = j + 2;
    }
    return make_unfolding(parent, word_ww(parent, k, j).digits, script, std::move(prefix),
                          word_ww(parent, k, next_j).digits, "unfold_ww");
}

Unfolding unfold_nu0(const PisotPtr& parent, long j) {
    long n = cubic_family_n(parent);
    std::vector<ScriptStep> script = {{false, 1, 1},        {false, 2, n},
                                      {false, 3, -(j + 1)}, {false, 4, -1},
                                      {false, 5, -(n - 1)}, {false, 6, j + 3},
                                      {true, 7, 1}};
    std::vector<long> prefix = {n - 1, j, j + 2, 1, n - j - 2, n - j - 4};
    return make_unfolding(parent, word_nu(parent, 0, j).digits, script, std::move(prefix),
                          word_nu(parent, 0, j + 4).digits, "unfold_nu0");
}

std::pair<WeakWord, std::vector<TraceStep>> terminal_u(const PisotPtr& parent, long k) {
    long n = cubic_family_n(parent);
    ZeroWords zw = zero_words(parent);
    std::vector<long> work = word_u(parent, k, k).digits;
    work.resize(5, 0);
    std::vector<TraceStep> trace = run_script(zw, work, {{true, 2, k}});
    std::vector<long> expect = {n - k, 0, k, 0, k * n};
    if (work != expect) throw Error("terminal_u: rewrite script does not reach the target word");
    return {WeakWord{parent, 0, std::move(work)}, std::move(trace)};
}

WeakWord terminal_w(const PisotPtr& parent, long k) {
    long n = cubic_family_n(parent);
    WeakWord out{parent, -1, {n - k - 1, n - k, 1, k + 1, k - 1, n - 2, n - k, 2, -n * k, 2 * n}};
    if (value(out) != value(word_w(parent, k, k)))
        throw Error("terminal_w: target word does not preserve the value");
    return out;
}

NormalizeOutcome normalize(const WeakWord& w, long cap) {
    require_parent(w.parent, "normalize");
    const PisotPtr& parent = w.parent;
    const FieldElement x = value(w);
    if (x.sign() < 0) throw NegativeInputError("normalize: word value is negative");
    ZeroWords zw = zero_words(parent);
    const long fb = parent->floor_beta();

    NormalizeOutcome out;
    out.word.alphabet_bound = fb;

    long int_len = 0;
    {
        FieldElement pw = FieldElement::integer(parent, 1);
        while ((pw - x).sign() < 0) {
            pw = pw.mul_beta();
            ++int_len;
        }
    }
    const long base = std::max(w.offset, int_len);
    std::vector<long> work(static_cast<size_t>(base - w.offset), 0);
    work.insert(work.end(), w.digits.begin(), w.digits.end());

    // Force position p of the working word to the canonical digit d by adding
    // the right multiple of z2 (whose leading letter is -1).
    auto emit_fix = [&](long p, long d) {
        if (work.size() < static_cast<size_t>(p)) work.resize(static_cast<size_t>(p), 0);
        long m = work[static_cast<size_t>(p - 1)] - d;
        if (m != 0) {
            add_scaled_at(work, p, m, zw.z2.digits);
            out.trace.push_back({"z2", p, m, work});
        }
    };

    if (x.is_zero()) {
        out.kind = OrbitKind::Finite;
        out.word.int_part = {0};
        clear_residual(parent, zw, work, 0, out.trace);
        return out;
    }

    std::vector<long> emitted;
    // Positions left of the leading integer digit carry zeros.
    for (long p = 1; p <= base - int_len; ++p) {
        emit_fix(p, 0);
        emitted.push_back(0);
    }

    FieldElement s = x;
    for (long i = 0; i < int_len; ++i) s = s.div_beta();
    if (s == FieldElement::integer(parent, 1)) {
        // Scaled value on the boundary: digit floor(beta), continue from the
        // fractional part of beta.
        emit_fix(static_cast<long>(emitted.size()) + 1, fb);
        emitted.push_back(fb);
        s = FieldElement::alpha(parent);
        ++out.steps;
    }

    long preperiod_len = 0;
    std::unordered_map<FieldElement, long, FieldElementHash> seen;
    while (true) {
        if (s.is_zero()) {
            out.kind = OrbitKind::Finite;
            break;
        }
        if (static_cast<long>(emitted.size()) >= base) {
            auto it = seen.find(s);
            if (it != seen.end()) {
                out.kind = OrbitKind::EventuallyPeriodic;
                preperiod_len = it->second;
                break;
            }
            seen.emplace(s, static_cast<long>(emitted.size()));
        }
        if (out.steps >= cap) {
            out.kind = OrbitKind::Truncated;
            break;
        }
        FieldElement bs = s.mul_beta();
        mpz_class dz = bs.floor();
        if (!dz.fits_slong_p()) throw Error("normalize: digit overflows long");
        long d = dz.get_si();
        s = bs - FieldElement::integer(parent, dz);
        emit_fix(static_cast<long>(emitted.size()) + 1, d);
        emitted.push_back(d);
        ++out.steps;
    }

    long settled = static_cast<long>(emitted.size());
    if (out.kind == OrbitKind::Finite) {
        // An orbit hitting zero before the radix point owes trailing zero
        // integer digits; the tail cleanup below zeroes the working word too.
        while (static_cast<long>(emitted.size()) < base) emitted.push_back(0);
        clear_residual(parent, zw, work, settled, out.trace);
    }

    long split = std::min(base, static_cast<long>(emitted.size()));
    out.word.int_part.assign(emitted.begin(), emitted.begin() + split);
    while (!out.word.int_part.empty() && out.word.int_part.front() == 0)
        out.word.int_part.erase(out.word.int_part.begin());
    if (out.kind == OrbitKind::EventuallyPeriodic) {
        out.word.frac_preperiod.assign(emitted.begin() + split, emitted.begin() + preperiod_len);
        out.word.frac_period.assign(emitted.begin() + preperiod_len, emitted.end());
    } else {
        out.word.frac_preperiod.assign(emitted.begin() + split, emitted.end());
    }
    return out;
}

std::optional<std::vector<long>> detect_periodic_suffix(const WeakWord& w, long cap) {
    NormalizeOutcome out = normalize(w, cap);
    switch (out.kind) {
        case OrbitKind::Finite:
            return std::nullopt;
        case OrbitKind::EventuallyPeriodic:
            return out.word.frac_period;
        default:
            throw Error("detect_periodic_suffix: cap exceeded before the expansion resolved");
    }
}

SuccessorStep successor_fractional(const PisotPtr& parent, const std::vector<long>& int_part,
                                   const WeakWord& w) {
    long n = cubic_family_n(parent);
    require_parent(w.parent, "successor_fractional");
    if (w.parent != parent)
        throw MixedParentsError("successor_fractional: word belongs to a different field");
    if (w.offset > 0)
        throw PreconditionUnmetError(
            "successor_fractional: fractional word extends left of the radix point");
    const FieldElement x = value(w);
    if (x.sign() < 0) throw NegativeInputError("successor_fractional: fractional value < 0");
    if (x >= FieldElement::integer(parent, 1))
        throw PreconditionUnmetError("successor_fractional: fractional value >= 1");

    auto tail = [&](size_t back) -> long {
        return back < int_part.size() ? int_part[int_part.size() - 1 - back] : 0;
    };
    long p0 = tail(0), p1 = tail(1), p2 = tail(2), p3 = tail(3);

    // First digits of the canonical expansion of the fractional part, used by
    // the guards that look right of the radix point.
    OrbitClassification oc = expand(x);
    auto u_at = [&](size_t i) -> long {  // 1-based fractional digit
        const std::vector<long>& pre = oc.word.frac_preperiod;
        const std::vector<long>& per = oc.word.frac_period;
        size_t idx = i - 1;
        if (idx < pre.size()) return pre[idx];
        if (per.empty()) return 0;
        return per[(idx - pre.size()) % per.size()];
    };
    std::vector<long> u123 = {u_at(1), u_at(2), u_at(3)};

    std::string label;
    std::vector<long> addend;
    if (p3 == n && p2 == 1 && p1 == 0 && p0 == n - 1) {
        label = "e";
    } else if (p2 == n && p1 == 1 && p0 == 0) {
        label = "d";
        addend = {0, 1, 0, n};
    } else if (p1 == n && p0 == 1) {
        label = "c'";
        addend = {-1, 1, -n, n};
    } else if (p1 == n && p0 == 0 && !(std::vector<long>{u123[0], u123[1]} < std::vector<long>{0, n})) {
        label = "c";
        addend = {-1, 1, -n, n};
    } else if (p0 == n - 1 && std::vector<long>{p3, p2, p1} < std::vector<long>{n, 1, 0} &&
               !(u123 < std::vector<long>{1, 0, n})) {
        label = "b";
        addend = {-1, 0, -n, 0};
    } else if (p0 == n) {
        label = "a";
        addend = {n - 1, 1, -n, n};
    } else {
        throw NoForbiddenWordError(
            "successor_fractional: adding 1 to the last integer digit is admissible");
    }

    WeakWord r{parent, 0, std::vector<long>(static_cast<size_t>(-w.offset), 0)};
    r.digits.insert(r.digits.end(), w.digits.begin(), w.digits.end());
    if (!addend.empty()) add_scaled_at(r.digits, 1, 1, addend);
    return {std::move(label), std::move(r)};
}

WeakWord periodic_word_wkj(const PisotPtr& parent, long k, long j) {
    long n = cubic_family_n(parent);
    if (k <= 0 || j <= 0 || k % 2 == 0 || j % 2 == 0 || k >= n - 1 || k + j - 1 >= n)
        throw RangeError("periodic_word_wkj: need odd k, j > 0 with k < n-1 and k+j-1 < n");
    auto block = [&](long s, long t) -> std::vector<long> {
        return {n - s, t, s + t, s - 1, n - t - 1, n - s - t};
    };
    std::vector<long> digits;
    for (long s = k; s >= 3; s -= 2) digits = concat(std::move(digits), block(s, j + k - s));
    digits = concat(std::move(digits), {n - 1, j + k - 1, j + k, 0, n - j - k});
    for (long s = j + k - 1; s >= k + 2; s -= 2) digits = concat(std::move(digits), block(s, j + k - s));
    return {parent, 0, std::move(digits)};
}

}  // namespace betalab
