#include "betalab/pisot.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <utility>

namespace betalab {

namespace {

// Dense univariate polynomials over Q, constant term first.
using QPoly = std::vector<mpq_class>;

int degree_of(const QPoly& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (p[static_cast<size_t>(i)] != 0) return i;
    return -1;
}

void trim(QPoly& p) { p.resize(static_cast<size_t>(degree_of(p) + 1)); }

mpq_class eval_at(const QPoly& p, const mpq_class& x) {
    mpq_class acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

QPoly derivative(const QPoly& p) {
    QPoly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(mpq_class(static_cast<long>(i)) * p[i]);
    return d;
}

// Remainder of a by b, b nonzero.
QPoly remainder_of(QPoly a, const QPoly& b) {
    int db = degree_of(b);
    const mpq_class& lead_b = b[static_cast<size_t>(db)];
    int da = degree_of(a);
    while (da >= db) {
        mpq_class f = a[static_cast<size_t>(da)] / lead_b;
        for (int i = 0; i <= db; ++i)
            a[static_cast<size_t>(da - db + i)] -= f * b[static_cast<size_t>(i)];
        a[static_cast<size_t>(da)] = 0;
        da = degree_of(a);
    }
    trim(a);
    return a;
}

std::vector<QPoly> sturm_chain(const QPoly& p) {
    std::vector<QPoly> chain;
    chain.push_back(p);
    QPoly d = derivative(p);
    trim(d);
    if (degree_of(d) < 0) return chain;
    chain.push_back(d);
    while (true) {
        QPoly r = remainder_of(chain[chain.size() - 2], chain.back());
        if (degree_of(r) < 0) break;
        for (auto& c : r) c = -c;
        chain.push_back(std::move(r));
    }
    return chain;
}

int sign_variations(const std::vector<QPoly>& chain, const mpq_class& x) {
    int vars = 0;
    int prev = 0;
    for (const auto& p : chain) {
        int s = sgn(eval_at(p, x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++vars;
        prev = s;
    }
    return vars;
}

// Number of distinct real roots in (a, b].
int count_roots(const std::vector<QPoly>& chain, const mpq_class& a, const mpq_class& b) {
    return sign_variations(chain, a) - sign_variations(chain, b);
}

// ---- rational interval arithmetic --------------------------------------

struct Iv {
    mpq_class lo;
    mpq_class hi;
};

Iv iv_const(const mpq_class& c) { return {c, c}; }

Iv iv_add(const Iv& a, const Iv& b) { return {a.lo + b.lo, a.hi + b.hi}; }

Iv iv_sub(const Iv& a, const Iv& b) { return {a.lo - b.hi, a.hi - b.lo}; }

Iv iv_mul(const Iv& a, const Iv& b) {
    mpq_class p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4))};
}

// Multiply by a single rational of either sign.
Iv iv_scale(const Iv& a, const mpq_class& k) {
    if (k >= 0) return {a.lo * k, a.hi * k};
    return {a.hi * k, a.lo * k};
}

// Largest square of a coordinate over the interval.
mpq_class iv_max_sq(const Iv& a) {
    mpq_class l = a.lo * a.lo, h = a.hi * a.hi;
    return l > h ? l : h;
}

// Axis-aligned rectangle in the complex plane.
struct Box {
    Iv re;
    Iv im;
};

Box box_add_real(const Box& a, const Iv& c) { return {iv_add(a.re, c), a.im}; }

// Enclosure of q(x + iy) at a single point, where q has real interval
// coefficients listed constant term first.
Box point_horner(const std::vector<Iv>& q, const mpq_class& x, const mpq_class& y) {
    Box acc{iv_const(0), iv_const(0)};
    for (auto it = q.rbegin(); it != q.rend(); ++it) {
        Iv re = iv_sub(iv_scale(acc.re, x), iv_scale(acc.im, y));
        Iv im = iv_add(iv_scale(acc.re, y), iv_scale(acc.im, x));
        acc = box_add_real(Box{re, im}, *it);
    }
    return acc;
}

// Squared distance from 0 to the rectangle, 0 when the rectangle contains 0.
mpq_class box_min_sq(const Box& b) {
    auto dist = [](const Iv& v) -> mpq_class {
        if (v.lo <= 0 && 0 <= v.hi) return mpq_class(0);
        mpq_class a = abs(v.lo), c = abs(v.hi);
        return a < c ? a : c;
    };
    mpq_class dr = dist(b.re), di = dist(b.im);
    return dr * dr + di * di;
}

// Smallest rational u (on a fixed grid) with u*u >= s, s >= 0.
mpq_class rational_sqrt_upper(const mpq_class& s) {
    const mpz_class scale = mpz_class(10) * 1000000 * 1000000;  // 10^13
    mpq_class scaled = s * scale * scale;
    mpz_class t;
    mpz_cdiv_q(t.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), t.get_mpz_t());
    if (r * r < t) r += 1;
    return mpq_class(r, scale);
}

void bisect_once(const QPoly& p, RationalInterval& iv) {
    if (iv.lo == iv.hi) return;
    mpq_class mid = iv.mid();
    int s = sgn(eval_at(p, mid));
    if (s == 0) {
        iv.lo = mid;
        iv.hi = mid;
    } else if (s < 0) {
        iv.lo = mid;
    } else {
        iv.hi = mid;
    }
}

struct ConjugateSurvey {
    mpq_class bound;  // certified upper bound on every conjugate modulus
    bool below_one;   // all conjugates certified below 1 - 1e-6
};

// Survey all roots of p other than the one enclosed by beta_iv. Works on the
// polynomial deflated by the enclosed root, so multiplicities and extra real
// roots are all covered by the same sweep.
ConjugateSurvey survey_conjugates(const QPoly& p, const RationalInterval& beta_iv,
                                  const mpq_class& cauchy_bound, const std::string& what) {
    const mpq_class kRhoMax(999999, 1000000);         // 1 - 1e-6
    const mpq_class kRhoMaxSq = kRhoMax * kRhoMax;
    const mpq_class kWidthFloor(1, 1000000000);       // 1e-9
    const mpq_class kTightWidth(1, 64);               // keep the reported bound close

    int d = degree_of(p);
    if (d <= 1) return {mpq_class(0), true};

    // Work with a dyadic beta enclosure of modest precision so rational
    // arithmetic below stays cheap; round outward to denominator 2^48.
    mpz_class snap = mpz_class(1) << 48;
    mpz_class lo_n, hi_n;
    {
        mpq_class l = beta_iv.lo * snap, h = beta_iv.hi * snap;
        mpz_fdiv_q(lo_n.get_mpz_t(), l.get_num().get_mpz_t(), l.get_den().get_mpz_t());
        mpz_cdiv_q(hi_n.get_mpz_t(), h.get_num().get_mpz_t(), h.get_den().get_mpz_t());
    }
    Iv beta{mpq_class(lo_n, snap), mpq_class(hi_n, snap)};

    // Synthetic division by (x - beta) with beta as an interval.
    std::vector<Iv> q(static_cast<size_t>(d));
    q[static_cast<size_t>(d - 1)] = iv_const(p[static_cast<size_t>(d)]);
    for (int i = d - 1; i >= 1; --i)
        q[static_cast<size_t>(i - 1)] =
            iv_add(iv_const(p[static_cast<size_t>(i)]), iv_mul(beta, q[static_cast<size_t>(i)]));

    // The deflated polynomial usually has far smaller coefficients than p,
    // which shrinks the region that needs subdividing.
    mpq_class qbound = 0;
    for (int i = 0; i < d - 1; ++i) {
        mpq_class m = std::max(abs(q[static_cast<size_t>(i)].lo),
                               abs(q[static_cast<size_t>(i)].hi));
        if (m > qbound) qbound = m;
    }
    qbound += 1;
    if (cauchy_bound < qbound) qbound = cauchy_bound;
    mpz_class box_r;
    mpz_cdiv_q(box_r.get_mpz_t(), qbound.get_num().get_mpz_t(), qbound.get_den().get_mpz_t());
    mpq_class R(box_r);

    // Subdivide the upper half square; roots come in conjugate pairs. A box
    // is excluded via the centered form |q(center)| > L * radius with L a
    // Lipschitz bound for q on the box.
    std::deque<Box> work;
    work.push_back(Box{{-R, R}, {mpq_class(0), R}});
    ConjugateSurvey out{mpq_class(0), true};
    mpq_class max_sq = 0;
    long budget = 400000;

    while (!work.empty()) {
        if (--budget < 0)
            throw ComplexEmbeddingUncertifiedError(
                "PisotNumber::make: subdivision budget exhausted for " + what);
        Box b = std::move(work.front());
        work.pop_front();

        mpq_class half_w = (b.re.hi - b.re.lo) / 2;
        mpq_class half_h = (b.im.hi - b.im.lo) / 2;
        mpq_class cx = b.re.lo + half_w;
        mpq_class cy = b.im.lo + half_h;

        // sup |z| over the box, slightly loose: |re| + |im| at the far corner
        mpq_class zmax = std::max(abs(b.re.lo), abs(b.re.hi)) + b.im.hi;
        // L >= sup |q'(z)| over the box
        mpq_class L = 0;
        mpq_class zpow = 1;
        for (int i = 1; i < d; ++i) {
            mpq_class ci = std::max(abs(q[static_cast<size_t>(i)].lo),
                                    abs(q[static_cast<size_t>(i)].hi));
            L += i * ci * zpow;
            zpow *= zmax;
        }
        mpq_class radius = half_w + half_h;  // >= half diagonal
        Box val = point_horner(q, cx, cy);
        if (box_min_sq(val) > (L * radius) * (L * radius)) continue;

        mpq_class m_sq = iv_max_sq(b.re) + iv_max_sq(b.im);
        bool narrow = half_w <= kTightWidth && half_h <= kTightWidth;
        if (m_sq <= kRhoMaxSq && narrow) {
            if (m_sq > max_sq) max_sq = m_sq;
            continue;
        }
        if (b.re.hi - b.re.lo <= kWidthFloor && b.im.hi - b.im.lo <= kWidthFloor) {
            // Cannot push this box below the Pisot threshold; record and move on.
            if (m_sq > max_sq) max_sq = m_sq;
            out.below_one = false;
            continue;
        }

        work.push_back(Box{{b.re.lo, cx}, {b.im.lo, cy}});
        work.push_back(Box{{cx, b.re.hi}, {b.im.lo, cy}});
        work.push_back(Box{{b.re.lo, cx}, {cy, b.im.hi}});
        work.push_back(Box{{cx, b.re.hi}, {cy, b.im.hi}});
    }
    out.bound = rational_sqrt_upper(max_sq);
    return out;
}

}  // namespace

PisotPtr PisotNumber::make(std::vector<mpz_class> coeffs) {
    PisotPtr p = make_dominant(std::move(coeffs));
    if (!p->is_pisot())
        throw NotPisotError("PisotNumber::make: conjugate of " + p->label() +
                            " not certified below 1");
    return p;
}

PisotPtr PisotNumber::make_dominant(std::vector<mpz_class> coeffs) {
    if (coeffs.size() < 3)
        throw DegreeTooLowError("PisotNumber::make: degree must be at least 2");
    if (coeffs.front() != 1)
        throw ConstraintViolationError("PisotNumber::make: polynomial must be monic");

    int d = static_cast<int>(coeffs.size()) - 1;
    QPoly p(static_cast<size_t>(d + 1));
    for (int i = 0; i <= d; ++i)
        p[static_cast<size_t>(i)] = mpq_class(coeffs[static_cast<size_t>(d - i)]);

    mpz_class max_abs = 0;
    for (int i = 0; i < d; ++i) {
        mpz_class a = abs(coeffs[static_cast<size_t>(i + 1)]);
        if (a > max_abs) max_abs = a;
    }
    mpq_class bound = mpq_class(1 + max_abs);  // strict bound on all root moduli

    // Peel off roots at 1 so the Sturm endpoint is clean; they reappear in
    // certification as conjugates of modulus 1 and force rejection there.
    QPoly iso = p;
    while (degree_of(iso) >= 1 && eval_at(iso, 1) == 0) {
        QPoly next(iso.size() - 1);
        mpq_class carry = iso[iso.size() - 1];
        for (int i = static_cast<int>(iso.size()) - 2; i >= 0; --i) {
            next[static_cast<size_t>(i)] = carry;
            carry = iso[static_cast<size_t>(i)] + carry;
        }
        iso = std::move(next);
    }
    if (degree_of(iso) < 1)
        throw NoDominantRealRootError("PisotNumber::make: no root greater than 1");

    auto chain = sturm_chain(iso);
    if (count_roots(chain, 1, bound) != 1)
        throw NoDominantRealRootError(
            "PisotNumber::make: expected exactly one real root greater than 1");

    // Bracket with iso negative on the left, positive on the right.
    RationalInterval enc;
    bool bracketed = false;
    if (sgn(eval_at(iso, 1)) < 0) {
        enc = {mpq_class(1), bound};
        bracketed = true;
    } else {
        mpq_class step = (bound - 1) / 2;
        mpq_class lo = 1 + step;
        for (int k = 0; k < 300 && !bracketed; ++k) {
            int s = sgn(eval_at(iso, lo));
            if (s == 0) {
                enc = {lo, lo};  // the root is this exact rational
                bracketed = true;
            } else if (s < 0 && count_roots(chain, lo, bound) == 1) {
                enc = {lo, bound};
                bracketed = true;
            } else {
                step /= 2;
                lo = 1 + step;
            }
        }
        if (!bracketed)
            throw NoDominantRealRootError(
                "PisotNumber::make: dominant root has even multiplicity");
    }

    mpq_class target(1, 1);
    target >>= 100;  // 2^-100
    while (enc.width() > target) bisect_once(iso, enc);

    // The enclosure is far narrower than 1, so the floors of its endpoints
    // differ by at most one; a strict sign test settles the straddling case,
    // which occurs exactly when the root is the integer fh.
    mpz_class fl, fh;
    mpz_fdiv_q(fl.get_mpz_t(), enc.lo.get_num().get_mpz_t(), enc.lo.get_den().get_mpz_t());
    mpz_fdiv_q(fh.get_mpz_t(), enc.hi.get_num().get_mpz_t(), enc.hi.get_den().get_mpz_t());
    mpz_class floor_val = fl;
    if (fl != fh) {
        int s = sgn(eval_at(iso, mpq_class(fh)));
        if (s == 0) {
            enc.lo = fh;
            enc.hi = fh;
            floor_val = fh;
        } else if (s < 0) {
            floor_val = fh;  // the root lies just above the integer
        }
    }
    if (!floor_val.fits_slong_p())
        throw RangeError("PisotNumber::make: floor does not fit a long");

    auto holder = std::shared_ptr<PisotNumber>(new PisotNumber());
    holder->degree_ = d;
    holder->coeffs_ = coeffs;
    holder->low_.assign(coeffs.rbegin(), coeffs.rend());
    holder->floor_beta_ = floor_val.get_si();
    holder->enclosure_ = enc;
    ConjugateSurvey survey = survey_conjugates(p, enc, bound, holder->label());
    holder->conjugate_bound_ = survey.bound;
    holder->is_pisot_ = survey.below_one;
    return holder;
}

RationalInterval PisotNumber::enclosure(const mpq_class& max_width) const {
    std::lock_guard<std::mutex> lock(mutex_);
    while (enclosure_.width() > max_width) refine_enclosure_locked();
    return enclosure_;
}

void PisotNumber::refine_enclosure_locked() const {
    QPoly p(static_cast<size_t>(degree_ + 1));
    for (int i = 0; i <= degree_; ++i) p[static_cast<size_t>(i)] = mpq_class(low_[static_cast<size_t>(i)]);
    // Drop factors of (x - 1); the cached bracket never contains 1.
    while (degree_of(p) >= 1 && eval_at(p, 1) == 0) {
        QPoly next(p.size() - 1);
        mpq_class carry = p[p.size() - 1];
        for (int i = static_cast<int>(p.size()) - 2; i >= 0; --i) {
            next[static_cast<size_t>(i)] = carry;
            carry = p[static_cast<size_t>(i)] + carry;
        }
        p = std::move(next);
    }
    bisect_once(p, enclosure_);
}

int PisotNumber::sign_of_value(const std::vector<mpz_class>& num) const {
    bool all_zero = true;
    for (const auto& c : num)
        if (c != 0) { all_zero = false; break; }
    if (all_zero) return 0;

    // Exact zero test first: nonzero values of a polynomial of degree < d can
    // still vanish at beta when the defining polynomial is reducible.
    {
        QPoly a(num.size());
        for (size_t i = 0; i < num.size(); ++i) a[i] = mpq_class(num[i]);
        trim(a);
        QPoly b(static_cast<size_t>(degree_ + 1));
        for (int i = 0; i <= degree_; ++i)
            b[static_cast<size_t>(i)] = mpq_class(low_[static_cast<size_t>(i)]);
        while (degree_of(b) >= 1 && degree_of(a) >= 1) {
            QPoly r = remainder_of(b, a);
            b = std::move(a);
            a = std::move(r);
        }
        if (degree_of(a) < 0 && degree_of(b) >= 1) {
            // b = gcd; beta is a root of it iff the value is exactly zero.
            auto g_chain = sturm_chain(b);
            RationalInterval iv = enclosure(mpq_class(1, 1) >> 100);
            if (eval_at(b, iv.lo) == 0 || eval_at(b, iv.hi) == 0 ||
                count_roots(g_chain, iv.lo, iv.hi) > 0)
                return 0;
        }
    }

    mpq_class width = mpq_class(1, 1) >> 100;
    for (int round = 0; round < 4000; ++round) {
        RationalInterval iv = enclosure(width);
        Iv x{iv.lo, iv.hi};
        Iv acc = iv_const(0);
        for (auto it = num.rbegin(); it != num.rend(); ++it)
            acc = iv_add(iv_mul(acc, x), iv_const(mpq_class(*it)));
        if (acc.lo > 0) return 1;
        if (acc.hi < 0) return -1;
        width >>= 16;
    }
    throw Error("PisotNumber::sign_of_value: enclosure refinement did not separate the sign");
}

mpz_class PisotNumber::floor_of_quotient(const std::vector<mpz_class>& num,
                                         const mpz_class& den) const {
    if (den <= 0) throw Error("PisotNumber::floor_of_quotient: denominator must be positive");
    mpq_class width = mpq_class(1, 1) >> 100;
    for (int round = 0; round < 64; ++round) {
        RationalInterval iv = enclosure(width);
        Iv x{iv.lo, iv.hi};
        Iv acc = iv_const(0);
        for (auto it = num.rbegin(); it != num.rend(); ++it)
            acc = iv_add(iv_mul(acc, x), iv_const(mpq_class(*it)));
        mpq_class qlo = acc.lo / den, qhi = acc.hi / den;
        mpz_class fl, fh;
        mpz_fdiv_q(fl.get_mpz_t(), qlo.get_num().get_mpz_t(), qlo.get_den().get_mpz_t());
        mpz_fdiv_q(fh.get_mpz_t(), qhi.get_num().get_mpz_t(), qhi.get_den().get_mpz_t());
        if (fl == fh) return fl;
        if (fh - fl == 1) {
            // The quotient may equal the integer fh exactly; settle by sign.
            std::vector<mpz_class> shifted = num;
            if (shifted.empty()) shifted.push_back(0);
            shifted[0] -= fh * den;
            int s = sign_of_value(shifted);
            return s >= 0 ? fh : fl;
        }
        width >>= 16;
    }
    throw Error("PisotNumber::floor_of_quotient: enclosure refinement did not settle the floor");
}

std::string PisotNumber::label() const {
    std::ostringstream out;
    for (int i = 0; i <= degree_; ++i) {
        const mpz_class& c = coeffs_[static_cast<size_t>(i)];
        if (c == 0) continue;
        int pw = degree_ - i;
        if (out.tellp() == std::streampos(0)) {
            if (c == -1 && pw > 0) out << "-";
            else if (!(c == 1 && pw > 0)) out << c.get_str();
        } else {
            out << (c > 0 ? "+" : "-");
            mpz_class a = abs(c);
            if (!(a == 1 && pw > 0)) out << a.get_str();
        }
        if (pw > 1) out << "x^" << pw;
        else if (pw == 1) out << "x";
    }
    return out.str();
}

PisotPtr make_pisot(const std::vector<mpz_class>& coeffs) { return PisotNumber::make(coeffs); }

}  // namespace betalab
