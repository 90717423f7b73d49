#include "betalab/lattice_tau.hpp"

#include <algorithm>
#include <map>

#include "betalab/errors.hpp"
#include "betalab/word_calculus.hpp"

namespace betalab {

namespace {

constexpr LatticePoint kOrigin{0, 0, 0};

long norm_kj(const LatticePoint& p) { return std::max(std::labs(p.k), std::labs(p.j)); }

bool is_rotation(const std::vector<long>& a, const std::vector<long>& b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    std::vector<long> aa = a;
    aa.insert(aa.end(), a.begin(), a.end());
    for (size_t i = 0; i < a.size(); ++i)
        if (std::equal(b.begin(), b.end(), aa.begin() + i)) return true;
    return false;
}

}  // namespace

TauContext::TauContext(PisotPtr parent)
    : parent_(std::move(parent)),
      n_(cubic_family_n(parent_)),
      alpha_(FieldElement::alpha(parent_)),
      alpha_over_beta_(FieldElement::alpha(parent_).div_beta()) {}

FieldElement TauContext::f(const LatticePoint& p) const {
    return FieldElement::integer(parent_, p.l) - alpha_.scaled(p.k) +
           alpha_over_beta_.scaled(p.j);
}

bool TauContext::in_u(const LatticePoint& p) const {
    FieldElement v = f(p);
    return v.sign() >= 0 && (v - FieldElement::integer(parent_, 1)).sign() < 0;
}

bool TauContext::in_u_star(const LatticePoint& p) const { return p != kOrigin && in_u(p); }

LatticePoint TauContext::canonical_point(long k, long j) const {
    if (k == 0 && j == 0) return kOrigin;
    FieldElement t = alpha_.scaled(k) - alpha_over_beta_.scaled(j);
    return LatticePoint{1 + t.floor().get_si(), k, j};
}

LatticePoint TauContext::apply_g(const LatticePoint& p) const {
    return {n_ * p.l - p.k, -p.l + p.k - p.j, p.k};
}

LatticePoint TauContext::apply_h(const LatticePoint& p) const {
    return {p.l + p.j, n_ * p.j, -p.l - n_ * p.k + (n_ - 1) * p.j};
}

std::array<long, 4> TauContext::g_char_poly() const {
    const long g[3][3] = {{n_, -1, 0}, {-1, 1, -1}, {0, 1, 0}};
    auto minor2 = [&](int r1, int r2, int c1, int c2) {
        return g[r1][c1] * g[r2][c2] - g[r1][c2] * g[r2][c1];
    };
    long trace = g[0][0] + g[1][1] + g[2][2];
    long minors = minor2(1, 2, 1, 2) + minor2(0, 2, 0, 2) + minor2(0, 1, 0, 1);
    long det = g[0][0] * minor2(1, 2, 1, 2) - g[0][1] * minor2(1, 2, 0, 2) +
               g[0][2] * minor2(1, 2, 0, 1);
    return {1, -trace, minors, -det};
}

bool TauContext::eigen_identities() const {
    const LatticePoint basis[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (const LatticePoint& e : basis) {
        if (f(apply_g(e)) != f(e).mul_beta()) return false;
        if (f(apply_h(e)) != f(e).scaled(n_).div_beta()) return false;
    }
    return true;
}

long TauContext::digit_at(const LatticePoint& p) const {
    return f(p).mul_beta().floor().get_si();
}

LatticePoint TauContext::tau(const LatticePoint& p) const {
    if (!in_u(p)) throw NotInUError("tau: point is not in U");
    long kp = p.k - p.j - p.l;
    long jp = p.k;
    if (kp == 0 && jp == 0) return kOrigin;
    FieldElement t = alpha_.scaled(kp) - alpha_over_beta_.scaled(jp);
    return {1 + t.floor().get_si(), kp, jp};
}

FieldElement TauContext::pi(const LatticePoint& p) const {
    return f({p.l + 1, p.k + n_, p.j - 1});
}

std::pair<LatticePoint, long> TauContext::preimage(const LatticePoint& p) const {
    if (!in_u_star(p)) throw NotInUStarError("preimage: point is not in U*");
    long r = ((p.l + p.j) % n_ + n_) % n_;
    long s;
    if (r == 0 && (f(p) - alpha_).sign() >= 0)
        s = 0;
    else
        s = n_ - r;
    long t = p.l + s + p.j;  // divisible by n by the choice of s
    long q = t / n_;
    LatticePoint v{q, p.j, p.j - p.k - q};
    return {v, s};
}

InjectivityReport TauContext::injectivity_class(const LatticePoint& p0,
                                                const LatticePoint& p1) const {
    if (tau(p0) != p1) throw NotRelatedError("injectivity_class: tau(p0) != p1");
    long r = ((p1.l + p1.j) % n_ + n_) % n_;
    if (r != 0) return {InjectivityClass::OneToOne, std::nullopt};
    FieldElement f0 = f(p0);
    InjectivityReport rep{InjectivityClass::OneToOne, std::nullopt};
    if ((f0 - alpha_over_beta_).sign() < 0) {
        rep = {InjectivityClass::TwoToOneLow, LatticePoint{p0.l + 1, p0.k, p0.j - 1}};
    } else {
        FieldElement high = FieldElement::integer(parent_, 1) - alpha_over_beta_;
        if ((f0 - high).sign() >= 0)
            rep = {InjectivityClass::TwoToOneHigh, LatticePoint{p0.l - 1, p0.k, p0.j + 1}};
    }
    if (rep.sibling && (!in_u(*rep.sibling) || tau(*rep.sibling) != p1))
        throw Error("injectivity_class: sibling does not map back");
    return rep;
}

TauOrbit TauContext::orbit(const LatticePoint& p, long cap) const {
    if (!in_u(p)) throw NotInUError("orbit: point is not in U");
    TauOrbit out;
    out.points.push_back(p);
    std::map<LatticePoint, long> seen;
    for (long step = 0;; ++step) {
        LatticePoint cur = out.points.back();
        if (cur == kOrigin) {
            out.kind = OrbitKind::Finite;
            return out;
        }
        auto [it, inserted] = seen.emplace(cur, step);
        if (!inserted) {
            out.kind = OrbitKind::EventuallyPeriodic;
            out.preperiod = it->second;
            out.period = step - it->second;
            out.points.pop_back();  // drop the repeated state
            return out;
        }
        if (step >= cap) {
            out.kind = OrbitKind::Truncated;
            return out;
        }
        out.digits.push_back(digit_at(cur));
        out.points.push_back(tau(cur));
    }
}

BoundsReport TauContext::check_bounds(const LatticePoint& p) const {
    if (n_ < 4) throw PreconditionUnmetError("check_bounds: requires n >= 4");
    if (!in_u_star(p)) throw NotInUStarError("check_bounds: point is not in U*");
    long m = norm_kj(p);
    long mu = std::min(std::labs(p.k), std::labs(p.j));
    BoundsReport rep;
    mpq_class spread = mpq_class(mu, n_ - 2) + mpq_class(m - mu, n_ - 1);
    spread.canonicalize();
    mpq_class l(p.l);
    rep.lemma_holds = (-spread < l) && (l < 1 + spread);
    rep.corollary_holds = (m < 2) || (m > std::labs(p.l));
    bool table = true;
    long nsq = n_ * n_;
    if (p.k != 0 && p.j != 0 && (p.k > 0) == (p.j > 0) && m <= n_) {
        if (std::labs(p.k) <= n_ - 1) {
            table = table && (p.l == (p.k > 0 ? 1 : 0));
        } else {
            // |k| = n: n*alpha > 1, so the floor may land one step further out
            table = table && (p.k > 0 ? (p.l == 1 || p.l == 2)
                                      : (p.l == 0 || p.l == -1));
        }
    }
    if (p.k != 0 && p.j != 0 && (p.k > 0) != (p.j > 0) && m <= n_ - 2)
        table = table && (p.l == (p.k > 0 ? 1 : 0));
    if (p.k == 0 && p.j > 0 && p.j <= nsq - 2) table = table && (p.l == 0);
    if (p.k == 0 && p.j < 0 && p.j >= 2 - nsq) table = table && (p.l == 1);
    if (p.j == 0 && p.k < 0 && p.k >= 1 - n_) table = table && (p.l == 0);
    if (p.j == 0 && p.k > 0 && p.k <= n_ - 1) table = table && (p.l == 1);
    if (m == 1) table = table && (0 <= p.l && p.l <= 1);
    rep.table_holds = table;
    return rep;
}

FiveStepReport TauContext::five_step_signs(const LatticePoint& p0) const {
    if (n_ < 4) throw PreconditionUnmetError("five_step_signs: requires n >= 4");
    if (!in_u_star(p0)) throw PreconditionUnmetError("five_step_signs: p0 must be in U*");
    if (p0.k <= 0 || p0.j <= 0)
        throw PreconditionUnmetError("five_step_signs: need k0 > 0 and j0 > 0");
    FiveStepReport rep;
    rep.trail.push_back(p0);
    for (int i = 0; i < 5; ++i) rep.trail.push_back(tau(rep.trail.back()));
    for (int i = 0; i <= 5; ++i) rep.k_values[i] = rep.trail[i].k;
    if (rep.k_values[1] >= 0)
        throw PreconditionUnmetError("five_step_signs: need k1 < 0");
    rep.pass = rep.k_values[2] < 0 && rep.k_values[4] > 0 && rep.k_values[5] > 0;
    return rep;
}

std::vector<LatticePoint> TauContext::schmidt_solutions() const {
    std::vector<LatticePoint> out;
    FieldElement high = FieldElement::integer(parent_, 1) - alpha_over_beta_;
    for (long k = -(n_ + 1); k <= n_ + 1; ++k)
        for (long j = -(n_ + 1); j <= n_ + 1; ++j) {
            if (k == 0 && j == 0) continue;
            LatticePoint p = canonical_point(k, j);
            FieldElement v = f(p);
            if (v.sign() <= 0) continue;  // ||f|| must be positive
            bool low = (v - alpha_over_beta_).sign() < 0;
            bool hi = (v - high).sign() > 0;
            if (low || hi) out.push_back(p);
        }
    std::sort(out.begin(), out.end());
    return out;
}

BallCensus TauContext::census(long radius, long cap) const {
    BallCensus out;
    out.n = n_;
    out.radius = radius;
    std::map<std::vector<LatticePoint>, long> cycle_ids;
    out.max_excursion = 0;
    for (long k = -radius; k <= radius; ++k)
        for (long j = -radius; j <= radius; ++j) {
            if (k == 0 && j == 0) continue;
            CensusRow row;
            row.start = canonical_point(k, j);
            TauOrbit o = orbit(row.start, cap);
            row.kind = o.kind;
            row.preperiod = o.preperiod;
            row.period = o.period;
            row.max_norm = 0;
            row.first_hit_bn = -1;
            for (size_t i = 0; i < o.points.size(); ++i) {
                long nm = norm_kj(o.points[i]);
                row.max_norm = std::max(row.max_norm, nm);
                if (row.first_hit_bn < 0 && nm <= n_) row.first_hit_bn = static_cast<long>(i);
            }
            if (o.kind == OrbitKind::EventuallyPeriodic) {
                std::vector<LatticePoint> cyc(o.points.begin() + o.preperiod, o.points.end());
                std::vector<long> digs(o.digits.begin() + o.preperiod, o.digits.end());
                auto min_it = std::min_element(cyc.begin(), cyc.end());
                long shift = static_cast<long>(min_it - cyc.begin());
                std::rotate(cyc.begin(), cyc.begin() + shift, cyc.end());
                std::rotate(digs.begin(), digs.begin() + shift, digs.end());
                auto [it, inserted] =
                    cycle_ids.emplace(cyc, static_cast<long>(out.cycles.size()));
                if (inserted) out.cycles.push_back(TauCycle{cyc, digs});
                row.cycle_id = it->second;
            }
            if (norm_kj(row.start) <= n_)
                out.max_excursion = std::max(out.max_excursion, row.max_norm);
            out.rows.push_back(row);
        }
    out.cycles_within_bn = true;
    for (const TauCycle& c : out.cycles)
        for (const LatticePoint& p : c.points)
            if (norm_kj(p) > n_) out.cycles_within_bn = false;
    return out;
}

bool TauContext::cycle_is_integer_class(const std::vector<LatticePoint>& cycle, long scan_to,
                                        long cap) const {
    if (cycle.empty()) return true;
    bool all_excluded_form = true;
    for (const LatticePoint& p : cycle)
        if (!(p.l == 1 && p.k > 0 && p.k <= n_ && p.j >= p.k && p.j <= n_)) {
            all_excluded_form = false;
            break;
        }
    if (all_excluded_form) return false;
    std::vector<long> cyc_digits;
    cyc_digits.reserve(cycle.size());
    for (const LatticePoint& p : cycle) cyc_digits.push_back(digit_at(p));
    long limit = scan_to > 0 ? scan_to : n_ * n_ + 2 * n_ + 4;
    for (long N = 1; N <= limit; ++N) {
        OrbitClassification cls = expand(FieldElement::integer(parent_, N), cap);
        if (cls.kind != OrbitKind::EventuallyPeriodic) continue;
        if (is_rotation(cls.word.frac_period, cyc_digits)) return true;
    }
    return false;
}

}  // namespace betalab
