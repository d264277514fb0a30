#include "lwp/bohr.hpp"

#include <algorithm>
#include <cmath>
#include <boost/multiprecision/cpp_int.hpp>

namespace lwp {

using boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// rational.hpp implementation
// ---------------------------------------------------------------------------

namespace {

Rational reciprocal(const Rational& r) {
    if (r.num == 0) throw Error("BadRational", "reciprocal of zero");
    return Rational(r.den, r.num);
}

Rational sub(const Rational& a, int64_t n) {
    return Rational(a.num - detail::checked_mul(n, a.den), a.den);
}

}  // namespace

Rational simplest_between(const Rational& lo, const Rational& hi) {
    if (!(lo < hi)) throw Error("BadRational", "empty interval");
    int64_t a = lo.num / lo.den;  // floor, inputs nonnegative
    Rational next_int(a + 1, 1);
    if (lo < next_int && next_int < hi) return next_int;
    Rational frac_lo = sub(lo, a);
    if (frac_lo.is_zero()) {
        // lo is the integer a: answer is a + 1/q with the least q > 1/(hi - a)
        Rational w = sub(hi, a);
        int64_t q = w.den / w.num + 1;
        return Rational(detail::checked_mul(a, q) + 1, q);
    }
    // both endpoints share the integer part a; recurse on reciprocals of the
    // fractional parts (interval flips)
    Rational inner = simplest_between(reciprocal(sub(hi, a)), reciprocal(frac_lo));
    return Rational(detail::checked_mul(a, inner.num) + inner.den, inner.num);
}

namespace {

Rational simplest_real_rec(long double lo, long double hi, int depth) {
    if (depth > 64) throw Error("BadRational", "continued fraction did not terminate");
    long double fa = std::floor(lo);
    int64_t a = static_cast<int64_t>(fa);
    if (static_cast<long double>(a + 1) < hi && lo < static_cast<long double>(a + 1))
        return Rational(a + 1, 1);
    if (lo == fa) {
        int64_t q = static_cast<int64_t>(std::floor(1.0L / (hi - fa))) + 1;
        return Rational(detail::checked_mul(a, q) + 1, q);
    }
    Rational inner = simplest_real_rec(1.0L / (hi - fa), 1.0L / (lo - fa), depth + 1);
    return Rational(detail::checked_mul(a, inner.num) + inner.den, inner.num);
}

}  // namespace

Rational simplest_in_real_interval(double lo, double hi) {
    if (!(0.0 < lo && lo < hi)) throw Error("BadRational", "need 0 < lo < hi");
    Rational r = simplest_real_rec(lo, hi, 0);
    long double v = static_cast<long double>(r.num) / static_cast<long double>(r.den);
    if (v > static_cast<long double>(lo) && v < static_cast<long double>(hi)) return r;
    // dyadic fallback
    double width = hi - lo;
    int s = 2;
    while (std::ldexp(1.0, -s) > width / 4 && s < 62) ++s;
    int64_t den = int64_t{1} << s;
    int64_t num = static_cast<int64_t>(std::ceil(lo * static_cast<double>(den)));
    Rational f(num, den);
    long double fv = static_cast<long double>(f.num) / static_cast<long double>(f.den);
    if (!(fv > lo && fv < hi)) throw Error("BadRational", "interval too narrow to rationalize");
    return f;
}

// ---------------------------------------------------------------------------
// character sets and membership
// ---------------------------------------------------------------------------

CharacterSet::CharacterSet(int64_t p_, std::vector<int64_t> residues)
    : p(p_), gamma(std::move(residues)) {
    if (!is_prime(p)) throw Error("NotPrime", "modulus " + std::to_string(p) + " is not prime");
    for (int64_t& r : gamma) r = ((r % p) + p) % p;
    std::sort(gamma.begin(), gamma.end());
    gamma.erase(std::unique(gamma.begin(), gamma.end()), gamma.end());
    if (!gamma.empty() && gamma.front() == 0)
        throw Error("BadCharacterSet", "residue 0 has a vacuous constraint");
}

namespace {

// m(x)*p numerators: m_num(x) = max_r min(rx mod p, p - rx mod p)
std::vector<int64_t> phase_numerators(const CharacterSet& chars) {
    const int64_t p = chars.p;
    std::vector<int64_t> m(p, 0);
    for (int64_t r : chars.gamma) {
        int64_t rx = 0;
        for (int64_t x = 0; x < p; ++x) {
            int64_t dist = std::min(rx, p - rx);
            if (x == 0) dist = 0;
            if (dist > m[x]) m[x] = dist;
            rx += r;
            if (rx >= p) rx -= p;
        }
    }
    return m;
}

// sorted distinct numerators with cumulative counts
struct Profile {
    int64_t p = 0;
    std::vector<int64_t> ks;    // ascending distinct m_num values
    std::vector<int64_t> cum;   // cum[i] = #{x : m_num(x) <= ks[i]}

    // |B(Gamma, num/den)| = #{x : k * den <= num * p}
    int64_t count_leq(int64_t num, int64_t den) const {
        __int128 rhs = static_cast<__int128>(num) * p;
        // largest index with ks[i]*den <= rhs
        int64_t lo = 0, hi = static_cast<int64_t>(ks.size()) - 1, ans = -1;
        while (lo <= hi) {
            int64_t mid = (lo + hi) / 2;
            if (static_cast<__int128>(ks[mid]) * den <= rhs) { ans = mid; lo = mid + 1; }
            else hi = mid - 1;
        }
        return ans < 0 ? 0 : cum[ans];
    }
    // #{x : m(x) < k/p} for a breakpoint numerator k
    int64_t count_strictly_below(int64_t k) const {
        auto it = std::lower_bound(ks.begin(), ks.end(), k);
        int64_t idx = static_cast<int64_t>(it - ks.begin()) - 1;
        return idx < 0 ? 0 : cum[idx];
    }
};

Profile make_profile(const CharacterSet& chars) {
    std::vector<int64_t> m = phase_numerators(chars);
    std::sort(m.begin(), m.end());
    Profile pr;
    pr.p = chars.p;
    for (size_t i = 0; i < m.size(); ++i) {
        if (i == 0 || m[i] != m[i - 1]) {
            pr.ks.push_back(m[i]);
            pr.cum.push_back(static_cast<int64_t>(i) + 1);
        } else {
            pr.cum.back() = static_cast<int64_t>(i) + 1;
        }
    }
    return pr;
}

bool verify_regular_with_profile(const Profile& pr, int64_t d, const Rational& eps) {
    if (d == 0) return true;
    const int64_t p = pr.p;
    const int64_t en = eps.num, ed = eps.den;
    const int64_t n_eps = pr.count_leq(en, ed);
    const __int128 enp = static_cast<__int128>(en) * p;
    const int64_t hundred_d = 100 * d;
    for (size_t i = 0; i < pr.ks.size(); ++i) {
        const int64_t k = pr.ks[i];
        const __int128 ked = static_cast<__int128>(k) * ed;
        if (ked >= enp) {
            // upper side: breakpoints in [eps, (1 + 1/100d) eps]; at kappa_b the
            // count jumps to N(b) while the allowance is 1 + 100 d kappa_b
            if (ked * hundred_d > enp * (hundred_d + 1)) continue;
            __int128 lhs = static_cast<__int128>(pr.cum[i]) * enp;
            __int128 rhs = static_cast<__int128>(n_eps) * (enp + hundred_d * (ked - enp));
            if (lhs > rhs) return false;
        }
        if (ked <= enp) {
            // lower side: just past kappa_b the count drops to the strict count
            if (ked * hundred_d < enp * (hundred_d - 1)) continue;
            __int128 lhs = static_cast<__int128>(pr.count_strictly_below(k)) * enp;
            __int128 rhs = static_cast<__int128>(n_eps) * (enp - hundred_d * (enp - ked));
            if (lhs < rhs) return false;
        }
    }
    return true;
}

}  // namespace

BohrSet build_bohr(const CharacterSet& chars, const Rational& eta_in) {
    Rational eta = clamp_radius(eta_in);
    const int64_t p = chars.p;
    BohrSet b;
    b.chars = chars;
    b.eta = eta;
    b.members.assign(p, 1);
    const __int128 rhs = static_cast<__int128>(eta.num) * p;
    for (int64_t r : chars.gamma) {
        int64_t rx = 0;
        char* mem = b.members.data();
        for (int64_t x = 0; x < p; ++x) {
            if (mem[x]) {
                int64_t dist = std::min(rx, p - rx);
                if (x == 0) dist = 0;
                if (static_cast<__int128>(dist) * eta.den > rhs) mem[x] = 0;
            }
            rx += r;
            if (rx >= p) rx -= p;
        }
    }
    b.size = std::count(b.members.begin(), b.members.end(), char(1));
    return b;
}

int64_t bohr_size_at(const CharacterSet& chars, const Rational& t) {
    Rational tc = clamp_radius(t);
    return make_profile(chars).count_leq(tc.num, tc.den);
}

SizeBounds size_bounds_check(const BohrSet& b) {
    const int64_t d = b.chars.d();
    SizeBounds out{};
    // (i) size * den^d >= num^d * p, exact
    cpp_int lhs = b.size, rhs = b.chars.p;
    for (int64_t i = 0; i < d; ++i) {
        lhs *= b.eta.den;
        rhs *= b.eta.num;
    }
    out.lower_ok = lhs >= rhs;
    // (ii) |B(2 eta)| <= 5^d |B(eta)|, 2 eta clamped at 1/2
    int64_t big = bohr_size_at(b.chars, double_radius(b.eta));
    cpp_int cap = b.size;
    for (int64_t i = 0; i < d; ++i) cap *= 5;
    out.doubling_ok = cpp_int(big) <= cap;
    return out;
}

std::vector<Rational> breakpoints(const CharacterSet& chars) {
    Profile pr = make_profile(chars);
    if (chars.d() == 0) return {};
    std::vector<Rational> out;
    out.reserve(pr.ks.size());
    for (int64_t k : pr.ks) out.emplace_back(k, chars.p);
    return out;
}

bool verify_regular(const CharacterSet& chars, const Rational& eps) {
    return verify_regular_with_profile(make_profile(chars), chars.d(), eps);
}

Rational find_regular_value(const CharacterSet& chars, const Rational& delta,
                            std::optional<Rational> cap_opt) {
    if (chars.d() == 0) return delta;
    Rational cap = cap_opt.value_or(Rational(detail::checked_mul(2, delta.num), delta.den));
    if (!(delta < cap)) throw Error("BadRational", "empty regular-value window");
    Profile pr = make_profile(chars);
    const int64_t d = chars.d();
    int tried = 0;
    auto attempt = [&](const Rational& cand) -> bool {
        ++tried;
        return verify_regular_with_profile(pr, d, cand);
    };

    // (a) midpoints of breakpoint gaps intersected with [delta, cap)
    std::vector<Rational> walls;
    walls.emplace_back(0, 1);
    for (int64_t k : pr.ks)
        if (k > 0) walls.emplace_back(k, chars.p);
    walls.push_back(half());
    for (size_t i = 0; i + 1 < walls.size(); ++i) {
        Rational lo = walls[i] < delta ? delta : walls[i];
        Rational hi = walls[i + 1] < cap ? walls[i + 1] : cap;
        if (!(lo < hi)) continue;
        Rational cand = simplest_between(lo, hi);
        if (attempt(cand)) return cand;
    }

    // (b) geometric grids, doubling until the candidate budget runs out
    const double dv = delta.value(), cv = cap.value();
    for (int grid = 64; tried < 4096; grid *= 2) {
        double ratio = std::pow(cv / dv, 1.0 / grid);
        for (int i = 0; i < grid && tried < 4096; ++i) {
            double lo = dv * std::pow(ratio, i);
            double hi = lo * ratio;
            Rational cand;
            try {
                cand = simplest_in_real_interval(lo, hi);
            } catch (const Error&) {
                continue;
            }
            if (cand < delta || !(cand < cap)) continue;
            if (attempt(cand)) return cand;
        }
    }
    throw Error("NoRegularValueFound",
                "no regular radius in [" + delta.str() + ", " + cap.str() + ") after 4096 candidates");
}

// ---------------------------------------------------------------------------
// cutoffs
// ---------------------------------------------------------------------------

BohrCutoff cutoff(const BohrSet& b) {
    const int64_t p = b.p();
    std::vector<double> v(p, 0.0);
    const double w = 1.0 / static_cast<double>(b.size);
    for (int64_t x = 0; x < p; ++x)
        if (b.members[x]) v[x] = w;
    return BohrCutoff{b.size, ZpFunction(p, std::move(v))};
}

ZpFunction cutoff_density(const BohrSet& b) {
    const int64_t p = b.p();
    std::vector<double> v(p, 0.0);
    const double w = static_cast<double>(p) / static_cast<double>(b.size);
    for (int64_t x = 0; x < p; ++x)
        if (b.members[x]) v[x] = w;
    return ZpFunction(p, std::move(v));
}

Spectrum cutoff_spectrum(const BohrSet& b) { return forward_transform(cutoff_density(b)); }

namespace {

void require_regular(const BohrSet& b) {
    if (!b.regular_cache.has_value()) b.regular_cache = verify_regular(b.chars, b.eta);
    if (!*b.regular_cache)
        throw Error("NotRegular", "radius " + b.eta.str() + " is not a regular value");
}

}  // namespace

double cutoff_shift_deviation(const BohrSet& b, int64_t y) {
    require_regular(b);
    const int64_t p = b.p();
    int64_t yy = ((y % p) + p) % p;
    int64_t diff = 0;
    for (int64_t x = 0; x < p; ++x) {
        int64_t xs = x + yy;
        if (xs >= p) xs -= p;
        diff += (b.members[xs] != b.members[x]);
    }
    return static_cast<double>(diff) / static_cast<double>(b.size);
}

double character_flatness(const BohrSet& b, const Rational& eta2, double kappa1) {
    require_regular(b);
    const int64_t p = b.p();
    Spectrum bh = cutoff_spectrum(b);
    std::vector<int64_t> cands;
    for (int64_t g = 0; g < p; ++g)
        if (std::abs(bh.coeffs[g]) >= kappa1) cands.push_back(g);
    BohrSet small = build_bohr(b.chars, eta2);
    double worst = 0.0;
    for (int64_t y = 0; y < p; ++y) {
        if (!small.members[y]) continue;
        for (int64_t g : cands) {
            int64_t gy = static_cast<int64_t>((static_cast<__int128>(g) * y) % p);
            // |1 - e(gy/p)| = 2 |sin(pi gy/p)|
            double v = 2.0 * std::abs(std::sin(M_PI * static_cast<double>(gy) / static_cast<double>(p)));
            if (v > worst) worst = v;
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// interval selection
// ---------------------------------------------------------------------------

std::vector<Interval> select_disjoint_intervals(const std::vector<Interval>& cover) {
    for (const Interval& iv : cover)
        if (!(iv.a <= iv.b) || iv.a < 0.0 || iv.b > 1.0)
            throw Error("NotACover", "intervals must be closed subintervals of [0,1]");

    // greedy minimum-cardinality subcover (hence irredundant)
    std::vector<Interval> sorted = cover;
    std::sort(sorted.begin(), sorted.end(),
              [](const Interval& x, const Interval& y) { return x.a < y.a || (x.a == y.a && x.b > y.b); });
    std::vector<Interval> minimal;
    double reach = 0.0;
    size_t i = 0;
    if (sorted.empty() || sorted[0].a > 0.0) throw Error("NotACover", "0 is uncovered");
    while (reach < 1.0) {
        double best = -1.0;
        while (i < sorted.size() && sorted[i].a <= reach) {
            best = std::max(best, sorted[i].b);
            ++i;
        }
        if (best <= reach) throw Error("NotACover", "gap after " + std::to_string(reach));
        // keep the interval achieving the extension
        Interval chosen{0, best};
        for (const Interval& iv : cover)
            if (iv.b == best && iv.a <= reach) { chosen = iv; break; }
        minimal.push_back(chosen);
        reach = best;
    }

    std::sort(minimal.begin(), minimal.end(),
              [](const Interval& x, const Interval& y) { return x.a < y.a; });
    double odd = 0.0, even = 0.0;
    for (size_t j = 0; j < minimal.size(); ++j)
        ((j % 2 == 0) ? odd : even) += minimal[j].b - minimal[j].a;
    std::vector<Interval> out;
    for (size_t j = (odd >= even ? 0 : 1); j < minimal.size(); j += 2) out.push_back(minimal[j]);
    return out;
}

}  // namespace lwp
