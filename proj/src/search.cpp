#include "lwp/search.hpp"

#include <algorithm>
#include <cmath>

#include "lwp/decompose.hpp"
#include "lwp/rng.hpp"

namespace lwp {

std::vector<int64_t> canonical_form(int64_t p, const std::vector<int64_t>& a_in) {
    std::vector<int64_t> a;
    for (int64_t x : a_in) a.push_back(((x % p) + p) % p);
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::vector<int64_t> best, img(a.size());
    for (int64_t mult = 1; mult < p; ++mult) {
        for (int64_t shift = 0; shift < p; ++shift) {
            for (size_t i = 0; i < a.size(); ++i)
                img[i] = static_cast<int64_t>((static_cast<__int128>(mult) * a[i] + shift) % p);
            std::sort(img.begin(), img.end());
            if (best.empty() || img < best) best = img;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// exhaustive minimum of the spectral L1 over half-density sets
// ---------------------------------------------------------------------------

namespace {

// Incremental search state over half-range spectrum sums S_r = sum_{x in A}
// e(rx/p), r = 1..(p-1)/2; the mirror frequencies carry the same modulus and
// S_0 = |A| is constant at the leaves.
struct SpectrumTracker {
    int64_t p, h;
    std::vector<double> wre, wim;  // e(k/p) table
    std::vector<double> sre, sim;

    explicit SpectrumTracker(int64_t p_) : p(p_), h((p_ - 1) / 2) {
        wre.resize(p);
        wim.resize(p);
        for (int64_t k = 0; k < p; ++k) {
            double ang = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(p);
            wre[k] = std::cos(ang);
            wim[k] = std::sin(ang);
        }
        sre.assign(h + 1, 0.0);
        sim.assign(h + 1, 0.0);
    }

    void add(int64_t x) {
        int64_t idx = 0;
        for (int64_t r = 1; r <= h; ++r) {
            idx += x;
            if (idx >= p) idx -= p;
            sre[r] += wre[idx];
            sim[r] += wim[idx];
        }
    }
    void remove(int64_t x) {
        int64_t idx = 0;
        for (int64_t r = 1; r <= h; ++r) {
            idx += x;
            if (idx >= p) idx -= p;
            sre[r] -= wre[idx];
            sim[r] -= wim[idx];
        }
    }
    void rebuild(const std::vector<int64_t>& set) {
        std::fill(sre.begin(), sre.end(), 0.0);
        std::fill(sim.begin(), sim.end(), 0.0);
        for (int64_t x : set) add(x);
    }
    // ||1_A hat||_1 = (|A| + 2 sum_{r=1..h} |S_r|)/p
    double l1(int64_t k) const {
        double acc = 0.0;
        for (int64_t r = 1; r <= h; ++r)
            acc += std::sqrt(sre[r] * sre[r] + sim[r] * sim[r]);
        return (static_cast<double>(k) + 2.0 * acc) / static_cast<double>(p);
    }
};

// drift-free evaluation from scratch
double l1_of_set(int64_t p, const std::vector<int64_t>& a) {
    return spectral_l1(forward_transform(ZpFunction::indicator(p, a)));
}

struct EnumState {
    int64_t p, k;
    SpectrumTracker tracker;
    std::vector<int64_t> current;
    double best = 1e300;
    std::vector<int64_t> best_set;
    int64_t leaves = 0;

    EnumState(int64_t p_, int64_t k_) : p(p_), k(k_), tracker(p_) {}

    void leaf() {
        ++leaves;
        // incremental sums drift over long runs: refresh periodically and
        // re-evaluate any near-minimum leaf exactly before accepting it
        if ((leaves & 0x3FFFFF) == 0) tracker.rebuild(current);
        double v = tracker.l1(k);
        if (v < best + 1e-7) {
            double exact = l1_of_set(p, current);
            if (exact < best) {
                best = exact;
                best_set = current;
            }
        }
    }

    void descend(int64_t next, int64_t remaining) {
        if (remaining == 0) {
            leaf();
            return;
        }
        for (int64_t x = next; x <= p - remaining; ++x) {
            tracker.add(x);
            current.push_back(x);
            descend(x + 1, remaining - 1);
            current.pop_back();
            tracker.remove(x);
        }
    }
};

}  // namespace

ExhaustiveResult exhaustive_littlewood_unreduced(int64_t p) {
    if (!is_prime(p)) throw Error("NotPrime", "p must be prime");
    if (p > 23) throw Error("TooLarge", "unreduced enumeration is capped at p = 23");
    int64_t k = p / 2;
    EnumState st(p, k);
    st.descend(0, k);
    ExhaustiveResult out;
    out.s_p = st.best;
    out.witness = canonical_form(p, st.best_set);
    out.subsets_scanned = st.leaves;
    return out;
}

ExhaustiveResult exhaustive_littlewood(int64_t p) {
    if (!is_prime(p)) throw Error("NotPrime", "p must be prime");
    if (p > 31) throw Error("TooLarge", "orbit-reduced enumeration is capped at p = 31");
    int64_t k = p / 2;
    if (k < 2) return exhaustive_littlewood_unreduced(p);
    EnumState st(p, k);
    // pin 0 and 1: every affine orbit has such a representative
    st.tracker.add(0);
    st.tracker.add(1);
    st.current = {0, 1};
    st.descend(2, k - 2);
    ExhaustiveResult out;
    out.s_p = st.best;
    out.witness = canonical_form(p, st.best_set);
    out.subsets_scanned = st.leaves;
    return out;
}

// ---------------------------------------------------------------------------
// local search
// ---------------------------------------------------------------------------

LocalSearchResult local_search_littlewood(int64_t p, uint64_t seed, int64_t iters,
                                          bool init_interval) {
    if (!is_prime(p)) throw Error("NotPrime", "p must be prime");
    const int64_t k = p / 2, h = (p - 1) / 2;
    std::vector<char> in_set(p, 0);
    if (init_interval) {
        for (int64_t x = 1; x <= k; ++x) in_set[x] = 1;
    } else {
        CounterRng rng(seed, 21);
        std::vector<int64_t> perm(p);
        for (int64_t i = 0; i < p; ++i) perm[i] = i;
        for (int64_t i = p - 1; i > 0; --i)
            std::swap(perm[i], perm[static_cast<int64_t>(rng.below(static_cast<uint64_t>(i), i + 1))]);
        for (int64_t i = 0; i < k; ++i) in_set[perm[i]] = 1;
    }

    SpectrumTracker tracker(p);
    for (int64_t x = 0; x < p; ++x)
        if (in_set[x]) tracker.add(x);

    auto swap_value = [&](int64_t out_x, int64_t in_x) {
        // |S_r - w(r out) + w(r in)| without committing the move
        double acc = 0.0;
        int64_t io = 0, ii = 0;
        for (int64_t r = 1; r <= h; ++r) {
            io += out_x;
            if (io >= p) io -= p;
            ii += in_x;
            if (ii >= p) ii -= p;
            double re = tracker.sre[r] - tracker.wre[io] + tracker.wre[ii];
            double im = tracker.sim[r] - tracker.wim[io] + tracker.wim[ii];
            acc += std::sqrt(re * re + im * im);
        }
        return (static_cast<double>(k) + 2.0 * acc) / static_cast<double>(p);
    };

    double current = tracker.l1(k);
    int64_t used = 0;
    for (; used < iters; ++used) {
        double best_v = current - 1e-12;
        int64_t best_out = -1, best_in = -1;
        for (int64_t u = 0; u < p; ++u) {
            if (!in_set[u]) continue;
            for (int64_t v = 0; v < p; ++v) {
                if (in_set[v]) continue;
                double cand = swap_value(u, v);
                if (cand < best_v) {
                    best_v = cand;
                    best_out = u;
                    best_in = v;
                }
            }
        }
        if (best_out < 0) break;
        tracker.remove(best_out);
        tracker.add(best_in);
        in_set[best_out] = 0;
        in_set[best_in] = 1;
        current = best_v;
    }

    LocalSearchResult out;
    for (int64_t x = 0; x < p; ++x)
        if (in_set[x]) out.set.push_back(x);
    out.upper_bound = l1_of_set(p, out.set);
    out.iters_used = used;
    return out;
}

double interval_l1(int64_t p) {
    if (!is_prime(p)) throw Error("NotPrime", "p must be prime");
    const int64_t k = p / 2;
    std::vector<double> terms(p);
    terms[0] = static_cast<double>(k);
    for (int64_t r = 1; r < p; ++r) {
        double num = std::sin(M_PI * static_cast<double>((static_cast<__int128>(r) * k) % p) /
                              static_cast<double>(p));
        double den = std::sin(M_PI * static_cast<double>(r) / static_cast<double>(p));
        terms[r] = std::abs(num) / den;
    }
    return pairwise_sum(terms) / static_cast<double>(p);
}

DeviationProfile deviation_profile(int64_t p, const std::vector<int64_t>& a) {
    if (a.empty()) throw Error("BadParams", "profile of the empty set");
    ZpFunction ind = ZpFunction::indicator(p, a);
    ZpFunction corr = convolve(ind, reflect(ind));
    DeviationProfile out;
    out.p = p;
    out.a = a;
    std::sort(out.a.begin(), out.a.end());
    out.counts.resize(p);
    out.d.resize(p);
    out.min_abs = 1e300;
    const double pf = static_cast<double>(p);
    for (int64_t x = 0; x < p; ++x) {
        double raw = pf * corr.values[x];
        double count = std::round(raw);
        if (std::abs(raw - count) > 1e-6)
            throw CheckFailed("count_rounding", "correlation residual too large");
        out.counts[x] = static_cast<int64_t>(count);
        out.d[x] = count - pf / 4.0;
        double abs_d = std::abs(out.d[x]);
        if (abs_d < out.min_abs) {
            out.min_abs = abs_d;
            out.argmin = x;
        }
        out.max_abs = std::max(out.max_abs, abs_d);
    }
    return out;
}

std::vector<ScalingRow> scaling_study(const std::vector<int64_t>& p_list,
                                      const ConstructionConfig& cfg, uint64_t seed) {
    std::vector<ScalingRow> rows;
    for (int64_t p : p_list) {
        if (!is_prime(p)) throw Error("NotPrime", std::to_string(p) + " is not prime");
        ScalingRow row;
        row.p = p;
        row.seed = seed;
        double lp = std::log(static_cast<double>(p));

        std::vector<int64_t> interval;
        for (int64_t x = 1; x <= p / 2; ++x) interval.push_back(x);
        row.s_lower_cert = littlewood_lower_report(p, interval).bound_8eps;
        row.interval_l1 = interval_l1(p);

        ConstructionReport rep = build_F(p, cfg, /*enforce=*/false);
        row.min_f_logp = rep.f_min_abs * lp;

        SignedFunction sf = random_sign_f(rep, cfg, seed);
        ClipResult cl = clip_to_bounded(sf, cfg);
        ZpFunction ft = unit_range_map(cl.f);
        ZpFunction ftc = convolve(ft, reflect(ft));
        double mn = 1e300;
        for (double v : ftc.values) mn = std::min(mn, std::abs(v - 0.25));
        row.dev_tilde_scaled = mn * lp * std::log(lp);

        row.final_min_dev = round_to_set(ft, cfg, seed).final_min_dev;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace lwp
