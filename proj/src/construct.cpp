#include "lwp/construct.hpp"

#include <algorithm>
#include <cmath>

#include "lwp/rng.hpp"

namespace lwp {

void ConstructionConfig::validate() const {
    if (c_smooth < 1000.0) throw Error("BadParams", "smoothing constant must be >= 1000");
    if (!(c_exp > 0.0 && c_exp <= 0.125)) throw Error("BadParams", "c_exp must lie in (0, 1/8]");
    if (moment_threshold <= 1.0) throw Error("BadParams", "moment threshold must exceed 1");
    if (resample_cap < 1 || round_retry_cap < 1) throw Error("BadParams", "caps must be positive");
}

const CheckItem* ConstructionReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

// ---------------------------------------------------------------------------
// the smoothed logarithmic kernel
// ---------------------------------------------------------------------------

namespace {

// zeta at even integers via Euler-Maclaurin; checked against closed forms in tests
const std::vector<double>& even_zetas() {
    static const std::vector<double> z = [] {
        std::vector<double> out;
        const int64_t cut = 1024;
        for (int n = 1; n <= 64; ++n) {
            double s = 2.0 * n;
            double head = 0.0;
            for (int64_t k = cut; k >= 1; --k) head += std::pow(static_cast<double>(k), -s);
            double kk = static_cast<double>(cut);
            double tail = std::pow(kk, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(kk, -s) +
                          s * std::pow(kk, -s - 1.0) / 12.0 -
                          s * (s + 1.0) * (s + 2.0) * std::pow(kk, -s - 3.0) / 720.0;
            out.push_back(head + tail);
        }
        return out;
    }();
    return z;
}

// second antiderivative pieces near the singularity
double log_piece(double u) {
    if (u == 0.0) return 0.0;
    return u * u * (1.5 - std::log(2.0 * M_PI * std::abs(u)));
}

double smooth_piece(double u) {
    const auto& zs = even_zetas();
    double s = 0.0, u2 = u * u, un = u2 * u2;
    for (int n = 1; n <= 5; ++n) {
        double dn = static_cast<double>(n);
        s += 2.0 * zs[n - 1] * un / (dn * (2.0 * dn + 1.0) * (2.0 * dn + 2.0));
        un *= u2;
    }
    return s;
}

}  // namespace

double f1_eval(double theta) {
    double t = theta - std::round(theta);
    if (t == 0.0) return 0.0;
    return -2.0 * std::log(std::abs(2.0 * std::sin(M_PI * t)));
}

double f2_eval(double theta, double c_smooth, int64_t p) {
    if (c_smooth < 4.0) throw Error("BadParams", "box kernel needs C >= 4");
    const double a = 2.0 / (c_smooth * static_cast<double>(p));
    double t = std::abs(theta - std::round(theta));
    const auto& zs = even_zetas();

    if (t >= 2.0 * a) {
        // [G(t+a) - 2G(t) + G(t-a)]/a^2 with the difference expanded in powers
        // of r = a/t; every term is positive, so nothing cancels
        const double r = a / t;
        const double r2 = r * r;
        double s1 = 0.0, rn = r2;
        for (int n = 1; n <= 200; ++n) {
            double dn = static_cast<double>(n);
            double term = rn / (dn * (2.0 * dn + 1.0) * (2.0 * dn + 2.0));
            s1 += term;
            if (term < 1e-18 * std::max(1.0, s1)) break;
            rn *= r2;
        }
        double val = -2.0 * std::log(2.0 * M_PI * t) + 2.0 * s1;
        double t2 = t * t, tn = t2;
        for (int n = 1; n <= 64; ++n) {
            double dn = static_cast<double>(n);
            double cn = 2.0 * zs[n - 1] / (dn * (2.0 * dn + 1.0) * (2.0 * dn + 2.0));
            int k = 2 * n + 2;
            // [(1+r)^k + (1-r)^k - 2]/r^2 = 2 sum_{i>=1} C(k,2i) r^(2i-2)
            double inner = 0.0, binom = static_cast<double>(k) * (k - 1) / 2.0, rp = 1.0;
            for (int i = 1; 2 * i <= k; ++i) {
                inner += binom * rp;
                binom *= static_cast<double>(k - 2 * i) * (k - 2 * i - 1) /
                         ((2.0 * i + 1.0) * (2.0 * i + 2.0));
                rp *= r2;
            }
            double term = cn * tn * 2.0 * inner;
            val += term;
            if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(val)) && n > 3) break;
            tn *= t2;
        }
        return val;
    }
    // |t| < 2a: all three abscissae sit at scale a, where the direct second
    // difference is well conditioned
    double val = (log_piece(t + a) - 2.0 * log_piece(t) + log_piece(t - a)) / (a * a);
    val += (smooth_piece(t + a) - 2.0 * smooth_piece(t) + smooth_piece(t - a)) / (a * a);
    return val;
}

ZpFunction build_g1(int64_t p) {
    if (p < 3 || !is_prime(p)) throw Error("BadParams", "need an odd prime p >= 3");
    std::vector<double> v(p);
    for (int64_t x = 0; x < p; ++x) {
        int64_t xb = signed_rep(x, p);
        v[x] = (4 * std::llabs(xb) < p) ? 1.0 : -1.0;
    }
    return ZpFunction(p, std::move(v));
}

ZpFunction build_g2(int64_t p, double c_smooth) {
    if (!is_prime(p)) throw Error("NotPrime", "modulus must be prime");
    std::vector<double> v(p);
    parallel_for(p, [&](int64_t lo, int64_t hi) {
        for (int64_t x = lo; x < hi; ++x) {
            int64_t xb = signed_rep(x, p);
            v[x] = f2_eval(static_cast<double>(xb) / static_cast<double>(p), c_smooth, p);
        }
    });
    return ZpFunction(p, std::move(v));
}

// ---------------------------------------------------------------------------
// the flat construction F
// ---------------------------------------------------------------------------

namespace {

// explicit majorant for ||ghat2||_1: 2 sum_m min(1/m, C^2 p^2/(4 pi^2 m^3))
double g2_l1_majorant(int64_t p, double c) {
    double cp = c * static_cast<double>(p);
    int64_t mstar = static_cast<int64_t>(cp / (2.0 * M_PI)) + 1;
    double s = 0.0;
    double c2p2 = cp * cp / (4.0 * M_PI * M_PI);
    for (int64_t m = 4 * mstar; m >= 1; --m) {
        double mm = static_cast<double>(m);
        s += std::min(1.0 / mm, c2p2 / (mm * mm * mm));
    }
    // integral tail bound for m > 4 mstar
    double mm = static_cast<double>(4 * mstar);
    s += c2p2 / (2.0 * mm * mm);
    return 2.0 * s;
}

}  // namespace

ConstructionReport build_F(int64_t p, const ConstructionConfig& cfg, bool enforce) {
    cfg.validate();
    if (p < cfg.p_min || !is_prime(p))
        throw Error("BadParams", "construction needs a prime p >= " + std::to_string(cfg.p_min));
    ConstructionReport rep;
    rep.p = p;
    rep.cfg = cfg;
    const double c = cfg.c_smooth;

    rep.g1 = build_g1(p);
    rep.g2 = build_g2(p, c);
    std::vector<double> g3v(p);
    for (int64_t x = 0; x < p; ++x) g3v[x] = rep.g1.values[x] + rep.g2.values[x];
    rep.g3 = ZpFunction(p, g3v);
    rep.mean_g3 = pairwise_sum(rep.g3.values) / static_cast<double>(p);
    std::vector<double> g4v(p);
    for (int64_t x = 0; x < p; ++x) g4v[x] = g3v[x] - rep.mean_g3;
    rep.g4 = ZpFunction(p, std::move(g4v));

    Spectrum g1h = forward_transform(rep.g1);
    Spectrum g2h = forward_transform(rep.g2);
    Spectrum g3h = forward_transform(rep.g3);
    Spectrum g4h = forward_transform(rep.g4);
    rep.g4_spectral_l1 = spectral_l1(g4h);
    std::vector<double> fv(p);
    for (int64_t x = 0; x < p; ++x) fv[x] = rep.g4.values[x] / rep.g4_spectral_l1;
    rep.F = ZpFunction(p, std::move(fv));
    rep.F_hat = forward_transform(rep.F);

    auto add = [&](const std::string& name, bool ok, double observed, double bound) {
        rep.checks.push_back({name, ok, observed, bound});
        rep.all_pass = rep.all_pass && ok;
    };

    // corrected transform decay for the square wave: |ghat1(r)| <= 2/(p sin(pi |r|/p)) <= 1/|r|
    {
        double worst_ratio = 0.0;
        for (int64_t r = 1; r < p; ++r) {
            int64_t rb = std::llabs(signed_rep(r, p));
            double sharp = 2.0 / (static_cast<double>(p) *
                                  std::sin(M_PI * static_cast<double>(rb) / static_cast<double>(p)));
            double v = std::abs(g1h.coeffs[r]);
            worst_ratio = std::max(worst_ratio, v / std::min(sharp, 1.0 / static_cast<double>(rb)));
        }
        add("g1_decay_ok", worst_ratio <= 1.0 + 1e-9, worst_ratio, 1.0 + 1e-9);
    }

    // ghat2(r) >= (1 - 4/C^2)/|r| for r != 0, symmetric and nonnegative
    {
        double lower_margin = 1e300, worst_neg = 0.0, sym = 0.0;
        for (int64_t r = 1; r < p; ++r) {
            int64_t rb = std::llabs(signed_rep(r, p));
            double v = g2h.coeffs[r].real();
            lower_margin = std::min(lower_margin, v * static_cast<double>(rb));
            worst_neg = std::min(worst_neg, v);
            sym = std::max(sym, std::abs(g2h.coeffs[r] - g2h.coeffs[p - r]));
        }
        double claim = 1.0 - 4.0 / (c * c);
        add("g2_lower_ok", lower_margin >= claim - 1e-9, lower_margin, claim);
        add("g2_nonneg", worst_neg >= -1e-9, worst_neg, -1e-9);
        add("g2_symmetric", sym <= 1e-9, sym, 1e-9);
        double l1g2 = spectral_l1(g2h);
        double maj = g2_l1_majorant(p, c);
        add("g2_l1", l1g2 <= maj + 1e-9, l1g2, maj);
        add("g2_value_order", rep.g2.values[0] >= rep.g2.values[1], rep.g2.values[0],
            rep.g2.values[1]);
    }

    // ghat3 symmetric nonnegative off 0
    {
        double worst = 0.0;
        for (int64_t r = 1; r < p; ++r) worst = std::min(worst, g3h.coeffs[r].real());
        add("g3_spec_nonneg", worst >= -1e-9, worst, -1e-9);
    }

    rep.min_abs_g3 = 1e300;
    for (double v : rep.g3.values) rep.min_abs_g3 = std::min(rep.min_abs_g3, std::abs(v));
    add("g3_floor_ok", rep.min_abs_g3 >= 0.25, rep.min_abs_g3, 0.25);

    rep.min_abs_g4 = 1e300;
    for (double v : rep.g4.values) rep.min_abs_g4 = std::min(rep.min_abs_g4, std::abs(v));
    add("g4_floor_ok", rep.min_abs_g4 >= 0.2, rep.min_abs_g4, 0.2);

    {
        double worst = 0.0, sym = 0.0;
        for (int64_t r = 0; r < p; ++r) {
            worst = std::min(worst, rep.F_hat.coeffs[r].real());
            sym = std::max(sym, std::abs(rep.F_hat.coeffs[r] - rep.F_hat.coeffs[(p - r) % p]));
        }
        add("F_spec_nonneg", worst >= -1e-9, worst, -1e-9);
        add("F_spec_symmetric", sym <= 1e-9, sym, 1e-9);
        double l1 = spectral_l1(rep.F_hat);
        add("F_spec_l1", l1 <= 1.0 + 1e-9, l1, 1.0 + 1e-9);
        double fmean = pairwise_sum(rep.F.values) / static_cast<double>(p);
        add("F_mean", std::abs(fmean) <= 1e-9, std::abs(fmean), 1e-9);
        rep.f_min_abs = 1e300;
        for (double v : rep.F.values) rep.f_min_abs = std::min(rep.f_min_abs, std::abs(v));
        double floor = 0.2 / rep.g4_spectral_l1 - 1e-9;
        add("F_min_abs", rep.f_min_abs >= floor, rep.f_min_abs, floor);
    }

    if (enforce && !rep.all_pass) {
        std::string fails;
        for (const auto& ck : rep.checks)
            if (!ck.ok)
                fails += ck.name + " (observed " + std::to_string(ck.observed) + ", bound " +
                         std::to_string(ck.bound) + ") ";
        throw CheckFailed(fails.empty() ? "construction" : fails, "p = " + std::to_string(p));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// spectral square root and random signs
// ---------------------------------------------------------------------------

SqrtSpectrumResult sqrt_spectrum(const ConstructionReport& report) {
    const int64_t p = report.p;
    SqrtSpectrumResult out;
    std::vector<cplx> c(p, cplx(0, 0));
    for (int64_t r = 1; r <= (p - 1) / 2; ++r) {
        double v = report.F_hat.coeffs[r].real();
        if (v < 0.0) {
            out.clipped_mass += -v;
            v = 0.0;
        }
        double s = std::sqrt(v);
        c[r] = cplx(s, 0);
        c[p - r] = cplx(s, 0);
    }
    out.clipped_mass += std::max(0.0, -report.F_hat.coeffs[0].real());
    if (out.clipped_mass > 1e-6)
        throw Error("NegativeSpectrum", "clipped mass " + std::to_string(out.clipped_mass));
    out.f = inverse_transform(Spectrum(p, std::move(c)));
    return out;
}

ZpFunction make_signed_function(const ConstructionReport& report, const SignVector& signs) {
    const int64_t p = report.p;
    if (static_cast<int64_t>(signs.xi.size()) != (p - 1) / 2 + 1)
        throw Error("BadParams", "sign vector length must be (p+1)/2");
    std::vector<cplx> c(p, cplx(0, 0));
    for (int64_t r = 1; r <= (p - 1) / 2; ++r) {
        double v = std::max(0.0, report.F_hat.coeffs[r].real());
        double s = static_cast<double>(signs.xi[r]) * std::sqrt(v);
        c[r] = cplx(s, 0);
        c[p - r] = cplx(s, 0);
    }
    return inverse_transform(Spectrum(p, std::move(c)));
}

SignedFunction random_sign_f(const ConstructionReport& report, const ConstructionConfig& cfg,
                             uint64_t seed) {
    cfg.validate();
    const int64_t p = report.p;
    for (int trial = 0; trial < cfg.resample_cap; ++trial) {
        SignVector signs;
        signs.seed = seed;
        signs.trial = static_cast<uint64_t>(trial);
        CounterRng rng(seed, 0x5167u + static_cast<uint64_t>(trial));
        signs.xi.resize((p - 1) / 2 + 1);
        for (int64_t r = 0; r <= (p - 1) / 2; ++r)
            signs.xi[r] = static_cast<int8_t>(rng.sign(static_cast<uint64_t>(r)));
        ZpFunction f = make_signed_function(report, signs);
        std::vector<double> ex(p);
        for (int64_t x = 0; x < p; ++x) ex[x] = std::exp(cfg.c_exp * f.values[x] * f.values[x]);
        double moment = pairwise_sum(ex) / static_cast<double>(p);
        if (moment <= cfg.moment_threshold)
            return SignedFunction{std::move(f), std::move(signs), moment, trial};
    }
    throw Error("ResampleCapExceeded", "no sign vector met the moment threshold; check c_exp");
}

// ---------------------------------------------------------------------------
// clipping, unit-range map, rounding
// ---------------------------------------------------------------------------

ClipResult clip_to_bounded(const SignedFunction& sf, const ConstructionConfig& cfg) {
    const int64_t p = sf.f.p;
    ClipResult out;
    double lp = std::log(static_cast<double>(p));
    // smallest threshold whose Markov bound pins E 1_A under min((log p)^-10, 1/p)
    double target = std::min(std::pow(lp, -10.0), 1.0 / static_cast<double>(p));
    out.threshold = std::sqrt(std::log(3.0 / target) / cfg.c_exp);

    std::vector<int64_t> a;
    for (int64_t x = 0; x < p; ++x)
        if (std::abs(sf.f.values[x]) >= out.threshold) a.push_back(x);
    out.a_prime = a;

    std::vector<double> v = sf.f.values;
    if (!a.empty()) {
        double off_sum = pairwise_sum(v);
        for (int64_t x : a) off_sum -= v[x];
        out.kappa = -off_sum / static_cast<double>(a.size());
        for (int64_t x : a) v[x] = out.kappa;
    }
    out.f = ZpFunction(p, std::move(v));

    std::vector<double> diff2(p);
    for (int64_t x = 0; x < p; ++x) {
        double d = out.f.values[x] - sf.f.values[x];
        diff2[x] = d * d;
    }
    out.l2_change = std::sqrt(pairwise_sum(diff2) / static_cast<double>(p));
    out.stability_bound = out.l2_change * (norms(out.f).l2 + norms(sf.f).l2);
    ZpFunction c1 = convolve(out.f, reflect(out.f));
    ZpFunction c2 = convolve(sf.f, reflect(sf.f));
    for (int64_t x = 0; x < p; ++x)
        out.stability_observed = std::max(out.stability_observed,
                                          std::abs(c1.values[x] - c2.values[x]));
    return out;
}

ZpFunction unit_range_map(const ZpFunction& f) {
    Norms n = norms(f);
    if (n.linf == 0.0) throw Error("ZeroFunction", "cannot normalize the zero function");
    if (std::abs(n.mean) > 1e-9)
        throw Error("PreconditionFailed", "unit-range map needs E f = 0");
    std::vector<double> v(f.p);
    for (int64_t x = 0; x < f.p; ++x) v[x] = 0.5 + f.values[x] / (2.0 * n.linf);
    return ZpFunction(f.p, std::move(v));
}

RoundingReport round_to_set(const ZpFunction& f_tilde, const ConstructionConfig& cfg,
                            uint64_t seed) {
    cfg.validate();
    const int64_t p = f_tilde.p;
    for (double v : f_tilde.values)
        if (v < -1e-12 || v > 1.0 + 1e-12)
            throw Error("BadParams", "rounding needs values in [0,1]");
    const int64_t target = p / 2;
    const double pf = static_cast<double>(p);
    const double size_window = std::pow(pf, 2.0 / 3.0);
    const double corr_window = std::pow(pf, -1.0 / 3.0);
    ZpFunction ft_corr = convolve(f_tilde, reflect(f_tilde));

    for (int trial = 0; trial < cfg.round_retry_cap; ++trial) {
        CounterRng rng(seed, 0xb0b5u + static_cast<uint64_t>(trial));
        std::vector<double> ind(p, 0.0);
        std::vector<int64_t> b;
        for (int64_t x = 0; x < p; ++x) {
            if (rng.bernoulli(static_cast<uint64_t>(x), f_tilde.values[x])) {
                ind[x] = 1.0;
                b.push_back(x);
            }
        }
        double size_dev = std::abs(static_cast<double>(b.size()) - pf / 2.0);
        if (size_dev > size_window) continue;
        ZpFunction bind(p, ind);
        ZpFunction bcorr = convolve(bind, reflect(bind));
        double corr_dev = 0.0;
        for (int64_t x = 1; x < p; ++x)
            corr_dev = std::max(corr_dev, std::abs(bcorr.values[x] - ft_corr.values[x]));
        if (corr_dev > corr_window) continue;

        RoundingReport rep;
        rep.retries = trial;
        rep.size_dev = size_dev;
        rep.corr_dev_max = corr_dev;
        rep.b_set = b;

        // resize to exactly floor(p/2) with smallest-index edits
        std::vector<char> in_a(p, 0);
        for (int64_t x : b) in_a[x] = 1;
        int64_t have = static_cast<int64_t>(b.size());
        for (int64_t x = 0; x < p && have > target; ++x)
            if (in_a[x]) { in_a[x] = 0; --have; }
        for (int64_t x = 0; x < p && have < target; ++x)
            if (!in_a[x]) { in_a[x] = 1; ++have; }
        std::vector<double> aind(p, 0.0);
        for (int64_t x = 0; x < p; ++x) {
            if (in_a[x]) {
                rep.a_set.push_back(x);
                aind[x] = 1.0;
            }
        }
        int64_t moved = std::llabs(static_cast<int64_t>(b.size()) - target);
        rep.l2_adjust = std::sqrt(static_cast<double>(moved) / pf);

        ZpFunction af(p, aind);
        ZpFunction acorr = convolve(af, reflect(af));
        for (int64_t x = 0; x < p; ++x)
            rep.adjust_stability =
                std::max(rep.adjust_stability, std::abs(acorr.values[x] - bcorr.values[x]));

        // resize-stability guards; both follow from the l2 perturbation bound
        double na = std::sqrt(static_cast<double>(target) / pf);
        double nb = std::sqrt(static_cast<double>(b.size()) / pf);
        if (rep.adjust_stability > rep.l2_adjust * (na + nb) + 1e-12)
            throw CheckFailed("adjust_stability", "autocorrelation moved more than the l2 bound");
        if (rep.l2_adjust > 2.0 * std::pow(pf, -1.0 / 6.0))
            throw CheckFailed("adjust_l2", "resize moved more than 2 p^(-1/6) in l2");
        if (rep.adjust_stability > 4.0 * std::pow(pf, -1.0 / 6.0))
            throw CheckFailed("adjust_stability_window", "resize shifted counts beyond 4 p^(-1/6)");

        // exact intersection counts from the correlation, with residual guard
        rep.final_min_dev = 1e300;
        for (int64_t x = 0; x < p; ++x) {
            double raw = pf * acorr.values[x];
            double count = std::round(raw);
            if (std::abs(raw - count) > 1e-6)
                throw CheckFailed("count_rounding", "correlation residual too large");
            rep.final_min_dev = std::min(rep.final_min_dev, std::abs(count - pf / 4.0));
        }
        return rep;
    }
    throw Error("RetryCapExceeded", "no trial met both rounding acceptance inequalities");
}

double hoeffding_bound(int64_t m, double t) {
    return 2.0 * std::exp(-static_cast<double>(m) * t * t / 2.0);
}

std::array<std::vector<int64_t>, 3> cycle_partition(int64_t p, int64_t x) {
    if (p < 3 || !is_prime(p)) throw Error("BadParams", "need an odd prime p >= 3");
    int64_t step = ((x % p) + p) % p;
    if (step == 0) throw Error("BadParams", "step must be nonzero");
    // color the cycle positions 0..p-1 by j mod 3, repairing the wrap join
    std::vector<int> color(p);
    for (int64_t j = 0; j < p; ++j) color[j] = static_cast<int>(j % 3);
    if (color[p - 1] == color[0]) {
        for (int cnew = 0; cnew < 3; ++cnew) {
            if (cnew != color[p - 2] && cnew != color[0]) {
                color[p - 1] = cnew;
                break;
            }
        }
    }
    std::array<std::vector<int64_t>, 3> classes;
    int64_t elem = 0;
    for (int64_t j = 0; j < p; ++j) {
        classes[color[j]].push_back(elem);
        elem += step;
        if (elem >= p) elem -= p;
    }
    for (auto& cl : classes) std::sort(cl.begin(), cl.end());
    return classes;
}

}  // namespace lwp
