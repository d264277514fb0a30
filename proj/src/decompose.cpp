#include "lwp/decompose.hpp"

#include <algorithm>
#include <cmath>

namespace lwp {

DecompositionParams::DecompositionParams(double eps, std::optional<int64_t> outer,
                                         std::optional<int64_t> inner) {
    if (!(eps > 0.0 && eps < 1.0))
        throw Error("BadParams", "epsilon must lie in (0,1)");
    epsilon = eps;
    int64_t outer_min = static_cast<int64_t>(std::ceil(2.0 / eps));
    int64_t inner_min = static_cast<int64_t>(std::ceil(2.0 / (eps * eps)));
    outer_cap = outer.value_or(outer_min + 2);
    inner_cap = inner.value_or(inner_min + 2);
    if (outer_cap < outer_min || inner_cap < inner_min)
        throw Error("BadParams", "caps below the guaranteed iteration bounds");
}

// ---------------------------------------------------------------------------
// U-window machinery
// ---------------------------------------------------------------------------

std::vector<double> u_window_profile(const std::vector<double>& mags,
                                     const std::vector<int64_t>& u, int64_t p) {
    const int64_t cost = static_cast<int64_t>(u.size()) * p;
    std::vector<double> w(p, 0.0);
    if (cost <= (int64_t{1} << 24) || p <= P_DIRECT) {
        for (int64_t g = 0; g < p; ++g) {
            double acc = 0.0;
            for (int64_t t : u) {
                int64_t idx = g + t;
                if (idx >= p) idx -= p;
                acc += mags[idx];
            }
            w[g] = acc;
        }
        return w;
    }
    // w(g) = sum_t mags(g+t) 1_U(t) = p * (mags * 1_U-reflected)(g)
    ZpFunction a(p, mags);
    std::vector<double> ind(p, 0.0);
    for (int64_t t : u) ind[t] = 1.0;
    ZpFunction conv = convolve(a, reflect(ZpFunction(p, std::move(ind))));
    for (int64_t g = 0; g < p; ++g) w[g] = static_cast<double>(p) * conv.values[g];
    return w;
}

double u_window_sup(const Spectrum& s, const std::vector<int64_t>& u) {
    std::vector<double> mags(s.p);
    for (int64_t r = 0; r < s.p; ++r) mags[r] = std::abs(s.coeffs[r]);
    std::vector<double> w = u_window_profile(mags, u, s.p);
    return *std::max_element(w.begin(), w.end());
}

// ---------------------------------------------------------------------------
// the double iteration
// ---------------------------------------------------------------------------

namespace {

// Regular radius strictly inside the ratio-2 real window (lo, 2*lo).
Rational regular_in_window(const CharacterSet& chars, double lo) {
    Rational delta = simplest_in_real_interval(lo * (1.0 + 1e-12), lo * 1.02);
    Rational cap = simplest_in_real_interval(lo * 1.98, lo * 2.0 * (1.0 - 1e-12));
    return find_regular_value(chars, delta, cap);
}

struct IterationState {
    CharacterSet chars;
    Rational eta, eta_prime;
    BohrSet b, b_small;
    ZpFunction f1, g;
    Spectrum g_hat;
    std::vector<int64_t> u;
};

IterationState enter_outer(const ZpFunction& f, const CharacterSet& chars, const Rational& eta,
                           const Rational& eta_prime, double eps2) {
    IterationState st;
    st.chars = chars;
    st.eta = eta;
    st.eta_prime = eta_prime;
    st.b = build_bohr(chars, eta);
    st.b_small = build_bohr(chars, eta_prime);
    st.f1 = convolve(f, cutoff_density(st.b));
    std::vector<double> gv(f.p);
    for (int64_t x = 0; x < f.p; ++x) gv[x] = f.values[x] - st.f1.values[x];
    st.g = ZpFunction(f.p, std::move(gv));
    st.g_hat = forward_transform(st.g);
    Spectrum bh = cutoff_spectrum(st.b_small);
    for (int64_t chi = 0; chi < f.p; ++chi)
        if (std::abs(bh.coeffs[chi]) >= eps2) st.u.push_back(chi);
    return st;
}

}  // namespace

DecompositionCertificate run_decomposition(const ZpFunction& f, const DecompositionParams& params) {
    const int64_t p = f.p;
    const double eps = params.epsilon;
    const double eps2 = eps * eps;

    Spectrum f_hat = forward_transform(f);
    double l1 = spectral_l1(f_hat);
    if (l1 > 1.0 + 1e-9)
        throw Error("PreconditionFailed", "||fhat||_1 = " + std::to_string(l1) + " exceeds 1");
    double mean = norms(f).mean;
    if (std::abs(mean) > 1e-9)
        throw Error("PreconditionFailed", "E f = " + std::to_string(mean) + " is not 0");

    DecompositionCertificate cert;
    cert.epsilon = eps;

    // Gamma_0 = empty, eta_0 = 1 (clamped to the vacuous radius 1/2)
    CharacterSet chars(p, {});
    Rational eta0 = half();
    Rational etap0 = regular_in_window(chars, eps2 * eta0.value() / 400.0);
    IterationState st = enter_outer(f, chars, eta0, etap0, eps2);
    cert.outer_states.push_back({st.chars.gamma, st.eta, st.eta_prime});

    std::vector<char> used(p, 0);            // Omega_j plus this level's S sets
    std::vector<int64_t> picked_this_level;  // gamma_{j,1..i}
    int64_t j = 0, i = 0, selections = 0;
    double s_mass_this_level = 0.0;

    while (true) {
        if (s_mass_this_level >= eps) {
            // outer step: absorb the selected characters and shrink the radii
            std::vector<int64_t> next_gamma = st.chars.gamma;
            next_gamma.insert(next_gamma.end(), picked_this_level.begin(), picked_this_level.end());
            int64_t d_prev = std::max<int64_t>(st.chars.d(), 1);
            CharacterSet enlarged(p, next_gamma);
            double eta_lo = (eps * eps2) * st.eta_prime.value() / (800.0 * static_cast<double>(d_prev));
            Rational eta_next = regular_in_window(enlarged, eta_lo);
            int64_t d_next = std::max<int64_t>(enlarged.d(), 1);
            Rational etap_next =
                regular_in_window(enlarged, eps2 * eta_next.value() / (400.0 * static_cast<double>(d_next)));
            st = enter_outer(f, enlarged, eta_next, etap_next, eps2);
            cert.outer_states.push_back({st.chars.gamma, st.eta, st.eta_prime});
            picked_this_level.clear();
            s_mass_this_level = 0.0;
            ++j;
            i = 0;
            if (j > params.outer_cap)
                throw Error("IterationCapExceeded", "outer steps exceeded cap (bug: the outer count is provably bounded)");
            continue;
        }

        // split g = f2 + f3 along the used-frequency set
        std::vector<double> mags2(p);
        for (int64_t r = 0; r < p; ++r)
            mags2[r] = used[r] ? 0.0 : std::abs(st.g_hat.coeffs[r]);
        std::vector<double> w = u_window_profile(mags2, st.u, p);
        double sup = *std::max_element(w.begin(), w.end());
        if (sup <= eps2 * (1.0 + 1e-9)) break;  // STOP

        int64_t gamma_sel = -1;
        for (int64_t g = 0; g < p; ++g)
            if (w[g] >= sup - 1e-12) { gamma_sel = g; break; }

        // S_{j,i+1} = +-(gamma + U) minus used; symmetric so the split stays real
        std::vector<int64_t> s_new;
        for (int64_t t : st.u) {
            int64_t a = gamma_sel + t;
            if (a >= p) a -= p;
            if (!used[a]) { used[a] = 1; s_new.push_back(a); }
            int64_t bneg = (2 * p - gamma_sel - t) % p;
            if (!used[bneg]) { used[bneg] = 1; s_new.push_back(bneg); }
        }
        std::sort(s_new.begin(), s_new.end());
        for (int64_t r : s_new) s_mass_this_level += std::abs(st.g_hat.coeffs[r]);
        picked_this_level.push_back(gamma_sel);
        ++i;
        cert.ledger.push_back({j, i, gamma_sel, std::move(s_new)});
        if (++selections > params.inner_cap)
            throw Error("IterationCapExceeded", "selections exceeded cap (bug: the selection count is provably bounded)");
    }

    // assemble the certificate at STOP
    cert.gamma_final = st.chars;
    cert.eta = st.eta;
    cert.eta_prime = st.eta_prime;
    cert.u_set = st.u;
    std::vector<cplx> f3_hat(p, cplx(0, 0));
    for (int64_t r = 0; r < p; ++r)
        if (used[r]) f3_hat[r] = st.g_hat.coeffs[r];
    cert.f3 = inverse_transform(Spectrum(p, std::move(f3_hat)));
    std::vector<double> f2v(p);
    for (int64_t x = 0; x < p; ++x) f2v[x] = st.g.values[x] - cert.f3.values[x];
    cert.f2 = ZpFunction(p, std::move(f2v));
    cert.f1 = st.f1;

    cert.bounds.f3_spectral_l1 = spectral_l1(forward_transform(cert.f3));
    cert.bounds.u_window_sup = u_window_sup(forward_transform(cert.f2), cert.u_set);
    cert.bounds.gamma_size = cert.gamma_final.d();
    cert.bounds.outer_steps = j;
    if (static_cast<double>(cert.bounds.gamma_size) > 2.0 / eps2 + 1e-9)
        throw Error("IterationCapExceeded", "|Gamma| exceeded 2/eps^2 (bug)");
    if (static_cast<double>(j) > 2.0 / eps + 1e-9)
        throw Error("IterationCapExceeded", "outer steps exceeded 2/eps (bug)");
    return cert;
}

// ---------------------------------------------------------------------------
// certificate validation (independent recomputation)
// ---------------------------------------------------------------------------

const ValidationCheck* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

ValidationReport validate_certificate(const ZpFunction& f, const DecompositionCertificate& cert) {
    ValidationReport rep;
    const int64_t p = f.p;
    const double eps = cert.epsilon;
    const double eps2 = eps * eps;
    auto add = [&](const std::string& name, bool ok, double observed, double bound) {
        rep.checks.push_back({name, ok, observed, bound});
        rep.all_ok = rep.all_ok && ok;
    };

    Spectrum f_hat = forward_transform(f);
    double l1 = spectral_l1(f_hat);
    add("precondition_l1", l1 <= 1.0 + 1e-9, l1, 1.0 + 1e-9);
    double mean = norms(f).mean;
    add("precondition_mean", std::abs(mean) <= 1e-9, std::abs(mean), 1e-9);

    // pointwise sum
    double sum_defect = 0.0;
    for (int64_t x = 0; x < p; ++x)
        sum_defect = std::max(sum_defect,
                              std::abs(cert.f1.values[x] + cert.f2.values[x] + cert.f3.values[x] -
                                       f.values[x]));
    add("sum_identity", sum_defect <= 1e-9, sum_defect, 1e-9);

    // f1 = f * beta, recomputed from (Gamma, eta)
    BohrSet b = build_bohr(cert.gamma_final, cert.eta);
    ZpFunction f1r = convolve(f, cutoff_density(b));
    double f1_defect = 0.0;
    for (int64_t x = 0; x < p; ++x)
        f1_defect = std::max(f1_defect, std::abs(f1r.values[x] - cert.f1.values[x]));
    add("f1_recompute", f1_defect <= 1e-9, f1_defect, 1e-9);

    // spectral mass of the discard part
    double f3_mass = spectral_l1(forward_transform(cert.f3));
    add("f3_mass", f3_mass <= eps + 1e-9, f3_mass, eps + 1e-9);
    add("f3_mass_recorded", std::abs(f3_mass - cert.bounds.f3_spectral_l1) <= 1e-9,
        std::abs(f3_mass - cert.bounds.f3_spectral_l1), 1e-9);

    // U recomputed exactly from (Gamma, eta')
    BohrSet bs = build_bohr(cert.gamma_final, cert.eta_prime);
    Spectrum bh = cutoff_spectrum(bs);
    std::vector<int64_t> u2;
    for (int64_t chi = 0; chi < p; ++chi)
        if (std::abs(bh.coeffs[chi]) >= eps2) u2.push_back(chi);
    add("u_set", u2 == cert.u_set, static_cast<double>(u2.size()),
        static_cast<double>(cert.u_set.size()));

    // window sup by direct double loop over the certificate's own U
    Spectrum f2_hat = forward_transform(cert.f2);
    double sup = 0.0;
    {
        std::vector<double> mags(p);
        for (int64_t r = 0; r < p; ++r) mags[r] = std::abs(f2_hat.coeffs[r]);
        for (int64_t g = 0; g < p; ++g) {
            double acc = 0.0;
            for (int64_t t : cert.u_set) {
                int64_t idx = g + t;
                if (idx >= p) idx -= p;
                acc += mags[idx];
            }
            sup = std::max(sup, acc);
        }
    }
    add("u_window_sup", sup <= eps2 + 1e-9, sup, eps2 + 1e-9);
    add("u_window_sup_recorded", std::abs(sup - cert.bounds.u_window_sup) <= 1e-9,
        std::abs(sup - cert.bounds.u_window_sup), 1e-9);

    // ledger S sets pairwise disjoint
    {
        std::vector<char> seen(p, 0);
        bool disjoint = true;
        double mass_on_s = 0.0;
        for (const auto& e : cert.ledger) {
            for (int64_t r : e.s_set) {
                if (seen[r]) disjoint = false;
                seen[r] = 1;
                mass_on_s += std::abs(f_hat.coeffs[r]);
            }
        }
        add("s_disjoint", disjoint, 0.0, 0.0);
        add("s_mass_accounting", mass_on_s <= l1 * (1.0 + 1e-9), mass_on_s, l1 * (1.0 + 1e-9));
    }

    // radii chain: regularity plus the window constraints at every level
    bool ranges_ok = true, regular_ok = true;
    for (size_t jj = 0; jj < cert.outer_states.size(); ++jj) {
        const OuterState& os = cert.outer_states[jj];
        CharacterSet cs(p, os.gamma);
        regular_ok = regular_ok && verify_regular(cs, os.eta) && verify_regular(cs, os.eta_prime);
        double d = static_cast<double>(std::max<int64_t>(cs.d(), 1));
        double ev = os.eta.value(), epv = os.eta_prime.value();
        ranges_ok = ranges_ok && epv >= eps2 * ev / (400.0 * d) * (1.0 - 1e-9) &&
                    epv <= eps2 * ev / (200.0 * d) * (1.0 + 1e-9);
        if (jj + 1 < cert.outer_states.size()) {
            double lo = eps * eps2 * epv / (800.0 * d), hi = eps * eps2 * epv / (400.0 * d);
            double next = cert.outer_states[jj + 1].eta.value();
            ranges_ok = ranges_ok && next >= lo * (1.0 - 1e-9) && next <= hi * (1.0 + 1e-9);
        }
    }
    add("eta_ranges", ranges_ok, 0.0, 0.0);
    add("eta_regular", regular_ok, 0.0, 0.0);

    add("gamma_size_bound", static_cast<double>(cert.bounds.gamma_size) <= 2.0 / eps2 + 1e-9,
        static_cast<double>(cert.bounds.gamma_size), 2.0 / eps2);
    add("outer_steps_bound", static_cast<double>(cert.bounds.outer_steps) <= 2.0 / eps + 1e-9,
        static_cast<double>(cert.bounds.outer_steps), 2.0 / eps);

    // final state consistency
    add("final_state", !cert.outer_states.empty() &&
                           cert.outer_states.back().gamma == cert.gamma_final.gamma &&
                           cert.outer_states.back().eta == cert.eta &&
                           cert.outer_states.back().eta_prime == cert.eta_prime,
        0.0, 0.0);
    return rep;
}

// ---------------------------------------------------------------------------
// locators
// ---------------------------------------------------------------------------

int64_t discrete_ivt(const ZpFunction& f1, const BohrSet& b_small, double /*eps*/) {
    const int64_t p = f1.p;
    double mean = norms(f1).mean;
    if (std::abs(mean) > 1e-9)
        throw Error("PreconditionFailed", "E f1 must vanish for the sign-change walk");
    if (b_small.size < 2)
        throw Error("EmptyBohr", "no nonzero step available: feasibility condition failed");
    int64_t t = 0;
    for (int64_t x = 1; x < p; ++x)
        if (b_small.contains(x)) { t = x; break; }

    int64_t best_x = 0;
    double best_v = std::abs(f1.values[0]);
    int64_t x = 0;
    for (int64_t step = 0; step < p; ++step) {
        double v = f1.values[x];
        if (std::abs(v) <= 1e-12) return x;
        int64_t nx = x + t;
        if (nx >= p) nx -= p;
        double w = f1.values[nx];
        if (v * w < 0.0) return std::abs(v) <= std::abs(w) ? x : nx;
        if (std::abs(v) < best_v) { best_v = std::abs(v); best_x = x; }
        x = nx;
    }
    // reachable only when the mean tolerance hides a one-signed function
    return best_x;
}

namespace {

LocatorResult locate_with_eps(const ZpFunction& f, double eps) {
    DecompositionParams params(eps);
    DecompositionCertificate cert = run_decomposition(f, params);
    BohrSet b_small = build_bohr(cert.gamma_final, cert.eta_prime);
    if (b_small.size < 2)
        throw Error("Infeasible", "B(Gamma, eta') = {0}: p too small for epsilon = " +
                                      std::to_string(eps));
    LocatorResult res;
    res.epsilon_used = eps;
    res.vacuous_regime = eps > 0.125;
    res.x0 = discrete_ivt(cert.f1, b_small, eps);
    res.t_used = 0;
    for (int64_t x = 1; x < f.p; ++x)
        if (b_small.contains(x)) { res.t_used = x; break; }

    // scan x0 + B(Gamma, eta'): some point has |f2| <= 3 eps, and every point
    // has |f1| <= 4 eps and |f3| <= eps, so the minimum is a valid witness
    int64_t best = -1;
    double best_v = 0.0;
    for (int64_t b = 0; b < f.p; ++b) {
        if (!b_small.contains(b)) continue;
        int64_t x = res.x0 + b;
        if (x >= f.p) x -= f.p;
        double v = std::abs(f.values[x]);
        if (best < 0 || v < best_v) { best = x; best_v = v; }
    }
    res.x_found = best;
    res.value = f.values[best];
    res.certificate = std::move(cert);
    if (std::abs(res.value) > 8.0 * eps + 1e-9)
        throw CheckFailed("locator_bound", "|f(x)| = " + std::to_string(std::abs(res.value)) +
                                               " exceeds 8*epsilon");
    return res;
}

}  // namespace

LocatorResult locate_small_value(const ZpFunction& f, std::optional<double> eps, double c_eps) {
    if (eps.has_value()) return locate_with_eps(f, *eps);
    double lp = std::log(static_cast<double>(f.p));
    double e = c_eps * std::cbrt(std::log(lp) / lp);
    e = std::min(e, EPS_MAX);
    while (true) {
        try {
            return locate_with_eps(f, e);
        } catch (const Error& err) {
            if (err.kind() != "Infeasible" || e >= EPS_MAX) throw;
            e = std::min(e * 1.25, EPS_MAX);
        }
    }
}

LittlewoodReport littlewood_lower_report(int64_t p, const std::vector<int64_t>& a_set) {
    if (static_cast<int64_t>(a_set.size()) != p / 2)
        throw Error("WrongCardinality", "need |A| = floor(p/2)");
    ZpFunction ind = ZpFunction::indicator(p, a_set);
    if (static_cast<int64_t>(a_set.size()) !=
        static_cast<int64_t>(pairwise_sum(ind.values) + 0.5))
        throw Error("WrongCardinality", "duplicate elements in A");
    LittlewoodReport rep;
    rep.p = p;
    rep.spectral_l1 = spectral_l1(forward_transform(ind));

    // f0 = (2*1_A - 1 - mean)/||(2*1_A - 1 - mean)hat||_1 is exactly mean-zero
    // with unit spectral mass; |2*1_A - 1| = 1 pointwise makes the located
    // small value a lower bound for the spectral mass.
    std::vector<double> gv(p);
    for (int64_t x = 0; x < p; ++x) gv[x] = 2.0 * ind.values[x] - 1.0;
    ZpFunction g(p, gv);
    double m = norms(g).mean;
    Spectrum gh = forward_transform(g);
    std::vector<double> mags(p, 0.0);
    for (int64_t r = 1; r < p; ++r) mags[r] = std::abs(gh.coeffs[r]);
    double l1_rest = pairwise_sum(mags);
    std::vector<double> f0(p);
    for (int64_t x = 0; x < p; ++x) f0[x] = (gv[x] - m) / l1_rest;
    LocatorResult loc = locate_small_value(ZpFunction(p, f0), std::nullopt);
    rep.epsilon_used = loc.epsilon_used;
    rep.located_value = loc.value;
    double pf = static_cast<double>(p);
    rep.bound_8eps = 1.0 / pf + (1.0 - 1.0 / pf) / (8.0 * loc.epsilon_used);
    return rep;
}

GowersResult gowers_locate(const ZpFunction& f, const ZpFunction& g) {
    if (f.p != g.p) throw Error("ModulusMismatch", "gowers_locate needs equal moduli");
    Norms nf = norms(f), ng = norms(g);
    if (nf.l2 > 1.0 + 1e-9 || ng.l2 > 1.0 + 1e-9)
        throw Error("PreconditionFailed", "need ||f||_2, ||g||_2 <= 1");
    const int64_t p = f.p;
    std::vector<double> f0(p), g0(p);
    for (int64_t x = 0; x < p; ++x) {
        f0[x] = f.values[x] - nf.mean;
        g0[x] = g.values[x] - ng.mean;
    }
    ZpFunction h = convolve(ZpFunction(p, std::move(f0)), ZpFunction(p, std::move(g0)));
    LocatorResult loc = locate_small_value(h, std::nullopt);
    GowersResult res;
    res.x = loc.x_found;
    res.deviation = std::abs(loc.value);
    res.epsilon_used = loc.epsilon_used;
    return res;
}

}  // namespace lwp
