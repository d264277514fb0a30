#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "lwp/decompose.hpp"
#include "lwp/rng.hpp"

using namespace lwp;

namespace {

// mean-zero random function rescaled to unit spectral mass
ZpFunction random_unit_l1(int64_t p, uint64_t seed) {
    CounterRng rng(seed, 11);
    std::vector<double> v(p);
    for (int64_t x = 0; x < p; ++x) v[x] = rng.symmetric(x);
    double m = pairwise_sum(v) / static_cast<double>(p);
    for (double& x : v) x -= m;
    ZpFunction f(p, v);
    double l1 = spectral_l1(forward_transform(f));
    for (double& x : v) x /= l1;
    return ZpFunction(p, std::move(v));
}

// real function with prescribed one-sided spectrum masses at given frequencies
ZpFunction from_masses(int64_t p, const std::vector<std::pair<int64_t, double>>& one_sided) {
    std::vector<cplx> c(p, cplx(0, 0));
    for (auto& [r, a] : one_sided) {
        c[r] += cplx(a, 0);
        c[p - r] += cplx(a, 0);
    }
    return inverse_transform(Spectrum(p, std::move(c)));
}

ZpFunction cosine(int64_t p, int64_t freq) {
    std::vector<double> v(p);
    for (int64_t x = 0; x < p; ++x)
        v[x] = std::cos(2.0 * M_PI * static_cast<double>(freq * x % p) / static_cast<double>(p));
    return ZpFunction(p, std::move(v));
}

// random floor(p/2)-subset via partial shuffle
std::vector<int64_t> random_half_set(int64_t p, CounterRng& rng, uint64_t& ctr) {
    std::vector<int64_t> perm(p);
    for (int64_t i = 0; i < p; ++i) perm[i] = i;
    for (int64_t i = p - 1; i > 0; --i)
        std::swap(perm[i], perm[static_cast<int64_t>(rng.below(ctr++, i + 1))]);
    return std::vector<int64_t>(perm.begin(), perm.begin() + p / 2);
}

// f0 = (2*1_A - 1 - mean)/spectral mass: mean-zero, unit spectral mass
ZpFunction balanced_set_function(int64_t p, const std::vector<int64_t>& a) {
    ZpFunction ind = ZpFunction::indicator(p, a);
    std::vector<double> gv(p);
    for (int64_t x = 0; x < p; ++x) gv[x] = 2.0 * ind.values[x] - 1.0;
    double m = pairwise_sum(gv) / static_cast<double>(p);
    for (double& v : gv) v -= m;
    ZpFunction g(p, gv);
    double l1 = spectral_l1(forward_transform(g));
    for (double& v : gv) v /= l1;
    return ZpFunction(p, std::move(gv));
}

}  // namespace

TEST_CASE("u_window_sup: trivial windows and direct-loop oracle") {
    ZpFunction f = random_unit_l1(257, 3);
    Spectrum s = forward_transform(f);

    double mx = 0.0, tot = 0.0;
    for (auto& c : s.coeffs) {
        mx = std::max(mx, std::abs(c));
        tot += std::abs(c);
    }
    CHECK(u_window_sup(s, {0}) == doctest::Approx(mx).epsilon(1e-12));

    std::vector<int64_t> all(257);
    for (int64_t i = 0; i < 257; ++i) all[i] = i;
    CHECK(u_window_sup(s, all) == doctest::Approx(tot).epsilon(1e-10));

    CounterRng rng(5, 0);
    std::vector<int64_t> u;
    for (int64_t t = 0; t < 257; ++t)
        if (rng.bernoulli(t, 0.2)) u.push_back(t);
    double direct = 0.0;
    for (int64_t g = 0; g < 257; ++g) {
        double acc = 0.0;
        for (int64_t t : u) acc += std::abs(s.coeffs[(g + t) % 257]);
        direct = std::max(direct, acc);
    }
    CHECK(u_window_sup(s, u) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("u_window_profile transform path matches direct sums") {
    // |U| * p above the cost threshold forces the transform route
    const int64_t p = 4099;
    ZpFunction f = random_unit_l1(p, 17);
    Spectrum s = forward_transform(f);
    std::vector<double> mags(p);
    for (int64_t r = 0; r < p; ++r) mags[r] = std::abs(s.coeffs[r]);
    std::vector<int64_t> all(p);
    for (int64_t i = 0; i < p; ++i) all[i] = i;
    std::vector<double> prof = u_window_profile(mags, all, p);
    double tot = 0.0;
    for (double m : mags) tot += m;
    for (int64_t g = 0; g < p; g += 97) CHECK(prof[g] == doctest::Approx(tot).epsilon(1e-9));
}

TEST_CASE("decomposition preconditions and parameter validation") {
    auto half_mean = ZpFunction::constant(101, 0.5);
    CHECK_THROWS_AS(run_decomposition(half_mean, DecompositionParams(0.3)), Error);
    ZpFunction big = random_unit_l1(101, 4);
    for (double& v : big.values) v *= 3.0;
    CHECK_THROWS_AS(run_decomposition(ZpFunction(101, big.values), DecompositionParams(0.3)), Error);
    CHECK_THROWS_AS(DecompositionParams(0.0), Error);
    CHECK_THROWS_AS(DecompositionParams(1.5), Error);
    CHECK_THROWS_AS(DecompositionParams(0.3, 1, 1), Error);  // caps below bounds
}

TEST_CASE("decomposition of the zero function is immediate") {
    DecompositionCertificate cert =
        run_decomposition(ZpFunction::zeros(101), DecompositionParams(0.3));
    CHECK(cert.gamma_final.d() == 0);
    CHECK(cert.bounds.outer_steps == 0);
    CHECK(cert.ledger.empty());
    for (int x = 0; x < 101; ++x) {
        CHECK(cert.f1.values[x] == doctest::Approx(0.0));
        CHECK(cert.f2.values[x] == doctest::Approx(0.0));
        CHECK(cert.f3.values[x] == doctest::Approx(0.0));
    }
    CHECK(validate_certificate(ZpFunction::zeros(101), cert).all_ok);
}

TEST_CASE("cosine input: one selection, one outer step, clean stop") {
    const int64_t p = 1009;
    ZpFunction f = cosine(p, 1);  // spectral mass 1/2 + 1/2
    DecompositionCertificate cert = run_decomposition(f, DecompositionParams(0.3));
    REQUIRE(cert.ledger.size() == 1);
    CHECK(cert.ledger[0].gamma == 1);
    CHECK(cert.ledger[0].s_set == std::vector<int64_t>{1, p - 1});
    CHECK(cert.bounds.outer_steps == 1);
    CHECK(cert.gamma_final.d() == 1);
    CHECK(cert.gamma_final.gamma[0] == 1);
    CHECK(cert.bounds.gamma_size <= 2);
    // after the radii collapse the Bohr set is {0}, so g vanishes
    CHECK(cert.bounds.f3_spectral_l1 <= 1e-12);
    CHECK(cert.bounds.u_window_sup <= 1e-12);
    ValidationReport rep = validate_certificate(f, cert);
    for (auto& c : rep.checks)
        if (!c.ok) MESSAGE(c.name, " observed=", c.observed, " bound=", c.bound);
    CHECK(rep.all_ok);
}

TEST_CASE("stop with nonzero discard part: selected mass below epsilon") {
    const int64_t p = 1009;
    // one 0.2-mass pair above the selection threshold, 0.8 spread thin
    std::vector<std::pair<int64_t, double>> masses{{7, 0.1}};
    for (int64_t r = 101; r < 501; ++r) masses.push_back({r, 0.001});
    ZpFunction f = from_masses(p, masses);
    DecompositionCertificate cert = run_decomposition(f, DecompositionParams(0.3));
    REQUIRE(cert.ledger.size() == 1);
    CHECK(cert.ledger[0].gamma == 7);
    CHECK(cert.bounds.outer_steps == 0);
    CHECK(cert.gamma_final.d() == 0);  // never fired, Gamma stays empty
    CHECK(cert.bounds.f3_spectral_l1 == doctest::Approx(0.2).epsilon(1e-7));
    CHECK(cert.bounds.u_window_sup <= 0.09 * (1 + 1e-9));
    CHECK(validate_certificate(f, cert).all_ok);
}

TEST_CASE("two selections accumulate to an outer step") {
    const int64_t p = 1009;
    // pairs with one-sided mass above the 0.09 selection threshold; firing needs both
    std::vector<std::pair<int64_t, double>> masses{{5, 0.095}, {23, 0.092}};
    for (int64_t r = 201; r < 601; ++r) masses.push_back({r, 0.00078});
    ZpFunction f = from_masses(p, masses);
    DecompositionCertificate cert = run_decomposition(f, DecompositionParams(0.3));
    REQUIRE(cert.ledger.size() == 2);
    CHECK(cert.ledger[0].gamma == 5);
    CHECK(cert.ledger[1].gamma == 23);
    CHECK(cert.ledger[0].j == 0);
    CHECK(cert.ledger[1].j == 0);
    CHECK(cert.bounds.outer_steps == 1);
    CHECK(cert.gamma_final.d() == 2);
    CHECK(validate_certificate(f, cert).all_ok);
}

TEST_CASE("random certificates validate across epsilon values") {
    const int64_t p = 257;
    for (double eps : {0.5, 0.3, 0.2}) {
        for (uint64_t seed = 0; seed < 12; ++seed) {
            ZpFunction f = random_unit_l1(p, 100 + seed);
            DecompositionCertificate cert = run_decomposition(f, DecompositionParams(eps));
            ValidationReport rep = validate_certificate(f, cert);
            for (auto& c : rep.checks)
                if (!c.ok) MESSAGE(c.name, " observed=", c.observed, " bound=", c.bound);
            CHECK(rep.all_ok);
            CHECK(static_cast<double>(cert.bounds.gamma_size) <= 2.0 / (eps * eps) + 1e-9);
            CHECK(static_cast<double>(cert.bounds.outer_steps) <= 2.0 / eps + 1e-9);
        }
    }
}

TEST_CASE("validator rejects tampered certificates") {
    const int64_t p = 257;
    ZpFunction f = random_unit_l1(p, 9);
    DecompositionCertificate cert = run_decomposition(f, DecompositionParams(0.3));
    REQUIRE(validate_certificate(f, cert).all_ok);

    DecompositionCertificate bad = cert;
    bad.f3.values[17] += 0.5;
    CHECK_FALSE(validate_certificate(f, bad).all_ok);

    DecompositionCertificate bad2 = cert;
    bad2.u_set.push_back(bad2.u_set.empty() ? 3 : (bad2.u_set.back() + 5) % p);
    CHECK_FALSE(validate_certificate(f, bad2).all_ok);
}

TEST_CASE("discrete intermediate value locator") {
    const int64_t p = 1009;
    BohrSet full = build_bohr(CharacterSet(p, {}), half());

    CHECK(discrete_ivt(ZpFunction::zeros(p), full, 0.1) == 0);

    // odd function vanishes at 0
    std::vector<double> odd(p, 0.0);
    for (int64_t x = 1; x < p; ++x)
        odd[x] = std::sin(2.0 * M_PI * static_cast<double>(x) / static_cast<double>(p));
    int64_t x_odd = discrete_ivt(ZpFunction(p, odd), full, 0.1);
    CHECK(std::abs(odd[x_odd]) <= 1e-12);

    // cosine with t = 1: first sign change near p/4, adjacent-difference bound
    ZpFunction c = cosine(p, 1);
    double m = norms(c).mean;
    for (double& v : c.values) v -= m;
    ZpFunction f1(p, c.values);
    int64_t x = discrete_ivt(f1, full, 0.1);
    CHECK(std::abs(f1.values[x]) <= 2.0 * M_PI / static_cast<double>(p));
    CHECK(std::abs(x - p / 4) <= 2);

    // no nonzero step available
    BohrSet point = build_bohr(CharacterSet(p, {1, 2, 3}), Rational(1, 100 * p));
    REQUIRE(point.size == 1);
    CHECK_THROWS_AS(discrete_ivt(f1, point, 0.1), Error);
}

TEST_CASE("small-value locator: zero function and random half-density sets") {
    LocatorResult z = locate_small_value(ZpFunction::zeros(101), 0.3);
    CHECK(std::abs(z.value) <= 1e-12);

    const int64_t p = 1009;
    CounterRng rng(77, 7);
    uint64_t ctr = 0;
    for (int trial = 0; trial < 6; ++trial) {
        ZpFunction f = balanced_set_function(p, random_half_set(p, rng, ctr));
        LocatorResult res = locate_small_value(f, 0.3);
        CHECK(std::abs(res.value) <= 8.0 * 0.3 + 1e-9);
        CHECK(std::abs(f.values[res.x_found] - res.value) == 0.0);
        double true_min = 1e300;
        for (double v : f.values) true_min = std::min(true_min, std::abs(v));
        CHECK(std::abs(res.value) >= true_min - 1e-15);
        CHECK(validate_certificate(f, res.certificate).all_ok);
    }
}

TEST_CASE("small-value locator AUTO mode reports the epsilon it used") {
    const int64_t p = 1009;
    CounterRng rng(31, 8);
    uint64_t ctr = 0;
    ZpFunction f = balanced_set_function(p, random_half_set(p, rng, ctr));
    LocatorResult res = locate_small_value(f, std::nullopt);
    CHECK(res.epsilon_used > 0.0);
    CHECK(res.epsilon_used <= EPS_MAX);
    CHECK(res.vacuous_regime == (res.epsilon_used > 0.125));
    CHECK(std::abs(res.value) <= 8.0 * res.epsilon_used + 1e-9);
}

TEST_CASE("cosine at small p is infeasible for the locator") {
    // decomposition collapses the Bohr set to {0}
    ZpFunction f = cosine(1009, 1);
    CHECK_THROWS_AS(locate_small_value(f, 0.3), Error);
}

TEST_CASE("littlewood lower report") {
    const int64_t p = 101;
    std::vector<int64_t> interval;
    for (int64_t x = 1; x <= p / 2; ++x) interval.push_back(x);
    LittlewoodReport rep = littlewood_lower_report(p, interval);
    CHECK(rep.spectral_l1 > 0.5);
    CHECK(rep.bound_8eps <= rep.spectral_l1 + 1e-6);
    CHECK(rep.bound_8eps > 0.0);
    // a valid lower bound for ||(2*1_A-1)hat||_1 = 2*||1_A hat||_1 - 1 + 2/p
    double two_sided = 2.0 * rep.spectral_l1 - 1.0 + 2.0 / static_cast<double>(p);
    CHECK(rep.bound_8eps <= two_sided + 1e-9);

    CHECK_THROWS_AS(littlewood_lower_report(101, {1, 2, 3}), Error);
}

TEST_CASE("gowers locator: constants, exact five-point profile, random pairs") {
    // f = g = 1: deviation 0 everywhere
    GowersResult c = gowers_locate(ZpFunction::constant(11, 1.0), ZpFunction::constant(11, 1.0));
    CHECK(c.deviation <= 1e-12);

    // p=5, A={0,1}, B={0,2}: |A n (B+x)| profile (1,1,0,1,1), target 4/25;
    // the locator scans everything here, so it returns the exact minimum 1/25
    auto fa = ZpFunction::indicator(5, {0, 1});
    auto gb = reflect(ZpFunction::indicator(5, {0, 2}));
    GowersResult res = gowers_locate(fa, gb);
    CHECK(res.deviation == doctest::Approx(1.0 / 25.0).epsilon(1e-9));

    const int64_t p = 1009;
    CounterRng rng(13, 9);
    uint64_t ctr = 0;
    for (int trial = 0; trial < 4; ++trial) {
        auto a = random_half_set(p, rng, ctr);
        auto b = random_half_set(p, rng, ctr);
        ZpFunction fA = ZpFunction::indicator(p, a);
        ZpFunction fB = ZpFunction::indicator(p, b);
        GowersResult r = gowers_locate(fA, fB);
        CHECK(r.deviation <= 8.0 * r.epsilon_used + 1e-9);
        // never below the exhaustive minimum
        ZpFunction conv = convolve(fA, fB);
        double target = norms(fA).mean * norms(fB).mean;
        double mn = 1e300;
        for (double v : conv.values) mn = std::min(mn, std::abs(v - target));
        CHECK(r.deviation >= mn - 1e-12);
    }
}

TEST_CASE("modulus and norm preconditions for gowers_locate") {
    CHECK_THROWS_AS(gowers_locate(ZpFunction::zeros(5), ZpFunction::zeros(7)), Error);
    CHECK_THROWS_AS(gowers_locate(ZpFunction::constant(11, 2.0), ZpFunction::zeros(11)), Error);
}
