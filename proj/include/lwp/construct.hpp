#ifndef LWP_CONSTRUCT_HPP
#define LWP_CONSTRUCT_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "lwp/zp.hpp"

namespace lwp {

struct ConstructionConfig {
    double c_smooth = 1000.0;     // box-kernel constant C (>= 1000)
    double c_exp = 0.05;          // exponential-moment constant (<= 1/8)
    double moment_threshold = 3.0;
    int resample_cap = 100;
    int round_retry_cap = 50;
    uint64_t rng_seed = 0;
    int64_t p_min = 101;

    void validate() const;
};

struct ConstructionReport {
    int64_t p = 0;
    ConstructionConfig cfg;
    ZpFunction g1, g2, g3, g4, F;
    Spectrum F_hat;
    double mean_g3 = 0.0;
    double g4_spectral_l1 = 0.0;  // the normalizer ||ghat4||_1
    double min_abs_g3 = 0.0, min_abs_g4 = 0.0, f_min_abs = 0.0;
    std::vector<CheckItem> checks;
    bool all_pass = true;

    const CheckItem* find(const std::string& name) const;
};

// +1 inside the middle half (signed representative |x/p| < 1/4), -1 outside.
ZpFunction build_g1(int64_t p);

// f1(theta) = -2 log|2 sin(pi theta)|, f1(0) = 0.
double f1_eval(double theta);

// f2 = f1 smoothed twice by the width-2/(Cp) box kernel. Evaluated through
// the second difference of the closed-form second antiderivative
// G(theta) = theta^2 (3/2 - log(2 pi theta)) + 2 sum_n zeta(2n) theta^(2n+2) /
// (n(2n+1)(2n+2)), with the difference expanded analytically so there is no
// cancellation; absolute accuracy ~1e-12.
double f2_eval(double theta, double c_smooth, int64_t p);

// g2(x) = f2(x/p); f2 is continuous at 0, so x = 0 uses the same formula.
ZpFunction build_g2(int64_t p, double c_smooth);

// g3 = g1 + g2, g4 = g3 - E g3, F = g4/||ghat4||_1, with the full check list.
// enforce: throw CheckFailed on the first failing check (the report is lost);
// pass false to inspect a failing report.
ConstructionReport build_F(int64_t p, const ConstructionConfig& cfg, bool enforce = true);

struct SqrtSpectrumResult {
    ZpFunction f;
    double clipped_mass = 0.0;  // negative dust removed from Fhat
};
// fhat = sqrt(Fhat) >= 0 symmetric, so f*f° = F with E f = 0, ||f||_2^2 = ||Fhat||_1.
SqrtSpectrumResult sqrt_spectrum(const ConstructionReport& report);

struct SignVector {
    std::vector<int8_t> xi;  // +-1, indexed by 0 <= r <= (p-1)/2
    uint64_t seed = 0;
    uint64_t trial = 0;
};

struct SignedFunction {
    ZpFunction f;
    SignVector signs;
    double moment = 0.0;  // E_x exp(c_exp f(x)^2)
    int resamples = 0;
};

// fhat(r) = xi_r sqrt(Fhat(r)) on 0 < r < p/2, extended symmetrically.
ZpFunction make_signed_function(const ConstructionReport& report, const SignVector& signs);

// Draw sign vectors from the counter RNG until the exponential moment falls
// under the configured threshold.
SignedFunction random_sign_f(const ConstructionReport& report, const ConstructionConfig& cfg,
                             uint64_t seed);

struct ClipResult {
    ZpFunction f;
    double kappa = 0.0;
    double threshold = 0.0;            // C_CLIP * sqrt(log log p)
    std::vector<int64_t> a_prime;      // exceedance set (typically empty here)
    double l2_change = 0.0;            // ||f - f_xi||_2
    double stability_bound = 0.0;      // ||f-f_xi||_2 (||f||_2 + ||f_xi||_2)
    double stability_observed = 0.0;   // ||f*f° - f_xi*f_xi°||_inf
};
// Replace values above the threshold by the constant kappa chosen so E f = 0.
// The threshold is set so that an accepted moment certifies the exceedance
// set is empty whenever p (log p)^-10 < 1.
ClipResult clip_to_bounded(const SignedFunction& sf, const ConstructionConfig& cfg);

// f~ = 1/2 + f/(2 ||f||_inf): range [0,1], mean 1/2, and
// f~*f~°(x) - 1/4 = f*f°(x) / (4 ||f||_inf^2).
ZpFunction unit_range_map(const ZpFunction& f);

struct RoundingReport {
    std::vector<int64_t> b_set;  // accepted random set
    std::vector<int64_t> a_set;  // resized to exactly floor(p/2)
    double size_dev = 0.0;       // ||B| - p/2|
    double corr_dev_max = 0.0;   // max_{x!=0} |1_B*1_B°(x) - f~*f~°(x)|
    double final_min_dev = 0.0;  // min_x ||A n (A+x)| - p/4|
    int retries = 0;
    double l2_adjust = 0.0;       // ||1_A - 1_B||_2
    double adjust_stability = 0.0;  // ||1_A*1_A° - 1_B*1_B°||_inf
};
// Bernoulli rounding with the two acceptance inequalities
// ||B| - p/2| <= p^(2/3) and max_{x!=0}|1_B*1_B° - f~*f~°| <= p^(-1/3),
// then a smallest-index resize to floor(p/2).
RoundingReport round_to_set(const ZpFunction& f_tilde, const ConstructionConfig& cfg,
                            uint64_t seed);

// 2 exp(-m t^2 / 2)
double hoeffding_bound(int64_t m, double t);

// Splits the step-x cycle on Z/pZ into three classes, each of size >= p/5,
// with no two elements of a class adjacent on the cycle.
std::array<std::vector<int64_t>, 3> cycle_partition(int64_t p, int64_t x);

}  // namespace lwp

#endif
