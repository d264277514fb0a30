#ifndef LWP_DECOMPOSE_HPP
#define LWP_DECOMPOSE_HPP

#include <optional>
#include <string>
#include <vector>

#include "lwp/bohr.hpp"
#include "lwp/zp.hpp"

namespace lwp {

struct DecompositionParams {
    double epsilon = 0.25;  // (0,1); values <= 1/8 make the located bound nontrivial
    int64_t outer_cap = 0;  // >= 2/epsilon
    int64_t inner_cap = 0;  // >= 2/epsilon^2 total selections

    explicit DecompositionParams(double eps, std::optional<int64_t> outer = std::nullopt,
                                 std::optional<int64_t> inner = std::nullopt);
};

// One character selection: S_{j,i} = +-(gamma + U_j) minus previously used
// frequencies. Windows are closed under negation so the split stays
// real-valued; only gamma itself joins the next Gamma.
struct LedgerEntry {
    int64_t j = 0;
    int64_t i = 0;
    int64_t gamma = 0;
    std::vector<int64_t> s_set;
};

// Radii in force while STEP_1 == j.
struct OuterState {
    std::vector<int64_t> gamma;  // Gamma_j
    Rational eta;
    Rational eta_prime;
};

struct CertificateBounds {
    double f3_spectral_l1 = 0.0;
    double u_window_sup = 0.0;
    int64_t gamma_size = 0;
    int64_t outer_steps = 0;
};

struct DecompositionCertificate {
    double epsilon = 0.0;
    CharacterSet gamma_final;
    Rational eta, eta_prime;
    std::vector<int64_t> u_set;
    std::vector<OuterState> outer_states;  // index j = 0..outer_steps
    std::vector<LedgerEntry> ledger;
    ZpFunction f1, f2, f3;
    CertificateBounds bounds;
};

// pre: ||fhat||_1 <= 1 + 1e-9 and |E f| <= 1e-9. Double iteration: inner steps
// select the character whose U-window holds the most remaining spectral mass;
// once the selected mass reaches epsilon the outer step enlarges Gamma and
// shrinks the radii to a fresh regular pair.
DecompositionCertificate run_decomposition(const ZpFunction& f, const DecompositionParams& params);

// sup over gamma of the |coeff| mass in the window gamma + U.
double u_window_sup(const Spectrum& s, const std::vector<int64_t>& u);
// same mass for every shift gamma; FFT-accelerated when |U| * p is large
std::vector<double> u_window_profile(const std::vector<double>& mags, const std::vector<int64_t>& u,
                                     int64_t p);

using ValidationCheck = CheckItem;
struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_ok = true;
    const ValidationCheck* find(const std::string& name) const;
};

// Independent re-derivation of every certificate invariant from (f, cert).
ValidationReport validate_certificate(const ZpFunction& f, const DecompositionCertificate& cert);

// Walks 0, t, 2t, ... (t the smallest nonzero member of b_small) until the
// value crosses zero; mean-zero input guarantees a crossing, and the adjacent
// increment bound turns it into a small-value witness.
int64_t discrete_ivt(const ZpFunction& f1, const BohrSet& b_small, double eps);

struct LocatorResult {
    int64_t x_found = 0;
    double value = 0.0;  // f at x_found
    int64_t t_used = 0;
    int64_t x0 = 0;
    double epsilon_used = 0.0;
    bool vacuous_regime = false;  // epsilon_used > 1/8: |f| <= 8 eps holds trivially
    DecompositionCertificate certificate;
};

inline constexpr double EPS_MAX = 0.999999;

// eps = nullopt: AUTO mode seeds epsilon at c_eps*(log log p/log p)^(1/3) and
// raises it (x1.25) until B(Gamma, eta') from the actual run has a nonzero
// element; Infeasible if none exists below EPS_MAX.
LocatorResult locate_small_value(const ZpFunction& f, std::optional<double> eps,
                              double c_eps = 1.0);

struct LittlewoodReport {
    int64_t p = 0;
    double spectral_l1 = 0.0;   // ||1_A hat||_1
    double bound_8eps = 0.0;    // certified lower bound on ||(2*1_A - 1)hat||_1
    double epsilon_used = 0.0;
    double located_value = 0.0;
};
LittlewoodReport littlewood_lower_report(int64_t p, const std::vector<int64_t>& a_set);

struct GowersResult {
    int64_t x = 0;
    double deviation = 0.0;  // |f*g(x) - Ef Eg|
    double epsilon_used = 0.0;
};
GowersResult gowers_locate(const ZpFunction& f, const ZpFunction& g);

}  // namespace lwp

#endif
