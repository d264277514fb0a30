#ifndef LWP_SEARCH_HPP
#define LWP_SEARCH_HPP

#include <cstdint>
#include <vector>

#include "lwp/construct.hpp"
#include "lwp/zp.hpp"

namespace lwp {

// Representative of the affine orbit {x -> a x + b}: the lexicographically
// least sorted element tuple over all p(p-1) images. Idempotent; the spectral
// L1 norm is constant on each orbit (dilation permutes |fhat|, translation
// only rotates phases).
std::vector<int64_t> canonical_form(int64_t p, const std::vector<int64_t>& a);

struct ExhaustiveResult {
    double s_p = 0.0;
    std::vector<int64_t> witness;  // canonical form
    int64_t subsets_scanned = 0;
};

// Minimum of ||1_A hat||_1 over |A| = floor(p/2). Every orbit has a member
// containing {0,1} (the affine group is 2-transitive), so pinning those two
// elements cuts the enumeration p(p-1)/(k(k-1))-fold without losing orbits.
// p <= 31.
ExhaustiveResult exhaustive_littlewood(int64_t p);
// Plain enumeration of all C(p, floor(p/2)) subsets; agreement oracle, p <= 23.
ExhaustiveResult exhaustive_littlewood_unreduced(int64_t p);

struct LocalSearchResult {
    double upper_bound = 0.0;
    std::vector<int64_t> set;
    int64_t iters_used = 0;
};

// Steepest-descent single-swap search with rank-one spectrum updates.
LocalSearchResult local_search_littlewood(int64_t p, uint64_t seed, int64_t iters,
                                          bool init_interval = false);

// ||1_A hat||_1 for the initial interval A = {1..floor(p/2)}.
double interval_l1(int64_t p);

struct DeviationProfile {
    int64_t p = 0;
    std::vector<int64_t> a;
    std::vector<int64_t> counts;  // |A n (A+x)|, exact integers
    std::vector<double> d;        // counts - p/4
    double min_abs = 0.0, max_abs = 0.0;
    int64_t argmin = 0;
};
DeviationProfile deviation_profile(int64_t p, const std::vector<int64_t>& a);

struct ScalingRow {
    int64_t p = 0;
    double s_lower_cert = 0.0;
    double interval_l1 = 0.0;
    double min_f_logp = 0.0;
    double dev_tilde_scaled = 0.0;
    double final_min_dev = 0.0;
    uint64_t seed = 0;
};
// Per-prime summary tying the certified lower bound, the interval upper bound,
// and the construction pipeline together.
std::vector<ScalingRow> scaling_study(const std::vector<int64_t>& p_list,
                                      const ConstructionConfig& cfg, uint64_t seed);

}  // namespace lwp

#endif
