#ifndef LWP_BOHR_HPP
#define LWP_BOHR_HPP

#include <optional>
#include <vector>

#include "lwp/rational.hpp"
#include "lwp/zp.hpp"

namespace lwp {

// Set of nonzero frequencies; character r acts as x -> e(rx/p).
struct CharacterSet {
    int64_t p = 0;
    std::vector<int64_t> gamma;  // sorted, distinct, in 1..p-1

    CharacterSet() = default;
    CharacterSet(int64_t p_, std::vector<int64_t> residues);
    int64_t d() const { return static_cast<int64_t>(gamma.size()); }
};

// B(Gamma, eta) = {x : min(rx mod p, p - rx mod p) * den <= num * p for all r}.
// Membership, size and every regularity decision are integer-exact.
struct BohrSet {
    CharacterSet chars;
    Rational eta;                   // clamped to (0, 1/2]
    std::vector<char> members;      // indicator over 0..p-1
    int64_t size = 0;

    int64_t p() const { return chars.p; }
    bool contains(int64_t x) const { return members[x] != 0; }
    // caches the exact regularity verdict for eta
    mutable std::optional<bool> regular_cache;
};

// beta(x) = 1_B(x)/|B|; total mass sum_x beta = 1. Its measure transform
// (the forward transform of p*beta) has beta_hat(0) = 1.
struct BohrCutoff {
    int64_t bohr_size = 0;
    ZpFunction beta;
};

BohrSet build_bohr(const CharacterSet& chars, const Rational& eta);

struct SizeBounds {
    bool lower_ok;     // size * den^d >= num^d * p
    bool doubling_ok;  // |B(Gamma, min(2 eta, 1/2))| <= 5^d |B(Gamma, eta)|
};
SizeBounds size_bounds_check(const BohrSet& b);

// Distinct values of m(x) = max_r min(rx mod p, p - rx mod p)/p, ascending.
// |B(Gamma,t)| is constant between consecutive values.
std::vector<Rational> breakpoints(const CharacterSet& chars);

// Exact count |B(Gamma, t)| without building the bitmap.
int64_t bohr_size_at(const CharacterSet& chars, const Rational& t);

// eps is regular when |B(Gamma,(1+kappa)eps)| / |B(Gamma,eps)| stays within
// 1 -+ 100 d |kappa| for all |kappa| <= 1/(100d). The step function jumps only
// at breakpoints, so the check is a finite list of exact integer inequalities.
bool verify_regular(const CharacterSet& chars, const Rational& eps);

// Regular value in [delta, min(2 delta, cap)). Candidates: midpoints of
// breakpoint gaps, then geometric grids doubling from 64 points, at most 4096
// candidates before NoRegularValueFound.
Rational find_regular_value(const CharacterSet& chars, const Rational& delta,
                            std::optional<Rational> cap = std::nullopt);

BohrCutoff cutoff(const BohrSet& b);
// p * beta: unit-mean density used as a convolution kernel (f * beta).
ZpFunction cutoff_density(const BohrSet& b);
// Transform of p*beta: beta_hat(gamma) = (1/|B|) sum_{x in B} e(gamma x/p).
Spectrum cutoff_spectrum(const BohrSet& b);

// sum_x |beta(x+y) - beta(x)| = |B symdiff (B - y)| / |B|, exact count.
// Requires eta regular (verified and cached on first use).
double cutoff_shift_deviation(const BohrSet& b, int64_t y);

// max |1 - gamma(y)| over characters with |beta_hat(gamma)| >= kappa1 and
// y in B(Gamma, eta2). Requires eta regular.
double character_flatness(const BohrSet& b, const Rational& eta2, double kappa1);

struct Interval {
    double a, b;
};

// From a finite closed cover of [0,1], an (endpoint-)disjoint subfamily of
// total measure >= 1/2: minimalize the cover, sort, take the better of the
// odd/even alternating subfamilies.
std::vector<Interval> select_disjoint_intervals(const std::vector<Interval>& cover);

}  // namespace lwp

#endif
