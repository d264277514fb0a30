#ifndef LWP_ZP_HPP
#define LWP_ZP_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "lwp/common.hpp"

namespace lwp {

using cplx = std::complex<double>;

bool is_prime(int64_t n);

// Transform convention: fhat(r) = (1/p) sum_x f(x) e(+2*pi*i*r*x/p), inverse
// f(x) = sum_r fhat(r) e(-2*pi*i*r*x/p).

// Real-valued function on Z/pZ, dense storage, p prime.
struct ZpFunction {
    int64_t p = 0;
    std::vector<double> values;

    ZpFunction() = default;
    ZpFunction(int64_t p_, std::vector<double> vals);
    static ZpFunction zeros(int64_t p_) { return ZpFunction(p_, std::vector<double>(p_, 0.0)); }
    static ZpFunction constant(int64_t p_, double c) {
        return ZpFunction(p_, std::vector<double>(p_, c));
    }
    static ZpFunction indicator(int64_t p_, const std::vector<int64_t>& points);

    double operator[](int64_t x) const { return values[x]; }
};

struct Spectrum {
    int64_t p = 0;
    std::vector<cplx> coeffs;

    Spectrum() = default;
    Spectrum(int64_t p_, std::vector<cplx> c);

    const cplx& operator[](int64_t r) const { return coeffs[r]; }

    // max_{r != 0} |coeffs(p-r) - conj(coeffs(r))|
    double hermitian_defect() const;
    bool is_hermitian(double scale_tol = 1e-10) const;
};

// Signed representative with |rbar| <= (p-1)/2.
inline int64_t signed_rep(int64_t r, int64_t p) {
    int64_t m = ((r % p) + p) % p;
    return m > p / 2 ? m - p : m;
}

// Crossover from direct O(p^2) evaluation to the chirp transform. Both paths
// stay available for cross-checking.
inline constexpr int64_t P_DIRECT = 4096;

Spectrum forward_transform(const ZpFunction& f);
Spectrum forward_transform_direct(const ZpFunction& f);
Spectrum forward_transform_fast(const ZpFunction& f);

ZpFunction inverse_transform(const Spectrum& s);         // throws NonHermitian
ZpFunction inverse_transform_direct(const Spectrum& s);  // same contract

// (f*g)(x) = (1/p) sum_y f(y) g(x-y); spectrum multiplies pointwise.
ZpFunction convolve(const ZpFunction& f, const ZpFunction& g);
ZpFunction convolve_direct(const ZpFunction& f, const ZpFunction& g);

// f°(x) = f(-x)
ZpFunction reflect(const ZpFunction& f);

struct Norms {
    double mean;
    double l2;
    double linf;
};
Norms norms(const ZpFunction& f);
double spectral_l1(const Spectrum& s);

// Complex length-n sums sum_x v(x) e(sign*2*pi*i*r*x/p) for all r; Bluestein
// chirp reduction to a power-of-two FFT, O(p log p) for arbitrary prime p.
std::vector<cplx> chirp_transform(const std::vector<cplx>& v, int64_t p, int sign);

// In-place iterative radix-2 FFT, n a power of two, sign = -1 forward.
void fft_pow2(std::vector<cplx>& a, int sign);

}  // namespace lwp

#endif
