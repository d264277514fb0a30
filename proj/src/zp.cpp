#include "lwp/zp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>

namespace lwp {

// ---------------------------------------------------------------------------
// common.hpp implementation
// ---------------------------------------------------------------------------

namespace {
int g_max_threads = 0;  // 0 = uninitialized
}

int max_threads() {
    if (g_max_threads == 0) {
        if (const char* env = std::getenv("LWP_THREADS")) {
            int n = std::atoi(env);
            g_max_threads = n > 0 ? n : 1;
        } else {
            unsigned hc = std::thread::hardware_concurrency();
            g_max_threads = hc > 0 ? static_cast<int>(hc) : 1;
        }
    }
    return g_max_threads;
}

void set_max_threads(int n) { g_max_threads = n > 0 ? n : 1; }

void parallel_for(int64_t n, const std::function<void(int64_t, int64_t)>& chunk_fn) {
    int t = max_threads();
    if (t <= 1 || n < 256) {
        chunk_fn(0, n);
        return;
    }
    int workers = static_cast<int>(std::min<int64_t>(t, n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    int64_t per = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        int64_t lo = w * per, hi = std::min<int64_t>(n, lo + per);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] { chunk_fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// primality
// ---------------------------------------------------------------------------

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % q == 0) return n == q;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == static_cast<uint64_t>(n - 1)) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == static_cast<uint64_t>(n - 1)) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// types
// ---------------------------------------------------------------------------

ZpFunction::ZpFunction(int64_t p_, std::vector<double> vals) : p(p_), values(std::move(vals)) {
    if (!is_prime(p)) throw Error("NotPrime", "modulus " + std::to_string(p) + " is not prime");
    if (static_cast<int64_t>(values.size()) != p)
        throw Error("BadFunction", "value count != p");
    for (double v : values)
        if (!std::isfinite(v)) throw Error("BadFunction", "non-finite value");
}

ZpFunction ZpFunction::indicator(int64_t p_, const std::vector<int64_t>& points) {
    std::vector<double> v(p_, 0.0);
    for (int64_t x : points) {
        int64_t m = ((x % p_) + p_) % p_;
        v[m] = 1.0;
    }
    return ZpFunction(p_, std::move(v));
}

Spectrum::Spectrum(int64_t p_, std::vector<cplx> c) : p(p_), coeffs(std::move(c)) {
    if (!is_prime(p)) throw Error("NotPrime", "modulus " + std::to_string(p) + " is not prime");
    if (static_cast<int64_t>(coeffs.size()) != p)
        throw Error("BadSpectrum", "coefficient count != p");
}

double Spectrum::hermitian_defect() const {
    double worst = std::abs(coeffs[0].imag());
    for (int64_t r = 1; r <= p / 2; ++r) {
        worst = std::max(worst, std::abs(coeffs[p - r] - std::conj(coeffs[r])));
    }
    return worst;
}

bool Spectrum::is_hermitian(double scale_tol) const {
    double scale = 0.0;
    for (const cplx& c : coeffs) scale = std::max(scale, std::abs(c));
    return hermitian_defect() <= scale_tol * std::max(1.0, scale);
}

// ---------------------------------------------------------------------------
// twiddles: angles reduced as integers first (r*x mod p), then one sincos, so
// there is no phase drift at large p
// ---------------------------------------------------------------------------

namespace {

struct Twiddles {
    std::vector<double> re, im;
};

// e(+2*pi*i*k/p) for k = 0..p-1
Twiddles make_twiddles(int64_t p) {
    Twiddles t;
    t.re.resize(p);
    t.im.resize(p);
    const double step = 2.0 * M_PI / static_cast<double>(p);
    for (int64_t k = 0; k < p; ++k) {
        double ang = step * static_cast<double>(k);
        t.re[k] = std::cos(ang);
        t.im[k] = std::sin(ang);
    }
    return t;
}

// Cached power-of-two FFT twiddle tables: w[k] = e(-2*pi*i*k/M), k < M/2.
const std::vector<cplx>& fft_table(size_t m) {
    static std::mutex mu;
    static std::map<size_t, std::vector<cplx>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    std::vector<cplx> w(m / 2);
    const double step = -2.0 * M_PI / static_cast<double>(m);
    for (size_t k = 0; k < m / 2; ++k) {
        double ang = step * static_cast<double>(k);
        w[k] = cplx(std::cos(ang), std::sin(ang));
    }
    return cache.emplace(m, std::move(w)).first->second;
}

}  // namespace

void fft_pow2(std::vector<cplx>& a, int sign) {
    const size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw Error("BadFFTSize", "length must be a power of two");
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const std::vector<cplx>& tab = fft_table(n);
    for (size_t len = 2; len <= n; len <<= 1) {
        size_t stride = n / len;
        for (size_t i = 0; i < n; i += len) {
            for (size_t j = 0; j < len / 2; ++j) {
                cplx w = tab[j * stride];
                if (sign > 0) w = std::conj(w);
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
}

std::vector<cplx> chirp_transform(const std::vector<cplx>& v, int64_t p, int sign) {
    // sum_x v(x) e(sign*2*pi*i*r*x/p) via rx = (r^2 + x^2 - (r-x)^2)/2:
    // S(r) = A_r * sum_x (v_x A_x) conj(A_{r-x}), A_n = e(sign*pi*i*n^2/p),
    // with n^2 reduced mod 2p in exact integers.
    if (static_cast<int64_t>(v.size()) != p) throw Error("BadSpectrum", "length != p");
    const int64_t twop = 2 * p;
    std::vector<cplx> chirp(p);
    const double step = sign * M_PI / static_cast<double>(p);
    for (int64_t n = 0; n < p; ++n) {
        int64_t m = static_cast<int64_t>((static_cast<__int128>(n) * n) % twop);
        double ang = step * static_cast<double>(m);
        chirp[n] = cplx(std::cos(ang), std::sin(ang));
    }
    size_t m = 1;
    while (m < static_cast<size_t>(2 * p - 1)) m <<= 1;
    std::vector<cplx> u(m, cplx(0, 0)), k(m, cplx(0, 0));
    for (int64_t x = 0; x < p; ++x) u[x] = v[x] * chirp[x];
    for (int64_t j = 0; j < 2 * p - 1; ++j) k[j] = std::conj(chirp[std::llabs(j - (p - 1))]);
    fft_pow2(u, -1);
    fft_pow2(k, -1);
    for (size_t i = 0; i < m; ++i) u[i] *= k[i];
    fft_pow2(u, +1);
    const double inv_m = 1.0 / static_cast<double>(m);
    std::vector<cplx> out(p);
    for (int64_t r = 0; r < p; ++r) out[r] = chirp[r] * (u[r + p - 1] * inv_m);
    return out;
}

// ---------------------------------------------------------------------------
// transforms
// ---------------------------------------------------------------------------

Spectrum forward_transform_direct(const ZpFunction& f) {
    const int64_t p = f.p;
    Twiddles t = make_twiddles(p);
    std::vector<cplx> coeffs(p);
    const double* fv = f.values.data();
    const double* wre = t.re.data();
    const double* wim = t.im.data();
    const double inv_p = 1.0 / static_cast<double>(p);
    parallel_for(p / 2 + 1, [&](int64_t lo, int64_t hi) {
        for (int64_t r = lo; r < hi; ++r) {
            double acc_re = 0.0, acc_im = 0.0;
            int64_t idx = 0;
            for (int64_t x = 0; x < p; ++x) {
                acc_re += fv[x] * wre[idx];
                acc_im += fv[x] * wim[idx];
                idx += r;
                if (idx >= p) idx -= p;
            }
            coeffs[r] = cplx(acc_re * inv_p, acc_im * inv_p);
        }
    });
    for (int64_t r = p / 2 + 1; r < p; ++r) coeffs[r] = std::conj(coeffs[p - r]);
    return Spectrum(p, std::move(coeffs));
}

Spectrum forward_transform_fast(const ZpFunction& f) {
    std::vector<cplx> v(f.p);
    for (int64_t x = 0; x < f.p; ++x) v[x] = cplx(f.values[x], 0.0);
    std::vector<cplx> s = chirp_transform(v, f.p, +1);
    const double inv_p = 1.0 / static_cast<double>(f.p);
    for (cplx& c : s) c *= inv_p;
    return Spectrum(f.p, std::move(s));
}

Spectrum forward_transform(const ZpFunction& f) {
    return f.p <= P_DIRECT ? forward_transform_direct(f) : forward_transform_fast(f);
}

namespace {

void require_hermitian(const Spectrum& s) {
    double scale = 0.0;
    for (const cplx& c : s.coeffs) scale = std::max(scale, std::abs(c));
    if (s.hermitian_defect() > 1e-10 * std::max(1.0, scale))
        throw Error("NonHermitian", "spectrum lacks conjugate symmetry; no real inverse");
}

}  // namespace

ZpFunction inverse_transform_direct(const Spectrum& s) {
    require_hermitian(s);
    const int64_t p = s.p;
    Twiddles t = make_twiddles(p);
    std::vector<double> out(p);
    const int64_t h = p / 2;
    const double c0 = s.coeffs[0].real();
    parallel_for(p, [&](int64_t lo, int64_t hi) {
        for (int64_t x = lo; x < hi; ++x) {
            // f(x) = c0 + sum_{r<=h} 2 Re(c_r e(-rx/p))
            double acc = c0;
            int64_t idx = 0;
            for (int64_t r = 1; r <= h; ++r) {
                idx += x;
                if (idx >= p) idx -= p;
                acc += 2.0 * (s.coeffs[r].real() * t.re[idx] + s.coeffs[r].imag() * t.im[idx]);
            }
            out[x] = acc;
        }
    });
    return ZpFunction(p, std::move(out));
}

ZpFunction inverse_transform(const Spectrum& s) {
    require_hermitian(s);
    if (s.p <= P_DIRECT) return inverse_transform_direct(s);
    std::vector<cplx> v = chirp_transform(s.coeffs, s.p, -1);
    std::vector<double> out(s.p);
    for (int64_t x = 0; x < s.p; ++x) out[x] = v[x].real();
    return ZpFunction(s.p, std::move(out));
}

// ---------------------------------------------------------------------------
// convolution, reflection, norms
// ---------------------------------------------------------------------------

ZpFunction convolve_direct(const ZpFunction& f, const ZpFunction& g) {
    if (f.p != g.p) throw Error("ModulusMismatch", "convolve needs equal moduli");
    const int64_t p = f.p;
    std::vector<double> out(p, 0.0);
    const double* fv = f.values.data();
    const double* gv = g.values.data();
    parallel_for(p, [&](int64_t lo, int64_t hi) {
        for (int64_t x = lo; x < hi; ++x) {
            double acc = 0.0;
            int64_t idx = x;
            for (int64_t y = 0; y < p; ++y) {
                acc += fv[y] * gv[idx];
                if (idx == 0) idx = p;
                --idx;
            }
            out[x] = acc / static_cast<double>(p);
        }
    });
    return ZpFunction(p, std::move(out));
}

ZpFunction convolve(const ZpFunction& f, const ZpFunction& g) {
    if (f.p != g.p) throw Error("ModulusMismatch", "convolve needs equal moduli");
    if (f.p <= P_DIRECT) return convolve_direct(f, g);
    Spectrum a = forward_transform(f);
    Spectrum b = forward_transform(g);
    std::vector<cplx> prod(f.p);
    for (int64_t r = 0; r < f.p; ++r) prod[r] = a.coeffs[r] * b.coeffs[r];
    return inverse_transform(Spectrum(f.p, std::move(prod)));
}

ZpFunction reflect(const ZpFunction& f) {
    std::vector<double> out(f.p);
    out[0] = f.values[0];
    for (int64_t x = 1; x < f.p; ++x) out[x] = f.values[f.p - x];
    return ZpFunction(f.p, std::move(out));
}

Norms norms(const ZpFunction& f) {
    Norms n{};
    n.mean = pairwise_sum(f.values) / static_cast<double>(f.p);
    std::vector<double> sq(f.p);
    double mx = 0.0;
    for (int64_t x = 0; x < f.p; ++x) {
        sq[x] = f.values[x] * f.values[x];
        mx = std::max(mx, std::abs(f.values[x]));
    }
    n.l2 = std::sqrt(pairwise_sum(sq) / static_cast<double>(f.p));
    n.linf = mx;
    return n;
}

double spectral_l1(const Spectrum& s) {
    std::vector<double> mags(s.p);
    for (int64_t r = 0; r < s.p; ++r) mags[r] = std::abs(s.coeffs[r]);
    return pairwise_sum(mags);
}

}  // namespace lwp
