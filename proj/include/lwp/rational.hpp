#ifndef LWP_RATIONAL_HPP
#define LWP_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <string>

#include "lwp/common.hpp"

namespace lwp {

// Exact nonnegative fraction with int64 parts; every Bohr predicate reduces to
// cross-multiplied integer comparisons in __int128, so there is no rounding.
struct Rational {
    int64_t num = 0;
    int64_t den = 1;

    Rational() = default;
    Rational(int64_t n, int64_t d) : num(n), den(d) {
        if (d <= 0 || n < 0) throw Error("BadRational", "need num >= 0, den > 0");
        int64_t g = std::gcd(num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool is_zero() const { return num == 0; }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den <= static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }
};

namespace detail {
inline int64_t checked_mul(int64_t a, int64_t b) {
    __int128 r = static_cast<__int128>(a) * b;
    if (r > INT64_MAX) throw Error("RationalOverflow", "rational arithmetic exceeded int64");
    return static_cast<int64_t>(r);
}
}  // namespace detail

inline Rational mul(const Rational& a, const Rational& b) {
    int64_t g1 = std::gcd(a.num, b.den), g2 = std::gcd(b.num, a.den);
    return Rational(detail::checked_mul(a.num / g1, b.num / g2),
                    detail::checked_mul(a.den / g2, b.den / g1));
}

inline Rational half() { return Rational(1, 2); }

// Radii beyond 1/2 are vacuous on the circle.
inline Rational clamp_radius(const Rational& r) { return r > half() ? half() : r; }

inline Rational double_radius(const Rational& r) {
    return clamp_radius(Rational(detail::checked_mul(2, r.num), r.den));
}

// Smallest-denominator fraction in the open interval (lo, hi), via the
// Stern-Brocot descent. Exact; both endpoints excluded.
Rational simplest_between(const Rational& lo, const Rational& hi);

// Smallest-denominator fraction inside the real interval (lo, hi),
// 0 < lo < hi. Endpoints are doubles; the result is verified to lie strictly
// inside with a relative safety margin.
Rational simplest_in_real_interval(double lo, double hi);

}  // namespace lwp

#endif
