#ifndef LWP_COMMON_HPP
#define LWP_COMMON_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace lwp {

// All domain errors carry a stable kind tag (used for CLI exit codes and tests).
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

// A verified inequality failed on this instance. CLI maps this to exit 2.
class CheckFailed : public Error {
public:
    CheckFailed(const std::string& name, const std::string& what)
        : Error("CheckFailed", name + ": " + what), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

// One named pass/fail record of a verified inequality.
struct CheckItem {
    std::string name;
    bool ok;
    double observed;
    double bound;
};

inline std::string version_string() {
#ifdef LWP_VERSION
    return LWP_VERSION;
#else
    return "untracked";
#endif
}

// Pairwise (tree) summation: fixed association independent of platform, so
// means and norms replay bit-identically run to run.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 32) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

// Worker count: --threads flag or LWP_THREADS, else hardware concurrency.
int max_threads();
void set_max_threads(int n);

// Static chunking; each index writes only its own slots, so results do not
// depend on the worker count.
void parallel_for(int64_t n, const std::function<void(int64_t, int64_t)>& chunk_fn);

}  // namespace lwp

#endif
