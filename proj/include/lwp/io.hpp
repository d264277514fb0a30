#ifndef LWP_IO_HPP
#define LWP_IO_HPP

#include <string>
#include <vector>

#include "lwp/zp.hpp"

namespace lwp {

// Locale-independent float formatting used in every CSV/JSON artifact.
std::string format_double(double v);

// ZpFunction CSV: header "x,value", p rows, x ascending.
void write_function_csv(const std::string& path, const ZpFunction& f);
ZpFunction read_function_csv(const std::string& path);

// Spectrum CSV: header "r,re,im".
void write_spectrum_csv(const std::string& path, const Spectrum& s);
Spectrum read_spectrum_csv(const std::string& path);

// Residue sets: one residue per line, '#' comments allowed.
void write_set(const std::string& path, const std::vector<int64_t>& a);
std::vector<int64_t> read_set(const std::string& path);

}  // namespace lwp

#endif
