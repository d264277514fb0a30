#include "lwp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lwp {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("IO", "cannot read " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("IO", "cannot write " + path);
    return out;
}

}  // namespace

void write_function_csv(const std::string& path, const ZpFunction& f) {
    std::ofstream out = open_out(path);
    out << "x,value\n";
    for (int64_t x = 0; x < f.p; ++x) out << x << "," << format_double(f.values[x]) << "\n";
}

ZpFunction read_function_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,value", 0) != 0)
        throw Error("IO", path + ": expected header 'x,value'");
    std::vector<double> vals;
    int64_t expect = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string xs, vs;
        if (!std::getline(ss, xs, ',') || !std::getline(ss, vs))
            throw Error("IO", path + ": malformed row '" + line + "'");
        if (std::stoll(xs) != expect)
            throw Error("IO", path + ": rows must be ascending from 0");
        vals.push_back(std::stod(vs));
        ++expect;
    }
    return ZpFunction(expect, std::move(vals));
}

void write_spectrum_csv(const std::string& path, const Spectrum& s) {
    std::ofstream out = open_out(path);
    out << "r,re,im\n";
    for (int64_t r = 0; r < s.p; ++r)
        out << r << "," << format_double(s.coeffs[r].real()) << ","
            << format_double(s.coeffs[r].imag()) << "\n";
}

Spectrum read_spectrum_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("r,re,im", 0) != 0)
        throw Error("IO", path + ": expected header 'r,re,im'");
    std::vector<cplx> coeffs;
    int64_t expect = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string rs, res, ims;
        if (!std::getline(ss, rs, ',') || !std::getline(ss, res, ',') || !std::getline(ss, ims))
            throw Error("IO", path + ": malformed row '" + line + "'");
        if (std::stoll(rs) != expect)
            throw Error("IO", path + ": rows must be ascending from 0");
        coeffs.emplace_back(std::stod(res), std::stod(ims));
        ++expect;
    }
    return Spectrum(expect, std::move(coeffs));
}

void write_set(const std::string& path, const std::vector<int64_t>& a) {
    std::ofstream out = open_out(path);
    for (int64_t x : a) out << x << "\n";
}

std::vector<int64_t> read_set(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<int64_t> a;
    std::string line;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ss(line);
        int64_t x;
        while (ss >> x) a.push_back(x);
    }
    return a;
}

}  // namespace lwp
