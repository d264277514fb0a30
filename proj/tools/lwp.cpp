// lwp: experiment harness for the Z/pZ Fourier toolkit.
// Exit codes: 0 success, 1 usage/IO error, 2 a verified inequality failed.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lwp/bohr.hpp"
#include "lwp/construct.hpp"
#include "lwp/decompose.hpp"
#include "lwp/io.hpp"
#include "lwp/search.hpp"

using json = nlohmann::ordered_json;
using namespace lwp;

namespace {

struct GlobalOpts {
    uint64_t seed = 0;
    int threads = 0;  // 0 = all
    double tol = 1e-10;
};

json base_report(const std::string& command, const GlobalOpts& g) {
    json j;
    j["schema"] = 1;
    j["version"] = version_string();
    j["command"] = command;
    j["config"]["seed"] = g.seed;
    j["config"]["threads"] = g.threads == 0 ? json("all") : json(g.threads);
    j["config"]["tol"] = g.tol;
    return j;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw Error("IO", "cannot write " + out_path);
        out << j.dump(2) << "\n";
    }
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) throw Error("Usage", "rational must look like NUM/DEN");
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

std::optional<double> parse_epsilon(const std::string& s) {
    if (s == "auto") return std::nullopt;
    return std::stod(s);
}

json config_json(const ConstructionConfig& cfg) {
    json j;
    j["c_const"] = cfg.c_smooth;
    j["c_exp"] = cfg.c_exp;
    j["moment_threshold"] = cfg.moment_threshold;
    j["resample_cap"] = cfg.resample_cap;
    j["round_retry_cap"] = cfg.round_retry_cap;
    j["p_min"] = cfg.p_min;
    return j;
}

json checks_json(const std::vector<CheckItem>& checks) {
    json arr = json::array();
    for (const auto& c : checks) {
        json e;
        e["name"] = c.name;
        e["pass"] = c.ok;
        e["observed"] = c.observed;
        e["bound"] = c.bound;
        arr.push_back(e);
    }
    return arr;
}

std::string sibling_path(const std::string& base, const std::string& suffix) {
    auto dot = base.rfind(".json");
    std::string stem = dot == std::string::npos ? base : base.substr(0, dot);
    return stem + suffix;
}

// ---------------------------------------------------------------------------

int cmd_transform(const GlobalOpts& g, int64_t p, const std::string& fn_path,
                  const std::string& out_path, bool use_direct) {
    ZpFunction f = read_function_csv(fn_path);
    if (f.p != p) throw Error("Usage", "--p disagrees with the CSV length");
    Spectrum s = use_direct ? forward_transform_direct(f) : forward_transform(f);
    if (out_path.empty()) {
        std::cout << "r,re,im\n";
        for (int64_t r = 0; r < s.p; ++r)
            std::cout << r << "," << format_double(s.coeffs[r].real()) << ","
                      << format_double(s.coeffs[r].imag()) << "\n";
    } else {
        write_spectrum_csv(out_path, s);
    }
    (void)g;
    return 0;
}

int cmd_bohr(const GlobalOpts& g, int64_t p, const std::string& gamma_csv, const std::string& eta_s,
             bool regularize, const std::string& delta_s, const std::string& out_path) {
    std::vector<int64_t> gamma;
    {
        std::stringstream ss(gamma_csv);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) gamma.push_back(std::stoll(tok));
    }
    CharacterSet cs(p, gamma);
    Rational eta_used = parse_rational(eta_s);
    if (regularize) {
        Rational delta = delta_s.empty() ? eta_used : parse_rational(delta_s);
        eta_used = find_regular_value(cs, delta);
    }
    BohrSet b = build_bohr(cs, eta_used);
    SizeBounds sb = size_bounds_check(b);
    json j = base_report("bohr", g);
    j["p"] = p;
    j["gamma"] = gamma;
    j["eta_used"] = eta_used.str();
    j["size"] = b.size;
    j["lower_ok"] = sb.lower_ok;
    j["doubling_ok"] = sb.doubling_ok;
    j["regular"] = verify_regular(cs, eta_used);
    emit(j, out_path);
    return 0;
}

int cmd_decompose(const GlobalOpts& g, int64_t p, const std::string& fn_path,
                  const std::string& eps_s, const std::string& cert_path) {
    ZpFunction f = read_function_csv(fn_path);
    if (f.p != p) throw Error("Usage", "--p disagrees with the CSV length");
    std::optional<double> eps = parse_epsilon(eps_s);
    double eps_used;
    DecompositionCertificate cert;
    if (eps.has_value()) {
        cert = run_decomposition(f, DecompositionParams(*eps));
        eps_used = *eps;
    } else {
        LocatorResult loc = locate_small_value(f, std::nullopt);
        cert = std::move(loc.certificate);
        eps_used = loc.epsilon_used;
    }
    ValidationReport val = validate_certificate(f, cert);

    json j = base_report("decompose", g);
    j["p"] = p;
    j["params"]["epsilon"] = eps_used;
    j["params"]["epsilon_mode"] = eps.has_value() ? "explicit" : "auto";
    j["gamma"] = cert.gamma_final.gamma;
    j["eta"] = cert.eta.str();
    j["eta_prime"] = cert.eta_prime.str();
    j["u_set_size"] = cert.u_set.size();
    json ledger = json::array();
    for (const auto& e : cert.ledger) {
        json le;
        le["j"] = e.j;
        le["i"] = e.i;
        le["gamma"] = e.gamma;
        le["s_set"] = e.s_set;
        ledger.push_back(le);
    }
    j["ledger"] = ledger;
    json states = json::array();
    for (const auto& os : cert.outer_states) {
        json se;
        se["gamma"] = os.gamma;
        se["eta"] = os.eta.str();
        se["eta_prime"] = os.eta_prime.str();
        states.push_back(se);
    }
    j["outer_states"] = states;
    j["bounds"]["f3_spectral_l1"] = cert.bounds.f3_spectral_l1;
    j["bounds"]["u_window_sup"] = cert.bounds.u_window_sup;
    j["bounds"]["gamma_size"] = cert.bounds.gamma_size;
    j["bounds"]["outer_steps"] = cert.bounds.outer_steps;
    j["validation"] = checks_json(val.checks);
    j["valid"] = val.all_ok;
    std::string f1p = sibling_path(cert_path, ".f1.csv");
    std::string f2p = sibling_path(cert_path, ".f2.csv");
    std::string f3p = sibling_path(cert_path, ".f3.csv");
    write_function_csv(f1p, cert.f1);
    write_function_csv(f2p, cert.f2);
    write_function_csv(f3p, cert.f3);
    j["files"]["f1"] = f1p;
    j["files"]["f2"] = f2p;
    j["files"]["f3"] = f3p;
    emit(j, cert_path);
    if (!val.all_ok) throw CheckFailed("certificate", "validation failed; see " + cert_path);
    return 0;
}

int cmd_locate(const GlobalOpts& g, int64_t p, const std::string& set_path,
               const std::string& eps_s, const std::string& out_path) {
    std::vector<int64_t> a = read_set(set_path);
    json j = base_report("locate", g);
    if (!eps_s.empty() && eps_s != "auto") {
        // direct locator run on the balanced normalized set function
        ZpFunction ind = ZpFunction::indicator(p, a);
        std::vector<double> gv(p);
        for (int64_t x = 0; x < p; ++x) gv[x] = 2.0 * ind.values[x] - 1.0;
        double m = pairwise_sum(gv) / static_cast<double>(p);
        for (double& v : gv) v -= m;
        ZpFunction g0(p, gv);
        double l1 = spectral_l1(forward_transform(g0));
        for (double& v : gv) v /= l1;
        LocatorResult loc = locate_small_value(ZpFunction(p, gv), std::stod(eps_s));
        j["x_found"] = loc.x_found;
        j["value"] = loc.value;
        j["epsilon_used"] = loc.epsilon_used;
        j["vacuous_regime"] = loc.vacuous_regime;
    } else {
        LittlewoodReport rep = littlewood_lower_report(p, a);
        j["p"] = rep.p;
        j["spectral_l1"] = rep.spectral_l1;
        j["bound_8eps"] = rep.bound_8eps;
        j["epsilon_used"] = rep.epsilon_used;
        j["located_value"] = rep.located_value;
        j["vacuous_regime"] = rep.epsilon_used > 0.125;
    }
    emit(j, out_path);
    return 0;
}

int cmd_gowers_locate(const GlobalOpts& g, int64_t p, const std::string& a_path,
                      const std::string& b_path, const std::string& out_path) {
    std::vector<int64_t> a = read_set(a_path);
    std::vector<int64_t> b = read_set(b_path);
    ZpFunction fa = ZpFunction::indicator(p, a);
    ZpFunction fb = ZpFunction::indicator(p, b);
    // deviation of |A n (B+x)| from |A||B|/p via f * reflect(g)
    GowersResult res = gowers_locate(fa, reflect(fb));
    json j = base_report("gowers-locate", g);
    j["p"] = p;
    j["x"] = res.x;
    j["deviation"] = res.deviation;
    j["count_deviation"] = res.deviation * static_cast<double>(p);
    j["epsilon_used"] = res.epsilon_used;
    emit(j, out_path);
    return 0;
}

int cmd_construct_F(const GlobalOpts& g, int64_t p, const ConstructionConfig& cfg,
                    const std::string& out_path, const std::string& report_path) {
    ConstructionReport rep = build_F(p, cfg, /*enforce=*/false);
    if (!out_path.empty()) write_function_csv(out_path, rep.F);
    json j = base_report("construct F", g);
    j["p"] = p;
    j["construction"] = config_json(cfg);
    j["mean_g3"] = rep.mean_g3;
    j["g4_spectral_l1"] = rep.g4_spectral_l1;
    j["min_abs_g3"] = rep.min_abs_g3;
    j["min_abs_g4"] = rep.min_abs_g4;
    j["f_min_abs"] = rep.f_min_abs;
    j["checks"] = checks_json(rep.checks);
    j["all_pass"] = rep.all_pass;
    emit(j, report_path);
    if (!rep.all_pass) throw CheckFailed("construction", "see " + report_path);
    return 0;
}

int cmd_construct_gowers_set(const GlobalOpts& g, int64_t p, const ConstructionConfig& cfg,
                             const std::string& out_path, const std::string& report_path) {
    ConstructionReport rep = build_F(p, cfg, /*enforce=*/false);
    SignedFunction sf = random_sign_f(rep, cfg, cfg.rng_seed);
    ClipResult cl = clip_to_bounded(sf, cfg);
    ZpFunction ft = unit_range_map(cl.f);
    RoundingReport rr = round_to_set(ft, cfg, cfg.rng_seed);
    if (!out_path.empty()) write_set(out_path, rr.a_set);

    json j = base_report("construct gowers-set", g);
    j["p"] = p;
    j["construction"] = config_json(cfg);
    j["construction_all_pass"] = rep.all_pass;
    j["sign"]["seed"] = sf.signs.seed;
    j["sign"]["trial"] = sf.signs.trial;
    j["sign"]["moment"] = sf.moment;
    j["sign"]["resamples"] = sf.resamples;
    j["clip"]["threshold"] = cl.threshold;
    j["clip"]["exceedances"] = cl.a_prime.size();
    j["clip"]["kappa"] = cl.kappa;
    j["clip"]["l2_change"] = cl.l2_change;
    j["clip"]["stability_bound"] = cl.stability_bound;
    j["clip"]["stability_observed"] = cl.stability_observed;
    j["rounding"]["retries"] = rr.retries;
    j["rounding"]["size_dev"] = rr.size_dev;
    j["rounding"]["corr_dev_max"] = rr.corr_dev_max;
    j["rounding"]["a_size"] = rr.a_set.size();
    j["rounding"]["l2_adjust"] = rr.l2_adjust;
    j["rounding"]["adjust_stability"] = rr.adjust_stability;
    j["rounding"]["final_min_dev"] = rr.final_min_dev;
    emit(j, report_path);
    if (!rep.all_pass) throw CheckFailed("construction", "see " + report_path);
    return 0;
}

int cmd_search_exhaustive(const GlobalOpts& g, int64_t p, bool unreduced,
                          const std::string& out_path) {
    ExhaustiveResult res = unreduced ? exhaustive_littlewood_unreduced(p) : exhaustive_littlewood(p);
    json j = base_report("search exhaustive", g);
    j["p"] = p;
    j["s_p"] = res.s_p;
    j["witness"] = res.witness;
    j["subsets_scanned"] = res.subsets_scanned;
    emit(j, out_path);
    return 0;
}

int cmd_search_local(const GlobalOpts& g, int64_t p, int64_t iters, const std::string& init,
                     const std::string& out_path) {
    LocalSearchResult res = local_search_littlewood(p, g.seed, iters, init == "interval");
    json j = base_report("search local", g);
    j["p"] = p;
    j["upper_bound"] = res.upper_bound;
    j["set"] = res.set;
    j["iters_used"] = res.iters_used;
    emit(j, out_path);
    return 0;
}

int cmd_study_scaling(const GlobalOpts& g, const std::string& p_list_csv,
                      const ConstructionConfig& cfg, const std::string& out_path) {
    std::vector<int64_t> ps;
    std::stringstream ss(p_list_csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) ps.push_back(std::stoll(tok));
    std::vector<ScalingRow> rows = scaling_study(ps, cfg, g.seed);
    std::ostream* outp = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw Error("IO", "cannot write " + out_path);
        outp = &file;
    }
    *outp << "p,s_lower_cert,interval_l1,minF_logp,dev_tilde_scaled,final_min_dev,seeds\n";
    for (const auto& r : rows)
        *outp << r.p << "," << format_double(r.s_lower_cert) << ","
              << format_double(r.interval_l1) << "," << format_double(r.min_f_logp) << ","
              << format_double(r.dev_tilde_scaled) << "," << format_double(r.final_min_dev) << ","
              << r.seed << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier-analytic experiments on Z/pZ: transforms, Bohr sets, certified "
                 "spectral decompositions, flat constructions, and set searches"};
    app.set_config("--config", "", "key = value configuration file (section.key = value)");
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOpts g;
    app.add_option("--seed", g.seed, "base RNG seed")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads (0 = all; env LWP_THREADS)")
        ->capture_default_str();
    app.add_option("--tol", g.tol, "report-level tolerance knob")->capture_default_str();

    // transform
    auto* t = app.add_subcommand("transform", "forward transform of a CSV function");
    int64_t t_p = 0;
    std::string t_fn, t_out;
    bool t_direct = false;
    t->add_option("--p", t_p, "prime modulus")->required();
    t->add_option("--fn", t_fn, "input function CSV (x,value)")->required();
    t->add_option("--out", t_out, "output spectrum CSV (default stdout)");
    t->add_flag("--direct", t_direct, "force the O(p^2) evaluation");

    // bohr
    auto* b = app.add_subcommand("bohr", "Bohr set size, bounds, and regularity");
    int64_t b_p = 0;
    std::string b_gamma, b_eta = "1/2", b_delta, b_out;
    bool b_reg = false;
    b->add_option("--p", b_p, "prime modulus")->required();
    b->add_option("--gamma", b_gamma, "comma-separated frequencies");
    b->add_option("--eta", b_eta, "radius NUM/DEN")->required();
    b->add_flag("--regularize", b_reg, "replace eta by a regular value in [delta, 2 delta)");
    b->add_option("--delta", b_delta, "search base for --regularize (default: eta)");
    b->add_option("--out", b_out, "JSON output path (default stdout)");

    // decompose
    auto* d = app.add_subcommand("decompose", "three-part spectral decomposition certificate");
    int64_t d_p = 0;
    std::string d_fn, d_eps = "auto", d_cert = "cert.json";
    d->add_option("--p", d_p, "prime modulus")->required();
    d->add_option("--fn", d_fn, "input function CSV")->required();
    d->add_option("--epsilon", d_eps, "epsilon in (0,1) or 'auto'");
    d->add_option("--cert", d_cert, "certificate JSON path")->required();

    // locate
    auto* l = app.add_subcommand("locate", "small-value certificate for a half-density set");
    int64_t l_p = 0;
    std::string l_set, l_eps, l_out;
    l->add_option("--p", l_p, "prime modulus")->required();
    l->add_option("--set", l_set, "set file, one residue per line")->required();
    l->add_option("--epsilon", l_eps, "epsilon in (0,1) or 'auto'");
    l->add_option("--out", l_out, "JSON output path (default stdout)");

    // gowers-locate
    auto* gl = app.add_subcommand("gowers-locate", "intersection deviation witness for two sets");
    int64_t gl_p = 0;
    std::string gl_a, gl_b, gl_out;
    gl->add_option("--p", gl_p, "prime modulus")->required();
    gl->add_option("--set-a", gl_a, "first set file")->required();
    gl->add_option("--set-b", gl_b, "second set file")->required();
    gl->add_option("--out", gl_out, "JSON output path (default stdout)");

    // construct
    auto* c = app.add_subcommand("construct", "flat function and rounded-set pipelines");
    ConstructionConfig cfg;
    int64_t c_p = 0;
    std::string c_out, c_report = "report.json";
    auto* cf = c->add_subcommand("F", "build the flat normalized function");
    auto* cg = c->add_subcommand("gowers-set", "randomized half-density set with flat profile");
    for (CLI::App* sub : {cf, cg}) {
        sub->add_option("--p", c_p, "prime modulus")->required();
        sub->add_option("--c-const", cfg.c_smooth, "smoothing constant C")->capture_default_str();
        sub->add_option("--c-exp", cfg.c_exp, "exponential moment constant")->capture_default_str();
        sub->add_option("--moment-threshold", cfg.moment_threshold, "sign acceptance threshold")
            ->capture_default_str();
        sub->add_option("--resample-cap", cfg.resample_cap, "max sign resamples")
            ->capture_default_str();
        sub->add_option("--retry-cap", cfg.round_retry_cap, "max rounding retries")
            ->capture_default_str();
        sub->add_option("--p-min", cfg.p_min, "smallest admissible p")->capture_default_str();
        sub->add_option("--out", c_out, "output CSV/set path");
        sub->add_option("--report", c_report, "JSON report path")->capture_default_str();
    }
    c->require_subcommand(1);

    // search
    auto* s = app.add_subcommand("search", "half-density set searches");
    auto* se = s->add_subcommand("exhaustive", "exact minimum over all half-density sets");
    int64_t s_p = 0;
    bool s_unreduced = false;
    std::string s_out;
    se->add_option("--p", s_p, "prime modulus (<= 31)")->required();
    se->add_flag("--unreduced", s_unreduced, "skip the orbit pinning (<= 23)");
    se->add_option("--out", s_out, "JSON output path (default stdout)");
    auto* sl = s->add_subcommand("local", "steepest-descent swap search");
    int64_t sl_p = 0, sl_iters = 100;
    std::string sl_init = "random", sl_out;
    sl->add_option("--p", sl_p, "prime modulus")->required();
    sl->add_option("--iters", sl_iters, "iteration cap")->capture_default_str();
    sl->add_option("--init", sl_init, "random | interval")->capture_default_str();
    sl->add_option("--out", sl_out, "JSON output path (default stdout)");
    s->require_subcommand(1);

    // study
    auto* st = app.add_subcommand("study", "cross-prime experiments");
    auto* sc = st->add_subcommand("scaling", "scaling table across primes");
    std::string sc_plist, sc_out;
    sc->add_option("--p-list", sc_plist, "comma-separated primes")->required();
    sc->add_option("--out", sc_out, "CSV output path (default stdout)");
    sc->add_option("--c-const", cfg.c_smooth, "smoothing constant C")->capture_default_str();
    sc->add_option("--p-min", cfg.p_min, "smallest admissible p")->capture_default_str();
    st->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (g.threads > 0) set_max_threads(g.threads);
        cfg.rng_seed = g.seed;
        if (t->parsed()) return cmd_transform(g, t_p, t_fn, t_out, t_direct);
        if (b->parsed()) return cmd_bohr(g, b_p, b_gamma, b_eta, b_reg, b_delta, b_out);
        if (d->parsed()) return cmd_decompose(g, d_p, d_fn, d_eps, d_cert);
        if (l->parsed()) return cmd_locate(g, l_p, l_set, l_eps, l_out);
        if (gl->parsed()) return cmd_gowers_locate(g, gl_p, gl_a, gl_b, gl_out);
        if (c->parsed()) {
            if (cf->parsed()) return cmd_construct_F(g, c_p, cfg, c_out, c_report);
            return cmd_construct_gowers_set(g, c_p, cfg, c_out, c_report);
        }
        if (s->parsed()) {
            if (se->parsed()) return cmd_search_exhaustive(g, s_p, s_unreduced, s_out);
            return cmd_search_local(g, sl_p, sl_iters, sl_init, sl_out);
        }
        if (st->parsed()) return cmd_study_scaling(g, sc_plist, cfg, sc_out);
    } catch (const CheckFailed& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
