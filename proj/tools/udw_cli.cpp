// Command-line front end: single-point amplitudes, boundary curves, the
// log-log boundary chart, raw kernel probes, and a self-test suite.
// Exit codes: 0 ok, 2 guard/config error, 3 numerical indeterminacy,
// 4 selftest failure.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "udw/report.hpp"

using json = nlohmann::ordered_json;
using namespace udw;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json config_json(const RunConfig& cfg) {
    json j;
    std::string canon = cfg.canonical();
    std::size_t at = 0;
    while (at < canon.size()) {
        std::size_t nl = canon.find('\n', at);
        std::string line = canon.substr(at, nl - at);
        at = nl + 1;
        std::size_t eq = line.find(" = ");
        j[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return j;
}

bool wants(const RunConfig& cfg, const char* fmt) {
    for (const auto& f : cfg.formats)
        if (f == fmt) return true;
    return false;
}

void write_provenance(const RunConfig& cfg, const std::string& stem) {
    write_file(stem + ".cfg",
               cfg.canonical() + "config_hash = " + cfg.config_hash() + "\n");
}

// common scale for the record: plain numbers while they are representable,
// mantissa + explicit exponent once they are not
double pick_scale(const ObservableResult& obs) {
    double s = std::max(obs.A.log_abs(), obs.X.log_abs());
    if (!std::isfinite(s) || (s > -700.0 && s < 700.0)) return 0.0;
    return s;
}

int cmd_point(const RunConfig& cfg) {
    if (cfg.scenarios.size() != 1)
        throw DomainError("point wants exactly one scenario, got '" +
                          detail::join(cfg.scenarios) + "'");
    auto sc = scenario_of(cfg.scenarios[0], cfg.two_pi_T_sigma);
    auto obs = observables(sc, {1.0, cfg.omega_point, cfg.L_point},
                           method_of(cfg.method), cfg.quad);
    double S = pick_scale(obs);
    json j;
    j["scenario"] = cfg.scenarios[0];
    j["two_pi_T_sigma"] = cfg.two_pi_T_sigma;
    j["L_over_sigma"] = cfg.L_point;
    j["omega_sigma"] = cfg.omega_point;
    j["A"] = obs.A.rebase(S).real();
    j["X_re"] = obs.X.rebase(S).real();
    j["X_im"] = obs.X.rebase(S).imag();
    j["log_scale"] = S;
    auto n = obs.negativity();
    j["N"] = n.is_zero() ? 0.0 : n.rebase(S).real();
    j["entangled"] = obs.entangled();
    j["method"] = obs.a_method == obs.x_method
                      ? std::string(method_name(obs.a_method))
                      : std::string(method_name(obs.a_method)) + "+" +
                            method_name(obs.x_method);
    j["error_estimate"] = obs.A_rel_error + obs.X_rel_error;
    j["config_hash"] = cfg.config_hash();
    j["config"] = config_json(cfg);
    std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!cfg.out.empty()) {
        write_file(cfg.out + ".json", text);
        write_provenance(cfg, cfg.out);
    }
    return 0;
}

int cmd_kernel(const RunConfig& cfg) {
    if (cfg.scenarios.size() != 1)
        throw DomainError("kernel wants exactly one scenario, got '" +
                          detail::join(cfg.scenarios) + "'");
    auto sc = scenario_of(cfg.scenarios[0], cfg.two_pi_T_sigma);
    std::complex<double> v(cfg.v_point, -cfg.v_im);
    std::complex<double> val;
    switch (sc.kind) {
        case ScenarioSpec::Kind::vacuum:
            val = vacuum_wightman(v, cfg.L_point);
            break;
        case ScenarioSpec::Kind::thermal:
            val = thermal_wightman(v, cfg.L_point, sc.T);
            break;
        case ScenarioSpec::Kind::de_sitter:
            val = desitter_wightman(std::complex<double>(cfg.u_point, 0.0), v,
                                    cfg.L_point, sc.T);
            break;
    }
    if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
        throw DomainError("kernel is singular at these coordinates; "
                          "offset v_im_over_sigma");
    json j;
    j["scenario"] = cfg.scenarios[0];
    j["two_pi_T_sigma"] = cfg.two_pi_T_sigma;
    j["L_over_sigma"] = cfg.L_point;
    j["u_over_sigma"] = cfg.u_point;
    j["v_over_sigma"] = cfg.v_point;
    j["v_im_over_sigma"] = cfg.v_im;
    j["kernel_re"] = val.real();
    j["kernel_im"] = val.imag();
    j["config_hash"] = cfg.config_hash();
    std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!cfg.out.empty()) {
        write_file(cfg.out + ".json", text);
        write_provenance(cfg, cfg.out);
    }
    return 0;
}

json rows_json(const std::vector<CurveRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json o;
        o["scenario"] = r.scenario;
        o["L_over_sigma"] = r.L;
        if (r.has_window) {
            o["omega_lower_sigma"] = r.lower;
            if (r.closed_above) o["omega_upper_sigma"] = r.upper;
        }
        if (std::isfinite(r.cap)) o["L_max_over_sigma"] = r.cap;
        if (r.horizon > 0.0) o["horizon_over_sigma"] = r.horizon;
        o["method"] = r.method;
        if (!r.flags.empty()) o["flags"] = r.flags;
        arr.push_back(o);
    }
    return arr;
}

int cmd_curve(const RunConfig& cfg, int threads) {
    auto rows = compute_curve(cfg, threads);
    std::string stem = cfg.out.empty() ? "curve" : cfg.out;
    if (wants(cfg, "csv")) write_file(stem + ".csv", csv_curve(cfg, rows));
    if (wants(cfg, "json")) {
        json j;
        j["config_hash"] = cfg.config_hash();
        j["config"] = config_json(cfg);
        j["rows"] = rows_json(rows);
        write_file(stem + ".json", j.dump(2) + "\n");
    }
    write_provenance(cfg, stem);
    std::cout << "wrote " << stem << ".{csv,cfg} (" << rows.size() << " rows, hash "
              << cfg.config_hash() << ")\n";
    return 0;
}

int cmd_figure1(const RunConfig& cfg, int threads) {
    auto rows = compute_curve(cfg, threads);
    auto wit = subset_check(1.0, cfg.two_pi_T_sigma / (2.0 * pi), cfg.quad,
                            cfg.n_omega, cfg.n_omega, threads);
    std::string stem = cfg.out.empty() ? "figure1" : cfg.out;
    if (wants(cfg, "csv")) write_file(stem + ".csv", csv_curve(cfg, rows));
    if (wants(cfg, "svg")) write_file(stem + ".svg", render_figure_svg(cfg, rows, wit));
    if (wants(cfg, "json")) {
        json j;
        j["config_hash"] = cfg.config_hash();
        j["config"] = config_json(cfg);
        j["witness_found"] = wit.witness_in_band;
        if (wit.witness_in_band) {
            j["witness_L_over_sigma"] = wit.witness_L;
            j["witness_omega_sigma"] = wit.witness_Omega;
        }
        j["subset_violations"] = wit.violations;
        j["rows"] = rows_json(rows);
        write_file(stem + ".json", j.dump(2) + "\n");
    }
    write_provenance(cfg, stem);
    std::cout << "wrote " << stem << ".* (hash " << cfg.config_hash() << ")\n";
    if (wit.violations > 0)
        std::cout << "FAILURE: " << wit.violations
                  << " lattice points entangled in the expanding case but separable "
                     "in the thermal case\n";
    if (wit.witness_in_band)
        std::cout << "witness: L = " << fmt_double(wit.witness_L)
                  << " sigma, omega = " << fmt_double(wit.witness_Omega)
                  << " / sigma (thermal entangled, expanding separable)\n";
    else
        std::cout << "FAILURE: no witness point found with L inside the horizon "
                     "band; figure written without the star\n";
    return 0;
}

// ---- selftest ----------------------------------------------------------

struct SelfLine {
    std::string name;
    bool pass = false;
    double ms = 0.0;
    std::string note;
};

template <typename F>
SelfLine timed(const std::string& name, F&& body) {
    SelfLine line;
    line.name = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
        line.note = body();
        line.pass = true;
    } catch (const std::exception& e) {
        line.pass = false;
        line.note = e.what();
    }
    auto t1 = std::chrono::steady_clock::now();
    line.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return line;
}

std::string check(bool ok, const std::string& msg) {
    if (!ok) throw Error(msg);
    return msg;
}

double rel_gap(const ScaledComplex& a, const ScaledComplex& b) {
    return std::abs(ratio(a, b) - std::complex<double>(1.0, 0.0));
}

std::string selftest_calibration(const RunConfig& cfg) {
    auto sc = ScenarioSpec::vacuum();
    double worst = 0.0;
    for (double L : {2.0, 5.0, 10.0, 20.0, 50.0})
        for (double w : {0.0, 0.5, 1.0, 2.0, 5.0}) {
            auto closed = observables(sc, {1.0, w, L}, Method::closed_form, cfg.quad);
            auto quad = observables(sc, {1.0, w, L}, Method::quadrature, cfg.quad);
            worst = std::max(worst, rel_gap(quad.A, closed.A));
            worst = std::max(worst, rel_gap(quad.X, closed.X));
        }
    return check(worst < 1e-6,
                 "worst closed-vs-quadrature gap " + fmt_double(worst) +
                     (worst < 1e-6 ? " < 1e-6" : " exceeds 1e-6"));
}

double decade_slope(const std::vector<double>& params, const std::vector<double>& errs,
                    std::size_t i) {
    return std::log10(errs[i] / errs[i + 1]) / std::log10(params[i] / params[i + 1]);
}

std::string selftest_kernel_limits() {
    const std::complex<double> v(0.7, 0.0);
    const double L = 2.0;
    std::vector<double> Ts{1e-3, 1e-4, 1e-5}, errs;
    for (double kap : Ts)
        errs.push_back(std::abs(thermal_wightman(v, L, kap / (2.0 * pi)) -
                                vacuum_wightman(v, L)));
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        double s = decade_slope(Ts, errs, i);
        check(s > 1.8 && s < 2.2, "thermal->vacuum slope " + fmt_double(s));
    }
    errs.clear();
    const std::complex<double> u(0.4, 0.0);
    for (double kap : Ts)
        errs.push_back(std::abs(desitter_wightman(u, v, L, kap / (2.0 * pi)) -
                                vacuum_wightman(v, L)));
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        double s = decade_slope(Ts, errs, i);
        check(s > 0.8 && s < 1.2, "expanding->vacuum slope " + fmt_double(s));
    }
    const double T = 1e-3 / (2.0 * pi);
    std::vector<double> Lss{1e-1, 1e-2, 1e-3};
    errs.clear();
    for (double l : Lss)
        errs.push_back(std::abs(thermal_wightman(v, l, T) - response_kernel(v, T)));
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        double s = decade_slope(Lss, errs, i);
        check(s > 1.8 && s < 2.2, "thermal->response slope " + fmt_double(s));
    }
    errs.clear();
    for (double l : Lss)
        errs.push_back(std::abs(desitter_wightman(u, v, l, T) - response_kernel(v, T)));
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        double s = decade_slope(Lss, errs, i);
        check(s > 1.8 && s < 2.2, "expanding->response slope " + fmt_double(s));
    }
    return "quadratic in T, linear in T at u != 0, quadratic in L";
}

std::string selftest_method_consistency(const RunConfig& cfg) {
    auto sc = ScenarioSpec::thermal(cfg.two_pi_T_sigma / (2.0 * pi));
    int compared = 0, skipped = 0;
    const Method methods[] = {Method::series, Method::quadrature, Method::image_sum};
    for (double L : {15.0, 50.0})
        for (double w : {0.0, 1.0}) {
            std::vector<ObservableResult> got;
            for (Method m : methods) {
                try {
                    got.push_back(observables(sc, {1.0, w, L}, m, cfg.quad));
                } catch (const BreakdownError&) {
                    ++skipped;
                } catch (const PoleCrossingError&) {
                    ++skipped;
                }
            }
            for (std::size_t i = 0; i < got.size(); ++i)
                for (std::size_t k = i + 1; k < got.size(); ++k) {
                    double tol_a =
                        3.0 * (got[i].A_rel_error + got[k].A_rel_error) + 1e-9;
                    double tol_x =
                        3.0 * (got[i].X_rel_error + got[k].X_rel_error) + 1e-9;
                    check(rel_gap(got[i].A, got[k].A) < tol_a,
                          "A disagreement beyond stated estimates at L=" +
                              fmt_double(L) + " w=" + fmt_double(w));
                    check(rel_gap(got[i].X, got[k].X) < tol_x,
                          "X disagreement beyond stated estimates at L=" +
                              fmt_double(L) + " w=" + fmt_double(w));
                    ++compared;
                }
        }
    check(compared > 0, "every instrument broke down");
    return fmt_int(compared) + " pairwise agreements, " + fmt_int(skipped) +
           " instruments declined";
}

std::string selftest_subset(const RunConfig& cfg, int threads) {
    auto rep = subset_check(1.0, cfg.two_pi_T_sigma / (2.0 * pi), cfg.quad, 40, 40,
                            threads);
    check(rep.violations == 0,
          fmt_int(rep.violations) + " expanding-entangled thermal-separable points");
    check(rep.witness_in_band, "no witness inside the horizon band");
    return "0 violations on " + fmt_int(rep.checked) + " points, witness at L=" +
           fmt_double(rep.witness_L) + " omega=" + fmt_double(rep.witness_Omega);
}

int cmd_selftest(const RunConfig& cfg, int threads) {
    std::vector<SelfLine> lines;
    lines.push_back(timed("closed form vs quadrature (vacuum grid)",
                          [&] { return selftest_calibration(cfg); }));
    lines.push_back(timed("kernel limit chain", [&] { return selftest_kernel_limits(); }));
    lines.push_back(timed("three-way method consistency (thermal)",
                          [&] { return selftest_method_consistency(cfg); }));
    lines.push_back(timed("subset lattice and witness",
                          [&] { return selftest_subset(cfg, threads); }));
    bool all = true;
    for (const auto& l : lines) {
        all = all && l.pass;
        std::printf("%-44s %s %9.1f ms  %s\n", l.name.c_str(),
                    l.pass ? "PASS" : "FAIL", l.ms, l.note.c_str());
    }
    std::printf("%s\n", all ? "selftest: all checks passed" : "selftest: FAILURES");
    return all ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    int threads = 1;
    std::string config_path;

    // the config file loads first so that explicit flags win
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) config_path = argv[i + 1];
        else if (a.rfind("--config=", 0) == 0) config_path = a.substr(9);
    }
    try {
        if (!config_path.empty()) apply_config_text(cfg, slurp(config_path));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"two-detector response and exchange amplitudes with Gaussian "
                 "switching: amplitudes, entanglement boundaries, boundary chart"};
    app.fallthrough();
    app.require_subcommand(1);
    std::string scenario_list, format_list;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--scenario", scenario_list,
                   "comma list of vacuum, thermal, de_sitter");
    app.add_option("--two-pi-t-sigma", cfg.two_pi_T_sigma,
                   "bath/expansion temperature as 2 pi T sigma");
    app.add_option("--l-min", cfg.L_min, "grid lower separation, sigma units");
    app.add_option("--l-max", cfg.L_max, "grid upper separation, sigma units");
    app.add_option("--n-l", cfg.n_L, "separation grid count (log spaced)");
    app.add_option("--omega-min", cfg.omega_min, "chart lower gap, 1/sigma");
    app.add_option("--omega-max", cfg.omega_max, "chart upper gap, 1/sigma");
    app.add_option("--n-omega", cfg.n_omega, "witness lattice resolution");
    app.add_option("--l", cfg.L_point, "point separation L / sigma");
    app.add_option("--omega", cfg.omega_point, "point gap omega sigma");
    app.add_option("--u", cfg.u_point, "kernel sum coordinate / sigma");
    app.add_option("--v", cfg.v_point, "kernel difference coordinate / sigma");
    app.add_option("--v-im", cfg.v_im, "kernel -i epsilon offset / sigma");
    app.add_option("--method", cfg.method,
                   "auto, closed_form, series, quadrature, image_sum");
    app.add_option("--rel-tol-1d", cfg.quad.rel_tol_1d, "1d quadrature tolerance");
    app.add_option("--rel-tol-2d", cfg.quad.rel_tol_2d, "2d quadrature tolerance");
    app.add_option("--window-cut", cfg.quad.window_cut, "integration window, sigmas");
    app.add_option("--series-order", cfg.quad.series_order, "series truncation order");
    app.add_option("--max-panels", cfg.quad.max_panels, "adaptive panel budget");
    app.add_option("--threads", threads, "worker threads (never changes output)");
    app.add_option("--out", cfg.out, "output path stem");
    app.add_option("--formats", format_list, "comma list of csv, json, svg");

    auto* p_point = app.add_subcommand("point", "amplitudes at one (L, omega)");
    auto* p_curve = app.add_subcommand("curve", "boundary trace over the L grid");
    auto* p_fig = app.add_subcommand("figure1", "log-log boundary chart + CSV");
    auto* p_kernel = app.add_subcommand("kernel", "raw kernel value (debugging)");
    auto* p_self = app.add_subcommand("selftest", "invariant suite with timings");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (!scenario_list.empty()) cfg.scenarios = detail::split_list(scenario_list);
    if (!format_list.empty()) cfg.formats = detail::split_list(format_list);

    try {
        cfg.validate();
        if (threads < 1 || threads > 256) throw DomainError("threads out of range");
        if (p_point->parsed()) return cmd_point(cfg);
        if (p_curve->parsed()) return cmd_curve(cfg, threads);
        if (p_fig->parsed()) return cmd_figure1(cfg, threads);
        if (p_kernel->parsed()) return cmd_kernel(cfg);
        if (p_self->parsed()) return cmd_selftest(cfg, threads);
        return 2;
    } catch (const IndeterminateError& e) {
        json j;
        j["error"] = {{"type", "indeterminate"}, {"message", e.what()}};
        std::cout << j.dump(2) << "\n";
        return 3;
    } catch (const BreakdownError& e) {
        json j;
        j["error"] = {{"type", "breakdown"}, {"message", e.what()}};
        std::cout << j.dump(2) << "\n";
        return 3;
    } catch (const PoleCrossingError& e) {
        json j;
        j["error"] = {{"type", "pole-crossing"}, {"message", e.what()}};
        std::cout << j.dump(2) << "\n";
        return 3;
    } catch (const AccuracyError& e) {
        json j;
        j["error"] = {{"type", "accuracy"}, {"message", e.what()}};
        std::cout << j.dump(2) << "\n";
        return 3;
    } catch (const TopologyError& e) {
        json j;
        j["error"] = {{"type", "topology"}, {"message", e.what()}};
        std::cout << j.dump(2) << "\n";
        return 3;
    } catch (const SingularityError& e) {
        json j;
        j["error"] = {{"type", "singularity"}, {"message", e.what()}};
        std::cout << j.dump(2) << "\n";
        return 2;
    } catch (const DomainError& e) {
        json j;
        j["error"] = {{"type", "domain"}, {"message", e.what()}};
        std::cout << j.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        json j;
        j["error"] = {{"type", "guard"}, {"message", e.what()}};
        std::cout << j.dump(2) << "\n";
        return 2;
    }
}
