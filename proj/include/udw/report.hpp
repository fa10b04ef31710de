#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "udw/threshold.hpp"

namespace udw {

// Shortest round-trip decimal via to_chars: locale-free and bit-faithful, so
// identical doubles always print identically (output determinism rests on it).
inline std::string fmt_double(double v) {
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline std::string fmt_int(long long v) {
    char buf[24];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

// FNV-1a, 64-bit
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    return "0x" + s;
}

inline std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] =
            lo * std::pow(hi / lo, double(i) / double(n - 1));
    return g;
}

// Run description: everything numeric lives in sigma units (sigma = 1).
// Thread count is deliberately not part of the configuration: it cannot
// change any output byte, so it stays a command-line execution detail.
struct RunConfig {
    std::vector<std::string> scenarios{"vacuum", "thermal", "de_sitter"};
    double two_pi_T_sigma = 1e-3;
    double L_min = 1e2;
    double L_max = 5e3;
    int n_L = 48;
    double omega_min = 1e1;
    double omega_max = 5e3;
    int n_omega = 40;
    // single-point coordinates (point / kernel commands)
    double L_point = 2.0;
    double omega_point = 0.0;
    double u_point = 0.0;
    double v_point = 0.0;
    double v_im = 0.0;
    std::string method = "auto";
    QuadratureSpec quad;
    std::string out;
    std::vector<std::string> formats{"csv", "svg"};

    void set(const std::string& key, const std::string& value);
    void validate() const;
    std::string canonical() const;
    std::string config_hash() const { return hex64(fnv1a64(canonical())); }
};

namespace detail {

inline std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += v[i];
    }
    return s;
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t at = 0;
    while (at <= s.size()) {
        std::size_t comma = s.find(',', at);
        if (comma == std::string::npos) comma = s.size();
        std::string item = s.substr(at, comma - at);
        while (!item.empty() && item.front() == ' ') item.erase(item.begin());
        while (!item.empty() && item.back() == ' ') item.pop_back();
        if (!item.empty()) out.push_back(item);
        at = comma + 1;
    }
    return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
    double d = 0.0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), d);
    if (r.ec != std::errc{} || r.ptr != v.data() + v.size())
        throw DomainError("config: " + key + " wants a number, got '" + v + "'");
    return d;
}

inline int parse_int(const std::string& key, const std::string& v) {
    int i = 0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), i);
    if (r.ec != std::errc{} || r.ptr != v.data() + v.size())
        throw DomainError("config: " + key + " wants an integer, got '" + v + "'");
    return i;
}

}  // namespace detail

inline void RunConfig::set(const std::string& key, const std::string& value) {
    if (key == "scenario") scenarios = detail::split_list(value);
    else if (key == "two_pi_T_sigma") two_pi_T_sigma = detail::parse_double(key, value);
    else if (key == "l_min_over_sigma") L_min = detail::parse_double(key, value);
    else if (key == "l_max_over_sigma") L_max = detail::parse_double(key, value);
    else if (key == "n_l") n_L = detail::parse_int(key, value);
    else if (key == "omega_min_sigma") omega_min = detail::parse_double(key, value);
    else if (key == "omega_max_sigma") omega_max = detail::parse_double(key, value);
    else if (key == "n_omega") n_omega = detail::parse_int(key, value);
    else if (key == "l_over_sigma") L_point = detail::parse_double(key, value);
    else if (key == "omega_sigma") omega_point = detail::parse_double(key, value);
    else if (key == "u_over_sigma") u_point = detail::parse_double(key, value);
    else if (key == "v_over_sigma") v_point = detail::parse_double(key, value);
    else if (key == "v_im_over_sigma") v_im = detail::parse_double(key, value);
    else if (key == "method") method = value;
    else if (key == "rel_tol_1d") quad.rel_tol_1d = detail::parse_double(key, value);
    else if (key == "rel_tol_2d") quad.rel_tol_2d = detail::parse_double(key, value);
    else if (key == "window_cut") quad.window_cut = detail::parse_double(key, value);
    else if (key == "series_order") quad.series_order = detail::parse_int(key, value);
    else if (key == "max_panels") quad.max_panels = detail::parse_int(key, value);
    else if (key == "eps_k_lo") quad.eps_k_lo = detail::parse_int(key, value);
    else if (key == "eps_k_hi") quad.eps_k_hi = detail::parse_int(key, value);
    else if (key == "out") out = value;
    else if (key == "formats") formats = detail::split_list(value);
    else if (key == "config_hash") {}  // provenance echo, not an input
    else throw DomainError("config: unknown key '" + key + "'");
}

inline void RunConfig::validate() const {
    if (scenarios.empty()) throw DomainError("config: scenario list is empty");
    bool needs_T = false;
    for (const auto& s : scenarios) {
        if (s != "vacuum" && s != "thermal" && s != "de_sitter")
            throw DomainError("config: unknown scenario '" + s + "'");
        if (s != "vacuum") needs_T = true;
    }
    if (needs_T) {
        if (!(two_pi_T_sigma > 0.0))
            throw DomainError("config: two_pi_T_sigma must be positive");
        if (two_pi_T_sigma > 0.1)
            throw GuardError("config: two_pi_T_sigma exceeds 0.1; the instruments "
                             "assume switching much faster than the bath scale");
    }
    if (!(L_min > 0.0) || !(L_max > L_min))
        throw DomainError("config: need 0 < l_min_over_sigma < l_max_over_sigma");
    if (n_L < 2) throw DomainError("config: n_l must be at least 2");
    if (!(omega_min > 0.0) || !(omega_max > omega_min))
        throw DomainError("config: need 0 < omega_min_sigma < omega_max_sigma");
    if (n_omega < 2) throw DomainError("config: n_omega must be at least 2");
    if (method != "auto" && method != "closed_form" && method != "series" &&
        method != "quadrature" && method != "image_sum")
        throw DomainError("config: unknown method '" + method + "'");
    for (const auto& f : formats)
        if (f != "csv" && f != "json" && f != "svg")
            throw DomainError("config: unknown format '" + f + "'");
    quad.validate();
}

inline std::string RunConfig::canonical() const {
    std::string s;
    auto kv = [&s](const char* k, const std::string& v) {
        s += k;
        s += " = ";
        s += v;
        s += '\n';
    };
    kv("scenario", detail::join(scenarios));
    kv("two_pi_T_sigma", fmt_double(two_pi_T_sigma));
    kv("l_min_over_sigma", fmt_double(L_min));
    kv("l_max_over_sigma", fmt_double(L_max));
    kv("n_l", fmt_int(n_L));
    kv("omega_min_sigma", fmt_double(omega_min));
    kv("omega_max_sigma", fmt_double(omega_max));
    kv("n_omega", fmt_int(n_omega));
    kv("l_over_sigma", fmt_double(L_point));
    kv("omega_sigma", fmt_double(omega_point));
    kv("u_over_sigma", fmt_double(u_point));
    kv("v_over_sigma", fmt_double(v_point));
    kv("v_im_over_sigma", fmt_double(v_im));
    kv("method", method);
    kv("rel_tol_1d", fmt_double(quad.rel_tol_1d));
    kv("rel_tol_2d", fmt_double(quad.rel_tol_2d));
    kv("window_cut", fmt_double(quad.window_cut));
    kv("series_order", fmt_int(quad.series_order));
    kv("max_panels", fmt_int(quad.max_panels));
    kv("eps_k_lo", fmt_int(quad.eps_k_lo));
    kv("eps_k_hi", fmt_int(quad.eps_k_hi));
    kv("out", out);
    kv("formats", detail::join(formats));
    return s;
}

// key = value lines; '#' comments and blank lines skipped; later keys win
inline void apply_config_text(RunConfig& cfg, const std::string& text) {
    std::size_t at = 0;
    while (at < text.size()) {
        std::size_t nl = text.find('\n', at);
        if (nl == std::string::npos) nl = text.size();
        std::string line = text.substr(at, nl - at);
        at = nl + 1;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config: line without '=': '" + line + "'");
        auto trim = [](std::string s) {
            std::size_t b = s.find_first_not_of(" \t\r");
            std::size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

inline ScenarioSpec scenario_of(const std::string& name, double two_pi_T_sigma) {
    if (name == "vacuum") return ScenarioSpec::vacuum();
    if (name == "thermal") return ScenarioSpec::thermal(two_pi_T_sigma / (2.0 * pi));
    if (name == "de_sitter") return ScenarioSpec::de_sitter(two_pi_T_sigma / (2.0 * pi));
    throw DomainError("unknown scenario '" + name + "'");
}

inline Method method_of(const std::string& name) {
    if (name == "auto") return Method::auto_tier;
    if (name == "closed_form") return Method::closed_form;
    if (name == "series") return Method::series;
    if (name == "quadrature") return Method::quadrature;
    if (name == "image_sum") return Method::image_sum;
    throw DomainError("unknown method '" + name + "'");
}

// One (scenario, L) sample of the boundary trace
struct CurveRow {
    std::string scenario;
    double L = 0.0;
    bool has_window = false;
    bool closed_above = false;
    double lower = 0.0;
    double upper = 0.0;
    double cap = std::numeric_limits<double>::infinity();
    double horizon = 0.0;  // 0 = not applicable
    std::string method;
    std::string flags;
};

// Boundary rows for every (scenario, L) pair, scenario-major, L ascending.
// Rows are computed into preassigned slots by striding workers and assembled
// in index order, so the result is identical for every thread count.
inline std::vector<CurveRow> compute_curve(const RunConfig& cfg, int threads = 1) {
    cfg.validate();
    if (threads < 1) threads = 1;
    const auto Ls = log_spaced(cfg.L_min, cfg.L_max, cfg.n_L);

    struct ScenarioSlot {
        ScenarioSpec sc = ScenarioSpec::vacuum();
        double cap = std::numeric_limits<double>::infinity();
        double horizon = 0.0;
    };
    std::vector<ScenarioSlot> slots;
    slots.reserve(cfg.scenarios.size());
    for (const auto& name : cfg.scenarios) {
        ScenarioSlot slot;
        slot.sc = scenario_of(name, cfg.two_pi_T_sigma);
        if (slot.sc.kind != ScenarioSpec::Kind::vacuum) {
            slot.cap = max_entangled_separation(slot.sc, 1.0, cfg.quad);
            slot.horizon = 1.0 / cfg.two_pi_T_sigma;
        }
        slots.push_back(slot);
    }

    const int total = static_cast<int>(cfg.scenarios.size()) * cfg.n_L;
    std::vector<CurveRow> rows(static_cast<std::size_t>(total));

    auto fill = [&](int idx) {
        const int si = idx / cfg.n_L, li = idx % cfg.n_L;
        CurveRow& row = rows[static_cast<std::size_t>(idx)];
        row.scenario = cfg.scenarios[static_cast<std::size_t>(si)];
        row.L = Ls[static_cast<std::size_t>(li)];
        row.cap = slots[static_cast<std::size_t>(si)].cap;
        row.horizon = slots[static_cast<std::size_t>(si)].horizon;
        row.method = cfg.method;
        try {
            auto win = critical_frequencies(slots[static_cast<std::size_t>(si)].sc, 1.0,
                                            row.L, cfg.quad);
            row.has_window = !win.empty;
            row.closed_above = win.closed_above;
            row.lower = win.lower;
            row.upper = win.upper;
        } catch (const IndeterminateError&) {
            row.flags = "indeterminate";
        } catch (const TopologyError&) {
            row.flags = "topology";
        } catch (const BreakdownError&) {
            row.flags = "breakdown";
        } catch (const PoleCrossingError&) {
            row.flags = "pole-crossing";
        } catch (const AccuracyError&) {
            row.flags = "accuracy";
        }
    };
    if (threads == 1) {
        for (int idx = 0; idx < total; ++idx) fill(idx);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (int idx = t; idx < total; idx += threads) fill(idx);
            });
        for (auto& w : pool) w.join();
    }
    return rows;
}

inline std::string provenance_comment(const RunConfig& cfg) {
    std::string head = "# config_hash = " + cfg.config_hash() + "\n";
    std::string canon = cfg.canonical();
    std::size_t at = 0;
    while (at < canon.size()) {
        std::size_t nl = canon.find('\n', at);
        head += "# " + canon.substr(at, nl - at) + "\n";
        at = nl + 1;
    }
    return head;
}

inline std::string csv_curve(const RunConfig& cfg, const std::vector<CurveRow>& rows) {
    std::string s = provenance_comment(cfg);
    s += "scenario,L_over_sigma,omega_lower_sigma,omega_upper_sigma,"
         "L_max_over_sigma,horizon_over_sigma,method,flags\n";
    for (const auto& r : rows) {
        s += r.scenario;
        s += ',';
        s += fmt_double(r.L);
        s += ',';
        if (r.has_window) s += fmt_double(r.lower);
        s += ',';
        if (r.has_window && r.closed_above) s += fmt_double(r.upper);
        s += ',';
        if (std::isfinite(r.cap)) s += fmt_double(r.cap);
        s += ',';
        if (r.horizon > 0.0) s += fmt_double(r.horizon);
        s += ',';
        s += r.method;
        s += ',';
        s += r.flags;
        s += '\n';
    }
    return s;
}

namespace detail {

// fixed-point pixel coordinate: two decimals, deterministic
inline std::string px(double v) {
    double r = std::round(v * 100.0) / 100.0;
    return fmt_double(r);
}

}  // namespace detail

// Log-log boundary chart.  Pure string assembly from already-computed rows;
// every coordinate passes through the same rounding, so the bytes depend only
// on the numerical results.
inline std::string render_figure_svg(const RunConfig& cfg,
                                     const std::vector<CurveRow>& rows,
                                     const SubsetReport& witness) {
    const double W = 720.0, H = 540.0;
    const double x0 = 70.0, x1 = 700.0, y0 = 40.0, y1 = 485.0;
    const double lx0 = std::log10(cfg.L_min), lx1 = std::log10(cfg.L_max);
    const double ly0 = std::log10(cfg.omega_min), ly1 = std::log10(cfg.omega_max);
    auto X = [&](double L) { return x0 + (std::log10(L) - lx0) / (lx1 - lx0) * (x1 - x0); };
    auto Y = [&](double w) { return y1 - (std::log10(w) - ly0) / (ly1 - ly0) * (y1 - y0); };
    auto in_y = [&](double w) { return w >= cfg.omega_min && w <= cfg.omega_max; };

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_double(W) +
         "\" height=\"" + fmt_double(H) + "\" viewBox=\"0 0 " + fmt_double(W) + " " +
         fmt_double(H) + "\">\n";
    s += "<desc>\nconfig_hash = " + cfg.config_hash() + "\n" + cfg.canonical() + "</desc>\n";
    s += "<rect width=\"" + fmt_double(W) + "\" height=\"" + fmt_double(H) +
         "\" fill=\"white\"/>\n";
    s += "<rect x=\"" + detail::px(x0) + "\" y=\"" + detail::px(y0) + "\" width=\"" +
         detail::px(x1 - x0) + "\" height=\"" + detail::px(y1 - y0) +
         "\" fill=\"none\" stroke=\"#333\"/>\n";

    // decade ticks
    for (int d = static_cast<int>(std::ceil(lx0)); d <= static_cast<int>(std::floor(lx1)); ++d) {
        double lx = X(std::pow(10.0, d));
        s += "<line x1=\"" + detail::px(lx) + "\" y1=\"" + detail::px(y1) + "\" x2=\"" +
             detail::px(lx) + "\" y2=\"" + detail::px(y1 + 6.0) +
             "\" stroke=\"#333\"/>\n";
        s += "<text x=\"" + detail::px(lx) + "\" y=\"" + detail::px(y1 + 20.0) +
             "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">1e" +
             fmt_int(d) + "</text>\n";
    }
    for (int d = static_cast<int>(std::ceil(ly0)); d <= static_cast<int>(std::floor(ly1)); ++d) {
        double ly = Y(std::pow(10.0, d));
        s += "<line x1=\"" + detail::px(x0 - 6.0) + "\" y1=\"" + detail::px(ly) +
             "\" x2=\"" + detail::px(x0) + "\" y2=\"" + detail::px(ly) +
             "\" stroke=\"#333\"/>\n";
        s += "<text x=\"" + detail::px(x0 - 10.0) + "\" y=\"" + detail::px(ly + 4.0) +
             "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\">1e" +
             fmt_int(d) + "</text>\n";
    }
    s += "<text x=\"" + detail::px((x0 + x1) / 2.0) + "\" y=\"" + detail::px(H - 14.0) +
         "\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\">"
         "detector separation L / sigma</text>\n";
    s += "<text x=\"18\" y=\"" + detail::px((y0 + y1) / 2.0) +
         "\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 " + detail::px((y0 + y1) / 2.0) +
         ")\">detector gap Omega sigma</text>\n";
    s += "<text x=\"" + detail::px((x0 + x1) / 2.0) + "\" y=\"24\" "
         "font-family=\"monospace\" font-size=\"15\" text-anchor=\"middle\">"
         "entangled regions, two_pi_T_sigma = " + fmt_double(cfg.two_pi_T_sigma) +
         "</text>\n";

    // horizon line
    double horizon = 0.0;
    for (const auto& r : rows)
        if (r.horizon > 0.0) horizon = r.horizon;
    if (horizon >= cfg.L_min && horizon <= cfg.L_max) {
        s += "<line x1=\"" + detail::px(X(horizon)) + "\" y1=\"" + detail::px(y0) +
             "\" x2=\"" + detail::px(X(horizon)) + "\" y2=\"" + detail::px(y1) +
             "\" stroke=\"#777\" stroke-dasharray=\"3 4\"/>\n";
        s += "<text x=\"" + detail::px(X(horizon) + 4.0) + "\" y=\"" +
             detail::px(y0 + 14.0) +
             "\" font-family=\"monospace\" font-size=\"12\" fill=\"#555\">horizon"
             "</text>\n";
    }

    // one path per scenario: lower branch left-to-right, then the upper branch
    // back right-to-left so closed regions draw as a single open loop
    struct Style {
        const char* name;
        const char* color;
    };
    const Style styles[] = {{"vacuum", "#444444"},
                            {"thermal", "#c0392b"},
                            {"de_sitter", "#2471a3"}};
    double legend_y = y0 + 16.0;
    for (const auto& st : styles) {
        std::string pts;
        auto add = [&](double L, double w) {
            if (!in_y(w)) return;
            pts += pts.empty() ? "M" : " L";
            pts += detail::px(X(L)) + " " + detail::px(Y(w));
        };
        for (const auto& r : rows)
            if (r.scenario == st.name && r.has_window) add(r.L, r.lower);
        for (auto it = rows.rbegin(); it != rows.rend(); ++it)
            if (it->scenario == st.name && it->has_window && it->closed_above)
                add(it->L, it->upper);
        if (pts.empty()) continue;
        s += "<path d=\"" + pts + "\" fill=\"none\" stroke=\"" + st.color +
             "\" stroke-width=\"1.6\"/>\n";
        s += "<line x1=\"" + detail::px(x0 + 12.0) + "\" y1=\"" + detail::px(legend_y) +
             "\" x2=\"" + detail::px(x0 + 40.0) + "\" y2=\"" + detail::px(legend_y) +
             "\" stroke=\"" + st.color + "\" stroke-width=\"1.6\"/>\n";
        s += "<text x=\"" + detail::px(x0 + 46.0) + "\" y=\"" + detail::px(legend_y + 4.0) +
             "\" font-family=\"monospace\" font-size=\"12\">" + std::string(st.name) +
             "</text>\n";
        legend_y += 16.0;
    }

    if (witness.witness_in_band) {
        double cx = X(witness.witness_L), cy = Y(witness.witness_Omega);
        std::string star;
        for (int k = 0; k < 10; ++k) {
            double r = (k % 2 == 0) ? 9.0 : 3.6;
            double a = pi / 2.0 + double(k) * pi / 5.0;
            star += (k ? " " : "");
            star += detail::px(cx + r * std::cos(a)) + "," +
                    detail::px(cy - r * std::sin(a));
        }
        s += "<polygon points=\"" + star +
             "\" fill=\"#b8860b\" stroke=\"#6b4e00\" stroke-width=\"0.8\"/>\n";
        s += "<text x=\"" + detail::px(cx + 12.0) + "\" y=\"" + detail::px(cy + 4.0) +
             "\" font-family=\"monospace\" font-size=\"12\" fill=\"#6b4e00\">witness "
             "L=" + fmt_double(std::round(witness.witness_L * 100.0) / 100.0) +
             " Omega=" + fmt_double(std::round(witness.witness_Omega * 100.0) / 100.0) +
             "</text>\n";
    } else {
        s += "<text x=\"" + detail::px((x0 + x1) / 2.0) + "\" y=\"" +
             detail::px((y0 + y1) / 2.0) +
             "\" font-family=\"monospace\" font-size=\"14\" fill=\"#a00\" "
             "text-anchor=\"middle\">FAILURE: no witness point found in the horizon "
             "band</text>\n";
    }

    s += "</svg>\n";
    return s;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot open '" + path + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw DomainError("short write to '" + path + "'");
}

}  // namespace udw
