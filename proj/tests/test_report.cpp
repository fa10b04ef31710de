#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "udw/report.hpp"

using namespace udw;

TEST_CASE("number formatting is locale free and round trips") {
    CHECK(fmt_double(0.001) == "0.001");
    CHECK(fmt_double(0.1) == "0.1");
    CHECK(fmt_double(1000.0) == "1000");
    CHECK(fmt_double(-2.5) == "-2.5");
    CHECK(fmt_int(42) == "42");
    // shortest round trip: parsing the string recovers the exact double
    double x = 0.1 + 0.2;
    CHECK(std::stod(fmt_double(x)) == x);
}

TEST_CASE("hash matches the fnv-1a reference vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(hex64(0xcbf29ce484222325ULL) == "0xcbf29ce484222325");
    CHECK(hex64(0x1ULL) == "0x0000000000000001");
}

TEST_CASE("canonical config is a fixed point of its own parser") {
    RunConfig cfg;
    std::string canon = cfg.canonical();

    RunConfig back;
    apply_config_text(back, canon);
    CHECK(back.canonical() == canon);
    CHECK(back.config_hash() == cfg.config_hash());

    // the hash line a written config carries is accepted and ignored
    RunConfig again;
    apply_config_text(again, canon + "config_hash = " + cfg.config_hash() + "\n");
    CHECK(again.canonical() == canon);

    // comments and blank lines are skipped, later keys win
    RunConfig over;
    apply_config_text(over, "# comment\n\nl_over_sigma = 3\nl_over_sigma = 7\n");
    CHECK(over.L_point == 7.0);

    CHECK_THROWS_AS(over.set("no_such_key", "1"), DomainError);
    CHECK_THROWS_AS(over.set("l_over_sigma", "abc"), DomainError);
}

TEST_CASE("config validation guards the physical regime") {
    RunConfig cfg;
    cfg.two_pi_T_sigma = 0.5;  // switching no longer fast against the bath
    CHECK_THROWS_AS(cfg.validate(), GuardError);

    cfg.scenarios = {"vacuum"};  // no bath, the scale is unused
    CHECK_NOTHROW(cfg.validate());

    RunConfig bad;
    bad.scenarios = {"minkowski"};
    CHECK_THROWS_AS(bad.validate(), DomainError);

    RunConfig badm;
    badm.method = "magic";
    CHECK_THROWS_AS(badm.validate(), DomainError);

    RunConfig badf;
    badf.formats = {"csv", "pdf"};
    CHECK_THROWS_AS(badf.validate(), DomainError);

    RunConfig badq;
    badq.quad.rel_tol_1d = -1.0;
    CHECK_THROWS_AS(badq.validate(), GuardError);
}

namespace {

RunConfig small_grid_config() {
    RunConfig cfg;
    cfg.scenarios = {"vacuum", "thermal"};
    cfg.two_pi_T_sigma = 1e-2;
    cfg.L_min = 100.0;
    cfg.L_max = 400.0;
    cfg.n_L = 4;
    return cfg;
}

}  // namespace

TEST_CASE("curve rows carry windows, caps and the horizon") {
    RunConfig cfg = small_grid_config();
    auto rows = compute_curve(cfg, 2);
    REQUIRE(rows.size() == 8);

    // scenario-major layout, L ascending inside each block
    for (int i = 0; i < 4; ++i) {
        CHECK(rows[i].scenario == "vacuum");
        CHECK(rows[i + 4].scenario == "thermal");
        CHECK(rows[i].L == Catch::Approx(rows[i + 4].L));
        if (i > 0) CHECK(rows[i].L > rows[i - 1].L);
    }

    for (int i = 0; i < 4; ++i) {
        const auto& r = rows[i];
        CHECK(r.has_window);
        CHECK_FALSE(r.closed_above);       // no upper boundary in the vacuum
        CHECK_FALSE(std::isfinite(r.cap)); // entangled at every separation
        CHECK(r.horizon == 0.0);
        CHECK(r.lower == Catch::Approx(r.L / 2.0).epsilon(0.02));
        CHECK(r.flags.empty());
    }

    const double cap = rows[4].cap;
    CHECK(std::isfinite(cap));
    CHECK(cap > 173.0);
    CHECK(cap < 390.0);
    for (int i = 4; i < 8; ++i) {
        const auto& r = rows[i];
        CHECK(r.horizon == Catch::Approx(100.0));
        CHECK(r.cap == cap);  // one cap per scenario, repeated on every row
        if (r.L < cap) {
            CHECK(r.has_window);
            CHECK(r.closed_above);
            CHECK(r.upper > r.lower);
        } else {
            CHECK_FALSE(r.has_window);
            CHECK(r.flags.empty());  // an empty window is a result, not an error
        }
    }
}

TEST_CASE("curve output is byte identical for every thread count") {
    RunConfig cfg = small_grid_config();
    auto one = csv_curve(cfg, compute_curve(cfg, 1));
    auto three = csv_curve(cfg, compute_curve(cfg, 3));
    CHECK(one == three);
}

TEST_CASE("csv layout: provenance comments, header, empty cells") {
    RunConfig cfg = small_grid_config();
    auto rows = compute_curve(cfg, 2);
    std::string csv = csv_curve(cfg, rows);

    CHECK(csv.rfind("# config_hash = " + cfg.config_hash(), 0) == 0);

    // first non-comment line is the header
    std::vector<std::string> lines;
    std::size_t at = 0;
    while (at < csv.size()) {
        std::size_t nl = csv.find('\n', at);
        lines.push_back(csv.substr(at, nl - at));
        at = nl + 1;
    }
    std::size_t h = 0;
    while (h < lines.size() && lines[h].rfind("#", 0) == 0) ++h;
    REQUIRE(h < lines.size());
    CHECK(lines[h] ==
          "scenario,L_over_sigma,omega_lower_sigma,omega_upper_sigma,"
          "L_max_over_sigma,horizon_over_sigma,method,flags");
    REQUIRE(lines.size() == h + 1 + rows.size());

    auto fields = [](const std::string& line) {
        std::vector<std::string> out;
        std::size_t a = 0;
        while (true) {
            std::size_t c = line.find(',', a);
            out.push_back(line.substr(a, c == std::string::npos ? c : c - a));
            if (c == std::string::npos) break;
            a = c + 1;
        }
        return out;
    };

    // vacuum row: open window, no cap, no horizon
    auto vac = fields(lines[h + 1]);
    REQUIRE(vac.size() == 8);
    CHECK(vac[0] == "vacuum");
    CHECK(vac[1] == "100");
    CHECK(!vac[2].empty());
    CHECK(vac[3].empty());
    CHECK(vac[4].empty());
    CHECK(vac[5].empty());

    // thermal row beyond the cap: window cells empty, cap and horizon kept
    auto far = fields(lines[h + rows.size()]);
    REQUIRE(far.size() == 8);
    CHECK(far[0] == "thermal");
    CHECK(far[1] == "400");
    CHECK(far[2].empty());
    CHECK(far[3].empty());
    CHECK(!far[4].empty());
    CHECK(far[5] == "100");
}

TEST_CASE("figure rendering embeds provenance, horizon and the witness star") {
    RunConfig cfg;
    cfg.two_pi_T_sigma = 1e-3;

    std::vector<CurveRow> rows;
    for (double L : {200.0, 1000.0, 3000.0}) {
        CurveRow r;
        r.scenario = "thermal";
        r.L = L;
        r.has_window = L < 2400.0;
        r.closed_above = true;
        r.lower = L / 2.0;
        r.upper = 3000.0 - L / 2.0;
        r.cap = 2399.0;
        r.horizon = 1000.0;
        r.method = "series";
        rows.push_back(r);
    }

    SubsetReport wit;
    wit.witness_in_band = true;
    wit.witness_L = 1227.7;
    wit.witness_Omega = 623.6;

    std::string svg = render_figure_svg(cfg, rows, wit);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find(cfg.config_hash()) != std::string::npos);
    CHECK(svg.find("horizon") != std::string::npos);
    CHECK(svg.find("witness") != std::string::npos);
    CHECK(svg.find("<polygon") != std::string::npos);
    CHECK(svg.find("FAILURE") == std::string::npos);
    CHECK(svg == render_figure_svg(cfg, rows, wit));  // pure function of inputs

    SubsetReport none;
    std::string bare = render_figure_svg(cfg, rows, none);
    CHECK(bare.find("<polygon") == std::string::npos);
    CHECK(bare.find("FAILURE: no witness") != std::string::npos);
}
