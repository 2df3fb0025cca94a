#include <doctest.h>

#include "radboltz/errors.hpp"
#include "radboltz/io.hpp"
#include "radboltz/runner.hpp"
#include "radboltz/specfun.hpp"
#include "radboltz/spectrum.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

using namespace radboltz;
using cross_section::Form;

namespace {

std::string temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("radboltz_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

} // namespace

TEST_CASE("format_double round-trips") {
    for (double v : {1.0 / 3.0, 0.05, 1e-300, -2.7182818284590452, 0.0, 1e17})
        CHECK(std::stod(io::format_double(v)) == v);
}

TEST_CASE("structured text round-trip") {
    io::Node root;
    root.set("name", std::string("demo"));
    io::Node& sect = root.child("section");
    sect.set("x", 0.1);
    sect.set("flag", true);
    sect.child("deep").set("y", static_cast<long long>(-3));
    std::string text = io::emit_structured(root);
    io::Node back = io::parse_structured(text, "demo");
    CHECK(back.find("name")->value() == "demo");
    CHECK(back.find_path("section.x")->as_double() == 0.1);
    CHECK(back.find_path("section.flag")->as_bool());
    CHECK(back.find_path("section.deep.y")->as_int() == -3);
    CHECK(io::emit_structured(back) == text);
}

TEST_CASE("structured parse errors carry file and line") {
    CHECK_THROWS_WITH_AS(io::parse_structured("key value\n", "f.txt"), "f.txt:1: missing ':'",
                         parse_error);
    CHECK_THROWS_AS(io::parse_structured("a:\n   b: 1\n", "f.txt"), parse_error); // odd indent
    CHECK_THROWS_AS(io::parse_structured("a: 1\n    b: 2\n", "f.txt"), parse_error); // level jump
}

TEST_CASE("csv round-trip") {
    std::string text = io::emit_csv({"a", "b"}, {{1.0, 2.5}, {-3.0, 1e-12}});
    auto table = io::parse_csv(text, "t.csv");
    REQUIRE(table.header.size() == 2);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[1][1] == 1e-12);
    CHECK_THROWS_AS(io::parse_csv("a,b\n1\n", "t.csv"), parse_error);
    CHECK_THROWS_AS(io::parse_csv("a,b\n1,zzz\n", "t.csv"), parse_error);
}

TEST_CASE("config parsing diagnostics") {
    auto entries = io::parse_config("# comment\nmodel.s = 0.5  # trailing\n\ndelta = 0.4\n", "c");
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].key == "model.s");
    CHECK(entries[0].value == "0.5");
    CHECK(entries[0].line == 2);
    CHECK_THROWS_AS(io::parse_config("model.s 0.5\n", "c"), parse_error);
    CHECK_THROWS_AS(io::parse_config("a = 1\na = 2\n", "c"), parse_error);
}

TEST_CASE("run config: parse, defaults, round-trip") {
    auto cfg = runner::RunConfig::from_text("model.s = 0.25\ntruncation = 12\n"
                                            "init.kind = coeffs\ninit.coeffs = 0,0,0.01,0.02\n"
                                            "time.spacing = log\nseed = 77\n",
                                            "inline");
    CHECK(cfg.model.s == 0.25);
    CHECK(cfg.model.form == Form::PowerLawSine); // default untouched
    CHECK(cfg.truncation == 12);
    CHECK(cfg.init_kind == runner::RunConfig::InitKind::Coeffs);
    REQUIRE(cfg.init_coeffs.size() == 4);
    CHECK(cfg.seed == 77);
    CHECK(cfg.log_spacing);

    auto back = runner::RunConfig::from_text(cfg.to_config_text(), "resolved");
    CHECK(back.model.s == cfg.model.s);
    CHECK(back.truncation == cfg.truncation);
    CHECK(back.init_coeffs == cfg.init_coeffs);
    CHECK(back.seed == cfg.seed);
    CHECK(back.log_spacing == cfg.log_spacing);
    CHECK(back.to_config_text() == cfg.to_config_text());
}

TEST_CASE("run config rejects bad input with location info") {
    CHECK_THROWS_WITH_AS(runner::RunConfig::from_text("bogus.key = 1\n", "bad.cfg"),
                         "bad.cfg:1: unknown key 'bogus.key'", parse_error);
    CHECK_THROWS_AS(runner::RunConfig::from_text("model.s = 1.5\n", "bad.cfg"), parse_error);
    CHECK_THROWS_AS(runner::RunConfig::from_text("delta = nope\n", "bad.cfg"), parse_error);
    CHECK_THROWS_AS(runner::RunConfig::from_text("truncation = 1\n", "bad.cfg"), parse_error);
}

TEST_CASE("time grids") {
    runner::RunConfig cfg;
    cfg.t_end = 4.0;
    cfg.time_points = 9;
    auto lin = cfg.time_grid();
    REQUIRE(lin.size() == 9);
    CHECK(lin.front() == 0.0);
    CHECK(lin.back() == 4.0);
    cfg.log_spacing = true;
    auto lg = cfg.time_grid();
    REQUIRE(lg.size() == 9);
    CHECK(lg.front() == 0.0);
    CHECK(lg.back() == 4.0);
    for (size_t i = 1; i < lg.size(); ++i) CHECK(lg[i] > lg[i - 1]);
    cfg.time_points = 2;
    auto two = cfg.time_grid();
    REQUIRE(two.size() == 2);
    CHECK(two[0] == 0.0);
    CHECK(two[1] == 4.0);
}

TEST_CASE("initial data construction per kind") {
    runner::RunConfig cfg;
    cfg.truncation = 10;
    cfg.init_kind = runner::RunConfig::InitKind::Mode;
    cfg.init_mode = 3;
    cfg.init_amplitude = 0.04;
    auto d = cfg.build_initial(10);
    CHECK(d.coeffs[3] == 0.04);
    CHECK(d.in_null_perp);

    cfg.init_kind = runner::RunConfig::InitKind::Random;
    cfg.seed = 5;
    auto r1 = cfg.build_initial(10);
    auto r2 = cfg.build_initial(10);
    CHECK(r1.coeffs == r2.coeffs); // deterministic under the seed
    double norm = 0.0;
    for (double x : r1.coeffs) norm += x * x;
    CHECK(std::sqrt(norm) == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(r1.in_null_perp);

    cfg.init_kind = runner::RunConfig::InitKind::Zero;
    auto z = cfg.build_initial(10);
    for (double x : z.coeffs) CHECK(x == 0.0);
}

TEST_CASE("tables snapshot round-trip is exact") {
    cross_section::QuadratureSpec quad;
    auto t = spectrum::build_tables({0.4, 1.3, Form::PowerLawTheta}, 10, quad);
    auto node = io::tables_to_snapshot(t);
    auto text = io::emit_structured(node);
    auto back = io::tables_from_snapshot(io::parse_structured(text, "snap"));
    CHECK(back.truncation() == 10);
    CHECK(back.model().form == Form::PowerLawTheta);
    CHECK(back.model().s == 0.4);
    for (int n = 0; n <= 10; ++n) {
        CHECK(back.lambda(n) == t.lambda(n));
        for (int m = 0; m <= 10; ++m) CHECK(back.alpha(n, m) == t.alpha(n, m));
    }
    for (int k = 1; k <= 10; ++k)
        for (int l = 0; k + l <= 10; ++l) CHECK(back.coupling(k, l) == t.coupling(k, l));
}

TEST_CASE("tables csv export") {
    cross_section::QuadratureSpec quad;
    auto t = spectrum::build_tables({0.5, 1.0, Form::PowerLawSine}, 6, quad);
    auto table = io::parse_csv(io::tables_to_csv(t), "tables.csv");
    REQUIRE(table.header == std::vector<std::string>{"n", "m", "lambda", "alpha", "w"});
    CHECK(table.rows.size() == 49);
    // row (2, 2): lambda(2), alpha(2,2), coupling(2,2)
    for (const auto& row : table.rows)
        if (row[0] == 2.0 && row[1] == 2.0) {
            CHECK(row[2] == t.lambda(2));
            CHECK(row[3] == t.alpha(2, 2));
            CHECK(row[4] == t.coupling(2, 2));
        }
}

TEST_CASE("solve run emits a deterministic, self-describing directory") {
    runner::RunConfig cfg = runner::RunConfig::from_text(
        "truncation = 12\ninit.kind = mode\ninit.mode = 2\ninit.amplitude = 0.05\n"
        "time.t_end = 2\ntime.points = 5\n",
        "inline");
    std::string dir_a = temp_dir("solve_a");
    std::string dir_b = temp_dir("solve_b");
    std::ostringstream log;
    CHECK(runner::run_solve(cfg, dir_a, log) == runner::exit_ok);
    CHECK(runner::run_solve(cfg, dir_b, log) == runner::exit_ok);
    for (const char* name : {"trajectory.csv", "solution.txt", "norms.txt", "resolved-config.cfg"}) {
        auto a = io::read_file(dir_a + "/" + name);
        auto b = io::read_file(dir_b + "/" + name);
        CHECK(a == b);
        CHECK_FALSE(a.empty());
    }
    // the trajectory's mode-2 column is a pure exponential
    auto table = io::parse_csv(io::read_file(dir_a + "/trajectory.csv"), "trajectory.csv");
    auto t = spectrum::build_tables(cfg.model, cfg.truncation, cfg.quad);
    for (const auto& row : table.rows)
        CHECK(row[3] == doctest::Approx(0.05 * std::exp(-t.lambda(2) * row[0])).epsilon(1e-12));

    // reconstructed profiles are emitted as two-column tables
    auto prof = io::parse_csv(io::read_file(dir_a + "/profile-initial.csv"), "profile-initial.csv");
    REQUIRE(prof.header == std::vector<std::string>{"r", "g"});
    REQUIRE(prof.rows.size() > 10);
    const auto& mid = prof.rows[prof.rows.size() / 3];
    CHECK(mid[1] == doctest::Approx(0.05 * specfun::phi_radial(2, mid[0])).epsilon(1e-10));

    std::ostringstream rep;
    CHECK(runner::run_report(dir_a, rep) == runner::exit_ok);
    CHECK(rep.str().find("decay bound") != std::string::npos);

    std::ostringstream bad;
    CHECK(runner::run_report(temp_dir("empty"), bad) == runner::exit_config_error);
}

TEST_CASE("spectrum run honors the format switch") {
    runner::RunConfig cfg;
    cfg.truncation = 6;
    cfg.format = "tabular";
    std::string dir = temp_dir("spec_fmt");
    std::ostringstream log;
    CHECK(runner::run_spectrum(cfg, dir, log) == runner::exit_ok);
    CHECK(std::filesystem::exists(dir + "/spectrum.csv"));
    CHECK_FALSE(std::filesystem::exists(dir + "/spectrum-snapshot.txt"));
    cfg.format = "structured";
    std::string dir2 = temp_dir("spec_fmt2");
    CHECK(runner::run_spectrum(cfg, dir2, log) == runner::exit_ok);
    CHECK_FALSE(std::filesystem::exists(dir2 + "/spectrum.csv"));
    CHECK(std::filesystem::exists(dir2 + "/spectrum-snapshot.txt"));
}

TEST_CASE("initial norms above the small-data threshold warn but run") {
    runner::RunConfig cfg = runner::RunConfig::from_text(
        "truncation = 8\ninit.kind = mode\ninit.mode = 2\ninit.amplitude = 0.2\n"
        "time.t_end = 1\ntime.points = 3\n",
        "inline");
    std::string dir = temp_dir("warn");
    std::ostringstream log;
    CHECK(runner::run_solve(cfg, dir, log) == runner::exit_ok);
    CHECK(log.str().find("warning: initial norm") != std::string::npos);
    CHECK(log.str().find("0.2") != std::string::npos);
}

TEST_CASE("gaussian bump data routes through the numeric solver") {
    runner::RunConfig cfg = runner::RunConfig::from_text(
        "truncation = 12\ninit.kind = gaussian-bump\ninit.center = 2\ninit.width = 0.5\n"
        "init.amplitude = 0.02\ntime.t_end = 1\ntime.points = 3\n",
        "inline");
    std::string dir = temp_dir("bump");
    std::ostringstream log;
    CHECK(runner::run_solve(cfg, dir, log) == runner::exit_ok);
    CHECK(log.str().find("numeric integrator") != std::string::npos);
    auto node = io::parse_structured(io::read_file(dir + "/norms.txt"), "norms.txt");
    CHECK_FALSE(node.find_path("decay_report.bound_applicable")->as_bool());
}

TEST_CASE("snapshot verification flags corruption") {
    cross_section::QuadratureSpec quad;
    auto t = spectrum::build_tables({0.5, 1.0, Form::PowerLawSine}, 12, quad);
    std::ostringstream log;
    auto clean = runner::verify_snapshot(t, log);
    CHECK(clean.failures() == 0);

    auto node = io::tables_to_snapshot(t);
    node.child("radboltz_tables").child("lambda").set("2", t.lambda(2) * 1.5);
    auto bad = io::tables_from_snapshot(node);
    auto rep = runner::verify_snapshot(bad, log);
    CHECK(rep.failures() >= 1);
}
