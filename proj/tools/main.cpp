// Command-line front end; everything substantive lives behind the C API of
// the shared library.
#include "radboltz.h"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

constexpr const char* config_key_help =
    "Configuration file keys (key = value, '#' comments), with defaults:\n"
    "  model.form = power-law-sine        cross section (power-law-sine | power-law-theta)\n"
    "  model.s = 0.5                      singularity exponent in (0, 1)\n"
    "  model.amplitude = 1                cross-section constant\n"
    "  truncation = 64                    number of retained modes (N)\n"
    "  init.kind = mode                   zero | mode | coeffs | gaussian-bump | random\n"
    "  init.mode = 2                      populated mode for init.kind = mode\n"
    "  init.amplitude = 0.05              initial coefficient / norm scale\n"
    "  init.coeffs =                      comma list b0,b1,... for init.kind = coeffs\n"
    "  init.center = 2, init.width = 0.5  gaussian-bump parameters\n"
    "  time.t_end = 5, time.points = 51   output time grid\n"
    "  time.spacing = linear              linear | log\n"
    "  delta = 0.5                        decay-bound slack in (0, 1)\n"
    "  seed = 0                           RNG seed for random data\n"
    "  norm_warn_threshold = 0.1          warn above this initial norm\n"
    "  quad.abs_tol = 1e-10, quad.rel_tol = 1e-10, quad.max_subdivisions = 256,\n"
    "  quad.grading_exponent = 1          angular quadrature controls\n"
    "  verify.spectrum / cascade / decay / identities / smoothing / structural = true\n"
    "  format = both                      both | tabular | structured\n"
    "\n"
    "Exit codes: 0 success, 1 verification failure (--strict), 2 configuration\n"
    "error, 3 numerical failure.";

int status_to_exit(rbz_status st) {
    switch (st) {
    case RBZ_OK: return 0;
    case RBZ_ERR_VERIFICATION: return 1;
    case RBZ_ERR_CONFIG:
    case RBZ_ERR_INVALID_ARGUMENT: return 2;
    default: return 3;
    }
}

struct RunHandle {
    rbz_run* run = nullptr;
    ~RunHandle() { rbz_run_destroy(run); }
};

int make_run(const std::string& config, const std::vector<std::pair<std::string, std::string>>& overrides,
             RunHandle& h) {
    rbz_status st = rbz_run_create(config.empty() ? nullptr : config.c_str(), &h.run);
    if (st != RBZ_OK) {
        std::fprintf(stderr, "error: %s\n", rbz_last_error());
        return status_to_exit(st);
    }
    for (const auto& [key, value] : overrides) {
        st = rbz_run_set(h.run, key.c_str(), value.c_str());
        if (st != RBZ_OK) {
            std::fprintf(stderr, "error: %s\n", rbz_last_error());
            return status_to_exit(st);
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"radboltz: spectral solver and verification harness for the radially\n"
                 "symmetric spatially homogeneous non-cutoff Boltzmann equation\n"
                 "(Maxwellian molecules)"};
    app.footer(config_key_help);
    app.require_subcommand(1);

    std::string config, out_dir = "out", format, tables, run_dir;
    unsigned long long seed = 0;
    bool strict = false;

    auto* cmd_spectrum = app.add_subcommand("spectrum", "build and export the eigenvalue and "
                                                        "coupling tables");
    auto* cmd_solve = app.add_subcommand("solve", "solve the mode cascade and export the "
                                                  "trajectory and decay report");
    auto* cmd_verify = app.add_subcommand("verify", "run the verification suites");
    auto* cmd_report = app.add_subcommand("report", "summarize a previous run directory");

    for (CLI::App* cmd : {cmd_spectrum, cmd_solve, cmd_verify}) {
        cmd->add_option("--config", config, "run configuration file");
        cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
        auto* s = cmd->add_option("--seed", seed, "override the RNG seed");
        auto* f = cmd->add_option("--format", format, "output format: tabular|structured|both");
        (void)s;
        (void)f;
    }
    cmd_verify->add_flag("--strict", strict, "nonzero exit when any check fails");
    cmd_verify->add_option("--tables", tables, "verify a stored table snapshot instead of "
                                               "building fresh tables");
    cmd_report->add_option("run_dir", run_dir, "run directory to summarize")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (app.got_subcommand(cmd_report)) {
        std::vector<char> buf(1 << 16);
        rbz_status st = rbz_run_report(run_dir.c_str(), buf.data(), buf.size());
        std::fputs(buf.data(), stdout);
        if (st != RBZ_OK) std::fprintf(stderr, "error: %s\n", rbz_last_error());
        return status_to_exit(st);
    }

    CLI::App* active = app.got_subcommand(cmd_spectrum) ? cmd_spectrum
                       : app.got_subcommand(cmd_solve)  ? cmd_solve
                                                        : cmd_verify;
    std::vector<std::pair<std::string, std::string>> overrides;
    if (active->count("--seed")) overrides.emplace_back("seed", std::to_string(seed));
    if (!format.empty()) overrides.emplace_back("format", format);

    RunHandle h;
    if (int rc = make_run(config, overrides, h); rc != 0) return rc;

    rbz_status st = RBZ_OK;
    if (app.got_subcommand(cmd_spectrum)) {
        st = rbz_run_spectrum(h.run, out_dir.c_str());
    } else if (app.got_subcommand(cmd_solve)) {
        st = rbz_run_solve(h.run, out_dir.c_str());
    } else if (app.got_subcommand(cmd_verify)) {
        int failures = 0;
        st = rbz_run_verify(h.run, out_dir.c_str(), strict ? 1 : 0,
                            tables.empty() ? nullptr : tables.c_str(), &failures);
    }
    std::fputs(rbz_run_log(h.run), stdout);
    if (st != RBZ_OK) std::fprintf(stderr, "error: %s\n", rbz_last_error());
    return status_to_exit(st);
}
