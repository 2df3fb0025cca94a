#ifndef RADBOLTZ_RUNNER_HPP
#define RADBOLTZ_RUNNER_HPP

#include "radboltz/cascade.hpp"
#include "radboltz/spectrum.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace radboltz::runner {

// Exit codes shared by the library entry points and the command-line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_verification_failed = 1,
    exit_config_error = 2,
    exit_numerical_error = 3,
};

// Fully resolved run configuration.  Every field has a default; a config file
// overrides by key and the resolved state is re-emitted next to the outputs.
struct RunConfig {
    cross_section::SingularityModel model;
    quadrature::QuadratureSpec quad;
    int truncation = 64;

    enum class InitKind { Zero, Mode, Coeffs, GaussianBump, Random };
    InitKind init_kind = InitKind::Mode;
    int init_mode = 2;
    double init_amplitude = 0.05;
    std::vector<double> init_coeffs;
    double init_center = 2.0;
    double init_width = 0.5;

    double t_end = 5.0;
    int time_points = 51;
    bool log_spacing = false;

    double delta = 0.5;
    std::uint64_t seed = 0;
    // Initial norms above this are outside the small-data regime the decay
    // bound is proved for; the run proceeds with a warning.
    double norm_warn_threshold = 0.1;

    bool verify_spectrum = true;
    bool verify_cascade = true;
    bool verify_decay = true;
    bool verify_identities = true;
    bool verify_smoothing = true;
    bool verify_structural = true;

    std::string format = "both"; // both | tabular | structured

    static RunConfig from_text(const std::string& text, const std::string& filename);
    static RunConfig from_file(const std::string& path);
    // Single-key override with config-file syntax (used for CLI flags).
    void apply(const std::string& key, const std::string& value);
    std::string to_config_text() const;
    void validate() const; // throws parse_error with the offending field

    std::vector<double> time_grid() const;
    cascade::InitialData build_initial(int truncation_n) const;
};

struct CheckResult {
    std::string name;
    std::string params;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    int failures() const;
};

// Subcommand bodies.  Each writes its artifacts under out_dir (created if
// missing), logs one line per major step, and returns an ExitCode.
int run_spectrum(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
int run_solve(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
int run_verify(const RunConfig& cfg, const std::string& out_dir, bool strict,
               const std::string& tables_snapshot_path, std::ostream& log);
int run_report(const std::string& run_dir, std::ostream& out);

// The full verification suite on a freshly built configuration (exposed for
// the test harness).
VerifyReport verify_suite(const RunConfig& cfg, std::ostream& log);
// Focused re-verification of a stored table snapshot.
VerifyReport verify_snapshot(const spectrum::SpectrumTables& tables, std::ostream& log);

} // namespace radboltz::runner

#endif
