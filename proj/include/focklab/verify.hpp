#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "focklab/calibration.hpp"

namespace focklab {

enum class CheckStatus { pass, fail, inconclusive };
std::string_view check_status_name(CheckStatus s);

/// One line of a suite report.
struct CheckRecord {
    std::string id;
    std::vector<std::pair<std::string, std::string>> inputs;
    /// Primary measured value first, supporting values after it.
    std::vector<std::pair<std::string, double>> measured;
    /// Threshold the primary value is compared against; absent for
    /// classification checks.
    std::optional<double> tolerance;
    std::string comparison;  ///< "<", ">" or "in" (calibrated interval), "class"
    CheckStatus status = CheckStatus::inconclusive;
    std::string note;
    double wall_seconds = 0.0;
};

struct VerifyConfig {
    int dim = 1;              ///< dimension for the dimension-generic checks
    int truncation = 32;      ///< base truncation for the generic checks
    int quad_order = 0;       ///< 0 picks per-check defaults
    std::uint64_t seed = 1;
    std::map<std::string, double> tolerance_overrides;
};

/// Ids in run order with their default tolerances (NaN when the check has
/// no tolerance to override).
std::vector<std::pair<std::string, double>> verify_check_list();

/// Throws std::invalid_argument for an out-of-range config or an override
/// naming an unknown check or one without a tolerance.
void validate_verify_config(const VerifyConfig& config);

/// Runs every check. Records come back in run order whatever the
/// scheduling. A tolerance is an exclusive bound: measured < tol passes,
/// so tolerance 0 fails every defect check.
std::vector<CheckRecord> run_verify(const VerifyConfig& config, const Calibration& calibration);

/// Startup check of the Hermite convention: |B h^_0(z) - 1| at a few
/// points by quadrature. Returns the largest defect (about 1e-15 when the
/// conventions are wired correctly).
double convention_self_test();

/// 0 when nothing failed, 1 otherwise (inconclusive does not fail).
int verify_exit_status(const std::vector<CheckRecord>& records);

}  // namespace focklab
