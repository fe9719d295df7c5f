#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "focklab/zhu.hpp"

namespace focklab {

/// Two-sided empirical bound.
struct Interval {
    double lower = 0.0;
    double upper = 0.0;
    bool contains(double v) const { return v >= lower && v <= upper; }
};

/// Key-value constants fixed by an oracle run. The text form is one
/// "key = value" line per entry, each preceded by '#' provenance lines.
class Calibration {
public:
    struct Entry {
        std::string key;
        double value = 0.0;
        std::string note;  ///< provenance; may span several lines
    };

    void set(std::string key, double value, std::string note = {});
    bool has(std::string_view key) const;
    /// Throws std::runtime_error naming the key and source when absent.
    double get(std::string_view key) const;
    /// Reads "<prefix>.lower" and "<prefix>.upper".
    Interval interval(std::string_view prefix) const;
    GrowthThresholds growth_thresholds() const;

    const std::vector<Entry>& entries() const { return entries_; }
    std::string header;  ///< leading comment block
    std::string source;  ///< path it was read from, for messages

private:
    std::vector<Entry> entries_;
};

/// FOCKLAB_CALIBRATION if set, else the file checked into the repository.
std::filesystem::path calibration_path();

/// Parses the text form. Throws std::runtime_error with line context.
Calibration parse_calibration(std::string_view text, std::string source = "<memory>");
Calibration load_calibration(const std::filesystem::path& path);
Calibration load_calibration();
std::string format_calibration(const Calibration& c);
void write_calibration(const Calibration& c, const std::filesystem::path& path);

struct CalibrationOptions {
    std::uint64_t seed = 0xCA11B7A7EULL;
    int vectors = 50;                     ///< random band-limited test vectors per N
    std::vector<int> truncations{8, 16, 32, 64};
    double margin = 1.10;                 ///< intervals widened by this factor on both sides
};

/// The oracle run: growth thresholds from the probes on constant, signum and
/// chirp43, plus logged equivalence constants for the norm lemmas.
/// Progress lines go to `log` when given.
Calibration run_calibration(const CalibrationOptions& options = {}, std::ostream* log = nullptr);

/// Truncations of the reference probe run behind the growth thresholds.
inline constexpr int kProbeTruncations[] = {8, 16, 32, 64};

}  // namespace focklab
