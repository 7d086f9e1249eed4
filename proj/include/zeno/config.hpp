// Flat key = value configuration files and CSV output.
//
//   # comment
//   n_cycles  = 20
//   t_empty   = 0.951
//   r_mirror  = 0.962        # with t_qwp, composes t_rec = t_qwp^2 r_mirror
//   crosstalk = 0.01
//   object    = opaque       # absent | opaque | partial
//
// Missing keys default to an ideal lossless system with an opaque object.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zeno/engine.hpp"
#include "zeno/optimize.hpp"

namespace zeno {

class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& message);
    /// 1-based; 0 when the error is not tied to a line.
    int line() const { return line_; }

private:
    int line_;
};

struct ParsedConfig {
    SystemConfig system;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;

    friend bool operator==(const ParsedConfig&, const ParsedConfig&) = default;
};

ParsedConfig parse_config(std::string_view text);
ParsedConfig load_config(const std::filesystem::path& path);

/// Config text that parse_config reads back to an equal ParsedConfig.
std::string to_config_text(const ParsedConfig& config);

/// 9 significant digits, '.' decimal separator, independent of the locale.
std::string format_number(double value);

/// Shortest text that parses back to exactly `value`.
std::string format_exact(double value);

struct CurveRow {
    int n_cycles = 0;
    RunOutcome outcome;
};

inline constexpr std::string_view kCurveHeader = "N,p_qi,p_abs,p_loss,p_wrong,eta,eta_adjusted";

/// run_exact for every N in [n_min, n_max] with dtheta = pi/2N.
std::vector<CurveRow> sweep(const SystemConfig& config, int n_min, int n_max);

void write_curve_csv(std::ostream& out, std::span<const CurveRow> rows);

/// Reads "N,eta,sigma" rows; a non-numeric first line is taken as a header.
std::vector<EfficiencyPoint> parse_efficiency_data(std::string_view text);

}  // namespace zeno
