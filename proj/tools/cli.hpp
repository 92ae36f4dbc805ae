#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "jointsup/model.hpp"
#include "jointsup/montecarlo.hpp"

namespace jointsup::cli {

enum class Format { csv, json };

struct SweepRange {
    std::string axis;  ///< T, a1, a2, c1, c2, b or N
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;
};

struct RunSpec {
    std::string command;  ///< exact, infinite, classify, asym, compare, simulate or sweep
    ModelParams params;
    std::optional<double> T;
    std::optional<double> N;
    std::optional<double> b;
    std::optional<SweepRange> range;  ///< compare (over N) and sweep
    SimConfig sim;
    Format format = Format::json;
    std::string out;  ///< empty for standard output
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIntegrity = 3;

/// The fields of a spec that determine its records; `format` and `out` are
/// excluded so that a replayed run reproduces the records byte for byte.
nlohmann::ordered_json to_json(const RunSpec& spec);

/// Inverse of `to_json`. Accepts a bare run object or a record carrying it
/// under "run". Throws ValidationError naming the offending key.
RunSpec from_json(const nlohmann::json& j);

/// Validates the spec, evaluates it and writes the records to `os`. Library
/// errors propagate as exceptions.
void run(const RunSpec& spec, std::ostream& os);

/// Full command-line entry point; returns the process exit status.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace jointsup::cli
