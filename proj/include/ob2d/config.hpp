#pragma once

#include "ob2d/diagnostics.hpp"
#include "ob2d/grid.hpp"
#include "ob2d/model.hpp"
#include "ob2d/timestepper.hpp"

#include <cstdint>
#include <string>

namespace ob2d {

struct GridConfig {
    int n = 64;
    double length = Grid::default_length;
};

enum class InitialKind { taylor_green, random_bandlimited, shear_layer };
enum class TauKind { zero, random_symmetric, from_Du };

struct InitialConditionConfig {
    InitialKind kind = InitialKind::random_bandlimited;
    std::uint64_t seed = 42;
    /// RMS of u (random), peak of u (taylor_green, shear_layer); also the RMS of tau for random_symmetric.
    double amplitude = 1.0;
    /// Radial band in lattice units |j|, kmin >= 1.
    double kmin = 1.0;
    double kmax = 8.0;
    TauKind tau_kind = TauKind::random_symmetric;
};

struct OutputConfig {
    std::string dir;
    /// 0 disables.
    long snapshot_every = 0;
    long checkpoint_every = 0;
};

struct RunConfig {
    GridConfig grid;
    ModelParams params;
    StepperConfig stepper;
    InitialConditionConfig initial;
    DiagnosticsConfig diagnostics;
    OutputConfig output;

    void validate() const;
};

const char* to_string(InitialKind k);
const char* to_string(TauKind k);

/// Strict parse: unknown keys, wrong types and invalid values throw ConfigError.
/// Missing keys take their defaults.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
/// Canonical JSON: every key present, sorted, two-space indent.
std::string serialize_config(const RunConfig& cfg);

} // namespace ob2d
