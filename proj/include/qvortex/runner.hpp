#pragma once

#include "qvortex/config.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qvx {

/// CLI-level overrides; unset fields fall back to the config document.
struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

/// Build the initial state: QVG1 grids (reference sheet and, for gamma != 0,
/// the nu-transformed field) plus a JSON metadata document with the
/// quantization report. Identical configs produce byte-identical outputs.
void cmd_build(const std::string& config_path, const std::string& out_dir,
               const RunOptions& opts = {});

/// Evolve a built state: snapshot QVG1 files, a monitors CSV, and a JSON
/// manifest. Supports resuming from the last stored snapshot.
void cmd_evolve(const std::string& config_path, const std::string& out_dir,
                const RunOptions& opts = {});

/// Radiated-power diagnostics over an evolved snapshot series: t,P,emitted CSV
/// plus a summary JSON.
void cmd_radiate(const std::string& config_path, const std::string& out_dir,
                 const RunOptions& opts = {});

struct VerifyCheck {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_pass = false;
};

/// The built-in invariant suite (grid operators, geometry, kernels, states,
/// solvers, identity, radiation laws) at desk scale.
VerifyReport verify_suite(std::uint32_t grid_n, std::uint64_t seed);

/// Run the suite, write the JSON report, and throw NumericError when any
/// check fails.
void cmd_verify(const std::string& config_path, const std::string& out_dir,
                const RunOptions& opts = {});

}  // namespace qvx
