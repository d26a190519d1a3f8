#pragma once

#include "qvortex/constants.hpp"
#include "qvortex/grid.hpp"
#include "qvortex/identity.hpp"
#include "qvortex/wavefunction.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace qvx {

/// Batch-run configuration, parsed from a strict JSON document: unknown keys
/// are rejected with the offending path in the message.

enum class GeometryType { ring, trefoil, line, solenoid };

struct GeometryConfig {
    GeometryType type = GeometryType::ring;
    int samples = 256;
    // ring
    double radius = 1.0;
    Vec3 center;
    Vec3 normal{0.0, 0.0, 1.0};
    int rings = 4;
    // trefoil
    std::string mesh_path;
    double mesh_tol = 1e-6;
    // line / solenoid
    Vec3 axis_point;
    Vec3 axis_direction{0.0, 0.0, 1.0};
    double half_length = 1e4;
    // solenoid
    double solenoid_radius = 0.5;
    double flux = 0.0;
};

struct PotentialConfig {
    enum class Type { none, harmonic } type = Type::none;
    double omega = 1.0;
    Vec3 center;
};

struct EvolveSection {
    double dt = 1e-3;
    int steps = 100;
    int snapshot_stride = 10;
    PotentialConfig potential;
    // auto: nonlinear when nu != 1, linear otherwise.
    enum class Mode { automatic, linear, nonlinear } mode = Mode::automatic;
    bool resume = false;
};

struct RunConfig {
    std::uint64_t seed = 0;
    int threads = 1;
    PhysicalConstants constants;
    GridSpec grid;
    GeometryConfig geometry;
    std::optional<double> gamma;  // derived from the flux for solenoid runs
    EnvelopeSpec envelope;
    int regularizer_n = 2;
    int m_index = 1;
    FluxPhaseConvention phase_convention = FluxPhaseConvention::hbar_only;
    std::optional<EvolveSection> evolve;
    std::optional<std::uint32_t> verify_grid;  // override the verify suite grid size
    std::string output_prefix = "run";

    /// Circulation constant of the run: explicit gamma, or the solenoid's
    /// effective vorticity.
    double effective_gamma() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace qvx
