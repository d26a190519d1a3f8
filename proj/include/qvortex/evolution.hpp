#pragma once

#include "qvortex/constants.hpp"
#include "qvortex/grid.hpp"

#include <variant>
#include <vector>

namespace qvx {

struct HarmonicPotential {
    double omega = 1.0;
    Vec3 center;
};

/// External potential: none, an analytic form, or a sampled grid.
using PotentialSpec = std::variant<std::monostate, HarmonicPotential, RealGrid3>;

RealGrid3 sample_potential(const PotentialSpec& pot, const GridSpec& spec,
                           const PhysicalConstants& constants);

struct EvolveConfig {
    double dt = 1e-3;
    int steps = 1;
    PotentialSpec potential;
    double nu = 1.0;  // 1 = linear equation
    int snapshot_stride = 1;
    double norm_abort = 1e-6;
    double mask_floor = 1e-6;
    double mask_abort = 0.10;  // abort when this much probability mass is masked

    void validate() const;
};

struct Snapshot {
    int step = 0;
    double t = 0.0;
    ComplexGrid3 psi;
};

struct MonitorRow {
    int step = 0;
    double t = 0.0;
    double norm = 0.0;
    double energy = 0.0;
    double mask_fraction = 0.0;
};

struct EvolveResult {
    std::vector<Snapshot> snapshots;
    std::vector<MonitorRow> monitors;
    double nu = 1.0;
    double dt = 0.0;
    int stride = 1;
};

/// Strang split-step for i hbar d(psi)/dt = [-(hbar^2/2m) Lap + V] psi:
/// half kinetic (Fourier), full potential, half kinetic per step. Aborts when
/// the norm drifts beyond norm_abort.
EvolveResult evolve_linear(const ComplexGrid3& psi0, const EvolveConfig& config,
                           const PhysicalConstants& constants);

/// The transformed single-valued equation,
///   i (nu hbar) d/dt psi_nu = [-(nu hbar)^2/(2m) Lap + V
///                              + (hbar^2/2m)(nu^2 - 1) (Lap R)/R] psi_nu,
/// R = |psi_nu|. The self-consistent term enters the potential substep through
/// a per-step fixed-point update (<= 5 iterations, 1e-10 relative); it is a
/// real potential, so the scheme stays norm-preserving. At nu = 1 the
/// coefficient vanishes identically and the stepping reduces to evolve_linear.
EvolveResult evolve_nonlinear(const ComplexGrid3& psi_nu0, const EvolveConfig& config,
                              const PhysicalConstants& constants);

/// Recompute per-snapshot diagnostics for a stored series. Energy is
/// <psi|H|psi> of the governing equation (config.nu selects which).
std::vector<MonitorRow> monitor(const std::vector<Snapshot>& series,
                                const EvolveConfig& config,
                                const PhysicalConstants& constants);

}  // namespace qvx
