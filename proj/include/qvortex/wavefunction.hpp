#pragma once

#include "qvortex/constants.hpp"
#include "qvortex/field_kernels.hpp"
#include "qvortex/grid.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace qvx {

/// Outcome of the single-valuedness test m*Gamma/hbar = 2*pi*K.
struct QuantizationReport {
    double gamma = 0.0;
    int k_nearest = 0;
    double residual = 0.0;  // distance of m*Gamma/(2*pi*hbar) from k_nearest
    bool single_valued = false;
};

QuantizationReport quantization_check(double gamma, const PhysicalConstants& constants,
                                      double tol = 1e-9);

/// Constant phase factor exp(i m Gamma N_w / hbar) separating Riemann sheets.
cdouble sheet_phase(double gamma, const PhysicalConstants& constants, int n_w);

/// nu = m*Gamma/(2*pi*M*hbar); the transformed state R exp(iS/(nu hbar)) is
/// single-valued for any positive integer M.
struct NuSelection {
    double nu = 1.0;
    int m_index = 1;
    bool linear = false;  // nu == 1: the transformed equation stays linear
};

NuSelection select_nu(double gamma, const PhysicalConstants& constants, int m_index = 1);

/// Isotropic Gaussian envelope exp(-|x-c|^2 / (4 width^2)); nodeless and
/// decaying, centered on the filament centroid unless overridden.
struct EnvelopeSpec {
    double width = 1.0;
    std::optional<Vec3> center;
};

/// Flow potential of the filament evaluated per point on the reference sheet.
using FlowPotential = std::function<double(const Vec3&)>;

struct BuildOptions {
    const RealGrid3* phi_w = nullptr;  // optional single-valued extra velocity potential
    double nodal_tol = 1e-8;
    double norm_tol = 1e-10;
};

/// Reference-sheet representation of a (generally multi-valued) vortex state:
/// one stored sheet, cut at the Seifert surface, plus the integer sheet index
/// whose constant phase reconstructs every other sheet.
struct MultiValuedState {
    ComplexGrid3 psi;           // normalized reference-sheet wavefunction
    RealGrid3 amplitude;        // |psi|
    RealGrid3 phase_over_hbar;  // S/hbar on the reference sheet
    std::shared_ptr<const Link> link;
    std::shared_ptr<const SeifertMesh> mesh;  // null for analytic cuts or gamma = 0
    PhysicalConstants constants;
    EnvelopeSpec envelope;
    int regularizer_order = 2;
    int sheet = 0;  // N_w
    double norm_scale = 1.0;

    double gamma() const { return link->gamma; }

    /// |psi| evaluated directly from the defining fields at an arbitrary
    /// point (not grid interpolation); exactly zero on the filament.
    double amplitude_at(const Vec3& x) const;

    cdouble sheet_factor(int n_w) const { return sheet_phase(gamma(), constants, n_w); }
};

/// Assemble psi(x,0) = Phi(x) e^{i m (phi_f + phi_w)/hbar} / I_n(x) on the
/// grid, L2-normalized. Requires n >= 2 so the state is nodal along the
/// filament; closed filaments must lie inside the grid box.
MultiValuedState build_initial_state(const GridSpec& grid, const EnvelopeSpec& envelope,
                                     std::shared_ptr<const Link> link,
                                     const FlowPotential& phi_f, int n,
                                     const PhysicalConstants& constants,
                                     const BuildOptions& opts = {});

/// Convenience overload using the Seifert-surface cut potential.
MultiValuedState build_initial_state(const GridSpec& grid, const EnvelopeSpec& envelope,
                                     std::shared_ptr<const Link> link,
                                     std::shared_ptr<const SeifertMesh> mesh, int n,
                                     const PhysicalConstants& constants,
                                     const BuildOptions& opts = {});

/// The transformed single-valued field R exp(i S/(nu hbar)) on the grid.
ComplexGrid3 make_nu_state(const MultiValuedState& state, double nu);

struct SuperposedComponent {
    double gamma = 0.0;
    double nu = 1.0;  // m*Gamma_j/(2*pi*hbar)
    cdouble weight;
    double population = 0.0;
};

struct SuperposedState {
    ComplexGrid3 psi;
    std::vector<SuperposedComponent> components;
    std::vector<std::vector<cdouble>> overlap;  // <psi_i | psi_j>
    PhysicalConstants constants;
};

/// Normalized weighted sum of states sharing one grid and unit system.
SuperposedState superpose(const std::vector<const MultiValuedState*>& states,
                          const std::vector<cdouble>& weights);

}  // namespace qvx
