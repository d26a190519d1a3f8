#pragma once

#include "qvortex/constants.hpp"
#include "qvortex/grid.hpp"

#include <array>

namespace qvx {

/// (R, S) samples at three consecutive times t - dt, t, t + dt; the middle
/// slice anchors the spatial operators, the outer pair the time derivative.
struct IdentityInput {
    std::array<RealGrid3, 3> amplitude;
    std::array<RealGrid3, 3> phase;  // S, single-valued on the grid
    double dt = 0.0;
    RealGrid3 potential;  // V; empty means zero
};

struct ResidualReport {
    double nu = 1.0;
    double res1 = 0.0;  // relative residual of the original equation on R e^{iS/hbar}
    double res2 = 0.0;  // same for the transformed equation on R e^{iS/(nu hbar)}
    double mask_fraction = 0.0;
};

/// Relative L2 residuals ||LHS - RHS||/||RHS|| of the equation pair
///   [-(hbar^2/2m) Lap + V] psi            = i hbar d(psi)/dt
///   [-(nu hbar)^2/(2m) Lap + V
///     + (hbar^2/2m)(nu^2-1)(Lap R)/R] psi_nu = i (nu hbar) d(psi_nu)/dt
/// with spectral space derivatives and a second-order central time stencil.
/// Points where R falls below mask_floor times its maximum are excluded; more
/// than 10% excluded probability mass aborts.
ResidualReport identity_residual(const IdentityInput& input, double nu,
                                 const PhysicalConstants& constants,
                                 double mask_floor = 1e-10);

/// Electromagnetic generalization with minimal coupling (-i hbar_eff grad +
/// qA). Requires A in the transverse gauge: the spectral divergence of A,
/// relative to its gradient magnitude, must stay below gauge_tol. Fields
/// sampled from non-smooth potentials need a tolerance matching their
/// discretization error; the strict default suits spectrally projected or
/// constant fields.
ResidualReport identity_residual_em(const IdentityInput& input, const VectorGrid3& a_field,
                                    double nu, const PhysicalConstants& constants,
                                    double gauge_tol = 1e-8, double mask_floor = 1e-10);

/// Relative transverse-gauge defect ||div A|| / ||grad A|| (spectral).
double gauge_divergence(const VectorGrid3& a_field);

// ---- ideal solenoid (vector Aharonov-Bohm geometry) -------------------------

struct SolenoidSpec {
    Vec3 axis_point;
    Vec3 axis_direction{0.0, 0.0, 1.0};
    double radius = 1.0;
    double flux = 0.0;  // F_B through the cross-section, signed along the axis

    void validate() const;
};

/// A_phi = F_B rho / (2 pi radius^2) inside, F_B / (2 pi rho) outside;
/// divergence-free by construction, curl-free outside the bore.
Vec3 solenoid_vector_potential(const SolenoidSpec& spec, const Vec3& x);

VectorGrid3 sample_solenoid_potential(const SolenoidSpec& spec, const GridSpec& grid);

/// Phase conventions for converting flux to the effective circulation:
/// `hbar_only` equates exp(i q F_B / hbar) with exp(i m Gamma / hbar);
/// `gaussian` uses exp(i q F_B / (hbar c)).
enum class FluxPhaseConvention { hbar_only, gaussian };

/// Effective vorticity constant of the wave function encircling the solenoid.
double ab_effective_vorticity(const SolenoidSpec& spec, const PhysicalConstants& constants,
                              FluxPhaseConvention convention = FluxPhaseConvention::hbar_only);

}  // namespace qvx
