#pragma once

#include "qvortex/constants.hpp"
#include "qvortex/grid.hpp"
#include "qvortex/madelung.hpp"

#include <vector>

namespace qvx {

/// Instantaneous power radiated by a point charge: (2/3)(q^2/c^3) |a|^2.
double classical_larmor(double q, const Vec3& acceleration, double c);

/// Density-weighted expectation of the squared force for a packet in the
/// potential U: (2/3)(q^2/c^3) integral rho (grad U / m)^2 dV. The gradient of
/// U uses central differences, which are exact for polynomial potentials away
/// from the periodic wrap; keep rho decayed at the box faces.
double quantum_larmor(const RealGrid3& rho, const RealGrid3& u_potential, double q,
                      double m, double c);

/// Power of the self-consistent term of the transformed equation:
///   P = (2/3)(q^2/c^3)(nu^2-1)^2 integral (grad Q_B / m)^2 rho dV.
/// The coefficient is carried symbolically: base_integral is nu-independent,
/// power = coefficient(nu) * base_integral, so P vanishes identically at
/// nu = +-1 and scaling in nu is exact. grad Q_B uses central differences with
/// the near-node mask dilated by one cell; the excluded volume is reported.
struct NonlinearPower {
    double power = 0.0;
    double base_integral = 0.0;   // integral (grad Q_B/m)^2 rho over unmasked points
    double mask_fraction = 0.0;   // probability mass excluded
    double excluded_volume = 0.0; // volume fraction excluded
};

NonlinearPower nonlinear_power(const RealGrid3& amplitude, double nu,
                               const PhysicalConstants& constants,
                               double mask_floor = 1e-6, double mask_abort = 0.10);

/// Mean Bohmian acceleration -integral rho grad(Q_B)/m dV; vanishes for
/// decaying amplitudes.
Vec3 bohm_mean_acceleration(const MadelungFields& fields, const PhysicalConstants& constants);

/// Two-term condensate formula:
///   P = N^2 (2/3)(q^2/c^3) |<a>|^2 + N (2/3)(q^2/c^3) <a^2>.
double bec_power(const Vec3& expect_a, double expect_a2, double n_particles, double q,
                 double c);

struct PowerSeries {
    std::vector<double> times;
    std::vector<double> power;
    std::vector<double> emitted;  // cumulative trapezoid of power
    std::vector<double> mask_fraction;

    double total_emitted() const { return emitted.empty() ? 0.0 : emitted.back(); }
};

/// Power series over an evolved snapshot sequence of the transformed state;
/// energy lost is the trapezoidal time integral.
PowerSeries radiated_power_series(const std::vector<ComplexGrid3>& psi_series,
                                  const std::vector<double>& times, double nu,
                                  const PhysicalConstants& constants,
                                  double mask_floor = 1e-6, double mask_abort = 0.10);

double ab_energy_loss(const PowerSeries& series);

}  // namespace qvx
