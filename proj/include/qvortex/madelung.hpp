#pragma once

#include "qvortex/constants.hpp"
#include "qvortex/field_kernels.hpp"
#include "qvortex/grid.hpp"

#include <cstdint>
#include <vector>

namespace qvx {

/// Hydrodynamic fields of psi = R e^{iS/hbar}. The phase S is never globally
/// unwrapped; only the single-valued current velocity (hbar/m) Im(psi* grad
/// psi)/|psi|^2 is produced. Points with |psi| below mask_floor * max|psi| are
/// masked: the velocity is zeroed there and the excluded probability mass is
/// reported.
struct MadelungFields {
    RealGrid3 density;    // rho = R^2
    RealGrid3 amplitude;  // R = |psi|
    VectorGrid3 velocity;
    std::vector<std::uint8_t> mask;  // 1 = masked near-node point
    double mask_mass = 0.0;          // probability mass inside the mask
    double mask_volume_fraction = 0.0;
};

MadelungFields decompose(const ComplexGrid3& psi, const PhysicalConstants& constants,
                         double mask_floor = 1e-6);

/// Q_B = -(hbar^2/2m) (Lap R)/R with the spectral Laplacian, zeroed inside the
/// near-node mask.
struct MaskedField {
    RealGrid3 values;
    std::vector<std::uint8_t> mask;
    double mask_mass = 0.0;
    double mask_volume_fraction = 0.0;
};

MaskedField quantum_potential(const RealGrid3& amplitude, const PhysicalConstants& constants,
                              double mask_floor = 1e-6);

/// Integral rho * grad(Q_B) dV, expected to vanish for amplitudes that decay
/// inside the box. `abs_integral` = integral rho |grad Q_B| dV for relative
/// comparisons; boundary_contaminated is set when R has not decayed at the box
/// faces, in which case the vanishing hypothesis does not apply.
struct ForceIntegral {
    Vec3 value;
    double abs_integral = 0.0;
    bool boundary_contaminated = false;
};

ForceIntegral bohm_force_integral(const MadelungFields& fields,
                                  const PhysicalConstants& constants);

/// Zero lines of the complex field: per cell face, the common zero of the
/// bilinear interpolants of (Re psi, Im psi); crossings chained cell-to-cell
/// into polylines.
struct NodalLine {
    std::vector<Vec3> points;
    bool closed = false;
};

std::vector<NodalLine> extract_nodal_lines(const ComplexGrid3& psi);

/// Bohmian path integrated through a time-ordered series of frames with RK4;
/// velocity trilinear in space, linear in time between frames. The path stops
/// (truncated = true) when it enters the near-node mask or leaves the box.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vec3> positions;
    bool truncated = false;
};

Trajectory advect_trajectory(const std::vector<ComplexGrid3>& psi_series, const Vec3& x0,
                             double dt, const PhysicalConstants& constants,
                             int substeps_per_frame = 4, double mask_floor = 1e-6);

/// Circulation of the guidance velocity along a closed loop, computed as the
/// phase holonomy of psi (trilinear complex interpolation, accumulated branch
/// increments). Loop sampling must be dense enough that successive phase
/// increments stay below pi.
double circulation_holonomy(const ComplexGrid3& psi, const ProbeLoop& loop,
                            const PhysicalConstants& constants);

}  // namespace qvx
