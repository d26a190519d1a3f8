#include "qvortex/radiation.hpp"

#include <cmath>

namespace qvx {

namespace {

double larmor_coefficient(double q, double c) { return 2.0 / 3.0 * q * q / (c * c * c); }

// Central-difference gradient with periodic wrap, local and exact for
// polynomials in the interior.
VectorGrid3 central_gradient(const RealGrid3& g) {
    const GridSpec& spec = g.spec();
    VectorGrid3 out(spec);
    const auto [nx, ny, nz] = spec.dims;
    for (std::uint32_t k = 0; k < nz; ++k)
        for (std::uint32_t j = 0; j < ny; ++j)
            for (std::uint32_t i = 0; i < nx; ++i) {
                const std::size_t idx = spec.index(i, j, k);
                out.comp(0)[idx] = (g.at((i + 1) % nx, j, k) - g.at((i + nx - 1) % nx, j, k)) /
                                   (2.0 * spec.spacing[0]);
                out.comp(1)[idx] = (g.at(i, (j + 1) % ny, k) - g.at(i, (j + ny - 1) % ny, k)) /
                                   (2.0 * spec.spacing[1]);
                out.comp(2)[idx] = (g.at(i, j, (k + 1) % nz) - g.at(i, j, (k + nz - 1) % nz)) /
                                   (2.0 * spec.spacing[2]);
            }
    return out;
}

std::vector<std::uint8_t> dilate_mask(const GridSpec& spec,
                                      const std::vector<std::uint8_t>& mask) {
    const auto [nx, ny, nz] = spec.dims;
    std::vector<std::uint8_t> out(mask.size(), 0);
    for (std::uint32_t k = 0; k < nz; ++k)
        for (std::uint32_t j = 0; j < ny; ++j)
            for (std::uint32_t i = 0; i < nx; ++i) {
                const std::size_t idx = spec.index(i, j, k);
                if (mask[idx]) {
                    out[idx] = 1;
                    continue;
                }
                out[idx] = mask[spec.index((i + 1) % nx, j, k)] ||
                           mask[spec.index((i + nx - 1) % nx, j, k)] ||
                           mask[spec.index(i, (j + 1) % ny, k)] ||
                           mask[spec.index(i, (j + ny - 1) % ny, k)] ||
                           mask[spec.index(i, j, (k + 1) % nz)] ||
                           mask[spec.index(i, j, (k + nz - 1) % nz)];
            }
    return out;
}

}  // namespace

double classical_larmor(double q, const Vec3& acceleration, double c) {
    if (!(c > 0.0)) throw InvalidArgument("classical_larmor: c must be positive");
    if (!is_finite(acceleration))
        throw InvalidArgument("classical_larmor: non-finite acceleration");
    return larmor_coefficient(q, c) * norm2(acceleration);
}

double quantum_larmor(const RealGrid3& rho, const RealGrid3& u_potential, double q,
                      double m, double c) {
    if (!(rho.spec() == u_potential.spec()))
        throw InvalidArgument("quantum_larmor: rho and U on different grids");
    if (!(m > 0.0) || !(c > 0.0))
        throw InvalidArgument("quantum_larmor: mass and c must be positive");
    if (!rho.all_finite() || !u_potential.all_finite())
        throw NumericError("quantum_larmor: non-finite input field");

    const VectorGrid3 force = central_gradient(u_potential);
    RealGrid3 integrand(rho.spec());
    const double inv_m2 = 1.0 / (m * m);
    for (std::size_t i = 0; i < rho.size(); ++i)
        integrand[i] = rho[i] * norm2(force.vec_at(i)) * inv_m2;
    return larmor_coefficient(q, c) * integrate(integrand);
}

NonlinearPower nonlinear_power(const RealGrid3& amplitude, double nu,
                               const PhysicalConstants& constants, double mask_floor,
                               double mask_abort) {
    constants.validate();
    if (!std::isfinite(nu)) throw InvalidArgument("nonlinear_power: nu must be finite");

    const MaskedField qb = quantum_potential(amplitude, constants, mask_floor);
    double total_mass = 0.0;
    for (std::size_t i = 0; i < amplitude.size(); ++i)
        total_mass += amplitude[i] * amplitude[i];
    total_mass *= amplitude.spec().cell_volume();

    NonlinearPower out;
    out.mask_fraction = total_mass > 0.0 ? qb.mask_mass / total_mass : 1.0;
    if (out.mask_fraction > mask_abort)
        throw NumericError("nonlinear_power: node mask exceeds the abort threshold");

    // The Q_B gradient is singular toward the nodal line; differentiate with a
    // local stencil and drop the cells bordering the mask.
    const auto wide_mask = dilate_mask(amplitude.spec(), qb.mask);
    const VectorGrid3 grad_qb = central_gradient(qb.values);

    RealGrid3 integrand(amplitude.spec());
    std::size_t excluded = 0;
    const double inv_m2 = 1.0 / (constants.mass * constants.mass);
    for (std::size_t i = 0; i < amplitude.size(); ++i) {
        if (wide_mask[i]) {
            ++excluded;
            continue;
        }
        integrand[i] = amplitude[i] * amplitude[i] * norm2(grad_qb.vec_at(i)) * inv_m2;
    }
    out.excluded_volume = double(excluded) / double(amplitude.size());
    out.base_integral = integrate(integrand);

    const double nu2m1 = nu * nu - 1.0;
    out.power = larmor_coefficient(constants.charge, constants.c) * nu2m1 * nu2m1 *
                out.base_integral;
    return out;
}

Vec3 bohm_mean_acceleration(const MadelungFields& fields,
                            const PhysicalConstants& constants) {
    const ForceIntegral f = bohm_force_integral(fields, constants);
    return -1.0 / constants.mass * f.value;
}

double bec_power(const Vec3& expect_a, double expect_a2, double n_particles, double q,
                 double c) {
    if (!(n_particles >= 1.0))
        throw InvalidArgument("bec_power: particle number must be >= 1");
    if (!(c > 0.0)) throw InvalidArgument("bec_power: c must be positive");
    if (expect_a2 < 0.0)
        throw InvalidArgument("bec_power: <a^2> must be non-negative");
    const double coeff = larmor_coefficient(q, c);
    return n_particles * n_particles * coeff * norm2(expect_a) +
           n_particles * coeff * expect_a2;
}

PowerSeries radiated_power_series(const std::vector<ComplexGrid3>& psi_series,
                                  const std::vector<double>& times, double nu,
                                  const PhysicalConstants& constants, double mask_floor,
                                  double mask_abort) {
    if (psi_series.size() != times.size() || psi_series.size() < 2)
        throw InvalidArgument("radiated_power_series: need >= 2 snapshots with times");

    PowerSeries out;
    out.times = times;
    out.power.reserve(times.size());
    out.mask_fraction.reserve(times.size());
    for (const auto& psi : psi_series) {
        const NonlinearPower p =
            nonlinear_power(abs_field(psi), nu, constants, mask_floor, mask_abort);
        out.power.push_back(p.power);
        out.mask_fraction.push_back(p.mask_fraction);
    }
    out.emitted.resize(times.size(), 0.0);
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double dt = times[i] - times[i - 1];
        if (!(dt > 0.0))
            throw InvalidArgument("radiated_power_series: times must increase");
        out.emitted[i] =
            out.emitted[i - 1] + 0.5 * (out.power[i] + out.power[i - 1]) * dt;
    }
    return out;
}

double ab_energy_loss(const PowerSeries& series) { return series.total_emitted(); }

}  // namespace qvx
