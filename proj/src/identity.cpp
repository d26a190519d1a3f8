#include "qvortex/identity.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace qvx {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_input(const IdentityInput& input) {
    if (!(input.dt > 0.0)) throw InvalidArgument("identity_residual: dt must be positive");
    const GridSpec& spec = input.amplitude[1].spec();
    for (int j = 0; j < 3; ++j) {
        if (!(input.amplitude[j].spec() == spec) || !(input.phase[j].spec() == spec))
            throw InvalidArgument("identity_residual: time slices on different grids");
        if (!input.amplitude[j].all_finite() || !input.phase[j].all_finite())
            throw NumericError("identity_residual: non-finite input slice");
    }
    if (input.potential.size() != 0 && !(input.potential.spec() == spec))
        throw InvalidArgument("identity_residual: potential grid mismatch");
}

struct MaskInfo {
    std::vector<std::uint8_t> mask;
    double mass_fraction = 0.0;
};

MaskInfo node_mask(const RealGrid3& amp, double mask_floor) {
    MaskInfo info;
    info.mask.assign(amp.size(), 0);
    const double floor = mask_floor * amp.max_abs();
    double masked = 0.0, total = 0.0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const double rho = amp[i] * amp[i];
        total += rho;
        if (std::abs(amp[i]) <= floor) {
            info.mask[i] = 1;
            masked += rho;
        }
    }
    info.mass_fraction = total > 0.0 ? masked / total : 1.0;
    return info;
}

ComplexGrid3 phase_state(const RealGrid3& amp, const RealGrid3& phase, double hbar_eff) {
    ComplexGrid3 out(amp.spec());
    for (std::size_t i = 0; i < amp.size(); ++i)
        out[i] = std::polar(amp[i], phase[i] / hbar_eff);
    return out;
}

double masked_norm(const ComplexGrid3& g, const std::vector<std::uint8_t>& mask) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!mask[i]) sum += std::norm(g[i]);
    return std::sqrt(sum * g.spec().cell_volume());
}

}  // namespace

ResidualReport identity_residual(const IdentityInput& input, double nu,
                                 const PhysicalConstants& constants, double mask_floor) {
    check_input(input);
    constants.validate();
    if (nu == 0.0 || !std::isfinite(nu))
        throw InvalidArgument("identity_residual: nu must be finite and nonzero");

    const auto mask = node_mask(input.amplitude[1], mask_floor);
    if (mask.mass_fraction > 0.10)
        throw NumericError("identity_residual: node mask exceeds 10% of the probability mass");

    const double hbar = constants.hbar;
    const double m = constants.mass;

    auto residual_for = [&](double nu_val) {
        const double he = nu_val * hbar;
        ComplexGrid3 psi0 = phase_state(input.amplitude[0], input.phase[0], he);
        ComplexGrid3 psi1 = phase_state(input.amplitude[1], input.phase[1], he);
        ComplexGrid3 psi2 = phase_state(input.amplitude[2], input.phase[2], he);

        ComplexGrid3 lap = spectral_laplacian(psi1);
        const double kin = -he * he / (2.0 * m);
        const double c_nl = hbar * hbar / (2.0 * m) * (nu_val * nu_val - 1.0);

        RealGrid3 lap_r;
        if (c_nl != 0.0) lap_r = spectral_laplacian(input.amplitude[1]);

        ComplexGrid3 diff(psi1.spec());
        const cdouble i_he_over_2dt = cdouble(0.0, he / (2.0 * input.dt));
        double rhs_norm_sq = 0.0;
        for (std::size_t i = 0; i < psi1.size(); ++i) {
            if (mask.mask[i]) continue;
            cdouble lhs = kin * lap[i];
            if (input.potential.size() != 0) lhs += input.potential[i] * psi1[i];
            if (c_nl != 0.0)
                lhs += c_nl * lap_r[i] / input.amplitude[1][i] * psi1[i];
            const cdouble rhs = i_he_over_2dt * (psi2[i] - psi0[i]);
            diff[i] = lhs - rhs;
            rhs_norm_sq += std::norm(rhs);
        }
        const double rhs_norm =
            std::sqrt(rhs_norm_sq * psi1.spec().cell_volume());
        if (!(rhs_norm > 0.0))
            throw NumericError("identity_residual: vanishing time derivative");
        return masked_norm(diff, mask.mask) / rhs_norm;
    };

    ResidualReport rep;
    rep.nu = nu;
    rep.mask_fraction = mask.mass_fraction;
    rep.res1 = residual_for(1.0);
    rep.res2 = nu == 1.0 ? rep.res1 : residual_for(nu);
    return rep;
}

double gauge_divergence(const VectorGrid3& a_field) {
    if (!a_field.all_finite()) throw NumericError("gauge_divergence: non-finite field");
    const RealGrid3 div = spectral_divergence(a_field);
    double div_sq = 0.0;
    for (std::size_t i = 0; i < div.size(); ++i) div_sq += div[i] * div[i];

    double grad_sq = 0.0;
    for (int c = 0; c < 3; ++c) {
        RealGrid3 comp(a_field.spec(), a_field.comp(c));
        const VectorGrid3 g = spectral_gradient(comp);
        for (int a = 0; a < 3; ++a)
            for (std::size_t i = 0; i < div.size(); ++i) grad_sq += g.comp(a)[i] * g.comp(a)[i];
    }
    if (grad_sq == 0.0) return div_sq == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(div_sq / grad_sq);
}

ResidualReport identity_residual_em(const IdentityInput& input, const VectorGrid3& a_field,
                                    double nu, const PhysicalConstants& constants,
                                    double gauge_tol, double mask_floor) {
    check_input(input);
    constants.validate();
    if (nu == 0.0 || !std::isfinite(nu))
        throw InvalidArgument("identity_residual_em: nu must be finite and nonzero");
    if (!(a_field.spec() == input.amplitude[1].spec()))
        throw InvalidArgument("identity_residual_em: vector potential grid mismatch");

    const double gauge = gauge_divergence(a_field);
    if (gauge > gauge_tol)
        throw InvalidArgument("identity_residual_em: vector potential violates the "
                              "transverse gauge (relative divergence " +
                              std::to_string(gauge) + ")");

    const auto mask = node_mask(input.amplitude[1], mask_floor);
    if (mask.mass_fraction > 0.10)
        throw NumericError("identity_residual_em: node mask exceeds 10% of the "
                           "probability mass");

    const double hbar = constants.hbar;
    const double m = constants.mass;
    const double q = constants.charge;

    RealGrid3 a_sq(a_field.spec());
    for (std::size_t i = 0; i < a_sq.size(); ++i) a_sq[i] = norm2(a_field.vec_at(i));

    // (-i hbar_eff grad + qA)^2 f, all derivatives spectral.
    auto minimal_coupling_sq = [&](const ComplexGrid3& f, double he) {
        ComplexGrid3 out = spectral_laplacian(f);
        for (auto& v : out.values()) v *= -he * he;

        auto grad_f = spectral_gradient(f);
        for (int axis = 0; axis < 3; ++axis) {
            ComplexGrid3 af(f.spec());
            for (std::size_t i = 0; i < f.size(); ++i)
                af[i] = a_field.comp(axis)[i] * f[i];
            const ComplexGrid3 d_af = spectral_partial(af, axis);
            const cdouble coeff(0.0, -he * q);
            for (std::size_t i = 0; i < f.size(); ++i)
                out[i] += coeff * (d_af[i] + a_field.comp(axis)[i] * grad_f[axis][i]);
        }
        for (std::size_t i = 0; i < f.size(); ++i) out[i] += q * q * a_sq[i] * f[i];
        return out;
    };

    auto residual_for = [&](double nu_val) {
        const double he = nu_val * hbar;
        ComplexGrid3 psi0 = phase_state(input.amplitude[0], input.phase[0], he);
        ComplexGrid3 psi1 = phase_state(input.amplitude[1], input.phase[1], he);
        ComplexGrid3 psi2 = phase_state(input.amplitude[2], input.phase[2], he);

        const ComplexGrid3 d2_psi = minimal_coupling_sq(psi1, he);

        ComplexGrid3 bracket_term(psi1.spec());
        if (nu_val != 1.0) {
            const ComplexGrid3 r_complex = to_complex(input.amplitude[1]);
            const ComplexGrid3 d2_r_nu = minimal_coupling_sq(r_complex, he);
            const ComplexGrid3 d2_r_1 = minimal_coupling_sq(r_complex, hbar);
            for (std::size_t i = 0; i < psi1.size(); ++i) {
                if (mask.mask[i]) continue;
                bracket_term[i] = -(d2_r_nu[i] - d2_r_1[i]) / (2.0 * m) /
                                  input.amplitude[1][i] * psi1[i];
            }
        }

        ComplexGrid3 diff(psi1.spec());
        const cdouble i_he_over_2dt = cdouble(0.0, he / (2.0 * input.dt));
        double rhs_norm_sq = 0.0;
        for (std::size_t i = 0; i < psi1.size(); ++i) {
            if (mask.mask[i]) continue;
            cdouble lhs = d2_psi[i] / (2.0 * m) + bracket_term[i];
            if (input.potential.size() != 0) lhs += input.potential[i] * psi1[i];
            const cdouble rhs = i_he_over_2dt * (psi2[i] - psi0[i]);
            diff[i] = lhs - rhs;
            rhs_norm_sq += std::norm(rhs);
        }
        const double rhs_norm = std::sqrt(rhs_norm_sq * psi1.spec().cell_volume());
        if (!(rhs_norm > 0.0))
            throw NumericError("identity_residual_em: vanishing time derivative");
        return masked_norm(diff, mask.mask) / rhs_norm;
    };

    ResidualReport rep;
    rep.nu = nu;
    rep.mask_fraction = mask.mass_fraction;
    rep.res1 = residual_for(1.0);
    rep.res2 = nu == 1.0 ? rep.res1 : residual_for(nu);
    return rep;
}

// ---- solenoid ---------------------------------------------------------------

void SolenoidSpec::validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw InvalidArgument("solenoid: radius must be positive");
    if (!(norm(axis_direction) > 0.0))
        throw InvalidArgument("solenoid: degenerate axis direction");
    if (!std::isfinite(flux)) throw InvalidArgument("solenoid: flux must be finite");
    if (!is_finite(axis_point)) throw InvalidArgument("solenoid: non-finite axis point");
}

Vec3 solenoid_vector_potential(const SolenoidSpec& spec, const Vec3& x) {
    spec.validate();
    const Vec3 axis = normalized(spec.axis_direction);
    const Vec3 rel = x - spec.axis_point;
    const Vec3 r_perp = rel - dot(rel, axis) * axis;
    const double rho = norm(r_perp);
    if (rho < 1e-300) return {0.0, 0.0, 0.0};  // on the axis by symmetry

    const Vec3 phi_hat = normalized(cross(axis, r_perp));
    const double a_phi = rho >= spec.radius
                             ? spec.flux / (kTwoPi * rho)
                             : spec.flux * rho / (kTwoPi * spec.radius * spec.radius);
    return a_phi * phi_hat;
}

VectorGrid3 sample_solenoid_potential(const SolenoidSpec& spec, const GridSpec& grid) {
    grid.validate();
    VectorGrid3 out(grid);
    const auto [nx, ny, nz] = grid.dims;
    std::size_t idx = 0;
    for (std::uint32_t k = 0; k < nz; ++k)
        for (std::uint32_t j = 0; j < ny; ++j)
            for (std::uint32_t i = 0; i < nx; ++i, ++idx)
                out.set_vec(idx, solenoid_vector_potential(spec, grid.point(i, j, k)));
    return out;
}

double ab_effective_vorticity(const SolenoidSpec& spec, const PhysicalConstants& constants,
                              FluxPhaseConvention convention) {
    spec.validate();
    constants.validate();
    const double c_factor = convention == FluxPhaseConvention::gaussian ? constants.c : 1.0;
    return constants.charge * spec.flux / (constants.mass * c_factor);
}

}  // namespace qvx
