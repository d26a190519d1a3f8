#include "qvortex/reference_solutions.hpp"

#include <cmath>
#include <numbers>

namespace qvx {

namespace {

template <typename Fn>
ComplexGrid3 sample_field(const GridSpec& spec, Fn&& fn) {
    ComplexGrid3 out(spec);
    const auto [nx, ny, nz] = spec.dims;
    std::size_t idx = 0;
    for (std::uint32_t k = 0; k < nz; ++k)
        for (std::uint32_t j = 0; j < ny; ++j)
            for (std::uint32_t i = 0; i < nx; ++i, ++idx) out[idx] = fn(spec.point(i, j, k));
    return out;
}

template <typename Fn>
RealGrid3 sample_real(const GridSpec& spec, Fn&& fn) {
    RealGrid3 out(spec);
    const auto [nx, ny, nz] = spec.dims;
    std::size_t idx = 0;
    for (std::uint32_t k = 0; k < nz; ++k)
        for (std::uint32_t j = 0; j < ny; ++j)
            for (std::uint32_t i = 0; i < nx; ++i, ++idx) out[idx] = fn(spec.point(i, j, k));
    return out;
}

}  // namespace

// ---- FreeGaussian -----------------------------------------------------------

cdouble FreeGaussian::psi(const Vec3& x, double t) const {
    const double r2 = norm2(x - center);
    const double tt = tau(t);
    const cdouble one_plus_itau(1.0, tt);
    const double norm3d = std::pow(2.0 * std::numbers::pi * sigma0 * sigma0, -0.75);
    return norm3d * std::pow(one_plus_itau, -1.5) *
           std::exp(-r2 / (4.0 * sigma0 * sigma0 * one_plus_itau));
}

double FreeGaussian::amplitude(const Vec3& x, double t) const {
    const double r2 = norm2(x - center);
    const double tt = tau(t);
    const double s2 = sigma0 * sigma0 * (1.0 + tt * tt);
    const double norm3d = std::pow(2.0 * std::numbers::pi * sigma0 * sigma0, -0.75);
    return norm3d * std::pow(1.0 + tt * tt, -0.75) * std::exp(-r2 / (4.0 * s2));
}

double FreeGaussian::phase(const Vec3& x, double t) const {
    const double r2 = norm2(x - center);
    const double tt = tau(t);
    const double s2 = sigma0 * sigma0 * (1.0 + tt * tt);
    return constants.hbar * (r2 * tt / (4.0 * s2) - 1.5 * std::atan(tt));
}

ComplexGrid3 FreeGaussian::sample(const GridSpec& spec, double t) const {
    return sample_field(spec, [&](const Vec3& x) { return psi(x, t); });
}

RealGrid3 FreeGaussian::sample_amplitude(const GridSpec& spec, double t) const {
    return sample_real(spec, [&](const Vec3& x) { return amplitude(x, t); });
}

RealGrid3 FreeGaussian::sample_phase(const GridSpec& spec, double t) const {
    return sample_real(spec, [&](const Vec3& x) { return phase(x, t); });
}

// ---- HarmonicGround ---------------------------------------------------------

double HarmonicGround::amplitude(const Vec3& x) const {
    const double a = constants.mass * omega / constants.hbar;
    return std::pow(a / std::numbers::pi, 0.75) *
           std::exp(-0.5 * a * norm2(x - center));
}

cdouble HarmonicGround::psi(const Vec3& x, double t) const {
    return std::polar(amplitude(x), phase(t) / constants.hbar);
}

ComplexGrid3 HarmonicGround::sample(const GridSpec& spec, double t) const {
    return sample_field(spec, [&](const Vec3& x) { return psi(x, t); });
}

RealGrid3 HarmonicGround::sample_amplitude(const GridSpec& spec) const {
    return sample_real(spec, [&](const Vec3& x) { return amplitude(x); });
}

// ---- CoherentState ----------------------------------------------------------

cdouble CoherentState::psi(const Vec3& x, double t) const {
    const double a = constants.mass * omega / constants.hbar;
    const Vec3 rel = x - center;
    const double xc = x_center(t);
    const double p = momentum(t);

    // Displaced ground state along x times ground states in y, z; every axis
    // contributes exp(-i omega t / 2) to the global phase.
    const double gauss = -0.5 * a * ((rel.x - xc) * (rel.x - xc) + rel.y * rel.y +
                                     rel.z * rel.z);
    const double phase = (p * rel.x - 0.5 * p * xc) / constants.hbar - 1.5 * omega * t;
    return std::pow(a / std::numbers::pi, 0.75) * std::exp(gauss) *
           std::polar(1.0, phase);
}

ComplexGrid3 CoherentState::sample(const GridSpec& spec, double t) const {
    return sample_field(spec, [&](const Vec3& x) { return psi(x, t); });
}

}  // namespace qvx
