#pragma once

#include "qvortex/constants.hpp"
#include "qvortex/grid.hpp"

namespace qvx {

/// Closed-form solutions of the linear equation, used as ground truth by the
/// verification suite. Each exposes the amplitude/phase split alongside the
/// full wavefunction.

/// Free isotropic Gaussian packet at rest:
///   sigma(t) = sigma0 sqrt(1 + (hbar t / 2 m sigma0^2)^2).
struct FreeGaussian {
    double sigma0 = 1.0;
    Vec3 center;
    PhysicalConstants constants;

    double tau(double t) const {
        return constants.hbar * t / (2.0 * constants.mass * sigma0 * sigma0);
    }
    double width(double t) const { return sigma0 * std::sqrt(1.0 + tau(t) * tau(t)); }

    cdouble psi(const Vec3& x, double t) const;
    double amplitude(const Vec3& x, double t) const;
    double phase(const Vec3& x, double t) const;  // S, single-valued

    ComplexGrid3 sample(const GridSpec& spec, double t) const;
    RealGrid3 sample_amplitude(const GridSpec& spec, double t) const;
    RealGrid3 sample_phase(const GridSpec& spec, double t) const;
};

/// Stationary ground state of V = 1/2 m omega^2 |x - center|^2,
/// E = 3/2 hbar omega, S = -E t.
struct HarmonicGround {
    double omega = 1.0;
    Vec3 center;
    PhysicalConstants constants;

    double energy() const { return 1.5 * constants.hbar * omega; }

    cdouble psi(const Vec3& x, double t) const;
    double amplitude(const Vec3& x) const;
    double phase(double t) const { return -energy() * t; }

    ComplexGrid3 sample(const GridSpec& spec, double t) const;
    RealGrid3 sample_amplitude(const GridSpec& spec) const;
};

/// Coherent state of the same oscillator, displaced by `displacement` along x.
/// The center follows X(t) = d cos(omega t) with momentum P(t) = -m omega d
/// sin(omega t).
struct CoherentState {
    double omega = 1.0;
    double displacement = 1.0;
    Vec3 center;  // oscillator center
    PhysicalConstants constants;

    double x_center(double t) const { return displacement * std::cos(omega * t); }
    double momentum(double t) const {
        return -constants.mass * omega * displacement * std::sin(omega * t);
    }

    cdouble psi(const Vec3& x, double t) const;
    ComplexGrid3 sample(const GridSpec& spec, double t) const;
};

}  // namespace qvx
