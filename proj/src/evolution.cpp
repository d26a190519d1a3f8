#include "qvortex/evolution.hpp"

#include "qvortex/madelung.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qvx {

RealGrid3 sample_potential(const PotentialSpec& pot, const GridSpec& spec,
                           const PhysicalConstants& constants) {
    if (std::holds_alternative<std::monostate>(pot)) return RealGrid3(spec);
    if (const auto* h = std::get_if<HarmonicPotential>(&pot)) {
        RealGrid3 v(spec);
        const double c = 0.5 * constants.mass * h->omega * h->omega;
        const auto [nx, ny, nz] = spec.dims;
        std::size_t idx = 0;
        for (std::uint32_t k = 0; k < nz; ++k)
            for (std::uint32_t j = 0; j < ny; ++j)
                for (std::uint32_t i = 0; i < nx; ++i, ++idx)
                    v[idx] = c * norm2(spec.point(i, j, k) - h->center);
        return v;
    }
    const auto& g = std::get<RealGrid3>(pot);
    if (!(g.spec() == spec))
        throw InvalidArgument("potential grid does not match the evolution grid");
    if (!g.all_finite()) throw InvalidArgument("potential grid has non-finite values");
    return g;
}

void EvolveConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("evolve: dt must be positive");
    if (steps < 1) throw InvalidArgument("evolve: steps must be >= 1");
    if (nu == 0.0 || !std::isfinite(nu)) throw InvalidArgument("evolve: nu must be nonzero");
    if (snapshot_stride < 1) throw InvalidArgument("evolve: snapshot stride must be >= 1");
}

namespace {

struct Stepper {
    const GridSpec spec;
    const PhysicalConstants constants;
    const EvolveConfig& config;
    RealGrid3 v_ext;
    std::vector<cdouble> kinetic_half;  // per-mode phase for half a step
    // (hbar^2/2m)(nu^2 - 1); the self-consistent potential term is skipped
    // entirely when this is exactly zero so nu = 1 reproduces the linear path
    // bit for bit.
    double nonlinear_coeff = 0.0;

    Stepper(const ComplexGrid3& psi0, const EvolveConfig& cfg, const PhysicalConstants& cst)
        : spec(psi0.spec()), constants(cst), config(cfg) {
        config.validate();
        constants.validate();
        if (!psi0.all_finite()) throw NumericError("evolve: non-finite initial state");
        if (std::abs(norm_l2(psi0) - 1.0) > 1e-6)
            throw InvalidArgument("evolve: initial state is not normalized");

        v_ext = sample_potential(config.potential, spec, constants);
        nonlinear_coeff = constants.hbar * constants.hbar / (2.0 * constants.mass) *
                          (config.nu * config.nu - 1.0);

        // Kinetic factor exp(-i nu hbar k^2 dt / (4 m)) per mode.
        kinetic_half.resize(spec.point_count());
        std::array<std::vector<double>, 3> k2;
        for (int a = 0; a < 3; ++a) {
            k2[a].resize(spec.dims[a]);
            for (std::uint32_t i = 0; i < spec.dims[a]; ++i) {
                const double kv = wavenumber(i, spec.dims[a], spec.length(a));
                k2[a][i] = kv * kv;
            }
        }
        const double coeff = config.nu * constants.hbar * config.dt / (4.0 * constants.mass);
        std::size_t idx = 0;
        for (std::uint32_t k = 0; k < spec.dims[2]; ++k)
            for (std::uint32_t j = 0; j < spec.dims[1]; ++j)
                for (std::uint32_t i = 0; i < spec.dims[0]; ++i, ++idx)
                    kinetic_half[idx] = std::polar(1.0, -coeff * (k2[0][i] + k2[1][j] + k2[2][k]));
    }

    void apply_kinetic_half(ComplexGrid3& psi) const {
        ComplexGrid3 spectrum = fourier_transform(psi, FourierSign::forward);
        for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= kinetic_half[i];
        psi = fourier_transform(spectrum, FourierSign::inverse);
    }

    // Total potential for this step's amplitude, divided by nu as the
    // governing equation requires: W = (V + c (Lap R)/R)/nu, zeroed on the
    // near-node mask. Returns the masked probability mass fraction.
    double step_potential(const ComplexGrid3& psi, RealGrid3& w_out) const {
        if (nonlinear_coeff == 0.0) {
            if (config.nu == 1.0) {
                w_out = v_ext;
            } else {
                w_out = v_ext;
                for (auto& v : w_out.values()) v /= config.nu;
            }
            return 0.0;
        }
        const RealGrid3 amp = abs_field(psi);
        RealGrid3 lap = spectral_laplacian(amp);
        const double floor = config.mask_floor * amp.max_abs();
        double masked_mass = 0.0;
        w_out = RealGrid3(spec);
        for (std::size_t i = 0; i < amp.size(); ++i) {
            if (amp[i] <= floor) {
                masked_mass += amp[i] * amp[i];
                w_out[i] = v_ext[i] / config.nu;
            } else {
                w_out[i] = (v_ext[i] + nonlinear_coeff * lap[i] / amp[i]) / config.nu;
            }
        }
        return masked_mass * spec.cell_volume();  // psi stays normalized
    }

    void apply_potential(ComplexGrid3& psi, const RealGrid3& w) const {
        const double scale = config.dt / constants.hbar;
        for (std::size_t i = 0; i < psi.size(); ++i)
            psi[i] *= std::polar(1.0, -w[i] * scale);
    }

    void step(ComplexGrid3& psi) const {
        apply_kinetic_half(psi);

        RealGrid3 w;
        double mask_mass = step_potential(psi, w);
        if (mask_mass > config.mask_abort)
            throw NumericError("evolve: node mask holds " + std::to_string(mask_mass * 100.0) +
                               "% of the probability mass");
        if (nonlinear_coeff == 0.0) {
            apply_potential(psi, w);
        } else {
            // Fixed-point update of the self-consistent term. The term is a
            // real potential, so the phase leaves |psi| unchanged and the
            // iteration settles immediately; the loop verifies that.
            ComplexGrid3 trial = psi;
            bool converged = false;
            for (int it = 0; it < 5; ++it) {
                trial = psi;
                apply_potential(trial, w);
                RealGrid3 w_next;
                mask_mass = step_potential(trial, w_next);
                double diff = 0.0, scale = 0.0;
                for (std::size_t i = 0; i < w.size(); ++i) {
                    diff = std::max(diff, std::abs(w_next[i] - w[i]));
                    scale = std::max(scale, std::abs(w[i]));
                }
                if (diff <= 1e-10 * std::max(scale, 1.0)) {
                    converged = true;
                    break;
                }
                w = std::move(w_next);
            }
            if (!converged)
                throw NumericError("evolve: self-consistent potential did not converge");
            psi = std::move(trial);
        }

        apply_kinetic_half(psi);
    }

    double energy(const ComplexGrid3& psi) const {
        // <psi| -(nu hbar^2/2m) Lap + W |psi> for the equation as integrated
        // (both sides divided by nu).
        ComplexGrid3 lap = spectral_laplacian(psi);
        const double kin_coeff =
            -config.nu * constants.hbar * constants.hbar / (2.0 * constants.mass);
        RealGrid3 w(spec);
        step_potential(psi, w);
        RealGrid3 integrand(spec);
        for (std::size_t i = 0; i < psi.size(); ++i)
            integrand[i] = kin_coeff * (std::conj(psi[i]) * lap[i]).real() +
                           w[i] * std::norm(psi[i]);
        return integrate(integrand);
    }

    double mask_fraction(const ComplexGrid3& psi) const {
        if (nonlinear_coeff == 0.0) return 0.0;
        const RealGrid3 amp = abs_field(psi);
        const double floor = config.mask_floor * amp.max_abs();
        double mass = 0.0;
        for (std::size_t i = 0; i < amp.size(); ++i)
            if (amp[i] <= floor) mass += amp[i] * amp[i];
        return mass * spec.cell_volume();
    }
};

EvolveResult run(const ComplexGrid3& psi0, const EvolveConfig& config,
                 const PhysicalConstants& constants) {
    Stepper stepper(psi0, config, constants);

    EvolveResult result;
    result.nu = config.nu;
    result.dt = config.dt;
    result.stride = config.snapshot_stride;

    ComplexGrid3 psi = psi0;
    auto record = [&](int step) {
        result.snapshots.push_back({step, step * config.dt, psi});
        result.monitors.push_back({step, step * config.dt, norm_l2(psi), stepper.energy(psi),
                                   stepper.mask_fraction(psi)});
    };
    record(0);

    for (int s = 1; s <= config.steps; ++s) {
        stepper.step(psi);
        const double nrm = norm_l2(psi);
        if (std::abs(nrm - 1.0) > config.norm_abort)
            throw NumericError("evolve: norm drift " + std::to_string(std::abs(nrm - 1.0)) +
                               " exceeds the abort threshold at step " + std::to_string(s));
        if (s % config.snapshot_stride == 0 || s == config.steps) record(s);
    }
    return result;
}

}  // namespace

EvolveResult evolve_linear(const ComplexGrid3& psi0, const EvolveConfig& config,
                           const PhysicalConstants& constants) {
    if (config.nu != 1.0)
        throw InvalidArgument("evolve_linear: nu must be 1; use evolve_nonlinear");
    return run(psi0, config, constants);
}

EvolveResult evolve_nonlinear(const ComplexGrid3& psi_nu0, const EvolveConfig& config,
                              const PhysicalConstants& constants) {
    return run(psi_nu0, config, constants);
}

std::vector<MonitorRow> monitor(const std::vector<Snapshot>& series,
                                const EvolveConfig& config,
                                const PhysicalConstants& constants) {
    if (series.empty()) return {};
    Stepper stepper(series.front().psi, config, constants);
    std::vector<MonitorRow> rows;
    rows.reserve(series.size());
    for (const auto& snap : series)
        rows.push_back({snap.step, snap.t, norm_l2(snap.psi), stepper.energy(snap.psi),
                        stepper.mask_fraction(snap.psi)});
    return rows;
}

}  // namespace qvx
