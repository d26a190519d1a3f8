#include "qvortex/wavefunction.hpp"

#include <cmath>
#include <numbers>

namespace qvx {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

QuantizationReport quantization_check(double gamma, const PhysicalConstants& constants,
                                      double tol) {
    constants.validate();
    if (!std::isfinite(gamma)) throw InvalidArgument("quantization_check: gamma not finite");
    QuantizationReport rep;
    rep.gamma = gamma;
    const double k = constants.mass * gamma / (kTwoPi * constants.hbar);
    rep.k_nearest = int(std::lround(k));
    rep.residual = std::abs(k - double(rep.k_nearest));
    rep.single_valued = rep.residual < tol;
    return rep;
}

cdouble sheet_phase(double gamma, const PhysicalConstants& constants, int n_w) {
    constants.validate();
    return std::polar(1.0, constants.mass * gamma * double(n_w) / constants.hbar);
}

NuSelection select_nu(double gamma, const PhysicalConstants& constants, int m_index) {
    constants.validate();
    if (gamma == 0.0)
        throw InvalidArgument("select_nu: gamma = 0 carries no vortex; the state is "
                              "single-valued for every nu");
    if (m_index < 1) throw InvalidArgument("select_nu: M must be a positive integer");
    NuSelection sel;
    sel.m_index = m_index;
    sel.nu = constants.mass * gamma / (kTwoPi * double(m_index) * constants.hbar);
    sel.linear = std::abs(sel.nu - 1.0) < 1e-12;
    return sel;
}

double MultiValuedState::amplitude_at(const Vec3& x) const {
    const Vec3 c = envelope.center.value_or(link->centroid());
    const double w2 = envelope.width * envelope.width;
    const double phi = std::exp(-norm2(x - c) / (4.0 * w2));
    const double reg = nodal_regularizer(*link, regularizer_order, x);
    return norm_scale * phi / reg;  // reg = +inf on the filament gives an exact zero
}

MultiValuedState build_initial_state(const GridSpec& grid, const EnvelopeSpec& envelope,
                                     std::shared_ptr<const Link> link,
                                     const FlowPotential& phi_f, int n,
                                     const PhysicalConstants& constants,
                                     const BuildOptions& opts) {
    grid.validate();
    constants.validate();
    if (!link) throw InvalidArgument("build_initial_state: null link");
    link->validate();
    if (n < 2)
        throw InvalidArgument("build_initial_state: regularizer order n must be >= 2 "
                              "for a nodal filament");
    if (!(envelope.width > 0.0) || !std::isfinite(envelope.width))
        throw InvalidArgument("build_initial_state: envelope width must be positive");
    if (opts.phi_w && !(opts.phi_w->spec() == grid))
        throw InvalidArgument("build_initial_state: phi_w grid mismatch");

    for (const auto& curve : link->curves) {
        if (!curve.closed()) continue;  // open filaments legitimately pierce the box
        for (const auto& p : curve.points())
            if (!grid.contains(p))
                throw InvalidArgument("build_initial_state: filament exits the grid box");
    }

    MultiValuedState state;
    state.link = std::move(link);
    state.constants = constants;
    state.envelope = envelope;
    state.envelope.center = envelope.center.value_or(state.link->centroid());
    state.regularizer_order = n;

    const Vec3 center = *state.envelope.center;
    const double w2 = envelope.width * envelope.width;
    const double m_over_hbar = constants.mass / constants.hbar;

    state.psi = ComplexGrid3(grid);
    state.amplitude = RealGrid3(grid);
    state.phase_over_hbar = RealGrid3(grid);

    const auto [nx, ny, nz] = grid.dims;
    std::size_t idx = 0;
    for (std::uint32_t k = 0; k < nz; ++k) {
        for (std::uint32_t j = 0; j < ny; ++j) {
            for (std::uint32_t i = 0; i < nx; ++i, ++idx) {
                const Vec3 x = grid.point(i, j, k);
                const double phi_env = std::exp(-norm2(x - center) / (4.0 * w2));
                const double reg = nodal_regularizer(*state.link, n, x);
                const double amp = phi_env / reg;

                double phase = m_over_hbar * phi_f(x);
                if (opts.phi_w) phase += m_over_hbar * (*opts.phi_w)[idx];

                state.amplitude[idx] = amp;
                state.phase_over_hbar[idx] = phase;
                state.psi[idx] = std::polar(amp, phase);
            }
        }
    }

    const double nrm = norm_l2(state.psi);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
        throw NumericError("build_initial_state: state has zero or non-finite norm; "
                           "check envelope width against the grid box");
    state.norm_scale = 1.0 / nrm;
    for (auto& v : state.psi.values()) v *= state.norm_scale;
    for (auto& v : state.amplitude.values()) v *= state.norm_scale;

    if (std::abs(norm_l2(state.psi) - 1.0) > opts.norm_tol)
        throw NumericError("build_initial_state: normalization drifted beyond tolerance");

    // Nodal gate: |psi| at the filament samples and segment midpoints must sit
    // far below the grid maximum.
    const double peak = state.amplitude.max_abs();
    for (const auto& curve : state.link->curves) {
        const auto& pts = curve.points();
        for (std::size_t s = 0; s < curve.segment_count(); ++s) {
            const Vec3 a = pts[s];
            const Vec3 b = pts[(s + 1) % pts.size()];
            if (state.amplitude_at(a) > opts.nodal_tol * peak ||
                state.amplitude_at(0.5 * (a + b)) > opts.nodal_tol * peak)
                throw NumericError("build_initial_state: nodal requirement violated "
                                   "on the filament");
        }
    }
    return state;
}

MultiValuedState build_initial_state(const GridSpec& grid, const EnvelopeSpec& envelope,
                                     std::shared_ptr<const Link> link,
                                     std::shared_ptr<const SeifertMesh> mesh, int n,
                                     const PhysicalConstants& constants,
                                     const BuildOptions& opts) {
    if (!link) throw InvalidArgument("build_initial_state: null link");
    FlowPotential phi_f;
    if (link->gamma == 0.0) {
        phi_f = [](const Vec3&) { return 0.0; };
    } else {
        if (!mesh)
            throw InvalidArgument("build_initial_state: a cut mesh is required for the "
                                  "multi-valued potential");
        auto cut = std::make_shared<CutPotential>(mesh, link->gamma);
        phi_f = [cut](const Vec3& x) { return cut->phi(x); };
    }
    MultiValuedState state =
        build_initial_state(grid, envelope, std::move(link), phi_f, n, constants, opts);
    state.mesh = std::move(mesh);
    return state;
}

ComplexGrid3 make_nu_state(const MultiValuedState& state, double nu) {
    if (nu == 0.0 || !std::isfinite(nu))
        throw InvalidArgument("make_nu_state: nu must be finite and nonzero");
    ComplexGrid3 out(state.psi.spec());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::polar(state.amplitude[i], state.phase_over_hbar[i] / nu);
    return out;
}

SuperposedState superpose(const std::vector<const MultiValuedState*>& states,
                          const std::vector<cdouble>& weights) {
    if (states.empty() || states.size() != weights.size())
        throw InvalidArgument("superpose: need matching non-empty state and weight lists");
    for (const auto* s : states)
        if (!s) throw InvalidArgument("superpose: null state");

    const GridSpec& spec = states[0]->psi.spec();
    const PhysicalConstants& constants = states[0]->constants;
    for (const auto* s : states) {
        if (!(s->psi.spec() == spec))
            throw InvalidArgument("superpose: states live on different grids");
        if (!(s->constants == constants))
            throw InvalidArgument("superpose: states use different unit systems");
    }

    SuperposedState out;
    out.constants = constants;
    out.psi = ComplexGrid3(spec);
    for (std::size_t j = 0; j < states.size(); ++j)
        for (std::size_t i = 0; i < out.psi.size(); ++i)
            out.psi[i] += weights[j] * states[j]->psi[i];

    const double nrm = norm_l2(out.psi);
    if (!(nrm > 0.0))
        throw NumericError("superpose: weighted sum has zero norm");
    for (auto& v : out.psi.values()) v *= 1.0 / nrm;

    out.overlap.assign(states.size(), std::vector<cdouble>(states.size()));
    for (std::size_t a = 0; a < states.size(); ++a)
        for (std::size_t b = 0; b < states.size(); ++b)
            out.overlap[a][b] = inner_product(states[a]->psi, states[b]->psi);

    out.components.resize(states.size());
    for (std::size_t j = 0; j < states.size(); ++j) {
        auto& comp = out.components[j];
        comp.gamma = states[j]->gamma();
        comp.weight = weights[j];
        comp.nu = constants.mass * comp.gamma / (kTwoPi * constants.hbar);
        comp.population = std::norm(weights[j] / nrm);
    }
    return out;
}

}  // namespace qvx
