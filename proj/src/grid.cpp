#include "qvortex/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace qvx {

void GridSpec::validate() const {
    for (int a = 0; a < 3; ++a) {
        if (dims[a] < 4)
            throw InvalidArgument("grid: every dimension must be at least 4");
        if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a]))
            throw InvalidArgument("grid: spacing must be positive and finite");
        if (!std::isfinite(origin[a]))
            throw InvalidArgument("grid: origin must be finite");
    }
    // Guard the total point count well below addressable limits; the file
    // format stores 16 bytes per point.
    const std::uint64_t total =
        std::uint64_t(dims[0]) * dims[1] * dims[2];
    if (total > (std::uint64_t(1) << 40))
        throw InvalidArgument("grid: total point count too large");
}

bool GridSpec::contains(const Vec3& x) const {
    return x.x >= origin[0] && x.x < origin[0] + length(0) &&
           x.y >= origin[1] && x.y < origin[1] + length(1) &&
           x.z >= origin[2] && x.z < origin[2] + length(2);
}

GridSpec GridSpec::cube(std::uint32_t n, double half_extent) {
    GridSpec s;
    s.dims = {n, n, n};
    const double h = 2.0 * half_extent / n;
    s.spacing = {h, h, h};
    s.origin = {-half_extent, -half_extent, -half_extent};
    s.validate();
    return s;
}

ComplexGrid3::ComplexGrid3(GridSpec spec) : spec_(spec) {
    spec_.validate();
    values_.assign(spec_.point_count(), cdouble(0.0, 0.0));
}

ComplexGrid3::ComplexGrid3(GridSpec spec, std::vector<cdouble> values)
    : spec_(spec), values_(std::move(values)) {
    spec_.validate();
    if (values_.size() != spec_.point_count())
        throw InvalidArgument("grid: value count does not match spec point count");
}

bool ComplexGrid3::all_finite() const {
    for (const auto& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

RealGrid3::RealGrid3(GridSpec spec) : spec_(spec) {
    spec_.validate();
    values_.assign(spec_.point_count(), 0.0);
}

RealGrid3::RealGrid3(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
    spec_.validate();
    if (values_.size() != spec_.point_count())
        throw InvalidArgument("grid: value count does not match spec point count");
}

bool RealGrid3::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

double RealGrid3::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

VectorGrid3::VectorGrid3(GridSpec spec) : spec_(spec) {
    spec_.validate();
    for (auto& c : comp_) c.assign(spec_.point_count(), 0.0);
}

bool VectorGrid3::all_finite() const {
    for (const auto& c : comp_)
        for (double v : c)
            if (!std::isfinite(v)) return false;
    return true;
}

ComplexGrid3 to_complex(const RealGrid3& g) {
    ComplexGrid3 out(g.spec());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = cdouble(g[i], 0.0);
    return out;
}

RealGrid3 real_part(const ComplexGrid3& g) {
    RealGrid3 out(g.spec());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i].real();
    return out;
}

RealGrid3 imag_part(const ComplexGrid3& g) {
    RealGrid3 out(g.spec());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i].imag();
    return out;
}

RealGrid3 abs_field(const ComplexGrid3& g) {
    RealGrid3 out(g.spec());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::abs(g[i]);
    return out;
}

// ---- FFT plan cache ---------------------------------------------------------

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

// FFTW planning mutates global state; plans are cached per dimension triple.
// FFTW_ESTIMATE keeps plan creation deterministic, FFTW_UNALIGNED lets the
// plans execute on any caller buffer.
PlanPair& plans_for(const std::array<std::uint32_t, 3>& dims) {
    static std::mutex mu;
    static std::map<std::array<std::uint32_t, 3>, PlanPair> cache;
    std::scoped_lock lock(mu);
    auto [it, inserted] = cache.try_emplace(dims);
    if (inserted) {
        const std::size_t n = std::size_t(dims[0]) * dims[1] * dims[2];
        std::vector<cdouble> a(n), b(n);
        auto* in = reinterpret_cast<fftw_complex*>(a.data());
        auto* out = reinterpret_cast<fftw_complex*>(b.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        // x is the fastest-varying index, which is FFTW's last dimension.
        it->second.fwd = fftw_plan_dft_3d(int(dims[2]), int(dims[1]), int(dims[0]),
                                          in, out, FFTW_FORWARD, flags);
        it->second.inv = fftw_plan_dft_3d(int(dims[2]), int(dims[1]), int(dims[0]),
                                          in, out, FFTW_BACKWARD, flags);
    }
    return it->second;
}

void require_finite(const ComplexGrid3& g, const char* op) {
    if (!g.all_finite())
        throw NumericError(std::string(op) + ": input field has non-finite values");
}

}  // namespace

double wavenumber(std::uint32_t idx, std::uint32_t n, double axis_length) {
    const std::int64_t f =
        (idx <= n / 2) ? std::int64_t(idx) : std::int64_t(idx) - std::int64_t(n);
    return 2.0 * std::numbers::pi * double(f) / axis_length;
}

ComplexGrid3 fourier_transform(const ComplexGrid3& g, FourierSign sign) {
    ComplexGrid3 out(g.spec());
    auto& plans = plans_for(g.spec().dims);
    auto* in_ptr = reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(g.data()));
    auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
    if (sign == FourierSign::forward) {
        fftw_execute_dft(plans.fwd, in_ptr, out_ptr);
    } else {
        fftw_execute_dft(plans.inv, in_ptr, out_ptr);
        const double scale = 1.0 / double(g.size());
        for (auto& v : out.values()) v *= scale;
    }
    return out;
}

namespace {

// Wavenumber used for differentiation: the Nyquist mode has no signed partner,
// so it is zeroed to keep derivatives of real fields real.
double diff_wavenumber(std::uint32_t idx, std::uint32_t n, double axis_length) {
    if (n % 2 == 0 && idx == n / 2) return 0.0;
    return wavenumber(idx, n, axis_length);
}

template <typename Fn>
void for_each_mode(const GridSpec& spec, Fn&& fn) {
    const auto [nx, ny, nz] = spec.dims;
    std::size_t idx = 0;
    for (std::uint32_t k = 0; k < nz; ++k)
        for (std::uint32_t j = 0; j < ny; ++j)
            for (std::uint32_t i = 0; i < nx; ++i, ++idx) fn(i, j, k, idx);
}

}  // namespace

std::array<ComplexGrid3, 3> spectral_gradient(const ComplexGrid3& g) {
    require_finite(g, "spectral_gradient");
    const GridSpec& spec = g.spec();
    ComplexGrid3 spectrum = fourier_transform(g, FourierSign::forward);

    std::array<std::vector<double>, 3> kd;
    for (int a = 0; a < 3; ++a) {
        kd[a].resize(spec.dims[a]);
        for (std::uint32_t i = 0; i < spec.dims[a]; ++i)
            kd[a][i] = diff_wavenumber(i, spec.dims[a], spec.length(a));
    }

    std::array<ComplexGrid3, 3> out;
    ComplexGrid3 work(spec);
    for (int axis = 0; axis < 3; ++axis) {
        for_each_mode(spec, [&](std::uint32_t i, std::uint32_t j, std::uint32_t k,
                                std::size_t idx) {
            const double kv = axis == 0 ? kd[0][i] : (axis == 1 ? kd[1][j] : kd[2][k]);
            work[idx] = cdouble(0.0, kv) * spectrum[idx];
        });
        out[axis] = fourier_transform(work, FourierSign::inverse);
    }
    return out;
}

VectorGrid3 spectral_gradient(const RealGrid3& g) {
    auto grads = spectral_gradient(to_complex(g));
    VectorGrid3 out(g.spec());
    for (int a = 0; a < 3; ++a)
        for (std::size_t i = 0; i < g.size(); ++i) out.comp(a)[i] = grads[a][i].real();
    return out;
}

ComplexGrid3 spectral_partial(const ComplexGrid3& g, int axis) {
    require_finite(g, "spectral_partial");
    if (axis < 0 || axis > 2) throw InvalidArgument("spectral_partial: axis out of range");
    const GridSpec& spec = g.spec();
    ComplexGrid3 spectrum = fourier_transform(g, FourierSign::forward);

    std::vector<double> kd(spec.dims[axis]);
    for (std::uint32_t i = 0; i < spec.dims[axis]; ++i)
        kd[i] = diff_wavenumber(i, spec.dims[axis], spec.length(axis));

    for_each_mode(spec, [&](std::uint32_t i, std::uint32_t j, std::uint32_t k,
                            std::size_t idx) {
        const double kv = axis == 0 ? kd[i] : (axis == 1 ? kd[j] : kd[k]);
        spectrum[idx] *= cdouble(0.0, kv);
    });
    return fourier_transform(spectrum, FourierSign::inverse);
}

ComplexGrid3 spectral_laplacian(const ComplexGrid3& g) {
    require_finite(g, "spectral_laplacian");
    const GridSpec& spec = g.spec();
    ComplexGrid3 spectrum = fourier_transform(g, FourierSign::forward);

    std::array<std::vector<double>, 3> k2;
    for (int a = 0; a < 3; ++a) {
        k2[a].resize(spec.dims[a]);
        for (std::uint32_t i = 0; i < spec.dims[a]; ++i) {
            const double kv = wavenumber(i, spec.dims[a], spec.length(a));
            k2[a][i] = kv * kv;
        }
    }
    for_each_mode(spec, [&](std::uint32_t i, std::uint32_t j, std::uint32_t k,
                            std::size_t idx) {
        spectrum[idx] *= -(k2[0][i] + k2[1][j] + k2[2][k]);
    });
    return fourier_transform(spectrum, FourierSign::inverse);
}

RealGrid3 spectral_laplacian(const RealGrid3& g) {
    return real_part(spectral_laplacian(to_complex(g)));
}

RealGrid3 spectral_divergence(const VectorGrid3& v) {
    RealGrid3 out(v.spec());
    for (int a = 0; a < 3; ++a) {
        RealGrid3 comp(v.spec(), v.comp(a));
        auto grads = spectral_gradient(to_complex(comp));
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += grads[a][i].real();
    }
    return out;
}

// ---- quadrature -------------------------------------------------------------

namespace {

// Kahan compensated accumulation; deterministic for a fixed traversal order.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

cdouble integrate(const ComplexGrid3& g) {
    KahanSum re, im;
    for (const auto& v : g.values()) {
        re.add(v.real());
        im.add(v.imag());
    }
    const double vol = g.spec().cell_volume();
    return {re.sum * vol, im.sum * vol};
}

double integrate(const RealGrid3& g) {
    KahanSum s;
    for (double v : g.values()) s.add(v);
    return s.sum * g.spec().cell_volume();
}

cdouble inner_product(const ComplexGrid3& a, const ComplexGrid3& b) {
    if (!(a.spec() == b.spec()))
        throw InvalidArgument("inner_product: grids have different specs");
    KahanSum re, im;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const cdouble p = std::conj(a[i]) * b[i];
        re.add(p.real());
        im.add(p.imag());
    }
    const double vol = a.spec().cell_volume();
    return {re.sum * vol, im.sum * vol};
}

double norm_l2(const ComplexGrid3& g) {
    KahanSum s;
    for (const auto& v : g.values()) s.add(std::norm(v));
    return std::sqrt(s.sum * g.spec().cell_volume());
}

void normalize(ComplexGrid3& g) {
    const double n = norm_l2(g);
    if (!(n > 0.0) || !std::isfinite(n))
        throw NumericError("normalize: field has zero or non-finite norm");
    const double s = 1.0 / n;
    for (auto& v : g.values()) v *= s;
}

}  // namespace qvx
