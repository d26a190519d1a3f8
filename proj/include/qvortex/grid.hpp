#pragma once

#include "qvortex/errors.hpp"
#include "qvortex/vec3.hpp"

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace qvx {

using cdouble = std::complex<double>;

/// Uniform periodic Cartesian grid. Values are stored row-major with x fastest:
/// index = ix + nx*(iy + ny*iz).
struct GridSpec {
    std::array<std::uint32_t, 3> dims{0, 0, 0};
    std::array<double, 3> origin{0.0, 0.0, 0.0};
    std::array<double, 3> spacing{1.0, 1.0, 1.0};

    void validate() const;

    std::size_t point_count() const {
        return std::size_t(dims[0]) * dims[1] * dims[2];
    }
    double cell_volume() const { return spacing[0] * spacing[1] * spacing[2]; }
    double length(int axis) const { return dims[axis] * spacing[axis]; }

    std::size_t index(std::uint32_t i, std::uint32_t j, std::uint32_t k) const {
        return std::size_t(i) + dims[0] * (std::size_t(j) + std::size_t(dims[1]) * k);
    }
    Vec3 point(std::uint32_t i, std::uint32_t j, std::uint32_t k) const {
        return {origin[0] + i * spacing[0], origin[1] + j * spacing[1],
                origin[2] + k * spacing[2]};
    }
    /// True when x lies inside the half-open box [origin, origin + dims*spacing).
    bool contains(const Vec3& x) const;

    /// Cube of n^3 points spanning [-half_extent, +half_extent) on each axis.
    static GridSpec cube(std::uint32_t n, double half_extent);

    bool operator==(const GridSpec&) const = default;
};

class ComplexGrid3 {
public:
    ComplexGrid3() = default;
    explicit ComplexGrid3(GridSpec spec);
    ComplexGrid3(GridSpec spec, std::vector<cdouble> values);

    const GridSpec& spec() const { return spec_; }
    std::size_t size() const { return values_.size(); }

    cdouble& operator[](std::size_t i) { return values_[i]; }
    const cdouble& operator[](std::size_t i) const { return values_[i]; }
    cdouble& at(std::uint32_t i, std::uint32_t j, std::uint32_t k) {
        return values_[spec_.index(i, j, k)];
    }
    const cdouble& at(std::uint32_t i, std::uint32_t j, std::uint32_t k) const {
        return values_[spec_.index(i, j, k)];
    }

    cdouble* data() { return values_.data(); }
    const cdouble* data() const { return values_.data(); }
    std::vector<cdouble>& values() { return values_; }
    const std::vector<cdouble>& values() const { return values_; }

    bool all_finite() const;

private:
    GridSpec spec_;
    std::vector<cdouble> values_;
};

class RealGrid3 {
public:
    RealGrid3() = default;
    explicit RealGrid3(GridSpec spec);
    RealGrid3(GridSpec spec, std::vector<double> values);

    const GridSpec& spec() const { return spec_; }
    std::size_t size() const { return values_.size(); }

    double& operator[](std::size_t i) { return values_[i]; }
    const double& operator[](std::size_t i) const { return values_[i]; }
    double& at(std::uint32_t i, std::uint32_t j, std::uint32_t k) {
        return values_[spec_.index(i, j, k)];
    }
    const double& at(std::uint32_t i, std::uint32_t j, std::uint32_t k) const {
        return values_[spec_.index(i, j, k)];
    }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    bool all_finite() const;
    double max_abs() const;

private:
    GridSpec spec_;
    std::vector<double> values_;
};

/// Three real components per point, stored planar.
class VectorGrid3 {
public:
    VectorGrid3() = default;
    explicit VectorGrid3(GridSpec spec);

    const GridSpec& spec() const { return spec_; }
    std::size_t size() const { return comp_[0].size(); }

    std::vector<double>& comp(int c) { return comp_[c]; }
    const std::vector<double>& comp(int c) const { return comp_[c]; }

    Vec3 vec_at(std::size_t i) const { return {comp_[0][i], comp_[1][i], comp_[2][i]}; }
    void set_vec(std::size_t i, const Vec3& v) {
        comp_[0][i] = v.x;
        comp_[1][i] = v.y;
        comp_[2][i] = v.z;
    }

    bool all_finite() const;

private:
    GridSpec spec_;
    std::array<std::vector<double>, 3> comp_;
};

// ---- conversions ----------------------------------------------------------

ComplexGrid3 to_complex(const RealGrid3& g);
RealGrid3 real_part(const ComplexGrid3& g);
RealGrid3 imag_part(const ComplexGrid3& g);
RealGrid3 abs_field(const ComplexGrid3& g);

// ---- spectral operators ---------------------------------------------------
//
// All operators assume the periodic box of the grid spec. Forward transforms
// are unnormalized; the inverse carries the 1/N factor. Differentiation zeroes
// the Nyquist mode so that odd-order derivatives of real fields stay real.

enum class FourierSign { forward, inverse };

ComplexGrid3 fourier_transform(const ComplexGrid3& g, FourierSign sign);

/// Gradient of a complex field; one complex grid per axis. Exact for on-grid
/// plane waves. Rejects non-finite input.
std::array<ComplexGrid3, 3> spectral_gradient(const ComplexGrid3& g);

/// Gradient of a real field as a real vector field.
VectorGrid3 spectral_gradient(const RealGrid3& g);

/// Single-axis derivative.
ComplexGrid3 spectral_partial(const ComplexGrid3& g, int axis);

ComplexGrid3 spectral_laplacian(const ComplexGrid3& g);
RealGrid3 spectral_laplacian(const RealGrid3& g);

RealGrid3 spectral_divergence(const VectorGrid3& v);

/// Angular wavenumber of the mode with integer index idx along one axis.
/// For even n the Nyquist index maps to -n/2.
double wavenumber(std::uint32_t idx, std::uint32_t n, double axis_length);

// ---- quadrature -----------------------------------------------------------

/// Riemann sum times cell volume, compensated (Kahan) summation so results are
/// independent of any internal chunking.
cdouble integrate(const ComplexGrid3& g);
double integrate(const RealGrid3& g);

/// ∫ conj(a)·b dV
cdouble inner_product(const ComplexGrid3& a, const ComplexGrid3& b);

/// sqrt(∫ |g|^2 dV)
double norm_l2(const ComplexGrid3& g);

/// Scale so that norm_l2 == 1; throws NumericError on a zero field.
void normalize(ComplexGrid3& g);

}  // namespace qvx
