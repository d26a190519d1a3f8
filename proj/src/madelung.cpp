#include "qvortex/madelung.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace qvx {

namespace {

double max_abs(const ComplexGrid3& g) {
    double m = 0.0;
    for (const auto& v : g.values()) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

MadelungFields decompose(const ComplexGrid3& psi, const PhysicalConstants& constants,
                         double mask_floor) {
    constants.validate();
    if (!psi.all_finite()) throw NumericError("decompose: non-finite wavefunction");

    MadelungFields f;
    f.amplitude = abs_field(psi);
    f.density = RealGrid3(psi.spec());
    for (std::size_t i = 0; i < psi.size(); ++i) f.density[i] = std::norm(psi[i]);

    const double floor = mask_floor * f.amplitude.max_abs();
    f.mask.assign(psi.size(), 0);

    auto grad = spectral_gradient(psi);
    f.velocity = VectorGrid3(psi.spec());
    const double hbar_over_m = constants.hbar / constants.mass;
    std::size_t masked = 0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        if (f.amplitude[i] <= floor) {
            f.mask[i] = 1;
            ++masked;
            f.mask_mass += f.density[i];
            continue;
        }
        const cdouble conj_psi = std::conj(psi[i]);
        const double inv_rho = 1.0 / f.density[i];
        f.velocity.comp(0)[i] = hbar_over_m * (conj_psi * grad[0][i]).imag() * inv_rho;
        f.velocity.comp(1)[i] = hbar_over_m * (conj_psi * grad[1][i]).imag() * inv_rho;
        f.velocity.comp(2)[i] = hbar_over_m * (conj_psi * grad[2][i]).imag() * inv_rho;
    }
    f.mask_mass *= psi.spec().cell_volume();
    f.mask_volume_fraction = double(masked) / double(psi.size());
    return f;
}

MaskedField quantum_potential(const RealGrid3& amplitude, const PhysicalConstants& constants,
                              double mask_floor) {
    constants.validate();
    if (!amplitude.all_finite()) throw NumericError("quantum_potential: non-finite amplitude");

    MaskedField out;
    out.values = spectral_laplacian(amplitude);
    out.mask.assign(amplitude.size(), 0);

    const double floor = mask_floor * amplitude.max_abs();
    const double coeff = -constants.hbar * constants.hbar / (2.0 * constants.mass);
    std::size_t masked = 0;
    for (std::size_t i = 0; i < amplitude.size(); ++i) {
        if (std::abs(amplitude[i]) <= floor) {
            out.mask[i] = 1;
            ++masked;
            out.mask_mass += amplitude[i] * amplitude[i];
            out.values[i] = 0.0;
        } else {
            out.values[i] = coeff * out.values[i] / amplitude[i];
        }
    }
    out.mask_mass *= amplitude.spec().cell_volume();
    out.mask_volume_fraction = double(masked) / double(amplitude.size());
    return out;
}

ForceIntegral bohm_force_integral(const MadelungFields& fields,
                                  const PhysicalConstants& constants) {
    const auto qb = quantum_potential(fields.amplitude, constants);
    const auto grad = spectral_gradient(qb.values);

    ForceIntegral out;
    RealGrid3 gx(fields.density.spec()), gy(fields.density.spec()), gz(fields.density.spec());
    RealGrid3 gabs(fields.density.spec());
    for (std::size_t i = 0; i < fields.density.size(); ++i) {
        if (qb.mask[i]) continue;  // excluded volume; reported via the mask stats
        const Vec3 g = grad.vec_at(i);
        gx[i] = fields.density[i] * g.x;
        gy[i] = fields.density[i] * g.y;
        gz[i] = fields.density[i] * g.z;
        gabs[i] = fields.density[i] * norm(g);
    }
    out.value = {integrate(gx), integrate(gy), integrate(gz)};
    out.abs_integral = integrate(gabs);

    // The vanishing identity assumes the amplitude has decayed by the box
    // faces; flag runs where it has not.
    const auto& spec = fields.amplitude.spec();
    const double peak = fields.amplitude.max_abs();
    double face_max = 0.0;
    const auto [nx, ny, nz] = spec.dims;
    for (std::uint32_t k = 0; k < nz; ++k)
        for (std::uint32_t j = 0; j < ny; ++j) {
            face_max = std::max(face_max, std::abs(fields.amplitude.at(0, j, k)));
            face_max = std::max(face_max, std::abs(fields.amplitude.at(nx - 1, j, k)));
        }
    for (std::uint32_t k = 0; k < nz; ++k)
        for (std::uint32_t i = 0; i < nx; ++i) {
            face_max = std::max(face_max, std::abs(fields.amplitude.at(i, 0, k)));
            face_max = std::max(face_max, std::abs(fields.amplitude.at(i, ny - 1, k)));
        }
    for (std::uint32_t j = 0; j < ny; ++j)
        for (std::uint32_t i = 0; i < nx; ++i) {
            face_max = std::max(face_max, std::abs(fields.amplitude.at(i, j, 0)));
            face_max = std::max(face_max, std::abs(fields.amplitude.at(i, j, nz - 1)));
        }
    out.boundary_contaminated = face_max > 1e-8 * peak;
    return out;
}

// ---- nodal-line extraction ----------------------------------------------

namespace {

struct FaceKey {
    int axis;  // normal axis of the face
    std::uint32_t i, j, k;
    auto operator<=>(const FaceKey&) const = default;
};

struct FaceCrossing {
    Vec3 point;
};

// Roots of the 2x2 bilinear system (re = 0, im = 0) on the unit face. The
// substitution t(s) = -(a0 + a1 s)/(a2 + a3 s) from the first equation turns
// the second into a quadratic in s.
int bilinear_zero(const double a[4], const double b[4], double out_s[2], double out_t[2]) {
    const double c2 = b[1] * a[3] - b[3] * a[1];
    const double c1 = b[0] * a[3] + b[1] * a[2] - b[3] * a[0] - b[2] * a[1];
    const double c0 = b[0] * a[2] - b[2] * a[0];

    double roots[2];
    int nroots = 0;
    const double scale = std::max({std::abs(c2), std::abs(c1), std::abs(c0)});
    if (scale == 0.0) return 0;
    if (std::abs(c2) < 1e-14 * scale) {
        if (std::abs(c1) < 1e-14 * scale) return 0;
        roots[nroots++] = -c0 / c1;
    } else {
        const double disc = c1 * c1 - 4.0 * c2 * c0;
        if (disc < 0.0) return 0;
        const double sq = std::sqrt(disc);
        // Numerically stable pair.
        const double q = -0.5 * (c1 + (c1 >= 0.0 ? sq : -sq));
        roots[nroots++] = q / c2;
        if (q != 0.0) roots[nroots++] = c0 / q;
    }

    int found = 0;
    for (int r = 0; r < nroots; ++r) {
        const double s = roots[r];
        if (!(s >= -1e-9 && s <= 1.0 + 1e-9)) continue;
        const double denom = a[2] + a[3] * s;
        double t;
        if (std::abs(denom) > 1e-300) {
            t = -(a[0] + a[1] * s) / denom;
        } else {
            const double bd = b[2] + b[3] * s;
            if (std::abs(bd) < 1e-300) continue;
            t = -(b[0] + b[1] * s) / bd;
        }
        if (!(t >= -1e-9 && t <= 1.0 + 1e-9)) continue;
        bool dup = false;
        for (int p = 0; p < found; ++p)
            if (std::abs(out_s[p] - s) < 1e-9 && std::abs(out_t[p] - t) < 1e-9) dup = true;
        if (dup) continue;
        out_s[found] = std::clamp(s, 0.0, 1.0);
        out_t[found] = std::clamp(t, 0.0, 1.0);
        if (++found == 2) break;
    }
    return found;
}

}  // namespace

std::vector<NodalLine> extract_nodal_lines(const ComplexGrid3& psi) {
    const GridSpec& spec = psi.spec();
    const auto [nx, ny, nz] = spec.dims;

    std::map<FaceKey, FaceCrossing> crossings;

    auto corner = [&](std::uint32_t i, std::uint32_t j, std::uint32_t k) {
        return psi.at(i, j, k);
    };
    auto scan_face = [&](int axis, std::uint32_t i, std::uint32_t j, std::uint32_t k,
                         const cdouble f[4]) {
        // f ordered (0,0), (1,0), (0,1), (1,1) in the in-face axes.
        const double a[4] = {f[0].real(), f[1].real() - f[0].real(),
                             f[2].real() - f[0].real(),
                             f[3].real() - f[1].real() - f[2].real() + f[0].real()};
        const double b[4] = {f[0].imag(), f[1].imag() - f[0].imag(),
                             f[2].imag() - f[0].imag(),
                             f[3].imag() - f[1].imag() - f[2].imag() + f[0].imag()};
        double s[2], t[2];
        const int n = bilinear_zero(a, b, s, t);
        if (n != 1) return;  // junction faces (n = 2) break chains; skip them
        Vec3 p = spec.point(i, j, k);
        if (axis == 0) {
            p.y += s[0] * spec.spacing[1];
            p.z += t[0] * spec.spacing[2];
        } else if (axis == 1) {
            p.x += s[0] * spec.spacing[0];
            p.z += t[0] * spec.spacing[2];
        } else {
            p.x += s[0] * spec.spacing[0];
            p.y += t[0] * spec.spacing[1];
        }
        crossings[{axis, i, j, k}] = FaceCrossing{p};
    };

    for (std::uint32_t k = 0; k < nz; ++k)
        for (std::uint32_t j = 0; j < ny; ++j)
            for (std::uint32_t i = 0; i < nx; ++i) {
                if (j + 1 < ny && k + 1 < nz) {
                    const cdouble f[4] = {corner(i, j, k), corner(i, j + 1, k),
                                          corner(i, j, k + 1), corner(i, j + 1, k + 1)};
                    scan_face(0, i, j, k, f);
                }
                if (i + 1 < nx && k + 1 < nz) {
                    const cdouble f[4] = {corner(i, j, k), corner(i + 1, j, k),
                                          corner(i, j, k + 1), corner(i + 1, j, k + 1)};
                    scan_face(1, i, j, k, f);
                }
                if (i + 1 < nx && j + 1 < ny) {
                    const cdouble f[4] = {corner(i, j, k), corner(i + 1, j, k),
                                          corner(i, j + 1, k), corner(i + 1, j + 1, k)};
                    scan_face(2, i, j, k, f);
                }
            }

    // Cells adjacent to each crossed face; a cell traversed by one line has
    // exactly two crossed faces.
    struct CellKey {
        std::uint32_t i, j, k;
        auto operator<=>(const CellKey&) const = default;
    };
    auto cells_of_face = [&](const FaceKey& f, CellKey out[2]) {
        int n = 0;
        const std::uint32_t lim[3] = {nx - 1, ny - 1, nz - 1};
        std::uint32_t idx[3] = {f.i, f.j, f.k};
        if (idx[0] < lim[0] && idx[1] < lim[1] && idx[2] < lim[2])
            out[n++] = {idx[0], idx[1], idx[2]};
        if (idx[f.axis] > 0) {
            std::uint32_t prev[3] = {idx[0], idx[1], idx[2]};
            prev[f.axis] -= 1;
            if (prev[0] < lim[0] && prev[1] < lim[1] && prev[2] < lim[2])
                out[n++] = {prev[0], prev[1], prev[2]};
        }
        return n;
    };

    std::map<CellKey, std::vector<FaceKey>> cell_faces;
    for (const auto& [face, crossing] : crossings) {
        (void)crossing;
        CellKey cells[2];
        const int n = cells_of_face(face, cells);
        for (int c = 0; c < n; ++c) cell_faces[cells[c]].push_back(face);
    }

    std::map<FaceKey, bool> used;
    std::vector<NodalLine> lines;

    auto walk = [&](const FaceKey& start, const CellKey& first_cell,
                    std::vector<Vec3>& out) -> bool {
        // Returns true if the walk closed back onto the start face.
        FaceKey face = start;
        CellKey cell = first_cell;
        while (true) {
            const auto& faces = cell_faces[cell];
            if (faces.size() != 2) return false;
            const FaceKey next = faces[0] == face ? faces[1] : faces[0];
            if (next == start) return true;
            if (used[next]) return false;
            used[next] = true;
            out.push_back(crossings[next].point);
            CellKey cells[2];
            const int n = cells_of_face(next, cells);
            CellKey other = cells[0];
            bool found_other = false;
            for (int c = 0; c < n; ++c)
                if (!(cells[c] == cell)) {
                    other = cells[c];
                    found_other = true;
                }
            if (!found_other) return false;  // hit the box wall
            face = next;
            cell = other;
        }
    };

    for (const auto& [face, crossing] : crossings) {
        if (used[face]) continue;
        used[face] = true;

        NodalLine line;
        line.points.push_back(crossing.point);

        CellKey cells[2];
        const int ncells = cells_of_face(face, cells);
        if (ncells == 0) continue;

        const bool closed = walk(face, cells[0], line.points);
        if (!closed && ncells == 2) {
            std::vector<Vec3> back;
            walk(face, cells[1], back);
            std::reverse(back.begin(), back.end());
            back.insert(back.end(), line.points.begin(), line.points.end());
            line.points = std::move(back);
        }
        line.closed = closed;
        if (line.points.size() >= 3) lines.push_back(std::move(line));
    }
    return lines;
}

// ---- trajectories ---------------------------------------------------------

namespace {

struct Sampler {
    const GridSpec& spec;

    bool locate(const Vec3& x, std::uint32_t idx[3], double frac[3]) const {
        for (int a = 0; a < 3; ++a) {
            const double u = (a == 0 ? x.x : a == 1 ? x.y : x.z);
            const double rel = (u - spec.origin[a]) / spec.spacing[a];
            if (!(rel >= 0.0) || rel >= double(spec.dims[a] - 1)) return false;
            const double fl = std::floor(rel);
            idx[a] = std::uint32_t(fl);
            frac[a] = rel - fl;
        }
        return true;
    }
};

}  // namespace

Trajectory advect_trajectory(const std::vector<ComplexGrid3>& psi_series, const Vec3& x0,
                             double dt, const PhysicalConstants& constants,
                             int substeps_per_frame, double mask_floor) {
    if (psi_series.size() < 2)
        throw InvalidArgument("advect_trajectory: need at least two frames");
    if (!(dt > 0.0)) throw InvalidArgument("advect_trajectory: dt must be positive");
    if (substeps_per_frame < 1)
        throw InvalidArgument("advect_trajectory: substeps must be >= 1");

    const GridSpec& spec = psi_series[0].spec();
    std::vector<MadelungFields> frames;
    frames.reserve(psi_series.size());
    for (const auto& psi : psi_series) {
        if (!(psi.spec() == spec))
            throw InvalidArgument("advect_trajectory: frames on different grids");
        frames.push_back(decompose(psi, constants, mask_floor));
    }

    const Sampler sampler{spec};
    auto sample_frame = [&](const MadelungFields& f, const Vec3& x, Vec3& u) -> bool {
        std::uint32_t idx[3];
        double fr[3];
        if (!sampler.locate(x, idx, fr)) return false;
        u = {0, 0, 0};
        for (int dk = 0; dk < 2; ++dk)
            for (int dj = 0; dj < 2; ++dj)
                for (int di = 0; di < 2; ++di) {
                    const std::size_t p = spec.index(idx[0] + di, idx[1] + dj, idx[2] + dk);
                    if (f.mask[p]) return false;
                    const double w = (di ? fr[0] : 1.0 - fr[0]) * (dj ? fr[1] : 1.0 - fr[1]) *
                                     (dk ? fr[2] : 1.0 - fr[2]);
                    u += w * f.velocity.vec_at(p);
                }
        return true;
    };
    auto velocity_at = [&](const Vec3& x, double t, Vec3& u) -> bool {
        const double ft = t / dt;
        const std::size_t f0 =
            std::min(std::size_t(std::max(0.0, std::floor(ft))), frames.size() - 2);
        const double w = std::clamp(ft - double(f0), 0.0, 1.0);
        Vec3 u0, u1;
        if (!sample_frame(frames[f0], x, u0)) return false;
        if (!sample_frame(frames[f0 + 1], x, u1)) return false;
        u = (1.0 - w) * u0 + w * u1;
        return true;
    };

    Trajectory traj;
    Vec3 x = x0;
    double t = 0.0;
    const double h = dt / double(substeps_per_frame);
    traj.times.push_back(t);
    traj.positions.push_back(x);

    const std::size_t total_steps = (psi_series.size() - 1) * std::size_t(substeps_per_frame);
    for (std::size_t s = 0; s < total_steps; ++s) {
        Vec3 k1, k2, k3, k4;
        const bool ok = velocity_at(x, t, k1) &&
                        velocity_at(x + 0.5 * h * k1, t + 0.5 * h, k2) &&
                        velocity_at(x + 0.5 * h * k2, t + 0.5 * h, k3) &&
                        velocity_at(x + h * k3, t + h, k4);
        if (!ok) {
            traj.truncated = true;
            break;
        }
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
        traj.times.push_back(t);
        traj.positions.push_back(x);
    }
    return traj;
}

double circulation_holonomy(const ComplexGrid3& psi, const ProbeLoop& loop,
                            const PhysicalConstants& constants) {
    loop.validate();
    constants.validate();
    const GridSpec& spec = psi.spec();
    const Sampler sampler{spec};

    auto sample_psi = [&](const Vec3& x) -> cdouble {
        std::uint32_t idx[3];
        double fr[3];
        if (!sampler.locate(x, idx, fr))
            throw InvalidArgument("circulation_holonomy: probe leaves the grid box");
        cdouble v = 0.0;
        for (int dk = 0; dk < 2; ++dk)
            for (int dj = 0; dj < 2; ++dj)
                for (int di = 0; di < 2; ++di) {
                    const double w = (di ? fr[0] : 1.0 - fr[0]) * (dj ? fr[1] : 1.0 - fr[1]) *
                                     (dk ? fr[2] : 1.0 - fr[2]);
                    v += w * psi[spec.index(idx[0] + di, idx[1] + dj, idx[2] + dk)];
                }
        return v;
    };

    const std::size_t n = loop.points.size();
    std::vector<cdouble> vals(n);
    for (std::size_t i = 0; i < n; ++i) {
        vals[i] = sample_psi(loop.points[i]);
        if (std::abs(vals[i]) == 0.0)
            throw EvaluationError(EvalReason::ill_conditioned_probe,
                                  "circulation_holonomy: probe crosses a node");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        total += std::arg(vals[(i + 1) % n] / vals[i]);
    return constants.hbar / constants.mass * total;
}

}  // namespace qvx
