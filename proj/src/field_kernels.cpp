#include "qvortex/field_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qvx {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Induced velocity of one straight segment, closed form. With r1 = x - p1,
// r2 = x - p2 the integral of ds x r / |r|^3 over the segment is
//   (r1 x r2) (|r1| + |r2|) / (|r1||r2| (|r1||r2| + r1.r2)),
// finite everywhere off the segment, including points collinear with it.
Vec3 segment_velocity(const Vec3& p1, const Vec3& p2, const Vec3& x) {
    const Vec3 r1 = x - p1;
    const Vec3 r2 = x - p2;
    const double l1 = norm(r1);
    const double l2 = norm(r2);
    const double denom = l1 * l2 * (l1 * l2 + dot(r1, r2));
    if (denom <= 0.0) return {0.0, 0.0, 0.0};  // on the segment line; caller guards the core
    return cross(r1, r2) * ((l1 + l2) / denom);
}

double resolve_core_radius(const FilamentCurve& c, double core_radius) {
    return core_radius >= 0.0 ? core_radius : 3.0 * c.mean_segment_length();
}

// Closest point on a triangle, used for the on-cut gate.
double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a;
    const Vec3 ac = c - a;
    const Vec3 ap = p - a;

    const double d1 = dot(ab, ap);
    const double d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return norm(ap);

    const Vec3 bp = p - b;
    const double d3 = dot(ab, bp);
    const double d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return norm(bp);

    const Vec3 cp = p - c;
    const double d5 = dot(ab, cp);
    const double d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return norm(cp);

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        const double t = d1 / (d1 - d3);
        return norm(ap - t * ab);
    }
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        const double t = d2 / (d2 - d6);
        return norm(ap - t * ac);
    }
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        const double t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return norm(bp - t * (c - b));
    }
    const Vec3 n = cross(ab, ac);
    return std::abs(dot(ap, n)) / norm(n);
}

// Van Oosterom-Strackee: signed solid angle of one oriented triangle.
double triangle_solid_angle(const Vec3& v0, const Vec3& v1, const Vec3& v2, const Vec3& x) {
    const Vec3 a = v0 - x;
    const Vec3 b = v1 - x;
    const Vec3 c = v2 - x;
    const double la = norm(a);
    const double lb = norm(b);
    const double lc = norm(c);
    const double numer = dot(a, cross(b, c));
    const double denom =
        la * lb * lc + dot(a, b) * lc + dot(b, c) * la + dot(c, a) * lb;
    return 2.0 * std::atan2(numer, denom);
}

struct MeshBounds {
    Vec3 center;
    double radius = 0.0;
};

MeshBounds mesh_bounds(const SeifertMesh& mesh) {
    MeshBounds b;
    for (const auto& v : mesh.vertices) b.center += v;
    b.center /= double(mesh.vertices.size());
    for (const auto& v : mesh.vertices) b.radius = std::max(b.radius, distance(v, b.center));
    return b;
}

double mesh_distance(const SeifertMesh& mesh, const Vec3& x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : mesh.triangles)
        best = std::min(best, point_triangle_distance(x, mesh.vertices[t[0]],
                                                      mesh.vertices[t[1]],
                                                      mesh.vertices[t[2]]));
    return best;
}

double solid_angle_sum(const SeifertMesh& mesh, const Vec3& x) {
    double omega = 0.0;
    for (const auto& t : mesh.triangles)
        omega += triangle_solid_angle(mesh.vertices[t[0]], mesh.vertices[t[1]],
                                      mesh.vertices[t[2]], x);
    return omega;
}

}  // namespace

void ProbeLoop::validate() const {
    if (points.size() < 16)
        throw InvalidArgument("probe loop: need at least 16 points");
    for (const auto& p : points)
        if (!is_finite(p)) throw InvalidArgument("probe loop: non-finite point");
}

Vec3 biot_savart_velocity(const Link& link, const Vec3& x, double core_radius) {
    link.validate();
    if (!is_finite(x)) throw InvalidArgument("biot_savart_velocity: non-finite point");

    Vec3 u;
    for (const auto& curve : link.curves) {
        const double eps = resolve_core_radius(curve, core_radius);
        if (curve.distance_to(x) < eps)
            throw EvaluationError(EvalReason::core_proximity,
                                  "biot_savart_velocity: point inside the filament core tube");
        const std::size_t nseg = curve.segment_count();
        for (std::size_t s = 0; s < nseg; ++s)
            u += segment_velocity(curve.segment_start(s), curve.segment_end(s), x);
    }
    return u * (link.gamma / kFourPi);
}

double circulation(const Link& link, const ProbeLoop& loop, double core_radius) {
    loop.validate();
    const std::size_t n = loop.points.size();
    std::vector<Vec3> u(n);
    for (std::size_t i = 0; i < n; ++i)
        u[i] = biot_savart_velocity(link, loop.points[i], core_radius);

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 dl = loop.points[(i + 1) % n] - loop.points[i];
        sum += 0.5 * dot(u[i] + u[(i + 1) % n], dl);
    }
    return sum;
}

int winding_number(const Link& link, const ProbeLoop& loop, double core_radius) {
    if (link.gamma == 0.0)
        throw InvalidArgument("winding_number: circulation constant is zero");
    const double w = circulation(link, loop, core_radius) / link.gamma;
    const double rounded = std::round(w);
    if (std::abs(w - rounded) > 0.05)
        throw EvaluationError(EvalReason::ill_conditioned_probe,
                              "winding_number: circulation is not close to an integer "
                              "multiple of gamma");
    return int(rounded);
}

double solid_angle(const SeifertMesh& mesh, const Vec3& x, double on_cut_tol) {
    const auto bounds = mesh_bounds(mesh);
    const double tol = on_cut_tol >= 0.0 ? on_cut_tol : 1e-9 * bounds.radius;
    if (distance(x, bounds.center) <= bounds.radius + tol) {
        if (mesh_distance(mesh, x) < tol)
            throw EvaluationError(EvalReason::on_cut,
                                  "solid_angle: evaluation point lies on the cut surface");
    }
    return solid_angle_sum(mesh, x);
}

double scalar_potential(const Link& link, const SeifertMesh& mesh, const Vec3& x,
                        double on_cut_tol) {
    link.validate();
    return -link.gamma / kFourPi * solid_angle(mesh, x, on_cut_tol);
}

double nodal_regularizer(const FilamentCurve& curve, int n, const Vec3& x) {
    if (n < 1) throw InvalidArgument("nodal_regularizer: n must be >= 1");

    const double on_filament_tol = 1e-12 * std::max(curve.total_length(), 1.0);
    if (curve.distance_to(x) <= on_filament_tol)
        return std::numeric_limits<double>::infinity();

    // Adaptive midpoint rule per segment: halve until the piece is short
    // relative to its distance from x.
    struct Quad {
        const Vec3& x;
        int n;
        double eval(const Vec3& a, const Vec3& b, int depth) const {
            const double len = distance(a, b);
            const Vec3 mid = 0.5 * (a + b);
            const double d = point_segment_distance(x, a, b);
            if (depth < 24 && len > 0.5 * d) {
                return eval(a, mid, depth + 1) + eval(mid, b, depth + 1);
            }
            return len / std::pow(distance(x, mid), double(n));
        }
    };
    const Quad quad{x, n};

    double sum = 0.0;
    const std::size_t nseg = curve.segment_count();
    for (std::size_t s = 0; s < nseg; ++s)
        sum += quad.eval(curve.segment_start(s), curve.segment_end(s), 0);
    return sum;
}

double nodal_regularizer(const Link& link, int n, const Vec3& x) {
    link.validate();
    double sum = 0.0;
    for (const auto& c : link.curves) {
        const double v = nodal_regularizer(c, n, x);
        if (std::isinf(v)) return v;
        sum += v;
    }
    return sum;
}

CutPotential::CutPotential(std::shared_ptr<const SeifertMesh> mesh, double gamma)
    : mesh_(std::move(mesh)), gamma_(gamma) {
    if (!mesh_) throw InvalidArgument("CutPotential: null mesh");
    mesh_->validate_orientation();
    const auto bounds = mesh_bounds(*mesh_);
    center_ = bounds.center;
    bound_radius_ = bounds.radius;
    cut_tol_ = 1e-9 * bounds.radius;
}

double CutPotential::solid_angle_sheet(const Vec3& x) const {
    Vec3 p = x;
    if (distance(p, center_) <= bound_radius_ + cut_tol_) {
        // Resolve on-cut points from the positive-normal side of the nearest
        // face; the offset is far below the grid scale, so the stored sheet
        // stays smooth up to the cut itself.
        double best = std::numeric_limits<double>::infinity();
        Vec3 best_normal;
        for (const auto& t : mesh_->triangles) {
            const Vec3& a = mesh_->vertices[t[0]];
            const Vec3& b = mesh_->vertices[t[1]];
            const Vec3& c = mesh_->vertices[t[2]];
            const double d = point_triangle_distance(p, a, b, c);
            if (d < best) {
                best = d;
                best_normal = cross(b - a, c - a);
            }
        }
        if (best < cut_tol_) p += (100.0 * cut_tol_) * normalized(best_normal);
    }
    return solid_angle_sum(*mesh_, p);
}

double CutPotential::phi(const Vec3& x) const {
    return -gamma_ / kFourPi * solid_angle_sheet(x);
}

}  // namespace qvx
