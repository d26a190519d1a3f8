#include "qvortex/knot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qvx {

FilamentCurve FilamentCurve::from_points(std::vector<Vec3> points, bool closed) {
    if (points.size() < 8)
        throw GeometryError(GeometryReason::degenerate_input,
                            "filament: need at least 8 sample points");
    for (const auto& p : points)
        if (!is_finite(p))
            throw GeometryError(GeometryReason::degenerate_input,
                                "filament: non-finite sample point");

    FilamentCurve c;
    c.points_ = std::move(points);
    c.closed_ = closed;

    const std::size_t n = c.points_.size();
    const std::size_t nseg = closed ? n : n - 1;
    c.seg_lengths_.resize(nseg);
    for (std::size_t s = 0; s < nseg; ++s) {
        const double len = distance(c.points_[s], c.points_[(s + 1) % n]);
        if (!(len > 0.0))
            throw GeometryError(GeometryReason::degenerate_input,
                                "filament: consecutive sample points coincide");
        c.seg_lengths_[s] = len;
        c.total_length_ += len;
    }

    c.tangents_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 d;
        if (closed) {
            d = c.points_[(i + 1) % n] - c.points_[(i + n - 1) % n];
        } else if (i == 0) {
            d = c.points_[1] - c.points_[0];
        } else if (i == n - 1) {
            d = c.points_[n - 1] - c.points_[n - 2];
        } else {
            d = c.points_[i + 1] - c.points_[i - 1];
        }
        c.tangents_[i] = normalized(d);
    }
    return c;
}

Vec3 FilamentCurve::centroid() const {
    Vec3 s;
    for (const auto& p : points_) s += p;
    return s / double(points_.size());
}

double FilamentCurve::distance_to(const Vec3& x) const {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = points_.size();
    for (std::size_t s = 0; s < segment_count(); ++s)
        best = std::min(best, point_segment_distance(x, points_[s], points_[(s + 1) % n]));
    return best;
}

void Link::validate() const {
    if (curves.empty())
        throw GeometryError(GeometryReason::degenerate_input, "link: no curves");
    if (!std::isfinite(gamma))
        throw InvalidArgument("link: circulation constant must be finite");
}

double Link::min_mean_segment_length() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : curves) m = std::min(m, c.mean_segment_length());
    return m;
}

double Link::distance_to(const Vec3& x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : curves) best = std::min(best, c.distance_to(x));
    return best;
}

Vec3 Link::centroid() const {
    Vec3 s;
    std::size_t n = 0;
    for (const auto& c : curves) {
        for (const auto& p : c.points()) s += p;
        n += c.points().size();
    }
    return s / double(n);
}

FilamentCurve trefoil_curve(int samples) {
    if (samples < 64)
        throw InvalidArgument("trefoil_curve: need at least 64 samples");
    std::vector<Vec3> pts(samples);
    for (int i = 0; i < samples; ++i) {
        const double t = 2.0 * std::numbers::pi * double(i) / double(samples);
        pts[i] = {std::sin(t) + 2.0 * std::sin(2.0 * t),
                  std::cos(t) - 2.0 * std::cos(2.0 * t),
                  -std::sin(3.0 * t)};
    }
    return FilamentCurve::from_points(std::move(pts), /*closed=*/true);
}

FilamentCurve circle_curve(double radius, const Vec3& center, const Vec3& normal,
                           int samples) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw InvalidArgument("circle_curve: radius must be positive");
    if (samples < 8)
        throw InvalidArgument("circle_curve: need at least 8 samples");
    const double nlen = norm(normal);
    if (!(nlen > 0.0) || !std::isfinite(nlen))
        throw GeometryError(GeometryReason::degenerate_input,
                            "circle_curve: degenerate normal");

    const Vec3 n = normal / nlen;
    // Any unit vector not parallel to n seeds the in-plane frame.
    Vec3 seed = std::abs(n.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 e1 = normalized(seed - dot(seed, n) * n);
    const Vec3 e2 = cross(n, e1);  // e1 x e2 = n, so traversal is right-handed about n

    std::vector<Vec3> pts(samples);
    for (int i = 0; i < samples; ++i) {
        const double t = 2.0 * std::numbers::pi * double(i) / double(samples);
        pts[i] = center + radius * (std::cos(t) * e1 + std::sin(t) * e2);
    }
    return FilamentCurve::from_points(std::move(pts), /*closed=*/true);
}

FilamentCurve line_filament(const Vec3& direction, const Vec3& point,
                            double half_length, int samples) {
    const double dlen = norm(direction);
    if (!(dlen > 0.0) || !std::isfinite(dlen))
        throw GeometryError(GeometryReason::degenerate_input,
                            "line_filament: zero direction");
    if (!(half_length > 0.0))
        throw InvalidArgument("line_filament: half_length must be positive");
    if (samples < 8)
        throw InvalidArgument("line_filament: need at least 8 samples");

    const Vec3 d = direction / dlen;
    std::vector<Vec3> pts(samples);
    for (int i = 0; i < samples; ++i) {
        const double s = -half_length + 2.0 * half_length * double(i) / double(samples - 1);
        pts[i] = point + s * d;
    }
    return FilamentCurve::from_points(std::move(pts), /*closed=*/false);
}

FilamentCurve reparametrize_arclength(const FilamentCurve& c, int samples) {
    if (samples < 8)
        throw InvalidArgument("reparametrize_arclength: need at least 8 samples");

    const auto& pts = c.points();
    const std::size_t n = pts.size();
    const std::size_t nseg = c.segment_count();

    std::vector<double> cum(nseg + 1, 0.0);
    for (std::size_t s = 0; s < nseg; ++s) cum[s + 1] = cum[s] + c.segment_lengths()[s];
    const double total = cum[nseg];

    const std::size_t nout = std::size_t(samples);
    std::vector<Vec3> out(nout);
    std::size_t seg = 0;
    for (std::size_t i = 0; i < nout; ++i) {
        const double target = c.closed()
                                  ? total * double(i) / double(nout)
                                  : total * double(i) / double(nout - 1);
        while (seg + 1 < nseg && cum[seg + 1] < target) ++seg;
        const double local = (target - cum[seg]) / (cum[seg + 1] - cum[seg]);
        out[i] = pts[seg] + local * (pts[(seg + 1) % n] - pts[seg]);
    }
    // Interpolated points can coincide at the tail when the output is much
    // denser than the input; from_points rejects that, which is intended.
    return FilamentCurve::from_points(std::move(out), c.closed());
}

}  // namespace qvx
