#pragma once

#include "qvortex/errors.hpp"
#include "qvortex/vec3.hpp"

#include <vector>

namespace qvx {

/// Oriented space curve sampled as a polyline. Tangents follow the right-hand
/// rule of the circulation the curve carries. Immutable after construction.
class FilamentCurve {
public:
    /// Validates (>= 8 points, consecutive points distinct) and caches
    /// tangents and segment lengths. For closed curves the last point connects
    /// back to the first; the sample list must not repeat it.
    static FilamentCurve from_points(std::vector<Vec3> points, bool closed);

    const std::vector<Vec3>& points() const { return points_; }
    bool closed() const { return closed_; }

    /// Unit tangents at the sample points (central differences, one-sided at
    /// open ends).
    const std::vector<Vec3>& tangents() const { return tangents_; }
    /// Length of segment i -> i+1 (closed curves wrap).
    const std::vector<double>& segment_lengths() const { return seg_lengths_; }

    std::size_t segment_count() const {
        return closed_ ? points_.size() : points_.size() - 1;
    }
    Vec3 segment_start(std::size_t s) const { return points_[s]; }
    Vec3 segment_end(std::size_t s) const {
        return points_[(s + 1) % points_.size()];
    }

    double total_length() const { return total_length_; }
    double mean_segment_length() const {
        return total_length_ / double(segment_count());
    }
    Vec3 centroid() const;

    /// Distance from x to the polyline.
    double distance_to(const Vec3& x) const;

private:
    FilamentCurve() = default;
    std::vector<Vec3> points_;
    bool closed_ = true;
    std::vector<Vec3> tangents_;
    std::vector<double> seg_lengths_;
    double total_length_ = 0.0;
};

/// One or more filaments sharing a single circulation constant.
struct Link {
    std::vector<FilamentCurve> curves;
    double gamma = 0.0;

    void validate() const;
    double min_mean_segment_length() const;
    double distance_to(const Vec3& x) const;
    Vec3 centroid() const;
};

/// Closed trefoil sampled uniformly in the parameter t over [0, 2pi):
///   x = sin t + 2 sin 2t,  y = cos t - 2 cos 2t,  z = -sin 3t.
FilamentCurve trefoil_curve(int samples);

/// Planar circle traversed right-handedly about `normal`.
FilamentCurve circle_curve(double radius, const Vec3& center, const Vec3& normal,
                           int samples);

/// Open straight filament from point - half_length*dir to point + half_length*dir,
/// a truncation of the doubly infinite line. Keep half_length >= 100x any probe
/// distance; the far-field truncation error scales as (probe/half_length)^2.
FilamentCurve line_filament(const Vec3& direction, const Vec3& point,
                            double half_length, int samples);

/// Resample so points are uniformly spaced in cumulative arclength.
FilamentCurve reparametrize_arclength(const FilamentCurve& c, int samples);

}  // namespace qvx
