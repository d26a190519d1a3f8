#pragma once

#include "qvortex/knot.hpp"
#include "qvortex/seifert.hpp"

#include <memory>

namespace qvx {

/// Closed polyline along which circulation is measured. Must stay farther from
/// every filament than the evaluation core radius.
struct ProbeLoop {
    std::vector<Vec3> points;

    void validate() const;
};

/// Velocity induced at x by all filaments of the link:
///   u(x) = Gamma/(4 pi) * sum over segments of ds x (x - R)/|x - R|^3,
/// with each straight segment integrated in closed form. Evaluation closer to
/// a filament than core_radius (default 3x that curve's mean sample spacing)
/// raises EvaluationError(core_proximity).
Vec3 biot_savart_velocity(const Link& link, const Vec3& x, double core_radius = -1.0);

/// Trapezoidal line integral of the induced velocity along the probe loop.
double circulation(const Link& link, const ProbeLoop& loop, double core_radius = -1.0);

/// Nearest integer to circulation/gamma. Rejects probes whose ratio sits more
/// than 0.05 from an integer.
int winding_number(const Link& link, const ProbeLoop& loop, double core_radius = -1.0);

/// Signed solid angle of the oriented mesh seen from x, one exact per-triangle
/// term per face. Points within on_cut_tol of the surface (default 1e-9 times
/// the mesh bounding radius) raise EvaluationError(on_cut).
double solid_angle(const SeifertMesh& mesh, const Vec3& x, double on_cut_tol = -1.0);

/// phi_f(x) = -Gamma/(4 pi) * Omega(x); single-valued away from the cut.
double scalar_potential(const Link& link, const SeifertMesh& mesh, const Vec3& x,
                        double on_cut_tol = -1.0);

/// Arclength integral of |x - R(s)|^-n along the curve. Returns +infinity when
/// x lies on the filament itself; that divergence is what pins the nodal line.
double nodal_regularizer(const FilamentCurve& curve, int n, const Vec3& x);
double nodal_regularizer(const Link& link, int n, const Vec3& x);

/// Reusable cut-potential evaluator for grid assembly. Points that land
/// exactly on the cut are resolved from the positive-normal side, so the
/// stored reference sheet is well defined everywhere off the filament.
class CutPotential {
public:
    CutPotential(std::shared_ptr<const SeifertMesh> mesh, double gamma);

    double solid_angle_sheet(const Vec3& x) const;
    double phi(const Vec3& x) const;  // -gamma/(4 pi) * solid_angle_sheet

    double gamma() const { return gamma_; }
    const SeifertMesh& mesh() const { return *mesh_; }

private:
    std::shared_ptr<const SeifertMesh> mesh_;
    double gamma_ = 0.0;
    Vec3 center_;
    double bound_radius_ = 0.0;
    double cut_tol_ = 0.0;
};

}  // namespace qvx
