#pragma once

#include "qvortex/knot.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace qvx {

/// Oriented triangulated spanning surface used as the branch cut of the
/// multi-valued potential. Triangle winding fixes the surface orientation;
/// every interior edge must be traversed once in each direction.
struct SeifertMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;

    /// Throws GeometryError(inconsistent_orientation) if any interior edge is
    /// traversed twice in the same direction or shared by more than two
    /// triangles.
    void validate_orientation() const;

    /// Boundary edge cycles (edges used by exactly one triangle), each ordered
    /// along the surface orientation.
    std::vector<std::vector<std::uint32_t>> boundary_loops() const;

    /// Checks that the boundary cycles coincide with the link's curves within
    /// tol (two-sided polyline Hausdorff distance) and are traversed the same
    /// way. Throws GeometryError(boundary_mismatch).
    void validate_boundary(const Link& link, double tol) const;

    double bounding_radius() const;
    double total_area() const;
};

/// Flat spanning disk for a planar circle. The boundary ring reuses the circle
/// samples exactly; interior rings shrink toward the centroid. Orientation
/// follows the circle's right-hand circulation.
SeifertMesh disk_mesh(const FilamentCurve& circle, int rings);

/// ASCII OFF reader. Validates orientation; pass a link to also validate the
/// boundary match.
SeifertMesh load_seifert_mesh(const std::string& path);
SeifertMesh load_seifert_mesh(const std::string& path, const Link& link, double tol);

void write_off(const SeifertMesh& mesh, const std::string& path);

}  // namespace qvx
