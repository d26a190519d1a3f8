#include "qvortex/seifert.hpp"

#include "qvortex/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace qvx {

namespace {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

// Directed edge multiset of all triangles. A consistently oriented surface
// traverses every interior edge once per direction.
std::map<Edge, int> directed_edge_counts(const SeifertMesh& m) {
    std::map<Edge, int> counts;
    for (const auto& t : m.triangles) {
        counts[{t[0], t[1]}]++;
        counts[{t[1], t[2]}]++;
        counts[{t[2], t[0]}]++;
    }
    return counts;
}

double point_polyline_distance(const Vec3& p, const std::vector<Vec3>& poly, bool closed) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    const std::size_t nseg = closed ? n : n - 1;
    for (std::size_t s = 0; s < nseg; ++s)
        best = std::min(best, point_segment_distance(p, poly[s], poly[(s + 1) % n]));
    return best;
}

}  // namespace

void SeifertMesh::validate_orientation() const {
    if (vertices.size() < 3 || triangles.empty())
        throw GeometryError(GeometryReason::degenerate_input, "mesh: empty mesh");
    for (const auto& t : triangles) {
        for (auto v : t)
            if (v >= vertices.size())
                throw GeometryError(GeometryReason::degenerate_input,
                                    "mesh: triangle index out of range");
        if (t[0] == t[1] || t[1] == t[2] || t[2] == t[0])
            throw GeometryError(GeometryReason::degenerate_input,
                                "mesh: degenerate triangle");
    }

    const auto counts = directed_edge_counts(*this);
    for (const auto& [edge, count] : counts) {
        if (count > 1)
            throw GeometryError(GeometryReason::inconsistent_orientation,
                                "mesh: edge traversed twice in the same direction");
        auto rev = counts.find({edge.second, edge.first});
        const int total = count + (rev != counts.end() ? rev->second : 0);
        if (total > 2)
            throw GeometryError(GeometryReason::inconsistent_orientation,
                                "mesh: edge shared by more than two triangles");
    }
}

std::vector<std::vector<std::uint32_t>> SeifertMesh::boundary_loops() const {
    const auto counts = directed_edge_counts(*this);
    // Boundary edges appear in exactly one direction; walking them in that
    // direction yields the orientation the surface induces on its boundary.
    std::map<std::uint32_t, std::uint32_t> next;
    for (const auto& [edge, count] : counts) {
        (void)count;
        if (counts.find({edge.second, edge.first}) == counts.end()) {
            if (next.count(edge.first))
                throw GeometryError(GeometryReason::inconsistent_orientation,
                                    "mesh: boundary branches at a vertex");
            next[edge.first] = edge.second;
        }
    }

    std::vector<std::vector<std::uint32_t>> loops;
    std::map<std::uint32_t, bool> used;
    for (const auto& [start, _] : next) {
        if (used.count(start)) continue;
        std::vector<std::uint32_t> loop;
        std::uint32_t v = start;
        while (true) {
            loop.push_back(v);
            used[v] = true;
            auto it = next.find(v);
            if (it == next.end())
                throw GeometryError(GeometryReason::inconsistent_orientation,
                                    "mesh: boundary walk left the edge set");
            v = it->second;
            if (v == start) break;
            if (loop.size() > next.size())
                throw GeometryError(GeometryReason::inconsistent_orientation,
                                    "mesh: boundary does not close");
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

void SeifertMesh::validate_boundary(const Link& link, double tol) const {
    link.validate();
    for (const auto& c : link.curves)
        if (!c.closed())
            throw GeometryError(GeometryReason::boundary_mismatch,
                                "mesh: open filaments carry no mesh boundary");

    const auto loops = boundary_loops();
    if (loops.size() != link.curves.size())
        throw GeometryError(GeometryReason::boundary_mismatch,
                            "mesh: boundary loop count does not match link");

    std::vector<bool> curve_taken(link.curves.size(), false);
    for (const auto& loop : loops) {
        std::vector<Vec3> loop_pts(loop.size());
        for (std::size_t i = 0; i < loop.size(); ++i) loop_pts[i] = vertices[loop[i]];

        bool matched = false;
        for (std::size_t ci = 0; ci < link.curves.size() && !matched; ++ci) {
            if (curve_taken[ci]) continue;
            const auto& curve = link.curves[ci];

            double worst = 0.0;
            for (const auto& p : loop_pts) worst = std::max(worst, curve.distance_to(p));
            for (const auto& p : curve.points())
                worst = std::max(worst, point_polyline_distance(p, loop_pts, true));
            if (worst > tol) continue;

            // Same traversal direction: boundary edges must run along the
            // curve tangents, not against them.
            double along = 0.0;
            for (std::size_t i = 0; i < loop_pts.size(); ++i) {
                const Vec3 edge = loop_pts[(i + 1) % loop_pts.size()] - loop_pts[i];
                std::size_t nearest = 0;
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < curve.points().size(); ++j) {
                    const double d = distance(loop_pts[i], curve.points()[j]);
                    if (d < best) {
                        best = d;
                        nearest = j;
                    }
                }
                along += dot(edge, curve.tangents()[nearest]);
            }
            if (along <= 0.0)
                throw GeometryError(GeometryReason::boundary_mismatch,
                                    "mesh: boundary traversal opposes filament orientation");

            curve_taken[ci] = true;
            matched = true;
        }
        if (!matched)
            throw GeometryError(GeometryReason::boundary_mismatch,
                                "mesh: boundary loop does not match any filament within tolerance");
    }
}

double SeifertMesh::bounding_radius() const {
    Vec3 c;
    for (const auto& v : vertices) c += v;
    c /= double(vertices.size());
    double r = 0.0;
    for (const auto& v : vertices) r = std::max(r, distance(v, c));
    return r;
}

double SeifertMesh::total_area() const {
    double a = 0.0;
    for (const auto& t : triangles) {
        const Vec3 e1 = vertices[t[1]] - vertices[t[0]];
        const Vec3 e2 = vertices[t[2]] - vertices[t[0]];
        a += 0.5 * norm(cross(e1, e2));
    }
    return a;
}

SeifertMesh disk_mesh(const FilamentCurve& circle, int rings) {
    if (!circle.closed())
        throw GeometryError(GeometryReason::degenerate_input,
                            "disk_mesh: boundary curve must be closed");
    if (rings < 1) throw InvalidArgument("disk_mesh: rings must be >= 1");

    const auto& bpts = circle.points();
    const std::size_t n = bpts.size();
    const Vec3 center = circle.centroid();

    // Planarity gate: all points must lie in one plane through the centroid.
    Vec3 normal;
    for (std::size_t i = 0; i < n; ++i)
        normal += cross(bpts[i] - center, bpts[(i + 1) % n] - center);
    const double nlen = norm(normal);
    if (!(nlen > 0.0))
        throw GeometryError(GeometryReason::degenerate_input,
                            "disk_mesh: boundary encloses no area");
    normal /= nlen;
    double scale = 0.0, worst = 0.0;
    for (const auto& p : bpts) {
        scale = std::max(scale, distance(p, center));
        worst = std::max(worst, std::abs(dot(p - center, normal)));
    }
    if (worst > 1e-7 * scale)
        throw GeometryError(GeometryReason::non_planar,
                            "disk_mesh: boundary curve is not planar");

    SeifertMesh mesh;
    // Ring j holds the boundary shrunk toward the centroid; the last vertex is
    // the centroid itself.
    for (int j = 0; j < rings; ++j) {
        const double s = double(rings - j) / double(rings);
        for (std::size_t i = 0; i < n; ++i)
            mesh.vertices.push_back(center + s * (bpts[i] - center));
    }
    mesh.vertices.push_back(center);
    const std::uint32_t center_idx = std::uint32_t(mesh.vertices.size() - 1);

    auto ring_vertex = [&](int j, std::size_t i) {
        return std::uint32_t(std::size_t(j) * n + (i % n));
    };
    for (int j = 0; j + 1 < rings; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            mesh.triangles.push_back({ring_vertex(j, i), ring_vertex(j, i + 1),
                                      ring_vertex(j + 1, i)});
            mesh.triangles.push_back({ring_vertex(j, i + 1), ring_vertex(j + 1, i + 1),
                                      ring_vertex(j + 1, i)});
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        mesh.triangles.push_back({ring_vertex(rings - 1, i), ring_vertex(rings - 1, i + 1),
                                  center_idx});

    mesh.validate_orientation();
    return mesh;
}

SeifertMesh load_seifert_mesh(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError(IoReason::open_failed, "load_seifert_mesh: cannot open " + path);

    auto next_line = [&](std::string& line) {
        while (std::getline(is, line)) {
            const auto pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos) continue;
            if (line[pos] == '#') continue;
            return true;
        }
        return false;
    };

    std::string line;
    if (!next_line(line) || line.substr(0, 3) != "OFF")
        throw IoError(IoReason::bad_magic, "load_seifert_mesh: missing OFF header in " + path);

    if (!next_line(line))
        throw IoError(IoReason::truncated_payload, "load_seifert_mesh: missing counts in " + path);
    std::istringstream counts(line);
    long long nv = 0, nf = 0, ne = 0;
    if (!(counts >> nv >> nf >> ne) || nv < 3 || nf < 1)
        throw IoError(IoReason::malformed, "load_seifert_mesh: bad counts line in " + path);

    SeifertMesh mesh;
    mesh.vertices.reserve(std::size_t(nv));
    for (long long i = 0; i < nv; ++i) {
        if (!next_line(line))
            throw IoError(IoReason::truncated_payload,
                          "load_seifert_mesh: fewer vertices than declared in " + path);
        std::istringstream vs(line);
        Vec3 v;
        if (!(vs >> v.x >> v.y >> v.z))
            throw IoError(IoReason::malformed, "load_seifert_mesh: bad vertex line in " + path);
        mesh.vertices.push_back(v);
    }
    mesh.triangles.reserve(std::size_t(nf));
    for (long long i = 0; i < nf; ++i) {
        if (!next_line(line))
            throw IoError(IoReason::truncated_payload,
                          "load_seifert_mesh: fewer faces than declared in " + path);
        std::istringstream fs(line);
        long long arity = 0, a = 0, b = 0, c = 0;
        if (!(fs >> arity >> a >> b >> c) || arity != 3)
            throw IoError(IoReason::malformed,
                          "load_seifert_mesh: only triangle faces are supported in " + path);
        if (a < 0 || b < 0 || c < 0 || a >= nv || b >= nv || c >= nv)
            throw IoError(IoReason::malformed, "load_seifert_mesh: face index out of range in " + path);
        mesh.triangles.push_back({std::uint32_t(a), std::uint32_t(b), std::uint32_t(c)});
    }

    mesh.validate_orientation();
    return mesh;
}

SeifertMesh load_seifert_mesh(const std::string& path, const Link& link, double tol) {
    SeifertMesh mesh = load_seifert_mesh(path);
    mesh.validate_boundary(link, tol);
    return mesh;
}

void write_off(const SeifertMesh& mesh, const std::string& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError(IoReason::open_failed, "write_off: cannot open " + path);
    os << "OFF\n" << mesh.vertices.size() << " " << mesh.triangles.size() << " 0\n";
    char buf[96];
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x, v.y, v.z);
        os << buf;
    }
    for (const auto& t : mesh.triangles)
        os << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    if (!os) throw IoError(IoReason::write_failed, "write_off: write failed for " + path);
}

}  // namespace qvx
