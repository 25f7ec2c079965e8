#pragma once

// Triangulated crooked planes of AdS^3 drawn in affine charts of P^3(R),
// with OBJ and SVG writers and a minimal OBJ reader.

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "crooked/ads.hpp"
#include "crooked/transition.hpp"

namespace crooked {

// Y4: (y1, y2, y3) / y4, where the two ideal points of the stem closure lie
// at infinity. Y1: (y2, y3, y4) / y1, where the stem center e lies at infinity.
enum class Chart { Y4, Y1 };

// Vertices whose chart denominator is below this fraction of the unit
// representative are clipped.
inline constexpr double kChartClip = 1e-3;

// Unnormalized [y1 : y2 : y3 : y4] of a 2x2 matrix, linear in its entries.
Eigen::Vector4d homogeneous_coords(const Mat2& m);
// Throws ChartOverflow when the chart denominator vanishes.
Eigen::Vector3d chart_coords(const Eigen::Vector4d& y, Chart chart);
ProjPoint chart_inverse(const Eigen::Vector3d& p, Chart chart);
// Inverse of embed_I. Throws DomainError off the open set y1^2 + y2^2 < y3^2 + y4^2.
Isometry isometry_from_proj(const ProjPoint& p);

struct MeshPart {
    std::string name;  // stem, wing_plus, wing_minus, stem_boundary
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::vector<int>> polylines;
};

struct Mesh {
    Chart chart = Chart::Y4;
    std::vector<MeshPart> parts;
    std::size_t generated = 0;  // vertices before clipping
    std::size_t clipped = 0;
    // Ideal points where the closures of the two stem boundary lines meet
    // the boundary of AdS^3.
    std::array<ProjPoint, 2> tangency{ProjPoint(Eigen::Vector4d::UnitX()), ProjPoint(Eigen::Vector4d::UnitX())};

    const MeshPart& part(const std::string& name) const;
    std::size_t vertex_count() const;
};

// Vertices generated at resolution res before clipping:
// stem 2 res^2, wings 2 res (2 res - 1), boundary lines 2 (2 res - 1).
std::size_t render_vertex_count(int res);

// Throws InvalidInput for res < 2 and ChartOverflow when every vertex is clipped.
Mesh render_crooked(const CrookedPlane& plane, Chart chart, int res);

// One object and group per part; faces and polylines use global 1-based indices.
void write_obj(const Mesh& mesh, std::ostream& out);
// Intersection of the mesh with the plane where the third chart coordinate equals z.
void write_svg(const Mesh& mesh, std::ostream& out, double z = 0.0);

struct ObjObject {
    std::string name;
    std::vector<std::array<int, 3>> faces;  // 0-based global indices
    std::vector<std::vector<int>> lines;
};

struct ObjFile {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<ObjObject> objects;
};

// Reads v, o, f and l records. Throws InvalidInput on malformed input or
// out-of-range indices.
ObjFile read_obj(std::istream& in);

}  // namespace crooked
