#include "crooked/render.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace crooked {

namespace {

// Parameter window: |u|, |w|, |tau|, |b| <= kExtent on the stem and its
// boundary lines, wing translation length in [0, kWingLength].
constexpr double kExtent = 4.0;
constexpr double kWingLength = 4.0;

int denominator_index(Chart chart) { return chart == Chart::Y4 ? 3 : 0; }

const char* chart_name(Chart chart) { return chart == Chart::Y4 ? "y4" : "y1"; }

struct Placed {
    Eigen::Vector3d pos;
    int sign = 0;  // 0 when clipped
};

// Maps left-plane elements over (0, inf) onto the plane and into the chart.
class Placer {
public:
    Placer(const CrookedPlane& plane, Chart chart)
        : plane_(plane), chart_(chart), frame_(line_frame(plane.line)), frame_inv_(frame_.inverse()) {}

    Placed place(const Mat2& local) const {
        Isometry u(local);
        if (plane_.side == PlaneSide::Right) u = u.inverse();
        const Isometry world = plane_.g * frame_ * u * frame_inv_;
        if (!crooked_contains(plane_, world)) throw Error(ErrorCode::DomainError, "mesh vertex off the plane");
        const Eigen::Vector4d y = homogeneous_coords(world.matrix()).normalized();
        const double den = y[denominator_index(chart_)];
        if (std::abs(den) < kChartClip) return {};
        return {chart_coords(y, chart_), den > 0 ? 1 : -1};
    }

    ProjPoint limit_point(const Mat2& nilpotent) const {
        return ProjPoint(homogeneous_coords(plane_.g.matrix() * frame_.matrix() * nilpotent * frame_inv_.matrix()));
    }

private:
    const CrookedPlane& plane_;
    Chart chart_;
    Isometry frame_;
    Isometry frame_inv_;
};

class MeshBuilder {
public:
    MeshBuilder(const Placer& placer, Mesh& mesh) : placer_(placer), mesh_(mesh) {}

    // Row-major grid of local elements; triangles whose vertices are all kept
    // and lie on one side of the plane at infinity.
    void add_grid(MeshPart& part, const std::vector<std::vector<Mat2>>& grid) {
        const std::size_t rows = grid.size();
        const std::size_t cols = grid.front().size();
        std::vector<int> index(rows * cols, -1);
        std::vector<int> sign(rows * cols, 0);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                const auto k = i * cols + j;
                std::tie(index[k], sign[k]) = add_vertex(part, grid[i][j]);
            }
        }
        auto try_triangle = [&](std::size_t p, std::size_t q, std::size_t r) {
            if (index[p] < 0 || index[q] < 0 || index[r] < 0) return;
            if (sign[p] != sign[q] || sign[p] != sign[r]) return;
            part.triangles.push_back({index[p], index[q], index[r]});
        };
        for (std::size_t i = 0; i + 1 < rows; ++i) {
            for (std::size_t j = 0; j + 1 < cols; ++j) {
                const auto k = i * cols + j;
                try_triangle(k, k + cols, k + cols + 1);
                try_triangle(k, k + cols + 1, k + 1);
            }
        }
    }

    // Split into runs of kept vertices on one side of the plane at infinity.
    void add_polyline(MeshPart& part, const std::vector<Mat2>& nodes) {
        std::vector<int> run;
        int run_sign = 0;
        auto flush = [&] {
            if (run.size() >= 2) part.polylines.push_back(run);
            run.clear();
        };
        for (const auto& node : nodes) {
            const auto [idx, sign] = add_vertex(part, node);
            if (idx < 0 || (!run.empty() && sign != run_sign)) flush();
            if (idx >= 0) {
                run.push_back(idx);
                run_sign = sign;
            }
        }
        flush();
    }

private:
    std::pair<int, int> add_vertex(MeshPart& part, const Mat2& local) {
        ++mesh_.generated;
        const Placed placed = placer_.place(local);
        if (placed.sign == 0) {
            ++mesh_.clipped;
            return {-1, 0};
        }
        part.vertices.push_back(placed.pos);
        return {static_cast<int>(part.vertices.size()) - 1, placed.sign};
    }

    const Placer& placer_;
    Mesh& mesh_;
};

std::vector<double> uniform_nodes(double lo, double hi, int count) {
    std::vector<double> out(count);
    for (int k = 0; k < count; ++k) out[k] = lo + (hi - lo) * k / (count - 1);
    return out;
}

std::vector<std::vector<Mat2>> stem_quadrant(int res, double sign) {
    const auto nodes = uniform_nodes(0.0, kExtent, res);
    std::vector<std::vector<Mat2>> grid(res, std::vector<Mat2>(res));
    for (int i = 0; i < res; ++i) {
        for (int j = 0; j < res; ++j) grid[i][j] = Mat2{1.0, sign * nodes[i], -sign * nodes[j], 1.0};
    }
    return grid;
}

std::vector<std::vector<Mat2>> wing(int res, bool plus) {
    const auto lengths = uniform_nodes(0.0, kWingLength, res);
    const auto offsets = uniform_nodes(-kExtent, kExtent, 2 * res - 1);
    std::vector<std::vector<Mat2>> grid(lengths.size(), std::vector<Mat2>(offsets.size()));
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        const double big = std::exp(lengths[i] / 2);
        for (std::size_t j = 0; j < offsets.size(); ++j) {
            grid[i][j] = plus ? Mat2{big, offsets[j], 0.0, 1.0 / big} : Mat2{1.0 / big, 0.0, offsets[j], big};
        }
    }
    return grid;
}

std::vector<Mat2> boundary_line(int res, bool upper) {
    std::vector<Mat2> out;
    for (double tau : uniform_nodes(-kExtent, kExtent, 2 * res - 1)) {
        out.push_back(upper ? Mat2{1.0, tau, 0.0, 1.0} : Mat2{1.0, 0.0, tau, 1.0});
    }
    return out;
}

const char* stratum_color(const std::string& name) {
    if (name == "stem") return "#c0392b";
    if (name == "wing_plus") return "#2e86c1";
    if (name == "wing_minus") return "#27ae60";
    return "#000000";
}

int parse_index(const std::string& token, std::size_t vertex_count) {
    const std::string head = token.substr(0, token.find('/'));
    int idx = 0;
    try {
        std::size_t used = 0;
        idx = std::stoi(head, &used);
        if (used != head.size()) throw std::invalid_argument(head);
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidInput, "bad OBJ index '" + token + "'");
    }
    const long resolved = idx > 0 ? idx - 1L : static_cast<long>(vertex_count) + idx;
    if (idx == 0 || resolved < 0 || resolved >= static_cast<long>(vertex_count)) {
        throw Error(ErrorCode::InvalidInput, "OBJ index out of range '" + token + "'");
    }
    return static_cast<int>(resolved);
}

}  // namespace

Eigen::Vector4d homogeneous_coords(const Mat2& m) {
    return {(m.a - m.d) / 2.0, (m.b + m.c) / 2.0, (m.c - m.b) / 2.0, (m.a + m.d) / 2.0};
}

Eigen::Vector3d chart_coords(const Eigen::Vector4d& y, Chart chart) {
    const double den = y[denominator_index(chart)];
    if (den == 0.0) throw Error(ErrorCode::ChartOverflow, std::string("point at infinity of chart ") + chart_name(chart));
    const Eigen::Vector3d out = chart == Chart::Y4 ? Eigen::Vector3d(y[0], y[1], y[2]) / den
                                                   : Eigen::Vector3d(y[1], y[2], y[3]) / den;
    if (!out.allFinite()) throw Error(ErrorCode::ChartOverflow, "chart coordinates overflow");
    return out;
}

ProjPoint chart_inverse(const Eigen::Vector3d& p, Chart chart) {
    return ProjPoint(chart == Chart::Y4 ? Eigen::Vector4d(p[0], p[1], p[2], 1.0)
                                        : Eigen::Vector4d(1.0, p[0], p[1], p[2]));
}

Isometry isometry_from_proj(const ProjPoint& p) {
    const Eigen::Vector4d& y = p.coords();
    return Isometry(Mat2{y[0] + y[3], y[1] - y[2], y[1] + y[2], y[3] - y[0]});
}

const MeshPart& Mesh::part(const std::string& name) const {
    const auto it = std::find_if(parts.begin(), parts.end(), [&](const MeshPart& p) { return p.name == name; });
    if (it == parts.end()) throw Error(ErrorCode::InvalidInput, "no mesh part '" + name + "'");
    return *it;
}

std::size_t Mesh::vertex_count() const {
    std::size_t total = 0;
    for (const auto& p : parts) total += p.vertices.size();
    return total;
}

std::size_t render_vertex_count(int res) {
    const auto r = static_cast<std::size_t>(res);
    return 2 * r * r + 2 * r * (2 * r - 1) + 2 * (2 * r - 1);
}

Mesh render_crooked(const CrookedPlane& plane, Chart chart, int res) {
    if (res < 2) throw Error(ErrorCode::InvalidInput, "resolution must be at least 2");
    Mesh mesh;
    mesh.chart = chart;
    const Placer placer(plane, chart);
    MeshBuilder builder(placer, mesh);

    MeshPart stem{"stem", {}, {}, {}};
    builder.add_grid(stem, stem_quadrant(res, 1.0));
    builder.add_grid(stem, stem_quadrant(res, -1.0));
    MeshPart wing_plus{"wing_plus", {}, {}, {}};
    builder.add_grid(wing_plus, wing(res, true));
    MeshPart wing_minus{"wing_minus", {}, {}, {}};
    builder.add_grid(wing_minus, wing(res, false));
    MeshPart boundary{"stem_boundary", {}, {}, {}};
    builder.add_polyline(boundary, boundary_line(res, true));
    builder.add_polyline(boundary, boundary_line(res, false));
    mesh.parts = {std::move(stem), std::move(wing_plus), std::move(wing_minus), std::move(boundary)};

    if (mesh.clipped == mesh.generated) {
        throw Error(ErrorCode::ChartOverflow, std::string("every vertex lies at infinity of chart ") + chart_name(chart));
    }
    mesh.tangency = {placer.limit_point(Mat2{0.0, 1.0, 0.0, 0.0}), placer.limit_point(Mat2{0.0, 0.0, 1.0, 0.0})};
    return mesh;
}

void write_obj(const Mesh& mesh, std::ostream& out) {
    out << "# crooked plane in chart " << chart_name(mesh.chart) << ", " << mesh.clipped << " of " << mesh.generated
        << " vertices clipped\n";
    out << std::setprecision(17);
    std::size_t offset = 1;
    for (const auto& part : mesh.parts) {
        out << "o " << part.name << "\ng " << part.name << '\n';
        for (const auto& v : part.vertices) out << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
        for (const auto& t : part.triangles) {
            out << "f " << t[0] + offset << ' ' << t[1] + offset << ' ' << t[2] + offset << '\n';
        }
        for (const auto& line : part.polylines) {
            out << 'l';
            for (int idx : line) out << ' ' << idx + offset;
            out << '\n';
        }
        offset += part.vertices.size();
    }
}

void write_svg(const Mesh& mesh, std::ostream& out, double z) {
    struct Segment {
        Eigen::Vector2d p, q;
    };
    std::map<std::string, std::vector<Segment>> segments;
    std::map<std::string, std::vector<Eigen::Vector2d>> markers;
    auto crossing = [z](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
        const double s = (z - a[2]) / (b[2] - a[2]);
        return Eigen::Vector2d(a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]));
    };
    auto straddles = [z](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
        return (a[2] - z) * (b[2] - z) < 0.0;
    };

    for (const auto& part : mesh.parts) {
        for (const auto& t : part.triangles) {
            std::vector<Eigen::Vector2d> hits;
            for (int e = 0; e < 3; ++e) {
                const auto& a = part.vertices[t[e]];
                const auto& b = part.vertices[t[(e + 1) % 3]];
                if (a[2] == z) hits.emplace_back(a[0], a[1]);
                if (straddles(a, b)) hits.push_back(crossing(a, b));
            }
            if (hits.size() >= 2) segments[part.name].push_back({hits[0], hits[1]});
        }
        for (const auto& line : part.polylines) {
            for (std::size_t k = 0; k + 1 < line.size(); ++k) {
                const auto& a = part.vertices[line[k]];
                const auto& b = part.vertices[line[k + 1]];
                if (straddles(a, b)) markers[part.name].push_back(crossing(a, b));
            }
        }
    }

    Eigen::Vector2d lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
    Eigen::Vector2d hi = -lo;
    auto extend = [&](const Eigen::Vector2d& p) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    };
    for (const auto& [name, segs] : segments) {
        for (const auto& s : segs) {
            extend(s.p);
            extend(s.q);
        }
    }
    for (const auto& [name, pts] : markers) {
        for (const auto& p : pts) extend(p);
    }
    if (!lo.allFinite()) {
        lo = Eigen::Vector2d(-1.0, -1.0);
        hi = Eigen::Vector2d(1.0, 1.0);
    }
    const double pad = 0.05 * std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-9});
    lo.array() -= pad;
    hi.array() += pad;
    const double stroke = (hi - lo).maxCoeff() / 400.0;

    out << std::setprecision(10);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << lo[0] << ' ' << -hi[1] << ' ' << hi[0] - lo[0]
        << ' ' << hi[1] - lo[1] << "\">\n";
    out << "<!-- chart " << chart_name(mesh.chart) << ", slice z = " << z << " -->\n";
    for (const auto& part : mesh.parts) {
        out << "<g id=\"" << part.name << "\" stroke=\"" << stratum_color(part.name) << "\" fill=\""
            << stratum_color(part.name) << "\" stroke-width=\"" << stroke << "\">\n";
        for (const auto& s : segments[part.name]) {
            out << "<line x1=\"" << s.p[0] << "\" y1=\"" << -s.p[1] << "\" x2=\"" << s.q[0] << "\" y2=\"" << -s.q[1]
                << "\"/>\n";
        }
        for (const auto& p : markers[part.name]) {
            out << "<circle cx=\"" << p[0] << "\" cy=\"" << -p[1] << "\" r=\"" << 3 * stroke << "\"/>\n";
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
}

ObjFile read_obj(std::istream& in) {
    ObjFile obj;
    std::string line;
    auto current = [&]() -> ObjObject& {
        if (obj.objects.empty()) obj.objects.push_back({"default", {}, {}});
        return obj.objects.back();
    };
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string tag;
        if (!(fields >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Eigen::Vector3d v;
            if (!(fields >> v[0] >> v[1] >> v[2])) throw Error(ErrorCode::InvalidInput, "bad OBJ vertex: " + line);
            obj.vertices.push_back(v);
        } else if (tag == "o") {
            std::string name;
            fields >> name;
            obj.objects.push_back({name, {}, {}});
        } else if (tag == "f" || tag == "l") {
            std::vector<int> ids;
            std::string token;
            while (fields >> token) ids.push_back(parse_index(token, obj.vertices.size()));
            if (tag == "f") {
                if (ids.size() < 3) throw Error(ErrorCode::InvalidInput, "OBJ face with fewer than 3 vertices");
                for (std::size_t k = 1; k + 1 < ids.size(); ++k) current().faces.push_back({ids[0], ids[k], ids[k + 1]});
            } else {
                if (ids.size() < 2) throw Error(ErrorCode::InvalidInput, "OBJ line with fewer than 2 vertices");
                current().lines.push_back(ids);
            }
        }
    }
    return obj;
}

}  // namespace crooked
