#include "crooked/scene.hpp"

#include <cmath>
#include <fstream>
#include <istream>

namespace crooked {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) invalid(std::string("missing field '") + key + "'");
    return j.at(key);
}

double number(const Json& j) {
    if (!j.is_number()) invalid("expected a number, got " + j.dump());
    return j.get<double>();
}

Mat2 decode_mat(const Json& j) {
    if (j.is_array() && j.size() == 2 && j[0].is_array()) {
        if (j[0].size() != 2 || j[1].size() != 2) invalid("matrix rows must have two entries");
        return {number(j[0][0]), number(j[0][1]), number(j[1][0]), number(j[1][1])};
    }
    if (!j.is_array() || j.size() != 4) invalid("matrix must be [a, b, c, d], got " + j.dump());
    return {number(j[0]), number(j[1]), number(j[2]), number(j[3])};
}

BoundaryPoint decode_point(const Json& j) {
    if (!j.is_array() || j.size() != 2) invalid("ideal point must be [v1, v2], got " + j.dump());
    return BoundaryPoint(Vec2{number(j[0]), number(j[1])});
}

Orientation decode_orientation(const Json& j) {
    const auto text = j.get<std::string>();
    if (text == "+") return Orientation::PositiveLeft;
    if (text == "-" || text == "−") return Orientation::PositiveRight;
    invalid("orientation must be \"+\" or \"-\", got \"" + text + "\"");
}

PlaneSide decode_side(const Json& j) {
    const auto text = j.get<std::string>();
    if (text == "left") return PlaneSide::Left;
    if (text == "right") return PlaneSide::Right;
    invalid("side must be \"left\" or \"right\", got \"" + text + "\"");
}

const char* side_name(PlaneSide side) { return side == PlaneSide::Left ? "left" : "right"; }

GeodesicLine oriented(const Json& j, const char* what) {
    GeodesicLine line = decode_line(j);
    if (!line.orient) invalid(std::string(what) + " needs an oriented line");
    return line;
}

std::vector<Isometry> decode_isometries(const Json& j) {
    if (!j.is_array()) invalid("expected an array of matrices");
    std::vector<Isometry> out;
    for (const auto& m : j) out.push_back(decode_isometry(m));
    return out;
}

Json encode_isometries(const std::vector<Isometry>& gs) {
    Json out = Json::array();
    for (const auto& g : gs) out.push_back(encode(g));
    return out;
}

SceneObject decode_object(const Json& j) {
    const auto tag = field(j, "type").get<std::string>();
    if (tag == "crooked") return decode_plane(j);
    if (tag == "halfspace") {
        HalfSpace half{decode_plane(j)};
        if (!half.plane.line.orient) invalid("halfspace needs an oriented line");
        return half;
    }
    if (tag == "mink_crooked") {
        return MinkCrookedPlane{decode_side(field(j, "side")), decode_field(field(j, "v")), decode_line(field(j, "line"))};
    }
    if (tag == "stem_quadrant") return StemQuadrant{oriented(field(j, "line"), "stem_quadrant")};
    if (tag == "rep_pair") return decode_rep(j);
    if (tag == "strip_data") return decode_strip(j);
    if (tag == "domain_data") return decode_domain(j);
    invalid("unknown object type '" + tag + "'");
}

struct ObjectEncoder {
    Json operator()(const CrookedPlane& p) const {
        Json out = encode(p);
        out["type"] = "crooked";
        return out;
    }
    Json operator()(const HalfSpace& h) const {
        Json out = encode(h.plane);
        out["type"] = "halfspace";
        return out;
    }
    Json operator()(const MinkCrookedPlane& p) const {
        return {{"type", "mink_crooked"}, {"side", side_name(p.side)}, {"v", encode(p.v)}, {"line", encode(p.line)}};
    }
    Json operator()(const StemQuadrant& s) const { return {{"type", "stem_quadrant"}, {"line", encode(s.line)}}; }
    Json operator()(const RepPair& r) const {
        Json out = encode(r);
        out["type"] = "rep_pair";
        return out;
    }
    Json operator()(const StripData& s) const {
        Json out = encode(s);
        out["type"] = "strip_data";
        return out;
    }
    Json operator()(const DomainData& d) const {
        Json out = encode(d);
        out["type"] = "domain_data";
        return out;
    }
};

}  // namespace

Json encode(const Mat2& m) { return Json::array({m.a, m.b, m.c, m.d}); }
Json encode(const Isometry& g) { return encode(g.matrix()); }
Json encode(const BoundaryPoint& p) { return Json::array({p.vec().x, p.vec().y}); }

Json encode(const GeodesicLine& line) {
    Json out{{"a", encode(line.a)}, {"b", encode(line.b)}};
    if (line.orient) out["orientation"] = *line.orient == Orientation::PositiveLeft ? "+" : "-";
    return out;
}

Json encode(const KillingField& x) { return encode(x.matrix()); }

Json encode(const CrookedPlane& plane) {
    return {{"side", side_name(plane.side)}, {"g", encode(plane.g)}, {"line", encode(plane.line)}};
}

Json encode(const Word& w) { return Json(w.letters()); }

Json encode(const RepPair& rep) { return {{"j", encode_isometries(rep.j)}, {"rho", encode_isometries(rep.rho)}}; }

Json encode(const DomainData& domain) {
    Json arcs = Json::array();
    for (const auto& arc : domain.arcs) arcs.push_back({{"line", encode(arc.line)}, {"g", encode(arc.g)}});
    Json pairings = Json::array();
    for (const auto& p : domain.pairings) {
        pairings.push_back({{"generator", p.generator}, {"from", p.from}, {"to", p.to}});
    }
    return {{"arcs", arcs}, {"pairings", pairings}};
}

Json encode(const StripData& strip) {
    Json arcs = Json::array();
    for (const auto& arc : strip.arcs) arcs.push_back({{"line", encode(arc.line)}, {"v", encode(arc.v)}});
    Json adjacency = Json::array();
    for (const auto& [a, b] : strip.adjacency) adjacency.push_back({a, b});
    return {{"arcs", arcs}, {"adjacency", adjacency}};
}

Isometry decode_isometry(const Json& j) {
    const Mat2 m = decode_mat(j);
    const double det = m.det();
    if (!(det > 0.0)) invalid("matrix must have positive determinant, got " + j.dump());
    // Keep already unimodular input bit-exact.
    if (std::abs(det - 1.0) <= 1e-14) return Isometry::from_unimodular(m);
    return Isometry(m);
}

GeodesicLine decode_line(const Json& j) {
    std::optional<Orientation> orient;
    if (j.is_object() && j.contains("orientation")) orient = decode_orientation(j.at("orientation"));
    try {
        return GeodesicLine(decode_point(field(j, "a")), decode_point(field(j, "b")), orient);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidInput) throw;
        invalid(std::string("bad line: ") + e.what());
    }
}

KillingField decode_field(const Json& j) {
    try {
        if (j.is_array() && j.size() == 3 && j[0].is_number()) {
            return KillingField::from_coords({number(j[0]), number(j[1]), number(j[2])});
        }
        return KillingField(decode_mat(j));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidInput) throw;
        invalid(std::string("bad Killing field: ") + e.what());
    }
}

CrookedPlane decode_plane(const Json& j) {
    return {decode_side(field(j, "side")), decode_isometry(field(j, "g")), decode_line(field(j, "line"))};
}

Word decode_word(const Json& j) {
    if (!j.is_array()) invalid("word must be an array of nonzero integers");
    try {
        return Word(j.get<std::vector<int>>());
    } catch (const Error& e) {
        invalid(std::string("bad word: ") + e.what());
    }
}

RepPair decode_rep(const Json& j) {
    RepPair rep{decode_isometries(field(j, "j")), decode_isometries(field(j, "rho"))};
    if (rep.j.size() != rep.rho.size() || rep.j.empty()) invalid("rep_pair needs equally many j and rho generators");
    return rep;
}

DomainData decode_domain(const Json& j) {
    DomainData domain;
    for (const auto& arc : field(j, "arcs")) {
        domain.arcs.push_back({oriented(field(arc, "line"), "domain arc"), decode_isometry(field(arc, "g"))});
    }
    for (const auto& p : field(j, "pairings")) {
        domain.pairings.push_back({field(p, "generator").get<int>(), field(p, "from").get<int>(), field(p, "to").get<int>()});
    }
    return domain;
}

StripData decode_strip(const Json& j) {
    StripData strip;
    for (const auto& arc : field(j, "arcs")) {
        strip.arcs.push_back({decode_line(field(arc, "line")), decode_field(field(arc, "v"))});
    }
    const int n = static_cast<int>(strip.arcs.size());
    for (const auto& pair : field(j, "adjacency")) {
        const auto ab = pair.get<std::vector<int>>();
        if (ab.size() != 2 || ab[0] < 0 || ab[1] < 0 || ab[0] >= n || ab[1] >= n) {
            invalid("adjacency entries must be index pairs, got " + pair.dump());
        }
        strip.adjacency.emplace_back(ab[0], ab[1]);
    }
    return strip;
}

std::string object_tag(const SceneObject& object) { return std::visit(ObjectEncoder{}, object).at("type"); }

Scene scene_from_json(const Json& doc) {
    try {
        Scene scene;
        if (doc.contains("metadata")) {
            const auto& meta = doc.at("metadata");
            scene.metadata.seed = meta.value("seed", std::uint64_t{0});
            scene.metadata.tol = meta.value("tol", 1e-9);
        }
        for (const auto& obj : field(doc, "objects")) scene.objects.push_back(decode_object(obj));
        return scene;
    } catch (const Json::exception& e) {
        invalid(std::string("malformed scene: ") + e.what());
    }
}

Json scene_to_json(const Scene& scene) {
    Json objects = Json::array();
    for (const auto& obj : scene.objects) objects.push_back(std::visit(ObjectEncoder{}, obj));
    return {{"metadata", {{"seed", scene.metadata.seed}, {"tol", scene.metadata.tol}}}, {"objects", objects}};
}

Scene read_scene(std::istream& in) {
    Json doc;
    try {
        in >> doc;
    } catch (const Json::exception& e) {
        invalid(std::string("unparsable JSON: ") + e.what());
    }
    return scene_from_json(doc);
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) invalid("cannot open '" + path + "'");
    return read_scene(in);
}

}  // namespace crooked
