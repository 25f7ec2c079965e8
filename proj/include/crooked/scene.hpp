#pragma once

// JSON scenes: tagged records of planes, half-spaces, representations and
// strip data, plus encoders for results printed by the command-line tool.
//
// Matrices are row-major arrays [a, b, c, d]; ideal points are [v1, v2];
// orientations are "+" (positive side on the left of a -> b) or "-".

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "crooked/ads.hpp"
#include "crooked/mink.hpp"
#include "crooked/schottky.hpp"
#include "crooked/transition.hpp"

namespace crooked {

using Json = nlohmann::json;

struct StemQuadrant {
    GeodesicLine line;  // oriented
};

using SceneObject =
    std::variant<CrookedPlane, HalfSpace, MinkCrookedPlane, StemQuadrant, RepPair, StripData, DomainData>;

struct SceneMetadata {
    std::uint64_t seed = 0;
    double tol = 1e-9;
};

struct Scene {
    std::vector<SceneObject> objects;
    SceneMetadata metadata;
};

// Throws InvalidInput on schema violations.
Scene scene_from_json(const Json& doc);
Json scene_to_json(const Scene& scene);
Scene read_scene(std::istream& in);
Scene load_scene(const std::string& path);

std::string object_tag(const SceneObject& object);

Json encode(const Mat2& m);
Json encode(const Isometry& g);
Json encode(const BoundaryPoint& p);
Json encode(const GeodesicLine& line);
Json encode(const KillingField& x);
Json encode(const CrookedPlane& plane);
Json encode(const Word& w);
Json encode(const RepPair& rep);
Json encode(const DomainData& domain);
Json encode(const StripData& strip);

Isometry decode_isometry(const Json& j);
GeodesicLine decode_line(const Json& j);
KillingField decode_field(const Json& j);
CrookedPlane decode_plane(const Json& j);
Word decode_word(const Json& j);
RepPair decode_rep(const Json& j);
DomainData decode_domain(const Json& j);
StripData decode_strip(const Json& j);

}  // namespace crooked
