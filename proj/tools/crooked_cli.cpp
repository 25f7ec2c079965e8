// Command-line front end: disjointness checks, decompositions, Schottky
// domains, obstruction certificates, transition tables and rendering.
//
// Exit codes: 0 success, 2 criterion-negative result, 1 error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "crooked/ads.hpp"
#include "crooked/mink.hpp"
#include "crooked/render.hpp"
#include "crooked/scene.hpp"
#include "crooked/schottky.hpp"
#include "crooked/transition.hpp"

namespace {

using namespace crooked;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kNegative = 2;

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
};

std::uint64_t effective_seed(const GlobalOptions& opts, const Scene& scene) {
    return opts.seed.value_or(scene.metadata.seed);
}

double effective_tol(const GlobalOptions& opts, const Scene& scene) { return opts.tol.value_or(scene.metadata.tol); }

void emit(const Json& doc) { std::cout << doc.dump(2) << '\n'; }

template <typename T>
std::vector<std::pair<int, T>> objects_of(const Scene& scene) {
    std::vector<std::pair<int, T>> out;
    for (std::size_t k = 0; k < scene.objects.size(); ++k) {
        if (const auto* obj = std::get_if<T>(&scene.objects[k])) out.emplace_back(static_cast<int>(k), *obj);
    }
    return out;
}

template <typename T>
T first_object(const Scene& scene, const char* what) {
    const auto found = objects_of<T>(scene);
    if (found.empty()) throw Error(ErrorCode::InvalidInput, std::string("scene has no ") + what + " object");
    return found.front().second;
}

// Planes of crooked and halfspace records, keyed by object index.
std::vector<std::pair<int, CrookedPlane>> scene_planes(const Scene& scene) {
    std::vector<std::pair<int, CrookedPlane>> out;
    for (std::size_t k = 0; k < scene.objects.size(); ++k) {
        if (const auto* p = std::get_if<CrookedPlane>(&scene.objects[k])) out.emplace_back(static_cast<int>(k), *p);
        if (const auto* h = std::get_if<HalfSpace>(&scene.objects[k])) out.emplace_back(static_cast<int>(k), h->plane);
    }
    return out;
}

template <typename T>
std::vector<std::pair<std::pair<int, T>, std::pair<int, T>>> select_pairs(
    const std::vector<std::pair<int, T>>& items, const std::vector<int>& pair, const char* what) {
    std::vector<std::pair<std::pair<int, T>, std::pair<int, T>>> out;
    if (!pair.empty()) {
        auto find = [&](int idx) {
            for (const auto& item : items) {
                if (item.first == idx) return item;
            }
            throw Error(ErrorCode::InvalidInput, "object " + std::to_string(idx) + " is not a " + what);
        };
        out.emplace_back(find(pair[0]), find(pair[1]));
        return out;
    }
    for (std::size_t a = 0; a < items.size(); ++a) {
        for (std::size_t b = a + 1; b < items.size(); ++b) {
            if (items[a].second.side == items[b].second.side) out.emplace_back(items[a], items[b]);
        }
    }
    if (out.empty()) throw Error(ErrorCode::InvalidInput, std::string("no same-side pair of ") + what + " objects");
    return out;
}

int check_disjoint(const GlobalOptions& opts, const std::string& path, const std::vector<int>& pair, int samples) {
    const Scene scene = load_scene(path);
    const double tol = effective_tol(opts, scene);
    bool all_disjoint = true;
    Json verdicts = Json::array();
    for (const auto& [first, second] : select_pairs(scene_planes(scene), pair, "crooked plane")) {
        const CrookedPlane& p = first.second;
        const CrookedPlane& q = second.second;
        const DisjointnessReport report = disjoint_crooked(p, q);
        Json v{{"pair", {first.first, second.first}},
               {"disjoint", report.disjoint},
               {"margin", report.margin},
               {"marginal", report.marginal || std::abs(report.margin) < tol},
               {"values", report.values},
               {"worst", report.worst}};
        try {
            v["sq_criterion"] = sq_criterion(p, q);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Degenerate) throw;
            v["sq_criterion"] = "degenerate";
        }
        const auto* h1 = std::get_if<HalfSpace>(&scene.objects[first.first]);
        const auto* h2 = std::get_if<HalfSpace>(&scene.objects[second.first]);
        if (h1 && h2) v["halfspaces_disjoint"] = disjoint_halfspaces(*h1, *h2);
        if (!report.disjoint) {
            all_disjoint = false;
            const Isometry witness = intersect_witness(p, q);
            v["witness"] = encode(witness);
            v["witness_verified"] = crooked_contains(p, witness) && crooked_contains(q, witness);
        }
        if (samples > 0) {
            int common = 0;
            for (const auto& h : sample_crooked(p, static_cast<std::size_t>(samples), effective_seed(opts, scene))) {
                if (crooked_contains(q, h)) ++common;
            }
            v["sampled_common_points"] = common;
        }
        verdicts.push_back(v);
    }
    emit({{"verdicts", verdicts}});
    return all_disjoint ? kOk : kNegative;
}

const char* kind_name(DecompositionKind kind) {
    switch (kind) {
        case DecompositionKind::Identity: return "identity";
        case DecompositionKind::FirstOnly: return "first_only";
        case DecompositionKind::SecondOnly: return "second_only";
        case DecompositionKind::Diagonal: return "diagonal";
        case DecompositionKind::SecondBoundary: return "second_boundary";
        case DecompositionKind::FirstBoundary: return "first_boundary";
        case DecompositionKind::Interior: return "interior";
    }
    return "unknown";
}

int decompose(const std::string& path, const std::vector<double>& element, bool strict) {
    const Scene scene = load_scene(path);
    const auto quadrants = objects_of<StemQuadrant>(scene);
    if (quadrants.size() < 2) throw Error(ErrorCode::InvalidInput, "decompose needs two stem_quadrant objects");
    const Mat2 m{element[0], element[1], element[2], element[3]};
    if (!(m.det() > 0.0)) throw Error(ErrorCode::InvalidInput, "element must have positive determinant");
    const Isometry h(m);
    try {
        const Decomposition d = sq_decompose(h, quadrants[0].second.line, quadrants[1].second.line, strict);
        emit({{"in_product", true},
              {"first", encode(d.first)},
              {"second", encode(d.second)},
              {"kind", kind_name(d.kind)},
              {"residual", max_abs_diff((d.first * d.second).matrix(), h.matrix())}});
        return kOk;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotInProduct) throw;
        emit({{"in_product", false}, {"reason", e.what()}});
        return kNegative;
    }
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("unparsable JSON: ") + e.what());
    }
}

int schottky_build(const std::string& path) {
    const Json spec = load_json(path);
    std::vector<GeodesicLine> lines;
    std::vector<Isometry> j_gens;
    std::vector<Isometry> gs;
    try {
        for (const auto& l : spec.at("lines")) lines.push_back(decode_line(l));
        for (const auto& m : spec.at("j")) j_gens.push_back(decode_isometry(m));
        for (const auto& m : spec.at("g")) gs.push_back(decode_isometry(m));
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("schottky spec needs lines, j and g: ") + e.what());
    }
    try {
        const auto [rep, domain] = build_schottky(lines, j_gens, gs);
        Scene out;
        out.objects = {rep, domain};
        emit(scene_to_json(out));
        return kOk;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::PairingFailed && e.code() != ErrorCode::HalfSpacesOverlap) throw;
        emit({{"built", false}, {"reason", e.what()}});
        return kNegative;
    }
}

int schottky_verify(const std::string& path, int radius) {
    const Scene scene = load_scene(path);
    const DomainVerdict verdict =
        verify_crooked_domain(first_object<RepPair>(scene, "rep_pair"), first_object<DomainData>(scene, "domain_data"),
                              radius);
    Json out{{"verified", verdict.verified}, {"margin", verdict.margin}, {"reason", verdict.reason}};
    if (verdict.offending) out["offending"] = {verdict.offending->first, verdict.offending->second};
    emit(out);
    return verdict.verified ? kOk : kNegative;
}

int certify(const std::string& path, const std::string& kind, std::optional<double> length,
            const std::vector<int>& word, int max_len) {
    const Scene scene = load_scene(path);
    const RepPair rep = first_object<RepPair>(scene, "rep_pair");
    ObstructionKind obstruction;
    if (kind == "one-boundary") {
        if (!length) throw Error(ErrorCode::InvalidInput, "one-boundary needs --length");
        OneBoundary ob{*length, std::nullopt};
        if (!word.empty()) ob.boundary = Word(word);
        obstruction = ob;
    } else if (kind == "elliptic") {
        if (word.empty()) throw Error(ErrorCode::InvalidInput, "elliptic needs --word");
        obstruction = EllipticWord{Word(word)};
    } else {
        obstruction = NotConvexCocompact{max_len};
    }
    const Certificate cert = certify_no_crooked_fd(rep, obstruction);
    emit({{"certified", cert.certified}, {"conditional", cert.conditional}, {"reason", cert.reason}});
    return cert.certified ? kOk : kNegative;
}

int mink_check_disjoint(const std::string& path, const std::vector<int>& pair) {
    const Scene scene = load_scene(path);
    bool all_disjoint = true;
    Json verdicts = Json::array();
    for (const auto& [first, second] : select_pairs(objects_of<MinkCrookedPlane>(scene), pair, "mink_crooked")) {
        const bool disjoint = mink_disjoint(first.second, second.second);
        Json v{{"pair", {first.first, second.first}}, {"disjoint", disjoint}};
        if (!disjoint) {
            all_disjoint = false;
            if (const auto w = mink_intersect_witness(first.second, second.second)) v["witness"] = encode(*w);
        }
        verdicts.push_back(v);
    }
    emit({{"verdicts", verdicts}});
    return all_disjoint ? kOk : kNegative;
}

int transition(const std::string& path, double t, int decades, double window, int density) {
    const Scene scene = load_scene(path);
    const StripData strip = first_object<StripData>(scene, "strip_data");
    const StripVerdict verdict = strip_condition_check(strip);
    if (!verdict.ok) {
        std::cerr << "strip condition fails: " << verdict.reason << '\n';
        return kNegative;
    }
    std::vector<double> ts;
    for (int k = 0; k <= decades; ++k) ts.push_back(t * std::pow(10.0, -k));
    std::cout << "t,residual,hausdorff\n" << std::setprecision(17);
    for (const auto& row : convergence_table(strip, ts, window, density)) {
        std::cout << row.t << ',' << row.residual << ',' << row.hausdorff << '\n';
    }
    return kOk;
}

int render(const GlobalOptions& opts, const std::string& path, const std::string& output, const std::string& chart_name,
           int res, std::optional<int> object, double slice) {
    const Scene scene = load_scene(path);
    const auto planes = scene_planes(scene);
    if (planes.empty()) throw Error(ErrorCode::InvalidInput, "scene has no crooked plane");
    CrookedPlane plane = planes.front().second;
    if (object) {
        bool found = false;
        for (const auto& [idx, p] : planes) {
            if (idx == *object) {
                plane = p;
                found = true;
            }
        }
        if (!found) throw Error(ErrorCode::InvalidInput, "object " + std::to_string(*object) + " is not a crooked plane");
    }
    const Chart chart = chart_name == "y1" ? Chart::Y1 : Chart::Y4;
    const Mesh mesh = render_crooked(plane, chart, res);

    const bool svg = output.size() >= 4 && output.substr(output.size() - 4) == ".svg";
    const bool obj = output.size() >= 4 && output.substr(output.size() - 4) == ".obj";
    if (!svg && !obj) throw Error(ErrorCode::InvalidInput, "output must end in .obj or .svg");
    std::ofstream out(output);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write '" + output + "'");
    if (svg) {
        write_svg(mesh, out, slice);
    } else {
        write_obj(mesh, out);
    }

    // Membership of every vertex after chart inversion.
    const double tol = opts.tol.value_or(1e-7);
    std::size_t off_plane = 0;
    for (const auto& part : mesh.parts) {
        for (const auto& v : part.vertices) {
            const ProjPoint p = chart_inverse(v, chart);
            if (!(ads_quadric(p) < 0.0) || !crooked_contains(plane, isometry_from_proj(p), tol)) ++off_plane;
        }
    }
    emit({{"output", output},
          {"chart", chart_name},
          {"vertices", mesh.vertex_count()},
          {"generated", mesh.generated},
          {"clipped", mesh.clipped},
          {"off_plane", off_plane}});
    return off_plane == 0 ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crooked planes in anti-de Sitter and Minkowski space"};
    app.require_subcommand(1);
    GlobalOptions opts;
    app.add_option("--seed", opts.seed, "Seed for sampled cross-checks (default: scene metadata)");
    app.add_option("--tol", opts.tol, "Marginal band for verdicts, membership tolerance for render");

    std::function<int()> action;
    std::string path;

    std::vector<int> pair;
    int samples = 0;
    auto* check = app.add_subcommand("check-disjoint", "Disjointness of crooked planes in a scene");
    check->add_option("scene", path, "Scene JSON")->required();
    check->add_option("--pair", pair, "Object indices of one pair")->expected(2);
    check->add_option("--samples", samples, "Sample this many points of the first plane and count common points");
    check->callback([&] { action = [&] { return check_disjoint(opts, path, pair, samples); }; });

    std::vector<double> element;
    bool strict = false;
    auto* dec = app.add_subcommand("decompose", "Factor an element into stem-quadrant pieces");
    dec->add_option("scene", path, "Scene JSON with two stem_quadrant objects")->required();
    dec->add_option("--element", element, "Matrix entries a b c d")->expected(4)->required()->delimiter(',');
    dec->add_flag("--strict", strict, "Require both factors in the open stem quadrants");
    dec->callback([&] { action = [&] { return decompose(path, element, strict); }; });

    int radius = 1;
    auto* schottky = app.add_subcommand("schottky", "Crooked fundamental domains");
    schottky->require_subcommand(1);
    auto* build = schottky->add_subcommand("build", "Build a representation pair and domain from lines");
    build->add_option("spec", path, "JSON with lines, j and g arrays")->required();
    build->callback([&] { action = [&] { return schottky_build(path); }; });
    auto* verify = schottky->add_subcommand("verify", "Verify a domain against a representation pair");
    verify->add_option("scene", path, "Scene JSON with rep_pair and domain_data")->required();
    verify->add_option("--radius", radius, "Word length of translated tiles");
    verify->callback([&] { action = [&] { return schottky_verify(path, radius); }; });

    std::string kind;
    std::optional<double> length;
    std::vector<int> word;
    int max_len = 6;
    auto* cert = app.add_subcommand("certify", "Certify that no crooked fundamental domain exists");
    cert->add_option("spec", path, "Scene JSON with a rep_pair")->required();
    cert->add_option("--kind", kind)->required()->check(CLI::IsMember({"one-boundary", "elliptic", "not-cc"}));
    cert->add_option("--length", length, "Boundary length for one-boundary");
    cert->add_option("--word", word, "Word letters, e.g. 1,-2")->delimiter(',');
    cert->add_option("--max-len", max_len, "Word length searched for parabolics");
    cert->callback([&] { action = [&] { return certify(path, kind, length, word, max_len); }; });

    auto* mink = app.add_subcommand("mink", "Minkowski crooked planes");
    mink->require_subcommand(1);
    auto* mink_check = mink->add_subcommand("check-disjoint", "Disjointness of Minkowski crooked planes");
    mink_check->add_option("scene", path, "Scene JSON")->required();
    mink_check->add_option("--pair", pair, "Object indices of one pair")->expected(2);
    mink_check->callback([&] { action = [&] { return mink_check_disjoint(path, pair); }; });

    double t = 0.1;
    int decades = 3;
    double window = 3.0;
    int density = 24;
    auto* trans = app.add_subcommand("transition", "Convergence of rescaled crooked planes");
    trans->add_option("spec", path, "Scene JSON with strip_data")->required();
    trans->add_option("--t", t, "Largest time")->required()->check(CLI::PositiveNumber);
    trans->add_option("--decades", decades, "Rows at t, t/10, ...")->check(CLI::NonNegativeNumber);
    trans->add_option("--window", window, "Chart window for the Hausdorff distance");
    trans->add_option("--density", density, "Parameter grid density");
    trans->callback([&] { action = [&] { return transition(path, t, decades, window, density); }; });

    std::string output;
    std::string chart = "y4";
    int res = 24;
    std::optional<int> object;
    double slice = 0.0;
    auto* rend = app.add_subcommand("render", "Mesh or slice of a crooked plane");
    rend->add_option("scene", path, "Scene JSON")->required();
    rend->add_option("-o,--output", output, "out.obj or out.svg")->required();
    rend->add_option("--chart", chart)->check(CLI::IsMember({"y4", "y1"}));
    rend->add_option("--res", res)->check(CLI::Range(2, 4096));
    rend->add_option("--object", object, "Index of the plane to render (default: first)");
    rend->add_option("--slice", slice, "Third chart coordinate of the SVG slice");
    rend->callback([&] { action = [&] { return render(opts, path, output, chart, res, object, slice); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kFailure;
    }
    try {
        return action();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}
