#pragma once

// Pairs of representations of a free group into PSL(2,R), crooked
// fundamental domains built from them, and obstructions to their existence.

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "crooked/ads.hpp"
#include "crooked/hyp2.hpp"

namespace crooked {

// Reduced word in the free generators: letter k > 0 is gamma_k, -k its inverse.
class Word {
public:
    Word() = default;
    // Throws RejectedUnreduced on adjacent cancellation, InvalidInput on a zero letter.
    explicit Word(std::vector<int> letters);

    const std::vector<int>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    Word inverse() const;
    // Concatenation followed by free reduction.
    Word operator*(const Word& o) const;
    bool operator==(const Word& o) const = default;

private:
    std::vector<int> letters_;
};

// All nontrivial reduced words of length <= max_len, breadth first.
std::vector<Word> reduced_words(int rank, int max_len);

struct RepPair {
    std::vector<Isometry> j;
    std::vector<Isometry> rho;
    int rank() const { return static_cast<int>(j.size()); }
};

std::pair<Isometry, Isometry> evaluate(const RepPair& rep, const Word& w);

// Max of lambda(rho(w)) / lambda(j(w)) over reduced words up to max_len with
// lambda(j(w)) > 1e-9. Throws NoHyperbolic if none qualifies.
double shortness_ratio(const RepPair& rep, int max_len);

struct Arc {
    GeodesicLine line;  // oriented toward the half-plane outside the tile
    Isometry g;
};

// j(gamma_generator) maps arc `from` onto arc `to`, exchanging sides.
struct ArcPairing {
    int generator = 1;
    int from = 0;
    int to = 0;
};

struct DomainData {
    std::vector<Arc> arcs;
    std::vector<ArcPairing> pairings;
};

struct DomainVerdict {
    bool verified = false;
    double margin = 0.0;  // K: min over checked pairs of -max F
    std::string reason;
    std::optional<std::pair<int, int>> offending;
};

// Checks equivariance of the arcs under the pairings and disjointness of the
// right crooked planes g C*(line) for arc pairs sharing a tile, over tiles
// translated by words of length <= radius.
DomainVerdict verify_crooked_domain(const RepPair& rep, const DomainData& domain, int radius = 1);

// lines: r first lines followed by their r partners, each oriented toward
// its half-plane; gs likewise. rho(gamma_i) = g'_i j(gamma_i) g_i^{-1}.
// Throws DomainError for overlapping half-planes, PairingFailed, or
// HalfSpacesOverlap.
std::pair<RepPair, DomainData> build_schottky(const std::vector<GeodesicLine>& lines,
                                              const std::vector<Isometry>& j_gens,
                                              const std::vector<Isometry>& gs);

// (j(w), rho(w)) . h = rho(w) h j(w)^{-1}
Isometry act(const RepPair& rep, const Word& w, const Isometry& h);

// Greedy reflection search: word w of length <= max_len with w . h in the
// closed domain, or nullopt.
std::optional<Word> reduce_to_domain(const RepPair& rep, const DomainData& domain, const Isometry& h,
                                     int max_len = 12);
bool in_closed_domain(const DomainData& domain, const Isometry& h);

// Embedded collar half-width arcsinh(1 / sinh(D/2)). Throws DomainError for D <= 0.
double collar_width(double boundary_length);

struct NotConvexCocompact {
    int max_len = 6;
};
struct OneBoundary {
    double length = 0.0;
    std::optional<Word> boundary;  // checked against lambda(j(w)) when given
};
struct EllipticWord {
    Word word;
};
using ObstructionKind = std::variant<NotConvexCocompact, OneBoundary, EllipticWord>;

struct Certificate {
    bool certified = false;
    bool conditional = false;  // rests on a hypothesis only sampled
    std::string reason;
};

Certificate certify_no_crooked_fd(const RepPair& rep, const ObstructionKind& kind);

// Displacement bounds used by the elliptic obstruction.
double hyperbolic_reach(double translation_length);  // arccosh(max(1, sinh(1/2)/sinh(l/2)))
double elliptic_reach(double rotation_angle);        // arcsinh(sinh(1/2)/sin(theta/2))

// Hyperbolic A, B with perpendicular axes through i, equal lengths, and
// lambda([A, B]) = D.
std::vector<Isometry> make_one_holed_torus(double boundary_length);

// j: hyperbolics with disjoint ping-pong disks, rho: rotations about i.
// Throws PingPongFailed if the disks overlap.
RepPair make_pingpong_pair(int rank, const std::vector<double>& lengths, const std::vector<double>& angles);

}  // namespace crooked
