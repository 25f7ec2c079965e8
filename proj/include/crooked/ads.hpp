#pragma once

// Crooked planes and half-spaces in AdS^3 = PSL(2,R), their disjointness
// tests, and stem-quadrant decompositions.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "crooked/hyp2.hpp"

namespace crooked {

enum class PlaneSide { Left, Right };

// g C(line) for Left, g C*(line) for Right.
struct CrookedPlane {
    PlaneSide side = PlaneSide::Left;
    Isometry g;
    GeodesicLine line;
};

// The plane's line must carry a transverse orientation.
struct HalfSpace {
    CrookedPlane plane;
};

enum class PlanePart { Stem, StemBoundary, WingPlus, WingMinus };

struct Membership {
    bool member = false;
    std::optional<PlanePart> part;
    // Decided inside a tolerance band (parabolic trace band or an elliptic
    // fixed point within 1e-6 of the line).
    bool borderline = false;
};

inline constexpr double kMembershipTol = 1e-9;

// rel_tol scales with the size of the traceless part of g^{-1} h in the line frame.
Membership crooked_membership(const CrookedPlane& plane, const Isometry& h, double rel_tol = kMembershipTol);
bool crooked_contains(const CrookedPlane& plane, const Isometry& h, double rel_tol = kMembershipTol);

enum class HalfSpaceSide { Inside, OnPlane, Outside };
HalfSpaceSide halfspace_side(const HalfSpace& half, const Isometry& h);

// Stratified sample of n members (first element is g itself, the image of e).
std::vector<Isometry> sample_crooked(const CrookedPlane& plane, std::size_t n, std::uint64_t seed);

struct DisjointnessReport {
    bool disjoint = false;
    // Negative iff the criterion holds strictly (Right: max F, Left: -min F).
    double margin = 0.0;
    // Some endpoint pair has |F| below the marginal band.
    bool marginal = false;
    // F on endpoint pairs (a,a'), (a,b'), (b,a'), (b,b'); NaN where undefined.
    std::array<double, 4> values{};
    int worst = 0;
};

inline constexpr double kMarginalBand = 1e-6;

// Throws MixedSides unless both planes have the same side.
DisjointnessReport disjoint_crooked(const CrookedPlane& first, const CrookedPlane& second);
bool disjoint_halfspaces(const HalfSpace& first, const HalfSpace& second);

// Max over a grid x grid sample (arclength |s| <= 20) of
// d(g x, g' x') - d(x, x'), negated for Left planes.
double contraction_margin_sampled(const CrookedPlane& first, const CrookedPlane& second, int grid);

// A common point of two intersecting planes. Throws IsDisjoint if the
// criterion reports them disjoint.
Isometry intersect_witness(const CrookedPlane& first, const CrookedPlane& second);

bool stem_quadrant_contains(const GeodesicLine& oriented_line, const Isometry& h);

enum class DecompositionKind {
    Identity,
    FirstOnly,       // h lies in SQ(first); second factor e
    SecondOnly,      // h lies in SQ(second)^{-1}; first factor e
    Diagonal,        // two half-length translations along the common perpendicular
    SecondBoundary,  // second factor parabolic (boundary of SQ(second)^{-1})
    FirstBoundary,   // first factor parabolic (boundary of SQ(first))
    Interior,        // both factors strictly inside
};

struct Decomposition {
    Isometry first;   // in the closure of SQ(first line)
    Isometry second;  // in the closure of SQ(second line)^{-1}
    DecompositionKind kind = DecompositionKind::Identity;
};

inline constexpr double kDecompositionPerturbation = 1e-6;

// h = first * second with first in closure SQ(l1), second in closure SQ(l2)^{-1}.
// Lines must have disjoint closures and be oriented away from each other
// (Degenerate otherwise); NotInProduct when h does not bring the endpoints closer.
Decomposition sq_decompose(const Isometry& h, const GeodesicLine& first, const GeodesicLine& second,
                           bool strict_interior = false);

// Stem-quadrant product criterion for two planes of the same side.
// Throws Degenerate when the lines carried by the isometries fail the
// disjoint / oriented-away hypothesis needed for the converse direction.
bool sq_criterion(const CrookedPlane& first, const CrookedPlane& second);

CrookedPlane inverse_plane(const CrookedPlane& plane);

}  // namespace crooked
