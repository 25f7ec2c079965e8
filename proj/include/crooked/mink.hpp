#pragma once

// Minkowski space R^{2,1} realized as sl(2,R), the Killing fields of H^2:
// crooked planes, stem quadrants and the cone disjointness criterion.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "crooked/ads.hpp"
#include "crooked/hyp2.hpp"

namespace crooked {

// Coordinates (z1, z2, z3) of [[z1, z2 - z3], [z2 + z3, -z1]].
using MinkCoords = std::array<double, 3>;

class KillingField {
public:
    KillingField() : m_(Mat2::zero()) {}
    // Throws DomainError when |tr| exceeds 1e-12 relative to the entries.
    explicit KillingField(const Mat2& m);

    static KillingField from_coords(const MinkCoords& z);

    const Mat2& matrix() const { return m_; }
    MinkCoords coords() const;
    // Minkowski quadratic form z1^2 + z2^2 - z3^2, equal to -det.
    double quadratic() const;
    double norm() const { return m_.frobenius(); }

    KillingField operator+(const KillingField& o) const { return KillingField(m_ + o.m_, Raw{}); }
    KillingField operator-(const KillingField& o) const { return KillingField(m_ - o.m_, Raw{}); }
    KillingField operator-() const { return KillingField(-m_, Raw{}); }
    KillingField operator*(double s) const { return KillingField(m_ * s, Raw{}); }

    // g X g^{-1}
    KillingField conjugated(const Isometry& g) const;

private:
    struct Raw {};
    KillingField(const Mat2& m, Raw) : m_(m) {}
    Mat2 m_;
};

inline KillingField operator*(double s, const KillingField& x) { return x * s; }

enum class KillingKind { Zero, Elliptic, Parabolic, Hyperbolic };

struct KillingClassification {
    KillingKind kind = KillingKind::Zero;
    std::optional<PlanePoint> center;  // Elliptic
    BoundaryPoint attracting;          // Parabolic: the fixed point
    BoundaryPoint repelling;
};

KillingClassification killing_classify(const KillingField& x);

// C(line) + v for Left, C*(line) + v = -C(line) + v for Right.
struct MinkCrookedPlane {
    PlaneSide side = PlaneSide::Left;
    KillingField v;
    GeodesicLine line;
};

struct MinkHalfSpace {
    MinkCrookedPlane plane;
};

Membership mink_crooked_membership(const MinkCrookedPlane& plane, const KillingField& x);
bool mink_crooked_contains(const MinkCrookedPlane& plane, const KillingField& x);
HalfSpaceSide mink_halfspace_side(const MinkHalfSpace& half, const KillingField& x);

// Stratified sample: first element is v, then 40% stem, 20% stem boundary,
// 40% wings, parameters drawn from |param| <= 20.
std::vector<KillingField> mink_sample_crooked(const MinkCrookedPlane& plane, std::size_t n, std::uint64_t seed);

// Derivatives at 0 of the parabolic boundary rays of the stem quadrant of
// an oriented line, ordered (u_+, u_-).
std::array<KillingField, 2> stem_quadrant_generators(const GeodesicLine& oriented_line);

bool mink_stem_quadrant_contains(const GeodesicLine& oriented_line, const KillingField& x);
// Geometric form: hyperbolic, axis orthogonal to the line, attracting point
// on the positive side.
bool mink_stem_quadrant_contains_geometric(const GeodesicLine& oriented_line, const KillingField& x);

// Left planes: lines do not cross and v' - v lies in SQ(l') - SQ(l) for the
// orientations away from each other. Right planes use SQ(l) - SQ(l').
// Throws MixedSides for planes of different sides.
bool mink_disjoint(const MinkCrookedPlane& first, const MinkCrookedPlane& second);

// A common point found by intersecting the polyhedral pieces of the two
// planes; nullopt when they are disjoint.
std::optional<KillingField> mink_intersect_witness(const MinkCrookedPlane& first, const MinkCrookedPlane& second);

Isometry exp_killing(const KillingField& x);

}  // namespace crooked
