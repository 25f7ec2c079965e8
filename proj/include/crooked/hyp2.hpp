#pragma once

// Upper half-plane geometry: points, ideal points, geodesic lines and
// orientation-preserving isometries acting by Moebius transformations.

#include <optional>

#include "crooked/errors.hpp"
#include "crooked/mat2.hpp"

namespace crooked {

inline constexpr double kParabolicBand = 1e-9;
inline constexpr double kOnLineTol = 1e-9;
inline constexpr double kSamePointTol = 1e-12;
inline constexpr double kDistinctEndpointTol = 1e-10;

// Element of PSL(2,R); the stored matrix has determinant one and is
// meaningful only up to a global sign.
class Isometry {
public:
    Isometry() = default;
    // Rescales m to unit determinant. Throws DomainError if det(m) <= 0.
    explicit Isometry(const Mat2& m);

    static Isometry identity() { return {}; }
    // Hyperbolic translation z -> e^{len} z along the imaginary axis.
    static Isometry dilation(double len);
    // Counterclockwise rotation by `angle` about the point `center`.
    // Takes a matrix known to have determinant 1 without renormalizing.
    static Isometry from_unimodular(const Mat2& m) { return Isometry(m, Raw{}); }
    static Isometry rotation_about(Complex center, double angle);

    const Mat2& matrix() const { return m_; }
    double trace() const { return m_.trace(); }
    Isometry inverse() const;
    Isometry operator*(const Isometry& o) const;

    // Equality up to sign, entrywise within tol.
    bool approx_equal(const Isometry& o, double tol = 1e-9) const;
    double distance_to(const Isometry& o) const;
    bool is_identity(double tol = 1e-10) const { return approx_equal(Isometry{}, tol); }

private:
    struct Raw {};
    Isometry(const Mat2& m, Raw) : m_(m) {}
    Mat2 m_ = Mat2::identity();
};

// Point of the upper half-plane.
class PlanePoint {
public:
    PlanePoint() = default;
    // Throws DomainError unless Im z > 0.
    explicit PlanePoint(Complex z);
    PlanePoint(double x, double y) : PlanePoint(Complex{x, y}) {}

    Complex z() const { return z_; }
    double re() const { return z_.real(); }
    double im() const { return z_.imag(); }

private:
    Complex z_{0.0, 1.0};
};

// Point of the real projective line, stored as a unit vector up to sign.
class BoundaryPoint {
public:
    BoundaryPoint() = default;
    // Throws DomainError on the zero vector.
    explicit BoundaryPoint(Vec2 v);

    static BoundaryPoint real(double x) { return BoundaryPoint(Vec2{x, 1.0}); }
    static BoundaryPoint infinity() { return BoundaryPoint(Vec2{1.0, 0.0}); }

    const Vec2& vec() const { return v_; }
    bool is_infinity(double tol = kSamePointTol) const { return std::abs(v_.y) <= tol; }
    // Affine coordinate; +inf for the point at infinity.
    double to_real() const;

private:
    Vec2 v_{0.0, 1.0};
};

bool same_point(const BoundaryPoint& p, const BoundaryPoint& q, double tol = kSamePointTol);

enum class Orientation { PositiveLeft, PositiveRight };
enum class Side { Negative = -1, On = 0, Positive = 1 };

Orientation opposite(Orientation o);
Side flip(Side s);

// Geodesic with ideal endpoints a, b. The optional orientation marks which
// side of the ray a -> b is the positive side.
struct GeodesicLine {
    BoundaryPoint a;
    BoundaryPoint b;
    std::optional<Orientation> orient;

    GeodesicLine() = default;
    // Throws DomainError if the endpoints coincide.
    GeodesicLine(BoundaryPoint a, BoundaryPoint b, std::optional<Orientation> orient = std::nullopt);
    static GeodesicLine between(double x, double y, std::optional<Orientation> orient = std::nullopt);

    GeodesicLine with_orientation(Orientation o) const { return {a, b, o}; }
    GeodesicLine reversed_orientation() const;
    bool has_endpoint(const BoundaryPoint& p, double tol = kSamePointTol) const;
};

// Isometry taking 0 -> line.a and infinity -> line.b.
Isometry line_frame(const GeodesicLine& line);
// Isometry taking -1 -> line.a and 1 -> line.b.
Isometry unit_circle_frame(const GeodesicLine& line);
// Unit-speed parametrization of the line, increasing toward line.b.
PlanePoint point_on_line(const GeodesicLine& line, double arclength);

PlanePoint mobius_apply(const Isometry& g, const PlanePoint& p);
BoundaryPoint mobius_apply(const Isometry& g, const BoundaryPoint& p);
GeodesicLine mobius_apply(const Isometry& g, const GeodesicLine& line);

double dist(const PlanePoint& x, const PlanePoint& y);

enum class IsoKind { Identity, Elliptic, Parabolic, Hyperbolic };

struct Classification {
    IsoKind kind = IsoKind::Identity;
    PlanePoint center;          // Elliptic only.
    BoundaryPoint attracting;   // Hyperbolic; also the fixed point when Parabolic.
    BoundaryPoint repelling;    // Hyperbolic; also the fixed point when Parabolic.
    bool near_parabolic = false;  // |tr| was within the parabolic tolerance band.
};

Classification classify(const Isometry& g);
double translation_length(const Isometry& g);

// Extended difference d(g.xi, g2.xi2) - d(xi, xi2) at ideal points.
// Returns +inf when xi = xi2, -inf when g.xi = g2.xi2; throws DomainError
// when both coincidences hold.
double ideal_distance_change(const Isometry& g, const Isometry& g2, const BoundaryPoint& xi,
                             const BoundaryPoint& xi2);

// Sign of the cyclic order of three ideal points (+1 positive, -1 negative, 0 if two coincide).
int cyclic_order(const BoundaryPoint& p, const BoundaryPoint& q, const BoundaryPoint& s);

struct NormalizedPair {
    Isometry k;           // k.first -> (-1/R, 1/R), k.second -> (R, -R)
    double R = 1.0;
    bool second_swapped = false;  // true if k.second.a -> -R instead of R
};

// Throws NotSeparated if the closures of the two lines meet.
NormalizedPair normalize_pair(const GeodesicLine& first, const GeodesicLine& second);

// Hyperbolic distance from p to the geodesic.
double distance_to_line(const GeodesicLine& line, const PlanePoint& p);
// Requires an oriented line (DomainError otherwise).
Side side_of(const GeodesicLine& line, const PlanePoint& p);
Side side_of(const GeodesicLine& line, const BoundaryPoint& p);
// Orients `line` so that `target` is on its positive side.
GeodesicLine orient_toward(const GeodesicLine& line, const PlanePoint& target);
GeodesicLine orient_toward(const GeodesicLine& line, const BoundaryPoint& target);

// True iff the open positive half-planes are disjoint. Throws LinesCross if
// the lines meet in the hyperbolic plane.
bool oriented_away(const GeodesicLine& first, const GeodesicLine& second);
// Throws LinesCross if the lines meet in the hyperbolic plane.
void require_disjoint_lines(const GeodesicLine& first, const GeodesicLine& second);
bool lines_cross(const GeodesicLine& first, const GeodesicLine& second);

}  // namespace crooked
