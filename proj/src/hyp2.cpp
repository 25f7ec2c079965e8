#include "crooked/hyp2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace crooked {

namespace {

Complex homogeneous_det(Complex z, const Vec2& v) { return z * v.y - v.x; }

Vec2 eigenvector(const Mat2& m, double mu) {
    const Vec2 u{m.b, mu - m.a};
    const Vec2 w{mu - m.d, m.c};
    return u.norm() >= w.norm() ? u : w;
}

}  // namespace

Isometry::Isometry(const Mat2& m) {
    const double dt = m.det();
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw Error(ErrorCode::DomainError, "isometry needs a matrix with positive determinant");
    }
    m_ = m * (1.0 / std::sqrt(dt));
}

Isometry Isometry::dilation(double len) {
    return Isometry(Mat2::diag(std::exp(len / 2.0), std::exp(-len / 2.0)), Raw{});
}

Isometry Isometry::rotation_about(Complex center, double angle) {
    const PlanePoint c(center);
    const double sy = std::sqrt(c.im());
    const Mat2 to_center{sy, c.re() / sy, 0.0, 1.0 / sy};
    const Mat2 rot{std::cos(angle / 2.0), std::sin(angle / 2.0), -std::sin(angle / 2.0),
                   std::cos(angle / 2.0)};
    return Isometry(to_center * rot * to_center.adjugate());
}

Isometry Isometry::inverse() const { return Isometry(m_.adjugate(), Raw{}); }

// Products of unimodular factors stay unimodular; recomputing det would only
// amplify cancellation error for large entries.
Isometry Isometry::operator*(const Isometry& o) const { return Isometry(m_ * o.m_, Raw{}); }

bool Isometry::approx_equal(const Isometry& o, double tol) const { return distance_to(o) <= tol; }

double Isometry::distance_to(const Isometry& o) const {
    return std::min(max_abs_diff(m_, o.m_), max_abs_diff(m_, -o.m_));
}

PlanePoint::PlanePoint(Complex z) : z_(z) {
    if (!(z.imag() > 0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorCode::DomainError, "plane point needs Im z > 0");
    }
}

BoundaryPoint::BoundaryPoint(Vec2 v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw Error(ErrorCode::DomainError, "ideal point needs a nonzero finite vector");
    }
    v = v * (1.0 / n);
    if (v.y < 0.0 || (v.y == 0.0 && v.x < 0.0)) v = v * -1.0;
    v_ = v;
}

double BoundaryPoint::to_real() const {
    if (v_.y == 0.0) return std::numeric_limits<double>::infinity();
    return v_.x / v_.y;
}

bool same_point(const BoundaryPoint& p, const BoundaryPoint& q, double tol) {
    return std::abs(det(p.vec(), q.vec())) <= tol;
}

Orientation opposite(Orientation o) {
    return o == Orientation::PositiveLeft ? Orientation::PositiveRight : Orientation::PositiveLeft;
}

Side flip(Side s) { return static_cast<Side>(-static_cast<int>(s)); }

GeodesicLine::GeodesicLine(BoundaryPoint a_, BoundaryPoint b_, std::optional<Orientation> o)
    : a(a_), b(b_), orient(o) {
    if (same_point(a, b, kDistinctEndpointTol)) {
        throw Error(ErrorCode::DomainError, "geodesic endpoints coincide");
    }
}

GeodesicLine GeodesicLine::between(double x, double y, std::optional<Orientation> o) {
    auto pt = [](double t) {
        return std::isinf(t) ? BoundaryPoint::infinity() : BoundaryPoint::real(t);
    };
    return {pt(x), pt(y), o};
}

GeodesicLine GeodesicLine::reversed_orientation() const {
    if (!orient) throw Error(ErrorCode::DomainError, "line has no transverse orientation");
    return {a, b, opposite(*orient)};
}

bool GeodesicLine::has_endpoint(const BoundaryPoint& p, double tol) const {
    return same_point(a, p, tol) || same_point(b, p, tol);
}

Isometry line_frame(const GeodesicLine& line) {
    Vec2 av = line.a.vec();
    const Vec2 bv = line.b.vec();
    if (det(bv, av) < 0.0) av = av * -1.0;
    return Isometry(from_columns(bv, av));
}

Isometry unit_circle_frame(const GeodesicLine& line) {
    const double s = 1.0 / std::sqrt(2.0);
    return line_frame(line) * Isometry(Mat2{s, s, -s, s});
}

PlanePoint point_on_line(const GeodesicLine& line, double arclength) {
    return mobius_apply(line_frame(line), PlanePoint(0.0, std::exp(arclength)));
}

PlanePoint mobius_apply(const Isometry& g, const PlanePoint& p) {
    const Mat2& m = g.matrix();
    const Complex z = p.z();
    const Complex den = m.c * z + m.d;
    const Complex w = (m.a * z + m.b) / den;
    const double im = std::max(p.im() / std::norm(den), std::numeric_limits<double>::min());
    return PlanePoint(Complex{w.real(), im});
}

BoundaryPoint mobius_apply(const Isometry& g, const BoundaryPoint& p) {
    return BoundaryPoint(g.matrix() * p.vec());
}

GeodesicLine mobius_apply(const Isometry& g, const GeodesicLine& line) {
    return {mobius_apply(g, line.a), mobius_apply(g, line.b), line.orient};
}

double dist(const PlanePoint& x, const PlanePoint& y) {
    return 2.0 * std::asinh(std::abs(x.z() - y.z()) / (2.0 * std::sqrt(x.im() * y.im())));
}

Classification classify(const Isometry& g) {
    Classification out;
    if (g.is_identity()) return out;
    const Mat2& m = g.matrix();
    const double tr = m.trace();
    const double gap = std::abs(tr) - 2.0;
    if (std::abs(gap) <= kParabolicBand) {
        out.kind = IsoKind::Parabolic;
        out.near_parabolic = true;
        const BoundaryPoint fixed(eigenvector(m, tr >= 0.0 ? 1.0 : -1.0));
        out.attracting = fixed;
        out.repelling = fixed;
        return out;
    }
    if (gap < 0.0) {
        out.kind = IsoKind::Elliptic;
        const double im = std::sqrt(4.0 - tr * tr) / (2.0 * std::abs(m.c));
        out.center = PlanePoint(Complex{(m.a - m.d) / (2.0 * m.c), im});
        return out;
    }
    out.kind = IsoKind::Hyperbolic;
    const double root = std::sqrt(tr * tr - 4.0);
    const double big = (tr + std::copysign(root, tr)) / 2.0;
    out.attracting = BoundaryPoint(eigenvector(m, big));
    out.repelling = BoundaryPoint(eigenvector(m, 1.0 / big));
    return out;
}

double translation_length(const Isometry& g) {
    if (classify(g).kind != IsoKind::Hyperbolic) return 0.0;
    return 2.0 * std::acosh(std::abs(g.trace()) / 2.0);
}

double ideal_distance_change(const Isometry& g, const Isometry& g2, const BoundaryPoint& xi,
                             const BoundaryPoint& xi2) {
    const Vec2 x = xi.vec();
    const Vec2 x2 = xi2.vec();
    const Vec2 gx = g.matrix() * x;
    const Vec2 gx2 = g2.matrix() * x2;
    const double before = std::abs(det(x, x2));
    const double after = std::abs(det(gx, gx2));
    const bool same_source = before <= kSamePointTol;
    const bool same_image = after <= kSamePointTol * gx.norm() * gx2.norm();
    if (same_source && same_image) {
        throw Error(ErrorCode::DomainError, "both the ideal points and their images coincide");
    }
    if (same_source) return std::numeric_limits<double>::infinity();
    if (same_image) return -std::numeric_limits<double>::infinity();
    return 2.0 * (std::log(after) - std::log(before));
}

int cyclic_order(const BoundaryPoint& p, const BoundaryPoint& q, const BoundaryPoint& s) {
    const double d1 = det(p.vec(), q.vec());
    const double d2 = det(q.vec(), s.vec());
    const double d3 = det(s.vec(), p.vec());
    if (std::abs(d1) <= kSamePointTol || std::abs(d2) <= kSamePointTol ||
        std::abs(d3) <= kSamePointTol) {
        return 0;
    }
    return d1 * d2 * d3 > 0.0 ? 1 : -1;
}

namespace {

// Matrix sending infinity, 0, 1 to p1, p2, p3 (up to scale; sign of det free).
Mat2 three_point_frame(const Vec2& p1, const Vec2& p2, const Vec2& p3) {
    const double base = det(p1, p2);
    const double lam = det(p3, p2) / base;
    const double mu = det(p1, p3) / base;
    return from_columns(p1 * lam, p2 * mu);
}

}  // namespace

NormalizedPair normalize_pair(const GeodesicLine& first, const GeodesicLine& second) {
    const Vec2 p = first.a.vec();
    const Vec2 q = first.b.vec();
    Vec2 p2 = second.a.vec();
    Vec2 q2 = second.b.vec();
    const double d_pp2 = det(p, p2);
    const double d_qq2 = det(q, q2);
    const double d_pq2 = det(p, q2);
    const double d_qp2 = det(q, p2);
    const double tol = kDistinctEndpointTol;
    if (std::abs(d_pp2) <= tol || std::abs(d_qq2) <= tol || std::abs(d_pq2) <= tol ||
        std::abs(d_qp2) <= tol) {
        throw Error(ErrorCode::NotSeparated, "lines share an ideal endpoint");
    }
    double cross = (d_pp2 * d_qq2) / (d_pq2 * d_qp2);
    if (!(cross > 0.0) || std::abs(cross - 1.0) <= tol) {
        throw Error(ErrorCode::NotSeparated, "lines intersect");
    }
    NormalizedPair out;
    if (cross < 1.0) {
        std::swap(p2, q2);
        cross = 1.0 / cross;
        out.second_swapped = true;
    }
    const double c = std::sqrt(cross);
    out.R = std::sqrt((c + 1.0) / (c - 1.0));
    const double R = out.R;
    const Mat2 from = three_point_frame(p, q, p2);
    const Mat2 to = three_point_frame({-1.0 / R, 1.0}, {1.0 / R, 1.0}, {R, 1.0});
    Mat2 k = to * from.adjugate();
    if (k.det() < 0.0) {
        throw Error(ErrorCode::NotSeparated, "inconsistent cyclic order");
    }
    out.k = Isometry(k);
    return out;
}

namespace {

double signed_offset(const GeodesicLine& line, const PlanePoint& p, double* dist_out) {
    const Vec2 av = line.a.vec();
    const Vec2 bv = line.b.vec();
    const double ab = det(av, bv);
    const Complex za = homogeneous_det(p.z(), av);
    const Complex zb = homogeneous_det(p.z(), bv);
    const double s = -(ab > 0.0 ? 1.0 : -1.0) * (za * std::conj(zb)).real();
    if (dist_out) *dist_out = std::asinh(std::abs(s) / (p.im() * std::abs(ab)));
    return s;
}

Side apply_orientation(const GeodesicLine& line, Side left_side) {
    if (!line.orient) throw Error(ErrorCode::DomainError, "line has no transverse orientation");
    return *line.orient == Orientation::PositiveLeft ? left_side : flip(left_side);
}

}  // namespace

double distance_to_line(const GeodesicLine& line, const PlanePoint& p) {
    double d = 0.0;
    signed_offset(line, p, &d);
    return d;
}

Side side_of(const GeodesicLine& line, const PlanePoint& p) {
    double d = 0.0;
    const double s = signed_offset(line, p, &d);
    const Side left = d <= kOnLineTol ? Side::On : (s > 0.0 ? Side::Positive : Side::Negative);
    return apply_orientation(line, left);
}

Side side_of(const GeodesicLine& line, const BoundaryPoint& p) {
    Side left = Side::On;
    if (!line.has_endpoint(p)) {
        left = cyclic_order(line.a, line.b, p) > 0 ? Side::Positive : Side::Negative;
    }
    return apply_orientation(line, left);
}

GeodesicLine orient_toward(const GeodesicLine& line, const PlanePoint& target) {
    const auto left = line.with_orientation(Orientation::PositiveLeft);
    switch (side_of(left, target)) {
        case Side::Positive: return left;
        case Side::Negative: return line.with_orientation(Orientation::PositiveRight);
        case Side::On: break;
    }
    throw Error(ErrorCode::DomainError, "target lies on the line");
}

GeodesicLine orient_toward(const GeodesicLine& line, const BoundaryPoint& target) {
    const auto left = line.with_orientation(Orientation::PositiveLeft);
    switch (side_of(left, target)) {
        case Side::Positive: return left;
        case Side::Negative: return line.with_orientation(Orientation::PositiveRight);
        case Side::On: break;
    }
    throw Error(ErrorCode::DomainError, "target is an endpoint of the line");
}

bool lines_cross(const GeodesicLine& first, const GeodesicLine& second) {
    const bool shares_a = first.has_endpoint(second.a);
    const bool shares_b = first.has_endpoint(second.b);
    if (shares_a && shares_b) return true;
    if (shares_a || shares_b) return false;
    return cyclic_order(first.a, first.b, second.a) * cyclic_order(first.a, first.b, second.b) < 0;
}

void require_disjoint_lines(const GeodesicLine& first, const GeodesicLine& second) {
    if (lines_cross(first, second)) {
        throw Error(ErrorCode::LinesCross, "geodesic lines meet in the hyperbolic plane");
    }
}

bool oriented_away(const GeodesicLine& first, const GeodesicLine& second) {
    require_disjoint_lines(first, second);
    auto away = [](const GeodesicLine& from, const GeodesicLine& other) {
        return side_of(from, other.a) != Side::Positive && side_of(from, other.b) != Side::Positive;
    };
    return away(first, second) && away(second, first);
}

}  // namespace crooked
