#include "crooked/ads.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

namespace crooked {

namespace {

constexpr double kEndpointTol = 1e-9;
constexpr double kShapeTol = 1e-9;
// Membership tolerances relative to the traceless part in the line's frame.
constexpr double kMembershipBand = 1e-6;
constexpr double kRoundoffFloor = 1e-13;
constexpr double kSampleWindow = 20.0;

const BoundaryPoint& relevant_fixed_point(PlaneSide side, const Classification& cl) {
    return side == PlaneSide::Left ? cl.attracting : cl.repelling;
}

void require_same_side(const CrookedPlane& p, const CrookedPlane& q) {
    if (p.side != q.side) throw Error(ErrorCode::MixedSides, "planes have different sides");
}

GeodesicLine require_oriented(const GeodesicLine& line) {
    if (!line.orient) throw Error(ErrorCode::DomainError, "half-space needs an oriented line");
    return line;
}

}  // namespace

CrookedPlane inverse_plane(const CrookedPlane& plane) {
    const PlaneSide other = plane.side == PlaneSide::Left ? PlaneSide::Right : PlaneSide::Left;
    return {other, plane.g.inverse(), mobius_apply(plane.g, plane.line)};
}

Membership crooked_membership(const CrookedPlane& plane, const Isometry& h, double rel_tol) {
    const Isometry rel = plane.g.inverse() * h;
    const Classification cl = classify(rel);
    Membership out;
    if (cl.kind == IsoKind::Identity) {
        out.member = true;
        out.part = PlanePart::StemBoundary;
        return out;
    }
    // In the frame sending the line to (0, inf), with traceless part
    // [[p, q], [r, -p]]: an elliptic or parabolic fixed point lies on the
    // line iff p = 0, infinity is fixed iff r = 0, and 0 is fixed iff q = 0.
    // Tolerances scale with the traceless part so that elements far out on
    // the plane are judged with the precision their entries carry.
    const Isometry frame = line_frame(plane.line);
    const Mat2 m = (frame.inverse() * rel * frame).matrix();
    const double half_diff = (m.a - m.d) / 2.0;
    const double scale =
        std::sqrt(2.0 * half_diff * half_diff + m.b * m.b + m.c * m.c) + kRoundoffFloor * m.frobenius();
    const double tol = rel_tol * scale;
    const double band = kMembershipBand * scale;

    // Wing test: the fixed endpoint on the line must attract (left) or
    // repel (right), read off the diagonal magnitudes.
    auto wing_part = [&]() -> std::optional<PlanePart> {
        const bool want_attracting = plane.side == PlaneSide::Left;
        const bool inf_attracting = std::abs(m.a) > std::abs(m.d);
        if (std::abs(m.c) <= tol && inf_attracting == want_attracting) return PlanePart::WingPlus;
        if (std::abs(m.b) <= tol && inf_attracting != want_attracting) return PlanePart::WingMinus;
        return std::nullopt;
    };

    switch (cl.kind) {
        case IsoKind::Identity:
            break;
        case IsoKind::Elliptic:
        case IsoKind::Parabolic: {
            const double off = std::abs(half_diff);
            out.member = off <= tol;
            out.borderline = cl.near_parabolic || (off > tol && off <= band);
            if (out.member) {
                out.part = cl.kind == IsoKind::Elliptic ? PlanePart::Stem : PlanePart::StemBoundary;
            } else if (cl.near_parabolic && std::abs(m.a + m.d) > 2.0) {
                // Short translations snapped to parabolic by the trace band.
                if (const auto part = wing_part()) {
                    out.member = true;
                    out.part = *part;
                }
            }
            break;
        }
        case IsoKind::Hyperbolic: {
            if (const auto part = wing_part()) {
                out.member = true;
                out.part = *part;
            } else {
                out.borderline = std::min(std::abs(m.c), std::abs(m.b)) <= band;
            }
            out.borderline = out.borderline || cl.near_parabolic;
            break;
        }
    }
    return out;
}

bool crooked_contains(const CrookedPlane& plane, const Isometry& h, double rel_tol) {
    return crooked_membership(plane, h, rel_tol).member;
}

HalfSpaceSide halfspace_side(const HalfSpace& half, const Isometry& h) {
    const CrookedPlane& plane = half.plane;
    const GeodesicLine line = require_oriented(plane.line);
    if (crooked_contains(plane, h)) return HalfSpaceSide::OnPlane;
    const Classification cl = classify(plane.g.inverse() * h);
    Side side = Side::On;
    switch (cl.kind) {
        case IsoKind::Identity: return HalfSpaceSide::OnPlane;
        case IsoKind::Elliptic: side = side_of(line, cl.center); break;
        case IsoKind::Parabolic: side = side_of(line, cl.attracting); break;
        case IsoKind::Hyperbolic: side = side_of(line, relevant_fixed_point(plane.side, cl)); break;
    }
    return side == Side::Positive ? HalfSpaceSide::Inside : HalfSpaceSide::Outside;
}

std::vector<Isometry> sample_crooked(const CrookedPlane& plane, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> window(-kSampleWindow, kSampleWindow);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> length(0.0, kSampleWindow);
    std::bernoulli_distribution coin(0.5);

    const Isometry frame = line_frame(plane.line);
    const Isometry frame_inv = frame.inverse();
    const Isometry swap(Mat2{0.0, -1.0, 1.0, 0.0});
    const std::size_t n_stem = (2 * n) / 5;
    const std::size_t n_boundary = n / 5;

    // Left-plane elements over the line (0, inf); Right planes use inverses.
    auto left_sample = [&](std::size_t idx) -> Isometry {
        if (idx == 0) return Isometry{};
        if (idx < n_stem + 1) {
            return Isometry::rotation_about({0.0, std::exp(window(rng))}, angle(rng));
        }
        if (idx < n_stem + n_boundary) {
            const double t = window(rng);
            return coin(rng) ? Isometry(Mat2{1.0, t, 0.0, 1.0}) : Isometry(Mat2{1.0, 0.0, t, 1.0});
        }
        double len = length(rng);
        while (len <= 0.0) len = length(rng);
        const Isometry shift(Mat2{1.0, window(rng), 0.0, 1.0});
        const Isometry wing = shift * Isometry::dilation(len) * shift.inverse();
        return coin(rng) ? wing : swap * wing * swap.inverse();
    };

    std::vector<Isometry> out;
    out.reserve(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        Isometry u = left_sample(idx);
        if (plane.side == PlaneSide::Right) u = u.inverse();
        out.push_back(plane.g * frame * u * frame_inv);
    }
    return out;
}

DisjointnessReport disjoint_crooked(const CrookedPlane& first, const CrookedPlane& second) {
    require_same_side(first, second);
    const bool right = first.side == PlaneSide::Right;
    const std::array<const BoundaryPoint*, 2> ends1{&first.line.a, &first.line.b};
    const std::array<const BoundaryPoint*, 2> ends2{&second.line.a, &second.line.b};

    DisjointnessReport rep;
    rep.disjoint = true;
    rep.margin = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const int idx = 2 * i + j;
            double f = std::numeric_limits<double>::quiet_NaN();
            double score = std::numeric_limits<double>::infinity();
            try {
                f = ideal_distance_change(first.g, second.g, *ends1[i], *ends2[j]);
                score = right ? f : -f;
            } catch (const Error&) {
            }
            rep.values[idx] = f;
            if (!(score < 0.0)) rep.disjoint = false;
            if (std::isfinite(f) && std::abs(f) < kMarginalBand) rep.marginal = true;
            if (score > rep.margin || idx == 0) {
                rep.margin = score;
                rep.worst = idx;
            }
        }
    }
    return rep;
}

bool disjoint_halfspaces(const HalfSpace& first, const HalfSpace& second) {
    const CrookedPlane& p = first.plane;
    const CrookedPlane& q = second.plane;
    require_same_side(p, q);
    require_oriented(p.line);
    require_oriented(q.line);
    if (!disjoint_crooked(p, q).disjoint) return false;
    if (p.side == PlaneSide::Right) return oriented_away(p.line, q.line);
    return oriented_away(mobius_apply(p.g, p.line), mobius_apply(q.g, q.line));
}

double contraction_margin_sampled(const CrookedPlane& first, const CrookedPlane& second, int grid) {
    require_same_side(first, second);
    if (grid < 2) throw Error(ErrorCode::InvalidInput, "grid must be at least 2");
    std::vector<PlanePoint> xs;
    std::vector<PlanePoint> ys;
    for (int k = 0; k < grid; ++k) {
        const double s = -kSampleWindow + 2.0 * kSampleWindow * k / (grid - 1);
        xs.push_back(point_on_line(first.line, s));
        ys.push_back(point_on_line(second.line, s));
    }
    const double sign = first.side == PlaneSide::Right ? 1.0 : -1.0;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& x : xs) {
        const PlanePoint gx = mobius_apply(first.g, x);
        for (const auto& y : ys) {
            const double change = dist(gx, mobius_apply(second.g, y)) - dist(x, y);
            best = std::max(best, sign * change);
        }
    }
    return best;
}

namespace {

// Eigenvalue of unit-determinant m on the direction of x (assumed fixed).
double eigenvalue_at(const Mat2& m, const BoundaryPoint& x) {
    const Vec2 v = x.vec();
    return dot(m * v, v);
}

// Hyperbolic element fixing both endpoints of `line`, with eigenvalue `lam`
// on the endpoint `at`.
Isometry axial(const GeodesicLine& line, const BoundaryPoint& at, double lam) {
    const Isometry frame = line_frame(line);
    const bool at_b = same_point(at, line.b, kEndpointTol);
    const Mat2 d = at_b ? Mat2::diag(lam, 1.0 / lam) : Mat2::diag(1.0 / lam, lam);
    return frame * Isometry(d) * frame.inverse();
}

Isometry parabolic_at(const GeodesicLine& line, const BoundaryPoint& at) {
    const Isometry frame = line_frame(line);
    const bool at_b = same_point(at, line.b, kEndpointTol);
    const Mat2 p = at_b ? Mat2{1.0, 1.0, 0.0, 1.0} : Mat2{1.0, 0.0, 1.0, 1.0};
    return frame * Isometry(p) * frame.inverse();
}

// Rotation about `center` sending xi to eta.
Isometry rotation_sending(const PlanePoint& center, const BoundaryPoint& xi, const BoundaryPoint& eta) {
    const double sy = std::sqrt(center.im());
    const Isometry to_center(Mat2{sy, center.re() / sy, 0.0, 1.0 / sy});
    const Vec2 u = mobius_apply(to_center.inverse(), xi).vec();
    const Vec2 w = mobius_apply(to_center.inverse(), eta).vec();
    const double psi = std::atan2(det(u, w), dot(u, w));
    const Mat2 rot{std::cos(psi), -std::sin(psi), std::sin(psi), std::cos(psi)};
    return to_center * Isometry(rot) * to_center.inverse();
}

bool common_point(const CrookedPlane& p, const CrookedPlane& q, const Isometry& h) {
    return crooked_contains(p, h) && crooked_contains(q, h);
}

Isometry right_witness(const CrookedPlane& p, const CrookedPlane& q) {
    for (const Isometry& h : {p.g, q.g}) {
        if (common_point(p, q, h)) return h;
    }
    const DisjointnessReport rep = disjoint_crooked(p, q);
    if (rep.disjoint) throw Error(ErrorCode::IsDisjoint, "planes are disjoint");

    const std::array<const BoundaryPoint*, 2> e1{&p.line.a, &p.line.b};
    const std::array<const BoundaryPoint*, 2> e2{&q.line.a, &q.line.b};
    int finite_idx = -1;
    int shared_idx = -1;
    int domain_idx = -1;
    for (int idx = 0; idx < 4; ++idx) {
        const double f = rep.values[idx];
        if (std::isnan(f)) {
            domain_idx = idx;
        } else if (f == std::numeric_limits<double>::infinity()) {
            shared_idx = idx;
        } else if (std::isfinite(f) && f >= 0.0 && (finite_idx < 0 || f > rep.values[finite_idx])) {
            finite_idx = idx;
        }
    }

    std::vector<Isometry> candidates;
    if (finite_idx >= 0) {
        // Isometry taking (xi, xi') to (g xi, g' xi') with balanced expansion.
        const Vec2 x = e1[finite_idx / 2]->vec();
        const Vec2 x2 = e2[finite_idx % 2]->vec();
        const Vec2 gx = p.g.matrix() * x;
        const Vec2 gx2 = q.g.matrix() * x2;
        const double mu = det(x, x2) / det(gx, gx2) > 0.0 ? 1.0 : -1.0;
        const Mat2 target = from_columns(gx, gx2 * mu);
        const Mat2 source = from_columns(x, x2);
        candidates.push_back(Isometry(target * source.adjugate()));
    }
    if (shared_idx >= 0) {
        // Rotation about a point of the first line, pushed toward the shared
        // endpoint until the composite repels there.
        const BoundaryPoint& xi = *e1[shared_idx / 2];
        const Isometry m = q.g.inverse() * p.g;
        const BoundaryPoint eta = mobius_apply(m.inverse(), xi);
        const double dir = same_point(xi, p.line.b, kEndpointTol) ? 1.0 : -1.0;
        for (double s = 0.5; s <= 32.0; s *= 2.0) {
            const Isometry u = rotation_sending(point_on_line(p.line, dir * s), xi, eta);
            if (std::abs(eigenvalue_at((m * u).matrix(), xi)) < 1.0) {
                candidates.push_back(p.g * u);
                break;
            }
        }
    }
    if (domain_idx >= 0) {
        const BoundaryPoint& xi = *e1[domain_idx / 2];
        const Isometry m = q.g.inverse() * p.g;
        const double kappa = std::abs(eigenvalue_at(m.matrix(), xi));
        if (kappa <= 1.0) {
            candidates.push_back(p.g * parabolic_at(p.line, xi));
        }
        candidates.push_back(p.g * axial(p.line, xi, std::exp(-1.0) / std::max(1.0, kappa)));
    }
    for (const Isometry& h : candidates) {
        if (common_point(p, q, h)) return h;
    }
    throw Error(ErrorCode::Degenerate, "no verified common point constructed");
}

}  // namespace

Isometry intersect_witness(const CrookedPlane& first, const CrookedPlane& second) {
    require_same_side(first, second);
    if (first.side == PlaneSide::Right) return right_witness(first, second);
    return right_witness(inverse_plane(first), inverse_plane(second)).inverse();
}

namespace {

// Membership in SQ(l) for l = (-1/R, 1/R) oriented toward 0:
// [[alpha, -v/R], [v R, beta]] with |alpha| < |beta|, 2|v| < |alpha - beta|.
bool in_first_quadrant(const Mat2& m, double R) {
    const double scale = m.frobenius() * R * R;
    if (std::abs(m.b * R * R + m.c) > kShapeTol * scale) return false;
    const double v = (m.c / R - m.b * R) / 2.0;
    return std::abs(m.a) < std::abs(m.d) && 2.0 * std::abs(v) < std::abs(m.a - m.d);
}

// Membership in SQ(l')^{-1} for l' = (R, -R) oriented toward infinity:
// [[alpha, v R], [-v/R, beta]] with the same inequalities.
bool in_second_inverse_quadrant(const Mat2& m, double R) {
    const double scale = m.frobenius() * R * R;
    if (std::abs(m.b + m.c * R * R) > kShapeTol * scale) return false;
    const double v = (m.b / R - m.c * R) / 2.0;
    return std::abs(m.a) < std::abs(m.d) && 2.0 * std::abs(v) < std::abs(m.a - m.d);
}

bool brings_endpoints_closer(const Mat2& h, double R) {
    for (int eps : {1, -1}) {
        for (int eps2 : {1, -1}) {
            const double lhs = std::abs(h.a * R + eps2 * h.b + eps * h.c + eps * eps2 * h.d / R);
            if (!(lhs < R + eps * eps2 / R)) return false;
        }
    }
    return true;
}

Mat2 first_generator(int eps, double R) { return {-1.0, -eps / R, eps * R, 1.0}; }
Mat2 second_generator(int eps, double R) { return {1.0, -eps * R, eps / R, -1.0}; }

struct LocalFactors {
    Mat2 first;
    Mat2 second;
    DecompositionKind kind;
};

// exp(s Y) for Y with -det(Y) = mu^2 > 0, returned as cosh/sinh pair.
Mat2 flow(const Mat2& y, double mu, double s) {
    return Mat2::identity() * std::cosh(s * mu) + y * (std::sinh(s * mu) / mu);
}

// Interior factors obtained by tilting the parabolic boundary generator into
// the open quadrant; nullopt if the tilted ray misses the other quadrant.
std::optional<LocalFactors> perturb_second(const Mat2& h, double R, int eps) {
    const double delta = kDecompositionPerturbation;
    const Mat2 y = second_generator(eps, R) + second_generator(-eps, R) * delta;
    const double mu = 2.0 * std::sqrt(delta);
    const Mat2 hy = h * y;
    const double a = h.b * R + h.c / R;
    const double b = hy.b * R + hy.c / R;
    const double th = -a * mu / b;
    if (!(th > 0.0 && th < 1.0)) return std::nullopt;
    const double s = std::atanh(th) / mu;
    const Mat2 e = flow(y, mu, s);
    LocalFactors out{h * e, flow(y, mu, -s), DecompositionKind::Interior};
    if (in_first_quadrant(out.first, R) && in_second_inverse_quadrant(out.second, R)) return out;
    return std::nullopt;
}

std::optional<LocalFactors> perturb_first(const Mat2& h, double R, int eps) {
    const double delta = kDecompositionPerturbation;
    const Mat2 y = first_generator(eps, R) + first_generator(-eps, R) * delta;
    const double mu = 2.0 * std::sqrt(delta);
    const Mat2 yh = y * h;
    const double a = h.b / R + h.c * R;
    const double b = -(yh.b / R + yh.c * R);
    const double th = -a * mu / b;
    if (!(th > 0.0 && th < 1.0)) return std::nullopt;
    const double s = std::atanh(th) / mu;
    LocalFactors out{flow(y, mu, s), flow(y, mu, -s) * h, DecompositionKind::Interior};
    if (in_first_quadrant(out.first, R) && in_second_inverse_quadrant(out.second, R)) return out;
    return std::nullopt;
}

std::optional<LocalFactors> decompose_normalized(Mat2 h, double R, bool strict) {
    if (h.a + h.d < 0.0) h = -h;
    const double scale = h.frobenius();
    if (std::abs(h.b) <= 1e-12 * scale && std::abs(h.c) <= 1e-12 * scale) {
        const Mat2 half = Mat2::diag(std::sqrt(h.a), 1.0 / std::sqrt(h.a));
        if (in_first_quadrant(half, R) && in_second_inverse_quadrant(half, R)) {
            return LocalFactors{half, half, DecompositionKind::Diagonal};
        }
        return std::nullopt;
    }
    if (in_first_quadrant(h, R)) return LocalFactors{h, Mat2::identity(), DecompositionKind::FirstOnly};
    if (in_second_inverse_quadrant(h, R)) {
        return LocalFactors{Mat2::identity(), h, DecompositionKind::SecondOnly};
    }
    std::optional<LocalFactors> boundary;
    for (int eps : {1, -1}) {
        const double num = h.b * R + h.c / R;
        const double den = R * (eps * h.a * R + h.b) - (h.c + eps * h.d / R) / R;
        const double t = num / den;
        if (!(t > 0.0) || !std::isfinite(t)) continue;
        const Mat2 gen = second_generator(eps, R);
        const Mat2 par = Mat2::identity() + gen * t;
        const LocalFactors f{h * par, Mat2::identity() - gen * t, DecompositionKind::SecondBoundary};
        if (!in_first_quadrant(f.first, R)) continue;
        if (strict) {
            if (auto inner = perturb_second(h, R, eps)) return inner;
        }
        if (!boundary) boundary = f;
    }
    for (int eps : {1, -1}) {
        const double num = h.c * R + h.b / R;
        const double den = R * (eps * h.a * R + h.c) - (h.b + eps * h.d / R) / R;
        const double t = num / den;
        if (!(t > 0.0) || !std::isfinite(t)) continue;
        const Mat2 gen = first_generator(eps, R);
        const LocalFactors f{Mat2::identity() + gen * t, (Mat2::identity() - gen * t) * h,
                             DecompositionKind::FirstBoundary};
        if (!in_second_inverse_quadrant(f.second, R)) continue;
        if (strict) {
            if (auto inner = perturb_first(h, R, eps)) return inner;
        }
        if (!boundary) boundary = f;
    }
    return boundary;
}

}  // namespace

bool stem_quadrant_contains(const GeodesicLine& oriented_line, const Isometry& h) {
    const GeodesicLine line = require_oriented(oriented_line);
    // Unit-circle frame with the positive side inside the circle.
    const GeodesicLine ray = *line.orient == Orientation::PositiveRight ? line : GeodesicLine(line.b, line.a);
    const Isometry frame = unit_circle_frame(ray);
    return in_first_quadrant((frame.inverse() * h * frame).matrix(), 1.0);
}

Decomposition sq_decompose(const Isometry& h, const GeodesicLine& first, const GeodesicLine& second,
                           bool strict_interior) {
    if (h.is_identity()) return {Isometry{}, Isometry{}, DecompositionKind::Identity};
    require_oriented(first);
    require_oriented(second);
    NormalizedPair np;
    try {
        if (!oriented_away(first, second)) {
            throw Error(ErrorCode::Degenerate, "lines are not oriented away from each other");
        }
        np = normalize_pair(first, second);
    } catch (const Error& err) {
        if (err.code() == ErrorCode::Degenerate) throw;
        throw Error(ErrorCode::Degenerate, err.what());
    }
    const Mat2 local = (np.k * h * np.k.inverse()).matrix();
    if (!brings_endpoints_closer(local, np.R)) {
        throw Error(ErrorCode::NotInProduct, "endpoint inequalities fail");
    }
    const auto found = decompose_normalized(local, np.R, strict_interior);
    if (!found) throw Error(ErrorCode::NotInProduct, "no factorization found");
    const Isometry kinv = np.k.inverse();
    return {kinv * Isometry(found->first) * np.k, kinv * Isometry(found->second) * np.k, found->kind};
}

bool sq_criterion(const CrookedPlane& first, const CrookedPlane& second) {
    require_same_side(first, second);
    if (first.side == PlaneSide::Left) return sq_criterion(inverse_plane(first), inverse_plane(second));
    const GeodesicLine& l1 = first.line;
    const GeodesicLine& l2 = second.line;
    if (lines_cross(l1, l2)) return false;
    try {
        normalize_pair(l1, l2);
    } catch (const Error&) {
        return false;
    }
    const GeodesicLine away1 = orient_toward(l1, l2.a).reversed_orientation();
    const GeodesicLine away2 = orient_toward(l2, l1.a).reversed_orientation();
    if (lines_cross(mobius_apply(first.g, away1), mobius_apply(second.g, away2))) {
        throw Error(ErrorCode::Degenerate, "image lines intersect");
    }
    try {
        const Decomposition dec = sq_decompose(first.g.inverse() * second.g, away1, away2, true);
        switch (dec.kind) {
            case DecompositionKind::Interior:
            case DecompositionKind::Diagonal:
            case DecompositionKind::FirstOnly:
            case DecompositionKind::SecondOnly: return true;
            default: return false;
        }
    } catch (const Error& err) {
        if (err.code() == ErrorCode::NotInProduct) return false;
        throw;
    }
}

}  // namespace crooked
