#include "crooked/mink.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace crooked {

namespace {

constexpr double kTraceTol = 1e-12;
constexpr double kZeroFieldTol = 1e-14;
constexpr double kParabolicDetTol = 1e-12;
constexpr double kFieldMembershipTol = 1e-9;
constexpr double kMembershipBand = 1e-6;
constexpr double kShapeTol = 1e-9;
constexpr double kConeSlack = 1e-10;
constexpr double kSampleWindow = 20.0;

using Column = MinkCoords;

double det3(const Column& c0, const Column& c1, const Column& c2) {
    return c0[0] * (c1[1] * c2[2] - c1[2] * c2[1]) - c1[0] * (c0[1] * c2[2] - c0[2] * c2[1]) +
           c2[0] * (c0[1] * c1[2] - c0[2] * c1[1]);
}

double norm3(const Column& c) { return std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]); }

Column sub3(const Column& x, const Column& y) { return {x[0] - y[0], x[1] - y[1], x[2] - y[2]}; }

// Solves the k x k system (k <= 3) by Gaussian elimination with partial
// pivoting; nullopt when a pivot vanishes.
std::optional<std::array<double, 3>> solve_small(std::array<std::array<double, 3>, 3> a, std::array<double, 3> rhs,
                                                 int k) {
    double scale = 0.0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) scale = std::max(scale, std::abs(a[i][j]));
    if (scale == 0.0) return std::nullopt;
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int row = col + 1; row < k; ++row)
            if (std::abs(a[row][col]) > std::abs(a[piv][col])) piv = row;
        if (std::abs(a[piv][col]) <= 1e-13 * scale) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(rhs[piv], rhs[col]);
        for (int row = col + 1; row < k; ++row) {
            const double f = a[row][col] / a[col][col];
            for (int j = col; j < k; ++j) a[row][j] -= f * a[col][j];
            rhs[row] -= f * rhs[col];
        }
    }
    std::array<double, 3> x{};
    for (int row = k - 1; row >= 0; --row) {
        double s = rhs[row];
        for (int j = row + 1; j < k; ++j) s -= a[row][j] * x[j];
        x[row] = s / a[row][row];
    }
    return x;
}

// Nonnegative x with sum x_i cols_i = target, searched over basic solutions
// (column subsets of size at most 3).
std::optional<std::vector<double>> nonnegative_combination(const std::vector<Column>& cols, const Column& target) {
    double scale = norm3(target);
    for (const auto& c : cols) scale = std::max(scale, norm3(c));
    const double tol = 1e-10 * std::max(scale, 1.0);
    const int n = static_cast<int>(cols.size());
    if (norm3(target) <= tol) return std::vector<double>(cols.size(), 0.0);

    for (int k = 1; k <= 3; ++k) {
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            std::array<std::array<double, 3>, 3> gram{};
            std::array<double, 3> rhs{};
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < k; ++j) {
                    const auto& ci = cols[idx[i]];
                    const auto& cj = cols[idx[j]];
                    gram[i][j] = ci[0] * cj[0] + ci[1] * cj[1] + ci[2] * cj[2];
                }
                const auto& ci = cols[idx[i]];
                rhs[i] = ci[0] * target[0] + ci[1] * target[1] + ci[2] * target[2];
            }
            if (auto x = solve_small(gram, rhs, k)) {
                Column fit{0.0, 0.0, 0.0};
                bool nonneg = true;
                for (int i = 0; i < k; ++i) {
                    nonneg = nonneg && (*x)[i] >= -tol;
                    for (int r = 0; r < 3; ++r) fit[r] += (*x)[i] * cols[idx[i]][r];
                }
                if (nonneg && norm3(sub3(fit, target)) <= tol) {
                    std::vector<double> out(cols.size(), 0.0);
                    for (int i = 0; i < k; ++i) out[idx[i]] = std::max((*x)[i], 0.0);
                    return out;
                }
            }
            int pos = k - 1;
            while (pos >= 0 && idx[pos] == n - k + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
        }
    }
    return std::nullopt;
}

// Strictly positive x with sum x_i cols_i = target for four columns spanning
// R^3: a particular solution plus a line along the kernel.
bool in_open_cone(const std::array<Column, 4>& cols, const Column& target) {
    std::array<double, 4> kernel{};
    for (int j = 0; j < 4; ++j) {
        std::array<Column, 3> rest{};
        int r = 0;
        for (int i = 0; i < 4; ++i)
            if (i != j) rest[r++] = cols[i];
        kernel[j] = ((j % 2) ? -1.0 : 1.0) * det3(rest[0], rest[1], rest[2]);
    }
    double col_scale = 0.0;
    for (const auto& c : cols) col_scale = std::max(col_scale, norm3(c));
    const int drop = static_cast<int>(
        std::max_element(kernel.begin(), kernel.end(), [](double x, double y) { return std::abs(x) < std::abs(y); }) -
        kernel.begin());
    const double kn = std::sqrt(kernel[0] * kernel[0] + kernel[1] * kernel[1] + kernel[2] * kernel[2] +
                                kernel[3] * kernel[3]);
    if (!(kn > 1e-12 * col_scale * col_scale * col_scale)) return false;  // cone has empty interior

    std::array<std::array<double, 3>, 3> a{};
    std::array<int, 3> keep{};
    int r = 0;
    for (int i = 0; i < 4; ++i)
        if (i != drop) keep[r++] = i;
    for (int row = 0; row < 3; ++row)
        for (int c = 0; c < 3; ++c) a[row][c] = cols[keep[c]][row];
    const auto sol = solve_small(a, target, 3);
    if (!sol) return false;
    std::array<double, 4> base{};
    for (int c = 0; c < 3; ++c) base[keep[c]] = (*sol)[c];

    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
        const double ni = kernel[i] / kn;
        if (std::abs(ni) <= 1e-15) {
            if (!(base[i] > 0.0)) return false;
        } else if (ni > 0.0) {
            lo = std::max(lo, -base[i] / ni);
        } else {
            hi = std::min(hi, -base[i] / ni);
        }
    }
    return hi - lo > kConeSlack * std::max(norm3(target), 1e-300);
}

// Polyhedral pieces of C(line) through the origin, in the frame sending the
// line to (0, inf): two stem quadrants and two wing half-planes.
std::vector<std::vector<KillingField>> left_pieces(const GeodesicLine& line) {
    const Isometry frame = line_frame(line);
    auto f = [&](double a, double b, double c) { return KillingField(Mat2{a, b, c, -a}).conjugated(frame); };
    const KillingField to_inf_up = f(0, -1, 0);  // parabolic fixing infinity
    const KillingField to_zero_up = f(0, 0, 1);  // parabolic fixing 0
    return {
        {to_inf_up, to_zero_up},
        {-to_inf_up, -to_zero_up},
        {f(1, 0, 0), to_inf_up, -to_inf_up},
        {f(-1, 0, 0), to_zero_up, -to_zero_up},
    };
}

std::vector<std::vector<KillingField>> plane_pieces(const MinkCrookedPlane& plane) {
    auto pieces = left_pieces(plane.line);
    if (plane.side == PlaneSide::Right) {
        for (auto& piece : pieces)
            for (auto& x : piece) x = -x;
    }
    return pieces;
}

GeodesicLine facing_away(const GeodesicLine& line, const GeodesicLine& other) {
    return orient_toward(line, point_on_line(other, 0.0)).reversed_orientation();
}

}  // namespace

KillingField::KillingField(const Mat2& m) {
    const double tr = m.trace();
    if (!std::isfinite(m.frobenius()) || std::abs(tr) > kTraceTol * std::max(1.0, m.frobenius())) {
        throw Error(ErrorCode::DomainError, "Killing field needs a traceless matrix");
    }
    m_ = m - Mat2::identity() * (tr / 2.0);
}

KillingField KillingField::from_coords(const MinkCoords& z) {
    return KillingField(Mat2{z[0], z[1] - z[2], z[1] + z[2], -z[0]}, Raw{});
}

MinkCoords KillingField::coords() const { return {m_.a, (m_.b + m_.c) / 2.0, (m_.c - m_.b) / 2.0}; }

double KillingField::quadratic() const {
    const auto z = coords();
    return z[0] * z[0] + z[1] * z[1] - z[2] * z[2];
}

KillingField KillingField::conjugated(const Isometry& g) const {
    const Mat2& k = g.matrix();
    return KillingField(k * m_ * k.adjugate(), Raw{});
}

KillingClassification killing_classify(const KillingField& x) {
    const Mat2& y = x.matrix();
    const double p = y.a;
    const double q = y.b;
    const double r = y.c;
    const double scale = x.norm();
    KillingClassification out;
    if (scale <= kZeroFieldTol) return out;
    const double disc = p * p + q * r;  // -det
    auto longer = [](Vec2 u, Vec2 v) { return u.norm() >= v.norm() ? u : v; };
    if (std::abs(disc) <= kParabolicDetTol * scale * scale) {
        out.kind = KillingKind::Parabolic;
        out.attracting = BoundaryPoint(longer({q, -p}, {p, r}));
        out.repelling = out.attracting;
    } else if (disc < 0.0) {
        out.kind = KillingKind::Elliptic;
        const double im = std::sqrt(-disc) / std::abs(r);
        out.center = PlanePoint(Complex(p / r, im));
    } else {
        out.kind = KillingKind::Hyperbolic;
        const double lam = std::sqrt(disc);
        out.attracting = BoundaryPoint(longer({q, lam - p}, {p + lam, r}));
        out.repelling = BoundaryPoint(longer({q, -lam - p}, {p - lam, r}));
    }
    return out;
}

Membership mink_crooked_membership(const MinkCrookedPlane& plane, const KillingField& x) {
    const Isometry frame = line_frame(plane.line);
    KillingField rel = (x - plane.v).conjugated(frame.inverse());
    if (plane.side == PlaneSide::Right) rel = -rel;
    // Left membership in the frame where the line is (0, inf).
    const Mat2& y = rel.matrix();
    const double scale = rel.norm();
    Membership out;
    if (scale <= kZeroFieldTol) {
        out.member = true;
        out.part = PlanePart::StemBoundary;
        return out;
    }
    const double tol = kFieldMembershipTol * scale;
    const double band = kMembershipBand * scale;
    const double p = y.a;
    const double q = y.b;
    const double r = y.c;
    if (std::abs(p) <= tol) {
        if (q * r < -tol * scale) {
            out.member = true;
            out.part = PlanePart::Stem;
            return out;
        }
        if (std::abs(q * r) <= tol * scale) {
            out.member = true;
            out.part = PlanePart::StemBoundary;
            return out;
        }
    }
    // Wings: infinity fixed and attracting (p > 0), or 0 fixed and attracting (p < 0).
    if (std::abs(r) <= tol && p > 0.0) {
        out.member = true;
        out.part = PlanePart::WingPlus;
    } else if (std::abs(q) <= tol && p < 0.0) {
        out.member = true;
        out.part = PlanePart::WingMinus;
    } else {
        out.borderline = std::abs(p) <= band || std::abs(r) <= band || std::abs(q) <= band;
    }
    return out;
}

bool mink_crooked_contains(const MinkCrookedPlane& plane, const KillingField& x) {
    return mink_crooked_membership(plane, x).member;
}

HalfSpaceSide mink_halfspace_side(const MinkHalfSpace& half, const KillingField& x) {
    const MinkCrookedPlane& plane = half.plane;
    if (!plane.line.orient) throw Error(ErrorCode::DomainError, "half-space needs an oriented line");
    if (mink_crooked_contains(plane, x)) return HalfSpaceSide::OnPlane;
    const KillingClassification cl = killing_classify(x - plane.v);
    Side side = Side::On;
    switch (cl.kind) {
        case KillingKind::Zero: return HalfSpaceSide::OnPlane;
        case KillingKind::Elliptic: side = side_of(plane.line, *cl.center); break;
        case KillingKind::Parabolic: side = side_of(plane.line, cl.attracting); break;
        case KillingKind::Hyperbolic:
            side = side_of(plane.line, plane.side == PlaneSide::Left ? cl.attracting : cl.repelling);
            break;
    }
    return side == Side::Positive ? HalfSpaceSide::Inside : HalfSpaceSide::Outside;
}

std::vector<KillingField> mink_sample_crooked(const MinkCrookedPlane& plane, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> window(-kSampleWindow, kSampleWindow);
    std::uniform_real_distribution<double> rate(0.0, kSampleWindow);
    std::bernoulli_distribution coin(0.5);
    const Isometry frame = line_frame(plane.line);
    const std::size_t n_stem = (2 * n) / 5;
    const std::size_t n_boundary = n / 5;

    auto left_sample = [&](std::size_t idx) -> Mat2 {
        if (idx == 0) return Mat2::zero();
        if (idx < n_stem + 1) {
            // Infinitesimal rotation about i e^s.
            const double height = std::exp(window(rng));
            const double w = window(rng);
            return Mat2{0.0, -height * w, w / height, 0.0};
        }
        if (idx < n_stem + n_boundary) {
            const double t = window(rng);
            return coin(rng) ? Mat2{0.0, t, 0.0, 0.0} : Mat2{0.0, 0.0, t, 0.0};
        }
        double lam = rate(rng);
        while (lam <= 0.0) lam = rate(rng);
        const double other = window(rng);
        // Attracting infinity, repelling `other`; or the mirror image at 0.
        if (coin(rng)) return Mat2{lam, -2.0 * lam * other, 0.0, -lam};
        return Mat2{-lam, 0.0, -2.0 * lam * other, lam};
    };

    std::vector<KillingField> out;
    out.reserve(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        KillingField u = KillingField(left_sample(idx)).conjugated(frame);
        if (plane.side == PlaneSide::Right) u = -u;
        out.push_back(u + plane.v);
    }
    return out;
}

std::array<KillingField, 2> stem_quadrant_generators(const GeodesicLine& oriented_line) {
    if (!oriented_line.orient) throw Error(ErrorCode::DomainError, "stem quadrant needs an oriented line");
    const GeodesicLine ray = *oriented_line.orient == Orientation::PositiveRight
                                 ? oriented_line
                                 : GeodesicLine(oriented_line.b, oriented_line.a, Orientation::PositiveRight);
    const Isometry frame = unit_circle_frame(ray);
    return {KillingField(Mat2{-1.0, -1.0, 1.0, 1.0}).conjugated(frame),
            KillingField(Mat2{-1.0, 1.0, -1.0, 1.0}).conjugated(frame)};
}

bool mink_stem_quadrant_contains(const GeodesicLine& oriented_line, const KillingField& x) {
    const auto [up, um] = stem_quadrant_generators(oriented_line);
    const auto a = up.coords();
    const auto b = um.coords();
    const auto z = x.coords();
    // z = s a + t b with s, t > 0: solve on the plane spanned by a, b.
    const double aa = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
    const double bb = b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
    const double ab = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    const double az = a[0] * z[0] + a[1] * z[1] + a[2] * z[2];
    const double bz = b[0] * z[0] + b[1] * z[1] + b[2] * z[2];
    const double gram = aa * bb - ab * ab;
    const double s = (az * bb - bz * ab) / gram;
    const double t = (bz * aa - az * ab) / gram;
    const Column fit{s * a[0] + t * b[0], s * a[1] + t * b[1], s * a[2] + t * b[2]};
    if (norm3(sub3(fit, z)) > kShapeTol * std::max(norm3(z), 1e-300)) return false;
    return s > 0.0 && t > 0.0;
}

bool mink_stem_quadrant_contains_geometric(const GeodesicLine& oriented_line, const KillingField& x) {
    if (!oriented_line.orient) throw Error(ErrorCode::DomainError, "stem quadrant needs an oriented line");
    const KillingClassification cl = killing_classify(x);
    if (cl.kind != KillingKind::Hyperbolic) return false;
    // Axis orthogonal to the line: the line's reflection swaps the fixed points.
    const GeodesicLine ray = GeodesicLine(oriented_line.a, oriented_line.b, Orientation::PositiveRight);
    const Isometry frame = unit_circle_frame(ray).inverse();
    const BoundaryPoint att = mobius_apply(frame, cl.attracting);
    const BoundaryPoint rep = mobius_apply(frame, cl.repelling);
    const Vec2 inverted{att.vec().y, att.vec().x};
    if (!same_point(BoundaryPoint(inverted), rep, kShapeTol)) return false;
    return side_of(oriented_line, cl.attracting) == Side::Positive;
}

bool mink_disjoint(const MinkCrookedPlane& first, const MinkCrookedPlane& second) {
    if (first.side != second.side) throw Error(ErrorCode::MixedSides, "planes have different sides");
    if (lines_cross(first.line, second.line)) return false;
    const auto [u_p, u_m] = stem_quadrant_generators(facing_away(first.line, second.line));
    const auto [w_p, w_m] = stem_quadrant_generators(facing_away(second.line, first.line));
    KillingField diff = second.v - first.v;
    // C*(l) = -C(l): Right planes reduce to Left ones with negated offsets.
    if (first.side == PlaneSide::Right) diff = -diff;
    const std::array<Column, 4> cols{w_p.coords(), w_m.coords(), (-u_p).coords(), (-u_m).coords()};
    return in_open_cone(cols, diff.coords());
}

std::optional<KillingField> mink_intersect_witness(const MinkCrookedPlane& first, const MinkCrookedPlane& second) {
    const auto pieces1 = plane_pieces(first);
    const auto pieces2 = plane_pieces(second);
    const Column target = (second.v - first.v).coords();
    for (const auto& p1 : pieces1) {
        for (const auto& p2 : pieces2) {
            std::vector<Column> cols;
            for (const auto& x : p1) cols.push_back(x.coords());
            for (const auto& x : p2) cols.push_back((-x).coords());
            const auto sol = nonnegative_combination(cols, target);
            if (!sol) continue;
            KillingField point = first.v;
            for (std::size_t i = 0; i < p1.size(); ++i) point = point + p1[i] * (*sol)[i];
            if (mink_crooked_contains(first, point) && mink_crooked_contains(second, point)) return point;
        }
    }
    return std::nullopt;
}

Isometry exp_killing(const KillingField& x) { return Isometry::from_unimodular(exp_traceless(x.matrix())); }

}  // namespace crooked
