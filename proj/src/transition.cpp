#include "crooked/transition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crooked {

namespace {

constexpr double kSingularTol = 1e-14;

template <typename V>
V canonical_sign(V v) {
    const double* d = v.data();
    const auto* peak = std::max_element(d, d + v.size(), [](double x, double y) { return std::abs(x) < std::abs(y); });
    return *peak < 0 ? V(-v) : v;
}

// 2 atan2(|p - q|, |p + q|) after aligning signs: accurate at small angles.
template <typename V>
double unit_angle(const V& p, const V& q) {
    const V qq = p.dot(q) < 0 ? V(-q) : q;
    return 2.0 * std::atan2((p - qq).norm(), (p + qq).norm());
}

Mat2 from_y(const Eigen::Vector4d& y) { return {y(0) + y(3), y(1) - y(2), y(1) + y(2), -y(0) + y(3)}; }

Eigen::Vector4d to_y(const Mat2& m) {
    return {(m.a - m.d) / 2.0, (m.b + m.c) / 2.0, (m.c - m.b) / 2.0, (m.a + m.d) / 2.0};
}

Eigen::Vector3d to_z(const KillingField& x) {
    const auto z = x.coords();
    return {z[0], z[1], z[2]};
}

// Velocity q + 2 p z - r z^2 of the flow of [[p, q], [r, -p]] at z.
Complex field_at(const KillingField& x, Complex z) {
    const Mat2& m = x.matrix();
    return m.b + 2.0 * m.a * z - m.c * z * z;
}

// Euclidean unit direction at x of the geodesic toward `target`.
Complex direction_toward(const PlanePoint& x, const Place& target) {
    const Isometry to_i(Mat2{1.0, -x.re(), 0.0, x.im()});
    Complex w;
    if (const auto* p = std::get_if<PlanePoint>(&target)) {
        const Complex z = mobius_apply(to_i, *p).z();
        w = (z - Complex(0, 1)) / (z + Complex(0, 1));
    } else {
        const BoundaryPoint b = mobius_apply(to_i, std::get<BoundaryPoint>(target));
        if (b.is_infinity()) return {0.0, 1.0};
        const double xi = b.to_real();
        w = (xi - Complex(0, 1)) / (xi + Complex(0, 1));
    }
    if (std::abs(w) == 0.0) throw Error(ErrorCode::DomainError, "direction toward the point itself");
    return Complex(0, 1) * w / std::abs(w);
}

double component_at(const KillingField& x, const PlanePoint& p, Complex dir) {
    return std::real(field_at(x, p.z()) * std::conj(dir)) / p.im();
}

void require_closures_disjoint(const GeodesicLine& a, const GeodesicLine& b) {
    normalize_pair(a, b);
}

GeodesicLine away_from(const GeodesicLine& line, const GeodesicLine& other) {
    return orient_toward(line, point_on_line(other, 0.0)).reversed_orientation();
}

// Compactified arclength: u in [-1, 1], with the endpoints ideal. Beyond
// arclength 15 the component agrees with its ideal limit to roundoff, while
// farther points lose precision.
Place place_on(const GeodesicLine& line, double u) {
    constexpr double kFar = 15.0;
    const double s = 3.0 * std::atanh(std::clamp(u, -1.0, 1.0));
    if (s <= -kFar) return line.a;
    if (s >= kFar) return line.b;
    return point_on_line(line, s);
}

double sup_component(const KillingField& y, const GeodesicLine& from, const GeodesicLine& to) {
    auto value = [&](double u, double v) { return killing_component(y, place_on(from, u), place_on(to, v)); };
    constexpr int kGrid = 40;
    struct Probe {
        double u, v, f;
    };
    std::vector<Probe> grid;
    for (int i = 0; i <= kGrid; ++i) {
        for (int j = 0; j <= kGrid; ++j) {
            const double u = -1.0 + 2.0 * i / kGrid;
            const double v = -1.0 + 2.0 * j / kGrid;
            grid.push_back({u, v, value(u, v)});
        }
    }
    std::partial_sort(grid.begin(), grid.begin() + 4, grid.end(), [](const Probe& p, const Probe& q) { return p.f > q.f; });
    double best = grid.front().f;
    // Pattern search from the best grid points.
    for (int s = 0; s < 4; ++s) {
        Probe cur = grid[s];
        double step = 2.0 / kGrid;
        while (step > 1e-12) {
            bool moved = false;
            for (const auto& [du, dv] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
                const double u = std::clamp(cur.u + du * step, -1.0, 1.0);
                const double v = std::clamp(cur.v + dv * step, -1.0, 1.0);
                const double f = value(u, v);
                if (f > cur.f) {
                    cur = {u, v, f};
                    moved = true;
                }
            }
            if (!moved) step /= 2.0;
        }
        best = std::max(best, cur.f);
    }
    return best;
}

bool contraction_holds(const StripData& strip, double k, double t) {
    static constexpr std::array<double, 7> kSamples{-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0};
    for (const auto& [ia, ib] : strip.adjacency) {
        const StripArc& a = strip.arcs[ia];
        const StripArc& b = strip.arcs[ib];
        const Isometry fa = exp_killing(a.v * t);
        const Isometry fb = exp_killing(b.v * t);
        for (double s : kSamples) {
            for (double s2 : kSamples) {
                const PlanePoint x = point_on_line(a.line, s);
                const PlanePoint y = point_on_line(b.line, s2);
                if (dist(mobius_apply(fa, x), mobius_apply(fb, y)) > dist(x, y) - 0.5 * k * t) return false;
            }
        }
    }
    return true;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
    return out;
}

// Parameter grid of the left crooked plane over (0, inf): stem rotations,
// parabolic stem boundary, and the two wings.
std::vector<Mat2> left_plane_grid(int n) {
    std::vector<Mat2> out;
    for (double s : linspace(-2.0, 2.0, n)) {
        const double h = std::exp(s);
        for (double w : linspace(-2.0, 2.0, n)) out.push_back({0.0, -h * w, w / h, 0.0});
    }
    for (double t : linspace(-3.0, 3.0, n)) {
        out.push_back({0.0, t, 0.0, 0.0});
        out.push_back({0.0, 0.0, t, 0.0});
    }
    for (int i = 1; i <= n; ++i) {
        const double lam = 2.0 * i / n;
        for (double o : linspace(-2.0, 2.0, n)) {
            out.push_back({lam, -2.0 * lam * o, 0.0, -lam});
            out.push_back({-lam, 0.0, -2.0 * lam * o, lam});
        }
    }
    return out;
}

}  // namespace

ProjPoint::ProjPoint(const Eigen::Vector4d& y) {
    const double n = y.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::DomainError, "projective point needs a nonzero vector");
    y_ = canonical_sign(Eigen::Vector4d(y / n));
}

Eigen::Vector3d ProjPoint::chart() const {
    if (std::abs(y_(3)) <= 1e-300) throw Error(ErrorCode::DomainError, "point lies on the plane at infinity");
    return y_.head<3>() / y_(3);
}

double proj_distance(const ProjPoint& p, const ProjPoint& q) { return unit_angle(p.coords(), q.coords()); }

ProjMap::ProjMap(const Eigen::Matrix4d& m) {
    const double n = m.norm();
    if (!(n > 0.0) || !std::isfinite(n) || std::abs((m / n).determinant()) <= kSingularTol) {
        throw Error(ErrorCode::DomainError, "projective map needs an invertible matrix");
    }
    m_ = canonical_sign(Eigen::Matrix4d(m / n));
}

ProjPoint ProjMap::apply(const ProjPoint& p) const { return ProjPoint(m_ * p.coords()); }

double proj_map_distance(const ProjMap& f, const ProjMap& g) {
    const Eigen::Map<const Eigen::Matrix<double, 16, 1>> a(f.matrix().data());
    const Eigen::Map<const Eigen::Matrix<double, 16, 1>> b(g.matrix().data());
    return unit_angle(Eigen::Matrix<double, 16, 1>(a), Eigen::Matrix<double, 16, 1>(b));
}

ProjPoint embed_I(const Isometry& g) { return ProjPoint(to_y(g.matrix())); }

ProjPoint embed_i(const KillingField& x) {
    const auto z = x.coords();
    return ProjPoint(Eigen::Vector4d{z[0], z[1], z[2], 1.0});
}

double ads_quadric(const ProjPoint& p) {
    const auto& y = p.coords();
    return y(0) * y(0) + y(1) * y(1) - y(2) * y(2) - y(3) * y(3);
}

ProjMap rescale(double t) {
    if (!(t > 0.0)) throw Error(ErrorCode::DomainError, "rescaling needs t > 0");
    return ProjMap(Eigen::Vector4d(1.0 / t, 1.0 / t, 1.0 / t, 1.0).asDiagonal().toDenseMatrix());
}

ProjMap pushforward_Istar(const Isometry& h, const Isometry& k) {
    const Mat2 hm = h.matrix();
    const Mat2 kinv = k.inverse().matrix();
    Eigen::Matrix4d m;
    for (int c = 0; c < 4; ++c) m.col(c) = to_y(hm * from_y(Eigen::Vector4d::Unit(c)) * kinv);
    return ProjMap(m);
}

ProjMap pushforward_istar(const Isometry& h, const KillingField& u) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    for (int c = 0; c < 3; ++c) {
        MinkCoords e{};
        e[c] = 1.0;
        m.block<3, 1>(0, c) = to_z(KillingField::from_coords(e).conjugated(h));
    }
    m.block<3, 1>(0, 3) = to_z(u);
    m(3, 3) = 1.0;
    return ProjMap(m);
}

double limit_residual(const std::function<Isometry(double)>& path, const KillingField& derivative, double t) {
    return proj_distance(rescale(t).apply(embed_I(path(t))), embed_i(derivative));
}

double limit_residual_pair(const std::function<std::pair<Isometry, Isometry>(double)>& path, const Isometry& h0,
                           const KillingField& derivative, double t) {
    const auto [h, k] = path(t);
    const ProjMap r = rescale(t);
    return proj_map_distance(r * pushforward_Istar(h, k) * r.inverse(), pushforward_istar(h0, derivative));
}

double loglog_slope(const std::vector<double>& ts, const std::vector<double>& residuals) {
    if (ts.size() != residuals.size() || ts.size() < 2) {
        throw Error(ErrorCode::InvalidInput, "slope fit needs at least two matched samples");
    }
    const auto n = static_cast<double>(ts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!(ts[i] > 0.0) || !(residuals[i] > 0.0)) {
            throw Error(ErrorCode::DomainError, "slope fit needs positive samples");
        }
        const double x = std::log(ts[i]);
        const double y = std::log(residuals[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double killing_component(const KillingField& x, const Place& from, const Place& to) {
    if (const auto* p = std::get_if<PlanePoint>(&from)) return component_at(x, *p, direction_toward(*p, to));
    if (const auto* q = std::get_if<PlanePoint>(&to)) return -component_at(x, *q, direction_toward(*q, from));
    const Isometry frame = line_frame(GeodesicLine(std::get<BoundaryPoint>(from), std::get<BoundaryPoint>(to)));
    return 2.0 * x.conjugated(frame.inverse()).matrix().a;
}

StripVerdict strip_condition_check(const StripData& strip) {
    const int n = static_cast<int>(strip.arcs.size());
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) require_closures_disjoint(strip.arcs[a].line, strip.arcs[b].line);
    }
    StripVerdict out;
    out.k = std::numeric_limits<double>::infinity();
    for (const auto& [ia, ib] : strip.adjacency) {
        if (ia < 0 || ib < 0 || ia >= n || ib >= n || ia == ib) {
            throw Error(ErrorCode::InvalidInput, "adjacency refers to a missing arc");
        }
        const StripArc& a = strip.arcs[ia];
        const StripArc& b = strip.arcs[ib];
        const GeodesicLine la = away_from(a.line, b.line);
        const GeodesicLine lb = away_from(b.line, a.line);
        if (!mink_disjoint({PlaneSide::Right, a.v, la}, {PlaneSide::Right, b.v, lb})) {
            out.violation = {ia, ib};
            out.reason = "difference of Killing fields leaves the open stem-quadrant cone";
            out.k = 0.0;
            return out;
        }
        const double k_pair = -sup_component(b.v - a.v, a.line, b.line);
        if (!(k_pair > 0.0)) {
            out.violation = {ia, ib};
            out.reason = "component along connecting geodesics is not bounded below zero";
            out.k = k_pair;
            return out;
        }
        out.k = std::min(out.k, k_pair);
    }
    out.ok = true;
    return out;
}

double admissible_time(const StripData& strip, double k, double t0) {
    if (!(t0 > 0.0)) throw Error(ErrorCode::DomainError, "initial time must be positive");
    double t = t0;
    for (int n = 0; n < 60; ++n, t /= 2.0) {
        if (contraction_holds(strip, k, t)) return t;
    }
    throw Error(ErrorCode::DomainError, "sampled contraction fails for every tried t");
}

std::vector<CloudPair> rescaled_family(const StripData& strip, double t, int density) {
    if (density < 2) throw Error(ErrorCode::InvalidInput, "density must be at least 2");
    const StripVerdict verdict = strip_condition_check(strip);
    if (!verdict.ok) throw Error(ErrorCode::DomainError, "strip condition fails: " + verdict.reason);
    if (!strip.adjacency.empty() && !contraction_holds(strip, verdict.k, t)) {
        throw Error(ErrorCode::DomainError, "t too large for the sampled contraction");
    }
    const ProjMap r = rescale(t);
    const std::vector<Mat2> grid = left_plane_grid(density);
    std::vector<CloudPair> out;
    for (const StripArc& arc : strip.arcs) {
        const Isometry frame = line_frame(arc.line);
        const Isometry shift = exp_killing(arc.v * t);
        CloudPair pair;
        pair.rescaled.reserve(grid.size());
        pair.limit.reserve(grid.size());
        for (const Mat2& m : grid) {
            // Right plane: negatives of left-plane fields.
            const KillingField x = -KillingField(m).conjugated(frame);
            pair.limit.push_back(embed_i(arc.v + x));
            pair.rescaled.push_back(r.apply(embed_I(shift * exp_killing(x * t))));
        }
        out.push_back(std::move(pair));
    }
    return out;
}

double hausdorff_window(const std::vector<ProjPoint>& a, const std::vector<ProjPoint>& b, double window) {
    auto charts = [](const std::vector<ProjPoint>& pts) {
        std::vector<Eigen::Vector3d> out;
        for (const auto& p : pts) {
            if (std::abs(p.coords()(3)) > 1e-12) out.push_back(p.chart());
        }
        return out;
    };
    const auto ca = charts(a);
    const auto cb = charts(b);
    auto one_sided = [window](const std::vector<Eigen::Vector3d>& from, const std::vector<Eigen::Vector3d>& to) {
        double worst = -1.0;
        for (const auto& p : from) {
            if (p.cwiseAbs().maxCoeff() > window) continue;
            double nearest = std::numeric_limits<double>::infinity();
            for (const auto& q : to) nearest = std::min(nearest, (p - q).squaredNorm());
            worst = std::max(worst, nearest);
        }
        return worst;
    };
    const double d1 = one_sided(ca, cb);
    const double d2 = one_sided(cb, ca);
    if (d1 < 0.0 || d2 < 0.0) throw Error(ErrorCode::EmptyWindow, "no cloud point inside the window");
    return std::sqrt(std::max(d1, d2));
}

std::vector<ConvergenceRow> convergence_table(const StripData& strip, const std::vector<double>& ts, double window,
                                              int density) {
    std::vector<ConvergenceRow> rows;
    for (double t : ts) {
        ConvergenceRow row{t, 0.0, 0.0};
        const auto clouds = rescaled_family(strip, t, density);
        for (std::size_t i = 0; i < clouds.size(); ++i) {
            const KillingField v = strip.arcs[i].v;
            row.residual = std::max(row.residual, limit_residual([&](double s) { return exp_killing(v * s); }, v, t));
            row.hausdorff = std::max(row.hausdorff, hausdorff_window(clouds[i].rescaled, clouds[i].limit, window));
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace crooked
