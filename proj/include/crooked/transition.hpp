#pragma once

// Projective models of AdS^3 and R^{2,1} in P^3(R), the rescaling r_t that
// degenerates one into the other, strip conditions on Killing fields along
// arcs, and the convergence of rescaled crooked planes.

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "crooked/hyp2.hpp"
#include "crooked/mink.hpp"

namespace crooked {

// Point of P^3(R): unit 4-vector, sign fixed so the largest entry is positive.
class ProjPoint {
public:
    // Throws DomainError for a zero or non-finite vector.
    explicit ProjPoint(const Eigen::Vector4d& y);

    const Eigen::Vector4d& coords() const { return y_; }
    // (y1, y2, y3) / y4; throws DomainError when y4 vanishes.
    Eigen::Vector3d chart() const;

private:
    Eigen::Vector4d y_;
};

// Angle between representatives, in [0, pi/2].
double proj_distance(const ProjPoint& p, const ProjPoint& q);

// Element of PGL(4,R), stored with unit Frobenius norm.
class ProjMap {
public:
    // Throws DomainError when the matrix is singular.
    explicit ProjMap(const Eigen::Matrix4d& m);

    const Eigen::Matrix4d& matrix() const { return m_; }
    ProjPoint apply(const ProjPoint& p) const;
    ProjMap operator*(const ProjMap& o) const { return ProjMap(m_ * o.m_); }
    ProjMap inverse() const { return ProjMap(m_.inverse()); }

private:
    Eigen::Matrix4d m_;
};

// Angle between the matrices as unit vectors of R^16, modulo sign.
double proj_map_distance(const ProjMap& f, const ProjMap& g);

// [[y1 + y4, y2 - y3], [y2 + y3, -y1 + y4]] -> [y1 : y2 : y3 : y4]
ProjPoint embed_I(const Isometry& g);
// [[z1, z2 - z3], [z2 + z3, -z1]] -> [z1 : z2 : z3 : 1]
ProjPoint embed_i(const KillingField& x);
// y1^2 + y2^2 - y3^2 - y4^2 on the unit representative; negative on AdS^3.
double ads_quadric(const ProjPoint& p);

// diag(1/t, 1/t, 1/t, 1). Throws DomainError for t <= 0.
ProjMap rescale(double t);

// Action x -> h x k^{-1} of (h, k) on AdS^3.
ProjMap pushforward_Istar(const Isometry& h, const Isometry& k);
// Affine action X -> h X h^{-1} + u of (h, u) on R^{2,1}.
ProjMap pushforward_istar(const Isometry& h, const KillingField& u);

// Distance between r_t I(path(t)) and i(derivative), where path(0) = e and
// derivative is its velocity at 0.
double limit_residual(const std::function<Isometry(double)>& path, const KillingField& derivative, double t);
// Distance between r_t I_*(h_t, k_t) r_t^{-1} and i_*(h_0, u), where u is the
// velocity of h_t k_t^{-1} at 0.
double limit_residual_pair(const std::function<std::pair<Isometry, Isometry>(double)>& path, const Isometry& h0,
                           const KillingField& derivative, double t);

// Least-squares slope of log(residual) against log(t).
double loglog_slope(const std::vector<double>& ts, const std::vector<double>& residuals);

// Endpoint of a segment or ray: a point of H^2 or an ideal point.
using Place = std::variant<PlanePoint, BoundaryPoint>;

// Signed projection of the Killing field on the geodesic through `from` and
// `to`, oriented from `from` to `to`; constant along that geodesic.
double killing_component(const KillingField& x, const Place& from, const Place& to);

struct StripArc {
    GeodesicLine line;
    KillingField v;
};

struct StripData {
    std::vector<StripArc> arcs;
    std::vector<std::pair<int, int>> adjacency;
};

struct StripVerdict {
    bool ok = false;
    // Uniform k: minimum over adjacent pairs of -sup of the component of
    // v_b - v_a along geodesics from arc a to arc b.
    double k = 0.0;
    std::optional<std::pair<int, int>> violation;
    std::string reason;
};

// Throws DomainError when arc closures meet.
StripVerdict strip_condition_check(const StripData& strip);

// Largest t = t0 / 2^n (n < 60) at which d(f_t(x), f_t(x')) <= d(x, x') - k t / 2
// on sampled pairs of adjacent arcs, where f_t = exp(t v_alpha) on alpha.
// Throws DomainError when no such t is found.
double admissible_time(const StripData& strip, double k, double t0);

struct CloudPair {
    std::vector<ProjPoint> rescaled;  // r_t I(exp(t v) C*(alpha))
    std::vector<ProjPoint> limit;     // i(C*(alpha) + v)
};

// Matched point clouds per arc, on a parameter grid of the given density.
// Throws DomainError when the strip condition fails or the sampled
// contraction does not hold at t.
std::vector<CloudPair> rescaled_family(const StripData& strip, double t, int density = 24);

// Symmetric Hausdorff distance in the affine chart, where only points inside
// the box |coordinate| <= window are required to be close to the other cloud.
// Throws EmptyWindow when either cloud has no point in the box.
double hausdorff_window(const std::vector<ProjPoint>& a, const std::vector<ProjPoint>& b, double window);

struct ConvergenceRow {
    double t = 0.0;
    double residual = 0.0;   // max over arcs of limit_residual for exp(t v_alpha)
    double hausdorff = 0.0;  // max over arcs of hausdorff_window
};

std::vector<ConvergenceRow> convergence_table(const StripData& strip, const std::vector<double>& ts, double window,
                                              int density = 24);

}  // namespace crooked
