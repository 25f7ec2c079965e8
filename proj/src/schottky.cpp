#include "crooked/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace crooked {

namespace {

constexpr double kPairingTol = 1e-9;
constexpr double kHyperbolicFloor = 1e-9;

std::string word_text(const Word& w) {
    if (w.empty()) return "e";
    std::ostringstream out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const int l = w.letters()[i];
        out << (i ? " " : "") << "g" << std::abs(l) << (l < 0 ? "^-1" : "");
    }
    return out.str();
}

// Same endpoints and same positive side.
bool same_half_plane(const GeodesicLine& x, const GeodesicLine& y, double tol) {
    const bool direct = same_point(x.a, y.a, tol) && same_point(x.b, y.b, tol);
    const bool swapped = same_point(x.a, y.b, tol) && same_point(x.b, y.a, tol);
    if (!direct && !swapped) return false;
    if (!x.orient || !y.orient) return true;
    return direct ? *x.orient == *y.orient : *x.orient != *y.orient;
}

bool closures_disjoint(const GeodesicLine& x, const GeodesicLine& y) {
    try {
        normalize_pair(x, y);
        return true;
    } catch (const Error&) {
        return false;
    }
}

Arc transport(const RepPair& rep, const Word& w, const Arc& arc) {
    const auto [jw, rw] = evaluate(rep, w);
    return {mobius_apply(jw, arc.line), rw * arc.g * jw.inverse()};
}

bool inside(const Arc& arc, const Isometry& h) {
    return halfspace_side(HalfSpace{{PlaneSide::Right, arc.g, arc.line}}, h) == HalfSpaceSide::Inside;
}

double rotation_angle(const Isometry& g) { return 2.0 * std::acos(std::min(1.0, std::abs(g.trace()) / 2.0)); }

}  // namespace

Word::Word(std::vector<int> letters) : letters_(std::move(letters)) {
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (letters_[i] == 0) throw Error(ErrorCode::InvalidInput, "word letters are nonzero");
        if (i > 0 && letters_[i] == -letters_[i - 1]) {
            throw Error(ErrorCode::RejectedUnreduced, "word has adjacent cancellation");
        }
    }
}

Word Word::inverse() const {
    std::vector<int> out(letters_.rbegin(), letters_.rend());
    for (int& l : out) l = -l;
    return Word(std::move(out));
}

Word Word::operator*(const Word& o) const {
    std::vector<int> out = letters_;
    for (int l : o.letters_) {
        if (!out.empty() && out.back() == -l) {
            out.pop_back();
        } else {
            out.push_back(l);
        }
    }
    return Word(std::move(out));
}

std::vector<Word> reduced_words(int rank, int max_len) {
    std::vector<Word> out;
    std::vector<std::vector<int>> frontier;
    for (int g = 1; g <= rank; ++g) {
        frontier.push_back({g});
        frontier.push_back({-g});
    }
    for (int len = 1; len <= max_len && !frontier.empty(); ++len) {
        std::vector<std::vector<int>> next;
        for (auto& letters : frontier) {
            for (int g = 1; g <= rank && len < max_len; ++g) {
                for (int l : {g, -g}) {
                    if (l == -letters.back()) continue;
                    auto grown = letters;
                    grown.push_back(l);
                    next.push_back(std::move(grown));
                }
            }
            out.emplace_back(std::move(letters));
        }
        frontier = std::move(next);
    }
    return out;
}

std::pair<Isometry, Isometry> evaluate(const RepPair& rep, const Word& w) {
    Isometry jw;
    Isometry rw;
    for (int l : w.letters()) {
        const int idx = std::abs(l) - 1;
        if (idx >= rep.rank() || idx >= static_cast<int>(rep.rho.size())) {
            throw Error(ErrorCode::InvalidInput, "word letter exceeds the rank");
        }
        jw = jw * (l > 0 ? rep.j[idx] : rep.j[idx].inverse());
        rw = rw * (l > 0 ? rep.rho[idx] : rep.rho[idx].inverse());
    }
    return {jw, rw};
}

double shortness_ratio(const RepPair& rep, int max_len) {
    if (max_len < 1) throw Error(ErrorCode::DomainError, "max_len must be at least 1");
    double best = -1.0;
    for (const Word& w : reduced_words(rep.rank(), max_len)) {
        const auto [jw, rw] = evaluate(rep, w);
        const double lj = translation_length(jw);
        if (!(lj > kHyperbolicFloor)) continue;
        best = std::max(best, translation_length(rw) / lj);
    }
    if (best < 0.0) throw Error(ErrorCode::NoHyperbolic, "no word with hyperbolic j-image");
    return best;
}

Isometry act(const RepPair& rep, const Word& w, const Isometry& h) {
    const auto [jw, rw] = evaluate(rep, w);
    return rw * h * jw.inverse();
}

DomainVerdict verify_crooked_domain(const RepPair& rep, const DomainData& domain, int radius) {
    DomainVerdict out;
    const int n = static_cast<int>(domain.arcs.size());
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (!closures_disjoint(domain.arcs[a].line, domain.arcs[b].line)) {
                out.reason = "arc closures meet";
                out.offending = {a, b};
                return out;
            }
        }
    }
    for (const ArcPairing& p : domain.pairings) {
        if (p.generator < 1 || p.generator > rep.rank() || p.from < 0 || p.from >= n || p.to < 0 || p.to >= n) {
            out.reason = "pairing refers to a missing generator or arc";
            return out;
        }
        const Isometry& jg = rep.j[p.generator - 1];
        const Isometry& rg = rep.rho[p.generator - 1];
        const Arc& src = domain.arcs[p.from];
        const Arc& dst = domain.arcs[p.to];
        if (!same_half_plane(mobius_apply(jg, src.line), dst.line.reversed_orientation(), kPairingTol)) {
            out.reason = "generator does not carry its arc onto the paired arc";
            out.offending = {p.from, p.to};
            return out;
        }
        if (!(rg * src.g * jg.inverse()).approx_equal(dst.g, kPairingTol)) {
            out.reason = "equivariance defect: g_to differs from rho g_from j^-1";
            out.offending = {p.from, p.to};
            return out;
        }
    }

    std::vector<Word> tiles{Word{}};
    for (Word& w : reduced_words(rep.rank(), radius)) tiles.push_back(std::move(w));
    double margin = std::numeric_limits<double>::infinity();
    for (const Word& w : tiles) {
        std::vector<Arc> moved;
        moved.reserve(domain.arcs.size());
        for (const Arc& arc : domain.arcs) moved.push_back(transport(rep, w, arc));
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                const auto rep_ab = disjoint_crooked({PlaneSide::Right, moved[a].g, moved[a].line},
                                                     {PlaneSide::Right, moved[b].g, moved[b].line});
                if (!rep_ab.disjoint) {
                    out.reason = "crooked planes of arcs meet in tile " + word_text(w);
                    out.offending = {a, b};
                    return out;
                }
                margin = std::min(margin, -rep_ab.margin);
            }
        }
    }
    out.verified = true;
    out.margin = margin;
    return out;
}

std::pair<RepPair, DomainData> build_schottky(const std::vector<GeodesicLine>& lines,
                                              const std::vector<Isometry>& j_gens,
                                              const std::vector<Isometry>& gs) {
    const std::size_t r = j_gens.size();
    if (r == 0 || lines.size() != 2 * r || gs.size() != 2 * r) {
        throw Error(ErrorCode::InvalidInput, "need 2r lines and 2r isometries for r generators");
    }
    for (const auto& l : lines) {
        if (!l.orient) throw Error(ErrorCode::InvalidInput, "half-plane lines must be oriented");
    }
    for (std::size_t a = 0; a < lines.size(); ++a) {
        for (std::size_t b = a + 1; b < lines.size(); ++b) {
            if (!closures_disjoint(lines[a], lines[b]) || !oriented_away(lines[a], lines[b])) {
                throw Error(ErrorCode::DomainError, "closed half-planes " + std::to_string(a) + " and " +
                                                        std::to_string(b) + " are not disjoint");
            }
        }
    }
    RepPair rep;
    DomainData domain;
    for (std::size_t i = 0; i < r; ++i) {
        const GeodesicLine image = mobius_apply(j_gens[i], lines[i]);
        if (!same_half_plane(image, lines[r + i].reversed_orientation(), kPairingTol)) {
            throw Error(ErrorCode::PairingFailed,
                        "generator " + std::to_string(i + 1) + " does not map its half-plane onto the complement");
        }
        rep.j.push_back(j_gens[i]);
        rep.rho.push_back(gs[r + i] * j_gens[i] * gs[i].inverse());
        domain.pairings.push_back({static_cast<int>(i) + 1, static_cast<int>(i), static_cast<int>(r + i)});
    }
    for (std::size_t k = 0; k < 2 * r; ++k) domain.arcs.push_back({lines[k], gs[k]});
    for (std::size_t a = 0; a < 2 * r; ++a) {
        for (std::size_t b = a + 1; b < 2 * r; ++b) {
            const HalfSpace ha{{PlaneSide::Right, gs[a], lines[a]}};
            const HalfSpace hb{{PlaneSide::Right, gs[b], lines[b]}};
            if (!disjoint_halfspaces(ha, hb)) {
                throw Error(ErrorCode::HalfSpacesOverlap,
                            "crooked half-spaces " + std::to_string(a) + " and " + std::to_string(b) + " overlap");
            }
        }
    }
    return {rep, domain};
}

bool in_closed_domain(const DomainData& domain, const Isometry& h) {
    return std::none_of(domain.arcs.begin(), domain.arcs.end(), [&](const Arc& a) { return inside(a, h); });
}

std::optional<Word> reduce_to_domain(const RepPair& rep, const DomainData& domain, const Isometry& h, int max_len) {
    Word total;
    Isometry cur = h;
    for (int step = 0; step <= max_len; ++step) {
        std::optional<int> letter;
        for (const ArcPairing& p : domain.pairings) {
            if (inside(domain.arcs[p.from], cur)) {
                letter = p.generator;
                break;
            }
            if (inside(domain.arcs[p.to], cur)) {
                letter = -p.generator;
                break;
            }
        }
        if (!letter) return total;
        if (step == max_len) break;
        const Word step_word({*letter});
        cur = act(rep, step_word, cur);
        total = step_word * total;
    }
    return std::nullopt;
}

double collar_width(double boundary_length) {
    if (!(boundary_length > 0.0)) throw Error(ErrorCode::DomainError, "boundary length must be positive");
    return std::asinh(1.0 / std::sinh(boundary_length / 2.0));
}

double hyperbolic_reach(double translation_length) {
    return std::acosh(std::max(1.0, std::sinh(0.5) / std::sinh(translation_length / 2.0)));
}

double elliptic_reach(double rotation_angle) {
    return std::asinh(std::sinh(0.5) / std::sin(std::abs(rotation_angle) / 2.0));
}

Certificate certify_no_crooked_fd(const RepPair& rep, const ObstructionKind& kind) {
    Certificate out;
    std::ostringstream why;
    if (const auto* ncc = std::get_if<NotConvexCocompact>(&kind)) {
        std::optional<Word> j_par;
        std::optional<Word> rho_par;
        for (const Word& w : reduced_words(rep.rank(), ncc->max_len)) {
            const auto [jw, rw] = evaluate(rep, w);
            if (!j_par && classify(jw).kind == IsoKind::Parabolic) j_par = w;
            if (!rho_par && classify(rw).kind == IsoKind::Parabolic) rho_par = w;
            if (j_par && rho_par) break;
        }
        if (!j_par || !rho_par) {
            why << "no parabolic found in " << (j_par ? "rho" : "j") << " up to length " << ncc->max_len;
            out.reason = why.str();
            return out;
        }
        out.certified = true;
        out.conditional = true;
        why << "parabolic j(" << word_text(*j_par) << ") and rho(" << word_text(*rho_par)
            << "); convex cocompactness is excluded only on sampled words";
        out.reason = why.str();
        return out;
    }
    if (const auto* ob = std::get_if<OneBoundary>(&kind)) {
        if (ob->boundary) {
            const double lj = translation_length(evaluate(rep, *ob->boundary).first);
            if (std::abs(lj - ob->length) > 1e-6 * std::max(1.0, ob->length)) {
                why << "boundary word has length " << lj << ", not " << ob->length;
                out.reason = why.str();
                return out;
            }
        }
        const double psi = collar_width(ob->length);
        out.certified = psi > ob->length / 2.0;
        why << "collar width " << psi << (out.certified ? " > " : " <= ") << "half boundary length "
            << ob->length / 2.0;
        out.reason = why.str();
        return out;
    }
    const auto& ell = std::get<EllipticWord>(kind);
    const auto [jw, rw] = evaluate(rep, ell.word);
    if (classify(rw).kind != IsoKind::Elliptic || classify(jw).kind != IsoKind::Hyperbolic) {
        out.reason = "needs rho(w) elliptic and j(w) hyperbolic";
        return out;
    }
    const double reach = hyperbolic_reach(translation_length(jw));
    const double ball = elliptic_reach(rotation_angle(rw));
    out.certified = reach > ball;
    why << "segment reach " << reach << (out.certified ? " > " : " <= ") << "ball radius " << ball;
    out.reason = why.str();
    return out;
}

std::vector<Isometry> make_one_holed_torus(double boundary_length) {
    if (!(boundary_length > 0.0)) throw Error(ErrorCode::DomainError, "boundary length must be positive");
    const Isometry quarter = Isometry::rotation_about({0.0, 1.0}, std::numbers::pi / 2.0);
    auto pair_for = [&](double t) {
        const Isometry a = Isometry::dilation(t);
        return std::vector<Isometry>{a, quarter * a * quarter.inverse()};
    };
    auto boundary = [&](double t) {
        const auto g = pair_for(t);
        return translation_length(g[0] * g[1] * g[0].inverse() * g[1].inverse());
    };
    // Below 2 arcsinh(1) the commutator is not hyperbolic.
    double lo = 2.0 * std::asinh(1.0);
    double hi = lo + 1.0;
    while (boundary(hi) < boundary_length) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (boundary(mid) < boundary_length ? lo : hi) = mid;
    }
    return pair_for(0.5 * (lo + hi));
}

RepPair make_pingpong_pair(int rank, const std::vector<double>& lengths, const std::vector<double>& angles) {
    if (rank < 1 || static_cast<int>(lengths.size()) != rank || static_cast<int>(angles.size()) != rank) {
        throw Error(ErrorCode::InvalidInput, "need one length and one angle per generator");
    }
    constexpr double kSlotHalfWidth = 0.8;
    RepPair rep;
    std::vector<GeodesicLine> disks;
    for (int k = 0; k < rank; ++k) {
        const double len = lengths[k];
        if (!(len > 0.0)) throw Error(ErrorCode::DomainError, "translation lengths must be positive");
        if (!(angles[k] > -std::numbers::pi && angles[k] <= std::numbers::pi)) {
            throw Error(ErrorCode::DomainError, "rotation angles lie in (-pi, pi]");
        }
        // In slot coordinates the disks sit under (-1, -u^2) and (u^2, 1);
        // the translation along |z| = u by len carries one onto the other.
        const double c = 1.0 / std::tanh(len / 2.0);
        const double u = c - std::sqrt(c * c - 1.0);
        const Mat2 basis = from_columns({u, 1.0}, {-u, 1.0});
        const Mat2 local = basis * Mat2::diag(std::exp(len / 2.0), std::exp(-len / 2.0)) * basis.adjugate();
        const double center = 2.0 * (k + 1);
        const Isometry slot(Mat2{kSlotHalfWidth, center, 0.0, 1.0});
        rep.j.push_back(slot * Isometry(local) * slot.inverse());
        rep.rho.push_back(Isometry::rotation_about({0.0, 1.0}, angles[k]));
        const double s = kSlotHalfWidth;
        disks.push_back(GeodesicLine::between(center - s, center - s * u * u).with_orientation(Orientation::PositiveRight));
        disks.push_back(GeodesicLine::between(center + s * u * u, center + s).with_orientation(Orientation::PositiveRight));
    }
    for (std::size_t a = 0; a < disks.size(); ++a) {
        for (std::size_t b = a + 1; b < disks.size(); ++b) {
            if (!closures_disjoint(disks[a], disks[b]) || !oriented_away(disks[a], disks[b])) {
                throw Error(ErrorCode::PingPongFailed, "ping-pong disks overlap");
            }
        }
    }
    for (int k = 0; k < rank; ++k) {
        const GeodesicLine image = mobius_apply(rep.j[k], disks[2 * k]);
        if (!same_half_plane(image, disks[2 * k + 1].reversed_orientation(), 1e-7)) {
            throw Error(ErrorCode::PingPongFailed, "generator does not pair its disks");
        }
    }
    return rep;
}

}  // namespace crooked
