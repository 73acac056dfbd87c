#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "dyadweight/errors.hpp"
#include "dyadweight/parallel.hpp"
#include "dyadweight/rng.hpp"

namespace dyadweight {

// A point (X, Y, x, y, r, s) of the Bellman domain
//   D = { X, Y, r, s > 0, x^2 < X s, y^2 < Y r, 1 < r s < Q },
// taken here in its closure so the constant-weight face rs = 1 is admitted.
// The averages x, y carry either sign: a splitting step must be able to push
// a child's mean through zero, and the value function is even in both (the
// substitutions f -> -f, g -> -g leave the extremal problem unchanged).
struct BellmanPoint {
    double X = 1.0, Y = 1.0, x = 0.0, y = 0.0, r = 1.0, s = 1.0;

    // additive split vector (defaults above describe a point, not a shift)
    static BellmanPoint zero() { return {0.0, 0.0, 0.0, 0.0, 0.0, 0.0}; }

    BellmanPoint operator+(const BellmanPoint& o) const {
        return {X + o.X, Y + o.Y, x + o.x, y + o.y, r + o.r, s + o.s};
    }
    BellmanPoint operator-(const BellmanPoint& o) const {
        return {X - o.X, Y - o.Y, x - o.x, y - o.y, r - o.r, s - o.s};
    }
};

inline bool in_domain(const BellmanPoint& v, double q, double tol = 1e-12) {
    if (!(q > 1.0)) return false;
    if (!(v.X >= 0.0 && v.Y >= 0.0 && v.r > 0.0 && v.s > 0.0)) return false;
    if (v.x * v.x > v.X * v.s * (1.0 + tol) + tol) return false;
    if (v.y * v.y > v.Y * v.r * (1.0 + tol) + tol) return false;
    const double rs = v.r * v.s;
    return rs >= 1.0 - tol && rs <= q * (1.0 + tol) + tol;
}

// The value function obeys three exact symmetries:
//   B(l^2 X, Y, l x, y, r, s) = l B(...)          (f -> l f)
//   B(X, m^2 Y, x, m y, r, s) = m B(...)          (g -> m g)
//   B(X, Y, x/sqrt(a), y sqrt(a), a r, s/a) = B   (w -> a w)
// plus evenness in x and y. Every point therefore reduces to the slice
// X = Y = 1, r = s = sqrt(p) with p = rs in [1, Q], and the table only
// stores that 3-d slice: normalized coordinates (ax, ay) in [0,1]^2 with
// x = ax p^{1/4}, y = ay p^{1/4}.
struct ReducedPoint {
    double ax = 0.0, ay = 0.0, p = 1.0, scale = 1.0; // B(v) = scale * Btilde
};

inline ReducedPoint reduce_point(const BellmanPoint& v) {
    ReducedPoint r;
    const double a = std::sqrt(v.s / v.r);
    r.p = v.r * v.s;
    const double proot = std::pow(r.p, 0.25);
    r.scale = std::sqrt(v.X * v.Y);
    const double xs = std::fabs(v.x) / std::sqrt(a * v.X);
    const double ys = std::fabs(v.y) * std::sqrt(a / v.Y);
    r.ax = xs / proot;
    r.ay = ys / proot;
    return r;
}

struct BellmanTableParams {
    double q = 1.05;
    int nx = 25, ny = 25, np = 16;
    int depth = 3;
    int candidates = 1200; // random split candidates per point and depth
    int polish_rounds = 3;
    std::uint64_t seed = 1;
};

class BellmanTable {
  public:
    explicit BellmanTable(const BellmanTableParams& params) : params_(params) {
        if (!(params.q > 1.0)) throw size_error("BellmanTable: need Q > 1");
        if (params.nx < 2 || params.ny < 2 || params.np < 2 || params.depth < 0)
            throw size_error("BellmanTable: bad grid");
        ax_.resize(params.nx);
        ay_.resize(params.ny);
        ps_.resize(params.np);
        for (int i = 0; i < params.nx; ++i) ax_[i] = double(i) / (params.nx - 1);
        for (int i = 0; i < params.ny; ++i) ay_[i] = double(i) / (params.ny - 1);
        for (int i = 0; i < params.np; ++i)
            ps_[i] = 1.0 + (params.q - 1.0) * double(i) / (params.np - 1);
        depths_.push_back(std::vector<double>(std::size_t(params.nx) * params.ny * params.np, 0.0));
    }

    const BellmanTableParams& params() const { return params_; }
    int depth() const { return int(depths_.size()) - 1; }
    double q() const { return params_.q; }
    std::size_t grid_size() const { return depths_[0].size(); }

    double grid_value(int k, int ip, int ix, int iy) const {
        return depths_.at(k)[index(ip, ix, iy)];
    }
    void corrupt_value(int k, int ip, int ix, int iy, double v) { // test hook
        depths_.at(k)[index(ip, ix, iy)] = v;
    }

    BellmanPoint grid_point(int ip, int ix, int iy) const {
        const double p = ps_[ip];
        const double proot = std::pow(p, 0.25);
        return {1.0, 1.0, ax_[ix] * proot, ay_[iy] * proot, std::sqrt(p), std::sqrt(p)};
    }

    // B_k(v) via symmetry reduction and trilinear interpolation
    double eval(const BellmanPoint& v, int k = -1) const {
        if (k < 0) k = depth();
        const ReducedPoint r = reduce_point(v);
        return r.scale * eval_reduced(r.ax, r.ay, r.p, k);
    }

    double eval_reduced(double ax, double ay, double p, int k) const {
        const auto& vals = depths_.at(k);
        ax = std::clamp(ax, 0.0, 1.0);
        ay = std::clamp(ay, 0.0, 1.0);
        p = std::clamp(p, 1.0, params_.q);
        const double fx = ax * (params_.nx - 1), fy = ay * (params_.ny - 1),
                     fp = (p - 1.0) / (params_.q - 1.0) * (params_.np - 1);
        const int ix = std::min(int(fx), params_.nx - 2);
        const int iy = std::min(int(fy), params_.ny - 2);
        const int ip = std::min(int(fp), params_.np - 2);
        const double tx = fx - ix, ty = fy - iy, tp = fp - ip;
        double acc = 0.0;
        for (int dp = 0; dp < 2; ++dp)
            for (int dx = 0; dx < 2; ++dx)
                for (int dy = 0; dy < 2; ++dy) {
                    double wgt = (dp ? tp : 1 - tp) * (dx ? tx : 1 - tx) * (dy ? ty : 1 - ty);
                    acc += wgt * vals[index(ip + dp, ix + dx, iy + dy)];
                }
        return acc;
    }

    // largest second difference per axis at a depth; drives the
    // interpolation-error part of the verification slack
    double interpolation_bound(int k) const {
        const auto& vals = depths_.at(k);
        double m = 0.0;
        auto upd = [&](double a, double b, double c) { m = std::max(m, std::fabs(a - 2 * b + c)); };
        for (int ip = 0; ip < params_.np; ++ip)
            for (int ix = 0; ix < params_.nx; ++ix)
                for (int iy = 0; iy < params_.ny; ++iy) {
                    if (ix + 2 < params_.nx)
                        upd(vals[index(ip, ix, iy)], vals[index(ip, ix + 1, iy)],
                            vals[index(ip, ix + 2, iy)]);
                    if (iy + 2 < params_.ny)
                        upd(vals[index(ip, ix, iy)], vals[index(ip, ix, iy + 1)],
                            vals[index(ip, ix, iy + 2)]);
                    if (ip + 2 < params_.np)
                        upd(vals[index(ip, ix, iy)], vals[index(ip + 1, ix, iy)],
                            vals[index(ip + 2, ix, iy)]);
                }
        return m;
    }

    // same second-difference estimate, but only around the interpolation
    // cell of one reduced point; the global bound is dominated by the
    // square-root kink at the Cauchy-Schwarz face and would be uselessly
    // coarse for interior points
    double local_curvature(const BellmanPoint& v, int k) const {
        const ReducedPoint r = reduce_point(v);
        const auto& vals = depths_.at(k);
        const double fx = std::clamp(r.ax, 0.0, 1.0) * (params_.nx - 1);
        const double fy = std::clamp(r.ay, 0.0, 1.0) * (params_.ny - 1);
        const double fp =
            (std::clamp(r.p, 1.0, params_.q) - 1.0) / (params_.q - 1.0) * (params_.np - 1);
        const int ix = std::min(int(fx), params_.nx - 2);
        const int iy = std::min(int(fy), params_.ny - 2);
        const int ip = std::min(int(fp), params_.np - 2);
        double m = 0.0;
        auto upd = [&](int p0, int x0, int y0, int p1, int x1, int y1, int p2, int x2, int y2) {
            if (p0 < 0 || x0 < 0 || y0 < 0 || p2 >= params_.np || x2 >= params_.nx ||
                y2 >= params_.ny)
                return;
            m = std::max(m, std::fabs(vals[index(p0, x0, y0)] - 2 * vals[index(p1, x1, y1)] +
                                      vals[index(p2, x2, y2)]));
        };
        for (int dp = 0; dp < 2; ++dp)
            for (int dx = 0; dx < 2; ++dx)
                for (int dy = 0; dy < 2; ++dy) {
                    const int p = ip + dp, x = ix + dx, y = iy + dy;
                    upd(p, x - 1, y, p, x, y, p, x + 1, y);
                    upd(p, x, y - 1, p, x, y, p, x, y + 1);
                    upd(p - 1, x, y, p, x, y, p + 1, x, y);
                }
        return r.scale * m;
    }

    void push_depth(std::vector<double> values) {
        if (values.size() != depths_[0].size()) throw size_error("push_depth: size mismatch");
        depths_.push_back(std::move(values));
    }

    const std::vector<double>& axis_x() const { return ax_; }
    const std::vector<double>& axis_y() const { return ay_; }
    const std::vector<double>& axis_p() const { return ps_; }

    std::size_t index(int ip, int ix, int iy) const {
        return (std::size_t(ip) * params_.nx + ix) * params_.ny + iy;
    }

  private:
    BellmanTableParams params_;
    std::vector<double> ax_, ay_, ps_;
    std::vector<std::vector<double>> depths_; // one value grid per depth, 0 first
};

namespace detail {

// Random admissible split u at v: v +- u must stay in the closed domain.
// The generator mixes pure (X,x)/(Y,y) splits, weight splits along the
// rs-band, and joint perturbations; infeasible draws are rejected.
inline bool sample_split(const BellmanPoint& v, double q, Rng& rng, BellmanPoint& u) {
    const double dxmax = std::sqrt(std::max(0.0, v.X * v.s - v.x * v.x));
    const double dymax = std::sqrt(std::max(0.0, v.Y * v.r - v.y * v.y));
    for (int tries = 0; tries < 12; ++tries) {
        u = BellmanPoint::zero();
        const int mode = int(rng.below(4));
        const double fx = rng.uniform(), fy = rng.uniform();
        u.x = fx * dxmax;
        u.y = (rng.sign() > 0 ? fy : -fy) * dymax;
        // feasible X-shift interval for given u.x is centered at 2 x u.x / s
        u.X = 2.0 * v.x * u.x / v.s + 0.3 * (rng.uniform() - 0.5) * v.X;
        u.Y = 2.0 * v.y * u.y / v.r + 0.3 * (rng.uniform() - 0.5) * v.Y;
        if (mode >= 2) {
            // move along the weight band: r,s shifts keeping rs in [1, Q]
            u.r = (rng.uniform() - 0.5) * 0.8 * (v.r - v.r / (v.r * v.s));
            u.s = (rng.uniform() - 0.5) * 0.8 * (v.s - v.s / (v.r * v.s));
            if (mode == 3) { u.r = -u.r; }
        }
        if (in_domain(v + u, q, 1e-12) && in_domain(v - u, q, 1e-12)) return true;
    }
    u = BellmanPoint::zero();
    return false;
}

} // namespace detail

// One step of the dynamic program at v: the supremum over admissible splits
// of the interpolated average plus the gain |u_x u_y| (which equals
// (1/4)|x+ - x-||y+ - y-|). u = 0 is always tried, so the result never
// falls below B_k(v).
inline double bellman_step(const BellmanTable& table, const BellmanPoint& v, int k,
                           int candidates, int polish_rounds, std::uint64_t seed) {
    const double q = table.q();
    if (!in_domain(v, q)) throw size_error("bellman_step: point outside the domain");

    auto objective = [&](const BellmanPoint& u) {
        return 0.5 * (table.eval(v + u, k) + table.eval(v - u, k)) +
               std::fabs(u.x) * std::fabs(u.y);
    };

    double best = table.eval(v, k); // u = 0
    BellmanPoint best_u = BellmanPoint::zero();

    // deterministic stencil: extreme (X,x)-(Y,y) splits at several fractions
    const double dxmax = std::sqrt(std::max(0.0, v.X * v.s - v.x * v.x));
    const double dymax = std::sqrt(std::max(0.0, v.Y * v.r - v.y * v.y));
    for (double fx : {0.25, 0.5, 0.75, 1.0})
        for (double fy : {0.25, 0.5, 0.75, 1.0})
            for (int sy = -1; sy <= 1; sy += 2) {
                BellmanPoint u = BellmanPoint::zero();
                u.x = fx * dxmax;
                u.y = sy * fy * dymax;
                u.X = 2.0 * v.x * u.x / v.s;
                u.Y = 2.0 * v.y * u.y / v.r;
                if (!in_domain(v + u, q) || !in_domain(v - u, q)) continue;
                double val = objective(u);
                if (val > best) { best = val; best_u = u; }
            }

    Rng rng(seed);
    BellmanPoint u;
    for (int c = 0; c < candidates; ++c) {
        if (!detail::sample_split(v, q, rng, u)) continue;
        double val = objective(u);
        if (val > best) { best = val; best_u = u; }
    }

    // coordinate polish with shrinking steps around the best split
    double step = 0.25;
    for (int round = 0; round < polish_rounds; ++round, step *= 0.4) {
        const double scales[6] = {v.X, v.Y, dxmax > 0 ? dxmax : 0.1, dymax > 0 ? dymax : 0.1,
                                  v.r * (q - 1.0) + 1e-3, v.s * (q - 1.0) + 1e-3};
        for (int coord = 0; coord < 6; ++coord) {
            for (int dir = -1; dir <= 1; dir += 2) {
                BellmanPoint cand = best_u;
                double* fields[6] = {&cand.X, &cand.Y, &cand.x, &cand.y, &cand.r, &cand.s};
                *fields[coord] += dir * step * scales[coord];
                if (!in_domain(v + cand, q) || !in_domain(v - cand, q)) continue;
                double val = objective(cand);
                if (val > best) { best = val; best_u = cand; }
            }
        }
    }
    return best;
}

// Full DP sweep: depth levels are sequential, points within a level
// independent. Deterministic point seeds keep the result thread-agnostic.
inline BellmanTable build_bellman_table(const BellmanTableParams& params) {
    BellmanTable table(params);
    for (int k = 0; k < params.depth; ++k) {
        std::vector<double> next(table.grid_size(), 0.0);
        const int nx = params.nx, ny = params.ny, np = params.np;
        parallel_for(std::size_t(np), [&](std::size_t ip) {
            for (int ix = 0; ix < nx; ++ix)
                for (int iy = 0; iy < ny; ++iy) {
                    BellmanPoint v = table.grid_point(int(ip), ix, iy);
                    std::uint64_t pseed =
                        params.seed ^ (0x9e3779b97f4a7c15ull * (table.index(int(ip), ix, iy) + 1)) ^
                        (std::uint64_t(k) << 32);
                    const std::size_t idx = table.index(int(ip), ix, iy);
                    // the stored value is an exact floor: depth monotonicity
                    // holds without interpolation slop
                    next[idx] = std::max(
                        table.grid_value(k, int(ip), ix, iy),
                        bellman_step(table, v, k, params.candidates, params.polish_rounds, pseed));
                }
        });
        table.push_depth(std::move(next));
    }
    return table;
}

struct RangeReport {
    int points = 0;
    int boundary_points = 0; // samples on the rs = 1 face (closure of the open domain)
    int violations = 0;
    double bound = 0.0;       // (1 + c sqrt(Q-1)) on the unit slice
    double worst_excess = 0.0;
    double max_value = 0.0;
    bool ok() const { return violations == 0; }
};

// 0 <= B_k <= (1 + c sqrt(Q-1)) sqrt(X Y): on the stored slice sqrt(XY) = 1.
inline RangeReport verify_range(const BellmanTable& table, double c) {
    RangeReport rep;
    rep.bound = 1.0 + c * std::sqrt(table.q() - 1.0);
    const auto& p = table.params();
    const int k = table.depth();
    for (int ip = 0; ip < p.np; ++ip)
        for (int ix = 0; ix < p.nx; ++ix)
            for (int iy = 0; iy < p.ny; ++iy) {
                const double v = table.grid_value(k, ip, ix, iy);
                ++rep.points;
                if (table.axis_p()[ip] == 1.0) ++rep.boundary_points;
                rep.max_value = std::max(rep.max_value, v);
                if (v < -1e-12 || v > rep.bound + 1e-12) {
                    ++rep.violations;
                    rep.worst_excess = std::max(rep.worst_excess, v - rep.bound);
                }
            }
    return rep;
}

struct ConcavityReport {
    int trials = 0;
    int skipped = 0; // no admissible split found at the drawn point
    int violations = 0;
    double slack = 0.0;
    double worst_gap = 0.0; // most negative lhs - rhs seen
    bool ok() const { return violations == 0; }
};

// Midpoint concavity with gain, one depth apart: for random admissible
// triples (v, v+u, v-u),
//   B_k(v) >= (B_{k-1}(v+u) + B_{k-1}(v-u))/2 + |u_x u_y| - slack,
// where the slack covers multilinear interpolation error.
inline ConcavityReport verify_midpoint_concavity(const BellmanTable& table, int samples,
                                                 std::uint64_t seed) {
    if (table.depth() < 1) throw size_error("verify_midpoint_concavity: need depth >= 1");
    const int k = table.depth();
    ConcavityReport rep;
    Rng rng(seed);
    const auto& p = table.params();
    for (int t = 0; t < samples; ++t) {
        ++rep.trials;
        const int ip = int(rng.below(p.np));
        const int ix = int(rng.below(p.nx));
        const int iy = int(rng.below(p.ny));
        BellmanPoint v = table.grid_point(ip, ix, iy);
        BellmanPoint u;
        if (!detail::sample_split(v, table.q(), rng, u)) {
            ++rep.skipped;
            continue;
        }
        const double lhs = table.grid_value(k, ip, ix, iy);
        const double rhs = 0.5 * (table.eval(v + u, k - 1) + table.eval(v - u, k - 1)) +
                           std::fabs(u.x) * std::fabs(u.y);
        const double slack = 1e-6 + 0.75 * (table.local_curvature(v + u, k - 1) +
                                            table.local_curvature(v - u, k - 1));
        rep.slack = std::max(rep.slack, slack);
        const double gap = lhs - rhs;
        rep.worst_gap = std::min(rep.worst_gap, gap);
        if (gap < -slack) ++rep.violations;
    }
    return rep;
}

// ---- serialization (versioned, plain JSON) -------------------------------

inline nlohmann::ordered_json bellman_table_to_json(const BellmanTable& t) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["q"] = t.q();
    const auto& p = t.params();
    j["grid"] = {{"nx", p.nx}, {"ny", p.ny}, {"np", p.np}};
    j["params"] = {{"depth", p.depth},
                   {"candidates", p.candidates},
                   {"polish_rounds", p.polish_rounds},
                   {"seed", p.seed}};
    j["axis_x"] = t.axis_x();
    j["axis_y"] = t.axis_y();
    j["axis_p"] = t.axis_p();
    nlohmann::ordered_json depths = nlohmann::ordered_json::array();
    for (int k = 0; k <= t.depth(); ++k) {
        std::vector<double> flat(t.grid_size());
        for (int ip = 0; ip < p.np; ++ip)
            for (int ix = 0; ix < p.nx; ++ix)
                for (int iy = 0; iy < p.ny; ++iy)
                    flat[t.index(ip, ix, iy)] = t.grid_value(k, ip, ix, iy);
        depths.push_back(flat);
    }
    j["depths"] = std::move(depths);
    return j;
}

inline BellmanTable bellman_table_from_json(const nlohmann::json& j) {
    if (!j.contains("version") || j.at("version").get<int>() != 1)
        throw size_error("bellman table: unsupported version");
    BellmanTableParams params;
    params.q = j.at("q").get<double>();
    params.nx = j.at("grid").at("nx").get<int>();
    params.ny = j.at("grid").at("ny").get<int>();
    params.np = j.at("grid").at("np").get<int>();
    params.depth = j.at("params").at("depth").get<int>();
    params.candidates = j.at("params").at("candidates").get<int>();
    params.polish_rounds = j.at("params").at("polish_rounds").get<int>();
    params.seed = j.at("params").at("seed").get<std::uint64_t>();
    BellmanTable t(params);
    const auto& depths = j.at("depths");
    for (std::size_t k = 1; k < depths.size(); ++k)
        t.push_depth(depths[k].get<std::vector<double>>());
    if (!depths.empty()) {
        // depth 0 is zero by construction; verify rather than trust
        auto base = depths[0].get<std::vector<double>>();
        for (double v : base)
            if (v != 0.0) throw size_error("bellman table: depth 0 must be zero");
    }
    return t;
}

} // namespace dyadweight
