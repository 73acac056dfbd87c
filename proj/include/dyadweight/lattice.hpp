#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dyadweight/errors.hpp"

namespace dyadweight {

// A node of the dyadic tree over [0,1): the interval [j 2^-k, (j+1) 2^-k).
// Sign convention used throughout: the Haar function h_I is positive on the
// RIGHT half of I and negative on the left half.
struct DyadicInterval {
    int level = 0;           // k >= 0
    std::int64_t position = 0; // 0 <= j < 2^k

    double left() const { return std::ldexp(double(position), -level); }
    double right() const { return std::ldexp(double(position + 1), -level); }
    double length() const { return std::ldexp(1.0, -level); }
    double midpoint() const { return std::ldexp(double(position) + 0.5, -level); }

    bool contains(double x) const { return x >= left() && x < right(); }

    friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;

    // level-major, position-minor; the deterministic traversal order
    friend auto operator<=>(const DyadicInterval& a, const DyadicInterval& b) {
        if (a.level != b.level) return a.level <=> b.level;
        return a.position <=> b.position;
    }

    std::string str() const {
        return "[" + std::to_string(left()) + "," + std::to_string(right()) + ")@" +
               std::to_string(level);
    }
};

// Finite truncation of the lattice: intervals live on levels 0..max_depth,
// with 2^max_depth leaves on the finest level.
struct LatticeConfig {
    int max_depth = 12;

    LatticeConfig() = default;
    explicit LatticeConfig(int n) : max_depth(n) {
        if (n < 1) throw size_error("LatticeConfig: max_depth must be >= 1");
    }
    std::size_t leaf_count() const { return std::size_t(1) << max_depth; }
};

inline DyadicInterval root_interval() { return {0, 0}; }

// Left and right halves (I-, I+). Children carry positions 2j and 2j+1 on
// level k+1; leaves of the configured lattice have none.
inline std::pair<DyadicInterval, DyadicInterval> children(const DyadicInterval& I,
                                                          const LatticeConfig& cfg) {
    if (I.level >= cfg.max_depth)
        throw depth_error("children: interval at the finest level " + std::to_string(I.level));
    return {DyadicInterval{I.level + 1, 2 * I.position},
            DyadicInterval{I.level + 1, 2 * I.position + 1}};
}

// All dyadic subintervals of J down to the finest level, J included,
// in level-major position-minor order. Count: 2^(N - J.level + 1) - 1.
inline std::vector<DyadicInterval> descendants(const DyadicInterval& J, const LatticeConfig& cfg) {
    if (J.level > cfg.max_depth) throw depth_error("descendants: interval below the finest level");
    std::vector<DyadicInterval> out;
    out.reserve((std::size_t(2) << (cfg.max_depth - J.level)) - 1);
    for (int k = J.level; k <= cfg.max_depth; ++k) {
        std::int64_t first = J.position << (k - J.level);
        std::int64_t count = std::int64_t(1) << (k - J.level);
        for (std::int64_t j = 0; j < count; ++j) out.push_back({k, first + j});
    }
    return out;
}

// h_I(x) = (chi_{I+} - chi_{I-}) / sqrt(|I|): +|I|^{-1/2} on the right half,
// -|I|^{-1/2} on the left half, 0 outside I.
inline double haar_eval(const DyadicInterval& I, double x) {
    if (!I.contains(x)) return 0.0;
    double scale = std::ldexp(1.0, I.level); // 1/|I|
    double rel = (x - I.left()) * scale;     // in [0,1)
    double v = std::sqrt(scale);
    return rel >= 0.5 ? v : -v;
}

inline double indicator_eval(const DyadicInterval& I, double x) {
    return I.contains(x) ? 1.0 : 0.0;
}

} // namespace dyadweight
