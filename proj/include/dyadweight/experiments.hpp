#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dyadweight/carleson.hpp"
#include "dyadweight/characteristic.hpp"
#include "dyadweight/continuum.hpp"
#include "dyadweight/errors.hpp"
#include "dyadweight/martingale.hpp"
#include "dyadweight/parallel.hpp"
#include "dyadweight/weight.hpp"

namespace dyadweight {

enum class ExperimentKind { Martingale, Hilbert };

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Martingale;
    WeightFamily family = WeightFamily::HaarBump;
    std::vector<double> epsilons; // strictly increasing
    int depth = 8;
    std::uint64_t seed = 1;
    int restarts = 2;
    double tol = 1e-8;
    double fit_norm_tolerance = 1e-6; // fit refuses when norm < 1 - this
    HilbertNormParams grid;           // hilbert experiments only
    std::string output;               // file prefix; empty = no files

    void validate() const {
        if (epsilons.empty()) throw size_error("config: epsilon grid is empty");
        for (std::size_t i = 1; i < epsilons.size(); ++i)
            if (!(epsilons[i] > epsilons[i - 1]))
                throw size_error("config: epsilon grid must be strictly increasing");
        if (!(tol > 0.0) || !(fit_norm_tolerance > 0.0))
            throw size_error("config: tolerances must be positive");
        if (depth < 1) throw size_error("config: depth must be >= 1");
    }
};

struct SweepRecord {
    double epsilon = 0.0;
    double delta = 0.0; // characteristic - 1 (dyadic or Poisson per experiment)
    double norm = 0.0;
    std::string sigma_hash; // martingale only
    bool converged = true;
    double wall_ms = 0.0;   // timing metadata; excluded from reproducibility
};

struct SweepFit {
    double c = 0.0;  // log-log least squares: norm - 1 = c * delta^b
    double b = 0.0;
    double r2 = 0.0;
    double c_envelope = 0.0; // max (norm-1)/sqrt(delta) over fitted records
    int points_used = 0;
};

struct SweepResult {
    ExperimentConfig config;
    std::vector<SweepRecord> records; // sorted by delta
    std::optional<SweepFit> fit;
};

// Least squares of log(norm-1) against log(delta). Records with
// delta <= delta_floor or norm <= 1 are not usable; a norm below
// 1 - norm_tolerance is impossible for a worst-sigma estimate and aborts.
inline SweepFit fit_sqrt_law(const std::vector<SweepRecord>& records, double norm_tolerance,
                             double delta_floor = 0.0) {
    std::vector<std::pair<double, double>> pts; // (log delta, log(norm-1))
    SweepFit fit;
    for (const auto& r : records) {
        if (r.norm < 1.0 - norm_tolerance)
            throw impossible_norm_error("fit: record with norm " + std::to_string(r.norm) +
                                        " below 1");
        if (r.delta > delta_floor && r.norm > 1.0) {
            pts.emplace_back(std::log(r.delta), std::log(r.norm - 1.0));
            fit.c_envelope = std::max(fit.c_envelope, (r.norm - 1.0) / std::sqrt(r.delta));
        }
    }
    if (pts.size() < 3)
        throw insufficient_data_error("fit: need >= 3 records with delta above the floor, have " +
                                      std::to_string(pts.size()));
    double mx = 0.0, my = 0.0;
    for (auto& [x, y] : pts) { mx += x; my += y; }
    mx /= double(pts.size());
    my /= double(pts.size());
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx == 0.0) throw insufficient_data_error("fit: degenerate delta grid");
    fit.b = sxy / sxx;
    fit.c = std::exp(my - fit.b * mx);
    double ss_res = 0.0;
    for (auto& [x, y] : pts) {
        double pred = (my - fit.b * mx) + fit.b * x;
        ss_res += (y - pred) * (y - pred);
    }
    fit.r2 = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
    fit.points_used = int(pts.size());
    return fit;
}

namespace detail {

inline void finish_sweep(SweepResult& out) {
    std::stable_sort(out.records.begin(), out.records.end(),
                     [](const SweepRecord& a, const SweepRecord& b) { return a.delta < b.delta; });
    try {
        out.fit = fit_sqrt_law(out.records, out.config.fit_norm_tolerance,
                               10.0 * out.config.tol);
    } catch (const insufficient_data_error&) {
        out.fit.reset(); // e.g. a single epsilon = 0 point: nothing to fit
    }
}

} // namespace detail

// Sweep the family, measure the worst-sigma martingale norm per point, and
// fit the square-root law against the dyadic characteristic.
inline SweepResult run_martingale_sweep(const ExperimentConfig& config) {
    config.validate();
    SweepResult out;
    out.config = config;
    out.records.resize(config.epsilons.size());
    LatticeConfig cfg(config.depth);
    parallel_for(config.epsilons.size(), [&](std::size_t i) {
        auto t0 = std::chrono::steady_clock::now();
        SweepRecord rec;
        rec.epsilon = config.epsilons[i];
        Weight w = make_family(config.family, rec.epsilon, config.seed, cfg);
        rec.delta = a2d_characteristic(w, 2.0).delta();
        auto [sigma, est] = worst_sigma(w, config.restarts, config.seed, config.tol);
        rec.norm = est.value;
        rec.sigma_hash = sigma.hash();
        rec.converged = est.converged;
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                          .count();
        out.records[i] = std::move(rec);
    });
    detail::finish_sweep(out);
    return out;
}

// Same sweep against the discrete Hilbert transform, with delta taken from
// the Poisson characteristic of the reflected weight on the continuum grid.
inline SweepResult run_hilbert_sweep(const ExperimentConfig& config) {
    config.validate();
    SweepResult out;
    out.config = config;
    out.records.resize(config.epsilons.size());
    LatticeConfig cfg(config.depth);
    parallel_for(config.epsilons.size(), [&](std::size_t i) {
        auto t0 = std::chrono::steady_clock::now();
        SweepRecord rec;
        rec.epsilon = config.epsilons[i];
        Weight w = make_family(config.family, rec.epsilon, config.seed, cfg);
        HilbertNormParams params = config.grid;
        params.seed = config.seed;
        params.tol = std::max(config.tol, 1e-10);
        WeightedHilbertNorm res = weighted_hilbert_norm(w, params);
        rec.delta = res.poisson_char - 1.0;
        rec.norm = res.value;
        rec.converged = res.converged;
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                          .count();
        out.records[i] = std::move(rec);
    });
    detail::finish_sweep(out);
    return out;
}

// ---- persistence ----------------------------------------------------------

inline nlohmann::ordered_json config_to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["experiment"] = c.experiment == ExperimentKind::Martingale ? "martingale" : "hilbert";
    j["family"] = to_string(c.family);
    j["epsilons"] = c.epsilons;
    j["depth"] = c.depth;
    j["seed"] = c.seed;
    j["restarts"] = c.restarts;
    j["tol"] = c.tol;
    j["fit_norm_tolerance"] = c.fit_norm_tolerance;
    j["grid"] = {{"log2_n", c.grid.log2_n},     {"half_length", c.grid.half_length},
                 {"window_fraction", c.grid.window_fraction},
                 {"trials", c.grid.trials},     {"t_min", c.grid.t_min},
                 {"t_max", c.grid.t_max},       {"t_count", c.grid.t_count}};
    j["output"] = c.output;
    return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    const std::string kind = j.at("experiment").get<std::string>();
    if (kind == "martingale") c.experiment = ExperimentKind::Martingale;
    else if (kind == "hilbert") c.experiment = ExperimentKind::Hilbert;
    else throw size_error("config: unknown experiment kind " + kind);
    c.family = weight_family_from_string(j.at("family").get<std::string>());
    c.epsilons = j.at("epsilons").get<std::vector<double>>();
    c.depth = j.value("depth", 8);
    c.seed = j.value("seed", std::uint64_t(1));
    c.restarts = j.value("restarts", 2);
    c.tol = j.value("tol", 1e-8);
    c.fit_norm_tolerance = j.value("fit_norm_tolerance",
                                   c.experiment == ExperimentKind::Hilbert ? 1e-2 : 1e-6);
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        c.grid.log2_n = g.value("log2_n", std::size_t(12));
        c.grid.half_length = g.value("half_length", 8.0);
        c.grid.window_fraction = g.value("window_fraction", 0.5);
        c.grid.trials = g.value("trials", 8);
        c.grid.t_min = g.value("t_min", 1e-3);
        c.grid.t_max = g.value("t_max", 32.0);
        c.grid.t_count = g.value("t_count", 96);
    }
    c.output = j.value("output", std::string());
    c.validate();
    return c;
}

// Full result as JSON. Everything outside the "meta" object is a pure
// function of the config, so re-runs are bit-identical up to "meta".
inline nlohmann::ordered_json result_to_json(const SweepResult& r,
                                             const std::string& timestamp = "") {
    nlohmann::ordered_json j;
    j["config"] = config_to_json(r.config);
    nlohmann::ordered_json recs = nlohmann::ordered_json::array();
    std::vector<double> wall;
    for (const auto& rec : r.records) {
        nlohmann::ordered_json e;
        e["epsilon"] = rec.epsilon;
        e["delta"] = rec.delta;
        e["norm"] = rec.norm;
        e["sigma_hash"] = rec.sigma_hash;
        e["converged"] = rec.converged;
        recs.push_back(std::move(e));
        wall.push_back(rec.wall_ms);
    }
    j["records"] = std::move(recs);
    if (r.fit) {
        j["fit"] = {{"c", r.fit->c},
                    {"b", r.fit->b},
                    {"r2", r.fit->r2},
                    {"c_envelope", r.fit->c_envelope},
                    {"points_used", r.fit->points_used}};
    } else {
        j["fit"] = nullptr;
    }
    j["meta"] = {{"timestamp", timestamp}, {"wall_ms", wall}};
    return j;
}

inline void write_result_files(const SweepResult& r, const std::string& prefix,
                               const std::string& timestamp = "") {
    {
        std::ofstream os(prefix + ".json");
        if (!os) throw size_error("cannot write " + prefix + ".json");
        os << result_to_json(r, timestamp).dump(2) << "\n";
    }
    {
        std::ofstream os(prefix + ".csv");
        if (!os) throw size_error("cannot write " + prefix + ".csv");
        os << "epsilon,delta,norm\n";
        char buf[96];
        for (const auto& rec : r.records) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", rec.epsilon, rec.delta, rec.norm);
            os << buf;
        }
    }
}

} // namespace dyadweight
