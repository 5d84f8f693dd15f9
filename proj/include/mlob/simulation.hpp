#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mlob/strategy.hpp"
#include "mlob/value_function.hpp"

namespace mlob {

// Seed used when neither the caller nor MLOB_SEED sets one.
std::uint64_t default_seed();

struct SimConfig {
    double mu = 0.0;
    double sigma = 0.3;
    double gamma = 0.5;
    double s0 = 1.0;
    double horizon = 1.0;
    double dt = 1e-3;
    std::size_t n_paths = 1000;
    std::uint64_t seed = 0;
    unsigned workers = 1;

    double delta() const { return gamma - mu; }
    // grid of n = ceil(horizon/dt) equal steps
    std::vector<double> grid() const;
    void validate() const;
};

struct Estimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

// One discretised path: sbar[i] at t[i], dw[i] the increment on [t[i], t[i+1]].
struct Path {
    std::size_t index = 0;
    const std::vector<double>* t = nullptr;
    std::vector<double> sbar;
    std::vector<double> dw;
};

// Draws path `index` from its own substream keyed by (seed, index).
void gbm_path(const SimConfig& cfg, const std::vector<double>& grid, std::size_t index, Path& out);

// Calls visit(path) for every path, from cfg.workers threads; visit must only
// write to per-path slots.
void for_each_path(const SimConfig& cfg, const std::function<void(const Path&)>& visit);

struct PathBundle {
    std::vector<double> t;
    std::vector<std::vector<double>> sbar;
};
PathBundle gbm_paths(const SimConfig& cfg);

// Mean of exp(-mu T) sbar_T / s0, which should be 1.
Estimate martingale_sanity(const SimConfig& cfg);

// Discounted proceeds as sparse weights on the path grid: L_t is the sum of
// weight * sbar over entries with time <= t. Off-grid times interpolate sbar.
struct ProceedsPlan {
    struct Entry {
        double time;
        std::size_t i;
        double w_lo, w_hi;  // on sbar[i] and sbar[i+1]
        bool block;
    };
    std::vector<Entry> entries;
};
ProceedsPlan plan_proceeds(const MarketSpec& spec, const Trajectory& tr, const std::vector<double>& grid,
                           double gamma);

struct ProceedsEntry {
    double total = 0.0;
    double continuous = 0.0;
    double block = 0.0;
};
// Left-point sums for continuous trading; blocks via F.
ProceedsEntry pathwise_proceeds(const MarketSpec& spec, const Trajectory& tr, const Path& path, double gamma);

struct Checkpoint {
    double t = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
    double deviation = 0.0;  // mean - G0-
    bool pass = false;
};

struct MartingaleReport {
    std::string strategy;
    bool optimal = false;
    bool expect_strict = false;
    double g0_minus = 0.0;
    std::vector<Checkpoint> checkpoints;
    bool strict_shortfall = false;
    bool pass = false;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;

    std::string summary() const;
};

struct GCandidate {
    Schedule schedule;
    bool optimal = false;
    bool expect_strict = false;  // must fall short by more than 3 SE at the horizon
};

// G_t = L_t + exp(-gamma t) sbar_t V(Y_t, Theta_t) at t in {0, H/4, H/2, H}.
std::vector<MartingaleReport> g_process_check(const ValueField& field, const std::vector<GCandidate>& candidates,
                                              const SimConfig& cfg);

// Monte-Carlo mean of the discounted proceeds over the configured horizon.
Estimate proceeds_estimate(const MarketSpec& spec, const Schedule& schedule, const SimConfig& cfg);

struct DominanceEntry {
    std::string name;
    bool admissible = false;
    std::string reason;
    double j = 0.0;
    double margin = 0.0;  // J(optimal) - J(perturbed)
};

struct DominanceReport {
    double j_optimal = 0.0;
    std::vector<DominanceEntry> entries;
    std::size_t compared = 0;
    double min_margin = 0.0;
    bool pass = false;
};

constexpr double kDominanceTol = 1e-9;

DominanceReport perturbation_dominance(std::shared_ptr<const FreeBoundary> fb, double y, double theta,
                                       const std::vector<Strategy>& perturbations, double s0 = 1.0);
// Delays, mis-sized blocks, constant-rate and hold-impact competitors.
std::vector<Strategy> standard_perturbations(std::shared_ptr<const FreeBoundary> fb, double y, double theta);

// Lorenz-Schied optimal strategy on the grid of cfg (horizon T), sharing the
// Brownian increments of `path`. With bachelier the unaffected price is
// s0 + mu t + sigma W and the strategy is deterministic.
struct LSPath {
    std::vector<double> t;
    std::vector<double> x;       // position after trading at t[i]; x.back() = 0
    std::vector<double> e;       // volume impact E after trading at t[i]
    std::vector<double> price;   // unaffected price
    double min_price = 0.0;      // min over i of price[i] + E(t[i]-)
    bool dt_warning = false;     // dt > T/500
};
LSPath ls_optimal_path(const SimConfig& cfg, double rho, double x_init, const Path& path, bool bachelier = false);

Estimate negative_price_probability(const SimConfig& cfg, double rho, double x_init, bool bachelier = false);

struct LSHorizonStats {
    double horizon = 0.0;
    Estimate p_negative;
    double nonmonotone_fraction = 0.0;  // paths where X both rises and falls
    double mean_variation = 0.0;        // mean total variation of X on [0, T)
    std::vector<LSPath> samples;
};

struct ComparisonBundle {
    double mlob_T = 0.0;
    double mlob_initial_block = 0.0;
    Trajectory mlob;
    bool mlob_monotone = false;
    std::vector<LSHorizonStats> ls;
};

// mLOB with f = exp(y/c), h = rho y, delta = gamma - mu, from Y0- = 0.
ComparisonBundle mlob_vs_ls_compare(const SimConfig& cfg, double rho, double c, double x_init,
                                    const std::vector<double>& horizons, std::size_t n_samples = 3);

}  // namespace mlob
