#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "mlob/free_boundary.hpp"

namespace mlob {

enum class ScheduleKind { Liquidation, TwoSided, Acquisition, TypeA, Custom };
const char* to_string(ScheduleKind k);

// One piece of a deterministic execution plan. Blocks are instantaneous
// (t0 == t1); the others cover [t0, t1]. Start and end states are stored so
// that any time can be evaluated without replaying the plan.
struct Piece {
    enum class Kind { Block, Wait, Rate, Hold, Boundary, AcqBoundary };
    Kind kind;
    double t0 = 0.0, t1 = 0.0;
    double y0 = 0.0, theta0 = 0.0, a0 = 0.0;  // state at t0 (before the trade for blocks)
    double y1 = 0.0, theta1 = 0.0, a1 = 0.0;  // state at t1
    double size = 0.0;    // Block: shares sold, negative buys
    double rate = 0.0;    // Rate/Hold: selling rate dA/dt
    double target = 0.0;  // AcqBoundary: total position to buy
};

struct ScheduleState {
    double theta;
    double y;
    double a;     // cumulative net sales
    double rate;  // dA/dt
};

// Theta is the position held (liquidation) or bought so far (acquisition).
struct Schedule {
    ScheduleKind kind = ScheduleKind::Liquidation;
    std::string label;
    double y_pre = 0.0, theta_pre = 0.0;
    double initial_block = 0.0;  // > 0 sells, < 0 buys
    double wait_time = 0.0;
    double terminal_time = 0.0;
    std::vector<Piece> pieces;
    std::shared_ptr<const MarketSpec> spec;
    std::shared_ptr<const FreeBoundary> boundary;

    bool empty() const { return pieces.empty(); }
    // State after any trade at t; t < 0 gives the state before time 0.
    ScheduleState state_at(double t) const;
    ScheduleState final_state() const;
};

Schedule optimal_schedule(std::shared_ptr<const FreeBoundary> fb, double y_init, double theta_init);
Schedule optimal_schedule_two_sided(std::shared_ptr<const FreeBoundary> fb, double y_init, double theta_init);
Schedule acquisition_schedule(std::shared_ptr<const FreeBoundary> acq, double y_init, double theta_target);

// Finite horizon, delta = 0: block, constant impact on (0, T), block at T.
struct TypeAPlan {
    Schedule schedule;
    double y_star;       // terminal impact
    double y_hold;       // impact held on (0, T)
    double bound;        // F(Y0-) - F(y*) - T g((Y0- - Theta0- - y*)/T)
};
TypeAPlan type_a_schedule(std::shared_ptr<const MarketSpec> spec, double T, double y_init, double theta_init);
// Right-hand side of the Jensen bound for terminal impact y_T.
double type_a_bound(const MarketSpec& spec, double T, double y_init, double theta_init, double y_T);

// Free evolution dY = (-h(Y) - rate) dt over time t.
double impact_flow(const MarketSpec& spec, double y, double rate, double t);
// Time for Y to decay from y to y_target without trading.
double wait_time(const MarketSpec& spec, double y, double y_target);
double h_inverse(const MarketSpec& spec, double x);

// Hand-built deterministic strategies, mainly as competitors of the optimum.
struct Leg {
    enum class Kind { Block, Wait, Rate, Hold, Dump, Optimal };
    Kind kind;
    double size = 0.0;
    double duration = 0.0;
    double rate = 0.0;

    static Leg block(double size) { return {Kind::Block, size, 0.0, 0.0}; }
    static Leg wait(double d) { return {Kind::Wait, 0.0, d, 0.0}; }
    static Leg at_rate(double rate, double d) { return {Kind::Rate, 0.0, d, rate}; }
    // sell at -h(Y) so that Y stays put
    static Leg hold(double d) { return {Kind::Hold, 0.0, d, 0.0}; }
    static Leg dump() { return {Kind::Dump, 0.0, 0.0, 0.0}; }
    // the optimal one-sided schedule from wherever the state is
    static Leg optimal() { return {Kind::Optimal, 0.0, 0.0, 0.0}; }
};

struct Strategy {
    std::string name;
    std::vector<Leg> legs;
};

// Throws ValidationError naming the reason when the strategy buys (unless
// two_sided) or would sell more than it holds.
Schedule compile_strategy(std::shared_ptr<const FreeBoundary> fb, double y_init, double theta_init,
                          const Strategy& strategy, bool two_sided = false);
Schedule compile_strategy(std::shared_ptr<const MarketSpec> spec, double y_init, double theta_init,
                          const Strategy& strategy, bool two_sided = false);

struct TrajectorySample {
    double t, theta, y, a, rate;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;  // a trade at t shows as two samples at t
    double terminal_time = 0.0;
};

// Uniform grid of step dt on [0, max(T, horizon)] plus piece ends and extra
// times. Waits and constant-rate pieces are stepped with RK4.
Trajectory execute(const Schedule& schedule, double dt, double horizon = 0.0,
                   const std::vector<double>& extra_times = {});

// Deterministic proceeds per unit S0 weighted by exp(-delta t); for
// acquisition schedules pass delta = -eta to get minus the discounted cost.
double analytic_J(const Schedule& schedule, double s0, double delta);

void write_trajectory_csv(std::ostream& os, const Trajectory& tr);

}  // namespace mlob
