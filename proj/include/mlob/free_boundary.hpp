#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "mlob/market_model.hpp"
#include "mlob/numerics.hpp"

namespace mlob {

struct CriticalPoints {
    double y0 = 0.0;
    double y_inf = 0.0;
};

// Roots of h*lambda + delta and h*lambda + h' + delta. Without a search
// interval, one is grown from [-1, 0] inside the domain.
CriticalPoints critical_points(const MarketSpec& spec, std::optional<Interval> search = std::nullopt);

// theta'(y) of the liquidation boundary.
double boundary_ode_rhs(const MarketSpec& spec, const CriticalPoints& cp, double y);

// Time to liquidation when sitting on the boundary at y.
double ttl(const MarketSpec& spec, const CriticalPoints& cp, double y);

// d ybar/d tau at ybar = y, and the selling rate d thetabar/d tau = ybar' - h(ybar).
double boundary_ttl_velocity(const MarketSpec& spec, double y);
double liquidation_rate(const MarketSpec& spec, double y);

// Acquisition counterpart (eta = mu - gamma > 0).
double acquisition_y0(const MarketSpec& spec, double eta);
double acquisition_ode_rhs(const MarketSpec& spec, double eta, double y);

struct BoundarySample {
    double y;
    double theta;
    double tau;
};

enum class BoundaryKind { Liquidation, Acquisition };

class FreeBoundary {
public:
    BoundaryKind kind() const { return kind_; }
    const MarketSpec& spec() const { return *spec_; }
    std::shared_ptr<const MarketSpec> spec_ptr() const { return spec_; }
    // For acquisition boundaries y0 is the root of h*lambda = eta and y_inf is unused.
    const CriticalPoints& critical() const { return cp_; }
    double eta() const { return eta_; }

    const std::vector<BoundarySample>& samples() const { return samples_; }
    double theta_max() const { return theta_max_; }
    double theta_covered() const { return samples_.back().theta; }
    double y_end() const { return samples_.back().y; }
    bool asymptote_reached() const { return asymptote_; }

    double theta_at(double y) const;
    double y_at(double theta) const;
    double slope_at(double y) const;
    double tau_at(double y) const;
    // 0 on the sell side of y0; +inf where the boundary is not available
    // (below y_inf or beyond the solved part). Liquidation only.
    double theta_ext(double y) const;
    // (ybar(tau), thetabar(tau))
    std::pair<double, double> of_ttl(double tau) const;

private:
    friend std::shared_ptr<const FreeBoundary> solve_boundary(std::shared_ptr<const MarketSpec>,
                                                              const CriticalPoints&, double);
    friend std::shared_ptr<const FreeBoundary> acquisition_boundary(std::shared_ptr<const MarketSpec>, double,
                                                                    double);
    FreeBoundary() = default;
    [[noreturn]] void beyond(const char* what) const;
    double x_of_y(double y) const;
    double y_of_x(double x) const;

    std::shared_ptr<const MarketSpec> spec_;
    CriticalPoints cp_;
    BoundaryKind kind_ = BoundaryKind::Liquidation;
    double eta_ = 0.0;
    double theta_max_ = 0.0;
    bool asymptote_ = false;
    std::vector<BoundarySample> samples_;
    HermiteCurve theta_curve_;  // theta against u = log(y - y_inf) (liquidation) or y (acquisition)
    HermiteCurve tau_curve_;    // acquisition only: time to completion against y
};

std::shared_ptr<const FreeBoundary> solve_boundary(std::shared_ptr<const MarketSpec> spec, const CriticalPoints& cp,
                                                   double theta_max = 1000.0);
std::shared_ptr<const FreeBoundary> solve_boundary(const MarketSpec& spec, double theta_max = 1000.0);

std::shared_ptr<const FreeBoundary> acquisition_boundary(std::shared_ptr<const MarketSpec> spec, double eta,
                                                         double theta_max);

void write_boundary_csv(std::ostream& os, const FreeBoundary& fb);
std::vector<BoundarySample> read_boundary_csv(std::istream& is);

}  // namespace mlob
