#pragma once

#include <memory>
#include <string>
#include <utility>

#include "mlob/free_boundary.hpp"

namespace mlob {

enum class Region { Wait, Sell1, Sell2, Boundary, Buy };
const char* to_string(Region r);

struct Partials {
    double v_y;
    double v_theta;
};

// Where a state sits relative to the boundary; y_b = y - delta and
// theta_b = theta - delta is the point of the sell-region edge reached along (-1,-1).
struct Location {
    Region region;
    double delta;
    double y_b;
    double theta_b;
    double wait_y;  // wait region: boundary impact y(theta)
};

class ValueField {
public:
    explicit ValueField(std::shared_ptr<const FreeBoundary> fb);

    const MarketSpec& spec() const { return fb_->spec(); }
    const CriticalPoints& critical() const { return fb_->critical(); }
    const FreeBoundary& boundary() const { return *fb_; }
    std::shared_ptr<const FreeBoundary> boundary_ptr() const { return fb_; }

    Location locate(double y, double theta, bool two_sided = false) const;
    Region region(double y, double theta, bool two_sided = false) const;
    // signed distance to the sell-region edge in direction (-1,-1); theta in S2
    double delta_distance(double y, double theta) const;

    // value on the boundary, by impact level and by position
    double phi(double y) const;
    double phi_prime(double y) const;
    double v_bdry(double theta) const;

    double value(double y, double theta) const;
    Partials partials(double y, double theta) const;
    double value_two_sided(double y, double theta) const;
    Partials partials_two_sided(double y, double theta) const;

    // exp(int_y^{y_b} delta/h), the wait-region discount to the boundary
    double wait_factor(double y, double y_b) const;

    // (M1, M2) with M1'(y) = M2(y) theta'(y) on the boundary; phi normalised at y_ref
    std::pair<double, double> pasting_coefficients(double y, double y_ref) const;

private:
    double value_at(const Location& loc, double y, double theta) const;
    Partials partials_at(const Location& loc, double y, double theta) const;
    void require_point(double y, double theta) const;

    std::shared_ptr<const FreeBoundary> fb_;
};

struct GridSpec {
    double y_lo, y_hi;
    int ny;
    double theta_lo, theta_hi;
    int ntheta;
};

struct VIReport {
    bool two_sided = false;
    long points = 0;
    long strict_points = 0;
    long excluded = 0;
    // equalities: max |.| where they must hold
    double hjb_equality_max = 0.0;       // -delta V - h V_y (wait region closure / boundary)
    double direction_equality_max = 0.0; // V_y + V_theta - f (sell region closure / everywhere)
    // strict inequalities: smallest margin observed (positive is good)
    double wait_margin_min;  // V_y + V_theta - f inside W
    double sell_margin_min;  // delta V + h V_y inside S (or off the boundary)
    // two-sided: largest -delta V - h V_y anywhere (must be <= tol)
    double hjb_max = -1.0;
    double worst_y = 0.0, worst_theta = 0.0;
    bool pass = false;

    std::string summary() const;
};

constexpr double kEqualityTol = 1e-8;
constexpr double kStrictMargin = 1e-10;
constexpr double kBoundaryExclusion = 1e-9;

VIReport check_variational_inequalities(const ValueField& field, const GridSpec& grid, bool two_sided = false,
                                        unsigned workers = 1);

// |int_0^theta h'/(h lambda + h' + delta)(y(x)) dx - h(h lambda + delta)/(delta (h lambda + h' + delta))(y(theta))|
double check_appendix_identity(const ValueField& field, double theta);

// V_bdry(theta) by the nested-integral representation along the boundary.
double v_bdry_integral(const ValueField& field, double theta);

}  // namespace mlob
