#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "mlob/market_model.hpp"
#include "mlob/simulation.hpp"

namespace mlob {

// Flat "key = value" file, '#' starts a comment. Unknown keys and malformed
// numbers raise ArgumentError.
struct Config {
    PowerLawBook book;
    double delta = 0.5;
    double mu = 0.0;
    double gamma = 0.5;
    double sigma = 0.3;
    double s0 = 1.0;
    double eta = 0.0;  // acquisition; 0 means mu - gamma
    double y_init = 0.0;
    double theta_init = 1.0;
    double theta_max = 60.0;
    double horizon = 1.0;
    double dt = 1e-3;
    std::size_t paths = 10000;
    std::uint64_t seed = 0;
    double rho = 0.0;  // LS resilience; 0 means beta
    unsigned workers = 1;
    std::string name = "power-law";

    static Config parse(std::istream& is, const std::string& origin = "<config>");
    static Config load(const std::string& path);
    // delta may also come from gamma - mu; an explicit delta must agree.
    static Config from_map(const std::map<std::string, std::string>& kv);

    MarketSpec spec(bool allow_zero_delta = false) const;
    SimConfig sim() const;
    double acquisition_eta() const { return eta > 0 ? eta : mu - gamma; }
    double ls_rho() const { return rho > 0 ? rho : book.beta; }
    // every key with its resolved value, full precision
    std::map<std::string, std::string> resolved() const;
};

}  // namespace mlob
