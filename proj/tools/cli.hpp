#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlob/config.hpp"

namespace mlob::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kManifestSchema = 1;

enum Exit { kOk = 0, kInvalid = 1, kUsage = 2, kVerifyFailed = 3 };

// args excludes the program name
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Flags beyond the config file, recorded in the manifest for replay.
struct Options {
    std::string mode = "monotone";
    std::string format = "csv";
    std::string grid;  // "NY,NT"
    std::string y_range = "-3,1";
    std::string theta_range = "0,10";
    std::string horizons = "1,0.842";
    std::size_t save_paths = 5;
};

struct VerifyResult {
    nlohmann::ordered_json report;
    bool pass = false;
};

// Invariant suite over the configured preset; grid is (ny, ntheta).
VerifyResult run_verify(const Config& cfg, const Options& opt, int ny, int ntheta, std::ostream& log);

std::string sha256_hex(const std::string& bytes);

}  // namespace mlob::cli
