#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "nambu/report.hpp"
#include "nambu/system.hpp"

namespace nambu {

struct VerifyOptions {
    std::uint64_t seed = 42;
    std::size_t samples = 100;
    std::map<std::string, double> tolerances;  // overrides, keyed by check id
};

/// The embedded default tolerance table.
const std::map<std::string, double>& default_tolerances();

/// Runs every applicable check at `samples` seeded points. Configuration
/// problems (no samples, unknown tolerance id) raise ConfigError.
VerificationReport verify(const SystemSpec& sys, const VerifyOptions& opt = {});

}  // namespace nambu
