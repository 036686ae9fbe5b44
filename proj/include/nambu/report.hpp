#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nambu/field.hpp"

namespace nambu {

enum class Verdict { pass, fail, erratum_suspect, skipped_singular };

std::string_view verdict_name(Verdict v) noexcept;

/// Accumulates residuals of one check over a point sweep.
struct CheckRecord {
    std::string id;
    std::string reference;  // the identity being checked, in formula form
    double max_abs = 0.0;
    double max_rel = 0.0;
    double tolerance = 0.0;
    bool absolute = false;     // verdict from max_abs instead of max_rel
    bool suspect_ok = false;   // a failure is reported as ERRATUM-SUSPECT
    std::size_t points = 0;
    std::size_t skipped = 0;   // points on the singular locus
    std::string note;
    Verdict verdict = Verdict::pass;

    void add(double abs, double rel);
    void skip() { ++skipped; }
    /// Fixes the verdict from the accumulated maxima.
    void finish();
};

struct VerificationReport {
    std::string system;
    ParameterMap parameters;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    std::map<std::string, double> tolerances;
    std::vector<CheckRecord> records;
    double wall_time = 0.0;

    bool failed() const;
    std::size_t count(Verdict v) const;
    nlohmann::json to_json() const;
    std::string dump() const;
};

/// Writes `text` to `path` through a temporary file and a rename.
void write_atomically(const std::string& path, const std::string& text);

}  // namespace nambu
