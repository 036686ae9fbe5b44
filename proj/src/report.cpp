#include "nambu/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nambu/error.hpp"

namespace nambu {

std::string_view verdict_name(Verdict v) noexcept {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::fail: return "FAIL";
        case Verdict::erratum_suspect: return "ERRATUM-SUSPECT";
        case Verdict::skipped_singular: return "SKIPPED-SINGULAR";
    }
    return "?";
}

void CheckRecord::add(double abs, double rel) {
    ++points;
    // NaN must never pass silently.
    if (std::isnan(abs) || std::isnan(rel)) {
        max_abs = max_rel = INFINITY;
        return;
    }
    max_abs = std::max(max_abs, abs);
    max_rel = std::max(max_rel, rel);
}

void CheckRecord::finish() {
    if (points == 0 && skipped > 0) {
        verdict = Verdict::skipped_singular;
        return;
    }
    const double r = absolute ? max_abs : max_rel;
    if (r <= tolerance)
        verdict = Verdict::pass;
    else
        verdict = suspect_ok ? Verdict::erratum_suspect : Verdict::fail;
}

bool VerificationReport::failed() const {
    return std::any_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.verdict == Verdict::fail; });
}

std::size_t VerificationReport::count(Verdict v) const {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [&](const CheckRecord& r) { return r.verdict == v; }));
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json j{{"id", r.id},
                         {"reference", r.reference},
                         {"max_abs_residual", r.max_abs},
                         {"max_rel_residual", r.max_rel},
                         {"tolerance", r.tolerance},
                         {"metric", r.absolute ? "absolute" : "relative"},
                         {"points", r.points},
                         {"skipped_singular", r.skipped},
                         {"verdict", verdict_name(r.verdict)}};
        if (!r.note.empty()) j["note"] = r.note;
        checks.push_back(std::move(j));
    }
    return {{"system", system},
            {"parameters", parameters},
            {"seed", seed},
            {"samples", samples},
            {"tolerances", tolerances},
            {"checks", checks},
            {"summary",
             {{"PASS", count(Verdict::pass)},
              {"FAIL", count(Verdict::fail)},
              {"ERRATUM-SUSPECT", count(Verdict::erratum_suspect)},
              {"SKIPPED-SINGULAR", count(Verdict::skipped_singular)}}},
            {"wall_time_s", wall_time}};
}

std::string VerificationReport::dump() const { return to_json().dump(2) + "\n"; }

void write_atomically(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
        out << text;
        out.flush();
        if (!out) throw Error("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot move report into place at '" + path + "': " + ec.message());
    }
}

}  // namespace nambu
