#pragma once

// Outcome of one named verification, shared by every module's verify_*
// entry point and by the CLI report.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wdvv {

enum class Status {
    Pass,
    Fail,
    /// Printed form fails, corrected form passes.
    Discrepancy,
    /// The check could not decide (e.g. no elimination available).
    Inconclusive,
    /// Listed for completeness; nothing is computed.
    OutOfScope,
};

const char* status_name(Status s);

struct Check {
    std::string id;
    std::string module;
    Status status = Status::Fail;
    std::string detail;
    double seconds = 0;
};

/// Long residual renderings are cut for reports.
inline std::string clip(std::string s, std::size_t n = 400) {
    if (s.size() > n) s = s.substr(0, n) + "... (" + std::to_string(s.size()) + " chars)";
    return s;
}

inline Status from_bool(bool ok) { return ok ? Status::Pass : Status::Fail; }
/// Only Fail counts; inconclusive and out-of-scope records are listed but
/// never change the outcome.
inline bool is_failure(Status s) { return s == Status::Fail; }

struct Report {
    std::string suite;
    std::string version;
    std::string fixtures_hash;
    std::uint64_t seed = 0;
    long digits = 0;
    std::vector<Check> checks;

    /// Sorts by id.
    void finalize();
    std::map<std::string, std::size_t> counts() const;
    bool ok() const;
    std::string json() const;
    std::string markdown() const;
};

/// Status from its report name; throws std::invalid_argument.
Status status_from_name(const std::string& name);

}  // namespace wdvv
