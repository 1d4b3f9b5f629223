#pragma once

// Check drivers for the symmetry algebra, the two equations with their
// hodograph relations, the Lax pair and the prepotential embeddings, plus
// the runner that assembles suites into one report.

#include "wdvv/fixtures.hpp"
#include "wdvv/report.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wdvv {

/// Determining system at max_degree, structure constants, both tables,
/// Jacobi identity, subalgebra families and normalization claims.
std::vector<Check> verify_algebra(const std::vector<Record>& rs, int max_degree = 3);

/// Explicit pairs: both residuals, forward and inverse relations, and the
/// relation variants ([relation] records) on every pair.
std::vector<Check> verify_pde(const std::vector<Record>& rs, std::uint64_t seed = 20240501, long digits = 50);

/// Curl and on-shell commutator of the Lax matrices.
std::vector<Check> verify_lax(std::uint64_t seed = 20240501, long digits = 50);

/// [embedding] records: associativity in three variables, metric shape.
std::vector<Check> verify_wdvv(const std::vector<Record>& rs);

/// [derived] records against a fresh derivation of the F1 polynomials.
std::vector<Check> verify_derived(const std::vector<Record>& rs);

struct RunOptions {
    std::string fixtures_dir;
    std::uint64_t seed = 20240501;
    long digits = 50;
    int jobs = 1;
    /// Substring; table rows not matching are skipped, other checks are
    /// dropped from the report.
    std::string filter;
    int degree = 3;
};

/// Suites: all, pde, algebra, reductions, tables, lax, wdvv, numeric.
const std::vector<std::string>& suite_names();

/// Throws FixtureError for unreadable fixtures, std::invalid_argument for
/// an unknown suite.
Report run_suite(const std::string& suite, const RunOptions& opt);

/// Digest of every *.fix file in the directory, in name order.
std::string fixtures_hash(const std::string& dir);

const char* tool_version();

}  // namespace wdvv
