#pragma once

// Floating cross-checks of symbolic claims: residuals sampled at seeded
// rational points, and fixed-step RK4 runs of third-order ODEs watching
// first integrals.

#include "wdvv/fixtures.hpp"
#include "wdvv/numeric.hpp"
#include "wdvv/reductions.hpp"
#include "wdvv/report.hpp"
#include "wdvv/solutions.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace wdvv {

struct SampleConfig {
    std::uint64_t seed = 20240501;
    int count = 20;
    long digits = 50;
    /// Every sampled variable is drawn from (lo, hi).
    mpq_class lo{1, 2}, hi{2};
    /// Fixed values for named symbols (parameters such as k, alpha).
    std::map<std::string, mpq_class> parameters;

    /// Throws std::invalid_argument: count < 1, digits < 30, box not inside (0, inf).
    void validate() const;
};

/// Point for the names, deterministic in (cfg.seed, index).
Point sample_in_box(const std::vector<std::string>& names, const SampleConfig& cfg, std::uint64_t index);

/// Largest modulus of `residual` over cfg.count points. A point that
/// leaves the principal branch is redrawn (up to 8 times per point).
double numeric_residual_sample(const Expr& residual, const SampleConfig& cfg);
/// Same for every residual of a table row (f PDE, F PDE, relations).
double numeric_residual_sample(const SolutionEntry& e, const SampleConfig& cfg, const EntryOptions& opt = {});

class OdeError : public std::runtime_error {
public:
    OdeError(const std::string& msg, double z) : std::runtime_error(msg), z(z) {}
    double z;
};

using OdeState = std::array<LongComplex, 3>;  // phi, phi', phi''

/// Solved form phi''' = -rest / lead of a residual linear in the top jet.
struct ExplicitOde {
    std::string func = "phi", var = "z";
    Expr lead, rest;
};
/// Throws OdeError when the residual is not third order or not linear in phi'''.
ExplicitOde explicit_ode(const OdeResidual& ode);

/// (phi, phi', phi'') of a closed-form solution at z0.
OdeState initial_state(const NormalForm& solution, const std::string& var, long double z0);

struct DriftResult {
    std::vector<long double> drift;  // max |K(z) - K(z0)| per integral
    OdeState final_state{};
};

/// Classical RK4 with `steps` equal steps over [z0, z1]. Throws OdeError
/// (with its location) when the leading coefficient vanishes.
DriftResult integrate_ode_check(const ExplicitOde& ode, const OdeState& init, const std::vector<NormalForm>& integrals,
                                long double z0, long double z1, int steps);

/// log2 of drift(steps) / drift(2 steps), worst integral; about 4 for RK4.
double observed_order(const ExplicitOde& ode, const OdeState& init, const std::vector<NormalForm>& integrals,
                      long double z0, long double z1, int steps);

/// Residual sampling for every symbolic zero the other modules rely on
/// and the RK4 runs on the reduced ODEs named in the fixtures.
std::vector<Check> verify_numeric(const std::vector<Record>& reductions, const std::vector<Record>& table,
                                  const SampleConfig& cfg);

}  // namespace wdvv
