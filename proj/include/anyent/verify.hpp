#pragma once

#include "anyent/state.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace anyent {

/// Deliberate corruption used to confirm the suites can fail.
enum class Fault {
    none,
    unweighted_D, // D without the d_c weights
};

struct VerifyConfig {
    std::uint64_t seed = 1;
    int trials = 200;
    Fault fault = Fault::none;
    /// Indices into the verify layouts; empty means all of them.
    std::vector<std::size_t> layouts;
};

struct CheckResult {
    std::string description;
    int samples = 0;
    double max_deviation = 0; // largest violation (or |difference| for equalities)
    double tolerance = 0;
    bool pass = true;
};

struct SuiteReport {
    std::string name;
    std::vector<CheckResult> checks;
    bool pass() const;
};

const std::vector<std::string> &suite_names();

/// `all` is not accepted here; see run_suites.
SuiteReport run_suite(const std::string &name, const VerifyConfig &config);

/// Expands `all` into every suite in order.
std::vector<SuiteReport> run_suites(const std::string &name, const VerifyConfig &config);

/// Small layouts cycled through by the random trials.
BasisPtr verify_layout(std::size_t index);
std::size_t verify_layout_count();

/// The D operator the suites use (corrupted under Fault::unweighted_D).
AnyonicDensityMatrix suite_D(const AnyonicDensityMatrix &rho, Fault fault);

/// Full-support separable state: a short mixture of random product states.
AnyonicDensityMatrix random_separable(const BasisPtr &basis, std::uint64_t seed, int terms = 3);

} // namespace anyent
