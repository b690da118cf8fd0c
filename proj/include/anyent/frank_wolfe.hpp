#pragma once

#include "anyent/linalg.hpp"
#include "anyent/superops.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace anyent {

struct FrankWolfeConfig {
    double gap_tol = 1e-7;
    int max_iter = 5000;
    /// Random restarts of the alternating-eigenvector product oracle.
    int restarts = 16;
    double inner_tol = 1e-10;
    int inner_max_iter = 200;
    double line_search_tol = 1e-12;
    /// Away steps on the active atom set; plain Frank-Wolfe when false.
    bool away_steps = true;
    std::uint64_t seed = 20240601;
    bool record_trace = false;
};

/// Minimization over the convex hull of product pure states |psi><psi| (x) |phi><phi|,
/// one labeled block (m x n tensor factors) at a time. The variable is a list of
/// PSD block matrices with total trace one.
struct SeparableProblem {
    std::vector<std::pair<int, int>> factors;
    std::function<double(const std::vector<Matrix> &)> objective;
    /// Euclidean gradient per block (Hermitian).
    std::function<std::vector<Matrix>(const std::vector<Matrix> &)> gradient;
};

struct FrankWolfeResult {
    double value = 0;
    double gap = 0;
    int iterations = 0;
    bool converged = false;
    std::vector<Matrix> minimizer;
    std::vector<double> objective_trace;
    std::vector<double> gap_trace;
};

FrankWolfeResult minimize_over_separable(const SeparableProblem &problem, const FrankWolfeConfig &config);

struct ProductOracleResult {
    double value = 0;
    std::size_t block = 0;
    Vector psi, phi;
};

/// min over blocks and unit psi, phi of <psi phi| H_k |psi phi>.
ProductOracleResult product_oracle(const std::vector<Matrix> &grad, const std::vector<std::pair<int, int>> &factors,
                                   const FrankWolfeConfig &config, std::uint64_t stream);

/// -D log(sigma)[rho]: gradient of sigma -> -Tr rho log sigma.
Matrix neg_log_derivative(const Matrix &sigma, const Matrix &rho);

struct BlockREE {
    std::string label;
    double weight = 0;      // trace of the block in the input state
    double ree = 0;         // relative entropy of entanglement of the normalized block
    double gap = 0;
    int iterations = 0;
    bool converged = true;
};

struct REEResult {
    double value = 0; // sum of weight * ree
    double gap = 0;   // Frank-Wolfe gap of the assembled minimizer
    int iterations = 0;
    bool converged = true;
    std::vector<BlockREE> blocks;
};

/// Relative entropy of entanglement of a conventional state that is block
/// diagonal in (a, b) local-charge labels; separable states respect the same
/// superselection, so the minimum splits into per-block problems weighted by
/// the block traces.
REEResult ree_frank_wolfe(const ConventionalDensityMatrix &rho, const FrankWolfeConfig &config = {});

} // namespace anyent
