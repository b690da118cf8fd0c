#pragma once

#include "anyent/frank_wolfe.hpp"
#include "anyent/state.hpp"
#include "anyent/superops.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace anyent {

enum class MeasureMethod { closed_form, generic, frank_wolfe, direct };

std::string to_string(MeasureMethod m);

struct MeasureResult {
    double value = 0;
    MeasureMethod method = MeasureMethod::generic;
    std::optional<double> gap;
    std::optional<int> iterations;
    /// False when an optimizer hit its iteration cap above the gap tolerance.
    bool converged = true;
};

class LayoutMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class ClosedFormUnavailable : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Anything in [-1e-10, 0) becomes 0.
double clamp_measure(double v);

/// -sum_c d_c Tr(rho_c log rho_c).
double entropy(const AnyonicDensityMatrix &rho);

/// sum_c d_c Tr rho_c (log rho_c - log sigma_c); +inf on support mismatch.
double relative_entropy(const AnyonicDensityMatrix &rho, const AnyonicDensityMatrix &sigma);

MeasureResult e_ace(const AnyonicDensityMatrix &rho);
double s_ace(const AnyonicDensityMatrix &rho);

MeasureResult e_ce(const AnyonicDensityMatrix &rho, MeasureMethod method, const FrankWolfeConfig &config = {});

/// Per-block numeric detail for the D-image of rho.
REEResult e_ce_blocks(const AnyonicDensityMatrix &rho, const FrankWolfeConfig &config = {});

/// closed_form: both closed forms. generic / frank_wolfe: e_ace + Frank-Wolfe e_ce.
/// direct: min over separable sigma of S~(rho || sigma).
MeasureResult e_total(const AnyonicDensityMatrix &rho, MeasureMethod method, const FrankWolfeConfig &config = {});

struct DirectResult {
    MeasureResult result;
    AnyonicDensityMatrix minimizer;
};

DirectResult e_total_direct(const AnyonicDensityMatrix &rho, const FrankWolfeConfig &config = {});

} // namespace anyent
