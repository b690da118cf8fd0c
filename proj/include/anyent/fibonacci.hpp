#pragma once

#include "anyent/frank_wolfe.hpp"
#include "anyent/state.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace anyent {

/// F_1 = F_2 = 1.
std::int64_t fibonacci_number(int k);

ModelPtr fibonacci_model();

class NotPositive : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct IsotropicParams {
    int n = 0;
    double alpha = 0;
    std::int64_t fib_prev = 0; // F_{n-1}
    std::int64_t fib = 0;      // F_n
    double d = 0;              // d_tau

    /// Validates 1 <= n <= 8; does not check PSD admissibility.
    static IsotropicParams make(int n, double alpha);
};

/// Basis with n tau anyons per party.
BasisPtr fibonacci_basis(int n);

struct MesDecomposition {
    BasisPtr basis;
    Vector phi1; // charge-1 sector, local charges (1, 1)
    Vector phi2; // charge-1 sector, local charges (tau, tau)
    Vector phi3; // charge-tau sector, local charges (tau, tau)
    /// Coefficients of |Phi_k><Phi_k| in D of the MES.
    double weights[3] = {0, 0, 0};
    /// The MES as c1 * phi1 + c2 * phi2 inside the charge-1 sector.
    double coeff1 = 0, coeff2 = 0;
};

MesDecomposition mes_decomposition(int n);

AnyonicDensityMatrix build_mes(int n);

/// alpha * MES + (1 - alpha) * I / d^{2n}, tagged for closed forms.
/// Throws NotPositive when the result has an eigenvalue below -1e-12.
AnyonicDensityMatrix build_isotropic(int n, double alpha);

/// Smallest admissible alpha (the PSD boundary, determined numerically).
double isotropic_alpha_min(int n);

double e_ace_closed(const IsotropicParams &p);

/// F log F + (1-F) log(1-F) + log k - (1-F) log(k-1) for F > 1/k, else 0.
double rains_ree(double fidelity, int k);

/// y log y + (1-y) log(1-y) + log x - (1-y) log(x-1).
double k_function(double x, double y);

struct ClosedFormContext {
    double fidelity = 0;
    int block_dim = 0; // local dimension of the block (tensor factor size)
    double x = 0, y = 0;
};

struct ClosedFormBlock {
    std::string label; // "11", "tt1", "ttt"
    double weight = 0; // quantum-trace weight of the block
    ClosedFormContext ctx;
    /// alpha above which the block is entangled.
    double threshold = 0;
    double value = 0; // weight * REE of the normalized block
};

std::vector<ClosedFormBlock> e_ce_closed_blocks(const IsotropicParams &p);
double e_ce_closed(const IsotropicParams &p);

/// Largest per-block separability threshold with a nontrivial block.
double e_ce_threshold(int n);

enum class SweepMethod { closed, generic, fw };

std::string to_string(SweepMethod m);

struct SweepRow {
    double alpha = 0;
    double e_ace = 0;
    double e_ce = 0;
    double e_total = 0;
    SweepMethod method = SweepMethod::closed;
    std::optional<double> gap;
};

/// closed: closed forms throughout. generic: eigendecomposition E_ACE plus
/// Frank-Wolfe E_CE. fw: as generic, with E_total from the direct minimization.
std::vector<SweepRow> sweep(int n, const std::vector<double> &alphas, SweepMethod method = SweepMethod::closed,
                            const FrankWolfeConfig &config = {});

std::vector<double> linear_grid(double lo, double hi, int steps);

inline constexpr const char *kSweepCsvHeader = "alpha,E_ACE,E_CE,E_total,method,gap";

/// 12 significant digits; measures divided by ln 2 when `bits`.
void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows, bool bits = false);

std::string format_g12(double v);

} // namespace anyent
