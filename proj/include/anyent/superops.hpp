#pragma once

#include "anyent/state.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace anyent {

/// Projects onto states without charge lines between the parties:
/// D[rho]_{ab c' nu} = sum_{c,mu} d_c rho_{ab c mu} / (d_a d_b) on every (c', nu).
AnyonicDensityMatrix apply_D(const AnyonicDensityMatrix &rho);

/// max over (a,b) of the spread between the diagonal sub-blocks (c, mu) plus any
/// off-diagonal sub-block magnitude; zero exactly for SEP u CENT.
double free_state_residual(const AnyonicDensityMatrix &rho);

class ChannelError : public std::runtime_error {
  public:
    enum class Kind { shape_mismatch, not_normalized, not_free };
    ChannelError(Kind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

  private:
    Kind kind_;
};

/// K maps the global charge-`from` sector into the charge-`to` sector.
struct KrausOp {
    ChargeId to = 0;
    ChargeId from = 0;
    int index = 0;
    Matrix K;
};

/// Family of anyonic Kraus operators with sum_{a,i} (d_a/d_b) K^dagger K = I_b.
struct KrausChannel {
    std::vector<KrausOp> ops;
    /// Largest deviation from the normalization over all source charges.
    double normalization_residual(const BipartiteBasis &basis) const;
};

KrausChannel identity_channel(const BipartiteBasis &basis);

/// Projectors onto each local charge of `party`; one Kraus operator per
/// (global charge, local charge) pair.
KrausChannel charge_projector_channel(const BipartiteBasis &basis, Party party);

/// Random channel acting on one party's path indices, block diagonal in that
/// party's local charge (and thus in every global label).
KrausChannel random_local_channel(const BipartiteBasis &basis, Party party, std::uint64_t seed, int kraus_count = 3);

/// Random superselection-respecting channel that may move weight between
/// global charge sectors (not local; used for contraction tests).
KrausChannel random_global_channel(const BipartiteBasis &basis, std::uint64_t seed, int kraus_count = 2);

/// rho' = sum K rho K^dagger. Throws ChannelError on bad shapes or normalization.
AnyonicDensityMatrix apply_channel(const AnyonicDensityMatrix &rho, const KrausChannel &ch, double norm_tol = 1e-10);

struct MeasurementOutcome {
    ChargeId charge = 0;
    double probability = 0;
    AnyonicDensityMatrix post_state;
};

/// Projective measurement of one party's total charge. Outcomes with
/// probability below 1e-14 are dropped.
std::vector<MeasurementOutcome> measure_local_charge(const AnyonicDensityMatrix &rho, Party party);

/// Unnormalized branch P_a rho P_a.
AnyonicDensityMatrix project_local_charge(const AnyonicDensityMatrix &rho, Party party, ChargeId a);

/// Tensors the party's local space with a dim-dimensional vacuum-charge
/// ancilla held in its first basis state.
AnyonicDensityMatrix adjoin_vacuum_ancilla(const AnyonicDensityMatrix &rho, Party party, int dim);

/// Traces the party's internal vacuum factor back out (internal_dim -> 1).
AnyonicDensityMatrix discard_vacuum_ancilla(const AnyonicDensityMatrix &rho, Party party);

/// Whole-party partial trace wrapped as a bipartite state whose traced party
/// is a single vacuum anyon.
AnyonicDensityMatrix trace_out_party(const AnyonicDensityMatrix &rho, Party traced);

/// Block of a conventional (ordinary-trace) density matrix. `factors` carries
/// the (left, right) tensor dimensions when the block is a product space.
struct ConventionalBlock {
    std::string label;
    Matrix matrix;
    std::optional<std::pair<int, int>> factors;
};

struct ConventionalDensityMatrix {
    std::vector<ConventionalBlock> blocks;

    double trace() const;
    double min_eigenvalue() const;
};

/// rho_c = d_c rho~_c per global charge.
ConventionalDensityMatrix map_F(const AnyonicDensityMatrix &rho);

/// For free states only: one block per (a, b), rho^con_ab = d_a d_b D[rho]_ab,
/// indexed (a,i) (x) (b,j). Throws ChannelError(not_free).
ConventionalDensityMatrix map_G(const AnyonicDensityMatrix &sigma, double tol = 1e-10);

/// Ordinary relative entropy between block-diagonal states with matching
/// block shapes; +inf on support mismatch.
double conventional_relative_entropy(const ConventionalDensityMatrix &rho, const ConventionalDensityMatrix &sigma);

double conventional_entropy(const ConventionalDensityMatrix &rho);

} // namespace anyent
