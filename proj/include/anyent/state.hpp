#pragma once

#include "anyent/linalg.hpp"
#include "anyent/model.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace anyent {

/// One party's anyons and the fusion-path basis of each local total charge.
/// `internal_dim` is an extra vacuum-charge factor (adjoined ancillas); local
/// index = path_index * internal_dim + ancilla_index.
struct PartyLayout {
    std::vector<ChargeId> anyons;
    int internal_dim = 1;
    std::vector<std::vector<FusionPath>> basis; // indexed by charge id

    static PartyLayout make(const AnyonModel &model, std::vector<ChargeId> anyons, int internal_dim = 1);

    int paths(ChargeId a) const { return int(basis.at(a).size()); }
    int dim(ChargeId a) const { return paths(a) * internal_dim; }
    /// Sum over a of d_a * dim(a).
    double weighted_dim(const AnyonModel &model) const;

    bool operator==(const PartyLayout &o) const { return anyons == o.anyons && internal_dim == o.internal_dim; }
};

enum class Party { A, B };

struct SectorKey {
    ChargeId a = 0, b = 0, c = 0;
    int mu = 1; // 1-based, at most N_ab^c
    bool operator==(const SectorKey &) const = default;
};

/// An (a, b, mu) sub-block inside the global charge-c sector. Rows are ordered
/// (i, j) with j fastest.
struct SectorSlot {
    SectorKey key;
    int offset = 0;
    int dim_a = 0;
    int dim_b = 0;
    int size() const { return dim_a * dim_b; }
};

/// Canonical ordering of the composite labels (a, b, mu, i, j) per global charge.
class BipartiteBasis {
  public:
    BipartiteBasis(ModelPtr model, PartyLayout a, PartyLayout b);

    const AnyonModel &model() const { return *model_; }
    const ModelPtr &model_ptr() const { return model_; }
    const PartyLayout &layout(Party p) const { return p == Party::A ? a_ : b_; }
    const PartyLayout &layout_a() const { return a_; }
    const PartyLayout &layout_b() const { return b_; }

    std::size_t charge_count() const { return slots_.size(); }
    int sector_dim(ChargeId c) const { return dims_.at(c); }
    const std::vector<SectorSlot> &slots(ChargeId c) const { return slots_.at(c); }
    /// nullptr when the sector does not exist.
    const SectorSlot *find(const SectorKey &key) const;
    double weighted_dim() const;

    bool same_shape(const BipartiteBasis &o) const;

  private:
    ModelPtr model_;
    PartyLayout a_, b_;
    std::vector<std::vector<SectorSlot>> slots_;
    std::vector<int> dims_;
};

using BasisPtr = std::shared_ptr<const BipartiteBasis>;

BasisPtr make_basis(ModelPtr model, const std::vector<ChargeId> &anyons_a, const std::vector<ChargeId> &anyons_b);

/// Provenance marker used to enable closed-form measures.
struct IsotropicTag {
    int n = 0;
    double alpha = 0.0;
};

/// Bipartite anyonic density operator stored as one Hermitian block per
/// global charge c. Cross-c coherences are unrepresentable.
class AnyonicDensityMatrix {
  public:
    /// Blocks indexed by charge id; each must match the sector dimension.
    AnyonicDensityMatrix(BasisPtr basis, std::vector<Matrix> blocks);

    static AnyonicDensityMatrix zero(BasisPtr basis);
    static AnyonicDensityMatrix maximally_mixed(BasisPtr basis);

    const BipartiteBasis &basis() const { return *basis_; }
    const BasisPtr &basis_ptr() const { return basis_; }
    const AnyonModel &model() const { return basis_->model(); }
    const Matrix &block(ChargeId c) const { return blocks_.at(c); }
    const std::vector<Matrix> &blocks() const { return blocks_; }

    /// Copy of the (a, b, mu) / (a', b', mu') sub-block inside sector c.
    Matrix sub_block(const SectorSlot &row, const SectorSlot &col) const;

    const std::optional<IsotropicTag> &isotropic_tag() const { return tag_; }
    AnyonicDensityMatrix with_tag(std::optional<IsotropicTag> tag) const;

    AnyonicDensityMatrix scaled(double s) const;
    double max_abs_diff(const AnyonicDensityMatrix &o) const;

  private:
    BasisPtr basis_;
    std::vector<Matrix> blocks_;
    std::optional<IsotropicTag> tag_;
};

using State = AnyonicDensityMatrix;

/// lambda * x + (1 - lambda) * y on identical bases.
AnyonicDensityMatrix mix(double lambda, const AnyonicDensityMatrix &x, const AnyonicDensityMatrix &y);

/// Single-party state: one Hermitian block per local charge a (trace weight d_a).
class SingleSystemDensityMatrix {
  public:
    SingleSystemDensityMatrix(ModelPtr model, PartyLayout layout, std::vector<Matrix> blocks);

    static SingleSystemDensityMatrix maximally_mixed(ModelPtr model, PartyLayout layout);
    /// |psi><psi| / d_a in the charge-a block; psi is normalized here.
    static SingleSystemDensityMatrix pure(ModelPtr model, PartyLayout layout, ChargeId a, const Vector &psi);

    const AnyonModel &model() const { return *model_; }
    const ModelPtr &model_ptr() const { return model_; }
    const PartyLayout &layout() const { return layout_; }
    const Matrix &block(ChargeId a) const { return blocks_.at(a); }
    const std::vector<Matrix> &blocks() const { return blocks_; }

    double max_abs_diff(const SingleSystemDensityMatrix &o) const;

  private:
    ModelPtr model_;
    PartyLayout layout_;
    std::vector<Matrix> blocks_;
};

double quantum_trace(const AnyonicDensityMatrix &rho);
double quantum_trace(const SingleSystemDensityMatrix &rho);

/// Traces out the party not named by `keep`: coefficient d_c / d_(kept charge).
SingleSystemDensityMatrix partial_quantum_trace(const AnyonicDensityMatrix &rho, Party keep);

/// Block (a, b, c, mu) = rho_A[a] (x) rho_B[b] for every allowed (c, mu).
AnyonicDensityMatrix product_state(const SingleSystemDensityMatrix &rho_a, const SingleSystemDensityMatrix &rho_b);

struct Diagnostics {
    double hermiticity = 0;        // max |rho - rho^dagger|
    double min_eigenvalue = 0;     // over all blocks
    double qtrace_deviation = 0;   // |quantum trace - 1|
    double superselection = 0;     // max |cross-sector element|
    bool ok(double herm_tol = 1e-12, double psd_tol = -1e-10, double trace_tol = 1e-10) const {
        return hermiticity <= herm_tol && min_eigenvalue >= psd_tol && qtrace_deviation <= trace_tol &&
               superselection == 0.0;
    }
};

Diagnostics validate(const AnyonicDensityMatrix &rho);
Diagnostics validate(const SingleSystemDensityMatrix &rho);

/// Checks a dense operator on the concatenated sectors (c ascending) for
/// cross-sector elements as well.
Diagnostics validate_dense(const BipartiteBasis &basis, const Matrix &dense);

/// Splits a dense operator into sector blocks; throws if any cross-sector
/// element exceeds `tol`.
AnyonicDensityMatrix from_dense(BasisPtr basis, const Matrix &dense, double tol = 1e-12);
Matrix to_dense(const AnyonicDensityMatrix &rho);

/// G G^dagger per sector with complex Gaussian G, then quantum-trace normalized.
AnyonicDensityMatrix random_state(BasisPtr basis, std::uint64_t seed);
SingleSystemDensityMatrix random_local_state(ModelPtr model, const PartyLayout &layout, std::uint64_t seed);

} // namespace anyent
