#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace anyent {

using ChargeId = std::uint16_t;

/// The vacuum always has id 0.
inline constexpr ChargeId kVacuum = 0;

struct Charge {
    ChargeId id = 0;
    std::string name;
};

enum class ModelErrorKind {
    syntax,
    missing_vacuum,
    duplicate_charge,
    unknown_charge,
    missing_fusion,
    vacuum_rule,
    non_commutative,
    associativity,
    invalid_dual,
    no_convergence,
};

class ModelError : public std::runtime_error {
  public:
    ModelError(ModelErrorKind kind, const std::string &what, int line = 0);
    ModelErrorKind kind() const noexcept { return kind_; }
    /// 1-based source line, 0 when not tied to a line.
    int line() const noexcept { return line_; }

  private:
    ModelErrorKind kind_;
    int line_;
};

/// Dense N_ab^c table over a fixed charge count.
class FusionTable {
  public:
    FusionTable() = default;
    explicit FusionTable(std::size_t charge_count);

    std::size_t size() const noexcept { return n_; }
    int operator()(ChargeId a, ChargeId b, ChargeId c) const { return data_[index(a, b, c)]; }
    void set(ChargeId a, ChargeId b, ChargeId c, int mult) { data_[index(a, b, c)] = mult; }

    /// Charges c with N_ab^c > 0, in id order.
    std::vector<ChargeId> outcomes(ChargeId a, ChargeId b) const;

    bool operator==(const FusionTable &) const = default;

  private:
    std::size_t index(ChargeId a, ChargeId b, ChargeId c) const { return (std::size_t(a) * n_ + b) * n_ + c; }
    std::size_t n_ = 0;
    std::vector<int> data_;
};

/// Quantum dimensions indexed by charge id.
std::vector<double> solve_qdims(const FusionTable &fusion);

/// Throws ModelError(associativity) naming the first offending quadruple.
void check_associativity(const FusionTable &fusion);

/// Immutable after construction; shared between states through shared_ptr.
class AnyonModel {
  public:
    /// Validates the fusion ring and solves the quantum dimensions.
    AnyonModel(std::string name, std::vector<Charge> charges, FusionTable fusion,
               std::vector<ChargeId> duals = {});

    const std::string &name() const noexcept { return name_; }
    const std::vector<Charge> &charges() const noexcept { return charges_; }
    std::size_t size() const noexcept { return charges_.size(); }
    const FusionTable &fusion() const noexcept { return fusion_; }
    int N(ChargeId a, ChargeId b, ChargeId c) const { return fusion_(a, b, c); }
    double qdim(ChargeId a) const { return qdims_.at(a); }
    const std::vector<double> &qdims() const noexcept { return qdims_; }
    ChargeId dual(ChargeId a) const { return duals_.at(a); }
    const std::string &charge_name(ChargeId a) const { return charges_.at(a).name; }

    /// Throws ModelError(unknown_charge).
    ChargeId charge(std::string_view name) const;

    /// max over a,b of |d_a d_b - sum_c N_ab^c d_c|
    double qdim_residual() const;

    bool operator==(const AnyonModel &other) const;

  private:
    std::string name_;
    std::vector<Charge> charges_;
    FusionTable fusion_;
    std::vector<ChargeId> duals_;
    std::vector<double> qdims_;
};

using ModelPtr = std::shared_ptr<const AnyonModel>;

/// Parses the line-based model format (`model`, `charges`, `fuse`, `dual`).
ModelPtr parse_model(std::string_view text);
ModelPtr load_model(const std::string &path);
std::string render_model(const AnyonModel &model);

/// Embedded `fibonacci` and `ising` specs.
std::string builtin_model_text(std::string_view name);
ModelPtr builtin_model(std::string_view name);

struct FusionPath {
    std::vector<ChargeId> leaves;
    /// e_1 = leaves[0], e_n = total charge.
    std::vector<ChargeId> intermediates;
    /// One entry per vertex (n - 1 of them), 1-based.
    std::vector<int> vertex_mults;

    ChargeId total() const { return intermediates.back(); }
    bool operator==(const FusionPath &) const = default;
};

/// All left-associated fusion trees of `leaves` with the given total charge,
/// ordered lexicographically by (intermediates, vertex_mults).
std::vector<FusionPath> enumerate_paths(const AnyonModel &model, const std::vector<ChargeId> &leaves,
                                        ChargeId total);

std::vector<ChargeId> parse_charge_list(const AnyonModel &model, std::string_view csv);
std::string format_charge_list(const AnyonModel &model, const std::vector<ChargeId> &charges);

} // namespace anyent
