#include "anyent/superops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace anyent {

namespace {

Matrix random_complex(int rows, int cols, std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    Matrix m(rows, cols);
    for(int i = 0; i < rows; ++i)
        for(int j = 0; j < cols; ++j) m(i, j) = cplx(gauss(rng), gauss(rng));
    return m;
}

/// Local operator on one party: out = sum_k (W_k (x) I) rho (W_k (x) I)^dagger
/// (or I (x) W_k for party B), where W_k[a] maps old local charge-a space to
/// the new one.
AnyonicDensityMatrix apply_local_kraus(const AnyonicDensityMatrix &rho, BasisPtr target, Party party,
                                       const std::vector<std::vector<Matrix>> &kraus) {
    const auto &src = rho.basis();
    auto out = AnyonicDensityMatrix::zero(target);
    std::vector<Matrix> blocks = out.blocks();
    auto lift = [&](const SectorSlot &s, const Matrix &w) {
        const auto &la = src.layout_a();
        const auto &lb = src.layout_b();
        if(party == Party::A) return linalg::kron(w, Matrix::Identity(lb.dim(s.key.b), lb.dim(s.key.b)));
        return linalg::kron(Matrix::Identity(la.dim(s.key.a), la.dim(s.key.a)), w);
    };
    for(ChargeId c = 0; c < src.charge_count(); ++c) {
        const auto &old_slots = src.slots(c);
        const auto &new_slots = target->slots(c);
        if(old_slots.size() != new_slots.size()) throw std::logic_error("apply_local_kraus: slot structure differs");
        for(std::size_t r = 0; r < old_slots.size(); ++r)
            for(std::size_t s = 0; s < old_slots.size(); ++s) {
                const auto &ro = old_slots[r], &so = old_slots[s];
                const ChargeId lr = party == Party::A ? ro.key.a : ro.key.b;
                const ChargeId ls = party == Party::A ? so.key.a : so.key.b;
                const Matrix sub = rho.sub_block(ro, so);
                Matrix acc = Matrix::Zero(new_slots[r].size(), new_slots[s].size());
                for(const auto &w : kraus) acc += lift(ro, w[lr]) * sub * lift(so, w[ls]).adjoint();
                blocks[c].block(new_slots[r].offset, new_slots[s].offset, acc.rows(), acc.cols()) = acc;
            }
    }
    return {target, std::move(blocks)};
}

BasisPtr with_internal_dim(const BipartiteBasis &basis, Party party, int internal_dim) {
    PartyLayout a = basis.layout_a(), b = basis.layout_b();
    (party == Party::A ? a : b).internal_dim = internal_dim;
    return std::make_shared<const BipartiteBasis>(basis.model_ptr(), std::move(a), std::move(b));
}

} // namespace

AnyonicDensityMatrix apply_D(const AnyonicDensityMatrix &rho) {
    const auto &basis = rho.basis();
    const auto &model = basis.model();
    const auto n = ChargeId(model.size());
    std::map<std::pair<ChargeId, ChargeId>, Matrix> merged;
    for(ChargeId c = 0; c < n; ++c)
        for(const auto &slot : basis.slots(c)) {
            const auto key = std::pair{slot.key.a, slot.key.b};
            const Matrix term = model.qdim(c) * rho.sub_block(slot, slot);
            auto it = merged.find(key);
            if(it == merged.end())
                merged.emplace(key, term);
            else
                it->second += term;
        }
    auto out = AnyonicDensityMatrix::zero(rho.basis_ptr());
    std::vector<Matrix> blocks = out.blocks();
    for(ChargeId c = 0; c < n; ++c)
        for(const auto &slot : basis.slots(c)) {
            const auto &m = merged.at({slot.key.a, slot.key.b});
            blocks[c].block(slot.offset, slot.offset, slot.size(), slot.size()) =
                m / (model.qdim(slot.key.a) * model.qdim(slot.key.b));
        }
    return {rho.basis_ptr(), std::move(blocks)};
}

double free_state_residual(const AnyonicDensityMatrix &rho) { return rho.max_abs_diff(apply_D(rho)); }

double KrausChannel::normalization_residual(const BipartiteBasis &basis) const {
    const auto &model = basis.model();
    double worst = 0;
    for(ChargeId b = 0; b < basis.charge_count(); ++b) {
        const int db = basis.sector_dim(b);
        if(db == 0) continue;
        Matrix acc = Matrix::Zero(db, db);
        for(const auto &op : ops)
            if(op.from == b && op.K.cols() == db) acc += (model.qdim(op.to) / model.qdim(b)) * op.K.adjoint() * op.K;
        worst = std::max(worst, (acc - Matrix::Identity(db, db)).cwiseAbs().maxCoeff());
    }
    return worst;
}

KrausChannel identity_channel(const BipartiteBasis &basis) {
    KrausChannel ch;
    for(ChargeId c = 0; c < basis.charge_count(); ++c)
        if(basis.sector_dim(c) > 0) ch.ops.push_back({c, c, 0, Matrix::Identity(basis.sector_dim(c), basis.sector_dim(c))});
    return ch;
}

KrausChannel charge_projector_channel(const BipartiteBasis &basis, Party party) {
    KrausChannel ch;
    for(ChargeId c = 0; c < basis.charge_count(); ++c) {
        const int d = basis.sector_dim(c);
        if(d == 0) continue;
        for(ChargeId a = 0; a < basis.charge_count(); ++a) {
            Matrix p = Matrix::Zero(d, d);
            bool any = false;
            for(const auto &slot : basis.slots(c))
                if((party == Party::A ? slot.key.a : slot.key.b) == a) {
                    p.block(slot.offset, slot.offset, slot.size(), slot.size()).setIdentity();
                    any = true;
                }
            if(any) ch.ops.push_back({c, c, int(a), std::move(p)});
        }
    }
    return ch;
}

KrausChannel random_local_channel(const BipartiteBasis &basis, Party party, std::uint64_t seed, int kraus_count) {
    std::mt19937_64 rng(seed);
    const auto &layout = basis.layout(party);
    const auto n = ChargeId(basis.charge_count());
    // local[i][a]: Kraus operator i on the party's charge-a space.
    std::vector<std::vector<Matrix>> local(kraus_count, std::vector<Matrix>(n));
    for(ChargeId a = 0; a < n; ++a) {
        const int d = layout.dim(a);
        Matrix gram = Matrix::Zero(d, d);
        for(int i = 0; i < kraus_count; ++i) {
            local[i][a] = random_complex(d, d, rng);
            gram += local[i][a].adjoint() * local[i][a];
        }
        const Matrix fix = linalg::inverse_sqrt_psd(gram);
        for(int i = 0; i < kraus_count; ++i) local[i][a] = local[i][a] * fix;
    }
    KrausChannel ch;
    for(ChargeId c = 0; c < n; ++c) {
        const int d = basis.sector_dim(c);
        if(d == 0) continue;
        for(int i = 0; i < kraus_count; ++i) {
            Matrix k = Matrix::Zero(d, d);
            for(const auto &slot : basis.slots(c)) {
                const Matrix blk =
                    party == Party::A
                        ? linalg::kron(local[i][slot.key.a], Matrix::Identity(slot.dim_b, slot.dim_b))
                        : linalg::kron(Matrix::Identity(slot.dim_a, slot.dim_a), local[i][slot.key.b]);
                k.block(slot.offset, slot.offset, slot.size(), slot.size()) = blk;
            }
            ch.ops.push_back({c, c, i, std::move(k)});
        }
    }
    return ch;
}

KrausChannel random_global_channel(const BipartiteBasis &basis, std::uint64_t seed, int kraus_count) {
    std::mt19937_64 rng(seed);
    const auto &model = basis.model();
    KrausChannel ch;
    for(ChargeId from = 0; from < basis.charge_count(); ++from) {
        const int db = basis.sector_dim(from);
        if(db == 0) continue;
        std::vector<KrausOp> raw;
        Matrix gram = Matrix::Zero(db, db);
        for(ChargeId to = 0; to < basis.charge_count(); ++to) {
            const int da = basis.sector_dim(to);
            if(da == 0) continue;
            for(int i = 0; i < kraus_count; ++i) {
                Matrix k = random_complex(da, db, rng);
                gram += (model.qdim(to) / model.qdim(from)) * k.adjoint() * k;
                raw.push_back({to, from, i, std::move(k)});
            }
        }
        const Matrix fix = linalg::inverse_sqrt_psd(gram);
        for(auto &op : raw) {
            op.K = op.K * fix;
            ch.ops.push_back(std::move(op));
        }
    }
    return ch;
}

AnyonicDensityMatrix apply_channel(const AnyonicDensityMatrix &rho, const KrausChannel &ch, double norm_tol) {
    const auto &basis = rho.basis();
    for(const auto &op : ch.ops) {
        if(op.to >= basis.charge_count() || op.from >= basis.charge_count() ||
           op.K.rows() != basis.sector_dim(op.to) || op.K.cols() != basis.sector_dim(op.from))
            throw ChannelError(ChannelError::Kind::shape_mismatch,
                               "Kraus operator " + std::to_string(op.index) + " does not fit the sector dimensions");
    }
    if(const double r = ch.normalization_residual(basis); r > norm_tol)
        throw ChannelError(ChannelError::Kind::not_normalized,
                           "Kraus normalization residual " + std::to_string(r) + " exceeds tolerance");
    auto out = AnyonicDensityMatrix::zero(rho.basis_ptr());
    std::vector<Matrix> blocks = out.blocks();
    for(const auto &op : ch.ops) blocks[op.to] += op.K * rho.block(op.from) * op.K.adjoint();
    return {rho.basis_ptr(), std::move(blocks)};
}

AnyonicDensityMatrix project_local_charge(const AnyonicDensityMatrix &rho, Party party, ChargeId a) {
    const auto &basis = rho.basis();
    auto out = AnyonicDensityMatrix::zero(rho.basis_ptr());
    std::vector<Matrix> blocks = out.blocks();
    for(ChargeId c = 0; c < basis.charge_count(); ++c)
        for(const auto &r : basis.slots(c))
            for(const auto &s : basis.slots(c)) {
                const ChargeId lr = party == Party::A ? r.key.a : r.key.b;
                const ChargeId ls = party == Party::A ? s.key.a : s.key.b;
                if(lr == a && ls == a) blocks[c].block(r.offset, s.offset, r.size(), s.size()) = rho.sub_block(r, s);
            }
    return {rho.basis_ptr(), std::move(blocks)};
}

std::vector<MeasurementOutcome> measure_local_charge(const AnyonicDensityMatrix &rho, Party party) {
    std::vector<MeasurementOutcome> out;
    for(ChargeId a = 0; a < rho.basis().charge_count(); ++a) {
        if(rho.basis().layout(party).dim(a) == 0) continue;
        auto branch = project_local_charge(rho, party, a);
        const double p = quantum_trace(branch);
        if(p < 1e-14) continue;
        out.push_back({a, p, branch.scaled(1.0 / p)});
    }
    return out;
}

AnyonicDensityMatrix adjoin_vacuum_ancilla(const AnyonicDensityMatrix &rho, Party party, int dim) {
    if(dim < 1) throw std::invalid_argument("adjoin_vacuum_ancilla: dim must be positive");
    if(dim == 1) return rho;
    const auto &layout = rho.basis().layout(party);
    auto target = with_internal_dim(rho.basis(), party, layout.internal_dim * dim);
    // Isometry e_i -> e_{i * dim}: the new ancilla index is the fastest local index.
    std::vector<Matrix> iso(rho.basis().charge_count());
    for(ChargeId a = 0; a < iso.size(); ++a) {
        const int d = layout.dim(a);
        iso[a] = Matrix::Zero(d * dim, d);
        for(int i = 0; i < d; ++i) iso[a](i * dim, i) = 1.0;
    }
    return apply_local_kraus(rho, target, party, {iso});
}

AnyonicDensityMatrix discard_vacuum_ancilla(const AnyonicDensityMatrix &rho, Party party) {
    const auto &layout = rho.basis().layout(party);
    const int k = layout.internal_dim;
    if(k == 1) return rho;
    auto target = with_internal_dim(rho.basis(), party, 1);
    std::vector<std::vector<Matrix>> kraus(k, std::vector<Matrix>(rho.basis().charge_count()));
    for(int anc = 0; anc < k; ++anc)
        for(ChargeId a = 0; a < rho.basis().charge_count(); ++a) {
            const int paths = layout.paths(a);
            Matrix w = Matrix::Zero(paths, paths * k);
            for(int p = 0; p < paths; ++p) w(p, p * k + anc) = 1.0;
            kraus[anc][a] = std::move(w);
        }
    return apply_local_kraus(rho, target, party, kraus);
}

AnyonicDensityMatrix trace_out_party(const AnyonicDensityMatrix &rho, Party traced) {
    const Party keep = traced == Party::A ? Party::B : Party::A;
    const auto reduced = partial_quantum_trace(rho, keep);
    const auto model = rho.basis().model_ptr();
    auto vac = PartyLayout::make(*model, {kVacuum});
    auto basis = keep == Party::A ? std::make_shared<const BipartiteBasis>(model, reduced.layout(), vac)
                                  : std::make_shared<const BipartiteBasis>(model, vac, reduced.layout());
    std::vector<Matrix> blocks;
    for(ChargeId c = 0; c < basis->charge_count(); ++c) blocks.push_back(reduced.block(c));
    return {basis, std::move(blocks)};
}

double ConventionalDensityMatrix::trace() const {
    double t = 0;
    for(const auto &b : blocks) t += b.matrix.trace().real();
    return t;
}

double ConventionalDensityMatrix::min_eigenvalue() const {
    double lo = std::numeric_limits<double>::infinity();
    for(const auto &b : blocks)
        if(b.matrix.size() > 0) lo = std::min(lo, linalg::eigh(b.matrix).values.minCoeff());
    return lo;
}

ConventionalDensityMatrix map_F(const AnyonicDensityMatrix &rho) {
    ConventionalDensityMatrix out;
    const auto &model = rho.model();
    for(ChargeId c = 0; c < rho.blocks().size(); ++c) {
        if(rho.block(c).size() == 0) continue;
        out.blocks.push_back({"c=" + model.charge_name(c), model.qdim(c) * rho.block(c), std::nullopt});
    }
    return out;
}

ConventionalDensityMatrix map_G(const AnyonicDensityMatrix &sigma, double tol) {
    if(const double r = free_state_residual(sigma); r > tol)
        throw ChannelError(ChannelError::Kind::not_free,
                           "map_G requires D(sigma) = sigma (residual " + std::to_string(r) + ")");
    const auto &basis = sigma.basis();
    const auto &model = basis.model();
    const auto n = ChargeId(model.size());
    ConventionalDensityMatrix out;
    for(ChargeId a = 0; a < n; ++a)
        for(ChargeId b = 0; b < n; ++b) {
            const SectorSlot *slot = nullptr;
            for(ChargeId c = 0; c < n && !slot; ++c) slot = basis.find({a, b, c, 1});
            if(!slot) continue;
            out.blocks.push_back({model.charge_name(a) + "," + model.charge_name(b),
                                  model.qdim(a) * model.qdim(b) * sigma.sub_block(*slot, *slot),
                                  std::pair{slot->dim_a, slot->dim_b}});
        }
    return out;
}

double conventional_relative_entropy(const ConventionalDensityMatrix &rho, const ConventionalDensityMatrix &sigma) {
    if(rho.blocks.size() != sigma.blocks.size()) throw std::invalid_argument("relative entropy: block count mismatch");
    double s = 0;
    for(std::size_t k = 0; k < rho.blocks.size(); ++k) {
        const auto &r = rho.blocks[k].matrix;
        const auto &q = sigma.blocks[k].matrix;
        if(r.rows() != q.rows()) throw std::invalid_argument("relative entropy: block shape mismatch");
        const double cross = linalg::trace_rho_log_sigma(r, q);
        if(std::isinf(cross)) return std::numeric_limits<double>::infinity();
        s += -linalg::von_neumann(r) - cross;
    }
    return s;
}

double conventional_entropy(const ConventionalDensityMatrix &rho) {
    double s = 0;
    for(const auto &b : rho.blocks) s += linalg::von_neumann(b.matrix);
    return s;
}

} // namespace anyent
