#include "anyent/state.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace anyent {

PartyLayout PartyLayout::make(const AnyonModel &model, std::vector<ChargeId> anyons, int internal_dim) {
    if(anyons.empty()) throw std::invalid_argument("party layout needs at least one anyon");
    if(internal_dim < 1) throw std::invalid_argument("internal dimension must be positive");
    PartyLayout layout;
    layout.anyons = std::move(anyons);
    layout.internal_dim = internal_dim;
    layout.basis.resize(model.size());
    for(ChargeId a = 0; a < model.size(); ++a) layout.basis[a] = enumerate_paths(model, layout.anyons, a);
    return layout;
}

double PartyLayout::weighted_dim(const AnyonModel &model) const {
    double s = 0;
    for(ChargeId a = 0; a < model.size(); ++a) s += model.qdim(a) * dim(a);
    return s;
}

BipartiteBasis::BipartiteBasis(ModelPtr model, PartyLayout a, PartyLayout b)
    : model_(std::move(model)), a_(std::move(a)), b_(std::move(b)) {
    const auto n = ChargeId(model_->size());
    slots_.assign(n, {});
    dims_.assign(n, 0);
    for(ChargeId c = 0; c < n; ++c) {
        int offset = 0;
        for(ChargeId ca = 0; ca < n; ++ca)
            for(ChargeId cb = 0; cb < n; ++cb) {
                const int da = a_.dim(ca), db = b_.dim(cb);
                if(da == 0 || db == 0) continue;
                for(int mu = 1; mu <= model_->N(ca, cb, c); ++mu) {
                    slots_[c].push_back({{ca, cb, c, mu}, offset, da, db});
                    offset += da * db;
                }
            }
        dims_[c] = offset;
    }
}

const SectorSlot *BipartiteBasis::find(const SectorKey &key) const {
    if(key.c >= slots_.size()) return nullptr;
    for(const auto &s : slots_[key.c])
        if(s.key == key) return &s;
    return nullptr;
}

double BipartiteBasis::weighted_dim() const {
    double s = 0;
    for(ChargeId c = 0; c < dims_.size(); ++c) s += model_->qdim(c) * dims_[c];
    return s;
}

bool BipartiteBasis::same_shape(const BipartiteBasis &o) const {
    return (model_ == o.model_ || *model_ == *o.model_) && a_ == o.a_ && b_ == o.b_;
}

BasisPtr make_basis(ModelPtr model, const std::vector<ChargeId> &anyons_a, const std::vector<ChargeId> &anyons_b) {
    auto la = PartyLayout::make(*model, anyons_a);
    auto lb = PartyLayout::make(*model, anyons_b);
    return std::make_shared<const BipartiteBasis>(std::move(model), std::move(la), std::move(lb));
}

AnyonicDensityMatrix::AnyonicDensityMatrix(BasisPtr basis, std::vector<Matrix> blocks)
    : basis_(std::move(basis)), blocks_(std::move(blocks)) {
    if(blocks_.size() != basis_->charge_count()) throw std::invalid_argument("one block per global charge expected");
    for(ChargeId c = 0; c < blocks_.size(); ++c) {
        const int d = basis_->sector_dim(c);
        if(blocks_[c].rows() != d || blocks_[c].cols() != d)
            throw std::invalid_argument("block for charge " + basis_->model().charge_name(c) + " has shape " +
                                        std::to_string(blocks_[c].rows()) + "x" + std::to_string(blocks_[c].cols()) +
                                        ", expected " + std::to_string(d));
    }
}

AnyonicDensityMatrix AnyonicDensityMatrix::zero(BasisPtr basis) {
    std::vector<Matrix> blocks;
    for(ChargeId c = 0; c < basis->charge_count(); ++c)
        blocks.push_back(Matrix::Zero(basis->sector_dim(c), basis->sector_dim(c)));
    return {std::move(basis), std::move(blocks)};
}

AnyonicDensityMatrix AnyonicDensityMatrix::maximally_mixed(BasisPtr basis) {
    const double w = basis->weighted_dim();
    std::vector<Matrix> blocks;
    for(ChargeId c = 0; c < basis->charge_count(); ++c)
        blocks.push_back(Matrix::Identity(basis->sector_dim(c), basis->sector_dim(c)) / w);
    return {std::move(basis), std::move(blocks)};
}

Matrix AnyonicDensityMatrix::sub_block(const SectorSlot &row, const SectorSlot &col) const {
    if(row.key.c != col.key.c) throw std::invalid_argument("sub_block: slots from different sectors");
    return blocks_.at(row.key.c).block(row.offset, col.offset, row.size(), col.size());
}

AnyonicDensityMatrix AnyonicDensityMatrix::with_tag(std::optional<IsotropicTag> tag) const {
    auto out = *this;
    out.tag_ = tag;
    return out;
}

AnyonicDensityMatrix AnyonicDensityMatrix::scaled(double s) const {
    auto blocks = blocks_;
    for(auto &b : blocks) b *= s;
    return {basis_, std::move(blocks)};
}

double AnyonicDensityMatrix::max_abs_diff(const AnyonicDensityMatrix &o) const {
    if(!basis_->same_shape(o.basis())) throw std::invalid_argument("max_abs_diff: layout mismatch");
    double m = 0;
    for(std::size_t c = 0; c < blocks_.size(); ++c)
        if(blocks_[c].size() > 0) m = std::max(m, (blocks_[c] - o.blocks_[c]).cwiseAbs().maxCoeff());
    return m;
}

AnyonicDensityMatrix mix(double lambda, const AnyonicDensityMatrix &x, const AnyonicDensityMatrix &y) {
    if(!x.basis().same_shape(y.basis())) throw std::invalid_argument("mix: layout mismatch");
    std::vector<Matrix> blocks;
    for(std::size_t c = 0; c < x.blocks().size(); ++c) blocks.push_back(lambda * x.blocks()[c] + (1 - lambda) * y.blocks()[c]);
    return {x.basis_ptr(), std::move(blocks)};
}

SingleSystemDensityMatrix::SingleSystemDensityMatrix(ModelPtr model, PartyLayout layout, std::vector<Matrix> blocks)
    : model_(std::move(model)), layout_(std::move(layout)), blocks_(std::move(blocks)) {
    if(blocks_.size() != model_->size()) throw std::invalid_argument("one block per local charge expected");
    for(ChargeId a = 0; a < blocks_.size(); ++a)
        if(blocks_[a].rows() != layout_.dim(a) || blocks_[a].cols() != layout_.dim(a))
            throw std::invalid_argument("local block shape mismatch for charge " + model_->charge_name(a));
}

SingleSystemDensityMatrix SingleSystemDensityMatrix::maximally_mixed(ModelPtr model, PartyLayout layout) {
    const double w = layout.weighted_dim(*model);
    std::vector<Matrix> blocks;
    for(ChargeId a = 0; a < model->size(); ++a) blocks.push_back(Matrix::Identity(layout.dim(a), layout.dim(a)) / w);
    return {std::move(model), std::move(layout), std::move(blocks)};
}

SingleSystemDensityMatrix SingleSystemDensityMatrix::pure(ModelPtr model, PartyLayout layout, ChargeId a,
                                                          const Vector &psi) {
    if(psi.size() != layout.dim(a) || psi.norm() == 0.0) throw std::invalid_argument("pure: bad vector");
    std::vector<Matrix> blocks;
    for(ChargeId x = 0; x < model->size(); ++x) blocks.push_back(Matrix::Zero(layout.dim(x), layout.dim(x)));
    const Vector v = psi / psi.norm();
    blocks[a] = v * v.adjoint() / model->qdim(a);
    return {std::move(model), std::move(layout), std::move(blocks)};
}

double SingleSystemDensityMatrix::max_abs_diff(const SingleSystemDensityMatrix &o) const {
    double m = 0;
    for(std::size_t a = 0; a < blocks_.size(); ++a)
        if(blocks_[a].size() > 0) m = std::max(m, (blocks_[a] - o.blocks_.at(a)).cwiseAbs().maxCoeff());
    return m;
}

double quantum_trace(const AnyonicDensityMatrix &rho) {
    double t = 0;
    for(ChargeId c = 0; c < rho.blocks().size(); ++c) t += rho.model().qdim(c) * rho.block(c).trace().real();
    return t;
}

double quantum_trace(const SingleSystemDensityMatrix &rho) {
    double t = 0;
    for(ChargeId a = 0; a < rho.blocks().size(); ++a) t += rho.model().qdim(a) * rho.block(a).trace().real();
    return t;
}

SingleSystemDensityMatrix partial_quantum_trace(const AnyonicDensityMatrix &rho, Party keep) {
    const auto &basis = rho.basis();
    const auto &model = basis.model();
    const auto &kept = basis.layout(keep);
    std::vector<Matrix> out;
    for(ChargeId a = 0; a < model.size(); ++a) out.push_back(Matrix::Zero(kept.dim(a), kept.dim(a)));
    for(ChargeId c = 0; c < basis.charge_count(); ++c)
        for(const auto &slot : basis.slots(c)) {
            const ChargeId k = keep == Party::A ? slot.key.a : slot.key.b;
            const double coeff = model.qdim(c) / model.qdim(k);
            const Matrix blk = rho.sub_block(slot, slot);
            auto &dst = out[k];
            // blk is indexed ((i, j), (k, l)) with j, l fastest.
            for(int i = 0; i < slot.dim_a; ++i)
                for(int i2 = 0; i2 < slot.dim_a; ++i2)
                    for(int j = 0; j < slot.dim_b; ++j)
                        for(int j2 = 0; j2 < slot.dim_b; ++j2) {
                            if(keep == Party::A && j == j2)
                                dst(i, i2) += coeff * blk(i * slot.dim_b + j, i2 * slot.dim_b + j2);
                            else if(keep == Party::B && i == i2)
                                dst(j, j2) += coeff * blk(i * slot.dim_b + j, i2 * slot.dim_b + j2);
                        }
        }
    return {basis.model_ptr(), kept, std::move(out)};
}

AnyonicDensityMatrix product_state(const SingleSystemDensityMatrix &rho_a, const SingleSystemDensityMatrix &rho_b) {
    if(!(*rho_a.model_ptr() == *rho_b.model_ptr())) throw std::invalid_argument("product_state: model mismatch");
    auto basis = std::make_shared<const BipartiteBasis>(rho_a.model_ptr(), rho_a.layout(), rho_b.layout());
    auto out = AnyonicDensityMatrix::zero(basis);
    std::vector<Matrix> blocks = out.blocks();
    for(ChargeId c = 0; c < basis->charge_count(); ++c)
        for(const auto &slot : basis->slots(c))
            blocks[c].block(slot.offset, slot.offset, slot.size(), slot.size()) =
                linalg::kron(rho_a.block(slot.key.a), rho_b.block(slot.key.b));
    return {basis, std::move(blocks)};
}

namespace {

template<typename Blocks> Diagnostics diagnose(const Blocks &blocks, const std::vector<double> &weights) {
    Diagnostics d;
    double qt = 0;
    bool any = false;
    for(std::size_t c = 0; c < blocks.size(); ++c) {
        const auto &m = blocks[c];
        if(m.size() == 0) continue;
        d.hermiticity = std::max(d.hermiticity, linalg::hermiticity_residual(m));
        const double lo = linalg::eigh(m).values.minCoeff();
        d.min_eigenvalue = any ? std::min(d.min_eigenvalue, lo) : lo;
        any = true;
        qt += weights[c] * m.trace().real();
    }
    d.qtrace_deviation = std::abs(qt - 1.0);
    return d;
}

} // namespace

Diagnostics validate(const AnyonicDensityMatrix &rho) { return diagnose(rho.blocks(), rho.model().qdims()); }

Diagnostics validate(const SingleSystemDensityMatrix &rho) { return diagnose(rho.blocks(), rho.model().qdims()); }

Diagnostics validate_dense(const BipartiteBasis &basis, const Matrix &dense) {
    std::vector<Matrix> blocks;
    std::vector<int> starts;
    int offset = 0;
    for(ChargeId c = 0; c < basis.charge_count(); ++c) {
        starts.push_back(offset);
        offset += basis.sector_dim(c);
    }
    if(dense.rows() != offset || dense.cols() != offset) throw std::invalid_argument("validate_dense: shape mismatch");
    double cross = 0;
    for(ChargeId c = 0; c < basis.charge_count(); ++c) {
        const int d = basis.sector_dim(c);
        blocks.push_back(dense.block(starts[c], starts[c], d, d));
        for(ChargeId c2 = 0; c2 < basis.charge_count(); ++c2) {
            const int d2 = basis.sector_dim(c2);
            if(c2 == c || d == 0 || d2 == 0) continue;
            cross = std::max(cross, dense.block(starts[c], starts[c2], d, d2).cwiseAbs().maxCoeff());
        }
    }
    auto diag = diagnose(blocks, basis.model().qdims());
    diag.superselection = cross;
    diag.hermiticity = std::max(diag.hermiticity, linalg::hermiticity_residual(dense));
    return diag;
}

AnyonicDensityMatrix from_dense(BasisPtr basis, const Matrix &dense, double tol) {
    const auto diag = validate_dense(*basis, dense);
    if(diag.superselection > tol)
        throw std::invalid_argument("operator mixes global charge sectors (max cross element " +
                                    std::to_string(diag.superselection) + ")");
    std::vector<Matrix> blocks;
    int offset = 0;
    for(ChargeId c = 0; c < basis->charge_count(); ++c) {
        const int d = basis->sector_dim(c);
        blocks.push_back(dense.block(offset, offset, d, d));
        offset += d;
    }
    return {std::move(basis), std::move(blocks)};
}

Matrix to_dense(const AnyonicDensityMatrix &rho) {
    int total = 0;
    for(const auto &b : rho.blocks()) total += int(b.rows());
    Matrix out = Matrix::Zero(total, total);
    int offset = 0;
    for(const auto &b : rho.blocks()) {
        out.block(offset, offset, b.rows(), b.cols()) = b;
        offset += int(b.rows());
    }
    return out;
}

namespace {

Matrix gaussian_gram(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    Matrix g(n, n);
    for(int i = 0; i < n; ++i)
        for(int j = 0; j < n; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
    return g * g.adjoint();
}

} // namespace

AnyonicDensityMatrix random_state(BasisPtr basis, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Matrix> blocks;
    for(ChargeId c = 0; c < basis->charge_count(); ++c) blocks.push_back(gaussian_gram(basis->sector_dim(c), rng));
    AnyonicDensityMatrix raw(basis, std::move(blocks));
    return raw.scaled(1.0 / quantum_trace(raw));
}

SingleSystemDensityMatrix random_local_state(ModelPtr model, const PartyLayout &layout, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Matrix> blocks;
    double qt = 0;
    for(ChargeId a = 0; a < model->size(); ++a) {
        blocks.push_back(gaussian_gram(layout.dim(a), rng));
        qt += model->qdim(a) * blocks.back().trace().real();
    }
    for(auto &b : blocks) b /= qt;
    return {std::move(model), layout, std::move(blocks)};
}

} // namespace anyent
