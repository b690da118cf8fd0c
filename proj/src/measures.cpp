#include "anyent/measures.hpp"

#include "anyent/fibonacci.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace anyent {

std::string to_string(MeasureMethod m) {
    switch(m) {
    case MeasureMethod::closed_form: return "closed_form";
    case MeasureMethod::generic: return "generic";
    case MeasureMethod::frank_wolfe: return "frank_wolfe";
    case MeasureMethod::direct: return "direct";
    }
    return "?";
}

double clamp_measure(double v) { return (v < 0 && v >= -1e-10) ? 0.0 : v; }

double entropy(const AnyonicDensityMatrix &rho) {
    const auto &model = rho.model();
    double s = 0;
    for(ChargeId c = 0; c < rho.blocks().size(); ++c)
        if(rho.block(c).size() > 0) s += model.qdim(c) * linalg::von_neumann(rho.block(c));
    return s;
}

double relative_entropy(const AnyonicDensityMatrix &rho, const AnyonicDensityMatrix &sigma) {
    if(!rho.basis().same_shape(sigma.basis())) throw LayoutMismatch("relative_entropy: states live on different layouts");
    const auto &model = rho.model();
    double s = 0;
    for(ChargeId c = 0; c < rho.blocks().size(); ++c) {
        if(rho.block(c).size() == 0) continue;
        const double cross = linalg::trace_rho_log_sigma(rho.block(c), sigma.block(c));
        if(std::isinf(cross)) return std::numeric_limits<double>::infinity();
        s += model.qdim(c) * (-linalg::von_neumann(rho.block(c)) - cross);
    }
    return s;
}

MeasureResult e_ace(const AnyonicDensityMatrix &rho) {
    MeasureResult r;
    r.method = MeasureMethod::generic;
    r.value = clamp_measure(conventional_relative_entropy(map_F(rho), map_F(apply_D(rho))));
    return r;
}

double s_ace(const AnyonicDensityMatrix &rho) { return entropy(apply_D(rho)) - entropy(rho); }

namespace {

IsotropicParams require_tag(const AnyonicDensityMatrix &rho) {
    const auto &tag = rho.isotropic_tag();
    if(!tag) throw ClosedFormUnavailable("closed forms exist only for the Fibonacci isotropic family");
    return IsotropicParams::make(tag->n, tag->alpha);
}

} // namespace

REEResult e_ce_blocks(const AnyonicDensityMatrix &rho, const FrankWolfeConfig &config) {
    return ree_frank_wolfe(map_G(apply_D(rho)), config);
}

MeasureResult e_ce(const AnyonicDensityMatrix &rho, MeasureMethod method, const FrankWolfeConfig &config) {
    MeasureResult r;
    r.method = method;
    switch(method) {
    case MeasureMethod::closed_form: r.value = clamp_measure(e_ce_closed(require_tag(rho))); return r;
    case MeasureMethod::generic:
    case MeasureMethod::frank_wolfe: {
        const auto fw = e_ce_blocks(rho, config);
        r.method = MeasureMethod::frank_wolfe;
        r.value = clamp_measure(fw.value);
        r.gap = fw.gap;
        r.iterations = fw.iterations;
        r.converged = fw.converged;
        return r;
    }
    case MeasureMethod::direct: break;
    }
    throw std::invalid_argument("e_ce: method " + to_string(method) + " not supported");
}

MeasureResult e_total(const AnyonicDensityMatrix &rho, MeasureMethod method, const FrankWolfeConfig &config) {
    if(method == MeasureMethod::direct) return e_total_direct(rho, config).result;
    if(method == MeasureMethod::closed_form) {
        const auto p = require_tag(rho);
        MeasureResult r;
        r.method = method;
        r.value = clamp_measure(e_ace_closed(p) + e_ce_closed(p));
        return r;
    }
    auto r = e_ce(rho, MeasureMethod::frank_wolfe, config);
    r.value = clamp_measure(e_ace(rho).value + r.value);
    return r;
}

DirectResult e_total_direct(const AnyonicDensityMatrix &rho, const FrankWolfeConfig &config) {
    const auto &basis = rho.basis();
    const auto &model = basis.model();
    const auto n = ChargeId(model.size());

    // One variable block per local-charge pair (a, b).
    std::map<std::pair<ChargeId, ChargeId>, std::size_t> index;
    std::vector<std::pair<ChargeId, ChargeId>> labels;
    SeparableProblem prob;
    for(ChargeId c = 0; c < n; ++c)
        for(const auto &slot : basis.slots(c)) {
            const auto key = std::pair{slot.key.a, slot.key.b};
            if(index.count(key)) continue;
            index[key] = labels.size();
            labels.push_back(key);
            prob.factors.emplace_back(slot.dim_a, slot.dim_b);
        }

    auto assemble = [&](const std::vector<Matrix> &s) {
        auto out = AnyonicDensityMatrix::zero(rho.basis_ptr());
        std::vector<Matrix> blocks = out.blocks();
        for(ChargeId c = 0; c < n; ++c)
            for(const auto &slot : basis.slots(c)) {
                const double w = model.qdim(slot.key.a) * model.qdim(slot.key.b);
                blocks[c].block(slot.offset, slot.offset, slot.size(), slot.size()) =
                    s[index.at({slot.key.a, slot.key.b})] / w;
            }
        return AnyonicDensityMatrix(rho.basis_ptr(), std::move(blocks));
    };

    prob.objective = [&](const std::vector<Matrix> &s) { return relative_entropy(rho, assemble(s)); };
    prob.gradient = [&](const std::vector<Matrix> &s) {
        const auto sigma = assemble(s);
        std::vector<Matrix> grad;
        for(auto [m, k] : prob.factors) grad.push_back(Matrix::Zero(m * k, m * k));
        for(ChargeId c = 0; c < n; ++c) {
            if(basis.sector_dim(c) == 0) continue;
            const double dc = model.qdim(c);
            const Matrix gamma = neg_log_derivative(dc * sigma.block(c), dc * rho.block(c));
            for(const auto &slot : basis.slots(c)) {
                const double w = dc / (model.qdim(slot.key.a) * model.qdim(slot.key.b));
                grad[index.at({slot.key.a, slot.key.b})] +=
                    w * gamma.block(slot.offset, slot.offset, slot.size(), slot.size());
            }
        }
        return grad;
    };

    const auto fw = minimize_over_separable(prob, config);
    MeasureResult r;
    r.method = MeasureMethod::direct;
    r.value = clamp_measure(fw.value);
    r.gap = fw.gap;
    r.iterations = fw.iterations;
    r.converged = fw.converged;
    return {r, assemble(fw.minimizer)};
}

} // namespace anyent
