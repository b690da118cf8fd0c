#include "anyent/fibonacci.hpp"

#include "anyent/measures.hpp"
#include "anyent/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace anyent {

namespace {

double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }

/// a * log(b) with the 0 log 0 = 0 convention.
double xlogy(double a, double b) { return a == 0 ? 0.0 : a * std::log(b); }

ChargeId tau_of(const AnyonModel &m) { return m.charge("tau"); }

} // namespace

std::int64_t fibonacci_number(int k) {
    if(k < 0) throw std::invalid_argument("fibonacci_number: negative index");
    std::int64_t a = 0, b = 1;
    for(int i = 0; i < k; ++i) {
        const auto t = a + b;
        a = b;
        b = t;
    }
    return a;
}

ModelPtr fibonacci_model() {
    static const ModelPtr model = builtin_model("fibonacci");
    return model;
}

IsotropicParams IsotropicParams::make(int n, double alpha) {
    if(n < 1 || n > 8) throw std::invalid_argument("isotropic family: n must lie in 1..8");
    IsotropicParams p;
    p.n = n;
    p.alpha = alpha;
    p.fib_prev = fibonacci_number(n - 1);
    p.fib = fibonacci_number(n);
    const auto &model = *fibonacci_model();
    p.d = model.qdim(tau_of(model));
    return p;
}

BasisPtr fibonacci_basis(int n) {
    const auto model = fibonacci_model();
    const std::vector<ChargeId> taus(std::size_t(n), tau_of(*model));
    return make_basis(model, taus, taus);
}

MesDecomposition mes_decomposition(int n) {
    const auto p = IsotropicParams::make(n, 1.0);
    MesDecomposition out;
    out.basis = fibonacci_basis(n);
    const auto &basis = *out.basis;
    const ChargeId one = kVacuum, tau = tau_of(basis.model());

    auto diagonal_vector = [&](ChargeId local, ChargeId total) {
        Vector v = Vector::Zero(basis.sector_dim(total));
        const SectorSlot *slot = basis.find({local, local, total, 1});
        if(!slot) return v;
        for(int i = 0; i < slot->dim_a; ++i) v[slot->offset + i * slot->dim_b + i] = 1.0;
        return Vector(v / std::sqrt(double(slot->dim_a)));
    };
    out.phi1 = diagonal_vector(one, one);
    out.phi2 = diagonal_vector(tau, one);
    out.phi3 = diagonal_vector(tau, tau);

    const double dn = std::pow(p.d, n);
    out.coeff1 = std::sqrt(double(p.fib_prev) / dn);
    out.coeff2 = std::sqrt(p.d * double(p.fib) / dn);
    out.weights[0] = double(p.fib_prev) / dn;
    out.weights[1] = double(p.fib) / (dn * p.d);
    out.weights[2] = out.weights[1];
    return out;
}

AnyonicDensityMatrix build_mes(int n) {
    const auto mes = mes_decomposition(n);
    const Vector v = mes.coeff1 * mes.phi1 + mes.coeff2 * mes.phi2;
    auto blocks = AnyonicDensityMatrix::zero(mes.basis).blocks();
    blocks[kVacuum] = v * v.adjoint();
    return {mes.basis, std::move(blocks)};
}

AnyonicDensityMatrix build_isotropic(int n, double alpha) {
    const auto rho = mix(alpha, build_mes(n), AnyonicDensityMatrix::maximally_mixed(fibonacci_basis(n)));
    const double lo = validate(rho).min_eigenvalue;
    if(lo < -1e-12)
        throw NotPositive("isotropic state with alpha = " + std::to_string(alpha) +
                          " is not positive (min eigenvalue " + std::to_string(lo) + ")");
    return rho.with_tag(IsotropicTag{n, alpha});
}

double isotropic_alpha_min(int n) {
    // rho_alpha = I/D + alpha (M - I/D); the binding eigenvalue is the MES direction.
    const auto mm = AnyonicDensityMatrix::maximally_mixed(fibonacci_basis(n));
    const double floor = mm.block(kVacuum)(0, 0).real();
    const auto mes = build_mes(n);
    const double top = linalg::eigh(mes.block(kVacuum)).values.maxCoeff();
    return -floor / (top - floor);
}

double e_ace_closed(const IsotropicParams &p) {
    const double big_d = std::pow(p.d, 2 * p.n);
    const double dn = std::pow(p.d, p.n);
    const double a = p.alpha;
    const double flat = (1 - a) / big_d;
    const double top = a + flat;
    const double p1 = a * double(p.fib_prev) / dn + flat;
    const double p2 = a * double(p.fib) / (dn * p.d) + flat;
    const double w2 = a * double(p.fib) * p.d / dn + (1 + p.d) * flat;
    return xlogx(top) + (1 + p.d) * xlogx(flat) - xlogx(p1) - xlogy(w2, p2);
}

double k_function(double x, double y) {
    return xlogx(y) + xlogx(1 - y) + std::log(x) - xlogy(1 - y, x - 1);
}

double rains_ree(double fidelity, int k) {
    if(k < 2 || fidelity <= 1.0 / k) return 0.0;
    return k_function(double(k), fidelity);
}

std::vector<ClosedFormBlock> e_ce_closed_blocks(const IsotropicParams &p) {
    const double big_d = std::pow(p.d, 2 * p.n);
    const double dn = std::pow(p.d, p.n);
    struct Spec {
        const char *label;
        std::int64_t k;
        double mes_coeff; // alpha-coefficient on the leading diagonal entry
        double prefactor;
    };
    const Spec specs[] = {
        {"11", p.fib_prev, double(p.fib_prev) / dn, 1.0},
        {"tt1", p.fib, double(p.fib) / (dn * p.d), 1.0},
        {"ttt", p.fib, double(p.fib) / (dn * p.d), p.d},
    };
    auto fidelity = [&](const Spec &s, double alpha) {
        const double lead = alpha * s.mes_coeff + (1 - alpha) / big_d;
        const double trace = alpha * s.mes_coeff + double(s.k * s.k) * (1 - alpha) / big_d;
        return lead / trace;
    };
    std::vector<ClosedFormBlock> out;
    for(const auto &s : specs) {
        ClosedFormBlock b;
        b.label = s.label;
        if(s.k == 0) {
            b.threshold = std::numeric_limits<double>::infinity();
            out.push_back(b);
            continue;
        }
        b.weight = s.prefactor * (p.alpha * s.mes_coeff + double(s.k * s.k) * (1 - p.alpha) / big_d);
        b.ctx.block_dim = int(s.k);
        b.ctx.fidelity = fidelity(s, p.alpha);
        b.ctx.x = double(s.k);
        b.ctx.y = b.ctx.fidelity;
        if(s.k < 2) {
            b.threshold = std::numeric_limits<double>::infinity();
        } else {
            // Fidelity increases with alpha; bisect F(alpha) = 1/k on [0, 1].
            double lo = 0.0, hi = 1.0;
            const double target = 1.0 / double(s.k);
            for(int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
                const double mid = 0.5 * (lo + hi);
                (fidelity(s, mid) > target ? hi : lo) = mid;
            }
            b.threshold = 0.5 * (lo + hi);
        }
        b.value = b.weight * rains_ree(b.ctx.fidelity, b.ctx.block_dim);
        out.push_back(b);
    }
    return out;
}

double e_ce_closed(const IsotropicParams &p) {
    double s = 0;
    for(const auto &b : e_ce_closed_blocks(p)) s += b.value;
    return s;
}

double e_ce_threshold(int n) {
    double t = std::numeric_limits<double>::infinity();
    for(const auto &b : e_ce_closed_blocks(IsotropicParams::make(n, 0.5))) t = std::min(t, b.threshold);
    return t;
}

std::string to_string(SweepMethod m) {
    switch(m) {
    case SweepMethod::closed: return "closed";
    case SweepMethod::generic: return "generic";
    case SweepMethod::fw: return "fw";
    }
    return "?";
}

std::vector<SweepRow> sweep(int n, const std::vector<double> &alphas, SweepMethod method,
                            const FrankWolfeConfig &config) {
    std::vector<SweepRow> rows(alphas.size());
    parallel_for(alphas.size(), [&](std::size_t i) {
        SweepRow r;
        r.alpha = alphas[i];
        r.method = method;
        if(method == SweepMethod::closed) {
            const auto p = IsotropicParams::make(n, alphas[i]);
            r.e_ace = clamp_measure(e_ace_closed(p));
            r.e_ce = clamp_measure(e_ce_closed(p));
            r.e_total = r.e_ace + r.e_ce;
        } else {
            const auto rho = build_isotropic(n, alphas[i]);
            auto cfg = config;
            cfg.seed = config.seed + i;
            r.e_ace = e_ace(rho).value;
            const auto ce = e_ce(rho, MeasureMethod::frank_wolfe, cfg);
            r.e_ce = ce.value;
            r.gap = ce.gap.value_or(0.0);
            if(method == SweepMethod::fw) {
                const auto direct = e_total_direct(rho, cfg).result;
                r.e_total = direct.value;
                r.gap = *r.gap + direct.gap.value_or(0.0);
            } else {
                r.e_total = r.e_ace + r.e_ce;
            }
        }
        rows[i] = r;
    });
    return rows;
}

std::vector<double> linear_grid(double lo, double hi, int steps) {
    if(steps < 1) throw std::invalid_argument("linear_grid: steps must be positive");
    if(steps == 1) return {lo};
    std::vector<double> out(static_cast<std::size_t>(steps));
    for(int i = 0; i < steps; ++i) out[std::size_t(i)] = lo + (hi - lo) * double(i) / double(steps - 1);
    out.back() = hi;
    return out;
}

std::string format_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows, bool bits) {
    const double scale = bits ? 1.0 / std::log(2.0) : 1.0;
    os << kSweepCsvHeader << '\n';
    for(const auto &r : rows) {
        os << format_g12(r.alpha) << ',' << format_g12(r.e_ace * scale) << ',' << format_g12(r.e_ce * scale) << ','
           << format_g12(r.e_total * scale) << ',' << to_string(r.method) << ',';
        if(r.gap) os << format_g12(*r.gap * scale);
        os << '\n';
    }
}

} // namespace anyent
