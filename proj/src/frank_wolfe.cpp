#include "anyent/frank_wolfe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace anyent {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double divided_log(double x, double y) {
    if(std::abs(x - y) <= 1e-9 * std::max(x, y)) return 2.0 / (x + y);
    return (std::log(x) - std::log(y)) / (x - y);
}

Vector random_unit(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vector v(n);
    for(int i = 0; i < n; ++i) v[i] = cplx(g(rng), g(rng));
    return v / v.norm();
}

Vector lowest_vector(const Matrix &h, double &value) {
    const auto e = linalg::eigh(h);
    value = e.values[0];
    return e.vectors.col(0);
}

/// <psi phi| H |psi phi> minimized by alternating eigenvector updates.
double alternating_min(const Matrix &h, int m, int n, Vector &psi, Vector &phi, const FrankWolfeConfig &cfg) {
    double value = kInf;
    for(int it = 0; it < cfg.inner_max_iter; ++it) {
        Matrix hpsi = Matrix::Zero(m, m);
        for(int i = 0; i < m; ++i)
            for(int i2 = 0; i2 < m; ++i2)
                hpsi(i, i2) = phi.dot(h.block(i * n, i2 * n, n, n) * phi); // dot conjugates phi
        double v1 = 0;
        psi = lowest_vector(hpsi, v1);
        Matrix hphi = Matrix::Zero(n, n);
        for(int i = 0; i < m; ++i)
            for(int i2 = 0; i2 < m; ++i2) hphi += std::conj(psi[i]) * psi[i2] * h.block(i * n, i2 * n, n, n);
        double v2 = 0;
        phi = lowest_vector(hphi, v2);
        const bool done = value - v2 <= cfg.inner_tol;
        value = std::min(value, v2);
        if(done) break;
    }
    return value;
}

std::vector<Matrix> axpy(const std::vector<Matrix> &x, double gamma, const std::vector<Matrix> &dir) {
    std::vector<Matrix> out = x;
    for(std::size_t k = 0; k < out.size(); ++k) out[k] += gamma * dir[k];
    return out;
}

double inner(const std::vector<Matrix> &g, const std::vector<Matrix> &x) {
    double s = 0;
    for(std::size_t k = 0; k < g.size(); ++k) s += (g[k].adjoint() * x[k]).trace().real();
    return s;
}

/// Atom of the active set: either the initial state or a product |v><v| in one block.
struct Atom {
    bool initial = false;
    std::size_t block = 0;
    Vector v;
    double weight = 0;
};

std::vector<Matrix> atom_matrix(const Atom &atom, const std::vector<Matrix> &initial) {
    if(atom.initial) return initial;
    std::vector<Matrix> out;
    for(const auto &m : initial) out.push_back(Matrix::Zero(m.rows(), m.cols()));
    out[atom.block] = atom.v * atom.v.adjoint();
    return out;
}

double golden_section(const std::function<double(double)> &f, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0, b = hi;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while(b - a > tol) {
        if(f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    // Convex segment: compare the bracket midpoint against the endpoints.
    const double mid = 0.5 * (a + b);
    double best = mid, fbest = f(mid);
    for(double cand : {0.0, hi}) {
        const double fc = f(cand);
        if(fc < fbest) {
            fbest = fc;
            best = cand;
        }
    }
    return best;
}

} // namespace

Matrix neg_log_derivative(const Matrix &sigma, const Matrix &rho) {
    const auto e = linalg::eigh(sigma);
    const Matrix r = e.vectors.adjoint() * rho * e.vectors;
    Matrix g(r.rows(), r.cols());
    for(Eigen::Index k = 0; k < r.rows(); ++k)
        for(Eigen::Index l = 0; l < r.cols(); ++l) {
            const double x = std::max(e.values[k], linalg::kLogFloor);
            const double y = std::max(e.values[l], linalg::kLogFloor);
            g(k, l) = -r(k, l) * divided_log(x, y);
        }
    return e.vectors * g * e.vectors.adjoint();
}

ProductOracleResult product_oracle(const std::vector<Matrix> &grad, const std::vector<std::pair<int, int>> &factors,
                                   const FrankWolfeConfig &config, std::uint64_t stream) {
    std::mt19937_64 rng(config.seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    ProductOracleResult best;
    best.value = kInf;
    for(std::size_t k = 0; k < grad.size(); ++k) {
        const auto [m, n] = factors[k];
        if(m * n == 0) continue;
        const Matrix h = 0.5 * (grad[k] + grad[k].adjoint());
        if(m == 1 || n == 1) {
            // Every pure state of a 1 x n block is a product.
            double v = 0;
            const Vector w = lowest_vector(h, v);
            if(v < best.value) {
                best.value = v;
                best.block = k;
                best.psi = m == 1 ? Vector::Ones(1) : w;
                best.phi = m == 1 ? w : Vector::Ones(1);
            }
            continue;
        }
        for(int r = 0; r < config.restarts; ++r) {
            Vector psi = random_unit(m, rng);
            Vector phi = random_unit(n, rng);
            const double v = alternating_min(h, m, n, psi, phi, config);
            if(v < best.value) {
                best.value = v;
                best.block = k;
                best.psi = psi;
                best.phi = phi;
            }
        }
    }
    if(!std::isfinite(best.value)) throw std::invalid_argument("product_oracle: no non-empty block");
    return best;
}

FrankWolfeResult minimize_over_separable(const SeparableProblem &problem, const FrankWolfeConfig &config) {
    const auto &factors = problem.factors;
    int total = 0;
    for(auto [m, n] : factors) total += m * n;
    if(total == 0) throw std::invalid_argument("minimize_over_separable: empty problem");
    std::vector<Matrix> initial;
    for(auto [m, n] : factors) initial.push_back(Matrix::Identity(m * n, m * n) / double(total));

    FrankWolfeResult res;
    std::vector<Matrix> x = initial;
    std::vector<Atom> active{{true, 0, {}, 1.0}};
    double fx = problem.objective(x);
    res.converged = false;
    for(int it = 0; it < config.max_iter; ++it) {
        const auto grad = problem.gradient(x);
        const auto lmo = product_oracle(grad, factors, config, std::uint64_t(it));
        const double gx = inner(grad, x);
        const double gap = std::max(0.0, gx - lmo.value);
        if(config.record_trace) {
            res.objective_trace.push_back(fx);
            res.gap_trace.push_back(gap);
        }
        res.gap = gap;
        res.iterations = it;
        if(gap <= config.gap_tol) {
            res.converged = true;
            break;
        }
        Atom fw_atom{false, lmo.block, linalg::kron(lmo.psi, lmo.phi), 0.0};
        const auto s = atom_matrix(fw_atom, initial);
        std::vector<Matrix> dir;
        for(std::size_t k = 0; k < x.size(); ++k) dir.push_back(s[k] - x[k]);
        double max_step = 1.0;
        bool away = false;
        std::size_t away_index = 0;
        if(config.away_steps && active.size() > 1) {
            double worst = -kInf;
            for(std::size_t j = 0; j < active.size(); ++j) {
                const double val = inner(grad, atom_matrix(active[j], initial));
                if(val > worst) {
                    worst = val;
                    away_index = j;
                }
            }
            if(worst - gx > gap) {
                away = true;
                const auto v = atom_matrix(active[away_index], initial);
                for(std::size_t k = 0; k < x.size(); ++k) dir[k] = x[k] - v[k];
                const double w = active[away_index].weight;
                max_step = w / (1.0 - w);
            }
        }
        auto along = [&](double g) {
            const double val = problem.objective(axpy(x, g, dir));
            return std::isnan(val) ? kInf : val;
        };
        const double gamma = golden_section(along, max_step, config.line_search_tol);
        if(gamma <= 0.0) {
            // No decrease along the chosen direction at line-search resolution.
            break;
        }
        x = axpy(x, gamma, dir);
        fx = problem.objective(x);
        if(!away) {
            for(auto &a : active) a.weight *= (1.0 - gamma);
            bool merged = false;
            for(auto &a : active)
                if(!a.initial && a.block == fw_atom.block && std::norm(a.v.dot(fw_atom.v)) > 1.0 - 1e-12) {
                    a.weight += gamma;
                    merged = true;
                    break;
                }
            if(!merged) {
                fw_atom.weight = gamma;
                active.push_back(std::move(fw_atom));
            }
        } else {
            for(auto &a : active) a.weight *= (1.0 + gamma);
            active[away_index].weight -= gamma;
        }
        std::erase_if(active, [](const Atom &a) { return a.weight <= 1e-15; });
        res.iterations = it + 1;
    }
    res.value = fx;
    res.minimizer = std::move(x);
    return res;
}

REEResult ree_frank_wolfe(const ConventionalDensityMatrix &rho, const FrankWolfeConfig &config) {
    REEResult out;
    std::uint64_t stream = 0;
    for(const auto &blk : rho.blocks) {
        if(!blk.factors) throw std::invalid_argument("ree_frank_wolfe: block " + blk.label + " has no tensor factors");
        const auto [m, n] = *blk.factors;
        BlockREE br;
        br.label = blk.label;
        br.weight = blk.matrix.trace().real();
        if(br.weight <= 1e-15 || m == 1 || n == 1) {
            // 1 x n blocks contain only separable states.
            out.blocks.push_back(br);
            continue;
        }
        const Matrix target = blk.matrix / br.weight;
        const double neg_entropy = -linalg::von_neumann(target);
        SeparableProblem prob;
        prob.factors = {{m, n}};
        prob.objective = [&](const std::vector<Matrix> &s) {
            const double cross = linalg::trace_rho_log_sigma(target, s[0]);
            return std::isinf(cross) ? kInf : neg_entropy - cross;
        };
        prob.gradient = [&](const std::vector<Matrix> &s) { return std::vector<Matrix>{neg_log_derivative(s[0], target)}; };
        auto cfg = config;
        cfg.seed = config.seed + 7919 * (++stream);
        const auto res = minimize_over_separable(prob, cfg);
        br.ree = std::max(0.0, res.value);
        br.gap = res.gap;
        br.iterations = res.iterations;
        br.converged = res.converged;
        out.blocks.push_back(br);
    }
    for(const auto &b : out.blocks) {
        out.value += b.weight * b.ree;
        out.gap = std::max(out.gap, b.gap);
        out.iterations = std::max(out.iterations, b.iterations);
        out.converged = out.converged && b.converged;
    }
    return out;
}

} // namespace anyent
