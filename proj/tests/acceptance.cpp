#include "anyent/fibonacci.hpp"
#include "anyent/measures.hpp"
#include "anyent/parallel.hpp"
#include "anyent/superops.hpp"
#include "anyent/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

using namespace anyent;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

BasisPtr layout(const char *model, const char *a, const char *b) {
    const auto m = builtin_model(model);
    return make_basis(m, parse_charge_list(*m, a), parse_charge_list(*m, b));
}

Outcome suite_outcome(const std::vector<SuiteReport> &reports, double tol) {
    double worst = 0;
    int samples = 0;
    bool ok = true;
    for(const auto &r : reports)
        for(const auto &c : r.checks) {
            worst = std::max(worst, c.max_deviation);
            samples += c.samples;
            ok = ok && c.pass && c.max_deviation <= tol;
        }
    return {ok, fmt("max deviation %.3g (tol %.0e), %.0f samples", worst, tol, samples)};
}

Outcome criterion1() {
    const BasisPtr bases[2] = {layout("fibonacci", "tau,tau", "tau,tau"), layout("ising", "sigma,sigma", "sigma,sigma")};
    double worst = 0;
    for(int t = 0; t < 200; ++t) {
        const auto rho = random_state(bases[t % 2], std::uint64_t(100 + t));
        const double dev = std::abs(e_ace(rho).value - s_ace(rho));
        worst = std::isnan(dev) ? INFINITY : std::max(worst, dev);
    }
    return {worst <= 1e-9, fmt("max |E_ACE - S_ACE| %.3g (tol 1e-9), 200 states", worst)};
}

Outcome criterion2() {
    double worst = 0;
    for(int t = 0; t < 100; ++t) {
        const auto basis = verify_layout(std::size_t(t) % verify_layout_count());
        const auto rho = random_state(basis, std::uint64_t(500 + t));
        const auto sigma = random_separable(basis, std::uint64_t(900 + t));
        const double dev =
            std::abs(relative_entropy(rho, sigma) - e_ace(rho).value - relative_entropy(apply_D(rho), sigma));
        worst = std::isnan(dev) ? INFINITY : std::max(worst, dev);
    }
    return {worst <= 1e-8, fmt("max residual %.3g (tol 1e-8), 100 pairs", worst)};
}

Outcome criterion3() {
    const int n = 3;
    const auto alphas = linear_grid(0, 1, 101);
    const auto rows = sweep(n, alphas, SweepMethod::closed);
    const double threshold = e_ce_threshold(n);
    std::vector<double> generic(alphas.size());
    parallel_for(alphas.size(), [&](std::size_t k) { generic[k] = e_ace(build_isotropic(n, alphas[k])).value; });

    bool a = rows[0].e_ace <= 1e-12, b = true, c = true;
    double worst_d = 0;
    for(std::size_t k = 0; k < rows.size(); ++k) {
        const auto &r = rows[k];
        if(r.alpha >= 0.01 - 1e-12) a = a && r.e_ace > 0;
        if(r.alpha < threshold) b = b && r.e_ce == 0;
        if(r.alpha > threshold) b = b && r.e_ce > 0;
        c = c && r.e_total == r.e_ace + r.e_ce;
        worst_d = std::max(worst_d, std::abs(r.e_ace - generic[k]));
    }
    const bool d = worst_d <= 1e-9;
    std::string detail = std::string("(a) ") + (a ? "ok" : "FAIL") + " (b) " + (b ? "ok" : "FAIL") +
                         fmt(" threshold %.12g", threshold) + " (c) " + (c ? "ok" : "FAIL") +
                         fmt(" (d) max closed-generic %.3g (tol 1e-9)", worst_d);
    return {a && b && c && d, detail};
}

Outcome criterion4() {
    const double alphas[3] = {0.6, 0.8, 1.0};
    REEResult numeric[3];
    parallel_for(3, [&](std::size_t k) { numeric[k] = e_ce_blocks(build_isotropic(3, alphas[k])); });
    double worst_value = 0, worst_gap = 0;
    bool ok = true;
    for(int k = 0; k < 3; ++k) {
        double closed_11 = 0, closed_tt = 0;
        for(const auto &b : e_ce_closed_blocks(IsotropicParams::make(3, alphas[k]))) (b.label == "11" ? closed_11 : closed_tt) += b.value;
        for(const auto &b : numeric[k].blocks) {
            double expect = 0;
            if(b.label == "1,1")
                expect = closed_11;
            else if(b.label == "tau,tau")
                expect = closed_tt;
            const double dev = std::abs(b.weight * b.ree - expect);
            worst_value = std::max(worst_value, dev);
            worst_gap = std::max(worst_gap, b.gap);
            ok = ok && dev <= 1e-3 && b.gap <= 1e-4;
        }
    }
    return {ok, fmt("max |FW - closed| per block %.3g (tol 1e-3), max gap %.3g (tol 1e-4)", worst_value, worst_gap)};
}

Outcome criterion5() {
    VerifyConfig cfg;
    cfg.trials = 200;
    return suite_outcome({run_suite("prop2", cfg)}, 1e-9);
}

Outcome criterion6() {
    VerifyConfig cfg;
    cfg.trials = 200;
    return suite_outcome({run_suite("prop3", cfg), run_suite("thm4", cfg)}, 1e-9);
}

Outcome criterion7() {
    VerifyConfig cfg;
    cfg.trials = 100;
    return suite_outcome({run_suite("prop1", cfg)}, 1e-10);
}

Outcome criterion8() {
    const auto fib = builtin_model("fibonacci");
    const auto ising = builtin_model("ising");
    const auto tau = fib->charge("tau");
    const double dtau = std::abs(fib->qdim(tau) - (1 + std::sqrt(5.0)) / 2);
    const double residual = std::max(fib->qdim_residual(), ising->qdim_residual());
    bool paths = true;
    for(int n = 2; n <= 10; ++n) {
        const std::vector<ChargeId> leaves(std::size_t(n), tau);
        paths = paths && std::int64_t(enumerate_paths(*fib, leaves, kVacuum).size()) == fibonacci_number(n - 1) &&
                std::int64_t(enumerate_paths(*fib, leaves, tau).size()) == fibonacci_number(n);
    }
    double idem = 0, qtrace = 0;
    for(std::size_t k = 0; k < verify_layout_count(); ++k)
        for(std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto rho = random_state(verify_layout(k), seed);
            const auto once = apply_D(rho);
            idem = std::max(idem, apply_D(once).max_abs_diff(once));
            qtrace = std::max(qtrace, std::abs(quantum_trace(once) - quantum_trace(rho)));
        }
    const bool ok = dtau <= 1e-12 && residual <= 1e-10 && paths && idem <= 1e-12 && qtrace <= 1e-12;
    return {ok, fmt("|d_tau - golden| %.3g, fusion residual %.3g, ", dtau, residual) + (paths ? "paths ok" : "paths FAIL") +
                    fmt(", D idempotence %.3g, trace drift %.3g", idem, qtrace)};
}

} // namespace

int main() {
    const std::function<Outcome()> criteria[] = {criterion1, criterion2, criterion3, criterion4,
                                                 criterion5, criterion6, criterion7, criterion8};
    const double limits[] = {30, 30, 10, 60, 0, 0, 0, 0};
    int failures = 0;
    for(int k = 0; k < 8; ++k) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k]();
        } catch(const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::string timing = fmt("%.2fs", secs);
        if(limits[k] > 0) {
            timing += fmt(" (limit %.0fs)", limits[k]);
            if(secs >= limits[k]) {
                o.pass = false;
                timing += " over time";
            }
        }
        std::printf("criterion %d: %s  %s  [%s]\n", k + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(), timing.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
