#include "anyent/fibonacci.hpp"
#include "anyent/measures.hpp"
#include "anyent/superops.hpp"

#include <doctest.h>

#include <cmath>

using namespace anyent;

namespace {

BasisPtr basis_of(const char *model, const char *a, const char *b) {
    const auto m = builtin_model(model);
    return make_basis(m, parse_charge_list(*m, a), parse_charge_list(*m, b));
}

/// Anyonic entropy from scratch: eigenvalues of each block, weighted by d_c.
double entropy_oracle(const AnyonicDensityMatrix &rho) {
    double s = 0;
    for(ChargeId c = 0; c < rho.basis().charge_count(); ++c) {
        if(rho.block(c).size() == 0) continue;
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho.block(c));
        for(double p : es.eigenvalues())
            if(p > 1e-300) s -= rho.basis().model().qdim(c) * p * std::log(p);
    }
    return s;
}

} // namespace

TEST_CASE("entropy of the maximally mixed state is log of the weighted dimension") {
    for(int n = 1; n <= 4; ++n) {
        const auto basis = fibonacci_basis(n);
        const double d = basis->model().qdim(1);
        CHECK(std::abs(entropy(AnyonicDensityMatrix::maximally_mixed(basis)) - 2 * n * std::log(d)) <= 1e-12);
    }
}

TEST_CASE("entropy matches an eigenvalue oracle") {
    const auto rho = random_state(basis_of("ising", "sigma,sigma,sigma", "sigma,psi"), 3);
    CHECK(std::abs(entropy(rho) - entropy_oracle(rho)) <= 1e-12);
}

TEST_CASE("relative entropy basics") {
    const auto basis = basis_of("fibonacci", "tau,tau", "tau,tau");
    const auto r = random_state(basis, 1);
    const auto s = random_state(basis, 2);
    CHECK(std::abs(relative_entropy(r, r)) <= 1e-12);
    CHECK(relative_entropy(r, s) > 0);
    CHECK(std::abs(relative_entropy(r, s) - conventional_relative_entropy(map_F(r), map_F(s))) <= 1e-12);
    CHECK(std::isinf(relative_entropy(r, AnyonicDensityMatrix::zero(basis))));
    CHECK_THROWS_AS(relative_entropy(r, random_state(basis_of("fibonacci", "tau,tau,tau", "tau,tau"), 1)),
                    LayoutMismatch);
}

TEST_CASE("E_ACE equals the entropy increase under D") {
    for(auto basis : {basis_of("fibonacci", "tau,tau", "tau,tau"), basis_of("ising", "sigma,sigma", "sigma,sigma"),
                      basis_of("fibonacci", "tau,tau,tau", "tau,tau,tau")})
        for(std::uint64_t seed : {1, 2, 3, 4}) {
            const auto rho = random_state(basis, seed);
            const double direct = relative_entropy(rho, apply_D(rho));
            CHECK(std::abs(e_ace(rho).value - s_ace(rho)) <= 1e-10);
            CHECK(std::abs(e_ace(rho).value - direct) <= 1e-10);
            CHECK(e_ace(rho).value > 0);
        }
}

TEST_CASE("free states carry no entanglement") {
    const auto m = builtin_model("fibonacci");
    const auto tau = m->charge("tau");
    const auto x = random_local_state(m, PartyLayout::make(*m, {tau, tau}), 1);
    const auto y = random_local_state(m, PartyLayout::make(*m, {tau, tau}), 2);
    const auto rho = product_state(x, y);
    CHECK(e_ace(rho).value <= 1e-12);
    CHECK(e_ce(rho, MeasureMethod::generic).value <= 1e-9);
    CHECK(e_total(rho, MeasureMethod::direct).value <= 1e-7);
    CHECK(e_ace(AnyonicDensityMatrix::maximally_mixed(fibonacci_basis(3))).value <= 1e-12);
}

TEST_CASE("closed forms need the isotropic tag") {
    const auto rho = random_state(fibonacci_basis(2), 1);
    CHECK_THROWS_AS(e_ce(rho, MeasureMethod::closed_form), ClosedFormUnavailable);
    CHECK_THROWS_AS(e_total(rho, MeasureMethod::closed_form), ClosedFormUnavailable);
    CHECK_THROWS_AS(e_total(build_isotropic(2, 0.5).with_tag(std::nullopt), MeasureMethod::closed_form),
                    ClosedFormUnavailable);
    CHECK_NOTHROW(e_total(build_isotropic(2, 0.5), MeasureMethod::closed_form));
}

TEST_CASE("clamping of tiny negatives") {
    CHECK(clamp_measure(-5e-11) == 0.0);
    CHECK(clamp_measure(-1e-6) == -1e-6);
    CHECK(clamp_measure(0.25) == 0.25);
}

TEST_CASE("measures are unchanged by a vacuum ancilla") {
    const auto rho = random_state(basis_of("fibonacci", "tau,tau", "tau,tau"), 7);
    const auto big = adjoin_vacuum_ancilla(rho, Party::A, 2);
    CHECK(std::abs(e_ace(big).value - e_ace(rho).value) <= 1e-10);
    CHECK(std::abs(entropy(big) - entropy(rho)) <= 1e-12);
}

TEST_CASE("direct minimization agrees with the ACE + CE split") {
    const auto rho = random_state(basis_of("fibonacci", "tau,tau,tau", "tau,tau,tau"), 3);
    const auto ace = e_ace(rho);
    const auto ce = e_ce(rho, MeasureMethod::frank_wolfe);
    const auto direct = e_total_direct(rho);
    REQUIRE(ce.gap.has_value());
    REQUIRE(direct.result.gap.has_value());
    const double slack = *ce.gap + *direct.result.gap + 1e-7;
    CHECK(std::abs(direct.result.value - ace.value - ce.value) <= slack);
    CHECK(free_state_residual(direct.minimizer) <= 1e-10);
    CHECK(std::abs(quantum_trace(direct.minimizer) - 1) <= 1e-10);
}

TEST_CASE("isotropic measures through the generic pipeline") {
    const auto p = IsotropicParams::make(3, 0.8);
    const auto rho = build_isotropic(3, 0.8);
    CHECK(std::abs(e_ace(rho).value - e_ace_closed(p)) <= 1e-10);
    const auto ce = e_ce(rho, MeasureMethod::generic);
    CHECK(std::abs(ce.value - e_ce_closed(p)) <= 1e-5);
    CHECK(e_ce(rho, MeasureMethod::closed_form).method == MeasureMethod::closed_form);
    CHECK(to_string(MeasureMethod::frank_wolfe) == "frank_wolfe");
}
