#include "anyent/fibonacci.hpp"
#include "anyent/measures.hpp"
#include "anyent/superops.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace anyent;

namespace {

const double kPhi = (1 + std::sqrt(5.0)) / 2;

double K(double x, double y) {
    const double tail = y < 1 ? (1 - y) * (std::log(1 - y) - std::log(x - 1)) : 0.0;
    return y * std::log(y) + std::log(x) + tail;
}

/// Block-by-block E_CE exactly as written for the isotropic family.
double e_ce_oracle(int n, double alpha) {
    const double d = kPhi, dn = std::pow(d, n), flat = (1 - alpha) / std::pow(d, 2 * n);
    const double Fp = double(fibonacci_number(n - 1)), F = double(fibonacci_number(n));
    double total = 0;
    if(Fp >= 2 && alpha > 1 / (dn + 1)) {
        const double y = (alpha * Fp * dn + 1 - alpha) / (alpha * Fp * dn + (1 - alpha) * Fp * Fp);
        total += (alpha * Fp / dn + Fp * Fp * flat) * K(Fp, y);
    }
    if(F >= 2 && alpha > 1 / (dn / d + 1)) {
        const double dm = dn / d;
        const double y = (alpha * F * dm + 1 - alpha) / (alpha * F * dm + (1 - alpha) * F * F);
        total += (1 + d) * (alpha * F / (dn * d) + F * F * flat) * K(F, y);
    }
    return total;
}

double quad(const Matrix &m, const Vector &v) { return (v.adjoint() * m * v)(0, 0).real(); }

} // namespace

TEST_CASE("fibonacci numbers") {
    CHECK(fibonacci_number(1) == 1);
    CHECK(fibonacci_number(2) == 1);
    CHECK(fibonacci_number(3) == 2);
    CHECK(fibonacci_number(10) == 55);
}

TEST_CASE("MES vectors are normalized and rebuild the MES") {
    for(int n = 1; n <= 5; ++n) {
        const auto mes = mes_decomposition(n);
        if(n > 1) CHECK(std::abs(mes.phi1.norm() - 1) <= 1e-14);
        CHECK(std::abs(mes.phi2.norm() - 1) <= 1e-14);
        CHECK(std::abs(mes.phi3.norm() - 1) <= 1e-14);
        const Vector v = mes.coeff1 * mes.phi1 + mes.coeff2 * mes.phi2;
        const auto rho = build_mes(n);
        CHECK((rho.block(kVacuum) - v * v.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
        CHECK(std::abs(quantum_trace(rho) - 1) <= 1e-12);
        CHECK(entropy(rho) <= 1e-10);
    }
}

TEST_CASE("isotropic matrix entries at n = 3, alpha = 0.5") {
    const int n = 3;
    const double a = 0.5, d = kPhi, dn = std::pow(d, n), flat = (1 - a) / std::pow(d, 2 * n);
    const double Fp = 1, F = 2;
    const auto mes = mes_decomposition(n);
    const auto rho = build_isotropic(n, a);
    const Matrix &one = rho.block(kVacuum);
    CHECK(std::abs(quad(one, mes.phi1) - (a * Fp / dn + flat)) <= 1e-14);
    CHECK(std::abs(quad(one, mes.phi2) - (a * F / (dn / d) + flat)) <= 1e-14);
    const double cross = (mes.phi1.adjoint() * one * mes.phi2)(0, 0).real();
    CHECK(std::abs(cross - a * std::sqrt(d) * std::sqrt(Fp * F) / dn) <= 1e-14);

    const auto D = apply_D(rho);
    CHECK(std::abs(quad(D.block(kVacuum), mes.phi1) - (a * Fp / dn + flat)) <= 1e-14);
    CHECK(std::abs(quad(D.block(kVacuum), mes.phi2) - (a * F / (dn * d) + flat)) <= 1e-14);
    CHECK(std::abs(quad(D.block(1), mes.phi3) - (a * F / (dn * d) + flat)) <= 1e-14);
    // Everything orthogonal to the MES directions stays flat.
    const Matrix rest = D.block(1) - (a * F / (dn * d)) * mes.phi3 * mes.phi3.adjoint();
    CHECK((rest - flat * Matrix::Identity(rest.rows(), rest.cols())).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("D of the MES decomposes onto the three Phi vectors") {
    for(int n = 2; n <= 5; ++n) {
        const auto mes = mes_decomposition(n);
        const auto D = apply_D(build_mes(n));
        const double d = kPhi, dn = std::pow(d, n);
        CHECK(std::abs(mes.weights[0] - double(fibonacci_number(n - 1)) / dn) <= 1e-14);
        CHECK(std::abs(mes.weights[1] - double(fibonacci_number(n)) / (dn * d)) <= 1e-14);
        const Matrix one = mes.weights[0] * mes.phi1 * mes.phi1.adjoint() + mes.weights[1] * mes.phi2 * mes.phi2.adjoint();
        const Matrix tau = mes.weights[2] * mes.phi3 * mes.phi3.adjoint();
        CHECK((D.block(kVacuum) - one).cwiseAbs().maxCoeff() <= 1e-14);
        CHECK((D.block(1) - tau).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("G-image block dimensions") {
    for(int n = 2; n <= 5; ++n) {
        const auto g = map_G(apply_D(build_isotropic(n, 0.3)));
        const auto Fp = fibonacci_number(n - 1), F = fibonacci_number(n);
        REQUIRE(g.blocks.size() == 4);
        CHECK(g.blocks[0].matrix.rows() == Fp * Fp);
        CHECK(g.blocks[1].matrix.rows() == Fp * F);
        CHECK(g.blocks[2].matrix.rows() == F * Fp);
        CHECK(g.blocks[3].matrix.rows() == F * F);
    }
}

TEST_CASE("closed-form E_ACE matches the eigendecomposition pipeline") {
    for(int n : {1, 2, 3, 4})
        for(int k = 0; k <= 20; ++k) {
            const double alpha = k / 20.0;
            const auto rho = build_isotropic(n, alpha);
            CHECK(std::abs(e_ace_closed(IsotropicParams::make(n, alpha)) - e_ace(rho).value) <= 1e-10);
        }
}

TEST_CASE("closed-form E_CE matches the written block formulas") {
    for(int n = 2; n <= 6; ++n)
        for(int k = 0; k <= 20; ++k) {
            const double alpha = k / 20.0;
            CHECK(std::abs(e_ce_closed(IsotropicParams::make(n, alpha)) - e_ce_oracle(n, alpha)) <= 1e-12);
        }
}

TEST_CASE("separability thresholds") {
    const double d = kPhi;
    CHECK(std::abs(e_ce_threshold(3) - 1 / (d * d + 1)) <= 1e-10);
    CHECK(std::abs(e_ce_threshold(3) - 0.276393202250) <= 1e-10);
    for(int n = 3; n <= 6; ++n) {
        for(const auto &b : e_ce_closed_blocks(IsotropicParams::make(n, 0.5))) {
            if(b.ctx.block_dim < 2) continue;
            const double expect = b.label == "11" ? 1 / (std::pow(d, n) + 1) : 1 / (std::pow(d, n - 1) + 1);
            CHECK(std::abs(b.threshold - expect) <= 1e-10);
        }
        const double t = e_ce_threshold(n);
        CHECK(e_ce_closed(IsotropicParams::make(n, t - 1e-6)) == 0.0);
        CHECK(e_ce_closed(IsotropicParams::make(n, t + 1e-6)) > 0.0);
    }
}

TEST_CASE("admissible alpha range") {
    const double amin = isotropic_alpha_min(3);
    CHECK(amin < 0);
    CHECK_NOTHROW(build_isotropic(3, amin + 1e-9));
    CHECK_THROWS_AS(build_isotropic(3, amin - 1e-3), NotPositive);
    CHECK_THROWS_AS(build_isotropic(3, 1.2), NotPositive);
    CHECK_THROWS(IsotropicParams::make(0, 0.5));
    CHECK_THROWS(IsotropicParams::make(9, 0.5));
}

TEST_CASE("Frank-Wolfe reproduces the closed form at alpha = 0.8") {
    const auto r = e_ce(build_isotropic(3, 0.8), MeasureMethod::frank_wolfe);
    CHECK(std::abs(r.value - e_ce_closed(IsotropicParams::make(3, 0.8))) <= 1e-6);
    REQUIRE(r.gap.has_value());
    CHECK(*r.gap <= 1e-6);
}

TEST_CASE("closed sweep rows") {
    const auto alphas = linear_grid(0, 1, 11);
    REQUIRE(alphas.size() == 11);
    CHECK(alphas.back() == 1.0);
    const auto rows = sweep(3, alphas);
    REQUIRE(rows.size() == 11);
    for(const auto &r : rows) {
        CHECK(r.e_total == r.e_ace + r.e_ce);
        CHECK(r.method == SweepMethod::closed);
        CHECK_FALSE(r.gap.has_value());
    }
    CHECK(rows[0].e_ace <= 1e-12);
    for(std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k].e_ace > rows[k - 1].e_ace);
}

TEST_CASE("generic sweep agrees with the closed sweep") {
    const std::vector<double> alphas{0.0, 0.2, 0.5, 0.9};
    const auto closed = sweep(3, alphas);
    const auto generic = sweep(3, alphas, SweepMethod::generic);
    for(std::size_t k = 0; k < alphas.size(); ++k) {
        CHECK(std::abs(closed[k].e_ace - generic[k].e_ace) <= 1e-10);
        CHECK(std::abs(closed[k].e_ce - generic[k].e_ce) <= 1e-5);
        REQUIRE(generic[k].gap.has_value());
    }
}

TEST_CASE("sweep CSV layout") {
    std::vector<SweepRow> rows{{0.5, 0.25, 0.0, 0.25, SweepMethod::closed, std::nullopt},
                               {1.0, 1.0 / 3, 0.125, 1.0 / 3 + 0.125, SweepMethod::generic, 1e-8}};
    std::ostringstream os;
    write_sweep_csv(os, rows);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == kSweepCsvHeader);
    std::getline(in, line);
    CHECK(line == "0.5,0.25,0,0.25,closed,");
    std::getline(in, line);
    CHECK(line == "1,0.333333333333,0.125,0.458333333333,generic,1e-08");
    CHECK_FALSE(std::getline(in, line));

    std::ostringstream bits;
    write_sweep_csv(bits, {rows[0]}, true);
    CHECK(bits.str().find("0.5," + format_g12(0.25 / std::log(2.0))) != std::string::npos);
}

TEST_CASE("charge measurement of the MES") {
    const auto rho = build_mes(3);
    const auto outcomes = measure_local_charge(rho, Party::A);
    double total = 0;
    for(const auto &o : outcomes) total += o.probability;
    CHECK(std::abs(total - 1) <= 1e-12);
    const auto mes = mes_decomposition(3);
    // P(local charge 1) is the weight of phi1 times d_1 = 1.
    CHECK(std::abs(outcomes[0].probability - mes.coeff1 * mes.coeff1) <= 1e-12);
}
