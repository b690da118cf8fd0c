#include "anyent/superops.hpp"

#include <doctest.h>

#include <cmath>

using namespace anyent;

namespace {

BasisPtr basis_of(const char *model, const char *a, const char *b) {
    const auto m = builtin_model(model);
    return make_basis(m, parse_charge_list(*m, a), parse_charge_list(*m, b));
}

std::vector<BasisPtr> layouts() {
    return {basis_of("fibonacci", "tau,tau", "tau,tau"), basis_of("ising", "sigma,sigma", "sigma,sigma"),
            basis_of("fibonacci", "tau,tau,tau", "tau,tau,tau"), basis_of("ising", "sigma,sigma,sigma", "sigma,psi")};
}

/// Probability of local charge a on `party`, summed slot by slot.
double charge_probability(const AnyonicDensityMatrix &rho, Party party, ChargeId a) {
    const auto &basis = rho.basis();
    double p = 0;
    for(ChargeId c = 0; c < basis.charge_count(); ++c)
        for(const auto &s : basis.slots(c))
            if((party == Party::A ? s.key.a : s.key.b) == a) p += basis.model().qdim(c) * rho.sub_block(s, s).trace().real();
    return p;
}

} // namespace

TEST_CASE("D on one tau per party matches the hand-written average") {
    const auto basis = basis_of("fibonacci", "tau", "tau");
    const double d = basis->model().qdim(1);
    const auto rho = random_state(basis, 4);
    REQUIRE(basis->sector_dim(0) == 1);
    REQUIRE(basis->sector_dim(1) == 1);
    const cplx expect = (rho.block(0)(0, 0) + d * rho.block(1)(0, 0)) / (d * d);
    const auto out = apply_D(rho);
    CHECK(std::abs(out.block(0)(0, 0) - expect) <= 1e-15);
    CHECK(std::abs(out.block(1)(0, 0) - expect) <= 1e-15);
}

TEST_CASE("D is idempotent, trace preserving and lands on free states") {
    for(const auto &basis : layouts())
        for(std::uint64_t seed : {1, 2, 3}) {
            const auto rho = random_state(basis, seed);
            const auto once = apply_D(rho);
            CHECK(apply_D(once).max_abs_diff(once) <= 1e-12);
            CHECK(std::abs(quantum_trace(once) - 1) <= 1e-12);
            CHECK(free_state_residual(once) <= 1e-12);
            CHECK(validate(once).ok());
        }
}

TEST_CASE("D kills coherences between different (a, b) labels") {
    const auto basis = basis_of("fibonacci", "tau,tau", "tau,tau");
    const auto out = apply_D(random_state(basis, 8));
    const auto &slots = out.basis().slots(0);
    REQUIRE(slots.size() == 2);
    CHECK(out.sub_block(slots[0], slots[1]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("product states are fixed by D") {
    const auto m = builtin_model("ising");
    const auto x = random_local_state(m, PartyLayout::make(*m, parse_charge_list(*m, "sigma,sigma,sigma")), 1);
    const auto y = random_local_state(m, PartyLayout::make(*m, parse_charge_list(*m, "sigma,sigma")), 2);
    const auto rho = product_state(x, y);
    CHECK(free_state_residual(rho) <= 1e-12);
}

TEST_CASE("map F of the maximally mixed 2-tau state") {
    const auto basis = basis_of("fibonacci", "tau", "tau");
    const double d = basis->model().qdim(1);
    const auto f = map_F(AnyonicDensityMatrix::maximally_mixed(basis));
    REQUIRE(f.blocks.size() == 2);
    CHECK(std::abs(f.blocks[0].matrix(0, 0).real() - 1 / (d * d)) <= 1e-15);
    CHECK(std::abs(f.blocks[1].matrix(0, 0).real() - d / (d * d)) <= 1e-15);
    CHECK(std::abs(f.trace() - 1) <= 1e-12);
}

TEST_CASE("map F carries quantum trace to ordinary trace") {
    for(const auto &basis : layouts()) {
        const auto f = map_F(random_state(basis, 6));
        CHECK(std::abs(f.trace() - 1) <= 1e-12);
        CHECK(f.min_eigenvalue() > 0);
    }
}

TEST_CASE("map G of a product state") {
    const auto m = builtin_model("fibonacci");
    const auto tau = m->charge("tau");
    const auto x = random_local_state(m, PartyLayout::make(*m, {tau, tau, tau}), 3);
    const auto y = random_local_state(m, PartyLayout::make(*m, {tau, tau, tau}), 4);
    const auto g = map_G(product_state(x, y));
    CHECK(g.blocks.size() == 4);
    CHECK(std::abs(g.trace() - 1) <= 1e-12);
    for(const auto &b : g.blocks) {
        REQUIRE(b.factors.has_value());
        CHECK(b.matrix.rows() == b.factors->first * b.factors->second);
    }
    const auto &tt = g.blocks.back();
    CHECK(tt.label == "tau,tau");
    const Matrix expect = m->qdim(tau) * m->qdim(tau) * linalg::kron(x.block(tau), y.block(tau));
    CHECK((tt.matrix - expect).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("map G rejects states with charge lines") {
    const auto rho = random_state(basis_of("fibonacci", "tau,tau", "tau,tau"), 1);
    try {
        map_G(rho);
        FAIL("expected ChannelError");
    } catch(const ChannelError &e) {
        CHECK(e.kind() == ChannelError::Kind::not_free);
    }
}

TEST_CASE("entropy relations through map F") {
    const auto basis = basis_of("ising", "sigma,sigma", "sigma,sigma");
    const auto r = map_F(random_state(basis, 1));
    const auto s = map_F(random_state(basis, 2));
    CHECK(conventional_relative_entropy(r, r) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(conventional_relative_entropy(r, s) > 0);
    auto bad = s;
    bad.blocks[0].matrix.setZero();
    CHECK(std::isinf(conventional_relative_entropy(r, bad)));
}

TEST_CASE("channels are normalized and keep states valid") {
    for(const auto &basis : layouts()) {
        const auto rho = random_state(basis, 10);
        for(const auto &ch : {identity_channel(*basis), charge_projector_channel(*basis, Party::A),
                              charge_projector_channel(*basis, Party::B), random_local_channel(*basis, Party::A, 5),
                              random_local_channel(*basis, Party::B, 6), random_global_channel(*basis, 7)}) {
            CHECK(ch.normalization_residual(*basis) <= 1e-10);
            const auto out = apply_channel(rho, ch);
            CHECK(validate(out).ok(1e-12, -1e-12, 1e-10));
        }
        CHECK(apply_channel(rho, identity_channel(*basis)).max_abs_diff(rho) == 0.0);
    }
}

TEST_CASE("charge projector channel zeroes cross-charge blocks") {
    const auto basis = basis_of("fibonacci", "tau,tau", "tau,tau");
    const auto out = apply_channel(random_state(basis, 3), charge_projector_channel(*basis, Party::A));
    const auto &slots = basis->slots(1); // (1,tau), (tau,1), (tau,tau)
    CHECK(out.sub_block(slots[0], slots[1]).cwiseAbs().maxCoeff() == 0.0);
    CHECK(out.sub_block(slots[0], slots[2]).cwiseAbs().maxCoeff() == 0.0);
    CHECK(out.sub_block(slots[1], slots[2]).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("global channels can move weight between sectors") {
    const auto basis = basis_of("fibonacci", "tau,tau", "tau,tau");
    const auto rho = random_state(basis, 1);
    const auto out = apply_channel(rho, random_global_channel(*basis, 2));
    const double before = basis->model().qdim(0) * rho.block(0).trace().real();
    const double after = basis->model().qdim(0) * out.block(0).trace().real();
    CHECK(std::abs(before - after) > 1e-6);
}

TEST_CASE("malformed channels are rejected") {
    const auto basis = basis_of("fibonacci", "tau,tau", "tau,tau");
    const auto rho = random_state(basis, 1);
    auto ch = identity_channel(*basis);
    ch.ops[0].K *= 2.0;
    CHECK_THROWS_AS(apply_channel(rho, ch), ChannelError);
    auto shaped = identity_channel(*basis);
    shaped.ops[0].K = Matrix::Identity(4, 4);
    try {
        apply_channel(rho, shaped);
        FAIL("expected ChannelError");
    } catch(const ChannelError &e) {
        CHECK(e.kind() == ChannelError::Kind::shape_mismatch);
    }
}

TEST_CASE("local charge measurement") {
    for(const auto &basis : layouts()) {
        const auto rho = random_state(basis, 12);
        for(Party party : {Party::A, Party::B}) {
            const auto outcomes = measure_local_charge(rho, party);
            double total = 0;
            for(const auto &o : outcomes) {
                total += o.probability;
                CHECK(std::abs(o.probability - charge_probability(rho, party, o.charge)) <= 1e-12);
                CHECK(validate(o.post_state).ok());
            }
            CHECK(std::abs(total - 1) <= 1e-12);
        }
    }
}

TEST_CASE("measurement drops impossible outcomes") {
    const auto basis = basis_of("fibonacci", "tau,tau", "tau,tau");
    const auto rho = apply_D(project_local_charge(random_state(basis, 1), Party::A, 1).scaled(1.0));
    const double p = quantum_trace(rho);
    const auto outcomes = measure_local_charge(rho.scaled(1 / p), Party::A);
    REQUIRE(outcomes.size() == 1);
    CHECK(outcomes[0].charge == 1);
}

TEST_CASE("vacuum ancilla round trip") {
    for(const auto &basis : layouts()) {
        const auto rho = random_state(basis, 2);
        for(Party party : {Party::A, Party::B}) {
            const auto big = adjoin_vacuum_ancilla(rho, party, 3);
            CHECK(big.basis().layout(party).internal_dim == 3);
            CHECK(std::abs(quantum_trace(big) - 1) <= 1e-12);
            CHECK(validate(big).ok());
            CHECK(discard_vacuum_ancilla(big, party).max_abs_diff(rho) <= 1e-15);
            const auto bigger = adjoin_vacuum_ancilla(big, party, 2);
            CHECK(bigger.basis().layout(party).internal_dim == 6);
            CHECK(discard_vacuum_ancilla(bigger, party).max_abs_diff(rho) <= 1e-15);
        }
    }
}

TEST_CASE("trace_out_party agrees with the partial quantum trace") {
    const auto rho = random_state(basis_of("ising", "sigma,sigma,sigma", "sigma,psi"), 5);
    const auto kept_a = trace_out_party(rho, Party::B);
    const auto reduced = partial_quantum_trace(rho, Party::A);
    CHECK(std::abs(quantum_trace(kept_a) - 1) <= 1e-12);
    for(ChargeId a = 0; a < 3; ++a)
        if(reduced.block(a).size()) CHECK((kept_a.block(a) - reduced.block(a)).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(free_state_residual(kept_a) <= 1e-12);
}
