#include "anyent/verify.hpp"

#include "anyent/measures.hpp"
#include "anyent/parallel.hpp"
#include "anyent/superops.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>

namespace anyent {

namespace {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t name_hash(const std::string &s) {
    std::uint64_t h = 1469598103934665603ULL;
    for(char ch : s) h = (h ^ std::uint8_t(ch)) * 1099511628211ULL;
    return h;
}

struct Layout {
    const char *model;
    const char *a;
    const char *b;
};

const Layout kLayouts[] = {
    {"fibonacci", "tau,tau", "tau,tau"},
    {"ising", "sigma,sigma", "sigma,sigma"},
    {"fibonacci", "tau,tau,tau", "tau,tau"},
    {"ising", "sigma,sigma,sigma", "sigma"},
    {"fibonacci", "tau,tau,tau", "tau,tau,tau"},
};

/// One trial's per-check deviations, in check order.
/// An empty entry means the check was not sampled on that trial.
using Deviations = std::vector<std::optional<double>>;
using TrialFn = std::function<Deviations(const BasisPtr &, std::uint64_t seed, int trial)>;

CheckResult make_check(std::string description, double tol) {
    CheckResult c;
    c.description = std::move(description);
    c.tolerance = tol;
    return c;
}

SuiteReport run_trials(const std::string &name, const VerifyConfig &cfg, std::vector<CheckResult> checks,
                       const TrialFn &trial) {
    std::vector<std::size_t> layouts = cfg.layouts;
    if(layouts.empty())
        for(std::size_t k = 0; k < verify_layout_count(); ++k) layouts.push_back(k);
    const auto trials = std::size_t(std::max(cfg.trials, 0));
    std::vector<Deviations> devs(trials);
    const auto base = mix_seed(cfg.seed, name_hash(name));
    parallel_for(trials, [&](std::size_t t) {
        const auto basis = verify_layout(layouts[t % layouts.size()]);
        devs[t] = trial(basis, mix_seed(base, t), int(t));
    });
    std::vector<bool> bad(checks.size(), false);
    for(const auto &d : devs)
        for(std::size_t k = 0; k < checks.size() && k < d.size(); ++k) {
            if(!d[k]) continue;
            const double v = *d[k];
            if(std::isnan(v)) bad[k] = true;
            checks[k].max_deviation = checks[k].samples == 0 ? v : std::max(checks[k].max_deviation, v);
            ++checks[k].samples;
        }
    for(std::size_t k = 0; k < checks.size(); ++k)
        checks[k].pass = !bad[k] && checks[k].samples > 0 && checks[k].max_deviation <= checks[k].tolerance;
    return {name, std::move(checks)};
}

double ace(const AnyonicDensityMatrix &rho, Fault fault) { return relative_entropy(rho, suite_D(rho, fault)); }

Party party_for(int trial) { return trial % 2 == 0 ? Party::A : Party::B; }

SuiteReport suite_thm1(const VerifyConfig &cfg) {
    std::vector<CheckResult> checks{
        make_check("pythagorean: |S(rho||sigma) - E_ACE(rho) - S(D(rho)||sigma)|, sigma separable", 1e-8),
        make_check("decomposition: |E_direct - E_ACE - E_CE| - 2*(sum of gaps)", 1e-6),
    };
    return run_trials("thm1", cfg, std::move(checks), [&](const BasisPtr &basis, std::uint64_t seed, int t) {
        const auto rho = random_state(basis, seed);
        const auto sigma = random_separable(basis, mix_seed(seed, 1));
        const auto drho = suite_D(rho, cfg.fault);
        const double pyth =
            std::abs(relative_entropy(rho, sigma) - relative_entropy(rho, drho) - relative_entropy(drho, sigma));
        std::optional<double> decomp;
        // The optimizer check is costlier; sample it on a subset of trials.
        if(t % 10 == 0) {
            FrankWolfeConfig fw;
            fw.seed = mix_seed(seed, 2);
            const auto direct = e_total_direct(rho, fw).result;
            const auto ce = e_ce(rho, MeasureMethod::frank_wolfe, fw);
            const double sum = relative_entropy(rho, drho) + ce.value;
            decomp = std::abs(direct.value - sum) - 2 * (direct.gap.value_or(0) + ce.gap.value_or(0));
        }
        return Deviations{pyth, decomp};
    });
}

SuiteReport suite_thm2(const VerifyConfig &cfg) {
    std::vector<CheckResult> checks{make_check("E_ACE(rho) - S(rho||sigma_free)", 1e-9)};
    return run_trials("thm2", cfg, std::move(checks), [&](const BasisPtr &basis, std::uint64_t seed, int) {
        const auto rho = random_state(basis, seed);
        const auto free = suite_D(random_state(basis, mix_seed(seed, 1)), cfg.fault);
        return Deviations{ace(rho, cfg.fault) - relative_entropy(rho, free)};
    });
}

SuiteReport suite_thm3(const VerifyConfig &cfg) {
    std::vector<CheckResult> checks{make_check("|E_ACE - (S(D(rho)) - S(rho))|", 1e-9)};
    return run_trials("thm3", cfg, std::move(checks), [&](const BasisPtr &basis, std::uint64_t seed, int) {
        const auto rho = random_state(basis, seed);
        const auto drho = suite_D(rho, cfg.fault);
        return Deviations{std::abs(relative_entropy(rho, drho) - (entropy(drho) - entropy(rho)))};
    });
}

SuiteReport suite_thm4(const VerifyConfig &cfg) {
    std::vector<CheckResult> checks{make_check("sum_a p_a E_ACE(post_a) - E_ACE(rho), local charge measurement", 1e-9)};
    return run_trials("thm4", cfg, std::move(checks), [&](const BasisPtr &basis, std::uint64_t seed, int t) {
        const auto rho = random_state(basis, seed);
        double avg = 0;
        for(const auto &o : measure_local_charge(rho, party_for(t))) avg += o.probability * ace(o.post_state, cfg.fault);
        return Deviations{avg - ace(rho, cfg.fault)};
    });
}

SuiteReport suite_prop1(const VerifyConfig &cfg) {
    std::vector<CheckResult> checks{
        make_check("party trace: |D(Tr_X rho) - Tr_X D(rho)|", 1e-10),
        make_check("charge measurement branches: |D(P rho P) - P D(rho) P|", 1e-10),
        make_check("vacuum ancilla: |D(rho (x) a) - D(rho) (x) a|", 1e-10),
        make_check("charge-preserving local channel: |D(E(rho)) - E(D(rho))|", 1e-10),
    };
    return run_trials("prop1", cfg, std::move(checks), [&](const BasisPtr &basis, std::uint64_t seed, int t) {
        const auto rho = random_state(basis, seed);
        const auto D = [&](const AnyonicDensityMatrix &x) { return suite_D(x, cfg.fault); };
        const auto drho = D(rho);
        const Party party = party_for(t);
        Deviations out;
        out.push_back(D(trace_out_party(rho, party)).max_abs_diff(trace_out_party(drho, party)));
        double branch = 0;
        const auto &layout = basis->layout(party);
        for(ChargeId a = 0; a < basis->charge_count(); ++a)
            if(layout.dim(a) > 0)
                branch = std::max(branch, D(project_local_charge(rho, party, a))
                                              .max_abs_diff(project_local_charge(drho, party, a)));
        out.push_back(branch);
        out.push_back(D(adjoin_vacuum_ancilla(rho, party, 2)).max_abs_diff(adjoin_vacuum_ancilla(drho, party, 2)));
        const auto ch = random_local_channel(*basis, party, mix_seed(seed, 3));
        out.push_back(D(apply_channel(rho, ch)).max_abs_diff(apply_channel(drho, ch)));
        return out;
    });
}

SuiteReport suite_prop2(const VerifyConfig &cfg) {
    std::vector<CheckResult> checks{make_check("S(E(rho)||E(sigma)) - S(rho||sigma)", 1e-9)};
    return run_trials("prop2", cfg, std::move(checks), [&](const BasisPtr &basis, std::uint64_t seed, int t) {
        const auto rho = random_state(basis, seed);
        const auto sigma = random_state(basis, mix_seed(seed, 1));
        KrausChannel ch;
        switch(t % 3) {
        case 0: ch = random_local_channel(*basis, Party::A, mix_seed(seed, 2)); break;
        case 1: ch = random_local_channel(*basis, Party::B, mix_seed(seed, 2)); break;
        default: ch = random_global_channel(*basis, mix_seed(seed, 2)); break;
        }
        const double after = relative_entropy(apply_channel(rho, ch), apply_channel(sigma, ch));
        return Deviations{after - relative_entropy(rho, sigma)};
    });
}

SuiteReport suite_prop3(const VerifyConfig &cfg) {
    std::vector<CheckResult> checks{make_check("E_ACE(mixture) - mixture of E_ACE", 1e-9)};
    return run_trials("prop3", cfg, std::move(checks), [&](const BasisPtr &basis, std::uint64_t seed, int) {
        const auto r1 = random_state(basis, seed);
        const auto r2 = random_state(basis, mix_seed(seed, 1));
        std::mt19937_64 rng(mix_seed(seed, 2));
        const double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const double lhs = ace(mix(lambda, r1, r2), cfg.fault);
        return Deviations{lhs - (lambda * ace(r1, cfg.fault) + (1 - lambda) * ace(r2, cfg.fault))};
    });
}

SuiteReport suite_lemma1(const VerifyConfig &cfg) {
    std::vector<CheckResult> checks{make_check("S(mix rho || mix sigma) - mixture of S(rho_k||sigma_k)", 1e-9)};
    return run_trials("lemma1", cfg, std::move(checks), [&](const BasisPtr &basis, std::uint64_t seed, int t) {
        const double lambda = 0.25 * double(1 + t % 3);
        const auto r1 = random_state(basis, seed);
        const auto r2 = random_state(basis, mix_seed(seed, 1));
        const auto s1 = random_state(basis, mix_seed(seed, 2));
        const auto s2 = random_state(basis, mix_seed(seed, 3));
        const double lhs = relative_entropy(mix(lambda, r1, r2), mix(lambda, s1, s2));
        const double rhs = lambda * relative_entropy(r1, s1) + (1 - lambda) * relative_entropy(r2, s2);
        return Deviations{lhs - rhs};
    });
}

} // namespace

bool SuiteReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.pass; });
}

const std::vector<std::string> &suite_names() {
    static const std::vector<std::string> names{"thm1", "thm2", "thm3", "thm4", "prop1", "prop2", "prop3", "lemma1"};
    return names;
}

BasisPtr verify_layout(std::size_t index) {
    static std::map<std::string, ModelPtr> models{{"fibonacci", builtin_model("fibonacci")},
                                                  {"ising", builtin_model("ising")}};
    const auto &l = kLayouts[index % verify_layout_count()];
    const auto &model = models.at(l.model);
    return make_basis(model, parse_charge_list(*model, l.a), parse_charge_list(*model, l.b));
}

std::size_t verify_layout_count() { return sizeof(kLayouts) / sizeof(kLayouts[0]); }

AnyonicDensityMatrix suite_D(const AnyonicDensityMatrix &rho, Fault fault) {
    if(fault == Fault::none) return apply_D(rho);
    const auto &basis = rho.basis();
    const auto &model = basis.model();
    std::map<std::pair<ChargeId, ChargeId>, Matrix> merged;
    for(ChargeId c = 0; c < basis.charge_count(); ++c)
        for(const auto &slot : basis.slots(c)) {
            const auto key = std::pair{slot.key.a, slot.key.b};
            const Matrix term = rho.sub_block(slot, slot);
            if(auto it = merged.find(key); it == merged.end())
                merged.emplace(key, term);
            else
                it->second += term;
        }
    auto blocks = AnyonicDensityMatrix::zero(rho.basis_ptr()).blocks();
    for(ChargeId c = 0; c < basis.charge_count(); ++c)
        for(const auto &slot : basis.slots(c))
            blocks[c].block(slot.offset, slot.offset, slot.size(), slot.size()) =
                merged.at({slot.key.a, slot.key.b}) / (model.qdim(slot.key.a) * model.qdim(slot.key.b));
    return {rho.basis_ptr(), std::move(blocks)};
}

AnyonicDensityMatrix random_separable(const BasisPtr &basis, std::uint64_t seed, int terms) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<double> w;
    for(int k = 0; k < terms; ++k) w.push_back(u(rng));
    double total = 0;
    for(double x : w) total += x;
    std::vector<Matrix> blocks = AnyonicDensityMatrix::zero(basis).blocks();
    for(int k = 0; k < terms; ++k) {
        const auto ra = random_local_state(basis->model_ptr(), basis->layout_a(), mix_seed(seed, 2 * k));
        const auto rb = random_local_state(basis->model_ptr(), basis->layout_b(), mix_seed(seed, 2 * k + 1));
        const auto prod = product_state(ra, rb);
        for(std::size_t c = 0; c < blocks.size(); ++c) blocks[c] += (w[std::size_t(k)] / total) * prod.block(ChargeId(c));
    }
    return {basis, std::move(blocks)};
}

SuiteReport run_suite(const std::string &name, const VerifyConfig &config) {
    if(name == "thm1") return suite_thm1(config);
    if(name == "thm2") return suite_thm2(config);
    if(name == "thm3") return suite_thm3(config);
    if(name == "thm4") return suite_thm4(config);
    if(name == "prop1") return suite_prop1(config);
    if(name == "prop2") return suite_prop2(config);
    if(name == "prop3") return suite_prop3(config);
    if(name == "lemma1") return suite_lemma1(config);
    throw std::invalid_argument("unknown suite `" + name + "`");
}

std::vector<SuiteReport> run_suites(const std::string &name, const VerifyConfig &config) {
    if(name != "all") return {run_suite(name, config)};
    std::vector<SuiteReport> out;
    for(const auto &n : suite_names()) out.push_back(run_suite(n, config));
    return out;
}

} // namespace anyent
