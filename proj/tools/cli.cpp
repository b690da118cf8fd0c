#include "cli.hpp"

#include "anyent/fibonacci.hpp"
#include "anyent/measures.hpp"
#include "anyent/model.hpp"
#include "anyent/state_io.hpp"
#include "anyent/superops.hpp"
#include "anyent/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace anyent::cli {

namespace {

struct ModelArgs {
    std::string path;
    std::string builtin;
};

struct MeasureArgs {
    ModelArgs model;
    std::string state_path;
    std::string builder;
    int n = 3;
    double alpha = 1.0;
    std::string which = "total";
    std::string method = "auto";
    std::string channel;
    std::string save_state;
    std::uint64_t seed = FrankWolfeConfig{}.seed;
    double tol = FrankWolfeConfig{}.gap_tol;
    bool bits = false;
};

struct SweepArgs {
    int n = 3;
    std::optional<double> alpha;
    double alpha_min = 0.0, alpha_max = 1.0;
    int steps = 101;
    std::string method = "closed";
    std::string out;
    std::uint64_t seed = FrankWolfeConfig{}.seed;
    double tol = FrankWolfeConfig{}.gap_tol;
    bool bits = false;
};

struct VerifyArgs {
    std::string suite = "all";
    std::uint64_t seed = 1;
    int trials = 200;
    std::optional<double> tol;
    std::string fault = "none";
};

std::string fmt(double v) { return format_g12(v); }

std::string fixed12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", v);
    return buf;
}

ModelPtr load_model_args(const ModelArgs &m) {
    if(!m.path.empty()) return load_model(m.path);
    return builtin_model(m.builtin.empty() ? "fibonacci" : m.builtin);
}

int cmd_model(const ModelArgs &args, std::ostream &out, std::ostream &err) {
    ModelPtr model;
    try {
        model = load_model_args(args);
    } catch(const ModelError &e) {
        err << "error: " << e.what() << '\n';
        return model_error;
    } catch(const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return model_error;
    }
    const auto &m = *model;
    out << "model " << m.name() << '\n';
    out << "charges";
    for(ChargeId a = 0; a < m.size(); ++a) out << ' ' << m.charge_name(a);
    out << '\n';
    out << "quantum dimensions\n";
    for(ChargeId a = 0; a < m.size(); ++a) out << "  d_" << m.charge_name(a) << " = " << fixed12(m.qdim(a)) << '\n';
    out << "duals\n";
    for(ChargeId a = 0; a < m.size(); ++a) out << "  " << m.charge_name(a) << " -> " << m.charge_name(m.dual(a)) << '\n';
    out << "fusion table\n";
    for(ChargeId a = 0; a < m.size(); ++a)
        for(ChargeId b = 0; b < m.size(); ++b) {
            out << "  " << m.charge_name(a) << " x " << m.charge_name(b) << " =";
            bool first = true;
            for(ChargeId c = 0; c < m.size(); ++c) {
                const int k = m.N(a, b, c);
                if(!k) continue;
                out << (first ? " " : " + ") << (k > 1 ? std::to_string(k) : "") << m.charge_name(c);
                first = false;
            }
            out << '\n';
        }
    out << "associativity: ok\n";
    out << "max |d_a d_b - sum_c N_ab^c d_c| = " << fmt(m.qdim_residual()) << '\n';
    return ok;
}

std::optional<MeasureMethod> parse_method(const std::string &s) {
    if(s == "closed") return MeasureMethod::closed_form;
    if(s == "generic") return MeasureMethod::generic;
    if(s == "fw") return MeasureMethod::frank_wolfe;
    if(s == "direct") return MeasureMethod::direct;
    return std::nullopt;
}

AnyonicDensityMatrix apply_preset(const AnyonicDensityMatrix &rho, const std::string &preset) {
    const auto &basis = rho.basis();
    if(preset == "identity") return apply_channel(rho, identity_channel(basis));
    if(preset == "charge-measure:A") return apply_channel(rho, charge_projector_channel(basis, Party::A));
    if(preset == "charge-measure:B") return apply_channel(rho, charge_projector_channel(basis, Party::B));
    if(preset.rfind("random-local:", 0) == 0) {
        std::string rest = preset.substr(13);
        Party party = Party::A;
        if(const auto colon = rest.find(':'); colon != std::string::npos) {
            const auto p = rest.substr(colon + 1);
            if(p != "A" && p != "B") throw std::invalid_argument("random-local party must be A or B");
            party = p == "A" ? Party::A : Party::B;
            rest = rest.substr(0, colon);
        }
        return apply_channel(rho, random_local_channel(basis, party, std::stoull(rest)));
    }
    throw std::invalid_argument("unknown channel preset `" + preset +
                                "` (identity, charge-measure:A|B, random-local:<seed>[:A|B])");
}

int cmd_measure(const MeasureArgs &args, std::ostream &out, std::ostream &err) {
    std::optional<AnyonicDensityMatrix> rho;
    if(!args.state_path.empty()) {
        ModelPtr user;
        if(!args.model.path.empty() || !args.model.builtin.empty()) {
            try {
                user = load_model_args(args.model);
            } catch(const std::exception &e) {
                err << "error: " << e.what() << '\n';
                return model_error;
            }
        }
        auto resolve = [&](const std::string &name) {
            if(user) {
                if(user->name() != name)
                    throw std::invalid_argument("state names model `" + name + "` but `" + user->name() + "` was given");
                return user;
            }
            return builtin_model(name);
        };
        try {
            rho = load_state(args.state_path, resolve);
        } catch(const std::exception &e) {
            err << "error: " << e.what() << '\n';
            return invalid_state;
        }
        const auto diag = validate(*rho);
        if(!diag.ok()) {
            err << "error: invalid state (hermiticity " << diag.hermiticity << ", min eigenvalue " << diag.min_eigenvalue
                << ", quantum trace deviation " << diag.qtrace_deviation << ")\n";
            return invalid_state;
        }
    } else {
        try {
            if(args.builder == "isotropic")
                rho = build_isotropic(args.n, args.alpha);
            else if(args.builder == "mes")
                rho = build_isotropic(args.n, 1.0);
            else if(args.builder == "maximally-mixed")
                rho = build_isotropic(args.n, 0.0);
            else {
                err << "error: --builtin must be isotropic, mes or maximally-mixed (or pass --state)\n";
                return invalid_state;
            }
        } catch(const std::exception &e) {
            err << "error: " << e.what() << '\n';
            return invalid_state;
        }
    }
    if(!args.channel.empty()) {
        try {
            rho = apply_preset(*rho, args.channel);
        } catch(const std::exception &e) {
            err << "error: " << e.what() << '\n';
            return invalid_state;
        }
    }
    if(!args.save_state.empty()) {
        std::ofstream f(args.save_state);
        write_state(f, *rho);
    }

    std::optional<MeasureMethod> method;
    if(args.method == "auto")
        method = rho->isotropic_tag() ? MeasureMethod::closed_form : MeasureMethod::generic;
    else
        method = parse_method(args.method);
    if(!method) {
        err << "error: unknown method `" << args.method << "`\n";
        return invalid_state;
    }
    FrankWolfeConfig fw;
    fw.seed = args.seed;
    fw.gap_tol = args.tol;

    MeasureResult r;
    try {
        if(args.which == "ace") {
            if(*method == MeasureMethod::closed_form) {
                const auto &tag = rho->isotropic_tag();
                if(!tag) throw ClosedFormUnavailable("closed forms exist only for the Fibonacci isotropic family");
                r.value = clamp_measure(e_ace_closed(IsotropicParams::make(tag->n, tag->alpha)));
                r.method = MeasureMethod::closed_form;
            } else {
                r = e_ace(*rho);
            }
        } else if(args.which == "ce") {
            r = e_ce(*rho, *method == MeasureMethod::direct ? MeasureMethod::frank_wolfe : *method, fw);
        } else if(args.which == "total") {
            r = e_total(*rho, *method, fw);
        } else {
            err << "error: --which must be ace, ce or total\n";
            return invalid_state;
        }
    } catch(const ClosedFormUnavailable &e) {
        err << "error: " << e.what() << '\n';
        return closed_form_unavailable;
    }
    const double scale = args.bits ? 1.0 / std::log(2.0) : 1.0;
    out << "which: " << args.which << '\n';
    out << "method: " << to_string(r.method) << '\n';
    out << "value: " << fmt(r.value * scale) << '\n';
    out << "unit: " << (args.bits ? "bits" : "nats") << '\n';
    if(r.gap) out << "gap: " << fmt(*r.gap * scale) << '\n';
    if(r.iterations) out << "iterations: " << *r.iterations << '\n';
    if(!r.converged) err << "warning: optimizer stopped at the iteration cap with gap above tolerance\n";
    return ok;
}

int cmd_sweep(const SweepArgs &args, std::ostream &out, std::ostream &err) {
    SweepMethod method;
    if(args.method == "closed")
        method = SweepMethod::closed;
    else if(args.method == "generic")
        method = SweepMethod::generic;
    else if(args.method == "fw")
        method = SweepMethod::fw;
    else {
        err << "error: --method must be closed, generic or fw\n";
        return invalid_state;
    }
    if(args.alpha_min > args.alpha_max) {
        err << "error: --alpha-min exceeds --alpha-max\n";
        return invalid_state;
    }
    const auto grid = args.alpha ? std::vector<double>{*args.alpha} : linear_grid(args.alpha_min, args.alpha_max, args.steps);
    std::vector<SweepRow> rows;
    try {
        if(args.n < 1 || args.n > 8) throw std::invalid_argument("--n must lie in 1..8");
        const double lo = isotropic_alpha_min(args.n);
        for(double a : grid)
            if(a > 1.0 + 1e-15 || a < lo - 1e-15)
                throw NotPositive("alpha = " + fmt(a) + " outside the admissible range [" + fmt(lo) + ", 1]");
        FrankWolfeConfig fw;
        fw.seed = args.seed;
        fw.gap_tol = args.tol;
        rows = sweep(args.n, grid, method, fw);
    } catch(const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return invalid_state;
    }
    if(args.out.empty()) {
        write_sweep_csv(out, rows, args.bits);
        err << "sweep: " << rows.size() << " rows\n";
    } else {
        std::ofstream f(args.out);
        if(!f) {
            err << "error: cannot write " << args.out << '\n';
            return invalid_state;
        }
        write_sweep_csv(f, rows, args.bits);
        out << "sweep: wrote " << rows.size() << " rows to " << args.out << '\n';
    }
    return ok;
}

int cmd_verify(const VerifyArgs &args, std::ostream &out, std::ostream &err) {
    VerifyConfig cfg;
    cfg.seed = args.seed;
    cfg.trials = args.trials;
    if(args.fault == "unweighted-d")
        cfg.fault = Fault::unweighted_D;
    else if(args.fault != "none") {
        err << "error: unknown fault `" << args.fault << "`\n";
        return verify_failed;
    }
    std::vector<SuiteReport> reports;
    try {
        reports = run_suites(args.suite, cfg);
    } catch(const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return verify_failed;
    }
    bool all = true;
    for(auto &rep : reports) {
        for(auto &c : rep.checks) {
            if(args.tol) {
                c.tolerance = *args.tol;
                c.pass = c.samples > 0 && c.max_deviation <= c.tolerance;
            }
            out << (c.pass ? "PASS " : "FAIL ") << rep.name << ": " << c.description << " max " << fmt(c.max_deviation)
                << " tol " << fmt(c.tolerance) << " (" << c.samples << " samples)\n";
        }
        all = all && rep.pass();
    }
    out << (all ? "verify: all checks passed\n" : "verify: FAILED\n");
    return all ? ok : verify_failed;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Anyonic entanglement measures: E, E_ACE and E_CE for bipartite anyonic states", "anyon-ent"};
    app.require_subcommand(1);

    ModelArgs model_args;
    auto *model_cmd = app.add_subcommand("model", "Parse a fusion-rule model and report its data");
    auto *mpath = model_cmd->add_option("--model", model_args.path, "Model file");
    model_cmd->add_option("--builtin", model_args.builtin, "Built-in model (fibonacci, ising)")->excludes(mpath);

    MeasureArgs measure_args;
    auto *measure_cmd = app.add_subcommand("measure", "Evaluate E_ACE, E_CE or E for one state");
    auto *spath = measure_cmd->add_option("--state", measure_args.state_path, "State file");
    measure_cmd->add_option("--builtin", measure_args.builder, "State builder: isotropic, mes, maximally-mixed")
        ->excludes(spath);
    auto *mm = measure_cmd->add_option("--model", measure_args.model.path, "Model file for --state");
    measure_cmd->add_option("--builtin-model", measure_args.model.builtin, "Built-in model for --state")->excludes(mm);
    measure_cmd->add_option("--n", measure_args.n, "Anyons per party (Fibonacci builders)");
    measure_cmd->add_option("--alpha", measure_args.alpha, "Isotropic mixing parameter");
    measure_cmd->add_option("--which", measure_args.which, "ace, ce or total")->capture_default_str();
    measure_cmd->add_option("--method", measure_args.method, "auto, closed, generic, fw or direct")->capture_default_str();
    measure_cmd->add_option("--channel", measure_args.channel,
                            "Apply a preset first: identity, charge-measure:A|B, random-local:<seed>[:A|B]");
    measure_cmd->add_option("--save-state", measure_args.save_state, "Write the measured state to a state file");
    measure_cmd->add_option("--seed", measure_args.seed, "Optimizer seed")->capture_default_str();
    measure_cmd->add_option("--tol", measure_args.tol, "Frank-Wolfe gap tolerance")->capture_default_str();
    measure_cmd->add_flag("--bits", measure_args.bits, "Report in bits instead of nats");

    SweepArgs sweep_args;
    auto *sweep_cmd = app.add_subcommand("sweep", "Isotropic-family sweep over alpha, written as CSV");
    sweep_cmd->add_option("--n", sweep_args.n, "Anyons per party")->capture_default_str();
    auto *single = sweep_cmd->add_option("--alpha", sweep_args.alpha, "Single alpha instead of a grid");
    sweep_cmd->add_option("--alpha-min", sweep_args.alpha_min, "Grid start")->capture_default_str()->excludes(single);
    sweep_cmd->add_option("--alpha-max", sweep_args.alpha_max, "Grid end")->capture_default_str()->excludes(single);
    sweep_cmd->add_option("--steps", sweep_args.steps, "Grid points")->capture_default_str()->excludes(single)
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--method", sweep_args.method, "closed, generic or fw")->capture_default_str();
    sweep_cmd->add_option("--out", sweep_args.out, "CSV output path (stdout when omitted)");
    sweep_cmd->add_option("--seed", sweep_args.seed, "Optimizer seed")->capture_default_str();
    sweep_cmd->add_option("--tol", sweep_args.tol, "Frank-Wolfe gap tolerance")->capture_default_str();
    sweep_cmd->add_flag("--bits", sweep_args.bits, "Report in bits instead of nats");

    VerifyArgs verify_args;
    auto *verify_cmd = app.add_subcommand("verify", "Randomized property suites");
    verify_cmd->add_option("--suite", verify_args.suite, "all, thm1, thm2, thm3, thm4, prop1, prop2, prop3, lemma1")
        ->capture_default_str();
    verify_cmd->add_option("--seed", verify_args.seed, "Seed")->capture_default_str();
    verify_cmd->add_option("--trials", verify_args.trials, "Random trials per suite")->capture_default_str();
    verify_cmd->add_option("--tol", verify_args.tol, "Override every check tolerance");
    verify_cmd->add_option("--inject-fault", verify_args.fault, "Corrupt the suites on purpose: none, unweighted-d")
        ->capture_default_str();

    std::vector<std::string> args;
    for(int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    try {
        app.parse(args);
    } catch(const CLI::ParseError &e) {
        return app.exit(e, out, err);
    }

    if(*model_cmd) return cmd_model(model_args, out, err);
    if(*measure_cmd) return cmd_measure(measure_args, out, err);
    if(*sweep_cmd) return cmd_sweep(sweep_args, out, err);
    return cmd_verify(verify_args, out, err);
}

} // namespace anyent::cli
