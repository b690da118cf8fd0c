#include "anyent/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

namespace anyent {

namespace {

std::string kind_prefix(ModelErrorKind kind) {
    switch(kind) {
        case ModelErrorKind::syntax: return "syntax error";
        case ModelErrorKind::missing_vacuum: return "missing vacuum";
        case ModelErrorKind::duplicate_charge: return "duplicate charge";
        case ModelErrorKind::unknown_charge: return "unknown charge";
        case ModelErrorKind::missing_fusion: return "missing fusion rule";
        case ModelErrorKind::vacuum_rule: return "vacuum rule violated";
        case ModelErrorKind::non_commutative: return "non-commutative fusion";
        case ModelErrorKind::associativity: return "associativity violated";
        case ModelErrorKind::invalid_dual: return "invalid dual";
        case ModelErrorKind::no_convergence: return "no convergence";
    }
    return "model error";
}

std::string with_line(ModelErrorKind kind, const std::string &what, int line) {
    std::string msg = kind_prefix(kind);
    if(line > 0) msg += " (line " + std::to_string(line) + ")";
    return msg + ": " + what;
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string tok;
    while(in >> tok) out.push_back(tok);
    return out;
}

} // namespace

ModelError::ModelError(ModelErrorKind kind, const std::string &what, int line)
    : std::runtime_error(with_line(kind, what, line)), kind_(kind), line_(line) {}

FusionTable::FusionTable(std::size_t charge_count) : n_(charge_count), data_(charge_count * charge_count * charge_count, 0) {}

std::vector<ChargeId> FusionTable::outcomes(ChargeId a, ChargeId b) const {
    std::vector<ChargeId> out;
    for(std::size_t c = 0; c < n_; ++c)
        if((*this)(a, b, ChargeId(c)) > 0) out.push_back(ChargeId(c));
    return out;
}

void check_associativity(const FusionTable &fusion) {
    const auto n = ChargeId(fusion.size());
    for(ChargeId a = 0; a < n; ++a)
        for(ChargeId b = 0; b < n; ++b)
            for(ChargeId c = 0; c < n; ++c)
                for(ChargeId d = 0; d < n; ++d) {
                    long left = 0, right = 0;
                    for(ChargeId e = 0; e < n; ++e) {
                        left += long(fusion(a, b, e)) * fusion(e, c, d);
                        right += long(fusion(b, c, e)) * fusion(a, e, d);
                    }
                    if(left != right) {
                        std::ostringstream os;
                        os << "(a,b,c,d) = (" << a << "," << b << "," << c << "," << d << "): " << left
                           << " != " << right;
                        throw ModelError(ModelErrorKind::associativity, os.str());
                    }
                }
}

std::vector<double> solve_qdims(const FusionTable &fusion) {
    const std::size_t n = fusion.size();
    if(n == 0) throw ModelError(ModelErrorKind::missing_vacuum, "empty fusion table");
    // M = I + sum_a N_a is primitive (row and column of the vacuum are positive),
    // so power iteration converges to the common Perron-Frobenius eigenvector.
    std::vector<double> M(n * n, 0.0);
    for(std::size_t b = 0; b < n; ++b) {
        M[b * n + b] += 1.0;
        for(std::size_t a = 0; a < n; ++a)
            for(std::size_t c = 0; c < n; ++c) M[b * n + c] += fusion(ChargeId(a), ChargeId(b), ChargeId(c));
    }
    std::vector<double> v(n, 1.0), w(n);
    constexpr double tol = 1e-12;
    constexpr int max_iter = 100000;
    bool converged = false;
    for(int it = 0; it < max_iter; ++it) {
        for(std::size_t b = 0; b < n; ++b) {
            double s = 0;
            for(std::size_t c = 0; c < n; ++c) s += M[b * n + c] * v[c];
            w[b] = s;
        }
        const double scale = w[0];
        double change = 0;
        for(std::size_t b = 0; b < n; ++b) {
            w[b] /= scale;
            change = std::max(change, std::abs(w[b] - v[b]));
        }
        v.swap(w);
        if(change <= tol * std::max(1.0, *std::max_element(v.begin(), v.end()))) {
            converged = true;
            break;
        }
    }
    if(!converged) throw ModelError(ModelErrorKind::no_convergence, "power iteration hit the iteration cap");

    // Least-squares eigenvalue of each N_a against the common vector.
    std::vector<double> d(n);
    const double vv = std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
    for(std::size_t a = 0; a < n; ++a) {
        double num = 0;
        for(std::size_t b = 0; b < n; ++b)
            for(std::size_t c = 0; c < n; ++c) num += v[b] * fusion(ChargeId(a), ChargeId(b), ChargeId(c)) * v[c];
        d[a] = num / vv;
    }
    d[0] = 1.0;
    for(std::size_t a = 0; a < n; ++a)
        for(std::size_t b = 0; b < n; ++b) {
            double rhs = 0;
            for(std::size_t c = 0; c < n; ++c) rhs += fusion(ChargeId(a), ChargeId(b), ChargeId(c)) * d[c];
            if(std::abs(d[a] * d[b] - rhs) > 1e-10)
                throw ModelError(ModelErrorKind::no_convergence,
                                 "quantum dimensions inconsistent with the fusion rules (residual " +
                                     std::to_string(std::abs(d[a] * d[b] - rhs)) + ")");
        }
    return d;
}

AnyonModel::AnyonModel(std::string name, std::vector<Charge> charges, FusionTable fusion, std::vector<ChargeId> duals)
    : name_(std::move(name)), charges_(std::move(charges)), fusion_(std::move(fusion)) {
    const auto n = ChargeId(charges_.size());
    if(n == 0 || charges_[0].name != "1")
        throw ModelError(ModelErrorKind::missing_vacuum, "charge 0 must be the vacuum \"1\"");
    std::set<std::string> seen;
    for(ChargeId a = 0; a < n; ++a) {
        if(charges_[a].id != a) throw ModelError(ModelErrorKind::syntax, "charge ids must be dense and ordered");
        if(!seen.insert(charges_[a].name).second) throw ModelError(ModelErrorKind::duplicate_charge, charges_[a].name);
    }
    if(fusion_.size() != n) throw ModelError(ModelErrorKind::syntax, "fusion table size does not match charge count");
    for(ChargeId a = 0; a < n; ++a)
        for(ChargeId c = 0; c < n; ++c) {
            const int expect = a == c ? 1 : 0;
            if(fusion_(kVacuum, a, c) != expect || fusion_(a, kVacuum, c) != expect)
                throw ModelError(ModelErrorKind::vacuum_rule, "fusion with vacuum must be trivial for " + charges_[a].name);
        }
    for(ChargeId a = 0; a < n; ++a)
        for(ChargeId b = 0; b < n; ++b)
            for(ChargeId c = 0; c < n; ++c)
                if(fusion_(a, b, c) != fusion_(b, a, c))
                    throw ModelError(ModelErrorKind::non_commutative,
                                     charges_[a].name + " x " + charges_[b].name + " -> " + charges_[c].name);
    check_associativity(fusion_);

    // Duals: inferred from N_{a abar}^1 = 1 unless declared, declared ones are checked.
    duals_.assign(n, kVacuum);
    for(ChargeId a = 0; a < n; ++a) {
        std::optional<ChargeId> found;
        for(ChargeId b = 0; b < n; ++b) {
            if(fusion_(a, b, kVacuum) == 0) continue;
            if(fusion_(a, b, kVacuum) != 1 || found)
                throw ModelError(ModelErrorKind::invalid_dual, "charge " + charges_[a].name + " has no unique dual");
            found = b;
        }
        if(!found) throw ModelError(ModelErrorKind::invalid_dual, "charge " + charges_[a].name + " has no dual");
        duals_[a] = *found;
    }
    if(!duals.empty()) {
        if(duals.size() != n) throw ModelError(ModelErrorKind::invalid_dual, "dual list size mismatch");
        for(ChargeId a = 0; a < n; ++a)
            if(duals[a] != duals_[a])
                throw ModelError(ModelErrorKind::invalid_dual, "declared dual of " + charges_[a].name +
                                                                   " disagrees with the fusion rules");
    }
    qdims_ = solve_qdims(fusion_);
    for(ChargeId a = 0; a < n; ++a)
        if(qdims_[a] < 1.0 - 1e-10)
            throw ModelError(ModelErrorKind::no_convergence, "quantum dimension below 1 for " + charges_[a].name);
}

ChargeId AnyonModel::charge(std::string_view name) const {
    for(const auto &c : charges_)
        if(c.name == name) return c.id;
    throw ModelError(ModelErrorKind::unknown_charge, std::string(name));
}

double AnyonModel::qdim_residual() const {
    double worst = 0;
    const auto n = ChargeId(size());
    for(ChargeId a = 0; a < n; ++a)
        for(ChargeId b = 0; b < n; ++b) {
            double rhs = 0;
            for(ChargeId c = 0; c < n; ++c) rhs += N(a, b, c) * qdims_[c];
            worst = std::max(worst, std::abs(qdims_[a] * qdims_[b] - rhs));
        }
    return worst;
}

bool AnyonModel::operator==(const AnyonModel &other) const {
    if(name_ != other.name_ || charges_.size() != other.charges_.size() || !(fusion_ == other.fusion_)) return false;
    for(std::size_t a = 0; a < charges_.size(); ++a)
        if(charges_[a].name != other.charges_[a].name) return false;
    return duals_ == other.duals_;
}

ModelPtr parse_model(std::string_view text) {
    std::optional<std::string> name;
    std::vector<std::string> charge_names;
    int charges_line = 0;
    struct FuseLine {
        std::string a, b;
        std::vector<std::pair<std::string, int>> outs;
        int line;
    };
    std::vector<FuseLine> fuses;
    std::vector<std::tuple<std::string, std::string, int>> dual_decls;

    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while(std::getline(in, raw)) {
        ++lineno;
        if(auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        auto toks = split_ws(raw);
        if(toks.empty()) continue;
        const auto &kw = toks[0];
        if(kw == "model") {
            if(toks.size() != 2) throw ModelError(ModelErrorKind::syntax, "expected `model <name>`", lineno);
            if(name) throw ModelError(ModelErrorKind::syntax, "duplicate `model` line", lineno);
            name = toks[1];
        } else if(kw == "charges") {
            if(toks.size() < 2) throw ModelError(ModelErrorKind::syntax, "expected at least one charge", lineno);
            if(!charge_names.empty()) throw ModelError(ModelErrorKind::syntax, "duplicate `charges` line", lineno);
            charge_names.assign(toks.begin() + 1, toks.end());
            charges_line = lineno;
        } else if(kw == "fuse") {
            if(toks.size() < 5 || toks[3] != "->")
                throw ModelError(ModelErrorKind::syntax, "expected `fuse <a> <b> -> <c>:<mult> ...`", lineno);
            FuseLine f{toks[1], toks[2], {}, lineno};
            for(std::size_t k = 4; k < toks.size(); ++k) {
                const auto &t = toks[k];
                const auto colon = t.find(':');
                std::string c = t.substr(0, colon);
                int mult = 1;
                if(colon != std::string::npos) {
                    const auto m = t.substr(colon + 1);
                    if(m.empty() || !std::all_of(m.begin(), m.end(), [](unsigned char ch) { return std::isdigit(ch); }))
                        throw ModelError(ModelErrorKind::syntax, "bad multiplicity in `" + t + "`", lineno);
                    mult = std::stoi(m);
                }
                if(c.empty() || mult < 1) throw ModelError(ModelErrorKind::syntax, "bad fusion outcome `" + t + "`", lineno);
                f.outs.emplace_back(c, mult);
            }
            fuses.push_back(std::move(f));
        } else if(kw == "dual") {
            if(toks.size() != 2) throw ModelError(ModelErrorKind::syntax, "expected `dual <a>=<b>`", lineno);
            const auto eq = toks[1].find('=');
            if(eq == std::string::npos || eq == 0 || eq + 1 == toks[1].size())
                throw ModelError(ModelErrorKind::syntax, "expected `dual <a>=<b>`", lineno);
            dual_decls.emplace_back(toks[1].substr(0, eq), toks[1].substr(eq + 1), lineno);
        } else {
            throw ModelError(ModelErrorKind::syntax, "unknown directive `" + kw + "`", lineno);
        }
    }
    if(!name) throw ModelError(ModelErrorKind::syntax, "missing `model` line");
    if(charge_names.empty()) throw ModelError(ModelErrorKind::syntax, "missing `charges` line");

    // Vacuum first, remaining charges keep their declaration order.
    auto vac = std::find(charge_names.begin(), charge_names.end(), "1");
    if(vac == charge_names.end()) throw ModelError(ModelErrorKind::missing_vacuum, "no charge named 1", charges_line);
    std::rotate(charge_names.begin(), vac, vac + 1);
    std::map<std::string, ChargeId> ids;
    std::vector<Charge> charges;
    for(const auto &cn : charge_names) {
        if(!ids.emplace(cn, ChargeId(charges.size())).second)
            throw ModelError(ModelErrorKind::duplicate_charge, cn, charges_line);
        charges.push_back({ChargeId(charges.size()), cn});
    }
    const auto n = ChargeId(charges.size());
    auto lookup = [&](const std::string &cn, int line) {
        auto it = ids.find(cn);
        if(it == ids.end()) throw ModelError(ModelErrorKind::unknown_charge, cn, line);
        return it->second;
    };

    FusionTable table(n);
    std::vector<int> defined_at(std::size_t(n) * n, 0);
    for(ChargeId a = 0; a < n; ++a) {
        table.set(kVacuum, a, a, 1);
        table.set(a, kVacuum, a, 1);
    }
    for(const auto &f : fuses) {
        const auto a = lookup(f.a, f.line), b = lookup(f.b, f.line);
        std::vector<int> row(n, 0);
        for(const auto &[cn, mult] : f.outs) {
            const auto c = lookup(cn, f.line);
            if(row[c] != 0) throw ModelError(ModelErrorKind::syntax, "outcome " + cn + " listed twice", f.line);
            row[c] = mult;
        }
        if(a == kVacuum || b == kVacuum) {
            const auto other = a == kVacuum ? b : a;
            for(ChargeId c = 0; c < n; ++c)
                if(row[c] != (c == other ? 1 : 0))
                    throw ModelError(ModelErrorKind::vacuum_rule, "fusion with 1 must be trivial", f.line);
            continue;
        }
        if(defined_at[std::size_t(a) * n + b] != 0)
            throw ModelError(ModelErrorKind::syntax, "duplicate rule for " + f.a + " " + f.b, f.line);
        defined_at[std::size_t(a) * n + b] = f.line;
        for(ChargeId c = 0; c < n; ++c) table.set(a, b, c, row[c]);
    }
    // An unstated ordered pair takes its mirror; stated mirrors must agree.
    for(ChargeId a = 1; a < n; ++a)
        for(ChargeId b = 1; b < n; ++b) {
            const int here = defined_at[std::size_t(a) * n + b];
            const int mirror = defined_at[std::size_t(b) * n + a];
            if(here == 0 && mirror == 0)
                throw ModelError(ModelErrorKind::missing_fusion, charges[a].name + " x " + charges[b].name);
            if(here == 0)
                for(ChargeId c = 0; c < n; ++c) table.set(a, b, c, table(b, a, c));
            else if(mirror != 0)
                for(ChargeId c = 0; c < n; ++c)
                    if(table(a, b, c) != table(b, a, c))
                        throw ModelError(ModelErrorKind::non_commutative,
                                         charges[a].name + " x " + charges[b].name, std::max(here, mirror));
        }
    try {
        check_associativity(table);
    } catch(const ModelError &e) {
        throw ModelError(ModelErrorKind::associativity, e.what());
    }

    std::vector<ChargeId> duals;
    if(!dual_decls.empty()) {
        std::vector<std::optional<ChargeId>> decl(n);
        for(const auto &[x, y, line] : dual_decls) {
            const auto a = lookup(x, line), b = lookup(y, line);
            for(auto [p, q] : {std::pair{a, b}, std::pair{b, a}}) {
                if(decl[p] && *decl[p] != q)
                    throw ModelError(ModelErrorKind::invalid_dual, "conflicting dual for " + charges[p].name, line);
                decl[p] = q;
            }
            if(table(a, b, kVacuum) != 1)
                throw ModelError(ModelErrorKind::invalid_dual, x + " x " + y + " does not contain 1 once", line);
        }
        // Undeclared charges default to self-dual.
        for(ChargeId a = 0; a < n; ++a) duals.push_back(decl[a].value_or(a));
    }
    return std::make_shared<const AnyonModel>(*name, std::move(charges), std::move(table), std::move(duals));
}

ModelPtr load_model(const std::string &path) {
    std::ifstream in(path);
    if(!in) throw std::runtime_error("cannot open model file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

std::string render_model(const AnyonModel &model) {
    std::ostringstream os;
    os << "model " << model.name() << "\n";
    os << "charges";
    for(const auto &c : model.charges()) os << ' ' << c.name;
    os << "\n";
    const auto n = ChargeId(model.size());
    for(ChargeId a = 1; a < n; ++a)
        for(ChargeId b = a; b < n; ++b) {
            os << "fuse " << model.charge_name(a) << ' ' << model.charge_name(b) << " ->";
            for(auto c : model.fusion().outcomes(a, b)) os << ' ' << model.charge_name(c) << ':' << model.N(a, b, c);
            os << "\n";
        }
    for(ChargeId a = 1; a < n; ++a)
        if(model.dual(a) != a && a < model.dual(a))
            os << "dual " << model.charge_name(a) << '=' << model.charge_name(model.dual(a)) << "\n";
    return os.str();
}

std::string builtin_model_text(std::string_view name) {
    if(name == "fibonacci")
        return "# Fibonacci anyons: tau x tau = 1 + tau\n"
               "model fibonacci\n"
               "charges 1 tau\n"
               "fuse tau tau -> 1:1 tau:1\n";
    if(name == "ising")
        return "# Ising anyons\n"
               "model ising\n"
               "charges 1 sigma psi\n"
               "fuse sigma sigma -> 1:1 psi:1\n"
               "fuse sigma psi -> sigma:1\n"
               "fuse psi psi -> 1:1\n";
    throw std::invalid_argument("unknown builtin model `" + std::string(name) + "` (expected fibonacci or ising)");
}

ModelPtr builtin_model(std::string_view name) { return parse_model(builtin_model_text(name)); }

std::vector<FusionPath> enumerate_paths(const AnyonModel &model, const std::vector<ChargeId> &leaves, ChargeId total) {
    if(leaves.empty()) throw std::invalid_argument("enumerate_paths: no leaves");
    for(auto l : leaves)
        if(l >= model.size()) throw ModelError(ModelErrorKind::unknown_charge, "id " + std::to_string(l));
    if(total >= model.size()) throw ModelError(ModelErrorKind::unknown_charge, "id " + std::to_string(total));

    std::vector<FusionPath> out;
    FusionPath cur{leaves, {leaves[0]}, {}};
    const auto n = ChargeId(model.size());
    auto recurse = [&](auto &&self, std::size_t k) -> void {
        if(k == leaves.size()) {
            if(cur.intermediates.back() == total) out.push_back(cur);
            return;
        }
        const auto prev = cur.intermediates.back();
        for(ChargeId e = 0; e < n; ++e) {
            const int mult = model.N(prev, leaves[k], e);
            for(int mu = 1; mu <= mult; ++mu) {
                cur.intermediates.push_back(e);
                cur.vertex_mults.push_back(mu);
                self(self, k + 1);
                cur.intermediates.pop_back();
                cur.vertex_mults.pop_back();
            }
        }
    };
    recurse(recurse, 1);
    std::sort(out.begin(), out.end(), [](const FusionPath &x, const FusionPath &y) {
        if(x.intermediates != y.intermediates) return x.intermediates < y.intermediates;
        return x.vertex_mults < y.vertex_mults;
    });
    return out;
}

std::vector<ChargeId> parse_charge_list(const AnyonModel &model, std::string_view csv) {
    std::vector<ChargeId> out;
    std::string item;
    std::istringstream in{std::string(csv)};
    while(std::getline(in, item, ',')) {
        if(item.empty()) throw ModelError(ModelErrorKind::syntax, "empty charge in list `" + std::string(csv) + "`");
        out.push_back(model.charge(item));
    }
    if(out.empty()) throw ModelError(ModelErrorKind::syntax, "empty charge list");
    return out;
}

std::string format_charge_list(const AnyonModel &model, const std::vector<ChargeId> &charges) {
    std::string s;
    for(std::size_t k = 0; k < charges.size(); ++k) {
        if(k) s += ',';
        s += model.charge_name(charges[k]);
    }
    return s;
}

} // namespace anyent
