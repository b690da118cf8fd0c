#include "anyent/state_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace anyent {

namespace {

std::vector<std::string> split_ws(const std::string &line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    for(std::string tok; is >> tok;) out.push_back(tok);
    return out;
}

std::string strip_comment(const std::string &line) {
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string format_complex(cplx z) {
    std::string im = fmt(z.imag());
    if(im[0] != '-' && im[0] != '+') im = "+" + im;
    return fmt(z.real()) + im + "j";
}

cplx parse_complex(std::string_view token) {
    const std::string s(token);
    const char *p = s.c_str();
    char *end = nullptr;
    const double re = std::strtod(p, &end);
    if(end == p) throw std::invalid_argument("bad complex entry `" + s + "`");
    if(*end == '\0') return {re, 0.0};
    if(*end != '+' && *end != '-') throw std::invalid_argument("bad complex entry `" + s + "`");
    const char *q = end;
    const double im = std::strtod(q, &end);
    if(end == q || *end != 'j' || end[1] != '\0') throw std::invalid_argument("bad complex entry `" + s + "`");
    return {re, im};
}

void write_state(std::ostream &os, const AnyonicDensityMatrix &rho) {
    const auto &basis = rho.basis();
    const auto &model = basis.model();
    const auto &la = basis.layout_a(), &lb = basis.layout_b();
    os << "state " << model.name() << " A=" << format_charge_list(model, la.anyons)
       << " B=" << format_charge_list(model, lb.anyons);
    if(la.internal_dim != 1 || lb.internal_dim != 1) os << " internal=" << la.internal_dim << ',' << lb.internal_dim;
    os << '\n';
    for(ChargeId c = 0; c < basis.charge_count(); ++c) {
        const int n = basis.sector_dim(c);
        if(n == 0) continue;
        os << "sector c=" << model.charge_name(c) << '\n';
        os << "# rows/cols: (a, b, mu, i, j), j fastest\n";
        for(const auto &slot : basis.slots(c))
            os << "#   " << slot.offset << ".." << slot.offset + slot.size() - 1 << ": a="
               << model.charge_name(slot.key.a) << " b=" << model.charge_name(slot.key.b) << " mu=" << slot.key.mu
               << " i<" << slot.dim_a << " j<" << slot.dim_b << '\n';
        os << "dim " << n << '\n';
        const Matrix &m = rho.block(c);
        for(int r = 0; r < n; ++r) {
            for(int k = 0; k < n; ++k) os << (k ? " " : "") << format_complex(m(r, k));
            os << '\n';
        }
    }
}

std::string render_state(const AnyonicDensityMatrix &rho) {
    std::ostringstream os;
    write_state(os, rho);
    return os.str();
}

AnyonicDensityMatrix parse_state(std::string_view text, const std::function<ModelPtr(const std::string &)> &resolve) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    BasisPtr basis;
    std::vector<Matrix> blocks;
    std::vector<bool> seen;

    auto next_tokens = [&](std::vector<std::string> &toks) {
        while(std::getline(in, raw)) {
            ++line_no;
            toks = split_ws(strip_comment(raw));
            if(!toks.empty()) return true;
        }
        return false;
    };

    std::vector<std::string> toks;
    if(!next_tokens(toks)) throw StateFormatError("empty state file", 0);
    if(toks[0] != "state" || toks.size() < 4) throw StateFormatError("expected `state <model> A=<list> B=<list>`", line_no);
    ModelPtr model;
    try {
        model = resolve(toks[1]);
    } catch(const std::exception &e) {
        throw StateFormatError(e.what(), line_no);
    }
    if(!model) throw StateFormatError("unknown model `" + toks[1] + "`", line_no);
    std::vector<ChargeId> anyons_a, anyons_b;
    int internal_a = 1, internal_b = 1;
    bool have_a = false, have_b = false;
    try {
        for(std::size_t k = 2; k < toks.size(); ++k) {
            const auto &t = toks[k];
            if(t.rfind("A=", 0) == 0) {
                anyons_a = parse_charge_list(*model, t.substr(2));
                have_a = true;
            } else if(t.rfind("B=", 0) == 0) {
                anyons_b = parse_charge_list(*model, t.substr(2));
                have_b = true;
            } else if(t.rfind("internal=", 0) == 0) {
                const auto comma = t.find(',');
                if(comma == std::string::npos) throw std::invalid_argument("internal= needs two dimensions");
                internal_a = std::stoi(t.substr(9, comma - 9));
                internal_b = std::stoi(t.substr(comma + 1));
                if(internal_a < 1 || internal_b < 1) throw std::invalid_argument("internal dimensions must be positive");
            } else {
                throw std::invalid_argument("unexpected header token `" + t + "`");
            }
        }
        if(!have_a || !have_b) throw std::invalid_argument("header needs both A= and B=");
        basis = std::make_shared<const BipartiteBasis>(model, PartyLayout::make(*model, anyons_a, internal_a),
                                                       PartyLayout::make(*model, anyons_b, internal_b));
    } catch(const StateFormatError &) {
        throw;
    } catch(const std::exception &e) {
        throw StateFormatError(e.what(), line_no);
    }
    blocks = AnyonicDensityMatrix::zero(basis).blocks();
    seen.assign(blocks.size(), false);

    while(next_tokens(toks)) {
        if(toks[0] != "sector" || toks.size() != 2 || toks[1].rfind("c=", 0) != 0)
            throw StateFormatError("expected `sector c=<charge>`", line_no);
        ChargeId c = 0;
        try {
            c = model->charge(toks[1].substr(2));
        } catch(const std::exception &e) {
            throw StateFormatError(e.what(), line_no);
        }
        if(seen[c]) throw StateFormatError("sector " + toks[1] + " given twice", line_no);
        seen[c] = true;
        if(!next_tokens(toks) || toks[0] != "dim" || toks.size() != 2) throw StateFormatError("expected `dim <n>`", line_no);
        const int n = std::atoi(toks[1].c_str());
        if(n != basis->sector_dim(c))
            throw StateFormatError("sector " + model->charge_name(c) + " has dimension " +
                                       std::to_string(basis->sector_dim(c)) + ", file says " + toks[1],
                                   line_no);
        for(int r = 0; r < n; ++r) {
            if(!next_tokens(toks)) throw StateFormatError("unexpected end of file inside sector", line_no);
            if(int(toks.size()) != n) throw StateFormatError("row has " + std::to_string(toks.size()) + " entries, expected " + std::to_string(n), line_no);
            for(int k = 0; k < n; ++k) {
                try {
                    blocks[c](r, k) = parse_complex(toks[std::size_t(k)]);
                } catch(const std::exception &e) {
                    throw StateFormatError(e.what(), line_no);
                }
            }
        }
    }
    for(ChargeId c = 0; c < blocks.size(); ++c)
        if(!seen[c] && basis->sector_dim(c) > 0)
            throw StateFormatError("missing sector c=" + model->charge_name(c), line_no);
    return {basis, std::move(blocks)};
}

AnyonicDensityMatrix load_state(const std::string &path, const std::function<ModelPtr(const std::string &)> &resolve) {
    std::ifstream f(path);
    if(!f) throw StateFormatError("cannot open " + path, 0);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_state(ss.str(), resolve);
}

} // namespace anyent
