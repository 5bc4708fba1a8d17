#include "cdhom/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cdhom {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace((unsigned char)s[b])) ++b;
    while (e > b && std::isspace((unsigned char)s[e - 1])) --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& s, int line) {
    const std::string t = trim(s);
    if (t.empty()) throw ConfigError("empty numeric value", line);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        throw ConfigError("bad numeric value '" + t + "'", line);
    return v;
}

int parse_int(const std::string& s, int line) {
    const double v = parse_number(s, line);
    const int i = (int)v;
    if ((double)i != v) throw ConfigError("expected integer, got '" + s + "'", line);
    return i;
}

bool parse_bool(const std::string& s, int line) {
    const std::string t = trim(s);
    if (t == "true" || t == "1" || t == "on") return true;
    if (t == "false" || t == "0" || t == "off") return false;
    throw ConfigError("bad boolean value '" + t + "'", line);
}

// name(arg, arg, ...) with nested parentheses allowed inside args.
struct Call {
    std::string name;
    std::vector<std::string> args;
};

Call parse_call(const std::string& expr, int line) {
    const std::string t = trim(expr);
    const std::size_t open = t.find('(');
    if (open == std::string::npos || t.back() != ')')
        throw ConfigError("expected name(...) expression, got '" + t + "'", line);
    Call c;
    c.name = trim(t.substr(0, open));
    const std::string body = t.substr(open + 1, t.size() - open - 2);
    int depth = 0;
    std::string cur;
    for (char ch : body) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == ',' && depth == 0) {
            c.args.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!trim(cur).empty() || !c.args.empty()) c.args.push_back(trim(cur));
    if (depth != 0) throw ConfigError("unbalanced parentheses in '" + t + "'", line);
    return c;
}

Profile profile_from_call(const Call& c, int line) {
    if (c.name == "constant") {
        if (c.args.size() != 1)
            throw ConfigError("constant(...) takes one argument", line);
        return Profile::constant(parse_number(c.args[0], line));
    }
    if (c.name == "sin1d") {
        if (c.args.size() != 2)
            throw ConfigError("sin1d(mean, amplitude) takes two arguments", line);
        return Profile::sinusoid(parse_number(c.args[0], line),
                                 parse_number(c.args[1], line));
    }
    if (c.name == "pwc") {
        if (c.args.empty())
            throw ConfigError("pwc(...) needs at least one value", line);
        std::vector<double> v;
        v.reserve(c.args.size());
        for (const auto& a : c.args) v.push_back(parse_number(a, line));
        return Profile::piecewise(std::move(v));
    }
    throw ConfigError("unknown profile '" + c.name + "'", line);
}

CoefficientField coefficient_from_expr(const std::string& expr, int dim,
                                       int line) {
    const Call c = parse_call(expr, line);
    try {
        if (c.name == "constant") {
            if (c.args.size() == 1)
                return CoefficientField::constant(
                    dim, Mat2::scaled_identity(dim, parse_number(c.args[0], line)));
            if (c.args.size() == 4) {
                if (dim != 2)
                    throw ConfigError("constant(a11,a12,a21,a22) needs dim=2", line);
                return CoefficientField::constant(
                    2, Mat2::full(parse_number(c.args[0], line),
                                  parse_number(c.args[1], line),
                                  parse_number(c.args[2], line),
                                  parse_number(c.args[3], line)));
            }
            throw ConfigError("constant(...) takes 1 or 4 arguments", line);
        }
        if (c.name == "sin1d" || c.name == "pwc") {
            if (dim != 1)
                throw ConfigError("scalar profile coefficient needs dim=1 "
                                  "(use diag(...) in 2D)",
                                  line);
            return CoefficientField::diagonal(1, profile_from_call(c, line));
        }
        if (c.name == "diag") {
            if (dim != 2) throw ConfigError("diag(...) needs dim=2", line);
            if (c.args.size() != 2)
                throw ConfigError("diag(p1, p2) takes two profiles", line);
            return CoefficientField::diagonal(
                2, profile_from_call(parse_call(c.args[0], line), line),
                profile_from_call(parse_call(c.args[1], line), line));
        }
        if (c.name == "layered") {
            if (dim != 2) throw ConfigError("layered(...) needs dim=2", line);
            if (c.args.size() != 4)
                throw ConfigError("layered(p11, p12, p21, p22) takes four profiles",
                                  line);
            return CoefficientField::layered(
                profile_from_call(parse_call(c.args[0], line), line),
                profile_from_call(parse_call(c.args[1], line), line),
                profile_from_call(parse_call(c.args[2], line), line),
                profile_from_call(parse_call(c.args[3], line), line));
        }
        if (c.name == "tabulated") {
            if (c.args.size() != 1)
                throw ConfigError("tabulated(path) takes one argument", line);
            CoefficientField f = CoefficientField::tabulated_from_file(c.args[0]);
            if (f.dim() != dim)
                throw ConfigError("tabulated file dimension mismatch", line);
            return f;
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad coefficient: ") + e.what(), line);
    }
    throw ConfigError("unknown coefficient '" + c.name + "'", line);
}

std::vector<double> parse_list(const std::string& s, int line) {
    std::vector<double> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, ',')) out.push_back(parse_number(cur, line));
    if (out.empty()) throw ConfigError("empty list", line);
    return out;
}

struct RawEntry {
    std::string section, key, value;
    int line;
};

std::vector<RawEntry> tokenize(const std::string& text) {
    std::vector<RawEntry> entries;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("malformed section header '" + line + "'",
                                  line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("empty section name", line_no);
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value, got '" + line + "'", line_no);
        RawEntry e;
        e.section = section;
        e.key = trim(line.substr(0, eq));
        e.value = trim(line.substr(eq + 1));
        e.line = line_no;
        if (e.key.empty()) throw ConfigError("empty key", line_no);
        if (e.section.empty())
            throw ConfigError("key '" + e.key + "' outside any [section]", line_no);
        entries.push_back(e);
    }
    return entries;
}

void apply_entry(ScenarioConfig& cfg, const RawEntry& e) {
    const std::string& s = e.section;
    const std::string& k = e.key;
    const std::string& v = e.value;
    const int ln = e.line;
    if (s == "run") {
        if (k == "mode") {
            if (v == "cell") cfg.mode = Mode::cell;
            else if (v == "eps" || v == "simulate") cfg.mode = Mode::eps;
            else if (v == "stefan") cfg.mode = Mode::stefan;
            else if (v == "compare") cfg.mode = Mode::compare;
            else if (v == "sweep") cfg.mode = Mode::sweep;
            else throw ConfigError("unknown mode '" + v + "'", ln);
            return;
        }
    } else if (s == "mesh") {
        if (k == "dim") { cfg.mesh.dim = parse_int(v, ln); return; }
        if (k == "n") { cfg.mesh.n = parse_int(v, ln); return; }
        if (k == "a") { cfg.mesh.a = parse_number(v, ln); return; }
        if (k == "b") { cfg.mesh.b = parse_number(v, ln); return; }
    } else if (s == "coefficients") {
        if (k == "a") { cfg.coeff_a = v; return; }
        if (k == "b") { cfg.coeff_b = v; return; }
    } else if (s == "params") {
        if (k == "eps") { cfg.params.eps = parse_number(v, ln); return; }
        if (k == "delta") { cfg.params.delta = parse_number(v, ln); return; }
        if (k == "alpha") { cfg.params.alpha = parse_number(v, ln); return; }
        if (k == "lambda") { cfg.params.lambda = parse_number(v, ln); return; }
        if (k == "r") { cfg.params.r = parse_number(v, ln); return; }
        if (k == "tau") { cfg.params.tau = parse_number(v, ln); return; }
        if (k == "t_end") { cfg.params.t_end = parse_number(v, ln); return; }
        if (k == "mass_lumping") {
            cfg.params.mass_lumping = parse_bool(v, ln);
            return;
        }
    } else if (s == "initial") {
        if (k == "kind") {
            if (v == "step1d") cfg.initial.kind = InitSpec::Kind::step_1d;
            else if (v == "sinefront2d")
                cfg.initial.kind = InitSpec::Kind::sine_front_2d;
            else if (v == "uniform") cfg.initial.kind = InitSpec::Kind::uniform;
            else if (v == "file") cfg.initial.kind = InitSpec::Kind::file;
            else throw ConfigError("unknown initial kind '" + v + "'", ln);
            return;
        }
        if (k == "threshold") { cfg.initial.threshold = parse_number(v, ln); return; }
        if (k == "amplitude") { cfg.initial.amplitude = parse_number(v, ln); return; }
        if (k == "cu") { cfg.initial.cu = parse_number(v, ln); return; }
        if (k == "cv") { cfg.initial.cv = parse_number(v, ln); return; }
        if (k == "cw") { cfg.initial.cw = parse_number(v, ln); return; }
        if (k == "path") { cfg.initial.path = v; return; }
    } else if (s == "output") {
        if (k == "dir") { cfg.output.dir = v; return; }
        if (k == "record_interval") {
            cfg.output.record_interval = parse_number(v, ln);
            return;
        }
    } else if (s == "cell") {
        if (k == "n") { cfg.cell.n = parse_int(v, ln); return; }
        if (k == "n_quad") { cfg.cell.n_quad = parse_int(v, ln); return; }
        if (k == "method") {
            if (v == "auto") cfg.cell.method = HomogenizeOptions::Method::automatic;
            else if (v == "numeric")
                cfg.cell.method = HomogenizeOptions::Method::numeric;
            else if (v == "closed")
                cfg.cell.method = HomogenizeOptions::Method::closed;
            else throw ConfigError("unknown cell method '" + v + "'", ln);
            return;
        }
    } else if (s == "stefan") {
        if (k == "sigma_reg") {
            cfg.stefan.sigma_reg = parse_number(v, ln);
            return;
        }
    } else if (s == "sweep") {
        if (k == "eps_list") {
            cfg.eps_list = parse_list(v, ln);
            return;
        }
    } else {
        throw ConfigError("unknown section [" + s + "]", ln);
    }
    throw ConfigError("unknown key '" + k + "' in [" + s + "]", ln);
}

}  // namespace

ScenarioConfig ScenarioConfig::parse_text(const std::string& text,
                                          const std::vector<std::string>& overrides) {
    ScenarioConfig cfg;
    for (const RawEntry& e : tokenize(text)) apply_entry(cfg, e);
    for (const std::string& ov : overrides) {
        const std::size_t eq = ov.find('=');
        const std::size_t dot = ov.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq)
            throw ConfigError("override must look like section.key=value, got '" +
                              ov + "'");
        RawEntry e;
        e.section = trim(ov.substr(0, dot));
        e.key = trim(ov.substr(dot + 1, eq - dot - 1));
        e.value = trim(ov.substr(eq + 1));
        e.line = 0;
        apply_entry(cfg, e);
    }
    return cfg;
}

ScenarioConfig ScenarioConfig::parse_file(const std::string& path,
                                          const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), overrides);
}

void ScenarioConfig::validate() const {
    if (mesh.dim != 1 && mesh.dim != 2)
        throw ConfigError("mesh.dim must be 1 or 2");
    if (mesh.n < 2) throw ConfigError("mesh.n must be >= 2");
    if (mesh.dim == 1 && !(mesh.b > mesh.a))
        throw ConfigError("mesh needs b > a");
    if (mode != Mode::cell) {
        try {
            params.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (initial.kind == InitSpec::Kind::file) {
        std::ifstream probe(initial.path);
        if (!probe)
            throw ConfigError("initial data file '" + initial.path +
                              "' does not exist");
    }
    if (initial.kind == InitSpec::Kind::step_1d && mesh.dim != 1)
        throw ConfigError("initial kind step1d needs mesh.dim = 1");
    if (initial.kind == InitSpec::Kind::sine_front_2d && mesh.dim != 2)
        throw ConfigError("initial kind sinefront2d needs mesh.dim = 2");
    if (mode == Mode::sweep) {
        if (eps_list.empty())
            throw ConfigError("sweep mode needs sweep.eps_list");
        for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
            if (!(eps_list[i] > eps_list[i + 1]))
                throw ConfigError("sweep.eps_list must be strictly descending");
        for (double e : eps_list)
            if (!(e > 0.0)) throw ConfigError("sweep.eps_list entries must be > 0");
    }
    if (!(output.record_interval > 0.0))
        throw ConfigError("output.record_interval must be > 0");
    if (!(stefan.sigma_reg > 0.0))
        throw ConfigError("stefan.sigma_reg must be > 0");
    if (cell.n < 4) throw ConfigError("cell.n must be >= 4");
    if (cell.n_quad < 16) throw ConfigError("cell.n_quad must be >= 16");
    make_coeff_a();
    make_coeff_b();
}

CoefficientField ScenarioConfig::make_coeff_a() const {
    return coefficient_from_expr(coeff_a, mesh.dim, 0);
}

CoefficientField ScenarioConfig::make_coeff_b() const {
    return coefficient_from_expr(coeff_b, mesh.dim, 0);
}

Mesh ScenarioConfig::make_mesh() const {
    if (mesh.dim == 1) return build_interval_mesh(mesh.n, mesh.a, mesh.b);
    return build_crisscross_mesh(mesh.n);
}

Profile make_profile(const std::string& expr) {
    return profile_from_call(parse_call(expr, 0), 0);
}

CoefficientField make_coefficient(const std::string& expr, int dim) {
    return coefficient_from_expr(expr, dim, 0);
}

}  // namespace cdhom
