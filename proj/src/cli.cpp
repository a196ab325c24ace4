#include "qplane/cli.hpp"

#include "qplane/algebra_json.hpp"
#include "qplane/funalg.hpp"
#include "qplane/l2grid.hpp"
#include "qplane/parser.hpp"
#include "qplane/representation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace qplane {

using nlohmann::json;

namespace {

/// Bad input of any kind: reported with exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::optional<double> q;
    double tol = 1e-10;
    std::string out_path;
    bool as_json = false;
};

void add_common(CLI::App* cmd, Common& c, bool json_flag = true) {
    cmd->add_option("--q", c.q, "deformation parameter in (0,1)");
    cmd->add_option("--tol", c.tol, "check tolerance")->capture_default_str();
    cmd->add_option("--out", c.out_path, "write the output to this file");
    if (json_flag) cmd->add_flag("--json", c.as_json, "emit JSON");
}

double checked_q(double q) {
    if (!(q > 0.0 && q < 1.0)) throw UsageError("q must lie in (0,1), got " + format_double(q));
    return q;
}

/// Inline JSON when the argument starts with '{', otherwise a file path.
json load_json(const std::string& arg) {
    std::string text = arg;
    const auto first = arg.find_first_not_of(" \t\n");
    if (first == std::string::npos || arg[first] != '{') {
        std::ifstream in(arg);
        if (!in) throw UsageError("cannot read " + arg);
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw UsageError("invalid JSON in " + arg + ": " + e.what());
    }
}

json envelope(const std::string& command) { return {{"schema_version", kSchemaVersion}, {"command", command}}; }

std::string format_complex(Complex z) {
    if (z.imag() == 0.0) return format_double(z.real());
    return format_double(z.real()) + (z.imag() < 0 ? " - " : " + ") + format_double(std::abs(z.imag())) + "i";
}

json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

// ---------------------------------------------------------------------------

int cmd_normalize(const std::string& expr, const Common& c, std::string& text) {
    const AlgebraElement e = parse_element(expr);
    json doc = envelope("normalize");
    doc["input"] = expr;
    if (c.q) {
        const NumericElement n = evaluate(e, checked_q(*c.q));
        text = to_string(n);
        doc["q"] = *c.q;
        doc["element"] = to_json(n);
    } else {
        text = to_string(e);
        doc["element"] = to_json(e);
    }
    doc["normal_form"] = text;
    if (c.as_json) text = doc.dump(2);
    return exit_ok;
}

int cmd_rep_check(const std::string& path, int budget, const Common& c, std::string& text) {
    json cfg_doc = load_json(path);
    if (c.q && cfg_doc.is_object()) cfg_doc["q"] = checked_q(*c.q);
    const RepConfig cfg = rep_config_from_json(cfg_doc);
    const RepOperators rep = build_rep(cfg);

    bool ok = true;
    json relations = json::array();
    for (const auto& r : relation_residuals(rep)) {
        ok = ok && r.passed(c.tol);
        relations.push_back(to_json(r, c.tol));
    }
    const AuditReport audit = wellbehaved_audit(rep);
    ok = ok && audit.passed(c.tol);
    const FaithfulnessReport faith = faithfulness_probe(rep, budget);

    json doc = envelope("rep-check");
    doc["config"] = to_json(cfg);
    doc["dimension"] = rep.dim();
    doc["tolerance"] = c.tol;
    doc["relations"] = relations;
    doc["audit"] = to_json(audit, c.tol);
    doc["faithfulness"] = to_json(faith);
    doc["passed"] = ok;
    text = doc.dump(2);
    return ok ? exit_ok : exit_check_failed;
}

GridConfig load_grid_config(const std::string& path, const Common& c) {
    json doc = load_json(path);
    if (c.q && doc.is_object()) doc["q"] = checked_q(*c.q);
    return grid_config_from_json(doc);
}

int cmd_grid_check(const std::string& path, const Common& c, std::string& text) {
    const QGrid grid = build_grid(load_grid_config(path, c));
    const QInvarianceReport inv = check_q_invariance(grid);
    bool ok = inv.passed() && inv.sigma_unit;
    json relations = json::array();
    for (const auto& r : relation_residuals(grid)) {
        ok = ok && r.passed(c.tol);
        relations.push_back(to_json(r, c.tol));
    }
    json isometries = json::array();
    for (const auto& r : partial_isometry_checks(grid)) {
        ok = ok && r.passed(c.tol);
        isometries.push_back(to_json(r, c.tol));
    }
    const Decomposition d = decompose(grid);
    json doc = envelope("grid-check");
    doc["config"] = to_json(grid.config);
    doc["points"] = {{"atom00", d.atom00.size()}, {"nu_delta0", d.nu_delta0.size()}, {"sigma_mu", d.sigma_mu.size()}};
    doc["tolerance"] = c.tol;
    doc["q_invariance"] = to_json(inv);
    doc["relations"] = relations;
    doc["partial_isometries"] = isometries;
    doc["passed"] = ok;
    text = doc.dump(2);
    return ok ? exit_ok : exit_check_failed;
}

bool is_pure(const FunElement& f) {
    return std::all_of(f.terms().begin(), f.terms().end(), [](const auto& t) { return t.first == Bidegree{0, 0}; });
}

int cmd_norm(const std::string& element_path, const std::string& grid_path, int max_iterations, const Common& c,
             std::string& text) {
    const GridConfig cfg = load_grid_config(grid_path, c);
    const FunElement f = fun_element_from_json(load_json(element_path), cfg.q);
    const QGrid grid = build_grid(cfg);
    PowerOptions options;
    options.tolerance = c.tol;
    options.max_iterations = max_iterations;
    const NormResult r = operator_norm(f, grid, options);

    json doc = envelope("norm");
    doc["q"] = cfg.q;
    doc["grid_points"] = grid.size();
    doc["norm"] = r.value;
    doc["iterations"] = r.iterations;
    doc["converged"] = r.converged;
    doc["residual"] = r.residual;
    std::ostringstream s;
    s << "norm " << format_double(r.value) << "\n";
    if (is_pure(f)) {
        const double sup = grid_sup(f, grid);
        doc["grid_sup"] = sup;
        s << "grid_sup " << format_double(sup) << "\n";
    }
    s << "iterations " << r.iterations << (r.converged ? "" : " (not converged, last iterate shown)") << "\n";
    text = c.as_json ? doc.dump(2) : s.str();
    return r.converged ? exit_ok : exit_check_failed;
}

int cmd_character(const std::string& element_path, const Common& c, std::string& text) {
    const double q = checked_q(c.q.value_or(0.5));
    const Complex v = character_origin(fun_element_from_json(load_json(element_path), q));
    json doc = envelope("character");
    doc["value"] = complex_json(v);
    text = c.as_json ? doc.dump(2) : format_complex(v);
    return exit_ok;
}

NormalMonomial monomial_of(const Word& w) {
    if (!redex_positions(w).empty()) throw UsageError("'" + to_string(w) + "' is not a normal monomial z1^k z1'^l z2^m z2'^n");
    NormalMonomial m;
    for (Letter l : w) switch (l) {
            case Letter::z1: ++m.k; break;
            case Letter::z1_star: ++m.l; break;
            case Letter::z2: ++m.m; break;
            case Letter::z2_star: ++m.n; break;
        }
    return m;
}

std::pair<double, double> parse_point(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError("--at expects s,t but got '" + text + "'");
    try {
        std::size_t used_s = 0, used_t = 0;
        const std::string ss = text.substr(0, comma), ts = text.substr(comma + 1);
        const double s = std::stod(ss, &used_s), t = std::stod(ts, &used_t);
        if (used_s != ss.size() || used_t != ts.size()) throw std::invalid_argument(text);
        if (s < 0.0 || t < 0.0) throw UsageError("--at coordinates must be non-negative");
        return {s, t};
    } catch (const std::logic_error&) {
        throw UsageError("--at expects s,t but got '" + text + "'");
    }
}

int cmd_p_function(const std::string& word_text, const std::vector<std::string>& points, const std::string& grid_path,
                   const Common& c, std::string& text) {
    const NormalMonomial mono = monomial_of(parse_word(word_text));
    double q = checked_q(c.q.value_or(0.5));
    std::optional<GridConfig> cfg;
    if (!grid_path.empty()) {
        cfg = load_grid_config(grid_path, c);
        q = cfg->q;
    }
    const MultiplierFunction p = word_to_fun(mono, q);

    json doc = envelope("p-function");
    doc["monomial"] = to_string(mono);
    doc["q"] = q;
    doc["bidegree"] = {p.n, p.m};
    std::ostringstream s;
    s << "bidegree (" << p.n << "," << p.m << ")\n";
    json values = json::array();
    for (const auto& pt : points) {
        const auto [x, y] = parse_point(pt);
        const Complex v = p.p(x, y);
        values.push_back({{"s", x}, {"t", y}, {"value", complex_json(v)}});
        s << "p(" << format_double(x) << "," << format_double(y) << ") = " << format_complex(v) << "\n";
    }
    doc["values"] = values;
    int code = exit_ok;
    if (cfg) {
        const QGrid grid = build_grid(*cfg);
        const GridGenerators gens = generator_operators(grid);
        const ComplexSparseMatrix word = word_matrix(gens, mono.word()).cast<Complex>();
        const Mask cols = grid.interior_mask(mono.degree());
        const double diff = scaled_column_difference(to_operator(p, grid), word, cols);
        const bool ok = diff <= c.tol;
        doc["grid_check"] = {{"difference", diff}, {"columns", count(cols)}, {"passed", ok}};
        s << "grid difference " << format_double(diff) << " on " << count(cols) << " interior points"
          << (ok ? "" : " FAILED") << "\n";
        if (!ok) code = exit_check_failed;
    }
    text = c.as_json ? doc.dump(2) : s.str();
    return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tools for the quantum complex plane: normal forms, representation audits, grid checks and norms", "qplane"};
    app.require_subcommand(1);

    Common common;
    std::string expr, config, element, grid;
    int budget = 3;
    int max_iterations = PowerOptions{}.max_iterations;
    std::vector<std::string> points;

    auto* normalize = app.add_subcommand("normalize", "print the normal form of an expression");
    normalize->add_option("expr", expr, "expression such as \"z1' z1\"")->required();
    add_common(normalize, common);

    auto* rep_check = app.add_subcommand("rep-check", "relations, audit and faithfulness probe of a representation");
    rep_check->add_option("config", config, "representation config (file or inline JSON)")->required();
    rep_check->add_option("--budget", budget, "degree budget of the faithfulness probe")->capture_default_str();
    add_common(rep_check, common, false);

    auto* grid_check = app.add_subcommand("grid-check", "q-invariance, relations and partial isometries on a grid");
    grid_check->add_option("config", config, "grid config (file or inline JSON)")->required();
    add_common(grid_check, common, false);

    auto* norm = app.add_subcommand("norm", "operator norm of a function element on a grid");
    norm->add_option("element", element, "function element (file or inline JSON)")->required();
    norm->add_option("grid", grid, "grid config (file or inline JSON)")->required();
    norm->add_option("--max-iterations", max_iterations, "power iteration cap")->capture_default_str();
    add_common(norm, common);

    auto* character = app.add_subcommand("character", "evaluation of a function element at the origin");
    character->add_option("element", element, "function element (file or inline JSON)")->required();
    add_common(character, common);

    auto* p_function = app.add_subcommand("p-function", "multiplier function of a normal monomial");
    p_function->add_option("monomial", expr, "normal monomial such as \"z1 z1' z2\"")->required();
    p_function->add_option("--at", points, "evaluate at s,t (repeatable)");
    p_function->add_option("--grid", grid, "compare with the word operator on this grid");
    add_common(p_function, common);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    std::string text;
    int code = exit_ok;
    try {
        if (*normalize)
            code = cmd_normalize(expr, common, text);
        else if (*rep_check)
            code = cmd_rep_check(config, budget, common, text);
        else if (*grid_check)
            code = cmd_grid_check(config, common, text);
        else if (*norm)
            code = cmd_norm(element, grid, max_iterations, common, text);
        else if (*character)
            code = cmd_character(element, common, text);
        else
            code = cmd_p_function(expr, points, grid, common, text);
    } catch (const ParseError& e) {
        err << "error: parse error at position " << e.position() << ": " << e.detail() << "\n";
        return exit_usage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    if (!text.empty() && text.back() != '\n') text += '\n';
    if (common.out_path.empty()) {
        out << text;
    } else {
        std::ofstream file(common.out_path);
        if (!file) {
            err << "error: cannot write " << common.out_path << "\n";
            return exit_usage;
        }
        file << text;
    }
    return code;
}

}  // namespace qplane
