#include "qplane/l2grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qplane {

using nlohmann::json;

void GridConfig::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("invalid grid config: " + what); };
    if (!(q > 0.0 && q < 1.0)) fail("q must lie in (0,1)");
    if (n_sigma < 2) fail("n_sigma must be at least 2");
    if (cells < 1) fail("cell list is empty");
    if (k_lo > k_hi) fail("k_range must satisfy k_lo <= k_hi");
    if (epsilon != 0 && epsilon != 1) fail("epsilon must be 0 or 1");
}

GridConfig grid_config_from_json(const json& doc) {
    GridConfig cfg;
    try {
        if (!doc.is_object()) throw std::invalid_argument("grid config must be a JSON object");
        cfg.q = doc.at("q").get<double>();
        if (doc.contains("n_sigma")) cfg.n_sigma = doc["n_sigma"].get<int>();
        if (doc.contains("cells")) cfg.cells = doc["cells"].get<int>();
        if (doc.contains("k_range")) {
            const auto range = doc["k_range"].get<std::vector<int>>();
            if (range.size() != 2) throw std::invalid_argument("k_range must be [k_lo, k_hi]");
            cfg.k_lo = range[0];
            cfg.k_hi = range[1];
        }
        if (doc.contains("epsilon")) cfg.epsilon = doc["epsilon"].get<int>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed grid config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

json to_json(const GridConfig& cfg) {
    return {{"q", cfg.q},
            {"n_sigma", cfg.n_sigma},
            {"cells", cfg.cells},
            {"k_range", {cfg.k_lo, cfg.k_hi}},
            {"epsilon", cfg.epsilon}};
}

std::string to_string(QMeasure1D::Kind kind) {
    switch (kind) {
        case QMeasure1D::Kind::lattice_sigma: return "lattice_sigma";
        case QMeasure1D::Kind::dilated_lebesgue: return "dilated_lebesgue";
        case QMeasure1D::Kind::dirac0: return "dirac0";
    }
    throw std::logic_error("invalid measure kind");
}

std::string to_string(Component component) {
    switch (component) {
        case Component::atom00: return "atom00";
        case Component::nu_delta0: return "nu_delta0";
        case Component::sigma_mu: return "sigma_mu";
    }
    throw std::logic_error("invalid component");
}

QMeasure1D lattice_sigma(double q, int n_sigma) {
    QMeasure1D out{QMeasure1D::Kind::lattice_sigma, q, {}};
    for (int n = 1; n <= n_sigma; ++n) out.points.push_back({n, 0, std::pow(q, -n), 1.0});
    return out;
}

namespace {

std::vector<double> midpoints(double q, int cells) {
    const double width = (1.0 - q) / cells;
    std::vector<double> out(static_cast<std::size_t>(cells));
    for (int j = 0; j < cells; ++j) out[static_cast<std::size_t>(j)] = q + (j + 0.5) * width;
    return out;
}

}  // namespace

QMeasure1D dilated_lebesgue(double q, int cells, int k_lo, int k_hi) {
    QMeasure1D out{QMeasure1D::Kind::dilated_lebesgue, q, {}};
    const double width = (1.0 - q) / cells;
    const auto tau = midpoints(q, cells);
    for (int k = k_lo; k <= k_hi; ++k)
        for (int j = 0; j < cells; ++j) out.points.push_back({k, j, std::pow(q, k) * tau[static_cast<std::size_t>(j)], width});
    return out;
}

std::pair<double, double> QGrid::coordinates(const GridIndex& index) const {
    const double q = config.q;
    switch (index.component) {
        case Component::atom00: return {0.0, 0.0};
        case Component::nu_delta0: return {std::pow(q, index.level) * tau.at(static_cast<std::size_t>(index.cell)), 0.0};
        case Component::sigma_mu:
            return {std::pow(q, -index.sigma), std::pow(q, index.level) * tau.at(static_cast<std::size_t>(index.cell))};
    }
    throw std::logic_error("invalid component");
}

std::optional<std::size_t> QGrid::index_of(const GridIndex& index) const {
    const GridConfig& c = config;
    const std::size_t atoms = static_cast<std::size_t>(c.epsilon);
    const auto levels = static_cast<std::size_t>(c.k_hi - c.k_lo + 1);
    const auto cells = static_cast<std::size_t>(c.cells);
    if (index.component == Component::atom00) return atoms ? std::optional<std::size_t>(0) : std::nullopt;
    if (index.cell < 0 || index.cell >= c.cells || index.level < c.k_lo || index.level > c.k_hi) return std::nullopt;
    const std::size_t within = static_cast<std::size_t>(index.level - c.k_lo) * cells + static_cast<std::size_t>(index.cell);
    if (index.component == Component::nu_delta0) return atoms + within;
    if (index.sigma < 1 || index.sigma > c.n_sigma) return std::nullopt;
    return atoms + levels * cells + static_cast<std::size_t>(index.sigma - 1) * levels * cells + within;
}

Mask QGrid::interior_mask(int budget) const {
    Mask out(size(), true);
    for (std::size_t i = 0; i < size(); ++i) {
        const GridIndex& g = points[i].index;
        const bool levels = g.level - budget >= config.k_lo && g.level + budget <= config.k_hi;
        switch (g.component) {
            case Component::atom00: break;
            case Component::nu_delta0: out[i] = levels; break;
            case Component::sigma_mu: out[i] = levels && g.sigma + budget <= config.n_sigma; break;
        }
    }
    return out;
}

Mask QGrid::component_mask(Component component) const {
    Mask out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = points[i].index.component == component;
    return out;
}

QGrid build_grid(const GridConfig& cfg) {
    cfg.validate();
    QGrid grid;
    grid.config = cfg;
    grid.sigma = lattice_sigma(cfg.q, cfg.n_sigma);
    grid.mu = dilated_lebesgue(cfg.q, cfg.cells, cfg.k_lo, cfg.k_hi);
    grid.nu = grid.mu;
    grid.tau = midpoints(cfg.q, cfg.cells);
    if (cfg.epsilon == 1) grid.points.push_back({{Component::atom00, 0, 0, 0}, 0.0, 0.0, 1.0});
    for (const auto& p : grid.nu.points)
        grid.points.push_back({{Component::nu_delta0, 0, p.level, p.cell}, p.coord, 0.0, p.weight});
    for (const auto& sp : grid.sigma.points)
        for (const auto& mp : grid.mu.points)
            grid.points.push_back({{Component::sigma_mu, sp.level, mp.level, mp.cell}, sp.coord, mp.coord, sp.weight * mp.weight});
    return grid;
}

// ---------------------------------------------------------------------------

namespace {

// Each cell's reference weight is its most frequent value across levels, so
// a single perturbed level is reported as itself.
std::optional<LevelOffense> check_levels(const QMeasure1D& m, const std::string& name,
                                         std::vector<std::pair<int, double>>& totals) {
    std::map<int, std::vector<double>> levels;
    for (const auto& p : m.points) levels[p.level].push_back(p.weight);
    if (levels.empty()) return std::nullopt;
    const std::size_t cells = levels.begin()->second.size();
    std::vector<double> reference(cells);
    for (std::size_t j = 0; j < cells; ++j) {
        std::map<double, int> votes;
        for (const auto& [k, w] : levels)
            if (j < w.size()) ++votes[w[j]];
        reference[j] = std::max_element(votes.begin(), votes.end(), [](const auto& a, const auto& b) {
                           return a.second < b.second;
                       })->first;
    }
    double expected = 0.0;
    for (double w : reference) expected += w;
    std::optional<LevelOffense> offense;
    for (const auto& [k, weights] : levels) {
        double total = 0.0;
        for (double w : weights) total += w;
        totals.emplace_back(k, total);
        if (!offense && weights != reference) offense = LevelOffense{name, k, expected, total};
    }
    return offense;
}

}  // namespace

QInvarianceReport check_q_invariance(const QGrid& grid) {
    QInvarianceReport report;
    report.offense = check_levels(grid.mu, "mu", report.mu_levels);
    auto nu = check_levels(grid.nu, "nu", report.nu_levels);
    if (!report.offense) report.offense = nu;
    for (const auto& p : grid.sigma.points)
        if (p.weight != 1.0) {
            report.sigma_unit = false;
            if (!report.offense) report.offense = LevelOffense{"sigma", p.level, 1.0, p.weight};
        }
    return report;
}

json to_json(const QInvarianceReport& report) {
    auto levels = [](const std::vector<std::pair<int, double>>& v) {
        json out = json::array();
        for (const auto& [k, w] : v) out.push_back({{"level", k}, {"weight", w}});
        return out;
    };
    json out = {{"passed", report.passed()},
                {"mu_levels", levels(report.mu_levels)},
                {"nu_levels", levels(report.nu_levels)},
                {"sigma_unit", report.sigma_unit}};
    if (report.offense)
        out["offense"] = {{"measure", report.offense->measure},
                          {"level", report.offense->level},
                          {"expected", report.offense->expected},
                          {"actual", report.offense->actual}};
    return out;
}

// ---------------------------------------------------------------------------
// Operators.  In the column view a generator sends the point j to the point p
// whose source is j; the coefficient is the multiplier evaluated at p.

Mask GridOperator::boundary() const {
    Mask out(steps.size());
    for (std::size_t i = 0; i < steps.size(); ++i) out[i] = steps[i].kind == Step::Kind::escaped;
    return out;
}

const GridOperator& GridGenerators::of(Letter letter) const {
    switch (letter) {
        case Letter::z1: return z1;
        case Letter::z1_star: return z1_star;
        case Letter::z2: return z2;
        case Letter::z2_star: return z2_star;
    }
    throw std::logic_error("invalid letter");
}

namespace {

enum class Shift { none, s_up, s_down, t_up, t_down };

// Image of a point under the dilation: s_up means target s = s/q.
GridIndex shifted(GridIndex g, Shift shift) {
    switch (shift) {
        case Shift::none: break;
        case Shift::s_up:
            if (g.component == Component::sigma_mu) ++g.sigma;
            else if (g.component == Component::nu_delta0) --g.level;
            break;
        case Shift::s_down:
            if (g.component == Component::sigma_mu) --g.sigma;
            else if (g.component == Component::nu_delta0) ++g.level;
            break;
        case Shift::t_up:
            if (g.component == Component::sigma_mu) --g.level;
            break;
        case Shift::t_down:
            if (g.component == Component::sigma_mu) ++g.level;
            break;
    }
    return g;
}

using Multiplier = std::function<double(const GridIndex&, double s, double t)>;

GridOperator make_operator(const QGrid& grid, std::string name, Shift shift, const Multiplier& c) {
    GridOperator op;
    op.name = std::move(name);
    op.steps.resize(grid.size());
    std::vector<Eigen::Triplet<double>> entries;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const GridIndex target = shifted(grid.points[j].index, shift);
        const auto [s, t] = grid.coordinates(target);
        const double coeff = c(target, s, t);
        Step& step = op.steps[j];
        if (coeff == 0.0) continue;
        step.coeff = coeff;
        if (auto where = grid.index_of(target)) {
            step.kind = Step::Kind::inside;
            step.target = *where;
            const double scale = std::sqrt(grid.points[*where].weight / grid.points[j].weight);
            entries.emplace_back(static_cast<Eigen::Index>(*where), static_cast<Eigen::Index>(j), coeff * scale);
        } else {
            step.kind = Step::Kind::escaped;
        }
    }
    const auto n = static_cast<Eigen::Index>(grid.size());
    op.matrix = SparseMatrix(n, n);
    op.matrix.setFromTriplets(entries.begin(), entries.end());
    return op;
}

bool on_sigma(const GridIndex& g) { return g.component == Component::sigma_mu; }
bool on_nu(const GridIndex& g) { return g.component == Component::nu_delta0; }

// chi_[1/q,inf)(s) for lattice points is sigma >= 1; the index may lie
// outside the lattice (sigma = 0 means s = 1).
double sqrt_s2_minus_1(double q, int sigma) { return sigma >= 1 ? std::sqrt(std::pow(q, -2 * sigma) - 1.0) : 0.0; }

}  // namespace

GridGenerators generator_operators(const QGrid& grid) {
    const double q = grid.config.q;
    GridGenerators out;
    // z1 h(s,t) = sqrt((qs)^2-1) t h(qs,t) + q chi_0(t) s h(qs,t)
    out.z1 = make_operator(grid, "z1", Shift::s_up, [q](const GridIndex& g, double s, double t) {
        if (on_sigma(g)) return sqrt_s2_minus_1(q, g.sigma - 1) * t;
        if (on_nu(g)) return q * s;
        return 0.0;
    });
    // z1* h(s,t) = sqrt(s^2-1) t h(s/q,t) + chi_0(t) s h(s/q,t)
    out.z1_star = make_operator(grid, "z1*", Shift::s_down, [q](const GridIndex& g, double s, double t) {
        if (on_sigma(g)) return sqrt_s2_minus_1(q, g.sigma) * t;
        if (on_nu(g)) return s;
        return 0.0;
    });
    // z2 g(s,t) = q t g(s,qt);  z2* g(s,t) = t g(s,t/q)
    out.z2 = make_operator(grid, "z2", Shift::t_up,
                           [q](const GridIndex& g, double, double t) { return on_sigma(g) ? q * t : 0.0; });
    out.z2_star = make_operator(grid, "z2*", Shift::t_down,
                                [](const GridIndex& g, double, double t) { return on_sigma(g) ? t : 0.0; });
    return out;
}

double modulus_z1(const QGrid& grid, const GridPoint& point) {
    if (on_sigma(point.index)) return sqrt_s2_minus_1(grid.config.q, point.index.sigma) * point.t;
    if (on_nu(point.index)) return point.s;
    return 0.0;
}

PolarOperators polar_operators(const QGrid& grid) {
    const double q = grid.config.q;
    PolarOperators out;
    out.abs_z1 = make_operator(grid, "|z1|", Shift::none, [q](const GridIndex& g, double s, double t) {
        if (on_sigma(g)) return sqrt_s2_minus_1(q, g.sigma) * t;
        if (on_nu(g)) return s;
        return 0.0;
    });
    out.abs_z2 = make_operator(grid, "|z2|", Shift::none, [](const GridIndex&, double, double t) { return t; });
    // U h(s,t) = (chi(t>0) chi_[1/q,inf)(qs) + chi_0(t) chi(s>0)) h(qs,t)
    out.u = make_operator(grid, "U", Shift::s_up, [](const GridIndex& g, double, double) {
        if (on_sigma(g)) return g.sigma - 1 >= 1 ? 1.0 : 0.0;
        return on_nu(g) ? 1.0 : 0.0;
    });
    // U* h(s,t) = (chi(t>0) chi_[1/q,inf)(s) + chi_0(t) chi(s>0)) h(s/q,t)
    out.u_star = make_operator(grid, "U*", Shift::s_down, [](const GridIndex& g, double, double) {
        if (on_sigma(g)) return g.sigma >= 1 ? 1.0 : 0.0;
        return on_nu(g) ? 1.0 : 0.0;
    });
    out.v = make_operator(grid, "V", Shift::t_up, [](const GridIndex& g, double, double) { return on_sigma(g) ? 1.0 : 0.0; });
    out.v_star = make_operator(grid, "V*", Shift::t_down,
                               [](const GridIndex& g, double, double) { return on_sigma(g) ? 1.0 : 0.0; });
    return out;
}

SparseMatrix word_matrix(const GridGenerators& gens, const Word& word) {
    const auto n = gens.z1.matrix.rows();
    SparseMatrix out(n, n);
    out.setIdentity();
    for (Letter letter : word) out = SparseMatrix(out * gens.of(letter).matrix);
    return out;
}

Mask exact_columns(std::span<const GridOperator* const> product) {
    const std::size_t n = product.empty() ? 0 : product.front()->steps.size();
    Mask out(n, true);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t at = col;
        for (auto it = product.rbegin(); it != product.rend(); ++it) {
            const Step& s = (*it)->steps[at];
            if (s.kind == Step::Kind::escaped) {
                out[col] = false;
                break;
            }
            if (s.kind == Step::Kind::annihilated) break;
            at = s.target;
        }
    }
    return out;
}

Mask exact_columns(const GridGenerators& gens, std::span<const Word> words) {
    Mask out(gens.z1.steps.size(), true);
    for (const Word& w : words) {
        std::vector<const GridOperator*> ops;
        for (Letter l : w) ops.push_back(&gens.of(l));
        out = mask_and(out, ops.empty() ? out : exact_columns(ops));
    }
    return out;
}

SparseMatrix diagonal_matrix(const QGrid& grid, const std::function<double(const GridPoint&)>& f) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    std::vector<Eigen::Triplet<double>> entries;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = f(grid.points[i]);
        if (v != 0.0) entries.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), v);
    }
    SparseMatrix out(n, n);
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
}

Decomposition decompose(const QGrid& grid) {
    Decomposition out;
    for (std::size_t i = 0; i < grid.size(); ++i) switch (grid.points[i].index.component) {
            case Component::atom00: out.atom00.push_back(i); break;
            case Component::nu_delta0: out.nu_delta0.push_back(i); break;
            case Component::sigma_mu: out.sigma_mu.push_back(i); break;
        }
    return out;
}

std::vector<CheckResult> relation_residuals(const QGrid& grid) {
    const GridGenerators g = generator_operators(grid);
    return relation_residuals(g.z1.matrix, g.z2.matrix, g.z1_star.matrix, g.z2_star.matrix, grid.config.q,
                              grid.interior_mask(2));
}

std::vector<CheckResult> partial_isometry_checks(const QGrid& grid) {
    const PolarOperators p = polar_operators(grid);
    auto exact = [](std::initializer_list<const GridOperator*> ops) {
        return exact_columns(std::span<const GridOperator* const>(ops.begin(), ops.size()));
    };
    auto diag = [&](auto f) { return diagonal_matrix(grid, [&](const GridPoint& x) { return f(x.index) ? 1.0 : 0.0; }); };
    const SparseMatrix chi_t = diag([](const GridIndex& g) { return on_sigma(g); });
    const SparseMatrix u_star_u = diag([](const GridIndex& g) { return on_nu(g) || (on_sigma(g) && g.sigma >= 1); });
    const SparseMatrix u_u_star = diag([](const GridIndex& g) { return on_nu(g) || (on_sigma(g) && g.sigma >= 2); });
    const Mask all(grid.size(), true);
    auto product = [](const GridOperator& a, const GridOperator& b) { return SparseMatrix(a.matrix * b.matrix); };
    return {
        residual_check("V*V = chi(t>0)", {product(p.v_star, p.v), -chi_t}, exact({&p.v_star, &p.v})),
        residual_check("VV* = chi(t>0)", {product(p.v, p.v_star), -chi_t}, exact({&p.v, &p.v_star})),
        residual_check("U*U", {product(p.u_star, p.u), -u_star_u}, exact({&p.u_star, &p.u})),
        residual_check("UU*", {product(p.u, p.u_star), -u_u_star}, exact({&p.u, &p.u_star})),
        residual_check("UV = VU", {product(p.u, p.v), -product(p.v, p.u)}, all),
        residual_check("UV* = V*U", {product(p.u, p.v_star), -product(p.v_star, p.u)}, all),
        residual_check("U*V = VU*", {product(p.u_star, p.v), -product(p.v, p.u_star)}, all),
        residual_check("U*V* = V*U*", {product(p.u_star, p.v_star), -product(p.v_star, p.u_star)}, all),
    };
}

json to_json(const QGrid& grid) {
    json points = json::array();
    for (const auto& p : grid.points) points.push_back(json::array({p.s, p.t, p.weight, to_string(p.index.component)}));
    return {{"config", to_json(grid.config)}, {"points", points}};
}

json to_json(const QGrid& grid, const GridOperator& op) {
    json entries = json::array();
    for (std::size_t j = 0; j < op.steps.size(); ++j) {
        const Step& s = op.steps[j];
        if (s.kind == Step::Kind::inside) entries.push_back({{"from", j}, {"to", s.target}, {"coeff", s.coeff}});
    }
    json boundary = json::array();
    const Mask b = op.boundary();
    for (std::size_t j = 0; j < b.size(); ++j)
        if (b[j]) boundary.push_back(j);
    return {{"name", op.name}, {"size", grid.size()}, {"entries", entries}, {"boundary", boundary}};
}

}  // namespace qplane
