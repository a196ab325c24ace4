#include "qplane/representation.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qplane {

using nlohmann::json;

std::string to_string(RepType type) {
    switch (type) {
        case RepType::N: return "N";
        case RepType::K: return "K";
        case RepType::H: return "H";
        case RepType::direct_sum: return "direct_sum";
    }
    throw std::logic_error("invalid representation type");
}

RepType rep_type_from_string(const std::string& name) {
    if (name == "N") return RepType::N;
    if (name == "K") return RepType::K;
    if (name == "H") return RepType::H;
    if (name == "direct_sum" || name == "sum") return RepType::direct_sum;
    throw std::invalid_argument("unknown representation type '" + name + "'");
}

void RepConfig::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("invalid representation config: " + what); };
    if (!(q > 0.0 && q < 1.0)) fail("q must lie in (0,1)");
    auto check_spectrum = [&](const std::vector<double>& values, const char* name) {
        for (double v : values)
            if (!(v > q && v <= 1.0)) {
                std::ostringstream msg;
                msg << name << " value " << v << " outside (q,1] = (" << q << ",1]";
                fail(msg.str());
            }
    };
    check_spectrum(a_values, "a");
    check_spectrum(b_values, "b");
    if (!(n_min < 0 && 0 < n_max)) fail("n_range must satisfy n_min < 0 < n_max");
    if (m_max < 2) fail("m_max must be at least 2");
    if (budget < 0) fail("budget must be non-negative");
    if (atoms < 0) fail("atoms must be non-negative");
    switch (type) {
        case RepType::N:
            if (atoms < 1) fail("type N needs at least one atom");
            break;
        case RepType::K:
            if (a_values.empty()) fail("type K needs a non-empty list of a values");
            break;
        case RepType::H:
            if (b_values.empty()) fail("type H needs a non-empty list of b values");
            break;
        case RepType::direct_sum:
            if (atoms == 0 && a_values.empty() && b_values.empty()) fail("direct sum has no summands");
            break;
    }
}

RepConfig rep_config_from_json(const json& doc) {
    RepConfig cfg;
    try {
        if (!doc.is_object()) throw std::invalid_argument("representation config must be a JSON object");
        cfg.type = rep_type_from_string(doc.at("type").get<std::string>());
        cfg.q = doc.at("q").get<double>();
        if (doc.contains("a")) cfg.a_values = doc["a"].get<std::vector<double>>();
        if (doc.contains("b")) cfg.b_values = doc["b"].get<std::vector<double>>();
        if (doc.contains("n_range")) {
            const auto range = doc["n_range"].get<std::vector<int>>();
            if (range.size() != 2) throw std::invalid_argument("n_range must be [n_min, n_max]");
            cfg.n_min = range[0];
            cfg.n_max = range[1];
        }
        if (doc.contains("m_max")) cfg.m_max = doc["m_max"].get<int>();
        if (doc.contains("atoms")) cfg.atoms = doc["atoms"].get<int>();
        if (doc.contains("budget")) cfg.budget = doc["budget"].get<int>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed representation config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

json to_json(const RepConfig& cfg) {
    return {{"type", to_string(cfg.type)}, {"q", cfg.q},          {"a", cfg.a_values},
            {"b", cfg.b_values},           {"n_range", {cfg.n_min, cfg.n_max}},
            {"m_max", cfg.m_max},          {"atoms", cfg.atoms},  {"budget", cfg.budget}};
}

std::string to_string(const BasisIndex& index) {
    struct Visitor {
        std::string operator()(const AtomIndex& i) const { return "N[" + std::to_string(i.atom) + "]"; }
        std::string operator()(const LadderIndex& i) const {
            return "K[k=" + std::to_string(i.k) + ",a=" + std::to_string(i.a_slot) + "]";
        }
        std::string operator()(const LatticeIndex& i) const {
            return "H[n=" + std::to_string(i.n) + ",m=" + std::to_string(i.m) + ",b=" + std::to_string(i.b_slot) + "]";
        }
    };
    return std::visit(Visitor{}, index);
}

// ---------------------------------------------------------------------------
// Basis layout: atoms, then ladders (slot-major, k ascending), then lattices
// (slot-major, n ascending, m ascending).

namespace {

struct Layout {
    std::size_t atoms = 0;
    std::size_t ladder_slots = 0;
    std::size_t lattice_slots = 0;
    std::size_t span = 0;  // n_max - n_min + 1
    std::size_t m_count = 0;

    std::size_t ladder_offset() const { return atoms; }
    std::size_t lattice_offset() const { return atoms + ladder_slots * span; }
    std::size_t dim() const { return lattice_offset() + lattice_slots * span * m_count; }
};

Layout layout_of(const RepConfig& cfg) {
    Layout out;
    out.span = static_cast<std::size_t>(cfg.n_max - cfg.n_min + 1);
    out.m_count = static_cast<std::size_t>(cfg.m_max);
    const bool sum = cfg.type == RepType::direct_sum;
    if (cfg.type == RepType::N || sum) out.atoms = static_cast<std::size_t>(cfg.atoms);
    if (cfg.type == RepType::K || sum) out.ladder_slots = cfg.a_values.size();
    if (cfg.type == RepType::H || sum) out.lattice_slots = cfg.b_values.size();
    return out;
}

}  // namespace

std::optional<std::size_t> RepOperators::index_of(const BasisIndex& index) const {
    const Layout lay = layout_of(config_);
    const RepConfig& c = config_;
    if (const auto* a = std::get_if<AtomIndex>(&index)) {
        if (a->atom < 0 || static_cast<std::size_t>(a->atom) >= lay.atoms) return std::nullopt;
        return static_cast<std::size_t>(a->atom);
    }
    if (const auto* k = std::get_if<LadderIndex>(&index)) {
        if (k->a_slot < 0 || static_cast<std::size_t>(k->a_slot) >= lay.ladder_slots) return std::nullopt;
        if (k->k < c.n_min || k->k > c.n_max) return std::nullopt;
        return lay.ladder_offset() + static_cast<std::size_t>(k->a_slot) * lay.span +
               static_cast<std::size_t>(k->k - c.n_min);
    }
    const auto& h = std::get<LatticeIndex>(index);
    if (h.b_slot < 0 || static_cast<std::size_t>(h.b_slot) >= lay.lattice_slots) return std::nullopt;
    if (h.n < c.n_min || h.n > c.n_max || h.m < 1 || h.m > c.m_max) return std::nullopt;
    return lay.lattice_offset() + static_cast<std::size_t>(h.b_slot) * lay.span * lay.m_count +
           static_cast<std::size_t>(h.n - c.n_min) * lay.m_count + static_cast<std::size_t>(h.m - 1);
}

const SparseMatrix& RepOperators::generator(Letter letter) const {
    switch (letter) {
        case Letter::z1: return z1_;
        case Letter::z1_star: return z1_star_;
        case Letter::z2: return z2_;
        case Letter::z2_star: return z2_star_;
    }
    throw std::logic_error("invalid letter");
}

Step RepOperators::step_from(const BasisIndex& index, Letter letter) const {
    const double q = config_.q;
    auto land = [&](const BasisIndex& target, double coeff) {
        Step s;
        s.coeff = coeff;
        if (auto where = index_of(target)) {
            s.kind = Step::Kind::inside;
            s.target = *where;
        } else {
            s.kind = Step::Kind::escaped;
        }
        return s;
    };
    if (std::holds_alternative<AtomIndex>(index)) return Step{};
    if (const auto* ladder = std::get_if<LadderIndex>(&index)) {
        const double a = config_.a_values[static_cast<std::size_t>(ladder->a_slot)];
        switch (letter) {
            case Letter::z1: return land(LadderIndex{ladder->k - 1, ladder->a_slot}, std::pow(q, ladder->k) * a);
            case Letter::z1_star:
                return land(LadderIndex{ladder->k + 1, ladder->a_slot}, std::pow(q, ladder->k + 1) * a);
            default: return Step{};
        }
    }
    const auto& h = std::get<LatticeIndex>(index);
    const double b = config_.b_values[static_cast<std::size_t>(h.b_slot)];
    const double qn_b = std::pow(q, h.n) * b;
    switch (letter) {
        case Letter::z1:
            return land(LatticeIndex{h.n, h.m + 1, h.b_slot}, std::sqrt(std::pow(q, -2 * h.m) - 1.0) * qn_b);
        case Letter::z1_star:
            if (h.m == 1) return Step{};  // sqrt(q^0 - 1) = 0
            return land(LatticeIndex{h.n, h.m - 1, h.b_slot}, std::sqrt(std::pow(q, -2 * (h.m - 1)) - 1.0) * qn_b);
        case Letter::z2: return land(LatticeIndex{h.n - 1, h.m, h.b_slot}, qn_b);
        case Letter::z2_star: return land(LatticeIndex{h.n + 1, h.m, h.b_slot}, q * qn_b);
    }
    throw std::logic_error("invalid letter");
}

Step RepOperators::step(std::size_t column, Letter letter) const { return step_from(basis_.at(column), letter); }

Mask RepOperators::interior_mask(int budget) const {
    const RepConfig& c = config_;
    Mask out(dim(), true);
    for (std::size_t i = 0; i < dim(); ++i) {
        if (const auto* k = std::get_if<LadderIndex>(&basis_[i]))
            out[i] = k->k - budget >= c.n_min && k->k + budget <= c.n_max;
        else if (const auto* h = std::get_if<LatticeIndex>(&basis_[i]))
            out[i] = h->n - budget >= c.n_min && h->n + budget <= c.n_max && h->m + budget <= c.m_max;
    }
    return out;
}

Mask RepOperators::exact_columns(std::span<const Word> words) const {
    Mask out(dim(), true);
    for (std::size_t col = 0; col < dim(); ++col) {
        for (const Word& word : words) {
            std::size_t at = col;
            bool exact = true;
            for (auto it = word.rbegin(); it != word.rend(); ++it) {
                const Step s = step(at, *it);
                if (s.kind == Step::Kind::escaped) {
                    exact = false;
                    break;
                }
                if (s.kind == Step::Kind::annihilated) break;
                at = s.target;
            }
            if (!exact) {
                out[col] = false;
                break;
            }
        }
    }
    return out;
}

RepOperators build_rep(const RepConfig& cfg) {
    cfg.validate();
    RepOperators rep;
    rep.config_ = cfg;
    const Layout lay = layout_of(cfg);
    rep.basis_.reserve(lay.dim());
    for (std::size_t i = 0; i < lay.atoms; ++i) rep.basis_.emplace_back(AtomIndex{static_cast<int>(i)});
    for (std::size_t s = 0; s < lay.ladder_slots; ++s)
        for (int k = cfg.n_min; k <= cfg.n_max; ++k) rep.basis_.emplace_back(LadderIndex{k, static_cast<int>(s)});
    for (std::size_t s = 0; s < lay.lattice_slots; ++s)
        for (int n = cfg.n_min; n <= cfg.n_max; ++n)
            for (int m = 1; m <= cfg.m_max; ++m) rep.basis_.emplace_back(LatticeIndex{n, m, static_cast<int>(s)});

    const auto dim = static_cast<Eigen::Index>(rep.basis_.size());
    auto assemble = [&](Letter letter) {
        std::vector<Eigen::Triplet<double>> entries;
        for (std::size_t col = 0; col < rep.basis_.size(); ++col) {
            const Step s = rep.step(col, letter);
            if (s.kind == Step::Kind::inside && s.coeff != 0.0)
                entries.emplace_back(static_cast<Eigen::Index>(s.target), static_cast<Eigen::Index>(col), s.coeff);
        }
        SparseMatrix out(dim, dim);
        out.setFromTriplets(entries.begin(), entries.end());
        return out;
    };
    rep.z1_ = assemble(Letter::z1);
    rep.z2_ = assemble(Letter::z2);
    rep.z1_star_ = SparseMatrix(rep.z1_.transpose());
    rep.z2_star_ = SparseMatrix(rep.z2_.transpose());
    rep.interior_ = rep.interior_mask(cfg.budget);
    return rep;
}

SparseMatrix word_matrix(const RepOperators& rep, const Word& word) {
    const auto dim = static_cast<Eigen::Index>(rep.dim());
    SparseMatrix out(dim, dim);
    out.setIdentity();
    for (Letter letter : word) out = SparseMatrix(out * rep.generator(letter));
    return out;
}

SparseMatrix apply_element(const RepOperators& rep, const NumericElement& element) {
    const auto dim = static_cast<Eigen::Index>(rep.dim());
    SparseMatrix out(dim, dim);
    for (const auto& [mono, coeff] : element) out += coeff * word_matrix(rep, mono.word());
    out.prune(0.0);
    return out;
}

json to_json(const CheckResult& check, double tol) {
    return {{"name", check.name},       {"residual", check.residual}, {"scale", check.scale},
            {"scaled", check.scaled()}, {"columns", check.columns},   {"passed", check.passed(tol)}};
}

// ---------------------------------------------------------------------------
// Residual checks

namespace {

SparseMatrix diagonal(const std::vector<double>& values) {
    SparseMatrix out(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
    std::vector<Eigen::Triplet<double>> entries;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] != 0.0) entries.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), values[i]);
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
}

}  // namespace

CheckResult residual_check(std::string name, const std::vector<SparseMatrix>& terms, const Mask& columns) {
    CheckResult out;
    out.name = std::move(name);
    out.columns = count(columns);
    SparseMatrix total = terms.front();
    out.scale = masked_max_abs(terms.front(), columns);
    for (std::size_t i = 1; i < terms.size(); ++i) {
        total += terms[i];
        out.scale = std::max(out.scale, masked_max_abs(terms[i], columns));
    }
    out.residual = masked_max_abs(total, columns);
    return out;
}

std::vector<CheckResult> relation_residuals(const RepOperators& rep) {
    return relation_residuals(rep.z1(), rep.z2(), rep.z1_star(), rep.z2_star(), rep.config().q, rep.interior_mask(2));
}

std::vector<CheckResult> relation_residuals(const SparseMatrix& z1, const SparseMatrix& z2, const SparseMatrix& z1s,
                                            const SparseMatrix& z2s, double q, const Mask& mask) {
    auto combine = residual_check;
    std::vector<CheckResult> out;
    out.push_back(combine("z2 z1 = q z1 z2", {z2 * z1, -q * SparseMatrix(z1 * z2)}, mask));
    out.push_back(combine("z1* z2* = q z2* z1*", {z1s * z2s, -q * SparseMatrix(z2s * z1s)}, mask));
    out.push_back(combine("z2 z1* = q z1* z2", {z2 * z1s, -q * SparseMatrix(z1s * z2)}, mask));
    out.push_back(combine("z1 z2* = q z2* z1", {z1 * z2s, -q * SparseMatrix(z2s * z1)}, mask));
    out.push_back(combine("z2 z2* = q^2 z2* z2", {z2 * z2s, -q * q * SparseMatrix(z2s * z2)}, mask));
    out.push_back(combine("z1 z1* = q^2 z1* z1 - (1-q^2) z2* z2",
                          {z1 * z1s, -q * q * SparseMatrix(z1s * z1), (1.0 - q * q) * SparseMatrix(z2s * z2)},
                          mask));
    return out;
}

bool AuditReport::passed(double tol) const {
    for (const auto& c : checks)
        if (!c.passed(tol)) return false;
    return near_singular == 0;
}

json to_json(const AuditReport& report, double tol) {
    json checks = json::array();
    for (const auto& c : report.checks) checks.push_back(to_json(c, tol));
    json eig = json::array();
    for (const auto& e : report.ww_eigenvalues)
        eig.push_back({{"n", e.index.n}, {"m", e.index.m}, {"b_slot", e.index.b_slot}, {"value", e.value},
                       {"expected", e.expected}});
    return {{"checks", checks},
            {"ww_eigenvalues", eig},
            {"eigenvalue_error", report.eigenvalue_error},
            {"kernel_columns", report.kernel_columns},
            {"complement_columns", report.complement_columns},
            {"near_singular", report.near_singular},
            {"skipped_w_checks", report.skipped_w_checks},
            {"passed", report.passed(tol)}};
}

AuditReport wellbehaved_audit(const RepOperators& rep) {
    auto combine = residual_check;
    constexpr double kInvertThreshold = 1e-200;
    const double q = rep.config().q;
    const std::size_t dim = rep.dim();
    const Mask interior = rep.interior_mask(std::max(2, rep.config().budget));
    const SparseMatrix &z1 = rep.z1(), &z2 = rep.z2(), &z1s = rep.z1_star(), &z2s = rep.z2_star();
    const SparseMatrix qop = z2s * z2;
    const SparseMatrix z1sz1 = z1s * z1;

    AuditReport report;
    report.checks.push_back(combine("(i) [z1* z1, z2* z2] = 0", {z1sz1 * qop, -SparseMatrix(qop * z1sz1)}, interior));
    report.checks.push_back(combine("(ii) z2 z2* = q^2 z2* z2", {z2 * z2s, -q * q * qop}, interior));

    // Spectral data of Q, taken from the untruncated z2 action so that the
    // n_min edge (where z2 leaves the window) is not mistaken for ker Q.
    // Bands are (q^{2n+2}, q^{2n}].
    std::vector<double> qdiag(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        const Step s = rep.step(i, Letter::z2);
        if (s.kind != Step::Kind::annihilated) qdiag[i] = s.coeff * s.coeff;
    }
    report.checks.push_back(combine("(iii) Q diagonal", {qop, -diagonal(qdiag)}, interior));

    constexpr int kKernelBand = std::numeric_limits<int>::min();
    std::vector<int> band(dim, kKernelBand);
    Mask kernel(dim, false), complement(dim, false);
    for (std::size_t i = 0; i < dim; ++i) {
        if (qdiag[i] == 0.0) {
            kernel[i] = true;
        } else if (qdiag[i] < kInvertThreshold) {
            ++report.near_singular;
        } else {
            complement[i] = true;
            band[i] = static_cast<int>(std::floor(std::log(qdiag[i]) / std::log(q * q) + 1e-9));
        }
    }
    std::map<int, SparseMatrix> projection;
    for (std::size_t i = 0; i < dim; ++i) {
        if (!kernel[i] && !complement[i]) continue;
        auto [it, inserted] = projection.try_emplace(band[i], SparseMatrix(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
        it->second.insert(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    }
    auto projector = [&](int b) {
        auto it = projection.find(b);
        return it == projection.end() ? SparseMatrix(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)) : it->second;
    };
    CheckResult z1_bands{"(iii) E(S) z1 = z1 E(S), E(S) z1* = z1* E(S)", 0.0, 0.0, count(interior)};
    CheckResult z2_bands{"(iii) z2 f(Q) = f(q^2 Q) z2, z2* f(Q) = f(q^-2 Q) z2*", 0.0, 0.0, count(interior)};
    auto merge = [](CheckResult& into, const CheckResult& part) {
        into.residual = std::max(into.residual, part.residual);
        into.scale = std::max(into.scale, part.scale);
    };
    for (const auto& [b, e] : projection) {
        merge(z1_bands, combine("", {e * z1, -SparseMatrix(z1 * e)}, interior));
        merge(z1_bands, combine("", {e * z1s, -SparseMatrix(z1s * e)}, interior));
        const int down = b == kKernelBand ? b : b - 1;
        const int up = b == kKernelBand ? b : b + 1;
        merge(z2_bands, combine("", {z2 * e, -SparseMatrix(projector(down) * z2)}, interior));
        merge(z2_bands, combine("", {z2s * e, -SparseMatrix(projector(up) * z2s)}, interior));
    }
    merge(z2_bands, combine("", {z2 * qop, -q * q * SparseMatrix(qop * z2)}, interior));
    merge(z2_bands, combine("", {z2s * qop, -SparseMatrix(qop * z2s) / (q * q)}, interior));
    report.checks.push_back(z1_bands);
    report.checks.push_back(z2_bands);

    const Mask kernel_interior = mask_and(kernel, interior);
    const Mask complement_interior = mask_and(complement, interior);
    report.kernel_columns = count(kernel);
    report.complement_columns = count(complement);
    report.checks.push_back(combine("(iv) z1 z1* = q^2 z1* z1 on ker Q", {z1 * z1s, -q * q * z1sz1}, kernel_interior));

    report.skipped_w_checks = report.complement_columns == 0;
    std::vector<double> inv_sqrt(dim, 0.0), projector_c(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
        if (complement[i]) {
            inv_sqrt[i] = 1.0 / std::sqrt(qdiag[i]);
            projector_c[i] = 1.0;
        }
    const SparseMatrix r = diagonal(inv_sqrt);
    const SparseMatrix w = r * z1;
    const SparseMatrix ws = SparseMatrix(w.transpose());
    const SparseMatrix wsw = ws * w;
    report.checks.push_back(combine("(v) z1 Q^-1/2 = Q^-1/2 z1", {z1 * r, -SparseMatrix(r * z1)}, complement_interior));
    report.checks.push_back(combine("(v) w w* = q^2 w* w - (1-q^2)",
                                    {w * ws, -q * q * wsw, (1.0 - q * q) * diagonal(projector_c)}, complement_interior));

    std::vector<double> expected(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        const auto* h = std::get_if<LatticeIndex>(&rep.basis()[i]);
        if (!h || !complement_interior[i]) continue;
        expected[i] = std::pow(q, -2 * h->m) - 1.0;
        const double value = wsw.coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
        report.ww_eigenvalues.push_back({*h, value, expected[i]});
        report.eigenvalue_error = std::max(report.eigenvalue_error, std::abs(value - expected[i]) / std::max(1.0, expected[i]));
    }
    CheckResult eig = combine("(v) w* w h_{n,m} = (q^-2m - 1) h_{n,m}", {wsw, -diagonal(expected)}, complement_interior);
    eig.scale = std::max(eig.scale, 1.0);
    report.checks.push_back(eig);
    return report;
}

// ---------------------------------------------------------------------------
// Faithfulness

json to_json(const FaithfulnessReport& report) {
    json monos = json::array();
    for (std::size_t i = 0; i < report.monomials.size(); ++i) {
        const auto& m = report.monomials[i];
        monos.push_back({{"mono", {m.k, m.l, m.m, m.n}}, {"killed", static_cast<bool>(report.killed[i])}});
    }
    return {{"degree_budget", report.degree_budget},
            {"monomials", monos},
            {"rank", report.rank},
            {"count", report.monomials.size()},
            {"full_rank", report.full_rank()},
            {"min_singular_value", report.min_singular_value},
            {"interior_columns", report.interior_columns}};
}

FaithfulnessReport faithfulness_probe(const RepOperators& rep, int degree_budget) {
    FaithfulnessReport report;
    report.degree_budget = degree_budget;
    report.monomials = monomials_up_to(degree_budget);
    const Mask interior = rep.interior_mask(degree_budget);
    report.interior_columns = count(interior);

    std::vector<std::size_t> columns;
    for (std::size_t c = 0; c < interior.size(); ++c)
        if (interior[c]) columns.push_back(c);
    const auto rows = static_cast<Eigen::Index>(rep.dim() * columns.size());

    std::vector<Eigen::VectorXd> images;
    for (const auto& mono : report.monomials) {
        const SparseMatrix image = word_matrix(rep, mono.word());
        Eigen::VectorXd v = Eigen::VectorXd::Zero(rows);
        for (std::size_t j = 0; j < columns.size(); ++j)
            for (SparseMatrix::InnerIterator it(image, static_cast<Eigen::Index>(columns[j])); it; ++it)
                v(static_cast<Eigen::Index>(j * rep.dim()) + it.row()) = it.value();
        const double norm = v.norm();
        report.killed.push_back(norm == 0.0);
        if (norm != 0.0) images.push_back(v / norm);
    }
    if (images.empty()) return report;
    Eigen::MatrixXd stacked(rows, static_cast<Eigen::Index>(images.size()));
    for (std::size_t i = 0; i < images.size(); ++i) stacked.col(static_cast<Eigen::Index>(i)) = images[i];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
    const Eigen::VectorXd sv = svd.singularValues();
    report.singular_values.assign(sv.data(), sv.data() + sv.size());
    for (double s : report.singular_values)
        if (s > kRankThreshold) ++report.rank;
    report.min_singular_value = sv.minCoeff();
    return report;
}

}  // namespace qplane
