#include "qplane/funalg.hpp"

#include "qplane/fun_expr.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qplane {

using nlohmann::json;

namespace {

constexpr double kVanishTolerance = 1e-12;
// Relative slack for chi_[1/q,inf)(s): lattice coordinates are powers of q.
constexpr double kLatticeSlack = 1e-9;

bool at_least_inverse_q(double q, double s) { return s >= (1.0 / q) * (1.0 - kLatticeSlack); }

}  // namespace

CoeffFunction CoeffFunction::from_expression(std::string_view text) {
    CoeffFunction out;
    RealFunction real = compile_expression(text);
    out.f = [real](double x, double y) { return Complex(real(x, y), 0.0); };
    out.expression = std::string(text);
    return out;
}

std::optional<FlagViolation> spot_check(const CoeffFunction& f, bool need_s0, bool need_t0) {
    static const double samples[] = {0.0, 1e-3, 0.05, 0.25, 0.5, 1.0, 1.5, 2.0, 4.0, 10.0, 50.0};
    if (f.vanishes_at_s0 || need_s0)
        for (double y : samples)
            if (const double v = std::abs(f.f(0.0, y)); !(v <= kVanishTolerance)) return FlagViolation{"f(0,y) = 0", 0.0, y, v};
    if (f.vanishes_at_t0 || need_t0)
        for (double x : samples)
            if (const double v = std::abs(f.f(x, 0.0)); !(v <= kVanishTolerance)) return FlagViolation{"f(x,0) = 0", x, 0.0, v};
    if (f.vanishes_at_infinity) {
        const double r = f.tail_radius;
        const std::pair<double, double> tail[] = {{r, 0.0},     {0.0, r},      {r, r},         {2 * r, 0.0},
                                                  {0.0, 2 * r}, {r, 0.5 * r},  {0.5 * r, r},   {10 * r, 10 * r},
                                                  {10 * r, 0.0}, {0.0, 10 * r}, {r, 1.0},       {1.0, r}};
        for (const auto& [x, y] : tail)
            if (const double v = std::abs(f.f(x, y)); !(v <= f.tail_bound)) return FlagViolation{"|f| <= tail bound", x, y, v};
    }
    return std::nullopt;
}

FunElement::FunElement(double q) : q_(q) { require_unit_interval(q); }

void FunElement::add(Bidegree nm, GridFunction phi) {
    auto [it, inserted] = terms_.try_emplace(nm, phi);
    if (!inserted) it->second = [a = it->second, b = std::move(phi)](double s, double t) { return a(s, t) + b(s, t); };
}

FunElement& FunElement::operator+=(const FunElement& rhs) {
    if (rhs.q_ != q_) throw std::invalid_argument("cannot add elements built at different q");
    for (const auto& [nm, phi] : rhs.terms_) add(nm, phi);
    source_.clear();
    return *this;
}

double modulus_z1(double q, double s, double t) {
    if (t > 0.0) return at_least_inverse_q(q, s) ? std::sqrt(s * s - 1.0) * t : 0.0;
    return t == 0.0 ? s : 0.0;
}

double projection_u_star_u(double q, double s, double t) {
    if (t > 0.0) return at_least_inverse_q(q, s) ? 1.0 : 0.0;
    return s > 0.0 ? 1.0 : 0.0;
}

double projection_u_u_star(double q, double s, double t) { return projection_u_star_u(q, q * s, t); }

double projection_v(double t) { return t > 0.0 ? 1.0 : 0.0; }

FunElement make_element(double q, const std::vector<CoeffTerm>& coeffs) {
    FunElement out(q);
    for (const auto& term : coeffs) {
        if (!term.f.f) throw std::invalid_argument("term (" + std::to_string(term.n) + "," + std::to_string(term.m) + ") has no function");
        if (auto bad = spot_check(term.f, term.n != 0, term.m != 0)) {
            std::ostringstream msg;
            msg << "term (" << term.n << "," << term.m << ") violates " << bad->condition << ": |f(" << bad->x << ","
                << bad->y << ")| = " << bad->value;
            throw std::invalid_argument(msg.str());
        }
        auto f = term.f.f;
        out.add({term.n, term.m}, [f, q](double s, double t) { return f(modulus_z1(q, s, t), t); });
    }
    out.source_ = coeffs;
    return out;
}

// ---------------------------------------------------------------------------
// Products.  phi U^#a V^#b * psi U^#c V^#d
//   = phi(s,t) psi(q^a s, q^b t) rho_U(s,t) rho_V(t) U^#(a+c) V^#(b+d),
// where rho_U collects the projections left behind when U and U* cancel,
// each moved to the far left through the remaining U-power.

namespace {

struct ProjectionFactor {
    bool u_star_u = true;  ///< U*U, otherwise UU*
    int power = 0;         ///< evaluated at (q^power s, t)
};

struct ShiftProduct {
    int exponent = 0;
    std::vector<ProjectionFactor> factors;
    bool v_cancelled = false;
};

ShiftProduct combine_shifts(int a, int c) {
    ShiftProduct out{a, {}, false};
    const int steps = std::abs(c);
    for (int i = 0; i < steps; ++i) {
        int& e = out.exponent;
        if (c > 0) {
            // pi U^{*j} U = pi U^{*(j-1)} (U*U) = pi P1(q^{-(j-1)} s, t) U^{*(j-1)}
            if (e < 0) out.factors.push_back({true, e + 1});
            ++e;
        } else {
            // pi U^e U* = pi P2(q^{e-1} s, t) U^{e-1}
            if (e > 0) out.factors.push_back({false, e - 1});
            --e;
        }
    }
    return out;
}

}  // namespace

FunElement fun_multiply(const FunElement& a, const FunElement& b) {
    if (a.q() != b.q()) throw std::invalid_argument("cannot multiply elements built at different q");
    const double q = a.q();
    FunElement out(q);
    for (const auto& [ab, phi] : a.terms())
        for (const auto& [cd, psi] : b.terms()) {
            const auto [n1, m1] = ab;
            const auto [n2, m2] = cd;
            ShiftProduct u = combine_shifts(n1, n2);
            const ShiftProduct v = combine_shifts(m1, m2);
            const bool v_cancel = !v.factors.empty();
            const double ds = std::pow(q, n1), dt = std::pow(q, m1);
            out.add({u.exponent, v.exponent},
                    [phi, psi, q, ds, dt, factors = std::move(u.factors), v_cancel](double s, double t) {
                        double rho = v_cancel ? projection_v(t) : 1.0;
                        for (const auto& f : factors) {
                            if (rho == 0.0) break;
                            const double sp = std::pow(q, f.power) * s;
                            rho *= f.u_star_u ? projection_u_star_u(q, sp, t) : projection_u_u_star(q, sp, t);
                        }
                        if (rho == 0.0) return Complex(0.0);
                        return rho * phi(s, t) * psi(ds * s, dt * t);
                    });
        }
    return out;
}

FunElement fun_adjoint(const FunElement& a) {
    const double q = a.q();
    FunElement out(q);
    for (const auto& [nm, phi] : a.terms()) {
        const double ds = std::pow(q, -nm.first), dt = std::pow(q, -nm.second);
        out.add({-nm.first, -nm.second}, [phi, ds, dt](double s, double t) { return std::conj(phi(ds * s, dt * t)); });
    }
    return out;
}

FunElement MultiplierFunction::element() const {
    FunElement out(q);
    out.add({n, m}, p);
    return out;
}

MultiplierFunction word_to_fun(const NormalMonomial& mono, double q) {
    require_unit_interval(q);
    // z1 = U|z1| = M1(qs,t) U,  z1* = |z1| U*,  z2 = V|z2| = qt V,  z2* = t V*
    auto letter = [q](Letter l) {
        FunElement e(q);
        switch (l) {
            case Letter::z1: e.add({1, 0}, [q](double s, double t) { return Complex(modulus_z1(q, q * s, t)); }); break;
            case Letter::z1_star: e.add({-1, 0}, [q](double s, double t) { return Complex(modulus_z1(q, s, t)); }); break;
            case Letter::z2: e.add({0, 1}, [q](double, double t) { return Complex(q * t); }); break;
            case Letter::z2_star: e.add({0, -1}, [](double, double t) { return Complex(t); }); break;
        }
        return e;
    };
    FunElement acc(q);
    acc.add({0, 0}, [](double, double) { return Complex(1.0); });
    for (Letter l : mono.word()) acc = fun_multiply(acc, letter(l));
    const auto& [nm, p] = *acc.terms().begin();
    return MultiplierFunction{p, nm.first, nm.second, q};
}

// ---------------------------------------------------------------------------

namespace {

struct ShiftMatrices {
    PolarOperators polar;
    std::map<Bidegree, ComplexSparseMatrix> cache;

    const ComplexSparseMatrix& get(Bidegree nm) {
        auto it = cache.find(nm);
        if (it != cache.end()) return it->second;
        const auto size = polar.u.matrix.rows();
        SparseMatrix acc(size, size);
        acc.setIdentity();
        for (int i = 0; i < std::abs(nm.first); ++i) acc = acc * (nm.first > 0 ? polar.u.matrix : polar.u_star.matrix);
        for (int i = 0; i < std::abs(nm.second); ++i) acc = acc * (nm.second > 0 ? polar.v.matrix : polar.v_star.matrix);
        return cache.emplace(nm, acc.cast<Complex>()).first->second;
    }
};

std::vector<const GridOperator*> shift_sequence(const PolarOperators& p, Bidegree nm) {
    std::vector<const GridOperator*> out;
    for (int i = 0; i < std::abs(nm.first); ++i) out.push_back(nm.first > 0 ? &p.u : &p.u_star);
    for (int i = 0; i < std::abs(nm.second); ++i) out.push_back(nm.second > 0 ? &p.v : &p.v_star);
    return out;
}

}  // namespace

ComplexSparseMatrix to_operator(const FunElement& f, const QGrid& grid) {
    if (f.q() != grid.config.q) throw std::invalid_argument("element and grid use different q");
    ShiftMatrices shifts{polar_operators(grid), {}};
    const auto size = static_cast<Eigen::Index>(grid.size());
    ComplexSparseMatrix out(size, size);
    for (const auto& [nm, phi] : f.terms()) {
        std::vector<Eigen::Triplet<Complex>> entries;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const Complex v = phi(grid.points[i].s, grid.points[i].t);
            if (v != Complex(0.0)) entries.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), v);
        }
        ComplexSparseMatrix diag(size, size);
        diag.setFromTriplets(entries.begin(), entries.end());
        out += diag * shifts.get(nm);
    }
    out.prune(Complex(0.0));
    return out;
}

ComplexSparseMatrix to_operator(const MultiplierFunction& p, const QGrid& grid) { return to_operator(p.element(), grid); }

Mask exact_columns(const FunElement& f, const QGrid& grid) {
    const PolarOperators polar = polar_operators(grid);
    Mask out(grid.size(), true);
    for (const auto& [nm, phi] : f.terms()) {
        const auto seq = shift_sequence(polar, nm);
        if (!seq.empty()) out = mask_and(out, exact_columns(seq));
    }
    return out;
}

NormResult power_norm(const ComplexSparseMatrix& m, const PowerOptions& options) {
    NormResult result;
    const Eigen::Index n = m.cols();
    if (n == 0) {
        result.converged = true;
        return result;
    }
    const ComplexSparseMatrix adj = m.adjoint();
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n) / std::sqrt(static_cast<double>(n));
    double lambda = 0.0;
    for (int it = 1; it <= options.max_iterations; ++it) {
        const Eigen::VectorXcd x = adj * (m * v);
        lambda = v.dot(x).real();
        const double xn = x.norm();
        result.iterations = it;
        if (xn == 0.0) {
            result.value = 0.0;
            result.residual = 0.0;
            result.converged = true;
            return result;
        }
        result.residual = (x - lambda * v).norm() / lambda;
        if (result.residual <= options.tolerance) {
            result.converged = true;
            break;
        }
        v = x / xn;
        // Components along small singular values decay geometrically; flush
        // them before they reach the (slow) subnormal range.
        for (Eigen::Index i = 0; i < n; ++i)
            if (std::abs(v[i].real()) < 1e-150 && std::abs(v[i].imag()) < 1e-150) v[i] = Complex(0.0);
    }
    result.value = std::sqrt(std::max(lambda, 0.0));
    return result;
}

NormResult operator_norm(const FunElement& f, const QGrid& grid, const PowerOptions& options) {
    return power_norm(to_operator(f, grid), options);
}

double grid_sup(const FunElement& f, const QGrid& grid) {
    for (const auto& [nm, phi] : f.terms())
        if (nm != Bidegree{0, 0}) throw std::invalid_argument("grid sup needs a pure-function element");
    auto it = f.terms().find({0, 0});
    if (it == f.terms().end()) return 0.0;
    double out = 0.0;
    for (const auto& p : grid.points) out = std::max(out, std::abs(it->second(p.s, p.t)));
    return out;
}

Complex character_origin(const FunElement& f) {
    auto it = f.terms().find({0, 0});
    return it == f.terms().end() ? Complex(0.0) : it->second(0.0, 0.0);
}

CqElement restrict_to_cq(const FunElement& f) {
    CqElement out{f.q(), {}};
    for (const auto& [nm, phi] : f.terms())
        if (nm.second == 0) out.terms[nm.first] = [phi](double s) { return phi(s, 0.0); };
    return out;
}

ComplexSparseMatrix cq_operator(const CqElement& f, const QGrid& grid) {
    // nu points are (level, cell) with s = q^level tau_cell; U moves level -> level-1.
    const auto& pts = grid.nu.points;
    const int cells = grid.config.cells;
    const int k_lo = grid.config.k_lo, k_hi = grid.config.k_hi;
    const auto size = static_cast<Eigen::Index>(pts.size());
    auto position = [&](int level, int cell) -> Eigen::Index { return static_cast<Eigen::Index>((level - k_lo) * cells + cell); };
    ComplexSparseMatrix out(size, size);
    for (const auto& [n, fn] : f.terms) {
        std::vector<Eigen::Triplet<Complex>> entries;
        for (const auto& src : pts) {
            const int level = src.level - n;
            if (level < k_lo || level > k_hi) continue;
            const double s = std::pow(f.q, level) * grid.tau[static_cast<std::size_t>(src.cell)];
            const Complex v = fn(s);
            if (v != Complex(0.0)) entries.emplace_back(position(level, src.cell), position(src.level, src.cell), v);
        }
        ComplexSparseMatrix term(size, size);
        term.setFromTriplets(entries.begin(), entries.end());
        out += term;
    }
    out.prune(Complex(0.0));
    return out;
}

FunElement fun_element_from_json(const json& doc, double q) {
    std::vector<CoeffTerm> terms;
    try {
        for (const auto& t : doc.at("terms")) {
            CoeffTerm term;
            term.n = t.value("n", 0);
            term.m = t.value("m", 0);
            term.f = CoeffFunction::from_expression(t.at("f").get<std::string>());
            term.f.vanishes_at_s0 = t.value("vanishes_at_s0", false);
            term.f.vanishes_at_t0 = t.value("vanishes_at_t0", false);
            term.f.vanishes_at_infinity = t.value("vanishes_at_infinity", true);
            if (t.contains("tail_radius")) term.f.tail_radius = t["tail_radius"].get<double>();
            if (t.contains("tail_bound")) term.f.tail_bound = t["tail_bound"].get<double>();
            terms.push_back(std::move(term));
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed function element: ") + e.what());
    }
    return make_element(q, terms);
}

json to_json(const FunElement& f) {
    if (f.source().empty() && !f.is_zero()) throw std::logic_error("element has no expression source");
    json terms = json::array();
    for (const auto& t : f.source()) {
        if (t.f.expression.empty()) throw std::logic_error("coefficient has no expression source");
        terms.push_back({{"n", t.n},
                         {"m", t.m},
                         {"f", t.f.expression},
                         {"vanishes_at_s0", t.f.vanishes_at_s0},
                         {"vanishes_at_t0", t.f.vanishes_at_t0},
                         {"vanishes_at_infinity", t.f.vanishes_at_infinity}});
    }
    return {{"terms", terms}};
}

}  // namespace qplane
