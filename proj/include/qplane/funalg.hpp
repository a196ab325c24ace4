#pragma once

#include "qplane/algebra.hpp"
#include "qplane/l2grid.hpp"
#include "qplane/numeric.hpp"

#include <json.hpp>

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qplane {

using Complex = std::complex<double>;
/// Function of the grid coordinates (s,t).
using GridFunction = std::function<Complex(double s, double t)>;

/// A function f(x,y) on [0,inf)^2, applied as f(|z1|, |z2|).
struct CoeffFunction {
    std::function<Complex(double x, double y)> f;
    bool vanishes_at_s0 = false;  ///< f(0,y) = 0
    bool vanishes_at_t0 = false;  ///< f(x,0) = 0
    bool vanishes_at_infinity = true;
    double tail_radius = 100.0;
    double tail_bound = 1e-8;
    std::string expression;  ///< DSL source when built from text

    static CoeffFunction from_expression(std::string_view text);
};

struct FlagViolation {
    std::string condition;
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;
};

/// Numerical spot-check of the declared flags plus any extra requirements.
std::optional<FlagViolation> spot_check(const CoeffFunction& f, bool need_s0 = false, bool need_t0 = false);

struct CoeffTerm {
    int n = 0;
    int m = 0;
    CoeffFunction f;
};

using Bidegree = std::pair<int, int>;

/// Finite sum of phi_nm(s,t) U^{#n} V^{#m}; coefficients live in grid
/// coordinates, phi = f(M1(s,t), t) for user-supplied f.
class FunElement {
public:
    explicit FunElement(double q = 0.5);

    double q() const { return q_; }
    const std::map<Bidegree, GridFunction>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// Source coefficients when the element was built by make_element.
    const std::vector<CoeffTerm>& source() const { return source_; }

    void add(Bidegree nm, GridFunction phi);
    FunElement& operator+=(const FunElement& rhs);
    friend FunElement operator+(FunElement a, const FunElement& b) { return a += b; }

private:
    friend FunElement make_element(double q, const std::vector<CoeffTerm>& coeffs);

    double q_;
    std::map<Bidegree, GridFunction> terms_;
    std::vector<CoeffTerm> source_;
};

/// Validates every coefficient: n != 0 requires vanishing at x = 0, m != 0
/// vanishing at y = 0.  Throws std::invalid_argument naming the term.
FunElement make_element(double q, const std::vector<CoeffTerm>& coeffs);

FunElement fun_multiply(const FunElement& a, const FunElement& b);
FunElement fun_adjoint(const FunElement& a);
inline FunElement operator*(const FunElement& a, const FunElement& b) { return fun_multiply(a, b); }

/// M1(s,t) = chi_[1/q,inf)(s) sqrt(s^2-1) t + s chi_0(t).
double modulus_z1(double q, double s, double t);
/// Projections U*U, UU* and V*V = VV* as functions of (s,t).
double projection_u_star_u(double q, double s, double t);
double projection_u_u_star(double q, double s, double t);
double projection_v(double t);

struct MultiplierFunction {
    GridFunction p;
    int n = 0;
    int m = 0;
    double q = 0.5;

    FunElement element() const;
};

/// z1^k z1*^l z2^m z2*^n = p(s,t) U^{#k-l} V^{#m-n}.
MultiplierFunction word_to_fun(const NormalMonomial& mono, double q);

/// Matrix of F on the grid in the orthonormal point basis.
ComplexSparseMatrix to_operator(const FunElement& f, const QGrid& grid);
ComplexSparseMatrix to_operator(const MultiplierFunction& p, const QGrid& grid);
/// Columns on which every term's shift acts without leaving the window.
Mask exact_columns(const FunElement& f, const QGrid& grid);

struct PowerOptions {
    double tolerance = 1e-10;  ///< relative residual of the Rayleigh pair
    int max_iterations = 200000;
};

struct NormResult {
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;  ///< relative residual at the last iterate
};

/// Largest singular value by power iteration on M*M from the normalized
/// all-ones vector.
NormResult power_norm(const ComplexSparseMatrix& m, const PowerOptions& options = {});
NormResult operator_norm(const FunElement& f, const QGrid& grid, const PowerOptions& options = {});

/// max over grid points of |phi_00(s,t)|; throws std::invalid_argument unless
/// the element is a pure function (only the (0,0) term).
double grid_sup(const FunElement& f, const QGrid& grid);

/// f_00(0,0), the evaluation at the classical point.
Complex character_origin(const FunElement& f);

/// One-variable element n -> f_n0(s, 0) of the algebra generated by C0 and U.
struct CqElement {
    double q = 0.5;
    std::map<int, std::function<Complex(double s)>> terms;
};

CqElement restrict_to_cq(const FunElement& f);
/// Operator of a one-variable element on L2([0,inf), nu) sampled at the
/// grid's nu points, with U h(s) = h(qs).
ComplexSparseMatrix cq_operator(const CqElement& f, const QGrid& grid);

/// {"terms":[{"n":1,"m":0,"f":"x*exp(-x-y)"}]}; optional per-term flags
/// "vanishes_at_s0", "vanishes_at_t0", "vanishes_at_infinity".
FunElement fun_element_from_json(const nlohmann::json& doc, double q);
/// Throws std::logic_error for elements without expression sources.
nlohmann::json to_json(const FunElement& f);

}  // namespace qplane
