#pragma once

#include "qplane/algebra.hpp"
#include "qplane/numeric.hpp"
#include "qplane/representation.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qplane {

struct GridConfig {
    double q = 0.5;
    int n_sigma = 8;   ///< sigma lattice q^-1 .. q^-n_sigma
    int cells = 16;    ///< uniform midpoint cells of (q,1]
    int k_lo = -6;     ///< dilation levels q^k (q,1], k in [k_lo, k_hi]
    int k_hi = 6;
    int epsilon = 1;

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

/// {"q":0.5,"n_sigma":8,"cells":16,"k_range":[-6,6],"epsilon":1}
GridConfig grid_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const GridConfig& cfg);

struct MeasurePoint {
    int level = 0;  ///< dilation level (sigma: lattice index n)
    int cell = 0;
    double coord = 0.0;
    double weight = 0.0;
};

struct QMeasure1D {
    enum class Kind { lattice_sigma, dilated_lebesgue, dirac0 };
    Kind kind = Kind::dirac0;
    double q = 0.5;
    std::vector<MeasurePoint> points;  ///< level-major, cell-minor
};

std::string to_string(QMeasure1D::Kind kind);

/// sigma({q^-n}) = 1 for n = 1..n_sigma.
QMeasure1D lattice_sigma(double q, int n_sigma);
/// Lebesgue measure on uniform cells of (q,1], transported to every level:
/// the point q^k tau_j carries the width of cell j for all k.
QMeasure1D dilated_lebesgue(double q, int cells, int k_lo, int k_hi);

enum class Component { atom00, nu_delta0, sigma_mu };

std::string to_string(Component component);

/// Point identity by indices only.  sigma_mu: (sigma, level, cell);
/// nu_delta0: (level, cell); atom00: no indices.
struct GridIndex {
    Component component = Component::atom00;
    int sigma = 0;
    int level = 0;
    int cell = 0;
    friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

struct GridPoint {
    GridIndex index;
    double s = 0.0;
    double t = 0.0;
    double weight = 0.0;
};

/// Finite piece of L2([0,inf)^2, sigma x mu + nu x delta0 + eps delta0 x delta0).
/// Points are ordered atom00, nu_delta0 (level, cell), sigma_mu (sigma, level, cell).
struct QGrid {
    GridConfig config;
    QMeasure1D sigma, mu, nu;
    std::vector<double> tau;  ///< cell midpoints in (q,1]
    std::vector<GridPoint> points;

    std::size_t size() const { return points.size(); }
    std::optional<std::size_t> index_of(const GridIndex& index) const;
    /// Coordinates of an index, also outside the window.
    std::pair<double, double> coordinates(const GridIndex& index) const;
    /// Points whose images under all words of length <= budget stay in the window.
    Mask interior_mask(int budget) const;
    Mask component_mask(Component component) const;
};

QGrid build_grid(const GridConfig& cfg);

struct LevelOffense {
    std::string measure;
    int level = 0;
    double expected = 0.0;
    double actual = 0.0;
};

struct QInvarianceReport {
    std::vector<std::pair<int, double>> mu_levels;  ///< (level, total weight)
    std::vector<std::pair<int, double>> nu_levels;
    bool sigma_unit = true;
    std::optional<LevelOffense> offense;  ///< first failing level

    bool passed() const { return !offense; }
};

nlohmann::json to_json(const QInvarianceReport& report);

/// Per-cell weights identical on every level, level totals identical, and
/// every sigma weight equal to 1.  All comparisons are exact.
QInvarianceReport check_q_invariance(const QGrid& grid);

/// Weighted shift: column j is sent to steps[j].target with steps[j].coeff,
/// i.e. (T h)(p) = c(p) h(src(p)) in function coordinates.
struct GridOperator {
    std::string name;
    std::vector<Step> steps;
    SparseMatrix matrix;  ///< in the orthonormal point basis

    /// Columns whose image left the window with a non-zero coefficient.
    Mask boundary() const;
};

struct GridGenerators {
    GridOperator z1, z1_star, z2, z2_star;
    const GridOperator& of(Letter letter) const;
};

struct PolarOperators {
    GridOperator abs_z1, abs_z2, u, u_star, v, v_star;
};

GridGenerators generator_operators(const QGrid& grid);
PolarOperators polar_operators(const QGrid& grid);

/// Letter-by-letter product of generator matrices.
SparseMatrix word_matrix(const GridGenerators& gens, const Word& word);
/// Columns on which every word acts exactly (paths annihilated or inside).
Mask exact_columns(const GridGenerators& gens, std::span<const Word> words);
/// Same for an arbitrary sequence of grid operators, applied right to left.
Mask exact_columns(std::span<const GridOperator* const> product);

/// Diagonal multiplication operator by a real function of the point.
SparseMatrix diagonal_matrix(const QGrid& grid, const std::function<double(const GridPoint&)>& f);

struct Decomposition {
    std::vector<std::size_t> atom00, nu_delta0, sigma_mu;
};

Decomposition decompose(const QGrid& grid);

/// |z1| on the grid: chi_[1/q,inf)(s) sqrt(s^2-1) t + s chi_0(t).
double modulus_z1(const QGrid& grid, const GridPoint& point);

/// The six defining relations on the budget-2 interior grid points.
std::vector<CheckResult> relation_residuals(const QGrid& grid);

/// V*V = VV* = chi_(0,inf)(t), U*U and UU* against their projection
/// diagonals (on columns where the products act exactly), and the four
/// commutations of U, U* with V, V* on all columns.
std::vector<CheckResult> partial_isometry_checks(const QGrid& grid);

nlohmann::json to_json(const QGrid& grid);
nlohmann::json to_json(const QGrid& grid, const GridOperator& op);

}  // namespace qplane
