#pragma once

#include "qplane/algebra.hpp"
#include "qplane/numeric.hpp"

#include <json.hpp>

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace qplane {

/// Summands of a well-behaved representation: the trivial atom (N), the
/// kernel ladder of z2 (K), the faithful lattice (H), or a block-diagonal
/// sum of all three.
enum class RepType { N, K, H, direct_sum };

std::string to_string(RepType type);
RepType rep_type_from_string(const std::string& name);

struct RepConfig {
    RepType type = RepType::H;
    double q = 0.5;
    std::vector<double> a_values;  ///< diagonal of A (K blocks)
    std::vector<double> b_values;  ///< diagonal of B (H blocks)
    int n_min = -4;                ///< truncation of the Z index (k for K, n for H)
    int n_max = 4;
    int m_max = 8;                 ///< truncation of the N index (H only)
    int atoms = 1;                 ///< number of N atoms (N, direct_sum)
    int budget = 2;                ///< word-length budget of the interior mask

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

/// {"type":"H","q":0.5,"b":[0.6,0.9],"n_range":[-4,4],"m_max":8}
/// Optional keys: "a", "atoms", "budget".  The result is validated.
RepConfig rep_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const RepConfig& cfg);

struct AtomIndex {
    int atom = 0;
    friend bool operator==(const AtomIndex&, const AtomIndex&) = default;
};
struct LadderIndex {
    int k = 0;
    int a_slot = 0;
    friend bool operator==(const LadderIndex&, const LadderIndex&) = default;
};
struct LatticeIndex {
    int n = 0;
    int m = 1;
    int b_slot = 0;
    friend bool operator==(const LatticeIndex&, const LatticeIndex&) = default;
};
using BasisIndex = std::variant<AtomIndex, LadderIndex, LatticeIndex>;

std::string to_string(const BasisIndex& index);

/// Result of applying one generator to one basis vector of the untruncated
/// representation.
struct Step {
    enum class Kind { annihilated, inside, escaped };
    Kind kind = Kind::annihilated;
    std::size_t target = 0;  ///< valid when kind == inside
    double coeff = 0.0;
};

class RepOperators {
public:
    const RepConfig& config() const { return config_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<BasisIndex>& basis() const { return basis_; }
    std::optional<std::size_t> index_of(const BasisIndex& index) const;

    const SparseMatrix& z1() const { return z1_; }
    const SparseMatrix& z2() const { return z2_; }
    const SparseMatrix& z1_star() const { return z1_star_; }
    const SparseMatrix& z2_star() const { return z2_star_; }
    const SparseMatrix& generator(Letter letter) const;

    /// Interior mask for the configured budget.
    const Mask& interior_mask() const { return interior_; }
    /// Basis vectors whose images under every word of length <= budget stay
    /// inside the truncation window.
    Mask interior_mask(int budget) const;

    Step step(std::size_t column, Letter letter) const;
    /// Columns on which every listed word acts exactly: the letter-by-letter
    /// path from the column is annihilated or stays inside the window.
    Mask exact_columns(std::span<const Word> words) const;

private:
    friend RepOperators build_rep(const RepConfig& cfg);

    Step step_from(const BasisIndex& index, Letter letter) const;

    RepConfig config_;
    std::vector<BasisIndex> basis_;
    SparseMatrix z1_, z2_, z1_star_, z2_star_;
    Mask interior_;
};

/// Throws std::invalid_argument for an invalid config (including empty
/// spectral lists for a type that needs them).
RepOperators build_rep(const RepConfig& cfg);

/// Sum of coeff * Z1^k (Z1*)^l Z2^m (Z2*)^n.
SparseMatrix apply_element(const RepOperators& rep, const NumericElement& element);
/// Letter-by-letter product of the generator matrices.
SparseMatrix word_matrix(const RepOperators& rep, const Word& word);

struct CheckResult {
    std::string name;
    double residual = 0.0;  ///< max |entry| over interior columns
    double scale = 0.0;     ///< max |entry| of the compared terms
    std::size_t columns = 0;

    double scaled() const { return residual / std::max(1.0, scale); }
    bool passed(double tol) const { return scaled() <= tol; }
};

nlohmann::json to_json(const CheckResult& check, double tol);

/// Residual of sum(terms) on the masked columns; the scale is the largest
/// |entry| of any single term.
CheckResult residual_check(std::string name, const std::vector<SparseMatrix>& terms, const Mask& columns);

/// The six defining relations on the budget-2 interior columns.
std::vector<CheckResult> relation_residuals(const RepOperators& rep);
/// The six defining relations for arbitrary generator matrices.
std::vector<CheckResult> relation_residuals(const SparseMatrix& z1, const SparseMatrix& z2, const SparseMatrix& z1_star,
                                            const SparseMatrix& z2_star, double q, const Mask& columns);

struct EigenvalueSample {
    LatticeIndex index;
    double value = 0.0;
    double expected = 0.0;
};

struct AuditReport {
    std::vector<CheckResult> checks;
    std::vector<EigenvalueSample> ww_eigenvalues;  ///< W*W on interior lattice vectors
    double eigenvalue_error = 0.0;
    std::size_t kernel_columns = 0;
    std::size_t complement_columns = 0;
    std::size_t near_singular = 0;  ///< 0 < Q_ii below the inversion threshold
    bool skipped_w_checks = false;  ///< Q vanishes identically

    bool passed(double tol) const;
};

nlohmann::json to_json(const AuditReport& report, double tol);

/// Finite-dimensional audit of the well-behavedness conditions.
AuditReport wellbehaved_audit(const RepOperators& rep);

struct FaithfulnessReport {
    int degree_budget = 0;
    std::vector<NormalMonomial> monomials;
    std::vector<bool> killed;               ///< image vanishes on interior columns
    std::vector<double> singular_values;    ///< of the column-normalized image matrix
    std::size_t rank = 0;
    double min_singular_value = 0.0;        ///< over the non-killed monomials
    std::size_t interior_columns = 0;

    bool full_rank() const { return rank == monomials.size(); }
};

inline constexpr double kRankThreshold = 1e-8;

nlohmann::json to_json(const FaithfulnessReport& report);

FaithfulnessReport faithfulness_probe(const RepOperators& rep, int degree_budget);

}  // namespace qplane
