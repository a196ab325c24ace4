#include "qplane/l2grid.hpp"
#include "qplane/representation.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qplane;

namespace {

GridConfig small_config(int cells = 4) {
    GridConfig cfg;
    cfg.q = 0.5;
    cfg.n_sigma = 6;
    cfg.cells = cells;
    cfg.k_lo = -4;
    cfg.k_hi = 4;
    cfg.epsilon = 1;
    return cfg;
}

bool same_component(const QGrid& g, const SparseMatrix& m) {
    for (Eigen::Index c = 0; c < m.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(m, c); it; ++it)
            if (g.points[static_cast<std::size_t>(it.row())].index.component != g.points[static_cast<std::size_t>(c)].index.component)
                return false;
    return true;
}

SparseMatrix diag_of(const QGrid& g, double (*f)(const GridPoint&, double)) {
    const double q = g.config.q;
    return diagonal_matrix(g, [&](const GridPoint& p) { return f(p, q); });
}

}  // namespace

TEST_CASE("grid layout") {
    const QGrid g = build_grid(small_config());
    const auto d = decompose(g);
    CHECK(d.atom00.size() == 1);
    CHECK(d.nu_delta0.size() == 9 * 4);
    CHECK(d.sigma_mu.size() == 6 * 9 * 4);
    CHECK(g.size() == d.atom00.size() + d.nu_delta0.size() + d.sigma_mu.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto& p = g.points[i];
        CHECK(p.weight > 0.0);
        CHECK(g.index_of(p.index) == i);
        switch (p.index.component) {
            case Component::atom00: CHECK((p.s == 0.0 && p.t == 0.0)); break;
            case Component::nu_delta0: CHECK((p.t == 0.0 && p.s > 0.0)); break;
            case Component::sigma_mu:
                CHECK(p.t > 0.0);
                CHECK(p.s == std::pow(0.5, -p.index.sigma));
                break;
        }
    }
    auto cfg = small_config();
    cfg.epsilon = 0;
    CHECK(decompose(build_grid(cfg)).atom00.empty());
}

TEST_CASE("measure construction") {
    const QGrid g = build_grid(small_config());
    const auto report = check_q_invariance(g);
    CHECK(report.passed());
    CHECK(report.sigma_unit);
    for (const auto& [k, w] : report.mu_levels) CHECK(w == report.mu_levels.front().second);
    // mu((q,1]) is the level-0 total, 1 - q
    for (const auto& [k, w] : report.mu_levels)
        if (k == 0) CHECK(w == doctest::Approx(0.5).epsilon(1e-15));
    for (const auto& p : g.sigma.points) CHECK(p.weight == 1.0);
    for (const auto& p : g.mu.points) {
        CHECK(p.coord > std::pow(0.5, p.level + 1));
        CHECK(p.coord <= std::pow(0.5, p.level));
    }
}

TEST_CASE("perturbed weights are caught at their level") {
    QGrid g = build_grid(small_config());
    for (auto& p : g.mu.points)
        if (p.level == 2 && p.cell == 1) p.weight += 1e-3;
    const auto report = check_q_invariance(g);
    REQUIRE_FALSE(report.passed());
    CHECK(report.offense->measure == "mu");
    CHECK(report.offense->level == 2);
    CHECK(report.offense->actual - report.offense->expected == doctest::Approx(1e-3));

    QGrid h = build_grid(small_config());
    h.nu.points.front().weight *= 1.001;
    const auto r2 = check_q_invariance(h);
    REQUIRE_FALSE(r2.passed());
    CHECK(r2.offense->measure == "nu");
    CHECK(r2.offense->level == -4);

    QGrid s = build_grid(small_config());
    s.sigma.points[3].weight = 0.5;
    CHECK_FALSE(check_q_invariance(s).sigma_unit);
}

TEST_CASE("refinement nests the midpoints") {
    const QGrid coarse = build_grid(small_config(4));
    const QGrid fine = build_grid(small_config(12));
    for (std::size_t j = 0; j < coarse.tau.size(); ++j) CHECK(fine.tau[3 * j + 1] == doctest::Approx(coarse.tau[j]).epsilon(1e-15));
}

TEST_CASE("sigma_mu with one cell is the lattice representation") {
    GridConfig gc = small_config(1);
    gc.n_sigma = 8;
    const QGrid g = build_grid(gc);
    CHECK(g.tau.front() == 0.75);
    const auto gens = generator_operators(g);

    RepConfig rc;
    rc.type = RepType::H;
    rc.q = 0.5;
    rc.b_values = {0.75};
    rc.n_min = gc.k_lo;
    rc.n_max = gc.k_hi;
    rc.m_max = gc.n_sigma;
    const auto rep = build_rep(rc);

    std::vector<std::size_t> to_grid(rep.dim());
    for (std::size_t i = 0; i < rep.dim(); ++i) {
        const auto& h = std::get<LatticeIndex>(rep.basis()[i]);
        to_grid[i] = *g.index_of({Component::sigma_mu, h.m, h.n, 0});
    }
    const Mask interior = rep.interior_mask(2);
    for (Letter letter : kAllLetters) {
        const Eigen::MatrixXd a(rep.generator(letter));
        const Eigen::MatrixXd b(gens.of(letter).matrix);
        double worst = 0.0;
        for (std::size_t c = 0; c < rep.dim(); ++c) {
            if (!interior[c]) continue;
            for (std::size_t r = 0; r < rep.dim(); ++r) {
                const double x = a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                const double y = b(static_cast<Eigen::Index>(to_grid[r]), static_cast<Eigen::Index>(to_grid[c]));
                worst = std::max(worst, std::abs(x - y) / std::max(1.0, std::abs(x)));
            }
        }
        CHECK_MESSAGE(worst <= 1e-10, to_string(letter));
    }
}

TEST_CASE("nu_delta0 carries the ladder representation") {
    const QGrid g = build_grid(small_config(1));
    const auto gens = generator_operators(g);
    RepConfig rc;
    rc.type = RepType::K;
    rc.q = 0.5;
    rc.a_values = {0.75};
    rc.n_min = g.config.k_lo;
    rc.n_max = g.config.k_hi;
    const auto rep = build_rep(rc);
    for (std::size_t i = 0; i < rep.dim(); ++i) {
        const auto& k = std::get<LadderIndex>(rep.basis()[i]);
        const std::size_t gi = *g.index_of({Component::nu_delta0, 0, k.k, 0});
        for (Letter letter : {Letter::z1, Letter::z1_star}) {
            const Step a = rep.step(i, letter);
            const Step b = gens.of(letter).steps[gi];
            CHECK(a.kind == b.kind);
            if (a.kind == Step::Kind::inside) {
                CHECK(b.coeff == doctest::Approx(a.coeff).epsilon(1e-14));
                CHECK(g.points[b.target].index.level == std::get<LadderIndex>(rep.basis()[a.target]).k);
            }
        }
    }
}

TEST_CASE("generator actions on the small components") {
    const QGrid g = build_grid(small_config());
    const auto gens = generator_operators(g);
    const auto d = decompose(g);
    const double q = 0.5;
    for (std::size_t i : d.nu_delta0) {
        CHECK(gens.z2.steps[i].kind == Step::Kind::annihilated);
        CHECK(gens.z2_star.steps[i].kind == Step::Kind::annihilated);
        const Step& s = gens.z1.steps[i];
        if (s.kind == Step::Kind::inside) {
            // z1 h(s,0) = q s h(qs,0): the target point p has source qs_p
            CHECK(g.points[s.target].s * q == doctest::Approx(g.points[i].s).epsilon(1e-15));
            CHECK(s.coeff == doctest::Approx(q * g.points[s.target].s).epsilon(1e-15));
        }
    }
    for (Letter letter : kAllLetters) CHECK(gens.of(letter).steps[d.atom00.front()].kind == Step::Kind::annihilated);
    for (std::size_t i : d.sigma_mu)
        if (g.points[i].index.sigma == 1) CHECK(gens.z1_star.steps[i].kind == Step::Kind::annihilated);
    for (Letter letter : kAllLetters) CHECK(same_component(g, gens.of(letter).matrix));
    CHECK(masked_max_abs(gens.z2.matrix, mask_and(g.component_mask(Component::nu_delta0), Mask(g.size(), true))) == 0.0);
    CHECK(masked_max_abs(gens.z2.matrix, g.component_mask(Component::atom00)) == 0.0);
}

TEST_CASE("boundary columns") {
    const QGrid g = build_grid(small_config());
    const auto gens = generator_operators(g);
    const Mask b = gens.z1.boundary();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto& idx = g.points[i].index;
        const bool expected = (idx.component == Component::sigma_mu && idx.sigma == g.config.n_sigma) ||
                              (idx.component == Component::nu_delta0 && idx.level == g.config.k_lo);
        CHECK(b[i] == expected);
    }
    const Mask inner = g.interior_mask(2);
    for (Letter letter : kAllLetters)
        for (std::size_t i = 0; i < g.size(); ++i)
            if (inner[i]) CHECK(gens.of(letter).steps[i].kind != Step::Kind::escaped);
}

TEST_CASE("relations on the grid") {
    const QGrid g = build_grid(small_config());
    const auto gens = generator_operators(g);
    for (const auto& c : relation_residuals(gens.z1.matrix, gens.z2.matrix, gens.z1_star.matrix, gens.z2_star.matrix,
                                            g.config.q, g.interior_mask(2))) {
        CHECK_MESSAGE(c.passed(1e-10), c.name, " ", c.scaled());
        CHECK(c.columns > 0);
    }
}

TEST_CASE("partial isometries") {
    const QGrid g = build_grid(small_config());
    const auto p = polar_operators(g);
    const SparseMatrix chi_t = diag_of(g, [](const GridPoint& x, double) { return x.t > 0.0 ? 1.0 : 0.0; });
    const SparseMatrix uu_star_expected = diag_of(g, [](const GridPoint& x, double q) {
        if (x.t > 0.0) return q * x.s >= (1.0 / q) * (1 - 1e-9) ? 1.0 : 0.0;
        return x.s > 0.0 ? 1.0 : 0.0;
    });
    const SparseMatrix u_star_u_expected = diag_of(g, [](const GridPoint& x, double q) {
        if (x.t > 0.0) return x.s >= (1.0 / q) * (1 - 1e-9) ? 1.0 : 0.0;
        return x.s > 0.0 ? 1.0 : 0.0;
    });
    auto exact = [](std::initializer_list<const GridOperator*> ops) {
        return exact_columns(std::span<const GridOperator* const>(ops.begin(), ops.size()));
    };
    const Mask vv = mask_and(exact({&p.v_star, &p.v}), exact({&p.v, &p.v_star}));
    CHECK(count(vv) > 0);
    CHECK(scaled_column_difference(SparseMatrix(p.v_star.matrix * p.v.matrix), chi_t, vv) == 0.0);
    CHECK(scaled_column_difference(SparseMatrix(p.v.matrix * p.v_star.matrix), chi_t, vv) == 0.0);
    const Mask usu = exact({&p.u_star, &p.u});
    const Mask uus = exact({&p.u, &p.u_star});
    CHECK(scaled_column_difference(SparseMatrix(p.u_star.matrix * p.u.matrix), u_star_u_expected, usu) == 0.0);
    CHECK(scaled_column_difference(SparseMatrix(p.u.matrix * p.u_star.matrix), uu_star_expected, uus) == 0.0);
    CHECK(count(uus) > count(g.interior_mask(1)));

    auto commute = [](const GridOperator& a, const GridOperator& b) {
        const SparseMatrix d = a.matrix * b.matrix - SparseMatrix(b.matrix * a.matrix);
        return max_abs(d);
    };
    CHECK(commute(p.u, p.v) == 0.0);
    CHECK(commute(p.u, p.v_star) == 0.0);
    CHECK(commute(p.u_star, p.v) == 0.0);
    CHECK(commute(p.u_star, p.v_star) == 0.0);
}

TEST_CASE("polar decomposition of the generators") {
    const QGrid g = build_grid(small_config());
    const auto gens = generator_operators(g);
    const auto p = polar_operators(g);
    CHECK(max_abs(SparseMatrix(gens.z1.matrix - SparseMatrix(p.u.matrix * p.abs_z1.matrix))) <= 1e-12);
    CHECK(max_abs(SparseMatrix(gens.z2.matrix - SparseMatrix(p.v.matrix * p.abs_z2.matrix))) <= 1e-12);
    const SparseMatrix abs1 = diagonal_matrix(g, [&](const GridPoint& x) { return modulus_z1(g, x); });
    CHECK(max_abs(SparseMatrix(abs1 - p.abs_z1.matrix)) == 0.0);
    const Mask m = g.interior_mask(1);
    const SparseMatrix sq = p.abs_z1.matrix * p.abs_z1.matrix;
    CHECK(scaled_column_difference(SparseMatrix(gens.z1_star.matrix * gens.z1.matrix), sq, m) <= 1e-12);
}

TEST_CASE("V is isometric on the interior") {
    const QGrid g = build_grid(small_config());
    const auto p = polar_operators(g);
    const Mask inner = mask_and(g.interior_mask(1), g.component_mask(Component::sigma_mu));
    std::mt19937 rng(4);
    std::normal_distribution<double> normal;
    double before = 0.0, after = 0.0;
    std::vector<double> image(g.size(), 0.0);
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (!inner[j]) continue;
        const double h = normal(rng);
        const Step& s = p.v.steps[j];
        REQUIRE(s.kind == Step::Kind::inside);
        CHECK(g.points[s.target].weight == g.points[j].weight);
        before += g.points[j].weight * h * h;
        image[s.target] += s.coeff * h;
    }
    for (std::size_t i = 0; i < g.size(); ++i) after += g.points[i].weight * image[i] * image[i];
    CHECK(after == doctest::Approx(before).epsilon(1e-14));
}

TEST_CASE("indicator stability under t-dilation") {
    const QGrid g = build_grid(small_config());
    for (const auto& pt : g.points)
        for (int d : {-1, 1}) {
            GridIndex shifted = pt.index;
            if (shifted.component == Component::sigma_mu) shifted.level += d;
            const double t = g.coordinates(shifted).second;
            CHECK((t > 0.0) == (pt.t > 0.0));
            CHECK((t == 0.0) == (pt.t == 0.0));
        }
}

TEST_CASE("grid config") {
    const auto cfg = grid_config_from_json(nlohmann::json::parse(R"({"q":0.5,"n_sigma":8,"cells":16,"k_range":[-6,6],"epsilon":1})"));
    CHECK(cfg.cells == 16);
    CHECK(cfg.k_lo == -6);
    CHECK(grid_config_from_json(to_json(cfg)).k_hi == 6);
    CHECK_THROWS_AS(grid_config_from_json(nlohmann::json::parse(R"({"q":1.5})")), std::invalid_argument);
    CHECK_THROWS_AS(grid_config_from_json(nlohmann::json::parse(R"({"q":0.5,"cells":0})")), std::invalid_argument);
    CHECK_THROWS_AS(grid_config_from_json(nlohmann::json::parse(R"({"q":0.5,"epsilon":2})")), std::invalid_argument);
    CHECK_THROWS_AS(grid_config_from_json(nlohmann::json::parse(R"({"q":0.5,"n_sigma":1})")), std::invalid_argument);
    const QGrid g = build_grid(small_config());
    const auto dump = to_json(g);
    CHECK(dump["points"].size() == g.size());
    CHECK(dump["points"][0][3] == "atom00");
    const auto op = to_json(g, generator_operators(g).z2);
    CHECK(op["name"] == "z2");
}

TEST_CASE("grid check reports") {
    const QGrid g = build_grid(small_config());
    const auto rel = relation_residuals(g);
    CHECK(rel.size() == 6);
    for (const auto& c : rel) {
        CHECK(c.columns == count(g.interior_mask(2)));
        CHECK_MESSAGE(c.passed(1e-10), c.name);
    }
    const auto iso = partial_isometry_checks(g);
    CHECK(iso.size() == 8);
    for (const auto& c : iso) {
        CHECK(c.columns > 0);
        CHECK_MESSAGE(c.residual == 0.0, c.name);
    }
}
