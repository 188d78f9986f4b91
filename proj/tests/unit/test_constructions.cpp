#include <doctest.h>

#include "socs/compose.hpp"
#include "socs/constructions.hpp"
#include "socs/oracle.hpp"
#include "socs/structure.hpp"

using namespace socs;

TEST_CASE("graph validation") {
  GraphSpec g{2, {{0, 0}}};
  CHECK_THROWS_AS(g.validate(), ConfigError);
  GraphSpec dup{2, {{0, 1}, {1, 0}}};
  CHECK_THROWS_AS(dup.validate(), ConfigError);
  CHECK_NOTHROW(GraphSpec::triangle().validate());
}

TEST_CASE("unique-disjointness values") {
  const GraphSpec g = GraphSpec::single_edge();
  const Circuit c = build_udisj(g);
  CHECK(evaluate(c, {1.0, 1.0}, EvalMode::Linear).real() == doctest::Approx(0.0));
  CHECK(evaluate(c, {1.0, 0.0}, EvalMode::Linear).real() == doctest::Approx(1.0));
  CHECK(evaluate(c, {0.0, 0.0}, EvalMode::Linear).real() == doctest::Approx(1.0));
  CHECK(structured_decomposable(c));
}

TEST_CASE("sum function values") {
  const Circuit c1 = build_sum_function(1);
  // k=1: variables [X1, X11]; X1 = X11 = 1 gives 2^0 = 1
  CHECK(evaluate(c1, {1.0, 1.0}, EvalMode::Linear).real() == doctest::Approx(1.0));

  const Circuit c2 = build_sum_function(2);
  // k=2: X1=1 and X1_2=1 (j=2) contribute 2^1 = 2
  Assignment x(6, 0.0);
  x[0] = 1.0;  // X1
  x[3] = 1.0;  // X1_2
  CHECK(evaluate(c2, x, EvalMode::Linear).real() == doctest::Approx(2.0));
  CHECK(check_monotone(c2));
  CHECK(structured_decomposable(c2));
}

TEST_CASE("plus-sum square count and slices live in the verify suite") {
  const GraphSpec g = GraphSpec::single_edge();
  const Circuit c = build_udisj_plus_sum(g);
  CHECK(c.socs_structure()->components.size() == 5);  // |V|^2 + 1 = 5
  // d = |V|(|V|+1) + 2 = 8 variables for the single edge
  CHECK(c.var_table()->size() == 8);
}

TEST_CASE("times-quadratic values on the single edge") {
  const GraphSpec g = GraphSpec::single_edge();
  const Circuit c = build_udisj_times_quadratic(g);
  CHECK(c.socs_structure()->components.size() == 2);  // |E| + 1
  CHECK(evaluate(c, {1.0, 1.0}, EvalMode::Linear).real() == doctest::Approx(0.0));
  CHECK(evaluate(c, {1.0, 0.0}, EvalMode::Linear).real() == doctest::Approx(1.0));
}

TEST_CASE("motzkin values") {
  CHECK(motzkin_polynomial(1.0, 1.0) == doctest::Approx(0.0));
  CHECK(motzkin_polynomial(0.0, 0.0) == doctest::Approx(1.0));
  CHECK(motzkin_polynomial(2.0, 1.0) == doctest::Approx(9.0));
  const Circuit c = build_motzkin_extension(2);
  CHECK(evaluate(c, {1.0, 1.0, 0.0, 0.0}, EvalMode::Linear).real() == doctest::Approx(0.0));
  CHECK(evaluate(c, {2.0, 1.0, 1.0, 2.0}, EvalMode::Linear).real() == doctest::Approx(14.0));
}

TEST_CASE("value matrices") {
  SUBCASE("constant-one circuit gives the all-ones matrix") {
    auto vars = boolean_variables(4);
    const Circuit one = constant_one(vars, Scope::full(4));
    const ValueMatrix m = value_matrix(one, {0, 1}, {2, 3});
    for (std::size_t i = 0; i < m.rows; ++i) {
      for (std::size_t j = 0; j < m.cols; ++j) CHECK(m.at(i, j) == doctest::Approx(1.0));
    }
  }

  SUBCASE("unique disjointness on a bipartitioned edge") {
    const Circuit c = build_udisj(GraphSpec::single_edge());
    const ValueMatrix m = value_matrix(c, {0}, {1});
    CHECK(m.at(0, 0) == doctest::Approx(1.0));
    CHECK(m.at(0, 1) == doctest::Approx(1.0));
    CHECK(m.at(1, 0) == doctest::Approx(1.0));
    CHECK(m.at(1, 1) == doctest::Approx(0.0));
  }

  SUBCASE("binary sum matrix entries are i + j") {
    const ValueMatrix m = binary_sum_value_matrix(3, 2);
    REQUIRE(m.rows == 8);
    REQUIRE(m.cols == 4);
    CHECK(m.at(0, 0) == 0.0);
    CHECK(m.at(7, 3) == 10.0);
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = 0; j < 4; ++j) CHECK(m.at(i, j) == double(i + j));
    }
  }

  SUBCASE("explicit permutations reorder the rows") {
    // swapping the two Z variables swaps their place values
    const ValueMatrix m = binary_sum_value_matrix(1, 2, {0}, {1, 0});
    CHECK(m.at(0, 1) == 2.0);  // first listed Z variable now weighs 2
    CHECK(m.at(0, 2) == 1.0);
  }

  SUBCASE("budget cap") {
    auto vars = boolean_variables(30);
    std::vector<int> ys, zs;
    for (int i = 0; i < 15; ++i) ys.push_back(i);
    for (int i = 15; i < 30; ++i) zs.push_back(i);
    CHECK_THROWS_AS(
        value_matrix([](const Assignment&) { return 0.0; }, *vars, ys, zs),
        BudgetExceededError);
  }
}

TEST_CASE("prime matrix and ranks") {
  const auto k3 = prime_matrix(3);
  CHECK(k3[0] == std::vector<double>{3, 4, 5});
  CHECK(k3[1] == std::vector<double>{4, 5, 6});
  CHECK(k3[2] == std::vector<double>{5, 6, 7});
  CHECK(matrix_rank(k3) == 2);
  CHECK(sqrank_bruteforce(k3) == 3);
  CHECK(sqrank_bruteforce({{1, 1}, {1, 1}}) == 1);
  CHECK(sqrank_bruteforce({{4}}) == 1);
  CHECK(matrix_rank({{1, 2}, {2, 4}}) == 1);
  CHECK(matrix_rank({{1, 0}, {0, 1}}) == 2);
}

TEST_CASE("brute force tables respect the cap") {
  auto vars = boolean_variables(3);
  const Circuit one = constant_one(vars, Scope::full(3));
  const auto table = brute_force_table(one);
  CHECK(table.size() == 8);
  CHECK_THROWS_AS(brute_force_table(one, 4), BudgetExceededError);
}
