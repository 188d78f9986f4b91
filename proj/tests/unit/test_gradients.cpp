#include <doctest.h>

#include "socs/oracle.hpp"
#include "socs/tensorized.hpp"
#include "socs/training.hpp"

using namespace socs;

namespace {

Model small_model(ModelClass cls, InputFamily fam, int num_vars, std::uint64_t seed,
                  int num_squares = 1) {
  LayerSpec spec;
  spec.model_class = cls;
  spec.input_family = fam;
  spec.sum_units = 2;
  spec.input_units = 2;
  spec.num_squares = num_squares;
  spec.seed = seed;
  auto rg = std::make_shared<RegionGraph>(RegionGraph::random_binary_tree(num_vars, seed));
  auto vars = fam == InputFamily::Gaussian
                  ? std::make_shared<VariableTable>([&] {
                      std::vector<Variable> vs;
                      for (int i = 0; i < num_vars; ++i) {
                        vs.push_back({"X" + std::to_string(i + 1), Domain::real_line()});
                      }
                      return vs;
                    }())
                  : boolean_variables(num_vars);
  return build(rg, vars, spec);
}

void check_against_finite_differences(Model m, const std::vector<Assignment>& rows) {
  std::vector<const Assignment*> batch;
  for (const auto& r : rows) batch.push_back(&r);
  std::vector<double> grad(m.params.size(), 0.0);
  nll_batch_grad(m, batch, grad);

  Model probe = m;
  auto loss_fn = [&](const std::vector<double>& theta) {
    probe.params = theta;
    return nll_batch(probe, batch).loss;
  };
  const auto fd = finite_difference_gradient(loss_fn, m.params, 1e-5);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    INFO(m.param_names[i]);
    CHECK(grad[i] ==
          doctest::Approx(fd[i]).epsilon(1e-4).scale(std::max(1.0, std::abs(fd[i]))));
  }
}

}  // namespace

TEST_CASE("finite differences validate the reverse sweep per model class") {
  const std::vector<Assignment> boolean_rows = {{0, 1, 0}, {1, 1, 1}, {1, 0, 0}};

  SUBCASE("monotone categorical") {
    check_against_finite_differences(small_model(ModelClass::Monotone, InputFamily::Categorical,
                                                 3, 11),
                                     boolean_rows);
  }
  SUBCASE("squared real embeddings") {
    check_against_finite_differences(small_model(ModelClass::SquaredReal,
                                                 InputFamily::EmbeddingReal, 3, 12),
                                     boolean_rows);
  }
  SUBCASE("squared complex embeddings") {
    check_against_finite_differences(small_model(ModelClass::SquaredComplex,
                                                 InputFamily::EmbeddingComplex, 3, 13),
                                     boolean_rows);
  }
  SUBCASE("sum of four squares") {
    check_against_finite_differences(small_model(ModelClass::Socs, InputFamily::EmbeddingComplex,
                                                 3, 14, 4),
                                     boolean_rows);
  }
  SUBCASE("monotone times squares") {
    check_against_finite_differences(small_model(ModelClass::MonotoneTimesSocs,
                                                 InputFamily::EmbeddingComplex, 3, 15),
                                     boolean_rows);
  }
  SUBCASE("gaussian leaves in a squared real model") {
    check_against_finite_differences(small_model(ModelClass::SquaredReal, InputFamily::Gaussian,
                                                 2, 16),
                                     {{0.3, -0.8}, {1.2, 0.1}});
  }
  SUBCASE("gaussian leaves in a monotone-times-squares model") {
    check_against_finite_differences(small_model(ModelClass::MonotoneTimesSocs,
                                                 InputFamily::Gaussian, 2, 17),
                                     {{0.3, -0.8}, {-0.4, 0.9}});
  }
}

TEST_CASE("zero data terms raise a numerical error") {
  auto vars = boolean_variables(1);
  CircuitBuilder b(vars);
  const UnitId i1 = b.add_input(0, InputFunction(Indicator{1}));
  Model m;
  m.cls = ModelClass::Monotone;
  m.components.push_back(b.build(b.add_sum({i1}, {WeightExpr::lit(1.0)})));
  m.normalizer = m.components[0];
  m.vars = vars;
  const Assignment x{0.0};  // c(x) = 0
  std::vector<const Assignment*> batch{&x};
  CHECK_THROWS_AS(nll_batch(m, batch), NumericalError);
}
