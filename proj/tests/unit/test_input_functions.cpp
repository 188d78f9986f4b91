#include <doctest.h>

#include <cmath>

#include "socs/input_function.hpp"
#include "socs/oracle.hpp"

using namespace socs;

namespace {
double gaussian_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2 * M_PI));
}
}  // namespace

TEST_CASE("leaf integrals") {
  const Domain boolean = Domain::boolean();
  CHECK(InputFunction(Indicator{1}).integrate(boolean, nullptr) == Cplx(1.0, 0.0));

  Categorical c;
  c.probs = {ParamField::fixed(0.4), ParamField::fixed(0.9)};
  CHECK(InputFunction(c).integrate(boolean, nullptr).real() == doctest::Approx(1.3));

  Gaussian g;
  g.mean = ParamField::fixed(1.7);
  g.log_stddev = ParamField::fixed(-0.3);
  CHECK(InputFunction(g).integrate(Domain::real_line(), nullptr).real() ==
        doctest::Approx(1.0).epsilon(1e-12));

  Embedding e;
  e.re = {ParamField::fixed(0.5), ParamField::fixed(-2.0)};
  CHECK(InputFunction(e).integrate(boolean, nullptr).real() == doctest::Approx(-1.5));
}

TEST_CASE("gaussian product integral matches quadrature") {
  Gaussian g1, g2;
  g1.mean = ParamField::fixed(0.0);
  g1.log_stddev = ParamField::fixed(0.0);
  g2.mean = ParamField::fixed(0.0);
  g2.log_stddev = ParamField::fixed(0.0);
  const double got =
      product_integral(InputFunction(g1), InputFunction(g2), Domain::real_line()).real();
  // N(0 | 0, sqrt(2)) = 1 / (2 sqrt(pi))
  CHECK(got == doctest::Approx(1.0 / (2.0 * std::sqrt(M_PI))).epsilon(1e-12));
  const double quad =
      simpson([](double x) { return gaussian_pdf(x, 0, 1) * gaussian_pdf(x, 0, 1); }, -12.0, 12.0);
  CHECK(got == doctest::Approx(quad).epsilon(1e-9));

  // a shifted, scaled pair against quadrature
  g1.mean = ParamField::fixed(0.7);
  g1.log_stddev = ParamField::fixed(0.4);
  g2.mean = ParamField::fixed(-1.2);
  g2.log_stddev = ParamField::fixed(-0.2);
  const double got2 =
      product_integral(InputFunction(g1), InputFunction(g2), Domain::real_line()).real();
  const double quad2 = simpson(
      [](double x) {
        return gaussian_pdf(x, 0.7, std::exp(0.4)) * gaussian_pdf(x, -1.2, std::exp(-0.2));
      },
      -14.0, 14.0);
  CHECK(got2 == doctest::Approx(quad2).epsilon(1e-9));
}

TEST_CASE("embedding product is the dot product") {
  Embedding a, b;
  a.re = {ParamField::fixed(1.0), ParamField::fixed(2.0)};
  b.re = {ParamField::fixed(3.0), ParamField::fixed(4.0)};
  CHECK(product_integral(InputFunction(a), InputFunction(b), Domain::boolean()).real() ==
        doctest::Approx(11.0));
}

TEST_CASE("mismatched indicators integrate to zero") {
  CHECK(product_integral(InputFunction(Indicator{1}), InputFunction(Indicator{0}),
                         Domain::boolean()) == Cplx(0.0, 0.0));
  CHECK(product_integral(InputFunction(Indicator{1}), InputFunction(Indicator{1}),
                         Domain::boolean()) == Cplx(1.0, 0.0));
}

TEST_CASE("unsupported pairs are rejected") {
  Gaussian g;
  g.mean = ParamField::fixed(0.0);
  g.log_stddev = ParamField::fixed(0.0);
  const InputFunction poly(Polynomial{{0.0, 1.0}, true, 0.0, 1.0});
  CHECK(!product_integrable(InputFunction(g), poly));
  CHECK_THROWS_AS(product_integral(InputFunction(g), poly, Domain::real_line()),
                  UnsupportedPairError);
}

TEST_CASE("polynomials without an interval are evaluate-only") {
  const InputFunction p(Polynomial{{1.0, 2.0}, false, 0.0, 0.0});
  CHECK(p.eval(Domain::real_line(), 3.0, nullptr).real() == doctest::Approx(7.0));
  CHECK_THROWS_AS(p.integrate(Domain::real_line(), nullptr), UnsupportedPairError);
  const InputFunction q(Polynomial{{0.0, 0.0, 3.0}, true, 0.0, 2.0});  // 3x^2 on [0,2]
  CHECK(q.integrate(Domain::real_line(), nullptr).real() == doctest::Approx(8.0));
}

TEST_CASE("conjugation of leaves") {
  Embedding e;
  e.re = {ParamField::fixed(1.0), ParamField::fixed(0.0)};
  e.im = {ParamField::fixed(2.0), ParamField::fixed(-1.0)};
  const InputFunction f(e);
  const InputFunction fc = f.conjugate();
  CHECK(f.eval(Domain::boolean(), 0, nullptr) == Cplx(1.0, 2.0));
  CHECK(fc.eval(Domain::boolean(), 0, nullptr) == Cplx(1.0, -2.0));
  // conjugation fixes real families
  const InputFunction ind(Indicator{1});
  CHECK(ind.conjugate().eval(Domain::boolean(), 1, nullptr) == Cplx(1.0, 0.0));
}

TEST_CASE("nonnegativity classification") {
  Embedding pos, neg;
  pos.re = {ParamField::fixed(0.2), ParamField::fixed(0.8)};
  neg.re = {ParamField::fixed(0.2), ParamField::fixed(-0.8)};
  CHECK(InputFunction(pos).is_nonnegative(nullptr));
  CHECK(!InputFunction(neg).is_nonnegative(nullptr));
  CHECK(InputFunction(Indicator{0}).is_nonnegative(nullptr));
  CHECK(!InputFunction(Polynomial{{1.0}, false, 0, 0}).is_nonnegative(nullptr));
}

TEST_CASE("categorical probabilities must be nonnegative but need not normalize") {
  Categorical c;
  c.probs = {ParamField::fixed(2.0), ParamField::fixed(0.0)};
  CHECK(InputFunction(c).eval(Domain::boolean(), 0, nullptr).real() == doctest::Approx(2.0));
}
