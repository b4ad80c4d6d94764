#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "saddlekit/errors.hpp"
#include "saddlekit/matrix_io.hpp"
#include "saddlekit/problems.hpp"
#include "test_support.hpp"

using namespace saddlekit;
using testsupport::max_abs_diff;

TEST_CASE("bilinear_grad examples") {
  BilinearProblem one(DenseMatrix{{1}});
  auto g = bilinear_grad(one, DenseVector{1}, DenseVector{1});
  CHECK(g.gx == DenseVector{1});
  CHECK(g.gy == DenseVector{1});

  Rng rng(4);
  BilinearProblem any(testsupport::random_matrix(rng, 3, 3));
  g = bilinear_grad(any, DenseVector(3), DenseVector(3));
  CHECK(g.gx == DenseVector(3));
  CHECK(g.gy == DenseVector(3));

  BilinearProblem d23(DenseMatrix{{2, 0}, {0, 3}});
  g = bilinear_grad(d23, DenseVector{1, 1}, DenseVector{1, 0});
  CHECK(g.gx == DenseVector{2, 0});
  CHECK(g.gy == DenseVector{2, 3});

  CHECK_THROWS_AS(bilinear_grad(d23, DenseVector{1}, DenseVector{1, 0}), DimensionError);
}

TEST_CASE("bilinear construction checks") {
  CHECK_THROWS_AS(BilinearProblem(DenseMatrix(2, 3)), DimensionError);
  CHECK_THROWS_AS(BilinearProblem(DenseMatrix{{1, 2}, {2, 4}}), SingularMatrixError);
  CHECK_THROWS_AS(BilinearProblem(DenseMatrix(2, 2)), SingularMatrixError);
}

TEST_CASE("condition_number_bilinear examples") {
  CHECK(condition_number_bilinear(BilinearProblem(DenseMatrix::identity(4))) == doctest::Approx(1.0));
  CHECK(condition_number_bilinear(BilinearProblem(DenseMatrix::diagonal(DenseVector{1, 10}))) ==
        doctest::Approx(100.0).epsilon(1e-12));
  const BilinearProblem fig = geometric_diagonal_bilinear(10, 1.0, 100.0);
  CHECK(condition_number_bilinear(fig) == doctest::Approx(10000.0).epsilon(1e-10));
  CHECK(matrix_condition_number(fig) == doctest::Approx(100.0).epsilon(1e-10));
  CHECK(fig.matrix()(0, 0) == 1.0);
  CHECK(fig.matrix()(9, 9) == 100.0);
  // Consecutive diagonal ratios are constant.
  for (std::size_t i = 1; i + 1 < 10; ++i) {
    CHECK(fig.matrix()(i + 1, i + 1) / fig.matrix()(i, i) ==
          doctest::Approx(fig.matrix()(1, 1) / fig.matrix()(0, 0)).epsilon(1e-12));
  }
}

TEST_CASE("bilinear constants and saddle") {
  Rng rng(9);
  const BilinearProblem b(testsupport::random_matrix(rng, 4, 4));
  const auto c = b.constants();
  CHECK(c.mu() == 0.0);
  CHECK(c.L() == doctest::Approx(std::sqrt(b.lambda_max_btb())));
  CHECK(std::isinf(c.kappa()));
  const SaddleProblem p = b.as_saddle_problem();
  REQUIRE(p.saddle());
  CHECK(p.saddle()->first == DenseVector(4));
  CHECK(p.has_exact_prox());
  REQUIRE(p.bilinear_spectrum());
  CHECK(p.bilinear_spectrum()->kappa() == b.kappa());
}

TEST_CASE("quadratic_grad examples") {
  QuadraticRegressionSaddle q(DenseMatrix{{1}}, DenseVector{0}, 1.0);
  const auto g = quadratic_grad(q, DenseVector{1}, DenseVector{1});
  CHECK(g.gx == DenseVector{2});
  CHECK(g.gy == DenseVector{0});

  const auto q2 = generate_regression_problem(5, 3, 0.3, 7);
  const auto z = quadratic_grad(q2, DenseVector(5), DenseVector(3));
  CHECK(z.gx == DenseVector(5));
  CHECK(z.gy == DenseVector(3));

  for (std::uint64_t seed : {1, 2, 3}) {
    QuadraticRegressionSaddle qb(generate_regression_problem(6, 4, 0.2, seed).A(),
                                 DenseVector{1, -2, 0.5, 3}, 0.2);
    auto [xs, ys] = qb.closed_form_saddle();
    const auto gs = quadratic_grad(qb, xs, ys);
    CHECK(norm2(gs.gx) <= 1e-10);
    CHECK(norm2(gs.gy) <= 1e-10);
  }
  CHECK_THROWS_AS(quadratic_grad(q, DenseVector{1, 1}, DenseVector{1}), DimensionError);
}

TEST_CASE("quadratic construction checks") {
  CHECK_THROWS_AS(QuadraticRegressionSaddle(DenseMatrix{{1}}, DenseVector{0, 0}, 1.0), DimensionError);
  CHECK_THROWS_AS(QuadraticRegressionSaddle(DenseMatrix{{1}}, DenseVector{0}, 0.0), PreconditionError);
  CHECK_THROWS_AS(generate_regression_problem(0, 3, 1.0, 1), PreconditionError);
}

TEST_CASE("generate_regression_problem") {
  const auto q = generate_regression_problem(50, 10, 0.1, 5);
  CHECK(q.A().rows() == 10);
  CHECK(q.A().cols() == 50);
  CHECK(q.b() == DenseVector(10));
  CHECK(q.lambda_reg() == 0.1);

  const auto again = generate_regression_problem(50, 10, 0.1, 5);
  CHECK(std::memcmp(q.A().values().data(), again.A().values().data(), 500 * sizeof(double)) == 0);
  CHECK_FALSE(generate_regression_problem(50, 10, 0.1, 6).A() == q.A());

  // Rows come straight from the seeded normal stream.
  Rng rng(5);
  CHECK(q.A()(0, 0) == rng.normal());
  CHECK(q.A()(0, 1) == rng.normal());

  const auto small = generate_regression_problem(2, 3, 1.0, 1);
  CHECK(small.A().values().size() == 6);
  auto [xs, ys] = small.closed_form_saddle();
  const auto g = quadratic_grad(small, xs, ys);
  CHECK(std::sqrt(squared_norm(g.gx) + squared_norm(g.gy)) <= 1e-10);
}

TEST_CASE("scsc_constants examples") {
  auto c = scsc_constants(QuadraticRegressionSaddle(DenseMatrix{{1}}, DenseVector{0}, 1.0));
  CHECK(c.mu == doctest::Approx(1.0));
  CHECK(c.L == doctest::Approx(1.0));
  CHECK(c.kappa == doctest::Approx(1.0));

  c = scsc_constants(QuadraticRegressionSaddle(DenseMatrix(4, 3), DenseVector(4), 0.25));
  CHECK(c.mu == 0.25);
  CHECK(c.L == 0.25);
  CHECK(c.kappa == 1.0);

  const auto q = generate_regression_problem(50, 10, 0.1, 3);
  c = scsc_constants(q);
  // ‖A‖₂/n via the top eigenvalue of AᵀA, computed independently.
  const double norm_a = std::sqrt(sym_eig_extremes(gram(q.A())).lambda_max);
  CHECK(c.mu == doctest::Approx(0.1));
  CHECK(c.L == doctest::Approx(std::max(0.1, norm_a / 10.0)).epsilon(1e-10));
  CHECK(c.kappa == doctest::Approx(c.L / c.mu));
  CHECK(c.kappa >= 1.0);
}

TEST_CASE("gradients match central differences of f") {
  Rng rng(77);
  const double h = 1e-5;
  auto check_problem = [&](const SaddleProblem& p, double scale) {
    for (int trial = 0; trial < 100; ++trial) {
      const DenseVector x = testsupport::random_vector(rng, p.dim_x(), scale);
      const DenseVector y = testsupport::random_vector(rng, p.dim_y(), scale);
      const auto g = p.gradient(x, y);
      for (std::size_t i = 0; i < p.dim_x(); ++i) {
        const double fd = testsupport::central_difference([&](const DenseVector& v) { return p.value(v, y); }, x, i, h);
        CHECK(std::abs(fd - g.gx[i]) <= 1e-6 * std::max(1.0, std::abs(g.gx[i])));
      }
      for (std::size_t j = 0; j < p.dim_y(); ++j) {
        const double fd = testsupport::central_difference([&](const DenseVector& v) { return p.value(x, v); }, y, j, h);
        CHECK(std::abs(fd - g.gy[j]) <= 1e-6 * std::max(1.0, std::abs(g.gy[j])));
      }
    }
  };
  check_problem(random_bilinear(4, 12).as_saddle_problem(), 1.0);
  QuadraticRegressionSaddle q(generate_regression_problem(6, 4, 0.3, 2).A(), DenseVector{1, 0, -1, 2}, 0.3);
  check_problem(q.as_saddle_problem(), 1.0);
}

TEST_CASE("quadratic block Lipschitz and strong convexity certificates") {
  Rng rng(31);
  const auto q = generate_regression_problem(8, 5, 0.05, 4);
  const auto c = q.constants();
  const double slack = -1e-10;
  for (int trial = 0; trial < 100; ++trial) {
    const DenseVector x1 = testsupport::random_vector(rng, 8), x2 = testsupport::random_vector(rng, 8);
    const DenseVector y1 = testsupport::random_vector(rng, 5), y2 = testsupport::random_vector(rng, 5);
    const double dx = norm2(x1 - x2), dy = norm2(y1 - y2);
    auto gx = [&](const DenseVector& x, const DenseVector& y) { return quadratic_grad(q, x, y).gx; };
    auto gy = [&](const DenseVector& x, const DenseVector& y) { return quadratic_grad(q, x, y).gy; };
    CHECK(c.L_x * dx - norm2(gx(x1, y1) - gx(x2, y1)) >= slack);
    CHECK(c.L_xy * dy - norm2(gx(x1, y1) - gx(x1, y2)) >= slack);
    CHECK(c.L_y * dy - norm2(gy(x1, y1) - gy(x1, y2)) >= slack);
    CHECK(c.L_yx * dx - norm2(gy(x1, y1) - gy(x2, y1)) >= slack);
    // Strong monotonicity of ∇ₓf in x and of -∇ᵧf in y.
    CHECK(dot(gx(x1, y1) - gx(x2, y1), x1 - x2) - c.mu_x * dx * dx >= slack);
    CHECK(-dot(gy(x1, y1) - gy(x1, y2), y1 - y2) - c.mu_y * dy * dy >= slack);
  }
}

TEST_CASE("SaddleProblem metadata validation") {
  SaddleProblem p(1, 1, [](const DenseVector& x, const DenseVector& y) {
    return GradientPair{DenseVector{x[0] - 1.0}, DenseVector{-y[0]}};
  });
  CHECK_THROWS_AS(p.with_saddle(DenseVector{0}, DenseVector{0}), PreconditionError);
  CHECK_NOTHROW(p.with_saddle(DenseVector{1}, DenseVector{0}));
  CHECK(p.distance_squared(DenseVector{3}, DenseVector{1}) == 5.0);
  CHECK_THROWS_AS(p.value(DenseVector{0}, DenseVector{0}), PreconditionError);
  CHECK_THROWS_AS(p.exact_prox(DenseVector{0}, DenseVector{0}, 1.0), PreconditionError);
  CHECK_THROWS_AS(p.gradient(DenseVector{0, 0}, DenseVector{0}), DimensionError);

  ProblemConstants bad;
  bad.mu_x = 2.0;
  bad.mu_y = 2.0;
  bad.L_x = 1.0;
  CHECK_THROWS_AS(p.with_constants(bad), PreconditionError);
  ProblemConstants zero;
  CHECK_THROWS_AS(p.with_constants(zero), PreconditionError);
  ProblemConstants neg;
  neg.L_x = 1.0;
  neg.mu_x = -1.0;
  CHECK_THROWS_AS(p.with_constants(neg), PreconditionError);

  SaddleProblem unknown(2, 2, [](const DenseVector& x, const DenseVector& y) { return GradientPair{x, y}; });
  CHECK_THROWS_AS(unknown.distance_squared(DenseVector(2), DenseVector(2)), PreconditionError);
}

TEST_CASE("field stacks gradient and negated ascent direction") {
  const BilinearProblem b(DenseMatrix{{2, 0}, {0, 3}});
  const SaddleProblem p = b.as_saddle_problem();
  const DenseVector F = p.field(DenseVector{1, 1, 1, 0});
  CHECK(F == DenseVector{2, 0, -2, -3});
  const AffineField af = b.affine_field();
  CHECK(max_abs_diff(matvec(af.M, DenseVector{1, 1, 1, 0}) + af.c, F) == 0.0);
}

TEST_CASE("quadratic affine field matches the gradient oracle") {
  Rng rng(6);
  QuadraticRegressionSaddle q(generate_regression_problem(4, 3, 0.4, 8).A(), DenseVector{1, 2, 3}, 0.4);
  const SaddleProblem p = q.as_saddle_problem();
  const AffineField af = q.affine_field();
  for (int t = 0; t < 20; ++t) {
    const DenseVector z = testsupport::random_vector(rng, 7);
    CHECK(max_abs_diff(matvec(af.M, z) + af.c, p.field(z)) <= 1e-14);
  }
}

TEST_CASE("closed-form bilinear prox solves the implicit equation") {
  Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 1 + t % 6;
    const BilinearProblem b = random_bilinear(d, 100 + t);
    const DenseVector x = testsupport::random_vector(rng, d), y = testsupport::random_vector(rng, d);
    const double eta = 0.05 + 0.2 * t;
    auto [xp, yp] = b.prox(x, y, eta);
    const auto g = bilinear_grad(b, xp, yp);
    CHECK(max_abs_diff(xp, axpy(x, -eta, g.gx)) <= 1e-10 * (1.0 + max_abs(x)));
    CHECK(max_abs_diff(yp, axpy(y, eta, g.gy)) <= 1e-10 * (1.0 + max_abs(y)));
  }
}

TEST_CASE("random_bilinear is reproducible and full rank") {
  const auto a = random_bilinear(6, 3), b = random_bilinear(6, 3);
  CHECK(a.matrix() == b.matrix());
  CHECK(a.lambda_min_btb() > 0.0);
}

TEST_CASE("matrix text format round trip") {
  Rng rng(1);
  const DenseMatrix m = testsupport::random_matrix(rng, 3, 4);
  std::stringstream ss;
  write_matrix(ss, m);
  const DenseMatrix back = read_matrix(ss);
  CHECK(back == m);

  std::istringstream tiny("1 1\n0.1\n");
  CHECK(read_matrix(tiny)(0, 0) == 0.1);
  CHECK(format_g17(0.1) == "0.10000000000000001");
}

TEST_CASE("matrix text format errors") {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_matrix(in);
  };
  CHECK_THROWS_AS(parse(""), FormatError);
  CHECK_THROWS_AS(parse("2\n1 2\n"), FormatError);
  CHECK_THROWS_AS(parse("0 2\n"), FormatError);
  CHECK_THROWS_AS(parse("2 2\n1 2\n3\n"), FormatError);
  CHECK_THROWS_AS(parse("2 2\n1 2\n"), FormatError);
  CHECK_THROWS_AS(parse("1 1\nabc\n"), FormatError);
  CHECK_THROWS_AS(parse("1 1\nnan\n"), FormatError);
  CHECK_THROWS_AS(parse("1 1\n1\n2\n"), FormatError);
  try {
    parse("2 2\n1 2\n3 x\n");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}
