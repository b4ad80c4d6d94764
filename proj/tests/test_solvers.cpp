#include <doctest.h>

#include <cmath>
#include <cstring>

#include "saddlekit/errors.hpp"
#include "saddlekit/solvers.hpp"
#include "test_support.hpp"

using namespace saddlekit;
using testsupport::max_abs_diff;

namespace {

const BilinearProblem& scalar_bilinear() {
  static const BilinearProblem b(DenseMatrix{{1}});
  return b;
}

Iterate point(double x, double y) { return {DenseVector{x}, DenseVector{y}, 0}; }

bool bit_equal(const DenseVector& a, const DenseVector& b) {
  return a.size() == b.size() && std::memcmp(a.values().data(), b.values().data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("gda_step examples") {
  const SaddleProblem p = scalar_bilinear().as_saddle_problem();
  const Iterate next = gda_step(p, point(1, 1), 0.1);
  CHECK(next.x[0] == doctest::Approx(0.9));
  CHECK(next.y[0] == doctest::Approx(1.1));
  CHECK(next.k == 1);
  const double r1 = next.x[0] * next.x[0] + next.y[0] * next.y[0];
  CHECK(r1 == doctest::Approx(2.02));
  CHECK(r1 > 2.0);
  const Iterate still = gda_step(p, point(0, 0), 0.1);
  CHECK(still.x[0] == 0.0);
  CHECK(still.y[0] == 0.0);
}

TEST_CASE("steps reject non-finite gradients") {
  SaddleProblem bad(1, 1, [](const DenseVector&, const DenseVector&) {
    return GradientPair{DenseVector{std::nan("")}, DenseVector{0}};
  });
  CHECK_THROWS_AS(gda_step(bad, point(1, 1), 0.1), NumericalError);
  CHECK_THROWS_AS(eg_step(bad, point(1, 1), 0.1), NumericalError);
  OgdaState st{point(1, 1), DenseVector{0}, DenseVector{0}};
  CHECK_THROWS_AS(ogda_step(bad, st, 0.1), NumericalError);
}

TEST_CASE("ogda_step examples") {
  const SaddleProblem p = scalar_bilinear().as_saddle_problem();
  const OgdaState st = make_ogda_state(p, point(1, 1));
  const OgdaState next = ogda_step(p, st, 0.1);
  CHECK(next.current.x[0] == doctest::Approx(0.9));
  CHECK(next.current.y[0] == doctest::Approx(1.1));
  // Memory now holds the gradients at (1, 1).
  CHECK(next.prev_grad_x[0] == 1.0);
  CHECK(next.prev_grad_y[0] == 1.0);

  const OgdaState rest{point(0, 0), DenseVector{0}, DenseVector{0}};
  const OgdaState same = ogda_step(p, rest, 0.1);
  CHECK(same.current.x[0] == 0.0);
  CHECK(same.current.y[0] == 0.0);

  Rng rng(2);
  const BilinearProblem b = random_bilinear(3, 5);
  const SaddleProblem pb = b.as_saddle_problem();
  const Iterate z{testsupport::random_vector(rng, 3), testsupport::random_vector(rng, 3), 0};
  const OgdaState echo = make_ogda_state(pb, z);  // previous gradients equal current ones
  const Iterate via_ogda = ogda_step(pb, echo, 0.07).current;
  const Iterate via_gda = gda_step(pb, z, 0.07);
  CHECK(max_abs_diff(via_ogda.x, via_gda.x) <= 1e-15);
  CHECK(max_abs_diff(via_ogda.y, via_gda.y) <= 1e-15);
}

TEST_CASE("make_ogda_state uses explicit history") {
  const SaddleProblem p = scalar_bilinear().as_saddle_problem();
  const OgdaState st = make_ogda_state(p, point(1, 1), point(2, 3));
  CHECK(st.prev_grad_x[0] == 3.0);  // B y₋₁
  CHECK(st.prev_grad_y[0] == 2.0);  // Bᵀ x₋₁
}

TEST_CASE("generalized_ogda_step examples") {
  const SaddleProblem p = scalar_bilinear().as_saddle_problem();
  const OgdaState st = make_ogda_state(p, point(1, 1));
  const OgdaState next = generalized_ogda_step(p, st, 0.2, 0.1);
  CHECK(next.current.x[0] == doctest::Approx(0.8));
  CHECK(next.current.y[0] == doctest::Approx(1.2));

  // β = 0 leaves plain GDA with stepsize α.
  const OgdaState plain = generalized_ogda_step(p, make_ogda_state(p, point(1, 1), point(5, -5)), 0.2, 0.0);
  const Iterate gda = gda_step(p, point(1, 1), 0.2);
  CHECK(bit_equal(plain.current.x, gda.x));
  CHECK(bit_equal(plain.current.y, gda.y));
}

TEST_CASE("generalized OGDA with alpha = beta is OGDA bit for bit") {
  Rng rng(99);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = 1 + t % 7;
    const BilinearProblem b = random_bilinear(d, 1000 + t % 13);
    const SaddleProblem p = b.as_saddle_problem();
    OgdaState st{{testsupport::random_vector(rng, d), testsupport::random_vector(rng, d), 0},
                 testsupport::random_vector(rng, d),
                 testsupport::random_vector(rng, d)};
    const double eta = std::exp(rng.normal() - 2.0);
    const OgdaState a = ogda_step(p, st, eta);
    const OgdaState g = generalized_ogda_step(p, st, eta, eta);
    CHECK(bit_equal(a.current.x, g.current.x));
    CHECK(bit_equal(a.current.y, g.current.y));
    CHECK(bit_equal(a.prev_grad_x, g.prev_grad_x));
  }
}

TEST_CASE("validate_generalized_stepsizes") {
  const BilinearProblem b = geometric_diagonal_bilinear(10, 1, 100);
  const double alpha = 1.0 / (40.0 * std::sqrt(b.lambda_max_btb()));
  for (double K : {0.5, 1.0, 3.0}) CHECK(validate_generalized_stepsizes(alpha, alpha, K, b));
  CHECK(validate_generalized_stepsizes(alpha, alpha - alpha * alpha, 1.0, b));
  CHECK(validate_generalized_stepsizes(alpha, alpha - 0.5 * alpha * alpha, 1.0, b));
  CHECK_FALSE(validate_generalized_stepsizes(alpha, alpha * (1 + 1e-9), 1.0, b));
  CHECK_FALSE(validate_generalized_stepsizes(alpha, alpha - 2.0 * alpha * alpha, 1.0, b));
  CHECK_FALSE(validate_generalized_stepsizes(2.0 * alpha, 2.0 * alpha, 1.0, b));
  CHECK(validate_generalized_stepsizes(alpha * (1 + 1e-13), alpha, 1.0, b));
  // K large enough to make the lower end non-positive.
  CHECK_FALSE(validate_generalized_stepsizes(alpha, alpha, 1.0 / alpha, b));
}

TEST_CASE("eg_step examples") {
  const SaddleProblem p = scalar_bilinear().as_saddle_problem();
  const EgStep s = eg_step(p, point(1, 1), 0.1);
  CHECK(s.midpoint.x[0] == doctest::Approx(0.9));
  CHECK(s.midpoint.y[0] == doctest::Approx(1.1));
  CHECK(s.next.x[0] == doctest::Approx(0.89));
  CHECK(s.next.y[0] == doctest::Approx(1.09));

  const EgStep rest = eg_step(p, point(0, 0), 0.1);
  CHECK(rest.midpoint.x[0] == 0.0);
  CHECK(rest.next.y[0] == 0.0);

  const EgStep zero = eg_step(p, point(0.3, -0.7), 0.0);
  CHECK(zero.next.x[0] == 0.3);
  CHECK(zero.next.y[0] == -0.7);
}

TEST_CASE("EG midpoint is the GDA step bit for bit") {
  Rng rng(5);
  const auto q = generate_regression_problem(7, 4, 0.2, 3);
  const SaddleProblem p = q.as_saddle_problem();
  for (int t = 0; t < 200; ++t) {
    const Iterate z{testsupport::random_vector(rng, 7), testsupport::random_vector(rng, 4), 0};
    const double eta = 0.01 * (1 + t);
    const EgStep s = eg_step(p, z, eta);
    const Iterate g = gda_step(p, z, eta);
    CHECK(bit_equal(s.midpoint.x, g.x));
    CHECK(bit_equal(s.midpoint.y, g.y));
  }
}

TEST_CASE("pp_step_bilinear examples") {
  Iterate n = pp_step_bilinear(scalar_bilinear(), point(1, 1), 1.0);
  CHECK(n.x[0] == doctest::Approx(0.0));
  CHECK(n.y[0] == doctest::Approx(1.0));
  n = pp_step_bilinear(scalar_bilinear(), point(0, 0), 1.0);
  CHECK(n.x[0] == 0.0);
  CHECK(n.y[0] == 0.0);
  n = pp_step_bilinear(BilinearProblem(DenseMatrix{{2}}), point(1, 1), 0.5);
  CHECK(n.x[0] == doctest::Approx(0.0));
  CHECK(n.y[0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(pp_step_bilinear(scalar_bilinear(), {DenseVector{1, 1}, DenseVector{1}, 0}, 1.0), DimensionError);
}

TEST_CASE("pp_step_affine") {
  Rng rng(21);
  for (int t = 0; t < 30; ++t) {
    const std::size_t d = 1 + t % 8;
    const BilinearProblem b = random_bilinear(d, 200 + t);
    const SaddleProblem p = b.as_saddle_problem();
    const Iterate z{testsupport::random_vector(rng, d), testsupport::random_vector(rng, d), 0};
    const double eta = 0.1 + 0.3 * (t % 5);
    const Iterate a = pp_step_affine(p, z, eta);
    const Iterate c = pp_step_bilinear(b, z, eta);
    CHECK(max_abs_diff(a.x, c.x) <= 1e-12);
    CHECK(max_abs_diff(a.y, c.y) <= 1e-12);
  }

  const auto q = generate_regression_problem(6, 4, 0.25, 2);
  QuadraticRegressionSaddle qb(q.A(), DenseVector{1, -1, 2, 0}, 0.25);
  const SaddleProblem p = qb.as_saddle_problem();
  const Iterate star{p.saddle()->first, p.saddle()->second, 0};
  const Iterate fixed = pp_step_affine(p, star, 0.7);
  CHECK(max_abs_diff(fixed.x, star.x) <= 1e-12);
  CHECK(max_abs_diff(fixed.y, star.y) <= 1e-12);

  // Residual of the implicit equation.
  const Iterate z{testsupport::random_vector(rng, 6), testsupport::random_vector(rng, 4), 0};
  const Iterate n = pp_step_affine(p, z, 0.9);
  const DenseVector resid = stacked(n) - stacked(z) + 0.9 * p.field(stacked(n));
  CHECK(norm2(resid) <= 1e-10 * (1.0 + norm2(stacked(z))));

  const SaddleProblem dec = testsupport::decoupled_scalar().as_saddle_problem();
  const Iterate h = pp_step_affine(dec, point(3, -2), 1.0);
  CHECK(h.x[0] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(h.y[0] == doctest::Approx(-1.0).epsilon(1e-15));

  const DenseMatrix B{{1}};
  CHECK_THROWS_AS(pp_step_affine(testsupport::nonlinear_problem(B), point(1, 1), 0.1), PreconditionError);
}

TEST_CASE("pp_step_affine reports singular systems") {
  SaddleProblem p(1, 1, [](const DenseVector& x, const DenseVector& y) {
    return GradientPair{DenseVector{-x[0]}, DenseVector{y[0]}};
  });
  // F(z) = -z, so I + ηM = 0 at η = 1.
  p.with_affine_field({DenseMatrix{{-1, 0}, {0, -1}}, DenseVector(2)});
  CHECK_THROWS_AS(pp_step_affine(p, point(1, 1), 1.0), SingularMatrixError);
}

TEST_CASE("pp_step_implicit") {
  Rng rng(14);
  const auto q = generate_regression_problem(5, 3, 0.3, 9);
  const SaddleProblem p = q.as_saddle_problem();
  const double L = p.constants()->L();
  const double tol = 1e-12;
  for (int t = 0; t < 20; ++t) {
    const Iterate z{testsupport::random_vector(rng, 5), testsupport::random_vector(rng, 3), 0};
    const double eta = 0.9 / L * (t + 1) / 20.0;
    const Iterate a = pp_step_implicit(p, z, eta, tol, 100000);
    const Iterate e = pp_step_affine(p, z, eta);
    CHECK(max_abs_diff(a.x, e.x) <= 10 * tol);
    CHECK(max_abs_diff(a.y, e.y) <= 10 * tol);
    const DenseVector resid = stacked(a) - stacked(z) + eta * p.field(stacked(a));
    CHECK(norm2(resid) <= tol * (1 + eta * L) / (1 - eta * L));
  }

  const Iterate star{p.saddle()->first, p.saddle()->second, 0};
  CHECK_NOTHROW(pp_step_implicit(p, star, 0.5 / L, tol, 1));

  const Iterate z0 = point(0.5, 0.25);
  const SaddleProblem dec = testsupport::decoupled_scalar().as_saddle_problem();
  const Iterate same = pp_step_implicit(dec, z0, 0.0, tol, 10);
  CHECK(same.x[0] == 0.5);
  CHECK(same.y[0] == 0.25);

  CHECK_THROWS_AS(pp_step_implicit(p, star, 1.0 / L, tol, 100), PreconditionError);
  try {
    pp_step_implicit(p, {DenseVector(5, 1.0), DenseVector(3, 1.0), 0}, 0.9 / L, 1e-15, 3);
    FAIL("expected InnerSolveError");
  } catch (const InnerSolveError& e) {
    CHECK(e.residual() > 0.0);
  }
}

TEST_CASE("pp_step_implicit on a nonlinear problem") {
  Rng rng(3);
  const DenseMatrix B = testsupport::random_matrix(rng, 3, 3);
  const SaddleProblem p = testsupport::nonlinear_problem(B);
  const double L = p.constants()->L();
  const double eta = 0.5 / L;
  const Iterate z{testsupport::random_vector(rng, 3), testsupport::random_vector(rng, 3), 0};
  const Iterate n = pp_step_implicit(p, z, eta, 1e-13, 10000);
  const DenseVector resid = stacked(n) - stacked(z) + eta * p.field(stacked(n));
  CHECK(norm2(resid) <= 1e-13 * (1 + eta * L) / (1 - eta * L));
  // And it contracts toward the saddle at least as fast as 1/(1+ημ).
  const double r0 = p.distance_squared(z.x, z.y), r1 = p.distance_squared(n.x, n.y);
  CHECK(r1 <= r0 / (1 + eta * 1.0) + 1e-12);
}

TEST_CASE("run basics") {
  const SaddleProblem p = scalar_bilinear().as_saddle_problem();
  SolverConfig cfg;
  cfg.eta = 1.0;
  cfg.max_iters = 0;
  RunRecord rec = run(p, Method::PP, cfg, point(1, 1));
  CHECK(rec.iterates.size() == 1);
  CHECK(rec.r == std::vector<double>{2.0});
  CHECK(rec.ratios.empty());

  cfg.max_iters = 3;
  rec = run(p, Method::PP, cfg, point(1, 1));
  REQUIRE(rec.r.size() == 4);
  CHECK(rec.r[0] == 2.0);
  CHECK(rec.r[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rec.r[2] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rec.r[3] == doctest::Approx(0.25).epsilon(1e-15));
  REQUIRE(rec.ratios.size() == 3);
  CHECK(*rec.ratios[0] == doctest::Approx(0.5));
  for (std::size_t k = 0; k < rec.iterates.size(); ++k) CHECK(rec.iterates[k].k == k);
}

TEST_CASE("run config validation") {
  const SaddleProblem p = scalar_bilinear().as_saddle_problem();
  SolverConfig cfg;
  cfg.max_iters = 3;
  CHECK_THROWS_AS(run(p, Method::GDA, cfg, point(1, 1)), PreconditionError);
  cfg.eta = 0.1;
  CHECK_THROWS_AS(run(p, Method::GOGDA, cfg, point(1, 1)), PreconditionError);
  cfg.alpha = 0.1;
  cfg.beta = 0.05;
  CHECK_NOTHROW(run(p, Method::GOGDA, cfg, point(1, 1)));
  CHECK_THROWS_AS(run(p, Method::GDA, cfg, {DenseVector{1, 2}, DenseVector{1}, 0}), DimensionError);
}

TEST_CASE("run on OGDA ratios are empty at r_k = 0") {
  const SaddleProblem p = scalar_bilinear().as_saddle_problem();
  SolverConfig cfg;
  cfg.eta = 0.1;
  cfg.max_iters = 2;
  const RunRecord rec = run(p, Method::OGDA, cfg, point(0, 0));
  CHECK(rec.r == std::vector<double>{0, 0, 0});
  CHECK_FALSE(rec.ratios[0].has_value());
}

TEST_CASE("OGDA on the ten-dimensional diagonal problem converges") {
  const BilinearProblem b = geometric_diagonal_bilinear(10, 1, 100);
  const SaddleProblem p = b.as_saddle_problem();
  SolverConfig cfg;
  cfg.eta = 1.0 / (40.0 * std::sqrt(b.lambda_max_btb()));
  cfg.max_iters = 5000;
  const RunRecord rec = run(p, Method::OGDA, cfg, {DenseVector(10, 10.0), DenseVector(10, 10.0), 0});
  CHECK(rec.r.back() < rec.r.front());
}

TEST_CASE("GDA divergence is caught with the partial record") {
  const SaddleProblem p = scalar_bilinear().as_saddle_problem();
  SolverConfig cfg;
  cfg.eta = 1.0;
  cfg.max_iters = 1000;
  try {
    run(p, Method::GDA, cfg, point(1, 1));
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    const RunRecord& part = e.partial();
    REQUIRE(part.r.size() >= 2);
    CHECK(part.r.back() > kDivergenceFactor * part.r.front());
    CHECK(part.r[part.r.size() - 2] <= kDivergenceFactor * part.r.front());
    CHECK(e.iteration() == part.r.size() - 1);
    // r doubles each step at η = 1.
    CHECK(part.r.size() - 1 == 40);
  }
}

TEST_CASE("run attaches the failing iteration to step errors") {
  int calls = 0;
  SaddleProblem p(1, 1, [&calls](const DenseVector& x, const DenseVector& y) {
    ++calls;
    const double v = calls > 3 ? std::nan("") : 0.1;
    return GradientPair{DenseVector{x[0] * v}, DenseVector{y[0] * v}};
  });
  SolverConfig cfg;
  cfg.eta = 0.1;
  cfg.max_iters = 10;
  try {
    run(p, Method::GDA, cfg, point(1, 1));
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    REQUIRE(e.iteration());
    CHECK(*e.iteration() == 3);
  }
}

TEST_CASE("run uses the PP backends in order of exactness") {
  Rng rng(8);
  const DenseMatrix B = testsupport::random_matrix(rng, 2, 2);
  const SaddleProblem nl = testsupport::nonlinear_problem(B);
  SolverConfig cfg;
  cfg.eta = 0.4 / nl.constants()->L();
  cfg.max_iters = 20;
  const RunRecord rec = run(nl, Method::PP, cfg, {DenseVector{1, -1}, DenseVector{0.5, 2}, 0});
  for (const auto& r : rec.ratios) CHECK(*r <= 1.0 / (1.0 + cfg.eta) + 1e-9);

  const auto q = generate_regression_problem(4, 3, 0.5, 1);
  const SaddleProblem qp = q.as_saddle_problem();
  cfg.eta = 2.0;
  const RunRecord qr = run(qp, Method::PP, cfg, {DenseVector(4, 1.0), DenseVector(3, 1.0), 0});
  Iterate cur{DenseVector(4, 1.0), DenseVector(3, 1.0), 0};
  for (int k = 0; k < 20; ++k) cur = pp_step_affine(qp, cur, 2.0);
  CHECK(max_abs_diff(cur.x, qr.iterates.back().x) <= 1e-12);
}

TEST_CASE("every method is at rest at the saddle") {
  const auto q = generate_regression_problem(5, 4, 0.3, 1);
  QuadraticRegressionSaddle qb(q.A(), DenseVector{1, 2, 3, 4}, 0.3);
  const SaddleProblem p = qb.as_saddle_problem();
  const Iterate star{p.saddle()->first, p.saddle()->second, 0};
  const double eta = 0.5 / p.constants()->L();
  const Iterate g = gda_step(p, star, eta);
  const EgStep e = eg_step(p, star, eta);
  const OgdaState o = ogda_step(p, make_ogda_state(p, star), eta);
  const Iterate pp = pp_step_affine(p, star, eta);
  for (const Iterate* it : {&g, &e.next, &o.current, &pp}) {
    CHECK(max_abs_diff(it->x, star.x) <= 1e-13);
    CHECK(max_abs_diff(it->y, star.y) <= 1e-13);
  }

  // Exactly at rest on the bilinear origin.
  const SaddleProblem b = random_bilinear(4, 3).as_saddle_problem();
  const Iterate zero{DenseVector(4), DenseVector(4), 0};
  SolverConfig cfg;
  cfg.eta = 0.1;
  cfg.alpha = 0.1;
  cfg.beta = 0.05;
  cfg.max_iters = 5;
  for (Method m : {Method::PP, Method::GDA, Method::OGDA, Method::GOGDA, Method::EG}) {
    const RunRecord rec = run(b, m, cfg, zero);
    CHECK(rec.iterates.back().x == zero.x);
    CHECK(rec.iterates.back().y == zero.y);
  }
}

TEST_CASE("PP contraction on the quadratic problem for any stepsize") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto q = generate_regression_problem(10, 6, 0.1, seed);
    const SaddleProblem p = q.as_saddle_problem();
    const double mu = p.constants()->mu();
    for (double eta : {0.01, 0.1, 1.0, 10.0}) {
      SolverConfig cfg;
      cfg.eta = eta;
      cfg.max_iters = 100;
      const RunRecord rec = run(p, Method::PP, cfg, {DenseVector(10, 1.0), DenseVector(6, -1.0), 0});
      for (const auto& r : rec.ratios) {
        if (r) CHECK(*r <= 1.0 / (1.0 + eta * mu) + 1e-9);
      }
    }
  }
}

TEST_CASE("PP contraction on random bilinear problems") {
  Rng rng(71);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 1 + t % 10;
    const BilinearProblem b = random_bilinear(d, 500 + t);
    const SaddleProblem p = b.as_saddle_problem();
    for (double eta : {0.1, 1.0, 3.0}) {
      SolverConfig cfg;
      cfg.eta = eta;
      cfg.max_iters = 50;
      const RunRecord rec =
          run(p, Method::PP, cfg, {testsupport::random_vector(rng, d), testsupport::random_vector(rng, d), 0});
      for (const auto& r : rec.ratios) {
        if (r) CHECK(*r <= 1.0 / (1.0 + eta * eta * b.lambda_min_btb()) + 1e-9);
      }
    }
  }
}

TEST_CASE("Q_x B = B Q_y") {
  Rng rng(404);
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 1 + t % 10;
    const DenseMatrix B = testsupport::random_matrix(rng, d, d);
    const double eta = std::exp(rng.normal());
    const DenseMatrix I = DenseMatrix::identity(d);
    const DenseMatrix Qx = solve_spd(I + eta * eta * gram(B.transpose()), I);
    const DenseMatrix Qy = solve_spd(I + eta * eta * gram(B), I);
    CHECK(max_abs(matmul(Qx, B) - matmul(B, Qy)) <= 1e-10);
    CHECK(max_abs(matmul(Qy, B.transpose()) - matmul(B.transpose(), Qx)) <= 1e-10);
  }
}

TEST_CASE("runs are bitwise deterministic") {
  const auto q = generate_regression_problem(8, 5, 0.2, 4);
  const SaddleProblem p = q.as_saddle_problem();
  SolverConfig cfg;
  cfg.eta = 0.1;
  cfg.alpha = 0.1;
  cfg.beta = 0.08;
  cfg.max_iters = 200;
  const Iterate init{DenseVector(8, 1.0), DenseVector(5, 2.0), 0};
  for (Method m : {Method::PP, Method::GDA, Method::OGDA, Method::GOGDA, Method::EG}) {
    const RunRecord a = run(p, m, cfg, init), b = run(p, m, cfg, init);
    REQUIRE(a.r.size() == b.r.size());
    CHECK(std::memcmp(a.r.data(), b.r.data(), a.r.size() * sizeof(double)) == 0);
    CHECK(bit_equal(a.iterates.back().x, b.iterates.back().x));
  }
}

TEST_CASE("method names round trip") {
  for (Method m : {Method::PP, Method::GDA, Method::OGDA, Method::GOGDA, Method::EG}) {
    CHECK(parse_method(method_name(m)) == m);
  }
  CHECK(parse_method("eg") == Method::EG);
  CHECK_FALSE(parse_method("adam"));
}
