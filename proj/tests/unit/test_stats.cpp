#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "essaylens/error.hpp"
#include "essaylens/stats.hpp"

using namespace essaylens;
using namespace essaylens::stats;

namespace {

// a: x=1,y=1  b: x=1,y=0  c: x=0,y=1  d: x=0,y=0
Frame two_by_two(int a, int b, int c, int d) {
  std::vector<double> x, y;
  auto push = [&](int n, double xv, double yv) {
    for (int i = 0; i < n; ++i) {
      x.push_back(xv);
      y.push_back(yv);
    }
  };
  push(a, 1, 1);
  push(b, 1, 0);
  push(c, 0, 1);
  push(d, 0, 0);
  Frame f;
  f.add_numeric("x", x);
  f.add_numeric("y", y);
  return f;
}

Frame logistic_sample(std::size_t n, std::uint64_t seed, const std::vector<double>& beta) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u;
  std::vector<double> x1(n), x2(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x1[i] = z(rng);
    x2[i] = u(rng) < 0.4;
    const double eta = beta[0] + beta[1] * x1[i] + beta[2] * x2[i];
    y[i] = u(rng) < 1 / (1 + std::exp(-eta));
  }
  Frame f;
  f.add_numeric("x1", x1);
  f.add_numeric("x2", x2);
  f.add_numeric("y", y);
  return f;
}

ModelSpec xy() {
  ModelSpec s;
  s.outcome = "y";
  s.add("x");
  return s;
}

}  // namespace

TEST_SUITE("stats") {
  TEST_CASE("2x2 logit equals the closed-form log odds ratio") {
    for (auto [a, b, c, d] : {std::array{30, 20, 10, 40}, std::array{7, 3, 5, 9}, std::array{100, 250, 60, 40}}) {
      const auto fit = fit_logit(two_by_two(a, b, c, d), xy());
      CHECK(std::abs(fit.b("x") - std::log(double(a) * d / (double(b) * c))) < 1e-6);
      CHECK(std::abs(fit.b("(Intercept)") - std::log(double(c) / d)) < 1e-6);
      CHECK(std::abs(fit.row("x").se - std::sqrt(1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d)) < 1e-6);
      CHECK(fit.gradient.cwiseAbs().maxCoeff() < 1e-6);
      CHECK(fit.converged);
    }
  }

  TEST_CASE("balanced outcome gives a zero intercept") {
    const auto fit = fit_logit(two_by_two(25, 25, 25, 25), xy());
    CHECK(std::abs(fit.b("(Intercept)")) < 1e-9);
    CHECK(std::abs(fit.b("x")) < 1e-9);
    CHECK(fit.pseudo_r2 == doctest::Approx(0.0).epsilon(1e-9));
  }

  TEST_CASE("row order does not matter") {
    const auto f = logistic_sample(2000, 1, {-0.5, 0.8, -0.4});
    ModelSpec s;
    s.outcome = "y";
    s.add("x1").add("x2");
    const auto fit = fit_logit(f, s);
    std::vector<std::size_t> perm(f.rows());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(2));
    const auto again = fit_logit(f.take(perm), s);
    CHECK((fit.coef - again.coef).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((fit.se - again.se).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(fit.gradient.cwiseAbs().maxCoeff() < 1e-6);
  }

  TEST_CASE("recovers planted coefficients") {
    const std::vector<double> beta{-0.5, 0.8, -0.4};
    int covered = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto f = logistic_sample(5000, 100 + seed, beta);
      ModelSpec s;
      s.outcome = "y";
      s.add("x1").add("x2");
      const auto fit = fit_logit(f, s);
      covered += std::abs(fit.b("x1") - beta[1]) < 2 * fit.row("x1").se;
    }
    CHECK(covered >= 16);
  }

  TEST_CASE("rank deficiency names the columns") {
    Frame f;
    f.add_numeric("x", std::vector<double>{1, 2, 3, 4, 5, 6});
    f.add_numeric("z", std::vector<double>{2, 4, 6, 8, 10, 12});
    f.add_numeric("y", std::vector<double>{0, 1, 0, 1, 1, 0});
    ModelSpec s;
    s.outcome = "y";
    s.add("x").add("z");
    try {
      fit_logit(f, s);
      FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
      const std::string m = e.what();
      CHECK(m.find("rank deficient") != std::string::npos);
      CHECK((m.find("x") != std::string::npos || m.find("z") != std::string::npos));
    }
  }

  TEST_CASE("separation is reported") {
    Frame f;
    f.add_numeric("x", std::vector<double>{0, 0, 0, 0, 1, 1, 1, 1});
    f.add_numeric("y", std::vector<double>{0, 0, 0, 0, 1, 1, 1, 1});
    CHECK_THROWS_AS(fit_logit(f, xy()), NumericalError);
    Frame g;
    g.add_numeric("x", std::vector<double>{1, 2, 3});
    g.add_numeric("y", std::vector<double>{0, 2, 1});
    CHECK_THROWS_AS(fit_logit(g, xy()), InputError);
    Frame h;
    h.add_numeric("x", std::vector<double>{1, 2, 3, 4});
    h.add_numeric("y", std::vector<double>{0, 0, 0, 0});
    CHECK_THROWS_AS(fit_logit(h, xy()), NumericalError);
  }

  TEST_CASE("a regressor far from zero is not separation") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> z;
    std::vector<double> x(500), y(500);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = 4.5 + 0.03 * z(rng);
      y[i] = z(rng) + 8 * (x[i] - 4.5) > 0.3;
    }
    Frame f;
    f.add_numeric("x", x);
    f.add_numeric("y", y);
    const auto fit = fit_logit(f, xy());
    CHECK(std::abs(fit.b("(Intercept)")) > 15);
    CHECK(fit.row("(Intercept)").se > 10);
  }

  TEST_CASE("factors, missing rows and reference levels") {
    Frame f;
    f.add_factor("g", {"b", "a", "c", "a", std::nullopt, "b", "c", "a", "b", "c"});
    f.add_numeric("x", Frame::Numeric{1, 2, 3, 4, 5, std::nullopt, 7, 8, 9, 10});
    f.add_numeric("y", std::vector<double>{1, 2, 3, 2, 5, 4, 7, 6, 9, 9});
    ModelSpec s;
    s.outcome = "y";
    s.add("x").add("g").reference("g", "b");
    const auto d = build_design(f, s);
    CHECK(d.dropped == 2);
    CHECK(d.columns == std::vector<std::string>{"(Intercept)", "x", dummy_name("g", "a"), dummy_name("g", "c")});
    s.reference("g", "zz");
    CHECK_THROWS_AS(build_design(f, s), InputError);
    ModelSpec bad;
    bad.outcome = "y";
    bad.add_interaction("x", "g");
    CHECK_THROWS_AS(bad.validate(), InputError);
  }

  TEST_CASE("OLS hand fits") {
    Frame f;
    f.add_numeric("x", std::vector<double>{1, 2, 3, 4, 5});
    f.add_numeric("y", std::vector<double>{2, 4, 5, 4, 5});
    const auto fit = fit_ols(f, xy());
    CHECK(std::abs(fit.b("x") - 0.6) < 1e-9);
    CHECK(std::abs(fit.b("(Intercept)") - 2.2) < 1e-9);
    CHECK(std::abs(fit.rss - 2.4) < 1e-9);
    CHECK(std::abs(fit.row("x").se - std::sqrt(0.08)) < 1e-9);
    CHECK(fit.df_resid == 3);

    Frame g;
    g.add_numeric("x", std::vector<double>{1, 2, 3, 4});
    g.add_numeric("y", std::vector<double>{2, 4, 6, 8});
    const auto exact = fit_ols(g, xy());
    CHECK(std::abs(exact.b("x") - 2) < 1e-12);
    CHECK(std::abs(exact.b("(Intercept)")) < 1e-12);
    CHECK(exact.pseudo_r2 == doctest::Approx(1.0));
  }

  TEST_CASE("orthogonal regressors fit independently") {
    Frame f;
    f.add_numeric("a", std::vector<double>{1, -1, 1, -1, 1, -1, 1, -1});
    f.add_numeric("b", std::vector<double>{1, 1, -1, -1, 1, 1, -1, -1});
    f.add_numeric("y", std::vector<double>{3, 1, 2, -1, 4, 0, 1, 0});
    ModelSpec both;
    both.outcome = "y";
    both.add("a").add("b");
    ModelSpec only_a;
    only_a.outcome = "y";
    only_a.add("a");
    CHECK(fit_ols(f, both).b("a") == doctest::Approx(fit_ols(f, only_a).b("a")).epsilon(1e-12));
  }

  TEST_CASE("Wald, linear combinations and interval consistency") {
    const auto f = logistic_sample(3000, 9, {0.2, 0.5, 0.3});
    ModelSpec s;
    s.outcome = "y";
    s.add("x1").add("x2");
    const auto fit = fit_logit(f, s);
    const auto r = fit.row("x1");
    const auto w = wald_joint(fit, {"x1"});
    CHECK(w.statistic == doctest::Approx(r.stat * r.stat).epsilon(1e-10));
    CHECK(w.df == 1);
    CHECK(w.p_value == doctest::Approx(r.p_value).epsilon(1e-8));
    CHECK(r.odds_ratio == doctest::Approx(std::exp(r.coef)));
    CHECK(r.or_lo == doctest::Approx(std::exp(r.coef - kZ95 * r.se)));
    CHECK(r.or_hi == doctest::Approx(std::exp(r.ci_hi)));
    const auto lc = linear_combination(fit, {{"x1", 1}, {"x2", 1}});
    const auto i = Eigen::Index(fit.index("x1")), j = Eigen::Index(fit.index("x2"));
    CHECK(lc.estimate == doctest::Approx(fit.coef(i) + fit.coef(j)));
    CHECK(lc.se == doctest::Approx(std::sqrt(fit.cov(i, i) + fit.cov(j, j) + 2 * fit.cov(i, j))));
    CHECK(wald_joint(fit, {"x1", "x2"}).df == 2);
    CHECK_THROWS_AS(wald_joint(fit, {}), InputError);
    CHECK_THROWS_AS(fit.index("nope"), InputError);
  }

  TEST_CASE("kernels are generic over the scalar type") {
    const auto f = logistic_sample(500, 3, {0.1, 1.0, -0.5});
    ModelSpec s;
    s.outcome = "y";
    s.add("x1").add("x2");
    const auto d = build_design(f, s);
    const auto rd = irls_logit(d.X, d.y);
    const Mat<long double> Xl = d.X.cast<long double>();
    const auto rl = irls_logit(Xl, d.y);
    CHECK((rd.beta.cast<long double>() - rl.beta).cwiseAbs().maxCoeff() < 1e-8L);
    const auto o = ols(d.X.cast<float>(), d.y);
    CHECK(o.beta.size() == 3);
  }

  TEST_CASE("two-sample t and chi-square") {
    std::vector<double> v{-1.5, -1, -0.5, 0, 0, 0, 0, 0.5, 1, 1.5};
    const double s = sd(v);
    std::vector<double> x, y;
    for (double a : v) {
      x.push_back(a / s + 2);
      y.push_back(a / s);
    }
    const auto t = two_sample_t(x, y);
    CHECK(t.statistic == doctest::Approx(4.472136).epsilon(1e-6));
    CHECK(t.df == 18);
    CHECK(t.effect_size == doctest::Approx(2.0));
    CHECK(t.p_value < 0.001);

    Eigen::MatrixXd m(2, 2);
    m << 10, 20, 20, 10;
    const auto c = chi_square_independence(m);
    CHECK(c.statistic == doctest::Approx(20.0 / 3));
    CHECK(c.df == 1);
    m << 10, 20, 20, 40;
    CHECK(chi_square_independence(m).statistic == doctest::Approx(0.0));
    m << 0, 0, 1, 2;
    CHECK_THROWS_AS(chi_square_independence(m), InputError);
  }

  TEST_CASE("stars and descriptives") {
    CHECK(stars(0.2) == "");
    CHECK(stars(0.04) == "*");
    CHECK(stars(0.009) == "**");
    CHECK(stars(0.0009) == "***");
    Eigen::MatrixXd g1(3, 2), g2(4, 2);
    g1 << 1, 10, 2, 10, 3, 10;
    g2 << 2, 10, 3, 10, 4, 10, 5, 10;
    const auto t = group_descriptives({"a", "b"}, g1, g2, "H", "L");
    CHECK(t.n1 == 3);
    CHECK(t.rows[0].diff == doctest::Approx(1.5));
    CHECK(t.rows[0].pct_diff == doctest::Approx(75.0));
    const std::vector<double> a1{1, 2, 3}, a2{2, 3, 4, 5};
    CHECK(t.rows[0].t == doctest::Approx(two_sample_t(a2, a1).statistic));
    CHECK(t.rows[1].t == 0);
    CHECK(t.rows[1].p_value == 1);
  }
}
