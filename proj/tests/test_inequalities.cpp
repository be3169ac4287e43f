#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qg/inequalities.hpp"

using namespace qg;

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
}

TEST_CASE("shell support guard accepts tagged fields and rejects broadband ones") {
  TestCorpus corpus{11, 64, 8};
  DyadicDecomposition d = DyadicDecomposition::build(Grid2D::make(64));
  for (int t = 0; t < corpus.count; ++t) {
    CorpusField cf = shell_field(corpus, d, t, 1, 3);
    CHECK(cf.shell >= 1);
    CHECK(cf.shell <= 3);
    require_shell_support(d, cf.field, cf.shell);
  }
  SpectralField wide = broadband_field(corpus, 0).field;
  CHECK_THROWS_AS(require_shell_support(d, wide, 2), Error);
}

TEST_CASE("corpus trials are pure functions of seed and index") {
  TestCorpus a{5, 64, 4}, b{5, 64, 4}, c{6, 64, 4};
  DyadicDecomposition d = DyadicDecomposition::build(Grid2D::make(64));
  for (int t = 0; t < 4; ++t) {
    CorpusField fa = broadband_field(a, t);
    CorpusField fb = broadband_field(b, t);
    REQUIRE(fa.family == fb.family);
    for (std::size_t i = 0; i < fa.field.coeffs.size(); ++i)
      CHECK(fa.field.coeffs[i] == fb.field.coeffs[i]);
    CorpusField fc = broadband_field(c, t);
    CHECK(l2_norm_spectral(fa.field + (-1.0) * fc.field) > 0.0);

    CorpusField sa = shell_field(a, d, t, 1, 3);
    CorpusField sb = shell_field(b, d, t, 1, 3);
    for (std::size_t i = 0; i < sa.field.coeffs.size(); ++i)
      CHECK(sa.field.coeffs[i] == sb.field.coeffs[i]);
  }
  CHECK_THROWS_AS(shell_field(a, d, 0, 0, d.j_max + 1), Error);
}

TEST_CASE("fractional dissipation scales exactly on a dyadic cosine") {
  Grid2D g = Grid2D::make(64);
  for (int j : {2, 3}) {
    for (double alpha : {0.2, 0.5}) {
      SpectralField f = cosine_mode_field(g, 1 << j, 0, 1.3);
      double top = l2_norm_spectral(fractional_laplacian(f, alpha));
      double want = std::pow(std::exp2(j), 2.0 * alpha) * l2_norm_spectral(f);
      CHECK(top == Catch::Approx(want).epsilon(1e-13));
    }
  }
}

TEST_CASE("shell-localized dissipation ratio stays inside the dyadic sandwich") {
  TestCorpus corpus{101, 64, 48};
  DyadicDecomposition d = DyadicDecomposition::build(Grid2D::make(64));
  for (double alpha : {0.1, 0.3, 0.5}) {
    InequalityReport rep = check_bernstein_l2(corpus, d, alpha, d.j_min, d.j_max);
    INFO("alpha = " << alpha);
    CHECK(rep.trials == 48);
    CHECK(rep.violations == 0);
    CHECK(rep.min_ratio >= std::exp2(-2.0 * alpha) * (1.0 - 1e-12));
    CHECK(rep.max_ratio <= std::exp2(2.0 * alpha) * (1.0 + 1e-12));
  }
}

TEST_CASE("norm comparison across p follows the dyadic scale factor") {
  Grid2D g = Grid2D::make(64);
  // the single-cosine ratio decays like 2^-j: it cannot saturate the bound,
  // but its closed form pins the normalization used by the check
  for (int j : {2, 3}) {
    RealField samples = to_real(cosine_mode_field(g, 1 << j, 0, 1.0));
    double np = lp_norm(samples, 2.0);
    double nq = lp_norm(samples, inf);
    double ratio = nq / (std::exp2(static_cast<double>(j)) * np);
    CHECK(ratio * std::exp2(static_cast<double>(j)) ==
          Catch::Approx(1.0 / (std::numbers::pi * std::sqrt(2.0))).epsilon(1e-12));
  }

  TestCorpus corpus{202, 64, 64};
  DyadicDecomposition d = DyadicDecomposition::build(g);
  for (double q : {4.0, inf}) {
    InequalityReport rep = check_bernstein_lp_lq(corpus, d, 2.0, q, 2, 3);
    INFO("q = " << q);
    CHECK(rep.trials == 64);
    CHECK(rep.violations == 0);
    CHECK(rep.params.at("shell_peak_spread") <= 4.0);
  }
  CHECK_THROWS_AS(check_bernstein_lp_lq(corpus, d, 4.0, 2.0, 2, 3), Error);
}

TEST_CASE("dissipation pairing is exact at p = 2 and positive beyond") {
  Grid2D g = Grid2D::make(64);
  double alpha = 0.3;
  // direct p = 2 oracle: the pairing equals 2^(2 alpha j) times the energy
  SpectralField f = cosine_mode_field(g, 8, 0, 0.9);
  RealField fr = to_real(f);
  RealField lr = to_real(fractional_laplacian(f, alpha));
  std::vector<double> terms(fr.samples.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = fr.samples[i] * lr.samples[i];
  double integral = g.h() * g.h() * pairwise_sum(terms);
  double energy = lp_norm(fr, 2.0);
  CHECK(integral == Catch::Approx(std::pow(8.0, 2.0 * alpha) * energy * energy).epsilon(1e-12));

  TestCorpus corpus{303, 64, 48};
  DyadicDecomposition d = DyadicDecomposition::build(g);
  InequalityReport exact = check_lower_bound(corpus, d, alpha, 2.0, d.j_min + 1, d.j_max - 1);
  CHECK(exact.trials == 48);
  CHECK(exact.violations == 0);
  CHECK(exact.min_ratio >= std::exp2(-2.0 * alpha) * (1.0 - 1e-12));
  CHECK(exact.max_ratio <= std::exp2(2.0 * alpha) * (1.0 + 1e-12));

  InequalityReport p4 = check_lower_bound(corpus, d, alpha, 4.0, d.j_min + 1, d.j_max - 1);
  CHECK(p4.trials == 48);
  CHECK(p4.violations == 0);
  CHECK(p4.min_ratio > 0.0);
  CHECK(p4.params.at("shell_floor_spread") <= 4.0);
  CHECK_THROWS_AS(check_lower_bound(corpus, d, alpha, 1.5, 1, 3), Error);
}

TEST_CASE("interpolation bound holds for every broadband trial") {
  TestCorpus corpus{404, 64, 48};
  DyadicDecomposition d = DyadicDecomposition::build(Grid2D::make(64));
  for (auto [delta, p] : {std::pair{0.4, 4.0}, std::pair{0.6, 10.0}}) {
    InequalityReport rep = check_interpolation(corpus, d, delta, p);
    INFO("delta = " << delta << ", p = " << p);
    CHECK(rep.trials == 48);
    CHECK(rep.violations == 0);
    CHECK(rep.max_ratio <= 1.0 + 1e-12);
    CHECK(rep.min_ratio > 0.0);
  }
}

TEST_CASE("velocity shells never exceed the scalar shell mass") {
  TestCorpus corpus{505, 64, 32};
  DyadicDecomposition d = DyadicDecomposition::build(Grid2D::make(64));
  InequalityReport rep = check_velocity_domination(corpus, d);
  CHECK(rep.trials == 32);
  CHECK(rep.violations == 0);
  CHECK(rep.max_ratio <= 1.0 + 1e-12);
  // on-axis modes (the lacunary family) zero out one velocity component, so
  // the floor can legitimately touch zero
  CHECK(rep.min_ratio >= 0.0);
  CHECK(rep.params.at("max_sup_ratio") > 0.0);
}

TEST_CASE("advection splits exactly for a low-high cosine pair") {
  Grid2D g = Grid2D::make(256);
  DyadicDecomposition d = DyadicDecomposition::build(g);
  REQUIRE(d.j_max == 6);
  SpectralField theta = cosine_mode_field(g, 2, 0, 1.0) + cosine_mode_field(g, 0, 16, 1.0);
  double scale = l2_norm_spectral(advection(riesz_velocity(theta), theta));
  REQUIRE(scale > 0.1);

  // the cross product sits at |k| ~ 16.1, entirely inside shell 4
  ParaproductResult at4 = paraproduct_identity(d, theta, 4);
  CHECK(at4.lhs_l2 > 0.01);
  CHECK(at4.rel_discrepancy < 1e-10);

  for (int j : {2, 3}) {
    ParaproductResult pr = paraproduct_identity(d, theta, j);
    CHECK(pr.lhs_l2 < 1e-12 * scale);
    CHECK(pr.diff_l2 < 1e-12 * scale);
  }
}

TEST_CASE("advection splits exactly on annulus-supported random fields") {
  TestCorpus corpus{606, 64, 20};
  DyadicDecomposition d = DyadicDecomposition::build(Grid2D::make(64));
  InequalityReport rep = check_paraproduct(corpus, d, 2);
  CHECK(rep.trials == 20);
  CHECK(rep.violations == 0);
  CHECK(rep.max_ratio < 1e-10);
}

TEST_CASE("split output shells near the band edges are rejected") {
  TestCorpus corpus{1, 64, 1};
  DyadicDecomposition d = DyadicDecomposition::build(Grid2D::make(64));
  SpectralField theta = annulus_field(corpus, 0, 2);
  CHECK_THROWS_AS(paraproduct_identity(d, theta, 1), Error);
  CHECK_THROWS_AS(paraproduct_identity(d, theta, 3), Error);
}

TEST_CASE("low-high products leave no trace three shells up") {
  Grid2D g = Grid2D::make(128);
  DyadicDecomposition d = DyadicDecomposition::build(g);
  Rng rng(77);
  SpectralField theta = random_band_field(g, 1, 40, -1.0, 1.0, rng);
  CHECK(paraproduct_support_leak(d, theta) < 1e-12);
}

TEST_CASE("reports serialize with stable keys") {
  TestCorpus corpus{99, 64, 8};
  DyadicDecomposition d = DyadicDecomposition::build(Grid2D::make(64));
  InequalityReport rep = check_bernstein_l2(corpus, d, 0.3, 1, 3);
  nlohmann::ordered_json j = report_to_json(rep);
  std::string s = j.dump();
  CHECK(s.rfind("{\"name\":\"bernstein_l2\"", 0) == 0);
  CHECK(j["trials"] == 8);
  CHECK(j["violations"] == 0);
  CHECK(j["seed"] == 99);
  CHECK(j["n"] == 64);
  CHECK(j["params"]["alpha"] == 0.3);
  CHECK(j.contains("min_ratio"));
  CHECK(j.contains("max_ratio"));
}
