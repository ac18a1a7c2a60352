#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "pcrate/error.hpp"
#include "pcrate/framework.hpp"

using namespace pcrate;
using namespace pcrate::framework;
using linalg::DenseMatrix;
using linalg::DenseVector;
using testing::random_matrix;
using testing::random_vector;

namespace {

PcMatrices with_g(DenseMatrix Q, DenseMatrix M, DenseMatrix H) {
  PcMatrices m;
  m.Q = std::move(Q);
  m.M = std::move(M);
  m.H = std::move(H);
  m.G = linalg::transpose(m.Q) + m.Q - linalg::matmul(linalg::transpose(m.M), linalg::matmul(m.H, m.M));
  m.H0 = m.H;
  return m;
}

}  // namespace

TEST_CASE("residual_F") {
  std::vector<problems::Block> blocks;
  blocks.push_back({problems::ScalarBlockOracle::quadratic(DenseMatrix::identity(2), DenseVector(2), 1.0),
                    DenseMatrix::from_rows({{1.0, 0.0}})});
  const problems::BlockProblem p(std::move(blocks), DenseVector{1.0});
  const DenseVector F = residual_F(p, {DenseVector{0.0, 0.0}}, DenseVector{2.0});
  CHECK(F == DenseVector{-2.0, 0.0, -1.0});
  CHECK(linalg::norm(residual_F(p, {DenseVector{1.0, 5.0}}, DenseVector{0.0})) == 0.0);
  CHECK_THROWS_AS(residual_F(p, {DenseVector{1.0}}, DenseVector{0.0}), ShapeError);
}

TEST_CASE("property: F is monotone with zero quadratic form") {
  std::mt19937_64 rng(21);
  const auto p = testing::small_instance(problems::Template::P2StronglyConvex, {4, 3}, 5, 1);
  for (int t = 0; t < 50; ++t) {
    const std::vector<DenseVector> x1{random_vector(rng, 4), random_vector(rng, 3)};
    const std::vector<DenseVector> x2{random_vector(rng, 4), random_vector(rng, 3)};
    const DenseVector l1 = random_vector(rng, 5), l2 = random_vector(rng, 5);
    const DenseVector du = linalg::concat({x1[0] - x2[0], x1[1] - x2[1], l1 - l2});
    const double q = linalg::dot(du, residual_F(p, x1, l1) - residual_F(p, x2, l2));
    CHECK(std::abs(q) <= 1e-12 * (1.0 + linalg::norm_sq(du)));
  }
}

TEST_CASE("check_cc1 examples") {
  PcMatrices m;
  m.Q = DenseMatrix::from_rows({{1.0, 0.0}, {-1.0, 1.0}});
  m.M = DenseMatrix::from_rows({{1.0, 0.0}, {-1.0, 1.0}});
  m.H = DenseMatrix::identity(2);
  CHECK(check_cc1(m) == doctest::Approx(0.0));
  m.H = m.Q;
  m.M = DenseMatrix::identity(2);
  CHECK(check_cc1(m) == doctest::Approx(0.0));
  m.Q = DenseMatrix::scaled_identity(2, 2.0);
  m.H = DenseMatrix::identity(2);
  CHECK(check_cc1(m) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("check_cc2 examples") {
  PcMatrices m = with_g(DenseMatrix::identity(2), DenseMatrix::identity(2), DenseMatrix::identity(2));
  CHECK(m.G == DenseMatrix::identity(2));
  CHECK(check_cc2(m) == 0.0);
  m.G = DenseMatrix::scaled_identity(2, 2.0);
  CHECK(check_cc2(m) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("property: lemma 2 identity holds whenever Q = H M") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 6;
    const DenseMatrix H = testing::random_spd(rng, n);
    const DenseMatrix M = random_matrix(rng, n, n);
    const PcMatrices m = with_g(linalg::matmul(H, M), M, H);
    const DenseVector vk = random_vector(rng, n), vt = random_vector(rng, n), vr = random_vector(rng, n);
    CHECK(lemma2_identity_check(m, vk, vt, vr) <= 1e-12 * check_scale(m, vk, vt, vr) * 10.0);
    CHECK(lemma2_identity_check(m, vk, vk, vr) <= 1e-12);
  }
}

TEST_CASE("check_cc3 vanishes at the reference point") {
  const PcMatrices m = with_g(DenseMatrix::identity(2), DenseMatrix::identity(2), DenseMatrix::identity(2));
  CertRecord c;
  c.r_k = 1.0;
  c.theta_k = c.theta_next = 0.3;
  c.z_k = c.z_prime = DenseVector{1.0};
  c.R = DenseMatrix::identity(1);
  c.sigma_used = 1.0;
  const DenseVector v{0.5, -0.5};
  CHECK(check_cc3(c, m, m.H0, v, v, v, v) == doctest::Approx(0.0));
}

TEST_CASE("PcMatrices shape consistency") {
  PcMatrices m = with_g(DenseMatrix::identity(2), DenseMatrix::identity(2), DenseMatrix::identity(2));
  CHECK_NOTHROW(m.require_consistent_shapes());
  m.H0 = DenseMatrix::identity(3);
  CHECK_THROWS_AS(m.require_consistent_shapes(), ShapeError);
}

TEST_CASE("ergodic averaging") {
  SUBCASE("equal weights") {
    ErgodicAverage e;
    e.add({DenseVector{1.0, 2.0}}, 1.0);
    e.add({DenseVector{3.0, 4.0}}, 1.0);
    CHECK(e.mean() == DenseVector{2.0, 3.0});
  }
  SUBCASE("weights 1 and 3") {
    ErgodicAverage e;
    e.add({DenseVector{0.0}}, 1.0);
    e.add({DenseVector{4.0}}, 3.0);
    CHECK(e.mean()[0] == doctest::Approx(3.0));
  }
  SUBCASE("singleton and errors") {
    ErgodicAverage e;
    CHECK_THROWS_AS(e.mean(), WeightError);
    e.add({DenseVector{7.0}}, 0.5);
    CHECK(e.mean()[0] == 7.0);
    CHECK_THROWS_AS(e.add({DenseVector{1.0}}, 0.0), WeightError);
  }
  SUBCASE("incremental matches batch recomputation") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> w(0.1, 1000.0);
    SolverTrace tr;
    DenseVector num(5);
    double den = 0.0;
    for (int k = 0; k < 3000; ++k) {
      const DenseVector x = random_vector(rng, 5);
      const double r = w(rng);
      ergodic_update(tr, {x}, r);
      num += r * x;
      den += r;
    }
    const DenseVector batch = (1.0 / den) * num;
    CHECK(testing::max_abs_diff(tr.ergodic_x, batch) <= 1e-10 * (1.0 + linalg::norm_inf(batch)));
    CHECK(tr.ergodic_weight_sum == doctest::Approx(den).epsilon(1e-12));
  }
}

TEST_CASE("gap_metrics examples") {
  const auto p = testing::identity_qp(2);
  problems::SaddlePoint sp;
  sp.x_star = {DenseVector{1.0, 0.0}};
  sp.lambda_star = DenseVector{1.0};
  sp.objective_star = 0.5;
  const auto at_star = gap_metrics(p, sp.x_star, sp);
  CHECK(at_star.lagrangian_gap == doctest::Approx(0.0));
  CHECK(at_star.feasibility == 0.0);
  const auto at_zero = gap_metrics(p, {DenseVector{0.0, 0.0}}, sp);
  CHECK(at_zero.lagrangian_gap == doctest::Approx(0.5));
  CHECK(at_zero.feasibility == doctest::Approx(1.0));
  const auto feasible = gap_metrics(p, {DenseVector{1.0, 2.0}}, sp);
  CHECK(feasible.lagrangian_gap == doctest::Approx(2.0));
  CHECK(feasible.objective_gap == doctest::Approx(2.0));
}

TEST_CASE("trace CSV round trip") {
  SolverTrace tr;
  for (std::size_t k = 0; k < 3; ++k) {
    TraceRecord r;
    r.k = k;
    r.beta_k = 1.0 / 3.0 + static_cast<double>(k);
    r.r_k = 0.1 * static_cast<double>(k + 1);
    r.lagrangian_gap_ergodic = 1e-7 / static_cast<double>(k + 1);
    r.feasibility_ergodic = 2e-3;
    r.gap_at_saddle = 0.25;
    r.iterate_diff_sq = 3.0;
    if (k != 1) {
      CertRecord c;
      c.cc1_residual = 1e-17;
      c.cc3_slack = -0.0;
      c.theta_k = 0.7;
      r.cert = c;
    }
    tr.records.push_back(r);
  }
  const auto rows = parse_trace_csv(trace_to_csv(tr));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].beta_k == tr.records[0].beta_k);
  CHECK(rows[2].lagrangian_gap_ergodic == tr.records[2].lagrangian_gap_ergodic);
  CHECK_FALSE(rows[1].cc1_residual.has_value());
  CHECK(*rows[2].theta_k == 0.7);
  CHECK(trace_to_json(tr)["records"].size() == 3);
  CHECK_THROWS_AS(parse_trace_csv("k,beta_k\n1,2\n"), SpecError);
  CHECK(std::stod(format_double(0.1)) == 0.1);
}
