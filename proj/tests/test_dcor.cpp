#include "netfuse/dcor.hpp"

#include "support/oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

using namespace netfuse;

namespace {

NodeSet numbered(Index n) {
  std::vector<std::string> labels;
  for (Index i = 0; i < n; ++i) labels.push_back("n" + std::to_string(i + 1));
  return NodeSet(labels);
}

DistanceMatrix wrap_distance(const Matrix& d) {
  return DistanceMatrix(numbered(d.rows()), d);
}

SimilarityMatrix wrap_similarity(const Matrix& s) {
  return SimilarityMatrix(numbered(s.rows()), s);
}

}  // namespace

TEST_CASE("rows_to_distance basics") {
  Matrix s(2, 2);
  s << 1.0, 0.0, 0.0, 1.0;
  DistanceMatrix D = rows_to_distance(wrap_similarity(s));
  CHECK(D(0, 1) == Catch::Approx(std::sqrt(2.0)).margin(1e-15));
  CHECK(D(0, 0) == 0.0);

  // identical rows -> zero distance
  Matrix t = Matrix::Constant(3, 3, 0.4);
  DistanceMatrix Dt = rows_to_distance(wrap_similarity(t));
  CHECK(Dt.values().maxCoeff() == 0.0);
}

TEST_CASE("rows_to_distance satisfies the triangle inequality") {
  std::mt19937_64 rng(61);
  DistanceMatrix D = rows_to_distance(wrap_similarity(oracles::random_similarity(rng, 10)));
  for (Index i = 0; i < 10; ++i)
    for (Index j = 0; j < 10; ++j)
      for (Index k = 0; k < 10; ++k)
        CHECK(D(i, j) <= D(i, k) + D(k, j) + 1e-12);
}

TEST_CASE("one-minus embedding") {
  Matrix s(2, 2);
  s << 1.0, 0.3, 0.3, 1.0;
  DistanceMatrix D = rows_to_distance(wrap_similarity(s), DistanceEmbedding::one_minus);
  CHECK(D(0, 1) == 0.7);
  CHECK(D(0, 0) == 0.0);
}

TEST_CASE("double_center zeroes every row and column sum") {
  // 2x2 constant off-diagonal: centered entries are forced analytically
  Matrix d(2, 2);
  d << 0.0, 2.0, 2.0, 0.0;
  CenteredMatrix A = double_center(wrap_distance(d));
  CHECK(A.values(0, 0) == Catch::Approx(-1.0).margin(1e-15));
  CHECK(A.values(0, 1) == Catch::Approx(1.0).margin(1e-15));

  // 3x3 hand instance, entry-exact against the direct formula
  Matrix e(3, 3);
  e << 0.0, 1.0, 2.0,
       1.0, 0.0, 3.0,
       2.0, 3.0, 0.0;
  CenteredMatrix B = double_center(wrap_distance(e));
  const double grand = 12.0 / 9.0;
  // row/col means: (0+1+2)/3 = 1, (1+0+3)/3 = 4/3, (2+3+0)/3 = 5/3
  CHECK(B.values(0, 1) == Catch::Approx(1.0 - 1.0 - 4.0 / 3.0 + grand).margin(1e-14));
  CHECK(B.values(2, 1) == Catch::Approx(3.0 - 5.0 / 3.0 - 4.0 / 3.0 + grand).margin(1e-14));

  std::mt19937_64 rng(67);
  CenteredMatrix C = double_center(wrap_distance(oracles::random_distance(rng, 12)));
  for (Index i = 0; i < 12; ++i) {
    CHECK(C.values.row(i).sum() == Catch::Approx(0.0).margin(1e-9));
    CHECK(C.values.col(i).sum() == Catch::Approx(0.0).margin(1e-9));
  }
}

TEST_CASE("u_center zeroes off-diagonal row sums and the diagonal") {
  std::mt19937_64 rng(71);
  CenteredMatrix U = u_center(wrap_distance(oracles::random_distance(rng, 9)));
  for (Index i = 0; i < 9; ++i) {
    CHECK(U.values(i, i) == 0.0);
    CHECK(U.values.row(i).sum() == Catch::Approx(0.0).margin(1e-9));
    CHECK(U.values.col(i).sum() == Catch::Approx(0.0).margin(1e-9));
  }
  CHECK_THROWS_AS(u_center(wrap_distance(Matrix::Zero(3, 3))), TooFewNodes);
}

TEST_CASE("distance_correlation of a matrix with itself is 1") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 10; ++trial) {
    DistanceMatrix D = wrap_distance(oracles::random_distance(rng, 8));
    CHECK(distance_correlation(D, D) == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("distance_correlation is symmetric and scale invariant") {
  std::mt19937_64 rng(79);
  DistanceMatrix Dx = wrap_distance(oracles::random_distance(rng, 10));
  DistanceMatrix Dy = wrap_distance(oracles::random_distance(rng, 10));
  const double r = distance_correlation(Dx, Dy);
  CHECK(distance_correlation(Dy, Dx) == Catch::Approx(r).margin(1e-15));

  DistanceMatrix scaled = wrap_distance(Dy.values() * 3.7);
  CHECK(distance_correlation(Dx, scaled) == Catch::Approx(r).margin(1e-12));

  DistanceMatrix zero = wrap_distance(Matrix::Zero(10, 10));
  CHECK(distance_correlation(Dx, zero) == 0.0);
}

TEST_CASE("distance_correlation matches the three-sum oracle") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 5 + static_cast<Index>(trial % 11);  // up to 15
    Matrix Dx = oracles::random_distance(rng, n);
    Matrix Dy = oracles::random_distance(rng, n);
    const double ours = distance_correlation(wrap_distance(Dx), wrap_distance(Dy));
    const double oracle = oracles::dcor(Dx, Dy);
    REQUIRE(ours == Catch::Approx(oracle).margin(1e-9));
  }
}

TEST_CASE("independent structures score below the permutation null tail") {
  std::mt19937_64 rng(89);
  const Index n = 50;
  Matrix Dx = oracles::random_distance(rng, n);
  Matrix Dy = oracles::random_distance(rng, n);
  const double observed = std::sqrt(distance_correlation(wrap_distance(Dx), wrap_distance(Dy)));

  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<Index>(i);
  std::vector<double> null_values;
  for (int rep = 0; rep < 1000; ++rep) {
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix Dp(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        Dp(i, j) = Dy(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    null_values.push_back(
        std::sqrt(distance_correlation(wrap_distance(Dx), wrap_distance(Dp))));
  }
  std::sort(null_values.begin(), null_values.end());
  const double q95 = null_values[949];
  CHECK(observed < q95);
}

TEST_CASE("partial_distance_correlation removes a layer from itself") {
  std::mt19937_64 rng(97);
  DistanceMatrix X = wrap_distance(oracles::random_distance(rng, 12));
  DistanceMatrix Y = wrap_distance(oracles::random_distance(rng, 12));
  CHECK(partial_distance_correlation(X, Y, Y) == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("conditioning on constant distances is the unconditional u-centered correlation") {
  std::mt19937_64 rng(101);
  DistanceMatrix X = wrap_distance(oracles::random_distance(rng, 10));
  DistanceMatrix Y = wrap_distance(oracles::random_distance(rng, 10));
  Matrix constant = Matrix::Constant(10, 10, 2.0);
  constant.diagonal().setZero();
  DistanceMatrix Z = wrap_distance(constant);  // zero u-centered norm
  const double conditioned = partial_distance_correlation(X, Y, Z);
  const double unconditional = oracles::bcdcor(X.values(), Y.values());
  CHECK(conditioned == Catch::Approx(unconditional).margin(1e-12));
}

TEST_CASE("partial_distance_correlation matches the algebraic-identity oracle") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 5 + static_cast<Index>(trial % 11);  // up to 15, incl. the 10-node case
    Matrix Dx = oracles::random_distance(rng, n);
    Matrix Dy = oracles::random_distance(rng, n);
    Matrix Dz = oracles::random_distance(rng, n);
    const double ours = partial_distance_correlation(wrap_distance(Dx), wrap_distance(Dy),
                                                     wrap_distance(Dz));
    const double oracle = oracles::pdcor(Dx, Dy, Dz);
    REQUIRE(ours == Catch::Approx(oracle).margin(1e-9));
  }
  CHECK_THROWS_AS(partial_distance_correlation(wrap_distance(Matrix::Zero(3, 3)),
                                               wrap_distance(Matrix::Zero(3, 3)),
                                               wrap_distance(Matrix::Zero(3, 3))),
                  TooFewNodes);
}

TEST_CASE("pdcor is symmetric in its first two arguments") {
  std::mt19937_64 rng(107);
  DistanceMatrix X = wrap_distance(oracles::random_distance(rng, 11));
  DistanceMatrix Y = wrap_distance(oracles::random_distance(rng, 11));
  DistanceMatrix Z = wrap_distance(oracles::random_distance(rng, 11));
  CHECK(partial_distance_correlation(X, Y, Z) ==
        Catch::Approx(partial_distance_correlation(Y, X, Z)).margin(1e-12));
}

TEST_CASE("correlation_report on identical layers gives equal sqrt_Rd") {
  std::mt19937_64 rng(109);
  Matrix S = oracles::random_similarity(rng, 8);
  SimilarityMatrix layer = wrap_similarity(S);
  MultilayerNetwork net({layer, layer, layer}, {"cc", "ia", "ie"});
  SimilarityMatrix fused = wrap_similarity(oracles::random_similarity(rng, 8));
  CorrelationReport report = correlation_report(fused, net);
  CHECK(report.sqrt_rd[0] == Catch::Approx(report.sqrt_rd[1]).margin(1e-12));
  CHECK(report.sqrt_rd[1] == Catch::Approx(report.sqrt_rd[2]).margin(1e-12));
  for (std::size_t l = 0; l < 3; ++l)
    for (std::size_t c = 0; c < 3; ++c) {
      if (l == c) continue;
      CHECK(report.sqrt_rd_star[l][c] >= 0.0);
      CHECK(report.sqrt_rd_star[l][c] <= 1.0);
    }
  CHECK(report.layer_names == std::vector<std::string>{"cc", "ia", "ie"});
}
