#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "oracles.hpp"
#include "semgeo/dr/dispatch.hpp"

using namespace semgeo;

namespace {

EmbeddingMatrix raw(const Matrix& x) {
  EmbeddingMatrix m;
  m.values = x;
  m.model_id = "synthetic";
  return m;
}

Matrix floyd_warshall(Matrix w) {
  const auto n = w.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && w(i, j) == 0.0) w(i, j) = INFINITY;
    }
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) w(i, j) = std::min(w(i, j), w(i, k) + w(k, j));
    }
  }
  return w;
}

// Three well-separated Gaussian blobs in 10-D.
Matrix blobs(std::uint64_t seed, std::vector<int>* labels) {
  Matrix x = oracle::gaussian(90, 10, seed, 0.5);
  for (int i = 0; i < 90; ++i) {
    x(i, i / 30) += 8.0;
    labels->push_back(i / 30);
  }
  return x;
}

// Fraction of 10-nearest-neighbour pairs that share a label.
double knn_purity(const Matrix& y, const std::vector<int>& labels) {
  const Matrix d = oracle::distances(y);
  int agree = 0, total = 0;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    std::vector<Eigen::Index> order;
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (j != i) order.push_back(j);
    }
    std::partial_sort(order.begin(), order.begin() + 10, order.end(), [&](auto a, auto b) { return d(i, a) < d(i, b); });
    for (int k = 0; k < 10; ++k) {
      agree += labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
      ++total;
    }
  }
  return static_cast<double>(agree) / total;
}

Matrix permute_rows(const Matrix& x, const std::vector<Eigen::Index>& perm) {
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
  return out;
}

double column_abs_cos(const Vector& a, const Vector& b) { return std::abs(a.dot(b)) / (a.norm() * b.norm()); }

}  // namespace

TEST(Graph, KnnMatchesSortedRows) {
  const Matrix d = oracle::distances(oracle::gaussian(30, 3, 1));
  const auto nn = knn_indices(DistanceMatrix{d}, 4);
  for (Eigen::Index i = 0; i < 30; ++i) {
    std::vector<Eigen::Index> order;
    for (Eigen::Index j = 0; j < 30; ++j) {
      if (j != i) order.push_back(j);
    }
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return d(i, a) < d(i, b); });
    EXPECT_EQ(nn[static_cast<std::size_t>(i)], std::vector<Eigen::Index>(order.begin(), order.begin() + 4));
  }
}

TEST(Graph, KnnTiesGoToLowerIndex) {
  Matrix x(4, 1);
  x << 0, 1, -1, 2;
  const auto nn = knn_indices(pairwise_distances(x), 1);
  EXPECT_EQ(nn[0], std::vector<Eigen::Index>{1});
  EXPECT_THROW(knn_indices(pairwise_distances(x), 4), GeometryError);
}

TEST(Graph, ShortestPathsMatchFloydWarshall) {
  const DistanceMatrix d = pairwise_distances(oracle::gaussian(40, 3, 2));
  const Matrix w = knn_graph(d, 5, false);
  EXPECT_TRUE(w == w.transpose());
  const Matrix sp = shortest_paths(w, Execution{3}).values;
  EXPECT_LT((sp - floyd_warshall(w)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Graph, Components) {
  Matrix a = Matrix::Zero(5, 5);
  a(0, 1) = a(1, 0) = 1;
  a(3, 4) = a(4, 3) = 1;
  std::size_t count = 0;
  const auto c = connected_components(a, &count);
  EXPECT_EQ(count, 3u);
  EXPECT_EQ(c[0], c[1]);
  EXPECT_EQ(c[3], c[4]);
  EXPECT_NE(c[0], c[2]);
  EXPECT_NE(c[0], c[3]);
}

TEST(Pca, MatchesCovarianceEigenvectors) {
  Matrix x = oracle::gaussian(50, 4, 3);
  x.col(0) *= 5.0;
  x.col(2) *= 2.0;
  const Projection p = pca(x, 2);
  Matrix c = x.rowwise() - x.colwise().mean();
  const oracle::Eig e = oracle::jacobi(oracle::matmul(c.transpose(), c) / 49.0);
  for (int k = 0; k < 2; ++k) {
    const Vector want = c * e.vectors.col(3 - k);
    EXPECT_NEAR(column_abs_cos(p.coords.col(k), want), 1.0, 1e-10);
    EXPECT_NEAR(p.coords.col(k).norm(), want.norm(), 1e-9);
  }
  EXPECT_EQ(p.method, "pca");
}

TEST(KernelPca, LinearKernelEqualsPca) {
  const Matrix x = oracle::gaussian(40, 5, 4);
  EXPECT_LT(oracle::procrustes_rms(kernel_pca(x, 2, 1.0, true).coords, pca(x, 2).coords), 1e-9);
}

TEST(KernelPca, RbfSeparatesConcentricCircles) {
  Matrix x(80, 2);
  for (int i = 0; i < 80; ++i) {
    const double r = i < 40 ? 1.0 : 5.0;
    const double a = 2.0 * std::numbers::pi * (i % 40) / 40.0;
    x.row(i) << r * std::cos(a), r * std::sin(a);
  }
  const Projection p = kernel_pca(x, 2, 0.5);
  const double inner_sign = p.coords(0, 0) > 0 ? 1.0 : -1.0;
  for (int i = 0; i < 80; ++i) EXPECT_EQ(p.coords(i, 0) * inner_sign > 0, i < 40) << i;
  // linear PCA cannot: both rings straddle zero on every axis
  const Projection lin = pca(x, 2);
  EXPECT_LT(lin.coords.col(0).head(40).minCoeff(), 0.0);
  EXPECT_GT(lin.coords.col(0).head(40).maxCoeff(), 0.0);
}

TEST(KernelPca, DegenerateKernel) {
  try {
    kernel_pca(Matrix::Ones(10, 3), 2, 1.0);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), GeometryError::Kind::DegenerateKernel);
  }
}

TEST(Isomap, UnrollsSwissRoll) {
  const oracle::Roll roll = oracle::swiss_roll(300, 5);
  const Projection p = isomap(roll.points, 2, 10);
  const double rho = oracle::spearman(oracle::upper(oracle::distances(roll.params)), oracle::upper(oracle::distances(p.coords)));
  EXPECT_GE(rho, 0.9);
}

TEST(Isomap, DisconnectedGraph) {
  Matrix x = oracle::gaussian(20, 2, 6, 0.1);
  x.bottomRows(10).array() += 100.0;
  try {
    isomap(x, 2, 3);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), GeometryError::Kind::DisconnectedGraph);
  }
}

TEST(Lle, WeightsReconstructPlanarNeighbourhoods) {
  // a 2-D plane in 5-D: every neighbourhood of 6 is rank deficient
  const Matrix plane = oracle::planar(60, 7);
  const Matrix basis = oracle::gaussian(2, 5, 8);
  const Matrix x = plane * basis;
  const DistanceMatrix d = pairwise_distances(x);
  const Matrix w = lle_weights(x, d, 6);
  const auto nn = knn_indices(d, 6);
  for (Eigen::Index i = 0; i < 60; ++i) {
    EXPECT_NEAR(w.row(i).sum(), 1.0, 1e-12);
    double outside = 0.0;
    for (Eigen::Index j = 0; j < 60; ++j) {
      const auto& mine = nn[static_cast<std::size_t>(i)];
      if (std::find(mine.begin(), mine.end(), j) == mine.end()) outside += std::abs(w(i, j));
    }
    EXPECT_EQ(outside, 0.0);
  }
  const double err = (x - w * x).rowwise().norm().maxCoeff();
  EXPECT_LT(err, 1e-8);
}

TEST(Lle, ProducesFiniteEmbedding) {
  const oracle::Roll roll = oracle::swiss_roll(200, 9);
  const Projection p = lle(roll.points, 2, 12);
  EXPECT_TRUE(p.coords.allFinite());
  EXPECT_GT(p.coords.col(0).norm(), 0.0);
  EXPECT_THROW(lle(roll.points.topRows(5), 2, 5), GeometryError);
}

TEST(Spectral, BarbellMatchesJacobiOracle) {
  Matrix a = Matrix::Zero(20, 20);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      if (i != j) a(i, j) = a(i + 10, j + 10) = 1.0;
    }
  }
  a(9, 10) = a(10, 9) = 1.0;
  const SpectralResult r = spectral_from_adjacency(a, 2);
  Vector deg = a.rowwise().sum();
  Matrix l = Matrix::Identity(20, 20);
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) l(i, j) -= a(i, j) / std::sqrt(deg(i) * deg(j));
  }
  const oracle::Eig e = oracle::jacobi(l);
  EXPECT_NEAR(e.values(0), 0.0, 1e-12);
  EXPECT_NEAR(r.eigenvalues(0), e.values(1), 1e-10);
  const Vector fiedler = e.vectors.col(1).cwiseQuotient(deg.cwiseSqrt());
  EXPECT_NEAR(column_abs_cos(r.coords.col(0), fiedler), 1.0, 1e-8);
  // the Fiedler direction splits the bells
  for (int i = 0; i < 20; ++i) EXPECT_EQ(r.coords(i, 0) > 0, i < 10 ? r.coords(0, 0) > 0 : r.coords(0, 0) < 0) << i;
}

TEST(Spectral, DisconnectedComponentsSeparate) {
  Matrix x = oracle::gaussian(30, 3, 10, 0.1);
  x.bottomRows(15).array() += 50.0;
  const Projection p = spectral_embedding(x, 2, 5);
  EXPECT_EQ(p.metadata.at("components"), 2.0);
  EXPECT_EQ(p.metadata.at("disconnected"), 1.0);
  const double gap = std::abs(p.coords.col(0).head(15).mean() - p.coords.col(0).tail(15).mean());
  EXPECT_GT(gap, 10.0 * std::max(p.coords.col(0).head(15).array().abs().maxCoeff() - p.coords.col(0).head(15).array().abs().minCoeff(), 1e-12));
}

TEST(Tsne, ConditionalPerplexityIsMatched) {
  const Matrix d = oracle::distances(oracle::gaussian(60, 5, 11));
  for (double perp : {5.0, 15.0}) {
    for (Eigen::Index i : {0, 17, 59}) {
      const Vector sq = d.row(i).array().square();
      const Vector p = conditional_probabilities(sq, i, perp);
      EXPECT_EQ(p(i), 0.0);
      EXPECT_NEAR(p.sum(), 1.0, 1e-12);
      double h = 0.0;
      for (Eigen::Index j = 0; j < p.size(); ++j) {
        if (p(j) > 0) h -= p(j) * std::log(p(j));
      }
      EXPECT_NEAR(std::exp(h), perp, perp * 1e-3);
    }
  }
}

TEST(Tsne, JointProbabilitiesSymmetric) {
  const DistanceMatrix d = pairwise_distances(oracle::gaussian(40, 4, 12));
  const Matrix p = joint_probabilities(d, 10.0);
  EXPECT_LT((p - p.transpose()).cwiseAbs().maxCoeff(), 1e-18);
  EXPECT_NEAR(p.sum(), 1.0, 1e-12);
  EXPECT_TRUE(p.diagonal().isZero(0.0));
}

TEST(Tsne, PerplexityTooLarge) {
  const Matrix x = oracle::gaussian(30, 3, 13);
  TsneParams params;
  params.perplexity = 29.0 / 3.0;
  try {
    tsne_fit(x, 2, params, 0);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), GeometryError::Kind::PerplexityTooLarge);
  }
  params.perplexity = 9.6;
  params.iters = 10;
  EXPECT_NO_THROW(tsne_fit(x, 2, params, 0));
}

TEST(Tsne, KlNonIncreasingAfterExaggerationAndClustersPure) {
  std::vector<int> labels;
  const Matrix x = blobs(14, &labels);
  TsneParams params;
  params.perplexity = 20.0;
  const TsneResult r = tsne_fit(x, 2, params, 0);
  ASSERT_EQ(r.kl_history.size(), static_cast<std::size_t>(r.iterations));
  for (std::size_t i = static_cast<std::size_t>(params.exaggeration_iters) + 1; i < r.kl_history.size(); ++i) {
    ASSERT_LE(r.kl_history[i], r.kl_history[i - 1]) << i;
  }
  EXPECT_GE(knn_purity(r.coords, labels), 0.9);
}

TEST(Tsne, DeterministicAndSeeded) {
  std::vector<int> labels;
  const Matrix x = blobs(15, &labels);
  TsneParams params;
  params.perplexity = 10.0;
  params.iters = 300;
  const TsneResult a = tsne_fit(x, 2, params, 1, Execution{1});
  const TsneResult b = tsne_fit(x, 2, params, 1, Execution{4});
  const TsneResult c = tsne_fit(x, 2, params, 2, Execution{1});
  EXPECT_TRUE(a.coords == b.coords);
  EXPECT_FALSE(a.coords == c.coords);
}

TEST(Dispatch, MethodNames) {
  for (auto name : kImplementedMethods) EXPECT_NO_THROW(check_method_name(name));
  for (auto name : kReservedMethods) {
    try {
      check_method_name(name);
      FAIL() << name;
    } catch (const GeometryError& e) {
      EXPECT_EQ(e.kind(), GeometryError::Kind::UnimplementedMethod);
    }
  }
  try {
    check_method_name("tsnee");
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), GeometryError::Kind::UnknownMethod);
  }
}

TEST(Dispatch, ParameterResolution) {
  const ParamRecord d = default_params("phate");
  EXPECT_EQ(d.at("k"), 10.0);
  EXPECT_EQ(d.at("alpha"), 10.0);
  EXPECT_EQ(d.at("t"), 20.0);
  EXPECT_EQ(resolve_params({"phate", {{"t", 5}}}).at("t"), 5.0);
  EXPECT_THROW(resolve_params({"phate", {{"perplexity", 5}}}), GeometryError);
  EXPECT_THROW(resolve_params({"pca", {{"k", 5}}}), GeometryError);
  EXPECT_THROW(resolve_params({"isomap", {{"k", INFINITY}}}), GeometryError);
}

TEST(Dispatch, EveryMethodProjects) {
  const Matrix x = oracle::gaussian(60, 8, 16);
  for (auto name : kImplementedMethods) {
    DrMethod m{std::string(name), {}};
    if (name == "tsne") m.params = {{"perplexity", 10}, {"iters", 100}};
    for (int dims : {2, 3}) {
      const Projection p = project(raw(x), m, dims, 3, Execution{2});
      EXPECT_EQ(p.coords.rows(), 60) << name;
      EXPECT_EQ(p.coords.cols(), dims) << name;
      EXPECT_TRUE(p.coords.allFinite()) << name;
      EXPECT_EQ(p.method, name);
      EXPECT_EQ(p.model_id, "synthetic");
      EXPECT_EQ(p.seed, 3);
      EXPECT_EQ(p.params.at("dims"), dims);
      EXPECT_TRUE(project(raw(x), m, dims, 3, Execution{1}).coords == p.coords) << name;
    }
  }
  EXPECT_THROW(project(raw(x), {"pca", {}}, 4, 0, {}), GeometryError);
  EXPECT_THROW(project(raw(x), {"phate", {{"k", 2.5}}}, 2, 0, {}), GeometryError);
}

TEST(Spectral, TwoCliquesSplitBySign) {
  Matrix a = Matrix::Ones(8, 8) - Matrix::Identity(8, 8);
  a.topRightCorner(4, 4).setZero();
  a.bottomLeftCorner(4, 4).setZero();
  const SpectralResult r = spectral_from_adjacency(a, 2);
  EXPECT_EQ(r.components, 2u);
  for (int i = 0; i < 8; ++i) EXPECT_EQ(r.coords(i, 0) > 0, (i < 4) == (r.coords(0, 0) > 0)) << i;
}

TEST(Spectral, UnnormalizedLaplacianRowsSumToZero) {
  const Matrix w = knn_graph(pairwise_distances(oracle::gaussian(30, 3, 17)), 4, true);
  EXPECT_LT(laplacian(w).rowwise().sum().cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Tsne, UniformDistancesGiveUniformConditionals) {
  Vector sq = Vector::Constant(12, 2.5);
  sq(3) = 0.0;
  const Vector p = conditional_probabilities(sq, 3, 5.0);
  for (Eigen::Index j = 0; j < 12; ++j) EXPECT_NEAR(p(j), j == 3 ? 0.0 : 1.0 / 11.0, 1e-12);
}

TEST(KernelPca, VanishingGammaIsDegenerate) {
  try {
    kernel_pca(oracle::gaussian(20, 3, 18), 2, 1e-300);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), GeometryError::Kind::DegenerateKernel);
  }
}

TEST(Isomap, LineWithTwoNeighbours) {
  Matrix x(25, 3);
  for (int i = 0; i < 25; ++i) x.row(i) << 0.3 * i, -0.2 * i, 0.1 * i;
  const Projection p = isomap(x, 2, 2);
  Matrix line(25, 1);
  for (int i = 0; i < 25; ++i) line(i, 0) = x.row(i).norm();
  EXPECT_LT(oracle::procrustes_rms(p.coords, line), 1e-6);
}

TEST(Isomap, FlatConvexDataMatchesClassicalMds) {
  const Matrix x = oracle::planar(40, 19) * oracle::gaussian(2, 4, 20);
  const Projection iso = isomap(x, 2, 39);
  const Projection cm = classical_mds(pairwise_distances(x), 2);
  EXPECT_LT(oracle::procrustes_rms(iso.coords, cm.coords), 1e-6);
}

TEST(Linear, ColumnsOrthogonal) {
  const Matrix x = oracle::gaussian(50, 6, 21);
  for (const Projection& p : {pca(x, 3), classical_mds(pairwise_distances(x), 3), kernel_pca(x, 3, 0.1)}) {
    const Matrix g = p.coords.transpose() * p.coords;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) EXPECT_LT(std::abs(g(i, j)) / std::sqrt(g(i, i) * g(j, j)), 1e-8) << p.method;
    }
  }
}

TEST(Dispatch, PermutationEquivariance) {
  const Matrix x = oracle::gaussian(90, 12, 22);
  std::vector<Eigen::Index> perm(90);
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(23));
  const Matrix xp = permute_rows(x, perm);
  for (auto name : kImplementedMethods) {
    DrMethod m{std::string(name), {}};
    if (name == "tsne") m.params = {{"perplexity", 20}};
    const Matrix a = project(raw(x), m, 2, 0, {}).coords;
    const Matrix b = project(raw(xp), m, 2, 0, {}).coords;
    EXPECT_LT((b - permute_rows(a, perm)).cwiseAbs().maxCoeff(), 1e-9) << name;
  }
}
