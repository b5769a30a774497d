#include <gtest/gtest.h>

#include <atomic>
#include <numeric>
#include <set>

#include "oracles.hpp"
#include "semgeo/util/linalg.hpp"
#include "semgeo/util/parallel.hpp"
#include "semgeo/util/random.hpp"
#include "semgeo/util/text.hpp"

using namespace semgeo;

TEST(Parallel, VisitsEveryIndexOnce) {
  for (std::size_t threads : {1u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for_rows(hits.size(), Execution{threads}, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) hits[i]++;
    });
    for (auto& h : hits) ASSERT_EQ(h.load(), 1);
  }
}

TEST(Parallel, SumIsBitwiseIndependentOfThreads) {
  auto term = [](std::size_t i) { return 1.0 / (1.0 + static_cast<double>(i) * 0.37); };
  const double one = parallel_sum(10007, Execution{1}, term);
  for (std::size_t threads : {2u, 5u, 16u}) EXPECT_EQ(one, parallel_sum(10007, Execution{threads}, term));
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_for_rows(500, Execution{4},
                                 [](std::size_t b, std::size_t) {
                                   if (b >= 256) throw std::runtime_error("boom");
                                 }),
               std::runtime_error);
}

TEST(Text, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Text, NfcComposes) {
  EXPECT_EQ(nfc("e\xCC\x81"), "\xC3\xA9");  // e + combining acute -> é
  EXPECT_EQ(nfc("\xC3\xA9"), "\xC3\xA9");
  EXPECT_EQ(nfc("\xE5\xAD\x90"), "\xE5\xAD\x90");
}

TEST(Random, SameWordsSameStream) {
  std::vector<std::uint32_t> w{1, 2, 3};
  auto a = make_engine(w), b = make_engine(w);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(standard_normal(a), standard_normal(b));
  w.push_back(4);
  auto c = make_engine(w), d = make_engine(std::vector<std::uint32_t>{1, 2, 3});
  EXPECT_NE(uniform01(c), uniform01(d));
}

TEST(Random, UniformInUnitInterval) {
  auto rng = make_engine(std::vector<std::uint32_t>{9});
  double mean = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    mean += u / 20000;
  }
  EXPECT_NEAR(mean, 0.5, 0.01);
}

TEST(Linalg, MultiplyMatchesNaiveForAnyThreadCount) {
  const Matrix a = oracle::gaussian(70, 33, 1), b = oracle::gaussian(33, 45, 2);
  const Matrix ref = oracle::matmul(a, b);
  const Matrix one = multiply(a, b, Execution{1});
  EXPECT_LT((one - ref).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(one == multiply(a, b, Execution{7}));
}

TEST(Linalg, SignConvention) {
  Matrix v(3, 2);
  v << 0.1, -0.5, -0.9, 0.5, 0.2, 0.1;
  canonicalize_signs(v);
  EXPECT_GT(v(1, 0), 0.0);
  EXPECT_GT(v(0, 1), 0.0);  // tie between rows 0 and 1 goes to row 0
}

TEST(Linalg, EigenDescendingMatchesJacobi) {
  Matrix a = oracle::gaussian(8, 8, 3);
  a = (a + a.transpose()).eval();
  const SymmetricEigen e = eigen_descending(a);
  const oracle::Eig j = oracle::jacobi(a);
  for (int i = 0; i < 8; ++i) {
    EXPECT_NEAR(e.values(i), j.values(7 - i), 1e-10);
    EXPECT_NEAR(std::abs(e.vectors.col(i).dot(j.vectors.col(7 - i))), 1.0, 1e-8);
  }
}

TEST(Linalg, DoubleCenterZeroesRowAndColumnMeans) {
  const Matrix c = double_center(oracle::gaussian(9, 9, 4));
  EXPECT_LT(c.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(c.colwise().sum().cwiseAbs().maxCoeff(), 1e-12);
}
