#include "dsstar/io.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <stdexcept>

using namespace dsstar;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST(QapJson, DenseRoundTrip) {
  std::mt19937_64 rng(1);
  const auto prob = oracle::random_problem(3, rng);
  const QapInstance inst = QapInstance::dense(prob.W, prob.c);
  const QapInstance back = qap_from_json(Json::parse(qap_to_json(inst).dump()));
  EXPECT_EQ(back.dense_w(), inst.dense_w());
  EXPECT_EQ(back.c(), inst.c());
  EXPECT_FALSE(back.is_factored());
}

TEST(QapJson, FactoredRoundTripAndDefaultLinearTerm) {
  std::mt19937_64 rng(2);
  const Matrix A = oracle::random_sym(3, rng), B = oracle::random_sym(3, rng);
  const QapInstance inst = QapInstance::koopmans_beckmann(A, B, Vector::Zero(9));
  const QapInstance back = qap_from_json(qap_to_json(inst));
  EXPECT_TRUE(back.is_factored());
  EXPECT_EQ(back.kb_a(), inst.kb_a());
  EXPECT_EQ(back.kb_b(), inst.kb_b());
  const QapInstance noc = qap_from_json(Json::parse(R"({"n": 1, "W": [[2.0]]})"));
  EXPECT_EQ(noc.c(), Vector::Zero(1));
}

TEST(QapJson, ShapeErrors) {
  EXPECT_THROW(qap_from_json(Json::parse(R"({"W": [[1]]})")), std::invalid_argument);
  EXPECT_THROW(qap_from_json(Json::parse(R"({"n": 2, "W": [[1]]})")), std::invalid_argument);
  EXPECT_THROW(qap_from_json(Json::parse(R"({"n": 1, "W": [[1]], "c": [1, 2]})")), std::invalid_argument);
  EXPECT_THROW(qap_from_json(Json::parse(R"({"n": 2, "A": [[1, 0], [0, 1]]})")), std::invalid_argument);
  EXPECT_THROW(matrix_from_json(Json::parse("[[1, 2], [3]]")), std::invalid_argument);
}

TEST(PermutationJson, OneBasedRoundTrip) {
  const PermutationMatrix p({2, 0, 1});
  const Json j = permutation_to_json(p);
  EXPECT_EQ(j, Json::parse("[3, 1, 2]"));
  EXPECT_EQ(permutation_from_json(j), p);
  EXPECT_THROW(permutation_from_json(Json::parse("[0, 1]")), std::invalid_argument);
  EXPECT_THROW(permutation_from_json(Json::parse("[1, 1]")), std::invalid_argument);
}

TEST(BoundsJson, Fields) {
  BoundsReport r;
  r.lower = -2.0;
  r.upper = -1.5;
  r.perm = PermutationMatrix::identity(2);
  const Json j = bounds_to_json(r);
  EXPECT_EQ(j.at("method"), "ds-star");
  EXPECT_EQ(j.at("lower"), -2.0);
  EXPECT_EQ(j.at("objective"), -1.5);
  EXPECT_EQ(j.at("perm"), Json::parse("[1, 2]"));
  EXPECT_EQ(j.at("certified_global"), false);
}

TEST(MgmJson, RoundTrip) {
  const MgmInstance inst = make_synthetic_mgm(3, 3, 0.2, 4);
  const MgmInstance back = mgm_from_json(Json::parse(mgm_to_json(inst).dump()));
  EXPECT_EQ(back.k, 3);
  EXPECT_EQ(back.n, 3);
  ASSERT_EQ(back.pair_costs.size(), 3u);
  for (std::size_t p = 0; p < 3; ++p) EXPECT_EQ(back.pair_costs[p].dense_w(), inst.pair_costs[p].dense_w());
  ASSERT_TRUE(back.ground_truth);
  EXPECT_EQ(*back.ground_truth, *inst.ground_truth);
  EXPECT_THROW(mgm_from_json(Json::parse(R"({"k": 1, "n": 2, "pairs": []})")), std::invalid_argument);
}

TEST(FeaturesCsv, ParsesCommentsAndBlankLines) {
  const std::string path = write_temp("feats.csv", "# r,g,b\n0.1, 0.2,0.3\n\n1,2,3\n");
  const Matrix F = read_features_csv(path);
  ASSERT_EQ(F.rows(), 2);
  ASSERT_EQ(F.cols(), 3);
  EXPECT_DOUBLE_EQ(F(0, 1), 0.2);
  EXPECT_DOUBLE_EQ(F(1, 2), 3.0);
  std::remove(path.c_str());
}

TEST(FeaturesCsv, Errors) {
  EXPECT_THROW(read_features_csv(write_temp("bad1.csv", "1,2\n3\n")), std::invalid_argument);
  EXPECT_THROW(read_features_csv(write_temp("bad2.csv", "1,x\n")), std::invalid_argument);
  EXPECT_THROW(read_features_csv(write_temp("bad3.csv", "# only\n")), std::invalid_argument);
  EXPECT_THROW(read_features_csv(::testing::TempDir() + "missing.csv"), std::runtime_error);
}
