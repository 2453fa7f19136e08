#include "dsstar/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dsstar {

Json matrix_to_json(const Matrix& M) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("json: matrix must be an array of rows");
  const auto r = static_cast<Eigen::Index>(j.size());
  const auto c = r == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  Matrix M(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) throw std::invalid_argument("json: ragged matrix");
    for (Eigen::Index k = 0; k < c; ++k) M(i, k) = row[static_cast<std::size_t>(k)].get<double>();
  }
  return M;
}

namespace {

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("json: vector must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

Json vector_to_json(const Vector& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

}  // namespace

QapInstance qap_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n")) throw std::invalid_argument("qap json: missing \"n\"");
  const int n = j.at("n").get<int>();
  if (n < 1) throw std::invalid_argument("qap json: n must be positive");
  const Eigen::Index dim = static_cast<Eigen::Index>(n) * n;
  Vector c = j.contains("c") ? vector_from_json(j.at("c")) : Vector::Zero(dim);
  if (c.size() != dim) throw std::invalid_argument("qap json: c must have n^2 entries");
  if (j.contains("W")) {
    Matrix W = matrix_from_json(j.at("W"));
    if (W.rows() != dim || W.cols() != dim) throw std::invalid_argument("qap json: W must be n^2 x n^2");
    return QapInstance::dense(std::move(W), std::move(c));
  }
  if (j.contains("A") && j.contains("B")) {
    Matrix A = matrix_from_json(j.at("A"));
    Matrix B = matrix_from_json(j.at("B"));
    if (A.rows() != n || A.cols() != n || B.rows() != n || B.cols() != n)
      throw std::invalid_argument("qap json: A and B must be n x n");
    return QapInstance::koopmans_beckmann(std::move(A), std::move(B), std::move(c));
  }
  throw std::invalid_argument("qap json: need \"W\" or both \"A\" and \"B\"");
}

Json qap_to_json(const QapInstance& inst) {
  Json j;
  j["n"] = inst.n();
  if (inst.is_factored()) {
    j["A"] = matrix_to_json(inst.kb_a());
    j["B"] = matrix_to_json(inst.kb_b());
  } else {
    j["W"] = matrix_to_json(*inst.dense_storage());
  }
  j["c"] = vector_to_json(inst.c());
  return j;
}

Json permutation_to_json(const PermutationMatrix& p) {
  Json out = Json::array();
  for (int v : p.indices()) out.push_back(v + 1);
  return out;
}

PermutationMatrix permutation_from_json(const Json& j) {
  std::vector<int> perm = j.get<std::vector<int>>();
  for (int& v : perm) --v;
  return PermutationMatrix(std::move(perm));
}

Json bounds_to_json(const BoundsReport& r) {
  Json j;
  j["method"] = to_string(r.method);
  j["lower"] = r.lower;
  j["upper"] = r.upper;
  j["perm"] = permutation_to_json(r.perm);
  j["objective"] = r.upper;
  j["certified_global"] = r.certified_global;
  j["pf_fallback"] = r.pf_fallback;
  j["eig_warning"] = r.eig_warning;
  j["relaxed_objective"] = r.relaxed_objective;
  j["secs_delta"] = r.secs_delta;
  j["secs_fw"] = r.secs_fw;
  j["secs_total"] = r.secs_total;
  return j;
}

MgmInstance mgm_from_json(const Json& j) {
  MgmInstance inst;
  inst.k = j.at("k").get<int>();
  inst.n = j.at("n").get<int>();
  const int pairs = inst.k * (inst.k - 1) / 2;
  if (inst.k < 2 || inst.n < 1) throw std::invalid_argument("mgm json: need k >= 2 and n >= 1");
  std::vector<std::optional<QapInstance>> costs(static_cast<std::size_t>(pairs));
  for (const Json& p : j.at("pairs")) {
    const int a = p.at("i").get<int>();
    const int b = p.at("j").get<int>();
    Json q = p;
    q["n"] = inst.n;
    costs.at(static_cast<std::size_t>(inst.pair_index(a, b))) = qap_from_json(q);
  }
  for (auto& c : costs) {
    if (!c) throw std::invalid_argument("mgm json: missing pair cost");
    inst.pair_costs.push_back(std::move(*c));
  }
  if (j.contains("truth")) {
    std::vector<PermutationMatrix> t;
    for (const Json& p : j.at("truth")) t.push_back(permutation_from_json(p));
    inst.ground_truth = std::move(t);
  }
  inst.validate();
  return inst;
}

Json mgm_to_json(const MgmInstance& inst) {
  Json j;
  j["k"] = inst.k;
  j["n"] = inst.n;
  Json pairs = Json::array();
  for (int a = 0; a < inst.k; ++a)
    for (int b = a + 1; b < inst.k; ++b) {
      Json p = qap_to_json(inst.pair_costs[static_cast<std::size_t>(inst.pair_index(a, b))]);
      p.erase("n");
      p["i"] = a;
      p["j"] = b;
      pairs.push_back(std::move(p));
    }
  j["pairs"] = std::move(pairs);
  if (inst.ground_truth) {
    Json t = Json::array();
    for (const auto& p : *inst.ground_truth) t.push_back(permutation_to_json(p));
    j["truth"] = std::move(t);
  }
  return j;
}

Json block_matching_to_json(const BlockMatching& X) {
  Json blocks = Json::array();
  for (int a = 0; a < X.k(); ++a)
    for (int b = a + 1; b < X.k(); ++b) {
      Json e;
      e["i"] = a;
      e["j"] = b;
      e["perm"] = permutation_to_json(X.permutation(a, b));
      blocks.push_back(std::move(e));
    }
  return blocks;
}

Matrix read_features_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": not a number: " + cell);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": inconsistent column count");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument(path + ": no feature rows");
  Matrix F(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k) F(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  return F;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

}  // namespace dsstar
