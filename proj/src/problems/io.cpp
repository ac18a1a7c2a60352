#include <fstream>
#include <sstream>

#include "pcrate/error.hpp"
#include "pcrate/problems_io.hpp"

namespace pcrate::problems {

using nlohmann::json;

json to_json(const DenseVector& v) { return json(v.values()); }

json to_json(const DenseMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return rows;
}

DenseVector vector_from_json(const json& j, const char* field) {
  if (!j.is_array()) throw SpecError(std::string("field '") + field + "' must be an array of numbers");
  std::vector<double> vals;
  vals.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw SpecError(std::string("field '") + field + "' has a non-numeric entry");
    vals.push_back(e.get<double>());
  }
  return DenseVector(std::move(vals));
}

DenseMatrix matrix_from_json(const json& j, const char* field) {
  if (!j.is_array()) throw SpecError(std::string("field '") + field + "' must be a nested array");
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) rows.push_back(vector_from_json(r, field).values());
  try {
    return DenseMatrix::from_rows(rows);
  } catch (const ShapeError& e) {
    throw SpecError(std::string("field '") + field + "': " + e.what());
  }
}

namespace {

const json& require(const json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) {
    throw SpecError(std::string("missing field '") + field + "'");
  }
  return j.at(field);
}

json oracle_to_json(const ScalarBlockOracle& o) {
  json j;
  if (const auto* k = std::get_if<Quadratic>(&o.kind())) {
    j["kind"] = "quadratic";
    j["P"] = to_json(k->P);
    j["q"] = to_json(k->q);
  } else if (const auto* k = std::get_if<QuadraticL1>(&o.kind())) {
    j["kind"] = "quadratic-l1";
    j["p_diag"] = to_json(k->p_diag);
    j["q"] = to_json(k->q);
    j["mu"] = k->mu;
  } else {
    j["kind"] = "linear";
    j["g"] = to_json(std::get<Linear>(o.kind()).g);
  }
  j["sigma"] = o.strong_convexity();
  j["L"] = o.grad_lipschitz() ? json(*o.grad_lipschitz()) : json(nullptr);
  return j;
}

ScalarBlockOracle oracle_from_json(const json& j) {
  const std::string kind = require(j, "kind").get<std::string>();
  const double sigma = j.value("sigma", 0.0);
  std::optional<double> L;
  if (j.contains("L") && !j.at("L").is_null()) L = j.at("L").get<double>();
  if (kind == "quadratic") {
    return ScalarBlockOracle::quadratic(matrix_from_json(require(j, "P"), "P"),
                                        vector_from_json(require(j, "q"), "q"), sigma, L);
  }
  if (kind == "quadratic-l1") {
    return ScalarBlockOracle::quadratic_l1(vector_from_json(require(j, "p_diag"), "p_diag"),
                                           vector_from_json(require(j, "q"), "q"),
                                           require(j, "mu").get<double>(), sigma);
  }
  if (kind == "linear") return ScalarBlockOracle::linear(vector_from_json(require(j, "g"), "g"));
  throw SpecError("unknown oracle kind '" + kind + "'");
}

}  // namespace

json problem_to_json(const BlockProblem& problem) {
  json blocks = json::array();
  for (const auto& blk : problem.blocks()) {
    blocks.push_back({{"oracle", oracle_to_json(blk.oracle)}, {"A", to_json(blk.A)}});
  }
  return {{"blocks", blocks}, {"b", to_json(problem.b())}};
}

BlockProblem problem_from_json(const json& j) {
  try {
    std::vector<Block> blocks;
    const json& jb = require(j, "blocks");
    if (!jb.is_array()) throw SpecError("field 'blocks' must be an array");
    for (const auto& e : jb) {
      blocks.push_back({oracle_from_json(require(e, "oracle")), matrix_from_json(require(e, "A"), "A")});
    }
    return BlockProblem(std::move(blocks), vector_from_json(require(j, "b"), "b"));
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed problem document: ") + e.what());
  } catch (const ShapeError& e) {
    throw SpecError(std::string("inconsistent problem document: ") + e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SpecError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw SpecError("write to '" + path.string() + "' failed");
}

void save_problem(const BlockProblem& problem, const std::filesystem::path& path) {
  write_text_file(path, problem_to_json(problem).dump(2) + "\n");
}

BlockProblem load_problem(const std::filesystem::path& path) {
  return problem_from_json(read_json_file(path));
}

}  // namespace pcrate::problems
