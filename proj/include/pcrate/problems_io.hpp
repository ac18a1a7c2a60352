#pragma once

// JSON documents for problem instances. Matrices are nested row-major
// arrays; doubles are written in shortest round-trip form.

#include <filesystem>

#include <json.hpp>

#include "pcrate/problems.hpp"

namespace pcrate::problems {

nlohmann::json to_json(const DenseVector& v);
nlohmann::json to_json(const DenseMatrix& m);
DenseVector vector_from_json(const nlohmann::json& j, const char* field);
DenseMatrix matrix_from_json(const nlohmann::json& j, const char* field);

nlohmann::json problem_to_json(const BlockProblem& problem);
/// Throws SpecError on a malformed document.
BlockProblem problem_from_json(const nlohmann::json& j);

void save_problem(const BlockProblem& problem, const std::filesystem::path& path);
BlockProblem load_problem(const std::filesystem::path& path);

/// Reads and parses a JSON file; SpecError on I/O or syntax errors.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace pcrate::problems
