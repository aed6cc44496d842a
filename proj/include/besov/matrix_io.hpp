#pragma once

// Matrix JSON: {"n": int, "entries": [[re, im], ...]} row-major with n^2 entries.
// Calculus results add {"method": string, "residual": real}.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "besov/calculus.hpp"
#include "besov/core.hpp"
#include "besov/operators.hpp"

namespace besov {

inline nlohmann::json matrix_to_json(const OperatorMatrix& t) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& z : t.entries()) entries.push_back({z.real(), z.imag()});
  return {{"n", t.n()}, {"entries", std::move(entries)}};
}

inline nlohmann::json result_to_json(const CalculusResult& r) {
  auto j = matrix_to_json(r.value);
  j["method"] = to_string(r.method);
  j["residual"] = r.residual;
  return j;
}

inline OperatorMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
    throw SpecError("matrix JSON needs fields \"n\" and \"entries\"");
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1) throw SpecError("matrix JSON: \"n\" must be an integer >= 1");
  const auto n = j["n"].get<int>();
  const auto& e = j["entries"];
  if (!e.is_array() || e.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw SpecError("matrix JSON: \"entries\" must hold n^2 = " + std::to_string(n * n) + " pairs");
  std::vector<Complex> entries;
  entries.reserve(e.size());
  for (const auto& z : e) {
    if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
      throw SpecError("matrix JSON: each entry must be [re, im]");
    entries.emplace_back(z[0].get<double>(), z[1].get<double>());
  }
  return OperatorMatrix(n, entries);
}

inline OperatorMatrix read_matrix_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open matrix file '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SpecError("matrix file '" + path.string() + "': " + e.what());
  }
  return matrix_from_json(j);
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw SpecError("cannot write '" + path.string() + "'");
  out << j.dump() << '\n';
}

/// A matrix file if the path exists, otherwise an operator spec string.
inline OperatorMatrix load_operator(const std::string& arg) {
  if (std::filesystem::is_regular_file(arg)) return read_matrix_json(arg);
  try {
    return make_operator(arg);
  } catch (const ParseError&) {
    if (arg.find('/') != std::string::npos || arg.find(".json") != std::string::npos)
      throw SpecError("matrix file '" + arg + "' not found");
    throw;
  }
}

}  // namespace besov
