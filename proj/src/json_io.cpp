#include "qrad/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qrad/error.hpp"

namespace qrad {

namespace {

using nlohmann::json;

CheckClass class_from_string(const std::string& s) {
  for (CheckClass c : {CheckClass::upper, CheckClass::lower, CheckClass::equality, CheckClass::vector}) {
    if (to_string(c) == s) return c;
  }
  throw Error(ErrorCode::ParseError, "unknown check class " + s);
}

std::size_t dimension(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw Error(ErrorCode::ParseError, std::string("\"") + key + "\" must be a positive integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

json matrix_to_json(const CMatrix& m) {
  json data = json::array();
  for (const cplx& z : m.data()) data.push_back({z.real(), z.imag()});
  if (m.square()) return {{"n", m.rows()}, {"data", std::move(data)}};
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "matrix must be a JSON object");
    std::size_t rows = 0, cols = 0;
    if (j.contains("n")) {
      rows = cols = dimension(j, "n");
    } else {
      rows = dimension(j, "rows");
      cols = dimension(j, "cols");
    }
    const json& data = j.at("data");
    if (!data.is_array() || data.size() != rows * cols) {
      throw Error(ErrorCode::ParseError, "\"data\" must hold " + std::to_string(rows * cols) + " entries");
    }
    std::vector<cplx> entries;
    entries.reserve(data.size());
    for (const json& e : data) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw Error(ErrorCode::ParseError, "each entry must be [re, im]");
      }
      entries.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return CMatrix(rows, cols, std::move(entries));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

CMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
  // NaN/Infinity literals are not JSON, so the strict parser rejects them.
  const json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::ParseError, path + " is not valid JSON");
  return matrix_from_json(j);
}

json vector_to_json(const CVector& v) {
  json out = json::array();
  for (const cplx& z : v) out.push_back({z.real(), z.imag()});
  return out;
}

json report_to_json(const IneqReport& r) {
  json witness = json::object();
  for (const auto& [k, m] : r.witnesses) witness[k] = matrix_to_json(m);
  return {
      {"suite", r.suite},
      {"name", r.name},
      {"class", to_string(r.check_class)},
      {"q", r.q},
      {"params", r.params},
      {"lhs", r.lhs},
      {"rhs", r.rhs},
      {"slack", r.slack},
      {"tol", r.tol},
      {"exact", r.exact},
      {"pass", r.pass},
      {"witness", std::move(witness)},
      {"effort", {{"restarts", r.effort.restarts}, {"max_iter", r.effort.max_iter}}},
      {"seed", r.seed},
  };
}

IneqReport report_from_json(const json& j) {
  try {
    IneqReport r;
    r.suite = j.at("suite").get<std::string>();
    r.name = j.at("name").get<std::string>();
    r.check_class = class_from_string(j.at("class").get<std::string>());
    r.q = j.at("q").get<double>();
    r.params = j.at("params").get<std::map<std::string, double>>();
    r.lhs = j.at("lhs").get<double>();
    r.rhs = j.at("rhs").get<double>();
    r.slack = j.at("slack").get<double>();
    r.tol = j.at("tol").get<double>();
    r.exact = j.at("exact").get<bool>();
    r.pass = j.at("pass").get<bool>();
    for (const auto& [k, m] : j.at("witness").items()) r.witnesses[k] = matrix_from_json(m);
    r.effort = {j.at("effort").at("restarts").get<int>(), j.at("effort").at("max_iter").get<int>()};
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace qrad
