#ifndef UCRISK_IO_HPP
#define UCRISK_IO_HPP

// JSON scenario, measure and payoff documents.
//
// Scenario document:
//   { "outcomes": [ "a", {"id": "b", "point": 0.5}, {"id": "p", "point": [[0.1], [0.2]]} ],
//     "measures": [ {"id": "Q1", "weights": {"a": 1.0}, "penalty": 0.5} ] }
// A null penalty is +∞; an absent penalty is 0.
//
// Payoff document:  { "values": {"a": 1, "b": -2} }  or  { "expr": "max(b1 - 0.1, 0)" }

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ucrisk/error.hpp"
#include "ucrisk/expr.hpp"
#include "ucrisk/scenario.hpp"

namespace ucrisk::io {

using nlohmann::json;

struct ScenarioDocument {
  ScenarioSet set;
  std::vector<std::string> names;
};

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(source + ": malformed JSON at " + detail::line_col(text, e.byte) + ": " + e.what());
  }
}

[[noreturn]] inline void field_error(const std::string& source, const std::string& field, const std::string& msg) {
  throw ValidationError(source + ": field '" + field + "': " + msg);
}

inline double number(const json& j, const std::string& source, const std::string& field) {
  if (!j.is_number()) field_error(source, field, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) field_error(source, field, "expected a finite number");
  return v;
}

inline std::vector<double> weights_of(const json& j, const SpacePtr& space, const std::string& source,
                                      const std::string& field) {
  if (!j.is_object()) field_error(source, field, "expected an object mapping outcome ids to numbers");
  std::vector<double> w(space->size(), 0.0);
  for (const auto& [id, v] : j.items()) {
    auto i = space->find(id);
    if (!i) field_error(source, field + "." + id, "unknown outcome");
    double x = number(v, source, field + "." + id);
    if (x < 0.0) field_error(source, field + "." + id, "negative weight");
    w[*i] = x;
  }
  return w;
}

}  // namespace detail

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline SpacePtr parse_outcomes(const json& doc, const std::string& source) {
  if (!doc.contains("outcomes") || !doc["outcomes"].is_array() || doc["outcomes"].empty())
    detail::field_error(source, "outcomes", "expected a non-empty array");
  std::vector<std::string> ids;
  std::vector<double> reals;
  std::vector<Path> paths;
  std::size_t with_point = 0;
  const auto& arr = doc["outcomes"];
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const auto& o = arr[k];
    std::string field = "outcomes[" + std::to_string(k) + "]";
    if (o.is_string()) {
      ids.push_back(o.get<std::string>());
      continue;
    }
    if (!o.is_object() || !o.contains("id") || !o["id"].is_string())
      detail::field_error(source, field, "expected a string or an object with a string \"id\"");
    ids.push_back(o["id"].get<std::string>());
    if (!o.contains("point")) continue;
    ++with_point;
    const auto& pt = o["point"];
    if (pt.is_number()) {
      reals.push_back(detail::number(pt, source, field + ".point"));
    } else if (pt.is_array() && !pt.empty()) {
      Path p;
      p.steps = pt.size();
      for (std::size_t r = 0; r < pt.size(); ++r) {
        std::vector<double> row;
        if (pt[r].is_array()) {
          for (const auto& v : pt[r]) row.push_back(detail::number(v, source, field + ".point"));
        } else {
          row.push_back(detail::number(pt[r], source, field + ".point"));
        }
        if (r == 0) p.dims = row.size();
        if (row.size() != p.dims || row.empty()) detail::field_error(source, field + ".point", "ragged path array");
        p.values.insert(p.values.end(), row.begin(), row.end());
      }
      paths.push_back(std::move(p));
    } else {
      detail::field_error(source, field + ".point", "expected a number or a path array");
    }
  }
  try {
    if (with_point == 0) return OutcomeSpace::make(std::move(ids));
    if (with_point != ids.size()) detail::field_error(source, "outcomes", "embedding must be total");
    if (!reals.empty() && !paths.empty()) detail::field_error(source, "outcomes", "mixed real and path points");
    if (!reals.empty()) return OutcomeSpace::make_real(std::move(ids), std::move(reals));
    return OutcomeSpace::make_paths(std::move(ids), std::move(paths));
  } catch (const std::invalid_argument& e) {
    detail::field_error(source, "outcomes", e.what());
  }
}

inline ScenarioDocument parse_scenarios(const std::string& text, const std::string& source = "scenarios") {
  json doc = detail::parse_text(text, source);
  if (!doc.is_object()) throw ValidationError(source + ": expected a JSON object");
  auto space = parse_outcomes(doc, source);
  if (!doc.contains("measures") || !doc["measures"].is_array() || doc["measures"].empty())
    detail::field_error(source, "measures", "expected a non-empty array");

  std::vector<Member> members;
  std::vector<std::string> names;
  const auto& arr = doc["measures"];
  for (std::size_t n = 0; n < arr.size(); ++n) {
    const auto& m = arr[n];
    std::string field = "measures[" + std::to_string(n) + "]";
    if (!m.is_object()) detail::field_error(source, field, "expected an object");
    names.push_back(m.contains("id") && m["id"].is_string() ? m["id"].get<std::string>() : "Q" + std::to_string(n + 1));
    if (!m.contains("weights")) detail::field_error(source, field + ".weights", "missing");
    auto w = detail::weights_of(m["weights"], space, source, field + ".weights");
    double mass = 0.0;
    for (double x : w) mass += x;
    if (std::abs(mass - 1.0) > kProbabilityTol)
      detail::field_error(source, field + ".weights", "total mass " + std::to_string(mass) + " is not 1");
    double pen = 0.0;
    if (m.contains("penalty")) {
      if (m["penalty"].is_null()) {
        pen = kInfinity;
      } else {
        pen = detail::number(m["penalty"], source, field + ".penalty");
        if (pen < 0.0) detail::field_error(source, field + ".penalty", "negative penalty");
      }
    }
    members.push_back({Measure(space, std::move(w)), pen});
  }
  try {
    return {ScenarioSet(space, std::move(members)), std::move(names)};
  } catch (const std::invalid_argument& e) {
    detail::field_error(source, "measures", e.what());
  }
}

inline json outcomes_json(const OutcomeSpace& space) {
  json arr = json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    switch (space.embedding()) {
      case EmbeddingKind::None: arr.push_back(space.id(i)); break;
      case EmbeddingKind::Real: arr.push_back({{"id", space.id(i)}, {"point", space.point(i)}}); break;
      case EmbeddingKind::Path: {
        const auto& p = space.path(i);
        json rows = json::array();
        for (std::size_t k = 0; k < p.steps; ++k) {
          json row = json::array();
          for (std::size_t d = 0; d < p.dims; ++d) row.push_back(p.at(k, d));
          rows.push_back(row);
        }
        arr.push_back({{"id", space.id(i)}, {"point", rows}});
        break;
      }
    }
  }
  return arr;
}

inline json measure_json(const Measure& m) {
  json w = json::object();
  for (std::size_t i = 0; i < m.space()->size(); ++i)
    if (m.charges(i)) w[m.space()->id(i)] = m[i];
  return w;
}

inline json scenarios_json(const ScenarioSet& s, const std::vector<std::string>& names = {}) {
  json measures = json::array();
  for (std::size_t n = 0; n < s.size(); ++n) {
    json m;
    m["id"] = n < names.size() ? names[n] : "Q" + std::to_string(n + 1);
    m["weights"] = measure_json(s[n].measure);
    m["penalty"] = s[n].finite() ? json(s[n].penalty) : json(nullptr);
    measures.push_back(m);
  }
  return {{"outcomes", outcomes_json(*s.space())}, {"measures", measures}};
}

inline std::string serialize_scenarios(const ScenarioDocument& doc) {
  return scenarios_json(doc.set, doc.names).dump(2);
}

/// Payoff given by explicit values or by an expression over the embedding.
struct PayoffDocument {
  std::optional<std::map<std::string, double>> values;
  std::optional<Expression> expr;

  Payoff on(const SpacePtr& space, const std::string& source = "payoff") const {
    if (expr) return expr->on(space);
    for (std::size_t i = 0; i < space->size(); ++i)
      if (!values->count(space->id(i))) detail::field_error(source, "values", "missing outcome '" + space->id(i) + "'");
    for (const auto& [id, v] : *values)
      if (!space->find(id)) detail::field_error(source, "values." + id, "unknown outcome");
    return Payoff::from_map(space, *values);
  }
};

inline PayoffDocument parse_payoff(const std::string& text, const std::string& source = "payoff") {
  json doc = detail::parse_text(text, source);
  if (!doc.is_object()) throw ValidationError(source + ": expected a JSON object");
  PayoffDocument out;
  if (doc.contains("expr")) {
    if (!doc["expr"].is_string()) detail::field_error(source, "expr", "expected a string");
    try {
      out.expr = Expression::parse(doc["expr"].get<std::string>());
    } catch (const ValidationError& e) {
      detail::field_error(source, "expr", e.what());
    }
    return out;
  }
  if (!doc.contains("values") || !doc["values"].is_object())
    throw ValidationError(source + ": expected \"values\" or \"expr\"");
  std::map<std::string, double> vals;
  for (const auto& [id, v] : doc["values"].items()) vals[id] = detail::number(v, source, "values." + id);
  out.values = std::move(vals);
  return out;
}

/// { "weights": {...} } on a known space.
inline Measure parse_measure(const std::string& text, const SpacePtr& space, const std::string& source = "measure") {
  json doc = detail::parse_text(text, source);
  if (!doc.is_object() || !doc.contains("weights")) throw ValidationError(source + ": expected {\"weights\": {...}}");
  return Measure(space, detail::weights_of(doc["weights"], space, source, "weights"));
}

}  // namespace ucrisk::io

#endif  // UCRISK_IO_HPP
