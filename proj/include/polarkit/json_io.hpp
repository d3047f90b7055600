// JSON (de)serialization for the toolkit's value types and the CSV writers
// for spectra, bound curves, and reliability tables.
//
// Documents are strict: unknown or malformed fields are rejected, and
// deserialized objects re-run their type invariants.

#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "polarkit/kernel.hpp"
#include "polarkit/polar.hpp"
#include "polarkit/search.hpp"
#include "polarkit/signal_set.hpp"
#include "polarkit/sim.hpp"
#include "polarkit/spectrum.hpp"

namespace polarkit {

using json = nlohmann::json;

namespace detail {

inline void require_fields(const json& doc, std::initializer_list<const char*> fields,
                           const char* what) {
  if (!doc.is_object())
    throw std::invalid_argument(std::string(what) + " document must be a JSON object");
  for (const char* f : fields)
    if (!doc.contains(f))
      throw std::invalid_argument(std::string(what) + " document is missing field '" + f +
                                  "'");
  for (const auto& item : doc.items()) {
    bool known = false;
    for (const char* f : fields)
      if (item.key() == f) known = true;
    if (!known)
      throw std::invalid_argument(std::string(what) + " document has unknown field '" +
                                  item.key() + "'");
  }
}

}  // namespace detail

inline json to_json(const SignalSet& set) {
  json points = json::array();
  for (const Point& p : set.points()) {
    if (set.dimension() == 1)
      points.push_back(json::array({p.x}));
    else
      points.push_back(json::array({p.x, p.y}));
  }
  return json{{"q", set.q()}, {"dimension", set.dimension()}, {"points", points},
              {"es", set.es()}};
}

inline SignalSet signal_set_from_json(const json& doc) {
  detail::require_fields(doc, {"q", "dimension", "points", "es"}, "signal set");
  const int q = doc.at("q").get<int>();
  const int dimension = doc.at("dimension").get<int>();
  const double es = doc.at("es").get<double>();
  const json& pts = doc.at("points");
  if (!pts.is_array() || static_cast<int>(pts.size()) != q)
    throw std::invalid_argument("signal set document needs exactly q points");
  std::vector<Point> points;
  points.reserve(pts.size());
  for (const json& p : pts) {
    if (!p.is_array() || static_cast<int>(p.size()) != dimension)
      throw std::invalid_argument("signal point arity does not match dimension");
    Point pt{p.at(0).get<double>(), dimension == 2 ? p.at(1).get<double>() : 0.0};
    points.push_back(pt);
  }
  return SignalSet(dimension, std::move(points), es);
}

inline json to_json(const Permutation& pi) { return json(pi.image()); }

inline Permutation permutation_from_json(const json& doc) {
  if (!doc.is_array()) throw std::invalid_argument("permutation document must be an array");
  return Permutation(doc.get<std::vector<Symbol>>());
}

inline json to_json(const Kernel& kernel) {
  const int q = kernel.q();
  json rows = json::array();
  for (Symbol u1 = 0; u1 < q; ++u1) {
    json row = json::array();
    for (Symbol u2 = 0; u2 < q; ++u2) row.push_back(kernel(u1, u2));
    rows.push_back(std::move(row));
  }
  return json{{"q", q}, {"table", rows}};
}

inline Kernel kernel_from_json(const json& doc) {
  detail::require_fields(doc, {"q", "table"}, "kernel");
  const int q = doc.at("q").get<int>();
  const json& rows = doc.at("table");
  if (!rows.is_array() || static_cast<int>(rows.size()) != q)
    throw std::invalid_argument("kernel table must have q rows");
  std::vector<Symbol> table;
  table.reserve(static_cast<std::size_t>(q) * static_cast<std::size_t>(q));
  for (const json& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != q)
      throw std::invalid_argument("kernel table row must have q entries");
    for (const json& v : row) table.push_back(v.get<Symbol>());
  }
  Kernel kernel(q, std::move(table));
  if (!kernel.validate())
    throw std::invalid_argument("kernel table is not invertible in each argument");
  return kernel;
}

inline json to_json(const DistanceSpectrum& spectrum) {
  json lines = json::array();
  for (const SpectrumLine& line : spectrum.lines)
    lines.push_back(json{{"d_over_sqrt_es", std::sqrt(line.d_sq)},
                         {"d_sq_over_es", line.d_sq},
                         {"count", line.count}});
  return json{{"role", spectrum.role == ChannelRole::good ? "good" : "bad"},
              {"u1", spectrum.u1},
              {"u2", spectrum.u2},
              {"d_min", spectrum.d_min()},
              {"lines", lines}};
}

inline json to_json(const SearchResult& result) {
  json optima = json::array();
  for (const Permutation& pi : result.optima) optima.push_back(to_json(pi));
  return json{{"best_pi", to_json(result.best_pi)},
              {"certificate", to_string(result.certificate)},
              {"explored", result.explored},
              {"spectrum", to_json(result.spectrum)},
              {"optima", optima}};
}

inline json to_json(const PolarCodeConfig& config) {
  json stages = json::array();
  for (const Kernel& k : config.stage_kernels) stages.push_back(to_json(k));
  return json{{"q", config.q},          {"n", config.n},
              {"stage_kernels", stages}, {"frozen", config.frozen},
              {"set", to_json(config.set)}, {"frozen_value", config.frozen_value}};
}

inline PolarCodeConfig polar_config_from_json(const json& doc) {
  detail::require_fields(doc, {"q", "n", "stage_kernels", "frozen", "set", "frozen_value"},
                         "polar config");
  const json& stages_doc = doc.at("stage_kernels");
  if (!stages_doc.is_array())
    throw std::invalid_argument("polar config stage_kernels must be an array");
  std::vector<Kernel> stages;
  stages.reserve(stages_doc.size());
  for (const json& k : stages_doc) stages.push_back(kernel_from_json(k));
  PolarCodeConfig config{doc.at("q").get<int>(),
                         doc.at("n").get<int>(),
                         std::move(stages),
                         doc.at("frozen").get<std::vector<int>>(),
                         signal_set_from_json(doc.at("set")),
                         doc.at("frozen_value").get<Symbol>()};
  config.validate();
  return config;
}

inline json to_json(const SimResult& result) {
  json points = json::array();
  for (const SimPoint& p : result.points) {
    json point{{"snr_db", p.snr_db}, {"trials", p.trials}, {"errors", p.errors},
               {"rate", p.rate},     {"ci_lo", p.ci_lo},   {"ci_hi", p.ci_hi}};
    if (p.bound) point["bound"] = *p.bound;
    points.push_back(std::move(point));
  }
  const SimMetadata& m = result.metadata;
  return json{{"metadata",
               {{"campaign", m.campaign},
                {"role", m.role},
                {"set", m.set_desc},
                {"kernel", m.kernel_desc},
                {"seed", m.seed},
                {"max_trials", m.max_trials},
                {"early_stop_errors", m.early_stop_errors},
                {"early_stop_chunk", m.early_stop_chunk}}},
              {"points", points}};
}

inline SimResult sim_result_from_json(const json& doc) {
  detail::require_fields(doc, {"metadata", "points"}, "sim result");
  const json& m = doc.at("metadata");
  SimResult result;
  result.metadata = {m.at("campaign").get<std::string>(),
                     m.at("role").get<std::string>(),
                     m.at("set").get<std::string>(),
                     m.at("kernel").get<std::string>(),
                     m.at("seed").get<std::uint64_t>(),
                     m.at("max_trials").get<std::uint64_t>(),
                     m.at("early_stop_errors").get<std::uint64_t>(),
                     m.at("early_stop_chunk").get<std::uint64_t>()};
  for (const json& p : doc.at("points")) {
    SimPoint point{p.at("snr_db").get<double>(), p.at("trials").get<std::uint64_t>(),
                   p.at("errors").get<std::uint64_t>(), p.at("rate").get<double>(),
                   p.at("ci_lo").get<double>(), p.at("ci_hi").get<double>(), std::nullopt};
    if (p.contains("bound")) point.bound = p.at("bound").get<double>();
    result.points.push_back(point);
  }
  return result;
}

inline json to_json(const std::vector<IndexReliability>& table) {
  json rows = json::array();
  for (std::size_t i = 0; i < table.size(); ++i)
    rows.push_back(json{{"index", i},
                        {"errors", table[i].errors},
                        {"trials", table[i].trials},
                        {"error_rate", table[i].error_rate},
                        {"stderr", table[i].std_err}});
  return rows;
}

// --- CSV writers ---

inline void write_spectrum_csv(std::ostream& os, const DistanceSpectrum& spectrum) {
  os << "d_over_sqrtEs,count\n";
  for (const SpectrumLine& line : spectrum.lines)
    os << format_number(std::sqrt(line.d_sq)) << ',' << line.count << '\n';
}

inline void write_bound_csv(std::ostream& os, const DistanceSpectrum& spectrum,
                            std::span<const double> snr_db_list) {
  os << "snr_db,pe_bound\n";
  for (double snr_db : snr_db_list) {
    const double pe = union_bound(spectrum, std::pow(10.0, snr_db / 10.0));
    os << format_number(snr_db) << ',' << format_number(pe) << '\n';
  }
}

inline void write_reliability_csv(std::ostream& os,
                                  const std::vector<IndexReliability>& table) {
  os << "index,error_rate,stderr\n";
  for (std::size_t i = 0; i < table.size(); ++i)
    os << i << ',' << format_number(table[i].error_rate) << ','
       << format_number(table[i].std_err) << '\n';
}

}  // namespace polarkit
