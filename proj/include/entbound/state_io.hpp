#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "entbound/states.hpp"

namespace entbound {

// JSON state files:
//   {"dims": [2, 2, 2],
//    "amplitudes": [{"index": [0, 0, 0], "re": 0.7071, "im": 0.0}, ...]}
// Unlisted indices are zero. Readers reject out-of-range labels, duplicates
// and states whose squared norm is not 1 within 1e-10.

inline PureState state_from_json(const nlohmann::json& doc) {
  try {
    if (!doc.is_object()) throw malformed_file("state file must hold a JSON object");
    if (!doc.contains("dims") || !doc.at("dims").is_array())
      throw malformed_file("state file needs a \"dims\" array");
    if (!doc.contains("amplitudes") || !doc.at("amplitudes").is_array())
      throw malformed_file("state file needs an \"amplitudes\" array");

    std::vector<std::size_t> dims;
    for (const auto& d : doc.at("dims")) {
      if (!d.is_number_integer() || d.get<long long>() <= 0)
        throw malformed_file("\"dims\" entries must be positive integers");
      dims.push_back(d.get<std::size_t>());
    }
    std::vector<std::pair<MultiIndex, cplx>> terms;
    for (const auto& a : doc.at("amplitudes")) {
      if (!a.is_object() || !a.contains("index") || !a.at("index").is_array())
        throw malformed_file("each amplitude needs an \"index\" array");
      MultiIndex labels;
      for (const auto& l : a.at("index")) {
        if (!l.is_number_integer() || l.get<long long>() < 0)
          throw malformed_file("index labels must be nonnegative integers");
        labels.push_back(l.get<std::size_t>());
      }
      const double re = a.value("re", 0.0);
      const double im = a.value("im", 0.0);
      terms.emplace_back(std::move(labels), cplx{re, im});
    }
    auto state = PureState::sparse_from_labels(dims, terms);
    return state.size() <= 4096 ? state.to_dense() : state;
  } catch (const nlohmann::json::exception& e) {
    throw malformed_file(std::string("state file: ") + e.what());
  } catch (const invalid_argument& e) {
    throw malformed_file(std::string("state file: ") + e.what());
  }
}

inline PureState read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw malformed_file("cannot open state file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw malformed_file("state file '" + path + "' is not valid JSON: " + e.what());
  }
  return state_from_json(doc);
}

inline nlohmann::json state_to_json(const PureState& state) {
  nlohmann::json doc;
  doc["dims"] = state.dims();
  auto amps = nlohmann::json::array();
  state.for_each_nonzero([&](Index idx, cplx amp) {
    amps.push_back({{"index", state.decode(idx)}, {"re", amp.real()}, {"im", amp.imag()}});
  });
  doc["amplitudes"] = std::move(amps);
  return doc;
}

inline void write_state_file(const PureState& state, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw malformed_file("cannot write state file '" + path + "'");
  out << state_to_json(state).dump(2) << '\n';
}

}  // namespace entbound
