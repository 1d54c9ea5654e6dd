#pragma once

#include <json.hpp>
#include <string>

#include "feller/criteria.hpp"
#include "feller/harmonic.hpp"
#include "feller/model.hpp"
#include "feller/spectral.hpp"

namespace feller {

using Json = nlohmann::ordered_json;

/// Canonical report envelope. Identical configs must serialize to
/// byte-identical text: insertion-ordered keys, shortest-round-trip floats,
/// no timestamps or machine state.
struct Report {
  std::string command;
  Json config = Json::object();
  Json results = Json::object();
  Json provenance = Json::object();

  std::string to_json() const;
};

Json to_json(const SeriesVerdict& sv);
Json to_json(const FellerClassification& fc);
Json to_json(const SCClassification& sc);
Json to_json(const TransienceClassification& tc);
Json to_json(const CriterionReport& cr);
Json to_json(const FellerEvidenceRecord& rec);
Json to_json(const RadialLimit& rl);
Json harmonic_solution_json(const HarmonicSolution& sol);
Json mass_probe_json(const MassProbe& mp);
Json feller_probe_json(const FellerProbe& fp);

/// Profile CSV: one "<key>,<value>" row per entry after a header line.
std::string profile_csv(const std::string& key_name, const std::string& value_name,
                        const std::vector<std::pair<std::string, double>>& rows);

}  // namespace feller
