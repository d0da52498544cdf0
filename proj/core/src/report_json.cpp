#include "eivtls/report_json.hpp"

#include <cmath>

#include <json.hpp>

namespace eivtls {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

ordered_json quantiles_to_json(const QuantileSummary& q) {
  ordered_json j;
  j["count"] = q.count;
  j["q10"] = number_or_null(q.q10);
  j["q25"] = number_or_null(q.q25);
  j["q50"] = number_or_null(q.q50);
  j["q75"] = number_or_null(q.q75);
  j["q90"] = number_or_null(q.q90);
  return j;
}

}  // namespace

std::string report_to_json(const SimulationReport& report, int indent) {
  ordered_json j;
  j["schema"] = "eiv-tls/1";
  j["kind"] = "simulation_report";
  j["seed"] = report.base_seed;
  j["replicates"] = report.replicates;
  ordered_json results = ordered_json::array();
  for (const SizeReport& size : report.per_size) {
    ordered_json r;
    r["m"] = size.m;
    r["replicates"] = size.replicates;
    r["error_quantiles"] = quantiles_to_json(size.error_fro);
    r["sine_quantiles"] = quantiles_to_json(size.max_sine);
    r["success"] = size.success;
    r["no_solution"] = size.no_solution;
    r["non_generic"] = size.non_generic;
    r["non_unique"] = size.non_unique;
    ordered_json sb;
    sb["checked"] = size.sin_bound.checked;
    sb["violations"] = size.sin_bound.violations;
    sb["not_applicable"] = size.sin_bound.not_applicable;
    r["sin_bound"] = sb;
    r["lambda_min_a0"] = number_or_null(size.lambda_min_a0);
    results.push_back(std::move(r));
  }
  j["results"] = std::move(results);
  return j.dump(indent) + "\n";
}

}  // namespace eivtls
