#pragma once

#include <string>

#include "eivtls/simulate.hpp"

namespace eivtls {

/// Serializes a simulation report to the versioned JSON document used by
/// the CLI ("schema": "eiv-tls/1").  Field order and number formatting
/// are deterministic, so identical reports produce identical bytes.
/// Non-finite quantiles become null.
std::string report_to_json(const SimulationReport& report, int indent = 2);

}  // namespace eivtls
