#pragma once

#include <filesystem>
#include <iosfwd>

#include "rangebandit/environments.hpp"

namespace rangebandit {

// Instance exchange format, for base path P:
//   P.csv        header "t,arm,loss", one row per (t, arm), t 1-based
//   P.meta.json  kind, K, T, seed, hidden arm, anchors, side information,
//                component anchors, budget, parameters, graph file name
//   P.graph.txt  edge list, written only when a graph is published
// Doubles are printed with 17 significant digits so a round trip is exact.

void write_loss_csv(std::ostream& out, const EnvironmentInstance& env);
/// Reads the loss table into env.losses; K and T are taken from env.
void read_loss_csv(std::istream& in, EnvironmentInstance& env);

void export_instance(const std::filesystem::path& base,
                     const EnvironmentInstance& env);
/// Loads and validates; throws InvalidInput on malformed files and
/// ContractViolation when the instance fails validation.
EnvironmentInstance import_instance(const std::filesystem::path& base);

}  // namespace rangebandit
