#pragma once

// Preset studies behind the command-line front end. Each scenario turns a
// Config into a set of numeric tables; nothing here touches the filesystem.

#include <cstdint>
#include <string>
#include <vector>

#include "injphase/analysis.hpp"
#include "injphase/config.hpp"
#include "injphase/csv.hpp"

namespace injphase {

struct RunOptions {
  std::size_t workers = 1;
  std::uint64_t stream_base = 0;  // distinct per sweep cell
};

struct ScenarioResult {
  std::vector<Table> tables;
  std::vector<std::string> notes;  // one-line human summaries
};

/// Scenario names: steady, dipi, fig2, fig3, fig4, fig5, thermal, custom, rate.
const std::vector<std::string>& scenario_names();

/// Throws ParamError for an unknown name or an invalid configuration.
ScenarioResult run_scenario(const std::string& name, const Config& cfg, const RunOptions& opts = {});

/// One scenario evaluation per axis value. Summary tables of all cells are
/// concatenated, each row prefixed with the axis value; rows keep cell order.
ScenarioResult run_sweep(const std::string& scenario, const std::string& axis,
                         const std::vector<std::string>& values, const Settings& base,
                         const RunOptions& opts = {});

/// Pulse-train setup derived from a configuration.
CodingSetup coding_setup(const Config& cfg);

/// Coding-error ensemble at the setup's coupling: alternating bits, noise on,
/// n_pairs pairs split into trains of pairs_per_member pairs (each train has
/// one extra priming pulse). Member m uses stream derive_stream(stream_base, m).
struct RateCell {
  double kappa = 0.0;
  double R = 0.0;
  ErrorRate rate;
  std::vector<double> delta_phi;
  std::vector<int> bits;
};

RateCell run_rate_cell(const CodingSetup& setup, std::size_t n_pairs, std::size_t pairs_per_member,
                       std::uint64_t stream_base, std::size_t workers);

}  // namespace injphase
