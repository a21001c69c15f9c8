#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ramanslab/pulse.hpp"
#include "ramanslab/slab_optics.hpp"
#include "ramanslab/susceptibility.hpp"

namespace ramanslab {

inline constexpr const char* kVersion = "0.1.0";

struct OutputSelection {
  bool spectra = true;
  bool phase_times = true;
  bool time_series = true;
};

/// A complete, resolved simulation setup.
struct Scenario {
  std::string name = "default";
  AtomicParams atomic;
  SlabConfig slab;
  PulseConfig pulse;
  SweepSpec sweep;
  double phase_time_step = 1.0e-3;  // units of gamma
  OutputSelection outputs;
  // Control-field values used by `sweep` when none are given explicitly.
  std::vector<double> omega_c_list;

  void validate() const;
};

std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
/// Throws ValidationError for unknown names.
Scenario preset(const std::string& name);

/// Applies a JSON object of overrides (the documented config schema) on top
/// of `base`. Unknown keys and type mismatches raise ValidationError; the
/// result is validated.
Scenario apply_overrides(Scenario base, const nlohmann::json& doc);

/// Parses a JSON document. An empty (whitespace-only) document yields the
/// defaults. A "preset" key selects the base scenario before the remaining
/// fields are applied. Malformed JSON raises ParseError with line and column.
Scenario parse_config(const std::string& text);
Scenario load_config(const std::filesystem::path& path);

/// The resolved parameter set in config-schema form.
nlohmann::ordered_json to_json(const Scenario& s);

struct ScenarioResult {
  Scenario scenario;
  SpectralResponse response;
  PhaseTime tau_r;
  PhaseTime tau_t;
  std::optional<TimeSeries> time_series;
  double distortion_reflected = 0.0;
  double distortion_transmitted = 0.0;
};

ScenarioResult evaluate(const Scenario& s);

/// Phase times at the carrier from a five-node local grid; cheap enough to
/// sweep.
std::pair<PhaseTime, PhaseTime> carrier_phase_times(const AtomicParams& params,
                                                    const SlabConfig& slab,
                                                    double h);

nlohmann::ordered_json summary_json(const ScenarioResult& result);

/// Writes spectra.csv, timeseries.csv and summary.json (as selected) into
/// `dir`, creating it if needed. Returns the paths written.
std::vector<std::filesystem::path> write_outputs(const ScenarioResult& result,
                                                 const std::filesystem::path& dir);

std::vector<std::filesystem::path> run_scenario(const Scenario& s,
                                                const std::filesystem::path& dir);

struct SweepRow {
  double omega_c = 0.0;
  PhaseTime tau_r;
  PhaseTime tau_t;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  // Consecutive control-field values between which the delay changes sign.
  std::optional<std::pair<double, double>> reflection_sign_change;
  std::optional<std::pair<double, double>> transmission_sign_change;
};

SweepTable sweep_control_field(const Scenario& s, const std::vector<double>& omega_c_list);

std::string sweep_csv(const SweepTable& table);

}  // namespace ramanslab
