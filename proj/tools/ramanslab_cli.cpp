// ramanslab: reflection/transmission delay of a Gaussian pulse through a
// Raman-gain doped slab.
//
//   ramanslab run <preset|config.json> [--out DIR] [overrides]
//   ramanslab sweep --omega-c 1.5,4,6,8 [--preset NAME | --config FILE]
//   ramanslab validate <config.json>
//   ramanslab list-presets
//
// Precedence: flags > config file > preset > built-in defaults.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "ramanslab/errors.hpp"
#include "ramanslab/scenario.hpp"

namespace {

using nlohmann::json;
using namespace ramanslab;

struct Overrides {
  std::optional<double> omega_c;
  std::optional<double> eps_b;
  std::optional<std::string> thickness;
  std::optional<int> m;
  std::optional<double> t0;
  std::optional<double> step;

  void attach(CLI::App* cmd, bool with_omega_c) {
    if (with_omega_c) {
      cmd->add_option("--omega-c", omega_c, "Control Rabi frequency (units of gamma)");
    }
    cmd->add_option("--eps-b", eps_b, "Background dielectric constant");
    cmd->add_option("--thickness", thickness, "resonant | anti_resonant")
        ->check(CLI::IsMember({"resonant", "anti_resonant"}));
    cmd->add_option("--m", m, "Thickness order m");
    cmd->add_option("--t0", t0, "Pulse width t0 (seconds)");
    cmd->add_option("--phase-step", step, "Phase-time difference step (units of gamma)");
  }

  json patch() const {
    json j = json::object();
    if (omega_c) j["omega_c_over_gamma"] = *omega_c;
    if (eps_b) j["eps_b"] = *eps_b;
    if (thickness) j["thickness_rule"] = *thickness;
    if (m) j["m"] = *m;
    if (t0) j["t0_seconds"] = *t0;
    if (step) j["phase_time_step_over_gamma"] = *step;
    return j;
  }
};

Scenario resolve(const std::string& target, const Overrides& overrides) {
  Scenario base;
  if (is_preset(target)) {
    base = preset(target);
  } else if (std::filesystem::exists(target)) {
    base = load_config(target);
  } else {
    throw ValidationError("'" + target + "' is neither a preset nor a readable config file");
  }
  return apply_overrides(std::move(base), overrides.patch());
}

void print_summary(const ScenarioResult& r) {
  const auto& s = r.scenario;
  std::cout << fmt::format("scenario {}: Omega_c = {} gamma, {} slab\n", s.name,
                           s.atomic.Omega_c,
                           s.slab.thickness.kind == ThicknessKind::AntiResonant
                               ? "anti-resonant"
                               : "resonant");
  std::cout << fmt::format("  tau_r = {:.6g} / gamma ({})\n", r.tau_r.gamma_units,
                           r.tau_r.superluminal ? "superluminal" : "subluminal");
  std::cout << fmt::format("  tau_t = {:.6g} / gamma ({})\n", r.tau_t.gamma_units,
                           r.tau_t.superluminal ? "superluminal" : "subluminal");
  if (r.time_series) {
    std::cout << fmt::format("  wave-packet peaks: reflected {:.4g}, transmitted {:.4g} / gamma\n",
                             r.time_series->reflected.peak_time_gamma,
                             r.time_series->transmitted.peak_time_gamma);
    if (r.distortion_reflected > kDistortionWarning ||
        r.distortion_transmitted > kDistortionWarning) {
      std::cerr << "warning: pulse width changes by more than 10%; "
                   "peak times may not match phase times\n";
    }
  }
}

int report_error(const std::string& code, const std::string& message) {
  json err = {{"error", code}, {"message", message}};
  std::cerr << err.dump() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulse delay through a slab doped with Raman-driven atoms"};
  app.require_subcommand(1);

  std::string run_target;
  std::string run_out;
  Overrides run_overrides;
  auto* run = app.add_subcommand("run", "Run a preset or config file and write outputs");
  run->add_option("target", run_target, "Preset name or JSON config path")->required();
  run->add_option("--out", run_out, "Output directory (default: out/<scenario name>)");
  run_overrides.attach(run, true);

  std::vector<double> sweep_values;
  std::string sweep_preset = "default";
  std::string sweep_config;
  std::string sweep_out;
  Overrides sweep_overrides;
  auto* sweep = app.add_subcommand("sweep", "Phase times at the carrier versus control field");
  sweep->add_option("--omega-c", sweep_values, "Control-field values (units of gamma)")
      ->delimiter(',');
  auto* preset_opt = sweep->add_option("--preset", sweep_preset, "Base preset");
  sweep->add_option("--config", sweep_config, "Base JSON config")->excludes(preset_opt);
  sweep->add_option("--out", sweep_out, "Write the table to this CSV file");
  sweep_overrides.attach(sweep, false);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config file and print it resolved");
  validate->add_option("config", validate_path, "JSON config path")->required();

  auto* list = app.add_subcommand("list-presets", "List scenario presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("UsageError", e.what());
  }

  try {
    if (*run) {
      const Scenario s = resolve(run_target, run_overrides);
      const auto result = evaluate(s);
      const std::filesystem::path dir =
          run_out.empty() ? std::filesystem::path("out") / s.name : std::filesystem::path(run_out);
      for (const auto& p : write_outputs(result, dir)) std::cout << "wrote " << p.string() << "\n";
      print_summary(result);
    } else if (*sweep) {
      Scenario s = sweep_config.empty() ? resolve(sweep_preset, sweep_overrides)
                                        : resolve(sweep_config, sweep_overrides);
      const auto values = sweep_values.empty() ? s.omega_c_list : sweep_values;
      const SweepTable table = sweep_control_field(s, values);
      const std::string csv = sweep_csv(table);
      if (sweep_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream(sweep_out, std::ios::binary) << csv;
        std::cout << "wrote " << sweep_out << "\n";
      }
      const auto describe = [](const char* what, const auto& change) {
        if (change) {
          std::cerr << fmt::format("{} delay changes sign between Omega_c = {} and {} gamma\n",
                                   what, change->first, change->second);
        }
      };
      describe("reflection", table.reflection_sign_change);
      describe("transmission", table.transmission_sign_change);
    } else if (*validate) {
      const Scenario s = load_config(validate_path);
      std::cout << to_json(s).dump(2) << "\n";
    } else if (*list) {
      for (const auto& name : preset_names()) {
        const Scenario s = preset(name);
        std::cout << fmt::format("{:<16} Omega_c = {:<4} {}\n", name, s.atomic.Omega_c,
                                 s.slab.thickness.kind == ThicknessKind::AntiResonant
                                     ? "anti_resonant"
                                     : "resonant");
      }
    }
  } catch (const SimulationError& e) {
    return report_error(e.code(), e.what());
  } catch (const std::exception& e) {
    return report_error("InternalError", e.what());
  }
  return 0;
}
