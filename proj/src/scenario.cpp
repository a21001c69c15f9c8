#include "ramanslab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "ramanslab/errors.hpp"

namespace ramanslab {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Scenario fig(const std::string& name, double omega_c, ThicknessRule rule,
             std::vector<double> omega_c_list = {}) {
  Scenario s;
  s.name = name;
  s.atomic.Omega_c = omega_c;
  s.slab.thickness = rule;
  s.omega_c_list = omega_c_list.empty() ? std::vector<double>{omega_c}
                                        : std::move(omega_c_list);
  return s;
}

const std::map<std::string, Scenario>& presets() {
  static const std::map<std::string, Scenario> table = [] {
    const auto res = ThicknessRule::resonant(1500);
    const auto anti = ThicknessRule::anti_resonant(1500);
    const std::vector<double> strong{4.0, 6.0, 8.0};
    std::map<std::string, Scenario> t;
    t.emplace("default", fig("default", 1.5, res, {1.5, 4.0, 6.0, 8.0}));
    t.emplace("fig2", fig("fig2", 1.5, res));
    t.emplace("fig3", fig("fig3", 1.5, anti));
    t.emplace("fig4", fig("fig4", 4.0, res, strong));
    t.emplace("fig4-solid", fig("fig4-solid", 4.0, res));
    t.emplace("fig4-dashed", fig("fig4-dashed", 6.0, res));
    t.emplace("fig4-dotdashed", fig("fig4-dotdashed", 8.0, res));
    t.emplace("fig5", fig("fig5", 4.0, anti, strong));
    t.emplace("fig5-solid", fig("fig5-solid", 4.0, anti));
    t.emplace("fig5-dashed", fig("fig5-dashed", 6.0, anti));
    t.emplace("fig5-dotdashed", fig("fig5-dotdashed", 8.0, anti));
    t.emplace("fig6", fig("fig6", 1.5, res));
    t.emplace("fig7", fig("fig7", 6.0, res));
    return t;
  }();
  return table;
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ValidationError("field '" + key + "' must be a number");
  return v.get<double>();
}

long as_integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) {
    throw ValidationError("field '" + key + "' must be an integer");
  }
  return v.get<long>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ValidationError("field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> as_number_list(const json& v, const std::string& key) {
  if (!v.is_array() || v.empty()) {
    throw ValidationError("field '" + key + "' must be a nonempty array of numbers");
  }
  std::vector<double> out;
  for (const auto& x : v) out.push_back(as_number(x, key));
  return out;
}

const char* rule_name(ThicknessKind k) {
  switch (k) {
    case ThicknessKind::Resonant: return "resonant";
    case ThicknessKind::AntiResonant: return "anti_resonant";
    case ThicknessKind::Explicit: return "explicit";
  }
  return "resonant";
}

using Setter = std::function<void(Scenario&, const json&, const std::string&)>;

template <typename Member>
Setter number_at(Member member) {
  return [member](Scenario& s, const json& v, const std::string& k) {
    member(s) = as_number(v, k);
  };
}

void apply_sweep(Scenario& s, const json& v) {
  if (!v.is_object()) throw ValidationError("field 'sweep' must be an object");
  for (const auto& [key, value] : v.items()) {
    const std::string path = "sweep." + key;
    if (key == "lo") s.sweep.lo = as_number(value, path);
    else if (key == "hi") s.sweep.hi = as_number(value, path);
    else if (key == "step") s.sweep.step = as_number(value, path);
    else if (key == "refine_halfwidth") s.sweep.refine_halfwidth = as_number(value, path);
    else if (key == "refine_factor") s.sweep.refine_factor = static_cast<int>(as_integer(value, path));
    else if (key == "refine_below_omega_c") s.sweep.refine_below_omega_c = as_number(value, path);
    else throw ValidationError("unknown field '" + path + "'");
  }
}

void apply_outputs(Scenario& s, const json& v) {
  if (!v.is_array()) throw ValidationError("field 'outputs' must be an array");
  s.outputs = {false, false, false};
  for (const auto& item : v) {
    const std::string name = as_string(item, "outputs");
    if (name == "spectra") s.outputs.spectra = true;
    else if (name == "phase_times") s.outputs.phase_times = true;
    else if (name == "time_series") s.outputs.time_series = true;
    else throw ValidationError("unknown output '" + name + "'");
  }
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"name", [](Scenario& s, const json& v, const std::string& k) { s.name = as_string(v, k); }},
      {"gamma", number_at([](Scenario& s) -> double& { return s.atomic.gamma_unit; })},
      {"Gamma_21", number_at([](Scenario& s) -> double& { return s.atomic.Gamma_21; })},
      {"Gamma_23", number_at([](Scenario& s) -> double& { return s.atomic.Gamma_23; })},
      {"Gamma_24", number_at([](Scenario& s) -> double& { return s.atomic.Gamma_24; })},
      {"Gamma_41", number_at([](Scenario& s) -> double& { return s.atomic.Gamma_41; })},
      {"Gamma_43", number_at([](Scenario& s) -> double& { return s.atomic.Gamma_43; })},
      {"Gamma_13", number_at([](Scenario& s) -> double& { return s.atomic.Gamma_13; })},
      {"Gamma_12", number_at([](Scenario& s) -> double& { return s.atomic.Gamma_12; })},
      {"gamma_12", number_at([](Scenario& s) -> double& { return s.atomic.gamma_12; })},
      {"gamma_32", number_at([](Scenario& s) -> double& { return s.atomic.gamma_32; })},
      {"gamma_34", number_at([](Scenario& s) -> double& { return s.atomic.gamma_34; })},
      {"gamma_14", number_at([](Scenario& s) -> double& { return s.atomic.gamma_14; })},
      {"delta_1_over_gamma", number_at([](Scenario& s) -> double& { return s.atomic.Delta_1; })},
      {"delta_c_over_gamma", number_at([](Scenario& s) -> double& { return s.atomic.Delta_c; })},
      {"omega_1_over_gamma", number_at([](Scenario& s) -> double& { return s.atomic.Omega_1; })},
      {"omega_c_over_gamma", number_at([](Scenario& s) -> double& { return s.atomic.Omega_c; })},
      {"beta_over_gamma", number_at([](Scenario& s) -> double& { return s.atomic.beta; })},
      {"eps_b", number_at([](Scenario& s) -> double& { return s.slab.eps_b; })},
      {"omega0", number_at([](Scenario& s) -> double& { return s.slab.omega0; })},
      {"thickness_rule",
       [](Scenario& s, const json& v, const std::string& k) {
         const std::string rule = as_string(v, k);
         if (rule == "resonant") s.slab.thickness.kind = ThicknessKind::Resonant;
         else if (rule == "anti_resonant") s.slab.thickness.kind = ThicknessKind::AntiResonant;
         else if (rule == "explicit") s.slab.thickness.kind = ThicknessKind::Explicit;
         else throw ValidationError("thickness_rule in {resonant, anti_resonant, explicit}");
       }},
      {"m", [](Scenario& s, const json& v, const std::string& k) {
         s.slab.thickness.m = static_cast<int>(as_integer(v, k));
       }},
      {"d_meters", number_at([](Scenario& s) -> double& { return s.slab.thickness.d_meters; })},
      {"carrier_delta_p_over_gamma",
       number_at([](Scenario& s) -> double& { return s.slab.delta_p_carrier; })},
      {"A0", number_at([](Scenario& s) -> double& { return s.pulse.A0; })},
      {"t0_seconds", number_at([](Scenario& s) -> double& { return s.pulse.t0; })},
      {"span", number_at([](Scenario& s) -> double& { return s.pulse.span; })},
      {"time_halfwidth", number_at([](Scenario& s) -> double& { return s.pulse.time_halfwidth; })},
      {"n_samples", [](Scenario& s, const json& v, const std::string& k) {
         const long n = as_integer(v, k);
         if (n < 0) throw ValidationError("n_samples >= 1024");
         s.pulse.n_samples = static_cast<std::size_t>(n);
       }},
      {"n_spectral", [](Scenario& s, const json& v, const std::string& k) {
         const long n = as_integer(v, k);
         if (n < 0) throw ValidationError("n_spectral >= 3");
         s.pulse.n_spectral = static_cast<std::size_t>(n);
       }},
      {"phase_time_step_over_gamma",
       number_at([](Scenario& s) -> double& { return s.phase_time_step; })},
      {"sweep", [](Scenario& s, const json& v, const std::string&) { apply_sweep(s, v); }},
      {"outputs", [](Scenario& s, const json& v, const std::string&) { apply_outputs(s, v); }},
      {"omega_c_list", [](Scenario& s, const json& v, const std::string& k) {
         s.omega_c_list = as_number_list(v, k);
       }},
  };
  return table;
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double display(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  return std::stod(fmt::format("{:.6g}", x));
}

void write_text(const std::filesystem::path& path, std::string_view body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::optional<std::pair<double, double>> sign_change(
    const std::vector<SweepRow>& rows, bool reflection) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double a = reflection ? rows[i - 1].tau_r.gamma_units : rows[i - 1].tau_t.gamma_units;
    const double b = reflection ? rows[i].tau_r.gamma_units : rows[i].tau_t.gamma_units;
    if ((a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0)) {
      return std::make_pair(rows[i - 1].omega_c, rows[i].omega_c);
    }
  }
  return std::nullopt;
}

}  // namespace

void Scenario::validate() const {
  if (name.empty()) throw ValidationError("name nonempty");
  atomic.validate();
  slab.validate();
  pulse.validate();
  if (!(phase_time_step > 0.0)) throw ValidationError("phase_time_step_over_gamma > 0");
  if (!(sweep.step > 0.0)) throw ValidationError("sweep.step > 0");
  if (!(sweep.hi > sweep.lo)) throw ValidationError("sweep.hi > sweep.lo");
  if (sweep.refine_factor < 1) throw ValidationError("sweep.refine_factor >= 1");
  if (!(sweep.refine_halfwidth >= 0.0)) throw ValidationError("sweep.refine_halfwidth >= 0");
  if (slab.delta_p_carrier <= sweep.lo || slab.delta_p_carrier >= sweep.hi) {
    throw ValidationError("sweep.lo < carrier_delta_p_over_gamma < sweep.hi");
  }
  if (std::abs(pulse.omega0 - slab.omega0) > 1e-12 * slab.omega0) {
    throw ValidationError("pulse and slab share omega0");
  }
  for (double oc : omega_c_list) {
    if (!(oc >= 0.0)) throw ValidationError("omega_c_list entries >= 0");
  }
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : presets()) out.push_back(name);
  return out;
}

bool is_preset(const std::string& name) { return presets().contains(name); }

Scenario preset(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw ValidationError("unknown preset '" + name + "'");
  return it->second;
}

Scenario apply_overrides(Scenario base, const json& doc) {
  if (doc.is_null()) {
    base.validate();
    return base;
  }
  if (!doc.is_object()) throw ValidationError("config document must be a JSON object");
  if (doc.contains("preset")) {
    const std::string name = as_string(doc.at("preset"), "preset");
    base = preset(name);
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "preset") continue;
    const auto it = setters().find(key);
    if (it == setters().end()) throw ValidationError("unknown field '" + key + "'");
    it->second(base, value, key);
  }
  // The pulse carrier always follows the slab carrier.
  base.pulse.omega0 = base.slab.omega0;
  base.validate();
  return base;
}

Scenario parse_config(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    return apply_overrides(preset("default"), json());
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ParseError(fmt::format("line {}, column {}: {}", line, col, e.what()));
  }
  Scenario base = preset("default");
  if (doc.is_object() && !doc.contains("name") && !doc.contains("preset")) {
    base.name = "config";
  }
  return apply_overrides(std::move(base), doc);
}

Scenario load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

ordered_json to_json(const Scenario& s) {
  ordered_json j;
  const auto& a = s.atomic;
  j["name"] = s.name;
  j["gamma"] = a.gamma_unit;
  j["Gamma_21"] = a.Gamma_21;
  j["Gamma_23"] = a.Gamma_23;
  j["Gamma_24"] = a.Gamma_24;
  j["Gamma_41"] = a.Gamma_41;
  j["Gamma_43"] = a.Gamma_43;
  j["Gamma_13"] = a.Gamma_13;
  j["Gamma_12"] = a.Gamma_12;
  j["gamma_12"] = a.gamma_12;
  j["gamma_32"] = a.gamma_32;
  j["gamma_34"] = a.gamma_34;
  j["gamma_14"] = a.gamma_14;
  j["delta_1_over_gamma"] = a.Delta_1;
  j["delta_c_over_gamma"] = a.Delta_c;
  j["omega_1_over_gamma"] = a.Omega_1;
  j["omega_c_over_gamma"] = a.Omega_c;
  j["beta_over_gamma"] = a.beta;
  j["eps_b"] = s.slab.eps_b;
  j["omega0"] = s.slab.omega0;
  j["thickness_rule"] = rule_name(s.slab.thickness.kind);
  if (s.slab.thickness.kind == ThicknessKind::Explicit) {
    j["d_meters"] = s.slab.thickness.d_meters;
  } else {
    j["m"] = s.slab.thickness.m;
  }
  j["carrier_delta_p_over_gamma"] = s.slab.delta_p_carrier;
  j["A0"] = s.pulse.A0;
  j["t0_seconds"] = s.pulse.t0;
  j["span"] = s.pulse.span;
  j["time_halfwidth"] = s.pulse.time_halfwidth;
  j["n_samples"] = s.pulse.n_samples;
  j["n_spectral"] = s.pulse.n_spectral;
  j["phase_time_step_over_gamma"] = s.phase_time_step;
  j["sweep"] = {{"lo", s.sweep.lo},
                {"hi", s.sweep.hi},
                {"step", s.sweep.step},
                {"refine_halfwidth", s.sweep.refine_halfwidth},
                {"refine_factor", s.sweep.refine_factor},
                {"refine_below_omega_c", s.sweep.refine_below_omega_c}};
  ordered_json outs = ordered_json::array();
  if (s.outputs.spectra) outs.push_back("spectra");
  if (s.outputs.phase_times) outs.push_back("phase_times");
  if (s.outputs.time_series) outs.push_back("time_series");
  j["outputs"] = outs;
  j["omega_c_list"] = s.omega_c_list;
  return j;
}

std::pair<PhaseTime, PhaseTime> carrier_phase_times(const AtomicParams& params,
                                                    const SlabConfig& slab,
                                                    double h) {
  const double c = slab.delta_p_carrier;
  const std::vector<double> grid{c - 2.0 * h, c - h, c, c + h, c + 2.0 * h};
  const SpectralResponse local = build_spectral_response(params, slab, grid);
  return {phase_time(local, c, Channel::Reflection, h),
          phase_time(local, c, Channel::Transmission, h)};
}

ScenarioResult evaluate(const Scenario& s) {
  s.validate();
  ScenarioResult res;
  res.scenario = s;
  const double carrier = s.slab.delta_p_carrier;

  if (s.outputs.spectra || s.outputs.phase_times) {
    const auto grid = make_grid(s.sweep, carrier, s.atomic.Omega_c);
    res.response = build_spectral_response(s.atomic, s.slab, grid);
    res.tau_r = phase_time(res.response, carrier, Channel::Reflection, s.phase_time_step);
    res.tau_t = phase_time(res.response, carrier, Channel::Transmission, s.phase_time_step);
  } else {
    std::tie(res.tau_r, res.tau_t) =
        carrier_phase_times(s.atomic, s.slab, s.phase_time_step);
  }

  if (s.outputs.time_series) {
    const auto grid = synthesis_grid(s.pulse, s.atomic.gamma_unit, carrier);
    const auto window = build_spectral_response(s.atomic, s.slab, grid);
    res.time_series = synthesize(window, s.pulse);
    res.distortion_reflected =
        distortion_metric(res.time_series->reflected, res.time_series->incident);
    res.distortion_transmitted =
        distortion_metric(res.time_series->transmitted, res.time_series->incident);
  }
  return res;
}

ordered_json summary_json(const ScenarioResult& r) {
  const Scenario& s = r.scenario;
  const double gamma = s.atomic.gamma_unit;
  ordered_json j;
  j["scenario"] = s.name;
  j["version"] = kVersion;

  const auto phase_entry = [](const PhaseTime& p) {
    ordered_json e;
    e["tau_gamma"] = p.gamma_units;
    e["tau_gamma_display"] = display(p.gamma_units);
    e["tau_seconds"] = p.seconds;
    e["richardson_gamma"] = p.richardson_gamma;
    e["superluminal"] = p.superluminal;
    return e;
  };
  j["tau_r_gamma"] = r.tau_r.gamma_units;
  j["tau_t_gamma"] = r.tau_t.gamma_units;
  j["phase_times"] = {{"reflection", phase_entry(r.tau_r)},
                      {"transmission", phase_entry(r.tau_t)}};
  j["superluminal"] = {{"reflection", r.tau_r.superluminal},
                       {"transmission", r.tau_t.superluminal}};
  j["vacuum_transit_gamma"] = s.slab.transit_time() * gamma;

  if (r.time_series) {
    const auto& ts = *r.time_series;
    const auto peak_entry = [](const Trace& tr) {
      ordered_json e;
      e["peak_gamma"] = tr.peak_time_gamma;
      e["peak_gamma_display"] = display(tr.peak_time_gamma);
      e["rms_width_gamma"] = tr.rms_width_gamma;
      return e;
    };
    j["wave_packet"] = {{"incident", peak_entry(ts.incident)},
                        {"reflected", peak_entry(ts.reflected)},
                        {"transmitted", peak_entry(ts.transmitted)},
                        {"time_step_gamma", ts.times_gamma[1] - ts.times_gamma[0]}};
    j["distortion"] = {
        {"reflected", r.distortion_reflected},
        {"transmitted", r.distortion_transmitted},
        {"warning", r.distortion_reflected > kDistortionWarning ||
                        r.distortion_transmitted > kDistortionWarning}};
  }

  j["derived"] = {{"thickness_m", s.slab.thickness_m()},
                  {"lambda0_m", s.slab.lambda0()},
                  {"transit_time_s", s.slab.transit_time()}};
  j["parameters"] = to_json(s);
  return j;
}

std::vector<std::filesystem::path> write_outputs(const ScenarioResult& r,
                                                 const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;

  if (r.scenario.outputs.spectra) {
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf),
                   "delta_p_over_gamma,re_chi,im_chi,re_n,im_n,reflectance,"
                   "transmittance,tau_r_gamma,tau_t_gamma\n");
    for (const auto& p : r.response.points) {
      fmt::format_to(std::back_inserter(buf),
                     "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                     p.delta_p, p.chi.real(), p.chi.imag(), p.n.real(), p.n.imag(), p.R,
                     p.T, p.tau_r_gamma, p.tau_t_gamma);
    }
    written.push_back(dir / "spectra.csv");
    write_text(written.back(), std::string_view(buf.data(), buf.size()));
  }

  if (r.time_series) {
    const auto& ts = *r.time_series;
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "t_gamma,i_ref_norm,i_refl_norm,i_trans_norm\n");
    for (std::size_t i = 0; i < ts.times_gamma.size(); ++i) {
      fmt::format_to(std::back_inserter(buf), "{:.17g},{:.17g},{:.17g},{:.17g}\n",
                     ts.times_gamma[i], ts.incident.intensity[i],
                     ts.reflected.intensity[i], ts.transmitted.intensity[i]);
    }
    written.push_back(dir / "timeseries.csv");
    write_text(written.back(), std::string_view(buf.data(), buf.size()));
  }

  written.push_back(dir / "summary.json");
  write_text(written.back(), summary_json(r).dump(2) + "\n");
  return written;
}

std::vector<std::filesystem::path> run_scenario(const Scenario& s,
                                                const std::filesystem::path& dir) {
  return write_outputs(evaluate(s), dir);
}

SweepTable sweep_control_field(const Scenario& s, const std::vector<double>& omega_c_list) {
  if (omega_c_list.empty()) throw ValidationError("omega_c list nonempty");
  s.validate();
  SweepTable table;
  for (double oc : omega_c_list) {
    AtomicParams params = s.atomic;
    params.Omega_c = oc;
    params.validate();
    const auto [tr, tt] = carrier_phase_times(params, s.slab, s.phase_time_step);
    table.rows.push_back({oc, tr, tt});
  }
  table.reflection_sign_change = sign_change(table.rows, true);
  table.transmission_sign_change = sign_change(table.rows, false);
  return table;
}

std::string sweep_csv(const SweepTable& table) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf),
                 "omega_c_over_gamma,tau_r_gamma,tau_t_gamma,reflection_superluminal,"
                 "transmission_superluminal\n");
  for (const auto& row : table.rows) {
    fmt::format_to(std::back_inserter(buf), "{:.17g},{:.17g},{:.17g},{},{}\n", row.omega_c,
                   row.tau_r.gamma_units, row.tau_t.gamma_units, row.tau_r.superluminal,
                   row.tau_t.superluminal);
  }
  return fmt::to_string(buf);
}

}  // namespace ramanslab
