// SPDX-License-Identifier: Apache-2.0
#include "tfdiff/config.hpp"

#include "tfdiff/directivity.hpp"
#include "tfdiff/error.hpp"
#include "tfdiff/irtools.hpp"
#include "tfdiff/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace tfdiff {

using ojson = nlohmann::ordered_json;

namespace {

// Everything a user can set, before profile defaults are resolved.
struct Settings {
  std::optional<std::string> array, profile, out, eta, beam, diffuse, samples, com_norm, ave_weight;
  std::optional<std::vector<double>> bands;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs, tones, trials, realizations, order;
  std::optional<std::size_t> rays, whitener_rays;
  std::optional<double> rho, c;
  std::map<std::string, std::string> directivity;

  void overlay(const Settings& o) {
    auto take = [](auto& dst, const auto& src) {
      if (src) dst = src;
    };
    take(array, o.array);
    take(profile, o.profile);
    take(out, o.out);
    take(eta, o.eta);
    take(beam, o.beam);
    take(diffuse, o.diffuse);
    take(samples, o.samples);
    take(com_norm, o.com_norm);
    take(ave_weight, o.ave_weight);
    take(bands, o.bands);
    take(seed, o.seed);
    take(jobs, o.jobs);
    take(tones, o.tones);
    take(trials, o.trials);
    take(realizations, o.realizations);
    take(order, o.order);
    take(rays, o.rays);
    take(whitener_rays, o.whitener_rays);
    take(rho, o.rho);
    take(c, o.c);
    for (const auto& [k, v] : o.directivity) directivity[k] = v;
  }
};

Settings settings_from_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw FormatError("config file " + path + " must hold a JSON object");
  Settings s;
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "array") s.array = v.get<std::string>();
      else if (key == "profile") s.profile = v.get<std::string>();
      else if (key == "out") s.out = v.get<std::string>();
      else if (key == "eta") s.eta = v.get<std::string>();
      else if (key == "beam") s.beam = v.get<std::string>();
      else if (key == "diffuse") s.diffuse = v.get<std::string>();
      else if (key == "samples") s.samples = v.get<std::string>();
      else if (key == "com_normalization") s.com_norm = v.get<std::string>();
      else if (key == "ave_weighting") s.ave_weight = v.get<std::string>();
      else if (key == "bands") s.bands = v.get<std::vector<double>>();
      else if (key == "seed") s.seed = v.get<std::uint64_t>();
      else if (key == "jobs") s.jobs = v.get<int>();
      else if (key == "tones") s.tones = v.get<int>();
      else if (key == "trials") s.trials = v.get<int>();
      else if (key == "realizations") s.realizations = v.get<int>();
      else if (key == "order") s.order = v.get<int>();
      else if (key == "rays") s.rays = v.get<std::size_t>();
      else if (key == "whitener_rays") s.whitener_rays = v.get<std::size_t>();
      else if (key == "rho") s.rho = v.get<double>();
      else if (key == "c") s.c = v.get<double>();
      else if (key == "directivity") s.directivity = v.get<std::map<std::string, std::string>>();
      else throw UsageError("unknown config key '" + key + "' in " + path);
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("config key '" + key + "' has the wrong type");
    }
  }
  return s;
}

ArrayKind array_or_default(const Settings& s) { return parse_array_kind(s.array.value_or("tf24")); }

Profile parse_profile(const std::string& p) {
  if (p == "ci") return Profile::Ci;
  if (p == "paper") return Profile::Paper;
  throw UsageError("--profile must be ci or paper, got '" + p + "'");
}

ComNormalization parse_com_norm(const std::string& s) {
  if (s == "calibrated") return ComNormalization::Calibrated;
  if (s == "printed") return ComNormalization::Printed;
  throw UsageError("--com-normalization must be calibrated or printed");
}

AveWeighting parse_ave_weighting(const std::string& s) {
  if (s == "velocity") return AveWeighting::Velocity;
  if (s == "energy") return AveWeighting::Energy;
  if (s == "intensity") return AveWeighting::Intensity;
  throw UsageError("--ave-weighting must be velocity, energy or intensity");
}

const char* com_norm_name(ComNormalization n) { return n == ComNormalization::Calibrated ? "calibrated" : "printed"; }

const char* ave_weighting_name(AveWeighting w) {
  switch (w) {
    case AveWeighting::Velocity: return "velocity";
    case AveWeighting::Energy: return "energy";
    case AveWeighting::Intensity: return "intensity";
  }
  return "?";
}

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw UsageError("--directivity expects id=path, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  auto to_num = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError("bad number '" + s + "' in range '" + text + "'");
    }
  };
  std::vector<std::string> parts;
  std::string cur;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  for (char ch : text) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  if (sep == ',') {
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(to_num(p));
    return out;
  }
  if (parts.size() != 3) throw UsageError("range must be lo:hi:step, got '" + text + "'");
  const double lo = to_num(parts[0]), hi = to_num(parts[1]), step = to_num(parts[2]);
  if (!(step > 0.0) || hi < lo) throw UsageError("range needs lo <= hi and step > 0: '" + text + "'");
  std::vector<double> out;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int i = 0; i <= n; ++i) out.push_back(std::round((lo + i * step) * 1e12) / 1e12);
  return out;
}

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Diffuseness estimation benchmarks for microphone arrays", "tfdiff"};
  app.require_subcommand(1);
  Settings flags;
  std::string config_path;
  std::vector<std::string> directivity_args;

  // CLI11 stores into plain values; `set` tracks which flags were given.
  std::string array, profile, out, eta, beam, diffuse, samples, com_norm, ave_weight;
  std::vector<double> bands;
  std::uint64_t seed = 0;
  int jobs = 0, tones = 0, trials = 0, realizations = 0, order = 0;
  std::size_t rays = 0, whitener_rays = 0;
  double rho = 0.0, c = 0.0;

  auto common = [&](CLI::App* sub, bool benchmark) {
    sub->add_option("--array", array, "afmt | fibo64 | tf24");
    sub->add_option("--bands", bands, "octave bands in Hz (63 ... 16000)")->delimiter(',');
    sub->add_option("--out", out, "output directory");
    sub->add_option("--config", config_path, "JSON file with default settings");
    sub->add_option("--rho", rho, "air density kg/m^3");
    sub->add_option("--c", c, "sound speed m/s");
    sub->add_option("--jobs", jobs, "worker threads");
    sub->add_option("--directivity", directivity_args, "replace a directivity model: id=coeffs.csv");
    sub->add_option("--com-normalization", com_norm, "calibrated | printed");
    sub->add_option("--ave-weighting", ave_weight, "velocity | energy | intensity");
    if (benchmark) {
      sub->add_option("--profile", profile, "ci | paper");
      sub->add_option("--seed", seed, "random seed");
      sub->add_option("--tones", tones, "tones per band");
      sub->add_option("--rays", rays, "beam and diffuse rays per trial (case 2)");
      sub->add_option("--trials", trials, "independent trials per band (case 2)");
      sub->add_option("--realizations", realizations, "realizations per angle (case 3)");
      sub->add_option("--whitener-rays", whitener_rays, "diffuse rays for the pressure-velocity whitener");
    }
  };
  for (const char* name : {"case1", "case2", "case3"}) {
    auto* sub = app.add_subcommand(name, std::string("run benchmark ") + name);
    common(sub, true);
    if (std::string(name) == "case2") sub->add_option("--eta", eta, "energy ratios lo:hi:step or list");
  }
  auto* irmix = app.add_subcommand("irmix", "mix measured impulse responses at energy ratios");
  common(irmix, false);
  irmix->add_option("--beam", beam, "anechoic response (WAV)")->required();
  irmix->add_option("--diffuse", diffuse, "reverberant response (WAV)")->required();
  irmix->add_option("--eta", eta, "energy ratios lo:hi:step or list");
  auto* fit_cmd = app.add_subcommand("fit", "fit directivity polynomials to pattern samples");
  fit_cmd->add_option("--samples", samples, "band_hz,angle_deg,magnitude CSV")->required();
  fit_cmd->add_option("--order", order, "polynomial order 0..8");
  fit_cmd->add_option("--out", out, "coefficient table (default: stdout)");
  auto* layout = app.add_subcommand("layout", "write an array layout as JSON");
  layout->add_option("--array", array, "afmt | fibo64 | tf24");
  layout->add_option("--out", out, "layout file (default: stdout)");

  std::vector<const char*> argv{"tfdiff"};
  for (const auto& a : args) argv.push_back(a.c_str());
  RunConfig cfg;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    cfg.command = "help";
    const auto subs = app.get_subcommands();
    cfg.help_text = subs.empty() ? app.help() : subs.front()->help();
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();

  auto given = [&](const char* flag) {
    try {
      return sub->get_option(flag)->count() > 0;
    } catch (const CLI::OptionNotFound&) {
      return false;
    }
  };
  if (given("--array")) flags.array = array;
  if (given("--profile")) flags.profile = profile;
  if (given("--out")) flags.out = out;
  if (given("--eta")) flags.eta = eta;
  if (given("--beam")) flags.beam = beam;
  if (given("--diffuse")) flags.diffuse = diffuse;
  if (given("--samples")) flags.samples = samples;
  if (given("--com-normalization")) flags.com_norm = com_norm;
  if (given("--ave-weighting")) flags.ave_weight = ave_weight;
  if (given("--bands")) flags.bands = bands;
  if (given("--seed")) flags.seed = seed;
  if (given("--jobs")) flags.jobs = jobs;
  if (given("--tones")) flags.tones = tones;
  if (given("--trials")) flags.trials = trials;
  if (given("--realizations")) flags.realizations = realizations;
  if (given("--order")) flags.order = order;
  if (given("--rays")) flags.rays = rays;
  if (given("--whitener-rays")) flags.whitener_rays = whitener_rays;
  if (given("--rho")) flags.rho = rho;
  if (given("--c")) flags.c = c;
  for (const auto& d : directivity_args) flags.directivity.insert(split_assignment(d));

  Settings s;
  if (!config_path.empty()) s = settings_from_json(config_path);
  s.overlay(flags);

  const int case_id = cfg.command.size() == 5 && cfg.command.rfind("case", 0) == 0 ? cfg.command[4] - '0' : 0;
  const Profile prof = parse_profile(s.profile.value_or("paper"));
  CaseConfig& cc = cfg.case_cfg;
  cc = CaseConfig::defaults(case_id == 0 ? 1 : case_id, array_or_default(s), prof);
  cc.case_id = case_id;
  if (s.bands) cc.bands = *s.bands;
  if (s.seed) cc.seed = *s.seed;
  if (s.jobs) cc.jobs = *s.jobs;
  if (s.tones) cc.tones = *s.tones;
  if (s.trials) cc.trials = *s.trials;
  if (s.realizations) cc.realizations = *s.realizations;
  if (s.rays) cc.beam_rays = cc.diffuse_rays = *s.rays;
  if (s.whitener_rays) cc.whitener_rays = *s.whitener_rays;
  if (s.rho) cc.medium.rho = *s.rho;
  if (s.c) cc.medium.c = *s.c;
  if (s.com_norm) cc.processor.com_normalization = parse_com_norm(*s.com_norm);
  if (s.ave_weight) cc.processor.ave_weighting = parse_ave_weighting(*s.ave_weight);
  if (cfg.command == "irmix") cc.etas = parse_range(s.eta.value_or("0:1:0.1"));
  else if (s.eta) cc.etas = parse_range(*s.eta);
  for (const auto& [id, path] : s.directivity) {
    cc.directivity_overrides[id] = load_coefficient_file(path);
    cfg.directivity_files[id] = path;
  }
  if (s.out) {
    cfg.out_dir = *s.out;
    cfg.out_file = *s.out;
  }
  cfg.beam_path = s.beam.value_or("");
  cfg.diffuse_path = s.diffuse.value_or("");
  cfg.samples_path = s.samples.value_or("");
  cfg.fit_order = s.order.value_or(kMaxDirectivityOrder);
  if (cfg.fit_order < 0 || cfg.fit_order > kMaxDirectivityOrder) throw UsageError("--order must be 0..8");

  if (case_id != 0) cc.validate();
  if (cfg.command == "irmix") {
    for (double b : cc.bands) (void)octave_band(b);
    for (double e : cc.etas) {
      if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("--eta values must lie in [0, 1]");
    }
    cc.medium.validate();
  }
  return cfg;
}

std::string RunConfig::echo_json() const {
  const CaseConfig& c = case_cfg;
  ojson j;
  j["tool"] = "tfdiff";
  j["version"] = "1.0.0";
  j["command"] = command;
  j["array"] = array_kind_name(c.array);
  if (c.case_id != 0) {
    j["profile"] = profile_name(c.profile);
    j["seed"] = c.seed;
    j["tones"] = c.tones;
  }
  j["bands"] = c.bands;
  j["medium"] = {{"rho", c.medium.rho}, {"c", c.medium.c}};
  j["processor"] = {{"hoa_order", c.processor.hoa_order},
                    {"hoa_lambda", c.processor.hoa_lambda},
                    {"ave_weighting", ave_weighting_name(c.processor.ave_weighting)},
                    {"com_normalization", com_norm_name(c.processor.com_normalization)}};
  j["noise"] = {{"amplitude_range_db", c.noise.amplitude_range_db}};
  switch (c.case_id) {
    case 1:
      j["azimuths"] = c.azimuths;
      j["zeniths"] = c.zeniths;
      break;
    case 2:
      j["etas"] = c.etas;
      j["beam_rays"] = c.beam_rays;
      j["diffuse_rays"] = c.diffuse_rays;
      j["trials"] = c.trials;
      j["beam_fraction"] = c.beam_fraction;
      j["beam_center"] = {{"azimuth", c.beam_azimuth}, {"zenith", c.beam_zenith}};
      j["whitener_rays"] = c.whitener_rays;
      break;
    case 3:
      j["secondary_zeniths"] = c.secondary_zeniths;
      j["realizations"] = c.realizations;
      j["whitener_rays"] = c.whitener_rays;
      break;
    default:
      break;
  }
  if (command == "irmix") {
    j["etas"] = c.etas;
    j["beam"] = beam_path;
    j["diffuse"] = diffuse_path;
  }
  j["directivity"] = directivity_files;
  j["out"] = out_dir;
  return j.dump(2);
}

void execute(const RunConfig& cfg, std::ostream& log) {
  if (cfg.command == "help") {
    log << cfg.help_text;
    return;
  }
  if (cfg.command == "case1" || cfg.command == "case2" || cfg.command == "case3") {
    const CaseResult r = run_case(cfg.case_cfg);
    write_reports(r, cfg.out_dir, cfg.echo_json());
    log << cfg.command << " " << r.array << ": " << r.points.size() << " points -> " << cfg.out_dir << "\n";
    return;
  }
  if (cfg.command == "irmix") {
    const MultichannelIr beam = load_wav(cfg.beam_path);
    const MultichannelIr diffuse = load_wav(cfg.diffuse_path);
    IrMixConfig mix{cfg.case_cfg.bands, cfg.case_cfg.etas, cfg.case_cfg.medium, cfg.case_cfg.processor};
    const CaseResult r = run_irmix(beam, diffuse, configured_array(cfg.case_cfg), mix);
    write_reports(r, cfg.out_dir, cfg.echo_json());
    log << "irmix " << r.array << ": " << r.points.size() << " points -> " << cfg.out_dir << "\n";
    return;
  }
  if (cfg.command == "fit") {
    std::ifstream f(cfg.samples_path);
    if (!f) throw IoError("cannot open pattern samples: " + cfg.samples_path);
    const auto patterns = read_pattern_samples(f);
    std::ostringstream table;
    write_coefficient_table(table, fit_bands(patterns, cfg.fit_order));
    for (const auto& p : patterns) {
      log << "band " << p.band_hz << " Hz: residual rms " << fit(p.samples, cfg.fit_order).residual_rms << "\n";
    }
    if (cfg.out_file) write_text_file(*cfg.out_file, table.str());
    else log << table.str();
    return;
  }
  if (cfg.command == "layout") {
    const std::string text = array_to_json(configured_array(cfg.case_cfg)) + "\n";
    if (cfg.out_file) write_text_file(*cfg.out_file, text);
    else log << text;
    return;
  }
  throw UsageError("unknown command '" + cfg.command + "'");
}

}  // namespace tfdiff
