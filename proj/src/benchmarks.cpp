// SPDX-License-Identifier: Apache-2.0
#include "tfdiff/benchmarks.hpp"

#include "tfdiff/error.hpp"
#include "tfdiff/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace tfdiff {

const char* profile_name(Profile p) { return p == Profile::Ci ? "ci" : "paper"; }

namespace {

std::vector<double> range_inclusive(double lo, double hi, double step) {
  std::vector<double> out;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int i = 0; i <= n; ++i) out.push_back(lo + i * step);
  return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return out;
}

// RNG stream tags: case id, nominal band, then task-specific indices.
std::uint64_t band_tag(double band_hz) { return static_cast<std::uint64_t>(std::llround(band_hz)); }

constexpr std::uint64_t kWhitenerStream = 9;

}  // namespace

CaseConfig CaseConfig::defaults(int case_id, ArrayKind array, Profile profile) {
  CaseConfig c;
  c.case_id = case_id;
  c.array = array;
  c.profile = profile;
  c.bands.assign(standard_bands().begin(), standard_bands().end());
  const bool ci = profile == Profile::Ci;
  if (ci) {
    c.azimuths = range_inclusive(0.0, 330.0, 30.0);
    c.zeniths = linspace(5.0, 175.0, 7);
  } else {
    c.azimuths = range_inclusive(0.0, 355.0, 5.0);
    c.zeniths = range_inclusive(5.0, 175.0, 5.0);
  }
  c.etas = linspace(0.0, 1.0, 21);
  c.beam_rays = ci ? 10000 : 100000;
  c.diffuse_rays = ci ? 10000 : 100000;
  c.trials = ci ? 5 : 10;
  c.secondary_zeniths = range_inclusive(0.0, 180.0, ci ? 15.0 : 5.0);
  c.realizations = ci ? 200 : 1000;
  c.whitener_rays = ci ? 10000 : 100000;
  return c;
}

void CaseConfig::validate() const {
  if (case_id < 1 || case_id > 3) throw ConfigError("case must be 1, 2 or 3");
  if (bands.empty()) throw ConfigError("no bands selected");
  for (double b : bands) (void)octave_band(b);
  medium.validate();
  if (tones < 1) throw ConfigError("tones must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (case_id == 1 && (azimuths.empty() || zeniths.empty())) throw ConfigError("empty direction grid");
  for (double z : zeniths) {
    if (!(z >= 0.0 && z <= 180.0)) throw ConfigError("zenith outside [0, 180]");
  }
  if (case_id == 2) {
    if (etas.empty()) throw ConfigError("empty eta grid");
    for (double e : etas) {
      if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("eta outside [0, 1]");
    }
    if (beam_rays < 1 || diffuse_rays < 1) throw ConfigError("ray counts must be >= 1");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (!(beam_fraction > 0.0 && beam_fraction <= 1.0)) throw ConfigError("beam fraction must be in (0, 1]");
  }
  if (case_id == 3) {
    if (secondary_zeniths.empty()) throw ConfigError("empty secondary-angle sweep");
    if (realizations < 1) throw ConfigError("realizations must be >= 1");
  }
  if (case_id != 1 && whitener_rays < 1) throw ConfigError("whitener rays must be >= 1");
}

const SummaryRow* CaseResult::find(double band_hz, const std::string& index) const {
  for (const auto& s : summary) {
    if (s.band_hz == band_hz && s.index == index) return &s;
  }
  return nullptr;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

ArraySpec configured_array(const CaseConfig& cfg) {
  ArraySpec a = make_array(cfg.array);
  for (const auto& [id, model] : cfg.directivity_overrides) a = with_directivity(std::move(a), id, model);
  return a;
}

namespace {

PuWhitener band_whitener(const ArrayProcessor& proc, const CaseConfig& cfg, const BandSpec& band) {
  Rng rng = Rng::derive(cfg.seed, {kWhitenerStream, band_tag(band.nominal_hz)});
  return proc.diffuse_whitener(band.center(), diffuse_rays(cfg.whitener_rays, rng, cfg.noise));
}

}  // namespace

CaseResult run_case1(const CaseConfig& cfg) {
  cfg.validate();
  const ArrayProcessor proc(configured_array(cfg), cfg.medium, cfg.processor);
  CaseResult res;
  res.case_id = 1;
  res.name = "case1";
  res.array = array_kind_name(cfg.array);

  struct GridPoint {
    double az, zen;
  };
  std::vector<GridPoint> grid;
  for (double zen : cfg.zeniths) {
    for (double az : cfg.azimuths) grid.push_back({az, zen});
  }

  for (double nominal : cfg.bands) {
    const BandSpec band = octave_band(nominal, cfg.tones);
    std::vector<PointResult> rows(grid.size());
    parallel_for(grid.size(), cfg.jobs, [&](std::size_t g) {
      const Direction from = Direction::from_angles(grid[g].az, grid[g].zen);
      Rng rng = Rng::derive(cfg.seed, {1, band_tag(nominal), g});
      BandAccumulator acc(proc);
      for (const auto& scene : band_noise_scenes(band, {wave_from_incidence(from)}, rng, cfg.noise)) {
        acc.add(proc.analyze(synthesize(proc.array(), scene, proc.medium())));
      }
      PointResult& r = rows[g];
      r.band_hz = nominal;
      r.point = g;
      r.azimuth = grid[g].az;
      r.zenith = grid[g].zen;
      r.report = acc.report(nominal);
      if (r.report.doa) r.doa_error_deg = angle_between(*r.report.doa, from);
    });
    res.points.insert(res.points.end(), rows.begin(), rows.end());
  }
  summarize(res);
  return res;
}

CaseResult run_case2(const CaseConfig& cfg) {
  cfg.validate();
  const ArrayProcessor proc(configured_array(cfg), cfg.medium, cfg.processor);
  CaseResult res;
  res.case_id = 2;
  res.name = "case2";
  res.array = array_kind_name(cfg.array);
  const Direction center = Direction::from_angles(cfg.beam_azimuth, cfg.beam_zenith);

  for (double nominal : cfg.bands) {
    const BandSpec band = octave_band(nominal, cfg.tones);
    const PuWhitener whitener = band_whitener(proc, cfg, band);

    // Ray directions and tone frequencies are fixed per trial; amplitudes
    // and phases are redrawn for every tone.
    struct Trial {
      std::vector<PlaneWave> beam, diffuse;
      std::vector<double> freqs;
    };
    std::vector<Trial> trials(static_cast<std::size_t>(cfg.trials));
    for (std::size_t t = 0; t < trials.size(); ++t) {
      Rng rng = Rng::derive(cfg.seed, {2, band_tag(nominal), t});
      trials[t].beam = beam_rays(cfg.beam_rays, center, cfg.beam_fraction, rng, cfg.noise);
      trials[t].diffuse = diffuse_rays(cfg.diffuse_rays, rng, cfg.noise);
      trials[t].freqs = tone_frequencies(band, rng);
    }

    const std::size_t tones = static_cast<std::size_t>(cfg.tones);
    const std::size_t tasks = trials.size() * tones;
    std::vector<std::vector<SnapshotAnalysis>> partial(tasks);
    parallel_for(tasks, cfg.jobs, [&](std::size_t task) {
      const std::size_t t = task / tones;
      const std::size_t k = task % tones;
      Rng rng = Rng::derive(cfg.seed, {2, band_tag(nominal), t, k + 1});
      Scene beam{trials[t].beam, trials[t].freqs[k]};
      Scene diffuse{trials[t].diffuse, trials[t].freqs[k]};
      redraw_amplitudes(beam.waves, rng, cfg.noise);
      redraw_amplitudes(diffuse.waves, rng, cfg.noise);
      normalize_energy(beam.waves, 1.0);
      normalize_energy(diffuse.waves, 1.0);
      const PressureSnapshot pb = synthesize(proc.array(), beam, proc.medium());
      const PressureSnapshot pd = synthesize(proc.array(), diffuse, proc.medium());
      auto& out = partial[task];
      out.reserve(cfg.etas.size());
      for (double eta : cfg.etas) {
        const PressureSnapshot mix{pb.frequency, std::sqrt(eta) * pb.p + std::sqrt(1.0 - eta) * pd.p};
        out.push_back(proc.analyze(mix));
      }
    });

    for (std::size_t e = 0; e < cfg.etas.size(); ++e) {
      BandAccumulator acc(proc);
      for (const auto& p : partial) acc.add(p[e]);
      PointResult r;
      r.band_hz = nominal;
      r.point = e;
      r.eta = cfg.etas[e];
      r.report = acc.report(nominal, &whitener);
      res.points.push_back(std::move(r));
    }
  }
  summarize(res);
  return res;
}

CaseResult run_case3(const CaseConfig& cfg) {
  cfg.validate();
  const ArrayProcessor proc(configured_array(cfg), cfg.medium, cfg.processor);
  CaseResult res;
  res.case_id = 3;
  res.name = "case3";
  res.array = array_kind_name(cfg.array);
  const Direction zenith = Direction::from_angles(0.0, 0.0);

  for (double nominal : cfg.bands) {
    const BandSpec band = octave_band(nominal, cfg.tones);
    const PuWhitener whitener = band_whitener(proc, cfg, band);
    std::vector<PointResult> rows(cfg.secondary_zeniths.size());
    parallel_for(rows.size(), cfg.jobs, [&](std::size_t a) {
      const double theta = cfg.secondary_zeniths[a];
      const Direction from = Direction::from_angles(0.0, theta);
      BandAccumulator acc(proc);
      for (int r = 0; r < cfg.realizations; ++r) {
        Rng rng = Rng::derive(cfg.seed, {3, band_tag(nominal), a, static_cast<std::uint64_t>(r)});
        const double f = rng.log_uniform(band.lower(), band.upper());
        const double amp = rng.log_uniform_gain(cfg.noise.amplitude_range_db);
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const Scene s{{wave_from_incidence(zenith), wave_from_incidence(from, amp, phase)}, f};
        acc.add(proc.analyze(synthesize(proc.array(), s, proc.medium())));
      }
      PointResult& row = rows[a];
      row.band_hz = nominal;
      row.point = a;
      row.azimuth = 0.0;
      row.zenith = theta;
      row.report = acc.report(nominal, &whitener);
    });
    res.points.insert(res.points.end(), rows.begin(), rows.end());
  }
  summarize(res);
  return res;
}

CaseResult run_case(const CaseConfig& cfg) {
  switch (cfg.case_id) {
    case 1: return run_case1(cfg);
    case 2: return run_case2(cfg);
    case 3: return run_case3(cfg);
    default: throw ConfigError("case must be 1, 2 or 3");
  }
}

std::vector<std::pair<std::string, double>> index_values(int case_id, const PointResult& p) {
  const auto& r = p.report;
  std::vector<std::pair<std::string, double>> out;
  out.emplace_back("psi_ie", r.psi_ie);
  if (r.psi_ave) out.emplace_back("psi_ave", *r.psi_ave);
  out.emplace_back("psi_pr", r.psi_pr.normalized);
  out.emplace_back("psi_pr_raw", r.psi_pr.raw);
  out.emplace_back("psi_com", r.psi_com);
  if (r.psi_pr_pu) out.emplace_back("psi_pr_pu", r.psi_pr_pu->normalized);
  if (r.psi_com_pu) out.emplace_back("psi_com_pu", *r.psi_com_pu);
  if (r.psi_com_hoa) out.emplace_back("psi_com_hoa", *r.psi_com_hoa);
  if (case_id == 1 && p.doa_error_deg) out.emplace_back("doa_err_deg", *p.doa_error_deg);
  return out;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw DomainError("pearson needs two equal series of length >= 2");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

void summarize(CaseResult& result) {
  result.summary.clear();
  std::vector<double> bands;
  for (const auto& p : result.points) {
    if (std::find(bands.begin(), bands.end(), p.band_hz) == bands.end()) bands.push_back(p.band_hz);
  }
  for (double band : bands) {
    std::vector<std::string> names;
    std::map<std::string, std::vector<double>> values, targets;
    bool has_eta = false;
    for (const auto& p : result.points) {
      if (p.band_hz != band) continue;
      for (const auto& [name, v] : index_values(result.case_id, p)) {
        if (!values.count(name)) names.push_back(name);
        values[name].push_back(v);
        targets[name].push_back(p.eta ? 1.0 - *p.eta : 0.0);
        has_eta = has_eta || p.eta.has_value();
      }
    }
    for (const auto& name : names) {
      const auto& v = values[name];
      const auto& t = targets[name];
      SummaryRow s;
      s.case_id = result.case_id;
      s.array = result.array;
      s.band_hz = band;
      s.index = name;
      s.count = v.size();
      double sum = 0.0, mx = -INFINITY, err = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        sum += v[i];
        mx = std::max(mx, v[i]);
        err = std::max(err, std::abs(v[i] - t[i]));
      }
      s.mean = sum / static_cast<double>(v.size());
      s.max = mx;
      if (has_eta) {
        s.max_abs_err = err;
        if (v.size() >= 2) s.pearson_r = pearson(v, t);
      }
      if (result.case_id == 1 && name != "doa_err_deg") s.max_abs_err = err;
      result.summary.push_back(std::move(s));
    }
  }
}

}  // namespace tfdiff
