// SPDX-License-Identifier: Apache-2.0
#include "tfdiff/wavefield.hpp"

#include "tfdiff/error.hpp"
#include "tfdiff/sh.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace tfdiff {

using cd = std::complex<double>;

PlaneWave wave_from_incidence(const Direction& from, double amplitude, double phase) {
  if (!(amplitude >= 0.0)) throw DomainError("plane-wave amplitude must be >= 0");
  return {-from, amplitude, phase};
}

double Medium::wavenumber(double frequency_hz) const { return 2.0 * std::numbers::pi * frequency_hz / c; }

void Medium::validate() const {
  if (!(rho > 0.0) || !(c > 0.0)) throw ConfigError("medium density and sound speed must be positive");
}

double BandSpec::center() const {
  return 1000.0 * std::exp2(std::round(std::log2(nominal_hz / 1000.0)));
}

const std::array<double, 9>& standard_bands() {
  static const std::array<double, 9> kBands = {63, 125, 250, 500, 1000, 2000, 4000, 8000, 16000};
  return kBands;
}

BandSpec octave_band(double nominal_hz, int tones) {
  const auto& bands = standard_bands();
  if (std::find(bands.begin(), bands.end(), nominal_hz) == bands.end()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", nominal_hz);
    throw UsageError(std::string("unknown octave band ") + buf + " Hz (expected 63..16000)");
  }
  if (tones < 1) throw UsageError("tone count must be >= 1");
  return {nominal_hz, tones};
}

namespace {

void check_scene(const Scene& scene) {
  if (!(scene.frequency > 0.0)) throw DomainError("scene frequency must be positive");
}

}  // namespace

PressureSnapshot synth_free(const ArraySpec& array, const Scene& scene, const Medium& medium) {
  if (array.baffle.type != Baffle::Type::None) {
    throw WrongModelError("free-field synthesis requested for baffled array '" + array.name + "'");
  }
  check_scene(scene);
  const double k = medium.wavenumber(scene.frequency);
  PressureSnapshot out{scene.frequency, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(array.size()))};
  for (std::size_t m = 0; m < array.size(); ++m) {
    const Sensor& s = array.sensors[m];
    const auto& coeffs = array.directivity_of(s).coefficients_at(scene.frequency);
    cd acc = 0.0;
    for (const auto& w : scene.waves) {
      const Eigen::Vector3d from = -w.propagation.vec();
      const double gain = evaluate(coeffs, s.orientation.vec().dot(from));
      acc += gain * w.amplitude * std::polar(1.0, k * s.position.dot(from) + w.phase);
    }
    out.p(static_cast<Eigen::Index>(m)) = s.sensitivity * acc;
  }
  return out;
}

PressureSnapshot synth_rigid(const ArraySpec& array, const Scene& scene, const Medium& medium, int order) {
  if (array.baffle.type != Baffle::Type::RigidSphere) {
    throw WrongModelError("rigid-sphere synthesis requested for array '" + array.name + "' without a sphere");
  }
  check_scene(scene);
  const double a = array.baffle.radius;
  for (std::size_t m = 0; m < array.size(); ++m) {
    if (std::abs(array.sensors[m].position.norm() - a) > 1e-9 * std::max(1.0, a)) {
      throw DomainError("sensor " + std::to_string(m) + " is not on the sphere surface");
    }
  }
  PressureSnapshot out{scene.frequency, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(array.size()))};
  if (scene.waves.empty()) return out;

  const double ka = medium.wavenumber(scene.frequency) * a;
  const int n_max = order >= 0 ? order : rigid_truncation_order(ka);
  const Eigen::VectorXcd b = radial_filters(ka, n_max);
  // Addition theorem: sum_m Y_nm(a) Y_nm(b) = P_n(a.b)/4pi.
  std::vector<cd> kernel(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    kernel[static_cast<std::size_t>(n)] = b(n) * (2.0 * n + 1.0) / (4.0 * std::numbers::pi);
  }

  std::vector<cd> weights;
  weights.reserve(scene.waves.size());
  for (const auto& w : scene.waves) weights.push_back(std::polar(w.amplitude, w.phase));

  for (std::size_t m = 0; m < array.size(); ++m) {
    const Eigen::Vector3d omega = array.sensors[m].position / a;
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < scene.waves.size(); ++i) {
      const double x = -omega.dot(scene.waves[i].propagation.vec());
      double p_prev = 1.0, p = x;
      double kr = kernel[0].real(), ki = kernel[0].imag();
      if (n_max >= 1) {
        kr += kernel[1].real() * x;
        ki += kernel[1].imag() * x;
      }
      for (int n = 1; n < n_max; ++n) {
        const double p_next = ((2.0 * n + 1.0) * x * p - n * p_prev) / (n + 1.0);
        p_prev = p;
        p = p_next;
        kr += kernel[static_cast<std::size_t>(n) + 1].real() * p;
        ki += kernel[static_cast<std::size_t>(n) + 1].imag() * p;
      }
      const cd term = cd(kr, ki) * weights[i];
      re += term.real();
      im += term.imag();
    }
    out.p(static_cast<Eigen::Index>(m)) = array.sensors[m].sensitivity * cd(re, im);
  }
  return out;
}

PressureSnapshot synthesize(const ArraySpec& array, const Scene& scene, const Medium& medium) {
  return array.baffle.type == Baffle::Type::RigidSphere ? synth_rigid(array, scene, medium)
                                                        : synth_free(array, scene, medium);
}

std::vector<double> tone_frequencies(const BandSpec& band, Rng& rng) {
  std::vector<double> f(static_cast<std::size_t>(band.tones));
  for (auto& x : f) x = rng.log_uniform(band.lower(), band.upper());
  return f;
}

void redraw_amplitudes(std::vector<PlaneWave>& waves, Rng& rng, const NoiseLaw& law) {
  for (auto& w : waves) {
    w.amplitude = rng.log_uniform_gain(law.amplitude_range_db);
    w.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
}

std::vector<Scene> band_noise_scenes(const BandSpec& band, const std::vector<PlaneWave>& waves, Rng& rng,
                                     const NoiseLaw& law) {
  const auto freqs = tone_frequencies(band, rng);
  std::vector<Scene> out;
  out.reserve(freqs.size());
  for (double f : freqs) {
    Scene s{waves, f};
    redraw_amplitudes(s.waves, rng, law);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<PlaneWave> diffuse_rays(std::size_t n, Rng& rng, const NoiseLaw& law) {
  std::vector<PlaneWave> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = rng.uniform(-1.0, 1.0);
    const double az = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Direction from = Direction::from_vector({r * std::cos(az), r * std::sin(az), z});
    const double amp = rng.log_uniform_gain(law.amplitude_range_db);
    out.push_back(wave_from_incidence(from, amp, rng.uniform(0.0, 2.0 * std::numbers::pi)));
  }
  return out;
}

double cap_half_angle_deg(double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw DomainError("beam solid-angle fraction must be in (0, 1]");
  return std::acos(1.0 - 2.0 * fraction) * 180.0 / std::numbers::pi;
}

std::vector<PlaneWave> beam_rays(std::size_t n, const Direction& center, double fraction, Rng& rng,
                                 const NoiseLaw& law) {
  const double cos_alpha = std::cos(cap_half_angle_deg(fraction) * std::numbers::pi / 180.0);
  const Eigen::Matrix3d rot = rotation_from_z(center);
  std::vector<PlaneWave> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = rng.uniform(cos_alpha, 1.0);
    const double az = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Direction from = Direction::from_vector(rot * Eigen::Vector3d(r * std::cos(az), r * std::sin(az), z));
    const double amp = rng.log_uniform_gain(law.amplitude_range_db);
    out.push_back(wave_from_incidence(from, amp, rng.uniform(0.0, 2.0 * std::numbers::pi)));
  }
  return out;
}

double total_energy(const std::vector<PlaneWave>& waves) {
  double e = 0.0;
  for (const auto& w : waves) e += w.amplitude * w.amplitude;
  return e;
}

void normalize_energy(std::vector<PlaneWave>& waves, double energy) {
  const double e = total_energy(waves);
  if (!(e > 0.0)) {
    if (energy > 0.0) throw DomainError("cannot normalize a silent ray set");
    return;
  }
  const double g = std::sqrt(energy / e);
  for (auto& w : waves) w.amplitude *= g;
}

using json = nlohmann::json;

std::string scene_to_json(const Scene& scene) {
  json j;
  j["frequency"] = scene.frequency;
  j["waves"] = json::array();
  for (const auto& w : scene.waves) {
    const auto& v = w.propagation.vec();
    j["waves"].push_back({{"propagation", {v.x(), v.y(), v.z()}}, {"amplitude", w.amplitude}, {"phase", w.phase}});
  }
  return j.dump(2);
}

Scene scene_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    Scene s;
    s.frequency = j.at("frequency").get<double>();
    for (const auto& w : j.at("waves")) {
      const auto v = w.at("propagation").get<std::vector<double>>();
      if (v.size() != 3) throw FormatError("wave propagation must be a 3-vector");
      PlaneWave pw{Direction::from_vector({v[0], v[1], v[2]}), w.at("amplitude").get<double>(),
                   w.value("phase", 0.0)};
      if (!(pw.amplitude >= 0.0)) throw FormatError("negative wave amplitude");
      s.waves.push_back(pw);
    }
    check_scene(s);
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("scene: ") + e.what());
  }
}

void write_snapshot_csv(std::ostream& os, const PressureSnapshot& snap) {
  os << "sensor,re,im\n";
  char buf[96];
  for (Eigen::Index i = 0; i < snap.p.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g\n", static_cast<long>(i), snap.p(i).real(), snap.p(i).imag());
    os << buf;
  }
}

}  // namespace tfdiff
