// SPDX-License-Identifier: Apache-2.0
//
// Frequency-domain plane-wave scenes and the sensor pressures they produce.
//
// Time dependence is e^{+i w t}. A PlaneWave stores its propagation direction
// nu; it arrives from the incidence direction s = -nu, and a sensor at r sees
//   p = S * D(d . s) * A * exp(i k r . s + i phi).
#pragma once

#include "tfdiff/arrays.hpp"
#include "tfdiff/random.hpp"
#include "tfdiff/spatial.hpp"

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace tfdiff {

struct PlaneWave {
  Direction propagation;
  double amplitude = 1.0;  // Pa, >= 0
  double phase = 0.0;      // rad

  Direction incidence() const { return -propagation; }
};

PlaneWave wave_from_incidence(const Direction& from, double amplitude = 1.0, double phase = 0.0);

struct Scene {
  std::vector<PlaneWave> waves;
  double frequency = 1000.0;  // Hz
};

struct Medium {
  double rho = 1.21;  // kg/m^3
  double c = 343.0;   // m/s

  double impedance() const { return rho * c; }
  double wavenumber(double frequency_hz) const;
  void validate() const;  // throws ConfigError unless rho, c > 0
};

// Octave band. `nominal_hz` is the familiar label (63, 125, ...); the edges
// use the exact base-2 centre so consecutive bands tile the axis.
struct BandSpec {
  double nominal_hz = 1000.0;
  int tones = 100;

  double center() const;
  double lower() const { return center() / std::sqrt(2.0); }
  double upper() const { return center() * std::sqrt(2.0); }
};

// Throws UsageError unless f is one of the nine standard octave labels.
BandSpec octave_band(double nominal_hz, int tones = 100);
const std::array<double, 9>& standard_bands();

struct PressureSnapshot {
  double frequency = 0.0;
  Eigen::VectorXcd p;
};

PressureSnapshot synth_free(const ArraySpec& array, const Scene& scene, const Medium& medium);

// order < 0 picks the truncation automatically from ka.
PressureSnapshot synth_rigid(const ArraySpec& array, const Scene& scene, const Medium& medium,
                             int order = -1);

// Dispatches on the baffle type.
PressureSnapshot synthesize(const ArraySpec& array, const Scene& scene, const Medium& medium);

// Per-tone random draws for band-limited noise.
struct NoiseLaw {
  double amplitude_range_db = 3.0;
};

// One scene per tone: log-uniform tone frequencies inside the band, and
// every template wave redrawn with random phase and log-uniform amplitude.
std::vector<Scene> band_noise_scenes(const BandSpec& band, const std::vector<PlaneWave>& waves,
                                     Rng& rng, const NoiseLaw& law = {});
std::vector<double> tone_frequencies(const BandSpec& band, Rng& rng);

// Area-uniform incidence directions with random amplitude and phase.
std::vector<PlaneWave> diffuse_rays(std::size_t n, Rng& rng, const NoiseLaw& law = {});

// Incidence directions uniform inside the cap of solid angle fraction*4pi
// around `center`. Throws DomainError unless 0 < fraction <= 1.
std::vector<PlaneWave> beam_rays(std::size_t n, const Direction& center, double fraction, Rng& rng,
                                 const NoiseLaw& law = {});
double cap_half_angle_deg(double fraction);

// Redraws amplitude and phase of every wave, keeping directions.
void redraw_amplitudes(std::vector<PlaneWave>& waves, Rng& rng, const NoiseLaw& law = {});
double total_energy(const std::vector<PlaneWave>& waves);  // sum A^2
// Rescales amplitudes so that sum A^2 equals `energy`.
void normalize_energy(std::vector<PlaneWave>& waves, double energy);

std::string scene_to_json(const Scene& scene);
Scene scene_from_json(const std::string& text);
void write_snapshot_csv(std::ostream& os, const PressureSnapshot& snap);

}  // namespace tfdiff
