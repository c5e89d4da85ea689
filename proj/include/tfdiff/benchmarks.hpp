// SPDX-License-Identifier: Apache-2.0
//
// The three simulation benchmarks:
//   case 1  single plane wave from every grid direction (ideal Psi = 0)
//   case 2  narrow beam mixed with a diffuse field at energy ratio eta
//   case 3  two interfering plane waves, the second swept in zenith
#pragma once

#include "tfdiff/arrays.hpp"
#include "tfdiff/processor.hpp"
#include "tfdiff/wavefield.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tfdiff {

enum class Profile { Ci, Paper };
const char* profile_name(Profile p);

struct CaseConfig {
  int case_id = 1;
  ArrayKind array = ArrayKind::Tf24;
  std::vector<double> bands;  // nominal octave labels
  Profile profile = Profile::Ci;
  std::uint64_t seed = 1;
  Medium medium;
  int tones = 100;
  int jobs = 1;
  ProcessorOptions processor;
  std::map<std::string, DirectivityPolynomial> directivity_overrides;
  NoiseLaw noise;

  // Case 1 grid (degrees).
  std::vector<double> azimuths;
  std::vector<double> zeniths;

  // Case 2.
  std::vector<double> etas;
  std::size_t beam_rays = 0;
  std::size_t diffuse_rays = 0;
  int trials = 1;
  double beam_fraction = 0.005;
  double beam_azimuth = 3.0;
  double beam_zenith = 87.0;

  // Case 3.
  std::vector<double> secondary_zeniths;
  int realizations = 0;

  // Rays used to build the pressure-velocity whitener (cases 2 and 3).
  std::size_t whitener_rays = 0;

  // Profile-dependent defaults for everything above.
  static CaseConfig defaults(int case_id, ArrayKind array, Profile profile = Profile::Ci);
  void validate() const;  // throws ConfigError
};

struct PointResult {
  double band_hz = 0.0;
  std::size_t point = 0;
  std::optional<double> azimuth, zenith, eta;
  DiffusenessReport report;
  std::optional<double> doa_error_deg;
};

struct SummaryRow {
  int case_id = 0;
  std::string array;
  double band_hz = 0.0;
  std::string index;
  double mean = 0.0;
  double max = 0.0;
  std::optional<double> max_abs_err;
  std::optional<double> pearson_r;
  std::size_t count = 0;
};

struct CaseResult {
  int case_id = 0;    // 1..3, or 0 for the impulse-response mix
  std::string name;   // "case1", "case2", "case3", "irmix"
  std::string array;
  std::vector<PointResult> points;
  std::vector<SummaryRow> summary;

  // Summary lookup; nullptr when absent.
  const SummaryRow* find(double band_hz, const std::string& index) const;
};

// Named index values of one result point in reporting order.
std::vector<std::pair<std::string, double>> index_values(int case_id, const PointResult& p);

ArraySpec configured_array(const CaseConfig& cfg);

CaseResult run_case1(const CaseConfig& cfg);
CaseResult run_case2(const CaseConfig& cfg);
CaseResult run_case3(const CaseConfig& cfg);
CaseResult run_case(const CaseConfig& cfg);

// Fills CaseResult::summary from its points.
void summarize(CaseResult& result);

double pearson(const std::vector<double>& a, const std::vector<double>& b);

// Runs fn(0..n-1) on up to `jobs` threads. Exceptions propagate (first by index).
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace tfdiff
