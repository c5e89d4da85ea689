// SPDX-License-Identifier: Apache-2.0
//
// Microphone directivity as a power series in cos(theta):
//   D(theta) = sum_n a_n cos^n(theta),  n <= 8
// with one coefficient set per octave band.
#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace tfdiff {

inline constexpr int kMaxDirectivityOrder = 8;

// Horner evaluation of a single coefficient set.
double evaluate(std::span<const double> coeffs, double cos_theta);

class DirectivityPolynomial {
 public:
  struct Band {
    double band_hz;
    std::vector<double> coeffs;  // a_0 .. a_N
    bool operator==(const Band&) const = default;
  };

  DirectivityPolynomial() = default;
  // Single frequency-independent coefficient set.
  explicit DirectivityPolynomial(std::vector<double> coeffs);
  // Bands are sorted by frequency; throws DomainError if empty or order > 8.
  explicit DirectivityPolynomial(std::vector<Band> bands);

  static DirectivityPolynomial omni() { return DirectivityPolynomial(std::vector<double>{1.0}); }
  static DirectivityPolynomial cardioid() { return DirectivityPolynomial(std::vector<double>{0.5, 0.5}); }

  const std::vector<Band>& bands() const { return bands_; }

  // Nearest band in log frequency.
  const std::vector<double>& coefficients_at(double frequency_hz) const;
  double gain(double cos_theta, double frequency_hz) const {
    return evaluate(coefficients_at(frequency_hz), cos_theta);
  }

  bool operator==(const DirectivityPolynomial&) const = default;

 private:
  std::vector<Band> bands_;
};

struct PatternSample {
  double angle_deg;
  double magnitude;  // linear
};

struct FitResult {
  std::vector<double> coeffs;
  double residual_rms = 0.0;
};

// Least-squares fit of sum a_n cos^n on linear magnitudes. Throws FitError if
// the samples cannot determine order+1 coefficients.
FitResult fit(std::span<const PatternSample> samples, int order);

// Samples a coefficient set at a fixed angular step over [0, 180].
std::vector<PatternSample> sample_pattern(std::span<const double> coeffs, double step_deg);

// Opposite-facing pair: sum(theta) = D(theta) + D(pi - theta) keeps even
// powers, diff(theta) = D(theta) - D(pi - theta) keeps odd powers.
struct PairPatterns {
  std::vector<double> sum_coeffs;
  std::vector<double> diff_coeffs;
  double sum(double theta_rad) const;
  double diff(double theta_rad) const;
};

PairPatterns pair_patterns(std::span<const double> coeffs);

// Text table "band_hz,a0,...,a8" with a header line.
DirectivityPolynomial read_coefficient_table(std::istream& is);
DirectivityPolynomial load_coefficient_file(const std::string& path);
void write_coefficient_table(std::ostream& os, const DirectivityPolynomial& model);

// "band_hz,angle_deg,magnitude" rows; returns one sample list per band.
struct BandPattern {
  double band_hz;
  std::vector<PatternSample> samples;
};
std::vector<BandPattern> read_pattern_samples(std::istream& is);

// Fits every band of a pattern file and assembles a banded model.
DirectivityPolynomial fit_bands(std::span<const BandPattern> patterns, int order);

// Synthetic narrow-directional pattern used as the default TF24 capsule:
//   D(c) = ((1+c)/2)^q - beta ((1-c)/2)^q_rear, expanded to a power series,
// with the per-band (q, q_rear, beta) table documented in the README.
DirectivityPolynomial tf24_synthetic_directivity();

}  // namespace tfdiff
