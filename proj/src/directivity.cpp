// SPDX-License-Identifier: Apache-2.0
#include "tfdiff/directivity.hpp"

#include "tfdiff/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace tfdiff {

double evaluate(std::span<const double> coeffs, double cos_theta) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * cos_theta + *it;
  return acc;
}

DirectivityPolynomial::DirectivityPolynomial(std::vector<double> coeffs)
    : DirectivityPolynomial(std::vector<Band>{{1000.0, std::move(coeffs)}}) {}

DirectivityPolynomial::DirectivityPolynomial(std::vector<Band> bands) : bands_(std::move(bands)) {
  if (bands_.empty()) throw DomainError("directivity model without bands");
  for (const auto& b : bands_) {
    if (b.coeffs.empty() || b.coeffs.size() > kMaxDirectivityOrder + 1) {
      throw DomainError("directivity order must be 0..8");
    }
    if (!(b.band_hz > 0.0)) throw DomainError("directivity band frequency must be positive");
  }
  std::sort(bands_.begin(), bands_.end(),
            [](const Band& a, const Band& b) { return a.band_hz < b.band_hz; });
}

const std::vector<double>& DirectivityPolynomial::coefficients_at(double frequency_hz) const {
  if (bands_.size() == 1 || !(frequency_hz > 0.0)) return bands_.front().coeffs;
  const double lf = std::log(frequency_hz);
  const Band* best = &bands_.front();
  double best_d = std::abs(std::log(best->band_hz) - lf);
  for (const auto& b : bands_) {
    const double d = std::abs(std::log(b.band_hz) - lf);
    if (d < best_d) {
      best_d = d;
      best = &b;
    }
  }
  return best->coeffs;
}

FitResult fit(std::span<const PatternSample> samples, int order) {
  if (order < 0 || order > kMaxDirectivityOrder) throw FitError("fit order must be 0..8");
  std::vector<double> distinct;
  for (const auto& s : samples) {
    if (!(s.angle_deg >= 0.0 && s.angle_deg <= 180.0)) {
      throw FitError("pattern sample angle outside [0, 180]");
    }
    distinct.push_back(std::cos(s.angle_deg * std::numbers::pi / 180.0));
  }
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 distinct.end());
  if (distinct.size() < static_cast<std::size_t>(order) + 1) {
    throw FitError("fit needs at least order+1 distinct angles");
  }

  const auto rows = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd V(rows, order + 1);
  Eigen::VectorXd m(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double c = std::cos(samples[static_cast<std::size_t>(i)].angle_deg * std::numbers::pi / 180.0);
    double p = 1.0;
    for (int n = 0; n <= order; ++n) {
      V(i, n) = p;
      p *= c;
    }
    m(i) = samples[static_cast<std::size_t>(i)].magnitude;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
  if (qr.rank() < order + 1) throw FitError("rank-deficient pattern sample set");
  const Eigen::VectorXd a = qr.solve(m);

  FitResult out;
  out.coeffs.assign(a.data(), a.data() + a.size());
  out.residual_rms = std::sqrt((V * a - m).squaredNorm() / static_cast<double>(rows));
  return out;
}

std::vector<PatternSample> sample_pattern(std::span<const double> coeffs, double step_deg) {
  std::vector<PatternSample> out;
  const int count = static_cast<int>(std::floor(180.0 / step_deg + 1e-9));
  for (int i = 0; i <= count; ++i) {
    const double ang = i * step_deg;
    out.push_back({ang, evaluate(coeffs, std::cos(ang * std::numbers::pi / 180.0))});
  }
  return out;
}

double PairPatterns::sum(double theta_rad) const { return evaluate(sum_coeffs, std::cos(theta_rad)); }
double PairPatterns::diff(double theta_rad) const { return evaluate(diff_coeffs, std::cos(theta_rad)); }

PairPatterns pair_patterns(std::span<const double> coeffs) {
  PairPatterns pp;
  pp.sum_coeffs.assign(coeffs.size(), 0.0);
  pp.diff_coeffs.assign(coeffs.size(), 0.0);
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    (n % 2 == 0 ? pp.sum_coeffs : pp.diff_coeffs)[n] = 2.0 * coeffs[n];
  }
  return pp;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

double to_double(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError("line " + std::to_string(line_no) + ": not a number: '" + s + "'");
  }
}

bool skip_line(const std::string& line) {
  const auto b = line.find_first_not_of(" \t\r");
  return b == std::string::npos || line[b] == '#';
}

}  // namespace

DirectivityPolynomial read_coefficient_table(std::istream& is) {
  std::string line;
  std::vector<DirectivityPolynomial::Band> bands;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    auto cells = split_csv(line);
    if (!header_seen) {
      header_seen = true;
      if (cells.front() == "band_hz") continue;
    }
    if (cells.size() < 2 || cells.size() > kMaxDirectivityOrder + 2) {
      throw FormatError("line " + std::to_string(line_no) + ": expected band_hz,a0..a8");
    }
    DirectivityPolynomial::Band band{to_double(cells[0], line_no), {}};
    for (std::size_t i = 1; i < cells.size(); ++i) {
      band.coeffs.push_back(cells[i].empty() ? 0.0 : to_double(cells[i], line_no));
    }
    while (band.coeffs.size() > 1 && band.coeffs.back() == 0.0) band.coeffs.pop_back();
    bands.push_back(std::move(band));
  }
  if (bands.empty()) throw FormatError("coefficient table has no rows");
  return DirectivityPolynomial(std::move(bands));
}

DirectivityPolynomial load_coefficient_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open directivity file: " + path);
  return read_coefficient_table(f);
}

void write_coefficient_table(std::ostream& os, const DirectivityPolynomial& model) {
  os << "band_hz";
  for (int n = 0; n <= kMaxDirectivityOrder; ++n) os << ",a" << n;
  os << '\n';
  char buf[64];
  for (const auto& b : model.bands()) {
    std::snprintf(buf, sizeof buf, "%.9g", b.band_hz);
    os << buf;
    for (int n = 0; n <= kMaxDirectivityOrder; ++n) {
      const double a = n < static_cast<int>(b.coeffs.size()) ? b.coeffs[static_cast<std::size_t>(n)] : 0.0;
      std::snprintf(buf, sizeof buf, ",%.17g", a);
      os << buf;
    }
    os << '\n';
  }
}

std::vector<BandPattern> read_pattern_samples(std::istream& is) {
  std::map<double, std::vector<PatternSample>> by_band;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    auto cells = split_csv(line);
    if (!header_seen) {
      header_seen = true;
      if (cells.front() == "band_hz") continue;
    }
    if (cells.size() != 3) {
      throw FormatError("line " + std::to_string(line_no) + ": expected band_hz,angle_deg,magnitude");
    }
    const PatternSample s{to_double(cells[1], line_no), to_double(cells[2], line_no)};
    if (s.magnitude < 0.0) throw FormatError("line " + std::to_string(line_no) + ": negative magnitude");
    by_band[to_double(cells[0], line_no)].push_back(s);
  }
  std::vector<BandPattern> out;
  for (auto& [band, samples] : by_band) out.push_back({band, std::move(samples)});
  return out;
}

DirectivityPolynomial fit_bands(std::span<const BandPattern> patterns, int order) {
  std::vector<DirectivityPolynomial::Band> bands;
  for (const auto& p : patterns) bands.push_back({p.band_hz, fit(p.samples, order).coeffs});
  return DirectivityPolynomial(std::move(bands));
}

namespace {

// Coefficients of ((1 + s c)/2)^q in powers of c, s = +1 or -1.
std::vector<double> half_binomial(int q, double s) {
  std::vector<double> c(static_cast<std::size_t>(q) + 1, 0.0);
  double binom = 1.0;
  for (int n = 0; n <= q; ++n) {
    c[static_cast<std::size_t>(n)] = binom * std::pow(s, n) / std::pow(2.0, q);
    binom = binom * (q - n) / (n + 1);
  }
  return c;
}

}  // namespace

DirectivityPolynomial tf24_synthetic_directivity() {
  struct Shape {
    double band;
    int q;
    int q_rear;
    double beta;
  };
  static constexpr Shape kShapes[] = {
      {63, 1, 1, 0.10},   {125, 1, 1, 0.10},  {250, 1, 1, 0.10},
      {500, 2, 2, 0.10},  {1000, 2, 2, 0.10}, {2000, 3, 3, 0.15},
      {4000, 3, 3, 0.15}, {8000, 4, 2, 0.20}, {16000, 4, 1, 0.25},
  };
  std::vector<DirectivityPolynomial::Band> bands;
  for (const auto& s : kShapes) {
    auto front = half_binomial(s.q, 1.0);
    const auto rear = half_binomial(s.q_rear, -1.0);
    front.resize(std::max(front.size(), rear.size()), 0.0);
    for (std::size_t n = 0; n < rear.size(); ++n) front[n] -= s.beta * rear[n];
    // Re-fit the sampled lobe at 5 degrees, as a measured pattern would be.
    auto fitted = fit(sample_pattern(front, 5.0), kMaxDirectivityOrder).coeffs;
    for (auto& a : fitted) {
      if (std::abs(a) < 1e-13) a = 0.0;
    }
    while (fitted.size() > 1 && fitted.back() == 0.0) fitted.pop_back();
    bands.push_back({s.band, std::move(fitted)});
  }
  return DirectivityPolynomial(std::move(bands));
}

}  // namespace tfdiff
