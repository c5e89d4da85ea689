// Property checks shared by the unit suite and the acceptance binary. Each
// returns the worst observed deviation so callers can apply their tolerance
// and print it.
#pragma once

#include "oracles.hpp"
#include "tfdiff/arrays.hpp"
#include "tfdiff/estimators.hpp"
#include "tfdiff/processor.hpp"
#include "tfdiff/random.hpp"
#include "tfdiff/wavefield.hpp"

#include <cstring>
#include <numbers>

namespace checks {

using namespace tfdiff;

// Band-noise analysis of a fixed wave set, with an optional complex gain on
// every sensor signal.
inline DiffusenessReport analyze_band(const ArrayProcessor& proc, const std::vector<PlaneWave>& waves,
                                      double band_hz, std::uint64_t seed, std::complex<double> gain = 1.0) {
  Rng rng = Rng::derive(seed, {static_cast<std::uint64_t>(band_hz)});
  BandAccumulator acc(proc);
  for (const auto& s : band_noise_scenes(octave_band(band_hz, 20), waves, rng)) {
    auto snap = synthesize(proc.array(), s, proc.medium());
    snap.p *= gain;
    acc.add(proc.analyze(snap));
  }
  return acc.report(band_hz);
}

inline double index_gap(const DiffusenessReport& a, const DiffusenessReport& b) {
  double gap = std::abs(a.psi_ie - b.psi_ie);
  gap = std::max(gap, std::abs(a.psi_pr.normalized - b.psi_pr.normalized));
  gap = std::max(gap, std::abs(a.psi_pr.raw - b.psi_pr.raw));
  gap = std::max(gap, std::abs(a.psi_com - b.psi_com));
  if (a.psi_ave && b.psi_ave) gap = std::max(gap, std::abs(*a.psi_ave - *b.psi_ave));
  return gap;
}

inline std::vector<PlaneWave> test_waves(std::uint64_t seed, std::size_t n) {
  Rng rng = Rng::derive(seed, {99});
  return diffuse_rays(n, rng);
}

struct ScaleResult {
  double index_gap = 0.0;
  double doa_gap_deg = 0.0;
};

// Multiply every sensor signal by a complex constant; nothing may change.
inline ScaleResult scale_invariance() {
  ScaleResult out;
  const std::complex<double> alpha = std::polar(37.5, 0.7);
  for (auto kind : {ArrayKind::Afmt, ArrayKind::Fibo64, ArrayKind::Tf24}) {
    const ArrayProcessor proc(make_array(kind), Medium{});
    for (double band : {250.0, 2000.0, 8000.0}) {
      const auto waves = test_waves(static_cast<std::uint64_t>(kind) + 1, 3);
      const auto a = analyze_band(proc, waves, band, 5);
      const auto b = analyze_band(proc, waves, band, 5, alpha);
      out.index_gap = std::max(out.index_gap, index_gap(a, b));
      // Chord length rather than acos, which cannot resolve angles below ~1e-6 degrees.
      if (a.doa && b.doa) {
        const double chord = (a.doa->vec() - b.doa->vec()).norm();
        out.doa_gap_deg = std::max(out.doa_gap_deg, 2.0 * std::asin(chord / 2.0) * 180.0 / std::numbers::pi);
      }
    }
  }
  return out;
}

struct RotationResult {
  double index_gap = 0.0;
  double intensity_rel_gap = 0.0;
};

inline Eigen::Matrix3d rot_z(double deg) {
  return Eigen::AngleAxisd(deg * std::numbers::pi / 180.0, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}
inline Eigen::Matrix3d rot_x(double deg) {
  return Eigen::AngleAxisd(deg * std::numbers::pi / 180.0, Eigen::Vector3d::UnitX()).toRotationMatrix();
}

inline std::vector<PlaneWave> rotated(const std::vector<PlaneWave>& waves, const Eigen::Matrix3d& Q) {
  auto out = waves;
  for (auto& w : out) w.propagation = Direction::from_vector(Q * w.propagation.vec());
  return out;
}

inline ArraySpec rotated(ArraySpec a, const Eigen::Matrix3d& Q) {
  for (auto& s : a.sensors) {
    s.position = Q * s.position;
    s.orientation = Direction::from_vector(Q * s.orientation.vec());
  }
  for (auto& p : a.pairs) p.axis = Direction::from_vector(Q * p.axis.vec());
  return a;
}

inline void compare_rotated(RotationResult& out, const DiffusenessReport& a, const DiffusenessReport& b,
                            const Eigen::Matrix3d& Q) {
  out.index_gap = std::max(out.index_gap, index_gap(a, b));
  out.intensity_rel_gap =
      std::max(out.intensity_rel_gap, (b.intensity - Q * a.intensity).norm() / a.intensity.norm());
}

// TF24 and Afmt: rotate the scene by a symmetry of the array and keep the
// array. Fibo64: rotate array and scene together.
inline RotationResult rotation_equivariance() {
  RotationResult out;
  const auto waves = test_waves(17, 4);
  const ArrayProcessor tf(make_tf24(), Medium{});
  for (const auto& Q : {rot_z(90), rot_z(45), rot_z(-135), rot_x(180)}) {
    for (double band : {500.0, 4000.0}) {
      compare_rotated(out, analyze_band(tf, waves, band, 3), analyze_band(tf, rotated(waves, Q), band, 3), Q);
    }
  }
  const ArrayProcessor af(make_afmt(), Medium{});
  const Eigen::Matrix3d ry = Eigen::AngleAxisd(std::numbers::pi, Eigen::Vector3d::UnitY()).toRotationMatrix();
  for (const auto& Q : {rot_z(180), rot_x(180), ry}) {
    compare_rotated(out, analyze_band(af, waves, 1000, 3), analyze_band(af, rotated(waves, Q), 1000, 3), Q);
  }
  const ArrayProcessor fb(make_fibo64(), Medium{});
  const Eigen::Matrix3d Q = rot_z(33) * rot_x(71);
  const ArrayProcessor fb_rot(rotated(make_fibo64(), Q), Medium{});
  compare_rotated(out, analyze_band(fb, waves, 1000, 3), analyze_band(fb_rot, rotated(waves, Q), 1000, 3), Q);
  return out;
}

// Worst eigenvalue deviation from the characteristic-polynomial oracle,
// relative to max(1, ||C||).
inline double eig3_vs_oracle(int count) {
  Rng rng = Rng::derive(2024, {3});
  double worst = 0.0;
  for (int t = 0; t < count; ++t) {
    const int rank = 1 + t % 4;  // 1..3 plus some over-complete draws
    Eigen::MatrixXcd A(3, rank);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < rank; ++j) A(i, j) = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Eigen::Matrix3cd C = A * A.adjoint();
    const auto got = eig3(C);
    const auto ref = oracle::char_poly_roots(C);
    const double scale = std::max(1.0, C.norm());
    for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(got(k) - ref[static_cast<std::size_t>(k)]) / scale);
  }
  return worst;
}

struct AccumulatorResult {
  bool bit_identical = false;
  double merge_rel_gap = 0.0;
};

inline AccumulatorResult accumulator_associativity() {
  Rng rng = Rng::derive(77, {1});
  std::vector<Eigen::VectorXcd> samples;
  for (int i = 0; i < 1200; ++i) {
    Eigen::VectorXcd v(3);
    for (int k = 0; k < 3; ++k) v(k) = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    samples.push_back(v);
  }
  CovarianceAccumulator a(3), b(3);
  for (const auto& s : samples) a.add(s);
  for (const auto& s : samples) b.add(s);
  AccumulatorResult out;
  out.bit_identical = std::memcmp(a.sum().data(), b.sum().data(), sizeof(std::complex<double>) * 9) == 0 &&
                      a.count() == b.count();

  std::vector<CovarianceAccumulator> parts(12, CovarianceAccumulator(3));
  for (std::size_t i = 0; i < samples.size(); ++i) parts[i % parts.size()].add(samples[i]);
  CovarianceAccumulator forward(3), backward(3), tree(3);
  for (const auto& p : parts) forward.merge(p);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) backward.merge(*it);
  std::vector<CovarianceAccumulator> level = parts;
  while (level.size() > 1) {
    std::vector<CovarianceAccumulator> next;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      next.push_back(level[i]);
      next.back().merge(level[i + 1]);
    }
    if (level.size() % 2) next.push_back(level.back());
    level = std::move(next);
  }
  tree.merge(level.front());
  const double ref = a.mean().norm();
  for (const auto* m : {&forward, &backward, &tree}) {
    out.merge_rel_gap = std::max(out.merge_rel_gap, (m->mean() - a.mean()).norm() / ref);
    if (m->count() != a.count()) out.merge_rel_gap = 1.0;
  }
  return out;
}

}  // namespace checks
