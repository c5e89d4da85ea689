// SPDX-License-Identifier: Apache-2.0
//
// Per-array analysis chain (snapshot -> p, u, I, E) and the band-level
// aggregation that turns many snapshots into one DiffusenessReport.
#pragma once

#include "tfdiff/arrays.hpp"
#include "tfdiff/estimators.hpp"
#include "tfdiff/sh.hpp"
#include "tfdiff/wavefield.hpp"

#include <memory>
#include <optional>

namespace tfdiff {

struct ProcessorOptions {
  int hoa_order = 4;
  double hoa_lambda = 1e-4;
  AveWeighting ave_weighting = AveWeighting::Velocity;
  ComNormalization com_normalization = ComNormalization::Calibrated;
};

struct SnapshotAnalysis {
  FoaQuantities foa;
  std::optional<DirectionalQuantities> directional;  // tight-frame pair arrays
  std::optional<Eigen::VectorXcd> hoa;               // rigid-sphere arrays
};

class ArrayProcessor {
 public:
  ArrayProcessor(ArraySpec array, Medium medium, ProcessorOptions options = {});

  const ArraySpec& array() const { return array_; }
  const Medium& medium() const { return medium_; }
  const ProcessorOptions& options() const { return options_; }

  SnapshotAnalysis analyze(const PressureSnapshot& snap) const;

  // Diagonal whitener for [p, u] from the expected covariance of a diffuse
  // ray set at `frequency`: sum_i A_i^2 x_i x_i^H, x_i the response to ray i.
  PuWhitener diffuse_whitener(double frequency, const std::vector<PlaneWave>& rays) const;

 private:
  ArraySpec array_;
  Medium medium_;
  ProcessorOptions options_;
  DirectionMatrix pair_axes_;
  std::shared_ptr<const HoaEstimator> hoa_;
};

struct DiffusenessReport {
  double band_hz = 0.0;
  double psi_ie = 0.0;
  std::optional<double> psi_ave;
  ParticipationRatio psi_pr;
  double psi_com = 0.0;
  std::optional<ParticipationRatio> psi_pr_pu;
  std::optional<double> psi_com_pu;
  std::optional<double> psi_com_hoa;
  Eigen::Vector3d eigenvalues = Eigen::Vector3d::Zero();
  Eigen::Vector3d intensity = Eigen::Vector3d::Zero();
  double energy = 0.0;
  std::optional<Direction> doa;
  std::size_t clamp_count = 0;
};

// Sums I and E over snapshots and averages the covariances.
class BandAccumulator {
 public:
  explicit BandAccumulator(const ArrayProcessor& proc);

  void add(const SnapshotAnalysis& a);
  void merge(const BandAccumulator& other);
  std::size_t count() const { return cov_u_.count(); }

  // `whitener` enables the pressure-velocity indices.
  DiffusenessReport report(double band_hz, const PuWhitener* whitener = nullptr) const;

 private:
  const ArrayProcessor* proc_;
  Eigen::Vector3d I_ = Eigen::Vector3d::Zero();
  double E_ = 0.0;
  CovarianceAccumulator cov_u_{3};
  CovarianceAccumulator cov_pu_{4};
  std::optional<CovarianceAccumulator> cov_hoa_;
  std::optional<DirectionalQuantities> directional_;
};

}  // namespace tfdiff
