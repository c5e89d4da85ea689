// SPDX-License-Identifier: Apache-2.0
//
// Pressure, velocity, intensity and energy estimates, velocity covariance
// and the diffuseness indices built on them.
#pragma once

#include "tfdiff/spatial.hpp"
#include "tfdiff/wavefield.hpp"

#include <Eigen/Core>

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tfdiff {

using cd = std::complex<double>;

struct FoaQuantities {
  cd p;
  Eigen::Vector3cd u;
  Eigen::Vector3d I;  // W/m^2, energy-flow direction
  double E = 0.0;     // J/m^3
};

struct BFormat {
  cd W, X, Y, Z;
};

// Capsules in FLU, FRD, BLD, BRU order.
BFormat a_to_b(const std::array<cd, 4>& d);

// p = W, u = -(sqrt 3 / Z0) [X, Y, Z].
FoaQuantities foa_from_b(const BFormat& b, const Medium& medium);

// I = Re{p u*} / 2,  E = |p|^2 / (4 rho c^2) + rho |u|^2 / 4.
FoaQuantities foa_from_pu(cd p, const Eigen::Vector3cd& u, const Medium& medium);
double energy_density(cd p, const Eigen::Vector3cd& u, const Medium& medium);

// Opposite-facing directional pair along one axis.
struct PairQuantities {
  cd p;            // M+ + M-
  cd u;            // (M+ - M-) / Z0
  double I = 0.0;  // (|M+|^2 - |M-|^2) / (2 Z0)
  double E = 0.0;  // |p|^2 / (4 rho c^2) + rho |u|^2 / 4
};
PairQuantities cc_pair(cd plus, cd minus, const Medium& medium);

// Frame reconstruction (1/A) R^T v. When R is not a tight frame the
// least-squares solution (R^T R)^-1 R^T v is used and *non_tight is set.
Eigen::Vector3d tf_collapse(const Eigen::VectorXd& values, const DirectionMatrix& R, bool* non_tight = nullptr);
Eigen::Vector3cd tf_collapse(const Eigen::VectorXcd& values, const DirectionMatrix& R,
                             bool* non_tight = nullptr);

// Counts how many index evaluations fell outside [0, 1] before clamping.
struct ClampTally {
  std::size_t count = 0;
};
double clamp_unit(double raw, ClampTally* tally);

// 1 - |I| / (c E), clamped. E == 0 throws UndefinedFieldError.
double psi_ie(const Eigen::Vector3d& I, double E, const Medium& medium, ClampTally* tally = nullptr);

// Per-axis quantities of a tight-frame pair array, either for one snapshot or
// summed over a band.
struct DirectionalQuantities {
  std::vector<double> I;   // I_ri
  std::vector<double> E;   // E_ri
  std::vector<double> u2;  // |u_ri|^2

  explicit DirectionalQuantities(std::size_t axes = 0) : I(axes, 0.0), E(axes, 0.0), u2(axes, 0.0) {}
  std::size_t size() const { return I.size(); }
  DirectionalQuantities& operator+=(const DirectionalQuantities& o);
};

enum class AveWeighting { Velocity, Energy, Intensity };

// Psi_ri = clamp(1 - |I_ri| / (c E_ri)).
std::vector<double> psi_directional(const DirectionalQuantities& dq, const Medium& medium,
                                    ClampTally* tally = nullptr);
// Weighted mean of already-clamped values; zero total weight throws.
double psi_ave(std::span<const double> psi, std::span<const double> weights);
double psi_ave(const DirectionalQuantities& dq, const Medium& medium,
               AveWeighting weighting = AveWeighting::Velocity, ClampTally* tally = nullptr);

// Running mean of v v^H. Partial accumulators merge associatively.
class CovarianceAccumulator {
 public:
  explicit CovarianceAccumulator(Eigen::Index dim = 3);

  void add(const Eigen::VectorXcd& v);
  void merge(const CovarianceAccumulator& other);
  std::size_t count() const { return count_; }
  Eigen::Index dim() const { return sum_.rows(); }
  const Eigen::MatrixXcd& sum() const { return sum_; }
  // (1/M) sum v v^H, symmetrized. count() == 0 throws UndefinedFieldError.
  Eigen::MatrixXcd mean() const;

 private:
  Eigen::MatrixXcd sum_;
  std::size_t count_ = 0;
};

struct Eigen3 {
  Eigen::Vector3d values;   // descending
  Eigen::Matrix3cd vectors; // columns match values
};

// Cyclic complex Jacobi on a 3x3 Hermitian matrix. Throws DomainError when
// the input is not Hermitian within 1e-10 relative.
Eigen3 eig3_full(const Eigen::Matrix3cd& C);
Eigen::Vector3d eig3(const Eigen::Matrix3cd& C);

// Descending eigenvalues of any Hermitian matrix.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& C);

struct ParticipationRatio {
  double raw = 0.0;         // (sum l)^2 / (K sum l^2), in [1/K, 1]
  double normalized = 0.0;  // (K raw - 1) / (K - 1), in [0, 1]
};
ParticipationRatio psi_pr(std::span<const double> lambda);

enum class ComNormalization {
  Calibrated,  // 1 - (sigma / mean) / sqrt(K - 1)
  Printed,     // 1 - sqrt(3/2) sigma / mean
};
double psi_com(std::span<const double> lambda, ComNormalization norm = ComNormalization::Calibrated);

// Diagonal scaling applied to [p, ux, uy, uz] before the eigen-analysis.
struct PuWhitener {
  Eigen::Vector4d scale = Eigen::Vector4d::Ones();
};

struct EigenIndices {
  Eigen::VectorXd eigenvalues;
  ParticipationRatio pr;
  double com = 0.0;
};

EigenIndices eigen_indices(const Eigen::MatrixXcd& C, ComNormalization norm = ComNormalization::Calibrated);
// W C W^H with W = diag(whitener); nullptr throws ConfigError.
EigenIndices cov_pu_whitened(const Eigen::MatrixXcd& Cpu, const PuWhitener* whitener,
                             ComNormalization norm = ComNormalization::Calibrated);

// Incidence direction -I/|I|. Zero intensity throws UndefinedFieldError.
Direction doa_from_intensity(const Eigen::Vector3d& I);

}  // namespace tfdiff
