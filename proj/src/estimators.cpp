// SPDX-License-Identifier: Apache-2.0
#include "tfdiff/estimators.hpp"

#include "tfdiff/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tfdiff {

BFormat a_to_b(const std::array<cd, 4>& d) {
  return {0.5 * (d[0] + d[1] + d[2] + d[3]), 0.5 * (d[0] + d[1] - d[2] - d[3]),
          0.5 * (d[0] - d[1] + d[2] - d[3]), 0.5 * (d[0] - d[1] - d[2] + d[3])};
}

double energy_density(cd p, const Eigen::Vector3cd& u, const Medium& medium) {
  return std::norm(p) / (4.0 * medium.rho * medium.c * medium.c) + medium.rho / 4.0 * u.squaredNorm();
}

FoaQuantities foa_from_pu(cd p, const Eigen::Vector3cd& u, const Medium& medium) {
  FoaQuantities q;
  q.p = p;
  q.u = u;
  for (int i = 0; i < 3; ++i) q.I(i) = 0.5 * (p * std::conj(u(i))).real();
  q.E = energy_density(p, u, medium);
  return q;
}

FoaQuantities foa_from_b(const BFormat& b, const Medium& medium) {
  const double g = -std::sqrt(3.0) / medium.impedance();
  return foa_from_pu(b.W, Eigen::Vector3cd(g * b.X, g * b.Y, g * b.Z), medium);
}

PairQuantities cc_pair(cd plus, cd minus, const Medium& medium) {
  const double z0 = medium.impedance();
  PairQuantities q;
  q.p = plus + minus;
  q.u = (plus - minus) / z0;
  q.I = (std::norm(plus) - std::norm(minus)) / (2.0 * z0);
  q.E = std::norm(q.p) / (4.0 * medium.rho * medium.c * medium.c) + medium.rho / 4.0 * std::norm(q.u);
  return q;
}

namespace {

template <typename Vec>
Eigen::Matrix<typename Vec::Scalar, 3, 1> collapse(const Vec& values, const DirectionMatrix& R, bool* non_tight) {
  if (values.size() != R.rows()) throw DomainError("frame collapse: value count does not match frame size");
  const FrameConstant fc = frame_constant(R);
  if (non_tight) *non_tight = !fc.is_tight;
  using S = typename Vec::Scalar;
  if (fc.is_tight) return (R.transpose().template cast<S>() * values) / S(fc.A);
  const Eigen::Matrix3d G = R.transpose() * R;
  return G.template cast<S>().ldlt().solve(R.transpose().template cast<S>() * values);
}

}  // namespace

Eigen::Vector3d tf_collapse(const Eigen::VectorXd& values, const DirectionMatrix& R, bool* non_tight) {
  return collapse(values, R, non_tight);
}

Eigen::Vector3cd tf_collapse(const Eigen::VectorXcd& values, const DirectionMatrix& R, bool* non_tight) {
  return collapse(values, R, non_tight);
}

double clamp_unit(double raw, ClampTally* tally) {
  if (raw < 0.0 || raw > 1.0) {
    if (tally) ++tally->count;
    return std::clamp(raw, 0.0, 1.0);
  }
  return raw;
}

double psi_ie(const Eigen::Vector3d& I, double E, const Medium& medium, ClampTally* tally) {
  if (!(E > 0.0)) throw UndefinedFieldError("energy density is zero; diffuseness undefined");
  return clamp_unit(1.0 - I.norm() / (medium.c * E), tally);
}

DirectionalQuantities& DirectionalQuantities::operator+=(const DirectionalQuantities& o) {
  if (o.size() != size()) throw DomainError("directional quantities of different sizes");
  for (std::size_t i = 0; i < size(); ++i) {
    I[i] += o.I[i];
    E[i] += o.E[i];
    u2[i] += o.u2[i];
  }
  return *this;
}

std::vector<double> psi_directional(const DirectionalQuantities& dq, const Medium& medium, ClampTally* tally) {
  std::vector<double> out(dq.size());
  for (std::size_t i = 0; i < dq.size(); ++i) {
    if (!(dq.E[i] > 0.0)) throw UndefinedFieldError("axis " + std::to_string(i + 1) + " has zero energy");
    out[i] = clamp_unit(1.0 - std::abs(dq.I[i]) / (medium.c * dq.E[i]), tally);
  }
  return out;
}

double psi_ave(std::span<const double> psi, std::span<const double> weights) {
  if (psi.size() != weights.size()) throw DomainError("psi_ave: size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    num += psi[i] * weights[i];
    den += weights[i];
  }
  if (!(den > 0.0)) throw UndefinedFieldError("psi_ave: all weights are zero");
  return num / den;
}

double psi_ave(const DirectionalQuantities& dq, const Medium& medium, AveWeighting weighting, ClampTally* tally) {
  const auto psi = psi_directional(dq, medium, tally);
  std::vector<double> w(dq.size());
  for (std::size_t i = 0; i < dq.size(); ++i) {
    switch (weighting) {
      case AveWeighting::Velocity: w[i] = dq.u2[i]; break;
      case AveWeighting::Energy: w[i] = dq.E[i]; break;
      case AveWeighting::Intensity: w[i] = std::abs(dq.I[i]); break;
    }
  }
  return psi_ave(psi, w);
}

CovarianceAccumulator::CovarianceAccumulator(Eigen::Index dim) : sum_(Eigen::MatrixXcd::Zero(dim, dim)) {}

void CovarianceAccumulator::add(const Eigen::VectorXcd& v) {
  if (v.size() != sum_.rows()) throw DomainError("covariance sample has the wrong dimension");
  sum_.noalias() += v * v.adjoint();
  ++count_;
}

void CovarianceAccumulator::merge(const CovarianceAccumulator& other) {
  if (other.dim() != dim()) throw DomainError("cannot merge covariances of different dimension");
  sum_ += other.sum_;
  count_ += other.count_;
}

Eigen::MatrixXcd CovarianceAccumulator::mean() const {
  if (count_ == 0) throw UndefinedFieldError("covariance of zero samples");
  const Eigen::MatrixXcd m = sum_ / static_cast<double>(count_);
  return 0.5 * (m + m.adjoint());
}

Eigen3 eig3_full(const Eigen::Matrix3cd& C) {
  const double scale = C.cwiseAbs().maxCoeff();
  if ((C - C.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1e-300)) {
    throw DomainError("eig3: matrix is not Hermitian");
  }
  Eigen::Matrix3cd A = 0.5 * (C + C.adjoint());
  Eigen::Matrix3cd V = Eigen::Matrix3cd::Identity();
  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = std::norm(A(0, 1)) + std::norm(A(0, 2)) + std::norm(A(1, 2));
    if (off <= 1e-32 * std::max(A.squaredNorm(), 1e-300)) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double mag = std::abs(A(p, q));
        if (mag == 0.0) continue;
        // Phase rotation making A(p, q) real and positive, then a real
        // Jacobi rotation in the (p, q) plane.
        const cd phase = std::conj(A(p, q)) / mag;
        const double app = A(p, p).real();
        const double aqq = A(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        Eigen::Matrix3cd U = Eigen::Matrix3cd::Identity();
        U(p, p) = c;
        U(p, q) = s;
        U(q, p) = -s * phase;
        U(q, q) = c * phase;
        A = U.adjoint() * A * U;
        A(p, q) = A(q, p) = 0.0;
        V = V * U;
      }
    }
  }
  std::array<int, 3> order = {0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int a, int b) { return A(a, a).real() > A(b, b).real(); });
  Eigen3 out;
  for (int i = 0; i < 3; ++i) {
    out.values(i) = A(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]).real();
    out.vectors.col(i) = V.col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

Eigen::Vector3d eig3(const Eigen::Matrix3cd& C) { return eig3_full(C).values; }

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& C) {
  if (C.rows() == 3 && C.cols() == 3) return eig3(Eigen::Matrix3cd(C));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (C + C.adjoint()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw DomainError("eigen-decomposition did not converge");
  return es.eigenvalues().reverse();
}

namespace {

std::vector<double> checked_spectrum(std::span<const double> lambda) {
  if (lambda.size() < 2) throw DomainError("eigen index needs at least two eigenvalues");
  const double peak = *std::max_element(lambda.begin(), lambda.end());
  if (!(peak > 0.0)) throw UndefinedFieldError("all eigenvalues are zero");
  std::vector<double> out;
  for (double l : lambda) {
    if (l < -1e-9 * peak) throw DomainError("negative eigenvalue in covariance spectrum");
    out.push_back(std::max(l, 0.0));
  }
  return out;
}

}  // namespace

ParticipationRatio psi_pr(std::span<const double> lambda) {
  const auto l = checked_spectrum(lambda);
  const double k = static_cast<double>(l.size());
  double s = 0.0, s2 = 0.0;
  for (double x : l) {
    s += x;
    s2 += x * x;
  }
  ParticipationRatio pr;
  pr.raw = s * s / (k * s2);
  pr.normalized = std::clamp((k * pr.raw - 1.0) / (k - 1.0), 0.0, 1.0);
  return pr;
}

double psi_com(std::span<const double> lambda, ComNormalization norm) {
  const auto l = checked_spectrum(lambda);
  const double k = static_cast<double>(l.size());
  const double mean = std::accumulate(l.begin(), l.end(), 0.0) / k;
  double var = 0.0;
  for (double x : l) var += (x - mean) * (x - mean);
  const double delta = std::sqrt(var / k) / mean;
  const double factor = norm == ComNormalization::Calibrated ? 1.0 / std::sqrt(k - 1.0) : std::sqrt(1.5);
  return std::clamp(1.0 - factor * delta, 0.0, 1.0);
}

EigenIndices eigen_indices(const Eigen::MatrixXcd& C, ComNormalization norm) {
  EigenIndices out;
  out.eigenvalues = hermitian_eigenvalues(C);
  const std::span<const double> l(out.eigenvalues.data(), static_cast<std::size_t>(out.eigenvalues.size()));
  out.pr = psi_pr(l);
  out.com = psi_com(l, norm);
  return out;
}

EigenIndices cov_pu_whitened(const Eigen::MatrixXcd& Cpu, const PuWhitener* whitener, ComNormalization norm) {
  if (!whitener) throw ConfigError("pressure-velocity covariance needs a whitener");
  if (Cpu.rows() != 4 || Cpu.cols() != 4) throw DomainError("pressure-velocity covariance must be 4x4");
  const Eigen::Matrix4cd W = whitener->scale.cast<cd>().asDiagonal();
  return eigen_indices(W * Cpu * W.adjoint(), norm);
}

Direction doa_from_intensity(const Eigen::Vector3d& I) {
  if (!(I.norm() > 0.0)) throw UndefinedFieldError("zero intensity has no direction");
  return Direction::from_vector(-I);
}

}  // namespace tfdiff
