// SPDX-License-Identifier: Apache-2.0
#include "tfdiff/processor.hpp"

#include "tfdiff/error.hpp"

#include <cmath>

namespace tfdiff {

ArrayProcessor::ArrayProcessor(ArraySpec array, Medium medium, ProcessorOptions options)
    : array_(std::move(array)), medium_(medium), options_(options) {
  medium_.validate();
  switch (array_.kind) {
    case ArrayKind::Afmt:
      if (array_.size() != 4) throw ConfigError("A-format array needs exactly 4 capsules");
      break;
    case ArrayKind::Fibo64:
      hoa_ = std::make_shared<const HoaEstimator>(array_, options_.hoa_order, options_.hoa_lambda);
      break;
    case ArrayKind::Tf24: {
      if (array_.pairs.empty()) throw ConfigError("pair array without pair layout");
      std::vector<Direction> axes;
      for (const auto& p : array_.pairs) axes.push_back(p.axis);
      pair_axes_ = to_matrix(axes);
      break;
    }
  }
}

SnapshotAnalysis ArrayProcessor::analyze(const PressureSnapshot& snap) const {
  if (static_cast<std::size_t>(snap.p.size()) != array_.size()) {
    throw DomainError("snapshot has " + std::to_string(snap.p.size()) + " channels, array '" + array_.name +
                      "' has " + std::to_string(array_.size()));
  }
  SnapshotAnalysis out;
  switch (array_.kind) {
    case ArrayKind::Afmt: {
      const BFormat b = a_to_b({snap.p(0), snap.p(1), snap.p(2), snap.p(3)});
      out.foa = foa_from_b(b, medium_);
      break;
    }
    case ArrayKind::Fibo64: {
      const HoaCoefficients a = hoa_->estimate(snap, medium_);
      const PressureVelocity pv = foa_from_hoa(a, medium_);
      out.foa = foa_from_pu(pv.p, pv.u, medium_);
      out.hoa = a.a;
      break;
    }
    case ArrayKind::Tf24: {
      const std::size_t n = array_.pairs.size();
      DirectionalQuantities dq(n);
      Eigen::VectorXcd u_r(static_cast<Eigen::Index>(n));
      Eigen::VectorXd I_r(static_cast<Eigen::Index>(n));
      cd p_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& pair = array_.pairs[i];
        const PairQuantities q = cc_pair(snap.p(static_cast<Eigen::Index>(pair.plus)),
                                         snap.p(static_cast<Eigen::Index>(pair.minus)), medium_);
        dq.I[i] = q.I;
        dq.E[i] = q.E;
        dq.u2[i] = std::norm(q.u);
        u_r(static_cast<Eigen::Index>(i)) = q.u;
        I_r(static_cast<Eigen::Index>(i)) = q.I;
        p_sum += q.p;
      }
      // Pair quantities point toward the louder (source-facing) capsule;
      // negate so the array-level vectors follow the energy flow.
      const Eigen::Vector3cd u = -tf_collapse(u_r, pair_axes_);
      const Eigen::Vector3d I = -tf_collapse(I_r, pair_axes_);
      const cd p = p_sum / static_cast<double>(n);
      out.foa.p = p;
      out.foa.u = u;
      out.foa.I = I;
      out.foa.E = energy_density(p, u, medium_);
      out.directional = std::move(dq);
      break;
    }
  }
  return out;
}

PuWhitener ArrayProcessor::diffuse_whitener(double frequency, const std::vector<PlaneWave>& rays) const {
  Eigen::Vector4d diag = Eigen::Vector4d::Zero();
  for (const auto& r : rays) {
    const Scene s{{PlaneWave{r.propagation, 1.0, 0.0}}, frequency};
    const SnapshotAnalysis a = analyze(synthesize(array_, s, medium_));
    const double w = r.amplitude * r.amplitude;
    diag(0) += w * std::norm(a.foa.p);
    for (int i = 0; i < 3; ++i) diag(i + 1) += w * std::norm(a.foa.u(i));
  }
  PuWhitener out;
  for (int i = 0; i < 4; ++i) {
    if (!(diag(i) > 0.0)) throw UndefinedFieldError("diffuse reference has a silent component");
    out.scale(i) = 1.0 / std::sqrt(diag(i));
  }
  return out;
}

BandAccumulator::BandAccumulator(const ArrayProcessor& proc) : proc_(&proc) {
  if (proc.array().kind == ArrayKind::Fibo64) cov_hoa_.emplace(sh_count(proc.options().hoa_order));
  if (proc.array().kind == ArrayKind::Tf24) directional_.emplace(proc.array().pairs.size());
}

void BandAccumulator::add(const SnapshotAnalysis& a) {
  I_ += a.foa.I;
  E_ += a.foa.E;
  cov_u_.add(a.foa.u);
  Eigen::Vector4cd pu;
  pu << a.foa.p, a.foa.u;
  cov_pu_.add(pu);
  if (cov_hoa_ && a.hoa) cov_hoa_->add(*a.hoa);
  if (directional_ && a.directional) *directional_ += *a.directional;
}

void BandAccumulator::merge(const BandAccumulator& other) {
  I_ += other.I_;
  E_ += other.E_;
  cov_u_.merge(other.cov_u_);
  cov_pu_.merge(other.cov_pu_);
  if (cov_hoa_ && other.cov_hoa_) cov_hoa_->merge(*other.cov_hoa_);
  if (directional_ && other.directional_) *directional_ += *other.directional_;
}

DiffusenessReport BandAccumulator::report(double band_hz, const PuWhitener* whitener) const {
  const Medium& medium = proc_->medium();
  const auto& opt = proc_->options();
  DiffusenessReport r;
  ClampTally tally;
  r.band_hz = band_hz;
  r.intensity = I_;
  r.energy = E_;
  r.psi_ie = psi_ie(I_, E_, medium, &tally);
  if (directional_) r.psi_ave = psi_ave(*directional_, medium, opt.ave_weighting, &tally);

  const Eigen3 eu = eig3_full(Eigen::Matrix3cd(cov_u_.mean()));
  r.eigenvalues = eu.values;
  const std::span<const double> l(eu.values.data(), 3);
  r.psi_pr = psi_pr(l);
  r.psi_com = psi_com(l, opt.com_normalization);

  if (whitener) {
    const EigenIndices pu = cov_pu_whitened(cov_pu_.mean(), whitener, opt.com_normalization);
    r.psi_pr_pu = pu.pr;
    r.psi_com_pu = pu.com;
  }
  if (cov_hoa_ && cov_hoa_->count() > 0) {
    r.psi_com_hoa = eigen_indices(cov_hoa_->mean(), opt.com_normalization).com;
  }
  if (I_.norm() > 0.0) r.doa = doa_from_intensity(I_);
  r.clamp_count = tally.count;
  return r;
}

}  // namespace tfdiff
