#include "cdpp/dpp.hpp"

#include <Eigen/Eigenvalues>

namespace cdpp::dpp {

PsdReport validate_psd(const Eigen::MatrixXd& l, const genpoly::PsdOptions& opts) {
  PsdReport report;
  if (l.rows() != l.cols() || l.rows() < 1) {
    report.message = "kernel must be square and nonempty";
    return report;
  }
  double scale = std::max(l.cwiseAbs().maxCoeff(), 1.0);
  report.symmetry_defect = (l - l.transpose()).cwiseAbs().maxCoeff();
  if (report.symmetry_defect > opts.tau_chol * scale) {
    report.message = "kernel is not symmetric";
    return report;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es((l + l.transpose()) / 2.0,
                                                    Eigen::EigenvaluesOnly);
  report.min_eigenvalue = es.eigenvalues().minCoeff();
  if (report.min_eigenvalue < -opts.tau_psd * scale) {
    report.message = "kernel has a negative eigenvalue";
    return report;
  }
  report.ok = true;
  return report;
}

void require_psd(const Eigen::MatrixXd& l, const genpoly::PsdOptions& opts) {
  PsdReport report = validate_psd(l, opts);
  if (report.ok) return;
  if (report.message == "kernel has a negative eigenvalue")
    fail(ErrorCode::NotPSD, report.message);
  fail(ErrorCode::NotSymmetric, report.message);
}

void ConstrainedDPP::finish_init(FamilySpec family) {
  family_ = std::move(family);
  linear_ = counting::to_linear(family_, m_);
}

ConstrainedDPP ConstrainedDPP::from_kernel(Kernel kernel, FamilySpec family,
                                           const genpoly::PsdOptions& opts) {
  require_psd(kernel.entries, opts);
  ConstrainedDPP d;
  d.m_ = kernel.size();
  FeatureMatrix v = genpoly::cholesky_factor(kernel, opts);
  d.oracle_f_ = genpoly::dpp_oracle(v);
  d.oracle_q_ = genpoly::dpp_oracle_exact(QMatrix::from_double(kernel.entries));
  d.finish_init(std::move(family));
  return d;
}

ConstrainedDPP ConstrainedDPP::from_factor(FeatureMatrix factor, FamilySpec family) {
  ConstrainedDPP d;
  d.m_ = factor.ground_size();
  d.oracle_f_ = genpoly::dpp_oracle(factor);
  d.oracle_q_ = genpoly::dpp_oracle_exact_factor(QMatrix::from_double(factor.entries));
  d.finish_init(std::move(family));
  return d;
}

ConstrainedDPP ConstrainedDPP::from_kernel_exact(const QMatrix& kernel,
                                                 FamilySpec family,
                                                 const genpoly::PsdOptions& opts) {
  Eigen::MatrixXd dense = kernel.to_double();
  require_psd(dense, opts);
  ConstrainedDPP d;
  d.m_ = kernel.rows();
  d.oracle_f_ = genpoly::dpp_oracle(
      genpoly::cholesky_factor(genpoly::Kernel{dense}, opts));
  d.oracle_q_ = genpoly::dpp_oracle_exact(kernel);
  d.finish_init(std::move(family));
  return d;
}

ConstrainedDPP ConstrainedDPP::from_factor_exact(const QMatrix& factor,
                                                 FamilySpec family) {
  ConstrainedDPP d;
  d.m_ = factor.rows();
  d.oracle_f_ = genpoly::dpp_oracle(genpoly::FeatureMatrix{factor.to_double()});
  d.oracle_q_ = genpoly::dpp_oracle_exact_factor(factor);
  d.finish_init(std::move(family));
  return d;
}

namespace {

template <class S, class Oracle>
Mass<real_of_t<S>> dispatch_count(const Oracle& oracle, const FamilySpec& family) {
  if (std::holds_alternative<std::monostate>(family))
    return counting::total_mass(oracle);
  if (const auto* b = std::get_if<counting::BudgetConstraint>(&family))
    return counting::bcount(oracle, std::span<const long long>(b->c), b->C);
  if (const auto* p = std::get_if<counting::PartitionFamily>(&family))
    return counting::partition_count(oracle, *p);
  return counting::linear_family_count(oracle, std::get<LinearFamily>(family));
}

}  // namespace

Mass<double> ConstrainedDPP::count() const {
  return dispatch_count<Complex>(oracle_f_, family_);
}

Mass<Rational> ConstrainedDPP::count_exact() const {
  return dispatch_count<Rational>(oracle_q_, family_);
}

std::shared_ptr<sampling::Sampler<Complex>> ConstrainedDPP::sampler() const {
  std::lock_guard<std::mutex> lk(*mu_);
  if (!sampler_f_)
    sampler_f_ = std::make_shared<sampling::Sampler<Complex>>(oracle_f_, linear_);
  return sampler_f_;
}

std::shared_ptr<sampling::Sampler<Rational>> ConstrainedDPP::sampler_exact() const {
  std::lock_guard<std::mutex> lk(*mu_);
  if (!sampler_q_)
    sampler_q_ =
        std::make_shared<sampling::Sampler<Rational>>(oracle_q_, linear_);
  return sampler_q_;
}

std::vector<SampleOutcome> ConstrainedDPP::sample(std::uint64_t seed,
                                                  int n_samples) const {
  auto sess = sampler();
  std::vector<SampleOutcome> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i)
    out.push_back(sess->draw(mix_seed(seed, static_cast<std::uint64_t>(i))));
  return out;
}

std::vector<SampleOutcome> ConstrainedDPP::sample_exact(std::uint64_t seed,
                                                        int n_samples) const {
  auto sess = sampler_exact();
  std::vector<SampleOutcome> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i)
    out.push_back(sess->draw(mix_seed(seed, static_cast<std::uint64_t>(i))));
  return out;
}

Mass<double> dpp_count(const ConstrainedDPP& d) { return d.count(); }
Mass<Rational> dpp_count_exact(const ConstrainedDPP& d) {
  return d.count_exact();
}

std::vector<SampleOutcome> dpp_sample(const ConstrainedDPP& d,
                                      std::uint64_t seed, int n_samples) {
  return d.sample(seed, n_samples);
}

}  // namespace cdpp::dpp
