#pragma once

#include <memory>
#include <mutex>
#include <optional>

#include "cdpp/sampling.hpp"

namespace cdpp::dpp {

using counting::BudgetConstraint;
using counting::FamilySpec;
using counting::LinearFamily;
using counting::Mass;
using counting::PartitionFamily;
using genpoly::FeatureMatrix;
using genpoly::Kernel;
using sampling::SampleOutcome;

struct PsdReport {
  bool ok = false;
  double min_eigenvalue = 0.0;
  double symmetry_defect = 0.0;
  std::string message;
};

/// Reports the minimum eigenvalue estimate and symmetry defect; ok iff both
/// are within tolerance of a symmetric PSD matrix.
PsdReport validate_psd(const Eigen::MatrixXd& l,
                       const genpoly::PsdOptions& opts = {});

/// Throwing variant: NotSymmetric / NotPSD.
void require_psd(const Eigen::MatrixXd& l, const genpoly::PsdOptions& opts = {});

/// A kernel bound to a constraint family, exposing counting and exact
/// sampling on either backend. Kernels passed as doubles convert exactly to
/// rationals, so the exact backend is always available; passing the factor V
/// directly is cheaper when its rank is far below m.
class ConstrainedDPP {
 public:
  static ConstrainedDPP from_kernel(Kernel kernel, FamilySpec family,
                                    const genpoly::PsdOptions& opts = {});
  static ConstrainedDPP from_factor(FeatureMatrix factor, FamilySpec family);
  // Exact-rational inputs; the float oracle works on the rounded mirror.
  static ConstrainedDPP from_kernel_exact(const QMatrix& kernel, FamilySpec family,
                                          const genpoly::PsdOptions& opts = {});
  static ConstrainedDPP from_factor_exact(const QMatrix& factor, FamilySpec family);

  int ground_size() const { return m_; }
  const FamilySpec& family() const { return family_; }
  const LinearFamily& linear_family() const { return linear_; }

  Mass<double> count() const;
  Mass<Rational> count_exact() const;

  std::vector<SampleOutcome> sample(std::uint64_t seed, int n_samples) const;
  std::vector<SampleOutcome> sample_exact(std::uint64_t seed,
                                          int n_samples) const;

  const genpoly::GenPolyOracle<Complex>& oracle() const { return oracle_f_; }
  const genpoly::GenPolyOracle<Rational>& oracle_exact() const {
    return oracle_q_;
  }
  std::shared_ptr<sampling::Sampler<Complex>> sampler() const;
  std::shared_ptr<sampling::Sampler<Rational>> sampler_exact() const;

 private:
  ConstrainedDPP() = default;
  void finish_init(FamilySpec family);

  int m_ = 0;
  FamilySpec family_;
  LinearFamily linear_;
  genpoly::GenPolyOracle<Complex> oracle_f_;
  genpoly::GenPolyOracle<Rational> oracle_q_;
  mutable std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
  mutable std::shared_ptr<sampling::Sampler<Complex>> sampler_f_;
  mutable std::shared_ptr<sampling::Sampler<Rational>> sampler_q_;
};

/// Sum of det(L_{S,S}) over the family.
Mass<double> dpp_count(const ConstrainedDPP& d);
Mass<Rational> dpp_count_exact(const ConstrainedDPP& d);

/// i.i.d. exact draws (seeds derived per draw from the given seed).
std::vector<SampleOutcome> dpp_sample(const ConstrainedDPP& d,
                                      std::uint64_t seed, int n_samples);

}  // namespace cdpp::dpp
