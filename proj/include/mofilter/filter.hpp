#pragma once

#include <utility>
#include <vector>

namespace mofilter {

/// Two-entry multi-objective filter with envelope dominance.  Entries are
/// (theta_j, phi_j) pairs; a candidate must undercut every entry either in
/// infeasibility or in scalarized objective by the gamma_theta margin.
class FilterSet {
 public:
  explicit FilterSet(double gamma_theta = 1e-4) : gamma_theta_(gamma_theta) {}

  /// True iff theta <= (1 - gamma) theta_j  OR  phi <= phi_j - gamma theta_j
  /// for every entry.  Empty filter accepts everything.
  bool acceptable(double theta, double phi) const;

  /// Acceptance against this filter plus the temporary pair
  /// (theta_k, phi_k); the filter itself is not mutated.
  bool augmented_acceptable(double theta_k, double phi_k, double theta_trial,
                            double phi_trial) const;

  /// Inserts (theta, phi), removing every envelope-dominated entry first.
  /// Throws FeasiblePointRejected when theta == 0.
  void add(double theta, double phi);

  const std::vector<std::pair<double, double>>& entries() const {
    return entries_;
  }
  double gamma_theta() const { return gamma_theta_; }

 private:
  std::vector<std::pair<double, double>> entries_;
  double gamma_theta_;
};

}  // namespace mofilter
