#include "mofilter/filter.hpp"

#include <algorithm>

#include "mofilter/errors.hpp"

namespace mofilter {

bool FilterSet::acceptable(double theta, double phi) const {
  for (const auto& [theta_j, phi_j] : entries_) {
    const bool ok = theta <= (1.0 - gamma_theta_) * theta_j ||
                    phi <= phi_j - gamma_theta_ * theta_j;
    if (!ok) return false;
  }
  return true;
}

bool FilterSet::augmented_acceptable(double theta_k, double phi_k,
                                     double theta_trial,
                                     double phi_trial) const {
  if (!acceptable(theta_trial, phi_trial)) return false;
  return theta_trial <= (1.0 - gamma_theta_) * theta_k ||
         phi_trial <= phi_k - gamma_theta_ * theta_k;
}

void FilterSet::add(double theta, double phi) {
  if (theta <= 0.0)
    throw FeasiblePointRejected("filter: feasible pair (theta == 0) added");
  std::erase_if(entries_, [&](const std::pair<double, double>& e) {
    const auto& [theta_j, phi_j] = e;
    return theta_j >= theta &&
           phi_j - gamma_theta_ * theta_j >= phi - gamma_theta_ * theta;
  });
  // A pair dominated by a surviving entry imposes a weaker test than that
  // entry already does; inserting it would only break non-domination.
  for (const auto& [theta_j, phi_j] : entries_)
    if (theta_j <= theta &&
        phi_j - gamma_theta_ * theta_j <= phi - gamma_theta_ * theta)
      return;
  entries_.emplace_back(theta, phi);
}

}  // namespace mofilter
