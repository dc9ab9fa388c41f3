#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mofilter::probes {

struct ProbeReport {
  std::vector<std::pair<std::string, bool>> checks;
  bool ok() const {
    for (const auto& [name, pass] : checks)
      if (!pass) return false;
    return true;
  }
};

/// Strong duality + multiplier stationarity over random tangential LPs.
ProbeReport duality(unsigned seed, int count = 200);

/// Fully-linear decay slopes on the two-parabolas f1 and g.
ProbeReport slopes(unsigned seed);

/// Filter non-domination and self-rejection over random add sequences.
ProbeReport filter_suite(unsigned seed, int adds = 1000);

/// omega ball/box ratio within [1/sqrt(n), 1] on random instances.
ProbeReport norms(unsigned seed, int count = 100);

}  // namespace mofilter::probes
