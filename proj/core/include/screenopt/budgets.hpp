#pragma once

#include <sstream>

#include "screenopt/errors.hpp"

namespace screenopt {

// Screening budget alpha and allocation budget beta, as fractions of the
// population. Valid when 0 <= alpha <= beta and 0 < beta < 1. The guarantee
// regime for the contraction results additionally needs alpha + beta < 1;
// that is recorded, not enforced, so boundary studies can still run.
struct Budgets {
  double alpha;
  double beta;

  Budgets(double alpha_in, double beta_in) : alpha(alpha_in), beta(beta_in) {
    if (!(alpha >= 0.0) || !(beta > 0.0) || !(beta < 1.0) || !(alpha <= beta)) {
      std::ostringstream os;
      os << "invalid budgets alpha=" << alpha << " beta=" << beta
         << " (need 0 <= alpha <= beta and 0 < beta < 1)";
      throw DomainError(os.str());
    }
  }

  bool in_strict_regime() const noexcept { return alpha + beta < 1.0; }
};

}  // namespace screenopt
