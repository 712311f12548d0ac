#ifndef RETROBELL_STATS_HPP
#define RETROBELL_STATS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "retrobell/joint.hpp"

namespace retrobell {

// Binomial standard error sqrt(p(1-p)/n) of a cell frequency.
inline double binomial_std_error(double p, std::uint64_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

// z-score of an observed count against an exact cell probability.  Cells
// with p in {0, 1} have zero standard error: any deviation there is an
// outright support violation, reported as +inf.
inline double cell_z_score(std::uint64_t count, std::uint64_t n, double p) {
  const double freq = static_cast<double>(count) / static_cast<double>(n);
  const double se = binomial_std_error(p, n);
  if (se == 0.0) {
    return freq == p ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return std::fabs(freq - p) / se;
}

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
};

// Pearson goodness-of-fit against a fully specified distribution with k
// positive-probability cells; dof = k - 1.  Counts observed in zero-
// probability cells make the statistic infinite.
template <typename Counts>
inline ChiSquare chi_square_gof(const Counts& observed, const JointDist& expected,
                                std::uint64_t n) {
  ChiSquare result;
  int positive_cells = 0;
  for (Outcome a : kOutcomes) {
    for (Outcome b : kOutcomes) {
      const double p = expected.cell(a, b);
      const double obs = static_cast<double>(observed.count(a, b));
      if (p > 0.0) {
        ++positive_cells;
        const double exp_count = p * static_cast<double>(n);
        const double diff = obs - exp_count;
        result.statistic += diff * diff / exp_count;
      } else if (obs > 0.0) {
        result.statistic = std::numeric_limits<double>::infinity();
      }
    }
  }
  result.dof = positive_cells - 1;
  return result;
}

// Upper 0.1% chi-square quantiles for the degrees of freedom that arise
// with four outcome cells.
inline double chi_square_critical_999(int dof) {
  switch (dof) {
    case 0: return 0.0;
    case 1: return 10.827566170662733;
    case 2: return 13.815510557964274;
    case 3: return 16.26623619623813;
    default: throw std::invalid_argument("chi_square_critical_999: dof out of range");
  }
}

}  // namespace retrobell

#endif  // RETROBELL_STATS_HPP
