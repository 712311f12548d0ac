#ifndef RETROBELL_ANALYSIS_HPP
#define RETROBELL_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "retrobell/angle.hpp"
#include "retrobell/evaluate.hpp"
#include "retrobell/registry.hpp"

namespace retrobell {

// The four settings of the CHSH quantity.
struct ChshSettings {
  Angle a;
  Angle a_prime;
  Angle b;
  Angle b_prime;
};

// S = E(a,b) - E(a,b') + E(a',b) + E(a',b'), from exact correlators.
inline double chsh(const Model& model, const ChshSettings& s) {
  return correlator(model.joint(s.a, s.b)) - correlator(model.joint(s.a, s.b_prime)) +
         correlator(model.joint(s.a_prime, s.b)) + correlator(model.joint(s.a_prime, s.b_prime));
}

struct ChshScanResult {
  double best_abs_s = 0.0;
  ChshSettings argmax;
};

namespace detail {

// Golden-section maximization of f over [lo, hi]; f need only be unimodal
// near the optimum, which grid seeding provides.
inline std::pair<double, double> golden_max(const std::function<double(double)>& f, double lo,
                                            double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (lo + hi);
  return {xm, f(xm)};
}

}  // namespace detail

// Maximal |S| over the setting space: coarse grid over [0, pi)^4 (correlators
// tabulated once on the grid_n x grid_n pair grid), then coordinate-wise
// golden-section refinement from the best grid point.  The best value is
// non-decreasing across refinement passes; a pass improving by less than
// 1e-9 stops the search.
inline ChshScanResult chsh_scan(const Model& model, int grid_n, int refine_iters) {
  if (grid_n < 8) throw std::invalid_argument("chsh_scan: grid_n must be >= 8");

  const double step = kPi / grid_n;
  std::vector<double> table(static_cast<std::size_t>(grid_n) * grid_n);
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      table[static_cast<std::size_t>(i) * grid_n + j] =
          correlator(model.joint(Angle(i * step), Angle(j * step)));
    }
  }
  const auto table_s = [&](int i, int ip, int j, int jp) {
    const auto e = [&](int x, int y) { return table[static_cast<std::size_t>(x) * grid_n + y]; };
    return std::fabs(e(i, j) - e(i, jp) + e(ip, j) + e(ip, jp));
  };

  double best = -1.0;
  std::array<double, 4> x{};
  for (int i = 0; i < grid_n; ++i) {
    for (int ip = 0; ip < grid_n; ++ip) {
      for (int j = 0; j < grid_n; ++j) {
        for (int jp = 0; jp < grid_n; ++jp) {
          const double s = table_s(i, ip, j, jp);
          if (s > best) {
            best = s;
            x = {i * step, ip * step, j * step, jp * step};
          }
        }
      }
    }
  }

  const auto abs_s = [&](const std::array<double, 4>& v) {
    return std::fabs(chsh(model, ChshSettings{Angle(v[0]), Angle(v[1]), Angle(v[2]), Angle(v[3])}));
  };

  for (int pass = 0; pass < refine_iters; ++pass) {
    const double before = best;
    for (int c = 0; c < 4; ++c) {
      auto trial = x;
      const auto f1d = [&](double t) {
        trial[c] = t;
        return abs_s(trial);
      };
      const auto [t_best, f_best] = detail::golden_max(f1d, x[c] - step, x[c] + step);
      if (f_best > best) {
        best = f_best;
        x[c] = t_best;
      }
    }
    if (best - before < 1e-9) break;
  }

  return {best, ChshSettings{Angle(x[0]), Angle(x[1]), Angle(x[2]), Angle(x[3])}};
}

// Largest change of either wing's marginal under a remote-setting swap:
// max over wings, local settings s and remote settings r, r' of
// |marginal(s, r) - marginal(s, r')|.  Zero for no-signaling models.
inline double no_signaling_deviation(const Model& model, std::span<const Angle> probes) {
  if (probes.empty()) throw std::invalid_argument("no_signaling_deviation: empty probe list");
  double deviation = 0.0;
  for (Wing wing : {Wing::A, Wing::B}) {
    for (Angle local : probes) {
      double lo = 1.0;
      double hi = 0.0;
      for (Angle remote : probes) {
        const JointDist j =
            wing == Wing::A ? model.joint(local, remote) : model.joint(remote, local);
        const double m = marginal(j, wing);
        lo = std::min(lo, m);
        hi = std::max(hi, m);
      }
      deviation = std::max(deviation, hi - lo);
    }
  }
  return deviation;
}

// Prior over setting pairs, needed to define the information carried by the
// hidden variable about the settings.
struct WeightedPair {
  Angle a;
  Angle b;
  double weight = 0.0;
};

struct SettingsEnsemble {
  std::vector<WeightedPair> pairs;
};

inline SettingsEnsemble make_ensemble(std::vector<WeightedPair> pairs) {
  if (pairs.empty()) throw std::invalid_argument("SettingsEnsemble: empty");
  double total = 0.0;
  for (const WeightedPair& p : pairs) {
    if (!(p.weight >= 0.0)) throw std::invalid_argument("SettingsEnsemble: negative weight");
    total += p.weight;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("SettingsEnsemble: weights do not sum to 1");
  }
  return {std::move(pairs)};
}

// Uniform prior over the four pairs of the standard CHSH quadruple
// (a, a') x (b, b') = (0, pi/4) x (pi/8, 3pi/8).
inline SettingsEnsemble chsh_quadruple_ensemble() {
  const Angle a0(0.0), a1(kPi / 4.0), b0(kPi / 8.0), b1(3.0 * kPi / 8.0);
  return make_ensemble(
      {{a0, b0, 0.25}, {a0, b1, 0.25}, {a1, b0, 0.25}, {a1, b1, 0.25}});
}

// Uniform prior over an n x n grid of setting pairs on [0, pi)^2.
inline SettingsEnsemble grid_ensemble(int n) {
  if (n < 1) throw std::invalid_argument("grid_ensemble: n must be >= 1");
  std::vector<WeightedPair> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * n);
  const double w = 1.0 / (static_cast<double>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      pairs.push_back({Angle(i * kPi / n), Angle(j * kPi / n), w});
    }
  }
  return make_ensemble(std::move(pairs));
}

namespace detail {

// I(lambda; G) in bits for a grouping G of the ensemble's pairs, computed
// exactly: over the merged atom alphabet for atomic laws, over the common
// breakpoint refinement for piecewise laws.  The joint-settings information
// uses the identity grouping; per-wing information groups pairs sharing a
// wing setting.
inline double mutual_information_grouped(const Model& model, const SettingsEnsemble& ensemble,
                                         const std::vector<int>& group_of_pair, int n_groups) {
  if (!model.has_hidden_variable()) {
    throw std::invalid_argument("mutual_information: model '" + model.name() +
                                "' assigns no hidden variable");
  }
  const auto& pairs = ensemble.pairs;
  std::vector<LambdaLaw> laws;
  laws.reserve(pairs.size());
  for (const WeightedPair& p : pairs) laws.push_back(model.hv().lambda_law(p.a, p.b));
  for (const LambdaLaw& law : laws) {
    if (law.kind() != laws.front().kind()) {
      throw std::invalid_argument(
          "mutual_information: mixed atomic/piecewise ensembles are not comparable");
    }
  }

  std::vector<double> group_weight(n_groups, 0.0);
  for (std::size_t s = 0; s < pairs.size(); ++s) {
    group_weight[group_of_pair[s]] += pairs[s].weight;
  }

  // conditional[g][k]: probability (atomic) or density (piecewise) that
  // group g puts on alphabet cell k; measure[k] = 1 or segment length.
  std::vector<std::vector<double>> conditional;
  std::vector<double> measure;

  if (laws.front().is_atomic()) {
    struct Entry {
      double position;
      std::size_t pair;
      double prob;
    };
    std::vector<Entry> entries;
    for (std::size_t s = 0; s < laws.size(); ++s) {
      for (const Atom& atom : laws[s].atoms()) {
        entries.push_back({atom.position.radians(), s, atom.weight});
      }
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& x, const Entry& y) { return x.position < y.position; });
    // cluster positions within 1e-12 on the circle into one alphabet symbol
    std::vector<int> symbol(entries.size());
    int n_symbols = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (i > 0 && circle_close(Angle(entries[i].position), Angle(entries[i - 1].position), 1e-12)) {
        symbol[i] = symbol[i - 1];
      } else {
        symbol[i] = n_symbols++;
      }
    }
    if (n_symbols > 1 && circle_close(Angle(entries.front().position),
                                      Angle(entries.back().position), 1e-12)) {
      const int last = symbol.back();
      for (std::size_t i = entries.size(); i-- > 0 && symbol[i] == last;) symbol[i] = 0;
      --n_symbols;
    }
    conditional.assign(n_groups, std::vector<double>(n_symbols, 0.0));
    measure.assign(n_symbols, 1.0);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::size_t s = entries[i].pair;
      const int g = group_of_pair[s];
      conditional[g][symbol[i]] += entries[i].prob * pairs[s].weight / group_weight[g];
    }
  } else {
    std::vector<double> cuts{0.0, kPi};
    for (const LambdaLaw& law : laws) {
      for (const Segment& seg : law.segments()) {
        cuts.push_back(seg.left);
        cuts.push_back(seg.right);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double x, double y) { return y - x <= 1e-14; }),
               cuts.end());
    if (kPi - cuts.back() <= 1e-14) cuts.back() = kPi;

    const int n_cells = static_cast<int>(cuts.size()) - 1;
    conditional.assign(n_groups, std::vector<double>(n_cells, 0.0));
    measure.assign(n_cells, 0.0);
    for (int k = 0; k < n_cells; ++k) {
      measure[k] = cuts[k + 1] - cuts[k];
      const Angle mid(0.5 * (cuts[k] + cuts[k + 1]));
      for (std::size_t s = 0; s < laws.size(); ++s) {
        const int g = group_of_pair[s];
        conditional[g][k] += laws[s].density_at(mid) * pairs[s].weight / group_weight[g];
      }
    }
  }

  double bits = 0.0;
  for (std::size_t k = 0; k < measure.size(); ++k) {
    double mixture = 0.0;
    for (int g = 0; g < n_groups; ++g) mixture += group_weight[g] * conditional[g][k];
    if (mixture <= 0.0) continue;
    for (int g = 0; g < n_groups; ++g) {
      const double p = conditional[g][k];
      if (p > 0.0) {
        bits += group_weight[g] * measure[k] * p * std::log2(p / mixture);
      }
    }
  }
  if (bits < 0.0) {
    if (bits < -1e-12) throw std::logic_error("mutual_information: negative result");
    bits = 0.0;
  }
  return bits;
}

}  // namespace detail

// I(lambda; (a,b)) in bits under the given prior over setting pairs.
inline double mutual_information(const Model& model, const SettingsEnsemble& ensemble) {
  std::vector<int> identity(ensemble.pairs.size());
  std::iota(identity.begin(), identity.end(), 0);
  return detail::mutual_information_grouped(model, ensemble, identity,
                                            static_cast<int>(ensemble.pairs.size()));
}

// Per-wing decomposition: I(lambda; a) or I(lambda; b), grouping ensemble
// pairs that share the wing's setting (within 1e-12 on the circle).
inline double mutual_information_wing(const Model& model, const SettingsEnsemble& ensemble,
                                      Wing wing) {
  std::vector<Angle> reps;
  std::vector<int> group(ensemble.pairs.size());
  for (std::size_t s = 0; s < ensemble.pairs.size(); ++s) {
    const Angle setting = wing == Wing::A ? ensemble.pairs[s].a : ensemble.pairs[s].b;
    int g = -1;
    for (std::size_t r = 0; r < reps.size(); ++r) {
      if (circle_close(reps[r], setting, 1e-12)) {
        g = static_cast<int>(r);
        break;
      }
    }
    if (g < 0) {
      g = static_cast<int>(reps.size());
      reps.push_back(setting);
    }
    group[s] = g;
  }
  return detail::mutual_information_grouped(model, ensemble, group,
                                            static_cast<int>(reps.size()));
}

}  // namespace retrobell

#endif  // RETROBELL_ANALYSIS_HPP
