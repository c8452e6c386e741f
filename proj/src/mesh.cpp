#include "clp/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace clp {

namespace {

// Relative slack for the mesh-norm test: subdivision points are rounded,
// so equality cases can land one ulp above kappa*T/n.
constexpr double kNormSlack = 1e-12;

struct Seed {
  double lo, hi;
  std::size_t parts = 1;
  double cell() const { return (hi - lo) / static_cast<double>(parts); }
};

std::vector<Seed> seed_intervals(const CLPInstance& inst) {
  const std::vector<double> bp = inst.all_breakpoints();
  std::vector<Seed> seeds;
  for (std::size_t m = 0; m + 1 < bp.size(); ++m) seeds.push_back({bp[m], bp[m + 1], 1});
  return seeds;
}

// Largest-cell-first allocation of n cells over the seed intervals.
// Returns the resulting mesh norm.
double allocate(std::vector<Seed>& seeds, std::size_t n) {
  std::size_t total = seeds.size();
  while (total < n) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < seeds.size(); ++k) {
      if (seeds[k].cell() > seeds[best].cell()) best = k;  // ties stay leftmost
    }
    ++seeds[best].parts;
    ++total;
  }
  double norm = 0.0;
  for (const Seed& s : seeds) norm = std::max(norm, s.cell());
  return norm;
}

std::vector<double> emit_points(const std::vector<Seed>& seeds) {
  std::vector<double> pts;
  pts.push_back(seeds.front().lo);
  for (const Seed& s : seeds) {
    for (std::size_t k = 1; k < s.parts; ++k) {
      pts.push_back(s.lo + (s.hi - s.lo) * static_cast<double>(k) / static_cast<double>(s.parts));
    }
    pts.push_back(s.hi);
  }
  return pts;
}

}  // namespace

double Partition::mesh_norm() const {
  double norm = 0.0;
  for (std::size_t u = 0; u + 1 < points.size(); ++u)
    norm = std::max(norm, points[u + 1] - points[u]);
  return norm;
}

Partition build_partition(const CLPInstance& inst, std::size_t n, double kappa) {
  inst.validate();
  if (!(kappa >= 1.0)) throw std::invalid_argument("build_partition: kappa must be at least 1");
  if (n == 0) throw std::invalid_argument("build_partition: need at least one interval");

  std::vector<Seed> seeds = seed_intervals(inst);
  const double horizon = inst.horizon;
  const auto fits = [&](std::size_t cells, double norm) {
    return norm <= kappa * horizon / static_cast<double>(cells) * (1.0 + kNormSlack);
  };

  bool feasible = seeds.size() <= n;
  double norm = 0.0;
  std::vector<Seed> chosen;
  if (feasible) {
    chosen = seeds;
    norm = allocate(chosen, n);
    feasible = fits(n, norm);
  }
  if (!feasible) {
    // Scan for the smallest workable interval count to report.
    std::size_t min_n = 0;
    const std::size_t cap = std::max<std::size_t>(4096, 8 * std::max(n, seeds.size()));
    for (std::size_t m = seeds.size(); m <= cap; ++m) {
      std::vector<Seed> trial = seeds;
      if (fits(m, allocate(trial, m))) {
        min_n = m;
        break;
      }
    }
    std::string msg = "build_partition: cannot reach mesh norm <= kappa*T/N with N=" +
                      std::to_string(n) + " (breakpoints need " + std::to_string(seeds.size()) +
                      " intervals)";
    if (min_n > 0) msg += "; minimum feasible N is " + std::to_string(min_n);
    throw std::invalid_argument(msg);
  }

  Partition part;
  part.kappa = kappa;
  part.points = emit_points(chosen);
  return part;
}

Partition refine(const Partition& part, std::size_t factor) {
  if (factor < 2) throw std::invalid_argument("refine: factor must be at least 2");
  Partition out;
  out.kappa = part.kappa;
  out.points.push_back(part.points.front());
  for (std::size_t u = 0; u + 1 < part.points.size(); ++u) {
    const double lo = part.points[u], hi = part.points[u + 1];
    for (std::size_t k = 1; k < factor; ++k) {
      out.points.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(factor));
    }
    out.points.push_back(hi);
  }
  return out;
}

OscillationTable oscillations(const CLPInstance& inst, const Partition& part) {
  OscillationTable table;
  const std::size_t n = part.intervals();

  const auto osc_1d = [&](const PiecewiseFn1D& f) {
    double worst = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      const auto [mn, mx] = f.range_on(part.points[u], part.points[u + 1]);
      worst = std::max(worst, mx - mn);
    }
    return worst;
  };
  const auto osc_2d = [&](const PiecewiseFn2D& f) {
    double worst = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < n; ++v) {
        const auto [mn, mx] = f.range_on(part.interval(u), part.interval(v));
        worst = std::max(worst, mx - mn);
      }
    }
    return worst;
  };

  for (std::size_t j = 0; j < inst.q; ++j) table.entries.push_back({'a', 0, j, osc_1d(inst.a[j])});
  for (std::size_t i = 0; i < inst.p; ++i) table.entries.push_back({'c', i, 0, osc_1d(inst.c[i])});
  for (std::size_t i = 0; i < inst.p; ++i)
    for (std::size_t j = 0; j < inst.q; ++j)
      table.entries.push_back({'B', i, j, osc_1d(inst.B.at(i, j))});
  for (std::size_t i = 0; i < inst.p; ++i)
    for (std::size_t j = 0; j < inst.q; ++j)
      table.entries.push_back({'K', i, j, osc_2d(inst.K.at(i, j))});

  for (const auto& e : table.entries) table.max_osc = std::max(table.max_osc, e.max_osc);
  return table;
}

}  // namespace clp
