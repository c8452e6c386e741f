#ifndef CTLP_MESH_HPP
#define CTLP_MESH_HPP

#include <cstddef>
#include <vector>

#include "clp/piecewise.hpp"

namespace clp {

// Partition 0 = t_0 < t_1 < ... < t_N = T of the horizon. Built partitions
// contain every coefficient breakpoint and satisfy mesh_norm <= kappa*T/N.
struct Partition {
  std::vector<double> points;
  double kappa = 2.0;

  std::size_t intervals() const { return points.size() - 1; }
  double horizon() const { return points.back(); }
  double delta(std::size_t u) const { return points[u + 1] - points[u]; }
  Interval interval(std::size_t u) const { return {points[u], points[u + 1]}; }
  double mesh_norm() const;
};

// Deterministic construction: seed with the union of coefficient
// breakpoints, then repeatedly subdivide whichever seed interval currently
// has the widest cell (ties to the leftmost) until exactly n cells exist.
// Throws std::invalid_argument when n or kappa make that impossible; the
// message names the smallest feasible n.
Partition build_partition(const CLPInstance& inst, std::size_t n, double kappa);

// Splits every interval into `factor` equal parts; keeps all points and kappa.
Partition refine(const Partition& part, std::size_t factor);

struct OscillationEntry {
  char coeff;        // 'a', 'c', 'B' or 'K'
  std::size_t i, j;  // j unused for 'c'; i unused for 'a'
  double max_osc;    // sup - inf, worst interval (or rectangle)
};

struct OscillationTable {
  std::vector<OscillationEntry> entries;
  double max_osc = 0.0;  // realized uniform-continuity bound for this mesh
};

// Per-coefficient oscillation sup-inf over every partition interval (every
// rectangle pair for kernels).
OscillationTable oscillations(const CLPInstance& inst, const Partition& part);

}  // namespace clp

#endif
