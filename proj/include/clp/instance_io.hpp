#ifndef CTLP_INSTANCE_IO_HPP
#define CTLP_INSTANCE_IO_HPP

#include <string>

#include <json.hpp>

#include "clp/discretize.hpp"
#include "clp/piecewise.hpp"

namespace clp {

// Instance files: {"T":..., "p":..., "q":..., "a":[fn...], "c":[fn...],
// "B":[[fn...]], "K":[[fn2...]]} where fn = {"breakpoints":[...],
// "pieces":[...]} and pieces are {"kind":"poly"|"poly2"|"separable"|
// "sampled"|"sampled2", ...}. Sampled tables are linearly (bilinearly)
// interpolated as the evaluation handle.
CLPInstance instance_from_json(const nlohmann::json& j);
CLPInstance load_instance(const std::string& path);

// Sparse-triplet serialization of a finite LP, replayable by the solver.
nlohmann::json lp_to_json(const FiniteLP& lp);
FiniteLP lp_from_json(const nlohmann::json& j);
FiniteLP load_lp(const std::string& path);

// A partition is just its point array.
nlohmann::json partition_to_json(const Partition& part);

}  // namespace clp

#endif
