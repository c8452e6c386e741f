#include "clp/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

namespace clp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::runtime_error("instance: " + where + " " + what);
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "must be a number");
  return j.get<double>();
}

std::vector<double> get_number_array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "must be an array");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k)
    out.push_back(get_number(j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

// Sorted, exact-duplicate-free breakpoint list with pinned endpoints.
std::vector<double> read_breakpoints(const json& j, double horizon, const std::string& where) {
  auto bp = get_number_array(j, where);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  if (bp.size() < 2) fail(where, "needs at least the endpoints 0 and T");
  if (bp.front() != 0.0) fail(where, "must start at 0");
  if (bp.back() != horizon) fail(where, "must end at T=" + std::to_string(horizon));
  return bp;
}

// Piecewise-linear interpolation through a sampled table.
std::function<double(double)> table_handle(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "must be a nonempty array of [t, value] pairs");
  auto pts = std::make_shared<std::vector<std::pair<double, double>>>();
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string at = where + "[" + std::to_string(k) + "]";
    if (!j[k].is_array() || j[k].size() != 2) fail(at, "must be a [t, value] pair");
    pts->emplace_back(get_number(j[k][0], at), get_number(j[k][1], at));
  }
  std::sort(pts->begin(), pts->end());
  return [pts](double t) {
    if (t <= pts->front().first) return pts->front().second;
    if (t >= pts->back().first) return pts->back().second;
    const auto it = std::upper_bound(pts->begin(), pts->end(), std::make_pair(t, 1e300));
    const auto lo = std::prev(it);
    const double span = it->first - lo->first;
    if (span <= 0.0) return lo->second;
    const double f = (t - lo->first) / span;
    return lo->second + f * (it->second - lo->second);
  };
}

Piece1D read_piece1d(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind")) fail(where, "must be an object with a \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "poly") {
    if (!j.contains("coeffs")) fail(where, "poly piece needs \"coeffs\"");
    return Piece1D::poly(get_number_array(j["coeffs"], where + ".coeffs"));
  }
  if (kind == "sampled") {
    if (!j.contains("lipschitz") || !j.contains("delta") || !j.contains("table"))
      fail(where, "sampled piece needs \"lipschitz\", \"delta\" and \"table\"");
    return Piece1D::sampled(table_handle(j["table"], where + ".table"),
                            get_number(j["lipschitz"], where + ".lipschitz"),
                            get_number(j["delta"], where + ".delta"));
  }
  fail(where, "unknown 1-D piece kind \"" + kind + "\"");
}

PiecewiseFn1D read_fn1d(const json& j, double horizon, const std::string& where) {
  if (!j.is_object()) fail(where, "must be an object");
  if (!j.contains("breakpoints") || !j.contains("pieces"))
    fail(where, "needs \"breakpoints\" and \"pieces\"");
  const auto bp = read_breakpoints(j["breakpoints"], horizon, where + ".breakpoints");
  const json& jp = j["pieces"];
  if (!jp.is_array()) fail(where + ".pieces", "must be an array");
  if (jp.size() + 1 != bp.size())
    fail(where + ".pieces",
         "has " + std::to_string(jp.size()) + " pieces for " + std::to_string(bp.size() - 1) +
             " intervals");
  std::vector<Piece1D> pieces;
  for (std::size_t m = 0; m < jp.size(); ++m)
    pieces.push_back(read_piece1d(jp[m], where + ".pieces[" + std::to_string(m) + "]"));
  return PiecewiseFn1D(bp, std::move(pieces));
}

Piece2D read_piece2d(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind")) fail(where, "must be an object with a \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "poly2") {
    if (!j.contains("coeffs")) fail(where, "poly2 piece needs \"coeffs\"");
    const json& jc = j["coeffs"];
    if (!jc.is_array()) fail(where + ".coeffs", "must be an array of arrays");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < jc.size(); ++i)
      rows.push_back(get_number_array(jc[i], where + ".coeffs[" + std::to_string(i) + "]"));
    return Piece2D::poly2(std::move(rows));
  }
  if (kind == "separable") {
    if (!j.contains("t") || !j.contains("s")) fail(where, "separable piece needs \"t\" and \"s\"");
    const auto factor = [&](const json& jf, const std::string& at) -> poly::Coeffs {
      if (jf.is_object() && jf.contains("coeffs"))
        return get_number_array(jf["coeffs"], at + ".coeffs");
      return get_number_array(jf, at);
    };
    return Piece2D::separable(factor(j["t"], where + ".t"), factor(j["s"], where + ".s"));
  }
  if (kind == "sampled2") {
    for (const char* key : {"lipschitz", "delta", "ts", "ss", "values"}) {
      if (!j.contains(key)) fail(where, std::string("sampled2 piece needs \"") + key + "\"");
    }
    auto ts = std::make_shared<std::vector<double>>(get_number_array(j["ts"], where + ".ts"));
    auto ss = std::make_shared<std::vector<double>>(get_number_array(j["ss"], where + ".ss"));
    if (ts->size() < 2 || ss->size() < 2) fail(where, "sampled2 grids need at least 2 points");
    const json& jv = j["values"];
    if (!jv.is_array() || jv.size() != ts->size())
      fail(where + ".values", "must have one row per \"ts\" entry");
    auto vals = std::make_shared<std::vector<std::vector<double>>>();
    for (std::size_t i = 0; i < jv.size(); ++i) {
      vals->push_back(get_number_array(jv[i], where + ".values[" + std::to_string(i) + "]"));
      if (vals->back().size() != ss->size())
        fail(where + ".values[" + std::to_string(i) + "]", "must have one entry per \"ss\" entry");
    }
    const auto locate = [](const std::vector<double>& xs, double x) {
      std::size_t k =
          static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
      if (k == 0) return std::size_t{0};
      if (k >= xs.size()) return xs.size() - 2;
      return k - 1;
    };
    auto handle = [ts, ss, vals, locate](double t, double s) {
      const std::size_t i = locate(*ts, t), k = locate(*ss, s);
      const double tw = (*ts)[i + 1] - (*ts)[i], sw = (*ss)[k + 1] - (*ss)[k];
      const double ft = tw > 0.0 ? std::clamp((t - (*ts)[i]) / tw, 0.0, 1.0) : 0.0;
      const double fs = sw > 0.0 ? std::clamp((s - (*ss)[k]) / sw, 0.0, 1.0) : 0.0;
      const double v00 = (*vals)[i][k], v01 = (*vals)[i][k + 1];
      const double v10 = (*vals)[i + 1][k], v11 = (*vals)[i + 1][k + 1];
      return (1.0 - ft) * ((1.0 - fs) * v00 + fs * v01) + ft * ((1.0 - fs) * v10 + fs * v11);
    };
    return Piece2D::sampled2(handle, get_number(j["lipschitz"], where + ".lipschitz"),
                             get_number(j["delta"], where + ".delta"));
  }
  fail(where, "unknown 2-D piece kind \"" + kind + "\"");
}

PiecewiseFn2D read_fn2d(const json& j, double horizon, const std::string& where) {
  if (!j.is_object()) fail(where, "must be an object");
  if (!j.contains("breakpoints") || !j.contains("pieces"))
    fail(where, "needs \"breakpoints\" and \"pieces\"");
  const auto bp = read_breakpoints(j["breakpoints"], horizon, where + ".breakpoints");
  const std::size_t cells = bp.size() - 1;
  const json& jp = j["pieces"];
  if (!jp.is_array() || jp.size() != cells)
    fail(where + ".pieces", "must be a " + std::to_string(cells) + "x" + std::to_string(cells) +
                                " array of pieces");
  std::vector<std::vector<Piece2D>> rows;
  for (std::size_t u = 0; u < cells; ++u) {
    const std::string at = where + ".pieces[" + std::to_string(u) + "]";
    if (!jp[u].is_array() || jp[u].size() != cells)
      fail(at, "must have " + std::to_string(cells) + " cells");
    std::vector<Piece2D> row;
    for (std::size_t v = 0; v < cells; ++v)
      row.push_back(read_piece2d(jp[u][v], at + "[" + std::to_string(v) + "]"));
    rows.push_back(std::move(row));
  }
  return PiecewiseFn2D(bp, std::move(rows));
}

}  // namespace

CLPInstance instance_from_json(const json& j) {
  if (!j.is_object()) throw std::runtime_error("instance: top level must be an object");
  for (const char* key : {"T", "p", "q", "a", "c", "B", "K"}) {
    if (!j.contains(key))
      throw std::runtime_error(std::string("instance: missing field \"") + key + "\"");
  }
  CLPInstance inst;
  inst.horizon = get_number(j["T"], "T");
  if (!(inst.horizon > 0.0)) fail("T", "must be positive");
  if (!j["p"].is_number_unsigned() || !j["q"].is_number_unsigned())
    throw std::runtime_error("instance: p and q must be nonnegative integers");
  inst.p = j["p"].get<std::size_t>();
  inst.q = j["q"].get<std::size_t>();
  if (inst.p == 0 || inst.q == 0) throw std::runtime_error("instance: p and q must be positive");

  const json& ja = j["a"];
  if (!ja.is_array() || ja.size() != inst.q)
    fail("a", "must have q=" + std::to_string(inst.q) + " entries");
  for (std::size_t k = 0; k < inst.q; ++k)
    inst.a.push_back(read_fn1d(ja[k], inst.horizon, "a[" + std::to_string(k) + "]"));

  const json& jc = j["c"];
  if (!jc.is_array() || jc.size() != inst.p)
    fail("c", "must have p=" + std::to_string(inst.p) + " entries");
  for (std::size_t k = 0; k < inst.p; ++k)
    inst.c.push_back(read_fn1d(jc[k], inst.horizon, "c[" + std::to_string(k) + "]"));

  const auto read_matrix_1d = [&](const json& jm, const char* name) {
    if (!jm.is_array() || jm.size() != inst.p)
      fail(name, "must have p=" + std::to_string(inst.p) + " rows");
    std::vector<PiecewiseFn1D> cells;
    for (std::size_t i = 0; i < inst.p; ++i) {
      const std::string at = std::string(name) + "[" + std::to_string(i) + "]";
      if (!jm[i].is_array() || jm[i].size() != inst.q)
        fail(at, "has " + std::to_string(jm[i].is_array() ? jm[i].size() : 0) +
                     " entries, expected q=" + std::to_string(inst.q));
      for (std::size_t jj = 0; jj < inst.q; ++jj)
        cells.push_back(read_fn1d(jm[i][jj], inst.horizon, at + "[" + std::to_string(jj) + "]"));
    }
    return Grid<PiecewiseFn1D>(inst.p, inst.q, std::move(cells));
  };
  inst.B = read_matrix_1d(j["B"], "B");

  const json& jk = j["K"];
  if (!jk.is_array() || jk.size() != inst.p)
    fail("K", "must have p=" + std::to_string(inst.p) + " rows");
  std::vector<PiecewiseFn2D> kcells;
  for (std::size_t i = 0; i < inst.p; ++i) {
    const std::string at = "K[" + std::to_string(i) + "]";
    if (!jk[i].is_array() || jk[i].size() != inst.q)
      fail(at, "has " + std::to_string(jk[i].is_array() ? jk[i].size() : 0) +
                   " entries, expected q=" + std::to_string(inst.q));
    for (std::size_t jj = 0; jj < inst.q; ++jj)
      kcells.push_back(read_fn2d(jk[i][jj], inst.horizon, at + "[" + std::to_string(jj) + "]"));
  }
  inst.K = Grid<PiecewiseFn2D>(inst.p, inst.q, std::move(kcells));

  inst.validate();
  return inst;
}

CLPInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("instance: " + path + " is not valid JSON: " + e.what());
  }
  return instance_from_json(j);
}

json lp_to_json(const FiniteLP& lp) {
  json j;
  j["sense"] = lp.sense == FiniteLP::Sense::Maximize ? "max" : "min";
  j["row_sense"] = lp.row_sense == FiniteLP::RowSense::LessEqual ? "le" : "ge";
  j["num_vars"] = lp.num_vars();
  j["num_rows"] = lp.num_rows();
  j["cost"] = std::vector<double>(lp.cost.data(), lp.cost.data() + lp.cost.size());
  j["rhs"] = std::vector<double>(lp.rhs.data(), lp.rhs.data() + lp.rhs.size());
  json trips = json::array();
  for (Eigen::Index r = 0; r < lp.a.rows(); ++r)
    for (Eigen::Index c = 0; c < lp.a.cols(); ++c)
      if (lp.a(r, c) != 0.0) trips.push_back({r, c, lp.a(r, c)});
  j["triplets"] = std::move(trips);
  j["var_blocks"] = lp.var_blocks;
  j["var_block_size"] = lp.var_block_size;
  j["row_blocks"] = lp.row_blocks;
  j["row_block_size"] = lp.row_block_size;
  return j;
}

FiniteLP lp_from_json(const json& j) {
  FiniteLP lp;
  const std::string sense = j.at("sense").get<std::string>();
  lp.sense = sense == "max" ? FiniteLP::Sense::Maximize : FiniteLP::Sense::Minimize;
  const std::string rs = j.at("row_sense").get<std::string>();
  lp.row_sense = rs == "le" ? FiniteLP::RowSense::LessEqual : FiniteLP::RowSense::GreaterEqual;
  const auto cost = j.at("cost").get<std::vector<double>>();
  const auto rhs = j.at("rhs").get<std::vector<double>>();
  lp.cost = Eigen::Map<const Eigen::VectorXd>(cost.data(), static_cast<Eigen::Index>(cost.size()));
  lp.rhs = Eigen::Map<const Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  lp.a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rhs.size()),
                               static_cast<Eigen::Index>(cost.size()));
  for (const auto& t : j.at("triplets")) {
    lp.a(t.at(0).get<Eigen::Index>(), t.at(1).get<Eigen::Index>()) = t.at(2).get<double>();
  }
  lp.var_blocks = j.value("var_blocks", std::size_t{1});
  lp.var_block_size = j.value("var_block_size", cost.size());
  lp.row_blocks = j.value("row_blocks", std::size_t{1});
  lp.row_block_size = j.value("row_block_size", rhs.size());
  return lp;
}

FiniteLP load_lp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open LP file: " + path);
  json j;
  in >> j;
  return lp_from_json(j);
}

json partition_to_json(const Partition& part) { return json(part.points); }

}  // namespace clp
