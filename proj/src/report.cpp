#include "nlsob/report.hpp"

#include <cmath>

namespace nlsob {

namespace {

// Non-finite values become null so the output stays valid JSON.
Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json nums(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

}  // namespace

Json to_json(const SharpConstants& c) {
  return {{"c_hls", num(c.c_hls)}, {"s_sob", num(c.s_sob)}, {"s_hls", num(c.s_hls)}, {"bubble_amp", num(c.bubble_amp)}};
}

Json to_json(const DeficitReport& r) {
  return {{"grad_energy", num(r.grad_energy)},
          {"hls_energy", num(r.hls_energy)},
          {"deficit", num(r.deficit)},
          {"dist", num(r.dist)},
          {"ratio", num(r.ratio)}};
}

Json to_json(const SpectrumReport& r) {
  return {{"ell", r.ell},
          {"eigenvalues", nums(r.eigenvalues)},
          {"mu_gap", num(r.mu_gap)},
          {"k_count", r.k_count},
          {"b1_candidate", num(r.b1_candidate)}};
}

Json to_json(const SweepReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json j = {{"direction", row.direction},
              {"epsilon", num(row.epsilon)},
              {"deficit", num(row.deficit)},
              {"dist", num(row.dist)},
              {"ratio", num(row.ratio)}};
    if (!row.error.empty()) j["error"] = row.error;
    rows.push_back(std::move(j));
  }
  return {{"mu_gap", num(r.mu_gap)},
          {"b1_target", num(r.b1_target)},
          {"empirical_b1_lower_bound_candidate", num(r.empirical_b1)},
          {"gap_within_bound", r.gap_within_bound},
          {"rows", std::move(rows)}};
}

Json to_json(const BoundedDomainReport& r) {
  return {{"R", num(r.R)},
          {"lambdas", nums(r.lambdas)},
          {"deficit", nums(r.deficit)},
          {"weak_norm", nums(r.weak_norm)},
          {"strong_norm", nums(r.strong_norm)},
          {"weak_ratio", nums(r.weak_ratio)},
          {"strong_ratio", nums(r.strong_ratio)},
          {"tail_energy", nums(r.tail_energy)},
          {"weak_floor", num(r.weak_floor)},
          {"strong_log_spread", num(r.strong_log_spread)},
          {"inverse_ratio_slope", num(r.inverse_ratio_slope)},
          {"inverse_ratio_intercept", num(r.inverse_ratio_intercept)},
          {"strong_log_power", num(r.strong_log_power)}};
}

Json to_json(const Decomposition& d, const std::string& w_csv_path) {
  return {{"c", num(d.best.c)}, {"lambda", num(d.best.lambda)}, {"d", num(d.d)}, {"w_csv_path", w_csv_path}};
}

Json envelope(const Params& p, double r_min, double r_max, int n, Json payload) {
  return {{"tool_version", NLSOB_VERSION},
          {"params", {{"N", p.N}, {"alpha", num(p.alpha)}}},
          {"grid", {{"r_min", num(r_min)}, {"r_max", num(r_max)}, {"n", n}}},
          {"payload", std::move(payload)}};
}

Json envelope(const Params& p, const RadialGrid& g, Json payload) {
  return envelope(p, g.r_min(), g.r_max(), g.size(), std::move(payload));
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace nlsob
