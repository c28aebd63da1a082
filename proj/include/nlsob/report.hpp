#pragma once

#include <string>

#include <json.hpp>

#include "nlsob/experiments.hpp"
#include "nlsob/functional.hpp"
#include "nlsob/manifold.hpp"
#include "nlsob/params.hpp"
#include "nlsob/radial.hpp"
#include "nlsob/spectrum.hpp"

namespace nlsob {

using Json = nlohmann::json;

Json to_json(const SharpConstants& c);
Json to_json(const DeficitReport& r);
Json to_json(const SpectrumReport& r);
Json to_json(const SweepReport& r);
Json to_json(const BoundedDomainReport& r);
/// The remainder is referenced by path; the caller writes the CSV.
Json to_json(const Decomposition& d, const std::string& w_csv_path);

/// {tool_version, params:{N, alpha}, grid:{r_min, r_max, n}, payload}.
Json envelope(const Params& p, double r_min, double r_max, int n, Json payload);
Json envelope(const Params& p, const RadialGrid& g, Json payload);

/// Stable text form: sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);

}  // namespace nlsob
