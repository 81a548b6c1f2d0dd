#pragma once

// Optional JSON override of the physical constants.
//
//   { "c3_au": 6.405, "lambda_nm": 1083.3, "delta21_ghz": 2.291175,
//     "delta10_ghz": 29.61695, "mass_u": 4.002602 }
//
// `gamma_mhz` (Gamma / 2 pi) may be given instead of `c3_au`; giving both is
// accepted only when they agree to 1e-9 relative. Unknown keys are rejected.

#include "lrdimer/constants.hpp"
#include "lrdimer/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

namespace lrdimer {

inline PhysicalConstants constantsFromJson(const nlohmann::json &j) {
  if (!j.is_object())
    throw UsageError("constants override must be a JSON object");
  for (const auto &[key, value] : j.items()) {
    if (key != "c3_au" && key != "gamma_mhz" && key != "lambda_nm" &&
        key != "delta21_ghz" && key != "delta10_ghz" && key != "mass_u")
      throw UsageError("constants override: unknown key '" + key + "'");
    if (!value.is_number())
      throw UsageError("constants override: '" + key + "' must be a number");
  }
  const auto get = [&](const char *key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
  };
  const double lambda = get("lambda_nm", PhysicalConstants::defaultLambdaNm);
  double c3 = PhysicalConstants::defaultC3;
  if (j.contains("gamma_mhz")) {
    const double gamma = 2.0 * std::numbers::pi * j.at("gamma_mhz").get<double>() * 1e6;
    c3 = c3FromGamma(gamma, lambda);
    if (j.contains("c3_au")) {
      const double given = j.at("c3_au").get<double>();
      if (std::abs(given - c3) > 1e-9 * std::abs(c3))
        throw UsageError("constants override: c3_au and gamma_mhz disagree");
    }
  } else if (j.contains("c3_au")) {
    c3 = j.at("c3_au").get<double>();
  }
  return PhysicalConstants(c3, lambda,
                           get("delta21_ghz", PhysicalConstants::defaultDelta21Ghz),
                           get("delta10_ghz", PhysicalConstants::defaultDelta10Ghz),
                           get("mass_u", PhysicalConstants::defaultMassU));
}

inline PhysicalConstants loadConstants(const std::string &path) {
  if (path.empty())
    return {};
  std::ifstream in(path);
  if (!in)
    throw UsageError("cannot open constants file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error &e) {
    throw UsageError("constants file '" + path + "': " + e.what());
  }
  return constantsFromJson(j);
}

} // namespace lrdimer
