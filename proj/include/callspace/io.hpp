#pragma once

#include "callspace/curve.hpp"

#include <json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace callspace {

// {"type":"grid",...} | {"type":"density",...} | {"type":"special","name":"E|Z"}
nlohmann::json curveToJson(const CallCurve& curve);
CallCurve curveFromJson(const nlohmann::json& j);

// {"type":"hat-grid","ps":[...],"values":[...]}; non-grid conjugates are
// sampled onto a probability grid
nlohmann::json hatToJson(const HatCurve& h);
HatCurve hatFromJson(const nlohmann::json& j);

// "a:b:n" -> n equally spaced points on [a,b] inclusive; "log:a:b:n" for
// log spacing.  Throws Error on malformed specs or n < 2.
std::vector<double> parseGridSpec(const std::string& spec);

// Time changes for surfaces/peacocks: "log1p", "sqrt", "linear", each scaled.
std::function<double(double)> timeChange(const std::string& name, double scale = 1.0);

// Locale-independent decimal formatting at 17 significant digits.
std::string formatDouble(double x);

} // namespace callspace
