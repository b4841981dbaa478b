#include "callspace/io.hpp"

#include "callspace/algebra.hpp"
#include "callspace/errors.hpp"
#include "internal.hpp"

#include <cmath>
#include <cstdio>

namespace callspace {

using nlohmann::json;

namespace {

std::vector<double> toVec(const json& j) { return j.get<std::vector<double>>(); }

} // namespace

json curveToJson(const CallCurve& curve) {
    if (curve.isSpecial()) {
        return json{{"type", "special"},
                    {"name", curve.special() == CallCurve::Special::Identity ? "E" : "Z"}};
    }
    if (curve.isAnalytic()) {
        const auto& a = curve.analyticData();
        json params = json::object();
        for (const auto& [k, v] : a.density.params()) params[k] = v;
        return json{{"type", "density"},
                    {"family", a.density.familyName()},
                    {"params", params},
                    {"y", a.y}};
    }
    auto g = curve.asGrid(); // exact for grid curves, sampled for conjugates
    return json{{"type", "grid"}, {"strikes", g.strikes}, {"prices", g.prices}, {"c_inf", g.cInf}};
}

CallCurve curveFromJson(const json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw InvalidCurve("curve JSON: expected an object with a \"type\" field");
    std::string type = j.at("type").get<std::string>();
    if (type == "special") {
        std::string name = j.at("name").get<std::string>();
        if (name == "E") return CallCurve::identity();
        if (name == "Z") return CallCurve::absorbing();
        throw InvalidCurve("curve JSON: special name must be E or Z");
    }
    if (type == "grid") {
        return CallCurve::grid(toVec(j.at("strikes")), toVec(j.at("prices")),
                               j.at("c_inf").get<double>());
    }
    if (type == "density") {
        std::map<std::string, double> params;
        if (j.contains("params"))
            for (const auto& [k, v] : j.at("params").items()) params[k] = v.get<double>();
        auto f = LogConcaveDensity::byName(j.at("family").get<std::string>(), params);
        return CallCurve::analytic(f, j.value("y", 0.0));
    }
    throw InvalidCurve("curve JSON: unknown type \"" + type + "\"");
}

json hatToJson(const HatCurve& h) {
    if (h.isGrid()) {
        const auto& g = h.grid();
        return json{{"type", "hat-grid"}, {"ps", g.ps}, {"values", g.values}};
    }
    std::vector<double> ps, values;
    for (int i = 0; i <= 400; ++i) {
        double p = i / 400.0;
        ps.push_back(p);
        values.push_back(h(p));
    }
    return json{{"type", "hat-grid"}, {"ps", ps}, {"values", values}};
}

HatCurve hatFromJson(const json& j) {
    if (!j.is_object() || j.value("type", "") != "hat-grid")
        throw NotConcave("hat JSON: expected {\"type\":\"hat-grid\",...}");
    HatCurve::Grid g{toVec(j.at("ps")), toVec(j.at("values"))};
    detail::checkHatGrid(g);
    return HatCurve(std::move(g));
}

std::vector<double> parseGridSpec(const std::string& spec) {
    bool logSpace = false;
    std::string body = spec;
    if (body.rfind("log:", 0) == 0) {
        logSpace = true;
        body = body.substr(4);
    }
    double a = 0.0, b = 0.0;
    long n = 0;
    char trail = 0;
    if (std::sscanf(body.c_str(), "%lf:%lf:%ld%c", &a, &b, &n, &trail) != 3)
        throw Error("grid spec: expected a:b:n, got \"" + spec + "\"");
    if (n < 2) throw Error("grid spec: need n >= 2");
    if (logSpace && (a <= 0.0 || b <= 0.0)) throw Error("grid spec: log spacing needs a,b > 0");
    if (!(b > a)) throw Error("grid spec: need a < b");
    std::vector<double> out(static_cast<size_t>(n), 0.0);
    if (logSpace) {
        double la = std::log(a), lb = std::log(b);
        for (long i = 0; i < n; ++i) out[size_t(i)] = std::exp(la + (lb - la) * i / (n - 1));
        out.front() = a;
        out.back() = b;
    } else {
        for (long i = 0; i < n; ++i) out[size_t(i)] = a + (b - a) * i / (n - 1);
        out.back() = b;
    }
    return out;
}

std::function<double(double)> timeChange(const std::string& name, double scale) {
    if (!(scale > 0.0)) throw Error("time change: scale must be positive");
    if (name == "log1p") return [scale](double t) { return scale * std::log1p(t); };
    if (name == "sqrt") return [scale](double t) { return scale * std::sqrt(t); };
    if (name == "linear") return [scale](double t) { return scale * t; };
    throw Error("time change: unknown name \"" + name + "\" (log1p|sqrt|linear)");
}

std::string formatDouble(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace callspace
