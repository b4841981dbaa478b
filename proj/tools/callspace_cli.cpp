#include "callspace/algebra.hpp"
#include "callspace/blackscholes.hpp"
#include "callspace/errors.hpp"
#include "callspace/io.hpp"
#include "callspace/peacock.hpp"
#include "callspace/surface.hpp"
#include "callspace/verify.hpp"
#include "callspace/zonoid.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <limits>

using nlohmann::json;
using namespace callspace;

namespace {

json loadJson(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

CallCurve loadCurve(const std::string& path) {
    CallCurve c = curveFromJson(loadJson(path));
    auto bad = validate(c);
    if (!bad.empty())
        throw InvalidCurve("curve in " + path + " violates \"" + bad.front().invariant + "\"");
    return c;
}

void emit(const json& j, const std::string& outPath) {
    if (outPath.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(outPath);
    if (!out) throw Error("cannot open output file: " + outPath);
    out << j.dump(2) << "\n";
}

void emitCsv(const std::string& header, const std::vector<std::vector<double>>& rows,
             const std::string& outPath) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!outPath.empty()) {
        file.open(outPath);
        if (!file) throw Error("cannot open output file: " + outPath);
        os = &file;
    }
    *os << header << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            *os << (i ? "," : "") << formatDouble(row[i]);
        *os << "\n";
    }
}

json suiteToJson(const SuiteReport& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"deviation", c.deviation},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    return json{{"suite", rep.suite}, {"checks", checks}, {"pass", rep.pass}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"call-price curve algebra"};
    app.require_subcommand(1);

    std::string curvePath, curve2Path, outPath, hatPath;
    std::string family = "normal", yfun = "log1p", kappaSpec = "0.1:10:50", tSpec, psSpec = "0:1:101";
    double kappa = 1.0, y = 1.0, price = 0.0, y1 = 1.0, y2 = 1.0, yscale = 1.0;
    double mu = 0.0, sigma = 1.0, ua = 0.0, ub = 1.0;
    long long paths = 100000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    int samples = 1000;
    bool seedSet = false;

    auto addDensityOpts = [&](CLI::App* cmd) {
        cmd->add_option("--family", family, "density family");
        cmd->add_option("--mu", mu);
        cmd->add_option("--sigma", sigma);
        cmd->add_option("--a", ua);
        cmd->add_option("--b", ub);
    };
    auto makeDensity = [&]() {
        return LogConcaveDensity::byName(family,
                                         {{"mu", mu}, {"sigma", sigma}, {"a", ua}, {"b", ub}});
    };

    auto* cmdPrice = app.add_subcommand("price", "Black-Scholes normalized call price");
    cmdPrice->add_option("--kappa", kappa)->required();
    cmdPrice->add_option("--y", y)->required();

    auto* cmdImplied = app.add_subcommand("implied", "implied total standard deviation");
    cmdImplied->add_option("--kappa", kappa)->required();
    cmdImplied->add_option("--price", price)->required();

    auto* cmdCompose = app.add_subcommand("compose", "binary operation of two curves");
    cmdCompose->add_option("--c1", curvePath)->required();
    cmdCompose->add_option("--c2", curve2Path)->required();
    cmdCompose->add_option("--out", outPath);

    auto* cmdInvolute = app.add_subcommand("involute", "put-call dual of a curve");
    cmdInvolute->add_option("--curve", curvePath)->required();
    cmdInvolute->add_option("--out", outPath);

    auto* cmdHat = app.add_subcommand("hat", "concave conjugate of a curve");
    cmdHat->add_option("--curve", curvePath)->required();
    cmdHat->add_option("--out", outPath);

    auto* cmdSurface = app.add_subcommand("surface", "implied volatility surface CSV");
    addDensityOpts(cmdSurface);
    cmdSurface->add_option("--yfun", yfun, "time change: log1p|sqrt|linear");
    cmdSurface->add_option("--yscale", yscale);
    cmdSurface->add_option("--kappas", kappaSpec);
    cmdSurface->add_option("--ts", tSpec)->required();
    cmdSurface->add_option("--out", outPath);

    auto* cmdGenerator = app.add_subcommand("generator", "semigroup generator samples");
    addDensityOpts(cmdGenerator);
    cmdGenerator->add_option("--ps", psSpec);
    cmdGenerator->add_option("--out", outPath);

    auto* cmdReconstruct = app.add_subcommand("reconstruct", "density from a generator");
    cmdReconstruct->add_option("--hatH", hatPath, "JSON with ps/values samples")->required();
    cmdReconstruct->add_option("--out", outPath);

    auto* cmdZonoid = app.add_subcommand("zonoid", "lift zonoid boundary CSV");
    cmdZonoid->add_option("--curve", curvePath)->required();
    cmdZonoid->add_option("--ps", psSpec);
    cmdZonoid->add_option("--out", outPath);

    auto* cmdPeacock = app.add_subcommand("peacock", "convex-order family checks");
    auto* cmdPeaVerify = cmdPeacock->add_subcommand("verify", "verify a surface family");
    cmdPeaVerify->add_option("--family", family);
    cmdPeaVerify->add_option("--yfun", yfun);
    cmdPeaVerify->add_option("--yscale", yscale);
    cmdPeaVerify->add_option("--ts", tSpec)->required();
    cmdPeaVerify->add_option("--kappas", kappaSpec);
    auto* cmdPeaSim = cmdPeacock->add_subcommand("simulate", "martingale Monte Carlo");
    cmdPeaSim->add_option("--paths", paths);
    cmdPeaSim->add_option("--seed", seed)->required();
    cmdPeaSim->add_option("--ts", tSpec)->required();
    cmdPeaSim->add_option("--threads", threads);
    cmdPeacock->require_subcommand(1);

    auto* cmdVerify = app.add_subcommand("verify", "run a named verification suite");
    std::string suiteName;
    cmdVerify->add_option("suite", suiteName,
                          "semigroup|involution|isomorphism|zonoid|peacock|inequality")
        ->required();
    cmdVerify->add_option("--family", family);
    cmdVerify->add_option("--y1", y1);
    cmdVerify->add_option("--y2", y2);
    cmdVerify->add_option("--kappas", kappaSpec);
    cmdVerify->add_option("--samples", samples);
    auto* seedOpt = cmdVerify->add_option("--seed", seed, "required for randomized suites");
    cmdVerify->add_option("--yfun", yfun);
    cmdVerify->add_option("--yscale", yscale);
    cmdVerify->add_option("--ts", tSpec);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*cmdPrice) {
            emit(json{{"kappa", kappa}, {"y", y}, {"price", bs::callPrice(kappa, y)}}, "");
        } else if (*cmdImplied) {
            double iy = bs::impliedStdDev(kappa, price);
            json out{{"kappa", kappa}, {"price", price}};
            if (std::isinf(iy)) out["y"] = "inf";
            else out["y"] = iy;
            emit(out, "");
        } else if (*cmdCompose) {
            CallCurve c1 = loadCurve(curvePath);
            CallCurve c2 = loadCurve(curve2Path);
            emit(curveToJson(bullet(c1, c2)), outPath);
        } else if (*cmdInvolute) {
            emit(curveToJson(involute(loadCurve(curvePath))), outPath);
        } else if (*cmdHat) {
            emit(hatToJson(hat(loadCurve(curvePath))), outPath);
        } else if (*cmdSurface) {
            auto f = makeDensity();
            auto Y = timeChange(yfun, yscale);
            auto rows = impliedVolSurface(f, Y, parseGridSpec(kappaSpec), parseGridSpec(tSpec));
            std::vector<std::vector<double>> csv;
            for (const auto& r : rows) csv.push_back({r.kappa, r.t, r.price, r.impliedVol});
            emitCsv("kappa,t,price,implied_vol", csv, outPath);
        } else if (*cmdGenerator) {
            auto f = makeDensity();
            auto hatH = generatorHat(f);
            auto gp = generatorH(hatH);
            std::vector<double> ps = parseGridSpec(psSpec), values;
            for (double p : ps) values.push_back(hatH(p));
            emit(json{{"family", family},
                      {"ps", ps},
                      {"values", values},
                      {"a", gp.a},
                      {"b", gp.b}},
                 outPath);
        } else if (*cmdReconstruct) {
            json j = loadJson(hatPath);
            std::vector<double> ps = j.at("ps").get<std::vector<double>>();
            std::vector<double> values = j.at("values").get<std::vector<double>>();
            HatCurve sampled(HatCurve::Grid{ps, values});
            auto rec = reconstruct([sampled](double p) { return sampled(p); });
            if (rec.trivial) {
                emit(json{{"trivial", true}}, outPath);
            } else {
                const auto& f = *rec.density;
                std::vector<double> zs, pdfs, cdfs;
                for (int i = 1; i < 200; ++i) {
                    double z = f.quantile(i / 200.0);
                    zs.push_back(z);
                    pdfs.push_back(f.pdf(z));
                    cdfs.push_back(f.cdf(z));
                }
                emit(json{{"trivial", false}, {"z", zs}, {"pdf", pdfs}, {"cdf", cdfs}}, outPath);
            }
        } else if (*cmdZonoid) {
            CallCurve c = loadCurve(curvePath);
            LiftZonoid z = liftZonoidFromCurve(c, parseGridSpec(psSpec));
            std::vector<std::vector<double>> csv;
            for (size_t i = 0; i < z.ps.size(); ++i)
                csv.push_back({z.ps[i], z.lower[i], z.upper[i]});
            emitCsv("p,lower,upper", csv, outPath);
        } else if (*cmdPeaVerify) {
            PeacockFamily fam{LogConcaveDensity::byName(family), timeChange(yfun, yscale),
                              parseGridSpec(tSpec)};
            auto res = verifyPeacock(fam, parseGridSpec(kappaSpec));
            json out{{"family", family}, {"yfun", yfun}, {"pass", res.pass}};
            if (!res.pass) {
                out["bad_t"] = res.badT;
                out["bad_kappa"] = res.badKappa;
            }
            emit(out, "");
            return res.pass ? 0 : 1;
        } else if (*cmdPeaSim) {
            auto rep = gumbelMartingaleSim(parseGridSpec(tSpec), paths, seed, threads);
            json marginals = json::array(), increments = json::array();
            for (const auto& m : rep.marginals)
                marginals.push_back({{"t", m.t},
                                     {"mean", m.mean},
                                     {"se", m.se},
                                     {"ks", m.ks},
                                     {"ks_critical", m.ksCritical},
                                     {"pass", m.pass}});
            for (const auto& inc : rep.increments)
                increments.push_back({{"t1", inc.t1},
                                      {"t2", inc.t2},
                                      {"const", {{"stat", inc.statConst}, {"se", inc.seConst}}},
                                      {"linear", {{"stat", inc.statLinear}, {"se", inc.seLinear}}},
                                      {"indicator",
                                       {{"stat", inc.statIndicator}, {"se", inc.seIndicator}}},
                                      {"pass", inc.pass}});
            emit(json{{"n_paths", rep.nPaths},
                      {"marginals", marginals},
                      {"increments", increments},
                      {"pass", rep.pass}},
                 "");
            return rep.pass ? 0 : 1;
        } else if (*cmdVerify) {
            seedSet = seedOpt->count() > 0;
            bool randomized = suiteName == "involution" || suiteName == "isomorphism" ||
                              suiteName == "zonoid" || suiteName == "inequality";
            if (randomized && !seedSet)
                throw Error("suite \"" + suiteName + "\" is randomized; --seed is required");
            SuiteOptions opt;
            opt.family = family;
            opt.y1 = y1;
            opt.y2 = y2;
            opt.kappas = parseGridSpec(kappaSpec);
            opt.samples = samples;
            opt.seed = seed;
            opt.yfun = yfun;
            opt.yscale = yscale;
            if (!tSpec.empty()) opt.ts = parseGridSpec(tSpec);
            auto rep = runSuite(suiteName, opt);
            emit(suiteToJson(rep), "");
            return rep.pass ? 0 : 1;
        }
    } catch (const QuadratureFailure& e) {
        std::cerr << json{{"error", "QuadratureFailure"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const Error& e) {
        // map exception type names onto the error field
        std::string kind = "Error";
        if (dynamic_cast<const InvalidCurve*>(&e)) kind = "InvalidCurve";
        else if (dynamic_cast<const NotConcave*>(&e)) kind = "NotConcave";
        else if (dynamic_cast<const NonConcaveInput*>(&e)) kind = "NonConcaveInput";
        else if (dynamic_cast<const MeanExceedsOne*>(&e)) kind = "MeanExceedsOne";
        else if (dynamic_cast<const PriceBelowIntrinsic*>(&e)) kind = "PriceBelowIntrinsic";
        else if (dynamic_cast<const UnknownFamily*>(&e)) kind = "UnknownFamily";
        else if (dynamic_cast<const NotApplicable*>(&e)) kind = "NotApplicable";
        else if (dynamic_cast<const NotInC1*>(&e)) kind = "NotInC1";
        std::cerr << json{{"error", kind}, {"message", e.what()}}.dump() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << json{{"error", "InvalidInput"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
