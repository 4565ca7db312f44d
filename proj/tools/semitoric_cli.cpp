// semitoric: classify | invariants | scan | plot

#include "semitoric/catalog.hpp"
#include "semitoric/errors.hpp"
#include "semitoric/invariants.hpp"
#include "semitoric/parallel.hpp"
#include "semitoric/singularities.hpp"
#include "semitoric/svg.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

using namespace semitoric;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kIo = 1, kInvalid = 2, kNumerical = 3, kNearDegenerate = 4 };

struct Config {
  std::string family;
  std::map<std::string, std::optional<double>> param{{"rho1", {}}, {"rho2", {}}, {"R1", {}}, {"R2", {}},
                                                     {"t", {}},    {"s1", {}},   {"s2", {}}};
  double tolerance = 1e-7;
  int grid = 0;
  int samples = 0;
  std::string out;
  std::string format;
  int threads = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t seed = 1;

  std::string axis;
  double from = 0.0, to = 1.0;
  std::vector<int> eps;
  int shear = 0;
  int degree = 6;
  std::string kind = "image";
  std::vector<double> values;
  int hirzebruch_n = 1;
  double alpha = 1.0, beta = 1.0;
};

const std::map<std::string, std::vector<std::string>> kFamilyParams{
    {"cso", {"rho1", "rho2"}}, {"cam", {"R1", "R2", "t"}}, {"twoff", {"R1", "R2", "s1", "s2"}}};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double param(const Config& c, const std::string& key, double fallback) { return c.param.at(key).value_or(fallback); }

SystemInstance makeSystem(const Config& c) {
  const auto it = kFamilyParams.find(c.family);
  if (it == kFamilyParams.end()) throw ConfigError("unknown family '" + c.family + "' (expected cso, cam or twoff)");
  for (const auto& [key, value] : c.param) {
    if (value && std::find(it->second.begin(), it->second.end(), key) == it->second.end())
      throw ConfigError("parameter '" + key + "' does not belong to family " + c.family);
  }
  try {
    std::optional<SystemInstance> s;
    if (c.family == "cso") {
      s.emplace(CoupledSpinOscillator{param(c, "rho1", 1.0), param(c, "rho2", 1.0)});
    } else if (c.family == "cam") {
      s.emplace(CoupledAngularMomenta{param(c, "R1", 1.0), param(c, "R2", 1.0), param(c, "t", 0.5)});
    } else {
      s.emplace(TwoFocusFamily{param(c, "R1", 1.0), param(c, "R2", 2.0), param(c, "s1", 0.5), param(c, "s2", 0.5)});
    }
    validateParameters(*s);
    return *s;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

void requireFormat(Config& c, std::initializer_list<const char*> allowed) {
  if (c.format.empty()) c.format = *allowed.begin();
  for (const char* f : allowed)
    if (c.format == f) return;
  throw ConfigError("format '" + c.format + "' is not available for this command");
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open " + c.out);
  f << text;
  if (!f) throw std::ios_base::failure("cannot write " + c.out);
}

json parametersJson(const SystemInstance& s) {
  json p = json::object();
  for (const auto& [k, v] : s.parameters()) p[k] = v;
  return p;
}

ClassifyOptions classifyOptions(const Config& c) {
  ClassifyOptions o;
  o.tolerance = c.tolerance;
  return o;
}

// ---------------------------------------------------------------------------

int cmdClassify(Config& c) {
  requireFormat(c, {"json", "csv"});
  const SystemInstance s = makeSystem(c);
  RankZeroOptions search;
  search.seed = c.seed;
  const FocusFocusCensus census = countFocusFocus(s, search, classifyOptions(c));
  if (c.format == "csv") {
    std::ostringstream os;
    const auto dim = s.manifold().ambientDim();
    os << "kind,lambda,eta";
    for (int k = 0; k < dim; ++k) os << ",x" << k;
    os << "\n";
    for (const auto& r : census.records) {
      os << kindName(r.kind) << ',' << fmt(r.lambda) << ',' << fmt(r.eta);
      for (int k = 0; k < dim; ++k) os << ',' << fmt(r.point.coords[k]);
      os << "\n";
    }
    emit(c, os.str());
    return kOk;
  }
  json records = json::array();
  for (const auto& r : census.records) {
    json ev = json::array();
    for (const auto& z : r.eigen_data) ev.push_back({z.real(), z.imag()});
    std::vector<double> x(r.point.coords.data(), r.point.coords.data() + r.point.coords.size());
    records.push_back({{"kind", kindName(r.kind)},
                       {"point", x},
                       {"lambda", r.lambda},
                       {"eta", r.eta},
                       {"eigenvalues", ev},
                       {"regularizer", r.regularizer},
                       {"pairing_residual", r.pairing_residual}});
  }
  json doc{{"schema", "semitoric.classify/1"},
           {"family", s.familyName()},
           {"parameters", parametersJson(s)},
           {"n_ff", census.n_ff},
           {"records", records},
           {"diagnostics", census.diagnostics}};
  emit(c, doc.dump(2) + "\n");
  return kOk;
}

int cmdInvariants(Config& c) {
  requireFormat(c, {"json"});
  const SystemInstance s = makeSystem(c);
  InvariantOptions opt;
  opt.nf_degree = c.degree;
  opt.signs = c.eps;
  opt.shear = c.shear;
  opt.taylor.threads = c.threads;
  if (c.samples > 0) opt.polygon_samples = c.samples;
  for (int e : c.eps)
    if (e != 1 && e != -1) throw ConfigError("--eps entries must be +1 or -1");
  if (c.degree < 4 || c.degree > 12) throw ConfigError("--degree must lie in [4, 12]");
  json doc;
  try {
    doc = computeInvariants(s, opt);
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  emit(c, doc.dump(2) + "\n");
  return kOk;
}

SystemFactory axisFactory(const Config& c, const SystemInstance& base) {
  const std::string& a = c.axis;
  if (c.family == "cam" && (a == "t" || a == "R")) {
    const auto p = std::get<CoupledAngularMomenta>(base.family());
    if (a == "t") return [p](double v) { return SystemInstance(CoupledAngularMomenta{p.R1, p.R2, v}); };
    return [p](double v) { return SystemInstance(CoupledAngularMomenta{p.R1, v, p.t}); };
  }
  if (c.family == "twoff" && (a == "s1" || a == "s2")) {
    const auto p = std::get<TwoFocusFamily>(base.family());
    if (a == "s1") return [p](double v) { return SystemInstance(TwoFocusFamily{p.R1, p.R2, v, p.s2}); };
    return [p](double v) { return SystemInstance(TwoFocusFamily{p.R1, p.R2, p.s1, v}); };
  }
  throw ConfigError("axis '" + a + "' is not available for family " + c.family +
                    " (cam: t, R; twoff: s1, s2, or no axis for the region map)");
}

int axisScan(Config& c, const SystemInstance& base) {
  const SystemFactory make = axisFactory(c, base);
  const int n = c.samples > 0 ? c.samples : 200;
  if (n < 16) throw ConfigError("-n must be at least 16 for an axis scan");
  if (!(c.to > c.from)) throw ConfigError("--to must exceed --from");
  for (double v : {c.from, c.to}) {
    try {
      validateParameters(make(v));
    } catch (const PreconditionError& e) {
      throw ConfigError(e.what());
    }
  }
  RankZeroOptions search{.random_starts = 0, .seed = c.seed};
  std::vector<double> values(n + 1);
  std::vector<int> counts(n + 1);
  for (int k = 0; k <= n; ++k) values[k] = c.from + (c.to - c.from) * k / n;
  detail::parallelFor(values.size(), c.threads, [&](std::size_t k) {
    const SystemInstance s = make(values[k]);
    counts[k] = countFocusFocus(s, search, classifyOptions(c)).n_ff;
  });
  const auto transitions = transitionScan(make, c.from, c.to, n, 1e-10, search);
  auto ffCount = [](const std::vector<SingularityKind>& kinds) {
    return static_cast<int>(std::count(kinds.begin(), kinds.end(), SingularityKind::FocusFocus));
  };

  if (c.format == "csv") {
    std::ostringstream os;
    os << "kind," << c.axis << ",n_ff\n";
    for (int k = 0; k <= n; ++k) os << "sample," << fmt(values[k]) << ',' << counts[k] << "\n";
    for (const auto& t : transitions) os << "boundary," << fmt(t.value) << ',' << ffCount(t.above) << "\n";
    emit(c, os.str());
  } else if (c.format == "json") {
    json samples = json::array(), bounds = json::array();
    for (int k = 0; k <= n; ++k) samples.push_back({{"value", values[k]}, {"n_ff", counts[k]}});
    for (const auto& t : transitions) {
      json below = json::array(), above = json::array();
      for (auto k : t.below) below.push_back(kindName(k));
      for (auto k : t.above) above.push_back(kindName(k));
      bounds.push_back({{"value", t.value}, {"below", below}, {"above", above}});
    }
    json doc{{"schema", "semitoric.scan/1"},     {"family", base.familyName()},
             {"parameters", parametersJson(base)}, {"axis", c.axis},
             {"samples", samples},                 {"transitions", bounds}};
    emit(c, doc.dump(2) + "\n");
  } else {
    int top = 1;
    for (int v : counts) top = std::max(top, v);
    SvgCanvas svg(480, 240, {c.from, -0.25}, {c.to, top + 0.25});
    std::vector<Eigen::Vector2d> steps;
    for (int k = 0; k <= n; ++k) steps.push_back({values[k], static_cast<double>(counts[k])});
    svg.polyline(steps, "#000000");
    for (const auto& t : transitions) svg.line({t.value, -0.25}, {t.value, top + 0.25}, "#b00000", true);
    emit(c, svg.str());
  }
  return kOk;
}

int cmdScan(Config& c) {
  requireFormat(c, {"csv", "json", "svg"});
  const SystemInstance base = makeSystem(c);
  if (!c.axis.empty()) return axisScan(c, base);
  if (c.family != "twoff") throw ConfigError("scan without --axis needs --family twoff (region map)");
  const auto p = std::get<TwoFocusFamily>(base.family());
  const int grid = c.grid > 0 ? c.grid : (c.samples > 0 ? c.samples : 64);
  if (grid < 2) throw ConfigError("--grid must be at least 2");
  RankZeroOptions search{.random_starts = 0, .seed = c.seed};
  const RegionMap map = regionMap(p.R1, p.R2, grid, c.threads, search);
  if (c.format == "csv") {
    emit(c, map.toCsv());
  } else if (c.format == "svg") {
    emit(c, map.toSvg());
  } else {
    json boundary = json::array();
    for (const auto& b : map.boundary) boundary.push_back({b.x(), b.y()});
    json doc{{"schema", "semitoric.regionmap/1"},
             {"R1", p.R1},
             {"R2", p.R2},
             {"grid", grid},
             {"s1_axis", map.s1_axis},
             {"s2_axis", map.s2_axis},
             {"counts", map.counts},
             {"boundary", boundary}};
    emit(c, doc.dump(2) + "\n");
  }
  return kOk;
}

std::string hirzebruchSvg(const Config& c) {
  if (c.hirzebruch_n < 0) throw ConfigError("--hirzebruch-n must be non-negative");
  std::vector<Eigen::Vector2d> pts;
  try {
    pts = hirzebruchToricPolygon(c.hirzebruch_n, c.alpha, c.beta);
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  Eigen::Vector2d lo = pts.front(), hi = pts.front();
  for (const auto& p : pts) lo = lo.cwiseMin(p), hi = hi.cwiseMax(p);
  const Eigen::Vector2d pad = 0.05 * (hi - lo);
  SvgCanvas svg(480, 360, lo - pad, hi + pad);
  svg.polygon(pts, "#e6e6e6", "#000000");
  return svg.str();
}

int cmdPlot(Config& c) {
  requireFormat(c, {"svg"});
  if (c.kind == "hirzebruch") {
    emit(c, hirzebruchSvg(c));
    return kOk;
  }
  const SystemInstance base = makeSystem(c);
  if (c.kind == "polygon") {
    const auto census = countFocusFocus(base, RankZeroOptions{.random_starts = 0, .seed = c.seed});
    requireNonDegenerate(base, census);
    CartographicChart chart(base, census, c.eps);
    emit(c, polygonSvg(cartographicPolygon(chart).sheared(c.shear)));
    return kOk;
  }
  if (c.kind != "image") throw ConfigError("--kind must be image, polygon or hirzebruch");
  const int samples = c.samples > 0 ? c.samples : 200;
  if (c.values.empty()) {
    emit(c, momentumImageSvg(momentumImage(base, samples)));
    return kOk;
  }
  if (c.out.empty()) throw ConfigError("a sweep over --values writes several files and needs --out DIR");
  const SystemFactory make = axisFactory(c, base);
  std::filesystem::create_directories(c.out);
  for (std::size_t k = 0; k < c.values.size(); ++k) {
    SystemInstance s = make(c.values[k]);
    try {
      validateParameters(s);
    } catch (const PreconditionError& e) {
      throw ConfigError(e.what());
    }
    Config one = c;
    one.out = (std::filesystem::path(c.out) / ("image_" + c.axis + "_" + std::to_string(k) + ".svg")).string();
    emit(one, momentumImageSvg(momentumImage(s, samples)));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semitoric invariants of the spin-oscillator, coupled angular momenta and two-focus families"};
  app.set_version_flag("--version", std::string(SEMITORIC_VERSION));
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value file");
  app.allow_config_extras(CLI::config_extras_mode::error);
  Config c;

  app.add_option("--family", c.family, "cso | cam | twoff");
  for (auto& [key, value] : c.param) app.add_option("--" + key, value, "Family parameter " + key);
  app.add_option("--tolerance", c.tolerance, "Relative tolerance of the rank-0 classification")
      ->check(CLI::PositiveNumber);
  app.add_option("--grid", c.grid, "Grid size of the two-focus region map")->check(CLI::PositiveNumber);
  app.add_option("-n,--samples", c.samples, "Samples along a scan axis or image")->check(CLI::PositiveNumber);
  app.add_option("--out", c.out, "Output path (stdout if omitted)");
  app.add_option("--format", c.format, "json | csv | svg")->check(CLI::IsMember({"json", "csv", "svg"}));
  app.add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed, "Seed of the multistart rank-0 search");
  app.add_option("--axis", c.axis, "Scan or sweep axis: t, R (cam); s1, s2 (twoff)");
  app.add_option("--from", c.from, "Start of the scan axis");
  app.add_option("--to", c.to, "End of the scan axis");
  app.add_option("--eps", c.eps, "Cut signs, one per focus-focus point")->delimiter(',');
  app.add_option("--shear", c.shear, "Apply T^m to the polygon representative");
  app.add_option("--degree", c.degree, "Birkhoff normal form degree");
  app.add_option("--kind", c.kind, "Plot kind: image | polygon | hirzebruch");
  app.add_option("--values", c.values, "Axis values of an image sweep")->delimiter(',');
  app.add_option("--hirzebruch-n", c.hirzebruch_n, "Hirzebruch index n");
  app.add_option("--alpha", c.alpha, "Hirzebruch α");
  app.add_option("--beta", c.beta, "Hirzebruch β");

  auto* classify = app.add_subcommand("classify", "Rank-0 points and their Williamson types");
  auto* invariants = app.add_subcommand("invariants", "All five semitoric invariants as JSON");
  auto* scan = app.add_subcommand("scan", "Transition scan along an axis or the two-focus region map");
  auto* plot = app.add_subcommand("plot", "Momentum images and polygon representatives as SVG");
  for (auto* sub : {classify, invariants, scan, plot}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*classify) return cmdClassify(c);
    if (*invariants) return cmdInvariants(c);
    if (*scan) return cmdScan(c);
    return cmdPlot(c);
  } catch (const NearDegenerateError& e) {
    std::cerr << "near-degenerate: " << e.what() << "\n";
    return kNearDegenerate;
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}
