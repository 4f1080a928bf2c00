// maxpsh: evaluate maximal functions, metrics and geodesic charts of the
// catalog models, run verification suites, and dump CSV slices.
//
// Exit codes: 0 pass, 1 verification failure, 2 usage/config error, 3 domain error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maxpsh/maxpsh.hpp"
#include "maxpsh/spec_io.hpp"

using namespace maxpsh;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kDomain = 3 };

// Configuration errors detected after parsing (bad indices, unknown tolerance
// names, suites that do not apply to the model).
struct UsageError : Error {
  using Error::Error;
};

struct RunConfig {
  std::string model_path;
  std::uint64_t seed = 42;
  int samples = 1000;
  double h = 1e-3;
  std::vector<std::string> tol_args;
  std::map<std::string, double> tol;
  std::string out;
  std::string field = "model";
};

const std::map<std::string, double> kDefaultTolerances{
    {"psh", 1e-6},          {"ma", 1e-4},       {"tube-levi", 1e-3}, {"gauge-derivatives", 1e-3},
    {"maximality", 1e-10},  {"geodesics", 1e-10}, {"schwarz", 1e-12}, {"metric", 1e-6},
};

void parse_tolerances(RunConfig& cfg) {
  cfg.tol = kDefaultTolerances;
  for (const std::string& arg : cfg.tol_args) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects NAME=VALUE, got '" + arg + "'");
    const std::string name = arg.substr(0, eq);
    if (!kDefaultTolerances.count(name)) throw UsageError("--tol: unknown tolerance '" + name + "'");
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(arg.substr(eq + 1), &used);
      if (used != arg.size() - eq - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw UsageError("--tol: cannot parse value in '" + arg + "'");
    }
    if (!(v > 0.0) || !std::isfinite(v)) throw UsageError("--tol: tolerances must be positive");
    cfg.tol[name] = v;
  }
}

RealVector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const RealVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Every field the CLI can verify. "model" is u itself; the other two are
// counter-fields that the suites are expected to reject.
Field make_field(const Model& model, const std::string& kind) {
  if (kind == "model") return u_field(model);
  if (kind == "norm-squared") {
    return [model](const ComplexPoint& z) {
      if (!member(model, z)) throw DomainError("norm-squared field: point outside the model");
      return z.x.squaredNorm() + z.y.squaredNorm();
    };
  }
  if (kind == "corrupted") {
    return [model](const ComplexPoint& z) { return 0.99 * u_max(model, z); };
  }
  throw UsageError("--field must be one of model, norm-squared, corrupted");
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

ComplexPoint read_point(const Model& model, const std::vector<double>& re, const std::vector<double>& im) {
  const auto n = static_cast<std::size_t>(model.dim());
  std::vector<double> imag = im.empty() ? std::vector<double>(n, 0.0) : im;
  if (re.size() != n || imag.size() != n) {
    throw UsageError("point must have " + std::to_string(n) + " real and imaginary coordinates");
  }
  return {to_vector(re), to_vector(imag)};
}

// ---- eval -------------------------------------------------------------------

int cmd_eval(const RunConfig& cfg, const Model& model, const std::vector<double>& re, const std::vector<double>& im) {
  const ComplexPoint z = read_point(model, re, im);
  json j;
  const bool in = member(model, z);
  j["member"] = in;
  if (const auto* s = std::get_if<StripTube>(&model.variant())) {
    j["p"] = s->gauge(z.y);
    j["p_conj"] = s->gauge(-z.y);
  } else if (const auto* e = std::get_if<EllipticTube>(&model.variant())) {
    if (e->body.contains(z.x)) {
      const TubeGauges g = tube_gauges(e->body, z);
      j["p"] = g.p;
      j["p_conj"] = g.p_conj;
    }
  }
  if (!in) {
    Output(cfg.out).stream() << j.dump() << '\n';
    std::cerr << "maxpsh: point is not a member of " << model.name() << '\n';
    return kDomain;
  }
  j["u"] = u_max(model, z);
  Output(cfg.out).stream() << j.dump() << '\n';
  return kPass;
}

// ---- metric -----------------------------------------------------------------

int cmd_metric(const RunConfig& cfg, const Model& model, const std::vector<double>& xv, const std::vector<double>& xiv) {
  const auto n = static_cast<std::size_t>(model.dim());
  if (xv.size() != n || xiv.size() != n) throw UsageError("x and xi must have " + std::to_string(n) + " coordinates");
  const RealVector x = to_vector(xv), xi = to_vector(xiv);
  if (!in_center(model, x)) throw DomainError("x is not in the center of " + model.name());
  json j;
  j["E_closed"] = metric_E(model, x, xi);
  j["E_fd"] = metric_E_fd(model, x, xi);
  j["F_upper"] = xi.isZero(0.0) ? 0.0 : f_upper_bound(model, x, xi).a;
  const double gap = std::abs(j["E_closed"].get<double>() - j["E_fd"].get<double>());
  if (gap > cfg.tol.at("metric")) std::cerr << "maxpsh: warning: |E_closed - E_fd| = " << gap << '\n';
  Output(cfg.out).stream() << j.dump() << '\n';
  return kPass;
}

// ---- geodesic ---------------------------------------------------------------

const ConvexBody& chart_body(const Model& model, std::optional<ConvexBody>& storage) {
  if (model.is<Disc1D>()) {
    storage = ConvexBody::interval(-1.0, 1.0);
    return *storage;
  }
  if (const auto* e = std::get_if<EllipticTube>(&model.variant())) return e->body;
  throw UsageError("geodesic charts need an elliptic tube or disc1d model");
}

int cmd_geodesic(const RunConfig& cfg, const Model& model, const std::vector<double>& re, const std::vector<double>& im,
                 const std::vector<double>& zeta) {
  const ComplexPoint z = read_point(model, re, im);
  std::optional<ConvexBody> storage;
  const GeodesicChart c = chart(chart_body(model, storage), z);
  json j;
  j["t1"] = c.t1;
  j["t2"] = c.t2;
  j["x1"] = detail::vector_to_json(c.x1);
  j["x2"] = detail::vector_to_json(c.x2);
  j["zeta0"] = {c.zeta0.real(), c.zeta0.imag()};
  j["reconstruction_residual"] = reconstruction_residual(c);
  j["boundary_residual"] = boundary_residual(c);
  if (!zeta.empty()) {
    if (zeta.size() != 2) throw UsageError("--zeta expects RE,IM");
    const ComplexScalar w(zeta[0], zeta[1]);
    const ComplexPoint fz = disc_geodesic_eval(c, w);
    j["f"] = point_to_json(fz);
    j["u"] = u_max(model, fz);
    j["abs_im_arctanh"] = std::abs(arctanh(w).imag());
  }
  Output(cfg.out).stream() << j.dump() << '\n';
  return kPass;
}

// ---- verify -----------------------------------------------------------------

bool has_c2_body(const Model& model) { return model.body() != nullptr && model.body()->has_c2_boundary(); }

// Finite-difference Levi checks need u to be C2 off the center: 1-D models and
// tubes over C2 bodies. Polytope tubes in dimension >= 2 have kinks.
bool fd_applicable(const Model& model) {
  return model.body() == nullptr || model.dim() == 1 || model.body()->has_c2_boundary();
}

bool has_chart(const Model& model) { return model.is<Disc1D>() || model.is<EllipticTube>(); }

// Center points and directions for suites that walk vertical lines x + i t xi.
std::pair<RealVector, RealVector> sample_line(const Model& model, std::uint64_t seed, std::uint64_t k) {
  SampleStream rng(seed, k);
  RealVector x = sample_center(model, rng);
  RealVector xi = rng.direction(model.dim());
  return {std::move(x), std::move(xi)};
}

CheckReport suite_tube_levi(const RunConfig& cfg, const Model& model) {
  if (!has_c2_body(model)) throw UsageError("tube-levi needs a tube over a C2 body (polytopes and 1-D models are not supported)");
  CheckReport rep{"tube-levi", model.name(), cfg.samples, cfg.h, cfg.tol.at("tube-levi"), {}, 0.0, true};
  const PointSampler sample = safe_sampler(model, cfg.seed, cfg.h);
  for (int k = 0; k < cfg.samples; ++k) {
    ComplexPoint z = sample(static_cast<std::uint64_t>(k));
    const double r = verify_tube_levi(model, z, cfg.h);
    if (r > rep.worst_value || k == 0) {
      rep.worst_value = r;
      rep.worst_point = z;
    }
  }
  rep.pass = rep.worst_value <= rep.tol;
  return rep;
}

CheckReport suite_gauge_derivatives(const RunConfig& cfg, const Model& model) {
  if (!has_c2_body(model)) throw UsageError("gauge-derivatives needs a C2 body (polytopes and 1-D models are not supported)");
  const ConvexBody& body = *model.body();
  const Model tube = Model::elliptic_tube(body);
  CheckReport rep{"gauge-derivatives", model.name(), cfg.samples, cfg.h, cfg.tol.at("gauge-derivatives"), {}, 0.0, true};
  const PointSampler sample = safe_sampler(tube, cfg.seed, cfg.h);
  for (int k = 0; k < cfg.samples; ++k) {
    ComplexPoint z = sample(static_cast<std::uint64_t>(k));
    const double r = verify_gauge_derivative_identities(body, z, cfg.h).max();
    if (r > rep.worst_value || k == 0) {
      rep.worst_value = r;
      rep.worst_point = z;
    }
  }
  rep.pass = rep.worst_value <= rep.tol;
  return rep;
}

CheckReport suite_maximality(const RunConfig& cfg, const Model& model, const Field& u) {
  const int count = 50;
  CheckReport rep{"maximality", model.name(), cfg.samples, 0.0, cfg.tol.at("maximality"), {}, 0.0, true};
  bool first = true;
  for (const Competitor& w : generate_competitors(model, count, cfg.seed)) {
    const Comparison c = compare(model, u, w, cfg.samples, cfg.seed);
    if (first || c.max_violation > rep.worst_value) {
      rep.worst_value = c.max_violation;
      rep.worst_point = c.worst_point;
      first = false;
    }
  }
  rep.pass = rep.worst_value <= rep.tol;
  return rep;
}

CheckReport suite_geodesics(const RunConfig& cfg, const Model& model, const Field& u) {
  if (!has_chart(model)) throw UsageError("geodesics needs an elliptic tube or disc1d model");
  std::optional<ConvexBody> storage;
  const ConvexBody& body = chart_body(model, storage);
  const Model tube = Model::elliptic_tube(body);
  const int charts = 10;
  CheckReport rep{"geodesics", model.name(), cfg.samples, 0.0, cfg.tol.at("geodesics"), {}, 0.0, true};
  for (int k = 0; k < charts; ++k) {
    ComplexPoint z;
    for (std::uint64_t attempt = 0;; ++attempt) {
      SampleStream rng(cfg.seed ^ 0x9e0de51c5ULL, static_cast<std::uint64_t>(k) * 1000u + attempt);
      z = sample_member(tube, rng, 0.95);
      if (!z.y.isZero(0.0)) break;
    }
    const GeodesicChart c = chart(body, z);
    double worst = reconstruction_residual(c);
    for (int s = 0; s < cfg.samples; ++s) {
      SampleStream rng(cfg.seed + static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(s));
      const ComplexScalar zeta = sample_disc(rng, 0.95);
      worst = std::max(worst, std::abs(u(disc_geodesic_eval(c, zeta)) - std::abs(arctanh(zeta).imag())));
    }
    if (worst > rep.worst_value || k == 0) {
      rep.worst_value = worst;
      rep.worst_point = z;
    }
  }
  rep.pass = rep.worst_value <= rep.tol;
  return rep;
}

// u(x + i t xi) against the Schwarz bound (pi/4) t E / (pi/4) on the strip
// 0 < t E < pi/4, for seeded vertical lines.
CheckReport suite_schwarz(const RunConfig& cfg, const Model& model, const Field& u) {
  const int lines = std::max(1, cfg.samples / 50);
  CheckReport rep{"schwarz", model.name(), lines, 0.0, cfg.tol.at("schwarz"), {}, -std::numeric_limits<double>::infinity(), true};
  for (int k = 0; k < lines; ++k) {
    const auto [x, xi] = sample_line(model, cfg.seed, static_cast<std::uint64_t>(k));
    const double e = metric_E(model, x, xi);
    if (!(e > 0.0)) continue;
    std::vector<SchwarzSample> samples;
    std::vector<ComplexPoint> points;
    for (int s = 1; s < 50; ++s) {
      const double t = (s / 50.0) * kQuarterPi / e;
      const ComplexPoint z{x, t * xi};
      if (!member(model, z)) break;
      const double value = u(z);
      if (!(value >= 0.0 && value < kQuarterPi)) {
        rep.worst_value = std::numeric_limits<double>::infinity();
        rep.worst_point = z;
        break;
      }
      samples.push_back({{0.0, t * e}, value});
      points.push_back(z);
    }
    if (samples.empty()) continue;
    const SchwarzReport r = schwarz_bound_check(samples, kQuarterPi, kQuarterPi);
    if (r.max_excess > rep.worst_value) {
      rep.worst_value = r.max_excess;
      rep.worst_point = points[r.worst_index];
    }
  }
  rep.pass = rep.worst_value <= rep.tol;
  return rep;
}

CheckReport run_suite(const RunConfig& cfg, const Model& model, const Field& u, const std::string& suite) {
  if ((suite == "psh" || suite == "ma") && !fd_applicable(model)) {
    throw UsageError(suite + " needs a smooth model (polytope tubes in dimension >= 2 are not C2)");
  }
  if (suite == "psh") {
    return verify_psh(u, safe_sampler(model, cfg.seed, cfg.h), cfg.samples, cfg.h, cfg.tol.at("psh"), model.name());
  }
  if (suite == "ma") {
    return verify_ma_degenerate(u, safe_sampler(model, cfg.seed, cfg.h), cfg.samples, cfg.h, cfg.tol.at("ma"), model.name());
  }
  if (suite == "tube-levi") return suite_tube_levi(cfg, model);
  if (suite == "gauge-derivatives") return suite_gauge_derivatives(cfg, model);
  if (suite == "maximality") return suite_maximality(cfg, model, u);
  if (suite == "geodesics") return suite_geodesics(cfg, model, u);
  if (suite == "schwarz") return suite_schwarz(cfg, model, u);
  throw UsageError("unknown suite " + suite);
}

int cmd_verify(const RunConfig& cfg, const Model& model, const std::string& suite) {
  const Field u = make_field(model, cfg.field);
  std::vector<std::string> suites;
  std::vector<std::string> skipped;
  if (suite == "all") {
    for (const char* s : {"psh", "ma", "tube-levi", "gauge-derivatives", "maximality", "geodesics", "schwarz"}) {
      const std::string name = s;
      const bool c2 = name == "tube-levi" || name == "gauge-derivatives";
      const bool fd = name == "psh" || name == "ma";
      if ((c2 && !has_c2_body(model)) || (fd && !fd_applicable(model)) || (name == "geodesics" && !has_chart(model))) {
        skipped.push_back(name);
      } else {
        suites.push_back(name);
      }
    }
  } else {
    suites.push_back(suite);
  }
  json doc;
  doc["suite"] = suite;
  doc["model"] = model.name();
  doc["field"] = cfg.field;
  doc["seed"] = cfg.seed;
  doc["checks"] = json::array();
  bool pass = true;
  for (const std::string& s : suites) {
    const CheckReport r = run_suite(cfg, model, u, s);
    pass = pass && r.pass;
    doc["checks"].push_back(report_to_json(r));
  }
  doc["skipped"] = skipped;
  doc["pass"] = pass;
  Output(cfg.out).stream() << std::setprecision(17) << doc.dump(2) << '\n';
  return pass ? kPass : kFail;
}

// ---- slice ------------------------------------------------------------------

int cmd_slice(const RunConfig& cfg, const Model& model, const std::vector<int>& plane, const std::vector<double>& center,
              double half_width, int resolution) {
  const Eigen::Index n = model.dim();
  if (plane.size() != 2) throw UsageError("--plane expects two indices I,J");
  for (int idx : plane) {
    if (idx < 0 || idx >= 2 * n) throw UsageError("--plane indices must lie in [0, " + std::to_string(2 * n) + ")");
  }
  if (plane[0] == plane[1]) throw UsageError("--plane indices must differ");
  if (plane[0] < n && plane[1] < n) throw UsageError("--plane needs at least one imaginary coordinate (index >= n)");
  if (!(half_width > 0.0)) throw UsageError("--half-width must be positive");
  if (resolution < 0) throw UsageError("--resolution must be non-negative");
  RealVector c = RealVector::Zero(2 * n);
  if (!center.empty()) {
    if (static_cast<Eigen::Index>(center.size()) != 2 * n) throw UsageError("--center expects 2n coordinates (real parts, then imaginary)");
    c = to_vector(center);
  }
  std::ostream& os = Output(cfg.out).stream();
  os << std::setprecision(17);
  const double step = resolution == 0 ? 0.0 : 2.0 * half_width / resolution;
  for (int a = 0; a <= resolution; ++a) {
    for (int b = 0; b <= resolution; ++b) {
      RealVector w = c;
      const double c1 = resolution == 0 ? c(plane[0]) : c(plane[0]) - half_width + a * step;
      const double c2 = resolution == 0 ? c(plane[1]) : c(plane[1]) - half_width + b * step;
      w(plane[0]) = c1;
      w(plane[1]) = c2;
      const ComplexPoint z{w.head(n), w.tail(n)};
      os << c1 << ',' << c2 << ',';
      if (member(model, z)) {
        os << "1," << u_max(model, z) << '\n';
      } else {
        os << "0,\n";
      }
    }
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maxpsh: maximal plurisubharmonic models and their verification"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--model", cfg.model_path, "Model spec (JSON)")->required();
  app.add_option("--seed", cfg.seed, "Seed of the sample stream")->capture_default_str();
  app.add_option("--samples", cfg.samples, "Samples per check")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--step", cfg.h, "Finite-difference step")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--tol", cfg.tol_args, "Tolerance override NAME=VALUE (repeatable)");
  app.add_option("--out", cfg.out, "Write output here instead of stdout");

  std::vector<double> re, im, xv, xiv, zeta, center;
  std::vector<int> plane;
  std::string suite;
  double half_width = 1.0;
  int resolution = 100;

  auto* eval = app.add_subcommand("eval", "Membership, u and the gauges at a point");
  eval->add_option("--re", re, "Real part")->delimiter(',')->required();
  eval->add_option("--im", im, "Imaginary part")->delimiter(',');

  auto* metric = app.add_subcommand("metric", "E closed form, E by finite differences, and the disc bound F");
  metric->add_option("--x", xv, "Base point in the center")->delimiter(',')->required();
  metric->add_option("--xi", xiv, "Direction")->delimiter(',')->required();

  auto* geodesic = app.add_subcommand("geodesic", "Extremal disc chart through a point");
  geodesic->add_option("--re", re, "Real part")->delimiter(',')->required();
  geodesic->add_option("--im", im, "Imaginary part")->delimiter(',')->required();
  geodesic->add_option("--zeta", zeta, "Evaluate the disc at RE,IM")->delimiter(',');

  auto* verify = app.add_subcommand("verify", "Run a verification suite and print a JSON report");
  verify->add_option("suite", suite, "psh | ma | tube-levi | gauge-derivatives | maximality | geodesics | schwarz | all")
      ->required()
      ->check(CLI::IsMember({"psh", "ma", "tube-levi", "gauge-derivatives", "maximality", "geodesics", "schwarz", "all"}));
  verify->add_option("--field", cfg.field, "Field to verify: model | norm-squared | corrupted")->capture_default_str();

  auto* slice = app.add_subcommand("slice", "CSV grid of u over an affine 2-plane");
  slice->add_option("--plane", plane, "Coordinates I,J in [0, 2n); indices >= n are imaginary parts")
      ->delimiter(',')
      ->required();
  slice->add_option("--center", center, "Plane center (real parts, then imaginary)")->delimiter(',');
  slice->add_option("--half-width", half_width, "Half side of the grid")->capture_default_str();
  slice->add_option("--resolution", resolution, "Cells per side")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  Model model = Model::strip1d();
  try {
    parse_tolerances(cfg);
    model = load_model(cfg.model_path);
  } catch (const Error& e) {
    std::cerr << "maxpsh: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*eval) return cmd_eval(cfg, model, re, im);
    if (*metric) return cmd_metric(cfg, model, xv, xiv);
    if (*geodesic) return cmd_geodesic(cfg, model, re, im, zeta);
    if (*verify) return cmd_verify(cfg, model, suite);
    if (*slice) return cmd_slice(cfg, model, plane, center, half_width, resolution);
  } catch (const UsageError& e) {
    std::cerr << "maxpsh: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedError& e) {
    std::cerr << "maxpsh: " << e.what() << '\n';
    return kUsage;
  } catch (const DimensionError& e) {
    std::cerr << "maxpsh: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "maxpsh: " << e.what() << '\n';
    return kDomain;
  }
  return kUsage;
}
