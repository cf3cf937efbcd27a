#include "qcext/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "qcext/certify.hpp"
#include "qcext/format.hpp"
#include "qcext/hashing.hpp"
#include "qcext/hyperbolic.hpp"
#include "qcext/measure.hpp"
#include "qcext/parallel.hpp"

namespace qcext::cli {

namespace {

struct RunConfig {
  std::string spec;  // path or inline JSON
  std::string method = "default";
  int resolution = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format;
  unsigned threads = 0;

  // point / grid
  std::string x;
  std::string t;
  int grid = 0;
  double width = 2.0;
  std::string heights = "0.25,0.5,1,2";
  double fd_step = 1e-5;

  // samplers
  std::size_t pairs = 10000;
  std::size_t crossing = 0;
  std::size_t adversarial = 0;
  double radius = 400.0;
  std::string lift = "gaussian";
  std::size_t triples = 10000;
  std::size_t matrices = 10000;
  std::string dims = "2,3";
  double min_delta = 0.05;

  // measure
  bool lebesgue = false;
  int dim = 2;
  std::size_t centers = 20;
  std::string radii = "0.01,0.0630957344480193,0.398107170553497,2.51188643150958,15.8489319246111,100";
  double box = 10.0;
  double moment = 0.0;
  std::string normal;

  // hyperbolic / demos
  bool refined = false;
  std::size_t bl_pairs = 0;
  double theta1 = std::numbers::pi / 3;
  double theta2 = std::numbers::pi / 3;
  double exponent = 1.0;
  std::size_t demo_pairs = 0;
  std::size_t witness_pairs = 64;
};

class Violation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::MalformedSyntax, std::string(what) + ": cannot parse \"" + item + "\"");
    }
  }
  return out;
}

Eigen::VectorXd parse_vector(const std::string& text, const char* what) {
  const auto values = parse_list(text, what);
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

MapSpec load_spec(const std::string& source) {
  if (source.empty()) throw Error(ErrorKind::MalformedSyntax, "--spec is required");
  const auto first = source.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && source[first] == '{') return parse_map_spec(source);
  std::ifstream in(source);
  if (!in) throw Error(ErrorKind::MalformedSyntax, "cannot read spec file \"" + source + "\"");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_map_spec(buffer.str());
  } catch (const Error& e) {
    throw Error(e.kind(), source + ": " + e.what());
  }
}

QuadratureScheme make_scheme(const RunConfig& cfg, int dim) {
  if (cfg.method == "default" && cfg.resolution == 0) return default_scheme(dim, cfg.seed);
  const QuadratureMethod method =
      cfg.method == "default"
          ? (dim <= 3 ? QuadratureMethod::TensorHermite : QuadratureMethod::QuasiRandom)
          : quadrature_method_from_string(cfg.method);
  int resolution = cfg.resolution;
  if (resolution == 0) resolution = method == QuadratureMethod::TensorHermite ? 20 : (1 << 16);
  return build_scheme(dim, method, resolution, cfg.seed);
}

nlohmann::json metadata(const RunConfig& cfg, const std::string& command, const MapSpec* spec,
                        const QuadratureScheme* scheme) {
  nlohmann::json meta = {{"command", command}, {"seed", cfg.seed}};
  if (spec) {
    meta["spec"] = to_json(*spec);
    meta["spec_hash"] = hex_digest(canonical_text(*spec));
  }
  if (scheme) {
    meta["scheme"] = scheme_to_json(*scheme);
    meta["scheme_hash"] = scheme->hash();
  }
  return meta;
}

std::string csv_metadata(const nlohmann::json& meta) {
  std::string line = "# command=" + meta.at("command").get<std::string>();
  if (meta.contains("spec_hash")) line += " spec_hash=" + meta.at("spec_hash").get<std::string>();
  if (meta.contains("scheme")) {
    const auto& s = meta.at("scheme");
    line += " method=" + s.at("method").get<std::string>() +
            " resolution=" + std::to_string(s.at("resolution").get<int>());
  }
  if (meta.contains("scheme_hash")) line += " scheme_hash=" + meta.at("scheme_hash").get<std::string>();
  line += " seed=" + std::to_string(meta.at("seed").get<std::uint64_t>());
  return line + "\n";
}

class Emitter {
 public:
  Emitter(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  bool json() const { return cfg_.format == "json"; }

  void write(const std::string& text) {
    if (cfg_.out_path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream file(cfg_.out_path, std::ios::binary);
    if (!file) throw Error(ErrorKind::InvalidParameter, "cannot write \"" + cfg_.out_path + "\"");
    file << text;
  }

  void write_json(const nlohmann::json& doc) { write(doc.dump(2) + "\n"); }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
};

std::vector<HalfSpacePoint> points_from_options(const RunConfig& cfg, int dim) {
  if (cfg.grid > 0) return lattice_grid(dim, cfg.grid, cfg.width, parse_list(cfg.heights, "--heights"));
  if (cfg.x.empty() || cfg.t.empty()) {
    throw Error(ErrorKind::MalformedSyntax, "give --x and --t, or --grid");
  }
  const Eigen::VectorXd x = parse_vector(cfg.x, "--x");
  require_same_dim(dim, x.size(), "--x");
  std::vector<HalfSpacePoint> points;
  for (double t : parse_list(cfg.t, "--t")) points.push_back({x, t});
  return points;
}

// ---------------------------------------------------------------------------

void cmd_extend(const RunConfig& cfg, Emitter& emit) {
  const MapSpec spec = load_spec(cfg.spec);
  const ExtensionField field(spec, make_scheme(cfg, spec.dim()));
  const auto rows = extend_grid(field, points_from_options(cfg, spec.dim()));
  const auto meta = metadata(cfg, "extend", &spec, &field.scheme());
  if (emit.json()) {
    emit.write_json({{"meta", meta}, {"rows", grid_to_json(rows)}});
  } else {
    emit.write(csv_metadata(meta) + grid_to_csv(rows, spec.dim()));
  }
}

void cmd_jacobian(const RunConfig& cfg, Emitter& emit) {
  const MapSpec spec = load_spec(cfg.spec);
  const ExtensionField field(spec, make_scheme(cfg, spec.dim()));
  const auto points = points_from_options(cfg, spec.dim());
  const auto meta = metadata(cfg, "jacobian", &spec, &field.scheme());
  if (emit.json()) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& p : points) {
      const SquareMatrix df = extension_jacobian(field, p);
      const SquareMatrix fd = finite_difference_jacobian(
          [&](const Eigen::VectorXd& v) { return extend_lifted(field, v); }, p.lifted(), cfg.fd_step);
      items.push_back({{"x", to_json_array(p.base)},
                       {"t", p.height},
                       {"jacobian", to_json_matrix(df)},
                       {"finite_difference", to_json_matrix(fd)},
                       {"relative_error", (df - fd).norm() / df.norm()},
                       {"operator_norm", spectral_norm(df)}});
    }
    emit.write_json({{"meta", meta}, {"points", items}});
  } else {
    std::string text = csv_metadata(meta);
    for (const auto& p : points) {
      text += jacobian_to_csv(extension_jacobian(field, p), p, meta.at("spec_hash").get<std::string>(),
                              meta.at("scheme_hash").get<std::string>());
    }
    emit.write(text);
  }
}

void cmd_certify_delta(const RunConfig& cfg, Emitter& emit) {
  const MapSpec spec = load_spec(cfg.spec);
  PairSamplerConfig sampler;
  sampler.seed = cfg.seed;
  sampler.pairs = cfg.pairs;
  sampler.crossing_pairs = cfg.crossing;
  sampler.adversarial_pairs = cfg.adversarial;
  sampler.adversarial_radius = cfg.radius;

  std::optional<ExtensionField> field;
  PointMap map;
  int dim = spec.dim();
  if (cfg.lift == "none") {
    map = [&](const Eigen::VectorXd& x) { return evaluate_map(spec, x); };
  } else if (cfg.lift == "gaussian") {
    field.emplace(spec, make_scheme(cfg, spec.dim()));
    map = [&](const Eigen::VectorXd& v) { return extend_lifted(*field, v); };
    dim += 1;
  } else if (cfg.lift == "trivial") {
    map = [&](const Eigen::VectorXd& v) { return trivial_extension(spec, HalfSpacePoint::from_lifted(v)); };
    dim += 1;
  } else {
    throw Error(ErrorKind::MalformedSyntax, "--lift must be none, gaussian or trivial");
  }
  const DeltaCertificate cert = two_point_delta(map, dim, sampler);
  auto meta = metadata(cfg, "certify-delta", &spec, field ? &field->scheme() : nullptr);
  meta["lift"] = cfg.lift;
  emit.write_json({{"meta", meta}, {"certificate", to_json(cert)}});
  if (!(cert.delta_hat > 0.0)) throw Violation("sampled pair with non-positive monotonicity ratio");
}

void cmd_certify_qs(const RunConfig& cfg, Emitter& emit) {
  const MapSpec spec = load_spec(cfg.spec);
  TripleSamplerConfig sampler;
  sampler.seed = cfg.seed;
  sampler.triples = cfg.triples;
  const EtaProfile profile = quasisymmetry_profile(spec, sampler);
  const auto meta = metadata(cfg, "certify-qs", &spec, nullptr);
  if (emit.json()) {
    emit.write_json({{"meta", meta}, {"profile", to_json(profile)}});
  } else {
    const std::string table = profile_to_csv(profile);
    emit.write(csv_metadata(meta) + table.substr(table.find('\n') + 1));
  }
}

void cmd_claim_check(const RunConfig& cfg, Emitter& emit) {
  ClaimCheckConfig config;
  config.matrices_per_dim = cfg.matrices;
  config.seed = cfg.seed;
  config.min_delta = cfg.min_delta;
  config.dims.clear();
  for (double d : parse_list(cfg.dims, "--dims")) config.dims.push_back(static_cast<int>(d));
  const ClaimCheckReport report = run_claim_check(config);
  emit.write_json({{"meta", metadata(cfg, "claim-check", nullptr, nullptr)}, {"report", to_json(report)}});
  if (report.total_violations() > 0) throw Violation("claim violated by a sampled matrix");
}

Density density_from_options(const RunConfig& cfg, std::optional<MapSpec>& spec) {
  if (cfg.lebesgue) return lebesgue_density(cfg.dim);
  spec = load_spec(cfg.spec);
  return jacobian_norm_density(*spec);
}

void cmd_doubling(const RunConfig& cfg, Emitter& emit) {
  std::optional<MapSpec> spec;
  const Density density = density_from_options(cfg, spec);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coord(-cfg.box, cfg.box);
  std::vector<Eigen::VectorXd> centers;
  for (std::size_t i = 0; i < cfg.centers; ++i) {
    Eigen::VectorXd c(density.dim);
    for (int d = 0; d < density.dim; ++d) c(d) = coord(rng);
    centers.push_back(c);
  }
  const DoublingReport report = doubling_report(density, centers, parse_list(cfg.radii, "--radii"));
  auto meta = metadata(cfg, "doubling", spec ? &*spec : nullptr, nullptr);
  meta["density"] = density.label;
  if (emit.json()) {
    emit.write_json({{"meta", meta}, {"report", to_json(report)}});
  } else {
    emit.write(csv_metadata(meta) + doubling_to_csv(report));
  }
}

void cmd_moments(const RunConfig& cfg, Emitter& emit) {
  std::optional<MapSpec> spec;
  const Density density = density_from_options(cfg, spec);
  std::optional<Eigen::VectorXd> normal;
  if (!cfg.normal.empty()) normal = parse_vector(cfg.normal, "--normal");
  const QuadratureScheme scheme = make_scheme(cfg, density.dim);
  const MomentReport report = gaussian_moment_ratio(density, cfg.moment, normal, scheme);
  auto meta = metadata(cfg, "moments", spec ? &*spec : nullptr, &scheme);
  meta["density"] = density.label;
  meta["p"] = cfg.moment;
  if (normal) meta["normal"] = to_json_array(*normal);
  emit.write_json({{"meta", meta}, {"report", to_json(report)}});
}

void cmd_hyperbolic(const RunConfig& cfg, Emitter& emit) {
  const MapSpec spec = load_spec(cfg.spec);
  const ExtensionField field(spec, make_scheme(cfg, spec.dim()));
  const auto grid = cfg.grid > 0 ? points_from_options(cfg, spec.dim())
                                 : (cfg.refined ? refined_hyperbolic_grid(spec.dim())
                                                : default_hyperbolic_grid(spec.dim()));
  HyperbolicReport report;
  try {
    report = vertical_comparison(field, grid);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::VanishingVertical) throw Violation(e.what());
    throw;
  }
  const auto meta = metadata(cfg, "hyperbolic", &spec, &field.scheme());
  if (emit.json()) {
    nlohmann::json doc = {{"meta", meta}, {"vertical_comparison", to_json(report)}};
    if (cfg.bl_pairs > 0) {
      doc["bilipschitz"] = to_json(bilipschitz_sample(field, sample_halfspace_pairs(spec.dim(), cfg.bl_pairs, cfg.seed)));
    }
    emit.write_json(doc);
  } else {
    emit.write(csv_metadata(meta) + hyperbolic_to_csv(report));
  }
}

void cmd_demo_composition(const RunConfig& cfg, Emitter& emit) {
  const CompositionReport report = composition_monotonicity_demo(cfg.theta1, cfg.theta2, cfg.seed);
  emit.write_json({{"meta", metadata(cfg, "demo-composition", nullptr, nullptr)}, {"report", to_json(report)}});
}

void cmd_demo_trivial_failure(const RunConfig& cfg, Emitter& emit) {
  const MapSpec spec = MapSpec::power_radial(cfg.dim, cfg.exponent);
  PairSamplerConfig sampler;
  sampler.seed = cfg.seed;
  sampler.pairs = cfg.demo_pairs;
  sampler.adversarial_pairs = cfg.witness_pairs;
  sampler.adversarial_radius = cfg.radius;
  const DeltaCertificate cert = two_point_delta(
      [&](const Eigen::VectorXd& v) { return trivial_extension(spec, HalfSpacePoint::from_lifted(v)); },
      spec.dim() + 1, sampler);
  const double predicted = 2.0 / std::sqrt(cfg.radius);
  const bool refuted = cert.delta_hat <= 0.1;
  emit.write_json({{"meta", metadata(cfg, "demo-trivial-failure", &spec, nullptr)},
                   {"certificate", to_json(cert)},
                   {"predicted_witness_ratio", predicted},
                   {"refuted", refuted}});
  if (!refuted) throw Violation("no pair with ratio <= 0.1 found for the trivial extension");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Gaussian extension of delta-monotone maps: evaluation and certification"};
  app.name(args.empty() ? "qcext" : args.front());
  app.require_subcommand(1);
  app.add_option("--threads", cfg.threads, "Cap on worker threads (0 = all cores)");

  auto common = [&](CLI::App* sub, bool with_spec, bool with_scheme, bool csv) {
    if (with_spec) sub->add_option("--spec", cfg.spec, "Map spec: JSON file path or inline JSON");
    if (with_scheme) {
      sub->add_option("--method", cfg.method, "tensor_hermite | quasi_random | default");
      sub->add_option("--resolution", cfg.resolution, "Tensor order m or quasi-random sample count N");
    }
    sub->add_option("--seed", cfg.seed, "Seed for every sampler");
    sub->add_option("--out", cfg.out_path, "Output file (default stdout)");
    sub->add_option("--format", cfg.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->default_str(csv ? "csv" : "json");
    sub->add_option("--threads", cfg.threads, "Cap on worker threads (0 = all cores)");
  };
  auto points = [&](CLI::App* sub) {
    sub->add_option("--x", cfg.x, "Base point, comma separated");
    sub->add_option("--t", cfg.t, "Height(s), comma separated");
    sub->add_option("--grid", cfg.grid, "Lattice points per axis (instead of --x/--t)");
    sub->add_option("--width", cfg.width, "Lattice half width");
    sub->add_option("--heights", cfg.heights, "Lattice heights, comma separated");
  };

  auto* extend = app.add_subcommand("extend", "Evaluate F(x,t)");
  common(extend, true, true, true);
  points(extend);

  auto* jacobian = app.add_subcommand("jacobian", "Dump DF(x,t)");
  common(jacobian, true, true, true);
  points(jacobian);
  jacobian->add_option("--fd-step", cfg.fd_step, "Finite-difference step for the JSON cross-check");

  auto* certify_delta = app.add_subcommand("certify-delta", "Empirical two-point monotonicity constant");
  common(certify_delta, true, true, false);
  certify_delta->add_option("--lift", cfg.lift, "none | gaussian | trivial");
  certify_delta->add_option("--pairs", cfg.pairs, "Generic pairs");
  certify_delta->add_option("--crossing", cfg.crossing, "Pairs straddling the hyperplane");
  certify_delta->add_option("--adversarial", cfg.adversarial, "Trivial-extension witness pairs");
  certify_delta->add_option("--radius", cfg.radius, "Witness family base radius");

  auto* certify_qs = app.add_subcommand("certify-qs", "Three-point distortion profile");
  common(certify_qs, true, false, true);
  certify_qs->add_option("--triples", cfg.triples, "Sampled triples");

  auto* claim = app.add_subcommand("claim-check", "Brute-force |Av| >= c(delta)||A|| |v|");
  common(claim, false, false, false);
  claim->add_option("--matrices", cfg.matrices, "Accepted matrices per dimension");
  claim->add_option("--dims", cfg.dims, "Dimensions, comma separated");
  claim->add_option("--min-delta", cfg.min_delta, "Acceptance threshold on matrix delta");

  auto* doubling = app.add_subcommand("doubling", "Doubling ratios of ||Df|| dx or Lebesgue measure");
  common(doubling, true, false, true);
  doubling->add_flag("--lebesgue", cfg.lebesgue, "Use Lebesgue measure instead of ||Df|| dx");
  doubling->add_option("--dim", cfg.dim, "Dimension for --lebesgue");
  doubling->add_option("--centers", cfg.centers, "Random ball centers");
  doubling->add_option("--box", cfg.box, "Centers uniform in [-box, box]^n");
  doubling->add_option("--radii", cfg.radii, "Radii, comma separated");

  auto* moments = app.add_subcommand("moments", "Gaussian-weighted moments against the unit-ball mass");
  common(moments, true, true, false);
  moments->add_flag("--lebesgue", cfg.lebesgue, "Use Lebesgue measure instead of ||Df|| dx");
  moments->add_option("--dim", cfg.dim, "Dimension for --lebesgue");
  moments->add_option("--p", cfg.moment, "Exponent p >= 0");
  moments->add_option("--normal", cfg.normal, "Half-space normal, comma separated");

  auto* hyperbolic = app.add_subcommand("hyperbolic", "||DF|| t / F^{n+1} on a grid");
  common(hyperbolic, true, true, true);
  points(hyperbolic);
  hyperbolic->add_flag("--refined", cfg.refined, "Use the refined default grid");
  hyperbolic->add_option("--pairs", cfg.bl_pairs, "Also sample hyperbolic distance ratios (JSON)");

  auto* demo_comp = app.add_subcommand("demo-composition", "Rotations compose out of the monotone class");
  common(demo_comp, false, false, false);
  demo_comp->add_option("--theta1", cfg.theta1, "First angle");
  demo_comp->add_option("--theta2", cfg.theta2, "Second angle");

  auto* demo_trivial = app.add_subcommand("demo-trivial-failure", "Refute monotonicity of (|x|^p x, t)");
  common(demo_trivial, false, false, false);
  demo_trivial->add_option("--radius", cfg.radius, "Witness family base radius");
  demo_trivial->add_option("--p", cfg.exponent, "Exponent of the radial map");
  demo_trivial->add_option("--dim", cfg.dim, "Base dimension n");
  demo_trivial->add_option("--pairs", cfg.demo_pairs, "Generic pairs in addition to the witness family");
  demo_trivial->add_option("--adversarial", cfg.witness_pairs, "Witness pairs")->check(CLI::PositiveNumber);

  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--threads") {
      ++i;
      continue;
    }
    if (args[i].empty() || args[i].front() == '-') break;
    const auto subs = app.get_subcommands([](const CLI::App*) { return true; });
    const bool known = std::any_of(subs.begin(), subs.end(), [&](const CLI::App* s) { return s->get_name() == args[i]; });
    if (!known) {
      err << "error: unknown subcommand \"" << args[i] << "\"\n";
      return kExitUsage;
    }
    break;
  }

  std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  set_max_threads(cfg.threads);
  if (cfg.format.empty()) cfg.format = "csv";
  Emitter emit(cfg, out);
  try {
    if (*extend) {
      cmd_extend(cfg, emit);
    } else if (*jacobian) {
      cmd_jacobian(cfg, emit);
    } else if (*certify_delta) {
      cmd_certify_delta(cfg, emit);
    } else if (*certify_qs) {
      cmd_certify_qs(cfg, emit);
    } else if (*claim) {
      cmd_claim_check(cfg, emit);
    } else if (*doubling) {
      cmd_doubling(cfg, emit);
    } else if (*moments) {
      cmd_moments(cfg, emit);
    } else if (*hyperbolic) {
      cmd_hyperbolic(cfg, emit);
    } else if (*demo_comp) {
      cmd_demo_composition(cfg, emit);
    } else if (*demo_trivial) {
      cmd_demo_trivial_failure(cfg, emit);
    }
  } catch (const Violation& v) {
    err << "property violated: " << v.what() << "\n";
    return kExitViolation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace qcext::cli
