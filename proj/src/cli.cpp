#include "cartanlab/cli.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cartanlab/empirical.hpp"
#include "cartanlab/random.hpp"
#include "cartanlab/serialize.hpp"
#include "cartanlab/sl_structure.hpp"
#include "cartanlab/suspension.hpp"
#include "cartanlab/svg.hpp"

#ifndef CARTANLAB_VERSION
#define CARTANLAB_VERSION "0.0.0"
#endif

namespace cartanlab {

namespace {

struct Options {
  std::string spec;
  std::string product;
  std::uint64_t seed = 0;
  std::string json_path;
  std::string svg_path;
  std::optional<double> tolerance;
  long bound = 20;

  std::string map;
  std::string element;
  std::string point;
  std::string method = "brin-katok";
  std::string measure = "lebesgue";
  double p = 0.5;
  std::size_t samples = 100000;
  std::size_t depth = 20;
  std::size_t cells = 0;
  std::size_t steps = 10000;

  std::uint64_t a = 2;
  std::uint64_t b = 3;
  std::uint64_t q = 7;
  std::uint64_t limit = 1000000;
  std::string x;

  std::size_t grid = 10;
  int n = 3;
  std::string roots;
  bool cartan = false;
  std::string matrix;
  std::string functional;
  std::string fiberwise;
  bool generic = false;

  std::string shear_measure = "atoms";
  double t = 1.0;
  double window = 10.0;
  double rate = 1.0;
  std::string sequence;
  std::size_t count = 100;
  double epsilon = 0.1;
};

struct Outcome {
  Json inputs = Json::object();
  Json results = Json::object();
  bool ok = true;
  std::string svg;
};

[[noreturn]] void usage(const std::string& msg) { throw CLI::ValidationError(msg); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::vector<long> parse_longs(const std::string& s, const std::string& what) {
  std::vector<long> out;
  for (const auto& tok : split(s, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stol(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      usage(what + ": '" + tok + "' is not an integer");
    }
  }
  return out;
}

Vec parse_doubles(const std::string& s, const std::string& what) {
  Vec out;
  for (const auto& tok : split(s, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      usage(what + ": '" + tok + "' is not a number");
    }
  }
  return out;
}

/// "p/q" or an integer as an exact rational; nullopt for decimals.
std::optional<mpq_class> parse_rational(const std::string& s) {
  mpq_class q;
  if (s.find_first_not_of("-0123456789/") != std::string::npos) return std::nullopt;
  if (q.set_str(s, 10) != 0) return std::nullopt;
  if (q.get_den() == 0) return std::nullopt;
  q.canonicalize();
  return q;
}

/// "sqrt:k" for frac(sqrt k), "p/q", or a decimal.
double parse_real(const std::string& s) {
  if (s.rfind("sqrt:", 0) == 0) {
    const double v = std::sqrt(std::stod(s.substr(5)));
    return v - std::floor(v);
  }
  if (auto q = parse_rational(s)) return q->get_d();
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    usage("cannot parse '" + s + "' as a real number");
  }
}

ActionFile require_action(const Options& o) {
  if (o.spec.empty()) usage("--spec is required");
  ActionFile a = load_action_file(o.spec);
  if (a.labels.empty()) {
    for (std::size_t g = 0; g < a.generators.size(); ++g) a.labels.push_back(std::string(1, static_cast<char>('A' + g)));
  }
  return a;
}

FrameOptions frame_options(const Options& o) {
  FrameOptions f;
  if (o.tolerance) f.tolerance = *o.tolerance;
  return f;
}

struct ResolvedMap {
  MapDescriptor map;
  Eigen::MatrixXd matrix;
  std::string name;
  double sum_positive = 0.0;
  std::optional<std::uint64_t> base;
  std::optional<IntMatrix> integer;
};

double positive_log_sum(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = std::log(std::abs(es.eigenvalues()(i)));
    if (l > 0) s += l;
  }
  return s;
}

ResolvedMap resolve_map(const Options& o, Json& inputs) {
  ResolvedMap r;
  if (!o.map.empty()) {
    inputs["map"] = o.map;
    if (o.map == "cat") {
      const IntMatrix cat = int_matrix({{2, 1}, {1, 1}});
      r.map = ToralAutomorphism{cat};
      r.integer = cat;
      r.matrix = to_eigen(cat);
    } else if (o.map == "identity") {
      r.map = IdentityMap{1};
      r.matrix = Eigen::MatrixXd::Identity(1, 1);
    } else if (o.map.size() > 1 && o.map[0] == 'x') {
      const auto v = parse_longs(o.map.substr(1), "--map");
      if (v.size() != 1 || v[0] < 2) usage("--map xN needs an integer N >= 2");
      r.base = static_cast<std::uint64_t>(v[0]);
      r.map = CircleMultiplier{*r.base};
      r.integer = int_matrix({{v[0]}});
      r.matrix = Eigen::MatrixXd::Constant(1, 1, static_cast<double>(v[0]));
    } else {
      usage("--map must be cat, identity, or xN");
    }
    r.name = o.map;
  } else {
    const ActionFile a = require_action(o);
    inputs["spec"] = action_to_json(a);
    std::vector<long> n(a.generators.size(), 0);
    if (o.element.empty()) {
      n[0] = 1;
    } else {
      n = parse_longs(o.element, "--element");
    }
    inputs["element"] = n;
    const IntMatrix m = element(a.generators, n);
    r.map = ToralAutomorphism{m};
    r.integer = m;
    r.matrix = to_eigen(m);
    r.name = "element";
  }
  r.sum_positive = positive_log_sum(r.matrix);
  return r;
}

// ---------------------------------------------------------------- commands

Outcome cmd_validate(const Options& o) {
  Outcome out;
  const ActionFile a = require_action(o);
  out.inputs["spec"] = action_to_json(a);
  out.inputs["bound"] = o.bound;
  const ValidationReport rep = validate_cartan(a.generators, o.bound);
  out.results = to_json(rep);
  Json spectra = Json::array();
  for (std::size_t g = 0; g < a.generators.size(); ++g) {
    const CharPoly p = char_poly(a.generators[g]);
    Json e{{"generator", a.labels[g]}};
    try {
      e["spectrum"] = to_json(isolate_real_roots(p));
    } catch (const Error& err) {
      e["spectrum"] = to_json(p);
      e["error"] = err.what();
    }
    spectra.push_back(e);
  }
  out.results["spectra"] = spectra;
  if (rep.commuting && rep.distinct_real_spectra) {
    try {
      const CartanActionSpec spec = make_cartan_spec(a.generators, a.labels, frame_options(o));
      out.results["functionals"] = to_json(spec.family);
      out.results["frame_residual"] = number(spec.spectral.frame.max_residual());
    } catch (const Error& err) {
      out.results["functionals_error"] = err.what();
    }
  }
  out.ok = rep.pass();
  return out;
}

Outcome cmd_chambers(const Options& o) {
  Outcome out;
  const ActionFile a = require_action(o);
  out.inputs["spec"] = action_to_json(a);
  FunctionalFamily family = make_cartan_spec(a.generators, a.labels, frame_options(o)).family;
  if (!o.product.empty()) {
    ActionFile b = load_action_file(o.product);
    out.inputs["product"] = action_to_json(b);
    const FunctionalFamily second = make_cartan_spec(b.generators, b.labels, frame_options(o)).family;
    family = product_family(family, second);
  }
  const ChamberDiagram diagram = chamber_diagram(family);
  const CoarseStructure coarse = coarse_classes(family);
  out.results["functionals"] = to_json(family);
  out.results["diagram"] = to_json(diagram, family);
  out.results["coarse"] = to_json(coarse, family);
  bool has_all_same = false;
  for (const auto& c : diagram.chambers) {
    const bool all_pos = std::all_of(c.signs.begin(), c.signs.end(), [](int s) { return s > 0; });
    const bool all_neg = std::all_of(c.signs.begin(), c.signs.end(), [](int s) { return s < 0; });
    has_all_same = has_all_same || all_pos || all_neg;
  }
  out.results["constant_sign_chamber"] = has_all_same;
  Json pip = Json::array();
  for (std::size_t i = 0; i < family.size(); ++i) {
    Json e{{"functional", family.functionals[i].label}};
    try {
      e["certificate"] = to_json(pipart_perturbation(family, i));
    } catch (const Error& err) {
      e["obstruction"] = err.what();
      e["kind"] = to_string(err.kind());
    }
    pip.push_back(e);
  }
  out.results["perturbations"] = pip;
  if (!o.svg_path.empty()) out.svg = chambers_svg(family, diagram);
  return out;
}

OrbitSample entropy_orbit(const Options& o, const ResolvedMap& m, Json& inputs) {
  inputs["measure"] = o.measure;
  inputs["samples"] = o.samples;
  if (o.measure == "lebesgue") {
    if (m.base) return digit_orbit(*m.base, o.samples, o.seed);
    if (std::holds_alternative<IdentityMap>(m.map)) {
      OrbitSample s = float_orbit(m.map, {0.0}, o.samples);
      Rng rng(o.seed);
      for (double& x : s.data) x = unit_double(rng);
      return s;
    }
    return lattice_orbit(*m.integer, o.samples, o.seed);
  }
  if (o.measure == "periodic") {
    if (!m.integer) usage("periodic measure needs an integer map");
    std::string pt = o.point;
    if (pt.empty()) {
      for (std::size_t i = 0; i < m.integer->dim(); ++i) pt += (i ? "," : "") + std::to_string(i + 1) + "/5";
    }
    inputs["point"] = pt;
    std::vector<mpq_class> x0;
    for (const auto& tok : split(pt, ',')) {
      auto q = parse_rational(tok);
      if (!q) usage("--point entries must be rationals p/q for a periodic measure");
      x0.push_back(*q);
    }
    return periodic_orbit(*m.integer, x0, o.samples);
  }
  if (o.measure == "bernoulli") {
    if (!m.base) usage("bernoulli measure needs --map xN");
    inputs["p"] = number(o.p);
    std::vector<double> w(*m.base, (1.0 - o.p) / static_cast<double>(*m.base - 1));
    w[0] = o.p;
    return digit_orbit(*m.base, o.samples, o.seed, w);
  }
  usage("--measure must be lebesgue, periodic, or bernoulli");
}

Outcome cmd_entropy(const Options& o, bool report) {
  Outcome out;
  const ResolvedMap m = resolve_map(o, out.inputs);
  out.inputs["method"] = o.method;
  EntropyReport rep;
  if (o.method == "brin-katok") {
    const OrbitSample orbit = entropy_orbit(o, m, out.inputs);
    rep = brin_katok_entropy(orbit);
    out.results["orbit_source"] = orbit.source;
    if (!o.svg_path.empty()) out.svg = brin_katok_svg(rep);
  } else if (o.method == "partition") {
    PartitionOptions po;
    po.seed = o.seed;
    po.samples = o.samples;
    out.inputs["samples"] = o.samples;
    out.inputs["depth"] = o.depth;
    out.inputs["measure"] = o.measure;
    if (o.measure == "bernoulli") {
      if (!m.base) usage("bernoulli measure needs --map xN");
      po.sampler = Sampler::Digits;
      po.digit_weights.assign(*m.base, (1.0 - o.p) / static_cast<double>(*m.base - 1));
      po.digit_weights[0] = o.p;
      out.inputs["p"] = number(o.p);
    } else if (o.measure != "lebesgue") {
      usage("partition entropy supports lebesgue or bernoulli sampling");
    }
    const std::size_t c = o.cells ? o.cells : (m.base ? *m.base : 2);
    out.inputs["cells"] = c;
    const PartitionEntropy pe = partition_entropy_rate(m.map, std::vector<std::size_t>(map_dim(m.map), c), o.depth, po);
    rep.estimate = pe.estimate;
    rep.method = "partition-rate";
    rep.samples = po.samples;
    out.results["partition"] = to_json(pe);
  } else {
    usage("--method must be brin-katok or partition");
  }
  apply_inequality(rep, m.sum_positive);
  Json r = to_json(rep);
  if (!report) {
    for (const char* key : {"slack", "margulis_ruelle_ok", "pesin_equality", "strict_inequality"}) r.erase(key);
  }
  out.results["entropy"] = r;
  return out;
}

Outcome cmd_orbit(const Options& o) {
  Outcome out;
  const ResolvedMap m = resolve_map(o, out.inputs);
  if (!m.integer) usage("orbit needs an integer map");
  if (o.point.empty()) usage("--point is required");
  out.inputs["point"] = o.point;
  out.inputs["steps"] = o.steps;
  const auto toks = split(o.point, ',');
  std::vector<mpq_class> exact;
  bool rational = true;
  for (const auto& t : toks) {
    auto q = parse_rational(t);
    if (!q) {
      rational = false;
      break;
    }
    exact.push_back(*q);
  }
  const TorusPoint x = rational ? TorusPoint::rational(exact) : TorusPoint::floating(parse_doubles(o.point, "--point"));
  out.results = to_json(orbit(*m.integer, x, o.steps));
  return out;
}

Outcome cmd_furstenberg(const Options& o, const std::string& mode) {
  Outcome out;
  out.inputs["a"] = o.a;
  out.inputs["b"] = o.b;
  if (mode == "orbit") {
    out.inputs["q"] = o.q;
    const auto res = furstenberg_rational_orbit(o.a, o.b, o.q);
    Json pts = Json::array();
    for (auto r : res) pts.push_back(std::to_string(r) + "/" + std::to_string(o.q));
    out.results = Json{{"size", res.size()}, {"residues", res}, {"points", pts}};
  } else if (mode == "gaps") {
    out.inputs["limit"] = o.limit;
    std::optional<double> x;
    if (!o.x.empty()) {
      out.inputs["x"] = o.x;
      x = parse_real(o.x);
    }
    const FurstenbergProfile prof = gap_ratio_profile(o.a, o.b, o.limit, x);
    out.results = to_json(prof);
    if (!o.svg_path.empty()) out.svg = furstenberg_svg(prof);
  } else {
    if (o.x.empty()) usage("--x is required");
    out.inputs["x"] = o.x;
    out.inputs["limit"] = o.limit;
    const double x = parse_real(o.x);
    Json rows = Json::array();
    for (std::uint64_t n = 10; n <= o.limit; n *= 10) {
      rows.push_back(Json{{"N", n}, {"max_gap", number(density_profile(o.a, o.b, x, n))}});
      if (n > o.limit / 10) break;
    }
    out.results = Json{{"x", number(x)}, {"max_gap", number(density_profile(o.a, o.b, x, o.limit))}, {"profile", rows}};
  }
  return out;
}

Outcome cmd_suspension(const Options& o) {
  Outcome out;
  const ActionFile a = require_action(o);
  out.inputs["spec"] = action_to_json(a);
  out.inputs["grid"] = o.grid;
  const double tol = o.tolerance.value_or(1e-9);
  out.inputs["tolerance"] = tol;
  const SuspensionSpec spec = make_suspension(make_cartan_spec(a.generators, a.labels));
  const SuspensionCheck check = suspension_check(spec, o.grid, o.seed);
  out.results = to_json(check);
  out.results["reconstruction_residuals"] = spec.reconstruction_residuals;
  out.results["pass"] = check.pass(tol);
  out.ok = check.pass(tol);
  return out;
}

std::vector<Root> parse_roots(const std::string& s) {
  std::vector<Root> out;
  for (const auto& tok : split(s, ',')) {
    if (tok.size() == 2 && std::isdigit(tok[0]) && std::isdigit(tok[1])) {
      out.push_back({tok[0] - '0', tok[1] - '0'});
    } else {
      usage("--roots expects two-digit labels like 12,21");
    }
  }
  return out;
}

Outcome cmd_roots(const Options& o, const std::string& mode) {
  Outcome out;
  if (mode == "report") {
    out.inputs["n"] = o.n;
    const RootDatum d = make_root_datum(o.n);
    out.results = to_json(root_report(o.n));
    Json labels = Json::array();
    for (const auto& r : d.roots) labels.push_back(to_string(r));
    out.results["root_labels"] = labels;
    if (!o.fiberwise.empty()) {
      out.inputs["fiberwise"] = o.fiberwise;
      std::vector<LinearFunctional> fs;
      for (const auto& part : split(o.fiberwise, ';')) {
        fs.push_back(LinearFunctional{parse_doubles(part, "--fiberwise"), "chi" + std::to_string(fs.size() + 1)});
      }
      out.results["resonance"] = to_json(resonance_classify(d, fs));
    }
  } else if (mode == "closure") {
    out.inputs["n"] = o.n;
    out.inputs["roots"] = o.roots;
    out.inputs["cartan"] = o.cartan;
    const RootDatum d = make_root_datum(o.n);
    const std::vector<Root> seed = o.roots == "all" ? d.roots : parse_roots(o.roots);
    const auto basis = lie_closure(d, seed, o.cartan);
    out.results = to_json(basis);
    out.results["full"] = basis.dim == static_cast<std::size_t>(o.n * o.n - 1);
  } else if (mode == "kak") {
    if (!o.matrix.empty()) {
      out.inputs["matrix"] = o.matrix;
      const Json j = Json::parse(o.matrix);
      Eigen::MatrixXd g(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j.size()));
      for (std::size_t r = 0; r < j.size(); ++r)
        for (std::size_t c = 0; c < j.size(); ++c) g(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
      out.results = to_json(kak_decompose(g));
    } else {
      out.inputs["n"] = o.n;
      out.inputs["samples"] = o.count;
      Rng rng(o.seed);
      double worst = 0.0;
      bool sorted = true;
      for (std::size_t s = 0; s < o.count; ++s) {
        Eigen::MatrixXd g(o.n, o.n);
        for (int r = 0; r < o.n; ++r)
          for (int c = 0; c < o.n; ++c) g(r, c) = uniform(rng, -2.0, 2.0);
        double det = g.determinant();
        if (det < 0) {
          g.row(0) *= -1.0;
          det = -det;
        }
        g /= std::pow(det, 1.0 / o.n);
        const KakResult k = kak_decompose(g);
        worst = std::max(worst, k.residual);
        for (Eigen::Index i = 0; i < k.a.size(); ++i) {
          if (!(k.a(i) > 0) || (i > 0 && k.a(i) > k.a(i - 1))) sorted = false;
        }
      }
      out.results = Json{{"max_residual", number(worst)}, {"a_positive_sorted", sorted}};
      out.ok = worst < o.tolerance.value_or(1e-9) && sorted;
    }
  } else {
    if (o.functional.empty()) usage("--functional is required");
    out.inputs["functional"] = o.functional;
    out.inputs["generic"] = o.generic;
    const LinearFunctional f{parse_doubles(o.functional, "--functional"), "lambdaF"};
    const AveragingSchedule s = averaging_schedule_sl3(f, o.generic);
    out.results = to_json(s);
    out.results["verified"] = verify_schedule(s, f);
  }
  return out;
}

Outcome cmd_lyapunov(const Options& o, bool spectrum) {
  Outcome out;
  const ResolvedMap m = resolve_map(o, out.inputs);
  out.inputs["steps"] = o.steps;
  const CocycleSample c = constant_cocycle(m.matrix, o.steps);
  if (spectrum) {
    const auto ex = qr_oseledec(c);
    double sum = 0.0;
    for (double e : ex) sum += e;
    out.results = Json{{"exponents", vector_to_json(ex)}, {"sum", number(sum)}, {"average_log_det", number(average_log_det(c))}};
  } else {
    out.results = to_json(top_lyapunov_estimate(c));
  }
  return out;
}

Outcome cmd_shear(const Options& o) {
  Outcome out;
  out.inputs["measure"] = o.shear_measure;
  out.inputs["t"] = number(o.t);
  out.inputs["window"] = number(o.window);
  ShearMeasureSpec nu;
  if (o.shear_measure == "atoms") {
    const long span = static_cast<long>(std::ceil(o.window + std::abs(o.t))) + 1;
    nu = exponential_atoms(-span, span);
  } else if (o.shear_measure == "exp-density") {
    nu.kind = ShearMeasureSpec::Kind::ExpDensity;
    nu.rate = o.rate;
    out.inputs["rate"] = number(o.rate);
  } else if (o.shear_measure == "lebesgue") {
    nu.kind = ShearMeasureSpec::Kind::Lebesgue;
  } else {
    usage("--measure must be atoms, exp-density, or lebesgue");
  }
  out.results = to_json(shear_probe(nu, o.t, o.window));
  return out;
}

Outcome cmd_growth(const Options& o) {
  Outcome out;
  out.inputs["epsilon"] = number(o.epsilon);
  out.inputs["count"] = o.count;
  std::vector<double> norms;
  if (!o.sequence.empty()) {
    out.inputs["sequence"] = o.sequence;
    const auto parts = split(o.sequence, ':');
    if (parts.size() != 2) usage("--sequence must be geometric:R or polynomial:K");
    const double v = std::stod(parts[1]);
    for (std::size_t n = 1; n <= o.count; ++n) {
      if (parts[0] == "geometric") {
        norms.push_back(std::pow(v, static_cast<double>(n)));
      } else if (parts[0] == "polynomial") {
        norms.push_back(std::pow(static_cast<double>(n), v));
      } else {
        usage("--sequence must be geometric:R or polynomial:K");
      }
    }
  } else {
    const ResolvedMap m = resolve_map(o, out.inputs);
    norms = power_norms(m.matrix, o.count);
  }
  out.results = to_json(subexp_growth_probe(norms, o.epsilon));
  return out;
}

}  // namespace

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cartanlab: exact and numerical checks for higher-rank toral actions", "cartanlab"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--seed", o.seed, "random seed (default 0)");
  app.add_option("--json", o.json_path, "also write the report to this file");
  app.add_option("--svg", o.svg_path, "write an SVG figure where supported");
  app.add_option("--tolerance", o.tolerance, "override the command's tolerance");
  app.add_option("--spec", o.spec, "action spec file");
  app.add_option("--bound", o.bound, "relation search bound K")->check(CLI::PositiveNumber);

  auto map_opts = [&](CLI::App* s) {
    s->add_option("--map", o.map, "cat, identity, or xN");
    s->add_option("--element", o.element, "exponent vector n1,n2,... of the acting element");
  };

  std::string command;
  std::function<Outcome()> run;
  auto bind = [&](CLI::App* s, std::string name, std::function<Outcome()> f) {
    s->callback([&, name, f] {
      command = name;
      run = f;
    });
  };

  auto* validate = app.add_subcommand("validate", "check the Cartan action conditions");
  bind(validate, "validate", [&] { return cmd_validate(o); });

  auto* chambers = app.add_subcommand("chambers", "Lyapunov functionals, sign chambers, coarse classes");
  chambers->add_option("--product", o.product, "second action spec; use the product action");
  bind(chambers, "chambers", [&] { return cmd_chambers(o); });

  auto* entropy = app.add_subcommand("entropy", "entropy estimators");
  entropy->require_subcommand(1);
  for (const char* mode : {"estimate", "report"}) {
    auto* s = entropy->add_subcommand(mode);
    map_opts(s);
    s->add_option("--method", o.method, "brin-katok or partition");
    s->add_option("--measure", o.measure, "lebesgue, periodic, or bernoulli");
    s->add_option("--p", o.p, "weight of digit 0 for the bernoulli measure");
    s->add_option("--samples", o.samples, "orbit length or sample count");
    s->add_option("--depth", o.depth, "partition refinement depth");
    s->add_option("--cells", o.cells, "partition cells per coordinate");
    s->add_option("--point", o.point, "rational start point for the periodic measure");
    const bool rep = std::string(mode) == "report";
    bind(s, std::string("entropy ") + mode, [&, rep] { return cmd_entropy(o, rep); });
  }

  auto* orb = app.add_subcommand("orbit", "exact orbit of a rational point");
  map_opts(orb);
  orb->add_option("--point", o.point, "p/q coordinates, comma separated");
  orb->add_option("--steps", o.steps, "maximum orbit length");
  bind(orb, "orbit", [&] { return cmd_orbit(o); });

  auto* fur = app.add_subcommand("furstenberg", "the x a x b semigroup");
  fur->require_subcommand(1);
  for (const char* mode : {"orbit", "gaps", "density"}) {
    auto* s = fur->add_subcommand(mode);
    s->add_option("--a", o.a);
    s->add_option("--b", o.b);
    s->add_option("--q", o.q, "denominator for the rational orbit");
    s->add_option("--limit", o.limit);
    s->add_option("--x", o.x, "point: decimal, p/q, or sqrt:k for frac(sqrt k)");
    const std::string m = mode;
    bind(s, "furstenberg " + m, [&, m] { return cmd_furstenberg(o, m); });
  }

  auto* sus = app.add_subcommand("suspension", "suspension checks");
  sus->require_subcommand(1);
  auto* sus_check = sus->add_subcommand("check");
  sus_check->add_option("--grid", o.grid);
  bind(sus_check, "suspension check", [&] { return cmd_suspension(o); });

  auto* roots = app.add_subcommand("roots", "SL(n) root data");
  roots->require_subcommand(1);
  for (const char* mode : {"report", "closure", "kak", "schedule"}) {
    auto* s = roots->add_subcommand(mode);
    s->add_option("--n", o.n)->check(CLI::Range(2, 9));
    s->add_option("--roots", o.roots, "labels like 12,21 or 'all'");
    s->add_flag("--cartan", o.cartan, "include the Cartan subalgebra in the seed");
    s->add_option("--matrix", o.matrix, "JSON rows of a det-1 matrix");
    s->add_option("--samples", o.count, "random samples");
    s->add_option("--functional", o.functional, "lambdaF coefficients on R^3");
    s->add_option("--fiberwise", o.fiberwise, "fiberwise functionals, ';' separated");
    s->add_flag("--generic", o.generic, "use root-kernel elements instead of the fixed test elements");
    const std::string m = mode;
    bind(s, "roots " + m, [&, m] { return cmd_roots(o, m); });
  }

  auto* lyap = app.add_subcommand("lyapunov", "exponents of a constant cocycle");
  lyap->require_subcommand(1);
  for (const char* mode : {"top", "spectrum"}) {
    auto* s = lyap->add_subcommand(mode);
    map_opts(s);
    s->add_option("--steps", o.steps);
    const bool spec = std::string(mode) == "spectrum";
    bind(s, std::string("lyapunov ") + mode, [&, spec] { return cmd_lyapunov(o, spec); });
  }

  auto* shear = app.add_subcommand("shear", "shear groups of measures on R");
  shear->require_subcommand(1);
  auto* shear_probe_cmd = shear->add_subcommand("probe");
  shear_probe_cmd->add_option("--measure", o.shear_measure, "atoms, exp-density, or lebesgue");
  shear_probe_cmd->add_option("--t", o.t);
  shear_probe_cmd->add_option("--window", o.window);
  shear_probe_cmd->add_option("--rate", o.rate);
  bind(shear_probe_cmd, "shear probe", [&] { return cmd_shear(o); });

  auto* growth = app.add_subcommand("growth", "growth-rate probes");
  growth->require_subcommand(1);
  auto* growth_probe = growth->add_subcommand("probe");
  map_opts(growth_probe);
  growth_probe->add_option("--sequence", o.sequence, "geometric:R or polynomial:K instead of a map");
  growth_probe->add_option("--count", o.count);
  growth_probe->add_option("--epsilon", o.epsilon);
  bind(growth_probe, "growth probe", [&] { return cmd_growth(o); });

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  Json report;
  report["schema"] = "cartanlab/1";
  report["command"] = command;
  int code = 0;
  Outcome res;
  try {
    res = run();
  } catch (const CLI::Error& e) {
    err << "cartanlab: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Schema) {
      err << "cartanlab: schema error: " << e.what() << "\n";
      return 1;
    }
    res.results = Json{{"error", Json{{"kind", to_string(e.kind())}, {"message", e.what()}}}};
    res.ok = false;
  } catch (const nlohmann::json::exception& e) {
    err << "cartanlab: malformed JSON argument: " << e.what() << "\n";
    return 1;
  }
  if (!res.ok) code = 2;
  report["inputs"] = res.inputs;
  report["seed"] = o.seed;
  report["results"] = res.results;
  report["tool_version"] = CARTANLAB_VERSION;
  const std::string text = report.dump(2) + "\n";
  out << text;
  try {
    if (!o.json_path.empty()) write_file_atomic(o.json_path, text);
    if (!o.svg_path.empty()) {
      if (res.svg.empty()) {
        err << "cartanlab: no SVG figure for this command\n";
      } else {
        write_file_atomic(o.svg_path, res.svg);
      }
    }
  } catch (const Error& e) {
    err << "cartanlab: " << e.what() << "\n";
    return 1;
  }
  return code;
}

}  // namespace cartanlab
