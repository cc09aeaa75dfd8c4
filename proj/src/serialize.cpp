#include "cartanlab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cartanlab {

namespace {

[[noreturn]] void schema(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::Schema, "field '" + field + "': " + what);
}

mpz_class parse_entry(const Json& e, const std::string& field) {
  if (e.is_number_integer()) {
    return e.is_number_unsigned() ? mpz_class(std::to_string(e.get<std::uint64_t>()))
                                  : mpz_class(std::to_string(e.get<std::int64_t>()));
  }
  if (e.is_string()) {
    mpz_class v;
    if (v.set_str(e.get<std::string>(), 10) != 0) schema(field, "not a decimal integer");
    return v;
  }
  schema(field, "expected an integer");
}

Json labels_of(const std::vector<std::size_t>& idx, const FunctionalFamily& family) {
  Json out = Json::array();
  for (std::size_t i : idx) out.push_back(family.functionals[i].label);
  return out;
}

}  // namespace

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

IntMatrix parse_int_matrix(const Json& j, const std::string& field) {
  const Json* rows = &j;
  std::string rows_field = field;
  std::optional<std::size_t> declared;
  if (j.is_object()) {
    if (!j.contains("entries")) schema(field + ".entries", "missing");
    rows = &j.at("entries");
    rows_field = field + ".entries";
    if (j.contains("dim")) {
      if (!j.at("dim").is_number_unsigned()) schema(field + ".dim", "expected a positive integer");
      declared = j.at("dim").get<std::size_t>();
    }
  }
  if (!rows->is_array() || rows->empty()) schema(rows_field, "expected a non-empty array of rows");
  const std::size_t d = rows->size();
  if (declared && *declared != d) schema(field + ".dim", "does not match the number of rows");
  IntMatrix m(d);
  for (std::size_t r = 0; r < d; ++r) {
    const std::string rf = rows_field + "[" + std::to_string(r) + "]";
    const Json& row = (*rows)[r];
    if (!row.is_array()) schema(rf, "expected an array");
    if (row.size() != d) schema(rf, "expected " + std::to_string(d) + " entries (square matrix)");
    for (std::size_t c = 0; c < d; ++c) m(r, c) = parse_entry(row[c], rf + "[" + std::to_string(c) + "]");
  }
  return m;
}

ActionFile parse_action(const Json& j) {
  if (!j.is_object()) schema("<root>", "expected an object");
  if (!j.contains("generators")) schema("generators", "missing");
  const Json& gens = j.at("generators");
  if (!gens.is_array() || gens.empty()) schema("generators", "expected a non-empty array of matrices");
  ActionFile out;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    out.generators.push_back(parse_int_matrix(gens[g], "generators[" + std::to_string(g) + "]"));
  }
  for (std::size_t g = 1; g < out.generators.size(); ++g) {
    if (out.generators[g].dim() != out.generators[0].dim()) {
      schema("generators[" + std::to_string(g) + "]", "dimension differs from generators[0]");
    }
  }
  if (j.contains("labels")) {
    const Json& labels = j.at("labels");
    if (!labels.is_array()) schema("labels", "expected an array of strings");
    if (labels.size() != out.generators.size()) schema("labels", "length differs from generators");
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!labels[i].is_string()) schema("labels[" + std::to_string(i) + "]", "expected a string");
      out.labels.push_back(labels[i].get<std::string>());
    }
  }
  return out;
}

ActionFile load_action_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Schema, "cannot read spec file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Schema, "spec file " + path + " is not valid JSON: " + e.what());
  }
  return parse_action(j);
}

Json matrix_to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.dim(); ++c) {
      if (m(r, c).fits_slong_p()) {
        row.push_back(m(r, c).get_si());
      } else {
        row.push_back(m(r, c).get_str());
      }
    }
    rows.push_back(row);
  }
  return rows;
}

Json action_to_json(const ActionFile& action) {
  Json j;
  j["generators"] = Json::array();
  for (const auto& g : action.generators) j["generators"].push_back(matrix_to_json(g));
  j["labels"] = action.labels;
  return j;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(number(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Json vector_to_json(const Vec& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

Json vector_to_json(const Eigen::VectorXd& v) { return vector_to_json(Vec(v.data(), v.data() + v.size())); }

Json to_json(const CharPoly& p) {
  Json coeffs = Json::array();
  for (const auto& c : p.coeffs) coeffs.push_back(c.fits_slong_p() ? Json(c.get_si()) : Json(c.get_str()));
  return Json{{"polynomial", p.to_string()}, {"coefficients_ascending", coeffs}};
}

Json to_json(const RealSpectrum& s) {
  Json roots = Json::array();
  for (const auto& r : s.roots) {
    roots.push_back(Json{{"lo", r.lo.get_str()}, {"hi", r.hi.get_str()}, {"value", number(r.mid)}});
  }
  Json j = to_json(s.poly);
  j["roots"] = roots;
  return j;
}

Json to_json(const LinearFunctional& f) { return Json{{"label", f.label}, {"coefficients", vector_to_json(f.coeffs)}}; }

Json to_json(const FunctionalFamily& f) {
  Json fs = Json::array();
  for (std::size_t i = 0; i < f.size(); ++i) {
    Json e = to_json(f.functionals[i]);
    e["multiplicity"] = f.multiplicities[i];
    fs.push_back(e);
  }
  return Json{{"functionals", fs}, {"weighted_sum", vector_to_json(f.weighted_sum())}};
}

Json to_json(const ValidationReport& r) {
  Json j{{"pass", r.pass()},
         {"det_one", r.det_one},
         {"distinct_real_spectra", r.distinct_real_spectra},
         {"commuting", r.commuting},
         {"genuine", r.genuine},
         {"irreducible_char_polys", r.irreducible_char_polys},
         {"anosov_elements_exist", r.anosov_elements_exist},
         {"bound", r.bound}};
  j["relation"] = r.relation ? Json(*r.relation) : Json(nullptr);
  j["diagnostics"] = r.diagnostics;
  return j;
}

Json to_json(const ChamberDiagram& d, const FunctionalFamily& family) {
  Json kernels = Json::array();
  for (std::size_t i = 0; i < d.kernel_directions.size(); ++i) {
    Json dirs = Json::array();
    for (const auto& v : d.kernel_directions[i]) dirs.push_back(vector_to_json(v));
    kernels.push_back(Json{{"functional", family.functionals[i].label}, {"kernel_basis", dirs}});
  }
  Json chambers = Json::array();
  for (const auto& c : d.chambers) {
    chambers.push_back(Json{{"signs", c.signs}, {"representative", vector_to_json(c.representative)}});
  }
  return Json{{"rank", d.rank}, {"count", d.chambers.size()}, {"kernels", kernels}, {"chambers", chambers}};
}

Json to_json(const CoarseStructure& c, const FunctionalFamily& family) {
  Json classes = Json::array();
  for (const auto& cl : c.classes) {
    classes.push_back(Json{{"members", labels_of(cl.members, family)}, {"zero", cl.zero}});
  }
  Json pairs = Json::array();
  for (const auto& [a, b] : c.negative_pairs) {
    pairs.push_back(Json::array({family.functionals[a].label, family.functionals[b].label}));
  }
  return Json{{"classes", classes}, {"negative_pairs", pairs}};
}

Json to_json(const PerturbationCertificate& c) {
  return Json{{"s0", vector_to_json(c.s0)},
              {"s1", vector_to_json(c.s1)},
              {"angle", number(c.angle)},
              {"steps", c.steps},
              {"values_at_s0", vector_to_json(c.values_at_s0)},
              {"values_at_s1", vector_to_json(c.values_at_s1)},
              {"coarse_partners", c.coarse_partners}};
}

Json to_json(const OrbitResult& r) {
  Json pts = Json::array();
  for (const auto& p : r.points) {
    Json coords = Json::array();
    if (p.mode == TorusPoint::Mode::Rational) {
      for (const auto& c : p.exact) coords.push_back(c.get_str());
    } else {
      for (double c : p.coords) coords.push_back(number(c));
    }
    pts.push_back(coords);
  }
  Json j{{"length", r.points.size()}, {"points", pts}};
  j["period"] = r.period ? Json(*r.period) : Json(nullptr);
  j["preperiod"] = r.preperiod ? Json(*r.preperiod) : Json(nullptr);
  return j;
}

Json to_json(const FurstenbergProfile& p) {
  Json windows = Json::array();
  for (const auto& w : p.windows) {
    windows.push_back(Json{{"lo", number(w.lo)}, {"hi", number(w.hi)}, {"max_ratio", number(w.max_ratio)}, {"pairs", w.pairs}});
  }
  Json gaps = Json::array();
  for (const auto& [n, g] : p.orbit_gaps) gaps.push_back(Json{{"N", n}, {"max_gap", number(g)}});
  return Json{{"a", p.a},
              {"b", p.b},
              {"limit", p.limit},
              {"count", p.products.size()},
              {"windows", windows},
              {"trend_non_increasing", p.trend_non_increasing},
              {"orbit_gaps", gaps}};
}

Json to_json(const SuspensionCheck& c) {
  return Json{{"grid", c.grid},
              {"seed", c.seed},
              {"cocycle_pairs", c.cocycle_pairs},
              {"cocycle_residual", number(c.cocycle_residual)},
              {"det_deviation", number(c.det_deviation)},
              {"integer_residual", number(c.integer_residual)},
              {"dilation_residual", number(c.dilation_residual)},
              {"kernel_dilation_residual", number(c.kernel_dilation_residual)},
              {"per_direction", vector_to_json(c.per_direction)},
              {"pass", c.pass()}};
}

Json to_json(const LieSubalgebraBasis& b) { return Json{{"dim", b.dim}}; }

Json to_json(const KakResult& k) {
  return Json{{"k1", matrix_to_json(k.k1)},
              {"a", vector_to_json(k.a)},
              {"k2", matrix_to_json(k.k2)},
              {"residual", number(k.residual)}};
}

Json to_json(const std::vector<ResonanceEntry>& r) {
  Json out = Json::array();
  for (const auto& e : r) {
    out.push_back(Json{{"root", to_string(e.root)}, {"resonant_with", e.resonant_with}, {"nonresonant", e.nonresonant()}});
  }
  return out;
}

Json to_json(const AveragingSchedule& s) {
  Json stages = Json::array();
  for (const auto& st : s.stages) {
    Json conds = Json::array();
    for (const auto& c : st.conditions) {
      conds.push_back(Json{{"functional", c.functional},
                           {"expected_sign", c.expected},
                           {"value", number(c.value)},
                           {"holds", c.holds()}});
    }
    Json j{{"name", st.name}, {"averaged_over", st.averaged_over}};
    j["element"] = st.element.empty() ? Json(nullptr) : vector_to_json(st.element);
    j["conditions"] = conds;
    j["invariance"] = st.invariance;
    stages.push_back(j);
  }
  return Json{{"stages", stages},
              {"permuted", s.permuted},
              {"closure_dim", s.closure_dim},
              {"verdict", s.verdict},
              {"trace", s.trace}};
}

Json to_json(const RootReport& r) {
  return Json{{"n", r.n},
              {"roots", r.roots},
              {"algebra_dim", r.algebra_dim},
              {"cartan_dim", r.cartan_dim},
              {"parabolic_dim", r.parabolic_dim},
              {"parabolic_codim", r.parabolic_codim},
              {"codim_equals_n_minus_1", r.parabolic_codim == static_cast<std::size_t>(r.n - 1)}};
}

Json to_json(const TopLyapunov& t) {
  Json seq = Json::array();
  for (const auto& [n, v] : t.sequence) seq.push_back(Json{{"n", n}, {"value", number(v)}});
  return Json{{"estimate", number(t.estimate)}, {"sequence", seq}};
}

Json to_json(const EntropyReport& r) {
  Json radii = Json::array();
  for (const auto& e : r.radii) {
    radii.push_back(Json{{"radius", number(e.radius)},
                         {"estimate", number(e.slope)},
                         {"fit_points", e.fit_points},
                         {"valid", e.valid}});
  }
  Json j{{"method", r.method}, {"estimate", number(r.estimate)}, {"samples", r.samples}};
  if (r.method == "brin-katok") {
    j["radius"] = number(r.radius);
    j["radii"] = radii;
    j["r_trend"] = r.r_trend;
  }
  j["sum_positive_exponents"] = number(r.sum_positive_exponents);
  j["slack"] = number(r.slack);
  j["margulis_ruelle_ok"] = r.margulis_ruelle_ok;
  j["pesin_equality"] = r.pesin_equality;
  j["strict_inequality"] = r.strict_inequality;
  j["warnings"] = r.warnings;
  return j;
}

Json to_json(const PartitionEntropy& p) {
  return Json{{"estimate", number(p.estimate)},
              {"depth", p.depth},
              {"reliable_depth", p.reliable_depth},
              {"miller_madow", p.miller_madow},
              {"block_entropies", vector_to_json(p.block_entropies)},
              {"differences", vector_to_json(p.differences)},
              {"occupied", p.occupied}};
}

Json to_json(const ShearResult& s) {
  Json j{{"proportional", s.proportional}};
  j["constant"] = s.constant ? number(*s.constant) : Json(nullptr);
  j["reason"] = s.reason;
  return j;
}

Json to_json(const GrowthResult& g) {
  return Json{{"rate", number(g.rate)}, {"epsilon", number(g.epsilon)}, {"subexponential", g.subexponential}};
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Domain, "cannot write " + tmp);
    out << content;
    if (!out.flush()) throw Error(ErrorKind::Domain, "write to " + tmp + " failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error(ErrorKind::Domain, "cannot move " + tmp + " into place");
  }
}

}  // namespace cartanlab
