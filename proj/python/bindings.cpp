#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cartanlab/cli.hpp"
#include "cartanlab/empirical.hpp"
#include "cartanlab/serialize.hpp"
#include "cartanlab/sl_structure.hpp"
#include "cartanlab/suspension.hpp"
#include "cartanlab/toral_actions.hpp"

namespace py = pybind11;
using namespace cartanlab;

namespace {

using Rows = std::vector<std::vector<long long>>;

py::object to_py(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null: return py::none();
    case Json::value_t::boolean: return py::bool_(j.get<bool>());
    case Json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case Json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case Json::value_t::number_float: return py::float_(j.get<double>());
    case Json::value_t::string: return py::str(j.get<std::string>());
    case Json::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(to_py(v));
      return out;
    }
    case Json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_py(v);
      return out;
    }
    default: return py::none();
  }
}

std::vector<IntMatrix> matrices(const std::vector<Rows>& gens) {
  std::vector<IntMatrix> out;
  for (const auto& g : gens) out.push_back(int_matrix(g));
  return out;
}

Eigen::MatrixXd dense(const std::vector<std::vector<double>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n) {
      throw Error(ErrorKind::DimensionMismatch, "matrix must be square");
    }
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  }
  return m;
}

Root parse_root(const std::pair<int, int>& r) { return Root{r.first, r.second}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact and numerical checks for higher-rank toral actions";

  static py::exception<Error> error(m, "CartanlabError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error((std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  m.def("char_poly", [](const Rows& a) {
    std::vector<py::int_> out;
    for (const auto& c : char_poly(int_matrix(a)).coeffs) out.emplace_back(py::int_(py::str(c.get_str())));
    return out;
  }, py::arg("matrix"), "Integer coefficients of det(x I - A), constant term first.");

  m.def("real_spectrum", [](const Rows& a) { return isolate_real_roots(char_poly(int_matrix(a))).values(); },
        py::arg("matrix"), "Certified real eigenvalues, ascending.");

  m.def("validate", [](const std::vector<Rows>& gens, long bound) {
    return to_py(to_json(validate_cartan(matrices(gens), bound)));
  }, py::arg("generators"), py::arg("bound") = 20);

  m.def("lyapunov_functionals", [](const std::vector<Rows>& gens) {
    return to_py(to_json(make_cartan_spec(matrices(gens)).family));
  }, py::arg("generators"));

  m.def("chambers", [](const std::vector<Rows>& gens) {
    const FunctionalFamily fam = make_cartan_spec(matrices(gens)).family;
    Json j;
    j["diagram"] = to_json(chamber_diagram(fam), fam);
    j["coarse"] = to_json(coarse_classes(fam), fam);
    return to_py(j);
  }, py::arg("generators"));

  m.def("qr_oseledec", [](const std::vector<std::vector<double>>& a, std::size_t steps) {
    return qr_oseledec(constant_cocycle(dense(a), steps));
  }, py::arg("matrix"), py::arg("steps") = 10000, "Lyapunov spectrum of a constant cocycle, descending.");

  m.def("brin_katok_entropy", [](const Rows& a, std::size_t samples, std::uint64_t seed) {
    const IntMatrix map = int_matrix(a);
    EntropyReport r = brin_katok_entropy(lattice_orbit(map, samples, seed));
    apply_inequality(r, lebesgue_entropy(make_cartan_spec({map}).family, {1.0}));
    return to_py(to_json(r));
  }, py::arg("matrix"), py::arg("samples") = 100000, py::arg("seed") = 0,
     "Brin-Katok estimate on a Lebesgue-typical orbit of a hyperbolic toral automorphism.");

  m.def("partition_entropy", [](std::uint64_t base, std::size_t depth, std::size_t samples, std::uint64_t seed) {
    PartitionOptions o;
    o.samples = samples;
    o.seed = seed;
    return to_py(to_json(partition_entropy_rate(CircleMultiplier{base}, {base}, depth, o)));
  }, py::arg("base"), py::arg("depth") = 20, py::arg("samples") = std::size_t{1} << 20, py::arg("seed") = 0);

  m.def("semigroup_elements", &semigroup_elements, py::arg("a"), py::arg("b"), py::arg("limit"));
  m.def("furstenberg_rational_orbit", &furstenberg_rational_orbit, py::arg("a"), py::arg("b"), py::arg("q"));
  m.def("gap_ratio_profile", [](std::uint64_t a, std::uint64_t b, std::uint64_t limit, std::optional<double> x) {
    return to_py(to_json(gap_ratio_profile(a, b, limit, x)));
  }, py::arg("a"), py::arg("b"), py::arg("limit"), py::arg("x") = py::none());
  m.def("density_profile", &density_profile, py::arg("a"), py::arg("b"), py::arg("x"), py::arg("limit"));

  m.def("suspension_check", [](const std::vector<Rows>& gens, std::size_t grid, std::uint64_t seed) {
    return to_py(to_json(suspension_check(make_suspension(make_cartan_spec(matrices(gens))), grid, seed)));
  }, py::arg("generators"), py::arg("grid") = 10, py::arg("seed") = 0);

  m.def("lie_closure_dim", [](int n, const std::vector<std::pair<int, int>>& roots, bool include_cartan) {
    std::vector<Root> seed;
    for (const auto& r : roots) seed.push_back(parse_root(r));
    return lie_closure(make_root_datum(n), seed, include_cartan).dim;
  }, py::arg("n"), py::arg("roots"), py::arg("include_cartan") = false);

  m.def("kak", [](const std::vector<std::vector<double>>& g) { return to_py(to_json(kak_decompose(dense(g)))); },
        py::arg("matrix"));

  m.def("averaging_schedule", [](const std::vector<double>& f, bool generic) {
    const LinearFunctional lf{f, "lambdaF"};
    const AveragingSchedule s = averaging_schedule_sl3(lf, generic);
    Json j = to_json(s);
    j["verified"] = verify_schedule(s, lf);
    return to_py(j);
  }, py::arg("functional"), py::arg("generic") = false);

  m.def("shear_probe", [](const std::string& measure, double t, double window, double rate) {
    ShearMeasureSpec nu;
    if (measure == "atoms") {
      nu = exponential_atoms(-static_cast<long>(window + std::abs(t)) - 2, static_cast<long>(window + std::abs(t)) + 2);
    } else if (measure == "exp-density") {
      nu.kind = ShearMeasureSpec::Kind::ExpDensity;
      nu.rate = rate;
    } else if (measure != "lebesgue") {
      throw Error(ErrorKind::Domain, "measure must be atoms, exp-density, or lebesgue");
    }
    return to_py(to_json(shear_probe(nu, t, window)));
  }, py::arg("measure"), py::arg("t"), py::arg("window") = 10.0, py::arg("rate") = 1.0);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = execute(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs one cartanlab command; returns (exit_code, stdout, stderr).");
}
