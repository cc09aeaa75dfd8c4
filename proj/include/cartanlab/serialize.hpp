#pragma once

// JSON encodings of library results and the action spec file format
// {"generators": [[[int]]], "labels": [string]}.

#include <string>
#include <vector>

#include <json.hpp>

#include "cartanlab/empirical.hpp"
#include "cartanlab/lyapunov_chambers.hpp"
#include "cartanlab/sl_structure.hpp"
#include "cartanlab/suspension.hpp"
#include "cartanlab/toral_actions.hpp"

namespace cartanlab {

using Json = nlohmann::ordered_json;

struct ActionFile {
  std::vector<IntMatrix> generators;
  std::vector<std::string> labels;
};

/// Throws Error(Schema) naming the offending field, e.g. "generators[1][2][0]".
ActionFile parse_action(const Json& j);
ActionFile load_action_file(const std::string& path);
Json action_to_json(const ActionFile& action);

/// Accepts [[int]] or {"dim": d, "entries": [[int]]}; entries may be integers
/// or decimal strings.
IntMatrix parse_int_matrix(const Json& j, const std::string& field);
Json matrix_to_json(const IntMatrix& m);
Json matrix_to_json(const Eigen::MatrixXd& m);
Json vector_to_json(const Vec& v);
Json vector_to_json(const Eigen::VectorXd& v);

/// NaN and infinities become null.
Json number(double x);

Json to_json(const CharPoly& p);
Json to_json(const RealSpectrum& s);
Json to_json(const LinearFunctional& f);
Json to_json(const FunctionalFamily& f);
Json to_json(const ValidationReport& r);
Json to_json(const ChamberDiagram& d, const FunctionalFamily& family);
Json to_json(const CoarseStructure& c, const FunctionalFamily& family);
Json to_json(const PerturbationCertificate& c);
Json to_json(const OrbitResult& r);
Json to_json(const FurstenbergProfile& p);
Json to_json(const SuspensionCheck& c);
Json to_json(const LieSubalgebraBasis& b);
Json to_json(const KakResult& k);
Json to_json(const std::vector<ResonanceEntry>& r);
Json to_json(const AveragingSchedule& s);
Json to_json(const RootReport& r);
Json to_json(const TopLyapunov& t);
Json to_json(const EntropyReport& r);
Json to_json(const PartitionEntropy& p);
Json to_json(const ShearResult& s);
Json to_json(const GrowthResult& g);

/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace cartanlab
