#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dtph/geometric.hpp"
#include "dtph/interconnect.hpp"
#include "dtph/subspace.hpp"
#include "dtph/systems.hpp"

namespace dtph::io {

using json = nlohmann::json;

/// Reads and parses a JSON file; ParseError on I/O or syntax failure.
json read_json_file(const std::string& path);

/// {"rows": p, "cols": q, "field": "real"|"complex", "data": [[...], ...]}
json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, const std::string& field);

/// A vector given either as a Matrix object with one column or a plain array
/// of numbers / [re, im] pairs.
Vector vector_from_json(const json& j, const std::string& field);

/// {"p": n, "q": n, "P": <Matrix>, "Q": <Matrix>}, or {"kernel": {"K1", "K2"}}.
json to_json(const Subspace& s);
Subspace subspace_from_json(const json& j, const Tolerances& tol = {});

/// {"E": <Matrix|null>, "A", "B", "C", "D", "partition": {"m1": k}|null}
json to_json(const DescriptorSystem& sys);
json to_json(const StandardSystem& sys);
DescriptorSystem system_from_json(const json& j);
/// Throws NotIdentityE when the file carries a non-identity E.
StandardSystem standard_from_json(const json& j);

/// {"n", "r", "m", "N": <Subspace>, "C": <Subspace>}
json to_json(const GeometricPH& g);
GeometricPH geometric_from_json(const json& j, const Tolerances& tol = {});

struct CouplingSpec {
  CouplingMode mode = CouplingMode::General;
  std::optional<CouplingRelation> kernel;
};

/// {"mode": "general"|"redheffer"|"feedback", "kernel": {"M11", "M12", "M21", "M22"}|null}
json to_json(const CouplingSpec& c);
CouplingSpec coupling_from_json(const json& j);
CouplingMode parse_mode(const std::string& mode);
std::string to_string(CouplingMode mode);

json blocks_to_json(const std::vector<Block>& blocks);

json to_json(const ClassificationReport& r);

/// Header `k, x_1..x_n, u_1..u_m, y_1..y_p, residual, margin`; complex
/// quantities are split into `re(..)`, `im(..)` columns. The final row carries
/// x_N only.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<double>& margins, bool complex_field);

/// Rows of comma-separated numbers, one input vector per row. A header line is
/// skipped when it does not parse as numbers. Complex entries are `re,im` pairs
/// when `complex_field` is set.
std::vector<Vector> read_inputs_csv(const std::string& path, Eigen::Index width,
                                    bool complex_field);

std::string format_double(double v);

}  // namespace dtph::io
