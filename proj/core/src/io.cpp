#include "dtph/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dtph/error.hpp"

namespace dtph::io {

namespace {

[[noreturn]] void parse_error(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::ParseError, "field '" + field + "': " + what);
}

const json& require(const json& j, const char* key, const std::string& field) {
  if (!j.is_object() || !j.contains(key)) parse_error(field, std::string("missing key '") + key + "'");
  return j.at(key);
}

Eigen::Index require_count(const json& j, const char* key, const std::string& field) {
  const json& v = require(j, key, field);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    parse_error(field + "." + key, "expected a nonnegative integer");
  }
  return static_cast<Eigen::Index>(v.get<long long>());
}

Complex scalar_from_json(const json& v, bool allow_complex, const std::string& field) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (allow_complex && v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  parse_error(field, allow_complex ? "expected a number or [re, im]" : "expected a number");
}

json scalar_to_json(Complex z, bool complex_field) {
  if (!complex_field) return z.real();
  return json::array({z.real(), z.imag()});
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, "'" + path + "': " + e.what());
  }
}

json to_json(const Matrix& m) {
  const bool cplx = !is_real(m);
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j), cplx));
    data.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"field", cplx ? "complex" : "real"},
          {"data", std::move(data)}};
}

Matrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_object()) parse_error(field, "expected a matrix object");
  const Eigen::Index rows = require_count(j, "rows", field);
  const Eigen::Index cols = require_count(j, "cols", field);
  bool allow_complex = false;
  if (j.contains("field")) {
    const json& f = j.at("field");
    if (f == "complex") {
      allow_complex = true;
    } else if (f != "real") {
      parse_error(field + ".field", "expected \"real\" or \"complex\"");
    }
  }
  const json& data = require(j, "data", field);
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows) {
    std::ostringstream os;
    os << "expected " << rows << " rows";
    throw Error(ErrorKind::DimensionMismatch, "field '" + field + ".data': " + os.str());
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = data[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      std::ostringstream os;
      os << "row " << i << " must have " << cols << " entries";
      throw Error(ErrorKind::DimensionMismatch, "field '" + field + ".data': " + os.str());
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(i, c) = scalar_from_json(row[static_cast<std::size_t>(c)], allow_complex, field + ".data");
    }
  }
  if (!m.allFinite()) parse_error(field, "entries must be finite");
  return m;
}

Vector vector_from_json(const json& j, const std::string& field) {
  if (j.is_object()) {
    const Matrix m = matrix_from_json(j, field);
    if (m.cols() != 1) {
      throw Error(ErrorKind::DimensionMismatch, "field '" + field + "': expected one column");
    }
    return m.col(0);
  }
  if (!j.is_array()) parse_error(field, "expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = scalar_from_json(j[i], true, field);
  }
  return v;
}

json to_json(const Subspace& s) {
  return {{"p", s.p()}, {"q", s.q()}, {"P", to_json(s.first())}, {"Q", to_json(s.second())}};
}

Subspace subspace_from_json(const json& j, const Tolerances& tol) {
  if (!j.is_object()) parse_error("subspace", "expected an object");
  if (j.contains("P") || !j.contains("kernel")) {
    const Matrix p = matrix_from_json(require(j, "P", "subspace"), "P");
    const Matrix q = matrix_from_json(require(j, "Q", "subspace"), "Q");
    if (j.contains("p") && require_count(j, "p", "subspace") != p.rows()) {
      throw Error(ErrorKind::DimensionMismatch, "field 'p' does not match the rows of P");
    }
    if (j.contains("q") && require_count(j, "q", "subspace") != q.rows()) {
      throw Error(ErrorKind::DimensionMismatch, "field 'q' does not match the rows of Q");
    }
    return Subspace::from_image(p, q, tol);
  }
  const json& k = j.at("kernel");
  const Matrix k1 = matrix_from_json(require(k, "K1", "kernel"), "kernel.K1");
  const Matrix k2 = matrix_from_json(require(k, "K2", "kernel"), "kernel.K2");
  return Subspace::from_kernel(k1, k2, tol);
}

json to_json(const DescriptorSystem& sys) {
  json j = {{"E", sys.has_identity_e() ? json(nullptr) : to_json(sys.e)},
            {"A", to_json(sys.a)},
            {"B", to_json(sys.b)},
            {"C", to_json(sys.c)},
            {"D", to_json(sys.d)}};
  j["partition"] = sys.coupled ? json{{"m1", *sys.coupled}} : json(nullptr);
  return j;
}

json to_json(const StandardSystem& sys) { return to_json(DescriptorSystem::from_standard(sys)); }

DescriptorSystem system_from_json(const json& j) {
  if (!j.is_object()) parse_error("system", "expected an object");
  DescriptorSystem sys;
  sys.a = matrix_from_json(require(j, "A", "system"), "A");
  sys.b = matrix_from_json(require(j, "B", "system"), "B");
  sys.c = matrix_from_json(require(j, "C", "system"), "C");
  sys.d = matrix_from_json(require(j, "D", "system"), "D");
  if (!j.contains("E") || j.at("E").is_null()) {
    sys.e = Matrix::Identity(sys.a.rows(), sys.a.rows());
  } else {
    sys.e = matrix_from_json(j.at("E"), "E");
  }
  if (j.contains("partition") && !j.at("partition").is_null()) {
    sys.coupled = require_count(j.at("partition"), "m1", "partition");
  }
  sys.validate();
  return sys;
}

StandardSystem standard_from_json(const json& j) {
  const DescriptorSystem d = system_from_json(j);
  if (!d.has_identity_e()) {
    throw Error(ErrorKind::NotIdentityE, "expected a standard system (E null or identity)");
  }
  return {d.a, d.b, d.c, d.d, d.coupled};
}

json to_json(const GeometricPH& g) {
  return {{"n", g.n}, {"r", g.r}, {"m", g.m}, {"N", to_json(g.N)}, {"C", to_json(g.C)}};
}

GeometricPH geometric_from_json(const json& j, const Tolerances& tol) {
  if (!j.is_object()) parse_error("geometric", "expected an object");
  return {require_count(j, "n", "geometric"), require_count(j, "r", "geometric"),
          require_count(j, "m", "geometric"), subspace_from_json(require(j, "N", "geometric"), tol),
          subspace_from_json(require(j, "C", "geometric"), tol)};
}

CouplingMode parse_mode(const std::string& mode) {
  if (mode == "general") return CouplingMode::General;
  if (mode == "redheffer") return CouplingMode::Redheffer;
  if (mode == "feedback") return CouplingMode::Feedback;
  parse_error("mode", "expected general, redheffer or feedback, got '" + mode + "'");
}

std::string to_string(CouplingMode mode) {
  switch (mode) {
    case CouplingMode::General: return "general";
    case CouplingMode::Redheffer: return "redheffer";
    case CouplingMode::Feedback: return "feedback";
  }
  return "general";
}

json to_json(const CouplingSpec& c) {
  json j = {{"mode", to_string(c.mode)}};
  if (c.kernel) {
    j["kernel"] = {{"M11", to_json(c.kernel->m11)},
                   {"M12", to_json(c.kernel->m12)},
                   {"M21", to_json(c.kernel->m21)},
                   {"M22", to_json(c.kernel->m22)}};
  } else {
    j["kernel"] = nullptr;
  }
  return j;
}

CouplingSpec coupling_from_json(const json& j) {
  if (!j.is_object()) parse_error("coupling", "expected an object");
  CouplingSpec spec;
  const json& mode = require(j, "mode", "coupling");
  if (!mode.is_string()) parse_error("mode", "expected a string");
  spec.mode = parse_mode(mode.get<std::string>());
  if (j.contains("kernel") && !j.at("kernel").is_null()) {
    const json& k = j.at("kernel");
    spec.kernel = CouplingRelation{matrix_from_json(require(k, "M11", "kernel"), "kernel.M11"),
                                   matrix_from_json(require(k, "M12", "kernel"), "kernel.M12"),
                                   matrix_from_json(require(k, "M21", "kernel"), "kernel.M21"),
                                   matrix_from_json(require(k, "M22", "kernel"), "kernel.M22")};
  }
  if (spec.mode == CouplingMode::General && !spec.kernel) {
    parse_error("kernel", "general mode needs kernel blocks");
  }
  return spec;
}

json blocks_to_json(const std::vector<Block>& blocks) {
  json out = json::array();
  for (const Block& b : blocks) {
    out.push_back({{"name", b.name}, {"offset", b.offset}, {"size", b.size}});
  }
  return out;
}

json to_json(const ClassificationReport& r) {
  json j = {{"dim", r.dim},
            {"n", r.n},
            {"contractive", r.contractive},
            {"monotone", r.monotone},
            {"norm_preserving", r.norm_preserving},
            {"dirac", r.dirac},
            {"lagrangian", r.lagrangian},
            {"maximal_contractive", r.maximal_contractive},
            {"maximal_monotone", r.maximal_monotone},
            {"maximal_norm_preserving", r.maximal_norm_preserving},
            {"contractive_min_eig", r.contractive_min_eig},
            {"monotone_min_eig", r.monotone_min_eig},
            {"norm_defect", r.norm_defect},
            {"dirac_defect", r.dirac_defect},
            {"lagrangian_defect", r.lagrangian_defect}};
  json witnesses = json::object();
  const auto put = [&](const char* name, const std::optional<Vector>& w) {
    if (w) witnesses[name] = to_json(Matrix(*w));
  };
  put("contractive", r.contractive_witness);
  put("monotone", r.monotone_witness);
  put("norm_preserving", r.norm_preserving_witness);
  put("dirac", r.dirac_witness);
  put("lagrangian", r.lagrangian_witness);
  j["witnesses"] = std::move(witnesses);
  return j;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void header_cols(std::ostream& os, const char* prefix, Eigen::Index count, bool cplx) {
  for (Eigen::Index i = 1; i <= count; ++i) {
    if (cplx) {
      os << ",re(" << prefix << "_" << i << "),im(" << prefix << "_" << i << ")";
    } else {
      os << "," << prefix << "_" << i;
    }
  }
}

void value_cols(std::ostream& os, const Vector* v, Eigen::Index count, bool cplx) {
  for (Eigen::Index i = 0; i < count; ++i) {
    if (v == nullptr) {
      os << (cplx ? ",," : ",");
    } else if (cplx) {
      os << "," << format_double((*v)(i).real()) << "," << format_double((*v)(i).imag());
    } else {
      os << "," << format_double((*v)(i).real());
    }
  }
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<double>& margins, bool complex_field) {
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
  const Eigen::Index m = traj.inputs.empty() ? 0 : traj.inputs.front().size();
  const Eigen::Index p = traj.outputs.empty() ? 0 : traj.outputs.front().size();
  os << "k";
  header_cols(os, "x", n, complex_field);
  header_cols(os, "u", m, complex_field);
  header_cols(os, "y", p, complex_field);
  os << ",residual,margin\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    os << k;
    value_cols(os, &traj.states[k], n, complex_field);
    const bool has_step = k < traj.inputs.size();
    value_cols(os, has_step ? &traj.inputs[k] : nullptr, m, complex_field);
    value_cols(os, has_step ? &traj.outputs[k] : nullptr, p, complex_field);
    if (has_step) {
      os << "," << format_double(k < traj.residuals.size() ? traj.residuals[k] : 0.0) << ","
         << (k < margins.size() ? format_double(margins[k]) : std::string());
    } else {
      os << ",,";
    }
    os << "\n";
  }
}

std::vector<Vector> read_inputs_csv(const std::string& path, Eigen::Index width,
                                    bool complex_field) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::vector<Vector> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (line_no == 1) continue;
      throw Error(ErrorKind::ParseError, path + ":" + std::to_string(line_no) + ": not numeric");
    }
    const Eigen::Index expected = complex_field ? 2 * width : width;
    if (static_cast<Eigen::Index>(values.size()) != expected) {
      throw Error(ErrorKind::DimensionMismatch, path + ":" + std::to_string(line_no) +
                                                    ": expected " + std::to_string(expected) +
                                                    " values");
    }
    Vector u(width);
    for (Eigen::Index i = 0; i < width; ++i) {
      u(i) = complex_field ? Complex(values[2 * i], values[2 * i + 1]) : Complex(values[i], 0.0);
    }
    out.push_back(u);
  }
  return out;
}

}  // namespace dtph::io
