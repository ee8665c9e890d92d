#include "delaycert/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "delaycert/error.hpp"

namespace delaycert::io {

using json = nlohmann::json;

std::string format_double(double value) {
  if (value == 0.0) value = 0.0;  // no "-0"
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(std::string("missing key '") + key + "'");
  return *it;
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

Index dimension(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw ConfigError(std::string("'") + key + "' must be a positive integer");
  return static_cast<Index>(v.get<long long>());
}

// Flat row-major list or list of rows.
Matrix read_matrix(const json& v, Index rows, Index cols, const std::string& what) {
  if (!v.is_array()) throw ConfigError(what + " must be an array");
  std::vector<double> flat;
  if (!v.empty() && v.front().is_array()) {
    if (static_cast<Index>(v.size()) != rows)
      throw ConfigError(what + ": expected " + std::to_string(rows) + " rows");
    for (const auto& row : v) {
      if (!row.is_array() || static_cast<Index>(row.size()) != cols)
        throw ConfigError(what + ": expected " + std::to_string(cols) + " columns");
      for (const auto& x : row) flat.push_back(number(x, what));
    }
  } else {
    if (static_cast<Index>(v.size()) != rows * cols)
      throw ConfigError(what + ": expected " + std::to_string(rows * cols) + " entries");
    for (const auto& x : v) flat.push_back(number(x, what));
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = flat[static_cast<std::size_t>(i * cols + j)];
  return m;
}

json write_matrix(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

DelayMeasure read_measure(const json& obj, const char* atoms_key, const char* density_key,
                          Index rows, Index cols) {
  std::vector<Atom> atoms;
  std::vector<DensityPiece> pieces;
  if (auto it = obj.find(atoms_key); it != obj.end()) {
    if (!it->is_array()) throw ConfigError(std::string(atoms_key) + " must be an array");
    for (const auto& a : *it) {
      const std::string what = std::string(atoms_key) + " entry";
      atoms.push_back({number(require(a, "theta"), what + " theta"),
                       read_matrix(require(a, "matrix"), rows, cols, what + " matrix")});
    }
  }
  if (auto it = obj.find(density_key); it != obj.end()) {
    if (!it->is_array()) throw ConfigError(std::string(density_key) + " must be an array");
    for (const auto& d : *it) {
      const std::string what = std::string(density_key) + " entry";
      const json& interval = require(d, "interval");
      if (!interval.is_array() || interval.size() != 2)
        throw ConfigError(what + " interval must be [lower, upper]");
      DensityPiece piece;
      piece.lower = number(interval[0], what + " interval");
      piece.upper = number(interval[1], what + " interval");
      const json& coeffs = require(d, "coeffs");
      if (!coeffs.is_array() || coeffs.empty())
        throw ConfigError(what + " coeffs must be a nonempty array");
      for (const auto& c : coeffs) piece.coeffs.push_back(read_matrix(c, rows, cols, what + " coeffs"));
      pieces.push_back(std::move(piece));
    }
  }
  return DelayMeasure(rows, cols, std::move(atoms), std::move(pieces));
}

void write_measure(json& obj, const DelayMeasure& m, const char* atoms_key,
                   const char* density_key) {
  json atoms = json::array();
  for (const auto& a : m.atoms()) atoms.push_back({{"theta", a.theta}, {"matrix", write_matrix(a.weight)}});
  json density = json::array();
  for (const auto& p : m.pieces()) {
    json coeffs = json::array();
    for (const auto& c : p.coeffs) coeffs.push_back(write_matrix(c));
    density.push_back({{"interval", {p.lower, p.upper}}, {"coeffs", std::move(coeffs)}});
  }
  obj[atoms_key] = std::move(atoms);
  obj[density_key] = std::move(density);
}

Nonlinearity read_nonlinearity(const json& v, Index m, Index r) {
  if (!v.is_object()) throw ConfigError("nonlinearity must be an object");
  const json& kind_v = require(v, "kind");
  if (!kind_v.is_string()) throw ConfigError("nonlinearity kind must be a string");
  const std::string kind = kind_v.get<std::string>();
  const json params = v.contains("params") ? v.at("params") : json::object();
  if (!params.is_object()) throw ConfigError("nonlinearity params must be an object");

  std::optional<Nonlinearity> f;
  if (kind == "goodwin" || kind == "builtin-goodwin") {
    const double rho = params.contains("rho") ? number(params.at("rho"), "rho") : 0.0;
    f = Nonlinearity::goodwin(rho);
  } else if (kind == "linear-gain") {
    f = Nonlinearity::linear_gain(read_matrix(require(params, "gain"), m, r, "gain"));
  } else if (kind == "expression") {
    const json& e = require(params, "expr");
    if (!e.is_string()) throw ConfigError("expr must be a string");
    try {
      f = Nonlinearity::expression(expr::parse_expression(e.get<std::string>()));
    } catch (const SyntaxError& err) {
      throw ConfigError(std::string("expr: ") + err.what());
    }
  } else {
    throw ConfigError("unknown nonlinearity kind '" + kind + "'");
  }
  if (f->input_dim() != r || f->output_dim() != m)
    throw ConfigError("nonlinearity dimensions do not match m and r");

  if (auto it = v.find("sector"); it != v.end()) {
    if (!it->is_array() || it->size() != 2) throw ConfigError("sector must be [k1, k2]");
    bool incremental = false;
    if (auto inc = v.find("sector_incremental"); inc != v.end()) {
      if (!inc->is_boolean()) throw ConfigError("sector_incremental must be a boolean");
      incremental = inc->get<bool>();
    }
    f->with_sector({number((*it)[0], "sector"), number((*it)[1], "sector"), incremental});
  }
  if (auto it = v.find("lipschitz"); it != v.end()) {
    if (!it->is_object()) throw ConfigError("lipschitz must be an object");
    LipschitzBound lb;
    lb.lambda = number(require(*it, "lambda"), "lipschitz lambda");
    if (auto inc = it->find("incremental"); inc != it->end()) {
      if (!inc->is_boolean()) throw ConfigError("lipschitz incremental must be a boolean");
      lb.incremental = inc->get<bool>();
    }
    f->with_lipschitz(lb);
  }
  return *f;
}

json write_nonlinearity(const Nonlinearity& f) {
  json v;
  switch (f.kind()) {
    case Nonlinearity::Kind::Goodwin:
      v["kind"] = "goodwin";
      v["params"] = {{"rho", f.goodwin_rho()}};
      break;
    case Nonlinearity::Kind::LinearGain:
      v["kind"] = "linear-gain";
      v["params"] = {{"gain", write_matrix(f.gain())}};
      break;
    case Nonlinearity::Kind::Expression:
      v["kind"] = "expression";
      v["params"] = {{"expr", f.tree().to_string()}};
      break;
  }
  if (const auto& s = f.sector()) {
    v["sector"] = {s->k1, s->k2};
    v["sector_incremental"] = s->incremental;
  }
  if (const auto& l = f.lipschitz()) v["lipschitz"] = {{"lambda", l->lambda}, {"incremental", l->incremental}};
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// nlohmann prints non-finite doubles as null; keep them readable instead.
json number_or_string(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

json sweep_json(const SweepInfo& s) {
  return {{"omega_cap", number_or_string(s.omega_cap)}, {"nodes", s.nodes}, {"depth", s.depth}};
}

json certificate_object(const Certificate& c) {
  json v;
  v["verdict"] = to_string(c.verdict);
  v["kind"] = to_string(c.kind);
  v["check"] = c.check;
  v["nu"] = c.nu;
  v["j"] = c.j ? json(*c.j) : json(nullptr);
  v["margin"] = number_or_string(c.margin);
  v["sup_value"] = number_or_string(c.sup_value);
  v["worst_omega"] = number_or_string(c.worst_omega);
  v["tail_bound"] = number_or_string(c.tail_bound);
  v["sweep"] = sweep_json(c.sweep);
  v["note"] = c.note;
  return v;
}

std::string text_lines(const std::vector<std::pair<std::string, std::string>>& lines) {
  std::string out;
  for (const auto& [k, val] : lines) out += k + ": " + val + "\n";
  return out;
}

}  // namespace

SystemFile parse_system(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("system file must be a JSON object");
  try {
    const Index n = dimension(doc, "n");
    const Index m = dimension(doc, "m");
    const Index r = dimension(doc, "r");
    const double tau = number(require(doc, "tau"), "tau");
    DelayMeasure a = read_measure(doc, "a_atoms", "a_density", n, n);
    Matrix b = read_matrix(require(doc, "b"), n, m, "b");
    DelayMeasure c = read_measure(doc, "c_atoms", "c_density", r, n);
    SystemFile file{DelaySystem(tau, std::move(a), std::move(b), std::move(c)), std::nullopt};
    if (auto it = doc.find("nonlinearity"); it != doc.end() && !it->is_null())
      file.nonlinearity = read_nonlinearity(*it, m, r);
    return file;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed system file: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

SystemFile load_system(const std::string& path) { return parse_system(read_file(path)); }

std::string dump_system(const SystemFile& file) {
  const DelaySystem& sys = file.system;
  json doc;
  doc["n"] = sys.n();
  doc["m"] = sys.m();
  doc["r"] = sys.r();
  doc["tau"] = sys.tau();
  write_measure(doc, sys.a(), "a_atoms", "a_density");
  doc["b"] = write_matrix(sys.b());
  write_measure(doc, sys.c(), "c_atoms", "c_density");
  if (file.nonlinearity) doc["nonlinearity"] = write_nonlinearity(*file.nonlinearity);
  return doc.dump(2) + "\n";
}

void save_system(const SystemFile& file, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << dump_system(file);
}

std::string certificate_json(const Certificate& cert) { return certificate_object(cert).dump(2) + "\n"; }

std::string root_count_json(const RootCount& rc) {
  json v;
  v["nu"] = rc.nu;
  v["j"] = rc.count;
  v["contour"] = {rc.contour[0].real(), rc.contour[0].imag(), rc.contour[1].real(),
                  rc.contour[1].imag()};
  v["winding_residual"] = rc.winding_residual;
  v["min_boundary_modulus"] = rc.min_boundary_modulus;
  v["panels"] = rc.panels;
  return v.dump(2) + "\n";
}

std::string small_delay_json(const SmallDelayReport& s) {
  json v;
  v["n"] = s.n;
  v["r"] = s.r;
  v["lambda"] = s.lambda;
  v["tau"] = s.tau;
  v["threshold_frequency"] = s.threshold_frequency;
  v["threshold_ryabov_driver"] = s.threshold_ryabov_driver;
  v["threshold_chicone"] = s.threshold_chicone;
  v["verdict_frequency"] = to_string(s.verdict_frequency);
  v["verdict_ryabov_driver"] = to_string(s.verdict_ryabov_driver);
  v["verdict_chicone"] = to_string(s.verdict_chicone);
  v["nu"] = number_or_string(s.nu);
  v["dimension"] = s.dimension;
  return v.dump(2) + "\n";
}

std::string goodwin_point_json(const goodwin::Point& p) {
  json v;
  v["tau"] = p.tau;
  v["lambda"] = p.lambda;
  v["theta"] = p.theta;
  v["rho_cap"] = p.rho_cap;
  v["rho_star"] = p.rho_star ? json(*p.rho_star) : json(nullptr);
  v["margin"] = number_or_string(p.margin);
  v["certified"] = p.certified();
  v["reason"] = p.reason;
  v["fixed_point"] = {p.fixed_point[0], p.fixed_point[1], p.fixed_point[2]};
  v["certificate"] = p.certificate ? certificate_object(*p.certificate) : json(nullptr);
  return v.dump(2) + "\n";
}

std::string certificate_text(const Certificate& c) {
  std::vector<std::pair<std::string, std::string>> lines{
      {"verdict", to_string(c.verdict)},
      {"kind", to_string(c.kind)},
      {"check", c.check},
      {"nu", format_double(c.nu)},
      {"j", c.j ? std::to_string(*c.j) : "unknown"},
      {"margin", format_double(c.margin)},
      {"sup_value", format_double(c.sup_value)},
      {"worst_omega", format_double(c.worst_omega)},
      {"tail_bound", format_double(c.tail_bound)},
      {"omega_cap", format_double(c.sweep.omega_cap)},
  };
  if (!c.note.empty()) lines.emplace_back("note", c.note);
  return text_lines(lines);
}

std::string root_count_text(const RootCount& rc) {
  return text_lines({
      {"nu", format_double(rc.nu)},
      {"j", std::to_string(rc.count)},
      {"contour", "[" + format_double(rc.contour[0].real()) + ", " +
                      format_double(rc.contour[1].real()) + "] x [" +
                      format_double(rc.contour[0].imag()) + ", " +
                      format_double(rc.contour[1].imag()) + "]"},
      {"winding_residual", format_double(rc.winding_residual)},
      {"min_boundary_modulus", format_double(rc.min_boundary_modulus)},
      {"panels", std::to_string(rc.panels)},
  });
}

std::string small_delay_text(const SmallDelayReport& s) {
  return text_lines({
      {"n", std::to_string(s.n)},
      {"r", std::to_string(s.r)},
      {"lambda", format_double(s.lambda)},
      {"tau", format_double(s.tau)},
      {"threshold_frequency", format_double(s.threshold_frequency)},
      {"threshold_ryabov_driver", format_double(s.threshold_ryabov_driver)},
      {"threshold_chicone", format_double(s.threshold_chicone)},
      {"verdict_frequency", to_string(s.verdict_frequency)},
      {"verdict_ryabov_driver", to_string(s.verdict_ryabov_driver)},
      {"verdict_chicone", to_string(s.verdict_chicone)},
      {"nu", format_double(s.nu)},
      {"dimension", std::to_string(s.dimension)},
  });
}

std::string goodwin_point_text(const goodwin::Point& p) {
  std::vector<std::pair<std::string, std::string>> lines{
      {"tau", format_double(p.tau)},
      {"lambda", format_double(p.lambda)},
      {"theta", format_double(p.theta)},
      {"rho_cap", format_double(p.rho_cap)},
      {"certified", p.certified() ? "1" : "0"},
      {"rho_star", p.rho_star ? format_double(*p.rho_star) : "none"},
      {"margin", format_double(p.margin)},
      {"reason", p.reason},
      {"fixed_point", format_double(p.fixed_point[0]) + " " + format_double(p.fixed_point[1]) +
                          " " + format_double(p.fixed_point[2])},
  };
  if (p.certificate) lines.emplace_back("j", p.certificate->j ? std::to_string(*p.certificate->j) : "unknown");
  return text_lines(lines);
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "t";
  for (Index i = 0; i < trace.dim(); ++i) out << ",x_" << (i + 1);
  out << "\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << format_double(trace.time(k));
    const Vector& x = trace.states()[k];
    for (Index i = 0; i < x.size(); ++i) out << "," << format_double(x(i));
    out << "\n";
  }
}

void write_region_csv(std::ostream& out, const std::vector<goodwin::RegionRow>& rows) {
  out << "tau,lambda,certified,rho_star,margin,reason\n";
  for (const auto& row : rows) {
    const auto& p = row.point;
    out << format_double(p.tau) << "," << format_double(p.lambda) << ","
        << (p.certified() ? 1 : 0) << "," << (p.rho_star ? format_double(*p.rho_star) : "")
        << "," << format_double(p.margin) << "," << p.reason << "\n";
  }
}

void write_region_svg(std::ostream& out, const std::vector<goodwin::RegionRow>& rows) {
  int nrows = 0;
  int ncols = 0;
  for (const auto& r : rows) {
    nrows = std::max(nrows, r.row + 1);
    ncols = std::max(ncols, r.col + 1);
  }
  const int cell = 12;
  const int pad = 40;
  const int width = 2 * pad + ncols * cell;
  const int height = 2 * pad + nrows * cell;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& r : rows) {
    // lambda grows upwards, tau to the right
    const int x = pad + r.col * cell;
    const int y = pad + (nrows - 1 - r.row) * cell;
    out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
        << "\" fill=\"" << (r.point.certified() ? "#2b7bba" : "#eeeeee") << "\"/>\n";
  }
  out << "<text x=\"" << pad << "\" y=\"" << height - 12 << "\" font-size=\"12\">tau</text>\n";
  out << "<text x=\"8\" y=\"" << pad - 10 << "\" font-size=\"12\">lambda</text>\n";
  out << "</svg>\n";
}

}  // namespace delaycert::io
