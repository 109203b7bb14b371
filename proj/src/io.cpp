#include "srgrobust/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace srg::io {

namespace {

Json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double get_num(const Json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "pi") return kPi;
    if (s == "-pi") return -kPi;
  }
  throw InputError(std::string("expected a number for '") + what + "'");
}

double field(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return get_num(j.at(key), key);
}

MatR rows_to_matrix(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected an array of rows");
  if (j.empty()) return MatR(0, 0);
  // A flat array of numbers is a single row.
  if (!j.front().is_array()) {
    MatR m(1, j.size());
    for (size_t c = 0; c < j.size(); ++c) m(0, c) = get_num(j[c], what);
    return m;
  }
  const size_t cols = j.front().size();
  MatR m(j.size(), cols);
  for (size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw InputError(std::string(what) + ": ragged rows");
    for (size_t c = 0; c < cols; ++c) m(r, c) = get_num(j[r][c], what);
  }
  return m;
}

cplx point(const Json& j, const char* what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {get_num(j[0], what), get_num(j[1], what)};
  throw InputError(std::string(what) + ": expected a number or [re, im]");
}

}  // namespace

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("'" + path + "': " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("write failed for '" + path + "'");
}

MatC matrix_from_json(const Json& j) {
  if (j.is_object() && j.contains("matrix")) return matrix_from_json(j.at("matrix"));
  if (j.is_object()) {
    if (!j.contains("re")) throw InputError("matrix: expected rows or {\"re\", \"im\"}");
    const MatR re = rows_to_matrix(j.at("re"), "re");
    MatR im = MatR::Zero(re.rows(), re.cols());
    if (j.contains("im")) im = rows_to_matrix(j.at("im"), "im");
    if (im.rows() != re.rows() || im.cols() != re.cols()) throw InputError("matrix: re and im differ in shape");
    MatC m(re.rows(), re.cols());
    m.real() = re;
    m.imag() = im;
    return m;
  }
  return rows_to_matrix(j, "matrix").cast<cplx>();
}

MatR real_matrix_from_json(const Json& j) {
  const MatC m = matrix_from_json(j);
  if (m.imag().cwiseAbs().maxCoeff() != 0.0) throw InputError("expected a real matrix");
  return m.real();
}

Json matrix_to_json(const MatC& m) {
  Json re = Json::array(), im = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json a = Json::array(), b = Json::array();
    for (int c = 0; c < m.cols(); ++c) {
      a.push_back(num(m(r, c).real()));
      b.push_back(num(m(r, c).imag()));
    }
    re.push_back(a);
    im.push_back(b);
  }
  return {{"re", re}, {"im", im}};
}

lti::StateSpace state_space_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("state space: expected an object with A, B, C, D");
  lti::StateSpace s;
  auto get = [&](const char* k) {
    if (!j.contains(k)) throw InputError(std::string("state space: missing '") + k + "'");
    const auto& v = j.at(k);
    return v.is_number() ? MatR::Constant(1, 1, v.get<double>()) : rows_to_matrix(v, k);
  };
  s.a = get("A");
  s.b = get("B");
  s.c = get("C");
  s.d = get("D");
  s.validate();
  return s;
}

Json state_space_to_json(const lti::StateSpace& s) {
  auto rows = [](const MatR& m) {
    Json out = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
      Json row = Json::array();
      for (int c = 0; c < m.cols(); ++c) row.push_back(num(m(r, c)));
      out.push_back(row);
    }
    return out;
  };
  return {{"A", rows(s.a)}, {"B", rows(s.b)}, {"C", rows(s.c)}, {"D", rows(s.d)}};
}

geometry::Region region_from_json(const Json& j) {
  using geometry::Region;
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw InputError("region: expected an object with a string 'type'");
  const auto t = j.at("type").get<std::string>();
  Region r;
  auto parts = [&] {
    if (!j.contains("parts") || !j.at("parts").is_array()) throw InputError("region: '" + t + "' needs 'parts'");
    std::vector<Region> out;
    for (const auto& p : j.at("parts")) out.push_back(region_from_json(p));
    return out;
  };
  auto of = [&] {
    if (!j.contains("of")) throw InputError("region: '" + t + "' needs 'of'");
    return region_from_json(j.at("of"));
  };
  if (t == "disc") {
    const cplx c = j.contains("center") ? point(j.at("center"), "center") : cplx{0.0, 0.0};
    r = Region::disc(c, field(j, "radius"));
  } else if (t == "cone") {
    r = Region::cone(field(j, "alpha"), field(j, "beta"));
  } else if (t == "sector") {
    r = Region::sector(field(j, "gamma"), field(j, "alpha"), field(j, "beta"));
  } else if (t == "half_plane") {
    r = Region::half_plane(field(j, "theta"));
  } else if (t == "annulus_sector") {
    std::vector<geometry::ArcSet::Interval> arcs;
    if (!j.contains("arcs")) throw InputError("region: annulus_sector needs 'arcs'");
    for (const auto& a : j.at("arcs")) {
      if (!a.is_array() || a.size() != 2) throw InputError("region: arcs are [lo, hi] pairs");
      arcs.push_back({get_num(a[0], "arcs"), get_num(a[1], "arcs")});
    }
    r = Region::annulus_sector(field(j, "gamma_lo"), field(j, "gamma_hi"), arcs);
  } else if (t == "points") {
    std::vector<cplx> pts;
    if (!j.contains("points")) throw InputError("region: points needs 'points'");
    for (const auto& p : j.at("points")) pts.push_back(point(p, "points"));
    r = Region::point_set(pts);
  } else if (t == "union") {
    r = Region::union_of(parts());
  } else if (t == "intersection") {
    r = Region::intersection_of(parts());
  } else if (t == "complement") {
    r = Region::complement_of(of());
  } else if (t == "mirror") {
    r = Region::mirror_of(of(), field(j, "theta"));
  } else if (t == "inverse_negate") {
    r = Region::inverse_negate_of(of());
  } else if (t == "whole") {
    r = Region::whole();
  } else if (t == "empty") {
    r = Region::empty();
  } else {
    throw InputError("region: unknown type '" + t + "'");
  }
  if (j.contains("tol")) r = r.with_tol(field(j, "tol"));
  return r;
}

lti::FrequencyGrid parse_grid(const std::string& spec) {
  std::vector<std::string> f;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) f.push_back(p);
  if (f.size() != 4 || f[0] != "log") throw InputError("grid: expected log:lo:hi:n, got '" + spec + "'");
  try {
    const double lo = std::stod(f[1]);
    const double hi = std::stod(f[2]);
    const int n = std::stoi(f[3]);
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw InputError("grid: need 0 < lo < hi and n >= 2");
    return lti::FrequencyGrid::log(lo, hi, n);
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const InputError*>(&e)) throw;
    throw InputError("grid: malformed '" + spec + "'");
  }
}

Json verdict_to_json(const mrn::MrnVerdict& v) {
  Json j;
  j["holds"] = v.holds;
  j["margin"] = num(v.margin);
  j["method"] = v.method;
  j["exact"] = v.exact;
  j["boundary"] = v.boundary;
  if (std::isfinite(v.min_det)) j["min_det"] = v.min_det;
  if (v.witness) j["witness"] = matrix_to_json(*v.witness);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

Json verdict_to_json(const lti::RsVerdict& v) {
  Json j;
  j["robustly_stable"] = v.robustly_stable;
  j["margin"] = num(v.margin);
  j["worst_frequency"] = num(v.worst_frequency);
  j["method"] = v.method;
  if (!v.note.empty()) j["note"] = v.note;
  j["warnings"] = v.warnings;
  Json d = Json::array();
  for (const auto& r : v.detail) d.push_back({{"omega", num(r.omega)}, {"margin", num(r.margin)}, {"holds", r.holds}});
  j["detail"] = d;
  return j;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace srg::io
