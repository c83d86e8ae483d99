#include "qsplit/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "qsplit/errors.hpp"
#include "qsplit/units.hpp"

namespace qsplit {

namespace {

using nlohmann::json;

void expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::Config, where + " must be a JSON object");
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  expect_object(j, where);
  for (auto it = j.begin(); it != j.end(); ++it) {
    const bool ok = std::any_of(allowed.begin(), allowed.end(),
                                [&](const char* k) { return it.key() == k; });
    if (!ok) throw Error(ErrorKind::Config, "unknown key '" + it.key() + "' in " + where);
  }
}

double number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw Error(ErrorKind::Config, where + "." + key + " is required");
  const json& v = j.at(key);
  if (!v.is_number()) throw Error(ErrorKind::Config, where + "." + key + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw Error(ErrorKind::Config, where + "." + key + " must be finite");
  return d;
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

PotentialSpec parse_potential(const json& j) {
  const std::string where = "potential";
  check_keys(j, {"a_nm", "b_nm", "segments", "delta", "mass_me"}, where);
  PotentialSpec p;
  p.mass = number(j, "mass_me", where);
  if (j.contains("delta")) {
    const json& d = j.at("delta");
    check_keys(d, {"x_nm", "w_eV_nm"}, "potential.delta");
    p.delta = DeltaSpike{number(d, "x_nm", "potential.delta"), number(d, "w_eV_nm", "potential.delta")};
    p.a = number_or(j, "a_nm", p.delta->position, where);
    p.b = number_or(j, "b_nm", p.delta->position, where);
    if (p.a != p.delta->position || p.b != p.delta->position)
      throw Error(ErrorKind::GapError, "delta spike needs a = b = its position");
    if (j.contains("segments")) throw Error(ErrorKind::Config, "potential has both segments and delta");
    return p;
  }
  p.a = number(j, "a_nm", where);
  p.b = number(j, "b_nm", where);
  if (!j.contains("segments") || !j.at("segments").is_array())
    throw Error(ErrorKind::Config, "potential.segments must be an array");
  for (const json& s : j.at("segments")) {
    check_keys(s, {"width_nm", "v0_eV"}, "potential.segments[]");
    p.segments.push_back({number(s, "width_nm", "segment"), number(s, "v0_eV", "segment")});
  }
  return p;
}

}  // namespace

std::vector<double> XGridSpec::points() const {
  if (!(step > 0.0) || !(max > min)) throw Error(ErrorKind::Config, "bad x-grid");
  const auto n = static_cast<std::size_t>(std::llround((max - min) / step)) + 1;
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = min + static_cast<double>(i) * step;
  return xs;
}

double Scenario::k0() const {
  if (packet.k0) return *packet.k0;
  return units::wavenumber(*packet.e0, potential.mass());
}

Scenario parse_scenario(const json& j, const std::string& name) {
  check_keys(j, {"schema_version", "name", "potential", "packet", "grids", "times", "timing", "oracle"},
             "scenario");
  Scenario s;
  s.name = j.contains("name") ? j.at("name").get<std::string>() : name;
  if (!j.contains("potential")) throw Error(ErrorKind::Config, "scenario.potential is required");
  s.potential_spec = parse_potential(j.at("potential"));
  s.potential = validate(s.potential_spec);

  if (!j.contains("packet")) throw Error(ErrorKind::Config, "scenario.packet is required");
  const json& pk = j.at("packet");
  check_keys(pk, {"l0_nm", "e0_eV", "k0_inm"}, "packet");
  s.packet.l0 = number(pk, "l0_nm", "packet");
  if (pk.contains("e0_eV") == pk.contains("k0_inm"))
    throw Error(ErrorKind::Config, "packet needs exactly one of e0_eV, k0_inm");
  if (pk.contains("e0_eV")) s.packet.e0 = number(pk, "e0_eV", "packet");
  if (pk.contains("k0_inm")) s.packet.k0 = number(pk, "k0_inm", "packet");
  if (!(s.packet.l0 > 0.0)) throw Error(ErrorKind::Config, "packet.l0_nm must be positive");
  if (!(s.k0() > 0.0)) throw Error(ErrorKind::Config, "packet energy must be positive");

  if (j.contains("grids")) {
    const json& g = j.at("grids");
    check_keys(g, {"k", "x"}, "grids");
    if (g.contains("k")) {
      const json& k = g.at("k");
      check_keys(k, {"n", "span_sigmas"}, "grids.k");
      const double n = number_or(k, "n", static_cast<double>(s.kgrid.n), "grids.k");
      if (!(n >= 16) || n != std::floor(n)) throw Error(ErrorKind::Config, "grids.k.n must be an integer >= 16");
      s.kgrid.n = static_cast<std::size_t>(n);
      s.kgrid.span_sigmas = number_or(k, "span_sigmas", s.kgrid.span_sigmas, "grids.k");
    }
    if (g.contains("x")) {
      const json& x = g.at("x");
      check_keys(x, {"min", "max", "step"}, "grids.x");
      s.xgrid.min = number_or(x, "min", s.xgrid.min, "grids.x");
      s.xgrid.max = number_or(x, "max", s.xgrid.max, "grids.x");
      s.xgrid.step = number_or(x, "step", s.xgrid.step, "grids.x");
      if (!(s.xgrid.step > 0.0) || !(s.xgrid.max > s.xgrid.min))
        throw Error(ErrorKind::Config, "grids.x needs min < max and step > 0");
    }
  }

  if (j.contains("times")) {
    if (!j.at("times").is_array()) throw Error(ErrorKind::Config, "times must be an array of ps");
    s.times_ps.clear();
    for (const json& t : j.at("times")) {
      if (!t.is_number()) throw Error(ErrorKind::Config, "times must be numbers");
      s.times_ps.push_back(t.get<double>());
    }
  }

  if (j.contains("timing")) {
    const json& t = j.at("timing");
    check_keys(t, {"L1_nm", "L2_nm", "window_ps", "scan_fs"}, "timing");
    s.timing.L1 = number_or(t, "L1_nm", s.timing.L1, "timing");
    s.timing.L2 = number_or(t, "L2_nm", s.timing.L2, "timing");
    s.timing.scan_dt = number_or(t, "scan_fs", s.timing.scan_dt, "timing");
    if (t.contains("window_ps")) {
      const json& w = t.at("window_ps");
      if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number())
        throw Error(ErrorKind::Config, "timing.window_ps must be [t_lo, t_hi]");
      s.timing.window_lo = w[0].get<double>();
      s.timing.window_hi = w[1].get<double>();
    }
    if (s.timing.L1 < 0.0 || s.timing.L2 < 0.0)
      throw Error(ErrorKind::Config, "timing distances must be non-negative");
    if (!(s.timing.window_hi > s.timing.window_lo) || !(s.timing.scan_dt > 0.0))
      throw Error(ErrorKind::Config, "timing window must be increasing with scan_fs > 0");
  }

  if (j.contains("oracle")) {
    const json& o = j.at("oracle");
    check_keys(o, {"x_min_nm", "x_max_nm", "dx_nm", "dt_fs", "levels", "leak_tol"}, "oracle");
    s.oracle.x_min = number_or(o, "x_min_nm", s.oracle.x_min, "oracle");
    s.oracle.x_max = number_or(o, "x_max_nm", s.oracle.x_max, "oracle");
    s.oracle.dx = number_or(o, "dx_nm", s.oracle.dx, "oracle");
    s.oracle.dt = number_or(o, "dt_fs", s.oracle.dt, "oracle");
    s.oracle.levels = static_cast<int>(number_or(o, "levels", s.oracle.levels, "oracle"));
    s.oracle.leak_tol = number_or(o, "leak_tol", s.oracle.leak_tol, "oracle");
    if (!(s.oracle.dx > 0.0) || !(s.oracle.dt > 0.0) || s.oracle.levels < 1 ||
        !(s.oracle.x_max > s.oracle.x_min))
      throw Error(ErrorKind::Config, "bad oracle block");
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open scenario " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, "scenario " + path.string() + ": " + e.what());
  }
  try {
    return parse_scenario(j, path.stem().string());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, "scenario " + path.string() + ": " + e.what());
  }
}

Setup prepare(const Scenario& s) {
  Setup st;
  st.pot = s.potential;
  st.k0 = s.k0();
  st.l0 = s.packet.l0;
  st.grid = make_kgrid(st.k0, st.l0, s.kgrid.n, s.kgrid.span_sigmas);
  st.packet = gaussian_spectrum(st.l0, st.k0, st.grid);
  st.table = build_param_table(st.pot, st.grid);
  return st;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Config, "not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorKind::Config, "empty number list");
  return out;
}

}  // namespace qsplit
