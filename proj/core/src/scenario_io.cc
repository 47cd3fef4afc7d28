#include "cavityspdc/scenario_io.hh"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace spdc {

namespace {

struct KeyValue {
  std::string value;
  int line = 0;
  bool used = false;
};

struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, KeyValue> kv;
};

struct ScenarioText {
  std::string origin;
  std::map<std::string, KeyValue> top;  // keys before any section
  std::vector<Section> sections;

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw ParseError(origin + ":" + std::to_string(line) + ": " + msg);
  }
};

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

ScenarioText tokenize(const std::string& text, const std::string& origin) {
  ScenarioText out;
  out.origin = origin;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  Section* current = nullptr;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const size_t hash = raw.find_first_of("#;");
    std::string line = trim(hash == std::string::npos ? raw
                                                      : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        out.fail(lineno, "unterminated section header '" + line + "'");
      Section s;
      s.name = trim(line.substr(1, line.size() - 2));
      s.line = lineno;
      if (s.name.empty()) out.fail(lineno, "empty section name");
      out.sections.push_back(std::move(s));
      current = &out.sections.back();
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      out.fail(lineno, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) out.fail(lineno, "empty key");
    if (value.empty()) out.fail(lineno, "empty value for '" + key + "'");
    auto& table = current ? current->kv : out.top;
    if (table.count(key))
      out.fail(lineno, "duplicate key '" + key + "'");
    table[key] = {value, lineno, false};
  }
  return out;
}

// typed getters; every access marks the key used so leftovers can be
// reported as unknown at the end
class SectionReader {
 public:
  SectionReader(const ScenarioText& text, Section& sec)
      : text_(text), sec_(sec) {}

  bool has(const std::string& key) const { return sec_.kv.count(key) > 0; }

  std::string str(const std::string& key) {
    KeyValue* kv = find(key);
    if (!kv)
      text_.fail(sec_.line, "[" + sec_.name + "] is missing key '" + key +
                                "'");
    return kv->value;
  }
  std::string str_or(const std::string& key, const std::string& dflt) {
    KeyValue* kv = find(key);
    return kv ? kv->value : dflt;
  }
  double number(const std::string& key) { return to_number(key, str(key)); }
  double number_or(const std::string& key, double dflt) {
    KeyValue* kv = find(key);
    return kv ? to_number(key, kv->value) : dflt;
  }
  bool flag_or(const std::string& key, bool dflt) {
    KeyValue* kv = find(key);
    if (!kv) return dflt;
    const std::string& v = kv->value;
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    text_.fail(kv->line, "'" + key + "' must be a boolean, got '" + v + "'");
  }
  int line(const std::string& key) {
    KeyValue* kv = find(key);
    return kv ? kv->line : sec_.line;
  }

  void finish() {
    for (const auto& [key, kv] : sec_.kv)
      if (!kv.used)
        text_.fail(kv.line,
                   "unknown key '" + key + "' in [" + sec_.name + "]");
  }

 private:
  KeyValue* find(const std::string& key) {
    auto it = sec_.kv.find(key);
    if (it == sec_.kv.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }
  double to_number(const std::string& key, const std::string& v) {
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || errno == ERANGE)
      text_.fail(sec_.kv.at(key).line,
                 "'" + key + "' must be a number, got '" + v + "'");
    return x;
  }

  const ScenarioText& text_;
  Section& sec_;
};

Axis parse_axis(const ScenarioText& t, SectionReader& r,
                const std::string& key, Axis dflt) {
  const std::string v = r.str_or(key, dflt == Axis::y ? "y" : "z");
  if (v == "y") return Axis::y;
  if (v == "z") return Axis::z;
  t.fail(r.line(key), "'" + key + "' must be 'y' or 'z', got '" + v + "'");
}

Section* single_section(ScenarioText& t, const std::string& name,
                        bool required) {
  Section* found = nullptr;
  for (Section& s : t.sections) {
    if (s.name != name) continue;
    if (found)
      t.fail(s.line, "section [" + name + "] appears more than once");
    found = &s;
  }
  if (!found && required)
    t.fail(1, "missing required section [" + name + "]");
  return found;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  ScenarioText t = tokenize(text, origin);
  Scenario sc;

  {  // top-level metadata
    Section meta{"", 1, t.top};
    SectionReader r(t, meta);
    sc.name = r.str_or("name", "scenario");
    r.finish();
    t.top = meta.kv;
  }

  CrystalSpec& cry = sc.crystal;
  {
    SectionReader r(t, *single_section(t, "crystal", true));
    const std::string material = r.str_or("material", "ktp");
    if (material != "ktp")
      t.fail(r.line("material"),
             "unknown material '" + material + "' (supported: ktp)");
    cry.axis_y = ktp_axis_y();
    cry.axis_z = ktp_axis_z();
    cry.length_m = r.number("length_mm") * 1e-3;
    cry.poling_period_m = r.number("poling_um") * 1e-6;
    cry.temperature_c = r.number("temperature_c");
    cry.signal_wavelength_m = r.number("signal_nm") * 1e-9;
    cry.idler_wavelength_m = r.number("idler_nm") * 1e-9;
    cry.pump_axis = parse_axis(t, r, "pump_axis", Axis::y);
    cry.signal_axis = parse_axis(t, r, "signal_axis", Axis::z);
    cry.idler_axis = parse_axis(t, r, "idler_axis", Axis::y);
    bool auto_trim = false;
    for (auto [key, axis] : {std::pair{"trim_y", Axis::y},
                             std::pair{"trim_z", Axis::z}}) {
      if (!r.has(key)) continue;
      const std::string v = r.str(key);
      SellmeierModel& m = axis == Axis::y ? cry.axis_y : cry.axis_z;
      if (v == "auto") {
        if (axis != cry.signal_axis)
          t.fail(r.line(key),
                 std::string(key) + " = auto is only defined on the signal "
                                    "axis");
        auto_trim = true;
      } else {
        char* end = nullptr;
        m.trim = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0')
          t.fail(r.line(key), std::string("'") + key +
                                  "' must be a number or 'auto'");
      }
    }
    cry.validate();
    if (auto_trim) {
      const double trim = calibrate_signal_trim(cry);
      (cry.signal_axis == Axis::y ? cry.axis_y : cry.axis_z).trim = trim;
    }
    r.finish();
  }

  CavitySpec& cav = sc.cavity;
  {
    SectionReader r(t, *single_section(t, "cavity", true));
    cav.R1_signal = r.number("R1_signal");
    cav.R1_idler = r.number("R1_idler");
    cav.R2_signal = r.number("R2_signal");
    cav.R2_idler = r.number("R2_idler");
    cav.r_p = r.number_or("pump_reflectivity", 0.0);
    cav.phi_p = r.number_or("pump_phase_rad", 0.0);
    cav.delta1_signal = r.number_or("delta1_signal_rad", 0.0);
    cav.delta2_signal = r.number_or("delta2_signal_rad", 0.0);
    cav.delta1_idler = r.number_or("delta1_idler_rad", 0.0);
    cav.delta2_idler = r.number_or("delta2_idler_rad", 0.0);
    cav.alpha = r.number_or("loss_per_m", 0.0);
    cav.validate();
    r.finish();
  }

  FrequencyGrid& grid = sc.grid;
  double span_modes = 3.0;
  bool center_on_comb = true;
  {
    SectionReader r(t, *single_section(t, "grid", true));
    const double points = r.number_or("points", 4096);
    if (points < 2 || points != std::floor(points) || points > 1e7)
      t.fail(r.line("points"), "'points' must be an integer >= 2");
    grid.n_s = grid.n_i = int(points);
    span_modes = r.number_or("span_modes", 3.0);
    if (!(span_modes > 0.0))
      t.fail(r.line("span_modes"), "'span_modes' must be > 0");
    center_on_comb = r.flag_or("center_on_resonance", true);
    grid.relaxed_guard = r.flag_or("relaxed_guard", false);
    r.finish();
  }

  // resolve centers and spans; the pump rides on the sum of the centers
  const double ws0 = omega_from_wavelength(cry.signal_wavelength_m);
  const double wi0 = omega_from_wavelength(cry.idler_wavelength_m);
  if (center_on_comb &&
      (cav.resonant(Field::signal) || cav.resonant(Field::idler))) {
    const ResonantCenters ctr = center_on_resonances(cry, cav);
    grid.center_s = ctr.omega_s;
    grid.center_i = ctr.omega_i;
  } else {
    grid.center_s = ws0;
    grid.center_i = wi0;
  }
  grid.span_s = span_modes * two_pi * fsr(cry, cry.model(Field::signal),
                                          cry.signal_wavelength_m,
                                          cry.temperature_c);
  grid.span_i = span_modes * two_pi * fsr(cry, cry.model(Field::idler),
                                          cry.idler_wavelength_m,
                                          cry.temperature_c);
  grid.validate();
  const double omega_p0 = grid.center_s + grid.center_i;

  {
    SectionReader r(t, *single_section(t, "pump", true));
    const std::string shape = r.str("shape");
    if (shape == "gaussian") {
      sc.pump = PumpSpec::gaussian_pulse(omega_p0, r.number("tau_ns") * 1e-9);
    } else if (shape == "square") {
      sc.pump = PumpSpec::square_pulse(omega_p0, r.number("tau_ns") * 1e-9);
    } else if (shape == "cw") {
      // a cw drive only needs to be far narrower than everything else in
      // the problem: a thousandth of the narrowest cavity line, or of the
      // grid span when nothing is resonant
      double width = std::min(grid.span_s, grid.span_i) / 1000.0;
      for (Field f : {Field::signal, Field::idler})
        if (cav.resonant(f))
          width = std::min(width,
                           omega_from_hz(linewidth(cav, cry, f)) / 1000.0);
      sc.pump = PumpSpec::cw(omega_p0, width);
    } else {
      t.fail(r.line("shape"),
             "'shape' must be cw, gaussian or square, got '" + shape + "'");
    }
    r.finish();
  }

  for (Section& s : t.sections) {
    if (s.name == "crystal" || s.name == "cavity" || s.name == "grid" ||
        s.name == "pump")
      continue;
    if (s.name != "filter")
      t.fail(s.line, "unknown section [" + s.name + "]");
    SectionReader r(t, s);
    FilterSpec f;
    const std::string axis = r.str_or("axis", "idler");
    if (axis == "signal")
      f.axis = Field::signal;
    else if (axis == "idler")
      f.axis = Field::idler;
    else
      t.fail(r.line("axis"), "'axis' must be signal or idler");
    const std::string kind = r.str_or("kind", "lorentzian");
    if (kind == "lorentzian")
      f.kind = FilterSpec::Kind::lorentzian;
    else if (kind == "airy")
      f.kind = FilterSpec::Kind::airy;
    else
      t.fail(r.line("kind"), "'kind' must be lorentzian or airy");
    f.fwhm_hz = r.number("fwhm_ghz") * 1e9;
    f.etalon_fsr_hz = r.number_or("etalon_fsr_ghz", 0.0) * 1e9;
    const double det = r.number_or("center_detuning_ghz", 0.0) * 1e9;
    f.center = (f.axis == Field::signal ? grid.center_s : grid.center_i) +
               omega_from_hz(det);
    f.validate();
    sc.filters.push_back(f);
    r.finish();
  }

  sc.validate();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open scenario file");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string name = path;
  const size_t slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const size_t dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  Scenario sc = parse_scenario(ss.str(), path);
  if (sc.name == "scenario") sc.name = name;
  return sc;
}

}  // namespace spdc
