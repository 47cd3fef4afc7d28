#include "cavityspdc/sweep.hh"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace spdc {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void Scenario::validate() const {
  crystal.validate();
  cavity.validate();
  pump.validate();
  grid.validate();
  for (const FilterSpec& f : filters) f.validate();
}

SweepRow evaluate_point(const Scenario& sc, double tau_p_s,
                        PumpSpec::Shape shape, bool filtered) {
  if (!(tau_p_s > 0.0))
    throw DomainError("evaluate_point: pulse length must be > 0");
  PumpSpec pump = shape == PumpSpec::Shape::square
                      ? PumpSpec::square_pulse(sc.pump.omega_p0, tau_p_s)
                      : PumpSpec::gaussian_pulse(sc.pump.omega_p0, tau_p_s);
  JSAGrid jsa = build_jsa(sc.crystal, sc.cavity, pump, sc.grid);
  if (filtered) jsa = apply_filter(jsa, sc.filters);
  const SchmidtResult r = schmidt_decompose(jsa);
  SweepRow row;
  row.tau_p_s = tau_p_s;
  row.schmidt_K = r.schmidt_K;
  row.purity = r.purity;
  row.central_fraction = central_mode_fraction(jsa, central_window(sc));
  return row;
}

SweepTable purity_sweep(const Scenario& sc, const std::vector<double>& taus,
                        PumpSpec::Shape shape, bool filtered) {
  if (taus.empty()) throw DomainError("purity_sweep: empty pulse-length list");
  for (size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] > 0.0))
      throw DomainError("purity_sweep: pulse lengths must be > 0");
    if (i > 0 && !(taus[i] > taus[i - 1]))
      throw DomainError("purity_sweep: pulse lengths must be strictly "
                        "increasing");
  }
  SweepTable table;
  table.shape = shape;
  table.filtered = filtered;
  table.rows.reserve(taus.size());
  // rows are independent; the heavy inner grid work is already parallel, so
  // the outer loop stays sequential and the row order is the input order
  for (double tau : taus)
    table.rows.push_back(evaluate_point(sc, tau, shape, filtered));
  return table;
}

OptimalPulse optimal_pulse_length(const Scenario& sc, double tau_lo,
                                  double tau_hi, PumpSpec::Shape shape,
                                  bool filtered) {
  if (!(tau_lo > 0.0 && tau_hi > tau_lo))
    throw DomainError("optimal_pulse_length: need 0 < tau_lo < tau_hi");
  std::map<double, double> cache;
  const auto purity_at = [&](double tau) {
    auto it = cache.find(tau);
    if (it != cache.end()) return it->second;
    const double p = evaluate_point(sc, tau, shape, filtered).purity;
    cache.emplace(tau, p);
    return p;
  };

  const double p_lo = purity_at(tau_lo);
  const double p_hi = purity_at(tau_hi);
  const double p_mid = purity_at(0.5 * (tau_lo + tau_hi));
  if (p_mid < std::min(p_lo, p_hi))
    throw NoInteriorMaximum(
        "optimal_pulse_length: purity dips inside [" + fmt(tau_lo * 1e9) +
        ", " + fmt(tau_hi * 1e9) + "] ns; no maximum to bracket");
  if (p_mid <= std::max(p_lo, p_hi)) {
    // monotone profile: report the better edge rather than pretending the
    // golden section found anything
    OptimalPulse out;
    out.boundary = true;
    out.tau_p_s = p_lo >= p_hi ? tau_lo : tau_hi;
    out.purity = std::max(p_lo, p_hi);
    return out;
  }

  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);  // golden ratio - 1
  double a = tau_lo, b = tau_hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = purity_at(c), fd = purity_at(d);
  while (b - a > 0.01e-9) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = purity_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = purity_at(d);
    }
  }
  OptimalPulse out;
  out.tau_p_s = fc > fd ? c : d;
  out.purity = std::max(fc, fd);
  return out;
}

double central_mode_fraction(const JSAGrid& jsa, const ModeWindow& w) {
  jsa.validate();
  if (!jsa.normalized)
    throw DomainError("central_mode_fraction: grid must be normalized");
  if (!(w.hi_s > w.lo_s && w.hi_i > w.lo_i))
    throw DomainError("central_mode_fraction: empty window");
  const FrequencyGrid& g = jsa.grid;
  const double slack_s = 0.5 * g.step_s(), slack_i = 0.5 * g.step_i();
  if (w.lo_s < g.omega_s(0) - slack_s ||
      w.hi_s > g.omega_s(g.n_s - 1) + slack_s ||
      w.lo_i < g.omega_i(0) - slack_i ||
      w.hi_i > g.omega_i(g.n_i - 1) + slack_i)
    throw WindowOffGrid("central_mode_fraction: window leaves the grid");
  double inside = 0.0;
  for (int j = 0; j < g.n_s; ++j) {
    const double ws = g.omega_s(j);
    if (ws < w.lo_s || ws > w.hi_s) continue;
    for (int k = 0; k < g.n_i; ++k) {
      const double wi = g.omega_i(k);
      if (wi < w.lo_i || wi > w.hi_i) continue;
      inside += std::norm(jsa.amp(j, k));
    }
  }
  return inside * g.step_s() * g.step_i();
}

ModeWindow central_window(const Scenario& sc) {
  const CrystalSpec& c = sc.crystal;
  const double half_s = pi * fsr(c, c.model(Field::signal),
                                 c.signal_wavelength_m, c.temperature_c);
  const double half_i = pi * fsr(c, c.model(Field::idler),
                                 c.idler_wavelength_m, c.temperature_c);
  ModeWindow w;
  w.lo_s = sc.grid.center_s - half_s;
  w.hi_s = sc.grid.center_s + half_s;
  w.lo_i = sc.grid.center_i - half_i;
  w.hi_i = sc.grid.center_i + half_i;
  return w;
}

double escape_efficiency(const CavitySpec& cav, Field f, double length_m) {
  const double t1 = 1.0 - cav.R1(f);
  const double t2 = 1.0 - cav.R2(f);
  const double loss = 2.0 * cav.alpha * length_m;
  const double denom = t1 + t2 + loss;
  if (!(denom > 0.0)) return 0.0;  // lossless sealed cavity, nothing escapes
  return std::clamp(t2 / denom, 0.0, 1.0);
}

HeraldingBudget heralding_budget(const std::vector<double>& factors,
                                 double detector_efficiency) {
  if (!(detector_efficiency > 0.0 && detector_efficiency <= 1.0))
    throw DomainError("heralding budget: detector efficiency must be in "
                      "(0, 1]");
  HeraldingBudget b;
  for (double f : factors) {
    if (!(f >= 0.0 && f <= 1.0))
      throw DomainError("heralding budget: factors must lie in [0, 1]");
    b.corrected *= f;
  }
  b.raw = b.corrected * detector_efficiency;
  return b;
}

}  // namespace spdc
