#include "cavityspdc/temporal.hh"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

namespace spdc {

namespace {

constexpr double ln2 = 0.6931471805599453;
constexpr double tau_circ = 6.283185307179586;  // 2 pi

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void Histogram::validate() const {
  if (centers.size() != counts.size())
    throw DomainError("histogram: centers and counts disagree in size");
  for (size_t i = 1; i < centers.size(); ++i)
    if (!(centers[i] > centers[i - 1]))
      throw DomainError("histogram: centers must be strictly increasing");
  for (double c : counts)
    if (!(c >= 0.0) || !std::isfinite(c))
      throw DomainError("histogram: counts must be finite and >= 0");
}

double FitReport::param(const std::string& name) const {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return params[i];
  throw DomainError("fit report: no parameter named " + name);
}

double FitReport::uncertainty(const std::string& name) const {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return sigma[i];
  throw DomainError("fit report: no parameter named " + name);
}

// --- models ---

double cross_correlation_model(double dnu_s, double dnu_i, double amp,
                               double base, double t0, double t) {
  const double dt = t - t0;
  const double rate = dt < 0.0 ? tau_circ * dnu_s * dt : -tau_circ * dnu_i * dt;
  return base + amp * std::exp(rate);
}

void cross_correlation_gradient(double dnu_s, double dnu_i, double amp,
                                double base, double t0, double t,
                                double grad[5]) {
  (void)base;
  const double dt = t - t0;
  if (dt < 0.0) {
    const double e = std::exp(tau_circ * dnu_s * dt);
    grad[0] = amp * tau_circ * dt * e;   // d/d dnu_s
    grad[1] = 0.0;                        // d/d dnu_i
    grad[2] = e;                          // d/d amp
    grad[3] = 1.0;                        // d/d base
    grad[4] = -amp * tau_circ * dnu_s * e;  // d/d t0
  } else {
    const double e = std::exp(-tau_circ * dnu_i * dt);
    grad[0] = 0.0;
    grad[1] = -amp * tau_circ * dt * e;
    grad[2] = e;
    grad[3] = 1.0;
    grad[4] = amp * tau_circ * dnu_i * e;
  }
}

double hom_model(double visibility, double gamma_s, double base, double dt) {
  const double x = dt / gamma_s;
  return base * (1.0 - visibility / (1.0 + x * x));
}

void hom_gradient(double visibility, double gamma_s, double base, double dt,
                  double grad[3]) {
  const double x = dt / gamma_s;
  const double den = 1.0 + x * x;
  grad[0] = -base / den;                                        // d/dV
  grad[1] = -2.0 * base * visibility * x * x / (den * den * gamma_s);  // d/dgamma
  grad[2] = 1.0 - visibility / den;                             // d/dB
}

// --- Levenberg-Marquardt on finite-difference Jacobians ---

namespace {

struct LmProblem {
  std::function<double(const double*, double)> eval;
  std::vector<std::string> names;
  std::vector<double> lo, hi;  // box; +-inf when unbounded
};

double weighted_rss(const LmProblem& prob, const std::vector<double>& p,
                    const Histogram& h, const std::vector<double>& w) {
  double rss = 0.0;
  for (size_t i = 0; i < h.centers.size(); ++i) {
    const double r = h.counts[i] - prob.eval(p.data(), h.centers[i]);
    rss += w[i] * r * r;
  }
  return rss;
}

FitReport lm_fit(const LmProblem& prob, const Histogram& h, FitWeights wkind,
                 std::vector<double> p) {
  const int n = int(h.centers.size());
  const int k = int(p.size());
  std::vector<double> w(n, 1.0);
  if (wkind == FitWeights::poisson)
    for (int i = 0; i < n; ++i) w[i] = 1.0 / std::max(h.counts[i], 1.0);

  const auto clamp_box = [&](std::vector<double>& q) {
    for (int j = 0; j < k; ++j) q[j] = std::clamp(q[j], prob.lo[j], prob.hi[j]);
  };
  clamp_box(p);

  FitReport rep;
  rep.names = prob.names;
  double rss = weighted_rss(prob, p, h, w);
  rep.rss_trace.push_back(rss);
  double damping = 1e-3;
  Eigen::MatrixXd jac(n, k);
  Eigen::VectorXd resid(n);
  Eigen::MatrixXd jtwj(k, k);
  bool converged = false;
  int it = 0;
  for (; it < 200 && !converged; ++it) {
    // central finite differences with relative step 1e-6 per parameter
    for (int j = 0; j < k; ++j) {
      const double hstep = 1e-6 * std::max(std::abs(p[j]), 1e-12);
      std::vector<double> pp = p, pm = p;
      pp[j] += hstep;
      pm[j] -= hstep;
      for (int i = 0; i < n; ++i)
        jac(i, j) = (prob.eval(pp.data(), h.centers[i]) -
                     prob.eval(pm.data(), h.centers[i])) /
                    (2.0 * hstep);
    }
    for (int i = 0; i < n; ++i)
      resid(i) = h.counts[i] - prob.eval(p.data(), h.centers[i]);
    const Eigen::VectorXd wv =
        Eigen::Map<const Eigen::VectorXd>(w.data(), n);
    jtwj = jac.transpose() * wv.asDiagonal() * jac;
    const Eigen::VectorXd grad = jac.transpose() * wv.asDiagonal() * resid;

    bool stepped = false;
    while (damping < 1e14) {
      Eigen::MatrixXd aug = jtwj;
      for (int j = 0; j < k; ++j)
        aug(j, j) += damping * std::max(jtwj(j, j), 1e-300);
      const Eigen::VectorXd dp = aug.ldlt().solve(grad);
      std::vector<double> trial = p;
      for (int j = 0; j < k; ++j) trial[j] += dp(j);
      clamp_box(trial);
      const double rss_try = weighted_rss(prob, trial, h, w);
      if (std::isfinite(rss_try) && rss_try <= rss) {
        const double drop = rss - rss_try;
        p = trial;
        rss = rss_try;
        rep.rss_trace.push_back(rss);
        damping = std::max(damping * 0.1, 1e-12);
        stepped = true;
        if (drop <= 1e-10 * std::max(rss, 1e-300)) converged = true;
        break;
      }
      damping *= 10.0;
    }
    // no downhill direction at any damping: gradient is numerically zero
    if (!stepped) converged = true;
  }
  rep.iterations = it;
  rep.converged = converged;
  if (!converged)
    throw NonConvergence("fit: iteration cap reached at rss " + fmt(rss));

  rep.params = p;
  rep.rss = rss;
  // covariance from the Jacobian at the optimum, scaled by reduced chi2 so
  // uniform weighting still yields honest error bars
  rep.sigma.assign(k, 0.0);
  if (n > k) {
    const double s2 = rss / double(n - k);
    const Eigen::MatrixXd cov = jtwj.ldlt().solve(
        Eigen::MatrixXd::Identity(k, k)) * s2;
    for (int j = 0; j < k; ++j)
      rep.sigma[j] = cov(j, j) > 0.0 ? std::sqrt(cov(j, j)) : 0.0;
  }
  return rep;
}

bool flat(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return !(*hi > *lo);
}

}  // namespace

FitReport fit_cross_correlation(const Histogram& h, FitWeights w,
                                const std::vector<double>& start) {
  h.validate();
  if (h.centers.size() < 20)
    throw DegenerateData("cross-correlation fit needs at least 20 bins");
  if (flat(h.counts))
    throw DegenerateData("cross-correlation fit: histogram is flat");

  std::vector<double> p0;
  if (!start.empty()) {
    if (start.size() != 5)
      throw DomainError("cross-correlation fit: start needs 5 values");
    p0 = start;
  } else {
    const size_t imax = size_t(std::max_element(h.counts.begin(),
                                                h.counts.end()) -
                               h.counts.begin());
    const double t0 = h.centers[imax];
    const double base = *std::min_element(h.counts.begin(), h.counts.end());
    const double amp = h.counts[imax] - base;
    const double span = h.centers.back() - h.centers.front();
    // half-decay points on both flanks seed the two bandwidths
    double dnu_s = 6.0 / (tau_circ * span), dnu_i = 6.0 / (tau_circ * span);
    for (size_t i = imax; i-- > 0;)
      if (h.counts[i] <= base + 0.5 * amp) {
        dnu_s = ln2 / (tau_circ * (t0 - h.centers[i]));
        break;
      }
    for (size_t i = imax + 1; i < h.centers.size(); ++i)
      if (h.counts[i] <= base + 0.5 * amp) {
        dnu_i = ln2 / (tau_circ * (h.centers[i] - t0));
        break;
      }
    p0 = {dnu_s, dnu_i, amp, base, t0};
  }

  LmProblem prob;
  prob.names = {"dnu_signal_hz", "dnu_idler_hz", "amplitude", "baseline",
                "t0_s"};
  prob.eval = [](const double* p, double t) {
    return cross_correlation_model(p[0], p[1], p[2], p[3], p[4], t);
  };
  const double inf = std::numeric_limits<double>::infinity();
  prob.lo = {1.0, 1.0, 0.0, 0.0, -inf};
  prob.hi = {inf, inf, inf, inf, inf};
  return lm_fit(prob, h, w, p0);
}

FitReport fit_hom(const Histogram& h, FitWeights w,
                  const std::vector<double>& start) {
  h.validate();
  if (h.centers.size() < 10)
    throw DegenerateData("HOM fit needs at least 10 points");
  if (flat(h.counts)) throw DegenerateData("HOM fit: histogram is flat");

  std::vector<double> p0;
  if (!start.empty()) {
    if (start.size() != 3) throw DomainError("HOM fit: start needs 3 values");
    p0 = start;
  } else {
    // baseline from the outer quarter of points on each side
    const size_t n = h.centers.size();
    const size_t edge = std::max<size_t>(1, n / 4);
    double base = 0.0;
    for (size_t i = 0; i < edge; ++i)
      base += h.counts[i] + h.counts[n - 1 - i];
    base /= double(2 * edge);
    const size_t imin = size_t(std::min_element(h.counts.begin(),
                                                h.counts.end()) -
                               h.counts.begin());
    const double vis =
        std::clamp(1.0 - h.counts[imin] / std::max(base, 1e-300), 0.05, 1.0);
    double gamma = (h.centers.back() - h.centers.front()) / 8.0;
    for (size_t i = imin + 1; i < n; ++i)
      if (h.counts[i] >= base * (1.0 - 0.5 * vis)) {
        gamma = h.centers[i] - h.centers[imin];
        break;
      }
    p0 = {vis, gamma, base};
  }

  LmProblem prob;
  prob.names = {"visibility", "gamma_s", "baseline"};
  prob.eval = [](const double* p, double dt) {
    return hom_model(p[0], p[1], p[2], dt);
  };
  const double inf = std::numeric_limits<double>::infinity();
  prob.lo = {0.0, 1e-15, 0.0};
  prob.hi = {1.0, inf, inf};
  return lm_fit(prob, h, w, p0);
}

FitReport fit_linear_g2(const std::vector<double>& power,
                        const std::vector<double>& g2,
                        const std::vector<double>& sigma) {
  if (power.size() != g2.size())
    throw DomainError("g2 power fit: sizes disagree");
  if (!sigma.empty() && sigma.size() != g2.size())
    throw DomainError("g2 power fit: sigma size disagrees");
  const size_t n = power.size();
  if (n < 2) throw DegenerateData("g2 power fit needs at least 2 points");
  const auto [plo, phi] = std::minmax_element(power.begin(), power.end());
  if (!(*phi > *plo))
    throw DegenerateData("g2 power fit: all powers are equal");

  double sw = 0, swx = 0, swxx = 0, swy = 0, swxy = 0;
  for (size_t i = 0; i < n; ++i) {
    double wi = 1.0;
    if (!sigma.empty()) {
      if (!(sigma[i] > 0.0))
        throw DomainError("g2 power fit: sigma entries must be > 0");
      wi = 1.0 / (sigma[i] * sigma[i]);
    }
    sw += wi;
    swx += wi * power[i];
    swxx += wi * power[i] * power[i];
    swy += wi * g2[i];
    swxy += wi * power[i] * g2[i];
  }
  const double det = sw * swxx - swx * swx;
  if (!(std::abs(det) > 0.0))
    throw DegenerateData("g2 power fit: singular normal equations");
  const double intercept = (swxx * swy - swx * swxy) / det;
  const double slope = (sw * swxy - swx * swy) / det;

  FitReport rep;
  rep.names = {"intercept", "slope"};
  rep.params = {intercept, slope};
  for (size_t i = 0; i < n; ++i) {
    const double r = g2[i] - (intercept + slope * power[i]);
    const double wi = sigma.empty() ? 1.0 : 1.0 / (sigma[i] * sigma[i]);
    rep.rss += wi * r * r;
  }
  double s2 = 1.0;
  if (sigma.empty() && n > 2) s2 = rep.rss / double(n - 2);
  rep.sigma = {std::sqrt(std::max(0.0, s2 * swxx / det)),
               std::sqrt(std::max(0.0, s2 * sw / det))};
  rep.converged = true;
  rep.iterations = 0;
  rep.rss_trace = {rep.rss};
  if (intercept < 0.0)
    rep.warnings.push_back(
        "negative zero-power intercept " + fmt(intercept) +
        "; accidental-coincidence model expects a nonnegative floor");
  return rep;
}

double linear_g2_prediction(const FitReport& r, double power) {
  return r.param("intercept") + r.param("slope") * power;
}

double visibility_budget(const std::vector<double>& factors) {
  double v = 1.0;
  for (double f : factors) {
    if (!(f >= 0.0 && f <= 1.0))
      throw DomainError("visibility budget: factors must lie in [0, 1]");
    v *= f;
  }
  return v;
}

std::string LinewidthReport::text() const {
  std::ostringstream os;
  os.precision(4);
  os << std::fixed;
  os << "bandwidth_mhz = " << bandwidth_hz / 1e6 << "\n"
     << "coherence_1_over_2pidnu_ns = " << coherence_1_over_2pidnu_s * 1e9
     << "\n"
     << "coherence_1_over_dnu_ns = " << coherence_1_over_dnu_s * 1e9 << "\n"
     << "halfwidth_ln2_over_pidnu_ns = " << halfwidth_ln2_over_pidnu_s * 1e9
     << "\n";
  return os.str();
}

LinewidthReport predicted_linewidth_from_fit(double dnu_hz) {
  if (!(dnu_hz > 0.0))
    throw DomainError("linewidth report: bandwidth must be > 0");
  LinewidthReport r;
  r.bandwidth_hz = dnu_hz;
  r.coherence_1_over_2pidnu_s = 1.0 / (tau_circ * dnu_hz);
  r.coherence_1_over_dnu_s = 1.0 / dnu_hz;
  r.halfwidth_ln2_over_pidnu_s = 2.0 * ln2 / (tau_circ * dnu_hz);
  return r;
}

}  // namespace spdc
