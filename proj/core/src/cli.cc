#include "cavityspdc/cli.hh"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cavityspdc/csv.hh"
#include "cavityspdc/prng.hh"
#include "cavityspdc/scenario_io.hh"
#include "cavityspdc/schmidt.hh"
#include "cavityspdc/svg.hh"
#include "cavityspdc/sweep.hh"
#include "cavityspdc/temporal.hh"

namespace spdc::cli {

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

void ensure_outdir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw DomainError("cannot create output directory " + dir + ": " +
                      ec.message());
}

// shared flags of the scenario-driven commands
struct ScenarioArgs {
  std::string scenario_path;
  std::string out_dir;
  int points = 0;       // 0 keeps the scenario grid
  bool relaxed = false;
  double tau_ns = 0.0;  // 0 keeps the scenario pump

  void attach(CLI::App* cmd, bool with_overrides = true) {
    cmd->add_option("--scenario", scenario_path, "scenario file to load")
        ->required();
    cmd->add_option("--out", out_dir, "output directory; created on demand")
        ->required();
    if (with_overrides) {
      cmd->add_option("--points", points,
                      "override the grid points per axis");
      cmd->add_flag("--relaxed", relaxed,
                    "accept grid steps coarser than linewidth/8");
      cmd->add_option("--tau-ns", tau_ns,
                      "override the pump pulse length in ns");
    }
  }

  Scenario load() const {
    Scenario sc = load_scenario(scenario_path);
    if (points != 0) {
      if (points < 2) throw DomainError("--points must be >= 2");
      sc.grid.n_s = sc.grid.n_i = points;
    }
    if (relaxed) sc.grid.relaxed_guard = true;
    if (tau_ns != 0.0) {
      if (!(tau_ns > 0.0)) throw DomainError("--tau-ns must be > 0");
      if (sc.pump.shape == PumpSpec::Shape::cw)
        throw DomainError("--tau-ns does not apply to a cw scenario");
      sc.pump = sc.pump.shape == PumpSpec::Shape::square
                    ? PumpSpec::square_pulse(sc.pump.omega_p0, tau_ns * 1e-9)
                    : PumpSpec::gaussian_pulse(sc.pump.omega_p0,
                                               tau_ns * 1e-9);
    }
    return sc;
  }
};

double offset_ghz(double omega, double center) {
  return hz_from_omega(omega - center) / 1e9;
}

// --- jsi ---

int cmd_jsi(const ScenarioArgs& args, bool filtered, bool amplitude) {
  Scenario sc = args.load();
  ensure_outdir(args.out_dir);
  JSAGrid jsa = build_jsa(sc.crystal, sc.cavity, sc.pump, sc.grid);
  if (filtered) jsa = apply_filter(jsa, sc.filters);

  std::vector<std::string> header = {"signal_offset_ghz", "idler_offset_ghz",
                                     "intensity"};
  if (amplitude) {
    header.push_back("amplitude_re");
    header.push_back("amplitude_im");
  }
  CsvWriter csv(join(args.out_dir, "jsi.csv"), header);
  for (int j = 0; j < jsa.grid.n_s; ++j)
    for (int k = 0; k < jsa.grid.n_i; ++k) {
      const std::complex<double> a = jsa.amp(j, k);
      std::vector<double> row = {
          offset_ghz(jsa.grid.omega_s(j), jsa.grid.center_s),
          offset_ghz(jsa.grid.omega_i(k), jsa.grid.center_i), std::norm(a)};
      if (amplitude) {
        row.push_back(a.real());
        row.push_back(a.imag());
      }
      csv.row(row);
    }
  csv.commit();

  // marginals in long form so unequal axis lengths stay representable
  CsvWriter mcsv(join(args.out_dir, "marginals.csv"),
                 {"axis", "offset_ghz", "density_per_ghz"});
  const Spectrum ms = marginal(jsa, Field::signal);
  const Spectrum mi = marginal(jsa, Field::idler);
  for (size_t i = 0; i < ms.omega.size(); ++i)
    mcsv.row({0.0, offset_ghz(ms.omega[i], jsa.grid.center_s),
              ms.value[i] * omega_from_hz(1e9)});
  for (size_t i = 0; i < mi.omega.size(); ++i)
    mcsv.row({1.0, offset_ghz(mi.omega[i], jsa.grid.center_i),
              mi.value[i] * omega_from_hz(1e9)});
  mcsv.commit();

  Eigen::MatrixXd z = jsa.amp.cwiseAbs2();
  write_heatmap_svg(join(args.out_dir, "jsi.svg"),
                    "joint spectral intensity (" + sc.name + ")",
                    "signal offset (GHz)", "idler offset (GHz)", z,
                    offset_ghz(jsa.grid.omega_s(0), jsa.grid.center_s),
                    offset_ghz(jsa.grid.omega_s(jsa.grid.n_s - 1),
                               jsa.grid.center_s),
                    offset_ghz(jsa.grid.omega_i(0), jsa.grid.center_i),
                    offset_ghz(jsa.grid.omega_i(jsa.grid.n_i - 1),
                               jsa.grid.center_i));
  return 0;
}

// --- sweep ---

int cmd_sweep(const ScenarioArgs& args, const std::string& shape_opt,
              double lo_ns, double hi_ns, double step_ns) {
  if (!(lo_ns > 0.0 && hi_ns > lo_ns && step_ns > 0.0))
    throw DomainError("sweep: need 0 < --tau-min-ns < --tau-max-ns and a "
                      "positive --tau-step-ns");
  Scenario sc = args.load();
  ensure_outdir(args.out_dir);
  std::vector<double> taus;
  for (double t = lo_ns; t <= hi_ns + 1e-9; t += step_ns)
    taus.push_back(t * 1e-9);

  std::vector<PumpSpec::Shape> shapes;
  if (shape_opt == "gaussian" || shape_opt == "both")
    shapes.push_back(PumpSpec::Shape::gaussian);
  if (shape_opt == "square" || shape_opt == "both")
    shapes.push_back(PumpSpec::Shape::square);
  if (shapes.empty())
    throw DomainError("sweep: --shape must be gaussian, square or both");

  const bool have_filters = !sc.filters.empty();
  std::vector<LineSeries> series;
  for (PumpSpec::Shape shape : shapes) {
    const bool square = shape == PumpSpec::Shape::square;
    const std::string stem = square ? "sweep_square" : "sweep";
    std::vector<std::string> header = {"tau_ns", "schmidt_K", "purity",
                                       "central_fraction", "g2_unheralded"};
    if (have_filters)
      for (const char* c : {"schmidt_K_filtered", "purity_filtered",
                            "central_fraction_filtered",
                            "g2_unheralded_filtered"})
        header.push_back(c);
    CsvWriter csv(join(args.out_dir, stem + ".csv"), header);

    const SweepTable unf = purity_sweep(sc, taus, shape, false);
    SweepTable fil;
    if (have_filters) fil = purity_sweep(sc, taus, shape, true);
    LineSeries su{square ? "square, unfiltered" : "gaussian, unfiltered",
                  {}, {}};
    LineSeries sf{square ? "square, filtered" : "gaussian, filtered",
                  {}, {}};
    for (size_t i = 0; i < unf.rows.size(); ++i) {
      const SweepRow& r = unf.rows[i];
      std::vector<double> row = {r.tau_p_s * 1e9, r.schmidt_K, r.purity,
                                 r.central_fraction,
                                 g2_unheralded_from_K(r.schmidt_K)};
      su.x.push_back(r.tau_p_s * 1e9);
      su.y.push_back(r.purity);
      if (have_filters) {
        const SweepRow& q = fil.rows[i];
        row.insert(row.end(), {q.schmidt_K, q.purity, q.central_fraction,
                               g2_unheralded_from_K(q.schmidt_K)});
        sf.x.push_back(q.tau_p_s * 1e9);
        sf.y.push_back(q.purity);
      }
      csv.row(row);
    }
    csv.commit();
    series.push_back(std::move(su));
    if (have_filters) series.push_back(std::move(sf));
  }
  write_lineplot_svg(join(args.out_dir, "sweep.svg"),
                     "spectral purity vs pump pulse length (" + sc.name + ")",
                     "pulse length (ns)", "purity", series);
  return 0;
}

// --- spectrum ---

int cmd_spectrum(const ScenarioArgs& args, double span_ghz) {
  if (!(span_ghz > 0.0)) throw DomainError("spectrum: --span-ghz must be > 0");
  Scenario sc = args.load();
  ensure_outdir(args.out_dir);
  const double span = omega_from_hz(span_ghz * 1e9);
  // make range problems a configuration error up front instead of a
  // mid-computation failure
  const ResonantCenters ctr = center_on_resonances(sc.crystal, sc.cavity);
  try {
    for (double w : {ctr.omega_s - 0.5 * span, ctr.omega_s + 0.5 * span}) {
      refractive_index(sc.crystal.model(Field::signal),
                       wavelength_from_omega(w), sc.crystal.temperature_c);
      refractive_index(sc.crystal.model(Field::idler),
                       wavelength_from_omega(ctr.omega_p - w),
                       sc.crystal.temperature_c);
    }
  } catch (const OutOfRange& e) {
    throw DomainError("spectrum: span leaves the dispersion validity "
                      "window: " + std::string(e.what()));
  }

  const Spectrum spec = cluster_spectrum(sc.crystal, sc.cavity, span);
  CsvWriter csv(join(args.out_dir, "spectrum.csv"),
                {"signal_offset_ghz", "relative_intensity"});
  for (size_t i = 0; i < spec.omega.size(); ++i)
    csv.row({offset_ghz(spec.omega[i], ctr.omega_s), spec.value[i]});
  csv.commit();

  const double fsr_s =
      fsr(sc.crystal, sc.crystal.model(Field::signal),
          sc.crystal.signal_wavelength_m, sc.crystal.temperature_c);
  const auto clusters =
      find_clusters(spec, 1e-3, 3.0 * omega_from_hz(fsr_s));
  CsvWriter ccsv(join(args.out_dir, "clusters.csv"),
                 {"center_offset_ghz", "weight"});
  for (const Cluster& cl : clusters)
    ccsv.row({offset_ghz(cl.center, ctr.omega_s), cl.weight});
  ccsv.commit();

  LineSeries line{"emission envelope", {}, {}};
  for (size_t i = 0; i < spec.omega.size(); ++i) {
    line.x.push_back(offset_ghz(spec.omega[i], ctr.omega_s));
    line.y.push_back(spec.value[i]);
  }
  write_lineplot_svg(join(args.out_dir, "spectrum.svg"),
                     "doubly resonant emission comb (" + sc.name + ")",
                     "signal offset (GHz)", "relative intensity", {line});
  return 0;
}

// --- schmidt ---

int cmd_schmidt(const ScenarioArgs& args, bool filtered) {
  Scenario sc = args.load();
  ensure_outdir(args.out_dir);
  JSAGrid jsa = build_jsa(sc.crystal, sc.cavity, sc.pump, sc.grid);
  if (filtered) jsa = apply_filter(jsa, sc.filters);
  const SchmidtResult r = schmidt_decompose(jsa);

  CsvWriter csv(join(args.out_dir, "schmidt.csv"), {"mode", "lambda"});
  for (size_t k = 0; k < r.lambda.size(); ++k)
    csv.row({double(k), r.lambda[k]});
  csv.commit();

  std::ostringstream os;
  os.precision(12);
  os << "scenario = " << sc.name << "\n"
     << "schmidt_K = " << r.schmidt_K << "\n"
     << "purity = " << r.purity << "\n"
     << "g2_unheralded = " << g2_unheralded_from_K(r.schmidt_K) << "\n"
     << "rank = " << r.rank << "\n"
     << "truncation_residual = " << r.residual << "\n";
  atomic_write(join(args.out_dir, "summary.txt"), os.str());
  return 0;
}

// --- fit ---

Histogram histogram_from_csv(const std::string& path, const char* x_col,
                             double x_scale, const char* y_col) {
  const CsvTable t = read_csv(path);
  if (t.rows.empty()) throw DegenerateData(path + ": no data rows");
  const int xi = t.column(x_col), yi = t.column(y_col);
  Histogram h;
  for (const auto& row : t.rows) {
    h.centers.push_back(row[xi] * x_scale);
    h.counts.push_back(row[yi]);
  }
  h.validate();
  return h;
}

std::string report_text(const FitReport& rep) {
  std::ostringstream os;
  os.precision(10);
  os << "converged = " << (rep.converged ? "true" : "false") << "\n"
     << "iterations = " << rep.iterations << "\n"
     << "weighted_rss = " << rep.rss << "\n";
  for (size_t i = 0; i < rep.names.size(); ++i)
    os << rep.names[i] << " = " << rep.params[i] << " +- " << rep.sigma[i]
       << "\n";
  for (const std::string& w : rep.warnings) os << "warning: " << w << "\n";
  return os.str();
}

void write_fit_overlay(const std::string& out_dir, const Histogram& h,
                       const std::vector<double>& model,
                       const std::string& x_label, double x_scale) {
  CsvWriter csv(join(out_dir, "fit_curve.csv"),
                {"x", "data", "model"});
  LineSeries data{"data", {}, {}}, fit{"fit", {}, {}};
  for (size_t i = 0; i < h.centers.size(); ++i) {
    const double x = h.centers[i] / x_scale;
    csv.row({x, h.counts[i], model[i]});
    data.x.push_back(x);
    data.y.push_back(h.counts[i]);
    fit.x.push_back(x);
    fit.y.push_back(model[i]);
  }
  csv.commit();
  write_lineplot_svg(join(out_dir, "fit.svg"), "fit overlay", x_label,
                     "counts", {data, fit});
}

int cmd_fit(const std::string& kind, const std::string& data_path,
            const std::string& out_dir, bool unweighted) {
  ensure_outdir(out_dir);
  const FitWeights w =
      unweighted ? FitWeights::uniform : FitWeights::poisson;
  std::ostringstream report;
  if (kind == "xcorr") {
    const Histogram h =
        histogram_from_csv(data_path, "time_ns", 1e-9, "counts");
    const FitReport rep = fit_cross_correlation(h, w);
    report << report_text(rep);
    report << "\nsignal arm:\n"
           << predicted_linewidth_from_fit(rep.param("dnu_signal_hz")).text();
    report << "\nidler arm:\n"
           << predicted_linewidth_from_fit(rep.param("dnu_idler_hz")).text();
    std::vector<double> model;
    for (double t : h.centers)
      model.push_back(cross_correlation_model(
          rep.param("dnu_signal_hz"), rep.param("dnu_idler_hz"),
          rep.param("amplitude"), rep.param("baseline"), rep.param("t0_s"),
          t));
    write_fit_overlay(out_dir, h, model, "delay (ns)", 1e-9);
  } else if (kind == "hom") {
    const Histogram h =
        histogram_from_csv(data_path, "delay_ns", 1e-9, "counts");
    const FitReport rep = fit_hom(h, w);
    report << report_text(rep);
    std::vector<double> model;
    for (double t : h.centers)
      model.push_back(hom_model(rep.param("visibility"), rep.param("gamma_s"),
                                rep.param("baseline"), t));
    write_fit_overlay(out_dir, h, model, "arm delay (ns)", 1e-9);
  } else if (kind == "g2power") {
    const CsvTable t = read_csv(data_path);
    if (t.rows.empty()) throw DegenerateData(data_path + ": no data rows");
    const int pi_ = t.column("power_mw"), gi = t.column("g2");
    std::vector<double> power, g2, sigma;
    const bool have_sigma =
        std::find(t.header.begin(), t.header.end(), "sigma") !=
        t.header.end();
    for (const auto& row : t.rows) {
      power.push_back(row[pi_]);
      g2.push_back(row[gi]);
      if (have_sigma) sigma.push_back(row[t.column("sigma")]);
    }
    const FitReport rep = fit_linear_g2(power, g2, sigma);
    report << report_text(rep);
    report << "slope units: per mW of pump power\n";
    report << "predicted_g2_at_2mw = " << linear_g2_prediction(rep, 2.0)
           << "\n";
    Histogram h;
    h.centers = power;
    h.counts = g2;
    std::vector<double> model;
    for (double p : power) model.push_back(linear_g2_prediction(rep, p));
    write_fit_overlay(out_dir, h, model, "pump power (mW)", 1.0);
  } else {
    throw DomainError("fit: --kind must be xcorr, hom or g2power");
  }
  atomic_write(join(out_dir, "fit_report.txt"), report.str());
  return 0;
}

// --- synth ---

struct SynthArgs {
  std::string kind;
  std::string out_dir;
  uint64_t seed = 12345;
  bool zero_noise = false;
  double dnu_s_mhz = 167.9, dnu_i_mhz = 180.4;
  double peak = 1e4, baseline = 100.0, t0_ns = 0.0;
  int bins = 241;
  double span_ns = 12.0;
  double visibility = 0.912, gamma_ns = 1.3;
  double intercept = 0.005, slope_per_mw = 0.012, g2_sigma = 0.001;
  double power_min_mw = 0.25, power_max_mw = 2.0, power_step_mw = 0.25;
};

int cmd_synth(const SynthArgs& a) {
  ensure_outdir(a.out_dir);
  SplitMix64 rng(a.seed);
  const auto noisy_count = [&](double mean) {
    return a.zero_noise ? mean : double(poisson(rng, mean));
  };
  if (a.kind == "xcorr") {
    if (a.bins < 2) throw DomainError("synth: --bins must be >= 2");
    CsvWriter csv(join(a.out_dir, "xcorr.csv"), {"time_ns", "counts"});
    for (int i = 0; i < a.bins; ++i) {
      const double t_ns =
          a.t0_ns + a.span_ns * (2.0 * i / double(a.bins - 1) - 1.0);
      const double mean = cross_correlation_model(
          a.dnu_s_mhz * 1e6, a.dnu_i_mhz * 1e6, a.peak, a.baseline,
          a.t0_ns * 1e-9, t_ns * 1e-9);
      csv.row({t_ns, noisy_count(mean)});
    }
    csv.commit();
  } else if (a.kind == "hom") {
    if (a.bins < 2) throw DomainError("synth: --bins must be >= 2");
    CsvWriter csv(join(a.out_dir, "hom.csv"), {"delay_ns", "counts"});
    for (int i = 0; i < a.bins; ++i) {
      const double t_ns = a.span_ns * (2.0 * i / double(a.bins - 1) - 1.0);
      const double mean = hom_model(a.visibility, a.gamma_ns * 1e-9,
                                    a.baseline, t_ns * 1e-9);
      csv.row({t_ns, noisy_count(mean)});
    }
    csv.commit();
  } else if (a.kind == "g2power") {
    CsvWriter csv(join(a.out_dir, "g2power.csv"),
                  {"power_mw", "g2", "sigma"});
    for (double p = a.power_min_mw; p <= a.power_max_mw + 1e-9;
         p += a.power_step_mw) {
      double g2 = a.intercept + a.slope_per_mw * p;
      if (!a.zero_noise) g2 += a.g2_sigma * gaussian(rng);
      csv.row({p, g2, a.g2_sigma});
    }
    csv.commit();
  } else {
    throw DomainError("synth: --kind must be xcorr, hom or g2power");
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{
      "Photon-pair emission from a doubly resonant downconversion cavity: "
      "joint spectra, Schmidt analysis, pulse-length studies, correlation "
      "fits and synthetic data"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "print help for every command");

  ScenarioArgs jsi_args, sweep_args, spectrum_args, schmidt_args;
  bool jsi_filtered = false, jsi_amplitude = false;
  CLI::App* jsi = app.add_subcommand(
      "jsi", "sample the joint spectral intensity and its marginals");
  jsi_args.attach(jsi);
  jsi->add_flag("--filtered", jsi_filtered,
                "apply the scenario's filters first");
  jsi->add_flag("--amplitude", jsi_amplitude,
                "also write real and imaginary amplitude columns");

  std::string sweep_shape = "both";
  double tau_min = 0.3, tau_max = 2.0, tau_step = 0.1;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "purity and Schmidt number vs pump pulse length");
  sweep_args.attach(sweep, false);
  sweep->add_option("--points", sweep_args.points,
                    "override the grid points per axis");
  sweep->add_flag("--relaxed", sweep_args.relaxed,
                  "accept grid steps coarser than linewidth/8");
  sweep->add_option("--shape", sweep_shape,
                    "pump shape: gaussian, square or both (default both)");
  sweep->add_option("--tau-min-ns", tau_min,
                    "shortest pulse length in ns (default 0.3)");
  sweep->add_option("--tau-max-ns", tau_max,
                    "longest pulse length in ns (default 2.0)");
  sweep->add_option("--tau-step-ns", tau_step,
                    "pulse length step in ns (default 0.1)");

  double span_ghz = 1000.0;
  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "cw emission comb along the energy-conserving line");
  spectrum_args.attach(spectrum, false);
  spectrum->add_option("--span-ghz", span_ghz,
                       "full signal-frequency span in GHz (default 1000)");

  bool schmidt_filtered = false;
  CLI::App* schmidt = app.add_subcommand(
      "schmidt", "Schmidt spectrum and purity for one pulse length");
  schmidt_args.attach(schmidt);
  schmidt->add_flag("--filtered", schmidt_filtered,
                    "apply the scenario's filters first");

  std::string fit_kind, fit_data, fit_out;
  bool fit_unweighted = false;
  CLI::App* fit = app.add_subcommand(
      "fit", "fit a correlation model to histogram data");
  fit->add_option("--kind", fit_kind, "xcorr, hom or g2power")->required();
  fit->add_option("--data", fit_data, "input CSV file")->required();
  fit->add_option("--out", fit_out, "output directory")->required();
  fit->add_flag("--unweighted", fit_unweighted,
                "uniform weights instead of Poisson");

  SynthArgs sy;
  CLI::App* synth = app.add_subcommand(
      "synth", "generate seeded synthetic histograms");
  synth->add_option("--kind", sy.kind, "xcorr, hom or g2power")->required();
  synth->add_option("--out", sy.out_dir, "output directory")->required();
  synth->add_option("--seed", sy.seed, "PRNG seed (default 12345)");
  synth->add_flag("--zero-noise", sy.zero_noise,
                  "write exact model values instead of draws");
  synth->add_option("--dnu-s-mhz", sy.dnu_s_mhz,
                    "signal bandwidth in MHz (xcorr)");
  synth->add_option("--dnu-i-mhz", sy.dnu_i_mhz,
                    "idler bandwidth in MHz (xcorr)");
  synth->add_option("--peak", sy.peak, "peak counts above baseline");
  synth->add_option("--baseline", sy.baseline, "baseline counts");
  synth->add_option("--t0-ns", sy.t0_ns, "peak position in ns (xcorr)");
  synth->add_option("--bins", sy.bins, "number of bins (default 241)");
  synth->add_option("--span-ns", sy.span_ns,
                    "half span around the center in ns (default 12)");
  synth->add_option("--visibility", sy.visibility, "HOM dip visibility");
  synth->add_option("--gamma-ns", sy.gamma_ns, "HOM dip half width in ns");
  synth->add_option("--intercept", sy.intercept, "g2 at zero power");
  synth->add_option("--slope-per-mw", sy.slope_per_mw,
                    "g2 slope per mW of pump power");
  synth->add_option("--g2-sigma", sy.g2_sigma,
                    "gaussian noise on each g2 point");
  synth->add_option("--power-min-mw", sy.power_min_mw,
                    "lowest pump power in mW");
  synth->add_option("--power-max-mw", sy.power_max_mw,
                    "highest pump power in mW");
  synth->add_option("--power-step-mw", sy.power_step_mw,
                    "pump power step in mW");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (jsi->parsed()) return cmd_jsi(jsi_args, jsi_filtered, jsi_amplitude);
    if (sweep->parsed())
      return cmd_sweep(sweep_args, sweep_shape, tau_min, tau_max, tau_step);
    if (spectrum->parsed()) return cmd_spectrum(spectrum_args, span_ghz);
    if (schmidt->parsed()) return cmd_schmidt(schmidt_args, schmidt_filtered);
    if (fit->parsed())
      return cmd_fit(fit_kind, fit_data, fit_out, fit_unweighted);
    if (synth->parsed()) return cmd_synth(sy);
    std::cerr << "error: no command given\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DegenerateData& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DegenerateCavity& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NoRoot& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FilterOffGrid& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const WindowOffGrid& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResolutionTooCoarse& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    // remaining library failures are numerical: non-convergence, range
    // violations mid-computation, backend trouble
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace spdc::cli
