// Command-line front end: one subcommand per model, each writing the analytic
// and empirical spectra plus a JSON report.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlab/comb.hpp"
#include "dlab/errors.hpp"
#include "dlab/io.hpp"
#include "dlab/palm.hpp"
#include "dlab/parallel.hpp"
#include "dlab/random.hpp"
#include "dlab/renewal.hpp"
#include "dlab/stochastic.hpp"
#include "dlab/substitution.hpp"
#include "dlab/tm_spectrum.hpp"

namespace {

using json = nlohmann::json;
using namespace dlab;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Common {
  std::uint64_t seed = 42;
  std::string out = "dlab";
  std::string format = "csv";
  std::size_t grid = 0;  // 0: subcommand default
  double kmax = 0.0;     // 0: subcommand default
  std::size_t threads = 0;
  double clip = 0.0;

  std::size_t grid_or(std::size_t d) const { return grid > 0 ? grid : d; }
  double kmax_or(double d) const { return kmax > 0.0 ? kmax : d; }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Master random seed");
  sub->add_option("--out", c.out, "Output path prefix");
  sub->add_option("--format", c.format, "Artifact format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--grid", c.grid, "Number of output grid points")->check(CLI::PositiveNumber);
  sub->add_option("--kmax", c.kmax, "Upper end of the k range")->check(CLI::PositiveNumber);
  sub->add_option("--threads", c.threads, "Worker threads (default: DLAB_THREADS or all cores)");
  sub->add_option("--clip", c.clip, "Clip analytic densities at this value (0 = off)")->check(CLI::NonNegativeNumber);
}

/// Collects artifacts and the report of one run.
class Run {
 public:
  Run(const Common& c, std::string model, json params) : c_(c), model_(std::move(model)), params_(std::move(params)) {
    params_["grid"] = c.grid;
    params_["kmax"] = c.kmax;
    params_["clip"] = c.clip;
    params_["format"] = c.format;
    report_["checks"] = json::object();
    report_["warnings"] = json::array();
    report_["artifacts"] = json::array();
  }

  void check(const std::string& name, json value) { report_["checks"][name] = std::move(value); }
  void warn(const std::string& msg) { report_["warnings"].push_back(msg); }

  void density(const std::string& suffix, const std::string& kind, const EmpiricalDensity& d,
               const std::vector<Atom>& atoms = {}, const char* x_name = "k") {
    if (c_.format == "json") {
      write_json(suffix, envelope(model_, kind, params_, c_.seed, atoms, d.grid.points(), d.values));
      return;
    }
    write_file(suffix + ".csv", [&](std::ostream& os) { write_csv(os, x_name, "value", d.grid.points(), d.values); });
    if (!atoms.empty()) write_file(suffix + "_atoms.csv", [&](std::ostream& os) { write_atoms_csv(os, atoms); });
  }

  void measure(const std::string& suffix, const std::string& kind, const SpectralMeasure& m) {
    density(suffix, kind, m.ac_density, m.atoms);
  }

  /// Arbitrary table: CSV via `csv`, JSON via an envelope with extra fields.
  void table(const std::string& suffix, const std::function<void(std::ostream&)>& csv, const json& as_json) {
    if (c_.format == "json") {
      write_json(suffix, as_json);
      return;
    }
    write_file(suffix + ".csv", csv);
  }

  json base_envelope(const std::string& kind) const {
    return envelope(model_, kind, params_, c_.seed, {}, {}, {});
  }

  json series(const std::string& kind, const std::vector<double>& x, const std::vector<double>& y) const {
    return envelope(model_, kind, params_, c_.seed, {}, x, y);
  }

  int finish() {
    json r;
    r["schema_version"] = kSchemaVersion;
    r["model"] = model_;
    r["params"] = params_;
    r["seed"] = c_.seed;
    r["checks"] = report_["checks"];
    r["warnings"] = report_["warnings"];
    r["artifacts"] = report_["artifacts"];
    write_file("report.json", [&](std::ostream& os) { os << r.dump(2) << '\n'; }, false);
    for (const auto& w : report_["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
    return 0;
  }

  double clip(double v) const { return c_.clip > 0.0 ? std::min(v, c_.clip) : v; }

 private:
  void write_json(const std::string& suffix, const json& j) {
    write_file(suffix + ".json", [&](std::ostream& os) { os << j.dump() << '\n'; });
  }

  void write_file(const std::string& suffix, const std::function<void(std::ostream&)>& body, bool record = true) {
    const std::string path = c_.out + "_" + suffix;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    body(os);
    if (!os) throw std::runtime_error("failed writing '" + path + "'");
    if (record) report_["artifacts"].push_back(path);
  }

  const Common& c_;
  std::string model_;
  json params_;
  json report_;
};

// --- helpers ---------------------------------------------------------------

EmpiricalDensity analytic_on(const UniformGrid& g, const std::function<double(double)>& f) { return sample_on(g, f); }

double max_abs_diff_eta(const AutocorrCoeffs& e, int lag, const std::function<double(int)>& target) {
  double m = 0.0;
  for (int k = 1; k <= lag; ++k) m = std::max(m, std::abs(e.at(k) - std::complex<double>(target(k))));
  return m;
}

SignedSequence base_sequence(const std::string& name, std::int64_t n) {
  if (name == "rs") return rs_sequence(n);
  if (name == "tm") return tm_sequence(n);
  throw std::invalid_argument("unknown base sequence '" + name + "' (expected rs or tm)");
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

// --- subcommands -----------------------------------------------------------

int run_tm(const Common& c, int iterations) {
  const std::size_t g = c.grid_or(4096);
  Run run(c, "tm", {{"iterations", iterations}});
  const auto r = tm_distribution(iterations, g);
  const auto& f = r.function;
  EmpiricalDensity F{f.grid(), f.values(), 0.0};
  run.density("F", "analytic", F, {}, "x");
  run.check("cauchy_differences", r.cauchy);
  run.check("min_cell_increment", f.min_increment());
  run.check("symmetry_residual", symmetry_residual(f));
  TmEta eta;
  run.check("eta_1_exact", eta(1).str());
  double worst = 0.0;
  const int lag = static_cast<int>(std::min<std::size_t>(32, g / 4));
  for (int m = -lag; m <= lag; ++m) worst = std::max(worst, std::abs(moments_from_F(f, m) - std::complex<double>(eta.value(m))));
  run.check("max_moment_error", worst);
  run.check("moment_lags", lag);
  if (!(f.min_increment() > 0.0)) run.warn("distribution function has a plateau on this grid");
  return run.finish();
}

int run_cantor(const Common& c, int depth) {
  const std::size_t g = c.grid_or(4096);
  Run run(c, "cantor", {{"depth", depth}});
  const auto grid = UniformGrid::closed(0.0, 1.0, g + 1);
  run.density("F", "analytic", analytic_on(grid, [depth](double x) { return cantor_function(std::min(x, 1.0), depth); }), {},
              "x");
  run.check("F_half", cantor_function(0.5, depth));
  run.check("F_ninth", cantor_function(1.0 / 9.0, depth));
  return run.finish();
}

int run_rs(const Common& c, std::int64_t n, int max_lag, double bandwidth) {
  Run run(c, "rs", {{"N", n}, {"max_lag", max_lag}, {"bandwidth", bandwidth}});
  const double kmax = c.kmax_or(1.0);
  RsEtaTheta exact;
  bool exact_ok = true;
  for (int m = -max_lag; m <= max_lag; ++m) {
    const auto [e, t] = exact(m);
    exact_ok = exact_ok && e == (m == 0 ? 1 : 0) && t == 0;
  }
  run.check("exact_delta", exact_ok);
  const auto seq = rs_sequence(n);
  const auto eta = autocorr_lattice(seq, max_lag);
  run.check("max_eta_deviation", max_abs_diff_eta(eta, max_lag, [](int) { return 0.0; }));
  std::vector<double> lags, vals;
  for (int m = 0; m <= max_lag; ++m) {
    lags.push_back(m);
    vals.push_back(eta.at(m).real());
  }
  run.table("eta", [&](std::ostream& os) { write_csv(os, "m", "value", lags, vals); },
            run.series("empirical-eta", lags, vals));
  const auto emp = spectrum_estimate(seq.comb(), 0.0, kmax, bandwidth);
  run.density("empirical", "empirical", decimate(emp, c.grid_or(2048)));
  const auto flat = analytic_on(emp.grid, [](double) { return 1.0; });
  run.density("analytic", "analytic", decimate(flat, c.grid_or(2048)));
  run.check("l1_empirical_vs_analytic", l1_distance(emp, flat, 0.0, std::min(kmax, 1.0)));
  return run.finish();
}

int run_bernoulli(const Common& c, double p, std::int64_t n, double bandwidth) {
  Run run(c, "bernoulli", {{"p", p}, {"N", n}, {"bandwidth", bandwidth}});
  const double kmax = c.kmax_or(1.0);
  RandomSource rng(c.seed);
  const auto seq = bernoulli_comb(p, n, rng);
  const auto comb = seq.comb();
  const auto emp = spectrum_estimate(comb, 0.0, kmax, bandwidth);
  const auto an = bernoulli_analytic(p, emp.grid);
  run.measure("analytic", "analytic", {an.atoms, decimate(an.ac_density, c.grid_or(2048)), an.label});
  run.density("empirical", "empirical", decimate(emp, c.grid_or(2048)));
  run.check("entropy", entropy(p));
  run.check("l1_ac_on_0.1_0.9", l1_distance(emp, an.ac_density, 0.1, 0.9));
  const auto atom = estimate_atom(comb, 0.0, 0.5 * comb.window_radius);
  run.check("atom0_estimate", atom.intensity);
  run.check("atom0_expected", (2 * p - 1) * (2 * p - 1));
  return run.finish();
}

int run_bernoullise(const Common& c, double p, std::int64_t n, const std::string& base, double bandwidth) {
  Run run(c, "bernoullise", {{"p", p}, {"N", n}, {"base", base}, {"bandwidth", bandwidth}});
  const double kmax = c.kmax_or(1.0);
  RandomSource rng(c.seed);
  const auto w = base_sequence(base, n);
  const auto v = bernoullise(w, p, rng);
  const auto emp = spectrum_estimate(v.comb(), 0.0, kmax, bandwidth);
  auto predicted = spectrum_estimate(w.comb(), 0.0, kmax, bandwidth);
  const double a = (2 * p - 1) * (2 * p - 1);
  for (auto& x : predicted.values) x = a * x + 4 * p * (1 - p);
  run.density("empirical", "empirical", decimate(emp, c.grid_or(2048)));
  run.density("predicted", "analytic", decimate(predicted, c.grid_or(2048)));
  run.check("l1_empirical_vs_predicted", l1_distance(emp, predicted, 0.0, std::min(kmax, 1.0)));
  const auto eta = autocorr_lattice(v, 32);
  run.check("eta_1", eta.at(1).real());
  return run.finish();
}

int run_dimer(const Common& c, std::int64_t n, double bandwidth) {
  Run run(c, "dimer", {{"N", n}, {"bandwidth", bandwidth}});
  const double kmax = c.kmax_or(1.0);
  RandomSource rng(c.seed);
  const auto d = dimer_sample(n, rng);
  const auto comb = d.sequence.comb();
  const auto emp = spectrum_estimate(comb, 0.0, kmax, bandwidth);
  const auto an = dimer_analytic(1.0, -1.0, emp.grid);
  run.measure("analytic", "analytic", {an.atoms, decimate(an.ac_density, c.grid_or(2048)), an.label});
  run.density("empirical", "empirical", decimate(emp, c.grid_or(2048)));
  run.check("offset", d.offset);
  run.check("l1_empirical_vs_analytic", l1_distance(emp, an.ac_density, 0.0, std::min(kmax, 1.0)));
  const auto eta = autocorr_lattice(d.sequence, 4);
  run.check("eta_1", eta.at(1).real());
  const auto factor = dimer_factor(d);
  const auto fcomb = factor.comb();
  json atoms = json::array();
  for (double k : {0.0, 0.5, 1.0}) {
    const auto a = estimate_atom(fcomb, k, 0.5 * fcomb.window_radius);
    atoms.push_back({{"k", k}, {"estimate", a.intensity}, {"expected", 0.25}});
  }
  run.check("factor_atoms", atoms);
  const auto fan = factor_analytic(emp.grid);
  run.measure("factor_analytic", "analytic", {fan.atoms, decimate(fan.ac_density, c.grid_or(2048)), fan.label});
  return run.finish();
}

int run_ledrappier(const Common& c, std::size_t n, int max_lag) {
  Run run(c, "ledrappier", {{"N", n}, {"max_lag", max_lag}});
  RandomSource rng(c.seed);
  RandomSource control_rng = rng.split(1);
  const auto patch = ledrappier_sample(n, rng);
  const auto control = iid_patch(n, control_rng);
  run.check("constraint_violations", patch.constraint_violations());
  run.check("three_point", ledrappier_three_point(patch));
  run.check("three_point_iid_control", ledrappier_three_point(control));
  const auto rows = patch_autocorr(patch, max_lag, true);
  const auto cols = patch_autocorr(patch, max_lag, false);
  double dev = 0.0;
  for (int m = 1; m <= max_lag; ++m) dev = std::max({dev, std::abs(rows[static_cast<std::size_t>(m)]), std::abs(cols[static_cast<std::size_t>(m)])});
  run.check("max_two_point_deviation", dev);
  std::vector<double> lags(rows.size());
  for (std::size_t m = 0; m < lags.size(); ++m) lags[m] = static_cast<double>(m);
  run.table("rows", [&](std::ostream& os) { write_csv(os, "m", "value", lags, rows); },
            run.series("empirical-eta", lags, rows));
  return run.finish();
}

int run_gue(const Common& c, std::size_t n, std::size_t samples, double bandwidth) {
  Run run(c, "gue", {{"N", n}, {"samples", samples}, {"bandwidth", bandwidth}});
  const double kmax = c.kmax_or(2.5);
  RandomSource rng(c.seed);
  const auto ens = gue_ensemble(n, samples, rng);
  double points = 0.0, vol = 0.0;
  for (const auto& s : ens) {
    points += static_cast<double>(s.size());
    vol += s.volume();
  }
  const double step = 1.0 / (2.0 * ens.front().volume());
  const UniformGrid g{0.0, step, static_cast<std::size_t>(std::ceil(kmax / step)) + 1};
  const auto emp = smooth(gue_diffraction_empirical(ens, g), bandwidth);
  const auto target = analytic_on(g, gue_target);
  const auto target_s = smooth(target, bandwidth);
  double sup = 0.0;
  for (std::size_t i = 0; i < g.size; ++i)
    if (g[i] >= 0.1 && g[i] <= std::min(2.0, kmax)) sup = std::max(sup, std::abs(emp.values[i] - target_s.values[i]));
  run.density("empirical", "empirical", decimate(emp, c.grid_or(2048)), {{0.0, 1.0}});
  run.density("analytic", "analytic", decimate(target, c.grid_or(2048)), {{0.0, 1.0}});
  run.check("mean_density", points / vol);
  run.check("sup_deviation_0.1_2", sup);
  return run.finish();
}

int run_renewal(const Common& c, const std::string& spec, double length, double bandwidth, double burn_in) {
  Run run(c, "renewal", {{"dist", spec}, {"L", length}, {"bandwidth", bandwidth}, {"burn_in", burn_in}});
  const double kmax = c.kmax_or(3.0);
  const auto dist = parse_distribution(spec);
  RandomSource rng(c.seed);
  const auto sample = renewal_sample(*dist, length, rng, burn_in);
  const auto comb = sample.centred_comb();
  const auto emp = spectrum_estimate(comb, 0.0, kmax, bandwidth, true);
  const auto an = renewal_diffraction(*dist, emp.grid);
  for (std::size_t i : an.singular) run.warn("singular grid point at k = " + format_double(emp.grid[i]));
  auto ac = an.measure.ac_density;
  for (auto& v : ac.values) v = run.clip(v);
  run.measure("analytic", "analytic", {an.measure.atoms, decimate(ac, c.grid_or(2048)), an.measure.label});
  run.density("empirical", "empirical", decimate(emp, c.grid_or(2048)));
  run.check("mean_gap", dist->mean());
  run.check("lattice", dist->lattice() ? json(*dist->lattice()) : json("none"));
  run.check("empirical_density", static_cast<double>(sample.points.size()) / length);
  const double lo = std::min(0.05, kmax);
  if (!dist->lattice())
    run.check("l1_smoothed_0.05_kmax", l1_distance(emp, smooth(an.measure.ac_density, bandwidth), lo, kmax));
  if (dist->has_density() || dist->lattice()) {
    try {
      const auto nu = renewal_measure(*dist, 10.0);
      run.check("renewal_terms", nu.terms);
      run.check("renewal_converged", nu.converged);
      run.check("renewal_residual", nu.residual);
      if (!nu.converged) run.warn("renewal series not converged on [0, 10]");
      if (!nu.lattice) {
        const auto coarse = UniformGrid::closed(0.0, kmax, 1201);
        const auto th = renewal_density_from_measure(nu, dist->mean(), coarse);
        const auto direct = renewal_diffraction(*dist, coarse).measure.ac_density;
        run.check("closed_form_vs_measure_l1_0.1_3", l1_distance(th, direct, std::min(0.1, kmax), std::min(3.0, kmax)));
      }
    } catch (const std::invalid_argument& e) {
      run.warn(std::string("renewal measure unavailable: ") + e.what());
    }
  }
  return run.finish();
}

int run_fibonacci(const Common& c, const std::string& mode, double tiles, int steps, double bandwidth) {
  Run run(c, "fibonacci", {{"mode", mode}, {"tiles", tiles}, {"steps", steps}, {"bandwidth", bandwidth}});
  const double kmax = c.kmax_or(3.0);
  if (mode == "perfect") {
    const auto chain = fibonacci_chain(steps);
    const auto comb = chain.centred_comb();
    std::vector<BraggPeak> peaks;
    json est = json::array();
    for (int b = -4; b <= 4; ++b)
      for (int a = -8; a <= 8; ++a) {
        const auto p = fibonacci_intensity(a, b);
        if (p.k < 0.0 || p.k > kmax || p.intensity < 1e-3) continue;
        peaks.push_back(p);
      }
    std::sort(peaks.begin(), peaks.end(), [](const BraggPeak& x, const BraggPeak& y) { return x.k < y.k; });
    for (const auto& p : peaks) {
      const auto a = estimate_atom(comb, p.k, 0.5 * comb.window_radius);
      est.push_back({{"a", p.a}, {"b", p.b}, {"k", p.k}, {"intensity", p.intensity}, {"estimate", a.intensity}});
    }
    json j = run.base_envelope("analytic-bragg");
    j["peaks"] = est;
    for (const auto& p : peaks) j["atoms"].push_back({{"k", p.k}, {"intensity", p.intensity}});
    run.table("bragg", [&](std::ostream& os) { write_bragg_csv(os, peaks); }, j);
    run.check("points", chain.left_endpoints.size());
    run.check("peaks", est);
    return run.finish();
  }
  if (mode != "random") throw std::invalid_argument("fibonacci: --mode must be perfect or random");
  const auto dist = fib_random_tiling();
  const double length = tiles * dist->mean();
  RandomSource rng(c.seed);
  const auto sample = renewal_sample(*dist, length, rng);
  const auto comb = sample.centred_comb();
  const auto emp = spectrum_estimate(comb, 0.0, kmax, bandwidth, true);
  std::size_t flagged = 0;
  auto h = analytic_on(emp.grid, [&](double k) {
    const auto v = fib_rt_density(k);
    if (!v) {
      if (k != 0.0) ++flagged;
      return 0.0;
    }
    return *v;
  });
  if (flagged > 0) run.warn(std::to_string(flagged) + " grid points with vanishing denominator");
  const double central = (kTau + 1.0) / 5.0;
  run.check("l1_smoothed_0.05_kmax", l1_distance(emp, smooth(h, bandwidth), std::min(0.05, kmax), kmax));
  for (auto& v : h.values) v = run.clip(v);
  run.density("analytic", "analytic", decimate(h, c.grid_or(4096)), {{0.0, central}});
  run.density("empirical", "empirical", decimate(emp, c.grid_or(4096)));
  run.check("central_atom", central);
  run.check("empirical_density", static_cast<double>(sample.points.size()) / length);
  return run.finish();
}

struct PalmOptions {
  std::string model_file;
  std::string ground = "poisson";
  double rate = 1.0;
  std::vector<double> mark_mean{0.5, 0.5};
  double mark_var = 0.25;
  double n = 1e5;
  double range = 5.0;
  double bin = 0.5;
  std::size_t realizations = 1;
};

MarkedProcessModel palm_model(PalmOptions& o, Common& c) {
  if (!o.model_file.empty()) {
    std::ifstream is(o.model_file);
    if (!is) throw std::invalid_argument("cannot read model file '" + o.model_file + "'");
    json j;
    try {
      is >> j;
      const auto& g = j.at("ground");
      const auto type = g.at("type").get<std::string>();
      if (type == "poisson") {
        o.ground = "poisson";
        o.rate = g.value("rate", 1.0);
      } else if (type == "renewal") {
        o.ground = g.at("dist").get<std::string>();
      } else {
        throw std::invalid_argument("ground.type must be poisson or renewal");
      }
      const auto& m = j.at("marks");
      o.mark_mean = m.at("mean").get<std::vector<double>>();
      o.mark_var = m.value("variance", 0.0);
      if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
      throw std::invalid_argument(std::string("bad model file: ") + e.what());
    }
  }
  if (o.mark_mean.size() != 2) throw std::invalid_argument("mark mean must be given as RE,IM");
  if (o.mark_var < 0.0) throw std::invalid_argument("mark variance must be nonnegative");
  MarkedProcessModel m;
  m.marks = {{o.mark_mean[0], o.mark_mean[1]}, o.mark_var};
  if (o.ground == "poisson") {
    m.ground = MarkedProcessModel::Ground::Poisson;
    m.rate = o.rate;
  } else {
    m.ground = MarkedProcessModel::Ground::Renewal;
    m.waiting = parse_distribution(o.ground);
  }
  return m;
}

int run_palm(Common& c, PalmOptions& o) {
  const auto model = palm_model(o, c);
  Run run(c, "palm",
          {{"ground", o.ground}, {"rate", o.rate}, {"mark_mean", o.mark_mean}, {"mark_variance", o.mark_var},
           {"n", o.n}, {"range", o.range}, {"bin", o.bin}, {"realizations", o.realizations}});
  RandomSource rng(c.seed);
  const double radius = o.n + 2.0 * o.range;
  const auto reals = model.sample_many(radius, o.realizations, rng);
  const auto& first = reals.front();
  const auto emp = empirical_autocorr(first, o.n, o.range, o.bin);
  const auto alt = empirical_autocorr(first, o.n, o.range, o.bin, PairReduction::Alternative);
  const auto palm = palm_intensity_estimate(reals, o.n, o.range, o.bin);
  auto dump = [&](const std::string& suffix, const std::string& kind, const ReducedSecondMoment& m) {
    std::vector<double> re, im;
    for (const auto& v : m.density) {
      re.push_back(v.real());
      im.push_back(v.imag());
    }
    json j = run.base_envelope(kind);
    j["atoms"] = json::array({{{"k", 0.0}, {"intensity", std::abs(m.atom0)}}});
    j["grid"] = m.grid.points();
    j["values"] = re;
    j["values_imag"] = im;
    j["atom0"] = complex_json(m.atom0);
    run.table(suffix,
              [&](std::ostream& os) {
                os << "v,re,im\n";
                os << "atom0," << format_double(m.atom0.real()) << ',' << format_double(m.atom0.imag()) << '\n';
                for (std::size_t i = 0; i < re.size(); ++i)
                  os << format_double(m.grid[i]) << ',' << format_double(re[i]) << ',' << format_double(im[i]) << '\n';
              },
              j);
  };
  dump("autocorr", "empirical", emp);
  dump("palm", "empirical-palm", palm.rho_times_intensity);
  run.check("rho_total_variation", palm.rho);
  run.check("hermitian", emp.is_hermitian());
  const auto ac = alt.conj();
  run.check("conjugation_identity_exact", ac.density == emp.density && ac.atom0 == emp.atom0);
  run.check("l1_palm_vs_autocorr", palm.rho_times_intensity.l1_distance(emp, -o.range, o.range));
  run.check("boundary_term", boundary_term_check(first, o.n, o.range, o.bin));
  if (model.ground == MarkedProcessModel::Ground::Poisson) {
    const auto an = model.analytic(o.range, o.bin);
    dump("analytic", "analytic", an);
    run.check("l1_autocorr_vs_analytic", emp.l1_distance(an, -o.range, o.range));
    run.check("l1_palm_vs_analytic", palm.rho_times_intensity.l1_distance(an, -o.range, o.range));
    run.check("atom0_expected", an.atom0.real());
  }
  run.check("atom0", complex_json(emp.atom0));
  return run.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diffraclab: analytic and empirical diffraction spectra"};
  app.require_subcommand(1);
  Common common;
  std::function<int()> action;

  int iterations = 12;
  auto* tm = app.add_subcommand("tm", "Thue-Morse distribution function by Volterra iteration");
  tm->add_option("--iterations", iterations, "Volterra iterations")->check(CLI::PositiveNumber);
  add_common(tm, common);
  tm->callback([&] { action = [&] { return run_tm(common, iterations); }; });

  int depth = 20;
  auto* cantor = app.add_subcommand("cantor", "Middle-thirds Cantor function");
  cantor->add_option("--depth", depth, "Ternary digits")->check(CLI::PositiveNumber);
  add_common(cantor, common);
  cantor->callback([&] { action = [&] { return run_cantor(common, depth); }; });

  std::int64_t n_seq = 1 << 17;
  int max_lag = 32;
  double bandwidth = 0.02;
  auto* rs = app.add_subcommand("rs", "Rudin-Shapiro sequence: exact and empirical autocorrelation");
  rs->add_option("--N", n_seq, "Sequence on [-N, N]")->check(CLI::PositiveNumber);
  rs->add_option("--max-lag", max_lag, "Largest lag")->check(CLI::PositiveNumber);
  rs->add_option("--bandwidth", bandwidth, "Smoothing bandwidth")->check(CLI::PositiveNumber);
  add_common(rs, common);
  rs->callback([&] { action = [&] { return run_rs(common, n_seq, max_lag, bandwidth); }; });

  double p = 0.5;
  auto* bern = app.add_subcommand("bernoulli", "Bernoulli comb");
  bern->add_option("--p", p, "P(+1)");
  bern->add_option("--N", n_seq, "Sequence on [-N, N]")->check(CLI::PositiveNumber);
  bern->add_option("--bandwidth", bandwidth, "Smoothing bandwidth")->check(CLI::PositiveNumber);
  add_common(bern, common);
  bern->callback([&] { action = [&] { return run_bernoulli(common, p, n_seq, bandwidth); }; });

  std::string base = "rs";
  auto* bse = app.add_subcommand("bernoullise", "Random sign flips of a deterministic sequence");
  bse->add_option("--p", p, "P(no flip)");
  bse->add_option("--N", n_seq, "Sequence on [-N, N]")->check(CLI::PositiveNumber);
  bse->add_option("--base", base, "Base sequence")->check(CLI::IsMember({"rs", "tm"}));
  bse->add_option("--bandwidth", bandwidth, "Smoothing bandwidth")->check(CLI::PositiveNumber);
  add_common(bse, common);
  bse->callback([&] { action = [&] { return run_bernoullise(common, p, n_seq, base, bandwidth); }; });

  auto* dimer = app.add_subcommand("dimer", "Close-packed random dimers and their factor");
  dimer->add_option("--N", n_seq, "Sequence on [-N, N]")->check(CLI::PositiveNumber);
  dimer->add_option("--bandwidth", bandwidth, "Smoothing bandwidth")->check(CLI::PositiveNumber);
  add_common(dimer, common);
  dimer->callback([&] { action = [&] { return run_dimer(common, n_seq, bandwidth); }; });

  std::size_t patch = 512;
  auto* led = app.add_subcommand("ledrappier", "Ledrappier shift patch and an i.i.d. control");
  led->add_option("--N", patch, "Patch side")->check(CLI::Range(2, 1 << 14));
  led->add_option("--max-lag", max_lag, "Largest lag")->check(CLI::PositiveNumber);
  add_common(led, common);
  led->callback([&] { action = [&] { return run_ledrappier(common, patch, max_lag); }; });

  std::size_t dim = 200, samples = 1000;
  double gue_bw = 0.04;
  auto* gue = app.add_subcommand("gue", "Unfolded GUE eigenvalues");
  gue->add_option("--N", dim, "Matrix size")->check(CLI::PositiveNumber);
  gue->add_option("--samples", samples, "Independent matrices")->check(CLI::PositiveNumber);
  gue->add_option("--bandwidth", gue_bw, "Smoothing bandwidth")->check(CLI::PositiveNumber);
  add_common(gue, common);
  gue->callback([&] { action = [&] { return run_gue(common, dim, samples, gue_bw); }; });

  std::string dist = "gamma:5";
  double length = 1e5, ren_bw = 0.05, burn_in = 1000.0;
  auto* ren = app.add_subcommand("renewal", "Stationary renewal process");
  ren->add_option("--dist", dist, "Waiting-time law: exp, gamma:A, point[:X], fibrt");
  ren->add_option("--L", length, "Window length")->check(CLI::PositiveNumber);
  ren->add_option("--bandwidth", ren_bw, "Smoothing bandwidth")->check(CLI::PositiveNumber);
  ren->add_option("--burn-in", burn_in, "Burn-in in mean gaps")->check(CLI::NonNegativeNumber);
  add_common(ren, common);
  ren->callback([&] { action = [&] { return run_renewal(common, dist, length, ren_bw, burn_in); }; });

  std::string mode = "random";
  double tiles = 1e5;
  int steps = 22;
  auto* fib = app.add_subcommand("fibonacci", "Perfect Fibonacci chain or Fibonacci random tiling");
  fib->add_option("--mode", mode, "perfect or random")->check(CLI::IsMember({"perfect", "random"}));
  fib->add_option("--tiles", tiles, "Tiles in the random tiling")->check(CLI::PositiveNumber);
  fib->add_option("--steps", steps, "Substitution steps for the perfect chain")->check(CLI::Range(1, 40));
  fib->add_option("--bandwidth", ren_bw, "Smoothing bandwidth")->check(CLI::PositiveNumber);
  add_common(fib, common);
  fib->callback([&] { action = [&] { return run_fibonacci(common, mode, tiles, steps, ren_bw); }; });

  PalmOptions palm;
  auto* pa = app.add_subcommand("palm", "Marked point process: autocorrelation and Palm intensity");
  pa->add_option("--model", palm.model_file, "JSON model {ground, marks, seed}");
  pa->add_option("--ground", palm.ground, "poisson or a waiting-time law");
  pa->add_option("--rate", palm.rate, "Poisson rate")->check(CLI::PositiveNumber);
  pa->add_option("--mark-mean", palm.mark_mean, "Mean mark RE IM")->expected(2);
  pa->add_option("--mark-var", palm.mark_var, "Mark variance E|W - EW|^2");
  pa->add_option("--n", palm.n, "Averaging radius")->check(CLI::PositiveNumber);
  pa->add_option("--range", palm.range, "Largest lag")->check(CLI::PositiveNumber);
  pa->add_option("--bin", palm.bin, "Bin width")->check(CLI::PositiveNumber);
  pa->add_option("--realizations", palm.realizations, "Independent realizations")->check(CLI::PositiveNumber);
  add_common(pa, common);
  pa->callback([&] { action = [&] { return run_palm(common, palm); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  if (common.threads > 0) set_thread_count(common.threads);
  try {
    return action();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
