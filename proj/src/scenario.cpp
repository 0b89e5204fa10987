#include "ndec/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include "json.hpp"
#include <sstream>

#include "ndec/csv.hpp"
#include "ndec/efftemp.hpp"
#include "ndec/error.hpp"
#include "ndec/langevin.hpp"
#include "ndec/wigner.hpp"

namespace ndec {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw Error(Errc::ConfigInvalid, path + ": " + what);
}

class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) invalid(path_, "expected an object");
  }

  const std::string& path() const { return path_; }
  std::string at(std::string_view key) const { return path_ + "." + std::string(key); }

  void allow(std::initializer_list<std::string_view> keys) const {
    for (const auto& [k, v] : j_.items())
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) invalid(at(k), "unknown key");
  }

  bool has(std::string_view key) const { return j_.contains(std::string(key)); }

  const json& raw(std::string_view key) const {
    if (!has(key)) invalid(at(key), "missing");
    return j_.at(std::string(key));
  }

  Node child(std::string_view key) const { return {raw(key), at(key)}; }

  double quantity(std::string_view key, Dimension dim, const ReducedUnits& units) const {
    const auto& v = raw(key);
    if (!v.is_string()) invalid(at(key), "expected a string '<number> <unit>'");
    Quantity q;
    try {
      q = parse_quantity(v.get<std::string>());
    } catch (const Error& e) {
      invalid(at(key), e.what());
    }
    if (!q.reduced && q.dimension != dim)
      invalid(at(key), "expected a " + std::string(dimension_name(dim)) + ", got a " +
                           std::string(dimension_name(q.dimension)));
    return units.reduced(q);
  }

  double quantity_or(std::string_view key, Dimension dim, const ReducedUnits& units, double fallback) const {
    return has(key) ? quantity(key, dim, units) : fallback;
  }

  double number(std::string_view key) const {
    const auto& v = raw(key);
    if (!v.is_number()) invalid(at(key), "expected a number");
    return v.get<double>();
  }

  std::size_t count(std::string_view key) const {
    const auto& v = raw(key);
    if (!v.is_number_unsigned()) invalid(at(key), "expected a nonnegative integer");
    return v.get<std::size_t>();
  }

  std::string text(std::string_view key) const {
    const auto& v = raw(key);
    if (!v.is_string()) invalid(at(key), "expected a string");
    return v.get<std::string>();
  }

  bool flag(std::string_view key) const {
    const auto& v = raw(key);
    if (!v.is_boolean()) invalid(at(key), "expected true or false");
    return v.get<bool>();
  }

 private:
  const json& j_;
  std::string path_;
};

ReducedUnits parse_units(const Node& n) {
  n.allow({"length", "time"});
  ReducedUnits u;
  auto base = [&](std::string_view key, Dimension dim) {
    if (!n.has(key)) return dim == Dimension::Length ? u.length : u.time;
    Quantity q;
    try {
      q = parse_quantity(n.text(key));
    } catch (const Error& e) {
      invalid(n.at(key), e.what());
    }
    if (q.reduced || q.dimension != dim || !(q.value > 0.0)) invalid(n.at(key), "expected a positive SI scale");
    return q.value;
  };
  u.length = base("length", Dimension::Length);
  u.time = base("time", Dimension::Time);
  return u;
}

KernelKind parse_kernel(const Node& n) {
  const auto k = n.text("kernel");
  if (k == "delta") return KernelKind::Delta;
  if (k == "exponential") return KernelKind::Exponential;
  if (k == "tabulated") return KernelKind::Tabulated;
  invalid(n.at("kernel"), "expected delta, exponential or tabulated");
}

std::vector<double> number_list(const Node& n, std::string_view key) {
  const auto& v = n.raw(key);
  if (!v.is_array()) invalid(n.at(key), "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) invalid(n.at(key), "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

void parse_source(const Node& n, ScenarioConfig& cfg) {
  const auto type = n.text("type");
  const auto& u = cfg.units;
  if (type == "reservoir") {
    const auto kind = parse_kernel(n);
    const double temperature = n.quantity("temperature", Dimension::Energy, u);
    try {
      if (kind == KernelKind::Delta) {
        n.allow({"type", "kernel", "coupling", "temperature"});
        cfg.reservoirs.push_back(ReservoirSpec::delta(n.quantity("coupling", Dimension::Friction, u), temperature));
      } else if (kind == KernelKind::Exponential) {
        n.allow({"type", "kernel", "coupling", "corr_time", "temperature"});
        cfg.reservoirs.push_back(ReservoirSpec::exponential(n.quantity("coupling", Dimension::Friction, u),
                                                            n.quantity("corr_time", Dimension::Time, u),
                                                            temperature));
      } else {
        // Tables are given directly in reduced units.
        n.allow({"type", "kernel", "omega", "density", "temperature"});
        cfg.reservoirs.push_back(
            ReservoirSpec::tabulated({number_list(n, "omega"), number_list(n, "density")}, temperature));
      }
    } catch (const Error& e) {
      if (e.code() == Errc::ConfigInvalid) throw;
      invalid(n.path(), e.what());
    }
  } else if (type == "field") {
    const auto kind = parse_kernel(n);
    try {
      if (kind == KernelKind::Delta) {
        n.allow({"type", "kernel", "intensity"});
        cfg.fields.push_back(FieldNoise::delta(n.quantity("intensity", Dimension::FieldIntensity, u), cfg.charge));
      } else if (kind == KernelKind::Exponential) {
        n.allow({"type", "kernel", "intensity", "corr_time"});
        cfg.fields.push_back(FieldNoise::exponential(n.quantity("intensity", Dimension::FieldIntensity, u),
                                                     n.quantity("corr_time", Dimension::Time, u), cfg.charge));
      } else {
        invalid(n.at("kernel"), "fields are delta or exponential");
      }
    } catch (const Error& e) {
      if (e.code() == Errc::ConfigInvalid) throw;
      invalid(n.path(), e.what());
    }
  } else {
    invalid(n.at("type"), "expected reservoir or field");
  }
}

ContrastMethod parse_method(const std::string& name, const std::string& path) {
  for (auto m : {ContrastMethod::ClosedForm, ContrastMethod::Quadrature, ContrastMethod::ExactGaussian,
                 ContrastMethod::GridPDE})
    if (method_name(m) == name) return m;
  invalid(path, "unknown method '" + name + "' (closed_form, quadrature, exact, grid)");
}

void parse_run(const Node& n, ScenarioConfig& cfg) {
  n.allow({"t_end", "points", "methods", "per_fringe", "substeps", "snapshot", "reference", "tabulation"});
  cfg.t_end = n.quantity("t_end", Dimension::Time, cfg.units);
  if (!(cfg.t_end > 0.0)) invalid(n.at("t_end"), "must be > 0");
  if (n.has("points")) cfg.points = n.count("points");
  if (cfg.points < 2) invalid(n.at("points"), "need at least 2 points");
  if (n.has("methods")) {
    const auto& v = n.raw("methods");
    if (!v.is_array() || v.empty()) invalid(n.at("methods"), "expected a nonempty array");
    cfg.methods.clear();
    for (const auto& m : v) {
      if (!m.is_string()) invalid(n.at("methods"), "expected method names");
      cfg.methods.push_back(parse_method(m.get<std::string>(), n.at("methods")));
    }
  }
  if (n.has("per_fringe")) cfg.per_fringe = n.number("per_fringe");
  if (n.has("substeps")) cfg.substeps = n.count("substeps");
  if (cfg.substeps < 1) invalid(n.at("substeps"), "must be >= 1");
  if (n.has("snapshot")) cfg.snapshot = n.flag("snapshot");
  if (n.has("reference")) {
    const auto r = n.text("reference");
    if (r == "mean")
      cfg.reference = ReferenceMode::Mean;
    else if (r == "first")
      cfg.reference = ReferenceMode::First;
    else if (r == "second")
      cfg.reference = ReferenceMode::Second;
    else
      invalid(n.at("reference"), "expected mean, first or second");
  }
  if (n.has("tabulation")) {
    const auto t = n.child("tabulation");
    t.allow({"t_max", "points"});
    cfg.tabulation.t_max = t.quantity("t_max", Dimension::Time, cfg.units);
    cfg.tabulation.points = t.count("points");
  }
}

void parse_trap(const Node& n, ScenarioConfig& cfg) {
  n.allow({"omega_min", "omega_max", "points", "rel_noise", "seed", "ambient_temperature", "max_components"});
  TrapConfig t;
  const auto& u = cfg.units;
  t.omega_min = u.to_si(n.quantity("omega_min", Dimension::Frequency, u), Dimension::Frequency);
  t.omega_max = u.to_si(n.quantity("omega_max", Dimension::Frequency, u), Dimension::Frequency);
  if (!(t.omega_min > 0.0 && t.omega_max > t.omega_min)) invalid(n.path(), "need 0 < omega_min < omega_max");
  if (n.has("points")) t.points = n.count("points");
  if (t.points < 2) invalid(n.at("points"), "need at least 2 frequencies");
  if (n.has("rel_noise")) t.rel_noise = n.number("rel_noise");
  if (!(t.rel_noise >= 0.0 && t.rel_noise <= 0.5)) invalid(n.at("rel_noise"), "must lie in [0, 0.5]");
  if (n.has("seed")) t.seed = n.raw("seed").is_number_unsigned() ? n.raw("seed").get<std::uint64_t>() : 0;
  if (n.has("seed") && !n.raw("seed").is_number_unsigned()) invalid(n.at("seed"), "expected an unsigned integer");
  t.ambient_temperature = u.to_si(n.quantity("ambient_temperature", Dimension::Energy, u), Dimension::Energy);
  if (n.has("max_components")) t.max_components = n.count("max_components");
  if (t.max_components > 3) invalid(n.at("max_components"), "at most 3");
  cfg.trap = t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  require(bool(f), Errc::InvalidArgument, "cannot write " + path.string());
  f << text;
  require(bool(f), Errc::InvalidArgument, "write failed for " + path.string());
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = (i + 1 == n) ? hi : lo * std::pow(hi / lo, double(i) / double(n - 1));
  return out;
}

ContrastCurve grid_curve(const ScenarioConfig& cfg, const NoiseModel& model, const std::vector<double>& times,
                         std::optional<WignerGrid>* last) {
  const auto cat = cfg.cat_state();
  const auto initial = cat_wigner(cat, default_grid(cat, cfg.per_fringe));
  const auto states = evolve_fpe(initial, model, times, {cfg.substeps, true});
  ContrastCurve curve;
  curve.method = ContrastMethod::GridPDE;
  for (const auto& s : states) {
    const double r = peak_ratio(s);
    curve.time.push_back(s.time);
    curve.contrast.push_back(r);
    curve.a_int.push_back(-std::log(r));
  }
  if (last) *last = states.back();
  return curve;
}

ContrastCurve method_curve(ContrastMethod m, const ScenarioConfig& cfg, const NoiseModel& model,
                           const std::vector<double>& times, std::optional<WignerGrid>* last = nullptr) {
  switch (m) {
    case ContrastMethod::ClosedForm:
    case ContrastMethod::Quadrature:
      return contrast_curve(cfg.cat_state(), model, times, m);
    case ContrastMethod::ExactGaussian:
      return exact_contrast_curve(cfg.cat_state(), embed(model), times);
    case ContrastMethod::GridPDE:
      return grid_curve(cfg, model, times, last);
  }
  return {};
}

std::vector<std::string> write_contrast(const ScenarioConfig& cfg, const std::vector<ContrastMethod>& methods,
                                        const RunOptions& opt, std::vector<ContrastCurve>* curves_out = nullptr) {
  const auto model = cfg.model();
  const auto times = cfg.times();
  std::vector<std::string> header = {"t"};
  std::vector<std::vector<double>> cols = {times};
  std::vector<std::string> written = {"contrast.csv"};
  std::vector<ContrastCurve> curves;
  for (auto m : methods) {
    std::optional<WignerGrid> last;
    curves.push_back(method_curve(m, cfg, model, times, &last));
    header.push_back("a_int_" + std::string(method_name(m)));
    cols.push_back(curves.back().a_int);
    header.push_back("contrast_" + std::string(method_name(m)));
    cols.push_back(curves.back().contrast);
    if (m == ContrastMethod::GridPDE && cfg.snapshot && last) {
      std::ostringstream snap;
      write_snapshot_csv(snap, *last);
      write_text(opt.out_dir / "wigner_final.csv", snap.str());
      written.push_back("wigner_final.csv");
    }
  }
  std::ostringstream out;
  write_csv(out, header, cols);
  write_text(opt.out_dir / "contrast.csv", out.str());
  if (curves_out) *curves_out = std::move(curves);
  return written;
}

ordered_json with_unit(double value, std::string_view unit) { return {{"value", value}, {"unit", unit}}; }

std::vector<std::string> run_invert(const ScenarioConfig& cfg, const RunOptions& opt) {
  if (!cfg.trap) invalid("config.trap", "missing; required by this command");
  const auto& trap = *cfg.trap;
  const auto ion = cfg.ion();
  const auto omegas = log_spaced(trap.omega_min, trap.omega_max, trap.points);
  const auto ambient_model = cfg.si_model(false);
  const auto full_model = cfg.si_model(true);
  const auto ambient = synthesize_dataset(ambient_model, ion, omegas, trap.rel_noise, trap.seed);
  const auto data = synthesize_dataset(full_model, ion, omegas, trap.rel_noise, trap.seed + 1);
  const auto calibration = calibrate_friction(ambient, ion, trap.ambient_temperature);
  const auto fit = fit_spectrum(data, ion, trap.max_components);
  const auto rec = reconstruct_t_eff(fit, calibration.friction, calibration.standard_error);
  const auto truth = effective_temperature(full_model);

  std::ostringstream a, d;
  write_dataset_csv(a, ambient);
  write_dataset_csv(d, data);
  write_text(opt.out_dir / "dataset_ambient.csv", a.str());
  write_text(opt.out_dir / "dataset.csv", d.str());

  std::vector<double> t_si, value, sigma, exact;
  for (double t : cfg.times()) {
    const double ts = cfg.units.to_si(t, Dimension::Time);
    t_si.push_back(ts);
    value.push_back(rec.value(ts) / si::k_B);
    sigma.push_back(rec.uncertainty(ts) / si::k_B);
    exact.push_back(truth(ts) / si::k_B);
  }
  std::ostringstream inv;
  write_csv(inv, {"t_s", "t_eff_K", "sigma_K", "t_eff_true_K"}, {t_si, value, sigma, exact});
  write_text(opt.out_dir / "invert.csv", inv.str());

  ordered_json report;
  report["seed"] = trap.seed;
  report["calibration"] = {{"friction", with_unit(calibration.friction, "kg/s")},
                           {"standard_error", with_unit(calibration.standard_error, "kg/s")},
                           {"reduced_chi_square", calibration.reduced_chi_square},
                           {"ambient_temperature", with_unit(trap.ambient_temperature / si::k_B, "K")}};
  ordered_json comps = ordered_json::array();
  for (std::size_t j = 0; j < fit.components.size(); ++j) {
    const auto k = Eigen::Index(1 + 2 * j);
    comps.push_back({{"amplitude", with_unit(fit.components[j].amplitude, "N^2 s")},
                     {"amplitude_error", with_unit(std::sqrt(fit.covariance(k, k)), "N^2 s")},
                     {"corr_time", with_unit(fit.components[j].corr_time, "s")},
                     {"corr_time_error", with_unit(std::sqrt(fit.covariance(k + 1, k + 1)), "s")}});
  }
  report["fit"] = {{"model", "S(w) = flat + sum_j 2 b_j / (1 + w^2 tau_j^2)"},
                   {"flat", with_unit(fit.flat, "N^2 s")},
                   {"flat_error", with_unit(std::sqrt(fit.covariance(0, 0)), "N^2 s")},
                   {"components", comps},
                   {"chi_square", fit.chi_square},
                   {"aicc", fit.aicc},
                   {"points", fit.points}};
  report["t_eff"] = {{"initial", with_unit(rec.value(0.0) / si::k_B, "K")},
                     {"asymptote", with_unit(rec.temperature.asymptote / si::k_B, "K")}};
  write_text(opt.out_dir / "fit_report.json", report.dump(2) + "\n");
  return {"dataset_ambient.csv", "dataset.csv", "invert.csv", "fit_report.json"};
}

std::vector<std::string> run_heating(const ScenarioConfig& cfg, const RunOptions& opt) {
  if (!cfg.trap) invalid("config.trap", "missing; required by this command");
  const auto& trap = *cfg.trap;
  const auto ion = cfg.ion();
  const auto omegas = log_spaced(trap.omega_min, trap.omega_max, trap.points);
  const auto model = cfg.si_model(true);
  const auto data = synthesize_dataset(model, ion, omegas, trap.rel_noise, trap.seed);
  const auto samples = spectrum_samples(data, ion);
  std::vector<double> truth;
  for (double w : omegas) truth.push_back(power_spectrum(model, w));
  std::ostringstream d, s;
  write_dataset_csv(d, data);
  write_csv(s, {"omega_rad_s", "S_model_N2s", "S_measured_N2s"}, {omegas, truth, samples.value});
  write_text(opt.out_dir / "dataset.csv", d.str());
  write_text(opt.out_dir / "spectrum.csv", s.str());
  return {"dataset.csv", "spectrum.csv"};
}

std::vector<std::string> run_fig2(const ScenarioConfig& cfg, const RunOptions& opt) {
  const FieldNoise* white = nullptr;
  const FieldNoise* coloured = nullptr;
  for (const auto& f : cfg.fields) (f.kind == KernelKind::Delta ? white : coloured) = &f;
  if (cfg.fields.size() != 2 || !white || !coloured)
    invalid("config.environment", "fig2 needs exactly one delta and one exponential field");
  const double e1 = white->intensity;
  const double e2 = coloured->intensity;
  const double ref = cfg.reference == ReferenceMode::Mean ? 0.5 * (e1 + e2)
                     : cfg.reference == ReferenceMode::First ? e1
                                                              : e2;
  struct Variant {
    std::string name;
    double first, second;
  };
  const std::vector<Variant> variants = {
      {"fast_dominant", e1, e2}, {"slow_dominant", e2, e1}, {"equal_reference", ref, ref}};

  const auto times = cfg.times();
  const auto cat = cfg.cat_state();
  std::vector<std::string> ch = {"t"}, th = {"t"};
  std::vector<std::vector<double>> cc = {times}, tc = {times};
  for (const auto& v : variants) {
    ScenarioConfig c = cfg;
    c.fields = {FieldNoise::delta(v.first, cfg.charge),
                FieldNoise::exponential(v.second, coloured->corr_time, cfg.charge)};
    const auto model = c.model();
    const auto curve = contrast_curve(cat, model, times);
    ch.push_back("a_int_" + v.name);
    cc.push_back(curve.a_int);
    ch.push_back("contrast_" + v.name);
    cc.push_back(curve.contrast);
    const auto et = effective_temperature(model);
    std::vector<double> te;
    for (double t : times) te.push_back(et(t));
    th.push_back("t_eff_" + v.name);
    tc.push_back(std::move(te));
  }
  std::ostringstream co, te;
  write_csv(co, ch, cc);
  write_csv(te, th, tc);
  write_text(opt.out_dir / "contrast.csv", co.str());
  write_text(opt.out_dir / "teff.csv", te.str());
  return {"contrast.csv", "teff.csv"};
}

std::vector<std::string> run_compare(const ScenarioConfig& cfg, const RunOptions& opt) {
  if (cfg.methods.size() < 2) invalid("config.run.methods", "compare needs at least two methods");
  std::vector<ContrastCurve> curves;
  auto written = write_contrast(cfg, cfg.methods, opt, &curves);
  ordered_json pairs = ordered_json::array();
  for (std::size_t a = 0; a < curves.size(); ++a) {
    for (std::size_t b = a + 1; b < curves.size(); ++b) {
      double max_log = 0.0, sum_sq = 0.0, max_rel = 0.0;
      for (std::size_t i = 0; i < curves[a].time.size(); ++i) {
        const double la = curves[a].a_int[i];
        const double lb = curves[b].a_int[i];
        const double dl = std::abs(la - lb);
        max_log = std::max(max_log, dl);
        sum_sq += dl * dl;
        const double ca = curves[a].contrast[i];
        const double cb = curves[b].contrast[i];
        max_rel = std::max(max_rel, std::abs(ca - cb) / std::max(std::abs(ca), 1e-300));
      }
      pairs.push_back({{"reference", method_name(curves[a].method)},
                       {"method", method_name(curves[b].method)},
                       {"max_log_contrast_deviation", max_log},
                       {"rms_log_contrast_deviation", std::sqrt(sum_sq / double(curves[a].time.size()))},
                       {"max_relative_contrast_deviation", max_rel}});
    }
  }
  ordered_json report;
  report["points"] = cfg.points;
  report["t_end"] = cfg.t_end;
  report["time_unit_s"] = cfg.units.time;
  report["comparisons"] = pairs;
  write_text(opt.out_dir / "compare_report.json", report.dump(2) + "\n");
  written.push_back("compare_report.json");
  return written;
}

}  // namespace

NoiseModel ScenarioConfig::model() const {
  return compose(reservoirs, system, fields, tabulation);
}

NoiseModel ScenarioConfig::si_model(bool fields_on) const {
  std::vector<ReservoirSpec> rs;
  for (auto r : reservoirs) {
    require(r.kind != KernelKind::Tabulated, Errc::InvalidArgument, "trap pipeline needs rational reservoirs");
    r.coupling = units.to_si(r.coupling, Dimension::Friction);
    r.temperature = units.to_si(r.temperature, Dimension::Energy);
    r.corr_time = units.to_si(r.corr_time, Dimension::Time);
    rs.push_back(r);
  }
  std::vector<FieldNoise> fs;
  if (fields_on) {
    for (auto f : fields) {
      f.intensity = units.to_si(f.intensity, Dimension::FieldIntensity);
      f.charge = units.to_si(f.charge, Dimension::Charge);
      f.corr_time = units.to_si(f.corr_time, Dimension::Time);
      fs.push_back(f);
    }
  }
  const SystemParams sys{units.to_si(system.mass, Dimension::Mass),
                         units.to_si(system.frequency, Dimension::Frequency)};
  return compose(rs, sys, fs);
}

IonSpec ScenarioConfig::ion() const {
  require(trap.has_value(), Errc::ConfigInvalid, "config.trap: missing");
  IonSpec ion;
  ion.mass = units.to_si(system.mass, Dimension::Mass);
  ion.charge = units.to_si(charge, Dimension::Charge);
  ion.omega_min = trap->omega_min;
  ion.omega_max = trap->omega_max;
  return ion;
}

std::vector<double> ScenarioConfig::times() const {
  std::vector<double> t(points);
  for (std::size_t i = 0; i < points; ++i) t[i] = (i + 1 == points) ? t_end : t_end * double(i) / double(points - 1);
  return t;
}

CatState ScenarioConfig::cat_state() const {
  if (!cat) invalid("config.cat", "missing; required by this command");
  CatState c = *cat;
  c.mass = system.mass;
  c.frequency = system.frequency;
  return c;
}

ScenarioConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    invalid("config", std::string("not valid JSON: ") + e.what());
  }
  const Node root(j, "config");
  root.allow({"units", "system", "environment", "cat", "run", "trap"});
  ScenarioConfig cfg;
  if (root.has("units")) cfg.units = parse_units(root.child("units"));
  const auto& u = cfg.units;

  const auto sys = root.child("system");
  sys.allow({"mass", "frequency", "charge"});
  cfg.system.mass = sys.quantity("mass", Dimension::Mass, u);
  cfg.system.frequency = sys.quantity_or("frequency", Dimension::Frequency, u, 0.0);
  cfg.charge = sys.quantity_or("charge", Dimension::Charge, u, 1.0);
  if (!(cfg.system.mass > 0.0)) invalid(sys.at("mass"), "must be > 0");
  if (!(cfg.system.frequency >= 0.0)) invalid(sys.at("frequency"), "must be >= 0");

  const auto& env = root.raw("environment");
  if (!env.is_array() || env.empty()) invalid("config.environment", "expected a nonempty array");
  for (std::size_t i = 0; i < env.size(); ++i)
    parse_source(Node(env[i], "config.environment[" + std::to_string(i) + "]"), cfg);

  if (root.has("cat")) {
    const auto c = root.child("cat");
    c.allow({"separation", "width"});
    CatState cat;
    cat.separation = c.quantity("separation", Dimension::Length, u);
    cat.width = c.quantity("width", Dimension::Length, u);
    if (!(cat.separation > 0.0)) invalid(c.at("separation"), "must be > 0");
    if (!(cat.width > 0.0)) invalid(c.at("width"), "must be > 0");
    cfg.cat = cat;
  }
  if (root.has("run")) parse_run(root.child("run"), cfg);
  if (root.has("trap")) parse_trap(root.child("trap"), cfg);
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) invalid("config", "cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return parse_config(s.str());
}

std::string_view fig2_config_text() {
  return R"({
  "units": {"length": "1 nm", "time": "1 us"},
  "system": {"mass": "40 amu", "frequency": "1 MHz", "charge": "1 e"},
  "environment": [
    {"type": "reservoir", "kernel": "delta", "coupling": "1.06e-30 kg/s", "temperature": "300 K"},
    {"type": "field", "kernel": "delta", "intensity": "1e-9 V^2 s/m^2"},
    {"type": "field", "kernel": "exponential", "intensity": "6e-10 V^2 s/m^2", "corr_time": "5 us"}
  ],
  "cat": {"separation": "7 nm", "width": "0.12 nm"},
  "run": {"t_end": "30 us", "points": 301, "reference": "mean"}
}
)";
}

std::optional<Command> parse_command(std::string_view name) {
  if (name == "efftemp") return Command::EffTemp;
  if (name == "contrast") return Command::Contrast;
  if (name == "exact") return Command::Exact;
  if (name == "wigner") return Command::Wigner;
  if (name == "heating") return Command::Heating;
  if (name == "invert") return Command::Invert;
  if (name == "fig2") return Command::Fig2;
  if (name == "compare") return Command::Compare;
  return std::nullopt;
}

std::vector<std::string> run_command(Command command, ScenarioConfig cfg, const RunOptions& options) {
  if (options.seed && cfg.trap) cfg.trap->seed = *options.seed;
  std::filesystem::create_directories(options.out_dir);
  switch (command) {
    case Command::EffTemp: {
      const auto et = effective_temperature(cfg.model());
      std::vector<double> t = cfg.times(), v;
      for (double x : t) v.push_back(et(x));
      std::ostringstream out;
      write_csv(out, {"t", "t_eff"}, {t, v});
      write_text(options.out_dir / "teff.csv", out.str());
      return {"teff.csv"};
    }
    case Command::Contrast:
      return write_contrast(cfg, cfg.methods, options);
    case Command::Exact:
      return write_contrast(cfg, {ContrastMethod::ClosedForm, ContrastMethod::ExactGaussian}, options);
    case Command::Wigner:
      return write_contrast(cfg, {ContrastMethod::ClosedForm, ContrastMethod::GridPDE}, options);
    case Command::Heating:
      return run_heating(cfg, options);
    case Command::Invert:
      return run_invert(cfg, options);
    case Command::Fig2:
      return run_fig2(cfg, options);
    case Command::Compare:
      return run_compare(cfg, options);
  }
  return {};
}

}  // namespace ndec
