#include "entnum/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "entnum/discretization.hpp"
#include "entnum/error.hpp"
#include "entnum/experiments.hpp"
#include "entnum/fit.hpp"
#include "entnum/greedy.hpp"

namespace entnum {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int ceil_log2(int n) { return static_cast<int>(std::ceil(std::log2(static_cast<double>(n)) - 1e-12)); }

std::vector<int> range(int lo, int hi) {
  std::vector<int> v;
  for (int k = lo; k <= hi; ++k) v.push_back(k);
  return v;
}

bool uses_q(const std::string& e) { return e == "sigma-decay" || e == "duality-check" || e == "it2-octahedron"; }
bool uses_dictionary(const std::string& e) { return uses_q(e); }
bool uses_subspace(const std::string& e) { return e == "mp-duality" || e == "it1"; }

Dictionary make_dictionary(const ExperimentConfig& c) {
  const NormedSpace space = NormedSpace::sequence(c.dim, c.q);
  if (c.dictionary == "canonical") return Dictionary::canonical(space);
  std::mt19937_64 rng(*c.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix raw(c.dim, c.n);
  for (int j = 0; j < c.n; ++j)
    for (int i = 0; i < c.dim; ++i) raw(i, j) = normal(rng);
  return Dictionary::normalized(space, raw);
}

MeasureSpace make_measure(const ExperimentConfig& c, std::uint64_t seed) {
  return c.measure == "uniform" ? MeasureSpace::uniform(c.s) : MeasureSpace::random(c.s, c.measure_spread, seed);
}

json fit_json(const FitResult& f) {
  return {{"exponent", f.exponent}, {"constant", f.constant}, {"residual_rms", f.residual_rms},
          {"range_lo", f.range_lo}, {"range_hi", f.range_hi},  {"points", f.points}};
}

// Fit of `values` against the log-ratio envelope over rows with k >= log2 n
// (when requested); null when fewer than three usable points remain.
json log_ratio_fit(const std::vector<int>& ks, const std::vector<double>& values, int n, bool exclude_small) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (exclude_small && ks[i] < std::log2(static_cast<double>(n))) continue;
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) continue;
    if (ks[i] >= 2 * n) continue;
    xs.push_back(ks[i]);
    ys.push_back(values[i]);
  }
  if (xs.size() < 3) return nullptr;
  return fit_json(fit_envelope(xs, ys, n, EnvelopeModel::kLogRatioK));
}

void add_profile_rows(Report& r, const EntropyProfile& profile) {
  r.columns = {"k", "lower", "upper", "envelope", "ratio"};
  json sources = json::array();
  for (const ProfileRow& row : profile.rows) {
    r.rows.push_back({row.k, row.lower, row.upper, row.envelope, row.ratio});
    sources.push_back({{"k", row.k}, {"lower", row.lower_source}, {"upper", row.upper_source}});
  }
  r.summary["provenance"] = sources;
}

std::vector<int> profile_ks(const EntropyProfile& p) {
  std::vector<int> ks;
  for (const auto& row : p.rows) ks.push_back(row.k);
  return ks;
}

std::vector<double> profile_uppers(const EntropyProfile& p) {
  std::vector<double> v;
  for (const auto& row : p.rows) v.push_back(row.upper);
  return v;
}

Report run_sigma_decay(const ExperimentConfig& c) {
  const Dictionary D = make_dictionary(c);
  const auto samples = sample_octahedron(D, c.samples, *c.seed);
  const SigmaProfile prof = sigma_profile(samples, D, c.m_list);
  Report r;
  r.columns = {"m", "sigma"};
  std::vector<double> ms, vals;
  for (const SigmaRow& row : prof.rows) {
    r.rows.push_back({row.m, row.sigma});
    if (row.m > 0 && row.sigma > 0.0) {
      ms.push_back(row.m);
      vals.push_back(row.sigma);
    }
  }
  r.summary["fit"] = ms.size() >= 3 ? fit_json(fit_envelope(ms, vals, c.n, EnvelopeModel::kPowerM)) : json(nullptr);
  r.summary["theory_exponent"] = 1.0 / c.q - 1.0;
  return r;
}

Report run_ball_entropy(const ExperimentConfig& c) {
  BallOptions opt;
  opt.samples = c.samples;
  opt.seed = *c.seed;
  const BallReport b = ball_entropy_experiment(c.p, c.n, c.k_list, opt);
  Report r;
  add_profile_rows(r, b.profile);
  const auto ks = profile_ks(b.profile);
  r.summary["fit"] = log_ratio_fit(ks, profile_uppers(b.profile), c.n, c.fit_exclude_small_k);
  r.summary["theory_exponent"] = 1.0 / c.p;
  r.summary["witnesses"] = b.witnesses;
  if (!ks.empty()) r.summary["ratio_spread"] = ratio_spread(b.profile, ks.front(), ks.back());
  return r;
}

Report run_duality_check(const ExperimentConfig& c) {
  const Dictionary D = make_dictionary(c);
  DualityOptions opt;
  opt.primal_samples = c.samples;
  opt.dual_samples = c.samples;
  opt.seed = *c.seed;
  const DualityReport d = duality_sum_check(D, c.m, opt);
  Report r;
  r.columns = {"k", "primal_lower", "primal_upper", "dual_lower", "dual_upper"};
  json sources = json::array();
  for (const DualityRow& row : d.rows) {
    r.rows.push_back({row.k, row.primal_lower, row.primal_upper, row.dual_lower, row.dual_upper});
    sources.push_back({{"k", row.k}, {"primal_upper", row.primal_source}, {"dual_upper", row.dual_source}});
  }
  r.summary["provenance"] = sources;
  r.summary["power"] = d.power;
  r.summary["primal_sum"] = {d.primal_sum_lower, d.primal_sum_upper};
  r.summary["dual_sum"] = {d.dual_sum_lower, d.dual_sum_upper};
  r.summary["ratio_interval"] = {d.ratio_lower, d.ratio_upper};
  r.summary["contains_one"] = d.contains_one;
  r.summary["status"] = to_string(d.status);
  r.property_violation = d.status == DualityStatus::kViolation;
  return r;
}

Report run_mp_duality(const ExperimentConfig& c) {
  Report r;
  r.columns = {"trial", "N", "s", "p", "direct", "dual", "gap", "max_w_norm_over_mp", "transfer_ratio"};
  double worst2 = 0.0, worst = 0.0;
  int transfer_violations = 0;
  for (int t = 0; t < c.trials; ++t) {
    const std::uint64_t seed = *c.seed + 1000ULL * t;
    const Subspace sub = Subspace::random(make_measure(c, seed), c.N, seed + 1);
    const SamplePointSet pts = SamplePointSet::random(c.s, c.n, seed + 2);
    for (double p : c.p_list) {
      const double direct = m_p_direct(sub, p, c.solver_tol);
      const double dual = m_p_dual(sub, p, c.solver_tol);
      const double gap = std::abs(direct - dual);
      (p == 2.0 ? worst2 : worst) = std::max(p == 2.0 ? worst2 : worst, gap);
      const DiscretizationDictionary d = build_discretization_dictionary(sub, pts, p);
      double ratio = 0.0;
      try {
        ratio = verify_transfer(sub, d, 1000, seed + 3).max_ratio;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kPropertyViolation) throw;
        ++transfer_violations;
        ratio = std::numeric_limits<double>::infinity();
      }
      r.rows.push_back({t, c.N, c.s, p, direct, dual, gap, d.max_w_norm / d.mp, ratio});
    }
  }
  r.summary["max_gap_p2"] = worst2;
  r.summary["max_gap_other"] = worst;
  r.summary["transfer_violations"] = transfer_violations;
  r.property_violation = worst2 > c.duality_tol_p2 || worst > c.duality_tol || transfer_violations > 0;
  return r;
}

Report run_it1(const ExperimentConfig& c) {
  const Subspace sub = Subspace::random(make_measure(c, *c.seed), c.N, *c.seed + 1);
  const SamplePointSet pts = SamplePointSet::random(c.s, c.n, *c.seed + 2);
  It1Options opt;
  opt.samples = c.samples;
  opt.seed = *c.seed;
  const It1Report it = it1_experiment(sub, pts, c.p, c.k_list, opt);
  Report r;
  add_profile_rows(r, it.profile);
  r.columns.push_back("finite_dim_upper");
  for (std::size_t i = 0; i < r.rows.size(); ++i) r.rows[i].push_back(it.finite_dim_upper[i]);
  const auto ks = profile_ks(it.profile);
  r.summary["mp"] = it.mp;
  r.summary["samples"] = it.samples;
  r.summary["fit"] = log_ratio_fit(ks, profile_uppers(it.profile), c.n, c.fit_exclude_small_k);
  r.summary["theory_exponent"] = 1.0 / c.p;
  if (!ks.empty()) r.summary["ratio_spread"] = ratio_spread(it.profile, ks.front(), ks.back());
  return r;
}

Report run_it2_octahedron(const ExperimentConfig& c) {
  const Dictionary D = make_dictionary(c);
  OctahedronOptions opt;
  opt.samples = c.samples;
  opt.seed = *c.seed;
  const OctahedronReport o = octahedron_experiment(D, c.k_list, opt);
  Report r;
  add_profile_rows(r, o.profile);
  for (const char* col : {"m", "sigma_part", "quantization_part"}) r.columns.push_back(col);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    r.rows[i].push_back(o.terms[i]);
    r.rows[i].push_back(o.sigma_part[i]);
    r.rows[i].push_back(o.quantization_part[i]);
  }
  const auto ks = profile_ks(o.profile);
  r.summary["fit"] = log_ratio_fit(ks, profile_uppers(o.profile), c.n, c.fit_exclude_small_k);
  r.summary["theory_exponent"] = 1.0 - 1.0 / c.q;
  if (!c.certificate.empty()) {
    const PointSet W = sample_octahedron(D, c.samples, *c.seed);
    const SparseCoverResult cover = cover_from_sparse(D, ks.back(), W, opt.cover);
    CoverCertificate cert = cover.certificate;
    cert.seed = *c.seed;
    std::ofstream f(c.certificate);
    if (!f) fail(ErrorCode::kIo, "cannot write certificate to '" + c.certificate + "'");
    f << cover_certificate_to_json(cert, Metric::ambient(D.space()), &W) << '\n';
    r.summary["certificate"] = c.certificate;
  }
  return r;
}

template <class T>
void read_field(const json& j, const char* key, T& dst, std::vector<std::string>& errors) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception&) {
    errors.push_back(std::string(key) + ": wrong type (" + j.at(key).dump() + ")");
  }
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"sigma-decay", "ball-entropy", "duality-check",
                                                 "mp-duality",  "it1",          "it2-octahedron"};
  return names;
}

json config_to_json(const ExperimentConfig& c) {
  json j = {{"experiment", c.experiment},
            {"q", c.q},
            {"p", c.p},
            {"n", c.n},
            {"dim", c.dim},
            {"N", c.N},
            {"s", c.s},
            {"dictionary", c.dictionary},
            {"measure", c.measure},
            {"measure_spread", c.measure_spread},
            {"k_list", c.k_list},
            {"m_list", c.m_list},
            {"p_list", c.p_list},
            {"m", c.m},
            {"samples", c.samples},
            {"trials", c.trials},
            {"solver_tol", c.solver_tol},
            {"duality_tol_p2", c.duality_tol_p2},
            {"duality_tol", c.duality_tol},
            {"transfer_tol", c.transfer_tol},
            {"fit_exclude_small_k", c.fit_exclude_small_k},
            {"out", c.out},
            {"format", c.format},
            {"certificate", c.certificate}};
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::kInvalidArgument, "config must be a JSON object");
  ExperimentConfig c;
  std::vector<std::string> errors;
  const json known = config_to_json(c);
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) errors.push_back(key + ": unknown field");
  }
  read_field(j, "experiment", c.experiment, errors);
  if (j.contains("seed") && !j.at("seed").is_null()) {
    if (j.at("seed").is_number_unsigned()) c.seed = j.at("seed").get<std::uint64_t>();
    else errors.push_back("seed: must be a nonnegative integer");
  }
  read_field(j, "q", c.q, errors);
  read_field(j, "p", c.p, errors);
  read_field(j, "n", c.n, errors);
  read_field(j, "dim", c.dim, errors);
  read_field(j, "N", c.N, errors);
  read_field(j, "s", c.s, errors);
  read_field(j, "dictionary", c.dictionary, errors);
  read_field(j, "measure", c.measure, errors);
  read_field(j, "measure_spread", c.measure_spread, errors);
  read_field(j, "k_list", c.k_list, errors);
  read_field(j, "m_list", c.m_list, errors);
  read_field(j, "p_list", c.p_list, errors);
  read_field(j, "m", c.m, errors);
  read_field(j, "samples", c.samples, errors);
  read_field(j, "trials", c.trials, errors);
  read_field(j, "solver_tol", c.solver_tol, errors);
  read_field(j, "duality_tol_p2", c.duality_tol_p2, errors);
  read_field(j, "duality_tol", c.duality_tol, errors);
  read_field(j, "transfer_tol", c.transfer_tol, errors);
  read_field(j, "fit_exclude_small_k", c.fit_exclude_small_k, errors);
  read_field(j, "out", c.out, errors);
  read_field(j, "format", c.format, errors);
  read_field(j, "certificate", c.certificate, errors);
  if (!errors.empty()) {
    std::string msg = "invalid config:";
    for (const auto& e : errors) msg += "\n  " + e;
    fail(ErrorCode::kInvalidArgument, msg);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::kIo, "cannot read config '" + path + "'");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument, "config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    fail(ErrorCode::kInvalidArgument, "override '" + assignment + "' must have the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  json j = config_to_json(config);
  if (!j.contains(key)) fail(ErrorCode::kInvalidArgument, "override: unknown field '" + key + "'");
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::exception&) {
    parsed = value;  // bare strings
  }
  j[key] = parsed;
  config = config_from_json(j);
}

std::vector<std::string> validate(const ExperimentConfig& c) {
  std::vector<std::string> errors;
  const auto& names = experiment_names();
  const std::string& e = c.experiment;
  if (std::find(names.begin(), names.end(), e) == names.end()) {
    errors.push_back("experiment: '" + e + "' is not one of sigma-decay, ball-entropy, duality-check, mp-duality, "
                     "it1, it2-octahedron");
    return errors;
  }
  if (!c.seed) errors.push_back("seed: a seed is mandatory");
  if (c.format != "csv" && c.format != "json") errors.push_back("format: must be csv or json");
  if (c.samples < 0) errors.push_back("samples: must be >= 0");

  if (uses_q(e) && !(c.q > 1.0 && std::isfinite(c.q))) errors.push_back("q: must lie in (1, inf)");
  if (e == "ball-entropy" || e == "it1") {
    if (!(c.p >= 2.0 && std::isfinite(c.p))) {
      errors.push_back("p: " + num(c.p) + " violates the precondition p >= 2 (p in [2, inf))");
    }
  }
  if (c.n < 1) errors.push_back("n: must be >= 1");
  if (uses_dictionary(e)) {
    if (c.dictionary != "canonical" && c.dictionary != "gaussian") {
      errors.push_back("dictionary: must be canonical or gaussian");
    }
    if (c.dim < 0) errors.push_back("dim: must be >= 0");
    if (c.dictionary == "canonical" && c.dim != 0 && c.dim != c.n) {
      errors.push_back("dim: the canonical dictionary needs dim = n");
    }
  }
  if (e == "duality-check") {
    if (c.n > 12) errors.push_back("n: duality-check needs n <= 12");
    if (c.m < 0) errors.push_back("m: must be >= 0");
  }
  if (uses_subspace(e)) {
    if (c.s < 1) errors.push_back("s: must be >= 1");
    if (c.N < 1 || c.N > c.s) errors.push_back("N: must lie in [1, s]");
    if (c.n > c.s) errors.push_back("n: the point set needs n <= s");
    if (c.measure != "uniform" && c.measure != "random") errors.push_back("measure: must be uniform or random");
    if (c.measure_spread < 0.0) errors.push_back("measure_spread: must be >= 0");
  }
  if (e == "mp-duality") {
    if (c.trials < 0) errors.push_back("trials: must be >= 0");
    for (double p : c.p_list) {
      if (!(p >= 2.0 && std::isfinite(p))) {
        errors.push_back("p_list: " + num(p) + " violates the precondition p >= 2");
      }
    }
  }
  if (e == "sigma-decay") {
    for (int m : c.m_list) {
      if (m < 1 || m > c.n) errors.push_back("m_list: " + std::to_string(m) + " is outside [1, n]");
    }
  }
  if (e == "ball-entropy" || e == "it1" || e == "it2-octahedron") {
    for (int k : c.k_list) {
      if (k < 1 || k > c.n) {
        errors.push_back("k_list: " + std::to_string(k) + " is outside [1, n]; profiles stop at k = n");
      }
    }
  }
  if (!c.certificate.empty() && e != "it2-octahedron") errors.push_back("certificate: only it2-octahedron writes one");
  return errors;
}

ExperimentConfig resolved(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  const std::string& e = c.experiment;
  if (uses_dictionary(e) && c.dim == 0) c.dim = c.n;
  if (e == "sigma-decay") {
    if (c.m_list.empty()) {
      for (int m = 1; m <= c.n; m *= 2) c.m_list.push_back(m);
    }
    if (c.samples == 0) c.samples = 50;
  } else if (e == "ball-entropy") {
    if (c.k_list.empty()) c.k_list = range(std::max(1, ceil_log2(c.n)), c.n);
    if (c.samples == 0) c.samples = 1000;
  } else if (e == "duality-check") {
    if (c.samples == 0) c.samples = 300;
  } else if (e == "mp-duality") {
    if (c.p_list.empty()) c.p_list = {2.0, 3.0, 4.0};
    if (c.trials == 0) c.trials = 20;
  } else if (e == "it1") {
    if (c.k_list.empty()) c.k_list = range(std::max(1, ceil_log2(c.n)), c.n);
    if (c.samples == 0) c.samples = 1000;
  } else if (e == "it2-octahedron") {
    if (c.k_list.empty()) c.k_list = range(std::min(c.n, std::max(1, ceil_log2(2 * c.n))), c.n);
    if (c.samples == 0) c.samples = 400;
  }
  return c;
}

Report run(const ExperimentConfig& config) {
  const std::vector<std::string> errors = validate(config);
  if (!errors.empty()) {
    std::string msg = "invalid config for '" + config.experiment + "':";
    for (const auto& err : errors) msg += "\n  " + err;
    fail(ErrorCode::kInvalidArgument, msg);
  }
  const ExperimentConfig c = resolved(config);
  Report r;
  const std::string& e = c.experiment;
  if (e == "sigma-decay") r = run_sigma_decay(c);
  else if (e == "ball-entropy") r = run_ball_entropy(c);
  else if (e == "duality-check") r = run_duality_check(c);
  else if (e == "mp-duality") r = run_mp_duality(c);
  else if (e == "it1") r = run_it1(c);
  else r = run_it2_octahedron(c);
  r.experiment = e;
  json cfg = config_to_json(c);
  cfg.erase("out");
  cfg.erase("format");
  r.metadata = {{"version", version_string()},
                {"seed", *c.seed},
                {"config", cfg},
                {"tolerances",
                 {{"solver", c.solver_tol},
                  {"duality_p2", c.duality_tol_p2},
                  {"duality", c.duality_tol},
                  {"transfer", c.transfer_tol}}}};
  return r;
}

std::string report_to_csv(const Report& report) {
  std::ostringstream os;
  for (std::size_t i = 0; i < report.columns.size(); ++i) os << (i ? "," : "") << report.columns[i];
  os << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      const json& v = row[i];
      if (v.is_number_integer()) os << v.get<long long>();
      else if (v.is_number()) os << num(v.get<double>());
      else if (v.is_string()) os << v.get<std::string>();
      else os << v.dump();
    }
    os << '\n';
  }
  return os.str();
}

std::string report_to_json(const Report& report) {
  json j = {{"experiment", report.experiment},
            {"columns", report.columns},
            {"rows", report.rows},
            {"summary", report.summary},
            {"metadata", report.metadata},
            {"property_violation", report.property_violation}};
  // Plot-ready (k, value, envelope) triples for profile experiments.
  const auto& cols = report.columns;
  const auto k = std::find(cols.begin(), cols.end(), "k");
  const auto up = std::find(cols.begin(), cols.end(), "upper");
  const auto env = std::find(cols.begin(), cols.end(), "envelope");
  if (k != cols.end() && up != cols.end() && env != cols.end()) {
    json plot = json::array();
    for (const auto& row : report.rows) {
      plot.push_back({row[k - cols.begin()], row[up - cols.begin()], row[env - cols.begin()]});
    }
    j["plot"] = plot;
  }
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("report is not valid JSON: ") + e.what());
  }
  Report r;
  try {
    r.experiment = j.at("experiment").get<std::string>();
    r.columns = j.at("columns").get<std::vector<std::string>>();
    r.rows = j.at("rows").get<std::vector<std::vector<json>>>();
    r.summary = j.at("summary");
    r.metadata = j.at("metadata");
    r.property_violation = j.at("property_violation").get<bool>();
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string report_summary(const Report& report) {
  std::ostringstream os;
  os << report.experiment << ": " << report.rows.size() << " rows";
  for (const auto& [key, value] : report.summary.items()) {
    if (key == "provenance") continue;
    os << "\n  " << key << ": " << value.dump();
  }
  if (report.property_violation) os << "\n  PROPERTY VIOLATION";
  os << '\n';
  return os.str();
}

void emit(const Report& report, const std::string& format, const std::string& path) {
  if (format != "csv" && format != "json") fail(ErrorCode::kInvalidArgument, "format must be csv or json");
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kIo, "cannot write report to '" + path + "'");
  f << (format == "csv" ? report_to_csv(report) : report_to_json(report));
  if (!f) fail(ErrorCode::kIo, "write to '" + path + "' failed");
}

std::string version_string() { return std::string("entnum-") + kVersion; }

}  // namespace entnum
