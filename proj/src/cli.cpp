#include "qmlab/cli.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qmlab/errors.hpp"
#include "qmlab/exponents.hpp"
#include "qmlab/flat_quasimode.hpp"
#include "qmlab/geometry.hpp"
#include "qmlab/rational.hpp"
#include "qmlab/region_norms.hpp"
#include "qmlab/sampled_field.hpp"
#include "qmlab/scale_predictor.hpp"
#include "qmlab/sphere_harmonics.hpp"

namespace qmlab::cli {
namespace {

using nlohmann::json;

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DomainError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw DomainError("config file must contain a JSON object");
  return j;
}

// The resolved config starts as the command's defaults; file keys must name a
// known parameter so typos fail loudly instead of being ignored.
void merge_config(json& resolved, const json& file, const std::string& command) {
  for (auto it = file.begin(); it != file.end(); ++it) {
    if (!resolved.contains(it.key()))
      throw DomainError(command + ": unknown config key '" + it.key() + "'");
    resolved[it.key()] = it.value();
  }
}

double get_double(const json& c, const char* key) {
  const json& v = c.at(key);
  if (!v.is_number()) throw DomainError(std::string("config key '") + key + "' must be a number");
  return v.get<double>();
}

int get_int(const json& c, const char* key) {
  const json& v = c.at(key);
  if (!v.is_number_integer())
    throw DomainError(std::string("config key '") + key + "' must be an integer");
  return v.get<int>();
}

long long get_ll(const json& c, const char* key) {
  const json& v = c.at(key);
  if (!v.is_number_integer())
    throw DomainError(std::string("config key '") + key + "' must be an integer");
  return v.get<long long>();
}

bool get_bool(const json& c, const char* key) {
  const json& v = c.at(key);
  if (!v.is_boolean())
    throw DomainError(std::string("config key '") + key + "' must be a boolean");
  return v.get<bool>();
}

std::string get_string(const json& c, const char* key) {
  const json& v = c.at(key);
  if (!v.is_string())
    throw DomainError(std::string("config key '") + key + "' must be a string");
  return v.get<std::string>();
}

LebesgueIndex parse_p(const json& v) {
  if (v.is_string()) return LebesgueIndex::parse(v.get<std::string>());
  if (v.is_number()) return LebesgueIndex(Rational::from_double(v.get<double>()));
  throw DomainError("p must be a number or a string like \"5/2\" or \"inf\"");
}

Rational parse_rational(const json& v, const char* key) {
  if (v.is_number()) return Rational::from_double(v.get<double>());
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    try {
      const auto slash = s.find('/');
      if (slash != std::string::npos)
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
      if (s.find('.') != std::string::npos) return Rational::from_double(std::stod(s));
      return Rational(std::stoll(s));
    } catch (const DomainError&) {
      throw;
    } catch (const std::exception&) {
      throw DomainError(std::string("config key '") + key + "' is not a valid rational: " + s);
    }
  }
  throw DomainError(std::string("config key '") + key + "' must be a number or rational string");
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open output file: " + path);
  out << content;
  if (!out) throw DomainError("failed while writing output file: " + path);
}

std::string json_document(const json& config, const char* payload_key, const json& payload) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["config"] = config;
  doc[payload_key] = payload;
  return doc.dump(2) + "\n";
}

// CSV files carry the same reproducibility header as JSON outputs, as a
// single '#' comment line ahead of the column header.
std::string csv_prelude(const json& config) {
  json head;
  head["format_version"] = kFormatVersion;
  head["config"] = config;
  return "# " + head.dump() + "\n";
}

void require_out(const std::string& out, const char* command) {
  if (out.empty())
    throw DomainError(std::string(command) + " writes files and requires --out");
}

// ---------------------------------------------------------------- exponents

json exponent_to_json(const ExponentResult& r) {
  json j;
  j["value"] = r.exponent;
  j["exact"] = r.exact.str();
  j["regime"] = to_string(r.regime);
  j["justification"] = to_string(r.justification);
  return j;
}

int cmd_exponents(const json& c, const std::string& out) {
  const int n = get_int(c, "n");
  const int k = get_int(c, "k");
  const double beta = get_double(c, "beta");
  const std::string format = get_string(c, "format");
  if (format != "csv" && format != "json")
    throw DomainError("exponents: format must be \"csv\" or \"json\"");

  std::vector<LebesgueIndex> ps;
  if (!c.at("p_list").is_null()) {
    if (!c.at("p_list").is_array() || c.at("p_list").empty())
      throw DomainError("exponents: p_list must be a non-empty array");
    for (const json& v : c.at("p_list")) ps.push_back(parse_p(v));
  } else {
    ps.push_back(parse_p(c.at("p")));
  }

  const Breakpoints bp = breakpoints(n);
  struct Row {
    LebesgueIndex p;
    ExponentResult d;
    std::optional<ExponentResult> s;
  };
  std::vector<Row> rows;
  for (const LebesgueIndex& p : ps) {
    Row row{p, delta(n, k, p), std::nullopt};
    if (k >= 1 && k <= n - 1) row.s = sigma(n, k, p, beta);
    rows.push_back(std::move(row));
  }

  std::string text;
  if (format == "csv") {
    std::ostringstream os;
    os << csv_prelude(c);
    os << "n,k,p,beta,delta,delta_exact,delta_regime,delta_justification,log_loss,"
          "sigma,sigma_exact,sigma_regime,sigma_justification,p_stz,p_hyp\n";
    for (const Row& r : rows) {
      os << n << ',' << k << ',' << r.p.str() << ',' << format_double(beta) << ','
         << format_double(r.d.exponent) << ',' << r.d.exact.str() << ',' << to_string(r.d.regime)
         << ',' << to_string(r.d.justification) << ',' << (r.d.log_loss ? 1 : 0) << ',';
      if (r.s) {
        os << format_double(r.s->exponent) << ',' << r.s->exact.str() << ','
           << to_string(r.s->regime) << ',' << to_string(r.s->justification);
      } else {
        os << ",,,";
      }
      os << ',' << bp.p_stz.str() << ',' << bp.p_hyp.str() << '\n';
    }
    text = os.str();
  } else {
    json payload = json::array();
    for (const Row& r : rows) {
      json row;
      row["n"] = n;
      row["k"] = k;
      row["p"] = r.p.str();
      row["beta"] = beta;
      row["delta"] = exponent_to_json(r.d);
      row["delta"]["log_loss"] = r.d.log_loss;
      row["sigma"] = r.s ? exponent_to_json(*r.s) : json(nullptr);
      row["p_stz"] = bp.p_stz.str();
      row["p_hyp"] = bp.p_hyp.str();
      payload.push_back(std::move(row));
    }
    text = json_document(c, "rows", payload);
  }

  if (out.empty())
    std::cout << text;
  else
    write_text(out, text);
  return 0;
}

// ------------------------------------------------------------------ predict

int cmd_predict(const json& c, const std::string& out) {
  ScaleQuery q;
  q.n = get_int(c, "n");
  q.k = get_int(c, "k");
  q.p = parse_p(c.at("p"));
  q.beta = get_double(c, "beta");
  q.alpha_grid_step = parse_rational(c.at("alpha_grid_step"), "alpha_grid_step");
  if (!(q.beta > 0.0)) throw DomainError("predict: beta must be positive");
  if (!(q.alpha_grid_step > Rational(0)) || Rational(1, 2) < q.alpha_grid_step)
    throw DomainError("predict: alpha_grid_step must lie in (0, 1/2]");

  const Prediction pred = predict_alpha(q);

  json pj;
  json intervals = json::array();
  for (const auto& [lo, hi] : pred.alpha_star)
    intervals.push_back(json::array({lo.str(), hi.str()}));
  pj["alpha_star"] = intervals;
  pj["exponent_at_max"] = pred.exponent_at_max;
  pj["exponent_exact"] = pred.exponent_exact.str();
  pj["case"] = to_string(pred.case_label);
  pj["representative_alpha"] = pred.representative_alpha.str();
  pj["representative_alpha_value"] = pred.representative_alpha.to_double();
  pj["critical_time_scale"] = pred.critical_time_scale;

  const std::string doc = json_document(c, "prediction", pj);
  if (out.empty()) {
    std::cout << doc;
    return 0;
  }

  // E(alpha) sampled on the verification grid, for plotting next to the
  // closed-form maximum.
  const Rational beta_r =
      max(Rational(1, 2), min(Rational(1), Rational::from_double(q.beta)));
  std::ostringstream curve;
  curve << csv_prelude(c) << "alpha,E\n";
  const Rational half(1, 2);
  for (Rational a(0); a <= half; a = a + q.alpha_grid_step) {
    const Rational e = tube_exponent_exact(q.n, q.k, q.p, beta_r, a);
    curve << format_double(a.to_double()) << ',' << format_double(e.to_double()) << '\n';
  }

  write_text(out, doc);
  write_text(out + ".curve.csv", curve.str());
  return 0;
}

// ---------------------------------------------------------------- quasimode

int cmd_quasimode(const json& c, const std::string& out, int threads) {
  require_out(out, "quasimode");

  SpectralCap cap;
  cap.n = get_int(c, "n");
  cap.h = get_double(c, "h");
  cap.alpha = get_double(c, "alpha");
  cap.epsilon_cap = get_double(c, "epsilon_cap");
  if (!c.at("omega0").is_null()) {
    if (!c.at("omega0").is_array())
      throw DomainError("quasimode: omega0 must be an array of length n");
    cap.omega0 = c.at("omega0").get<Vec>();
  }
  cap.validate();

  EvalOptions opts;
  opts.node_factor = get_double(c, "node_factor");
  opts.node_budget = get_ll(c, "node_budget");
  opts.threads = threads;

  const double eps = get_double(c, "eps");
  const int samples = get_int(c, "samples");
  const std::string format = get_string(c, "format");
  if (format != "binary" && format != "json")
    throw DomainError("quasimode: format must be \"binary\" or \"json\"");
  const double grid_step =
      c.at("grid_step").is_null() ? cap.h / 4.0 : get_double(c, "grid_step");
  if (!(grid_step > 0.0)) throw DomainError("quasimode: grid_step must be positive");

  // Sampled box: by default the axis-aligned bounding box of the tube where
  // the quasimode is large.
  Vec half(cap.n, 0.0);
  if (!c.at("grid_half_widths").is_null()) {
    if (!c.at("grid_half_widths").is_array() ||
        c.at("grid_half_widths").size() != static_cast<std::size_t>(cap.n))
      throw DomainError("quasimode: grid_half_widths must be an array of length n");
    half = c.at("grid_half_widths").get<Vec>();
    for (double v : half)
      if (!(v > 0.0)) throw DomainError("quasimode: grid_half_widths must be positive");
  } else {
    const OrientedBox tube = tube_region(cap, eps);
    Vec th(cap.n);
    for (int d = 0; d < cap.n; ++d) th[d] = 0.5 * (tube.box.hi[d] - tube.box.lo[d]);
    if (tube.frame.rotation.empty()) {
      half = th;
    } else {
      for (int i = 0; i < cap.n; ++i)
        for (int j2 = 0; j2 < cap.n; ++j2)
          half[i] += std::abs(tube.frame.rotation[static_cast<std::size_t>(i) * cap.n + j2]) * th[j2];
    }
  }

  GridSpec grid;
  grid.origin.resize(cap.n);
  grid.step.resize(cap.n);
  grid.count.resize(cap.n);
  for (int d = 0; d < cap.n; ++d) {
    const double side = 2.0 * half[d];
    const int cnt = std::max(2, static_cast<int>(std::ceil(side / grid_step - 1e-9)) + 1);
    grid.origin[d] = -half[d];
    grid.count[d] = cnt;
    grid.step[d] = side / (cnt - 1);
  }

  // Resolved config: every defaulted value replaced by what was actually used.
  json rc = c;
  rc["omega0"] = cap.direction();
  rc["grid_step"] = grid_step;
  rc["grid_half_widths"] = half;

  const SampledField field = sample_field(cap, grid, nullptr, opts);
  const double tube_constant = verify_tube_bound(cap, eps, samples, opts);
  const std::complex<double> origin = evaluate(cap, {Vec(cap.n, 0.0)}, nullptr, opts)[0];
  const std::complex<double> origin_cf = origin_value_closed_form(cap);
  const double origin_rel = std::abs(origin - origin_cf) / std::abs(origin_cf);

  const bool pass_origin = origin_rel <= 1e-6;
  const bool pass_tube = tube_constant > 0.0;

  json report;
  report["amplitude"] = cap.amplitude();
  report["cap_angle"] = cap.cap_angle();
  report["defect_bound"] = defect_bound(cap);
  report["l2_norm_sq"] = cap.l2_norm_sq();
  report["eps"] = eps;
  report["tube_constant"] = tube_constant;
  report["origin_value"] = {{"re", origin.real()}, {"im", origin.imag()}};
  report["origin_closed_form"] = {{"re", origin_cf.real()}, {"im", origin_cf.imag()}};
  report["origin_rel_error"] = origin_rel;
  report["checks"] = {{"origin_matches_closed_form", pass_origin},
                      {"tube_constant_positive", pass_tube}};
  report["pass"] = pass_origin && pass_tube;

  json extra;
  extra["config"] = rc;
  if (format == "binary")
    write_field_binary(out + ".field.bin", field, extra);
  else
    write_field_json(out + ".field.json", field, extra);
  write_text(out + ".report.json", json_document(rc, "report", report));
  return (pass_origin && pass_tube) ? 0 : 4;
}

// ------------------------------------------------------------------ scaling

int cmd_scaling(const json& c, const std::string& out, int threads) {
  require_out(out, "scaling");

  SweepConfig sc;
  sc.n = get_int(c, "n");
  sc.k = get_int(c, "k");
  sc.p = parse_p(c.at("p"));
  sc.beta = get_double(c, "beta");
  if (!c.at("alpha").is_null()) sc.alpha = get_double(c, "alpha");
  sc.epsilon_cap = get_double(c, "epsilon_cap");
  sc.extent = get_double(c, "extent");
  sc.step_factor = get_double(c, "step_factor");
  sc.timings = get_bool(c, "timings");
  sc.options.node_factor = get_double(c, "node_factor");
  sc.options.node_budget = get_ll(c, "node_budget");
  sc.options.threads = threads;

  if (!c.at("h_list").is_null()) {
    if (!c.at("h_list").is_array()) throw DomainError("scaling: h_list must be an array");
    sc.h_list = c.at("h_list").get<std::vector<double>>();
  } else {
    const double h_start = get_double(c, "h_start");
    const int h_count = get_int(c, "h_count");
    if (h_count < 1) throw DomainError("scaling: h_count must be >= 1");
    for (int i = 0; i < h_count; ++i) sc.h_list.push_back(h_start * std::pow(2.0, -i));
  }

  const std::vector<ExperimentRecord> records = sweep(sc);
  const FitResult fit = fit_exponent(records);
  const ExponentResult ref = sigma(sc.n, sc.k, sc.p, sc.beta);
  const double saturation = -fit.slope;
  const double deviation = saturation - ref.exponent;
  const bool pass = std::abs(deviation) <= 0.15;

  json rc = c;
  rc["alpha"] = records.front().alpha;
  rc["h_list"] = sc.h_list;
  rc.erase("h_start");
  rc.erase("h_count");

  json summary;
  summary["alpha"] = records.front().alpha;
  summary["fit"] = fit_to_json(fit);
  summary["saturation_exponent"] = saturation;
  summary["sigma"] = ref.exponent;
  summary["sigma_exact"] = ref.exact.str();
  summary["deviation"] = deviation;
  summary["tolerance"] = 0.15;
  summary["pass"] = pass;
  json recs = json::array();
  for (const ExperimentRecord& r : records) recs.push_back(record_to_json(r));
  summary["records"] = recs;

  write_text(out + ".csv", csv_prelude(rc) + records_to_csv(records));
  write_text(out + ".summary.json", json_document(rc, "summary", summary));
  return pass ? 0 : 4;
}

// ------------------------------------------------------------------- sphere

double wallis_odd(int j) {
  // int_0^pi sin^(2j+1) = 2 prod_{i=1..j} 2i/(2i+1)
  double w = 2.0;
  for (int i = 1; i <= j; ++i) w *= (2.0 * i) / (2.0 * i + 1.0);
  return w;
}

double wallis_even(int m) {
  // int_0^pi sin^(2m) = pi prod_{i=1..m} (2i-1)/(2i)
  double w = 3.14159265358979323846;
  for (int i = 1; i <= m; ++i) w *= (2.0 * i - 1.0) / (2.0 * i);
  return w;
}

double u1_norm_closed_form(int n, int j, double h) {
  const double two_pi = 2.0 * 3.14159265358979323846;
  if (n == 2) return std::sqrt(std::pow(h, -0.5) * two_pi * wallis_odd(j));
  return std::sqrt(std::pow(h, -1.0) * two_pi * wallis_odd(j) * wallis_even(j + 1));
}

int cmd_sphere(const json& c, const std::string& out, int threads) {
  require_out(out, "sphere");

  const int n = get_int(c, "n");
  const int j = get_int(c, "j");
  const double alpha = get_double(c, "alpha");
  const double epsilon = get_double(c, "epsilon");
  const double conc_eps = get_double(c, "concentration_eps");
  const int conc_samples = get_int(c, "concentration_samples");
  if (n < 2 || n > 3) throw DomainError("sphere: n must be 2 or 3 (quadrature support)");
  if (!(alpha >= 0.0 && alpha <= 0.5))
    throw DomainError("sphere: alpha must lie in [0, 1/2]");
  std::vector<int> offsets;
  if (!c.at("pair_offsets").is_null()) {
    if (!c.at("pair_offsets").is_array())
      throw DomainError("sphere: pair_offsets must be an array of integers");
    offsets = c.at("pair_offsets").get<std::vector<int>>();
  }

  std::vector<HarmonicSum> stages;
  stages.push_back(build_u1(n, j, epsilon));
  for (int kk = 1; kk < n; ++kk) stages.push_back(extend(stages.back(), alpha));
  const HarmonicSum& un = stages.back();
  const double h = un.h;

  double harmonicity = 0.0;
  for (const HarmonicSum& u : stages) {
    for (const HarmonicTerm& t : u.terms) {
      double s2 = 0.0;
      for (std::size_t m = 1; m < t.a.size(); ++m) s2 += t.a[m] * t.a[m];
      harmonicity = std::max(harmonicity, std::abs(s2 - 1.0));
    }
  }

  const SphereGrid grid = auto_grid(n, h);
  const double u1_l2 = l2_norm(stages.front(), grid, threads);
  const double u1_cf = u1_norm_closed_form(n, j, h);
  const double wallis_rel = std::abs(u1_l2 - u1_cf) / u1_cf;
  const double un_l2 = l2_norm(un, grid, threads);
  const double concentration = concentration_check(un, conc_eps, conc_samples);

  json pairs = json::array();
  for (int d : offsets) {
    const double v = pair_correlation(stages.front(), 0, d, 2, grid, threads);
    pairs.push_back({{"offset", d}, {"value", v}});
  }

  const bool pass_harm = harmonicity <= 1e-12;
  const bool pass_wallis = wallis_rel <= 1e-4;

  json report;
  report["h"] = h;
  report["stage_count"] = stage_count(epsilon, h, alpha);
  report["term_count"] = un.terms.size();
  report["epsilon_effective"] = un.epsilon_effective;
  report["harmonicity_max_residual"] = harmonicity;
  report["u1_l2"] = u1_l2;
  report["u1_l2_closed_form"] = u1_cf;
  report["u1_wallis_rel_error"] = wallis_rel;
  report["un_l2"] = un_l2;
  report["concentration"] = concentration;
  report["pairs"] = pairs;
  report["checks"] = {{"harmonicity", pass_harm}, {"wallis", pass_wallis}};
  report["pass"] = pass_harm && pass_wallis;

  write_text(out + ".harmonics.json", json_document(c, "harmonic_sum", harmonic_to_json(un)));
  write_text(out + ".report.json", json_document(c, "report", report));
  return (pass_harm && pass_wallis) ? 0 : 4;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"flat and spherical quasimode concentration experiments"};
  app.require_subcommand(1);

  struct Flags {
    std::string config_path, out, p, format;
    int n = 0, k = 0, j = 0, threads = 1, samples = 0, h_count = 0, conc_samples = 0;
    double beta = 0, alpha = 0, h = 0, eps = 0, epsilon_cap = 0, epsilon = 0;
    double grid_step = 0, h_start = 0, extent = 0, step_factor = 0, node_factor = 0;
    bool timings = false;
    std::vector<int> pair_offsets;
  } f;

  // "--h" is a real parameter, so the help shortcut stays long-form only.
  app.set_help_flag("--help", "print help");
  auto add_common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");
    sub->add_option("--config", f.config_path, "JSON config file");
    sub->add_option("--out", f.out, "output path stem");
    sub->add_option("--threads", f.threads, "worker thread count");
  };

  CLI::App* exps = app.add_subcommand("exponents", "closed-form growth exponents");
  add_common(exps);
  exps->add_option("--n", f.n);
  exps->add_option("--k", f.k);
  exps->add_option("--p", f.p);
  exps->add_option("--beta", f.beta);
  exps->add_option("--format", f.format);

  CLI::App* pred = app.add_subcommand("predict", "extremal concentration scale");
  add_common(pred);
  pred->add_option("--n", f.n);
  pred->add_option("--k", f.k);
  pred->add_option("--p", f.p);
  pred->add_option("--beta", f.beta);

  CLI::App* quas = app.add_subcommand("quasimode", "sample a flat quasimode and verify it");
  add_common(quas);
  quas->add_option("--n", f.n);
  quas->add_option("--h", f.h);
  quas->add_option("--alpha", f.alpha);
  quas->add_option("--eps", f.eps);
  quas->add_option("--epsilon-cap", f.epsilon_cap);
  quas->add_option("--grid-step", f.grid_step);
  quas->add_option("--samples", f.samples);
  quas->add_option("--format", f.format);
  quas->add_option("--node-factor", f.node_factor);

  CLI::App* scal = app.add_subcommand("scaling", "norm sweep over h with exponent fit");
  add_common(scal);
  scal->add_option("--n", f.n);
  scal->add_option("--k", f.k);
  scal->add_option("--p", f.p);
  scal->add_option("--beta", f.beta);
  scal->add_option("--alpha", f.alpha);
  scal->add_option("--h-start", f.h_start);
  scal->add_option("--h-count", f.h_count);
  scal->add_option("--epsilon-cap", f.epsilon_cap);
  scal->add_option("--extent", f.extent);
  scal->add_option("--step-factor", f.step_factor);
  scal->add_option("--node-factor", f.node_factor);
  scal->add_flag("--timings", f.timings);

  CLI::App* sph = app.add_subcommand("sphere", "spherical harmonic concentration report");
  add_common(sph);
  sph->add_option("--n", f.n);
  sph->add_option("--j", f.j);
  sph->add_option("--alpha", f.alpha);
  sph->add_option("--epsilon", f.epsilon);
  sph->add_option("--samples", f.conc_samples);
  sph->add_option("--pair-offsets", f.pair_offsets)->delimiter(',');

  std::vector<const char*> argv;
  argv.push_back("qmlab");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (f.threads < 1) throw DomainError("--threads must be >= 1");

    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    const auto has = [&](const char* opt) {
      const CLI::Option* o = sub->get_option_no_throw(opt);
      return o != nullptr && o->count() > 0;
    };

    json c;
    if (name == "exponents") {
      c = {{"beta", 0.75}, {"format", "csv"}, {"k", 2},
           {"n", 3},       {"p", "2"},        {"p_list", nullptr}};
    } else if (name == "predict") {
      c = {{"alpha_grid_step", "1/1024"}, {"beta", 0.75}, {"k", 1}, {"n", 2}, {"p", "2"}};
    } else if (name == "quasimode") {
      c = {{"alpha", 0.25},       {"eps", 0.1},
           {"epsilon_cap", 1.0},  {"format", "binary"},
           {"grid_half_widths", nullptr}, {"grid_step", nullptr},
           {"h", 0.015625},       {"n", 2},
           {"node_budget", 4194304}, {"node_factor", 1.0},
           {"omega0", nullptr},   {"samples", 7}};
    } else if (name == "scaling") {
      c = {{"alpha", nullptr},    {"beta", 0.5},
           {"epsilon_cap", 1.0},  {"extent", 0.5},
           {"h_count", 6},        {"h_list", nullptr},
           {"h_start", 0.0625},   {"k", 1},
           {"n", 2},              {"node_budget", 4194304},
           {"node_factor", 1.0},  {"p", "2"},
           {"step_factor", 0.25}, {"timings", false}};
    } else {
      c = {{"alpha", 0.4},
           {"concentration_eps", 0.5},
           {"concentration_samples", 11},
           {"epsilon", 0.1},
           {"j", 200},
           {"n", 2},
           {"pair_offsets", json::array({1})}};
    }

    if (!f.config_path.empty()) merge_config(c, load_config_file(f.config_path), name);

    if (has("--n")) c["n"] = f.n;
    if (has("--k")) c["k"] = f.k;
    if (has("--p")) c["p"] = f.p;
    if (has("--beta")) c["beta"] = f.beta;
    if (has("--format")) c["format"] = f.format;
    if (name == "sphere") {
      if (has("--alpha")) c["alpha"] = f.alpha;
      if (has("--j")) c["j"] = f.j;
      if (has("--epsilon")) c["epsilon"] = f.epsilon;
      if (has("--samples")) c["concentration_samples"] = f.conc_samples;
      if (has("--pair-offsets")) c["pair_offsets"] = f.pair_offsets;
    }
    if (name == "quasimode") {
      if (has("--alpha")) c["alpha"] = f.alpha;
      if (has("--h")) c["h"] = f.h;
      if (has("--eps")) c["eps"] = f.eps;
      if (has("--epsilon-cap")) c["epsilon_cap"] = f.epsilon_cap;
      if (has("--grid-step")) c["grid_step"] = f.grid_step;
      if (has("--samples")) c["samples"] = f.samples;
      if (has("--node-factor")) c["node_factor"] = f.node_factor;
    }
    if (name == "scaling") {
      if (has("--alpha")) c["alpha"] = f.alpha;
      if (has("--h-start")) c["h_start"] = f.h_start;
      if (has("--h-count")) c["h_count"] = f.h_count;
      if (has("--epsilon-cap")) c["epsilon_cap"] = f.epsilon_cap;
      if (has("--extent")) c["extent"] = f.extent;
      if (has("--step-factor")) c["step_factor"] = f.step_factor;
      if (has("--node-factor")) c["node_factor"] = f.node_factor;
      if (has("--timings")) c["timings"] = f.timings;
    }

    if (name == "exponents") return cmd_exponents(c, f.out);
    if (name == "predict") return cmd_predict(c, f.out);
    if (name == "quasimode") return cmd_quasimode(c, f.out, f.threads);
    if (name == "scaling") return cmd_scaling(c, f.out, f.threads);
    return cmd_sphere(c, f.out, f.threads);
  } catch (const DomainError& e) {
    std::cerr << "error (domain): " << e.what() << '\n';
    return 2;
  } catch (const ResolutionError& e) {
    std::cerr << "error (resolution): " << e.what() << '\n';
    return 3;
  } catch (const BudgetError& e) {
    std::cerr << "error (budget): " << e.what() << '\n';
    return 3;
  } catch (const VerificationError& e) {
    std::cerr << "error (verification): " << e.what() << '\n';
    return 4;
  } catch (const json::exception& e) {
    std::cerr << "error (config): " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error (domain): " << e.what() << '\n';
    return 2;
  } catch (const std::overflow_error& e) {
    std::cerr << "error (domain): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qmlab::cli
