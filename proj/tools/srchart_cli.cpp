// srchart: command-line front end for the signed-rank chart toolkit.
//
// Exit codes: 0 success, 1 domain error, 2 usage error (bad flags, unreadable
// or mismatched input files).
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "srchart/chart.hpp"
#include "srchart/error.hpp"
#include "srchart/io.hpp"
#include "srchart/log.hpp"
#include "srchart/mc_sim.hpp"
#include "srchart/moments.hpp"
#include "srchart/nnreg.hpp"
#include "srchart/reference.hpp"
#include "srchart/snd_fit.hpp"
#include "srchart/srdist.hpp"
#include "srchart/tie_model.hpp"
#include "srchart/verification.hpp"

namespace {

using nlohmann::json;
using namespace srchart;

// Usage problems detected after parsing (missing combinations of flags).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  std::vector<std::string> notes;  // "# ..." lines in CSV, "notes" in JSON
  json extra = json::object();     // extra top-level JSON members

  void add(std::vector<json> row) { rows.push_back(std::move(row)); }
};

std::string cell_text(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

std::string render(const Table& table, const OutputMeta& meta, Format format) {
  if (format == Format::csv) {
    std::string out = csv_header_lines(meta);
    for (const auto& note : table.notes) out += "# " + note + "\n";
    out += csv_join(table.columns) + "\n";
    for (const auto& row : table.rows) {
      std::vector<std::string> fields;
      fields.reserve(row.size());
      for (const auto& v : row) fields.push_back(cell_text(v));
      out += csv_join(fields) + "\n";
    }
    return out;
  }
  json doc = table.extra;
  doc["meta"] = json_meta(meta);
  json rows = json::array();
  for (const auto& row : table.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  doc["columns"] = table.columns;
  doc["rows"] = std::move(rows);
  if (!table.notes.empty()) doc["notes"] = table.notes;
  return doc.dump(2) + "\n";
}

json display4(double x) { return format_fixed(x, 4); }

// ---------------------------------------------------------------------------
// Option storage
// ---------------------------------------------------------------------------
struct Options {
  std::string format = "csv";
  std::string out;
  int threads = 1;

  // scenario
  std::optional<int> case_id;
  std::optional<double> tau;
  std::optional<double> delta;
  std::optional<int> n;

  bool grid = false;

  std::string moment_mode = "tied";
  double p = 0.5;

  std::string dist_kind = "exact";
  std::optional<double> a, b, c;
  std::string model_path;

  std::string limit_mode = "uo";
  double alpha = reference::kDefaultAlpha;

  std::vector<int> arl_sizes = {20, 50};
  std::string arl_source = "exact";

  std::string dataset_path;
  std::string model_out;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> split_seed;
  int epochs = 10000;
  double learning_rate = 0.02;
  double momentum = 0.9;
  int validation_frequency = 10;
  bool minibatch = false;
  int batch_size = 32;
  std::vector<int> hidden = {64, 48, 32, 24, 16, 8};

  std::vector<double> features;

  std::string sim_kind = "statistic";
  std::uint64_t reps = 1'000'000;
  std::optional<std::int64_t> limit_c;
  std::uint64_t cap = kDefaultRunLengthCap;

  bool full = false;
};

std::string canonical_config(const CLI::App& sub, const Options& o) {
  std::string out = "command=" + sub.get_name() + "\nformat=" + o.format + "\n";
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name();
    if (name == "--help" || name == "--out" || name == "--threads" || name == "--model-out") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    out += name + "=" + value + "\n";
  }
  return out;
}

void emit(const Options& o, const std::string& content) {
  if (o.out.empty() || o.out == "-") {
    std::cout << content;
    std::cout.flush();
  } else {
    write_file(o.out, content);
  }
}

Format parse_format(const std::string& text) { return text == "json" ? Format::json : Format::csv; }

Scenario require_scenario(const Options& o, int default_n = 20) {
  if (!o.case_id || !o.tau || !o.delta) {
    throw UsageError("--case, --tau and --delta are required");
  }
  return Scenario(*o.case_id, *o.tau, *o.delta, o.n.value_or(default_n));
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------
Table cmd_probs(const Options& o) {
  Table t;
  t.columns = {"tau", "case_id", "delta", "p_minus", "p_zero", "p_plus", "pi_minus", "pi_plus",
               "p_minus_4dp", "p_zero_4dp", "p_plus_4dp"};
  if (o.grid) {
    t.columns.insert(t.columns.end(), {"published_p_minus", "published_p_plus", "matches_paper",
                                       "flagged_typo", "duplicates_neighbour"});
    json discrepancies = json::array();
    for (const auto& r : compare_with_published()) {
      const auto& p = r.cell.probs;
      t.add({r.cell.tau, r.cell.case_id, r.cell.delta, p.p_minus, p.p_zero, p.p_plus, p.pi_minus,
             p.pi_plus, display4(p.p_minus), display4(p.p_zero), display4(p.p_plus),
             display4(r.published_minus), display4(r.published_plus), r.matches(), r.flagged_typo,
             r.duplicates_neighbour});
      if (r.flagged_typo) {
        std::ostringstream note;
        note << "discrepancy: tau=" << format_double(r.cell.tau) << " case=" << r.cell.case_id
             << " delta=" << format_double(r.cell.delta) << " published p-1/p+1="
             << format_fixed(r.published_minus, 4) << "/" << format_fixed(r.published_plus, 4)
             << " recomputed=" << format_fixed(p.p_minus, 4) << "/" << format_fixed(p.p_plus, 4)
             << (r.duplicates_neighbour ? " (published value repeats a neighbouring column)" : "");
        t.notes.push_back(note.str());
        discrepancies.push_back({{"tau", r.cell.tau},
                                 {"case_id", r.cell.case_id},
                                 {"delta", r.cell.delta},
                                 {"published_p_minus", r.published_minus},
                                 {"published_p_plus", r.published_plus},
                                 {"p_minus", p.p_minus},
                                 {"p_plus", p.p_plus},
                                 {"duplicates_neighbour", r.duplicates_neighbour}});
      }
    }
    t.extra["discrepancies"] = discrepancies;
    return t;
  }
  const Scenario s = require_scenario(o);
  const auto p = sign_probabilities(s);
  t.add({s.tau, s.case_id, s.delta, p.p_minus, p.p_zero, p.p_plus, p.pi_minus, p.pi_plus,
         display4(p.p_minus), display4(p.p_zero), display4(p.p_plus)});
  return t;
}

void add_optional(Table& t, const char* name, const std::optional<double>& v) {
  t.add({name, v ? json(*v) : json(), v ? display4(*v) : json("")});
}

Table cmd_moments(const Options& o) {
  Table t;
  t.columns = {"quantity", "value", "display_4dp"};
  if (o.moment_mode == "untied") {
    if (!o.n) throw UsageError("--n is required");
    const auto m = untied_moments(*o.n, o.p);
    t.add({"n", m.n, display4(m.n)});
    t.add({"p", m.p, display4(m.p)});
    t.add({"m1", m.m1, display4(m.m1)});
    t.add({"mu2", m.mu2, display4(m.mu2)});
    return t;
  }
  const Scenario s = require_scenario(o);
  const auto p = sign_probabilities(s);
  const auto m = tied_moments(s.n, p.p_zero, p.pi_plus);
  t.add({"n", s.n, display4(s.n)});
  t.add({"p_zero", p.p_zero, display4(p.p_zero)});
  t.add({"pi_plus", p.pi_plus, display4(p.pi_plus)});
  for (auto [name, value] : std::initializer_list<std::pair<const char*, double>>{
           {"m1p", m.m1p}, {"m2p", m.m2p}, {"m3p", m.m3p}, {"m4p", m.m4p},
           {"mu2p", m.mu2p}, {"mu3p", m.mu3p}, {"mu4p", m.mu4p}}) {
    t.add({name, value, display4(value)});
  }
  add_optional(t, "gamma1", m.gamma1);
  add_optional(t, "gamma2", m.gamma2);
  return t;
}

Table pmf_table(const RankDistribution& d, const std::optional<RankDistribution>& reference_pmf = {}) {
  Table t;
  t.columns = {"s", "mass", "cdf"};
  if (reference_pmf) t.columns.push_back("exact_mass");
  double cumulative = 0.0;
  for (std::size_t i = 0; i < d.support.size(); ++i) {
    cumulative += d.mass[i];
    std::vector<json> row = {d.support[i], d.mass[i], std::min(cumulative, 1.0)};
    if (reference_pmf) row.push_back(reference_pmf->mass_at(d.support[i]));
    t.add(std::move(row));
  }
  t.notes.push_back("kind: " + std::string(to_string(d.kind)) + (d.degenerate ? " (degenerate)" : ""));
  t.extra["kind"] = std::string(to_string(d.kind));
  if (reference_pmf) {
    const double tv = total_variation(d, *reference_pmf);
    t.notes.push_back("total_variation_vs_exact: " + format_double(tv));
    t.extra["total_variation_vs_exact"] = tv;
  }
  return t;
}

TrainedNetwork load_model(const std::string& path) { return model_from_json(read_file(path)); }

Table cmd_dist(const Options& o) {
  const Scenario s = require_scenario(o);
  const auto p = sign_probabilities(s);
  if (o.dist_kind == "exact") {
    return pmf_table(s.tau == 0.0 ? exact_pmf_untied(s.n, p.pi_plus) : exact_pmf_tied(s.n, p));
  }
  if (o.dist_kind == "normal") {
    if (s.tau == 0.0) {
      const auto m = untied_moments(s.n, p.pi_plus);
      return pmf_table(normal_approx_pmf(s.n, m.m1, m.mu2, 2), exact_pmf_untied(s.n, p.pi_plus));
    }
    const auto m = tied_moments(s.n, p.p_zero, p.pi_plus);
    return pmf_table(normal_approx_pmf(s.n, m.m1p, m.mu2p, 1), exact_pmf_tied(s.n, p));
  }
  // snd: explicit parameters, a trained model, or a fresh fit
  const auto m = tied_moments(s.n, p.p_zero, p.pi_plus);
  const auto exact = exact_pmf_tied(s.n, p);
  SNDParams params;
  std::string origin;
  if (o.a || o.b || o.c) {
    if (!(o.a && o.b && o.c)) throw UsageError("--a, --b and --c must be given together");
    params = {*o.a, *o.b, *o.c};
    origin = "given";
  } else if (!o.model_path.empty()) {
    params = predict(load_model(o.model_path), feature_vector(p.pi_plus, m, s.n)).params;
    origin = "predicted";
  } else {
    params = fit_snd_params(exact, m);
    origin = "fitted";
  }
  auto t = pmf_table(snd_pmf(params, m, exact.support), exact);
  t.notes.push_back("snd parameters (" + origin + "): a=" + format_double(params.a) +
                    " b=" + format_double(params.b) + " c=" + format_double(params.c));
  t.extra["snd_params"] = {{"a", params.a}, {"b", params.b}, {"c", params.c}, {"origin", origin}};
  return t;
}

Table cmd_limits(const Options& o) {
  if (!o.n) throw UsageError("--n is required");
  const int n = *o.n;
  Table t;
  if (o.limit_mode == "uo") {
    const auto m = untied_moments(n, 0.5);
    const auto limits = find_control_limit(n, m.m1, m.mu2, o.alpha, ChartMode::untied);
    const auto exact = error_rates_untied_exact(limits.c_value, n, 0.5, 0.5);
    t.columns = {"mode", "n", "C", "alpha", "arl0", "arl0_4dp", "alpha_exact", "arl0_exact"};
    const auto arl = arl_from_errors(limits.alpha_achieved, 0.0);
    t.add({"uo", n, limits.c_value, limits.alpha_achieved, arl.arl0, display4(arl.arl0), exact.alpha,
           exact.alpha > 0 ? json(1.0 / exact.alpha) : json()});
    return t;
  }
  if (o.limit_mode != "to") throw UsageError("--mode must be uo or to");
  std::vector<double> taus = {0.05, 0.1, 0.2};
  if (o.tau) taus = {*o.tau};
  const auto rows = tied_limits(n, taus, o.alpha);
  std::optional<std::int64_t> published;
  if (n == 20) published = reference::kTiedLimitN20;
  if (n == 50) published = reference::kTiedLimitN50;
  std::size_t closest = 0;
  if (published) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (std::llabs(rows[i].limits.c_value - *published) <
          std::llabs(rows[closest].limits.c_value - *published)) {
        closest = i;
      }
    }
  }
  t.columns = {"mode", "n", "case_id", "tau", "p_zero", "mu2p", "C", "alpha", "arl0",
               "closest_to_published"};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (o.case_id && r.case_id != *o.case_id) continue;
    t.add({"to", n, r.case_id, r.tau, r.p_zero, r.variance, r.limits.c_value,
           r.limits.alpha_achieved, arl_from_errors(r.limits.alpha_achieved, 0.0).arl0,
           published && i == closest});
  }
  if (published) {
    const auto& r = rows[closest];
    t.notes.push_back("published tied limit C=" + std::to_string(*published) + " for n=" +
                      std::to_string(n) + "; closest here: case " + std::to_string(r.case_id) +
                      " tau=" + format_double(r.tau) + " with C=" + std::to_string(r.limits.c_value) +
                      " (scenario behind the published value is unknown; not asserted)");
  }
  return t;
}

SndProvider predicted_provider(const std::string& path) {
  auto model = std::make_shared<TrainedNetwork>(load_model(path));
  return [model](const Scenario& s, const TiedMoments& m) {
    const auto p = sign_probabilities(s);
    return predict(*model, feature_vector(p.pi_plus, m, s.n)).params;
  };
}

Table cmd_arl(const Options& o) {
  const ArlSource source = parse_arl_source(o.arl_source);
  SndProvider provider;
  if (source == ArlSource::snd_predicted) {
    if (o.model_path.empty()) throw UsageError("--model is required for --source snd-predicted");
    provider = predicted_provider(o.model_path);
  }
  std::vector<int> cases = {1, 2, 3, 4, 5, 6};
  if (o.case_id) cases = {*o.case_id};
  std::vector<double> taus = {0.0, 0.05, 0.1, 0.2};
  if (o.tau) taus = {*o.tau};
  const std::vector<double> deltas(reference::kDeltas.begin(), reference::kDeltas.end());
  std::vector<int> sizes = o.arl_sizes;
  if (o.n) sizes = {*o.n};

  Table t;
  t.columns = {"n", "case_id", "tau", "mode", "C", "alpha"};
  for (double d : deltas) t.columns.push_back("arl_delta_" + format_double(d));
  t.columns.push_back("snd_fallbacks");
  for (int n : sizes) {
    const auto table = arl_table(n, cases, taus, deltas, source, provider);
    for (const auto& row : table.rows) {
      std::vector<json> cells = {n, row.case_id, row.tau, std::string(to_string(row.mode)),
                                 row.c_value, row.alpha};
      int fallbacks = 0;
      for (std::size_t k = 0; k < row.arl.size(); ++k) {
        cells.push_back(row.arl[k]);
        fallbacks += row.fallback[k] ? 1 : 0;
      }
      cells.push_back(fallbacks);
      t.add(std::move(cells));
    }
  }
  t.notes.push_back("source: " + std::string(to_string(source)) +
                    "; ARL0 (delta=0 column) = 1/alpha from the normal approximation");
  return t;
}

Table cmd_fit(const Options& o) {
  const Scenario s = require_scenario(o);
  const auto p = sign_probabilities(s);
  const auto m = tied_moments(s.n, p.p_zero, p.pi_plus);
  const auto exact = exact_pmf_tied(s.n, p);
  const auto fit = fit_snd(exact, m);
  const auto fitted = snd_pmf(fit.params, m, exact.support);
  Table t;
  t.columns = {"case_id", "tau", "delta", "n", "a", "b", "c", "objective", "total_variation",
               "binned_total_variation", "converged", "evaluations", "within_tolerance"};
  t.add({s.case_id, s.tau, s.delta, s.n, fit.params.a, fit.params.b, fit.params.c, fit.objective,
         fit.total_variation, binned_total_variation(fitted, exact, -max_rank_sum(s.n), 2),
         fit.converged, fit.evaluations, fit.total_variation <= kFitTolerance});
  return t;
}

std::vector<LabeledSample> load_dataset(const std::string& path) {
  if (path.empty()) throw UsageError("--dataset is required");
  return dataset_from_text(read_file(path));
}

Table metrics_table(const TrainedNetwork& model) {
  const auto& m = model.metrics;
  Table t;
  t.columns = {"metric", "a", "b", "c"};
  t.add({"mae_train", m.mae_train[0], m.mae_train[1], m.mae_train[2]});
  t.add({"mae_validation", m.mae_validation[0], m.mae_validation[1], m.mae_validation[2]});
  t.add({"mae_test", m.mae_test[0], m.mae_test[1], m.mae_test[2]});
  t.add({"r2_train", m.r2_train[0], m.r2_train[1], m.r2_train[2]});
  t.add({"r2_test", m.r2_test[0], m.r2_test[1], m.r2_test[2]});
  t.notes.push_back("mse train/validation/test (standardized targets): " + format_double(m.mse[0]) +
                    " / " + format_double(m.mse[1]) + " / " + format_double(m.mse[2]));
  t.notes.push_back("rmse validation: " + format_double(m.rmse_validation));
  t.extra["mse"] = {{"train", m.mse[0]}, {"validation", m.mse[1]}, {"test", m.mse[2]}};
  t.extra["rmse_validation"] = m.rmse_validation;
  return t;
}

Table cmd_train(const Options& o) {
  const auto samples = load_dataset(o.dataset_path);
  NetworkConfig config;
  config.hidden_widths = o.hidden;
  TrainConfig cfg;
  cfg.learning_rate = o.learning_rate;
  cfg.momentum = o.momentum;
  cfg.epochs = o.epochs;
  cfg.validation_frequency = o.validation_frequency;
  cfg.seed = o.seed;
  cfg.minibatch = o.minibatch;
  cfg.batch_size = o.batch_size;
  SplitSpec split;
  split.seed = o.split_seed.value_or(o.seed);
  const auto model = train(config, cfg, samples, split);
  if (!o.model_out.empty()) write_file(o.model_out, model_to_json(model));
  return metrics_table(model);
}

Table cmd_predict(const Options& o) {
  if (o.model_path.empty()) throw UsageError("--model is required");
  const auto model = load_model(o.model_path);
  Table t;
  t.columns = {"a", "b", "c", "height_clamped"};
  if (!o.features.empty()) {
    const auto pred = predict(model, o.features);
    t.add({pred.params.a, pred.params.b, pred.params.c, pred.height_clamped});
    return t;
  }
  const Scenario s = require_scenario(o);
  const auto p = sign_probabilities(s);
  const auto m = tied_moments(s.n, p.p_zero, p.pi_plus);
  const auto pred = predict(model, feature_vector(p.pi_plus, m, s.n));
  const auto exact = exact_pmf_tied(s.n, p);
  const auto snd = snd_pmf(pred.params, m, exact.support);
  t.columns.insert(t.columns.begin(), {"case_id", "tau", "delta", "n"});
  t.columns.push_back("total_variation_vs_exact");
  t.add({s.case_id, s.tau, s.delta, s.n, pred.params.a, pred.params.b, pred.params.c,
         pred.height_clamped, total_variation(snd, exact)});
  return t;
}

Table cmd_simulate(const Options& o) {
  const Scenario s = require_scenario(o);
  if (o.sim_kind == "statistic") {
    const auto empirical = simulate_statistic(s, o.reps, o.seed, o.threads);
    const auto p = sign_probabilities(s);
    return pmf_table(empirical, s.tau == 0.0 ? exact_pmf_untied(s.n, p.pi_plus) : exact_pmf_tied(s.n, p));
  }
  if (o.sim_kind != "run-length") throw UsageError("--kind must be statistic or run-length");
  std::int64_t c;
  if (o.limit_c) {
    c = *o.limit_c;
  } else if (s.tau == 0.0) {
    const auto m = untied_moments(s.n, 0.5);
    c = find_control_limit(s.n, m.m1, m.mu2).c_value;
  } else {
    const auto p0 = sign_probabilities(Scenario(s.case_id, s.tau, 0.0, s.n));
    const auto m = tied_moments(s.n, p0.p_zero, p0.pi_plus);
    c = find_control_limit(s.n, m.m1p, m.mu2p, reference::kDefaultAlpha, ChartMode::tied).c_value;
  }
  const auto run = simulate_run_length(s, c, o.reps, o.seed, o.cap, o.threads);
  Table t;
  t.columns = {"run_length", "count"};
  for (const auto& [length, count] : run.histogram) t.add({length, count});
  t.notes.push_back("C=" + std::to_string(c) + " reps=" + std::to_string(run.reps) + " mean=" +
                    format_double(run.mean) + " sd=" + format_double(run.sd) + " capped=" +
                    std::to_string(run.capped) + (run.all_capped ? " (ARL beyond cap)" : ""));
  t.extra["summary"] = {{"C", c},           {"reps", run.reps},     {"mean", run.mean},
                        {"sd", run.sd},     {"capped", run.capped}, {"all_capped", run.all_capped},
                        {"cap", o.cap}};
  if (run.all_capped) warn("every run reached the cap; ARL is beyond " + std::to_string(o.cap));
  return t;
}

int cmd_verify(const Options& o, const OutputMeta& meta, Format format) {
  VerifyOptions options;
  options.full = o.full;
  options.threads = o.threads;
  if (!o.dataset_path.empty()) options.dataset = load_dataset(o.dataset_path);
  if (format == Format::csv) {
    options.on_result = [](const CheckResult& r) { std::cout << format_check(r) << std::endl; };
  }
  const auto results = run_checks(options);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  if (format == Format::json) {
    Table t;
    t.columns = {"criterion", "name", "passed", "seconds", "detail"};
    for (const auto& r : results) t.add({r.id, r.name, r.passed, r.seconds, r.detail});
    emit(o, render(t, meta, format));
  } else {
    std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size()
              << " checks passed" << (o.full ? "" : " (fast subset; --full adds 8-10)") << "\n";
  }
  return failed == 0 ? 0 : 1;
}

void add_scenario_options(CLI::App* sub, Options& o, bool with_n = true) {
  sub->add_option("--case", o.case_id, "Benchmark case id (1-6)")->check(CLI::Range(1, 6));
  sub->add_option("--tau", o.tau, "Standardized resolution tau = eta / sigma")->check(CLI::NonNegativeNumber);
  sub->add_option("--delta", o.delta, "Standardized shift delta");
  if (with_n) sub->add_option("--n", o.n, "Subgroup size")->check(CLI::Range(1, 200));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shewhart signed-rank charts with tied observations"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "TOML/INI file with option defaults (same key names)");
  Options o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", o.out, "Output file (default stdout)");
  app.add_option("--threads", o.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::Range(1, 256))->capture_default_str();

  auto* probs = app.add_subcommand("probs", "Sign probabilities (grid or one cell)");
  probs->add_flag("--grid", o.grid, "Full grid with published comparison");
  add_scenario_options(probs, o, false);

  auto* moments = app.add_subcommand("moments", "Moments of the untied or tied statistic");
  moments->add_option("--mode", o.moment_mode, "untied | tied")
      ->check(CLI::IsMember({"untied", "tied"}))->capture_default_str();
  moments->add_option("--p", o.p, "P(S = +1) for untied mode")->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  add_scenario_options(moments, o);

  auto* dist = app.add_subcommand("dist", "Dump a p.m.f. (exact, normal or SND)");
  dist->add_option("--kind", o.dist_kind, "exact | normal | snd")
      ->check(CLI::IsMember({"exact", "normal", "snd"}))->capture_default_str();
  dist->add_option("--a", o.a, "SND height");
  dist->add_option("--b", o.b, "SND location");
  dist->add_option("--c", o.c, "SND width");
  dist->add_option("--model", o.model_path, "Predict SND parameters with this model");
  add_scenario_options(dist, o);

  auto* limits = app.add_subcommand("limits", "Control limit search");
  limits->add_option("--mode", o.limit_mode, "uo | to")->check(CLI::IsMember({"uo", "to"}))
      ->capture_default_str();
  limits->add_option("--alpha", o.alpha, "Target false-alarm rate")->check(CLI::Range(1e-12, 0.5))
      ->capture_default_str();
  limits->add_option("--case", o.case_id, "Restrict tied rows to one case")->check(CLI::Range(1, 6));
  limits->add_option("--tau", o.tau, "Restrict tied rows to one tau")->check(CLI::PositiveNumber);
  limits->add_option("--n", o.n, "Subgroup size")->check(CLI::Range(1, 200))->required();

  auto* arl = app.add_subcommand("arl", "ARL tables (UO and TO rows, shifts -1..1)");
  arl->add_option("--source", o.arl_source, "exact | snd | snd-predicted")
      ->check(CLI::IsMember({"exact", "snd", "snd-predicted"}))->capture_default_str();
  arl->add_option("--model", o.model_path, "Model for --source snd-predicted");
  arl->add_option("--case", o.case_id, "Single case")->check(CLI::Range(1, 6));
  arl->add_option("--tau", o.tau, "Single tau")->check(CLI::NonNegativeNumber);
  arl->add_option("--n", o.n, "Single subgroup size (default 20 and 50)")->check(CLI::Range(1, 200));

  auto* fit = app.add_subcommand("fit-snd", "Fit SND parameters to the exact tied p.m.f.");
  add_scenario_options(fit, o);

  auto* dataset = app.add_subcommand("dataset", "Build the 288-sample training dataset");

  auto* trainer = app.add_subcommand("train", "Train the regression network");
  trainer->add_option("--dataset", o.dataset_path, "Dataset file (CSV or JSON)")->required();
  trainer->add_option("--model-out", o.model_out, "Where to write the model JSON");
  trainer->add_option("--seed", o.seed, "Initialization (and default split) seed")
      ->default_val(kReleasedTrainSeed);
  trainer->add_option("--split-seed", o.split_seed, "Split seed (default: --seed)");
  trainer->add_option("--epochs", o.epochs)->check(CLI::PositiveNumber)->capture_default_str();
  trainer->add_option("--learning-rate", o.learning_rate)->check(CLI::PositiveNumber)->capture_default_str();
  trainer->add_option("--momentum", o.momentum)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  trainer->add_option("--validation-frequency", o.validation_frequency)
      ->check(CLI::PositiveNumber)->capture_default_str();
  trainer->add_flag("--minibatch", o.minibatch, "Shuffled mini-batches instead of full batch");
  trainer->add_option("--batch-size", o.batch_size)->check(CLI::PositiveNumber)->capture_default_str();
  trainer->add_option("--hidden", o.hidden, "Six hidden widths")->delimiter(',')->expected(6)
      ->capture_default_str();

  auto* predictor = app.add_subcommand("predict", "Predict SND parameters with a trained model");
  predictor->add_option("--model", o.model_path, "Model JSON")->required();
  predictor->add_option("--features", o.features, "11 comma-separated features")->delimiter(',');
  add_scenario_options(predictor, o);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo statistic or run-length simulation");
  sim->add_option("--kind", o.sim_kind, "statistic | run-length")
      ->check(CLI::IsMember({"statistic", "run-length"}))->capture_default_str();
  sim->add_option("--reps", o.reps)->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--seed", o.seed)->default_val(kMonteCarloSeed);
  sim->add_option("--C", o.limit_c, "Control limit (default: from the limit search)")
      ->check(CLI::PositiveNumber);
  sim->add_option("--cap", o.cap, "Run-length cap")->check(CLI::PositiveNumber)->capture_default_str();
  add_scenario_options(sim, o);

  auto* verify = app.add_subcommand("verify", "Golden checks (fast subset unless --full)");
  verify->add_flag("--full", o.full, "Include dataset, training and Monte Carlo checks");
  verify->add_option("--dataset", o.dataset_path, "Reuse a dataset file for --full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const Format format = parse_format(o.format);
  OutputMeta meta;
  meta.command = sub->get_name();
  if (sub == trainer || sub == sim) meta.seed = o.seed;
  meta.config = canonical_config(*sub, o);

  try {
    Table table;
    if (sub == probs) table = cmd_probs(o);
    else if (sub == moments) table = cmd_moments(o);
    else if (sub == dist) table = cmd_dist(o);
    else if (sub == limits) table = cmd_limits(o);
    else if (sub == arl) table = cmd_arl(o);
    else if (sub == fit) table = cmd_fit(o);
    else if (sub == trainer) table = cmd_train(o);
    else if (sub == predictor) table = cmd_predict(o);
    else if (sub == sim) table = cmd_simulate(o);
    else if (sub == verify) return cmd_verify(o, meta, format);
    else if (sub == dataset) {
      const auto samples = build_training_dataset(o.threads);
      std::string body;
      if (format == Format::csv) {
        body = csv_header_lines(meta) + dataset_to_csv(samples);
      } else {
        auto doc = json::parse(dataset_to_json(samples));
        doc["meta"] = json_meta(meta);
        body = doc.dump(2) + "\n";
      }
      emit(o, body);
      int flagged = 0;
      for (const auto& s : samples) flagged += s.flagged ? 1 : 0;
      if (flagged) {
        warn(std::to_string(flagged) + " of " + std::to_string(samples.size()) +
             " samples exceed the fit tolerance and are flagged");
      }
      return 0;
    }
    emit(o, render(table, meta, format));
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nRun with --help for more information.\n";
    return 2;
  } catch (const SchemaError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const TrainingDiverged& e) {
    std::cerr << "error: " << e.what() << " (epoch " << e.epoch() << ")\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
