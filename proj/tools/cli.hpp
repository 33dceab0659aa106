/*
 * Copyright 2026 The ADTE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command implementations for the `adte` executable. Kept in a header so the
// test suite can drive every subcommand in-process.

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adte/adte.hpp"

namespace adte::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "lo:hi:n" or a comma-separated list.
inline std::vector<double> parse_grid(const std::string& spec, bool log_spaced) {
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> fields;
    std::stringstream ss(spec);
    for (std::string f; std::getline(ss, f, ':');) fields.push_back(f);
    if (fields.size() != 3) throw UsageError("grid spec '" + spec + "' must be lo:hi:n");
    try {
      const double lo = std::stod(fields[0]);
      const double hi = std::stod(fields[1]);
      const auto n = static_cast<std::size_t>(std::stoul(fields[2]));
      if (n == 0) throw UsageError("grid spec '" + spec + "' needs n >= 1");
      if (log_spaced) {
        if (!(lo > 0.0 && hi > 0.0)) throw UsageError("log grid '" + spec + "' needs positive bounds");
        return log_grid(lo, hi, n);
      }
      return linear_grid(lo, hi, n);
    } catch (const std::logic_error&) {
      throw UsageError("cannot parse grid spec '" + spec + "'");
    }
  }
  std::vector<double> out;
  for (const auto& cell : split_csv_line(spec)) {
    try {
      out.push_back(std::stod(cell));
    } catch (const std::logic_error&) {
      throw UsageError("cannot parse number '" + cell + "'");
    }
  }
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& spec) {
  std::vector<T> out;
  for (const auto& cell : split_csv_line(spec)) {
    try {
      if constexpr (std::is_floating_point_v<T>) {
        out.push_back(static_cast<T>(std::stod(cell)));
      } else {
        const long long v = std::stoll(cell);
        if (v < 1) throw UsageError("list entries must be positive: '" + cell + "'");
        out.push_back(static_cast<T>(v));
      }
    } catch (const std::logic_error&) {
      throw UsageError("cannot parse list entry '" + cell + "'");
    }
  }
  return out;
}

inline std::vector<InstanceRecord> read_all(const std::string& path, StreamHeader* header = nullptr) {
  StreamReader reader(path);
  if (header) *header = reader.header();
  std::vector<InstanceRecord> out;
  while (auto rec = reader.next()) out.push_back(std::move(*rec));
  return out;
}

/// Config flags shared by `run` and `sweep-q`; each mirrors an AdaptConfig key.
struct ConfigFlags {
  std::string config_path;
  std::optional<std::size_t> n_views, bank_capacity, jacobi_max_iter, bias_refresh_period;
  std::optional<double> filter_ratio, jacobi_eps, q_alpha, q_beta, q;
  std::optional<std::string> measure, empty_column, bank_entry;
  std::optional<bool> la, invert_q;

  void attach(CLI::App& cmd) {
    cmd.add_option("--config", config_path, "JSON config file (flags override it)")
        ->check(CLI::ExistingFile);
    cmd.add_option("--n-views", n_views, "expected views per instance (echoed)");
    cmd.add_option("--filter-ratio", filter_ratio, "fraction of views kept");
    cmd.add_option("--bank-capacity", bank_capacity, "memory bank slots per class");
    cmd.add_option("--jacobi-max-iter", jacobi_max_iter, "Jacobi iteration cap");
    cmd.add_option("--jacobi-eps", jacobi_eps, "Jacobi L1 convergence threshold");
    cmd.add_option("--q-alpha", q_alpha, "lower end of the q interval");
    cmd.add_option("--q-beta", q_beta, "upper end of the q interval");
    cmd.add_option("--measure", measure, "shannon | tsallis | adaptive")
        ->check(CLI::IsMember({"shannon", "tsallis", "adaptive", "se", "te", "adte"}));
    cmd.add_option("--q,--tsallis-q", q, "Tsallis q (with --measure tsallis)");
    cmd.add_option("--bias-refresh-period", bias_refresh_period, "instances between bias updates");
    cmd.add_option("--empty-column", empty_column, "uniform | one_hot")
        ->check(CLI::IsMember({"uniform", "one_hot"}));
    cmd.add_option("--bank-entry", bank_entry, "raw_by_prediction | adjusted")
        ->check(CLI::IsMember({"raw_by_prediction", "adjusted"}));
    cmd.add_flag("--la,!--no-la", la, "logit adjustment on/off");
    cmd.add_flag("--invert-q,!--no-invert-q", invert_q, "invert the bias-to-q mapping");
  }

  AdaptConfig resolve() const {
    AdaptConfig c = config_path.empty() ? AdaptConfig{} : load_config_file(config_path);
    if (n_views) c.n_views = *n_views;
    if (bank_capacity) c.bank_capacity = *bank_capacity;
    if (jacobi_max_iter) c.jacobi_max_iter = *jacobi_max_iter;
    if (bias_refresh_period) c.bias_refresh_period = *bias_refresh_period;
    if (filter_ratio) c.filter_ratio = *filter_ratio;
    if (jacobi_eps) c.jacobi_eps = *jacobi_eps;
    if (q_alpha) c.q_alpha = *q_alpha;
    if (q_beta) c.q_beta = *q_beta;
    if (measure) c.measure = parse_measure(*measure);
    if (q) c.tsallis_q = *q;
    if (empty_column) c.empty_column = parse_empty_column(*empty_column);
    if (bank_entry) c.bank_entry = parse_bank_entry(*bank_entry);
    if (la) c.use_logit_adjustment = *la;
    if (invert_q) c.invert_q_mapping = *invert_q;
    c.validate();
    return c;
  }
};

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::size_t classes = 0;
  double zipf_s = 1.0;
  double bias_strength = 2.0;
  double margin = 3.0;
  std::size_t count = 0;
  std::size_t views = 16;
  double noise_sigma = 1.0;
  double corrupt_prob = 0.3;
  std::string label_dist = "uniform";
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
};

inline int cmd_synth(const SynthArgs& a, std::ostream& out) {
  const SynthWorld world = make_world(a.classes, a.zipf_s, a.bias_strength, a.margin, a.seed);
  StreamSpec spec{a.count, a.views, a.noise_sigma, a.corrupt_prob,
                  a.label_dist == "prior" ? LabelDist::prior : LabelDist::uniform};
  const auto records = gen_stream(world, spec);
  StreamFormat format = StreamFormat::jsonl;
  if (a.format == "bin" || (a.format.empty() && a.out.size() > 4 &&
                            a.out.compare(a.out.size() - 4, 4, ".bin") == 0)) {
    format = StreamFormat::binary;
  }
  StreamHeader header;
  header.num_classes = a.classes;
  write_stream_file(a.out, header, records, format);

  const std::size_t decile = std::max<std::size_t>(1, a.classes / 10);
  double head = 0.0, tail = 0.0;
  for (std::size_t l = 0; l < decile; ++l) {
    head += world.class_prior[l];
    tail += world.class_prior[a.classes - 1 - l];
  }
  out << "world classes=" << a.classes << " zipf_s=" << a.zipf_s
      << " bias_strength=" << a.bias_strength << " margin=" << a.margin << " seed=" << a.seed
      << '\n'
      << "prior head_decile_mass=" << format_real(head) << " tail_decile_mass="
      << format_real(tail) << '\n'
      << "offset head=" << format_real(world.bias_offset.front())
      << " tail=" << format_real(world.bias_offset.back()) << '\n'
      << "wrote " << records.size() << " records (" << a.views << " views) to " << a.out
      << (format == StreamFormat::binary ? " [bin]" : " [jsonl]") << '\n';
  return kExitOk;
}

struct RunArgs {
  std::string in;
  ConfigFlags config;
  std::string report_out;
  std::string predictions_out;
  std::string prior_rank = "estimated";
  std::size_t buckets = 2;
  std::optional<std::uint64_t> seed;
};

inline int cmd_run(const RunArgs& a, std::ostream& out) {
  const AdaptConfig config = a.config.resolve();
  StreamReader reader(a.in);
  RunOptions options;
  options.n_buckets = a.buckets;
  if (a.prior_rank == "index") {
    options.prior_rank.resize(reader.header().num_classes);
    std::iota(options.prior_rank.begin(), options.prior_rank.end(), std::size_t{0});
  }
  std::vector<std::string> ids;
  const bool keep = !a.predictions_out.empty();
  options.keep_predictions = keep;
  const Report report = run_stream(
      [&]() {
        auto rec = reader.next();
        if (rec && keep) ids.push_back(rec->id);
        return rec;
      },
      config, options);
  if (!a.report_out.empty()) write_report_csv(report, a.report_out);
  if (keep) {
    std::ofstream pred(a.predictions_out, std::ios::trunc);
    detail::require(pred.is_open(), ErrorKind::io, "cannot open '" + a.predictions_out + "'");
    pred << "id,label,predicted\n";
    for (std::size_t i = 0; i < report.predictions.size(); ++i) {
      pred << ids[i] << ',' << (report.labels[i] ? std::to_string(*report.labels[i]) : "")
           << ',' << report.predictions[i] << '\n';
    }
  }
  out << "instances=" << report.instances
      << ", accuracy=" << (report.accuracy ? format_real(*report.accuracy) : "NA")
      << ", measure=" << config.measure_label() << '\n';
  return kExitOk;
}

struct SweepArgs {
  std::string in;
  ConfigFlags config;
  std::string q_list = "0.01,0.1,0.5,0.9,1.1,1.5,2.0";
  std::string k_list = "1,3,5,10,20";
  std::string report_out;
};

inline void write_sweep_csv(const SweepResult& r, std::ostream& out) {
  out << "# sweep\nq,accuracy";
  for (auto k : r.ks) out << ",tcr@" << k;
  out << '\n';
  for (const auto& row : r.rows) {
    out << (row.q ? format_real(*row.q) : "shannon") << ','
        << (row.accuracy ? format_real(*row.accuracy) : "");
    for (double t : row.mean_tcr) out << ',' << format_real(t);
    out << '\n';
  }
  out << "# trend\nk,spearman,non_increasing\n";
  for (const auto& t : r.trends) {
    out << t.k << ',' << format_real(t.spearman) << ',' << (t.non_increasing ? "true" : "false")
        << '\n';
  }
}

inline int cmd_sweep_q(const SweepArgs& a, std::ostream& out) {
  const AdaptConfig config = a.config.resolve();
  const auto qs = parse_list<double>(a.q_list);
  for (double q : qs) {
    if (q == 1.0) throw UsageError("q list must not contain 1");
  }
  const auto ks = parse_list<std::size_t>(a.k_list);
  const auto records = read_all(a.in);
  if (!records.empty()) {
    for (auto k : ks) {
      if (k > records.front().num_classes) throw UsageError("k exceeds the class count");
    }
  }
  const SweepResult result = sweep_q(records, config, qs, ks);
  if (a.report_out.empty()) {
    write_sweep_csv(result, out);
  } else {
    std::ofstream file(a.report_out, std::ios::trunc);
    detail::require(file.is_open(), ErrorKind::io, "cannot open '" + a.report_out + "'");
    write_sweep_csv(result, file);
  }
  return kExitOk;
}

struct AnalyzeArgs {
  std::string p_grid = "1e-4:1e-2:20";
  std::vector<std::string> q_grids = {"0.05:0.95:19", "1.05:10:19"};
  std::string out;
};

inline void write_f_csv(const FAnalysis& f, std::ostream& out) {
  out << "# cells\np,q,F,regime\n";
  for (const auto& c : f.cells) {
    out << format_real(c.p) << ',' << format_real(c.q) << ',' << format_real(c.f) << ','
        << c.regime << '\n';
  }
  out << "# verdicts\nregime,cells,pairs,sign_violations,monotone_violations,verdict\n";
  for (const auto& v : f.verdicts) {
    out << v.regime << ',' << v.cells << ',' << v.pairs << ',' << v.sign_violations << ','
        << v.monotone_violations << ',' << (v.pass() ? "pass" : "fail") << '\n';
  }
}

inline int cmd_analyze_f(const AnalyzeArgs& a, std::ostream& out) {
  const auto ps = parse_grid(a.p_grid, true);
  for (double p : ps) {
    if (!(p > 0.0 && p < 1.0)) throw UsageError("p grid must lie strictly inside (0, 1)");
  }
  std::vector<double> qs;
  for (const auto& spec : a.q_grids) {
    for (double q : parse_grid(spec, false)) {
      if (q == 1.0) throw UsageError("q grid must exclude 1");
      if (!(q > 0.0)) throw UsageError("q grid must be positive");
      qs.push_back(q);
    }
  }
  const FAnalysis result = analyze_f(ps, qs);
  if (a.out.empty()) {
    write_f_csv(result, out);
  } else {
    std::ofstream file(a.out, std::ios::trunc);
    detail::require(file.is_open(), ErrorKind::io, "cannot open '" + a.out + "'");
    write_f_csv(result, file);
  }
  return kExitOk;
}

struct ReportArgs {
  std::vector<std::string> files;
  bool compare = false;
};

/// Comparison rows pulled from a report: (label, value or empty).
inline std::vector<std::pair<std::string, std::optional<double>>> report_metrics(
    const ReportTable& t) {
  std::vector<std::pair<std::string, std::optional<double>>> rows;
  const auto num = [](const std::optional<std::string>& s) -> std::optional<double> {
    if (!s || s->empty()) return std::nullopt;
    return std::stod(*s);
  };
  rows.emplace_back("instances", num(t.get("instances")));
  rows.emplace_back("accuracy", num(t.get("accuracy")));
  rows.emplace_back("log_bias_variance", num(t.get("log_bias_variance")));
  for (const auto& b : t.buckets) {
    if (b.size() < 10) continue;
    const std::string name = "bucket" + b[0] + "[" + b[1] + "-" + b[2] + "]";
    rows.emplace_back(name + ".accuracy", b[6].empty() ? std::nullopt : num(b[6]));
    rows.emplace_back(name + ".mean_confidence", num(b[7]));
    rows.emplace_back(name + ".mean_entropy", num(b[8]));
    rows.emplace_back(name + ".mean_true_prob", num(b[9]));
  }
  return rows;
}

inline int cmd_report(const ReportArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<ReportTable> tables;
  for (const auto& f : a.files) tables.push_back(read_report_csv_file(f));
  const auto classes = tables.front().get("classes");
  for (std::size_t i = 1; i < tables.size(); ++i) {
    if (tables[i].get("classes") != classes) {
      err << "error: class counts differ between '" << a.files.front() << "' and '"
          << a.files[i] << "'\n";
      return kExitError;
    }
  }
  std::vector<std::vector<std::pair<std::string, std::optional<double>>>> cols;
  for (const auto& t : tables) cols.push_back(report_metrics(t));
  const bool delta = tables.size() == 2;
  const auto cell = [](const std::optional<double>& v) {
    if (!v) return std::string("-");
    std::ostringstream s;
    s << std::setprecision(6) << *v;
    return s.str();
  };
  out << std::left << std::setw(34) << "metric";
  for (std::size_t i = 0; i < tables.size(); ++i) out << std::setw(16) << ("[" + std::to_string(i + 1) + "]");
  if (delta) out << "delta";
  out << '\n';
  for (std::size_t r = 0; r < cols.front().size(); ++r) {
    const auto& name = cols.front()[r].first;
    out << std::setw(34) << name;
    for (const auto& c : cols) {
      std::optional<double> v;
      for (const auto& [k, x] : c) {
        if (k == name) v = x;
      }
      out << std::setw(16) << cell(v);
    }
    if (delta) {
      std::optional<double> v0 = cols[0][r].second, v1;
      for (const auto& [k, x] : cols[1]) {
        if (k == name) v1 = x;
      }
      out << (v0 && v1 ? cell(*v1 - *v0) : "-");
    }
    out << '\n';
  }
  for (std::size_t i = 0; i < a.files.size(); ++i) out << "[" << i + 1 << "] " << a.files[i] << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

/// Parses argv and dispatches. Exit codes: 0 ok, 1 runtime error, 2 usage error.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Entropy-based online test-time adaptation over logit streams", "adte"};
  app.require_subcommand(1, 1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "generate a seeded synthetic biased logit stream");
  s->add_option("--classes", synth.classes, "number of classes L")->required()->check(CLI::Range(2, 1 << 20));
  s->add_option("--zipf-s", synth.zipf_s, "Zipf exponent of the class prior")->check(CLI::NonNegativeNumber);
  s->add_option("--bias-strength", synth.bias_strength, "head-favouring logit offset strength")
      ->check(CLI::NonNegativeNumber);
  s->add_option("--margin", synth.margin, "true-class logit advantage")->check(CLI::PositiveNumber);
  s->add_option("--count", synth.count, "number of instances")->required()->check(CLI::PositiveNumber);
  s->add_option("--views", synth.views, "views per instance")->check(CLI::PositiveNumber);
  s->add_option("--noise-sigma", synth.noise_sigma, "per-view Gaussian logit noise")
      ->check(CLI::NonNegativeNumber);
  s->add_option("--corrupt-prob", synth.corrupt_prob, "chance a view's margin is attenuated")
      ->check(CLI::Range(0.0, 1.0));
  s->add_option("--label-dist", synth.label_dist, "uniform | prior")
      ->check(CLI::IsMember({"uniform", "prior"}));
  s->add_option("--seed", synth.seed, "random seed");
  s->add_option("--out", synth.out, "output stream file")->required();
  s->add_option("--format", synth.format, "jsonl | bin (default: by extension)")
      ->check(CLI::IsMember({"jsonl", "bin"}));

  RunArgs run;
  auto* r = app.add_subcommand("run", "adapt over a stream and write a report");
  r->add_option("--in", run.in, "input stream (JSONL or binary)")->required()->check(CLI::ExistingFile);
  run.config.attach(*r);
  r->add_option("--report-out", run.report_out, "CSV report destination");
  r->add_option("--predictions-out", run.predictions_out, "per-instance predictions CSV");
  r->add_option("--prior-rank", run.prior_rank, "bucket classes by 'estimated' prior or class 'index'")
      ->check(CLI::IsMember({"estimated", "index"}));
  r->add_option("--buckets", run.buckets, "number of prior-rank buckets")->check(CLI::PositiveNumber);
  r->add_option("--seed", run.seed, "accepted for script symmetry; adaptation is deterministic");

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep-q", "Tsallis q sweep with mean Tcr_K of selected views");
  w->add_option("--in", sweep.in, "input stream")->required()->check(CLI::ExistingFile);
  sweep.config.attach(*w);
  w->add_option("--q-list", sweep.q_list, "comma-separated q values (q != 1)");
  w->add_option("--k-list", sweep.k_list, "comma-separated K values");
  w->add_option("--report-out", sweep.report_out, "CSV destination (default: stdout)");

  AnalyzeArgs analyze;
  auto* f = app.add_subcommand("analyze-f", "tabulate F(p, q) with per-regime verdicts");
  f->add_option("--p-grid", analyze.p_grid, "log-spaced lo:hi:n or list, inside (0, 1)");
  f->add_option("--q-grid", analyze.q_grids, "linear lo:hi:n or list; repeatable");
  f->add_option("--out", analyze.out, "CSV destination (default: stdout)");

  ReportArgs report;
  auto* p = app.add_subcommand("report", "print one report or compare several side by side");
  p->add_option("reports", report.files, "report CSV files")->required()->check(CLI::ExistingFile);
  p->add_flag("--compare", report.compare, "side-by-side comparison (implied by 2+ files)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s) return cmd_synth(synth, out);
    if (*r) return cmd_run(run, out);
    if (*w) return cmd_sweep_q(sweep, out);
    if (*f) return cmd_analyze_f(analyze, out);
    if (*p) return cmd_report(report, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace adte::cli
