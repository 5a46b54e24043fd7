#include "gramlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <omp.h>
#include "CLI11.hpp"
#include "json.hpp"

#include "gramlab/cache.hpp"
#include "gramlab/classify.hpp"
#include "gramlab/error.hpp"
#include "gramlab/gram.hpp"
#include "gramlab/moments.hpp"
#include "gramlab/zeros.hpp"

namespace gramlab {
namespace {

using nlohmann::ordered_json;

const std::map<std::string, Command> kCommands = {{"zeros", Command::zeros},
                                                  {"gram", Command::gram},
                                                  {"classify", Command::classify},
                                                  {"moments", Command::moments},
                                                  {"report", Command::report}};

double moment_shift(const JobConfig& c) {
  if (c.h) return *c.h;
  if (!(c.c0 > 0.0)) throw ArgumentError("--c0 must be positive");
  return c.c0 / std::log(c.t_lo);
}

ordered_json moment_json(const MomentEstimate& e) {
  ordered_json j;
  j["T"] = e.t_lo;
  j["H"] = e.t_hi - e.t_lo;
  j["h"] = e.h;
  j["m"] = e.m;
  j["value"] = e.value;
  j["quad_error"] = e.quad_error;
  j["leading_term"] = e.leading_term;
  j["ratio"] = e.value / moment_reference_scale(e);
  return j;
}

std::string run_zeros(const JobConfig& c, std::ostream& log) {
  ZeroCache cache(c.cache_path);
  ScanOptions opts;
  opts.step = c.step;
  opts.threads = c.threads;
  const int written = cache.ensure(c.t_lo, c.t_hi, opts);
  const ZeroCensus census = cache.load();
  log << fmt::format("cache {}: {} segment(s) written, [{}, {}] holds {} zeros\n", c.cache_path, written, census.t_lo,
                     census.t_hi, census.zeros.size());
  if (!census.audit_passed) {
    throw AuditError(fmt::format("census audit failed: {} zeros ({} flagged), {} expected", census.zeros.size(),
                                 census.flagged_count(), census.expected_count));
  }
  if (c.format == OutputFormat::json) {
    ordered_json j;
    j["t_lo"] = census.t_lo;
    j["t_hi"] = census.t_hi;
    j["zero_count"] = census.zeros.size();
    j["expected_count"] = census.expected_count;
    j["audit_passed"] = census.audit_passed;
    j["s_lo"] = census.s_lo;
    j["s_hi"] = census.s_hi;
    return j.dump(2) + "\n";
  }
  return census_to_string(census);
}

std::string run_gram(const JobConfig& c) {
  const GramRange range = gram_range(c.t_lo, c.t_hi);
  if (c.format == OutputFormat::json) {
    auto arr = ordered_json::array();
    for (const auto& p : range.points) arr.push_back({{"n", p.n}, {"t", p.t}, {"residual", p.residual}});
    return arr.dump(2) + "\n";
  }
  std::string s = "n,t,residual\n";
  for (const auto& p : range.points) s += fmt::format("{},{:.17g},{:.3g}\n", p.n, p.t, p.residual);
  return s;
}

Classification classify_cached(const JobConfig& c) {
  const ZeroCache cache(c.cache_path);
  const ZeroCensus census = cache.load_covering(c.t_lo, c.t_hi);
  return classify(gram_range(c.t_lo, c.t_hi), census);
}

std::string run_classify(const JobConfig& c) {
  const Classification cl = classify_cached(c);
  if (c.format == OutputFormat::json) return report_to_json(report(cl)) + "\n";
  std::ostringstream ss;
  write_intervals_csv(ss, cl.intervals);
  return ss.str();
}

std::vector<MomentEstimate> cached_moments(const JobConfig& c, double t_hi, const std::vector<int>& ms) {
  const double h = moment_shift(c);
  const ZeroCache cache(c.cache_path);
  if (!cache.covers(c.t_lo, t_hi + h)) {
    throw CacheError(fmt::format("moments need zeros on [{}, {}]; run zeros first with --t-hi {}", c.t_lo, t_hi + h,
                                 std::ceil(t_hi + h)));
  }
  const ZeroCensus census = cache.load();
  const SFunction sf = build_s(census, infer_s_offset(census));
  MomentOptions opts;
  opts.threads = c.threads;
  std::vector<MomentEstimate> out;
  for (int m : ms) out.push_back(shifted_moment(sf, h, m, c.t_lo, t_hi, opts));
  return out;
}

std::string run_moments(const JobConfig& c) {
  std::vector<int> ms;
  if (c.m) {
    ms.push_back(*c.m);
  } else {
    ms = {1, 2, 3, 4};
  }
  const auto rows = cached_moments(c, c.t_hi, ms);
  if (c.format == OutputFormat::json) {
    auto arr = ordered_json::array();
    for (const auto& e : rows) arr.push_back(moment_json(e));
    return arr.dump(2) + "\n";
  }
  std::ostringstream ss;
  write_moment_csv_header(ss);
  for (const auto& e : rows) write_moment_csv_row(ss, e);
  return ss.str();
}

// The moment part integrates over [t_lo, t_hi - h] so it needs no zeros
// beyond the classified range.
std::string run_report(const JobConfig& c) {
  const ClassificationReport r = report(classify_cached(c));
  const double h = moment_shift(c);
  const auto moments = cached_moments(c, c.t_hi - h, {1, 2});
  if (c.format == OutputFormat::json) {
    ordered_json j = ordered_json::parse(report_to_json(r));
    auto arr = ordered_json::array();
    for (const auto& e : moments) arr.push_back(moment_json(e));
    j["moments"] = arr;
    return j.dump(2) + "\n";
  }
  std::string s = "key,value\n";
  s += fmt::format("t_lo,{:.17g}\nt_hi,{:.17g}\nn_g,{}\nn_zeros,{}\n", r.t_lo, r.t_hi, r.n_g, r.n_zeros);
  s += fmt::format("failure_proportion,{:.17g}\nf0_proportion,{:.17g}\nweak_success_proportion,{:.17g}\n",
                   r.failure_proportion(), r.f0_proportion(), r.weak_success_proportion());
  s += fmt::format("flagged_count,{}\n", r.flagged_count);
  for (const auto& [k, n] : r.histogram) s += fmt::format("F_{},{}\n", k, n);
  for (const auto& e : moments) s += fmt::format("moment_ratio_m{},{:.17g}\n", e.m, e.value / moment_reference_scale(e));
  return s;
}

}  // namespace

std::optional<JobConfig> parse_args(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Gram intervals, zeta zeros and shifted moments of S(t)", "gramlab"};
  app.set_help_flag("--help", "Print this help");
  std::string command;
  std::optional<double> t_lo;
  std::optional<double> t_hi;
  std::optional<int> threads;
  std::string format = "csv";
  JobConfig cfg;
  std::vector<std::string> names;
  for (const auto& [name, cmd] : kCommands) names.push_back(name);
  app.add_option("command", command, "zeros | gram | classify | moments | report")
      ->required()
      ->check(CLI::IsMember(names));
  app.add_option("--t-lo", t_lo, "Range bottom")->required();
  app.add_option("--t-hi", t_hi, "Range top (default 2 * t-lo)");
  app.add_option("--step", cfg.step, "Scan sample spacing");
  app.add_option("--h", cfg.h, "Moment shift");
  app.add_option("--m", cfg.m, "Moment order, 1..8");
  app.add_option("--c0", cfg.c0, "h = c0 / log(t-lo) when --h is absent");
  app.add_option("--cache", cfg.cache_path, "Zero cache directory");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "Worker threads");
  app.add_option("--out", cfg.out_path, "Output file (default stdout)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ArgumentError(e.what());
  }

  cfg.command = kCommands.at(command);
  cfg.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
  cfg.t_lo = *t_lo;
  cfg.t_hi = t_hi.value_or(2.0 * *t_lo);
  if (!std::isfinite(cfg.t_lo) || !std::isfinite(cfg.t_hi) || !(cfg.t_lo < cfg.t_hi)) {
    throw ArgumentError("requires finite --t-lo < --t-hi");
  }
  if (threads) {
    if (*threads < 1) throw ArgumentError("--threads must be >= 1");
    cfg.threads = *threads;
  }
  if (cfg.m && (*cfg.m < 1 || *cfg.m > 8)) throw ArgumentError("--m must be in [1, 8]");
  if (cfg.step && !(*cfg.step > 0.0)) throw ArgumentError("--step must be positive");
  if (cfg.h && !(*cfg.h > 0.0)) throw ArgumentError("--h must be positive");
  return cfg;
}

void run(const JobConfig& c, std::ostream& out, std::ostream& log) {
  if (c.threads > 0) omp_set_num_threads(c.threads);
  std::string text;
  switch (c.command) {
    case Command::zeros:
      text = run_zeros(c, log);
      break;
    case Command::gram:
      text = run_gram(c);
      break;
    case Command::classify:
      text = run_classify(c);
      break;
    case Command::moments:
      text = run_moments(c);
      break;
    case Command::report:
      text = run_report(c);
      break;
  }
  if (c.out_path.empty()) {
    out << text;
  } else {
    write_file_atomic(c.out_path, text);
  }
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = parse_args(args, out);
    if (!cfg) return kExitOk;
    run(*cfg, out, err);
    return kExitOk;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitArgument;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitArgument;
  } catch (const AuditError& e) {
    err << "audit failure: " << e.what() << '\n';
    return kExitAudit;
  } catch (const CacheError& e) {
    err << "cache error: " << e.what() << '\n';
    return kExitCache;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace gramlab
