#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "eklab/arith.hpp"
#include "eklab/census.hpp"
#include "eklab/cli.hpp"
#include "eklab/error.hpp"
#include "eklab/factor.hpp"
#include "eklab/model.hpp"
#include "eklab/parallel.hpp"
#include "eklab/sample.hpp"
#include "eklab/stats.hpp"
#include "eklab/manifest.hpp"

namespace eklab::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using u64 = std::uint64_t;

// Shortest round-trip text for a double; stable across runs and thread counts.
std::string num(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json doubles(const std::vector<double>& v) {
  auto a = json::array();
  for (double d : v) a.push_back(finite_or_null(d));
  return a;
}

/// Accepts plain integers and exact scientific forms such as 1e7.
u64 parse_count(const std::string& flag, const std::string& text) {
  u64 v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc() && p == text.data() + text.size()) return v;
  double d = 0.0;
  auto [q, ec2] = std::from_chars(text.data(), text.data() + text.size(), d);
  if (ec2 != std::errc() || q != text.data() + text.size() || !(d >= 0.0) || d >= 0x1p64 ||
      d != std::floor(d))
    throw ParameterError(flag, "expected a nonnegative integer, got '" + text + "'");
  return static_cast<u64>(d);
}

std::ofstream open_out(const fs::path& path, const std::string& flag) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError(flag, "cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const json& j, const std::string& flag = "out") {
  auto out = open_out(path, flag);
  out << j.dump(2) << '\n';
}

fs::path with_suffix(const fs::path& p, const std::string& suffix) {
  return p.parent_path() / (p.stem().string() + suffix);
}

// Options shared by every subcommand.
struct Common {
  std::size_t threads = 0;
  std::int64_t shift = 2;
  u64 seed = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--threads", c.threads, "worker threads (0 = all cores)");
  sub->add_option("--shift", c.shift, "the a in phi(n)+a when --fn phi+a");
  sub->add_option("--seed", c.seed, "seed for Monte-Carlo outputs");
}

struct WindowOpts {
  std::string x;
  double y = std::nan("");
  double z = std::nan("");
  double smoothness = std::nan("");
  double l3_floor = 1.5;
  double l4_floor = 3.0;

  [[nodiscard]] WindowParams params() const {
    WindowParams p;
    p.l3_floor = l3_floor;
    p.l4_floor = l4_floor;
    if (!std::isnan(y)) p.y = y;
    if (!std::isnan(z)) p.z = z;
    if (!std::isnan(smoothness)) p.smoothness = smoothness;
    return p;
  }
};

void add_window(CLI::App* sub, WindowOpts& w) {
  sub->add_option("--x", w.x, "upper limit x (integer, 1e7 allowed)")->required();
  sub->add_option("--y", w.y, "window lower end (default (log x)^2)");
  sub->add_option("--z", w.z, "window upper end (default x^(1/log_3 x), floored)");
  sub->add_option("--smoothness", w.smoothness, "largest-prime cutoff L (default x^(1/log_4 x), floored)");
  sub->add_option("--l3-floor", w.l3_floor, "floor for log_3 x in z");
  sub->add_option("--l4-floor", w.l4_floor, "floor for log_4 x in L");
}

json window_json(const SampleConfig& cfg) {
  const auto& w = cfg.window;
  return {{"x", cfg.x},
          {"y", w.y},
          {"z", w.z},
          {"smoothness", cfg.smoothness},
          {"count", w.size()},
          {"mu", w.mu},
          {"sigma2", w.sigma2}};
}

json params_json(const SampleConfig& cfg, const Common& c) {
  return {{"x", cfg.x},
          {"fn", cfg.spec.name()},
          {"shift", c.shift},
          {"y", cfg.window.y},
          {"z", cfg.window.z},
          {"smoothness", cfg.smoothness},
          {"l3_floor", cfg.params.l3_floor},
          {"l4_floor", cfg.params.l4_floor},
          {"population", cfg.population == Population::OmegaSpace ? "omega" : "all"},
          {"threads", resolve_threads(c.threads)},
          {"seed", c.seed}};
}

Population parse_population(const std::string& s) {
  if (s == "omega") return Population::OmegaSpace;
  if (s == "all") return Population::AllN;
  throw ParameterError("population", "expected 'omega' or 'all', got '" + s + "'");
}

// ---------------------------------------------------------------- sieve

struct SieveOpts {
  std::string lo, hi;
  fs::path out;
};

void run_sieve(const SieveOpts& o, RunManifest& m) {
  const u64 lo = parse_count("lo", o.lo), hi = parse_count("hi", o.hi);
  if (lo < 2) throw ParameterError("lo", "lo must be >= 2");
  if (hi <= lo) throw ParameterError("hi", "hi must exceed lo");
  if (hi - lo > (u64{1} << 28)) throw ParameterError("hi", "range longer than 2^28");
  m.parameters = {{"lo", lo}, {"hi", hi}};
  auto out = open_out(o.out, "out");
  out << "n,sigma,phi,tau,omega,lpf,lpf_sq_divides\n";
  const u64 seg = segment_size();
  for (u64 a = lo; a < hi; a += std::min(seg, hi - a)) {
    const u64 b = a + std::min(seg, hi - a);
    const auto blk = sieve_block(a, b);
    for (u64 n = a; n < b; ++n) {
      const auto i = n - a;
      out << n << ',' << blk.sigma[i] << ',' << blk.phi[i] << ',' << blk.tau[i] << ','
          << unsigned{blk.omega_small[i]} << ',' << blk.lpf[i] << ',' << (blk.lpf_sq_divides[i] ? 1 : 0)
          << '\n';
    }
  }
  out.close();
  m.outputs.push_back(o.out);
}

// ---------------------------------------------------------------- ekhist

struct HistOpts {
  std::string population = "omega";
  int bins = 40;
  double lo = -4.0;
  double hi = 4.0;
  int kmax = 6;
};

struct Scores {
  std::vector<double> values;
  std::vector<u64> weights;
};

// Classical standardization (omega(f) - log log x) / sqrt(log log x) over the
// population.
Scores loglog_scores(const SampleSummary& s, const SampleConfig& cfg) {
  const double ll = cfg.log_log_x(), sd = std::sqrt(ll);
  Scores out;
  for (std::size_t k = 0; k < s.omega_hist.size(); ++k) {
    if (s.omega_hist[k] == 0) continue;
    out.values.push_back((static_cast<double>(k) - ll) / sd);
    out.weights.push_back(s.omega_hist[k]);
  }
  return out;
}

// Window standardization (X - mu) / sigma over the sample space.
Scores window_scores(const SampleSummary& s, const PrimeWindow& w) {
  const double sd = std::sqrt(w.sigma2);
  Scores out;
  for (std::size_t k = 0; k < s.x_hist.size(); ++k) {
    if (s.x_hist[k] == 0) continue;
    out.values.push_back((static_cast<double>(k) - w.mu) / sd);
    out.weights.push_back(s.x_hist[k]);
  }
  return out;
}

double ks_of(const Scores& sc) {
  if (sc.values.empty()) return std::nan("");
  return ks_distance(Ecdf(sc.values, sc.weights));
}

double mean_of(unsigned __int128 sum, u64 count) {
  return count == 0 ? std::nan("") : static_cast<double>(sum) / static_cast<double>(count);
}

json hist_summary(const SampleSummary& s, const SampleConfig& cfg, int kmax) {
  double mean_omega = 0.0;
  u64 tot = 0;
  for (std::size_t k = 0; k < s.omega_hist.size(); ++k) {
    mean_omega += static_cast<double>(k) * static_cast<double>(s.omega_hist[k]);
    tot += s.omega_hist[k];
  }
  const auto rep = make_moment_report(empirical_moments(s.x_sums, cfg.window, kmax), cfg.window);
  json j;
  j["window"] = window_json(cfg);
  j["records"] = s.records;
  j["omega_count"] = s.omega_count;
  j["omega_density"] = static_cast<double>(s.omega_count) / static_cast<double>(cfg.x);
  j["degenerate"] = s.degenerate;
  j["scored"] = s.scored;
  j["log_log_x"] = cfg.log_log_x();
  j["mean_omega_f"] = finite_or_null(tot ? mean_omega / static_cast<double>(tot) : std::nan(""));
  j["ks_distance"] = finite_or_null(ks_of(loglog_scores(s, cfg)));
  j["ks_distance_window"] = finite_or_null(ks_of(window_scores(s, cfg.window)));
  j["small_prime_mean"] = finite_or_null(small_prime_expectation(s));
  j["large_prime_mean"] = finite_or_null(mean_of(s.x_large_sum, s.omega_count));
  j["omega_excess_mean"] = finite_or_null(mean_of(s.omega_excess_sum, s.scored));
  j["moments"] = {{"empirical", doubles(rep.empirical)}, {"model", doubles(rep.model)}};
  return j;
}

void write_hist_csv(const fs::path& path, const Histogram& h) {
  auto out = open_out(path, "out");
  out << "bin_lo,bin_hi,count,normal_mass\n";
  out << "-inf," << num(h.lo) << ',' << h.underflow << ',' << num(h.underflow_mass) << '\n';
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    out << num(h.edges[i]) << ',' << num(h.edges[i + 1]) << ',' << h.counts[i] << ','
        << num(h.normal_mass[i]) << '\n';
  out << num(h.hi) << ",inf," << h.overflow << ',' << num(h.overflow_mass) << '\n';
}

// Histogram CSV + JSON summary for one sample run; returns the JSON path.
std::pair<fs::path, fs::path> emit_hist(const SampleSummary& s, const SampleConfig& cfg, const HistOpts& o,
                                        const fs::path& csv) {
  const auto sc = loglog_scores(s, cfg);
  const auto h = histogram(sc.values, sc.weights, o.bins, o.lo, o.hi);
  write_hist_csv(csv, h);
  const auto js = with_suffix(csv, ".json");
  auto j = hist_summary(s, cfg, o.kmax);
  j["bins"] = o.bins;
  j["range"] = {o.lo, o.hi};
  write_json(js, j);
  return {csv, js};
}

struct EkhistOpts {
  WindowOpts win;
  std::string fn = "s";
  HistOpts hist;
  fs::path out;
  fs::path dump;
};

void check_hist(const HistOpts& h) {
  if (h.bins < 1) throw ParameterError("bins", "bins must be >= 1");
  if (!(h.lo < h.hi)) throw ParameterError("lo", "need lo < hi");
  if (h.kmax < 1 || h.kmax > kMaxMoment) throw ParameterError("kmax", "kmax must lie in [1, 8]");
}

void run_ekhist(const EkhistOpts& o, const Common& c, RunManifest& m) {
  check_hist(o.hist);
  const auto cfg = SampleConfig::make(parse_count("x", o.win.x), parse_fn(o.fn, c.shift), o.win.params(),
                                      parse_population(o.hist.population));
  m.parameters = params_json(cfg, c);
  m.parameters["bins"] = o.hist.bins;
  m.parameters["range"] = {o.hist.lo, o.hist.hi};
  std::ofstream dump;
  RecordSink sink;
  if (!o.dump.empty()) {
    dump = open_out(o.dump, "dump");
    dump << "n,in_omega,m,P,f,omega_f,omega_prime_f,x_window,x_small,x_large,score\n";
    sink = [&](const SampleRecord& r) {
      dump << r.n << ',' << (r.in_omega ? 1 : 0) << ',' << r.m << ',' << r.P << ',' << r.f_value << ','
           << r.omega_f << ',' << r.omega_prime_f << ',' << r.x_window << ',' << r.x_small << ','
           << r.x_large << ',' << num(r.score) << '\n';
    };
  }
  const auto s = run_sample(cfg, c.threads, sink);
  if (dump.is_open()) {
    dump.close();
    m.outputs.push_back(o.dump);
  }
  auto [csv, js] = emit_hist(s, cfg, o.hist, o.out);
  m.outputs.push_back(csv);
  m.outputs.push_back(js);
}

// ---------------------------------------------------------------- moments

json moments_json(const SampleSummary& s, const SampleConfig& cfg, int kmax) {
  const auto rep = make_moment_report(empirical_moments(s.x_sums, cfg.window, kmax), cfg.window);
  json j;
  j["window"] = window_json(cfg);
  j["fn"] = cfg.spec.name();
  j["omega_count"] = s.omega_count;
  j["k_max"] = kmax;
  j["moments"] = {{"empirical", doubles(rep.empirical)},
                  {"model", doubles(rep.model)},
                  {"normal", doubles(rep.normal)},
                  {"diffs", doubles(rep.diffs)}};
  return j;
}

struct MomentsOpts {
  WindowOpts win;
  std::string fn = "s";
  int kmax = 6;
  fs::path out;
};

void run_moments(const MomentsOpts& o, const Common& c, RunManifest& m) {
  if (o.kmax < 1 || o.kmax > kMaxMoment) throw ParameterError("kmax", "kmax must lie in [1, 8]");
  const auto cfg = SampleConfig::make(parse_count("x", o.win.x), parse_fn(o.fn, c.shift), o.win.params());
  m.parameters = params_json(cfg, c);
  m.parameters["k_max"] = o.kmax;
  const auto s = run_sample(cfg, c.threads);
  write_json(o.out, moments_json(s, cfg, o.kmax));
  m.outputs.push_back(o.out);
}

// ---------------------------------------------------------------- dcount

struct DcountOpts {
  WindowOpts win;
  std::string fn = "s";
  std::vector<std::string> d;
  std::string autospec;
  fs::path out;
};

struct AutoSpec {
  int k = 2;
  u64 cap = 1'000'000;
  std::size_t limit = 20;
};

AutoSpec parse_auto(const std::string& text) {
  AutoSpec a;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParameterError("auto", "expected key=value, got '" + tok + "'");
    const auto key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "k") {
      a.k = static_cast<int>(parse_count("auto", val));
    } else if (key == "cap") {
      a.cap = parse_count("auto", val);
    } else if (key == "limit") {
      a.limit = parse_count("auto", val);
    } else {
      throw ParameterError("auto", "unknown key '" + key + "'");
    }
  }
  if (a.k < 1 || a.k > kMaxMoment) throw ParameterError("auto", "k must lie in [1, 8]");
  if (a.limit == 0) throw ParameterError("auto", "limit must be >= 1");
  return a;
}

u64 checked_d(const std::string& text) {
  const u64 d = parse_count("d", text);
  if (d < 3 || d % 2 == 0) throw ParameterError("d", "d must be odd and > 1, got " + text);
  for (const auto& pp : factorize(d).factors())
    if (pp.exponent > 1) throw ParameterError("d", "d must be squarefree, got " + text);
  return d;
}

json dcount_json(const DCountReport& r) {
  return {{"d", r.d},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"equal", r.lhs == r.rhs},
          {"omega_count", r.omega_count},
          {"expected", r.expected},
          {"discrepancy", r.discrepancy},
          {"ideal", r.ideal},
          {"compat_not_ideal", r.compat_not_ideal},
          {"incompatible", r.incompatible},
          {"gcd_sum", r.gcd_sum}};
}

void run_dcount(const DcountOpts& o, const Common& c, RunManifest& m, std::ostream& out) {
  if (o.d.empty() == o.autospec.empty()) throw ParameterError("d", "give exactly one of --d or --auto");
  const auto cfg = SampleConfig::make(parse_count("x", o.win.x), parse_fn(o.fn, c.shift), o.win.params());
  m.parameters = params_json(cfg, c);
  std::vector<u64> ds;
  bool partial = false;
  if (!o.d.empty()) {
    for (const auto& t : o.d) ds.push_back(checked_d(t));
    m.parameters["d"] = ds;
  } else {
    const auto a = parse_auto(o.autospec);
    const auto list = enumerate_d(cfg.window, a.k, a.cap);
    partial = list.partial;
    ds = interleave_by_omega(list.ds, a.limit);
    m.parameters["auto"] = {{"k", a.k}, {"cap", a.cap}, {"limit", a.limit}};
  }
  const auto reports = dcount(ds, cfg, c.threads);
  json j;
  j["window"] = window_json(cfg);
  j["fn"] = cfg.spec.name();
  j["partial"] = partial;
  auto arr = json::array();
  double total = 0.0;
  for (const auto& r : reports) {
    arr.push_back(dcount_json(r));
    total += r.discrepancy;
  }
  j["reports"] = std::move(arr);
  j["discrepancy_sum"] = total;
  write_json(o.out, j);
  m.outputs.push_back(o.out);
  out << reports.size() << " moduli, lhs = rhs for all\n";
}

// ---------------------------------------------------------------- eqerror

struct EqOpts {
  std::string q, T;
  fs::path out;
};

void run_eqerror(const EqOpts& o, RunManifest& m, std::ostream& out) {
  const u64 q = parse_count("q", o.q), T = parse_count("T", o.T);
  m.parameters = {{"q", q}, {"T", T}};
  const double e = progression_error(T, q);
  out << "E(" << T << ';' << q << ") = " << num(e) << '\n';
  if (!o.out.empty()) {
    write_json(o.out, {{"q", q}, {"T", T}, {"error", e}});
    m.outputs.push_back(o.out);
  }
}

// ---------------------------------------------------------------- hypotheses

struct HypOpts {
  WindowOpts win;
  std::string fn = "s";
  int k = 2;
  std::string cap = "1000000";
  fs::path out;
};

json hypotheses_json(const HypothesisSums& h, const SampleConfig& cfg, int k, u64 cap) {
  return {{"fn", cfg.spec.name()}, {"x", cfg.x},          {"k", k},
          {"cap", cap},            {"d_count", h.d_count}, {"partial", h.partial},
          {"sum29", h.sum29},      {"sum30", h.sum30}};
}

void run_hypotheses(const HypOpts& o, const Common& c, RunManifest& m) {
  const u64 cap = parse_count("cap", o.cap);
  const auto cfg = SampleConfig::make(parse_count("x", o.win.x), parse_fn(o.fn, c.shift), o.win.params());
  m.parameters = params_json(cfg, c);
  m.parameters["k"] = o.k;
  m.parameters["cap"] = cap;
  const auto h = hypothesis_sums(cfg.spec, cfg.x, o.k, cfg.window, cap, c.threads);
  write_json(o.out, hypotheses_json(h, cfg, o.k, cap));
  m.outputs.push_back(o.out);
}

// ---------------------------------------------------------------- sample-model

struct ModelOpts {
  WindowOpts win;
  std::string trials = "100000";
  int kmax = 6;
  fs::path out;
};

void run_sample_model(const ModelOpts& o, const Common& c, RunManifest& m) {
  if (o.kmax < 1 || o.kmax > kMaxMoment) throw ParameterError("kmax", "kmax must lie in [1, 8]");
  const u64 trials = parse_count("trials", o.trials);
  const double x = static_cast<double>(parse_count("x", o.win.x));
  const auto w = build_window(x, o.win.params());
  m.parameters = {{"x", x},         {"y", w.y},           {"z", w.z},    {"trials", trials},
                  {"k_max", o.kmax}, {"seed", c.seed}, {"threads", resolve_threads(c.threads)}};
  const auto draws = sample_model(w, trials, c.seed);
  PowerSums sums;
  std::map<std::uint32_t, u64> freq;
  for (auto v : draws) {
    sums.add(v);
    ++freq[v];
  }
  {
    auto out = open_out(o.out, "out");
    out << "count,frequency\n";
    for (auto [v, f] : freq) out << v << ',' << f << '\n';
  }
  const auto js = with_suffix(o.out, ".json");
  json j;
  j["window"] = {{"y", w.y}, {"z", w.z}, {"count", w.size()}, {"mu", w.mu}, {"sigma2", w.sigma2}};
  j["trials"] = trials;
  j["seed"] = c.seed;
  j["moments"] = {{"monte_carlo", doubles(empirical_moments(sums, w, o.kmax))},
                  {"model", doubles(model_moments(w, o.kmax))}};
  write_json(js, j);
  m.outputs.push_back(o.out);
  m.outputs.push_back(js);
}

// ---------------------------------------------------------------- report

struct ReportOpts {
  std::string preset;
  std::string x;
  fs::path out;
  HistOpts hist;
  int k = 2;
  std::string cap = "1000000";
};

const std::vector<std::string> kReportFns = {"s", "beta", "cototient", "n+tau"};

std::string file_tag(const std::string& fn) {
  std::string t;
  for (char ch : fn) t += ch == '+' ? 'p' : ch == '-' ? 'm' : ch;
  return t;
}

void write_gnuplot(const fs::path& path, const std::vector<std::string>& tags, u64 x, const HistOpts& h) {
  auto out = open_out(path, "out");
  const double width = (h.hi - h.lo) / h.bins;
  out << "# Standardized omega(f(n)) histograms against the Gaussian density, x = " << x << "\n"
      << "set datafile separator ','\n"
      << "set terminal pngcairo size 900,600\n"
      << "set xrange [" << num(h.lo) << ':' << num(h.hi) << "]\n"
      << "set style fill transparent solid 0.4\n"
      << "phi(u) = exp(-u*u/2) / sqrt(2*pi)\n"
      << "w = " << num(width) << "\n";
  for (const auto& t : tags) {
    out << "stats '" << t << "_hist.csv' every ::2::" << h.bins + 1 << " using 3 nooutput\n"
        << "n = STATS_sum\n"
        << "set output '" << t << "_hist.png'\n"
        << "set title '" << t << "'\n"
        << "plot '" << t << "_hist.csv' every ::2::" << h.bins + 1
        << " using (($1+$2)/2):($3/(n*w)):(w) with boxes title 'empirical', \\\n"
        << "     phi(x) with lines lw 2 title 'N(0,1)'\n";
  }
}

void run_report(const ReportOpts& o, const Common& c, RunManifest& m, std::ostream& out) {
  check_hist(o.hist);
  u64 x = 0;
  if (!o.preset.empty()) {
    if (!o.x.empty()) throw ParameterError("preset", "give --preset or --x, not both");
    x = parse_count("preset", o.preset);
    if (x != 100'000 && x != 1'000'000 && x != 10'000'000)
      throw ParameterError("preset", "preset must be 1e5, 1e6 or 1e7");
  } else if (!o.x.empty()) {
    x = parse_count("x", o.x);
  } else {
    throw ParameterError("preset", "give --preset or --x");
  }
  const u64 cap = parse_count("cap", o.cap);
  fs::create_directories(o.out);
  m.parameters = {{"x", x},           {"fns", kReportFns},    {"bins", o.hist.bins},
                  {"range", {o.hist.lo, o.hist.hi}}, {"k_max", o.hist.kmax}, {"k", o.k},
                  {"cap", cap},       {"threads", resolve_threads(c.threads)}};
  std::vector<std::string> tags;
  for (const auto& fn : kReportFns) {
    const auto tag = file_tag(fn);
    tags.push_back(tag);
    std::string stage = "ekhist";
    try {
      const auto cfg = SampleConfig::make(x, parse_fn(fn, c.shift));
      const auto s = run_sample(cfg, c.threads);
      auto [csv, js] = emit_hist(s, cfg, o.hist, o.out / (tag + "_hist.csv"));
      m.outputs.push_back(csv);
      m.outputs.push_back(js);
      stage = "moments";
      const auto mp = o.out / (tag + "_moments.json");
      write_json(mp, moments_json(s, cfg, o.hist.kmax));
      m.outputs.push_back(mp);
      stage = "hypotheses";
      const auto h = hypothesis_sums(cfg.spec, x, o.k, cfg.window, cap, c.threads);
      const auto hp = o.out / (tag + "_hypotheses.json");
      write_json(hp, hypotheses_json(h, cfg, o.k, cap));
      m.outputs.push_back(hp);
    } catch (const ParameterError&) {
      throw;
    } catch (const std::exception& e) {
      throw std::runtime_error("report stage " + stage + " (fn " + fn + ") failed: " + e.what());
    }
    out << "report: " << fn << " done\n";
  }
  const auto gp = o.out / "plot.gp";
  write_gnuplot(gp, tags, x, o.hist);
  m.outputs.push_back(gp);
}

// Flag name for a library-level parameter name.
std::string flag_for(const std::string& param) {
  if (param == "L") return "--smoothness";
  if (param == "range") return "--lo";
  if (param == "EKLAB_SEGMENT_SIZE") return param;
  return "--" + param;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prime-factor statistics of s(n) and related arithmetic functions", "eklab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  Common common;

  SieveOpts sieve;
  auto* c_sieve = app.add_subcommand("sieve", "tabulate sigma, phi, tau, omega, lpf over [lo, hi)");
  c_sieve->add_option("--lo", sieve.lo)->required();
  c_sieve->add_option("--hi", sieve.hi)->required();
  c_sieve->add_option("--out", sieve.out)->required();
  add_common(c_sieve, common);

  EkhistOpts ek;
  auto* c_ek = app.add_subcommand("ekhist", "histogram of standardized omega(f(n)) against N(0,1)");
  add_window(c_ek, ek.win);
  c_ek->add_option("--fn", ek.fn);
  c_ek->add_option("--population", ek.hist.population, "omega (sample space) or all");
  c_ek->add_option("--bins", ek.hist.bins);
  c_ek->add_option("--lo", ek.hist.lo);
  c_ek->add_option("--hi", ek.hist.hi);
  c_ek->add_option("--kmax", ek.hist.kmax);
  c_ek->add_option("--out", ek.out)->required();
  c_ek->add_option("--dump", ek.dump, "per-n record CSV");
  add_common(c_ek, common);

  MomentsOpts mo;
  auto* c_mo = app.add_subcommand("moments", "empirical vs model standardized moments");
  add_window(c_mo, mo.win);
  c_mo->add_option("--fn", mo.fn);
  c_mo->add_option("--kmax", mo.kmax);
  c_mo->add_option("--out", mo.out)->required();
  add_common(c_mo, common);

  DcountOpts dc;
  auto* c_dc = app.add_subcommand("dcount", "count n with d | f(n) two ways");
  add_window(c_dc, dc.win);
  c_dc->add_option("--fn", dc.fn);
  c_dc->add_option("--d", dc.d, "moduli (comma separated)")->delimiter(',');
  c_dc->add_option("--auto", dc.autospec, "\"k=K cap=C limit=N\"");
  c_dc->add_option("--out", dc.out)->required();
  add_common(c_dc, common);

  EqOpts eq;
  auto* c_eq = app.add_subcommand("eqerror", "max error for primes in progressions mod q up to T");
  c_eq->add_option("--q", eq.q)->required();
  c_eq->add_option("--T", eq.T)->required();
  c_eq->add_option("--out", eq.out);
  add_common(c_eq, common);

  HypOpts hy;
  auto* c_hy = app.add_subcommand("hypotheses", "the two hypothesis sums for f");
  add_window(c_hy, hy.win);
  c_hy->add_option("--fn", hy.fn);
  c_hy->add_option("--k", hy.k);
  c_hy->add_option("--cap", hy.cap);
  c_hy->add_option("--out", hy.out)->required();
  add_common(c_hy, common);

  ModelOpts sm;
  auto* c_sm = app.add_subcommand("sample-model", "Monte-Carlo draws of the Bernoulli model");
  add_window(c_sm, sm.win);
  c_sm->add_option("--trials", sm.trials);
  c_sm->add_option("--kmax", sm.kmax);
  c_sm->add_option("--out", sm.out)->required();
  add_common(c_sm, common);

  ReportOpts rp;
  auto* c_rp = app.add_subcommand("report", "bundle of ekhist, moments and hypotheses for four functions");
  c_rp->add_option("--preset", rp.preset, "1e5, 1e6 or 1e7");
  c_rp->add_option("--x", rp.x);
  c_rp->add_option("--out", rp.out, "bundle directory")->required();
  c_rp->add_option("--bins", rp.hist.bins);
  c_rp->add_option("--lo", rp.hist.lo);
  c_rp->add_option("--hi", rp.hist.hi);
  c_rp->add_option("--kmax", rp.hist.kmax);
  c_rp->add_option("--k", rp.k);
  c_rp->add_option("--cap", rp.cap);
  add_common(c_rp, common);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParameter;
  }

  RunManifest manifest;
  manifest.argv = args;
  fs::path manifest_path;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (c_sieve->parsed()) {
      manifest.subcommand = "sieve";
      run_sieve(sieve, manifest);
      manifest_path = sieve.out.string() + ".manifest.json";
    } else if (c_ek->parsed()) {
      manifest.subcommand = "ekhist";
      run_ekhist(ek, common, manifest);
      manifest_path = ek.out.string() + ".manifest.json";
    } else if (c_mo->parsed()) {
      manifest.subcommand = "moments";
      run_moments(mo, common, manifest);
      manifest_path = mo.out.string() + ".manifest.json";
    } else if (c_dc->parsed()) {
      manifest.subcommand = "dcount";
      run_dcount(dc, common, manifest, out);
      manifest_path = dc.out.string() + ".manifest.json";
    } else if (c_eq->parsed()) {
      manifest.subcommand = "eqerror";
      run_eqerror(eq, manifest, out);
      if (!eq.out.empty()) manifest_path = eq.out.string() + ".manifest.json";
    } else if (c_hy->parsed()) {
      manifest.subcommand = "hypotheses";
      run_hypotheses(hy, common, manifest);
      manifest_path = hy.out.string() + ".manifest.json";
    } else if (c_sm->parsed()) {
      manifest.subcommand = "sample-model";
      run_sample_model(sm, common, manifest);
      manifest_path = sm.out.string() + ".manifest.json";
    } else if (c_rp->parsed()) {
      manifest.subcommand = "report";
      run_report(rp, common, manifest, out);
      manifest_path = rp.out / "manifest.json";
    }
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!manifest_path.empty()) manifest.write(manifest_path);
  } catch (const ParameterError& e) {
    err << "error: " << flag_for(e.param()) << ": " << e.what() << '\n';
    return kExitParameter;
  } catch (const AssertionFailure& e) {
    err << "assertion failure: " << e.what() << '\n';
    return kExitAssertion;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitAssertion;
  }
  return kExitOk;
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace eklab::cli
