#pragma once

// Command-line front end: code listing, algebraic and delay-tolerance
// certification, product distance sweeps and Monte Carlo BER/CER runs.
//
// Exit status: 0 success, 1 certification violation, 2 usage error.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "codes.hpp"
#include "constellation.hpp"
#include "delay.hpp"
#include "fields.hpp"
#include "metrics.hpp"
#include "search.hpp"
#include "simulator.hpp"

namespace dtstc {

enum ExitStatus : int { kExitOk = 0, kExitViolation = 1, kExitUsage = 2 };

struct SnrRange {
  double start = 0, stop = 20, step = 2;

  std::vector<double> grid() const {
    if (!(step > 0) || stop < start) throw std::invalid_argument("bad SNR range");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
  friend bool operator==(const SnrRange &, const SnrRange &) = default;
};

/// "start:stop:step" in dB, or a single value.
inline SnrRange parse_snr_range(const std::string &text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (item.empty() || used != item.size()) throw std::invalid_argument("bad SNR range '" + text + "'");
    parts.push_back(v);
  }
  SnrRange r;
  if (parts.size() == 1) {
    r = {parts[0], parts[0], 1.0};
  } else if (parts.size() == 3) {
    r = {parts[0], parts[1], parts[2]};
  } else {
    throw std::invalid_argument("bad SNR range '" + text + "', expected start:stop:step");
  }
  r.grid();
  return r;
}

inline std::vector<std::string> split_list(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct RunConfig {
  std::string subcommand = "list";
  std::vector<std::string> codes;
  int q = 4;
  std::optional<int> d_max;
  std::optional<std::string> delay;  // "d1,d2,..."
  std::uint64_t budget = 1'000'000;
  std::uint64_t exhaustive_limit = 10'000'000;
  std::uint64_t seed = 1;
  SnrRange snr;
  std::string output;  // empty: stdout
  unsigned threads = 1;
  int n_r = 0;
  std::uint64_t min_errors = 100;
  std::uint64_t max_codewords = 1'000'000;

  SearchPolicy policy() const { return {budget, exhaustive_limit, seed, threads}; }
  friend bool operator==(const RunConfig &, const RunConfig &) = default;
};

inline void to_json(nlohmann::json &j, const RunConfig &c) {
  j = nlohmann::json{{"subcommand", c.subcommand},
                     {"codes", c.codes},
                     {"q", c.q},
                     {"budget", c.budget},
                     {"exhaustive_limit", c.exhaustive_limit},
                     {"seed", c.seed},
                     {"snr", {{"start", c.snr.start}, {"stop", c.snr.stop}, {"step", c.snr.step}}},
                     {"output", c.output},
                     {"threads", c.threads},
                     {"nr", c.n_r},
                     {"min_errors", c.min_errors},
                     {"max_codewords", c.max_codewords}};
  j["dmax"] = c.d_max ? nlohmann::json(*c.d_max) : nlohmann::json(nullptr);
  j["delay"] = c.delay ? nlohmann::json(*c.delay) : nlohmann::json(nullptr);
}

inline void from_json(const nlohmann::json &j, RunConfig &c) {
  RunConfig d;
  c.subcommand = j.value("subcommand", d.subcommand);
  c.codes = j.value("codes", d.codes);
  c.q = j.value("q", d.q);
  c.budget = j.value("budget", d.budget);
  c.exhaustive_limit = j.value("exhaustive_limit", d.exhaustive_limit);
  c.seed = j.value("seed", d.seed);
  if (j.contains("snr")) {
    const auto &s = j.at("snr");
    c.snr = {s.value("start", d.snr.start), s.value("stop", d.snr.stop), s.value("step", d.snr.step)};
  }
  c.output = j.value("output", d.output);
  c.threads = j.value("threads", d.threads);
  c.n_r = j.value("nr", d.n_r);
  c.min_errors = j.value("min_errors", d.min_errors);
  c.max_codewords = j.value("max_codewords", d.max_codewords);
  c.d_max = j.contains("dmax") && !j.at("dmax").is_null() ? std::optional<int>(j.at("dmax").get<int>()) : std::nullopt;
  c.delay = j.contains("delay") && !j.at("delay").is_null() ? std::optional<std::string>(j.at("delay").get<std::string>())
                                                             : std::nullopt;
}

namespace detail {

inline std::uint64_t env_seed() {
  const char *s = std::getenv("STC_SEED");
  if (!s || !*s) return 1;
  std::size_t used = 0;
  const std::string text(s);
  const auto v = std::stoull(text, &used);
  if (used != text.size()) throw std::invalid_argument("STC_SEED is not an integer");
  return v;
}

inline std::vector<DelayProfile> profiles_for(const RunConfig &cfg, const CodeSpec &code) {
  if (cfg.delay) {
    auto p = parse_delay_profile(*cfg.delay);
    if (p.size() != static_cast<std::size_t>(code.M))
      throw std::invalid_argument("delay " + p.describe() + " does not match " + code.name);
    return {p};
  }
  return enumerate_profiles(code.M, cfg.d_max.value_or(1));
}

inline int run_list(std::ostream &out) {
  for (const auto &name : code_names()) {
    const auto c = make_code(name);
    out << name << ' ' << c.M << 'x' << c.T << " k=" << c.k
        << " base=" << (c.base == BaseField::gaussian ? "gaussian" : "eisenstein")
        << (c.complex_linear ? "" : " conjugating") << '\n';
  }
  return kExitOk;
}

inline int run_certify_nvd(const RunConfig &cfg, std::ostream &out) {
  std::vector<int> sizes;
  for (int q = 4; q <= cfg.q; q *= 4) sizes.push_back(q);
  if (sizes.empty()) throw std::invalid_argument("--q must be at least 4");
  bool ok = true;
  for (const auto &name : cfg.codes) {
    const auto code = make_code(name);
    const auto reports = nvd_sweep(code, sizes, cfg.policy());
    for (const auto &r : reports) write_report(out, r);
    const bool nvd = nvd_observed(reports);
    out << "code=" << name << " nvd=" << (nvd ? "observed" : "not-observed") << '\n';
    ok = ok && nvd;
  }
  return ok ? kExitOk : kExitViolation;
}

inline int run_certify_delay(const RunConfig &cfg, std::ostream &out) {
  bool ok = true;
  for (const auto &name : cfg.codes) {
    const auto code = make_code(name);
    const auto diffs = constellation_differences(code, cfg.q);
    const auto profiles = profiles_for(cfg, code);
    const auto report = certify_delay_tolerance(code, diffs, profiles, cfg.policy());
    write_report(out, report);
    out << "code=" << name << " delay_tolerant=" << (report.passed() ? "yes" : "no")
        << " violations=" << report.total_violations() << '\n';
    ok = ok && report.passed();
  }
  return ok ? kExitOk : kExitViolation;
}

inline int run_prodist(const RunConfig &cfg, std::ostream &out) {
  bool ok = true;
  for (const auto &name : cfg.codes) {
    const auto code = make_code(name);
    if (!code.generator) throw std::invalid_argument(name + " has no lattice generator");
    const auto r = min_product_distance(*code.generator, unit_differences(code.base), cfg.policy(), name);
    write_report(out, r);
    ok = ok && r.violations == 0;
  }
  return ok ? kExitOk : kExitViolation;
}

inline int run_simulate(const RunConfig &cfg, std::ostream &out) {
  const auto grid = cfg.snr.grid();
  std::vector<SimResult> results;
  for (const auto &name : cfg.codes) {
    const auto code = make_code(name);
    SimConfig sc;
    sc.code = name;
    sc.n_r = cfg.n_r;
    sc.constellation = code.base == BaseField::gaussian ? ConstellationKind::qam : ConstellationKind::hex;
    sc.q = cfg.q;
    if (cfg.delay) sc.delay = parse_delay_profile(*cfg.delay);
    sc.snr_grid = grid;
    sc.min_errors = cfg.min_errors;
    sc.max_codewords = cfg.max_codewords;
    sc.seed = cfg.seed;
    sc.threads = cfg.threads;
    results.push_back(run_simulation(sc));
  }
  write_csv(out, results);
  return kExitOk;
}

}  // namespace detail

/// Runs an already-parsed configuration, writing to cfg.output or `out`.
inline int dispatch(const RunConfig &cfg, std::ostream &out) {
  std::ofstream file;
  std::ostream *os = &out;
  if (!cfg.output.empty()) {
    file.open(cfg.output, std::ios::out | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open " + cfg.output);
    os = &file;
  }
  if (cfg.subcommand == "list") return detail::run_list(*os);
  if (cfg.codes.empty()) throw std::invalid_argument("--code is required");
  if (cfg.subcommand == "certify-nvd") return detail::run_certify_nvd(cfg, *os);
  if (cfg.subcommand == "certify-delay") return detail::run_certify_delay(cfg, *os);
  if (cfg.subcommand == "prodist") return detail::run_prodist(cfg, *os);
  if (cfg.subcommand == "simulate") return detail::run_simulate(cfg, *os);
  throw std::invalid_argument("unknown subcommand " + cfg.subcommand);
}

/// Parses argv into a RunConfig; nullopt when help or --dump-config was served.
/// Throws CLI::ParseError or std::invalid_argument.
inline std::optional<RunConfig> parse_run_config(int argc, const char *const *argv, std::ostream &out) {
  CLI::App app{"Delay-tolerant distributed space-time code toolkit", "stc"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string codes, delay, snr, config_path;
  int q = 0, dmax = 0, nr = 0;
  std::uint64_t budget = 0, seed = 0, min_errors = 0, max_codewords = 0, exhaustive_limit = 0;
  unsigned threads = 0;
  std::string output;
  bool dump_config = false;

  std::vector<CLI::App *> subs;
  subs.push_back(app.add_subcommand("list", "List registered codes"));
  subs.push_back(app.add_subcommand("certify-nvd", "Minimum determinant for 4-QAM/HEX up to --q"));
  subs.push_back(app.add_subcommand("certify-delay", "Rank of shifted difference codewords"));
  subs.push_back(app.add_subcommand("prodist", "Minimum product distance of the lattice generator"));
  subs.push_back(app.add_subcommand("simulate", "Monte Carlo BER/CER sweep, CSV output"));
  for (auto *s : subs) {
    s->add_option("--config", config_path, "JSON RunConfig; explicit flags override it");
    s->add_option("--output,-o", output, "Output path, overwritten");
    s->add_flag("--dump-config", dump_config, "Print the resolved RunConfig as JSON and exit");
    if (s->get_name() == "list") continue;
    s->add_option("--code,-c", codes, "Comma-separated code names");
    s->add_option("--q", q, "Constellation size")->check(CLI::IsMember({4, 16, 64, 256}));
    s->add_option("--budget", budget, "Random samples when not exhaustive");
    s->add_option("--exhaustive-limit", exhaustive_limit, "Largest space searched exhaustively");
    s->add_option("--seed", seed, "Seed (default: STC_SEED, else 1)");
    s->add_option("--threads", threads, "Worker cap")->check(CLI::Range(1u, 1024u));
    if (s->get_name() == "certify-delay" || s->get_name() == "simulate") {
      auto *d = s->add_option("--delay", delay, "Delay profile d1,d2,...");
      if (s->get_name() == "certify-delay") s->add_option("--dmax", dmax, "Enumerate all profiles up to d_max")->excludes(d);
    }
    if (s->get_name() == "simulate") {
      s->add_option("--snr", snr, "Eb/N0 grid start:stop:step in dB");
      s->add_option("--nr", nr, "Receive antennas (default 2 for 2x2 codes, else M)");
      s->add_option("--min-errors", min_errors, "Codeword errors per SNR point");
      s->add_option("--max-codewords", max_codewords, "Codeword cap per SNR point");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    app.exit(e, out, out);
    return std::nullopt;
  }

  CLI::App *sub = nullptr;
  for (auto *s : subs)
    if (s->parsed()) sub = s;

  RunConfig cfg;
  if (sub->count("--config")) {
    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("cannot read " + config_path);
    cfg = nlohmann::json::parse(in).get<RunConfig>();
  } else {
    cfg.seed = detail::env_seed();
  }
  cfg.subcommand = sub->get_name();
  auto given = [&](const char *flag) { return sub->get_option_no_throw(flag) && sub->count(flag) > 0; };
  if (given("--code")) cfg.codes = split_list(codes);
  if (given("--q")) cfg.q = q;
  if (given("--dmax")) cfg.d_max = dmax;
  if (given("--delay")) cfg.delay = delay;
  if (given("--dmax")) cfg.delay.reset();
  if (given("--delay")) cfg.d_max.reset();
  if (given("--budget")) cfg.budget = budget;
  if (given("--exhaustive-limit")) cfg.exhaustive_limit = exhaustive_limit;
  if (given("--seed")) cfg.seed = seed;
  if (given("--threads")) cfg.threads = threads;
  if (given("--snr")) cfg.snr = parse_snr_range(snr);
  if (given("--nr")) cfg.n_r = nr;
  if (given("--min-errors")) cfg.min_errors = min_errors;
  if (given("--max-codewords")) cfg.max_codewords = max_codewords;
  if (given("--output")) cfg.output = output;

  for (const auto &c : cfg.codes) make_code(c);
  if (cfg.delay) parse_delay_profile(*cfg.delay);
  if (cfg.min_errors < 1) throw std::invalid_argument("--min-errors must be at least 1");

  if (dump_config) {
    out << nlohmann::json(cfg).dump(2) << '\n';
    return std::nullopt;
  }
  return cfg;
}

inline int parse_and_dispatch(int argc, const char *const *argv, std::ostream &out = std::cout,
                              std::ostream &err = std::cerr) {
  std::optional<RunConfig> cfg;
  try {
    cfg = parse_run_config(argc, argv, out);
    if (!cfg) return kExitOk;
    return dispatch(*cfg, out);
  } catch (const std::exception &e) {
    err << "stc: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace dtstc
