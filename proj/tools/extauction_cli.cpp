// Command-line front end: validates instances, computes benchmarks, runs mechanisms,
// verifies truthfulness and runs experiment campaigns.
//
// Exit codes: 0 success, 1 a checked property failed, 2 usage or input error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "extauction/benchmark.hpp"
#include "extauction/experiments.hpp"
#include "extauction/instance_io.hpp"
#include "extauction/mechanisms.hpp"
#include "extauction/report.hpp"
#include "extauction/truthfulness.hpp"
#include "extauction/valuations.hpp"

using namespace extauction;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct Options
{
  std::string instance;
  std::string mechanism;
  std::string method = "sweep";
  std::string out;
  std::string config;
  std::string format = "csv";
  std::uint64_t seed = 0;
  std::size_t k = 3;
  double price = -1.0;
  double alpha = kDefaultAlpha;
  double L = 0.0;
  std::size_t misreports = 1000;
  std::size_t realizations = 16;
  bool exhaustive = false;
  std::vector<double> ms = {1, 10, 100, 1000, 10000};
};

ordered_json set_json(WinnerSet s)
{
  ordered_json out = ordered_json::array();
  for (AgentId i : s)
  {
    out.push_back(i);
  }
  return out;
}

/// Doubles as JSON numbers, non-finite values as strings.
ordered_json number_json(double x)
{
  if (!std::isfinite(x))
  {
    return format_number(x);
  }
  return x;
}

void write_output(const std::string &text, const std::string &path)
{
  if (path.empty())
  {
    std::cout << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file)
  {
    throw InputError("cannot open '" + path + "' for writing");
  }
  file << text;
  file.flush();
  if (!file)
  {
    throw InputError("failed writing '" + path + "'");
  }
}

ordered_json header(const char *command)
{
  ordered_json doc;
  doc["schema"] = kSchemaVersion;
  doc["command"] = command;
  return doc;
}

int cmd_check(const Options &o)
{
  const ValuationProfile profile = load_instance(o.instance, false);
  CheckOptions options = default_check_options(profile.n());
  options.L = o.L > 0.0 ? o.L : profile.declared_L().value_or(1.0);
  options.seed = o.seed;
  const std::vector<ConditionViolation> violations = check_conditions(profile, options);

  ordered_json doc = header("check");
  doc["instance"] = o.instance;
  doc["instance_hash"] = instance_hash(profile);
  doc["seed"] = o.seed;
  doc["n"] = profile.n();
  doc["mode"] = options.mode == CheckOptions::Mode::Exhaustive ? "exhaustive" : "sampled";
  doc["L"] = options.L;
  doc["estimated_L"] = number_json(estimate_L(profile, options));
  doc["valid"] = violations.empty();
  ordered_json list = ordered_json::array();
  for (const ConditionViolation &v : violations)
  {
    list.push_back(v.describe());
  }
  doc["violations"] = list;
  write_output(doc.dump(2) + "\n", o.out);
  return violations.empty() ? kExitOk : kExitViolation;
}

int cmd_benchmark(const Options &o)
{
  const ValuationProfile profile = load_instance(o.instance);
  const CountingOracle counted(profile);
  const BenchmarkResult r = o.method == "brute" ? benchmark_bruteforce(counted, o.k) : benchmark_sweep(counted, o.k);
  ordered_json doc = header("benchmark");
  doc["instance_hash"] = instance_hash(profile);
  doc["k"] = o.k;
  doc["method"] = o.method;
  doc["value"] = r.value;
  doc["price"] = number_json(r.price);
  doc["set"] = set_json(r.set);
  doc["queries"] = counted.queries();
  write_output(doc.dump(2) + "\n", o.out);
  return kExitOk;
}

ordered_json outcome_json(const Outcome &outcome)
{
  ordered_json doc;
  doc["winners"] = set_json(outcome.winners);
  doc["payments"] = outcome.payments;
  doc["revenue"] = outcome.revenue;
  doc["queries"] = outcome.queries_used;
  return doc;
}

double required_price(const Options &o)
{
  if (!(o.price >= 0.0))
  {
    throw CLI::ValidationError("--price", "a nonnegative --price is required for " + o.mechanism);
  }
  return o.price;
}

int cmd_run(const Options &o)
{
  const ValuationProfile profile = load_instance(o.instance);
  ordered_json doc = header("run");
  doc["mechanism"] = o.mechanism;
  doc["seed"] = o.seed;
  doc["instance_hash"] = instance_hash(profile);
  RandomSource rng(o.seed);
  Outcome outcome;
  if (o.mechanism == "main")
  {
    const Partition3 partition = Partition3::sample(profile.n(), rng);
    std::string labels;
    for (Label l : partition.labels())
    {
      labels += "ABC"[static_cast<int>(l)];
    }
    doc["labels"] = labels;
    doc["target"] = cost_share_target(profile, partition).target();
    outcome = main_mechanism(profile, partition);
  }
  else if (o.mechanism == "fixed-price")
  {
    doc["price"] = required_price(o);
    outcome = fixed_price_mechanism(profile, o.price);
  }
  else
  {
    doc["alpha"] = o.alpha;
    outcome = mechanism2(profile, o.alpha, Rsop(), rng);
  }
  doc["outcome"] = outcome_json(outcome);
  write_output(doc.dump(2) + "\n", o.out);
  return kExitOk;
}

int cmd_expect(const Options &o)
{
  const ValuationProfile profile = load_instance(o.instance);
  ordered_json doc = header("expect");
  doc["mechanism"] = o.mechanism;
  doc["instance_hash"] = instance_hash(profile);
  if (o.mechanism == "main")
  {
    const double expected = main_mechanism_exact_expectation(profile);
    const double f3 = profile.n() <= kMaxBruteForceAgents ? benchmark_bruteforce(profile, 3).value
                                                         : benchmark_sweep(profile, 3).value;
    doc["expected_revenue"] = expected;
    doc["f3"] = f3;
    doc["bound"] = f3 / 324.0;
    doc["meets_bound"] = expected >= f3 / 324.0 - kTolerance;
    write_output(doc.dump(2) + "\n", o.out);
    return expected >= f3 / 324.0 - kTolerance ? kExitOk : kExitViolation;
  }
  doc["alpha"] = o.alpha;
  doc["expected_revenue"] = mechanism2_exact_expectation(profile, o.alpha, Rsop());
  doc["f2"] = benchmark_sweep(profile, 2).value;
  write_output(doc.dump(2) + "\n", o.out);
  return kExitOk;
}

int cmd_verify(const Options &o)
{
  const ValuationProfile profile = load_instance(o.instance);
  std::vector<Realization> realizations;
  std::vector<double> prices;
  if (o.price >= 0.0)
  {
    prices.push_back(o.price);
  }
  else
  {
    prices = candidate_prices(profile, o.realizations, derive_seed({o.seed, 1}));
  }
  if (o.mechanism == "main")
  {
    realizations = main_mechanism_realizations(profile.n(), o.realizations, o.seed, o.exhaustive);
  }
  else if (o.mechanism == "fixed-price")
  {
    realizations = fixed_price_realizations(prices);
  }
  else if (o.mechanism == "broken")
  {
    realizations = pay_your_bid_realizations(prices);
  }
  else
  {
    realizations = mechanism2_realizations(profile, o.alpha, o.realizations, o.seed);
  }

  const std::size_t count = o.misreports;
  const std::uint64_t seed = o.seed;
  DeviationPlan plan;
  plan.misreports = [count, seed](const ValuationProfile &truth, AgentId i) {
    return structured_misreports(truth, i, count, derive_seed({seed, 2, i}));
  };
  const DeviationReport report = deviation_test(realizations, profile, plan);

  ordered_json doc = header("verify");
  doc["mechanism"] = o.mechanism;
  doc["seed"] = o.seed;
  doc["instance_hash"] = instance_hash(profile);
  doc["realizations"] = realizations.size();
  doc["checks"] = report.checks;
  doc["violations"] = report.violations.size();
  ordered_json examples = ordered_json::array();
  for (std::size_t j = 0; j < report.violations.size() && j < 10; ++j)
  {
    examples.push_back(report.violations[j].describe());
  }
  doc["examples"] = examples;
  write_output(doc.dump(2) + "\n", o.out);
  return report.violations.empty() ? kExitOk : kExitViolation;
}

/// A report fails if a violation/failure counter is positive or a boolean summary entry is false.
bool report_passes(const ExperimentReport &report)
{
  for (const auto &[key, value] : report.summary)
  {
    const bool counter = key.ends_with("violations") || key.ends_with("failures");
    if (counter && std::holds_alternative<std::int64_t>(value) && std::get<std::int64_t>(value) > 0)
    {
      return false;
    }
    if (std::holds_alternative<bool>(value) && !std::get<bool>(value))
    {
      return false;
    }
  }
  return true;
}

int cmd_experiment(const Options &o)
{
  const ExperimentConfig config = load_experiment_config(o.config);
  const std::filesystem::path dir = o.out;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
  {
    throw InputError("cannot create '" + dir.string() + "': " + ec.message());
  }
  bool ok = true;
  for (const ExperimentReport &report : run_experiments(config))
  {
    emit_report(report, ReportFormat::Csv, dir / (report.name + ".csv"));
    emit_report(report, ReportFormat::Json, dir / (report.name + ".json"));
    const bool passed = report_passes(report);
    ok = ok && passed;
    std::cout << report.name << ": " << report.rows.size() << " rows, " << (passed ? "pass" : "FAIL") << "\n";
  }
  return ok ? kExitOk : kExitViolation;
}

int cmd_demo_f2(const Options &o)
{
  ExperimentReport report = f2_impossibility_demo(o.ms);
  write_output(o.format == "json" ? to_json(report) : to_csv(report), o.out);
  return report_passes(report) ? kExitOk : kExitViolation;
}

int cmd_demo_losing_value(const Options &o)
{
  const LosingValueDemo demo = losing_value_demo();
  write_output(demo.narrative, o.out);
  return !demo.invalid_violations.empty() && demo.valid_violations.empty() ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Competitive auctions with positive externalities"};
  app.require_subcommand(1);
  Options o;
  int (*action)(const Options &) = nullptr;

  auto *check = app.add_subcommand("check", "Validate an instance against the valuation conditions");
  check->add_option("--instance", o.instance, "Instance file")->required();
  check->add_option("--L", o.L, "Subadditivity relaxation (default: declared_L or 1)");
  check->add_option("--seed", o.seed, "Seed for sampled checks");
  check->add_option("--out", o.out, "Write the result here instead of stdout");
  check->callback([&] { action = cmd_check; });

  auto *bench = app.add_subcommand("benchmark", "Compute F^(k)");
  bench->add_option("--instance", o.instance, "Instance file")->required();
  bench->add_option("--k", o.k, "Minimum number of winners")->check(CLI::Range(1, 3));
  bench->add_option("--method", o.method, "brute or sweep")->check(CLI::IsMember({"brute", "sweep"}));
  bench->add_option("--out", o.out, "Write the result here instead of stdout");
  bench->callback([&] { action = cmd_benchmark; });

  auto *run = app.add_subcommand("run", "Run one mechanism once");
  run->add_option("--mechanism", o.mechanism, "main, fixed-price or mechanism2")
      ->required()
      ->check(CLI::IsMember({"main", "fixed-price", "mechanism2"}));
  run->add_option("--instance", o.instance, "Instance file")->required();
  run->add_option("--seed", o.seed, "Random seed")->required();
  run->add_option("--price", o.price, "Price for fixed-price");
  run->add_option("--alpha", o.alpha, "Plug-in ratio for mechanism2")->check(CLI::PositiveNumber);
  run->add_option("--out", o.out, "Write the result here instead of stdout");
  run->callback([&] { action = cmd_run; });

  auto *expect = app.add_subcommand("expect", "Exact expected revenue");
  expect->add_option("--instance", o.instance, "Instance file")->required();
  o.mechanism = "main";
  expect->add_option("--mechanism", o.mechanism, "main or mechanism2")
      ->check(CLI::IsMember({"main", "mechanism2"}));
  expect->add_option("--alpha", o.alpha, "Plug-in ratio for mechanism2")->check(CLI::PositiveNumber);
  expect->add_option("--out", o.out, "Write the result here instead of stdout");
  expect->callback([&] { action = cmd_expect; });

  auto *verify = app.add_subcommand("verify", "Search for profitable misreports");
  verify->add_option("--mechanism", o.mechanism, "main, fixed-price, mechanism2 or broken")
      ->required()
      ->check(CLI::IsMember({"main", "fixed-price", "mechanism2", "broken"}));
  verify->add_option("--instance", o.instance, "Instance file")->required();
  verify->add_option("--seed", o.seed, "Random seed");
  verify->add_option("--price", o.price, "Single price for fixed-price and broken");
  verify->add_option("--alpha", o.alpha, "Plug-in ratio for mechanism2")->check(CLI::PositiveNumber);
  verify->add_option("--misreports", o.misreports, "Misreports per agent");
  verify->add_option("--realizations", o.realizations, "Fixed random strings (or prices) to test");
  verify->add_flag("--exhaustive", o.exhaustive, "main: test every label assignment");
  verify->add_option("--out", o.out, "Write the result here instead of stdout");
  verify->callback([&] { action = cmd_verify; });

  auto *experiment = app.add_subcommand("experiment", "Run an experiment configuration");
  experiment->add_option("--config", o.config, "Configuration file")->required();
  experiment->add_option("--out", o.out, "Output directory")->required();
  experiment->callback([&] { action = cmd_experiment; });

  auto *demo = app.add_subcommand("demo", "Small demonstrations");
  demo->require_subcommand(1);
  auto *f2 = demo->add_subcommand("f2", "Two-agent family against F^(2)");
  f2->add_option("--M", o.ms, "Values of M")->check(CLI::Range(1.0, 1e300));
  f2->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  f2->add_option("--out", o.out, "Write the table here instead of stdout");
  f2->callback([&] { action = cmd_demo_f2; });
  auto *losing = demo->add_subcommand("losing-value", "Valuations that stay positive when losing");
  losing->add_option("--out", o.out, "Write the text here instead of stdout");
  losing->callback([&] { action = cmd_demo_losing_value; });

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try
  {
    return action(o);
  }
  catch (const std::exception &e)
  {
    // input errors, condition failures on load and out-of-range requests
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
