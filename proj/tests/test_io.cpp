#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "extauction/instance_io.hpp"
#include "extauction/report.hpp"
#include "support.hpp"

using namespace extauction;
using namespace testing_support;

namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = EXTAUCTION_FIXTURE_DIR;

fs::path scratch_dir(const std::string &name)
{
  const fs::path dir = fs::temp_directory_path() / ("extauction_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void expect_same_values(const ValuationProfile &a, const ValuationProfile &b)
{
  ASSERT_EQ(a.n(), b.n());
  for (AgentId i = 0; i < a.n(); ++i)
  {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << a.n()); ++mask)
    {
      EXPECT_EQ(a.value(i, WinnerSet(mask)), b.value(i, WinnerSet(mask)));
    }
  }
}

ExperimentReport sample_report()
{
  ExperimentReport r;
  r.name = "sample";
  r.seed = 17;
  r.columns = {"id", "value", "ok"};
  r.add_row({std::string("a"), 1.0 / 3.0, true});
  r.add_row({std::string("b"), std::int64_t{4}, false});
  r.set_summary("violations", std::int64_t{0});
  return r;
}

}  // namespace

TEST(InstanceIo, LoadsFixture)
{
  const ValuationProfile p = load_instance(kFixtures / "additive_valid.json");
  ASSERT_EQ(p.n(), 4u);
  // t + w(|S|) for agent 1 in {0, 1, 3}
  EXPECT_DOUBLE_EQ(p.value(1, WinnerSet{0, 1, 3}), 5.5 + 1.4);
  EXPECT_DOUBLE_EQ(p.value(1, WinnerSet{0, 3}), 0.0);
}

TEST(InstanceIo, RoundTripPreservesValues)
{
  RandomSource rng(61);
  const fs::path dir = scratch_dir("roundtrip");
  for (int trial = 0; trial < 40; ++trial)
  {
    const ValuationProfile p = gen_instance(random_generator_config(1 + rng.below(6), rng));
    const fs::path path = dir / ("p" + std::to_string(trial) + ".json");
    save_instance(p, path);
    const ValuationProfile q = load_instance(path);
    expect_same_values(p, q);
    EXPECT_EQ(instance_hash(p), instance_hash(q));
    EXPECT_EQ(instance_to_json(p), instance_to_json(q));
  }
  fs::remove_all(dir);
}

TEST(InstanceIo, HashIsStableAndDiscriminates)
{
  const ValuationProfile p = load_instance(kFixtures / "additive_valid.json");
  const std::string h = instance_hash(p);
  EXPECT_EQ(h.size(), 16u);
  EXPECT_EQ(h, instance_hash(parse_instance(instance_to_json(p, -1))));
  const ValuationProfile other = parse_instance(
      R"({"schema":1,"n":1,"agents":[{"model":"table","values":[0,2]}]})");
  EXPECT_NE(h, instance_hash(other));
}

TEST(InstanceIo, RejectsUnknownFields)
{
  EXPECT_THROW(parse_instance(R"({"schema":1,"n":1,"colour":"red","agents":[{"model":"table","values":[0,2]}]})"),
               InputError);
  EXPECT_THROW(parse_instance(R"({"schema":1,"n":1,"agents":[{"model":"table","values":[0,2],"x":1}]})"),
               InputError);
}

TEST(InstanceIo, RejectsMalformedDocuments)
{
  EXPECT_THROW(parse_instance(R"({"schema":2,"n":1,"agents":[{"model":"table","values":[0,2]}]})"), InputError);
  EXPECT_THROW(parse_instance(R"({"schema":1,"n":2,"agents":[{"model":"table","values":[0,2]}]})"), InputError);
  EXPECT_THROW(parse_instance(R"({"schema":1,"n":1,"agents":[{"model":"cubic","t":1}]})"), InputError);
  EXPECT_THROW(parse_instance("{not json"), InputError);
  EXPECT_THROW(load_instance(kFixtures / "does_not_exist.json"), InputError);
}

TEST(InstanceIo, ConditionErrorNamesWitness)
{
  try
  {
    load_instance(kFixtures / "table_not_monotone.json");
    FAIL() << "expected ConditionError";
  }
  catch (const ConditionError &e)
  {
    ASSERT_FALSE(e.violations().empty());
    const ConditionViolation &v = e.violations().front();
    EXPECT_EQ(v.kind, ConditionViolation::Kind::NonMonotone);
    EXPECT_EQ(v.agent, 0u);
    EXPECT_EQ(v.s, WinnerSet{0});
    EXPECT_EQ(v.r, (WinnerSet{0, 1}));
    EXPECT_NE(std::string(e.what()).find("table_not_monotone.json"), std::string::npos);
  }
  EXPECT_NO_THROW(load_instance(kFixtures / "table_not_monotone.json", false));
}

TEST(ConfigIo, LoadsFixtureAndRejectsUnknownKeys)
{
  const ExperimentConfig c = load_experiment_config(kFixtures / "experiment_small.json");
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.suite.count, 24u);
  ASSERT_TRUE(c.campaign.has_value());
  EXPECT_EQ(c.campaign->sizes, std::vector<std::size_t>{12});
  EXPECT_THROW(parse_experiment_config(R"({"schema":1,"seeed":3})"), InputError);
  EXPECT_THROW(parse_experiment_config(R"({"schema":1,"suite":{"n_max":11}})"), InputError);
  EXPECT_THROW(parse_experiment_config(R"({"schema":1,"suite":{"families":["cubic"]}})"), InputError);
}

TEST(Report, NumberFormatting)
{
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(1e20), "1e+20");
  EXPECT_EQ(format_number(INFINITY), "inf");
  EXPECT_EQ(format_cell(Cell{true}), "true");
  EXPECT_EQ(format_cell(Cell{std::int64_t{-3}}), "-3");
}

TEST(Report, CsvAndJson)
{
  const ExperimentReport r = sample_report();
  EXPECT_EQ(to_csv(r), "id,value,ok\na,0.333333333333,true\nb,4,false\n");
  const std::string json = to_json(r);
  EXPECT_NE(json.find("\"schema\""), std::string::npos);
  EXPECT_NE(json.find("\"seed\": 17"), std::string::npos);
  EXPECT_NE(json.find("\"violations\": 0"), std::string::npos);
  EXPECT_EQ(json, to_json(sample_report()));
}

TEST(Report, EmptyReportIsHeaderOnly)
{
  ExperimentReport r;
  r.name = "empty";
  r.columns = {"a", "b"};
  EXPECT_EQ(to_csv(r), "a,b\n");
}

TEST(Report, RowWidthIsChecked)
{
  ExperimentReport r = sample_report();
  EXPECT_THROW(r.add_row({std::string("short")}), std::invalid_argument);
}

TEST(Report, EmitWritesAndNamesPathOnFailure)
{
  const fs::path dir = scratch_dir("emit");
  const ExperimentReport r = sample_report();
  emit_report(r, ReportFormat::Csv, dir / "sample.csv");
  std::ifstream in(dir / "sample.csv");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, to_csv(r));
  const fs::path bad = dir / "missing" / "sub" / "x.csv";
  try
  {
    emit_report(r, ReportFormat::Json, bad);
    FAIL() << "expected runtime_error";
  }
  catch (const std::runtime_error &e)
  {
    EXPECT_NE(std::string(e.what()).find("x.csv"), std::string::npos);
  }
  fs::remove_all(dir);
}
