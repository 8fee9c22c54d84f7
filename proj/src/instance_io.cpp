#include "extauction/instance_io.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace extauction {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

/// Throws unless every key of `object` is in `allowed`.
void require_known_fields(const json &object, std::initializer_list<const char *> allowed, const std::string &where)
{
  if (!object.is_object())
  {
    throw InputError(where + ": expected an object");
  }
  for (const auto &item : object.items())
  {
    bool known = false;
    for (const char *name : allowed)
    {
      known = known || item.key() == name;
    }
    if (!known)
    {
      throw InputError(where + ": unknown field '" + item.key() + "'");
    }
  }
}

const json &field(const json &object, const char *name, const std::string &where)
{
  const auto it = object.find(name);
  if (it == object.end())
  {
    throw InputError(where + ": missing field '" + name + "'");
  }
  return *it;
}

double number(const json &object, const char *name, const std::string &where)
{
  const json &v = field(object, name, where);
  if (!v.is_number())
  {
    throw InputError(where + "." + name + ": expected a number");
  }
  return v.get<double>();
}

std::uint64_t unsigned_integer(const json &v, const std::string &where)
{
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
  {
    throw InputError(where + ": expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

bool boolean(const json &v, const std::string &where)
{
  if (!v.is_boolean())
  {
    throw InputError(where + ": expected true or false");
  }
  return v.get<bool>();
}

std::string text(const json &v, const std::string &where)
{
  if (!v.is_string())
  {
    throw InputError(where + ": expected a string");
  }
  return v.get<std::string>();
}

std::vector<double> numbers(const json &v, const std::string &where)
{
  if (!v.is_array())
  {
    throw InputError(where + ": expected an array of numbers");
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const json &x : v)
  {
    if (!x.is_number())
    {
      throw InputError(where + ": expected an array of numbers");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

void check_schema(const json &doc, const std::string &where)
{
  const json &schema = field(doc, "schema", where);
  if (!schema.is_number_integer() || schema.get<std::int64_t>() != kInstanceSchemaVersion)
  {
    throw InputError(where + ": unsupported schema version " + schema.dump() + " (expected 1)");
  }
}

SetWeight parse_weight(const json &v, const std::string &where)
{
  require_known_fields(v, {"kind", "values"}, where);
  const std::string kind = text(field(v, "kind", where), where + ".kind");
  std::vector<double> values = numbers(field(v, "values", where), where + ".values");
  if (kind == "table")
  {
    return SetWeight::table(std::move(values));
  }
  if (kind == "cardinality")
  {
    return SetWeight::cardinality(std::move(values));
  }
  throw InputError(where + ".kind: expected 'table' or 'cardinality', got '" + kind + "'");
}

AgentModel parse_agent(const json &v, const std::string &where)
{
  if (!v.is_object())
  {
    throw InputError(where + ": expected an object");
  }
  const std::string model = text(field(v, "model", where), where + ".model");
  if (model == "table")
  {
    require_known_fields(v, {"model", "values"}, where);
    return TableValuation{numbers(field(v, "values", where), where + ".values")};
  }
  if (model == "additive")
  {
    require_known_fields(v, {"model", "t", "w"}, where);
    return AdditiveValuation{number(v, "t", where), parse_weight(field(v, "w", where), where + ".w")};
  }
  if (model == "scalar")
  {
    require_known_fields(v, {"model", "t", "w"}, where);
    return ScalarValuation{number(v, "t", where), parse_weight(field(v, "w", where), where + ".w")};
  }
  if (model == "linear")
  {
    require_known_fields(v, {"model", "t", "w", "w_offset"}, where);
    return LinearValuation{number(v, "t", where), parse_weight(field(v, "w", where), where + ".w"),
                           parse_weight(field(v, "w_offset", where), where + ".w_offset")};
  }
  if (model == "graph_concave")
  {
    require_known_fields(v, {"model", "t", "beta", "shape", "neighbors"}, where);
    GraphConcaveValuation out;
    out.t = number(v, "t", where);
    out.beta = number(v, "beta", where);
    try
    {
      out.shape = parse_shape(text(field(v, "shape", where), where + ".shape"));
    }
    catch (const std::invalid_argument &e)
    {
      throw InputError(where + ".shape: " + e.what());
    }
    const json &neighbors = field(v, "neighbors", where);
    if (!neighbors.is_array())
    {
      throw InputError(where + ".neighbors: expected an array of agent ids");
    }
    for (const json &j : neighbors)
    {
      const std::uint64_t id = unsigned_integer(j, where + ".neighbors");
      if (id >= kMaxAgents)
      {
        throw InputError(where + ".neighbors: agent id " + std::to_string(id) + " out of range");
      }
      out.neighbors.insert(static_cast<AgentId>(id));
    }
    return out;
  }
  throw InputError(where + ".model: unknown model '" + model + "'");
}

ordered_json weight_json(const SetWeight &w)
{
  ordered_json out;
  out["kind"] = w.kind() == SetWeight::Kind::Table ? "table" : "cardinality";
  out["values"] = w.values();
  return out;
}

ordered_json agent_json(const AgentModel &model)
{
  ordered_json out;
  out["model"] = model_name(model);
  std::visit(
      [&out](const auto &m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, TableValuation>)
        {
          out["values"] = m.values;
        }
        else if constexpr (std::is_same_v<T, GraphConcaveValuation>)
        {
          out["t"] = m.t;
          out["beta"] = m.beta;
          out["shape"] = shape_name(m.shape);
          ordered_json neighbors = ordered_json::array();
          for (AgentId j : m.neighbors)
          {
            neighbors.push_back(j);
          }
          out["neighbors"] = neighbors;
        }
        else
        {
          out["t"] = m.t;
          out["w"] = weight_json(m.w);
          if constexpr (std::is_same_v<T, LinearValuation>)
          {
            out["w_offset"] = weight_json(m.w_offset);
          }
        }
      },
      model);
  return out;
}

json parse_document(std::string_view content, const std::string &where)
{
  try
  {
    return json::parse(content.begin(), content.end());
  }
  catch (const json::parse_error &e)
  {
    throw InputError(where + ": invalid JSON: " + e.what());
  }
}

GraphKind parse_graph_kind(const std::string &name, const std::string &where)
{
  if (name == "erdos_renyi")
  {
    return GraphKind::ErdosRenyi;
  }
  if (name == "preferential_attachment")
  {
    return GraphKind::PreferentialAttachment;
  }
  throw InputError(where + ": expected 'erdos_renyi' or 'preferential_attachment', got '" + name + "'");
}

ModelFamily family(const json &v, const std::string &where)
{
  try
  {
    return parse_family(text(v, where));
  }
  catch (const std::invalid_argument &e)
  {
    throw InputError(where + ": " + e.what());
  }
}

std::vector<std::size_t> sizes(const json &v, const std::string &where)
{
  if (!v.is_array())
  {
    throw InputError(where + ": expected an array of integers");
  }
  std::vector<std::size_t> out;
  for (const json &x : v)
  {
    out.push_back(static_cast<std::size_t>(unsigned_integer(x, where)));
  }
  return out;
}

}  // namespace

std::string read_text_file(const std::filesystem::path &path)
{
  std::ifstream file(path, std::ios::binary);
  if (!file)
  {
    throw InputError("cannot read '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

ValuationProfile parse_instance(std::string_view content)
{
  const std::string where = "instance";
  const json doc = parse_document(content, where);
  require_known_fields(doc, {"schema", "n", "declared_L", "agents"}, where);
  check_schema(doc, where);
  const std::uint64_t n = unsigned_integer(field(doc, "n", where), where + ".n");
  const json &agents = field(doc, "agents", where);
  if (!agents.is_array())
  {
    throw InputError(where + ".agents: expected an array");
  }
  if (agents.size() != n)
  {
    throw InputError(where + ": n = " + std::to_string(n) + " but " + std::to_string(agents.size()) +
                     " agents are listed");
  }
  std::vector<AgentModel> models;
  for (std::size_t i = 0; i < agents.size(); ++i)
  {
    models.push_back(parse_agent(agents[i], where + ".agents[" + std::to_string(i) + "]"));
  }
  std::optional<double> declared_L;
  if (doc.contains("declared_L"))
  {
    declared_L = number(doc, "declared_L", where);
  }
  try
  {
    return ValuationProfile(std::move(models), declared_L);
  }
  catch (const std::invalid_argument &e)
  {
    throw InputError(where + ": " + e.what());
  }
}

ValuationProfile load_instance(const std::filesystem::path &path, bool validate)
{
  const std::string content = read_text_file(path);
  ValuationProfile profile = [&] {
    try
    {
      return parse_instance(content);
    }
    catch (const InputError &e)
    {
      throw InputError(path.string() + ": " + e.what());
    }
  }();
  if (!validate)
  {
    return profile;
  }
  CheckOptions options = default_check_options(profile.n());
  options.L = profile.declared_L().value_or(1.0);
  options.max_violations = 10;
  std::vector<ConditionViolation> violations = check_conditions(profile, options);
  if (!violations.empty())
  {
    std::string message = path.string() + ": valuation conditions fail: " + violations.front().describe();
    if (violations.size() > 1)
    {
      message += " (and " + std::to_string(violations.size() - 1) + " more)";
    }
    throw ConditionError(message, std::move(violations));
  }
  return profile;
}

std::string instance_to_json(const ValuationProfile &profile, int indent)
{
  ordered_json doc;
  doc["schema"] = kInstanceSchemaVersion;
  doc["n"] = profile.n();
  if (profile.declared_L())
  {
    doc["declared_L"] = *profile.declared_L();
  }
  ordered_json agents = ordered_json::array();
  for (const AgentModel &model : profile.agents())
  {
    agents.push_back(agent_json(model));
  }
  doc["agents"] = agents;
  return indent < 0 ? doc.dump() : doc.dump(indent) + "\n";
}

void save_instance(const ValuationProfile &profile, const std::filesystem::path &path)
{
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file)
  {
    throw InputError("cannot open '" + path.string() + "' for writing");
  }
  file << instance_to_json(profile);
  file.flush();
  if (!file)
  {
    throw InputError("failed writing '" + path.string() + "'");
  }
}

std::string instance_hash(const ValuationProfile &profile)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : instance_to_json(profile, -1))
  {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

ExperimentConfig parse_experiment_config(std::string_view content)
{
  const std::string where = "config";
  const json doc = parse_document(content, where);
  require_known_fields(doc, {"schema", "seed", "suite", "theorem2", "lemma2", "lemma3", "lemma3_max_m", "mechanism2",
                             "alpha", "m_values", "campaign"},
                       where);
  check_schema(doc, where);
  ExperimentConfig config;
  config.seed = unsigned_integer(field(doc, "seed", where), where + ".seed");
  config.suite.seed = config.seed;

  if (doc.contains("suite"))
  {
    const json &s = doc["suite"];
    const std::string w = where + ".suite";
    require_known_fields(s, {"count", "n_min", "n_max", "families", "seed"}, w);
    if (s.contains("count"))
      config.suite.count = unsigned_integer(s["count"], w + ".count");
    if (s.contains("n_min"))
      config.suite.n_min = unsigned_integer(s["n_min"], w + ".n_min");
    if (s.contains("n_max"))
      config.suite.n_max = unsigned_integer(s["n_max"], w + ".n_max");
    if (s.contains("seed"))
      config.suite.seed = unsigned_integer(s["seed"], w + ".seed");
    if (s.contains("families"))
    {
      if (!s["families"].is_array() || s["families"].empty())
      {
        throw InputError(w + ".families: expected a nonempty array of family names");
      }
      config.suite.families.clear();
      for (const json &f : s["families"])
      {
        config.suite.families.push_back(family(f, w + ".families"));
      }
    }
    if (config.suite.n_min == 0 || config.suite.n_max < config.suite.n_min ||
        config.suite.n_max > kMaxExactExpectationAgents)
    {
      throw InputError(w + ": need 1 <= n_min <= n_max <= 10");
    }
  }
  if (doc.contains("theorem2"))
    config.theorem2 = boolean(doc["theorem2"], where + ".theorem2");
  if (doc.contains("lemma2"))
    config.lemma2 = boolean(doc["lemma2"], where + ".lemma2");
  if (doc.contains("lemma3"))
    config.lemma3 = boolean(doc["lemma3"], where + ".lemma3");
  if (doc.contains("mechanism2"))
    config.mechanism2 = boolean(doc["mechanism2"], where + ".mechanism2");
  if (doc.contains("lemma3_max_m"))
  {
    const std::uint64_t m = unsigned_integer(doc["lemma3_max_m"], where + ".lemma3_max_m");
    if (m < 1 || m > kMaxPartitionItems)
    {
      throw InputError(where + ".lemma3_max_m: must lie in [1, 200]");
    }
    config.lemma3_max_m = static_cast<unsigned>(m);
  }
  if (doc.contains("alpha"))
  {
    config.alpha = number(doc, "alpha", where);
    if (!(config.alpha > 0.0))
    {
      throw InputError(where + ".alpha: must be positive");
    }
  }
  if (doc.contains("m_values"))
  {
    config.m_values = numbers(doc["m_values"], where + ".m_values");
    for (double m : config.m_values)
    {
      if (!(m >= 1.0))
      {
        throw InputError(where + ".m_values: every M must be at least 1");
      }
    }
  }
  if (doc.contains("campaign"))
  {
    const json &c = doc["campaign"];
    const std::string w = where + ".campaign";
    require_known_fields(c, {"sizes", "instances_per_size", "trials", "family", "graph", "edge_probability", "seed"},
                         w);
    CampaignConfig campaign;
    campaign.seed = config.seed;
    if (c.contains("sizes"))
      campaign.sizes = sizes(c["sizes"], w + ".sizes");
    if (c.contains("instances_per_size"))
      campaign.instances_per_size = unsigned_integer(c["instances_per_size"], w + ".instances_per_size");
    if (c.contains("trials"))
      campaign.trials = unsigned_integer(c["trials"], w + ".trials");
    if (c.contains("family"))
      campaign.family = family(c["family"], w + ".family");
    if (c.contains("graph"))
      campaign.graph = parse_graph_kind(text(c["graph"], w + ".graph"), w + ".graph");
    if (c.contains("edge_probability"))
      campaign.edge_probability = number(c, "edge_probability", w);
    if (c.contains("seed"))
      campaign.seed = unsigned_integer(c["seed"], w + ".seed");
    for (std::size_t n : campaign.sizes)
    {
      if (n == 0 || n > kMaxAgents)
      {
        throw InputError(w + ".sizes: every size must lie in [1, 64]");
      }
    }
    config.campaign = campaign;
  }
  return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path &path)
{
  const std::string content = read_text_file(path);
  try
  {
    return parse_experiment_config(content);
  }
  catch (const InputError &e)
  {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace extauction
