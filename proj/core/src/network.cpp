#include "ddspce/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ddspce/errors.hpp"
#include "ddspce/power_curves.hpp"

namespace ddspce {

int Network::bus_index(int bus_id) const {
  for (size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == bus_id) return static_cast<int>(i);
  return -1;
}

int Network::branch_index(const std::string& id) const {
  for (size_t i = 0; i < branches.size(); ++i)
    if (branches[i].id == id) return static_cast<int>(i);
  return -1;
}

int Network::slack_index() const {
  for (size_t i = 0; i < buses.size(); ++i)
    if (buses[i].type == BusType::Slack) return static_cast<int>(i);
  return -1;
}

void Network::validate() const {
  if (buses.empty()) throw ConfigError("network has no buses");
  if (!(base_mva > 0.0)) throw ConfigError("base MVA must be positive");
  std::set<int> ids;
  int slack_count = 0;
  for (const auto& b : buses) {
    if (!ids.insert(b.id).second)
      throw ConfigError("duplicate bus id " + std::to_string(b.id));
    if (b.type == BusType::Slack) ++slack_count;
    if (!(b.v_min < b.v_max))
      throw ConfigError("bus " + std::to_string(b.id) + " voltage band empty");
  }
  if (slack_count != 1)
    throw ConfigError("network must have exactly one slack bus, found " +
                      std::to_string(slack_count));
  std::set<std::string> branch_ids;
  for (const auto& br : branches) {
    if (bus_index(br.from) < 0 || bus_index(br.to) < 0)
      throw ConfigError("branch " + br.id + " references a missing bus");
    if (br.r == 0.0 && br.x == 0.0)
      throw ConfigError("branch " + br.id + " has zero impedance");
    if (!branch_ids.insert(br.id).second)
      throw ConfigError("duplicate branch id " + br.id);
  }
  for (const auto& g : generators) {
    const int bi = bus_index(g.bus);
    if (bi < 0) throw ConfigError("generator " + g.id + " references a missing bus");
    if (buses[static_cast<size_t>(bi)].type == BusType::PQ)
      throw ConfigError("generator " + g.id + " sits on a PQ bus");
  }
  for (const auto& w : wind_farms) {
    if (bus_index(w.bus) < 0)
      throw ConfigError("wind farm " + w.id + " references a missing bus");
    if (!(0.0 <= w.v_in && w.v_in < w.v_rated && w.v_rated < w.v_out))
      throw ConfigError("wind farm " + w.id + " speed thresholds out of order");
    if (!(w.p_rated_mw > 0.0))
      throw ConfigError("wind farm " + w.id + " needs positive rated power");
  }
  for (const auto& s : solar_plants) {
    if (bus_index(s.bus) < 0)
      throw ConfigError("solar plant " + s.id + " references a missing bus");
    if (!(s.r_rated > 0.0) || !(s.p_rated_mw > 0.0) || !(s.r_c > 0.0) ||
        s.r_c >= s.r_rated)
      throw ConfigError("solar plant " + s.id + " curve parameters invalid");
  }
  for (const auto& u : ultc) {
    if (branch_index(u.branch_id) < 0)
      throw ConfigError("ULTC references missing branch " + u.branch_id);
    if (bus_index(u.controlled_bus) < 0)
      throw ConfigError("ULTC controls a missing bus");
    if (!(u.tap_min < u.tap_max) || !(u.tap_step > 0.0) || !(u.v_lo < u.v_hi))
      throw ConfigError("ULTC on " + u.branch_id + " has an invalid range");
  }
}

namespace {

BusType bus_type_from_string(const std::string& s) {
  if (s == "slack") return BusType::Slack;
  if (s == "pv" || s == "PV") return BusType::PV;
  if (s == "pq" || s == "PQ") return BusType::PQ;
  throw ConfigError("unknown bus type '" + s + "'");
}

std::string bus_type_to_string(BusType t) {
  switch (t) {
    case BusType::Slack: return "slack";
    case BusType::PV: return "pv";
    default: return "pq";
  }
}

SampleColumnRole::Kind kind_from_string(const std::string& s) {
  if (s == "wind") return SampleColumnRole::Kind::Wind;
  if (s == "solar") return SampleColumnRole::Kind::Solar;
  if (s == "load") return SampleColumnRole::Kind::Load;
  if (s == "outage") return SampleColumnRole::Kind::Outage;
  throw ConfigError("unknown sample column kind '" + s + "'");
}

std::string kind_to_string(SampleColumnRole::Kind k) {
  switch (k) {
    case SampleColumnRole::Kind::Wind: return "wind";
    case SampleColumnRole::Kind::Solar: return "solar";
    case SampleColumnRole::Kind::Load: return "load";
    default: return "outage";
  }
}

}  // namespace

namespace {
Network parse_network_fields(const nlohmann::json& j);
}

Network parse_network_json(const std::string& text) {
  try {
    return parse_network_fields(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("network JSON invalid: ") + e.what());
  }
}

namespace {

Network parse_network_fields(const nlohmann::json& j) {
  if (j.value("format_version", 0) != 1)
    throw ConfigError("unsupported network format version");

  Network net;
  net.base_mva = j.value("base_mva", 100.0);
  for (const auto& jb : j.at("buses")) {
    Bus b;
    b.id = jb.at("id").get<int>();
    b.type = bus_type_from_string(jb.value("type", std::string("pq")));
    b.v_setpoint = jb.value("v_setpoint", 1.0);
    b.v_min = jb.value("v_min", 0.9);
    b.v_max = jb.value("v_max", 1.1);
    b.p_load_mw = jb.value("p_load_mw", 0.0);
    b.q_load_mvar = jb.value("q_load_mvar", 0.0);
    net.buses.push_back(b);
  }
  for (const auto& jb : j.value("branches", nlohmann::json::array())) {
    Branch br;
    br.from = jb.at("from").get<int>();
    br.to = jb.at("to").get<int>();
    br.id = jb.value("id", "L" + std::to_string(br.from) + "-" + std::to_string(br.to));
    br.r = jb.value("r", 0.0);
    br.x = jb.at("x").get<double>();
    br.b = jb.value("b", 0.0);
    br.tap = jb.value("tap", 1.0);
    br.s_max_mva = jb.value("s_max_mva", 0.0);
    br.in_service = jb.value("in_service", true);
    net.branches.push_back(br);
  }
  for (const auto& jg : j.value("generators", nlohmann::json::array())) {
    Generator g;
    g.bus = jg.at("bus").get<int>();
    g.id = jg.value("id", "G" + std::to_string(g.bus));
    g.p_mw = jg.value("p_mw", 0.0);
    g.q_min_mvar = jg.value("q_min_mvar", -1e9);
    g.q_max_mvar = jg.value("q_max_mvar", 1e9);
    g.p_min_mw = jg.value("p_min_mw", 0.0);
    g.p_max_mw = jg.value("p_max_mw", 1e9);
    g.in_service = jg.value("in_service", true);
    net.generators.push_back(g);
  }
  for (const auto& jw : j.value("wind_farms", nlohmann::json::array())) {
    WindFarm w;
    w.id = jw.at("id").get<std::string>();
    w.bus = jw.at("bus").get<int>();
    w.v_in = jw.value("v_in", 3.0);
    w.v_rated = jw.value("v_rated", 12.0);
    w.v_out = jw.value("v_out", 25.0);
    w.p_rated_mw = jw.at("p_rated_mw").get<double>();
    w.power_factor = jw.value("power_factor", 0.85);
    net.wind_farms.push_back(w);
  }
  for (const auto& js : j.value("solar_plants", nlohmann::json::array())) {
    SolarPlant s;
    s.id = js.at("id").get<std::string>();
    s.bus = js.at("bus").get<int>();
    s.r_rated = js.at("r_rated").get<double>();
    s.p_rated_mw = js.at("p_rated_mw").get<double>();
    s.r_c = js.value("r_c", 150.0);
    net.solar_plants.push_back(s);
  }
  for (const auto& ju : j.value("ultc", nlohmann::json::array())) {
    UltcTransformer u;
    u.branch_id = ju.at("branch").get<std::string>();
    u.controlled_bus = ju.at("controlled_bus").get<int>();
    u.v_lo = ju.at("v_lo").get<double>();
    u.v_hi = ju.at("v_hi").get<double>();
    u.tap_min = ju.value("tap_min", 0.775);
    u.tap_max = ju.value("tap_max", 1.185);
    u.tap_step = ju.value("tap_step", 0.00625);
    net.ultc.push_back(u);
  }
  for (const auto& jm : j.value("sample_mapping", nlohmann::json::array())) {
    SampleColumnRole r;
    r.column = jm.at("column").get<std::string>();
    r.kind = kind_from_string(jm.at("kind").get<std::string>());
    r.target = jm.at("target").is_number()
                   ? std::to_string(jm.at("target").get<int>())
                   : jm.at("target").get<std::string>();
    net.sample_mapping.push_back(r);
  }
  net.validate();
  return net;
}

}  // namespace

std::string network_to_json_string(const Network& net) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["base_mva"] = net.base_mva;
  auto& jb = j["buses"] = nlohmann::json::array();
  for (const auto& b : net.buses)
    jb.push_back({{"id", b.id},
                  {"type", bus_type_to_string(b.type)},
                  {"v_setpoint", b.v_setpoint},
                  {"v_min", b.v_min},
                  {"v_max", b.v_max},
                  {"p_load_mw", b.p_load_mw},
                  {"q_load_mvar", b.q_load_mvar}});
  auto& jbr = j["branches"] = nlohmann::json::array();
  for (const auto& br : net.branches)
    jbr.push_back({{"id", br.id},
                   {"from", br.from},
                   {"to", br.to},
                   {"r", br.r},
                   {"x", br.x},
                   {"b", br.b},
                   {"tap", br.tap},
                   {"s_max_mva", br.s_max_mva},
                   {"in_service", br.in_service}});
  auto& jg = j["generators"] = nlohmann::json::array();
  for (const auto& g : net.generators)
    jg.push_back({{"id", g.id},
                  {"bus", g.bus},
                  {"p_mw", g.p_mw},
                  {"q_min_mvar", g.q_min_mvar},
                  {"q_max_mvar", g.q_max_mvar},
                  {"p_min_mw", g.p_min_mw},
                  {"p_max_mw", g.p_max_mw},
                  {"in_service", g.in_service}});
  auto& jw = j["wind_farms"] = nlohmann::json::array();
  for (const auto& w : net.wind_farms)
    jw.push_back({{"id", w.id},
                  {"bus", w.bus},
                  {"v_in", w.v_in},
                  {"v_rated", w.v_rated},
                  {"v_out", w.v_out},
                  {"p_rated_mw", w.p_rated_mw},
                  {"power_factor", w.power_factor}});
  auto& js = j["solar_plants"] = nlohmann::json::array();
  for (const auto& s : net.solar_plants)
    js.push_back({{"id", s.id},
                  {"bus", s.bus},
                  {"r_rated", s.r_rated},
                  {"p_rated_mw", s.p_rated_mw},
                  {"r_c", s.r_c}});
  auto& ju = j["ultc"] = nlohmann::json::array();
  for (const auto& u : net.ultc)
    ju.push_back({{"branch", u.branch_id},
                  {"controlled_bus", u.controlled_bus},
                  {"v_lo", u.v_lo},
                  {"v_hi", u.v_hi},
                  {"tap_min", u.tap_min},
                  {"tap_max", u.tap_max},
                  {"tap_step", u.tap_step}});
  auto& jm = j["sample_mapping"] = nlohmann::json::array();
  for (const auto& r : net.sample_mapping)
    jm.push_back({{"column", r.column},
                  {"kind", kind_to_string(r.kind)},
                  {"target", r.target}});
  return j.dump(2);
}

Network load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError("cannot open network file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_network_json(buf.str());
}

void save_network(const Network& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingFileError("cannot write network file: " + path);
  out << network_to_json_string(net) << '\n';
}

ResolvedMapping resolve_mapping(const Network& net,
                                const std::vector<std::string>& column_names) {
  if (net.sample_mapping.size() != column_names.size())
    throw MappingMismatchError(
        "mapping covers " + std::to_string(net.sample_mapping.size()) +
        " columns, samples have " + std::to_string(column_names.size()));
  ResolvedMapping rm;
  std::set<int> used;
  for (const auto& role : net.sample_mapping) {
    ResolvedMapping::Entry e;
    const auto it = std::find(column_names.begin(), column_names.end(), role.column);
    if (it == column_names.end())
      throw MappingMismatchError("mapped column '" + role.column +
                                 "' not present in samples");
    e.column = static_cast<int>(it - column_names.begin());
    if (!used.insert(e.column).second)
      throw MappingMismatchError("column '" + role.column + "' mapped twice");
    e.kind = role.kind;
    switch (role.kind) {
      case SampleColumnRole::Kind::Wind: {
        e.target = -1;
        for (size_t i = 0; i < net.wind_farms.size(); ++i)
          if (net.wind_farms[i].id == role.target) e.target = static_cast<int>(i);
        break;
      }
      case SampleColumnRole::Kind::Solar: {
        e.target = -1;
        for (size_t i = 0; i < net.solar_plants.size(); ++i)
          if (net.solar_plants[i].id == role.target) e.target = static_cast<int>(i);
        break;
      }
      case SampleColumnRole::Kind::Load:
        e.target = net.bus_index(std::stoi(role.target));
        break;
      case SampleColumnRole::Kind::Outage:
        e.target = net.branch_index(role.target);
        break;
    }
    if (e.target < 0)
      throw MappingMismatchError("mapping target '" + role.target +
                                 "' not found for column '" + role.column + "'");
    rm.entries.push_back(e);
  }
  return rm;
}

Network apply_sample(const Network& net, const ResolvedMapping& mapping,
                     const Eigen::VectorXd& row) {
  if (row.size() != static_cast<Eigen::Index>(mapping.entries.size()))
    throw MappingMismatchError("sample row has " + std::to_string(row.size()) +
                               " entries, mapping expects " +
                               std::to_string(mapping.entries.size()));
  Network out = net;
  for (const auto& e : mapping.entries) {
    const double v = row[e.column];
    switch (e.kind) {
      case SampleColumnRole::Kind::Wind: {
        auto& w = out.wind_farms[static_cast<size_t>(e.target)];
        w.p_out_mw = wind_power(v, w);
        break;
      }
      case SampleColumnRole::Kind::Solar: {
        auto& s = out.solar_plants[static_cast<size_t>(e.target)];
        s.p_out_mw = solar_power(v, s);
        break;
      }
      case SampleColumnRole::Kind::Load: {
        auto& b = out.buses[static_cast<size_t>(e.target)];
        // Reactive load follows the base power factor.
        const double ratio =
            b.p_load_mw != 0.0 ? b.q_load_mvar / b.p_load_mw : 0.0;
        b.p_load_mw = v;
        b.q_load_mvar = v * ratio;
        break;
      }
      case SampleColumnRole::Kind::Outage: {
        if (std::abs(v) > 1e-9 && std::abs(v - 1.0) > 1e-9)
          throw MappingMismatchError(
              "outage indicator must be 0 or 1, got " + std::to_string(v));
        out.branches[static_cast<size_t>(e.target)].in_service = v > 0.5;
        break;
      }
    }
  }
  return out;
}

}  // namespace ddspce
