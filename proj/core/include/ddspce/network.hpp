#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace ddspce {

enum class BusType { Slack, PV, PQ };

struct Bus {
  int id = 0;
  BusType type = BusType::PQ;
  double v_setpoint = 1.0;  // pu, slack/PV magnitude
  double v_min = 0.9;       // pu
  double v_max = 1.1;       // pu
  double p_load_mw = 0.0;
  double q_load_mvar = 0.0;
};

struct Branch {
  std::string id;
  int from = 0;
  int to = 0;
  double r = 0.0;   // pu
  double x = 0.0;   // pu
  double b = 0.0;   // total line charging, pu
  double tap = 1.0; // off-nominal ratio on the from side
  double s_max_mva = 0.0;  // 0 = unlimited
  bool in_service = true;
};

struct Generator {
  std::string id;
  int bus = 0;
  double p_mw = 0.0;
  double q_min_mvar = -1e9;
  double q_max_mvar = 1e9;
  double p_min_mw = 0.0;
  double p_max_mw = 1e9;
  bool in_service = true;
};

/// Wind turbine plant with the classic cut-in / rated / cut-out speed-power
/// curve; reactive power follows a fixed lagging power factor (absorbing).
struct WindFarm {
  std::string id;
  int bus = 0;
  double v_in = 3.0;      // m/s
  double v_rated = 12.0;  // m/s
  double v_out = 25.0;    // m/s
  double p_rated_mw = 0.0;
  double power_factor = 0.85;
  double p_out_mw = 0.0;  // realized output, set per sample
};

/// Solar PV plant, unity power factor. Quadratic radiation-power curve up
/// to r_c, linear to the rated radiation, flat above.
struct SolarPlant {
  std::string id;
  int bus = 0;
  double r_rated = 1000.0;  // W/m^2
  double p_rated_mw = 0.0;
  double r_c = 150.0;       // low-radiation knee, W/m^2
  double p_out_mw = 0.0;    // realized output, set per sample
};

/// Under-load tap changer holding a bus voltage inside a band by moving
/// the ratio of its branch in discrete steps between the tap limits.
struct UltcTransformer {
  std::string branch_id;
  int controlled_bus = 0;
  double v_lo = 0.99;  // pu
  double v_hi = 1.01;  // pu
  double tap_min = 0.9;
  double tap_max = 1.1;
  double tap_step = 0.00625;
};

/// Binding of one sample column to the network element it drives.
struct SampleColumnRole {
  enum class Kind { Wind, Solar, Load, Outage };
  std::string column;
  Kind kind = Kind::Load;
  std::string target;  // plant id, bus id (as text) or branch id
};

struct Network {
  double base_mva = 100.0;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Generator> generators;
  std::vector<WindFarm> wind_farms;
  std::vector<SolarPlant> solar_plants;
  std::vector<UltcTransformer> ultc;
  std::vector<SampleColumnRole> sample_mapping;

  int bus_index(int bus_id) const;           // -1 when absent
  int branch_index(const std::string& id) const;
  int slack_index() const;

  /// Structural checks: exactly one slack, unique bus ids, branch
  /// endpoints and device buses exist. Throws ConfigError.
  void validate() const;
};

Network load_network(const std::string& path);
void save_network(const Network& net, const std::string& path);
Network parse_network_json(const std::string& text);
std::string network_to_json_string(const Network& net);

/// Mapping resolved against a concrete sample column order. Covers every
/// column exactly once or resolution throws MappingMismatchError.
struct ResolvedMapping {
  struct Entry {
    int column = 0;
    SampleColumnRole::Kind kind = SampleColumnRole::Kind::Load;
    int target = 0;  // index into the kind's table (bus index for loads)
  };
  std::vector<Entry> entries;
};

ResolvedMapping resolve_mapping(const Network& net,
                                const std::vector<std::string>& column_names);

/// One realization of the random inputs: renewable outputs from the power
/// curves, loads overwritten (reactive load scaled to keep the base power
/// factor), branches with indicator 0 switched out. Returns a fresh copy.
Network apply_sample(const Network& net, const ResolvedMapping& mapping,
                     const Eigen::VectorXd& row);

}  // namespace ddspce
