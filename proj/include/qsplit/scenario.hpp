#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsplit/potential.hpp"
#include "qsplit/spectral.hpp"

namespace qsplit {

struct PacketSpec {
  double l0 = 7.5;                // nm
  std::optional<double> e0;       // eV
  std::optional<double> k0;       // nm^-1
};

struct KGridSpec {
  std::size_t n = kDefaultKPoints;
  double span_sigmas = kDefaultSpanSigmas;
};

struct XGridSpec {
  double min = -200.0;
  double max = 800.0;
  double step = 0.25;

  std::vector<double> points() const;
};

struct TimingSpec {
  double L1 = 0.0;          // nm
  double L2 = 0.0;          // nm
  double window_lo = 0.0;   // ps
  double window_hi = 1.2;   // ps
  double scan_dt = 1.0;     // fs
};

struct OracleSpec {
  double x_min = -400.0;
  double x_max = 1200.0;
  double dx = 0.05;
  double dt = 0.25;
  int levels = 3;
  double leak_tol = 1e-10;
};

struct Scenario {
  std::string name;
  PotentialSpec potential_spec;
  Potential potential;
  PacketSpec packet;
  KGridSpec kgrid;
  XGridSpec xgrid;
  std::vector<double> times_ps{0.0, 0.4};
  TimingSpec timing;
  OracleSpec oracle;

  /// Mean wavenumber of the incident packet.
  double k0() const;
};

/// Parses and validates; unknown keys and malformed values throw Config
/// errors, potential defects throw their own configuration kinds.
Scenario parse_scenario(const nlohmann::json& j, const std::string& name = "scenario");
Scenario load_scenario(const std::filesystem::path& path);

/// Everything the spectral pipeline needs, built once per scenario.
struct Setup {
  Potential pot;
  double k0 = 0.0;
  double l0 = 0.0;
  KGrid grid;
  SpectralPacket packet;
  ParamTable table;
};

Setup prepare(const Scenario& s);

/// Parses "0,0.4,0.42" into numbers.
std::vector<double> parse_number_list(const std::string& text);

}  // namespace qsplit
