#include "eemimo/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

namespace eemimo {

namespace {

namespace pt = boost::property_tree;

std::string qualified(const std::string& section, const std::string& key) { return section + "." + key; }

double to_double(const std::string& where, const std::string& text) {
  double v = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ConfigError(where + ": not a finite number: '" + text + "'");
  return v;
}

long long to_integer(const std::string& where, const std::string& text) {
  long long v = 0;
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, v);
  if (ec != std::errc() || ptr != last) throw ConfigError(where + ": not an integer: '" + text + "'");
  return v;
}

int to_int(const std::string& where, const std::string& text) {
  const long long v = to_integer(where, text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError(where + ": out of range: '" + text + "'");
  return static_cast<int>(v);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Field {
  std::string section;
  std::string key;
  std::function<void(const std::string& where, const std::string& value)> set;
  std::function<std::string()> get;  // empty: input-only alias
};

Field real(std::string section, std::string key, double& ref, double to_si = 1.0) {
  return {std::move(section), std::move(key),
          [&ref, to_si](const std::string& w, const std::string& v) { ref = to_double(w, v) * to_si; },
          [&ref, to_si] { return format_double(ref / to_si); }};
}

Field integer(std::string section, std::string key, int& ref) {
  return {std::move(section), std::move(key),
          [&ref](const std::string& w, const std::string& v) { ref = to_int(w, v); },
          [&ref] { return std::to_string(ref); }};
}

std::vector<Field> fields(ExperimentConfig& c) {
  auto& p = c.profile;
  auto& s = c.scenario;
  const double per_gbps = 1e-9;
  const double gflops = 1e9;
  return {
      real("profile", "bandwidth_hz", p.B),
      real("profile", "coherence_symbols", p.U),
      real("profile", "zeta_ul", p.zeta_ul),
      real("profile", "zeta_dl", p.zeta_dl),
      real("profile", "eta_ul", p.eta_ul),
      real("profile", "eta_dl", p.eta_dl),
      real("profile", "noise_w", p.noise_power),
      {"profile", "noise_dbm",
       [&p](const std::string& w, const std::string& v) {
         p.noise_power = std::pow(10.0, (to_double(w, v) - 30.0) / 10.0);
       },
       {}},
      real("profile", "tau_ul", p.tau_ul),
      real("profile", "tau_dl", p.tau_dl),
      real("profile", "p_fix_w", p.P_FIX),
      real("profile", "p_syn_w", p.P_SYN),
      real("profile", "p_bs_w", p.P_BS),
      real("profile", "p_ue_w", p.P_UE),
      real("profile", "p_cod_w_per_gbps", p.P_COD, per_gbps),
      real("profile", "p_dec_w_per_gbps", p.P_DEC, per_gbps),
      real("profile", "p_bt_w_per_gbps", p.P_BT, per_gbps),
      real("profile", "l_bs_gflops_per_w", p.L_BS, gflops),
      real("profile", "l_ue_gflops_per_w", p.L_UE, gflops),
      integer("profile", "mmse_iterations", p.Q),

      {"scenario", "geometry",
       [&s](const std::string& w, const std::string& v) {
         if (v == "disc") s.geometry = GeometryKind::disc;
         else if (v == "square") s.geometry = GeometryKind::square;
         else throw ConfigError(w + ": expected disc or square, got '" + v + "'");
       },
       [&s] { return std::string(s.geometry == GeometryKind::disc ? "disc" : "square"); }},
      real("scenario", "d_min_m", s.d_min),
      real("scenario", "d_max_m", s.d_max),
      real("scenario", "cell_side_m", s.cell_side),
      real("scenario", "kappa", s.kappa),
      real("scenario", "dbar", s.dbar),
      {"scenario", "dbar_db",
       [&s](const std::string& w, const std::string& v) { s.dbar = std::pow(10.0, to_double(w, v) / 10.0); },
       {}},
      {"scenario", "min_distance_rule",
       [&s](const std::string& w, const std::string& v) {
         if (v == "serving_cell_only") s.min_distance_rule = MinDistanceRule::serving_cell_only;
         else if (v == "every_cell") s.min_distance_rule = MinDistanceRule::every_cell;
         else throw ConfigError(w + ": expected serving_cell_only or every_cell, got '" + v + "'");
       },
       [&s] {
         return std::string(s.min_distance_rule == MinDistanceRule::every_cell ? "every_cell"
                                                                                : "serving_cell_only");
       }},

      {"experiment", "regime",
       [&c](const std::string& w, const std::string& v) {
         try {
           c.regime = parse_regime(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(w + ": " + e.what());
         }
       },
       [&c] { return std::string(to_string(c.regime)); }},
      {"experiment", "scheme",
       [&c](const std::string& w, const std::string& v) {
         try {
           c.scheme = parse_scheme(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(w + ": " + e.what());
         }
       },
       [&c] { return std::string(to_string(c.scheme)); }},
      integer("experiment", "reuse", c.reuse),
      integer("experiment", "m_min", c.m_range.lo),
      integer("experiment", "m_max", c.m_range.hi),
      integer("experiment", "k_min", c.k_range.lo),
      integer("experiment", "k_max", c.k_range.hi),
      integer("experiment", "trials", c.trials),
      integer("experiment", "blocks", c.blocks),
      integer("experiment", "mc_step", c.mc_step),
      {"experiment", "seed",
       [&c](const std::string& w, const std::string& v) {
         const long long s = to_integer(w, v);
         if (s < 0) throw ConfigError(w + ": must be non-negative");
         c.seed = static_cast<std::uint64_t>(s);
       },
       [&c] { return std::to_string(c.seed); }},
      integer("experiment", "start_m", c.start.M),
      integer("experiment", "start_k", c.start.K),
      real("experiment", "start_rho", c.start.rho),
      integer("experiment", "point_m", c.point_m),
      integer("experiment", "point_k", c.point_k),
      real("experiment", "point_rho", c.point_rho),
      {"experiment", "output_dir",
       [&c](const std::string&, const std::string& v) { c.output_dir = v; },
       [&c] { return c.output_dir.string(); }},
  };
}

const std::set<std::string> sections{"profile", "scenario", "experiment"};

ExperimentConfig from_tree(const pt::ptree& tree) {
  ExperimentConfig cfg;
  auto table = fields(cfg);
  std::set<std::string> seen;
  for (const auto& [section, body] : tree) {
    if (!sections.contains(section)) throw ConfigError("unknown section or top-level key '" + section + "'");
    for (const auto& [key, node] : body) {
      const std::string where = qualified(section, key);
      const auto it = std::find_if(table.begin(), table.end(),
                                   [&](const Field& f) { return f.section == section && f.key == key; });
      if (it == table.end()) throw ConfigError("unknown key " + where);
      it->set(where, node.get_value<std::string>());
      seen.insert(where);
    }
  }
  if (seen.contains("profile.noise_w") && seen.contains("profile.noise_dbm"))
    throw ConfigError("profile.noise_dbm: give either noise_w or noise_dbm");
  if (seen.contains("scenario.dbar") && seen.contains("scenario.dbar_db"))
    throw ConfigError("scenario.dbar_db: give either dbar or dbar_db");
  cfg.validate();
  return cfg;
}

}  // namespace

PropagationScenario ScenarioConfig::propagation() const {
  if (geometry == GeometryKind::disc) return PropagationScenario::disc(d_min, d_max, kappa, dbar);
  return PropagationScenario::square(cell_side, d_min, kappa, dbar);
}

PropagationScenario ScenarioConfig::multicell_cell() const {
  return PropagationScenario::square(cell_side, d_min, kappa, dbar);
}

void ExperimentConfig::validate() const {
  try {
    profile.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("profile: ") + e.what());
  }
  try {
    (void)propagation();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(reuse == 1 || reuse == 2 || reuse == 4, "experiment.reuse: must be 1, 2 or 4");
  require(m_range.lo >= 1 && m_range.lo <= m_range.hi, "experiment.m_min: need 1 <= m_min <= m_max");
  require(k_range.lo >= 1 && k_range.lo <= k_range.hi, "experiment.k_min: need 1 <= k_min <= k_max");
  require(effective_k_range().lo <= effective_k_range().hi, "experiment.k_min: exceeds the user limit");
  require(trials >= 1, "experiment.trials: must be positive");
  require(blocks >= 1, "experiment.blocks: must be positive");
  require(mc_step >= 1, "experiment.mc_step: must be positive");
  require(start.M >= 1 && start.K >= 1 && start.rho > 0, "experiment.start_m: start point must be positive");
  require(point_m >= 0 && point_k >= 0 && point_rho >= 0, "experiment.point_m: must be non-negative");
  require((point_m == 0) == (point_k == 0), "experiment.point_k: set point_m and point_k together");
}

Regime ExperimentConfig::regime_value() const {
  switch (regime) {
    case RegimeKind::perfect: return PerfectCsi{};
    case RegimeKind::imperfect: return ImperfectCsi{profile.tau_ul};
    case RegimeKind::multicell:
      return SymmetricMulticell{
          MulticellScenario(scenario.multicell_cell(), reuse, scenario.min_distance_rule)};
  }
  return PerfectCsi{};
}

PropagationScenario ExperimentConfig::propagation() const {
  return regime == RegimeKind::multicell ? scenario.multicell_cell() : scenario.propagation();
}

IntRange ExperimentConfig::effective_k_range() const {
  HardwareProfile hw = profile;
  if (regime == RegimeKind::multicell) hw.tau_ul = reuse;
  return {k_range.lo, std::min(k_range.hi, hw.max_users() - 1)};
}

ExperimentConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("parse error at line " + std::to_string(e.line()) + ": " + e.message());
  }
  return from_tree(tree);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string format_config(const ExperimentConfig& cfg) {
  ExperimentConfig copy = cfg;
  std::ostringstream out;
  std::string section;
  for (const Field& f : fields(copy)) {
    if (!f.get) continue;
    if (f.section != section) {
      out << (section.empty() ? "" : "\n") << '[' << f.section << "]\n";
      section = f.section;
    }
    out << f.key << " = " << f.get() << '\n';
  }
  return out.str();
}

void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << format_config(cfg);
}

Scheme parse_scheme(const std::string& s) {
  if (s == "zf") return Scheme::ZF;
  if (s == "mrt") return Scheme::MRT_MRC;
  if (s == "mmse") return Scheme::MMSE;
  throw std::invalid_argument("expected zf, mrt or mmse, got '" + s + "'");
}

RegimeKind parse_regime(const std::string& s) {
  if (s == "perfect") return RegimeKind::perfect;
  if (s == "imperfect") return RegimeKind::imperfect;
  if (s == "multicell") return RegimeKind::multicell;
  throw std::invalid_argument("expected perfect, imperfect or multicell, got '" + s + "'");
}

const char* to_string(RegimeKind r) {
  switch (r) {
    case RegimeKind::perfect: return "perfect";
    case RegimeKind::imperfect: return "imperfect";
    case RegimeKind::multicell: return "multicell";
  }
  return "?";
}

}  // namespace eemimo
