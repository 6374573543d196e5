#include "nhswe/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace nhswe {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double to_double(const ConfigMap& c, const std::string& key) {
  const std::string& text = c.at(key);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
    throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  }
  return v;
}

bool to_bool(const ConfigMap& c, const std::string& key) {
  const std::string& v = c.at(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("key '" + key + "': expected true|false, got '" + v + "'");
}

std::vector<double> to_list(const ConfigMap& c, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(c.at(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    ConfigMap tmp{{key, item}};
    out.push_back(to_double(tmp, key));
  }
  return out;
}

bool is_auto(const ConfigMap& c, const std::string& key) { return c.at(key) == "auto"; }

BoundaryKind to_boundary(const ConfigMap& c, const std::string& key) {
  const std::string& v = c.at(key);
  if (v == "wall") return BoundaryKind::Wall;
  if (v == "sponge") return BoundaryKind::Sponge;
  throw ConfigError("key '" + key + "': expected wall|sponge, got '" + v + "'");
}

const std::map<std::string, ConfigMap>& presets() {
  static const std::map<std::string, ConfigMap> table = [] {
    std::map<std::string, ConfigMap> t;
    const ConfigMap hammack{{"bed", "hammack"},
                            {"x_left", "0"},
                            {"x_right", "31.6"},
                            {"boundary_left", "wall"},
                            {"boundary_right", "sponge"},
                            {"dt", "0.001"},
                            {"dx", "0.025"},
                            {"t_end", "35"},
                            {"gauges", "0.61,1.61,9.61,20.61"},
                            {"snapshots", "5,15,25"},
                            {"log_stride", "100"}};
    t["hammack-up"] = hammack;
    t["hammack-up"]["hammack.zeta0"] = "0.005";
    t["hammack-down"] = hammack;
    t["hammack-down"]["hammack.zeta0"] = "-0.005";

    const ConfigMap whittaker{{"bed", "whittaker"},     {"x_left", "-7.35"},
                              {"x_right", "7.35"},      {"boundary_left", "wall"},
                              {"boundary_right", "wall"}, {"dt", "0.005"},
                              {"dx", "0.075"},          {"t_end", "1.806"},
                              {"snapshots", "1.806"},   {"gauges", "0,1,2,3"},
                              {"log_stride", "10"}};
    const struct {
      const char* name;
      const char* u_t;
      const char* t1;
      const char* t2;
      const char* t3;
    } runs[] = {{"whittaker-6", "0.163", "0.109", "2.109", "2.218"},
                {"whittaker-12", "0.327", "0.218", "2.218", "2.436"},
                {"whittaker-18", "0.491", "0.327", "2.327", "2.654"}};
    for (const auto& r : runs) {
      ConfigMap m = whittaker;
      m["whittaker.a0"] = "1.5";
      m["whittaker.u_t"] = r.u_t;
      m["whittaker.t1"] = r.t1;
      m["whittaker.t2"] = r.t2;
      m["whittaker.t3"] = r.t3;
      t[r.name] = m;
    }

    const ConfigMap lynett{{"bed", "lynett"},
                           {"x_left", "-2"},
                           {"x_right", "40"},
                           {"boundary_left", "wall"},
                           {"boundary_right", "sponge"},
                           {"dt", "0.005"},
                           {"dx", "0.1"},
                           {"t_end", "5.86"},
                           {"snapshots", "1.51,3.00,4.51,5.86"},
                           {"gauges", "0,2.379,5,10"},
                           {"log_stride", "10"}};
    t["lynett"] = lynett;
    t["lake-at-rest"] = lynett;
    t["lake-at-rest"]["bed_freeze_time"] = "0";
    t["lake-at-rest"]["t_end"] = "5";
    t["lake-at-rest"]["snapshots"] = "5";

    const double two_pi = 2.0 * std::numbers::pi;
    t["standing-wave"] = {{"bed", "flat"},
                          {"closure", "hydrostatic"},
                          {"flat.h0", "1"},
                          {"x_left", "0"},
                          {"x_right", format_number(two_pi)},
                          {"boundary_left", "wall"},
                          {"boundary_right", "wall"},
                          {"dx", format_number(two_pi / 64.0)},
                          {"dt", "0.005"},
                          {"t_end", "10"},
                          {"initial", "standing-wave"},
                          {"wave.amplitude", "0.001"},
                          {"wave.number", "0.5"},
                          {"gauges", "0"},
                          {"snapshots", "10"},
                          {"log_stride", "10"}};
    t["solitary-sanity"] = {{"bed", "flat"},
                            {"flat.h0", "1"},
                            {"x_left", "0"},
                            {"x_right", "40"},
                            {"boundary_left", "wall"},
                            {"boundary_right", "wall"},
                            {"dx", "0.05"},
                            {"dt", "0.005"},
                            {"t_end", "5"},
                            {"initial", "solitary"},
                            {"wave.amplitude", "0.1"},
                            {"wave.position", "10"},
                            {"gauges", "10,15,20,25"},
                            {"snapshots", "0,2.5,5"},
                            {"log_stride", "10"}};
    for (auto& [name, m] : t) m["scenario"] = name;
    return t;
  }();
  return table;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_number(values[i]);
  }
  return out;
}

ConfigMap parse_config(std::string_view text) {
  ConfigMap out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number) + ": expected key=value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
    out[key] = trim(std::string_view(body).substr(eq + 1));
  }
  return out;
}

ConfigMap read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const ConfigMap& config) {
  std::string out;
  for (const auto& [k, v] : config) out += k + "=" + v + "\n";
  return out;
}

const ConfigMap& default_config() {
  static const ConfigMap defaults{
      {"scenario", "custom"},
      {"bed", "flat"},
      {"closure", "quad-full"},
      {"dt", "0.005"},
      {"dx", "0.1"},
      {"t_end", "1"},
      {"x_left", "0"},
      {"x_right", "10"},
      {"boundary_left", "wall"},
      {"boundary_right", "wall"},
      {"g", "9.81"},
      {"rho", "1000"},
      {"h_min", "1e-6"},
      {"nh_min_depth", "auto"},
      {"cfl_max", "0.45"},
      {"tvb_m", "0.1"},
      {"sponge_fraction", "0.1"},
      {"sponge_sigma0", "auto"},
      {"tau_p", "1"},
      {"tau_u", "0"},
      {"check_residual", "false"},
      {"bed_freeze_time", "none"},
      {"initial", "rest"},
      {"wave.amplitude", "0"},
      {"wave.number", "0"},
      {"wave.position", "0"},
      {"gauges", ""},
      {"snapshots", ""},
      {"log_stride", "10"},
      {"flat.h0", "1"},
      {"hammack.h0", "0.05"},
      {"hammack.b", "0.61"},
      {"hammack.zeta0", "0.005"},
      {"hammack.alpha", "auto"},
      {"hammack.ramp_width", "auto"},
      {"whittaker.h0", "0.175"},
      {"whittaker.thickness", "0.026"},
      {"whittaker.length", "0.5"},
      {"whittaker.a0", "1.5"},
      {"whittaker.u_t", "0.327"},
      {"whittaker.t1", "0.218"},
      {"whittaker.t2", "2.218"},
      {"whittaker.t3", "2.436"},
      {"lynett.theta_deg", "6"},
      {"lynett.thickness", "0.05"},
      {"lynett.length", "1"},
      {"lynett.s0", "4.712"},
      {"lynett.t0", "3.713"},
      {"lynett.x0", "2.379"},
  };
  return defaults;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, m] : presets()) out.push_back(name);
  return out;
}

ConfigMap preset(const std::string& scenario) {
  const auto it = presets().find(scenario);
  if (it == presets().end()) {
    std::string names;
    for (const auto& n : preset_names()) names += " " + n;
    throw ConfigError("unknown scenario '" + scenario + "'; valid:" + names);
  }
  ConfigMap out = default_config();
  apply_overrides(out, it->second);
  return out;
}

void apply_overrides(ConfigMap& config, const ConfigMap& overrides) {
  for (const auto& [k, v] : overrides) {
    if (!default_config().count(k)) {
      std::string keys;
      for (const auto& [name, d] : default_config()) keys += " " + name;
      throw ConfigError("unknown key '" + k + "'; valid keys:" + keys);
    }
    config[k] = v;
  }
}

ConfigMap parse_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("expected key=value, got '" + std::string(assignment) + "'");
  }
  return {{trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1))}};
}

std::size_t RunConfig::elements() const {
  return static_cast<std::size_t>(std::llround((x_right - x_left) / dx));
}

std::size_t RunConfig::steps() const { return static_cast<std::size_t>(std::llround(t_end / dt)); }

RunConfig resolve(ConfigMap& c) {
  for (const auto& [k, v] : default_config()) c.emplace(k, v);
  apply_overrides(c, {});
  RunConfig r;
  r.scenario = c.at("scenario");
  r.dt = to_double(c, "dt");
  r.dx = to_double(c, "dx");
  r.t_end = to_double(c, "t_end");
  r.x_left = to_double(c, "x_left");
  r.x_right = to_double(c, "x_right");
  if (!(r.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(r.dx > 0.0)) throw ConfigError("dx must be positive");
  if (!(r.t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
  if (!(r.x_right > r.x_left)) throw ConfigError("x_right must exceed x_left");
  const double cells = (r.x_right - r.x_left) / r.dx;
  if (std::abs(cells - std::round(cells)) > 1e-6 * cells || std::round(cells) < 2) {
    throw ConfigError("domain length must be a multiple (>= 2) of dx");
  }

  r.boundary = {to_boundary(c, "boundary_left"), to_boundary(c, "boundary_right")};

  PhysParams phys{to_double(c, "g"), to_double(c, "rho")};
  if (!(phys.g > 0.0) || !(phys.rho > 0.0)) throw ConfigError("g and rho must be positive");

  PredictorSettings& ps = r.predictor;
  ps.g = phys.g;
  ps.h_min = to_double(c, "h_min");
  ps.cfl_max = to_double(c, "cfl_max");
  ps.tvb_m = to_double(c, "tvb_m");
  ps.sponge_fraction = to_double(c, "sponge_fraction");
  if (is_auto(c, "sponge_sigma0")) c["sponge_sigma0"] = format_number(2.0 / r.dt);
  ps.sponge_sigma0 = to_double(c, "sponge_sigma0");

  StepperSettings& ss = r.stepper;
  ss.closure = parse_closure(c.at("closure"));
  ss.phys = phys;
  ss.penalty = {to_double(c, "tau_p"), to_double(c, "tau_u")};
  if (is_auto(c, "nh_min_depth")) c["nh_min_depth"] = c.at("h_min");
  ss.nh_min_depth = to_double(c, "nh_min_depth");
  ss.check_residual = to_bool(c, "check_residual");

  if (c.at("bed_freeze_time") != "none") r.freeze_time = to_double(c, "bed_freeze_time");

  const std::string& bed = c.at("bed");
  if (bed == "flat") {
    r.shape = FlatBed{to_double(c, "flat.h0")};
  } else if (bed == "hammack") {
    HammackBed b;
    b.h0 = to_double(c, "hammack.h0");
    b.b = to_double(c, "hammack.b");
    b.zeta0 = to_double(c, "hammack.zeta0");
    if (is_auto(c, "hammack.alpha")) {
      c["hammack.alpha"] = format_number(hammack_alpha(b.zeta0 > 0.0, b.h0, b.b, phys.g));
    }
    b.alpha = to_double(c, "hammack.alpha");
    if (is_auto(c, "hammack.ramp_width")) c["hammack.ramp_width"] = format_number(2.0 * r.dx);
    b.ramp_width = to_double(c, "hammack.ramp_width");
    r.shape = b;
  } else if (bed == "whittaker") {
    WhittakerBed b;
    b.h0 = to_double(c, "whittaker.h0");
    b.slide_thickness = to_double(c, "whittaker.thickness");
    b.slide_length = to_double(c, "whittaker.length");
    b.a0 = to_double(c, "whittaker.a0");
    b.u_t = to_double(c, "whittaker.u_t");
    b.t1 = to_double(c, "whittaker.t1");
    b.t2 = to_double(c, "whittaker.t2");
    b.t3 = to_double(c, "whittaker.t3");
    if (!(b.t3 > b.t2 && b.t2 > b.t1 && b.t1 > 0.0)) {
      throw ConfigError("whittaker times must satisfy t3 > t2 > t1 > 0");
    }
    r.shape = b;
  } else if (bed == "lynett") {
    LynettBed b;
    b.theta_deg = to_double(c, "lynett.theta_deg");
    b.thickness = to_double(c, "lynett.thickness");
    b.length = to_double(c, "lynett.length");
    b.s0 = to_double(c, "lynett.s0");
    b.t0 = to_double(c, "lynett.t0");
    b.x0 = to_double(c, "lynett.x0");
    if (!(b.theta_deg > 0.0 && b.theta_deg < 90.0)) {
      throw ConfigError("lynett.theta_deg must lie in (0, 90)");
    }
    r.shape = b;
  } else {
    throw ConfigError("key 'bed': expected flat|hammack|whittaker|lynett, got '" + bed + "'");
  }

  const std::string& initial = c.at("initial");
  if (initial == "rest") {
    r.initial = InitialCondition::Rest;
  } else if (initial == "standing-wave") {
    r.initial = InitialCondition::StandingWave;
  } else if (initial == "solitary") {
    r.initial = InitialCondition::Solitary;
  } else {
    throw ConfigError("key 'initial': expected rest|standing-wave|solitary, got '" + initial + "'");
  }
  if (r.initial != InitialCondition::Rest && bed != "flat") {
    throw ConfigError("wave initial conditions require bed=flat");
  }
  r.wave_amplitude = to_double(c, "wave.amplitude");
  r.wave_number = to_double(c, "wave.number");
  r.wave_position = to_double(c, "wave.position");

  r.gauges = to_list(c, "gauges");
  for (double x : r.gauges) {
    if (x < r.x_left || x > r.x_right) {
      throw ConfigError("gauge " + format_number(x) + " outside the domain");
    }
  }
  r.snapshots = to_list(c, "snapshots");
  const double stride = to_double(c, "log_stride");
  if (!(stride >= 1.0) || stride != std::floor(stride)) {
    throw ConfigError("log_stride must be a positive integer");
  }
  r.log_stride = static_cast<std::size_t>(stride);
  return r;
}

}  // namespace nhswe
