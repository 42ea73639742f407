#include "blendsolve/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "blendsolve/csv.hpp"

namespace blendsolve::cli {

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what), line_(line) {}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

IniFile parse_ini(std::istream& in, const std::string& source) {
  IniFile ini;
  ini.source = source;
  std::string raw;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(source, line_no, "unterminated section header");
      section = lower(trim(std::string_view(line).substr(1, line.size() - 2)));
      if (section.empty()) throw ConfigError(source, line_no, "empty section name");
      ini.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line_no, "expected 'key = value'");
    if (section.empty()) throw ConfigError(source, line_no, "key outside of any section");
    const std::string key = lower(trim(std::string_view(line).substr(0, eq)));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(source, line_no, "empty key");
    if (value.empty()) throw ConfigError(source, line_no, "empty value for '" + key + "'");
    auto& entries = ini.sections[section];
    if (entries.count(key)) throw ConfigError(source, line_no, "duplicate key '" + key + "'");
    entries[key] = {value, line_no};
  }
  return ini;
}

namespace {

// Reads one section, remembering which keys were consumed.
class Reader {
 public:
  Reader(const IniFile& ini, const std::string& section) : source_(ini.source), section_(section) {
    const auto it = ini.sections.find(section);
    if (it != ini.sections.end()) entries_ = &it->second;
  }

  const IniEntry* find(const std::string& key) {
    used_.insert(key);
    if (!entries_) return nullptr;
    const auto it = entries_->find(key);
    return it == entries_->end() ? nullptr : &it->second;
  }

  [[noreturn]] void fail(const IniEntry& e, const std::string& key, const std::string& what) const {
    throw ConfigError(source_, e.line, "[" + section_ + "] " + key + ": " + what);
  }

  double number(const std::string& key, double fallback) {
    const IniEntry* e = find(key);
    if (!e) return fallback;
    return to_double(*e, key, e->value);
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    const IniEntry* e = find(key);
    if (!e) return fallback;
    std::size_t v = 0;
    const char* end = e->value.data() + e->value.size();
    const auto [ptr, ec] = std::from_chars(e->value.data(), end, v);
    if (ec != std::errc() || ptr != end) fail(*e, key, "expected a non-negative integer, got '" + e->value + "'");
    return v;
  }

  bool flag(const std::string& key, bool fallback) {
    const IniEntry* e = find(key);
    if (!e) return fallback;
    const std::string v = lower(e->value);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(*e, key, "expected true or false, got '" + e->value + "'");
  }

  std::vector<double> numbers(const std::string& key) {
    const IniEntry* e = find(key);
    if (!e) return {};
    std::vector<double> out;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(*e, key, trim(item)));
    return out;
  }

  // Parses with `parse`, turning its exceptions into located errors.
  template <class T, class Parse>
  T choice(const std::string& key, T fallback, Parse parse) {
    const IniEntry* e = find(key);
    if (!e) return fallback;
    try {
      return parse(e->value);
    } catch (const std::exception& ex) {
      fail(*e, key, ex.what());
    }
  }

  void check_unused() const {
    if (!entries_) return;
    for (const auto& [key, e] : *entries_) {
      if (!used_.count(key)) fail(e, key, "unknown key");
    }
  }

 private:
  double to_double(const IniEntry& e, const std::string& key, const std::string& text) const {
    try {
      std::size_t pos = 0;
      const double v = std::stod(text, &pos);
      if (pos == text.size()) return v;
    } catch (const std::exception&) {
    }
    fail(e, key, "expected a number, got '" + text + "'");
  }

  std::string source_;
  std::string section_;
  const IniSection* entries_ = nullptr;
  std::set<std::string> used_;
};

const std::set<std::string> kSections{"problem", "grid",       "schemes", "blend",
                                      "particles", "richardson", "sweep",   "output"};

void require_unit(Reader& r, const std::string& key, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    if (const IniEntry* e = r.find(key)) r.fail(*e, key, "must lie in [0, 1]");
  }
}

}  // namespace

RunConfig load_config(const IniFile& ini) {
  for (const auto& [name, entries] : ini.sections) {
    if (!kSections.count(name)) {
      const std::size_t line = entries.empty() ? 0 : entries.begin()->second.line;
      throw ConfigError(ini.source, line, "unknown section [" + name + "]");
    }
  }

  RunConfig cfg;
  Reader problem(ini, "problem");
  const IniEntry* preset = problem.find("preset");
  if (!preset) throw ConfigError(ini.source, 0, "[problem] preset is required");
  cfg.preset = preset->value;
  try {
    cfg.test = make_test_case(cfg.preset);
  } catch (const UnknownTest& ex) {
    problem.fail(*preset, "preset", ex.what());
  }
  SimulationConfig& sim = cfg.test.config;
  sim.sampling = problem.choice("sampling", sim.sampling, [](const std::string& v) { return parse_sampling(v); });
  problem.check_unused();

  Reader grid(ini, "grid");
  const Grid1D& g = cfg.test.grid;
  const double x_lo = grid.number("x_lo", g.x_lo);
  const double x_hi = grid.number("x_hi", g.x_hi);
  const std::size_t n_cells = grid.count("n_cells", g.n_cells);
  const double final_time = grid.number("final_time", g.final_time);
  const std::size_t n_steps = grid.count("n_steps", g.n_steps);
  try {
    cfg.test.grid = build_grid(x_lo, x_hi, n_cells, final_time, n_steps);
  } catch (const std::exception& ex) {
    throw ConfigError(ini.source, 0, std::string("[grid] ") + ex.what());
  }
  grid.check_unused();

  Reader schemes(ini, "schemes");
  sim.s1 = schemes.choice("s1", sim.s1, [](const std::string& v) { return parse_scheme(v); });
  const std::string s2_default =
      sim.mode == CouplingMode::multiscale ? std::string("PARTICLES") : std::string(to_string(sim.s2));
  const std::string s2 = schemes.choice("s2", s2_default, [](const std::string& v) {
    if (lower(v) == "particles") return std::string("PARTICLES");
    return std::string(to_string(parse_scheme(v)));
  });
  if (s2 == "PARTICLES") {
    sim.mode = CouplingMode::multiscale;
  } else {
    sim.mode = CouplingMode::eulerian_pair;
    sim.s2 = parse_scheme(s2);
  }
  schemes.check_unused();

  Reader blend(ini, "blend");
  BlendParams& params = sim.params;
  params.lambda = blend.number("lambda", params.lambda);
  require_unit(blend, "lambda", params.lambda);
  params.mu = blend.number("mu", params.mu);
  require_unit(blend, "mu", params.mu);
  const std::string policy = blend.choice("policy", std::string([&] {
    switch (params.policy.index()) {
      case 1: return "ramp";
      case 2: return "table";
      case 3: return "masked";
      default: return "constant";
    }
  }()), [](const std::string& v) {
    const std::string p = lower(v);
    if (p != "constant" && p != "ramp" && p != "table" && p != "masked") {
      throw std::invalid_argument("policy must be constant, ramp, table or masked");
    }
    return p;
  });
  if (policy == "constant") {
    params.policy = ConstantPolicy{};
  } else if (policy == "ramp") {
    OccupancyRamp ramp;
    ramp.lambda_hi = blend.number("lambda_hi", ramp.lambda_hi);
    require_unit(blend, "lambda_hi", ramp.lambda_hi);
    ramp.lambda_lo = blend.number("lambda_lo", ramp.lambda_lo);
    require_unit(blend, "lambda_lo", ramp.lambda_lo);
    ramp.occupancy_ref = blend.number("occupancy_ref", ramp.occupancy_ref);
    params.policy = ramp;
  } else if (policy == "table") {
    OccupancyTable table{blend.numbers("table")};
    if (table.table.empty()) throw ConfigError(ini.source, 0, "[blend] policy = table needs 'table'");
    for (double v : table.table) require_unit(blend, "table", v);
    params.policy = table;
  } else {
    MaskedPolicy mask;
    if (const auto* m = std::get_if<MaskedPolicy>(&params.policy)) mask = *m;
    mask.lambda_in = blend.number("lambda_in", mask.lambda_in);
    require_unit(blend, "lambda_in", mask.lambda_in);
    mask.lambda_out = blend.number("lambda_out", mask.lambda_out);
    require_unit(blend, "lambda_out", mask.lambda_out);
    params.policy = mask;
  }
  blend.check_unused();

  Reader particles(ini, "particles");
  sim.n_particles = particles.count("count", sim.n_particles);
  sim.ode = particles.choice("ode", sim.ode, [](const std::string& v) { return parse_ode_solver(v); });
  sim.speed_source = particles.choice("speed_source", sim.speed_source, [](const std::string& v) {
    const std::string p = lower(v);
    if (p == "w") return SpeedSource::W;
    if (p == "v") return SpeedSource::V;
    throw std::invalid_argument("speed_source must be W or V");
  });
  if (const IniEntry* e = particles.find("window")) {
    if (lower(e->value) == "none") {
      sim.particle_window.reset();
    } else {
      const std::vector<double> w = particles.numbers("window");
      if (w.size() != 2 || !(w[0] < w[1])) particles.fail(*e, "window", "expected 'from, to' with from < to");
      sim.particle_window = std::make_pair(w[0], w[1]);
    }
  }
  particles.check_unused();

  Reader rich(ini, "richardson");
  cfg.richardson.s = rich.number("s", cfg.test.published.s.value_or(0.5));
  if (!(cfg.richardson.s > 0.0 && cfg.richardson.s <= 0.5)) {
    if (const IniEntry* e = rich.find("s")) rich.fail(*e, "s", "must lie in (0, 1/2]");
  }
  const bool partial_default = sim.mode == CouplingMode::multiscale;
  cfg.richardson.search.mode =
      rich.choice("search", partial_default ? SearchMode::partial_1d : SearchMode::full_2d, [](const std::string& v) {
        const std::string p = lower(v);
        if (p == "full") return SearchMode::full_2d;
        if (p == "partial") return SearchMode::partial_1d;
        throw std::invalid_argument("search must be full or partial");
      });
  cfg.richardson.search.coarse_step = rich.number("step", cfg.richardson.search.coarse_step);
  cfg.richardson.search.rounds = rich.count("rounds", cfg.richardson.search.rounds);
  rich.check_unused();

  Reader sweep(ini, "sweep");
  cfg.sweep.lattice = sweep.choice("lattice", partial_default ? SweepLattice::lambda_1d : SweepLattice::full_2d,
                                   [](const std::string& v) {
                                     const std::string p = lower(v);
                                     if (p == "2d") return SweepLattice::full_2d;
                                     if (p == "1d") return SweepLattice::lambda_1d;
                                     throw std::invalid_argument("lattice must be 2d or 1d");
                                   });
  cfg.sweep.step = sweep.number("step", cfg.sweep.step);
  cfg.sweep.lambda_lo = sweep.number("lambda_lo", cfg.sweep.lambda_lo);
  cfg.sweep.lambda_hi = sweep.number("lambda_hi", cfg.sweep.lambda_hi);
  cfg.sweep.mu = sweep.number("mu", cfg.sweep.mu);
  require_unit(sweep, "lambda_lo", cfg.sweep.lambda_lo);
  require_unit(sweep, "lambda_hi", cfg.sweep.lambda_hi);
  require_unit(sweep, "mu", cfg.sweep.mu);
  sweep.check_unused();

  Reader output(ini, "output");
  if (const IniEntry* e = output.find("dir")) cfg.output.dir = e->value;
  cfg.output.trajectory = output.flag("trajectory", cfg.output.trajectory);
  cfg.output.particles = output.flag("particles", cfg.output.particles);
  output.check_unused();

  try {
    sim.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ini.source, 0, ex.what());
  }
  return cfg;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
  return load_config(parse_ini(in, path.string()));
}

void write_config(std::ostream& os, const RunConfig& config) {
  const SimulationConfig& sim = config.test.config;
  const Grid1D& g = config.test.grid;
  const auto num = [](double v) { return csv_number(v); };
  os << "[problem]\npreset = " << config.preset << "\nsampling = " << to_string(sim.sampling) << "\n\n";
  os << "[grid]\nx_lo = " << num(g.x_lo) << "\nx_hi = " << num(g.x_hi) << "\nn_cells = " << g.n_cells
     << "\nfinal_time = " << num(g.final_time) << "\nn_steps = " << g.n_steps << "\n\n";
  os << "[schemes]\ns1 = " << to_string(sim.s1) << "\ns2 = "
     << (sim.mode == CouplingMode::multiscale ? std::string_view("PARTICLES") : to_string(sim.s2)) << "\n\n";
  os << "[blend]\nlambda = " << num(sim.params.lambda) << "\nmu = " << num(sim.params.mu) << '\n';
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, OccupancyRamp>) {
          os << "policy = ramp\nlambda_hi = " << num(p.lambda_hi) << "\nlambda_lo = " << num(p.lambda_lo)
             << "\noccupancy_ref = " << num(p.occupancy_ref) << '\n';
        } else if constexpr (std::is_same_v<P, OccupancyTable>) {
          os << "policy = table\ntable = ";
          for (std::size_t k = 0; k < p.table.size(); ++k) os << (k ? ", " : "") << num(p.table[k]);
          os << '\n';
        } else if constexpr (std::is_same_v<P, MaskedPolicy>) {
          os << "policy = masked\nlambda_in = " << num(p.lambda_in) << "\nlambda_out = " << num(p.lambda_out)
             << '\n';
        } else {
          os << "policy = constant\n";
        }
      },
      sim.params.policy);
  os << '\n';
  {
    os << "[particles]\ncount = " << sim.n_particles << "\node = " << to_string(sim.ode)
       << "\nspeed_source = " << (sim.speed_source == SpeedSource::W ? "W" : "V") << "\nwindow = ";
    if (sim.particle_window) {
      os << num(sim.particle_window->first) << ", " << num(sim.particle_window->second);
    } else {
      os << "none";
    }
    os << "\n\n";
  }
  os << "[richardson]\ns = " << num(config.richardson.s)
     << "\nsearch = " << (config.richardson.search.mode == SearchMode::full_2d ? "full" : "partial")
     << "\nstep = " << num(config.richardson.search.coarse_step) << "\nrounds = " << config.richardson.search.rounds
     << "\n\n";
  os << "[sweep]\nlattice = " << (config.sweep.lattice == SweepLattice::full_2d ? "2d" : "1d")
     << "\nstep = " << num(config.sweep.step) << "\nlambda_lo = " << num(config.sweep.lambda_lo)
     << "\nlambda_hi = " << num(config.sweep.lambda_hi) << "\nmu = " << num(config.sweep.mu) << "\n\n";
  os << "[output]\n";
  if (config.output.dir) os << "dir = " << config.output.dir->string() << '\n';
  os << "trajectory = " << (config.output.trajectory ? "true" : "false")
     << "\nparticles = " << (config.output.particles ? "true" : "false") << '\n';
}

}  // namespace blendsolve::cli
