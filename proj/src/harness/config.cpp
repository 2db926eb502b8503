#include "meclab/harness/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace meclab::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// One registry drives parsing, validation echo and serialization, so the
// key set stays consistent in both directions.
struct KeyBinding {
  std::string name;
  std::function<void(RunConfig&, const std::string&)> parse;
  std::function<std::string(const RunConfig&)> print;
};

double parse_double(const std::string& key, const std::string& raw) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(raw, &used);
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": expected a number, got '" +
                      raw + "'");
  }
  if (trim(raw.substr(used)) != "") {
    throw ConfigError("config key " + key + ": trailing characters in '" +
                      raw + "'");
  }
  return v;
}

long parse_long(const std::string& key, const std::string& raw) {
  const double v = parse_double(key, raw);
  const long l = static_cast<long>(v);
  if (static_cast<double>(l) != v) {
    throw ConfigError("config key " + key + ": expected an integer, got '" +
                      raw + "'");
  }
  return l;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  if (raw == "true" || raw == "1") return true;
  if (raw == "false" || raw == "0") return false;
  throw ConfigError("config key " + key + ": expected a boolean, got '" +
                    raw + "'");
}

mec::Range parse_range(const std::string& key, const std::string& raw) {
  std::istringstream ss(raw);
  double lo, hi;
  if (!(ss >> lo >> hi)) {
    throw ConfigError("config key " + key + ": expected 'lo hi', got '" +
                      raw + "'");
  }
  std::string rest;
  if (ss >> rest) {
    throw ConfigError("config key " + key + ": trailing characters in '" +
                      raw + "'");
  }
  return {lo, hi};
}

std::vector<KeyBinding> bindings() {
  std::vector<KeyBinding> keys;
  auto add = [&keys](std::string name, auto parse, auto print) {
    keys.push_back({std::move(name), parse, print});
  };
  auto dbl = [&add](const std::string& name, auto get) {
    add(
        name,
        [name, get](RunConfig& c, const std::string& raw) {
          *get(c) = parse_double(name, raw);
        },
        [get](const RunConfig& c) {
          return fmt_double(*get(const_cast<RunConfig&>(c)));
        });
  };
  auto rng = [&add](const std::string& name, auto get) {
    add(
        name,
        [name, get](RunConfig& c, const std::string& raw) {
          *get(c) = parse_range(name, raw);
        },
        [get](const RunConfig& c) {
          const mec::Range* r = get(const_cast<RunConfig&>(c));
          return fmt_double(r->lo) + " " + fmt_double(r->hi);
        });
  };

  add(
      "devices",
      [](RunConfig& c, const std::string& raw) {
        c.env.num_devices = static_cast<int>(parse_long("devices", raw));
      },
      [](const RunConfig& c) { return std::to_string(c.env.num_devices); });
  add(
      "servers",
      [](RunConfig& c, const std::string& raw) {
        c.env.num_servers = static_cast<int>(parse_long("servers", raw));
      },
      [](const RunConfig& c) { return std::to_string(c.env.num_servers); });

  dbl("beta", [](RunConfig& c) { return &c.env.beta; });
  dbl("omega_energy", [](RunConfig& c) { return &c.env.omega_energy; });
  dbl("omega_delay", [](RunConfig& c) { return &c.env.omega_delay; });
  rng("task_size_mb", [](RunConfig& c) { return &c.env.task_size_mb; });
  rng("priority_level", [](RunConfig& c) { return &c.env.priority_level; });
  rng("server_capacity_ghz",
      [](RunConfig& c) { return &c.env.server_capacity_ghz; });
  rng("bandwidth_mhz", [](RunConfig& c) { return &c.env.bandwidth_mhz; });
  rng("coord_km", [](RunConfig& c) { return &c.env.coord_km; });
  rng("power_dbm", [](RunConfig& c) { return &c.env.power_dbm; });
  rng("background_load_frac",
      [](RunConfig& c) { return &c.env.background_load_frac; });
  dbl("load_persistence", [](RunConfig& c) { return &c.env.load_persistence; });
  dbl("load_jitter", [](RunConfig& c) { return &c.env.load_jitter; });
  dbl("initial_energy_j", [](RunConfig& c) { return &c.env.initial_energy_j; });
  dbl("slot_duration_s", [](RunConfig& c) { return &c.env.slot_duration_s; });
  dbl("kappa", [](RunConfig& c) { return &c.env.kappa; });
  dbl("path_loss_exponent",
      [](RunConfig& c) { return &c.env.path_loss_exponent; });
  dbl("gain_ref", [](RunConfig& c) { return &c.env.gain_ref; });
  dbl("noise_dbm_per_hz", [](RunConfig& c) { return &c.env.noise_dbm_per_hz; });
  dbl("cycles_per_bit", [](RunConfig& c) { return &c.env.cycles_per_bit; });
  dbl("completion_bonus", [](RunConfig& c) { return &c.env.completion_bonus; });
  dbl("energy_ref_j", [](RunConfig& c) { return &c.env.energy_ref_j; });
  dbl("time_ref_s", [](RunConfig& c) { return &c.env.time_ref_s; });
  dbl("antenna_gain_tx", [](RunConfig& c) { return &c.env.antenna_gain_tx; });
  dbl("antenna_gain_rx", [](RunConfig& c) { return &c.env.antenna_gain_rx; });
  dbl("wavelength_m", [](RunConfig& c) { return &c.env.wavelength_m; });
  dbl("receive_threshold_w",
      [](RunConfig& c) { return &c.env.receive_threshold_w; });

  add(
      "policy",
      [](RunConfig& c, const std::string& raw) {
        try {
          c.policy = baselines::parse_policy(raw);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string("config key policy: ") + e.what());
        }
      },
      [](const RunConfig& c) {
        return std::string(baselines::policy_name(c.policy));
      });
  add(
      "episodes",
      [](RunConfig& c, const std::string& raw) {
        c.episodes = parse_long("episodes", raw);
      },
      [](const RunConfig& c) { return std::to_string(c.episodes); });
  add(
      "slots_per_episode",
      [](RunConfig& c, const std::string& raw) {
        c.slots_per_episode =
            static_cast<int>(parse_long("slots_per_episode", raw));
      },
      [](const RunConfig& c) { return std::to_string(c.slots_per_episode); });
  add(
      "report_stride",
      [](RunConfig& c, const std::string& raw) {
        c.report_stride = static_cast<int>(parse_long("report_stride", raw));
      },
      [](const RunConfig& c) { return std::to_string(c.report_stride); });
  add(
      "seed",
      [](RunConfig& c, const std::string& raw) {
        c.seed = static_cast<std::uint64_t>(parse_long("seed", raw));
      },
      [](const RunConfig& c) { return std::to_string(c.seed); });
  add(
      "sweep_servers",
      [](RunConfig& c, const std::string& raw) {
        std::istringstream ss(raw);
        std::vector<int> out;
        int v;
        while (ss >> v) out.push_back(v);
        if (out.empty() || !ss.eof()) {
          throw ConfigError(
              "config key sweep_servers: expected a list of integers, got '" +
              raw + "'");
        }
        c.sweep_servers = std::move(out);
      },
      [](const RunConfig& c) {
        std::string s;
        for (std::size_t i = 0; i < c.sweep_servers.size(); ++i) {
          if (i) s += ' ';
          s += std::to_string(c.sweep_servers[i]);
        }
        return s;
      });
  add(
      "out_dir",
      [](RunConfig& c, const std::string& raw) { c.out_dir = raw; },
      [](const RunConfig& c) { return c.out_dir; });
  add(
      "audit",
      [](RunConfig& c, const std::string& raw) {
        c.audit = parse_bool("audit", raw);
      },
      [](const RunConfig& c) { return c.audit ? "true" : "false"; });
  add(
      "checkpoint_in",
      [](RunConfig& c, const std::string& raw) { c.checkpoint_in = raw; },
      [](const RunConfig& c) { return c.checkpoint_in; });

  dbl("gamma", [](RunConfig& c) { return &c.learner.gamma; });
  add(
      "replay_capacity",
      [](RunConfig& c, const std::string& raw) {
        c.learner.replay_capacity =
            static_cast<std::size_t>(parse_long("replay_capacity", raw));
      },
      [](const RunConfig& c) {
        return std::to_string(c.learner.replay_capacity);
      });
  add(
      "batch_size",
      [](RunConfig& c, const std::string& raw) {
        c.learner.batch_size =
            static_cast<std::size_t>(parse_long("batch_size", raw));
      },
      [](const RunConfig& c) { return std::to_string(c.learner.batch_size); });
  dbl("actor_lr", [](RunConfig& c) { return &c.learner.actor_lr; });
  dbl("critic_lr", [](RunConfig& c) { return &c.learner.critic_lr; });
  dbl("tau", [](RunConfig& c) { return &c.learner.tau; });
  add(
      "actor_update_every",
      [](RunConfig& c, const std::string& raw) {
        c.learner.actor_update_every =
            static_cast<int>(parse_long("actor_update_every", raw));
      },
      [](const RunConfig& c) {
        return std::to_string(c.learner.actor_update_every);
      });
  dbl("sigma_start", [](RunConfig& c) { return &c.learner.sigma_start; });
  dbl("sigma_end", [](RunConfig& c) { return &c.learner.sigma_end; });
  dbl("temperature", [](RunConfig& c) { return &c.learner.temperature; });
  add(
      "actor_hidden",
      [](RunConfig& c, const std::string& raw) {
        c.learner.actor_hidden =
            static_cast<std::size_t>(parse_long("actor_hidden", raw));
      },
      [](const RunConfig& c) {
        return std::to_string(c.learner.actor_hidden);
      });
  add(
      "critic_hidden",
      [](RunConfig& c, const std::string& raw) {
        c.learner.critic_hidden =
            static_cast<std::size_t>(parse_long("critic_hidden", raw));
      },
      [](const RunConfig& c) {
        return std::to_string(c.learner.critic_hidden);
      });
  add(
      "obs_refresh_every",
      [](RunConfig& c, const std::string& raw) {
        c.learner.obs_refresh_every =
            static_cast<int>(parse_long("obs_refresh_every", raw));
      },
      [](const RunConfig& c) {
        return std::to_string(c.learner.obs_refresh_every);
      });
  add(
      "k_hist",
      [](RunConfig& c, const std::string& raw) {
        c.learner.k_hist = static_cast<int>(parse_long("k_hist", raw));
      },
      [](const RunConfig& c) { return std::to_string(c.learner.k_hist); });
  add(
      "k_pred",
      [](RunConfig& c, const std::string& raw) {
        c.learner.k_pred = static_cast<int>(parse_long("k_pred", raw));
      },
      [](const RunConfig& c) { return std::to_string(c.learner.k_pred); });
  add(
      "forecast_horizon",
      [](RunConfig& c, const std::string& raw) {
        c.learner.forecast_horizon =
            static_cast<int>(parse_long("forecast_horizon", raw));
      },
      [](const RunConfig& c) {
        return std::to_string(c.learner.forecast_horizon);
      });
  add(
      "gnn_hidden",
      [](RunConfig& c, const std::string& raw) {
        c.learner.gnn_hidden =
            static_cast<std::size_t>(parse_long("gnn_hidden", raw));
      },
      [](const RunConfig& c) { return std::to_string(c.learner.gnn_hidden); });
  add(
      "gnn_layers",
      [](RunConfig& c, const std::string& raw) {
        c.learner.gnn_layers =
            static_cast<std::size_t>(parse_long("gnn_layers", raw));
      },
      [](const RunConfig& c) { return std::to_string(c.learner.gnn_layers); });
  dbl("predictor_lr", [](RunConfig& c) { return &c.learner.predictor_lr; });

  return keys;
}

const std::vector<KeyBinding>& key_table() {
  static const std::vector<KeyBinding> table = bindings();
  return table;
}

const KeyBinding* find_key(const std::string& name) {
  for (const auto& k : key_table()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

}  // namespace

void RunConfig::validate() const {
  try {
    env.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(episodes > 0, "config key episodes: must be > 0");
  require(slots_per_episode > 0, "config key slots_per_episode: must be > 0");
  require(report_stride > 0, "config key report_stride: must be > 0");
  require(!sweep_servers.empty(),
          "config key sweep_servers: must not be empty");
  for (int n : sweep_servers) {
    require(n > 0, "config key sweep_servers: entries must be > 0");
  }
  require(learner.gamma >= 0.0 && learner.gamma < 1.0,
          "config key gamma: must lie in [0, 1)");
  require(learner.batch_size > 0, "config key batch_size: must be > 0");
  require(learner.replay_capacity >= learner.batch_size,
          "config key replay_capacity: must be >= batch_size");
  require(learner.tau >= 0.0 && learner.tau <= 1.0,
          "config key tau: must lie in [0, 1]");
  require(learner.actor_update_every > 0,
          "config key actor_update_every: must be > 0");
  require(learner.k_hist > 0, "config key k_hist: must be > 0");
  require(learner.obs_refresh_every > 0,
          "config key obs_refresh_every: must be > 0");
  require(learner.k_pred > 0, "config key k_pred: must be > 0");
  require(learner.gnn_layers > 0, "config key gnn_layers: must be > 0");
}

RunConfig load_config(const std::string& path,
                      const std::map<std::string, std::string>& overrides) {
  RunConfig cfg;
  if (!path.empty()) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::string line;
    long lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": expected 'key = value'");
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      const KeyBinding* binding = find_key(key);
      if (binding == nullptr) {
        throw ConfigError("unknown config key: " + key);
      }
      binding->parse(cfg, value);
    }
  }
  for (const auto& [key, value] : overrides) {
    const KeyBinding* binding = find_key(key);
    if (binding == nullptr) {
      throw ConfigError("unknown config key: " + key);
    }
    binding->parse(cfg, value);
  }
  cfg.validate();
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out = "# effective configuration\n";
  for (const auto& k : key_table()) {
    out += k.name;
    out += " = ";
    out += k.print(cfg);
    out += '\n';
  }
  return out;
}

void write_effective_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw ConfigError("cannot write effective config: " + path);
  os << serialize_config(cfg);
}

}  // namespace meclab::harness
