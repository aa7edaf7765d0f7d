#include "fairshare/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "fairshare/parallel.hpp"
#include "fairshare/rng.hpp"
#include "fairshare/stats.hpp"

namespace fairshare {

namespace {

std::uint64_t fnv1a(const std::string& text, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
  throw ConfigError(source + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& source, int line, const std::string& value,
                    const std::string& key) {
  try {
    size_t pos = 0;
    const double x = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    fail(source, line, "invalid number for '" + key + "': " + value);
  }
}

Eigen::RowVectorXd parse_row(const std::string& source, int line,
                             const std::string& value, const std::string& key) {
  const auto toks = split_ws(value);
  if (toks.empty()) fail(source, line, "empty vector for '" + key + "'");
  Eigen::RowVectorXd row(static_cast<Index>(toks.size()));
  for (size_t i = 0; i < toks.size(); ++i) {
    row(static_cast<Index>(i)) = parse_double(source, line, toks[i], key);
  }
  return row;
}

Policy parse_policy(const std::string& source, int line, const std::string& tok) {
  if (tok == "drf") return Policy::drf();
  if (tok == "pf") return Policy::pf();
  if (tok.rfind("alpha:", 0) == 0) {
    return Policy::alpha_fair(parse_double(source, line, tok.substr(6), "policies"));
  }
  fail(source, line, "unknown policy '" + tok + "' (drf, pf, alpha:<a>)");
}

}  // namespace

std::string policy_label(const Policy& policy) {
  switch (policy.kind) {
    case PolicyKind::Drf:
      return "drf";
    case PolicyKind::Pf:
      return "pf";
    case PolicyKind::Alpha:
      return "alpha:" + fmt(policy.alpha);
  }
  return "?";
}

void ScenarioConfig::validate() const {
  if (name.empty()) throw ConfigError("scenario name missing");
  if (policies.empty() && simulator != Simulator::Permanent) {
    throw ConfigError(name + ": at least one policy required");
  }
  if (loads.empty()) throw ConfigError(name + ": sweep loads missing");
  for (double l : loads) {
    if (!(l > 0)) throw ConfigError(name + ": load points must be positive");
  }
  if (replications < 1) throw ConfigError(name + ": replications must be >= 1");
  if (!(warmup_fraction >= 0 && warmup_fraction < 1)) {
    throw ConfigError(name + ": warmup fraction must lie in [0,1)");
  }

  if (simulator == Simulator::Permanent) {
    if (!(perm_alpha > 0 && perm_alpha < 1)) {
      throw ConfigError(name + ": alpha must lie in (0,1)");
    }
    if (perm_betas.empty()) throw ConfigError(name + ": beta variants missing");
    for (const auto& [label, beta] : perm_betas) {
      if (!(beta >= perm_alpha && beta <= 1.0)) {
        throw ConfigError(name + ": beta '" + label + "' outside [alpha,1]");
      }
    }
    for (double l : loads) {
      if (l >= 1.0) throw ConfigError(name + ": rho2 grid must stay below 1");
    }
    return;
  }

  if (classes.empty()) throw ConfigError(name + ": class sections missing");
  double fractions = 0.0;
  const Index J = classes.front().demand.size();
  for (const auto& c : classes) {
    fractions += c.fraction;
    if (!(c.fraction >= 0)) throw ConfigError(name + ": fractions must be >= 0");
    if (!(c.sigma > 0) || !(c.tau > 0)) {
      throw ConfigError(name + ": sigma and tau must be positive");
    }
    if (c.demand.size() != J) {
      throw ConfigError(name + ": class demand lengths differ");
    }
    for (const auto& [label, row] : c.claims) {
      if (row.size() != J) {
        throw ConfigError(name + ": claim '" + label + "' length differs");
      }
    }
  }
  if (std::abs(fractions - 1.0) > 1e-9) {
    throw ConfigError(name + ": arrival fractions must sum to 1");
  }

  if (simulator == Simulator::Task) {
    if (capacity.size() != J) {
      throw ConfigError(name + ": capacity length must match demand length");
    }
    for (Index j = 0; j < J; ++j) {
      if (!(capacity(j) > 0)) throw ConfigError(name + ": capacities must be positive");
    }
    for (const auto& c : classes) {
      if (std::abs(c.sigma - std::round(c.sigma)) > 1e-9 || c.sigma < 1) {
        throw ConfigError(name + ": task sigma must be a positive integer");
      }
      for (Index j = 0; j < J; ++j) {
        if (c.demand(j) > capacity(j)) {
          throw ConfigError(name + ": task demand exceeds capacity");
        }
      }
    }
    if (distribution.stages < 1) throw ConfigError(name + ": erlang stages must be >= 1");
  }
}

std::vector<std::string> ScenarioConfig::variant_names() const {
  if (simulator == Simulator::Permanent) {
    std::vector<std::string> names;
    for (const auto& [label, beta] : perm_betas) names.push_back(label);
    return names;
  }
  std::set<std::string> labels;
  for (const auto& c : classes) {
    for (const auto& [label, row] : c.claims) labels.insert(label);
  }
  if (labels.empty()) return {""};
  // Keep the declaration order of the first class carrying claims.
  std::vector<std::string> ordered;
  for (const auto& c : classes) {
    for (const auto& [label, row] : c.claims) {
      if (std::find(ordered.begin(), ordered.end(), label) == ordered.end()) {
        ordered.push_back(label);
      }
    }
  }
  return ordered;
}

ScenarioConfig parse_scenario(const std::string& text, const std::string& source) {
  ScenarioConfig cfg;
  cfg.policies.clear();
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  enum class Section { Top, Sweep, Class } section = Section::Top;
  bool saw_simulator = false;

  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') fail(source, line, "unterminated section header");
      const std::string sec = trim(s.substr(1, s.size() - 2));
      if (sec == "sweep") {
        section = Section::Sweep;
      } else if (sec == "class") {
        section = Section::Class;
        cfg.classes.emplace_back();
      } else {
        fail(source, line, "unknown section '" + sec + "'");
      }
      continue;
    }

    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(source, line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(source, line, "empty key");
    if (value.empty()) fail(source, line, "empty value for '" + key + "'");

    if (section == Section::Sweep) {
      if (key == "loads") {
        for (const auto& tok : split_ws(value)) {
          cfg.loads.push_back(parse_double(source, line, tok, key));
        }
      } else {
        fail(source, line, "unknown sweep key '" + key + "'");
      }
      continue;
    }

    if (section == Section::Class) {
      ClassConfig& c = cfg.classes.back();
      if (key == "fraction") {
        c.fraction = parse_double(source, line, value, key);
      } else if (key == "sigma") {
        c.sigma = parse_double(source, line, value, key);
      } else if (key == "tau") {
        c.tau = parse_double(source, line, value, key);
      } else if (key == "demand") {
        c.demand = parse_row(source, line, value, key);
      } else if (key.rfind("claim ", 0) == 0) {
        const std::string label = trim(key.substr(6));
        if (label.empty()) fail(source, line, "claim needs a variant name");
        c.claims[label] = parse_row(source, line, value, key);
      } else {
        fail(source, line, "unknown class key '" + key + "'");
      }
      continue;
    }

    if (key == "name") {
      cfg.name = value;
    } else if (key == "simulator") {
      saw_simulator = true;
      if (value == "fluid") {
        cfg.simulator = ScenarioConfig::Simulator::Fluid;
      } else if (value == "task") {
        cfg.simulator = ScenarioConfig::Simulator::Task;
      } else if (value == "permanent") {
        cfg.simulator = ScenarioConfig::Simulator::Permanent;
      } else {
        fail(source, line, "unknown simulator '" + value + "'");
      }
    } else if (key == "policies") {
      for (const auto& tok : split_ws(value)) {
        cfg.policies.push_back(parse_policy(source, line, tok));
      }
    } else if (key == "replications") {
      cfg.replications = static_cast<int>(parse_double(source, line, value, key));
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_double(source, line, value, key));
    } else if (key == "warmup_fraction") {
      cfg.warmup_fraction = parse_double(source, line, value, key);
    } else if (key == "threads") {
      cfg.threads = static_cast<unsigned>(parse_double(source, line, value, key));
    } else if (key == "events") {
      cfg.events = parse_double(source, line, value, key);
    } else if (key == "jobs") {
      cfg.jobs = parse_double(source, line, value, key);
    } else if (key == "capacity") {
      cfg.capacity = parse_row(source, line, value, key).transpose();
    } else if (key == "distribution") {
      if (value == "exponential") {
        cfg.distribution.kind = TaskDistribution::Kind::Exponential;
        cfg.distribution.stages = 1;
      } else if (value.rfind("erlang:", 0) == 0) {
        cfg.distribution.kind = TaskDistribution::Kind::Erlang;
        cfg.distribution.stages =
            static_cast<int>(parse_double(source, line, value.substr(7), key));
      } else {
        fail(source, line, "unknown distribution '" + value + "'");
      }
    } else if (key == "alpha") {
      cfg.perm_alpha = parse_double(source, line, value, key);
    } else if (key.rfind("beta ", 0) == 0) {
      const std::string label = trim(key.substr(5));
      if (label.empty()) fail(source, line, "beta needs a variant name");
      cfg.perm_betas.emplace_back(label, parse_double(source, line, value, key));
    } else {
      fail(source, line, "unknown key '" + key + "'");
    }
  }

  if (!saw_simulator) throw ConfigError(source + ": simulator missing");
  // Task distribution mean follows the class tau at run time.
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string dump_scenario(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "name = " << cfg.name << "\n";
  out << "simulator = "
      << (cfg.simulator == ScenarioConfig::Simulator::Fluid
              ? "fluid"
              : cfg.simulator == ScenarioConfig::Simulator::Task ? "task"
                                                                 : "permanent")
      << "\n";
  if (!cfg.policies.empty()) {
    out << "policies =";
    for (const auto& p : cfg.policies) out << " " << policy_label(p);
    out << "\n";
  }
  out << "replications = " << cfg.replications << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "warmup_fraction = " << fmt(cfg.warmup_fraction) << "\n";
  if (cfg.threads != 0) out << "threads = " << cfg.threads << "\n";

  if (cfg.simulator == ScenarioConfig::Simulator::Task) {
    out << "jobs = " << fmt(cfg.jobs) << "\n";
    out << "capacity =";
    for (Index j = 0; j < cfg.capacity.size(); ++j) out << " " << fmt(cfg.capacity(j));
    out << "\n";
    out << "distribution = ";
    if (cfg.distribution.kind == TaskDistribution::Kind::Erlang) {
      out << "erlang:" << cfg.distribution.stages << "\n";
    } else {
      out << "exponential\n";
    }
  } else {
    out << "events = " << fmt(cfg.events) << "\n";
  }
  if (cfg.simulator == ScenarioConfig::Simulator::Permanent) {
    out << "alpha = " << fmt(cfg.perm_alpha) << "\n";
    for (const auto& [label, beta] : cfg.perm_betas) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", beta);
      out << "beta " << label << " = " << buf << "\n";
    }
  }

  out << "\n[sweep]\nloads =";
  for (double l : cfg.loads) out << " " << fmt(l);
  out << "\n";

  for (const auto& c : cfg.classes) {
    out << "\n[class]\n";
    out << "fraction = " << fmt(c.fraction) << "\n";
    out << "sigma = " << fmt(c.sigma) << "\n";
    out << "tau = " << fmt(c.tau) << "\n";
    out << "demand =";
    for (Index j = 0; j < c.demand.size(); ++j) out << " " << fmt(c.demand(j));
    out << "\n";
    for (const auto& [label, row] : c.claims) {
      out << "claim " << label << " =";
      for (Index j = 0; j < row.size(); ++j) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", row(j));
        out << " " << buf;
      }
      out << "\n";
    }
  }
  return out.str();
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
  return fnv1a(dump_scenario(cfg));
}

}  // namespace fairshare
