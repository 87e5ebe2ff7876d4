#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace phasebound::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

// "head:rest" -> {head, rest}; rest empty when there is no colon.
std::pair<std::string, std::string> tagged(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {trim(text), ""};
  return {trim(text.substr(0, colon)), trim(text.substr(colon + 1))};
}

std::pair<double, double> range(const std::string& text, const std::string& what) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const double x = parse_double(text, what);
    return {x, x};
  }
  return {parse_double(text.substr(0, dots), what), parse_double(text.substr(dots + 2), what)};
}

// Library domain errors raised while building from user text are
// configuration problems.
template <typename F>
auto as_config(F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const DimensionError& e) {
    throw ConfigError(e.what());
  } catch (const UnsupportedError& e) {
    throw ConfigError(e.what());
  }
}

std::string get(const KeyValues& kv, const std::string& key) {
  const auto it = kv.find(key);
  return it == kv.end() ? "" : it->second;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& known_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"hamiltonian", ""},
      {"sigma_lower", "fock:0"},
      {"sigma_upper", "fock:0"},
      {"beta", ""},
      {"beta_min", ""},
      {"beta_max", ""},
      {"beta_steps", "1"},
      {"dim", "128"},
      {"output", ""},
      {"trace", ""},
      {"family", ""},
      {"direction", "lower"},
      {"count", "10"},
      {"points", "5"},
      {"extent", "2"},
      {"radial_nodes", "32"},
      {"tail_eps", "1e-12"},
      {"grid_doubling_tol", "1e-6"},
      {"cartesian_nodes", "32"},
  };
  return keys;
}

KeyValues parse_key_values(const std::string& text, const std::string& origin) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const auto& keys = known_keys();
    if (std::none_of(keys.begin(), keys.end(), [&](const auto& k) { return k.first == key; })) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str(), path);
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError("malformed number for " + what + ": '" + text + "'");
  }
  return v;
}

long parse_int(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("malformed integer for " + what + ": '" + text + "'");
  }
  return v;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_double(item, what));
  return out;
}

HamiltonianSpec parse_hamiltonian(const std::string& text) {
  const auto [name, args] = tagged(text);
  return as_config([&, name = name, args = args] {
    if (name == "harmonic") {
      return args.empty() ? HamiltonianSpec::harmonic()
                          : HamiltonianSpec::harmonic(parse_double(args, "harmonic omega"));
    }
    if (name == "kerr") {
      const auto v = parse_double_list(args, "kerr a,b");
      if (v.size() != 2) throw ConfigError("kerr needs two values a,b: '" + text + "'");
      return HamiltonianSpec::kerr(v[0], v[1]);
    }
    if (name == "anharmonic") {
      if (args.empty()) throw ConfigError("anharmonic needs lambda: '" + text + "'");
      return HamiltonianSpec::anharmonic(parse_double(args, "anharmonic lambda"));
    }
    if (name == "numberpoly") {
      return HamiltonianSpec::number_poly(parse_double_list(args, "numberpoly coefficients"));
    }
    throw ConfigError("unknown hamiltonian '" + text + "'");
  });
}

SigmaState parse_sigma(const std::string& text, std::size_t dim) {
  const auto [name, args] = tagged(text);
  return as_config([&, name = name, args = args] {
    if (name == "fock") {
      const long m = parse_int(args, "fock index");
      if (m < 0) throw ConfigError("fock index must be >= 0");
      return SigmaState::fock_projector(static_cast<std::size_t>(m), dim);
    }
    if (name == "diag") return SigmaState::from_diagonal(parse_double_list(args, "diag weights"), dim);
    if (name == "squeezed") return SigmaState::squeezed_vacuum(parse_double(args, "omega"), dim);
    throw ConfigError("unknown sigma '" + text + "'");
  });
}

SigmaFamily parse_family(const std::string& text, std::size_t dim) {
  const auto [name, args] = tagged(text);
  return as_config([&, name = name, args = args] {
    if (name == "fock") {
      const auto [a, b] = range(args, "fock range");
      if (a < 0 || a != std::floor(a) || b != std::floor(b)) {
        throw ConfigError("fock family needs integer bounds: '" + text + "'");
      }
      return SigmaFamily::fock(static_cast<unsigned>(a), static_cast<unsigned>(b), dim);
    }
    if (name == "mix") {
      const auto [levels, t] = tagged(args);
      const auto m = parse_double_list(levels, "mix levels");
      if (m.size() != 2 || m[0] < 0 || m[1] < 0) throw ConfigError("mix needs two levels m1,m2");
      const auto [t0, t1] = t.empty() ? std::pair{0.0, 1.0} : range(t, "mix weight range");
      return SigmaFamily::two_point(static_cast<unsigned>(m[0]), static_cast<unsigned>(m[1]), dim,
                                    t0, t1);
    }
    if (name == "squeezed") {
      const auto [a, b] = range(args, "squeezed range");
      return SigmaFamily::squeezed(a, b, dim);
    }
    throw ConfigError("unknown sigma family '" + text + "'");
  });
}

RunConfig RunConfig::from(const KeyValues& given) {
  KeyValues kv;
  for (const auto& [k, v] : known_keys()) kv[k] = v;
  for (const auto& [k, v] : given) kv[k] = v;

  RunConfig c;
  if (!get(kv, "hamiltonian").empty()) c.hamiltonian = parse_hamiltonian(kv["hamiltonian"]);
  c.sigma_lower = kv["sigma_lower"];
  c.sigma_upper = kv["sigma_upper"];

  const long dim = parse_int(kv["dim"], "dim");
  if (dim < 16) throw ConfigError("dim must be at least 16");
  c.dim = static_cast<std::size_t>(dim);

  if (!kv["beta"].empty()) {
    c.betas = parse_double_list(kv["beta"], "beta");
    std::sort(c.betas.begin(), c.betas.end());
    c.betas.erase(std::unique(c.betas.begin(), c.betas.end()), c.betas.end());
  } else if (!kv["beta_min"].empty()) {
    const double lo = parse_double(kv["beta_min"], "beta_min");
    const double hi = kv["beta_max"].empty() ? lo : parse_double(kv["beta_max"], "beta_max");
    const long steps = parse_int(kv["beta_steps"], "beta_steps");
    if (!(lo > 0.0) || hi < lo || steps < 1) {
      throw ConfigError("need 0 < beta_min <= beta_max and beta_steps >= 1");
    }
    c.betas = BetaGrid::log_spaced(lo, hi, static_cast<std::size_t>(steps)).values;
  } else {
    c.betas = {1.0};
  }
  for (double b : c.betas) {
    if (!(b > 0.0)) throw ConfigError("beta values must be positive");
  }

  c.output = kv["output"];
  c.trace = kv["trace"];
  c.family = kv["family"];
  c.direction = kv["direction"];
  if (c.direction != "lower" && c.direction != "upper") {
    throw ConfigError("direction must be lower or upper");
  }
  const long count = parse_int(kv["count"], "count");
  const long points = parse_int(kv["points"], "points");
  if (count < 1 || points < 1) throw ConfigError("count and points must be positive");
  c.count = static_cast<std::size_t>(count);
  c.points = static_cast<std::size_t>(points);
  c.extent = parse_double(kv["extent"], "extent");

  const long rn = parse_int(kv["radial_nodes"], "radial_nodes");
  const long cn = parse_int(kv["cartesian_nodes"], "cartesian_nodes");
  if (rn < 16 || cn < 16) throw ConfigError("quadrature node counts must be at least 16");
  c.quad.radial_nodes = static_cast<std::size_t>(rn);
  c.quad.cartesian_nodes_per_axis = static_cast<std::size_t>(cn);
  c.quad.tail_eps = parse_double(kv["tail_eps"], "tail_eps");
  c.quad.grid_doubling_tol = parse_double(kv["grid_doubling_tol"], "grid_doubling_tol");
  as_config([&] {
    c.quad.validate();
    return 0;
  });
  return c;
}

const HamiltonianSpec& RunConfig::require_hamiltonian() const {
  if (!hamiltonian) throw ConfigError("missing required key: hamiltonian");
  return *hamiltonian;
}

}  // namespace phasebound::cli
