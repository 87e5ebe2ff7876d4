#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>

#include "csv.hpp"

namespace phasebound::cli {

namespace {

// Writes to `path` when given, otherwise to `fallback`.
void emit(const std::string& path, std::ostream& fallback,
          const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw ConfigError("cannot write " + path);
  body(file);
  if (!file) throw Error("write to " + path + " failed");
}

std::string direction_name(Direction d) {
  return d == Direction::maximize_lower ? "maximize_lower" : "minimize_upper";
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<BoundResult> run_grid(const HamiltonianSpec& h, const SigmaState& lo,
                                  const SigmaState& up, const std::vector<double>& betas,
                                  const QuadratureConfig& quad, std::size_t dim) {
  std::vector<BoundResult> rows;
  for (const auto& pt : sweep(h, lo, up, BetaGrid(betas), quad, dim)) {
    if (!pt.error.empty()) {
      if (pt.result) throw SandwichFailure(pt.error, *pt.result);
      throw Error("beta=" + format_number(pt.beta) + ": " + pt.error);
    }
    rows.push_back(*pt.result);
  }
  return rows;
}

int reproduce_harmonic(const RunConfig& cfg, std::ostream& out, CheckLog& check) {
  const std::size_t dim = 256;
  const auto h = HamiltonianSpec::harmonic();
  const auto vac = SigmaState::fock_projector(0, dim);
  const std::vector<double> betas = {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
  const auto rows = run_grid(h, vac, vac, betas, cfg.quad, dim);
  emit(cfg.output, out, [&](std::ostream& o) { write_bounds_csv(o, rows); });
  for (const auto& r : rows) {
    const double b = r.beta;
    const double lo = std::exp(-b / 2) / b;
    const double up = std::exp(b / 2) / b;
    const double z = 1.0 / (2.0 * std::sinh(b / 2));
    const std::string at = "beta=" + format_number(b);
    check("lower_closed_form " + at, rel(r.lower, lo) < 1e-8, format_number(r.lower));
    check("upper_closed_form " + at, rel(r.upper, up) < 1e-8, format_number(r.upper));
    check("sandwich " + at, lo <= z && z <= up, format_number(z));
    if (r.z_exact) check("exact_z " + at, rel(*r.z_exact, z) < 1e-8, format_number(*r.z_exact));
  }
  return 0;
}

int reproduce_kerr(const RunConfig& cfg, std::ostream& out, CheckLog& check) {
  const std::size_t dim = 256;
  const auto h = HamiltonianSpec::kerr(1, 5);
  const auto s3 = SigmaState::fock_projector(3, dim);
  const auto vac = SigmaState::fock_projector(0, dim);
  const std::vector<double> betas = {0.005, 0.01, 0.1, 1.0, 10.0, 50.0};
  const auto rows = run_grid(h, s3, vac, betas, cfg.quad, dim);
  emit(cfg.output, out, [&](std::ostream& o) { write_bounds_csv(o, rows); });

  const auto e = energy_bounds(h, s3, vac, 50.0, cfg.quad, dim);
  check("exact_ground_energy", std::abs(e.exact_e0 + 4.0) < 1e-12, format_number(e.exact_e0));
  // min over phase space of the sigma' = |3><3| lower symbol is an expectation
  // value of H, hence a variational upper bound on E0.
  check("variational_upper_bound", e.limit_upper && *e.limit_upper <= -4.0 + 1e-9,
        e.limit_upper ? format_number(*e.limit_upper) : "n/a");
  check("free_energy_upper_bound", e.e0_upper >= e.exact_e0, format_number(e.e0_upper));
  check("ground_lower_bound_in_window", e.e0_lower >= -12.0 && e.e0_lower <= e.exact_e0,
        format_number(e.e0_lower));
  return 0;
}

int reproduce_anharmonic(const RunConfig& cfg, std::ostream& out, CheckLog& check) {
  const std::size_t dim = 256;
  const auto h = HamiltonianSpec::anharmonic(1.0);
  const auto vac = SigmaState::fock_projector(0, dim);
  const std::vector<double> betas = {0.01, 0.1, 1.0, 10.0, 40.0};
  const auto rows = run_grid(h, vac, vac, betas, cfg.quad, dim);
  emit(cfg.output, out, [&](std::ostream& o) { write_bounds_csv(o, rows); });

  const auto e = energy_bounds(h, vac, vac, 40.0, cfg.quad, dim);
  check("exact_2e0", std::abs(2.0 * e.exact_e0 - 1.392351641530) < 1e-8,
        format_number(2.0 * e.exact_e0));
  check("e0_in_window", e.exact_e0 >= 0.0 && e.exact_e0 <= 0.875, format_number(e.exact_e0));
  check("variational_upper_bound", e.limit_upper && std::abs(*e.limit_upper - 0.875) < 1e-12,
        e.limit_upper ? format_number(*e.limit_upper) : "n/a");
  check("ground_lower_bound", e.e0_lower <= e.exact_e0, format_number(e.e0_lower));
  for (double b : {0.1, 1.0}) {
    const double closed = classical_partition(h, b, cfg.quad);
    const double direct = phase_space_integral_2d(classical_symbol(h), b, cfg.quad).value();
    check("classical_bessel_vs_quadrature beta=" + format_number(b), rel(closed, direct) < 1e-6,
          format_number(closed) + " vs " + format_number(direct));
  }
  return 0;
}

}  // namespace

void CheckLog::operator()(const std::string& name, bool ok, const std::string& detail) {
  err_ << "check " << name << ": " << (ok ? "PASS" : "FAIL") << " (" << detail << ")\n";
  if (!ok && first_failure_.empty()) first_failure_ = name;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto& h = cfg.require_hamiltonian();
  const std::size_t k = cfg.count;
  if (4 * k > cfg.dim) throw ConfigError("count must be at most dim/4 for the truncation check");
  const auto full = hermitian_eigs(h.matrix(cfg.dim)).eigenvalues;
  const auto half = hermitian_eigs(h.matrix(cfg.dim / 2)).eigenvalues;
  double delta = 0.0;
  for (std::size_t i = 0; i < k; ++i) delta = std::max(delta, std::abs(full[i] - half[i]));
  emit(cfg.output, out, [&](std::ostream& o) {
    o << "# hamiltonian=" << h.label() << " dim=" << cfg.dim
      << " truncation_delta=" << format_number(delta) << '\n';
    if (h.kind() == HamiltonianSpec::Kind::number_poly) {
      // Number polynomials are diagonal: list energies by Fock label.
      const auto& c = h.number_coeffs();
      o << "n,energy\n";
      for (std::size_t n = 0; n < k; ++n) {
        const double x = static_cast<double>(n);
        o << n << ',' << format_number(c[0] + c[1] * x + c[2] * x * x) << '\n';
      }
    } else {
      o << "rank,energy\n";
      for (std::size_t i = 0; i < k; ++i) o << i << ',' << format_number(full[i]) << '\n';
    }
  });
  if (delta > 1e-6) err << "warning: lowest levels move by " << format_number(delta)
                        << " between dim/2 and dim\n";
  return kOk;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto& h = cfg.require_hamiltonian();
  const auto lo = parse_sigma(cfg.sigma_lower, cfg.dim);
  const auto up = parse_sigma(cfg.sigma_upper, cfg.dim);
  if (!up.is_number_diagonal()) {
    throw ConfigError("sigma_upper must be a function of N (fock:m or diag:...)");
  }
  const auto points = sweep(h, lo, up, BetaGrid(cfg.betas), cfg.quad, cfg.dim);
  std::vector<BoundResult> rows;
  int code = kOk;
  for (const auto& pt : points) {
    if (!pt.error.empty() && !pt.result) throw Error("beta=" + format_number(pt.beta) + ": " + pt.error);
    rows.push_back(*pt.result);
    if (!pt.error.empty()) {
      err << "sandwich violation: " << pt.error << "\n  row: " << bounds_row(*pt.result) << '\n';
      code = kSandwichViolation;
    } else if (!pt.result->z_exact) {
      err << "note: beta=" << format_number(pt.beta) << ": " << pt.result->z_exact_note << '\n';
    }
  }
  emit(cfg.output, out, [&](std::ostream& o) { write_bounds_csv(o, rows); });
  return code;
}

int cmd_symbols(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto& h = cfg.require_hamiltonian();
  const auto lo = parse_sigma(cfg.sigma_lower, cfg.dim);
  const auto up = parse_sigma(cfg.sigma_upper, cfg.dim);
  const auto lower = lower_symbol_closed(h, moments(lo));
  std::optional<PhaseSymbol> upper;
  std::optional<UpperCoefficients> coeffs;
  if (up.is_number_diagonal()) {
    coeffs = upper_coefficients(up.nbar(), up.n2bar());
    upper = upper_symbol(h, *coeffs);
  }
  const auto hm = h.matrix(cfg.dim);
  emit(cfg.output, out, [&](std::ostream& o) {
    o << "hamiltonian=" << h.label() << '\n';
    o << "sigma_lower=" << lo.describe() << '\n';
    o << "lower_symbol=" << lower.describe() << '\n';
    o << "sigma_upper=" << up.describe() << '\n';
    if (upper) {
      o << "upper_symbol=" << upper->describe() << '\n';
      o << "k2=" << format_number(coeffs->k2) << "\nk4=" << format_number(coeffs->k4)
        << "\nk6=" << format_number(coeffs->k6) << "\na2=" << format_number(coeffs->a2)
        << "\na4=" << format_number(coeffs->a4) << '\n';
    } else {
      o << "upper_symbol=unavailable (sigma_upper is not a function of N)\n";
    }
    o << "\np,q,lower_closed,lower_numeric,upper\n";
    const std::size_t n = cfg.points;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        auto coord = [&](std::size_t k) {
          return n == 1 ? 0.0 : -cfg.extent + 2.0 * cfg.extent * double(k) / double(n - 1);
        };
        const double p = coord(i);
        const double q = coord(j);
        const auto num = lower_symbol_numeric(hm, lo, p, q);
        o << format_number(p) << ',' << format_number(q) << ',' << format_number(lower(p, q))
          << ',' << format_number(num.value) << ','
          << (upper ? format_number((*upper)(p, q)) : std::string()) << '\n';
      }
    }
  });
  return kOk;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto& h = cfg.require_hamiltonian();
  if (cfg.family.empty()) throw ConfigError("missing required key: family");
  if (cfg.betas.size() != 1) throw ConfigError("optimize takes a single beta");
  const auto family = parse_family(cfg.family, cfg.dim);
  const double beta = cfg.betas.front();
  OptimizationReport rep;
  try {
    rep = cfg.direction == "lower" ? optimize_lower(h, family, beta, cfg.quad)
                                   : optimize_upper(h, family, beta, cfg.quad);
  } catch (const UnsupportedError& e) {
    throw ConfigError(e.what());
  }
  const std::string pname = family.parameter_name();
  auto param = [&](double x) {
    return family.discrete() ? std::to_string(std::lround(x)) : format_number(x);
  };
  emit(cfg.output, out, [&](std::ostream& o) {
    o << "hamiltonian=" << h.label() << '\n';
    o << "family=" << family.describe() << '\n';
    o << "direction=" << direction_name(rep.direction) << '\n';
    o << "beta=" << format_number(beta) << '\n';
    o << "best_" << pname << '=' << param(rep.best_parameter) << '\n';
    o << "best_sigma=" << rep.best_sigma << '\n';
    o << "best_log_bound=" << format_number(rep.best_log_bound) << '\n';
    o << "evaluations=" << rep.evaluations << '\n';
  });
  auto write_trace = [&](std::ostream& o) {
    o << pname << ",log_bound\n";
    for (const auto& t : rep.trace) o << param(t.parameter) << ',' << format_number(t.log_bound) << '\n';
  };
  if (!cfg.trace.empty()) {
    emit(cfg.trace, out, write_trace);
  } else if (cfg.output.empty()) {
    out << '\n';
    write_trace(out);
  }
  return kOk;
}

int cmd_reproduce(const std::string& name, const RunConfig& cfg, std::ostream& out,
                  std::ostream& err) {
  CheckLog check(err);
  if (name == "harmonic") {
    reproduce_harmonic(cfg, out, check);
  } else if (name == "kerr") {
    reproduce_kerr(cfg, out, check);
  } else if (name == "anharmonic") {
    reproduce_anharmonic(cfg, out, check);
  } else {
    throw ConfigError("unknown preset '" + name + "' (harmonic, kerr, anharmonic)");
  }
  if (check.exit_code() != kOk) {
    err << "reproduce " << name << " failed: " << check.first_failure() << '\n';
  } else {
    err << "reproduce " << name << ": all checks passed\n";
  }
  return check.exit_code();
}

int exit_code_for(std::exception_ptr error, std::ostream& err) {
  try {
    std::rethrow_exception(error);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SandwichFailure& e) {
    err << "sandwich violation: " << e.what() << "\n  row: " << bounds_row(e.result) << '\n';
    return kSandwichViolation;
  } catch (const SandwichViolation& e) {
    err << "sandwich violation: " << e.what() << '\n';
    return kSandwichViolation;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  }
}

int run(const std::string& command, const KeyValues& kv, const std::string& argument,
        std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = RunConfig::from(kv);
    if (command == "spectrum") return cmd_spectrum(cfg, out, err);
    if (command == "bounds") return cmd_bounds(cfg, out, err);
    if (command == "symbols") return cmd_symbols(cfg, out, err);
    if (command == "optimize") return cmd_optimize(cfg, out, err);
    if (command == "reproduce") return cmd_reproduce(argument, cfg, out, err);
    throw ConfigError("unknown command '" + command + "'");
  } catch (...) {
    return exit_code_for(std::current_exception(), err);
  }
}

}  // namespace phasebound::cli
