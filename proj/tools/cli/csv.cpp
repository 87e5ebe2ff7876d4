#include "csv.hpp"

#include <cmath>
#include <cstdio>

namespace phasebound::cli {

std::string format_number(double x) {
  if (!std::isfinite(x)) throw Error("refusing to write a non-finite number");
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string format_optional(const std::optional<double>& x) {
  return x ? format_number(*x) : std::string();
}

std::string bounds_row(const BoundResult& r) {
  std::string row = format_number(r.beta);
  for (const auto& v : {std::optional<double>(r.lower), r.z_exact, std::optional<double>(r.upper),
                        std::optional<double>(r.f_lower), std::optional<double>(r.f_upper),
                        r.z_classical, std::optional<double>(r.quad_error)}) {
    row += ',';
    row += format_optional(v);
  }
  return row;
}

void write_bounds_csv(std::ostream& out, const std::vector<BoundResult>& rows) {
  out << kBoundsHeader << '\n';
  for (const auto& r : rows) out << bounds_row(r) << '\n';
}

}  // namespace phasebound::cli
