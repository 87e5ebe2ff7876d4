#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "phasebound/bounds.hpp"

namespace phasebound::cli {

/// 15 significant digits, '.' decimal point. Non-finite values are refused
/// (phasebound::Error), never printed.
std::string format_number(double x);
std::string format_optional(const std::optional<double>& x);

inline const char* kBoundsHeader =
    "beta,lower,z_exact,upper,f_lower,f_upper,z_classical,quad_error";

std::string bounds_row(const BoundResult& r);
void write_bounds_csv(std::ostream& out, const std::vector<BoundResult>& rows);

}  // namespace phasebound::cli
