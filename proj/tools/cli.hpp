#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <stratspace/estimate.hpp>

namespace stratspace::cli {

// argv[0] is the program name. Exit codes: 0 success, 1 IO failure,
// 2 configuration error.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

// Percent with two decimals, rounding half to even.
std::string format_percent(double part, double whole);

// Text table; hectares and percent cover when units are "m2".
std::string format_report(const EstimateReport& r, std::string_view units);

}  // namespace stratspace::cli
