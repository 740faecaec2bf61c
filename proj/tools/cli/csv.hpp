#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "spde/experiments.hpp"

namespace spde::cli {

/// 17 significant digits, '.' decimal point, no grouping; independent of the C++ and C locales.
std::string format_number(double value);

/// Fixed notation with the given number of decimals, for human-facing output.
std::string format_fixed(double value, int digits);

/// N,M,rv_count,effort,rms_error,std_error
std::string error_table_csv(const ErrorTable& table);

/// error_level,exp_rv_count,implicit_rv_count,ratio
std::string comparison_csv(const EfficiencyComparison& comparison);

std::string noise_check_csv(const std::vector<NoiseCheckRow>& rows);

/// Writes bytes verbatim (LF line endings preserved); throws IoError.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace spde::cli
