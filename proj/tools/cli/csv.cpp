#include "csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "config.hpp"

namespace spde::cli {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return ec == std::errc() ? std::string(buf.data(), ptr) : std::string("nan");
}

std::string format_fixed(double value, int digits) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, digits);
  return ec == std::errc() ? std::string(buf.data(), ptr) : std::string("nan");
}

std::string error_table_csv(const ErrorTable& table) {
  std::string out = "N,M,rv_count,effort,rms_error,std_error\n";
  for (const ErrorRow& row : table.rows) {
    out += std::to_string(row.n_modes) + ',' + std::to_string(row.n_steps) + ',' + std::to_string(row.rv_count) +
           ',' + format_number(row.effort) + ',' + format_number(row.rms_error) + ',' +
           format_number(row.std_error) + '\n';
  }
  return out;
}

std::string comparison_csv(const EfficiencyComparison& comparison) {
  std::string out = "error_level,exp_rv_count,implicit_rv_count,ratio\n";
  for (const EfficiencyPoint& p : comparison.points) {
    out += format_number(p.error_level) + ',' + format_number(p.exp_rv_count) + ',' +
           format_number(p.implicit_rv_count) + ',' + format_number(p.ratio()) + '\n';
  }
  return out;
}

std::string noise_check_csv(const std::vector<NoiseCheckRow>& rows) {
  std::string out =
      "mode,lambda,b,analytic_std_I,sample_std_I,z_I,analytic_std_dW,sample_std_dW,z_dW,analytic_corr,sample_corr,"
      "z_corr,pass\n";
  for (const NoiseCheckRow& r : rows) {
    out += std::to_string(r.mode);
    for (double v : {r.lambda, r.amplitude, r.analytic_std_convolution, r.sample_std_convolution, r.z_convolution,
                     r.analytic_std_brownian, r.sample_std_brownian, r.z_brownian, r.analytic_correlation,
                     r.sample_correlation, r.z_correlation}) {
      out += ',' + format_number(v);
    }
    out += r.pass ? ",1\n" : ",0\n";
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace spde::cli
