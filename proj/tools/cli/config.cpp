#include "config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string_view>

#include "csv.hpp"

namespace spde::cli {

namespace {

constexpr std::array<std::string_view, 4> kSubcommands = {"run", "converge", "compare", "noise-check"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw UsageError("invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
  std::vector<T> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_number<T>(key, text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (const T& v : values) {
    if (!out.empty()) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += format_number(v);
    } else {
      out += std::to_string(v);
    }
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "on") return true;
  if (text == "false" || text == "0" || text == "off" || text.empty()) return false;
  throw UsageError("invalid boolean '" + std::string(text) + "' for " + std::string(key));
}

struct Field {
  std::string_view name;
  std::string_view help;
  std::function<void(CliConfig&, std::string_view)> set;
  std::function<std::string(const CliConfig&)> get;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"subcommand", "run | converge | compare | noise-check",
       [](CliConfig& c, std::string_view v) { c.subcommand = trim(v); }, [](const CliConfig& c) { return c.subcommand; }},
      {"model", "reaction-diffusion-1d | spatial-linear-1d | allen-cahn-2d",
       [](CliConfig& c, std::string_view v) { c.model = trim(v); }, [](const CliConfig& c) { return c.model; }},
      {"scheme", "exp-euler | implicit-euler", [](CliConfig& c, std::string_view v) { c.scheme = trim(v); },
       [](const CliConfig& c) { return c.scheme; }},
      {"modes", "comma list of N (modes per axis)",
       [](CliConfig& c, std::string_view v) { c.modes = parse_list<std::size_t>("modes", v); },
       [](const CliConfig& c) { return join(c.modes); }},
      {"steps", "M for every level, or a comma list with one M per mode; default M=N (exp) or N^2 (implicit)",
       [](CliConfig& c, std::string_view v) { c.steps = parse_list<std::size_t>("steps", v); },
       [](const CliConfig& c) { return join(c.steps); }},
      {"implicit-modes", "compare: comma list of N for the implicit-euler ladder",
       [](CliConfig& c, std::string_view v) { c.implicit_modes = parse_list<std::size_t>("implicit-modes", v); },
       [](const CliConfig& c) { return join(c.implicit_modes); }},
      {"realizations", "Monte Carlo realizations",
       [](CliConfig& c, std::string_view v) { c.realizations = parse_number<std::size_t>("realizations", v); },
       [](const CliConfig& c) { return std::to_string(c.realizations); }},
      {"seed", "64-bit noise seed",
       [](CliConfig& c, std::string_view v) { c.seed = parse_number<std::uint64_t>("seed", v); },
       [](const CliConfig& c) { return std::to_string(c.seed); }},
      {"reference-modes", "N of the exp-euler reference",
       [](CliConfig& c, std::string_view v) {
         v = trim(v);
         c.reference_modes = v.empty() ? std::nullopt : std::optional(parse_number<std::size_t>("reference-modes", v));
       },
       [](const CliConfig& c) { return c.reference_modes ? std::to_string(*c.reference_modes) : std::string(); }},
      {"reference-steps", "M of the exp-euler reference",
       [](CliConfig& c, std::string_view v) {
         v = trim(v);
         c.reference_steps = v.empty() ? std::nullopt : std::optional(parse_number<std::size_t>("reference-steps", v));
       },
       [](const CliConfig& c) { return c.reference_steps ? std::to_string(*c.reference_steps) : std::string(); }},
      {"snapshots", "run: comma list of snapshot times as fractions of T",
       [](CliConfig& c, std::string_view v) { c.snapshots = parse_list<double>("snapshots", v); },
       [](const CliConfig& c) { return join(c.snapshots); }},
      {"out", "output directory", [](CliConfig& c, std::string_view v) { c.out = trim(v); },
       [](const CliConfig& c) { return c.out; }},
      {"svg", "also write SVG plots", [](CliConfig& c, std::string_view v) { c.svg = parse_bool("svg", v); },
       [](const CliConfig& c) { return std::string(c.svg ? "true" : "false"); }},
      {"workers", "worker threads for Monte Carlo studies",
       [](CliConfig& c, std::string_view v) { c.workers = parse_number<std::size_t>("workers", v); },
       [](const CliConfig& c) { return std::to_string(c.workers); }},
      {"samples", "noise-check: samples per mode",
       [](CliConfig& c, std::string_view v) { c.samples = parse_number<std::size_t>("samples", v); },
       [](const CliConfig& c) { return std::to_string(c.samples); }},
  };
  return table;
}

const Field& field(std::string_view name) {
  for (const Field& f : fields()) {
    if (f.name == name) return f;
  }
  throw UsageError("unknown configuration key '" + std::string(name) + "'");
}

}  // namespace

void apply_config_text(CliConfig& config, const std::string& text, const std::vector<std::string>& skip_keys) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key(trim(body.substr(0, eq)));
    if (std::find(skip_keys.begin(), skip_keys.end(), key) != skip_keys.end()) continue;
    field(key).set(config, body.substr(eq + 1));
  }
}

std::string render(const CliConfig& config) {
  std::string out;
  for (const Field& f : fields()) {
    out += f.name;
    out += '=';
    out += f.get(config);
    out += '\n';
  }
  return out;
}

std::optional<CliConfig> parse_cli(int argc, const char* const* argv) {
  CLI::App app{"Spectral Galerkin solvers and strong-error benchmarks for semilinear parabolic SPDEs", "spde_bench"};
  std::map<std::string, std::string, std::less<>> raw;
  std::map<std::string, CLI::Option*, std::less<>> options;

  for (const Field& f : fields()) {
    const std::string name(f.name);
    if (name == "svg") continue;
    if (name == "subcommand") {
      options[name] = app.add_option("subcommand", raw[name], std::string(f.help));
    } else {
      options[name] = app.add_option("--" + name, raw[name], std::string(f.help));
    }
  }
  bool svg = false;
  CLI::Option* svg_option = app.add_flag("--svg", svg, "also write SVG plots");
  std::string config_path;
  app.add_option("--config", config_path, "key=value file; flags on the command line take precedence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  CliConfig config;
  std::vector<std::string> given;
  for (const auto& [name, option] : options) {
    if (option->count() > 0) given.push_back(name);
  }
  if (svg_option->count() > 0) given.emplace_back("svg");

  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw IoError("cannot read config file '" + config_path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    apply_config_text(config, text.str(), given);
  }
  for (const std::string& name : given) {
    if (name == "svg") {
      config.svg = svg;
    } else {
      field(name).set(config, raw[name]);
    }
  }

  if (config.subcommand.empty()) throw UsageError("missing subcommand (run | converge | compare | noise-check)");
  if (std::find(kSubcommands.begin(), kSubcommands.end(), config.subcommand) == kSubcommands.end()) {
    throw UsageError("unknown subcommand '" + config.subcommand + "'");
  }
  return config;
}

}  // namespace spde::cli
