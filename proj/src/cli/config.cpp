#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "gausskey/cli.hpp"

namespace gausskey::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const std::string& where, std::string_view key, const std::string& what) {
  throw ConfigError(where + ": " + std::string(key) + ": " + what);
}

double parse_real(std::string_view key, std::string_view text, const std::string& where) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    fail(where, key, "expected a real number, got '" + std::string(text) + "'");
  }
  if (!std::isfinite(value)) fail(where, key, "value must be finite");
  return value;
}

int parse_int(std::string_view key, std::string_view text, const std::string& where) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    fail(where, key, "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text, const std::string& where) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  fail(where, key, "expected true or false, got '" + std::string(text) + "'");
}

double parse_step(std::string_view key, std::string_view text, const std::string& where) {
  const double step = parse_real(key, text, where);
  if (!(step > 0.0)) fail(where, key, "step must be positive");
  return step;
}

}  // namespace

void apply_setting(RunConfig& c, std::string_view key, std::string_view raw,
                   const std::string& where) {
  const std::string_view value = trim(raw);
  if (key == "protocol") {
    const auto protocol = parse_protocol(value);
    if (!protocol) {
      fail(where, key, "expected noswitching, switching or switching-mixed, got '" +
                           std::string(value) + "'");
    }
    c.protocol = *protocol;
  } else if (key == "tau") {
    c.tau = parse_real(key, value, where);
  } else if (key == "omega") {
    c.omega = parse_real(key, value, where);
  } else if (key == "g") {
    c.g = parse_real(key, value, where);
  } else if (key == "gprime") {
    c.g_prime = parse_real(key, value, where);
  } else if (key == "mu") {
    if (value == "asymptotic") {
      c.mu.reset();
    } else {
      c.mu = parse_real(key, value, where);
    }
  } else if (key == "grid_resolution") {
    c.grid_resolution = parse_int(key, value, where);
    if (c.grid_resolution < 2) fail(where, key, "must be at least 2");
  } else if (key == "output") {
    c.output_path = std::string(value);
  } else if (key == "format") {
    if (value == "csv") {
      c.format = Format::csv;
    } else if (value == "json") {
      c.format = Format::json;
    } else {
      fail(where, key, "expected csv or json, got '" + std::string(value) + "'");
    }
  } else if (key == "clamp_nonnegative") {
    c.clamp_nonnegative = parse_bool(key, value, where);
  } else if (key == "gradient_step") {
    c.gradient_step = parse_step(key, value, where);
  } else if (key == "hessian_step") {
    c.hessian_step = parse_step(key, value, where);
  } else if (key == "mu_sweep") {
    std::vector<double> sweep;
    std::size_t start = 0;
    while (start <= value.size()) {
      const auto comma = value.find(',', start);
      const auto item = trim(value.substr(start, comma == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : comma - start));
      const double mu = parse_real(key, item, where);
      if (!(mu > 1.0)) fail(where, key, "every mu must be > 1");
      sweep.push_back(mu);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    c.mu_sweep = std::move(sweep);
  } else {
    throw ConfigError(where + ": unknown key '" + std::string(key) + "'");
  }
}

void apply_config_text(RunConfig& c, std::string_view text, const std::string& source) {
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const std::string where = source + ":" + std::to_string(number);
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where + ": expected key=value, got '" + std::string(view) + "'");
    }
    const auto key = trim(view.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": missing key before '='");
    apply_setting(c, key, view.substr(eq + 1), where);
  }
}

void apply_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  apply_config_text(c, text.str(), path);
}

}  // namespace gausskey::cli
