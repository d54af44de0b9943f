#include "grn/config.hpp"

#include <charconv>

#include "grn/csv.hpp"
#include "grn/error.hpp"

namespace grn {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

template <typename T>
T parse_integer(const std::string& key, const std::string& value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    throw DataError("config key '" + key + "': expected a non-negative integer, got '" + value + "'");
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text, const std::string& source) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError(source + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw DataError(source + ":" + std::to_string(line_no) + ": empty key");
    out[key] = trim(std::string_view(line).substr(eq + 1));
  }
  return out;
}

const std::vector<std::string>& train_config_keys() {
  static const std::vector<std::string> keys = {"optimizer", "unroll", "epochs", "eta",        "gamma",
                                                "p0",        "q",      "r",      "runs",       "seed",
                                                "init_scale", "tau",   "lambda"};
  return keys;
}

void apply_config_key(TrainConfig& cfg, const std::string& key, const std::string& value) {
  auto real = [&] { return csv::parse_number(value, "config key '" + key + "'"); };
  if (key == "optimizer") cfg.optimizer = parse_optimizer(value);
  else if (key == "unroll") cfg.unroll = parse_unroll(value);
  else if (key == "epochs") cfg.epochs = parse_integer<std::size_t>(key, value);
  else if (key == "eta") cfg.eta = real();
  else if (key == "gamma") cfg.gamma = real();
  else if (key == "p0") cfg.p0 = real();
  else if (key == "q") cfg.q = real();
  else if (key == "r") cfg.r = real();
  else if (key == "runs") cfg.runs = parse_integer<std::size_t>(key, value);
  else if (key == "seed") cfg.seed = parse_integer<std::uint64_t>(key, value);
  else if (key == "init_scale") cfg.init_scale = real();
  else if (key == "tau") cfg.tau = real();
  else if (key == "lambda") cfg.lambda = real();
  else throw DataError("unknown config key '" + key + "'");
}

TrainConfig load_train_config(const std::string& path, TrainConfig base) {
  for (const auto& [k, v] : parse_key_values(csv::read_file(path), path)) apply_config_key(base, k, v);
  base.validate();
  return base;
}

}  // namespace grn
