// Apache License, Version 2.0, refer to LICENSE.txt

#include "essayplan/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "essayplan/error.hpp"

namespace essayplan {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config config;
  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ParseError("unterminated section header", line_no);
      section = trim(std::string_view(text).substr(1, text.size() - 2));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
    std::string key = trim(std::string_view(text).substr(0, eq));
    if (key.empty()) throw ParseError("empty key", line_no);
    if (!section.empty()) key = section + "." + key;
    config.set(std::move(key), trim(std::string_view(text).substr(eq + 1)));
  }
  return config;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  Config config = parse(in);
  config.base_dir_ = path.parent_path();
  return config;
}

void Config::set_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ValidationError("expected key=value, got '" + std::string(assignment) + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }

bool Config::has(std::string_view key) const { return values_.find(key) != values_.end(); }

std::optional<std::string> Config::get(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  read_.insert(std::string(key));
  return it->second;
}

std::string Config::get_string(std::string_view key, std::string_view fallback) const {
  return get(key).value_or(std::string(fallback));
}

namespace {

template <typename T>
T parse_value(std::string_view key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ValidationError("config key '" + std::string(key) + "': invalid value '" + value + "'");
  }
  return out;
}

}  // namespace

double Config::get_double(std::string_view key, double fallback) const {
  auto v = get(key);
  return v ? parse_value<double>(key, *v) : fallback;
}

std::size_t Config::get_size(std::string_view key, std::size_t fallback) const {
  auto v = get(key);
  return v ? parse_value<std::size_t>(key, *v) : fallback;
}

std::uint64_t Config::get_u64(std::string_view key, std::uint64_t fallback) const {
  auto v = get(key);
  return v ? parse_value<std::uint64_t>(key, *v) : fallback;
}

bool Config::get_bool(std::string_view key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ValidationError("config key '" + std::string(key) + "': expected a boolean, got '" + *v + "'");
}

std::set<std::string> Config::unused_keys() const {
  std::set<std::string> out;
  for (const auto& [key, value] : values_) {
    if (!read_.contains(key)) out.insert(key);
  }
  return out;
}

std::filesystem::path Config::resolve(const std::string& path) const {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir_.empty()) return p;
  return base_dir_ / p;
}

}  // namespace essayplan
