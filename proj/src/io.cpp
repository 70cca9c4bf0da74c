#include "collapse/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "collapse/error.hpp"

namespace collapse::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string csv_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

nlohmann::ordered_json json_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_double(*d);
    // Round-trip through the same text as CSV so output does not depend on
    // the JSON library's float printer.
    return nlohmann::ordered_json::parse(format_double(*d));
  }
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

const std::string& required(const KeyValues& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw Error(ErrorKind::invalid_parameter, "missing config key '" + key + "'");
  return it->second;
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "jsonl" || name == "json-lines") return Format::jsonl;
  throw Error(ErrorKind::invalid_parameter, "format must be csv or jsonl, got '" + name + "'");
}

std::string format_extension(Format f) { return f == Format::csv ? ".csv" : ".jsonl"; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TableWriter::TableWriter(const std::filesystem::path& path, Format format, std::vector<Column> columns)
    : path_(path), format_(format), columns_(std::move(columns)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  out_.open(path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw Error(ErrorKind::invalid_parameter, "cannot open output file " + path_.string());
  if (format_ == Format::csv) {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (i) out_ << ',';
      out_ << columns_[i].name;
      if (!columns_[i].unit.empty()) out_ << '[' << columns_[i].unit << ']';
    }
    out_ << '\n';
  } else {
    nlohmann::ordered_json header;
    header["columns"] = nlohmann::ordered_json::array();
    for (const auto& c : columns_) header["columns"].push_back({{"name", c.name}, {"unit", c.unit}});
    out_ << header.dump() << '\n';
  }
}

void TableWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_.size())
    throw Error(ErrorKind::invalid_parameter, "row width does not match the header of " + path_.string());
  if (format_ == Format::csv) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << csv_cell(cells[i]);
    }
  } else {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < cells.size(); ++i) obj[columns_[i].name] = json_cell(cells[i]);
    out_ << obj.dump();
  }
  out_ << '\n';
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::invalid_parameter, "config line " + std::to_string(number) + " is not key=value");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::invalid_parameter, "config line " + std::to_string(number) + " has an empty key");
    kv[key] = trim(t.substr(eq + 1));
  }
  return kv;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::invalid_parameter, "cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.contains("config") || !doc["config"].is_object())
      throw Error(ErrorKind::invalid_parameter, "JSON config " + path.string() + " has no \"config\" object");
    KeyValues kv;
    for (const auto& [k, v] : doc["config"].items()) kv[k] = v.is_string() ? v.get<std::string>() : v.dump();
    return kv;
  }
  return parse_key_values(text);
}

double get_double(const KeyValues& kv, const std::string& key) {
  const std::string& s = required(kv, key);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::invalid_parameter, key + " must be a number, got '" + s + "'");
}

long long get_int(const KeyValues& kv, const std::string& key) {
  const std::string& s = required(kv, key);
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::invalid_parameter, key + " must be an integer, got '" + s + "'");
}

bool get_bool(const KeyValues& kv, const std::string& key) {
  const std::string& s = required(kv, key);
  if (s == "1" || s == "true" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "no") return false;
  throw Error(ErrorKind::invalid_parameter, key + " must be a boolean, got '" + s + "'");
}

std::vector<double> get_double_list(const KeyValues& kv, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(required(kv, key));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(get_double({{key, trim(item)}}, key));
  if (out.empty()) throw Error(ErrorKind::invalid_parameter, key + " must list at least one value");
  return out;
}

std::filesystem::path sibling(const std::filesystem::path& path, const std::string& suffix) {
  auto out = path;
  out.replace_filename(path.stem().string() + "." + suffix + path.extension().string());
  return out;
}

}  // namespace collapse::io
