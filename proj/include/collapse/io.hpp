#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace collapse::io {

enum class Format { csv, jsonl };

Format parse_format(const std::string& name);
std::string format_extension(Format f);

struct Column {
  std::string name;
  std::string unit;
};

using Cell = std::variant<double, long long, std::string>;

/// Header-first table writer. CSV gets a "name[unit]" header line; JSON
/// lines get a leading {"columns": [...]} object, then one object per row.
/// Doubles are written with 17 significant digits so reruns are
/// byte-identical.
class TableWriter {
 public:
  TableWriter(const std::filesystem::path& path, Format format, std::vector<Column> columns);

  void row(const std::vector<Cell>& cells);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  Format format_;
  std::vector<Column> columns_;
  std::ofstream out_;
};

std::string format_double(double v);

/// Flat key=value configuration. Blank lines and lines starting with '#' are
/// skipped; whitespace around keys and values is trimmed.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(const std::string& text);

/// Reads a key=value file, or the "config" object of a run manifest when the
/// file is JSON.
KeyValues read_config_file(const std::filesystem::path& path);

/// Typed lookups that name the offending key on failure (invalid_parameter).
double get_double(const KeyValues& kv, const std::string& key);
long long get_int(const KeyValues& kv, const std::string& key);
bool get_bool(const KeyValues& kv, const std::string& key);
std::vector<double> get_double_list(const KeyValues& kv, const std::string& key);

/// Sibling file: "run.csv" with suffix "jumps" becomes "run.jumps.csv".
std::filesystem::path sibling(const std::filesystem::path& path, const std::string& suffix);

}  // namespace collapse::io
