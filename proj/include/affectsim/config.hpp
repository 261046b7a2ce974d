#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "affectsim/engine.hpp"

namespace affectsim {

// Validation failure that can name the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Minimal TOML reader covering what the shipped configuration files use:
// comments, [section] headers, integer/float/bool/string scalars, arrays,
// and arrays of inline tables (possibly spanning lines).
class TomlValue {
 public:
  using Array = std::vector<TomlValue>;
  using Table = std::map<std::string, TomlValue>;
  using Storage = std::variant<std::int64_t, double, bool, std::string, Array, Table>;

  TomlValue() : storage_(Table{}) {}
  explicit TomlValue(Storage s) : storage_(std::move(s)) {}

  bool is_table() const { return std::holds_alternative<Table>(storage_); }
  bool is_array() const { return std::holds_alternative<Array>(storage_); }

  std::int64_t as_int(const std::string& field) const;
  double as_double(const std::string& field) const;  // accepts integers too
  bool as_bool(const std::string& field) const;
  const std::string& as_string(const std::string& field) const;
  const Array& as_array(const std::string& field) const;
  const Table& as_table(const std::string& field) const;

  Storage storage_;
};

TomlValue::Table parse_toml(const std::string& text);
TomlValue::Table parse_toml_file(const std::string& path);

// Loads and validates a simulation config. Unknown keys are rejected;
// missing required keys raise a ConfigError naming the field.
SimConfig load_sim_config(const std::string& path);
SimConfig sim_config_from_toml(const TomlValue::Table& root);

// FNV-1a over a canonical serialisation of every semantically meaningful
// field, so equal configs hash equal regardless of formatting or key order.
std::uint64_t config_hash(const SimConfig& cfg);
std::string config_hash_hex(const SimConfig& cfg);

}  // namespace affectsim
