#include "affectsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace affectsim {

namespace {

[[noreturn]] void type_error(const std::string& field, const char* expected) {
  throw ConfigError(field, std::string("expected ") + expected);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

class ValueParser {
 public:
  explicit ValueParser(const std::string& text) : text_(text) {}

  TomlValue parse() {
    TomlValue v = parse_value();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters after value");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError("<value>", why + " in '" + text_ + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  TomlValue parse_value() {
    skip_ws();
    const char c = peek();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    if (c == '"') return parse_string();
    return parse_scalar();
  }

  TomlValue parse_array() {
    ++pos_;  // '['
    TomlValue::Array items;
    skip_ws();
    if (peek() == ']') {
      ++pos_;
      return TomlValue(TomlValue::Storage(std::move(items)));
    }
    while (true) {
      items.push_back(parse_value());
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        skip_ws();
        if (peek() == ']') {  // trailing comma
          ++pos_;
          break;
        }
        continue;
      }
      if (peek() == ']') {
        ++pos_;
        break;
      }
      fail("expected ',' or ']'");
    }
    return TomlValue(TomlValue::Storage(std::move(items)));
  }

  TomlValue parse_inline_table() {
    ++pos_;  // '{'
    TomlValue::Table table;
    skip_ws();
    if (peek() == '}') {
      ++pos_;
      return TomlValue(TomlValue::Storage(std::move(table)));
    }
    while (true) {
      skip_ws();
      std::string key;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        key.push_back(text_[pos_++]);
      }
      if (key.empty()) fail("expected key in inline table");
      skip_ws();
      if (peek() != '=') fail("expected '=' in inline table");
      ++pos_;
      table.emplace(std::move(key), parse_value());
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == '}') {
        ++pos_;
        break;
      }
      fail("expected ',' or '}'");
    }
    return TomlValue(TomlValue::Storage(std::move(table)));
  }

  TomlValue parse_string() {
    ++pos_;  // '"'
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') out.push_back(text_[pos_++]);
    if (pos_ == text_.size()) fail("unterminated string");
    ++pos_;
    return TomlValue(TomlValue::Storage(std::move(out)));
  }

  TomlValue parse_scalar() {
    std::size_t end = pos_;
    while (end < text_.size() && text_[end] != ',' && text_[end] != ']' && text_[end] != '}' &&
           text_[end] != ' ' && text_[end] != '\t' && text_[end] != '\n' && text_[end] != '\r') {
      ++end;
    }
    const std::string token = text_.substr(pos_, end - pos_);
    pos_ = end;
    if (token == "true") return TomlValue(TomlValue::Storage(true));
    if (token == "false") return TomlValue(TomlValue::Storage(false));
    if (token.find_first_of(".eE") != std::string::npos &&
        token.find_first_not_of("+-0123456789.eE") == std::string::npos) {
      return TomlValue(TomlValue::Storage(std::stod(token)));
    }
    std::int64_t iv = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), iv);
    if (res.ec == std::errc() && res.ptr == token.data() + token.size()) {
      return TomlValue(TomlValue::Storage(iv));
    }
    fail("unrecognised scalar '" + token + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::int64_t TomlValue::as_int(const std::string& field) const {
  if (const auto* v = std::get_if<std::int64_t>(&storage_)) return *v;
  type_error(field, "an integer");
}

double TomlValue::as_double(const std::string& field) const {
  if (const auto* v = std::get_if<double>(&storage_)) return *v;
  if (const auto* v = std::get_if<std::int64_t>(&storage_)) return static_cast<double>(*v);
  type_error(field, "a number");
}

bool TomlValue::as_bool(const std::string& field) const {
  if (const auto* v = std::get_if<bool>(&storage_)) return *v;
  type_error(field, "a boolean");
}

const std::string& TomlValue::as_string(const std::string& field) const {
  if (const auto* v = std::get_if<std::string>(&storage_)) return *v;
  type_error(field, "a string");
}

const TomlValue::Array& TomlValue::as_array(const std::string& field) const {
  if (const auto* v = std::get_if<Array>(&storage_)) return *v;
  type_error(field, "an array");
}

const TomlValue::Table& TomlValue::as_table(const std::string& field) const {
  if (const auto* v = std::get_if<Table>(&storage_)) return *v;
  type_error(field, "a table");
}

TomlValue::Table parse_toml(const std::string& text) {
  TomlValue::Table root;
  TomlValue::Table* current = &root;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(strip_comment(line));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("<toml>", "malformed section header: " + line);
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError("<toml>", "empty section name");
      auto [it, inserted] = root.emplace(name, TomlValue());
      if (!inserted && !it->second.is_table()) {
        throw ConfigError(name, "section clashes with a key");
      }
      current = &std::get<TomlValue::Table>(it->second.storage_);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("<toml>", "expected key = value: " + line);
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("<toml>", "empty key in: " + line);

    // Multi-line arrays: keep consuming until brackets balance.
    auto bracket_balance = [](const std::string& s) {
      int depth = 0;
      bool quoted = false;
      for (const char c : s) {
        if (c == '"') quoted = !quoted;
        if (quoted) continue;
        if (c == '[' || c == '{') ++depth;
        if (c == ']' || c == '}') --depth;
      }
      return depth;
    };
    while (bracket_balance(value) > 0) {
      std::string next;
      if (!std::getline(in, next)) throw ConfigError(key, "unterminated array");
      value += '\n';
      value += trim(strip_comment(next));
    }

    if (current->contains(key)) throw ConfigError(key, "duplicate key");
    current->emplace(key, ValueParser(value).parse());
  }
  return root;
}

TomlValue::Table parse_toml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_toml(buf.str());
}

namespace {

class Reader {
 public:
  Reader(const TomlValue::Table& table, std::string prefix)
      : table_(table), prefix_(std::move(prefix)) {}

  bool has(const std::string& key) const { return table_.contains(key); }

  const TomlValue& require(const std::string& key) {
    mark(key);
    const auto it = table_.find(key);
    if (it == table_.end()) throw ConfigError(qualified(key), "required field is missing");
    return it->second;
  }

  std::int64_t req_int(const std::string& key) { return require(key).as_int(qualified(key)); }
  double req_double(const std::string& key) { return require(key).as_double(qualified(key)); }

  std::int64_t opt_int(const std::string& key, std::int64_t fallback) {
    mark(key);
    const auto it = table_.find(key);
    return it == table_.end() ? fallback : it->second.as_int(qualified(key));
  }
  double opt_double(const std::string& key, double fallback) {
    mark(key);
    const auto it = table_.find(key);
    return it == table_.end() ? fallback : it->second.as_double(qualified(key));
  }
  std::string opt_string(const std::string& key, std::string fallback) {
    mark(key);
    const auto it = table_.find(key);
    return it == table_.end() ? std::move(fallback) : it->second.as_string(qualified(key));
  }

  std::string qualified(const std::string& key) const {
    return prefix_.empty() ? key : prefix_ + "." + key;
  }

  // Any key never touched by the loader is a typo worth rejecting.
  void reject_unknown() const {
    for (const auto& [key, value] : table_) {
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
        throw ConfigError(qualified(key), "unknown field");
      }
    }
  }

 private:
  void mark(const std::string& key) {
    if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) seen_.push_back(key);
  }
  const TomlValue::Table& table_;
  std::string prefix_;
  std::vector<std::string> seen_;
};

void check_range(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw ConfigError(field, why);
}

}  // namespace

SimConfig sim_config_from_toml(const TomlValue::Table& root) {
  SimConfig cfg;
  Reader top(root, "");

  cfg.num_all = static_cast<int>(top.opt_int("num_all", 3000));
  cfg.m = static_cast<int>(top.opt_int("m", 32));
  cfg.seed = static_cast<std::uint64_t>(top.opt_int("seed", 42));
  cfg.gamma_forget = top.req_double("gamma_forget");
  cfg.mutation.rate = top.opt_double("mutation_rate", 0.01);
  cfg.p_abstain = top.opt_double("p_abstain", 0.016);

  check_range(cfg.num_all > 0, "num_all", "must be positive");
  check_range(cfg.m > 0 && cfg.m % 2 == 0, "m", "must be a positive even integer");
  check_range(cfg.gamma_forget >= 0.0 && cfg.gamma_forget <= 1.0, "gamma_forget",
              "must lie in [0, 1]");
  check_range(cfg.mutation.rate >= 0.0 && cfg.mutation.rate <= 1.0, "mutation_rate",
              "must lie in [0, 1]");
  check_range(cfg.p_abstain >= 0.0 && cfg.p_abstain <= 1.0, "p_abstain", "must lie in [0, 1]");

  if (top.has("esef")) {
    Reader esef(top.require("esef").as_table("esef"), "esef");
    cfg.esef.d = esef.opt_double("d", 0.67);
    cfg.esef.sigma = esef.opt_double("sigma", 15.7079);
    cfg.esef.theta_decay = esef.opt_double("vartheta", 0.05);
    esef.reject_unknown();
  }
  cfg.esef.m = cfg.m;
  check_range(cfg.esef.d > 0.0, "esef.d", "must be positive");
  check_range(cfg.esef.sigma > 0.0, "esef.sigma", "must be positive");
  check_range(cfg.esef.theta_decay >= 0.0, "esef.vartheta", "must be non-negative");

  if (top.has("weights")) {
    Reader weights(top.require("weights").as_table("weights"), "weights");
    cfg.weights.w_gamma = weights.opt_double("w_gamma", 1.0);
    cfg.weights.w_neighbor = weights.opt_double("w_neighbor", 0.1);
    cfg.weights.w_global = weights.opt_double("w_global", 0.1);
    weights.reject_unknown();
  }
  check_range(cfg.weights.w_gamma >= 0.0 && cfg.weights.w_neighbor >= 0.0 &&
                  cfg.weights.w_global >= 0.0,
              "weights", "mixing coefficients must be non-negative");

  if (top.has("init")) {
    Reader init(top.require("init").as_table("init"), "init");
    cfg.init.weight_mu = init.opt_double("weight_mu", 0.5);
    cfg.init.weight_sigma = init.opt_double("weight_sigma", 0.15);
    cfg.init.etv_mu = init.opt_double("etv_mu", static_cast<double>(cfg.m) / 2.0);
    cfg.init.etv_sigma = init.opt_double("etv_sigma", 4.0);
    init.reject_unknown();
  } else {
    cfg.init.etv_mu = static_cast<double>(cfg.m) / 2.0;
  }
  cfg.init.m = cfg.m;
  check_range(cfg.init.weight_sigma >= 0.0, "init.weight_sigma", "must be non-negative");
  check_range(cfg.init.etv_sigma >= 0.0, "init.etv_sigma", "must be non-negative");
  check_range(cfg.init.etv_mu >= 0.0 && cfg.init.etv_mu <= static_cast<double>(cfg.m),
              "init.etv_mu", "must lie in [0, m]");

  if (top.has("network")) {
    Reader net(top.require("network").as_table("network"), "network");
    const std::string kind = net.opt_string("kind", "hybrid");
    if (kind == "ba") {
      cfg.network.kind = NetworkConfig::Kind::Ba;
    } else if (kind == "ws") {
      cfg.network.kind = NetworkConfig::Kind::Ws;
    } else if (kind == "hybrid") {
      cfg.network.kind = NetworkConfig::Kind::Hybrid;
    } else {
      throw ConfigError("network.kind", "must be one of ba, ws, hybrid");
    }
    cfg.network.ba_fraction = net.opt_double("ba_fraction", 0.5);
    cfg.network.m_attach = static_cast<int>(net.opt_int("m_attach", 3));
    cfg.network.k = static_cast<int>(net.opt_int("k", 6));
    cfg.network.p_rewire = net.opt_double("p_rewire", 0.1);
    cfg.network.bridge_edges = static_cast<int>(net.opt_int("bridge_edges", 50));
    net.reject_unknown();
  }
  check_range(cfg.network.ba_fraction >= 0.0 && cfg.network.ba_fraction <= 1.0,
              "network.ba_fraction", "must lie in [0, 1]");
  check_range(cfg.network.m_attach >= 1, "network.m_attach", "must be >= 1");
  check_range(cfg.network.k >= 2 && cfg.network.k % 2 == 0, "network.k",
              "must be an even integer >= 2");
  check_range(cfg.network.p_rewire >= 0.0 && cfg.network.p_rewire <= 1.0, "network.p_rewire",
              "must lie in [0, 1]");

  const auto& fragments = top.require("fragments").as_array("fragments");
  if (fragments.empty()) throw ConfigError("fragments", "at least one fragment is required");
  int index = 0;
  for (const auto& entry : fragments) {
    const std::string field = "fragments[" + std::to_string(index) + "]";
    const auto& table = entry.as_table(field);
    Reader frag(table, field);
    FragmentSpec spec;
    spec.etv = static_cast<int>(frag.req_int("etv"));
    spec.duration = static_cast<int>(frag.req_int("duration"));
    frag.reject_unknown();
    check_range(spec.etv >= 0 && spec.etv <= cfg.m, field + ".etv", "must lie in [0, m]");
    check_range(spec.duration >= 1, field + ".duration", "must be >= 1");
    cfg.fragments.push_back(spec);
    ++index;
  }

  if (top.has("t_total")) {
    const auto stated = static_cast<int>(top.opt_int("t_total", 0));
    if (stated != cfg.total_rounds()) {
      throw ConfigError("t_total", "does not equal the sum of fragment durations (" +
                                       std::to_string(cfg.total_rounds()) + ")");
    }
  }

  top.reject_unknown();
  return cfg;
}

SimConfig load_sim_config(const std::string& path) {
  return sim_config_from_toml(parse_toml_file(path));
}

namespace {

void hash_bytes(std::uint64_t& h, const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001B3ULL;
  }
}

void hash_field(std::uint64_t& h, const char* name, double value) {
  char buf[64];
  const int len = std::snprintf(buf, sizeof(buf), "%s=%.17g;", name, value);
  hash_bytes(h, buf, static_cast<std::size_t>(len));
}

void hash_field(std::uint64_t& h, const char* name, std::int64_t value) {
  char buf[64];
  const int len = std::snprintf(buf, sizeof(buf), "%s=%lld;", name, static_cast<long long>(value));
  hash_bytes(h, buf, static_cast<std::size_t>(len));
}

}  // namespace

std::uint64_t config_hash(const SimConfig& cfg) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  hash_field(h, "num_all", static_cast<std::int64_t>(cfg.num_all));
  hash_field(h, "m", static_cast<std::int64_t>(cfg.m));
  hash_field(h, "seed", static_cast<std::int64_t>(cfg.seed));
  hash_field(h, "gamma_forget", cfg.gamma_forget);
  hash_field(h, "mutation_rate", cfg.mutation.rate);
  hash_field(h, "p_abstain", cfg.p_abstain);
  hash_field(h, "esef.d", cfg.esef.d);
  hash_field(h, "esef.sigma", cfg.esef.sigma);
  hash_field(h, "esef.vartheta", cfg.esef.theta_decay);
  hash_field(h, "weights.w_gamma", cfg.weights.w_gamma);
  hash_field(h, "weights.w_neighbor", cfg.weights.w_neighbor);
  hash_field(h, "weights.w_global", cfg.weights.w_global);
  hash_field(h, "init.weight_mu", cfg.init.weight_mu);
  hash_field(h, "init.weight_sigma", cfg.init.weight_sigma);
  hash_field(h, "init.etv_mu", cfg.init.etv_mu);
  hash_field(h, "init.etv_sigma", cfg.init.etv_sigma);
  hash_field(h, "network.kind", static_cast<std::int64_t>(cfg.network.kind));
  hash_field(h, "network.ba_fraction", cfg.network.ba_fraction);
  hash_field(h, "network.m_attach", static_cast<std::int64_t>(cfg.network.m_attach));
  hash_field(h, "network.k", static_cast<std::int64_t>(cfg.network.k));
  hash_field(h, "network.p_rewire", cfg.network.p_rewire);
  hash_field(h, "network.bridge_edges", static_cast<std::int64_t>(cfg.network.bridge_edges));
  for (const auto& frag : cfg.fragments) {
    hash_field(h, "fragment.etv", static_cast<std::int64_t>(frag.etv));
    hash_field(h, "fragment.duration", static_cast<std::int64_t>(frag.duration));
  }
  return h;
}

std::string config_hash_hex(const SimConfig& cfg) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  return std::string(buf);
}

}  // namespace affectsim
