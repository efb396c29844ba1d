#include "tsrg/harness/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "tsrg/errors.hpp"
#include "tsrg/harness/manifest.hpp"
#include "tsrg/harness/text.hpp"

namespace tsrg::harness {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "source", "target", "source_name", "target_name", "kernel", "bandwidth",
      "lambda", "mu", "kappa0", "rho", "kappa_max", "epsilon", "max_iters",
      "penalty_c", "label_map", "standardize", "train_on_regenerated", "seed",
      "lambda_grid", "mu_grid", "expect_counts"};
  return keys;
}

double number(const KeyValues& kv, const std::string& key, double fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    return parse_double(it->second, key);
  } catch (const IngestError& e) {
    throw ConfigError(e.what());
  }
}

std::uint64_t unsigned_number(const std::string& key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const auto body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(body.substr(0, eq)));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    kv[key] = std::string(trim(body.substr(eq + 1)));
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_key_values(buf.str());
}

bool parse_bool(std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("expected a boolean, got '" + std::string(text) + "'");
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& field : split(text, ',')) {
    if (field.empty()) continue;
    try {
      out.push_back(parse_double(field, "list"));
    } catch (const IngestError& e) {
      throw ConfigError(e.what());
    }
  }
  if (out.empty()) throw ConfigError("empty numeric list");
  return out;
}

std::map<std::string, std::size_t> parse_counts(std::string_view text) {
  if (trim(text) == "casme2") return casme2_expected_counts();
  std::map<std::string, std::size_t> out;
  for (const auto& field : split(text, ',')) {
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ConfigError("count '" + field + "' must look like Class=N");
    out[std::string(trim(std::string_view(field).substr(0, eq)))] =
        unsigned_number("expect_counts", std::string_view(field).substr(eq + 1));
  }
  return out;
}

ExperimentConfig experiment_config_from(const KeyValues& kv,
                                        const std::filesystem::path& base_dir) {
  for (const auto& [key, value] : kv) {
    if (!known_keys().contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  auto path_of = [&](const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end() || it->second.empty()) throw ConfigError("missing required key '" + key + "'");
    std::filesystem::path p = it->second;
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };

  ExperimentConfig c;
  c.source = path_of("source");
  c.target = path_of("target");
  if (kv.contains("source_name")) c.source_name = kv.at("source_name");
  if (kv.contains("target_name")) c.target_name = kv.at("target_name");
  if (kv.contains("kernel")) {
    try {
      c.kernel.kind = parse_kernel_kind(trim(kv.at("kernel")));
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  if (kv.contains("bandwidth")) c.kernel.bandwidth = number(kv, "bandwidth", 0.0);
  c.kernel.validate();

  c.solver.lambda = number(kv, "lambda", c.solver.lambda);
  c.solver.mu = number(kv, "mu", c.solver.mu);
  c.solver.kappa0 = number(kv, "kappa0", c.solver.kappa0);
  c.solver.rho = number(kv, "rho", c.solver.rho);
  c.solver.kappa_max = number(kv, "kappa_max", c.solver.kappa_max);
  c.solver.epsilon = number(kv, "epsilon", c.solver.epsilon);
  if (kv.contains("max_iters")) {
    c.solver.max_iters = static_cast<int>(unsigned_number("max_iters", kv.at("max_iters")));
  }
  c.solver.validate();

  c.penalty_c = number(kv, "penalty_c", c.penalty_c);
  if (!(c.penalty_c > 0.0)) throw ConfigError("penalty_c must be positive");
  if (kv.contains("label_map") && !kv.at("label_map").empty()) {
    c.label_map = parse_label_map(kv.at("label_map"));
  }
  if (kv.contains("standardize")) c.standardize = parse_bool(kv.at("standardize"));
  if (kv.contains("train_on_regenerated")) {
    c.train_on_regenerated = parse_bool(kv.at("train_on_regenerated"));
  }
  if (kv.contains("seed")) c.seed = unsigned_number("seed", kv.at("seed"));
  return c;
}

std::string to_key_values(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "source = " << c.source.string() << '\n'
      << "target = " << c.target.string() << '\n';
  if (!c.source_name.empty()) out << "source_name = " << c.source_name << '\n';
  if (!c.target_name.empty()) out << "target_name = " << c.target_name << '\n';
  out << "kernel = " << to_string(c.kernel.kind) << '\n';
  if (c.kernel.bandwidth) out << "bandwidth = " << format_double(*c.kernel.bandwidth) << '\n';
  out << "lambda = " << format_double(c.solver.lambda) << '\n'
      << "mu = " << format_double(c.solver.mu) << '\n'
      << "kappa0 = " << format_double(c.solver.kappa0) << '\n'
      << "rho = " << format_double(c.solver.rho) << '\n'
      << "kappa_max = " << format_double(c.solver.kappa_max) << '\n'
      << "epsilon = " << format_double(c.solver.epsilon) << '\n'
      << "max_iters = " << c.solver.max_iters << '\n'
      << "penalty_c = " << format_double(c.penalty_c) << '\n';
  if (c.label_map) out << "label_map = " << format_label_map(*c.label_map) << '\n';
  out << "standardize = " << (c.standardize ? "true" : "false") << '\n'
      << "train_on_regenerated = " << (c.train_on_regenerated ? "true" : "false") << '\n'
      << "seed = " << c.seed << '\n';
  return out.str();
}

}  // namespace tsrg::harness
