#include "cli_support.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <unistd.h>

namespace ilwcli {

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

namespace {

double to_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == s.size() && !s.empty(), "not a number: '" + s + "'");
    return v;
  }
  throw UsageError("expected a number, got " + j.dump());
}

template <class Int>
Int to_integer(const json& j) {
  require(j.is_number_integer(), "expected an integer, got " + j.dump());
  return j.get<Int>();
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(item);
  return out;
}

}  // namespace

void read_json(const json& j, int& v) { v = to_integer<int>(j); }
void read_json(const json& j, long& v) { v = to_integer<long>(j); }
void read_json(const json& j, std::uint64_t& v) {
  require(j.is_number_unsigned(), "expected a non-negative integer, got " + j.dump());
  v = j.get<std::uint64_t>();
}
void read_json(const json& j, double& v) { v = to_double(j); }

void read_json(const json& j, bool& v) {
  require(j.is_boolean(), "expected true or false, got " + j.dump());
  v = j.get<bool>();
}

void read_json(const json& j, std::string& v) { v = j.is_string() ? j.get<std::string>() : j.dump(); }

void read_json(const json& j, std::vector<double>& v) {
  v.clear();
  if (j.is_string()) {
    for (const auto& s : split(j.get<std::string>())) v.push_back(to_double(json(s)));
    return;
  }
  if (!j.is_array()) {
    v.push_back(to_double(j));
    return;
  }
  for (const auto& x : j) v.push_back(to_double(x));
}

void read_json(const json& j, std::vector<long>& v) {
  v.clear();
  if (j.is_string()) {
    for (const auto& s : split(j.get<std::string>())) v.push_back(std::stol(s));
    return;
  }
  if (!j.is_array()) {
    v.push_back(to_integer<long>(j));
    return;
  }
  for (const auto& x : j) v.push_back(to_integer<long>(x));
}

json write_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json write_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(write_json(x));
  return a;
}

void ParamSet::apply_config(const json& config) const {
  require(config.is_object(), "config file must hold a JSON object");
  for (auto it = config.begin(); it != config.end(); ++it) {
    bool known = false;
    for (const auto& e : entries_) known = known || e.name == it.key();
    require(known, "unknown config key '" + it.key() + "' for '" + app_->get_name() + "'");
  }
  for (const auto& e : entries_) {
    if (e.option->count() > 0 || !config.contains(e.name)) continue;
    try {
      e.load(config.at(e.name));
    } catch (const UsageError& err) {
      throw UsageError("config key '" + e.name + "': " + err.what());
    }
  }
}

json ParamSet::dump() const {
  json j = json::object();
  for (const auto& e : entries_) j[e.name] = e.save();
  return j;
}

json Session::config() const {
  if (config_path.empty()) return json::object();
  std::ifstream in(config_path);
  require(static_cast<bool>(in), "cannot read config file '" + config_path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + config_path + "' is not valid JSON: " + e.what());
  }
}

Report::Report(const Session& s, std::string command, json config) : session_(s) {
  stem_ = s.tag.empty() ? command : s.tag;
  for (auto& c : stem_)
    if (c == ' ') c = '-';
  header_ = {{"tool", "ilwkit"}, {"version", ILWKIT_VERSION}, {"command", command}, {"config", std::move(config)}};
}

std::filesystem::path Report::write_json(const json& body) const {
  json j = header_;
  j["result"] = body;
  return write_text(".json", j.dump(2) + "\n");
}

std::filesystem::path Report::write_text(const std::string& suffix, const std::string& content) const {
  const std::filesystem::path dir(session_.out_dir.empty() ? "." : session_.out_dir);
  std::filesystem::create_directories(dir);
  const auto path = dir / (stem_ + suffix);
  write_atomic(path, content);
  say("wrote " + path.string());
  return path;
}

void Report::say(const std::string& line) const {
  if (!session_.quiet) std::cout << line << "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

Csv::Csv(std::vector<std::string> columns) : width_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) text_ += (i ? "," : "") + columns[i];
  text_ += "\n";
}

Csv& Csv::row(const std::vector<double>& values) {
  if (values.size() != width_) throw std::logic_error("csv row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) text_ += (i ? "," : "") + fmt(values[i]);
  text_ += "\n";
  return *this;
}

Csv& Csv::row(const std::string& label, const std::vector<double>& values) {
  if (values.size() + 1 != width_) throw std::logic_error("csv row width mismatch");
  text_ += label;
  for (double v : values) text_ += "," + fmt(v);
  text_ += "\n";
  return *this;
}

ilw::sym::Regime parse_regime(const std::string& s) {
  try {
    return ilw::sym::regime_from_string(s);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

ilw::GaussianSpec make_spec(const std::string& regime, int k, double delta) {
  ilw::GaussianSpec spec{parse_regime(regime), k, delta};
  try {
    ilw::validate(spec);
  } catch (const ilw::MeasureError& e) {
    throw UsageError(e.what());
  }
  return spec;
}

const ilw::SpectralField& probe_field() {
  static const ilw::SpectralField u = ilw::SpectralField::synthesize({{1, {0.3, 0.0}}, {2, {0.0, 0.1}}});
  return u;
}

ilw::SpectralField load_field(const std::string& path) {
  if (path.empty()) return probe_field();
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot read field file '" + path + "'");
  try {
    return ilw::field_from_json(json::parse(in));
  } catch (const std::exception& e) {
    throw UsageError("field file '" + path + "': " + e.what());
  }
}

}  // namespace ilwcli
