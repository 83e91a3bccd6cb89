#pragma once

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ilw/density.hpp"
#include "ilw/measures.hpp"

namespace ilwcli {

using json = nlohmann::json;

// Bad flags or config values; reported with usage and exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void require(bool ok, const std::string& message);

void read_json(const json& j, int& v);
void read_json(const json& j, long& v);
void read_json(const json& j, std::uint64_t& v);
void read_json(const json& j, double& v);  // numbers or strings such as "inf"
void read_json(const json& j, bool& v);
void read_json(const json& j, std::string& v);
void read_json(const json& j, std::vector<double>& v);  // array or "a,b,c"
void read_json(const json& j, std::vector<long>& v);

json write_json(double v);  // ±inf become strings
template <class T>
json write_json(const T& v) {
  return json(v);
}
json write_json(const std::vector<double>& v);

// The flags of one subcommand, each mirrored by a key of the JSON config.
// Config values fill only the options absent from the command line.
class ParamSet {
 public:
  explicit ParamSet(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& name, T& var, const std::string& help) {
    CLI::Option* opt = app_->add_option("--" + name, var, help)->capture_default_str();
    if constexpr (std::is_same_v<T, std::vector<double>> || std::is_same_v<T, std::vector<long>>) opt->delimiter(',');
    entries_.push_back({name, opt, [&var](const json& j) { read_json(j, var); }, [&var] { return write_json(var); }});
    return opt;
  }

  CLI::Option* flag(const std::string& name, bool& var, const std::string& help) {
    CLI::Option* opt = app_->add_flag("--" + name, var, help);
    entries_.push_back({name, opt, [&var](const json& j) { read_json(j, var); }, [&var] { return json(var); }});
    return opt;
  }

  void apply_config(const json& config) const;
  json dump() const;

 private:
  struct Entry {
    std::string name;
    CLI::Option* option;
    std::function<void(const json&)> load;
    std::function<json()> save;
  };
  CLI::App* app_;
  std::vector<Entry> entries_;
};

// Global state shared by all subcommands.
struct Session {
  std::string config_path;
  std::string out_dir;
  std::string tag;
  bool quiet = false;
  std::function<int()> action;

  json config() const;  // {} without --config
};

// Writes report files once, atomically, under the output directory.
class Report {
 public:
  Report(const Session& s, std::string command, json config);

  const json& header() const { return header_; }
  std::filesystem::path write_json(const json& body) const;  // <tag>.json
  std::filesystem::path write_text(const std::string& suffix, const std::string& content) const;
  void say(const std::string& line) const;

 private:
  const Session& session_;
  std::string stem_;
  json header_;
};

void write_atomic(const std::filesystem::path& path, const std::string& content);

// Floats with 17 significant digits.
std::string fmt(double x);

class Csv {
 public:
  explicit Csv(std::vector<std::string> columns);
  Csv& row(const std::vector<double>& values);
  Csv& row(const std::string& label, const std::vector<double>& values);
  std::string str() const { return text_; }

 private:
  std::size_t width_;
  std::string text_;
};

ilw::sym::Regime parse_regime(const std::string& s);
ilw::GaussianSpec make_spec(const std::string& regime, int k, double delta);
const ilw::SpectralField& probe_field();
ilw::SpectralField load_field(const std::string& path);  // "" gives the probe field

}  // namespace ilwcli

namespace ilwcli {

// Defers a subcommand's work until parsing is complete, then merges the
// config file under the flags.
template <class Args, class Fn>
void on_run(Session& session, CLI::App* sub, std::shared_ptr<Args> args, std::shared_ptr<ParamSet> params, Fn fn) {
  sub->callback([&session, args, params, fn] {
    session.action = [&session, args, params, fn] {
      params->apply_config(session.config());
      return fn(session, *args, params->dump());
    };
  });
}

}  // namespace ilwcli
