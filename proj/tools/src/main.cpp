#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cli_support.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace ilwcli;
  CLI::App app{"ilwkit: conservation laws, flows and Gibbs measures of the intermediate long wave hierarchy"};
  app.set_version_flag("--version", std::string(ILWKIT_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  Session session;
  if (const char* env = std::getenv("ILWKIT_OUT_DIR")) session.out_dir = env;
  app.add_option("--config", session.config_path, "JSON file with option values; flags win on conflict");
  app.add_option("--out-dir", session.out_dir, "output directory (default: $ILWKIT_OUT_DIR or .)");
  app.add_option("--tag", session.tag, "stem of the report files (default: the command name)");
  app.add_flag("-q,--quiet", session.quiet, "only write report files");

  register_conslaw(app, session);
  register_limits(app, session);
  register_simulate(app, session);
  register_measure(app, session);
  register_statistics(app, session);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  auto error_record = [](const char* kind, const std::string& what) {
    std::cerr << nlohmann::json{{"error", {{"type", kind}, {"message", what}, {"version", ILWKIT_VERSION}}}}.dump() << "\n";
  };
  try {
    return session.action ? session.action() : kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nrun with --help for the available options\n";
    error_record("usage", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    error_record("runtime", e.what());
    return kRuntime;
  }
}
