#include <iostream>

#include "simt/error.hpp"
#include "support.hpp"

int main(int argc, char** argv) {
  using namespace simt::cli;

  CLI::App app{"Simultaneous translation program toolkit", "simt"};
  app.set_version_flag("--version", std::string(SIMT_VERSION));
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for every random sub-stream");
  app.add_option("--jobs", global.jobs, "Worker threads for oracle, metrics and evaluate")
      ->check(CLI::PositiveNumber);
  app.add_option("--manifest", global.manifest, "Run manifest path (default: <out>.run.json, or stderr)");

  ActionTable actions;
  registerSynth(app, actions);
  registerOracle(app, actions);
  registerValidate(app, actions);
  registerPerturb(app, actions);
  registerWaitK(app, actions);
  registerDelay(app, actions);
  registerMetrics(app, actions);
  registerTrace(app, actions);
  registerSimulate(app, actions);
  registerTrain(app, actions);
  registerEvaluate(app, actions);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (auto& [sub, action] : actions) {
    if (!sub->parsed()) continue;
    try {
      Run run(global, *sub);
      const int code = action(run);
      run.finish();
      return code;
    } catch (const UsageError& e) {
      std::cerr << "simt " << sub->get_name() << ": " << e.what() << "\nRun with --help for more information.\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "simt " << sub->get_name() << ": " << e.what() << '\n';
      return 1;
    }
  }
  return 2;
}
