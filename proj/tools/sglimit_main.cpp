#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sglimit/driver.hpp"
#include "sglimit/errors.hpp"
#include "sglimit/parallel.hpp"

namespace {

struct Common {
  std::string config;
  std::string out = ".";
  std::string seed;
  int threads = 0;
  bool explain = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "config file (key = value lines)");
  sub->add_option("--out", c.out, "output directory")->capture_default_str();
  sub->add_option("--seed", c.seed, "master seed, overrides the config");
  sub->add_option("--threads", c.threads, "worker threads (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sglimit: SG(L)D scaling-limit experiments"};
  app.require_subcommand(1);
  Common common;
  const char* studies[] = {"simulate", "compare", "rate-study", "ou-verify", "metrics", "bounds", "var-avg"};
  for (const char* name : studies) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " study");
    add_common(sub, common);
    if (std::string(name) == "bounds") sub->add_flag("--explain", common.explain, "print every formula term");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  sglimit::ExperimentConfig ec;
  try {
    ec.study = sglimit::parse_study(app.get_subcommands().front()->get_name());
    if (!common.config.empty()) ec.values = sglimit::ConfigMap::load(common.config);
    if (!common.seed.empty()) ec.values.set("seed", common.seed);
    ec.values.u64("seed");
  } catch (const sglimit::ConfigError& e) {
    std::cerr << "sglimit: config error: " << e.what() << '\n';
    return 2;
  }
  ec.out_dir = common.out;
  ec.threads = common.threads > 0 ? common.threads : sglimit::default_threads();
  if (common.explain) ec.explain = &std::cout;
  return sglimit::run(ec, std::cerr);
}
