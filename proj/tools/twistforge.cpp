#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "twistforge/pipeline.hpp"

using namespace twistforge;
using nlohmann::json;

namespace {

struct Flags {
  std::string config;
  std::string preset, twist_case, twist, variant, generator, format, output;
  std::vector<std::string> params, checks;
  int order = 0, n = 0;
  double cutoff = 0, hbar = 0, sigma = 0;
  std::size_t states = 0;
  std::uint64_t seed = 0;
  std::vector<double> scan;
};

void add_options(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file; flags override its keys");
  app->add_option("--preset", f.preset, "iso2, iso11 or canonical");
  app->add_option("--case", f.twist_case, "twist case: i or ii");
  app->add_option("--twist", f.twist, "simplified or generic");
  app->add_option("--param", f.params, "parameter value, name=expression (repeatable)");
  app->add_option("--order", f.order, "truncation order");
  app->add_option("--variant", f.variant, "corrected, printed (alias printed-2.5)");
  app->add_option("--check", f.checks, "cocycle, coassoc, hermiticity, jacobi, realization, adjudicate");
  app->add_option("--generator", f.generator, "generator to expand, e.g. P1");
  app->add_option("--n", f.n, "grid points per dimension");
  app->add_option("--cutoff", f.cutoff, "momentum cutoff");
  app->add_option("--hbar", f.hbar, "numeric hbar");
  app->add_option("--states", f.states, "number of random Gaussian states");
  app->add_option("--seed", f.seed, "64-bit seed for the random states");
  app->add_option("--scan", f.scan, "limit scan centers")->delimiter(',');
  app->add_option("--sigma", f.sigma, "limit scan width");
  app->add_option("--format", f.format, "json, text or csv");
  app->add_option("--output", f.output, "write to this file instead of stdout");
}

// config file first, then every flag that was given
json merged(CLI::App* app, const Flags& f) {
  json j = json::object();
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw ConfigError("cannot read config '" + f.config + "'");
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config '" + f.config + "': " + e.what());
    }
  }
  auto given = [&](const char* name) { return app->count(name) > 0; };
  if (given("--preset")) j["preset"] = f.preset;
  if (given("--case")) j["case"] = f.twist_case;
  if (given("--twist")) j["twist"] = f.twist;
  for (const auto& p : f.params) {
    auto eq = p.find('=');
    if (eq == std::string::npos) throw ConfigError("--param expects name=value, got '" + p + "'");
    j["parameters"][p.substr(0, eq)] = p.substr(eq + 1);
  }
  if (given("--order")) j["order"] = f.order;
  if (given("--variant")) j["variant"] = f.variant;
  if (given("--check")) j["checks"] = f.checks;
  if (given("--generator")) j["generator"] = f.generator;
  if (given("--n")) j["grid"]["n"] = f.n;
  if (given("--cutoff")) j["grid"]["cutoff"] = f.cutoff;
  if (given("--hbar")) j["hbar"] = f.hbar;
  if (given("--states")) j["states"]["count"] = f.states;
  if (given("--seed")) j["states"]["seed"] = f.seed;
  if (given("--scan")) j["scan"]["centers"] = f.scan;
  if (given("--sigma")) j["scan"]["sigma"] = f.sigma;
  if (given("--format")) j["format"] = f.format;
  if (given("--output")) j["output"] = f.output;
  return j;
}

bool apply_thread_cap() {
  const char* env = std::getenv("TWISTFORGE_THREADS");
  if (!env) return true;
  char* end = nullptr;
  long n = std::strtol(env, &end, 10);
  if (*env == '\0' || *end != '\0' || n < 1) {
    std::cerr << "error: TWISTFORGE_THREADS must be a positive integer\n";
    return false;
  }
  omp_set_num_threads(static_cast<int>(n));
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twisted Poincare deformations: coproducts, phase space relations, uncertainty checks"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<std::pair<std::string, CLI::App*>> subs;
  for (auto [name, help] : {std::pair{"derive", "twisted coproducts and the phase space relation table"},
                            std::pair{"check", "cocycle, coassociativity, hermiticity, Jacobi and realization checks"},
                            std::pair{"uncertainty", "numeric uncertainty suite and limit scan"},
                            std::pair{"expand", "twisted coproduct of one generator"}}) {
    CLI::App* s = app.add_subcommand(name, help);
    add_options(s, flags);
    subs.emplace_back(name, s);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (!apply_thread_cap()) return 2;

  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    RunConfig config;
    try {
      config = config_from_json(merged(sub, flags));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    CommandResult r = run_command(name, config);
    std::cerr << r.error;
    if (config.output.empty()) {
      std::cout << r.output;
    } else {
      std::ofstream out(config.output);
      if (!out) {
        std::cerr << "error: cannot write '" << config.output << "'\n";
        return 2;
      }
      out << r.output;
    }
    return r.exit_code;
  }
  return 2;
}
