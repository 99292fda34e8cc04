#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "entnum/entropy.hpp"
#include "entnum/error.hpp"
#include "entnum/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitViolation = 3;

struct RunFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  std::vector<std::string> overrides;
  bool quiet = false;
};

int exit_code_for(const entnum::Error& e) {
  switch (e.code()) {
    case entnum::ErrorCode::kInvalidArgument:
    case entnum::ErrorCode::kDimensionMismatch:
      return kExitInvalid;
    case entnum::ErrorCode::kPropertyViolation:
      return kExitViolation;
    default:
      return kExitError;
  }
}

int run_experiment(const std::string& name, const RunFlags& flags) {
  using namespace entnum;
  ExperimentConfig config;
  if (!flags.config.empty()) config = load_config(flags.config);
  if (!config.experiment.empty() && config.experiment != name) {
    fail(ErrorCode::kInvalidArgument,
         "config '" + flags.config + "' is for '" + config.experiment + "', not '" + name + "'");
  }
  config.experiment = name;
  for (const auto& o : flags.overrides) apply_override(config, o);
  if (flags.seed) config.seed = flags.seed;
  if (!flags.out.empty()) config.out = flags.out;
  if (!flags.format.empty()) config.format = flags.format;

  const std::vector<std::string> errors = validate(config);
  if (!errors.empty()) {
    std::cerr << "entnum " << name << ": invalid config\n";
    for (const auto& e : errors) std::cerr << "  " << e << '\n';
    return kExitInvalid;
  }

  const Report report = run(config);
  if (config.out.empty()) {
    std::cout << (config.format == "json" ? report_to_json(report) : report_to_csv(report));
  } else {
    emit(report, config.format, config.out);
  }
  if (!flags.quiet) std::cerr << report_summary(report);
  return report.property_violation ? kExitViolation : kExitOk;
}

int verify_certificate(const std::string& path) {
  using namespace entnum;
  std::ifstream f(path);
  if (!f) fail(ErrorCode::kIo, "cannot read certificate '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  const CoverDocument doc = cover_certificate_from_json(buf.str());
  if (doc.witness.empty()) fail(ErrorCode::kInvalidArgument, "certificate carries no witness sample");
  const CoverCheck check = verify_cover(doc.certificate, doc.witness, doc.metric);
  std::printf("%s: %zu centers, %zu witness points, radius %.17g, max distance %.17g\n",
              check.ok ? "valid" : "INVALID", doc.certificate.centers.size(), doc.witness.size(),
              doc.certificate.radius, check.max_distance);
  return check.ok ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy numbers, greedy approximation and sampling discretization experiments"};
  app.set_version_flag("--version", entnum::version_string());
  app.require_subcommand(1);

  RunFlags flags;
  const std::vector<std::string>& names = entnum::experiment_names();
  std::vector<CLI::App*> subs;
  for (const std::string& name : names) {
    CLI::App* sub = app.add_subcommand(name, "Run the " + name + " experiment");
    sub->add_option("--config", flags.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "Random seed (overrides the config)");
    sub->add_option("--out", flags.out, "Output path (stdout when omitted)");
    sub->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--set", flags.overrides, "Config override key=value (repeatable)");
    sub->add_flag("--quiet", flags.quiet, "Suppress the summary on stderr");
    subs.push_back(sub);
  }
  std::string cert_path;
  CLI::App* verify = app.add_subcommand("verify", "Re-check a cover certificate written by it2-octahedron");
  verify->add_option("certificate", cert_path, "Certificate JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (verify->parsed()) return verify_certificate(cert_path);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) return run_experiment(names[i], flags);
    }
  } catch (const entnum::Error& e) {
    std::cerr << "entnum: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "entnum: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
