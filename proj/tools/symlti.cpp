// symlti: structure certificates and canonical forms for LTI systems.

#include <iostream>

#include "CLI11.hpp"
#include "symlti/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace symlti::cli;
  CLI::App app{"Certificates, canonical forms and Hankel/geometry checks for LTI systems"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  CommonOptions common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", common.input, "system document (JSON), '-' for stdin")->required();
    sub->add_option("--tol", common.tol.feas_tol, "feasibility tolerance")->check(CLI::PositiveNumber);
  };

  std::string property = "all";
  auto* certify = app.add_subcommand("certify", "run certificate searches");
  add_common(certify);
  certify->add_option("--property", property)
      ->check(CLI::IsMember({"reciprocal", "iohamiltonian", "signed-reversible", "reversible", "lossless",
                             "passive", "relaxation", "all"}));

  std::string form;
  auto* canon = app.add_subcommand("canonicalize", "transform to a canonical form");
  add_common(canon);
  canon->add_option("--form", form)
      ->required()
      ->check(CLI::IsMember({"pseudo-gradient", "port-hamiltonian", "relaxation", "factorize", "normal-form"}));

  std::string grid;
  auto* hankel = app.add_subcommand("hankel", "Hankel spectrum, Gramians and Mercer residual");
  add_common(hankel);
  hankel->add_option("--grid", grid, "T,h");

  std::string test = "all";
  auto* geometry = app.add_subcommand("geometry", "Lagrangian/Dirac tests of a subspace document");
  add_common(geometry);
  geometry->add_option("--test", test)
      ->check(CLI::IsMember({"lagrangian", "dirac", "separable", "hybrid", "kernel", "all"}));

  std::string kind;
  int n = 2, m = 1;
  std::uint64_t seed = 0;
  auto* generate = app.add_subcommand("generate", "random system with a known certificate");
  generate->add_option("--kind", kind)
      ->required()
      ->check(CLI::IsMember({"reciprocal", "iohamiltonian", "relaxation", "lossless", "time-reversible"}));
  generate->add_option("--n", n)->check(CLI::Range(1, 8));
  generate->add_option("--m", m)->check(CLI::Range(1, 3));
  generate->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*certify) return run_certify(common, property, std::cout, std::cerr);
  if (*canon) return run_canonicalize(common, form, std::cout, std::cerr);
  if (*hankel) return run_hankel(common, grid, std::cout, std::cerr);
  if (*geometry) return run_geometry(common, test, std::cout, std::cerr);
  return run_generate(kind, n, m, seed, std::cout, std::cerr);
}
