#pragma once

// Subcommand implementations. Each builds a report document; the run_*
// wrappers add input handling and exit codes (0 ran, 2 input error).

#include <iosfwd>
#include <string>

#include "symlti/cli/documents.hpp"
#include "symlti/cli/generate.hpp"

namespace symlti::cli {

Json certify_report(const SystemDocument& doc, const std::string& property, const Tolerances& tol = {});
Json canonicalize_report(const SystemDocument& doc, const std::string& form, const Tolerances& tol = {});
/// horizon/step <= 0 selects the default grid.
Json hankel_report(const SystemDocument& doc, double horizon, double step, const Tolerances& tol = {});
Json geometry_report(const SubspaceDocument& doc, const std::string& test, const Tolerances& tol = {});

struct CommonOptions {
  std::string input = "-";
  Tolerances tol;
};

int run_certify(const CommonOptions& opts, const std::string& property, std::ostream& out, std::ostream& err);
int run_canonicalize(const CommonOptions& opts, const std::string& form, std::ostream& out, std::ostream& err);
/// grid is "T,h" or empty.
int run_hankel(const CommonOptions& opts, const std::string& grid, std::ostream& out, std::ostream& err);
int run_geometry(const CommonOptions& opts, const std::string& test, std::ostream& out, std::ostream& err);
int run_generate(const std::string& kind, int n, int m, std::uint64_t seed, std::ostream& out, std::ostream& err);

}  // namespace symlti::cli
