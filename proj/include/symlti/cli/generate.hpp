#pragma once

// Seeded random systems with a known structure certificate.

#include <cstdint>
#include <string>

#include "symlti/cli/documents.hpp"

namespace symlti::cli {

enum class FixtureKind { Reciprocal, IOHamiltonian, Relaxation, Lossless, TimeReversible };

FixtureKind parse_fixture_kind(const std::string& name);
std::string_view to_string(FixtureKind kind);
/// The certificate kind a fixture's ground truth belongs to.
CertificateKind certificate_kind(FixtureKind kind);

/// n in 1..8, m in 1..3. Throws Error(OddDimension) for IO-Hamiltonian
/// fixtures of odd n.
SystemDocument generate_fixture(FixtureKind kind, int n, int m, std::uint64_t seed);

}  // namespace symlti::cli
