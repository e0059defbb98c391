#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kpv/catalogue.hpp"
#include "kpv/expr.hpp"
#include "kpv/sampling.hpp"

namespace kpv {

/// prefactor * first' = dH/d(second), prefactor * second' = -dH/d(first).
struct HamiltonianEntry {
  std::string id;
  SystemId target;
  std::string first;   // position-like coordinate
  std::string second;  // momentum-like coordinate
  Expr H;
  Expr prefactor;
};

const std::vector<std::string>& all_hamiltonians();
/// Throws UnknownId.
const HamiltonianEntry& get_hamiltonian(const std::string& id);

/// H12 and H32 exactly as printed. Neither generates its system; kept so
/// that tests can confirm the checker rejects them.
Expr displayed_h12();
Expr displayed_h32();

struct HamiltonianReport {
  std::string id;
  SampleStats stats;
  bool passed() const { return stats.passed(); }
};

/// Exact comparison of both coordinate derivatives at random points.
HamiltonianReport verify_hamiltonian(const HamiltonianEntry& e, int samples, std::uint64_t seed);
HamiltonianReport verify_hamiltonian(const std::string& id, int samples, std::uint64_t seed);

/// Same check after adding t^3 to H.
HamiltonianReport verify_hamiltonian_shifted(const std::string& id, int samples, std::uint64_t seed);

}  // namespace kpv
