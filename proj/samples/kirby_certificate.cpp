// Builds the strong (2,3) structure on the extra-special group of order 3^5, checks it and
// prints the invariants of the resulting surface.

#include <iostream>

#include "dks/dks.hpp"

int main() {
  const auto s = dks::construct_strong(2, 3, dks::Variant::H);
  const auto rep = dks::verify_full(s);
  std::cout << "|G| = " << s.descriptor.order() << ", structure "
            << (rep.passed ? "verified" : "REJECTED") << " (" << dks::to_string(rep.strength) << ")\n";
  if (!rep.passed) return 1;

  const dks::BigInt order = s.descriptor.order();
  const auto inv = dks::compute_invariants({order, 2, 3, order / *rep.k1_order, order / *rep.k2_order});
  std::cout << "c1^2 = " << inv.c1sq << "  c2 = " << inv.c2 << "  sigma = " << inv.sigma
            << "  g1 = g2 = " << inv.g1 << "\n";
}
