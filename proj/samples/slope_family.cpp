// Slopes of the non-strong b = 2 family over the first few primes.

#include <iostream>

#include "dks/dks.hpp"

int main() {
  const auto t = dks::slope_table(2, dks::primes_in_range(5, 31));
  for (const auto& r : t.rows)
    std::cout << "p = " << r.p << "  slope = " << dks::to_string(r.slope) << "  sigma = " << r.sigma << "\n";
  std::cout << "limit " << dks::to_string(t.limit) << (t.strictly_decreasing_from_7 ? ", decreasing from p = 7\n" : "\n");
}
