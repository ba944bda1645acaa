// Round-robin against the mover-aware reference on the two-movers family.

#include <iostream>

#include "ucenters/ucenters.hpp"

int main() {
  using namespace ucenters;
  for (std::size_t n : {8, 16, 32}) {
    const Instance inst = instances::movers_last(instances::two_movers_1d(n, 1.0));
    RoundRobinScheduler rr(n, 1);
    ScriptedScheduler ref(instances::mover_reference_period(inst, true), n, 1);
    const double blind = run(inst, rr, 4 * static_cast<std::int64_t>(n)).max_size;
    const double aware = run(inst, ref, 4 * static_cast<std::int64_t>(n)).max_size;
    std::cout << "n=" << n << "  round_robin " << blind << "  reference " << aware << "  ratio "
              << competitive_ratio(blind, aware) << "\n";
  }
}
