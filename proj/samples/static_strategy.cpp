// Builds the four-query strategy for a few static points and checks the
// promised bound over a short run.

#include <iostream>

#include "ucenters/ucenters.hpp"

int main() {
  using namespace ucenters;
  const std::vector<double> xs{0.0, 0.4, 1.7, 2.2, 3.9};
  Instance inst = instances::random_static(xs.size(), 1, 4.0);
  for (std::size_t i = 0; i < xs.size(); ++i) inst.objects[i].trajectory = Trajectory::stationary(Point{xs[i]});
  inst.queries_per_step = 4;

  StaticFourQueryScheduler sched(inst);
  const auto& s = sched.strategy();
  std::cout << "b = " << s.b << ", bound = " << s.size_bound() << "\n";
  for (std::size_t c = 0; c < 3; ++c) std::cout << "channel " << c + 1 << ": " << pinwheel::format_period(s.channels[c]) << "\n";
  const auto series = run(inst, sched, 50);
  std::cout << "max 1-center region size over 50 steps: " << series.max_size << "\n";
  return series.max_size <= s.size_bound() + kTolerance ? 0 : 1;
}
