// Compile a random 12-mode unitary onto 6 paths x 2 OAM modes and compare
// the element budget with the plain coupler mesh.

#include <cstdio>

#include "pathoam/pathoam.hpp"

int main() {
  using namespace pathoam;
  const UnitaryMatrix u = haar_random_unitary(12, 7);
  const ClementsMesh mesh = decompose(u);
  const HybridNetlist net = compile(mesh);
  const UnitaryMatrix sim = simulate_netlist(net);

  std::printf("mesh couplers      %zu\n", mesh.op_count());
  std::printf("hybrid OBS         %lld\n", static_cast<long long>(net.stats.obs_count));
  std::printf("OAM swaps          %lld\n", static_cast<long long>(net.stats.swap_count));
  std::printf("optical depth      %lld\n", static_cast<long long>(net.stats.optical_depth));
  std::printf("frobenius error    %.3e\n", frobenius_distance(sim.matrix(), u.matrix()));
  std::printf("\n%s", render_diagram(net).c_str());
}
