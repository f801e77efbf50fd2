// An 8-point discrete Fourier transform acting on OAM modes 1..8 of a
// single beam.

#include <cmath>
#include <cstdio>
#include <numbers>

#include "pathoam/pathoam.hpp"

int main() {
  using namespace pathoam;
  constexpr Index N = 8;
  CMatrix f(N, N);
  for (Index r = 0; r < N; ++r)
    for (Index c = 0; c < N; ++c)
      f(r, c) = std::polar(1.0 / std::sqrt(double(N)), 2.0 * std::numbers::pi * double(r * c) / double(N));
  const UnitaryMatrix u = UnitaryMatrix::from_matrix(f);

  const OamNetlist net = compile_oam(u);
  const VerificationReport report = verify(net, u);
  std::printf("%s\n", dump_pretty(to_json(report)).c_str());
  std::printf("%s", render_diagram(net).c_str());
  return report.laws_pass() ? 0 : 1;
}
