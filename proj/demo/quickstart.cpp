// Library tour: a rectangular barrier, a Sauter step, resonances and the
// long-ramp suppression.

#include <cstdio>

#include "kleinzone/transmission.hpp"

int main() {
  using namespace kleinzone;

  // Electron (m = 0.51 MeV) on a 2.5 MeV barrier, 0.1 MeV above threshold.
  PhysParams beam;
  beam.E = 1.0 + 0.1 / 0.51;
  beam.U = 2.5 / 0.51;
  beam.L = 10.0;
  const auto avg = t_averaged(beam, Model::Dirac, StepShape::Rect);
  std::printf("rect barrier: T = %.6f, energy-averaged T = %.6f\n", avg.T, *avg.T_avg);

  // Linear ramp of width 5/m under a 3m step.
  PhysParams ramp;
  ramp.E = 1.5;
  ramp.U = 3.0;
  ramp.ell = 5.0;
  const auto sm = sauter_step_matrix(ramp);
  std::printf("sauter step: a = %.9f%+.9fi, b = %.9f%+.9fi, T = %.6e\n", sm.a_value().real(),
              sm.a_value().imag(), sm.b_value().real(), sm.b_value().imag(),
              t_step(ramp, Model::Dirac, StepShape::Sauter).T);

  // Total-transmission energies of the 8m, L = 4/m rectangular barrier.
  PhysParams wall;
  wall.U = 8.0;
  wall.L = 4.0;
  const auto rep = find_resonances(wall, Model::Dirac, StepShape::Rect, 1.0, 7.0);
  std::printf("resonances: %zu, first at E = %.10f\n", rep.count, rep.energies.front());

  // A 100/m ramp suppresses the averaged barrier transmission by ~90 decades.
  PhysParams slow;
  slow.E = 1.2;
  slow.U = 3.0;
  slow.ell = 100.0;
  const auto deep = t_averaged(slow, Model::Dirac, StepShape::Sauter);
  const auto asym = sauter_asymptotic(slow);
  std::printf("long ramp: log10 T_avg = %.3f (asymptotic estimate %.3f)\n", *deep.log10_T_avg,
              asym.log10_T_barrier_avg);
}
