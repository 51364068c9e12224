// Evaluate one setting, then sweep s for a few HG modes and write a CSV.
//
//   wmp_sample [out.csv]

#include <cstdio>
#include <fstream>
#include <iostream>

#include "wmp/snr.hpp"
#include "wmp/sweep.hpp"

int main(int argc, char** argv) {
  using namespace wmp;

  const auto setting = MeasurementSetting::from_weak_value(PointerMode::lg(0, 1), OperatorClass::projector, {0.5, 1.0}, 0.5);
  const PointEvaluation ev = evaluate_point(setting);
  const PointerMomentReport r = ev.report();
  std::printf("lg:0,1 projector w=0.5+1i s=0.5\n");
  std::printf("  <x>=%.6f <y>=%.6f <px>=%.6f  lambda=%.6f\n", r.x_mean, r.y_mean, r.px_mean, r.norm_coef);
  std::printf("  P_s paper=%.6f exact=%.6f  SNR_x=%.6f SNR_y=%.6f\n", r.ps_paper, r.ps_exact, ev.snr_x, ev.snr_y);

  SweepGrid grid;
  grid.s = range_axis(0.0, 4.0, 0.5);
  grid.selections = {SelectionPoint::from_weak_value({0.5, 1.0})};
  grid.modes = {PointerMode::hg(0), PointerMode::hg(1), PointerMode::hg(2)};
  grid.op_class = OperatorClass::involutory;

  const auto rows = snr_surface(grid, {});
  if (argc > 1) {
    std::ofstream out(argv[1]);
    write_csv(out, rows, {{"note", "hg modes, involutory, w=0.5+1i"}});
    std::printf("wrote %zu rows to %s\n", rows.size(), argv[1]);
  } else {
    write_csv(std::cout, rows, {});
  }
  return 0;
}
