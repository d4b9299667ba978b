#pragma once

#include <string>
#include <vector>

#include "polarlab/channel.hpp"

namespace polarlab {

BinaryChannel bec_with_capacity(double i);  // eps = 1 - i
BinaryChannel bsc_with_capacity(double i);  // bisection on the crossover

// Inverses of rho |-> E0(rho, .) at fixed rho != 0; the target must lie in
// the closed interval between 0 and rho. Bisection on the channel parameter,
// at most 200 iterations.
BinaryChannel bec_with_e0(double target, double rho);
BinaryChannel bsc_with_e0(double target, double rho);

struct E0ScanRow {
  double rho0, rho1;
  double e0_w, e0_bec, e0_bsc;
  bool in_interval;  // e0_w within [min,max] of the two extremal values
};

// Matches w at rho0 with a BEC and a BSC of equal E0, then evaluates all
// three at each rho1 in the grid.
std::vector<E0ScanRow> e0_extremality_scan(const BinaryChannel& w, double rho0,
                                           const std::vector<double>& rho_grid);

std::string e0_scan_csv(const std::vector<E0ScanRow>& rows);

}  // namespace polarlab
