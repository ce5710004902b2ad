#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tumorsim {

/// Manufactured-solution convergence of one discrete problem.
struct MmsCase {
  std::string name;
  std::vector<int> cells;       // cells per direction on the unit square
  std::vector<double> errors;   // max-norm error per grid
  std::vector<double> orders;   // log2(e_coarse / e_fine) per refinement
};

/// laplacian: apply the discrete Laplacian to sin(pi x) sin(pi y).
/// poisson: -lap u = f, Dirichlet zero, u = sin(pi x) sin(pi y).
/// poisson-noflux: -lap u = f, no-flux with zero mean, u = cos(pi x) cos(pi y).
/// helmholtz: -lap u + c u = f, Dirichlet zero, c = 1 + x y,
///            u = sin(pi x) sin(2 pi y).
std::vector<MmsCase> run_mms_suite(const std::vector<int>& cells = {16, 32, 64});

void print_mms_table(std::ostream& os, const std::vector<MmsCase>& cases);

}  // namespace tumorsim
