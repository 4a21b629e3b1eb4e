#pragma once

// Row-transfer matrix of the six-vertex model on width-L cylinders: up-arrow
// blocks, leading eigenvalues, and the algebraic eigenpair construction from
// root systems of the transfer equations.

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace rcm {

// block of the row-transfer matrix with m up-arrows per row; states are the
// C(L,m) bitmasks with m set bits, ordered by increasing mask value
struct TransferBlock {
  int L = 0;
  int m = 0;
  double c = 0.0;
  std::vector<uint64_t> states;           // bitmask per state index
  std::vector<double> dense;              // row-major, size() == states^2 when dense
  int k() const { return m - L / 2; }
  int dim() const { return static_cast<int>(states.size()); }
  double entry(int row, int col) const { return dense[static_cast<size_t>(row) * dim() + col]; }

  // y = V x without storing the matrix
  void apply(const std::vector<double>& x, std::vector<double>& y) const;
  void apply(const std::vector<std::complex<double>>& x,
             std::vector<std::complex<double>>& y) const;
};

// dense up to L=16; larger blocks are matrix-free (dense left empty)
TransferBlock build_block(int L, int m, double c);

// full 2^L x 2^L transfer matrix for small L (block-structure checks)
std::vector<double> full_transfer_matrix(int L, double c);

struct PowerIterationResult {
  double eigenvalue = 0.0;
  std::vector<double> eigenvector;
  int iterations = 0;
};
// Perron-Frobenius eigenvalue by power iteration from the all-ones vector
PowerIterationResult leading_eigenvalue(const TransferBlock& block, double tol = 1e-12,
                                        int max_iterations = 200000);

// trace of V^M computed from the dense block
double trace_power(const TransferBlock& block, int M);

struct TraceCheckReport {
  int L = 0, M = 0, k = 0;
  double c = 0.0;
  double z_sector = 0.0;       // enumeration side
  double trace = 0.0;          // transfer-matrix side
  double relative_error = 0.0;
};
// partition function of the k-sector on the L x M torus against Tr (V^(k))^M
TraceCheckReport trace_power_check(int L, int M, int k, double c);

// --- root-system machinery ------------------------------------------------------

// continuous angle function with theta(0,0)=0 whose exponential reproduces
// e^{i(x-y)} (e^{-ix}+e^{iy}-2 delta)/(e^{-iy}+e^{ix}-2 delta)
double theta(double x, double y, double delta);
double theta_dx(double x, double y, double delta);  // partial in the first slot
// half-width cut of the admissible interval (-pi+mu, pi-mu)
double domain_margin(double delta);

struct BetheRoots {
  int n = 0;
  double delta = 0.0;
  std::vector<double> roots;  // increasing, symmetric about 0
  double residual = 0.0;
};

// solve L p_j = 2 pi I_j - sum_k theta(p_j, p_k), I_j = j - (n+1)/2
BetheRoots solve_bethe(int L, int n, double delta, double tol = 1e-12,
                       int max_iterations = 20000);

struct BetheEigenpair {
  std::vector<std::complex<double>> psi;  // indexed like the block states
  double eigenvalue = 0.0;
  bool zero_root_branch = false;
  double residual = 0.0;  // relative eigen-residual against the dense block
};

// psi(x) = sum over permutations of amplitude * plane waves
std::vector<std::complex<double>> bethe_vector(const BetheRoots& roots, int L);
// eigenvalue from the product formulas (generic and zero-root branches)
double bethe_eigenvalue(const BetheRoots& roots, double c, int L);
// assembled eigenpair with its residual against the block with m=n up arrows
BetheEigenpair bethe_eigenpair(const BetheRoots& roots, double c, int L);

struct FreeEnergyRow {
  int k = 0;
  int m = 0;
  double lambda_max = 0.0;
  double log_lambda_over_l = 0.0;
};
// rows for k in [0, k_max]; monotonicity Lambda^(0) >= Lambda^(k) is asserted
std::vector<FreeEnergyRow> free_energy_table(int L, double c, int k_max);

}  // namespace rcm
