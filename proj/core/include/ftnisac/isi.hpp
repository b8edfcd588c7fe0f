#pragma once

#include <complex>
#include <vector>

#include "ftnisac/pulse.hpp"

namespace ftnisac {

/// Inner product of the pulse with its copy shifted by k*xi*T + delay,
/// evaluated as a frequency-domain integral of |Hp|^2 against a cosine.
/// The imaginary part vanishes by spectrum symmetry. |result| <= 1.
double isi_coefficient(const PulseSpec& pulse, double compression, int k,
                       double delay = 0.0);

/// All coefficients g[k, delay] for k = -k_max .. k_max in one pass
/// (index k + k_max). Shares quadrature nodes across k, so building long
/// Toeplitz/circulant rows costs O(nodes * k_max) instead of one adaptive
/// integral per coefficient.
std::vector<double> isi_coefficient_row(const PulseSpec& pulse,
                                        double compression, double delay,
                                        int k_max);

/// Finite-size effective channel matrix: entry (n, m) = g[m - n, delay].
/// Real Toeplitz; symmetric positive-definite when delay == 0.
struct IsiMatrix {
  int size = 0;
  double delay = 0.0;
  std::vector<double> entries;  // row-major, size*size

  double operator()(int n, int m) const { return entries[n * size + m]; }
};

IsiMatrix build_isi_matrix(const PulseSpec& pulse, double compression,
                           int size, double delay = 0.0);

/// Geometric phase sum sum_{n=1}^{N} e^{j 2 pi x n s} in closed form,
/// periodic in x with period 1/s. The removable singularity at x*s integer
/// evaluates to N times the midpoint phase.
std::complex<double> dirichlet_kernel(double x, int n_symbols,
                                      double symbol_period);

}  // namespace ftnisac
