#pragma once

#include "ttinv/hadamard_inverse.hpp"
#include "ttinv/kron_sum.hpp"
#include "ttinv/rank_analysis.hpp"

namespace ttinv {

enum class Boundary { dirichlet, periodic };

/// Uniform tensor-product grid on [a,b]^d. Dirichlet grids hold the n
/// interior points with h = (b-a)/(n+1); periodic grids the n points
/// starting at a with h = (b-a)/n.
struct GridSpec {
  Index d = 1;
  Index n = 2;
  double a = -1.0, b = 1.0;
  Boundary boundary = Boundary::dirichlet;

  double h() const {
    return (b - a) / static_cast<double>(boundary == Boundary::dirichlet ? n + 1 : n);
  }
  std::vector<double> points() const;
  void validate() const;
};

struct BGKParams {
  double Kn = 1.0;      // Knudsen number
  double Bo = 3.65;     // Boltzmann number
  double K = 1.0;       // collision frequency pre-factor
  double mu_exp = 0.5;  // viscosity temperature exponent
  double dt = 0.0025;

  void validate() const;
};

/// Macroscopic fields on the spatial grid, row-major over (x_1..x_d).
struct MacroFields {
  std::vector<Index> grid_sizes;
  std::vector<double> rho;
  std::vector<std::vector<double>> velocity;  // d components
  std::vector<double> temperature;
};

struct FPState {
  TTTensor rho;
  double t = 0.0;
  double sigma_ref = 2.0;  // 1 + e^{-2t}, tracks the exact solution
};

// -- Poisson ---------------------------------------------------------------

/// d-dimensional negative Laplacian: factors (tridiag(-1,2,-1)/h^2, I).
KroneckerSumOperator poisson_operator(const GridSpec& grid);

/// Right-hand side (d+3) pi^2 sum_k sin(2 pi x_k) prod_{i != k} sin(pi x_i)
/// as an exact TT of rank at most (1,d,...,d,1).
TTTensor poisson_rhs(const GridSpec& grid);

/// The manufactured exact solution sum_k sin(2 pi x_k) prod sin(pi x_i).
TTTensor poisson_exact(const GridSpec& grid);

// -- Boltzmann-BGK ----------------------------------------------------------

/// Periodic central-difference gradient: circulant, antisymmetric,
/// entries +-1/h with wraparound corners.
Matrix bgk_gradient_matrix(Index n, double h);

/// Crank-Nicolson transport operator
///   sum_k I x ... x ((1/d) I_{n^2} + (dt/2) V^(k) (x) grad) x ... x I
/// on paired (v,x) modes (v slower); pass a negative dt for the
/// right-hand-side operator. Factors stay in Kronecker form and are
/// diagonalized analytically through the Fourier basis.
KroneckerSumOperator bgk_operator(const GridSpec& grid_x, const GridSpec& grid_v, double dt);

/// Equilibrium distribution on the joint (v,x) grid; exact rank one for
/// spatially constant fields, dense evaluation + compression otherwise.
TTTensor maxwellian(const MacroFields& fields, const GridSpec& grid_x, const GridSpec& grid_v,
                    double bo, double compress_eps = 1e-10, Index dense_cap = kDefaultDenseCap);

/// Rectangle-rule moments (rho, U, T) by TT mode contractions.
MacroFields moments(const TTTensor& f, const GridSpec& grid_x, const GridSpec& grid_v, double bo,
                    Index dense_cap = kDefaultDenseCap);

/// nu = rho K T^{1-mu} on the spatial grid.
std::vector<double> collision_frequency(const MacroFields& fields, const BGKParams& params);

/// The benchmark initial state: rho = 1 + 0.5 prod_k sin(x_k), U = 0, T = 1.
MacroFields bgk_initial_fields(const GridSpec& grid_x);

struct BGKWorkspace {
  GridSpec grid_x, grid_v;
  BGKParams params;
  KroneckerSumOperator left, right;
  SpectralFactorization fact;
  TTTensor xinv;
  InversionReport inversion;
};

BGKWorkspace bgk_setup(const GridSpec& grid_x, const GridSpec& grid_v, const BGKParams& params,
                       const InversionConfig& inv_cfg);

/// One Crank-Nicolson step of the BGK equation with explicit collision
/// relaxation toward the local Maxwellian.
TTTensor bgk_step(const TTTensor& f, const BGKWorkspace& ws, double round_eps);

// -- Fokker-Planck -----------------------------------------------------------

/// Left Crank-Nicolson operator: factors
///   (1/d - dt/2) I - (dt/2) X grad - (dt/4) lap,  M = I.
KroneckerSumOperator fp_operator(const GridSpec& grid, double dt);

/// Right-hand-side operator (1/d + dt/2) I + (dt/2) X grad + (dt/4) lap.
KroneckerSumOperator fp_right_operator(const GridSpec& grid, double dt);

/// The zero-diagonal tridiagonal matrix from the spectral argument;
/// requires the sign products (fp-a) to be positive, otherwise a regime
/// error naming the first failing row.
Matrix fp_tridiagonal_A(const GridSpec& grid);

struct FPWorkspace {
  GridSpec grid;
  double dt = 0.0;
  KroneckerSumOperator left, right;
  SpectralFactorization fact;
  TTTensor xinv;
  InversionReport inversion;
};

FPWorkspace fp_setup(const GridSpec& grid, double dt, const InversionConfig& inv_cfg);

FPState fp_step(const FPState& state, const FPWorkspace& ws, double round_eps);

/// Exact Gaussian (pi sigma(t))^{-d/2} exp(-||x||^2/sigma(t)),
/// sigma(t) = 1 + e^{-2t}; rank one.
TTTensor fp_exact(const GridSpec& grid, double t);

// -- shared -------------------------------------------------------------------

/// ||u - ref||_F / ||ref||_F fully in TT arithmetic.
double relative_error(const TTTensor& u, const TTTensor& ref);

/// Direct dense factorization solve; the oracle for all solver
/// comparisons. Mirrors the memory wall of a structure-less baseline.
DenseTensor dense_reference_solve(const KroneckerSumOperator& op, const DenseTensor& f,
                                  Index dense_cap = kDefaultDenseCap);

/// Mean of the internal ranks r_1..r_{d-1}, rounded to nearest; 1 for d=1.
Index averaged_rank(const TTTensor& t);

/// Sum of all entries by mode contractions (used for mass tracking).
Complex sum_entries(const TTTensor& t);

/// Theorem-parameter builders from the discretization data.
TheoremParams poisson_theorem_params(const GridSpec& grid, Index k);
TheoremParams bgk_theorem_params(const GridSpec& grid_x, const GridSpec& grid_v, double dt,
                                 Index k);
TheoremParams fp_theorem_params(const GridSpec& grid, double dt, Index k);

}  // namespace ttinv
