#include "ttinv/pde.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "backend.hpp"

namespace ttinv {

namespace {

constexpr double kPi = std::numbers::pi;

// Memory guard for the dense baseline: N^2 matrix entries.
constexpr Index kDenseMatrixEntryCap = Index(1) << 26;

Matrix laplace_1d(Index n, double h) {
  Matrix s = Matrix::Zero(n, n);
  const double w = 1.0 / (h * h);
  for (Index i = 0; i < n; ++i) {
    s(i, i) = 2.0 * w;
    if (i + 1 < n) {
      s(i, i + 1) = -w;
      s(i + 1, i) = -w;
    }
  }
  return s;
}

// standard central difference (f_{i+1} - f_{i-1}) / (2h), Dirichlet ends
Matrix gradient_dirichlet(Index n, double h) {
  Matrix g = Matrix::Zero(n, n);
  const double w = 1.0 / (2.0 * h);
  for (Index i = 0; i + 1 < n; ++i) {
    g(i, i + 1) = w;
    g(i + 1, i) = -w;
  }
  return g;
}

std::vector<Complex> sample(const std::vector<double>& xs, const std::function<double(double)>& f) {
  std::vector<Complex> v(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) v[i] = Complex(f(xs[i]), 0.0);
  return v;
}

// TT tensor over the spatial modes lifted to the paired (v,x) modes by
// repetition along v.
TTTensor lift_spatial(const TTTensor& t, Index nv) {
  std::vector<TTCore> cores;
  cores.reserve(static_cast<size_t>(t.order()));
  for (const auto& c : t.cores()) {
    TTCore nc(c.r0, nv * c.n, c.r1);
    for (Index p = 0; p < c.r0; ++p)
      for (Index iv = 0; iv < nv; ++iv)
        for (Index ix = 0; ix < c.n; ++ix)
          for (Index q = 0; q < c.r1; ++q) nc.at(p, iv * c.n + ix, q) = c.at(p, ix, q);
    cores.push_back(std::move(nc));
  }
  return TTTensor(std::move(cores));
}

}  // namespace

void GridSpec::validate() const {
  require(d >= 1 && n >= 2, ErrorCode::argument, "GridSpec: need d >= 1 and n >= 2");
  require(b > a, ErrorCode::argument, "GridSpec: empty interval");
}

std::vector<double> GridSpec::points() const {
  validate();
  std::vector<double> xs(static_cast<size_t>(n));
  const double step = h();
  for (Index i = 0; i < n; ++i)
    xs[static_cast<size_t>(i)] =
        boundary == Boundary::dirichlet ? a + step * static_cast<double>(i + 1)
                                        : a + step * static_cast<double>(i);
  return xs;
}

void BGKParams::validate() const {
  require(Kn > 0 && Bo > 0 && K > 0 && mu_exp > 0 && dt >= 0, ErrorCode::argument,
          "BGKParams: parameters must be positive");
}

// ---------------------------------------------------------------------------
// Poisson
// ---------------------------------------------------------------------------

KroneckerSumOperator poisson_operator(const GridSpec& grid) {
  grid.validate();
  require(grid.boundary == Boundary::dirichlet, ErrorCode::argument,
          "poisson_operator: only Dirichlet boundaries are supported");
  std::vector<std::pair<Matrix, Matrix>> sm;
  const Matrix s = laplace_1d(grid.n, grid.h());
  for (Index k = 0; k < grid.d; ++k) sm.emplace_back(s, Matrix::Identity(grid.n, grid.n));
  return KroneckerSumOperator::from_dense_factors(sm);
}

namespace {

TTTensor poisson_solution_tensor(const GridSpec& grid) {
  const auto xs = grid.points();
  std::vector<std::vector<Complex>> sin1(static_cast<size_t>(grid.d)),
      sin2(static_cast<size_t>(grid.d));
  for (Index k = 0; k < grid.d; ++k) {
    sin1[static_cast<size_t>(k)] = sample(xs, [](double x) { return std::sin(kPi * x); });
    sin2[static_cast<size_t>(k)] = sample(xs, [](double x) { return std::sin(2.0 * kPi * x); });
  }
  TTTensor acc;
  for (Index k = 0; k < grid.d; ++k) {
    std::vector<std::vector<Complex>> vecs;
    for (Index i = 0; i < grid.d; ++i)
      vecs.push_back(i == k ? sin2[static_cast<size_t>(i)] : sin1[static_cast<size_t>(i)]);
    TTTensor term = tt_rank_one(vecs);
    acc = (k == 0) ? std::move(term) : add(acc, term);
  }
  return acc;
}

}  // namespace

TTTensor poisson_exact(const GridSpec& grid) {
  require(grid.boundary == Boundary::dirichlet, ErrorCode::argument,
          "poisson_exact: Dirichlet grid expected");
  return poisson_solution_tensor(grid);
}

TTTensor poisson_rhs(const GridSpec& grid) {
  // each summand is an eigenfunction of -lap with eigenvalue (d+3) pi^2
  const double coeff = static_cast<double>(grid.d + 3) * kPi * kPi;
  return scale(poisson_solution_tensor(grid), Complex(coeff, 0.0));
}

// ---------------------------------------------------------------------------
// Boltzmann-BGK
// ---------------------------------------------------------------------------

Matrix bgk_gradient_matrix(Index n, double h) {
  require(n >= 2 && h > 0, ErrorCode::argument, "bgk_gradient_matrix: bad arguments");
  Matrix g = Matrix::Zero(n, n);
  const double w = 1.0 / h;
  for (Index i = 0; i < n; ++i) {
    g(i, (i + 1) % n) = w;
    g(i, (i - 1 + n) % n) = -w;
  }
  return g;
}

KroneckerSumOperator bgk_operator(const GridSpec& grid_x, const GridSpec& grid_v, double dt) {
  grid_x.validate();
  grid_v.validate();
  require(grid_x.boundary == Boundary::periodic && grid_v.boundary == Boundary::periodic,
          ErrorCode::argument, "bgk_operator: periodic grids expected");
  require(grid_x.d == grid_v.d, ErrorCode::argument, "bgk_operator: dimension mismatch");
  const Index d = grid_x.d;
  const auto vs = grid_v.points();
  Matrix vdiag = Matrix::Zero(grid_v.n, grid_v.n);
  for (Index i = 0; i < grid_v.n; ++i) vdiag(i, i) = vs[static_cast<size_t>(i)];
  const Matrix grad = bgk_gradient_matrix(grid_x.n, grid_x.h());

  std::vector<std::pair<ModeOperator, ModeOperator>> factors;
  for (Index k = 0; k < d; ++k) {
    ModeOperator s = ModeOperator::kron2(Complex(1.0 / static_cast<double>(d), 0.0),
                                         Matrix::Identity(grid_v.n, grid_v.n),
                                         Matrix::Identity(grid_x.n, grid_x.n));
    Kron2Term transport;
    transport.coeff = Complex(dt / 2.0, 0.0);
    transport.a = vdiag;
    transport.b = grad;
    s.add_term(std::move(transport));
    factors.emplace_back(std::move(s), ModeOperator::identity(grid_v.n * grid_x.n));
  }
  return KroneckerSumOperator(std::move(factors));
}

TTTensor maxwellian(const MacroFields& fields, const GridSpec& grid_x, const GridSpec& grid_v,
                    double bo, double compress_eps, Index dense_cap) {
  require(bo > 0, ErrorCode::argument, "maxwellian: Bo must be positive");
  const Index d = grid_x.d;
  const auto xs = grid_x.points();
  const auto vs = grid_v.points();
  const Index nx = grid_x.n, nv = grid_v.n;
  const Index spatial = product(fields.grid_sizes);
  require(static_cast<Index>(fields.rho.size()) == spatial &&
              static_cast<Index>(fields.velocity.size()) == d &&
              static_cast<Index>(fields.temperature.size()) == spatial,
          ErrorCode::argument, "maxwellian: field shapes do not match the grid");
  for (double t : fields.temperature)
    require(t > 0, ErrorCode::argument, "maxwellian: nonpositive temperature");
  for (double r : fields.rho) require(r > 0, ErrorCode::argument, "maxwellian: nonpositive density");

  const auto constant = [](const std::vector<double>& v) {
    for (double x : v)
      if (x != v.front()) return false;
    return true;
  };
  bool const_fields = constant(fields.rho) && constant(fields.temperature);
  for (const auto& u : fields.velocity) const_fields = const_fields && constant(u);

  if (const_fields) {
    const double rho = fields.rho.front();
    const double temp = fields.temperature.front();
    const double norm =
        rho / std::pow(2.0 * kPi * temp / bo, static_cast<double>(d) / 2.0);
    std::vector<std::vector<Complex>> vecs;
    for (Index k = 0; k < d; ++k) {
      const double uk = fields.velocity[static_cast<size_t>(k)].front();
      std::vector<Complex> w(static_cast<size_t>(nv * nx));
      for (Index iv = 0; iv < nv; ++iv) {
        const double g =
            std::exp(-bo * (vs[static_cast<size_t>(iv)] - uk) * (vs[static_cast<size_t>(iv)] - uk) /
                     (2.0 * temp));
        for (Index ix = 0; ix < nx; ++ix) w[static_cast<size_t>(iv * nx + ix)] = Complex(g, 0.0);
      }
      vecs.push_back(std::move(w));
    }
    return scale(tt_rank_one(vecs), Complex(norm, 0.0));
  }

  // dense evaluation on the joint grid, then compression
  std::vector<Index> modes(static_cast<size_t>(d), nv * nx);
  require(product(modes) <= dense_cap, ErrorCode::size_cap,
          "maxwellian: joint grid exceeds the dense cap");
  DenseTensor dense(modes);
  std::vector<Index> idx(static_cast<size_t>(d), 0);
  const Index total = product(modes);
  for (Index flat = 0; flat < total; ++flat) {
    Index rem = flat;
    for (Index k = d - 1; k >= 0; --k) {
      idx[static_cast<size_t>(k)] = rem % (nv * nx);
      rem /= nv * nx;
    }
    Index xoff = 0;
    for (Index k = 0; k < d; ++k) xoff = xoff * nx + idx[static_cast<size_t>(k)] % nx;
    const double rho = fields.rho[static_cast<size_t>(xoff)];
    const double temp = fields.temperature[static_cast<size_t>(xoff)];
    double q = 0.0;
    for (Index k = 0; k < d; ++k) {
      const double vk = vs[static_cast<size_t>(idx[static_cast<size_t>(k)] / nx)];
      const double uk = fields.velocity[static_cast<size_t>(k)][static_cast<size_t>(xoff)];
      q += (vk - uk) * (vk - uk);
    }
    dense.entries()[static_cast<size_t>(flat)] =
        Complex(rho / std::pow(2.0 * kPi * temp / bo, static_cast<double>(d) / 2.0) *
                    std::exp(-bo * q / (2.0 * temp)),
                0.0);
  }
  return from_dense(dense, compress_eps);
}

MacroFields moments(const TTTensor& f, const GridSpec& grid_x, const GridSpec& grid_v, double bo,
                    Index dense_cap) {
  const Index d = grid_x.d;
  require(f.order() == d, ErrorCode::argument, "moments: order mismatch");
  const Index nx = grid_x.n, nv = grid_v.n;
  for (Index ms : f.mode_sizes())
    require(ms == nx * nv, ErrorCode::argument, "moments: paired mode size mismatch");
  const auto vs = grid_v.points();
  const double dv = grid_v.h();

  // weight matrices (nx x nv*nx): sum over v with weight w(v)
  const auto weight = [&](const std::function<double(double)>& w) {
    Matrix m = Matrix::Zero(nx, nv * nx);
    for (Index iv = 0; iv < nv; ++iv)
      for (Index ix = 0; ix < nx; ++ix)
        m(ix, iv * nx + ix) = w(vs[static_cast<size_t>(iv)]) * dv;
    return m;
  };
  const Matrix w0 = weight([](double) { return 1.0; });
  const Matrix w1 = weight([](double v) { return v; });
  const Matrix w2 = weight([](double v) { return v * v; });

  const auto contract = [&](Index special, const Matrix& wk) {
    TTTensor t = f;
    for (Index k = 1; k <= d; ++k) {
      const Matrix& m = (k - 1 == special) ? wk : w0;
      t = detail::apply_to_mode(t, k, [&](const Matrix& x) { return Matrix(m * x); });
    }
    DenseTensor dd = to_dense(t, dense_cap);
    std::vector<double> out(dd.entries().size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = dd.entries()[i].real();
    return out;
  };

  MacroFields mf;
  mf.grid_sizes.assign(static_cast<size_t>(d), nx);
  mf.rho = contract(-1, w0);
  for (double r : mf.rho)
    require(r > 0, ErrorCode::numeric, "moments: nonpositive density encountered");

  std::vector<std::vector<double>> e2(static_cast<size_t>(d));
  for (Index k = 0; k < d; ++k) {
    std::vector<double> e1 = contract(k, w1);
    e2[static_cast<size_t>(k)] = contract(k, w2);
    for (size_t i = 0; i < e1.size(); ++i) e1[i] /= mf.rho[i];
    mf.velocity.push_back(std::move(e1));
  }
  mf.temperature.assign(mf.rho.size(), 0.0);
  for (size_t i = 0; i < mf.rho.size(); ++i) {
    double acc = 0.0;
    for (Index k = 0; k < d; ++k)
      acc += e2[static_cast<size_t>(k)][i] -
             mf.rho[i] * mf.velocity[static_cast<size_t>(k)][i] *
                 mf.velocity[static_cast<size_t>(k)][i];
    mf.temperature[i] = bo * acc / (static_cast<double>(d) * mf.rho[i]);
  }
  return mf;
}

std::vector<double> collision_frequency(const MacroFields& fields, const BGKParams& params) {
  params.validate();
  std::vector<double> nu(fields.rho.size());
  for (size_t i = 0; i < nu.size(); ++i)
    nu[i] = fields.rho[i] * params.K * std::pow(fields.temperature[i], 1.0 - params.mu_exp);
  return nu;
}

MacroFields bgk_initial_fields(const GridSpec& grid_x) {
  const auto xs = grid_x.points();
  const Index d = grid_x.d;
  const Index spatial = static_cast<Index>(std::pow(static_cast<double>(grid_x.n), d) + 0.5);
  MacroFields mf;
  mf.grid_sizes.assign(static_cast<size_t>(d), grid_x.n);
  mf.rho.resize(static_cast<size_t>(spatial));
  for (Index flat = 0; flat < spatial; ++flat) {
    Index rem = flat;
    double prod = 1.0;
    for (Index k = d - 1; k >= 0; --k) {
      prod *= std::sin(xs[static_cast<size_t>(rem % grid_x.n)]);
      rem /= grid_x.n;
    }
    mf.rho[static_cast<size_t>(flat)] = 1.0 + 0.5 * prod;
  }
  mf.velocity.assign(static_cast<size_t>(d), std::vector<double>(static_cast<size_t>(spatial), 0.0));
  mf.temperature.assign(static_cast<size_t>(spatial), 1.0);
  return mf;
}

BGKWorkspace bgk_setup(const GridSpec& grid_x, const GridSpec& grid_v, const BGKParams& params,
                       const InversionConfig& inv_cfg) {
  params.validate();
  BGKWorkspace ws;
  ws.grid_x = grid_x;
  ws.grid_v = grid_v;
  ws.params = params;
  ws.left = bgk_operator(grid_x, grid_v, params.dt);
  ws.right = bgk_operator(grid_x, grid_v, -params.dt);
  ws.fact = joint_diagonalize(ws.left);
  auto [xinv, rep] = hadamard_inverse(lambda_tensor(ws.fact), inv_cfg);
  require(rep.converged, ErrorCode::numeric, "bgk_setup: Hadamard inversion did not converge");
  ws.xinv = std::move(xinv);
  ws.inversion = std::move(rep);
  return ws;
}

TTTensor bgk_step(const TTTensor& f, const BGKWorkspace& ws, double round_eps) {
  const MacroFields mf = moments(f, ws.grid_x, ws.grid_v, ws.params.Bo);
  const TTTensor feq = maxwellian(mf, ws.grid_x, ws.grid_v, ws.params.Bo);
  std::vector<double> nu = collision_frequency(mf, ws.params);

  // collision source dt * nu(x)/Kn * (feq - f)
  DenseTensor nud(mf.grid_sizes);
  for (size_t i = 0; i < nu.size(); ++i)
    nud.entries()[i] = Complex(nu[i] * ws.params.dt / ws.params.Kn, 0.0);
  const TTTensor nutt = lift_spatial(from_dense(nud, 1e-13), ws.grid_v.n);
  const TTTensor collision = hadamard(nutt, subtract(feq, f));

  TTTensor rhs = round(add(apply_operator(ws.right, f, round_eps), collision), round_eps);
  return round(solve(ws.fact, ws.xinv, rhs, round_eps), round_eps);
}

// ---------------------------------------------------------------------------
// Fokker-Planck
// ---------------------------------------------------------------------------

namespace {

Matrix fp_factor(const GridSpec& grid, double dt, double sign) {
  const Index n = grid.n;
  const double h = grid.h();
  const auto xs = grid.points();
  Matrix xdiag = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) xdiag(i, i) = xs[static_cast<size_t>(i)];
  const Matrix grad = gradient_dirichlet(n, h);
  Matrix lap = -laplace_1d(n, h);  // tridiag(1,-2,1)/h^2
  const double invd = 1.0 / static_cast<double>(grid.d);
  return (invd + sign * dt / 2.0) * Matrix::Identity(n, n) + sign * (dt / 2.0) * (xdiag * grad) +
         sign * (dt / 4.0) * lap;
}

KroneckerSumOperator fp_build(const GridSpec& grid, double dt, double sign) {
  grid.validate();
  require(grid.boundary == Boundary::dirichlet, ErrorCode::argument,
          "fp_operator: Dirichlet grid expected");
  std::vector<std::pair<Matrix, Matrix>> sm;
  const Matrix s = fp_factor(grid, dt, sign);
  for (Index k = 0; k < grid.d; ++k) sm.emplace_back(s, Matrix::Identity(grid.n, grid.n));
  return KroneckerSumOperator::from_dense_factors(sm);
}

}  // namespace

KroneckerSumOperator fp_operator(const GridSpec& grid, double dt) { return fp_build(grid, dt, -1.0); }

KroneckerSumOperator fp_right_operator(const GridSpec& grid, double dt) {
  return fp_build(grid, dt, +1.0);
}

Matrix fp_tridiagonal_A(const GridSpec& grid) {
  grid.validate();
  const Index n = grid.n;
  const double h = grid.h();
  const double x0 = grid.a;
  // sign products of the off-diagonal pairs must be positive
  for (Index i = 2; i <= n; ++i) {
    const double upper = x0 + static_cast<double>(i - 1) * h + 1.0 / (2.0 * h);
    const double lower = -x0 - static_cast<double>(i) * h + 1.0 / (2.0 * h);
    require(lower * upper > 0, ErrorCode::regime,
            "fp_tridiagonal_A: sign condition fails at row " + std::to_string(i) +
                " (refine the mesh)");
  }
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 1; i < n; ++i) {
    a(i - 1, i) = x0 + static_cast<double>(i) * h + 1.0 / (2.0 * h);
    a(i, i - 1) = -x0 - static_cast<double>(i + 1) * h + 1.0 / (2.0 * h);
  }
  return a;
}

FPWorkspace fp_setup(const GridSpec& grid, double dt, const InversionConfig& inv_cfg) {
  FPWorkspace ws;
  ws.grid = grid;
  ws.dt = dt;
  ws.left = fp_operator(grid, dt);
  ws.right = fp_right_operator(grid, dt);
  ws.fact = joint_diagonalize(ws.left);
  auto [xinv, rep] = hadamard_inverse(lambda_tensor(ws.fact), inv_cfg);
  require(rep.converged, ErrorCode::numeric, "fp_setup: Hadamard inversion did not converge");
  ws.xinv = std::move(xinv);
  ws.inversion = std::move(rep);
  return ws;
}

FPState fp_step(const FPState& state, const FPWorkspace& ws, double round_eps) {
  TTTensor rhs = apply_operator(ws.right, state.rho, round_eps);
  FPState next;
  next.rho = round(solve(ws.fact, ws.xinv, rhs, round_eps), round_eps);
  next.t = state.t + ws.dt;
  next.sigma_ref = 1.0 + std::exp(-2.0 * next.t);
  return next;
}

TTTensor fp_exact(const GridSpec& grid, double t) {
  require(t >= 0, ErrorCode::argument, "fp_exact: negative time");
  const double sigma = 1.0 + std::exp(-2.0 * t);
  const auto xs = grid.points();
  std::vector<std::vector<Complex>> vecs;
  for (Index k = 0; k < grid.d; ++k)
    vecs.push_back(sample(xs, [&](double x) { return std::exp(-x * x / sigma); }));
  const double norm = std::pow(kPi * sigma, -static_cast<double>(grid.d) / 2.0);
  return scale(tt_rank_one(vecs), Complex(norm, 0.0));
}

// ---------------------------------------------------------------------------
// shared
// ---------------------------------------------------------------------------

double relative_error(const TTTensor& u, const TTTensor& ref) {
  require(u.mode_sizes() == ref.mode_sizes(), ErrorCode::argument,
          "relative_error: shape mismatch");
  const double nref = frobenius_norm(ref);
  require(nref > 0, ErrorCode::argument, "relative_error: reference has zero norm");
  return frobenius_norm(subtract(u, ref)) / nref;
}

DenseTensor dense_reference_solve(const KroneckerSumOperator& op, const DenseTensor& f,
                                  Index dense_cap) {
  const Index n = product(op.mode_sizes());
  require(f.size() == n, ErrorCode::argument, "dense_reference_solve: shape mismatch");
  require(n <= dense_cap, ErrorCode::size_cap,
          "dense_reference_solve: problem size " + std::to_string(n) + " exceeds the dense cap");
  require(n * n <= kDenseMatrixEntryCap, ErrorCode::size_cap,
          "dense_reference_solve: dense matrix would not fit in memory");
  const Matrix l = op.dense(kDenseMatrixEntryCap);
  Eigen::Map<const Vector> rhs(f.data(), n);
  Vector u = Eigen::PartialPivLU<Matrix>(l).solve(rhs);
  std::vector<Complex> entries(u.data(), u.data() + n);
  return DenseTensor(op.mode_sizes(), std::move(entries));
}

Index averaged_rank(const TTTensor& t) {
  if (t.order() <= 1) return 1;
  const auto r = t.ranks();
  double acc = 0.0;
  for (Index k = 1; k < t.order(); ++k) acc += static_cast<double>(r[static_cast<size_t>(k)]);
  return static_cast<Index>(std::llround(acc / static_cast<double>(t.order() - 1)));
}

Complex sum_entries(const TTTensor& t) {
  Eigen::RowVectorXcd v = Eigen::RowVectorXcd::Ones(1);
  for (const auto& c : t.cores()) {
    Matrix slice_sum = Matrix::Zero(c.r0, c.r1);
    for (Index i = 0; i < c.n; ++i)
      for (Index p = 0; p < c.r0; ++p)
        for (Index q = 0; q < c.r1; ++q) slice_sum(p, q) += c.at(p, i, q);
    v = v * slice_sum;
  }
  return v(0);
}

TheoremParams poisson_theorem_params(const GridSpec& grid, Index k) {
  const double h = grid.h();
  const double n1 = static_cast<double>(grid.n + 1);
  const double mu_max = (2.0 - 2.0 * std::cos(static_cast<double>(grid.n) * kPi / n1)) / (h * h);
  const double mu_min = (2.0 - 2.0 * std::cos(kPi / n1)) / (h * h);
  TheoremParams p;
  p.k = k;
  p.d = grid.d;
  p.kappa = mu_max / mu_min;
  return p;
}

TheoremParams bgk_theorem_params(const GridSpec& grid_x, const GridSpec& grid_v, double dt,
                                 Index k) {
  const auto vs = grid_v.points();
  TheoremParams p;
  p.k = k;
  p.d = grid_x.d;
  p.dt = dt;
  p.h = grid_x.h();
  double lo = 0, hi = 0;
  for (Index a = 0; a < grid_v.n; ++a)
    for (Index m = 0; m < grid_x.n; ++m) {
      const double w = 2.0 * vs[static_cast<size_t>(a)] *
                       std::sin(2.0 * kPi * static_cast<double>(m) / static_cast<double>(grid_x.n));
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
  p.im_min = lo;
  p.im_max = hi;
  p.re_min = p.re_max = 0.0;
  return p;
}

TheoremParams fp_theorem_params(const GridSpec& grid, double dt, Index k) {
  // zero-diagonal tridiagonal with (1/2) X grad + (1/4) lap =
  // (1/(4h)) (-(2/h) I + B); same oscillation-matrix argument as the
  // half-spacing variant exposed by fp_tridiagonal_A
  grid.validate();
  const Index n = grid.n;
  const double h = grid.h();
  const double x0 = grid.a;
  Matrix b = Matrix::Zero(n, n);
  for (Index i = 1; i < n; ++i) {
    b(i - 1, i) = x0 + static_cast<double>(i) * h + 1.0 / h;
    b(i, i - 1) = -x0 - static_cast<double>(i + 1) * h + 1.0 / h;
  }
  Eigen::ComplexEigenSolver<Matrix> es(b);
  require(es.info() == Eigen::Success, ErrorCode::numeric, "fp_theorem_params: eig failed");
  TheoremParams p;
  p.k = k;
  p.d = grid.d;
  p.dt = dt;
  p.h = h;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    lo = std::min(lo, es.eigenvalues()(i).real());
    hi = std::max(hi, es.eigenvalues()(i).real());
  }
  p.mu_min = lo;
  p.mu_max = hi;
  return p;
}

}  // namespace ttinv
