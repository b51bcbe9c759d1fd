#include "qafold/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "qafold/errors.hpp"
#include "qafold/units.hpp"

namespace qafold::dynamics {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cplx = std::complex<double>;

constexpr double kTwoPi = 2 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Schedule

AnnealSchedule AnnealSchedule::linear(double A0, double B0, double t_run_us) {
  AnnealSchedule s;
  s.tau = {0.0, 1.0};
  s.A = {A0, 0.0};
  s.B = {0.0, B0};
  s.t_run_us = t_run_us;
  s.validate();
  return s;
}

AnnealSchedule AnnealSchedule::parse_csv(const std::string& text, double t_run_us) {
  AnnealSchedule s;
  s.t_run_us = t_run_us;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double t, a, b;
    if (!(row >> t >> a >> b)) {
      if (s.tau.empty()) continue;  // header
      throw Error(ErrorKind::validation, "malformed schedule row: " + line);
    }
    s.tau.push_back(t);
    s.A.push_back(a);
    s.B.push_back(b);
  }
  s.validate();
  return s;
}

namespace {

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double t) {
  if (t <= x.front()) return y.front();
  if (t >= x.back()) return y.back();
  auto it = std::upper_bound(x.begin(), x.end(), t);
  std::size_t k = it - x.begin();
  double w = (t - x[k - 1]) / (x[k] - x[k - 1]);
  return y[k - 1] + w * (y[k] - y[k - 1]);
}

}  // namespace

double AnnealSchedule::a(double t) const { return interpolate(tau, A, t); }
double AnnealSchedule::b(double t) const { return interpolate(tau, B, t); }

void AnnealSchedule::validate() const {
  if (tau.size() < 2 || A.size() != tau.size() || B.size() != tau.size())
    throw Error(ErrorKind::validation, "schedule needs at least two rows of (tau, A, B)");
  if (tau.front() != 0.0 || tau.back() != 1.0) throw Error(ErrorKind::validation, "schedule must span tau = 0 .. 1");
  for (std::size_t k = 0; k < tau.size(); ++k) {
    if (A[k] < 0 || B[k] < 0) throw Error(ErrorKind::validation, "schedule energies must be non-negative");
    if (k == 0) continue;
    if (tau[k] <= tau[k - 1]) throw Error(ErrorKind::validation, "schedule tau must increase");
    if (A[k] > A[k - 1] || B[k] < B[k - 1])
      throw Error(ErrorKind::validation, "schedule needs A non-increasing and B non-decreasing");
  }
  if (!(A.front() > B.front()) || !(A.back() < B.back()))
    throw Error(ErrorKind::validation, "schedule needs A(0) > B(0) and A(1) < B(1)");
  if (!(t_run_us >= 0)) throw Error(ErrorKind::validation, "t_run must be >= 0");
}

// ---------------------------------------------------------------------------
// Hamiltonian

AnnealingOperator::AnnealingOperator(const IsingModel& m) : n(m.n) {
  if (m.n > kMaxDenseSpins)
    throw Error(ErrorKind::capacity, "dense Hamiltonian limited to " + std::to_string(kMaxDenseSpins) + " spins");
  const std::size_t N = std::size_t{1} << m.n;
  ising::DenseIsing dense(m);
  problem.resize(N);
  driver = MatrixXd::Zero(N, N);
  for (std::size_t s = 0; s < N; ++s) {
    problem[s] = dense.energy(static_cast<std::uint64_t>(s));
    for (int i = 0; i < m.n; ++i) driver(s, s ^ (std::size_t{1} << i)) = -1.0;
  }
}

MatrixXd AnnealingOperator::at(double a, double b) const {
  MatrixXd H = a * driver;
  H.diagonal() += b * problem;
  return H;
}

MatrixXd build_hamiltonian(const IsingModel& m, double a, double b) { return AnnealingOperator(m).at(a, b); }

namespace {

VectorXd eigenvalues(const MatrixXd& H) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double first_gap(const AnnealingOperator& op, const AnnealSchedule& s, double t) {
  VectorXd e = eigenvalues(op.at(s.a(t), s.b(t)));
  return e.size() > 1 ? e[1] - e[0] : 0.0;
}

}  // namespace

SpectrumResult instantaneous_spectrum(const IsingModel& m, const AnnealSchedule& s, int levels,
                                      const std::vector<double>& tau_grid) {
  s.validate();
  AnnealingOperator op(m);
  SpectrumResult r;
  levels = std::clamp<int>(levels, 1, static_cast<int>(op.dim()));
  std::size_t best = 0;
  for (double t : tau_grid) {
    VectorXd e = eigenvalues(op.at(s.a(t), s.b(t)));
    std::vector<double> g(levels);
    for (int k = 0; k < levels; ++k) g[k] = e[k] - e[0];
    r.tau.push_back(t);
    r.gaps.push_back(std::move(g));
    double gap = e.size() > 1 ? e[1] - e[0] : 0.0;
    if (r.tau.size() == 1 || gap < r.min_gap) {
      r.min_gap = gap;
      best = r.tau.size() - 1;
    }
  }
  if (r.tau.empty()) return r;
  r.tau_star = r.tau[best];
  // Golden-section refinement between the neighbouring grid points.
  if (r.tau.size() >= 3) {
    double lo = r.tau[best == 0 ? 0 : best - 1];
    double hi = r.tau[std::min(best + 1, r.tau.size() - 1)];
    const double phi = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = first_gap(op, s, x1), f2 = first_gap(op, s, x2);
    for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = first_gap(op, s, x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = first_gap(op, s, x2);
      }
    }
    double t = (lo + hi) / 2;
    double g = first_gap(op, s, t);
    if (g < r.min_gap) {
      r.min_gap = g;
      r.tau_star = t;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Closed evolution

namespace {

// exp(-i 2 pi h M) psi for real symmetric M (GHz) and h in ns.
VectorXcd apply_exp(const MatrixXd& M, double h, const VectorXcd& psi) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(M);
  const MatrixXd& W = es.eigenvectors();
  VectorXcd y = W.transpose() * psi;
  for (Eigen::Index k = 0; k < y.size(); ++k) y[k] *= std::polar(1.0, -kTwoPi * h * es.eigenvalues()[k]);
  return W * y;
}

// Fourth-order commutator-free Magnus step.
VectorXcd cf4_step(const AnnealingOperator& op, const AnnealSchedule& s, double t, double h, const VectorXcd& psi) {
  const double T = s.t_run_ns();
  const double c1 = 0.5 - std::sqrt(3.0) / 6, c2 = 0.5 + std::sqrt(3.0) / 6;
  const double a1 = (3 - 2 * std::sqrt(3.0)) / 12, a2 = (3 + 2 * std::sqrt(3.0)) / 12;
  double t1 = (t + c1 * h) / T, t2 = (t + c2 * h) / T;
  MatrixXd H1 = op.at(s.a(t1), s.b(t1));
  MatrixXd H2 = op.at(s.a(t2), s.b(t2));
  VectorXcd mid = apply_exp(a2 * H1 + a1 * H2, h, psi);
  return apply_exp(a1 * H1 + a2 * H2, h, mid);
}

struct Recorder {
  int points;
  int levels;
  EvolutionResult* out;

  double tau_at(int r) const { return points <= 1 ? 1.0 : static_cast<double>(r) / (points - 1); }

  void record(double tau, const VectorXd& energies, const std::vector<double>& pops) {
    out->tau.push_back(tau);
    int k = std::min<int>(levels, static_cast<int>(energies.size()));
    std::vector<double> g(k), p(k);
    for (int i = 0; i < k; ++i) {
      g[i] = energies[i] - energies[0];
      p[i] = i < static_cast<int>(pops.size()) ? pops[i] : 0.0;
    }
    out->gaps.push_back(std::move(g));
    out->populations.push_back(std::move(p));
  }
};

void record_state(Recorder& rec, const AnnealingOperator& op, const AnnealSchedule& s, double tau,
                  const VectorXcd& psi) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(op.at(s.a(tau), s.b(tau)));
  VectorXcd c = es.eigenvectors().transpose() * psi;
  std::vector<double> pops(c.size());
  for (Eigen::Index k = 0; k < c.size(); ++k) pops[k] = std::norm(c[k]);
  rec.record(tau, es.eigenvalues(), pops);
}

// ---------------------------------------------------------------------------
// Instantaneous eigenbasis with parallel-transport gauge

struct Basis {
  VectorXd energies;  // lowest K
  MatrixXd vectors;   // N x K
};

Basis eigenbasis(const AnnealingOperator& op, const AnnealSchedule& s, double tau, int K) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(op.at(s.a(tau), s.b(tau)));
  return {es.eigenvalues().head(K), es.eigenvectors().leftCols(K)};
}

// Rotates each (near-)degenerate cluster of `next` to its closest match in `prev`
// (orthogonal Procrustes), which also fixes the sign of isolated vectors.
void align(Basis& next, const Basis& prev) {
  const Eigen::Index K = next.energies.size();
  Eigen::Index start = 0;
  while (start < K) {
    Eigen::Index end = start + 1;
    while (end < K && next.energies[end] - next.energies[end - 1] < 1e-9) ++end;
    auto cols = next.vectors.middleCols(start, end - start);
    MatrixXd B = cols.transpose() * prev.vectors.middleCols(start, end - start);
    Eigen::JacobiSVD<MatrixXd> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
    MatrixXd rot = svd.matrixU() * svd.matrixV().transpose();
    next.vectors.middleCols(start, end - start) = MatrixXd(cols * rot);
    start = end;
  }
}

// Where prev itself is degenerate its basis is arbitrary inside the cluster, so
// rotate it onto next. Returns the coefficient transform W^T when anything moved.
std::optional<MatrixXd> regauge(Basis& prev, const Basis& next) {
  const Eigen::Index K = prev.energies.size();
  std::optional<MatrixXd> Wt;
  Eigen::Index start = 0;
  while (start < K) {
    Eigen::Index end = start + 1;
    while (end < K && prev.energies[end] - prev.energies[end - 1] < 1e-9) ++end;
    if (end - start > 1) {
      auto cols = prev.vectors.middleCols(start, end - start);
      MatrixXd B = cols.transpose() * next.vectors.middleCols(start, end - start);
      Eigen::JacobiSVD<MatrixXd> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
      MatrixXd W = svd.matrixU() * svd.matrixV().transpose();
      prev.vectors.middleCols(start, end - start) = MatrixXd(cols * W);
      if (!Wt) Wt = MatrixXd::Identity(K, K);
      Wt->block(start, start, end - start, end - start) = W.transpose();
    }
    start = end;
  }
  return Wt;
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6 : std::sin(x) / x; }

// Coherent propagator in the moving frame from prev to next over h ns.
MatrixXcd frame_propagator(const Basis& prev, const Basis& next, double h) {
  const Eigen::Index K = prev.energies.size();
  MatrixXd O = next.vectors.transpose() * prev.vectors;
  MatrixXd hX = (O.transpose() - O) / 2;
  VectorXd w = kTwoPi * (prev.energies + next.energies) / 2;  // rad / ns
  MatrixXd Y(K, K);
  for (Eigen::Index m = 0; m < K; ++m)
    for (Eigen::Index k = 0; k < K; ++k) Y(m, k) = hX(m, k) * sinc((w[m] - w[k]) * h / 2);
  MatrixXd rot = (-Y).exp();
  VectorXcd half(K);
  for (Eigen::Index m = 0; m < K; ++m) half[m] = std::polar(1.0, -w[m] * h / 2);
  return half.asDiagonal() * rot.cast<cplx>() * half.asDiagonal();
}

}  // namespace

EvolutionResult evolve_closed(const IsingModel& m, const AnnealSchedule& s, const ClosedOptions& options) {
  s.validate();
  AnnealingOperator op(m);
  const std::size_t N = op.dim();
  EvolutionResult out;
  Recorder rec{std::max(1, options.record_points), options.record_levels, &out};
  VectorXcd psi = VectorXcd::Constant(N, 1.0 / std::sqrt(static_cast<double>(N)));
  const double T = s.t_run_ns();

  if (options.method == ClosedMethod::adiabatic_frame && T > 0) {
    const int K = options.frame_levels > 0 ? std::min<int>(options.frame_levels, N) : static_cast<int>(N);
    const int steps = std::max(1, options.frame_steps);
    Basis prev = eigenbasis(op, s, 0.0, K);
    VectorXcd c = prev.vectors.transpose() * psi;
    int next_record = 0;
    auto maybe_record = [&](int step, const Basis& b) {
      double tau = static_cast<double>(step) / steps;
      while (next_record < rec.points && rec.tau_at(next_record) <= tau + 1e-12) {
        std::vector<double> pops(K);
        for (int k = 0; k < K; ++k) pops[k] = std::norm(c[k]);
        rec.record(tau, b.energies, pops);
        ++next_record;
      }
    };
    maybe_record(0, prev);
    for (int k = 1; k <= steps; ++k) {
      Basis next = eigenbasis(op, s, static_cast<double>(k) / steps, K);
      align(next, prev);
      if (auto Wt = regauge(prev, next)) c = Wt->cast<cplx>() * c;
      c = frame_propagator(prev, next, T / steps) * c;
      prev = std::move(next);
      maybe_record(k, prev);
    }
    psi = prev.vectors.cast<cplx>() * c;
    out.steps = steps;
    out.norm_drift = std::abs(1.0 - c.squaredNorm());
  } else {
    double t = 0;
    double h = T > 0 ? T / 1000 : 0;
    int next_record = 0;
    auto flush = [&](double tau) {
      while (next_record < rec.points && rec.tau_at(next_record) <= tau + 1e-12) {
        record_state(rec, op, s, rec.tau_at(next_record), psi);
        ++next_record;
      }
    };
    flush(0.0);
    std::size_t guard = 0;
    while (T > 0 && t < T) {
      double target = next_record < rec.points ? rec.tau_at(next_record) * T : T;
      double step = std::min(h, std::max(target - t, 0.0));
      if (step <= 0) step = std::min(h, T - t);
      VectorXcd big = cf4_step(op, s, t, step, psi);
      VectorXcd small = cf4_step(op, s, t + step / 2, step / 2, cf4_step(op, s, t, step / 2, psi));
      double err = (big - small).norm();
      if (err <= options.tolerance || step < 1e-9 * T) {
        psi = small;
        t += step;
        ++out.steps;
        out.norm_drift = std::max(out.norm_drift, std::abs(1.0 - psi.squaredNorm()));
        flush(t / T);
      }
      double factor = err > 0 ? 0.9 * std::pow(options.tolerance / err, 0.2) : 4.0;
      h = step * std::clamp(factor, 0.2, 4.0);
      if (++guard > 50'000'000) throw Error(ErrorKind::stage, "closed evolution: step budget exhausted");
    }
    flush(1.0);
  }
  out.final_probabilities.resize(N);
  for (std::size_t k = 0; k < N; ++k) out.final_probabilities[k] = std::norm(psi[k]);
  if (out.norm_drift > 1e-8)
    throw Error(ErrorKind::stage, "closed evolution: norm drift " + std::to_string(out.norm_drift) + " exceeds 1e-8");
  return out;
}

// ---------------------------------------------------------------------------
// Open evolution

namespace {

struct Dissipator {
  MatrixXd G;             // population generator
  VectorXd out_rate;      // total decay rate of each level
  bool active = false;
};

Dissipator dissipator(const AnnealingOperator& op, const Basis& b, const BathParams& bath, double tau) {
  const Eigen::Index K = b.energies.size();
  Dissipator d;
  d.G = MatrixXd::Zero(K, K);
  d.out_rate = VectorXd::Zero(K);
  if (bath.eta == 0 && bath.A_1f == 0) return d;
  d.active = true;
  const double ip = bath.persistent_current(tau);
  MatrixXd overlap = MatrixXd::Zero(K, K);
  const Eigen::Index N = b.vectors.rows();
  for (int i = 0; i < op.n; ++i) {
    MatrixXd zv = b.vectors;
    for (Eigen::Index s = 0; s < N; ++s)
      if ((s >> i) & 1) zv.row(s) *= -1.0;
    MatrixXd Mi = b.vectors.transpose() * zv;
    overlap += Mi.cwiseAbs2();
  }
  for (Eigen::Index a = 0; a < K; ++a)
    for (Eigen::Index c = 0; c < K; ++c) {
      if (a == c) continue;
      double delta = b.energies[a] - b.energies[c];
      if (std::abs(delta) < 1e-9) continue;  // degenerate pair
      double w = transition_rate(overlap(c, a), delta, bath, ip);
      d.G(c, a) += w;
      d.G(a, a) -= w;
      d.out_rate[a] += w;
    }
  return d;
}

void dissipate(MatrixXcd& rho, const Dissipator& d, double h) {
  if (!d.active) return;
  const Eigen::Index K = rho.rows();
  VectorXd p = rho.diagonal().real();
  p = (d.G * h).exp() * p;
  for (Eigen::Index m = 0; m < K; ++m)
    for (Eigen::Index k = 0; k < K; ++k)
      if (m != k) rho(m, k) *= std::exp(-0.5 * (d.out_rate[m] + d.out_rate[k]) * h);
  for (Eigen::Index m = 0; m < K; ++m) rho(m, m) = p[m];
}

}  // namespace

EvolutionResult evolve_open(const IsingModel& m, const AnnealSchedule& s, const BathParams& bath,
                            const OpenOptions& options) {
  s.validate();
  bath.validate();
  AnnealingOperator op(m);
  const std::size_t N = op.dim();
  if (options.levels < 1 || static_cast<std::size_t>(options.levels) > N)
    throw Error(ErrorKind::validation, "levels must be in 1.." + std::to_string(N));
  const int K = options.levels;
  const int steps = std::max(1, options.steps);
  const double T = s.t_run_ns();
  const double h = T / steps;
  auto tau_of = [&](int k) { return options.frozen_tau ? *options.frozen_tau : static_cast<double>(k) / steps; };

  EvolutionResult out;
  Recorder rec{std::max(1, options.record_points), options.record_levels, &out};
  Basis prev = eigenbasis(op, s, tau_of(0), K);
  VectorXcd c = prev.vectors.transpose() * VectorXcd::Constant(N, 1.0 / std::sqrt(static_cast<double>(N)));
  if (options.frozen_tau) {
    c = VectorXcd::Zero(K);
    c[0] = 1.0;
  }
  c /= c.norm();
  MatrixXcd rho = c * c.adjoint();

  int next_record = 0;
  auto maybe_record = [&](int step, const Basis& b) {
    double progress = static_cast<double>(step) / steps;
    while (next_record < rec.points && rec.tau_at(next_record) <= progress + 1e-12) {
      std::vector<double> pops(K);
      for (int k = 0; k < K; ++k) {
        double v = rho(k, k).real();
        out.min_population = std::min(out.min_population, v);
        pops[k] = std::max(v, 0.0);
      }
      rec.record(tau_of(step), b.energies, pops);
      ++next_record;
    }
  };
  maybe_record(0, prev);
  Dissipator d_prev = dissipator(op, prev, bath, tau_of(0));
  for (int k = 1; k <= steps; ++k) {
    Basis next = options.frozen_tau ? prev : eigenbasis(op, s, tau_of(k), K);
    if (!options.frozen_tau) {
      align(next, prev);
      if (auto Wt = regauge(prev, next)) {
        rho = Wt->cast<cplx>() * rho * Wt->transpose().cast<cplx>();
        d_prev = dissipator(op, prev, bath, tau_of(k - 1));
      }
    }
    Dissipator d_next = options.frozen_tau ? d_prev : dissipator(op, next, bath, tau_of(k));
    dissipate(rho, d_prev, h / 2);
    MatrixXcd R = frame_propagator(prev, next, h);
    rho = R * rho * R.adjoint();
    dissipate(rho, d_next, h / 2);
    prev = std::move(next);
    d_prev = std::move(d_next);
    maybe_record(k, prev);
  }
  out.steps = steps;
  out.norm_drift = std::abs(1.0 - rho.trace().real());
  for (Eigen::Index k = 0; k < K; ++k) out.min_population = std::min(out.min_population, rho(k, k).real());
  if (out.min_population < -1e-12)
    throw Error(ErrorKind::stage, "open evolution: negative population " + std::to_string(out.min_population));

  MatrixXcd Vr = prev.vectors.cast<cplx>() * rho;
  out.final_probabilities.resize(N);
  for (std::size_t sidx = 0; sidx < N; ++sidx)
    out.final_probabilities[sidx] = (Vr.row(sidx) * prev.vectors.row(sidx).transpose().cast<cplx>())(0).real();
  return out;
}

MatrixXd rate_matrix(const IsingModel& m, const AnnealSchedule& s, const BathParams& bath, double tau, int levels,
                     VectorXd* energies) {
  bath.validate();
  AnnealingOperator op(m);
  levels = std::clamp<int>(levels, 1, static_cast<int>(op.dim()));
  Basis b = eigenbasis(op, s, tau, levels);
  if (energies) *energies = b.energies;
  return dissipator(op, b, bath, tau).G;
}

VectorXd stationary_distribution(const MatrixXd& G) {
  Eigen::FullPivLU<MatrixXd> lu(G);
  MatrixXd ker = lu.kernel();
  VectorXd p = ker.col(0);
  p /= p.sum();
  return p;
}

VectorXd gibbs_weights(const VectorXd& energies_ghz, double T_mK) {
  double kt = units::mk_to_ghz(T_mK);
  VectorXd w = (-(energies_ghz.array() - energies_ghz.minCoeff()) / kt).exp();
  return w / w.sum();
}

}  // namespace qafold::dynamics
