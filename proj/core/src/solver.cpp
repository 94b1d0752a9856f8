#include "pcgraph/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "pcgraph/parallel.hpp"

namespace pcgraph {
namespace {

constexpr double kTiny = std::numeric_limits<double>::min();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Closed-form minimiser; inputs already validated and e clamped at zero.
double minimize_scalar(double a, double b, double c, double lambda) {
  const double fit = b * b / a;
  const double excess = std::max(c - fit, 0.0);
  const double energy = fit + excess;
  if (b == 0.0 || energy <= 0.0) return 0.0;
  if (b * b <= lambda * lambda * energy) return 0.0;
  const double slack = a * (a - lambda * lambda);
  if (slack <= 0.0) return 0.0;
  return b / a - std::copysign(lambda * std::sqrt(excess / slack), b);
}

// Minimiser of max(sqrt(a w^2 - 2 b w + c), floor) + lambda |w|. Where the
// root sits below the floor the objective is floor + lambda |w|, so if the
// unclamped minimiser lands there the answer is the point of that interval
// closest to zero.
double minimize_clamped(double a, double b, double c, double lambda, double floor) {
  const double w = minimize_scalar(a, b, c, lambda);
  const double excess = std::max(c - b * b / a, 0.0);
  const double floor_sq = floor * floor;
  if (excess >= floor_sq) return w;
  const double centre = b / a;
  if (a * (w - centre) * (w - centre) + excess > floor_sq) return w;
  const double half = std::sqrt((floor_sq - excess) / a);
  return std::clamp(0.0, centre - half, centre + half);
}

// Residual-norm term clamped below at the floor, plus the penalty.
double objective_from(double radicand, const Vector& w, const Vector& lambda,
                      double floor) {
  return std::max(std::sqrt(std::max(radicand, 0.0)), floor) +
         lambda.cwiseProduct(w.cwiseAbs()).sum();
}

double residual_floor_for(const SolverConfig& cfg, double target_energy) {
  return std::max(cfg.residual_floor, 1e-6 * std::sqrt(std::max(target_energy, 0.0)));
}

// q = G w and radicand = ||x_i - X_{-i} w||^2 are supplied by the caller.
Certificate certificate_from(const Matrix& gram, const Vector& rho,
                             const Vector& lambda, const Eigen::Ref<const Vector>& w,
                             const Vector& q, double radicand, double floor) {
  Certificate cert;
  cert.residual_norm = std::sqrt(std::max(radicand, 0.0));
  // Below the floor the clamped residual term is flat.
  const bool above_floor = cert.residual_norm > floor;
  cert.max_violation = -std::numeric_limits<double>::infinity();
  for (Index j = 0; j < w.size(); ++j) {
    if (gram(j, j) <= 0.0) continue;
    const double grad = above_floor ? -(rho(j) - q(j)) / cert.residual_norm : 0.0;
    double violation;
    if (w(j) != 0.0) {
      if (!above_floor) continue;
      violation = std::abs(grad + lambda(j) * std::copysign(1.0, w(j))) -
                  (1e-6 * lambda(j) + 1e-9);
    } else {
      violation = std::abs(grad) - lambda(j) * (1.0 + 1e-6);
    }
    cert.max_violation = std::max(cert.max_violation, violation);
  }
  if (!std::isfinite(cert.max_violation)) cert.max_violation = 0.0;
  cert.holds = cert.max_violation <= 0.0;
  return cert;
}

// Newton iterations on the smooth restriction of the objective to the current
// sign pattern. Steps are cut at the first sign change and backtracked while
// they raise the objective; the routine stops once a coordinate reaches zero,
// the Hessian is not positive definite, or the residual reaches the floor.
void refine_on_support(const Matrix& gram, const Vector& rho, double kappa,
                       const Vector& lambda, double floor, Vector& w, Vector& q,
                       double& radicand) {
  std::vector<Index> support;
  for (Index j = 0; j < w.size(); ++j) {
    if (w(j) != 0.0) support.push_back(j);
  }
  if (support.empty()) return;
  const auto k = static_cast<Index>(support.size());
  Matrix g_ss(k, k);
  Vector sign(k), lam(k), rho_s(k);
  for (Index a = 0; a < k; ++a) {
    sign(a) = std::copysign(1.0, w(support[a]));
    lam(a) = lambda(support[a]);
    rho_s(a) = rho(support[a]);
    for (Index b = 0; b < k; ++b) g_ss(a, b) = gram(support[a], support[b]);
  }
  double objective = objective_from(radicand, w, lambda, floor);
  for (int it = 0; it < 30; ++it) {
    const double rn = std::sqrt(std::max(radicand, 0.0));
    if (rn <= floor) return;
    Vector u(k), ws(k);
    for (Index a = 0; a < k; ++a) {
      u(a) = q(support[a]) - rho_s(a);
      ws(a) = w(support[a]);
    }
    const Vector grad = u / rn + lam.cwiseProduct(sign);
    Matrix hess = g_ss / rn - (u * u.transpose()) / (rn * rn * rn);
    const Eigen::LLT<Matrix> llt(hess);
    if (llt.info() != Eigen::Success) return;
    const Vector step = -llt.solve(grad);
    if (!step.allFinite()) return;
    // Truncate at the first coordinate that would cross zero; that coordinate
    // lands on exactly zero and the sweep decides whether it stays there.
    double t_max = 1.0;
    Index blocking = -1;
    for (Index a = 0; a < k; ++a) {
      if (step(a) * sign(a) < 0.0 && -ws(a) / step(a) <= t_max) {
        t_max = -ws(a) / step(a);
        blocking = a;
      }
    }
    bool accepted = false;
    for (double t = t_max; t > 1e-8 * t_max; t *= 0.5) {
      Vector trial = ws + t * step;
      if (t == t_max && blocking >= 0) trial(blocking) = 0.0;
      trial = (trial.cwiseProduct(sign).array() < 0.0).select(0.0, trial);
      Vector w_new = w;
      for (Index a = 0; a < k; ++a) w_new(support[a]) = trial(a);
      Vector q_new = q;
      for (Index a = 0; a < k; ++a) q_new += gram.col(support[a]) * (trial(a) - ws(a));
      const double rad_new = kappa - 2.0 * w_new.dot(rho) + w_new.dot(q_new);
      const double obj_new = objective_from(rad_new, w_new, lambda, floor);
      // Near the optimum the objective stops resolving Newton steps, so allow
      // rounding-level ties and stop on the step size instead.
      if (obj_new <= objective * (1.0 + 4.0 * kEps)) {
        w = std::move(w_new);
        q = gram * w;
        radicand = kappa - 2.0 * w.dot(rho) + w.dot(q);
        objective = objective_from(radicand, w, lambda, floor);
        accepted = !(t == t_max && blocking >= 0) &&
                   t * step.cwiseAbs().maxCoeff() > 1e-13 * ws.cwiseAbs().maxCoeff();
        break;
      }
    }
    if (!accepted) return;
  }
}

bool same_signs(const Vector& a, const Vector& b) {
  for (Index j = 0; j < a.size(); ++j) {
    const int sa = (a(j) > 0.0) - (a(j) < 0.0);
    const int sb = (b(j) > 0.0) - (b(j) < 0.0);
    if (sa != sb) return false;
  }
  return true;
}

void check_node(const SuffStats& stats, Index node) {
  if (node < 0 || node >= stats.nodes()) {
    throw Error(ErrorCode::InvalidArgument,
                "node " + std::to_string(node + 1) + " is outside 1.." +
                    std::to_string(stats.nodes()));
  }
}

void check_weights(const SuffStats& stats, const Eigen::Ref<const Vector>& w) {
  if (w.size() != stats.nodes() - 1) {
    throw Error(ErrorCode::DimensionMismatch,
                "weight vector has length " + std::to_string(w.size()) +
                    ", expected " + std::to_string(stats.nodes() - 1));
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "solver tol must be positive");
  }
  if (max_sweeps < 1) {
    throw Error(ErrorCode::InvalidArgument, "solver max_sweeps must be >= 1");
  }
  if (!(residual_floor >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "solver residual_floor must be non-negative");
  }
}

double coordinate_update(double a, double b, double c, double lambda) {
  if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(b) ||
      !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidQuadratic,
                "coordinate update needs a finite quadratic with a > 0");
  }
  if (!(lambda >= 0.0)) {
    throw Error(ErrorCode::InvalidQuadratic,
                "coordinate update needs lambda >= 0");
  }
  if (c - b * b / a < -1e-12 * std::max(std::abs(c), 1.0)) {
    throw Error(ErrorCode::InvalidQuadratic,
                "coordinate update radicand is negative at its minimum");
  }
  return minimize_scalar(a, b, c, lambda);
}

Vector penalty_weights(const SuffStats& stats, Index node) {
  check_node(stats, node);
  const auto others = other_nodes(stats.nodes(), node);
  Vector lambda(static_cast<Index>(others.size()));
  const double n = static_cast<double>(stats.samples_count());
  for (std::size_t k = 0; k < others.size(); ++k) {
    const auto j = static_cast<Index>(k);
    lambda(j) = n > 0 ? std::sqrt(std::max(stats.column_norm_sq(others[k]), 0.0) / n)
                      : 0.0;
  }
  return lambda;
}

double sqrt_lasso_objective(const SuffStats& stats, Index node,
                            const Eigen::Ref<const Vector>& w) {
  check_node(stats, node);
  check_weights(stats, w);
  const Matrix gram = stats.gram_without(node);
  const Vector rho = stats.cross(node);
  const double radicand =
      stats.target_energy(node) - 2.0 * w.dot(rho) + w.dot(gram * w);
  return std::sqrt(std::max(radicand, 0.0)) +
         penalty_weights(stats, node).cwiseProduct(w.cwiseAbs()).sum();
}

Certificate optimality_certificate(const SuffStats& stats, Index node,
                                   const Eigen::Ref<const Vector>& w,
                                   const SolverConfig& cfg) {
  check_node(stats, node);
  check_weights(stats, w);
  const double kappa = stats.target_energy(node);
  if (kappa <= 0.0) return Certificate{};
  const Matrix gram = stats.gram_without(node);
  const Vector rho = stats.cross(node);
  const Vector q = gram * w;
  const double radicand = kappa - 2.0 * w.dot(rho) + w.dot(q);
  return certificate_from(gram, rho, penalty_weights(stats, node), w, q, radicand,
                          residual_floor_for(cfg, kappa));
}

NodeSolveState spice_solve_node(const SuffStats& stats, Index node,
                                const SolverConfig& cfg,
                                const std::optional<Vector>& warm,
                                std::span<const Index> order) {
  cfg.validate();
  check_node(stats, node);
  const Index m = stats.nodes() - 1;

  NodeSolveState state;
  state.node = node;
  if (warm) {
    check_weights(stats, *warm);
    if (!warm->allFinite()) {
      throw Error(ErrorCode::NonFinite, "warm start contains non-finite weights");
    }
    state.weights = *warm;
  } else {
    state.weights = Vector::Zero(m);
  }

  std::vector<Index> sweep_order(order.begin(), order.end());
  if (sweep_order.empty()) {
    sweep_order.resize(static_cast<std::size_t>(m));
    std::iota(sweep_order.begin(), sweep_order.end(), Index{0});
  }
  for (Index j : sweep_order) {
    if (j < 0 || j >= m) {
      throw Error(ErrorCode::InvalidArgument,
                  "coordinate order entry " + std::to_string(j) + " out of range");
    }
  }

  const double kappa = stats.target_energy(node);
  if (stats.samples_count() == 0 || kappa <= 0.0) {
    state.weights.setZero();
    state.objective = 0.0;
    state.converged = true;
    return state;
  }

  const Matrix gram = stats.gram_without(node);
  const Vector rho = stats.cross(node);
  const Vector lambda = penalty_weights(stats, node);
  const double floor = residual_floor_for(cfg, kappa);
  const double floor_sq = floor * floor;

  Vector& w = state.weights;
  for (Index j = 0; j < m; ++j) {
    if (gram(j, j) <= 0.0) w(j) = 0.0;
  }

  // q tracks G w; radicand tracks ||x_i - X_{-i} w||^2.
  Vector q = gram * w;
  double radicand = kappa - 2.0 * w.dot(rho) + w.dot(q);
  double objective = objective_from(radicand, w, lambda, floor);

  Vector previous(m);
  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    previous = w;
    for (Index j : sweep_order) {
      const double a = gram(j, j);
      if (a <= 0.0) continue;
      const double old = w(j);
      const double b = rho(j) - (q(j) - a * old);
      const double c = std::max(radicand - a * old * old + 2.0 * b * old, b * b / a);
      const double updated = minimize_clamped(a, b, c, lambda(j), floor);
      const double delta = updated - old;
      if (delta != 0.0) {
        q.noalias() += gram.col(j) * delta;
        w(j) = updated;
        radicand = a * updated * updated - 2.0 * b * updated + c;
      }
    }
    q.noalias() = gram * w;
    radicand = kappa - 2.0 * w.dot(rho) + w.dot(q);
    if (sweep > 1 && same_signs(w, previous)) {
      refine_on_support(gram, rho, kappa, lambda, floor, w, q, radicand);
    }
    const double next = objective_from(radicand, w, lambda, floor);
    const double scale = std::max(objective, kTiny);
    state.sweeps = sweep;
    if (next > objective) {
      state.max_increase = std::max(state.max_increase, (next - objective) / scale);
    }
    const double decrease = objective - next;
    objective = next;
    if (decrease >= cfg.tol * scale) continue;
    // The objective has flattened out; finish once the subgradient condition
    // holds, the fit is exact (no gradient to certify), or the sweep was a
    // fixed point.
    const bool exact_fit = radicand <= floor_sq;
    if (exact_fit || w == previous ||
        certificate_from(gram, rho, lambda, w, q, radicand, floor).holds) {
      state.converged = true;
      break;
    }
  }
  state.objective = objective;
  return state;
}

WeightedGraph assemble_graph(std::span<const NodeSolveState> nodes,
                             Index node_count) {
  Matrix weights = Matrix::Zero(node_count, node_count);
  for (const auto& s : nodes) {
    const auto others = other_nodes(node_count, s.node);
    for (std::size_t k = 0; k < others.size(); ++k) {
      weights(s.node, others[k]) = s.weights(static_cast<Index>(k));
    }
  }
  return WeightedGraph(std::move(weights));
}

LearnResult spice_learn(const SuffStats& stats, const SolverConfig& cfg,
                        int threads) {
  cfg.validate();
  if (stats.nodes() < 2) {
    throw Error(ErrorCode::TooFewNodes, "learning a graph needs at least 2 nodes");
  }
  std::vector<NodeSolveState> states(static_cast<std::size_t>(stats.nodes()));
  parallel_for(stats.nodes(), threads, [&](std::ptrdiff_t i) {
    states[static_cast<std::size_t>(i)] = spice_solve_node(stats, i, cfg);
  });
  auto graph = assemble_graph(states, stats.nodes());
  return LearnResult{std::move(graph), std::move(states)};
}

WeightedGraph spice_learn_graph(const Dataset& data, const SolverConfig& cfg,
                                int threads) {
  if (data.samples_count() < 1) {
    throw Error(ErrorCode::InvalidArgument, "learning needs at least one snapshot");
  }
  return spice_learn(SuffStats::from_dataset(data), cfg, threads).graph;
}

Vector ridge_estimate(const SuffStats& stats, Index node,
                      const Eigen::Ref<const Vector>& pi, double sigma2) {
  check_node(stats, node);
  check_weights(stats, pi);
  if (!(pi.array() > 0.0).all()) {
    throw Error(ErrorCode::InvalidArgument, "prior variances must be positive");
  }
  if (!(sigma2 >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "noise variance must be non-negative");
  }
  Matrix system = stats.gram_without(node);
  system.diagonal() += sigma2 * pi.cwiseInverse();
  const Eigen::LLT<Matrix> llt(system);
  if (llt.info() != Eigen::Success ||
      llt.rcond() < 1e3 * std::numeric_limits<double>::epsilon()) {
    throw Error(ErrorCode::SingularSystem,
                "ridge system for node " + std::to_string(node + 1) +
                    " is singular");
  }
  return llt.solve(stats.cross(node));
}

}  // namespace pcgraph
