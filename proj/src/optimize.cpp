#include "dyncoh/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace dyncoh {

StateParametrization::StateParametrization(Index dim, ParamMode mode)
    : dim_(dim), mode_(mode) {
  if (dim < 2) throw DimensionError("StateParametrization: dim must be >= 2");
  if (mode == ParamMode::Bloch && dim != 2) {
    throw DimensionError("StateParametrization: Bloch mode is qubit-only");
  }
}

int StateParametrization::param_count() const {
  if (mode_ == ParamMode::Bloch) return 3;
  return static_cast<int>(2 * dim_ * dim_);
}

DensityMatrix StateParametrization::state(const Eigen::VectorXd& params) const {
  if (params.size() != param_count()) {
    throw DimensionError("StateParametrization: wrong parameter count");
  }
  if (mode_ == ParamMode::Bloch) {
    double x = params(0), y = params(1), z = params(2);
    const double r = std::sqrt(x * x + y * y + z * z);
    if (r > 1.0) {
      x /= r;
      y /= r;
      z /= r;
    }
    return DensityMatrix::from_bloch(x, y, z);
  }
  ComplexMatrix g(dim_, dim_);
  for (Index i = 0; i < dim_; ++i)
    for (Index j = 0; j < dim_; ++j) {
      const Index base = 2 * (i * dim_ + j);
      g(i, j) = Complex(params(base), params(base + 1));
    }
  ComplexMatrix gram = g * g.adjoint();
  const double trace = gram.trace().real();
  if (!(trace > 1e-280)) return DensityMatrix::maximally_mixed(dim_);
  return DensityMatrix(gram / trace, 1e-9);
}

NelderMeadResult nelder_mead_minimize(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, double initial_step, int max_iters,
    double f_tol) {
  const int n = static_cast<int>(x0.size());
  const double alpha = 1.0, gamma = 2.0, beta = 0.5, delta = 0.5;

  std::vector<Eigen::VectorXd> simplex;
  std::vector<double> values;
  simplex.reserve(n + 1);
  values.reserve(n + 1);
  simplex.push_back(x0);
  values.push_back(f(x0));
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v = x0;
    v(i) += initial_step;
    simplex.push_back(v);
    values.push_back(f(v));
  }

  auto order = [&] {
    std::vector<int> idx(simplex.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return values[a] < values[b]; });
    std::vector<Eigen::VectorXd> s2;
    std::vector<double> v2;
    for (int i : idx) {
      s2.push_back(simplex[i]);
      v2.push_back(values[i]);
    }
    simplex.swap(s2);
    values.swap(v2);
  };

  order();
  int iter = 0;
  bool converged = false;
  for (; iter < max_iters; ++iter) {
    if (values[n] - values[0] <= f_tol * (1.0 + std::abs(values[0]))) {
      converged = true;
      break;
    }
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += simplex[i];
    centroid /= static_cast<double>(n);

    Eigen::VectorXd reflected = centroid + alpha * (centroid - simplex[n]);
    const double f_reflected = f(reflected);
    if (f_reflected < values[0]) {
      Eigen::VectorXd expanded = centroid + gamma * (reflected - centroid);
      const double f_expanded = f(expanded);
      if (f_expanded < f_reflected) {
        simplex[n] = expanded;
        values[n] = f_expanded;
      } else {
        simplex[n] = reflected;
        values[n] = f_reflected;
      }
    } else if (f_reflected < values[n - 1]) {
      simplex[n] = reflected;
      values[n] = f_reflected;
    } else {
      const bool outside = f_reflected < values[n];
      Eigen::VectorXd pivot = outside ? reflected : simplex[n];
      Eigen::VectorXd contracted = centroid + beta * (pivot - centroid);
      const double f_contracted = f(contracted);
      if (f_contracted < std::min(f_reflected, values[n])) {
        simplex[n] = contracted;
        values[n] = f_contracted;
      } else {
        for (int i = 1; i <= n; ++i) {
          simplex[i] = simplex[0] + delta * (simplex[i] - simplex[0]);
          values[i] = f(simplex[i]);
        }
      }
    }
    order();
  }
  return NelderMeadResult{simplex[0], values[0], converged, iter};
}

namespace {

// Deterministic warm starts: basis states, uniform superpositions with a few
// phase patterns, and (for qubits) the axis states of the Bloch ball.
std::vector<Eigen::VectorXd> seeded_starts(const StateParametrization& param) {
  std::vector<Eigen::VectorXd> starts;
  const Index d = param.dim();
  if (param.mode() == ParamMode::Bloch) {
    const double axes[6][3] = {{0, 0, 1},  {0, 0, -1}, {1, 0, 0},
                               {-1, 0, 0}, {0, 1, 0},  {0, -1, 0}};
    for (const auto& a : axes) {
      Eigen::VectorXd v(3);
      // Start slightly inside the ball so the initial simplex is not flattened
      // against the boundary clamp.
      v << 0.9 * a[0], 0.9 * a[1], 0.9 * a[2];
      starts.push_back(v);
    }
    starts.push_back(Eigen::VectorXd::Zero(3));
    return starts;
  }
  auto from_ket = [&](const ComplexVector& ket) {
    // Encode |k><k| as the factor G = ket * e_0^T (rank one).
    Eigen::VectorXd v = Eigen::VectorXd::Zero(param.param_count());
    for (Index i = 0; i < d; ++i) {
      v(2 * (i * d + 0)) = ket(i).real();
      v(2 * (i * d + 0) + 1) = ket(i).imag();
    }
    return v;
  };
  for (Index i = 0; i < d; ++i) starts.push_back(from_ket(basis_ket(i, d)));
  ComplexVector plus = ComplexVector::Constant(d, Complex(1.0, 0.0));
  starts.push_back(from_ket(plus / plus.norm()));
  // Identity factor = maximally mixed.
  Eigen::VectorXd mixed = Eigen::VectorXd::Zero(param.param_count());
  for (Index i = 0; i < d; ++i) mixed(2 * (i * d + i)) = 1.0;
  starts.push_back(mixed);
  return starts;
}

constexpr int kGridSeedCount = 3;

}  // namespace

BlochGridOptimum bloch_grid_maximize(const StateObjective& objective,
                                     int points_per_axis) {
  if (points_per_axis < 2) {
    throw ValidationError("bloch_grid_maximize: need at least 2 points/axis");
  }
  const int n = points_per_axis;
  BlochGridOptimum best{-std::numeric_limits<double>::infinity(),
                        Eigen::Vector3d::Zero()};
  for (int ix = 0; ix < n; ++ix) {
    const double x = -1.0 + 2.0 * ix / (n - 1);
    for (int iy = 0; iy < n; ++iy) {
      const double y = -1.0 + 2.0 * iy / (n - 1);
      for (int iz = 0; iz < n; ++iz) {
        const double z = -1.0 + 2.0 * iz / (n - 1);
        if (x * x + y * y + z * z > 1.0) continue;
        const double value = objective(DensityMatrix::from_bloch(x, y, z));
        if (value > best.value) {
          best.value = value;
          best.point = Eigen::Vector3d(x, y, z);
        }
      }
    }
  }
  return best;
}

StateOptimum maximize_over_states(const StateObjective& objective, Index dim,
                                  const OptimizerConfig& cfg) {
  if (cfg.starts < 1 || cfg.max_iters < 1 || cfg.f_tol <= 0.0) {
    throw ValidationError("maximize_over_states: invalid optimizer config");
  }
  const StateParametrization param(
      dim, dim == 2 ? ParamMode::Bloch : ParamMode::Factor);
  auto negated = [&](const Eigen::VectorXd& v) {
    return -objective(param.state(v));
  };

  std::vector<Eigen::VectorXd> starts = seeded_starts(param);
  if (param.mode() == ParamMode::Bloch && cfg.grid_points >= 2) {
    // Coarse exhaustive pass over the ball; its best cells seed refinement.
    const int n = cfg.grid_points;
    std::vector<std::pair<double, Eigen::Vector3d>> top;
    for (int ix = 0; ix < n; ++ix) {
      const double x = -1.0 + 2.0 * ix / (n - 1);
      for (int iy = 0; iy < n; ++iy) {
        const double y = -1.0 + 2.0 * iy / (n - 1);
        for (int iz = 0; iz < n; ++iz) {
          const double z = -1.0 + 2.0 * iz / (n - 1);
          if (x * x + y * y + z * z > 1.0) continue;
          const double value = objective(DensityMatrix::from_bloch(x, y, z));
          const auto lower_value = [](const auto& a, const auto& b) {
            return a.first > b.first;  // min-heap on value
          };
          top.emplace_back(value, Eigen::Vector3d(x, y, z));
          std::push_heap(top.begin(), top.end(), lower_value);
          if (top.size() > static_cast<std::size_t>(kGridSeedCount)) {
            std::pop_heap(top.begin(), top.end(), lower_value);
            top.pop_back();
          }
        }
      }
    }
    for (const auto& entry : top) starts.push_back(entry.second);
  }

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int s = 0; s < cfg.starts; ++s) {
    Eigen::VectorXd v(param.param_count());
    if (param.mode() == ParamMode::Bloch) {
      // Volume-uniform draw over the ball.
      Eigen::Vector3d dir(gauss(rng), gauss(rng), gauss(rng));
      if (dir.norm() < 1e-12) dir = Eigen::Vector3d(0, 0, 1);
      dir.normalize();
      const double radius = std::cbrt(uniform(rng));
      v = radius * dir;
    } else {
      for (int i = 0; i < v.size(); ++i) v(i) = gauss(rng);
    }
    starts.push_back(v);
  }

  StateOptimum best{-std::numeric_limits<double>::infinity(),
                    DensityMatrix::maximally_mixed(dim), Eigen::VectorXd(), 0,
                    static_cast<int>(starts.size())};
  const double step = param.mode() == ParamMode::Bloch ? 0.08 : 0.25;
  bool have_result = false;
  for (const Eigen::VectorXd& start : starts) {
    NelderMeadResult r =
        nelder_mead_minimize(negated, start, step, cfg.max_iters, cfg.f_tol);
    if (r.converged) ++best.converged_starts;
    if (r.converged && (-r.value > best.value || !have_result)) {
      best.value = -r.value;
      best.argmax_params = r.x;
      best.argmax = param.state(r.x);
      have_result = true;
    }
  }
  if (!have_result) {
    throw ConvergenceError(
        "maximize_over_states: no start converged within max_iters");
  }
  return best;
}

}  // namespace dyncoh
