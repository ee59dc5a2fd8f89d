#include "wavesys/transform/problems.hpp"

#include <cmath>
#include <limits>

#include "wavesys/errors.hpp"
#include "wavesys/linalg/eig.hpp"

namespace wavesys::transform {

namespace {

double finest_width(std::initializer_list<const genfunc::CoefficientNet*> nets, double eps) {
  double w = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto* net : nets) {
    if (!net->valid()) continue;
    const double nw = net->feature_width(eps);
    if (nw > 0) {
      w = std::min(w, nw);
      any = true;
    }
  }
  return any ? w : 0.0;
}

void require_shape(const genfunc::CoefficientNet& net, int rows, int cols, const char* name) {
  if (!net.valid()) throw ConfigError(std::string("problem: missing coefficient ") + name);
  if (net.rows() != rows || net.cols() != cols)
    throw ShapeError(std::string("problem: coefficient ") + name + " has shape " +
                     std::to_string(net.rows()) + "x" + std::to_string(net.cols()) +
                     ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
}

}  // namespace

double WaveProblem::derivative_step(double eps) const {
  return fd.step(finest_width({&R, &g, &a, &b, &c, &f}, eps));
}

void WaveProblem::check_shapes() const {
  require_shape(R, n, n, "R");
  require_shape(g, n, 1, "g");
  require_shape(a, 1, 1, "a");
  require_shape(b, n, 1, "b");
  require_shape(c, 1, 1, "c");
  require_shape(f, 1, 1, "f");
  require_shape(u0, 1, 1, "u0");
  require_shape(u1, 1, 1, "u1");
}

double HyperbolicSystem::derivative_step(double eps) const {
  std::initializer_list<const genfunc::CoefficientNet*> nets = {&B, &F};
  double w = finest_width(nets, eps);
  for (const auto& a_i : A) {
    const double nw = a_i.feature_width(eps);
    if (nw > 0) w = w > 0 ? std::min(w, nw) : nw;
  }
  return fd.step(w);
}

void HyperbolicSystem::check_shapes() const {
  const int m = n + 2;
  if (static_cast<int>(A.size()) != n)
    throw ShapeError("system: expected " + std::to_string(n) + " A matrices");
  for (int i = 0; i < n; ++i) require_shape(A[i], m, m, "A_i");
  require_shape(B, m, m, "B");
  require_shape(F, m, 1, "F");
  require_shape(w0, m, 1, "w0");
}

void validate_wave_problem(const WaveProblem& p, std::span<const double> eps_list,
                           int cells_per_axis, int time_slices) {
  p.check_shapes();
  std::array<int, 3> ix{};
  std::array<int, 3> cells{1, 1, 1};
  for (int a = 0; a < p.n; ++a) cells[a] = cells_per_axis;
  for (double eps : eps_list) {
    for (int it = 0; it < time_slices; ++it) {
      const double t = time_slices > 1 ? p.horizon * it / (time_slices - 1) : 0.0;
      ix = {0, 0, 0};
      while (true) {
        SpaceVec x{};
        for (int a = 0; a < p.n; ++a)
          x[a] = p.domain.lo[a] + p.domain.extent(a) * ix[a] / cells[a];

        const Mat r = p.R.eval(eps, t, x);
        try {
          linalg::spd_sqrt(linalg::SymMatrix::from_mat(r, 1e-8));
        } catch (const std::exception& e) {
          throw ConfigError("validate_wave_problem: R not SPD at eps=" + std::to_string(eps) +
                            ", t=" + std::to_string(t) + ", x1=" + std::to_string(x[0]) + ": " +
                            e.what());
        }

        const Mat gv = p.g.eval(eps, t, x);
        linalg::SymMatrix G(p.n + 1);
        G.set(0, 0, -1.0);
        for (int i = 0; i < p.n; ++i) G.set(0, i + 1, gv(i, 0));
        for (int i = 0; i < p.n; ++i)
          for (int j = i; j < p.n; ++j) G.set(i + 1, j + 1, 0.5 * (r(i, j) + r(j, i)));
        const auto sig = linalg::lorentzian_check(G);
        if (sig.verdict != linalg::SignatureVerdict::Lorentzian)
          throw ConfigError("validate_wave_problem: metric block not Lorentzian (" +
                            sig.verdict_str() + ") at eps=" + std::to_string(eps) +
                            ", t=" + std::to_string(t) + ", x1=" + std::to_string(x[0]));

        int a = 0;
        for (; a < p.n; ++a) {
          if (++ix[a] <= cells[a]) break;
          ix[a] = 0;
        }
        if (a == p.n) break;
      }
    }
  }
}

}  // namespace wavesys::transform
