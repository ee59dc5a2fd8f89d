#include "wavesys/linalg/eig.hpp"

#include <algorithm>
#include <cmath>

#include "wavesys/errors.hpp"

namespace wavesys::linalg {

SymMatrix EigenDecomposition::reconstruct() const {
  std::array<double, kMaxOrder> mapped{};
  for (int i = 0; i < n; ++i) mapped[i] = lambda[i];
  return apply_spectral(std::span<const double>(mapped.data(), n));
}

SymMatrix EigenDecomposition::apply_spectral(std::span<const double> mapped) const {
  // (U^T D U)_{ij} = sum_k mapped[k] * u(k,i) * u(k,j)
  SymMatrix s(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = 0;
      for (int k = 0; k < n; ++k) v += mapped[k] * u(k, i) * u(k, j);
      s.set(i, j, v);
    }
  return s;
}

EigenDecomposition sym_eig(const SymMatrix& sym) {
  if (!sym.all_finite()) throw ConfigError("sym_eig: non-finite entries");
  const int n = sym.order();
  Mat a = sym.to_mat();
  Mat u = Mat::identity(n);

  const double scale = std::max(sym.frob(), 1e-300);
  const double target = 1e-14 * scale;

  auto off_mass = [&]() {
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 64 && off_mass() > target; ++sweep) {
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // A <- J^T A J with the Givens rotation in the (p,q) plane.
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        // Accumulate rows of U so that A = U^T D U.
        for (int k = 0; k < n; ++k) {
          const double upk = u(p, k), uqk = u(q, k);
          u(p, k) = c * upk - s * uqk;
          u(q, k) = s * upk + c * uqk;
        }
      }
  }

  EigenDecomposition dec;
  dec.n = n;
  std::array<int, kMaxOrder> perm{};
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::sort(perm.begin(), perm.begin() + n, [&](int i, int j) { return a(i, i) < a(j, j); });

  dec.u = Mat(n, n);
  for (int i = 0; i < n; ++i) {
    dec.lambda[i] = a(perm[i], perm[i]);
    double sign = 1.0;
    for (int j = 0; j < n; ++j)
      if (std::abs(u(perm[i], j)) > 1e-12) {
        sign = u(perm[i], j) > 0 ? 1.0 : -1.0;
        break;
      }
    for (int j = 0; j < n; ++j) dec.u(i, j) = sign * u(perm[i], j);
  }
  return dec;
}

SymMatrix spd_sqrt(const SymMatrix& r, double spd_floor_rel) {
  const EigenDecomposition dec = sym_eig(r);
  const double floor = spd_floor_rel * std::max(r.frob(), 1e-300);
  std::array<double, kMaxOrder> mapped{};
  for (int i = 0; i < dec.n; ++i) {
    if (dec.lambda[i] <= floor)
      throw NotSpdError("spd_sqrt: eigenvalue " + std::to_string(dec.lambda[i]) +
                        " at or below positivity floor " + std::to_string(floor));
    mapped[i] = std::sqrt(dec.lambda[i]);
  }
  return dec.apply_spectral(std::span<const double>(mapped.data(), dec.n));
}

SymMatrix spd_inverse(const SymMatrix& r, double spd_floor_rel) {
  const EigenDecomposition dec = sym_eig(r);
  const double floor = spd_floor_rel * std::max(r.frob(), 1e-300);
  std::array<double, kMaxOrder> mapped{};
  for (int i = 0; i < dec.n; ++i) {
    if (dec.lambda[i] <= floor)
      throw NotSpdError("spd_inverse: eigenvalue " + std::to_string(dec.lambda[i]) +
                        " at or below positivity floor " + std::to_string(floor));
    mapped[i] = 1.0 / dec.lambda[i];
  }
  return dec.apply_spectral(std::span<const double>(mapped.data(), dec.n));
}

SymMatrix sym_inverse(const SymMatrix& a, double floor_rel) {
  const EigenDecomposition dec = sym_eig(a);
  const double floor = floor_rel * std::max(a.frob(), 1e-300);
  std::array<double, kMaxOrder> mapped{};
  for (int i = 0; i < dec.n; ++i) {
    if (std::abs(dec.lambda[i]) <= floor)
      throw StructureError("sym_inverse: eigenvalue " + std::to_string(dec.lambda[i]) +
                           " within singularity floor " + std::to_string(floor));
    mapped[i] = 1.0 / dec.lambda[i];
  }
  return dec.apply_spectral(std::span<const double>(mapped.data(), dec.n));
}

std::string SignatureReport::verdict_str() const {
  switch (verdict) {
    case SignatureVerdict::Riemannian: return "Riemannian";
    case SignatureVerdict::Lorentzian: return "Lorentzian";
    case SignatureVerdict::Degenerate: return "degenerate";
    default: return "other";
  }
}

SignatureReport lorentzian_check(const SymMatrix& g, double zero_tol_rel) {
  const EigenDecomposition dec = sym_eig(g);
  const double tol = zero_tol_rel * std::max(g.frob(), 1e-300);
  SignatureReport rep;
  for (int i = 0; i < dec.n; ++i) {
    if (std::abs(dec.lambda[i]) <= tol)
      ++rep.zero;
    else if (dec.lambda[i] < 0)
      ++rep.negative;
    else
      ++rep.positive;
  }
  rep.index = rep.negative;
  if (rep.zero > 0)
    rep.verdict = SignatureVerdict::Degenerate;
  else if (rep.negative == 0)
    rep.verdict = SignatureVerdict::Riemannian;
  else if (rep.negative == 1)
    rep.verdict = SignatureVerdict::Lorentzian;
  else
    rep.verdict = SignatureVerdict::Other;
  return rep;
}

}  // namespace wavesys::linalg
