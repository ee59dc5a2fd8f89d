#include "wavesys/genfunc/norms.hpp"

#include <cmath>
#include <functional>

#include "wavesys/errors.hpp"

namespace wavesys::genfunc {

namespace {

// Axis layout of a table: axis 0 is time when present, spatial axes follow.
struct TableAxes {
  const SampleTable& table;
  int naxes;
  std::array<int, 4> points{};
  std::array<std::int64_t, 4> stride{};
  std::array<double, 4> step{};
  bool has_time;

  explicit TableAxes(const SampleTable& t) : table(t) {
    const SampleGrid& g = t.grid;
    has_time = g.has_time_axis();
    naxes = g.space.n + (has_time ? 1 : 0);
    int a = 0;
    if (has_time) {
      points[a] = g.tpoints();
      step[a] = g.tau();
      ++a;
    }
    for (int s = 0; s < g.space.n; ++s, ++a) {
      points[a] = g.points(s);
      step[a] = g.h(s);
    }
    std::int64_t str = 1;
    for (int k = naxes - 1; k >= 0; --k) {
      stride[k] = str;
      str *= points[k];
    }
  }

  std::int64_t flat(const std::array<int, 4>& idx) const {
    std::int64_t f = 0;
    for (int a = 0; a < naxes; ++a) f += idx[a] * stride[a];
    return f;
  }
  int spatial_axis_offset() const { return has_time ? 1 : 0; }
};

// Inclusive index window of grid points lying in K (with tolerance).
struct KWindow {
  std::array<int, 4> lo{};
  std::array<int, 4> hi{};

  KWindow(const TableAxes& ax, const Box& K) {
    const SampleGrid& g = ax.table.grid;
    if (!g.space.contains(K, 1e-9 * (1.0 + g.space.min_extent())))
      throw ConfigError("compute_norm: K " + K.str() + " outside sampled grid " +
                        g.space.str());
    int a = 0;
    if (ax.has_time) {
      lo[a] = 0;
      hi[a] = ax.points[a] - 1;
      ++a;
    }
    for (int s = 0; s < g.space.n; ++s, ++a) {
      const double h = g.h(s);
      lo[a] = std::max(0, static_cast<int>(std::ceil((K.lo[s] - g.space.lo[s]) / h - 1e-9)));
      hi[a] = std::min(g.cells[s],
                       static_cast<int>(std::floor((K.hi[s] - g.space.lo[s]) / h + 1e-9)));
      if (hi[a] < lo[a]) throw ConfigError("compute_norm: K too small for the grid step");
    }
  }
};

void for_each_index(const TableAxes& ax, const KWindow& win,
                    const std::function<void(const std::array<int, 4>&)>& fn) {
  std::array<int, 4> idx = win.lo;
  while (true) {
    fn(idx);
    int a = ax.naxes - 1;
    for (; a >= 0; --a) {
      if (++idx[a] <= win.hi[a]) break;
      idx[a] = win.lo[a];
    }
    if (a < 0) break;
  }
}

// Multi-indices over naxes axes with |alpha| == order (order <= 2).
std::vector<std::array<int, 4>> multi_indices(int naxes, int order) {
  std::vector<std::array<int, 4>> out;
  if (order == 0) {
    out.push_back({});
  } else if (order == 1) {
    for (int a = 0; a < naxes; ++a) {
      std::array<int, 4> m{};
      m[a] = 1;
      out.push_back(m);
    }
  } else {
    for (int a = 0; a < naxes; ++a)
      for (int b = a; b < naxes; ++b) {
        std::array<int, 4> m{};
        m[a] += 1;
        m[b] += 1;
        out.push_back(m);
      }
  }
  return out;
}

// Central-difference derivative d^alpha of one value entry at idx.
// Requires the stencil to fit; the caller shrinks the window accordingly.
double derivative_entry(const TableAxes& ax, std::array<int, 4> idx,
                        const std::array<int, 4>& alpha, int entry) {
  const auto value = [&](const std::array<int, 4>& i) {
    return ax.table.data[ax.flat(i) * ax.table.entries() + entry];
  };
  int first = -1, second = -1;
  for (int a = 0; a < ax.naxes; ++a) {
    if (alpha[a] >= 1 && first < 0) first = a;
    if (alpha[a] == 2 || (alpha[a] >= 1 && first != a)) second = a;
  }
  if (first < 0) return value(idx);
  if (second < 0) {
    auto p = idx, m = idx;
    ++p[first];
    --m[first];
    return (value(p) - value(m)) / (2.0 * ax.step[first]);
  }
  if (first == second) {
    auto p = idx, m = idx;
    ++p[first];
    --m[first];
    return (value(p) - 2.0 * value(idx) + value(m)) /
           (ax.step[first] * ax.step[first]);
  }
  auto pp = idx, pm = idx, mp = idx, mm = idx;
  ++pp[first], ++pp[second];
  ++pm[first], --pm[second];
  --mp[first], ++mp[second];
  --mm[first], --mm[second];
  return (value(pp) - value(pm) - value(mp) + value(mm)) /
         (4.0 * ax.step[first] * ax.step[second]);
}

KWindow shrink_for_stencil(const TableAxes& ax, KWindow win, const std::array<int, 4>& alpha) {
  for (int a = 0; a < ax.naxes; ++a)
    if (alpha[a] > 0) {
      win.lo[a] = std::max(win.lo[a], 1);
      win.hi[a] = std::min(win.hi[a], ax.points[a] - 2);
      if (win.hi[a] < win.lo[a])
        throw ConfigError("compute_norm: grid too coarse for the derivative stencil");
    }
  return win;
}

double trapezoid_weight(const TableAxes& ax, const KWindow& win, const std::array<int, 4>& idx) {
  double w = 1;
  for (int a = 0; a < ax.naxes; ++a) {
    double wa = ax.step[a];
    if (win.hi[a] == win.lo[a])
      wa = 1.0;  // collapsed axis (single slice): no integration
    else if (idx[a] == win.lo[a] || idx[a] == win.hi[a])
      wa *= 0.5;
    w *= wa;
  }
  return w;
}

}  // namespace

std::string norm_kind_name(NormKind kind) {
  switch (kind) {
    case NormKind::SupK: return "sup";
    case NormKind::Sobolev: return "H^k";
    case NormKind::WkInf: return "W^{k,inf}";
    case NormKind::MixedL1LInf: return "L1Linf";
  }
  return "?";
}

double compute_norm(const SampleTable& table, const NormRequest& req) {
  if (req.k > 2) throw ConfigError("compute_norm: derivative order k > 2 not supported");
  const TableAxes ax(table);
  const KWindow base(ax, req.K);
  const int entries = table.entries();

  switch (req.kind) {
    case NormKind::SupK: {
      double sup = 0;
      for_each_index(ax, base, [&](const std::array<int, 4>& idx) {
        sup = std::max(sup, table.max_abs_at(ax.flat(idx)));
      });
      return sup;
    }
    case NormKind::WkInf: {
      double best = 0;
      for (int order = 0; order <= req.k; ++order)
        for (const auto& alpha : multi_indices(ax.naxes, order)) {
          const KWindow win = shrink_for_stencil(ax, base, alpha);
          for_each_index(ax, win, [&](const std::array<int, 4>& idx) {
            for (int e = 0; e < entries; ++e)
              best = std::max(best, std::abs(derivative_entry(ax, idx, alpha, e)));
          });
        }
      return best;
    }
    case NormKind::Sobolev: {
      double sum = 0;
      for (int order = 0; order <= req.k; ++order)
        for (const auto& alpha : multi_indices(ax.naxes, order)) {
          const KWindow win = shrink_for_stencil(ax, base, alpha);
          for_each_index(ax, win, [&](const std::array<int, 4>& idx) {
            const double w = trapezoid_weight(ax, win, idx);
            for (int e = 0; e < entries; ++e) {
              const double v = derivative_entry(ax, idx, alpha, e);
              sum += w * v * v;
            }
          });
        }
      return std::sqrt(sum);
    }
    case NormKind::MixedL1LInf: {
      if (!ax.has_time)
        throw ConfigError("compute_norm: mixed L1-Linf norm needs a space-time field");
      const std::vector<double> sups = slice_sups(table, req.K);
      const double tau = table.grid.tau();
      double integral = 0;
      for (size_t i = 0; i < sups.size(); ++i) {
        const double w = (i == 0 || i + 1 == sups.size()) ? 0.5 : 1.0;
        integral += w * tau * sups[i];
      }
      return integral;
    }
  }
  throw ConfigError("compute_norm: unknown norm kind");
}

double compute_norm(const CoefficientNet& net, double eps, const NormRequest& req) {
  const bool need_time = req.kind == NormKind::MixedL1LInf || req.tcells > 0;
  if (need_time && req.t1 <= 0) throw ConfigError("compute_norm: horizon t1 required");
  const SampleGrid grid =
      need_time ? SampleGrid::spacetime(req.K, req.cells, 0.0, req.t1, std::max(1, req.tcells))
                : SampleGrid::spatial(req.K, req.cells, 0.0);
  return compute_norm(*net.sample(eps, grid), req);
}

std::vector<double> slice_sups(const SampleTable& table, const Box& K) {
  const TableAxes ax(table);
  if (!ax.has_time) throw ConfigError("slice_sups: table has no time axis");
  KWindow win(ax, K);
  std::vector<double> sups(table.grid.tpoints(), 0.0);
  for (int it = 0; it < table.grid.tpoints(); ++it) {
    win.lo[0] = win.hi[0] = it;
    double sup = 0;
    for_each_index(ax, win, [&](const std::array<int, 4>& idx) {
      sup = std::max(sup, table.max_abs_at(ax.flat(idx)));
    });
    sups[it] = sup;
  }
  return sups;
}

}  // namespace wavesys::genfunc
