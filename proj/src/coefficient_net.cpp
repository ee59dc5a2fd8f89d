#include "wavesys/genfunc/coefficient_net.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "wavesys/errors.hpp"
#include "wavesys/linalg/eig.hpp"

namespace wavesys::genfunc {

namespace {

struct CacheKey {
  double eps;
  SampleGrid grid;

  auto tie() const {
    return std::make_tuple(eps, grid.space.n, grid.space.lo, grid.space.hi, grid.cells, grid.t0,
                           grid.t1, grid.tcells);
  }
  bool operator<(const CacheKey& o) const { return tie() < o.tie(); }
};

std::vector<double> merge_breaks(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out = a;
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double u, double v) { return std::abs(u - v) < 1e-13; }),
            out.end());
  return out;
}

}  // namespace

struct CoefficientNet::Impl {
  int n = 1;
  int rows = 1;
  int cols = 1;
  Evaluator eval;
  Provenance prov = Provenance::ClosedForm;
  bool time_dep = false;
  bool spd = false;
  std::string label;
  std::function<double(double)> width;  // eps -> kernel width, 0 if none
  std::array<std::vector<double>, 4> breaks;

  std::mutex mu;
  std::map<CacheKey, std::shared_ptr<const SampleTable>> cache;
};

CoefficientNet CoefficientNet::closed_form(int n, int rows, int cols, Evaluator ev,
                                           bool time_dependent, std::string label) {
  CoefficientNet net;
  net.impl_ = std::make_shared<Impl>();
  net.impl_->n = n;
  net.impl_->rows = rows;
  net.impl_->cols = cols;
  net.impl_->eval = std::move(ev);
  net.impl_->time_dep = time_dependent;
  net.impl_->label = std::move(label);
  return net;
}

CoefficientNet CoefficientNet::constant(int n, const Mat& value, std::string label) {
  return closed_form(
      n, value.rows(), value.cols(),
      [value](double, double, const SpaceVec&) { return value; }, false, std::move(label));
}

CoefficientNet CoefficientNet::constant_scalar(int n, double v, std::string label) {
  return constant(n, Mat::scalar(v), std::move(label));
}

CoefficientNet CoefficientNet::mollified(std::shared_ptr<const PiecewiseExpr> raw,
                                         const Mollifier& m, std::string label) {
  return mollified(std::vector<std::shared_ptr<const PiecewiseExpr>>{std::move(raw)}, 1, 1, m,
                   std::move(label));
}

CoefficientNet CoefficientNet::mollified(std::vector<std::shared_ptr<const PiecewiseExpr>> comps,
                                         int rows, int cols, const Mollifier& m,
                                         std::string label) {
  if (comps.empty() || static_cast<int>(comps.size()) != rows * cols)
    throw ShapeError("CoefficientNet::mollified: component count does not match shape");
  const int n = comps.front()->dim();
  bool time_dep = false;
  for (const auto& c : comps) {
    if (c->dim() != n) throw ShapeError("CoefficientNet::mollified: mixed dimensions");
    // Constructing a field validates mollifier/raw compatibility up front.
    MollifiedField probe(c, m, 0.5);
    time_dep = time_dep || c->depends_on_t();
  }

  CoefficientNet net;
  net.impl_ = std::make_shared<Impl>();
  net.impl_->n = n;
  net.impl_->rows = rows;
  net.impl_->cols = cols;
  net.impl_->prov = Provenance::MollifiedFromPiecewise;
  net.impl_->time_dep = time_dep;
  net.impl_->label = std::move(label);
  Mollifier mm = m;
  net.impl_->width = [mm](double eps) { return mm.support_radius(eps); };
  for (int axis = 0; axis < 4; ++axis) {
    std::vector<double> all;
    for (const auto& c : comps) all = merge_breaks(all, c->breakpoints(axis));
    net.impl_->breaks[axis] = std::move(all);
  }
  net.impl_->eval = [comps, mm, rows, cols](double eps, double t, const SpaceVec& x) {
    Mat v(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        v(r, c) = MollifiedField(comps[r * cols + c], mm, eps)(t, x);
    return v;
  };
  return net;
}

CoefficientNet CoefficientNet::piecewise_exact(std::shared_ptr<const PiecewiseExpr> raw,
                                               std::string label) {
  CoefficientNet net;
  net.impl_ = std::make_shared<Impl>();
  net.impl_->n = raw->dim();
  net.impl_->time_dep = raw->depends_on_t();
  net.impl_->label = std::move(label);
  for (int axis = 0; axis < 4; ++axis) net.impl_->breaks[axis] = raw->breakpoints(axis);
  net.impl_->eval = [raw](double, double t, const SpaceVec& x) {
    return Mat::scalar(raw->eval(t, x));
  };
  return net;
}

Mat CoefficientNet::eval(double eps, double t, const SpaceVec& x) const {
  if (!impl_) throw ConfigError("CoefficientNet: empty net");
  return impl_->eval(eps, t, x);
}

int CoefficientNet::dim() const { return impl_->n; }
int CoefficientNet::rows() const { return impl_->rows; }
int CoefficientNet::cols() const { return impl_->cols; }
Provenance CoefficientNet::provenance() const { return impl_->prov; }
bool CoefficientNet::time_dependent() const { return impl_->time_dep; }
bool CoefficientNet::spd() const { return impl_->spd; }
const std::string& CoefficientNet::label() const { return impl_->label; }

CoefficientNet& CoefficientNet::mark_spd(bool v) {
  if (impl_->rows != impl_->cols)
    throw ShapeError("CoefficientNet: SPD tag requires a square value");
  impl_->spd = v;
  return *this;
}

double CoefficientNet::feature_width(double eps) const {
  return impl_->width ? impl_->width(eps) : 0.0;
}

const std::vector<double>& CoefficientNet::breakpoints(int axis) const {
  return impl_->breaks[axis];
}

std::shared_ptr<const SampleTable> CoefficientNet::sample(double eps,
                                                          const SampleGrid& grid) const {
  const CacheKey key{eps, grid};
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto it = impl_->cache.find(key);
    if (it != impl_->cache.end()) return it->second;
  }

  auto table = std::make_shared<SampleTable>();
  table->grid = grid;
  table->rows = impl_->rows;
  table->cols = impl_->cols;
  table->data.resize(grid.total_points() * table->entries());

  const std::int64_t spts = grid.spatial_points();
  const int entries = table->entries();
  auto fill_slice = [&](int it) {
    std::array<int, 3> ix{};
    const double t = grid.t(it);
    for (std::int64_t p = 0; p < spts; ++p) {
      SpaceVec x{};
      for (int a = 0; a < grid.space.n; ++a) x[a] = grid.x(a, ix[a]);
      const Mat v = impl_->eval(eps, t, x);
      double* dst = table->data.data() + (it * spts + p) * entries;
      for (int k = 0; k < entries; ++k) dst[k] = v.data()[k];
      for (int a = grid.space.n - 1; a >= 0; --a) {
        if (++ix[a] <= grid.cells[a]) break;
        ix[a] = 0;
      }
    }
  };

  fill_slice(0);
  if (grid.has_time_axis()) {
    if (impl_->time_dep) {
      for (int it = 1; it <= grid.tcells; ++it) fill_slice(it);
    } else {
      // Static fields repeat the first slice.
      for (int it = 1; it <= grid.tcells; ++it)
        std::copy_n(table->data.begin(), spts * entries,
                    table->data.begin() + it * spts * entries);
    }
  }

  std::lock_guard<std::mutex> lock(impl_->mu);
  auto [it2, inserted] = impl_->cache.emplace(key, table);
  return it2->second;
}

namespace {

struct BinaryNetSpec {
  int rows, cols;
  std::function<Mat(const Mat&, const Mat&)> op;
};

CoefficientNet make_binary(const CoefficientNet& a, const CoefficientNet& b,
                           const BinaryNetSpec& spec, const std::string& label) {
  if (a.dim() != b.dim()) throw ShapeError("net arithmetic: spatial dimensions differ");
  CoefficientNet self = CoefficientNet::closed_form(
      a.dim(), spec.rows, spec.cols,
      [a, b, op = spec.op](double eps, double t, const SpaceVec& x) {
        return op(a.eval(eps, t, x), b.eval(eps, t, x));
      },
      a.time_dependent() || b.time_dependent(), label);
  return self;
}

}  // namespace

// Merges width/breakpoint metadata into a derived net; accumulates when
// called once per source.
struct NetMetaAccess {
  static void merge_from(CoefficientNet& net, const CoefficientNet& src) {
    auto impl = net.impl_;
    impl->prov = Provenance::DerivedByArithmetic;
    auto w0 = impl->width;
    auto ws = src.impl_->width;
    // Finest positive width wins: derivative steps and sampling windows of a
    // derived net must resolve the sharpest feature among its sources.
    if (ws)
      impl->width = w0 ? std::function<double(double)>([w0, ws](double eps) {
        const double a = w0(eps), b = ws(eps);
        if (a <= 0) return b;
        if (b <= 0) return a;
        return std::min(a, b);
      })
                       : ws;
    for (int axis = 0; axis < 4; ++axis)
      impl->breaks[axis] = merge_breaks(impl->breaks[axis], src.breakpoints(axis));
  }
  static void derive_meta(CoefficientNet& net, const CoefficientNet& a, const CoefficientNet* b) {
    merge_from(net, a);
    if (b) merge_from(net, *b);
  }
};

namespace {

CoefficientNet finish_derived(CoefficientNet net, const CoefficientNet& a,
                              const CoefficientNet& b) {
  NetMetaAccess::derive_meta(net, a, &b);
  return net;
}
CoefficientNet finish_derived_unary(CoefficientNet net, const CoefficientNet& a) {
  NetMetaAccess::derive_meta(net, a, nullptr);
  return net;
}

}  // namespace

CoefficientNet net_add(const CoefficientNet& a, const CoefficientNet& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("net_add: shape mismatch");
  return finish_derived(
      make_binary(a, b, {a.rows(), a.cols(), [](const Mat& u, const Mat& v) { return u + v; }},
                  a.label() + "+" + b.label()),
      a, b);
}

CoefficientNet net_sub(const CoefficientNet& a, const CoefficientNet& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("net_sub: shape mismatch");
  return finish_derived(
      make_binary(a, b, {a.rows(), a.cols(), [](const Mat& u, const Mat& v) { return u - v; }},
                  a.label() + "-" + b.label()),
      a, b);
}

CoefficientNet net_mul(const CoefficientNet& a, const CoefficientNet& b) {
  const bool a_scalar = a.is_scalar(), b_scalar = b.is_scalar();
  int rows, cols;
  std::function<Mat(const Mat&, const Mat&)> op;
  if (a_scalar && !b_scalar) {
    rows = b.rows();
    cols = b.cols();
    op = [](const Mat& u, const Mat& v) { return u.as_scalar() * v; };
  } else if (!a_scalar && b_scalar) {
    rows = a.rows();
    cols = a.cols();
    op = [](const Mat& u, const Mat& v) { return v.as_scalar() * u; };
  } else if (a.rows() == b.rows() && a.cols() == b.cols()) {
    rows = a.rows();
    cols = a.cols();
    op = [](const Mat& u, const Mat& v) {
      Mat w = u;
      for (int i = 0; i < w.rows(); ++i)
        for (int j = 0; j < w.cols(); ++j) w(i, j) *= v(i, j);
      return w;
    };
  } else {
    throw ShapeError("net_mul: shapes " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
  return finish_derived(make_binary(a, b, {rows, cols, op}, a.label() + "*" + b.label()), a, b);
}

CoefficientNet net_matmul(const CoefficientNet& a, const CoefficientNet& b) {
  if (a.cols() != b.rows()) throw ShapeError("net_matmul: inner dimensions differ");
  return finish_derived(
      make_binary(a, b,
                  {a.rows(), b.cols(), [](const Mat& u, const Mat& v) { return matmul(u, v); }},
                  a.label() + "." + b.label()),
      a, b);
}

CoefficientNet net_spd_inverse(const CoefficientNet& a) {
  if (!a.spd()) throw NotSpdError("net_spd_inverse: net is not tagged SPD");
  CoefficientNet net = net_transform(
      a,
      [](const Mat& m) {
        return linalg::spd_inverse(linalg::SymMatrix::from_mat(m)).to_mat();
      },
      a.rows(), a.cols(), "inv(" + a.label() + ")");
  net.mark_spd();
  return net;
}

CoefficientNet net_transform(const CoefficientNet& a, std::function<Mat(const Mat&)> fn,
                             int rows, int cols, std::string label) {
  CoefficientNet net = CoefficientNet::closed_form(
      a.dim(), rows, cols,
      [a, fn](double eps, double t, const SpaceVec& x) { return fn(a.eval(eps, t, x)); },
      a.time_dependent(), std::move(label));
  return finish_derived_unary(std::move(net), a);
}

CoefficientNet net_derivative(const CoefficientNet& a, int axis, FdStep step) {
  if (axis < 0 || axis > a.dim())
    throw ShapeError("net_derivative: axis " + std::to_string(axis) + " out of range");
  CoefficientNet net = CoefficientNet::closed_form(
      a.dim(), a.rows(), a.cols(),
      [a, axis, step](double eps, double t, const SpaceVec& x) {
        const double h = step.step(a.feature_width(eps));
        Mat hi, lo;
        if (axis == 0) {
          hi = a.eval(eps, t + h, x);
          lo = a.eval(eps, t - h, x);
        } else {
          SpaceVec xp = x, xm = x;
          xp[axis - 1] += h;
          xm[axis - 1] -= h;
          hi = a.eval(eps, t, xp);
          lo = a.eval(eps, t, xm);
        }
        hi -= lo;
        hi *= 1.0 / (2.0 * h);
        return hi;
      },
      axis == 0 ? true : a.time_dependent(), "d" + std::to_string(axis) + "(" + a.label() + ")");
  return finish_derived_unary(std::move(net), a);
}

CoefficientNet net_derived(int n, int rows, int cols, CoefficientNet::Evaluator ev,
                           bool time_dependent, std::span<const CoefficientNet> sources,
                           std::string label) {
  CoefficientNet net =
      CoefficientNet::closed_form(n, rows, cols, std::move(ev), time_dependent, std::move(label));
  for (const CoefficientNet& src : sources) NetMetaAccess::derive_meta(net, src, nullptr);
  return net;
}

CoefficientNet net_block(const CoefficientNet& a, int row0, int col0, int rows, int cols) {
  if (row0 < 0 || col0 < 0 || row0 + rows > a.rows() || col0 + cols > a.cols())
    throw ShapeError("net_block: block out of range");
  CoefficientNet net = CoefficientNet::closed_form(
      a.dim(), rows, cols,
      [a, row0, col0, rows, cols](double eps, double t, const SpaceVec& x) {
        const Mat v = a.eval(eps, t, x);
        Mat out(rows, cols);
        for (int i = 0; i < rows; ++i)
          for (int j = 0; j < cols; ++j) out(i, j) = v(row0 + i, col0 + j);
        return out;
      },
      a.time_dependent(), a.label() + "[block]");
  return finish_derived_unary(std::move(net), a);
}

}  // namespace wavesys::genfunc
