#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "wavesys/geometry.hpp"

namespace wavesys::genfunc {

// Polynomial in (t, x1, x2, x3). Axis 0 is time, axes 1..3 are space.
struct Monomial {
  double coef = 0;
  std::array<int, 4> exp{};

  int total_degree() const { return exp[0] + exp[1] + exp[2] + exp[3]; }
};

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Monomial> terms) : terms_(std::move(terms)) { normalize(); }

  static Polynomial constant(double v) {
    return v == 0 ? Polynomial() : Polynomial({Monomial{v, {0, 0, 0, 0}}});
  }
  static Polynomial variable(int axis, double coef = 1.0) {
    Monomial m{coef, {0, 0, 0, 0}};
    m.exp[axis] = 1;
    return Polynomial({m});
  }

  double eval(double t, const SpaceVec& x) const {
    double s = 0;
    for (const Monomial& m : terms_) {
      double v = m.coef;
      for (int k = 0; k < m.exp[0]; ++k) v *= t;
      for (int a = 0; a < 3; ++a)
        for (int k = 0; k < m.exp[a + 1]; ++k) v *= x[a];
      s += v;
    }
    return s;
  }

  int total_degree() const {
    int d = 0;
    for (const Monomial& m : terms_) d = std::max(d, m.total_degree());
    return d;
  }
  bool depends_on(int axis) const {
    for (const Monomial& m : terms_)
      if (m.exp[axis] > 0) return true;
    return false;
  }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return total_degree() == 0; }
  double constant_value() const { return terms_.empty() ? 0.0 : terms_.front().coef; }

  Polynomial derivative(int axis) const {
    std::vector<Monomial> out;
    for (const Monomial& m : terms_)
      if (m.exp[axis] > 0) {
        Monomial d = m;
        d.coef *= d.exp[axis];
        d.exp[axis] -= 1;
        out.push_back(d);
      }
    return Polynomial(std::move(out));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Monomial> out = a.terms_;
    out.insert(out.end(), b.terms_.begin(), b.terms_.end());
    return Polynomial(std::move(out));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<Monomial> out = a.terms_;
    for (Monomial m : b.terms_) {
      m.coef = -m.coef;
      out.push_back(m);
    }
    return Polynomial(std::move(out));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<Monomial> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const Monomial& ma : a.terms_)
      for (const Monomial& mb : b.terms_) {
        Monomial m;
        m.coef = ma.coef * mb.coef;
        for (int k = 0; k < 4; ++k) m.exp[k] = ma.exp[k] + mb.exp[k];
        out.push_back(m);
      }
    return Polynomial(std::move(out));
  }
  friend Polynomial operator*(double s, const Polynomial& a) {
    std::vector<Monomial> out = a.terms_;
    for (Monomial& m : out) m.coef *= s;
    return Polynomial(std::move(out));
  }

  Polynomial pow(int k) const {
    Polynomial r = Polynomial::constant(1.0);
    for (int i = 0; i < k; ++i) r = r * (*this);
    return r;
  }

  const std::vector<Monomial>& terms() const { return terms_; }

  std::string str() const;

 private:
  void normalize() {
    std::vector<Monomial> merged;
    for (const Monomial& m : terms_) {
      bool found = false;
      for (Monomial& o : merged)
        if (o.exp == m.exp) {
          o.coef += m.coef;
          found = true;
          break;
        }
      if (!found) merged.push_back(m);
    }
    terms_.clear();
    for (const Monomial& m : merged)
      if (m.coef != 0.0) terms_.push_back(m);
  }

  std::vector<Monomial> terms_;
};

}  // namespace wavesys::genfunc
