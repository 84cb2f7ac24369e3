#include "conormhd/commutator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "conormhd/conormal.hpp"

namespace conormhd {

// ---- PhiPoly ---------------------------------------------------------------

PhiPoly::PhiPoly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

PhiPoly PhiPoly::monomial(int degree, double c) {
  std::vector<double> v(degree + 1, 0.0);
  v[degree] = c;
  return PhiPoly(std::move(v));
}

void PhiPoly::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

bool PhiPoly::is_zero(double tol) const {
  return std::all_of(c_.begin(), c_.end(), [tol](double v) { return std::abs(v) <= tol; });
}

double PhiPoly::eval_phi(double phi) const {
  double r = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * phi + *it;
  return r;
}

double PhiPoly::operator()(double y) const { return eval_phi(phi_weight(y)); }

PhiPoly PhiPoly::dy() const {
  // d/dy P(phi) = P'(phi) (1 - 2 phi + phi^2)
  std::vector<double> dp;
  for (std::size_t i = 1; i < c_.size(); ++i) dp.push_back(static_cast<double>(i) * c_[i]);
  return PhiPoly(std::move(dp)) * PhiPoly({1.0, -2.0, 1.0});
}

PhiPoly PhiPoly::divide_phi_power(int k) const {
  if (k == 0) return *this;
  double scale = 0.0;
  for (double v : c_) scale = std::max(scale, std::abs(v));
  for (int i = 0; i < k && i < static_cast<int>(c_.size()); ++i) {
    if (std::abs(c_[i]) > 1e-9 * std::max(scale, 1.0)) {
      throw std::domain_error("PhiPoly: not divisible by phi^" + std::to_string(k));
    }
  }
  if (static_cast<int>(c_.size()) <= k) return PhiPoly();
  return PhiPoly(std::vector<double>(c_.begin() + k, c_.end()));
}

PhiPoly& PhiPoly::operator+=(const PhiPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

PhiPoly& PhiPoly::operator-=(const PhiPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

PhiPoly operator*(const PhiPoly& a, const PhiPoly& b) {
  if (a.c_.empty() || b.c_.empty()) return PhiPoly();
  std::vector<double> r(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return PhiPoly(std::move(r));
}

PhiPoly operator*(double s, PhiPoly a) {
  for (double& v : a.c_) v *= s;
  a.trim();
  return a;
}

std::string PhiPoly::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0.0) continue;
    if (!first) os << (c_[i] < 0 ? " - " : " + ");
    else if (c_[i] < 0) os << "-";
    first = false;
    os << std::abs(c_[i]);
    if (i >= 1) os << " phi";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

// ---- DiffOp ----------------------------------------------------------------

DiffOp DiffOp::identity() {
  DiffOp op;
  op.coef_ = {PhiPoly::constant(1.0)};
  return op;
}

DiffOp DiffOp::dy_power(int k) {
  DiffOp op;
  op.coef_.assign(k + 1, PhiPoly());
  op.coef_[k] = PhiPoly::constant(1.0);
  return op;
}

DiffOp DiffOp::z2_power(int k) {
  DiffOp op = identity();
  for (int i = 0; i < k; ++i) op = op.left_z2();
  return op;
}

const PhiPoly& DiffOp::coef(int i) const {
  static const PhiPoly zero;
  if (i < 0 || i >= static_cast<int>(coef_.size())) return zero;
  return coef_[i];
}

void DiffOp::trim() {
  while (!coef_.empty() && coef_.back().is_zero()) coef_.pop_back();
}

bool DiffOp::is_zero(double tol) const {
  return std::all_of(coef_.begin(), coef_.end(), [tol](const PhiPoly& p) { return p.is_zero(tol); });
}

DiffOp DiffOp::left_dy() const {
  DiffOp r;
  r.coef_.assign(coef_.size() + 1, PhiPoly());
  for (std::size_t i = 0; i < coef_.size(); ++i) {
    r.coef_[i] += coef_[i].dy();
    r.coef_[i + 1] += coef_[i];
  }
  r.trim();
  return r;
}

DiffOp DiffOp::left_z2() const { return PhiPoly({0.0, 1.0}) * left_dy(); }

DiffOp DiffOp::right_dy() const {
  DiffOp r;
  r.coef_.assign(coef_.size() + 1, PhiPoly());
  for (std::size_t i = 0; i < coef_.size(); ++i) r.coef_[i + 1] = coef_[i];
  r.trim();
  return r;
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
  if (o.coef_.size() > coef_.size()) coef_.resize(o.coef_.size());
  for (std::size_t i = 0; i < o.coef_.size(); ++i) coef_[i] += o.coef_[i];
  trim();
  return *this;
}

DiffOp& DiffOp::operator-=(const DiffOp& o) {
  if (o.coef_.size() > coef_.size()) coef_.resize(o.coef_.size());
  for (std::size_t i = 0; i < o.coef_.size(); ++i) coef_[i] -= o.coef_[i];
  trim();
  return *this;
}

DiffOp operator*(const PhiPoly& a, const DiffOp& op) {
  DiffOp r = op;
  for (PhiPoly& c : r.coef_) c = a * c;
  r.trim();
  return r;
}

// ---- table -----------------------------------------------------------------

namespace {

struct BasisElement {
  DiffOp op;
  int top_order;
  int phi_power;  // top coefficient is phi^phi_power
  std::vector<PhiPoly>* target;
  int k;
};

// Greedy elimination from the highest derivative down; each order is owned
// by exactly one basis element.
void decompose(DiffOp rest, std::vector<BasisElement> basis, const char* what) {
  for (int ord = rest.order(); ord >= 0; --ord) {
    const PhiPoly c = rest.coef(ord);
    if (c.is_zero(1e-12)) continue;
    auto it = std::find_if(basis.begin(), basis.end(),
                           [ord](const BasisElement& b) { return b.top_order == ord; });
    if (it == basis.end()) {
      throw std::logic_error(std::string("commutator expansion of ") + what +
                             " left an unmatched order " + std::to_string(ord));
    }
    const PhiPoly q = c.divide_phi_power(it->phi_power);
    (*it->target)[it->k] += q;
    rest -= q * it->op;
  }
  if (!rest.is_zero(1e-9)) {
    throw std::logic_error(std::string("commutator expansion of ") + what + " did not close");
  }
}

}  // namespace

CommutatorTable commutator_table(int m) {
  if (m < 1 || m > kMaxConormalOrder) {
    throw std::invalid_argument("commutator_table: m must be in [1, " +
                                std::to_string(kMaxConormalOrder) + "]");
  }
  CommutatorTable t;
  t.m = m;
  for (auto* v : {&t.dy_left, &t.dy_right, &t.dyy_left1, &t.dyy_left2, &t.dyy_right1,
                  &t.dyy_right2, &t.inv_phi, &t.phi}) {
    v->assign(m, PhiPoly());
  }

  const DiffOp zm = DiffOp::z2_power(m);
  const DiffOp d1 = DiffOp::dy_power(1);

  // [Z2^m, d_y]
  {
    const DiffOp lhs = zm.right_dy() - zm.left_dy();
    std::vector<BasisElement> left, right;
    for (int k = 0; k < m; ++k) {
      const DiffOp zk = DiffOp::z2_power(k);
      left.push_back({zk.right_dy(), k + 1, k, &t.dy_left, k});
      right.push_back({zk.left_dy(), k + 1, k, &t.dy_right, k});
    }
    decompose(lhs, left, "[Z2^m, d_y] (left form)");
    decompose(lhs, right, "[Z2^m, d_y] (right form)");
  }

  // [Z2^m, d_y^2]; orders >= 2 are carried by the d_y^2 family, order 1 by
  // the k = 0 member of the d_y family.
  {
    const DiffOp lhs = zm.right_dy().right_dy() - zm.left_dy().left_dy();
    std::vector<BasisElement> left, right;
    for (int k = 0; k < m; ++k) {
      const DiffOp zk = DiffOp::z2_power(k);
      left.push_back({zk.right_dy().right_dy(), k + 2, k, &t.dyy_left2, k});
      right.push_back({zk.left_dy().left_dy(), k + 2, k, &t.dyy_right2, k});
    }
    left.push_back({d1, 1, 0, &t.dyy_left1, 0});
    right.push_back({d1, 1, 0, &t.dyy_right1, 0});
    decompose(lhs, left, "[Z2^m, d_y^2] (left form)");
    decompose(lhs, right, "[Z2^m, d_y^2] (right form)");
  }

  // With g = phi^-1 f:  [Z2^m, phi^-1] f = (Z2^m - (Z2 + phi')^m) g, and with
  // h = phi f:          [Z2^m, phi] f    = (Z2^m - (Z2 - phi')^m) h.
  {
    const PhiPoly dphi({1.0, -2.0, 1.0});
    DiffOp plus = DiffOp::identity();
    DiffOp minus = DiffOp::identity();
    for (int i = 0; i < m; ++i) {
      plus = plus.left_z2() + dphi * plus;
      minus = minus.left_z2() - dphi * minus;
    }
    std::vector<BasisElement> inv_basis, phi_basis;
    for (int k = 0; k < m; ++k) {
      inv_basis.push_back({DiffOp::z2_power(k), k, k, &t.inv_phi, k});
      phi_basis.push_back({DiffOp::z2_power(k), k, k, &t.phi, k});
    }
    decompose(zm - plus, inv_basis, "[Z2^m, phi^-1]");
    decompose(zm - minus, phi_basis, "[Z2^m, phi]");
  }
  return t;
}

const char* to_string(CommutatorIdentity id) {
  switch (id) {
    case CommutatorIdentity::dy_left: return "dy_left";
    case CommutatorIdentity::dy_right: return "dy_right";
    case CommutatorIdentity::dyy_left: return "dyy_left";
    case CommutatorIdentity::dyy_right: return "dyy_right";
    case CommutatorIdentity::inv_phi: return "inv_phi";
    case CommutatorIdentity::phi: return "phi";
  }
  return "?";
}

namespace {

Field z2_pow(const Field& f, int k) { return apply_spatial(f, 0, k); }

Field times_profile(const Field& f, const PhiPoly& p) {
  Field out = f;
  const Grid& g = f.grid();
  for (int j = 0; j < g.ny(); ++j) {
    const double w = p(g.y()[j]);
    for (int i = 0; i < g.nx(); ++i) out(i, j) *= w;
  }
  return out;
}

Field times_phi_power(const Field& f, int power) {
  Field out = f;
  const Grid& g = f.grid();
  for (int j = 0; j < g.ny(); ++j) {
    const double w = std::pow(phi_weight(g.y()[j]), power);
    for (int i = 0; i < g.nx(); ++i) out(i, j) *= w;
  }
  return out;
}

}  // namespace

double verify_commutator(const CommutatorTable& t, const Field& f, CommutatorIdentity id) {
  const int m = t.m;
  Field lhs(f.grid_ptr());
  Field rhs(f.grid_ptr());
  int first_row = 0;
  switch (id) {
    case CommutatorIdentity::dy_left:
    case CommutatorIdentity::dy_right: {
      const Field fy = ddy(f);
      lhs = z2_pow(fy, m) - ddy(z2_pow(f, m));
      for (int k = 0; k < m; ++k) {
        rhs += (id == CommutatorIdentity::dy_left) ? times_profile(z2_pow(fy, k), t.dy_left[k])
                                                   : times_profile(ddy(z2_pow(f, k)), t.dy_right[k]);
      }
      break;
    }
    case CommutatorIdentity::dyy_left:
    case CommutatorIdentity::dyy_right: {
      const Field fy = ddy(f);
      const Field fyy = ddy2(f);
      lhs = z2_pow(fyy, m) - ddy2(z2_pow(f, m));
      for (int k = 0; k < m; ++k) {
        if (id == CommutatorIdentity::dyy_left) {
          rhs += times_profile(z2_pow(fy, k), t.dyy_left1[k]);
          rhs += times_profile(z2_pow(fyy, k), t.dyy_left2[k]);
        } else {
          const Field zk = z2_pow(f, k);
          rhs += times_profile(ddy(zk), t.dyy_right1[k]);
          rhs += times_profile(ddy2(zk), t.dyy_right2[k]);
        }
      }
      break;
    }
    case CommutatorIdentity::inv_phi: {
      // f = phi g, so phi^-1 f = g.
      const Field& g = f;
      const Field phig = times_phi_power(g, 1);
      const Field zf = z2_pow(phig, m);
      lhs = z2_pow(g, m);
      const Grid& gr = f.grid();
      for (int j = 1; j < gr.ny(); ++j) {
        const double w = 1.0 / phi_weight(gr.y()[j]);
        for (int i = 0; i < gr.nx(); ++i) lhs(i, j) -= w * zf(i, j);
      }
      for (int k = 0; k < m; ++k) rhs += times_profile(z2_pow(g, k), t.inv_phi[k]);
      first_row = 1;
      break;
    }
    case CommutatorIdentity::phi: {
      const Field phif = times_phi_power(f, 1);
      lhs = z2_pow(phif, m) - times_phi_power(z2_pow(f, m), 1);
      for (int k = 0; k < m; ++k) rhs += times_profile(z2_pow(phif, k), t.phi[k]);
      break;
    }
  }
  const Grid& g = f.grid();
  double r = 0.0;
  for (int j = first_row; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) r = std::max(r, std::abs(lhs(i, j) - rhs(i, j)));
  }
  return r;
}

}  // namespace conormhd
