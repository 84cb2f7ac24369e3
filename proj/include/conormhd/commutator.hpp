#pragma once

#include <string>
#include <vector>

#include "conormhd/grid.hpp"

namespace conormhd {

/// Polynomial in phi = y / (1 + y). The set is closed under d/dy because
/// phi' = (1 - phi)^2.
class PhiPoly {
 public:
  PhiPoly() = default;
  explicit PhiPoly(std::vector<double> coeffs);
  static PhiPoly constant(double c) { return PhiPoly({c}); }
  static PhiPoly monomial(int degree, double c = 1.0);

  const std::vector<double>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero(double tol = 0.0) const;

  double eval_phi(double phi) const;
  /// Evaluates at the wall-normal coordinate y.
  double operator()(double y) const;

  PhiPoly dy() const;
  /// Exact division by phi^k; throws std::domain_error on a nonzero remainder.
  PhiPoly divide_phi_power(int k) const;

  PhiPoly& operator+=(const PhiPoly& o);
  PhiPoly& operator-=(const PhiPoly& o);
  friend PhiPoly operator+(PhiPoly a, const PhiPoly& b) { return a += b; }
  friend PhiPoly operator-(PhiPoly a, const PhiPoly& b) { return a -= b; }
  friend PhiPoly operator*(const PhiPoly& a, const PhiPoly& b);
  friend PhiPoly operator*(double s, PhiPoly a);

  std::string str() const;

 private:
  void trim();
  std::vector<double> c_;
};

/// Wall-normal differential operator sum_i a_i(phi) d_y^i.
class DiffOp {
 public:
  DiffOp() = default;
  static DiffOp identity();
  static DiffOp dy_power(int k);
  /// Z2^k = (phi d_y)^k.
  static DiffOp z2_power(int k);

  int order() const { return static_cast<int>(coef_.size()) - 1; }
  const PhiPoly& coef(int i) const;
  bool is_zero(double tol = 0.0) const;

  /// d_y o this
  DiffOp left_dy() const;
  /// Z2 o this
  DiffOp left_z2() const;
  /// this o d_y
  DiffOp right_dy() const;

  DiffOp& operator+=(const DiffOp& o);
  DiffOp& operator-=(const DiffOp& o);
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  friend DiffOp operator*(const PhiPoly& a, const DiffOp& op);

 private:
  void trim();
  std::vector<PhiPoly> coef_;
};

/// Coefficient families of the commutators of Z2^m with d_y, d_y^2, phi^-1
/// and phi, each family indexed by k = 0..m-1.
///
///   [Z2^m, d_y]     = sum dy_left[k] Z2^k d_y            = sum dy_right[k] d_y Z2^k
///   [Z2^m, d_y^2]   = sum (dyy_left1[k] Z2^k d_y + dyy_left2[k] Z2^k d_y^2)
///                   = sum (dyy_right1[k] d_y Z2^k + dyy_right2[k] d_y^2 Z2^k)
///   [Z2^m, phi^-1] f = sum inv_phi[k] Z2^k (phi^-1 f)
///   [Z2^m, phi] f    = sum phi[k] Z2^k (phi f)
struct CommutatorTable {
  int m = 0;
  std::vector<PhiPoly> dy_left, dy_right;
  std::vector<PhiPoly> dyy_left1, dyy_left2, dyy_right1, dyy_right2;
  std::vector<PhiPoly> inv_phi, phi;
};

/// Builds the table by symbolic expansion; m in [1, 3].
CommutatorTable commutator_table(int m);

enum class CommutatorIdentity { dy_left, dy_right, dyy_left, dyy_right, inv_phi, phi };

const char* to_string(CommutatorIdentity id);
inline constexpr CommutatorIdentity kAllCommutatorIdentities[] = {
    CommutatorIdentity::dy_left,  CommutatorIdentity::dy_right, CommutatorIdentity::dyy_left,
    CommutatorIdentity::dyy_right, CommutatorIdentity::inv_phi, CommutatorIdentity::phi};

/// Max-norm of (LHS - RHS) of one identity with discrete operators. For
/// inv_phi the input is the smooth factor g of f = phi g, and the wall row
/// (where phi^-1 is undefined) is excluded.
double verify_commutator(const CommutatorTable& table, const Field& f, CommutatorIdentity id);

}  // namespace conormhd
