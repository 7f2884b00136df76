#pragma once

// Graded Cartan-type Lie algebras: divided power algebras O(m;n), special
// derivations, differential forms with the Lie derivative, the families
// W, S, H, K, the Melikian algebras and their minimal p-envelopes.

#include <map>
#include <string>
#include <vector>

#include "rlie/restricted.hpp"

namespace rlie {

/// The truncated divided power algebra O(m;n) over F_p, with monomials
/// x^(a), 0 <= a_i < p^{n_i}, indexed in lexicographic order of exponents.
class DividedPowers {
 public:
  DividedPowers(std::uint32_t p, std::vector<std::uint32_t> n);

  const PrimeField& field() const { return F_; }
  std::uint32_t p() const { return F_.p(); }
  std::size_t m() const { return n_.size(); }
  const std::vector<std::uint32_t>& n() const { return n_; }
  std::uint64_t bound(std::size_t i) const { return bounds_[i]; }
  std::size_t size() const { return size_; }
  /// Index of x^(a); throws InputError when a is out of bounds.
  std::size_t index(const std::vector<std::uint64_t>& a) const;
  const std::vector<std::uint64_t>& exponent(std::size_t idx) const { return exps_[idx]; }
  std::uint64_t stride(std::size_t i) const { return strides_[i]; }
  std::uint64_t degree(std::size_t idx) const;
  std::string label(std::size_t idx) const;

  friend bool operator==(const DividedPowers& a, const DividedPowers& b) {
    return a.F_ == b.F_ && a.n_ == b.n_;
  }

 private:
  PrimeField F_;
  std::vector<std::uint32_t> n_;
  std::vector<std::uint64_t> bounds_, strides_;
  std::size_t size_ = 1;
  std::vector<std::vector<std::uint64_t>> exps_;
};

/// Sparse element of O(m;n): monomial index -> coefficient.
using DPElement = SparseVec;

DPElement dp_monomial(const DividedPowers& O, const std::vector<std::uint64_t>& a, Coeff c = 1);
/// x^(a) x^(b) = prod_i C(a_i + b_i, a_i) x^(a+b), truncated.
DPElement dp_multiply(const DividedPowers& O, const DPElement& a, const DPElement& b);
/// d_i x^(a) = x^(a - e_i)
DPElement dp_partial(const DividedPowers& O, std::size_t i, const DPElement& f);
DPElement dp_add(const DividedPowers& O, const DPElement& a, const DPElement& b);
DPElement dp_scale(const DividedPowers& O, const DPElement& a, Coeff c);

/// D = sum_i coeffs[i] d_i, acting by D(x^(a)) = sum_i x^(a - e_i) D(x_i).
struct SpecialDerivation {
  std::vector<DPElement> coeffs;
};

SpecialDerivation partial_derivation(const DividedPowers& O, std::size_t i);
DPElement apply(const DividedPowers& O, const SpecialDerivation& D, const DPElement& f);
SpecialDerivation bracket(const DividedPowers& O, const SpecialDerivation& D, const SpecialDerivation& E);
DPElement divergence(const DividedPowers& O, const SpecialDerivation& D);
/// f D
SpecialDerivation multiply(const DividedPowers& O, const DPElement& f, const SpecialDerivation& D);

/// Coordinates in W(m;n): basis x^(a) d_i at index monomial * m + i.
Vec to_witt_coordinates(const DividedPowers& O, const SpecialDerivation& D);
SpecialDerivation from_witt_coordinates(const DividedPowers& O, const Vec& v);

/// sum over increasing index tuples of f_I dx_I
struct DifferentialForm {
  std::size_t degree = 0;
  std::map<std::vector<std::uint32_t>, DPElement> terms;
  bool is_zero() const;
  friend bool operator==(const DifferentialForm&, const DifferentialForm&) = default;
};

/// d f as a 1-form.
DifferentialForm exterior_derivative(const DividedPowers& O, const DPElement& f);
DifferentialForm lie_derivative(const DividedPowers& O, const SpecialDerivation& D, const DifferentialForm& w);
DifferentialForm form_multiply(const DividedPowers& O, const DPElement& f, const DifferentialForm& w);
/// dx_1 ^ ... ^ dx_m
DifferentialForm special_form(const DividedPowers& O);
/// dx_1 ^ dx_{r+1} + ... + dx_r ^ dx_{2r}
DifferentialForm hamiltonian_form(const DividedPowers& O);
/// sum_i (x_i dx_{i+r} - x_{i+r} dx_i) + dx_{2r+1}
DifferentialForm contact_form(const DividedPowers& O);

enum class CartanFamily { W, S, H, K, M };
std::string to_string(CartanFamily f);

struct CartanOptions {
  /// Run verify_lie (and verify_restricted when a p-map is attached) on
  /// the result.
  bool verify = true;
};

struct CartanAlgebra {
  CartanFamily family;
  DividedPowers O;
  LieAlgebra lie;
  /// p-map images; empty unless every n_i = 1.
  std::vector<Vec> pmap;
  /// RREF basis inside W(m;n) coordinates (empty for the Melikian family).
  SubspaceBasis embedding;

  bool restricted() const { return !pmap.empty(); }
  RestrictedLieAlgebra as_restricted() const;
};

/// W(m;n) with its Z^m grading (weight of x^(a) d_i is a - e_i).
CartanAlgebra witt(std::size_t m, const std::vector<std::uint32_t>& n, std::uint32_t p, const CartanOptions& o = {});
/// S(m;n)^(1), m >= 3.
CartanAlgebra special(std::size_t m, const std::vector<std::uint32_t>& n, std::uint32_t p, const CartanOptions& o = {});
/// H(2r;n)^(2), r >= 1.
CartanAlgebra hamiltonian(std::size_t two_r, const std::vector<std::uint32_t>& n, std::uint32_t p,
                          const CartanOptions& o = {});
/// K(2r+1;n)^(1), r >= 1.
CartanAlgebra contact(std::size_t two_r_plus_1, const std::vector<std::uint32_t>& n, std::uint32_t p,
                      const CartanOptions& o = {});
/// M(n1,n2) = O(2;n) + W(2;n) + W(2;n)~ in that basis order; p must be 5.
CartanAlgebra melikian(std::uint32_t n1, std::uint32_t n2, std::uint32_t p, const CartanOptions& o = {});

/// The p-th composition power of a special derivation of O(m;1), as a
/// special derivation.
SpecialDerivation composition_power(const DividedPowers& O, const SpecialDerivation& D);

struct CartanEnvelope {
  Envelope envelope;
  /// Labels of the adjoined derivations d_i^(p^j), 0 < j < n_i.
  std::vector<std::string> adjoined;
  /// Dimension of minimal_p_envelope computed independently.
  std::size_t minimal_dim = 0;
  bool agrees = false;
};

/// X + sum_i sum_{0<j<n_i} F d_i^{p^j} inside Der(X), realized on X, and
/// compared with minimal_p_envelope(X).
CartanEnvelope cartan_p_envelope(const CartanAlgebra& X);

}  // namespace rlie
